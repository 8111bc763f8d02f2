//! Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::graph::{Graph, Path, Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emphasis {
    Bold,
    /// First of two alternating solver paths.
    Odd,
    /// Second of two alternating solver paths.
    Even,
}

impl Emphasis {
    fn attrs(self) -> &'static str {
        match self {
            Emphasis::Bold => "style=bold, penwidth=3",
            Emphasis::Odd => "style=dashed, penwidth=3, color=firebrick",
            Emphasis::Even => "style=dashed, penwidth=3, color=royalblue",
        }
    }
}

/// Undirected DOT text. Nodes and edges appear in id order; an edge on
/// several highlighted paths takes the style of the last one.
pub fn to_dot(g: &Graph, s: &VertexSet, t: &VertexSet, paths: &[(Path, Emphasis)], labels: &[(Vertex, String)]) -> String {
    let mut edge_style: BTreeMap<(Vertex, Vertex), Emphasis> = BTreeMap::new();
    for (p, e) in paths {
        for w in p.vertices().windows(2) {
            edge_style.insert((w[0].min(w[1]), w[0].max(w[1])), *e);
        }
    }
    let labels: BTreeMap<Vertex, &str> = labels.iter().map(|(v, l)| (*v, l.as_str())).collect();

    let mut out = String::from("graph G {\n  node [shape=circle, fontsize=10];\n");
    for v in g.vertices() {
        let mut attrs = Vec::new();
        match (s.contains(v), t.contains(v)) {
            (true, true) => attrs.push("shape=doublecircle, style=filled, fillcolor=gold".to_string()),
            (true, false) => attrs.push("shape=box, style=filled, fillcolor=palegreen".to_string()),
            (false, true) => attrs.push("shape=diamond, style=filled, fillcolor=lightsalmon".to_string()),
            (false, false) => {}
        }
        if let Some(l) = labels.get(&v) {
            attrs.push(format!("xlabel=\"{}\"", l.replace('"', "\\\"")));
        }
        if attrs.is_empty() {
            writeln!(out, "  {v};").unwrap();
        } else {
            writeln!(out, "  {v} [{}];", attrs.join(", ")).unwrap();
        }
    }
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
    edges.sort_unstable();
    for (u, v) in edges {
        match edge_style.get(&(u, v)) {
            Some(e) => writeln!(out, "  {u} -- {v} [{}];", e.attrs()).unwrap(),
            None => writeln!(out, "  {u} -- {v};").unwrap(),
        }
    }
    out.push_str("}\n");
    out
}
