//! Plain-text instance format.
//!
//! ```text
//! # comment
//! p <n> <m>
//! e <u> <v>      (m lines, 0-based ids)
//! s <v>          (optional, members of S)
//! t <v>          (optional, members of T)
//! ```
//!
//! [`write_instance`] emits the canonical form: header, edges ascending with
//! `u < v`, then `s` lines, then `t` lines. Parsing and re-serializing a
//! canonical file reproduces it byte for byte.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("missing `p <n> <m>` header")]
    MissingHeader,
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCount { declared: usize, found: usize },
}

/// A graph together with its terminal sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub s: VertexSet,
    pub t: VertexSet,
}

impl Instance {
    pub fn new(graph: Graph, s: VertexSet, t: VertexSet) -> Self {
        Instance { graph, s, t }
    }

    pub fn from_lists(graph: Graph, s: &[Vertex], t: &[Vertex]) -> Self {
        let n = graph.vertex_count();
        Instance {
            s: VertexSet::from_iter(n, s.iter().copied()),
            t: VertexSet::from_iter(n, t.iter().copied()),
            graph,
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut s = Vec::new();
    let mut t = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut fields = content.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        let nums = fields
            .map(|f| {
                f.parse::<usize>().map_err(|_| FormatError::Syntax {
                    line,
                    message: format!("expected a nonnegative integer, found `{f}`"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let arity = |want: usize| {
            if nums.len() == want {
                Ok(())
            } else {
                Err(FormatError::Syntax {
                    line,
                    message: format!("`{tag}` takes {want} arguments, found {}", nums.len()),
                })
            }
        };
        match tag {
            "p" => {
                arity(2)?;
                if header.is_some() {
                    return Err(FormatError::Syntax { line, message: "duplicate header".into() });
                }
                header = Some((nums[0], nums[1]));
            }
            "e" | "s" | "t" => {
                let Some((n, _)) = header else {
                    return Err(FormatError::Syntax {
                        line,
                        message: format!("`{tag}` line before the `p` header"),
                    });
                };
                let check = |v: Vertex| {
                    if v < n {
                        Ok(v)
                    } else {
                        Err(FormatError::Graph {
                            line,
                            source: GraphError::VertexOutOfRange { vertex: v, vertex_count: n },
                        })
                    }
                };
                if tag == "e" {
                    arity(2)?;
                    let (u, v) = (check(nums[0])?, check(nums[1])?);
                    if u == v {
                        return Err(FormatError::Graph { line, source: GraphError::SelfLoop(u) });
                    }
                    edges.push((u, v, line));
                } else {
                    arity(1)?;
                    let v = check(nums[0])?;
                    if tag == "s" { s.push(v) } else { t.push(v) }
                }
            }
            other => {
                return Err(FormatError::Syntax {
                    line,
                    message: format!("unknown line type `{other}`"),
                })
            }
        }
    }

    let (n, m) = header.ok_or(FormatError::MissingHeader)?;
    if edges.len() != m {
        return Err(FormatError::EdgeCount { declared: m, found: edges.len() });
    }
    let mut seen = std::collections::HashSet::new();
    for &(u, v, line) in &edges {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(FormatError::Graph {
                line,
                source: GraphError::DuplicateEdge(u.min(v), u.max(v)),
            });
        }
    }
    let graph = Graph::from_edges(n, edges.iter().map(|&(u, v, _)| (u, v)))
        .map_err(|source| FormatError::Graph { line: 0, source })?;
    Ok(Instance::from_lists(graph, &s, &t))
}

pub fn write_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut out = String::new();
    writeln!(out, "p {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    for v in inst.s.iter() {
        writeln!(out, "s {v}").unwrap();
    }
    for v in inst.t.iter() {
        writeln!(out, "t {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_terminals() {
        let text = "# a path\np 3 2\ne 0 1\ne 1 2 # trailing\n\ns 0\nt 2\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.graph.edge_count(), 2);
        assert_eq!(inst.s.to_vec(), vec![0]);
        assert_eq!(inst.t.to_vec(), vec![2]);
        assert_eq!(write_instance(&inst), "p 3 2\ne 0 1\ne 1 2\ns 0\nt 2\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_instance("p 3 1\ne 0 7\n").unwrap_err();
        assert!(matches!(err, FormatError::Graph { line: 2, .. }));
        let err = parse_instance("p 3 1\nx 1\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }));
        let err = parse_instance("e 0 1\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 1, .. }));
        let err = parse_instance("p 3 2\ne 0 1\ne 1 0\n").unwrap_err();
        assert!(matches!(err, FormatError::Graph { line: 3, source: GraphError::DuplicateEdge(0, 1) }));
        assert_eq!(parse_instance("p 2 2\ne 0 1\n"), Err(FormatError::EdgeCount { declared: 2, found: 1 }));
        assert_eq!(parse_instance("# nothing\n"), Err(FormatError::MissingHeader));
        let err = parse_instance("p 2 1\ne 1 1\n").unwrap_err();
        assert!(matches!(err, FormatError::Graph { line: 2, source: GraphError::SelfLoop(1) }));
    }

    #[test]
    fn canonicalizes_edge_order() {
        let inst = parse_instance("p 3 2\ne 2 1\ne 1 0\n").unwrap();
        assert_eq!(write_instance(&inst), "p 3 2\ne 0 1\ne 1 2\n");
    }
}
