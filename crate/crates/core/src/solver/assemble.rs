use serde::Serialize;

use super::{violation, Frame, SolverError, Supercomponent};
use crate::graph::{set_distance, shortest_path, Graph, Path, Vertex, VertexSet};

/// Pieces threaded into the two output paths. Index `i` of `a`, `b`, `q`
/// belongs to the `(i+1)`-th selected supercomponent.
#[derive(Clone, Debug, Serialize)]
pub struct PathPieces {
    /// `A_1` is one deep S vertex; `A_i` runs from `r_{a_i}` into `H_i`.
    pub a: Vec<Path>,
    /// `B_i` runs from `H_i` to `r_{b_i}`; `B_s` is one deep T vertex.
    pub b: Vec<Path>,
    /// `Q_i` joins the ends of `A_i` and `B_i` inside `H_i`.
    pub q: Vec<Path>,
    /// Backbone stretches `(b_i, a_{i+2})` for `i = 0..s-1`, with
    /// `b_0 = 1` and `a_{s+1} = n-1`.
    pub segments: Vec<(usize, usize)>,
    pub odd_union: VertexSet,
    pub even_union: VertexSet,
}

fn backbone_piece(fr: &Frame, i: usize, j: usize) -> &[Vertex] {
    let (lo, hi) = (i.min(j), i.max(j));
    &fr.r.vertices()[lo - 1..hi]
}

pub(crate) fn assemble(
    g: &Graph,
    s: &VertexSet,
    t: &VertexSet,
    fr: &Frame,
    h: &[&Supercomponent],
    c: u32,
) -> Result<(PathPieces, Path, Path), SolverError> {
    let nv = g.vertex_count();
    let n = fr.n;
    let count = h.len();
    let empty = VertexSet::new(nv);
    let to_r = |set: &VertexSet, idx: usize, what: &str, i: usize| -> Result<Path, SolverError> {
        let target = VertexSet::singleton(nv, fr.r_at(idx));
        let p = shortest_path(g, set, &target, &empty)
            .ok_or_else(|| violation("assemble", format!("{what}_{i}: no path to r_{idx}")))?;
        if p.len() > c as usize + 1 {
            return Err(violation("assemble", format!("{what}_{i} has length {} > c+1", p.len())));
        }
        Ok(p)
    };

    let (mut a_paths, mut b_paths, mut q_paths) = (Vec::new(), Vec::new(), Vec::new());
    for (i, hi) in h.iter().enumerate() {
        let label = i + 1;
        let a = if i == 0 {
            let v = hi.vertices.iter().find(|&v| fr.a[v] == Some(0));
            Path::single(v.ok_or_else(|| violation("assemble", "H_1 has no vertex with a(v) = 0"))?)
        } else {
            to_r(&hi.vertices, hi.interval.a, "A", label)?.reversed()
        };
        let b = if i + 1 == count {
            let v = hi.vertices.iter().find(|&v| fr.b[v] == Some(n));
            let v = v.ok_or_else(|| violation("assemble", "H_s has no vertex with b(v) = n"))?;
            if !t.contains(v) {
                return Err(violation("assemble", format!("B_s vertex {v} is not in T")));
            }
            Path::single(v)
        } else {
            to_r(&hi.vertices, hi.interval.b, "B", label)?
        };
        let (x, y) = (a.last(), b.first());
        let q = shortest_path(g, &VertexSet::singleton(nv, x), &VertexSet::singleton(nv, y), &hi.vertices.complement())
            .ok_or_else(|| violation("assemble", format!("Q_{label}: ends {x}, {y} not joined inside H_{label}")))?;
        a_paths.push(a);
        b_paths.push(b);
        q_paths.push(q);
    }

    let a_idx = |i: usize| if i == count + 1 { n - 1 } else { h[i - 1].interval.a };
    let b_idx = |i: usize| if i == 0 { 1 } else { h[i - 1].interval.b };
    let segments: Vec<(usize, usize)> = (0..count).map(|i| (b_idx(i), a_idx(i + 2))).collect();

    let mut unions = [VertexSet::new(nv), VertexSet::new(nv)];
    for i in 0..count {
        let u = &mut unions[(i + 1) % 2];
        for p in [&a_paths[i], &q_paths[i], &b_paths[i]] {
            for &v in p.vertices() {
                u.insert(v);
            }
        }
    }
    for (i, &(x, y)) in segments.iter().enumerate() {
        for &v in backbone_piece(fr, x, y) {
            unions[i % 2].insert(v);
        }
    }
    let [even_union, odd_union] = unions;

    let extract = |u: &VertexSet, name: &str| {
        shortest_path(g, s, t, &u.complement())
            .ok_or_else(|| violation("assemble", format!("{name} union holds no S–T path")))
    };
    let p_odd = extract(&odd_union, "odd")?;
    let p_even = extract(&even_union, "even")?;
    let d = set_distance(g, p_odd.vertices(), p_even.vertices()).expect("nonempty paths");
    if !d.at_least(3) {
        return Err(violation("assemble", format!("assembled paths at distance {d}")));
    }
    let pieces = PathPieces { a: a_paths, b: b_paths, q: q_paths, segments, odd_union, even_union };
    Ok((pieces, p_odd, p_even))
}
