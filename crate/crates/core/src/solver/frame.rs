use std::collections::VecDeque;

use serde::Serialize;

use super::{violation, SolverError, Supercomponent};
use crate::graph::{boundary, components_excluding, Distance, Graph, Path, Vertex, VertexSet};
use crate::intervals::Interval;

/// Coordinates relative to the backbone `R = r_1 .. r_{n-1}`.
#[derive(Clone, Debug, Serialize)]
pub struct Frame {
    pub r: Path,
    pub n: usize,
    pub c: u32,
    pub dist_r: Vec<Distance>,
    pub w: VertexSet,
    pub surface: VertexSet,
    /// `None` outside the component of `R`.
    pub a: Vec<Option<usize>>,
    pub b: Vec<Option<usize>>,
}

impl Frame {
    /// `r_i` for `1 <= i <= n-1`.
    pub fn r_at(&self, i: usize) -> Vertex {
        self.r.vertices()[i - 1]
    }

    pub fn in_play(&self, v: Vertex) -> bool {
        self.a[v].is_some()
    }

    /// Interval `(min a, max b)` over a nonempty set of in-play vertices.
    pub fn span(&self, set: &VertexSet) -> Interval {
        let a = set.iter().filter_map(|v| self.a[v]).min().expect("nonempty in-play set");
        let b = set.iter().filter_map(|v| self.b[v]).max().expect("nonempty in-play set");
        Interval { a, b }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentInfo {
    pub vertices: VertexSet,
    pub boundary: VertexSet,
    pub interval: Interval,
}

pub(crate) fn build_frame(g: &Graph, s: &VertexSet, t: &VertexSet, r: Path, c: u32) -> Result<Frame, SolverError> {
    let nv = g.vertex_count();
    let n = r.vertex_count() + 1;
    let mut dist = vec![Distance::INFINITE; nv];
    let mut a: Vec<Option<usize>> = vec![None; nv];
    let mut b: Vec<Option<usize>> = vec![None; nv];
    let mut queue = VecDeque::new();
    for (i, &v) in r.vertices().iter().enumerate() {
        dist[v] = Distance::ZERO;
        a[v] = Some(i + 1);
        b[v] = Some(i + 1);
        queue.push_back(v);
    }
    // Level-order BFS: every predecessor of a vertex is settled before it
    // leaves the queue, so least/greatest foot indices propagate exactly.
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if !dist[v].is_finite() {
                dist[v] = Distance::finite(du + 1);
                queue.push_back(v);
            }
            if dist[v].get() == Some(du + 1) {
                a[v] = Some(a[v].map_or(a[u].unwrap(), |x| x.min(a[u].unwrap())));
                b[v] = Some(b[v].map_or(b[u].unwrap(), |x| x.max(b[u].unwrap())));
            }
        }
    }
    for v in 0..nv {
        if dist[v].is_finite() && dist[v].at_least(c + 4) {
            if s.contains(v) {
                a[v] = Some(0);
            }
            if t.contains(v) {
                b[v] = Some(n);
            }
        }
    }
    let w = VertexSet::from_iter(nv, (0..nv).filter(|&v| dist[v].at_most(c)));
    let surface = VertexSet::from_iter(nv, (0..nv).filter(|&v| dist[v].get() == Some(c)));
    for v in w.iter() {
        let (av, bv, dv) = (a[v].unwrap(), b[v].unwrap(), dist[v].unwrap() as usize);
        if av > bv || bv - av > 2 * dv {
            return Err(violation("frame", format!("vertex {v}: a = {av}, b = {bv}, d(v,R) = {dv}")));
        }
    }
    Ok(Frame { r, n, c, dist_r: dist, w, surface, a, b })
}

/// Components of `G - W` inside the component of `R`, with their
/// attachment sets on the surface and their intervals.
pub(crate) fn component_intervals(g: &Graph, fr: &Frame) -> Vec<ComponentInfo> {
    let nv = g.vertex_count();
    let mut removed = fr.w.clone();
    for v in 0..nv {
        if !fr.in_play(v) {
            removed.insert(v);
        }
    }
    components_excluding(g, &removed)
        .into_iter()
        .map(|comp| {
            let bd = boundary(g, &comp, &fr.w);
            let interval = fr.span(&comp);
            ComponentInfo { vertices: comp, boundary: bd, interval }
        })
        .collect()
}

/// Components of `G[Z ∪ Δ]`, each required to contain a selected component.
pub(crate) fn supercomponents(
    g: &Graph,
    fr: &Frame,
    zd: &VertexSet,
    d_sets: &[&VertexSet],
) -> Result<Vec<Supercomponent>, SolverError> {
    let out: Vec<Supercomponent> = components_excluding(g, &zd.complement())
        .into_iter()
        .map(|vs| Supercomponent { interval: fr.span(&vs), vertices: vs })
        .collect();
    for (k, f) in out.iter().enumerate() {
        if !d_sets.iter().any(|d| d.is_subset(&f.vertices)) {
            return Err(violation("supercomponents", format!("supercomponent {k} holds no selected component")));
        }
    }
    Ok(out)
}
