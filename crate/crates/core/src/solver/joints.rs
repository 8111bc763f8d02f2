//! Joints: small connected sets near the surface touching the attachment
//! sets of several selected components.
//!
//! `X` is a joint when it induces a connected subgraph, every member inside
//! `W` lies within `(|X|-1)/2` of the surface, and it meets the attachment
//! sets of at least two selected components with `|X| <= 3`, or at least
//! three with `|X| <= 8`.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::{Frame, SolverError};
use crate::graph::{bfs, Graph, Vertex, VertexSet};

pub const MAX_JOINT: usize = 8;

pub struct JointInput<'a> {
    pub graph: &'a Graph,
    /// Vertices that may appear in a joint.
    pub pool: &'a VertexSet,
    /// Selected components whose attachment set holds each vertex.
    pub owners: &'a [Vec<usize>],
    /// Distance to the surface for vertices of `W`; `None` outside `W`.
    pub depth: &'a [Option<u32>],
}

impl JointInput<'_> {
    pub fn is_joint(&self, x: &[Vertex]) -> bool {
        let k = x.len();
        if k == 0 || k > MAX_JOINT {
            return false;
        }
        if x.iter().any(|&v| self.depth[v].is_some_and(|d| 2 * d as usize > k - 1)) {
            return false;
        }
        let mut touched: Vec<usize> = x.iter().flat_map(|&v| self.owners[v].iter().copied()).collect();
        touched.sort_unstable();
        touched.dedup();
        (touched.len() >= 2 && k <= 3) || touched.len() >= 3
    }
}

/// Union of all joints inside the pool. Connected sets are enumerated once
/// each: members are ranked with attachment vertices first, and a set is
/// grown only from its lowest-ranked member, which must be an attachment
/// vertex since every joint contains one.
pub fn enumerate_joints(input: &JointInput, budget: u64) -> Result<VertexSet, SolverError> {
    let g = input.graph;
    let nv = g.vertex_count();
    let mut order: Vec<Vertex> = input.pool.iter().filter(|&v| !input.owners[v].is_empty()).collect();
    let seeds = order.len();
    order.extend(input.pool.iter().filter(|&v| input.owners[v].is_empty()));
    let mut rank = vec![u32::MAX; nv];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i as u32;
    }

    let used = AtomicU64::new(0);
    let over = AtomicBool::new(false);
    let parts: Vec<Vec<Vertex>> = order[..seeds]
        .par_iter()
        .map(|&seed| {
            let mut esu = Esu { input, rank: &rank, seed_rank: rank[seed], used: &used, over: &over, budget, hits: Vec::new() };
            let ext: Vec<Vertex> = g.neighbors(seed).iter().copied().filter(|&u| rank[u] != u32::MAX && rank[u] > rank[seed]).collect();
            esu.grow(&mut vec![seed], ext);
            esu.hits
        })
        .collect();
    if over.load(Ordering::Relaxed) {
        return Err(SolverError::EnumerationBudget { budget });
    }
    Ok(VertexSet::from_iter(nv, parts.into_iter().flatten()))
}

struct Esu<'a> {
    input: &'a JointInput<'a>,
    rank: &'a [u32],
    seed_rank: u32,
    used: &'a AtomicU64,
    over: &'a AtomicBool,
    budget: u64,
    hits: Vec<Vertex>,
}

impl Esu<'_> {
    fn grow(&mut self, sub: &mut Vec<Vertex>, mut ext: Vec<Vertex>) {
        if self.over.load(Ordering::Relaxed) {
            return;
        }
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.over.store(true, Ordering::Relaxed);
            return;
        }
        if self.input.is_joint(sub) {
            self.hits.extend(sub.iter().copied());
        }
        if sub.len() == MAX_JOINT {
            return;
        }
        let g = self.input.graph;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in g.neighbors(w) {
                if self.rank[u] == u32::MAX || self.rank[u] <= self.seed_rank || u == w {
                    continue;
                }
                // Exclusive neighbours only: not in the set, not next to it.
                if sub.contains(&u) || g.neighbors(u).iter().any(|x| sub.contains(x)) || next.contains(&u) {
                    continue;
                }
                next.push(u);
            }
            sub.push(w);
            self.grow(sub, next);
            sub.pop();
        }
    }
}

/// Joints of the selected components `D_1..D_t`, given their attachment
/// sets. Candidates are restricted to vertices near the surface (depth at
/// most 3 inside `W`) that lie within distance 7 of two different
/// attachment sets, which every member of a joint does.
pub(crate) fn compute_joints(
    g: &Graph,
    fr: &Frame,
    d_boundaries: &[&VertexSet],
    budget: u64,
) -> Result<VertexSet, SolverError> {
    let nv = g.vertex_count();
    if d_boundaries.len() < 2 {
        return Ok(VertexSet::new(nv));
    }
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut near = vec![0usize; nv];
    for (i, bd) in d_boundaries.iter().enumerate() {
        for v in bd.iter() {
            owners[v].push(i);
        }
        for (v, d) in bfs(g, bd.iter(), None, Some(MAX_JOINT as u32 - 1)).iter().enumerate() {
            if d.is_finite() {
                near[v] += 1;
            }
        }
    }
    let to_surface = bfs(g, fr.surface.iter(), None, Some(3));
    let depth: Vec<Option<u32>> = (0..nv).map(|v| fr.w.contains(v).then(|| to_surface[v].get().unwrap_or(u32::MAX))).collect();
    let pool = VertexSet::from_iter(
        nv,
        (0..nv).filter(|&v| fr.in_play(v) && near[v] >= 2 && depth[v].is_none_or(|d| d <= 3)),
    );
    enumerate_joints(&JointInput { graph: g, pool: &pool, owners: &owners, depth: &depth }, budget)
}
