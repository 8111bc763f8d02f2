//! Distance `d >= 3` through the `d`-th power of the graph.

use super::{solve_k2, SolverConfig, SolverError, SolverOutcome, SolverTrace};
use crate::graph::{power, shortest_path, Graph, Path, Vertex, VertexSet};
use crate::oracle::{is_ball_separator, verify_far_paths};

/// Runs the two-path solver on `G^d` and maps the answer back to `G`:
/// power-graph paths are expanded edge by edge along shortest paths of `G`
/// and loop-erased; a centre keeps its vertex with radius `d * (8ℓ+c+2)`.
/// Both outcomes are verified in `G` before returning.
pub fn solve_general(
    g: &Graph,
    s: &VertexSet,
    t: &VertexSet,
    d: u32,
    cfg: &SolverConfig,
) -> (Result<SolverOutcome, SolverError>, SolverTrace) {
    if d < 3 {
        return (Err(SolverError::InvalidConfig(format!("distance {d} must be at least 3"))), SolverTrace::default());
    }
    let gp = power(g, d);
    let (res, trace) = solve_k2(&gp, s, t, cfg);
    let mapped = res.and_then(|out| match out {
        SolverOutcome::NoPath => Ok(SolverOutcome::NoPath),
        SolverOutcome::Center { vertex, radius } => {
            let radius = radius * d;
            if is_ball_separator(g, s, t, &[vertex], radius).separates() {
                Ok(SolverOutcome::Center { vertex, radius })
            } else {
                Err(SolverError::VerificationFailed(format!("ball of radius {radius} around {vertex} does not separate in G")))
            }
        }
        SolverOutcome::TwoFarPaths { paths: [p, q] } => {
            let p = expand(g, &p)?;
            let q = expand(g, &q)?;
            verify_far_paths(g, s, t, &[p.clone(), q.clone()], d).map_err(SolverError::VerificationFailed)?;
            Ok(SolverOutcome::TwoFarPaths { paths: [p, q] })
        }
    });
    (mapped, trace)
}

fn expand(g: &Graph, p: &Path) -> Result<Path, SolverError> {
    let nv = g.vertex_count();
    let none = VertexSet::new(nv);
    let mut walk: Vec<Vertex> = vec![p.first()];
    for w in p.vertices().windows(2) {
        let leg = shortest_path(g, &VertexSet::singleton(nv, w[0]), &VertexSet::singleton(nv, w[1]), &none)
            .ok_or_else(|| SolverError::VerificationFailed(format!("power edge {}-{} has no path in G", w[0], w[1])))?;
        walk.extend_from_slice(&leg.vertices()[1..]);
    }
    // Loop erasure: on revisiting a vertex, cut back to its first visit.
    let mut pos = vec![usize::MAX; nv];
    let mut simple: Vec<Vertex> = Vec::with_capacity(walk.len());
    for v in walk {
        if pos[v] != usize::MAX {
            for u in simple.drain(pos[v] + 1..) {
                pos[u] = usize::MAX;
            }
        } else {
            pos[v] = simple.len();
            simple.push(v);
        }
    }
    Path::new(g, simple).map_err(|e| SolverError::VerificationFailed(e.to_string()))
}
