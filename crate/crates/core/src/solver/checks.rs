//! Trace-level restatements of the structural claims behind assembly.

use serde::Serialize;

use super::SolverTrace;
use crate::graph::{bfs, set_distance, Graph};
use crate::intervals::IntervalFamily;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceViolation {
    pub claim: &'static str,
    pub detail: String,
}

fn bad(claim: &'static str, detail: String) -> TraceViolation {
    TraceViolation { claim, detail }
}

/// Re-checks a trace that reached assembly:
/// - attachment sets are nonempty surface subsets;
/// - component intervals are `16ℓ`-powerful;
/// - `d(D_i, D_j) >= 4ℓ - 2c + 2` whenever `j >= i + 3`;
/// - distinct supercomponents are at distance at least 5;
/// - every access path is at distance at least 3 from every supercomponent
///   other than its own.
pub fn check_trace(g: &Graph, trace: &SolverTrace) -> Vec<TraceViolation> {
    let mut out = Vec::new();
    let (Some(cfg), Some(fr)) = (trace.config.as_ref(), trace.frame.as_ref()) else {
        out.push(bad("trace", "no frame recorded".into()));
        return out;
    };
    let (ell, c) = (cfg.ell as usize, cfg.c as i64);

    for (k, comp) in trace.components.iter().enumerate() {
        if comp.boundary.is_empty() || !comp.boundary.is_subset(&fr.surface) {
            out.push(bad("attachment", format!("component {k} attaches outside the surface")));
        }
    }

    let family = IntervalFamily::new(fr.n, trace.components.iter().map(|c| c.interval).collect());
    match family.map(|f| f.uncovered_offsets(16 * ell)) {
        Ok(Ok(holes)) if holes.is_empty() => {}
        Ok(Ok(holes)) => out.push(bad("powerful", format!("window at offset {} uncovered", holes[0]))),
        other => out.push(bad("powerful", format!("{other:?}"))),
    }

    let d_sets: Vec<Vec<usize>> =
        trace.selected_components.iter().map(|&i| trace.components[i].vertices.to_vec()).collect();
    let floor = 4 * ell as i64 - 2 * c + 2;
    for i in 0..d_sets.len() {
        for j in i + 3..d_sets.len() {
            let d = set_distance(g, &d_sets[i], &d_sets[j]).expect("components are nonempty");
            if d.get().is_some_and(|d| (d as i64) < floor) {
                out.push(bad("spread", format!("d(D_{}, D_{}) = {d} < {floor}", i + 1, j + 1)));
            }
        }
    }

    let mut label = vec![usize::MAX; g.vertex_count()];
    for (k, f) in trace.supercomponents.iter().enumerate() {
        for v in f.vertices.iter() {
            label[v] = k;
        }
    }
    for (k, f) in trace.supercomponents.iter().enumerate() {
        let near = bfs(g, f.vertices.iter(), None, Some(4));
        if let Some(v) = (0..g.vertex_count()).find(|&v| near[v].is_finite() && label[v] != usize::MAX && label[v] != k) {
            out.push(bad("separation", format!("supercomponents {k} and {} within distance 4 (at {v})", label[v])));
        }
    }

    if let Some(pieces) = &trace.pieces {
        let s = trace.selected_supercomponents.len();
        let mut access = Vec::new();
        for (i, &owner) in trace.selected_supercomponents.iter().enumerate() {
            if i > 0 {
                access.push((format!("A_{}", i + 1), owner, &pieces.a[i]));
            }
            if i + 1 < s {
                access.push((format!("B_{}", i + 1), owner, &pieces.b[i]));
            }
        }
        for (name, owner, path) in access {
            let near = bfs(g, path.vertices().iter().copied(), None, Some(2));
            for (k, f) in trace.supercomponents.iter().enumerate() {
                if k != owner && f.vertices.iter().any(|v| near[v].is_finite()) {
                    out.push(bad("clearance", format!("{name} within distance 2 of supercomponent {k}")));
                }
            }
        }
    }
    out
}
