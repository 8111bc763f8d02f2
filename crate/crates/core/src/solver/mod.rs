//! Constructive two-path coarse Menger: either two S–T paths at distance at
//! least three, or a vertex whose radius-`8ℓ+c+2` ball meets every S–T path.
//!
//! The pipeline follows a backbone `R` (a shortest S–T path), classifies the
//! components living beyond distance `c` from `R` by the stretch of `R` they
//! shadow, selects well-spread families of them with the interval machinery,
//! glues nearby ones together through small joints, and threads two paths
//! alternately through the selected pieces and the gaps of `R`. Every step
//! that would otherwise assume "no small ball separates" runs an explicit
//! separator check and returns the centre when it succeeds.

mod assemble;
mod checks;
mod frame;
mod general;
mod joints;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{ball, set_distance, shortest_path, Graph, Path, Vertex, VertexSet};
use crate::intervals::{Interval, IntervalFamily};
use crate::oracle::{is_ball_separator, verify_far_paths, SeparatorResult};

pub use assemble::PathPieces;
pub use checks::{check_trace, TraceViolation};
pub use frame::{ComponentInfo, Frame};
pub use general::solve_general;
pub use joints::{enumerate_joints, JointInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SolverConfig {
    pub c: u32,
    pub ell: u32,
    pub self_verify: bool,
    /// Cap on the number of connected sets examined while collecting joints.
    pub joint_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { c: 7, ell: 19, self_verify: true, joint_budget: 50_000_000 }
    }
}

impl SolverConfig {
    pub fn radius(&self) -> u32 {
        8 * self.ell + self.c + 2
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.c < 7 {
            return Err(SolverError::InvalidConfig(format!("c = {} must be at least 7", self.c)));
        }
        if self.ell < 2 * self.c + 5 {
            return Err(SolverError::InvalidConfig(format!(
                "ell = {} must be at least 2c+5 = {}",
                self.ell,
                2 * self.c + 5
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SolverOutcome {
    TwoFarPaths { paths: [Path; 2] },
    Center { vertex: Vertex, radius: u32 },
    NoPath,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("internal invariant violated at {stage}: {detail}")]
    InternalInvariantViolation { stage: &'static str, detail: String },
    #[error("joint enumeration exceeded its budget of {budget} sets; try a smaller instance or a larger budget")]
    EnumerationBudget { budget: u64 },
    #[error("outcome failed verification: {0}")]
    VerificationFailed(String),
}

pub(crate) fn violation(stage: &'static str, detail: impl Into<String>) -> SolverError {
    SolverError::InternalInvariantViolation { stage, detail: detail.into() }
}

#[derive(Clone, Debug, Serialize)]
pub struct Supercomponent {
    pub vertices: VertexSet,
    pub interval: Interval,
}

/// Every intermediate object of a run. Stages that were not reached stay
/// empty; `stage` names the last one entered.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SolverTrace {
    pub config: Option<SolverConfig>,
    pub stage: String,
    pub decisions: Vec<String>,
    pub frame: Option<Frame>,
    pub components: Vec<ComponentInfo>,
    /// Indices into `components`, in selection order.
    pub selected_components: Vec<usize>,
    pub joints_union: Option<VertexSet>,
    pub supercomponents: Vec<Supercomponent>,
    /// Indices into `supercomponents`, in selection order.
    pub selected_supercomponents: Vec<usize>,
    pub pieces: Option<PathPieces>,
}

impl SolverTrace {
    fn enter(&mut self, stage: &str) {
        self.stage = stage.to_string();
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.decisions.push(msg.into());
    }

    pub fn reached_assembly(&self) -> bool {
        self.pieces.is_some()
    }
}

/// Runs the pipeline; the trace is returned alongside any outcome and is
/// also useful after an error for diagnosis.
pub fn solve_k2(
    g: &Graph,
    s: &VertexSet,
    t: &VertexSet,
    cfg: &SolverConfig,
) -> (Result<SolverOutcome, SolverError>, SolverTrace) {
    let mut trace = SolverTrace { config: Some(*cfg), ..Default::default() };
    let result = cfg.validate().and_then(|_| run(g, s, t, cfg, &mut trace));
    let result = result.and_then(|out| {
        if cfg.self_verify || cfg!(debug_assertions) {
            verify_outcome(g, s, t, cfg.radius(), &out)?;
            if trace.reached_assembly() {
                let bad = check_trace(g, &trace);
                if let Some(v) = bad.first() {
                    return Err(violation("trace", format!("{}: {}", v.claim, v.detail)));
                }
            }
        }
        Ok(out)
    });
    (result, trace)
}

/// Checks an outcome independently of how it was produced.
pub fn verify_outcome(g: &Graph, s: &VertexSet, t: &VertexSet, radius: u32, out: &SolverOutcome) -> Result<(), SolverError> {
    match out {
        SolverOutcome::TwoFarPaths { paths } => {
            verify_far_paths(g, s, t, paths, 3).map_err(SolverError::VerificationFailed)
        }
        SolverOutcome::Center { vertex, radius: r } => {
            if *r != radius {
                return Err(SolverError::VerificationFailed(format!("radius {r} differs from {radius}")));
            }
            match is_ball_separator(g, s, t, &[*vertex], *r) {
                SeparatorResult::Separates => Ok(()),
                SeparatorResult::Escapes(p) => Err(SolverError::VerificationFailed(format!(
                    "ball of radius {r} around {vertex} is escaped by {:?}",
                    p.vertices()
                ))),
            }
        }
        SolverOutcome::NoPath => match shortest_path(g, s, t, &VertexSet::new(g.vertex_count())) {
            None => Ok(()),
            Some(p) => Err(SolverError::VerificationFailed(format!("S–T path {:?} exists", p.vertices()))),
        },
    }
}

fn two_paths(p: Path, q: Path) -> SolverOutcome {
    SolverOutcome::TwoFarPaths { paths: [p, q] }
}

fn run(g: &Graph, s: &VertexSet, t: &VertexSet, cfg: &SolverConfig, trace: &mut SolverTrace) -> Result<SolverOutcome, SolverError> {
    let nv = g.vertex_count();
    let rho = cfg.radius();
    let ell = cfg.ell as usize;

    trace.enter("backbone");
    let Some(r) = shortest_path(g, s, t, &VertexSet::new(nv)) else {
        trace.note("no S–T path");
        return Ok(SolverOutcome::NoPath);
    };
    let n = r.vertex_count() + 1;

    // Any S–T path at distance three from R finishes at once. Afterwards
    // every S–T path stays within distance two of R, in R's component.
    trace.enter("far_from_backbone");
    if let Some(p) = shortest_path(g, s, t, &ball(g, r.vertices(), 2)) {
        trace.note("an S–T path avoids the 2-ball of R");
        return Ok(two_paths(r, p));
    }

    trace.enter("guard_r1");
    let r1 = r.first();
    match is_ball_separator(g, s, t, &[r1], rho) {
        SeparatorResult::Separates => {
            trace.note("ball around r_1 separates");
            return Ok(SolverOutcome::Center { vertex: r1, radius: rho });
        }
        SeparatorResult::Escapes(p) => {
            let d = set_distance(g, p.vertices(), r.vertices()).expect("nonempty paths");
            if d.at_least(3) {
                trace.note("escape path around r_1 is far from R");
                return Ok(two_paths(r, p));
            }
            if n - 2 < 8 * ell + cfg.c as usize + 1 {
                return Err(violation("guard_r1", format!("backbone too short: n = {n}")));
            }
        }
    }

    if n < 16 * ell {
        trace.enter("guard_small_n");
        let mid = n / 2; // = ceil((n-1)/2)
        let x = r.vertices()[mid - 1];
        return match is_ball_separator(g, s, t, &[x], rho) {
            SeparatorResult::Separates => {
                trace.note(format!("short backbone: ball around r_{mid} separates"));
                Ok(SolverOutcome::Center { vertex: x, radius: rho })
            }
            SeparatorResult::Escapes(p) => {
                let d = set_distance(g, p.vertices(), r.vertices()).expect("nonempty paths");
                if !d.at_least(3) {
                    return Err(violation("guard_small_n", format!("escape path at distance {d} from R")));
                }
                trace.note(format!("short backbone: escape around r_{mid} is far from R"));
                Ok(two_paths(r, p))
            }
        };
    }

    trace.enter("frame");
    let fr = frame::build_frame(g, s, t, r, cfg.c)?;
    let comps = frame::component_intervals(g, &fr);
    trace.frame = Some(fr.clone());
    trace.components = comps.clone();

    trace.enter("certify");
    let family = IntervalFamily::new(n, comps.iter().map(|c| c.interval).collect())
        .map_err(|e| violation("certify", e.to_string()))?;
    let uncovered = family.uncovered_offsets(16 * ell).map_err(|e| violation("certify", e.to_string()))?;
    if let Some(&h) = uncovered.first() {
        let m = h + 8 * ell;
        let x = fr.r_at(m);
        return match is_ball_separator(g, s, t, &[x], rho) {
            SeparatorResult::Separates => {
                trace.note(format!("window at offset {h} uncovered; ball around r_{m} separates"));
                Ok(SolverOutcome::Center { vertex: x, radius: rho })
            }
            SeparatorResult::Escapes(_) => Err(violation(
                "certify",
                format!("window ({h},{}) uncovered although the ball around r_{m} is escaped", h + 16 * ell),
            )),
        };
    }

    trace.enter("select_d");
    let selected = select_by_interval(&family, 4 * ell, "select_d")?;
    trace.selected_components = selected.clone();
    for i in 3..selected.len() {
        let (ai, bj) = (comps[selected[i]].interval.a, comps[selected[i - 3]].interval.b);
        if ai < bj + 4 * ell {
            return Err(violation("select_d", format!("a(D_{}) - b(D_{}) < 4ell", i + 1, i - 2)));
        }
    }

    trace.enter("joints");
    let d_sets: Vec<&VertexSet> = selected.iter().map(|&i| &comps[i].vertices).collect();
    let d_boundaries: Vec<&VertexSet> = selected.iter().map(|&i| &comps[i].boundary).collect();
    let z = joints::compute_joints(g, &fr, &d_boundaries, cfg.joint_budget)?;
    trace.joints_union = Some(z.clone());

    trace.enter("supercomponents");
    let mut zd = z;
    for d in &d_sets {
        zd.union_with(d);
    }
    let supers = frame::supercomponents(g, &fr, &zd, &d_sets)?;
    trace.supercomponents = supers.clone();
    let super_family = IntervalFamily::new(n, supers.iter().map(|f| f.interval).collect())
        .map_err(|e| violation("supercomponents", e.to_string()))?;
    let holes = super_family.uncovered_offsets(4 * ell).map_err(|e| violation("supercomponents", e.to_string()))?;
    if let Some(h) = holes.first() {
        return Err(violation("supercomponents", format!("intervals not 4ell-powerful at offset {h}")));
    }

    trace.enter("select_h");
    let chosen = select_by_interval(&super_family, ell, "select_h")?;
    trace.selected_supercomponents = chosen.clone();

    trace.enter("assemble");
    let h_sets: Vec<&Supercomponent> = chosen.iter().map(|&i| &supers[i]).collect();
    let (pieces, p, q) = assemble::assemble(g, s, t, &fr, &h_sets, cfg.c)?;
    trace.pieces = Some(pieces);
    Ok(two_paths(p, q))
}

/// The mainint pipeline (adjacent pairs asserted at `ell - 1`, the bound it
/// actually meets) on the family, mapped back to the first member index
/// carrying each selected interval.
fn select_by_interval(family: &IntervalFamily, ell: usize, stage: &'static str) -> Result<Vec<usize>, SolverError> {
    let chosen = family.mainint_select_with(ell, 1).map_err(|e| violation(stage, e.to_string()))?;
    chosen
        .items()
        .iter()
        .map(|iv| {
            family
                .items()
                .iter()
                .position(|x| x == iv)
                .ok_or_else(|| violation(stage, format!("selected interval {iv:?} has no owner")))
        })
        .collect()
}
