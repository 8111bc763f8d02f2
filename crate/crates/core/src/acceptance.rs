//! End-to-end acceptance checks, shared by the test suite and the CLI
//! `selftest` command. Each criterion returns a report instead of
//! panicking so that every line can be printed before failing.

use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::construction::{build_counterexample, build_gadget};
use crate::format::Instance;
use crate::graph::{Graph, VertexSet};
use crate::instances::{
    corridor_bases, corridor_gadget, corridor_gadget_with, grid, random_powerful_family, random_sparse, rng, Corridor,
    Link,
};
use crate::intervals::{check_int2, check_mainint, minimality_gap_violations, IntervalFamily};
use crate::oracle::{
    exhaustive_separator_search, search_far_paths, verify_far_paths, verify_gadget_dichotomy, FarPathsResult,
    SearchBudget, SeparatorSearch,
};
use crate::solver::{check_trace, solve_general, solve_k2, verify_outcome, SolverConfig, SolverOutcome, SolverTrace};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {} {verdict} {} ({} ms): {}", self.id, self.name, self.elapsed_ms, self.detail)
    }
}

fn timed(id: u8, name: &'static str, body: impl FnOnce() -> (bool, String)) -> CriterionReport {
    let start = Instant::now();
    let (passed, detail) = body();
    CriterionReport { id, name, passed, detail, elapsed_ms: start.elapsed().as_millis() }
}

pub fn run_all() -> Vec<CriterionReport> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ]
}

/// No set of at most two vertices has an `ℓ`-ball meeting every S–T path
/// of the counterexample, for `ℓ = 1, 2`.
pub fn criterion_1() -> CriterionReport {
    timed(1, "counterexample has no two-ball separator", || {
        let mut notes = Vec::new();
        let mut ok = true;
        for ell in [1usize, 2] {
            let ce = build_counterexample(ell, None, None, false).expect("default parameters are valid");
            let res = exhaustive_separator_search(&ce.graph, &ce.s, &ce.t, 2, ell as u32);
            ok &= res == SeparatorSearch::Absent;
            notes.push(format!("ell={ell} |V|={}: {res:?}", ce.graph.vertex_count()));
        }
        (ok, notes.join("; "))
    })
}

/// Two-path dichotomy on the unsubdivided gadget for depths 2..=4.
pub fn criterion_2() -> CriterionReport {
    timed(2, "gadget dichotomy", || {
        let mut notes = Vec::new();
        let mut ok = true;
        for k in 2..=4 {
            match verify_gadget_dichotomy(k, 10_000_000) {
                Ok(rep) => {
                    ok &= rep.violations == 0;
                    notes.push(format!("k={k}: {} paths, {} pairs, {} violations", rep.paths, rep.pairs, rep.violations));
                }
                Err(e) => {
                    ok = false;
                    notes.push(format!("k={k}: {e}"));
                }
            }
        }
        (ok, notes.join("; "))
    })
}

/// No three S–T paths pairwise at distance three in the `ℓ = 1`
/// counterexample; two such paths exist.
pub fn criterion_3() -> CriterionReport {
    timed(3, "three far paths do not exist", || {
        let ce = build_counterexample(1, None, None, false).expect("default parameters are valid");
        let three = search_far_paths(&ce.graph, &ce.s, &ce.t, 3, 3, SearchBudget::nodes(100_000_000));
        let (ok3, note3) = match &three.result {
            FarPathsResult::NoneExists => (true, format!("k=3: none exists ({} nodes)", three.nodes)),
            FarPathsResult::BudgetExhausted { nodes_used } => {
                (true, format!("k=3: budget exhausted after {nodes_used} nodes, nothing found"))
            }
            other => (false, format!("k=3: {other:?}")),
        };
        let two = search_far_paths(&ce.graph, &ce.s, &ce.t, 2, 3, SearchBudget::nodes(100_000_000));
        let (ok2, note2) = match &two.result {
            FarPathsResult::Found { witness } => match verify_far_paths(&ce.graph, &ce.s, &ce.t, witness, 3) {
                Ok(()) => (true, "k=2: found and verified".to_string()),
                Err(e) => (false, format!("k=2: witness fails verification: {e}")),
            },
            other => (false, format!("k=2: {other:?}")),
        };
        (ok3 && ok2, format!("{note3}; {note2}"))
    })
}

#[derive(Default)]
struct IntervalTally {
    families: usize,
    prune_spacing: usize,
    prune_not_minimal: usize,
    exhaustive_checked: usize,
    exhaustive_failures: usize,
    int2_runs: usize,
    int2_spacing: usize,
    int2_right_gaps: usize,
    int2_overlap_literal: usize,
    int2_overlap_relaxed: usize,
    int2_not_powerful: usize,
    mainint_violations: usize,
    mainint_errors: usize,
    mainint_relaxed: usize,
    heredity: usize,
    first_overlap_case: Option<String>,
}

fn all_subsets_powerful_free(fam: &IntervalFamily, ell: usize) -> bool {
    // Every proper subfamily must fail to be ell-powerful.
    let items = fam.items();
    let t = items.len();
    (0..(1u32 << t) - 1).all(|mask| {
        let sub = (0..t).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).collect();
        !IntervalFamily::new(fam.n(), sub).unwrap().is_powerful(ell).unwrap()
    })
}

/// Property sweep over random families for the three selection routines.
pub fn criterion_4() -> CriterionReport {
    timed(4, "interval selection guarantees", || {
        let mut r = rng(4);
        let mut tally = IntervalTally::default();
        while tally.families < 1200 {
            let small = tally.families % 3 == 0;
            let n = if small { r.gen_range(4..=24) } else { r.gen_range(4..=60) };
            let ell = r.gen_range(1..=n / 4);
            let extra = if small { r.gen_range(0..=4) } else { r.gen_range(0..=25) };
            let fam = random_powerful_family(&mut r, n, 4 * ell, extra);
            if small && fam.to_standard_form().len() > 10 {
                continue;
            }
            tally.families += 1;

            for e in [ell, 2 * ell, 4 * ell] {
                let pruned = fam.prune_minimal(e).expect("family is powerful");
                if !minimality_gap_violations(&pruned, e).is_empty() {
                    tally.prune_spacing += 1;
                }
                let single_stable = (0..pruned.len()).all(|i| {
                    let mut rest = pruned.items().to_vec();
                    rest.remove(i);
                    !IntervalFamily::new(n, rest).unwrap().is_powerful(e).unwrap()
                });
                if !single_stable {
                    tally.prune_not_minimal += 1;
                }
                if small && e == ell {
                    tally.exhaustive_checked += 1;
                    if !all_subsets_powerful_free(&pruned, e) {
                        tally.exhaustive_failures += 1;
                    }
                }
                // Subfamilies of a family meeting the spacing inequality meet it too.
                let keep: Vec<_> = pruned.items().iter().copied().filter(|_| r.gen_bool(0.6)).collect();
                if !minimality_gap_violations(&IntervalFamily::new(n, keep).unwrap(), e).is_empty() {
                    tally.heredity += 1;
                }
            }

            for e in [ell, 2 * ell] {
                let out = fam.int2_select(e).expect("family is 2e-powerful");
                tally.int2_runs += 1;
                if !out.is_powerful(e).unwrap() {
                    tally.int2_not_powerful += 1;
                }
                let chk = check_int2(&out, e);
                tally.int2_spacing += usize::from(!chk.spacing.is_empty());
                tally.int2_right_gaps += usize::from(!chk.right_gaps.is_empty());
                if !chk.overlaps.is_empty() {
                    tally.int2_overlap_literal += 1;
                    tally.first_overlap_case.get_or_insert_with(|| format!("{fam:?} ell={e} -> {out:?}"));
                }
                if chk.min_overlap.is_some_and(|m| m < e as i64 - 1) {
                    tally.int2_overlap_relaxed += 1;
                }
            }

            match fam.mainint_select(ell) {
                Ok(out) => {
                    if !check_mainint(&out, ell).is_empty() || !out.is_powerful(ell).unwrap() {
                        tally.mainint_violations += 1;
                    }
                }
                Err(_) => tally.mainint_errors += 1,
            }
            // Adjacent pairs (a_j, b_(j-1)) weakened by one.
            if fam.mainint_select_with(ell, 1).is_err() {
                tally.mainint_relaxed += 1;
            }
        }
        let t = &tally;
        let literal_ok = t.int2_overlap_literal == 0;
        let rest_ok = t.prune_spacing == 0
            && t.prune_not_minimal == 0
            && t.exhaustive_failures == 0
            && t.int2_spacing == 0
            && t.int2_right_gaps == 0
            && t.int2_not_powerful == 0
            && t.int2_overlap_relaxed == 0
            && t.mainint_violations == 0
            && t.mainint_errors == 0
            && t.mainint_relaxed == 0
            && t.heredity == 0;
        let mut detail = format!(
            "{} families; prune: {} spacing, {} non-minimal, {}/{} exhaustive failures; int2 ({} runs): {} spacing, {} right-gap, \
             {} with b(i-1)-a(i) < ell, {} with b(i-1)-a(i) < ell-1; mainint: {} violations, {} assertion errors, {} failing the adjacent-pair bound ell-1; heredity: {}",
            t.families,
            t.prune_spacing,
            t.prune_not_minimal,
            t.exhaustive_failures,
            t.exhaustive_checked,
            t.int2_runs,
            t.int2_spacing,
            t.int2_right_gaps,
            t.int2_overlap_literal,
            t.int2_overlap_relaxed,
            t.mainint_violations,
            t.mainint_errors,
            t.mainint_relaxed,
            t.heredity,
        );
        if let Some(case) = &t.first_overlap_case {
            detail.push_str(&format!("; first overlap case: {case}"));
        }
        (literal_ok && rest_ok, detail)
    })
}

/// One instance of the solver fuzz corpus.
pub struct FuzzCase {
    pub label: String,
    pub instance: Instance,
}

pub struct FuzzRecord {
    pub label: String,
    pub outcome: Result<SolverOutcome, String>,
    pub trace: SolverTrace,
}

fn random_corridors<R: Rng>(r: &mut R, len: usize) -> Vec<Corridor> {
    (0..r.gen_range(1..=4))
        .map(|_| Corridor {
            rungs: (0..r.gen_range(1..=3)).map(|_| (r.gen_range(1..=len + 1), r.gen_range(1..=10))).collect(),
        })
        .collect()
}

/// Corridors whose rungs are spaced so that the pipeline reaches assembly.
fn staged_corridors<R: Rng>(r: &mut R, len: usize) -> Vec<Corridor> {
    let first = r.gen_range(170..=len / 3);
    let second = r.gen_range(first + 310..=len - 20);
    let mut out = vec![
        Corridor { rungs: vec![(first, r.gen_range(1..=2))] },
        Corridor { rungs: vec![(second, r.gen_range(1..=2))] },
    ];
    if r.gen_bool(0.5) {
        out.push(Corridor { rungs: vec![(r.gen_range(1..=len + 1), r.gen_range(1..=2))] });
    }
    out
}

/// Solves a random corridor layout and, when at least three components get
/// selected, ties consecutive selected components from different corridors
/// together with tentacles near the surface, which produces joints.
fn linked_corridors<R: Rng>(r: &mut R) -> Option<Instance> {
    let len = r.gen_range(700..=1000);
    let cors: Vec<Corridor> = (0..r.gen_range(3..=5))
        .map(|_| {
            let mut ps: Vec<usize> = (0..r.gen_range(1..=3)).map(|_| r.gen_range(20..=len - 20)).collect();
            ps.sort_unstable();
            Corridor { rungs: ps.into_iter().map(|p| (p, r.gen_range(1..=2))).collect() }
        })
        .collect();
    let base = corridor_gadget(r, len, &cors, 0);
    let (_, trace) = solve_k2(&base.graph, &base.s, &base.t, &SolverConfig::default());
    if !trace.reached_assembly() || trace.selected_components.len() < 3 {
        return None;
    }
    let bases = corridor_bases(len, &cors);
    let sel: Vec<_> = trace
        .selected_components
        .iter()
        .map(|&i| {
            let comp = &trace.components[i];
            let v = comp.vertices.iter().next().expect("components are nonempty");
            (comp.interval, bases.iter().rposition(|&b| b <= v).expect("components avoid the backbone"))
        })
        .collect();
    let width = r.gen_range(2..=3).min(sel.len());
    let options: Vec<(usize, usize, Vec<usize>)> = sel
        .windows(width)
        .filter_map(|w| {
            let lo = w.iter().map(|x| x.0.a).max().unwrap();
            let hi = w.iter().map(|x| x.0.b).min().unwrap();
            let mut cs: Vec<usize> = w.iter().map(|x| x.1).collect();
            cs.sort_unstable();
            cs.dedup();
            (hi > lo + 10 && cs.len() == w.len()).then(|| (lo, hi, w.iter().map(|x| x.1).collect()))
        })
        .collect();
    if options.is_empty() {
        return None;
    }
    let (lo, hi, corridors) = options[r.gen_range(0..options.len())].clone();
    let height = r.gen_range(6..=8);
    let link = Link { corridors, at: r.gen_range(lo + 5..=hi - 5), len: height + r.gen_range(2..=5), height };
    Some(corridor_gadget_with(r, len, &cors, &[link], 0))
}

/// Deterministic corpus of at least 500 solver instances.
pub fn fuzz_corpus() -> Vec<FuzzCase> {
    let mut r = rng(5);
    let mut out = Vec::new();
    for i in 0..160 {
        let n = [60, 200, 800, 3000][i % 4] + r.gen_range(0..40);
        let deg = r.gen_range(1.6..3.5);
        let (ss, ts) = (r.gen_range(1..=5), r.gen_range(1..=5));
        let inst = random_sparse(&mut r, n, deg, ss, ts);
        out.push(FuzzCase { label: format!("sparse-{i}-n{n}"), instance: inst });
    }
    for _ in 0..60 {
        let (w, h) = (r.gen_range(2..=420), r.gen_range(1..=6));
        out.push(FuzzCase { label: format!("grid-{w}x{h}"), instance: grid(w, h) });
    }
    for i in 0..120 {
        let len = r.gen_range(330..=1000);
        let cors = random_corridors(&mut r, len);
        let hair = r.gen_range(0..=60);
        out.push(FuzzCase { label: format!("corridor-{i}"), instance: corridor_gadget(&mut r, len, &cors, hair) });
    }
    for i in 0..150 {
        let len = r.gen_range(700..=1000);
        let cors = staged_corridors(&mut r, len);
        let hair = r.gen_range(0..=40);
        out.push(FuzzCase { label: format!("staged-{i}"), instance: corridor_gadget(&mut r, len, &cors, hair) });
    }
    let mut linked = 0;
    while linked < 60 {
        if let Some(inst) = linked_corridors(&mut r) {
            out.push(FuzzCase { label: format!("linked-{linked}"), instance: inst });
            linked += 1;
        }
    }
    for i in 0..20 {
        let n = r.gen_range(20..=2000);
        let g = Graph::cycle_graph(n);
        let inst = Instance::from_lists(g, &[0, 1], &[n / 2, n / 2 + 1]);
        out.push(FuzzCase { label: format!("cycle-{i}-n{n}"), instance: inst });
        let p = r.gen_range(2..=2000);
        out.push(FuzzCase {
            label: format!("path-{p}"),
            instance: Instance::from_lists(Graph::path_graph(p), &[0], &[p - 1]),
        });
    }
    for ell in [1, 2] {
        let ce = build_counterexample(ell, None, None, false).expect("default parameters are valid");
        out.push(FuzzCase { label: format!("counterexample-{ell}"), instance: Instance::new(ce.graph, ce.s, ce.t) });
    }
    for k in 2..=6 {
        let gk = build_gadget(k).expect("k >= 2");
        out.push(FuzzCase { label: format!("gadget-{k}"), instance: Instance::new(gk.graph, gk.s, gk.t) });
    }
    out
}

fn solve_record(case: &FuzzCase, cfg: &SolverConfig) -> FuzzRecord {
    let inst = &case.instance;
    let (res, trace) = solve_k2(&inst.graph, &inst.s, &inst.t, cfg);
    FuzzRecord { label: case.label.clone(), outcome: res.map_err(|e| e.to_string()), trace }
}

fn fuzz_results() -> &'static (Vec<FuzzCase>, Vec<FuzzRecord>) {
    static CELL: OnceLock<(Vec<FuzzCase>, Vec<FuzzRecord>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let cases = fuzz_corpus();
        let cfg = SolverConfig::default();
        let records = cases.iter().map(|c| solve_record(c, &cfg)).collect();
        (cases, records)
    })
}

/// Solver fuzz: every outcome verifies, no internal errors, and reruns on
/// one and four workers reproduce outcome and trace.
pub fn criterion_5() -> CriterionReport {
    timed(5, "solver soundness on fuzz corpus", || {
        let (cases, records) = fuzz_results();
        let cfg = SolverConfig::default();
        let mut failures = Vec::new();
        let mut stages = std::collections::BTreeMap::<String, usize>::new();
        for (case, rec) in cases.iter().zip(records) {
            *stages.entry(rec.trace.stage.clone()).or_default() += 1;
            match &rec.outcome {
                Ok(out) => {
                    let inst = &case.instance;
                    if let Err(e) = verify_outcome(&inst.graph, &inst.s, &inst.t, cfg.radius(), out) {
                        failures.push(format!("{}: {e}", rec.label));
                    }
                    if let SolverOutcome::Center { radius, .. } = out {
                        if *radius != 161 {
                            failures.push(format!("{}: radius {radius}", rec.label));
                        }
                    }
                }
                Err(e) => failures.push(format!("{}: {e}", rec.label)),
            }
        }
        let mut reruns = 0;
        for (i, (case, rec)) in cases.iter().zip(records).enumerate() {
            if i % 10 != 0 {
                continue;
            }
            for workers in [1, 4] {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
                let again = pool.install(|| solve_record(case, &cfg));
                reruns += 1;
                if again.outcome != rec.outcome || format!("{:?}", again.trace) != format!("{:?}", rec.trace) {
                    failures.push(format!("{}: differs on rerun with {workers} workers", rec.label));
                }
            }
        }
        let detail = format!(
            "{} instances, {} reruns, final stages {:?}; {} failures{}",
            cases.len(),
            reruns,
            stages,
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        );
        (failures.is_empty() && cases.len() >= 500, detail)
    })
}

/// Fixed instances with known outcomes.
pub fn criterion_6() -> CriterionReport {
    timed(6, "directed endpoints", || {
        let cfg = SolverConfig::default();
        let mut notes = Vec::new();
        let mut ok = true;

        let path = Graph::path_graph(1000);
        let (res, _) = solve_k2(&path, &VertexSet::singleton(1000, 0), &VertexSet::singleton(1000, 999), &cfg);
        let good = res == Ok(SolverOutcome::Center { vertex: 0, radius: 161 });
        ok &= good;
        notes.push(format!("path: {}", if good { "center r_1, radius 161".to_string() } else { format!("{res:?}") }));

        let two = Graph::path_graph(401).disjoint_union(&Graph::path_graph(401));
        let (s, t) = (VertexSet::from_iter(802, [0, 401]), VertexSet::from_iter(802, [400, 801]));
        let (res, _) = solve_k2(&two, &s, &t, &cfg);
        let good = matches!(res, Ok(SolverOutcome::TwoFarPaths { .. }));
        ok &= good;
        notes.push(format!("double corridor: {}", if good { "two far paths".to_string() } else { format!("{res:?}") }));

        let ce = build_counterexample(1, None, None, false).expect("default parameters are valid");
        let (res, _) = solve_k2(&ce.graph, &ce.s, &ce.t, &cfg);
        let good = matches!(res, Ok(SolverOutcome::TwoFarPaths { .. }));
        ok &= good;
        notes.push(format!("counterexample: {}", if good { "two far paths".to_string() } else { format!("{res:?}") }));
        (ok, notes.join("; "))
    })
}

/// Distance-6 wrapper on double-corridor instances.
pub fn criterion_7() -> CriterionReport {
    timed(7, "general distance wrapper", || {
        let cfg = SolverConfig::default();
        let d = 6;
        let mut r = rng(7);
        let mut insts = vec![(
            "disjoint".to_string(),
            Instance::from_lists(
                Graph::path_graph(401).disjoint_union(&Graph::path_graph(401)),
                &[0, 401],
                &[400, 801],
            ),
        )];
        for i in 0..6 {
            let len = r.gen_range(300..=900);
            let rung = r.gen_range(7..=15);
            let at = r.gen_range(1..=len + 1);
            let inst = corridor_gadget(&mut r, len, &[Corridor { rungs: vec![(at, rung)] }], 0);
            insts.push((format!("rung-{i}-len{rung}"), inst));
        }
        insts.push(("single".to_string(), Instance::from_lists(Graph::path_graph(900), &[0], &[899])));
        let mut notes = Vec::new();
        let mut ok = true;
        for (label, inst) in &insts {
            let (res, _) = solve_general(&inst.graph, &inst.s, &inst.t, d, &cfg);
            let note = match &res {
                Ok(SolverOutcome::TwoFarPaths { paths }) => {
                    match verify_far_paths(&inst.graph, &inst.s, &inst.t, paths, d) {
                        Ok(()) => "two paths".to_string(),
                        Err(e) => {
                            ok = false;
                            e
                        }
                    }
                }
                Ok(SolverOutcome::Center { radius, .. }) if *radius <= d * 161 => format!("center r={radius}"),
                other => {
                    ok = false;
                    format!("{other:?}")
                }
            };
            notes.push(format!("{label}: {note}"));
        }
        (ok, notes.join("; "))
    })
}

/// Structural claims on every fuzz trace that reached assembly.
pub fn criterion_8() -> CriterionReport {
    timed(8, "trace claims at assembly", || {
        let (cases, records) = fuzz_results();
        let (mut reached, mut with_joints) = (0, 0);
        let mut failures = Vec::new();
        for (case, rec) in cases.iter().zip(records) {
            if !rec.trace.reached_assembly() {
                continue;
            }
            reached += 1;
            with_joints += usize::from(rec.trace.joints_union.as_ref().is_some_and(|z| !z.is_empty()));
            for v in check_trace(&case.instance.graph, &rec.trace) {
                failures.push(format!("{}: {}: {}", rec.label, v.claim, v.detail));
            }
        }
        let detail = format!(
            "{reached} traces reached assembly ({with_joints} with joints); {} violations{}",
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        );
        (failures.is_empty() && reached >= 50, detail)
    })
}
