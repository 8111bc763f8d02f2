use coarse_menger::construction::build_counterexample;
use coarse_menger::instances::{corridor_gadget, corridor_gadget_with, rng, Corridor, Link};
use coarse_menger::oracle::{is_ball_separator, verify_far_paths};
use coarse_menger::solver::{
    check_trace, enumerate_joints, solve_general, solve_k2, verify_outcome, JointInput, SolverConfig, SolverError,
    SolverOutcome,
};
use coarse_menger::{Graph, Instance, Interval, Path, Vertex, VertexSet};
use rand::Rng;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn solve(inst: &Instance) -> (SolverOutcome, coarse_menger::solver::SolverTrace) {
    let (res, trace) = solve_k2(&inst.graph, &inst.s, &inst.t, &cfg());
    let out = res.unwrap_or_else(|e| panic!("solver failed at {}: {e}", trace.stage));
    verify_outcome(&inst.graph, &inst.s, &inst.t, 161, &out).unwrap();
    (out, trace)
}

#[test]
fn long_path_gives_center_at_first_vertex() {
    let inst = Instance::from_lists(Graph::path_graph(1000), &[0], &[999]);
    let (out, _) = solve(&inst);
    assert_eq!(out, SolverOutcome::Center { vertex: 0, radius: 161 });
}

#[test]
fn disjoint_corridors_give_two_paths() {
    let g = Graph::path_graph(401).disjoint_union(&Graph::path_graph(401));
    let inst = Instance::from_lists(g, &[0, 401], &[400, 801]);
    let (out, _) = solve(&inst);
    let SolverOutcome::TwoFarPaths { paths } = out else { panic!("{out:?}") };
    assert_eq!(paths[0].vertices(), (0..=400).collect::<Vec<_>>());
    assert_eq!(paths[1].vertices(), (401..=801).collect::<Vec<_>>());
}

#[test]
fn counterexample_still_has_two_far_paths() {
    let ce = build_counterexample(1, None, None, false).unwrap();
    let (res, _) = solve_k2(&ce.graph, &ce.s, &ce.t, &cfg());
    let SolverOutcome::TwoFarPaths { paths } = res.unwrap() else { panic!() };
    verify_far_paths(&ce.graph, &ce.s, &ce.t, &paths, 3).unwrap();
}

#[test]
fn star_gives_center() {
    let g = Graph::from_edges(11, (1..11).map(|v| (0, v))).unwrap();
    let inst = Instance::from_lists(g, &[1], &[2]);
    assert_eq!(solve(&inst).0, SolverOutcome::Center { vertex: 1, radius: 161 });
}

#[test]
fn overlapping_terminals_and_disconnection() {
    let inst = Instance::from_lists(Graph::path_graph(50), &[10], &[10, 40]);
    assert!(matches!(solve(&inst).0, SolverOutcome::Center { .. }));
    let g = Graph::path_graph(5).disjoint_union(&Graph::path_graph(5));
    let inst = Instance::from_lists(g, &[0], &[9]);
    assert_eq!(solve(&inst).0, SolverOutcome::NoPath);
}

#[test]
fn antipodal_cycle_arcs() {
    let inst = Instance::from_lists(Graph::cycle_graph(2000), &[0, 1000], &[500, 1500]);
    let (out, _) = solve(&inst);
    assert!(matches!(out, SolverOutcome::TwoFarPaths { .. }));
}

#[test]
fn escape_path_near_backbone_passes_first_guard() {
    // Backbone 0..=1000; a second S vertex starts a 600-edge path that ends
    // two steps from r_501, so the escape around r_1 stays close to R.
    let mut edges: Vec<(Vertex, Vertex)> = (0..1000).map(|i| (i, i + 1)).collect();
    edges.extend((1001..1601).map(|v| (v, v + 1)));
    edges.push((1601, 1602));
    edges.push((1602, 500));
    let inst = Instance::from_lists(Graph::from_edges(1603, edges).unwrap(), &[0, 1001], &[1000]);
    let (out, trace) = solve(&inst);
    assert!(!["backbone", "far_from_backbone", "guard_r1"].contains(&trace.stage.as_str()), "{}", trace.stage);
    assert!(matches!(out, SolverOutcome::Center { .. }));
}

#[test]
fn invalid_configs_are_rejected() {
    let inst = Instance::from_lists(Graph::path_graph(3), &[0], &[2]);
    for bad in [SolverConfig { c: 6, ell: 19, ..cfg() }, SolverConfig { c: 7, ell: 18, ..cfg() }] {
        let (res, _) = solve_k2(&inst.graph, &inst.s, &inst.t, &bad);
        assert!(matches!(res, Err(SolverError::InvalidConfig(_))));
    }
    let big = SolverConfig { c: 8, ell: 21, ..cfg() };
    let (res, _) = solve_k2(&inst.graph, &inst.s, &inst.t, &big);
    assert_eq!(res.unwrap(), SolverOutcome::Center { vertex: 0, radius: 8 * 21 + 8 + 2 });
}

#[test]
fn verification_rejects_wrong_outcomes() {
    let inst = Instance::from_lists(Graph::cycle_graph(1000), &[0], &[500]);
    let (g, s, t) = (&inst.graph, &inst.s, &inst.t);
    let p = Path::new(g, (0..=500).collect()).unwrap();
    let twice = SolverOutcome::TwoFarPaths { paths: [p.clone(), p] };
    assert!(verify_outcome(g, s, t, 161, &twice).is_err());
    assert!(verify_outcome(g, s, t, 161, &SolverOutcome::Center { vertex: 0, radius: 160 }).is_err());
    assert!(verify_outcome(g, s, t, 161, &SolverOutcome::Center { vertex: 250, radius: 161 }).is_err());
    assert!(verify_outcome(g, s, t, 161, &SolverOutcome::Center { vertex: 0, radius: 161 }).is_ok());
    assert!(verify_outcome(g, s, t, 161, &SolverOutcome::NoPath).is_err());
}

fn two_rung_corridor() -> Instance {
    let cors = [Corridor { rungs: vec![(200, 2)] }, Corridor { rungs: vec![(560, 2)] }];
    corridor_gadget(&mut rng(0), 800, &cors, 0)
}

#[test]
fn corridor_instance_reaches_assembly() {
    let inst = two_rung_corridor();
    let (out, trace) = solve(&inst);
    assert!(matches!(out, SolverOutcome::TwoFarPaths { .. }));
    assert!(trace.reached_assembly());
    let intervals: Vec<Interval> = trace.components.iter().map(|c| c.interval).collect();
    let frozen: Vec<Interval> =
        [(0, 200), (200, 802), (0, 560), (560, 802)].iter().map(|&(a, b)| Interval { a, b }).collect();
    assert_eq!(intervals, frozen);
    assert!(check_trace(&inst.graph, &trace).is_empty());
    for c in &trace.components {
        assert!(c.boundary.is_subset(&trace.frame.as_ref().unwrap().surface));
    }
}

#[test]
fn linked_tentacles_create_joints() {
    let cors = [
        Corridor { rungs: vec![(257, 1), (403, 1)] },
        Corridor { rungs: vec![(458, 1), (612, 1)] },
        Corridor { rungs: vec![(28, 1), (778, 1)] },
    ];
    let link = Link { corridors: vec![1, 2], at: 243, len: 10, height: 7 };
    let inst = corridor_gadget_with(&mut rng(0), 800, &cors, &[link], 0);
    let (out, trace) = solve(&inst);
    assert!(matches!(out, SolverOutcome::TwoFarPaths { .. }));
    assert!(trace.joints_union.as_ref().is_some_and(|z| !z.is_empty()));
    assert!(check_trace(&inst.graph, &trace).is_empty());
}

#[test]
fn solver_is_deterministic_across_pools() {
    let inst = two_rung_corridor();
    let (a, ta) = solve_k2(&inst.graph, &inst.s, &inst.t, &cfg());
    for workers in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
        let (b, tb) = pool.install(|| solve_k2(&inst.graph, &inst.s, &inst.t, &cfg()));
        assert_eq!(a, b);
        assert_eq!(format!("{ta:?}"), format!("{tb:?}"));
    }
}

fn naive_is_joint(g: &Graph, x: &[Vertex], owners: &[Vec<usize>], depth: &[Option<u32>]) -> bool {
    let k = x.len();
    // Connected in the induced subgraph.
    let mut seen = vec![x[0]];
    let mut i = 0;
    while i < seen.len() {
        for &v in g.neighbors(seen[i]) {
            if x.contains(&v) && !seen.contains(&v) {
                seen.push(v);
            }
        }
        i += 1;
    }
    if seen.len() != k {
        return false;
    }
    if x.iter().any(|&v| depth[v].is_some_and(|d| 2 * d as usize > k - 1)) {
        return false;
    }
    let mut touched: Vec<usize> = x.iter().flat_map(|&v| owners[v].clone()).collect();
    touched.sort_unstable();
    touched.dedup();
    (touched.len() >= 2 && k <= 3) || (touched.len() >= 3 && k <= 8)
}

fn naive_joint_union(g: &Graph, pool: &[Vertex], owners: &[Vec<usize>], depth: &[Option<u32>]) -> VertexSet {
    let mut out = VertexSet::new(g.vertex_count());
    let m = pool.len();
    for mask in 1u32..1 << m {
        if mask.count_ones() > 8 {
            continue;
        }
        let x: Vec<Vertex> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect();
        if naive_is_joint(g, &x, owners, depth) {
            for v in x {
                out.insert(v);
            }
        }
    }
    out
}

#[test]
fn joint_enumeration_matches_all_subsets() {
    let mut r = rng(3);
    let mut nonempty = 0;
    for round in 0..150 {
        let n = r.gen_range(4..=18);
        let mut edges = std::collections::BTreeSet::new();
        for _ in 0..r.gen_range(n - 1..=2 * n) {
            let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
            if u != v {
                edges.insert((u.min(v), u.max(v)));
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let pool_list: Vec<Vertex> = (0..n).filter(|_| r.gen_bool(0.85)).collect();
        let pool = VertexSet::from_iter(n, pool_list.iter().copied());
        let owners: Vec<Vec<usize>> = (0..n)
            .map(|_| if r.gen_bool(0.4) { (0..4).filter(|_| r.gen_bool(0.4)).collect() } else { Vec::new() })
            .collect();
        let depth: Vec<Option<u32>> =
            (0..n).map(|_| if r.gen_bool(0.7) { Some(r.gen_range(0..4)) } else { None }).collect();
        let input = JointInput { graph: &g, pool: &pool, owners: &owners, depth: &depth };
        let got = enumerate_joints(&input, 10_000_000).unwrap();
        let want = naive_joint_union(&g, &pool_list, &owners, &depth);
        assert_eq!(got, want, "round {round}");
        nonempty += usize::from(!want.is_empty());
    }
    assert!(nonempty > 30);
}

#[test]
fn joint_examples() {
    // One surface vertex between two components' deep vertices.
    let g = Graph::path_graph(3);
    let pool = VertexSet::full(3);
    let owners = vec![vec![], vec![0, 1], vec![]];
    let depth = vec![Some(2), Some(0), Some(2)];
    let z = enumerate_joints(&JointInput { graph: &g, pool: &pool, owners: &owners, depth: &depth }, 1000).unwrap();
    assert_eq!(z.to_vec(), vec![1]);

    // A five-vertex bridge touching three attachment sets at depth 2.
    let g = Graph::path_graph(5);
    let pool = VertexSet::full(5);
    let owners = vec![vec![0], vec![], vec![1], vec![], vec![2]];
    let mut depth = vec![Some(2); 5];
    let z = enumerate_joints(&JointInput { graph: &g, pool: &pool, owners: &owners, depth: &depth }, 1000).unwrap();
    assert_eq!(z.len(), 5);
    depth[2] = Some(3);
    let z = enumerate_joints(&JointInput { graph: &g, pool: &pool, owners: &owners, depth: &depth }, 1000).unwrap();
    assert!(z.is_empty());

    let err = enumerate_joints(&JointInput { graph: &g, pool: &pool, owners: &owners, depth: &depth }, 1);
    assert!(matches!(err, Err(SolverError::EnumerationBudget { budget: 1 })));
}

#[test]
fn general_distance_on_corridors() {
    let d = 6;
    // Corridor tied to the backbone by a 9-edge rung: G-distance 9 apart.
    let inst = corridor_gadget(&mut rng(0), 600, &[Corridor { rungs: vec![(300, 9)] }], 0);
    let (res, _) = solve_general(&inst.graph, &inst.s, &inst.t, d, &cfg());
    let SolverOutcome::TwoFarPaths { paths } = res.unwrap() else { panic!() };
    verify_far_paths(&inst.graph, &inst.s, &inst.t, &paths, d).unwrap();

    let inst = Instance::from_lists(Graph::path_graph(900), &[0], &[899]);
    let (res, _) = solve_general(&inst.graph, &inst.s, &inst.t, d, &cfg());
    let SolverOutcome::Center { vertex, radius } = res.unwrap() else { panic!() };
    assert!(radius <= d * 161);
    assert!(is_ball_separator(&inst.graph, &inst.s, &inst.t, &[vertex], radius).separates());

    let (res, _) = solve_general(&inst.graph, &inst.s, &inst.t, 2, &cfg());
    assert!(matches!(res, Err(SolverError::InvalidConfig(_))));
}

#[test]
fn general_distance_three_matches_power_graph() {
    let inst = two_rung_corridor();
    let (res, _) = solve_general(&inst.graph, &inst.s, &inst.t, 3, &cfg());
    match res.unwrap() {
        SolverOutcome::TwoFarPaths { paths } => verify_far_paths(&inst.graph, &inst.s, &inst.t, &paths, 3).unwrap(),
        SolverOutcome::Center { radius, .. } => assert_eq!(radius, 3 * 161),
        SolverOutcome::NoPath => panic!(),
    }
}
