//! Exhaustive checks: ball separators, packings of far-apart S–T paths and
//! the two-path dichotomy on the unsubdivided gadget.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::construction::{build_gadget, tree_path_s1_t2, ConstructionError};
use crate::graph::{ball, set_distance, shortest_path, Graph, Path, Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "witness", rename_all = "snake_case")]
pub enum SeparatorResult {
    Separates,
    Escapes(Path),
}

impl SeparatorResult {
    pub fn separates(&self) -> bool {
        matches!(self, SeparatorResult::Separates)
    }
}

/// Whether every S–T path meets `ball(X, r)`. An escaping witness is the
/// lexicographically least shortest path avoiding the ball.
pub fn is_ball_separator(g: &Graph, s: &VertexSet, t: &VertexSet, x: &[Vertex], r: u32) -> SeparatorResult {
    let forbidden = ball(g, x, r);
    match shortest_path(g, s, t, &forbidden) {
        Some(p) => SeparatorResult::Escapes(p),
        None => SeparatorResult::Separates,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "x", rename_all = "snake_case")]
pub enum SeparatorSearch {
    /// S and T are already disconnected; the empty set separates.
    NoPath,
    Found(Vec<Vertex>),
    Absent,
}

/// Least `X` (by size, then lexicographically) with `|X| <= max_size`
/// whose `r`-ball meets every S–T path.
pub fn exhaustive_separator_search(
    g: &Graph,
    s: &VertexSet,
    t: &VertexSet,
    max_size: usize,
    r: u32,
) -> SeparatorSearch {
    if shortest_path(g, s, t, &VertexSet::new(g.vertex_count())).is_none() {
        return SeparatorSearch::NoPath;
    }
    for size in 1..=max_size.min(g.vertex_count()) {
        let found = (0..g.vertex_count()).into_par_iter().find_first(|&x0| {
            let mut chosen = vec![x0];
            extend_separator(g, s, t, r, size, &mut chosen)
        });
        if let Some(x0) = found {
            // Re-run the winning branch sequentially to recover the set.
            let mut chosen = vec![x0];
            extend_separator(g, s, t, r, size, &mut chosen);
            return SeparatorSearch::Found(chosen);
        }
    }
    SeparatorSearch::Absent
}

/// Depth-first completion of `chosen` to a separator of exactly `size`
/// vertices. Leaves `chosen` holding the first separator found.
fn extend_separator(
    g: &Graph,
    s: &VertexSet,
    t: &VertexSet,
    r: u32,
    size: usize,
    chosen: &mut Vec<Vertex>,
) -> bool {
    let escape = match is_ball_separator(g, s, t, chosen, r) {
        SeparatorResult::Separates => return chosen.len() == size,
        SeparatorResult::Escapes(p) => p,
    };
    if chosen.len() == size {
        return false;
    }
    let last = *chosen.last().unwrap();
    // The final member must reach the path that escapes the others.
    let near_escape = (chosen.len() + 1 == size).then(|| ball(g, escape.vertices(), r));
    for x in last + 1..g.vertex_count() {
        if near_escape.as_ref().is_some_and(|b| !b.contains(x)) {
            continue;
        }
        chosen.push(x);
        if extend_separator(g, s, t, r, size, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: Option<f64>,
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes, max_seconds: None }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 50_000_000, max_seconds: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum FarPathsResult {
    Found { witness: Vec<Path> },
    NoneExists,
    BudgetExhausted { nodes_used: u64 },
    NoPath,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FarPathsReport {
    #[serde(flatten)]
    pub result: FarPathsResult,
    pub nodes: u64,
}

/// Checks that each path is a valid S–T path and that all pairwise
/// distances are at least `d`.
pub fn verify_far_paths(g: &Graph, s: &VertexSet, t: &VertexSet, paths: &[Path], d: u32) -> Result<(), String> {
    for (i, p) in paths.iter().enumerate() {
        p.validate(g).map_err(|e| format!("path {i}: {e}"))?;
        if !p.joins(s, t) {
            return Err(format!("path {i} does not join S and T"));
        }
    }
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            let dist = set_distance(g, paths[i].vertices(), paths[j].vertices()).map_err(|e| e.to_string())?;
            if !dist.at_least(d) {
                return Err(format!("paths {i} and {j} are at distance {dist} < {d}"));
            }
        }
    }
    Ok(())
}

/// Complete search for `k` S–T paths with pairwise distance at least `d`.
///
/// Only minimal paths are grown (one end in S, the other the first vertex
/// in T, no other vertex in S); any packing contains one of those. Paths
/// are placed in increasing order of start vertex, and after placing a path
/// its `(d-1)`-ball is closed to later paths. The first path's opening move
/// splits the work into independent tasks; the earliest successful task in
/// canonical order wins, so the witness does not depend on worker count.
pub fn search_far_paths(
    g: &Graph,
    s: &VertexSet,
    t: &VertexSet,
    k: usize,
    d: u32,
    budget: SearchBudget,
) -> FarPathsReport {
    assert!(k >= 1 && d >= 1, "k and d must be positive");
    let n = g.vertex_count();
    let Some(first) = shortest_path(g, s, t, &VertexSet::new(n)) else {
        return FarPathsReport { result: FarPathsResult::NoPath, nodes: 0 };
    };
    if k == 1 {
        return FarPathsReport { result: FarPathsResult::Found { witness: vec![first] }, nodes: 1 };
    }

    let mut tasks: Vec<(Vertex, Option<Vertex>)> = Vec::new();
    for v in s.iter() {
        if t.contains(v) {
            tasks.push((v, None));
        } else {
            tasks.extend(g.neighbors(v).iter().filter(|&&w| !s.contains(w)).map(|&w| (v, Some(w))));
        }
    }

    let shared = Shared {
        nodes: AtomicU64::new(0),
        best: AtomicUsize::new(usize::MAX),
        out_of_budget: AtomicBool::new(false),
        deadline: budget.max_seconds.map(|secs| Instant::now() + Duration::from_secs_f64(secs)),
        max_nodes: budget.max_nodes,
    };
    let outcomes: Vec<TaskOutcome> = tasks
        .par_iter()
        .enumerate()
        .map(|(idx, &(start, step))| {
            let mut search = Search::new(g, s, t, k, d, &shared, idx);
            let out = search.run_task(start, step);
            if let TaskOutcome::Found(_) = out {
                shared.best.fetch_min(idx, Ordering::SeqCst);
            }
            out
        })
        .collect();

    let nodes = shared.nodes.load(Ordering::SeqCst);
    let mut exhausted = false;
    for out in outcomes {
        match out {
            TaskOutcome::Found(paths) => {
                return FarPathsReport { result: FarPathsResult::Found { witness: paths }, nodes };
            }
            TaskOutcome::Budget => exhausted = true,
            TaskOutcome::Exhausted | TaskOutcome::Cancelled => {}
        }
    }
    let result = if exhausted {
        FarPathsResult::BudgetExhausted { nodes_used: nodes }
    } else {
        FarPathsResult::NoneExists
    };
    FarPathsReport { result, nodes }
}

struct Shared {
    nodes: AtomicU64,
    best: AtomicUsize,
    out_of_budget: AtomicBool,
    deadline: Option<Instant>,
    max_nodes: u64,
}

enum TaskOutcome {
    Found(Vec<Path>),
    Exhausted,
    Budget,
    Cancelled,
}

enum Halt {
    Budget,
    Cancelled,
}

struct Search<'a> {
    g: &'a Graph,
    s: &'a VertexSet,
    t: &'a VertexSet,
    k: usize,
    d: u32,
    shared: &'a Shared,
    task: usize,
    on_path: Vec<bool>,
    placed: Vec<Path>,
    local_nodes: u64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, s: &'a VertexSet, t: &'a VertexSet, k: usize, d: u32, shared: &'a Shared, task: usize) -> Self {
        Search {
            g,
            s,
            t,
            k,
            d,
            shared,
            task,
            on_path: vec![false; g.vertex_count()],
            placed: Vec::new(),
            local_nodes: 0,
        }
    }

    fn tick(&mut self) -> Result<(), Halt> {
        self.local_nodes += 1;
        let total = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.shared.best.load(Ordering::Relaxed) < self.task {
            return Err(Halt::Cancelled);
        }
        if total > self.shared.max_nodes || self.shared.out_of_budget.load(Ordering::Relaxed) {
            self.shared.out_of_budget.store(true, Ordering::Relaxed);
            return Err(Halt::Budget);
        }
        if self.local_nodes.is_multiple_of(1024) && self.shared.deadline.is_some_and(|dl| Instant::now() >= dl) {
            self.shared.out_of_budget.store(true, Ordering::Relaxed);
            return Err(Halt::Budget);
        }
        Ok(())
    }

    fn run_task(&mut self, start: Vertex, step: Option<Vertex>) -> TaskOutcome {
        let blocked = VertexSet::new(self.g.vertex_count());
        let result = match step {
            None => self.tick().and_then(|_| self.complete(vec![start], &blocked)),
            Some(w) => self.grow_from(start, Some(w), &blocked),
        };
        match result {
            Ok(true) => TaskOutcome::Found(std::mem::take(&mut self.placed)),
            Ok(false) => TaskOutcome::Exhausted,
            Err(Halt::Budget) => TaskOutcome::Budget,
            Err(Halt::Cancelled) => TaskOutcome::Cancelled,
        }
    }

    /// Places paths `placed.len()..k` with starts above `min_start`.
    fn place_next(&mut self, min_start: Vertex, blocked: &VertexSet) -> Result<bool, Halt> {
        let starts: Vec<Vertex> = self.s.iter().filter(|&v| v > min_start && !blocked.contains(v)).collect();
        for v in starts {
            let found = if self.t.contains(v) {
                self.tick()?;
                self.complete(vec![v], blocked)?
            } else {
                self.grow_from(v, None, blocked)?
            };
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Enumerates minimal paths from `start` (optionally forcing the first
    /// step) avoiding `blocked`, trying to finish the packing after each.
    fn grow_from(&mut self, start: Vertex, forced: Option<Vertex>, blocked: &VertexSet) -> Result<bool, Halt> {
        let g = self.g;
        let mut walk = vec![start];
        let mut cursor: Vec<usize> = vec![0];
        self.on_path[start] = true;
        let mut found = Ok(false);
        while let Some(&u) = walk.last() {
            let top = walk.len() - 1;
            let nbrs = g.neighbors(u);
            let i = cursor[top];
            if i >= nbrs.len() || (top == 0 && forced.is_some() && i > 0) {
                self.on_path[u] = false;
                walk.pop();
                cursor.pop();
                continue;
            }
            cursor[top] += 1;
            let v = match (top, forced) {
                (0, Some(w)) => w,
                _ => nbrs[i],
            };
            if self.on_path[v] || blocked.contains(v) || self.s.contains(v) {
                continue;
            }
            if let Err(h) = self.tick() {
                found = Err(h);
                break;
            }
            if self.t.contains(v) {
                let mut verts = walk.clone();
                verts.push(v);
                match self.complete(verts, blocked) {
                    Ok(false) => continue,
                    other => {
                        found = other;
                        break;
                    }
                }
            }
            if !self.reaches_t(v, blocked) {
                continue;
            }
            self.on_path[v] = true;
            walk.push(v);
            cursor.push(0);
        }
        for &u in &walk {
            self.on_path[u] = false;
        }
        found
    }

    /// Whether `v` can still reach T without touching blocked, current path
    /// or S vertices.
    fn reaches_t(&self, v: Vertex, blocked: &VertexSet) -> bool {
        let g = self.g;
        let mut seen = vec![false; g.vertex_count()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if seen[w] || self.on_path[w] || blocked.contains(w) || self.s.contains(w) {
                    continue;
                }
                if self.t.contains(w) {
                    return true;
                }
                seen[w] = true;
                stack.push(w);
            }
        }
        false
    }

    fn complete(&mut self, verts: Vec<Vertex>, blocked: &VertexSet) -> Result<bool, Halt> {
        let start = verts[0];
        let path = Path::from_vertices_unchecked(verts);
        if self.placed.len() + 1 == self.k {
            self.placed.push(path);
            return Ok(true);
        }
        let mut next_blocked = ball(self.g, path.vertices(), self.d - 1);
        next_blocked.union_with(blocked);
        self.placed.push(path);
        // The walk's own marks must not leak into the next placement.
        let saved = std::mem::replace(&mut self.on_path, vec![false; self.g.vertex_count()]);
        let res = self.place_next(start, &next_blocked);
        self.on_path = saved;
        if !matches!(res, Ok(true)) {
            self.placed.pop();
        }
        res
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("gadget of depth {k} has too many paths to enumerate (limit {limit})")]
    TooLarge { k: usize, limit: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub k: usize,
    pub paths: usize,
    pub pairs: u64,
    pub violations: u64,
    pub first_violation: Option<(Path, Path)>,
}

/// Checks every ordered pair of disjoint paths between `{s1, s2}` and
/// `{t1, t2}` in the unsubdivided gadget: either some path of length at
/// most two joins them using no vertex of Z, or one of them is the tree
/// path from `s1` to `t2`.
pub fn verify_gadget_dichotomy(k: usize, path_limit: usize) -> Result<DichotomyReport, OracleError> {
    let gadget = build_gadget(k)?;
    let g = &gadget.graph;
    let n = g.vertex_count();
    if n > 128 {
        return Err(OracleError::TooLarge { k, limit: path_limit });
    }
    let bit = |v: Vertex| 1u128 << v;
    let ends = bit(gadget.t1) | bit(gadget.t2);

    let mut paths: Vec<(u128, Vec<Vertex>)> = Vec::new();
    for start in [gadget.s1, gadget.s2] {
        let mut walk = vec![start];
        let mut cursor = vec![0usize];
        let mut mask = bit(start);
        while let Some(&u) = walk.last() {
            let top = walk.len() - 1;
            if cursor[top] == 0 && ends & bit(u) != 0 {
                paths.push((mask, walk.clone()));
                if paths.len() > path_limit {
                    return Err(OracleError::TooLarge { k, limit: path_limit });
                }
            }
            let nbrs = g.neighbors(u);
            if cursor[top] >= nbrs.len() {
                mask &= !bit(u);
                walk.pop();
                cursor.pop();
                continue;
            }
            let v = nbrs[cursor[top]];
            cursor[top] += 1;
            if mask & bit(v) == 0 {
                mask |= bit(v);
                walk.push(v);
                cursor.push(0);
            }
        }
    }

    let z_mask: u128 = gadget.z.iter().map(bit).fold(0, |a, b| a | b);
    // near[u]: vertices joined to u by a path of length <= 2 avoiding Z.
    let near: Vec<u128> = (0..n)
        .map(|u| {
            if z_mask & bit(u) != 0 {
                return 0;
            }
            let mut m = 0u128;
            for &w in g.neighbors(u) {
                if z_mask & bit(w) != 0 {
                    continue;
                }
                m |= bit(w);
                for &x in g.neighbors(w) {
                    if z_mask & bit(x) == 0 && x != u {
                        m |= bit(x);
                    }
                }
            }
            m
        })
        .collect();
    let reach: Vec<u128> = paths
        .iter()
        .map(|(_, vs)| vs.iter().fold(0u128, |acc, &u| acc | near[u]))
        .collect();
    let tree_mask = tree_path_s1_t2(&gadget).vertices().iter().fold(0u128, |a, &v| a | bit(v));

    let (pairs, violations, first) = (0..paths.len())
        .into_par_iter()
        .map(|i| {
            let (pm, _) = &paths[i];
            let mut pairs = 0u64;
            let mut bad = 0u64;
            let mut first = None;
            for (j, (qm, _)) in paths.iter().enumerate() {
                if pm & qm != 0 {
                    continue;
                }
                pairs += 1;
                let close = reach[i] & qm != 0;
                let tree = *pm == tree_mask || *qm == tree_mask;
                if !close && !tree {
                    bad += 1;
                    first.get_or_insert(j);
                }
            }
            (pairs, bad, first.map(|j| (i, j)))
        })
        .reduce(
            || (0, 0, None),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2.or(b.2)),
        );

    let to_path = |i: usize| Path::from_vertices_unchecked(paths[i].1.clone());
    Ok(DichotomyReport {
        k,
        paths: paths.len(),
        pairs,
        violations,
        first_violation: first.map(|(i, j)| (to_path(i), to_path(j))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_counterexample;

    fn set(n: usize, vs: &[Vertex]) -> VertexSet {
        VertexSet::from_iter(n, vs.iter().copied())
    }

    fn two_routes() -> (Graph, VertexSet, VertexSet) {
        // 0 -> 1 -> 2 -> 3 -> 4 -> 5 -> 6 and 0 -> 7 -> 8 -> 9 -> 10 -> 11 -> 6
        let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, i + 1)).collect();
        edges.extend([(0, 7), (7, 8), (8, 9), (9, 10), (10, 11), (11, 6)]);
        let g = Graph::from_edges(12, edges).unwrap();
        (g, set(12, &[0]), set(12, &[6]))
    }

    #[test]
    fn separator_examples() {
        let g = Graph::path_graph(11);
        let (s, t) = (set(11, &[0]), set(11, &[10]));
        assert!(is_ball_separator(&g, &s, &t, &[5], 0).separates());
        assert!(!is_ball_separator(&g, &s, &t, &[], 3).separates());
        let (g, s, t) = two_routes();
        match is_ball_separator(&g, &s, &t, &[3], 1) {
            SeparatorResult::Escapes(p) => assert_eq!(p.vertices(), &[0, 7, 8, 9, 10, 11, 6]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn separator_search_examples() {
        let g = Graph::path_graph(11);
        let (s, t) = (set(11, &[0]), set(11, &[10]));
        assert_eq!(exhaustive_separator_search(&g, &s, &t, 1, 1), SeparatorSearch::Found(vec![0]));
        let g2 = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(exhaustive_separator_search(&g2, &set(4, &[0]), &set(4, &[3]), 2, 0), SeparatorSearch::NoPath);
        let (g, s, t) = two_routes();
        assert_eq!(exhaustive_separator_search(&g, &s, &t, 1, 1), SeparatorSearch::Found(vec![0]));
        let inner_s = set(12, &[1, 7]);
        let inner_t = set(12, &[5, 11]);
        assert_eq!(exhaustive_separator_search(&g, &inner_s, &inner_t, 1, 0), SeparatorSearch::Absent);
        assert_eq!(exhaustive_separator_search(&g, &inner_s, &inner_t, 2, 0), SeparatorSearch::Found(vec![1, 7]));
    }

    #[test]
    fn counterexample_has_no_small_separator() {
        let ce = build_counterexample(1, None, None, false).unwrap();
        assert_eq!(exhaustive_separator_search(&ce.graph, &ce.s, &ce.t, 2, 1), SeparatorSearch::Absent);
    }

    #[test]
    fn far_paths_basics() {
        let (g, s, t) = two_routes();
        let one = search_far_paths(&g, &s, &t, 1, 3, SearchBudget::default());
        assert_eq!(one.result, FarPathsResult::Found { witness: vec![Path::new(&g, vec![0, 1, 2, 3, 4, 5, 6]).unwrap()] });
        let pair = search_far_paths(&g, &set(12, &[1, 7]), &set(12, &[5, 11]), 2, 2, SearchBudget::default());
        match pair.result {
            FarPathsResult::Found { witness } => {
                verify_far_paths(&g, &set(12, &[1, 7]), &set(12, &[5, 11]), &witness, 2).unwrap();
            }
            other => panic!("{other:?}"),
        }
        let none = search_far_paths(&g, &s, &t, 2, 1, SearchBudget::default());
        assert_eq!(none.result, FarPathsResult::NoneExists);
        let g2 = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(search_far_paths(&g2, &set(4, &[0]), &set(4, &[3]), 2, 1, SearchBudget::default()).result, FarPathsResult::NoPath);
    }

    #[test]
    fn budget_is_reported() {
        let ce = build_counterexample(1, None, None, false).unwrap();
        let r = search_far_paths(&ce.graph, &ce.s, &ce.t, 3, 3, SearchBudget::nodes(10));
        assert!(matches!(r.result, FarPathsResult::BudgetExhausted { .. }));
    }

    #[test]
    fn counterexample_two_paths_found() {
        let ce = build_counterexample(1, None, None, false).unwrap();
        let r = search_far_paths(&ce.graph, &ce.s, &ce.t, 2, 3, SearchBudget::default());
        match r.result {
            FarPathsResult::Found { witness } => verify_far_paths(&ce.graph, &ce.s, &ce.t, &witness, 3).unwrap(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dichotomy_small_depths() {
        for k in 2..=4 {
            let rep = verify_gadget_dichotomy(k, 1_000_000).unwrap();
            assert_eq!(rep.violations, 0, "k={k}: {:?}", rep.first_violation);
            assert!(rep.pairs > 0);
        }
    }
}
