//! Undirected simple graphs over dense vertex ids, and the breadth-first
//! primitives every other module is built on.
//!
//! A [`Graph`] is immutable once built. Derived graphs (powers, unions) are
//! new values, so a graph can be shared freely between worker threads.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Dense vertex id in `0..vertex_count`.
pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {vertex} out of range (graph has {vertex_count} vertices)")]
    VertexOutOfRange { vertex: Vertex, vertex_count: usize },
    #[error("source set is empty")]
    EmptySources,
    #[error("vertex set is empty")]
    EmptySet,
    #[error("invalid path: {0}")]
    InvalidPath(String),
}

/// Hop distance, with an explicit sentinel for "unreachable".
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance(u32);

impl Distance {
    pub const ZERO: Distance = Distance(0);
    pub const INFINITE: Distance = Distance(u32::MAX);

    pub fn finite(d: u32) -> Self {
        assert!(d != u32::MAX, "distance overflow");
        Distance(d)
    }

    pub fn is_finite(self) -> bool {
        self != Self::INFINITE
    }

    pub fn get(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }

    /// Finite value, panicking on infinity. For call sites where
    /// reachability has already been established.
    pub fn unwrap(self) -> u32 {
        self.get().expect("distance is infinite")
    }

    /// `self <= d`, where infinity exceeds every finite bound.
    pub fn at_most(self, d: u32) -> bool {
        self.is_finite() && self.0 <= d
    }

    /// `self >= d`; infinity satisfies every bound.
    pub fn at_least(self, d: u32) -> bool {
        !self.is_finite() || self.0 >= d
    }
}

impl fmt::Debug for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.get() {
            Some(d) => write!(f, "{d}"),
            None => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.get().serialize(s)
    }
}

/// Membership bitmap over the vertex range of some host graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    mask: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet { mask: vec![false; universe], len: 0 }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet { mask: vec![true; universe], len: universe }
    }

    pub fn singleton(universe: usize, v: Vertex) -> Self {
        let mut s = Self::new(universe);
        s.insert(v);
        s
    }

    pub fn from_iter<I: IntoIterator<Item = Vertex>>(universe: usize, iter: I) -> Self {
        let mut s = Self::new(universe);
        for v in iter {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns `true` if `v` was not already present.
    pub fn insert(&mut self, v: Vertex) -> bool {
        let slot = &mut self.mask[v];
        let fresh = !*slot;
        if fresh {
            *slot = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        let slot = &mut self.mask[v];
        let present = *slot;
        if present {
            *slot = false;
            self.len -= 1;
        }
        present
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.mask.iter().enumerate().filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.iter().next()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for v in other.iter() {
            self.insert(v);
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn complement(&self) -> VertexSet {
        let mask: Vec<bool> = self.mask.iter().map(|m| !m).collect();
        VertexSet { len: mask.len() - self.len, mask }
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        if self.len <= other.len {
            self.iter().any(|v| other.contains(v))
        } else {
            other.iter().any(|v| self.contains(v))
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// A simple path: consecutive vertices adjacent, no vertex repeated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<Vertex>);

impl Path {
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Self, GraphError> {
        let p = Path(vertices);
        p.validate(g)?;
        Ok(p)
    }

    /// Caller guarantees the path invariants; checked in debug builds only
    /// when a graph is at hand, so this is crate-internal.
    pub(crate) fn from_vertices_unchecked(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty());
        Path(vertices)
    }

    pub fn single(v: Vertex) -> Self {
        Path(vec![v])
    }

    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        if self.0.is_empty() {
            return Err(GraphError::InvalidPath("empty vertex sequence".into()));
        }
        let mut seen = VertexSet::new(g.vertex_count());
        for &v in &self.0 {
            g.check_vertex(v)?;
            if !seen.insert(v) {
                return Err(GraphError::InvalidPath(format!("vertex {v} repeated")));
            }
        }
        for w in self.0.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(GraphError::InvalidPath(format!(
                    "{} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.0
    }

    pub fn first(&self) -> Vertex {
        self.0[0]
    }

    pub fn last(&self) -> Vertex {
        *self.0.last().unwrap()
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.0.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() == 1
    }

    pub fn reversed(&self) -> Path {
        Path(self.0.iter().rev().copied().collect())
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_iter(universe, self.0.iter().copied())
    }

    /// One end in `s`, the other in `t`.
    pub fn joins(&self, s: &VertexSet, t: &VertexSet) -> bool {
        (s.contains(self.first()) && t.contains(self.last()))
            || (s.contains(self.last()) && t.contains(self.first()))
    }
}

/// Immutable undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph. With `strict`, a repeated edge is an error; otherwise
    /// duplicates collapse into one edge.
    pub fn build<I>(vertex_count: usize, edges: I, strict: bool) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: x, vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut edge_count = 0;
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if strict {
                if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                    return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
                }
            }
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph { adjacency, edge_count: edge_count / 2 })
    }

    /// Strict construction: duplicate edges are rejected.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Self::build(vertex_count, edges, true)
    }

    pub fn empty(vertex_count: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); vertex_count], edge_count: 0 }
    }

    pub fn path_graph(vertex_count: usize) -> Self {
        Self::from_edges(vertex_count, (1..vertex_count).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle_graph(vertex_count: usize) -> Self {
        assert!(vertex_count >= 3);
        Self::from_edges(vertex_count, (0..vertex_count).map(|i| (i, (i + 1) % vertex_count)))
            .unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adjacency.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, vertex_count: self.vertex_count() })
        }
    }

    /// `self` followed by `other`, whose ids are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count();
        let mut adjacency = self.adjacency.clone();
        adjacency.extend(other.adjacency.iter().map(|l| l.iter().map(|v| v + shift).collect()));
        Graph { adjacency, edge_count: self.edge_count + other.edge_count }
    }
}

/// Multi-source BFS skipping `blocked` vertices and stopping at depth `limit`.
pub(crate) fn bfs(
    g: &Graph,
    sources: impl IntoIterator<Item = Vertex>,
    blocked: Option<&VertexSet>,
    limit: Option<u32>,
) -> Vec<Distance> {
    let mut dist = vec![Distance::INFINITE; g.vertex_count()];
    let mut queue = VecDeque::new();
    for s in sources {
        if blocked.is_some_and(|b| b.contains(s)) || dist[s] == Distance::ZERO {
            continue;
        }
        dist[s] = Distance::ZERO;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].0;
        if limit.is_some_and(|l| du >= l) {
            continue;
        }
        for &v in g.neighbors(u) {
            if dist[v].is_finite() || blocked.is_some_and(|b| b.contains(v)) {
                continue;
            }
            dist[v] = Distance(du + 1);
            queue.push_back(v);
        }
    }
    dist
}

/// Exact breadth-first distances from the nearest source.
pub fn distances_from(g: &Graph, sources: &[Vertex]) -> Result<Vec<Distance>, GraphError> {
    if sources.is_empty() {
        return Err(GraphError::EmptySources);
    }
    for &s in sources {
        g.check_vertex(s)?;
    }
    Ok(bfs(g, sources.iter().copied(), None, None))
}

/// `min d(a, b)` over `a` in `a_set`, `b` in `b_set`.
pub fn set_distance(g: &Graph, a_set: &[Vertex], b_set: &[Vertex]) -> Result<Distance, GraphError> {
    if a_set.is_empty() || b_set.is_empty() {
        return Err(GraphError::EmptySet);
    }
    for &v in a_set.iter().chain(b_set) {
        g.check_vertex(v)?;
    }
    let target = VertexSet::from_iter(g.vertex_count(), b_set.iter().copied());
    let mut dist = vec![Distance::INFINITE; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &a in a_set {
        if target.contains(a) {
            return Ok(Distance::ZERO);
        }
        if !dist[a].is_finite() {
            dist[a] = Distance::ZERO;
            queue.push_back(a);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].0;
        for &v in g.neighbors(u) {
            if dist[v].is_finite() {
                continue;
            }
            if target.contains(v) {
                return Ok(Distance(du + 1));
            }
            dist[v] = Distance(du + 1);
            queue.push_back(v);
        }
    }
    Ok(Distance::INFINITE)
}

/// All vertices within distance `r` of some member of `centers`.
pub fn ball(g: &Graph, centers: &[Vertex], r: u32) -> VertexSet {
    let dist = bfs(g, centers.iter().copied(), None, Some(r));
    VertexSet::from_iter(
        g.vertex_count(),
        dist.iter().enumerate().filter_map(|(v, d)| d.is_finite().then_some(v)),
    )
}

/// Minimum-length path from `s ∖ forbidden` to `t ∖ forbidden` inside
/// `G − forbidden`. Among all shortest paths the lexicographically least
/// vertex sequence is returned.
pub fn shortest_path(
    g: &Graph,
    s: &VertexSet,
    t: &VertexSet,
    forbidden: &VertexSet,
) -> Option<Path> {
    let to_t = bfs(g, t.iter(), Some(forbidden), None);
    let best = s.iter().filter(|&v| !forbidden.contains(v)).map(|v| to_t[v]).min()?;
    if !best.is_finite() {
        return None;
    }
    let mut cur = s.iter().find(|&v| !forbidden.contains(v) && to_t[v] == best)?;
    let mut walk = vec![cur];
    while to_t[cur] != Distance::ZERO {
        let want = Distance(to_t[cur].0 - 1);
        cur = *g.neighbors(cur).iter().find(|&&v| to_t[v] == want)?;
        walk.push(cur);
    }
    Some(Path(walk))
}

/// Connected components of `G − removed`, ordered by smallest member.
pub fn components_excluding(g: &Graph, removed: &VertexSet) -> Vec<VertexSet> {
    let n = g.vertex_count();
    let mut seen = removed.clone();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for root in 0..n {
        if seen.contains(root) {
            continue;
        }
        let mut comp = VertexSet::new(n);
        seen.insert(root);
        stack.push(root);
        while let Some(u) = stack.pop() {
            comp.insert(u);
            for &v in g.neighbors(u) {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Vertices of `removed` with a neighbour in `component`; the companion of
/// [`components_excluding`].
pub fn boundary(g: &Graph, component: &VertexSet, removed: &VertexSet) -> VertexSet {
    let mut out = VertexSet::new(g.vertex_count());
    for u in component.iter() {
        for &v in g.neighbors(u) {
            if removed.contains(v) {
                out.insert(v);
            }
        }
    }
    out
}

/// The connected component containing `v`.
pub fn component_of(g: &Graph, v: Vertex) -> VertexSet {
    ball(g, &[v], u32::MAX - 1)
}

/// `p`-th power: same vertices, `u ~ v` iff `1 <= d(u, v) <= p`.
pub fn power(g: &Graph, p: u32) -> Graph {
    assert!(p >= 1, "power must be at least 1");
    let adjacency: Vec<Vec<Vertex>> = g
        .vertices()
        .map(|u| {
            bfs(g, [u], None, Some(p))
                .iter()
                .enumerate()
                .filter_map(|(v, d)| (v != u && d.is_finite()).then_some(v))
                .collect()
        })
        .collect();
    let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
    Graph { adjacency, edge_count }
}
