//! The binary-tree gadget `G_k` and the subdivided counterexample graph.
//!
//! Vertex numbering: tree vertices in breadth-first order (root 0, children
//! of `i` are `2i+1` and `2i+2`), then the two extra bottom-row vertices
//! `s2 = 2^k - 1` and `t1 = 2^k`, then subdivision vertices in edge-creation
//! order (leaf edges by ascending leaf, then bottom-path edges from `s1`).

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Path, Vertex, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("tree depth must be at least 2, got {0}")]
    BadDepth(usize),
    #[error("{0}")]
    BadParams(String),
}

/// Depth, subdivision length and the targeted ℓ of a generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetSpec {
    pub k: usize,
    pub subdivision_len: usize,
    pub ell: Option<usize>,
}

impl GadgetSpec {
    /// Smallest depth and subdivision length that are strictly above
    /// `2ℓ + 2` and `2ℓ`.
    pub fn for_ell(ell: usize) -> Self {
        GadgetSpec { k: 2 * ell + 3, subdivision_len: 2 * ell + 1, ell: Some(ell) }
    }
}

/// A replaced edge: original ends and the interior vertices from `ends.0`
/// towards `ends.1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdividedEdge {
    pub ends: (Vertex, Vertex),
    pub interior: Vec<Vertex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabeledGadget {
    #[serde(skip)]
    pub graph: Graph,
    pub spec: GadgetSpec,
    pub vertex_count: usize,
    pub s: VertexSet,
    pub t: VertexSet,
    pub root: Vertex,
    pub s1: Vertex,
    pub s2: Vertex,
    pub t1: Vertex,
    pub t2: Vertex,
    pub z: VertexSet,
    /// Bottom path in order from `s1` to `t2`, in unsubdivided ids.
    pub m_order: Vec<Vertex>,
    /// Parent of each tree vertex (`None` for the root).
    pub tree_parent: Vec<Option<Vertex>>,
    pub leaves: VertexSet,
    pub subdivided: Vec<SubdividedEdge>,
}

impl LabeledGadget {
    /// Number of vertices of the unsubdivided gadget, `2^k + 1`.
    pub fn original_count(&self) -> usize {
        (1 << self.spec.k) + 1
    }

    pub fn is_subdivision_vertex(&self, v: Vertex) -> bool {
        v >= self.original_count()
    }
}

/// Bottom path order of `G_k`. The children of the `j`-th leaf parent sit at
/// positions `2j-1` and `2j+2` (1-based); positions 2 and `2^(k-1)+1` hold
/// the two extra vertices.
fn bottom_path(k: usize) -> Vec<Vertex> {
    let leaf_parents = 1usize << (k - 2);
    let first_parent = leaf_parents - 1;
    let len = (1 << (k - 1)) + 2;
    let mut m = vec![usize::MAX; len];
    for j in 1..=leaf_parents {
        let p = first_parent + j - 1;
        m[2 * j - 2] = 2 * p + 1;
        m[2 * j + 1] = 2 * p + 2;
    }
    m[1] = (1 << k) - 1;
    m[len - 2] = 1 << k;
    debug_assert!(m.iter().all(|&v| v != usize::MAX));
    m
}

fn assemble(spec: GadgetSpec, subdivide: bool) -> LabeledGadget {
    let k = spec.k;
    let tree_size = (1usize << k) - 1;
    let original = tree_size + 2;
    let first_leaf = (1usize << (k - 1)) - 1;
    let tree_parent: Vec<Option<Vertex>> =
        (0..tree_size).map(|v| (v > 0).then(|| (v - 1) / 2)).collect();
    let m_order = bottom_path(k);

    let mut edges = Vec::new();
    let mut replaced = Vec::new();
    for v in 1..first_leaf {
        edges.push((tree_parent[v].unwrap(), v));
    }
    replaced.extend((first_leaf..tree_size).map(|v| (tree_parent[v].unwrap(), v)));
    replaced.extend(m_order.windows(2).map(|w| (w[0], w[1])));

    let mut next = original;
    let mut subdivided = Vec::new();
    for &(u, v) in &replaced {
        if !subdivide || spec.subdivision_len == 1 {
            edges.push((u, v));
            continue;
        }
        let interior: Vec<Vertex> = (next..next + spec.subdivision_len - 1).collect();
        next += interior.len();
        let mut prev = u;
        for &x in &interior {
            edges.push((prev, x));
            prev = x;
        }
        edges.push((prev, v));
        subdivided.push(SubdividedEdge { ends: (u, v), interior });
    }

    let graph = Graph::from_edges(next, edges).expect("gadget edges are simple");
    let n = graph.vertex_count();
    let s1 = m_order[0];
    let s2 = m_order[1];
    let t1 = m_order[m_order.len() - 2];
    let t2 = m_order[m_order.len() - 1];
    let (s, t) = if subdivide {
        (VertexSet::from_iter(n, [0, s1, s2]), VertexSet::from_iter(n, [0, t1, t2]))
    } else {
        (VertexSet::from_iter(n, [s1, s2]), VertexSet::from_iter(n, [t1, t2]))
    };
    LabeledGadget {
        vertex_count: n,
        spec,
        s,
        t,
        root: 0,
        s1,
        s2,
        t1,
        t2,
        z: VertexSet::from_iter(n, m_order.iter().copied()),
        m_order,
        tree_parent,
        leaves: VertexSet::from_iter(n, first_leaf..tree_size),
        subdivided,
        graph,
    }
}

/// Unsubdivided `G_k`, labelled with `S = {s1, s2}` and `T = {t1, t2}`.
pub fn build_gadget(k: usize) -> Result<LabeledGadget, ConstructionError> {
    if k < 2 {
        return Err(ConstructionError::BadDepth(k));
    }
    Ok(assemble(GadgetSpec { k, subdivision_len: 1, ell: None }, false))
}

/// `G_k` with every edge at a bottom-row vertex replaced by a path of
/// `subdivision_len` edges; `S = {root, s1, s2}`, `T = {root, t1, t2}`.
///
/// Overrides must keep `k > 2ℓ + 2` and `L > 2ℓ` unless `allow_violation`
/// is set, which exists for negative testing.
pub fn build_counterexample(
    ell: usize,
    depth: Option<usize>,
    subdiv: Option<usize>,
    allow_violation: bool,
) -> Result<LabeledGadget, ConstructionError> {
    if ell == 0 {
        return Err(ConstructionError::BadParams("ell must be at least 1".into()));
    }
    let defaults = GadgetSpec::for_ell(ell);
    let spec = GadgetSpec {
        k: depth.unwrap_or(defaults.k),
        subdivision_len: subdiv.unwrap_or(defaults.subdivision_len),
        ell: Some(ell),
    };
    if spec.k < 2 {
        return Err(ConstructionError::BadDepth(spec.k));
    }
    if spec.subdivision_len == 0 {
        return Err(ConstructionError::BadParams("subdivision length must be at least 1".into()));
    }
    if !allow_violation {
        if spec.k <= 2 * ell + 2 {
            return Err(ConstructionError::BadParams(format!(
                "depth {} must exceed 2*ell+2 = {}",
                spec.k,
                2 * ell + 2
            )));
        }
        if spec.subdivision_len <= 2 * ell {
            return Err(ConstructionError::BadParams(format!(
                "subdivision length {} must exceed 2*ell = {}",
                spec.subdivision_len,
                2 * ell
            )));
        }
    }
    Ok(assemble(spec, true))
}

/// The tree path from `s1` through the root to `t2`, expanded through
/// subdivision vertices.
pub fn tree_path_s1_t2(g: &LabeledGadget) -> Path {
    let up = |leaf: Vertex| {
        let mut chain = vec![leaf];
        while let Some(p) = g.tree_parent[*chain.last().unwrap()] {
            chain.push(p);
        }
        chain
    };
    let mut tree_walk = up(g.s1);
    let mut down = up(g.t2);
    down.pop();
    down.reverse();
    tree_walk.extend(down);

    let mut out = vec![tree_walk[0]];
    for w in tree_walk.windows(2) {
        let (x, y) = (w[0], w[1]);
        if let Some(e) = g.subdivided.iter().find(|e| e.ends == (x, y) || e.ends == (y, x)) {
            if e.ends.0 == x {
                out.extend(&e.interior);
            } else {
                out.extend(e.interior.iter().rev());
            }
        }
        out.push(y);
    }
    Path::new(&g.graph, out).expect("tree path is a path of the gadget")
}
