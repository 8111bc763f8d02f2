//! Seeded instance generators for tests, fuzzing and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::format::Instance;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::intervals::{Interval, IntervalFamily};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random graph with about `n * avg_degree / 2` edges and terminal sets of
/// the given sizes (possibly overlapping).
pub fn random_sparse<R: Rng>(rng: &mut R, n: usize, avg_degree: f64, s_size: usize, t_size: usize) -> Instance {
    assert!(n >= 2);
    let target = ((n as f64 * avg_degree) / 2.0).round() as usize;
    let max_edges = n * (n - 1) / 2;
    let mut edges = std::collections::BTreeSet::new();
    while edges.len() < target.min(max_edges) {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }
    let graph = Graph::from_edges(n, edges).expect("generated edges are simple");
    let pick = |rng: &mut R, k: usize| {
        let mut all: Vec<Vertex> = (0..n).collect();
        all.shuffle(rng);
        all.truncate(k.clamp(1, n));
        all
    };
    let s = pick(rng, s_size);
    let t = pick(rng, t_size);
    Instance::from_lists(graph, &s, &t)
}

/// `w x h` grid, vertex `(x, y)` numbered `y * w + x`; S is the left
/// column and T the right column.
pub fn grid(w: usize, h: usize) -> Instance {
    let id = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    let graph = Graph::from_edges(w * h, edges).expect("grid edges are simple");
    let s: Vec<Vertex> = (0..h).map(|y| id(0, y)).collect();
    let t: Vec<Vertex> = (0..h).map(|y| id(w - 1, y)).collect();
    Instance::from_lists(graph, &s, &t)
}

/// A family that is `ell`-powerful on `(0, n)`: random intervals, then one
/// extra interval around every window left uncovered.
pub fn random_powerful_family<R: Rng>(rng: &mut R, n: usize, ell: usize, extra: usize) -> IntervalFamily {
    assert!(ell >= 1 && ell <= n);
    let mut items = Vec::new();
    for _ in 0..extra {
        let a = rng.gen_range(0..=n);
        let b = rng.gen_range(a..=n);
        items.push(Interval { a, b });
    }
    loop {
        let fam = IntervalFamily::new(n, items.clone()).unwrap();
        let Some(&h) = fam.uncovered_offsets(ell).unwrap().first() else {
            return fam;
        };
        let a = h.saturating_sub(rng.gen_range(0..=ell));
        let b = (h + ell + rng.gen_range(0..=ell)).min(n);
        items.push(Interval { a, b });
    }
}

/// Random subset of the vertex range, each vertex kept with probability `p`.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> VertexSet {
    VertexSet::from_iter(n, (0..n).filter(|_| rng.gen_bool(p)))
}

/// A side corridor: a path as long as the backbone running from an extra S
/// vertex to an extra T vertex, tied to the backbone by rungs. A rung
/// `(p, len)` joins corridor vertex `p - 1` to `r_p` by a path of `len`
/// edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corridor {
    pub rungs: Vec<(usize, usize)>,
}

/// Tentacles from several corridors down to `r_at`, each a path of `len`
/// edges leaving corridor vertex `at - 1`. The tentacle vertices `height`
/// steps above `r_at` are chained by extra edges, in the listed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub corridors: Vec<usize>,
    pub at: usize,
    pub len: usize,
    pub height: usize,
}

/// Backbone `r_1 .. r_{L+1}` (ids `0..=L`) with `S ∋ r_1`, `T ∋ r_{L+1}`,
/// side corridors of the same length, and `hair` random pendant paths.
/// The backbone is the lexicographically least shortest S–T path.
pub fn corridor_gadget<R: Rng>(rng: &mut R, backbone_len: usize, corridors: &[Corridor], hair: usize) -> Instance {
    corridor_gadget_with(rng, backbone_len, corridors, &[], hair)
}

/// First vertex id of each corridor built by [`corridor_gadget_with`].
pub fn corridor_bases(backbone_len: usize, corridors: &[Corridor]) -> Vec<Vertex> {
    let mut next = backbone_len + 1;
    corridors
        .iter()
        .map(|c| {
            let base = next;
            next += backbone_len + 1 + c.rungs.iter().map(|&(_, len)| len - 1).sum::<usize>();
            base
        })
        .collect()
}

/// [`corridor_gadget`] plus linked tentacles.
pub fn corridor_gadget_with<R: Rng>(
    rng: &mut R,
    backbone_len: usize,
    corridors: &[Corridor],
    links: &[Link],
    hair: usize,
) -> Instance {
    let mut edges: Vec<(Vertex, Vertex)> = (0..backbone_len).map(|i| (i, i + 1)).collect();
    let mut next = backbone_len + 1;
    let mut s = vec![0];
    let mut t = vec![backbone_len];
    let mut bases = Vec::new();
    // Path of `len` edges from `from` to `to`; returns its interior in order.
    let chain = |edges: &mut Vec<(Vertex, Vertex)>, next: &mut usize, from: Vertex, to: Vertex, len: usize| {
        let mut prev = from;
        let mut interior = Vec::new();
        for _ in 1..len {
            edges.push((prev, *next));
            interior.push(*next);
            prev = *next;
            *next += 1;
        }
        edges.push((prev, to));
        interior
    };
    for cor in corridors {
        let base = next;
        bases.push(base);
        next += backbone_len + 1;
        edges.extend((0..backbone_len).map(|i| (base + i, base + i + 1)));
        s.push(base);
        t.push(base + backbone_len);
        for &(p, len) in &cor.rungs {
            assert!(p >= 1 && p <= backbone_len + 1 && len >= 1);
            chain(&mut edges, &mut next, base + p - 1, p - 1, len);
        }
    }
    for link in links {
        assert!(link.at >= 1 && link.at <= backbone_len + 1 && link.height >= 1 && link.height < link.len);
        let tops: Vec<Vertex> = link
            .corridors
            .iter()
            .map(|&k| {
                let interior = chain(&mut edges, &mut next, bases[k] + link.at - 1, link.at - 1, link.len);
                interior[link.len - 1 - link.height]
            })
            .collect();
        edges.extend(tops.windows(2).map(|w| (w[0], w[1])));
    }
    for _ in 0..hair {
        let mut prev = rng.gen_range(0..next);
        for _ in 0..rng.gen_range(1..=5) {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    // Coinciding unit rungs would repeat an edge.
    let edges: std::collections::BTreeSet<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    let graph = Graph::from_edges(next, edges).expect("corridor edges are simple");
    Instance::from_lists(graph, &s, &t)
}
