//! From a two-ended spanning tree to thinning connected subgraphs: the
//! quotient graph on the spine, Bernoulli connectors and their lift back
//! to the substrate, plus the spine-distance diagnostics.

use crate::error::{Error, Result};
use crate::graph::{SubgraphMask, VertexId, Window};
use crate::labels::LabelField;
use crate::replicas::{map_seeds, Mode};
use crate::stats::{estimate, EstimateReport, TransportRule};
use crate::substrates::TwoEndedTree;

/// `B⁺`: spine vertices, joined whenever some substrate edge joins their bushes.
/// Vertex `i` of `graph` is the `i`-th spine vertex.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    pub graph: Window,
    pub spine: Vec<VertexId>,
    /// Spine index of the bush holding the window root.
    pub root_index: usize,
    /// `+1` or `-1`: direction of increasing positions along the spine.
    pub orientation: i64,
}

pub fn quotient_graph(w: &Window, t: &TwoEndedTree, labels: &LabelField) -> Result<QuotientGraph> {
    let mut index = vec![u32::MAX; w.len()];
    for (i, &x) in t.spine.iter().enumerate() {
        index[x as usize] = i as u32;
    }
    let mut edges = Vec::new();
    for &(u, v) in w.edges() {
        let (a, b) = (index[t.bush_of(u) as usize], index[t.bush_of(v) as usize]);
        if a != b {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let len = t.spine.len();
    let coords = t.spine.iter().map(|&x| w.coord(x)).collect();
    let core: Vec<bool> = t.spine.iter().map(|&x| w.is_core(x)).collect();
    let root_index = index[t.bush_of(w.root()) as usize] as usize;
    let trivial_bushes = len == w.len();
    let wrap = w.wrap() && trivial_bushes;
    let mut core_fixed = core;
    core_fixed[root_index] = true;
    let graph = Window::from_edges(len, edges, coords, root_index as VertexId, core_fixed, wrap)?;
    let orientation = if labels.stream("orient").at(0) < 0.5 { 1 } else { -1 };
    Ok(QuotientGraph { graph, spine: t.spine.clone(), root_index, orientation })
}

impl QuotientGraph {
    pub fn len(&self) -> usize {
        self.spine.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spine.is_empty()
    }

    pub fn position(&self, i: usize) -> i64 {
        self.orientation * (i as i64 - self.root_index as i64)
    }

    /// Spine index at position `p`, if inside the window.
    pub fn index_at(&self, p: i64) -> Option<usize> {
        let i = self.root_index as i64 + self.orientation * p;
        (0..self.len() as i64).contains(&i).then_some(i as usize)
    }

    /// Same quotient seen from another base vertex and direction.
    pub fn reanchored(&self, root_index: usize, orientation: i64) -> QuotientGraph {
        QuotientGraph { root_index, orientation, ..self.clone() }
    }
}

/// BFS on a window that reuses its buffers across queries.
struct Bfs {
    dist: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: std::collections::VecDeque<VertexId>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Bfs { dist: vec![0; n], stamp: vec![0; n], epoch: 0, queue: Default::default() }
    }

    fn get(&self, v: VertexId) -> Option<u32> {
        (self.stamp[v as usize] == self.epoch).then(|| self.dist[v as usize])
    }

    /// Distances from `src` until every vertex in `targets` is reached.
    fn run(&mut self, g: &Window, src: VertexId, targets: &[VertexId]) {
        self.epoch += 1;
        self.queue.clear();
        let mut left = targets.iter().filter(|&&t| t != src).count();
        self.stamp[src as usize] = self.epoch;
        self.dist[src as usize] = 0;
        self.queue.push_back(src);
        while left > 0 {
            let Some(x) = self.queue.pop_front() else { break };
            let d = self.dist[x as usize];
            for &(y, _) in g.neighbors(x) {
                if self.stamp[y as usize] != self.epoch {
                    self.stamp[y as usize] = self.epoch;
                    self.dist[y as usize] = d + 1;
                    self.queue.push_back(y);
                    if targets.contains(&y) {
                        left -= 1;
                    }
                }
            }
        }
    }

    fn run_one(&mut self, g: &Window, src: VertexId, target: VertexId) -> Option<u32> {
        self.run(g, src, &[target]);
        self.get(target)
    }
}

/// Open spine vertices and the shortest connectors between consecutive ones.
#[derive(Debug, Clone)]
pub struct ConnectorSet {
    pub n: u32,
    /// Open spine indices, increasing.
    pub open: Vec<usize>,
    /// `C_{x,y}` for consecutive open `x < y`, as spine-index paths from `x` to `y`.
    pub connectors: Vec<Vec<usize>>,
    /// Union of the connectors inside `B⁺`.
    pub k: SubgraphMask,
}

impl ConnectorSet {
    pub fn is_open(&self, i: usize) -> bool {
        self.open.binary_search(&i).is_ok()
    }

    /// Index into `connectors` of `C_{o-, o+}` for spine index `o`, where
    /// `o-` is the last open vertex at or before `o` and `o+` the first open
    /// vertex strictly after it, in position order.
    pub fn connector_of(&self, o: usize, orientation: i64) -> Option<usize> {
        // forward: open[j-1] <= o < open[j]; reversed: open[j-1] < o <= open[j]
        let j = if orientation > 0 {
            self.open.partition_point(|&x| x <= o)
        } else {
            self.open.partition_point(|&x| x < o)
        };
        (j >= 1 && j < self.open.len()).then(|| j - 1)
    }
}

/// Bernoulli(`2^-n`) percolation on the spine (stream `"perc-n"`) and a
/// shortest `B⁺` path between each pair of consecutive open vertices, ties
/// broken toward the smallest next spine index.
pub fn bernoulli_connectors(q: &QuotientGraph, n: u32, labels: &LabelField) -> Result<ConnectorSet> {
    let stream = labels.stream(&format!("perc-{n}"));
    let p = 0.5f64.powi(n as i32);
    let open: Vec<usize> = (0..q.len()).filter(|&i| stream.vertex(q.spine[i]) < p).collect();
    if open.len() < 2 {
        return Err(Error::DegenerateSample(open.len()));
    }
    let g = &q.graph;
    let mut bfs = Bfs::new(q.len());
    let mut k = g.empty_mask();
    let mut connectors = Vec::with_capacity(open.len() - 1);
    for pair in open.windows(2) {
        let (x, y) = (pair[0] as VertexId, pair[1] as VertexId);
        bfs.run(g, y, &[x]);
        let mut path = vec![x as usize];
        let mut at = x;
        while at != y {
            let d = bfs.get(at).unwrap();
            let next = g
                .neighbors(at)
                .iter()
                .map(|&(z, _)| z)
                .find(|&z| bfs.get(z) == Some(d - 1))
                .unwrap();
            k.insert_edge(g, at, next);
            path.push(next as usize);
            at = next;
        }
        k.insert_vertex(x);
        connectors.push(path);
    }
    Ok(ConnectorSet { n, open, connectors, k })
}

/// `H = ⋃_{x ∈ K} B_x ∪ {e : e⁺ ∈ K}`.
pub fn lift_to_g(k: &ConnectorSet, q: &QuotientGraph, t: &TwoEndedTree, w: &Window) -> SubgraphMask {
    let mut index = vec![u32::MAX; w.len()];
    for (i, &x) in q.spine.iter().enumerate() {
        index[x as usize] = i as u32;
    }
    let in_k = |v: VertexId| k.k.contains_vertex(index[t.bush_of(v) as usize]);
    let mut h = w.empty_mask();
    for v in 0..w.len() as VertexId {
        if in_k(v) {
            h.insert_vertex(v);
        }
    }
    for (e, &(u, v)) in w.edges().iter().enumerate() {
        let (a, b) = (index[t.bush_of(u) as usize], index[t.bush_of(v) as usize]);
        let keep = if a == b { in_k(u) && t.tree.contains_edge_id(e as u32) } else { k.k.contains_edge(&q.graph, a, b) };
        if keep {
            h.insert_edge_id_in(w, e as u32);
        }
    }
    h
}

/// `dist_{B⁺}(x_{-n}, x_n) / 2n` for each `n`, from the quotient's own base.
pub fn distance_ratio_profile(q: &QuotientGraph, ns: &[usize]) -> Result<Vec<(usize, f64)>> {
    let mut bfs = Bfs::new(q.len());
    ns.iter()
        .map(|&n| {
            let end = |p: i64| {
                q.index_at(p)
                    .filter(|&i| q.graph.is_core(i as VertexId))
                    .ok_or(Error::ExceedsWindow(p))
            };
            let (a, b) = (end(-(n as i64))?, end(n as i64)?);
            let d = bfs.run_one(&q.graph, a as VertexId, b as VertexId).expect("quotient graph is connected");
            Ok((n, d as f64 / (2 * n) as f64))
        })
        .collect()
}

/// Spine indices from which positions `±n` land in the core for every `n`
/// in `ns` (either orientation).
pub fn admissible_bases(q: &QuotientGraph, ns: &[usize]) -> Vec<usize> {
    let core = |j: i64| (0..q.len() as i64).contains(&j) && q.graph.is_core(j as VertexId);
    (0..q.len() as i64)
        .filter(|&i| core(i) && ns.iter().all(|&n| core(i - n as i64) && core(i + n as i64)))
        .map(|i| i as usize)
        .collect()
}

/// Ratio profile averaged over replicas: for each `n`, each seed picks a
/// uniform base among those whose `±n` positions are in the core, and a fair
/// orientation.
pub fn ratio_profile_replicas(q: &QuotientGraph, ns: &[usize], seeds: &[u64], mode: Mode) -> Result<Vec<(usize, EstimateReport)>> {
    let mut bases = Vec::with_capacity(ns.len());
    for &n in ns {
        let b = admissible_bases(q, &[n]);
        if b.is_empty() {
            return Err(Error::ExceedsWindow(n as i64));
        }
        bases.push(b);
    }
    let runs = map_seeds(seeds, mode, |seed| {
        let f = LabelField::new(seed);
        let (pick, orient) = (f.stream("base"), f.stream("orient"));
        ns.iter()
            .zip(&bases)
            .enumerate()
            .map(|(j, (&n, b))| {
                let base = b[((pick.at(j as u64) * b.len() as f64) as usize).min(b.len() - 1)];
                let orientation = if orient.at(j as u64) < 0.5 { 1 } else { -1 };
                Ok(distance_ratio_profile(&q.reanchored(base, orientation), &[n])?[0].1)
            })
            .collect::<Result<Vec<f64>>>()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    ns.iter()
        .enumerate()
        .map(|(j, &n)| Ok((n, estimate(&runs.iter().map(|r| r[j]).collect::<Vec<_>>())?)))
        .collect()
}

/// One replica's two sides of the transport bound on the measured stretch
/// (core spine vertices with both `o-` and `o+` in the window).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSample {
    /// Fraction of measured vertices in `K_n`.
    pub lhs: f64,
    /// `2 · mean(dist(o, o+) / (o+ - o))`.
    pub rhs: f64,
    /// Part of `rhs` from gaps `o+ - o <= M`.
    pub head: f64,
    pub tail: f64,
}

pub fn bound_sample(q: &QuotientGraph, cs: &ConnectorSet, m: usize) -> Option<BoundSample> {
    let mut bfs = Bfs::new(q.len());
    let positions: Vec<i64> = cs.open.iter().map(|&i| q.position(i)).collect();
    // open vertices in increasing position
    let mut by_pos: Vec<(i64, usize)> = positions.iter().copied().zip(cs.open.iter().copied()).collect();
    by_pos.sort_unstable();
    let (mut inside, mut hits, mut head, mut tail) = (0usize, 0usize, 0.0, 0.0);
    for pair in by_pos.windows(2) {
        let ((p0, _), (p1, y)) = (pair[0], pair[1]);
        // o ranges over positions p0 ..= p1 - 1, all with o+ = y
        let members: Vec<usize> = (p0..p1)
            .filter_map(|p| q.index_at(p))
            .filter(|&i| q.graph.is_core(i as VertexId))
            .collect();
        if members.is_empty() {
            continue;
        }
        let targets: Vec<VertexId> = members.iter().map(|&i| i as VertexId).collect();
        bfs.run(&q.graph, y as VertexId, &targets);
        for &o in &members {
            inside += 1;
            if cs.k.contains_vertex(o as VertexId) {
                hits += 1;
            }
            let gap = (p1 - q.position(o)) as usize;
            let term = 2.0 * bfs.get(o as VertexId).unwrap() as f64 / gap as f64;
            if gap <= m {
                head += term;
            } else {
                tail += term;
            }
        }
    }
    (inside > 0).then(|| {
        let n = inside as f64;
        BoundSample { lhs: hits as f64 / n, rhs: (head + tail) / n, head: head / n, tail: tail / n }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginalBound {
    pub n: u32,
    pub lhs: EstimateReport,
    pub rhs: EstimateReport,
    pub head: EstimateReport,
    pub tail: EstimateReport,
    /// Replica estimate of `rhs - lhs`.
    pub slack: EstimateReport,
    /// Replicas with fewer than two open vertices or no measured vertex.
    pub degenerate: usize,
}

impl MarginalBound {
    /// `lhs <= rhs` within three standard errors of the slack.
    pub fn holds(&self) -> bool {
        self.slack.mean >= -3.0 * self.slack.se_or_zero()
    }
}

/// `P(o ∈ K_n)` against `2 E[dist(o, o+) / (o+ - o)]` over replicas. Each
/// seed draws its own percolation and orientation.
pub fn marginal_bound_check(q: &QuotientGraph, n: u32, m: usize, seeds: &[u64], mode: Mode) -> Result<MarginalBound> {
    let runs = map_seeds(seeds, mode, |seed| {
        let f = LabelField::new(seed);
        let orientation = if f.stream("orient").at(0) < 0.5 { 1 } else { -1 };
        let q = q.reanchored(q.root_index, orientation);
        match bernoulli_connectors(&q, n, &f) {
            Ok(cs) => Ok(bound_sample(&q, &cs, m)),
            Err(Error::DegenerateSample(_)) => Ok(None),
            Err(e) => Err(e),
        }
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let good: Vec<BoundSample> = runs.iter().flatten().copied().collect();
    let pick = |f: fn(&BoundSample) -> f64| estimate(&good.iter().map(f).collect::<Vec<_>>());
    Ok(MarginalBound {
        n,
        lhs: pick(|s| s.lhs)?,
        rhs: pick(|s| s.rhs)?,
        head: pick(|s| s.head)?,
        tail: pick(|s| s.tail)?,
        slack: pick(|s| s.rhs - s.lhs)?,
        degenerate: runs.len() - good.len(),
    })
}

/// `o` sends `1 / (o+ - o-)` to every vertex of `C_{o-, o+}`.
pub struct ConnectorRule<'a> {
    cs: &'a ConnectorSet,
    orientation: i64,
}

impl<'a> ConnectorRule<'a> {
    pub fn new(cs: &'a ConnectorSet, orientation: i64) -> Self {
        ConnectorRule { cs, orientation }
    }
}

impl TransportRule for ConnectorRule<'_> {
    fn sends(&self, _w: &Window, from: VertexId, out: &mut Vec<(VertexId, f64)>) {
        if let Some(j) = self.cs.connector_of(from as usize, self.orientation) {
            let c = &self.cs.connectors[j];
            let gap = (self.cs.open[j + 1] - self.cs.open[j]) as f64;
            out.extend(c.iter().map(|&v| (v as VertexId, 1.0 / gap)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_components, is_connected};
    use crate::stats::{mtp_check, received_mass};
    use crate::substrates::snake_tree;

    fn path_quotient(n: usize) -> (Window, TwoEndedTree, QuotientGraph) {
        let w = Window::lattice(n, 1, false, 0).unwrap();
        let t = snake_tree(&w, false).unwrap();
        let q = quotient_graph(&w, &t, &LabelField::new(0)).unwrap();
        (w, t, q)
    }

    #[test]
    fn path_quotient_is_the_path() {
        let (w, _, q) = path_quotient(12);
        assert_eq!(q.graph.edges(), w.edges());
        let prof = distance_ratio_profile(&q, &[1, 3, 5]).unwrap();
        assert!(prof.iter().all(|&(_, r)| r == 1.0));
        assert_eq!(distance_ratio_profile(&q, &[7]), Err(Error::ExceedsWindow(-7)));
    }

    #[test]
    fn folded_snake_has_chords() {
        let w = Window::lattice(4, 4, false, 0).unwrap();
        let t = snake_tree(&w, false).unwrap();
        let q = quotient_graph(&w, &t, &LabelField::new(0)).unwrap();
        assert_eq!(q.len(), 16);
        // spine 0..3 runs right along row 0, 4..7 left along row 1: (0,0) sits below (0,1) = index 7
        assert!(q.graph.edge_between(0, 7).is_some());
        assert_eq!(q.graph.edge_count(), w.edge_count());
        let tp = snake_tree(&w, true).unwrap();
        let qp = quotient_graph(&w, &tp, &LabelField::new(0)).unwrap();
        assert_eq!(qp.len(), 9);
        assert!(is_connected(&qp.graph, &qp.graph.full_mask()));
    }

    #[test]
    fn all_open_gives_the_spine() {
        let (w, t, q) = path_quotient(10);
        let cs = bernoulli_connectors(&q, 0, &LabelField::new(4)).unwrap();
        assert_eq!(cs.open.len(), 10);
        assert_eq!(cs.k.edge_count(), 9);
        let h = lift_to_g(&cs, &q, &t, &w);
        assert_eq!(h.vertex_count(), 10);
    }

    #[test]
    fn chord_is_the_connector() {
        // path 0..9 plus the chord {0, 9}, open = {0, 9}
        let w = Window::from_edges(
            10,
            (0..9).map(|i| (i, i + 1)).chain([(0, 9)]),
            (0..10).map(|i| (i, 0)).collect(),
            5,
            vec![true; 10],
            false,
        )
        .unwrap();
        let spine: Vec<VertexId> = (0..10).collect();
        let t = TwoEndedTree::new(&w, spine, &[]);
        let q = quotient_graph(&w, &t, &LabelField::new(0)).unwrap();
        // find a seed where exactly 0 and 9 are open at n = 3
        let seed = (0..20_000u64)
            .find(|&s| {
                let st = LabelField::new(s).stream("perc-3");
                (0..10).all(|i| (st.vertex(i) < 0.125) == (i == 0 || i == 9))
            })
            .unwrap();
        let cs = bernoulli_connectors(&q, 3, &LabelField::new(seed)).unwrap();
        assert_eq!(cs.connectors, vec![vec![0, 9]]);
        assert_eq!(cs.k.vertex_count(), 2);
    }

    #[test]
    fn connectors_on_snake_and_transport() {
        let w = Window::lattice(16, 16, true, 0).unwrap();
        let t = snake_tree(&w, false).unwrap();
        let q = quotient_graph(&w, &t, &LabelField::new(1)).unwrap();
        assert!(q.graph.wrap());
        for seed in 0..5 {
            let cs = bernoulli_connectors(&q, 3, &LabelField::new(seed)).unwrap();
            for (c, pair) in cs.connectors.iter().zip(cs.open.windows(2)) {
                let d = Bfs::new(q.len()).run_one(&q.graph, pair[0] as VertexId, pair[1] as VertexId).unwrap();
                assert_eq!(c.len(), d as usize + 1);
            }
            assert_eq!(connected_components(&q.graph, &cs.k).len(), 1);
            let h = lift_to_g(&cs, &q, &t, &w);
            assert!(is_connected(&w, &h));
            for orientation in [1, -1] {
                let rule = ConnectorRule::new(&cs, orientation);
                let (out, inn) = mtp_check(&q.graph, &rule).unwrap();
                assert!((out - inn).abs() <= 1e-9 * out.abs().max(1.0));
                let got = received_mass(&q.graph, &rule);
                for v in cs.k.vertices() {
                    assert!(got[v as usize] >= 1.0 - 1e-9);
                }
            }
        }
    }
}
