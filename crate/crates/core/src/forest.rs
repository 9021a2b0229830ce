//! One-ended spanning trees grown stage by stage around a decreasing
//! sequence of connected subgraphs `H_0 ⊇ H_1 ⊇ …`.
//!
//! Stage `n` holds a forest `F_n` spanning `V \ H_{k(n)}`. Each component is
//! hung from one anchor in the annulus `H_{k(n)} \ H_{k(n+1)}`, a BFS forest
//! is grown inside the annulus from its upper boundary, components lying in
//! one block of the level-`m(n)` partition are merged, and the union is
//! `F_{n+1}`. Every random choice is a minimum over a named label stream.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{
    bfs_layers, component_labels, connected_components, is_connected, is_forest, DisjointSets, EdgeId, SubgraphMask,
    VertexId, Window,
};
use crate::hierarchy::{build_block_hierarchy, Hierarchy};
use crate::labels::{LabelField, LabelStream};
use crate::substrates::{dyadic_exponent, gridline_subgraph};

/// Diagnostics of one forest `F_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub n: usize,
    /// `k(n)`: index of the H level this forest avoids.
    pub k: usize,
    /// `m(n-1)`: partition level used for the merge that produced `F_n`.
    pub m: Option<u32>,
    /// Fraction of adjacent core pairs joined in `F_n`.
    pub connectivity: f64,
    /// `1 - 2^-n`.
    pub bound: f64,
    /// Fraction of adjacent core pairs of `F_{n-1}` whose anchors are joined
    /// in the merged annulus forest.
    pub anchor_connectivity: Option<f64>,
    pub components: usize,
    /// Components of `F_{n-1}` carried over without an anchor.
    pub pending: usize,
    pub vertices: usize,
}

#[derive(Debug, Clone)]
pub struct ForestState {
    pub n: usize,
    pub forest: SubgraphMask,
    /// `k(0), …, k(n)`.
    pub k: Vec<usize>,
    /// Per attachment stage: `(min vertex of C, v(C))`.
    pub anchors: Vec<Vec<(VertexId, VertexId)>>,
    pub history: Vec<StageRecord>,
    /// First `n` with `v ∈ F_n`.
    entered: Vec<Option<usize>>,
    /// `v(C)` for the component `C` of `v` in the first forest containing `v`.
    anchor_of: Vec<Option<VertexId>>,
}

impl ForestState {
    /// `F_0 = ∅` with `k(0) = 0`.
    pub fn new(w: &Window) -> Self {
        let forest = w.empty_mask();
        let record = StageRecord {
            n: 0,
            k: 0,
            m: None,
            connectivity: 0.0,
            bound: 0.0,
            anchor_connectivity: None,
            components: 0,
            pending: 0,
            vertices: 0,
        };
        ForestState {
            n: 0,
            forest,
            k: vec![0],
            anchors: Vec::new(),
            history: vec![record],
            entered: vec![None; w.len()],
            anchor_of: vec![None; w.len()],
        }
    }

    pub fn entered(&self, v: VertexId) -> Option<usize> {
        self.entered[v as usize]
    }

    pub fn anchor_of(&self, v: VertexId) -> Option<VertexId> {
        self.anchor_of[v as usize]
    }
}

fn argmin_label<I: Iterator<Item = VertexId>>(it: I, label: impl Fn(VertexId) -> f64) -> Option<VertexId> {
    it.map(|v| (label(v), v)).min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))).map(|p| p.1)
}

fn core_edges(w: &Window) -> Vec<(VertexId, VertexId)> {
    w.edges().iter().copied().filter(|&(u, v)| w.is_core(u) && w.is_core(v)).collect()
}

/// Fraction of adjacent core pairs lying in one component of `f`.
pub fn pair_connectivity(w: &Window, f: &SubgraphMask) -> f64 {
    let pairs = core_edges(w);
    if pairs.is_empty() {
        return 0.0;
    }
    let labels = component_labels(w, f);
    joined_fraction(&pairs, &labels)
}

fn joined_fraction(pairs: &[(VertexId, VertexId)], labels: &[u32]) -> f64 {
    let joined = pairs
        .iter()
        .filter(|&&(u, v)| labels[u as usize] != u32::MAX && labels[u as usize] == labels[v as usize])
        .count();
    joined as f64 / pairs.len() as f64
}

/// Makes a sequence of connected subgraphs nested. Where `H_n` and
/// `H_{n+1}` are at distance `k > 0`, each vertex of `H_n` at that distance
/// contributes a fixed shortest path to `H_{n+1}` with probability
/// `eps / (k + 1)`; level `n` of the output is the union of all modified
/// levels `i >= n`. On a finite window at least one path is always taken
/// (the one with the smallest label) so the output stays connected.
pub fn nest_sequence(w: &Window, hs: &[SubgraphMask], eps: f64, labels: &LabelField) -> Result<Vec<SubgraphMask>> {
    if hs.is_empty() {
        return Err(Error::EmptySequence);
    }
    for (i, h) in hs.iter().enumerate() {
        if h.vertex_count() == 0 || !is_connected(w, h) {
            return Err(Error::DisconnectedLevel(i));
        }
    }
    let full = w.full_mask();
    let mut modified: Vec<SubgraphMask> = hs.to_vec();
    for n in 0..hs.len() - 1 {
        let sources: Vec<VertexId> = hs[n + 1].vertices().collect();
        let dist = bfs_layers(w, &full, &sources);
        let k = hs[n].vertices().map(|v| dist[v as usize]).min().unwrap();
        if k == 0 {
            continue;
        }
        let pick = labels.stream(&format!("nest:{n}"));
        let step = labels.stream(&format!("nest-path:{n}"));
        let starts: Vec<VertexId> = hs[n].vertices().filter(|&v| dist[v as usize] == k).collect();
        let p = eps / (k + 1) as f64;
        let mut chosen: Vec<VertexId> = starts.iter().copied().filter(|&v| pick.vertex(v) < p).collect();
        if chosen.is_empty() {
            chosen.extend(argmin_label(starts.iter().copied(), |v| pick.vertex(v)));
        }
        for start in chosen {
            let mut at = start;
            while dist[at as usize] > 0 {
                let next = argmin_label(
                    w.neighbors(at).iter().map(|&(y, _)| y).filter(|&y| dist[y as usize] + 1 == dist[at as usize]),
                    |y| step.edge(at, y),
                )
                .unwrap();
                modified[n].insert_edge(w, at, next);
                at = next;
            }
        }
    }
    let mut out = modified.clone();
    for n in (0..out.len().saturating_sub(1)).rev() {
        let tail = out[n + 1].clone();
        out[n].union_with(&tail);
    }
    Ok(out)
}

/// `F_n^+`: every component `C` of `f` gets the anchor `v(C)`, the
/// minimum-label vertex of `targets` adjacent to `C`, joined to `C` by the
/// single minimum-label edge between them. Returns the forest and
/// `(min vertex of C, v(C))` in component order.
pub fn attach_components(
    w: &Window,
    f: &SubgraphMask,
    targets: &SubgraphMask,
    labels: &LabelField,
    n: usize,
) -> Result<(SubgraphMask, Vec<(VertexId, VertexId)>)> {
    let (out, anchors) = attach_available(w, f, targets, labels, n)?;
    anchors
        .into_iter()
        .map(|(c, a)| a.map(|a| (c, a)).ok_or(Error::AdjacencyPrecondition(c as usize)))
        .collect::<Result<Vec<_>>>()
        .map(|anchors| (out, anchors))
}

/// `(min vertex of the component, its anchor)`; `None` while pending.
pub type AnchorPick = (VertexId, Option<VertexId>);

/// As [`attach_components`], but a component with no neighbour in
/// `targets` is left as it is and reported with anchor `None`.
pub fn attach_available(
    w: &Window,
    f: &SubgraphMask,
    targets: &SubgraphMask,
    labels: &LabelField,
    n: usize,
) -> Result<(SubgraphMask, Vec<AnchorPick>)> {
    let anchor_stream = labels.stream(&format!("anchor:{n}"));
    let edge_stream = labels.stream(&format!("anchor-edge:{n}"));
    let comps = connected_components(w, f);
    let mut out = f.clone();
    let mut anchors = Vec::with_capacity(comps.len());
    let mut seen = vec![false; w.len()];
    for c in &comps {
        let mut eligible = Vec::new();
        for &u in c {
            for &(y, _) in w.neighbors(u) {
                if targets.contains_vertex(y) && !f.contains_vertex(y) && !seen[y as usize] {
                    seen[y as usize] = true;
                    eligible.push(y);
                }
            }
        }
        for &y in &eligible {
            seen[y as usize] = false;
        }
        let Some(a) = argmin_label(eligible.into_iter(), |v| anchor_stream.vertex(v)) else {
            anchors.push((c[0], None));
            continue;
        };
        let u = argmin_label(
            w.neighbors(a).iter().map(|&(y, _)| y).filter(|&y| c.binary_search(&y).is_ok()),
            |y| edge_stream.edge(a, y),
        )
        .unwrap();
        out.insert_edge(w, a, u);
        anchors.push((c[0], Some(a)));
    }
    if !is_forest(w, &out) {
        return Err(Error::CertificateViolation("attaching components created a cycle".into()));
    }
    Ok((out, anchors))
}

/// `F^-`: BFS forest of the annulus `H_kn \ H_knext`, grown along edges of
/// `H_kn` from the annulus vertices adjacent to `H_knext`. Each vertex at
/// depth `i >= 1` takes its minimum-label edge to depth `i - 1`, so every
/// component holds exactly one root.
pub fn annulus_forest(
    w: &Window,
    h_kn: &SubgraphMask,
    h_knext: &SubgraphMask,
    labels: &LabelField,
    n: usize,
) -> Result<SubgraphMask> {
    if !h_knext.is_vertex_subset_of(h_kn) {
        return Err(Error::NotNested);
    }
    let in_annulus = |v: VertexId| h_kn.contains_vertex(v) && !h_knext.contains_vertex(v);
    let mut annulus = w.empty_mask();
    let mut roots = Vec::new();
    for v in h_kn.vertices().filter(|&v| in_annulus(v)) {
        annulus.insert_vertex(v);
        if w.neighbors(v).iter().any(|&(y, e)| h_kn.contains_edge_id(e) && h_knext.contains_vertex(y)) {
            roots.push(v);
        }
    }
    for v in annulus.vertices().collect::<Vec<_>>() {
        for &(y, e) in w.neighbors(v) {
            if v < y && annulus.contains_vertex(y) && h_kn.contains_edge_id(e) {
                annulus.insert_edge_id_in(w, e);
            }
        }
    }
    let depth = bfs_layers(w, &annulus, &roots);
    let stream = labels.stream(&format!("annulus:{n}"));
    let mut out = w.empty_mask();
    for v in annulus.vertices() {
        out.insert_vertex(v);
        let d = depth[v as usize];
        if d == 0 || d == usize::MAX {
            continue;
        }
        let parent = argmin_label(
            w.neighbors(v)
                .iter()
                .filter(|&&(y, e)| annulus.contains_edge_id(e) && depth[y as usize] + 1 == d)
                .map(|&(y, _)| y),
            |y| stream.edge(v, y),
        )
        .unwrap();
        out.insert_edge(w, v, parent);
    }
    Ok(out)
}

/// Candidate merge edges of a forest, precomputed once and reused across
/// partition levels.
struct MergePlan {
    comp: Vec<u32>,
    members: Vec<VertexId>,
    count: usize,
    candidates: Vec<(EdgeId, u32, u32)>,
}

impl MergePlan {
    fn new(w: &Window, f: &SubgraphMask, stream: &LabelStream) -> Self {
        let comp = component_labels(w, f);
        let members: Vec<VertexId> = f.vertices().collect();
        let count = members.iter().map(|&v| comp[v as usize] + 1).max().unwrap_or(0) as usize;
        let mut cands: Vec<(f64, EdgeId, u32, u32)> = w
            .edges()
            .iter()
            .enumerate()
            .filter_map(|(e, &(u, v))| {
                let (cu, cv) = (comp[u as usize], comp[v as usize]);
                (cu != u32::MAX && cv != u32::MAX && cu != cv).then(|| (stream.edge(u, v), e as EdgeId, cu, cv))
            })
            .collect();
        cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        MergePlan { comp, members, count, candidates: cands.into_iter().map(|c| (c.1, c.2, c.3)).collect() }
    }

    /// Class containing each component entirely, if any.
    fn contained_class(&self, h: &Hierarchy, m: u32) -> Vec<Option<u32>> {
        let mut class: Vec<Option<Option<u32>>> = vec![None; self.count];
        for &v in &self.members {
            let c = self.comp[v as usize] as usize;
            let k = h.class_unchecked(m, v);
            class[c] = match class[c] {
                None => Some(Some(k)),
                Some(Some(prev)) if prev == k => Some(Some(k)),
                _ => Some(None),
            };
        }
        class.into_iter().map(|c| c.flatten()).collect()
    }

    fn apply(&self, w: &Window, f: &SubgraphMask, h: &Hierarchy, m: u32) -> SubgraphMask {
        let class = self.contained_class(h, m);
        let mut dsu = DisjointSets::new(self.count);
        let mut out = f.clone();
        for &(e, cu, cv) in &self.candidates {
            let (ku, kv) = (class[cu as usize], class[cv as usize]);
            if ku.is_some() && ku == kv && dsu.union(cu, cv) {
                out.insert_edge_id_in(w, e);
            }
        }
        out
    }
}

/// `F'`: for each class of level `m`, joins the components of `fminus` lying
/// entirely inside it by window edges in ascending label order while the
/// result stays acyclic.
pub fn merge_within_classes(
    w: &Window,
    fminus: &SubgraphMask,
    h: &Hierarchy,
    m: u32,
    labels: &LabelField,
    n: usize,
) -> Result<SubgraphMask> {
    if m > h.max_level() {
        return Err(Error::LevelExceedsWindow { level: m, max: h.max_level() });
    }
    let plan = MergePlan::new(w, fminus, &labels.stream(&format!("merge:{n}")));
    Ok(plan.apply(w, fminus, h, m))
}

/// Builds `F_{n+1}`. `k(n+1)` is the smallest level above `k(n)` at which
/// some merge level reaches pair-connectivity `1 - 2^-(n+1)`; `m(n)` is the
/// smallest such merge level. Components of `F_n` with no neighbour in the
/// annulus (they only touch levels that persist further) are carried over
/// unattached and anchored at a later stage.
pub fn step(w: &Window, st: ForestState, hs: &[SubgraphMask], h: &Hierarchy, labels: &LabelField) -> Result<ForestState> {
    let n = st.n;
    let kn = *st.k.last().unwrap();
    let target = 1.0 - 0.5f64.powi(n as i32 + 1);
    let pairs = core_edges(w);
    let merge_stream = labels.stream(&format!("merge:{n}"));
    for k_next in kn + 1..hs.len() {
        let mut annulus = w.empty_mask();
        for v in hs[kn].vertices().filter(|&v| !hs[k_next].contains_vertex(v)) {
            annulus.insert_vertex(v);
        }
        let (fplus, anchors) = attach_available(w, &st.forest, &annulus, labels, n)?;
        let fminus = annulus_forest(w, &hs[kn], &hs[k_next], labels, n)?;
        let plan = MergePlan::new(w, &fminus, &merge_stream);
        for m in 0..=h.max_level() {
            let fprime = plan.apply(w, &fminus, h, m);
            let mut next = fprime.clone();
            next.union_with(&fplus);
            let comp = component_labels(w, &next);
            let connectivity = joined_fraction(&pairs, &comp);
            if connectivity < target {
                continue;
            }
            if !is_forest(w, &next) {
                return Err(Error::CertificateViolation(format!("F_{} is not a forest", n + 1)));
            }
            return Ok(advance(w, st, next, &fprime, &anchors, k_next, m, connectivity, &pairs, &comp));
        }
    }
    Err(Error::WindowExhausted(n))
}

#[allow(clippy::too_many_arguments)]
fn advance(
    w: &Window,
    mut st: ForestState,
    next: SubgraphMask,
    fprime: &SubgraphMask,
    anchors: &[(VertexId, Option<VertexId>)],
    k_next: usize,
    m: u32,
    connectivity: f64,
    pairs: &[(VertexId, VertexId)],
    comp: &[u32],
) -> ForestState {
    let n = st.n;
    // per-vertex anchor through the component of F_n
    let old = component_labels(w, &st.forest);
    let mut anchor_now = vec![None; w.len()];
    for v in st.forest.vertices() {
        let a = anchors[old[v as usize] as usize].1;
        anchor_now[v as usize] = a;
        if st.anchor_of[v as usize].is_none() {
            st.anchor_of[v as usize] = a;
        }
    }
    let anchor_connectivity = (n > 0).then(|| {
        let merged = component_labels(w, fprime);
        let eligible: Vec<_> = pairs
            .iter()
            .filter(|&&(u, v)| anchor_now[u as usize].is_some() && anchor_now[v as usize].is_some())
            .collect();
        let joined = eligible
            .iter()
            .filter(|&&&(u, v)| merged[anchor_now[u as usize].unwrap() as usize] == merged[anchor_now[v as usize].unwrap() as usize])
            .count();
        if eligible.is_empty() {
            0.0
        } else {
            joined as f64 / eligible.len() as f64
        }
    });
    for v in next.vertices() {
        if st.entered[v as usize].is_none() {
            st.entered[v as usize] = Some(n + 1);
        }
    }
    let components = comp.iter().filter(|&&c| c != u32::MAX).max().map_or(0, |&c| c as usize + 1);
    st.history.push(StageRecord {
        n: n + 1,
        k: k_next,
        m: Some(m),
        connectivity,
        bound: 1.0 - 0.5f64.powi(n as i32 + 1),
        anchor_connectivity,
        components,
        pending: anchors.iter().filter(|a| a.1.is_none()).count(),
        vertices: next.vertex_count(),
    });
    st.anchors.push(anchors.iter().filter_map(|&(c, a)| a.map(|a| (c, a))).collect());
    st.k.push(k_next);
    st.forest = next;
    st.n = n + 1;
    st
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildConfig {
    pub eps: f64,
    pub max_stage: Option<usize>,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig { eps: 0.5, max_stage: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeReport {
    pub stages: Vec<StageRecord>,
    /// Edges added after the last stage to join the remaining components.
    pub closure_edges: usize,
    /// Stage at which no admissible level was left, if the run stopped early.
    pub exhausted_at: Option<usize>,
    pub levels: usize,
}

#[derive(Debug, Clone)]
pub struct BuiltTree {
    pub tree: SubgraphMask,
    pub report: TreeReport,
    pub state: ForestState,
}

/// The level sequence used on a `2^s` window: gridlines of spacing
/// `1, 2, …, 2^s`, then the single crossing point of the two axis lines.
pub fn dyadic_levels(w: &Window) -> Result<Vec<SubgraphMask>> {
    let s = dyadic_exponent(w)?;
    let mut hs = (0..=s).map(|n| gridline_subgraph(w, n)).collect::<Result<Vec<_>>>()?;
    let mut origin = w.empty_mask();
    origin.insert_vertex(w.vertex_at(0, 0).unwrap());
    hs.push(origin);
    Ok(hs)
}

/// Runs the stages until the levels run out and joins what is left with
/// minimum-label edges (stream `"closure"`) into a spanning tree.
pub fn build_one_ended_tree(w: &Window, labels: &LabelField, cfg: &BuildConfig) -> Result<BuiltTree> {
    let h = build_block_hierarchy(w)?;
    let hs = nest_sequence(w, &dyadic_levels(w)?, cfg.eps, labels)?;
    let mut st = ForestState::new(w);
    let mut exhausted_at = None;
    while *st.k.last().unwrap() + 1 < hs.len() && cfg.max_stage.is_none_or(|cap| st.n < cap) {
        let n = st.n;
        let snapshot = st.clone();
        match step(w, st, &hs, &h, labels) {
            Ok(next) => st = next,
            Err(Error::WindowExhausted(_)) => {
                exhausted_at = Some(n);
                st = snapshot;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let (tree, closure_edges) = close_forest(w, &st.forest, &hs[*st.k.last().unwrap()], labels);
    let report = TreeReport { stages: st.history.clone(), closure_edges, exhausted_at, levels: hs.len() };
    Ok(BuiltTree { tree, report, state: st })
}

/// Kruskal completion of a forest to a spanning tree; returns the tree and
/// the number of edges added. Edges touching `sink` (the last level
/// reached) go first, so what is left hangs from the sink rather than being
/// cross-linked at arbitrary points.
pub fn close_forest(w: &Window, f: &SubgraphMask, sink: &SubgraphMask, labels: &LabelField) -> (SubgraphMask, usize) {
    let stream = labels.stream("closure");
    let mut dsu = DisjointSets::new(w.len());
    for (u, v) in f.edges(w) {
        dsu.union(u, v);
    }
    let mut order: Vec<(bool, f64, EdgeId)> = w
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            let far = !(sink.contains_vertex(u) || sink.contains_vertex(v));
            (far, stream.edge(u, v), e as EdgeId)
        })
        .collect();
    order.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut tree = f.clone();
    for v in 0..w.len() as VertexId {
        tree.insert_vertex(v);
    }
    let mut added = 0;
    for (_, _, e) in order {
        let (u, v) = w.edge(e);
        if dsu.union(u, v) {
            tree.insert_edge_id_in(w, e);
            added += 1;
        }
    }
    (tree, added)
}

/// Distribution of the anchor-cut statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct EndProxy {
    /// Piece size per anchored core vertex.
    pub sizes: Vec<usize>,
    /// `floor(log2(size))` → count.
    pub histogram: BTreeMap<u32, usize>,
    pub mean: f64,
    pub p99: usize,
    /// Core vertices never attached to an anchor (absorbed at the last stage).
    pub unanchored: usize,
}

/// For every core vertex `v` with anchor `a = v(C)`, the size of the
/// component of `v` in `tree \ {a}`.
pub fn end_proxy_stats(w: &Window, tree: &SubgraphMask, st: &ForestState) -> Result<EndProxy> {
    if st.anchors.is_empty() {
        return Err(Error::StateRequired("anchor history"));
    }
    let n = w.len();
    // iterative DFS rooted at vertex 0: preorder index, subtree size, children by preorder
    let mut tin = vec![usize::MAX; n];
    let mut size = vec![1usize; n];
    let mut parent = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0 as VertexId];
    tin[0] = 0;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &(y, e) in w.neighbors(x) {
            if tree.contains_edge_id(e) && tin[y as usize] == usize::MAX {
                tin[y as usize] = 0;
                parent[y as usize] = x;
                stack.push(y);
            }
        }
    }
    for (i, &x) in order.iter().enumerate() {
        tin[x as usize] = i;
    }
    for &x in order.iter().rev() {
        let p = parent[x as usize];
        if p != u32::MAX {
            size[p as usize] += size[x as usize];
        }
    }
    let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for &x in &order {
        let p = parent[x as usize];
        if p != u32::MAX {
            children[p as usize].push(x);
        }
    }
    let mut sizes = Vec::new();
    let mut unanchored = 0;
    for v in w.core_vertices() {
        let Some(a) = st.anchor_of(v) else {
            unanchored += 1;
            continue;
        };
        let (ta, tv) = (tin[a as usize], tin[v as usize]);
        let piece = if tv > ta && tv < ta + size[a as usize] {
            let ch = &children[a as usize];
            let i = ch.partition_point(|&c| tin[c as usize] <= tv) - 1;
            size[ch[i] as usize]
        } else {
            n - size[a as usize]
        };
        sizes.push(piece);
    }
    if sizes.is_empty() {
        return Err(Error::StateRequired("no anchored core vertex"));
    }
    let mut histogram = BTreeMap::new();
    for &s in &sizes {
        *histogram.entry(s.ilog2()).or_insert(0) += 1;
    }
    let mean = sizes.iter().sum::<usize>() as f64 / sizes.len() as f64;
    let mut sorted = sizes.clone();
    sorted.sort_unstable();
    let p99 = sorted[(sorted.len() * 99).div_ceil(100) - 1];
    Ok(EndProxy { sizes, histogram, mean, p99, unanchored })
}
