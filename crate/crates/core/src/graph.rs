//! Finite windows of a substrate graph, subgraph masks over them and the
//! traversal predicates every other module is built on.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;

/// A finite, simple, undirected graph with a marked root and core.
///
/// Vertices are dense ids `0..len()`. Edges are stored once as `(u, v)` with
/// `u < v` and indexed densely, so masks can be plain bit vectors.
#[derive(Debug, Clone)]
pub struct Window {
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    edges: Vec<(VertexId, VertexId)>,
    coords: Vec<(i64, i64)>,
    width: usize,
    height: usize,
    root: VertexId,
    core: Vec<bool>,
    wrap: bool,
}

impl Window {
    /// Builds a window from an explicit edge list. Rejects self-loops and
    /// parallel edges, and requires a regular graph when `wrap` is set.
    pub fn from_edges(
        n: usize,
        edge_list: impl IntoIterator<Item = (VertexId, VertexId)>,
        coords: Vec<(i64, i64)>,
        root: VertexId,
        core: Vec<bool>,
        wrap: bool,
    ) -> Result<Self> {
        if coords.len() != n || core.len() != n {
            return Err(Error::InvalidSubstrate("coordinate/core length mismatch".into()));
        }
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        for (a, b) in edge_list {
            if a as usize >= n || b as usize >= n {
                return Err(Error::VertexOutOfRange(a.max(b) as usize));
            }
            if a == b {
                return Err(Error::InvalidSubstrate(format!("self-loop at {a}")));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        if edges.len() != before {
            return Err(Error::InvalidSubstrate("parallel edges".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for (id, &(a, b)) in edges.iter().enumerate() {
            adj[a as usize].push((b, id as EdgeId));
            adj[b as usize].push((a, id as EdgeId));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        if root as usize >= n {
            return Err(Error::VertexOutOfRange(root as usize));
        }
        if !core[root as usize] {
            return Err(Error::InvalidSubstrate("root outside core".into()));
        }
        if wrap && n > 0 {
            let d = adj[0].len();
            if adj.iter().any(|l| l.len() != d) {
                return Err(Error::InvalidSubstrate("wrapped window is not regular".into()));
            }
        }
        let (width, height) = bounding_dims(&coords);
        Ok(Window { adj, edges, coords, width, height, root, core, wrap })
    }

    /// A `width × height` 4-neighbour lattice, optionally wrapped in both
    /// directions. Vertex id is `y * width + x`; root is the centre and the
    /// core is every vertex at distance `>= margin` from the boundary (all
    /// vertices when wrapped).
    pub fn lattice(width: usize, height: usize, wrap: bool, margin: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidSubstrate("empty lattice".into()));
        }
        if wrap && (width < 3 || height < 3) {
            return Err(Error::InvalidSubstrate("wrapped lattice needs both sides >= 3".into()));
        }
        let id = |x: usize, y: usize| (y * width + x) as VertexId;
        let mut edge_list = Vec::with_capacity(2 * width * height);
        for y in 0..height {
            for x in 0..width {
                if x + 1 < width {
                    edge_list.push((id(x, y), id(x + 1, y)));
                } else if wrap {
                    edge_list.push((id(x, y), id(0, y)));
                }
                if y + 1 < height {
                    edge_list.push((id(x, y), id(x, y + 1)));
                } else if wrap {
                    edge_list.push((id(x, y), id(x, 0)));
                }
            }
        }
        let coords = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x as i64, y as i64)))
            .collect();
        let core = (0..height)
            .flat_map(|y| {
                (0..width).map(move |x| {
                    if wrap {
                        return true;
                    }
                    // 1d strips only have a boundary along their length.
                    let dx = x.min(width - 1 - x);
                    let dy = if height <= 2 { usize::MAX } else { y.min(height - 1 - y) };
                    let dx = if width <= 2 { usize::MAX } else { dx };
                    dx.min(dy) >= margin
                })
            })
            .collect();
        let root = id(width / 2, if height <= 2 { 0 } else { height / 2 });
        let mut w = Window::from_edges(width * height, edge_list, coords, root, core, wrap)?;
        w.width = width;
        w.height = height;
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn wrap(&self) -> bool {
        self.wrap
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn coord(&self, v: VertexId) -> (i64, i64) {
        self.coords[v as usize]
    }

    pub fn vertex_at(&self, x: i64, y: i64) -> Option<VertexId> {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return None;
        }
        let v = y as usize * self.width + x as usize;
        (v < self.len() && self.coords[v] == (x, y)).then_some(v as VertexId)
    }

    pub fn is_core(&self, v: VertexId) -> bool {
        self.core[v as usize]
    }

    pub fn core_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.len() as VertexId).filter(|&v| self.core[v as usize])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    /// Neighbours of `v` with the id of the connecting edge, sorted by neighbour.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v as usize]
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e as usize]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let list = self.adj.get(u as usize)?;
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.len() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v as usize))
        }
    }

    /// Mask with every vertex and every edge.
    pub fn full_mask(&self) -> SubgraphMask {
        SubgraphMask {
            vertices: vec![true; self.len()],
            edges: vec![true; self.edge_count()],
            vertex_count: self.len(),
            edge_count: self.edge_count(),
        }
    }

    pub fn empty_mask(&self) -> SubgraphMask {
        SubgraphMask::empty(self.len(), self.edge_count())
    }

    /// Mask induced by the vertices for which `keep` is true.
    pub fn induced_mask(&self, keep: impl Fn(VertexId) -> bool) -> SubgraphMask {
        let mut m = self.empty_mask();
        for v in 0..self.len() as VertexId {
            if keep(v) {
                m.insert_vertex(v);
            }
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if m.contains_vertex(a) && m.contains_vertex(b) {
                m.insert_edge_id(e as EdgeId);
            }
        }
        m
    }
}

fn bounding_dims(coords: &[(i64, i64)]) -> (usize, usize) {
    let w = coords.iter().map(|c| c.0 + 1).max().unwrap_or(0).max(0) as usize;
    let h = coords.iter().map(|c| c.1 + 1).max().unwrap_or(0).max(0) as usize;
    (w, h)
}

/// A vertex subset plus an edge subset of a [`Window`]. Inserting an edge
/// always inserts both endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphMask {
    vertices: Vec<bool>,
    edges: Vec<bool>,
    vertex_count: usize,
    edge_count: usize,
}

impl SubgraphMask {
    pub fn empty(n_vertices: usize, n_edges: usize) -> Self {
        SubgraphMask {
            vertices: vec![false; n_vertices],
            edges: vec![false; n_edges],
            vertex_count: 0,
            edge_count: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.get(v as usize).copied().unwrap_or(false)
    }

    pub fn contains_edge_id(&self, e: EdgeId) -> bool {
        self.edges[e as usize]
    }

    pub fn contains_edge(&self, w: &Window, u: VertexId, v: VertexId) -> bool {
        w.edge_between(u, v).is_some_and(|e| self.edges[e as usize])
    }

    pub fn insert_vertex(&mut self, v: VertexId) {
        let slot = &mut self.vertices[v as usize];
        if !*slot {
            *slot = true;
            self.vertex_count += 1;
        }
    }

    pub fn remove_vertex(&mut self, w: &Window, v: VertexId) {
        if !self.contains_vertex(v) {
            return;
        }
        for &(_, e) in w.neighbors(v) {
            self.remove_edge_id(e);
        }
        self.vertices[v as usize] = false;
        self.vertex_count -= 1;
    }

    pub fn insert_edge_id_in(&mut self, w: &Window, e: EdgeId) {
        let (a, b) = w.edge(e);
        self.insert_vertex(a);
        self.insert_vertex(b);
        self.insert_edge_id(e);
    }

    fn insert_edge_id(&mut self, e: EdgeId) {
        let slot = &mut self.edges[e as usize];
        if !*slot {
            *slot = true;
            self.edge_count += 1;
        }
    }

    pub fn remove_edge_id(&mut self, e: EdgeId) {
        let slot = &mut self.edges[e as usize];
        if *slot {
            *slot = false;
            self.edge_count -= 1;
        }
    }

    /// Inserts the window edge `{u, v}`; returns false when they are not adjacent.
    pub fn insert_edge(&mut self, w: &Window, u: VertexId, v: VertexId) -> bool {
        match w.edge_between(u, v) {
            Some(e) => {
                self.insert_edge_id_in(w, e);
                true
            }
            None => false,
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(v, _)| v as VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(e, _)| e as EdgeId)
    }

    /// Edges as vertex pairs `(u, v)` with `u < v`.
    pub fn edges<'a>(&'a self, w: &'a Window) -> impl Iterator<Item = (VertexId, VertexId)> + 'a {
        self.edge_ids().map(move |e| w.edge(e))
    }

    pub fn union_with(&mut self, other: &SubgraphMask) {
        for (v, &b) in other.vertices.iter().enumerate() {
            if b {
                self.insert_vertex(v as VertexId);
            }
        }
        for (e, &b) in other.edges.iter().enumerate() {
            if b {
                self.insert_edge_id(e as EdgeId);
            }
        }
    }

    pub fn is_vertex_subset_of(&self, other: &SubgraphMask) -> bool {
        self.vertices.iter().zip(&other.vertices).all(|(&a, &b)| !a || b)
    }

    pub fn is_subset_of(&self, other: &SubgraphMask) -> bool {
        self.is_vertex_subset_of(other)
            && self.edges.iter().zip(&other.edges).all(|(&a, &b)| !a || b)
    }

    /// Checks the mask invariant: every edge's endpoints are present.
    pub fn is_consistent(&self, w: &Window) -> bool {
        self.vertices.len() == w.len()
            && self.edges.len() == w.edge_count()
            && self.edge_ids().all(|e| {
                let (a, b) = w.edge(e);
                self.contains_vertex(a) && self.contains_vertex(b)
            })
    }
}

/// Shortest-path length from `u` to `v` using only the mask's edges.
/// `Ok(None)` means unreachable (or an endpoint outside the mask).
pub fn bfs_dist(w: &Window, m: &SubgraphMask, u: VertexId, v: VertexId) -> Result<Option<usize>> {
    w.check_vertex(u)?;
    w.check_vertex(v)?;
    if !m.contains_vertex(u) || !m.contains_vertex(v) {
        return Ok(None);
    }
    if u == v {
        return Ok(Some(0));
    }
    let mut dist = vec![usize::MAX; w.len()];
    let mut queue = VecDeque::from([u]);
    dist[u as usize] = 0;
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize];
        for &(y, e) in w.neighbors(x) {
            if m.contains_edge_id(e) && dist[y as usize] == usize::MAX {
                if y == v {
                    return Ok(Some(d + 1));
                }
                dist[y as usize] = d + 1;
                queue.push_back(y);
            }
        }
    }
    Ok(None)
}

/// Multi-source BFS distances from `sources` inside the mask; `usize::MAX` = unreachable.
pub fn bfs_layers(w: &Window, m: &SubgraphMask, sources: &[VertexId]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; w.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if m.contains_vertex(s) && dist[s as usize] == usize::MAX {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize];
        for &(y, e) in w.neighbors(x) {
            if m.contains_edge_id(e) && dist[y as usize] == usize::MAX {
                dist[y as usize] = d + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Connected components of the mask, each sorted, ordered by minimum vertex id.
pub fn connected_components(w: &Window, m: &SubgraphMask) -> Vec<Vec<VertexId>> {
    let labels = component_labels(w, m);
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    for v in m.vertices() {
        let c = labels[v as usize] as usize;
        if c == comps.len() {
            comps.push(Vec::new());
        }
        comps[c].push(v);
    }
    comps
}

/// Per-vertex component index (in order of minimum vertex), `u32::MAX` outside the mask.
pub fn component_labels(w: &Window, m: &SubgraphMask) -> Vec<u32> {
    let mut label = vec![u32::MAX; w.len()];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for s in m.vertices() {
        if label[s as usize] != u32::MAX {
            continue;
        }
        label[s as usize] = next;
        stack.push(s);
        while let Some(x) = stack.pop() {
            for &(y, e) in w.neighbors(x) {
                if m.contains_edge_id(e) && label[y as usize] == u32::MAX {
                    label[y as usize] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn is_connected(w: &Window, m: &SubgraphMask) -> bool {
    connected_components(w, m).len() <= 1
}

/// True iff the mask has no cycle, counted over vertices touched by edges.
pub fn is_forest(w: &Window, m: &SubgraphMask) -> bool {
    let mut touched = w.empty_mask();
    for e in m.edge_ids() {
        touched.insert_edge_id_in(w, e);
    }
    let comps = connected_components(w, &touched).len();
    touched.edge_count() + comps == touched.vertex_count()
}

pub fn is_spanning_tree(w: &Window, m: &SubgraphMask) -> bool {
    m.vertex_count() == w.len()
        && m.edge_count() + 1 == w.len()
        && connected_components(w, m).len() == 1
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        DisjointSets { parent: (0..len as u32).collect(), size: vec![1; len] }
    }

    pub fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let p = self.parent[i as usize];
            self.parent[i as usize] = self.parent[p as usize];
            i = self.parent[i as usize];
        }
        i
    }

    /// Merges the sets of `i` and `j`; false if they were already joined.
    pub fn union(&mut self, i: u32, j: u32) -> bool {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        true
    }

    pub fn same(&mut self, i: u32, j: u32) -> bool {
        self.find(i) == self.find(j)
    }

    pub fn set_size(&mut self, i: u32) -> usize {
        let r = self.find(i);
        self.size[r as usize] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Window {
        Window::lattice(n, 1, false, 0).unwrap()
    }

    #[test]
    fn bfs_on_path_and_identity() {
        let w = path(4);
        let m = w.full_mask();
        assert_eq!(bfs_dist(&w, &m, 0, 3).unwrap(), Some(3));
        for v in 0..4 {
            assert_eq!(bfs_dist(&w, &m, v, v).unwrap(), Some(0));
        }
        assert_eq!(bfs_dist(&w, &m, 0, 9), Err(Error::VertexOutOfRange(9)));
    }

    #[test]
    fn four_cycle_with_removed_edge() {
        let w = Window::from_edges(
            4,
            [(0, 1), (1, 2), (2, 3), (3, 0)],
            vec![(0, 0), (1, 0), (1, 1), (0, 1)],
            0,
            vec![true; 4],
            true,
        )
        .unwrap();
        let mut m = w.full_mask();
        m.remove_edge_id(w.edge_between(0, 3).unwrap());
        assert_eq!(bfs_dist(&w, &m, 0, 3).unwrap(), Some(3));
        assert!(is_forest(&w, &m));
        assert!(is_spanning_tree(&w, &m));
        assert!(!is_forest(&w, &w.full_mask()));
    }

    #[test]
    fn components_ordering() {
        let w = path(4);
        assert!(connected_components(&w, &w.empty_mask()).is_empty());
        let mut m = w.empty_mask();
        m.insert_edge(&w, 2, 3);
        m.insert_edge(&w, 0, 1);
        assert_eq!(connected_components(&w, &m), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn rejects_bad_edges() {
        let c = vec![(0, 0); 2];
        assert!(Window::from_edges(2, [(0, 0)], c.clone(), 0, vec![true; 2], false).is_err());
        assert!(Window::from_edges(2, [(0, 1), (1, 0)], c, 0, vec![true; 2], false).is_err());
    }

    #[test]
    fn grid_is_not_a_tree_and_single_edge_is_a_forest() {
        let w = Window::lattice(4, 4, false, 0).unwrap();
        assert!(!is_spanning_tree(&w, &w.full_mask()));
        let mut m = w.empty_mask();
        m.insert_edge(&w, 0, 1);
        assert!(is_forest(&w, &m));
        let mut tri = Window::from_edges(
            3,
            [(0, 1), (1, 2), (0, 2)],
            vec![(0, 0), (1, 0), (2, 0)],
            0,
            vec![true; 3],
            true,
        )
        .unwrap()
        .full_mask();
        assert_eq!(tri.edge_count(), 3);
        tri.remove_edge_id(0);
        assert_eq!(tri.edge_count(), 2);
    }

    #[test]
    fn torus_is_regular_and_core_is_everything() {
        let w = Window::lattice(8, 8, true, 2).unwrap();
        assert!((0..64).all(|v| w.degree(v) == 4));
        assert_eq!(w.core_vertices().count(), 64);
        let g = Window::lattice(8, 8, false, 2).unwrap();
        assert_eq!(g.core_vertices().count(), 16);
        assert!(g.is_core(g.root()));
    }
}
