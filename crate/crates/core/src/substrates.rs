//! Concrete amenable substrates and the auxiliary structures built on them:
//! the gridline sequence `H_n` on dyadic tori and boustrophedon two-ended
//! spanning trees.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{SubgraphMask, VertexId, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubstrateKind {
    Grid2d,
    Torus2d,
    Ladder,
    Path,
}

impl SubstrateKind {
    pub fn is_2d(self) -> bool {
        matches!(self, SubstrateKind::Grid2d | SubstrateKind::Torus2d)
    }

    pub fn name(self) -> &'static str {
        match self {
            SubstrateKind::Grid2d => "grid2d",
            SubstrateKind::Torus2d => "torus2d",
            SubstrateKind::Ladder => "ladder",
            SubstrateKind::Path => "path",
        }
    }
}

impl fmt::Display for SubstrateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SubstrateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid2d" => Ok(SubstrateKind::Grid2d),
            "torus2d" => Ok(SubstrateKind::Torus2d),
            "ladder" => Ok(SubstrateKind::Ladder),
            "path" => Ok(SubstrateKind::Path),
            other => Err(Error::InvalidSubstrate(format!("unknown kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubstrateSpec {
    pub kind: SubstrateKind,
    /// Side for 2d kinds, length for ladder and path.
    pub side: usize,
    /// Core margin; `None` means a quarter of the side.
    pub margin: Option<usize>,
}

impl SubstrateSpec {
    pub fn new(kind: SubstrateKind, side: usize) -> Self {
        SubstrateSpec { kind, side, margin: None }
    }

    pub fn with_margin(mut self, margin: usize) -> Self {
        self.margin = Some(margin);
        self
    }

    pub fn margin(&self) -> usize {
        self.margin.unwrap_or(self.side / 4)
    }

    pub fn validate(&self) -> Result<()> {
        if self.side < 8 {
            return Err(Error::InvalidSubstrate(format!(
                "{} needs side/length >= 8, got {}",
                self.kind, self.side
            )));
        }
        if self.margin() >= self.side.div_ceil(2) {
            return Err(Error::InvalidSubstrate(format!("margin {} leaves an empty core", self.margin())));
        }
        Ok(())
    }
}

/// Builds the window for a substrate: square lattice (wrapped for the
/// torus), a `length × 2` ladder, or a `length × 1` path.
pub fn make_window(spec: &SubstrateSpec) -> Result<Window> {
    spec.validate()?;
    let m = spec.margin();
    match spec.kind {
        SubstrateKind::Grid2d => Window::lattice(spec.side, spec.side, false, m),
        SubstrateKind::Torus2d => Window::lattice(spec.side, spec.side, true, m),
        SubstrateKind::Ladder => Window::lattice(spec.side, 2, false, m),
        SubstrateKind::Path => Window::lattice(spec.side, 1, false, m),
    }
}

/// `log2(side)` for a square window whose side is a power of two.
pub fn dyadic_exponent(w: &Window) -> Result<u32> {
    let side = w.width();
    if w.height() != side || w.len() != side * side {
        return Err(Error::SubstrateUnsupported("square 2d window required"));
    }
    if !side.is_power_of_two() {
        return Err(Error::SideNotDyadic(side));
    }
    Ok(side.trailing_zeros())
}

/// `H_n`: vertices with `x ≡ 0` or `y ≡ 0 (mod 2^n)` and the lattice edges
/// between them. On a `2^s` window these are nested, connected, and `H_s` is
/// the pair of axis lines.
pub fn gridline_subgraph(w: &Window, n: u32) -> Result<SubgraphMask> {
    let s = dyadic_exponent(w)?;
    if n > s {
        return Err(Error::LevelExceedsWindow { level: n, max: s });
    }
    let step = 1i64 << n;
    Ok(w.induced_mask(|v| {
        let (x, y) = w.coord(v);
        x % step == 0 || y % step == 0
    }))
}

/// A spanning tree with a distinguished simple path (the spine) such that
/// every other vertex hangs in a finite bush off exactly one spine vertex.
#[derive(Debug, Clone)]
pub struct TwoEndedTree {
    pub tree: SubgraphMask,
    pub spine: Vec<VertexId>,
    bush: Vec<VertexId>,
}

impl TwoEndedTree {
    /// Assembles a tree from its spine order, pendant attachments `(leaf,
    /// spine vertex)` and edge set. Only structural bookkeeping; call
    /// [`TwoEndedTree::validate`] to check the invariants.
    pub fn new(w: &Window, spine: Vec<VertexId>, pendants: &[(VertexId, VertexId)]) -> Self {
        let mut tree = w.empty_mask();
        let mut bush = vec![VertexId::MAX; w.len()];
        for pair in spine.windows(2) {
            tree.insert_edge(w, pair[0], pair[1]);
        }
        for &x in &spine {
            tree.insert_vertex(x);
            bush[x as usize] = x;
        }
        for &(leaf, x) in pendants {
            tree.insert_edge(w, leaf, x);
            bush[leaf as usize] = x;
        }
        TwoEndedTree { tree, spine, bush }
    }

    /// The spine vertex `b(v)` whose bush contains `v`.
    pub fn bush_of(&self, v: VertexId) -> VertexId {
        self.bush[v as usize]
    }

    /// Bush members of each spine vertex, in spine order.
    pub fn bushes(&self) -> Vec<Vec<VertexId>> {
        let mut index = vec![usize::MAX; self.bush.len()];
        for (i, &x) in self.spine.iter().enumerate() {
            index[x as usize] = i;
        }
        let mut out = vec![Vec::new(); self.spine.len()];
        for (v, &b) in self.bush.iter().enumerate() {
            if b != VertexId::MAX {
                out[index[b as usize]].push(v as VertexId);
            }
        }
        out
    }

    pub fn validate(&self, w: &Window) -> bool {
        use crate::graph::{component_labels, is_spanning_tree};
        if !is_spanning_tree(w, &self.tree) {
            return false;
        }
        if self.spine.windows(2).any(|p| !self.tree.contains_edge(w, p[0], p[1])) {
            return false;
        }
        // Removing the spine edges must leave each bush attached to its own spine vertex only.
        let mut rest = self.tree.clone();
        for p in self.spine.windows(2) {
            rest.remove_edge_id(w.edge_between(p[0], p[1]).unwrap());
        }
        let label = component_labels(w, &rest);
        let mut spine_hits = vec![0u32; w.len()];
        for &x in &self.spine {
            if self.bush_of(x) != x {
                return false;
            }
            spine_hits[label[x as usize] as usize] += 1;
        }
        (0..w.len() as VertexId).all(|v| {
            let b = self.bush_of(v);
            b != VertexId::MAX
                && label[v as usize] == label[b as usize]
                && spine_hits[label[v as usize] as usize] == 1
        })
    }
}

/// Boustrophedon two-ended tree.
///
/// A path window is its own spine (no pendants possible). Square windows are swept row by row; a ladder (height 2) is swept column
/// by column so the spine runs along its length. With `pendant`, the spine
/// runs along even rows, entering each odd row only at the column where it
/// turns; the remaining odd-row vertices hang off the vertex below them.
pub fn snake_tree(w: &Window, pendant: bool) -> Result<TwoEndedTree> {
    let (width, height) = (w.width() as i64, w.height() as i64);
    if height == 1 && width >= 2 && w.len() == width as usize {
        if pendant {
            return Err(Error::SubstrateUnsupported("a path has no room for pendants"));
        }
        return Ok(TwoEndedTree::new(w, (0..width as VertexId).collect(), &[]));
    }
    if height < 2 || width < 2 || w.len() != (width * height) as usize {
        return Err(Error::SubstrateUnsupported("snake tree needs a 2d window"));
    }
    let at = |x: i64, y: i64| w.vertex_at(x, y).expect("lattice coordinate");
    let mut spine = Vec::with_capacity(w.len());
    let mut pendants = Vec::new();
    if height == 2 && width > 2 {
        // Ladder: spine along row 0 with rungs as pendants, or a column zigzag.
        if pendant {
            spine.extend((0..width).map(|x| at(x, 0)));
            pendants.extend((0..width).map(|x| (at(x, 1), at(x, 0))));
        } else {
            for x in 0..width {
                let (a, b) = if x % 2 == 0 { (0, 1) } else { (1, 0) };
                spine.push(at(x, a));
                spine.push(at(x, b));
            }
        }
        return Ok(TwoEndedTree::new(w, spine, &pendants));
    }
    let row = |y: i64, forward: bool| -> Vec<(i64, i64)> {
        if forward {
            (0..width).map(|x| (x, y)).collect()
        } else {
            (0..width).rev().map(|x| (x, y)).collect()
        }
    };
    if !pendant {
        for y in 0..height {
            spine.extend(row(y, y % 2 == 0).into_iter().map(|(x, y)| at(x, y)));
        }
    } else {
        let mut forward = true;
        let mut y = 0;
        while y < height {
            let cells = row(y, forward);
            let turn_x = cells.last().unwrap().0;
            spine.extend(cells.iter().map(|&(x, y)| at(x, y)));
            if y + 1 < height {
                let has_next_even = y + 2 < height;
                for x in 0..width {
                    let v = at(x, y + 1);
                    if has_next_even && x == turn_x {
                        spine.push(v);
                    } else {
                        pendants.push((v, at(x, y)));
                    }
                }
            }
            forward = !forward;
            y += 2;
        }
    }
    Ok(TwoEndedTree::new(w, spine, &pendants))
}
