//! Nested partitions of a dyadic window into aligned blocks.

use crate::error::{Error, Result};
use crate::graph::{VertexId, Window};
use crate::substrates::dyadic_exponent;

/// Level `m` cuts a `2^s × 2^s` window into `2^m × 2^m` blocks; level `s` is
/// the whole window. Blocks are connected with or without wrap-around.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    side: usize,
    max_level: u32,
    coords: Vec<(u32, u32)>,
}

pub fn build_block_hierarchy(w: &Window) -> Result<Hierarchy> {
    let max_level = dyadic_exponent(w)?;
    let coords = (0..w.len() as VertexId)
        .map(|v| {
            let (x, y) = w.coord(v);
            (x as u32, y as u32)
        })
        .collect();
    Ok(Hierarchy { side: w.width(), max_level, coords })
}

impl Hierarchy {
    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn class_count(&self, m: u32) -> usize {
        let k = self.side >> m.min(self.max_level);
        k * k
    }

    /// Class id of `v` at level `m`, without range checks.
    #[inline]
    pub fn class_unchecked(&self, m: u32, v: VertexId) -> u32 {
        let (x, y) = self.coords[v as usize];
        let per_row = (self.side >> m) as u32;
        (y >> m) * per_row + (x >> m)
    }

    /// Full partition at level `m` as a vertex → class table.
    pub fn partition(&self, m: u32) -> Result<Vec<u32>> {
        self.check_level(m)?;
        Ok((0..self.coords.len() as VertexId).map(|v| self.class_unchecked(m, v)).collect())
    }

    fn check_level(&self, m: u32) -> Result<()> {
        if m > self.max_level {
            return Err(Error::LevelExceedsWindow { level: m, max: self.max_level });
        }
        Ok(())
    }
}

pub fn class_of(h: &Hierarchy, m: u32, v: VertexId) -> Result<u32> {
    h.check_level(m)?;
    if v as usize >= h.coords.len() {
        return Err(Error::VertexOutOfRange(v as usize));
    }
    Ok(h.class_unchecked(m, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_components, Window};

    #[test]
    fn counts_on_side_8() {
        let w = Window::lattice(8, 8, true, 0).unwrap();
        let h = build_block_hierarchy(&w).unwrap();
        let count = |m| {
            let mut p = h.partition(m).unwrap();
            p.sort_unstable();
            p.dedup();
            p.len()
        };
        assert_eq!((count(0), count(1), count(3)), (64, 16, 1));
        assert_eq!(h.class_count(1), 16);
        assert_eq!(class_of(&h, 0, 3), class_of(&h, 0, 3));
        assert_ne!(class_of(&h, 0, 3), class_of(&h, 0, 4));
        assert_eq!(class_of(&h, 3, 0), class_of(&h, 3, 63));
        assert_eq!(class_of(&h, 4, 0), Err(Error::LevelExceedsWindow { level: 4, max: 3 }));
    }

    #[test]
    fn classes_connected_and_refining() {
        for wrap in [false, true] {
            let w = Window::lattice(16, 16, wrap, 0).unwrap();
            let h = build_block_hierarchy(&w).unwrap();
            for m in 0..=4 {
                let p = h.partition(m).unwrap();
                for c in 0..h.class_count(m) as u32 {
                    let mask = w.induced_mask(|v| p[v as usize] == c);
                    assert_eq!(connected_components(&w, &mask).len(), 1);
                }
                if m < 4 {
                    let q = h.partition(m + 1).unwrap();
                    for (u, v) in w.edges() {
                        if p[*u as usize] == p[*v as usize] {
                            assert_eq!(q[*u as usize], q[*v as usize]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn non_dyadic_rejected() {
        let w = Window::lattice(12, 12, true, 0).unwrap();
        assert_eq!(build_block_hierarchy(&w), Err(Error::SideNotDyadic(12)));
    }
}
