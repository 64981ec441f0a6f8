//! Decorations: sparse assignments of metric blocks to tree addresses.

use std::collections::{BTreeMap, BTreeSet};

use ulam_core::{PlaneTree, UlamAddress};

use crate::{Block, GlueError};

/// A decoration of the infinite genealogical tree: finitely many addresses
/// carry nontrivial blocks, every other address implicitly carries the
/// one-point block. The support is the smallest plane tree containing all
/// stored addresses (gaps between siblings are filled with trivial vertices
/// to keep child indices contiguous).
#[derive(Debug, Clone)]
pub struct Decoration {
    blocks: BTreeMap<UlamAddress, Block>,
    support: PlaneTree,
}

impl Decoration {
    /// Builds a decoration from explicitly stored blocks.
    pub fn new(blocks: BTreeMap<UlamAddress, Block>) -> Result<Self, GlueError> {
        let mut vertices: BTreeSet<UlamAddress> = BTreeSet::new();
        vertices.insert(UlamAddress::root());
        for address in blocks.keys() {
            let mut cursor = address.clone();
            loop {
                vertices.insert(cursor.clone());
                match cursor.parent() {
                    Some(parent) => cursor = parent,
                    None => break,
                }
            }
        }
        // Fill sibling gaps: if u.k is present, u.1 .. u.k must be vertices.
        let snapshot: Vec<UlamAddress> = vertices.iter().cloned().collect();
        for v in snapshot {
            if let (Some(parent), Some(letter)) = (v.parent(), v.last_letter()) {
                for i in 1..letter {
                    vertices.insert(parent.child(i));
                }
            }
        }
        let support = PlaneTree::from_vertices(vertices)
            .expect("prefix closure and contiguity hold by construction");
        support.debug_validate();
        Ok(Self { blocks, support })
    }

    /// The single-block decoration at the root.
    pub fn single(block: Block) -> Self {
        let mut blocks = BTreeMap::new();
        blocks.insert(UlamAddress::root(), block);
        Self::new(blocks).expect("a single root block is always valid")
    }

    /// Smallest plane tree containing every stored address.
    pub fn support(&self) -> &PlaneTree {
        &self.support
    }

    /// The block stored at an address, if any. Absent addresses implicitly
    /// carry the one-point block.
    pub fn block(&self, address: &UlamAddress) -> Option<&Block> {
        self.blocks.get(address)
    }

    /// Stored (address, block) pairs in address order.
    pub fn blocks(&self) -> impl Iterator<Item = (&UlamAddress, &Block)> {
        self.blocks.iter()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Total point count over stored blocks plus trivial support fillers.
    pub fn point_count(&self) -> usize {
        self.support
            .vertices()
            .map(|v| self.blocks.get(v).map(Block::points).unwrap_or(1))
            .sum()
    }

    /// Diameter of the block at an address (0 off the stored set).
    pub fn diameter_at(&self, address: &UlamAddress) -> f64 {
        self.blocks
            .get(address)
            .map(Block::diameter)
            .unwrap_or(0.0)
    }

    /// The decoration with every block metric multiplied by `factor`.
    /// Exact for power-of-two factors.
    pub fn rescale(&self, factor: f64) -> Result<Decoration, GlueError> {
        let mut blocks = BTreeMap::new();
        for (address, block) in &self.blocks {
            blocks.insert(address.clone(), block.rescale(factor)?);
        }
        Ok(Self {
            blocks,
            support: self.support.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::{make_block, BlockSpec};

    fn addr(s: &str) -> UlamAddress {
        s.parse().unwrap()
    }

    fn unit_segment() -> Block {
        Block::segment(&[1.0]).unwrap()
    }

    #[test]
    fn support_fills_sibling_gaps() {
        let mut blocks = BTreeMap::new();
        blocks.insert(addr("1.3"), unit_segment());
        let dec = Decoration::new(blocks).unwrap();
        // 1.3 forces 1.1 and 1.2 as trivial support vertices.
        for v in ["", "1", "1.1", "1.2", "1.3"] {
            assert!(dec.support().contains(&addr(v)), "missing {v}");
        }
        assert_eq!(dec.support().len(), 5);
        assert_eq!(dec.block_count(), 1);
        assert_eq!(dec.diameter_at(&addr("1.3")), 1.0);
        assert_eq!(dec.diameter_at(&addr("1.1")), 0.0);
    }

    #[test]
    fn point_count_includes_trivial_fillers() {
        let mut blocks = BTreeMap::new();
        blocks.insert(UlamAddress::root(), Block::segment(&[1.0, 1.0]).unwrap());
        blocks.insert(addr("2"), unit_segment());
        let dec = Decoration::new(blocks).unwrap();
        // Root block: 3 points; trivial vertex 1: 1 point; block 2: 2 points.
        assert_eq!(dec.point_count(), 6);
    }

    #[test]
    fn rescale_scales_all_blocks() {
        let mut blocks = BTreeMap::new();
        blocks.insert(UlamAddress::root(), unit_segment());
        blocks.insert(
            addr("1"),
            make_block(BlockSpec::Matrix {
                root: 0,
                attach: vec![],
                masses: None,
                rows: vec![vec![0.0, 0.5], vec![0.5, 0.0]],
            })
            .unwrap(),
        );
        let dec = Decoration::new(blocks).unwrap();
        let scaled = dec.rescale(2.0).unwrap();
        assert_eq!(scaled.diameter_at(&UlamAddress::root()), 2.0);
        assert_eq!(scaled.diameter_at(&addr("1")), 1.0);
        assert!(dec.rescale(0.0).is_err());
        assert!(dec.rescale(f64::NAN).is_err());
    }
}
