//! The gluing of a decoration: blocks chained along ancestral lines, child
//! roots identified with parent attach points.

use std::sync::{Arc, OnceLock};

use ulam_core::{PlaneTree, Ray, UlamAddress};

use crate::{Block, Decoration, GlueError};

/// A point of a glued space: a point index inside the block at an address.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointHandle {
    pub address: UlamAddress,
    pub point: usize,
}

impl PointHandle {
    pub fn new(address: UlamAddress, point: usize) -> Self {
        Self { address, point }
    }
}

/// A boundary point reached along a ray, represented by its deepest
/// materialized anchor and a certified radius: every distance through this
/// handle is exact up to +/- radius.
#[derive(Debug, Clone)]
pub struct LeafHandle {
    pub anchor: PointHandle,
    pub radius: f64,
    /// Depth at which the ray was anchored.
    pub depth: usize,
}

/// A distance with a certified error radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceInterval {
    pub center: f64,
    pub radius: f64,
}

impl DistanceInterval {
    pub fn exact(center: f64) -> Self {
        Self {
            center,
            radius: 0.0,
        }
    }

    pub fn lower(&self) -> f64 {
        (self.center - self.radius).max(0.0)
    }

    pub fn upper(&self) -> f64 {
        self.center + self.radius
    }
}

fn trivial_block() -> &'static Block {
    static TRIVIAL: OnceLock<Block> = OnceLock::new();
    TRIVIAL.get_or_init(Block::trivial)
}

/// A finite gluing of a decoration over a plane tree of addresses. Distance
/// queries are exact; per-block shortest-path tables are computed once on
/// first use and shared read-only afterwards.
#[derive(Debug, Clone)]
pub struct GluedSpace {
    decoration: Arc<Decoration>,
    theta: PlaneTree,
}

/// Glues the blocks indexed by `theta`; addresses off the decoration's
/// stored set contribute one-point blocks.
pub fn glue_finite(theta: PlaneTree, decoration: Arc<Decoration>) -> GluedSpace {
    theta.debug_validate();
    GluedSpace { decoration, theta }
}

/// Distance between two interior points of a glued space.
pub fn glue_distance(
    space: &GluedSpace,
    p: &PointHandle,
    q: &PointHandle,
) -> Result<f64, GlueError> {
    space.distance(p, q)
}

/// Anchors a ray to its boundary point; see [`GluedSpace::leaf_embed`].
pub fn leaf_embed(
    space: &GluedSpace,
    ray: &mut Ray,
    tolerance: f64,
) -> Result<LeafHandle, GlueError> {
    space.leaf_embed(ray, tolerance)
}

impl GluedSpace {
    /// Glues the whole support of the decoration.
    pub fn full(decoration: Arc<Decoration>) -> Self {
        let theta = decoration.support().clone();
        Self { decoration, theta }
    }

    pub fn theta(&self) -> &PlaneTree {
        &self.theta
    }

    pub fn decoration(&self) -> &Arc<Decoration> {
        &self.decoration
    }

    /// The block glued at an address of theta.
    pub fn block_at(&self, address: &UlamAddress) -> &Block {
        self.decoration.block(address).unwrap_or(trivial_block())
    }

    /// The root point of the whole glued space.
    pub fn root_handle(&self) -> PointHandle {
        let root = UlamAddress::root();
        PointHandle::new(root.clone(), self.block_at(&root).root())
    }

    fn check_handle(&self, h: &PointHandle) -> Result<(), GlueError> {
        if !self.theta.contains(&h.address) || h.point >= self.block_at(&h.address).points() {
            return Err(GlueError::DeadHandle {
                address: h.address.clone(),
                point: h.point,
            });
        }
        Ok(())
    }

    /// Distance from a point to the gluing site of its block's ancestor line
    /// at depth `meet_height`, plus the attach index into that ancestor.
    ///
    /// Walking down from the ancestor: each intermediate block contributes
    /// the distance from its own root (glued to the block above) to the
    /// attach point of the child on the path, and the endpoint's block
    /// contributes the distance from the endpoint to its root.
    fn climb(&self, h: &PointHandle, meet_height: usize) -> (f64, u32) {
        let letters = h.address.letters();
        let own = self.block_at(&h.address);
        let mut acc = own.distance(h.point, own.root());
        for depth in (meet_height + 1..h.address.height()).rev() {
            let block_address = h.address.prefix(depth);
            let block = self.block_at(&block_address);
            let child_letter = letters[depth];
            acc += block.distance(block.root(), block.attach_point(child_letter));
        }
        (acc, letters[meet_height])
    }

    /// Exact distance between two interior points, by the three-case path
    /// formula: within one block, the block metric; otherwise both endpoints
    /// climb to the most recent common ancestor block and connect there.
    pub fn distance(&self, p: &PointHandle, q: &PointHandle) -> Result<f64, GlueError> {
        self.check_handle(p)?;
        self.check_handle(q)?;
        if p.address == q.address {
            return Ok(self.block_at(&p.address).distance(p.point, q.point));
        }
        let meet = p.address.meet(&q.address);
        let meet_block = self.block_at(&meet);
        if meet == q.address {
            let (climbed, entry) = self.climb(p, meet.height());
            return Ok(climbed + meet_block.distance(q.point, meet_block.attach_point(entry)));
        }
        if meet == p.address {
            let (climbed, entry) = self.climb(q, meet.height());
            return Ok(climbed + meet_block.distance(p.point, meet_block.attach_point(entry)));
        }
        let (from_p, entry_p) = self.climb(p, meet.height());
        let (from_q, entry_q) = self.climb(q, meet.height());
        Ok(from_p
            + from_q
            + meet_block.distance(
                meet_block.attach_point(entry_p),
                meet_block.attach_point(entry_q),
            ))
    }

    /// Distance where either side may be a leaf handle; radii add.
    pub fn distance_interval(
        &self,
        p: &GluedPoint,
        q: &GluedPoint,
    ) -> Result<DistanceInterval, GlueError> {
        let center = self.distance(p.anchor(), q.anchor())?;
        Ok(DistanceInterval {
            center,
            radius: p.radius() + q.radius(),
        })
    }

    /// Anchors a ray to its limit point: walks the ray while blocks of the
    /// decoration's support remain ahead of it, and anchors at the deepest
    /// vertex of theta on the ray. The leftover support diameters along the
    /// ray bound the anchoring error; if they exceed `tolerance` the handle
    /// cannot be certified.
    pub fn leaf_embed(&self, ray: &mut Ray, tolerance: f64) -> Result<LeafHandle, GlueError> {
        if !(tolerance >= 0.0) {
            return Err(GlueError::BadValue {
                what: "tolerance",
                value: tolerance,
            });
        }
        let support = self.decoration.support();
        // Addresses along the ray inside the support, shallow to deep. The
        // support is finite, so this walk terminates.
        let mut on_ray = vec![UlamAddress::root()];
        loop {
            let next = ray.truncate(on_ray.len());
            if !support.contains(&next) {
                break;
            }
            on_ray.push(next);
        }
        // Deepest ray vertex that theta still contains.
        let mut anchor_depth = 0;
        while anchor_depth + 1 < on_ray.len() && self.theta.contains(&on_ray[anchor_depth + 1]) {
            anchor_depth += 1;
        }
        let radius: f64 = on_ray[anchor_depth + 1..]
            .iter()
            .map(|v| self.decoration.diameter_at(v))
            .sum();
        if radius > tolerance {
            return Err(GlueError::Certification {
                reason: format!(
                    "residual block diameters along the ray sum to {radius:e}, above the tolerance {tolerance:e}"
                ),
            });
        }
        let anchor_address = on_ray[anchor_depth].clone();
        let block = self.block_at(&anchor_address);
        let next_letter = ray.truncate(anchor_depth + 1).letters()[anchor_depth];
        let anchor = PointHandle::new(anchor_address, block.attach_point(next_letter));
        Ok(LeafHandle {
            anchor,
            radius,
            depth: anchor_depth,
        })
    }

    /// All interior point handles, in address order.
    pub fn handles(&self) -> Vec<PointHandle> {
        let mut out = Vec::new();
        for address in self.theta.vertices() {
            let block = self.block_at(address);
            for point in 0..block.points() {
                out.push(PointHandle::new(address.clone(), point));
            }
        }
        out
    }

    /// Total number of interior points (with gluing identifications still
    /// counted separately).
    pub fn point_count(&self) -> usize {
        self.theta
            .vertices()
            .map(|v| self.block_at(v).points())
            .sum()
    }
}

/// Either an interior point or an anchored boundary point.
#[derive(Debug, Clone)]
pub enum GluedPoint {
    Interior(PointHandle),
    Leaf(LeafHandle),
}

impl GluedPoint {
    pub fn anchor(&self) -> &PointHandle {
        match self {
            GluedPoint::Interior(h) => h,
            GluedPoint::Leaf(l) => &l.anchor,
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            GluedPoint::Interior(_) => 0.0,
            GluedPoint::Leaf(l) => l.radius,
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn addr(s: &str) -> UlamAddress {
        s.parse().unwrap()
    }

    /// Chain of three unit segments glued end to end at addresses
    /// root, 1, 1.1.
    fn three_chain() -> GluedSpace {
        let mut blocks = BTreeMap::new();
        blocks.insert(UlamAddress::root(), Block::segment(&[1.0]).unwrap());
        blocks.insert(addr("1"), Block::segment(&[1.0]).unwrap());
        blocks.insert(addr("1.1"), Block::segment(&[1.0]).unwrap());
        GluedSpace::full(Arc::new(Decoration::new(blocks).unwrap()))
    }

    #[test]
    fn same_point_distance_is_zero() {
        let space = three_chain();
        let p = PointHandle::new(addr("1"), 1);
        assert_eq!(space.distance(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn identified_points_are_at_distance_zero() {
        let space = three_chain();
        // Root of block 1 is glued to attach point (index 1) of the root
        // block.
        let child_root = PointHandle::new(addr("1"), 0);
        let parent_attach = PointHandle::new(UlamAddress::root(), 1);
        assert_eq!(space.distance(&child_root, &parent_attach).unwrap(), 0.0);
    }

    #[test]
    fn three_block_chain_spans_distance_three() {
        let space = three_chain();
        let root = space.root_handle();
        let far_end = PointHandle::new(addr("1.1"), 1);
        assert_eq!(space.distance(&root, &far_end).unwrap(), 3.0);
        // Symmetry.
        assert_eq!(space.distance(&far_end, &root).unwrap(), 3.0);
    }

    #[test]
    fn sibling_blocks_connect_through_their_parent() {
        // Root block: a path of two unit edges, rooted at the middle point,
        // attach points at both ends; children 1 and 2 are unit segments.
        let root_block = crate::make_block(crate::BlockSpec::Graph {
            points: 3,
            root: 0,
            attach: vec![1, 2],
            masses: None,
            edges: vec![(0, 1, 1.0), (0, 2, 1.0)],
        })
        .unwrap();
        let mut blocks = BTreeMap::new();
        blocks.insert(UlamAddress::root(), root_block);
        blocks.insert(addr("1"), Block::segment(&[1.0]).unwrap());
        blocks.insert(addr("2"), Block::segment(&[1.0]).unwrap());
        let space = GluedSpace::full(Arc::new(Decoration::new(blocks).unwrap()));
        let end1 = PointHandle::new(addr("1"), 1);
        let end2 = PointHandle::new(addr("2"), 1);
        // end1 -> attach 1 -> root -> attach 2 -> end2: 1 + 1 + 1 + 1.
        assert_eq!(space.distance(&end1, &end2).unwrap(), 4.0);
    }

    #[test]
    fn dead_handles_are_rejected() {
        let space = three_chain();
        let outside = PointHandle::new(addr("2"), 0);
        assert!(matches!(
            space.distance(&space.root_handle(), &outside),
            Err(GlueError::DeadHandle { .. })
        ));
        let bad_point = PointHandle::new(addr("1"), 9);
        assert!(space.distance(&space.root_handle(), &bad_point).is_err());
    }

    #[test]
    fn leaf_embed_on_finite_support_is_exact() {
        let space = three_chain();
        let mut ray = Ray::constant(1);
        let leaf = space.leaf_embed(&mut ray, 0.0).unwrap();
        assert_eq!(leaf.radius, 0.0);
        assert_eq!(leaf.depth, 2);
        // The anchor is the far end of the deepest block.
        assert_eq!(leaf.anchor, PointHandle::new(addr("1.1"), 1));
        let d = space
            .distance_interval(
                &GluedPoint::Interior(space.root_handle()),
                &GluedPoint::Leaf(leaf),
            )
            .unwrap();
        assert_eq!(d.center, 3.0);
        assert_eq!(d.radius, 0.0);
    }

    #[test]
    fn leaf_embed_off_support_hits_an_attach_point() {
        let space = three_chain();
        // Ray 2,1,1,...: leaves the support immediately (vertex 2 does not
        // exist), so the leaf is the root block's attach point toward child
        // 2, which is the root itself (padding).
        let mut ray = Ray::periodic(vec![2, 1]);
        let leaf = space.leaf_embed(&mut ray, 0.0).unwrap();
        assert_eq!(leaf.radius, 0.0);
        assert_eq!(leaf.depth, 0);
        assert_eq!(
            leaf.anchor,
            PointHandle::new(UlamAddress::root(), space.block_at(&UlamAddress::root()).root())
        );
    }
}
