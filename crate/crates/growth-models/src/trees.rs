//! Weighted recursive trees and preferential attachment trees. Growth is
//! recorded as a flat parent array (cheap enough for statistical runs with
//! hundreds of thousands of steps); the plane-tree form with Ulam addresses
//! is materialized on demand.

use rand::Rng;
use ulam_core::{PlaneTree, UlamAddress};

use crate::{Fenwick, FitnessSequence, GrowthError};

/// A grown tree: vertex k (0-based creation index) is u_{k+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeGrowth {
    /// parents[i] is the creation index of the parent of vertex i + 1.
    pub parents: Vec<usize>,
    /// Height of each vertex above the root.
    pub heights: Vec<u32>,
    /// Final number of children of each vertex.
    pub out_degrees: Vec<u32>,
}

impl TreeGrowth {
    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    pub fn height(&self) -> u32 {
        self.heights.iter().copied().max().unwrap_or(0)
    }

    /// Subtree sizes (vertex itself included), by creation index.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![1usize; self.len()];
        for i in (1..self.len()).rev() {
            let parent = self.parents[i - 1];
            sizes[parent] += sizes[i];
        }
        sizes
    }

    /// The tree as a plane tree (children in creation order), plus the
    /// address of each vertex by creation index.
    pub fn plane_tree(&self) -> (PlaneTree, Vec<UlamAddress>) {
        let mut tree = PlaneTree::root_only();
        let mut order = vec![UlamAddress::root()];
        for &parent in &self.parents {
            let address = tree
                .attach(&order[parent])
                .expect("parent address always present");
            order.push(address);
        }
        (tree, order)
    }

    fn with_capacity(n: usize) -> Self {
        let mut growth = TreeGrowth {
            parents: Vec::with_capacity(n.saturating_sub(1)),
            heights: Vec::with_capacity(n),
            out_degrees: Vec::with_capacity(n),
        };
        growth.heights.push(0);
        growth.out_degrees.push(0);
        growth
    }

    fn record_attach(&mut self, parent: usize) {
        self.parents.push(parent);
        self.heights.push(self.heights[parent] + 1);
        self.out_degrees[parent] += 1;
        self.out_degrees.push(0);
    }
}

/// Grows a weighted recursive tree to n vertices: each new vertex picks its
/// parent with probability proportional to the parent's fixed weight.
pub fn wrt_grow<R: Rng>(weights: &[f64], n: usize, rng: &mut R) -> Result<TreeGrowth, GrowthError> {
    if n == 0 {
        return Err(GrowthError::InvalidParameter {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    let needed = n.saturating_sub(1);
    if weights.len() < needed {
        return Err(GrowthError::InsufficientData {
            what: "attachment weights",
            got: weights.len(),
            need: needed,
        });
    }
    if needed > 0 && !(weights[0] > 0.0 && weights[0].is_finite()) {
        return Err(GrowthError::InvalidParameter {
            name: "w_1",
            value: weights[0],
            constraint: "w_1 > 0",
        });
    }
    for (k, &w) in weights.iter().take(needed).enumerate().skip(1) {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(GrowthError::InvalidParameter {
                name: "w_k",
                value: w,
                constraint: "w_k >= 0 (see index k in the run context)",
            });
        }
        let _ = k;
    }
    let mut growth = TreeGrowth::with_capacity(n);
    let mut fen = Fenwick::new();
    if needed > 0 {
        fen.push(weights[0]);
    }
    for m in 1..n {
        let total = fen.total();
        if !(total > 0.0) {
            return Err(GrowthError::InvalidParameter {
                name: "available weight",
                value: total,
                constraint: "sum of weights over existing vertices > 0",
            });
        }
        let parent = fen.select(rng.random::<f64>() * total);
        growth.record_attach(parent);
        if m < needed {
            fen.push(weights[m]);
        }
    }
    Ok(growth)
}

/// Grows a preferential attachment tree to n vertices: the parent of the new
/// vertex is u_k with probability proportional to deg+(u_k) + a_k. The first
/// attachment is forced and consumes no randomness.
pub fn pa_grow<R: Rng>(
    fitnesses: &FitnessSequence,
    n: usize,
    rng: &mut R,
) -> Result<TreeGrowth, GrowthError> {
    if n == 0 {
        return Err(GrowthError::InvalidParameter {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    if fitnesses.len() < n.saturating_sub(1).max(1) {
        return Err(GrowthError::InsufficientData {
            what: "fitness values",
            got: fitnesses.len(),
            need: n.saturating_sub(1).max(1),
        });
    }
    let mut growth = TreeGrowth::with_capacity(n);
    if n == 1 {
        return Ok(growth);
    }
    growth.record_attach(0);
    let mut fen = Fenwick::new();
    fen.push(fitnesses.value(1) + 1.0);
    fen.push(fitnesses.value(2));
    for m in 2..n {
        let total = fen.total();
        if !(total > 0.0) {
            return Err(GrowthError::Internal {
                reason: format!("selection total {total} not positive at step {m}"),
            });
        }
        let parent = fen.select(rng.random::<f64>() * total);
        growth.record_attach(parent);
        fen.set(parent, fen.value(parent) + 1.0);
        fen.push(fitnesses.value(m + 1));
    }
    Ok(growth)
}
