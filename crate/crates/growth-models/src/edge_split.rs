//! The uniform edge-splitting process: each step subdivides a uniformly
//! chosen edge at a new distinguished vertex. Both halves inherit the
//! original edge's identity for length bookkeeping, so the per-original-edge
//! part counts follow a Polya urn started from one ball per edge.

use rand::Rng;

use crate::{GrowthError, MultiGraph, SeedGraph};

/// A running edge-splitting process over a rooted seed graph.
#[derive(Debug, Clone)]
pub struct EdgeSplitProcess {
    graph: MultiGraph,
    root: usize,
    /// Current edge id -> id of the seed edge it is a part of.
    original_of: Vec<usize>,
    /// Per seed edge: number of unit parts it has been subdivided into.
    part_counts: Vec<usize>,
    /// The distinguished vertices x_1, x_2, ... in creation order.
    distinguished: Vec<usize>,
}

impl EdgeSplitProcess {
    pub fn new(seed: &SeedGraph) -> Self {
        let edges = seed.graph().edge_count();
        EdgeSplitProcess {
            graph: seed.graph().clone(),
            root: seed.root(),
            original_of: (0..edges).collect(),
            part_counts: vec![1; edges],
            distinguished: Vec::new(),
        }
    }

    /// Runs m steps from the seed.
    pub fn run<R: Rng>(seed: &SeedGraph, m: usize, rng: &mut R) -> Self {
        let mut process = Self::new(seed);
        for _ in 0..m {
            process.step(rng);
        }
        process
    }

    /// Splits one uniformly chosen edge.
    pub fn step<R: Rng>(&mut self, rng: &mut R) {
        let edge = rng.random_range(0..self.graph.edge_count());
        let original = self.original_of[edge];
        let (mid, _new_edge) = self.graph.split_edge(edge);
        self.original_of.push(original);
        self.part_counts[original] += 1;
        self.distinguished.push(mid);
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn steps(&self) -> usize {
        self.distinguished.len()
    }

    pub fn distinguished(&self) -> &[usize] {
        &self.distinguished
    }

    /// Number of unit parts the given seed edge is currently divided into.
    pub fn part_count(&self, seed_edge: usize) -> usize {
        self.part_counts[seed_edge]
    }

    pub fn part_counts(&self) -> &[usize] {
        &self.part_counts
    }

    /// Graph distance from the root to the k-th distinguished vertex
    /// (0-based), in unit parts.
    pub fn root_distance(&self, k: usize) -> Result<usize, GrowthError> {
        let &vertex = self
            .distinguished
            .get(k)
            .ok_or(GrowthError::InsufficientData {
                what: "distinguished vertices",
                got: self.distinguished.len(),
                need: k + 1,
            })?;
        Ok(self.graph.bfs_distances(self.root)[vertex])
    }
}
