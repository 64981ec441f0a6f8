//! Shared fixtures: seeded random decorations whose edge weights are small
//! dyadic rationals. Path sums of such weights are exact in f64, so oracle
//! comparisons can demand bit-for-bit equality.

use std::collections::BTreeMap;

use decoration_glue::{make_block, Block, BlockSpec, Decoration};
use rand::Rng;
use ulam_core::{PlaneTree, UlamAddress};

pub fn dyadic_weight(rng: &mut impl Rng) -> f64 {
    rng.random_range(1..=16) as f64 / 16.0
}

/// A connected random graph block: a random spanning tree plus a few chords,
/// all weights positive dyadics.
pub fn random_graph_block(rng: &mut impl Rng, max_points: usize) -> Block {
    let points = rng.random_range(1..=max_points);
    let mut edges = Vec::new();
    for i in 1..points {
        let parent = rng.random_range(0..i);
        edges.push((parent, i, dyadic_weight(rng)));
    }
    if points >= 2 {
        for _ in 0..rng.random_range(0..=2) {
            let i = rng.random_range(0..points);
            let j = rng.random_range(0..points);
            if i != j {
                edges.push((i, j, dyadic_weight(rng)));
            }
        }
    }
    let root = rng.random_range(0..points);
    let attach_len = rng.random_range(0..=3.min(points));
    let attach = (0..attach_len).map(|_| rng.random_range(0..points)).collect();
    make_block(BlockSpec::Graph {
        points,
        root,
        attach,
        masses: None,
        edges,
    })
    .unwrap()
}

/// A decoration over a random plane tree of the given size, one random graph
/// block per vertex.
pub fn random_decoration(rng: &mut impl Rng, blocks: usize, max_points: usize) -> Decoration {
    let mut tree = PlaneTree::root_only();
    let mut addresses = vec![UlamAddress::root()];
    for _ in 1..blocks {
        let parent = addresses[rng.random_range(0..addresses.len())].clone();
        let child = tree.attach(&parent).unwrap();
        addresses.push(child);
    }
    let map: BTreeMap<_, _> = addresses
        .into_iter()
        .map(|a| {
            let block = random_graph_block(rng, max_points);
            (a, block)
        })
        .collect();
    Decoration::new(map).unwrap()
}
