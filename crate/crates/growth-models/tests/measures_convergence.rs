//! The three natural measures on the block tree of one run (uniform on
//! blocks, fitness-weighted, and degree-biased) converge to one common limit
//! along the growth, so their pairwise window distances must shrink.

use decoration_glue::measure_distance;
use growth_models::{
    degree_measure, remy_generalized, uniform_block_measure, weight_measure, FitnessSequence,
    Mode, SeedGraph, SeedSequence,
};
use ulam_core::{PlaneTree, UlamAddress};

/// The full ternary tree of height two as a fixed comparison window.
fn window() -> PlaneTree {
    let mut vertices = vec![UlamAddress::root()];
    for a in 1..=3u32 {
        vertices.push(format!("{a}").parse().unwrap());
        for b in 1..=3u32 {
            vertices.push(format!("{a}.{b}").parse().unwrap());
        }
    }
    PlaneTree::from_vertices(vertices).unwrap()
}

#[test]
fn uniform_weight_and_degree_measures_approach_each_other() {
    let n_final = 10_000;
    let fitness = FitnessSequence::constant(1.0, n_final).unwrap();
    let bias = vec![0.5; n_final];
    let theta = window();

    let mut state = remy_generalized(
        SeedSequence::Repeat(SeedGraph::single_edge()),
        100,
        4_242,
        Mode::Decorated,
    )
    .unwrap();

    let mut gaps = Vec::new();
    for checkpoint in [100usize, 1_000, 10_000] {
        state.grow_to(checkpoint).unwrap();
        let nu = uniform_block_measure(&state);
        let mu = weight_measure(&state, &fitness).unwrap();
        let eta = degree_measure(&state, &bias).unwrap();
        let d1 = measure_distance(&nu, &mu, &theta).unwrap();
        let d2 = measure_distance(&mu, &eta, &theta).unwrap();
        let d3 = measure_distance(&nu, &eta, &theta).unwrap();
        gaps.push(d1.max(d2).max(d3));
    }
    println!("window gaps at 10^2, 10^3, 10^4 blocks: {gaps:?}");
    // The gap is a maximum of O(n^{-1/2})-fluctuating coordinate
    // differences; order 0.1 at a hundred blocks, order 0.01 at ten
    // thousand.
    assert!(gaps[2] < 0.05, "gap at n=10^4 is {}", gaps[2]);
    assert!(
        gaps[2] < gaps[0],
        "gaps should shrink along the run: {gaps:?}"
    );
}
