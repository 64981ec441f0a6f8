//! Truncation behaviour: distances between kept points do not depend on the
//! truncation level, every dropped point stays within the certified gap of a
//! kept point, and rescaling scales distances exactly.

mod common;

use std::sync::Arc;

use decoration_glue::{truncation_gap_bound, GluedSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ulam_core::{PlaneTree, UlamAddress};

/// The first `count` support vertices in address order form a valid plane
/// tree (ancestors precede descendants and child letters arrive in order).
fn truncate_support(support: &PlaneTree, count: usize) -> PlaneTree {
    let vertices: Vec<UlamAddress> = support.vertices().take(count).cloned().collect();
    PlaneTree::from_vertices(vertices).unwrap()
}

#[test]
fn distances_between_kept_points_are_identical_at_every_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let dec = Arc::new(common::random_decoration(&mut rng, 40, 5));
    let full = GluedSpace::full(Arc::clone(&dec));
    let support_size = dec.support().len();
    for count in [1, support_size / 3, 2 * support_size / 3] {
        let count = count.max(1);
        let theta = truncate_support(dec.support(), count);
        let truncated = decoration_glue::glue_finite(theta, Arc::clone(&dec));
        let handles = truncated.handles();
        for (i, p) in handles.iter().enumerate() {
            for q in handles.iter().skip(i) {
                assert_eq!(
                    truncated.distance(p, q).unwrap(),
                    full.distance(p, q).unwrap(),
                    "distance changed under truncation: {p:?} {q:?}"
                );
            }
        }
    }
}

#[test]
fn every_dropped_point_is_within_the_gap_bound_of_a_kept_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let dec = Arc::new(common::random_decoration(&mut rng, 35, 5));
    let full = GluedSpace::full(Arc::clone(&dec));
    let support_size = dec.support().len();
    for count in [1, support_size / 4, support_size / 2] {
        let count = count.max(1);
        let theta = truncate_support(dec.support(), count);
        let bound = truncation_gap_bound(&dec, &theta).unwrap();
        let kept = decoration_glue::glue_finite(theta, Arc::clone(&dec)).handles();
        for q in full.handles() {
            let nearest = kept
                .iter()
                .map(|p| full.distance(p, &q).unwrap())
                .fold(f64::INFINITY, f64::min);
            // Dyadic weights: both sides are exact, no epsilon needed.
            assert!(
                nearest <= bound,
                "point {q:?} sits {nearest} away, above the certified gap {bound}"
            );
        }
    }
}

#[test]
fn gap_bound_shrinks_as_theta_grows() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let dec = Arc::new(common::random_decoration(&mut rng, 50, 4));
    let support_size = dec.support().len();
    let mut previous = f64::INFINITY;
    for count in [1, support_size / 4, support_size / 2, support_size] {
        let count = count.max(1);
        let theta = truncate_support(dec.support(), count);
        let bound = truncation_gap_bound(&dec, &theta).unwrap();
        assert!(bound <= previous, "gap bound grew when theta grew");
        previous = bound;
    }
    assert_eq!(previous, 0.0);
}

#[test]
fn rescaling_by_powers_of_two_is_bit_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let dec = Arc::new(common::random_decoration(&mut rng, 25, 5));
    let space = GluedSpace::full(Arc::clone(&dec));
    for factor in [0.5, 2.0, 4.0, 0.125] {
        let scaled = Arc::new(dec.rescale(factor).unwrap());
        let scaled_space = GluedSpace::full(scaled);
        let handles = space.handles();
        for (i, p) in handles.iter().enumerate() {
            for q in handles.iter().skip(i).step_by(7) {
                let original = space.distance(p, q).unwrap();
                let scaled_distance = scaled_space.distance(p, q).unwrap();
                assert_eq!(scaled_distance, factor * original);
            }
        }
    }
}

#[test]
fn rescaling_by_general_factors_is_exact_to_rounding() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let dec = Arc::new(common::random_decoration(&mut rng, 25, 5));
    let space = GluedSpace::full(Arc::clone(&dec));
    let factor = 0.3;
    let scaled_space = GluedSpace::full(Arc::new(dec.rescale(factor).unwrap()));
    let handles = space.handles();
    for (i, p) in handles.iter().enumerate() {
        for q in handles.iter().skip(i).step_by(7) {
            let original = space.distance(p, q).unwrap();
            let scaled_distance = scaled_space.distance(p, q).unwrap();
            assert!(
                (scaled_distance - factor * original).abs() <= 1e-12 * (1.0 + original),
                "{scaled_distance} vs {} at {p:?} {q:?}",
                factor * original
            );
        }
    }
}
