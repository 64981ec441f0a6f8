//! Ball-growth dimension estimation for glued spaces carrying a measure on
//! the address tree: sample rays under the measure, pair each ancestor's
//! distance-to-the-sampled-point with the mass of its subtree, and regress
//! log mass on log radius.

use decoration_glue::{GluedSpace, MeasureOnUlam, PointHandle};
use rand::Rng;
use ulam_core::UlamAddress;

use crate::error::LimitError;

/// Minimum number of (radius, mass) pairs inside the window for a fit.
const MIN_PAIRS: usize = 8;
/// Minimum spread of log radii inside the window for a fit.
const MIN_LOG_SPREAD: f64 = 0.2;

/// Estimates the exponent d with mu(B(x, r)) ~ r^d at measure-typical
/// points. Each of `n_leaves` rays descends from the root by subtree mass;
/// the point reached is paired with every ancestor vertex a through the pair
/// (distance from a's block root to the point, mass of the subtree at a),
/// and the pooled pairs with radius inside `radii` are fit by least squares
/// on log-log axes.
pub fn leaf_dimension_estimate<R: Rng>(
    space: &GluedSpace,
    measure: &MeasureOnUlam,
    n_leaves: usize,
    radii: (f64, f64),
    rng: &mut R,
) -> Result<f64, LimitError> {
    let (r_min, r_max) = radii;
    if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() {
        return Err(LimitError::Parameter {
            name: "radii",
            value: r_min,
            constraint: "0 < r_min < r_max < infinity",
        });
    }
    if n_leaves == 0 {
        return Err(LimitError::Parameter {
            name: "n_leaves",
            value: 0.0,
            constraint: "at least one sampled ray",
        });
    }
    if !(measure.total() > 0.0) {
        return Err(LimitError::Input {
            what: "measure",
            detail: "total mass is zero".to_string(),
        });
    }

    let mut points: Vec<(f64, f64)> = Vec::new();
    for _ in 0..n_leaves {
        let ray = sample_ray(space, measure, rng);
        let target = root_point(space, ray.last().expect("ray contains the root"));
        for vertex in &ray[..ray.len() - 1] {
            let r = space.distance(&root_point(space, vertex), &target)?;
            let mass = measure.subtree_mass(vertex);
            if r >= r_min && r <= r_max && r > 0.0 && mass > 0.0 {
                points.push((r.ln(), mass.ln()));
            }
        }
    }

    if points.len() < MIN_PAIRS {
        return Err(LimitError::Resolution {
            what: "radii window",
            detail: format!(
                "{} radius/mass pairs inside [{r_min}, {r_max}], {MIN_PAIRS} needed",
                points.len()
            ),
        });
    }
    let spread = points
        .iter()
        .map(|&(x, _)| x)
        .fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|&(x, _)| x).fold(f64::INFINITY, f64::min);
    if spread < MIN_LOG_SPREAD {
        return Err(LimitError::Resolution {
            what: "radii window",
            detail: format!("log-radius spread {spread:.3} is too narrow to fit"),
        });
    }

    let n = points.len() as f64;
    let x_bar = points.iter().map(|&(x, _)| x).sum::<f64>() / n;
    let y_bar = points.iter().map(|&(_, y)| y).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(x, y) in &points {
        num += (x - x_bar) * (y - y_bar);
        den += (x - x_bar) * (x - x_bar);
    }
    Ok(num / den)
}

fn root_point(space: &GluedSpace, vertex: &UlamAddress) -> PointHandle {
    PointHandle::new(vertex.clone(), space.block_at(vertex).root())
}

/// Descends from the root, at each vertex picking child i with probability
/// subtree(i)/subtree(u) and stopping with the complementary probability
/// (the vertex's own atom plus any unassigned mass). Returns the ancestor
/// path ending at the reached vertex.
fn sample_ray<R: Rng>(
    space: &GluedSpace,
    measure: &MeasureOnUlam,
    rng: &mut R,
) -> Vec<UlamAddress> {
    let mut ray = vec![UlamAddress::root()];
    loop {
        let vertex = ray.last().expect("nonempty").clone();
        let total = measure.subtree_mass(&vertex);
        if total <= 0.0 {
            return ray;
        }
        let degree = space.theta().out_degree(&vertex).unwrap_or(0);
        let mut acc = 0.0;
        let draw = rng.random::<f64>() * total;
        let mut next = None;
        for i in 1..=degree {
            let child = vertex.child(i);
            acc += measure.subtree_mass(&child);
            if draw < acc {
                next = Some(child);
                break;
            }
        }
        match next {
            Some(child) => ray.push(child),
            None => return ray,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iterative::BlockSource;
    use crate::self_similar::{
        self_similar_sample, SelfSimilarLaw, SelfSimilarSpec, StickLaw, TruncationPolicy,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn binary_segments(beta: f64, floor: f64, seed: u64) -> crate::self_similar::SelfSimilarSample {
        let law = || SelfSimilarLaw {
            blocks: BlockSource::UnitSegment,
            sticks: StickLaw::Deterministic(vec![0.5, 0.5]),
            diversity_scale_exponent: None,
        };
        let mut spec = SelfSimilarSpec {
            beta,
            moment_order: 2.0 / beta,
            block_diameter_bound: 1.0,
            root: law(),
            generic: law(),
            truncation: TruncationPolicy {
                max_depth: 40,
                diameter_floor: floor,
            },
        };
        self_similar_sample(&mut spec, &mut rng(seed)).unwrap()
    }

    #[test]
    fn one_dimensional_cascade_fits_near_one() {
        let sample = binary_segments(1.0, 1e-4, 10);
        let estimate = leaf_dimension_estimate(
            &sample.space,
            &sample.leaf_measure,
            60,
            (2e-3, 0.3),
            &mut rng(11),
        )
        .unwrap();
        assert!(
            (estimate - 1.0).abs() <= 0.3,
            "estimate {estimate} too far from 1"
        );
    }

    #[test]
    fn degenerate_radii_are_rejected() {
        let sample = binary_segments(1.0, 1e-2, 12);
        assert!(matches!(
            leaf_dimension_estimate(
                &sample.space,
                &sample.leaf_measure,
                10,
                (0.5, 0.5),
                &mut rng(13)
            ),
            Err(LimitError::Parameter { name: "radii", .. })
        ));
    }

    #[test]
    fn unreachable_window_is_a_resolution_error() {
        let sample = binary_segments(1.0, 1e-2, 14);
        assert!(matches!(
            leaf_dimension_estimate(
                &sample.space,
                &sample.leaf_measure,
                10,
                (1e9, 2e9),
                &mut rng(15)
            ),
            Err(LimitError::Resolution { .. })
        ));
    }
}
