//! Self-similar and almost-self-similar decorations: every vertex of the
//! address tree draws a block and a stick sequence, the block is scaled by
//! the product of the sticks along its ancestry raised to a fixed exponent,
//! and the sticks define a measure on the boundary. Sampling recurses with a
//! diameter-floor truncation and certifies the gap contributed by the
//! deepest materialized layer.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use rand::Rng;
use statrs::function::gamma::ln_gamma;

use decoration_glue::{truncation_gap_bound, Decoration, GluedSpace, MeasureOnUlam};
use distributions::{sample_gem_to_residual, sample_ml};
use ulam_core::{PlaneTree, UlamAddress};

use crate::block_samples::STICK_CAP;
use crate::error::LimitError;
use crate::iterative::{circle_block, collapse_block, segment_block, BlockSource};

const ML_RESOLUTION: usize = 4_000;

/// Law of the stick sequence (P_i) attached to a vertex.
pub enum StickLaw {
    Gem { alpha: f64, theta: f64 },
    /// Fixed sticks, nonnegative with sum at most 1.
    Deterministic(Vec<f64>),
}

/// Block law and stick law for one vertex class, optionally with the block
/// metric rescaled by S^exponent where S is the diversity of the vertex's
/// own stick sequence (GEM sticks only).
pub struct SelfSimilarLaw<'a> {
    pub blocks: BlockSource<'a>,
    pub sticks: StickLaw,
    pub diversity_scale_exponent: Option<f64>,
}

/// When to stop the recursion: at `max_depth`, and below any vertex whose
/// scaled diameter bound falls under `diameter_floor`.
pub struct TruncationPolicy {
    pub max_depth: usize,
    pub diameter_floor: f64,
}

/// Full description of a self-similar decoration law. The root vertex draws
/// from `root`, every other vertex from `generic`; `beta` is the scaling
/// exponent, so the block at vertex u is scaled by (prod of sticks along the
/// ancestry of u)^beta. `moment_order` is the p for which the contraction
/// condition E[sum_j P_j^(p*beta)] < 1 is checked; block diameters (after
/// any diversity rescale) must admit a p-th moment, and `block_diameter_bound`
/// is the bound used by the pruning rule.
pub struct SelfSimilarSpec<'a> {
    pub beta: f64,
    pub moment_order: f64,
    pub block_diameter_bound: f64,
    pub root: SelfSimilarLaw<'a>,
    pub generic: SelfSimilarLaw<'a>,
    pub truncation: TruncationPolicy,
}

/// One sampled decoration with its glued space, the boundary measure
/// mu(T(u)) = prod of sticks along the ancestry, and a truncation
/// certificate: removing the deepest materialized layer changes any distance
/// by at most `truncation_gap`.
pub struct SelfSimilarSample {
    pub decoration: Arc<Decoration>,
    pub space: GluedSpace,
    pub leaf_measure: MeasureOnUlam,
    pub truncation_gap: f64,
}

/// Exact value of E[sum_j P_j^exponent] for the stick law. For GEM(a, t)
/// sticks this is the size-biased moment E[P~^(exponent-1)] with
/// P~ ~ Beta(1-a, t+a), infinite when exponent <= a.
pub fn contraction_estimate(sticks: &StickLaw, exponent: f64) -> Result<f64, LimitError> {
    if !(exponent > 0.0) || !exponent.is_finite() {
        return Err(LimitError::Parameter {
            name: "exponent",
            value: exponent,
            constraint: "positive and finite",
        });
    }
    match sticks {
        StickLaw::Gem { alpha, theta } => {
            check_gem(*alpha, *theta)?;
            if exponent <= *alpha {
                return Ok(f64::INFINITY);
            }
            Ok((ln_gamma(theta + 1.0) + ln_gamma(exponent - alpha)
                - ln_gamma(theta + exponent)
                - ln_gamma(1.0 - alpha))
            .exp())
        }
        StickLaw::Deterministic(values) => {
            check_deterministic(values)?;
            Ok(values
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| p.powf(exponent))
                .sum())
        }
    }
}

fn check_gem(alpha: f64, theta: f64) -> Result<(), LimitError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LimitError::Parameter {
            name: "alpha",
            value: alpha,
            constraint: "0 < alpha < 1",
        });
    }
    if !(theta > -alpha) {
        return Err(LimitError::Parameter {
            name: "theta",
            value: theta,
            constraint: "theta > -alpha",
        });
    }
    Ok(())
}

fn check_deterministic(values: &[f64]) -> Result<(), LimitError> {
    let mut sum = 0.0;
    for &p in values {
        if !(0.0..=1.0).contains(&p) {
            return Err(LimitError::Parameter {
                name: "stick",
                value: p,
                constraint: "each stick in [0, 1]",
            });
        }
        sum += p;
    }
    if sum > 1.0 + 1e-9 {
        return Err(LimitError::Input {
            what: "stick sequence",
            detail: format!("sticks sum to {sum}, above 1"),
        });
    }
    Ok(())
}

fn check_law(law: &SelfSimilarLaw<'_>, which: &'static str, exponent: f64) -> Result<(), LimitError> {
    let estimate = contraction_estimate(&law.sticks, exponent)?;
    if !(estimate < 1.0) {
        return Err(LimitError::ContractionViolated {
            law: which,
            estimate,
        });
    }
    if let Some(g) = law.diversity_scale_exponent {
        if !g.is_finite() {
            return Err(LimitError::Parameter {
                name: "diversity_scale_exponent",
                value: g,
                constraint: "finite",
            });
        }
        if matches!(law.sticks, StickLaw::Deterministic(_)) {
            return Err(LimitError::Parameter {
                name: "diversity_scale_exponent",
                value: g,
                constraint: "diversity rescaling needs GEM sticks",
            });
        }
    }
    Ok(())
}

struct VertexDraw {
    fractions: Vec<f64>,
    diversity_factor: f64,
}

/// Sticks plus the S^g factor for one vertex. With GEM sticks the diversity
/// is drawn exactly by splitting off the materialized prefix: after m sticks
/// with residual R, the diversity of the full sequence is R^alpha times an
/// independent ML(alpha, theta + m*alpha) variable.
fn draw_vertex<R: Rng>(
    law: &SelfSimilarLaw<'_>,
    keep_threshold: Option<f64>,
    rng: &mut R,
) -> Result<VertexDraw, LimitError> {
    let (fractions, residual, gem) = match &law.sticks {
        StickLaw::Gem { alpha, theta } => match keep_threshold {
            Some(t) if t < 1.0 => {
                let seq = sample_gem_to_residual(*alpha, *theta, t, STICK_CAP, rng)?;
                (seq.fractions().to_vec(), seq.residual(), Some((*alpha, *theta)))
            }
            _ => (Vec::new(), 1.0, Some((*alpha, *theta))),
        },
        StickLaw::Deterministic(values) => {
            let kept = match keep_threshold {
                Some(_) => values.clone(),
                None => Vec::new(),
            };
            (kept, 0.0, None)
        }
    };
    let diversity_factor = match law.diversity_scale_exponent {
        None => 1.0,
        Some(g) => {
            let (alpha, theta) = gem.expect("validated: diversity rescaling needs GEM sticks");
            let m = fractions.len() as f64;
            let tail = sample_ml(alpha, theta + m * alpha, ML_RESOLUTION, rng)?;
            (residual.powf(alpha) * tail).powf(g)
        }
    };
    Ok(VertexDraw {
        fractions,
        diversity_factor,
    })
}

/// Samples one decoration from the law.
pub fn self_similar_sample<R: Rng>(
    spec: &mut SelfSimilarSpec<'_>,
    rng: &mut R,
) -> Result<SelfSimilarSample, LimitError> {
    if !(spec.beta > 0.0) || !spec.beta.is_finite() {
        return Err(LimitError::Parameter {
            name: "beta",
            value: spec.beta,
            constraint: "positive and finite",
        });
    }
    if !(spec.moment_order >= 1.0) || !spec.moment_order.is_finite() {
        return Err(LimitError::Parameter {
            name: "moment_order",
            value: spec.moment_order,
            constraint: "at least 1",
        });
    }
    if !(spec.block_diameter_bound > 0.0) || !spec.block_diameter_bound.is_finite() {
        return Err(LimitError::Parameter {
            name: "block_diameter_bound",
            value: spec.block_diameter_bound,
            constraint: "positive and finite",
        });
    }
    if !(spec.truncation.diameter_floor > 0.0) {
        return Err(LimitError::Parameter {
            name: "diameter_floor",
            value: spec.truncation.diameter_floor,
            constraint: "positive",
        });
    }
    let exponent = spec.moment_order * spec.beta;
    check_law(&spec.generic, "generic", exponent)?;
    check_law(&spec.root, "root", exponent)?;

    // Smallest ancestry product worth keeping: a vertex with product q is
    // kept when q^beta * diameter bound >= floor.
    let product_floor =
        (spec.truncation.diameter_floor / spec.block_diameter_bound).powf(1.0 / spec.beta);

    let mut blocks = BTreeMap::new();
    let mut masses = BTreeMap::new();
    let mut queue = VecDeque::new();
    queue.push_back((UlamAddress::root(), 1.0f64, 0usize));
    let mut counter = 0usize;
    while let Some((address, product, depth)) = queue.pop_front() {
        let law = if depth == 0 {
            &mut spec.root
        } else {
            &mut spec.generic
        };
        let keep_threshold = if depth < spec.truncation.max_depth {
            Some((product_floor / product).min(f64::INFINITY))
        } else {
            None
        };
        let draw = draw_vertex(law, keep_threshold, rng)?;
        let kept: Vec<(usize, f64)> = match keep_threshold {
            None => Vec::new(),
            Some(t) => draw
                .fractions
                .iter()
                .enumerate()
                .filter(|(_, &p)| p >= t)
                .map(|(i, &p)| (i, p))
                .collect(),
        };
        let scale = product.powf(spec.beta) * draw.diversity_factor;
        let n_points = kept.len();
        let block = match &mut law.blocks {
            BlockSource::UnitSegment => {
                let positions: Vec<f64> =
                    (0..n_points).map(|_| rng.random::<f64>() * scale).collect();
                segment_block(scale, &positions, n_points)?.0
            }
            BlockSource::UnitCircle => {
                let positions: Vec<f64> =
                    (0..n_points).map(|_| rng.random::<f64>() * scale).collect();
                circle_block(scale, &positions, n_points)?.0
            }
            BlockSource::Sampler(sample) => {
                let sampled = sample(counter, n_points, rng)?;
                if sampled.n_points() < n_points {
                    return Err(LimitError::Input {
                        what: "block sampler",
                        detail: format!(
                            "block {counter} carries {} points, {n_points} needed",
                            sampled.n_points()
                        ),
                    });
                }
                if scale == 1.0 {
                    sampled.block().clone()
                } else if scale > 0.0 {
                    sampled.block().rescale(scale)?
                } else {
                    collapse_block(sampled.block())?
                }
            }
        };
        counter += 1;
        blocks.insert(address.clone(), block);
        masses.insert(address.clone(), product);
        for (letter, (_, p)) in kept.iter().enumerate() {
            queue.push_back((address.child(letter as u32 + 1), product * p, depth + 1));
        }
    }

    let decoration = Arc::new(Decoration::new(blocks)?);
    let space = GluedSpace::full(Arc::clone(&decoration));
    let leaf_measure = MeasureOnUlam::from_subtree_masses(masses)?;

    let height = decoration.support().height();
    let truncation_gap = if height == 0 {
        0.0
    } else {
        let inner = PlaneTree::from_vertices(
            decoration
                .support()
                .vertices()
                .filter(|v| v.height() < height)
                .cloned(),
        )?;
        truncation_gap_bound(&decoration, &inner)?
    };

    Ok(SelfSimilarSample {
        decoration,
        space,
        leaf_measure,
        truncation_gap,
    })
}

/// The self-similar description of an iterative gluing run whose weights are
/// the increments of a Mittag-Leffler Markov chain MLMC(1/(b+1), a/(b+1))
/// and whose scalings are those increments to the power gamma: exponent
/// gamma/(b+1), root sticks GEM(1/(b+1), a/(b+1)), generic sticks
/// GEM(1/(b+1), b/(b+1)), and every block rescaled by S^gamma where S is the
/// 1/(b+1)-diversity of the same vertex's sticks.
pub fn ass_from_iterative<'a>(
    b: f64,
    a: f64,
    gamma: f64,
    root_blocks: BlockSource<'a>,
    generic_blocks: BlockSource<'a>,
    block_diameter_bound: f64,
    truncation: TruncationPolicy,
) -> Result<SelfSimilarSpec<'a>, LimitError> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(LimitError::Parameter {
            name: "b",
            value: b,
            constraint: "b > 0",
        });
    }
    if !(a > -1.0) || !a.is_finite() {
        return Err(LimitError::Parameter {
            name: "a",
            value: a,
            constraint: "a > -1",
        });
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(LimitError::Parameter {
            name: "gamma",
            value: gamma,
            constraint: "gamma > 0",
        });
    }
    let alpha = 1.0 / (b + 1.0);
    let beta = gamma / (b + 1.0);
    Ok(SelfSimilarSpec {
        beta,
        // p*beta = 2 guarantees E[sum P^(p*beta)] < 1 for proper sticks.
        moment_order: (2.0 / beta).max(2.0),
        block_diameter_bound,
        root: SelfSimilarLaw {
            blocks: root_blocks,
            sticks: StickLaw::Gem {
                alpha,
                theta: a / (b + 1.0),
            },
            diversity_scale_exponent: Some(gamma),
        },
        generic: SelfSimilarLaw {
            blocks: generic_blocks,
            sticks: StickLaw::Gem {
                alpha,
                theta: b / (b + 1.0),
            },
            diversity_scale_exponent: Some(gamma),
        },
        truncation,
    })
}
