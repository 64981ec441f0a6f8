//! Stick-breaking (GEM) sequences and the associated diversity estimator.

use rand::Rng;
use rand_distr::{Beta, Distribution};
use statrs::function::gamma::gamma;

use crate::DistError;

/// A finite prefix of a stick-breaking sequence, in size-biased (creation)
/// order, together with the mass not covered by the prefix.
#[derive(Debug, Clone)]
pub struct StickSequence {
    alpha: f64,
    theta: f64,
    fractions: Vec<f64>,
    residual: f64,
}

impl StickSequence {
    /// Wraps an externally produced fraction sequence. The fractions must be
    /// nonnegative and sum with the residual to 1 within rounding error.
    pub fn from_parts(
        alpha: f64,
        theta: f64,
        fractions: Vec<f64>,
        residual: f64,
    ) -> Result<Self, DistError> {
        validate_gem_params(alpha, theta)?;
        if fractions.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(DistError::InvalidParameter {
                name: "fractions",
                value: f64::NAN,
                constraint: "every fraction in [0, 1]",
            });
        }
        let total: f64 = fractions.iter().sum::<f64>() + residual;
        if !(total - 1.0).abs().is_finite() || (total - 1.0).abs() > 1e-9 {
            return Err(DistError::InvalidParameter {
                name: "residual",
                value: residual,
                constraint: "fractions plus residual must sum to 1",
            });
        }
        Ok(Self {
            alpha,
            theta,
            fractions,
            residual,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Stick fractions in size-biased order.
    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    /// Mass of all sticks beyond the stored prefix.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }
}

fn validate_gem_params(alpha: f64, theta: f64) -> Result<(), DistError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(DistError::InvalidParameter {
            name: "alpha",
            value: alpha,
            constraint: "0 <= alpha < 1",
        });
    }
    if !(theta > -alpha) || !theta.is_finite() {
        return Err(DistError::InvalidParameter {
            name: "theta",
            value: theta,
            constraint: "theta > -alpha",
        });
    }
    Ok(())
}

/// Breaks `count` sticks from GEM(alpha, theta): with B_i ~ Beta(1 - alpha,
/// theta + i*alpha) independent, the i-th fraction is B_i * prod_{j<i}(1 - B_j).
pub fn sample_gem<R: Rng + ?Sized>(
    alpha: f64,
    theta: f64,
    count: usize,
    rng: &mut R,
) -> Result<StickSequence, DistError> {
    validate_gem_params(alpha, theta)?;
    if count == 0 {
        return Err(DistError::InsufficientData {
            what: "stick count",
            got: 0,
            need: 1,
        });
    }
    let mut fractions = Vec::with_capacity(count);
    let mut remaining = 1.0f64;
    for i in 1..=count {
        let beta = Beta::new(1.0 - alpha, theta + i as f64 * alpha).map_err(|_| {
            DistError::InvalidParameter {
                name: "theta",
                value: theta,
                constraint: "theta + i*alpha > 0 for every stick index",
            }
        })?;
        let b = beta.sample(rng);
        fractions.push(remaining * b);
        remaining *= 1.0 - b;
    }
    StickSequence::from_parts(alpha, theta, fractions, remaining.max(0.0))
}

/// Breaks sticks until the residual mass drops below `residual_limit` or
/// `max_count` sticks have been produced, whichever comes first.
pub fn sample_gem_to_residual<R: Rng + ?Sized>(
    alpha: f64,
    theta: f64,
    residual_limit: f64,
    max_count: usize,
    rng: &mut R,
) -> Result<StickSequence, DistError> {
    validate_gem_params(alpha, theta)?;
    if !(residual_limit > 0.0) {
        return Err(DistError::InvalidParameter {
            name: "residual_limit",
            value: residual_limit,
            constraint: "residual_limit > 0",
        });
    }
    let mut fractions = Vec::new();
    let mut remaining = 1.0f64;
    let mut i = 0usize;
    while remaining >= residual_limit && i < max_count {
        i += 1;
        let beta = Beta::new(1.0 - alpha, theta + i as f64 * alpha).map_err(|_| {
            DistError::InvalidParameter {
                name: "theta",
                value: theta,
                constraint: "theta + i*alpha > 0 for every stick index",
            }
        })?;
        let b = beta.sample(rng);
        fractions.push(remaining * b);
        remaining *= 1.0 - b;
    }
    StickSequence::from_parts(alpha, theta, fractions, remaining.max(0.0))
}

/// Options for [`diversity_estimate`].
#[derive(Debug, Clone, Copy, Default)]
pub struct DiversityOptions {
    /// Number of ranks to average over. The window ends at rank len/2, where
    /// ranked fractions of a truncated sequence are still reliable; it
    /// defaults to len/4.
    pub window: Option<usize>,
}

/// Estimates the alpha-diversity of the distribution underlying a stick
/// sequence: the almost-sure limit of i * (P^down_i)^alpha over the ranked
/// fractions, scaled by Gamma(1 - alpha).
///
/// The estimator ranks the stored fractions, evaluates i * (P^down_i)^alpha on
/// a window of middle ranks, and averages. Ranks close to the truncation
/// point are excluded because a size-biased prefix under-represents them.
pub fn diversity_estimate(
    sticks: &StickSequence,
    options: DiversityOptions,
) -> Result<f64, DistError> {
    let alpha = sticks.alpha();
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(DistError::InvalidParameter {
            name: "alpha",
            value: alpha,
            constraint: "0 < alpha < 1 for a diversity estimate",
        });
    }
    let n = sticks.len();
    if n < 100 {
        return Err(DistError::InsufficientData {
            what: "diversity estimate",
            got: n,
            need: 100,
        });
    }
    let hi = n / 2;
    let window = options.window.unwrap_or(n / 4).max(1);
    if window > hi {
        return Err(DistError::InvalidParameter {
            name: "window",
            value: window as f64,
            constraint: "window <= len / 2",
        });
    }
    let lo = hi - window;

    let mut ranked = sticks.fractions().to_vec();
    ranked.sort_unstable_by(|a, b| b.partial_cmp(a).expect("fractions are finite"));

    let mut acc = 0.0;
    for (idx, &p) in ranked[lo..hi].iter().enumerate() {
        let rank = (lo + idx + 1) as f64;
        acc += rank * p.powf(alpha);
    }
    Ok(gamma(1.0 - alpha) * acc / window as f64)
}
