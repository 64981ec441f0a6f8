//! Mittag-Leffler moments and samplers, including the Markov chain whose
//! marginals are Mittag-Leffler with drifting second parameter.

use rand::Rng;
use rand_distr::{Beta, Distribution};
use statrs::function::gamma::ln_gamma;

use crate::{crp_simulate, DistError};

fn validate_alpha_theta(alpha: f64, theta: f64) -> Result<(), DistError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(DistError::InvalidParameter {
            name: "alpha",
            value: alpha,
            constraint: "0 < alpha < 1",
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

/// The p-th moment of the generalized Mittag-Leffler distribution ML(alpha,
/// theta):
///
/// Gamma(theta + 1) * Gamma(theta/alpha + p + 1)
///   / (Gamma(theta/alpha + 1) * Gamma(theta + p*alpha + 1)),
///
/// evaluated through log-gamma so that large arguments do not overflow.
pub fn ml_moment(alpha: f64, theta: f64, p: f64) -> Result<f64, DistError> {
    validate_alpha_theta(alpha, theta)?;
    if !(theta / alpha + p + 1.0 > 0.0) || !(theta + p * alpha + 1.0 > 0.0) {
        return Err(DistError::InvalidParameter {
            name: "p",
            value: p,
            constraint: "theta/alpha + p + 1 > 0 and theta + p*alpha + 1 > 0",
        });
    }
    let log = ln_gamma(theta + 1.0) + ln_gamma(theta / alpha + p + 1.0)
        - ln_gamma(theta / alpha + 1.0)
        - ln_gamma(theta + p * alpha + 1.0);
    Ok(log.exp())
}

/// Draws an approximate ML(alpha, theta) variable as the scaled table count
/// K_n / n^alpha of a Chinese restaurant process with `resolution` customers.
///
/// The resolution must be at least 1000; the relative bias of the mean decays
/// like resolution^(alpha - 1).
pub fn sample_ml<R: Rng + ?Sized>(
    alpha: f64,
    theta: f64,
    resolution: usize,
    rng: &mut R,
) -> Result<f64, DistError> {
    validate_alpha_theta(alpha, theta)?;
    if resolution < 1000 {
        return Err(DistError::InsufficientData {
            what: "Mittag-Leffler sampling resolution",
            got: resolution,
            need: 1000,
        });
    }
    Ok(crp_simulate(alpha, theta, resolution, rng)?.diversity_scaled())
}

/// A trajectory of the Mittag-Leffler Markov chain: `values()[k-1]` holds M_k,
/// and M_k is ML(alpha, theta + k - 1) distributed.
#[derive(Debug, Clone)]
pub struct MlmcSample {
    alpha: f64,
    theta: f64,
    values: Vec<f64>,
}

impl MlmcSample {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Chain values M_1, ..., M_n.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Increments M_1, M_2 - M_1, ..., M_n - M_{n-1}. The chain is
    /// nondecreasing, so these are nonnegative.
    pub fn increments(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len());
        let mut prev = 0.0;
        for &v in &self.values {
            out.push(v - prev);
            prev = v;
        }
        out
    }
}

/// Samples the first `count` values of the Mittag-Leffler Markov chain with
/// parameters (alpha, theta), backwards from the top marginal: M_count is
/// drawn as ML(alpha, theta + count - 1) at the given resolution, and then
/// M_k = B_k * M_{k+1} with independent
/// B_k ~ Beta((theta + k - 1)/alpha + 1, 1/alpha - 1).
pub fn sample_mlmc<R: Rng + ?Sized>(
    alpha: f64,
    theta: f64,
    count: usize,
    resolution: usize,
    rng: &mut R,
) -> Result<MlmcSample, DistError> {
    validate_alpha_theta(alpha, theta)?;
    if count == 0 {
        return Err(DistError::InsufficientData {
            what: "chain length",
            got: 0,
            need: 1,
        });
    }
    let top = sample_ml(alpha, theta + (count - 1) as f64, resolution, rng)?;
    let mut values = vec![0.0; count];
    values[count - 1] = top;
    for k in (1..count).rev() {
        let a = (theta + k as f64 - 1.0) / alpha + 1.0;
        let b = 1.0 / alpha - 1.0;
        let beta = Beta::new(a, b).map_err(|_| DistError::InvalidParameter {
            name: "alpha",
            value: alpha,
            constraint: "backward beta parameters positive",
        })?;
        values[k - 1] = beta.sample(rng) * values[k];
    }
    Ok(MlmcSample {
        alpha,
        theta,
        values,
    })
}
