//! Dirichlet distributions with runtime dimension.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::DistError;

/// Parameters of a Dirichlet distribution: finitely many positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletParams {
    weights: Vec<f64>,
}

impl DirichletParams {
    /// Validates and stores the weight vector. Every weight must be positive
    /// and finite, and at least one weight is required.
    pub fn new(weights: Vec<f64>) -> Result<Self, DistError> {
        if weights.is_empty() {
            return Err(DistError::InsufficientData {
                what: "Dirichlet weights",
                got: 0,
                need: 1,
            });
        }
        for &w in &weights {
            if !(w > 0.0) || !w.is_finite() {
                return Err(DistError::InvalidParameter {
                    name: "weights",
                    value: w,
                    constraint: "every weight finite and > 0",
                });
            }
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Mean of the distribution: weights normalized to sum 1.
    pub fn mean(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }
}

/// Draws one point of the probability simplex from the Dirichlet distribution
/// with the given weights, as normalized independent Gamma(w_i, 1) variables.
pub fn sample_dirichlet<R: Rng + ?Sized>(params: &DirichletParams, rng: &mut R) -> Vec<f64> {
    let mut draws = vec![0.0; params.dim()];
    loop {
        let mut total = 0.0;
        for (slot, &w) in draws.iter_mut().zip(params.weights()) {
            let g = Gamma::new(w, 1.0).expect("weights validated positive");
            let x = g.sample(rng);
            *slot = x;
            total += x;
        }
        // Gamma draws with tiny shapes can underflow to zero; in the
        // (astronomically rare) event that all of them do, redraw.
        if total > 0.0 {
            for slot in &mut draws {
                *slot /= total;
            }
            return draws;
        }
    }
}
