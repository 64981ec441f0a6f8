//! Two-colour Pólya urns with general balanced replacement matrices.

use rand::Rng;

use crate::DistError;

/// A two-colour urn with real-valued weights. On each draw a colour is chosen
/// with probability proportional to its weight and the corresponding row of
/// the replacement matrix is added to the weights.
#[derive(Debug, Clone)]
pub struct UrnState {
    weights: [f64; 2],
    replacement: [[f64; 2]; 2],
    draws: usize,
}

impl UrnState {
    /// Requires positive total initial weight, nonnegative weights, and a
    /// replacement matrix with nonnegative entries.
    pub fn new(initial: [f64; 2], replacement: [[f64; 2]; 2]) -> Result<Self, DistError> {
        if initial.iter().any(|&w| w < 0.0 || !w.is_finite()) || initial[0] + initial[1] <= 0.0 {
            return Err(DistError::InvalidParameter {
                name: "initial",
                value: initial[0].min(initial[1]),
                constraint: "nonnegative weights with positive total",
            });
        }
        for row in &replacement {
            for &x in row {
                if x < 0.0 || !x.is_finite() {
                    return Err(DistError::InvalidUrnMatrix {
                        reason: "entries must be nonnegative and finite",
                    });
                }
            }
        }
        Ok(Self {
            weights: initial,
            replacement,
            draws: 0,
        })
    }

    pub fn weights(&self) -> [f64; 2] {
        self.weights
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    /// Fraction of the total weight held by the first colour.
    pub fn fraction(&self) -> f64 {
        self.weights[0] / (self.weights[0] + self.weights[1])
    }

    /// Performs one draw-and-replace step and returns the drawn colour.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let total = self.weights[0] + self.weights[1];
        let colour = usize::from(rng.random::<f64>() * total >= self.weights[0]);
        self.weights[0] += self.replacement[colour][0];
        self.weights[1] += self.replacement[colour][1];
        self.draws += 1;
        colour
    }
}

/// Runs the classical Pólya urn (replacement matrix diag(1, 1)) from the given
/// initial weights for `steps` draws and returns the final state.
pub fn polya_urn<R: Rng + ?Sized>(
    initial: [f64; 2],
    steps: usize,
    rng: &mut R,
) -> Result<UrnState, DistError> {
    let mut urn = UrnState::new(initial, [[1.0, 0.0], [0.0, 1.0]])?;
    for _ in 0..steps {
        urn.step(rng);
    }
    Ok(urn)
}

/// The deterministic weight-proportion limit of a balanced two-colour urn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UrnLimit {
    /// Common row sum of the replacement matrix; the total weight grows by
    /// this amount on every draw.
    pub growth_rate: f64,
    /// Almost-sure limit of the weight proportions (colour 1, colour 2).
    pub proportions: [f64; 2],
}

/// Computes the limiting weight proportions of a balanced urn with
/// replacement matrix [[a, b], [c, d]]: the left eigenvector (c, b)/(b + c)
/// for the maximal eigenvalue a + b.
///
/// The matrix must have nonnegative entries, equal row sums, and at least one
/// positive off-diagonal entry. The eigenvector equation v M = lambda v is
/// verified to 1e-10 before returning.
pub fn generalized_urn_limit(replacement: [[f64; 2]; 2]) -> Result<UrnLimit, DistError> {
    let [[a, b], [c, d]] = replacement;
    for &x in [a, b, c, d].iter() {
        if x < 0.0 || !x.is_finite() {
            return Err(DistError::InvalidUrnMatrix {
                reason: "entries must be nonnegative and finite",
            });
        }
    }
    let lambda = a + b;
    let scale = lambda.abs().max(c + d);
    if (a + b - (c + d)).abs() > 1e-12 * scale.max(1.0) {
        return Err(DistError::InvalidUrnMatrix {
            reason: "rows must have equal sums",
        });
    }
    if b + c <= 0.0 {
        return Err(DistError::InvalidUrnMatrix {
            reason: "at least one off-diagonal entry must be positive",
        });
    }
    let v = [c / (b + c), b / (b + c)];
    // v M = lambda v, coordinate by coordinate.
    let lhs = [v[0] * a + v[1] * c, v[0] * b + v[1] * d];
    for i in 0..2 {
        if (lhs[i] - lambda * v[i]).abs() > 1e-10 * scale.max(1.0) {
            return Err(DistError::InvalidUrnMatrix {
                reason: "eigenvector residual exceeded tolerance",
            });
        }
    }
    Ok(UrnLimit {
        growth_rate: lambda,
        proportions: v,
    })
}
