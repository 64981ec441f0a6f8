//! Fitness sequences for preferential attachment, with the linear-growth
//! certification: partial sums A_n grow like c*n up to O(n^(1-eps)) and the
//! entries themselves stay below n^(c'+o(1)).

use crate::GrowthError;

#[derive(Debug, Clone, PartialEq)]
pub struct FitnessSequence {
    values: Vec<f64>,
    pub c: f64,
    pub c_prime: f64,
    pub epsilon: f64,
}

impl FitnessSequence {
    /// Validates the sequence against its declared constants: a_1 > -1,
    /// a_n >= 0 afterwards, positive selection totals, and tail fits of the
    /// growth rate, the deviation exponent, and the entry growth exponent
    /// consistent with (c, c', eps).
    pub fn new(values: Vec<f64>, c: f64, c_prime: f64, epsilon: f64) -> Result<Self, GrowthError> {
        if values.is_empty() {
            return Err(GrowthError::InsufficientData {
                what: "fitness values",
                got: 0,
                need: 1,
            });
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(GrowthError::InvalidParameter {
                name: "c",
                value: c,
                constraint: "c > 0",
            });
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(GrowthError::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                constraint: "epsilon > 0",
            });
        }
        if !(0.0..1.0 / (c + 1.0)).contains(&c_prime) {
            return Err(GrowthError::InvalidParameter {
                name: "c_prime",
                value: c_prime,
                constraint: "0 <= c' < 1/(c+1)",
            });
        }
        if !(values[0] > -1.0) || !values[0].is_finite() {
            return Err(GrowthError::InvalidParameter {
                name: "a_1",
                value: values[0],
                constraint: "a_1 > -1",
            });
        }
        for (i, &a) in values.iter().enumerate().skip(1) {
            if !(a >= 0.0) || !a.is_finite() {
                return Err(GrowthError::FitnessRejected {
                    reason: format!("a_{} = {a} is negative or not finite", i + 1),
                });
            }
        }
        let mut partial = 0.0;
        for (i, &a) in values.iter().enumerate() {
            partial += a;
            // Selection total at step n is A_n + (n - 1); it must be positive
            // from the first non-forced step on.
            if i >= 1 && partial + i as f64 <= 0.0 {
                return Err(GrowthError::FitnessRejected {
                    reason: format!("selection total A_n + n - 1 vanishes at n = {}", i + 1),
                });
            }
        }
        let seq = Self {
            values,
            c,
            c_prime,
            epsilon,
        };
        seq.check_tail_fits()?;
        Ok(seq)
    }

    /// Constant fitness (a, a, a, ...): c = a, c' = 0, eps = 1.
    pub fn constant(value: f64, len: usize) -> Result<Self, GrowthError> {
        Self::new(vec![value; len], value, 0.0, 1.0)
    }

    /// (first, tail, tail, ...): c = tail, c' = 0, eps = 1. This is the shape
    /// every block-fitness sequence in this crate takes.
    pub fn first_then(first: f64, tail: f64, len: usize) -> Result<Self, GrowthError> {
        let mut values = vec![tail; len];
        if let Some(head) = values.first_mut() {
            *head = first;
        }
        Self::new(values, tail, 0.0, 1.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// a_k, 1-based.
    pub fn value(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// A_n = a_1 + ... + a_n.
    pub fn partial_sum(&self, n: usize) -> f64 {
        self.values[..n].iter().sum()
    }

    fn check_tail_fits(&self) -> Result<(), GrowthError> {
        let n = self.values.len();
        if n < 16 {
            // Too short for a meaningful fit; the pointwise checks above
            // already ran.
            return Ok(());
        }
        let half = n / 2;
        let a_half = self.partial_sum(half);
        let a_full = self.partial_sum(n);
        let fitted_c = (a_full - a_half) / (n - half) as f64;
        if (fitted_c - self.c).abs() > 0.05 * self.c.max(0.1) {
            return Err(GrowthError::FitnessRejected {
                reason: format!(
                    "tail growth rate {fitted_c} is inconsistent with declared c = {}",
                    self.c
                ),
            });
        }
        // Deviation exponent: |A_n - c n| should grow no faster than
        // n^(1 - eps).
        let mut partial = 0.0;
        let mut dev_points = Vec::new();
        let mut entry_points = Vec::new();
        for (i, &a) in self.values.iter().enumerate() {
            partial += a;
            let step = (i + 1) as f64;
            if i + 1 >= half {
                let dev = (partial - self.c * step).abs();
                if dev > 1e-12 {
                    dev_points.push((step.ln(), dev.ln()));
                }
                if a > 1e-12 {
                    entry_points.push((step.ln(), a.ln()));
                }
            }
        }
        let dev_slope = regression_slope(&dev_points).unwrap_or(0.0);
        if dev_slope > 1.0 - self.epsilon + 0.1 {
            return Err(GrowthError::FitnessRejected {
                reason: format!(
                    "partial-sum deviation grows like n^{dev_slope:.3}, above n^(1-eps) with eps = {}",
                    self.epsilon
                ),
            });
        }
        let entry_slope = regression_slope(&entry_points).unwrap_or(0.0);
        if entry_slope > self.c_prime + 0.1 {
            return Err(GrowthError::FitnessRejected {
                reason: format!(
                    "entries grow like n^{entry_slope:.3}, above the declared c' = {}",
                    self.c_prime
                ),
            });
        }
        Ok(())
    }
}

fn regression_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    Some(sxy / sxx)
}
