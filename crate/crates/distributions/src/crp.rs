//! Chinese restaurant process simulation and conditional table draws.

use rand::Rng;

use crate::{DistError, StickSequence};

/// Seating state of a two-parameter Chinese restaurant process.
#[derive(Debug, Clone)]
pub struct CrpState {
    alpha: f64,
    theta: f64,
    customers: usize,
    table_sizes: Vec<usize>,
    // Table index of every seated customer, kept so that a uniformly chosen
    // entry proposes tables with probability proportional to their size.
    seats: Vec<u32>,
}

impl CrpState {
    /// An empty restaurant. Requires 0 <= alpha < 1 and theta > -alpha.
    pub fn new(alpha: f64, theta: f64) -> Result<Self, DistError> {
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
        Ok(Self {
            alpha,
            theta,
            customers: 0,
            table_sizes: Vec::new(),
            seats: Vec::new(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn customers(&self) -> usize {
        self.customers
    }

    pub fn tables(&self) -> usize {
        self.table_sizes.len()
    }

    pub fn table_sizes(&self) -> &[usize] {
        &self.table_sizes
    }

    /// Seats one customer: a new table opens with probability
    /// (theta + K*alpha) / (n + theta), otherwise table i is joined with
    /// probability (n_i - alpha) / (n + theta).
    ///
    /// Joining is done by proposing a uniformly random seated customer's
    /// table and accepting with probability (n_i - alpha) / n_i, which keeps
    /// the step O(1) in expectation.
    pub fn seat_one<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.customers as f64;
        let k = self.table_sizes.len() as f64;
        let p_new = if self.customers == 0 {
            1.0
        } else {
            (self.theta + k * self.alpha) / (n + self.theta)
        };
        let table = if rng.random::<f64>() < p_new {
            self.table_sizes.push(0);
            self.table_sizes.len() - 1
        } else {
            loop {
                let proposal = self.seats[rng.random_range(0..self.seats.len())] as usize;
                let size = self.table_sizes[proposal] as f64;
                if self.alpha == 0.0 || rng.random::<f64>() * size >= self.alpha {
                    break proposal;
                }
            }
        };
        self.table_sizes[table] += 1;
        self.seats.push(table as u32);
        self.customers += 1;
    }

    /// Number of occupied tables scaled by n^(-alpha), the quantity whose
    /// almost-sure limit is Mittag-Leffler distributed.
    pub fn diversity_scaled(&self) -> f64 {
        self.table_sizes.len() as f64 / (self.customers as f64).powf(self.alpha)
    }
}

/// Runs a Chinese restaurant process for `customers` arrivals and returns the
/// final seating state.
pub fn crp_simulate<R: Rng + ?Sized>(
    alpha: f64,
    theta: f64,
    customers: usize,
    rng: &mut R,
) -> Result<CrpState, DistError> {
    if customers == 0 {
        return Err(DistError::InsufficientData {
            what: "customers",
            got: 0,
            need: 1,
        });
    }
    let mut state = CrpState::new(alpha, theta)?;
    for _ in 0..customers {
        state.seat_one(rng);
    }
    Ok(state)
}

/// Draws table labels conditionally on a realized stick sequence: the first
/// draw is table 1, and when tables 1..=m have appeared, the next draw is
/// table k <= m with probability equal to the k-th stick fraction and table
/// m+1 with the remaining probability.
///
/// The stick residual must be below 1e-6 so that the leftover probability is
/// attributable to the next unseen table rather than to truncation error.
pub fn crp_conditional_draws<R: Rng + ?Sized>(
    sticks: &StickSequence,
    count: usize,
    rng: &mut R,
) -> Result<Vec<usize>, DistError> {
    const RESIDUAL_LIMIT: f64 = 1e-6;
    if sticks.residual() >= RESIDUAL_LIMIT {
        return Err(DistError::ResidualTooLarge {
            residual: sticks.residual(),
            limit: RESIDUAL_LIMIT,
        });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let fractions = sticks.fractions();
    // prefix[k] = P_1 + ... + P_k.
    let mut prefix = Vec::with_capacity(fractions.len() + 1);
    prefix.push(0.0);
    for &p in fractions {
        prefix.push(prefix.last().unwrap() + p);
    }

    let mut draws = Vec::with_capacity(count);
    let mut max_label = 1usize;
    draws.push(1usize);
    for _ in 1..count {
        let u: f64 = rng.random();
        let covered = prefix[max_label.min(fractions.len())];
        let label = if u >= covered {
            max_label + 1
        } else {
            // Binary search for the first k with prefix[k] > u.
            let mut lo = 0usize;
            let mut hi = max_label.min(fractions.len());
            while lo + 1 < hi {
                let mid = (lo + hi) / 2;
                if prefix[mid] > u {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        };
        max_label = max_label.max(label);
        draws.push(label);
    }
    Ok(draws)
}
