//! Probability measures on the block tree of a run, as measures on the
//! address tree: the uniform measure on blocks and the degree-biased family
//! eta_n(u_k) = (b_k + outdeg(u_k)) / (B_n + n - 1), which covers the weight
//! measure when b is the model's own fitness sequence.

use std::collections::BTreeMap;

use decoration_glue::MeasureOnUlam;

use crate::{FitnessSequence, GrowthError, GrowthState};

/// Uniform measure: mass 1/n on each of the n blocks.
pub fn uniform_block_measure(state: &GrowthState) -> MeasureOnUlam {
    let addresses = state.block_addresses();
    let n = addresses.len() as f64;
    let atoms: BTreeMap<_, _> = addresses.into_iter().map(|a| (a, 1.0 / n)).collect();
    MeasureOnUlam::from_atoms(atoms).expect("uniform masses are a probability")
}

/// The degree-biased measure eta_n for a bias sequence (b_k): block k gets
/// mass proportional to b_k + outdeg(k). Requires b_1 > -1 and b_k >= 0 for
/// k >= 2; with one block the measure is the unit atom at the root.
pub fn degree_measure(state: &GrowthState, bias: &[f64]) -> Result<MeasureOnUlam, GrowthError> {
    let n = state.block_count();
    if bias.len() < n {
        return Err(GrowthError::InsufficientData {
            what: "bias entries",
            got: bias.len(),
            need: n,
        });
    }
    if !(bias[0] > -1.0) || !bias[0].is_finite() {
        return Err(GrowthError::InvalidParameter {
            name: "b_1",
            value: bias[0],
            constraint: "b_1 > -1",
        });
    }
    for &b in bias.iter().take(n).skip(1) {
        if !(b >= 0.0) || !b.is_finite() {
            return Err(GrowthError::InvalidParameter {
                name: "b_k",
                value: b,
                constraint: "b_k >= 0 for k >= 2",
            });
        }
    }
    let addresses = state.block_addresses();
    if n == 1 {
        let atoms: BTreeMap<_, _> = [(addresses[0].clone(), 1.0)].into();
        return Ok(MeasureOnUlam::from_atoms(atoms)?);
    }
    let denominator: f64 = bias[..n].iter().sum::<f64>() + (n - 1) as f64;
    if !(denominator > 0.0) {
        return Err(GrowthError::InvalidParameter {
            name: "B_n + n - 1",
            value: denominator,
            constraint: "positive normalization",
        });
    }
    let mut atoms = BTreeMap::new();
    for (k, address) in addresses.into_iter().enumerate() {
        let mass = (bias[k] + state.block_children(k).len() as f64) / denominator;
        atoms.insert(address, mass);
    }
    Ok(MeasureOnUlam::from_atoms(atoms)?)
}

/// The weight measure of a run: degree biasing by the fitness sequence
/// itself.
pub fn weight_measure(
    state: &GrowthState,
    fitness: &FitnessSequence,
) -> Result<MeasureOnUlam, GrowthError> {
    degree_measure(state, fitness.values())
}
