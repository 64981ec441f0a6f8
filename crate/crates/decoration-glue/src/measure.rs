//! Measures on the address tree: pushforwards of block masses and the
//! finite-window comparison statistic for weak convergence.

use std::collections::BTreeMap;

use ulam_core::{PlaneTree, UlamAddress};

use crate::{Decoration, GlueError};

/// A finite measure on the address tree, stored as per-vertex atoms together
/// with subtree masses. Boundary measures (supported on rays) have zero
/// atoms but positive subtree masses.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureOnUlam {
    atoms: BTreeMap<UlamAddress, f64>,
    subtree: BTreeMap<UlamAddress, f64>,
}

impl MeasureOnUlam {
    /// Builds a measure from atoms; subtree masses are accumulated over the
    /// ancestor closure.
    pub fn from_atoms(atoms: BTreeMap<UlamAddress, f64>) -> Result<Self, GlueError> {
        for &mass in atoms.values() {
            if !(mass >= 0.0) || !mass.is_finite() {
                return Err(GlueError::BadValue {
                    what: "atom mass",
                    value: mass,
                });
            }
        }
        let mut subtree: BTreeMap<UlamAddress, f64> = BTreeMap::new();
        for (address, &mass) in &atoms {
            if mass == 0.0 {
                continue;
            }
            let mut cursor = address.clone();
            loop {
                *subtree.entry(cursor.clone()).or_insert(0.0) += mass;
                match cursor.parent() {
                    Some(parent) => cursor = parent,
                    None => break,
                }
            }
        }
        subtree.entry(UlamAddress::root()).or_insert(0.0);
        Ok(Self { atoms, subtree })
    }

    /// Builds a boundary measure directly from subtree masses; atoms are all
    /// zero. The map must be monotone: each subtree mass at least the sum of
    /// its children's, and the root must carry the total.
    pub fn from_subtree_masses(subtree: BTreeMap<UlamAddress, f64>) -> Result<Self, GlueError> {
        for &mass in subtree.values() {
            if !(mass >= 0.0) || !mass.is_finite() {
                return Err(GlueError::BadValue {
                    what: "subtree mass",
                    value: mass,
                });
            }
        }
        let mut children_sum: BTreeMap<UlamAddress, f64> = BTreeMap::new();
        for (address, &mass) in &subtree {
            if let Some(parent) = address.parent() {
                *children_sum.entry(parent).or_insert(0.0) += mass;
            }
        }
        for (address, &total) in &children_sum {
            let own = subtree.get(address).copied().unwrap_or(0.0);
            if total > own + 1e-9 * own.max(1.0) {
                return Err(GlueError::Certification {
                    reason: format!(
                        "subtree masses below {address} sum to {total}, above the vertex's own {own}"
                    ),
                });
            }
        }
        Ok(Self {
            atoms: BTreeMap::new(),
            subtree,
        })
    }

    /// The atom at a vertex.
    pub fn atom(&self, address: &UlamAddress) -> f64 {
        self.atoms.get(address).copied().unwrap_or(0.0)
    }

    /// The mass of the subtree rooted at a vertex.
    pub fn subtree_mass(&self, address: &UlamAddress) -> f64 {
        self.subtree.get(address).copied().unwrap_or(0.0)
    }

    /// Total mass of the measure.
    pub fn total(&self) -> f64 {
        self.subtree_mass(&UlamAddress::root())
    }

    pub fn atoms(&self) -> &BTreeMap<UlamAddress, f64> {
        &self.atoms
    }

    fn check_probability(&self) -> Result<(), GlueError> {
        let total = self.total();
        if (total - 1.0).abs() > 1e-9 {
            return Err(GlueError::NotProbability { total });
        }
        Ok(())
    }
}

/// Collects the block masses of a decoration into a measure on the address
/// tree: the atom at u is the total mass of the block at u.
pub fn pushforward_measure(decoration: &Decoration) -> MeasureOnUlam {
    let mut atoms = BTreeMap::new();
    for (address, block) in decoration.blocks() {
        atoms.insert(address.clone(), block.total_mass());
    }
    MeasureOnUlam::from_atoms(atoms).expect("block masses are validated nonnegative")
}

/// The finite-window comparison statistic between two probability measures:
/// the maximum over vertices of `theta` of the larger of the atom difference
/// and the subtree-mass difference. Weak convergence of measures on the
/// compactified tree is equivalent to this statistic vanishing on every
/// finite window.
pub fn measure_distance(
    m1: &MeasureOnUlam,
    m2: &MeasureOnUlam,
    theta: &PlaneTree,
) -> Result<f64, GlueError> {
    m1.check_probability()?;
    m2.check_probability()?;
    let mut best = 0.0f64;
    for v in theta.vertices() {
        let atom_diff = (m1.atom(v) - m2.atom(v)).abs();
        let subtree_diff = (m1.subtree_mass(v) - m2.subtree_mass(v)).abs();
        best = best.max(atom_diff).max(subtree_diff);
    }
    Ok(best)
}
