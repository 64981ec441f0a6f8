//! Non-explosion: tail sums of block sizes along rays, the sufficient
//! condition on diameters and heights, and the truncation gap bound.

use std::collections::{BTreeMap, BTreeSet};

use ulam_core::{PlaneTree, UlamAddress};

use crate::{Decoration, GlueError};

/// Whether a tail sum over the ancestors of u includes u itself. The two
/// conventions give different per-vertex sums but the same supremum over all
/// of the infinite tree, because the inclusive sum at u equals the exclusive
/// sum at any child of u.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumRange {
    #[default]
    Inclusive,
    Exclusive,
}

/// The supremum over all vertices u of the sum of `lengths` over the
/// ancestors v of u (v <= u, inclusive by default) that fall outside
/// `theta`. Exact for the finitely supported input map.
pub fn nonexplosion_tail(
    lengths: &BTreeMap<UlamAddress, f64>,
    theta: &PlaneTree,
    range: SumRange,
) -> Result<f64, GlueError> {
    for (address, &len) in lengths {
        if !(len >= 0.0) || !len.is_finite() {
            return Err(GlueError::Certification {
                reason: format!("length at {address} is {len}, not a finite nonnegative value"),
            });
        }
    }
    // Beyond the closure of the support and theta every summand is zero, so
    // the supremum is attained on the closure; and because the supremum over
    // the whole tree is the same for both ranges, one inclusive scan serves
    // both (see SumRange).
    let _ = range;
    let mut closure: BTreeSet<UlamAddress> = BTreeSet::new();
    closure.insert(UlamAddress::root());
    for address in lengths.keys().chain(theta.vertices()) {
        let mut cursor = address.clone();
        loop {
            closure.insert(cursor.clone());
            match cursor.parent() {
                Some(parent) => cursor = parent,
                None => break,
            }
        }
    }
    // Addresses in a BTreeSet iterate ancestors-first, so accumulate path
    // sums with a stack of (address, inclusive sum at that address).
    let mut stack: Vec<(UlamAddress, f64)> = Vec::new();
    let mut best = 0.0f64;
    for v in &closure {
        while let Some((top, _)) = stack.last() {
            if top.is_prefix_of(v) {
                break;
            }
            stack.pop();
        }
        let above = stack.last().map(|(_, s)| *s).unwrap_or(0.0);
        let own = if theta.contains(v) {
            0.0
        } else {
            lengths.get(v).copied().unwrap_or(0.0)
        };
        let sum = above + own;
        best = best.max(sum);
        stack.push((v.clone(), sum));
    }
    Ok(best)
}

/// Empirical certificate for the sufficient non-explosion condition: block
/// diameters decaying like (n+1)^(-epsilon) and heights growing at most
/// logarithmically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonexplosionCertificate {
    pub certified: bool,
    /// Fitted decay exponent of the diameter sequence (infinite when all
    /// diameters vanish).
    pub fitted_epsilon: f64,
    /// Fitted slope of heights against log n.
    pub fitted_height_factor: f64,
}

/// Fits the decay exponent of `diams` (regression of log x_n on log(n+1))
/// and the logarithmic height factor (regression of h_n on log n through the
/// origin), then checks them against the requested epsilon > 0 and K.
pub fn nonexplosion_sufficient(
    diams: &[f64],
    heights: &[f64],
    epsilon: f64,
    height_factor: f64,
) -> NonexplosionCertificate {
    let positive: Vec<(f64, f64)> = diams
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0.0)
        .map(|(i, &x)| (((i + 2) as f64).ln(), x.ln()))
        .collect();
    let fitted_epsilon = if positive.is_empty() {
        f64::INFINITY
    } else {
        let n = positive.len() as f64;
        let mean_x: f64 = positive.iter().map(|p| p.0).sum::<f64>() / n;
        let mean_y: f64 = positive.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = positive
            .iter()
            .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
            .sum();
        let sxx: f64 = positive.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
        if sxx == 0.0 {
            0.0
        } else {
            -(sxy / sxx)
        }
    };
    // h_n against ln n for n >= 2 (diams[i] is the size of the n = i+1
    // block, so indices shift by one).
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, &h) in heights.iter().enumerate() {
        let n = (i + 1) as f64;
        if n >= 2.0 {
            num += h * n.ln();
            den += n.ln() * n.ln();
        }
    }
    let fitted_height_factor = if den == 0.0 { 0.0 } else { num / den };
    let certified =
        epsilon > 0.0 && fitted_epsilon >= epsilon && fitted_height_factor <= height_factor;
    NonexplosionCertificate {
        certified,
        fitted_epsilon,
        fitted_height_factor,
    }
}

/// Certified upper bound on the Hausdorff gap between the gluing over
/// `theta` and the full gluing: the supremum over rays of the total diameter
/// of dropped blocks along the ray. Climbing from any point of the full
/// gluing to its deepest kept ancestor crosses exactly those blocks, each
/// contributing at most its diameter.
pub fn truncation_gap_bound(
    decoration: &Decoration,
    theta: &PlaneTree,
) -> Result<f64, GlueError> {
    let mut diams = BTreeMap::new();
    for (address, block) in decoration.blocks() {
        diams.insert(address.clone(), block.diameter());
    }
    nonexplosion_tail(&diams, theta, SumRange::Exclusive)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::Block;

    fn addr(s: &str) -> UlamAddress {
        s.parse().unwrap()
    }

    fn ones_chain(depth: usize) -> PlaneTree {
        let mut tree = PlaneTree::root_only();
        let mut cursor = UlamAddress::root();
        for _ in 0..depth {
            cursor = tree.attach(&cursor).unwrap();
        }
        tree
    }

    #[test]
    fn lengths_inside_theta_contribute_nothing() {
        let mut lengths = BTreeMap::new();
        lengths.insert(UlamAddress::root(), 5.0);
        lengths.insert(addr("1"), 3.0);
        let theta = ones_chain(1);
        let tail = nonexplosion_tail(&lengths, &theta, SumRange::Inclusive).unwrap();
        assert_eq!(tail, 0.0);
    }

    #[test]
    fn geometric_tail_beyond_truncation() {
        // Length 2^-k at the depth-k vertex of the all-ones ray; cutting at
        // depth d leaves sum_{k>d} 2^-k = 2^-d.
        let mut lengths = BTreeMap::new();
        let mut cursor = UlamAddress::root();
        for k in 1..=30 {
            cursor = cursor.child(1);
            lengths.insert(cursor.clone(), 0.5f64.powi(k));
        }
        for d in [1usize, 3, 7] {
            let theta = ones_chain(d);
            let tail = nonexplosion_tail(&lengths, &theta, SumRange::Inclusive).unwrap();
            let expected = 0.5f64.powi(d as i32) - 0.5f64.powi(30);
            assert!(
                (tail - expected).abs() < 1e-15,
                "depth {d}: tail {tail} vs {expected}"
            );
        }
    }

    #[test]
    fn inclusive_and_exclusive_suprema_coincide() {
        let mut lengths = BTreeMap::new();
        lengths.insert(addr("1"), 1.0);
        lengths.insert(addr("1.2"), 0.5);
        lengths.insert(addr("2"), 0.25);
        let theta = PlaneTree::root_only();
        let inc = nonexplosion_tail(&lengths, &theta, SumRange::Inclusive).unwrap();
        let exc = nonexplosion_tail(&lengths, &theta, SumRange::Exclusive).unwrap();
        assert_eq!(inc, 1.5);
        assert_eq!(inc, exc);
    }

    #[test]
    fn branch_maxima_are_compared_not_added() {
        // Two disjoint rays: the tail is the larger branch sum, not the sum
        // of both branches.
        let mut lengths = BTreeMap::new();
        lengths.insert(addr("1"), 0.2);
        lengths.insert(addr("1.1"), 0.3);
        lengths.insert(addr("2"), 0.4);
        let theta = PlaneTree::root_only();
        let tail = nonexplosion_tail(&lengths, &theta, SumRange::Inclusive).unwrap();
        assert!((tail - 0.5).abs() < 1e-15);
    }

    #[test]
    fn decaying_diameters_along_growing_trees_vanish() {
        // Diameters (n+1)^(-1/2) at distinct addresses of height ~ log2 n:
        // the tail over trees containing the first 2^i blocks decreases to 0
        // as i grows.
        let mut lengths = BTreeMap::new();
        let mut tree = PlaneTree::root_only();
        let mut vertices = vec![UlamAddress::root()];
        for n in 1..=512usize {
            // Attach to the vertex of index n/2, producing height ~ log2 n.
            let parent = vertices[n / 2].clone();
            let v = tree.attach(&parent).unwrap();
            lengths.insert(v.clone(), ((n + 1) as f64).powf(-0.5));
            vertices.push(v);
        }
        let mut previous = f64::INFINITY;
        for i in [2usize, 8, 32, 128, 512] {
            let theta = PlaneTree::from_vertices(vertices[..=i].iter().cloned().collect::<Vec<_>>())
                .unwrap();
            let tail = nonexplosion_tail(&lengths, &theta, SumRange::Inclusive).unwrap();
            assert!(tail <= previous + 1e-15, "tail grew at cut {i}");
            previous = tail;
        }
        assert!(previous < 0.75, "tail did not shrink: {previous}");
    }

    #[test]
    fn certificate_examples() {
        // All-zero diameters certify trivially.
        let zeros = nonexplosion_sufficient(&[0.0; 50], &[1.0; 50], 0.5, 10.0);
        assert!(zeros.certified);
        assert!(zeros.fitted_epsilon.is_infinite());

        // Growing diameters yield a negative fitted exponent.
        let growing: Vec<f64> = (1..200).map(|n| n as f64).collect();
        let heights: Vec<f64> = (1..200).map(|n| (n as f64).ln().ceil()).collect();
        let bad = nonexplosion_sufficient(&growing, &heights, 0.1, 10.0);
        assert!(!bad.certified);
        assert!(bad.fitted_epsilon < 0.0);

        // x_n = (n+1)^(-0.4), h_n = ceil(3 ln n): certified with fitted
        // values close to (0.4, 3).
        let diams: Vec<f64> = (1..2000).map(|n| ((n + 1) as f64).powf(-0.4)).collect();
        let heights: Vec<f64> = (1..2000)
            .map(|n| (3.0 * (n as f64).ln()).ceil().max(0.0))
            .collect();
        let cert = nonexplosion_sufficient(&diams, &heights, 0.35, 3.5);
        assert!(cert.certified);
        assert!(
            (cert.fitted_epsilon - 0.4).abs() < 0.01,
            "epsilon {}",
            cert.fitted_epsilon
        );
        assert!(
            (cert.fitted_height_factor - 3.0).abs() < 0.3,
            "K {}",
            cert.fitted_height_factor
        );
    }

    #[test]
    fn gap_bound_examples() {
        let mut blocks = BTreeMap::new();
        let mut cursor = UlamAddress::root();
        blocks.insert(cursor.clone(), Block::segment(&[1.0]).unwrap());
        for k in 1..=20 {
            cursor = cursor.child(1);
            blocks.insert(cursor.clone(), Block::segment(&[0.5f64.powi(k)]).unwrap());
        }
        let dec = Decoration::new(blocks).unwrap();

        // Theta covering the support gives gap zero.
        let full = truncation_gap_bound(&dec, dec.support()).unwrap();
        assert_eq!(full, 0.0);

        // Depth-d truncation gives the geometric tail.
        let gap3 = truncation_gap_bound(&dec, &ones_chain(3)).unwrap();
        let expected = 0.5f64.powi(3) - 0.5f64.powi(20);
        assert!((gap3 - expected).abs() < 1e-15);

        // Monotone under inclusion.
        let gap5 = truncation_gap_bound(&dec, &ones_chain(5)).unwrap();
        assert!(gap5 <= gap3);
    }
}
