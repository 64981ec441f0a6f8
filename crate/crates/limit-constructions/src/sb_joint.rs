//! Coupled sampler for the segment-and-circle-string pair of limit blocks:
//! a shared position sequence drives both the marked coordinates on the
//! segment and the ordering of the circles on the string.

use rand::Rng;
use rand_distr::{Beta, Distribution};

use distributions::{diversity_estimate, sample_gem_to_residual, DiversityOptions};

use crate::block_sample::{assemble, LimitBlockSample, Provenance};
use crate::block_samples::{STICK_CAP, STICK_RESIDUAL};
use crate::error::LimitError;
use crate::geometry::{CircleOnString, Site, Structure};

fn check_alpha_gamma(alpha: f64, gamma: f64) -> Result<(), LimitError> {
    if !(alpha > 0.0 && alpha < 1.0) || !alpha.is_finite() {
        return Err(LimitError::Parameter {
            name: "alpha",
            value: alpha,
            constraint: "0 < alpha < 1",
        });
    }
    if !(gamma > 0.0 && gamma <= alpha) {
        return Err(LimitError::Parameter {
            name: "gamma",
            value: gamma,
            constraint: "0 < gamma <= alpha",
        });
    }
    Ok(())
}

/// Draws from Beta(1, b), rejecting the measure-zero boundary values so the
/// result is usable as a strict interior coordinate.
fn beta_one<R: Rng + ?Sized>(b: f64, rng: &mut R) -> f64 {
    let beta = Beta::new(1.0, b).expect("validated shape parameters");
    loop {
        let y = beta.sample(rng);
        if y > 0.0 && y < 1.0 {
            return y;
        }
    }
}

/// The position recursion on (0,1): the first point is Beta(1, (1-alpha)/gamma);
/// afterwards, with probability equal to the running maximum the next point is
/// uniform below it, otherwise it sits above it at 1 - R*(1 - max) with a
/// fresh Beta(1, (1-alpha)/gamma) variable R.
fn sample_positions<R: Rng + ?Sized>(b: f64, count: usize, rng: &mut R) -> Vec<f64> {
    let mut positions = Vec::with_capacity(count);
    if count == 0 {
        return positions;
    }
    let mut max = beta_one(b, rng);
    positions.push(max);
    while positions.len() < count {
        let y = if rng.random::<f64>() < max {
            let u = rng.random::<f64>() * max;
            if u > 0.0 {
                u
            } else {
                continue;
            }
        } else {
            1.0 - beta_one(b, rng) * (1.0 - max)
        };
        if y >= 1.0 {
            continue;
        }
        max = max.max(y);
        positions.push(y);
    }
    positions
}

/// Label sequence of the marks, conditionally on the realized sticks: the
/// first label is 1; afterwards label i is drawn with probability equal to
/// the i-th stick fraction for i up to the running maximum, and the running
/// maximum plus one with the remaining probability.
fn sample_labels<R: Rng + ?Sized>(
    fractions: &[f64],
    count: usize,
    rng: &mut R,
) -> Result<Vec<usize>, LimitError> {
    let mut prefix = Vec::with_capacity(fractions.len() + 1);
    prefix.push(0.0f64);
    for &p in fractions {
        prefix.push(prefix.last().unwrap() + p);
    }
    let mut labels = Vec::with_capacity(count);
    if count == 0 {
        return Ok(labels);
    }
    labels.push(1usize);
    let mut max_label = 1usize;
    for _ in 1..count {
        let u: f64 = rng.random();
        let label = if u >= prefix[max_label] {
            if max_label >= fractions.len() {
                return Err(LimitError::Resolution {
                    what: "stick truncation",
                    detail: format!(
                        "mark labels exhausted all {} materialized sticks",
                        fractions.len()
                    ),
                });
            }
            max_label + 1
        } else {
            let mut lo = 0usize;
            let mut hi = max_label;
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
        labels.push(label);
    }
    Ok(labels)
}

/// Samples the coupled pair of limit blocks: a rooted segment whose marked
/// points sit at the shared positions scaled by the stick diversity, and a
/// string of circles with the stick fractions as circumferences, ordered by
/// those same positions. When gamma equals alpha both degenerate to the unit
/// interval carrying the position sequence itself, and the two returned
/// samples are identical.
pub fn sample_blocks_sb_joint<R: Rng + ?Sized>(
    alpha: f64,
    gamma: f64,
    n_points: usize,
    n_sticks: usize,
    rng: &mut R,
) -> Result<(LimitBlockSample, LimitBlockSample), LimitError> {
    check_alpha_gamma(alpha, gamma)?;
    let b = (1.0 - alpha) / gamma;

    if gamma == alpha {
        let positions = sample_positions(b, n_points, rng);
        let segments = vec![(0usize, 1usize, 1.0f64)];
        let mut sites = Vec::with_capacity(2 + n_points);
        sites.push(Site::Junction(0));
        for &y in &positions {
            sites.push(Site::OnSegment {
                segment: 0,
                offset: y,
            });
        }
        sites.push(Site::Junction(1));
        let make = |name: &str| {
            let provenance = Provenance::new(name)
                .with_param("alpha", alpha)
                .with_param("gamma", gamma)
                .with_param("n_points", n_points as f64);
            assemble(
                Structure::Graph {
                    junctions: 2,
                    segments: segments.clone(),
                },
                sites.clone(),
                n_points,
                Vec::new(),
                1.0,
                1.0,
                provenance,
            )
        };
        return Ok((make("block_s_degenerate")?, make("block_b_degenerate")?));
    }

    if n_sticks < 100 {
        return Err(LimitError::Resolution {
            what: "stick count",
            detail: format!("n_sticks = {n_sticks}, diversity needs at least 100"),
        });
    }
    if n_sticks > STICK_CAP {
        return Err(LimitError::Resolution {
            what: "stick count",
            detail: format!("n_sticks = {n_sticks} exceeds the cap {STICK_CAP}"),
        });
    }

    let sticks = sample_gem_to_residual(
        gamma / alpha,
        (1.0 - alpha) / alpha,
        STICK_RESIDUAL,
        n_sticks,
        rng,
    )?;
    let fractions = sticks.fractions();
    let diversity = diversity_estimate(&sticks, DiversityOptions::default())?;
    let positions = sample_positions(b, fractions.len(), rng);
    let labels = sample_labels(fractions, n_points, rng)?;

    // Segment block: [0, S] rooted at 0, marks at S * Y_{D_k}.
    let seg_len = diversity;
    let segments = vec![(0usize, 1usize, seg_len)];
    let mut s_sites = Vec::with_capacity(2 + n_points);
    s_sites.push(Site::Junction(0));
    for &label in &labels {
        s_sites.push(Site::OnSegment {
            segment: 0,
            offset: diversity * positions[label - 1],
        });
    }
    s_sites.push(Site::Junction(1));
    let mut s_prov = Provenance::new("block_s")
        .with_param("alpha", alpha)
        .with_param("gamma", gamma)
        .with_param("n_points", n_points as f64);
    s_prov.resolution = Some(fractions.len() as u64);
    s_prov.residual_stick_mass = sticks.residual();
    let block_s = assemble(
        Structure::Graph {
            junctions: 2,
            segments,
        },
        s_sites,
        n_points,
        Vec::new(),
        seg_len,
        diversity,
        s_prov,
    )?;

    // Circle-string block: circle i has circumference P_i, sits at position
    // Y_i, exits towards larger positions through a uniform point; the k-th
    // mark is a fresh uniform point on the circle with the k-th label.
    let circles: Vec<CircleOnString> = fractions
        .iter()
        .zip(&positions)
        .map(|(&p, &y)| CircleOnString {
            circumference: p,
            position: y,
            exit_arc: rng.random::<f64>() * p,
        })
        .collect();
    let mut b_sites = Vec::with_capacity(3 + n_points);
    b_sites.push(Site::StringRoot);
    for &label in &labels {
        let circle = label - 1;
        b_sites.push(Site::OnCircle {
            circle,
            arc: rng.random::<f64>() * circles[circle].circumference,
        });
    }
    // Landmarks: the antipode of the largest circle's exit, plus the exit of
    // the topmost circle, so the matrix diameter sees the string's far end.
    let largest = circles
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.circumference.total_cmp(&b.1.circumference))
        .map(|(i, _)| i)
        .expect("at least 100 sticks");
    let top = positions
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("at least 100 sticks");
    let c = &circles[largest];
    b_sites.push(Site::OnCircle {
        circle: largest,
        arc: (c.exit_arc + c.circumference / 2.0) % c.circumference,
    });
    b_sites.push(Site::OnCircle {
        circle: top,
        arc: circles[top].exit_arc,
    });
    let total_circumference: f64 = fractions.iter().sum();
    let mut b_prov = Provenance::new("block_b")
        .with_param("alpha", alpha)
        .with_param("gamma", gamma)
        .with_param("n_points", n_points as f64);
    b_prov.resolution = Some(fractions.len() as u64);
    b_prov.residual_stick_mass = sticks.residual();
    let block_b = assemble(
        Structure::CircleString { circles },
        b_sites,
        n_points,
        Vec::new(),
        total_circumference,
        1.0,
        b_prov,
    )?;

    debug_assert!(coupling_holds(&block_s, &block_b));
    Ok((block_s, block_b))
}

/// Checks the structural coupling between the two returned blocks: every
/// marked coordinate on the segment equals the segment scale times the
/// position of the circle carrying the corresponding mark on the string.
pub fn coupling_holds(block_s: &LimitBlockSample, block_b: &LimitBlockSample) -> bool {
    if block_s.n_points() != block_b.n_points() {
        return false;
    }
    let circles = match block_b.structure() {
        Structure::CircleString { circles } => circles,
        // The degenerate pair couples through bitwise identical sites.
        _ => return block_s.sites() == block_b.sites(),
    };
    let scale = block_s.scale();
    for k in 0..block_s.n_points() {
        let offset = match block_s.sites()[1 + k] {
            Site::OnSegment { offset, .. } => offset,
            _ => return false,
        };
        let circle = match block_b.sites()[1 + k] {
            Site::OnCircle { circle, .. } => circle,
            _ => return false,
        };
        if scale * circles[circle].position != offset {
            return false;
        }
    }
    true
}

/// Upper bound on the distance distortion introduced by truncating the
/// circle string: every missing circle contributes at most half its
/// circumference to any crossing distance.
pub fn string_truncation_gap(sample: &LimitBlockSample) -> f64 {
    sample.provenance().residual_stick_mass / 2.0
}
