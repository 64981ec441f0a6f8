//! Cross-checks between independent routes to the same distributions: moment
//! formulas against Monte Carlo, table counts against stick diversities, urn
//! limits against simulation.

use distributions::{
    diversity_estimate, ks_test_cdf, ml_moment, polya_urn, sample_dirichlet, sample_gem,
    sample_ml, sample_mlmc, DirichletParams, DiversityOptions,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SQRT_PI: f64 = 1.7724538509055159;

#[test]
fn dirichlet_marginal_is_beta() {
    // The first coordinate of Dir(2, 1) is Beta(2, 1), with cdf x^2.
    let params = DirichletParams::new(vec![2.0, 1.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let samples: Vec<f64> = (0..4_000)
        .map(|_| sample_dirichlet(&params, &mut rng)[0])
        .collect();
    let result = ks_test_cdf(&samples, |x| (x * x).clamp(0.0, 1.0)).unwrap();
    assert!(result.p_value > 0.01, "p = {}", result.p_value);
}

#[test]
fn table_counts_and_stick_diversity_estimate_the_same_law() {
    // K_n / n^alpha from the restaurant process and the ranked-stick
    // estimator both converge to the alpha-diversity, which for
    // (alpha, theta) = (1/2, 1/2) has mean sqrt(pi).
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let reps = 150;

    let mut crp_mean = 0.0;
    for _ in 0..reps {
        crp_mean += sample_ml(0.5, 0.5, 20_000, &mut rng).unwrap();
    }
    crp_mean /= reps as f64;

    let mut stick_mean = 0.0;
    for _ in 0..reps {
        let sticks = sample_gem(0.5, 0.5, 10_000, &mut rng).unwrap();
        stick_mean += diversity_estimate(&sticks, DiversityOptions::default()).unwrap();
    }
    stick_mean /= reps as f64;

    assert!(
        (crp_mean - SQRT_PI).abs() < 0.08 * SQRT_PI,
        "restaurant estimate {crp_mean}"
    );
    assert!(
        (stick_mean - SQRT_PI).abs() < 0.08 * SQRT_PI,
        "stick estimate {stick_mean}"
    );
    assert!(
        (crp_mean - stick_mean).abs() < 0.1 * SQRT_PI,
        "estimates disagree: {crp_mean} vs {stick_mean}"
    );
}

#[test]
fn monte_carlo_second_moment_matches_formula() {
    let target = ml_moment(0.5, 0.5, 2.0).unwrap();
    assert!((target - 4.0).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let reps = 300;
    let mut acc = 0.0;
    for _ in 0..reps {
        let w = sample_ml(0.5, 0.5, 30_000, &mut rng).unwrap();
        acc += w * w;
    }
    let mean = acc / reps as f64;
    // Var(W^2) = E[W^4] - 16 = 16, so the Monte Carlo mean has sd ~ 0.23.
    assert!((mean - target).abs() < 0.8, "second moment {mean}");
}

#[test]
fn mlmc_growth_exponent_is_one_minus_alpha() {
    // Along one trajectory, log M_k grows like (1 - alpha) log k plus a
    // summable fluctuation, so a least-squares slope over two decades is
    // close to 1 - alpha = 1/2.
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let chain = sample_mlmc(0.5, 0.5, 1_000, 10_000, &mut rng).unwrap();
    let points: Vec<(f64, f64)> = (100..=1_000)
        .map(|k| ((k as f64).ln(), chain.values()[k - 1].ln()))
        .collect();
    let n = points.len() as f64;
    let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let slope = sxy / sxx;
    assert!((slope - 0.5).abs() < 0.05, "slope {slope}");
}

#[test]
fn polya_urn_limit_is_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let fractions: Vec<f64> = (0..1_000)
        .map(|_| polya_urn([1.0, 1.0], 2_000, &mut rng).unwrap().fraction())
        .collect();
    let result = ks_test_cdf(&fractions, |x| x.clamp(0.0, 1.0)).unwrap();
    assert!(result.p_value > 0.01, "p = {}", result.p_value);
}
