//! Samplers and estimators for the distributional building blocks of
//! preferential-attachment growth models: Dirichlet vectors, stick-breaking
//! (GEM) sequences with their diversity estimator, Mittag-Leffler moments and
//! samplers, the Mittag-Leffler Markov chain, Chinese restaurant processes,
//! and two-colour Pólya urns, together with the goodness-of-fit statistics
//! used to verify them.
//!
//! All samplers take a caller-supplied [`rand::Rng`] so that experiments can
//! be replayed bit-for-bit from a seed.

mod crp;
mod dirichlet;
mod error;
mod gem;
mod ml;
mod urn;

pub use crp::{crp_conditional_draws, crp_simulate, CrpState};
pub use dirichlet::{sample_dirichlet, DirichletParams};
pub use error::DistError;
pub use gem::{
    diversity_estimate, sample_gem, sample_gem_to_residual, DiversityOptions, StickSequence,
};
pub use ml::{ml_moment, sample_ml, sample_mlmc, MlmcSample};
pub use stat_tests::{
    chi_square_gof, chi_square_two_sample, ks_test_cdf, ks_test_two_sample, merge_sparse_bins,
    Chi2Result, KsResult,
};
pub use urn::{generalized_urn_limit, polya_urn, UrnLimit, UrnState};
