//! Finite-resolution samplers for the continuum objects that growing random
//! graphs converge to: Dirichlet-length metric graphs, stable-regime blocks
//! with stick-breaking atoms, the coupled segment/circle-string pair, the
//! approximate Brownian tree block, and the constructions that assemble
//! blocks into spaces (line breaking along a Mittag-Leffler chain, iterative
//! gluing over a weighted recursive tree, and self-similar recursion), plus
//! a ball-growth dimension estimator for the results.
//!
//! Every sampler draws from a caller-supplied [`rand::Rng`] and truncates at
//! explicit, recorded resolutions: stick sequences stop at a residual-mass
//! target, recursive constructions at a diameter floor, and the Brownian
//! block at a leaf count. Block samples carry their provenance (sampler
//! name, parameters, resolution, residual mass) so downstream experiments
//! can serialize and replay them.

mod block_sample;
mod block_samples;
mod brownian;
mod dimension;
mod error;
mod geometry;
mod iterative;
mod line_breaking;
mod sb_joint;
mod self_similar;

pub use block_sample::{
    load_block_sample, save_block_sample, LimitBlockSample, Provenance, SampleManifest,
};
pub use block_samples::{
    sample_block_calpha, sample_block_cg, sample_block_clen, ClenSeed, STICK_CAP, STICK_RESIDUAL,
};
pub use brownian::{
    brownian_block_approx, remy_height_sup, remy_root_distances, BROWNIAN_MATRIX_CAP,
};
pub use dimension::leaf_dimension_estimate;
pub use error::LimitError;
pub use geometry::{arc_distance, CircleOnString, Site, Structure};
pub use iterative::{
    iterative_gluing, BlockSampler, BlockSource, IterativeGluing, IterativeGluingSpec,
    ScalingSource, WeightSource,
};
pub use line_breaking::{
    chain_parameters, glued_total_length, line_breaking, root_to_length_point_distance,
    MLMC_RESOLUTION,
};
pub use sb_joint::{coupling_holds, sample_blocks_sb_joint, string_truncation_gap};
pub use self_similar::{
    ass_from_iterative, contraction_estimate, self_similar_sample, SelfSimilarLaw,
    SelfSimilarSample, SelfSimilarSpec, StickLaw, TruncationPolicy,
};
