//! Decorated trees and the glued metric spaces they generate.
//!
//! A decoration assigns a rooted, pointed metric block to each vertex of a
//! plane tree. Gluing identifies the root of each child block with a marked
//! attachment point of its parent, producing a single pseudometric space.
//! This crate provides the block validator, the gluing construction with
//! exact distance evaluation, leaf embeddings for infinite rays, summable
//! tail bounds that certify non-explosion, measures supported on the tree,
//! and a versioned text format for decorations.
//!
//! Distances are computed on demand: each block solves its all-pairs table
//! lazily, and glued distances combine per-block climbs along tree paths.
//! Nothing here depends on how the decoration was produced, so simulation
//! output and hand-built fixtures go through the same code paths.

mod block;
mod decoration;
mod error;
mod format;
mod glue;
mod measure;
mod nonexplosion;

pub use block::{make_block, Block, BlockSpec, TRIANGLE_SLACK};
pub use decoration::Decoration;
pub use error::GlueError;
pub use format::{load_decoration, read_decoration, save_decoration, write_decoration};
pub use glue::{
    glue_distance, glue_finite, leaf_embed, DistanceInterval, GluedPoint, GluedSpace, LeafHandle,
    PointHandle,
};
pub use measure::{measure_distance, pushforward_measure, MeasureOnUlam};
pub use nonexplosion::{
    nonexplosion_sufficient, nonexplosion_tail, truncation_gap_bound, NonexplosionCertificate,
    SumRange,
};
