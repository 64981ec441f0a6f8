//! Growing random graphs: weighted recursive and preferential attachment
//! trees, generalized Remy dynamics, Marchal dynamics, the planar
//! alpha-gamma model, and looptree preferential attachment. Each graph model
//! runs in two coupled representations (direct graph evolution and a
//! decoration on an Ulam tree driven by the block-selection sequence), which
//! must agree exactly on distances at every step.

mod alphagamma;
mod edge_split;
mod error;
mod fenwick;
mod fitness;
mod looptree;
mod lpam;
mod marchal;
mod measures;
mod multigraph;
mod remy;
pub(crate) mod state;
mod trees;
mod weights;

pub use alphagamma::alphagamma_grow;
pub use edge_split::EdgeSplitProcess;
pub use error::GrowthError;
pub use fenwick::Fenwick;
pub use fitness::FitnessSequence;
pub use looptree::looptree;
pub use lpam::lpam_grow;
pub use marchal::{
    block_weight, block_weight_exact, element_weight_sum, marchal_grow, vertex_weight_exact,
};
pub use measures::{degree_measure, uniform_block_measure, weight_measure};
pub use multigraph::{HalfEdge, MultiGraph, PlanarEmbedding};
pub use remy::{remy_generalized, remy_v2_decompose, SeedGraph, SeedSequence};
pub use state::{ElementKind, GrowthState, LocalBlock, Mode, ModelTag, TraceStep};
pub use trees::{pa_grow, wrt_grow, TreeGrowth};
pub use weights::AffWeight;
