//! Planar alpha-gamma dynamics on trees grown from a single edge, with
//! 0 < alpha < 1 and 0 < gamma <= alpha. Edges adjacent to a leaf carry
//! weight 1-alpha, internal edges carry gamma, and vertices of degree d >= 3
//! carry (d-2)alpha - gamma. Hitting an edge splits it (the root-side half
//! is a fresh internal edge, the far half keeps the hit edge's identity and
//! weight) and hangs a leaf at the midpoint; hitting a vertex hangs a leaf
//! at one of its corners, chosen uniformly. Total weight grows by exactly
//! one per step.
//!
//! The run maintains the tree and, through the rotation system, its
//! looptree: each step that splits an edge turns the midpoint into a
//! degree-3 vertex, which is a new loop of length 3 on the loop side.

use rand::Rng;

use crate::state::{ElementKind, Mode, ModelTag, SplitWeights};
use crate::{AffWeight, GrowthError, GrowthState, LocalBlock};

fn check_parameters(alpha: f64, gamma: f64) -> Result<(), GrowthError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(GrowthError::InvalidParameter {
            name: "alpha",
            value: alpha,
            constraint: "0 < alpha < 1",
        });
    }
    if !(gamma > 0.0 && gamma <= alpha) {
        return Err(GrowthError::InvalidParameter {
            name: "gamma",
            value: gamma,
            constraint: "0 < gamma <= alpha",
        });
    }
    Ok(())
}

/// Runs alpha-gamma dynamics from a single root edge until the tree has n
/// leaves (one block per leaf edge).
pub fn alphagamma_grow(
    alpha: f64,
    gamma: f64,
    n: usize,
    rng_seed: u64,
    mode: Mode,
) -> Result<GrowthState, GrowthError> {
    check_parameters(alpha, gamma)?;
    if n == 0 {
        return Err(GrowthError::InvalidParameter {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    let mut state = GrowthState::empty(
        ModelTag::AlphaGamma { alpha, gamma },
        mode,
        rng_seed,
        alpha,
        gamma,
    );
    let root = state.alloc_vertex();
    let leaf = state.alloc_vertex();
    let edge = state.alloc_edge(root, leaf);
    state.root_vertex = root;
    state.blocks.push(crate::state::BlockMeta {
        parent: usize::MAX,
        glue_vertex: root,
        first_edge: edge,
        children: Vec::new(),
        weight: AffWeight::new(1, -1, 0),
        local: state
            .mode
            .wants_blocks()
            .then(|| LocalBlock::single_edge(root, leaf)),
    });
    state
        .registry
        .push(ElementKind::Vertex, AffWeight::ZERO, 0, root, 0);
    state
        .registry
        .push(ElementKind::Vertex, AffWeight::ZERO, 0, leaf, 1);
    state
        .registry
        .push(ElementKind::Edge, AffWeight::new(1, -1, 0), 0, edge, 0);
    state.grow_to(n)?;
    Ok(state)
}

pub(crate) fn step(state: &mut GrowthState) -> Result<(), GrowthError> {
    debug_assert!(matches!(state.tag, ModelTag::AlphaGamma { .. }));
    let slot = state.registry.select(&mut state.selection_rng)?;
    match state.registry.slot(slot).kind {
        ElementKind::Edge => {
            state.apply_split_and_leaf(
                slot,
                &SplitWeights {
                    mid: AffWeight::new(0, 1, -1),
                    closer: AffWeight::new(0, 0, 1),
                    leaf_edge: AffWeight::new(1, -1, 0),
                },
            )?;
        }
        ElementKind::Vertex => {
            let vertex = state.registry.slot(slot).global;
            let degree = state
                .graph
                .as_ref()
                .expect("planar models keep the rotation system")
                .degree(vertex);
            let corner = state.placement_rng.random_range(0..degree);
            state.apply_leaf_at_vertex(
                slot,
                Some(corner),
                AffWeight::new(0, 1, 0),
                AffWeight::new(1, -1, 0),
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(alphagamma_grow(0.0, 0.1, 5, 1, Mode::Direct).is_err());
        assert!(alphagamma_grow(1.0, 0.5, 5, 1, Mode::Direct).is_err());
        assert!(alphagamma_grow(0.5, 0.0, 5, 1, Mode::Direct).is_err());
        assert!(alphagamma_grow(0.5, 0.6, 5, 1, Mode::Direct).is_err());
        assert!(alphagamma_grow(0.5, 0.5, 5, 1, Mode::Direct).is_ok());
    }

    #[test]
    fn total_weight_is_n_minus_alpha() {
        let n = 300;
        let state = alphagamma_grow(0.6, 0.4, n, 3, Mode::Both).unwrap();
        assert_eq!(state.total_weight(), AffWeight::new(n as i64, -1, 0));
        state.consistency_check().unwrap();
    }

    #[test]
    fn leaf_edge_weight_is_exactly_one_minus_alpha_times_n() {
        let n = 250;
        let state = alphagamma_grow(0.7, 0.2, n, 8, Mode::Direct).unwrap();
        let leaf_edges = state
            .element_weights()
            .filter(|&(kind, w)| kind == ElementKind::Edge && w == AffWeight::new(1, -1, 0))
            .count();
        assert_eq!(leaf_edges, n);
    }

    #[test]
    fn tree_shape_invariants() {
        let state = alphagamma_grow(0.5, 0.3, 200, 21, Mode::Direct).unwrap();
        let graph = state.graph().unwrap();
        assert_eq!(graph.vertex_count(), graph.edge_count() + 1);
        assert!(graph.is_connected());
        assert_eq!(graph.degree(state.root_vertex()), 1);
        let leaves = (0..graph.vertex_count())
            .filter(|&v| graph.degree(v) == 1 && v != state.root_vertex())
            .count();
        assert_eq!(leaves, 200);
        for v in 0..graph.vertex_count() {
            assert_ne!(graph.degree(v), 2);
        }
    }

    #[test]
    fn looptree_vertex_count_equals_tree_edge_count() {
        let state = alphagamma_grow(0.45, 0.45, 150, 12, Mode::Direct).unwrap();
        let lt = state.loop_graph().unwrap();
        assert_eq!(lt.vertex_count(), state.edge_count());
        assert!(lt.is_connected());
    }

    #[test]
    fn trace_is_identical_across_modes() {
        let a = alphagamma_grow(0.55, 0.25, 100, 31, Mode::Direct).unwrap();
        let b = alphagamma_grow(0.55, 0.25, 100, 31, Mode::Both).unwrap();
        assert_eq!(a.trace(), b.trace());
    }
}
