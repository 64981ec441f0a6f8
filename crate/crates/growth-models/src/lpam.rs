//! Looptree preferential attachment with parameter delta > -1: starting
//! from one vertex on a planted root edge, each step picks a non-root vertex
//! with probability proportional to degree + delta and attaches a new leaf
//! at a uniformly chosen corner of that vertex. The planted root keeps
//! degree one forever and is never selectable.
//!
//! Block k of the decomposition is the loop of the k-th non-root vertex in
//! the looptree, a circle whose length is that vertex's degree; the tree
//! itself carries no block decomposition, so `loop_decoration` is the
//! decorated view of a run.

use rand::Rng;

use crate::state::{ElementKind, Mode, ModelTag};
use crate::{AffWeight, GrowthError, GrowthState};

/// Runs looptree preferential attachment until the tree has n non-root
/// vertices (one block per vertex).
pub fn lpam_grow(delta: f64, n: usize, rng_seed: u64, mode: Mode) -> Result<GrowthState, GrowthError> {
    if !(delta > -1.0 && delta.is_finite()) {
        return Err(GrowthError::InvalidParameter {
            name: "delta",
            value: delta,
            constraint: "delta > -1",
        });
    }
    if n == 0 {
        return Err(GrowthError::InvalidParameter {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    let mut state = GrowthState::empty(ModelTag::Lpam { delta }, mode, rng_seed, delta, 0.0);
    let root = state.alloc_vertex();
    let first = state.alloc_vertex();
    let edge = state.alloc_edge(root, first);
    state.root_vertex = root;
    state.blocks.push(crate::state::BlockMeta {
        parent: usize::MAX,
        glue_vertex: root,
        first_edge: edge,
        children: Vec::new(),
        weight: AffWeight::new(1, 1, 0),
        local: None,
    });
    state
        .registry
        .push(ElementKind::Vertex, AffWeight::new(1, 1, 0), 0, first, usize::MAX);
    state.grow_to(n)?;
    Ok(state)
}

pub(crate) fn step(state: &mut GrowthState) -> Result<(), GrowthError> {
    debug_assert!(matches!(state.tag, ModelTag::Lpam { .. }));
    let slot = state.registry.select(&mut state.selection_rng)?;
    let picked = state.registry.slot(slot);
    debug_assert_eq!(picked.kind, ElementKind::Vertex);
    let vertex = picked.global;
    let block = picked.block;
    state.record(ElementKind::Vertex, slot, vertex, block);

    let degree = state
        .graph
        .as_ref()
        .expect("planar models keep the rotation system")
        .degree(vertex);
    let corner = state.placement_rng.random_range(0..degree);
    let leaf = state.alloc_vertex();
    let leaf_edge = state.alloc_edge_at_corner(vertex, corner, leaf);

    let new_block = state.push_leaf_block(
        block,
        vertex,
        leaf,
        leaf_edge,
        AffWeight::new(1, 1, 0),
        false,
    );
    state.registry.add_weight(slot, AffWeight::new(1, 0, 0));
    state.blocks[block].weight += AffWeight::new(1, 0, 0);
    state
        .registry
        .push(ElementKind::Vertex, AffWeight::new(1, 1, 0), new_block, leaf, usize::MAX);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_delta() {
        assert!(lpam_grow(-1.0, 5, 1, Mode::Direct).is_err());
        assert!(lpam_grow(-1.5, 5, 1, Mode::Direct).is_err());
        assert!(lpam_grow(f64::INFINITY, 5, 1, Mode::Direct).is_err());
        assert!(lpam_grow(-0.5, 5, 1, Mode::Direct).is_ok());
    }

    #[test]
    fn initial_state_is_one_vertex_on_the_root_edge() {
        let state = lpam_grow(0.0, 1, 2, Mode::Both).unwrap();
        assert_eq!(state.vertex_count(), 2);
        assert_eq!(state.edge_count(), 1);
        assert_eq!(state.block_count(), 1);
        assert_eq!(state.step_count(), 0);
    }

    #[test]
    fn handshake_identity_is_exact() {
        for delta in [-0.5, 0.0, 1.25] {
            let n = 180;
            let state = lpam_grow(delta, n, 7, Mode::Direct).unwrap();
            assert_eq!(state.total_weight(), AffWeight::new(2 * n as i64 - 1, n as i64, 0));
            state.consistency_check().unwrap();
        }
    }

    #[test]
    fn blocks_track_vertices_and_parent_edges() {
        let n = 60;
        let state = lpam_grow(0.5, n, 11, Mode::Both).unwrap();
        let graph = state.graph().unwrap();
        assert_eq!(graph.degree(state.root_vertex()), 1);
        for k in 0..n {
            let slot = &state.block_first_edge(k).unwrap();
            // One vertex and one edge per step: block k owns vertex k+1,
            // whose parent edge is edge k.
            assert_eq!(*slot, k);
            let [a, b] = graph.endpoints(k);
            assert!(a == k + 1 || b == k + 1);
        }
    }

    #[test]
    fn loop_blocks_are_circles_of_the_vertex_degrees() {
        let n = 80;
        let state = lpam_grow(0.0, n, 13, Mode::Both).unwrap();
        let graph = state.graph().unwrap();
        let pieces = state.loop_local_blocks().unwrap();
        assert_eq!(pieces.len(), n);
        for (k, piece) in pieces.iter().enumerate() {
            let degree = graph.degree(k + 1);
            assert_eq!(piece.graph.vertex_count(), degree);
            assert_eq!(piece.graph.edge_count(), degree);
            assert!(piece.graph.is_connected());
            assert_eq!(piece.attach.len(), state.block_children(k).len());
        }
    }

    #[test]
    fn looptree_vertex_count_equals_tree_edge_count() {
        let state = lpam_grow(0.3, 90, 19, Mode::Direct).unwrap();
        let lt = state.loop_graph().unwrap();
        assert_eq!(lt.vertex_count(), state.edge_count());
        assert!(lt.is_connected());
    }
}
