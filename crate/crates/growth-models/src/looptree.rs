//! The looptree of a rooted plane tree: one blue vertex per tree edge, and
//! around every non-root tree vertex the incident edges are joined in their
//! cyclic order, turning a vertex of degree d into a loop of length d.

use crate::{GrowthError, MultiGraph};

/// Builds the looptree. Blue vertex ids equal tree edge ids, so callers can
/// track where a tree edge ends up. Degree-1 vertices produce self-loops.
pub fn looptree(tree: &MultiGraph, root: usize) -> Result<MultiGraph, GrowthError> {
    if tree.edge_count() == 0 {
        return Err(GrowthError::InvalidSeed {
            reason: "looptree needs at least one edge".to_owned(),
        });
    }
    if root >= tree.vertex_count() {
        return Err(GrowthError::InvalidSeed {
            reason: format!("root {root} is not a vertex"),
        });
    }
    if tree.edge_count() + 1 != tree.vertex_count() || !tree.is_connected() {
        return Err(GrowthError::InvalidSeed {
            reason: "looptree input must be a tree".to_owned(),
        });
    }
    let mut out = MultiGraph::new();
    for _ in 0..tree.edge_count() {
        out.add_vertex();
    }
    for v in 0..tree.vertex_count() {
        if v == root {
            continue;
        }
        let rotation = tree.rotation(v);
        let d = rotation.len();
        for i in 0..d {
            let a = rotation[i].edge;
            let b = rotation[(i + 1) % d].edge;
            out.add_edge(a, b);
        }
    }
    Ok(out)
}
