//! Marchal dynamics with stability parameter alpha in (1,2): every edge
//! carries weight alpha-1 and every vertex of degree at least three carries
//! weight deg-1-alpha. Hitting an edge splits it at a new midpoint and hangs
//! a leaf there; hitting a heavy vertex hangs a leaf at it. Either way the
//! total weight grows by exactly alpha, and each new leaf edge opens a new
//! block of the width decomposition.

use crate::state::{ElementKind, Mode, ModelTag, SplitWeights};
use crate::{AffWeight, GrowthError, GrowthState, MultiGraph, SeedGraph};

/// Element weight of one vertex: deg-1-alpha once the degree reaches three,
/// zero below that.
pub fn vertex_weight_exact(degree: usize) -> AffWeight {
    if degree >= 3 {
        AffWeight::new(degree as i64 - 1, -1, 0)
    } else {
        AffWeight::ZERO
    }
}

/// Sum of the element weights of a multigraph: alpha-1 per edge plus the
/// heavy-vertex weights.
pub fn element_weight_sum(graph: &MultiGraph) -> AffWeight {
    let mut total = AffWeight::new(-(graph.edge_count() as i64), graph.edge_count() as i64, 0);
    for v in 0..graph.vertex_count() {
        total += vertex_weight_exact(graph.degree(v));
    }
    total
}

/// Closed form of the same sum for a connected multigraph with at least one
/// edge, in terms of the leaf count l, the degree-2 count m, and the surplus
/// s: w(G) = (l-1)alpha + m(alpha-1) + s(alpha+1) - 1.
pub fn block_weight_exact(graph: &MultiGraph) -> AffWeight {
    let mut leaves = 0i64;
    let mut degree_two = 0i64;
    for v in 0..graph.vertex_count() {
        match graph.degree(v) {
            1 => leaves += 1,
            2 => degree_two += 1,
            _ => {}
        }
    }
    let surplus = graph.edge_count() as i64 - graph.vertex_count() as i64 + 1;
    AffWeight::new(
        -degree_two + surplus - 1,
        leaves - 1 + degree_two + surplus,
        0,
    )
}

/// `block_weight_exact` evaluated at alpha.
pub fn block_weight(graph: &MultiGraph, alpha: f64) -> f64 {
    block_weight_exact(graph).eval(alpha, 0.0)
}

fn check_alpha(alpha: f64) -> Result<(), GrowthError> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(GrowthError::InvalidParameter {
            name: "alpha",
            value: alpha,
            constraint: "1 < alpha < 2",
        });
    }
    Ok(())
}

/// Runs Marchal dynamics from a seed graph until the run has n blocks.
pub fn marchal_grow(
    seed: &SeedGraph,
    alpha: f64,
    n: usize,
    rng_seed: u64,
    mode: Mode,
) -> Result<GrowthState, GrowthError> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(GrowthError::InvalidParameter {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    let mut state = GrowthState::empty(ModelTag::Marchal { alpha }, mode, rng_seed, alpha, 0.0);
    for _ in 0..seed.graph().vertex_count() {
        state.alloc_vertex();
    }
    for (a, b) in seed.graph().edge_list() {
        state.alloc_edge(a, b);
    }
    state.root_vertex = seed.root();
    state.blocks.push(crate::state::BlockMeta {
        parent: usize::MAX,
        glue_vertex: seed.root(),
        first_edge: usize::MAX,
        children: Vec::new(),
        weight: element_weight_sum(seed.graph()),
        local: state.mode.wants_blocks().then(|| crate::LocalBlock {
            graph: seed.graph().clone(),
            root: seed.root(),
            attach: Vec::new(),
            to_global: (0..seed.graph().vertex_count()).collect(),
        }),
    });
    for v in 0..seed.graph().vertex_count() {
        state.registry.push(
            ElementKind::Vertex,
            vertex_weight_exact(seed.graph().degree(v)),
            0,
            v,
            v,
        );
    }
    for e in 0..seed.graph().edge_count() {
        state
            .registry
            .push(ElementKind::Edge, AffWeight::new(-1, 1, 0), 0, e, e);
    }
    state.grow_to(n)?;
    Ok(state)
}

pub(crate) fn step(state: &mut GrowthState) -> Result<(), GrowthError> {
    debug_assert!(matches!(state.tag, ModelTag::Marchal { .. }));
    let slot = state.registry.select(&mut state.selection_rng)?;
    match state.registry.slot(slot).kind {
        ElementKind::Edge => {
            state.apply_split_and_leaf(
                slot,
                &SplitWeights {
                    mid: AffWeight::new(2, -1, 0),
                    closer: AffWeight::new(-1, 1, 0),
                    leaf_edge: AffWeight::new(-1, 1, 0),
                },
            )?;
        }
        ElementKind::Vertex => {
            state.apply_leaf_at_vertex(
                slot,
                None,
                AffWeight::new(1, 0, 0),
                AffWeight::new(-1, 1, 0),
            )?;
        }
    }
    Ok(())
}

/// Draws a random connected multigraph for crosschecking the weight formula:
/// a random attachment tree plus a few extra edges (possibly loops).
#[cfg(test)]
pub(crate) fn random_multigraph<R: rand::Rng>(rng: &mut R) -> MultiGraph {
    let mut g = MultiGraph::new();
    g.add_vertex();
    let vertices = rng.random_range(2..=8);
    for _ in 1..vertices {
        let parent = rng.random_range(0..g.vertex_count());
        let v = g.add_vertex();
        g.add_edge(parent, v);
    }
    let extras = rng.random_range(0..4);
    for _ in 0..extras {
        let a = rng.random_range(0..g.vertex_count());
        let b = rng.random_range(0..g.vertex_count());
        g.add_edge(a, b);
    }
    g
}
