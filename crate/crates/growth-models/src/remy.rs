//! Generalized Remy dynamics: split a uniformly chosen edge and glue the
//! next seed graph's root onto the midpoint. Block k is the k-th glued seed
//! together with everything edge-splitting later adds to it, the block tree
//! follows preferential attachment with the seed edge counts as fitnesses,
//! and each block evolves by uniform edge-splitting.

use crate::state::{ElementKind, Mode, ModelTag};
use crate::{AffWeight, FitnessSequence, GrowthError, GrowthState, LocalBlock, MultiGraph};

/// A connected rooted multigraph used as gluing material.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedGraph {
    graph: MultiGraph,
    root: usize,
}

impl SeedGraph {
    pub fn new(graph: MultiGraph, root: usize) -> Result<Self, GrowthError> {
        if graph.edge_count() == 0 {
            return Err(GrowthError::InvalidSeed {
                reason: "seed graph needs at least one edge".to_owned(),
            });
        }
        if root >= graph.vertex_count() {
            return Err(GrowthError::InvalidSeed {
                reason: format!("root {root} is not a vertex"),
            });
        }
        if !graph.is_connected() {
            return Err(GrowthError::InvalidSeed {
                reason: "seed graph must be connected".to_owned(),
            });
        }
        Ok(SeedGraph { graph, root })
    }

    /// A single edge rooted at one end.
    pub fn single_edge() -> Self {
        SeedGraph {
            graph: MultiGraph::path(1),
            root: 0,
        }
    }

    /// A path of `edges` edges rooted at one end.
    pub fn line(edges: usize) -> Result<Self, GrowthError> {
        Self::new(MultiGraph::path(edges), 0)
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    fn is_single_edge(&self) -> bool {
        self.graph.vertex_count() == 2 && self.graph.edge_count() == 1
    }

    fn is_two_line_rooted_at_end(&self) -> bool {
        self.graph.vertex_count() == 3
            && self.graph.edge_count() == 2
            && self.graph.is_connected()
            && self.graph.degree(self.root) == 1
    }
}

/// The sequence G_1, G_2, ... of seeds consumed by the growth.
#[derive(Debug, Clone)]
pub enum SeedSequence {
    /// The same seed at every step.
    Repeat(SeedGraph),
    /// One seed for the start, another for every later step.
    FirstThen(SeedGraph, SeedGraph),
    /// An explicit finite list.
    List(Vec<SeedGraph>),
}

impl SeedSequence {
    /// G_{k+1} (0-based index).
    pub fn get(&self, k: usize) -> Result<&SeedGraph, GrowthError> {
        match self {
            SeedSequence::Repeat(g) => Ok(g),
            SeedSequence::FirstThen(first, tail) => Ok(if k == 0 { first } else { tail }),
            SeedSequence::List(list) => list.get(k).ok_or(GrowthError::InsufficientData {
                what: "seed graphs",
                got: list.len(),
                need: k + 1,
            }),
        }
    }

    /// The edge-count fitness sequence for a run of n blocks, certified.
    pub fn fitness(&self, n: usize) -> Result<FitnessSequence, GrowthError> {
        match self {
            SeedSequence::Repeat(g) => FitnessSequence::constant(g.edge_count() as f64, n),
            SeedSequence::FirstThen(first, tail) => FitnessSequence::first_then(
                first.edge_count() as f64,
                tail.edge_count() as f64,
                n,
            ),
            SeedSequence::List(list) => {
                if list.len() < n {
                    return Err(GrowthError::InsufficientData {
                        what: "seed graphs",
                        got: list.len(),
                        need: n,
                    });
                }
                let values: Vec<f64> = list[..n].iter().map(|g| g.edge_count() as f64).collect();
                let c = if n >= 2 {
                    let half = n / 2;
                    values[half..].iter().sum::<f64>() / (n - half) as f64
                } else {
                    values[0]
                };
                FitnessSequence::new(values, c, 0.0, 0.5)
            }
        }
    }
}

/// Images of one glued seed copy: seed vertex ids and edge ids mapped to
/// their global counterparts. The seed root maps to the split midpoint.
pub(crate) struct GluedSeed {
    pub(crate) vertex_map: Vec<usize>,
    pub(crate) edge_map: Vec<usize>,
}

/// Allocates global ids for a seed copy whose root lands on `mid`. The
/// allocation order (non-root vertices in seed id order, then edges in seed
/// id order) is part of the trace-replay contract.
pub(crate) fn glue_seed(state: &mut GrowthState, seed: &SeedGraph, mid: usize) -> GluedSeed {
    let mut vertex_map = vec![usize::MAX; seed.graph.vertex_count()];
    vertex_map[seed.root] = mid;
    for v in 0..seed.graph.vertex_count() {
        if v != seed.root {
            vertex_map[v] = state.alloc_vertex();
        }
    }
    let mut edge_map = Vec::with_capacity(seed.graph.edge_count());
    for (a, b) in seed.graph.edge_list() {
        edge_map.push(state.alloc_edge(vertex_map[a], vertex_map[b]));
    }
    GluedSeed {
        vertex_map,
        edge_map,
    }
}

/// Runs generalized Remy dynamics for n blocks.
pub fn remy_generalized(
    seeds: SeedSequence,
    n: usize,
    seed: u64,
    mode: Mode,
) -> Result<GrowthState, GrowthError> {
    if n == 0 {
        return Err(GrowthError::InvalidParameter {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    let fitness = seeds.fitness(n)?;
    let first = seeds.get(0)?.clone();
    let mut state = GrowthState::empty(ModelTag::Remy { seeds, fitness }, mode, seed, 0.0, 0.0);

    for _ in 0..first.graph().vertex_count() {
        state.alloc_vertex();
    }
    for (a, b) in first.graph().edge_list() {
        state.alloc_edge(a, b);
    }
    state.root_vertex = first.root();
    state.blocks.push(crate::state::BlockMeta {
        parent: usize::MAX,
        glue_vertex: first.root(),
        first_edge: usize::MAX,
        children: Vec::new(),
        weight: AffWeight::units(first.edge_count() as i64),
        local: state.mode.wants_blocks().then(|| LocalBlock {
            graph: first.graph().clone(),
            root: first.root(),
            attach: Vec::new(),
            to_global: (0..first.graph().vertex_count()).collect(),
        }),
    });
    for e in 0..first.edge_count() {
        state
            .registry
            .push(ElementKind::Edge, AffWeight::units(1), 0, e, e);
    }
    state.grow_to(n)?;
    Ok(state)
}

pub(crate) fn step(state: &mut GrowthState) -> Result<(), GrowthError> {
    let next = match &state.tag {
        ModelTag::Remy { seeds, .. } => seeds.get(state.blocks.len())?.clone(),
        _ => {
            return Err(GrowthError::Internal {
                reason: "remy step on a non-remy state".to_owned(),
            })
        }
    };
    let slot = state.registry.select(&mut state.selection_rng)?;
    let picked = state.registry.slot(slot);
    let block = picked.block;
    let edge_global = picked.global;
    let edge_local = picked.local;
    state.record(ElementKind::Edge, slot, edge_global, block);

    let (mid_global, far_global) = state.split_global_edge(edge_global);
    let glued = glue_seed(state, &next, mid_global);

    let mut far_local = usize::MAX;
    if state.mode.wants_blocks() {
        let local = state.blocks[block]
            .local
            .as_mut()
            .expect("decorated mode maintains local blocks");
        let (mid_local, f) = local.graph.split_edge(edge_local);
        far_local = f;
        local.attach.push(mid_local);
        local.to_global.push(mid_global);
    }

    let new_block = state.blocks.len();
    state.blocks.push(crate::state::BlockMeta {
        parent: block,
        glue_vertex: mid_global,
        first_edge: usize::MAX,
        children: Vec::new(),
        weight: AffWeight::units(next.edge_count() as i64),
        local: state.mode.wants_blocks().then(|| {
            let mut to_global = glued.vertex_map.clone();
            to_global[next.root()] = mid_global;
            LocalBlock {
                graph: next.graph().clone(),
                root: next.root(),
                attach: Vec::new(),
                to_global,
            }
        }),
    });
    state.blocks[block].children.push(new_block);
    state.blocks[block].weight += AffWeight::units(1);

    state.registry.repoint(slot, far_global, far_local);
    state
        .registry
        .push(ElementKind::Edge, AffWeight::units(1), block, edge_global, edge_local);
    for (seed_edge, &global) in glued.edge_map.iter().enumerate() {
        state.registry.push(
            ElementKind::Edge,
            AffWeight::units(1),
            new_block,
            global,
            if state.mode.wants_blocks() {
                seed_edge
            } else {
                usize::MAX
            },
        );
    }
    Ok(())
}

/// Re-expresses a Remy run with seeds (edge, 2-line, 2-line, ...) in its
/// second block decomposition: the split halves and the lower glued edge
/// join the hit block, which thereby takes one standard Remy step (two more
/// edges), while the upper glued edge opens the new block. The graph, the
/// global element ids, and the slot ids all stay exactly as in the input.
pub fn remy_v2_decompose(state: &GrowthState) -> Result<GrowthState, GrowthError> {
    let seeds = match &state.tag {
        ModelTag::Remy { seeds, .. } => seeds,
        _ => {
            return Err(GrowthError::WrongState {
                reason: "only a Remy run can be re-decomposed".to_owned(),
            })
        }
    };
    if !seeds.get(0)?.is_single_edge() {
        return Err(GrowthError::WrongState {
            reason: "re-decomposition needs a single-edge start".to_owned(),
        });
    }
    for k in 1..state.blocks.len() {
        if !seeds.get(k)?.is_two_line_rooted_at_end() {
            return Err(GrowthError::WrongState {
                reason: format!("seed {} is not a 2-edge line rooted at an end", k + 1),
            });
        }
    }

    let mut v2 = GrowthState::empty(ModelTag::RemyV2, state.mode, 0, 0.0, 0.0);
    v2.alloc_vertex();
    v2.alloc_vertex();
    v2.alloc_edge(0, 1);
    v2.root_vertex = state.root_vertex;
    v2.blocks.push(crate::state::BlockMeta {
        parent: usize::MAX,
        glue_vertex: state.root_vertex,
        first_edge: usize::MAX,
        children: Vec::new(),
        weight: AffWeight::units(1),
        local: v2
            .mode
            .wants_blocks()
            .then(|| LocalBlock {
                graph: MultiGraph::path(1),
                root: state.root_vertex,
                attach: Vec::new(),
                to_global: vec![0, 1],
            }),
    });
    v2.registry
        .push(ElementKind::Edge, AffWeight::units(1), 0, 0, 0);

    for (i, record) in state.trace.iter().enumerate() {
        let seed = seeds.get(i + 1)?.clone();
        if record.slot >= v2.registry.slots().len() {
            return Err(GrowthError::Internal {
                reason: format!("trace references unknown slot {}", record.slot),
            });
        }
        let picked = v2.registry.slot(record.slot);
        let block = picked.block;
        let edge_global = picked.global;
        let edge_local = picked.local;
        debug_assert_eq!(edge_global, record.element);
        v2.record(ElementKind::Edge, record.slot, edge_global, block);

        let (mid_global, far_global) = v2.split_global_edge(edge_global);
        let glued = glue_seed(&mut v2, &seed, mid_global);

        // Seed anatomy: the middle vertex w1 is the root's unique neighbor,
        // the lower edge is root-incident, the upper edge is the rest.
        let root_half = seed
            .graph()
            .rotation(seed.root())
            .first()
            .copied()
            .expect("two-line root has one edge");
        let lower_seed_edge = root_half.edge;
        let middle = seed.graph().opposite(root_half);
        let upper_seed_edge = 1 - lower_seed_edge;
        let far_end = {
            let [a, b] = seed.graph().endpoints(upper_seed_edge);
            if a == middle {
                b
            } else {
                a
            }
        };
        let w1_global = glued.vertex_map[middle];
        let w2_global = glued.vertex_map[far_end];
        let lower_global = glued.edge_map[lower_seed_edge];
        let upper_global = glued.edge_map[upper_seed_edge];

        let mut far_local = usize::MAX;
        let mut lower_local = usize::MAX;
        if v2.mode.wants_blocks() {
            let local = v2.blocks[block]
                .local
                .as_mut()
                .expect("decorated mode maintains local blocks");
            let (mid_local, f) = local.graph.split_edge(edge_local);
            far_local = f;
            let w1_local = local.graph.add_vertex();
            lower_local = local.graph.add_edge(mid_local, w1_local);
            local.to_global.push(mid_global);
            local.to_global.push(w1_global);
            local.attach.push(w1_local);
        }

        let new_block = v2.blocks.len();
        v2.blocks.push(crate::state::BlockMeta {
            parent: block,
            glue_vertex: w1_global,
            first_edge: upper_global,
            children: Vec::new(),
            weight: AffWeight::units(1),
            local: v2
                .mode
                .wants_blocks()
                .then(|| LocalBlock::single_edge(w1_global, w2_global)),
        });
        v2.blocks[block].children.push(new_block);
        v2.blocks[block].weight += AffWeight::units(2);

        // Slot ids must come out exactly as in the original run: the far
        // half keeps the selected slot, then one new slot per glued seed
        // edge in seed id order.
        v2.registry.repoint(record.slot, far_global, far_local);
        v2.registry.push(
            ElementKind::Edge,
            AffWeight::units(1),
            block,
            edge_global,
            edge_local,
        );
        for (seed_edge, &global) in glued.edge_map.iter().enumerate() {
            if seed_edge == lower_seed_edge {
                debug_assert_eq!(global, lower_global);
                v2.registry
                    .push(ElementKind::Edge, AffWeight::units(1), block, global, lower_local);
            } else {
                debug_assert_eq!(global, upper_global);
                let local = if v2.mode.wants_blocks() { 0 } else { usize::MAX };
                v2.registry
                    .push(ElementKind::Edge, AffWeight::units(1), new_block, global, local);
            }
        }
    }

    if let (Some(got), Some(want)) = (v2.graph.as_ref(), state.graph.as_ref()) {
        if got.edge_list() != want.edge_list() {
            return Err(GrowthError::Internal {
                reason: "replayed graph disagrees with the original".to_owned(),
            });
        }
    }
    v2.selection_rng = state.selection_rng.clone();
    v2.placement_rng = state.placement_rng.clone();
    Ok(v2)
}
