//! Shared state for the graph growth models (generalized Remy, Marchal,
//! alpha-gamma, looptree preferential attachment).
//!
//! Every model advances by selecting one weighted element (a vertex or an
//! edge) and applying a local surgery. The selection lives in a slot
//! registry: slot ids are stable across the run and identical across the
//! direct and decorated representations, so a recorded trace of slot picks
//! replays to the same graph. Weights are affine expressions in the model
//! parameters with integer coefficients, which keeps the per-step weight
//! accounting exact.
//!
//! Two independent random streams are derived from the user seed: one for
//! element selection, one for planar placement (corner choices). Models
//! without placement choices never touch the second stream, so two models
//! with proportional weight rules produce the same selection trace from the
//! same seed.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use decoration_glue::{make_block, Block, BlockSpec, Decoration};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ulam_core::UlamAddress;

use crate::remy::SeedSequence;
use crate::{looptree, AffWeight, Fenwick, FitnessSequence, GrowthError, MultiGraph, TreeGrowth};

/// Which representations a run maintains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Global graph only.
    Direct,
    /// Block decomposition only (the planar models keep the global graph in
    /// every mode because corner placement reads its rotations).
    Decorated,
    /// Both, sharing one selection trace.
    Both,
}

impl Mode {
    pub(crate) fn wants_graph(self) -> bool {
        matches!(self, Mode::Direct | Mode::Both)
    }

    pub(crate) fn wants_blocks(self) -> bool {
        matches!(self, Mode::Decorated | Mode::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Vertex,
    Edge,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementKind::Vertex => write!(f, "vertex"),
            ElementKind::Edge => write!(f, "edge"),
        }
    }
}

/// One selection record. Slot ids are stable element identities, so a trace
/// replays to the same graph under the same construction rules; the element
/// id is the global graph id the slot pointed at when it was picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    /// 1-based growth step.
    pub step: usize,
    pub kind: ElementKind,
    /// Selected slot (stable element id).
    pub slot: usize,
    /// Global id of the selected element at selection time.
    pub element: usize,
    /// 0-based index of the block owning the selected element.
    pub block: usize,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} kind={} slot={} element={} block={}",
            self.step, self.kind, self.slot, self.element, self.block
        )
    }
}

/// Model identity and parameters.
#[derive(Debug, Clone)]
pub enum ModelTag {
    Remy {
        seeds: SeedSequence,
        fitness: FitnessSequence,
    },
    /// Produced by re-decomposing a Remy run; not steppable.
    RemyV2,
    Marchal {
        alpha: f64,
    },
    AlphaGamma {
        alpha: f64,
        gamma: f64,
    },
    Lpam {
        delta: f64,
    },
}

impl ModelTag {
    /// Planar models keep the rotation system, and with it the global graph,
    /// in every mode.
    fn needs_embedding(&self) -> bool {
        matches!(self, ModelTag::AlphaGamma { .. } | ModelTag::Lpam { .. })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Slot {
    pub(crate) kind: ElementKind,
    pub(crate) weight: AffWeight,
    pub(crate) block: usize,
    /// Id in the global graph (valid in every mode; ids are allocated even
    /// when the adjacency itself is skipped).
    pub(crate) global: usize,
    /// Id in the owning block's local graph; usize::MAX when blocks are not
    /// maintained.
    pub(crate) local: usize,
}

/// Weighted element slots with logarithmic selection.
#[derive(Debug, Clone)]
pub(crate) struct SlotRegistry {
    slots: Vec<Slot>,
    fen: Fenwick,
    total: AffWeight,
    x: f64,
    y: f64,
}

impl SlotRegistry {
    pub(crate) fn new(x: f64, y: f64) -> Self {
        SlotRegistry {
            slots: Vec::new(),
            fen: Fenwick::new(),
            total: AffWeight::ZERO,
            x,
            y,
        }
    }

    pub(crate) fn push(
        &mut self,
        kind: ElementKind,
        weight: AffWeight,
        block: usize,
        global: usize,
        local: usize,
    ) -> usize {
        let value = weight.eval(self.x, self.y);
        debug_assert!(value >= 0.0, "negative slot weight {weight:?}");
        let index = self.fen.push(value);
        self.total += weight;
        self.slots.push(Slot {
            kind,
            weight,
            block,
            global,
            local,
        });
        index
    }

    pub(crate) fn add_weight(&mut self, slot: usize, delta: AffWeight) {
        let s = &mut self.slots[slot];
        s.weight += delta;
        let value = s.weight.eval(self.x, self.y);
        debug_assert!(value >= 0.0, "negative slot weight {:?}", s.weight);
        self.total += delta;
        self.fen.set(slot, value);
    }

    pub(crate) fn repoint(&mut self, slot: usize, global: usize, local: usize) {
        self.slots[slot].global = global;
        self.slots[slot].local = local;
    }

    pub(crate) fn select<R: Rng>(&mut self, rng: &mut R) -> Result<usize, GrowthError> {
        let total = self.fen.total();
        if !(total > 0.0) {
            return Err(GrowthError::Internal {
                reason: format!("selection total {total} is not positive"),
            });
        }
        Ok(self.fen.select(rng.random::<f64>() * total))
    }

    pub(crate) fn slot(&self, index: usize) -> &Slot {
        &self.slots[index]
    }

    pub(crate) fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub(crate) fn total(&self) -> AffWeight {
        self.total
    }

    pub(crate) fn float_total(&self) -> f64 {
        self.fen.total()
    }

    pub(crate) fn params(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

/// A block's own copy of its part of the graph: local vertex ids, unit
/// edges, the gluing root, and the attach points in child-creation order.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalBlock {
    pub graph: MultiGraph,
    pub root: usize,
    pub attach: Vec<usize>,
    /// Local vertex id -> global vertex id. The root maps to the parent's
    /// glue vertex, so two local vertices of different blocks may map to the
    /// same global vertex; that is the gluing.
    pub to_global: Vec<usize>,
}

impl LocalBlock {
    pub(crate) fn single_edge(root_global: usize, leaf_global: usize) -> Self {
        LocalBlock {
            graph: MultiGraph::path(1),
            root: 0,
            attach: Vec::new(),
            to_global: vec![root_global, leaf_global],
        }
    }

    /// The block as a metric space with unit edge lengths.
    pub fn metric_block(&self) -> Result<Block, GrowthError> {
        let edges = self
            .graph
            .edge_list()
            .into_iter()
            .map(|(a, b)| (a, b, 1.0))
            .collect();
        Ok(make_block(BlockSpec::Graph {
            points: self.graph.vertex_count(),
            root: self.root,
            attach: self.attach.clone(),
            masses: None,
            edges,
        })?)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BlockMeta {
    /// Parent block index; usize::MAX at block 0.
    pub(crate) parent: usize,
    /// Global vertex this block's root is glued onto (block 0: its root).
    pub(crate) glue_vertex: usize,
    /// Global id of the edge created together with this block; usize::MAX
    /// when the model has no such edge (Remy seed blocks).
    pub(crate) first_edge: usize,
    pub(crate) children: Vec<usize>,
    pub(crate) weight: AffWeight,
    pub(crate) local: Option<LocalBlock>,
}

/// A growth run: the evolving graph, its block decomposition, the selection
/// registry, and the recorded trace.
#[derive(Debug, Clone)]
pub struct GrowthState {
    pub(crate) tag: ModelTag,
    pub(crate) mode: Mode,
    pub(crate) registry: SlotRegistry,
    pub(crate) blocks: Vec<BlockMeta>,
    pub(crate) graph: Option<MultiGraph>,
    pub(crate) next_vertex: usize,
    pub(crate) next_edge: usize,
    pub(crate) root_vertex: usize,
    pub(crate) trace: Vec<TraceStep>,
    pub(crate) selection_rng: ChaCha8Rng,
    pub(crate) placement_rng: ChaCha8Rng,
}

impl GrowthState {
    pub(crate) fn empty(tag: ModelTag, mode: Mode, seed: u64, x: f64, y: f64) -> Self {
        let with_graph = mode.wants_graph() || tag.needs_embedding();
        GrowthState {
            tag,
            mode,
            registry: SlotRegistry::new(x, y),
            blocks: Vec::new(),
            graph: with_graph.then(MultiGraph::new),
            next_vertex: 0,
            next_edge: 0,
            root_vertex: 0,
            trace: Vec::new(),
            selection_rng: ChaCha8Rng::seed_from_u64(seed),
            placement_rng: ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15),
        }
    }

    pub fn model(&self) -> &ModelTag {
        &self.tag
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn step_count(&self) -> usize {
        self.trace.len()
    }

    pub fn graph(&self) -> Option<&MultiGraph> {
        self.graph.as_ref()
    }

    pub fn root_vertex(&self) -> usize {
        self.root_vertex
    }

    pub fn vertex_count(&self) -> usize {
        self.next_vertex
    }

    pub fn edge_count(&self) -> usize {
        self.next_edge
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    /// Exact total selection weight as an affine expression.
    pub fn total_weight(&self) -> AffWeight {
        self.registry.total()
    }

    /// Current weight of every element, in slot order.
    pub fn element_weights(&self) -> impl Iterator<Item = (ElementKind, AffWeight)> + '_ {
        self.registry.slots().iter().map(|s| (s.kind, s.weight))
    }

    pub fn block_weight(&self, block: usize) -> AffWeight {
        self.blocks[block].weight
    }

    pub fn block_parent(&self, block: usize) -> Option<usize> {
        (block > 0).then(|| self.blocks[block].parent)
    }

    /// Global vertex the block's root is glued onto (block 0: the run's
    /// root vertex).
    pub fn block_glue_vertex(&self, block: usize) -> usize {
        self.blocks[block].glue_vertex
    }

    pub fn block_children(&self, block: usize) -> &[usize] {
        &self.blocks[block].children
    }

    pub fn local_block(&self, block: usize) -> Option<&LocalBlock> {
        self.blocks[block].local.as_ref()
    }

    /// Global id of the edge created together with a block, if any.
    pub fn block_first_edge(&self, block: usize) -> Option<usize> {
        let e = self.blocks[block].first_edge;
        (e != usize::MAX).then_some(e)
    }

    /// The block-selection tree: vertex k is block k (u_{k+1} in creation
    /// order).
    pub fn block_tree(&self) -> TreeGrowth {
        let n = self.blocks.len();
        let mut parents = Vec::with_capacity(n.saturating_sub(1));
        let mut heights = vec![0u32; n];
        let mut out_degrees = vec![0u32; n];
        for (k, meta) in self.blocks.iter().enumerate().skip(1) {
            parents.push(meta.parent);
            heights[k] = heights[meta.parent] + 1;
            out_degrees[meta.parent] += 1;
        }
        TreeGrowth {
            parents,
            heights,
            out_degrees,
        }
    }

    /// Ulam address of each block, in creation order.
    pub fn block_addresses(&self) -> Vec<UlamAddress> {
        self.block_tree().plane_tree().1
    }

    /// The block decomposition as a decoration with unit edge lengths.
    pub fn decoration(&self) -> Result<Decoration, GrowthError> {
        if matches!(self.tag, ModelTag::Lpam { .. }) {
            return Err(GrowthError::WrongState {
                reason: "this model decomposes into loops; use loop_decoration".to_owned(),
            });
        }
        let addresses = self.block_addresses();
        let mut map = BTreeMap::new();
        for (k, meta) in self.blocks.iter().enumerate() {
            let local = meta.local.as_ref().ok_or_else(|| GrowthError::WrongState {
                reason: "blocks were not maintained (direct mode run)".to_owned(),
            })?;
            map.insert(addresses[k].clone(), local.metric_block()?);
        }
        Ok(Decoration::new(map)?)
    }

    /// The looptree of the global tree, built directly by the functor.
    pub fn loop_graph(&self) -> Result<MultiGraph, GrowthError> {
        let graph = self.graph.as_ref().ok_or_else(|| GrowthError::WrongState {
            reason: "no global graph in this mode".to_owned(),
        })?;
        looptree(graph, self.root_vertex)
    }

    /// Per-block looptree pieces for the planar models: the loops around the
    /// block's own vertices, rooted at the blue vertex of the block's first
    /// edge, with attach points at the blues of the children's first edges.
    /// Local ids map to global tree-edge ids through `to_global`.
    pub fn loop_local_blocks(&self) -> Result<Vec<LocalBlock>, GrowthError> {
        if !self.tag.needs_embedding() {
            return Err(GrowthError::WrongState {
                reason: "loop decomposition is only defined for the planar models".to_owned(),
            });
        }
        let graph = self.graph.as_ref().ok_or_else(|| GrowthError::WrongState {
            reason: "no global graph in this mode".to_owned(),
        })?;
        let mut owned: Vec<Vec<usize>> = vec![Vec::new(); self.blocks.len()];
        for slot in self.registry.slots() {
            if slot.kind == ElementKind::Vertex && slot.global != self.root_vertex {
                owned[slot.block].push(slot.global);
            }
        }
        let mut out = Vec::with_capacity(self.blocks.len());
        for (k, meta) in self.blocks.iter().enumerate() {
            let mut local = MultiGraph::new();
            let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
            let mut to_global = Vec::new();
            let mut intern = |blue: usize, local: &mut MultiGraph, to_global: &mut Vec<usize>| {
                *ids.entry(blue).or_insert_with(|| {
                    to_global.push(blue);
                    local.add_vertex()
                })
            };
            for &v in &owned[k] {
                let rotation = graph.rotation(v);
                let d = rotation.len();
                for i in 0..d {
                    let a = intern(rotation[i].edge, &mut local, &mut to_global);
                    let b = intern(rotation[(i + 1) % d].edge, &mut local, &mut to_global);
                    local.add_edge(a, b);
                }
            }
            let root_blue = meta.first_edge;
            let root = *ids.get(&root_blue).ok_or_else(|| GrowthError::Internal {
                reason: format!("block {k}: first edge {root_blue} not in its loops"),
            })?;
            let mut attach = Vec::with_capacity(meta.children.len());
            for &child in &meta.children {
                let blue = self.blocks[child].first_edge;
                let id = *ids.get(&blue).ok_or_else(|| GrowthError::Internal {
                    reason: format!("block {k}: child edge {blue} not in its loops"),
                })?;
                attach.push(id);
            }
            out.push(LocalBlock {
                graph: local,
                root,
                attach,
                to_global,
            });
        }
        Ok(out)
    }

    /// The loop decomposition as a decoration with unit edge lengths.
    pub fn loop_decoration(&self) -> Result<Decoration, GrowthError> {
        let addresses = self.block_addresses();
        let mut map = BTreeMap::new();
        for (k, piece) in self.loop_local_blocks()?.into_iter().enumerate() {
            map.insert(addresses[k].clone(), piece.metric_block()?);
        }
        Ok(Decoration::new(map)?)
    }

    /// The glued metric space of `decoration()`, over the full block tree.
    pub fn glued_space(&self) -> Result<decoration_glue::GluedSpace, GrowthError> {
        Ok(decoration_glue::GluedSpace::full(Arc::new(
            self.decoration()?,
        )))
    }

    /// One growth step.
    pub fn step(&mut self) -> Result<(), GrowthError> {
        match self.tag {
            ModelTag::Remy { .. } => crate::remy::step(self),
            ModelTag::Marchal { .. } => crate::marchal::step(self),
            ModelTag::AlphaGamma { .. } => crate::alphagamma::step(self),
            ModelTag::Lpam { .. } => crate::lpam::step(self),
            ModelTag::RemyV2 => Err(GrowthError::WrongState {
                reason: "a re-decomposed state is a snapshot and cannot be stepped".to_owned(),
            }),
        }
    }

    /// Steps until the run has `blocks` blocks.
    pub fn grow_to(&mut self, blocks: usize) -> Result<(), GrowthError> {
        while self.blocks.len() < blocks {
            self.step()?;
        }
        Ok(())
    }

    /// Edge list of the global graph, one `a b` pair per line.
    pub fn edge_list_text(&self) -> Result<String, GrowthError> {
        let graph = self.graph.as_ref().ok_or_else(|| GrowthError::WrongState {
            reason: "no global graph in this mode".to_owned(),
        })?;
        let mut out = String::new();
        for (a, b) in graph.edge_list() {
            out.push_str(&format!("{a} {b}\n"));
        }
        Ok(out)
    }

    /// Cross-checks every structural invariant that is cheap enough to
    /// assert wholesale: id counters against the graph, the float selection
    /// total against the exact one, slot references, and the embedding.
    pub fn consistency_check(&self) -> Result<(), GrowthError> {
        let (x, y) = self.registry.params();
        let exact = self.registry.total().eval(x, y);
        let float = self.registry.float_total();
        if (float - exact).abs() > 1e-9 * exact.abs().max(1.0) {
            return Err(GrowthError::Internal {
                reason: format!("selection total drifted: fenwick {float} vs exact {exact}"),
            });
        }
        if let Some(graph) = &self.graph {
            if graph.vertex_count() != self.next_vertex || graph.edge_count() != self.next_edge {
                return Err(GrowthError::Internal {
                    reason: "id counters disagree with the graph".to_owned(),
                });
            }
            graph.embedding().validate(graph)?;
            for (i, slot) in self.registry.slots().iter().enumerate() {
                let in_range = match slot.kind {
                    ElementKind::Vertex => slot.global < graph.vertex_count(),
                    ElementKind::Edge => slot.global < graph.edge_count(),
                };
                if !in_range {
                    return Err(GrowthError::Internal {
                        reason: format!("slot {i} references a missing element"),
                    });
                }
            }
        }
        let block_sum: AffWeight = self.blocks.iter().map(|b| b.weight).sum();
        if block_sum != self.registry.total() {
            return Err(GrowthError::Internal {
                reason: format!(
                    "block weights {block_sum:?} disagree with the registry {:?}",
                    self.registry.total()
                ),
            });
        }
        if self.mode.wants_blocks() {
            for (k, meta) in self.blocks.iter().enumerate() {
                if let Some(local) = &meta.local {
                    if local.to_global.len() != local.graph.vertex_count() {
                        return Err(GrowthError::Internal {
                            reason: format!("block {k}: global map out of sync"),
                        });
                    }
                    if local.to_global[local.root] != meta.glue_vertex {
                        return Err(GrowthError::Internal {
                            reason: format!("block {k}: root is not on its glue vertex"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn alloc_vertex(&mut self) -> usize {
        let id = self.next_vertex;
        self.next_vertex += 1;
        if let Some(g) = &mut self.graph {
            let got = g.add_vertex();
            debug_assert_eq!(got, id);
        }
        id
    }

    pub(crate) fn alloc_edge(&mut self, a: usize, b: usize) -> usize {
        let id = self.next_edge;
        self.next_edge += 1;
        if let Some(g) = &mut self.graph {
            let got = g.add_edge(a, b);
            debug_assert_eq!(got, id);
        }
        id
    }

    pub(crate) fn alloc_edge_at_corner(&mut self, a: usize, corner: usize, b: usize) -> usize {
        let id = self.next_edge;
        self.next_edge += 1;
        if let Some(g) = &mut self.graph {
            let got = g.add_edge_at_corner(a, corner, b);
            debug_assert_eq!(got, id);
        }
        id
    }

    /// Splits a global edge; returns (midpoint vertex, new edge). The
    /// original id keeps the root-side half, the new id is the far half.
    pub(crate) fn split_global_edge(&mut self, edge: usize) -> (usize, usize) {
        let mid = self.next_vertex;
        self.next_vertex += 1;
        let new_edge = self.next_edge;
        self.next_edge += 1;
        if let Some(g) = &mut self.graph {
            let (got_mid, got_edge) = g.split_edge(edge);
            debug_assert_eq!((got_mid, got_edge), (mid, new_edge));
        }
        (mid, new_edge)
    }

    pub(crate) fn record(&mut self, kind: ElementKind, slot: usize, element: usize, block: usize) {
        self.trace.push(TraceStep {
            step: self.blocks.len(),
            kind,
            slot,
            element,
            block,
        });
    }

    /// Registers a new single-edge block glued at `glue_vertex` of `parent`.
    pub(crate) fn push_leaf_block(
        &mut self,
        parent: usize,
        glue_vertex: usize,
        leaf_vertex: usize,
        first_edge: usize,
        weight: AffWeight,
        with_local: bool,
    ) -> usize {
        let k = self.blocks.len();
        self.blocks.push(BlockMeta {
            parent,
            glue_vertex,
            first_edge,
            children: Vec::new(),
            weight,
            local: with_local.then(|| LocalBlock::single_edge(glue_vertex, leaf_vertex)),
        });
        self.blocks[parent].children.push(k);
        k
    }
}

/// Weight rules for the split-and-leaf surgery shared by the Marchal and
/// alpha-gamma dynamics.
pub(crate) struct SplitWeights {
    /// Weight of the new midpoint vertex (degree 3 at birth).
    pub(crate) mid: AffWeight,
    /// Weight of the root-side half, which is the newly created edge id; the
    /// selected slot keeps its weight and moves to the far half.
    pub(crate) closer: AffWeight,
    /// Weight of the new block's leaf edge.
    pub(crate) leaf_edge: AffWeight,
}

impl GrowthState {
    /// Edge hit: split the edge at a new midpoint, hang a leaf edge there,
    /// and open a new block consisting of the leaf edge. Returns the new
    /// block's index.
    pub(crate) fn apply_split_and_leaf(
        &mut self,
        slot: usize,
        weights: &SplitWeights,
    ) -> Result<usize, GrowthError> {
        let s = self.registry.slot(slot);
        debug_assert_eq!(s.kind, ElementKind::Edge);
        let block = s.block;
        let edge_global = s.global;
        let edge_local = s.local;
        self.record(ElementKind::Edge, slot, edge_global, block);

        let (mid_global, far_global) = self.split_global_edge(edge_global);
        let leaf_global = self.alloc_vertex();
        // The leaf sits in the corner between the two halves; the cyclic
        // order around a degree-3 midpoint does not depend on which of the
        // two such corners is used.
        let leaf_edge_global = self.alloc_edge_at_corner(mid_global, 0, leaf_global);

        let mut mid_local = usize::MAX;
        let mut far_local = usize::MAX;
        if self.mode.wants_blocks() {
            let local = self.blocks[block]
                .local
                .as_mut()
                .expect("decorated mode maintains local blocks");
            let (m, f) = local.graph.split_edge(edge_local);
            mid_local = m;
            far_local = f;
            local.attach.push(mid_local);
            local.to_global.push(mid_global);
        }

        let new_block = self.push_leaf_block(
            block,
            mid_global,
            leaf_global,
            leaf_edge_global,
            weights.leaf_edge,
            self.mode.wants_blocks(),
        );

        self.registry.repoint(slot, far_global, far_local);
        self.registry.push(
            ElementKind::Vertex,
            weights.mid,
            block,
            mid_global,
            mid_local,
        );
        self.registry.push(
            ElementKind::Vertex,
            AffWeight::ZERO,
            new_block,
            leaf_global,
            if self.mode.wants_blocks() { 1 } else { usize::MAX },
        );
        self.registry.push(
            ElementKind::Edge,
            weights.closer,
            block,
            edge_global,
            edge_local,
        );
        self.registry.push(
            ElementKind::Edge,
            weights.leaf_edge,
            new_block,
            leaf_edge_global,
            if self.mode.wants_blocks() { 0 } else { usize::MAX },
        );
        self.blocks[block].weight += weights.mid + weights.closer;
        Ok(new_block)
    }

    /// Vertex hit: hang a leaf edge at the vertex (at the given corner when
    /// the model is planar) and open a new block consisting of the leaf
    /// edge. Returns the new block's index.
    pub(crate) fn apply_leaf_at_vertex(
        &mut self,
        slot: usize,
        corner: Option<usize>,
        vertex_gain: AffWeight,
        leaf_edge_weight: AffWeight,
    ) -> Result<usize, GrowthError> {
        let s = self.registry.slot(slot);
        debug_assert_eq!(s.kind, ElementKind::Vertex);
        let block = s.block;
        let vertex_global = s.global;
        let vertex_local = s.local;
        self.record(ElementKind::Vertex, slot, vertex_global, block);

        let leaf_global = self.alloc_vertex();
        let leaf_edge_global = match corner {
            Some(c) => self.alloc_edge_at_corner(vertex_global, c, leaf_global),
            None => self.alloc_edge(vertex_global, leaf_global),
        };

        if self.mode.wants_blocks() {
            let local = self.blocks[block]
                .local
                .as_mut()
                .expect("decorated mode maintains local blocks");
            local.attach.push(vertex_local);
        }

        let new_block = self.push_leaf_block(
            block,
            vertex_global,
            leaf_global,
            leaf_edge_global,
            leaf_edge_weight,
            self.mode.wants_blocks(),
        );

        self.registry.add_weight(slot, vertex_gain);
        self.registry.push(
            ElementKind::Vertex,
            AffWeight::ZERO,
            new_block,
            leaf_global,
            if self.mode.wants_blocks() { 1 } else { usize::MAX },
        );
        self.registry.push(
            ElementKind::Edge,
            leaf_edge_weight,
            new_block,
            leaf_edge_global,
            if self.mode.wants_blocks() { 0 } else { usize::MAX },
        );
        self.blocks[block].weight += vertex_gain;
        Ok(new_block)
    }
}
