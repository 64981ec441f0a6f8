//! Iterative gluing construction: a weighted recursive tree skeleton whose
//! vertices carry independently sampled blocks, each scaled by its own
//! factor, glued root-to-attach-point into one space, together with the
//! weight measure on the skeleton and optional marked points drawn from it.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, RngCore};

use decoration_glue::{
    make_block, Block, BlockSpec, Decoration, GluedSpace, MeasureOnUlam, PointHandle,
};
use distributions::sample_mlmc;
use growth_models::wrt_grow;

use crate::block_sample::LimitBlockSample;
use crate::error::LimitError;

/// Where the attachment weights of the skeleton come from.
pub enum WeightSource {
    /// w_1, w_2, ... given directly; needs at least n values.
    Explicit(Vec<f64>),
    /// Increments of a Mittag-Leffler Markov chain, sampled at the given
    /// resolution before anything else consumes the generator.
    Mlmc {
        alpha: f64,
        theta: f64,
        resolution: usize,
    },
}

/// Where the per-block scaling factors come from.
pub enum ScalingSource {
    /// lambda_1, lambda_2, ... given directly; needs at least n values.
    Explicit(Vec<f64>),
    /// lambda_k = w_k^exponent, coupled to the sampled weights.
    WeightPower { exponent: f64 },
}

/// Block sampler called as (block index, point count, rng); the returned
/// sample must carry at least `point count` distinguished points.
pub type BlockSampler<'a> =
    Box<dyn FnMut(usize, usize, &mut dyn RngCore) -> Result<LimitBlockSample, LimitError> + 'a>;

/// The block law used at every skeleton vertex.
pub enum BlockSource<'a> {
    /// Unit segment rooted at one end, points i.i.d. uniform.
    UnitSegment,
    /// Circle of unit circumference rooted at arc 0, points i.i.d. uniform.
    UnitCircle,
    /// Arbitrary sampler; its blocks are rescaled by the scaling factors.
    Sampler(BlockSampler<'a>),
}

/// Full description of one iterative gluing run.
pub struct IterativeGluingSpec<'a> {
    pub weights: WeightSource,
    pub scalings: ScalingSource,
    pub blocks: BlockSource<'a>,
    /// Number of skeleton vertices (truncation level).
    pub n: usize,
    /// Marked points drawn i.i.d. from the weight measure: each pick selects
    /// a block with probability w_k / W_n and takes a fresh point of that
    /// block's point law.
    pub marked_points: usize,
}

/// Result of a run: the decoration, the glued space over it, the weight
/// measure nu_n(u_k) = w_k / W_n, and the marked point handles in draw order.
pub struct IterativeGluing {
    pub decoration: Arc<Decoration>,
    pub space: GluedSpace,
    pub weight_measure: MeasureOnUlam,
    pub marked: Vec<PointHandle>,
}

fn resolve_weights<R: Rng>(
    source: &WeightSource,
    n: usize,
    rng: &mut R,
) -> Result<Vec<f64>, LimitError> {
    let weights = match source {
        WeightSource::Explicit(values) => {
            if values.len() < n {
                return Err(LimitError::Input {
                    what: "weight sequence",
                    detail: format!("{} values for a run of {n} blocks", values.len()),
                });
            }
            values[..n].to_vec()
        }
        WeightSource::Mlmc {
            alpha,
            theta,
            resolution,
        } => sample_mlmc(*alpha, *theta, n, *resolution, rng)?.increments(),
    };
    if !(weights[0] > 0.0) {
        return Err(LimitError::Parameter {
            name: "w_1",
            value: weights[0],
            constraint: "the first weight must be positive",
        });
    }
    for &w in &weights {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(LimitError::Parameter {
                name: "weight",
                value: w,
                constraint: "nonnegative and finite",
            });
        }
    }
    Ok(weights)
}

fn resolve_scalings(
    source: &ScalingSource,
    weights: &[f64],
) -> Result<Vec<f64>, LimitError> {
    let scalings = match source {
        ScalingSource::Explicit(values) => {
            if values.len() < weights.len() {
                return Err(LimitError::Input {
                    what: "scaling sequence",
                    detail: format!(
                        "{} values for a run of {} blocks",
                        values.len(),
                        weights.len()
                    ),
                });
            }
            values[..weights.len()].to_vec()
        }
        ScalingSource::WeightPower { exponent } => {
            weights.iter().map(|&w| w.powf(*exponent)).collect()
        }
    };
    for &s in &scalings {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(LimitError::Parameter {
                name: "scaling",
                value: s,
                constraint: "nonnegative and finite",
            });
        }
    }
    Ok(scalings)
}

/// Chain of vertices along a segment of length `scale`: point i sits at
/// positions[i], the root at 0, a far-end vertex at `scale`. Returns the
/// block and the vertex id of each point in draw order.
pub(crate) fn segment_block(
    scale: f64,
    positions: &[f64],
    attach_count: usize,
) -> Result<(Block, Vec<usize>), LimitError> {
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by(|&a, &b| positions[a].total_cmp(&positions[b]));
    let mut vertex_of_point = vec![0usize; positions.len()];
    for (rank, &p) in order.iter().enumerate() {
        vertex_of_point[p] = 1 + rank;
    }
    let end = 1 + positions.len();
    let mut edges = Vec::with_capacity(end);
    let mut prev_vertex = 0usize;
    let mut prev_pos = 0.0f64;
    for (rank, &p) in order.iter().enumerate() {
        edges.push((prev_vertex, 1 + rank, positions[p] - prev_pos));
        prev_vertex = 1 + rank;
        prev_pos = positions[p];
    }
    edges.push((prev_vertex, end, scale - prev_pos));
    let attach = vertex_of_point[..attach_count].to_vec();
    let block = make_block(BlockSpec::Graph {
        points: end + 1,
        root: 0,
        attach,
        masses: None,
        edges,
    })?;
    Ok((block, vertex_of_point))
}

/// Cycle of vertices around a circle of circumference `scale`: point i sits
/// at arc positions[i] from the root vertex at arc 0.
pub(crate) fn circle_block(
    scale: f64,
    positions: &[f64],
    attach_count: usize,
) -> Result<(Block, Vec<usize>), LimitError> {
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by(|&a, &b| positions[a].total_cmp(&positions[b]));
    let mut vertex_of_point = vec![0usize; positions.len()];
    for (rank, &p) in order.iter().enumerate() {
        vertex_of_point[p] = 1 + rank;
    }
    let mut edges = Vec::with_capacity(positions.len() + 1);
    let mut prev_vertex = 0usize;
    let mut prev_pos = 0.0f64;
    for (rank, &p) in order.iter().enumerate() {
        edges.push((prev_vertex, 1 + rank, positions[p] - prev_pos));
        prev_vertex = 1 + rank;
        prev_pos = positions[p];
    }
    // Close the cycle back to the root.
    edges.push((prev_vertex, 0, scale - prev_pos));
    let attach = vertex_of_point[..attach_count].to_vec();
    let block = make_block(BlockSpec::Graph {
        points: 1 + positions.len(),
        root: 0,
        attach,
        masses: None,
        edges,
    })?;
    Ok((block, vertex_of_point))
}

/// Zero-diameter copy of a block: same point count, root, and attach list,
/// every distance zero.
pub(crate) fn collapse_block(block: &Block) -> Result<Block, LimitError> {
    let p = block.points();
    Ok(make_block(BlockSpec::Matrix {
        root: block.root(),
        attach: block.attach_list().to_vec(),
        masses: None,
        rows: vec![vec![0.0; p]; p],
    })?)
}

/// Runs the iterative gluing construction.
pub fn iterative_gluing<R: Rng>(
    spec: IterativeGluingSpec<'_>,
    rng: &mut R,
) -> Result<IterativeGluing, LimitError> {
    let IterativeGluingSpec {
        weights,
        scalings,
        mut blocks,
        n,
        marked_points,
    } = spec;
    if n == 0 {
        return Err(LimitError::Parameter {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    let weights = resolve_weights(&weights, n, rng)?;
    let scalings = resolve_scalings(&scalings, &weights)?;

    let tree = wrt_grow(&weights[..n - 1], n, rng)?;
    let (_, addresses) = tree.plane_tree();

    // Marked draws: block k with probability w_k / W_n, in draw order.
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &w in &weights {
        acc += w;
        cumulative.push(acc);
    }
    let total_weight = acc;
    let mut draws = Vec::with_capacity(marked_points);
    let mut extra = vec![0usize; n];
    for _ in 0..marked_points {
        let target = rng.random::<f64>() * total_weight;
        let k = cumulative.partition_point(|&c| c <= target).min(n - 1);
        draws.push((k, extra[k]));
        extra[k] += 1;
    }

    let mut map = BTreeMap::new();
    // Vertex id of each point of block k, in point draw order.
    let mut point_ids: Vec<Vec<usize>> = Vec::with_capacity(n);
    for k in 0..n {
        let attach_count = tree.out_degrees[k] as usize;
        let point_count = attach_count + extra[k];
        let scale = scalings[k];
        let (block, ids) = match &mut blocks {
            BlockSource::UnitSegment => {
                let positions: Vec<f64> =
                    (0..point_count).map(|_| rng.random::<f64>() * scale).collect();
                segment_block(scale, &positions, attach_count)?
            }
            BlockSource::UnitCircle => {
                let positions: Vec<f64> =
                    (0..point_count).map(|_| rng.random::<f64>() * scale).collect();
                circle_block(scale, &positions, attach_count)?
            }
            BlockSource::Sampler(sample) => {
                let sampled = sample(k, point_count, rng)?;
                if sampled.n_points() < point_count {
                    return Err(LimitError::Input {
                        what: "block sampler",
                        detail: format!(
                            "block {k} carries {} points, {point_count} needed",
                            sampled.n_points()
                        ),
                    });
                }
                let block = if scale == 1.0 {
                    sampled.block().clone()
                } else if scale > 0.0 {
                    sampled.block().rescale(scale)?
                } else {
                    collapse_block(sampled.block())?
                };
                let ids = (1..=point_count).collect();
                (block, ids)
            }
        };
        map.insert(addresses[k].clone(), block);
        point_ids.push(ids);
    }

    let decoration = Arc::new(Decoration::new(map)?);
    let space = GluedSpace::full(Arc::clone(&decoration));

    let mut atom_map = BTreeMap::new();
    for (k, &w) in weights.iter().enumerate() {
        atom_map.insert(addresses[k].clone(), w / total_weight);
    }
    let weight_measure = MeasureOnUlam::from_atoms(atom_map)?;

    let marked = draws
        .into_iter()
        .map(|(k, slot)| {
            let point = point_ids[k][tree.out_degrees[k] as usize + slot];
            PointHandle::new(addresses[k].clone(), point)
        })
        .collect();

    Ok(IterativeGluing {
        decoration,
        space,
        weight_measure,
        marked,
    })
}
