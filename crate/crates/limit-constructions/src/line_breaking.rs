//! Line-breaking construction: cut the increments of a Mittag-Leffler Markov
//! chain into as many pieces as each seed graph has edges, carry the pieces
//! onto the seed edges, and glue each new seed at a length-measure point of
//! the space built so far.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use decoration_glue::{make_block, Block, BlockSpec, Decoration, GluedSpace, PointHandle};
use distributions::sample_mlmc;
use growth_models::{Fenwick, FitnessSequence, SeedSequence};
use ulam_core::UlamAddress;

use crate::error::LimitError;

/// Resolution of the Mittag-Leffler draw at the top of the chain. Pinned so
/// that a run can be replayed from its seed.
pub const MLMC_RESOLUTION: usize = 10_000;

/// One growing block: a seed graph whose edges carry lengths, extended by a
/// split vertex each time a later seed glues onto it.
struct BuildBlock {
    address: UlamAddress,
    vertices: usize,
    root: usize,
    edges: Vec<(usize, usize, f64)>,
    attach: Vec<usize>,
}

impl BuildBlock {
    /// Splits the edge containing the length-coordinate `target` (measured
    /// from the start of this block's cumulative edge line) and returns the
    /// new vertex sitting at that point.
    fn split_at(&mut self, target: f64) -> usize {
        let mut remaining = target.max(0.0);
        let mut index = self.edges.len() - 1;
        for (i, &(_, _, len)) in self.edges.iter().enumerate() {
            if remaining < len {
                index = i;
                break;
            }
            remaining -= len;
        }
        let (u, v, len) = self.edges[index];
        let t = remaining.min(len);
        let w = self.vertices;
        self.vertices += 1;
        self.edges[index] = (u, w, t);
        self.edges.push((w, v, len - t));
        w
    }
}

/// Extracts the constant tail value of a fitness sequence, or explains why
/// the Mittag-Leffler chain parameters cannot be derived from it.
fn constant_tail(fitnesses: &FitnessSequence) -> Result<f64, LimitError> {
    if fitnesses.len() < 2 {
        return Err(LimitError::Parameter {
            name: "fitness length",
            value: fitnesses.len() as f64,
            constraint: "at least 2 values to certify the tail",
        });
    }
    let tail = fitnesses.value(2);
    for k in 3..=fitnesses.len() {
        if fitnesses.value(k) != tail {
            return Err(LimitError::Parameter {
                name: "fitness tail",
                value: fitnesses.value(k),
                constraint: "constant from the second entry on (chain parameters underivable otherwise)",
            });
        }
    }
    if !(tail > 0.0) {
        return Err(LimitError::Parameter {
            name: "fitness tail",
            value: tail,
            constraint: "positive",
        });
    }
    Ok(tail)
}

/// Chain parameters derived from a constant-tail fitness sequence
/// (a, b, b, ...): alpha = 1/(b+1), theta = a/(b+1).
pub fn chain_parameters(fitnesses: &FitnessSequence) -> Result<(f64, f64), LimitError> {
    let b = constant_tail(fitnesses)?;
    let a = fitnesses.value(1);
    Ok((1.0 / (b + 1.0), a / (b + 1.0)))
}

/// Runs the line-breaking construction for `n` seeds and returns the glued
/// space. The chain values are sampled first (one `sample_mlmc` call at
/// [`MLMC_RESOLUTION`]), so a caller holding the same seeded generator can
/// replay them.
pub fn line_breaking<R: Rng + ?Sized>(
    fitnesses: &FitnessSequence,
    seeds: &SeedSequence,
    n: usize,
    rng: &mut R,
) -> Result<GluedSpace, LimitError> {
    if n == 0 {
        return Err(LimitError::Parameter {
            name: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    if fitnesses.len() < n {
        return Err(LimitError::Input {
            what: "fitness sequence",
            detail: format!("{} values for a run of {n} seeds", fitnesses.len()),
        });
    }
    let (alpha, theta) = chain_parameters(fitnesses)?;
    for k in 1..=n {
        let edges = seeds.get(k - 1)?.edge_count() as f64;
        if edges != fitnesses.value(k) {
            return Err(LimitError::Input {
                what: "seed sequence",
                detail: format!(
                    "seed {k} has {edges} edges but fitness value {}",
                    fitnesses.value(k)
                ),
            });
        }
    }
    let chain = sample_mlmc(alpha, theta, n, MLMC_RESOLUTION, rng)?;
    let increments = chain.increments();

    let mut blocks: Vec<BuildBlock> = Vec::with_capacity(n);
    let mut lengths = Fenwick::new();
    for (k, &m_k) in increments.iter().enumerate() {
        let seed = seeds.get(k)?;
        let parts = cut_segment(m_k, seed.edge_count(), rng);
        let edges: Vec<(usize, usize, f64)> = seed
            .graph()
            .edge_list()
            .into_iter()
            .zip(parts)
            .map(|((a, b), len)| (a, b, len))
            .collect();
        let address = if k == 0 {
            UlamAddress::root()
        } else {
            let target = rng.random::<f64>() * lengths.total();
            let j = lengths.select(target);
            let within = target - lengths.prefix(j);
            let w = blocks[j].split_at(within);
            blocks[j].attach.push(w);
            blocks[j].address.child(blocks[j].attach.len() as u32)
        };
        blocks.push(BuildBlock {
            address,
            vertices: seed.graph().vertex_count(),
            root: seed.root(),
            edges,
            attach: Vec::new(),
        });
        lengths.push(m_k);
    }

    let mut map = BTreeMap::new();
    for block in blocks {
        let built = make_block(BlockSpec::Graph {
            points: block.vertices,
            root: block.root,
            attach: block.attach,
            masses: None,
            edges: block.edges,
        })?;
        map.insert(block.address, built);
    }
    let decoration = Decoration::new(map)?;
    Ok(GluedSpace::full(Arc::new(decoration)))
}

/// Cuts a segment of length `total` into `parts` pieces at sorted uniform
/// points, in left-to-right order.
fn cut_segment<R: Rng + ?Sized>(total: f64, parts: usize, rng: &mut R) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..parts.saturating_sub(1))
        .map(|_| rng.random::<f64>() * total)
        .collect();
    cuts.sort_by(|a, b| a.total_cmp(b));
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0.0;
    for &c in &cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(total - prev);
    out
}

/// Total edge length over every graph-kind block of a glued space.
pub fn glued_total_length(space: &GluedSpace) -> f64 {
    space
        .decoration()
        .blocks()
        .map(|(_, block)| {
            block
                .edges()
                .map(|edges| edges.iter().map(|&(_, _, len)| len).sum::<f64>())
                .unwrap_or(0.0)
        })
        .sum()
}

/// Distance from the root of the glued space to one fresh point of its
/// length measure (a uniform position on the union of all block edges).
pub fn root_to_length_point_distance<R: Rng + ?Sized>(
    space: &GluedSpace,
    rng: &mut R,
) -> Result<f64, LimitError> {
    let mut carriers: Vec<(&UlamAddress, &Block)> = Vec::new();
    let mut fenwick = Fenwick::new();
    for (address, block) in space.decoration().blocks() {
        let weight = block
            .edges()
            .map(|edges| edges.iter().map(|&(_, _, len)| len).sum::<f64>())
            .unwrap_or(0.0);
        if weight > 0.0 {
            carriers.push((address, block));
            fenwick.push(weight);
        }
    }
    if carriers.is_empty() {
        return Err(LimitError::Input {
            what: "glued space",
            detail: "no graph-kind block with positive length".to_owned(),
        });
    }
    let target = rng.random::<f64>() * fenwick.total();
    let pick = fenwick.select(target);
    let (address, block) = carriers[pick];
    let mut within = target - fenwick.prefix(pick);
    let edges = block.edges().expect("carriers hold graph-kind blocks");
    let mut chosen = edges.len() - 1;
    for (i, &(_, _, len)) in edges.iter().enumerate() {
        if within < len {
            chosen = i;
            break;
        }
        within -= len;
    }
    let (u, v, len) = edges[chosen];
    let t = within.min(len);
    let root = space.root_handle();
    let via_u = space.distance(&root, &PointHandle::new(address.clone(), u))? + t;
    let via_v = space.distance(&root, &PointHandle::new(address.clone(), v))? + (len - t);
    Ok(via_u.min(via_v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use growth_models::SeedGraph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn non_constant_tail_is_rejected() {
        let fitness =
            FitnessSequence::new(vec![1.0, 2.0, 1.0, 2.0, 1.0, 2.0], 1.5, 0.0, 1.0).unwrap();
        let seeds = SeedSequence::Repeat(SeedGraph::single_edge());
        assert!(matches!(
            line_breaking(&fitness, &seeds, 3, &mut rng(1)),
            Err(LimitError::Parameter { .. })
        ));
    }

    #[test]
    fn seed_fitness_mismatch_is_rejected() {
        let fitness = FitnessSequence::constant(2.0, 10).unwrap();
        let seeds = SeedSequence::Repeat(SeedGraph::single_edge());
        assert!(matches!(
            line_breaking(&fitness, &seeds, 3, &mut rng(2)),
            Err(LimitError::Input { .. })
        ));
    }

    #[test]
    fn single_seed_gives_one_block_of_chain_length() {
        let fitness = FitnessSequence::constant(1.0, 2).unwrap();
        let seeds = SeedSequence::Repeat(SeedGraph::single_edge());
        let space = line_breaking(&fitness, &seeds, 1, &mut rng(3)).unwrap();
        assert_eq!(space.decoration().blocks().count(), 1);
        let replay = sample_mlmc(0.5, 0.5, 1, MLMC_RESOLUTION, &mut rng(3)).unwrap();
        let total = glued_total_length(&space);
        assert!((total - replay.values()[0]).abs() < 1e-12 * total.max(1.0));
    }

    #[test]
    fn totals_telescope_to_the_chain_top() {
        let fitness = FitnessSequence::constant(1.0, 20).unwrap();
        let seeds = SeedSequence::Repeat(SeedGraph::single_edge());
        let space = line_breaking(&fitness, &seeds, 20, &mut rng(4)).unwrap();
        assert_eq!(space.decoration().blocks().count(), 20);
        let replay = sample_mlmc(0.5, 0.5, 20, MLMC_RESOLUTION, &mut rng(4)).unwrap();
        let total = glued_total_length(&space);
        let top = replay.values()[19];
        assert!(
            (total - top).abs() < 1e-9 * top,
            "total {total} vs chain top {top}"
        );
    }

    #[test]
    fn multi_edge_seeds_cut_into_matching_pieces() {
        let fitness = FitnessSequence::constant(3.0, 8).unwrap();
        let seeds = SeedSequence::Repeat(SeedGraph::line(3).unwrap());
        let space = line_breaking(&fitness, &seeds, 8, &mut rng(5)).unwrap();
        for (address, block) in space.decoration().blocks() {
            let edges = block.edges().unwrap();
            // 3 seed edges plus one extra per glued child.
            let children = space.theta().out_degree(address).unwrap() as usize;
            assert_eq!(edges.len(), 3 + children);
        }
    }

    #[test]
    fn length_point_distance_is_within_the_space_diameter_bound() {
        let fitness = FitnessSequence::constant(1.0, 12).unwrap();
        let seeds = SeedSequence::Repeat(SeedGraph::single_edge());
        let mut r = rng(6);
        let space = line_breaking(&fitness, &seeds, 12, &mut r).unwrap();
        let total = glued_total_length(&space);
        for _ in 0..20 {
            let d = root_to_length_point_distance(&space, &mut r).unwrap();
            assert!(d >= 0.0 && d <= total + 1e-12);
        }
    }
}
