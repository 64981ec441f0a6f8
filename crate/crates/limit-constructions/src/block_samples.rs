//! Continuum blocks over a seed graph: the Dirichlet edge-length block, the
//! stable-looking block with heavy-vertex atoms and a Poisson-Dirichlet atom
//! cloud on the skeleton, and the length-biased variant whose measure mixes
//! vertex atoms with the length measure.

use rand::Rng;

use distributions::{
    diversity_estimate, sample_dirichlet, sample_gem_to_residual, DirichletParams,
    DiversityOptions,
};
use growth_models::SeedGraph;

use crate::block_sample::{assemble, LimitBlockSample, Provenance};
use crate::error::LimitError;
use crate::geometry::{sample_length_site, Site, Structure};

/// Residual stick mass at which stick sequences stop extending.
pub const STICK_RESIDUAL: f64 = 1e-6;

/// Hard cap on materialized sticks regardless of residual.
pub const STICK_CAP: usize = 100_000;

fn check_alpha(alpha: f64) -> Result<(), LimitError> {
    if !(alpha > 1.0 && alpha < 2.0) || !alpha.is_finite() {
        return Err(LimitError::Parameter {
            name: "alpha",
            value: alpha,
            constraint: "1 < alpha < 2",
        });
    }
    Ok(())
}

fn seed_segments(seed: &SeedGraph, lengths: &[f64]) -> Vec<(usize, usize, f64)> {
    seed.graph()
        .edge_list()
        .into_iter()
        .zip(lengths)
        .map(|((a, b), &len)| (a, b, len))
        .collect()
}

/// Junction landmarks other than the root, appended after the distinguished
/// points so the matrix witnesses the full skeleton.
fn junction_landmarks(junctions: usize, root: usize) -> impl Iterator<Item = Site> {
    (0..junctions).filter(move |&v| v != root).map(Site::Junction)
}

/// Draws one point from a measure with the given atoms plus a length-measure
/// part of mass `diffuse` on `segments`.
fn sample_measure_point<R: Rng + ?Sized>(
    atoms: &[(Site, f64)],
    segments: &[(usize, usize, f64)],
    diffuse: f64,
    rng: &mut R,
) -> Site {
    let atom_total: f64 = atoms.iter().map(|&(_, m)| m).sum();
    let mut u = rng.random::<f64>() * (atom_total + diffuse);
    for &(site, mass) in atoms {
        if u < mass {
            return site;
        }
        u -= mass;
    }
    if diffuse > 0.0 && !segments.is_empty() {
        sample_length_site(segments, rng)
    } else {
        // Rounding pushed the draw past every atom: return the last one.
        atoms
            .last()
            .map(|&(site, _)| site)
            .expect("measure with neither atoms nor a diffuse part")
    }
}

/// Samples the uniform-edge-splitting limit block of a seed graph: edge
/// lengths are Dirichlet(1,...,1) over the seed edges (total length 1), and
/// the distinguished points are i.i.d. under the length measure.
pub fn sample_block_cg<R: Rng + ?Sized>(
    seed: &SeedGraph,
    n_points: usize,
    rng: &mut R,
) -> Result<LimitBlockSample, LimitError> {
    let edge_count = seed.edge_count();
    let params = DirichletParams::new(vec![1.0; edge_count])?;
    let lengths = sample_dirichlet(&params, rng);
    let segments = seed_segments(seed, &lengths);
    let junctions = seed.graph().vertex_count();
    let mut sites = Vec::with_capacity(1 + n_points + junctions);
    sites.push(Site::Junction(seed.root()));
    for _ in 0..n_points {
        sites.push(sample_length_site(&segments, rng));
    }
    sites.extend(junction_landmarks(junctions, seed.root()));
    let structure = Structure::Graph {
        junctions,
        segments,
    };
    let provenance = Provenance::new("block_cg")
        .with_param("edges", edge_count as f64)
        .with_param("n_points", n_points as f64);
    assemble(structure, sites, n_points, Vec::new(), 1.0, 1.0, provenance)
}

/// Samples the heavy-tailed continuum block of a seed graph: a Dirichlet
/// split of mass between the skeleton and the vertices of degree at least 3,
/// skeleton length `W_E^(alpha-1) * S` with S the diversity of a
/// Poisson-Dirichlet atom cloud placed uniformly on the skeleton, and
/// distinguished points i.i.d. from the purely atomic measure.
pub fn sample_block_calpha<R: Rng + ?Sized>(
    seed: &SeedGraph,
    alpha: f64,
    n_points: usize,
    n_sticks: usize,
    rng: &mut R,
) -> Result<LimitBlockSample, LimitError> {
    check_alpha(alpha)?;
    if seed.edge_count() == 0 {
        return Err(LimitError::Input {
            what: "seed graph",
            detail: "needs at least one edge".to_owned(),
        });
    }
    if n_sticks < 100 {
        return Err(LimitError::Resolution {
            what: "atom stick count",
            detail: format!("n_sticks = {n_sticks}, diversity needs at least 100"),
        });
    }
    let graph = seed.graph();
    let edge_count = seed.edge_count();
    let heavy: Vec<usize> = (0..graph.vertex_count())
        .filter(|&v| graph.degree(v) >= 3)
        .collect();
    let mut weights = Vec::with_capacity(1 + heavy.len());
    weights.push(edge_count as f64 * (alpha - 1.0));
    for &v in &heavy {
        weights.push(graph.degree(v) as f64 - 1.0 - alpha);
    }
    let split = sample_dirichlet(&DirichletParams::new(weights)?, rng);
    let w_skeleton = split[0];

    let sticks = sample_gem_to_residual(
        alpha - 1.0,
        edge_count as f64 * (alpha - 1.0),
        STICK_RESIDUAL,
        n_sticks,
        rng,
    )?;
    let diversity = diversity_estimate(&sticks, DiversityOptions::default())?;
    let total_len = w_skeleton.powf(alpha - 1.0) * diversity;

    let unit_split = sample_dirichlet(&DirichletParams::new(vec![1.0; edge_count])?, rng);
    let lengths: Vec<f64> = unit_split.iter().map(|&u| u * total_len).collect();
    let segments = seed_segments(seed, &lengths);

    let mut ranked: Vec<f64> = sticks.fractions().to_vec();
    ranked.sort_by(|a, b| b.total_cmp(a));
    let mut atoms: Vec<(Site, f64)> = heavy
        .iter()
        .zip(&split[1..])
        .map(|(&v, &mass)| (Site::Junction(v), mass))
        .collect();
    for &q in &ranked {
        atoms.push((sample_length_site(&segments, rng), w_skeleton * q));
    }

    let junctions = graph.vertex_count();
    let mut sites = Vec::with_capacity(1 + n_points + junctions);
    sites.push(Site::Junction(seed.root()));
    for _ in 0..n_points {
        sites.push(sample_measure_point(&atoms, &segments, 0.0, rng));
    }
    sites.extend(junction_landmarks(junctions, seed.root()));

    let structure = Structure::Graph {
        junctions,
        segments,
    };
    let mut provenance = Provenance::new("block_calpha")
        .with_param("alpha", alpha)
        .with_param("edges", edge_count as f64)
        .with_param("heavy_vertices", heavy.len() as f64)
        .with_param("n_points", n_points as f64);
    provenance.resolution = Some(n_sticks as u64);
    provenance.residual_stick_mass = sticks.residual();
    assemble(structure, sites, n_points, atoms, 0.0, total_len, provenance)
}

/// Seed argument of [`sample_block_clen`]: either a full seed graph or the
/// rooted-edge special case (one segment with an extra atom at the root).
#[derive(Debug, Clone, Copy)]
pub enum ClenSeed<'a> {
    Graph(&'a SeedGraph),
    RootedEdge,
}

/// Samples the length-calibrated continuum block: a single Dirichlet vector
/// assigns lengths to the seed edges and masses to the vertices of degree at
/// least 3, and the distinguished points are i.i.d. from the measure mixing
/// those vertex atoms with the length measure (total mass exactly 1). The
/// rooted-edge variant puts Dirichlet(1, (2-alpha)/(alpha-1)) mass on one
/// segment and an atom at its root.
pub fn sample_block_clen<R: Rng + ?Sized>(
    seed: ClenSeed<'_>,
    alpha: f64,
    n_points: usize,
    rng: &mut R,
) -> Result<LimitBlockSample, LimitError> {
    check_alpha(alpha)?;
    match seed {
        ClenSeed::RootedEdge => {
            let params =
                DirichletParams::new(vec![1.0, (2.0 - alpha) / (alpha - 1.0)])?;
            let split = sample_dirichlet(&params, rng);
            let (edge_len, root_mass) = (split[0], split[1]);
            let segments = vec![(0usize, 1usize, edge_len)];
            let atoms = vec![(Site::Junction(0), root_mass)];
            let mut sites = Vec::with_capacity(2 + n_points);
            sites.push(Site::Junction(0));
            for _ in 0..n_points {
                sites.push(sample_measure_point(&atoms, &segments, edge_len, rng));
            }
            sites.push(Site::Junction(1));
            let structure = Structure::Graph {
                junctions: 2,
                segments,
            };
            let provenance = Provenance::new("block_clen_rooted_edge")
                .with_param("alpha", alpha)
                .with_param("n_points", n_points as f64);
            assemble(structure, sites, n_points, atoms, edge_len, 1.0, provenance)
        }
        ClenSeed::Graph(seed) => {
            let graph = seed.graph();
            let edge_count = seed.edge_count();
            let heavy: Vec<usize> = (0..graph.vertex_count())
                .filter(|&v| graph.degree(v) >= 3)
                .collect();
            let mut weights = vec![1.0; edge_count];
            for &v in &heavy {
                weights.push((graph.degree(v) as f64 - 1.0 - alpha) / (alpha - 1.0));
            }
            let split = sample_dirichlet(&DirichletParams::new(weights)?, rng);
            let lengths = &split[..edge_count];
            let segments = seed_segments(seed, lengths);
            let diffuse: f64 = lengths.iter().sum();
            let atoms: Vec<(Site, f64)> = heavy
                .iter()
                .zip(&split[edge_count..])
                .map(|(&v, &mass)| (Site::Junction(v), mass))
                .collect();
            let junctions = graph.vertex_count();
            let mut sites = Vec::with_capacity(1 + n_points + junctions);
            sites.push(Site::Junction(seed.root()));
            for _ in 0..n_points {
                sites.push(sample_measure_point(&atoms, &segments, diffuse, rng));
            }
            sites.extend(junction_landmarks(junctions, seed.root()));
            let structure = Structure::Graph {
                junctions,
                segments,
            };
            let provenance = Provenance::new("block_clen")
                .with_param("alpha", alpha)
                .with_param("edges", edge_count as f64)
                .with_param("heavy_vertices", heavy.len() as f64)
                .with_param("n_points", n_points as f64);
            assemble(structure, sites, n_points, atoms, diffuse, 1.0, provenance)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use growth_models::MultiGraph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn cg_total_length_is_one() {
        let seed = SeedGraph::line(3).unwrap();
        let sample = sample_block_cg(&seed, 5, &mut rng(1)).unwrap();
        assert!((sample.structure().total_length() - 1.0).abs() < 1e-12);
        assert_eq!(sample.n_points(), 5);
        assert_eq!(sample.block().points(), 1 + 5 + 3);
    }

    #[test]
    fn cg_single_edge_distances_match_offsets() {
        let seed = SeedGraph::single_edge();
        let sample = sample_block_cg(&seed, 3, &mut rng(2)).unwrap();
        for (i, site) in sample.sites().iter().enumerate() {
            if let Site::OnSegment { offset, .. } = site {
                assert!((sample.block().distance(0, i) - offset).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn calpha_rejects_alpha_outside_range() {
        let seed = SeedGraph::single_edge();
        assert!(sample_block_calpha(&seed, 2.0, 1, 500, &mut rng(3)).is_err());
        assert!(sample_block_calpha(&seed, 1.0, 1, 500, &mut rng(3)).is_err());
    }

    #[test]
    fn calpha_single_edge_has_unit_skeleton_weight() {
        let seed = SeedGraph::single_edge();
        let sample = sample_block_calpha(&seed, 1.5, 4, 500, &mut rng(4)).unwrap();
        // One-coordinate Dirichlet forces W_E = 1, so every atom is a stick
        // atom and the masses sum to 1 - residual.
        let atom_total: f64 = sample.atoms().iter().map(|&(_, m)| m).sum();
        let residual = sample.provenance().residual_stick_mass;
        assert!((atom_total + residual - 1.0).abs() < 1e-9);
        assert_eq!(sample.diffuse_mass(), 0.0);
    }

    #[test]
    fn calpha_star_seed_carries_center_atom() {
        let mut graph = MultiGraph::new();
        let hub = graph.add_vertex();
        for _ in 0..3 {
            let leaf = graph.add_vertex();
            graph.add_edge(hub, leaf);
        }
        let seed = SeedGraph::new(graph, hub).unwrap();
        let sample = sample_block_calpha(&seed, 1.5, 2, 500, &mut rng(5)).unwrap();
        assert!(sample
            .atoms()
            .iter()
            .any(|&(site, mass)| site == Site::Junction(hub) && mass > 0.0));
    }

    #[test]
    fn clen_rooted_edge_masses_sum_to_one() {
        let sample =
            sample_block_clen(ClenSeed::RootedEdge, 1.5, 3, &mut rng(6)).unwrap();
        let atom_total: f64 = sample.atoms().iter().map(|&(_, m)| m).sum();
        assert!((atom_total + sample.diffuse_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clen_single_edge_is_unit_uniform() {
        let seed = SeedGraph::single_edge();
        let sample =
            sample_block_clen(ClenSeed::Graph(&seed), 1.5, 3, &mut rng(7)).unwrap();
        // No heavy vertices: the whole Dirichlet mass is the one edge length.
        assert!((sample.structure().total_length() - 1.0).abs() < 1e-12);
        assert!(sample.atoms().is_empty());
        assert!((sample.diffuse_mass() - 1.0).abs() < 1e-12);
    }
}
