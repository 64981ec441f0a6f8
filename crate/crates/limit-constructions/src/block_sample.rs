//! Sampled continuum blocks: a validated matrix block together with the
//! analytic support it was sampled on, the sampling measure data, the
//! scaling applied, and a provenance record.
//!
//! Matrix layout convention: point 0 is the block root, points 1..=n_points
//! are the distinguished points in order (the attach list maps child letter
//! i to point i), and any further points are support landmarks (far segment
//! endpoints, circle antipodes, seed junctions) kept so that the stored
//! matrix witnesses the true diameter of the support.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use decoration_glue::{load_decoration, make_block, save_decoration, Block, BlockSpec, Decoration};
use serde::{Deserialize, Serialize};
use ulam_core::UlamAddress;

use crate::error::LimitError;
use crate::geometry::{Site, Structure};

/// Where a block sample came from: sampler name, numeric parameters, the
/// seed when the caller pinned one, the resolution knob when the sampler has
/// one, and the stick mass left unmaterialized by truncation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Provenance {
    pub sampler: String,
    pub params: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub resolution: Option<u64>,
    pub residual_stick_mass: f64,
    /// True when the block is an approximation by design (finite-resolution
    /// discrete run) rather than an exact draw up to stick truncation.
    pub approximate: bool,
}

impl Provenance {
    pub fn new(sampler: &str) -> Self {
        Provenance {
            sampler: sampler.to_owned(),
            params: BTreeMap::new(),
            seed: None,
            resolution: None,
            residual_stick_mass: 0.0,
            approximate: false,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }
}

/// A sampled continuum block: validated metric matrix plus its support.
#[derive(Debug, Clone)]
pub struct LimitBlockSample {
    block: Block,
    structure: Structure,
    sites: Vec<Site>,
    n_points: usize,
    atoms: Vec<(Site, f64)>,
    diffuse_mass: f64,
    scale: f64,
    provenance: Provenance,
}

impl LimitBlockSample {
    /// The validated block; matrix kind, rooted at point 0, with the attach
    /// list pointing at the distinguished points.
    pub fn block(&self) -> &Block {
        &self.block
    }

    /// The analytic support the block was sampled on.
    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// Site of each matrix point, aligned with the block's point indices.
    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// Number of distinguished points (matrix points 1..=n_points).
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Atoms of the sampling measure behind the distinguished points, when
    /// the construction defines one: (site, mass) pairs.
    pub fn atoms(&self) -> &[(Site, f64)] {
        &self.atoms
    }

    /// Mass of the length-measure part of the sampling measure; zero when
    /// the measure is purely atomic or when no measure is declared.
    pub fn diffuse_mass(&self) -> f64 {
        self.diffuse_mass
    }

    /// Scaling factor applied to the support when the block was built.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Records the seed a pipeline used to drive the sampler.
    pub fn set_seed(&mut self, seed: u64) {
        self.provenance.seed = Some(seed);
    }

    /// Distances from the root to each distinguished point.
    pub fn root_point_distances(&self) -> Vec<f64> {
        (1..=self.n_points)
            .map(|i| self.block.distance(0, i))
            .collect()
    }
}

/// Builds a sample by evaluating all pairwise site distances on the support
/// and validating the resulting matrix.
pub(crate) fn assemble(
    structure: Structure,
    sites: Vec<Site>,
    n_points: usize,
    atoms: Vec<(Site, f64)>,
    diffuse_mass: f64,
    scale: f64,
    provenance: Provenance,
) -> Result<LimitBlockSample, LimitError> {
    let engine = structure.engine()?;
    let dim = sites.len();
    let mut rows = vec![vec![0.0f64; dim]; dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let d = engine.distance(&sites[i], &sites[j])?;
            rows[i][j] = d;
            rows[j][i] = d;
        }
    }
    assemble_from_rows(structure, sites, rows, n_points, atoms, diffuse_mass, scale, provenance)
}

/// Same as [`assemble`] but with the distance rows supplied by the caller
/// (used when the sampler has a faster exact evaluation than pairwise engine
/// queries). The matrix still goes through full block validation.
#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble_from_rows(
    structure: Structure,
    sites: Vec<Site>,
    rows: Vec<Vec<f64>>,
    n_points: usize,
    atoms: Vec<(Site, f64)>,
    diffuse_mass: f64,
    scale: f64,
    provenance: Provenance,
) -> Result<LimitBlockSample, LimitError> {
    debug_assert_eq!(sites.len(), rows.len());
    debug_assert!(n_points < sites.len().max(1) + 1);
    let attach = (1..=n_points).collect();
    let block = make_block(BlockSpec::Matrix {
        root: 0,
        attach,
        masses: None,
        rows,
    })?;
    Ok(LimitBlockSample {
        block,
        structure,
        sites,
        n_points,
        atoms,
        diffuse_mass,
        scale,
        provenance,
    })
}

/// Everything the provenance sidecar stores alongside the block body.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SampleManifest {
    pub provenance: Provenance,
    pub scale: f64,
    pub n_points: usize,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".provenance.json");
    path.with_file_name(name)
}

/// Writes the block in the decoration block format (a single-block
/// decoration, matrix kind) and the provenance record as a JSON sidecar next
/// to it.
pub fn save_block_sample(
    sample: &LimitBlockSample,
    path: impl AsRef<Path>,
) -> Result<(), LimitError> {
    let path = path.as_ref();
    save_decoration(&Decoration::single(sample.block().clone()), path)?;
    let manifest = SampleManifest {
        provenance: sample.provenance().clone(),
        scale: sample.scale(),
        n_points: sample.n_points(),
    };
    let file = File::create(sidecar_path(path))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &manifest)?;
    Ok(())
}

/// Reads back a saved block body and its provenance sidecar. The analytic
/// support is an in-memory aid and is not serialized, so the result is the
/// validated block plus the manifest rather than a full sample.
pub fn load_block_sample(path: impl AsRef<Path>) -> Result<(Block, SampleManifest), LimitError> {
    let path = path.as_ref();
    let decoration = load_decoration(path)?;
    let block = decoration
        .block(&UlamAddress::root())
        .ok_or(LimitError::Input {
            what: "block sample file",
            detail: "no block at the root address".to_owned(),
        })?
        .clone();
    let file = File::open(sidecar_path(path))?;
    let manifest: SampleManifest = serde_json::from_reader(BufReader::new(file))?;
    Ok((block, manifest))
}
