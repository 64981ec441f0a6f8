//! Approximate Brownian block: a uniform binary tree grown by repeated
//! uniform edge splitting, with distances rescaled by the square root of the
//! leaf count. The approximation quality is controlled by the resolution
//! parameter and is always flagged in the provenance.

use rand::Rng;

use crate::block_sample::{assemble_from_rows, LimitBlockSample, Provenance};
use crate::error::LimitError;
use crate::geometry::{Site, Structure};

/// Leaves kept as matrix points; further leaves remain in the support
/// structure only. Matrix validation is cubic in the point count, so the cap
/// keeps large-resolution samples buildable while the kept prefix stays an
/// unbiased exchangeable subset.
pub const BROWNIAN_MATRIX_CAP: usize = 512;

struct RemyTree {
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    leaves: Vec<usize>,
}

impl RemyTree {
    fn new() -> Self {
        RemyTree {
            parent: vec![usize::MAX, 0],
            children: vec![vec![1], Vec::new()],
            leaves: vec![1],
        }
    }

    fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// Splits the edge above a uniform non-root vertex with a new midpoint
    /// and hangs a fresh leaf from it. Returns (midpoint, leaf).
    fn split_uniform_edge<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (usize, usize) {
        let u = rng.random_range(1..self.vertex_count());
        let p = self.parent[u];
        let mid = self.parent.len();
        let slot = self.children[p]
            .iter()
            .position(|&c| c == u)
            .expect("child listed under its parent");
        self.children[p][slot] = mid;
        self.parent.push(p);
        self.children.push(vec![u]);
        self.parent[u] = mid;
        let leaf = self.parent.len();
        self.parent.push(mid);
        self.children.push(Vec::new());
        self.children[mid].push(leaf);
        self.leaves.push(leaf);
        (mid, leaf)
    }

    fn grow<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut tree = RemyTree::new();
        while tree.leaves.len() < m {
            tree.split_uniform_edge(rng);
        }
        tree
    }

    /// Edge-count distances from `source` to every vertex.
    fn bfs_distances(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v] + 1;
            let p = self.parent[v];
            if p != usize::MAX && dist[p] == u32::MAX {
                dist[p] = d;
                queue.push_back(p);
            }
            for &c in &self.children[v] {
                if dist[c] == u32::MAX {
                    dist[c] = d;
                    queue.push_back(c);
                }
            }
        }
        dist
    }
}

fn check_resolution(m: usize) -> Result<(), LimitError> {
    if m == 0 {
        return Err(LimitError::Resolution {
            what: "leaf count",
            detail: "the approximation needs at least one leaf".to_owned(),
        });
    }
    Ok(())
}

/// Samples an approximate Brownian block: a uniform edge-splitting tree with
/// `m` leaves, every edge carrying length m^(-1/2), rooted at the original
/// root, with the leaves in creation order as distinguished points (capped
/// at [`BROWNIAN_MATRIX_CAP`] matrix points).
pub fn brownian_block_approx<R: Rng + ?Sized>(
    m: usize,
    rng: &mut R,
) -> Result<LimitBlockSample, LimitError> {
    check_resolution(m)?;
    let tree = RemyTree::grow(m, rng);
    let scale = (m as f64).powf(-0.5);
    let kept = m.min(BROWNIAN_MATRIX_CAP);

    let mut vertex_of_point = Vec::with_capacity(1 + kept);
    vertex_of_point.push(0usize);
    vertex_of_point.extend(tree.leaves.iter().take(kept).copied());

    let dim = vertex_of_point.len();
    let mut rows = vec![vec![0.0f64; dim]; dim];
    for i in 0..dim {
        let dist = tree.bfs_distances(vertex_of_point[i]);
        for j in (i + 1)..dim {
            let d = dist[vertex_of_point[j]] as f64 * scale;
            rows[i][j] = d;
            rows[j][i] = d;
        }
    }

    let segments: Vec<(usize, usize, f64)> = (1..tree.vertex_count())
        .map(|v| (tree.parent[v], v, scale))
        .collect();
    let structure = Structure::Graph {
        junctions: tree.vertex_count(),
        segments,
    };
    let sites: Vec<Site> = vertex_of_point.iter().map(|&v| Site::Junction(v)).collect();

    let mut provenance = Provenance::new("block_brownian")
        .with_param("m", m as f64)
        .with_param("n_points", kept as f64);
    provenance.approximate = true;
    provenance.resolution = Some(m as u64);
    assemble_from_rows(
        structure,
        sites,
        rows,
        kept,
        Vec::new(),
        0.0,
        scale,
        provenance,
    )
}

/// Root-to-leaf distances (creation order, all `m` leaves) of one
/// approximate Brownian block run, already rescaled by m^(-1/2).
pub fn remy_root_distances<R: Rng + ?Sized>(
    m: usize,
    rng: &mut R,
) -> Result<Vec<f64>, LimitError> {
    check_resolution(m)?;
    let tree = RemyTree::grow(m, rng);
    let scale = (m as f64).powf(-0.5);
    let dist = tree.bfs_distances(0);
    Ok(tree
        .leaves
        .iter()
        .map(|&leaf| dist[leaf] as f64 * scale)
        .collect())
}

/// Runs the edge-splitting dynamics to `m` leaves and returns the running
/// supremum of height / sqrt(leaf count), the quantity whose limit law has a
/// square-exponential upper tail.
pub fn remy_height_sup<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<f64, LimitError> {
    check_resolution(m)?;
    let mut tree = RemyTree::new();
    let mut depth: Vec<u32> = vec![0, 1];
    let mut height = 1u32;
    let mut sup = 1.0f64;
    while tree.leaves.len() < m {
        let (mid, leaf) = tree.split_uniform_edge(rng);
        let u = tree.children[mid][0];
        depth.push(depth[u]);
        depth.push(depth[u] + 1);
        debug_assert_eq!(depth.len(), tree.vertex_count());
        // The split pushes u and its whole subtree one level down.
        let mut stack = vec![u];
        while let Some(v) = stack.pop() {
            depth[v] += 1;
            height = height.max(depth[v]);
            stack.extend(tree.children[v].iter().copied());
        }
        height = height.max(depth[leaf]);
        sup = sup.max(height as f64 / (tree.leaves.len() as f64).sqrt());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn one_leaf_is_a_unit_edge() {
        let sample = brownian_block_approx(1, &mut rng(1)).unwrap();
        assert_eq!(sample.n_points(), 1);
        assert_eq!(sample.block().points(), 2);
        assert_eq!(sample.block().distance(0, 1), 1.0);
        assert!(sample.provenance().approximate);
    }

    #[test]
    fn zero_resolution_is_rejected() {
        assert!(matches!(
            brownian_block_approx(0, &mut rng(2)),
            Err(LimitError::Resolution { .. })
        ));
    }

    #[test]
    fn counts_and_scale_match_resolution() {
        let sample = brownian_block_approx(40, &mut rng(3)).unwrap();
        assert_eq!(sample.n_points(), 40);
        assert_eq!(sample.block().points(), 41);
        match sample.structure() {
            Structure::Graph {
                junctions,
                segments,
            } => {
                assert_eq!(*junctions, 80);
                assert_eq!(segments.len(), 79);
            }
            _ => panic!("graph support expected"),
        }
        assert!((sample.scale() - (40.0f64).powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn matrix_cap_limits_points_but_not_support() {
        let m = BROWNIAN_MATRIX_CAP + 100;
        let sample = brownian_block_approx(m, &mut rng(4)).unwrap();
        assert_eq!(sample.n_points(), BROWNIAN_MATRIX_CAP);
        match sample.structure() {
            Structure::Graph { junctions, .. } => assert_eq!(*junctions, 2 * m),
            _ => panic!("graph support expected"),
        }
    }

    #[test]
    fn height_tracking_matches_bfs() {
        for seed in 0..5 {
            let mut r = rng(100 + seed);
            let sup = remy_height_sup(64, &mut r).unwrap();
            // The sup is at least the final height over sqrt(64).
            let mut r2 = rng(100 + seed);
            let mut tree = RemyTree::new();
            while tree.leaves.len() < 64 {
                tree.split_uniform_edge(&mut r2);
            }
            let final_height = *tree.bfs_distances(0).iter().max().unwrap();
            assert!(sup >= final_height as f64 / 8.0 - 1e-12);
        }
    }

    #[test]
    fn root_distance_vector_covers_every_leaf() {
        let d = remy_root_distances(200, &mut rng(5)).unwrap();
        assert_eq!(d.len(), 200);
        assert!(d.iter().all(|&x| x > 0.0));
    }
}
