//! Rooted metric blocks: the pieces a decoration assigns to tree vertices.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::GlueError;

/// Relative slack for triangle-inequality validation: float sums on
/// legitimately metric data can violate the inequality by a few ulps.
pub const TRIANGLE_SLACK: f64 = 1e-9;

/// Construction request for [`make_block`]: either an edge-weighted graph
/// (distances are shortest paths) or an explicit distance matrix.
#[derive(Debug, Clone)]
pub enum BlockSpec {
    Graph {
        points: usize,
        root: usize,
        /// Attach points x_1, x_2, ...; indices past the end of the list
        /// resolve to the root.
        attach: Vec<usize>,
        /// Optional nonnegative mass per point.
        masses: Option<Vec<f64>>,
        /// Undirected edges (i, j, weight), weight >= 0.
        edges: Vec<(usize, usize, f64)>,
    },
    Matrix {
        root: usize,
        attach: Vec<usize>,
        masses: Option<Vec<f64>>,
        /// Full square distance matrix, row by row.
        rows: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone)]
enum Metric {
    Graph {
        points: usize,
        edges: Vec<(usize, usize, f64)>,
        /// Flattened all-pairs shortest-path table, filled on first query.
        table: OnceLock<Vec<f64>>,
    },
    Matrix { points: usize, entries: Vec<f64> },
}

/// A rooted compact metric block with ordered attach points and optional
/// point masses. Graph-backed blocks compute their distance table lazily and
/// cache it; the cache is safe to fill under concurrent queries.
#[derive(Debug, Clone)]
pub struct Block {
    metric: Metric,
    root: usize,
    attach: Vec<usize>,
    masses: Option<Vec<f64>>,
    diameter: OnceLock<f64>,
}

/// Validates a block specification and builds the block.
pub fn make_block(spec: BlockSpec) -> Result<Block, GlueError> {
    match spec {
        BlockSpec::Graph {
            points,
            root,
            attach,
            masses,
            edges,
        } => {
            if points == 0 {
                return Err(GlueError::BadIndex {
                    what: "point count",
                    index: 0,
                    points: 0,
                });
            }
            for &(i, j, w) in &edges {
                if i >= points || j >= points {
                    return Err(GlueError::BadIndex {
                        what: "edge endpoint",
                        index: i.max(j),
                        points,
                    });
                }
                if !(w >= 0.0) || !w.is_finite() {
                    return Err(GlueError::BadValue {
                        what: "edge weight",
                        value: w,
                    });
                }
            }
            let block = Block {
                metric: Metric::Graph {
                    points,
                    edges,
                    table: OnceLock::new(),
                },
                root,
                attach,
                masses,
                diameter: OnceLock::new(),
            };
            block.validate_indices()?;
            block.check_connected()?;
            Ok(block)
        }
        BlockSpec::Matrix {
            root,
            attach,
            masses,
            rows,
        } => {
            let points = rows.len();
            if points == 0 {
                return Err(GlueError::BadIndex {
                    what: "point count",
                    index: 0,
                    points: 0,
                });
            }
            let mut entries = Vec::with_capacity(points * points);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != points {
                    return Err(GlueError::BadIndex {
                        what: "matrix row length",
                        index: i,
                        points,
                    });
                }
                for &d in row {
                    if !(d >= 0.0) || !d.is_finite() {
                        return Err(GlueError::BadValue {
                            what: "matrix entry",
                            value: d,
                        });
                    }
                    entries.push(d);
                }
            }
            for i in 0..points {
                if entries[i * points + i] != 0.0 {
                    return Err(GlueError::NonzeroDiagonal { i });
                }
                for j in (i + 1)..points {
                    if entries[i * points + j] != entries[j * points + i] {
                        return Err(GlueError::AsymmetricMatrix { i, j });
                    }
                }
            }
            for b in 0..points {
                for a in 0..points {
                    let dab = entries[a * points + b];
                    for c in 0..points {
                        let direct = entries[a * points + c];
                        let via = dab + entries[b * points + c];
                        let scale = direct.max(via).max(1.0);
                        if direct > via + TRIANGLE_SLACK * scale {
                            return Err(GlueError::TriangleViolation {
                                a,
                                b,
                                c,
                                excess: direct - via,
                            });
                        }
                    }
                }
            }
            let block = Block {
                metric: Metric::Matrix { points, entries },
                root,
                attach,
                masses,
                diameter: OnceLock::new(),
            };
            block.validate_indices()?;
            Ok(block)
        }
    }
}

impl Block {
    /// The one-point block: the value a decoration takes off its support.
    pub fn trivial() -> Block {
        make_block(BlockSpec::Graph {
            points: 1,
            root: 0,
            attach: Vec::new(),
            masses: None,
            edges: Vec::new(),
        })
        .expect("the one-point block is valid")
    }

    /// A path of consecutive edge weights, rooted at point 0, with the far
    /// end as the single attach point. Convenient for segment-shaped blocks.
    pub fn segment(weights: &[f64]) -> Result<Block, GlueError> {
        let points = weights.len() + 1;
        let edges = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (i, i + 1, w))
            .collect();
        make_block(BlockSpec::Graph {
            points,
            root: 0,
            attach: vec![points - 1],
            masses: None,
            edges,
        })
    }

    fn validate_indices(&self) -> Result<(), GlueError> {
        let points = self.points();
        if self.root >= points {
            return Err(GlueError::BadIndex {
                what: "root",
                index: self.root,
                points,
            });
        }
        for &a in &self.attach {
            if a >= points {
                return Err(GlueError::BadIndex {
                    what: "attach point",
                    index: a,
                    points,
                });
            }
        }
        if let Some(masses) = &self.masses {
            if masses.len() != points {
                return Err(GlueError::BadIndex {
                    what: "mass list length",
                    index: masses.len(),
                    points,
                });
            }
            for &m in masses {
                if !(m >= 0.0) || !m.is_finite() {
                    return Err(GlueError::BadValue {
                        what: "point mass",
                        value: m,
                    });
                }
            }
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<(), GlueError> {
        // Plain reachability; does not force the lazy distance table.
        let points = self.points();
        let Metric::Graph { edges, .. } = &self.metric else {
            return Ok(());
        };
        let mut adjacency = vec![Vec::new(); points];
        for &(i, j, _) in edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        let mut seen = vec![false; points];
        let mut queue = vec![self.root];
        seen[self.root] = true;
        while let Some(v) = queue.pop() {
            for &u in &adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push(u);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(unreached) => Err(GlueError::Disconnected { unreached }),
            None => Ok(()),
        }
    }

    pub fn points(&self) -> usize {
        match &self.metric {
            Metric::Graph { points, .. } => *points,
            Metric::Matrix { points, .. } => *points,
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// The i-th attach point (i >= 1); indices beyond the stored list
    /// resolve to the root.
    pub fn attach_point(&self, i: u32) -> usize {
        debug_assert!(i >= 1, "attach indices count from 1");
        self.attach
            .get(i as usize - 1)
            .copied()
            .unwrap_or(self.root)
    }

    pub fn attach_list(&self) -> &[usize] {
        &self.attach
    }

    pub fn masses(&self) -> Option<&[f64]> {
        self.masses.as_deref()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses
            .as_ref()
            .map(|m| m.iter().sum())
            .unwrap_or(0.0)
    }

    /// Whether this block is indistinguishable from the one-point block with
    /// no mass.
    pub fn is_trivial(&self) -> bool {
        self.points() == 1 && self.total_mass() == 0.0
    }

    fn table(&self) -> &[f64] {
        match &self.metric {
            Metric::Matrix { entries, .. } => entries,
            Metric::Graph {
                points,
                edges,
                table,
            } => table.get_or_init(|| all_pairs_shortest_paths(*points, edges)),
        }
    }

    /// Distance between two points of the block.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let points = self.points();
        assert!(i < points && j < points, "point index out of range");
        self.table()[i * points + j]
    }

    /// Largest pairwise distance in the block.
    pub fn diameter(&self) -> f64 {
        *self.diameter.get_or_init(|| {
            self.table()
                .iter()
                .copied()
                .fold(0.0f64, |acc, d| acc.max(d))
        })
    }

    /// The same block with every distance multiplied by `factor`. Exact for
    /// power-of-two factors.
    pub fn rescale(&self, factor: f64) -> Result<Block, GlueError> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(GlueError::BadValue {
                what: "rescale factor",
                value: factor,
            });
        }
        let metric = match &self.metric {
            Metric::Graph { points, edges, .. } => Metric::Graph {
                points: *points,
                edges: edges
                    .iter()
                    .map(|&(i, j, w)| (i, j, w * factor))
                    .collect(),
                table: OnceLock::new(),
            },
            Metric::Matrix { points, entries } => Metric::Matrix {
                points: *points,
                entries: entries.iter().map(|&d| d * factor).collect(),
            },
        };
        Ok(Block {
            metric,
            root: self.root,
            attach: self.attach.clone(),
            masses: self.masses.clone(),
            diameter: OnceLock::new(),
        })
    }

    /// Edges of a graph-backed block, or None for matrix blocks.
    pub fn edges(&self) -> Option<&[(usize, usize, f64)]> {
        match &self.metric {
            Metric::Graph { edges, .. } => Some(edges),
            Metric::Matrix { .. } => None,
        }
    }

    /// Rows of the distance matrix (computing it for graph blocks).
    pub fn matrix_rows(&self) -> Vec<Vec<f64>> {
        let points = self.points();
        let table = self.table();
        (0..points)
            .map(|i| table[i * points..(i + 1) * points].to_vec())
            .collect()
    }

    pub fn is_graph(&self) -> bool {
        matches!(self.metric, Metric::Graph { .. })
    }
}

#[derive(PartialEq)]
struct HeapEntry(f64, usize);

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed so the BinaryHeap pops the smallest tentative distance.
        other.0.total_cmp(&self.0)
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn all_pairs_shortest_paths(points: usize, edges: &[(usize, usize, f64)]) -> Vec<f64> {
    let mut adjacency = vec![Vec::new(); points];
    for &(i, j, w) in edges {
        adjacency[i].push((j, w));
        adjacency[j].push((i, w));
    }
    let mut table = vec![f64::INFINITY; points * points];
    let mut heap = BinaryHeap::new();
    for source in 0..points {
        let dist = &mut table[source * points..(source + 1) * points];
        heap.clear();
        dist[source] = 0.0;
        heap.push(HeapEntry(0.0, source));
        while let Some(HeapEntry(d, v)) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(u, w) in &adjacency[v] {
                let candidate = d + w;
                if candidate < dist[u] {
                    dist[u] = candidate;
                    heap.push(HeapEntry(candidate, u));
                }
            }
        }
    }
    table
}
