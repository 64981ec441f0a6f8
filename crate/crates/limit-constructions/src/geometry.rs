//! Exact geometry for continuum block samples.
//!
//! A sampled block lives on one of three supports: a metric graph (segments
//! joined at junctions), a single rooted circle, or a string of circles
//! ordered along (0,1) whose root is the accumulation point below every
//! circle. Pairwise distances are evaluated analytically on the support, and
//! the matrix handed to the block validator is filled from these values, so
//! the block metric realizes the declared geometry by construction.

use rand::Rng;

use crate::error::LimitError;

/// Location of a point on a [`Structure`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Site {
    /// A junction vertex of a metric graph.
    Junction(usize),
    /// A point on segment `segment`, at `offset` from its first endpoint.
    OnSegment { segment: usize, offset: f64 },
    /// A point on circle `circle`, at arc length `arc` from the circle root.
    OnCircle { circle: usize, arc: f64 },
    /// The accumulation point below every circle of a circle string.
    StringRoot,
}

/// One circle of a circle string: its circumference, its position in (0,1)
/// along the string order, and the arc coordinate of the exit point through
/// which paths continue toward circles at larger positions. Paths toward
/// smaller positions leave through the circle root at arc 0.
#[derive(Debug, Clone, Copy)]
pub struct CircleOnString {
    pub circumference: f64,
    pub position: f64,
    pub exit_arc: f64,
}

impl CircleOnString {
    /// Arc distance from the circle root to the exit point.
    pub fn chord(&self) -> f64 {
        arc_distance(self.circumference, 0.0, self.exit_arc)
    }
}

/// Analytic support of a sampled block.
#[derive(Debug, Clone)]
pub enum Structure {
    /// Segments with positive lengths joined at junction vertices.
    Graph {
        junctions: usize,
        segments: Vec<(usize, usize, f64)>,
    },
    /// A single circle rooted at arc 0.
    Circle { circumference: f64 },
    /// Circles strung along (0,1); travel between two circles crosses the
    /// root-to-exit chord of every circle strictly between them.
    CircleString { circles: Vec<CircleOnString> },
}

impl Structure {
    /// Total length of the one-dimensional support (segment lengths, or the
    /// sum of circumferences; the string root carries no length).
    pub fn total_length(&self) -> f64 {
        match self {
            Structure::Graph { segments, .. } => segments.iter().map(|&(_, _, l)| l).sum(),
            Structure::Circle { circumference } => *circumference,
            Structure::CircleString { circles } => {
                circles.iter().map(|c| c.circumference).sum()
            }
        }
    }

    /// Builds the distance engine for this support.
    pub fn engine(&self) -> Result<DistanceEngine<'_>, LimitError> {
        let kind = match self {
            Structure::Graph {
                junctions,
                segments,
            } => build_graph_engine(*junctions, segments)?,
            Structure::Circle { circumference } => {
                if !(circumference > &0.0) || !circumference.is_finite() {
                    return Err(LimitError::Parameter {
                        name: "circumference",
                        value: *circumference,
                        constraint: "positive and finite",
                    });
                }
                EngineKind::SingleCircle
            }
            Structure::CircleString { circles } => build_string_engine(circles)?,
        };
        Ok(DistanceEngine {
            structure: self,
            kind,
        })
    }
}

/// Precomputed shortest-path data for a [`Structure`].
#[derive(Debug)]
pub struct DistanceEngine<'a> {
    structure: &'a Structure,
    kind: EngineKind,
}

#[derive(Debug)]
enum EngineKind {
    /// Dense junction-to-junction table, row-major.
    Table { dim: usize, entries: Vec<f64> },
    /// The graph is a tree rooted at junction 0: distances come from
    /// weighted depths and nearest common ancestors.
    Tree {
        parent: Vec<usize>,
        depth: Vec<u32>,
        weighted_depth: Vec<f64>,
    },
    SingleCircle,
    /// Circles sorted by position with prefix sums of their chords.
    String {
        rank: Vec<usize>,
        chord_prefix: Vec<f64>,
    },
}

fn build_graph_engine(
    junctions: usize,
    segments: &[(usize, usize, f64)],
) -> Result<EngineKind, LimitError> {
    if junctions == 0 {
        return Err(LimitError::Geometry {
            detail: "metric graph needs at least one junction",
        });
    }
    for &(a, b, len) in segments {
        if a >= junctions || b >= junctions {
            return Err(LimitError::Geometry {
                detail: "segment endpoint outside junction range",
            });
        }
        if !(len >= 0.0) || !len.is_finite() {
            return Err(LimitError::Geometry {
                detail: "segment length must be finite and nonnegative",
            });
        }
    }
    let is_tree = segments.len() + 1 == junctions
        && segments.iter().all(|&(a, b, _)| a != b);
    if is_tree {
        if let Some(engine) = try_tree_engine(junctions, segments) {
            return Ok(engine);
        }
    }
    // Dense all-pairs fallback for small multigraphs (seed graphs).
    if junctions > 4096 {
        return Err(LimitError::Geometry {
            detail: "junction table too large for a non-tree metric graph",
        });
    }
    let dim = junctions;
    let inf = f64::INFINITY;
    let mut entries = vec![inf; dim * dim];
    for v in 0..dim {
        entries[v * dim + v] = 0.0;
    }
    for &(a, b, len) in segments {
        let slot = &mut entries[a * dim + b];
        if len < *slot {
            *slot = len;
        }
        let slot = &mut entries[b * dim + a];
        if len < *slot {
            *slot = len;
        }
    }
    for k in 0..dim {
        for i in 0..dim {
            let dik = entries[i * dim + k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..dim {
                let through = dik + entries[k * dim + j];
                if through < entries[i * dim + j] {
                    entries[i * dim + j] = through;
                }
            }
        }
    }
    if entries.iter().any(|d| !d.is_finite()) {
        return Err(LimitError::Geometry {
            detail: "metric graph is disconnected",
        });
    }
    Ok(EngineKind::Table { dim, entries })
}

fn try_tree_engine(junctions: usize, segments: &[(usize, usize, f64)]) -> Option<EngineKind> {
    let mut adjacency = vec![Vec::new(); junctions];
    for &(a, b, len) in segments {
        adjacency[a].push((b, len));
        adjacency[b].push((a, len));
    }
    let mut parent = vec![usize::MAX; junctions];
    let mut depth = vec![0u32; junctions];
    let mut weighted_depth = vec![0.0f64; junctions];
    let mut stack = vec![0usize];
    parent[0] = 0;
    let mut seen = 1usize;
    while let Some(v) = stack.pop() {
        for &(w, len) in &adjacency[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                depth[w] = depth[v] + 1;
                weighted_depth[w] = weighted_depth[v] + len;
                seen += 1;
                stack.push(w);
            }
        }
    }
    if seen != junctions {
        return None;
    }
    Some(EngineKind::Tree {
        parent,
        depth,
        weighted_depth,
    })
}

fn build_string_engine(circles: &[CircleOnString]) -> Result<EngineKind, LimitError> {
    for c in circles {
        if !(c.circumference > 0.0) || !c.circumference.is_finite() {
            return Err(LimitError::Geometry {
                detail: "circle circumference must be positive and finite",
            });
        }
        if !(c.position > 0.0 && c.position < 1.0) {
            return Err(LimitError::Geometry {
                detail: "circle position must lie strictly inside (0,1)",
            });
        }
        if !(c.exit_arc >= 0.0 && c.exit_arc <= c.circumference) {
            return Err(LimitError::Geometry {
                detail: "circle exit arc must lie within the circumference",
            });
        }
    }
    let mut order: Vec<usize> = (0..circles.len()).collect();
    order.sort_by(|&i, &j| circles[i].position.total_cmp(&circles[j].position));
    let mut rank = vec![0usize; circles.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let mut chord_prefix = Vec::with_capacity(circles.len() + 1);
    chord_prefix.push(0.0);
    let mut acc = 0.0;
    for &i in &order {
        acc += circles[i].chord();
        chord_prefix.push(acc);
    }
    Ok(EngineKind::String { rank, chord_prefix })
}

/// Arc-metric distance between two arc coordinates on a circle.
pub fn arc_distance(circumference: f64, a: f64, b: f64) -> f64 {
    let gap = (a - b).abs();
    gap.min(circumference - gap)
}

impl DistanceEngine<'_> {
    /// Exact distance between two sites on the support.
    pub fn distance(&self, a: &Site, b: &Site) -> Result<f64, LimitError> {
        match (&self.kind, self.structure) {
            (EngineKind::Table { .. } | EngineKind::Tree { .. }, Structure::Graph { segments, .. }) => {
                self.graph_distance(segments, a, b)
            }
            (EngineKind::SingleCircle, Structure::Circle { circumference }) => {
                let x = single_circle_arc(a, *circumference)?;
                let y = single_circle_arc(b, *circumference)?;
                Ok(arc_distance(*circumference, x, y))
            }
            (EngineKind::String { rank, chord_prefix }, Structure::CircleString { circles }) => {
                string_distance(circles, rank, chord_prefix, a, b)
            }
            _ => Err(LimitError::Geometry {
                detail: "distance engine does not match the structure",
            }),
        }
    }

    fn junction_distance(&self, u: usize, v: usize) -> f64 {
        match &self.kind {
            EngineKind::Table { dim, entries } => entries[u * dim + v],
            EngineKind::Tree {
                parent,
                depth,
                weighted_depth,
            } => {
                let (mut x, mut y) = (u, v);
                let (mut dx, mut dy) = (weighted_depth[x], weighted_depth[y]);
                while depth[x] > depth[y] {
                    x = parent[x];
                }
                while depth[y] > depth[x] {
                    y = parent[y];
                }
                while x != y {
                    x = parent[x];
                    y = parent[y];
                }
                let meet = weighted_depth[x];
                dx -= meet;
                dy -= meet;
                dx + dy
            }
            _ => unreachable!("junction distance on a non-graph engine"),
        }
    }

    fn graph_distance(
        &self,
        segments: &[(usize, usize, f64)],
        a: &Site,
        b: &Site,
    ) -> Result<f64, LimitError> {
        let exits_a = graph_exits(segments, a)?;
        let exits_b = graph_exits(segments, b)?;
        let mut best = f64::INFINITY;
        if let (
            Site::OnSegment { segment: sa, offset: oa },
            Site::OnSegment { segment: sb, offset: ob },
        ) = (a, b)
        {
            if sa == sb {
                best = (oa - ob).abs();
            }
        }
        for &(u, cu) in exits_a.iter().flatten() {
            for &(v, cv) in exits_b.iter().flatten() {
                let candidate = cu + self.junction_distance(u, v) + cv;
                if candidate < best {
                    best = candidate;
                }
            }
        }
        Ok(best)
    }
}

/// The ways a site can reach the junction skeleton: at most two (junction,
/// cost) pairs.
fn graph_exits(
    segments: &[(usize, usize, f64)],
    site: &Site,
) -> Result<[Option<(usize, f64)>; 2], LimitError> {
    match site {
        Site::Junction(j) => Ok([Some((*j, 0.0)), None]),
        Site::OnSegment { segment, offset } => {
            let &(a, b, len) = segments.get(*segment).ok_or(LimitError::Geometry {
                detail: "site references a segment outside the structure",
            })?;
            if !(*offset >= 0.0 && *offset <= len) {
                return Err(LimitError::Geometry {
                    detail: "segment offset outside the segment length",
                });
            }
            Ok([Some((a, *offset)), Some((b, len - offset))])
        }
        _ => Err(LimitError::Geometry {
            detail: "circle site on a metric graph",
        }),
    }
}

fn single_circle_arc(site: &Site, circumference: f64) -> Result<f64, LimitError> {
    match site {
        Site::OnCircle { circle: 0, arc } if *arc >= 0.0 && *arc <= circumference => Ok(*arc),
        _ => Err(LimitError::Geometry {
            detail: "site is not an arc position on the single circle",
        }),
    }
}

fn string_distance(
    circles: &[CircleOnString],
    rank: &[usize],
    chord_prefix: &[f64],
    a: &Site,
    b: &Site,
) -> Result<f64, LimitError> {
    let locate = |site: &Site| -> Result<Option<(usize, f64)>, LimitError> {
        match site {
            Site::StringRoot => Ok(None),
            Site::OnCircle { circle, arc } => {
                let c = circles.get(*circle).ok_or(LimitError::Geometry {
                    detail: "site references a circle outside the string",
                })?;
                if !(*arc >= 0.0 && *arc <= c.circumference) {
                    return Err(LimitError::Geometry {
                        detail: "arc position outside the circle circumference",
                    });
                }
                Ok(Some((*circle, *arc)))
            }
            _ => Err(LimitError::Geometry {
                detail: "graph site on a circle string",
            }),
        }
    };
    let pa = locate(a)?;
    let pb = locate(b)?;
    match (pa, pb) {
        (None, None) => Ok(0.0),
        (None, Some((j, arc))) | (Some((j, arc)), None) => {
            let up_to = chord_prefix[rank[j]];
            Ok(up_to + arc_distance(circles[j].circumference, 0.0, arc))
        }
        (Some((i, x)), Some((j, y))) => {
            if i == j {
                return Ok(arc_distance(circles[i].circumference, x, y));
            }
            let ((lo, xlo), (hi, yhi)) = if rank[i] < rank[j] {
                ((i, x), (j, y))
            } else {
                ((j, y), (i, x))
            };
            let exit_leg = arc_distance(circles[lo].circumference, xlo, circles[lo].exit_arc);
            let between = chord_prefix[rank[hi]] - chord_prefix[rank[lo] + 1];
            let entry_leg = arc_distance(circles[hi].circumference, 0.0, yhi);
            Ok(exit_leg + between + entry_leg)
        }
    }
}

/// Samples a site uniformly under the length measure of a segment list.
pub(crate) fn sample_length_site<R: Rng + ?Sized>(
    segments: &[(usize, usize, f64)],
    rng: &mut R,
) -> Site {
    let total: f64 = segments.iter().map(|&(_, _, l)| l).sum();
    let mut target = rng.random::<f64>() * total;
    let mut chosen = segments.len() - 1;
    for (idx, &(_, _, len)) in segments.iter().enumerate() {
        if target < len {
            chosen = idx;
            break;
        }
        target -= len;
    }
    let len = segments[chosen].2;
    Site::OnSegment {
        segment: chosen,
        offset: rng.random::<f64>() * len,
    }
}
