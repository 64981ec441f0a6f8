//! A multigraph with stable vertex and edge ids, self-loop and parallel-edge
//! support, and a rotation system (cyclic half-edge order around each
//! vertex). Splitting an edge keeps the id on one half so callers can track
//! element identity through subdivisions.

use crate::GrowthError;

/// One end of an edge: `end` is 0 or 1, matching the slot in `endpoints`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MultiGraph {
    rotations: Vec<Vec<HalfEdge>>,
    endpoints: Vec<[usize; 2]>,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A path of `edges` unit edges: vertices 0..=edges in order.
    pub fn path(edges: usize) -> Self {
        let mut g = Self::new();
        let mut prev = g.add_vertex();
        for _ in 0..edges {
            let next = g.add_vertex();
            g.add_edge(prev, next);
            prev = next;
        }
        g
    }

    /// A cycle of `len` >= 1 edges on `len` vertices (len 1 is a self-loop).
    pub fn cycle(len: usize) -> Self {
        let mut g = Self::new();
        let first = g.add_vertex();
        let mut prev = first;
        for _ in 1..len {
            let next = g.add_vertex();
            g.add_edge(prev, next);
            prev = next;
        }
        g.add_edge(prev, first);
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.rotations.push(Vec::new());
        self.rotations.len() - 1
    }

    /// Adds an edge, appending its half-edges at the end of both rotations.
    pub fn add_edge(&mut self, a: usize, b: usize) -> usize {
        let edge = self.endpoints.len();
        self.endpoints.push([a, b]);
        self.rotations[a].push(HalfEdge { edge, end: 0 });
        self.rotations[b].push(HalfEdge { edge, end: 1 });
        edge
    }

    /// Adds the edge (a, b) with the a-side half-edge inserted in the corner
    /// after position `corner` of a's rotation (corners are indexed
    /// 0..degree(a), and the corner after the last half-edge is the same as
    /// the one before the first). The b side is appended.
    pub fn add_edge_at_corner(&mut self, a: usize, corner: usize, b: usize) -> usize {
        let edge = self.endpoints.len();
        self.endpoints.push([a, b]);
        let deg = self.rotations[a].len();
        let at = if deg == 0 { 0 } else { corner % deg + 1 };
        self.rotations[a].insert(at, HalfEdge { edge, end: 0 });
        self.rotations[b].push(HalfEdge { edge, end: 1 });
        edge
    }

    /// Subdivides an edge: (a, b) becomes (a, mid) keeping the edge id, plus
    /// a fresh edge (mid, b). The b side keeps its cyclic position. Returns
    /// (mid, new edge id).
    pub fn split_edge(&mut self, edge: usize) -> (usize, usize) {
        let [a, b] = self.endpoints[edge];
        let mid = self.add_vertex();
        self.endpoints[edge] = [a, mid];
        let new_edge = self.endpoints.len();
        self.endpoints.push([mid, b]);
        // b's half of the old edge becomes its half of the new edge, in
        // place. For a self-loop (a == b) only the end-1 entry moves.
        let slot = self.rotations[b]
            .iter_mut()
            .find(|h| h.edge == edge && h.end == 1)
            .expect("edge end missing from rotation");
        *slot = HalfEdge {
            edge: new_edge,
            end: 1,
        };
        self.rotations[mid].push(HalfEdge { edge, end: 1 });
        self.rotations[mid].push(HalfEdge {
            edge: new_edge,
            end: 0,
        });
        (mid, new_edge)
    }

    pub fn endpoints(&self, edge: usize) -> [usize; 2] {
        self.endpoints[edge]
    }

    /// Total degree; self-loops count twice.
    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn rotation(&self, v: usize) -> &[HalfEdge] {
        &self.rotations[v]
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        self.endpoints[h.edge][h.end]
    }

    pub fn opposite(&self, h: HalfEdge) -> usize {
        self.endpoints[h.edge][1 - h.end]
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.endpoints.iter().map(|&[a, b]| (a, b)).collect()
    }

    /// Unit-length distances from a source; usize::MAX marks unreachable.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[source] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for h in &self.rotations[u] {
                let v = self.opposite(*h);
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        self.bfs_distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// Snapshot of the rotation system, validated.
    pub fn embedding(&self) -> PlanarEmbedding {
        PlanarEmbedding {
            rotations: self.rotations.clone(),
        }
    }
}

/// Cyclic corner order around every vertex; one corner per half-edge.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarEmbedding {
    pub rotations: Vec<Vec<HalfEdge>>,
}

impl PlanarEmbedding {
    /// Every half-edge of the graph appears exactly once, at the right
    /// vertex, so corner counts equal degrees.
    pub fn validate(&self, graph: &MultiGraph) -> Result<(), GrowthError> {
        if self.rotations.len() != graph.vertex_count() {
            return Err(GrowthError::Internal {
                reason: "embedding vertex count mismatch".to_owned(),
            });
        }
        let mut seen = vec![[false; 2]; graph.edge_count()];
        for (v, rotation) in self.rotations.iter().enumerate() {
            for h in rotation {
                if h.edge >= graph.edge_count() || h.end > 1 {
                    return Err(GrowthError::Internal {
                        reason: format!("embedding references missing half-edge {h:?}"),
                    });
                }
                if graph.endpoints(h.edge)[h.end] != v {
                    return Err(GrowthError::Internal {
                        reason: format!("half-edge {h:?} listed at the wrong vertex {v}"),
                    });
                }
                if seen[h.edge][h.end] {
                    return Err(GrowthError::Internal {
                        reason: format!("half-edge {h:?} appears twice"),
                    });
                }
                seen[h.edge][h.end] = true;
            }
        }
        for (edge, ends) in seen.iter().enumerate() {
            if !ends[0] || !ends[1] {
                return Err(GrowthError::Internal {
                    reason: format!("edge {edge} missing from the embedding"),
                });
            }
        }
        Ok(())
    }
}
