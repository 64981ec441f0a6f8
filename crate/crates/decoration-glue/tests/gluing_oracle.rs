//! Checks the glued distance against an independent oracle: fuse the whole
//! decoration into a single weighted graph (child roots identified with
//! parent attach points by union-find) and run Dijkstra on it. With dyadic
//! edge weights both computations are exact, so they must agree bit for bit.

mod common;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use decoration_glue::{GluedSpace, PointHandle};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}

/// The fused graph: one node per point class after identification, adjacency
/// from every block edge, plus the class of each point handle.
struct FusedGraph {
    class_of: HashMap<PointHandle, usize>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

fn fuse(space: &GluedSpace) -> FusedGraph {
    let handles = space.handles();
    let index: HashMap<PointHandle, usize> = handles
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, h)| (h, i))
        .collect();
    let mut uf = UnionFind::new(handles.len());
    for v in space.theta().vertices() {
        if let Some(parent) = v.parent() {
            let child_block = space.block_at(v);
            let parent_block = space.block_at(&parent);
            let child_root = index[&PointHandle::new(v.clone(), child_block.root())];
            let site = parent_block.attach_point(v.last_letter().unwrap());
            let parent_site = index[&PointHandle::new(parent.clone(), site)];
            uf.union(child_root, parent_site);
        }
    }
    let mut adjacency = vec![Vec::new(); handles.len()];
    for v in space.theta().vertices() {
        let block = space.block_at(v);
        let edges = block.edges().expect("oracle fixtures use graph blocks");
        for &(i, j, w) in edges {
            let a = uf.find(index[&PointHandle::new(v.clone(), i)]);
            let b = uf.find(index[&PointHandle::new(v.clone(), j)]);
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }
    }
    let class_of = handles
        .iter()
        .map(|h| (h.clone(), uf.find(index[h])))
        .collect();
    FusedGraph {
        class_of,
        adjacency,
    }
}

#[derive(PartialEq)]
struct HeapKey(f64, usize);

impl Eq for HeapKey {}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

fn dijkstra(adjacency: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adjacency.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(HeapKey(0.0, source)));
    while let Some(Reverse(HeapKey(d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adjacency[u] {
            let next = d + w;
            if next < dist[v] {
                dist[v] = next;
                heap.push(Reverse(HeapKey(next, v)));
            }
        }
    }
    dist
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Every glued distance equals the fused-graph shortest path exactly,
    /// and distance zero happens exactly between identified points.
    #[test]
    fn glued_distance_matches_fused_graph(seed in 0u64..1 << 40, blocks in 1usize..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dec = common::random_decoration(&mut rng, blocks, 6);
        let space = GluedSpace::full(Arc::new(dec));
        let fused = fuse(&space);
        let handles = space.handles();
        prop_assert!(handles.len() <= 1000);
        for (si, source) in handles.iter().enumerate() {
            if si % 3 != 0 {
                continue;
            }
            let from = dijkstra(&fused.adjacency, fused.class_of[source]);
            for target in &handles {
                let expected = from[fused.class_of[target]];
                let got = space.distance(source, target).unwrap();
                prop_assert_eq!(
                    got,
                    expected,
                    "{:?} -> {:?}",
                    source,
                    target
                );
                let identified = fused.class_of[source] == fused.class_of[target];
                prop_assert_eq!(got == 0.0, identified);
            }
        }
    }

    /// Pseudometric axioms hold exactly on dyadic-weight decorations.
    #[test]
    fn glued_distance_is_a_pseudometric(seed in 0u64..1 << 40, blocks in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dec = common::random_decoration(&mut rng, blocks, 5);
        let space = GluedSpace::full(Arc::new(dec));
        let handles = space.handles();
        let step = (handles.len() / 12).max(1);
        let sample: Vec<_> = handles.iter().step_by(step).collect();
        for p in &sample {
            prop_assert_eq!(space.distance(p, p).unwrap(), 0.0);
            for q in &sample {
                let pq = space.distance(p, q).unwrap();
                prop_assert_eq!(pq, space.distance(q, p).unwrap());
                prop_assert!(pq >= 0.0);
                for r in &sample {
                    let pr = space.distance(p, r).unwrap();
                    let qr = space.distance(q, r).unwrap();
                    prop_assert!(
                        pr <= pq + qr,
                        "triangle violated: {} > {} + {}",
                        pr,
                        pq,
                        qr
                    );
                }
            }
        }
    }
}
