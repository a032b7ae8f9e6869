//! Seeded random core-tree generation for property tests and benchmarks.
//!
//! The generator only produces valid trees: unmarked interior vertices get
//! exactly two children (degree 3 with the parent), marked vertices degree
//! 1..=3, and exhausted budgets close every pending slot with a leaf or a
//! continuation.

use crate::tree::{CoreTree, Vertex, VertexId, VertexKind};

/// Minimal xorshift generator so callers do not need an RNG dependency.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 {
            state: seed.wrapping_add(0x9e37_79b9_7f4a_7c15),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RandomTreeConfig {
    /// Upper bound on the vertex count.
    pub max_vertices: u32,
    /// Per-mille probability that a slot becomes a leaf.
    pub leaf_per_mille: u64,
    /// Per-mille probability that a slot becomes a continuation.
    pub continuation_per_mille: u64,
    /// Per-mille probability that a slot becomes a marked vertex.
    pub marked_per_mille: u64,
}

impl Default for RandomTreeConfig {
    fn default() -> RandomTreeConfig {
        RandomTreeConfig {
            max_vertices: 10_000,
            leaf_per_mille: 330,
            continuation_per_mille: 80,
            marked_per_mille: 40,
        }
    }
}

/// Generate a random valid core tree with size distributed log-uniformly in
/// [8, max_vertices].
pub fn random_tree(rng: &mut SplitMix64, config: &RandomTreeConfig) -> CoreTree {
    let max = config.max_vertices.max(8);
    // log-uniform size target
    let lo = (8f64).ln();
    let hi = (max as f64).ln();
    let t = (rng.next_u64() as f64 / u64::MAX as f64) * (hi - lo) + lo;
    let budget = t.exp() as u32;

    let mut vertices: Vec<Vertex> = Vec::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();

    // Root: marked with 1..=3 branches, or unmarked with 3.
    let root_marked = rng.chance(config.marked_per_mille, 1000);
    let root = VertexId(0);
    vertices.push(Vertex {
        id: root,
        marked: root_marked,
        kind: VertexKind::Interior,
    });
    let branches = if root_marked {
        1 + rng.below(3) as usize
    } else {
        3
    };

    let mut pending: Vec<VertexId> = vec![root; branches];
    while let Some(parent) = pending.pop() {
        let used = vertices.len() as u32 + pending.len() as u32;
        let roll = rng.below(1000);
        let (kind, marked, children) = if used >= budget {
            // Out of budget: close with continuations so subtrees near the
            // root stay "infinite" for the surgery semantics.
            (VertexKind::Continuation, false, 0)
        } else if roll < config.leaf_per_mille {
            (VertexKind::Leaf, false, 0)
        } else if roll < config.leaf_per_mille + config.continuation_per_mille {
            (VertexKind::Continuation, false, 0)
        } else if roll
            < config.leaf_per_mille + config.continuation_per_mille + config.marked_per_mille
        {
            (VertexKind::Interior, true, rng.below(3) as usize)
        } else {
            (VertexKind::Interior, false, 2)
        };
        let id = VertexId(vertices.len() as u32);
        vertices.push(Vertex { id, marked, kind });
        edges.push((parent, id));
        pending.extend((0..children).map(|_| id));
    }

    CoreTree::from_parts(root, vertices, edges).expect("generator output is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::validate;

    #[test]
    fn generated_trees_are_valid() {
        let mut rng = SplitMix64::new(7);
        let config = RandomTreeConfig {
            max_vertices: 500,
            ..Default::default()
        };
        for _ in 0..200 {
            let t = random_tree(&mut rng, &config);
            let report = validate(&t);
            assert!(report.is_clean(), "{report}");
            assert!(t.vertex_count() <= 4 * 500); // slots may exceed budget slightly
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let config = RandomTreeConfig::default();
        let a = random_tree(&mut SplitMix64::new(42), &config);
        let b = random_tree(&mut SplitMix64::new(42), &config);
        assert_eq!(a, b);
    }
}
