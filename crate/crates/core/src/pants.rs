//! From core trees to pants decompositions: unmarked degree-3 vertices become
//! pairs of pants, marked vertices become torus blocks with a pinned internal
//! decomposition, tree edges become cuffs, leaves become punctures, and
//! continuation vertices leave open slots at the truncation frontier.
//!
//! The module also computes the exhaustion by finite subsurfaces: slice 1 is
//! either the two pieces sharing the distinguished cuff `E1` (genus-0 case)
//! or the torus-block region at the root (positive-genus case), and every
//! later slice adds the pieces glued along the previous frontier.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::tree::{validate, CoreTree, VertexId, VertexKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PieceId(pub u32);

impl fmt::Display for PieceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CuffId(pub u32);

impl fmt::Display for CuffId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// A boundary slot on a piece. Pants have slots 0..3. A torus block with b
/// boundaries exposes external slots 0..b and uses slots b..3b for its
/// internal pants decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SlotRef {
    pub piece: PieceId,
    pub slot: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    /// A pair of pants with 0, 1 or 2 of its three ends punctured.
    Pants { punctures: u8 },
    /// A genus-one block with 1, 2 or 3 boundary circles, internally
    /// decomposed into `boundaries` pants joined by `boundaries` cuffs in a
    /// cycle (a self-gluing when there is a single pants).
    TorusBlock { boundaries: u8 },
}

impl PieceKind {
    /// Number of pants this piece contributes (torus blocks count their
    /// internal pants).
    pub fn pants_count(&self) -> u32 {
        match self {
            PieceKind::Pants { .. } => 1,
            PieceKind::TorusBlock { boundaries } => u32::from(*boundaries),
        }
    }

    pub fn slot_count(&self) -> u32 {
        3 * self.pants_count()
    }

    pub fn genus(&self) -> u32 {
        match self {
            PieceKind::Pants { .. } => 0,
            PieceKind::TorusBlock { .. } => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub id: PieceId,
    pub kind: PieceKind,
    /// The tree vertex this piece replaced.
    pub source: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CuffSource {
    TreeEdge(VertexId, VertexId),
    Internal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cuff {
    pub id: CuffId,
    pub a: SlotRef,
    pub b: SlotRef,
    pub source: CuffSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PantsComplex {
    pub pieces: BTreeMap<PieceId, Piece>,
    pub cuffs: BTreeMap<CuffId, Cuff>,
    pub punctures: Vec<SlotRef>,
    /// Slots facing un-expanded continuations: the truncation frontier.
    pub open_slots: Vec<SlotRef>,
    pub root_piece: PieceId,
    /// The distinguished first labeled cuff, when one exists.
    pub e1: Option<CuffId>,
    pub piece_of_vertex: BTreeMap<VertexId, PieceId>,
    /// Whether the generating tree keeps producing punctured pants forever;
    /// custom trees default to a finite supply.
    pub type1_supply: crate::tree::Type1Supply,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum PantsError {
    #[error("tree violates core-tree invariants: {0}")]
    InvalidTree(String),
    #[error("truncation too shallow: {0}")]
    TooShallow(String),
    #[error("pants piece at {0} would carry three punctures")]
    TriplePuncture(VertexId),
    #[error("exhaustion slice index must be >= 1")]
    BadSliceIndex,
    #[error("no eligible first cuff: every root edge meets a leaf or lies in the marked region")]
    NoFirstCuff,
    #[error("marked vertices outside the root component are not supported by the exhaustion")]
    MarkedOutsideRoot,
}

impl PantsComplex {
    pub fn piece(&self, id: PieceId) -> &Piece {
        &self.pieces[&id]
    }

    pub fn cuff(&self, id: CuffId) -> &Cuff {
        &self.cuffs[&id]
    }

    pub fn puncture_count(&self, piece: PieceId) -> u32 {
        self.punctures.iter().filter(|s| s.piece == piece).count() as u32
    }

    pub fn open_slot_count(&self, piece: PieceId) -> u32 {
        self.open_slots.iter().filter(|s| s.piece == piece).count() as u32
    }

    /// Cuffs incident to a piece (self-glued internal cuffs appear once).
    pub fn cuffs_of(&self, piece: PieceId) -> Vec<CuffId> {
        self.cuffs
            .values()
            .filter(|c| c.a.piece == piece || c.b.piece == piece)
            .map(|c| c.id)
            .collect()
    }

    /// Piece-to-cuff incidence, built once for traversals over big complexes.
    pub fn cuff_incidence(&self) -> BTreeMap<PieceId, Vec<CuffId>> {
        let mut index: BTreeMap<PieceId, Vec<CuffId>> = BTreeMap::new();
        for cuff in self.cuffs.values() {
            index.entry(cuff.a.piece).or_default().push(cuff.id);
            if cuff.b.piece != cuff.a.piece {
                index.entry(cuff.b.piece).or_default().push(cuff.id);
            }
        }
        index
    }

    /// Pieces that still touch the truncation frontier.
    pub fn pieces_with_open_slots(&self) -> BTreeSet<PieceId> {
        self.open_slots.iter().map(|s| s.piece).collect()
    }

    pub fn torus_blocks(&self) -> impl Iterator<Item = &Piece> {
        self.pieces
            .values()
            .filter(|p| matches!(p.kind, PieceKind::TorusBlock { .. }))
    }

    /// Pants pieces with exactly one puncture.
    pub fn type1_pieces(&self) -> Vec<PieceId> {
        self.pieces
            .values()
            .filter(|p| matches!(p.kind, PieceKind::Pants { punctures: 1 }))
            .map(|p| p.id)
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Build
// ---------------------------------------------------------------------------

/// Replace vertices by pieces, edges by cuffs, leaves by punctures.
pub fn build(tree: &CoreTree) -> Result<PantsComplex, PantsError> {
    let report = validate(tree);
    if !report.is_clean() {
        return Err(PantsError::InvalidTree(report.to_string()));
    }

    let is_piece_vertex = |id: VertexId| {
        let v = tree.vertex(id).expect("vertex exists");
        v.kind == VertexKind::Interior
    };

    let mut complex = PantsComplex {
        pieces: BTreeMap::new(),
        cuffs: BTreeMap::new(),
        punctures: Vec::new(),
        open_slots: Vec::new(),
        root_piece: PieceId(0),
        e1: None,
        piece_of_vertex: BTreeMap::new(),
        type1_supply: tree
            .spec()
            .map(|(s, _)| s.type1_supply())
            .unwrap_or(crate::tree::Type1Supply::Finite),
    };

    // Pieces in BFS order so ids are stable across runs.
    let mut next_piece = 0u32;
    for v in tree.bfs_order() {
        if !is_piece_vertex(v) {
            continue;
        }
        let vx = tree.vertex(v).unwrap();
        let kind = if vx.marked {
            PieceKind::TorusBlock {
                boundaries: tree.degree(v) as u8,
            }
        } else {
            let punctures = tree
                .neighbors(v)
                .iter()
                .filter(|&&w| tree.vertex(w).unwrap().kind == VertexKind::Leaf)
                .count();
            if punctures > 2 {
                return Err(PantsError::TriplePuncture(v));
            }
            PieceKind::Pants {
                punctures: punctures as u8,
            }
        };
        let id = PieceId(next_piece);
        next_piece += 1;
        complex.pieces.insert(
            id,
            Piece {
                id,
                kind,
                source: v,
            },
        );
        complex.piece_of_vertex.insert(v, id);
    }

    if complex.pieces.is_empty() {
        return Err(PantsError::TooShallow(
            "the truncation contains no expanded vertices".into(),
        ));
    }
    complex.root_piece = *complex
        .piece_of_vertex
        .get(&tree.root())
        .expect("valid multi-vertex trees have a piece at the root");

    // External slot of a piece for each tree neighbor, in sorted order.
    let slot_for = |v: VertexId, w: VertexId| -> SlotRef {
        let mut nbrs: Vec<_> = tree.neighbors(v).to_vec();
        nbrs.sort();
        let slot = nbrs.iter().position(|&x| x == w).expect("neighbor") as u32;
        SlotRef {
            piece: complex.piece_of_vertex[&v],
            slot,
        }
    };

    let mut next_cuff = 0u32;
    let mut tree_cuff: BTreeMap<(VertexId, VertexId), CuffId> = BTreeMap::new();
    for (a, b) in tree.edges() {
        match (is_piece_vertex(a), is_piece_vertex(b)) {
            (true, true) => {
                let id = CuffId(next_cuff);
                next_cuff += 1;
                complex.cuffs.insert(
                    id,
                    Cuff {
                        id,
                        a: slot_for(a, b),
                        b: slot_for(b, a),
                        source: CuffSource::TreeEdge(a, b),
                    },
                );
                tree_cuff.insert((a, b), id);
            }
            (true, false) | (false, true) => {
                let (piece_v, other) = if is_piece_vertex(a) { (a, b) } else { (b, a) };
                let slot = slot_for(piece_v, other);
                match tree.vertex(other).unwrap().kind {
                    VertexKind::Leaf => complex.punctures.push(slot),
                    VertexKind::Continuation => complex.open_slots.push(slot),
                    VertexKind::Interior => unreachable!(),
                }
            }
            (false, false) => {
                return Err(PantsError::InvalidTree(format!(
                    "edge ({a},{b}) joins two non-piece vertices"
                )));
            }
        }
    }
    complex.punctures.sort();
    complex.open_slots.sort();

    // Internal decomposition of each torus block: b pants, b cuffs in a
    // cycle (slot layout documented on SlotRef).
    for piece in complex.pieces.clone().values() {
        if let PieceKind::TorusBlock { boundaries: b } = piece.kind {
            let b = u32::from(b);
            let pairs: Vec<(u32, u32)> = match b {
                1 => vec![(1, 2)],
                2 => vec![(2, 4), (3, 5)],
                3 => vec![(4, 5), (6, 7), (8, 3)],
                _ => unreachable!("marked degree validated to 1..=3"),
            };
            for (sa, sb) in pairs {
                let id = CuffId(next_cuff);
                next_cuff += 1;
                complex.cuffs.insert(
                    id,
                    Cuff {
                        id,
                        a: SlotRef {
                            piece: piece.id,
                            slot: sa,
                        },
                        b: SlotRef {
                            piece: piece.id,
                            slot: sb,
                        },
                        source: CuffSource::Internal,
                    },
                );
            }
        }
    }

    complex.e1 = first_cuff(tree, &tree_cuff);
    Ok(complex)
}

/// The first labeled cuff: the least root edge that neither meets a leaf nor
/// lies inside the marked root region.
fn first_cuff(
    tree: &CoreTree,
    tree_cuff: &BTreeMap<(VertexId, VertexId), CuffId>,
) -> Option<CuffId> {
    let root = tree.root();
    let root_marked = tree.vertex(root).map(|v| v.marked).unwrap_or(false);
    let mut nbrs: Vec<_> = tree.neighbors(root).to_vec();
    nbrs.sort();
    for w in nbrs {
        let wx = tree.vertex(w).unwrap();
        if wx.kind != VertexKind::Interior {
            continue;
        }
        if root_marked && wx.marked {
            continue; // stays inside the marked region
        }
        let key = if root < w { (root, w) } else { (w, root) };
        if let Some(&c) = tree_cuff.get(&key) {
            return Some(c);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Exhaustion
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustionSlice {
    pub n: u32,
    pub pieces: BTreeSet<PieceId>,
    pub frontier: BTreeSet<CuffId>,
}

/// Pieces of the marked region at the root (slice 1 in the positive-genus
/// case): torus blocks reachable from the root piece through block-to-block
/// cuffs. Errors if marked pieces exist away from this region.
fn root_marked_region(complex: &PantsComplex) -> Result<BTreeSet<PieceId>, PantsError> {
    let is_block = |p: PieceId| matches!(complex.piece(p).kind, PieceKind::TorusBlock { .. });
    let mut region = BTreeSet::new();
    let mut queue = VecDeque::new();
    if is_block(complex.root_piece) {
        region.insert(complex.root_piece);
        queue.push_back(complex.root_piece);
    }
    while let Some(p) = queue.pop_front() {
        for id in complex.cuffs_of(p) {
            let c = complex.cuff(id);
            for q in [c.a.piece, c.b.piece] {
                if q != p && is_block(q) && region.insert(q) {
                    queue.push_back(q);
                }
            }
        }
    }
    if complex.torus_blocks().any(|p| !region.contains(&p.id)) {
        return Err(PantsError::MarkedOutsideRoot);
    }
    Ok(region)
}

fn frontier_of_indexed(
    complex: &PantsComplex,
    incidence: &BTreeMap<PieceId, Vec<CuffId>>,
    pieces: &BTreeSet<PieceId>,
) -> BTreeSet<CuffId> {
    let mut out = BTreeSet::new();
    for &p in pieces {
        for id in incidence.get(&p).into_iter().flatten() {
            let c = complex.cuff(*id);
            if pieces.contains(&c.a.piece) != pieces.contains(&c.b.piece) {
                out.insert(*id);
            }
        }
    }
    out
}

pub(crate) fn slice_seed(complex: &PantsComplex) -> Result<BTreeSet<PieceId>, PantsError> {
    if complex.torus_blocks().next().is_some() {
        root_marked_region(complex)
    } else {
        let e1 = complex.e1.ok_or(PantsError::NoFirstCuff)?;
        let c = complex.cuff(e1);
        Ok([c.a.piece, c.b.piece].into_iter().collect())
    }
}

/// The n-th subsurface of the exhaustion. Fails loudly if the truncation is
/// too shallow for the requested slice to have geodesic (non-open) frontier.
pub fn exhaustion(complex: &PantsComplex, n: u32) -> Result<ExhaustionSlice, PantsError> {
    if n < 1 {
        return Err(PantsError::BadSliceIndex);
    }
    let mut pieces = slice_seed(complex)?;
    let incidence = complex.cuff_incidence();
    for _ in 1..n {
        let mut next = pieces.clone();
        for &p in &pieces {
            for id in incidence.get(&p).into_iter().flatten() {
                let c = complex.cuff(*id);
                next.insert(c.a.piece);
                next.insert(c.b.piece);
            }
        }
        if next == pieces {
            return Err(PantsError::TooShallow(format!(
                "slice {n} does not grow beyond the available pieces"
            )));
        }
        pieces = next;
    }
    let open = complex.pieces_with_open_slots();
    if let Some(p) = pieces.intersection(&open).next() {
        return Err(PantsError::TooShallow(format!(
            "slice {n} reaches piece {p}, which still has un-expanded slots"
        )));
    }
    let frontier = frontier_of_indexed(complex, &incidence, &pieces);
    Ok(ExhaustionSlice {
        n,
        pieces,
        frontier,
    })
}

/// The slice index at which each piece first appears, without requiring the
/// deeper slices to be fully expanded.
pub fn exhaustion_indices(complex: &PantsComplex) -> Result<BTreeMap<PieceId, u32>, PantsError> {
    let seed = slice_seed(complex)?;
    let incidence = complex.cuff_incidence();
    let mut index: BTreeMap<PieceId, u32> = seed.iter().map(|&p| (p, 1)).collect();
    let mut fresh: Vec<PieceId> = seed.into_iter().collect();
    let mut n = 1;
    while !fresh.is_empty() {
        n += 1;
        let mut next = Vec::new();
        for p in fresh {
            for id in incidence.get(&p).into_iter().flatten() {
                let c = complex.cuff(*id);
                for q in [c.a.piece, c.b.piece] {
                    if let std::collections::btree_map::Entry::Vacant(e) = index.entry(q) {
                        e.insert(n);
                        next.push(q);
                    }
                }
            }
        }
        fresh = next;
    }
    Ok(index)
}

// ---------------------------------------------------------------------------
// Euler characteristic
// ---------------------------------------------------------------------------

/// χ by counting pants: each pants contributes −1, a torus block −b.
pub fn euler_characteristic(complex: &PantsComplex) -> i64 {
    -(complex
        .pieces
        .values()
        .map(|p| i64::from(p.kind.pants_count()))
        .sum::<i64>())
}

/// χ = 2 − 2g − b − p from genus, boundary and puncture counts; the
/// independent route for consistency checks.
pub fn euler_from_topology(complex: &PantsComplex) -> i64 {
    let g = complex.torus_blocks().count() as i64;
    let b = complex.open_slots.len() as i64;
    let p = complex.punctures.len() as i64;
    2 - 2 * g - b - p
}

pub fn slice_euler(complex: &PantsComplex, slice: &ExhaustionSlice) -> i64 {
    -(slice
        .pieces
        .iter()
        .map(|p| i64::from(complex.piece(*p).kind.pants_count()))
        .sum::<i64>())
}

pub fn slice_euler_from_topology(complex: &PantsComplex, slice: &ExhaustionSlice) -> i64 {
    let g = slice
        .pieces
        .iter()
        .filter(|p| matches!(complex.piece(**p).kind, PieceKind::TorusBlock { .. }))
        .count() as i64;
    let b = slice.frontier.len() as i64;
    let p = slice
        .pieces
        .iter()
        .map(|&p| complex.puncture_count(p) as i64)
        .sum::<i64>();
    2 - 2 * g - b - p
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

/// Dual graph in DOT: pieces as nodes, cuffs as edges, punctures as stubs.
pub fn to_dot(complex: &PantsComplex) -> String {
    let mut out = String::from("graph pants {\n");
    for piece in complex.pieces.values() {
        let (shape, label) = match piece.kind {
            PieceKind::Pants { punctures } => ("circle", format!("P{}({})", piece.id.0, punctures)),
            PieceKind::TorusBlock { boundaries } => {
                ("box", format!("T{}({})", piece.id.0, boundaries))
            }
        };
        out.push_str(&format!(
            "  {} [shape={shape}, label=\"{label}\"];\n",
            piece.id
        ));
    }
    for cuff in complex.cuffs.values() {
        let style = match cuff.source {
            CuffSource::Internal => " [style=dotted]",
            CuffSource::TreeEdge(..) => "",
        };
        out.push_str(&format!("  {} -- {}{style};\n", cuff.a.piece, cuff.b.piece));
    }
    for (i, s) in complex.punctures.iter().enumerate() {
        out.push_str(&format!("  q{i} [shape=point];\n  {} -- q{i};\n", s.piece));
    }
    for (i, s) in complex.open_slots.iter().enumerate() {
        out.push_str(&format!(
            "  o{i} [shape=point, style=dashed];\n  {} -- o{i} [style=dashed];\n",
            s.piece
        ));
    }
    out.push_str("}\n");
    out
}

pub fn to_json(complex: &PantsComplex) -> String {
    serde_json::to_string_pretty(complex).expect("complex serializes")
}

pub fn from_json(data: &str) -> Result<PantsComplex, PantsError> {
    serde_json::from_str(data).map_err(|e| PantsError::InvalidTree(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{truncate, CoreTree, TreeSpec, Vertex};

    fn v(id: u32) -> VertexId {
        VertexId(id)
    }

    fn check_slot_conservation(c: &PantsComplex) {
        let slots: u32 = c.pieces.values().map(|p| p.kind.slot_count()).sum();
        let used = 2 * c.cuffs.len() + c.punctures.len() + c.open_slots.len();
        assert_eq!(slots as usize, used, "slot conservation");
    }

    #[test]
    fn root_pants_with_two_leaves_is_type_two() {
        let tree = CoreTree::from_parts(
            v(0),
            vec![
                Vertex {
                    id: v(0),
                    marked: false,
                    kind: VertexKind::Interior,
                },
                Vertex {
                    id: v(1),
                    marked: false,
                    kind: VertexKind::Leaf,
                },
                Vertex {
                    id: v(2),
                    marked: false,
                    kind: VertexKind::Leaf,
                },
                Vertex {
                    id: v(3),
                    marked: false,
                    kind: VertexKind::Continuation,
                },
            ],
            vec![(v(0), v(1)), (v(0), v(2)), (v(0), v(3))],
        )
        .unwrap();
        let complex = build(&tree).unwrap();
        assert_eq!(complex.pieces.len(), 1);
        assert_eq!(
            complex.piece(complex.root_piece).kind,
            PieceKind::Pants { punctures: 2 }
        );
        assert_eq!(complex.open_slots.len(), 1);
        check_slot_conservation(&complex);
    }

    #[test]
    fn marked_degree_one_vertex_becomes_self_glued_block() {
        let tree = CoreTree::from_parts(
            v(0),
            vec![
                Vertex {
                    id: v(0),
                    marked: true,
                    kind: VertexKind::Interior,
                },
                Vertex {
                    id: v(1),
                    marked: false,
                    kind: VertexKind::Continuation,
                },
            ],
            vec![(v(0), v(1))],
        )
        .unwrap();
        let complex = build(&tree).unwrap();
        let block = complex.piece(complex.root_piece);
        assert_eq!(block.kind, PieceKind::TorusBlock { boundaries: 1 });
        let internal: Vec<_> = complex
            .cuffs
            .values()
            .filter(|c| c.source == CuffSource::Internal)
            .collect();
        assert_eq!(internal.len(), 1);
        assert_eq!(internal[0].a.piece, internal[0].b.piece, "self-glued");
        check_slot_conservation(&complex);
    }

    #[test]
    fn cantor_depth_two_build_counts() {
        let tree = truncate(TreeSpec::Cantor, 2);
        let complex = build(&tree).unwrap();
        assert_eq!(complex.pieces.len(), 4);
        assert!(complex
            .pieces
            .values()
            .all(|p| p.kind == PieceKind::Pants { punctures: 0 }));
        assert_eq!(complex.cuffs.len(), 3);
        assert_eq!(complex.open_slots.len(), 6);
        assert_eq!(complex.punctures.len(), 0);
        check_slot_conservation(&complex);
    }

    #[test]
    fn puncture_count_matches_tree_leaves() {
        for spec in [TreeSpec::Flute, TreeSpec::FluteWithGenus { genus: 2 }] {
            for depth in 2..7 {
                let tree = truncate(spec, depth);
                let complex = build(&tree).unwrap();
                let leaves = tree
                    .vertices()
                    .filter(|x| x.kind == VertexKind::Leaf)
                    .count();
                assert_eq!(complex.punctures.len(), leaves);
                check_slot_conservation(&complex);
            }
        }
    }

    #[test]
    fn dual_graph_is_a_tree_without_genus() {
        for spec in [TreeSpec::Cantor, TreeSpec::Flute] {
            let tree = truncate(spec, 5);
            let complex = build(&tree).unwrap();
            assert_eq!(complex.cuffs.len(), complex.pieces.len() - 1);
        }
    }

    #[test]
    fn case1_slice_one_is_both_sides_of_the_first_cuff() {
        let tree = truncate(TreeSpec::Cantor, 4);
        let complex = build(&tree).unwrap();
        let s1 = exhaustion(&complex, 1).unwrap();
        assert_eq!(s1.pieces.len(), 2);
        assert_eq!(s1.frontier.len(), 4);
        let e1 = complex.e1.unwrap();
        assert!(!s1.frontier.contains(&e1));
    }

    #[test]
    fn case2_slice_one_is_the_marked_region() {
        let tree = truncate(TreeSpec::FluteWithGenus { genus: 1 }, 4);
        let complex = build(&tree).unwrap();
        let s1 = exhaustion(&complex, 1).unwrap();
        assert_eq!(s1.pieces.len(), 1);
        assert!(matches!(
            complex.piece(*s1.pieces.iter().next().unwrap()).kind,
            PieceKind::TorusBlock { boundaries: 1 }
        ));
        assert_eq!(s1.frontier.len(), 1);
        assert_eq!(s1.frontier.iter().next(), complex.e1.as_ref());
    }

    #[test]
    fn slices_nest_and_chi_strictly_decreases() {
        let tree = truncate(TreeSpec::Cantor, 8);
        let complex = build(&tree).unwrap();
        let mut prev: Option<ExhaustionSlice> = None;
        for n in 1..=6 {
            let s = exhaustion(&complex, n).unwrap();
            if let Some(p) = &prev {
                assert!(p.pieces.is_subset(&s.pieces));
                assert!(slice_euler(&complex, &s) < slice_euler(&complex, p));
            }
            assert_eq!(
                slice_euler(&complex, &s),
                slice_euler_from_topology(&complex, &s),
                "slice {n}"
            );
            prev = Some(s);
        }
    }

    #[test]
    fn genus_slice_euler_routes_agree() {
        let tree = truncate(TreeSpec::FluteWithGenus { genus: 3 }, 8);
        let complex = build(&tree).unwrap();
        for n in 1..=5 {
            let s = exhaustion(&complex, n).unwrap();
            assert_eq!(
                slice_euler(&complex, &s),
                slice_euler_from_topology(&complex, &s),
                "slice {n}"
            );
        }
    }

    #[test]
    fn shallow_truncation_fails_loudly() {
        let tree = truncate(TreeSpec::Cantor, 3);
        let complex = build(&tree).unwrap();
        assert!(exhaustion(&complex, 1).is_ok());
        let err = exhaustion(&complex, 5).unwrap_err();
        assert!(matches!(err, PantsError::TooShallow(_)));
        let err = exhaustion(&complex, 0).unwrap_err();
        assert!(matches!(err, PantsError::BadSliceIndex));
    }

    #[test]
    fn euler_characteristic_routes_agree() {
        // Single type-2 pants.
        let tree = CoreTree::from_parts(
            v(0),
            vec![
                Vertex {
                    id: v(0),
                    marked: false,
                    kind: VertexKind::Interior,
                },
                Vertex {
                    id: v(1),
                    marked: false,
                    kind: VertexKind::Leaf,
                },
                Vertex {
                    id: v(2),
                    marked: false,
                    kind: VertexKind::Leaf,
                },
                Vertex {
                    id: v(3),
                    marked: false,
                    kind: VertexKind::Continuation,
                },
            ],
            vec![(v(0), v(1)), (v(0), v(2)), (v(0), v(3))],
        )
        .unwrap();
        let complex = build(&tree).unwrap();
        assert_eq!(euler_characteristic(&complex), -1);
        assert_eq!(euler_from_topology(&complex), -1);

        // Torus block with one boundary: χ = −1 = 2 − 2·1 − 1.
        let tree = CoreTree::from_parts(
            v(0),
            vec![
                Vertex {
                    id: v(0),
                    marked: true,
                    kind: VertexKind::Interior,
                },
                Vertex {
                    id: v(1),
                    marked: false,
                    kind: VertexKind::Continuation,
                },
            ],
            vec![(v(0), v(1))],
        )
        .unwrap();
        let complex = build(&tree).unwrap();
        assert_eq!(euler_characteristic(&complex), -1);
        assert_eq!(euler_from_topology(&complex), -1);

        for spec in [
            TreeSpec::Cantor,
            TreeSpec::Flute,
            TreeSpec::FluteWithGenus { genus: 2 },
            TreeSpec::CantorWithGenus { genus: 3 },
        ] {
            for depth in 2..7 {
                let tree = truncate(spec, depth);
                let complex = build(&tree).unwrap();
                assert_eq!(
                    euler_characteristic(&complex),
                    euler_from_topology(&complex),
                    "{spec:?} at depth {depth}"
                );
            }
        }
    }

    #[test]
    fn exhaustion_indices_cover_all_pieces() {
        let tree = truncate(TreeSpec::Flute, 6);
        let complex = build(&tree).unwrap();
        let idx = exhaustion_indices(&complex).unwrap();
        assert_eq!(idx.len(), complex.pieces.len());
        assert_eq!(idx.values().filter(|&&n| n == 1).count(), 2);
    }

    #[test]
    fn json_round_trip() {
        let tree = truncate(TreeSpec::FluteWithGenus { genus: 2 }, 3);
        let complex = build(&tree).unwrap();
        let back = from_json(&to_json(&complex)).unwrap();
        assert_eq!(complex, back);
    }
}
