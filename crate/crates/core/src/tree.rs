//! Core trees: finite truncations of the rooted degree-≤3 trees that encode
//! the topology of an infinite-type, finite-genus surface.
//!
//! A vertex is either *marked* (it carries genus and becomes a torus block),
//! an unmarked *interior* vertex of degree 3 (a pair of pants), a *leaf*
//! (a puncture), or a *continuation* — a bookkeeping vertex standing for an
//! un-expanded infinite subtree at the truncation frontier.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    /// Degree-3 unmarked vertex or any marked vertex; becomes a surface piece.
    Interior,
    /// Unmarked degree-1 vertex; becomes a puncture.
    Leaf,
    /// Unmarked degree-1 placeholder for an un-expanded infinite subtree.
    Continuation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub marked: bool,
    pub kind: VertexKind,
}

/// Which of the named generators a tree came from, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "preset", content = "params")]
pub enum TreeSpec {
    Cantor,
    Flute,
    FluteWithGenus { genus: u32 },
    CantorWithGenus { genus: u32 },
}

/// Whether a generator produces finitely or infinitely many punctured
/// (type-1) pants. Custom trees default to `Finite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Type1Supply {
    Finite,
    Infinite,
}

impl TreeSpec {
    pub fn type1_supply(&self) -> Type1Supply {
        match self {
            TreeSpec::Cantor | TreeSpec::CantorWithGenus { .. } => Type1Supply::Finite,
            TreeSpec::Flute | TreeSpec::FluteWithGenus { .. } => Type1Supply::Infinite,
        }
    }

    pub fn genus(&self) -> u32 {
        match self {
            TreeSpec::Cantor | TreeSpec::Flute => 0,
            TreeSpec::FluteWithGenus { genus } | TreeSpec::CantorWithGenus { genus } => *genus,
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum TreeError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tree violates core-tree invariants: {0}")]
    Invalid(ValidationReport),
    #[error("malformed tree data: {0}")]
    Malformed(String),
}

/// Construct one of the named generators.
///
/// `genus` is ignored by `cantor` and `flute` and must be ≥ 1 for the
/// genus-carrying presets. Custom trees are loaded from JSON instead.
pub fn preset(name: &str, genus: Option<u32>) -> Result<TreeSpec, TreeError> {
    match name {
        "cantor" => Ok(TreeSpec::Cantor),
        "flute" => Ok(TreeSpec::Flute),
        "flute_with_genus" | "cantor_with_genus" => {
            let g = genus.ok_or_else(|| {
                TreeError::InvalidParameter(format!("preset `{name}` requires genus"))
            })?;
            if g < 1 {
                return Err(TreeError::InvalidParameter(format!(
                    "preset `{name}` requires genus >= 1, got {g}"
                )));
            }
            if name == "flute_with_genus" {
                Ok(TreeSpec::FluteWithGenus { genus: g })
            } else {
                Ok(TreeSpec::CantorWithGenus { genus: g })
            }
        }
        "custom" => Err(TreeError::InvalidParameter(
            "custom trees are loaded from JSON, not generated".into(),
        )),
        other => Err(TreeError::UnknownPreset(other.into())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreTree {
    vertices: BTreeMap<VertexId, Vertex>,
    adjacency: BTreeMap<VertexId, Vec<VertexId>>,
    root: VertexId,
    spec: Option<(TreeSpec, u32)>,
    next_id: u32,
}

impl CoreTree {
    /// A single continuation vertex: the depth-0 truncation of anything.
    pub fn seed() -> CoreTree {
        let root = VertexId(0);
        let mut vertices = BTreeMap::new();
        vertices.insert(
            root,
            Vertex {
                id: root,
                marked: false,
                kind: VertexKind::Continuation,
            },
        );
        let mut adjacency = BTreeMap::new();
        adjacency.insert(root, Vec::new());
        CoreTree {
            vertices,
            adjacency,
            root,
            spec: None,
            next_id: 1,
        }
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn spec(&self) -> Option<(TreeSpec, u32)> {
        self.spec
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn neighbors(&self, id: VertexId) -> &[VertexId] {
        self.adjacency.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, id: VertexId) -> usize {
        self.neighbors(id).len()
    }

    /// Edges as (min, max) pairs in sorted order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (&v, nbrs) in &self.adjacency {
            for &w in nbrs {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out.sort();
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(Vec::len).sum::<usize>() / 2
    }

    /// Vertices in breadth-first order from the root, neighbors in id order.
    pub fn bfs_order(&self) -> Vec<VertexId> {
        let mut order = Vec::with_capacity(self.vertices.len());
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(self.root);
        seen.insert(self.root);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<_> = self
                .neighbors(v)
                .iter()
                .copied()
                .filter(|w| seen.insert(*w))
                .collect();
            nbrs.sort();
            queue.extend(nbrs);
        }
        order
    }

    /// Distance (in edges) of every reachable vertex from the root.
    pub fn depths(&self) -> BTreeMap<VertexId, u32> {
        let mut depth = BTreeMap::new();
        let mut queue = VecDeque::new();
        depth.insert(self.root, 0u32);
        queue.push_back(self.root);
        while let Some(v) = queue.pop_front() {
            let d = depth[&v];
            for &w in self.neighbors(v) {
                depth.entry(w).or_insert_with(|| {
                    queue.push_back(w);
                    d + 1
                });
            }
        }
        depth
    }

    pub(crate) fn fresh_id(&mut self) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        id
    }

    pub(crate) fn insert_vertex(&mut self, v: Vertex) {
        self.next_id = self.next_id.max(v.id.0 + 1);
        self.adjacency.entry(v.id).or_default();
        self.vertices.insert(v.id, v);
    }

    pub(crate) fn insert_edge(&mut self, a: VertexId, b: VertexId) {
        self.adjacency.get_mut(&a).expect("endpoint exists").push(b);
        self.adjacency.get_mut(&b).expect("endpoint exists").push(a);
    }

    pub(crate) fn remove_edge(&mut self, a: VertexId, b: VertexId) {
        if let Some(n) = self.adjacency.get_mut(&a) {
            n.retain(|&x| x != b);
        }
        if let Some(n) = self.adjacency.get_mut(&b) {
            n.retain(|&x| x != a);
        }
    }

    pub(crate) fn remove_vertex(&mut self, id: VertexId) {
        let nbrs: Vec<_> = self.neighbors(id).to_vec();
        for w in nbrs {
            self.remove_edge(id, w);
        }
        self.adjacency.remove(&id);
        self.vertices.remove(&id);
    }

    pub(crate) fn set_kind(&mut self, id: VertexId, kind: VertexKind) {
        if let Some(v) = self.vertices.get_mut(&id) {
            v.kind = kind;
        }
    }

    pub(crate) fn set_spec(&mut self, spec: TreeSpec, depth: u32) {
        self.spec = Some((spec, depth));
    }

    pub(crate) fn clear_spec(&mut self) {
        self.spec = None;
    }

    /// Build a tree directly from parts. Used for custom trees and tests.
    pub fn from_parts(
        root: VertexId,
        vertices: Vec<Vertex>,
        edges: Vec<(VertexId, VertexId)>,
    ) -> Result<CoreTree, TreeError> {
        let mut tree = CoreTree {
            vertices: BTreeMap::new(),
            adjacency: BTreeMap::new(),
            root,
            spec: None,
            next_id: 0,
        };
        for v in vertices {
            if tree.vertices.contains_key(&v.id) {
                return Err(TreeError::Malformed(format!("duplicate vertex {}", v.id)));
            }
            tree.insert_vertex(v);
        }
        if !tree.vertices.contains_key(&root) {
            return Err(TreeError::Malformed(format!(
                "root {root} not among vertices"
            )));
        }
        for (a, b) in edges {
            if a == b {
                return Err(TreeError::Malformed(format!("self-loop at {a}")));
            }
            if !tree.vertices.contains_key(&a) || !tree.vertices.contains_key(&b) {
                return Err(TreeError::Malformed(format!(
                    "edge ({a},{b}) has unknown endpoint"
                )));
            }
            if tree.neighbors(a).contains(&b) {
                return Err(TreeError::Malformed(format!("duplicate edge ({a},{b})")));
            }
            tree.insert_edge(a, b);
        }
        if tree.edge_count() + 1 != tree.vertex_count()
            || tree.bfs_order().len() != tree.vertex_count()
        {
            return Err(TreeError::Malformed("not a connected acyclic graph".into()));
        }
        Ok(tree)
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum Violation {
    /// Unmarked non-continuation vertices may only have degree 1 or 3.
    UnmarkedBadDegree { vertex: VertexId, degree: usize },
    /// Marked vertices may only have degree 1, 2 or 3.
    MarkedBadDegree { vertex: VertexId, degree: usize },
    /// Continuations stand for infinite subtrees: degree 1, unmarked.
    BadContinuation { vertex: VertexId, degree: usize },
    /// An unmarked root must have degree 3.
    RootBadDegree { degree: usize },
    /// Kind label disagrees with the structure around the vertex.
    KindMismatch {
        vertex: VertexId,
        kind: VertexKind,
        degree: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnmarkedBadDegree { vertex, degree } => {
                write!(f, "{vertex}: unmarked degree {degree}")
            }
            Violation::MarkedBadDegree { vertex, degree } => {
                write!(f, "{vertex}: marked degree {degree}")
            }
            Violation::BadContinuation { vertex, degree } => {
                write!(f, "{vertex}: continuation with degree {degree}")
            }
            Violation::RootBadDegree { degree } => {
                write!(f, "root: unmarked root of degree {degree}")
            }
            Violation::KindMismatch {
                vertex,
                kind,
                degree,
            } => {
                write!(
                    f,
                    "{vertex}: kind {kind:?} inconsistent with degree {degree}"
                )
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "clean");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Check every core-tree invariant; violations are report entries, never
/// failures. A single-vertex tree is accepted when the lone root is a leaf
/// or a continuation (the degenerate and depth-0 truncations).
pub fn validate(tree: &CoreTree) -> ValidationReport {
    let mut violations = Vec::new();
    let single = tree.vertex_count() == 1;
    for v in tree.vertices() {
        let deg = tree.degree(v.id);
        let is_root = v.id == tree.root();
        match v.kind {
            VertexKind::Continuation => {
                if v.marked || deg != usize::from(!single) {
                    violations.push(Violation::BadContinuation {
                        vertex: v.id,
                        degree: deg,
                    });
                }
            }
            VertexKind::Leaf => {
                if v.marked || deg != usize::from(!single) {
                    violations.push(Violation::KindMismatch {
                        vertex: v.id,
                        kind: v.kind,
                        degree: deg,
                    });
                }
            }
            VertexKind::Interior => {
                if v.marked {
                    if !(1..=3).contains(&deg) {
                        violations.push(Violation::MarkedBadDegree {
                            vertex: v.id,
                            degree: deg,
                        });
                    }
                } else if is_root {
                    if deg != 3 {
                        violations.push(Violation::RootBadDegree { degree: deg });
                    }
                } else if deg != 3 {
                    // Degree-1 unmarked vertices must be labeled leaf or
                    // continuation, so interior covers exactly degree 3.
                    violations.push(Violation::UnmarkedBadDegree {
                        vertex: v.id,
                        degree: deg,
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}

// ---------------------------------------------------------------------------
// Truncation of the generators
// ---------------------------------------------------------------------------

/// Expand a spec to the given depth. Depth 0 is the lone continuation root;
/// each further round expands every continuation vertex once, in id order,
/// so `truncate(spec, d)` is a prefix of `truncate(spec, d + 1)`.
pub fn truncate(spec: TreeSpec, depth: u32) -> CoreTree {
    let mut tree = CoreTree::seed();
    for round in 0..depth {
        let frontier: Vec<VertexId> = tree
            .vertices()
            .filter(|v| v.kind == VertexKind::Continuation)
            .map(|v| v.id)
            .collect();
        for v in frontier {
            expand(&mut tree, spec, v, round == 0);
        }
    }
    tree.set_spec(spec, depth);
    tree
}

fn expand(tree: &mut CoreTree, spec: TreeSpec, at: VertexId, is_root_round: bool) {
    let add_child = |tree: &mut CoreTree, parent: VertexId, marked: bool, kind: VertexKind| {
        let id = tree.fresh_id();
        tree.insert_vertex(Vertex { id, marked, kind });
        tree.insert_edge(parent, id);
        id
    };
    match (spec, is_root_round) {
        (TreeSpec::Cantor, true) => {
            tree.set_kind(at, VertexKind::Interior);
            for _ in 0..3 {
                add_child(tree, at, false, VertexKind::Continuation);
            }
        }
        (TreeSpec::Cantor, false) => {
            tree.set_kind(at, VertexKind::Interior);
            for _ in 0..2 {
                add_child(tree, at, false, VertexKind::Continuation);
            }
        }
        (TreeSpec::Flute, true) => {
            // The root pants carries two punctures: the one exterior tree
            // permitted to sit at the root.
            tree.set_kind(at, VertexKind::Interior);
            add_child(tree, at, false, VertexKind::Leaf);
            add_child(tree, at, false, VertexKind::Leaf);
            add_child(tree, at, false, VertexKind::Continuation);
        }
        (TreeSpec::Flute, false) => {
            tree.set_kind(at, VertexKind::Interior);
            add_child(tree, at, false, VertexKind::Leaf);
            add_child(tree, at, false, VertexKind::Continuation);
        }
        (TreeSpec::FluteWithGenus { genus }, true)
        | (TreeSpec::CantorWithGenus { genus }, true) => {
            // The root expands into the fully marked chain carrying the
            // genus, with a single continuation hanging off the root.
            let mut prev = at;
            tree.vertices.get_mut(&at).expect("exists").marked = true;
            tree.set_kind(at, VertexKind::Interior);
            for _ in 1..genus {
                prev = add_child(tree, prev, true, VertexKind::Interior);
            }
            add_child(tree, at, false, VertexKind::Continuation);
        }
        (TreeSpec::FluteWithGenus { .. }, false) => {
            expand(tree, TreeSpec::Flute, at, false);
        }
        (TreeSpec::CantorWithGenus { .. }, false) => {
            expand(tree, TreeSpec::Cantor, at, false);
        }
    }
}

// ---------------------------------------------------------------------------
// Ends bookkeeping
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthCounts {
    pub depth: u32,
    pub puncture_leaves: u32,
    pub continuations: u32,
}

/// Counts of isolated planar ends (puncture leaves) and truncation windows
/// (continuations) visible in a truncation, in total and per depth.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndsSummary {
    pub puncture_leaf_count: u32,
    pub continuation_count: u32,
    pub per_depth: Vec<DepthCounts>,
}

/// Count ends visible in the truncation. Continuations are representation
/// devices and are never counted as punctures.
pub fn classify_ends(tree: &CoreTree) -> Result<EndsSummary, TreeError> {
    let report = validate(tree);
    if !report.is_clean() {
        return Err(TreeError::Invalid(report));
    }
    let depths = tree.depths();
    let mut per_depth: BTreeMap<u32, DepthCounts> = BTreeMap::new();
    let mut summary = EndsSummary::default();
    for v in tree.vertices() {
        let d = depths[&v.id];
        let entry = per_depth.entry(d).or_insert(DepthCounts {
            depth: d,
            puncture_leaves: 0,
            continuations: 0,
        });
        match v.kind {
            VertexKind::Leaf => {
                summary.puncture_leaf_count += 1;
                entry.puncture_leaves += 1;
            }
            VertexKind::Continuation => {
                summary.continuation_count += 1;
                entry.continuations += 1;
            }
            VertexKind::Interior => {}
        }
    }
    summary.per_depth = per_depth.into_values().collect();
    Ok(summary)
}

// ---------------------------------------------------------------------------
// JSON and DOT
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TreeJson {
    root: VertexId,
    vertices: Vec<Vertex>,
    edges: Vec<(VertexId, VertexId)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    spec: Option<SpecJson>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    #[serde(flatten)]
    spec: TreeSpec,
    depth: u32,
}

pub fn to_json(tree: &CoreTree) -> String {
    let doc = TreeJson {
        root: tree.root(),
        vertices: tree.vertices().copied().collect(),
        edges: tree.edges(),
        spec: tree.spec().map(|(spec, depth)| SpecJson { spec, depth }),
    };
    serde_json::to_string_pretty(&doc).expect("tree serializes")
}

pub fn from_json(data: &str) -> Result<CoreTree, TreeError> {
    let doc: TreeJson =
        serde_json::from_str(data).map_err(|e| TreeError::Malformed(e.to_string()))?;
    let mut tree = CoreTree::from_parts(doc.root, doc.vertices, doc.edges)?;
    if let Some(s) = doc.spec {
        tree.set_spec(s.spec, s.depth);
    }
    Ok(tree)
}

/// Graphviz rendering: marked vertices double-circled, continuations dashed.
pub fn to_dot(tree: &CoreTree) -> String {
    let mut out = String::from("graph coretree {\n  node [shape=circle];\n");
    for v in tree.vertices() {
        let mut attrs = vec![format!("label=\"{}\"", v.id.0)];
        if v.marked {
            attrs.push("shape=doublecircle".into());
        }
        match v.kind {
            VertexKind::Continuation => attrs.push("style=dashed".into()),
            VertexKind::Leaf => attrs.push("shape=point".into()),
            VertexKind::Interior => {}
        }
        if v.id == tree.root() {
            attrs.push("penwidth=2".into());
        }
        out.push_str(&format!("  {} [{}];\n", v.id, attrs.join(", ")));
    }
    for (a, b) in tree.edges() {
        out.push_str(&format!("  {a} -- {b};\n"));
    }
    out.push_str("}\n");
    out
}
