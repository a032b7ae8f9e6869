//! Exterior-tree surgery: rewrites a core tree so that at most one exterior
//! tree remains, and only at (or adjacent to) the root.
//!
//! An exterior tree is an unmarked degree-3 vertex together with two leaf
//! neighbors; it corresponds to a two-puncture pants. The surgery walks each
//! exterior tree's path to the root, finds the maximal finite fully-unmarked
//! subtree hanging off that path that contains it as the sole exterior tree,
//! and replaces that subtree with a single leaf. Retained vertices keep their
//! degrees, so validity is preserved.

use serde::{Deserialize, Serialize};

use crate::tree::{validate, CoreTree, TreeError, Vertex, VertexId, VertexKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExteriorTree {
    /// The unmarked degree-3 vertex.
    pub apex: VertexId,
    /// Its two leaf neighbors, in id order.
    pub leaves: (VertexId, VertexId),
}

/// One replacement performed by `normalize`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryStep {
    pub exterior: ExteriorTree,
    /// The path vertex the replaced subtree hung from; its degree is
    /// unchanged by the replacement.
    pub anchor: VertexId,
    pub replacement_leaf: VertexId,
    pub removed_vertices: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryTrace {
    pub steps: Vec<SurgeryStep>,
}

fn is_apex(tree: &CoreTree, v: VertexId) -> Option<(VertexId, VertexId)> {
    let vx = tree.vertex(v)?;
    if vx.marked || vx.kind != VertexKind::Interior || tree.degree(v) != 3 {
        return None;
    }
    let mut leaves: Vec<VertexId> = tree
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&w| {
            tree.vertex(w)
                .map(|x| x.kind == VertexKind::Leaf)
                .unwrap_or(false)
        })
        .collect();
    if leaves.len() < 2 {
        return None;
    }
    leaves.sort();
    Some((leaves[0], leaves[1]))
}

/// All exterior trees, in breadth-first order of their apexes.
/// Continuation vertices never count as leaves of an exterior tree.
pub fn find_exterior_trees(tree: &CoreTree) -> Result<Vec<ExteriorTree>, TreeError> {
    let report = validate(tree);
    if !report.is_clean() {
        return Err(TreeError::Invalid(report));
    }
    Ok(tree
        .bfs_order()
        .into_iter()
        .filter_map(|v| is_apex(tree, v).map(|leaves| ExteriorTree { apex: v, leaves }))
        .collect())
}

/// The subtree hanging off `from` in the direction of `toward` (excluding
/// `from` itself), classified as it is walked.
struct Component {
    vertices: Vec<VertexId>,
    finite: bool,
    unmarked: bool,
    apexes: u32,
}

fn component(tree: &CoreTree, from: VertexId, toward: VertexId) -> Component {
    let mut comp = Component {
        vertices: Vec::new(),
        finite: true,
        unmarked: true,
        apexes: 0,
    };
    let mut stack = vec![(toward, from)];
    while let Some((v, parent)) = stack.pop() {
        comp.vertices.push(v);
        let vx = tree.vertex(v).expect("walk stays inside the tree");
        if vx.kind == VertexKind::Continuation {
            // A subtree reaching the truncation frontier stands for an
            // infinite subtree and is never replaceable.
            comp.finite = false;
        }
        if vx.marked {
            comp.unmarked = false;
        }
        if is_apex(tree, v).is_some() {
            comp.apexes += 1;
        }
        if !comp.finite || !comp.unmarked {
            return comp;
        }
        for &w in tree.neighbors(v) {
            if w != parent {
                stack.push((w, v));
            }
        }
    }
    comp
}

/// Normalization: after this, at most one exterior tree remains
/// and its apex is the root or adjacent to it. Idempotent; degrees of
/// surviving vertices and all marked vertices are untouched.
pub fn normalize(tree: &CoreTree) -> Result<(CoreTree, SurgeryTrace), TreeError> {
    let enumerated = find_exterior_trees(tree)?;
    let mut tree = tree.clone();
    let mut trace = SurgeryTrace::default();

    for ext in enumerated {
        // Earlier replacements can only have removed this apex together with
        // its whole exterior tree, so presence of the apex is enough.
        if tree.vertex(ext.apex).is_none() || is_apex(&tree, ext.apex).is_none() {
            continue;
        }
        if ext.apex == tree.root() {
            continue;
        }
        let path = path_to_root(&tree, ext.apex);
        // path[0] = apex, path[m] = root. Find the maximal j whose hanging
        // subtree is finite, fully unmarked and contains only this exterior
        // tree; j = 1 always qualifies ({apex, leaf, leaf}).
        let mut best = 1usize;
        for j in 2..path.len() {
            let comp = component(&tree, path[j], path[j - 1]);
            if comp.finite && comp.unmarked && comp.apexes == 1 {
                best = j;
            } else {
                break;
            }
        }
        let anchor = path[best];
        let doomed = component(&tree, anchor, path[best - 1]);
        debug_assert!(doomed.finite && doomed.unmarked && doomed.apexes == 1);
        for &v in &doomed.vertices {
            tree.remove_vertex(v);
        }
        let leaf = tree.fresh_id();
        tree.insert_vertex(Vertex {
            id: leaf,
            marked: false,
            kind: VertexKind::Leaf,
        });
        tree.insert_edge(anchor, leaf);
        trace.steps.push(SurgeryStep {
            exterior: ext,
            anchor,
            replacement_leaf: leaf,
            removed_vertices: doomed.vertices.len() as u32,
        });
    }

    if !trace.steps.is_empty() {
        tree.clear_spec();
    }
    Ok((tree, trace))
}

fn path_to_root(tree: &CoreTree, from: VertexId) -> Vec<VertexId> {
    // Parent pointers by BFS from the root.
    let mut parent = std::collections::BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    parent.insert(tree.root(), tree.root());
    queue.push_back(tree.root());
    while let Some(v) = queue.pop_front() {
        for &w in tree.neighbors(v) {
            parent.entry(w).or_insert_with(|| {
                queue.push_back(w);
                v
            });
        }
    }
    let mut path = vec![from];
    let mut v = from;
    while v != tree.root() {
        v = parent[&v];
        path.push(v);
    }
    path
}

pub fn trace_to_json(trace: &SurgeryTrace) -> String {
    serde_json::to_string_pretty(trace).expect("trace serializes")
}
