//! Length arithmetic and the factorial edge labeling.
//!
//! Cuff lengths are kept symbolic wherever possible: `Length::Factorial(k)`
//! means the exact integer (2k+1)!, compared exactly; only the hyperbolic
//! trigonometry ever evaluates lengths, and it does so in log space. Real
//! lengths carry the (positive) f64 value directly.
//!
//! The labeling walks the tree edges breadth-first from the distinguished
//! cuff `E1`: `E1` gets 1!, its neighboring edges 3!, the next ring 5!, and
//! so on, skipping edges that meet a leaf (punctures carry no length) and
//! the marked root region, whose cuffs take caller-supplied real lengths.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::numeric::{ln_biguint, ln_factorial, odd_factorial_exact};
use crate::pants::{CuffId, CuffSource, PantsComplex, PieceKind};
use crate::tree::VertexId;

/// Default tolerance for comparisons that must go through log space.
pub const MIXED_COMPARE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Length {
    /// The odd factorial (2k+1)!; stored by its index so it stays exact far
    /// past the range of floating point.
    #[serde(rename = "factorial_index")]
    Factorial(u64),
    /// A positive real length.
    Real(f64),
}

impl Length {
    /// Natural log of the length; exact to ~1e-15 relative error.
    pub fn log_value(&self) -> f64 {
        match self {
            Length::Factorial(k) => ln_factorial(2 * k + 1),
            Length::Real(x) => x.ln(),
        }
    }

    /// The exact integer value, for factorial-tagged lengths.
    pub fn exact(&self) -> Option<BigUint> {
        match self {
            Length::Factorial(k) => Some(odd_factorial_exact(*k)),
            Length::Real(_) => None,
        }
    }

    /// f64 value; infinite once a factorial length exceeds f64 range.
    pub fn value(&self) -> f64 {
        match self {
            Length::Factorial(_) => self.log_value().exp(),
            Length::Real(x) => *x,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Length::Factorial(_) => true,
            Length::Real(x) => *x > 0.0 && x.is_finite(),
        }
    }

    pub fn factorial_index(&self) -> Option<u64> {
        match self {
            Length::Factorial(k) => Some(*k),
            Length::Real(_) => None,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Factorial(k) => write!(f, "({})!", 2 * k + 1),
            Length::Real(x) => write!(f, "{x}"),
        }
    }
}

/// Exact when both sides are factorial-tagged; log-space with the default
/// tolerance otherwise.
pub fn compare(a: &Length, b: &Length) -> Ordering {
    compare_with_tolerance(a, b, MIXED_COMPARE_TOLERANCE)
}

pub fn compare_with_tolerance(a: &Length, b: &Length, tol: f64) -> Ordering {
    match (a, b) {
        // (2k+1)! is strictly increasing in k, so index order is exact
        // integer order.
        (Length::Factorial(i), Length::Factorial(j)) => i.cmp(j),
        _ => {
            let (la, lb) = (a.log_value(), b.log_value());
            if (la - lb).abs() <= tol {
                Ordering::Equal
            } else if la < lb {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }
}

/// A positive quantity stored by its natural log. The working currency of
/// the hyperbolic estimates, where values like (2n+1)! appear as plain
/// summands and would overflow any direct representation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogLength {
    pub log: f64,
}

impl LogLength {
    pub fn from_log(log: f64) -> LogLength {
        LogLength { log }
    }

    pub fn from_value(x: f64) -> LogLength {
        assert!(x > 0.0, "log-space lengths must be positive, got {x}");
        LogLength { log: x.ln() }
    }

    pub fn from_length(l: &Length) -> LogLength {
        LogLength { log: l.log_value() }
    }

    pub fn from_exact(n: &BigUint) -> LogLength {
        LogLength { log: ln_biguint(n) }
    }

    /// Multiply by a positive scalar: an exact addition in log space.
    pub fn scaled(&self, factor: f64) -> LogLength {
        assert!(factor > 0.0);
        LogLength {
            log: self.log + factor.ln(),
        }
    }

    pub fn value(&self) -> f64 {
        self.log.exp()
    }
}

impl From<&Length> for LogLength {
    fn from(l: &Length) -> LogLength {
        LogLength::from_length(l)
    }
}

/// The exact gap (2m+3)! − (2m+1)! together with its log form. The gap
/// factors as (2m+1)!·((2m+2)(2m+3) − 1), which strictly dominates
/// (2m+1)!·(2m+1); both facts are exposed for the certificate ledger.
pub fn factorial_gap(m: u64) -> (BigUint, LogLength) {
    let small = odd_factorial_exact(m);
    let big = odd_factorial_exact(m + 1);
    let gap = &big - &small;
    debug_assert_eq!(gap, &small * BigUint::from((2 * m + 2) * (2 * m + 3) - 1));
    let log = LogLength::from_exact(&gap);
    (gap, log)
}

// ---------------------------------------------------------------------------
// Labeling
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, thiserror::Error)]
pub enum MetricError {
    #[error("complex has no distinguished first cuff to start the labeling")]
    MissingFirstCuff,
    #[error("no length supplied for cuff {0} in the marked region")]
    MissingTStarLength(CuffId),
    #[error("length for cuff {0} must be positive, got {1}")]
    NonPositiveLength(CuffId, f64),
    #[error("cuff {0} is unreachable from the first cuff")]
    Unreachable(CuffId),
    #[error("malformed metric data: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricComplex {
    pub complex: PantsComplex,
    pub lengths: BTreeMap<CuffId, Length>,
    /// Fenchel–Nielsen twists; stored as opaque parameters, default 0.
    pub twists: BTreeMap<CuffId, f64>,
    /// Cuffs carrying caller-supplied real lengths (the marked region and
    /// all torus-internal cuffs).
    pub tstar_cuffs: BTreeSet<CuffId>,
}

impl MetricComplex {
    pub fn length(&self, cuff: CuffId) -> Option<&Length> {
        self.lengths.get(&cuff)
    }

    pub fn label_index(&self, cuff: CuffId) -> Option<u64> {
        self.lengths.get(&cuff).and_then(Length::factorial_index)
    }

    pub fn twist(&self, cuff: CuffId) -> f64 {
        self.twists.get(&cuff).copied().unwrap_or(0.0)
    }

    pub fn set_twist(&mut self, cuff: CuffId, twist: f64) {
        self.twists.insert(cuff, twist);
    }
}

fn edge_endpoints(source: &CuffSource) -> Option<(VertexId, VertexId)> {
    match source {
        CuffSource::TreeEdge(a, b) => Some((*a, *b)),
        CuffSource::Internal => None,
    }
}

/// Assign lengths: factorial labels radiating out from `E1`, real lengths
/// on the marked region. `t_star_lengths` must cover every marked-region
/// cuff; any positive numbers do.
pub fn label_lengths(
    complex: &PantsComplex,
    t_star_lengths: &BTreeMap<CuffId, f64>,
) -> Result<MetricComplex, MetricError> {
    let e1 = complex.e1.ok_or(MetricError::MissingFirstCuff)?;

    let is_block = |p| matches!(complex.piece(p).kind, PieceKind::TorusBlock { .. });
    let mut real_cuffs: BTreeSet<CuffId> = BTreeSet::new();
    let mut labelable: BTreeSet<CuffId> = BTreeSet::new();
    for cuff in complex.cuffs.values() {
        match cuff.source {
            CuffSource::Internal => {
                real_cuffs.insert(cuff.id);
            }
            CuffSource::TreeEdge(..) => {
                if is_block(cuff.a.piece) && is_block(cuff.b.piece) {
                    real_cuffs.insert(cuff.id);
                } else {
                    labelable.insert(cuff.id);
                }
            }
        }
    }

    let mut lengths: BTreeMap<CuffId, Length> = BTreeMap::new();
    for &cuff in &real_cuffs {
        let x = *t_star_lengths
            .get(&cuff)
            .ok_or(MetricError::MissingTStarLength(cuff))?;
        if !(x > 0.0 && x.is_finite()) {
            return Err(MetricError::NonPositiveLength(cuff, x));
        }
        lengths.insert(cuff, Length::Real(x));
    }

    // Breadth-first over tree edges; two cuffs are adjacent when their
    // source edges share a vertex.
    let mut vertex_edges: BTreeMap<VertexId, Vec<CuffId>> = BTreeMap::new();
    for &id in &labelable {
        let (a, b) = edge_endpoints(&complex.cuff(id).source).expect("labelable is a tree edge");
        vertex_edges.entry(a).or_default().push(id);
        vertex_edges.entry(b).or_default().push(id);
    }
    let mut queue = VecDeque::new();
    lengths.insert(e1, Length::Factorial(0));
    queue.push_back(e1);
    while let Some(cuff) = queue.pop_front() {
        let index = lengths[&cuff]
            .factorial_index()
            .expect("labeled with a factorial");
        let (a, b) = edge_endpoints(&complex.cuff(cuff).source).expect("tree edge");
        for v in [a, b] {
            for &next in vertex_edges.get(&v).into_iter().flatten() {
                if let std::collections::btree_map::Entry::Vacant(e) = lengths.entry(next) {
                    e.insert(Length::Factorial(index + 1));
                    queue.push_back(next);
                }
            }
        }
    }
    if let Some(&missed) = labelable.iter().find(|c| !lengths.contains_key(c)) {
        return Err(MetricError::Unreachable(missed));
    }

    Ok(MetricComplex {
        complex: complex.clone(),
        lengths,
        twists: BTreeMap::new(),
        tstar_cuffs: real_cuffs,
    })
}

pub fn to_json(mc: &MetricComplex) -> String {
    serde_json::to_string_pretty(mc).expect("metric complex serializes")
}

pub fn from_json(data: &str) -> Result<MetricComplex, MetricError> {
    let mc: MetricComplex =
        serde_json::from_str(data).map_err(|e| MetricError::Malformed(e.to_string()))?;
    for (cuff, len) in &mc.lengths {
        if !len.is_positive() {
            return Err(MetricError::NonPositiveLength(*cuff, len.value()));
        }
    }
    Ok(mc)
}
