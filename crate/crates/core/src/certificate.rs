//! The non-wandering certificate.
//!
//! Given a labeled complex and a distortion constant K, the certificate
//! establishes, slice by slice, that a K-quasiconformal self-map cannot push
//! the exhaustion subsurface R_n off itself: moving a frontier cuff would
//! create a returning segment through a pants further out, and that segment
//! is longer than K times the cuff length — contradicting the distortion
//! bound on geodesic lengths.
//!
//! Every ledger row is verified twice: once by exact big-integer arithmetic
//! on K·(2m+1)! against (2m+1)!·((2m+2)(2m+3) − 1), and once numerically in
//! log space against the returning-arc bound of the actual pants sitting
//! beyond the frontier.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::geom::{returning_arc_bound, GeomError, PantsGeometry};
use crate::metric::{Length, LogLength, MetricComplex};
use crate::numeric::{ln_factorial, odd_factorial_exact};
use crate::pants::{exhaustion, exhaustion_indices, CuffId, PantsError, PieceId, PieceKind};
use crate::tree::Type1Supply;

/// Default validated threshold for "sufficiently large" pentagon side a;
/// the acceptance sweep verifies the bound from a = 1.1 up, and 2.0 keeps a
/// margin on top of the stated a > 1 hypothesis.
pub const DEFAULT_PENTAGON_THRESHOLD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// Finitely many one-puncture pants: N clears the last of them.
    FiniteType1,
    /// Infinitely many one-puncture pants, genus zero.
    InfiniteType1,
    /// Marked vertices present: the genus region is the exhaustion core.
    PositiveGenus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum CertStatus {
    /// Every ledger row passed both the exact and the numeric check.
    Valid,
    /// K < N: the hypothesis of the non-wandering statement fails; nothing
    /// is falsified, the certificate is simply not issued.
    Refused { reason: String },
    /// At least one ledger row failed — this would indicate a bug, not a
    /// property of the surface.
    Failed { failing_rows: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    /// Slice index.
    pub n: u32,
    /// Factorial label index of the slice frontier (the crossing level).
    pub m: u64,
    /// ln(K·(2m+1)!) — the distortion ceiling on the frontier cuff image.
    pub lhs_log: f64,
    /// ln of the returning-arc lower bound just outside the frontier.
    pub rhs_log: f64,
    /// K·(2m+1)! < (2m+1)!·((2m+2)(2m+3) − 1), by exact integers.
    pub exact_pass: bool,
    /// rhs_log > lhs_log.
    pub numeric_pass: bool,
    pub slack_log: f64,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub n_threshold: u32,
    pub k: f64,
    pub horizon: u32,
    pub case_tag: CaseTag,
    pub pentagon_threshold: f64,
    pub status: CertStatus,
    pub ledger: Vec<LedgerRow>,
    pub notes: Vec<String>,
    /// The group-theoretic remainder of the countability argument, stated in
    /// prose and explicitly not machine-verified.
    pub summary: String,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        matches!(self.status, CertStatus::Valid)
    }
}

pub const UNVERIFIED_SUMMARY: &str = "Not machine-verified: the remaining step of the \
countability argument. Once no subsurface of the exhaustion can wander, two maps of \
distortion at most n that agree on R_n can differ outside it only by Dehn twists along \
the cuffs, and any such twist forces the distortion above n; hence the restriction map \
onto mapping classes of R_n is injective and the full group is a countable union of \
countable sets. This certificate verifies only the length inequalities feeding that \
argument.";

#[derive(Debug, Clone, thiserror::Error)]
pub enum CertError {
    #[error("truncation too shallow: {0}")]
    TooShallow(String),
    #[error("unsupported complex: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Pants(#[from] PantsError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

// ---------------------------------------------------------------------------
// Threshold selection
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub n: u32,
    pub case_tag: CaseTag,
    pub notes: Vec<String>,
}

/// Exact test (2j+1)! > x for a non-negative float x.
fn odd_factorial_exceeds(j: u64, x: f64) -> bool {
    debug_assert!(x >= 0.0);
    if x >= 9e15 {
        // Compare in log space; factorials jump by whole factors so a
        // float-log comparison at this scale is unambiguous.
        return ln_factorial(2 * j + 1) > x.ln() + 1e-12;
    }
    odd_factorial_exact(j) >= BigUint::from(x.floor() as u64 + 1)
}

/// The threshold N past which the non-wandering argument applies.
///
/// With finitely many one-puncture pants, N is one more than the first slice
/// containing them all (vacuously the empty slice when there are none). With
/// infinitely many, N is the least index whose cuff length (2n+1)! exceeds
/// the validated pentagon threshold.
pub fn compute_n(mc: &MetricComplex, pentagon_threshold: f64) -> Result<Threshold, CertError> {
    let complex = &mc.complex;
    let has_genus = complex.torus_blocks().next().is_some();
    let infinite = complex.type1_supply == Type1Supply::Infinite;
    let case_tag = if has_genus {
        CaseTag::PositiveGenus
    } else if infinite {
        CaseTag::InfiniteType1
    } else {
        CaseTag::FiniteType1
    };
    let mut notes = Vec::new();

    let n = if infinite {
        let mut j = 1u64;
        while !odd_factorial_exceeds(j, pentagon_threshold) {
            j += 1;
        }
        notes.push(format!(
            "threshold rule: least n with (2n+1)! > {pentagon_threshold} (pentagon bound)"
        ));
        j as u32
    } else {
        let indices = exhaustion_indices(complex)?;
        let type1 = complex.type1_pieces();
        let deepest = type1.iter().map(|p| indices[p]).max();
        match deepest {
            Some(d) => {
                notes.push(format!(
                    "threshold rule: all {} one-puncture pants lie in slice {d}, N = {d} + 1",
                    type1.len()
                ));
                // The defining slice must actually be available.
                exhaustion(complex, d + 1).map_err(|e| {
                    CertError::TooShallow(format!(
                        "cannot expose slice {} around the one-puncture pants: {e}",
                        d + 1
                    ))
                })?;
                d + 1
            }
            None => {
                notes.push(
                    "threshold rule: no one-puncture pants at all; the minimum is vacuous \
                     (empty slice) and N = 1"
                        .into(),
                );
                1
            }
        }
    };

    if has_genus {
        // The genus region is slice 1 and slices are nested, so it sits
        // inside slice N for any N >= 1.
        notes.push("genus region is slice 1, contained in every later slice".into());
    }
    Ok(Threshold { n, case_tag, notes })
}

// ---------------------------------------------------------------------------
// Exact arithmetic
// ---------------------------------------------------------------------------

/// Exact dyadic decomposition of a positive finite f64: x = mant · 2^exp.
fn dyadic(x: f64) -> (u64, i64) {
    assert!(x > 0.0 && x.is_finite());
    let bits = x.to_bits();
    let exp_raw = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_raw == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_raw - 1075)
    }
}

/// K·a < b by exact integer arithmetic (K a positive f64, hence dyadic).
pub fn dyadic_times_lt(k: f64, a: &BigUint, b: &BigUint) -> bool {
    let (mant, exp) = dyadic(k);
    let lhs = a * BigUint::from(mant);
    if exp >= 0 {
        (lhs << (exp as usize)) < *b
    } else {
        lhs < (b << ((-exp) as usize))
    }
}

/// The exact row inequality K·(2m+1)! < (2m+1)!·((2m+2)(2m+3) − 1).
pub fn exact_row_inequality(k: f64, m: u64) -> bool {
    let fact = odd_factorial_exact(m);
    let rhs = &fact * BigUint::from((2 * m + 2) * (2 * m + 3) - 1);
    dyadic_times_lt(k, &fact, &rhs)
}

/// The algebraic simplification of the same inequality.
pub fn simplified_row_inequality(k: f64, m: u64) -> bool {
    let rhs = (2 * m + 2) * (2 * m + 3) - 1;
    // exact: rhs stays well under 2^53 for any reachable m
    k < rhs as f64
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// The geometry of the pants just outside a frontier cuff, from its actual
/// labeled lengths (punctured ends become cusps).
fn outside_pants_geometry(
    mc: &MetricComplex,
    incidence: &BTreeMap<PieceId, Vec<CuffId>>,
    open_pieces: &BTreeSet<PieceId>,
    inside: &BTreeSet<PieceId>,
    frontier_cuff: CuffId,
) -> Result<(PantsGeometry, usize), CertError> {
    let complex = &mc.complex;
    let cuff = complex.cuff(frontier_cuff);
    let outside_piece = if inside.contains(&cuff.a.piece) {
        cuff.b.piece
    } else {
        cuff.a.piece
    };
    let piece = complex.piece(outside_piece);
    let punctures = match piece.kind {
        PieceKind::Pants { punctures } => punctures,
        PieceKind::TorusBlock { .. } => {
            return Err(CertError::Unsupported(format!(
                "marked piece {outside_piece} beyond the exhaustion core"
            )));
        }
    };
    if open_pieces.contains(&outside_piece) {
        return Err(CertError::TooShallow(format!(
            "piece {outside_piece} beyond the frontier is not fully expanded"
        )));
    }
    let mut cuffs: Vec<Length> = vec![Length::Real(0.0); usize::from(punctures)];
    let mut entry_index = None;
    for id in incidence.get(&outside_piece).into_iter().flatten() {
        let len = *mc
            .length(*id)
            .ok_or_else(|| CertError::Unsupported(format!("cuff {id} has no length")))?;
        if *id == frontier_cuff {
            entry_index = Some(cuffs.len());
        }
        cuffs.push(len);
    }
    let entry = entry_index.expect("frontier cuff borders the outside piece");
    if cuffs.len() != 3 {
        return Err(CertError::Unsupported(format!(
            "piece {outside_piece} has {} ends instead of 3",
            cuffs.len()
        )));
    }
    let geometry = PantsGeometry::new([cuffs[0], cuffs[1], cuffs[2]])?;
    Ok((geometry, entry))
}

/// Verify non-wandering of every slice n in [⌈K⌉, horizon].
///
/// Refused (not falsified) when K < N. Each row checks the frontier cuff of
/// slice n at crossing level m (its own label index): exactly, that
/// K·(2m+1)! < (2m+1)!·((2m+2)(2m+3) − 1), and numerically, that the
/// returning-arc bound of every pants beyond the frontier exceeds the
/// distortion ceiling K·(2m+1)!.
pub fn verify_non_wandering(
    mc: &MetricComplex,
    k: f64,
    horizon: u32,
    pentagon_threshold: f64,
) -> Result<Certificate, CertError> {
    if !k.is_finite() || k < 1.0 {
        return Err(CertError::Unsupported(format!(
            "distortion constant K = {k} must be >= 1"
        )));
    }
    let threshold = compute_n(mc, pentagon_threshold)?;
    let mut cert = Certificate {
        n_threshold: threshold.n,
        k,
        horizon,
        case_tag: threshold.case_tag,
        pentagon_threshold,
        status: CertStatus::Valid,
        ledger: Vec::new(),
        notes: threshold.notes,
        summary: UNVERIFIED_SUMMARY.to_string(),
    };
    if k < threshold.n as f64 {
        cert.status = CertStatus::Refused {
            reason: format!(
                "K = {k} is below the threshold N = {}; the non-wandering statement only \
                 applies for K >= N",
                threshold.n
            ),
        };
        return Ok(cert);
    }

    let start = k.ceil() as u32;
    if horizon < start {
        return Err(CertError::Unsupported(format!(
            "horizon {horizon} is below ceil(K) = {start}; no rows to verify"
        )));
    }

    // Grow the exhaustion once, incrementally; each requested slice is a
    // snapshot of the growth front.
    let complex = &mc.complex;
    let incidence = complex.cuff_incidence();
    let open_pieces = complex.pieces_with_open_slots();
    let mut pieces =
        crate::pants::slice_seed(complex).map_err(|e| CertError::TooShallow(e.to_string()))?;
    let mut failing = Vec::new();
    for n in 1..=horizon {
        if n > 1 {
            let mut next = pieces.clone();
            for &p in &pieces {
                for id in incidence.get(&p).into_iter().flatten() {
                    let c = complex.cuff(*id);
                    next.insert(c.a.piece);
                    next.insert(c.b.piece);
                }
            }
            if next == pieces {
                return Err(CertError::TooShallow(format!(
                    "slice {n} does not grow beyond the available pieces"
                )));
            }
            pieces = next;
        }
        if n < start {
            continue;
        }
        if let Some(p) = pieces.intersection(&open_pieces).next() {
            return Err(CertError::TooShallow(format!(
                "slice {n} reaches piece {p}, which still has un-expanded slots"
            )));
        }
        let mut frontier: BTreeSet<CuffId> = BTreeSet::new();
        for &p in &pieces {
            for id in incidence.get(&p).into_iter().flatten() {
                let c = complex.cuff(*id);
                if pieces.contains(&c.a.piece) != pieces.contains(&c.b.piece) {
                    frontier.insert(*id);
                }
            }
        }

        // All frontier labels agree; m is the crossing level.
        let mut labels = BTreeSet::new();
        for cuff in &frontier {
            labels.insert(mc.label_index(*cuff).ok_or_else(|| {
                CertError::Unsupported(format!("frontier cuff {cuff} is not factorial-labeled"))
            })?);
        }
        if labels.len() != 1 {
            return Err(CertError::Unsupported(format!(
                "slice {n} frontier carries mixed labels {labels:?}"
            )));
        }
        let m = *labels.iter().next().expect("one label");

        let exact_pass = exact_row_inequality(k, m);
        let lhs_log = k.ln() + ln_factorial(2 * m + 1);

        // The returning bound of every pants beyond the frontier; the row
        // stands on the weakest of them.
        let mut rhs: Option<LogLength> = None;
        for &cuff in &frontier {
            let (geometry, entry) =
                outside_pants_geometry(mc, &incidence, &open_pieces, &pieces, cuff)?;
            let bound = returning_arc_bound(&geometry, entry)?;
            rhs = Some(match rhs {
                Some(best) if best.log <= bound.log => best,
                _ => bound,
            });
        }
        let rhs =
            rhs.ok_or_else(|| CertError::Unsupported(format!("slice {n} has an empty frontier")))?;
        let slack_log = rhs.log - lhs_log;
        let numeric_pass = slack_log > 0.0;
        let pass = exact_pass && numeric_pass;
        if !pass {
            failing.push(n);
        }
        cert.ledger.push(LedgerRow {
            n,
            m,
            lhs_log,
            rhs_log: rhs.log,
            exact_pass,
            numeric_pass,
            slack_log,
            verdict: if pass {
                "contradiction established".into()
            } else {
                "FAILED".into()
            },
        });
    }
    if !failing.is_empty() {
        cert.status = CertStatus::Failed {
            failing_rows: failing,
        };
    }
    Ok(cert)
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

pub fn report_text(cert: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "non-wandering certificate  K = {}  N = {}  case = {:?}\n",
        cert.k, cert.n_threshold, cert.case_tag
    ));
    for note in &cert.notes {
        out.push_str(&format!("  note: {note}\n"));
    }
    match &cert.status {
        CertStatus::Refused { reason } => {
            out.push_str(&format!("REFUSED: {reason}\n"));
            return out;
        }
        CertStatus::Failed { failing_rows } => {
            out.push_str(&format!("FAILED rows: {failing_rows:?}\n"));
        }
        CertStatus::Valid => {}
    }
    out.push_str("  n   m    ln(K(2m+1)!)      ln(return bound)   slack        verdict\n");
    for row in &cert.ledger {
        out.push_str(&format!(
            "  {:<3} {:<4} {:<17.8} {:<18.8} {:<12.6} {}\n",
            row.n, row.m, row.lhs_log, row.rhs_log, row.slack_log, row.verdict
        ));
    }
    out.push_str(&format!("\n{}\n", cert.summary));
    out
}

pub fn to_json(cert: &Certificate) -> String {
    serde_json::to_string_pretty(cert).expect("certificate serializes")
}

pub fn from_json(data: &str) -> Result<Certificate, serde_json::Error> {
    serde_json::from_str(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::label_lengths;
    use crate::pants::build;
    use crate::tree::{truncate, CoreTree, TreeSpec, Vertex, VertexId, VertexKind};
    use std::collections::BTreeMap;

    fn labeled(spec: TreeSpec, depth: u32) -> MetricComplex {
        let tree = truncate(spec, depth);
        let complex = build(&tree).unwrap();
        let defaults: BTreeMap<_, _> = complex.cuffs.keys().map(|&c| (c, 1.0)).collect();
        label_lengths(&complex, &defaults).unwrap()
    }

    #[test]
    fn flute_threshold_is_one() {
        let mc = labeled(TreeSpec::Flute, 8);
        let t = compute_n(&mc, 2.0).unwrap();
        assert_eq!(t.n, 1, "least n with (2n+1)! > 2 is n = 1");
        assert_eq!(t.case_tag, CaseTag::InfiniteType1);
    }

    #[test]
    fn cantor_threshold_is_vacuous() {
        let mc = labeled(TreeSpec::Cantor, 8);
        let t = compute_n(&mc, 2.0).unwrap();
        assert_eq!(t.n, 1);
        assert_eq!(t.case_tag, CaseTag::FiniteType1);
        assert!(t.notes.iter().any(|n| n.contains("vacuous")));
    }

    #[test]
    fn hand_built_genus_tree_with_deep_type1_pants() {
        // Marked root, then a spine with exactly two one-puncture pants (in
        // slices 2 and 3), then plain pants forever: N = 3 + 1 = 4.
        let v = VertexId;
        let mut vertices = vec![
            Vertex {
                id: v(0),
                marked: true,
                kind: VertexKind::Interior,
            },
            Vertex {
                id: v(1),
                marked: false,
                kind: VertexKind::Interior,
            },
            Vertex {
                id: v(2),
                marked: false,
                kind: VertexKind::Leaf,
            },
            Vertex {
                id: v(3),
                marked: false,
                kind: VertexKind::Interior,
            },
            Vertex {
                id: v(4),
                marked: false,
                kind: VertexKind::Leaf,
            },
            Vertex {
                id: v(5),
                marked: false,
                kind: VertexKind::Interior,
            },
        ];
        let mut edges = vec![
            (v(0), v(1)),
            (v(1), v(2)),
            (v(1), v(3)),
            (v(3), v(4)),
            (v(3), v(5)),
        ];
        // v5 and below: binary type-0 branching, three levels, then
        // continuations.
        let mut next = 6u32;
        let mut frontier = vec![v(5)];
        for level in 0..4 {
            let mut newf = Vec::new();
            for p in frontier {
                for _ in 0..2 {
                    let id = v(next);
                    next += 1;
                    let kind = if level < 3 {
                        VertexKind::Interior
                    } else {
                        VertexKind::Continuation
                    };
                    vertices.push(Vertex {
                        id,
                        marked: false,
                        kind,
                    });
                    edges.push((p, id));
                    newf.push(id);
                }
            }
            frontier = newf;
        }
        let tree = CoreTree::from_parts(v(0), vertices, edges).unwrap();
        let complex = build(&tree).unwrap();
        let defaults: BTreeMap<_, _> = complex.cuffs.keys().map(|&c| (c, 1.0)).collect();
        let mc = label_lengths(&complex, &defaults).unwrap();

        let t = compute_n(&mc, 2.0).unwrap();
        assert_eq!(t.case_tag, CaseTag::PositiveGenus);
        assert_eq!(t.n, 4, "both one-puncture pants lie in slice 3");
    }

    #[test]
    fn exact_ledger_row_from_the_worked_instance() {
        // K = 5, n = m = 5: 5·11! against 11!·(12·13 − 1) = 11!·155.
        assert!(exact_row_inequality(5.0, 5));
        assert!(simplified_row_inequality(5.0, 5));
        // And K = n exactly passes for every n >= 1.
        for n in 1..40u64 {
            assert!(exact_row_inequality(n as f64, n));
        }
    }

    #[test]
    fn exact_and_simplified_rows_agree() {
        for m in 0..30u64 {
            for k in [1.0, 1.5, 2.0, 5.0, 10.0, 22.7, 1000.0, 1e6] {
                assert_eq!(
                    exact_row_inequality(k, m),
                    simplified_row_inequality(k, m),
                    "k={k}, m={m}"
                );
            }
        }
    }

    #[test]
    fn exact_rows_fail_when_k_is_too_large() {
        // (2m+2)(2m+3) − 1 = 5 at m = 0; K = 5 must NOT pass there.
        assert!(!exact_row_inequality(5.0, 0));
        assert!(!simplified_row_inequality(5.0, 0));
        assert!(exact_row_inequality(4.9, 0));
    }

    #[test]
    fn ledger_monotone_in_crossing_level() {
        // If the row passes at (K, m) it passes at larger m.
        for k in [2.0, 5.0, 10.0] {
            for m in 1..20u64 {
                if exact_row_inequality(k, m) {
                    assert!(exact_row_inequality(k, m + 1));
                    assert!(exact_row_inequality(k, m + 2));
                }
            }
        }
    }

    #[test]
    fn flute_certificate_is_valid() {
        let mc = labeled(TreeSpec::Flute, 20);
        let cert = verify_non_wandering(&mc, 5.0, 15, 2.0).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.status);
        assert_eq!(cert.ledger.len(), 11, "rows n = 5..=15");
        for row in &cert.ledger {
            assert_eq!(row.m, u64::from(row.n), "genus-0 frontier labels equal n");
            assert!(row.exact_pass && row.numeric_pass);
            assert!(row.slack_log > 0.0);
        }
    }

    #[test]
    fn cantor_certificate_uses_type0_pants() {
        let mc = labeled(TreeSpec::Cantor, 12);
        let cert = verify_non_wandering(&mc, 5.0, 9, 2.0).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.status);
        assert_eq!(cert.ledger.len(), 5);
        for row in &cert.ledger {
            assert_eq!(row.exact_pass, row.numeric_pass, "verdict routes agree");
        }
    }

    #[test]
    fn cantor_report_at_full_horizon() {
        // K = 5, horizon 15: ledger rows n = 5..=15.
        let mc = labeled(TreeSpec::Cantor, 18);
        let cert = verify_non_wandering(&mc, 5.0, 15, 2.0).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.status);
        assert_eq!(cert.ledger.len(), 11);
        assert!(cert
            .ledger
            .iter()
            .all(|r| r.verdict == "contradiction established"));
        let text = report_text(&cert);
        assert_eq!(text.matches("contradiction established").count(), 11);
    }

    #[test]
    fn genus_certificate_shifts_crossing_levels() {
        let mc = labeled(TreeSpec::FluteWithGenus { genus: 2 }, 16);
        let cert = verify_non_wandering(&mc, 3.0, 10, 2.0).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.status);
        for row in &cert.ledger {
            assert_eq!(
                row.m + 1,
                u64::from(row.n),
                "genus case frontier label is n − 1"
            );
        }
    }

    #[test]
    fn conformal_maps_pass_trivially() {
        let mc = labeled(TreeSpec::Flute, 10);
        let cert = verify_non_wandering(&mc, 1.0, 6, 2.0).unwrap();
        assert!(cert.is_valid());
        // K = 1: the distortion interval collapses; slack is the full gap.
        assert!(cert.ledger.iter().all(|r| r.slack_log > 1.0));
    }

    #[test]
    fn refusal_below_threshold() {
        // Push N up with a big pentagon threshold so K = 2 < N.
        let mc = labeled(TreeSpec::Flute, 12);
        let t = compute_n(&mc, 1e6).unwrap();
        assert!(t.n > 2, "5! = 120 < 1e6 < 7! so N = 3");
        let cert = verify_non_wandering(&mc, 2.0, 8, 1e6).unwrap();
        assert!(matches!(cert.status, CertStatus::Refused { .. }));
        assert!(cert.ledger.is_empty());
        let text = report_text(&cert);
        assert!(text.contains("REFUSED"));
    }

    #[test]
    fn refusal_never_issues_valid_certificates() {
        let mc = labeled(TreeSpec::Flute, 12);
        for k in [1.0, 1.5, 2.0, 2.99] {
            let cert = verify_non_wandering(&mc, k, 8, 1e6).unwrap();
            assert!(!cert.is_valid());
        }
    }

    #[test]
    fn shallow_horizon_errors() {
        let mc = labeled(TreeSpec::Flute, 6);
        let err = verify_non_wandering(&mc, 2.0, 30, 2.0).unwrap_err();
        assert!(matches!(err, CertError::TooShallow(_)));
    }

    #[test]
    fn certificate_json_round_trip() {
        let mc = labeled(TreeSpec::Flute, 12);
        let cert = verify_non_wandering(&mc, 2.0, 8, 2.0).unwrap();
        let back = from_json(&to_json(&cert)).unwrap();
        assert_eq!(cert, back);
        let text = report_text(&cert);
        assert!(text.contains("not machine-verified") || text.contains("Not machine-verified"));
    }

    #[test]
    fn dyadic_comparison_is_exact() {
        // 2.5 · 6 = 15 < 16 but not < 15.
        let six = BigUint::from(6u32);
        assert!(dyadic_times_lt(2.5, &six, &BigUint::from(16u32)));
        assert!(!dyadic_times_lt(2.5, &six, &BigUint::from(15u32)));
        // A K that is not exactly representable still compares exactly as
        // the f64 it is.
        let k = 0.1f64 * 30.0; // 3.0000000000000004
        assert!(!dyadic_times_lt(
            k,
            &BigUint::from(1u32),
            &BigUint::from(3u32)
        ));
    }
}
