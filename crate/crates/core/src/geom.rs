//! Hyperbolic trigonometry in the upper half-plane.
//!
//! Geodesics are recorded by their boundary endpoints (reals or ∞). The
//! distance between disjoint geodesics comes from the cross-ratio of the four
//! endpoints, rearranged so that no catastrophic cancellation occurs:
//! with N = (q1−p1)(q2−p2), D = (q1−p2)(q2−p1) one has D − N = (q2−q1)(p1−p2)
//! and cosh d = |N + D| / |D − N|.
//!
//! Every pants computation is done twice over in spirit: the closed forms
//! used in production were derived from explicit half-plane matrix models,
//! and the tests check them against word-enumeration and point-sampling
//! oracles built from `geodesic_distance` alone.
//!
//! For cuff lengths on the factorial scale the identities are evaluated in
//! log space (arguments above ~350 switch to asymptotic forms whose error is
//! below e⁻⁷⁰⁰), and past the range of f64 the returning-arc bound falls
//! back to an exact big-integer lower bound.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::metric::{Length, LogLength};
use crate::numeric::{ln_biguint, log_sum_exp, odd_factorial_exact};

const LN_2: f64 = std::f64::consts::LN_2;

/// Tolerance inside which the pentagon inequality is considered to hold.
pub const PENTAGON_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, thiserror::Error)]
pub enum GeomError {
    #[error("geodesic endpoints must be distinct")]
    IdenticalEndpoints,
    #[error("geodesics cross; their distance is undefined")]
    CrossingGeodesics,
    #[error("pentagon requires a > 1 and c > a, got a={a}, c={c}")]
    PentagonPrecondition { a: f64, c: f64 },
    #[error("the entry cuff is a cusp; returning arcs through it have no geodesic bound")]
    CuspEntry,
    #[error("quasiconformal constants must satisfy K >= 1, got {0}")]
    BadDistortion(f64),
    #[error("unsupported length configuration: {0}")]
    Unsupported(String),
}

// ---------------------------------------------------------------------------
// Boundary points and geodesics
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn is_infinite(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }
}

impl From<f64> for BoundaryPoint {
    fn from(x: f64) -> BoundaryPoint {
        BoundaryPoint::Finite(x)
    }
}

/// A complete geodesic: a half-circle or vertical line, named by its two
/// distinct boundary endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGeodesic {
    pub a: BoundaryPoint,
    pub b: BoundaryPoint,
}

impl BoundaryGeodesic {
    pub fn new(a: BoundaryPoint, b: BoundaryPoint) -> Result<BoundaryGeodesic, GeomError> {
        if a == b {
            return Err(GeomError::IdenticalEndpoints);
        }
        Ok(BoundaryGeodesic { a, b })
    }

    pub fn between(a: f64, b: f64) -> Result<BoundaryGeodesic, GeomError> {
        BoundaryGeodesic::new(a.into(), b.into())
    }

    /// The vertical line over x.
    pub fn vertical(x: f64) -> BoundaryGeodesic {
        BoundaryGeodesic {
            a: BoundaryPoint::Finite(x),
            b: BoundaryPoint::Infinity,
        }
    }

    fn shares_endpoint(&self, other: &BoundaryGeodesic) -> bool {
        self.a == other.a || self.a == other.b || self.b == other.a || self.b == other.b
    }
}

/// (x − y) with each factor touching ∞ replaced by the limiting 1; each
/// boundary point occurs once per product so the substitution is consistent.
fn diff(x: BoundaryPoint, y: BoundaryPoint) -> f64 {
    match (x, y) {
        (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => x - y,
        _ => 1.0,
    }
}

/// Length of the common perpendicular between two disjoint geodesics; zero
/// when they share an endpoint, an error when they cross.
pub fn geodesic_distance(g1: &BoundaryGeodesic, g2: &BoundaryGeodesic) -> Result<f64, GeomError> {
    if g1.shares_endpoint(g2) {
        return Ok(0.0);
    }
    let (p1, p2) = (g1.a, g1.b);
    let (q1, q2) = (g2.a, g2.b);
    let n = diff(q1, p1) * diff(q2, p2);
    let d = diff(q1, p2) * diff(q2, p1);
    let split = diff(q2, q1) * diff(p1, p2); // = d − n, computed without cancellation
    if n == 0.0 || d == 0.0 {
        return Ok(0.0); // endpoints coincide numerically: asymptotic
    }
    if n.signum() != d.signum() {
        return Err(GeomError::CrossingGeodesics);
    }
    // cosh dist − 1 = 2·min(N,D)/|D−N|
    let y = 2.0 * n.abs().min(d.abs()) / split.abs();
    Ok(arccosh1p(y))
}

/// arccosh(1 + y) for y ≥ 0, stable near 0 and for huge y.
fn arccosh1p(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    ((y * y + 2.0 * y).sqrt() + y).ln_1p()
}

/// arccosh(1 + e^ln_y) given only the log of y.
fn arccosh1p_from_log(ln_y: f64) -> f64 {
    if ln_y < 30.0 {
        arccosh1p(ln_y.exp())
    } else {
        // arccosh(1+y) = ln 2y + O(1/y)
        LN_2 + ln_y
    }
}

/// Hyperbolic distance from an interior point to a complete geodesic,
/// via an explicit normalizing transformation — the computational route the
/// cross-ratio formula is tested against.
pub fn point_to_geodesic(x: f64, y: f64, g: &BoundaryGeodesic) -> f64 {
    assert!(y > 0.0, "interior points have positive imaginary part");
    let m = normalize_to_axis(g);
    let (u, v) = m.apply_interior(x, y);
    (u.abs() / v).asinh()
}

// ---------------------------------------------------------------------------
// Möbius transformations
// ---------------------------------------------------------------------------

/// A real Möbius transformation with positive determinant, acting on the
/// upper half-plane and its boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mobius {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Mobius, GeomError> {
        if a * d - b * c <= 0.0 {
            return Err(GeomError::Unsupported(
                "Möbius transformations must have positive determinant".into(),
            ));
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Infinity => {
                if self.c == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * x + self.b) / den)
                }
            }
        }
    }

    pub fn apply_geodesic(&self, g: &BoundaryGeodesic) -> BoundaryGeodesic {
        BoundaryGeodesic {
            a: self.apply_boundary(g.a),
            b: self.apply_boundary(g.b),
        }
    }

    /// Action on an interior point x + iy.
    pub fn apply_interior(&self, x: f64, y: f64) -> (f64, f64) {
        // (a z + b)(conj(c z + d)) / |c z + d|^2
        let (nr, ni) = (self.a * x + self.b, self.a * y);
        let (dr, di) = (self.c * x + self.d, self.c * y);
        let den = dr * dr + di * di;
        ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
    }
}

/// A transformation taking g to the imaginary axis (0, ∞).
fn normalize_to_axis(g: &BoundaryGeodesic) -> Mobius {
    match (g.a, g.b) {
        (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => {
            if p < q {
                // z ↦ (z − p)/(q − z), determinant q − p > 0
                Mobius {
                    a: 1.0,
                    b: -p,
                    c: -1.0,
                    d: q,
                }
            } else {
                Mobius {
                    a: 1.0,
                    b: -q,
                    c: -1.0,
                    d: p,
                }
            }
        }
        (BoundaryPoint::Finite(p), BoundaryPoint::Infinity)
        | (BoundaryPoint::Infinity, BoundaryPoint::Finite(p)) => Mobius {
            a: 1.0,
            b: -p,
            c: 0.0,
            d: 1.0,
        },
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => unreachable!("endpoints distinct"),
    }
}

// ---------------------------------------------------------------------------
// Pants geometry
// ---------------------------------------------------------------------------

/// A hyperbolic pair of pants given by its three boundary lengths; cusps are
/// encoded as length 0 and at most two are allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PantsGeometry {
    cuffs: [Length; 3],
}

impl PantsGeometry {
    pub fn new(cuffs: [Length; 3]) -> Result<PantsGeometry, GeomError> {
        let cusps = cuffs.iter().filter(|l| is_cusp(l)).count();
        if cusps > 2 {
            return Err(GeomError::Unsupported(
                "at most two cusps in a pants".into(),
            ));
        }
        for l in &cuffs {
            if !is_cusp(l) && !l.is_positive() {
                return Err(GeomError::Unsupported(format!(
                    "cuff length {l} must be positive"
                )));
            }
        }
        Ok(PantsGeometry { cuffs })
    }

    pub fn cuffs(&self) -> &[Length; 3] {
        &self.cuffs
    }

    pub fn is_cusp(&self, i: usize) -> bool {
        is_cusp(&self.cuffs[i])
    }
}

fn is_cusp(l: &Length) -> bool {
    matches!(l, Length::Real(x) if *x == 0.0)
}

/// ln cosh h for h ≥ 0.
fn ln_cosh(h: f64) -> f64 {
    if h < 350.0 {
        h.cosh().ln()
    } else {
        h - LN_2 // + ln(1 + e^{−2h}), below resolution
    }
}

/// ln sinh h for h > 0.
fn ln_sinh(h: f64) -> f64 {
    if h < 350.0 {
        h.sinh().ln()
    } else {
        h - LN_2
    }
}

/// Half-length of a cuff as an f64; infinite once past f64 range.
fn half(l: &Length) -> f64 {
    if is_cusp(l) {
        0.0
    } else {
        l.value() / 2.0
    }
}

/// Distances between pairs of cuffs along their common perpendiculars.
/// Entry k is the distance between the two cuffs other than k; it is
/// infinite when either of those is a cusp. Evaluated in log space so
/// factorial-scale cuffs are fine as long as their values fit in f64.
pub fn pants_orthogeodesics(p: &PantsGeometry) -> Result<[f64; 3], GeomError> {
    let h: Vec<f64> = p.cuffs.iter().map(half).collect();
    if h.iter().any(|x| x.is_infinite()) {
        return Err(GeomError::Unsupported(
            "orthogeodesics past f64 range; use the returning-arc bound instead".into(),
        ));
    }
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        if p.is_cusp(i) || p.is_cusp(j) {
            *slot = f64::INFINITY;
            continue;
        }
        // cosh d − 1 = (cosh h_k + cosh(h_i − h_j)) / (sinh h_i sinh h_j)
        let ln_num = log_sum_exp(ln_cosh(h[k]), ln_cosh((h[i] - h[j]).abs()));
        let ln_y = ln_num - ln_sinh(h[i]) - ln_sinh(h[j]);
        *slot = arccosh1p_from_log(ln_y);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Returning arcs
// ---------------------------------------------------------------------------

/// cosh η − 1 in log space for the orthogeodesic from the entry cuff back to
/// itself, wrapping the boundary labeled `around` (the remaining boundary is
/// `other`). Derived from the half-plane matrix model: with
/// a = −(c_other + c_around·e^{−h₁})/s₁ and d = 2c_around − a one has
/// cosh η = 1 − 2ad; the two wrapping choices give identical values.
fn returning_arc_log_y(h1: f64, around: f64, other: f64) -> f64 {
    let ls1 = ln_sinh(h1);
    // u = c_other + c_around·e^{−h1}
    let ln_u = log_sum_exp(ln_cosh(other), ln_cosh(around) - h1);
    // t = 2·c_around·s1 + u
    let ln_t = log_sum_exp(LN_2 + ln_cosh(around) + ls1, ln_u);
    LN_2 + ln_u + ln_t - 2.0 * ls1
}

/// The two returning routes (around either far boundary). They coincide
/// exactly; both are exposed so the symmetry is testable.
pub fn returning_arc_routes(p: &PantsGeometry, entry: usize) -> Result<[LogLength; 2], GeomError> {
    assert!(entry < 3);
    if p.is_cusp(entry) {
        return Err(GeomError::CuspEntry);
    }
    let others = [(entry + 1) % 3, (entry + 2) % 3];
    let h: Vec<f64> = p.cuffs.iter().map(half).collect();
    if h.iter().all(|x| x.is_finite()) {
        let mut out = [LogLength::from_log(0.0); 2];
        for (slot, &x) in others.iter().enumerate() {
            let y = others[1 - slot];
            let eta = arccosh1p_from_log(returning_arc_log_y(h[entry], h[x], h[y]));
            out[slot] = LogLength::from_value(eta);
        }
        return Ok(out);
    }
    let b = returning_arc_exact_bound(p, entry, others)?;
    Ok([b, b])
}

/// Lower bound for the length of any essential arc entering and leaving the
/// pants through `entry`. Equals the exact orthogeodesic length while the
/// lengths fit in f64, and a certified big-integer lower bound beyond.
pub fn returning_arc_bound(p: &PantsGeometry, entry: usize) -> Result<LogLength, GeomError> {
    let routes = returning_arc_routes(p, entry)?;
    Ok(if routes[0].log <= routes[1].log {
        routes[0]
    } else {
        routes[1]
    })
}

/// Rigorous big-integer bound for factorial-scale cuffs, from
/// cosh η ≥ 2e^{2(h_X − h₁)} and cosh η ≥ 2e^{h_X + h_Y − h₁}:
/// η ≥ max(L_X − L₁, (L_X + L_Y − L₁)/2) + ln 2.
fn returning_arc_exact_bound(
    p: &PantsGeometry,
    entry: usize,
    others: [usize; 2],
) -> Result<LogLength, GeomError> {
    let exact = |i: usize| -> Result<BigUint, GeomError> {
        if p.is_cusp(i) {
            return Ok(BigUint::zero());
        }
        match p.cuffs[i] {
            Length::Factorial(k) => Ok(odd_factorial_exact(k)),
            Length::Real(x) => {
                if x.is_finite() {
                    // Reals are tiny next to the factorial that forced this
                    // path; round down so the bound stays a lower bound.
                    Ok(BigUint::from(x.floor() as u64))
                } else {
                    Err(GeomError::Unsupported("non-finite real cuff".into()))
                }
            }
        }
    };
    let l1 = exact(entry)?;
    let la = exact(others[0])?;
    let lb = exact(others[1])?;
    let (lx, ly) = if la >= lb { (la, lb) } else { (lb, la) };
    // In doubled units: b1 = 2(L_X − L1), b2 = L_X + L_Y − L1.
    let two_lx = &lx * 2u32;
    let two_l1 = &l1 * 2u32;
    let b1 = if two_lx > two_l1 {
        &two_lx - &two_l1
    } else {
        BigUint::zero()
    };
    let sum = &lx + &ly;
    let b2 = if sum > l1 {
        &sum - &l1
    } else {
        BigUint::zero()
    };
    let best = b1.max(b2);
    if best.is_zero() {
        return Err(GeomError::Unsupported(
            "no positive returning-arc bound: far cuffs are not longer than the entry".into(),
        ));
    }
    // η ≥ best/2 + ln 2 > best/2.
    Ok(LogLength::from_log(ln_biguint(&best) - LN_2))
}

// ---------------------------------------------------------------------------
// The ideal pentagon
// ---------------------------------------------------------------------------

/// Explicit half-plane realization of the ideal right-angled pentagon with
/// one ideal vertex (at ∞), sides of lengths `a` and `c` on the two outer
/// finite sides, and four right angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pentagon {
    /// Infinite side through the a-corner: the imaginary axis.
    pub left: BoundaryGeodesic,
    /// The side of length a, on the unit circle.
    pub side_a: BoundaryGeodesic,
    /// The middle finite side, orthogonal to both outer ones.
    pub middle: BoundaryGeodesic,
    /// The side of length c.
    pub side_c: BoundaryGeodesic,
    /// Infinite side through the c-corner: the vertical over w.
    pub right: BoundaryGeodesic,
}

/// Build the pentagon. The left infinite side is the imaginary axis, the
/// a-side lies on the unit circle, and the right infinite side stands at
/// w = 2·cosh²(c/2)/sinh(a) + tanh(a/2).
pub fn pentagon(a: f64, c: f64) -> Result<Pentagon, GeomError> {
    if !(a.is_finite() && c.is_finite()) || a <= 1.0 || c <= a {
        return Err(GeomError::PentagonPrecondition { a, c });
    }
    // Middle side: endpoints (e^{−u}, e^{u}) with e^{u} = coth(a/2), so that
    // the arc of the unit circle from i to the crossing has length a.
    let eu = 1.0 / (a / 2.0).tanh();
    let middle = BoundaryGeodesic::between(1.0 / eu, eu)?;
    // Right side position w makes the c-side (⊥ middle, ⊥ right) have
    // length c; stable form without the tanh² cancellation.
    let hc = c / 2.0;
    let w = if hc < 350.0 {
        2.0 * hc.cosh().powi(2) / a.sinh() + (a / 2.0).tanh()
    } else {
        return Err(GeomError::Unsupported(
            "pentagon side c too large for f64".into(),
        ));
    };
    // c-side: circle centered at w with radius² = w² − 2w·cosh u + 1, which
    // factors as (w − e^u)(w − e^{−u}).
    let rc = ((w - eu) * (w - 1.0 / eu)).sqrt();
    let side_c = BoundaryGeodesic::between(w - rc, w + rc)?;
    Ok(Pentagon {
        left: BoundaryGeodesic::vertical(0.0),
        side_a: BoundaryGeodesic::between(-1.0, 1.0)?,
        middle,
        side_c,
        right: BoundaryGeodesic::vertical(w),
    })
}

/// The pentagon bound: d is the orthogonal segment from the a-side to the
/// far infinite side, computed with `geodesic_distance`; `holds` reports
/// d ≥ c − a up to `PENTAGON_TOLERANCE`.
pub fn pentagon_check(a: f64, c: f64) -> Result<(f64, bool), GeomError> {
    let pent = pentagon(a, c)?;
    let d = geodesic_distance(&pent.side_a, &pent.right)?;
    Ok((d, d - (c - a) >= -PENTAGON_TOLERANCE))
}

// ---------------------------------------------------------------------------
// Distortion intervals
// ---------------------------------------------------------------------------

/// The closed interval [l/K, K·l] that a K-quasiconformal map confines a
/// geodesic length to, in log space. K = 1 collapses it to {l}.
pub fn wolpert_interval(k: f64, l: &Length) -> Result<(LogLength, LogLength), GeomError> {
    if !k.is_finite() || k < 1.0 {
        return Err(GeomError::BadDistortion(k));
    }
    let log = l.log_value();
    let spread = k.ln();
    Ok((
        LogLength::from_log(log - spread),
        LogLength::from_log(log + spread),
    ))
}
