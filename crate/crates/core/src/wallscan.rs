//! Enumeration of numerically possible destabilizing walls for a fixed `v`.
//!
//! Candidates `w` range over a lattice: `e0 ∈ Hⁿ·{1..rank_max}`,
//! `e1 ∈ (1/d₁)ℤ`, `e2 ∈ e1²/(2Hⁿ) + (1/d₂)ℤ`. A candidate survives when both
//! `w` and `v − w` satisfy the Bogomolov inequality, the wall is a non-empty
//! semicircle meeting the β-window, and at the apex of the wall
//! `0 < Im Z(w) < Im Z(v)`.
//!
//! Finiteness: writing `D = Δ̄(v)/v0²` and `x = μ(v) − s`, those conditions
//! force `μ(v)·w0 − w0√D < e1(w) < μ(v)·w0 + max(0, v0 − w0)√D`, and the radius
//! is bounded in terms of the smallest nonzero `|e1(w) − μ(v)w0|` on the
//! lattice. `e2` is then pinned to an interval by the center formula.

use std::cmp::Ordering;
use std::ops::AddAssign;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::chern::{ChernTriple, GeometryContext};
use crate::error::{domain, Error, Result};
use crate::exactnum::{format_rational, QuadValue, Rational};
use crate::walls::{classify_type, numerical_wall, Semicircle, WallDescriptor, WallType};

/// Default cap on the number of lattice points a scan may visit.
pub const DEFAULT_GUARD: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRequest {
    pub v: ChernTriple,
    pub ctx: GeometryContext,
    pub rank_max: u64,
    pub e1_denominator: u64,
    pub e2_denominator: u64,
    pub window: (Rational, Rational),
    pub guard: u64,
}

impl ScanRequest {
    /// Unit denominators and the default guard.
    pub fn new(
        v: ChernTriple,
        ctx: GeometryContext,
        rank_max: u64,
        window: (Rational, Rational),
    ) -> Self {
        ScanRequest {
            v,
            ctx,
            rank_max,
            e1_denominator: 1,
            e2_denominator: 1,
            window,
            guard: DEFAULT_GUARD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateWall {
    pub w: ChernTriple,
    pub wall: Semicircle,
    pub wall_type: WallType,
}

impl Serialize for CandidateWall {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(5))?;
        map.serialize_entry("w", &self.w)?;
        map.serialize_entry("kind", "circle")?;
        map.serialize_entry("s", &format_rational(&self.wall.center))?;
        map.serialize_entry("rsq", &format_rational(&self.wall.radius_sq))?;
        map.serialize_entry("type", &self.wall_type.number())?;
        map.end()
    }
}

/// How many lattice points each filter rejected.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanDiagnostics {
    pub visited: u64,
    pub proportional: u64,
    pub negative_discriminant: u64,
    pub negative_quotient_discriminant: u64,
    pub vertical: u64,
    pub empty: u64,
    pub outside_window: u64,
    pub heart: u64,
    pub type2: u64,
    pub accepted: u64,
}

impl AddAssign for ScanDiagnostics {
    fn add_assign(&mut self, o: ScanDiagnostics) {
        self.visited += o.visited;
        self.proportional += o.proportional;
        self.negative_discriminant += o.negative_discriminant;
        self.negative_quotient_discriminant += o.negative_quotient_discriminant;
        self.vertical += o.vertical;
        self.empty += o.empty;
        self.outside_window += o.outside_window;
        self.heart += o.heart;
        self.type2 += o.type2;
        self.accepted += o.accepted;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub walls: Vec<CandidateWall>,
    pub diagnostics: ScanDiagnostics,
}

/// The walls alone, sorted by center descending.
pub fn enumerate_candidate_walls(req: &ScanRequest) -> Result<Vec<CandidateWall>> {
    Ok(scan(req)?.walls)
}

/// One `(w0, w1)` column of the lattice with its range of `e2` steps.
struct Column {
    w0: Rational,
    w1: Rational,
    k_lo: BigInt,
    k_hi: BigInt,
}

impl Column {
    fn len(&self) -> u64 {
        if self.k_hi < self.k_lo {
            0
        } else {
            (&self.k_hi - &self.k_lo + BigInt::one()).to_u64().unwrap_or(u64::MAX)
        }
    }
}

fn integer(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

/// Smallest nonzero `|n/den − t|` over integers `n`.
fn lattice_gap(t: &Rational, den: u64) -> Rational {
    let scaled = t * integer(den);
    let frac = &scaled - scaled.floor();
    let steps = if frac.is_zero() {
        Rational::one()
    } else {
        frac.clone().min(Rational::one() - frac)
    };
    steps / integer(den)
}

fn check_request(req: &ScanRequest) -> Result<()> {
    if req.rank_max == 0 || req.e1_denominator == 0 || req.e2_denominator == 0 {
        return Err(domain("rank bound and denominators must be positive"));
    }
    if req.window.0 >= req.window.1 {
        return Err(domain("the beta window must have lo < hi"));
    }
    if !req.v.e0.is_positive() {
        return Err(domain(format!("{} must have e0 > 0", req.v)));
    }
    if req.v.discriminant().is_negative() {
        return Err(domain(format!("{} has negative discriminant", req.v)));
    }
    for (name, value) in [
        ("rank bound", req.rank_max),
        ("e1 denominator", req.e1_denominator),
        ("e2 denominator", req.e2_denominator),
    ] {
        if value > req.guard {
            return Err(Error::Refused(format!(
                "{name} {value} exceeds the enumeration guard {}",
                req.guard
            )));
        }
    }
    Ok(())
}

/// All `(w0, w1)` columns with their `e2` ranges, or a refusal when the
/// lattice is larger than the guard.
fn columns(req: &ScanRequest) -> Result<Vec<Column>> {
    let v = &req.v;
    let hn = &req.ctx.hn;
    let v0 = &v.e0;
    let mu_v = &v.e1 / v0;
    let d = v.discriminant() / (v0 * v0);
    let sqrt_d = QuadValue::sqrt(&d)?;
    let half = Rational::new(1.into(), 2.into());
    let e1_den = integer(req.e1_denominator);
    let e2_den = integer(req.e2_denominator);
    let mut out = Vec::new();
    let mut total: u64 = 0;
    for k in 1..=req.rank_max {
        let w0 = integer(k) * hn;
        let base = &mu_v * &w0;
        let lo = (-sqrt_d.mul_rational(&w0)).add_rational(&base);
        let room = (v0 - &w0).max(Rational::zero());
        let hi = sqrt_d.mul_rational(&room).add_rational(&base);
        let n_lo = lo.mul_rational(&e1_den).floor();
        let n_hi = hi.mul_rational(&e1_den).ceil();
        let count = (&n_hi - &n_lo + BigInt::one()).to_u64().unwrap_or(u64::MAX);
        if count > req.guard {
            return Err(Error::Refused(format!(
                "{count} e1 values at e0 = {} exceed the guard {}",
                format_rational(&w0),
                req.guard
            )));
        }
        // Radius bound from the lattice gap, tightened when w0 > v0.
        let gap = lattice_gap(&base, req.e1_denominator);
        let span = w0.clone().max(v0.clone());
        let rho = &d * &span / (Rational::from_integer(2.into()) * &gap);
        let mut rho_sq = &rho * &rho;
        if w0 > *v0 {
            let alt = v.discriminant() / (Rational::from_integer(4.into()) * &w0 * (&w0 - v0));
            rho_sq = rho_sq.min(alt);
        }
        let x_lo = sqrt_d.clone();
        let x_hi = QuadValue::sqrt(&(&rho_sq + &d))?;
        let mut n = n_lo;
        while n <= n_hi {
            let w1 = Rational::new(n.clone(), 1.into()) / &e1_den;
            n += 1;
            let w1p = &w1 - &base;
            if w1p.is_zero() {
                continue;
            }
            // Twisted by μ(v): w2' = −x·w1' − (D/2)·w0 for x in [x_lo, x_hi].
            let offset = &mu_v * &w1 - &half * &mu_v * &mu_v * &w0;
            let c = -(&half * &d * &w0) + &offset;
            let at_lo = x_lo.mul_rational(&-w1p.clone()).add_rational(&c);
            let at_hi = x_hi.mul_rational(&-w1p).add_rational(&c);
            let (mut lo2, hi2) = if at_lo <= at_hi {
                (at_lo, at_hi)
            } else {
                (at_hi, at_lo)
            };
            let lattice_base = &w1 * &w1 / (Rational::from_integer(2.into()) * hn);
            // Bogomolov for w caps e2 at w1²/(2w0).
            let cap = QuadValue::from(&w1 * &w1 / (Rational::from_integer(2.into()) * &w0));
            let hi2 = hi2.min(cap);
            if lo2 > hi2 {
                continue;
            }
            lo2 = lo2.add_rational(&-lattice_base.clone());
            let k_lo = lo2.mul_rational(&e2_den).ceil();
            let k_hi = hi2.add_rational(&-lattice_base).mul_rational(&e2_den).floor();
            let column = Column {
                w0: w0.clone(),
                w1,
                k_lo,
                k_hi,
            };
            total = total.saturating_add(column.len());
            if total > req.guard {
                return Err(Error::Refused(format!(
                    "the scan would visit more than {} lattice points; raise the guard or shrink the request",
                    req.guard
                )));
            }
            if column.len() > 0 {
                out.push(column);
            }
        }
    }
    Ok(out)
}

enum Verdict {
    Accept(Box<CandidateWall>),
    Reject(fn(&mut ScanDiagnostics)),
}

fn judge(req: &ScanRequest, w: ChernTriple) -> Result<Verdict> {
    let v = &req.v;
    if w.is_proportional_to(v) {
        return Ok(Verdict::Reject(|d| d.proportional += 1));
    }
    if w.discriminant().is_negative() {
        return Ok(Verdict::Reject(|d| d.negative_discriminant += 1));
    }
    if v.minus(&w).discriminant().is_negative() {
        return Ok(Verdict::Reject(|d| d.negative_quotient_discriminant += 1));
    }
    let circle = match numerical_wall(&w, v)? {
        WallDescriptor::Semicircle(c) => c,
        WallDescriptor::VerticalLine { .. } => return Ok(Verdict::Reject(|d| d.vertical += 1)),
        WallDescriptor::Empty => return Ok(Verdict::Reject(|d| d.empty += 1)),
    };
    let (lo, hi) = &req.window;
    if circle.left_end() > QuadValue::from(hi) || circle.right_end() < QuadValue::from(lo) {
        return Ok(Verdict::Reject(|d| d.outside_window += 1));
    }
    let s = &circle.center;
    let im_w = &w.e1 - s * &w.e0;
    let im_v = &v.e1 - s * &v.e0;
    if !im_w.is_positive() || im_w >= im_v {
        return Ok(Verdict::Reject(|d| d.heart += 1));
    }
    let wall_type = match (&w.e1 / &w.e0).cmp(&(&v.e1 / &v.e0)) {
        Ordering::Less => classify_type(&w, v)?,
        _ => classify_type(v, &w)?,
    };
    if wall_type == WallType::Type2 {
        return Ok(Verdict::Reject(|d| d.type2 += 1));
    }
    Ok(Verdict::Accept(Box::new(CandidateWall {
        w,
        wall: circle,
        wall_type,
    })))
}

fn scan_column(req: &ScanRequest, col: &Column) -> Result<(Vec<CandidateWall>, ScanDiagnostics)> {
    let mut found = Vec::new();
    let mut diag = ScanDiagnostics::default();
    let two_hn = Rational::from_integer(2.into()) * &req.ctx.hn;
    let base = &col.w1 * &col.w1 / two_hn;
    let e2_den = integer(req.e2_denominator);
    let mut k = col.k_lo.clone();
    while k <= col.k_hi {
        let w2 = &base + Rational::from_integer(k.clone()) / &e2_den;
        k += 1;
        diag.visited += 1;
        let w = ChernTriple::new(col.w0.clone(), col.w1.clone(), w2);
        match judge(req, w)? {
            Verdict::Accept(c) => {
                diag.accepted += 1;
                found.push(*c);
            }
            Verdict::Reject(count) => count(&mut diag),
        }
    }
    Ok((found, diag))
}

/// Sort key: center descending, then `w` by components.
pub fn nesting_order(a: &CandidateWall, b: &CandidateWall) -> Ordering {
    b.wall
        .center
        .cmp(&a.wall.center)
        .then_with(|| (&a.w.e0, &a.w.e1, &a.w.e2).cmp(&(&b.w.e0, &b.w.e1, &b.w.e2)))
}

/// Walls with per-filter counts. Runs the columns in parallel; the result
/// does not depend on scheduling.
pub fn scan(req: &ScanRequest) -> Result<ScanReport> {
    check_request(req)?;
    if req.v.discriminant().is_zero() {
        return Ok(ScanReport {
            walls: Vec::new(),
            diagnostics: ScanDiagnostics::default(),
        });
    }
    let cols = columns(req)?;
    let parts = cols
        .par_iter()
        .map(|c| scan_column(req, c))
        .collect::<Result<Vec<_>>>()?;
    let mut walls = Vec::new();
    let mut diagnostics = ScanDiagnostics::default();
    for (found, diag) in parts {
        walls.extend(found);
        diagnostics += diag;
    }
    walls.sort_by(nesting_order);
    Ok(ScanReport { walls, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn ideal_request(window: (Rational, Rational)) -> ScanRequest {
        ScanRequest::new(
            ChernTriple::new(int(1), int(0), int(-1)),
            GeometryContext::new(3, int(1)).unwrap(),
            2,
            window,
        )
    }

    #[test]
    fn finds_the_line_bundle_wall() {
        let walls = enumerate_candidate_walls(&ideal_request((int(-3), int(0)))).unwrap();
        let target = ChernTriple::new(int(1), int(-1), rat(1, 2));
        let hit = walls.iter().find(|c| c.w == target).expect("wall present");
        assert_eq!(hit.wall, Semicircle { center: rat(-3, 2), radius_sq: rat(1, 4) });
        assert_eq!(hit.wall_type, WallType::Type1);
    }

    #[test]
    fn window_touching_the_endpoint_keeps_the_wall() {
        let walls = enumerate_candidate_walls(&ideal_request((int(-1), int(0)))).unwrap();
        assert!(walls.iter().any(|c| c.wall.center == rat(-3, 2)));
        let walls = enumerate_candidate_walls(&ideal_request((rat(-1, 2), int(0)))).unwrap();
        assert!(walls.iter().all(|c| c.wall.center != rat(-3, 2)));
    }

    #[test]
    fn zero_discriminant_has_no_walls() {
        let mut req = ideal_request((int(-10), int(0)));
        req.v = ChernTriple::new(int(1), int(0), int(0));
        assert!(enumerate_candidate_walls(&req).unwrap().is_empty());
    }

    #[test]
    fn sorted_by_center_descending() {
        let mut req = ideal_request((int(-10), int(0)));
        req.rank_max = 3;
        let walls = enumerate_candidate_walls(&req).unwrap();
        assert!(walls.windows(2).all(|p| p[0].wall.center >= p[1].wall.center));
    }

    #[test]
    fn guard_refuses_large_requests() {
        let mut req = ideal_request((int(-3), int(0)));
        req.guard = 3;
        req.rank_max = 10;
        assert!(matches!(scan(&req), Err(Error::Refused(_))));
    }

    #[test]
    fn request_validation() {
        assert!(scan(&ideal_request((int(0), int(0)))).is_err());
        let mut req = ideal_request((int(-1), int(0)));
        req.e1_denominator = 0;
        assert!(scan(&req).is_err());
    }

    #[test]
    fn json_shape() {
        let walls = enumerate_candidate_walls(&ideal_request((int(-3), int(0)))).unwrap();
        let json = serde_json::to_value(&walls[0]).unwrap();
        assert_eq!(json["kind"], "circle");
        assert!(json["w"]["e0"].is_string());
    }
}
