//! Effective vanishing bounds derived from the stability regions, Farey
//! rounding, and effective Serre vanishing / regularity on surfaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{ChernTriple, GeometryContext};
use crate::error::{domain, Result};
use crate::exactnum::{rational_str, QuadValue, Rational};
use crate::stability::{shift_case, sheaf_case, SlopeBoundInput, StabilityCase};

/// `[r]_m`: the largest fraction `a/b < r` with `1 ≤ b ≤ m`.
///
/// Walks the Stern–Brocot tree between consecutive integers, taking runs of
/// identical moves in one step, so the cost is logarithmic in `m`.
pub fn farey_floor(r: &Rational, m: u64) -> Rational {
    assert!(m >= 1, "denominator bound must be positive");
    let m = BigInt::from(m);
    // Invariant: lp/lq < r ≤ rp/rq, the two are Farey neighbours.
    let mut lp = r.ceil().to_integer() - BigInt::one();
    let mut lq = BigInt::one();
    let mut rp = &lp + BigInt::one();
    let mut rq = BigInt::one();
    let (x_num, x_den) = (r.numer().clone(), r.denom().clone());
    // Sign of r − p/q times q·den, i.e. x_num·q − p·x_den.
    let gap = |p: &BigInt, q: &BigInt| &x_num * q - p * &x_den;
    while &lq + &rq <= m {
        let left_gap = gap(&lp, &lq);
        let right_gap = -gap(&rp, &rq);
        // The mediant (lp + k·rp)/(lq + k·rq) stays left of r while
        // k·right_gap < left_gap.
        let k_cap = (&m - &lq) / &rq;
        let k_left = if right_gap.is_zero() {
            k_cap.clone()
        } else {
            let (quo, rem) = left_gap.div_rem(&right_gap);
            if rem.is_zero() {
                quo - BigInt::one()
            } else {
                quo
            }
        };
        let k = k_left.min(k_cap);
        if k.is_positive() {
            lp += &k * &rp;
            lq += &k * &rq;
            continue;
        }
        // Otherwise the mediant is ≥ r; move the right end instead, as far as
        // mediants remain ≥ r.
        let left_gap = gap(&lp, &lq);
        let right_gap = -gap(&rp, &rq);
        let k_cap = (&m - &rq) / &lq;
        let k_right = &right_gap / &left_gap;
        let k = k_right.min(k_cap).max(BigInt::one());
        rp += &k * &lp;
        rq += &k * &lq;
    }
    Rational::new(lp, lq)
}

/// Intersection numbers on a surface: `H²`, `K·H`, `K²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceContext {
    #[serde(with = "rational_str")]
    pub hh: Rational,
    #[serde(with = "rational_str")]
    pub kh: Rational,
    #[serde(with = "rational_str")]
    pub kk: Rational,
}

impl SurfaceContext {
    pub fn new(hh: Rational, kh: Rational, kk: Rational) -> Result<Self> {
        if !hh.is_positive() {
            return Err(domain("H^2 must be positive"));
        }
        Ok(SurfaceContext { hh, kh, kk })
    }

    /// `ℙ²` with `H` a line: `H² = 1`, `K·H = −3`, `K² = 9`.
    pub fn projective_plane() -> Self {
        SurfaceContext {
            hh: Rational::one(),
            kh: Rational::from_integer((-3).into()),
            kk: Rational::from_integer(9.into()),
        }
    }
}

/// One Harder–Narasimhan factor, described by its `K`-twisted invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnFactor {
    pub rank: u64,
    #[serde(rename = "muK", with = "rational_str")]
    pub mu_k: Rational,
    #[serde(rename = "deltaK", with = "rational_str")]
    pub delta_k: Rational,
}

/// Raw numerical data of a sheaf on a surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSheafData {
    pub rank: u64,
    #[serde(rename = "c1H", with = "rational_str")]
    pub c1_h: Rational,
    #[serde(rename = "c1K", with = "rational_str")]
    pub c1_k: Rational,
    #[serde(with = "rational_str")]
    pub ch2: Rational,
}

/// `μ_{H,K}` and `Δ̄^K_H` of a sheaf.
pub fn twisted_invariants(s: &SurfaceSheafData, ctx: &SurfaceContext) -> Result<HnFactor> {
    if s.rank == 0 {
        return Err(domain("rank must be at least 1"));
    }
    let r = Rational::from_integer(s.rank.into());
    let two = Rational::from_integer(2.into());
    let d1 = &s.c1_h - &r * &ctx.kh;
    let mu_k = &d1 / (&ctx.hh * &r);
    let twisted_ch2 = &s.ch2 - &s.c1_k + &r * &ctx.kk / &two;
    let delta_k = &d1 * &d1 - two * &ctx.hh * &r * twisted_ch2;
    Ok(HnFactor {
        rank: s.rank,
        mu_k,
        delta_k,
    })
}

fn smallest_integer_above(bound: &QuadValue) -> BigInt {
    bound.next_integer_above()
}

fn top_minus_one_bound(case: &StabilityCase) -> QuadValue {
    match case {
        StabilityCase::Strip { beta } => QuadValue::from(-beta.clone()),
        StabilityCase::Ray { beta } => -beta.clone(),
        StabilityCase::HalfPlane { mu } => QuadValue::from(-mu.clone()),
    }
}

/// The bound `l > …` for `Hⁿ⁻¹(E(K + lH)) = 0`.
pub fn vanishing_top_minus_one_bound(
    v: &ChernTriple,
    mu: &SlopeBoundInput,
    ctx: &GeometryContext,
) -> Result<QuadValue> {
    Ok(top_minus_one_bound(&sheaf_case(v, mu, ctx)?))
}

/// Smallest `l` with `Hⁿ⁻¹(E(K + lH)) = 0` guaranteed.
pub fn vanishing_top_minus_one(
    v: &ChernTriple,
    mu: &SlopeBoundInput,
    ctx: &GeometryContext,
) -> Result<BigInt> {
    Ok(smallest_integer_above(&vanishing_top_minus_one_bound(v, mu, ctx)?))
}

/// The bound `l > …` for `H¹(E(−lH)) = 0`.
pub fn vanishing_h1_bound(
    v: &ChernTriple,
    mu_bar: &SlopeBoundInput,
    ctx: &GeometryContext,
) -> Result<QuadValue> {
    Ok(match shift_case(v, mu_bar, ctx)? {
        StabilityCase::Strip { beta } => QuadValue::from(beta),
        StabilityCase::Ray { beta } => beta,
        StabilityCase::HalfPlane { mu } => QuadValue::from(mu),
    })
}

/// Smallest `l` with `H¹(E(−lH)) = 0` guaranteed.
pub fn vanishing_h1(
    v: &ChernTriple,
    mu_bar: &SlopeBoundInput,
    ctx: &GeometryContext,
) -> Result<BigInt> {
    Ok(smallest_integer_above(&vanishing_h1_bound(v, mu_bar, ctx)?))
}

fn check_factors(factors: &[HnFactor]) -> Result<()> {
    if factors.is_empty() {
        return Err(domain("factor list is empty"));
    }
    for f in factors {
        if f.rank == 0 {
            return Err(domain("factor rank must be at least 1"));
        }
        if f.delta_k.is_negative() {
            return Err(domain("factor discriminant must be nonnegative"));
        }
    }
    Ok(())
}

/// `√(2Δ̄/(H⁴·rank)) − μ`, shared by both forms of the bound.
fn sqrt_term(f: &HnFactor, ctx: &SurfaceContext) -> Result<QuadValue> {
    let r = Rational::from_integer(f.rank.into());
    let inner = Rational::from_integer(2.into()) * &f.delta_k / (&ctx.hh * &ctx.hh * r);
    Ok(QuadValue::sqrt(&inner)?.add_rational(&-f.mu_k.clone()))
}

/// The two per-factor terms of `M(F)`.
pub fn serre_terms(f: &HnFactor, ctx: &SurfaceContext) -> Result<(Rational, QuadValue)> {
    let r = Rational::from_integer(f.rank.into());
    let scaled = &ctx.hh * &f.mu_k;
    let below = &scaled - farey_floor(&scaled, f.rank);
    let first = &f.delta_k / (&ctx.hh * r) / below - &f.mu_k;
    Ok((first, sqrt_term(f, ctx)?))
}

/// `M(F)`: `H¹(F(lH)) = 0` for every integer `l > M(F)`.
pub fn serre_bound(factors: &[HnFactor], ctx: &SurfaceContext) -> Result<QuadValue> {
    check_factors(factors)?;
    let mut best: Option<QuadValue> = None;
    for f in factors {
        let (first, second) = serre_terms(f, ctx)?;
        for term in [QuadValue::from(first), second] {
            best = Some(match best {
                Some(b) if b >= term => b,
                _ => term,
            });
        }
    }
    Ok(best.expect("factor list is nonempty"))
}

/// The simpler form `max{Δ̄/H² − μ, √(2Δ̄/(H⁴·rank)) − μ}`.
pub fn serre_bound_weak(factors: &[HnFactor], ctx: &SurfaceContext) -> Result<QuadValue> {
    check_factors(factors)?;
    let mut terms = Vec::with_capacity(2 * factors.len());
    for f in factors {
        terms.push(QuadValue::from(&f.delta_k / &ctx.hh - &f.mu_k));
        terms.push(sqrt_term(f, ctx)?);
    }
    Ok(terms.into_iter().max().expect("factor list is nonempty"))
}

/// `max{1 + M(F), 2 − μ_{H,K}(G_k)}`; `F` is `m`-regular for every `m`
/// above it. Factors must be listed by strictly decreasing slope.
pub fn cm_regularity_bound(factors: &[HnFactor], ctx: &SurfaceContext) -> Result<QuadValue> {
    check_factors(factors)?;
    if factors.windows(2).any(|p| p[0].mu_k <= p[1].mu_k) {
        return Err(domain("factors must have strictly decreasing slopes"));
    }
    let m = serre_bound(factors, ctx)?.add_rational(&Rational::one());
    let last = factors.last().expect("nonempty");
    let tail = QuadValue::from(Rational::from_integer(2.into()) - &last.mu_k);
    Ok(if m >= tail { m } else { tail })
}

/// Smallest integer `m` the regularity bound certifies.
pub fn cm_regularity(factors: &[HnFactor], ctx: &SurfaceContext) -> Result<BigInt> {
    Ok(smallest_integer_above(&cm_regularity_bound(factors, ctx)?))
}
