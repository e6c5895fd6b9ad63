//! Projected Chern characters and the slope functions built on them.
//!
//! A character is stored by its H-degrees `(Hⁿch₀, Hⁿ⁻¹ch₁, Hⁿ⁻²ch₂)` with an
//! optional `ch₃` on threefolds, already twisted by the fixed class `B`.
//! Everything downstream (walls, ellipses, regions) only ever sees these
//! projected coordinates, and only twists by rational multiples of `H` are
//! supported here.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactnum::{format_rational, parse_rational, rational_str, rational_str_opt, Rational};

/// Dimension of the variety and the top self-intersection `Hⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryContext {
    pub n: u32,
    #[serde(with = "rational_str")]
    pub hn: Rational,
}

impl GeometryContext {
    pub fn new(n: u32, hn: Rational) -> Result<Self> {
        if n < 2 {
            return Err(domain(format!("dimension must be at least 2, got {n}")));
        }
        if !hn.is_positive() {
            return Err(domain(format!(
                "H^n must be positive, got {}",
                format_rational(&hn)
            )));
        }
        Ok(GeometryContext { n, hn })
    }

    /// `ℙ³` with `H` a plane.
    pub fn projective_three_space() -> Self {
        GeometryContext {
            n: 3,
            hn: Rational::one(),
        }
    }
}

/// `(e0, e1, e2[, e3])` = `(Hⁿch₀^B, Hⁿ⁻¹ch₁^B, Hⁿ⁻²ch₂^B[, ch₃^B])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernTriple {
    #[serde(with = "rational_str")]
    pub e0: Rational,
    #[serde(with = "rational_str")]
    pub e1: Rational,
    #[serde(with = "rational_str")]
    pub e2: Rational,
    #[serde(
        with = "rational_str_opt",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub e3: Option<Rational>,
}

/// A slope value on the extended real line; `+∞` sorts above every finite
/// value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedSlope {
    Finite(Rational),
    PositiveInfinity,
}

impl ExtendedSlope {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedSlope::Finite(r) => Some(r),
            ExtendedSlope::PositiveInfinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedSlope::PositiveInfinity)
    }
}

impl fmt::Display for ExtendedSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedSlope::Finite(r) => f.write_str(&format_rational(r)),
            ExtendedSlope::PositiveInfinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for ExtendedSlope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A point `(β, α²)` of the upper half plane; `α² > 0` is checked on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltPoint {
    beta: Rational,
    alpha_sq: Rational,
}

impl TiltPoint {
    pub fn new(beta: Rational, alpha_sq: Rational) -> Result<Self> {
        if !alpha_sq.is_positive() {
            return Err(domain(format!(
                "alpha^2 must be positive, got {}",
                format_rational(&alpha_sq)
            )));
        }
        Ok(TiltPoint { beta, alpha_sq })
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn alpha_sq(&self) -> &Rational {
        &self.alpha_sq
    }
}

/// Where a character sits relative to the tilted heart at a given `β`,
/// judged only by the sign of `Im Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeartSide {
    SheafSide,
    ShiftSide,
    Boundary,
}

impl ChernTriple {
    pub fn new(e0: Rational, e1: Rational, e2: Rational) -> Self {
        ChernTriple {
            e0,
            e1,
            e2,
            e3: None,
        }
    }

    pub fn with_e3(e0: Rational, e1: Rational, e2: Rational, e3: Rational) -> Self {
        ChernTriple {
            e0,
            e1,
            e2,
            e3: Some(e3),
        }
    }

    /// Parses the comma-separated form `"e0,e1,e2[,e3]"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts = text
            .split(',')
            .map(parse_rational)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        match parts.as_slice() {
            [a, b, c] => Ok(ChernTriple::new(a.clone(), b.clone(), c.clone())),
            [a, b, c, d] => Ok(ChernTriple::with_e3(
                a.clone(),
                b.clone(),
                c.clone(),
                d.clone(),
            )),
            _ => Err(domain(format!(
                "expected 3 or 4 comma-separated rationals, got {:?}",
                text
            ))),
        }
    }

    /// Checks that `e3` only appears on threefolds.
    pub fn validate(&self, ctx: &GeometryContext) -> Result<()> {
        if self.e3.is_some() && ctx.n != 3 {
            return Err(domain(format!(
                "ch3 component given but the variety has dimension {}",
                ctx.n
            )));
        }
        Ok(())
    }

    /// `e0 / Hⁿ`.
    pub fn rank(&self, ctx: &GeometryContext) -> Rational {
        &self.e0 / &ctx.hn
    }

    /// The rank as a positive integer, or a domain error.
    pub fn integral_rank(&self, ctx: &GeometryContext) -> Result<u64> {
        let rank = self.rank(ctx);
        if !rank.is_integer() || !rank.is_positive() {
            return Err(domain(format!(
                "rank e0/H^n = {} is not a positive integer",
                format_rational(&rank)
            )));
        }
        num_traits::ToPrimitive::to_u64(rank.numer())
            .ok_or_else(|| domain("rank does not fit in 64 bits"))
    }

    /// `ch ↦ e^{−δH}·ch` in projected coordinates.
    pub fn twist(&self, delta: &Rational) -> ChernTriple {
        let half_sq = delta * delta / Rational::from_integer(2.into());
        let e1 = &self.e1 - delta * &self.e0;
        let e2 = &self.e2 - delta * &self.e1 + &half_sq * &self.e0;
        let e3 = self.e3.as_ref().map(|e3| {
            let cube_sixth = delta * delta * delta / Rational::from_integer(6.into());
            e3 - delta * &self.e2 + &half_sq * &self.e1 - cube_sixth * &self.e0
        });
        ChernTriple {
            e0: self.e0.clone(),
            e1,
            e2,
            e3,
        }
    }

    /// `μ = e1/e0`, or `+∞` for rank zero.
    pub fn slope(&self) -> ExtendedSlope {
        if self.e0.is_zero() {
            ExtendedSlope::PositiveInfinity
        } else {
            ExtendedSlope::Finite(&self.e1 / &self.e0)
        }
    }

    /// The slope, insisting it is finite.
    pub fn finite_slope(&self) -> Result<Rational> {
        self.slope()
            .finite()
            .cloned()
            .ok_or_else(|| Error::Unsupported("rank-zero character has infinite slope".into()))
    }

    /// `Δ̄ = e1² − 2·e0·e2`; unchanged by [`ChernTriple::twist`].
    pub fn discriminant(&self) -> Rational {
        &self.e1 * &self.e1 - Rational::from_integer(2.into()) * &self.e0 * &self.e2
    }

    /// `(Re, Im)` of `½(α²−β²)e0 + βe1 − e2 + i(e1 − βe0)`. The positive
    /// `Hⁿ⁻²` prefactor is dropped.
    pub fn central_charge(&self, point: &TiltPoint) -> (Rational, Rational) {
        let beta = point.beta();
        let half = Rational::new(1.into(), 2.into());
        let re = half * (point.alpha_sq() - beta * beta) * &self.e0 + beta * &self.e1 - &self.e2;
        let im = &self.e1 - beta * &self.e0;
        (re, im)
    }

    /// `ν_{α,β}`.
    pub fn tilt_slope(&self, point: &TiltPoint) -> ExtendedSlope {
        let t = self.twist(point.beta());
        if t.e1.is_zero() {
            return ExtendedSlope::PositiveInfinity;
        }
        let half = Rational::new(1.into(), 2.into());
        ExtendedSlope::Finite((&t.e2 - half * point.alpha_sq() * &t.e0) / &t.e1)
    }

    pub fn heart_side(&self, beta: &Rational) -> HeartSide {
        let im = &self.e1 - beta * &self.e0;
        match im.cmp(&Rational::zero()) {
            Ordering::Greater => HeartSide::SheafSide,
            Ordering::Less => HeartSide::ShiftSide,
            Ordering::Equal => HeartSide::Boundary,
        }
    }

    /// `(e0, e1, e1²/(2e0))`: same rank and slope, zero discriminant.
    pub fn discriminant_free(&self) -> Result<ChernTriple> {
        if self.e0.is_zero() {
            return Err(domain("discriminant-free vector needs e0 != 0"));
        }
        let e2 = &self.e1 * &self.e1 / (Rational::from_integer(2.into()) * &self.e0);
        Ok(ChernTriple::new(self.e0.clone(), self.e1.clone(), e2))
    }

    /// `(e0, −e1, e2[, −e3])`, the image under `β ↦ −β`.
    pub fn reflect(&self) -> ChernTriple {
        ChernTriple {
            e0: self.e0.clone(),
            e1: -&self.e1,
            e2: self.e2.clone(),
            e3: self.e3.as_ref().map(|e3| -e3),
        }
    }

    pub fn scale(&self, k: &Rational) -> ChernTriple {
        ChernTriple {
            e0: &self.e0 * k,
            e1: &self.e1 * k,
            e2: &self.e2 * k,
            e3: self.e3.as_ref().map(|e3| e3 * k),
        }
    }

    /// `self − other`; `e3` survives only when both sides carry it.
    pub fn minus(&self, other: &ChernTriple) -> ChernTriple {
        ChernTriple {
            e0: &self.e0 - &other.e0,
            e1: &self.e1 - &other.e1,
            e2: &self.e2 - &other.e2,
            e3: match (&self.e3, &other.e3) {
                (Some(a), Some(b)) => Some(a - b),
                _ => None,
            },
        }
    }

    /// Whether `(e0, e1, e2)` of the two characters are proportional.
    pub fn is_proportional_to(&self, other: &ChernTriple) -> bool {
        let a = [&self.e0, &self.e1, &self.e2];
        let b = [&other.e0, &other.e1, &other.e2];
        (0..3).all(|i| (0..3).all(|j| a[i] * b[j] == a[j] * b[i]))
    }

    /// The class of the line bundle `O(kH)` on a context with `Hⁿ = hn`:
    /// `(hn, 0, 0[, 0])` twisted by `−k`.
    pub fn line_bundle(k: &Rational, ctx: &GeometryContext) -> ChernTriple {
        let base = if ctx.n == 3 {
            ChernTriple::with_e3(ctx.hn.clone(), Rational::zero(), Rational::zero(), Rational::zero())
        } else {
            ChernTriple::new(ctx.hn.clone(), Rational::zero(), Rational::zero())
        };
        base.twist(&-k)
    }
}

impl fmt::Display for ChernTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}",
            format_rational(&self.e0),
            format_rational(&self.e1),
            format_rational(&self.e2)
        )?;
        if let Some(e3) = &self.e3 {
            write!(f, ", {}", format_rational(e3))?;
        }
        f.write_str(")")
    }
}

/// Compares polynomial slopes `p(m) = μ·m + e2/e0` for `m ≫ 0`; rank zero is
/// `(+∞)m + (+∞)`.
pub fn poly_slope_cmp(a: &ChernTriple, b: &ChernTriple) -> Ordering {
    fn key(t: &ChernTriple) -> (ExtendedSlope, ExtendedSlope) {
        if t.e0.is_zero() {
            (ExtendedSlope::PositiveInfinity, ExtendedSlope::PositiveInfinity)
        } else {
            (
                ExtendedSlope::Finite(&t.e1 / &t.e0),
                ExtendedSlope::Finite(&t.e2 / &t.e0),
            )
        }
    }
    key(a).cmp(&key(b))
}
