//! Regions of the `(β, α)` half plane where a slope-stable sheaf `E`, or its
//! shift `E[1]`, is guaranteed to be tilt-stable.
//!
//! The certificates depend on a bound for the slopes of subsheaves (or
//! quotients) that cannot be read off the Chern character. It is an input;
//! every region records which bound it was computed from.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::chern::{ChernTriple, GeometryContext, TiltPoint};
use crate::error::{domain, Error, Result};
use crate::exactnum::{format_rational, QuadValue, Rational};
use crate::vanishing::farey_floor;

/// Where the slope bound `μ^max` (or `μ^min` for shifts) comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeBoundInput {
    User(Rational),
    /// `[Hⁿμ(E)]_{rank E}/Hⁿ`, valid for any slope-semistable sheaf.
    DefaultFarey,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityRegion {
    /// `β ≤ beta_max`.
    LeftHalfStrip { beta_max: Rational },
    /// `β = beta`.
    VerticalRay { beta: QuadValue },
    /// `β < mu_bound`.
    OpenLeftHalfPlane { mu_bound: Rational },
    /// `β ≥ beta_min`.
    RightHalfStrip { beta_min: Rational },
    /// `β ≥ mu_bound`.
    ClosedRightHalfPlane { mu_bound: Rational },
}

impl StabilityRegion {
    pub fn kind(&self) -> &'static str {
        match self {
            StabilityRegion::LeftHalfStrip { .. } => "left-strip",
            StabilityRegion::VerticalRay { .. } => "vray",
            StabilityRegion::OpenLeftHalfPlane { .. } => "open-left",
            StabilityRegion::RightHalfStrip { .. } => "right-strip",
            StabilityRegion::ClosedRightHalfPlane { .. } => "closed-right",
        }
    }

    /// The β-value bounding the region.
    pub fn beta(&self) -> QuadValue {
        match self {
            StabilityRegion::LeftHalfStrip { beta_max: b }
            | StabilityRegion::OpenLeftHalfPlane { mu_bound: b }
            | StabilityRegion::RightHalfStrip { beta_min: b }
            | StabilityRegion::ClosedRightHalfPlane { mu_bound: b } => QuadValue::from(b),
            StabilityRegion::VerticalRay { beta } => beta.clone(),
        }
    }

    pub fn contains(&self, point: &TiltPoint) -> bool {
        let beta = point.beta();
        match self {
            StabilityRegion::LeftHalfStrip { beta_max } => beta <= beta_max,
            StabilityRegion::VerticalRay { beta: b } => QuadValue::from(beta) == *b,
            StabilityRegion::OpenLeftHalfPlane { mu_bound } => beta < mu_bound,
            StabilityRegion::RightHalfStrip { beta_min } => beta >= beta_min,
            StabilityRegion::ClosedRightHalfPlane { mu_bound } => beta >= mu_bound,
        }
    }

    /// The image under `β ↦ −β`.
    pub fn reflect(&self) -> StabilityRegion {
        match self {
            StabilityRegion::LeftHalfStrip { beta_max } => StabilityRegion::RightHalfStrip {
                beta_min: -beta_max.clone(),
            },
            StabilityRegion::RightHalfStrip { beta_min } => StabilityRegion::LeftHalfStrip {
                beta_max: -beta_min.clone(),
            },
            StabilityRegion::VerticalRay { beta } => StabilityRegion::VerticalRay { beta: -beta.clone() },
            StabilityRegion::OpenLeftHalfPlane { mu_bound } => {
                StabilityRegion::ClosedRightHalfPlane {
                    mu_bound: -mu_bound.clone(),
                }
            }
            StabilityRegion::ClosedRightHalfPlane { mu_bound } => {
                StabilityRegion::OpenLeftHalfPlane {
                    mu_bound: -mu_bound.clone(),
                }
            }
        }
    }
}

/// A region together with the hypotheses it rests on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionCertificate {
    pub region: StabilityRegion,
    /// The slope bound the caller vouches for, e.g. `mu-max<=-1`.
    pub conditional_on: String,
    pub notes: Vec<String>,
}

impl Serialize for RegionCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("kind", self.region.kind())?;
        map.serialize_entry("beta", &self.region.beta())?;
        map.serialize_entry("conditional_on", &self.conditional_on)?;
        if !self.notes.is_empty() {
            map.serialize_entry("notes", &self.notes)?;
        }
        map.end()
    }
}

/// Which of the three regimes a character falls into, with the β it yields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum StabilityCase {
    Strip { beta: Rational },
    Ray { beta: QuadValue },
    HalfPlane { mu: Rational },
}

struct Setup {
    mu_e: Rational,
    disc: Rational,
    v0: Rational,
    rank: Rational,
}

fn setup(v: &ChernTriple, ctx: &GeometryContext) -> Result<Setup> {
    if !v.e0.is_positive() {
        return Err(domain(format!("{v} must have e0 > 0")));
    }
    let disc = v.discriminant();
    if disc.is_negative() {
        return Err(domain(format!("{v} has negative discriminant")));
    }
    Ok(Setup {
        mu_e: &v.e1 / &v.e0,
        disc,
        v0: v.e0.clone(),
        rank: v.rank(ctx),
    })
}

/// `[Hⁿμ(E)]_{rank E}/Hⁿ`.
pub fn default_mu_max(v: &ChernTriple, ctx: &GeometryContext) -> Result<Rational> {
    let rank = v.integral_rank(ctx)?;
    let mu = v.finite_slope()?;
    Ok(farey_floor(&(&ctx.hn * &mu), rank) / &ctx.hn)
}

/// `√(Δ̄/(rank + 1))/v0`, the distance of the case threshold from `μ(E)`.
fn threshold_width(s: &Setup) -> Result<QuadValue> {
    Ok(QuadValue::sqrt(&(&s.disc / (&s.rank + Rational::one())))?.div_rational(&s.v0)?)
}

/// `√((rank + 1)Δ̄)/v0`, the half-width of the extremal ellipse.
fn ellipse_half_width(s: &Setup) -> Result<QuadValue> {
    Ok(QuadValue::sqrt(&((&s.rank + Rational::one()) * &s.disc))?.div_rational(&s.v0)?)
}

pub(crate) fn sheaf_case(
    v: &ChernTriple,
    mu: &SlopeBoundInput,
    ctx: &GeometryContext,
) -> Result<StabilityCase> {
    let s = setup(v, ctx)?;
    let mu = resolve_sheaf_bound(v, mu, ctx)?;
    if mu >= s.mu_e {
        return Err(Error::Hypothesis(format!(
            "the slope bound {} must be below mu(E) = {}",
            format_rational(&mu),
            format_rational(&s.mu_e)
        )));
    }
    if s.disc.is_zero() {
        return Ok(StabilityCase::HalfPlane { mu: s.mu_e });
    }
    let threshold = (-threshold_width(&s)?).add_rational(&s.mu_e);
    if QuadValue::from(&mu) > threshold {
        let scaled = &s.disc / (&s.v0 * &s.v0);
        Ok(StabilityCase::Strip {
            beta: &s.mu_e - scaled / (&s.mu_e - &mu),
        })
    } else {
        Ok(StabilityCase::Ray {
            beta: (-ellipse_half_width(&s)?).add_rational(&s.mu_e),
        })
    }
}

pub(crate) fn shift_case(
    v: &ChernTriple,
    mu_bar: &SlopeBoundInput,
    ctx: &GeometryContext,
) -> Result<StabilityCase> {
    let s = setup(v, ctx)?;
    let mu_bar = match mu_bar {
        SlopeBoundInput::User(m) => m.clone(),
        SlopeBoundInput::DefaultFarey if s.disc.is_zero() => {
            return Ok(StabilityCase::HalfPlane { mu: s.mu_e })
        }
        SlopeBoundInput::DefaultFarey => {
            return Err(domain(
                "the quotient slope bound has no default and must be supplied",
            ))
        }
    };
    if mu_bar <= s.mu_e {
        return Err(Error::Hypothesis(format!(
            "the slope bound {} must be above mu(E) = {}",
            format_rational(&mu_bar),
            format_rational(&s.mu_e)
        )));
    }
    if s.disc.is_zero() {
        return Ok(StabilityCase::HalfPlane { mu: s.mu_e });
    }
    let threshold = threshold_width(&s)?.add_rational(&s.mu_e);
    if QuadValue::from(&mu_bar) < threshold {
        let scaled = &s.disc / (&s.v0 * &s.v0);
        Ok(StabilityCase::Strip {
            beta: &s.mu_e + scaled / (&mu_bar - &s.mu_e),
        })
    } else {
        Ok(StabilityCase::Ray {
            beta: ellipse_half_width(&s)?.add_rational(&s.mu_e),
        })
    }
}

fn resolve_sheaf_bound(
    v: &ChernTriple,
    mu: &SlopeBoundInput,
    ctx: &GeometryContext,
) -> Result<Rational> {
    match mu {
        SlopeBoundInput::User(m) => Ok(m.clone()),
        SlopeBoundInput::DefaultFarey => default_mu_max(v, ctx),
    }
}

fn rank_one_note(v: &ChernTriple, ctx: &GeometryContext, notes: &mut Vec<String>) {
    if v.rank(ctx).is_one() {
        notes.push("rank one: the sharper rank-one region is not applied".into());
    }
}

/// Where `E` is tilt-stable, given `μ^max(E) ≤ μ < μ(E)`.
pub fn stable_region_sheaf(
    v: &ChernTriple,
    mu: &SlopeBoundInput,
    ctx: &GeometryContext,
) -> Result<RegionCertificate> {
    let case = sheaf_case(v, mu, ctx)?;
    let bound = resolve_sheaf_bound(v, mu, ctx)?;
    let region = match case {
        StabilityCase::Strip { beta } => StabilityRegion::LeftHalfStrip { beta_max: beta },
        StabilityCase::Ray { beta } => StabilityRegion::VerticalRay { beta },
        StabilityCase::HalfPlane { mu } => StabilityRegion::OpenLeftHalfPlane { mu_bound: mu },
    };
    let mut notes = Vec::new();
    if *mu == SlopeBoundInput::DefaultFarey {
        notes.push("slope bound from Farey rounding of mu(E)".into());
    }
    rank_one_note(v, ctx, &mut notes);
    Ok(RegionCertificate {
        region,
        conditional_on: format!("mu-max<={}", format_rational(&bound)),
        notes,
    })
}

/// Where `E[1]` is tilt-stable, given `μ(E) < μ̄ ≤ μ^min(E)` and `E`
/// reflexive (assumed, not checked).
pub fn stable_region_shift(
    v: &ChernTriple,
    mu_bar: &SlopeBoundInput,
    ctx: &GeometryContext,
) -> Result<RegionCertificate> {
    let case = shift_case(v, mu_bar, ctx)?;
    let region = match case {
        StabilityCase::Strip { beta } => StabilityRegion::RightHalfStrip { beta_min: beta },
        StabilityCase::Ray { beta } => StabilityRegion::VerticalRay { beta },
        StabilityCase::HalfPlane { mu } => StabilityRegion::ClosedRightHalfPlane { mu_bound: mu },
    };
    let conditional_on = match mu_bar {
        SlopeBoundInput::User(m) => format!("mu-min>={}", format_rational(m)),
        SlopeBoundInput::DefaultFarey => "none".into(),
    };
    let mut notes = vec!["assumes E is reflexive".to_string()];
    rank_one_note(v, ctx, &mut notes);
    Ok(RegionCertificate {
        region,
        conditional_on,
        notes,
    })
}

/// Membership of `(β, α²)` in a region.
pub fn region_contains(region: &StabilityRegion, point: &TiltPoint) -> bool {
    region.contains(point)
}

/// Orders two regions of the same kind by their β (used for monotonicity
/// checks).
pub fn compare_region_beta(a: &StabilityRegion, b: &StabilityRegion) -> Ordering {
    a.beta().cmp(&b.beta())
}
