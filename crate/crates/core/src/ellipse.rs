//! The extremal ellipse `C_E` and how it meets modified walls.
//!
//! `C_E` is `v0(β − μ)² + (v0 + Hⁿ)α² = ((v0 + Hⁿ)/(v0·Hⁿ))·Δ̄`. Outside it (or
//! on it), every tilt-destabilizing subobject of `E` has rank at most
//! `rank E`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::chern::{ChernTriple, GeometryContext, TiltPoint};
use crate::error::{domain, Error, Result};
use crate::exactnum::{rational_str, QuadValue, Rational};
use crate::walls::{classify_type, numerical_wall, slope_and_scaled_discriminant, Semicircle, WallDescriptor, WallType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalEllipse {
    #[serde(with = "rational_str")]
    pub mu: Rational,
    #[serde(with = "rational_str")]
    pub v0: Rational,
    #[serde(with = "rational_str")]
    pub hn: Rational,
    #[serde(with = "rational_str")]
    pub rhs: Rational,
}

impl ExtremalEllipse {
    pub fn rank(&self) -> Rational {
        &self.v0 / &self.hn
    }

    /// `v0(β − μ)² + (v0 + Hⁿ)α²`.
    pub fn level(&self, point: &TiltPoint) -> Rational {
        let d = point.beta() - &self.mu;
        &self.v0 * &d * &d + (&self.v0 + &self.hn) * point.alpha_sq()
    }

    /// `α²` of the ellipse point above `β`; negative outside the β-span.
    pub fn alpha_sq_at(&self, beta: &Rational) -> Rational {
        let d = beta - &self.mu;
        (&self.rhs - &self.v0 * &d * &d) / (&self.v0 + &self.hn)
    }

    /// `μ ∓ √((rank + 1)Δ̄)/v0`, where `C_E` meets the β-axis.
    pub fn intercepts(&self) -> (QuadValue, QuadValue) {
        let half_width = QuadValue::sqrt(&(&self.rhs / &self.v0)).expect("rhs is nonnegative");
        (
            (-half_width.clone()).add_rational(&self.mu),
            half_width.add_rational(&self.mu),
        )
    }

    /// On or outside `C_E`.
    pub fn rank_bound_holds(&self, point: &TiltPoint) -> bool {
        self.level(point) >= self.rhs
    }
}

pub fn extremal_ellipse(v: &ChernTriple, ctx: &GeometryContext) -> Result<ExtremalEllipse> {
    if !v.e0.is_positive() {
        return Err(domain(format!("{v} must have e0 > 0")));
    }
    let disc = v.discriminant();
    if disc.is_negative() {
        return Err(domain(format!("{v} has negative discriminant")));
    }
    let rhs = (&v.e0 + &ctx.hn) / (&v.e0 * &ctx.hn) * disc;
    Ok(ExtremalEllipse {
        mu: &v.e1 / &v.e0,
        v0: v.e0.clone(),
        hn: ctx.hn.clone(),
        rhs,
    })
}

/// Whether `(β, α²)` lies on or outside `C_E`.
pub fn rank_bound_holds(v: &ChernTriple, point: &TiltPoint, ctx: &GeometryContext) -> Result<bool> {
    Ok(extremal_ellipse(v, ctx)?.rank_bound_holds(point))
}

/// How `C_E` meets the closure of a modified wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Contact {
    /// A common point with `α > 0`.
    Crossing,
    /// The only common point of the closures is on the β-axis.
    TouchesAxis,
    Disjoint,
}

/// Everything known about `C_E ∩ W(w̃, v)` for a Type 1 configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModifiedIntersection {
    pub modified_wall: Semicircle,
    pub beta_minus: Rational,
    pub beta_plus: Rational,
    pub contact: Contact,
}

/// `μ(v) − √(Δ̄/(rank + 1))/v0`.
pub fn intersection_threshold(v: &ChernTriple, ctx: &GeometryContext) -> Result<QuadValue> {
    let ellipse = extremal_ellipse(v, ctx)?;
    let width = QuadValue::sqrt(&(v.discriminant() / (ellipse.rank() + Rational::one())))?
        .div_rational(&v.e0)?;
    Ok((-width).add_rational(&ellipse.mu))
}

fn check_type1_setup(w: &ChernTriple, v: &ChernTriple) -> Result<Semicircle> {
    let (mu_w, _) = slope_and_scaled_discriminant(w)?;
    let (mu_v, dv) = slope_and_scaled_discriminant(v)?;
    if mu_v <= mu_w {
        return Err(domain("needs mu(v) > mu(w)"));
    }
    if dv.is_zero() {
        return Err(domain(format!("{v} must have positive discriminant")));
    }
    if let WallDescriptor::Semicircle(_) = numerical_wall(w, v)? {
        let found = classify_type(w, v)?;
        if found != WallType::Type1 {
            return Err(Error::TypeMismatch {
                expected: "Type1".into(),
                found: format!("{found:?}"),
            });
        }
    }
    // An empty W(w, v) is allowed as long as the modification is a genuine
    // Type 1 wall.
    let tilde = w.discriminant_free()?;
    match numerical_wall(&tilde, v)? {
        WallDescriptor::Semicircle(c) if classify_type(&tilde, v)? == WallType::Type1 => Ok(c),
        WallDescriptor::Semicircle(_) => Err(Error::TypeMismatch {
            expected: "Type1".into(),
            found: "Type2".into(),
        }),
        _ => Err(Error::NotClassifiable(
            "the modified wall is empty".into(),
        )),
    }
}

/// `C_E ∩ W(w̃, v)` in full, with `E` of class `v` and `μ(v) > μ(w)`.
pub fn modified_intersection_type1(
    w: &ChernTriple,
    v: &ChernTriple,
    ctx: &GeometryContext,
) -> Result<ModifiedIntersection> {
    let modified_wall = check_type1_setup(w, v)?;
    let mu = &v.e1 / &v.e0;
    let r = modified_wall.radius();
    let radius = r
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::Inconsistent("modified radius is irrational".into()))?;
    let scale = (&v.e0 + &ctx.hn) / &ctx.hn;
    let shift = &v.e0 / &ctx.hn * &mu;
    let beta_minus = &scale * (&modified_wall.center - &radius) - &shift;
    let beta_plus = &scale * (&modified_wall.center + &radius) - &shift;
    let left_end = &modified_wall.center - &radius;
    let contact = match beta_plus.cmp(&left_end) {
        Ordering::Greater => Contact::Crossing,
        Ordering::Equal => Contact::TouchesAxis,
        Ordering::Less => Contact::Disjoint,
    };
    Ok(ModifiedIntersection {
        modified_wall,
        beta_minus,
        beta_plus,
        contact,
    })
}

/// `C_E ∩ W(w̃, v) ≠ ∅` at some `α > 0`, decided by
/// `μ(w) > μ(E) − √(Δ̄/(rank E + 1))/v0`.
pub fn intersects_modified_type1(
    w: &ChernTriple,
    v: &ChernTriple,
    ctx: &GeometryContext,
) -> Result<bool> {
    check_type1_setup(w, v)?;
    let mu_w = QuadValue::from(&w.e1 / &w.e0);
    Ok(mu_w > intersection_threshold(v, ctx)?)
}

/// `(β₋, β₊)`, the two β-roots of `C_E ∩ W(w̃, v)` after eliminating `α²`.
pub fn intersection_betas(
    w: &ChernTriple,
    v: &ChernTriple,
    ctx: &GeometryContext,
) -> Result<(Rational, Rational)> {
    let m = modified_intersection_type1(w, v, ctx)?;
    Ok((m.beta_minus, m.beta_plus))
}

/// The mirror configuration: `E` of class `v` below `w` in slope and
/// `W(v, w̃)` of Type 3. Computed through `β ↦ −β`.
pub fn modified_intersection_type3(
    v: &ChernTriple,
    w: &ChernTriple,
    ctx: &GeometryContext,
) -> Result<ModifiedIntersection> {
    let m = modified_intersection_type1(&w.reflect(), &v.reflect(), ctx)?;
    Ok(ModifiedIntersection {
        modified_wall: Semicircle {
            center: -m.modified_wall.center,
            radius_sq: m.modified_wall.radius_sq,
        },
        beta_minus: -m.beta_plus,
        beta_plus: -m.beta_minus,
        contact: m.contact,
    })
}

/// `μ(w) < μ(E) + √(Δ̄/(rank E + 1))/v0`.
pub fn intersects_modified_type3(
    v: &ChernTriple,
    w: &ChernTriple,
    ctx: &GeometryContext,
) -> Result<bool> {
    intersects_modified_type1(&w.reflect(), &v.reflect(), ctx)
}
