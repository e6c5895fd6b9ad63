//! Numerical walls `W(w, v)` in the `(β, α)` half plane.
//!
//! Throughout, `v` is the character whose stability is being tracked and `w`
//! the potential destabilizing one; the semicircle formulas assume
//! `μ(v) > μ(w)`. [`orient`] puts an unordered pair into that shape.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::chern::{ChernTriple, TiltPoint};
use crate::error::{domain, Error, Result};
use crate::exactnum::{format_rational, QuadValue, Rational};

/// A semicircle centred on the β-axis with `radius_sq > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Semicircle {
    pub center: Rational,
    pub radius_sq: Rational,
}

impl Semicircle {
    pub fn radius(&self) -> QuadValue {
        QuadValue::sqrt(&self.radius_sq).expect("radius_sq is positive")
    }

    pub fn left_end(&self) -> QuadValue {
        -self.radius().add_rational(&-&self.center)
    }

    pub fn right_end(&self) -> QuadValue {
        self.radius().add_rational(&self.center)
    }

    /// Sign of `(β − s)² + α² − r²`.
    pub fn position_of(&self, point: &TiltPoint) -> PointPosition {
        let d = point.beta() - &self.center;
        let value = &d * &d + point.alpha_sq() - &self.radius_sq;
        match value.cmp(&Rational::zero()) {
            Ordering::Less => PointPosition::Inside,
            Ordering::Equal => PointPosition::On,
            Ordering::Greater => PointPosition::Outside,
        }
    }

    /// Whether this semicircle lies in the closed disc bounded by `outer`,
    /// i.e. `|s − s̃| + r ≤ r̃`.
    pub fn is_contained_in(&self, outer: &Semicircle) -> bool {
        let gap = (&self.center - &outer.center).abs();
        self.radius().add_rational(&gap) <= outer.radius()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WallDescriptor {
    VerticalLine { beta: Rational },
    Semicircle(Semicircle),
    Empty,
}

impl WallDescriptor {
    pub fn as_semicircle(&self) -> Option<&Semicircle> {
        match self {
            WallDescriptor::Semicircle(c) => Some(c),
            _ => None,
        }
    }
}

impl Serialize for WallDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ClassifiedWall {
            wall: self.clone(),
            wall_type: None,
        }
        .serialize(s)
    }
}

/// A wall together with its type when it has one; serializes to the flat
/// `{"kind", "beta" | "s", "rsq", "type"}` object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedWall {
    pub wall: WallDescriptor,
    pub wall_type: Option<WallType>,
}

impl Serialize for ClassifiedWall {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        match &self.wall {
            WallDescriptor::VerticalLine { beta } => {
                map.serialize_entry("kind", "vertical")?;
                map.serialize_entry("beta", &format_rational(beta))?;
            }
            WallDescriptor::Semicircle(c) => {
                map.serialize_entry("kind", "circle")?;
                map.serialize_entry("s", &format_rational(&c.center))?;
                map.serialize_entry("rsq", &format_rational(&c.radius_sq))?;
            }
            WallDescriptor::Empty => map.serialize_entry("kind", "empty")?,
        }
        if let Some(t) = self.wall_type {
            map.serialize_entry("type", &t.number())?;
        }
        map.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WallType {
    Type1,
    Type2,
    Type3,
}

impl WallType {
    pub fn number(self) -> u8 {
        match self {
            WallType::Type1 => 1,
            WallType::Type2 => 2,
            WallType::Type3 => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointPosition {
    Inside,
    On,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nesting {
    FirstInsideSecond,
    SecondInsideFirst,
    Equal,
}

/// A semicircle remembered together with the `v` it is a wall for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredWall {
    pub v: ChernTriple,
    pub circle: Semicircle,
}

/// The pair `(w, v)` ordered so that `μ(v) > μ(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedPair {
    pub lower: ChernTriple,
    pub higher: ChernTriple,
    /// `true` when the second argument of [`orient`] became `lower`.
    pub swapped: bool,
}

/// Orders two characters by slope; equal slopes are a domain error.
pub fn orient(a: &ChernTriple, b: &ChernTriple) -> Result<OrientedPair> {
    let (ma, _) = slope_and_scaled_discriminant(a)?;
    let (mb, _) = slope_and_scaled_discriminant(b)?;
    match ma.cmp(&mb) {
        Ordering::Less => Ok(OrientedPair {
            lower: a.clone(),
            higher: b.clone(),
            swapped: false,
        }),
        Ordering::Greater => Ok(OrientedPair {
            lower: b.clone(),
            higher: a.clone(),
            swapped: true,
        }),
        Ordering::Equal => Err(domain("equal slopes have no orientation")),
    }
}

/// `(μ, Δ̄/e0²)`, rejecting characters the semicircle formulas cannot take.
pub(crate) fn slope_and_scaled_discriminant(u: &ChernTriple) -> Result<(Rational, Rational)> {
    if u.e0.is_zero() {
        return Err(Error::Unsupported(format!(
            "{u} has rank zero and infinite slope"
        )));
    }
    if u.e0.is_negative() {
        return Err(domain(format!("{u} has negative e0")));
    }
    let disc = u.discriminant();
    if disc.is_negative() {
        return Err(domain(format!(
            "{u} has negative discriminant {}",
            format_rational(&disc)
        )));
    }
    Ok((&u.e1 / &u.e0, disc / (&u.e0 * &u.e0)))
}

/// `W(w, v)`: the locus where `ν(w) = ν(v)`.
pub fn numerical_wall(w: &ChernTriple, v: &ChernTriple) -> Result<WallDescriptor> {
    if w.is_proportional_to(v) {
        return Err(Error::DegenerateWall);
    }
    let (mu_w, dw) = slope_and_scaled_discriminant(w)?;
    let (mu_v, dv) = slope_and_scaled_discriminant(v)?;
    if mu_v == mu_w {
        return Ok(WallDescriptor::VerticalLine { beta: mu_v });
    }
    let half = Rational::new(1.into(), 2.into());
    let center = &half * (&mu_v + &mu_w) - &half * (&dv - &dw) / (&mu_v - &mu_w);
    let offset = &center - &mu_v;
    let radius_sq = &offset * &offset - &dv;
    if radius_sq.is_positive() {
        Ok(WallDescriptor::Semicircle(Semicircle { center, radius_sq }))
    } else {
        Ok(WallDescriptor::Empty)
    }
}

/// Type of a non-empty semicircular wall; requires `μ(v) > μ(w)`.
///
/// Boundary equalities go to Type 1 on the left of `μ(v)` and to Type 3 on
/// the right, matching which inequality the center position selects.
pub fn classify_type(w: &ChernTriple, v: &ChernTriple) -> Result<WallType> {
    let circle = match numerical_wall(w, v)? {
        WallDescriptor::Semicircle(c) => c,
        WallDescriptor::VerticalLine { .. } => {
            return Err(Error::NotClassifiable("the wall is a vertical line".into()))
        }
        WallDescriptor::Empty => return Err(Error::NotClassifiable("the wall is empty".into())),
    };
    let (mu_w, dw) = slope_and_scaled_discriminant(w)?;
    let (mu_v, dv) = slope_and_scaled_discriminant(v)?;
    if mu_v <= mu_w {
        return Err(domain("classification needs mu(v) > mu(w)"));
    }
    let gap = &mu_v - &mu_w;
    let a = QuadValue::sqrt(&dv)?;
    let b = QuadValue::sqrt(&dw)?;
    if circle.center < mu_v {
        if b.add_rational(&gap) <= a {
            Ok(WallType::Type1)
        } else if (-b).add_rational(&gap) >= a {
            Ok(WallType::Type2)
        } else {
            Err(Error::Inconsistent(
                "wall left of mu(v) satisfies neither type 1 nor type 2".into(),
            ))
        }
    } else if a.add_rational(&gap) <= b {
        Ok(WallType::Type3)
    } else {
        Err(Error::Inconsistent(
            "wall right of mu(v) does not satisfy type 3".into(),
        ))
    }
}

fn ensure_type(w: &ChernTriple, v: &ChernTriple, expected: WallType) -> Result<()> {
    let found = classify_type(w, v)?;
    if found != expected {
        return Err(Error::TypeMismatch {
            expected: format!("{expected:?}"),
            found: format!("{found:?}"),
        });
    }
    Ok(())
}

/// `W(w̃, v)` for a Type 1 wall: `s̃₁ + r̃₁ = μ(w)`.
pub fn modified_wall_type1(w: &ChernTriple, v: &ChernTriple) -> Result<Semicircle> {
    ensure_type(w, v, WallType::Type1)?;
    let (mu_w, _) = slope_and_scaled_discriminant(w)?;
    let (mu_v, dv) = slope_and_scaled_discriminant(v)?;
    Ok(modified_circle(&mu_v, &mu_w, &dv, false))
}

/// `W(w, ṽ)` for a Type 3 wall: `s̃₃ − r̃₃ = μ(v)`.
pub fn modified_wall_type3(w: &ChernTriple, v: &ChernTriple) -> Result<Semicircle> {
    ensure_type(w, v, WallType::Type3)?;
    let (mu_w, dw) = slope_and_scaled_discriminant(w)?;
    let (mu_v, _) = slope_and_scaled_discriminant(v)?;
    Ok(modified_circle(&mu_v, &mu_w, &dw, true))
}

/// Center `½(μv+μw) ∓ k/gap` and radius `k/gap − gap/2` with `k = D/2`,
/// where `D` is the scaled discriminant of the character that keeps it.
pub(crate) fn modified_circle(
    mu_v: &Rational,
    mu_w: &Rational,
    kept_disc: &Rational,
    right: bool,
) -> Semicircle {
    let half = Rational::new(1.into(), 2.into());
    let gap = mu_v - mu_w;
    let k = &half * kept_disc / &gap;
    let mid = &half * (mu_v + mu_w);
    let center = if right { mid + &k } else { mid - &k };
    let radius = k - &half * &gap;
    Semicircle {
        center,
        radius_sq: &radius * &radius,
    }
}

/// Nesting of two walls of the same `v`, both left of `β = μ(v)`.
pub fn nesting_compare(first: &AnchoredWall, second: &AnchoredWall) -> Result<Nesting> {
    if !first.v.is_proportional_to(&second.v) {
        return Err(domain("nesting is only defined for walls of the same v"));
    }
    for wall in [first, second] {
        let (mu_v, dv) = slope_and_scaled_discriminant(&wall.v)?;
        if wall.circle.center >= mu_v {
            return Err(domain("nesting needs walls left of beta = mu(v)"));
        }
        let offset = &wall.circle.center - &mu_v;
        if offset.clone() * offset - dv != wall.circle.radius_sq {
            return Err(domain(format!(
                "semicircle with center {} is not a numerical wall of {}",
                format_rational(&wall.circle.center),
                wall.v
            )));
        }
    }
    Ok(match first.circle.center.cmp(&second.circle.center) {
        Ordering::Greater => Nesting::FirstInsideSecond,
        Ordering::Less => Nesting::SecondInsideFirst,
        Ordering::Equal => Nesting::Equal,
    })
}

/// Where `(β, α²)` sits relative to a wall. Vertical lines only report `On`
/// or `Outside`; the empty wall has no inside.
pub fn point_position(wall: &WallDescriptor, point: &TiltPoint) -> PointPosition {
    match wall {
        WallDescriptor::Semicircle(c) => c.position_of(point),
        WallDescriptor::VerticalLine { beta } if beta == point.beta() => PointPosition::On,
        _ => PointPosition::Outside,
    }
}

/// `ν(w)` compared with `ν(v)` at the given point.
pub fn slope_order_at(w: &ChernTriple, v: &ChernTriple, point: &TiltPoint) -> Result<Ordering> {
    let nw = w.tilt_slope(point);
    let nv = v.tilt_slope(point);
    if nw.is_infinite() && nv.is_infinite() {
        return Err(Error::Incomparable);
    }
    Ok(nw.cmp(&nv))
}
