//! Projective three-space: the Bogomolov–Gieseker type inequality, upper
//! bounds for `ch₃` of slope-stable sheaves, and `c₃` bounds in rank two.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{ChernTriple, GeometryContext, TiltPoint};
use crate::error::{domain, Error, Result};
use crate::exactnum::{rational_str, QuadValue, Rational};
use crate::stability::{default_mu_max, SlopeBoundInput};

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// A sheaf on `ℙ³` given by rank and Chern classes (all as degrees against
/// a plane).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct P3Character {
    pub rank: u64,
    #[serde(with = "rational_str")]
    pub c1: Rational,
    #[serde(with = "rational_str")]
    pub c2: Rational,
    #[serde(with = "rational_str")]
    pub c3: Rational,
}

impl P3Character {
    pub fn new(rank: u64, c1: Rational, c2: Rational, c3: Rational) -> Result<Self> {
        if rank == 0 {
            return Err(domain("rank must be at least 1"));
        }
        Ok(P3Character { rank, c1, c2, c3 })
    }

    fn rank_q(&self) -> Rational {
        Rational::from_integer(self.rank.into())
    }

    /// `(c₁² − 2c₂)/2`.
    pub fn ch2(&self) -> Rational {
        (&self.c1 * &self.c1 - r(2) * &self.c2) / r(2)
    }

    /// `(c₁³ − 3c₁c₂ + 3c₃)/6`.
    pub fn ch3(&self) -> Rational {
        (&self.c1 * &self.c1 * &self.c1 - r(3) * &self.c1 * &self.c2 + r(3) * &self.c3) / r(6)
    }

    pub fn discriminant(&self) -> Rational {
        &self.c1 * &self.c1 - r(2) * self.rank_q() * self.ch2()
    }

    pub fn slope(&self) -> Rational {
        &self.c1 / self.rank_q()
    }

    /// `l(E) = (c₁³ − 3c₁Δ̄)/(6·rank²)`.
    pub fn l_value(&self) -> Rational {
        let rk = self.rank_q();
        (&self.c1 * &self.c1 * &self.c1 - r(3) * &self.c1 * self.discriminant()) / (r(6) * &rk * &rk)
    }

    pub fn to_chern(&self) -> ChernTriple {
        ChernTriple::with_e3(self.rank_q(), self.c1.clone(), self.ch2(), self.ch3())
    }

    /// The `c₃` that goes with the given `ch₃` and this rank, `c₁`, `c₂`.
    pub fn c3_from_ch3(&self, ch3: &QuadValue) -> QuadValue {
        let c1 = &self.c1;
        ch3.mul_rational(&r(2))
            .add_rational(&(c1 * &self.c2 - c1 * c1 * c1 / r(3)))
    }
}

/// `α²Δ̄ + 4(e2^β)² − 6·e1^β·e3^β`.
pub fn bmt_expression(v: &ChernTriple, point: &TiltPoint) -> Result<Rational> {
    if v.e3.is_none() {
        return Err(domain("the inequality needs the ch3 component e3"));
    }
    let t = v.twist(point.beta());
    let e3 = t.e3.as_ref().expect("twist keeps e3");
    Ok(point.alpha_sq() * v.discriminant() + r(4) * &t.e2 * &t.e2 - r(6) * &t.e1 * e3)
}

pub fn bmt_holds(v: &ChernTriple, point: &TiltPoint) -> Result<bool> {
    Ok(!bmt_expression(v, point)?.is_negative())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ch3Case {
    /// `μ^max` above the threshold: the bound depends on `μ − μ^max`.
    Large,
    /// `μ^max` at or below the threshold.
    Small,
}

fn check_discriminant(p: &P3Character) -> Result<Rational> {
    let disc = p.discriminant();
    if disc.is_negative() {
        return Err(domain(
            "negative discriminant is impossible for a slope-stable sheaf",
        ));
    }
    Ok(disc)
}

/// The value of `μ^max` in use and which case it selects.
pub fn ch3_case(p: &P3Character, mu_max: &SlopeBoundInput) -> Result<(Ch3Case, Rational)> {
    let disc = check_discriminant(p)?;
    let mu = p.slope();
    let bound = match mu_max {
        SlopeBoundInput::User(m) => m.clone(),
        SlopeBoundInput::DefaultFarey => {
            default_mu_max(&p.to_chern(), &GeometryContext::projective_three_space())?
        }
    };
    if bound >= mu {
        return Err(Error::Hypothesis(
            "the slope bound must be below mu(E)".into(),
        ));
    }
    let width = QuadValue::sqrt(&(&disc / (p.rank_q() + Rational::one())))?.div_rational(&p.rank_q())?;
    let threshold = (-width).add_rational(&mu);
    let case = if QuadValue::from(&bound) > threshold {
        Ch3Case::Large
    } else {
        Ch3Case::Small
    };
    Ok((case, bound))
}

/// The `ch₃` bound of a given case. `mu_max` only enters the large case.
pub fn ch3_bound_in_case(p: &P3Character, case: Ch3Case, mu_max: &Rational) -> Result<QuadValue> {
    let disc = check_discriminant(p)?;
    let rk = p.rank_q();
    let l = p.l_value();
    match case {
        Ch3Case::Large => {
            let t = p.slope() - mu_max;
            if !t.is_positive() {
                return Err(domain("the slope bound must be below mu(E)"));
            }
            let scaled = &disc / (&rk * &rk);
            let value = &disc / (r(6) * &rk) * (&t + scaled / &t) + l;
            Ok(QuadValue::from(value))
        }
        Ch3Case::Small => {
            let root = QuadValue::sqrt(&(&disc / (&rk + Rational::one())))?;
            let factor = (&rk + r(2)) * &disc / (r(6) * &rk * &rk);
            Ok(root.mul_rational(&factor).add_rational(&l))
        }
    }
}

/// Upper bound for `ch₃(E)` of a slope-stable sheaf on `ℙ³`.
pub fn ch3_upper_bound(p: &P3Character, mu_max: &SlopeBoundInput) -> Result<QuadValue> {
    let (case, bound) = ch3_case(p, mu_max)?;
    ch3_bound_in_case(p, case, &bound)
}

fn check_c1(c1: &Rational) -> Result<()> {
    if c1.is_zero() || *c1 == r(-1) {
        Ok(())
    } else {
        Err(domain("c1 must be 0 or -1 (normalized rank-two sheaf)"))
    }
}

/// `c₃` bounds for stable rank-two sheaves with `c₁ ∈ {0, −1}`.
pub fn rank2_c3_bound(c1: &Rational, c2: &Rational, mu_max_large: bool) -> Result<QuadValue> {
    check_c1(c1)?;
    let normalized = c1.is_zero();
    if mu_max_large {
        let linear = if normalized { c2 / r(3) } else { -c2 / r(3) };
        return Ok(QuadValue::from(r(4) / r(3) * c2 * c2 + linear));
    }
    let base = if normalized {
        r(4) * c2 / r(3)
    } else {
        (r(4) * c2 - r(1)) / r(3)
    };
    if base.is_negative() {
        return Err(domain("c2 is too small for a stable rank-two sheaf"));
    }
    Ok(QuadValue::sqrt(&base)?.mul_rational(&base))
}

/// Hartshorne's bound for stable reflexive rank-two sheaves.
pub fn hartshorne_bound(c1: &Rational, c2: &Rational) -> Result<Rational> {
    check_c1(c1)?;
    Ok(if c1.is_zero() {
        c2 * c2 - c2 + r(2)
    } else {
        c2 * c2
    })
}

/// The smaller of the applicable bounds; Hartshorne's only for reflexive
/// sheaves.
pub fn best_c3_bound(
    c1: &Rational,
    c2: &Rational,
    mu_max_large: bool,
    reflexive: bool,
) -> Result<QuadValue> {
    let ours = rank2_c3_bound(c1, c2, mu_max_large)?;
    if !reflexive {
        return Ok(ours);
    }
    let theirs = QuadValue::from(hartshorne_bound(c1, c2)?);
    Ok(ours.min(theirs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn pt(beta: Rational, alpha_sq: Rational) -> TiltPoint {
        TiltPoint::new(beta, alpha_sq).unwrap()
    }

    fn rank2(c1: i64, c2: i64) -> P3Character {
        P3Character::new(2, int(c1), int(c2), int(0)).unwrap()
    }

    #[test]
    fn chern_conversions() {
        let p = P3Character::new(1, int(0), int(1), int(0)).unwrap();
        assert_eq!(p.ch2(), int(-1));
        assert_eq!(p.discriminant(), int(2));
        let q = rank2(-1, 1);
        assert_eq!(q.ch2(), rat(-1, 2));
        assert_eq!(q.discriminant(), int(3));
        assert_eq!(q.l_value(), rat(8, 24));
        let ch3 = q.ch3();
        assert_eq!(q.c3_from_ch3(&QuadValue::from(ch3)), QuadValue::from(q.c3.clone()));
    }

    #[test]
    fn bmt_examples() {
        let o = ChernTriple::with_e3(int(1), int(0), int(0), int(0));
        assert_eq!(bmt_expression(&o, &pt(int(-1), int(7))).unwrap(), int(0));
        let ideal = ChernTriple::with_e3(int(1), int(0), int(-1), int(0));
        let value = bmt_expression(&ideal, &pt(int(-2), int(1))).unwrap();
        assert!(value.is_positive());
        let doubled = bmt_expression(&ideal.scale(&int(2)), &pt(int(-2), int(1))).unwrap();
        assert_eq!(doubled, value * int(4));
        assert!(bmt_expression(&ChernTriple::new(int(1), int(0), int(0)), &pt(int(0), int(1))).is_err());
    }

    #[test]
    fn ch3_examples() {
        let p = rank2(0, 2);
        let (case, bound) = ch3_case(&p, &SlopeBoundInput::DefaultFarey).unwrap();
        assert_eq!((case, bound.clone()), (Ch3Case::Large, rat(-1, 2)));
        let ch3 = ch3_upper_bound(&p, &SlopeBoundInput::DefaultFarey).unwrap();
        assert_eq!(ch3, QuadValue::from(int(3)));
        assert_eq!(p.c3_from_ch3(&ch3), QuadValue::from(int(6)));
        let small = ch3_bound_in_case(&p, Ch3Case::Small, &bound).unwrap();
        let expected = QuadValue::sqrt(&rat(8, 3)).unwrap().mul_rational(&rat(8, 3));
        assert_eq!(p.c3_from_ch3(&small), expected);
        let ideal = P3Character::new(1, int(0), int(1), int(0)).unwrap();
        let (case, _) = ch3_case(&ideal, &SlopeBoundInput::DefaultFarey).unwrap();
        assert_eq!(case, Ch3Case::Small);
        assert_eq!(
            ch3_upper_bound(&ideal, &SlopeBoundInput::DefaultFarey).unwrap(),
            QuadValue::from(int(1))
        );
    }

    #[test]
    fn rank_two_bounds() {
        assert_eq!(rank2_c3_bound(&int(0), &int(2), true).unwrap(), QuadValue::from(int(6)));
        assert_eq!(
            rank2_c3_bound(&int(0), &int(2), false).unwrap(),
            QuadValue::sqrt(&rat(8, 3)).unwrap().mul_rational(&rat(8, 3))
        );
        assert_eq!(rank2_c3_bound(&int(-1), &int(1), true).unwrap(), QuadValue::from(int(1)));
        assert!(rank2_c3_bound(&int(1), &int(1), true).is_err());
    }

    #[test]
    fn hartshorne() {
        assert_eq!(hartshorne_bound(&int(0), &int(2)).unwrap(), int(4));
        assert_eq!(hartshorne_bound(&int(-1), &int(3)).unwrap(), int(9));
        assert_eq!(hartshorne_bound(&int(0), &int(1)).unwrap(), int(2));
        assert!(hartshorne_bound(&int(2), &int(1)).is_err());
    }

    #[test]
    fn best_bounds() {
        assert_eq!(best_c3_bound(&int(0), &int(2), true, true).unwrap(), QuadValue::from(int(4)));
        assert_eq!(best_c3_bound(&int(0), &int(2), true, false).unwrap(), QuadValue::from(int(6)));
        assert_eq!(best_c3_bound(&int(0), &int(1), true, true).unwrap(), QuadValue::from(rat(5, 3)));
    }
}
