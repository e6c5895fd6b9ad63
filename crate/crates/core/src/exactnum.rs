//! Exact arithmetic kernel.
//!
//! All slopes, centers and discriminants are arbitrary-precision rationals.
//! Whenever a square root of a rational shows up (radii, the `β₁` family of
//! thresholds, `Δ̄^{3/2}` bounds) it is held as a [`QuadValue`]
//! `q + s·√d` with `d` square-free. Only one radical is ever live inside a
//! single value; comparisons across different radicands are still exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("square root of a negative number ({0})")]
    NegativeSqrt(String),
    #[error("cannot combine values with different radicands √{left} and √{right}")]
    MixedRadicals { left: BigInt, right: BigInt },
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational {0:?}")]
    Parse(String),
}

/// `n/d` as a rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`; surrounding whitespace is ignored.
pub fn parse_rational(text: &str) -> Result<Rational, ExactError> {
    let t = text.trim();
    let err = || ExactError::Parse(text.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter storing a [`Rational`] as its `"p/q"` string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Same as [`rational_str`] for optional fields.
pub mod rational_str_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Writes `n = f²·d` with `d` square-free.
///
/// Trial division only runs up to the cube root of the unfactored part: once
/// `p³` exceeds it, what remains is `1`, a prime, a product of two primes or
/// a prime square.
fn square_free_split(n: &BigUint) -> (BigUint, BigUint) {
    if let Some(small) = n.to_u128() {
        let (f, d) = square_free_split_u128(small);
        return (BigUint::from(f), BigUint::from(d));
    }
    let mut rest = n.clone();
    let mut factor = BigUint::one();
    let mut square_free = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p * &p <= rest {
        let mut exp = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            exp += 1;
        }
        for _ in 0..exp / 2 {
            factor *= &p;
        }
        if exp % 2 == 1 {
            square_free *= &p;
        }
        p += 1u32;
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        factor *= root;
    } else {
        square_free *= rest;
    }
    (factor, square_free)
}

fn square_free_split_u128(n: u128) -> (u128, u128) {
    if n == 0 {
        return (0, 0);
    }
    let mut rest = n;
    let mut factor = 1u128;
    let mut square_free = 1u128;
    let mut p = 2u128;
    while p.saturating_mul(p).saturating_mul(p) <= rest {
        let mut exp = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            exp += 1;
        }
        factor *= p.pow(exp / 2);
        if exp % 2 == 1 {
            square_free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if root * root == rest {
        factor *= root;
    } else {
        square_free *= rest;
    }
    (factor, square_free)
}

/// Exact real number `q + s·√d`, `d` square-free.
///
/// Canonical form: `d == 0` exactly when `s == 0`, and `d != 1`. Two values
/// are numerically equal iff their canonical fields are equal, so the derived
/// `Eq`/`Hash` agree with the numeric [`Ord`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadValue {
    q: Rational,
    s: Rational,
    d: BigInt,
}

impl QuadValue {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn from_rational(q: Rational) -> Self {
        QuadValue {
            q,
            s: Rational::zero(),
            d: BigInt::zero(),
        }
    }

    /// `q + s·√radicand` for any nonnegative integer radicand; square factors
    /// are pulled out into `s`.
    pub fn new(q: Rational, s: Rational, radicand: BigInt) -> Result<Self, ExactError> {
        if radicand.is_negative() {
            return Err(ExactError::NegativeSqrt(radicand.to_string()));
        }
        if s.is_zero() || radicand.is_zero() {
            return Ok(Self::from_rational(q));
        }
        let (f, d) = square_free_split(radicand.magnitude());
        let s = s * Rational::from_integer(BigInt::from(f));
        if d.is_one() {
            return Ok(Self::from_rational(q + s));
        }
        Ok(QuadValue {
            q,
            s,
            d: BigInt::from(d),
        })
    }

    /// `√x` in canonical form. `√(p/q) = √(p·q)/q`.
    pub fn sqrt(x: &Rational) -> Result<Self, ExactError> {
        if x.is_negative() {
            return Err(ExactError::NegativeSqrt(format_rational(x)));
        }
        let radicand = x.numer() * x.denom();
        let s = Rational::new(BigInt::one(), x.denom().clone());
        Self::new(Rational::zero(), s, radicand)
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero() && self.s.is_zero()
    }

    /// Sign as an ordering against zero.
    pub fn signum(&self) -> Ordering {
        single_radical_sign(&self.q, &self.s, &self.d)
    }

    fn shares_radical(&self, other: &QuadValue) -> bool {
        self.d == other.d || self.is_rational() || other.is_rational()
    }

    fn common_radical(&self, other: &QuadValue) -> Result<BigInt, ExactError> {
        if !self.shares_radical(other) {
            return Err(ExactError::MixedRadicals {
                left: self.d.clone(),
                right: other.d.clone(),
            });
        }
        Ok(if self.is_rational() {
            other.d.clone()
        } else {
            self.d.clone()
        })
    }

    pub fn try_add(&self, other: &QuadValue) -> Result<QuadValue, ExactError> {
        let d = self.common_radical(other)?;
        QuadValue::new(&self.q + &other.q, &self.s + &other.s, d)
    }

    pub fn try_sub(&self, other: &QuadValue) -> Result<QuadValue, ExactError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &QuadValue) -> Result<QuadValue, ExactError> {
        let d = self.common_radical(other)?;
        let dr = Rational::from_integer(d.clone());
        let q = &self.q * &other.q + &self.s * &other.s * dr;
        let s = &self.q * &other.s + &self.s * &other.q;
        QuadValue::new(q, s, d)
    }

    /// `1/(q + s√d) = (q − s√d)/(q² − s²d)`.
    pub fn recip(&self) -> Result<QuadValue, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let norm = &self.q * &self.q - &self.s * &self.s * Rational::from_integer(self.d.clone());
        QuadValue::new(&self.q / &norm, -&self.s / &norm, self.d.clone())
    }

    pub fn try_div(&self, other: &QuadValue) -> Result<QuadValue, ExactError> {
        self.try_mul(&other.recip()?)
    }

    pub fn add_rational(&self, r: &Rational) -> QuadValue {
        QuadValue {
            q: &self.q + r,
            s: self.s.clone(),
            d: self.d.clone(),
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> QuadValue {
        if r.is_zero() {
            return QuadValue::zero();
        }
        QuadValue {
            q: &self.q * r,
            s: &self.s * r,
            d: self.d.clone(),
        }
    }

    pub fn div_rational(&self, r: &Rational) -> Result<QuadValue, ExactError> {
        if r.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self.mul_rational(&r.recip()))
    }

    pub fn square(&self) -> QuadValue {
        self.try_mul(self).expect("a value shares its own radical")
    }

    /// Largest integer `k` with `k ≤ self`.
    pub fn floor(&self) -> BigInt {
        // floor(√x) = isqrt(floor(x)) for rational x ≥ 0
        let root_sq = &self.s * &self.s * Rational::from_integer(self.d.clone());
        let root_floor = root_sq.floor().to_integer().magnitude().sqrt();
        let radical_part = if self.s.is_negative() {
            -BigInt::from(root_floor) - BigInt::one()
        } else {
            BigInt::from(root_floor)
        };
        let mut k = self.q.floor().to_integer() + radical_part;
        while QuadValue::from(Rational::from_integer(&k + 1)) <= *self {
            k += 1;
        }
        while QuadValue::from(Rational::from_integer(k.clone())) > *self {
            k -= 1;
        }
        k
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Smallest integer strictly greater than `self`.
    pub fn next_integer_above(&self) -> BigInt {
        self.floor() + 1
    }

    /// Approximate value; only for rendering.
    pub fn to_f64(&self) -> f64 {
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        if self.is_rational() {
            return q;
        }
        let s = self.s.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        q + s * d.sqrt()
    }
}

/// Sign of `q + s√d` for a single radical.
fn single_radical_sign(q: &Rational, s: &Rational, d: &BigInt) -> Ordering {
    let sq = q.cmp(&Rational::zero());
    if s.is_zero() || d.is_zero() {
        return sq;
    }
    let ss = s.cmp(&Rational::zero());
    if sq == Ordering::Equal || sq == ss {
        return ss;
    }
    // opposite signs: the larger magnitude wins
    let lhs = q * q;
    let rhs = s * s * Rational::from_integer(d.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sq,
        Ordering::Less => ss,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Sign of `a + b` where `a` and `b` may carry different radicands.
fn sign_of_sum(a: &QuadValue, b: &QuadValue) -> Ordering {
    if a.shares_radical(b) {
        return a.try_add(b).expect("shared radical").signum();
    }
    // a + b = A + B with A = (qa + qb) + sa√da, B = sb√db
    let big_a = QuadValue {
        q: &a.q + &b.q,
        s: a.s.clone(),
        d: a.d.clone(),
    };
    let sign_a = big_a.signum();
    let sign_b = b.s.cmp(&Rational::zero());
    if sign_a == Ordering::Equal {
        return sign_b;
    }
    if sign_a == sign_b {
        return sign_a;
    }
    // compare |A|² against |B|² = sb²·db
    let a_sq = big_a.square();
    let b_sq = &b.s * &b.s * Rational::from_integer(b.d.clone());
    match a_sq.add_rational(&-b_sq).signum() {
        Ordering::Greater => sign_a,
        Ordering::Less => sign_b,
        Ordering::Equal => Ordering::Equal,
    }
}

impl Ord for QuadValue {
    fn cmp(&self, other: &Self) -> Ordering {
        sign_of_sum(self, &-other)
    }
}

impl PartialOrd for QuadValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Neg for QuadValue {
    type Output = QuadValue;
    fn neg(self) -> QuadValue {
        -&self
    }
}

impl std::ops::Neg for &QuadValue {
    type Output = QuadValue;
    fn neg(self) -> QuadValue {
        QuadValue {
            q: -&self.q,
            s: -&self.s,
            d: self.d.clone(),
        }
    }
}

impl From<Rational> for QuadValue {
    fn from(q: Rational) -> Self {
        QuadValue::from_rational(q)
    }
}

impl From<&Rational> for QuadValue {
    fn from(q: &Rational) -> Self {
        QuadValue::from_rational(q.clone())
    }
}

impl fmt::Display for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&format_rational(&self.q));
        }
        let radical = if self.s.is_one() {
            format!("√{}", self.d)
        } else if (-&self.s).is_one() {
            format!("-√{}", self.d)
        } else {
            format!("{}·√{}", format_rational(&self.s), self.d)
        };
        if self.q.is_zero() {
            f.write_str(&radical)
        } else if let Some(magnitude) = radical.strip_prefix('-') {
            write!(f, "{} - {}", format_rational(&self.q), magnitude)
        } else {
            write!(f, "{} + {}", format_rational(&self.q), radical)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QuadRepr {
    q: String,
    s: String,
    d: u64,
}

impl Serialize for QuadValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let d = self
            .d
            .to_u64()
            .ok_or_else(|| serde::ser::Error::custom("radicand exceeds u64"))?;
        QuadRepr {
            q: format_rational(&self.q),
            s: format_rational(&self.s),
            d,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = QuadRepr::deserialize(deserializer)?;
        let q = parse_rational(&repr.q).map_err(serde::de::Error::custom)?;
        let s = parse_rational(&repr.s).map_err(serde::de::Error::custom)?;
        QuadValue::new(q, s, BigInt::from(repr.d)).map_err(serde::de::Error::custom)
    }
}

/// Largest of a nonempty list of values; `None` on an empty list.
pub fn max_of<I: IntoIterator<Item = QuadValue>>(values: I) -> Option<QuadValue> {
    values.into_iter().max()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(q: Rational, s: Rational, d: i64) -> QuadValue {
        QuadValue::new(q, s, BigInt::from(d)).unwrap()
    }

    #[test]
    fn sqrt_of_perfect_square_is_rational() {
        let v = QuadValue::sqrt(&int(4)).unwrap();
        assert_eq!(v, QuadValue::from(int(2)));
        assert!(v.d().is_zero());
    }

    #[test]
    fn sqrt_pulls_out_square_factors() {
        let v = QuadValue::sqrt(&int(8)).unwrap();
        assert_eq!(v.q(), &int(0));
        assert_eq!(v.s(), &int(2));
        assert_eq!(v.d(), &BigInt::from(2));
    }

    #[test]
    fn sqrt_of_zero() {
        assert!(QuadValue::sqrt(&int(0)).unwrap().is_zero());
    }

    #[test]
    fn sqrt_of_fraction() {
        // √(2/9) = (1/3)√2
        let v = QuadValue::sqrt(&rat(2, 9)).unwrap();
        assert_eq!(v, quad(int(0), rat(1, 3), 2));
        // √(1/2) = (1/2)√2
        let v = QuadValue::sqrt(&rat(1, 2)).unwrap();
        assert_eq!(v, quad(int(0), rat(1, 2), 2));
    }

    #[test]
    fn sqrt_rejects_negative() {
        assert!(matches!(
            QuadValue::sqrt(&int(-1)),
            Err(ExactError::NegativeSqrt(_))
        ));
    }

    #[test]
    fn sqrt_squares_back() {
        for n in 0..200 {
            for d in 1..12 {
                let x = rat(n, d);
                let r = QuadValue::sqrt(&x).unwrap();
                assert_eq!(r.square(), QuadValue::from(x.clone()), "√{x}");
            }
        }
    }

    #[test]
    fn large_square_free_split() {
        // 2^70 · 3 · 1000003²
        let n = (BigUint::one() << 70u32) * BigUint::from(3u32) * BigUint::from(1_000_003u64).pow(2);
        let (f, d) = square_free_split(&n);
        assert_eq!(d, BigUint::from(3u32));
        assert_eq!(f, (BigUint::one() << 35u32) * BigUint::from(1_000_003u64));
    }

    #[test]
    fn compare_examples() {
        let a = quad(int(1), int(1), 2);
        assert_eq!(a.cmp(&QuadValue::from(rat(5, 2))), Ordering::Less);
        assert_eq!(a.cmp(&a.clone()), Ordering::Equal);
        let r3 = QuadValue::sqrt(&int(3)).unwrap();
        let r2 = QuadValue::sqrt(&int(2)).unwrap();
        assert_eq!(r3.cmp(&r2), Ordering::Greater);
    }

    #[test]
    fn compare_mixed_radicals_close_values() {
        // √2 + √3 ≈ 3.14626 vs √10 ≈ 3.16228
        let lhs = QuadValue::sqrt(&int(2)).unwrap().add_rational(&int(0));
        let three = QuadValue::sqrt(&int(3)).unwrap();
        // √10 − √3 ≈ 1.4302 > √2 ≈ 1.41421
        let ten_minus_three = QuadValue::sqrt(&int(10)).unwrap();
        assert_eq!(
            sign_of_sum(&ten_minus_three, &-&three),
            Ordering::Greater
        );
        assert!(lhs < QuadValue::sqrt(&int(10)).unwrap().try_sub(&QuadValue::zero()).unwrap());
    }

    #[test]
    fn arithmetic_rejects_mixed_radicals() {
        let r2 = QuadValue::sqrt(&int(2)).unwrap();
        let r3 = QuadValue::sqrt(&int(3)).unwrap();
        assert!(matches!(
            r2.try_add(&r3),
            Err(ExactError::MixedRadicals { .. })
        ));
        assert_eq!(r2.try_mul(&r2).unwrap(), QuadValue::from(int(2)));
    }

    #[test]
    fn recip_and_division() {
        // 1/(1+√2) = √2 − 1
        let a = quad(int(1), int(1), 2);
        assert_eq!(a.recip().unwrap(), quad(int(-1), int(1), 2));
        assert_eq!(a.try_div(&a).unwrap(), QuadValue::from(int(1)));
        assert!(QuadValue::zero().recip().is_err());
    }

    #[test]
    fn floor_and_next_integer() {
        let a = quad(int(1), int(1), 2); // 2.414…
        assert_eq!(a.floor(), BigInt::from(2));
        assert_eq!(a.ceil(), BigInt::from(3));
        let b = -&a; // −2.414…
        assert_eq!(b.floor(), BigInt::from(-3));
        assert_eq!(QuadValue::from(int(2)).next_integer_above(), BigInt::from(3));
        assert_eq!(QuadValue::from(int(-1)).next_integer_above(), BigInt::from(0));
        let c = quad(rat(1, 2), rat(-7, 3), 5); // 0.5 − 5.217… = −4.717…
        assert_eq!(c.floor(), BigInt::from(-5));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational(" 6/4 ").unwrap(), rat(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn quad_json_shape() {
        let v = quad(rat(-1, 2), rat(3, 4), 2);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"q":"-1/2","s":"3/4","d":2}"#);
        let back: QuadValue = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn display_forms() {
        assert_eq!(quad(int(0), int(2), 2).to_string(), "2·√2");
        assert_eq!(quad(int(1), int(-1), 3).to_string(), "1 - √3");
        assert_eq!(QuadValue::from(rat(-3, 2)).to_string(), "-3/2");
    }
}
