//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tiltlab_core::{ChernTriple, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut ChaCha8Rng, num: i64, dens: &[i64]) -> Rational {
    let d = dens[rng.gen_range(0..dens.len())];
    Rational::new(rng.gen_range(-num..=num).into(), d.into())
}

/// A character with `e0 ∈ {1..max_e0}` and `Δ̄ ≥ 0`; `Δ̄ = 0` about one time
/// in ten.
pub fn character(rng: &mut ChaCha8Rng, max_e0: i64) -> ChernTriple {
    let e0 = Rational::from_integer(rng.gen_range(1..=max_e0).into());
    let e1 = rational(rng, 8, &[1, 2, 3]);
    let drop = if rng.gen_range(0..10) == 0 {
        Rational::from_integer(0.into())
    } else {
        Rational::new(rng.gen_range(1..=12).into(), [1, 2, 4][rng.gen_range(0..3)].into())
    };
    let e2 = &e1 * &e1 / (Rational::from_integer(2.into()) * &e0) - drop;
    ChernTriple::new(e0, e1, e2)
}

/// A character with strictly positive discriminant.
pub fn stable_character(rng: &mut ChaCha8Rng, max_e0: i64) -> ChernTriple {
    loop {
        let v = character(rng, max_e0);
        if v.discriminant() > Rational::from_integer(0.into()) {
            return v;
        }
    }
}

/// `p` with `0 < p < 1`.
pub fn unit_fraction(rng: &mut ChaCha8Rng) -> Rational {
    let d: i64 = rng.gen_range(2..=16);
    Rational::new(rng.gen_range(1..d).into(), d.into())
}
