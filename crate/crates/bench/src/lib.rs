//! Fixed inputs for the kernel benchmarks in `benches/`.

use tiltlab_core::{int, rat, ChernTriple, GeometryContext, QuadValue, Rational, ScanRequest};

/// Pairs `a + b√p` against `c + d√q` with distinct square-free radicands, so
/// every comparison goes through the squaring path.
pub fn mixed_radical_pairs() -> Vec<(QuadValue, QuadValue)> {
    let radicands = [2u32, 3, 5, 6, 7, 10, 11, 13];
    let mut out = Vec::new();
    for (i, &p) in radicands.iter().enumerate() {
        for &q in &radicands[i + 1..] {
            let a = QuadValue::new(rat(7, 3), rat(-5, 4), p.into()).unwrap();
            let b = QuadValue::new(rat(-1, 2), rat(9, 7), q.into()).unwrap();
            out.push((a, b));
        }
    }
    out
}

/// `(w, v)` pairs with `μ(w) < μ(v)` and nonnegative discriminants.
pub fn wall_pairs() -> Vec<(ChernTriple, ChernTriple)> {
    let v = ChernTriple::new(int(3), int(2), rat(-7, 2));
    let mut out = Vec::new();
    for e0 in 1..=4i64 {
        for e1 in -8..=1i64 {
            let w0 = int(e0);
            let w1 = int(e1);
            let w2 = &w1 * &w1 / (int(2) * &w0) - rat(1, 2);
            out.push((ChernTriple::new(w0, w1, w2), v.clone()));
        }
    }
    out
}

/// Rationals with large numerators and denominators for Farey rounding.
pub fn farey_inputs() -> Vec<Rational> {
    (1..=16)
        .map(|k| rat(355 * k + 113, 113 * k + 7) * rat(1_000_003, 999_983))
        .collect()
}

/// The scan of the ideal-sheaf class `(1, 0, −1)` on ℙ³.
pub fn ideal_scan(rank_max: u64) -> ScanRequest {
    ScanRequest::new(
        ChernTriple::new(int(1), int(0), int(-1)),
        GeometryContext::projective_three_space(),
        rank_max,
        (int(-4), int(0)),
    )
}
