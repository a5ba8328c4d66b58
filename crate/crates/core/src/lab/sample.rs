//! Seeded random elements for the axiom suites and transfer checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numeric::Rational;
use crate::ratfunc::{Poly, RatFunc};
use crate::series::{ExponentGroup, Series};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| <= 9`, `1 <= q <= 6`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

pub fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let q = rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Integer coefficients in `[-bound, bound]`, degree at most `max_degree`.
pub fn poly<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, bound: i64) -> Poly {
    let degree = rng.gen_range(0..=max_degree);
    Poly::from_coeffs((0..=degree).map(|_| Rational::from(rng.gen_range(-bound..=bound))))
}

/// Numerator and denominator of degree at most 6, coefficients in `[-9, 9]`.
pub fn ratfunc<R: Rng + ?Sized>(rng: &mut R) -> RatFunc {
    let num = poly(rng, 6, 9);
    let den = loop {
        let d = poly(rng, 6, 9);
        if !d.is_zero() {
            break d;
        }
    };
    RatFunc::new(num, den).expect("nonzero denominator")
}

pub fn nonzero_ratfunc<R: Rng + ?Sized>(rng: &mut R) -> RatFunc {
    loop {
        let f = ratfunc(rng);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Denominator for the exponents of one sample: fixed by the group, or
/// drawn from `1..=7` for rational exponents.
pub fn exponent_denominator<R: Rng + ?Sized>(rng: &mut R, group: ExponentGroup) -> i64 {
    match group {
        ExponentGroup::Integer => 1,
        ExponentGroup::BoundedDenominator(n) => n as i64,
        ExponentGroup::Rational => rng.gen_range(1..=7),
    }
}

/// An exact series with up to five terms and exponents in `[lo, hi]`.
///
/// Exponents of one sample share a denominator, so expansions of its
/// inverse and roots advance in steps of at least `1/7`.
pub fn series_in<R: Rng + ?Sized>(rng: &mut R, group: ExponentGroup, lo: i64, hi: i64) -> Series {
    let n = rng.gen_range(1..=5);
    let den = exponent_denominator(rng, group);
    let terms: Vec<_> = (0..n)
        .map(|_| (Rational::new(rng.gen_range(lo * den..=hi * den), den), nonzero_rational(rng)))
        .collect();
    let mut s = Series::zero();
    for (e, c) in terms {
        s = &s + &Series::monomial(c, e);
    }
    s
}

/// An exact series with valuation in `[-3, 5]` (or zero, rarely).
pub fn series<R: Rng + ?Sized>(rng: &mut R, group: ExponentGroup) -> Series {
    if rng.gen_ratio(1, 50) {
        return Series::zero();
    }
    series_in(rng, group, -3, 5)
}

pub fn nonzero_series<R: Rng + ?Sized>(rng: &mut R, group: ExponentGroup) -> Series {
    loop {
        let s = series_in(rng, group, -3, 5);
        if !s.is_exact_zero() {
            return s;
        }
    }
}

/// A nonzero exact series with positive valuation.
pub fn infinitesimal_series<R: Rng + ?Sized>(rng: &mut R, group: ExponentGroup) -> Series {
    loop {
        let s = series_in(rng, group, 0, 4);
        match s.leading() {
            Some((e, _)) if e.is_positive() => return s,
            _ => {}
        }
    }
}

/// A finite series `r + h` with `r` rational and `h` infinitesimal.
pub fn finite_series<R: Rng + ?Sized>(rng: &mut R, group: ExponentGroup) -> Series {
    &Series::constant(rational(rng)) + &infinitesimal_series(rng, group)
}
