//! Property tests. Proptest drives seeds, the lab samplers build elements.

mod common;

use std::cmp::Ordering;

use nonarch::calculus::{derivative, derivative_with, st, FnExpr};
use nonarch::lab::sample;
use nonarch::order::{abs, classify, Classification, FieldKind, Sign};
use nonarch::series::{ExponentGroup, Precision, Series};
use nonarch::{parse_element, FieldContext, Rational};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const GROUPS: [ExponentGroup; 3] = [
    ExponentGroup::Integer,
    ExponentGroup::BoundedDenominator(6),
    ExponentGroup::Rational,
];

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() }
}

fn one() -> Series {
    Series::constant(Rational::one())
}

fn b(e: FnExpr) -> Box<FnExpr> {
    Box::new(e)
}

/// A random expression over `+ - * /` and small integer powers.
fn random_fn(rng: &mut ChaCha8Rng, depth: u32) -> FnExpr {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return if rng.gen_bool(0.6) { FnExpr::Var(0) } else { FnExpr::Const(sample::rational(rng)) };
    }
    let l = random_fn(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => FnExpr::Add(b(l), b(random_fn(rng, depth - 1))),
        1 => FnExpr::Sub(b(l), b(random_fn(rng, depth - 1))),
        2 => FnExpr::Mul(b(l), b(random_fn(rng, depth - 1))),
        3 => FnExpr::Div(b(l), b(random_fn(rng, depth - 1))),
        _ => FnExpr::PowInt(b(l), rng.gen_range(-2..=3)),
    }
}

/// `P(x) / (x^2 + c)` with `deg P` in 3..=6 and `c >= 1`: no real poles.
fn smooth_fn(rng: &mut ChaCha8Rng) -> FnExpr {
    let deg = rng.gen_range(3..=6);
    let mut p = FnExpr::Const(Rational::from(rng.gen_range(1..=9)));
    for _ in 0..deg {
        p = FnExpr::Add(b(FnExpr::Mul(b(p), b(FnExpr::Var(0)))), b(FnExpr::Const(Rational::from(rng.gen_range(-9..=9)))));
    }
    let den = FnExpr::Add(b(FnExpr::PowInt(b(FnExpr::Var(0)), 2)), b(FnExpr::Const(Rational::from(rng.gen_range(1..=5)))));
    FnExpr::Div(b(p), b(den))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn inverse_times_element_is_one(seed in any::<u64>(), g in 0usize..3) {
        let mut rng = sample::rng(seed);
        let x = sample::nonzero_series(&mut rng, GROUPS[g]);
        let inv = x.inv_with(&Precision::default()).unwrap();
        let prod = &x * &inv;
        prop_assert!(prod.agrees_with(&one()), "{x} * {inv} = {prod}");
    }

    #[test]
    fn root_power_returns_input(seed in any::<u64>(), g in 0usize..3, k in 2u32..=3) {
        let mut rng = sample::rng(seed);
        let mut x = sample::nonzero_series(&mut rng, GROUPS[g]);
        if x.sign().unwrap() == Sign::Negative {
            x = -&x;
        }
        // A leading coefficient that is a perfect k-th power keeps the root rational.
        let lead = x.leading().unwrap().1.clone();
        let mut scale = Rational::one();
        for _ in 1..k {
            scale = &scale * &lead;
        }
        let x = x.scale(&scale);
        let prec = Precision::default();
        let r = x.root(k, &prec).unwrap();
        let back = r.powi(k as i64, &prec).unwrap();
        prop_assert!(back.agrees_with(&x), "root {k} of {x} = {r}, power {back}");
    }

    #[test]
    fn expansion_is_ring_homomorphism(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let (f, g) = (sample::ratfunc(&mut rng), sample::ratfunc(&mut rng));
        let c = Rational::from(8);
        let (fs, gs) = (f.to_series(&c), g.to_series(&c));
        prop_assert!((&f + &g).to_series(&c).agrees_with(&(&fs + &gs)));
        prop_assert!((&f * &g).to_series(&c).agrees_with(&(&fs * &gs)));
    }

    #[test]
    fn expansion_preserves_order(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let (f, g) = (sample::ratfunc(&mut rng), sample::ratfunc(&mut rng));
        let c = Rational::from(12);
        if let Ok(ord) = f.to_series(&c).compare(&g.to_series(&c)) {
            prop_assert_eq!(ord, f.compare(&g));
        }
    }

    #[test]
    fn sign_matches_small_evaluations(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let f = sample::nonzero_ratfunc(&mut rng);
        let radius = f.sign_stable_radius();
        for m in [2, 10, 1000] {
            let eps = &radius / &Rational::from(m);
            let value = f.eval(&eps).unwrap();
            prop_assert_eq!(Sign::of_rational(&value), f.sign(), "f = {}, eps = {}", f, eps);
        }
    }

    #[test]
    fn standard_part_decomposes(seed in any::<u64>(), g in 0usize..3) {
        let mut rng = sample::rng(seed);
        let x = sample::finite_series(&mut rng, GROUPS[g]);
        let r = st(&x).unwrap();
        let rest = &x - &Series::constant(r.clone());
        let class = classify(&rest).unwrap();
        prop_assert!(class.is_infinitesimal(), "{x} - {r} is {class:?}");
        let other = &r + &sample::nonzero_rational(&mut rng);
        let off = classify(&(&x - &Series::constant(other))).unwrap();
        prop_assert_eq!(off, Classification::FiniteAppreciable);
    }

    #[test]
    fn norm_reverses_valuation(seed in any::<u64>(), g in 0usize..3) {
        let mut rng = sample::rng(seed);
        let (x, y) = (sample::series(&mut rng, GROUPS[g]), sample::series(&mut rng, GROUPS[g]));
        let (nx, ny) = (x.norm().unwrap(), y.norm().unwrap());
        let (vx, vy) = (x.valuation().unwrap(), y.valuation().unwrap());
        prop_assert_eq!(nx.cmp_exact(&ny), vy.cmp(&vx));
        prop_assert_eq!(nx.cmp_exact(&ny) != Ordering::Greater, vx >= vy);
    }

    #[test]
    fn infinitesimals_are_convex(seed in any::<u64>(), g in 0usize..3) {
        let mut rng = sample::rng(seed);
        let a = sample::series(&mut rng, GROUPS[g]);
        let bnd = sample::infinitesimal_series(&mut rng, GROUPS[g]);
        let bnd = abs(&bnd).unwrap();
        if abs(&a).unwrap().compare(&bnd).unwrap() != Ordering::Greater {
            prop_assert!(classify(&a).unwrap().is_infinitesimal());
        }
    }

    #[test]
    fn series_text_and_json_round_trip(seed in any::<u64>(), g in 0usize..3) {
        let mut rng = sample::rng(seed);
        let mut x = sample::series(&mut rng, GROUPS[g]);
        if rng.gen_bool(0.5) {
            x = &x + &Series::unknown_beyond(Rational::from(rng.gen_range(-2..=8)));
        }
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(&serde_json::from_str::<Series>(&json).unwrap(), &x);
        let field = match GROUPS[g] {
            ExponentGroup::Integer => FieldKind::Laurent,
            ExponentGroup::BoundedDenominator(n) => FieldKind::Puiseux(Some(n)),
            ExponentGroup::Rational => FieldKind::LeviCivita,
        };
        let parsed = parse_element(&x.to_string(), &FieldContext::new(field)).unwrap();
        prop_assert_eq!(parsed.as_series(), Some(&x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn derivative_is_independent_of_dx(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let f = random_fn(&mut rng, 3);
        let r = sample::rational(&mut rng);
        let Some(expected) = common::eval(&common::diff(&f), &r) else {
            return Ok(());
        };
        prop_assume!(common::eval(&f, &r).is_some());
        let prec = Precision::default();
        for dx in ["t", "2*t", "t^2"] {
            let dx = parse_element(dx, &FieldContext::new(FieldKind::Laurent)).unwrap();
            let got = derivative_with(&f, &r, dx.as_series().unwrap(), &prec).unwrap();
            prop_assert_eq!(&got, &expected, "f = {}, r = {}", f, r);
        }
    }

    #[test]
    fn product_rule_emerges(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let (f, g) = (random_fn(&mut rng, 2), random_fn(&mut rng, 2));
        let r = sample::rational(&mut rng);
        let prec = Precision::default();
        let (Ok(df), Ok(dg)) = (derivative(&f, &r, &prec), derivative(&g, &r, &prec)) else {
            return Ok(());
        };
        let (Some(fr), Some(gr)) = (common::eval(&f, &r), common::eval(&g, &r)) else {
            return Ok(());
        };
        let dfg = derivative(&FnExpr::Mul(b(f), b(g)), &r, &prec).unwrap();
        prop_assert_eq!(dfg, &(&df * &gr) + &(&fr * &dg));
    }

    #[test]
    fn central_differences_converge_quadratically(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let f = smooth_fn(&mut rng);
        let r = Rational::new(rng.gen_range(-6..=6), 2);
        let d = derivative(&f, &r, &Precision::default()).unwrap();
        let err = |h: Rational| {
            let up = common::eval(&f, &(&r + &h)).unwrap();
            let down = common::eval(&f, &(&r - &h)).unwrap();
            let central = &(&up - &down) / &(&h + &h);
            (&d - &central).abs()
        };
        let (e3, e4) = (err(Rational::new(1, 1000)), err(Rational::new(1, 10000)));
        if e3.is_zero() {
            prop_assert!(e4.is_zero());
            return Ok(());
        }
        let order = (e3.to_f64() / e4.to_f64()).log10();
        prop_assert!((order - 2.0).abs() < 0.1, "f = {}, r = {}, order {}", f, r, order);
    }
}
