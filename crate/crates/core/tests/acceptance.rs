//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Run with `cargo test -p nonarch --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{catalog, diff, eval, f, factorial, q};
use nonarch::calculus::{derivative, derivative_with, difference_quotient, st, taylor};
use nonarch::lab::{self, sample, FrechetOrder, SequenceSpec, Status};
use nonarch::order::classify;
use nonarch::{parse_element, Classification, FieldContext, FieldKind, Precision, Rational, Series};
use rand::Rng;

const SEED: u64 = 20240521;

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// sqrt(t)/(t - t^2) = sum_{n >= -1} t^(n + 1/2).
fn c1_sqrt_identity() -> Result<String, String> {
    let prec = Precision::default();
    let t = Series::t();
    let root = t.root(2, &prec).map_err(err)?;
    let inv = (&t - &(&t * &t)).inv_with(&prec).map_err(err)?;
    let s = &root * &inv;
    for n in -1..=8 {
        let e = Rational::from(n) + Rational::new(1, 2);
        ensure(s.coeff(&e) == Rational::one(), || format!("coefficient of t^({e}) is {}", s.coeff(&e)))?;
    }
    let upto = Rational::new(17, 2);
    let extra: Vec<_> = s.terms().iter().filter(|(e, c)| *e <= upto && !c.is_one()).collect();
    ensure(extra.is_empty(), || format!("unexpected terms {extra:?}"))?;
    let half = Rational::new(1, 2);
    ensure(s.terms().iter().all(|(e, _)| (e - &half).is_integer()), || "exponent off the t^(n + 1/2) lattice".into())?;
    ensure(classify(&s).map_err(err)? == Classification::InfinitelyLarge, || "not infinitely large".into())?;
    Ok(format!("coefficients 1 at t^(n+1/2), n = -1..8; {} terms to cutoff {}", s.terms().len(), s.cutoff()))
}

/// ((r + dx)^3 - r^3)/dx = 3r^2 + 3r dx + dx^2, standard part 3r^2.
fn c2_cube_derivation() -> Result<String, String> {
    let prec = Precision::default();
    let cube = f("x^3");
    let mut rng = sample::rng(SEED);
    for _ in 0..20 {
        let r = sample::rational(&mut rng);
        let three_r2 = Rational::from(3) * &r * &r;
        let quotient = difference_quotient(&cube, &r, &Series::t(), &prec).map_err(err)?;
        let expected = Series::exact([
            (Rational::zero(), three_r2.clone()),
            (Rational::one(), Rational::from(3) * &r),
            (Rational::from(2), Rational::one()),
        ]);
        ensure(quotient == expected, || format!("r = {r}: quotient {quotient}"))?;
        let d = derivative(&cube, &r, &prec).map_err(err)?;
        ensure(d == three_r2, || format!("r = {r}: derivative {d}"))?;
    }
    Ok("20 random r: quotient = 3r^2 + 3r*dx + dx^2 exactly, derivative 3r^2".into())
}

/// 1000-case field, order and valuation suites for every field.
fn c3_axioms() -> Result<String, String> {
    let prec = Precision::default();
    let mut summary = Vec::new();
    for field in ["q", "ratfunc", "laurent", "puiseux:6", "levicivita"] {
        let report = lab::check_axioms(field.parse().map_err(err)?, 1000, SEED, &prec);
        ensure(report.status() == Status::Pass, || format!("{field}:\n{report}"))?;
        let eq = report
            .assertions
            .iter()
            .find(|a| a.desc.starts_with("v(x) != v(y)"))
            .ok_or("missing ultrametric equality check")?;
        ensure(eq.cases >= 100 || field == "q", || format!("{field}: only {} ultrametric equality cases", eq.cases))?;
        summary.push(format!("{field} {} families", report.assertions.len()));
    }
    Ok(summary.join(", "))
}

/// Example catalog in K(t) and in the Levi-Civita surrogate.
fn c4_classification() -> Result<String, String> {
    let catalog = [
        ("t", Classification::NonzeroInfinitesimal),
        ("t^2", Classification::NonzeroInfinitesimal),
        ("t + t^2", Classification::NonzeroInfinitesimal),
        ("1 + t", Classification::FiniteAppreciable),
        ("2 + t^2", Classification::FiniteAppreciable),
        ("3 + t + t^2", Classification::FiniteAppreciable),
        ("1/t", Classification::InfinitelyLarge),
        ("1/t^2", Classification::InfinitelyLarge),
        ("1/(t + t^2)", Classification::InfinitelyLarge),
    ];
    for field in [FieldKind::RatFunc, FieldKind::LeviCivita] {
        let ctx = FieldContext::new(field);
        for (text, want) in catalog {
            let got = parse_element(text, &ctx).and_then(|x| x.classify()).map_err(err)?;
            ensure(got == want, || format!("{field}: {text} classified as {got}"))?;
        }
    }
    Ok("9 catalog elements in ratfunc and levicivita".into())
}

/// derivative() against symbolic differentiation, and taylor(exp, 0, 8).
fn c5_calculus_oracle() -> Result<String, String> {
    let prec = Precision::default();
    let mut checked = 0;
    for (text, points) in catalog() {
        let func = f(&text);
        let d = diff(&func);
        for r in &points {
            let want = eval(&d, r).ok_or_else(|| format!("oracle cannot evaluate ({text})' at {r}"))?;
            let got = derivative(&func, r, &prec).map_err(|e| format!("{text} at {r}: {e}"))?;
            ensure(got == want, || format!("({text})' at {r}: got {got}, oracle {want}"))?;
            checked += 1;
        }
    }
    let coeffs = taylor(&f("exp(x)"), &Rational::zero(), 8, &prec).map_err(err)?;
    let want: Vec<Rational> = (0..=8).map(|k| Rational::one() / factorial(k)).collect();
    ensure(coeffs == want, || format!("taylor(exp, 0, 8) = {coeffs:?}"))?;
    Ok(format!("{checked} (function, point) pairs match; taylor(exp, 0, 8) = [1/k!]"))
}

/// Same derivative for dx = t, 2t, t^2.
fn c6_dx_independence() -> Result<String, String> {
    let prec = Precision::default();
    let increments = [
        Series::t(),
        Series::monomial(Rational::from(2), Rational::one()),
        Series::monomial(Rational::one(), Rational::from(2)),
    ];
    let mut checked = 0;
    for (text, points) in catalog() {
        let func = f(&text);
        for r in &points {
            let values: Vec<Rational> = increments
                .iter()
                .map(|dx| derivative_with(&func, r, dx, &prec))
                .collect::<Result<_, _>>()
                .map_err(|e| format!("{text} at {r}: {e}"))?;
            ensure(values.windows(2).all(|w| w[0] == w[1]), || format!("{text} at {r}: {values:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (function, point) pairs agree for dx = t, 2t, t^2"))
}

/// Cubic and sine-addition identities on 100 sampled series pairs.
fn c7_transfer() -> Result<String, String> {
    let prec = Precision::default();
    let mut rng = sample::rng(SEED);
    let group = nonarch::ExponentGroup::Rational;
    let base: Vec<Vec<Rational>> = (0..100).map(|_| vec![sample::rational(&mut rng), sample::rational(&mut rng)]).collect();
    let ext: Vec<Vec<Series>> = (0..100).map(|_| vec![sample::series(&mut rng, group), sample::series(&mut rng, group)]).collect();
    let cubic = lab::check_transfer(&lab::cubic_identity(), &base, &ext, &prec);
    ensure(cubic.status() == Status::Pass, || format!("{cubic}"))?;

    // sin and cos are exact only at 0 in Q, and expand about standard part 0.
    // Both coordinates of a pair share an exponent denominator; mixing, say,
    // 1/6 and 1/7 puts sin(x + y) on a 1/42 lattice past the term budget.
    let base0 = vec![vec![Rational::zero(), Rational::zero()]];
    let inf: Vec<Vec<Series>> = (0..100)
        .map(|_| {
            let pair = nonarch::ExponentGroup::BoundedDenominator(sample::exponent_denominator(&mut rng, group) as u32);
            vec![sample::infinitesimal_series(&mut rng, pair), sample::infinitesimal_series(&mut rng, pair)]
        })
        .collect();
    let sine = lab::check_transfer(&lab::sine_addition(), &base0, &inf, &prec);
    ensure(sine.status() == Status::Pass, || format!("{sine}"))?;
    let cases: u64 = sine.assertions.iter().chain(&cubic.assertions).map(|a| a.cases).sum();
    ensure(cases >= 200, || format!("only {cases} checked cases"))?;

    let ineq = lab::check_transfer(&lab::inequality_system(), &[vec![q("1/2")]], &[vec![Series::t()]], &prec);
    ensure(ineq.status() == Status::Pass, || format!("{ineq}"))?;
    Ok("cubic: 100 base + 100 series pairs; sine addition: 100 infinitesimal pairs; x^2 <= x at t".into())
}

/// Completeness demos at full size.
fn c8_completeness_demos() -> Result<String, String> {
    let na = lab::demo_non_archimedean(FieldKind::RatFunc, 1_000_000).map_err(err)?;
    let cases = na.assertions.iter().map(|a| a.cases).sum::<u64>();
    let reports = [
        na,
        lab::demo_weierstrass_failure(FieldKind::LeviCivita, 100).map_err(err)?,
        lab::demo_monotone_failure(FieldKind::LeviCivita, 50).map_err(err)?,
        lab::demo_cauchy_completeness(50).map_err(err)?,
        lab::demo_cantor_gap(12).map_err(err)?,
    ];
    for r in &reports {
        ensure(r.status() == Status::Pass, || format!("{r}"))?;
    }
    ensure(cases == 1_000_002, || format!("non-archimedean checked {cases} cases"))?;
    let vals = &reports[3].params["valuations"];
    let want: Vec<String> = (2..=51).map(|v: i64| v.to_string()).collect();
    ensure(*vals == serde_json::json!(want), || format!("cauchy valuations {vals}"))?;
    Ok("non-archimedean(10^6), weierstrass(100), monotone(50), cauchy(50) valuations 2..51, cantor(12)".into())
}

/// Fréchet filter comparisons.
fn c9_frechet() -> Result<String, String> {
    let alt_a = SequenceSpec::periodic(vec![q("0"), q("1")]);
    let alt_b = SequenceSpec::periodic(vec![q("1"), q("0")]);
    let seven = SequenceSpec::constant(q("7"));
    let cases = [
        (&alt_a, &alt_b, FrechetOrder::Incomparable),
        (&SequenceSpec::reciprocal(), &SequenceSpec::constant(q("0")), FrechetOrder::Greater),
        (&seven, &seven, FrechetOrder::Equal),
    ];
    for (a, b, want) in cases {
        let got = lab::frechet_compare(a, b).map_err(err)?;
        ensure(got == want, || format!("{a} vs {b}: {got}"))?;
    }
    Ok("alternating: incomparable; 1/n vs 0: greater; 7 vs 7: equal".into())
}

/// No rational other than st(x) is infinitely close to x.
fn c10_st_uniqueness() -> Result<String, String> {
    let mut rng = sample::rng(SEED);
    let group = nonarch::ExponentGroup::Rational;
    for _ in 0..200 {
        let x = sample::finite_series(&mut rng, group);
        let s = st(&x).map_err(err)?;
        let rest = &x - &Series::constant(s.clone());
        ensure(classify(&rest).map_err(err)?.is_infinitesimal(), || format!("x - st(x) not infinitesimal for {x}"))?;
        let mut tried = 0;
        while tried < 5 {
            let other = &s + &Rational::new(rng.gen_range(-50..=50), rng.gen_range(1..=9));
            if other == s {
                continue;
            }
            tried += 1;
            let c = classify(&(&x - &Series::constant(other.clone()))).map_err(err)?;
            ensure(matches!(c, Classification::FiniteAppreciable | Classification::InfinitelyLarge), || {
                format!("x = {x}, r' = {other}: {c}")
            })?;
        }
    }
    Ok("200 finite series x, 5 rationals r' != st(x) each".into())
}

fn main() -> ExitCode {
    // The suite is CPU-bound; time limits include a margin for slow hosts.
    let criteria: [(&str, Check, Duration); 10] = [
        ("sqrt(t)/(t - t^2) expansion", c1_sqrt_identity, Duration::from_secs(1)),
        ("(x^3)' derivation", c2_cube_derivation, Duration::from_secs(1)),
        ("axiom suites", c3_axioms, Duration::from_secs(30)),
        ("classification catalog", c4_classification, Duration::from_secs(1)),
        ("calculus oracle", c5_calculus_oracle, Duration::from_secs(10)),
        ("dx-independence", c6_dx_independence, Duration::from_secs(10)),
        ("transfer demos", c7_transfer, Duration::from_secs(10)),
        ("completeness demos", c8_completeness_demos, Duration::from_secs(10)),
        ("frechet incomparability", c9_frechet, Duration::from_secs(1)),
        ("st uniqueness", c10_st_uniqueness, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{elapsed:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{elapsed:.2?}]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

