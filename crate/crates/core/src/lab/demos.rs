//! Completeness demonstrations: what fails (Weierstrass, monotone, Cantor)
//! and what holds (Cauchy convergence in the valuation metric) once the
//! field has infinitesimals.

use serde_json::json;

use crate::error::{Error, Result};
use crate::field::Element;
use crate::lab::{verdict_of, DemoReport, Verdict};
use crate::numeric::{binomial, ExtRational, Rational};
use crate::order::{Classification, FieldKind, Sign};
use crate::ratfunc::{Poly, RatFunc};
use crate::series::{Precision, Series};

fn archimedean(report: DemoReport) -> DemoReport {
    report.not_applicable("q is Archimedean: it has no infinitesimal t to test against")
}

fn at_least(n: u64, min: u64, demo: &str) -> Result<()> {
    if n < min {
        return Err(Error::Domain(format!("{demo} needs N >= {min}, got {n}")));
    }
    Ok(())
}

fn q_of(n: u64) -> Rational {
    Rational::from(n as i64)
}

/// `0 < t < 1/n` for `n = 1..N`, and `t` classifies as infinitesimal.
pub fn demo_non_archimedean(field: FieldKind, n_max: u64) -> Result<DemoReport> {
    at_least(n_max, 1, "non-archimedean")?;
    let report = DemoReport::new("non-archimedean").param("field", field.name()).param("n", n_max);
    if field == FieldKind::Rationals {
        return Ok(archimedean(report));
    }
    let mut report = report;
    let t = Element::generator(field)?;
    report.check("0 < t", verdict_of(t.sign().map(|s| s == Sign::Positive)), None);
    // t < 1/n is decided by the sign of 1/n - t, whose leading term is the
    // constant 1/n: one sign lookup per n.
    let mut fam = report.family(format!("t < 1/n for n = 1..{n_max}"));
    for n in 1..=n_max {
        let bound = Element::from_rational(field, Rational::one().checked_div(&q_of(n))?);
        let verdict = verdict_of(bound.sub(&t).and_then(|d| d.sign()).map(|s| s == Sign::Positive));
        fam.record(verdict, || format!("n = {n}"));
    }
    fam.finish();
    report.check(
        "classify(t) = nonzero infinitesimal",
        verdict_of(t.classify().map(|c| c == Classification::NonzeroInfinitesimal)),
        None,
    );
    report.note("t is a positive element below every 1/n, so the field is not Archimedean");
    Ok(report)
}

/// The bounded sequence `x_n = n*t` has pairwise gaps of at least `t`.
pub fn demo_weierstrass_failure(field: FieldKind, n_max: u64) -> Result<DemoReport> {
    at_least(n_max, 2, "weierstrass")?;
    let report = DemoReport::new("weierstrass").param("field", field.name()).param("n", n_max);
    if field == FieldKind::Rationals {
        return Ok(archimedean(report));
    }
    let mut report = report;
    let t = Element::generator(field)?;
    let one = Element::from_rational(field, Rational::one());
    let xs: Vec<Element> = (1..=n_max).map(|n| Element::from_rational(field, q_of(n)).mul(&t)).collect::<Result<_>>()?;

    let mut fam = report.family(format!("|x_n| < 1 for x_n = n*t, n = 1..{n_max}"));
    for (i, x) in xs.iter().enumerate() {
        let v = verdict_of(x.abs().and_then(|a| a.compare(&one)).map(|o| o.is_lt()));
        fam.record(v, || format!("n = {}", i + 1));
    }
    fam.finish();

    let mut fam = report.family("x_n is a nonzero infinitesimal");
    for (i, x) in xs.iter().enumerate() {
        fam.record(verdict_of(x.classify().map(|c| c == Classification::NonzeroInfinitesimal)), || {
            format!("n = {}", i + 1)
        });
    }
    fam.finish();

    let mut fam = report.family("|x_n - x_m| >= t for n != m");
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let v = verdict_of(xs[i].sub(&xs[j]).and_then(|d| d.abs()).and_then(|d| d.compare(&t)).map(|o| o.is_ge()));
            fam.record(v, || format!("n = {}, m = {}", i + 1, j + 1));
        }
    }
    fam.finish();
    report.note(
        "no interval of radius t/2 holds two terms, so the bounded sequence has no cluster point among these candidates",
    );
    Ok(report)
}

/// `a_n = -1/n` is increasing and bounded by 0, yet its terms stay more
/// than `t` apart.
pub fn demo_monotone_failure(field: FieldKind, n_max: u64) -> Result<DemoReport> {
    at_least(n_max, 2, "monotone")?;
    let report = DemoReport::new("monotone").param("field", field.name()).param("n", n_max);
    if field == FieldKind::Rationals {
        return Ok(archimedean(report));
    }
    let mut report = report;
    let t = Element::generator(field)?;
    let zero = Element::from_rational(field, Rational::zero());
    let a: Vec<Element> = (1..=n_max)
        .map(|n| Ok(Element::from_rational(field, -Rational::one().checked_div(&q_of(n))?)))
        .collect::<Result<_>>()?;

    let mut fam = report.family(format!("a_n < a_(n+1) for a_n = -1/n, n = 1..{}", n_max - 1));
    for i in 0..a.len() - 1 {
        fam.record(verdict_of(a[i].compare(&a[i + 1]).map(|o| o.is_lt())), || format!("n = {}", i + 1));
    }
    fam.finish();

    let mut fam = report.family("a_n < 0");
    for (i, x) in a.iter().enumerate() {
        fam.record(verdict_of(x.compare(&zero).map(|o| o.is_lt())), || format!("n = {}", i + 1));
    }
    fam.finish();

    let mut fam = report.family("|a_n - a_m| > t for n != m");
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let v = verdict_of(a[i].sub(&a[j]).and_then(|d| d.abs()).and_then(|d| d.compare(&t)).map(|o| o.is_gt()));
            fam.record(v, || format!("n = {}, m = {}", i + 1, j + 1));
        }
    }
    fam.finish();
    report.note("the sequence is not Cauchy at tolerance t, so it cannot converge");
    Ok(report)
}

/// Partial sums `S_n = 1 + t + ... + t^n` converge to `1/(1 - t)` in the
/// valuation metric: `v(S_n - 1/(1 - t)) = n + 1`.
pub fn demo_cauchy_completeness(n_max: u64) -> Result<DemoReport> {
    at_least(n_max, 1, "cauchy")?;
    let mut report = DemoReport::new("cauchy").param("field", "laurent").param("n", n_max);
    let one = Series::constant(Rational::one());
    let t = Series::t();
    let one_minus_t = &one - &t;
    let prec = Precision { cutoff: q_of(n_max + 2), max_terms: 512.max(n_max as usize + 8) };
    let limit = one_minus_t.inv_with(&prec)?;
    report.params.insert("limit".into(), json!(limit.to_string()));

    let mut partial = Series::zero();
    let mut valuations = Vec::new();
    let mut telescoping = report.family("(1 - t)*S_n = 1 - t^(n+1) exactly");
    let mut checks = Vec::new();
    for n in 0..=n_max {
        let power = Series::monomial(Rational::one(), q_of(n));
        partial = &partial + &power;
        if n == 0 {
            continue;
        }
        let expected = &one - &(&power * &t);
        let product = &one_minus_t * &partial;
        telescoping.pass_if(product == expected && product.is_exact(), || format!("n = {n}: {product}"));
        let d = partial.dist(&limit);
        let wanted = ExtRational::Finite(q_of(n + 1));
        checks.push(match d {
            Ok(norm) => {
                valuations.push(norm.valuation.to_string());
                let ok = norm.valuation == wanted;
                (format!("v(S_{n} - 1/(1 - t)) = {}", n + 1), if ok { Verdict::Pass } else { Verdict::Fail }, Some(format!("v = {}", norm.valuation)))
            }
            Err(e) => (format!("v(S_{n} - 1/(1 - t)) = {}", n + 1), Verdict::Unresolved, Some(e.to_string())),
        });
    }
    telescoping.finish();
    for (desc, v, w) in checks {
        report.check(desc, v, w);
    }
    let parsed: Vec<Option<Rational>> = valuations.iter().map(|v| v.parse().ok()).collect();
    let increasing = parsed.windows(2).all(|w| matches!(w, [Some(a), Some(b)] if a < b));
    report.check(
        "valuations strictly increase (norms tend to 0)",
        if increasing { Verdict::Pass } else { Verdict::Fail },
        None,
    );
    report.params.insert("valuations".into(), json!(valuations));
    Ok(report)
}

/// Degree-`n` Taylor polynomial of `sqrt(1 + t)`.
pub fn sqrt_one_plus_t_taylor(n: u32) -> RatFunc {
    let half = Rational::new(1, 2);
    RatFunc::from_poly(Poly::from_coeffs((0..=n).map(|k| binomial(&half, k))))
}

/// Gaussian elimination over `Q`; `None` if the system is singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inv().ok()?;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] * &inv;
                for c in col..n {
                    let sub = &factor * &a[col][c];
                    a[r][c] -= &sub;
                }
                let sub = &factor * &b[col];
                b[r] -= &sub;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// The `[d/d]` Padé approximant `p/q` of `sqrt(1 + t)`, from the linear
/// conditions `p - q*f = O(t^(2d+1))`, `q(0) = 1`.
pub fn pade_sqrt_one_plus_t(d: u32) -> Option<RatFunc> {
    let half = Rational::new(1, 2);
    let f: Vec<Rational> = (0..=2 * d).map(|k| binomial(&half, k)).collect();
    let coeff = |i: i64| if i < 0 { Rational::zero() } else { f[i as usize].clone() };
    let d_ = d as i64;
    // Rows k = d+1..2d: sum_{j=1..d} q_j f_(k-j) = -f_k.
    let a: Vec<Vec<Rational>> = (d_ + 1..=2 * d_).map(|k| (1..=d_).map(|j| coeff(k - j)).collect()).collect();
    let b: Vec<Rational> = (d_ + 1..=2 * d_).map(|k| -coeff(k)).collect();
    let mut q = vec![Rational::one()];
    q.extend(solve(a, b)?);
    let p: Vec<Rational> = (0..=d_)
        .map(|k| (0..=k).fold(Rational::zero(), |acc, j| acc + &q[j as usize] * &coeff(k - j)))
        .collect();
    RatFunc::new(Poly::from_coeffs(p), Poly::from_coeffs(q)).ok()
}

fn contains(lo: &RatFunc, hi: &RatFunc, x: &RatFunc) -> bool {
    lo.compare(x).is_le() && x.compare(hi).is_le()
}

/// Nested intervals `I_n = [T_n - t^n, T_n + t^n]` around the Taylor
/// polynomials of `sqrt(1 + t)` have the finite intersection property in
/// `K(t)`, but no sampled rational function lies in all of them.
pub fn demo_cantor_gap(n_max: u64) -> Result<DemoReport> {
    at_least(n_max, 2, "cantor")?;
    let n_max32 = u32::try_from(n_max).map_err(|_| Error::BudgetExceeded { budget: u32::MAX as usize })?;
    let mut report = DemoReport::new("cantor").param("field", "ratfunc").param("n", n_max);
    let taylor: Vec<RatFunc> = (0..=n_max32).map(sqrt_one_plus_t_taylor).collect();
    let radius = |n: u32| RatFunc::monomial(Rational::one(), n as i64);
    let intervals: Vec<(RatFunc, RatFunc)> =
        (0..=n_max32).map(|n| (&taylor[n as usize] - &radius(n), &taylor[n as usize] + &radius(n))).collect();

    let expected_t2 = RatFunc::from_poly(Poly::from_coeffs([Rational::one(), Rational::new(1, 2), Rational::new(-1, 8)]));
    report.check(
        "T_2 = 1 + t/2 - t^2/8",
        if taylor[2] == expected_t2 { Verdict::Pass } else { Verdict::Fail },
        Some(taylor[2].to_string()),
    );

    let mut fam = report.family(format!("I_(n+1) is inside I_n for n = 1..{}", n_max - 1));
    for n in 1..n_max32 as usize {
        let (lo, hi) = &intervals[n];
        let (lo1, hi1) = &intervals[n + 1];
        fam.pass_if(lo.compare(lo1).is_le() && hi1.compare(hi).is_le(), || format!("n = {n}"));
    }
    fam.finish();

    let mut fam = report.family(format!("T_{n_max} lies in I_n for n = 1..{n_max} (finite intersections are nonempty)"));
    for n in 1..=n_max32 as usize {
        let (lo, hi) = &intervals[n];
        fam.pass_if(contains(lo, hi, &taylor[n_max32 as usize]), || format!("n = {n}"));
    }
    fam.finish();

    let one_plus_t = RatFunc::from_poly(Poly::from_coeffs([Rational::one(), Rational::one()]));
    let defect = |x: &RatFunc| (&(x * x) - &one_plus_t).valuation();
    let tn = &taylor[n_max32 as usize];
    report.check(
        format!("v(T_{n_max}^2 - (1 + t)) = {}", n_max + 1),
        if defect(tn) == ExtRational::Finite(q_of(n_max + 1)) { Verdict::Pass } else { Verdict::Fail },
        Some(format!("v = {}", defect(tn))),
    );

    let (lo2, hi2) = &intervals[2];
    let mut fam = report.family("constants lie outside I_2");
    for c in ["0", "1/2", "7/8", "1", "9/8", "3/2", "2", "-1"] {
        let x = RatFunc::constant(c.parse().expect("literal"));
        fam.pass_if(!contains(lo2, hi2, &x), || format!("c = {c}"));
    }
    fam.finish();

    // Any x in I_N has v(x^2 - (1+t)) >= N, while x = p/q with deg p, deg q <= d
    // has v(x^2 - (1+t)) <= deg(p^2 - (1+t)q^2) <= 2d+1.
    let d_max = 4.min((n_max32.saturating_sub(2)) / 2);
    let (lo_n, hi_n) = &intervals[n_max32 as usize];
    let mut bound = report.family(format!("v(x^2 - (1 + t)) <= 2d + 1 < {n_max} for candidates of degree d <= {d_max}"));
    let mut outside = Vec::new();
    for d in 0..=d_max {
        let mut candidates = vec![(format!("T_{d}"), taylor[d as usize].clone())];
        if let Some(p) = pade_sqrt_one_plus_t(d) {
            candidates.push((format!("pade[{d}/{d}]"), p));
        }
        for (name, x) in candidates {
            let v = defect(&x);
            let ok = matches!(&v, ExtRational::Finite(v) if v <= &q_of(2 * d as u64 + 1)) && 2 * d as u64 + 1 < n_max;
            bound.pass_if(ok, || format!("{name} = {x}: v = {v}"));
            outside.push((name, x));
        }
    }
    bound.finish();
    let mut fam = report.family(format!("no candidate lies in I_{n_max}"));
    for (name, x) in &outside {
        fam.pass_if(!contains(lo_n, hi_n, x), || format!("{name} = {x}"));
    }
    fam.finish();
    report.note("x^2 = 1 + t has no solution in K(t), so the nested intervals have empty intersection: K(t) is not Cantor complete");
    Ok(report)
}
