//! Randomized field, order and valuation axiom checks.

use std::cmp::Ordering;

use rand::Rng;

use crate::error::Result;
use crate::lab::{sample, verdict_of, DemoReport, Verdict};
use crate::numeric::{Rational, Valuation};
use crate::order::{abs, classify, FieldKind, FieldOps, OrderedField, Sign};
use crate::ratfunc::RatFunc;
use crate::series::{ExponentGroup, Precision, Series};

type Eq<F> = dyn Fn(&F, &F) -> bool;

fn show<F: std::fmt::Display>(xs: &[&F]) -> String {
    let names = ["x", "y", "z"];
    xs.iter().zip(names).map(|(v, n)| format!("{n} = {v}")).collect::<Vec<_>>().join(", ")
}

fn field_suite<F>(report: &mut DemoReport, triples: &[(F, F, F)], eq: &Eq<F>)
where
    F: OrderedField,
    for<'a> &'a F: FieldOps<'a, F>,
{
    type Law<F> = (&'static str, fn(&F, &F, &F) -> (F, F));
    let laws: [Law<F>; 7] = [
        ("x + (y + z) = (x + y) + z", |x, y, z| (x + &(y + z), &(x + y) + z)),
        ("x + y = y + x", |x, y, _| (x + y, y + x)),
        ("x(yz) = (xy)z", |x, y, z| (x * &(y * z), &(x * y) * z)),
        ("xy = yx", |x, y, _| (x * y, y * x)),
        ("x(y + z) = xy + xz", |x, y, z| (x * &(y + z), &(x * y) + &(x * z))),
        ("x + 0 = x and x*1 = x", |x, _, _| (&(x + &F::zero()) * &F::one(), x.clone())),
        ("x + (-x) = 0", |x, _, _| (x + &(-x), F::zero())),
    ];
    for (desc, law) in laws {
        let mut fam = report.family(desc);
        for (x, y, z) in triples {
            let (l, r) = law(x, y, z);
            fam.pass_if(eq(&l, &r), || format!("{}: {l} vs {r}", show(&[x, y, z])));
        }
        fam.finish();
    }
    let mut fam = report.family("x * x^(-1) = 1 for x != 0");
    for (x, _, _) in triples {
        // Only elements known to be nonzero qualify.
        if !matches!(x.sign(), Ok(Sign::Positive | Sign::Negative)) {
            continue;
        }
        match x.try_inv() {
            Ok(inv) => {
                let p = x * &inv;
                fam.pass_if(eq(&p, &F::one()), || format!("x = {x}: x * x^(-1) = {p}"));
            }
            Err(e) => fam.record(Verdict::Fail, || format!("x = {x}: {e}")),
        }
    }
    fam.finish();
}

fn lt<F>(a: &F, b: &F) -> Result<bool>
where
    F: OrderedField,
    for<'a> &'a F: FieldOps<'a, F>,
{
    Ok(a.compare(b)? == Ordering::Less)
}

fn order_suite<F>(report: &mut DemoReport, triples: &[(F, F, F)])
where
    F: OrderedField,
    for<'a> &'a F: FieldOps<'a, F>,
{
    let zero = F::zero();
    let mut fam = report.family("trichotomy: exactly one of x < y, x = y, y < x");
    for (x, y, _) in triples {
        let v = (|| -> Result<bool> {
            let (a, b) = (x.compare(y)?, y.compare(x)?);
            Ok(a == b.reverse() && (a == Ordering::Equal) == (x == y))
        })();
        fam.record(verdict_of(v), || show(&[x, y]));
    }
    fam.finish();

    let mut fam = report.family("x < y implies x + z < y + z");
    for (x, y, z) in triples {
        let v = (|| Ok(!lt(x, y)? || lt(&(x + z), &(y + z))?))();
        fam.record(verdict_of(v), || show(&[x, y, z]));
    }
    fam.finish();

    let mut fam = report.family("x < y and 0 < z imply xz < yz");
    for (x, y, z) in triples {
        let v = (|| Ok(!(lt(x, y)? && lt(&zero, z)?) || lt(&(x * z), &(y * z))?))();
        fam.record(verdict_of(v), || show(&[x, y, z]));
    }
    fam.finish();

    let mut fam = report.family("x < y and y < z imply x < z");
    for (x, y, z) in triples {
        let v = (|| Ok(!(lt(x, y)? && lt(y, z)?) || lt(x, z)?))();
        fam.record(verdict_of(v), || show(&[x, y, z]));
    }
    fam.finish();

    let mut fam = report.family("positives are closed under + and *");
    for (x, y, _) in triples {
        let v = (|| {
            Ok(!(lt(&zero, x)? && lt(&zero, y)?) || (lt(&zero, &(x + y))? && lt(&zero, &(x * y))?))
        })();
        fam.record(verdict_of(v), || show(&[x, y]));
    }
    fam.finish();

    let mut fam = report.family("|x| = max(-x, x) and |xy| = |x||y|");
    for (x, y, _) in triples {
        let v = (|| {
            let ax = abs(x)?;
            let neg = -x;
            let max = if lt(x, &neg)? { neg } else { x.clone() };
            Ok(ax == max && abs(&(x * y))? == &ax * &abs(y)?)
        })();
        fam.record(verdict_of(v), || show(&[x, y]));
    }
    fam.finish();
}

fn min(a: &Valuation, b: &Valuation) -> Valuation {
    a.clone().min(b.clone())
}

fn valuation_suite<F>(report: &mut DemoReport, triples: &[(F, F, F)])
where
    F: OrderedField,
    for<'a> &'a F: FieldOps<'a, F>,
{
    let mut fam = report.family("v(x) = inf iff x = 0");
    for (x, _, _) in triples {
        let v = (|| Ok(x.valuation()?.is_infinite() == (x.sign()? == Sign::Zero)))();
        fam.record(verdict_of(v), || show(&[x]));
    }
    fam.finish();

    let mut fam = report.family("v(xy) = v(x) + v(y)");
    for (x, y, _) in triples {
        let v = (|| Ok((x * y).valuation()? == &x.valuation()? + &y.valuation()?))();
        fam.record(verdict_of(v), || show(&[x, y]));
    }
    fam.finish();

    let mut fam = report.family("v(x + y) >= min(v(x), v(y))");
    for (x, y, _) in triples {
        let v = (|| Ok((x + y).valuation()? >= min(&x.valuation()?, &y.valuation()?)))();
        fam.record(verdict_of(v), || show(&[x, y]));
    }
    fam.finish();

    let mut fam = report.family("v(x) != v(y) implies v(x + y) = min(v(x), v(y))");
    for (x, y, _) in triples {
        let v = (|| {
            let (vx, vy) = (x.valuation()?, y.valuation()?);
            if vx == vy {
                return Ok(None);
            }
            Ok(Some((x + y).valuation()? == min(&vx, &vy)))
        })();
        match v {
            Ok(None) => {}
            other => fam.record(verdict_of(other.map(|o| o.unwrap_or(true))), || show(&[x, y])),
        }
    }
    fam.finish();

    let mut fam = report.family("|x| < |y| implies v(x) >= v(y)");
    for (x, y, _) in triples {
        let v = (|| Ok(!lt(&abs(x)?, &abs(y)?)? || x.valuation()? >= y.valuation()?))();
        fam.record(verdict_of(v), || show(&[x, y]));
    }
    fam.finish();

    let mut fam = report.family("d(x, z) <= max(d(x, y), d(y, z))");
    for (x, y, z) in triples {
        let v = (|| Ok((x - z).valuation()? >= min(&(x - y).valuation()?, &(y - z).valuation()?)))();
        fam.record(verdict_of(v), || show(&[x, y, z]));
    }
    fam.finish();

    // Classification through the valuation agrees with the order-theoretic
    // definition, tested against n = 10^6.
    let n = F::from_natural(1_000_000);
    let inv_n = F::from_rational(&Rational::new(1, 1_000_000));
    let mut fam = report.family("v > 0, = 0, < 0 match |x| < 1/n, 1/n < |x| < n, |x| > n (n = 10^6)");
    for (x, _, _) in triples {
        let v = (|| {
            let a = abs(x)?;
            Ok(match x.valuation()? {
                Valuation::Infinity => a.sign()? == Sign::Zero,
                Valuation::Finite(v) if v.is_positive() => lt(&a, &inv_n)? && classify(x)?.is_infinitesimal(),
                Valuation::Finite(v) if v.is_negative() => lt(&n, &a)? && !classify(x)?.is_finite(),
                Valuation::Finite(_) => lt(&inv_n, &a)? && lt(&a, &n)?,
            })
        })();
        fam.record(verdict_of(v), || show(&[x]));
    }
    fam.finish();
}

fn ratfunc_extras(report: &mut DemoReport, triples: &[(RatFunc, RatFunc, RatFunc)]) {
    let mut fam = report.family("sign(f) = sign(f(e)) for 0 < e below the computed sign-stable radius");
    for (f, _, _) in triples {
        let radius = f.sign_stable_radius();
        for eps in [&radius / &Rational::from(2), &radius / &Rational::from(1000)] {
            let v = f.eval(&eps).map(|value| Sign::of_rational(&value) == f.sign());
            fam.record(verdict_of(v), || format!("f = {f}, e = {eps}"));
        }
    }
    fam.finish();

    let cutoff = Rational::from(16);
    let mut fam = report.family("expansion at t = 0 preserves the order (when resolved)");
    for (f, g, _) in triples {
        let (sf, sg) = (f.to_series(&cutoff), g.to_series(&cutoff));
        match sf.compare(&sg) {
            Ok(o) => fam.pass_if(o == f.compare(g), || format!("f = {f}, g = {g}")),
            Err(e) if e.is_unresolved() => fam.pass_if(f.compare(g) == Ordering::Equal || !sf.is_exact(), || {
                format!("f = {f}, g = {g}")
            }),
            Err(e) => fam.record(Verdict::Fail, || format!("f = {f}, g = {g}: {e}")),
        }
    }
    fam.finish();

    let mut fam = report.family("expansion at t = 0 is a ring homomorphism up to the cutoff");
    for (f, g, _) in triples {
        let e = |h: &RatFunc| h.to_series(&cutoff);
        let ok = e(&(f + g)).agrees_with(&(&e(f) + &e(g))) && e(&(f * g)).agrees_with(&(&e(f) * &e(g)));
        fam.pass_if(ok, || format!("f = {f}, g = {g}"));
    }
    fam.finish();
}

fn series_extras(report: &mut DemoReport, xs: &[Series], prec: &Precision) {
    let mut fam = report.family("(y^k)^(1/k) raised to k returns y^k up to the cutoff (k = 2, 3)");
    for (i, y) in xs.iter().enumerate() {
        if y.is_exact_zero() {
            continue;
        }
        let k = 2 + (i % 2) as u32;
        let x = y.powi(k as i64, prec).expect("positive power");
        let v = x.root(k, prec).and_then(|r| r.powi(k as i64, prec)).map(|back| back.agrees_with(&x));
        fam.record(verdict_of(v), || format!("y = {y}, k = {k}"));
    }
    fam.finish();
}

/// Adds `O(t^>c)` beyond the last term to about a quarter of the samples.
fn maybe_truncate<R: Rng>(rng: &mut R, s: Series) -> Series {
    if !rng.gen_ratio(1, 4) {
        return s;
    }
    let last = s.terms().last().map(|(e, _)| e.clone()).unwrap_or_default();
    let c = last + Rational::new(rng.gen_range(1..=12), 4);
    &s + &Series::unknown_beyond(c)
}

/// Runs the field, order and valuation axiom suites on `cases` seeded
/// random triples of `field`.
pub fn check_axioms(field: FieldKind, cases: usize, seed: u64, prec: &Precision) -> DemoReport {
    let mut report = DemoReport::new("axioms")
        .param("field", field.name())
        .param("cases", cases)
        .param("seed", seed)
        .param("cutoff", prec.cutoff.to_string());
    let mut rng = sample::rng(seed);
    match field {
        FieldKind::Rationals => {
            let triples: Vec<_> = (0..cases)
                .map(|_| (sample::rational(&mut rng), sample::rational(&mut rng), sample::rational(&mut rng)))
                .collect();
            field_suite(&mut report, &triples, &|a, b| a == b);
            order_suite(&mut report, &triples);
            valuation_suite(&mut report, &triples);
        }
        FieldKind::RatFunc => {
            let triples: Vec<_> = (0..cases)
                .map(|_| (sample::ratfunc(&mut rng), sample::ratfunc(&mut rng), sample::ratfunc(&mut rng)))
                .collect();
            field_suite(&mut report, &triples, &|a, b| a == b);
            order_suite(&mut report, &triples);
            valuation_suite(&mut report, &triples);
            ratfunc_extras(&mut report, &triples);
        }
        _ => {
            let group = ExponentGroup::for_field(field).expect("series field");
            let triples: Vec<_> = (0..cases)
                .map(|_| (sample::series(&mut rng, group), sample::series(&mut rng, group), sample::series(&mut rng, group)))
                .collect();
            let truncated: Vec<_> = triples
                .iter()
                .map(|(x, y, z)| {
                    (maybe_truncate(&mut rng, x.clone()), maybe_truncate(&mut rng, y.clone()), maybe_truncate(&mut rng, z.clone()))
                })
                .collect();
            field_suite(&mut report, &truncated, &|a: &Series, b: &Series| a.agrees_with(b));
            order_suite(&mut report, &triples);
            valuation_suite(&mut report, &triples);
            let xs: Vec<Series> = triples.iter().map(|(x, _, _)| x.clone()).collect();
            series_extras(&mut report, &xs, prec);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::Status;

    #[test]
    fn small_suites_pass() {
        for field in ["q", "ratfunc", "laurent", "puiseux:6", "levicivita"] {
            let r = check_axioms(field.parse().unwrap(), 40, 1, &Precision::default());
            assert_eq!(r.status(), Status::Pass, "{r}");
        }
    }
}
