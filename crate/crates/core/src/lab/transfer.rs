//! Sampling checks of transfer for finite systems of equations,
//! inequations and non-strict inequalities.

use crate::calculus::{eval_rational, lift_eval, FnExpr};
use crate::error::Result;
use crate::lab::{DemoReport, Verdict};
use crate::numeric::Rational;
use crate::order::Sign;
use crate::series::{Precision, Series};
use crate::syntax::parse_fn;

/// `f_i = F_i`, `g_j != G_j`, `h_k <= H_k` in the variables `x, y, z`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransferSystem {
    pub equations: Vec<(FnExpr, FnExpr)>,
    pub inequations: Vec<(FnExpr, FnExpr)>,
    pub inequalities: Vec<(FnExpr, FnExpr)>,
}

impl TransferSystem {
    pub fn arity(&self) -> usize {
        self.equations
            .iter()
            .chain(&self.inequations)
            .chain(&self.inequalities)
            .map(|(a, b)| a.arity().max(b.arity()))
            .max()
            .unwrap_or(0)
    }

    fn describe(&self) -> String {
        let eq = self.equations.iter().map(|(a, b)| format!("{a} = {b}"));
        let ne = self.inequations.iter().map(|(a, b)| format!("{a} != {b}"));
        let le = self.inequalities.iter().map(|(a, b)| format!("{a} <= {b}"));
        eq.chain(ne).chain(le).collect::<Vec<_>>().join("; ")
    }
}

fn system(equations: &[(&str, &str)], inequalities: &[(&str, &str)]) -> TransferSystem {
    let parse = |pairs: &[(&str, &str)]| {
        pairs
            .iter()
            .map(|(a, b)| (parse_fn(a).expect("valid"), parse_fn(b).expect("valid")))
            .collect()
    };
    TransferSystem { equations: parse(equations), inequalities: parse(inequalities), ..Default::default() }
}

/// `(x + y)^3 = x^3 + 3x^2 y + 3x y^2 + y^3`.
pub fn cubic_identity() -> TransferSystem {
    system(&[("(x + y)^3", "x^3 + 3*x^2*y + 3*x*y^2 + y^3")], &[])
}

/// `sin(x + y) = sin(x)cos(y) + cos(x)sin(y)`.
pub fn sine_addition() -> TransferSystem {
    system(&[("sin(x + y)", "sin(x)*cos(y) + cos(x)*sin(y)")], &[])
}

/// `x^2 <= x`.
pub fn inequality_system() -> TransferSystem {
    system(&[], &[("x^2", "x")])
}

/// Whether a point satisfies the system; `None` when undecided at the
/// stored truncation.
fn rational_member(sys: &TransferSystem, p: &[Rational]) -> Result<bool> {
    for (a, b) in &sys.equations {
        if eval_rational(a, p)? != eval_rational(b, p)? {
            return Ok(false);
        }
    }
    for (a, b) in &sys.inequations {
        if eval_rational(a, p)? == eval_rational(b, p)? {
            return Ok(false);
        }
    }
    for (a, b) in &sys.inequalities {
        if eval_rational(a, p)? > eval_rational(b, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of a series point in the starred solution set. Equations
/// count as satisfied when the two sides agree up to the guaranteed cutoff.
fn series_member(sys: &TransferSystem, p: &[Series], prec: &Precision) -> Result<Option<bool>> {
    let diff = |a: &FnExpr, b: &FnExpr| -> Result<Series> { Ok(&lift_eval(b, p, prec)? - &lift_eval(a, p, prec)?) };
    let mut undecided = false;
    for (a, b) in &sys.equations {
        if diff(a, b)?.leading().is_some() {
            return Ok(Some(false));
        }
    }
    for (a, b) in &sys.inequations {
        let d = diff(a, b)?;
        if d.is_exact_zero() {
            return Ok(Some(false));
        }
        undecided |= d.leading().is_none();
    }
    for (a, b) in &sys.inequalities {
        match diff(a, b)?.sign() {
            Ok(Sign::Negative) => return Ok(Some(false)),
            Ok(_) => {}
            Err(e) if e.is_unresolved() => undecided = true,
            Err(e) => return Err(e),
        }
    }
    Ok(if undecided { None } else { Some(true) })
}

fn fmt_point<T: std::fmt::Display>(p: &[T]) -> String {
    let parts: Vec<String> = p.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Checks that membership verdicts are consistent with transfer at the
/// sampled points:
///
/// * each base point gets the same verdict as its embedding as a constant
///   series;
/// * if every base point solves the system, every series point must solve
///   the starred system;
/// * otherwise some embedded base counterexample must fail the starred
///   system.
///
/// Evaluation errors are recorded as unresolved instances.
pub fn check_transfer(
    sys: &TransferSystem,
    base_samples: &[Vec<Rational>],
    ext_samples: &[Vec<Series>],
    prec: &Precision,
) -> DemoReport {
    let mut report = DemoReport::new("transfer")
        .param("system", sys.describe())
        .param("base_samples", base_samples.len())
        .param("ext_samples", ext_samples.len())
        .param("cutoff", prec.cutoff.to_string());

    let mut base_verdicts = Vec::new();
    let mut fam = report.family("embedding preserves the verdict at each base point");
    for p in base_samples {
        let embedded: Vec<Series> = p.iter().map(|r| Series::constant(r.clone())).collect();
        match (rational_member(sys, p), series_member(sys, &embedded, prec)) {
            (Ok(a), Ok(Some(b))) => {
                base_verdicts.push(a);
                fam.pass_if(a == b, || format!("{} gives {a} in Q but {b} when embedded", fmt_point(p)));
            }
            (Ok(a), Ok(None)) => {
                base_verdicts.push(a);
                fam.record(Verdict::Unresolved, || format!("{} is undecided when embedded", fmt_point(p)));
            }
            (a, b) => {
                let err = a.err().or(b.err()).map(|e| e.to_string()).unwrap_or_default();
                fam.record(Verdict::Unresolved, || format!("{}: {err}", fmt_point(p)));
            }
        }
    }
    fam.finish();

    let holds = base_verdicts.iter().all(|v| *v);
    if holds {
        let mut fam = report.family("starred system holds at each series point");
        for p in ext_samples {
            match series_member(sys, p, prec) {
                Ok(Some(ok)) => fam.pass_if(ok, || format!("fails at {}", fmt_point(p))),
                Ok(None) => fam.record(Verdict::Unresolved, || format!("undecided at {}", fmt_point(p))),
                Err(e) => fam.record(Verdict::Unresolved, || format!("{}: {e}", fmt_point(p))),
            }
        }
        fam.finish();
        report.note("verdicts are consistent with transfer at the tested points; this is a sample, not a proof");
    } else {
        let counterexample = base_samples
            .iter()
            .zip(&base_verdicts)
            .find(|(_, v)| !**v)
            .map(|(p, _)| p.clone());
        let witness = counterexample.as_ref().map(|p| fmt_point(p));
        let starred_fails = counterexample.is_some_and(|p| {
            let embedded: Vec<Series> = p.iter().map(|r| Series::constant(r.clone())).collect();
            matches!(series_member(sys, &embedded, prec), Ok(Some(false)))
        });
        report.check(
            "a base counterexample also fails the starred system",
            if starred_fails { Verdict::Pass } else { Verdict::Fail },
            witness,
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::sample;
    use crate::lab::Status;
    use crate::series::ExponentGroup;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn cubic_passes_on_random_pairs() {
        let mut rng = sample::rng(7);
        let base: Vec<Vec<Rational>> = (0..20).map(|_| vec![sample::rational(&mut rng), sample::rational(&mut rng)]).collect();
        let ext: Vec<Vec<Series>> = (0..20)
            .map(|_| vec![sample::series(&mut rng, ExponentGroup::Rational), sample::series(&mut rng, ExponentGroup::Rational)])
            .collect();
        let r = check_transfer(&cubic_identity(), &base, &ext, &Precision::default());
        assert_eq!(r.status(), Status::Pass, "{r}");
    }

    #[test]
    fn inequality_at_t() {
        let base = vec![vec![q("0")], vec![q("1/2")], vec![q("1")]];
        let ext = vec![vec![Series::t()]];
        let r = check_transfer(&inequality_system(), &base, &ext, &Precision::default());
        assert_eq!(r.status(), Status::Pass, "{r}");
    }

    #[test]
    fn failing_identity_is_caught_in_both_fields() {
        let sys = TransferSystem {
            equations: vec![(parse_fn("(x + y)^2").unwrap(), parse_fn("x^2 + y^2").unwrap())],
            ..Default::default()
        };
        let base = vec![vec![q("0"), q("0")], vec![q("1"), q("1")]];
        let ext = vec![vec![Series::t(), Series::t()]];
        let r = check_transfer(&sys, &base, &ext, &Precision::default());
        assert_eq!(r.status(), Status::Pass, "{r}");
        assert_eq!(r.assertions.len(), 2);
    }
}
