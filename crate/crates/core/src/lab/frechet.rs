//! Ordering sequences modulo the Fréchet (cofinite) filter.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::field::{parse_element_with, Bindings, Element, FieldContext};
use crate::lab::{DemoReport, Verdict};
use crate::numeric::Rational;
use crate::order::{FieldKind, Sign};
use crate::ratfunc::RatFunc;

/// A rational sequence `a_1, a_2, ...` given in closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    /// `prefix` followed by `period` repeated forever.
    EventuallyPeriodic { prefix: Vec<Rational>, period: Vec<Rational> },
    /// `a_n = f(n)` for a rational function `f`.
    RationalFn(RatFunc),
}

impl SequenceSpec {
    pub fn constant(c: Rational) -> SequenceSpec {
        SequenceSpec::EventuallyPeriodic { prefix: Vec::new(), period: vec![c] }
    }

    pub fn periodic(period: Vec<Rational>) -> SequenceSpec {
        SequenceSpec::EventuallyPeriodic { prefix: Vec::new(), period }
    }

    /// `a_n = 1/n`.
    pub fn reciprocal() -> SequenceSpec {
        SequenceSpec::RationalFn(RatFunc::monomial(Rational::one(), -1))
    }

    /// The `n`-th term (`n >= 1`); `None` at a pole.
    pub fn term(&self, n: u64) -> Option<Rational> {
        match self {
            SequenceSpec::EventuallyPeriodic { prefix, period } => {
                let i = (n - 1) as usize;
                Some(match prefix.get(i) {
                    Some(a) => a.clone(),
                    None => period[(i - prefix.len()) % period.len()].clone(),
                })
            }
            SequenceSpec::RationalFn(f) => f.eval(&Rational::from(n as i64)).ok(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::EventuallyPeriodic { period, .. } if period.is_empty() => {
                Err(Error::UnsupportedSpec("empty period".into()))
            }
            _ => Ok(()),
        }
    }

    fn period_len(&self) -> usize {
        match self {
            SequenceSpec::EventuallyPeriodic { period, .. } => period.len(),
            SequenceSpec::RationalFn(_) => 1,
        }
    }

    /// Parses `const:7`, `periodic:0,1`, `periodic:1,2;0,1` (prefix then
    /// period) or `fn:<expression in n>`.
    pub fn parse(text: &str) -> Result<SequenceSpec> {
        let (kind, body) = text
            .split_once(':')
            .ok_or_else(|| Error::UnsupportedSpec(format!("expected kind:body, got {text:?}")))?;
        let list = |s: &str| -> Result<Vec<Rational>> {
            s.split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.trim().parse::<Rational>())
                .collect()
        };
        let spec = match kind.trim() {
            "const" => SequenceSpec::constant(body.trim().parse()?),
            "periodic" => match body.split_once(';') {
                Some((prefix, period)) => SequenceSpec::EventuallyPeriodic { prefix: list(prefix)?, period: list(period)? },
                None => SequenceSpec::periodic(list(body)?),
            },
            "fn" => {
                let ctx = FieldContext::new(FieldKind::RatFunc);
                let mut vars = Bindings::new();
                vars.insert("n".into(), Element::generator(FieldKind::RatFunc)?);
                let f = parse_element_with(body, &ctx, &vars)?;
                let f = f.as_ratfunc().cloned().ok_or_else(|| Error::UnsupportedSpec(body.into()))?;
                SequenceSpec::RationalFn(f)
            }
            other => return Err(Error::UnsupportedSpec(format!("unknown sequence kind {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
        match self {
            SequenceSpec::EventuallyPeriodic { prefix, period } if prefix.is_empty() && period.len() == 1 => {
                write!(f, "const:{}", period[0])
            }
            SequenceSpec::EventuallyPeriodic { prefix, period } if prefix.is_empty() => {
                write!(f, "periodic:{}", join(period))
            }
            SequenceSpec::EventuallyPeriodic { prefix, period } => {
                write!(f, "periodic:{};{}", join(prefix), join(period))
            }
            SequenceSpec::RationalFn(r) => write!(f, "fn:{}", r.to_string().replace('t', "n")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrechetOrder {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl fmt::Display for FrechetOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrechetOrder::Less => "less",
            FrechetOrder::Greater => "greater",
            FrechetOrder::Equal => "equal",
            FrechetOrder::Incomparable => "incomparable",
        })
    }
}

/// Sign of `f(n)` for all large integers `n`.
fn sign_at_infinity(f: &RatFunc) -> Sign {
    match (f.num().leading_coeff(), f.den().leading_coeff()) {
        (Some(a), Some(b)) => Sign::of_rational(&(a * b)),
        _ => Sign::Zero,
    }
}

/// Compares `a` and `b` modulo the cofinite filter: `Equal` if they agree
/// from some index on, `Less`/`Greater` if the strict inequality holds from
/// some index on, and `Incomparable` otherwise.
///
/// Beyond both prefixes, every residue class modulo the common period is a
/// rational function of `n`, whose sign is eventually constant; the answer
/// is decided class by class.
pub fn frechet_compare(a: &SequenceSpec, b: &SequenceSpec) -> Result<FrechetOrder> {
    a.validate()?;
    b.validate()?;
    let m = a.period_len().lcm(&b.period_len());
    if m > 1 << 20 {
        return Err(Error::UnsupportedSpec(format!("common period {m} is too long")));
    }
    let mut signs = Vec::with_capacity(m);
    for class in 0..m {
        let d = &class_function(a, class) - &class_function(b, class);
        signs.push(sign_at_infinity(&d));
    }
    Ok(if signs.iter().all(|s| *s == Sign::Zero) {
        FrechetOrder::Equal
    } else if signs.iter().all(|s| *s == Sign::Negative) {
        FrechetOrder::Less
    } else if signs.iter().all(|s| *s == Sign::Positive) {
        FrechetOrder::Greater
    } else {
        FrechetOrder::Incomparable
    })
}

/// The sequence on indices `n ≡ class` modulo a multiple of its period,
/// past its prefix, as a rational function of `n`.
fn class_function(s: &SequenceSpec, class: usize) -> RatFunc {
    match s {
        SequenceSpec::EventuallyPeriodic { prefix, period } => {
            // a_n = period[(n - 1 - prefix.len()) mod p] for n > prefix.len().
            let p = period.len() as i64;
            let idx = (class as i64 - 1 - prefix.len() as i64).rem_euclid(p);
            RatFunc::constant(period[idx as usize].clone())
        }
        SequenceSpec::RationalFn(f) => f.clone(),
    }
}

/// Checks the standard comparisons: alternating sequences are incomparable,
/// `1/n` is above 0 and equal constants are equal.
pub fn demo_frechet() -> DemoReport {
    let mut report = DemoReport::new("frechet");
    let q = |n: i64| Rational::from(n);
    let cases = [
        (SequenceSpec::periodic(vec![q(0), q(1)]), SequenceSpec::periodic(vec![q(1), q(0)]), FrechetOrder::Incomparable),
        (SequenceSpec::reciprocal(), SequenceSpec::constant(q(0)), FrechetOrder::Greater),
        (SequenceSpec::constant(q(7)), SequenceSpec::constant(q(7)), FrechetOrder::Equal),
        (SequenceSpec::constant(q(0)), SequenceSpec::reciprocal(), FrechetOrder::Less),
    ];
    for (a, b, want) in cases {
        let got = frechet_compare(&a, &b);
        let verdict = match &got {
            Ok(o) if *o == want => Verdict::Pass,
            _ => Verdict::Fail,
        };
        let witness = match got {
            Ok(o) => o.to_string(),
            Err(e) => e.to_string(),
        };
        report.check(format!("{a} vs {b} is {want}"), verdict, Some(witness));
    }
    report.note("the cofinite filter is not an ultrafilter, so the quotient order is only partial");
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> SequenceSpec {
        SequenceSpec::parse(s).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(frechet_compare(&spec("periodic:0,1"), &spec("periodic:1,0")).unwrap(), FrechetOrder::Incomparable);
        assert_eq!(frechet_compare(&spec("fn:1/n"), &spec("const:0")).unwrap(), FrechetOrder::Greater);
        assert_eq!(frechet_compare(&spec("const:7"), &spec("const:7")).unwrap(), FrechetOrder::Equal);
        assert!(demo_frechet().all_pass());
    }

    #[test]
    fn prefixes_and_phases() {
        assert_eq!(frechet_compare(&spec("periodic:5;0,1"), &spec("periodic:0,1")).unwrap(), FrechetOrder::Incomparable);
        assert_eq!(frechet_compare(&spec("periodic:5;1,0"), &spec("periodic:0,1")).unwrap(), FrechetOrder::Equal);
        assert_eq!(frechet_compare(&spec("periodic:9,9,9;1"), &spec("const:2")).unwrap(), FrechetOrder::Less);
        assert_eq!(frechet_compare(&spec("fn:(n - 10)/n^2"), &spec("const:0")).unwrap(), FrechetOrder::Greater);
        assert_eq!(frechet_compare(&spec("fn:n"), &spec("periodic:1,2,3")).unwrap(), FrechetOrder::Greater);
        assert!(SequenceSpec::parse("periodic:").is_err());
        assert!(SequenceSpec::parse("random").is_err());
    }

    #[test]
    fn compare_agrees_with_terms_far_out() {
        let specs = ["periodic:1;0,1,2", "fn:(2*n + 1)/n", "const:2", "periodic:2,3", "fn:2 - 1/n^2"];
        for a in specs {
            for b in specs {
                let (sa, sb) = (spec(a), spec(b));
                let order = frechet_compare(&sa, &sb).unwrap();
                let tail: Vec<std::cmp::Ordering> =
                    (1000..1012).map(|n| sa.term(n).unwrap().cmp(&sb.term(n).unwrap())).collect();
                let expect = if tail.iter().all(|o| o.is_eq()) {
                    FrechetOrder::Equal
                } else if tail.iter().all(|o| o.is_lt()) {
                    FrechetOrder::Less
                } else if tail.iter().all(|o| o.is_gt()) {
                    FrechetOrder::Greater
                } else {
                    FrechetOrder::Incomparable
                };
                assert_eq!(order, expect, "{a} vs {b}");
            }
        }
    }
}
