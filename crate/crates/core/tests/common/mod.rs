//! Test oracles that do not go through the series machinery: symbolic
//! differentiation and direct rational evaluation.
#![allow(dead_code)]

use nonarch::calculus::FnExpr;
use nonarch::Rational;
use num_bigint::BigInt;
use num_traits::Signed;

fn b(e: FnExpr) -> Box<FnExpr> {
    Box::new(e)
}

fn c(n: i64) -> FnExpr {
    FnExpr::Const(Rational::from(n))
}

/// Symbolic derivative with respect to `x`.
pub fn diff(e: &FnExpr) -> FnExpr {
    use FnExpr::*;
    match e {
        Const(_) => c(0),
        Var(0) => c(1),
        Var(_) => c(0),
        Add(a, bb) => Add(b(diff(a)), b(diff(bb))),
        Sub(a, bb) => Sub(b(diff(a)), b(diff(bb))),
        Neg(a) => Neg(b(diff(a))),
        Mul(a, bb) => Add(b(Mul(b(diff(a)), bb.clone())), b(Mul(a.clone(), b(diff(bb))))),
        Div(a, bb) => Div(
            b(Sub(b(Mul(b(diff(a)), bb.clone())), b(Mul(a.clone(), b(diff(bb)))))),
            b(PowInt(bb.clone(), 2)),
        ),
        PowInt(a, n) => Mul(b(Mul(b(c(*n)), b(PowInt(a.clone(), n - 1)))), b(diff(a))),
        PowRat(a, q) => {
            let lowered = q - &Rational::one();
            Mul(b(Mul(b(FnExpr::Const(q.clone())), b(PowRat(a.clone(), lowered)))), b(diff(a)))
        }
        Exp(a) => Mul(b(Exp(a.clone())), b(diff(a))),
        Ln(a) => Div(b(diff(a)), a.clone()),
        Sin(a) => Mul(b(Cos(a.clone())), b(diff(a))),
        Cos(a) => Neg(b(Mul(b(Sin(a.clone())), b(diff(a))))),
        Sqrt(a) => Div(b(diff(a)), b(Mul(b(c(2)), b(Sqrt(a.clone()))))),
    }
}

fn int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return int_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

fn rational_root(q: &Rational, k: u32) -> Option<Rational> {
    let n = int_root(q.numer(), k)?;
    let d = int_root(q.denom(), k)?;
    Rational::checked_new(n, d).ok()
}

fn powi(q: &Rational, n: i64) -> Option<Rational> {
    let mut acc = Rational::one();
    for _ in 0..n.unsigned_abs() {
        acc = &acc * q;
    }
    if n < 0 {
        if acc.is_zero() {
            return None;
        }
        acc = Rational::one().checked_div(&acc).ok()?;
    }
    Some(acc)
}

/// Direct evaluation at `x = r`; `None` where the value is irrational or
/// undefined. Transcendental functions are known exactly only at 0 (and
/// `ln` at 1).
pub fn eval(e: &FnExpr, r: &Rational) -> Option<Rational> {
    use FnExpr::*;
    Some(match e {
        Const(q) => q.clone(),
        Var(0) => r.clone(),
        Var(_) => return None,
        Add(a, bb) => eval(a, r)? + eval(bb, r)?,
        Sub(a, bb) => eval(a, r)? - eval(bb, r)?,
        Mul(a, bb) => eval(a, r)? * eval(bb, r)?,
        Div(a, bb) => eval(a, r)?.checked_div(&eval(bb, r)?).ok()?,
        Neg(a) => -eval(a, r)?,
        PowInt(a, n) => powi(&eval(a, r)?, *n)?,
        PowRat(a, q) => {
            let k: u32 = q.denom().try_into().ok()?;
            let p: i64 = q.numer().try_into().ok()?;
            powi(&rational_root(&eval(a, r)?, k)?, p)?
        }
        Sqrt(a) => {
            let v = eval(a, r)?;
            if v.is_negative() {
                return None;
            }
            rational_root(&v, 2)?
        }
        Exp(a) => match eval(a, r)? {
            v if v.is_zero() => Rational::one(),
            _ => return None,
        },
        Ln(a) => match eval(a, r)? {
            v if v == Rational::one() => Rational::zero(),
            _ => return None,
        },
        Sin(a) => match eval(a, r)? {
            v if v.is_zero() => Rational::zero(),
            _ => return None,
        },
        Cos(a) => match eval(a, r)? {
            v if v.is_zero() => Rational::one(),
            _ => return None,
        },
    })
}

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn f(s: &str) -> FnExpr {
    nonarch::syntax::parse_fn(s).unwrap()
}

/// `k!` by repeated multiplication.
pub fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc * Rational::from(i))
}

/// Points where the transcendental catalog entries are exact: the roots of
/// `p(x) = (x + 2)(x + 1)(x + 1/2)x(x - 1/3)(x - 1/2)(x - 1)(x - 3/2)(x - 2)(x - 3)`.
pub const ROOTS: [&str; 10] = ["-2", "-1", "-1/2", "0", "1/3", "1/2", "1", "3/2", "2", "3"];

pub fn root_poly() -> String {
    ROOTS.iter().map(|r| format!("(x - ({r}))")).collect::<Vec<_>>().join("*")
}

/// Ten grammar functions, each with ten rational points at which both the
/// function and its derivative are exactly representable.
pub fn catalog() -> Vec<(String, Vec<Rational>)> {
    let general: Vec<Rational> = ["-3", "-2", "-1/2", "1/3", "1", "3/2", "2", "5/7", "4", "-9/4"].iter().map(|s| q(s)).collect();
    let squares: Vec<Rational> = ["1", "4", "9", "1/4", "9/16", "25/4", "16/9", "49", "1/100", "81/64"].iter().map(|s| q(s)).collect();
    let roots: Vec<Rational> = ROOTS.iter().map(|s| q(s)).collect();
    let p = root_poly();
    vec![
        ("x^3".into(), general.clone()),
        ("x^5 - 3*x^2 + 7".into(), general.clone()),
        ("1/x".into(), general.clone()),
        ("(x^2 - 1)/(x^2 + 1)".into(), general.clone()),
        ("(2*x + 1)^4/(x^2 + 3)^2".into(), general.clone()),
        ("sqrt(x)".into(), squares.clone()),
        ("x^(3/2) - 2*x^(-1/2)".into(), squares),
        (format!("sin({p})"), roots.clone()),
        (format!("x*exp({p}) + cos({p})"), roots.clone()),
        (format!("ln(1 + {p})*x^2"), roots),
    ]
}
