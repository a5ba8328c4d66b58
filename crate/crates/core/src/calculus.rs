//! Calculus through genuine infinitesimals.
//!
//! A function given as an [`FnExpr`] is extended to series arguments by
//! writing `x = r + h` with `r = st(x)` and `ν(h) > 0`, then summing the
//! Taylor series of each primitive about `r`. Derivatives and limits are then
//! read off with the standard part:
//!
//! * `f'(r) = st((f(r + dx) - f(r)) / dx)`;
//! * `lim_{x→r} f(x) = st(f(r + dx))`.
//!
//! Everything stays exact: primitives are only expanded at centers where
//! their Taylor coefficients are rational (exp, sin, cos at 0; ln at 1;
//! roots wherever the leading coefficient has a rational root).

use std::fmt;
use std::ops;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{ExtRational, Rational};
use crate::order::Sign;
use crate::series::{Lattice, Precision, Series};

/// Elementary-function expression tree. Variables are indexed: `x` is 0,
/// `y` is 1, `z` is 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FnExpr {
    Const(Rational),
    Var(usize),
    Add(Box<FnExpr>, Box<FnExpr>),
    Sub(Box<FnExpr>, Box<FnExpr>),
    Mul(Box<FnExpr>, Box<FnExpr>),
    Div(Box<FnExpr>, Box<FnExpr>),
    Neg(Box<FnExpr>),
    PowInt(Box<FnExpr>, i64),
    PowRat(Box<FnExpr>, Rational),
    Exp(Box<FnExpr>),
    Ln(Box<FnExpr>),
    Sin(Box<FnExpr>),
    Cos(Box<FnExpr>),
    Sqrt(Box<FnExpr>),
}

pub const VARIABLE_NAMES: [&str; 3] = ["x", "y", "z"];

impl FnExpr {
    pub fn x() -> FnExpr {
        FnExpr::Var(0)
    }

    pub fn y() -> FnExpr {
        FnExpr::Var(1)
    }

    pub fn constant(q: impl Into<Rational>) -> FnExpr {
        FnExpr::Const(q.into())
    }

    pub fn powi(self, n: i64) -> FnExpr {
        FnExpr::PowInt(Box::new(self), n)
    }

    /// Rational power; integral exponents become [`FnExpr::PowInt`].
    pub fn pow(self, q: Rational) -> FnExpr {
        match q.to_i64() {
            Some(n) => FnExpr::PowInt(Box::new(self), n),
            None => FnExpr::PowRat(Box::new(self), q),
        }
    }

    pub fn exp(self) -> FnExpr {
        FnExpr::Exp(Box::new(self))
    }

    pub fn ln(self) -> FnExpr {
        FnExpr::Ln(Box::new(self))
    }

    pub fn sin(self) -> FnExpr {
        FnExpr::Sin(Box::new(self))
    }

    pub fn cos(self) -> FnExpr {
        FnExpr::Cos(Box::new(self))
    }

    pub fn sqrt(self) -> FnExpr {
        FnExpr::Sqrt(Box::new(self))
    }

    /// Number of variables referenced (highest index + 1).
    pub fn arity(&self) -> usize {
        match self {
            FnExpr::Const(_) => 0,
            FnExpr::Var(i) => i + 1,
            FnExpr::Add(a, b) | FnExpr::Sub(a, b) | FnExpr::Mul(a, b) | FnExpr::Div(a, b) => {
                a.arity().max(b.arity())
            }
            FnExpr::Neg(a)
            | FnExpr::PowInt(a, _)
            | FnExpr::PowRat(a, _)
            | FnExpr::Exp(a)
            | FnExpr::Ln(a)
            | FnExpr::Sin(a)
            | FnExpr::Cos(a)
            | FnExpr::Sqrt(a) => a.arity(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            FnExpr::Add(..) | FnExpr::Sub(..) => 1,
            FnExpr::Mul(..) | FnExpr::Div(..) => 2,
            FnExpr::Neg(_) => 3,
            FnExpr::PowInt(..) | FnExpr::PowRat(..) => 4,
            FnExpr::Const(q) if !q.is_integer() || q.is_negative() => 2,
            _ => 5,
        }
    }
}

macro_rules! fnexpr_binop {
    ($imp:ident, $method:ident, $variant:ident) => {
        impl ops::$imp for FnExpr {
            type Output = FnExpr;
            fn $method(self, rhs: FnExpr) -> FnExpr {
                FnExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

fnexpr_binop!(Add, add, Add);
fnexpr_binop!(Sub, sub, Sub);
fnexpr_binop!(Mul, mul, Mul);
fnexpr_binop!(Div, div, Div);

impl ops::Neg for FnExpr {
    type Output = FnExpr;
    fn neg(self) -> FnExpr {
        FnExpr::Neg(Box::new(self))
    }
}

fn wrap(e: &FnExpr, min_prec: u8) -> String {
    if e.precedence() < min_prec {
        format!("({e})")
    } else {
        e.to_string()
    }
}

/// Infix text that the expression parser reads back.
impl fmt::Display for FnExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnExpr::Const(q) => write!(f, "{q}"),
            FnExpr::Var(i) => match VARIABLE_NAMES.get(*i) {
                Some(name) => f.write_str(name),
                None => write!(f, "x{i}"),
            },
            FnExpr::Add(a, b) => write!(f, "{} + {}", wrap(a, 1), wrap(b, 2)),
            FnExpr::Sub(a, b) => write!(f, "{} - {}", wrap(a, 1), wrap(b, 2)),
            FnExpr::Mul(a, b) => write!(f, "{}*{}", wrap(a, 2), wrap(b, 3)),
            FnExpr::Div(a, b) => write!(f, "{}/{}", wrap(a, 2), wrap(b, 3)),
            FnExpr::Neg(a) => write!(f, "-{}", wrap(a, 3)),
            FnExpr::PowInt(a, n) if *n < 0 => write!(f, "{}^({n})", wrap(a, 5)),
            FnExpr::PowInt(a, n) => write!(f, "{}^{n}", wrap(a, 5)),
            FnExpr::PowRat(a, q) => write!(f, "{}^({q})", wrap(a, 5)),
            FnExpr::Exp(a) => write!(f, "exp({a})"),
            FnExpr::Ln(a) => write!(f, "ln({a})"),
            FnExpr::Sin(a) => write!(f, "sin({a})"),
            FnExpr::Cos(a) => write!(f, "cos({a})"),
            FnExpr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

/// Transcendental primitives expanded through a [`TaylorGenerator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    Exp,
    Ln,
    Sin,
    Cos,
}

impl Primitive {
    pub fn name(self) -> &'static str {
        match self {
            Primitive::Exp => "exp",
            Primitive::Ln => "ln",
            Primitive::Sin => "sin",
            Primitive::Cos => "cos",
        }
    }
}

/// Exact Taylor coefficients `c_k = g^(k)(center)/k!` of a primitive `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorGenerator {
    primitive: Primitive,
    center: Rational,
}

impl TaylorGenerator {
    /// Fails with `Domain` outside the primitive's domain and with
    /// `NotRepresentable` where the coefficients are irrational.
    pub fn new(primitive: Primitive, center: Rational) -> Result<TaylorGenerator> {
        let ok = match primitive {
            Primitive::Exp | Primitive::Sin | Primitive::Cos => center.is_zero(),
            Primitive::Ln => {
                if !center.is_positive() {
                    return Err(Error::Domain(format!("ln at non-positive point {center}")));
                }
                center.is_one()
            }
        };
        if !ok {
            return Err(Error::NotRepresentable(format!(
                "{} has irrational Taylor coefficients at {center}",
                primitive.name()
            )));
        }
        Ok(TaylorGenerator { primitive, center })
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    /// `[c_0, ..., c_n]`.
    pub fn coefficients(&self, n: usize) -> Vec<Rational> {
        let mut c: Vec<Rational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let ki = k as i64;
            let next = match (self.primitive, k) {
                (Primitive::Exp, 0) => Rational::one(),
                (Primitive::Exp, _) => &c[k - 1] / &Rational::from(ki),
                (Primitive::Ln, 0) => Rational::zero(),
                (Primitive::Ln, _) => {
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    Rational::new(sign, ki)
                }
                (Primitive::Sin, 0) | (Primitive::Cos, 1) => Rational::zero(),
                (Primitive::Sin, 1) | (Primitive::Cos, 0) => Rational::one(),
                // c_{k} = -c_{k-2} / (k (k-1))
                (Primitive::Sin | Primitive::Cos, _) => -(&c[k - 2] / &Rational::from(ki * (ki - 1))),
            };
            c.push(next);
        }
        c
    }
}

/// Standard part: the unique rational infinitely close to a finite `x`.
pub fn st(x: &Series) -> Result<Rational> {
    if let Some((e, _)) = x.leading() {
        if e.is_negative() {
            return Err(Error::NotFinite);
        }
        return Ok(x.coeff(&Rational::zero()));
    }
    match x.cutoff() {
        ExtRational::Infinity => Ok(Rational::zero()),
        // Vanishing up to a non-negative cutoff means infinitesimal.
        ExtRational::Finite(c) if !c.is_negative() => Ok(Rational::zero()),
        ExtRational::Finite(c) => Err(Error::UnresolvedAtTruncation { cutoff: c.to_string() }),
    }
}

/// Splits a finite `x` as `r + h` with `r = st(x)`.
fn split_standard(x: &Series) -> Result<(Rational, Series)> {
    let r = st(x)?;
    if let ExtRational::Finite(c) = x.cutoff() {
        if c.is_negative() {
            return Err(Error::UnresolvedAtTruncation { cutoff: c.to_string() });
        }
    }
    let h = x - &Series::constant(r.clone());
    Ok((r, h))
}

fn apply_primitive(primitive: Primitive, u: &Series, prec: &Precision) -> Result<Series> {
    let (r, h) = split_standard(u)?;
    let generator = TaylorGenerator::new(primitive, r)?;
    if h.is_exact_zero() {
        return Ok(Series::constant(generator.coefficients(0).remove(0)));
    }
    let target = match h.cutoff() {
        ExtRational::Finite(c) => c.clone().min(prec.cutoff.clone()),
        ExtRational::Infinity => prec.cutoff.clone(),
    };
    let lat = h.on_lattice(&target, prec)?;
    let coeffs = lattice_compose(primitive, &lat);
    lat.series(coeffs, ExtRational::Finite(target), prec)
}

/// Coefficients of `primitive(center + h)` on the lattice of `h`, from the
/// first-order equation each primitive satisfies.
fn lattice_compose(primitive: Primitive, lat: &Lattice) -> Vec<Rational> {
    let n_max = lat.steps;
    let k_of = |k: usize| Rational::from(k as i64);
    // Σ_k weight(k)·h_k·g_(n-k) over the sparse terms of h with k ≤ n.
    let conv = |g: &[Rational], n: usize, weight: &dyn Fn(usize) -> Rational| {
        let mut acc = Rational::zero();
        for (k, hk) in &lat.terms {
            if *k > n {
                break;
            }
            if !g[n - k].is_zero() {
                acc += &(&(&weight(*k) * hk) * &g[n - k]);
            }
        }
        acc
    };
    match primitive {
        Primitive::Exp => {
            let mut g = vec![Rational::one()];
            for n in 1..=n_max {
                let v = &conv(&g, n, &k_of) / &k_of(n);
                g.push(v);
            }
            g
        }
        Primitive::Sin | Primitive::Cos => {
            let mut s = vec![Rational::zero()];
            let mut c = vec![Rational::one()];
            for n in 1..=n_max {
                let sn = &conv(&c, n, &k_of) / &k_of(n);
                let cn = -&(&conv(&s, n, &k_of) / &k_of(n));
                s.push(sn);
                c.push(cn);
            }
            if primitive == Primitive::Sin {
                s
            } else {
                c
            }
        }
        Primitive::Ln => {
            // (1 + h)·g' = h'
            let mut g = vec![Rational::zero()];
            let h_at = |n: usize| lat.terms.iter().find(|(k, _)| *k == n).map(|(_, c)| c.clone());
            for n in 1..=n_max {
                let mut v = h_at(n).unwrap_or_else(Rational::zero);
                let nn = k_of(n);
                v -= &(&conv(&g, n, &|k| &(&nn - &k_of(k)) / &nn));
                g.push(v);
            }
            g
        }
    }
}

/// Even roots of negative elements lie outside the domain.
fn check_root_domain(u: &Series, k: &num_bigint::BigInt) -> Result<()> {
    if k % 2u32 == num_bigint::BigInt::from(0) && u.sign()? == Sign::Negative {
        return Err(Error::Domain(format!("even root of negative value {u}")));
    }
    Ok(())
}

/// `*f(x)`: the extension of `f` evaluated at series arguments.
pub fn lift_eval(f: &FnExpr, args: &[Series], prec: &Precision) -> Result<Series> {
    Ok(match f {
        FnExpr::Const(q) => Series::constant(q.clone()),
        FnExpr::Var(i) => args
            .get(*i)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("no value supplied for variable {i}")))?,
        FnExpr::Add(a, b) => &lift_eval(a, args, prec)? + &lift_eval(b, args, prec)?,
        FnExpr::Sub(a, b) => &lift_eval(a, args, prec)? - &lift_eval(b, args, prec)?,
        FnExpr::Mul(a, b) => &lift_eval(a, args, prec)? * &lift_eval(b, args, prec)?,
        FnExpr::Div(a, b) => {
            let den = lift_eval(b, args, prec)?.inv_with(prec)?;
            &lift_eval(a, args, prec)? * &den
        }
        FnExpr::Neg(a) => -&lift_eval(a, args, prec)?,
        FnExpr::PowInt(a, n) => lift_eval(a, args, prec)?.powi(*n, prec)?,
        FnExpr::PowRat(a, q) => {
            let u = lift_eval(a, args, prec)?;
            check_root_domain(&u, q.denom())?;
            u.pow_rational(q, prec)?
        }
        FnExpr::Sqrt(a) => {
            let u = lift_eval(a, args, prec)?;
            check_root_domain(&u, &num_bigint::BigInt::from(2))?;
            u.root(2, prec)?
        }
        FnExpr::Exp(a) => apply_primitive(Primitive::Exp, &lift_eval(a, args, prec)?, prec)?,
        FnExpr::Ln(a) => {
            let u = lift_eval(a, args, prec)?;
            if u.sign().ok() == Some(Sign::Negative) || u.is_exact_zero() {
                return Err(Error::Domain(format!("ln of non-positive value {u}")));
            }
            apply_primitive(Primitive::Ln, &u, prec)?
        }
        FnExpr::Sin(a) => apply_primitive(Primitive::Sin, &lift_eval(a, args, prec)?, prec)?,
        FnExpr::Cos(a) => apply_primitive(Primitive::Cos, &lift_eval(a, args, prec)?, prec)?,
    })
}

/// Single-variable [`lift_eval`].
pub fn lift_eval1(f: &FnExpr, x: &Series, prec: &Precision) -> Result<Series> {
    lift_eval(f, std::slice::from_ref(x), prec)
}

/// Direct evaluation in `Q`, independent of the series machinery. Only
/// points where every primitive takes a rational value are accepted.
pub fn eval_rational(f: &FnExpr, args: &[Rational]) -> Result<Rational> {
    let rec = |e: &FnExpr| eval_rational(e, args);
    Ok(match f {
        FnExpr::Const(q) => q.clone(),
        FnExpr::Var(i) => args
            .get(*i)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("no value supplied for variable {i}")))?,
        FnExpr::Add(a, b) => rec(a)? + rec(b)?,
        FnExpr::Sub(a, b) => rec(a)? - rec(b)?,
        FnExpr::Mul(a, b) => rec(a)? * rec(b)?,
        FnExpr::Div(a, b) => rec(a)?.checked_div(&rec(b)?)?,
        FnExpr::Neg(a) => -rec(a)?,
        FnExpr::PowInt(a, n) => {
            let n = i32::try_from(*n).map_err(|_| Error::NotRepresentable("exponent too large".into()))?;
            rec(a)?.pow(n)?
        }
        FnExpr::PowRat(a, q) => {
            let base = rec(a)?;
            let k = u32::try_from(q.denom()).map_err(|_| Error::NotRepresentable("root index too large".into()))?;
            if base.is_negative() && k % 2 == 0 {
                return Err(Error::Domain(format!("even root of negative {base}")));
            }
            let root = base
                .exact_root(k)
                .ok_or_else(|| Error::NotRepresentable(format!("{base}^({q}) is irrational")))?;
            let p = i32::try_from(q.numer()).map_err(|_| Error::NotRepresentable("exponent too large".into()))?;
            root.pow(p)?
        }
        FnExpr::Sqrt(a) => {
            let base = rec(a)?;
            if base.is_negative() {
                return Err(Error::Domain(format!("sqrt of negative {base}")));
            }
            base.exact_root(2)
                .ok_or_else(|| Error::NotRepresentable(format!("sqrt({base}) is irrational")))?
        }
        FnExpr::Exp(a) => match rec(a)? {
            v if v.is_zero() => Rational::one(),
            v => return Err(Error::NotRepresentable(format!("exp({v}) is irrational"))),
        },
        FnExpr::Ln(a) => match rec(a)? {
            v if !v.is_positive() => return Err(Error::Domain(format!("ln of non-positive {v}"))),
            v if v.is_one() => Rational::zero(),
            v => return Err(Error::NotRepresentable(format!("ln({v}) is irrational"))),
        },
        FnExpr::Sin(a) => match rec(a)? {
            v if v.is_zero() => Rational::zero(),
            v => return Err(Error::NotRepresentable(format!("sin({v}) is irrational"))),
        },
        FnExpr::Cos(a) => match rec(a)? {
            v if v.is_zero() => Rational::one(),
            v => return Err(Error::NotRepresentable(format!("cos({v}) is irrational"))),
        },
    })
}

/// Derivative at `r` with the increment `dx = t`.
pub fn derivative(f: &FnExpr, r: &Rational, prec: &Precision) -> Result<Rational> {
    derivative_with(f, r, &Series::t(), prec)
}

/// `st((*f(r + dx) - f(r)) / dx)` for a given nonzero infinitesimal `dx`.
pub fn derivative_with(f: &FnExpr, r: &Rational, dx: &Series, prec: &Precision) -> Result<Rational> {
    st(&difference_quotient(f, r, dx, prec)?)
}

/// `(*f(r + dx) - f(r)) / dx`, before taking the standard part.
pub fn difference_quotient(f: &FnExpr, r: &Rational, dx: &Series, prec: &Precision) -> Result<Series> {
    match dx.valuation()? {
        ExtRational::Finite(v) if v.is_positive() => {}
        _ => {
            return Err(Error::Domain(format!(
                "increment {dx} is not a nonzero infinitesimal"
            )))
        }
    }
    let base = Series::constant(r.clone());
    let shifted = lift_eval1(f, &(&base + dx), prec)?;
    let at_r = lift_eval1(f, &base, prec)?;
    Ok(&(&shifted - &at_r) * &dx.inv_with(prec)?)
}

/// Verdict of a single perturbation in [`limit`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Approach {
    Finite(Rational),
    PositiveInfinite,
    NegativeInfinite,
    Unresolved,
    OutsideDomain,
    /// The value at this perturbation has irrational coefficients.
    NotRepresentable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub dx: String,
    pub approach: Approach,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LimitOutcome {
    Limit(Rational),
    NoLimit(Vec<Witness>),
    Unresolved(Vec<Witness>),
}

/// The fixed menu of infinitesimal perturbations tried by [`limit`]:
/// `±t`, `±t²`, `±2t`.
pub fn perturbation_menu() -> Vec<Series> {
    let t = Series::t();
    let t2 = Series::monomial(Rational::one(), Rational::from(2));
    let two_t = Series::monomial(Rational::from(2), Rational::one());
    vec![t.clone(), -&t, t2.clone(), -&t2, two_t.clone(), -&two_t]
}

/// `lim_{x→r} f(x)` as `st(*f(r + dx))`, checked to agree across
/// [`perturbation_menu`]. Agreement on the menu is necessary for a limit,
/// not sufficient.
pub fn limit(f: &FnExpr, r: &Rational, prec: &Precision) -> Result<LimitOutcome> {
    let base = Series::constant(r.clone());
    let mut witnesses = Vec::new();
    for dx in perturbation_menu() {
        let approach = match lift_eval1(f, &(&base + &dx), prec) {
            Ok(value) => match st(&value) {
                Ok(v) => Approach::Finite(v),
                Err(Error::NotFinite) => match value.sign()? {
                    Sign::Negative => Approach::NegativeInfinite,
                    _ => Approach::PositiveInfinite,
                },
                Err(e) if e.is_unresolved() => Approach::Unresolved,
                Err(e) => return Err(e),
            },
            Err(Error::Domain(_)) | Err(Error::DivisionByZero) => Approach::OutsideDomain,
            Err(Error::NotRepresentable(_)) => Approach::NotRepresentable,
            Err(e) if e.is_unresolved() => Approach::Unresolved,
            Err(e) => return Err(e),
        };
        witnesses.push(Witness {
            dx: dx.to_string(),
            approach,
        });
    }
    let admissible: Vec<&Approach> = witnesses
        .iter()
        .map(|w| &w.approach)
        .filter(|a| !matches!(a, Approach::OutsideDomain | Approach::NotRepresentable))
        .collect();
    let Some(first) = admissible.first() else {
        if witnesses.iter().any(|w| w.approach == Approach::NotRepresentable) {
            return Err(Error::NotRepresentable(format!(
                "no tested perturbation of {r} has an exact expansion"
            )));
        }
        return Err(Error::Domain(format!("no tested perturbation of {r} lies in the domain")));
    };
    if let Approach::Finite(v) = first {
        if admissible.iter().all(|a| *a == *first) {
            return Ok(LimitOutcome::Limit(v.clone()));
        }
    }
    if admissible.iter().any(|a| **a == Approach::Unresolved) {
        return Ok(LimitOutcome::Unresolved(witnesses));
    }
    Ok(LimitOutcome::NoLimit(witnesses))
}

/// Taylor coefficients `[c_0, ..., c_n]` of `f` at `r`, read from
/// `*f(r + t)`; `k!·c_k = f^(k)(r)`.
pub fn taylor(f: &FnExpr, r: &Rational, n: usize, prec: &Precision) -> Result<Vec<Rational>> {
    let needed = Rational::from(n as i64);
    let prec = Precision {
        cutoff: prec.cutoff.clone().max(needed.clone()),
        max_terms: prec.max_terms,
    };
    let value = lift_eval1(f, &(&Series::constant(r.clone()) + &Series::t()), &prec)?;
    if let ExtRational::Finite(c) = value.cutoff() {
        if c < &needed {
            return Err(Error::UnresolvedAtTruncation { cutoff: c.to_string() });
        }
    }
    if let Some((e, _)) = value.terms().iter().find(|(e, _)| !e.is_integer() || e.is_negative()) {
        return Err(Error::NotRepresentable(format!(
            "expansion has a t^({e}) term, so f is not analytic at {r}"
        )));
    }
    Ok((0..=n).map(|k| value.coeff(&Rational::from(k as i64))).collect())
}
