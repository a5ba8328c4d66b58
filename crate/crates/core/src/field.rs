//! Field elements tagged with the field they live in, and the parser that
//! builds them from text.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

use crate::calculus::{self, FnExpr};
use crate::error::{Error, Result};
use crate::numeric::{Rational, Valuation};
use crate::order::{self, Classification, FieldKind, OrderedField, Sign};
use crate::ratfunc::RatFunc;
use crate::series::{ExponentGroup, Norm, Precision, Series};
use crate::syntax::{self, Ast, BinOp};

/// Field and truncation settings used when building elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    pub field: FieldKind,
    pub precision: Precision,
}

impl FieldContext {
    pub fn new(field: FieldKind) -> FieldContext {
        FieldContext { field, precision: Precision::default() }
    }

    pub fn with_precision(field: FieldKind, precision: Precision) -> FieldContext {
        FieldContext { field, precision }
    }

    fn group(&self) -> Option<ExponentGroup> {
        ExponentGroup::for_field(self.field)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Repr {
    Rational(Rational),
    RatFunc(RatFunc),
    Series(Series),
}

/// An element of one of the registered fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    field: FieldKind,
    value: Repr,
}

fn mixed(a: FieldKind, b: FieldKind) -> Error {
    Error::Domain(format!("cannot combine elements of {a} and {b}"))
}

impl Element {
    pub fn from_rational(field: FieldKind, q: Rational) -> Element {
        let value = match field {
            FieldKind::Rationals => Repr::Rational(q),
            FieldKind::RatFunc => Repr::RatFunc(RatFunc::constant(q)),
            _ => Repr::Series(Series::constant(q)),
        };
        Element { field, value }
    }

    /// The infinitesimal `t`; `Q` has none.
    pub fn generator(field: FieldKind) -> Result<Element> {
        let value = match field {
            FieldKind::Rationals => {
                return Err(Error::Domain("q is Archimedean and has no infinitesimal generator t".into()))
            }
            FieldKind::RatFunc => Repr::RatFunc(RatFunc::t()),
            _ => Repr::Series(Series::t()),
        };
        Ok(Element { field, value })
    }

    pub fn from_ratfunc(f: RatFunc) -> Element {
        Element { field: FieldKind::RatFunc, value: Repr::RatFunc(f) }
    }

    /// Wraps a series, checking the field's exponent group.
    pub fn from_series(field: FieldKind, s: Series) -> Result<Element> {
        match ExponentGroup::for_field(field) {
            Some(g) => g.check(&s)?,
            None => return Err(Error::Domain(format!("{field} is not a series field"))),
        }
        Ok(Element { field, value: Repr::Series(s) })
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn value(&self) -> &Repr {
        &self.value
    }

    pub fn as_series(&self) -> Option<&Series> {
        match &self.value {
            Repr::Series(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        match &self.value {
            Repr::RatFunc(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.value {
            Repr::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// The element as a series; rational functions are expanded up to `cutoff`.
    pub fn to_series(&self, cutoff: &Rational) -> Series {
        match &self.value {
            Repr::Rational(q) => Series::constant(q.clone()),
            Repr::RatFunc(f) => f.to_series(cutoff),
            Repr::Series(s) => s.clone(),
        }
    }

    fn combine(
        &self,
        other: &Element,
        q: impl FnOnce(&Rational, &Rational) -> Result<Rational>,
        r: impl FnOnce(&RatFunc, &RatFunc) -> Result<RatFunc>,
        s: impl FnOnce(&Series, &Series) -> Result<Series>,
    ) -> Result<Element> {
        if self.field != other.field {
            return Err(mixed(self.field, other.field));
        }
        let value = match (&self.value, &other.value) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(q(a, b)?),
            (Repr::RatFunc(a), Repr::RatFunc(b)) => Repr::RatFunc(r(a, b)?),
            (Repr::Series(a), Repr::Series(b)) => return Element::from_series(self.field, s(a, b)?),
            _ => return Err(mixed(self.field, other.field)),
        };
        Ok(Element { field: self.field, value })
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.combine(other, |a, b| Ok(a + b), |a, b| Ok(a + b), |a, b| Ok(a + b))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.combine(other, |a, b| Ok(a - b), |a, b| Ok(a - b), |a, b| Ok(a - b))
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.combine(other, |a, b| Ok(a * b), |a, b| Ok(a * b), |a, b| Ok(a * b))
    }

    pub fn div(&self, other: &Element, prec: &Precision) -> Result<Element> {
        self.combine(
            other,
            |a, b| a.checked_div(b),
            |a, b| Ok(a * &b.inv()?),
            |a, b| Ok(a * &b.inv_with(prec)?),
        )
    }

    pub fn neg(&self) -> Element {
        let value = match &self.value {
            Repr::Rational(q) => Repr::Rational(-q),
            Repr::RatFunc(f) => Repr::RatFunc(-f),
            Repr::Series(s) => Repr::Series(-s),
        };
        Element { field: self.field, value }
    }

    pub fn powi(&self, n: i64, prec: &Precision) -> Result<Element> {
        let value = match &self.value {
            Repr::Rational(q) => {
                let n = i32::try_from(n).map_err(|_| Error::BudgetExceeded { budget: prec.max_terms })?;
                Repr::Rational(q.pow(n)?)
            }
            Repr::RatFunc(f) => Repr::RatFunc(f.powi(n)?),
            Repr::Series(s) => return Element::from_series(self.field, s.powi(n, prec)?),
        };
        Ok(Element { field: self.field, value })
    }

    pub fn pow(&self, exponent: &Rational, prec: &Precision) -> Result<Element> {
        if let Some(n) = exponent.to_i64().filter(|_| exponent.is_integer()) {
            return self.powi(n, prec);
        }
        let k = u32::try_from(exponent.denom()).map_err(|_| Error::NotRepresentable("root index too large".into()))?;
        let p = exponent.numer().try_into().map_err(|_| Error::NotRepresentable("exponent too large".into()))?;
        match &self.value {
            Repr::Rational(q) => {
                if q.is_negative() && k % 2 == 0 {
                    return Err(Error::Domain(format!("even root of negative value {q}")));
                }
                let root = q
                    .exact_root(k)
                    .ok_or_else(|| Error::NotRepresentable(format!("{q}^({exponent}) is irrational")))?;
                Element::from_rational(self.field, root).powi(p, prec)
            }
            Repr::RatFunc(f) => match f.valuation() {
                // A nonzero constant: take the root in Q.
                Valuation::Finite(v) if v.is_zero() && f.num().degree() == Some(0) && f.den().degree() == Some(0) => {
                    let c = f.num().coeff(0).checked_div(&f.den().coeff(0))?;
                    let root = Element::from_rational(FieldKind::Rationals, c).pow(exponent, prec)?;
                    Ok(Element::from_rational(self.field, root.as_rational().cloned().unwrap_or_default()))
                }
                _ => Err(Error::ExponentGroupViolation(format!(
                    "K(t) admits only integer powers, got ({f})^({exponent})"
                ))),
            },
            Repr::Series(s) => Element::from_series(self.field, s.pow_rational(exponent, prec)?),
        }
    }

    pub fn sign(&self) -> Result<Sign> {
        match &self.value {
            Repr::Rational(q) => Ok(Sign::of_rational(q)),
            Repr::RatFunc(f) => Ok(f.sign()),
            Repr::Series(s) => s.sign(),
        }
    }

    pub fn compare(&self, other: &Element) -> Result<Ordering> {
        self.sub(other)?.sign().map(Sign::to_ordering)
    }

    pub fn valuation(&self) -> Result<Valuation> {
        match &self.value {
            Repr::Rational(q) => OrderedField::valuation(q),
            Repr::RatFunc(f) => Ok(f.valuation()),
            Repr::Series(s) => s.valuation(),
        }
    }

    pub fn classify(&self) -> Result<Classification> {
        match &self.value {
            Repr::Rational(q) => order::classify(q),
            Repr::RatFunc(f) => order::classify(f),
            Repr::Series(s) => order::classify(s),
        }
    }

    pub fn abs(&self) -> Result<Element> {
        Ok(match self.sign()? {
            Sign::Negative => self.neg(),
            _ => self.clone(),
        })
    }

    pub fn norm(&self) -> Result<Norm> {
        self.valuation().map(Norm::from_valuation)
    }

    pub fn dist(&self, other: &Element) -> Result<Norm> {
        self.sub(other)?.norm()
    }

    /// Standard part of a finite element.
    pub fn st(&self) -> Result<Rational> {
        match &self.value {
            Repr::Rational(q) => Ok(q.clone()),
            Repr::Series(s) => calculus::st(s),
            Repr::RatFunc(f) => match f.valuation() {
                Valuation::Infinity => Ok(Rational::zero()),
                Valuation::Finite(v) if v.is_negative() => Err(Error::NotFinite),
                Valuation::Finite(v) if v.is_positive() => Ok(Rational::zero()),
                Valuation::Finite(_) => {
                    let n = f.num().lowest_coeff().cloned().unwrap_or_default();
                    let d = f.den().lowest_coeff().cloned().unwrap_or_else(Rational::one);
                    n.checked_div(&d)
                }
            },
        }
    }

    /// `{"field": ..., "text": ..., "value": ...}` with exact rational strings.
    pub fn to_json(&self) -> Value {
        let value = match &self.value {
            Repr::Rational(q) => json!(q.to_string()),
            Repr::RatFunc(f) => serde_json::to_value(f).unwrap_or(Value::Null),
            Repr::Series(s) => serde_json::to_value(s).unwrap_or(Value::Null),
        };
        json!({"field": self.field.name(), "text": self.to_string(), "value": value})
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Repr::Rational(q) => write!(f, "{q}"),
            Repr::RatFunc(r) => write!(f, "{r}"),
            Repr::Series(s) => write!(f, "{s}"),
        }
    }
}

/// Session variables visible to [`parse_element_with`].
pub type Bindings = HashMap<String, Element>;

struct Builder<'a> {
    ctx: &'a FieldContext,
    vars: &'a Bindings,
}

impl Builder<'_> {
    fn build(&self, ast: &Ast) -> Result<Element> {
        let field = self.ctx.field;
        let prec = &self.ctx.precision;
        match ast {
            Ast::Num(q) => Ok(Element::from_rational(field, q.clone())),
            Ast::Ident { name, pos } => {
                if let Some(v) = self.vars.get(name) {
                    if v.field() != field {
                        return Err(mixed(v.field(), field));
                    }
                    return Ok(v.clone());
                }
                if name == "t" {
                    return Element::generator(field)
                        .map_err(|_| Error::parse(*pos, "q has no infinitesimal generator 't'"));
                }
                Err(Error::parse(*pos, format!("unknown identifier {name:?}")))
            }
            Ast::Neg(a) => Ok(self.build(a)?.neg()),
            Ast::Binary { op, lhs, rhs } => {
                let (a, b) = (self.build(lhs)?, self.build(rhs)?);
                match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    BinOp::Mul => a.mul(&b),
                    BinOp::Div => a.div(&b, prec),
                }
            }
            Ast::Pow { base, exponent, pos } => {
                let e = syntax::exponent_value(exponent, *pos)?;
                self.build(base)?.pow(&e, prec)
            }
            Ast::Call { name, arg, pos } => {
                let f = match name.as_str() {
                    "exp" => FnExpr::x().exp(),
                    "ln" | "log" => FnExpr::x().ln(),
                    "sin" => FnExpr::x().sin(),
                    "cos" => FnExpr::x().cos(),
                    "sqrt" => return self.build(arg)?.pow(&Rational::new(1, 2), prec),
                    other => return Err(Error::parse(*pos, format!("unknown function {other:?}"))),
                };
                let a = self.build(arg)?;
                match &a.value {
                    Repr::Series(s) => Element::from_series(field, calculus::lift_eval1(&f, s, prec)?),
                    _ => {
                        let c = match &a.value {
                            Repr::Rational(q) => q.clone(),
                            Repr::RatFunc(r) if r.num().degree().unwrap_or(0) == 0 && r.den().degree() == Some(0) => {
                                r.num().coeff(0).checked_div(&r.den().coeff(0))?
                            }
                            _ => {
                                return Err(Error::NotRepresentable(format!(
                                    "{name}({a}) is not an element of {field}"
                                )))
                            }
                        };
                        Ok(Element::from_rational(field, calculus::eval_rational(&f, &[c])?))
                    }
                }
            }
            Ast::BigO { cutoff, pos } => {
                if !field.is_series() {
                    return Err(Error::parse(*pos, format!("O(...) terms need a series field, not {field}")));
                }
                Element::from_series(field, Series::unknown_beyond(cutoff.clone()))
            }
        }
    }
}

/// Parses `text` as an element of the context's field.
pub fn parse_element(text: &str, ctx: &FieldContext) -> Result<Element> {
    parse_element_with(text, ctx, &Bindings::new())
}

/// As [`parse_element`], resolving identifiers other than `t` in `vars`.
pub fn parse_element_with(text: &str, ctx: &FieldContext, vars: &Bindings) -> Result<Element> {
    let ast = syntax::parse(text)?;
    let element = Builder { ctx, vars }.build(&ast)?;
    if let (Some(g), Some(s)) = (ctx.group(), element.as_series()) {
        g.check(s)?;
    }
    Ok(element)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn ctx(field: &str) -> FieldContext {
        FieldContext::new(field.parse().unwrap())
    }

    #[test]
    fn reciprocal_of_t_plus_t_squared_is_infinitely_large() {
        let x = parse_element("1/(t+t^2)", &ctx("ratfunc")).unwrap();
        assert_eq!(x.classify().unwrap(), Classification::InfinitelyLarge);
        assert_eq!(x.to_string(), "1/(t + t^2)");
    }

    #[test]
    fn laurent_rejects_fractional_exponents() {
        assert!(matches!(
            parse_element("t^(1/2)", &ctx("laurent")),
            Err(Error::ExponentGroupViolation(_))
        ));
        assert!(matches!(
            parse_element("t^(1/3)", &ctx("puiseux:2")),
            Err(Error::ExponentGroupViolation(_))
        ));
        assert!(parse_element("t^(1/2)", &ctx("puiseux:2")).is_ok());
        // Intermediates are checked too, even when the final value is integral.
        assert!(parse_element("t^(1/2)*t^(1/2)", &ctx("laurent")).is_err());
    }

    #[test]
    fn levicivita_two_terms() {
        let x = parse_element("3/4 + 2*t^(7/3)", &ctx("levicivita")).unwrap();
        let s = x.as_series().unwrap();
        assert_eq!(s.terms(), &[(q("0"), q("3/4")), (q("7/3"), q("2"))]);
        assert!(s.is_exact());
    }

    #[test]
    fn display_reparses() {
        for (field, text) in [
            ("levicivita", "3/2*t^(-1/2) + t + 5*t^(7/3)"),
            ("puiseux", "1/(1 - t^(1/2))"),
            ("laurent", "1/(t - t^2) + O(t^>4)"),
            ("ratfunc", "(1 + t)/(t^2 - t^3)"),
            ("q", "-7/3 + 1/2"),
            ("levicivita", "-t^(-2) + O(t^>(-1/2))"),
        ] {
            let c = ctx(field);
            let x = parse_element(text, &c).unwrap();
            let y = parse_element(&x.to_string(), &c).unwrap();
            assert_eq!(x, y, "{field}: {text} -> {x}");
        }
    }

    #[test]
    fn standard_parts() {
        let c = ctx("ratfunc");
        assert_eq!(parse_element("(6 + t)/(2 - t)", &c).unwrap().st().unwrap(), q("3"));
        assert_eq!(parse_element("t/(1 + t)", &c).unwrap().st().unwrap(), q("0"));
        assert_eq!(parse_element("1/t", &c).unwrap().st(), Err(Error::NotFinite));
        let s = ctx("levicivita");
        assert_eq!(parse_element("3 + t + 5*t^2", &s).unwrap().st().unwrap(), q("3"));
    }

    #[test]
    fn functions_of_elements() {
        let c = ctx("laurent");
        let e = parse_element("exp(t)", &c).unwrap();
        assert_eq!(e.as_series().unwrap().coeff(&q("3")), q("1/6"));
        assert_eq!(parse_element("sqrt(9/4)", &ctx("q")).unwrap().to_string(), "3/2");
        assert!(matches!(parse_element("sqrt(2)", &ctx("q")), Err(Error::NotRepresentable(_))));
        assert!(matches!(parse_element("exp(t)", &ctx("ratfunc")), Err(Error::NotRepresentable(_))));
        assert!(matches!(parse_element("t", &ctx("q")), Err(Error::Parse { .. })));
    }

    #[test]
    fn bindings_and_cutoff() {
        let c = FieldContext::with_precision(FieldKind::Laurent, Precision::with_cutoff(q("4")));
        let mut vars = Bindings::new();
        vars.insert("u".into(), parse_element("1 - t", &c).unwrap());
        let x = parse_element_with("1/u", &c, &vars).unwrap();
        assert_eq!(x.to_string(), "1 + t + t^2 + t^3 + t^4 + O(t^>4)");
    }

    #[test]
    fn comparisons() {
        let c = ctx("puiseux");
        let a = parse_element("t^2", &c).unwrap();
        let b = parse_element("t", &c).unwrap();
        assert_eq!(a.compare(&b).unwrap(), Ordering::Less);
        let u = parse_element("1 + t + O(t^>1)", &c).unwrap();
        assert!(u.compare(&u).unwrap_err().is_unresolved());
    }
}
