//! Truncated generalized power series in `t` with rational exponents.
//!
//! One representation serves the Laurent field (integer exponents), the
//! Puiseux field (exponents with a bounded denominator) and rational
//! truncations of the Levi-Civita field. A [`Series`] is a finite list of
//! terms plus a cutoff: every exponent up to and including the cutoff is
//! known exactly, anything beyond it is unknown. A cutoff of `∞` marks an
//! element known exactly.
//!
//! Arithmetic propagates cutoffs conservatively:
//!
//! * `x + y` is known up to `min(cx, cy)`;
//! * `x * y` is known up to `min(cx + ν(y), cy + ν(x))`;
//! * `1 / x` with `x = a·t^e·(1 + w)` is known up to `cx - 2e`;
//! * `x^(1/k)` is known up to `e/k + (cx - e)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ExtRational, Rational, Valuation};
use crate::order::{FieldKind, OrderedField, Sign};

/// Truncation settings for operations whose exact result is an infinite
/// series (inverses, roots, transcendental functions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    /// Absolute exponent up to which expansions of exact inputs are carried.
    pub cutoff: Rational,
    /// Hard ceiling on the number of terms (and expansion steps).
    pub max_terms: usize,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            cutoff: Rational::from(16),
            max_terms: 512,
        }
    }
}

impl Precision {
    pub fn with_cutoff(cutoff: Rational) -> Self {
        Precision {
            cutoff,
            ..Precision::default()
        }
    }
}

/// The value group a series' exponents live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExponentGroup {
    /// `Z`: Laurent series.
    Integer,
    /// `(1/n)Z`: Puiseux series with a fixed denominator.
    BoundedDenominator(u32),
    /// `Q`: Puiseux series of any denominator and Levi-Civita truncations.
    Rational,
}

impl ExponentGroup {
    pub fn for_field(field: FieldKind) -> Option<ExponentGroup> {
        match field {
            FieldKind::Laurent => Some(ExponentGroup::Integer),
            FieldKind::Puiseux(Some(n)) => Some(ExponentGroup::BoundedDenominator(n)),
            FieldKind::Puiseux(None) | FieldKind::LeviCivita => Some(ExponentGroup::Rational),
            FieldKind::Rationals | FieldKind::RatFunc => None,
        }
    }

    pub fn contains(&self, e: &Rational) -> bool {
        match self {
            ExponentGroup::Integer => e.is_integer(),
            ExponentGroup::BoundedDenominator(n) => (e * &Rational::from(*n as i64)).is_integer(),
            ExponentGroup::Rational => true,
        }
    }

    pub fn check(&self, x: &Series) -> Result<()> {
        match x.terms.iter().find(|(e, _)| !self.contains(e)) {
            None => Ok(()),
            Some((e, _)) => Err(Error::ExponentGroupViolation(format!(
                "exponent {e} is not in the {} exponent group",
                self.name()
            ))),
        }
    }

    fn name(&self) -> String {
        match self {
            ExponentGroup::Integer => "integer".into(),
            ExponentGroup::BoundedDenominator(n) => format!("(1/{n})Z"),
            ExponentGroup::Rational => "rational".into(),
        }
    }
}

/// The valuation norm `||x|| = e^(-ν(x))`, kept exactly as its valuation.
/// Comparing norms is comparing valuations in reverse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Norm {
    pub valuation: Valuation,
    /// `e^(-ν)` as a float, for display only.
    pub display: f64,
}

impl Norm {
    pub fn from_valuation(valuation: Valuation) -> Norm {
        let display = match &valuation {
            ExtRational::Infinity => 0.0,
            ExtRational::Finite(v) => (-v.to_f64()).exp(),
        };
        Norm { valuation, display }
    }

    /// Exact comparison of two norms.
    pub fn cmp_exact(&self, other: &Norm) -> Ordering {
        other.valuation.cmp(&self.valuation)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    /// Strictly increasing exponents, nonzero coefficients, all `<= cutoff`.
    terms: Vec<(Rational, Rational)>,
    cutoff: ExtRational,
}

impl Series {
    /// Builds a series from arbitrary terms: sorts, merges equal exponents,
    /// drops zero coefficients and anything beyond the cutoff.
    pub fn from_terms<I>(terms: I, cutoff: ExtRational) -> Series
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut map: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if let ExtRational::Finite(cut) = &cutoff {
                if &e > cut {
                    continue;
                }
            }
            *map.entry(e).or_insert_with(Rational::zero) += &c;
        }
        Series {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            cutoff,
        }
    }

    pub fn exact<I>(terms: I) -> Series
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        Series::from_terms(terms, ExtRational::Infinity)
    }

    pub fn zero() -> Series {
        Series {
            terms: Vec::new(),
            cutoff: ExtRational::Infinity,
        }
    }

    pub fn constant(c: Rational) -> Series {
        Series::monomial(c, Rational::zero())
    }

    pub fn monomial(coeff: Rational, exponent: Rational) -> Series {
        Series::exact([(exponent, coeff)])
    }

    /// The generator `t`.
    pub fn t() -> Series {
        Series::monomial(Rational::one(), Rational::one())
    }

    /// `O(t^(>cutoff))`: a value known to vanish up to the cutoff.
    pub fn unknown_beyond(cutoff: Rational) -> Series {
        Series {
            terms: Vec::new(),
            cutoff: ExtRational::Finite(cutoff),
        }
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn cutoff(&self) -> &ExtRational {
        &self.cutoff
    }

    pub fn is_exact(&self) -> bool {
        self.cutoff.is_infinite()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    pub fn coeff(&self, exponent: &Rational) -> Rational {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(exponent))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Leading `(exponent, coefficient)` pair.
    pub fn leading(&self) -> Option<(&Rational, &Rational)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    /// Lowers the cutoff to `cutoff` (never raises it).
    pub fn truncate(&self, cutoff: &Rational) -> Series {
        let new_cut = self.cutoff.clone().min(ExtRational::Finite(cutoff.clone()));
        let terms = match &new_cut {
            ExtRational::Finite(c) => self.terms.iter().filter(|(e, _)| e <= c).cloned().collect(),
            ExtRational::Infinity => self.terms.clone(),
        };
        Series { terms, cutoff: new_cut }
    }

    fn unresolved(&self) -> Error {
        Error::UnresolvedAtTruncation {
            cutoff: self.cutoff.to_string(),
        }
    }

    /// `ν(x) = min supp(x)`.
    pub fn valuation(&self) -> Result<Valuation> {
        match (self.terms.first(), &self.cutoff) {
            (Some((e, _)), _) => Ok(ExtRational::Finite(e.clone())),
            (None, ExtRational::Infinity) => Ok(ExtRational::Infinity),
            (None, ExtRational::Finite(_)) => Err(self.unresolved()),
        }
    }

    /// Lower bound on the valuation: the exact one when a term is known,
    /// otherwise the cutoff.
    fn valuation_lower_bound(&self) -> ExtRational {
        match self.terms.first() {
            Some((e, _)) => ExtRational::Finite(e.clone()),
            None => self.cutoff.clone(),
        }
    }

    /// Sign of the leading coefficient; the positive cone is
    /// `{x : a_ν(x) > 0}`.
    pub fn sign(&self) -> Result<Sign> {
        match (self.terms.first(), &self.cutoff) {
            (Some((_, c)), _) => Ok(Sign::of_rational(c)),
            (None, ExtRational::Infinity) => Ok(Sign::Zero),
            (None, ExtRational::Finite(_)) => Err(self.unresolved()),
        }
    }

    /// `Equal` only for an exact zero difference; a difference vanishing up
    /// to a finite cutoff is `UnresolvedAtTruncation`.
    pub fn compare(&self, other: &Series) -> Result<Ordering> {
        (self - other).sign().map(Sign::to_ordering)
    }

    /// True when the two series agree on every exponent up to the smaller
    /// of their cutoffs.
    pub fn agrees_with(&self, other: &Series) -> bool {
        match (self - other).sign() {
            Ok(Sign::Zero) => true,
            Ok(_) => false,
            Err(_) => true,
        }
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series {
                terms: Vec::new(),
                cutoff: self.cutoff.clone(),
            };
        }
        Series {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
            cutoff: self.cutoff.clone(),
        }
    }

    /// Multiplication by `c·t^e`, exact.
    pub fn shift(&self, coeff: &Rational, exponent: &Rational) -> Series {
        let mut s = self.scale(coeff);
        for (e, _) in s.terms.iter_mut() {
            *e = &*e + exponent;
        }
        s.cutoff = s.cutoff.add_rational(exponent);
        s
    }

    /// Splits `x = a·t^e·(1 + w)` with `ν(w) > 0`.
    fn factor_leading(&self) -> Result<(Rational, Rational, Series)> {
        let (e, a) = match self.terms.first() {
            Some((e, a)) => (e.clone(), a.clone()),
            None if self.is_exact() => return Err(Error::DivisionByZero),
            None => return Err(self.unresolved()),
        };
        let inv_a = a.inv()?;
        let w = Series {
            terms: self.terms[1..]
                .iter()
                .map(|(ei, ci)| (ei - &e, ci * &inv_a))
                .collect(),
            cutoff: self.cutoff.add_rational(&-&e),
        };
        Ok((e, a, w))
    }

    /// Views a series with positive valuation as a power series in
    /// `s = t^step`, keeping the terms with exponent at most `limit`.
    pub(crate) fn on_lattice(&self, limit: &Rational, prec: &Precision) -> Result<Lattice> {
        let relevant: Vec<&(Rational, Rational)> = self.terms.iter().take_while(|(e, _)| e <= limit).collect();
        let denom = relevant.iter().fold(BigInt::from(1), |acc, (e, _)| acc.lcm(e.denom()));
        let d = Rational::from_bigint(denom);
        let steps = (limit * &d).floor();
        let steps = usize::try_from(&steps)
            .ok()
            .filter(|n| *n <= prec.max_terms.saturating_mul(64))
            .ok_or(Error::BudgetExceeded { budget: prec.max_terms })?;
        let terms = relevant
            .iter()
            .map(|(e, c)| ((e * &d).to_i64().expect("lattice index") as usize, c.clone()))
            .collect();
        Ok(Lattice { step: d.inv()?, steps, terms })
    }

    /// `(1 + w)^α` up to the relative cutoff `rel`, for `ν(w) > 0`, from
    /// `(1 + w)·g' = α·w'·g` on the lattice of `w`:
    /// `g_n = (1/n) Σ_k ((α + 1)k - n)·w_k·g_(n-k)`.
    fn binomial_series(w: &Series, alpha: &Rational, rel: &Rational, prec: &Precision) -> Result<Series> {
        let cutoff = ExtRational::Finite(rel.clone()).min(w.cutoff.clone());
        let limit = cutoff.finite().cloned().unwrap_or_else(|| rel.clone());
        let lat = w.on_lattice(&limit, prec)?;
        let alpha1 = alpha + &Rational::one();
        let mut g: Vec<Rational> = Vec::with_capacity(lat.steps + 1);
        g.push(Rational::one());
        for n in 1..=lat.steps {
            let mut acc = Rational::zero();
            for (k, wk) in &lat.terms {
                if *k > n {
                    break;
                }
                if g[n - k].is_zero() {
                    continue;
                }
                let factor = &(&alpha1 * &Rational::from(*k as i64)) - &Rational::from(n as i64);
                if !factor.is_zero() {
                    acc += &(&(&factor * wk) * &g[n - k]);
                }
            }
            g.push(&acc / &Rational::from(n as i64));
        }
        lat.series(g, cutoff, prec)
    }

    pub fn inv(&self) -> Result<Series> {
        self.inv_with(&Precision::default())
    }

    /// Multiplicative inverse through the geometric series of `1/(1 + w)`.
    /// Exact inputs with more than one term are expanded up to
    /// `max(prec.cutoff, -ν(x))`.
    pub fn inv_with(&self, prec: &Precision) -> Result<Series> {
        let (e, a, w) = self.factor_leading()?;
        let inv_a = a.inv()?;
        if w.is_exact_zero() {
            return Ok(Series::monomial(inv_a, -e));
        }
        let target = match &self.cutoff {
            ExtRational::Finite(c) => c - &(&e + &e),
            ExtRational::Infinity => prec.cutoff.clone().max(-&e),
        };
        let rel = &target + &e;
        let geometric = Series::binomial_series(&w, &-Rational::one(), &rel, prec)?;
        Ok(geometric.shift(&inv_a, &-e))
    }

    /// The `k`-th root with positive leading coefficient (odd `k` keeps the
    /// sign). The leading coefficient must have a rational `k`-th root.
    pub fn root(&self, k: u32, prec: &Precision) -> Result<Series> {
        if k == 0 {
            return Err(Error::Domain("zeroth root".into()));
        }
        if self.is_exact_zero() {
            return Ok(Series::zero());
        }
        let (e, a, w) = self.factor_leading()?;
        if a.is_negative() && k % 2 == 0 {
            return Err(Error::NotRepresentable(format!(
                "even root of an element with negative leading coefficient {a}"
            )));
        }
        let root_a = a.exact_root(k).ok_or_else(|| {
            Error::NotRepresentable(format!("the {k}-th root of {a} is irrational"))
        })?;
        let e_root = &e / &Rational::from(k as i64);
        if k == 1 {
            return Ok(self.clone());
        }
        if w.is_exact_zero() {
            return Ok(Series::monomial(root_a, e_root));
        }
        let target = match &self.cutoff {
            ExtRational::Finite(c) => &e_root + &(c - &e),
            ExtRational::Infinity => prec.cutoff.clone().max(e_root.clone()),
        };
        let rel = &target - &e_root;
        let binomial = Series::binomial_series(&w, &Rational::new(1, k as i64), &rel, prec)?;
        Ok(binomial.shift(&root_a, &e_root))
    }

    /// Integer power; negative exponents go through [`Series::inv_with`].
    pub fn powi(&self, n: i64, prec: &Precision) -> Result<Series> {
        if n < 0 {
            return self.inv_with(prec)?.powi(-n, prec);
        }
        let mut result = Series::constant(Rational::one());
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// `x^(p/q)` as `(x^(1/q))^p`.
    pub fn pow_rational(&self, exponent: &Rational, prec: &Precision) -> Result<Series> {
        let q = exponent.denom();
        let k = u32::try_from(q).map_err(|_| Error::NotRepresentable("root index too large".into()))?;
        let p = exponent
            .numer()
            .try_into()
            .map_err(|_| Error::NotRepresentable("exponent numerator too large".into()))?;
        self.root(k, prec)?.powi(p, prec)
    }

    pub fn norm(&self) -> Result<Norm> {
        self.valuation().map(Norm::from_valuation)
    }

    /// `d(x, y) = ||x - y||`.
    pub fn dist(&self, other: &Series) -> Result<Norm> {
        (self - other).norm()
    }

    /// Approximate value at a small positive `t`, for display.
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64() * t.powf(e.to_f64()))
            .sum()
    }
}

/// A series with positive valuation as a power series in `s = t^step`:
/// sparse `(index, coefficient)` terms, known up to index `steps`.
pub(crate) struct Lattice {
    pub step: Rational,
    pub steps: usize,
    pub terms: Vec<(usize, Rational)>,
}

impl Lattice {
    /// The series `Σ coeffs[n]·t^(n·step)`; more than `prec.max_terms`
    /// nonzero coefficients is a budget error.
    pub fn series(&self, coeffs: Vec<Rational>, cutoff: ExtRational, prec: &Precision) -> Result<Series> {
        if coeffs.iter().filter(|c| !c.is_zero()).count() > prec.max_terms {
            return Err(Error::BudgetExceeded { budget: prec.max_terms });
        }
        Ok(Series::from_terms(
            coeffs
                .into_iter()
                .enumerate()
                .map(|(n, c)| (&Rational::from(n as i64) * &self.step, c)),
            cutoff,
        ))
    }
}

impl Add<&Series> for &Series {
    type Output = Series;

    fn add(self, rhs: &Series) -> Series {
        let cutoff = self.cutoff.clone().min(rhs.cutoff.clone());
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let ord = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(rhs.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &rhs.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        if let ExtRational::Finite(c) = &cutoff {
            out.retain(|(e, _)| e <= c);
        }
        Series { terms: out, cutoff }
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        Series {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            cutoff: self.cutoff.clone(),
        }
    }
}

impl Sub<&Series> for &Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        self + &(-rhs)
    }
}

impl Mul<&Series> for &Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return Series::zero();
        }
        let cutoff = (&self.cutoff + &rhs.valuation_lower_bound())
            .min(&rhs.cutoff + &self.valuation_lower_bound());
        let mut acc: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea + eb;
                if let ExtRational::Finite(c) = &cutoff {
                    // Exponents of `rhs` increase, so the rest are beyond too.
                    if &e > c {
                        break;
                    }
                }
                *acc.entry(e).or_insert_with(Rational::zero) += &(ca * cb);
            }
        }
        Series {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            cutoff,
        }
    }
}

macro_rules! owned_ops {
    ($($imp:ident $method:ident),*) => {$(
        impl $imp<Series> for Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                (&self).$method(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

impl OrderedField for Series {
    fn zero() -> Self {
        Series::zero()
    }

    fn one() -> Self {
        Series::constant(Rational::one())
    }

    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }

    fn sign(&self) -> Result<Sign> {
        Series::sign(self)
    }

    fn from_rational(q: &Rational) -> Self {
        Series::constant(q.clone())
    }

    fn valuation(&self) -> Result<Valuation> {
        Series::valuation(self)
    }

    fn compare(&self, other: &Self) -> Result<Ordering> {
        Series::compare(self, other)
    }
}

fn fmt_exponent(e: &Rational) -> String {
    if e.is_integer() && !e.is_negative() {
        e.to_string()
    } else {
        format!("({e})")
    }
}

fn fmt_monomial(c: &Rational, e: &Rational) -> String {
    let c_abs = c.abs();
    if e.is_zero() {
        return c_abs.to_string();
    }
    let power = if e.is_one() {
        "t".to_string()
    } else {
        format!("t^{}", fmt_exponent(e))
    };
    if c_abs.is_one() {
        power
    } else {
        format!("{c_abs}*{power}")
    }
}

/// Text form, e.g. `3/2*t^(-1/2) + t + 5*t^(7/3) + O(t^>16)`; the trailing
/// `O(t^>c)` marks the cutoff of a truncated series.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let body = fmt_monomial(c, e);
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        match &self.cutoff {
            ExtRational::Infinity if first => f.write_str("0"),
            ExtRational::Infinity => Ok(()),
            ExtRational::Finite(c) => {
                if !first {
                    f.write_str(" + ")?;
                }
                write!(f, "O(t^>{})", fmt_exponent(c))
            }
        }
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    e: Rational,
    c: Rational,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    terms: Vec<TermRepr>,
    cutoff: ExtRational,
}

/// JSON form: `{"terms": [{"e": "p/q", "c": "p/q"}, ...], "cutoff": "p/q" | "inf"}`.
impl Serialize for Series {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    e: e.clone(),
                    c: c.clone(),
                })
                .collect(),
            cutoff: self.cutoff.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        Ok(Series::from_terms(
            repr.terms.into_iter().map(|t| (t.e, t.c)),
            repr.cutoff,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn ser(terms: &[(&str, &str)]) -> Series {
        Series::exact(terms.iter().map(|(e, c)| (q(e), q(c))))
    }

    fn trunc(terms: &[(&str, &str)], cutoff: &str) -> Series {
        Series::from_terms(terms.iter().map(|(e, c)| (q(e), q(c))), ExtRational::Finite(q(cutoff)))
    }

    #[test]
    fn addition_examples() {
        assert_eq!(&ser(&[("0", "1"), ("1", "1")]) + &ser(&[("0", "1"), ("1", "-1")]), ser(&[("0", "2")]));
        assert_eq!(
            &ser(&[("1/2", "1")]) + &ser(&[("1", "1")]),
            ser(&[("1/2", "1"), ("1", "1")])
        );
        // t^2 lies beyond the cutoff of the left operand.
        let sum = &trunc(&[("0", "1"), ("1", "1")], "1") + &ser(&[("2", "1")]);
        assert_eq!(sum, trunc(&[("0", "1"), ("1", "1")], "1"));
    }

    #[test]
    fn multiplication_examples() {
        let partial = trunc(&[("0", "1"), ("1", "1"), ("2", "1"), ("3", "1"), ("4", "1"), ("5", "1")], "5");
        let prod = &ser(&[("0", "1"), ("1", "-1")]) * &partial;
        assert_eq!(prod, trunc(&[("0", "1")], "5"));
        assert!((&ser(&[("1", "3")]) * &Series::zero()).is_exact_zero());
        assert_eq!(&ser(&[("1/2", "1")]) * &ser(&[("1/2", "1")]), Series::t());
    }

    #[test]
    fn product_cutoff_uses_valuations() {
        // (t + O(t^>3)) * t^(-2) is known up to 3 - 2 = 1.
        let x = trunc(&[("1", "1")], "3");
        let y = ser(&[("-2", "1")]);
        assert_eq!(*(&x * &y).cutoff(), ExtRational::Finite(q("1")));
    }

    #[test]
    fn inverse_examples() {
        let inv = ser(&[("0", "1"), ("1", "-1")]).inv().unwrap();
        for k in 0..=16 {
            assert_eq!(inv.coeff(&Rational::from(k)), Rational::one());
        }
        assert_eq!(*inv.cutoff(), ExtRational::Finite(q("16")));
        assert_eq!(Series::t().inv().unwrap(), ser(&[("-1", "1")]));
        assert_eq!(Series::zero().inv(), Err(Error::DivisionByZero));
        assert!(Series::unknown_beyond(q("3")).inv().unwrap_err().is_unresolved());
    }

    #[test]
    fn inverse_of_truncated_input_tracks_cutoff() {
        // x = t - t^2 + O(t^>4): 1/x known to 4 - 2 = 2.
        let x = trunc(&[("1", "1"), ("2", "-1")], "4");
        let inv = x.inv().unwrap();
        assert_eq!(*inv.cutoff(), ExtRational::Finite(q("2")));
        assert_eq!(inv, trunc(&[("-1", "1"), ("0", "1"), ("1", "1"), ("2", "1")], "2"));
    }

    #[test]
    fn sqrt_t_over_t_minus_t_squared() {
        let root = Series::t().root(2, &Precision::default()).unwrap();
        let denom = ser(&[("1", "1"), ("2", "-1")]);
        let value = &root * &denom.inv().unwrap();
        for n in -1..=8 {
            let e = &Rational::from(n) + &q("1/2");
            assert_eq!(value.coeff(&e), Rational::one(), "exponent {e}");
        }
        assert!(value.terms().iter().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn root_examples() {
        let prec = Precision::default();
        assert_eq!(ser(&[("2", "1")]).root(2, &prec).unwrap(), Series::t());
        let r = ser(&[("0", "1"), ("1", "1")]).root(2, &prec).unwrap();
        assert_eq!(r.coeff(&q("0")), q("1"));
        assert_eq!(r.coeff(&q("1")), q("1/2"));
        assert_eq!(r.coeff(&q("2")), q("-1/8"));
        assert_eq!(r.coeff(&q("3")), q("1/16"));
        assert!(matches!(
            Series::constant(q("-1")).root(2, &prec),
            Err(Error::NotRepresentable(_))
        ));
        assert!(matches!(
            Series::constant(q("2")).root(2, &prec),
            Err(Error::NotRepresentable(_))
        ));
        assert_eq!(Series::constant(q("-8")).root(3, &prec).unwrap(), Series::constant(q("-2")));
    }

    #[test]
    fn root_power_round_trip() {
        let prec = Precision::default();
        let x = ser(&[("2", "8"), ("5/2", "-1"), ("3", "7")]);
        let r = x.root(3, &prec).unwrap();
        let cubed = r.powi(3, &prec).unwrap();
        assert!(cubed.agrees_with(&x));
        assert!(matches!(cubed.cutoff(), ExtRational::Finite(_)));
    }

    #[test]
    fn valuations_and_norms() {
        let factorial_series = Series::exact((0..10).map(|n| {
            (&Rational::from(n) + &q("1/3"), crate::numeric::factorial(n as u32))
        }));
        assert_eq!(factorial_series.valuation().unwrap(), ExtRational::Finite(q("1/3")));
        assert_eq!(Series::zero().valuation().unwrap(), ExtRational::Infinity);
        assert_eq!(ser(&[("-1/2", "1"), ("1", "1")]).valuation().unwrap(), ExtRational::Finite(q("-1/2")));

        let n0 = Series::zero().norm().unwrap();
        assert_eq!(n0.valuation, ExtRational::Infinity);
        assert_eq!(n0.display, 0.0);
        let n2 = ser(&[("2", "1")]).norm().unwrap();
        assert_eq!(n2.valuation, ExtRational::Finite(q("2")));
        assert!((n2.display - (-2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn distances() {
        let x = ser(&[("0", "1"), ("1", "2")]);
        assert_eq!(x.dist(&x).unwrap().valuation, ExtRational::Infinity);
        let one = Series::constant(q("1"));
        assert_eq!(
            one.dist(&ser(&[("0", "1"), ("3", "1")])).unwrap().valuation,
            ExtRational::Finite(q("3"))
        );
        let partial = |n: i64| Series::exact((0..=n).map(|k| (Rational::from(k), q("1"))));
        for (n, m) in [(1, 4), (3, 7), (5, 6)] {
            assert_eq!(
                partial(n).dist(&partial(m)).unwrap().valuation,
                ExtRational::Finite(Rational::from(n + 1))
            );
        }
    }

    #[test]
    fn comparisons() {
        assert_eq!(ser(&[("1/2", "1")]).compare(&Series::t()).unwrap(), Ordering::Greater);
        let x = ser(&[("0", "3"), ("2", "1")]);
        assert_eq!(x.compare(&x).unwrap(), Ordering::Equal);
        let y = trunc(&[("0", "1"), ("1", "1")], "1");
        assert!(y.compare(&y).unwrap_err().is_unresolved());
    }

    #[test]
    fn exponent_groups() {
        let x = ser(&[("1/2", "1")]);
        assert!(ExponentGroup::Integer.check(&x).is_err());
        assert!(ExponentGroup::BoundedDenominator(4).check(&x).is_ok());
        assert!(ExponentGroup::BoundedDenominator(3).check(&x).is_err());
        assert!(ExponentGroup::Rational.check(&x).is_ok());
    }

    #[test]
    fn text_form() {
        let x = ser(&[("-1/2", "3/2"), ("1", "1"), ("7/3", "5")]);
        assert_eq!(x.to_string(), "3/2*t^(-1/2) + t + 5*t^(7/3)");
        assert_eq!(trunc(&[("0", "1"), ("1", "-1")], "1").to_string(), "1 - t + O(t^>1)");
        assert_eq!(Series::zero().to_string(), "0");
        assert_eq!(Series::unknown_beyond(q("-1/2")).to_string(), "O(t^>(-1/2))");
    }

    #[test]
    fn json_form() {
        let x = trunc(&[("-1/2", "3/2"), ("2", "-1")], "5");
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(
            json,
            r#"{"terms":[{"e":"-1/2","c":"3/2"},{"e":"2","c":"-1"}],"cutoff":"5"}"#
        );
        let back: Series = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn budget_is_enforced() {
        let prec = Precision {
            cutoff: q("100"),
            max_terms: 10,
        };
        let x = ser(&[("0", "1"), ("1", "1")]);
        assert_eq!(x.inv_with(&prec), Err(Error::BudgetExceeded { budget: 10 }));
    }
}
