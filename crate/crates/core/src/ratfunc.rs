//! The ordered field `K(t)` of rational functions over `Q`.
//!
//! `f > 0` iff the product of the lowest-order coefficients of numerator and
//! denominator is positive, which is the same as `f(ε) > 0` for all small
//! enough rational `ε > 0`. The valuation is `v(P/Q) = ord(P) - ord(Q)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ExtRational, Rational, Valuation};
use crate::order::{OrderedField, Sign};
use crate::series::Series;

/// Polynomial over `Q`, stored sparsely as degree → nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "BTreeMap<u32, Rational>", into = "BTreeMap<u32, Rational>")]
pub struct Poly {
    coeffs: BTreeMap<u32, Rational>,
}

impl From<BTreeMap<u32, Rational>> for Poly {
    fn from(mut coeffs: BTreeMap<u32, Rational>) -> Poly {
        coeffs.retain(|_, c| !c.is_zero());
        Poly { coeffs }
    }
}

impl From<Poly> for BTreeMap<u32, Rational> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::monomial(c, 0)
    }

    pub fn monomial(c: Rational, degree: u32) -> Poly {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(degree, c);
        }
        Poly { coeffs }
    }

    /// Dense coefficients, lowest degree first.
    pub fn from_coeffs<I: IntoIterator<Item = Rational>>(coeffs: I) -> Poly {
        Poly {
            coeffs: coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(d, c)| (d as u32, c))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn coeff(&self, degree: u32) -> Rational {
        self.coeffs.get(&degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn ord(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn lowest_coeff(&self) -> Option<&Rational> {
        self.coeffs.values().next()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.values().next_back()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|(d, a)| (*d, a * c)).collect(),
        }
    }

    fn mul_monomial(&self, c: &Rational, degree: u32) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|(d, a)| (d + degree, a * c)).collect(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        // Horner over the dense range of degrees.
        let Some(deg) = self.degree() else {
            return Rational::zero();
        };
        let mut acc = Rational::zero();
        for d in (0..=deg).rev() {
            acc = &acc * x;
            if let Some(c) = self.coeffs.get(&d) {
                acc += c;
            }
        }
        acc
    }

    /// Euclidean division over `Q`. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading_coeff().unwrap().clone();
        let mut quot = Poly::zero();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff().unwrap() / &lc;
            rem = &rem - &divisor.mul_monomial(&c, rd - dd);
            quot.coeffs.insert(rd - dd, c);
        }
        (quot, rem)
    }

    /// Integer coefficients (lowest degree first) of the associate with
    /// content 1 and positive leading coefficient, after removing the
    /// factor `t^ord`.
    fn primitive_dense(&self) -> Vec<BigInt> {
        let low = self.ord().unwrap_or(0);
        let high = self.degree().unwrap_or(0);
        let lcm = self.coeffs.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut dense = vec![BigInt::zero(); (high - low + 1) as usize];
        for (d, c) in &self.coeffs {
            dense[(d - low) as usize] = c.numer() * &(&lcm / c.denom());
        }
        make_primitive(&mut dense);
        dense
    }

    /// Primitive greatest common divisor (integer content 1, positive
    /// leading coefficient), via the primitive polynomial remainder
    /// sequence over `Z`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (Some(oa), Some(ob)) = (self.ord(), other.ord()) else {
            let nonzero = if self.is_zero() { other } else { self };
            if nonzero.is_zero() {
                return Poly::zero();
            }
            let ord = nonzero.ord().unwrap();
            return from_dense(&nonzero.primitive_dense(), ord);
        };
        let shift = oa.min(ob);
        let (da, db) = (self.degree().unwrap() - oa, other.degree().unwrap() - ob);
        if da == 0 || db == 0 {
            return Poly::monomial(Rational::one(), shift);
        }
        let mut a = self.primitive_dense();
        let mut b = other.primitive_dense();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            if b.len() == 1 {
                return Poly::monomial(Rational::one(), shift);
            }
            let mut r = pseudo_rem(&a, &b);
            make_primitive(&mut r);
            a = b;
            b = r;
        }
        from_dense(&a, shift)
    }

    /// Smallest radius `ρ > 0` such that the polynomial has no root with
    /// `0 < |z| < ρ`: `|a_m| / (|a_m| + max_{i>m} |a_i|)` where `a_m` is the
    /// lowest nonzero coefficient.
    pub fn root_free_radius(&self) -> Option<Rational> {
        let low = self.lowest_coeff()?.abs();
        let high = self
            .coeffs
            .values()
            .skip(1)
            .map(Rational::abs)
            .max()?;
        Some(&low / &(&low + &high))
    }

    fn fmt_with(&self, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.coeffs.iter().enumerate() {
            let c_abs = c.abs();
            let body = match (*d, c_abs.is_one()) {
                (0, _) => c_abs.to_string(),
                (1, true) => var.to_string(),
                (1, false) => format!("{c_abs}*{var}"),
                (_, true) => format!("{var}^{d}"),
                (_, false) => format!("{c_abs}*{var}^{d}"),
            };
            match (i == 0, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Drops high zero coefficients, divides by the content and makes the
/// leading coefficient positive.
fn make_primitive(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return;
    }
    let content = if v.last().unwrap().is_negative() { -content } else { content };
    if !content.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &content;
        }
    }
}

/// `lc(b)^k · a mod b` over `Z`, coefficients lowest degree first.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lc = b.last().expect("nonzero divisor");
    let mut r = a.to_vec();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= lc;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &lr * bc;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

fn from_dense(v: &[BigInt], shift: u32) -> Poly {
    Poly {
        coeffs: v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32 + shift, Rational::from_bigint(c.clone())))
            .collect(),
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut coeffs = self.coeffs.clone();
        for (d, c) in &rhs.coeffs {
            let entry = coeffs.entry(*d).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(d);
            }
        }
        Poly { coeffs }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut coeffs: BTreeMap<u32, Rational> = BTreeMap::new();
        for (da, ca) in &self.coeffs {
            for (db, cb) in &rhs.coeffs {
                *coeffs.entry(da + db).or_insert_with(Rational::zero) += &(ca * cb);
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Poly { coeffs }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with("t", f)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// An element `num/den` of `K(t)`, kept in lowest terms with the
/// lowest-order coefficient of `den` equal to 1, so that equal functions
/// have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RatFuncRepr")]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

#[derive(Deserialize)]
struct RatFuncRepr {
    num: Poly,
    den: Poly,
}

impl TryFrom<RatFuncRepr> for RatFunc {
    type Error = Error;
    fn try_from(r: RatFuncRepr) -> Result<RatFunc> {
        RatFunc::new(r.num, r.den)
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        if den.degree() == Some(0) {
            let c = den.coeff(0).inv()?;
            return Ok(RatFunc { num: num.scale(&c), den: Poly::constant(Rational::one()) });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead = den.lowest_coeff().unwrap().inv()?;
        num = num.scale(&lead);
        den = den.scale(&lead);
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc {
            num: p,
            den: Poly::constant(Rational::one()),
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn constant(c: Rational) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The generator `t`.
    pub fn t() -> RatFunc {
        RatFunc::from_poly(Poly::monomial(Rational::one(), 1))
    }

    /// `c·t^n` for any integer `n`.
    pub fn monomial(c: Rational, n: i64) -> RatFunc {
        if n >= 0 {
            RatFunc::from_poly(Poly::monomial(c, n as u32))
        } else {
            RatFunc {
                num: Poly::constant(c),
                den: Poly::monomial(Rational::one(), (-n) as u32),
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn powi(&self, n: i64) -> Result<RatFunc> {
        if n < 0 {
            return self.inv()?.powi(-n);
        }
        let mut result = RatFunc::constant(Rational::one());
        for _ in 0..n {
            result = &result * self;
        }
        Ok(result)
    }

    pub fn sign(&self) -> Sign {
        match self.num.lowest_coeff() {
            None => Sign::Zero,
            // The denominator's lowest coefficient is normalized to 1.
            Some(c) => Sign::of_rational(c),
        }
    }

    pub fn compare(&self, other: &RatFunc) -> Ordering {
        (self - other).sign().to_ordering()
    }

    pub fn valuation(&self) -> Valuation {
        match (self.num.ord(), self.den.ord()) {
            (Some(n), Some(d)) => ExtRational::Finite(Rational::from(n as i64 - d as i64)),
            _ => ExtRational::Infinity,
        }
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.num.eval(x).checked_div(&self.den.eval(x))
    }

    /// Radius `ρ` such that neither numerator nor denominator vanishes on
    /// `(0, ρ)`, hence the sign of `f(ε)` is constant there.
    pub fn sign_stable_radius(&self) -> Rational {
        [&self.num, &self.den]
            .into_iter()
            .filter_map(Poly::root_free_radius)
            .min()
            .unwrap_or_else(Rational::one)
    }

    /// Laurent expansion at `t = 0`, known exactly up to `cutoff`. Functions
    /// whose denominator is a monomial expand exactly.
    pub fn to_series(&self, cutoff: &Rational) -> Series {
        if self.is_zero() {
            return Series::zero();
        }
        let shift = self.den.ord().unwrap();
        if self.den.is_monomial() {
            let c = self.den.lowest_coeff().unwrap();
            return Series::exact(self.num.terms().map(|(d, a)| {
                (Rational::from(d as i64 - shift as i64), a / c)
            }));
        }
        // num/den = t^(-shift) · num / d(t) with d(0) = 1; long division in
        // increasing powers: q_k = n_k - Σ_{j≥1} d_j q_{k-j}.
        let d0 = self.den.lowest_coeff().unwrap().clone();
        let reduced_den: Vec<(u32, Rational)> = self
            .den
            .terms()
            .skip(1)
            .map(|(d, c)| (d - shift, c / &d0))
            .collect();
        let max_k = (cutoff + &Rational::from(shift as i64)).floor();
        let mut q: Vec<Rational> = Vec::new();
        let mut k: u32 = 0;
        while BigInt::from(k) <= max_k {
            let mut c = &self.num.coeff(k) / &d0;
            for (j, dj) in &reduced_den {
                if *j <= k {
                    c -= &(dj * &q[(k - j) as usize]);
                }
            }
            q.push(c);
            k += 1;
        }
        Series::from_terms(
            q.into_iter()
                .enumerate()
                .map(|(k, c)| (Rational::from(k as i64 - shift as i64), c)),
            ExtRational::Finite(cutoff.clone()),
        )
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl OrderedField for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }

    fn one() -> Self {
        RatFunc::constant(Rational::one())
    }

    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }

    fn sign(&self) -> Result<Sign> {
        Ok(RatFunc::sign(self))
    }

    fn from_rational(q: &Rational) -> Self {
        RatFunc::constant(q.clone())
    }

    fn valuation(&self) -> Result<Valuation> {
        Ok(RatFunc::valuation(self))
    }

    fn compare(&self, other: &Self) -> Result<Ordering> {
        Ok(RatFunc::compare(self, other))
    }
}

/// Text form in `t`: `(1 + t)/(t^2 - t^3)`.
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = Poly::constant(Rational::one());
        if self.den == one {
            if self.num.coeffs.len() > 1 {
                write!(f, "{}", self.num)
            } else {
                self.num.fmt_with("t", f)
            }
        } else {
            let num = if self.num.coeffs.len() > 1 {
                format!("({})", self.num)
            } else {
                self.num.to_string()
            };
            let den = if self.den.coeffs.len() > 1 || self.den.lowest_coeff().is_some_and(|c| !c.is_one()) {
                format!("({})", self.den)
            } else {
                self.den.to_string()
            };
            write!(f, "{num}/{den}")
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}
