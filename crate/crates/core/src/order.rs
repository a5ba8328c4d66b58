//! Ordered-field vocabulary shared by every field in the crate: sign,
//! absolute value, the infinitesimal / finite / infinitely-large
//! classification and infinitesimal closeness.
//!
//! Classification is decided through the valuation sign. For the fields
//! implemented here this is exact: `x` is infinitesimal iff `v(x) > 0` and
//! infinitely large iff `v(x) < 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Rational, Valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_rational(q: &Rational) -> Sign {
        match q.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    /// The ordering of `x` relative to zero.
    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

/// Arithmetic on borrowed operands, `&a + &b` and friends.
pub trait FieldOps<'a, T: 'a>:
    Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T> + Neg<Output = T>
{
}

impl<'a, T: 'a, R> FieldOps<'a, T> for R where
    R: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T> + Neg<Output = T>
{
}

/// Capabilities every ordered field implementation provides.
///
/// `sign` and `valuation` are fallible because a truncated series that
/// vanishes up to its cutoff has neither a known sign nor a known valuation.
pub trait OrderedField: Clone + PartialEq + fmt::Debug + fmt::Display
where
    for<'a> &'a Self: FieldOps<'a, Self>,
{
    fn zero() -> Self;

    fn one() -> Self;

    fn try_inv(&self) -> Result<Self>;

    fn sign(&self) -> Result<Sign>;

    /// The canonical, order-preserving embedding of `Q`.
    fn from_rational(q: &Rational) -> Self;

    fn valuation(&self) -> Result<Valuation>;

    fn from_natural(n: u64) -> Self {
        Self::from_rational(&Rational::from(n as i64))
    }

    /// `self` compared with `other`, i.e. the sign of `self - other`.
    fn compare(&self, other: &Self) -> Result<Ordering> {
        (self - other).sign().map(Sign::to_ordering)
    }
}

impl OrderedField for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn one() -> Self {
        <Rational as One>::one()
    }

    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }

    fn sign(&self) -> Result<Sign> {
        Ok(Sign::of_rational(self))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    /// Archimedean, so the valuation is trivial.
    fn valuation(&self) -> Result<Valuation> {
        Ok(if self.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(<Rational as Zero>::zero())
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Zero,
    NonzeroInfinitesimal,
    FiniteAppreciable,
    InfinitelyLarge,
}

impl Classification {
    /// Member of `I(K)`.
    pub fn is_infinitesimal(self) -> bool {
        matches!(self, Classification::Zero | Classification::NonzeroInfinitesimal)
    }

    /// Member of `F(K)`.
    pub fn is_finite(self) -> bool {
        !matches!(self, Classification::InfinitelyLarge)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Zero => "zero",
            Classification::NonzeroInfinitesimal => "nonzero infinitesimal",
            Classification::FiniteAppreciable => "finite appreciable",
            Classification::InfinitelyLarge => "infinitely large",
        })
    }
}

/// `|x| = max(-x, x)`.
pub fn abs<F: OrderedField>(x: &F) -> Result<F>
where
    for<'a> &'a F: FieldOps<'a, F>,
{
    Ok(match x.sign()? {
        Sign::Negative => -x,
        _ => x.clone(),
    })
}

pub fn classify<F: OrderedField>(x: &F) -> Result<Classification>
where
    for<'a> &'a F: FieldOps<'a, F>,
{
    Ok(match x.valuation()? {
        Valuation::Infinity => Classification::Zero,
        Valuation::Finite(v) => match v.signum() {
            1 => Classification::NonzeroInfinitesimal,
            0 => Classification::FiniteAppreciable,
            _ => Classification::InfinitelyLarge,
        },
    })
}

/// `x ≈ y`: the difference is infinitesimal.
pub fn infinitely_close<F: OrderedField>(x: &F, y: &F) -> Result<bool>
where
    for<'a> &'a F: FieldOps<'a, F>,
{
    classify(&(x - y)).map(Classification::is_infinitesimal)
}

/// Membership of `x` in the monad of `{s}`.
pub fn monad_member<F: OrderedField>(s: &F, x: &F) -> Result<bool>
where
    for<'a> &'a F: FieldOps<'a, F>,
{
    infinitely_close(x, s)
}

/// The fields the crate can compute in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    /// `Q`.
    Rationals,
    /// `K(t)`.
    RatFunc,
    /// `K<t^Z>`.
    Laurent,
    /// `K{{t}}`; the optional bound fixes the exponent denominator.
    Puiseux(Option<u32>),
    /// `K<t^R>`, with rational exponents.
    LeviCivita,
}

impl FieldKind {
    pub fn name(&self) -> String {
        match self {
            FieldKind::Rationals => "q".into(),
            FieldKind::RatFunc => "ratfunc".into(),
            FieldKind::Laurent => "laurent".into(),
            FieldKind::Puiseux(None) => "puiseux".into(),
            FieldKind::Puiseux(Some(n)) => format!("puiseux:{n}"),
            FieldKind::LeviCivita => "levicivita".into(),
        }
    }

    pub fn is_series(&self) -> bool {
        matches!(self, FieldKind::Laurent | FieldKind::Puiseux(_) | FieldKind::LeviCivita)
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl std::str::FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "q" | "rationals" | "rational" => FieldKind::Rationals,
            "ratfunc" | "k(t)" => FieldKind::RatFunc,
            "laurent" => FieldKind::Laurent,
            "puiseux" => FieldKind::Puiseux(None),
            "levicivita" | "levi-civita" => FieldKind::LeviCivita,
            other => match other.strip_prefix("puiseux:") {
                Some(n) => match n.parse::<u32>() {
                    Ok(n) if n > 0 => FieldKind::Puiseux(Some(n)),
                    _ => return Err(Error::parse(8, format!("bad Puiseux denominator {n:?}"))),
                },
                None => return Err(Error::parse(0, format!("unknown field {s:?}"))),
            },
        })
    }
}

/// Only `Q` carries the trivial valuation; every other registered field
/// contains the infinitesimal `t`.
pub fn is_archimedean(field: FieldKind) -> bool {
    matches!(field, FieldKind::Rationals)
}
