//! Exact arithmetic in computable non-Archimedean ordered fields.

pub mod error;
pub mod numeric;
pub mod order;

pub use error::{Error, Result};
pub use numeric::{ExtRational, Rational, Valuation};
pub use order::{Classification, FieldKind, OrderedField, Sign};
pub mod ratfunc;
pub mod series;

pub use ratfunc::{Poly, RatFunc};
pub use series::{ExponentGroup, Norm, Precision, Series};
pub mod calculus;
pub mod field;
pub mod lab;
pub mod syntax;
pub use field::{parse_element, parse_element_with, Element, FieldContext};
