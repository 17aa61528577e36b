//! Exact arithmetic: F₃/F₉ scalars, polynomials, rational functions, places.

pub mod field;
pub mod parse;
pub mod place;
pub mod poly;
pub mod rational;

pub use field::{Field, FieldKind, F9};
pub use parse::{parse_poly, parse_ratfunc, parse_ratfunc_in, parse_scalar};
pub use place::{
    laurent_expand, local_expand, local_poly, poly_valuation, roots_with_multiplicity, series_inverse, valuation,
    weighted_valuation, Place,
};
pub use poly::{poly_string, Poly, P9};
pub use rational::{ratfunc_string, RatFunc};
