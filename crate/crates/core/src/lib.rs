//! Elliptic and quasi-elliptic fibrations of the supersingular K3 surface of Artin
//! invariant 1 in characteristic 3.
//!
//! Everything is exact: scalars live in F₉ = F₃[i]/(i² + 1), coefficients of the
//! Weierstrass models are polynomials in `t`, and lattice data is integral or
//! rational.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod lattice;
pub mod model;
pub mod mordell;
pub mod neighbor;
pub mod tate;

pub use error::{Error, Result};
