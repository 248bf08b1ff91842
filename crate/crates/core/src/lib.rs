//! Exact-arithmetic resolution of singularities for three input classes:
//! binomial ideals (combinatorial centers), toric fans (star subdivision),
//! and plane curves (point blow-ups). All three share one blow-up engine and
//! one chart-tree/divisor bookkeeping layer, and everything is computed over
//! `Q` or `F_p` with no floating point anywhere.

pub mod arith;
pub mod binomial;
pub mod blowup;
pub mod coeff;
pub mod curve;
pub mod error;
pub mod field;
pub mod lattice;
pub mod parse;
pub mod poly;
pub mod ratlin;
pub mod ring;
pub mod toric;
pub mod tree;
pub mod univar;
pub mod verify;

pub use error::{Error, Result};
pub use field::FieldSpec;
pub use poly::{Monomial, Order, Polynomial};
pub use ring::PolyRing;
