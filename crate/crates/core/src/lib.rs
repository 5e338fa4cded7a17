//! Exact radius bounds for balls that contain every bounded connected
//! component of, or meet every connected component of, real algebraic and
//! semi-algebraic sets defined by integer polynomials.
//!
//! Two routes are provided:
//!
//! * [`bounds`]: closed-form radii depending only on the number of variables,
//!   the degree, the coefficient bitsize and the number of polynomials;
//! * [`pipeline`]: per-instance certificates obtained by deforming the input,
//!   building critical-point systems in special Groebner form ([`sgb`]),
//!   taking characteristic polynomials of their multiplication matrices
//!   ([`linalg`]) and bounding the resulting univariate polynomials
//!   ([`univar`]).
//!
//! [`harness`] holds brute-force oracles used to check certificates
//! empirically, and [`instance`] the JSON instance format.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod instance;
pub mod linalg;
pub mod matrix;
pub mod pipeline;
pub mod poly;
pub mod sgb;
pub mod univar;

pub use error::{Error, Result};
pub use matrix::PolyMatrix;
pub use poly::{bit, bit_u64, var_list, IntPoly, Rational, Vars};
