//! Weierstrass-type functions on ℝ^d, their harmonic extensions to the upper
//! half-space, and fractal-dimension analysis of the resulting gradient
//! fields.
//!
//! The crate is organized around a single concrete function representation —
//! finite trigonometric polynomials ([`trig`]) — whose half-space extensions
//! are exact ([`field`]). On top of those sit the N-adic cube machinery
//! ([`lattice`]), the stopping-time Cantor construction with dimension
//! lower bounds ([`stopping`]), weak quasi-regularity estimation ([`qr`]) and
//! incremental-quotient / vertical-ray analysis ([`slow_points`]). The
//! [`cli`] module wires everything into a batch front end.

pub mod cli;
pub mod config;
pub mod error;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod qr;
pub mod sampling;
pub mod report;
pub mod slow_points;
pub mod stopping;
pub mod trig;

pub use error::{Error, Result};
pub use field::{HarmonicField, HarmonicJet, PoissonField, WeierstrassField};
pub use lattice::{CarlesonBox, NadicCube};
pub use trig::TrigPolynomial;
