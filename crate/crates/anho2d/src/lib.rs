//! Exact spectral data for a family of complex two-dimensional anharmonic
//! oscillators.
//!
//! The Hamiltonian family is
//! `H = -4 d2/dzdzb + lambda^2 z zb + 2 lambda zb F'(zb)` with a polynomial
//! interaction `F(zb)`, acting on functions `P(z, zb) * W` with the weight
//! `W = exp(-lambda/2 z zb - F(zb))`. Its spectrum is equidistant and the
//! Hamiltonian is non-diagonalizable: each excited level carries a Jordan
//! cell of associated functions. This crate constructs all of that exactly
//! over arbitrary-precision rationals and validates it against an independent
//! numerical quadrature.
//!
//! Modules:
//! - [`rational`], [`poly`]: the exact coefficient field and bivariate
//!   Laurent-polynomial algebra.
//! - [`model`]: model parameters and the conjugated operator algebra
//!   (ladders, Hamiltonian) on weighted polynomials.
//! - [`states`]: the equidistant spectrum and the eigenfunction tower.
//! - [`jordan`]: construction and verification of Jordan chains of
//!   associated functions for the quartic interaction.
//! - [`moments`]: closed-form Gaussian moments and the bilinear scalar
//!   product, Gram matrices and the block-Jordan matrix of `H`.
//! - [`quad`]: floating-point quadrature and finite-difference oracles.

pub mod model;
pub mod poly;
pub mod rational;
pub mod testkit;

pub use model::{AnsatzFn, ModelError, ModelParams, QuarticCoeffs};
pub use poly::{Exponents, LaurentBiPoly, PolyError};
pub use rational::{CRat, Rat, C64};
