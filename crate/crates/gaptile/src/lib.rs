#![forbid(unsafe_code)]

//! Spectral-gap tilings of the real line by perturbed integers.
//!
//! The pipeline: solve the nonlinear fixed-point equation `f + Rf = g` on the
//! circle ([`solver`]), read off the perturbation sequence `alpha(n)` from the
//! Fourier coefficients of the solution, form the translation set
//! `Lambda = { n + alpha(n) }` ([`tiling`]), and certify numerically that
//!
//! * the transform of the associated perturbation measure vanishes on a
//!   frequency gap around zero,
//! * every nonnegative bandlimited kernel whose transform fits inside that
//!   gap tiles the line at level one when translated along `Lambda`,
//! * `Lambda` is not periodic and has unbounded local complexity.
//!
//! [`ztile`] carries the companion theory on the integers: exact tiling
//! checks for finitely supported tiles, a DFT product criterion on cyclic
//! groups, and exhaustive complement search.

pub mod circle;
pub mod kernels;
pub mod solver;
pub mod tiling;
pub mod ztile;
