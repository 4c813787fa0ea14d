//! Numerical laboratory for the eigenfunctions `F_ρ` of the dilation operator
//! `Df(x) = -x f'(x)` attached to nontrivial zeta zeros, the mollifier
//! `δ_{l,F_ρ}` and the truncated Poisson-summation reconstruction.
//!
//! Modules are layered bottom-up:
//!
//! * [`quadrature`] and [`special`] are the numerical primitives.
//! * [`zeros`] certifies zeta zeros on the critical line.
//! * [`eta`] is the self-Fourier kernel `η(x) = 8πx²(πx² − 3/2)e^{−πx²}`.
//! * [`eigen`], [`delta`] and [`reconstruction`] evaluate `F_ρ`, `δ_{l,F_ρ}`
//!   and the reconstruction residual.
//!
//! All evaluations are pure. Grid sweeps go through [`exec::Exec`], which
//! runs on rayon when the `parallel` feature is enabled.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod delta;
pub mod eigen;
pub mod error;
pub mod eta;
pub mod exec;
pub mod quadrature;
pub mod reconstruction;
pub mod special;
pub mod sum;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Universal complex scalar for `s`, `ρ` and function values.
pub type ComplexValue = Complex64;
