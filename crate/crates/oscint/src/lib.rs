//! Numerical machinery for generalized Fresnel integrals and the extended
//! stationary phase method.
//!
//! The library is organized around the oscillatory integral
//!
//! ```text
//! Os-∫₀^∞ e^{±i x^p} x^{q-1} dx  =  p⁻¹ e^{±iπq/(2p)} Γ(q/p),   p > 0, q > 0,
//! ```
//!
//! understood as the cutoff-regularized limit lim_{ε→0} ∫₀^∞ e^{±ix^p} x^{q-1}
//! χ(εx) dx for any Schwartz cutoff χ with χ(0) = 1. Modules:
//!
//! * [`special`]: complex Gamma function (Lanczos), Euler Beta, Gamma residues.
//! * [`fresnel`]: closed forms, meromorphic continuation in q, poles and
//!   residues, the generalized Beta function, and full-line expansion
//!   coefficients.
//! * [`cutoff`]: the built-in Schwartz cutoffs (gaussian, sech, bump) with
//!   exact derivative evaluators of every order.
//! * [`quad`]: Gauss-Kronrod panel quadrature for complex-valued integrands
//!   and oscillation-aware panel generation.
//! * [`regularize`]: the ε→0 regularization engine (integration-by-parts
//!   preconditioning plus Richardson extrapolation) and the independent
//!   rotated-contour and Abel-damping oracles.
//! * [`amplitude`]: Schwartz amplitudes with exact Taylor data at 0.
//! * [`stationary`]: half-line and full-line asymptotic expansions in λ,
//!   quadrature oracles, and empirical decay/remainder order fits.
//! * [`quadratic`]: multivariate quadratic phases: signature/determinant,
//!   expansion coefficients from truncated Taylor tables, and the
//!   Fresnel-Fourier identity check.

pub mod amplitude;
pub mod cutoff;
pub mod error;
pub mod fresnel;
pub mod quad;
pub mod quadratic;
pub mod regularize;
pub mod special;
pub mod stationary;

pub use error::{Error, Result};
pub use fresnel::Sign;

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;
