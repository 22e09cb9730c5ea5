//! Fractional factorization of the quantum fractional oscillator.
//!
//! The Hamiltonian `H = -d^α/dx^α + x²` (with `1 < α ≤ 2`) is handled in the
//! momentum representation, where it becomes the second-order operator
//! `|k|^α - d²/dk²`. Every state produced by the ladder construction lives in
//! the closed family
//!
//! ```text
//! f(k) = (Σ c_j |k|^{p_j} sgn(k)^{s_j}) · exp(-2|k|^{α/2+1}/(α+2)),   k ≠ 0
//! ```
//!
//! which [`powerexp`] manipulates exactly (up to floating-point coefficients).
//! [`operators`] realizes the factors `A`, `B`, the Hamiltonian and the
//! operator-valued factorization energy on that family, [`ladder`] generates
//! states and their k-dependent energies, and [`spectral`] provides the
//! numeric grid layer used to cross-check everything and to produce
//! position-space wavefunctions.

mod alpha;
mod error;

pub mod ladder;
pub mod operators;
pub mod powerexp;
pub mod spectral;

pub use alpha::LevyIndex;
pub use error::{Error, Result};

pub use num_complex::Complex64 as C64;
