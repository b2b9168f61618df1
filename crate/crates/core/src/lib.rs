//! Exact and high-precision verification of a family of q-series identities
//! around the series 3n+2 over (3/2)_n^3 for pi^2/4: the underlying WZ
//! certificate, two earlier q-analogues, a q-analogue with a free parameter
//! `k`, and the classical limits it produces (trigamma, pi, zeta(3)).
//!
//! The crate is split into four layers:
//!
//! - [`exact`]: big rationals, sparse polynomials and rational functions in
//!   the formal variables `Q`, `X = q^n`, `Y = q^k`, univariate polynomials
//!   and truncated power series in `q`.
//! - [`numerics`]: a binary floating-point [`numerics::HPReal`] with
//!   per-value precision, transcendental functions, q-Pochhammer symbols and
//!   an adaptive summation engine.
//! - [`wz`]: the WZ pair `(F, G = R F)` and the exact/numeric checks built
//!   on it.
//! - [`identities`]: the registry of named identities and their
//!   verification reports.

pub mod error;
pub mod exact;
pub mod identities;
pub mod numerics;
pub mod wz;

pub use error::{Error, Result};
