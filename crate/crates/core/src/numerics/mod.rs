//! Arbitrary-precision real evaluation: the [`HPReal`] type, elementary
//! transcendentals, q-Pochhammer symbols, adaptive summation and the
//! special values the identities are checked against.

mod hpreal;
mod qpoch;
mod special;
mod summation;
mod transcendental;

pub use hpreal::{EvalContext, HPReal};
pub use qpoch::{qpoch_num, qpoch_qpow, qpow, ShiftedInfProduct, Subscript, MAX_PRODUCT_FACTORS};
pub use special::{bernoulli, trigamma_bounded, trigamma_num, zeta3_bounded, zeta3_num};
pub use summation::{sum_until, Approx, MAX_TERMS, RATIO_WINDOW, SLOW_RATIO, SLOW_RUN_LIMIT};
pub use transcendental::{hp_constant_pi, hp_transcendental, ln2, pi, Transcendental};
