//! Exact symbolic substrate. Nothing in here ever rounds.

mod multipoly;
mod rat;
mod series;
mod unipoly;

pub use multipoly::{ratfunc_equal, Equality, Monomial, MultiPoly, RatFunc, Var};
pub use rat::{parse_rational, rat, BigRat};
pub use series::{qpoch_inf_series, series_eval, series_invert, QSeries};
pub use unipoly::{gaussian_binomial, qpoch_finite_poly, UniPoly};
