//! Exact arithmetic substrate: rationals, dense polynomials, reduced rational
//! functions and truncated power series.

pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;

pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{parse_rat, pow, rat, ratio, to_pq, BigRat};
pub use series::FormalSeries;
