//! Exact symbolic kernel: rationals, multivariate polynomials and rational
//! functions, Poisson brackets, the Weyl algebra and truncated series.

pub mod matrix;
pub mod poisson;
pub mod poly;
pub mod rat;
pub mod ratfunc;
pub mod series;
pub mod upoly;
pub mod var;
pub mod weyl;

pub use matrix::QMatrix;
pub use poisson::{poisson_bracket, reduce_mod_ideal, substitute_all, PoissonStructure};
pub use poly::{Monomial, Poly};
pub use rat::{format_rat, parse_rat, rat, ratio, Rat};
pub use ratfunc::RatFunc;
pub use series::Series;
pub use upoly::UPoly;
pub use var::Var;
pub use weyl::WeylElement;
