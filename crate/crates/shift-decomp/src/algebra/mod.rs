//! Exact integer polynomials, real algebraic numbers, entropies, periodic
//! censuses and the Perron tests.

pub mod census;
pub mod crossover;
pub mod entropy;
pub mod epsilon;
pub mod modular;
pub mod perron;
pub mod poly;
pub mod real;

pub use census::{q_census, PeriodicCensus};
pub use crossover::{crossover, Crossover};
pub use entropy::{approx_base, compare, entropy, perron_root, EntropyValue};
pub use epsilon::{parse_entropy_expr, within, Certainty, Epsilon};
pub use modular::char_poly;
pub use perron::{is_perron, is_weak_perron};
pub use poly::IntPoly;
pub use real::AlgebraicReal;
