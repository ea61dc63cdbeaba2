//! Factorial moments of the Charlier, Meixner and Krawtchouk orthogonal
//! polynomial ensembles, computed along several independent routes.

pub mod error;
pub mod ensembles;
pub mod equilibrium;
pub mod hypergeo;
pub mod moments;
pub mod randomised;
pub mod schur;
pub mod suite;

pub use error::{Error, Result};
pub use hypergeo::{HighPrecReal, Precision, RatFunc, Rational};

pub type RationalPoly = hypergeo::Poly<Rational>;
pub type RationalFunction = hypergeo::RatFunc<Rational>;
