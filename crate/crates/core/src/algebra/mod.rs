//! Scalars, polynomials and exact linear algebra.

pub mod gauss;
pub mod laurent;
pub mod linalg;
pub mod mpoly;
pub mod qnumber;
pub mod rational;
pub mod scalar;

pub use gauss::{GaussPoly, GaussRational};
pub use laurent::QLaurent;
pub use mpoly::{MPoly, MPolyJson, Mono, MonoMap};
pub use qnumber::{gauss_binomial, q_factorial, q_int};
pub use rational::Rational;
pub use scalar::QScalar;
