//! Exact computations for the level-0 and level-1 modules of the quantum affine
//! algebra of `sl2`: evaluation modules, the function-space realization of their
//! tensor products, cycles and intertwiners, Fock modules, characters and paths.

#![allow(clippy::needless_range_loop, clippy::suspicious_arithmetic_impl)]

pub mod algebra;
pub mod characters;
pub mod combinat;
pub mod crystal;
pub mod cycles;
pub mod error;
pub mod evalmodule;
pub mod fock;
pub mod funcspace;
pub mod intertwiner;
pub mod ledger;

pub use algebra::{GaussPoly, GaussRational, MPoly, Mono, MonoMap, QLaurent, QScalar, Rational};
pub use characters::BiSeries;
pub use crystal::PathElement;
pub use error::{Error, Result};
pub use evalmodule::{Sign, SignString, TensorVec};
pub use fock::{FockState, Level};
pub use funcspace::{FElement, GradedTable};
pub use ledger::{Ledger, LedgerEntry, Unit};
