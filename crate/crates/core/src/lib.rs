//! Exact computation with ADHM data.
//!
//! The crate works over the rationals throughout. The main entry points are
//! [`AdhmDatum`] for the data and its stability theory, [`classify`] for
//! the Jacobian and stabilizer tests, [`strata`] for constructive samplers,
//! [`monad`] for the ADHM complex on the projective plane and [`uhlenbeck`]
//! for the decomposition of stable solutions.

pub mod classify;
pub mod datum;
pub mod error;
pub mod experiments;
pub mod io;
pub mod monad;
pub mod ratmat;
pub mod strata;
pub mod sweep;
pub mod uhlenbeck;

pub use classify::{classify, ClassificationReport};
pub use datum::{is_morphism, AdhmDatum, BlockForm, CommutingPair, TypeVector};
pub use error::{Error, Result};
pub use ratmat::{Matrix, Scalar, Subspace};
