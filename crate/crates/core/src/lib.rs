//! Construction and growth certification of a Yetter–Drinfeld 1-cocycle on
//! the Podleś sphere.
//!
//! The crate is layered bottom-up: [`scalars`] holds the q-number arithmetic
//! at arbitrary precision, [`uq_irreps`] the finite-dimensional
//! representations and the twisted element `B_t`, [`ladder`] the
//! infinite-dimensional basic modules, [`askey_wilson`] the orthogonal
//! polynomials that measure growth, and [`cocycle`] ties them together.
//! [`verify`] runs every module's invariants as one suite.

pub mod askey_wilson;
pub mod cocycle;
pub mod error;
pub mod ladder;
pub mod linalg;
pub mod parallel;
pub mod poly;
pub mod scalars;
pub mod uq_irreps;
pub mod verify;

pub use error::{Error, Result};
pub use parallel::Exec;
pub use scalars::{Complex, ParamContext, Real};

/// Library version, echoed into every output file of the command-line tool.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
