//! Exact symbolic engine for the relative chiral de Rham complex on a
//! polynomial coordinate chart.
//!
//! The engine works over a sparse super-commutative jet ring with exact
//! rational coefficients and provides two independent algorithms for the
//! n-th products of the free-field vertex algebra, the classical and chiral
//! Cartan operators, connection-complex differentials with their gluing
//! isomorphisms, and the coisson (vertex Poisson) structure of the
//! associated graded.  Every identity is checked exactly; there are no
//! tolerances anywhere.

pub mod cartan;
pub mod check;
pub mod coisson;
pub mod gaussmanin;
pub mod series;
pub mod span;
pub mod superjet;
pub mod vertex;

pub use check::{CheckFailure, CheckResult};
pub use superjet::{Generator, Kind, Monomial, Parity, Q, State, StateParity};
