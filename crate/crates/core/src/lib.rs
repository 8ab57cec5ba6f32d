//! Clearing engine, structural analyzer and instance compiler for financial networks with
//! debt contracts and credit default swaps (CDSes).
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`numeric`] | exact rationals, quadratic surds, the [`numeric::Scalar`] trait |
//! | [`model`] | financial systems, the clearing map, recovery-vector verification |
//! | [`analysis`] | contract/auxiliary graphs, switch classes, switched cycles, SCCs, DOT |
//! | [`solvers`] | acyclic, branch-enumeration, SCC and iterative clearing solvers |
//! | [`circuits`] | arithmetic circuits, interval bounds, the normalization pipeline |
//! | [`compiler`] | the gadget catalog and the circuit-to-network compiler |
//! | [`fragments`] | fragment algebra, rewriting, Möbius closed forms, instance emission |
//! | [`io`] | JSON formats for instances, vectors, circuits and port maps |
//! | [`cli`] | the `cdsclear` command-line front end |
//!
//! ```
//! use cdsclear::{instances, solvers};
//!
//! let sys = instances::acyclic_cds_chain();
//! let report = solvers::solve_acyclic(&sys).unwrap();
//! assert_eq!(report.solutions[0].to_string(), "(2/3, 1, 2/3, 1, 1, 1)");
//! ```

pub mod analysis;
pub mod circuits;
pub mod cli;
pub mod compiler;
pub mod error;
pub mod fragments;
pub mod instances;
pub mod io;
pub mod model;
pub mod numeric;
pub mod solvers;

pub use error::{Error, Result};
pub use model::{FinancialSystem, Mode, Number, RecoveryVector, SystemBuilder};
pub use numeric::{QuadraticSurd, Rational};
