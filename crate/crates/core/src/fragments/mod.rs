//! Fragment algebra for strongly switched cycles: the fragment catalog, merging and cycle
//! closure, coefficient assignment, the rewriting rules, Möbius transfer maps with their
//! Fibonacci closed form, and emission of concrete instances whose clearing vectors are
//! irrational.
//!
//! ```
//! use cdsclear::fragments::{assign_arithmetic, solve_cycle_closed_form, FragmentString};
//!
//! let cycle = FragmentString::parse("g1a.g1a").unwrap().close_cycle().unwrap();
//! let rate = solve_cycle_closed_form(&assign_arithmetic(&cycle).unwrap()).unwrap();
//! assert_eq!(rate.to_string(), "(3 - 1*sqrt(5))/2");
//! ```

pub mod emit;
pub mod kinds;
pub mod moebius;
pub mod rewrite;

pub use emit::{emit_financial_system, emit_with_closed_form, junction_id};
pub use kinds::{
    assign_arithmetic, close_cycle, merge, Family, Fragment, FragmentKind, FragmentString, Variant,
};
pub use moebius::{
    compose, compose_cycle, cycle_transfer_maps, fibonacci, fibonacci_map, fibonacci_rate,
    transfer_map, MoebiusTransform,
};
pub use rewrite::{rewrite, rewrite_to_canonical, solve_cycle_closed_form};
