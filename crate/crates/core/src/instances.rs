//! Small reference instances used throughout the documentation, the CLI demos and the
//! test-suites.

use crate::model::{FinancialSystem, SystemBuilder};
use crate::numeric::{int, rat, Rational};

/// Six-bank acyclic system with two CDSes whose unique clearing vector is
/// `(2/3, 1, 2/3, 1, 1, 1)`. Banks 2 and 5 are CDS debtors without funding, so the system
/// is degenerate (evaluation is still well defined).
pub fn acyclic_cds_chain() -> FinancialSystem {
    SystemBuilder::new()
        .bank("1", int(1))
        .bank("2", int(0))
        .bank("3", int(0))
        .bank("4", int(1))
        .bank("5", int(0))
        .bank("6", int(1))
        .debt("1", "2", int(1))
        .debt("1", "3", rat(1, 2))
        .debt("3", "5", rat(1, 2))
        .debt("4", "6", rat(1, 2))
        .cds("2", "4", "3", rat(2, 3))
        .cds("5", "6", "4", int(1))
        .build()
        .expect("static instance is valid")
}

/// Eight-bank system whose unique clearing vector is irrational:
/// `r_2 = r_3 = r_6 = r_7 = 1 − √2/2`, the root in `[0,1]` of `2r² − 4r + 1 = 0`.
pub fn irrational_cycle() -> FinancialSystem {
    let mut b = SystemBuilder::new();
    for i in 1..=8 {
        let e = if i == 2 || i == 7 { rat(1, 2) } else { int(0) };
        b = b.bank(i.to_string(), e);
    }
    b.cds("2", "1", "6", int(1))
        .debt("2", "3", int(1))
        .debt("3", "4", int(1))
        .debt("6", "5", int(1))
        .debt("7", "6", int(1))
        .cds("7", "8", "3", int(1))
        .build()
        .expect("static instance is valid")
}

/// Six-bank dedicated-CDS-debtor system with three exact clearing vectors, parameterized
/// by `eps` (the small debt 5→6 has notional `4·eps`). For `eps = 1/100` the clearing
/// vectors are `(1,1,1,1,0,1)`, `(1, 48/49, 1, 1, 25/49, 1)` and `(1,0,1,1,1,1)`.
pub fn multiple_equilibria(eps: &Rational) -> FinancialSystem {
    SystemBuilder::new()
        .bank("1", int(1))
        .bank("2", int(0))
        .bank("3", int(0))
        .bank("4", int(1))
        .bank("5", int(0))
        .bank("6", int(0))
        .cds("1", "2", "5", int(1))
        .debt("2", "3", rat(1, 2))
        .cds("4", "5", "2", int(1))
        .debt("5", "6", int(4) * eps)
        .build()
        .expect("static instance is valid")
}

/// System with a weakly but not strongly switched cycle `(1, 2, 3, R)` whose clearing rate
/// of `R` is `(3 − √5)/2`. Bank `5` is a sink receiving bank 2's unit debt, which keeps
/// the reference bank 2 non-degenerate.
pub fn weakly_switched_cycle() -> FinancialSystem {
    SystemBuilder::new()
        .bank("R", int(0))
        .bank("1", int(1))
        .bank("2", int(0))
        .bank("3", int(1))
        .bank("4", int(0))
        .bank("5", int(0))
        .debt("1", "4", int(2))
        .debt("R", "4", int(2))
        .cds("1", "2", "R", int(1))
        .cds("3", "R", "2", int(1))
        .debt("2", "5", int(1))
        .build()
        .expect("static instance is valid")
}
