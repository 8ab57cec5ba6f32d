//! The gadget catalog and the compiler from normalized circuits to financial systems.

pub mod compile;
pub mod gadgets;
pub mod harness;
pub mod net;

pub use compile::{compile_circuit, plant_inputs, GateBanks, PortMap};
pub use gadgets::{instantiate_gadget, GadgetKind, GadgetTemplate};
pub use harness::{
    build_harness, gadget_clearing_check, Harness, HarnessMethod, HarnessReport,
    FLOAT_SEMANTIC_TOLERANCE, HARNESS_EPS,
};
pub use net::{LocalContract, Network};
