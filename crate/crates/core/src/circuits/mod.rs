//! Arithmetic circuits over the basis `{+, −, ·, max, min, |·−·|, √, constants}`, their
//! evaluation, interval bounds and the normalization pipeline producing circuits whose
//! every signal lies in `[0,1]`.

pub mod eval;
pub mod interval;
pub mod ir;
pub mod pipeline;

pub use eval::{
    eval_circuit, eval_circuit_f64, eval_gates, eval_gates_f64, eval_is_exact, output_distance,
    Signal, SQRT_PRECISION_BITS,
};
pub use interval::{
    exponent_for, gate_interval, signal_bound, signal_bound_with_output_range, Interval,
    SignalBound,
};
pub use ir::{Circuit, CircuitBuilder, Gate, GateKind};
pub use pipeline::{
    check_normalized, eliminate_min_max, nonnegative_constants, normalize_pipeline, range_reduce,
    scale_constants, split_signs, split_signs_instrumented, split_values, top_abs_diff, SplitPoint,
    CERTIFICATION_SLACK_BITS,
};
