//! Simulation of photon-mediated CNOT, Toffoli and Fredkin gates on electron
//! spins in quantum dots embedded in single-side optical microcavities.
//!
//! The numerical core is generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`); the aliases at the crate root fix it to `f64`.
//!
//! ```
//! use qdcavity::{builtin_netlist, execute, GateKind, Pair, Spins};
//!
//! let netlist = builtin_netlist(GateKind::Cnot);
//! let input = Spins::basis(2, 0b10); // |↓↑⟩
//! let dist = execute(&netlist, &Pair::ideal(), &input).unwrap();
//! for outcome in &dist.outcomes {
//!     assert!((outcome.state.amplitude(0b11).norm() - 1.0).abs() < 1e-12);
//! }
//! ```

pub mod cavity;
pub mod circuit;
pub mod elements;
pub mod error;
pub mod format;
pub mod gates;
pub mod metrics;
pub mod ops;
pub mod scalar;
pub mod spin;
pub mod state;

pub use cavity::{
    dephasing_factor, ideal_reflection_pair, reflection_coefficient, reflection_pair, scattering_operator, CavityParams,
    DephasingParams, ReflectionPair, ScatteringConvention,
};
pub use circuit::{
    apply_feedforward, execute, execute_traced, parse_netlist, propagate, ExecutionTrace, FeedForward, FeedForwardOp,
    InputPolarization, Netlist, Outcome, OutcomeDistribution, Step,
};
pub use elements::{apply_element, element_norm_class, Element, NormClass, Sign};
pub use error::{CavityError, Error, NetlistError, Result, StateError};
pub use gates::{
    builtin_netlist, ideal_gate_matrix, ideal_output, verify_random_inputs, verify_truth_table, GateKind,
    RandomCheckReport, TruthTableReport,
};
pub use metrics::{
    closed_form_efficiency, closed_form_fidelity, closed_form_fidelity_squared, fidelity_breakdown, gate_metrics,
    ideal_limit_report, simulated_efficiency, simulated_fidelity, sweep, AxisSpec, ClosedFormComparison,
    FidelityBreakdown, GateMetrics, PointParams, SweepGrid, SweepInput, CSV_HEADER,
};
pub use scalar::{Real, C};
pub use spin::{Spin, SpinState};
pub use state::{BasisKet, Collision, Detector, HybridState, MeasurementOutcome, ModeLabel, PmBasis, Polarization};

pub type Complex64 = C<f64>;
pub type State = HybridState<f64>;
pub type Spins = SpinState<f64>;
pub type Pair = ReflectionPair<f64>;
pub type Params = CavityParams<f64>;
pub type Metrics = GateMetrics<f64>;
pub type Grid = SweepGrid<f64>;
