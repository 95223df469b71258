use super::netlist::{FeedForwardOp, Netlist};
use crate::cavity::ReflectionPair;
use crate::elements::apply_element;
use crate::error::{Error, Result};
use crate::spin::SpinState;
use crate::state::{HybridState, MeasurementOutcome};
use crate::scalar::Real;

/// One detector click and the spin state it leaves behind.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T> {
    pub label: String,
    pub probability: T,
    /// Unit-norm spin state after the outcome's corrections.
    pub state: SpinState<T>,
    /// Whether any correction other than the identity was applied.
    pub feedforward_applied: bool,
}

/// Every nonzero-probability outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<T> {
    pub outcomes: Vec<Outcome<T>>,
}

impl<T: Real> OutcomeDistribution<T> {
    /// Photon survival probability of the run.
    pub fn total_probability(&self) -> T {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    pub fn get(&self, label: &str) -> Option<&Outcome<T>> {
        self.outcomes.iter().find(|o| o.label == label)
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionTrace<T> {
    /// Hybrid state right after each named step, in netlist order.
    pub checkpoints: Vec<(String, HybridState<T>)>,
    /// State after the last element, before detection.
    pub final_state: HybridState<T>,
    /// Outcomes before the feed-forward corrections.
    pub raw_outcomes: Vec<MeasurementOutcome<T>>,
}

impl<T: Real> ExecutionTrace<T> {
    pub fn checkpoint(&self, name: &str) -> Option<&HybridState<T>> {
        self.checkpoints.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

pub fn execute<T: Real>(
    netlist: &Netlist,
    pair: &ReflectionPair<T>,
    spin_in: &SpinState<T>,
) -> Result<OutcomeDistribution<T>> {
    run(netlist, pair, spin_in, false).map(|(d, _)| d)
}

pub fn execute_traced<T: Real>(
    netlist: &Netlist,
    pair: &ReflectionPair<T>,
    spin_in: &SpinState<T>,
) -> Result<(OutcomeDistribution<T>, ExecutionTrace<T>)> {
    run(netlist, pair, spin_in, true)
}

/// Photon-and-spin state after the last element for a given spin input.
pub fn propagate<T: Real>(netlist: &Netlist, pair: &ReflectionPair<T>, spin_in: &SpinState<T>) -> Result<HybridState<T>> {
    check_input(netlist, spin_in)?;
    let mut state = HybridState::product(netlist.input_pol.vector(), netlist.input_mode.clone(), spin_in)?;
    for step in &netlist.steps {
        state = apply_element(&state, &step.element, pair)?;
    }
    Ok(state)
}

pub fn apply_feedforward<T: Real>(state: &SpinState<T>, ops: &[(usize, FeedForwardOp)]) -> Result<SpinState<T>> {
    let mut out = state.clone();
    for &(k, op) in ops {
        out = out.apply_single(k, &op.matrix())?;
    }
    Ok(out)
}

fn check_input<T: Real>(netlist: &Netlist, spin_in: &SpinState<T>) -> Result<()> {
    if spin_in.count() != netlist.spin_count {
        return Err(Error::WrongLength { expected: 1 << netlist.spin_count, found: spin_in.dim() });
    }
    let n = spin_in.norm_sqr();
    if (n - T::one()).abs() > T::norm_slack() * T::lit(100.0) {
        return Err(Error::NonUnitInput(n.as_f64()));
    }
    Ok(())
}

fn run<T: Real>(
    netlist: &Netlist,
    pair: &ReflectionPair<T>,
    spin_in: &SpinState<T>,
    traced: bool,
) -> Result<(OutcomeDistribution<T>, ExecutionTrace<T>)> {
    check_input(netlist, spin_in)?;
    let mut state = HybridState::product(netlist.input_pol.vector(), netlist.input_mode.clone(), spin_in)?;
    let mut checkpoints = Vec::new();
    for step in &netlist.steps {
        state = apply_element(&state, &step.element, pair)?;
        if let (true, Some(name)) = (traced, &step.checkpoint) {
            checkpoints.push((name.clone(), state.clone()));
        }
    }
    let raw = if state.norm_sqr() > T::zero() { state.measure_photon(&netlist.detectors)? } else { Vec::new() };
    let mut outcomes = Vec::with_capacity(raw.len());
    for m in &raw {
        let ops = netlist.feedforward_for(&m.label).unwrap_or(&[]);
        outcomes.push(Outcome {
            label: m.label.clone(),
            probability: m.probability,
            state: apply_feedforward(&m.state, ops)?,
            feedforward_applied: ops.iter().any(|(_, op)| *op != FeedForwardOp::I),
        });
    }
    let trace = ExecutionTrace { checkpoints, final_state: state, raw_outcomes: if traced { raw } else { Vec::new() } };
    Ok((OutcomeDistribution { outcomes }, trace))
}
