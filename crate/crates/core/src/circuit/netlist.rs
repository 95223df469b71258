use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::elements::{Element, Sign};
use crate::error::NetlistError;
use crate::ops::{diag2, identity2, Op2};
use crate::scalar::{frac_1_sqrt_2, re, Real, C};
use crate::state::{Detector, ModeLabel};

/// Polarization the photon is injected with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputPolarization {
    R,
    L,
    /// (|R⟩ + |L⟩)/√2
    RPlusL,
    /// (|R⟩ − |L⟩)/√2
    RMinusL,
}

impl InputPolarization {
    pub fn vector<T: Real>(self) -> [C<T>; 2] {
        let h = frac_1_sqrt_2::<T>();
        match self {
            InputPolarization::R => [re(T::one()), re(T::zero())],
            InputPolarization::L => [re(T::zero()), re(T::one())],
            InputPolarization::RPlusL => [re(h), re(h)],
            InputPolarization::RMinusL => [re(h), re(-h)],
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            InputPolarization::R => "R",
            InputPolarization::L => "L",
            InputPolarization::RPlusL => "R+L",
            InputPolarization::RMinusL => "R-L",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "R" => Some(InputPolarization::R),
            "L" => Some(InputPolarization::L),
            "R+L" => Some(InputPolarization::RPlusL),
            "R-L" => Some(InputPolarization::RMinusL),
            _ => None,
        }
    }
}

/// Classical correction applied to one spin after a detector click.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedForwardOp {
    I,
    Z,
    NegZ,
}

impl FeedForwardOp {
    pub fn matrix<T: Real>(self) -> Op2<T> {
        match self {
            FeedForwardOp::I => identity2(),
            FeedForwardOp::Z => diag2(re(T::one()), re(-T::one())),
            FeedForwardOp::NegZ => diag2(re(-T::one()), re(T::one())),
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            FeedForwardOp::I => "I",
            FeedForwardOp::Z => "Z",
            FeedForwardOp::NegZ => "-Z",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "I" => Some(FeedForwardOp::I),
            "Z" => Some(FeedForwardOp::Z),
            "-Z" => Some(FeedForwardOp::NegZ),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub element: Element,
    pub checkpoint: Option<String>,
}

impl Step {
    pub fn new(element: Element) -> Self {
        Self { element, checkpoint: None }
    }
}

/// Corrections for one outcome label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedForward {
    pub label: String,
    pub ops: Vec<(usize, FeedForwardOp)>,
}

/// A sequential gate circuit: photon source, elements, detectors and
/// per-outcome spin corrections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    pub spin_count: usize,
    pub input_mode: ModeLabel,
    pub input_pol: InputPolarization,
    pub steps: Vec<Step>,
    pub detectors: Vec<Detector>,
    pub feedforward: Vec<FeedForward>,
}

/// Upper bound on the spin register size a netlist may declare.
pub const MAX_SPINS: usize = 16;

impl Netlist {
    pub fn feedforward_for(&self, label: &str) -> Option<&[(usize, FeedForwardOp)]> {
        self.feedforward.iter().find(|f| f.label == label).map(|f| f.ops.as_slice())
    }

    pub fn checkpoint_names(&self) -> impl Iterator<Item = &str> {
        self.steps.iter().filter_map(|s| s.checkpoint.as_deref())
    }

    /// Modes that may carry amplitude after the last element, found by
    /// propagating the input mode through every element.
    pub fn terminal_modes(&self) -> Result<BTreeSet<ModeLabel>, NetlistError> {
        let mut live: BTreeSet<ModeLabel> = BTreeSet::new();
        live.insert(self.input_mode.clone());
        for (i, step) in self.steps.iter().enumerate() {
            let e = &step.element;
            for m in e.input_modes() {
                if !live.contains(m) {
                    return Err(NetlistError::DanglingMode {
                        mode: m.to_string(),
                        context: format!("step {} ({}) reads a mode that carries no photon", i + 1, e),
                    });
                }
            }
            if e.consumes_inputs() {
                for m in e.input_modes() {
                    live.remove(m);
                }
            }
            for m in e.output_modes() {
                live.insert(m.clone());
            }
        }
        Ok(live)
    }

    /// Static checks: indices in range, distinct routing modes, detectors
    /// exactly on the terminal modes, unique labels, complete feed-forward.
    pub fn validate(&self) -> Result<(), NetlistError> {
        let n = self.spin_count;
        if n == 0 || n > MAX_SPINS {
            return Err(NetlistError::SpinIndexOutOfRange { index: n, count: MAX_SPINS, context: "spins".into() });
        }
        let mut checkpoints = HashSet::new();
        for step in &self.steps {
            let e = &step.element;
            if let Some(k) = e.spin_index() {
                if k >= n {
                    return Err(NetlistError::SpinIndexOutOfRange { index: k, count: n, context: e.to_string() });
                }
            }
            let routed = e.routed_modes();
            for (i, m) in routed.iter().enumerate() {
                if routed[..i].contains(m) {
                    return Err(NetlistError::RepeatedMode { mode: m.to_string(), context: e.to_string() });
                }
            }
            if let Some(name) = &step.checkpoint {
                if !checkpoints.insert(name.as_str()) {
                    return Err(NetlistError::DuplicateOutcomeLabel(format!("@{}", name)));
                }
            }
        }

        let terminal = self.terminal_modes()?;
        let mut labels = HashSet::new();
        for (i, d) in self.detectors.iter().enumerate() {
            if !labels.insert(d.label.as_str()) {
                return Err(NetlistError::DuplicateOutcomeLabel(d.label.clone()));
            }
            if !terminal.contains(&d.mode) {
                return Err(NetlistError::DanglingMode {
                    mode: d.mode.to_string(),
                    context: format!("detector {} watches a mode that is not an output", d.label),
                });
            }
            if self.detectors[..i].iter().any(|e| e.mode == d.mode && e.basis == d.basis) {
                return Err(NetlistError::DuplicateOutcomeLabel(d.label.clone()));
            }
        }
        for m in &terminal {
            if !self.detectors.iter().any(|d| &d.mode == m) {
                return Err(NetlistError::DanglingMode {
                    mode: m.to_string(),
                    context: "output mode is not watched by any detector".into(),
                });
            }
        }

        let mut seen = HashSet::new();
        for f in &self.feedforward {
            if !seen.insert(f.label.as_str()) {
                return Err(NetlistError::DuplicateOutcomeLabel(f.label.clone()));
            }
            if !labels.contains(f.label.as_str()) {
                return Err(NetlistError::UnknownOutcome(f.label.clone()));
            }
            for &(k, _) in &f.ops {
                if k >= n {
                    return Err(NetlistError::SpinIndexOutOfRange {
                        index: k,
                        count: n,
                        context: format!("feedforward {}", f.label),
                    });
                }
            }
        }
        for d in &self.detectors {
            if !seen.contains(d.label.as_str()) {
                return Err(NetlistError::UncoveredOutcome(d.label.clone()));
            }
        }
        Ok(())
    }
}

/// Serializes to the line DSL accepted by [`crate::circuit::parse_netlist`].
impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spins {}", self.spin_count)?;
        writeln!(f, "input {} {}", self.input_mode, self.input_pol.token())?;
        for step in &self.steps {
            write!(f, "{}", step.element)?;
            if let Some(name) = &step.checkpoint {
                write!(f, " @{}", name)?;
            }
            writeln!(f)?;
        }
        for d in &self.detectors {
            writeln!(f, "detector {} {} {}", d.label, d.mode, d.basis.symbol())?;
        }
        for ff in &self.feedforward {
            write!(f, "feedforward {}", ff.label)?;
            for (k, op) in &ff.ops {
                write!(f, " {} {}", k, op.token())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub(crate) fn sign_from_token(s: &str) -> Option<Sign> {
    match s {
        "+" => Some(Sign::Plus),
        "-" => Some(Sign::Minus),
        _ => None,
    }
}
