//! Optical and spin elements of the gate circuits.

use std::fmt;

use crate::cavity::{scattering_operator, ReflectionPair, ScatteringConvention};
use crate::error::StateError;
use crate::ops::{diag2, hadamard, unitarity_defect4, Op2};
use crate::scalar::{re, Real};
use crate::state::{Collision, HybridState, ModeLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One step of a circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    /// Polarizing beam splitter: R transmits, L reflects.
    Pbs { input: ModeLabel, transmit: ModeLabel, reflect: ModeLabel },
    /// ±-PBS: |+⟩ transmits, |−⟩ reflects.
    PmPbs { input: ModeLabel, plus: ModeLabel, minus: ModeLabel },
    /// Half-wave plate at 22.5°, a Hadamard on polarization.
    Hwp { mode: ModeLabel },
    /// Wave plate, mirror, wave plate: net Hadamard on polarization.
    WpMirror { mode: ModeLabel },
    /// Balanced beam splitter; the `in_b` port picks up the minus sign.
    Bs { in_a: ModeLabel, in_b: ModeLabel, out_a: ModeLabel, out_b: ModeLabel },
    /// Hadamard on a spin.
    SpinH { spin: usize },
    /// σ_z (`Plus`) or −σ_z (`Minus`) on a spin.
    SpinZ { spin: usize, sign: Sign },
    /// Reflection off the cavity holding `spin`.
    Cavity { spin: usize, mode: ModeLabel },
    /// Lossless reroute of both polarizations.
    Switch { from: ModeLabel, to: ModeLabel },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormClass {
    Unitary,
    SubUnitary,
}

impl Element {
    pub fn keyword(&self) -> &'static str {
        match self {
            Element::Pbs { .. } => "PBS",
            Element::PmPbs { .. } => "PMPBS",
            Element::Hwp { .. } => "HWP",
            Element::WpMirror { .. } => "WPM",
            Element::Bs { .. } => "BS",
            Element::SpinH { .. } => "SH",
            Element::SpinZ { .. } => "SZ",
            Element::Cavity { .. } => "CAV",
            Element::Switch { .. } => "SW",
        }
    }

    /// Modes the element reads from.
    pub fn input_modes(&self) -> Vec<&ModeLabel> {
        match self {
            Element::Pbs { input, .. } | Element::PmPbs { input, .. } => vec![input],
            Element::Hwp { mode } | Element::WpMirror { mode } | Element::Cavity { mode, .. } => vec![mode],
            Element::Bs { in_a, in_b, .. } => vec![in_a, in_b],
            Element::Switch { from, .. } => vec![from],
            Element::SpinH { .. } | Element::SpinZ { .. } => vec![],
        }
    }

    /// Modes carrying amplitude after the element.
    pub fn output_modes(&self) -> Vec<&ModeLabel> {
        match self {
            Element::Pbs { transmit, reflect, .. } => vec![transmit, reflect],
            Element::PmPbs { plus, minus, .. } => vec![plus, minus],
            Element::Hwp { mode } | Element::WpMirror { mode } | Element::Cavity { mode, .. } => vec![mode],
            Element::Bs { out_a, out_b, .. } => vec![out_a, out_b],
            Element::Switch { to, .. } => vec![to],
            Element::SpinH { .. } | Element::SpinZ { .. } => vec![],
        }
    }

    /// Whether the input modes are emptied (routed elsewhere).
    pub fn consumes_inputs(&self) -> bool {
        matches!(self, Element::Pbs { .. } | Element::PmPbs { .. } | Element::Bs { .. } | Element::Switch { .. })
    }

    pub fn spin_index(&self) -> Option<usize> {
        match self {
            Element::SpinH { spin } | Element::SpinZ { spin, .. } | Element::Cavity { spin, .. } => Some(*spin),
            _ => None,
        }
    }

    /// Modes that must be pairwise distinct for the element to make sense.
    pub fn routed_modes(&self) -> Vec<&ModeLabel> {
        match self {
            Element::Pbs { input, transmit, reflect } => vec![input, transmit, reflect],
            Element::PmPbs { input, plus, minus } => vec![input, plus, minus],
            Element::Bs { in_a, in_b, out_a, out_b } => vec![in_a, in_b, out_a, out_b],
            Element::Switch { from, to } => vec![from, to],
            _ => vec![],
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.keyword())?;
        match self {
            Element::Pbs { input, transmit, reflect } => write!(f, " {} {} {}", input, transmit, reflect),
            Element::PmPbs { input, plus, minus } => write!(f, " {} {} {}", input, plus, minus),
            Element::Hwp { mode } | Element::WpMirror { mode } => write!(f, " {}", mode),
            Element::Bs { in_a, in_b, out_a, out_b } => write!(f, " {} {} {} {}", in_a, in_b, out_a, out_b),
            Element::SpinH { spin } => write!(f, " {}", spin),
            Element::SpinZ { spin, sign } => write!(f, " {} {}", spin, sign.symbol()),
            Element::Cavity { spin, mode } => write!(f, " {} {}", spin, mode),
            Element::Switch { from, to } => write!(f, " {} {}", from, to),
        }
    }
}

fn projector_r<T: Real>() -> Op2<T> {
    diag2(re(T::one()), re(T::zero()))
}

fn projector_l<T: Real>() -> Op2<T> {
    diag2(re(T::zero()), re(T::one()))
}

fn projector_pm<T: Real>(minus: bool) -> Op2<T> {
    let h = re(T::lit(0.5));
    let o = if minus { -h } else { h };
    [[h, o], [o, h]]
}

fn scaled_identity<T: Real>(k: T) -> Op2<T> {
    diag2(re(k), re(k))
}

/// Apply one element. The cavity uses the full-complex operator of `pair`;
/// pass `pair.with_convention(..)` to select a convention. An input mode the
/// state has never seen carries zero amplitude and passes through.
pub fn apply_element<T: Real>(
    state: &HybridState<T>,
    e: &Element,
    pair: &ReflectionPair<T>,
) -> Result<HybridState<T>, StateError> {
    if let Some(k) = e.spin_index() {
        if k >= state.spin_count() {
            return Err(StateError::SpinIndexOutOfRange { index: k, count: state.spin_count() });
        }
    }
    let h = T::FRAC_1_SQRT_2();
    let present = |m: &ModeLabel| state.has_mode(m);
    match e {
        Element::Pbs { input, transmit, reflect } if present(input) => state.split_mode(
            input,
            &[(transmit.clone(), projector_r()), (reflect.clone(), projector_l())],
            Collision::Sum,
        ),
        Element::PmPbs { input, plus, minus } if present(input) => state.split_mode(
            input,
            &[(plus.clone(), projector_pm(false)), (minus.clone(), projector_pm(true))],
            Collision::Sum,
        ),
        Element::Hwp { mode } | Element::WpMirror { mode } if present(mode) => state.apply_pol_op(mode, &hadamard()),
        Element::Bs { in_a, in_b, out_a, out_b } => {
            let mut s = state.clone();
            if s.has_mode(in_a) {
                s = s.split_mode(
                    in_a,
                    &[(out_a.clone(), scaled_identity(h)), (out_b.clone(), scaled_identity(h))],
                    Collision::Sum,
                )?;
            }
            if s.has_mode(in_b) {
                s = s.split_mode(
                    in_b,
                    &[(out_a.clone(), scaled_identity(h)), (out_b.clone(), scaled_identity(-h))],
                    Collision::Sum,
                )?;
            }
            Ok(s)
        }
        Element::SpinH { spin } => state.apply_spin_op(*spin, &hadamard()),
        Element::SpinZ { spin, sign } => {
            let s = match sign {
                Sign::Plus => T::one(),
                Sign::Minus => -T::one(),
            };
            state.apply_spin_op(*spin, &diag2(re(s), re(-s)))
        }
        Element::Cavity { spin, mode } if present(mode) => {
            state.apply_joint_pol_spin_op(mode, *spin, &scattering_operator(pair, ScatteringConvention::FullComplex))
        }
        Element::Switch { from, to } if present(from) => {
            state.split_mode(from, &[(to.clone(), scaled_identity(T::one()))], Collision::Sum)
        }
        _ => Ok(state.clone()),
    }
}

/// Whether an element can lose norm for the given reflection pair.
pub fn element_norm_class<T: Real>(e: &Element, pair: &ReflectionPair<T>) -> NormClass {
    match e {
        Element::Cavity { .. } => {
            let op = scattering_operator(pair, ScatteringConvention::FullComplex);
            if unitarity_defect4(&op) <= T::norm_slack() {
                NormClass::Unitary
            } else {
                NormClass::SubUnitary
            }
        }
        _ => NormClass::Unitary,
    }
}
