//! Fidelity and efficiency: simulated, closed-form, and swept over cavity parameters.

use std::fmt;

use rayon::prelude::*;

use crate::cavity::{dephasing_factor, reflection_pair, CavityParams, DephasingParams, ReflectionPair, ScatteringConvention};
use crate::circuit::{execute, propagate, Netlist};
use crate::error::{Error, Result};
use crate::format::sig9;
use crate::gates::{builtin_netlist, ideal_output, GateKind};
use crate::scalar::Real;
use crate::spin::SpinState;

/// Fidelity of one run under several conventions.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityBreakdown<T> {
    /// Photon survival probability.
    pub efficiency: T,
    /// Σ p_k F_k / Σ p_k over detector outcomes.
    pub conditioned: T,
    /// Σ p_k F_k, counting photon loss as failure.
    pub unconditioned: T,
    /// |⟨Ψ_ideal|Ψ_real⟩|² / ⟨Ψ_real|Ψ_real⟩ on the photon-spin state before detection.
    pub photon_inclusive: T,
    /// (label, probability, fidelity) per outcome.
    pub per_outcome: Vec<(String, T, T)>,
}

pub fn fidelity_breakdown<T: Real>(
    netlist: &Netlist,
    kind: GateKind,
    pair: &ReflectionPair<T>,
    input: &SpinState<T>,
) -> Result<FidelityBreakdown<T>> {
    let ideal = ideal_output(kind, input);
    let dist = execute(netlist, pair, input)?;
    let total = dist.total_probability();
    if dist.is_empty() || total <= T::zero() {
        return Err(Error::ZeroDetectionProbability);
    }
    let per_outcome: Vec<(String, T, T)> = dist
        .outcomes
        .iter()
        .map(|o| {
            let ov = ideal.overlap(&o.state)?;
            Ok((o.label.clone(), o.probability, ov * ov))
        })
        .collect::<Result<_>>()?;
    let unconditioned: T = per_outcome.iter().map(|(_, p, f)| *p * *f).sum();

    let real = propagate(netlist, pair, input)?;
    let reference = propagate(netlist, &ReflectionPair::ideal(), input)?;
    let amp = reference.inner_product(&real)?;
    let photon_inclusive = amp.norm_sqr() / real.norm_sqr();

    Ok(FidelityBreakdown {
        efficiency: total,
        conditioned: (unconditioned / total).min(T::one()),
        unconditioned,
        photon_inclusive,
        per_outcome,
    })
}

/// Detection-conditioned fidelity, probability-weighted over outcomes.
pub fn simulated_fidelity<T: Real>(kind: GateKind, pair: &ReflectionPair<T>, input: &SpinState<T>) -> Result<T> {
    Ok(fidelity_breakdown(&builtin_netlist(kind), kind, pair, input)?.conditioned)
}

/// Photon survival probability.
pub fn simulated_efficiency<T: Real>(kind: GateKind, pair: &ReflectionPair<T>, input: &SpinState<T>) -> Result<T> {
    let state = propagate(&builtin_netlist(kind), pair, input)?;
    Ok(state.norm_sqr())
}

fn printed_fidelity_parts<T: Real>(kind: GateKind, a: T, h: T) -> (T, T, T) {
    let one = T::one();
    let n = |x: f64| T::lit(x);
    match kind {
        GateKind::Cnot => {
            let num = one + n(2.0) * h + a * h;
            let den = (one + h).powi(2) + (one - a).powi(2) + h * h * (one - h).powi(2) + h * h * (one + a).powi(2);
            (n(0.5), num, den)
        }
        GateKind::Toffoli => {
            let num = n(3.0) + n(2.0) * a + h * (n(5.0) + h + a * (n(4.0) + a));
            let den = (one + h).powi(4)
                + n(2.0) * (h * h - one).powi(2)
                + n(2.0) * (h - one).powi(2) * (a - one).powi(2)
                + (a - one).powi(4)
                + n(2.0) * (a * a - one).powi(2)
                + n(4.0) * (one + h).powi(2) * (one + a * a)
                + h * h * ((h - one).powi(2) + (one + a).powi(2)).powi(2);
            (n(0.25), num, den)
        }
        GateKind::Fredkin => {
            let s2 = h * h + a * a;
            let num = n(4.0) * (one + h) * (one + a * h)
                + n(2.0) * (n(2.0) + a + h) * (n(2.0) + a * a + h * h)
                + (one + a) * (n(4.0) * h * h - h.powi(4) + n(2.0) * h.powi(3) * a + n(2.0) * h * a.powi(3) + a.powi(4));
            let tail = h.powi(8) - n(4.0) * h.powi(7) * a + n(4.0) * h.powi(3) * a.powi(5) + n(8.0) * h * h * a.powi(6)
                + n(4.0) * h * a.powi(7)
                + a.powi(8)
                - n(4.0) * h.powi(5) * a * (a * a - n(4.0))
                + n(8.0) * h.powi(6) * (a * a - one)
                - n(2.0) * h.powi(4) * (n(4.0) * a * a + a.powi(4) - n(8.0));
            let den = ((h - one).powi(2) + (one + a).powi(2)) * (n(4.0) + n(2.0) * (h - a).powi(2) + s2 * s2)
                + n(4.0) * ((one + h).powi(2) + (a - one).powi(2)) * (n(8.0) + n(2.0) * s2 * s2)
                + (n(2.0) + h * (h - n(2.0)) + a * (n(2.0) + a)) * tail;
            (n(0.125), num, den)
        }
    }
}

/// Fidelity formula exactly as published, with m0 = |r0| and mh = |rh|.
pub fn closed_form_fidelity<T: Real>(kind: GateKind, m0: T, mh: T) -> T {
    let (k, num, den) = printed_fidelity_parts(kind, m0, mh);
    k * num / den
}

/// The published formula with its numerator squared.
pub fn closed_form_fidelity_squared<T: Real>(kind: GateKind, m0: T, mh: T) -> T {
    let (k, num, den) = printed_fidelity_parts(kind, m0, mh);
    k * num * num / den
}

/// Published efficiency formula in terms of s = |r0|² + |rh|².
pub fn closed_form_efficiency<T: Real>(kind: GateKind, m0: T, mh: T) -> T {
    let s = m0 * m0 + mh * mh;
    let two = T::lit(2.0);
    match kind {
        GateKind::Cnot => (two + s).powi(2) / T::lit(16.0),
        GateKind::Toffoli => (two + s).powi(2) * (T::lit(6.0) + s) / T::lit(128.0),
        GateKind::Fredkin => (two + s) * (T::lit(4.0) + s * s) * (T::lit(12.0) + s * s) / T::lit(512.0),
    }
}

/// Dimensionless cavity parameters of one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams<T> {
    pub g_ratio: T,
    pub ks_ratio: T,
    pub gamma_ratio: T,
    pub detuning: T,
}

impl<T: Real> PointParams<T> {
    /// Reflection pair at this point; raw complex coefficients.
    pub fn pair(&self) -> Result<ReflectionPair<T>> {
        let p = CavityParams::from_ratios(self.g_ratio, self.ks_ratio, self.gamma_ratio)?;
        Ok(reflection_pair(&p, self.detuning)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateMetrics<T> {
    pub kind: GateKind,
    pub params: PointParams<T>,
    /// Raw reflection coefficients at the point.
    pub pair: ReflectionPair<T>,
    pub f_sim: T,
    pub eta_sim: T,
    pub f_closed: T,
    pub f_closed_squared: T,
    pub eta_closed: T,
    pub f_unconditioned: T,
    pub f_photon_inclusive: T,
    pub f_dephased: Option<T>,
}

pub const CSV_HEADER: [&str; 11] = [
    "gate",
    "g_over_kappa_plus_kappas",
    "kappas_over_kappa",
    "gamma_over_kappa",
    "abs_r0",
    "abs_rh",
    "F_sim",
    "F_closed",
    "eta_sim",
    "eta_closed",
    "F_dephased",
];

impl<T: Real> GateMetrics<T> {
    pub fn csv_record(&self) -> Vec<String> {
        let (m0, mh) = self.pair.moduli();
        let s = |x: T| sig9(x.as_f64());
        vec![
            self.kind.name().to_string(),
            s(self.params.g_ratio),
            s(self.params.ks_ratio),
            s(self.params.gamma_ratio),
            s(m0),
            s(mh),
            s(self.f_sim),
            s(self.f_closed),
            s(self.eta_sim),
            s(self.eta_closed),
            self.f_dephased.map(s).unwrap_or_default(),
        ]
    }
}

/// Every metric for one gate at one reflection pair. `pair` holds the raw
/// coefficients; `convention` decides what the simulation sees.
pub fn gate_metrics<T: Real>(
    netlist: &Netlist,
    kind: GateKind,
    params: PointParams<T>,
    pair: ReflectionPair<T>,
    convention: ScatteringConvention,
    input: &SpinState<T>,
    dephasing: Option<&DephasingParams<T>>,
) -> Result<GateMetrics<T>> {
    let effective = pair.with_convention(convention);
    let b = fidelity_breakdown(netlist, kind, &effective, input)?;
    let (m0, mh) = pair.moduli();
    Ok(GateMetrics {
        kind,
        params,
        pair,
        f_sim: b.conditioned,
        eta_sim: b.efficiency,
        f_closed: closed_form_fidelity(kind, m0, mh),
        f_closed_squared: closed_form_fidelity_squared(kind, m0, mh),
        eta_closed: closed_form_efficiency(kind, m0, mh),
        f_unconditioned: b.unconditioned,
        f_photon_inclusive: b.photon_inclusive,
        f_dephased: dephasing.map(|d| b.conditioned * dephasing_factor(d)),
    })
}

/// Inclusive range `min..=max` sampled at `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec<T> {
    pub min: T,
    pub max: T,
    pub steps: usize,
}

impl<T: Real> AxisSpec<T> {
    pub fn new(min: T, max: T, steps: usize) -> Result<Self> {
        let a = Self { min, max, steps };
        a.validate()?;
        Ok(a)
    }

    pub fn single(x: T) -> Self {
        Self { min: x, max: x, steps: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::InvalidGrid("axis bounds must be finite".into()));
        }
        if self.min < T::zero() {
            return Err(Error::InvalidGrid(format!("axis minimum {} is negative", self.min)));
        }
        if self.max < self.min {
            return Err(Error::InvalidGrid(format!("axis maximum {} is below minimum {}", self.max, self.min)));
        }
        match self.steps {
            0 => Err(Error::InvalidGrid("axis needs at least one step".into())),
            1 if self.min != self.max => Err(Error::InvalidGrid("a one-step axis needs min == max".into())),
            _ => Ok(()),
        }
    }

    pub fn values(&self) -> Vec<T> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = T::lit((self.steps - 1) as f64);
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.max } else { self.min + (self.max - self.min) * T::lit(i as f64) / last })
            .collect()
    }
}

/// Spin input used at every sweep point.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepInput<T> {
    Uniform,
    State(SpinState<T>),
}

impl<T: Real> SweepInput<T> {
    pub fn for_gate(&self, kind: GateKind) -> Result<SpinState<T>> {
        let n = kind.spin_count();
        match self {
            SweepInput::Uniform => Ok(SpinState::uniform(n)),
            SweepInput::State(s) if s.count() == n => Ok(s.clone()),
            SweepInput::State(s) => Err(Error::WrongLength { expected: 1 << n, found: s.dim() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid<T> {
    pub g: AxisSpec<T>,
    pub ks: AxisSpec<T>,
    pub gamma: T,
    pub detuning: T,
    pub gates: Vec<GateKind>,
    pub convention: ScatteringConvention,
}

impl<T: Real> SweepGrid<T> {
    /// 31 × 27 points over g/(κ+κ_s) ∈ [0, 2.4] and κ_s/κ ∈ [0, 1.3] at γ/κ = 0.1.
    pub fn default_for(gates: Vec<GateKind>) -> Self {
        Self {
            g: AxisSpec { min: T::zero(), max: T::lit(2.4), steps: 31 },
            ks: AxisSpec { min: T::zero(), max: T::lit(1.3), steps: 27 },
            gamma: T::lit(0.1),
            detuning: T::zero(),
            gates,
            convention: ScatteringConvention::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.g.validate()?;
        self.ks.validate()?;
        if !self.gamma.is_finite() || self.gamma < T::zero() {
            return Err(Error::InvalidGrid(format!("gamma ratio {} must be finite and >= 0", self.gamma)));
        }
        if !self.detuning.is_finite() {
            return Err(Error::InvalidGrid("detuning must be finite".into()));
        }
        if self.gates.is_empty() {
            return Err(Error::InvalidGrid("no gates selected".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len() * self.g.steps * self.ks.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Evaluate every grid point, ordered by gate, then coupling, then side leakage.
pub fn sweep<T: Real>(
    grid: &SweepGrid<T>,
    input: &SweepInput<T>,
    dephasing: Option<&DephasingParams<T>>,
) -> Result<Vec<GateMetrics<T>>> {
    grid.validate()?;
    let gs = grid.g.values();
    let ks = grid.ks.values();
    let mut out = Vec::with_capacity(grid.len());
    for &kind in &grid.gates {
        let netlist = builtin_netlist(kind);
        let state = input.for_gate(kind)?;
        let points: Vec<PointParams<T>> = gs
            .iter()
            .flat_map(|&g| {
                ks.iter().map(move |&k| PointParams { g_ratio: g, ks_ratio: k, gamma_ratio: grid.gamma, detuning: grid.detuning })
            })
            .collect();
        let rows: Vec<GateMetrics<T>> = points
            .par_iter()
            .map(|p| gate_metrics(&netlist, kind, *p, p.pair()?, grid.convention, &state, dephasing))
            .collect::<Result<_>>()?;
        out.extend(rows);
    }
    Ok(out)
}

/// Published closed forms against simulation at one pair of moduli.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormComparison<T> {
    pub kind: GateKind,
    pub m0: T,
    pub mh: T,
    pub f_sim: T,
    pub f_photon_inclusive: T,
    pub f_closed: T,
    pub f_closed_squared: T,
    pub eta_sim: T,
    pub eta_closed: T,
}

impl<T: Real> ClosedFormComparison<T> {
    /// Evaluated with the signed-moduli pair (−m0, +mh) and uniform input.
    pub fn at(kind: GateKind, m0: T, mh: T) -> Result<Self> {
        let netlist = builtin_netlist(kind);
        let input = SpinState::uniform(kind.spin_count());
        let b = fidelity_breakdown(&netlist, kind, &ReflectionPair::from_moduli(m0, mh), &input)?;
        Ok(Self {
            kind,
            m0,
            mh,
            f_sim: b.conditioned,
            f_photon_inclusive: b.photon_inclusive,
            f_closed: closed_form_fidelity(kind, m0, mh),
            f_closed_squared: closed_form_fidelity_squared(kind, m0, mh),
            eta_sim: b.efficiency,
            eta_closed: closed_form_efficiency(kind, m0, mh),
        })
    }

    /// The printed fidelity misses unity where the simulation reaches it.
    pub fn closed_form_inconsistent(&self, tol: T) -> bool {
        (self.f_sim - T::one()).abs() <= tol && (self.f_closed - T::one()).abs() > tol
    }
}

impl<T: Real> fmt::Display for ClosedFormComparison<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |x: T| sig9(x.as_f64());
        write!(
            f,
            "{} |r0|={} |rh|={}: F_sim={} F_pre={} F_closed={} F_closed_sq={} eta_sim={} eta_closed={}",
            self.kind,
            s(self.m0),
            s(self.mh),
            s(self.f_sim),
            s(self.f_photon_inclusive),
            s(self.f_closed),
            s(self.f_closed_squared),
            s(self.eta_sim),
            s(self.eta_closed)
        )?;
        if self.closed_form_inconsistent(T::lit(1e-9)) {
            write!(f, "  [printed F_closed != 1 while F_sim = 1]")?;
        }
        Ok(())
    }
}

/// Comparison at |r0| = |rh| = 1 for every gate.
pub fn ideal_limit_report<T: Real>() -> Result<Vec<ClosedFormComparison<T>>> {
    GateKind::ALL.iter().map(|&k| ClosedFormComparison::at(k, T::one(), T::one())).collect()
}
