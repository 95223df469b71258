//! Sparse state vector of one photon (polarization ⊗ spatial mode) tensored
//! with a register of electron spins.
//!
//! Amplitudes live in a `BTreeMap` keyed by [`BasisKet`], so iteration order
//! is deterministic. Photon loss shows up only as a norm deficit; there is no
//! explicit vacuum component.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::StateError;
use crate::ops::{apply2, apply4, Op2, Op4};
use crate::scalar::{c, frac_1_sqrt_2, re, Real, C};
use crate::spin::{index_to_spins, spins_to_index, Spin, SpinState};

/// Name of a photon spatial mode, e.g. `in`, `5`, `18`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel(String);

impl ModeLabel {
    pub fn new(name: impl Into<String>) -> Result<Self, StateError> {
        let name = name.into();
        let bad = name.is_empty()
            || name.chars().any(char::is_whitespace)
            || name.starts_with('@')
            || name.contains('#');
        if bad {
            return Err(StateError::InvalidModeLabel(name));
        }
        Ok(Self(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for ModeLabel {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Circular polarization of the photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    R,
    L,
}

impl Polarization {
    pub fn index(self) -> usize {
        match self {
            Polarization::R => 0,
            Polarization::L => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Polarization::R
        } else {
            Polarization::L
        }
    }
}

/// Detection basis of a ±-analyzer: |±⟩ = (|R⟩ ± |L⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PmBasis {
    Plus,
    Minus,
}

impl PmBasis {
    /// Components of |±⟩ in the {R, L} basis.
    pub fn vector<T: Real>(self) -> [C<T>; 2] {
        let h = frac_1_sqrt_2::<T>();
        match self {
            PmBasis::Plus => [re(h), re(h)],
            PmBasis::Minus => [re(h), re(-h)],
        }
    }

    pub fn symbol(self) -> char {
        match self {
            PmBasis::Plus => '+',
            PmBasis::Minus => '-',
        }
    }
}

/// One photon-detector outcome: a mode and the ± projection it registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detector {
    pub label: String,
    pub mode: ModeLabel,
    pub basis: PmBasis,
}

/// Basis state |pol⟩_mode ⊗ |spins⟩.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKet {
    pub mode: ModeLabel,
    pub spins: Vec<Spin>,
    pub pol: Polarization,
}

impl BasisKet {
    pub fn new(pol: Polarization, mode: ModeLabel, spins: Vec<Spin>) -> Self {
        Self { mode, spins, pol }
    }
}

impl fmt::Display for BasisKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pol = match self.pol {
            Polarization::R => 'R',
            Polarization::L => 'L',
        };
        let spins: String = self.spins.iter().map(|s| s.arrow()).collect();
        write!(f, "|{}⟩_{}|{}⟩", pol, self.mode, spins)
    }
}

/// Photon collapsed by one detector, with the remaining spin state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome<T> {
    pub label: String,
    pub probability: T,
    /// Spin state after projection, renormalized to unit norm.
    pub state: SpinState<T>,
}

/// Choice of behaviour when rerouted amplitude lands on an occupied ket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Collision {
    /// Amplitudes are summed.
    #[default]
    Sum,
    /// Occupied targets raise [`StateError::ModeCollision`].
    Strict,
}

/// Photon ⊗ spin-register state.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridState<T> {
    spin_count: usize,
    modes: Vec<ModeLabel>,
    amps: BTreeMap<BasisKet, C<T>>,
}

impl<T: Real> HybridState<T> {
    /// Build a state from explicit terms. Repeated kets are summed.
    pub fn new(spin_count: usize, terms: Vec<(BasisKet, C<T>)>) -> Result<Self, StateError> {
        if terms.is_empty() {
            return Err(StateError::EmptyTerms);
        }
        let mut state = Self { spin_count, modes: Vec::new(), amps: BTreeMap::new() };
        for (ket, a) in terms {
            if ket.spins.len() != spin_count {
                return Err(StateError::InconsistentSpinCount { expected: spin_count, found: ket.spins.len() });
            }
            state.register(&ket.mode);
            *state.amps.entry(ket).or_insert_with(|| c(T::zero(), T::zero())) += a;
        }
        state.prune();
        state.check_norm()?;
        Ok(state)
    }

    /// Photon with polarization vector `pol` (in {R, L}) on `mode`, times `spins`.
    pub fn product(pol: [C<T>; 2], mode: ModeLabel, spins: &SpinState<T>) -> Result<Self, StateError> {
        let mut state = Self { spin_count: spins.count(), modes: vec![mode.clone()], amps: BTreeMap::new() };
        for (idx, a) in spins.amplitudes().iter().enumerate() {
            for (p, w) in pol.iter().enumerate() {
                let amp = *w * *a;
                let ket = BasisKet::new(Polarization::from_index(p), mode.clone(), index_to_spins(idx, spins.count()));
                state.amps.insert(ket, amp);
            }
        }
        state.prune();
        state.check_norm()?;
        Ok(state)
    }

    pub fn spin_count(&self) -> usize {
        self.spin_count
    }

    /// Registered modes in registration order.
    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn has_mode(&self, mode: &ModeLabel) -> bool {
        self.modes.contains(mode)
    }

    pub fn amplitude(&self, ket: &BasisKet) -> C<T> {
        self.amps.get(ket).copied().unwrap_or_else(|| c(T::zero(), T::zero()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKet, &C<T>)> {
        self.amps.iter()
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// Modes that currently carry nonzero amplitude, in registration order.
    pub fn occupied_modes(&self) -> Vec<ModeLabel> {
        self.modes
            .iter()
            .filter(|m| self.amps.keys().any(|k| &k.mode == *m))
            .cloned()
            .collect()
    }

    /// Apply a 2×2 operator in the {R, L} basis to kets on `mode`.
    pub fn apply_pol_op(&self, mode: &ModeLabel, op: &Op2<T>) -> Result<Self, StateError> {
        self.require_mode(mode)?;
        let mut out = self.without_mode(mode);
        for (spins, v) in self.pol_groups(mode) {
            let w = apply2(op, v);
            for (p, a) in w.into_iter().enumerate() {
                out.accumulate(BasisKet::new(Polarization::from_index(p), mode.clone(), spins.clone()), a);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Apply a 2×2 operator in the {↑, ↓} basis of spin `k` on every ket.
    pub fn apply_spin_op(&self, k: usize, op: &Op2<T>) -> Result<Self, StateError> {
        self.require_spin(k)?;
        let mut groups: BTreeMap<(ModeLabel, Polarization, Vec<Spin>), [C<T>; 2]> = BTreeMap::new();
        for (ket, a) in &self.amps {
            let mut rest = ket.spins.clone();
            let bit = rest[k].bit();
            rest[k] = Spin::Up;
            groups.entry((ket.mode.clone(), ket.pol, rest)).or_insert([c(T::zero(), T::zero()); 2])[bit] += *a;
        }
        let mut out = Self { spin_count: self.spin_count, modes: self.modes.clone(), amps: BTreeMap::new() };
        for ((mode, pol, rest), v) in groups {
            let w = apply2(op, v);
            for (bit, a) in w.into_iter().enumerate() {
                let mut spins = rest.clone();
                spins[k] = Spin::from_bit(bit);
                out.accumulate(BasisKet::new(pol, mode.clone(), spins), a);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Apply a 4×4 operator on (polarization of `mode`) ⊗ (spin `k`) in the
    /// ordered basis (R↑, L↑, R↓, L↓).
    pub fn apply_joint_pol_spin_op(&self, mode: &ModeLabel, k: usize, op: &Op4<T>) -> Result<Self, StateError> {
        self.require_mode(mode)?;
        self.require_spin(k)?;
        let mut groups: BTreeMap<Vec<Spin>, [C<T>; 4]> = BTreeMap::new();
        for (ket, a) in self.amps.iter().filter(|(ket, _)| &ket.mode == mode) {
            let mut rest = ket.spins.clone();
            let slot = ket.pol.index() + 2 * rest[k].bit();
            rest[k] = Spin::Up;
            groups.entry(rest).or_insert([c(T::zero(), T::zero()); 4])[slot] += *a;
        }
        let mut out = self.without_mode(mode);
        for (rest, v) in groups {
            let w = apply4(op, v);
            for (slot, a) in w.into_iter().enumerate() {
                let mut spins = rest.clone();
                spins[k] = Spin::from_bit(slot / 2);
                out.accumulate(BasisKet::new(Polarization::from_index(slot % 2), mode.clone(), spins), a);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Move the `pol` component on `from` to mode `to`. Norm is preserved.
    pub fn reroute_mode(
        &self,
        pol: Polarization,
        from: &ModeLabel,
        to: &ModeLabel,
        collision: Collision,
    ) -> Result<Self, StateError> {
        self.require_mode(from)?;
        let mut out = self.clone();
        out.register(to);
        let moving: Vec<(BasisKet, C<T>)> = self
            .amps
            .iter()
            .filter(|(k, _)| &k.mode == from && k.pol == pol)
            .map(|(k, a)| (k.clone(), *a))
            .collect();
        for (k, _) in &moving {
            out.amps.remove(k);
        }
        for (k, a) in moving {
            let target = BasisKet::new(pol, to.clone(), k.spins);
            if collision == Collision::Strict && out.amps.contains_key(&target) {
                return Err(StateError::ModeCollision(to.to_string()));
            }
            out.accumulate(target, a);
        }
        out.prune();
        Ok(out)
    }

    /// Remove every ket on `from` and add `op · v` onto each output mode,
    /// where `v` is the polarization vector of a spin configuration. This is
    /// the common core of splitters, beam splitters and switches.
    pub fn split_mode(
        &self,
        from: &ModeLabel,
        outputs: &[(ModeLabel, Op2<T>)],
        collision: Collision,
    ) -> Result<Self, StateError> {
        self.require_mode(from)?;
        let groups = self.pol_groups(from);
        let mut out = self.without_mode(from);
        for (to, _) in outputs {
            out.register(to);
        }
        if collision == Collision::Strict && !groups.is_empty() {
            if let Some((to, _)) = outputs.iter().find(|(to, _)| out.amps.keys().any(|k| &k.mode == to)) {
                return Err(StateError::ModeCollision(to.to_string()));
            }
        }
        for (spins, v) in &groups {
            for (to, op) in outputs {
                let w = apply2(op, *v);
                for (p, a) in w.into_iter().enumerate() {
                    out.accumulate(BasisKet::new(Polarization::from_index(p), to.clone(), spins.clone()), a);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// ⟨self|other⟩.
    pub fn inner_product(&self, other: &Self) -> Result<C<T>, StateError> {
        if self.spin_count != other.spin_count {
            return Err(StateError::IncompatibleShapes { left: self.spin_count, right: other.spin_count });
        }
        Ok(self
            .amps
            .iter()
            .filter_map(|(k, a)| other.amps.get(k).map(|b| a.conj() * b))
            .sum())
    }

    pub fn scaled(&self, k: C<T>) -> Self {
        let mut out = self.clone();
        for a in out.amps.values_mut() {
            *a *= k;
        }
        out.prune();
        out
    }

    /// Vector sum; the result may exceed unit norm, so it skips the norm check.
    pub fn plus(&self, other: &Self) -> Result<Self, StateError> {
        if self.spin_count != other.spin_count {
            return Err(StateError::IncompatibleShapes { left: self.spin_count, right: other.spin_count });
        }
        let mut out = self.clone();
        for m in &other.modes {
            out.register(m);
        }
        for (k, a) in &other.amps {
            out.accumulate(k.clone(), *a);
        }
        out.prune();
        Ok(out)
    }

    /// Largest amplitude difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for (k, a) in &self.amps {
            worst = worst.max((*a - other.amplitude(k)).norm());
        }
        for (k, b) in &other.amps {
            if !self.amps.contains_key(k) {
                worst = worst.max(b.norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.spin_count == other.spin_count && self.max_abs_diff(other) <= tol
    }

    /// Unnormalized spin state ⟨e|_mode ψ⟩ for polarization vector `e`.
    pub fn spin_component(&self, mode: &ModeLabel, e: [C<T>; 2]) -> SpinState<T> {
        let mut amps = vec![c(T::zero(), T::zero()); 1 << self.spin_count];
        for (ket, a) in self.amps.iter().filter(|(k, _)| &k.mode == mode) {
            amps[spins_to_index(&ket.spins)] += e[ket.pol.index()].conj() * a;
        }
        SpinState::new(self.spin_count, amps).expect("dimension fixed by spin count")
    }

    /// Projective photon measurement. Every occupied mode must be watched by
    /// at least one detector, and the detectors on a mode must capture all of
    /// its weight. Zero-probability outcomes are dropped.
    pub fn measure_photon(&self, detectors: &[Detector]) -> Result<Vec<MeasurementOutcome<T>>, StateError> {
        let total = self.norm_sqr();
        if self.amps.is_empty() || total <= T::zero() {
            return Err(StateError::EmptyState);
        }
        for (i, d) in detectors.iter().enumerate() {
            if detectors[..i].iter().any(|e| e.mode == d.mode && e.basis == d.basis) {
                return Err(StateError::DuplicateDetector(d.mode.to_string()));
            }
        }
        for mode in self.occupied_modes() {
            if !detectors.iter().any(|d| d.mode == mode) {
                return Err(StateError::UncoveredMode(mode.to_string()));
            }
        }
        let mut outcomes = Vec::new();
        let mut captured: BTreeMap<&ModeLabel, T> = BTreeMap::new();
        for d in detectors {
            let projected = self.spin_component(&d.mode, d.basis.vector());
            let p = projected.norm_sqr();
            *captured.entry(&d.mode).or_insert(T::zero()) += p;
            if p <= total * T::epsilon() * T::epsilon() {
                continue;
            }
            let state = projected.normalized().expect("positive probability");
            outcomes.push(MeasurementOutcome { label: d.label.clone(), probability: p, state });
        }
        for mode in self.occupied_modes() {
            let weight: T = self.amps.iter().filter(|(k, _)| k.mode == mode).map(|(_, a)| a.norm_sqr()).sum();
            let seen = captured.get(&mode).copied().unwrap_or(T::zero());
            let leak = weight - seen;
            if leak > T::norm_slack() * T::lit(10.0) {
                return Err(StateError::UnmeasuredComponent { mode: mode.to_string(), weight: leak.as_f64() });
            }
        }
        Ok(outcomes)
    }

    fn pol_groups(&self, mode: &ModeLabel) -> BTreeMap<Vec<Spin>, [C<T>; 2]> {
        let mut groups: BTreeMap<Vec<Spin>, [C<T>; 2]> = BTreeMap::new();
        for (ket, a) in self.amps.iter().filter(|(k, _)| &k.mode == mode) {
            groups.entry(ket.spins.clone()).or_insert([c(T::zero(), T::zero()); 2])[ket.pol.index()] += *a;
        }
        groups
    }

    fn without_mode(&self, mode: &ModeLabel) -> Self {
        Self {
            spin_count: self.spin_count,
            modes: self.modes.clone(),
            amps: self.amps.iter().filter(|(k, _)| &k.mode != mode).map(|(k, a)| (k.clone(), *a)).collect(),
        }
    }

    fn accumulate(&mut self, ket: BasisKet, a: C<T>) {
        *self.amps.entry(ket).or_insert_with(|| c(T::zero(), T::zero())) += a;
    }

    fn register(&mut self, mode: &ModeLabel) {
        if !self.modes.contains(mode) {
            self.modes.push(mode.clone());
        }
    }

    fn prune(&mut self) {
        let eps = T::prune_threshold();
        self.amps.retain(|_, a| a.norm() > eps);
    }

    fn check_norm(&self) -> Result<(), StateError> {
        let n = self.norm_sqr();
        if n > T::one() + T::norm_slack() {
            return Err(StateError::NormExceedsOne { norm_sqr: n.as_f64() });
        }
        Ok(())
    }

    fn require_mode(&self, mode: &ModeLabel) -> Result<(), StateError> {
        if self.has_mode(mode) {
            Ok(())
        } else {
            Err(StateError::UnknownMode(mode.to_string()))
        }
    }

    fn require_spin(&self, k: usize) -> Result<(), StateError> {
        if k < self.spin_count {
            Ok(())
        } else {
            Err(StateError::SpinIndexOutOfRange { index: k, count: self.spin_count })
        }
    }
}

impl<T: Real> fmt::Display for HybridState<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for mode in &self.modes {
            for (ket, a) in self.amps.iter().filter(|(k, _)| &k.mode == mode) {
                if a.norm() <= T::lit(1e-15) {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({}){}", crate::spin::fmt_complex(*a), ket)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{diag2, diag4, hadamard, identity2, identity4, pauli_z};
    use Polarization::{L, R};
    use Spin::{Down, Up};

    fn m(s: &str) -> ModeLabel {
        s.parse().unwrap()
    }

    fn ket(pol: Polarization, mode: &str, spins: &[Spin]) -> BasisKet {
        BasisKet::new(pol, m(mode), spins.to_vec())
    }

    fn one(pol: Polarization, mode: &str, spins: &[Spin]) -> HybridState<f64> {
        HybridState::new(spins.len(), vec![(ket(pol, mode, spins), re(1.0))]).unwrap()
    }

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn make_state_single_term() {
        let s = one(R, "in", &[Up]);
        assert_eq!(s.amplitude(&ket(R, "in", &[Up])), re(1.0));
        assert_eq!(s.modes(), &[m("in")]);
    }

    #[test]
    fn make_state_rejects_bad_input() {
        let too_big = HybridState::new(1, vec![(ket(R, "a", &[Up]), re(1.5f64.sqrt()))]);
        assert!(matches!(too_big, Err(StateError::NormExceedsOne { .. })));
        let mixed = HybridState::new(2, vec![(ket(R, "a", &[Up]), re(0.5f64))]);
        assert!(matches!(mixed, Err(StateError::InconsistentSpinCount { expected: 2, found: 1 })));
        assert!(matches!(HybridState::<f64>::new(1, vec![]), Err(StateError::EmptyTerms)));
        assert!(ModeLabel::new("").is_err());
        assert!(ModeLabel::new("a b").is_err());
    }

    #[test]
    fn hadamard_on_polarization() {
        let s = one(R, "5", &[Up]).apply_pol_op(&m("5"), &hadamard()).unwrap();
        let want = HybridState::new(1, vec![(ket(R, "5", &[Up]), re(H)), (ket(L, "5", &[Up]), re(H))]).unwrap();
        assert!(s.approx_eq(&want, 1e-12));
        let back = s.apply_pol_op(&m("5"), &hadamard()).unwrap();
        assert!(back.approx_eq(&one(R, "5", &[Up]), 1e-12));
    }

    #[test]
    fn pol_op_scaling_and_unknown_mode() {
        let s = one(L, "x", &[Up]).apply_pol_op(&m("x"), &diag2(re(0.5), re(0.5))).unwrap();
        assert!((s.norm_sqr() - 0.25).abs() < 1e-15);
        assert!(matches!(s.apply_pol_op(&m("y"), &identity2()), Err(StateError::UnknownMode(_))));
    }

    #[test]
    fn spin_ops() {
        let s = one(R, "a", &[Up]).apply_spin_op(0, &hadamard()).unwrap();
        let want = HybridState::new(1, vec![(ket(R, "a", &[Up]), re(H)), (ket(R, "a", &[Down]), re(H))]).unwrap();
        assert!(s.approx_eq(&want, 1e-12));
        let z = one(R, "a", &[Down]).apply_spin_op(0, &pauli_z()).unwrap();
        assert_eq!(z.amplitude(&ket(R, "a", &[Down])), re(-1.0));
        assert!(matches!(s.apply_spin_op(1, &pauli_z()), Err(StateError::SpinIndexOutOfRange { .. })));
    }

    #[test]
    fn joint_op_uses_r_up_l_up_r_down_l_down_order() {
        let ideal = diag4([re(-1.0), re(1.0), re(1.0), re(-1.0)]);
        let s = one(R, "2", &[Up]).apply_joint_pol_spin_op(&m("2"), 0, &ideal).unwrap();
        assert_eq!(s.amplitude(&ket(R, "2", &[Up])), re(-1.0));
        let lossy = diag4([re(-0.5), re(0.9), re(0.9), re(-0.5)]);
        let s = one(L, "2", &[Up]).apply_joint_pol_spin_op(&m("2"), 0, &lossy).unwrap();
        assert_eq!(s.amplitude(&ket(L, "2", &[Up])), re(0.9));
        let s = one(L, "2", &[Down]).apply_joint_pol_spin_op(&m("2"), 0, &identity4()).unwrap();
        assert_eq!(s, one(L, "2", &[Down]));
    }

    #[test]
    fn joint_op_acts_on_the_named_spin_only() {
        let ideal = diag4([re(-1.0), re(1.0), re(1.0), re(-1.0)]);
        let s = one(L, "2", &[Up, Down]).apply_joint_pol_spin_op(&m("2"), 1, &ideal).unwrap();
        assert_eq!(s.amplitude(&ket(L, "2", &[Up, Down])), re(-1.0));
        let s = one(L, "2", &[Up, Down]).apply_joint_pol_spin_op(&m("2"), 0, &ideal).unwrap();
        assert_eq!(s.amplitude(&ket(L, "2", &[Up, Down])), re(1.0));
    }

    #[test]
    fn reroute_moves_one_polarization() {
        let s = one(L, "5", &[Up]).reroute_mode(L, &m("5"), &m("7"), Collision::Sum).unwrap();
        assert_eq!(s, {
            let mut t = one(L, "7", &[Up]);
            t.modes = vec![m("5"), m("7")];
            t
        });
        let unchanged = one(L, "5", &[Up]).reroute_mode(R, &m("5"), &m("6"), Collision::Sum).unwrap();
        assert_eq!(unchanged.max_abs_diff(&one(L, "5", &[Up])), 0.0);

        let sup = HybridState::new(1, vec![(ket(R, "5", &[Up]), re(H)), (ket(L, "5", &[Up]), re(H))]).unwrap();
        let moved = sup.reroute_mode(R, &m("5"), &m("6"), Collision::Sum).unwrap();
        assert_eq!(moved.amplitude(&ket(R, "6", &[Up])), re(H));
        assert_eq!(moved.amplitude(&ket(L, "5", &[Up])), re(H));
        assert_eq!(moved.norm_sqr(), sup.norm_sqr());
    }

    #[test]
    fn reroute_collision_policy() {
        let s = HybridState::new(1, vec![(ket(R, "a", &[Up]), re(0.6)), (ket(R, "b", &[Up]), re(0.8))]).unwrap();
        let summed = s.reroute_mode(R, &m("a"), &m("b"), Collision::Sum).unwrap();
        assert!((summed.amplitude(&ket(R, "b", &[Up])).re - 1.4f64).abs() < 1e-15);
        assert!(matches!(
            s.reroute_mode(R, &m("a"), &m("b"), Collision::Strict),
            Err(StateError::ModeCollision(_))
        ));
    }

    #[test]
    fn inner_products() {
        let a = one(R, "x", &[Up]);
        assert_eq!(a.inner_product(&a).unwrap(), re(1.0));
        assert_eq!(a.inner_product(&one(L, "x", &[Up])).unwrap(), re(0.0));
        let plus = HybridState::new(1, vec![(ket(R, "x", &[Up]), re(H)), (ket(L, "x", &[Up]), re(H))]).unwrap();
        assert!((plus.inner_product(&a).unwrap().re - H).abs() < 1e-15);
        let two = one(R, "x", &[Up, Up]);
        assert!(matches!(a.inner_product(&two), Err(StateError::IncompatibleShapes { .. })));
    }

    #[test]
    fn measure_single_plus_outcome() {
        let chi = SpinState::<f64>::new(1, vec![re(0.6), c(0.0, 0.8)]).unwrap();
        let s = HybridState::product(PmBasis::Plus.vector(), m("9"), &chi).unwrap();
        let dets = vec![
            Detector { label: "D+".into(), mode: m("9"), basis: PmBasis::Plus },
            Detector { label: "D-".into(), mode: m("9"), basis: PmBasis::Minus },
        ];
        let out = s.measure_photon(&dets).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].label, "D+");
        assert!((out[0].probability - 1.0).abs() < 1e-12);
        assert!(out[0].state.max_abs_diff(&chi).unwrap() < 1e-12);
    }

    #[test]
    fn measure_errors() {
        let s = one(R, "9", &[Up]);
        let plus_only = vec![Detector { label: "D+".into(), mode: m("9"), basis: PmBasis::Plus }];
        assert!(matches!(s.measure_photon(&plus_only), Err(StateError::UnmeasuredComponent { .. })));
        let elsewhere = vec![Detector { label: "D+".into(), mode: m("8"), basis: PmBasis::Plus }];
        assert!(matches!(s.measure_photon(&elsewhere), Err(StateError::UncoveredMode(_))));
        let empty = s.scaled(re(0.0));
        assert!(matches!(empty.measure_photon(&plus_only), Err(StateError::EmptyState)));
    }
}
