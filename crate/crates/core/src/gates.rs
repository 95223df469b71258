//! The three built-in gate circuits, their ideal unitaries, and truth-table checks.
//!
//! Spin roles: CNOT (control 0, target 1); Toffoli (controls 0 and 1, target 2);
//! Fredkin (control 0, targets 1 and 2). Every control is active on ↓.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cavity::ReflectionPair;
use crate::circuit::{execute, FeedForward, FeedForwardOp, InputPolarization, Netlist, Step};
use crate::elements::Element;
use crate::ops::Matrix;
use crate::scalar::Real;
use crate::spin::{index_to_spins, ket_label, spins_to_index, Spin, SpinState};
use crate::state::{Detector, ModeLabel, PmBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Cnot,
    Toffoli,
    Fredkin,
}

impl GateKind {
    pub const ALL: [GateKind; 3] = [GateKind::Cnot, GateKind::Toffoli, GateKind::Fredkin];

    pub fn spin_count(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Cnot => "cnot",
            GateKind::Toffoli => "toffoli",
            GateKind::Fredkin => "fredkin",
        }
    }

    /// Image of a basis input under the ideal gate.
    pub fn permute(self, spins: &[Spin]) -> Vec<Spin> {
        let mut s = spins.to_vec();
        let flip = |x: Spin| if x == Spin::Up { Spin::Down } else { Spin::Up };
        match self {
            GateKind::Cnot if s[0] == Spin::Down => s[1] = flip(s[1]),
            GateKind::Toffoli if s[0] == Spin::Down && s[1] == Spin::Down => s[2] = flip(s[2]),
            GateKind::Fredkin if s[0] == Spin::Down => s.swap(1, 2),
            _ => {}
        }
        s
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cnot" => Ok(GateKind::Cnot),
            "toffoli" => Ok(GateKind::Toffoli),
            "fredkin" => Ok(GateKind::Fredkin),
            other => Err(format!("unknown gate {:?} (expected cnot, toffoli or fredkin)", other)),
        }
    }
}

/// Permutation matrix of the ideal gate, first spin most significant.
pub fn ideal_gate_matrix<T: Real>(kind: GateKind) -> Matrix<T> {
    let n = kind.spin_count();
    let perm: Vec<usize> = (0..1usize << n).map(|i| spins_to_index(&kind.permute(&index_to_spins(i, n)))).collect();
    Matrix::permutation(&perm)
}

pub fn ideal_output<T: Real>(kind: GateKind, input: &SpinState<T>) -> SpinState<T> {
    input.apply_matrix(&ideal_gate_matrix(kind)).expect("gate dimension matches its spin count")
}

struct Builder {
    steps: Vec<Step>,
}

fn m(s: &str) -> ModeLabel {
    ModeLabel::new(s).expect("built-in mode labels are valid")
}

impl Builder {
    fn new() -> Self {
        Self { steps: Vec::new() }
    }

    fn push(&mut self, e: Element) -> &mut Self {
        self.steps.push(Step::new(e));
        self
    }

    fn at(&mut self, name: &str) -> &mut Self {
        self.steps.last_mut().expect("checkpoint follows an element").checkpoint = Some(name.to_string());
        self
    }

    fn pbs(&mut self, i: &str, t: &str, r: &str) -> &mut Self {
        self.push(Element::Pbs { input: m(i), transmit: m(t), reflect: m(r) })
    }

    fn pmpbs(&mut self, i: &str, p: &str, q: &str) -> &mut Self {
        self.push(Element::PmPbs { input: m(i), plus: m(p), minus: m(q) })
    }

    fn hwp(&mut self, mode: &str) -> &mut Self {
        self.push(Element::Hwp { mode: m(mode) })
    }

    fn wpm(&mut self, mode: &str) -> &mut Self {
        self.push(Element::WpMirror { mode: m(mode) })
    }

    fn bs(&mut self, a: &str, b: &str, oa: &str, ob: &str) -> &mut Self {
        self.push(Element::Bs { in_a: m(a), in_b: m(b), out_a: m(oa), out_b: m(ob) })
    }

    fn sh(&mut self, spin: usize) -> &mut Self {
        self.push(Element::SpinH { spin })
    }

    fn cav(&mut self, spin: usize, mode: &str) -> &mut Self {
        self.push(Element::Cavity { spin, mode: m(mode) })
    }

    fn sw(&mut self, from: &str, to: &str) -> &mut Self {
        self.push(Element::Switch { from: m(from), to: m(to) })
    }

    /// Recombine two arms on one output mode.
    fn merge(&mut self, a: &str, b: &str, to: &str) -> &mut Self {
        self.sw(a, to).sw(b, to)
    }

    fn finish(&mut self, spins: usize, pol: InputPolarization, det: &[(&str, &str, PmBasis)], ff: &[(&str, &[(usize, FeedForwardOp)])]) -> Netlist {
        Netlist {
            spin_count: spins,
            input_mode: m("in"),
            input_pol: pol,
            steps: std::mem::take(&mut self.steps),
            detectors: det.iter().map(|(l, md, b)| Detector { label: l.to_string(), mode: m(md), basis: *b }).collect(),
            feedforward: ff.iter().map(|(l, ops)| FeedForward { label: l.to_string(), ops: ops.to_vec() }).collect(),
        }
    }
}

use FeedForwardOp::{NegZ, Z};
use PmBasis::{Minus, Plus};

fn cnot_netlist() -> Netlist {
    Builder::new()
        .pbs("in", "1", "2")
        .cav(0, "2")
        .sw("2", "3")
        .merge("1", "3", "4")
        .hwp("4")
        .sh(1)
        .pbs("4", "5", "6")
        .cav(1, "6")
        .sw("6", "7")
        .merge("5", "7", "9")
        .sh(1)
        .at("pre-measurement")
        .pmpbs("9", "10", "11")
        .finish(
            2,
            InputPolarization::RPlusL,
            &[("D+", "10", Plus), ("D-", "11", Minus)],
            &[("D+", &[]), ("D-", &[(0, Z)])],
        )
}

/// Control stage shared by the three-spin gates: a cavity pass on spin 0
/// between two polarization arms recombined on mode 5.
fn first_block(b: &mut Builder, checkpoint: &str) {
    b.pbs("in", "1", "2").cav(0, "2").sw("2", "3").merge("1", "3", "5").hwp("5").at(checkpoint);
}

fn toffoli_netlist() -> Netlist {
    let mut b = Builder::new();
    first_block(&mut b, "Xi1");
    b.pbs("5", "6", "7")
        .hwp("6")
        .pbs("6", "8", "9")
        .cav(1, "9")
        .merge("8", "9", "19")
        .hwp("19")
        .hwp("7")
        .pbs("7", "10", "11")
        .cav(1, "11")
        .merge("10", "11", "18")
        .hwp("18")
        .at("Xi2")
        .sh(2)
        .pbs("19", "12", "13")
        .cav(2, "13")
        .merge("12", "13", "23")
        .sh(2)
        .at("Xi3")
        .bs("18", "23", "24", "25")
        .pmpbs("24", "26", "27")
        .pmpbs("25", "28", "29")
        .at("Xi4")
        .finish(
            3,
            InputPolarization::RMinusL,
            &[("D1+", "26", Plus), ("D1-", "27", Minus), ("D2+", "28", Plus), ("D2-", "29", Minus)],
            &[("D1+", &[]), ("D1-", &[(0, NegZ), (1, Z)]), ("D2+", &[(0, Z)]), ("D2-", &[(1, NegZ)])],
        )
}

fn fredkin_netlist() -> Netlist {
    let mut b = Builder::new();
    first_block(&mut b, "Pi1");
    b.pbs("5", "6", "7")
        .hwp("7")
        .pbs("7", "8", "9")
        .cav(1, "9")
        .cav(2, "9")
        .merge("8", "9", "22")
        .hwp("22")
        .hwp("6")
        .sw("6", "10")
        .pbs("10", "11", "12")
        .cav(1, "12")
        .cav(2, "12")
        .merge("11", "12", "20")
        .wpm("20")
        .at("Xi2")
        .sh(1)
        .sh(2)
        .pbs("20", "11", "12")
        .cav(2, "12")
        .cav(1, "12")
        .merge("11", "12", "10")
        .sh(1)
        .sh(2)
        .sw("10", "21")
        .at("Xi3")
        .bs("22", "21", "23", "24")
        .pmpbs("23", "25", "26")
        .pmpbs("24", "27", "28")
        .at("Xi4")
        .finish(
            3,
            InputPolarization::RMinusL,
            &[("D1+", "25", Plus), ("D1-", "26", Minus), ("D2+", "27", Plus), ("D2-", "28", Minus)],
            &[("D1+", &[]), ("D1-", &[(0, NegZ), (1, Z), (2, Z)]), ("D2+", &[(0, Z)]), ("D2-", &[(1, Z), (2, Z)])],
        )
}

pub fn builtin_netlist(kind: GateKind) -> Netlist {
    match kind {
        GateKind::Cnot => cnot_netlist(),
        GateKind::Toffoli => toffoli_netlist(),
        GateKind::Fredkin => fredkin_netlist(),
    }
}

/// Result for one computational-basis input.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisCheck<T> {
    pub input: usize,
    pub expected: SpinState<T>,
    /// Smallest |⟨expected|ψ_k⟩| over the outcomes.
    pub worst_overlap: T,
    pub total_probability: T,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruthTableReport<T> {
    pub kind: GateKind,
    pub pair: ReflectionPair<T>,
    pub tolerance: T,
    pub rows: Vec<BasisCheck<T>>,
    pub pass: bool,
}

impl<T: Real> TruthTableReport<T> {
    pub fn worst_overlap(&self) -> T {
        self.rows.iter().map(|r| r.worst_overlap).fold(T::one(), T::min)
    }
}

/// Worst overlap and total probability of one run against the ideal output.
/// A failed run scores zero.
pub fn check_input<T: Real>(netlist: &Netlist, kind: GateKind, pair: &ReflectionPair<T>, input: &SpinState<T>) -> (T, T) {
    let expected = ideal_output(kind, input);
    match execute(netlist, pair, input) {
        Ok(dist) if !dist.is_empty() => {
            let worst = dist
                .outcomes
                .iter()
                .map(|o| expected.overlap(&o.state).unwrap_or(T::zero()))
                .fold(T::one(), T::min);
            (worst, dist.total_probability())
        }
        _ => (T::zero(), T::zero()),
    }
}

pub fn verify_truth_table<T: Real>(kind: GateKind, pair: &ReflectionPair<T>, tolerance: T) -> TruthTableReport<T> {
    let netlist = builtin_netlist(kind);
    let n = kind.spin_count();
    let rows: Vec<BasisCheck<T>> = (0..1usize << n)
        .map(|i| {
            let input = SpinState::basis(n, i);
            let (worst, total) = check_input(&netlist, kind, pair, &input);
            BasisCheck {
                input: i,
                expected: ideal_output(kind, &input),
                worst_overlap: worst,
                total_probability: total,
                pass: worst >= T::one() - tolerance,
            }
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    TruthTableReport { kind, pair: *pair, tolerance, rows, pass }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomCheckReport<T> {
    pub samples: usize,
    pub worst_overlap: T,
    pub pass: bool,
}

/// Same comparison as [`verify_truth_table`] on seeded random superpositions.
pub fn verify_random_inputs<T: Real>(
    kind: GateKind,
    pair: &ReflectionPair<T>,
    tolerance: T,
    samples: usize,
    seed: u64,
) -> RandomCheckReport<T> {
    let netlist = builtin_netlist(kind);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = T::one();
    for _ in 0..samples {
        let input = SpinState::random(kind.spin_count(), &mut rng);
        worst = worst.min(check_input(&netlist, kind, pair, &input).0);
    }
    RandomCheckReport { samples, worst_overlap: worst, pass: worst >= T::one() - tolerance }
}

impl<T: Real> fmt::Display for TruthTableReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.kind.spin_count();
        let (m0, mh) = self.pair.moduli();
        writeln!(
            f,
            "truth table: {}  |r0|={}  |rh|={}  tolerance={}",
            self.kind,
            crate::format::sig9(m0.as_f64()),
            crate::format::sig9(mh.as_f64()),
            crate::format::sig9(self.tolerance.as_f64())
        )?;
        for r in &self.rows {
            let out = self.kind.permute(&index_to_spins(r.input, n));
            writeln!(
                f,
                "  |{}⟩ -> |{}⟩  overlap={}  p={}  {}",
                ket_label(r.input, n),
                ket_label(spins_to_index(&out), n),
                crate::format::sig9(r.worst_overlap.as_f64()),
                crate::format::sig9(r.total_probability.as_f64()),
                if r.pass { "ok" } else { "FAIL" }
            )?;
        }
        write!(f, "result: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}
