//! A second, deliberately naive simulator: dense amplitude arrays over
//! (mode, polarization, spins), circuits spelled out by hand with the lossy
//! cavity sign rules. The library must agree with it, and both must agree
//! with values frozen from an earlier standalone run.

use std::collections::HashMap;

use num_complex::Complex64;
use qdcavity::{
    builtin_netlist, closed_form_fidelity_squared, fidelity_breakdown, ideal_output, simulated_efficiency,
    simulated_fidelity, GateKind, Pair, Spins,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

struct Dense {
    n: usize,
    modes: HashMap<&'static str, usize>,
    amp: Vec<Complex64>,
}

impl Dense {
    const MAX_MODES: usize = 40;

    fn new(n: usize, spins: &[Complex64], minus: bool) -> Self {
        let mut d = Dense { n, modes: HashMap::new(), amp: vec![Complex64::new(0.0, 0.0); (Self::MAX_MODES * 2) << n] };
        for (s, a) in spins.iter().enumerate() {
            let r = d.at("in", 0, s);
            d.amp[r] = a * H;
            let l = d.at("in", 1, s);
            d.amp[l] = if minus { -a * H } else { a * H };
        }
        d
    }

    fn mode(&mut self, m: &'static str) -> usize {
        let next = self.modes.len();
        *self.modes.entry(m).or_insert(next)
    }

    fn at(&mut self, m: &'static str, pol: usize, s: usize) -> usize {
        let k = self.mode(m);
        (k * 2 + pol) * (1 << self.n) + s
    }

    fn take(&mut self, m: &'static str, pol: usize, s: usize) -> Complex64 {
        let i = self.at(m, pol, s);
        std::mem::replace(&mut self.amp[i], Complex64::new(0.0, 0.0))
    }

    fn add(&mut self, m: &'static str, pol: usize, s: usize, a: Complex64) {
        let i = self.at(m, pol, s);
        self.amp[i] += a;
    }

    fn dim(&self) -> usize {
        1 << self.n
    }

    fn bit(&self, s: usize, k: usize) -> usize {
        (s >> (self.n - 1 - k)) & 1
    }

    fn pbs(&mut self, i: &'static str, t: &'static str, r: &'static str) {
        for s in 0..self.dim() {
            let a = self.take(i, 0, s);
            let b = self.take(i, 1, s);
            self.add(t, 0, s, a);
            self.add(r, 1, s, b);
        }
    }

    fn sw(&mut self, f: &'static str, t: &'static str) {
        for s in 0..self.dim() {
            for p in 0..2 {
                let a = self.take(f, p, s);
                self.add(t, p, s, a);
            }
        }
    }

    fn hwp(&mut self, m: &'static str) {
        for s in 0..self.dim() {
            let a = self.take(m, 0, s);
            let b = self.take(m, 1, s);
            self.add(m, 0, s, (a + b) * H);
            self.add(m, 1, s, (a - b) * H);
        }
    }

    /// R↑ and L↓ pick up −|r0|, the other two |rh|.
    fn cav(&mut self, k: usize, m: &'static str, m0: f64, mh: f64) {
        for s in 0..self.dim() {
            for p in 0..2 {
                let f = if (p == 0) == (self.bit(s, k) == 0) { -m0 } else { mh };
                let i = self.at(m, p, s);
                self.amp[i] *= f;
            }
        }
    }

    fn sh(&mut self, k: usize) {
        let stride = 1 << (self.n - 1 - k);
        for i in 0..self.amp.len() {
            let s = i % self.dim();
            if s & stride == 0 {
                let (a, b) = (self.amp[i], self.amp[i + stride]);
                self.amp[i] = (a + b) * H;
                self.amp[i + stride] = (a - b) * H;
            }
        }
    }

    fn bs(&mut self, a: &'static str, b: &'static str, oa: &'static str, ob: &'static str) {
        for s in 0..self.dim() {
            for p in 0..2 {
                let x = self.take(a, p, s);
                let y = self.take(b, p, s);
                self.add(oa, p, s, (x + y) * H);
                self.add(ob, p, s, (x - y) * H);
            }
        }
    }

    /// Spin vector ⟨±|_m ψ⟩ with sign-flip corrections on the listed spins.
    fn project(&mut self, m: &'static str, minus: bool, flips: &[(usize, f64)]) -> Vec<Complex64> {
        (0..self.dim())
            .map(|s| {
                let (ri, li) = (self.at(m, 0, s), self.at(m, 1, s));
                let (r, l) = (self.amp[ri], self.amp[li]);
                let mut v = (r + if minus { -l } else { l }) * H;
                for &(k, sign) in flips {
                    v *= sign * if self.bit(s, k) == 0 { 1.0 } else { -1.0 };
                }
                v
            })
            .collect()
    }

    fn norm(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }
}

fn cnot(d: &mut Dense, m0: f64, mh: f64) {
    d.pbs("in", "1", "2");
    d.cav(0, "2", m0, mh);
    d.sw("1", "4");
    d.sw("2", "4");
    d.hwp("4");
    d.sh(1);
    d.pbs("4", "5", "6");
    d.cav(1, "6", m0, mh);
    d.sw("5", "9");
    d.sw("6", "9");
    d.sh(1);
}

fn front(d: &mut Dense, m0: f64, mh: f64) {
    d.pbs("in", "1", "2");
    d.cav(0, "2", m0, mh);
    d.sw("1", "5");
    d.sw("2", "5");
    d.hwp("5");
    d.pbs("5", "6", "7");
}

fn toffoli(d: &mut Dense, m0: f64, mh: f64) {
    front(d, m0, mh);
    for (i, t, r, out) in [("6", "8", "9", "19"), ("7", "10", "11", "18")] {
        d.hwp(i);
        d.pbs(i, t, r);
        d.cav(1, r, m0, mh);
        d.sw(t, out);
        d.sw(r, out);
        d.hwp(out);
    }
    d.sh(2);
    d.pbs("19", "12", "13");
    d.cav(2, "13", m0, mh);
    d.sw("12", "23");
    d.sw("13", "23");
    d.sh(2);
    d.bs("18", "23", "24", "25");
}

fn fredkin(d: &mut Dense, m0: f64, mh: f64) {
    front(d, m0, mh);
    d.hwp("7");
    d.pbs("7", "8", "9");
    d.cav(1, "9", m0, mh);
    d.cav(2, "9", m0, mh);
    d.sw("8", "22");
    d.sw("9", "22");
    d.hwp("22");
    d.hwp("6");
    d.pbs("6", "11", "12");
    d.cav(1, "12", m0, mh);
    d.cav(2, "12", m0, mh);
    d.sw("11", "20");
    d.sw("12", "20");
    d.hwp("20");
    d.sh(1);
    d.sh(2);
    d.pbs("20", "11", "12");
    d.cav(2, "12", m0, mh);
    d.cav(1, "12", m0, mh);
    d.sw("11", "21");
    d.sw("12", "21");
    d.sh(1);
    d.sh(2);
    d.bs("22", "21", "23", "24");
}

type Detect = (&'static str, bool, &'static [(usize, f64)]);

const CNOT_DET: [Detect; 2] = [("9", false, &[]), ("9", true, &[(0, 1.0)])];
const TOFFOLI_DET: [Detect; 4] =
    [("24", false, &[]), ("24", true, &[(0, -1.0), (1, 1.0)]), ("25", false, &[(0, 1.0)]), ("25", true, &[(1, -1.0)])];
const FREDKIN_DET: [Detect; 4] = [
    ("23", false, &[]),
    ("23", true, &[(0, -1.0), (1, 1.0), (2, 1.0)]),
    ("24", false, &[(0, 1.0)]),
    ("24", true, &[(1, 1.0), (2, 1.0)]),
];

/// (conditioned fidelity, efficiency) from the dense oracle.
fn oracle(kind: GateKind, m0: f64, mh: f64, input: &Spins) -> (f64, f64) {
    let n = kind.spin_count();
    let mut d = Dense::new(n, input.amplitudes(), kind != GateKind::Cnot);
    let dets: &[Detect] = match kind {
        GateKind::Cnot => {
            cnot(&mut d, m0, mh);
            &CNOT_DET
        }
        GateKind::Toffoli => {
            toffoli(&mut d, m0, mh);
            &TOFFOLI_DET
        }
        GateKind::Fredkin => {
            fredkin(&mut d, m0, mh);
            &FREDKIN_DET
        }
    };
    let ideal = ideal_output(kind, input);
    let eta = d.norm();
    let mut weighted = 0.0;
    for &(mode, minus, flips) in dets {
        let v = d.project(mode, minus, flips);
        let ov: Complex64 = ideal.amplitudes().iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
        weighted += ov.norm_sqr();
    }
    (weighted / eta, eta)
}

/// (gate, |r0|, |rh|, conditioned fidelity, efficiency) for the uniform input.
const FROZEN: [(GateKind, f64, f64, f64, f64); 15] = [
    (GateKind::Cnot, 1.0, 0.951220, 0.9996949330499387, 0.928586306184592),
    (GateKind::Cnot, 0.5, 0.9, 0.9586511088461674, 0.7113249999999995),
    (GateKind::Cnot, 0.9, 0.5, 0.9496124031007752, 0.40312499999999973),
    (GateKind::Cnot, 0.0, 0.0, 0.5, 0.25),
    (GateKind::Cnot, 0.3, 0.7, 0.8983820140162737, 0.5315249999999996),
    (GateKind::Toffoli, 1.0, 0.951220, 0.9995464938145059, 0.9291525058759199),
    (GateKind::Toffoli, 0.5, 0.9, 0.9374830130811469, 0.5700618124999993),
    (GateKind::Toffoli, 0.9, 0.5, 0.9523862525066874, 0.4106203124999995),
    (GateKind::Toffoli, 0.0, 0.0, 0.75, 0.1875),
    (GateKind::Toffoli, 0.3, 0.7, 0.8966630808602545, 0.39077681249999935),
    (GateKind::Fredkin, 1.0, 0.951220, 0.9984708531289936, 0.9081897995024746),
    (GateKind::Fredkin, 0.5, 0.9, 0.9043393332653737, 0.44945536195624924),
    (GateKind::Fredkin, 0.9, 0.5, 0.8497322090996783, 0.37199321795624934),
    (GateKind::Fredkin, 0.0, 0.0, 0.75, 0.1875),
    (GateKind::Fredkin, 0.3, 0.7, 0.8634831167312245, 0.30615489530624945),
];

#[test]
fn oracle_reproduces_frozen_values() {
    for (kind, m0, mh, f, eta) in FROZEN {
        let (of, oe) = oracle(kind, m0, mh, &Spins::uniform(kind.spin_count()));
        assert!((of - f).abs() < 1e-12, "{} ({}, {}): oracle F {} vs frozen {}", kind, m0, mh, of, f);
        assert!((oe - eta).abs() < 1e-12, "{} ({}, {}): oracle eta {} vs frozen {}", kind, m0, mh, oe, eta);
    }
}

#[test]
fn library_matches_frozen_values() {
    for (kind, m0, mh, f, eta) in FROZEN {
        let pair = Pair::from_moduli(m0, mh);
        let u = Spins::uniform(kind.spin_count());
        let lf = simulated_fidelity(kind, &pair, &u).unwrap();
        let le = simulated_efficiency(kind, &pair, &u).unwrap();
        assert!((lf - f).abs() < 1e-10, "{} ({}, {}): F {} vs {}", kind, m0, mh, lf, f);
        assert!((le - eta).abs() < 1e-10, "{} ({}, {}): eta {} vs {}", kind, m0, mh, le, eta);
    }
}

#[test]
fn library_matches_oracle_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for kind in GateKind::ALL {
        for &(m0, mh) in &[(0.8, 0.95), (0.2, 0.6), (1.0, 0.1)] {
            for _ in 0..5 {
                let input = Spins::random(kind.spin_count(), &mut rng);
                let (of, oe) = oracle(kind, m0, mh, &input);
                let pair = Pair::from_moduli(m0, mh);
                let b = fidelity_breakdown(&builtin_netlist(kind), kind, &pair, &input).unwrap();
                assert!((b.conditioned - of).abs() < 1e-10, "{}: {} vs {}", kind, b.conditioned, of);
                assert!((b.efficiency - oe).abs() < 1e-10, "{}: {} vs {}", kind, b.efficiency, oe);
            }
        }
    }
}

#[test]
fn photon_inclusive_fidelity_equals_squared_numerator_form() {
    // two-gate identity found while reconciling the published closed forms
    let pre_frozen = [
        (GateKind::Cnot, 0.9995500214069382),
        (GateKind::Toffoli, 0.9992493512342159),
        (GateKind::Fredkin, 0.9981662621384155),
    ];
    for (kind, want) in pre_frozen {
        let b = fidelity_breakdown(
            &builtin_netlist(kind),
            kind,
            &Pair::from_moduli(1.0, 0.951220),
            &Spins::uniform(kind.spin_count()),
        )
        .unwrap();
        assert!((b.photon_inclusive - want).abs() < 1e-10, "{}: {}", kind, b.photon_inclusive);
    }
    for kind in [GateKind::Cnot, GateKind::Toffoli] {
        for &(m0, mh) in &[(1.0, 0.951220), (0.5, 0.9), (0.3, 0.7), (0.0, 0.0), (1.0, 1.0)] {
            let b = fidelity_breakdown(
                &builtin_netlist(kind),
                kind,
                &Pair::from_moduli(m0, mh),
                &Spins::uniform(kind.spin_count()),
            )
            .unwrap();
            let closed = closed_form_fidelity_squared(kind, m0, mh);
            assert!((b.photon_inclusive - closed).abs() < 1e-12, "{} ({}, {}): {} vs {}", kind, m0, mh, b.photon_inclusive, closed);
        }
    }
}
