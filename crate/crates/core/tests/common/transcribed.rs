//! Hand-transcribed intermediate and output states of the built-in circuits
//! at the ideal reflection pair, as functions of the input amplitudes.
//!
//! Shared by the golden tests and the acceptance harness.

#![allow(dead_code)]

use num_complex::Complex64;
use qdcavity::{BasisKet, GateKind, HybridState, ModeLabel, Polarization, Spin, Spins};

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Clone, Copy)]
pub enum P {
    R,
    L,
    Plus,
    Minus,
}

pub fn spins(bits: &str) -> Vec<Spin> {
    bits.chars().map(|c| if c == '0' { Spin::Up } else { Spin::Down }).collect()
}

pub fn idx(bits: &str) -> usize {
    usize::from_str_radix(bits, 2).unwrap()
}

/// Terms (polarization, mode, spin bits, amplitude); |±⟩ expands into R and L.
pub fn hybrid(n: usize, terms: &[(P, &str, &str, Complex64)]) -> HybridState<f64> {
    let mut kets = Vec::new();
    for &(p, mode, bits, a) in terms {
        let mode = ModeLabel::new(mode).unwrap();
        let push = |kets: &mut Vec<(BasisKet, Complex64)>, pol, amp| {
            kets.push((BasisKet::new(pol, mode.clone(), spins(bits)), amp))
        };
        match p {
            P::R => push(&mut kets, Polarization::R, a),
            P::L => push(&mut kets, Polarization::L, a),
            P::Plus => {
                push(&mut kets, Polarization::R, a * H);
                push(&mut kets, Polarization::L, a * H);
            }
            P::Minus => {
                push(&mut kets, Polarization::R, a * H);
                push(&mut kets, Polarization::L, -a * H);
            }
        }
    }
    HybridState::new(n, kets).unwrap()
}

pub fn spin_state(n: usize, terms: &[(&str, Complex64)]) -> Spins {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for &(bits, a) in terms {
        amps[idx(bits)] += a;
    }
    Spins::new(n, amps).unwrap()
}

fn cnot_bracket(a: &[Complex64], s: f64) -> Vec<(&'static str, Complex64)> {
    vec![("00", a[0]), ("01", a[1]), ("11", a[2] * s), ("10", a[3] * s)]
}

fn toffoli_bracket(a: &[Complex64], s: [f64; 4]) -> Vec<(&'static str, Complex64)> {
    vec![
        ("000", a[0] * s[0]),
        ("001", a[1] * s[0]),
        ("010", a[2] * s[1]),
        ("011", a[3] * s[1]),
        ("100", a[4] * s[2]),
        ("101", a[5] * s[2]),
        ("111", a[6] * s[3]),
        ("110", a[7] * s[3]),
    ]
}

/// (label, detector mode, polarization reaching it, bracket signs)
pub const TOFFOLI_SIGNS: [(&str, &str, P, [f64; 4]); 4] = [
    ("D1+", "26", P::Plus, [1.0, 1.0, 1.0, 1.0]),
    ("D1-", "27", P::Minus, [-1.0, 1.0, 1.0, -1.0]),
    ("D2+", "28", P::Plus, [1.0, 1.0, -1.0, -1.0]),
    ("D2-", "29", P::Minus, [-1.0, 1.0, -1.0, 1.0]),
];

/// Where each input amplitude ends up after the ideal gate, as (c, t1, t2) bits.
const FREDKIN_OUT: [&str; 8] = ["000", "001", "010", "011", "100", "110", "101", "111"];

fn fredkin_bracket(a: &[Complex64], s: [f64; 8]) -> Vec<(&'static str, Complex64)> {
    FREDKIN_OUT.iter().zip(a.iter().zip(s)).map(|(bits, (x, k))| (*bits, x * k)).collect()
}

pub const FREDKIN_SIGNS: [(&str, &str, P, [f64; 8]); 4] = [
    ("D1+", "25", P::Plus, [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
    ("D1-", "26", P::Minus, [-1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, 1.0]),
    ("D2+", "27", P::Plus, [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]),
    ("D2-", "28", P::Minus, [-1.0, 1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0]),
];

/// Ideal gate output.
pub fn target(kind: GateKind, a: &[Complex64]) -> Spins {
    match kind {
        GateKind::Cnot => spin_state(2, &cnot_bracket(a, 1.0)),
        GateKind::Toffoli => spin_state(3, &toffoli_bracket(a, [1.0; 4])),
        GateKind::Fredkin => spin_state(3, &fredkin_bracket(a, [1.0; 8])),
    }
}

/// Spin state left behind by each detector before any correction.
pub fn raw_brackets(kind: GateKind, a: &[Complex64]) -> Vec<(&'static str, Spins)> {
    match kind {
        GateKind::Cnot => vec![
            ("D+", spin_state(2, &cnot_bracket(a, 1.0))),
            ("D-", spin_state(2, &cnot_bracket(a, -1.0))),
        ],
        GateKind::Toffoli => {
            TOFFOLI_SIGNS.iter().map(|&(l, _, _, s)| (l, spin_state(3, &toffoli_bracket(a, s)))).collect()
        }
        GateKind::Fredkin => {
            FREDKIN_SIGNS.iter().map(|&(l, _, _, s)| (l, spin_state(3, &fredkin_bracket(a, s)))).collect()
        }
    }
}

/// Global phase the tabulated correction leaves on an outcome.
pub fn correction_phase(kind: GateKind, label: &str) -> f64 {
    if kind == GateKind::Fredkin && label == "D2-" {
        -1.0
    } else {
        1.0
    }
}

/// Named checkpoints in netlist order.
pub fn checkpoints(kind: GateKind, a: &[Complex64]) -> Vec<(&'static str, HybridState<f64>)> {
    match kind {
        GateKind::Cnot => vec![(
            "pre-measurement",
            hybrid(2, &[(P::R, "9", "00", a[0]), (P::R, "9", "01", a[1]), (P::L, "9", "11", a[2]), (P::L, "9", "10", a[3])]),
        )],
        GateKind::Toffoli => {
            let xi1 = hybrid(
                3,
                &[
                    (P::L, "5", "000", a[0]),
                    (P::L, "5", "001", a[1]),
                    (P::L, "5", "010", a[2]),
                    (P::L, "5", "011", a[3]),
                    (P::R, "5", "100", a[4]),
                    (P::R, "5", "101", a[5]),
                    (P::R, "5", "110", a[6]),
                    (P::R, "5", "111", a[7]),
                ],
            );
            let xi2 = hybrid(
                3,
                &[
                    (P::L, "18", "000", a[0]),
                    (P::L, "18", "001", a[1]),
                    (P::R, "18", "010", a[2]),
                    (P::R, "18", "011", a[3]),
                    (P::R, "19", "100", a[4]),
                    (P::R, "19", "101", a[5]),
                    (P::L, "19", "110", a[6]),
                    (P::L, "19", "111", a[7]),
                ],
            );
            let xi3 = hybrid(
                3,
                &[
                    (P::L, "18", "000", a[0]),
                    (P::L, "18", "001", a[1]),
                    (P::R, "18", "010", a[2]),
                    (P::R, "18", "011", a[3]),
                    (P::R, "23", "100", a[4]),
                    (P::R, "23", "101", a[5]),
                    (P::L, "23", "111", a[6]),
                    (P::L, "23", "110", a[7]),
                ],
            );
            let mut terms = Vec::new();
            for (_, mode, pol, s) in TOFFOLI_SIGNS {
                for (bits, amp) in toffoli_bracket(a, s) {
                    terms.push((pol, mode, bits, amp * 0.5));
                }
            }
            vec![("Xi1", xi1), ("Xi2", xi2), ("Xi3", xi3), ("Xi4", hybrid(3, &terms))]
        }
        GateKind::Fredkin => {
            let pi1 = hybrid(
                3,
                &[
                    (P::L, "5", "000", a[0]),
                    (P::L, "5", "001", a[1]),
                    (P::L, "5", "010", a[2]),
                    (P::L, "5", "011", a[3]),
                    (P::R, "5", "100", a[4]),
                    (P::R, "5", "101", a[5]),
                    (P::R, "5", "110", a[6]),
                    (P::R, "5", "111", a[7]),
                ],
            );
            // each amplitude keeps the index of its input label
            let xi2 = hybrid(
                3,
                &[
                    (P::L, "22", "000", a[0]),
                    (P::R, "22", "001", a[1]),
                    (P::R, "22", "010", a[2]),
                    (P::L, "22", "011", a[3]),
                    (P::R, "20", "100", a[4]),
                    (P::L, "20", "101", a[5]),
                    (P::L, "20", "110", a[6]),
                    (P::R, "20", "111", a[7]),
                ],
            );
            let xi3 = hybrid(
                3,
                &[
                    (P::L, "22", "000", a[0]),
                    (P::R, "22", "001", a[1]),
                    (P::R, "22", "010", a[2]),
                    (P::L, "22", "011", a[3]),
                    (P::R, "21", "100", a[4]),
                    (P::L, "21", "110", a[5]),
                    (P::L, "21", "101", a[6]),
                    (P::R, "21", "111", a[7]),
                ],
            );
            let mut terms = Vec::new();
            for (_, mode, pol, s) in FREDKIN_SIGNS {
                for (bits, amp) in fredkin_bracket(a, s) {
                    terms.push((pol, mode, bits, amp * 0.5));
                }
            }
            vec![("Pi1", pi1), ("Xi2", xi2), ("Xi3", xi3), ("Xi4", hybrid(3, &terms))]
        }
    }
}
