//! Dense spin-register states.
//!
//! Index convention: spin 0 is the most significant bit, `0 = ↑`, `1 = ↓`.
//! For a CNOT register (control, target) the index of |↓↑⟩ is `0b10 = 2`.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::StateError;
use crate::ops::{apply2, Matrix, Op2};
use crate::scalar::{c, re, Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn bit(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            Spin::Up
        } else {
            Spin::Down
        }
    }

    pub fn arrow(self) -> char {
        match self {
            Spin::Up => '↑',
            Spin::Down => '↓',
        }
    }
}

/// Bit of spin `k` inside a register index.
#[inline]
pub fn spin_bit(index: usize, k: usize, count: usize) -> usize {
    (index >> (count - 1 - k)) & 1
}

pub fn spins_to_index(spins: &[Spin]) -> usize {
    spins.iter().fold(0, |acc, s| (acc << 1) | s.bit())
}

pub fn index_to_spins(index: usize, count: usize) -> Vec<Spin> {
    (0..count).map(|k| Spin::from_bit(spin_bit(index, k, count))).collect()
}

/// Arrow string for a register index, e.g. `↓↑↓`.
pub fn ket_label(index: usize, count: usize) -> String {
    index_to_spins(index, count).into_iter().map(Spin::arrow).collect()
}

/// State of `count` spins as a vector of `2^count` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState<T> {
    count: usize,
    amps: Vec<C<T>>,
}

impl<T: Real> SpinState<T> {
    pub fn new(count: usize, amps: Vec<C<T>>) -> Result<Self, StateError> {
        let expected = 1usize << count;
        if amps.len() != expected {
            return Err(StateError::WrongDimension { expected, found: amps.len() });
        }
        Ok(Self { count, amps })
    }

    pub fn basis(count: usize, index: usize) -> Self {
        let mut amps = vec![c(T::zero(), T::zero()); 1 << count];
        amps[index] = re(T::one());
        Self { count, amps }
    }

    pub fn from_spins(spins: &[Spin]) -> Self {
        Self::basis(spins.len(), spins_to_index(spins))
    }

    /// Equal-weight superposition of all `2^count` basis states.
    pub fn uniform(count: usize) -> Self {
        let dim = 1usize << count;
        let a = T::one() / T::lit(dim as f64).sqrt();
        Self { count, amps: vec![re(a); dim] }
    }

    /// Haar-like random unit state (normalized complex Gaussian entries).
    pub fn random<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Self {
        let dim = 1usize << count;
        let amps = (0..dim)
            .map(|_| c(T::lit(rng.sample(StandardNormal)), T::lit(rng.sample(StandardNormal))))
            .collect();
        Self { count, amps }.normalized().expect("gaussian vector is nonzero")
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C<T> {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Unit-norm copy, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm_sqr().sqrt();
        if n <= T::zero() {
            return None;
        }
        Some(self.scaled(re(T::one() / n)))
    }

    pub fn scaled(&self, k: C<T>) -> Self {
        Self { count: self.count, amps: self.amps.iter().map(|a| a * k).collect() }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C<T>, StateError> {
        self.check_shape(other)?;
        Ok(self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    /// |⟨self|other⟩|, the global-phase-insensitive overlap.
    pub fn overlap(&self, other: &Self) -> Result<T, StateError> {
        Ok(self.inner(other)?.norm())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T, StateError> {
        self.check_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }

    /// Apply `op` to spin `k` in the {↑, ↓} basis.
    pub fn apply_single(&self, k: usize, op: &Op2<T>) -> Result<Self, StateError> {
        if k >= self.count {
            return Err(StateError::SpinIndexOutOfRange { index: k, count: self.count });
        }
        let stride = 1usize << (self.count - 1 - k);
        let mut amps = self.amps.clone();
        for i in 0..amps.len() {
            if i & stride == 0 {
                let [a, b] = apply2(op, [self.amps[i], self.amps[i | stride]]);
                amps[i] = a;
                amps[i | stride] = b;
            }
        }
        Ok(Self { count: self.count, amps })
    }

    pub fn apply_matrix(&self, m: &Matrix<T>) -> Result<Self, StateError> {
        if m.dim() != self.dim() {
            return Err(StateError::WrongDimension { expected: self.dim(), found: m.dim() });
        }
        Ok(Self { count: self.count, amps: m.apply(&self.amps) })
    }

    fn check_shape(&self, other: &Self) -> Result<(), StateError> {
        if self.count != other.count {
            return Err(StateError::IncompatibleShapes { left: self.count, right: other.count });
        }
        Ok(())
    }
}

impl<T: Real> fmt::Display for SpinState<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() <= T::lit(1e-15) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})|{}⟩", fmt_complex(*a), ket_label(i, self.count))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Compact complex formatting with 9 significant digits.
pub fn fmt_complex<T: Real>(a: C<T>) -> String {
    let (x, y) = (a.re.as_f64(), a.im.as_f64());
    if y.abs() <= 1e-15 {
        crate::format::sig9(x)
    } else if x.abs() <= 1e-15 {
        format!("{}i", crate::format::sig9(y))
    } else {
        let sign = if y < 0.0 { '-' } else { '+' };
        format!("{}{}{}i", crate::format::sig9(x), sign, crate::format::sig9(y.abs()))
    }
}
