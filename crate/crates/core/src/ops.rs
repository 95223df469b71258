//! Small complex operators: 2×2 single-subsystem operators, 4×4 joint
//! polarization–spin operators and dense square matrices for gate unitaries.

use std::fmt;

use crate::scalar::{c, frac_1_sqrt_2, re, Real, C};

/// Operator on one two-level subsystem, row-major.
pub type Op2<T> = [[C<T>; 2]; 2];

/// Operator on (polarization ⊗ spin) in the ordered basis (R↑, L↑, R↓, L↓).
pub type Op4<T> = [[C<T>; 4]; 4];

pub fn identity2<T: Real>() -> Op2<T> {
    diag2(re(T::one()), re(T::one()))
}

pub fn diag2<T: Real>(a: C<T>, b: C<T>) -> Op2<T> {
    let z = C::new(T::zero(), T::zero());
    [[a, z], [z, b]]
}

/// Hadamard: first basis state → (|0⟩+|1⟩)/√2, second → (|0⟩−|1⟩)/√2.
pub fn hadamard<T: Real>() -> Op2<T> {
    let h = re(frac_1_sqrt_2::<T>());
    [[h, h], [h, -h]]
}

pub fn pauli_z<T: Real>() -> Op2<T> {
    diag2(re(T::one()), re(-T::one()))
}

pub fn diag4<T: Real>(d: [C<T>; 4]) -> Op4<T> {
    let z = c(T::zero(), T::zero());
    let mut m = [[z; 4]; 4];
    for (i, v) in d.into_iter().enumerate() {
        m[i][i] = v;
    }
    m
}

pub fn identity4<T: Real>() -> Op4<T> {
    diag4([re(T::one()); 4])
}

#[inline]
pub fn apply2<T: Real>(op: &Op2<T>, v: [C<T>; 2]) -> [C<T>; 2] {
    [
        op[0][0] * v[0] + op[0][1] * v[1],
        op[1][0] * v[0] + op[1][1] * v[1],
    ]
}

#[inline]
pub fn apply4<T: Real>(op: &Op4<T>, v: [C<T>; 4]) -> [C<T>; 4] {
    let mut out = [c(T::zero(), T::zero()); 4];
    for (i, row) in op.iter().enumerate() {
        out[i] = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    }
    out
}

/// Largest singular value bound used to classify operators: returns the
/// maximum deviation of `op† op` from the identity.
pub fn unitarity_defect4<T: Real>(op: &Op4<T>) -> T {
    let mut worst = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            let s: C<T> = op.iter().map(|row| row[i].conj() * row[j]).sum();
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((s - re(target)).norm());
        }
    }
    worst
}

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![c(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, re(T::one()));
        }
        m
    }

    /// Permutation matrix sending basis index `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zeros(perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, re(T::one()));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: C<T>) {
        self.data[row * self.dim + col] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let s = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.dim, v.len(), "vector dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self.get(i, k) * v[k]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Every row and column holds exactly one entry equal to 1, all others 0.
    pub fn is_permutation(&self) -> bool {
        let one = re(T::one());
        let zero = re(T::zero());
        let rows_ok = (0..self.dim).all(|i| {
            (0..self.dim).filter(|&j| self.get(i, j) == one).count() == 1
                && (0..self.dim).all(|j| self.get(i, j) == one || self.get(i, j) == zero)
        });
        let cols_ok = (0..self.dim).all(|j| (0..self.dim).filter(|&i| self.get(i, j) == one).count() == 1);
        rows_ok && cols_ok
    }
}

impl<T: Real> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| format!("{}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_is_involutive() {
        let h = hadamard::<f64>();
        let mut hh = [[C::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                hh[i][j] = h[i][0] * h[0][j] + h[i][1] * h[1][j];
            }
        }
        let id = identity2::<f64>();
        for i in 0..2 {
            for j in 0..2 {
                assert!((hh[i][j] - id[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn unitarity_defect_of_lossy_diag() {
        let d = diag4([re(-0.5), re(0.9), re(0.9), re(-0.5)]);
        assert!((unitarity_defect4::<f64>(&d) - 0.75).abs() < 1e-15);
        assert_eq!(unitarity_defect4::<f64>(&identity4()), 0.0);
    }

    #[test]
    fn permutation_matrix_detection() {
        let p = Matrix::<f64>::permutation(&[1, 0, 2, 3]);
        assert!(p.is_permutation());
        assert!(p.mul(&p).max_abs_diff(&Matrix::identity(4)) == 0.0);
        let mut q = p.clone();
        q.set(0, 0, re(0.5));
        assert!(!q.is_permutation());
    }
}
