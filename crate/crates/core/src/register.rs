//! Dense density matrices over a small register of qubits.
//!
//! Qubit 0 is the most significant bit of a basis index. Every gate is
//! applied by index manipulation in O(d^2), so 8-qubit (256-dim) states
//! stay cheap even in debug builds.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// 2x2 single-qubit operator, row-major.
pub type Gate1 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub mod gates {
    use super::{Gate1, ONE, ZERO};
    use num_complex::Complex64;

    pub const IDENTITY: Gate1 = [[ONE, ZERO], [ZERO, ONE]];
    pub const X: Gate1 = [[ZERO, ONE], [ONE, ZERO]];
    pub const Z: Gate1 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

    pub fn hadamard() -> Gate1 {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        [[s, s], [s, -s]]
    }

    pub fn mul(a: &Gate1, b: &Gate1) -> Gate1 {
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    data: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn zeros(qubits: usize) -> Self {
        let dim = 1 << qubits;
        Self {
            qubits,
            data: DMatrix::from_element(dim, dim, ZERO),
        }
    }

    /// |v><v| for an (unnormalized is fine) amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Self {
        let dim = amplitudes.len();
        assert!(
            dim.is_power_of_two(),
            "dimension {dim} is not a power of two"
        );
        let data = DMatrix::from_fn(dim, dim, |i, j| amplitudes[i] * amplitudes[j].conj());
        Self {
            qubits: dim.trailing_zeros() as usize,
            data,
        }
    }

    pub fn from_matrix(data: DMatrix<Complex64>) -> Self {
        assert!(data.is_square() && data.nrows().is_power_of_two());
        Self {
            qubits: data.nrows().trailing_zeros() as usize,
            data,
        }
    }

    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = 1 << qubits;
        let w = Complex64::new(1.0 / dim as f64, 0.0);
        Self {
            qubits,
            data: DMatrix::from_fn(dim, dim, |i, j| if i == j { w } else { ZERO }),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    fn shift(&self, qubit: usize) -> usize {
        debug_assert!(qubit < self.qubits);
        self.qubits - 1 - qubit
    }

    fn bit(&self, index: usize, qubit: usize) -> usize {
        (index >> self.shift(qubit)) & 1
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.data[(i, i)].re).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            qubits: self.qubits,
            data: self.data.map(|c| c * factor),
        }
    }

    pub fn add_assign(&mut self, other: &DensityMatrix) {
        assert_eq!(self.qubits, other.qubits);
        self.data += &other.data;
    }

    /// Largest |ρ_ij − conj(ρ_ji)|.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        // symmetrize first so tiny asymmetries don't bias the solver
        let sym = (&self.data + self.data.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Operator norm of the (Hermitian part of the) difference.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.data - &other.data;
        let herm = (&diff + diff.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// ⟨v|ρ|v⟩ for an amplitude vector over the whole register.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let d = self.dim();
        assert_eq!(v.len(), d);
        let mut acc = ZERO;
        for i in 0..d {
            if v[i] == ZERO {
                continue;
            }
            for j in 0..d {
                if v[j] != ZERO {
                    acc += v[i].conj() * self.data[(i, j)] * v[j];
                }
            }
        }
        acc.re
    }

    /// U ρ U† with U acting on one qubit.
    pub fn apply_1q(&mut self, qubit: usize, u: &Gate1) {
        let s = self.shift(qubit);
        let d = self.dim();
        let mask = 1 << s;
        // left multiply: rows
        for col in 0..d {
            for r0 in (0..d).filter(|r| r & mask == 0) {
                let r1 = r0 | mask;
                let a = self.data[(r0, col)];
                let b = self.data[(r1, col)];
                self.data[(r0, col)] = u[0][0] * a + u[0][1] * b;
                self.data[(r1, col)] = u[1][0] * a + u[1][1] * b;
            }
        }
        // right multiply by U†: columns
        for row in 0..d {
            for c0 in (0..d).filter(|c| c & mask == 0) {
                let c1 = c0 | mask;
                let a = self.data[(row, c0)];
                let b = self.data[(row, c1)];
                self.data[(row, c0)] = a * u[0][0].conj() + b * u[0][1].conj();
                self.data[(row, c1)] = a * u[1][0].conj() + b * u[1][1].conj();
            }
        }
    }

    /// Applies a basis permutation `index -> map(index)` (a permutation unitary).
    pub fn permute(&mut self, map: impl Fn(usize) -> usize) {
        let d = self.dim();
        let perm: Vec<usize> = (0..d).map(&map).collect();
        let mut out = DMatrix::from_element(d, d, ZERO);
        for i in 0..d {
            for j in 0..d {
                out[(perm[i], perm[j])] = self.data[(i, j)];
            }
        }
        self.data = out;
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let cs = self.shift(control);
        let ts = self.shift(target);
        self.permute(|i| if (i >> cs) & 1 == 1 { i ^ (1 << ts) } else { i });
    }

    /// √D ρ √D for D diagonal on one qubit with entries (d0, d1).
    pub fn scale_diagonal(&mut self, qubit: usize, d0: f64, d1: f64) {
        let roots = [d0.sqrt(), d1.sqrt()];
        let d = self.dim();
        for i in 0..d {
            let si = roots[self.bit(i, qubit)];
            for j in 0..d {
                let sj = roots[self.bit(j, qubit)];
                self.data[(i, j)] *= si * sj;
            }
        }
    }

    /// Keeps only the block where `qubit` reads `value`.
    pub fn project(&mut self, qubit: usize, value: usize) {
        self.scale_diagonal(
            qubit,
            if value == 0 { 1.0 } else { 0.0 },
            if value == 1 { 1.0 } else { 0.0 },
        );
    }

    /// Replaces `qubit` with I/2, keeping the partial trace over it.
    pub fn replace_with_mixed(&mut self, qubit: usize) {
        let s = self.shift(qubit);
        let mask = 1 << s;
        let d = self.dim();
        let mut out = DMatrix::from_element(d, d, ZERO);
        for i in 0..d {
            for j in 0..d {
                if (i & mask) != (j & mask) {
                    continue;
                }
                let i0 = i & !mask;
                let j0 = j & !mask;
                let reduced = self.data[(i0, j0)] + self.data[(i0 | mask, j0 | mask)];
                out[(i, j)] = reduced * 0.5;
            }
        }
        self.data = out;
    }

    /// Partial trace keeping `keep` (in the given order, which becomes the
    /// new qubit order).
    pub fn partial_trace(&self, keep: &[usize]) -> DensityMatrix {
        let traced: Vec<usize> = (0..self.qubits).filter(|q| !keep.contains(q)).collect();
        let kd = 1 << keep.len();
        let td = 1 << traced.len();
        let compose = |k: usize, t: usize| -> usize {
            let mut idx = 0;
            for (pos, &q) in keep.iter().enumerate() {
                let b = (k >> (keep.len() - 1 - pos)) & 1;
                idx |= b << self.shift(q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let b = (t >> (traced.len() - 1 - pos)) & 1;
                idx |= b << self.shift(q);
            }
            idx
        };
        let mut out = DMatrix::from_element(kd, kd, ZERO);
        for a in 0..kd {
            for b in 0..kd {
                let mut acc = ZERO;
                for t in 0..td {
                    acc += self.data[(compose(a, t), compose(b, t))];
                }
                out[(a, b)] = acc;
            }
        }
        DensityMatrix {
            qubits: keep.len(),
            data: out,
        }
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            qubits: self.qubits + other.qubits,
            data: self.data.kronecker(&other.data),
        }
    }
}
