//! Dense matrices and state vectors over [`Scalar`].
//!
//! Storage is row-major and dense. Products skip zero entries of the left
//! factor, which keeps exact-rational arithmetic affordable on the sparse
//! operators that appear here (monodromy entries conserve the down-spin
//! count).

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::scalar::{Mode, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    mode: Mode,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, mode: Mode) -> Self {
        Matrix {
            rows,
            cols,
            mode,
            data: vec![Scalar::zero(mode); rows * cols],
        }
    }

    pub fn identity(n: usize, mode: Mode) -> Self {
        let mut m = Matrix::zeros(n, n, mode);
        for i in 0..n {
            m[(i, i)] = Scalar::one(mode);
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mode: Mode,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let value = f(i, j);
                debug_assert_eq!(value.mode(), mode);
                data.push(value);
            }
        }
        Matrix {
            rows,
            cols,
            mode,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols, self.mode);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let term = a * b;
                    let slot = &mut out[(i, j)];
                    *slot = &*slot + &term;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            mode: self.mode,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            mode: self.mode,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs`; `self` indexes the slow positions.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Matrix::zeros(rows, cols, self.mode);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = &rhs[(k, l)];
                        if !b.is_zero() {
                            out[(i * rhs.rows + k, j * rhs.cols + l)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.mode);
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn commutator(&self, rhs: &Matrix) -> Matrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Max-norm; exactly `0.0` iff every entry is zero.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.data.iter().map(Scalar::to_complex).collect()
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.to_complex())
    }

    /// Square submatrix on the given index set.
    pub fn submatrix(&self, indices: &[usize]) -> Matrix {
        Matrix::from_fn(indices.len(), indices.len(), self.mode, |i, j| {
            self[(indices[i], indices[j])].clone()
        })
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

pub fn max_abs(values: &[Scalar]) -> f64 {
    values.iter().map(Scalar::abs).fold(0.0, f64::max)
}

/// Amplitudes on `n_sites` spin-1/2 sites. Site 1 is the most significant
/// bit of the basis index; bit value 0 is the up (pseudovacuum) state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amplitudes: Vec<Scalar>,
}

impl StateVector {
    pub fn new(n_sites: usize, amplitudes: Vec<Scalar>) -> Self {
        assert_eq!(amplitudes.len(), 1 << n_sites, "state length must be 2^n");
        StateVector {
            n_sites,
            amplitudes,
        }
    }

    pub fn zeros(n_sites: usize, mode: Mode) -> Self {
        StateVector::new(n_sites, vec![Scalar::zero(mode); 1 << n_sites])
    }

    /// Unit amplitude on a single basis state.
    pub fn basis(n_sites: usize, index: usize, mode: Mode) -> Self {
        let mut v = StateVector::zeros(n_sites, mode);
        v.amplitudes[index] = Scalar::one(mode);
        v
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Scalar] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Scalar> {
        self.amplitudes
    }

    pub fn mode(&self) -> Mode {
        self.amplitudes[0].mode()
    }

    pub fn apply(&self, op: &Matrix) -> StateVector {
        StateVector::new(self.n_sites, op.apply(&self.amplitudes))
    }

    pub fn add_assign(&mut self, other: &StateVector) {
        assert_eq!(self.len(), other.len());
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            if !b.is_zero() {
                *a = &*a + b;
            }
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> StateVector {
        StateVector::new(
            self.n_sites,
            self.amplitudes.iter().map(|x| x * factor).collect(),
        )
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        assert_eq!(self.len(), other.len());
        StateVector::new(
            self.n_sites,
            self.amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.amplitudes)
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.iter().all(Scalar::is_zero)
    }

    /// Applies `op` (acting on sites `first..=last`, 1-based) embedded as
    /// identity ⊗ op ⊗ identity.
    pub fn apply_on_sites(&self, op: &Matrix, first: usize) -> StateVector {
        let block_dim = op.rows();
        assert!(op.is_square() && block_dim.is_power_of_two());
        let block_sites = block_dim.trailing_zeros() as usize;
        assert!(first >= 1 && first - 1 + block_sites <= self.n_sites);
        let right_sites = self.n_sites - (first - 1) - block_sites;
        let right_dim = 1usize << right_sites;
        let left_dim = 1usize << (first - 1);
        let mode = self.mode();
        let mut out = vec![Scalar::zero(mode); self.len()];
        let mut local = vec![Scalar::zero(mode); block_dim];
        for left in 0..left_dim {
            for right in 0..right_dim {
                let index = |mid: usize| (left * block_dim + mid) * right_dim + right;
                let mut any = false;
                for (mid, slot) in local.iter_mut().enumerate() {
                    *slot = self.amplitudes[index(mid)].clone();
                    any |= !slot.is_zero();
                }
                if !any {
                    continue;
                }
                for (mid, value) in op.apply(&local).into_iter().enumerate() {
                    out[index(mid)] = value;
                }
            }
        }
        StateVector::new(self.n_sites, out)
    }
}

/// Relative difference `‖u−v‖∞ / max(‖u‖∞, ‖v‖∞, 1)`.
pub fn relative_difference(u: &StateVector, v: &StateVector) -> f64 {
    let scale = u.max_abs().max(v.max_abs()).max(1.0);
    u.sub(v).max_abs() / scale
}

/// Number of down spins in a basis index.
pub fn down_count(index: usize) -> usize {
    index.count_ones() as usize
}
