//! L-operators, (partial) monodromy matrices and the pseudovacuum.
//!
//! The local L-operator is the R-matrix itself read as an operator on
//! `V ⊗ hⱼ`, scaled by `φ(λ − ξⱼ)` so that it has no poles:
//!
//! ```text
//! A = diag(α, δ)   B = c·σ⁻   C = c·σ⁺   D = diag(δ, α)
//! α(λ, ξ) = φ(λ − ξ + s)      δ(λ, ξ) = φ(λ − ξ)
//! ```
//!
//! For the rational kernel this is `L(λ, ξ) = (λ − ξ)·Id + P`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, StateVector};
use crate::rmatrix::{build_r_matrix, Kernel};
use crate::scalar::{Mode, Scalar};

/// Largest chain handled by the dense representation (4096-dimensional).
pub const MAX_SITES: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    kernel: Kernel,
    xi: Vec<Scalar>,
    mode: Mode,
}

impl ChainSpec {
    pub fn new(kernel: Kernel, xi: Vec<Scalar>, mode: Mode) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::InvalidChain("chain needs at least one site".into()));
        }
        if xi.len() > MAX_SITES {
            return Err(Error::DimensionCap {
                n: xi.len(),
                cap: MAX_SITES,
            });
        }
        if !kernel.supports(mode) {
            return Err(Error::InvalidChain(
                "exact mode requires the rational kernel".into(),
            ));
        }
        let xi = xi
            .into_iter()
            .map(|x| x.to_mode(mode))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ChainSpec { kernel, xi, mode })
    }

    pub fn homogeneous(kernel: Kernel, n: usize, xi: Scalar, mode: Mode) -> Result<Self> {
        ChainSpec::new(kernel, vec![xi; n], mode)
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn xi(&self) -> &[Scalar] {
        &self.xi
    }

    /// Inhomogeneity of site `j` (1-based).
    pub fn xi_at(&self, j: usize) -> Result<&Scalar> {
        self.check_site(j)?;
        Ok(&self.xi[j - 1])
    }

    pub fn is_homogeneous(&self) -> bool {
        self.xi.windows(2).all(|w| w[0] == w[1])
    }

    pub fn full_range(&self) -> SiteRange {
        SiteRange {
            first: 1,
            last: self.len(),
        }
    }

    pub fn range(&self, first: usize, last: usize) -> Result<SiteRange> {
        if first < 1 || first > last || last > self.len() {
            return Err(Error::InvalidRange {
                first,
                last,
                n: self.len(),
            });
        }
        Ok(SiteRange { first, last })
    }

    fn check_site(&self, j: usize) -> Result<()> {
        if j < 1 || j > self.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                n: self.len(),
            });
        }
        Ok(())
    }

    /// Brings a spectral parameter into the chain's arithmetic mode.
    pub fn coerce(&self, x: &Scalar) -> Result<Scalar> {
        Ok(x.to_mode(self.mode)?)
    }

    pub fn alpha(&self, lambda: &Scalar, j: usize) -> Result<Scalar> {
        self.kernel.alpha(lambda, self.xi_at(j)?)
    }

    pub fn delta(&self, lambda: &Scalar, j: usize) -> Result<Scalar> {
        self.kernel.delta(lambda, self.xi_at(j)?)
    }
}

/// Contiguous 1-based site range `[first, last]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SiteRange {
    pub first: usize,
    pub last: usize,
}

impl SiteRange {
    pub fn len(&self) -> usize {
        self.last + 1 - self.first
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<usize> {
        self.first..=self.last
    }
}

/// Auxiliary-space 2×2 matrix `[[A, B], [C, D]]` with operator entries on
/// the quantum space of `range`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBlock {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub d: Matrix,
    pub range: SiteRange,
}

impl OperatorBlock {
    pub fn identity(range: SiteRange, mode: Mode) -> Self {
        let dim = 1 << range.len();
        OperatorBlock {
            a: Matrix::identity(dim, mode),
            b: Matrix::zeros(dim, dim, mode),
            c: Matrix::zeros(dim, dim, mode),
            d: Matrix::identity(dim, mode),
            range,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.range.len()
    }

    pub fn mode(&self) -> Mode {
        self.a.mode()
    }

    /// Auxiliary entry `(row, col)`, 0-based: `(0,0)=A, (0,1)=B, (1,0)=C, (1,1)=D`.
    pub fn entry(&self, row: usize, col: usize) -> &Matrix {
        match (row, col) {
            (0, 0) => &self.a,
            (0, 1) => &self.b,
            (1, 0) => &self.c,
            (1, 1) => &self.d,
            _ => panic!("auxiliary index out of range"),
        }
    }

    pub fn trace(&self) -> Matrix {
        self.a.add(&self.d)
    }
}

/// `L_j(λ, ξⱼ)` for site `j` (1-based).
pub fn l_operator(spec: &ChainSpec, j: usize, lambda: &Scalar) -> Result<OperatorBlock> {
    let lambda = spec.coerce(lambda)?;
    let mode = spec.mode();
    let alpha = spec.alpha(&lambda, j)?;
    let delta = spec.delta(&lambda, j)?;
    let c = spec.kernel().coupling(mode)?;
    let zero = || Scalar::zero(mode);
    let diag = |x: &Scalar, y: &Scalar| {
        Matrix::from_fn(2, 2, mode, |r, col| match (r, col) {
            (0, 0) => x.clone(),
            (1, 1) => y.clone(),
            _ => zero(),
        })
    };
    let single = |row: usize, col: usize| {
        Matrix::from_fn(2, 2, mode, |r, k| {
            if (r, k) == (row, col) {
                c.clone()
            } else {
                zero()
            }
        })
    };
    Ok(OperatorBlock {
        a: diag(&alpha, &delta),
        b: single(1, 0),
        c: single(0, 1),
        d: diag(&delta, &alpha),
        range: SiteRange { first: j, last: j },
    })
}

/// Product `left · right` in auxiliary space; quantum factors combine by
/// tensor product, e.g. `B = A₁⊗B₂ + B₁⊗D₂`.
pub fn multiply_blocks(left: &OperatorBlock, right: &OperatorBlock) -> Result<OperatorBlock> {
    if left.range.last + 1 != right.range.first {
        return Err(Error::NonAdjacentRanges {
            left_first: left.range.first,
            left_last: left.range.last,
            right_first: right.range.first,
            right_last: right.range.last,
        });
    }
    let entry = |row: usize, col: usize| {
        left.entry(row, 0)
            .kron(right.entry(0, col))
            .add(&left.entry(row, 1).kron(right.entry(1, col)))
    };
    Ok(OperatorBlock {
        a: entry(0, 0),
        b: entry(0, 1),
        c: entry(1, 0),
        d: entry(1, 1),
        range: SiteRange {
            first: left.range.first,
            last: right.range.last,
        },
    })
}

/// `T(λ | range) = L_first ⋯ L_last`.
pub fn partial_monodromy(
    spec: &ChainSpec,
    range: SiteRange,
    lambda: &Scalar,
) -> Result<OperatorBlock> {
    let range = spec.range(range.first, range.last)?;
    let mut acc = l_operator(spec, range.first, lambda)?;
    for j in range.first + 1..=range.last {
        acc = multiply_blocks(&acc, &l_operator(spec, j, lambda)?)?;
    }
    Ok(acc)
}

pub fn monodromy(spec: &ChainSpec, lambda: &Scalar) -> Result<OperatorBlock> {
    partial_monodromy(spec, spec.full_range(), lambda)
}

/// All-up product state on `n` sites.
pub fn pseudovacuum(n: usize, mode: Mode) -> StateVector {
    StateVector::basis(n, 0, mode)
}

/// `(a(λ), d(λ))` restricted to `range`: products of the local α, δ.
pub fn partial_vacuum_eigenvalues(
    spec: &ChainSpec,
    range: SiteRange,
    lambda: &Scalar,
) -> Result<(Scalar, Scalar)> {
    let range = spec.range(range.first, range.last)?;
    let lambda = spec.coerce(lambda)?;
    let mut a = Scalar::one(spec.mode());
    let mut d = Scalar::one(spec.mode());
    for j in range.sites() {
        a = a * spec.alpha(&lambda, j)?;
        d = d * spec.delta(&lambda, j)?;
    }
    Ok((a, d))
}

pub fn vacuum_eigenvalues(spec: &ChainSpec, lambda: &Scalar) -> Result<(Scalar, Scalar)> {
    partial_vacuum_eigenvalues(spec, spec.full_range(), lambda)
}

/// Max-norm of `R₁₂(λ,μ) T₁(λ) T₂(μ) − T₂(μ) T₁(λ) R₁₂(λ,μ)` on
/// `V₁ ⊗ V₂ ⊗ ℋ`, i.e. the largest violation among all 16 bilinear
/// relations between the entries of `T(λ)` and `T(μ)`.
pub fn rtt_residual(
    spec: &ChainSpec,
    range: SiteRange,
    lambda: &Scalar,
    mu: &Scalar,
) -> Result<f64> {
    let (lambda, mu) = (spec.coerce(lambda)?, spec.coerce(mu)?);
    let r = build_r_matrix(spec.kernel(), &lambda, &mu)?;
    let t_lambda = partial_monodromy(spec, range, &lambda)?;
    let t_mu = partial_monodromy(spec, range, &mu)?;

    // Composite auxiliary index I = 2·a₁ + a₂.
    let split = |index: usize| (index >> 1, index & 1);
    let mut forward = Vec::with_capacity(16);
    let mut backward = Vec::with_capacity(16);
    for k in 0..4 {
        for j in 0..4 {
            let ((k1, k2), (j1, j2)) = (split(k), split(j));
            let tl = t_lambda.entry(k1, j1);
            let tm = t_mu.entry(k2, j2);
            forward.push(tl.mul(tm));
            backward.push(tm.mul(tl));
        }
    }

    let mut residual: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let dim = 1 << range.len();
            let mut lhs = Matrix::zeros(dim, dim, spec.mode());
            let mut rhs = Matrix::zeros(dim, dim, spec.mode());
            for k in 0..4 {
                let r_ik = r.get(i, k);
                if !r_ik.is_zero() {
                    lhs = lhs.add(&forward[4 * k + j].scale(r_ik));
                }
                let r_kj = r.get(k, j);
                if !r_kj.is_zero() {
                    rhs = rhs.add(&backward[4 * i + k].scale(r_kj));
                }
            }
            residual = residual.max(lhs.sub(&rhs).max_abs());
        }
    }
    Ok(residual)
}

/// Residuals of the explicitly listed exchange relations, each as an
/// operator max-norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutationResiduals {
    /// `[B(λ), B(μ)]`
    pub bb: f64,
    /// `A(μ)B(λ) − f(λ,μ)B(λ)A(μ) − g(μ,λ)B(μ)A(λ)`
    pub ab: f64,
    /// `B(μ)A(λ) − f(λ,μ)A(λ)B(μ) − g(μ,λ)A(μ)B(λ)`
    pub ba: f64,
    /// `D(μ)B(λ) − f(μ,λ)B(λ)D(μ) − g(λ,μ)B(μ)D(λ)`
    pub db: f64,
}

impl CommutationResiduals {
    pub fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("ab", self.ab),
            ("ba", self.ba),
            ("bb", self.bb),
            ("db", self.db),
        ]
    }

    pub fn max(&self) -> f64 {
        self.named().iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

pub fn commutation_residuals(
    spec: &ChainSpec,
    lambda: &Scalar,
    mu: &Scalar,
) -> Result<CommutationResiduals> {
    let (lambda, mu) = (spec.coerce(lambda)?, spec.coerce(mu)?);
    let k = spec.kernel();
    let tl = monodromy(spec, &lambda)?;
    let tm = monodromy(spec, &mu)?;
    let f_lm = k.f(&lambda, &mu)?;
    let f_ml = k.f(&mu, &lambda)?;
    let g_lm = k.g(&lambda, &mu)?;
    let g_ml = k.g(&mu, &lambda)?;

    let bb = tl.b.commutator(&tm.b).max_abs();
    let ab =
        tm.a.mul(&tl.b)
            .sub(&tl.b.mul(&tm.a).scale(&f_lm))
            .sub(&tm.b.mul(&tl.a).scale(&g_ml))
            .max_abs();
    let ba =
        tm.b.mul(&tl.a)
            .sub(&tl.a.mul(&tm.b).scale(&f_lm))
            .sub(&tm.a.mul(&tl.b).scale(&g_ml))
            .max_abs();
    let db =
        tm.d.mul(&tl.b)
            .sub(&tl.b.mul(&tm.d).scale(&f_ml))
            .sub(&tm.b.mul(&tl.d).scale(&g_lm))
            .max_abs();
    Ok(CommutationResiduals { bb, ab, ba, db })
}

/// Max-norm of `Bⱼ(λ)Bⱼ(μ)` as a 2×2 matrix on one site.
pub fn local_nilpotency_residual(
    spec: &ChainSpec,
    j: usize,
    lambda: &Scalar,
    mu: &Scalar,
) -> Result<f64> {
    let bl = l_operator(spec, j, lambda)?.b;
    let bm = l_operator(spec, j, mu)?.b;
    Ok(bl.mul(&bm).max_abs())
}

/// Largest deviation of `A|0⟩ = a|0⟩`, `D|0⟩ = d|0⟩`, `C|0⟩ = 0` on `range`.
pub fn vacuum_residual(spec: &ChainSpec, range: SiteRange, lambda: &Scalar) -> Result<f64> {
    let t = partial_monodromy(spec, range, lambda)?;
    let (a, d) = partial_vacuum_eigenvalues(spec, range, lambda)?;
    let vac = pseudovacuum(range.len(), spec.mode());
    let a_res = vac.apply(&t.a).sub(&vac.scaled(&a)).max_abs();
    let d_res = vac.apply(&t.d).sub(&vac.scaled(&d)).max_abs();
    let c_res = vac.apply(&t.c).max_abs();
    Ok(a_res.max(d_res).max(c_res))
}
