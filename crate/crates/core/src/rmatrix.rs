//! R-matrix kernels and the Yang–Baxter check.
//!
//! Both kernels share one shape: with `φ(x) = x` (rational) or `φ(x) = sinh x`
//! (trigonometric), a shift `s` (`1` or `η`) and a coupling `c` (`1` or
//! `sinh η`),
//!
//! ```text
//! f(λ, μ) = φ(λ − μ + s) / φ(λ − μ)        g(λ, μ) = c / φ(λ − μ)
//! ```
//!
//! The basis of `V ⊗ V` is ordered `|11⟩, |12⟩, |21⟩, |22⟩` (first factor
//! slowest) everywhere in the crate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Mode, Scalar, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Kernel {
    Rational,
    Trigonometric { eta: Complex64 },
}

impl Kernel {
    pub fn trigonometric(eta: Complex64) -> Result<Self> {
        if eta.sinh().norm() < 1e-12 {
            return Err(Error::DegenerateKernel);
        }
        Ok(Kernel::Trigonometric { eta })
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Kernel::Rational)
    }

    pub fn supports(&self, mode: Mode) -> bool {
        self.is_rational() || mode == Mode::Float
    }

    /// `x` for the rational kernel, `sinh x` for the trigonometric one.
    pub fn phi(&self, x: &Scalar) -> Result<Scalar> {
        match self {
            Kernel::Rational => Ok(x.clone()),
            Kernel::Trigonometric { .. } => Ok(x.sinh()?),
        }
    }

    /// Additive shift in the numerator of `f`: `1` or `η`.
    pub fn shift(&self, mode: Mode) -> Result<Scalar> {
        match self {
            Kernel::Rational => Ok(Scalar::one(mode)),
            Kernel::Trigonometric { eta } => match mode {
                Mode::Float => Ok(Scalar::Float(*eta)),
                Mode::Exact => Err(ScalarError::ExactModeUnsupported.into()),
            },
        }
    }

    /// Numerator of `g`: `1` or `sinh η`.
    pub fn coupling(&self, mode: Mode) -> Result<Scalar> {
        match self {
            Kernel::Rational => Ok(Scalar::one(mode)),
            Kernel::Trigonometric { eta } => match mode {
                Mode::Float => Ok(Scalar::Float(eta.sinh())),
                Mode::Exact => Err(ScalarError::ExactModeUnsupported.into()),
            },
        }
    }

    /// `φ(λ − μ)`, rejecting a vanishing value as a pole.
    fn denominator(&self, lambda: &Scalar, mu: &Scalar) -> Result<Scalar> {
        let difference = lambda.try_sub(mu)?;
        let value = self.phi(&difference)?;
        let tiny = match value {
            Scalar::Exact(_) => value.is_zero(),
            Scalar::Float(z) => z.norm() < 1e-14 * (1.0 + difference.abs()),
        };
        if tiny {
            return Err(Error::PoleAtCoincidentArguments {
                difference: difference.to_string(),
            });
        }
        Ok(value)
    }

    pub fn f(&self, lambda: &Scalar, mu: &Scalar) -> Result<Scalar> {
        let denom = self.denominator(lambda, mu)?;
        let numer = self.phi(&(lambda.try_sub(mu)? + self.shift(lambda.mode())?))?;
        Ok(numer.try_div(&denom)?)
    }

    pub fn g(&self, lambda: &Scalar, mu: &Scalar) -> Result<Scalar> {
        let denom = self.denominator(lambda, mu)?;
        Ok(self.coupling(lambda.mode())?.try_div(&denom)?)
    }

    /// Local pseudovacuum eigenvalue of the L-operator's `A` entry:
    /// `φ(λ − ξ + s)`.
    pub fn alpha(&self, lambda: &Scalar, xi: &Scalar) -> Result<Scalar> {
        self.phi(&(lambda.try_sub(xi)? + self.shift(lambda.mode())?))
    }

    /// Local pseudovacuum eigenvalue of the L-operator's `D` entry:
    /// `φ(λ − ξ)`.
    pub fn delta(&self, lambda: &Scalar, xi: &Scalar) -> Result<Scalar> {
        self.phi(&lambda.try_sub(xi)?)
    }
}

pub fn kernel_f(kernel: &Kernel, lambda: &Scalar, mu: &Scalar) -> Result<Scalar> {
    kernel.f(lambda, mu)
}

pub fn kernel_g(kernel: &Kernel, lambda: &Scalar, mu: &Scalar) -> Result<Scalar> {
    kernel.g(lambda, mu)
}

/// The 4×4 R-matrix acting on `V₁ ⊗ V₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix4 {
    matrix: Matrix,
}

impl RMatrix4 {
    pub fn from_entries(f: Scalar, g: Scalar) -> Self {
        let mode = f.mode();
        let one = Scalar::one(mode);
        let mut m = Matrix::zeros(4, 4, mode);
        m[(0, 0)] = f.clone();
        m[(3, 3)] = f;
        m[(1, 1)] = one.clone();
        m[(2, 2)] = one;
        m[(1, 2)] = g.clone();
        m[(2, 1)] = g;
        RMatrix4 { matrix: m }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.matrix[(i, j)]
    }

    /// `R` acting on factors `(first, second)` of `V ⊗ V ⊗ V`.
    pub fn embed3(&self, first: usize, second: usize) -> Matrix {
        assert!(first < second && second < 3);
        let mode = self.matrix.mode();
        let bit = |index: usize, slot: usize| (index >> (2 - slot)) & 1;
        Matrix::from_fn(8, 8, mode, |row, col| {
            let spectator = 3 - first - second;
            if bit(row, spectator) != bit(col, spectator) {
                return Scalar::zero(mode);
            }
            let r = 2 * bit(row, first) + bit(row, second);
            let c = 2 * bit(col, first) + bit(col, second);
            self.matrix[(r, c)].clone()
        })
    }
}

pub fn build_r_matrix(kernel: &Kernel, lambda: &Scalar, mu: &Scalar) -> Result<RMatrix4> {
    Ok(RMatrix4::from_entries(
        kernel.f(lambda, mu)?,
        kernel.g(lambda, mu)?,
    ))
}

/// Max-norm of `R₁₂(λ₁,λ₂) R₁₃(λ₁,λ₃) R₂₃(λ₂,λ₃) − R₂₃ R₁₃ R₁₂` on
/// `V₁ ⊗ V₂ ⊗ V₃`. Exactly `0.0` when the identity holds in exact mode.
pub fn yang_baxter_residual(
    kernel: &Kernel,
    lambda1: &Scalar,
    lambda2: &Scalar,
    lambda3: &Scalar,
) -> Result<f64> {
    let r12 = build_r_matrix(kernel, lambda1, lambda2)?.embed3(0, 1);
    let r13 = build_r_matrix(kernel, lambda1, lambda3)?.embed3(0, 2);
    let r23 = build_r_matrix(kernel, lambda2, lambda3)?.embed3(1, 2);
    let lhs = r12.mul(&r13).mul(&r23);
    let rhs = r23.mul(&r13).mul(&r12);
    Ok(lhs.sub(&rhs).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::ratio(p, d)
    }

    #[test]
    fn rational_values() {
        let k = Kernel::Rational;
        assert_eq!(k.f(&q(2, 1), &q(0, 1)).unwrap(), q(3, 2));
        assert_eq!(k.g(&q(2, 1), &q(0, 1)).unwrap(), q(1, 2));
        assert!(matches!(
            k.f(&q(1, 3), &q(1, 3)),
            Err(Error::PoleAtCoincidentArguments { .. })
        ));
        assert!(matches!(
            k.g(&Scalar::real(0.5), &Scalar::real(0.5)),
            Err(Error::PoleAtCoincidentArguments { .. })
        ));
    }

    #[test]
    fn trigonometric_at_shift() {
        let eta = Complex64::new(0.7, 0.2);
        let k = Kernel::trigonometric(eta).unwrap();
        let mu = Scalar::complex(0.3, -0.1);
        let lambda = &mu + &Scalar::Float(eta);
        let f = k.f(&lambda, &mu).unwrap().to_complex();
        assert!((f - 2.0 * eta.cosh()).norm() < 1e-13);
        let g = k.g(&lambda, &mu).unwrap().to_complex();
        assert!((g - 1.0).norm() < 1e-14);
    }

    #[test]
    fn degenerate_eta_rejected() {
        assert_eq!(
            Kernel::trigonometric(Complex64::new(0.0, 0.0)),
            Err(Error::DegenerateKernel)
        );
        assert_eq!(
            Kernel::trigonometric(Complex64::new(0.0, std::f64::consts::PI)),
            Err(Error::DegenerateKernel)
        );
    }

    #[test]
    fn r_matrix_pattern() {
        let r = build_r_matrix(&Kernel::Rational, &q(1, 1), &q(0, 1)).unwrap();
        assert_eq!(r.get(0, 0), &q(2, 1));
        assert_eq!(r.get(1, 2), &q(1, 1));
        let r = build_r_matrix(&Kernel::Rational, &q(3, 1), &q(1, 1)).unwrap();
        assert_eq!(r.get(0, 0), &q(3, 2));
        assert_eq!(r.get(3, 3), &q(3, 2));
        for i in 0..4 {
            for j in 0..4 {
                let structural = i == j || (i, j) == (1, 2) || (i, j) == (2, 1);
                if !structural {
                    assert!(r.get(i, j).is_zero());
                }
            }
        }
        let row: Vec<_> = r.matrix().row(1).iter().map(|x| !x.is_zero()).collect();
        assert_eq!(row, vec![false, true, true, false]);
    }

    #[test]
    fn yang_baxter_exact_and_float() {
        let res = yang_baxter_residual(&Kernel::Rational, &q(3, 1), &q(1, 1), &q(0, 1)).unwrap();
        assert_eq!(res, 0.0);
        let k = Kernel::trigonometric(Complex64::new(0.7, 0.0)).unwrap();
        let res = yang_baxter_residual(
            &k,
            &Scalar::real(0.31),
            &Scalar::real(-0.52),
            &Scalar::real(1.13),
        )
        .unwrap();
        assert!(res <= 1e-12, "{res}");
        assert!(yang_baxter_residual(&Kernel::Rational, &q(1, 1), &q(1, 1), &q(0, 1)).is_err());
    }

    fn distinct_triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
        (-30i64..30, -30i64..30, -30i64..30, 1i64..7)
            .prop_filter("pairwise distinct", |(a, b, c, _)| {
                a != b && b != c && a != c
            })
            .prop_map(|(a, b, c, d)| (q(a, d), q(b, d), q(c, d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn yang_baxter_exact_random((a, b, c) in distinct_triple()) {
            prop_assert_eq!(yang_baxter_residual(&Kernel::Rational, &a, &b, &c).unwrap(), 0.0);
        }

        #[test]
        fn rational_g_antisymmetric((a, b, _c) in distinct_triple()) {
            let k = Kernel::Rational;
            prop_assert_eq!(k.g(&b, &a).unwrap(), -k.g(&a, &b).unwrap());
            // f(λ,μ)f(μ,λ) − g(λ,μ)g(μ,λ) is finite wherever both are defined.
            let value = k.f(&a, &b).unwrap() * k.f(&b, &a).unwrap()
                - k.g(&a, &b).unwrap() * k.g(&b, &a).unwrap();
            prop_assert!(value.abs().is_finite());
        }

        #[test]
        fn depends_on_difference_only((a, b, c) in distinct_triple()) {
            let k = Kernel::Rational;
            let shifted = build_r_matrix(&k, &(&a + &c), &(&b + &c)).unwrap();
            prop_assert_eq!(shifted, build_r_matrix(&k, &a, &b).unwrap());
        }
    }
}
