//! Formal Bethe vectors, the transfer matrix, and the Bethe equations.
//!
//! `𝒴(μ|{λ}) = τ(μ|{λ}) Π g⁻¹(λₐ, μ)` is evaluated in the cancelled form
//!
//! ```text
//! 𝒴(μ) = c⁻ᴹ [ a(μ) Π φ(λₐ − μ + s) + (−1)ᴹ d(μ) Π φ(μ − λₐ + s) ]
//! ```
//!
//! which is regular at `μ = λₖ`, so the Bethe equations `𝒴(λₖ|{λ}) = 0`
//! never divide by zero.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::{monodromy, pseudovacuum, vacuum_eigenvalues, ChainSpec};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::linalg::{Matrix, StateVector};
use crate::scalar::{Mode, Scalar};

/// Ordered, pairwise-distinct spectral parameters `λ₁..λ_M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SpectralSet {
    lambdas: Vec<Scalar>,
}

impl SpectralSet {
    pub fn new(lambdas: Vec<Scalar>) -> Result<Self> {
        for i in 0..lambdas.len() {
            for j in i + 1..lambdas.len() {
                lambdas[i].try_sub(&lambdas[j])?;
                if lambdas[i] == lambdas[j] {
                    return Err(Error::CoincidentParameters(i + 1, j + 1));
                }
            }
        }
        Ok(SpectralSet { lambdas })
    }

    pub fn empty() -> Self {
        SpectralSet {
            lambdas: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambdas(&self) -> &[Scalar] {
        &self.lambdas
    }

    pub fn permuted(&self, order: &[usize]) -> SpectralSet {
        SpectralSet {
            lambdas: order.iter().map(|&i| self.lambdas[i].clone()).collect(),
        }
    }

    /// Brings the parameters into `spec`'s mode and checks `M ≤ N`.
    pub(crate) fn attach(&self, spec: &ChainSpec) -> Result<Vec<Scalar>> {
        if self.len() > spec.len() {
            return Err(Error::TooManyExcitations {
                m: self.len(),
                n: spec.len(),
            });
        }
        self.lambdas.iter().map(|l| spec.coerce(l)).collect()
    }
}

/// `Π B(λⱼ) |0⟩`, applying `B(λ_M)` first.
pub fn formal_bethe_vector(spec: &ChainSpec, set: &SpectralSet) -> Result<StateVector> {
    let lambdas = set.attach(spec)?;
    let mut v = pseudovacuum(spec.len(), spec.mode());
    for lambda in lambdas.iter().rev() {
        v = v.apply(&monodromy(spec, lambda)?.b);
    }
    Ok(v)
}

/// `𝒯(μ) = A(μ) + D(μ)`.
pub fn transfer_matrix(spec: &ChainSpec, mu: &Scalar) -> Result<Matrix> {
    Ok(monodromy(spec, mu)?.trace())
}

/// `τ(μ|{λ}) = a(μ) Π f(λₐ, μ) + d(μ) Π f(μ, λₐ)`.
pub fn tau_eigenvalue(spec: &ChainSpec, mu: &Scalar, set: &SpectralSet) -> Result<Scalar> {
    let lambdas = set.attach(spec)?;
    let mu = spec.coerce(mu)?;
    let kernel = spec.kernel();
    let (mut left, mut right) = vacuum_eigenvalues(spec, &mu)?;
    for (index, lambda) in lambdas.iter().enumerate() {
        let pole = |e: Error| match e {
            Error::PoleAtCoincidentArguments { .. } => Error::ProbeCoincidesWithRoot(index + 1),
            other => other,
        };
        left = left * kernel.f(lambda, &mu).map_err(pole)?;
        right = right * kernel.f(&mu, lambda).map_err(pole)?;
    }
    Ok(left + right)
}

/// `𝒴(μ|{λ})` in the cancelled form; defined for every `μ`.
pub fn bethe_y_at(spec: &ChainSpec, mu: &Scalar, set: &SpectralSet) -> Result<Scalar> {
    let lambdas = set.attach(spec)?;
    let mu = spec.coerce(mu)?;
    let kernel = spec.kernel();
    let shift = kernel.shift(spec.mode())?;
    let (mut left, mut right) = vacuum_eigenvalues(spec, &mu)?;
    for lambda in &lambdas {
        left = left * kernel.phi(&(lambda - &mu + &shift))?;
        right = right * kernel.phi(&(&mu - lambda + &shift))?;
    }
    if lambdas.len() % 2 == 1 {
        right = -right;
    }
    let coupling = kernel.coupling(spec.mode())?;
    Ok((left + right).try_div(&coupling.powi(lambdas.len() as u32))?)
}

/// `𝒴(λₖ|{λ})` for 1-based `k`.
pub fn bethe_y(spec: &ChainSpec, k: usize, set: &SpectralSet) -> Result<Scalar> {
    let lambda = set
        .lambdas()
        .get(k.wrapping_sub(1))
        .ok_or(Error::IndexOutOfRange {
            index: k,
            n: set.len(),
        })?;
    bethe_y_at(spec, lambda, set)
}

/// `(‖𝒯(μ)v − τv‖∞ / ‖v‖∞, τ)` for `v = |{λ}⟩`.
pub fn certify_eigenvector(
    spec: &ChainSpec,
    set: &SpectralSet,
    mu: &Scalar,
) -> Result<(f64, Scalar)> {
    let tau = tau_eigenvalue(spec, mu, set)?;
    let v = formal_bethe_vector(spec, set)?;
    let norm = v.max_abs();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let tv = v.apply(&transfer_matrix(spec, &spec.coerce(mu)?)?);
    Ok((tv.sub(&v.scaled(&tau)).max_abs() / norm, tau))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetheCertificate {
    pub roots: SpectralSet,
    pub bethe_residuals: Vec<f64>,
    pub eigen_residual: f64,
    pub tau_value: Scalar,
    pub probe: Scalar,
}

impl BetheCertificate {
    pub fn excitations(&self) -> usize {
        self.roots.len()
    }

    pub fn max_bethe_residual(&self) -> f64 {
        self.bethe_residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_valid(&self, tolerance: f64) -> bool {
        self.max_bethe_residual() < tolerance && self.eigen_residual < tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Convergence threshold on `max_k |𝒴(λₖ)|`.
    pub tolerance: f64,
    /// Roots closer than this are reported as collapsed.
    pub separation: f64,
    /// Root sets equal up to permutation within this distance are merged.
    pub dedup: f64,
    /// Central-difference step for the Jacobian.
    pub jacobian_step: f64,
    /// Local vacuum eigenvalues below this magnitude mark a degenerate root.
    pub degeneracy: f64,
    /// Fixed probe; drawn from `seed` when absent.
    pub probe: Option<Scalar>,
    pub seed: u64,
    pub strategy: Strategy,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iterations: 200,
            tolerance: 1e-12,
            separation: 1e-8,
            dedup: 1e-6,
            jacobian_step: 1e-7,
            degeneracy: 1e-8,
            probe: None,
            seed: 0,
            strategy: Strategy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuessFailure {
    pub guess: usize,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub probe: Scalar,
    pub certificates: Vec<BetheCertificate>,
    pub failures: Vec<GuessFailure>,
}

/// Float copy of `spec`; the solver and the oracle run numerically.
pub fn float_spec(spec: &ChainSpec) -> Result<ChainSpec> {
    ChainSpec::new(*spec.kernel(), spec.xi().to_vec(), Mode::Float)
}

fn residual_vector(spec: &ChainSpec, roots: &[Complex64]) -> Result<Vec<Complex64>> {
    let set = SpectralSet {
        lambdas: roots.iter().map(|z| Scalar::Float(*z)).collect(),
    };
    (0..roots.len())
        .map(|k| Ok(bethe_y_at(spec, &set.lambdas[k], &set)?.to_complex()))
        .collect()
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Damped Newton iteration on `𝒴(λₖ|{λ}) = 0` from one starting point.
fn newton(spec: &ChainSpec, start: &[Complex64], opts: &SolverOptions) -> Result<Vec<Complex64>> {
    let m = start.len();
    let mut x = start.to_vec();
    let mut fx = residual_vector(spec, &x)?;
    let mut norm = sup_norm(&fx);
    for _ in 0..opts.max_iterations {
        if !norm.is_finite() {
            break;
        }
        if norm < opts.tolerance {
            return Ok(x);
        }
        let h = opts.jacobian_step;
        let mut jacobian = DMatrix::<Complex64>::zeros(m, m);
        for j in 0..m {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[j] += h;
            minus[j] -= h;
            let (fp, fm) = (
                residual_vector(spec, &plus)?,
                residual_vector(spec, &minus)?,
            );
            for k in 0..m {
                jacobian[(k, j)] = (fp[k] - fm[k]) / (2.0 * h);
            }
        }
        let rhs = DVector::from_iterator(m, fx.iter().map(|z| -z));
        let Some(step) = jacobian.lu().solve(&rhs) else {
            break;
        };
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<Complex64> = x
                .iter()
                .zip(step.iter())
                .map(|(a, d)| a + d * scale)
                .collect();
            let ft = residual_vector(spec, &trial)?;
            let trial_norm = sup_norm(&ft);
            if trial_norm <= norm {
                x = trial;
                fx = ft;
                norm = trial_norm;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if norm < opts.tolerance {
        return Ok(x);
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        residual: norm,
    })
}

fn validate_roots(spec: &ChainSpec, roots: &[Complex64], opts: &SolverOptions) -> Result<()> {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if (roots[i] - roots[j]).norm() < opts.separation {
                return Err(Error::CollapsedRoots(i + 1, j + 1));
            }
        }
        let (a, d) = vacuum_eigenvalues(spec, &Scalar::Float(roots[i]))?;
        if a.abs() < opts.degeneracy || d.abs() < opts.degeneracy {
            return Err(Error::DegenerateSolution(i + 1));
        }
    }
    Ok(())
}

fn same_root_set(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    let mut used = vec![false; b.len()];
    a.iter().all(
        |x| match (0..b.len()).find(|&j| !used[j] && (x - b[j]).norm() < tol) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        },
    )
}

/// Canonical ordering: real part on a 1e-8 grid, then imaginary part.
fn canonical_order(roots: &mut [Complex64]) {
    let key = |z: &Complex64| ((z.re * 1e8).round() as i64, z.im);
    roots.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
}

fn root_key(roots: &[Complex64]) -> Vec<(i64, i64)> {
    roots
        .iter()
        .map(|z| ((z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64))
        .collect()
}

/// Draws a probe at distance ≥ `0.1` from every root and inhomogeneity.
pub fn draw_probe(spec: &ChainSpec, avoid: &[Complex64], seed: u64) -> Scalar {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let xi: Vec<Complex64> = spec.xi().iter().map(Scalar::to_complex).collect();
    loop {
        let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0));
        if avoid.iter().chain(&xi).all(|p| (z - p).norm() >= 0.1) {
            return Scalar::Float(z);
        }
    }
}

/// Seeded complex starting points near `mean(ξ) − s/2`.
pub fn seeded_guesses(spec: &ChainSpec, m: usize, count: usize, seed: u64) -> Vec<SpectralSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.len() as f64;
    let mean = spec.xi().iter().map(Scalar::to_complex).sum::<Complex64>() / n;
    let shift = spec
        .kernel()
        .shift(Mode::Float)
        .map(|s| s.to_complex())
        .unwrap_or(Complex64::new(1.0, 0.0));
    let center = mean - shift / 2.0;
    (0..count)
        .map(|_| {
            let lambdas = (0..m)
                .map(|_| {
                    let dz =
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.5..1.5));
                    Scalar::Float(center + dz)
                })
                .collect();
            SpectralSet { lambdas }
        })
        .collect()
}

/// Solves the Bethe equations from each guess, deduplicates converged root
/// sets, and certifies each against the dense transfer matrix at one probe.
pub fn solve_bethe(
    spec: &ChainSpec,
    m: usize,
    guesses: &[SpectralSet],
    opts: &SolverOptions,
) -> Result<SolveOutcome> {
    if m > spec.len() {
        return Err(Error::TooManyExcitations { m, n: spec.len() });
    }
    let spec = float_spec(spec)?;
    if m == 0 {
        let probe = match &opts.probe {
            Some(p) => spec.coerce(p)?,
            None => draw_probe(&spec, &[], opts.seed),
        };
        let roots = SpectralSet::empty();
        let (eigen_residual, tau_value) = certify_eigenvector(&spec, &roots, &probe)?;
        return Ok(SolveOutcome {
            certificates: vec![BetheCertificate {
                roots,
                bethe_residuals: Vec::new(),
                eigen_residual,
                tau_value,
                probe: probe.clone(),
            }],
            probe,
            failures: Vec::new(),
        });
    }
    if guesses.is_empty() {
        return Err(Error::ConfigInvalid(
            "solver needs at least one guess".into(),
        ));
    }

    let runs = exec::map_slice(opts.strategy, guesses, |guess| -> Result<Vec<Complex64>> {
        if guess.len() != m {
            return Err(Error::ConfigInvalid(format!(
                "guess has {} parameters, expected {m}",
                guess.len()
            )));
        }
        let start: Vec<Complex64> = guess.lambdas().iter().map(Scalar::to_complex).collect();
        let mut roots = newton(&spec, &start, opts)?;
        validate_roots(&spec, &roots, opts)?;
        canonical_order(&mut roots);
        Ok(roots)
    });

    let mut failures = Vec::new();
    let mut unique: Vec<Vec<Complex64>> = Vec::new();
    for (guess, run) in runs.into_iter().enumerate() {
        match run {
            Ok(roots) => {
                if !unique.iter().any(|u| same_root_set(u, &roots, opts.dedup)) {
                    unique.push(roots);
                }
            }
            Err(error) => failures.push(GuessFailure { guess, error }),
        }
    }
    unique.sort_by_key(|r| root_key(r));

    let probe = match &opts.probe {
        Some(p) => spec.coerce(p)?,
        None => {
            let all: Vec<Complex64> = unique.iter().flatten().copied().collect();
            draw_probe(&spec, &all, opts.seed)
        }
    };

    let certified = exec::map_slice(
        opts.strategy,
        &unique,
        |roots| -> Result<BetheCertificate> {
            let set = SpectralSet::new(roots.iter().map(|z| Scalar::Float(*z)).collect())?;
            let bethe_residuals = (1..=m)
                .map(|k| Ok(bethe_y(&spec, k, &set)?.abs()))
                .collect::<Result<Vec<_>>>()?;
            let (eigen_residual, tau_value) = certify_eigenvector(&spec, &set, &probe)?;
            Ok(BetheCertificate {
                roots: set,
                bethe_residuals,
                eigen_residual,
                tau_value,
                probe: probe.clone(),
            })
        },
    );
    let mut certificates = Vec::new();
    for (index, cert) in certified.into_iter().enumerate() {
        match cert {
            Ok(c) => certificates.push(c),
            // Failures after deduplication are attributed to no particular guess.
            Err(error) => failures.push(GuessFailure {
                guess: guesses.len() + index,
                error,
            }),
        }
    }
    Ok(SolveOutcome {
        probe,
        certificates,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::Kernel;
    use itertools::Itertools;
    use num_complex::Complex64;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::ratio(p, d)
    }

    fn homogeneous_xxx(n: usize) -> ChainSpec {
        ChainSpec::homogeneous(Kernel::Rational, n, q(0, 1), Mode::Exact).unwrap()
    }

    fn set(values: &[Scalar]) -> SpectralSet {
        SpectralSet::new(values.to_vec()).unwrap()
    }

    #[test]
    fn spectral_set_rejects_coincidences() {
        assert_eq!(
            SpectralSet::new(vec![q(1, 2), q(3, 1), q(2, 4)]),
            Err(Error::CoincidentParameters(1, 3))
        );
        assert!(SpectralSet::new(vec![q(1, 2), Scalar::real(0.5)]).is_err());
    }

    #[test]
    fn empty_set_gives_pseudovacuum() {
        let spec = homogeneous_xxx(3);
        let v = formal_bethe_vector(&spec, &SpectralSet::empty()).unwrap();
        assert_eq!(v, pseudovacuum(3, Mode::Exact));
        assert!(matches!(
            formal_bethe_vector(&homogeneous_xxx(1), &set(&[q(1, 1), q(2, 1)])),
            Err(Error::TooManyExcitations { .. })
        ));
    }

    #[test]
    fn two_site_single_excitation_amplitudes() {
        let spec = homogeneous_xxx(2);
        let v = formal_bethe_vector(&spec, &set(&[q(5, 1)])).unwrap();
        // |↑↓⟩ is index 1, |↓↑⟩ is index 2.
        assert_eq!(v.amplitudes()[1], q(6, 1));
        assert_eq!(v.amplitudes()[2], q(5, 1));
        assert!(v.amplitudes()[0].is_zero() && v.amplitudes()[3].is_zero());
    }

    #[test]
    fn vector_is_symmetric_and_in_sector() {
        let spec = ChainSpec::new(
            Kernel::Rational,
            vec![q(0, 1), q(1, 3), q(-1, 2), q(2, 5)],
            Mode::Exact,
        )
        .unwrap();
        let base = set(&[q(1, 7), q(-3, 2), q(5, 4)]);
        let v = formal_bethe_vector(&spec, &base).unwrap();
        for perm in (0..3).permutations(3) {
            assert_eq!(
                formal_bethe_vector(&spec, &base.permuted(&perm)).unwrap(),
                v
            );
        }
        for (i, amp) in v.amplitudes().iter().enumerate() {
            if crate::linalg::down_count(i) != 3 {
                assert!(amp.is_zero());
            }
        }
    }

    #[test]
    fn transfer_matrix_on_vacuum_and_commuting() {
        let spec = ChainSpec::new(
            Kernel::Rational,
            vec![q(0, 1), q(1, 2), q(-2, 3)],
            Mode::Exact,
        )
        .unwrap();
        let mu = q(3, 4);
        let t = transfer_matrix(&spec, &mu).unwrap();
        let vac = pseudovacuum(3, Mode::Exact);
        let (a, d) = vacuum_eigenvalues(&spec, &mu).unwrap();
        assert_eq!(vac.apply(&t), vac.scaled(&(a + d)));
        let t2 = transfer_matrix(&spec, &q(-5, 3)).unwrap();
        assert!(t.commutator(&t2).is_zero());
        for i in 0..8 {
            for j in 0..8 {
                if crate::linalg::down_count(i) != crate::linalg::down_count(j) {
                    assert!(t[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn tau_two_site_singlet() {
        let spec = homogeneous_xxx(2);
        let roots = set(&[q(-1, 2)]);
        assert_eq!(tau_eigenvalue(&spec, &q(1, 1), &roots).unwrap(), q(3, 1));
        assert_eq!(
            tau_eigenvalue(&spec, &q(1, 1), &SpectralSet::empty()).unwrap(),
            q(5, 1)
        );
        assert_eq!(
            tau_eigenvalue(&spec, &q(-1, 2), &roots),
            Err(Error::ProbeCoincidesWithRoot(1))
        );
        let (residual, tau) = certify_eigenvector(&spec, &roots, &q(1, 1)).unwrap();
        assert_eq!((residual, tau), (0.0, q(3, 1)));
    }

    #[test]
    fn y_function_matches_definition_and_roots() {
        let spec = homogeneous_xxx(2);
        // 𝒴(λ|{λ}) = (λ+1)² − λ² = 2λ + 1
        for l in [q(-1, 2), q(3, 1), q(-7, 5)] {
            let y = bethe_y(&spec, 1, &set(std::slice::from_ref(&l))).unwrap();
            assert_eq!(y, &(&l * &q(2, 1)) + &q(1, 1));
        }
        let spec = ChainSpec::new(
            Kernel::Rational,
            vec![q(1, 3), q(-1, 4), q(2, 1)],
            Mode::Exact,
        )
        .unwrap();
        let roots = set(&[q(1, 5), q(-2, 3)]);
        let mu = q(7, 6);
        let tau = tau_eigenvalue(&spec, &mu, &roots).unwrap();
        let mut direct = tau;
        for l in roots.lambdas() {
            direct = direct * spec.kernel().g(l, &mu).unwrap().recip().unwrap();
        }
        assert_eq!(bethe_y_at(&spec, &mu, &roots).unwrap(), direct);
        let swapped = set(&[q(-2, 3), q(1, 5)]);
        assert_eq!(
            bethe_y(&spec, 1, &roots).unwrap(),
            bethe_y(&spec, 2, &swapped).unwrap()
        );
        assert!(!bethe_y(&spec, 1, &roots).unwrap().is_zero());
    }

    #[test]
    fn trigonometric_y_matches_definition() {
        let kernel = Kernel::trigonometric(Complex64::new(0.6, 0.1)).unwrap();
        let spec = ChainSpec::new(
            kernel,
            vec![Scalar::real(0.1), Scalar::real(-0.3), Scalar::real(0.25)],
            Mode::Float,
        )
        .unwrap();
        let roots = set(&[Scalar::complex(0.2, 0.3), Scalar::complex(-0.4, -0.1)]);
        let mu = Scalar::complex(0.55, 0.2);
        let mut direct = tau_eigenvalue(&spec, &mu, &roots).unwrap();
        for l in roots.lambdas() {
            direct = direct * kernel.g(l, &mu).unwrap().recip().unwrap();
        }
        let y = bethe_y_at(&spec, &mu, &roots).unwrap();
        assert!((y.to_complex() - direct.to_complex()).norm() < 1e-12);
    }

    #[test]
    fn solver_two_site() {
        let spec = homogeneous_xxx(2);
        let guesses = seeded_guesses(&spec, 1, 4, 1);
        let out = solve_bethe(&spec, 1, &guesses, &SolverOptions::default()).unwrap();
        assert_eq!(out.certificates.len(), 1);
        let cert = &out.certificates[0];
        let root = cert.roots.lambdas()[0].to_complex();
        assert!((root - Complex64::new(-0.5, 0.0)).norm() < 1e-12);
        assert!(cert.eigen_residual < 1e-12);
    }

    #[test]
    fn solver_four_site_single_magnon() {
        let spec = homogeneous_xxx(4);
        let guesses = seeded_guesses(&spec, 1, 30, 7);
        let out = solve_bethe(&spec, 1, &guesses, &SolverOptions::default()).unwrap();
        let mut found: Vec<Complex64> = out
            .certificates
            .iter()
            .map(|c| c.roots.lambdas()[0].to_complex())
            .collect();
        found.sort_by(|a, b| a.im.total_cmp(&b.im));
        let expected = [
            Complex64::new(-0.5, -0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(-0.5, 0.5),
        ];
        assert_eq!(found.len(), 3, "{found:?}");
        for (f, e) in found.iter().zip(expected) {
            assert!((f - e).norm() < 1e-10);
        }
        assert!(out.certificates.iter().all(|c| c.is_valid(1e-10)));
    }

    #[test]
    fn solver_zero_excitations_and_bounds() {
        let spec = homogeneous_xxx(3);
        let out = solve_bethe(&spec, 0, &[], &SolverOptions::default()).unwrap();
        let cert = &out.certificates[0];
        let (a, d) = vacuum_eigenvalues(&float_spec(&spec).unwrap(), &out.probe).unwrap();
        assert!(cert.roots.is_empty());
        assert!((cert.tau_value.to_complex() - (a + d).to_complex()).norm() < 1e-12);
        assert!(matches!(
            solve_bethe(&spec, 4, &[], &SolverOptions::default()),
            Err(Error::TooManyExcitations { .. })
        ));
    }

    #[test]
    fn generic_vectors_are_not_eigenvectors() {
        let spec = homogeneous_xxx(3);
        let (residual, _) = certify_eigenvector(&spec, &set(&[q(1, 3)]), &q(2, 1)).unwrap();
        assert!(residual > 1e-3);
    }
}
