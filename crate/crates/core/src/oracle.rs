//! Dense diagonalization of the transfer matrix.
//!
//! `𝒯(μ)` preserves the number of down spins, so each fixed-`M` block is
//! diagonalized on its own with a complex Schur decomposition. Eigenvalues
//! within a sector are sorted by real part, then imaginary part.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::bethe::{float_spec, transfer_matrix, BetheCertificate};
use crate::chain::{ChainSpec, MAX_SITES};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::linalg::{down_count, Matrix};
use crate::scalar::Scalar;

/// Eigenvalues closer than this are treated as one degenerate group.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumMatch {
    /// Position of the certificate in the list passed to the matcher.
    pub certificate: usize,
    /// Index into [`SpectrumReport::eigenvalues`].
    pub eigenvalue: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub probe_mu: Scalar,
    pub eigenvalues: Vec<Scalar>,
    pub sector_labels: Vec<usize>,
    pub matched_bethe: Vec<SpectrumMatch>,
}

impl SpectrumReport {
    /// Indices of eigenvalues in sector `m`.
    pub fn sector(&self, m: usize) -> Vec<usize> {
        (0..self.sector_labels.len())
            .filter(|&i| self.sector_labels[i] == m)
            .collect()
    }

    /// Spectrum entries with no Bethe partner.
    pub fn unmatched(&self) -> Vec<usize> {
        (0..self.eigenvalues.len())
            .filter(|i| !self.matched_bethe.iter().any(|m| m.eigenvalue == *i))
            .collect()
    }
}

fn check_cap(spec: &ChainSpec) -> Result<()> {
    if spec.len() > MAX_SITES {
        return Err(Error::DimensionCap {
            n: spec.len(),
            cap: MAX_SITES,
        });
    }
    Ok(())
}

fn eigenvalues(m: DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let n = m.nrows();
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 10_000).ok_or(Error::NoConvergence {
        iterations: 10_000,
        residual: f64::NAN,
    })?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

fn sort_complex(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn sector_indices(n: usize, m: usize) -> Vec<usize> {
    (0..1usize << n).filter(|&i| down_count(i) == m).collect()
}

fn float_transfer(spec: &ChainSpec, mu: &Scalar) -> Result<(ChainSpec, Matrix)> {
    check_cap(spec)?;
    let spec = float_spec(spec)?;
    let mu = spec.coerce(mu)?;
    let t = transfer_matrix(&spec, &mu)?;
    Ok((spec, t))
}

/// Spectrum of `𝒯(μ)` assembled from its down-spin sectors.
pub fn dense_spectrum(spec: &ChainSpec, mu: &Scalar) -> Result<SpectrumReport> {
    dense_spectrum_with(spec, mu, Strategy::default())
}

pub fn dense_spectrum_with(
    spec: &ChainSpec,
    mu: &Scalar,
    strategy: Strategy,
) -> Result<SpectrumReport> {
    let (fspec, t) = float_transfer(spec, mu)?;
    let n = fspec.len();
    let sectors = exec::map_indexed(strategy, n + 1, |m| {
        let mut values = eigenvalues(t.submatrix(&sector_indices(n, m)).to_nalgebra())?;
        sort_complex(&mut values);
        Ok::<_, Error>(values)
    });
    let mut eigenvalues = Vec::with_capacity(1 << n);
    let mut sector_labels = Vec::with_capacity(1 << n);
    for (m, values) in sectors.into_iter().enumerate() {
        for z in values? {
            eigenvalues.push(Scalar::Float(z));
            sector_labels.push(m);
        }
    }
    Ok(SpectrumReport {
        probe_mu: fspec.coerce(mu)?,
        eigenvalues,
        sector_labels,
        matched_bethe: Vec::new(),
    })
}

/// Spectrum of the full `2ᴺ × 2ᴺ` matrix without sector reduction.
pub fn full_spectrum(spec: &ChainSpec, mu: &Scalar) -> Result<Vec<Complex64>> {
    let (_, t) = float_transfer(spec, mu)?;
    let mut values = eigenvalues(t.to_nalgebra())?;
    sort_complex(&mut values);
    Ok(values)
}

/// Largest distance in a greedy nearest pairing of two equal-size multisets.
pub fn multiset_distance(left: &[Complex64], right: &[Complex64]) -> f64 {
    if left.len() != right.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; right.len()];
    let mut worst: f64 = 0.0;
    for z in left {
        let best = (0..right.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (right[a] - z).norm().total_cmp(&(right[b] - z).norm()))
            .expect("equal sizes");
        used[best] = true;
        worst = worst.max((right[best] - z).norm());
    }
    worst
}

/// Distance between the sector-assembled and full-matrix spectra.
pub fn sector_consistency(spec: &ChainSpec, mu: &Scalar) -> Result<f64> {
    let report = dense_spectrum(spec, mu)?;
    let sectors: Vec<Complex64> = report.eigenvalues.iter().map(Scalar::to_complex).collect();
    Ok(multiset_distance(&sectors, &full_spectrum(spec, mu)?))
}

/// Pairs each certified `τ` with the nearest unused eigenvalue of its own
/// down-spin sector. Certificates are processed in order; a degenerate
/// group absorbs as many certificates as its multiplicity.
pub fn match_bethe_to_spectrum(
    report: &SpectrumReport,
    certs: &[BetheCertificate],
    tolerance: f64,
) -> Result<Vec<SpectrumMatch>> {
    let mut used = vec![false; report.eigenvalues.len()];
    let mut matches = Vec::with_capacity(certs.len());
    for (index, cert) in certs.iter().enumerate() {
        let tau = cert.tau_value.to_complex();
        let nearest = report
            .sector(cert.excitations())
            .into_iter()
            .filter(|&i| !used[i])
            .map(|i| (i, (report.eigenvalues[i].to_complex() - tau).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match nearest {
            Some((i, distance)) if distance <= tolerance => {
                used[i] = true;
                matches.push(SpectrumMatch {
                    certificate: index,
                    eigenvalue: i,
                    distance,
                });
            }
            _ => {
                return Err(Error::UnmatchedCertificate {
                    tau: cert.tau_value.to_string(),
                    tolerance,
                })
            }
        }
    }
    Ok(matches)
}

/// Orthonormal basis of the generalized eigenspace of `t` for a cluster of
/// `size` eigenvalues centred at `center`.
fn cluster_subspace(t: &DMatrix<Complex64>, center: Complex64, size: usize) -> DMatrix<Complex64> {
    let n = t.nrows();
    let shifted = t - DMatrix::identity(n, n) * center;
    let mut power = shifted.clone();
    for _ in 1..size {
        power = &power * &shifted;
    }
    let svd = power.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    DMatrix::from_fn(n, size, |r, c| v_t[(order[c], r)].conj())
}

/// How far `𝒯(μ₂)` is from leaving every eigenspace of `𝒯(μ₁)` invariant:
/// the maximum over eigenvalue groups of `‖(1 − VV*) 𝒯(μ₂) V‖ / ‖𝒯(μ₂)‖`,
/// where `V` spans the group's (generalized) eigenspace. Zero for a
/// commuting family.
pub fn common_eigenspace_residual(spec: &ChainSpec, mu1: &Scalar, mu2: &Scalar) -> Result<f64> {
    let (fspec, t1) = float_transfer(spec, mu1)?;
    let t2 = transfer_matrix(&fspec, &fspec.coerce(mu2)?)?;
    let n = fspec.len();
    let residuals = exec::map_indexed(Strategy::default(), n + 1, |m| {
        let idx = sector_indices(n, m);
        let a = t1.submatrix(&idx).to_nalgebra();
        let b = t2.submatrix(&idx).to_nalgebra();
        let scale = b.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut values = eigenvalues(a.clone())?;
        sort_complex(&mut values);
        let mut worst: f64 = 0.0;
        for group in group_eigenvalues(&values) {
            let center = group.iter().sum::<Complex64>() / group.len() as f64;
            let v = cluster_subspace(&a, center, group.len());
            let image = &b * &v;
            let outside = &image - &v * (v.adjoint() * &image);
            let norm = outside.iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(norm / scale);
        }
        Ok::<_, Error>(worst)
    });
    residuals
        .into_iter()
        .try_fold(0.0, |acc: f64, r| Ok(acc.max(r?)))
}

/// Splits a sorted list into clusters whose neighbours lie within
/// [`DEGENERACY_TOLERANCE`].
fn group_eigenvalues(sorted: &[Complex64]) -> Vec<Vec<Complex64>> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &z in sorted {
        match groups
            .iter_mut()
            .find(|g| g.iter().any(|w| (w - z).norm() < DEGENERACY_TOLERANCE))
        {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    groups
}
