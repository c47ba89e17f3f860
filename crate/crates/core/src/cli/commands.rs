use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::config::{RunConfig, Suite};
use super::report::{CheckRecord, Report, SolverFailureRecord};
use crate::bethe::{
    draw_probe, float_spec, seeded_guesses, solve_bethe, transfer_matrix, SolverOptions,
    SpectralSet,
};
use crate::chain::{
    commutation_residuals, local_nilpotency_residual, partial_vacuum_eigenvalues, rtt_residual,
    vacuum_residual, ChainSpec,
};
use crate::decomposition::decomposition_report;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::oracle::{
    common_eigenspace_residual, dense_spectrum, match_bethe_to_spectrum, sector_consistency,
};
use crate::rmatrix::yang_baxter_residual;
use crate::scalar::{Mode, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Record wall time per check. Off by default so reports are
    /// byte-reproducible.
    pub timings: bool,
    pub strategy: Strategy,
}

type Inputs = BTreeMap<String, Value>;

fn scalar_json(x: &Scalar) -> Value {
    serde_json::to_value(x).expect("scalars serialize")
}

fn inputs(pairs: &[(&str, &Scalar)]) -> Inputs {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), scalar_json(v)))
        .collect()
}

/// Draws spectral parameters distinct from each other and from the points
/// where a local vacuum eigenvalue vanishes.
struct Draws {
    rng: ChaCha8Rng,
    forbidden: Vec<Scalar>,
    mode: Mode,
}

impl Draws {
    fn new(spec: &ChainSpec, seed: u64) -> Self {
        let shift = spec
            .kernel()
            .shift(spec.mode())
            .expect("kernel supports mode");
        let mut forbidden = spec.xi().to_vec();
        forbidden.extend(spec.xi().iter().map(|x| x - &shift));
        Draws {
            rng: ChaCha8Rng::seed_from_u64(seed),
            forbidden,
            mode: spec.mode(),
        }
    }

    fn candidate(&mut self) -> Scalar {
        match self.mode {
            Mode::Exact => Scalar::ratio(
                self.rng.random_range(-12..=12),
                self.rng.random_range(1..=6),
            ),
            Mode::Float => Scalar::complex(
                self.rng.random_range(-1.0..1.0),
                self.rng.random_range(-1.0..1.0),
            ),
        }
    }

    fn clashes(a: &Scalar, b: &Scalar) -> bool {
        match a.mode() {
            Mode::Exact => a == b,
            Mode::Float => (a.to_complex() - b.to_complex()).norm() < 1e-3,
        }
    }

    fn distinct(&mut self, count: usize) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = Vec::with_capacity(count);
        while out.len() < count {
            let z = self.candidate();
            if !out
                .iter()
                .chain(&self.forbidden)
                .any(|w| Self::clashes(&z, w))
            {
                out.push(z);
            }
        }
        out
    }
}

struct Job {
    name: String,
    inputs: Inputs,
    run: Box<dyn Fn() -> Result<f64> + Send + Sync>,
}

fn run_jobs(jobs: Vec<Job>, tolerance: f64, opts: &RunOptions) -> Vec<CheckRecord> {
    exec::map_slice(opts.strategy, &jobs, |job| {
        let start = Instant::now();
        let outcome = (job.run)();
        let wall_ms = opts.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        let mut record = match outcome {
            Ok(value) => {
                CheckRecord::measured(job.name.clone(), job.inputs.clone(), value, tolerance)
            }
            Err(e) => CheckRecord::errored(
                job.name.clone(),
                job.inputs.clone(),
                tolerance,
                e.to_string(),
            ),
        };
        record.wall_ms = wall_ms;
        record
    })
}

fn check_tolerance(cfg: &RunConfig, spec: &ChainSpec) -> f64 {
    match spec.mode() {
        Mode::Exact => 0.0,
        Mode::Float => cfg.tolerances.residual,
    }
}

/// Runs the selected operator-identity suites on seeded random parameters.
pub fn cmd_verify(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let spec = cfg.validate()?;
    let mut draws = Draws::new(&spec, cfg.seed);
    let mut jobs = Vec::new();
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    for suite in suites {
        for sample in 0..cfg.samples {
            let name = |check: &str| format!("{}/{check}#{sample:03}", suite.name());
            let spec = spec.clone();
            match suite {
                Suite::Rmatrix => {
                    let p = draws.distinct(3);
                    jobs.push(Job {
                        name: name("yang-baxter"),
                        inputs: inputs(&[
                            ("lambda1", &p[0]),
                            ("lambda2", &p[1]),
                            ("lambda3", &p[2]),
                        ]),
                        run: Box::new(move || {
                            yang_baxter_residual(spec.kernel(), &p[0], &p[1], &p[2])
                        }),
                    });
                }
                Suite::Rtt => {
                    let p = draws.distinct(2);
                    jobs.push(Job {
                        name: name("rtt"),
                        inputs: inputs(&[("lambda", &p[0]), ("mu", &p[1])]),
                        run: Box::new(move || rtt_residual(&spec, spec.full_range(), &p[0], &p[1])),
                    });
                }
                Suite::Commutation => {
                    let p = draws.distinct(2);
                    for relation in ["ab", "ba", "bb", "db"] {
                        let (spec, p) = (spec.clone(), p.clone());
                        jobs.push(Job {
                            name: name(relation),
                            inputs: inputs(&[("lambda", &p[0]), ("mu", &p[1])]),
                            run: Box::new(move || {
                                let r = commutation_residuals(&spec, &p[0], &p[1])?;
                                Ok(r.named()
                                    .iter()
                                    .find(|(n, _)| *n == relation)
                                    .expect("known")
                                    .1)
                            }),
                        });
                    }
                }
                Suite::Vacuum => {
                    let p = draws.distinct(2);
                    let s = spec.clone();
                    let lambda = p[0].clone();
                    jobs.push(Job {
                        name: name("eigenstate"),
                        inputs: inputs(&[("lambda", &lambda)]),
                        run: Box::new(move || vacuum_residual(&s, s.full_range(), &lambda)),
                    });
                    let s = spec.clone();
                    let lambda = p[0].clone();
                    jobs.push(Job {
                        name: name("factorization"),
                        inputs: inputs(&[("lambda", &lambda)]),
                        run: Box::new(move || vacuum_factorization(&s, &lambda)),
                    });
                    jobs.push(Job {
                        name: name("local-nilpotency"),
                        inputs: inputs(&[("lambda", &p[0]), ("mu", &p[1])]),
                        run: Box::new(move || {
                            (1..=spec.len()).try_fold(0.0, |acc: f64, j| {
                                Ok(acc.max(local_nilpotency_residual(&spec, j, &p[0], &p[1])?))
                            })
                        }),
                    });
                }
                Suite::TransferCommute => {
                    let p = draws.distinct(2);
                    jobs.push(Job {
                        name: name("commutator"),
                        inputs: inputs(&[("lambda", &p[0]), ("mu", &p[1])]),
                        run: Box::new(move || {
                            let tl = transfer_matrix(&spec, &spec.coerce(&p[0])?)?;
                            let tm = transfer_matrix(&spec, &spec.coerce(&p[1])?)?;
                            Ok(tl.commutator(&tm).max_abs())
                        }),
                    });
                }
            }
        }
    }
    let checks = run_jobs(jobs, check_tolerance(cfg, &spec), opts);
    Ok(Report::new("verify", cfg.clone(), checks))
}

/// Largest deviation of the vacuum relations on each block of every
/// contiguous split, and of `a`, `d` from the product of block values.
fn vacuum_factorization(spec: &ChainSpec, lambda: &Scalar) -> Result<f64> {
    let (a, d) = partial_vacuum_eigenvalues(spec, spec.full_range(), lambda)?;
    let mut worst: f64 = 0.0;
    for split in crate::decomposition::Split::all(spec.len()) {
        let mut a_prod = Scalar::one(spec.mode());
        let mut d_prod = Scalar::one(spec.mode());
        for range in split.blocks() {
            worst = worst.max(vacuum_residual(spec, range, lambda)?);
            let (ab, db) = partial_vacuum_eigenvalues(spec, range, lambda)?;
            a_prod = a_prod * ab;
            d_prod = d_prod * db;
        }
        worst = worst.max((&a - &a_prod).abs()).max((&d - &d_prod).abs());
    }
    Ok(worst)
}

fn require_m(cfg: &RunConfig) -> Result<()> {
    if cfg.m_values.is_empty() {
        return Err(Error::ConfigInvalid(
            "\"M\" must list at least one excitation number".into(),
        ));
    }
    Ok(())
}

/// Compares every decomposition formula with the formal Bethe vector for
/// one seeded parameter set per excitation number.
pub fn cmd_decompose(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let spec = cfg.validate()?;
    require_m(cfg)?;
    let splits = cfg.splits()?;
    let tolerance = check_tolerance(cfg, &spec);
    let mut draws = Draws::new(&spec, cfg.seed);
    let mut checks = Vec::new();
    for &m in &cfg.m_values {
        let lambdas = draws.distinct(m);
        let set = SpectralSet::new(lambdas.clone())?;
        let report = decomposition_report(&spec, &set, &splits, cfg.closed_form);
        for row in report.rows {
            let name = format!("decompose/M={m}/{}", row.formula);
            let mut inputs = Inputs::new();
            inputs.insert(
                "lambdas".into(),
                Value::Array(lambdas.iter().map(scalar_json).collect()),
            );
            if let Some(terms) = row.terms {
                inputs.insert("terms".into(), json!(terms));
            }
            let mut record = match (row.difference, row.error) {
                (Some(d), _) => CheckRecord::measured(name, inputs, d, tolerance),
                (None, e) => CheckRecord::errored(name, inputs, tolerance, e.unwrap_or_default()),
            };
            record.wall_ms = opts.timings.then_some(row.elapsed_ms);
            checks.push(record);
        }
    }
    Ok(Report::new("decompose", cfg.clone(), checks))
}

/// Solves the Bethe equations from seeded guesses for each excitation
/// number, certifies each root set, and matches it to the dense spectrum.
pub fn cmd_solve(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let spec = cfg.validate()?;
    require_m(cfg)?;
    let t = cfg.tolerances;
    let mut checks = Vec::new();
    let mut spectra = Vec::new();
    let mut failures = Vec::new();
    for &m in &cfg.m_values {
        let start = Instant::now();
        let solver = SolverOptions {
            probe: cfg.probe.clone(),
            seed: cfg.seed,
            strategy: opts.strategy,
            ..SolverOptions::default()
        };
        let guesses = seeded_guesses(&spec, m, cfg.guesses, cfg.seed.wrapping_add(m as u64));
        let prefix = format!("solve/M={m}");
        let outcome = match solve_bethe(&spec, m, &guesses, &solver) {
            Ok(o) => o,
            Err(e) => {
                checks.push(CheckRecord::errored(
                    prefix,
                    Inputs::new(),
                    t.bethe,
                    e.to_string(),
                ));
                continue;
            }
        };
        failures.extend(outcome.failures.iter().map(|f| SolverFailureRecord {
            m,
            guess: f.guess,
            error: f.error.to_string(),
        }));
        if outcome.certificates.is_empty() {
            checks.push(CheckRecord::errored(
                format!("{prefix}/converged"),
                Inputs::new(),
                t.bethe,
                "no guess converged to an admissible root set".into(),
            ));
            continue;
        }
        let mut spectrum = match dense_spectrum(&spec, &outcome.probe) {
            Ok(s) => s,
            Err(e) => {
                checks.push(CheckRecord::errored(
                    format!("{prefix}/spectrum"),
                    Inputs::new(),
                    t.spectrum,
                    e.to_string(),
                ));
                continue;
            }
        };
        let distances: Vec<Option<f64>> =
            match match_bethe_to_spectrum(&spectrum, &outcome.certificates, t.spectrum) {
                Ok(matches) => {
                    let d = matches.iter().map(|m| Some(m.distance)).collect();
                    spectrum.matched_bethe = matches;
                    d
                }
                // Find which certificates lack a partner.
                Err(_) => outcome
                    .certificates
                    .iter()
                    .map(|c| {
                        spectrum
                            .sector(c.excitations())
                            .into_iter()
                            .map(|i| {
                                (spectrum.eigenvalues[i].to_complex() - c.tau_value.to_complex())
                                    .norm()
                            })
                            .min_by(f64::total_cmp)
                    })
                    .collect(),
            };
        for (index, (cert, distance)) in outcome.certificates.iter().zip(distances).enumerate() {
            let mut inputs = Inputs::new();
            inputs.insert(
                "roots".into(),
                Value::Array(cert.roots.lambdas().iter().map(scalar_json).collect()),
            );
            inputs.insert("tau".into(), scalar_json(&cert.tau_value));
            inputs.insert("probe".into(), scalar_json(&cert.probe));
            let name = |check: &str| format!("{prefix}/set-{index:03}/{check}");
            checks.push(CheckRecord::measured(
                name("bethe"),
                inputs.clone(),
                cert.max_bethe_residual(),
                t.bethe,
            ));
            checks.push(CheckRecord::measured(
                name("eigenvector"),
                inputs.clone(),
                cert.eigen_residual,
                t.eigen,
            ));
            checks.push(match distance {
                Some(d) => CheckRecord::measured(name("spectrum"), inputs, d, t.spectrum),
                None => CheckRecord::errored(
                    name("spectrum"),
                    inputs,
                    t.spectrum,
                    "empty sector".into(),
                ),
            });
        }
        if opts.timings {
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            for c in checks.iter_mut().filter(|c| c.name.starts_with(&prefix)) {
                c.wall_ms = Some(elapsed);
            }
        }
        spectra.push(spectrum);
    }
    let mut report = Report::new("solve", cfg.clone(), checks);
    report.spectra = spectra;
    report.solver_failures = failures;
    Ok(report)
}

/// Dense spectrum at the configured (or seeded) probe, with the sector
/// consistency and commuting-family checks.
pub fn cmd_spectrum(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let spec = cfg.validate()?;
    let fspec = float_spec(&spec)?;
    let probe = match &cfg.probe {
        Some(p) => fspec.coerce(p)?,
        None => draw_probe(&fspec, &[], cfg.seed),
    };
    let second = draw_probe(&fspec, &[probe.to_complex()], cfg.seed.wrapping_add(1));
    let t = cfg.tolerances;
    let mu = inputs(&[("mu", &probe)]);
    let jobs = vec![
        (
            Job {
                name: "spectrum/sector-consistency".into(),
                inputs: mu.clone(),
                run: Box::new({
                    let (spec, probe) = (spec.clone(), probe.clone());
                    move || sector_consistency(&spec, &probe)
                }),
            },
            t.spectrum,
        ),
        (
            Job {
                name: "spectrum/commuting-eigenspaces".into(),
                inputs: inputs(&[("mu", &probe), ("mu2", &second)]),
                run: Box::new({
                    let (spec, probe) = (spec.clone(), probe.clone());
                    move || common_eigenspace_residual(&spec, &probe, &second)
                }),
            },
            t.eigenspace,
        ),
    ];
    let mut checks = Vec::new();
    for (job, tolerance) in jobs {
        checks.extend(run_jobs(vec![job], tolerance, opts));
    }
    let spectrum = dense_spectrum(&spec, &probe)?;
    let mut report = Report::new("spectrum", cfg.clone(), checks);
    report.spectra = vec![spectrum];
    Ok(report)
}
