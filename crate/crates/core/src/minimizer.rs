//! Minimization of `𝒮` over truncated symmetry classes of the oscillator basis.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{CoefficientVector, SymmetryClass};
use crate::error::{Error, Result};
use crate::functionals::{EntropyEvaluator, EntropyReport};
use crate::grid::QuadratureGrid;
use crate::optim::{lbfgs, nelder_mead};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    QuasiNewton,
    Simplex,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::QuasiNewton => "lbfgs",
            Algorithm::Simplex => "simplex",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lbfgs" | "quasi_newton" | "quasi-newton" => Ok(Algorithm::QuasiNewton),
            "simplex" | "nelder-mead" => Ok(Algorithm::Simplex),
            other => Err(Error::Config(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Grid override; unset fields fall back to the basis defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub half_width: Option<f64>,
    pub spacing: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeConfig {
    /// Truncation size `N` (see [`SymmetryClass::active_indices`]).
    pub basis_size: usize,
    pub class: SymmetryClass,
    pub algorithm: Algorithm,
    pub max_iterations: usize,
    /// Gradient sup-norm for L-BFGS, simplex diameter for Nelder–Mead.
    pub tolerance: f64,
    pub seed: u64,
    /// Number of random starts; one further start from the lowest active mode
    /// is always added.
    pub random_starts: usize,
    pub quadrature: QuadratureSettings,
}

impl MinimizeConfig {
    pub fn new(basis_size: usize, class: SymmetryClass) -> Self {
        Self {
            basis_size,
            class,
            algorithm: Algorithm::QuasiNewton,
            max_iterations: 20_000,
            tolerance: 1e-7,
            seed: 1,
            random_starts: 3,
            quadrature: QuadratureSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.basis_size == 0 {
            return Err(Error::Config("basis size must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        if self.class.active_indices(self.basis_size).is_empty() {
            return Err(Error::Config("no active basis functions".into()));
        }
        Ok(())
    }

    pub fn evaluator(&self) -> Result<EntropyEvaluator> {
        self.validate()?;
        let indices = self.class.active_indices(self.basis_size);
        let max_index = *indices.last().expect("validated non-empty");
        let base = crate::basis::grid_for_basis(max_index);
        let grid = QuadratureGrid::new(
            self.quadrature.half_width.unwrap_or(base.half_width()),
            self.quadrature.spacing.unwrap_or(base.spacing()),
        )?;
        EntropyEvaluator::new(self.class, &indices, grid)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StartKind {
    /// Tapered random coefficients drawn from this seed.
    Random { seed: u64 },
    /// The lowest active basis function plus small seeded noise.
    LowestMode { seed: u64 },
    /// A caller-supplied vector.
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartRecord {
    pub kind: StartKind,
    pub total: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitRecord {
    pub starts: Vec<StartRecord>,
    /// Index into `starts` of the result that was kept.
    pub chosen: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub coefficients: CoefficientVector,
    pub report: EntropyReport,
    pub iterations: usize,
    pub converged: bool,
    /// Gradient sup-norm (L-BFGS) or simplex diameter at the reported point.
    pub residual: f64,
    pub init: InitRecord,
    pub half_width: f64,
    pub spacing: f64,
    /// Objective after each accepted step of the kept run.
    pub trace: Vec<f64>,
}

const LOWEST_MODE_NOISE: f64 = 1e-3;

/// Totals closer than this count as equal when picking among starts.
const TIE_TOLERANCE: f64 = 1e-10;

/// Unit-norm random active coefficients with amplitude `1/(1 + n)` on index `n`.
pub fn random_start(ev: &EntropyEvaluator, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let real = ev.class().is_real();
    let mut a: Vec<Complex64> = ev
        .indices()
        .iter()
        .map(|&n| {
            let taper = 1.0 / (1.0 + n as f64);
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = if real { 0.0 } else { StandardNormal.sample(&mut rng) };
            Complex64::new(re, im) * taper
        })
        .collect();
    normalize(&mut a);
    a
}

/// The lowest active mode with seeded noise of relative size 1e-3.
pub fn lowest_mode_start(ev: &EntropyEvaluator, seed: u64) -> Vec<Complex64> {
    let mut a = random_start(ev, seed);
    a.iter_mut().for_each(|c| *c *= LOWEST_MODE_NOISE);
    a[0] += Complex64::new(1.0, 0.0);
    normalize(&mut a);
    a
}

fn normalize(a: &mut [Complex64]) {
    let n = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        a.iter_mut().for_each(|c| *c /= n);
    }
}

struct RunOutcome {
    active: Vec<Complex64>,
    total: f64,
    iterations: usize,
    converged: bool,
    residual: f64,
    trace: Vec<f64>,
}

fn run_single(cfg: &MinimizeConfig, ev: &EntropyEvaluator, start: &[Complex64]) -> Result<RunOutcome> {
    let x0 = ev.pack(start);
    match cfg.algorithm {
        Algorithm::QuasiNewton => {
            let lcfg = lbfgs::LbfgsConfig {
                max_iterations: cfg.max_iterations,
                gradient_tolerance: cfg.tolerance,
                ..Default::default()
            };
            let out = lbfgs::minimize(|x| ev.value_and_gradient_packed(x), &x0, &lcfg)?;
            Ok(RunOutcome {
                active: ev.unpack(&out.x),
                total: out.value,
                iterations: out.iterations,
                converged: out.converged,
                residual: out.gradient_sup,
                trace: out.trace,
            })
        }
        Algorithm::Simplex => {
            let ncfg = nelder_mead::NelderMeadConfig {
                max_iterations: cfg.max_iterations,
                tolerance: cfg.tolerance,
                scale_invariant: true,
                ..Default::default()
            };
            let out = nelder_mead::minimize(|x| ev.report(&ev.unpack(x)).map(|r| r.total), &x0, &ncfg)?;
            let mut active = ev.unpack(&out.x);
            normalize(&mut active);
            Ok(RunOutcome {
                active,
                total: out.value,
                iterations: out.iterations,
                converged: out.converged,
                residual: out.diameter,
                trace: vec![out.value],
            })
        }
    }
}

/// Multiplies by a unit phase so the first coefficient of non-negligible size
/// is real and positive. For odd classes this is normally the `φ_1` coefficient.
pub fn align(c: &CoefficientVector) -> CoefficientVector {
    c.phase_aligned(1e-8)
}

fn finish(ev: &EntropyEvaluator, runs: Vec<(StartKind, RunOutcome)>) -> Result<MinimizeResult> {
    let lowest = runs.iter().map(|(_, r)| r.total).min_by(f64::total_cmp).ok_or(Error::Config("no starting points".into()))?;
    // Minimizers tied within quadrature accuracy differ by symmetries (shifts,
    // dilations); keep the one closest to the lowest mode.
    let lowest_mode_weight = |r: &RunOutcome| r.active[0].norm_sqr() / r.active.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let chosen = runs
        .iter()
        .enumerate()
        .filter(|(_, (_, r))| r.total <= lowest + TIE_TOLERANCE)
        .max_by(|(_, a), (_, b)| lowest_mode_weight(&a.1).total_cmp(&lowest_mode_weight(&b.1)))
        .map(|(i, _)| i)
        .expect("the lowest run passes the filter");
    let starts = runs
        .iter()
        .map(|(kind, r)| StartRecord { kind: kind.clone(), total: r.total, iterations: r.iterations, converged: r.converged })
        .collect();
    let (_, best) = runs.into_iter().nth(chosen).expect("chosen index in range");
    let mut active = best.active;
    normalize(&mut active);
    let coefficients = align(&ev.to_coefficients(&active));
    let report = crate::functionals::total_entropy(&coefficients, ev.grid())?;
    Ok(MinimizeResult {
        coefficients,
        report,
        iterations: best.iterations,
        converged: best.converged,
        residual: best.residual,
        init: InitRecord { starts, chosen },
        half_width: ev.grid().half_width(),
        spacing: ev.grid().spacing(),
        trace: best.trace,
    })
}

/// Minimizes `𝒮` from the configured starts and keeps the lowest result.
/// Starts run in parallel; the outcome depends only on the configuration.
pub fn minimize_entropy(cfg: &MinimizeConfig) -> Result<MinimizeResult> {
    let ev = cfg.evaluator()?;
    let mut kinds: Vec<StartKind> =
        (0..cfg.random_starts as u64).map(|i| StartKind::Random { seed: cfg.seed.wrapping_add(i) }).collect();
    kinds.push(StartKind::LowestMode { seed: cfg.seed.wrapping_add(cfg.random_starts as u64) });
    let runs = kinds
        .into_par_iter()
        .map(|kind| {
            let start = match kind {
                StartKind::Random { seed } => random_start(&ev, seed),
                StartKind::LowestMode { seed } => lowest_mode_start(&ev, seed),
                StartKind::Supplied => unreachable!("only generated kinds here"),
            };
            run_single(cfg, &ev, &start).map(|r| (kind, r))
        })
        .collect::<Result<Vec<_>>>()?;
    finish(&ev, runs)
}

/// Minimizes from one supplied vector, projected onto the configured truncation.
pub fn minimize_from(cfg: &MinimizeConfig, start: &CoefficientVector) -> Result<MinimizeResult> {
    let ev = cfg.evaluator()?;
    let mut a = ev.from_coefficients(start);
    if ev.class().is_real() {
        a.iter_mut().for_each(|c| c.im = 0.0);
    }
    if a.iter().all(|c| c.norm_sqr() == 0.0) {
        return Err(Error::Degenerate("starting vector has no active coefficients"));
    }
    normalize(&mut a);
    let run = run_single(cfg, &ev, &a)?;
    finish(&ev, vec![(StartKind::Supplied, run)])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeScanRow {
    pub basis_size: usize,
    pub total: f64,
    pub converged: bool,
}

/// `𝒮` minima for an ascending list of truncation sizes. Each size also
/// restarts from the previous minimizer embedded in the larger space, so the
/// totals cannot increase along the list.
pub fn entropy_vs_n(template: &MinimizeConfig, sizes: &[usize]) -> Result<Vec<SizeScanRow>> {
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("basis sizes must be strictly ascending".into()));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    let mut previous: Option<CoefficientVector> = None;
    for &n in sizes {
        let cfg = MinimizeConfig { basis_size: n, ..template.clone() };
        let mut best = minimize_entropy(&cfg)?;
        if let Some(prev) = &previous {
            let nested = minimize_from(&cfg, prev)?;
            if nested.report.total < best.report.total {
                best = nested;
            }
        }
        rows.push(SizeScanRow { basis_size: n, total: best.report.total, converged: best.converged });
        previous = Some(best.coefficients);
    }
    Ok(rows)
}

/// Largest coefficient-wise distance between two unit vectors after phase
/// alignment, padding the shorter with zeros.
pub fn aligned_distance(a: &CoefficientVector, b: &CoefficientVector) -> f64 {
    let a = align(&a.normalized().unwrap_or_else(|_| a.clone()));
    let b = align(&b.normalized().unwrap_or_else(|_| b.clone()));
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.coeffs.get(i).copied().unwrap_or_default();
            let y = b.coeffs.get(i).copied().unwrap_or_default();
            (x - y).norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub quasi_newton_total: f64,
    pub simplex_total: f64,
    pub total_gap: f64,
    pub coefficient_gap: f64,
    pub converged: bool,
    /// True when the totals agree within 1e-5 and the aligned coefficient
    /// vectors within 1e-3.
    pub agree: bool,
}

/// Largest truncation for which the simplex comparison is attempted.
pub const CROSS_CHECK_MAX_SIZE: usize = 32;

/// Runs both algorithms on the same configuration and compares the results.
pub fn cross_check(cfg: &MinimizeConfig) -> Result<CrossCheckReport> {
    if cfg.basis_size > CROSS_CHECK_MAX_SIZE {
        return Err(Error::Config(format!("cross-check is limited to N <= {CROSS_CHECK_MAX_SIZE}")));
    }
    let qn = minimize_entropy(&MinimizeConfig { algorithm: Algorithm::QuasiNewton, ..cfg.clone() })?;
    let sx = minimize_entropy(&MinimizeConfig {
        algorithm: Algorithm::Simplex,
        max_iterations: cfg.max_iterations.max(100_000),
        tolerance: cfg.tolerance.min(1e-6),
        ..cfg.clone()
    })?;
    let total_gap = (qn.report.total - sx.report.total).abs();
    let coefficient_gap = aligned_distance(&qn.coefficients, &sx.coefficients);
    Ok(CrossCheckReport {
        quasi_newton_total: qn.report.total,
        simplex_total: sx.report.total,
        total_gap,
        coefficient_gap,
        converged: qn.converged && sx.converged,
        agree: total_gap < 1e-5 && coefficient_gap < 1e-3,
    })
}
