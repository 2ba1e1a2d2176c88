use std::io::Write;
use std::path::Path;

use entropy_lab::basis::{BasisTable, CoefficientVector, SymmetryClass};
use entropy_lab::comb::fit::fit_bigaussian;
use entropy_lab::comb::{comb_grid, CombFunction, Variant};
use entropy_lab::document::ResultDocument;
use entropy_lab::functionals::{default_grid, odd_entropy_bound, p_norm, shannon_entropy, sq_of_coefficients};
use entropy_lab::grid::QuadratureGrid;
use entropy_lab::minimizer::{minimize_entropy, MinimizeConfig};
use entropy_lab::suite::run_suite;
use entropy_lab::{basis, sig9};
use rayon::prelude::*;

use crate::{ExportArgs, FitArgs, MinimizeArgs, ScanArgs, SqArgs, VerifyArgs};

/// Exit code for a run that completed without meeting its goal.
const NOT_MET: u8 = 2;

/// Smallest `a` the scan accepts.
const SCAN_A_FLOOR: f64 = 0.05;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lab(#[from] entropy_lab::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// `println!` that keeps going once the reader has gone away, so the exit
/// code still reflects the run.
macro_rules! say {
    ($($t:tt)*) => {{
        if let Err(e) = writeln!(std::io::stdout(), $($t)*) {
            if e.kind() != std::io::ErrorKind::BrokenPipe {
                return Err(CliError::Io { path: "stdout".into(), source: e });
            }
        }
    }};
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(io_err(path))
}

pub fn minimize(a: MinimizeArgs) -> Result<u8, CliError> {
    let mut cfg = MinimizeConfig::new(a.basis_size, a.subspace);
    cfg.algorithm = a.algorithm;
    cfg.seed = a.seed;
    cfg.tolerance = a.tol;
    if let Some(n) = a.max_iterations {
        cfg.max_iterations = n;
    }
    if let Some(n) = a.random_starts {
        cfg.random_starts = n;
    }
    cfg.quadrature.half_width = a.half_width;
    cfg.quadrature.spacing = a.spacing;
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let r = minimize_entropy(&cfg)?;
    ResultDocument::new(&cfg, &r).save(&a.out)?;
    say!("total = {}", sig9(r.report.total));
    say!("s_position = {}", sig9(r.report.s_position));
    say!("s_momentum = {}", sig9(r.report.s_momentum));
    say!("iterations = {}", r.iterations);
    say!("converged = {}", r.converged);
    Ok(if r.converged { 0 } else { NOT_MET })
}

struct ScanRow {
    a: f64,
    s_position: f64,
    s_momentum: f64,
    norm2: f64,
}

fn scan_row(a: f64) -> entropy_lab::Result<ScanRow> {
    let grid = comb_grid(a)?;
    let f = CombFunction::bigaussian(a, Variant::Plain)?.eval(&grid)?;
    let fp = CombFunction::bigaussian(a, Variant::Primed)?.eval(&grid)?;
    Ok(ScanRow { a, s_position: shannon_entropy(&f)?, s_momentum: shannon_entropy(&fp)?, norm2: p_norm(&f, 2.0)? })
}

pub fn scan_bigaussian(a: ScanArgs) -> Result<u8, CliError> {
    let a_max = a.a_max;
    if !(a.a_min >= SCAN_A_FLOOR) {
        return Err(CliError::Usage(format!("--a-min must be at least {SCAN_A_FLOOR}, got {}", a.a_min)));
    }
    if !(a_max >= a.a_min && a_max <= 1.0) {
        return Err(CliError::Usage(format!("--a-max must lie in [a-min, 1], got {a_max}")));
    }
    if a.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if (a.steps == 1) != (a_max == a.a_min) {
        return Err(CliError::Usage("--steps 1 goes with a-min equal to a-max, and only then".into()));
    }
    let values: Vec<f64> = if a.steps == 1 {
        vec![a_max]
    } else {
        let d = (a_max - a.a_min) / (a.steps - 1) as f64;
        (0..a.steps).map(|i| if i + 1 == a.steps { a.a_min } else { a_max - i as f64 * d }).collect()
    };
    let rows = values.par_iter().map(|&x| scan_row(x)).collect::<entropy_lab::Result<Vec<_>>>()?;

    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(&a.out)?;
    w.write_record(["a", "S_position", "S_momentum", "total", "norm2", "total_limit_gap"])?;
    for r in &rows {
        let total = r.s_position + r.s_momentum;
        w.write_record([r.a, r.s_position, r.s_momentum, total, r.norm2, total - odd_entropy_bound()].map(sig9))?;
    }
    w.flush().map_err(io_err(&a.out))?;
    say!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(0)
}

pub fn verify(a: VerifyArgs) -> Result<u8, CliError> {
    let report = run_suite(a.tier, a.seed);
    let text = if a.format == "kv" { report.to_key_values() } else { report.to_text() };
    say!("{}", text.trim_end_matches('\n'));
    if let Some(path) = &a.out {
        write_file(path, &text)?;
    }
    Ok(if report.passed { 0 } else { NOT_MET })
}

fn load(path: &Path) -> Result<ResultDocument, CliError> {
    if !path.exists() {
        return Err(CliError::Io {
            path: path.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        });
    }
    Ok(ResultDocument::load(path)?)
}

pub fn fit(a: FitArgs) -> Result<u8, CliError> {
    let doc = load(&a.input)?;
    if !doc.config.class.is_odd() {
        return Err(entropy_lab::Error::Domain(format!("fit needs an odd result, got the {} class", doc.config.class)).into());
    }
    let c = doc.coefficient_vector();
    let f = basis::synthesize(&c, &default_grid(&c))?;
    let fit = fit_bigaussian(&f)?;
    say!("a_best = {}", sig9(fit.a));
    say!("mu_best = {}", sig9(fit.mu));
    say!("residual = {}", sig9(fit.residual));
    say!("poor_fit = {}", fit.poor_fit);
    Ok(0)
}

pub fn export_grid(a: ExportArgs) -> Result<u8, CliError> {
    if !(a.spacing > 0.0 && a.spacing.is_finite()) {
        return Err(CliError::Usage(format!("--spacing must be positive, got {}", a.spacing)));
    }
    if !(a.half_width > 0.0 && a.half_width.is_finite()) {
        return Err(CliError::Usage(format!("--half-width must be positive, got {}", a.half_width)));
    }
    let doc = load(&a.input)?;
    let c = doc.coefficient_vector();
    let grid = QuadratureGrid::new(a.half_width, a.spacing)?;
    let support = c.support();
    let coeffs: Vec<_> = support.iter().map(|&n| c.coeffs[n]).collect();
    let values = BasisTable::new(grid, &support)?.combine(&coeffs);
    let real = doc.config.class.is_real();

    let sink: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(std::fs::File::create(p).map_err(io_err(p))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    if real {
        w.write_record(["x", "psi"])?;
    } else {
        w.write_record(["x", "psi_re", "psi_im"])?;
    }
    for (x, v) in grid.nodes().into_iter().zip(&values) {
        if real {
            w.write_record([sig9(x), sig9(v.re)])?;
        } else {
            w.write_record([sig9(x), sig9(v.re), sig9(v.im)])?;
        }
    }
    w.flush().map_err(|e| CliError::Io { path: "output".into(), source: e })?;
    Ok(0)
}

pub fn sq(a: SqArgs) -> Result<u8, CliError> {
    if !(a.q >= 2.0 && a.q.is_finite()) {
        return Err(CliError::Usage(format!("--q must be finite and at least 2, got {}", a.q)));
    }
    let c = match (&a.input, a.preset.as_deref()) {
        (Some(path), _) => load(path)?.coefficient_vector(),
        (None, Some("phi1")) => CoefficientVector::unit(1, SymmetryClass::OddFplus),
        _ => CoefficientVector::unit(0, SymmetryClass::Full),
    };
    say!("{}", sig9(sq_of_coefficients(&c, &default_grid(&c), a.q)?));
    Ok(0)
}
