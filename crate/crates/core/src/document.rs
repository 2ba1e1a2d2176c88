//! Versioned JSON record of a minimization: the configuration that produced
//! it, the coefficients and the entropy report.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{CoefficientVector, SymmetryClass};
use crate::error::{Error, Result};
use crate::functionals::{total_entropy, EntropyReport};
use crate::grid::QuadratureGrid;
use crate::minimizer::{Algorithm, InitRecord, MinimizeConfig, MinimizeResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub basis_size: usize,
    pub class: SymmetryClass,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub random_starts: usize,
    /// Quadrature grid the report was computed on.
    pub half_width: f64,
    pub spacing: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub index: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub config: ConfigEcho,
    /// Non-zero coefficients in index order.
    pub coefficients: Vec<CoefficientEntry>,
    pub report: EntropyReport,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    pub init: InitRecord,
}

impl ResultDocument {
    pub fn new(cfg: &MinimizeConfig, result: &MinimizeResult) -> Self {
        let coefficients = result
            .coefficients
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(index, c)| CoefficientEntry { index, re: c.re, im: c.im })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            config: ConfigEcho {
                basis_size: cfg.basis_size,
                class: cfg.class,
                algorithm: cfg.algorithm,
                seed: cfg.seed,
                tolerance: cfg.tolerance,
                max_iterations: cfg.max_iterations,
                random_starts: cfg.random_starts,
                half_width: result.half_width,
                spacing: result.spacing,
            },
            coefficients,
            report: result.report,
            iterations: result.iterations,
            converged: result.converged,
            residual: result.residual,
            init: result.init.clone(),
        }
    }

    pub fn coefficient_vector(&self) -> CoefficientVector {
        let len = self.coefficients.iter().map(|e| e.index + 1).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for e in &self.coefficients {
            coeffs[e.index] = Complex64::new(e.re, e.im);
        }
        CoefficientVector::new(coeffs, self.config.class)
    }

    pub fn grid(&self) -> Result<QuadratureGrid> {
        QuadratureGrid::new(self.config.half_width, self.config.spacing)
    }

    /// Recomputes the report from the stored coefficients and grid.
    pub fn reevaluate(&self) -> Result<EntropyReport> {
        total_entropy(&self.coefficient_vector(), &self.grid()?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "unsupported schema version {}, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        if self.coefficients.is_empty() {
            return Err(Error::Format("document holds no coefficients".into()));
        }
        let class = self.config.class;
        for e in &self.coefficients {
            if !(e.re.is_finite() && e.im.is_finite()) {
                return Err(Error::Format(format!("coefficient {} is not finite", e.index)));
            }
            if !class.admits(e.index) || (class.is_real() && e.im != 0.0) {
                return Err(Error::Format(format!("coefficient {} lies outside the {class} class", e.index)));
            }
        }
        if self.coefficients.windows(2).any(|w| w[0].index >= w[1].index) {
            return Err(Error::Format("coefficient indices must be strictly increasing".into()));
        }
        self.grid().map(|_| ())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document fields serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimizer::minimize_entropy;

    fn sample() -> ResultDocument {
        let cfg = MinimizeConfig::new(12, SymmetryClass::OddFplus);
        ResultDocument::new(&cfg, &minimize_entropy(&cfg).unwrap())
    }

    #[test]
    fn json_round_trip_is_exact() {
        let doc = sample();
        let back = ResultDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn stored_total_is_reproduced() {
        let doc = sample();
        assert!((doc.reevaluate().unwrap().total - doc.report.total).abs() < 1e-10);
    }

    #[test]
    fn rejects_foreign_versions_and_classes() {
        let mut doc = sample();
        doc.schema_version = 2;
        assert!(matches!(ResultDocument::from_json(&doc.to_json()), Err(Error::Format(_))));
        let mut doc = sample();
        doc.coefficients[0].index = 2;
        assert!(matches!(ResultDocument::from_json(&doc.to_json()), Err(Error::Format(_))));
        assert!(matches!(ResultDocument::from_json("{"), Err(Error::Format(_))));
    }
}
