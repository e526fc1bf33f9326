//! Residual records and machine-readable run reports.

use serde::{Deserialize, Serialize};

/// Absolute residual of a vanishing check together with the cancellation
/// scale it should be compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    /// Absolute size of what should be zero.
    pub abs: f64,
    /// Gross mass of the terms that had to cancel.
    pub scale: f64,
}

impl Residual {
    pub fn new(abs: f64, scale: f64) -> Self {
        Residual { abs, scale }
    }

    /// `abs / scale`; zero residual against zero scale counts as exact.
    pub fn relative(&self) -> f64 {
        if self.abs == 0.0 {
            0.0
        } else if self.scale == 0.0 {
            f64::INFINITY
        } else {
            self.abs / self.scale
        }
    }

    /// Pointwise maximum in both components.
    pub fn max(self, other: Residual) -> Residual {
        Residual {
            abs: self.abs.max(other.abs),
            scale: self.scale.max(other.scale),
        }
    }
}

/// One verification check in a run report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    /// Which mathematical law the check exercises.
    pub law: String,
    pub residual: f64,
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn from_residual(name: &str, law: &str, residual: Residual, tol: f64) -> Self {
        CheckRecord {
            name: name.to_string(),
            law: law.to_string(),
            residual: residual.relative(),
            scale: residual.scale,
            tol,
            pass: residual.relative() <= tol,
        }
    }

    /// For checks whose payoff is a verdict rather than a residual.
    pub fn from_flag(name: &str, law: &str, pass: bool) -> Self {
        CheckRecord {
            name: name.to_string(),
            law: law.to_string(),
            residual: if pass { 0.0 } else { 1.0 },
            scale: 1.0,
            tol: 0.5,
            pass,
        }
    }
}

/// Echo of the configuration a run was performed with.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ManifestConfig {
    pub n_sites: usize,
    pub kappa: f64,
    pub h0: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<(f64, f64)>,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

/// Top-level run report; serializes losslessly to and from JSON.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: ManifestConfig,
    pub version: String,
    pub wall_ms: u64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<RunManifest> {
        serde_json::from_str(text)
    }
}

/// CSV rendering of the check table (header plus one row per check).
pub fn checks_to_csv(checks: &[CheckRecord]) -> String {
    let mut out = String::from("name,law,residual,scale,tol,pass\n");
    for c in checks {
        out.push_str(&format!(
            "{},{},{:e},{:e},{:e},{}\n",
            c.name, c.law, c.residual, c.scale, c.tol, c.pass
        ));
    }
    out
}
