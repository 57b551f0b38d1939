//! Numerical tolerances shared across the crate.
//!
//! Every threshold a computation depends on lives here with its default,
//! so that a run is reproducible from its configuration alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum edge length below which the perimeter is treated as
/// non-differentiable.
pub const EDGE_TOL: f64 = 1e-9;

/// Relative residual threshold for accepting a constrained critical point.
pub const CRIT_TOL: f64 = 1e-9;

/// Eigenvalues of the restricted Hessian with magnitude below
/// `EIG_TOL * spectral_radius` count toward the nullity.
pub const EIG_TOL: f64 = 1e-7;

/// Curve-membership tolerance on the scale-invariant ratio a / pi^2.
pub const CURVE_TOL: f64 = 1e-10;

/// Relative tolerance for finite-difference derivative checks.
pub const GRAD_CHECK_TOL: f64 = 1e-6;

/// Absolute tolerance for entrywise polygon equality (canonical forms).
pub const EQ_TOL: f64 = 1e-9;

/// Default seed for pseudo-random polygon generation.
pub const DEFAULT_SEED: u64 = 0x504F_4C59;

/// The four tunable tolerances. All positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub edge_tol: f64,
    pub crit_tol: f64,
    pub eig_tol: f64,
    pub curve_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            edge_tol: EDGE_TOL,
            crit_tol: CRIT_TOL,
            eig_tol: EIG_TOL,
            curve_tol: CURVE_TOL,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("edge_tol", self.edge_tol),
            ("crit_tol", self.crit_tol),
            ("eig_tol", self.eig_tol),
            ("curve_tol", self.curve_tol),
        ] {
            if !(v > 0.0) {
                return Err(Error::Parse(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Apply one `key=value` override. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("cannot parse '{value}' for {key}")))?;
        match key.trim() {
            "edge_tol" => self.edge_tol = v,
            "crit_tol" => self.crit_tol = v,
            "eig_tol" => self.eig_tol = v,
            "curve_tol" => self.curve_tol = v,
            other => return Err(Error::Parse(format!("unknown tolerance key '{other}'"))),
        }
        self.validate()
    }

    /// Parse a plain `key=value` configuration file body. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn apply_key_values(&mut self, body: &str) -> Result<()> {
        for line in body.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{line}'")))?;
            self.set(key, value)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_positive() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn key_value_overrides() {
        let mut t = Tolerances::default();
        t.apply_key_values("# comment\n\nedge_tol = 1e-7\ncurve_tol=1e-8\n")
            .unwrap();
        assert_eq!(t.edge_tol, 1e-7);
        assert_eq!(t.curve_tol, 1e-8);
        assert_eq!(t.crit_tol, CRIT_TOL);
    }

    #[test]
    fn rejects_unknown_key_and_bad_value() {
        let mut t = Tolerances::default();
        assert!(t.apply_key_values("speed=9").is_err());
        assert!(t.apply_key_values("edge_tol=fast").is_err());
        assert!(t.apply_key_values("edge_tol=-1.0").is_err());
    }
}
