//! Reduced-unit model and run parameters.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Triplet truncation rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutoffMode {
    /// Every side of the triangle within `r_c`.
    Pair,
    /// Product of the three sides within `r_c^3`.
    Product,
}

impl CutoffMode {
    pub const ALL: [CutoffMode; 2] = [CutoffMode::Pair, CutoffMode::Product];

    /// Acceptance test on squared distances; `rc2 = r_c^2`, `rc6 = r_c^6`.
    #[inline(always)]
    pub fn accepts_sq(self, r2_ij: f64, r2_ik: f64, r2_jk: f64, rc2: f64, rc6: f64) -> bool {
        match self {
            CutoffMode::Pair => r2_ij <= rc2 && r2_ik <= rc2 && r2_jk <= rc2,
            CutoffMode::Product => r2_ij * r2_ik * r2_jk <= rc6,
        }
    }
}

impl fmt::Display for CutoffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutoffMode::Pair => "pair",
            CutoffMode::Product => "product",
        })
    }
}

impl FromStr for CutoffMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pair" | "pairwise" => Ok(CutoffMode::Pair),
            "product" => Ok(CutoffMode::Product),
            other => Err(Error::config(format!("unknown cutoff mode '{other}' (expected pair or product)"))),
        }
    }
}

/// Cell-triplet traversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraversalKind {
    C01,
    C18,
    C08,
}

impl TraversalKind {
    pub const ALL: [TraversalKind; 3] = [TraversalKind::C01, TraversalKind::C18, TraversalKind::C08];

    /// Whether each triplet is visited once and forces are applied to all members.
    pub fn newton(self) -> bool {
        !matches!(self, TraversalKind::C01)
    }
}

impl fmt::Display for TraversalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraversalKind::C01 => "3c01",
            TraversalKind::C18 => "3c18",
            TraversalKind::C08 => "3c08",
        })
    }
}

impl FromStr for TraversalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "3c01" | "c01" => Ok(TraversalKind::C01),
            "3c18" | "c18" => Ok(TraversalKind::C18),
            "3c08" | "c08" => Ok(TraversalKind::C08),
            other => Err(Error::config(format!("unknown traversal '{other}' (expected 3c01, 3c18 or 3c08)"))),
        }
    }
}

/// Model and integration parameters in reduced Lennard-Jones units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub epsilon: f64,
    pub sigma: f64,
    pub mass: f64,
    /// Triple-dipole strength.
    pub nu: f64,
    pub r_c: f64,
    pub dt: f64,
    pub t_target: f64,
    pub cutoff: CutoffMode,
    pub traversal: TraversalKind,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            epsilon: 1.0,
            sigma: 1.0,
            mass: 1.0,
            nu: 0.072,
            r_c: 2.5,
            dt: 0.004,
            t_target: 1.0,
            cutoff: CutoffMode::Pair,
            traversal: TraversalKind::C08,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        let positive =
            [("epsilon", self.epsilon), ("sigma", self.sigma), ("mass", self.mass), ("r_c", self.r_c), ("dt", self.dt)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if !(self.nu.is_finite() && self.nu >= 0.0) {
            return Err(Error::config(format!("nu must be finite and non-negative, got {}", self.nu)));
        }
        if !(self.t_target.is_finite() && self.t_target >= 0.0) {
            return Err(Error::config(format!("temperature must be finite and non-negative, got {}", self.t_target)));
        }
        Ok(())
    }

    #[inline]
    pub fn rc2(&self) -> f64 {
        self.r_c * self.r_c
    }

    #[inline]
    pub fn rc6(&self) -> f64 {
        let r2 = self.rc2();
        r2 * r2 * r2
    }
}
