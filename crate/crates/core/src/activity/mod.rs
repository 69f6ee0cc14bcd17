//! Liquid-phase activity coefficients of binary mixtures.
//!
//! Models implement [`ActivityModel`]; [`activity_curve`] evaluates any of
//! them on an equidistant composition grid.

pub mod nrtl;
pub mod unifac;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adapter::AdapterError;
use crate::units::Kelvin;

pub use nrtl::{
    nrtl_ln_gamma, nrtl_tau_alpha, Nrtl, NrtlParameterSet, NrtlState, NrtlVariant, ALPHA_REFERENCE_T,
};
pub use unifac::{
    unifac_combinatorial, unifac_residual, GroupCounts, Unifac, UnifacParameterTable, UnifacVariant,
};

/// Tolerance on ln gamma_i at x_i = 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ActivityError {
    #[error("NRTL alpha = {alpha} outside (0, 2) at T = {temperature} K")]
    AlphaOutOfRange { alpha: f64, temperature: f64 },
    #[error("group {0} lacks R/Q data in the parameter table")]
    MissingGroupData(String),
    #[error("no interaction parameters for main groups ({main_m}, {main_n})")]
    ParameterGap { main_m: u32, main_n: u32 },
    #[error("mole fraction {0} outside [0, 1]")]
    InvalidComposition(f64),
    #[error("temperature {0} K must be positive")]
    InvalidTemperature(f64),
    #[error("invalid model parameters: {0}")]
    InvalidParameters(String),
    #[error("non-finite activity coefficient at x1 = {x1}")]
    NonFinite { x1: f64 },
    #[error("composition step {0} does not divide 1")]
    GridSpacing(f64),
    #[error("invalid activity curve: {0}")]
    InvalidCurve(String),
    #[error(transparent)]
    Remote(#[from] AdapterError),
    #[error("at x1 = {x1}: {source}")]
    AtComposition {
        x1: f64,
        #[source]
        source: Box<ActivityError>,
    },
}

pub(crate) fn check_composition(x1: f64) -> Result<(), ActivityError> {
    if (0.0..=1.0).contains(&x1) {
        Ok(())
    } else {
        Err(ActivityError::InvalidComposition(x1))
    }
}

pub(crate) fn check_temperature(t: Kelvin) -> Result<(), ActivityError> {
    if t.0.is_finite() && t.0 > 0.0 {
        Ok(())
    } else {
        Err(ActivityError::InvalidTemperature(t.0))
    }
}

/// A binary activity-coefficient model, immutable and shareable across threads.
pub trait ActivityModel: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// `(ln gamma_1, ln gamma_2)` at liquid mole fraction `x1` of component 1.
    fn ln_gamma(&self, x1: f64, t: Kelvin) -> Result<(f64, f64), ActivityError>;

    /// Evaluates a whole grid; failures carry the offending `x1`.
    fn ln_gamma_grid(&self, grid: &[f64], t: Kelvin) -> Result<Vec<(f64, f64)>, ActivityError> {
        grid.par_iter()
            .map(|&x1| {
                self.ln_gamma(x1, t).map_err(|e| ActivityError::AtComposition {
                    x1,
                    source: Box::new(e),
                })
            })
            .collect()
    }

    /// The same mixture with components exchanged, when the model can express it.
    fn swapped(&self) -> Option<Box<dyn ActivityModel>> {
        None
    }
}

/// Dispatches to the model; same contract as the model's own `ln_gamma`.
pub fn ln_gamma(model: &dyn ActivityModel, x1: f64, t: Kelvin) -> Result<(f64, f64), ActivityError> {
    check_composition(x1)?;
    check_temperature(t)?;
    model.ln_gamma(x1, t)
}

/// ln gamma of both components over a composition grid at one temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityCurve {
    #[serde(rename = "T_K")]
    pub temperature: Kelvin,
    pub x1: Vec<f64>,
    pub ln_gamma1: Vec<f64>,
    pub ln_gamma2: Vec<f64>,
    pub model: String,
}

impl ActivityCurve {
    /// Validates grid shape and endpoint normalization.
    pub fn new(
        temperature: Kelvin,
        x1: Vec<f64>,
        ln_gamma1: Vec<f64>,
        ln_gamma2: Vec<f64>,
        model: impl Into<String>,
    ) -> Result<Self, ActivityError> {
        let curve = Self {
            temperature,
            x1,
            ln_gamma1,
            ln_gamma2,
            model: model.into(),
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<(), ActivityError> {
        let bad = |m: String| Err(ActivityError::InvalidCurve(m));
        let n = self.x1.len();
        if n < 2 {
            return bad("grid needs at least two points".into());
        }
        if self.ln_gamma1.len() != n || self.ln_gamma2.len() != n {
            return bad(format!(
                "length mismatch: grid {n}, ln_gamma1 {}, ln_gamma2 {}",
                self.ln_gamma1.len(),
                self.ln_gamma2.len()
            ));
        }
        if self.x1[0] != 0.0 || self.x1[n - 1] != 1.0 {
            return bad("grid must start at 0 and end at 1".into());
        }
        if self.x1.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("grid must be strictly increasing".into());
        }
        if self
            .ln_gamma1
            .iter()
            .chain(&self.ln_gamma2)
            .any(|v| !v.is_finite())
        {
            return bad("non-finite ln gamma".into());
        }
        if self.ln_gamma1[n - 1].abs() > NORMALIZATION_TOLERANCE {
            return bad(format!("ln gamma1 at x1 = 1 is {}, expected 0", self.ln_gamma1[n - 1]));
        }
        if self.ln_gamma2[0].abs() > NORMALIZATION_TOLERANCE {
            return bad(format!("ln gamma2 at x1 = 0 is {}, expected 0", self.ln_gamma2[0]));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.x1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x1.is_empty()
    }
}

/// `0, 1/n, ..., 1` for a step that divides one.
pub fn composition_grid(step: f64) -> Result<Vec<f64>, ActivityError> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(ActivityError::GridSpacing(step));
    }
    let n = (1.0 / step).round();
    if (n * step - 1.0).abs() > 1e-9 {
        return Err(ActivityError::GridSpacing(step));
    }
    let n = n as usize;
    Ok((0..=n).map(|k| k as f64 / n as f64).collect())
}

/// Activity curve at `t` with composition step `step` (0.01 gives 101 points).
///
/// No check is made that the liquid is stable or even liquid at `t`.
pub fn activity_curve(model: &dyn ActivityModel, t: Kelvin, step: f64) -> Result<ActivityCurve, ActivityError> {
    check_temperature(t)?;
    let grid = composition_grid(step)?;
    curve_on_grid(model, t, grid)
}

pub(crate) fn curve_on_grid(
    model: &dyn ActivityModel,
    t: Kelvin,
    grid: Vec<f64>,
) -> Result<ActivityCurve, ActivityError> {
    let values = model.ln_gamma_grid(&grid, t)?;
    let (g1, g2) = values.into_iter().unzip();
    ActivityCurve::new(t, grid, g1, g2, model.name())
}
