//! Antoine vapor-pressure equation and its inverse.
//!
//! Convention: `log10(p / base) = A - B / (T + C)` with `T` and `C` in kelvin,
//! `B` in kelvin, and `base` the pressure unit the parameter source declares.
//! Every evaluation returns pascal regardless of the declared unit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::{Kelvin, Pascal, PressureUnit};

/// Pressure below which vapor-pressure predictions are flagged as uncertain.
pub const LOW_PRESSURE_LIMIT: Pascal = Pascal(1000.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AntoineError {
    #[error("invalid Antoine parameters: {0}")]
    InvalidParameters(String),
    #[error("T + C = 0 at T = {0} K")]
    SingularTemperature(f64),
    #[error("A - log10(p/base) = 0 at p = {0} Pa")]
    SingularPressure(f64),
    #[error("inversion gives non-physical temperature {0} K")]
    NonPhysical(f64),
    #[error("input must be positive and finite, got {0}")]
    NonPositive(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AntoineWarning {
    /// Temperature outside the validity range of the parameter set.
    ExtrapolatedTemperature,
    /// Predicted pressure below 1 kPa.
    LowPressureRegime,
}

/// Antoine constants with their validity range and declared pressure unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntoineParameterSet {
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: f64,
    #[serde(rename = "C")]
    c: f64,
    #[serde(rename = "t_min_K")]
    t_min: f64,
    #[serde(rename = "t_max_K")]
    t_max: f64,
    #[serde(rename = "p_unit")]
    unit: PressureUnit,
}

impl AntoineParameterSet {
    pub fn new(
        a: f64,
        b: f64,
        c: f64,
        t_min: Kelvin,
        t_max: Kelvin,
        unit: PressureUnit,
    ) -> Result<Self, AntoineError> {
        if ![a, b, c, t_min.0, t_max.0].iter().all(|v| v.is_finite()) {
            return Err(AntoineError::InvalidParameters("non-finite value".into()));
        }
        if !(t_min.0 < t_max.0) {
            return Err(AntoineError::InvalidParameters(format!(
                "t_min ({}) must be below t_max ({})",
                t_min.0, t_max.0
            )));
        }
        Ok(Self {
            a,
            b,
            c,
            t_min: t_min.0,
            t_max: t_max.0,
            unit,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn t_min(&self) -> Kelvin {
        Kelvin(self.t_min)
    }
    pub fn t_max(&self) -> Kelvin {
        Kelvin(self.t_max)
    }
    pub fn unit(&self) -> PressureUnit {
        self.unit
    }

    /// Re-validates after deserialization.
    pub fn validated(self) -> Result<Self, AntoineError> {
        Self::new(
            self.a,
            self.b,
            self.c,
            Kelvin(self.t_min),
            Kelvin(self.t_max),
            self.unit,
        )
    }
}

/// Saturation pressure at `t`.
pub fn vapor_pressure(params: &AntoineParameterSet, t: Kelvin) -> Result<Pascal, AntoineError> {
    if !(t.0.is_finite() && t.0 > 0.0) {
        return Err(AntoineError::NonPositive(t.0));
    }
    let denom = t.0 + params.c;
    if denom == 0.0 {
        return Err(AntoineError::SingularTemperature(t.0));
    }
    let exponent = params.a - params.b / denom;
    Ok(Pascal(
        params.unit.pascal_per_unit() * 10f64.powf(exponent),
    ))
}

/// Saturation pressure plus the warnings [`range_check`] would report.
pub fn vapor_pressure_checked(
    params: &AntoineParameterSet,
    t: Kelvin,
) -> Result<(Pascal, Vec<AntoineWarning>), AntoineError> {
    let p = vapor_pressure(params, t)?;
    Ok((p, warnings_for(params, t, Some(p))))
}

/// Temperature at which the saturation pressure equals `p`.
pub fn boiling_temperature(params: &AntoineParameterSet, p: Pascal) -> Result<Kelvin, AntoineError> {
    if !(p.0.is_finite() && p.0 > 0.0) {
        return Err(AntoineError::NonPositive(p.0));
    }
    let log_p = (p.0 / params.unit.pascal_per_unit()).log10();
    let denom = params.a - log_p;
    if denom.abs() <= 4.0 * f64::EPSILON * params.a.abs().max(1.0) {
        return Err(AntoineError::SingularPressure(p.0));
    }
    let t = params.b / denom - params.c;
    if !(t.is_finite() && t > 0.0) {
        return Err(AntoineError::NonPhysical(t));
    }
    Ok(Kelvin(t))
}

/// Named warnings for evaluating `params` at `t`; never fails.
pub fn range_check(params: &AntoineParameterSet, t: Kelvin) -> Vec<AntoineWarning> {
    let p = vapor_pressure(params, t).ok();
    warnings_for(params, t, p)
}

fn warnings_for(params: &AntoineParameterSet, t: Kelvin, p: Option<Pascal>) -> Vec<AntoineWarning> {
    let mut out = Vec::new();
    if !(t.0 >= params.t_min && t.0 <= params.t_max) {
        out.push(AntoineWarning::ExtrapolatedTemperature);
    }
    if let Some(p) = p {
        if p.0 < LOW_PRESSURE_LIMIT.0 {
            out.push(AntoineWarning::LowPressureRegime);
        }
    }
    out
}
