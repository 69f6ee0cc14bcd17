//! Binary NRTL in the Aspen coefficient layout.
//!
//! ```text
//! tau_ij  = a_ij + b_ij / T + e_ij ln T + f_ij T
//! alpha   = c_12 + d_12 (T - 273.15 K)
//! G_ij    = exp(-alpha tau_ij)
//! ln g1   = x2^2 [ tau21 (G21 / (x1 + x2 G21))^2 + tau12 G12 / (x2 + x1 G12)^2 ]
//! ln g2   = x1^2 [ tau12 (G12 / (x2 + x1 G12))^2 + tau21 G21 / (x1 + x2 G21)^2 ]
//! ```
//!
//! Free coefficients per variant:
//! * 3:  a12, a21, c12
//! * 6:  a12, a21, b12, b21, c12, d12
//! * 10: a12, a21, b12, b21, e12, e21, f12, f21, c12, d12

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{check_composition, check_temperature, ActivityError, ActivityModel};
use crate::units::Kelvin;

/// Reference temperature of the alpha temperature slope.
pub const ALPHA_REFERENCE_T: f64 = 273.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum NrtlVariant {
    Three,
    Six,
    Ten,
}

impl NrtlVariant {
    pub fn parameter_count(self) -> usize {
        match self {
            NrtlVariant::Three => 3,
            NrtlVariant::Six => 6,
            NrtlVariant::Ten => 10,
        }
    }

    /// Names of the free coefficients, in the order used by
    /// [`NrtlParameterSet::free_values`].
    pub fn free_names(self) -> &'static [&'static str] {
        match self {
            NrtlVariant::Three => &["a12", "a21", "c12"],
            NrtlVariant::Six => &["a12", "a21", "b12", "b21", "c12", "d12"],
            NrtlVariant::Ten => &[
                "a12", "a21", "b12", "b21", "e12", "e21", "f12", "f21", "c12", "d12",
            ],
        }
    }
}

impl TryFrom<u8> for NrtlVariant {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            3 => Ok(NrtlVariant::Three),
            6 => Ok(NrtlVariant::Six),
            10 => Ok(NrtlVariant::Ten),
            other => Err(format!("NRTL variant must be 3, 6 or 10, got {other}")),
        }
    }
}

impl From<NrtlVariant> for u8 {
    fn from(v: NrtlVariant) -> u8 {
        v.parameter_count() as u8
    }
}

impl fmt::Display for NrtlVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.parameter_count())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NrtlParameterSet {
    pub a12: f64,
    pub a21: f64,
    pub b12: f64,
    pub b21: f64,
    pub e12: f64,
    pub e21: f64,
    pub f12: f64,
    pub f21: f64,
    pub c12: f64,
    pub d12: f64,
    pub variant: NrtlVariant,
}

impl NrtlParameterSet {
    pub fn three(a12: f64, a21: f64, c12: f64) -> Self {
        Self::from_free(NrtlVariant::Three, &[a12, a21, c12])
    }

    pub fn six(a12: f64, a21: f64, b12: f64, b21: f64, c12: f64, d12: f64) -> Self {
        Self::from_free(NrtlVariant::Six, &[a12, a21, b12, b21, c12, d12])
    }

    /// Builds a set from the free coefficients of `variant` (see
    /// [`NrtlVariant::free_names`]); fixed slots are zero.
    ///
    /// Panics if `values` has the wrong length.
    pub fn from_free(variant: NrtlVariant, values: &[f64]) -> Self {
        assert_eq!(values.len(), variant.parameter_count(), "wrong number of NRTL coefficients");
        let mut p = Self {
            a12: 0.0,
            a21: 0.0,
            b12: 0.0,
            b21: 0.0,
            e12: 0.0,
            e21: 0.0,
            f12: 0.0,
            f21: 0.0,
            c12: 0.0,
            d12: 0.0,
            variant,
        };
        for (name, &v) in variant.free_names().iter().zip(values) {
            *p.slot_mut(name) = v;
        }
        p
    }

    pub fn free_values(&self) -> Vec<f64> {
        self.variant
            .free_names()
            .iter()
            .map(|n| self.slot(n))
            .collect()
    }

    pub fn slot(&self, name: &str) -> f64 {
        match name {
            "a12" => self.a12,
            "a21" => self.a21,
            "b12" => self.b12,
            "b21" => self.b21,
            "e12" => self.e12,
            "e21" => self.e21,
            "f12" => self.f12,
            "f21" => self.f21,
            "c12" => self.c12,
            "d12" => self.d12,
            _ => panic!("unknown NRTL coefficient {name}"),
        }
    }

    fn slot_mut(&mut self, name: &str) -> &mut f64 {
        match name {
            "a12" => &mut self.a12,
            "a21" => &mut self.a21,
            "b12" => &mut self.b12,
            "b21" => &mut self.b21,
            "e12" => &mut self.e12,
            "e21" => &mut self.e21,
            "f12" => &mut self.f12,
            "f21" => &mut self.f21,
            "c12" => &mut self.c12,
            "d12" => &mut self.d12,
            _ => panic!("unknown NRTL coefficient {name}"),
        }
    }

    /// Checks finiteness and that coefficients outside the variant are zero.
    pub fn validate(&self) -> Result<(), ActivityError> {
        let all = [
            "a12", "a21", "b12", "b21", "e12", "e21", "f12", "f21", "c12", "d12",
        ];
        let free = self.variant.free_names();
        for name in all {
            let v = self.slot(name);
            if !v.is_finite() {
                return Err(ActivityError::InvalidParameters(format!("{name} is not finite")));
            }
            if !free.contains(&name) && v != 0.0 {
                return Err(ActivityError::InvalidParameters(format!(
                    "{name} must be zero for the {}-parameter variant",
                    self.variant
                )));
            }
        }
        Ok(())
    }

    /// Same coefficients with components 1 and 2 exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            a12: self.a21,
            a21: self.a12,
            b12: self.b21,
            b21: self.b12,
            e12: self.e21,
            e21: self.e12,
            f12: self.f21,
            f21: self.f12,
            ..*self
        }
    }

    /// Human-readable equations and coefficient values of this variant.
    pub fn equations_text(&self) -> String {
        let tau = match self.variant {
            NrtlVariant::Three => "tau_ij = a_ij",
            NrtlVariant::Six => "tau_ij = a_ij + b_ij / T",
            NrtlVariant::Ten => "tau_ij = a_ij + b_ij / T + e_ij ln(T) + f_ij T",
        };
        let alpha = match self.variant {
            NrtlVariant::Three => "alpha_12 = alpha_21 = c_12",
            _ => "alpha_12 = alpha_21 = c_12 + d_12 (T - 273.15 K)",
        };
        let mut s = format!(
            "NRTL ({}-parameter)\n\
             ln gamma_1 = x_2^2 [tau_21 (G_21 / (x_1 + x_2 G_21))^2 + tau_12 G_12 / (x_2 + x_1 G_12)^2]\n\
             ln gamma_2 = x_1^2 [tau_12 (G_12 / (x_2 + x_1 G_12))^2 + tau_21 G_21 / (x_1 + x_2 G_21)^2]\n\
             G_ij = exp(-alpha_ij tau_ij)\n\
             {tau}\n\
             {alpha}\n\
             T in K\n",
            self.variant
        );
        for name in self.variant.free_names() {
            s.push_str(&format!("{name} = {}\n", self.slot(name)));
        }
        s
    }
}

/// Temperature-evaluated NRTL quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NrtlState {
    pub tau12: f64,
    pub tau21: f64,
    pub alpha: f64,
    pub g12: f64,
    pub g21: f64,
}

impl NrtlState {
    /// Evaluates the coefficients at `t` without range checks.
    pub fn evaluate_unchecked(params: &NrtlParameterSet, t: f64) -> Self {
        let ln_t = t.ln();
        let tau12 = params.a12 + params.b12 / t + params.e12 * ln_t + params.f12 * t;
        let tau21 = params.a21 + params.b21 / t + params.e21 * ln_t + params.f21 * t;
        let alpha = params.c12 + params.d12 * (t - ALPHA_REFERENCE_T);
        Self {
            tau12,
            tau21,
            alpha,
            g12: (-alpha * tau12).exp(),
            g21: (-alpha * tau21).exp(),
        }
    }

    /// Renon form at liquid composition `x1`.
    pub fn ln_gamma(&self, x1: f64) -> (f64, f64) {
        let x2 = 1.0 - x1;
        let d21 = x1 + x2 * self.g21;
        let d12 = x2 + x1 * self.g12;
        let ln_g1 = x2
            * x2
            * (self.tau21 * (self.g21 / d21).powi(2) + self.tau12 * self.g12 / (d12 * d12));
        let ln_g2 = x1
            * x1
            * (self.tau12 * (self.g12 / d12).powi(2) + self.tau21 * self.g21 / (d21 * d21));
        (ln_g1, ln_g2)
    }
}

/// tau, alpha and G at `t`; fails when alpha leaves (0, 2).
pub fn nrtl_tau_alpha(params: &NrtlParameterSet, t: Kelvin) -> Result<NrtlState, ActivityError> {
    check_temperature(t)?;
    let state = NrtlState::evaluate_unchecked(params, t.0);
    if !(state.alpha > 0.0 && state.alpha < 2.0) {
        return Err(ActivityError::AlphaOutOfRange {
            alpha: state.alpha,
            temperature: t.0,
        });
    }
    let finite = [state.tau12, state.tau21, state.g12, state.g21]
        .iter()
        .all(|v| v.is_finite());
    if !finite {
        return Err(ActivityError::NonFinite { x1: f64::NAN });
    }
    Ok(state)
}

pub fn nrtl_ln_gamma(params: &NrtlParameterSet, x1: f64, t: Kelvin) -> Result<(f64, f64), ActivityError> {
    check_composition(x1)?;
    let state = nrtl_tau_alpha(params, t)?;
    let out = state.ln_gamma(x1);
    if !(out.0.is_finite() && out.1.is_finite()) {
        return Err(ActivityError::NonFinite { x1 });
    }
    Ok(out)
}

/// NRTL as an [`ActivityModel`].
#[derive(Debug, Clone)]
pub struct Nrtl {
    name: String,
    params: NrtlParameterSet,
}

impl Nrtl {
    pub fn new(params: NrtlParameterSet) -> Result<Self, ActivityError> {
        Self::named("nrtl", params)
    }

    pub fn named(name: impl Into<String>, params: NrtlParameterSet) -> Result<Self, ActivityError> {
        params.validate()?;
        Ok(Self {
            name: name.into(),
            params,
        })
    }

    pub fn params(&self) -> &NrtlParameterSet {
        &self.params
    }
}

impl ActivityModel for Nrtl {
    fn name(&self) -> &str {
        &self.name
    }

    fn ln_gamma(&self, x1: f64, t: Kelvin) -> Result<(f64, f64), ActivityError> {
        nrtl_ln_gamma(&self.params, x1, t)
    }

    fn swapped(&self) -> Option<Box<dyn ActivityModel>> {
        Some(Box::new(Nrtl {
            name: self.name.clone(),
            params: self.params.swapped(),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn degenerate_alpha_rejected() {
        let p = NrtlParameterSet::three(0.0, 0.0, 0.0);
        assert!(matches!(
            nrtl_tau_alpha(&p, Kelvin(300.0)),
            Err(ActivityError::AlphaOutOfRange { .. })
        ));
        let p = NrtlParameterSet::three(0.0, 0.0, 2.0);
        assert!(nrtl_tau_alpha(&p, Kelvin(300.0)).is_err());
    }

    #[test]
    fn zero_tau_gives_unit_g() {
        let s = nrtl_tau_alpha(&NrtlParameterSet::three(0.0, 0.0, 0.3), Kelvin(300.0)).unwrap();
        assert_eq!((s.tau12, s.tau21, s.g12, s.g21), (0.0, 0.0, 1.0, 1.0));
        for k in 0..=10 {
            let x = k as f64 / 10.0;
            let (a, b) = s.ln_gamma(x);
            assert_eq!((a, b), (0.0, 0.0));
        }
    }

    #[test]
    fn hand_evaluated_tau() {
        let p = NrtlParameterSet::six(1.0, 0.0, 100.0, 0.0, 0.3, 0.0);
        let s = nrtl_tau_alpha(&p, Kelvin(400.0)).unwrap();
        assert_eq!(s.tau12, 1.25);
        assert_relative_eq!(s.g12, (-0.375f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn alpha_slope_uses_273_15_reference() {
        let p = NrtlParameterSet::six(0.0, 0.0, 0.0, 0.0, 0.3, 0.001);
        let s = nrtl_tau_alpha(&p, Kelvin(373.15)).unwrap();
        assert_relative_eq!(s.alpha, 0.4, max_relative = 1e-12);
    }

    #[test]
    fn infinite_dilution_limit() {
        // ln g1(x1 -> 0) = tau21 + tau12 exp(-alpha tau12)
        let p = NrtlParameterSet::three(0.5, 0.8, 0.3);
        let (g1, _) = nrtl_ln_gamma(&p, 1e-12, Kelvin(350.0)).unwrap();
        let closed = 0.8 + 0.5 * (-0.3f64 * 0.5).exp();
        assert!((g1 - closed).abs() < 1e-8);
        let (_, g2) = nrtl_ln_gamma(&p, 1.0 - 1e-12, Kelvin(350.0)).unwrap();
        let closed2 = 0.5 + 0.8 * (-0.3f64 * 0.8).exp();
        assert!((g2 - closed2).abs() < 1e-8);
    }

    #[test]
    fn pure_limits_exactly_zero() {
        let p = NrtlParameterSet::three(1.3, -0.4, 0.2);
        assert_eq!(nrtl_ln_gamma(&p, 1.0, Kelvin(320.0)).unwrap().0, 0.0);
        assert_eq!(nrtl_ln_gamma(&p, 0.0, Kelvin(320.0)).unwrap().1, 0.0);
    }

    #[test]
    fn variant_constraints() {
        let mut p = NrtlParameterSet::three(1.0, 1.0, 0.3);
        assert!(p.validate().is_ok());
        p.b12 = 10.0;
        assert!(p.validate().is_err());
        let ten = NrtlParameterSet::from_free(NrtlVariant::Ten, &[1.0; 10]);
        assert!(ten.validate().is_ok());
        assert_eq!(ten.free_values(), vec![1.0; 10]);
        assert_eq!(serde_json::to_string(&NrtlVariant::Six).unwrap(), "6");
        assert!(serde_json::from_str::<NrtlVariant>("7").is_err());
    }

    #[test]
    fn equations_text_lists_free_coefficients() {
        let txt = NrtlParameterSet::six(1.0, 2.0, 3.0, 4.0, 0.3, 0.0).equations_text();
        assert!(txt.contains("b_ij / T"));
        assert!(txt.contains("d12 = 0"));
        assert!(!txt.contains("e12"));
    }
}
