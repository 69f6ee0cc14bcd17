//! Unit newtypes. Every temperature crossing a module boundary is a [`Kelvin`],
//! every pressure a [`Pascal`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute temperature in kelvin.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Kelvin(pub f64);

/// Absolute pressure in pascal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pascal(pub f64);

impl Kelvin {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Pascal {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Kelvin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} K", self.0)
    }
}

impl fmt::Display for Pascal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} Pa", self.0)
    }
}

/// Pressure unit a parameter file declares for its Antoine constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PressureUnit {
    Pa,
    #[serde(rename = "kPa")]
    KPa,
    Bar,
    #[serde(rename = "mmHg")]
    MmHg,
}

impl PressureUnit {
    /// Size of one unit in pascal.
    pub fn pascal_per_unit(self) -> f64 {
        match self {
            PressureUnit::Pa => 1.0,
            PressureUnit::KPa => 1.0e3,
            PressureUnit::Bar => 1.0e5,
            PressureUnit::MmHg => 101_325.0 / 760.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PressureUnit::Pa => "Pa",
            PressureUnit::KPa => "kPa",
            PressureUnit::Bar => "bar",
            PressureUnit::MmHg => "mmHg",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown pressure unit `{0}` (expected Pa, kPa, bar or mmHg)")]
pub struct UnknownUnit(pub String);

impl FromStr for PressureUnit {
    type Err = UnknownUnit;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Pa" | "pa" => Ok(PressureUnit::Pa),
            "kPa" | "kpa" => Ok(PressureUnit::KPa),
            "bar" | "Bar" => Ok(PressureUnit::Bar),
            "mmHg" | "mmhg" | "torr" => Ok(PressureUnit::MmHg),
            other => Err(UnknownUnit(other.to_string())),
        }
    }
}

impl fmt::Display for PressureUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Isothermal,
    Isobaric,
}

/// Fixed state of a binary phase diagram: either the temperature or the pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum StateSpec {
    Isothermal {
        #[serde(rename = "T_K")]
        temperature: Kelvin,
    },
    Isobaric {
        #[serde(rename = "p_Pa")]
        pressure: Pascal,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("temperature must be positive and finite, got {0} K")]
    Temperature(f64),
    #[error("pressure must be positive and finite, got {0} Pa")]
    Pressure(f64),
}

impl StateSpec {
    pub fn isothermal(t: Kelvin) -> Result<Self, StateError> {
        if t.0.is_finite() && t.0 > 0.0 {
            Ok(StateSpec::Isothermal { temperature: t })
        } else {
            Err(StateError::Temperature(t.0))
        }
    }

    pub fn isobaric(p: Pascal) -> Result<Self, StateError> {
        if p.0.is_finite() && p.0 > 0.0 {
            Ok(StateSpec::Isobaric { pressure: p })
        } else {
            Err(StateError::Pressure(p.0))
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            StateSpec::Isothermal { .. } => Mode::Isothermal,
            StateSpec::Isobaric { .. } => Mode::Isobaric,
        }
    }

    /// The fixed value in SI units (K or Pa).
    pub fn fixed_value(&self) -> f64 {
        match self {
            StateSpec::Isothermal { temperature } => temperature.0,
            StateSpec::Isobaric { pressure } => pressure.0,
        }
    }
}
