//! Binary vapor-liquid equilibrium from the extended Raoult's law
//! `p_i^s(T) x_i gamma_i = p y_i` (ideal vapor, no Poynting correction).

mod consistency;
mod diagram;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::activity::{check_composition, ActivityError, ActivityModel};
use crate::antoine::{boiling_temperature, vapor_pressure, AntoineError, AntoineParameterSet};
use crate::solver::{brent, RootError};
use crate::units::{Kelvin, Pascal};

pub use consistency::{check_consistency, ConsistencyCheck, ConsistencyReport, Verdict};
pub use diagram::{build_diagram, detect_azeotropes, DiagramWarning, VleDiagram, GRID_STEP};

pub const DEW_DAMPING: f64 = 0.5;
pub const DEW_TOLERANCE: f64 = 1e-10;
pub const DEW_MAX_ITERATIONS: usize = 200;
pub const BRACKET_WIDENING: f64 = 20.0;
pub const TEMPERATURE_TOLERANCE: f64 = 1e-8;
/// Absolute x1 tolerance of the bracketing dew fallback.
const DEW_BRACKET_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Line {
    Bubble,
    Dew,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Line::Bubble => "bubble",
            Line::Dew => "dew",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VleError {
    #[error(transparent)]
    Activity(#[from] ActivityError),
    #[error(transparent)]
    Antoine(#[from] AntoineError),
    #[error("dew iteration did not converge in {iterations} iterations (last step {last_step:e})")]
    NoConvergence { iterations: usize, last_step: f64 },
    #[error("no sign change for the temperature root in [{lo}, {hi}] K")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("{} point(s) failed, first on the {} line at {}: {}", .0.len(), .0[0].line, .0[0].composition, .0[0].error)]
    PointFailures(Vec<PointFailure>),
    #[error("diagram failed consistency checks: {}", .0.failed_names().join(", "))]
    ConsistencyViolation(Box<ConsistencyReport>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub line: Line,
    pub composition: f64,
    pub error: Box<VleError>,
}

impl From<RootError<VleError>> for VleError {
    fn from(e: RootError<VleError>) -> Self {
        match e {
            RootError::NoBracket { lo, hi, .. } => VleError::BracketFailure { lo, hi },
            RootError::NoConvergence(n) => VleError::NoConvergence {
                iterations: n,
                last_step: f64::NAN,
            },
            RootError::Function(e) => e,
        }
    }
}

/// One state on a bubble or dew line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPoint {
    #[serde(rename = "T_K")]
    pub temperature: Kelvin,
    #[serde(rename = "p_Pa")]
    pub pressure: Pascal,
    pub x1: f64,
    pub y1: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

/// Two components with vapor-pressure correlations and a liquid activity model.
#[derive(Debug, Clone)]
pub struct BinarySystem {
    pub psat: [AntoineParameterSet; 2],
    pub activity: Arc<dyn ActivityModel>,
}

impl BinarySystem {
    pub fn new(psat1: AntoineParameterSet, psat2: AntoineParameterSet, activity: Arc<dyn ActivityModel>) -> Self {
        Self {
            psat: [psat1, psat2],
            activity,
        }
    }

    fn saturation(&self, t: Kelvin) -> Result<(f64, f64), VleError> {
        Ok((vapor_pressure(&self.psat[0], t)?.0, vapor_pressure(&self.psat[1], t)?.0))
    }

    fn gammas(&self, x1: f64, t: Kelvin) -> Result<(f64, f64), VleError> {
        let (l1, l2) = self.activity.ln_gamma(x1, t)?;
        Ok((l1.exp(), l2.exp()))
    }

    /// Largest relative equilibrium residual `|p_i^s x_i gamma_i - p y_i| / p` over both components.
    pub fn relative_residual(&self, pt: &EquilibriumPoint) -> Result<f64, VleError> {
        let (p1, p2) = self.saturation(pt.temperature)?;
        let p = pt.pressure.0;
        let r1 = (p1 * pt.x1 * pt.gamma1 - p * pt.y1).abs();
        let r2 = (p2 * (1.0 - pt.x1) * pt.gamma2 - p * (1.0 - pt.y1)).abs();
        Ok(r1.max(r2) / p)
    }

    fn tb_bracket(&self, p: Pascal) -> Result<(f64, f64), VleError> {
        let t1 = boiling_temperature(&self.psat[0], p)?.0;
        let t2 = boiling_temperature(&self.psat[1], p)?.0;
        let lo = (t1.min(t2) - BRACKET_WIDENING).max(f64::MIN_POSITIVE);
        Ok((lo, t1.max(t2) + BRACKET_WIDENING))
    }
}

fn check_fraction(v: f64) -> Result<(), VleError> {
    check_composition(v).map_err(VleError::from)
}

/// Bubble pressure and vapor composition at fixed `t` and `x1`.
pub fn bubble_isothermal(sys: &BinarySystem, t: Kelvin, x1: f64) -> Result<EquilibriumPoint, VleError> {
    check_fraction(x1)?;
    let (p1, p2) = sys.saturation(t)?;
    let (g1, g2) = sys.gammas(x1, t)?;
    let a1 = x1 * g1 * p1;
    let a2 = (1.0 - x1) * g2 * p2;
    let p = a1 + a2;
    Ok(EquilibriumPoint {
        temperature: t,
        pressure: Pascal(p),
        x1,
        y1: a1 / p,
        gamma1: g1,
        gamma2: g2,
    })
}

/// Converged liquid composition and dew pressure at fixed `t`.
struct DewState {
    x1: f64,
    p: f64,
    g1: f64,
    g2: f64,
}

fn dew_fixed_point(sys: &BinarySystem, t: Kelvin, y1: f64, start: Option<f64>) -> Result<DewState, VleError> {
    let (p1, p2) = sys.saturation(t)?;
    let y2 = 1.0 - y1;
    let mut x1 = match start {
        Some(x) => x.clamp(0.0, 1.0),
        None => {
            let p_ideal = 1.0 / (y1 / p1 + y2 / p2);
            (y1 * p_ideal / p1).clamp(0.0, 1.0)
        }
    };
    let mut last_step = f64::INFINITY;
    for _ in 0..DEW_MAX_ITERATIONS {
        let (g1, g2) = sys.gammas(x1, t)?;
        let p = 1.0 / (y1 / (g1 * p1) + y2 / (g2 * p2));
        let raw1 = y1 * p / (g1 * p1);
        let raw2 = y2 * p / (g2 * p2);
        let target = raw1 / (raw1 + raw2);
        last_step = (target - x1).abs();
        if last_step <= DEW_TOLERANCE {
            return Ok(DewState { x1, p, g1, g2 });
        }
        x1 += DEW_DAMPING * (target - x1);
    }
    dew_by_bracket(sys, t, y1).map_err(|_| VleError::NoConvergence {
        iterations: DEW_MAX_ITERATIONS,
        last_step,
    })
}

/// Inverts the bubble line: y1(x1) runs from 0 to 1 on [0, 1], so the
/// bracket always holds. Used when the substitution contracts too slowly.
fn dew_by_bracket(sys: &BinarySystem, t: Kelvin, y1: f64) -> Result<DewState, VleError> {
    let x1 = brent(
        |x| Ok::<_, VleError>(bubble_isothermal(sys, t, x)?.y1 - y1),
        0.0,
        1.0,
        DEW_BRACKET_TOLERANCE,
    )?;
    let b = bubble_isothermal(sys, t, x1)?;
    Ok(DewState {
        x1,
        p: b.pressure.0,
        g1: b.gamma1,
        g2: b.gamma2,
    })
}

/// Dew pressure and liquid composition at fixed `t` and `y1`.
pub fn dew_isothermal(sys: &BinarySystem, t: Kelvin, y1: f64) -> Result<EquilibriumPoint, VleError> {
    dew_isothermal_from(sys, t, y1, None)
}

/// As [`dew_isothermal`], starting the iteration from `x1_start`.
pub fn dew_isothermal_from(
    sys: &BinarySystem,
    t: Kelvin,
    y1: f64,
    x1_start: Option<f64>,
) -> Result<EquilibriumPoint, VleError> {
    check_fraction(y1)?;
    let s = dew_fixed_point(sys, t, y1, x1_start)?;
    Ok(EquilibriumPoint {
        temperature: t,
        pressure: Pascal(s.p),
        x1: s.x1,
        y1,
        gamma1: s.g1,
        gamma2: s.g2,
    })
}

/// Bubble temperature and vapor composition at fixed `p` and `x1`.
pub fn bubble_isobaric(sys: &BinarySystem, p: Pascal, x1: f64) -> Result<EquilibriumPoint, VleError> {
    check_fraction(x1)?;
    let t = if x1 == 1.0 {
        boiling_temperature(&sys.psat[0], p)?
    } else if x1 == 0.0 {
        boiling_temperature(&sys.psat[1], p)?
    } else {
        let (lo, hi) = sys.tb_bracket(p)?;
        let root = brent(
            |t| {
                let pt = bubble_isothermal(sys, Kelvin(t), x1)?;
                Ok::<_, VleError>(pt.pressure.0 - p.0)
            },
            lo,
            hi,
            TEMPERATURE_TOLERANCE,
        )?;
        Kelvin(root)
    };
    let pt = bubble_isothermal(sys, t, x1)?;
    let y1 = match x1 {
        0.0 => 0.0,
        1.0 => 1.0,
        _ => pt.y1,
    };
    Ok(EquilibriumPoint {
        pressure: p,
        y1,
        ..pt
    })
}

/// Dew temperature and liquid composition at fixed `p` and `y1`.
pub fn dew_isobaric(sys: &BinarySystem, p: Pascal, y1: f64) -> Result<EquilibriumPoint, VleError> {
    check_fraction(y1)?;
    if y1 == 1.0 || y1 == 0.0 {
        let t = boiling_temperature(&sys.psat[if y1 == 1.0 { 0 } else { 1 }], p)?;
        let (g1, g2) = sys.gammas(y1, t)?;
        return Ok(EquilibriumPoint {
            temperature: t,
            pressure: p,
            x1: y1,
            y1,
            gamma1: g1,
            gamma2: g2,
        });
    }
    let (lo, hi) = sys.tb_bracket(p)?;
    let mut warm: Option<f64> = None;
    let root = brent(
        |t| {
            let s = dew_fixed_point(sys, Kelvin(t), y1, warm)?;
            warm = Some(s.x1);
            Ok::<_, VleError>((s.p / p.0).ln())
        },
        lo,
        hi,
        TEMPERATURE_TOLERANCE,
    )?;
    let s = dew_fixed_point(sys, Kelvin(root), y1, warm)?;
    Ok(EquilibriumPoint {
        temperature: Kelvin(root),
        pressure: p,
        x1: s.x1,
        y1,
        gamma1: s.g1,
        gamma2: s.g2,
    })
}
