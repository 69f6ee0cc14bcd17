use rayon::prelude::*;
use serde::Serialize;

use super::{
    bubble_isobaric, bubble_isothermal, check_consistency, dew_isobaric, dew_isothermal_from, BinarySystem,
    ConsistencyReport, EquilibriumPoint, Line, PointFailure, VleError,
};
use crate::activity::composition_grid;
use crate::antoine::{range_check, vapor_pressure, AntoineWarning, LOW_PRESSURE_LIMIT};
use crate::units::{Kelvin, Mode, StateSpec};

/// Composition spacing of both lines.
pub const GRID_STEP: f64 = 0.01;
/// Width below which azeotrope bisection stops.
const AZEOTROPE_RESOLUTION: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiagramWarning {
    /// 1 or 2.
    pub component: u8,
    pub warning: AntoineWarning,
}

/// A released phase diagram; only constructed when every consistency check passes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VleDiagram {
    #[serde(flatten)]
    pub state: StateSpec,
    pub model: String,
    pub bubble: Vec<EquilibriumPoint>,
    pub dew: Vec<EquilibriumPoint>,
    pub azeotropes: Vec<EquilibriumPoint>,
    pub consistency: ConsistencyReport,
    pub warnings: Vec<DiagramWarning>,
}

impl VleDiagram {
    /// Checks the lines and releases the diagram, or withholds it with the report.
    pub fn assemble(
        state: StateSpec,
        model: impl Into<String>,
        bubble: Vec<EquilibriumPoint>,
        dew: Vec<EquilibriumPoint>,
        azeotropes: Vec<EquilibriumPoint>,
        warnings: Vec<DiagramWarning>,
    ) -> Result<Self, VleError> {
        let consistency = check_consistency(state.mode(), &bubble, &dew, &azeotropes);
        if !consistency.passed() {
            return Err(VleError::ConsistencyViolation(Box::new(consistency)));
        }
        Ok(Self {
            state,
            model: model.into(),
            bubble,
            dew,
            azeotropes,
            consistency,
            warnings,
        })
    }

    pub fn mode(&self) -> Mode {
        self.state.mode()
    }

    /// The first azeotrope, if any.
    pub fn azeotrope(&self) -> Option<&EquilibriumPoint> {
        self.azeotropes.first()
    }
}

fn bubble_at(sys: &BinarySystem, state: &StateSpec, x1: f64) -> Result<EquilibriumPoint, VleError> {
    match *state {
        StateSpec::Isothermal { temperature } => bubble_isothermal(sys, temperature, x1),
        StateSpec::Isobaric { pressure } => bubble_isobaric(sys, pressure, x1),
    }
}

fn dew_at(sys: &BinarySystem, state: &StateSpec, y1: f64, start: Option<f64>) -> Result<EquilibriumPoint, VleError> {
    match *state {
        StateSpec::Isothermal { temperature } => dew_isothermal_from(sys, temperature, y1, start),
        StateSpec::Isobaric { pressure } => dew_isobaric(sys, pressure, y1),
    }
}

/// Liquid composition read off the bubble line where it produces vapor `y1`.
fn bubble_inverse(bubble: &[EquilibriumPoint], y1: f64) -> Option<f64> {
    bubble.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        let (lo, hi) = (a.y1.min(b.y1), a.y1.max(b.y1));
        if !(lo <= y1 && y1 <= hi) || a.y1 == b.y1 {
            return None;
        }
        Some(a.x1 + (y1 - a.y1) / (b.y1 - a.y1) * (b.x1 - a.x1))
    })
}

/// Evaluates `f` on every grid point in parallel and reports all failures in grid order.
fn sweep<F>(grid: &[f64], line: Line, f: F) -> Result<Vec<EquilibriumPoint>, Vec<PointFailure>>
where
    F: Fn(f64) -> Result<EquilibriumPoint, VleError> + Sync,
{
    let results: Vec<_> = grid.par_iter().map(|&z| f(z)).collect();
    let mut points = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    for (z, r) in grid.iter().zip(results) {
        match r {
            Ok(p) => points.push(p),
            Err(e) => failures.push(PointFailure {
                line,
                composition: *z,
                error: Box::new(e),
            }),
        }
    }
    if failures.is_empty() {
        Ok(points)
    } else {
        Err(failures)
    }
}

/// `gamma1 p1^s - gamma2 p2^s` at a bubble point; zero where x1 = y1.
fn k_difference(sys: &BinarySystem, pt: &EquilibriumPoint) -> Result<f64, VleError> {
    let p1 = vapor_pressure(&sys.psat[0], pt.temperature)?.0;
    let p2 = vapor_pressure(&sys.psat[1], pt.temperature)?.0;
    Ok(pt.gamma1 * p1 - pt.gamma2 * p2)
}

/// All azeotropes along a computed bubble line (keyed by x1), each refined
/// by bisection on the sign change of the K-difference.
pub fn detect_azeotropes(
    sys: &BinarySystem,
    state: &StateSpec,
    bubble: &[EquilibriumPoint],
) -> Result<Vec<EquilibriumPoint>, VleError> {
    let d: Vec<f64> = bubble.iter().map(|p| k_difference(sys, p)).collect::<Result<_, _>>()?;
    let nonzero: Vec<usize> = (0..d.len()).filter(|&k| d[k] != 0.0).collect();
    let mut found = Vec::new();
    for w in nonzero.windows(2) {
        let (i, j) = (w[0], w[1]);
        if d[i].signum() == d[j].signum() {
            continue;
        }
        if j > i + 1 {
            // exact zeros on the grid between the two signs
            found.push(bubble[(i + j) / 2]);
            continue;
        }
        let (mut lo, mut hi) = (bubble[i].x1, bubble[j].x1);
        let sign_lo = d[i].signum();
        while hi - lo > AZEOTROPE_RESOLUTION {
            let mid = 0.5 * (lo + hi);
            let dm = k_difference(sys, &bubble_at(sys, state, mid)?)?;
            if dm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if dm.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        found.push(bubble_at(sys, state, 0.5 * (lo + hi))?);
    }
    Ok(found)
}

fn push_unique(list: &mut Vec<DiagramWarning>, component: u8, warnings: Vec<AntoineWarning>) {
    for warning in warnings {
        let w = DiagramWarning { component, warning };
        if !list.contains(&w) {
            list.push(w);
        }
    }
}

fn antoine_warnings(sys: &BinarySystem, temperatures: &[Kelvin]) -> Vec<DiagramWarning> {
    let mut out = Vec::new();
    for (i, params) in sys.psat.iter().enumerate() {
        for &t in temperatures {
            let mut w = range_check(params, t);
            if let Ok(p) = vapor_pressure(params, t) {
                if p.0 < LOW_PRESSURE_LIMIT.0 && !w.contains(&AntoineWarning::LowPressureRegime) {
                    w.push(AntoineWarning::LowPressureRegime);
                }
            }
            push_unique(&mut out, i as u8 + 1, w);
        }
    }
    out
}

/// Full diagram at 0.01 spacing in x1 (bubble) and y1 (dew).
pub fn build_diagram(state: &StateSpec, sys: &BinarySystem) -> Result<VleDiagram, VleError> {
    let grid = composition_grid(GRID_STEP)?;
    let bubble = sweep(&grid, Line::Bubble, |x| bubble_at(sys, state, x)).map_err(VleError::PointFailures)?;
    let dew = sweep(&grid, Line::Dew, |y| {
        dew_at(sys, state, y, None).or_else(|first| match bubble_inverse(&bubble, y) {
            Some(x) => dew_at(sys, state, y, Some(x)),
            None => Err(first),
        })
    })
    .map_err(VleError::PointFailures)?;
    let azeotropes = detect_azeotropes(sys, state, &bubble)?;
    let temperatures: Vec<Kelvin> = match *state {
        StateSpec::Isothermal { temperature } => vec![temperature],
        StateSpec::Isobaric { .. } => bubble.iter().chain(&dew).map(|p| p.temperature).collect(),
    };
    let warnings = antoine_warnings(sys, &temperatures);
    VleDiagram::assemble(*state, sys.activity.name(), bubble, dew, azeotropes, warnings)
}
