//! Regression of NRTL coefficients to predicted activity curves.
//!
//! The objective is
//! `L = 1/(2NJ) sum_i sum_j sum_k (ln gamma_k^NRTL(x_i, T_j) - ln gamma_k^pred(x_i, T_j))^2`
//! over N compositions, J temperatures and both components.

mod lm;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::activity::{
    composition_grid, curve_on_grid, nrtl_tau_alpha, ActivityCurve, ActivityError, ActivityModel,
    NrtlParameterSet, NrtlState, NrtlVariant, ALPHA_REFERENCE_T,
};
use crate::units::Kelvin;
use lm::{levenberg_marquardt, LmSettings};

/// Composition points of an isothermal (3-parameter) fit.
pub const ISOTHERMAL_POINTS: usize = 101;
/// Composition points per temperature of a 6/10-parameter fit.
pub const RANGE_POINTS: usize = 21;
/// Temperatures of a 6/10-parameter fit.
pub const RANGE_TEMPERATURES: usize = 5;

const ALPHA_START: f64 = 0.3;
const ALPHA_FEASIBLE: (f64, f64) = (1e-3, 2.0 - 1e-3);
const PENALTY_WEIGHT: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("variant {0} needs a temperature range")]
    RangeRequired(NrtlVariant),
    #[error("the 3-parameter variant is isothermal; a temperature range is not allowed")]
    RangeForbidden,
    #[error("invalid temperature range [{lo}, {hi}] K")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("targets do not match the fit grid: {0}")]
    GridMismatch(String),
    #[error("every start failed")]
    AllStartsFailed,
    #[error("invalid fit options: {0}")]
    InvalidOptions(String),
    #[error(transparent)]
    Activity(#[from] ActivityError),
}

/// Temperature specification of a fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitTemperatures {
    Single(Kelvin),
    Range(Kelvin, Kelvin),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitGrid {
    pub compositions: Vec<f64>,
    pub temperatures: Vec<Kelvin>,
    pub variant: NrtlVariant,
}

impl FitGrid {
    /// Number of residual terms, `2 N J`.
    pub fn term_count(&self) -> usize {
        2 * self.compositions.len() * self.temperatures.len()
    }
}

fn check_t(t: Kelvin) -> Result<(), FitError> {
    if t.0.is_finite() && t.0 > 0.0 {
        Ok(())
    } else {
        Err(FitError::Activity(ActivityError::InvalidTemperature(t.0)))
    }
}

pub fn build_fit_grid(variant: NrtlVariant, temperatures: FitTemperatures) -> Result<FitGrid, FitError> {
    match (variant, temperatures) {
        (NrtlVariant::Three, FitTemperatures::Single(t)) => {
            check_t(t)?;
            Ok(FitGrid {
                compositions: composition_grid(1.0 / (ISOTHERMAL_POINTS - 1) as f64)?,
                temperatures: vec![t],
                variant,
            })
        }
        (NrtlVariant::Three, FitTemperatures::Range(..)) => Err(FitError::RangeForbidden),
        (_, FitTemperatures::Single(_)) => Err(FitError::RangeRequired(variant)),
        (_, FitTemperatures::Range(lo, hi)) => {
            check_t(lo)?;
            check_t(hi)?;
            if lo.0 >= hi.0 {
                return Err(FitError::InvalidRange { lo: lo.0, hi: hi.0 });
            }
            let last = RANGE_TEMPERATURES - 1;
            let temperatures = (0..RANGE_TEMPERATURES)
                .map(|j| {
                    if j == last {
                        hi
                    } else {
                        Kelvin(lo.0 + (hi.0 - lo.0) * j as f64 / last as f64)
                    }
                })
                .collect();
            Ok(FitGrid {
                compositions: composition_grid(1.0 / (RANGE_POINTS - 1) as f64)?,
                temperatures,
                variant,
            })
        }
    }
}

/// Activity curves of `model` at every grid temperature.
pub fn predict_targets(model: &dyn ActivityModel, grid: &FitGrid) -> Result<Vec<ActivityCurve>, FitError> {
    grid.temperatures
        .iter()
        .map(|&t| curve_on_grid(model, t, grid.compositions.clone()).map_err(FitError::from))
        .collect()
}

fn check_targets(targets: &[ActivityCurve], grid: &FitGrid) -> Result<(), FitError> {
    if targets.len() != grid.temperatures.len() {
        return Err(FitError::GridMismatch(format!(
            "{} target curves for {} temperatures",
            targets.len(),
            grid.temperatures.len()
        )));
    }
    for (curve, t) in targets.iter().zip(&grid.temperatures) {
        if curve.temperature != *t {
            return Err(FitError::GridMismatch(format!(
                "curve at {} K where the grid has {} K",
                curve.temperature.0, t.0
            )));
        }
        if curve.x1 != grid.compositions
            || curve.ln_gamma1.len() != curve.x1.len()
            || curve.ln_gamma2.len() != curve.x1.len()
        {
            return Err(FitError::GridMismatch(format!(
                "compositions of the curve at {} K differ from the grid",
                t.0
            )));
        }
    }
    Ok(())
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// The fit objective for `params` against `targets` on `grid`.
pub fn evaluate_loss(params: &NrtlParameterSet, targets: &[ActivityCurve], grid: &FitGrid) -> Result<f64, FitError> {
    check_targets(targets, grid)?;
    params.validate()?;
    let mut squares = Vec::with_capacity(grid.term_count());
    for curve in targets {
        let state = nrtl_tau_alpha(params, curve.temperature)?;
        for (i, &x) in curve.x1.iter().enumerate() {
            let (g1, g2) = state.ln_gamma(x);
            let d1 = g1 - curve.ln_gamma1[i];
            let d2 = g2 - curve.ln_gamma2[i];
            squares.push(d1 * d1);
            squares.push(d2 * d2);
        }
    }
    Ok(compensated_sum(squares.into_iter()) / grid.term_count() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub starts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            starts: 8,
            max_iterations: 500,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub params: NrtlParameterSet,
    pub loss: f64,
    pub n_starts: usize,
    /// Final loss of each start; `None` where the start failed.
    pub per_start_losses: Vec<Option<f64>>,
    pub converged: bool,
    pub equations_text: String,
}

/// Optimizer coordinates. For the temperature-dependent variants the
/// coefficients are re-centered on the middle grid temperature so every
/// coordinate is of order one.
#[derive(Debug, Clone, Copy)]
struct Coordinates {
    variant: NrtlVariant,
    t_mid: f64,
}

impl Coordinates {
    fn to_params(self, z: &[f64]) -> NrtlParameterSet {
        let tm = self.t_mid;
        match self.variant {
            NrtlVariant::Three => NrtlParameterSet::from_free(self.variant, z),
            NrtlVariant::Six => {
                let [a12, a21, b12, b21, c, d] = [z[0], z[1], z[2], z[3], z[4], z[5]];
                NrtlParameterSet::from_free(
                    self.variant,
                    &[
                        a12 - b12,
                        a21 - b21,
                        b12 * tm,
                        b21 * tm,
                        c - d + d * ALPHA_REFERENCE_T / tm,
                        d / tm,
                    ],
                )
            }
            NrtlVariant::Ten => {
                let ln_tm = tm.ln();
                let [a12, a21, b12, b21, e12, e21, f12, f21, c, d] =
                    [z[0], z[1], z[2], z[3], z[4], z[5], z[6], z[7], z[8], z[9]];
                NrtlParameterSet::from_free(
                    self.variant,
                    &[
                        a12 - b12 - e12 * ln_tm - f12,
                        a21 - b21 - e21 * ln_tm - f21,
                        b12 * tm,
                        b21 * tm,
                        e12,
                        e21,
                        f12 / tm,
                        f21 / tm,
                        c - d + d * ALPHA_REFERENCE_T / tm,
                        d / tm,
                    ],
                )
            }
        }
    }

    /// Positions of the alpha coefficients in `z`.
    fn alpha_slots(self) -> &'static [usize] {
        match self.variant {
            NrtlVariant::Three => &[2],
            NrtlVariant::Six => &[4, 5],
            NrtlVariant::Ten => &[8, 9],
        }
    }

    /// Temperature-independent (tau12, tau21, alpha) embedded in this variant.
    fn embed(self, tau12: f64, tau21: f64, alpha: f64) -> Vec<f64> {
        let mut z = vec![0.0; self.variant.parameter_count()];
        z[0] = tau12;
        z[1] = tau21;
        let n = z.len();
        z[if self.variant == NrtlVariant::Three { 2 } else { n - 2 }] = alpha;
        z
    }
}

/// Residual vector whose squared norm is the loss, plus alpha penalty terms.
fn residuals(coords: Coordinates, targets: &[ActivityCurve], norm: f64, z: &[f64], out: &mut Vec<f64>) -> bool {
    out.clear();
    let params = coords.to_params(z);
    for curve in targets {
        let state = NrtlState::evaluate_unchecked(&params, curve.temperature.0);
        for (i, &x) in curve.x1.iter().enumerate() {
            let (g1, g2) = state.ln_gamma(x);
            out.push((g1 - curve.ln_gamma1[i]) * norm);
            out.push((g2 - curve.ln_gamma2[i]) * norm);
        }
        let (lo, hi) = ALPHA_FEASIBLE;
        out.push(PENALTY_WEIGHT * ((lo - state.alpha).max(0.0) + (state.alpha - hi).max(0.0)));
    }
    out.iter().all(|v| v.is_finite())
}

fn radical_inverse(base: u32, mut k: u32) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while k > 0 {
        out += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    out
}

/// (tau12, tau21, alpha) starting points: infinite-dilution estimate first,
/// then Halton points.
fn three_parameter_starts(curve: &ActivityCurve, count: usize) -> Vec<[f64; 3]> {
    let n = curve.len();
    let mut starts = vec![[curve.ln_gamma2[n - 1], curve.ln_gamma1[0], ALPHA_START]];
    for k in 1..count as u32 {
        starts.push([
            -2.0 + 4.0 * radical_inverse(2, k),
            -2.0 + 4.0 * radical_inverse(3, k),
            0.1 + 0.8 * radical_inverse(5, k),
        ]);
    }
    starts
}

struct StartOutcome {
    params: NrtlParameterSet,
    loss: f64,
    converged: bool,
}

fn run_start(
    coords: Coordinates,
    targets: &[ActivityCurve],
    grid: &FitGrid,
    z0: &[f64],
    options: &FitOptions,
) -> Option<StartOutcome> {
    let norm = 1.0 / (grid.term_count() as f64).sqrt();
    let settings = LmSettings {
        max_iterations: options.max_iterations,
        gradient_tolerance: options.tolerance,
        step_tolerance: options.tolerance,
    };
    // alpha held at its start value first, then everything released
    let n = z0.len();
    let alpha_slots = coords.alpha_slots();
    let free: Vec<usize> = (0..n).filter(|k| !alpha_slots.contains(k)).collect();
    let expand = |w: &[f64]| {
        let mut z = z0.to_vec();
        for (&k, &v) in free.iter().zip(w) {
            z[k] = v;
        }
        z
    };
    let w0: Vec<f64> = free.iter().map(|&k| z0[k]).collect();
    let staged = levenberg_marquardt(|w, r| residuals(coords, targets, norm, &expand(w), r), &w0, settings)
        .map(|o| expand(&o.x))
        .unwrap_or_else(|| z0.to_vec());
    let out = levenberg_marquardt(|z, r| residuals(coords, targets, norm, z, r), &staged, settings)?;
    let params = coords.to_params(&out.x);
    let loss = evaluate_loss(&params, targets, grid).ok()?;
    Some(StartOutcome {
        params,
        loss,
        converged: out.converged,
    })
}

fn best_of(outcomes: &[Option<StartOutcome>]) -> Option<&StartOutcome> {
    outcomes
        .iter()
        .flatten()
        .fold(None, |best: Option<&StartOutcome>, o| match best {
            Some(b) if b.loss <= o.loss => Some(b),
            _ => Some(o),
        })
}

/// Coordinates and (tau12, tau21, alpha) seeds of every start.
fn seeds(targets: &[ActivityCurve], grid: &FitGrid, options: &FitOptions) -> Result<(Coordinates, Vec<[f64; 3]>), FitError> {
    check_targets(targets, grid)?;
    if options.starts == 0 {
        return Err(FitError::InvalidOptions("at least one start is required".into()));
    }
    let mid = grid.temperatures.len() / 2;
    let coords = Coordinates {
        variant: grid.variant,
        t_mid: grid.temperatures[mid].0,
    };
    let base = three_parameter_starts(&targets[mid], options.starts);
    if grid.variant == NrtlVariant::Three {
        return Ok((coords, base));
    }
    // warm start: isothermal fit at the middle temperature from each base start
    let sub_grid = FitGrid {
        compositions: grid.compositions.clone(),
        temperatures: vec![grid.temperatures[mid]],
        variant: NrtlVariant::Three,
    };
    let sub_coords = Coordinates {
        variant: NrtlVariant::Three,
        t_mid: coords.t_mid,
    };
    let sub_targets = std::slice::from_ref(&targets[mid]);
    let warm = base
        .par_iter()
        .map(|s| match run_start(sub_coords, sub_targets, &sub_grid, s, options) {
            Some(o) => [o.params.a12, o.params.a21, o.params.c12],
            None => *s,
        })
        .collect();
    Ok((coords, warm))
}

/// Initial parameter sets of the multi-start search, in start order.
pub fn initial_guesses(
    targets: &[ActivityCurve],
    grid: &FitGrid,
    options: &FitOptions,
) -> Result<Vec<NrtlParameterSet>, FitError> {
    let (coords, seeds) = seeds(targets, grid, options)?;
    Ok(seeds
        .iter()
        .map(|s| coords.to_params(&coords.embed(s[0], s[1], s[2])))
        .collect())
}

/// Multi-start least-squares fit of `grid.variant` to `targets`.
pub fn fit_nrtl(targets: &[ActivityCurve], grid: &FitGrid, options: &FitOptions) -> Result<FitResult, FitError> {
    let (coords, seeds) = seeds(targets, grid, options)?;
    let outcomes: Vec<Option<StartOutcome>> = seeds
        .par_iter()
        .map(|s| run_start(coords, targets, grid, &coords.embed(s[0], s[1], s[2]), options))
        .collect();
    let best = best_of(&outcomes).ok_or(FitError::AllStartsFailed)?;
    Ok(FitResult {
        params: best.params,
        loss: best.loss,
        n_starts: outcomes.len(),
        per_start_losses: outcomes.iter().map(|o| o.as_ref().map(|o| o.loss)).collect(),
        converged: best.converged,
        equations_text: best.params.equations_text(),
    })
}

/// NRTL activity curves of `params` on every grid temperature.
pub fn reconstruct_curves(params: &NrtlParameterSet, grid: &FitGrid) -> Result<Vec<ActivityCurve>, FitError> {
    let model = crate::activity::Nrtl::named("nrtl-fit", *params)?;
    predict_targets(&model, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activity::Nrtl;

    #[test]
    fn grid_shapes() {
        let g = build_fit_grid(NrtlVariant::Three, FitTemperatures::Single(Kelvin(350.0))).unwrap();
        assert_eq!((g.compositions.len(), g.temperatures.len()), (101, 1));
        let g = build_fit_grid(NrtlVariant::Six, FitTemperatures::Range(Kelvin(300.0), Kelvin(400.0))).unwrap();
        assert_eq!(g.compositions.len(), 21);
        let ts: Vec<f64> = g.temperatures.iter().map(|t| t.0).collect();
        assert_eq!(ts, [300.0, 325.0, 350.0, 375.0, 400.0]);
        assert_eq!(
            build_fit_grid(NrtlVariant::Three, FitTemperatures::Range(Kelvin(300.0), Kelvin(400.0))),
            Err(FitError::RangeForbidden)
        );
        assert!(matches!(
            build_fit_grid(NrtlVariant::Ten, FitTemperatures::Single(Kelvin(300.0))),
            Err(FitError::RangeRequired(_))
        ));
    }

    #[test]
    fn self_fit_loss_is_zero() {
        let p = NrtlParameterSet::three(0.5, 0.8, 0.3);
        let g = build_fit_grid(NrtlVariant::Three, FitTemperatures::Single(Kelvin(350.0))).unwrap();
        let targets = predict_targets(&Nrtl::new(p).unwrap(), &g).unwrap();
        assert_eq!(evaluate_loss(&p, &targets, &g).unwrap(), 0.0);
    }

    #[test]
    fn constant_offset_gives_delta_squared() {
        let p = NrtlParameterSet::three(0.0, 0.0, 0.3);
        let g = build_fit_grid(NrtlVariant::Six, FitTemperatures::Range(Kelvin(300.0), Kelvin(400.0))).unwrap();
        let mut targets = predict_targets(&Nrtl::new(p).unwrap(), &g).unwrap();
        for c in targets.iter_mut() {
            c.ln_gamma1.iter_mut().for_each(|v| *v += 0.1);
            c.ln_gamma2.iter_mut().for_each(|v| *v += 0.1);
        }
        let p6 = NrtlParameterSet::six(0.0, 0.0, 0.0, 0.0, 0.3, 0.0);
        assert_eq!(evaluate_loss(&p6, &targets, &g).unwrap(), 0.1 * 0.1);
    }

    #[test]
    fn mismatched_targets_rejected() {
        let p = NrtlParameterSet::three(0.5, 0.8, 0.3);
        let g = build_fit_grid(NrtlVariant::Three, FitTemperatures::Single(Kelvin(350.0))).unwrap();
        let other = build_fit_grid(NrtlVariant::Three, FitTemperatures::Single(Kelvin(360.0))).unwrap();
        let targets = predict_targets(&Nrtl::new(p).unwrap(), &other).unwrap();
        assert!(matches!(evaluate_loss(&p, &targets, &g), Err(FitError::GridMismatch(_))));
    }

    #[test]
    fn recovers_three_parameter_targets() {
        let p = NrtlParameterSet::three(0.5, 0.8, 0.3);
        let g = build_fit_grid(NrtlVariant::Three, FitTemperatures::Single(Kelvin(350.0))).unwrap();
        let targets = predict_targets(&Nrtl::new(p).unwrap(), &g).unwrap();
        let r = fit_nrtl(&targets, &g, &FitOptions::default()).unwrap();
        assert!(r.loss <= 1e-12, "{r:?}");
        assert_eq!(r.n_starts, 8);
        assert_eq!(r.loss, evaluate_loss(&r.params, &targets, &g).unwrap());
    }

    #[test]
    fn recovers_six_parameter_targets() {
        let p = NrtlParameterSet::six(-0.5, 1.2, 250.0, -300.0, 0.3, 0.0008);
        let g = build_fit_grid(NrtlVariant::Six, FitTemperatures::Range(Kelvin(300.0), Kelvin(400.0))).unwrap();
        let targets = predict_targets(&Nrtl::new(p).unwrap(), &g).unwrap();
        let r = fit_nrtl(&targets, &g, &FitOptions::default()).unwrap();
        assert!(r.loss <= 1e-10, "{r:?}");
    }
}
