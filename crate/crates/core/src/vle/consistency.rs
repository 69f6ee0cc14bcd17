//! The four structural checks a VLE diagram must pass before it is released.

use serde::Serialize;

use super::EquilibriumPoint;
use crate::units::Mode;

/// Relative mismatch allowed where bubble and dew lines meet at pure components.
pub const MERGE_TOLERANCE: f64 = 1e-8;
/// Relative slack in the bubble-above-dew ordering.
pub const ORDERING_TOLERANCE: f64 = 1e-9;
/// Allowed `|x1 - y1|` at an azeotrope.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-6;
/// Relative size below which a segment counts as flat.
const FLAT: f64 = 1e-12;
/// Grid points this close to an azeotrope are left out of slope comparisons.
const SPLIT_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsistencyCheck {
    MergeAtPure,
    SlopeSignAgreement,
    Ordering,
    AzeotropeCoincidence,
}

impl ConsistencyCheck {
    pub fn as_str(self) -> &'static str {
        match self {
            ConsistencyCheck::MergeAtPure => "merge_at_pure",
            ConsistencyCheck::SlopeSignAgreement => "slope_sign_agreement",
            ConsistencyCheck::Ordering => "ordering",
            ConsistencyCheck::AzeotropeCoincidence => "azeotrope_coincidence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub merge_at_pure: Verdict,
    /// Relative mismatch at x1 = 0 and x1 = 1.
    pub merge_residuals: [f64; 2],
    pub slope_sign_agreement: Verdict,
    pub slope_violation: Option<f64>,
    pub ordering: Verdict,
    pub ordering_violation: Option<f64>,
    pub azeotrope_coincidence: Verdict,
    pub azeotrope_detail: Option<String>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.failed().is_empty()
    }

    pub fn failed(&self) -> Vec<ConsistencyCheck> {
        [
            (self.merge_at_pure, ConsistencyCheck::MergeAtPure),
            (self.slope_sign_agreement, ConsistencyCheck::SlopeSignAgreement),
            (self.ordering, ConsistencyCheck::Ordering),
            (self.azeotrope_coincidence, ConsistencyCheck::AzeotropeCoincidence),
        ]
        .into_iter()
        .filter(|(v, _)| *v == Verdict::Fail)
        .map(|(_, c)| c)
        .collect()
    }

    pub fn failed_names(&self) -> Vec<&'static str> {
        self.failed().into_iter().map(ConsistencyCheck::as_str).collect()
    }
}

fn value(mode: Mode, pt: &EquilibriumPoint) -> f64 {
    match mode {
        Mode::Isothermal => pt.pressure.0,
        Mode::Isobaric => pt.temperature.0,
    }
}

fn key(line_is_bubble: bool, pt: &EquilibriumPoint) -> f64 {
    if line_is_bubble {
        pt.x1
    } else {
        pt.y1
    }
}

/// Linear interpolation of the dew line (keyed by y1) at composition `z`.
fn dew_value_at(mode: Mode, dew: &[EquilibriumPoint], z: f64) -> Option<f64> {
    let k = dew.windows(2).position(|w| w[0].y1 <= z && z <= w[1].y1)?;
    let (a, b) = (&dew[k], &dew[k + 1]);
    if b.y1 == a.y1 {
        return Some(value(mode, a));
    }
    let s = (z - a.y1) / (b.y1 - a.y1);
    if s == 0.0 {
        return Some(value(mode, a));
    }
    if s == 1.0 {
        return Some(value(mode, b));
    }
    Some(value(mode, a) + s * (value(mode, b) - value(mode, a)))
}

fn check_merge(mode: Mode, bubble: &[EquilibriumPoint], dew: &[EquilibriumPoint]) -> (Verdict, [f64; 2]) {
    let (Some(b0), Some(b1), Some(d0), Some(d1)) = (bubble.first(), bubble.last(), dew.first(), dew.last())
    else {
        return (Verdict::Fail, [f64::INFINITY; 2]);
    };
    let end = |b: &EquilibriumPoint, d: &EquilibriumPoint, pure: f64| {
        if b.x1 != pure || d.y1 != pure {
            return f64::INFINITY;
        }
        let (vb, vd) = (value(mode, b), value(mode, d));
        let rel = (vb - vd).abs() / vb.abs().max(vd.abs());
        rel.max((b.y1 - d.x1).abs())
    };
    let r = [end(b0, d0, 0.0), end(b1, d1, 1.0)];
    (Verdict::from_bool(r.iter().all(|&v| v <= MERGE_TOLERANCE)), r)
}

fn check_ordering(mode: Mode, bubble: &[EquilibriumPoint], dew: &[EquilibriumPoint]) -> (Verdict, Option<f64>) {
    for b in bubble {
        let Some(vd) = dew_value_at(mode, dew, b.x1) else {
            return (Verdict::Fail, Some(b.x1));
        };
        let vb = value(mode, b);
        let slack = ORDERING_TOLERANCE * vb.abs().max(vd.abs());
        let ok = match mode {
            Mode::Isothermal => vb >= vd - slack,
            Mode::Isobaric => vb <= vd + slack,
        };
        if !ok {
            return (Verdict::Fail, Some(b.x1));
        }
    }
    (Verdict::Pass, None)
}

fn sub_domain(splits: &[f64], z: f64) -> usize {
    splits.iter().filter(|&&s| z > s).count()
}

fn check_slopes(
    mode: Mode,
    bubble: &[EquilibriumPoint],
    dew: &[EquilibriumPoint],
    splits: &[f64],
) -> (Verdict, Option<f64>) {
    let scale = bubble
        .iter()
        .chain(dew)
        .map(|p| value(mode, p).abs())
        .fold(0.0, f64::max);
    let near_split = |z: f64| splits.iter().any(|s| (z - s).abs() <= SPLIT_EXCLUSION);

    // (sub-domain, sign, composition) of every usable segment, bubble first
    let mut segments: Vec<(usize, f64, f64)> = Vec::new();
    for (line, is_bubble) in [(bubble, true), (dew, false)] {
        for w in line.windows(2) {
            let (za, zb) = (key(is_bubble, &w[0]), key(is_bubble, &w[1]));
            if near_split(za) || near_split(zb) {
                continue;
            }
            let dom = sub_domain(splits, za);
            if dom != sub_domain(splits, zb) {
                continue;
            }
            let d = value(mode, &w[1]) - value(mode, &w[0]);
            if d.abs() <= FLAT * scale {
                continue;
            }
            segments.push((dom, d.signum(), za));
        }
    }
    for dom in 0..=splits.len() {
        let mut reference = None;
        for &(d, sign, z) in &segments {
            if d != dom {
                continue;
            }
            match reference {
                None => reference = Some(sign),
                Some(r) if r != sign => return (Verdict::Fail, Some(z)),
                _ => {}
            }
        }
    }
    (Verdict::Pass, None)
}

/// Slope signs on each side of an azeotrope at composition `z` with value `v`.
fn flips_at(mode: Mode, line: &[EquilibriumPoint], is_bubble: bool, z: f64, v: f64) -> bool {
    let left = line.iter().rfind(|p| key(is_bubble, p) < z - SPLIT_EXCLUSION);
    let right = line.iter().find(|p| key(is_bubble, p) > z + SPLIT_EXCLUSION);
    match (left, right) {
        (Some(l), Some(r)) => {
            let before = (v - value(mode, l)).signum();
            let after = (value(mode, r) - v).signum();
            before * after < 0.0
        }
        _ => false,
    }
}

fn check_azeotropes(
    mode: Mode,
    bubble: &[EquilibriumPoint],
    dew: &[EquilibriumPoint],
    azeotropes: &[EquilibriumPoint],
) -> (Verdict, Option<String>) {
    if azeotropes.is_empty() {
        return (Verdict::NotApplicable, None);
    }
    for az in azeotropes {
        let gap = (az.x1 - az.y1).abs();
        if gap > COINCIDENCE_TOLERANCE {
            return (
                Verdict::Fail,
                Some(format!("lines do not coincide at x1 = {}: |x1 - y1| = {gap:e}", az.x1)),
            );
        }
        let v = value(mode, az);
        if !flips_at(mode, bubble, true, az.x1, v) || !flips_at(mode, dew, false, az.y1, v) {
            return (
                Verdict::Fail,
                Some(format!("no slope sign change at x1 = {}", az.x1)),
            );
        }
    }
    (Verdict::Pass, None)
}

/// Runs all four checks on assembled lines. The bubble line is keyed by x1
/// and the dew line by y1, both ascending.
pub fn check_consistency(
    mode: Mode,
    bubble: &[EquilibriumPoint],
    dew: &[EquilibriumPoint],
    azeotropes: &[EquilibriumPoint],
) -> ConsistencyReport {
    let (merge_at_pure, merge_residuals) = check_merge(mode, bubble, dew);
    let mut splits: Vec<f64> = azeotropes.iter().map(|a| a.x1).collect();
    splits.sort_by(f64::total_cmp);
    let (slope_sign_agreement, slope_violation) = check_slopes(mode, bubble, dew, &splits);
    let (ordering, ordering_violation) = check_ordering(mode, bubble, dew);
    let (azeotrope_coincidence, azeotrope_detail) = check_azeotropes(mode, bubble, dew, azeotropes);
    ConsistencyReport {
        merge_at_pure,
        merge_residuals,
        slope_sign_agreement,
        slope_violation,
        ordering,
        ordering_violation,
        azeotrope_coincidence,
        azeotrope_detail,
    }
}
