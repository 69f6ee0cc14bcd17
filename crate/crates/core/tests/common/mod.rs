#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thermoprop::activity::{ActivityModel, Nrtl, NrtlParameterSet, Unifac, UnifacParameterTable, UnifacVariant};
use thermoprop::antoine::{vapor_pressure, AntoineParameterSet};
use thermoprop::chem::{decompose_groups, parse_smiles};
use thermoprop::registry::{demo_unifac_table, AntoineTable, NrtlPairTable};
use thermoprop::units::{Kelvin, PressureUnit};
use thermoprop::vle::BinarySystem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn antoine(a: f64, b: f64, c: f64) -> AntoineParameterSet {
    AntoineParameterSet::new(a, b, c, Kelvin(250.0), Kelvin(550.0), PressureUnit::Bar).unwrap()
}

pub fn random_nrtl(r: &mut ChaCha8Rng) -> NrtlParameterSet {
    NrtlParameterSet::three(r.random_range(-1.0..3.0), r.random_range(-1.0..3.0), r.random_range(0.1..0.6))
}

pub fn random_nrtl6(r: &mut ChaCha8Rng) -> NrtlParameterSet {
    NrtlParameterSet::six(
        r.random_range(-0.5..1.0),
        r.random_range(-0.5..1.0),
        r.random_range(-150.0..300.0),
        r.random_range(-150.0..300.0),
        r.random_range(0.2..0.4),
        r.random_range(-5e-4..5e-4),
    )
}

/// Two components of similar volatility with a moderately non-ideal liquid.
pub fn random_system(r: &mut ChaCha8Rng) -> BinarySystem {
    let p1 = antoine(r.random_range(3.9..4.3), r.random_range(1150.0..1300.0), r.random_range(-60.0..-40.0));
    let p2 = antoine(r.random_range(3.9..4.3), r.random_range(1300.0..1500.0), r.random_range(-60.0..-40.0));
    let params = NrtlParameterSet::three(r.random_range(-0.3..1.2), r.random_range(-0.3..1.2), 0.3);
    BinarySystem::new(p1, p2, Arc::new(Nrtl::new(params).unwrap()))
}

pub fn unifac_table(variant: UnifacVariant) -> Arc<UnifacParameterTable> {
    Arc::new(demo_unifac_table(variant))
}

pub fn unifac_pair(variant: UnifacVariant, s1: &str, s2: &str) -> Unifac {
    let table = unifac_table(variant);
    let g = |s: &str| decompose_groups(&parse_smiles(s).unwrap().graph, &table).unwrap();
    Unifac::new(format!("{s1}/{s2}"), table.clone(), [g(s1), g(s2)]).unwrap()
}

pub const UNIFAC_PAIRS: [(&str, &str); 5] = [
    ("CCCCCC", "CCO"),
    ("c1ccccc1", "Cc1ccccc1"),
    ("CCO", "O"),
    ("CO", "c1ccccc1"),
    ("Cc1ccccc1", "Oc1ccccc1"),
];

/// Largest |x1 dln g1/dx1 + x2 dln g2/dx1| over the 99 interior points of the
/// 0.01 grid, derivatives by a five-point central stencil of width 1e-4.
pub fn gibbs_duhem_residual(model: &dyn ActivityModel, t: Kelvin) -> f64 {
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for k in 1..100 {
        let x = k as f64 / 100.0;
        let at = |d: f64| model.ln_gamma(x + d * h, t).unwrap();
        let (m2, m1, p1, p2) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
        let d = |f: fn(&(f64, f64)) -> f64| (f(&m2) - 8.0 * f(&m1) + 8.0 * f(&p1) - f(&p2)) / (12.0 * h);
        let r = x * d(|v| v.0) + (1.0 - x) * d(|v| v.1);
        worst = worst.max(r.abs());
    }
    worst
}

/// `gamma1 p1s - gamma2 p2s` evaluated directly from the models.
pub fn k_difference(sys: &BinarySystem, x1: f64, t: Kelvin) -> f64 {
    let (l1, l2) = sys.activity.ln_gamma(x1, t).unwrap();
    l1.exp() * vapor_pressure(&sys.psat[0], t).unwrap().0 - l2.exp() * vapor_pressure(&sys.psat[1], t).unwrap().0
}

/// Sign changes of the K-difference on a uniform scan, located by linear
/// interpolation between neighbors.
pub fn brute_force_azeotropes(sys: &BinarySystem, t: Kelvin, dx: f64) -> Vec<f64> {
    let n = (1.0 / dx).round() as usize;
    let mut out = Vec::new();
    let mut prev = (0.0, k_difference(sys, 0.0, t));
    for k in 1..=n {
        let x = k as f64 / n as f64;
        let d = k_difference(sys, x, t);
        if prev.1 * d < 0.0 {
            out.push(prev.0 + (x - prev.0) * prev.1 / (prev.1 - d));
        }
        prev = (x, d);
    }
    out
}

/// The bundled hexane/ethanol NRTL surrogate with bundled vapor pressures.
pub fn hexane_ethanol_surrogate() -> BinarySystem {
    let antoine = AntoineTable::demo();
    let nrtl = NrtlPairTable::demo().get("CCCCCC", "CCO").unwrap();
    BinarySystem::new(
        *antoine.get("CCCCCC").unwrap(),
        *antoine.get("CCO").unwrap(),
        Arc::new(Nrtl::named("nrtl", nrtl).unwrap()),
    )
}

/// Two-route NRTL: the general multicomponent sum form specialised to two components.
pub fn nrtl_sum_form(p: &NrtlParameterSet, x1: f64, t: f64) -> (f64, f64) {
    let x = [x1, 1.0 - x1];
    let mut tau = [[0.0; 2]; 2];
    tau[0][1] = p.a12 + p.b12 / t + p.e12 * t.ln() + p.f12 * t;
    tau[1][0] = p.a21 + p.b21 / t + p.e21 * t.ln() + p.f21 * t;
    let alpha = p.c12 + p.d12 * (t - 273.15);
    let g = |i: usize, j: usize| (-alpha * tau[i][j]).exp();
    let mut out = [0.0; 2];
    for i in 0..2 {
        let num: f64 = (0..2).map(|j| x[j] * tau[j][i] * g(j, i)).sum();
        let den: f64 = (0..2).map(|k| x[k] * g(k, i)).sum();
        let mut s = num / den;
        for j in 0..2 {
            let dj: f64 = (0..2).map(|k| x[k] * g(k, j)).sum();
            let nj: f64 = (0..2).map(|m| x[m] * tau[m][j] * g(m, j)).sum();
            s += x[j] * g(i, j) / dj * (tau[i][j] - nj / dj);
        }
        out[i] = s;
    }
    (out[0], out[1])
}
