//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use thermoprop::activity::{
    activity_curve, ActivityCurve, Nrtl, NrtlParameterSet, NrtlVariant, UnifacVariant,
};
use thermoprop::antoine::{boiling_temperature, vapor_pressure, AntoineParameterSet};
use thermoprop::chem::{canonical_smiles, decompose_groups, parse_smiles};
use thermoprop::fit::{
    build_fit_grid, evaluate_loss, fit_nrtl, predict_targets, FitGrid, FitOptions, FitTemperatures,
};
use thermoprop::units::{Kelvin, Pascal, PressureUnit, StateSpec};
use thermoprop::vle::{
    build_diagram, dew_isobaric, dew_isothermal, BinarySystem, ConsistencyCheck, EquilibriumPoint, VleDiagram,
    VleError,
};

use common::{
    antoine, brute_force_azeotropes, gibbs_duhem_residual, hexane_ethanol_surrogate, random_nrtl, random_nrtl6,
    random_system, rng, unifac_pair, UNIFAC_PAIRS,
};

type Outcome = Result<String, String>;

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    match (r, limit) {
        (Ok(msg), Some(l)) if elapsed > l => Err(format!("{msg}; took {elapsed:.2?}, limit {l:?}")),
        (Ok(msg), _) => Ok(format!("{msg}; {elapsed:.2?}")),
        (Err(msg), _) => Err(format!("{msg}; {elapsed:.2?}")),
    }
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn antoine_inverse() -> Outcome {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = AntoineParameterSet::new(
            r.random_range(2.0..7.0),
            r.random_range(300.0..3000.0),
            r.random_range(-100.0..0.0),
            Kelvin(150.0),
            Kelvin(800.0),
            PressureUnit::Bar,
        )
        .map_err(|e| e.to_string())?;
        let t = r.random_range(200.0..700.0);
        let back = boiling_temperature(&p, vapor_pressure(&p, Kelvin(t)).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        worst = worst.max((back.0 - t).abs() / t);
    }
    ensure(worst <= 1e-9, format!("worst relative error {worst:e}"))?;
    Ok(format!("1000 sets, worst relative error {worst:.1e}"))
}

fn gibbs_duhem() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let params = match k % 3 {
            0 => random_nrtl(&mut r),
            1 => random_nrtl6(&mut r),
            _ => {
                let mut p = random_nrtl6(&mut r);
                p.variant = NrtlVariant::Ten;
                p.e12 = r.random_range(-0.1..0.1);
                p.e21 = r.random_range(-0.1..0.1);
                p.f12 = r.random_range(-5e-4..5e-4);
                p.f21 = r.random_range(-5e-4..5e-4);
                p
            }
        };
        let m = Nrtl::new(params).map_err(|e| e.to_string())?;
        worst = worst.max(gibbs_duhem_residual(&m, Kelvin(r.random_range(300.0..400.0))));
    }
    for variant in [UnifacVariant::Original, UnifacVariant::Modified] {
        for (s1, s2) in UNIFAC_PAIRS {
            worst = worst.max(gibbs_duhem_residual(&unifac_pair(variant, s1, s2), Kelvin(340.0)));
        }
    }
    ensure(worst <= 1e-6, format!("worst residual {worst:e}"))?;
    Ok(format!("50 NRTL + 2x5 UNIFAC systems, worst residual {worst:.1e}"))
}

fn ideal_reduction() -> Outcome {
    let (a1, a2) = (antoine(4.2, 1250.0, -50.0), antoine(4.0, 1380.0, -48.0));
    let sys = BinarySystem::new(a1, a2, Arc::new(Nrtl::new(NrtlParameterSet::three(0.0, 0.0, 0.3)).unwrap()));
    let t = Kelvin(350.0);
    let d = build_diagram(&StateSpec::isothermal(t).unwrap(), &sys).map_err(|e| e.to_string())?;
    let p1 = vapor_pressure(&a1, t).unwrap().0;
    let p2 = vapor_pressure(&a2, t).unwrap().0;
    let worst = d
        .bubble
        .iter()
        .map(|b| (b.pressure.0 - (b.x1 * p1 + (1.0 - b.x1) * p2)).abs() / b.pressure.0)
        .fold(0.0, f64::max);
    ensure(d.bubble.len() == 101, "bubble line length")?;
    ensure(worst <= 1e-12, format!("worst relative deviation {worst:e}"))?;
    Ok(format!("101 points, worst relative deviation {worst:.1e}"))
}

fn duality() -> Outcome {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let sys = random_system(&mut r);
        let state = if k % 2 == 0 {
            StateSpec::isothermal(Kelvin(r.random_range(330.0..370.0))).unwrap()
        } else {
            StateSpec::isobaric(Pascal(r.random_range(5e4..1.5e5))).unwrap()
        };
        let d = build_diagram(&state, &sys).map_err(|e| format!("system {k}: {e}"))?;
        for b in &d.bubble {
            let w = match state {
                StateSpec::Isothermal { temperature } => dew_isothermal(&sys, temperature, b.y1),
                StateSpec::Isobaric { pressure } => dew_isobaric(&sys, pressure, b.y1),
            }
            .map_err(|e| format!("system {k}, x1 = {}: {e}", b.x1))?;
            let dv = match state {
                StateSpec::Isothermal { .. } => (w.pressure.0 - b.pressure.0).abs() / b.pressure.0,
                StateSpec::Isobaric { .. } => (w.temperature.0 - b.temperature.0).abs() / b.temperature.0,
            };
            worst = worst.max(dv).max((w.x1 - b.x1).abs());
        }
    }
    ensure(worst <= 1e-6, format!("worst deviation {worst:e}"))?;
    Ok(format!("20 systems x 101 points, worst deviation {worst:.1e}"))
}

fn offset_targets(base: &[ActivityCurve], delta: f64) -> Vec<ActivityCurve> {
    base.iter()
        .map(|c| ActivityCurve {
            ln_gamma1: c.ln_gamma1.iter().map(|v| v + delta).collect(),
            ln_gamma2: c.ln_gamma2.iter().map(|v| v + delta).collect(),
            ..c.clone()
        })
        .collect()
}

fn prefactor_identity() -> Outcome {
    let ideal = NrtlParameterSet::three(0.0, 0.0, 0.3);
    let grids = [
        build_fit_grid(NrtlVariant::Three, FitTemperatures::Single(Kelvin(350.0))).unwrap(),
        build_fit_grid(NrtlVariant::Six, FitTemperatures::Range(Kelvin(300.0), Kelvin(400.0))).unwrap(),
    ];
    for grid in &grids {
        let base = predict_targets(&Nrtl::new(ideal).unwrap(), grid).unwrap();
        for delta in [0.1, 0.5, 1.0] {
            let params = match grid.variant {
                NrtlVariant::Three => ideal,
                _ => NrtlParameterSet::six(0.0, 0.0, 0.0, 0.0, 0.3, 0.0),
            };
            let l = evaluate_loss(&params, &offset_targets(&base, delta), grid).map_err(|e| e.to_string())?;
            ensure(l == delta * delta, format!("delta {delta}: L = {l:e}, expected {:e}", delta * delta))?;
        }
    }
    Ok("L = delta^2 bit-exactly for delta in {0.1, 0.5, 1.0} on N=101/J=1 and N=21/J=5".into())
}

fn self_fit(truth: &NrtlParameterSet, grid: &FitGrid) -> Result<(f64, usize), String> {
    let targets = predict_targets(&Nrtl::new(*truth).unwrap(), grid).map_err(|e| e.to_string())?;
    let fitted = fit_nrtl(&targets, grid, &FitOptions::default()).map_err(|e| e.to_string())?;
    Ok((fitted.loss, fitted.n_starts))
}

fn fit_self_consistency() -> Outcome {
    let mut r = rng(4);
    let grid3 = build_fit_grid(NrtlVariant::Three, FitTemperatures::Single(Kelvin(340.0))).unwrap();
    let mut worst3: f64 = 0.0;
    for _ in 0..20 {
        let truth = NrtlParameterSet::three(r.random_range(-1.0..2.5), r.random_range(-1.0..2.5), r.random_range(0.1..0.6));
        let (l, starts) = self_fit(&truth, &grid3)?;
        ensure(starts <= 8, format!("{starts} starts"))?;
        worst3 = worst3.max(l);
    }
    ensure(worst3 <= 1e-12, format!("3-parameter worst L = {worst3:e}"))?;
    let range = FitTemperatures::Range(Kelvin(310.0), Kelvin(370.0));
    let grid6 = build_fit_grid(NrtlVariant::Six, range).unwrap();
    let grid10 = build_fit_grid(NrtlVariant::Ten, range).unwrap();
    let mut worst_t: f64 = 0.0;
    for k in 0..3 {
        let six = random_nrtl6(&mut r);
        worst_t = worst_t.max(self_fit(&six, &grid6).map_err(|e| format!("6-parameter case {k}: {e}"))?.0);
        let mut ten = random_nrtl6(&mut r);
        ten.variant = NrtlVariant::Ten;
        ten.e12 = r.random_range(-0.05..0.05);
        ten.e21 = r.random_range(-0.05..0.05);
        ten.f12 = r.random_range(-2e-4..2e-4);
        ten.f21 = r.random_range(-2e-4..2e-4);
        worst_t = worst_t.max(self_fit(&ten, &grid10).map_err(|e| format!("10-parameter case {k}: {e}"))?.0);
    }
    ensure(worst_t <= 1e-10, format!("6/10-parameter worst L = {worst_t:e}"))?;
    Ok(format!("20 x 3-parameter worst L {worst3:.1e}; 3 x 6 and 3 x 10-parameter worst L {worst_t:.1e}"))
}

fn grid_contracts() -> Outcome {
    let m = Nrtl::new(NrtlParameterSet::three(0.5, 0.8, 0.3)).unwrap();
    let c = activity_curve(&m, Kelvin(350.0), 0.01).map_err(|e| e.to_string())?;
    ensure(c.len() == 101, format!("activity curve has {} points", c.len()))?;
    let d = build_diagram(&StateSpec::isothermal(Kelvin(350.0)).unwrap(), &hexane_ethanol_surrogate())
        .map_err(|e| e.to_string())?;
    ensure(d.bubble.len() == 101 && d.dew.len() == 101, "diagram line lengths")?;
    let g3 = build_fit_grid(NrtlVariant::Three, FitTemperatures::Single(Kelvin(350.0))).unwrap();
    ensure(g3.compositions.len() == 101 && g3.temperatures.len() == 1, "3-parameter grid")?;
    for v in [NrtlVariant::Six, NrtlVariant::Ten] {
        let g = build_fit_grid(v, FitTemperatures::Range(Kelvin(300.0), Kelvin(400.0))).unwrap();
        let temps: Vec<f64> = g.temperatures.iter().map(|t| t.0).collect();
        ensure(g.compositions.len() == 21, format!("variant {v}: N = {}", g.compositions.len()))?;
        ensure(temps == [300.0, 325.0, 350.0, 375.0, 400.0], format!("variant {v}: temperatures {temps:?}"))?;
    }
    Ok("activity 101, VLE 101 + 101, fit N=101/J=1 and N=21/J=5".into())
}

fn failed_checks(state: StateSpec, bubble: Vec<EquilibriumPoint>, dew: Vec<EquilibriumPoint>, az: Vec<EquilibriumPoint>) -> Result<Vec<ConsistencyCheck>, String> {
    match VleDiagram::assemble(state, "m", bubble, dew, az, vec![]) {
        Err(VleError::ConsistencyViolation(report)) => Ok(report.failed()),
        Err(e) => Err(e.to_string()),
        Ok(_) => Err("corrupted diagram was released".into()),
    }
}

fn consistency_gate() -> Outcome {
    let sys = BinarySystem::new(
        antoine(4.2, 1200.0, -50.0),
        antoine(4.0, 1350.0, -50.0),
        Arc::new(Nrtl::new(NrtlParameterSet::three(0.3, 0.4, 0.3)).unwrap()),
    );
    let state = StateSpec::isothermal(Kelvin(350.0)).unwrap();
    let d = build_diagram(&state, &sys).map_err(|e| e.to_string())?;

    let bump = 0.05 * (d.bubble[100].pressure.0 - d.bubble[0].pressure.0);
    let crossed: Vec<EquilibriumPoint> = d
        .bubble
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let lift = if i == 0 || i == 100 { 0.0 } else { bump * (1.0 - ((i as f64 - 50.0) / 50.0).powi(2)) };
            EquilibriumPoint { y1: p.x1, pressure: Pascal(p.pressure.0 + lift), ..*p }
        })
        .collect();
    let mut open_end = d.dew.clone();
    open_end[0].pressure.0 *= 0.999;
    let mut kinked = d.bubble.clone();
    kinked[50].pressure.0 = kinked[49].pressure.0 - 1e-3;

    let cases = [
        ("crossed lines", ConsistencyCheck::Ordering, d.bubble.clone(), crossed, vec![]),
        ("open pure end", ConsistencyCheck::MergeAtPure, d.bubble.clone(), open_end, vec![]),
        ("slope reversal", ConsistencyCheck::SlopeSignAgreement, kinked, d.dew.clone(), vec![]),
        ("non-coincident azeotrope", ConsistencyCheck::AzeotropeCoincidence, d.bubble.clone(), d.dew.clone(), vec![d.bubble[30]]),
    ];
    let mut names = Vec::new();
    for (label, expected, bubble, dew, az) in cases {
        let failed = failed_checks(state, bubble, dew, az)?;
        ensure(failed == vec![expected], format!("{label}: failed {failed:?}, expected [{expected:?}]"))?;
        names.push(expected.as_str());
    }
    Ok(format!("each fault withheld with its own failure: {}", names.join(", ")))
}

fn azeotrope_localization() -> Outcome {
    let a = antoine(4.1, 1300.0, -50.0);
    let sym = BinarySystem::new(a, a, Arc::new(Nrtl::new(NrtlParameterSet::three(0.9, 0.9, 0.3)).unwrap()));
    let d = build_diagram(&StateSpec::isothermal(Kelvin(360.0)).unwrap(), &sym).map_err(|e| e.to_string())?;
    let x_sym = d.azeotrope().ok_or("no azeotrope in symmetric system")?.x1;
    ensure((x_sym - 0.5).abs() <= 1e-8, format!("symmetric azeotrope at {x_sym}"))?;

    let sys = hexane_ethanol_surrogate();
    let t = Kelvin(400.0);
    let d = build_diagram(&StateSpec::isothermal(t).unwrap(), &sys).map_err(|e| e.to_string())?;
    let found = d.azeotrope().ok_or("no azeotrope in surrogate")?.x1;
    let scan = brute_force_azeotropes(&sys, t, 1e-5);
    ensure(scan.len() == 1, format!("scan found {} crossings", scan.len()))?;
    let dev = (found - scan[0]).abs();
    ensure(dev <= 1e-6, format!("surrogate azeotrope {found} vs scan {}", scan[0]))?;
    Ok(format!("symmetric |x - 0.5| = {:.1e}; surrogate x1 = {found:.6}, scan deviation {dev:.1e}", (x_sym - 0.5).abs()))
}

fn figure_shape() -> Outcome {
    let d = build_diagram(&StateSpec::isothermal(Kelvin(400.0)).unwrap(), &hexane_ethanol_surrogate())
        .map_err(|e| e.to_string())?;
    ensure(d.azeotropes.len() == 1, format!("{} azeotropes", d.azeotropes.len()))?;
    let p: Vec<f64> = d.bubble.iter().map(|b| b.pressure.0).collect();
    let maxima = (1..100).filter(|&k| p[k] > p[k - 1] && p[k] >= p[k + 1]).count();
    ensure(maxima == 1, format!("{maxima} bubble-line maxima"))?;
    for (b, w) in [(&d.bubble[0], &d.dew[0]), (&d.bubble[100], &d.dew[100])] {
        ensure((b.pressure.0 - w.pressure.0).abs() <= 1e-8 * b.pressure.0, "lines do not merge at a pure end")?;
    }
    ensure(d.consistency.passed(), "consistency report")?;
    Ok(format!("one azeotrope at x1 = {:.3}, one bubble maximum, merged ends", d.azeotropes[0].x1))
}

fn smiles_corpus() -> Outcome {
    for s in ["CCCCCC", "CCO", "Oc1ccccc1", "CCCc1ccccc1N"] {
        let c = canonical_smiles(s).map_err(|e| format!("{s}: {e}"))?;
        ensure(canonical_smiles(&c).map_err(|e| e.to_string())? == c, format!("{s} not idempotent"))?;
    }
    let table = common::unifac_table(UnifacVariant::Original);
    let d = |s: &str| decompose_groups(&parse_smiles(s).unwrap().graph, &table).map_err(|e| e.to_string());
    let fmt = |g: &thermoprop::activity::GroupCounts| {
        g.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(", ")
    };
    let (h, e) = (fmt(&d("CCCCCC")?), fmt(&d("CCO")?));
    ensure(h == "CH2:4, CH3:2", format!("hexane {{{h}}}"))?;
    ensure(e == "CH2:1, CH3:1, OH:1", format!("ethanol {{{e}}}"))?;
    Ok(format!("4 SMILES idempotent; hexane {{{h}}}, ethanol {{{e}}}"))
}

fn standalone() -> Outcome {
    let manifest = include_str!("../Cargo.toml");
    for dep in ["thermoprop-server", "axum", "tokio", "reqwest"] {
        ensure(!manifest.contains(dep), format!("library depends on {dep}"))?;
    }
    Ok("library crate builds and runs this suite without the service crate".into())
}

fn main() {
    let criteria: Vec<(&str, Option<Duration>, fn() -> Outcome)> = vec![
        ("antoine inverse", Some(Duration::from_secs(1)), antoine_inverse),
        ("gibbs-duhem", Some(Duration::from_secs(10)), gibbs_duhem),
        ("ideal-mixture reduction", None, ideal_reduction),
        ("bubble/dew duality", Some(Duration::from_secs(30)), duality),
        ("loss prefactor identity", None, prefactor_identity),
        ("fit self-consistency", None, fit_self_consistency),
        ("grid contracts", None, grid_contracts),
        ("consistency gate", None, consistency_gate),
        ("azeotrope localization", None, azeotrope_localization),
        ("figure shape", None, figure_shape),
        ("smiles corpus", None, smiles_corpus),
        ("standalone primary suite", None, standalone),
    ];
    let mut failures = 0;
    for (name, limit, f) in criteria {
        match timed(limit, f) {
            Ok(msg) => println!("PASS  {name}: {msg}"),
            Err(msg) => {
                failures += 1;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
