//! CSV export of activity curves, phase diagrams and NRTL fits, and
//! re-import of a fit file.
//!
//! ```bash
//! cargo run --release -p thermoprop --example csv_export -- out_dir
//! ```

use std::path::PathBuf;

use thermoprop::activity::{activity_curve, NrtlVariant};
use thermoprop::export::{activity_csv, fit_csv, parse_fit_csv, saturation_csv, vle_csv};
use thermoprop::fit::{build_fit_grid, fit_nrtl, predict_targets, FitOptions, FitTemperatures};
use thermoprop::registry::{register_component, resolve_activity_model, resolve_antoine, ProviderRegistry};
use thermoprop::units::{Kelvin, StateSpec};
use thermoprop::vle::{build_diagram, BinarySystem, GRID_STEP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "csv_out".into()));
    std::fs::create_dir_all(&dir)?;

    let registry = ProviderRegistry::demo();
    let benzene = register_component("c1ccccc1", &registry)?;
    let toluene = register_component("Cc1ccccc1", &registry)?;
    let model = resolve_activity_model("unifac", [&benzene, &toluene], &registry)?;
    let psat = [resolve_antoine(&benzene, &registry)?, resolve_antoine(&toluene, &registry)?];
    let t = Kelvin(350.0);

    let p = thermoprop::antoine::vapor_pressure(&psat[0], t)?;
    std::fs::write(dir.join("psat.csv"), saturation_csv(&benzene.canonical_smiles, t, p))?;

    let curve = activity_curve(model.as_ref(), t, GRID_STEP)?;
    std::fs::write(dir.join("activity.csv"), activity_csv(&[curve]))?;

    let sys = BinarySystem::new(psat[0], psat[1], model.clone());
    let diagram = build_diagram(&StateSpec::isothermal(t)?, &sys)?;
    std::fs::write(dir.join("vle.csv"), vle_csv(&diagram))?;

    let grid = build_fit_grid(NrtlVariant::Six, FitTemperatures::Range(Kelvin(320.0), Kelvin(370.0)))?;
    let targets = predict_targets(model.as_ref(), &grid)?;
    let result = fit_nrtl(&targets, &grid, &FitOptions::default())?;
    let text = fit_csv(&result, &grid, &targets);
    std::fs::write(dir.join("fit.csv"), &text)?;

    let back = parse_fit_csv(text.as_bytes())?;
    println!("wrote psat.csv, activity.csv, vle.csv and fit.csv to {}", dir.display());
    println!("fit file: {:?} with loss {:.3e}, parameters round-trip: {}", back.params.variant, back.loss, back.params == result.params);
    Ok(())
}
