//! Regress NRTL parameters to UNIFAC activity curves.
//!
//! The 3-parameter form is fitted at one temperature; the 6- and
//! 10-parameter forms need a temperature range.
//!
//! ```bash
//! cargo run --release -p thermoprop --example nrtl_fit
//! ```

use thermoprop::activity::NrtlVariant;
use thermoprop::fit::{build_fit_grid, fit_nrtl, predict_targets, FitOptions, FitTemperatures};
use thermoprop::registry::{register_component, resolve_activity_model, ProviderRegistry};
use thermoprop::units::Kelvin;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let registry = ProviderRegistry::demo();
    let hexane = register_component("CCCCCC", &registry)?;
    let ethanol = register_component("CCO", &registry)?;
    let unifac = resolve_activity_model("unifac", [&hexane, &ethanol], &registry)?;

    let cases = [
        (NrtlVariant::Three, FitTemperatures::Single(Kelvin(330.0))),
        (NrtlVariant::Six, FitTemperatures::Range(Kelvin(300.0), Kelvin(360.0))),
        (NrtlVariant::Ten, FitTemperatures::Range(Kelvin(300.0), Kelvin(360.0))),
    ];
    for (variant, temps) in cases {
        let grid = build_fit_grid(variant, temps)?;
        let targets = predict_targets(unifac.as_ref(), &grid)?;
        let result = fit_nrtl(&targets, &grid, &FitOptions::default())?;
        println!(
            "{variant:?}: {} residual terms, loss {:.3e}, converged {}",
            grid.term_count(),
            result.loss,
            result.converged
        );
        println!("  per start: {:?}", result.per_start_losses.iter().map(|l| l.map(|v| format!("{v:.2e}"))).collect::<Vec<_>>());
        print!("{}", result.equations_text);
        println!();
    }

    // a range is rejected for the isothermal form
    let err = build_fit_grid(NrtlVariant::Three, FitTemperatures::Range(Kelvin(300.0), Kelvin(360.0))).unwrap_err();
    println!("3-parameter with a range: {err}");
    Ok(())
}
