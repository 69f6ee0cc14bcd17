//! Isothermal P-x-y diagram of hexane/ethanol at 400 K with the bundled
//! NRTL surrogate pair.
//!
//! ```bash
//! cargo run -p thermoprop --example vle_isothermal
//! ```

use thermoprop::registry::{register_component, resolve_activity_model, resolve_antoine, ProviderRegistry};
use thermoprop::units::{Kelvin, StateSpec};
use thermoprop::vle::{build_diagram, BinarySystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let registry = ProviderRegistry::demo();
    let hexane = register_component("CCCCCC", &registry)?;
    let ethanol = register_component("CCO", &registry)?;
    let model = resolve_activity_model("nrtl-demo", [&hexane, &ethanol], &registry)?;
    let sys = BinarySystem::new(resolve_antoine(&hexane, &registry)?, resolve_antoine(&ethanol, &registry)?, model);

    let diagram = build_diagram(&StateSpec::isothermal(Kelvin(400.0))?, &sys)?;

    println!("{:>6} {:>8} {:>12}   {:>6} {:>12}", "x1", "y1", "p_bub [Pa]", "y1", "p_dew [Pa]");
    for (b, d) in diagram.bubble.iter().zip(&diagram.dew).step_by(10) {
        println!("{:>6.2} {:>8.4} {:>12.1}   {:>6.2} {:>12.1}", b.x1, b.y1, b.pressure.0, d.y1, d.pressure.0);
    }
    if let Some(az) = diagram.azeotrope() {
        println!("azeotrope: x1 = {:.6}, p = {:.1} Pa", az.x1, az.pressure.0);
    }
    println!("failed checks: {:?}", diagram.consistency.failed_names());
    for w in &diagram.warnings {
        println!("component {}: {:?}", w.component, w.warning);
    }
    Ok(())
}
