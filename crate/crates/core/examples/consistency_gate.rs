//! Diagrams are only released when the bubble and dew lines pass the
//! consistency checks. This example builds a valid diagram, then tampers
//! with its lines and shows what the checks report.
//!
//! ```bash
//! cargo run -p thermoprop --example consistency_gate
//! ```

use std::sync::Arc;

use thermoprop::activity::{Nrtl, NrtlParameterSet};
use thermoprop::registry::{register_component, resolve_antoine, ProviderRegistry};
use thermoprop::units::{Kelvin, StateSpec};
use thermoprop::vle::{build_diagram, check_consistency, BinarySystem, VleDiagram, VleError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let registry = ProviderRegistry::demo();
    let a = resolve_antoine(&register_component("CCCCCC", &registry)?, &registry)?;
    let b = resolve_antoine(&register_component("CCO", &registry)?, &registry)?;
    let sys = BinarySystem::new(a, b, Arc::new(Nrtl::new(NrtlParameterSet::three(1.1, 1.7, 0.45))?));
    let state = StateSpec::isothermal(Kelvin(400.0))?;
    let good = build_diagram(&state, &sys)?;
    println!("released: {} bubble, {} dew, {} azeotrope(s)", good.bubble.len(), good.dew.len(), good.azeotropes.len());

    // dew line shifted up: the pure ends no longer meet
    let mut dew = good.dew.clone();
    for pt in &mut dew {
        pt.pressure.0 *= 1.01;
    }
    let report = check_consistency(state.mode(), &good.bubble, &dew, &good.azeotropes);
    println!("shifted dew line: {:?}", report.failed_names());

    // forgetting the azeotrope
    match VleDiagram::assemble(state, "nrtl", good.bubble.clone(), good.dew.clone(), vec![], vec![]) {
        Ok(_) => println!("unexpectedly released"),
        Err(VleError::ConsistencyViolation(r)) => println!("without azeotrope: {:?}", r.failed_names()),
        Err(e) => return Err(e.into()),
    }

    // the bundled modified UNIFAC OH/H2O row is illustrative only
    let registry = ProviderRegistry::demo();
    let etoh = register_component("CCO", &registry)?;
    let water = register_component("O", &registry)?;
    let model = thermoprop::registry::resolve_activity_model("unifac-modified", [&etoh, &water], &registry)?;
    let sys = BinarySystem::new(resolve_antoine(&etoh, &registry)?, resolve_antoine(&water, &registry)?, model);
    match build_diagram(&StateSpec::isobaric(thermoprop::units::Pascal(101_325.0))?, &sys) {
        Ok(_) => println!("ethanol/water released"),
        Err(e) => println!("ethanol/water withheld: {e}"),
    }
    Ok(())
}
