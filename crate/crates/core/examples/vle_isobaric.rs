//! Isobaric T-x-y diagram of phenol / 2-propylaniline at 0.6 bar, with
//! activity coefficients from modified UNIFAC.
//!
//! ```bash
//! cargo run -p thermoprop --example vle_isobaric
//! ```

use thermoprop::registry::{register_component, resolve_activity_model, resolve_antoine, ProviderRegistry};
use thermoprop::units::{Pascal, StateSpec};
use thermoprop::vle::{bubble_isobaric, build_diagram, dew_isobaric, BinarySystem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let registry = ProviderRegistry::demo();
    let phenol = register_component("Oc1ccccc1", &registry)?;
    let aniline = register_component("CCCc1ccccc1N", &registry)?;
    println!("groups: {:?} / {:?}", phenol.groups, aniline.groups);

    let model = resolve_activity_model("unifac-modified", [&phenol, &aniline], &registry)?;
    let sys = BinarySystem::new(resolve_antoine(&phenol, &registry)?, resolve_antoine(&aniline, &registry)?, model);
    let p = Pascal(60_000.0);

    let diagram = build_diagram(&StateSpec::isobaric(p)?, &sys)?;
    println!("{:>6} {:>8} {:>10}", "x1", "y1", "T_bub [K]");
    for pt in diagram.bubble.iter().step_by(10) {
        println!("{:>6.2} {:>8.4} {:>10.3}", pt.x1, pt.y1, pt.temperature.0);
    }
    match diagram.azeotrope() {
        Some(az) => println!("azeotrope at x1 = {:.6}, T = {:.3} K", az.x1, az.temperature.0),
        None => println!("no azeotrope"),
    }

    // single points, with the equilibrium residual
    let b = bubble_isobaric(&sys, p, 0.25)?;
    let d = dew_isobaric(&sys, p, b.y1)?;
    println!("bubble x1 = 0.25 -> T = {:.4} K, y1 = {:.5}, residual {:.1e}", b.temperature.0, b.y1, sys.relative_residual(&b)?);
    println!("dew    y1 = {:.5} -> T = {:.4} K, x1 = {:.5}, residual {:.1e}", d.y1, d.temperature.0, d.x1, sys.relative_residual(&d)?);
    Ok(())
}
