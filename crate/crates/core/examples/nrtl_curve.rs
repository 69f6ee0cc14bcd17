//! NRTL activity curves for the three parameterizations.
//!
//! ```bash
//! cargo run -p thermoprop --example nrtl_curve
//! ```

use thermoprop::activity::{activity_curve, ActivityModel, Nrtl, NrtlParameterSet, NrtlVariant};
use thermoprop::units::Kelvin;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let three = NrtlParameterSet::three(1.1, 1.7, 0.45);
    let six = NrtlParameterSet::six(-1.2, -0.4, 800.0, 700.0, 0.45, 1e-3);
    let ten = NrtlParameterSet {
        e12: 0.05,
        e21: -0.05,
        f12: -2e-4,
        f21: 1e-4,
        variant: NrtlVariant::Ten,
        ..six
    };

    for params in [three, six, ten] {
        let model = Nrtl::new(params)?;
        print!("{}", params.equations_text());
        for t in [300.0, 350.0, 400.0] {
            let curve = activity_curve(&model, Kelvin(t), 0.01)?;
            let n = curve.len();
            println!(
                "  T = {t} K: {n} points, ln g1(0) = {:.4}, ln g2(1) = {:.4}",
                curve.ln_gamma1[0],
                curve.ln_gamma2[n - 1]
            );
        }
        // relabelling the components mirrors the curves
        let swapped = model.swapped().expect("NRTL can swap");
        let (a, b) = model.ln_gamma(0.3, Kelvin(350.0))?;
        let (c, d) = swapped.ln_gamma(0.7, Kelvin(350.0))?;
        println!("  swap check: ({a:.6}, {b:.6}) vs ({d:.6}, {c:.6})\n");
    }
    Ok(())
}
