//! Activity coefficients of hexane/ethanol from both UNIFAC variants.
//!
//! ```bash
//! cargo run -p thermoprop --example unifac
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use thermoprop::activity::{ActivityModel, Unifac, UnifacVariant};
use thermoprop::registry::demo_unifac_table;
use thermoprop::units::Kelvin;

fn groups(pairs: &[(&str, u32)]) -> BTreeMap<String, u32> {
    pairs.iter().map(|&(g, n)| (g.to_owned(), n)).collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hexane = groups(&[("CH3", 2), ("CH2", 4)]);
    let ethanol = groups(&[("CH3", 1), ("CH2", 1), ("OH", 1)]);
    let t = Kelvin(333.15);

    for variant in [UnifacVariant::Original, UnifacVariant::Modified] {
        let table = Arc::new(demo_unifac_table(variant));
        let model = Unifac::new(format!("{variant:?}"), table, [hexane.clone(), ethanol.clone()])?;
        println!("{variant:?} UNIFAC at {t}");
        println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "x1", "ln g1", "ln g2", "comb1", "res1");
        for k in 0..=10 {
            let x1 = k as f64 / 10.0;
            let (g1, g2) = model.ln_gamma(x1, t)?;
            let ((c1, _), (r1, _)) = model.parts(x1, t)?;
            println!("{x1:>5.1} {g1:>10.5} {g2:>10.5} {c1:>10.5} {r1:>10.5}");
        }
        println!();
    }
    Ok(())
}
