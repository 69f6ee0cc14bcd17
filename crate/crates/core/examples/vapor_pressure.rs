//! Antoine vapor pressures and normal boiling points.
//!
//! ```bash
//! cargo run -p thermoprop --example vapor_pressure
//! ```

use thermoprop::antoine::{boiling_temperature, vapor_pressure_checked, AntoineParameterSet};
use thermoprop::units::{Kelvin, Pascal, PressureUnit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // toluene, log10(p / mmHg) = A - B / (T/degC + C) rewritten for kelvin
    let toluene = AntoineParameterSet::new(6.95464, 1344.8, 219.482 - 273.15, Kelvin(280.0), Kelvin(410.0), PressureUnit::MmHg)?;

    println!("{:>8} {:>14}  warnings", "T [K]", "p_sat [Pa]");
    for t in [250.0, 300.0, 350.0, 383.8, 450.0] {
        let (p, warnings) = vapor_pressure_checked(&toluene, Kelvin(t))?;
        println!("{t:>8.1} {:>14.2}  {warnings:?}", p.0);
    }

    let tb = boiling_temperature(&toluene, Pascal(101_325.0))?;
    println!("normal boiling point: {:.2} K", tb.0);
    Ok(())
}
