//! Build a provider registry from CSV tables and look components up.
//!
//! ```bash
//! cargo run -p thermoprop --example registry
//! ```

use std::sync::Arc;

use thermoprop::activity::{NrtlParameterSet, UnifacVariant};
use thermoprop::registry::{
    demo_unifac_table, register_component, resolve_activity_model, resolve_antoine, AntoineTable, NrtlPairTable,
    ProviderRegistry, UnifacSource,
};

const ANTOINE: &str = "\
smiles,A,B,C,t_min_K,t_max_K,p_unit,name
ClCCl,4.53691,1327.016,-20.474,233,313,bar,dichloromethane
CC(C)=O,4.42448,1312.253,-32.445,259.16,507.6,bar,acetone
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut pairs = NrtlPairTable::from_csv("smiles1,smiles2,variant,a12,a21,b12,b21,e12,e21,f12,f21,c12,d12\n".as_bytes())?;
    pairs.insert("ClCCl".into(), "CC(C)=O".into(), NrtlParameterSet::three(-0.4, 0.2, 0.3))?;

    let unifac = Arc::new(demo_unifac_table(UnifacVariant::Original));
    let registry = ProviderRegistry::new()
        .with_antoine_source(Arc::new(AntoineTable::from_csv("solvents", ANTOINE.as_bytes())?))
        .with_antoine_source(Arc::new(AntoineTable::demo()))
        .with_activity_source("nrtl", Arc::new(pairs))
        .with_activity_source("unifac", Arc::new(UnifacSource::new(unifac.clone())))
        .with_group_table(unifac);

    for m in registry.models() {
        println!("model {:<8} {}", m.name, m.description);
    }

    for s in ["C(Cl)Cl", "CC(=O)C", "OCC", "CCCCCCCC"] {
        let c = register_component(s, &registry)?;
        match resolve_antoine(&c, &registry) {
            Ok(p) => println!("{s:<10} {:<10} {:?} A={} valid {}..{} K", c.canonical_smiles, c.name, p.a(), p.t_min().0, p.t_max().0),
            Err(e) => println!("{s:<10} {:<10} {e}", c.canonical_smiles),
        }
    }

    let dcm = register_component("ClCCl", &registry)?;
    let acetone = register_component("CC(C)=O", &registry)?;
    let ethanol = register_component("CCO", &registry)?;
    let nrtl = resolve_activity_model("nrtl", [&acetone, &dcm], &registry)?;
    println!("nrtl for acetone/dichloromethane: {}", nrtl.name());
    if let Err(e) = resolve_activity_model("nrtl", [&dcm, &ethanol], &registry) {
        println!("nrtl for dichloromethane/ethanol: {e}");
    }
    if let Err(e) = resolve_activity_model("wilson", [&dcm, &ethanol], &registry) {
        println!("wilson: {e}");
    }
    Ok(())
}
