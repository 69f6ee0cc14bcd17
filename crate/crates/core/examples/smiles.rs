//! Parse SMILES, canonicalize them and split molecules into UNIFAC groups.
//!
//! ```bash
//! cargo run -p thermoprop --example smiles
//! ```

use thermoprop::activity::UnifacVariant;
use thermoprop::chem::{canonicalize, decompose_groups, parse_smiles};
use thermoprop::registry::demo_unifac_table;

fn main() {
    let original = demo_unifac_table(UnifacVariant::Original);
    let modified = demo_unifac_table(UnifacVariant::Modified);

    for s in ["CCCCCC", "OCC", "c1ccccc1O", "Nc1ccccc1CCC", "C[C@H](N)O", "C1CC"] {
        let parsed = match parse_smiles(s) {
            Ok(p) => p,
            Err(e) => {
                println!("{s:<16} rejected: {e}");
                continue;
            }
        };
        let canonical = canonicalize(&parsed.graph);
        println!("{s:<16} -> {canonical}");
        if !parsed.warnings.is_empty() {
            println!("{:<16}    warnings: {:?}", "", parsed.warnings);
        }
        for (label, table) in [("unifac", &original), ("unifac-modified", &modified)] {
            match decompose_groups(&parsed.graph, table) {
                Ok(groups) => println!("{:<16}    {label}: {groups:?}", ""),
                Err(e) => println!("{:<16}    {label}: {e}", ""),
            }
        }
    }
}
