//! Thermophysical properties of pure components and binary mixtures:
//! Antoine vapor pressures, NRTL and UNIFAC activity coefficients, NRTL
//! regression and vapor-liquid equilibrium diagrams.
//!
//! ## Examples
//!
//! Every capability has a runnable example under `examples/`:
//!
//! | example | shows |
//! |---|---|
//! | `vapor_pressure` | Antoine pressures, range warnings, boiling points |
//! | `smiles` | parsing, canonical form, group decomposition |
//! | `unifac` | original and modified UNIFAC, combinatorial and residual parts |
//! | `nrtl_curve` | activity curves of the 3, 6 and 10 parameter forms |
//! | `vle_isothermal` | P-x-y diagram with azeotrope |
//! | `vle_isobaric` | T-x-y diagram and single bubble/dew points |
//! | `nrtl_fit` | multi-start NRTL regression to UNIFAC curves |
//! | `registry` | CSV tables, component lookup, model resolution |
//! | `csv_export` | CSV files for every result and fit re-import |
//! | `consistency_gate` | diagrams withheld when the checks fail |
//! | `custom_transport` | remote activity models behind `Transport` |
//!
//! ```bash
//! cargo run -p thermoprop --example vle_isothermal
//! cargo run --release -p thermoprop --example nrtl_fit
//! ```

pub mod activity;
pub mod adapter;
pub mod antoine;
pub mod chem;
pub mod units;
pub mod registry;
pub mod solver;
pub mod vle;
pub mod fit;
pub mod export;
