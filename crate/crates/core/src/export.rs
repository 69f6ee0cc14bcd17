//! CSV export of results. Numbers are written with the shortest representation
//! that parses back to the same double.

use std::collections::BTreeMap;
use std::io::Read;

use thiserror::Error;

use crate::activity::{ActivityCurve, NrtlParameterSet, NrtlState, NrtlVariant};
use crate::fit::{FitGrid, FitResult};
use crate::units::{Kelvin, Pascal};
use crate::vle::VleDiagram;

pub const ACTIVITY_HEADER: [&str; 4] = ["T_K", "x1", "ln_gamma1", "ln_gamma2"];
pub const VLE_HEADER: [&str; 7] = ["x1", "y1", "T_K", "p_Pa", "gamma1", "gamma2", "line"];
pub const SATURATION_HEADER: [&str; 3] = ["smiles", "T_K", "p_Pa"];
pub const FIT_HEADER: [&str; 7] = ["kind", "key", "T_K", "x1", "value", "ln_gamma1", "ln_gamma2"];

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("CSV output is UTF-8")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

/// `T_K,x1,ln_gamma1,ln_gamma2`, one row per grid point.
pub fn activity_csv(curves: &[ActivityCurve]) -> String {
    let mut w = writer();
    w.write_record(ACTIVITY_HEADER).expect("in-memory write");
    for c in curves {
        for i in 0..c.len() {
            w.write_record([
                num(c.temperature.0),
                num(c.x1[i]),
                num(c.ln_gamma1[i]),
                num(c.ln_gamma2[i]),
            ])
            .expect("in-memory write");
        }
    }
    finish(w)
}

/// `smiles,T_K,p_Pa` for one pure-component saturation state.
pub fn saturation_csv(smiles: &str, t: Kelvin, p: Pascal) -> String {
    let mut w = writer();
    w.write_record(SATURATION_HEADER).expect("in-memory write");
    w.write_record([smiles.to_owned(), num(t.0), num(p.0)]).expect("in-memory write");
    finish(w)
}

/// `x1,y1,T_K,p_Pa,gamma1,gamma2,line`, bubble rows then dew rows.
pub fn vle_csv(diagram: &VleDiagram) -> String {
    let mut w = writer();
    w.write_record(VLE_HEADER).expect("in-memory write");
    for (line, points) in [("bubble", &diagram.bubble), ("dew", &diagram.dew)] {
        for p in points.iter() {
            w.write_record([
                num(p.x1),
                num(p.y1),
                num(p.temperature.0),
                num(p.pressure.0),
                num(p.gamma1),
                num(p.gamma2),
                line.to_owned(),
            ])
            .expect("in-memory write");
        }
    }
    finish(w)
}

/// Fit parameters, losses, target curves and the fitted NRTL curves in one table.
///
/// Row kinds: `variant`, `param` (key = coefficient), `loss`, `converged`,
/// `start` (key = start index, empty value for a failed start), `target` and
/// `nrtl` (curve points).
pub fn fit_csv(result: &FitResult, grid: &FitGrid, targets: &[ActivityCurve]) -> String {
    let mut w = writer();
    let mut row = |kind: &str, key: &str, t: &str, x: &str, value: &str, g1: &str, g2: &str| {
        w.write_record([kind, key, t, x, value, g1, g2]).expect("in-memory write");
    };
    row(FIT_HEADER[0], FIT_HEADER[1], FIT_HEADER[2], FIT_HEADER[3], FIT_HEADER[4], FIT_HEADER[5], FIT_HEADER[6]);
    row("variant", "", "", "", &grid.variant.to_string(), "", "");
    for name in grid.variant.free_names() {
        row("param", name, "", "", &num(result.params.slot(name)), "", "");
    }
    row("loss", "", "", "", &num(result.loss), "", "");
    row("converged", "", "", "", if result.converged { "true" } else { "false" }, "", "");
    for (k, l) in result.per_start_losses.iter().enumerate() {
        row("start", &k.to_string(), "", "", &l.map(num).unwrap_or_default(), "", "");
    }
    for c in targets {
        for i in 0..c.len() {
            row("target", "", &num(c.temperature.0), &num(c.x1[i]), "", &num(c.ln_gamma1[i]), &num(c.ln_gamma2[i]));
        }
    }
    for c in targets {
        let state = NrtlState::evaluate_unchecked(&result.params, c.temperature.0);
        for &x in &c.x1 {
            let (g1, g2) = state.ln_gamma(x);
            row("nrtl", "", &num(c.temperature.0), &num(x), "", &num(g1), &num(g2));
        }
    }
    finish(w)
}

#[derive(Debug, Error)]
pub enum ImportError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed fit table: {0}")]
    Malformed(String),
}

/// Contents recovered from a [`fit_csv`] table.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedFit {
    pub params: NrtlParameterSet,
    pub loss: f64,
    pub grid: FitGrid,
    pub targets: Vec<ActivityCurve>,
}

fn parse_num(s: &str) -> Result<f64, ImportError> {
    s.parse().map_err(|_| ImportError::Malformed(format!("not a number: `{s}`")))
}

/// Reads back the variant, coefficients, loss and target curves of a fit table.
pub fn parse_fit_csv<R: Read>(reader: R) -> Result<ParsedFit, ImportError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut variant = None;
    let mut values: BTreeMap<String, f64> = BTreeMap::new();
    let mut loss = None;
    // temperature bits -> (T, x, g1, g2) in file order
    let mut curves: Vec<(f64, Vec<(f64, f64, f64)>)> = Vec::new();
    for record in rdr.records() {
        let r = record?;
        let field = |i: usize| r.get(i).unwrap_or("");
        match field(0) {
            "variant" => {
                let v: u8 = field(4)
                    .parse()
                    .map_err(|_| ImportError::Malformed(format!("bad variant `{}`", field(4))))?;
                variant = Some(NrtlVariant::try_from(v).map_err(ImportError::Malformed)?);
            }
            "param" => {
                values.insert(field(1).to_owned(), parse_num(field(4))?);
            }
            "loss" => loss = Some(parse_num(field(4))?),
            "target" => {
                let t = parse_num(field(2))?;
                let point = (parse_num(field(3))?, parse_num(field(5))?, parse_num(field(6))?);
                match curves.last_mut() {
                    Some((ct, pts)) if ct.to_bits() == t.to_bits() => pts.push(point),
                    _ => curves.push((t, vec![point])),
                }
            }
            _ => {}
        }
    }
    let variant = variant.ok_or_else(|| ImportError::Malformed("missing variant row".into()))?;
    let free: Vec<f64> = variant
        .free_names()
        .iter()
        .map(|n| {
            values
                .get(*n)
                .copied()
                .ok_or_else(|| ImportError::Malformed(format!("missing coefficient {n}")))
        })
        .collect::<Result<_, _>>()?;
    let params = NrtlParameterSet::from_free(variant, &free);
    let loss = loss.ok_or_else(|| ImportError::Malformed("missing loss row".into()))?;
    let compositions: Vec<f64> = curves
        .first()
        .map(|(_, pts)| pts.iter().map(|p| p.0).collect())
        .ok_or_else(|| ImportError::Malformed("no target rows".into()))?;
    let mut targets = Vec::new();
    for (t, pts) in &curves {
        let curve = ActivityCurve::new(
            Kelvin(*t),
            pts.iter().map(|p| p.0).collect(),
            pts.iter().map(|p| p.1).collect(),
            pts.iter().map(|p| p.2).collect(),
            "imported",
        )
        .map_err(|e| ImportError::Malformed(e.to_string()))?;
        targets.push(curve);
    }
    Ok(ParsedFit {
        params,
        loss,
        grid: FitGrid {
            compositions,
            temperatures: curves.iter().map(|(t, _)| Kelvin(*t)).collect(),
            variant,
        },
        targets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activity::{activity_curve, Nrtl};
    use crate::fit::{build_fit_grid, evaluate_loss, fit_nrtl, predict_targets, FitOptions, FitTemperatures};

    #[test]
    fn activity_rows() {
        let m = Nrtl::new(NrtlParameterSet::three(0.5, 0.8, 0.3)).unwrap();
        let c = activity_curve(&m, Kelvin(350.0), 0.01).unwrap();
        let csv = activity_csv(&[c]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 102);
        assert_eq!(lines[0], "T_K,x1,ln_gamma1,ln_gamma2");
        assert!(lines[1].starts_with("350.0,0.0,"));
    }

    #[test]
    fn saturation_row() {
        assert_eq!(
            saturation_csv("CCO", Kelvin(351.5), Pascal(101325.0)),
            "smiles,T_K,p_Pa\nCCO,351.5,101325.0\n"
        );
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23] {
            assert_eq!(num(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn fit_table_round_trip() {
        let truth = Nrtl::new(NrtlParameterSet::three(0.4, 0.9, 0.35)).unwrap();
        let g = build_fit_grid(NrtlVariant::Three, FitTemperatures::Single(Kelvin(340.0))).unwrap();
        let mut targets = predict_targets(&truth, &g).unwrap();
        targets[0].ln_gamma1.iter_mut().skip(1).for_each(|v| *v *= 1.01);
        let r = fit_nrtl(&targets, &g, &FitOptions::default()).unwrap();
        let csv = fit_csv(&r, &g, &targets);
        let parsed = parse_fit_csv(csv.as_bytes()).unwrap();
        assert_eq!(parsed.grid, g);
        let again = evaluate_loss(&parsed.params, &parsed.targets, &parsed.grid).unwrap();
        assert_eq!(again.to_bits(), r.loss.to_bits());
        assert_eq!(parsed.loss.to_bits(), r.loss.to_bits());
    }
}
