//! UNIFAC (original) and modified UNIFAC (Dortmund) for binary mixtures.
//!
//! Combinatorial part (z = 10):
//!
//! ```text
//! ln gC_i = 1 - V'_i + ln V'_i - 5 q_i (1 - V_i / F_i + ln(V_i / F_i))
//! V_i = r_i / sum_j x_j r_j,  F_i = q_i / sum_j x_j q_j
//! V'_i = V_i (original) or r_i^(3/4) / sum_j x_j r_j^(3/4) (modified)
//! ```
//!
//! Residual part by solution of groups:
//!
//! ```text
//! ln gR_i = sum_k nu_ki (ln Gamma_k - ln Gamma_k^(i))
//! ln Gamma_k = Q_k [1 - ln(sum_m theta_m Psi_mk) - sum_m theta_m Psi_km / sum_n theta_n Psi_nm]
//! Psi_mn = exp(-a_mn / T)                     (original)
//! Psi_mn = exp(-(a_mn + b_mn T + c_mn T^2) / T) (modified)
//! ```

use std::collections::{BTreeMap, HashMap};
use std::io::Read;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{check_composition, check_temperature, ActivityError, ActivityModel};
use crate::units::Kelvin;

/// Group name -> number of occurrences in a molecule.
pub type GroupCounts = BTreeMap<String, u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnifacVariant {
    Original,
    Modified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupDefinition {
    pub id: u32,
    pub name: String,
    pub main: u32,
    pub r: f64,
    pub q: f64,
    /// Bracket-atom fragment the group covers, e.g. `[c][CH3]`.
    pub pattern: Option<String>,
    /// Higher values are matched first during decomposition.
    pub priority: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interaction {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("csv error in {file}: {source}")]
    Csv {
        file: &'static str,
        #[source]
        source: csv::Error,
    },
    #[error("{file} row {row}: {message}")]
    Row {
        file: &'static str,
        row: usize,
        message: String,
    },
}

#[derive(Debug, Deserialize)]
struct GroupRow {
    id: u32,
    name: String,
    main: u32,
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "Q")]
    q: f64,
    #[serde(default)]
    pattern: Option<String>,
    #[serde(default)]
    priority: Option<i32>,
}

#[derive(Debug, Deserialize)]
struct InteractionRow {
    main_m: u32,
    main_n: u32,
    a: f64,
    #[serde(default)]
    b: Option<f64>,
    #[serde(default)]
    c: Option<f64>,
}

/// Group volume/area data plus directional main-group interaction coefficients.
///
/// Absent interaction rows are gaps and are reported as
/// [`ActivityError::ParameterGap`], never filled with zero.
#[derive(Debug, Clone, Serialize)]
pub struct UnifacParameterTable {
    variant: UnifacVariant,
    groups: Vec<GroupDefinition>,
    #[serde(skip)]
    by_name: HashMap<String, usize>,
    #[serde(skip)]
    interactions: HashMap<(u32, u32), Interaction>,
}

impl UnifacParameterTable {
    /// Reads `groups.csv` (`id,name,main,R,Q[,pattern,priority]`) and
    /// `interactions.csv` (`main_m,main_n,a[,b,c]`).
    pub fn from_csv<G: Read, I: Read>(
        variant: UnifacVariant,
        groups: G,
        interactions: I,
    ) -> Result<Self, TableError> {
        let mut defs = Vec::new();
        let mut by_name = HashMap::new();
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(groups);
        for (row, rec) in rdr.deserialize::<GroupRow>().enumerate() {
            let rec = rec.map_err(|source| TableError::Csv {
                file: "groups.csv",
                source,
            })?;
            let bad = |message: String| TableError::Row {
                file: "groups.csv",
                row: row + 1,
                message,
            };
            if !(rec.r.is_finite() && rec.r > 0.0 && rec.q.is_finite() && rec.q >= 0.0) {
                return Err(bad(format!("group {} has invalid R/Q", rec.name)));
            }
            if by_name.insert(rec.name.clone(), defs.len()).is_some() {
                return Err(bad(format!("duplicate group name {}", rec.name)));
            }
            defs.push(GroupDefinition {
                id: rec.id,
                name: rec.name,
                main: rec.main,
                r: rec.r,
                q: rec.q,
                pattern: rec.pattern.filter(|p| !p.is_empty()),
                priority: rec.priority.unwrap_or(0),
            });
        }

        let mut table = HashMap::new();
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(interactions);
        for (row, rec) in rdr.deserialize::<InteractionRow>().enumerate() {
            let rec = rec.map_err(|source| TableError::Csv {
                file: "interactions.csv",
                source,
            })?;
            let bad = |message: String| TableError::Row {
                file: "interactions.csv",
                row: row + 1,
                message,
            };
            let b = rec.b.unwrap_or(0.0);
            let c = rec.c.unwrap_or(0.0);
            if ![rec.a, b, c].iter().all(|v| v.is_finite()) {
                return Err(bad("non-finite coefficient".into()));
            }
            if variant == UnifacVariant::Original && (b != 0.0 || c != 0.0) {
                return Err(bad("original UNIFAC takes only the a coefficient".into()));
            }
            if table
                .insert((rec.main_m, rec.main_n), Interaction { a: rec.a, b, c })
                .is_some()
            {
                return Err(bad(format!("duplicate pair ({}, {})", rec.main_m, rec.main_n)));
            }
        }
        Ok(Self {
            variant,
            groups: defs,
            by_name,
            interactions: table,
        })
    }

    pub fn variant(&self) -> UnifacVariant {
        self.variant
    }

    pub fn groups(&self) -> &[GroupDefinition] {
        &self.groups
    }

    pub fn group(&self, name: &str) -> Option<&GroupDefinition> {
        self.by_name.get(name).map(|&i| &self.groups[i])
    }

    /// Coefficients for main groups `m -> n`; same main group is the zero interaction.
    pub fn interaction(&self, m: u32, n: u32) -> Result<Interaction, ActivityError> {
        if m == n {
            return Ok(Interaction { a: 0.0, b: 0.0, c: 0.0 });
        }
        self.interactions
            .get(&(m, n))
            .copied()
            .ok_or(ActivityError::ParameterGap { main_m: m, main_n: n })
    }

    fn psi(&self, m: u32, n: u32, t: f64) -> Result<f64, ActivityError> {
        let i = self.interaction(m, n)?;
        let energy = match self.variant {
            UnifacVariant::Original => i.a,
            UnifacVariant::Modified => i.a + i.b * t + i.c * t * t,
        };
        Ok((-energy / t).exp())
    }
}

/// Per-pair data resolved against a table.
#[derive(Debug, Clone)]
struct PairData {
    /// Distinct groups present in either component.
    q: Vec<f64>,
    main: Vec<u32>,
    /// nu[i][k]
    nu: [Vec<f64>; 2],
    r: [f64; 2],
    q_mol: [f64; 2],
}

fn resolve_pair(groups: [&GroupCounts; 2], table: &UnifacParameterTable) -> Result<PairData, ActivityError> {
    let mut names: Vec<&str> = groups
        .iter()
        .flat_map(|g| g.keys().map(String::as_str))
        .collect();
    names.sort_unstable();
    names.dedup();
    let mut q = Vec::with_capacity(names.len());
    let mut main = Vec::with_capacity(names.len());
    let mut nu = [vec![0.0; names.len()], vec![0.0; names.len()]];
    let mut r = [0.0; 2];
    let mut q_mol = [0.0; 2];
    for (k, name) in names.iter().enumerate() {
        let def = table
            .group(name)
            .ok_or_else(|| ActivityError::MissingGroupData((*name).to_string()))?;
        q.push(def.q);
        main.push(def.main);
        for i in 0..2 {
            let count = groups[i].get(*name).copied().unwrap_or(0);
            nu[i][k] = f64::from(count);
            r[i] += nu[i][k] * def.r;
            q_mol[i] += nu[i][k] * def.q;
        }
    }
    for i in 0..2 {
        if groups[i].is_empty() || groups[i].values().any(|&c| c == 0) {
            return Err(ActivityError::InvalidParameters(format!(
                "component {} has an empty or zero group assignment",
                i + 1
            )));
        }
    }
    Ok(PairData { q, main, nu, r, q_mol })
}

fn combinatorial(data: &PairData, x1: f64, variant: UnifacVariant) -> (f64, f64) {
    let x = [x1, 1.0 - x1];
    let sum_r = x[0] * data.r[0] + x[1] * data.r[1];
    let sum_q = x[0] * data.q_mol[0] + x[1] * data.q_mol[1];
    let r34 = [data.r[0].powf(0.75), data.r[1].powf(0.75)];
    let sum_r34 = x[0] * r34[0] + x[1] * r34[1];
    let term = |i: usize| {
        let v = data.r[i] / sum_r;
        let f = data.q_mol[i] / sum_q;
        let v_prime = match variant {
            UnifacVariant::Original => v,
            UnifacVariant::Modified => r34[i] / sum_r34,
        };
        1.0 - v_prime + v_prime.ln() - 5.0 * data.q_mol[i] * (1.0 - v / f + (v / f).ln())
    };
    (term(0), term(1))
}

fn psi_matrix(data: &PairData, table: &UnifacParameterTable, t: f64) -> Result<Vec<Vec<f64>>, ActivityError> {
    let n = data.main.len();
    let mut psi = vec![vec![1.0; n]; n];
    for m in 0..n {
        for k in 0..n {
            psi[m][k] = table.psi(data.main[m], data.main[k], t)?;
        }
    }
    Ok(psi)
}

fn ln_big_gamma(data: &PairData, psi: &[Vec<f64>], x: [f64; 2]) -> Vec<f64> {
    let n = data.q.len();
    let total: f64 = (0..n).map(|k| x[0] * data.nu[0][k] + x[1] * data.nu[1][k]).sum();
    let group_x: Vec<f64> = (0..n)
        .map(|k| (x[0] * data.nu[0][k] + x[1] * data.nu[1][k]) / total)
        .collect();
    let area: f64 = (0..n).map(|k| data.q[k] * group_x[k]).sum();
    let theta: Vec<f64> = (0..n).map(|k| data.q[k] * group_x[k] / area).collect();
    let denom: Vec<f64> = (0..n)
        .map(|m| (0..n).map(|j| theta[j] * psi[j][m]).sum())
        .collect();
    (0..n)
        .map(|k| {
            let s: f64 = (0..n).map(|m| theta[m] * psi[k][m] / denom[m]).sum();
            data.q[k] * (1.0 - denom[k].ln() - s)
        })
        .collect()
}

fn residual(data: &PairData, psi: &[Vec<f64>], x1: f64) -> (f64, f64) {
    let mix = ln_big_gamma(data, psi, [x1, 1.0 - x1]);
    let pure = [
        ln_big_gamma(data, psi, [1.0, 0.0]),
        ln_big_gamma(data, psi, [0.0, 1.0]),
    ];
    let part = |i: usize| -> f64 {
        (0..mix.len())
            .filter(|&k| data.nu[i][k] > 0.0)
            .map(|k| data.nu[i][k] * (mix[k] - pure[i][k]))
            .sum()
    };
    (part(0), part(1))
}

/// Combinatorial contribution for a decomposed pair.
pub fn unifac_combinatorial(
    groups: [&GroupCounts; 2],
    table: &UnifacParameterTable,
    x1: f64,
    variant: UnifacVariant,
) -> Result<(f64, f64), ActivityError> {
    check_composition(x1)?;
    let data = resolve_pair(groups, table)?;
    Ok(combinatorial(&data, x1, variant))
}

/// Residual contribution for a decomposed pair.
pub fn unifac_residual(
    groups: [&GroupCounts; 2],
    table: &UnifacParameterTable,
    x1: f64,
    t: Kelvin,
) -> Result<(f64, f64), ActivityError> {
    check_composition(x1)?;
    check_temperature(t)?;
    let data = resolve_pair(groups, table)?;
    let psi = psi_matrix(&data, table, t.0)?;
    Ok(residual(&data, &psi, x1))
}

/// UNIFAC bound to a component pair.
#[derive(Debug, Clone)]
pub struct Unifac {
    name: String,
    table: Arc<UnifacParameterTable>,
    groups: [GroupCounts; 2],
    data: PairData,
}

impl Unifac {
    /// Fails with `MissingGroupData` or `ParameterGap` if the table cannot
    /// describe the pair.
    pub fn new(
        name: impl Into<String>,
        table: Arc<UnifacParameterTable>,
        groups: [GroupCounts; 2],
    ) -> Result<Self, ActivityError> {
        let data = resolve_pair([&groups[0], &groups[1]], &table)?;
        for &m in &data.main {
            for &n in &data.main {
                table.interaction(m, n)?;
            }
        }
        Ok(Self {
            name: name.into(),
            table,
            groups,
            data,
        })
    }

    pub fn variant(&self) -> UnifacVariant {
        self.table.variant()
    }

    pub fn groups(&self) -> &[GroupCounts; 2] {
        &self.groups
    }

    /// (combinatorial, residual) parts at one state.
    pub fn parts(&self, x1: f64, t: Kelvin) -> Result<((f64, f64), (f64, f64)), ActivityError> {
        check_composition(x1)?;
        check_temperature(t)?;
        let psi = psi_matrix(&self.data, &self.table, t.0)?;
        Ok((
            combinatorial(&self.data, x1, self.table.variant()),
            residual(&self.data, &psi, x1),
        ))
    }
}

impl ActivityModel for Unifac {
    fn name(&self) -> &str {
        &self.name
    }

    fn ln_gamma(&self, x1: f64, t: Kelvin) -> Result<(f64, f64), ActivityError> {
        let ((c1, c2), (r1, r2)) = self.parts(x1, t)?;
        let out = (c1 + r1, c2 + r2);
        if !(out.0.is_finite() && out.1.is_finite()) {
            return Err(ActivityError::NonFinite { x1 });
        }
        Ok(out)
    }

    fn swapped(&self) -> Option<Box<dyn ActivityModel>> {
        Unifac::new(
            self.name.clone(),
            self.table.clone(),
            [self.groups[1].clone(), self.groups[0].clone()],
        )
        .ok()
        .map(|m| Box::new(m) as Box<dyn ActivityModel>)
    }
}
