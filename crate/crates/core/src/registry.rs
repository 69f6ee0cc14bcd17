//! Components and the provider registry.
//!
//! Antoine constants are looked up through an ordered list of sources; the
//! first one that knows a component wins. Activity models are built by named
//! constructors (`"nrtl"`, `"unifac"`, `"unifac-modified"`, ...).

use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::activity::{
    ActivityError, ActivityModel, GroupCounts, Nrtl, NrtlParameterSet, NrtlVariant, Unifac,
    UnifacParameterTable, UnifacVariant,
};
use crate::adapter::{fetch_antoine, AdapterError, ExternalActivityModel, Transport};
use crate::antoine::AntoineParameterSet;
use crate::chem::{canonicalize, decompose_groups, parse_smiles, ParseError, SmilesWarning};
use crate::units::{Kelvin, PressureUnit};

const DEMO_ANTOINE: &str = include_str!("../data/antoine_demo.csv");
const DEMO_NRTL: &str = include_str!("../data/nrtl_pairs.csv");
const DEMO_GROUPS: &str = include_str!("../data/unifac_groups.csv");
const DEMO_INTERACTIONS: &str = include_str!("../data/unifac_interactions.csv");
const DEMO_MOD_GROUPS: &str = include_str!("../data/unifac_mod_groups.csv");
const DEMO_MOD_INTERACTIONS: &str = include_str!("../data/unifac_mod_interactions.csv");

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RegistryError {
    #[error("invalid SMILES: {0}")]
    InvalidSmiles(#[from] ParseError),
    #[error("no source covers {smiles}")]
    NotCovered { smiles: String },
    #[error("unknown activity model `{0}`")]
    UnknownModel(String),
    #[error("{smiles} has no group assignment for {model}")]
    DecompositionRequired { smiles: String, model: String },
    #[error(transparent)]
    Activity(#[from] ActivityError),
    #[error(transparent)]
    Remote(#[from] AdapterError),
    #[error("bad parameter table: {0}")]
    Table(String),
}

/// A registered chemical species.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub input_smiles: String,
    pub canonical_smiles: String,
    pub name: Option<String>,
    pub groups: Option<GroupCounts>,
    pub antoine: Option<AntoineParameterSet>,
    pub warnings: Vec<SmilesWarning>,
}

/// Somewhere Antoine constants can come from.
pub trait AntoineSource: Send + Sync + fmt::Debug {
    fn label(&self) -> &str;

    /// `Ok(None)` when the source does not know the component.
    fn lookup(&self, canonical_smiles: &str) -> Result<Option<AntoineParameterSet>, AdapterError>;

    fn name_of(&self, _canonical_smiles: &str) -> Option<String> {
        None
    }
}

/// Builds an activity model for a component pair.
pub trait ActivitySource: Send + Sync + fmt::Debug {
    fn description(&self) -> String;

    fn build(&self, model_name: &str, pair: [&Component; 2]) -> Result<Arc<dyn ActivityModel>, RegistryError>;
}

#[derive(Debug, Deserialize)]
struct AntoineRow {
    smiles: String,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: f64,
    #[serde(rename = "C")]
    c: f64,
    #[serde(rename = "t_min_K")]
    t_min: f64,
    #[serde(rename = "t_max_K")]
    t_max: f64,
    p_unit: String,
    #[serde(default)]
    name: Option<String>,
}

#[derive(Debug, Clone)]
struct AntoineEntry {
    params: AntoineParameterSet,
    name: Option<String>,
}

/// Antoine constants read from a CSV file, keyed by canonical SMILES.
#[derive(Debug, Clone)]
pub struct AntoineTable {
    label: String,
    entries: HashMap<String, AntoineEntry>,
}

impl AntoineTable {
    /// Reads `smiles,A,B,C,t_min_K,t_max_K,p_unit[,name]`.
    pub fn from_csv<R: Read>(label: impl Into<String>, reader: R) -> Result<Self, RegistryError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut entries = HashMap::new();
        for (line, row) in rdr.deserialize::<AntoineRow>().enumerate() {
            let row_no = line + 2;
            let row = row.map_err(|e| RegistryError::Table(format!("row {row_no}: {e}")))?;
            let graph = parse_smiles(&row.smiles)
                .map_err(|e| RegistryError::Table(format!("row {row_no}: {e}")))?
                .graph;
            let unit: PressureUnit = row
                .p_unit
                .parse()
                .map_err(|e| RegistryError::Table(format!("row {row_no}: {e}")))?;
            let params = AntoineParameterSet::new(
                row.a,
                row.b,
                row.c,
                Kelvin(row.t_min),
                Kelvin(row.t_max),
                unit,
            )
            .map_err(|e| RegistryError::Table(format!("row {row_no}: {e}")))?;
            let key = canonicalize(&graph);
            let name = row.name.filter(|n| !n.is_empty());
            if entries.insert(key.clone(), AntoineEntry { params, name }).is_some() {
                return Err(RegistryError::Table(format!("row {row_no}: duplicate entry for {key}")));
            }
        }
        Ok(Self {
            label: label.into(),
            entries,
        })
    }

    /// The bundled demonstration table.
    pub fn demo() -> Self {
        Self::from_csv("demo", DEMO_ANTOINE.as_bytes()).expect("bundled Antoine table is valid")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, canonical_smiles: &str) -> Option<&AntoineParameterSet> {
        self.entries.get(canonical_smiles).map(|e| &e.params)
    }
}

impl AntoineSource for AntoineTable {
    fn label(&self) -> &str {
        &self.label
    }

    fn lookup(&self, canonical_smiles: &str) -> Result<Option<AntoineParameterSet>, AdapterError> {
        Ok(self.get(canonical_smiles).copied())
    }

    fn name_of(&self, canonical_smiles: &str) -> Option<String> {
        self.entries.get(canonical_smiles)?.name.clone()
    }
}

/// Antoine constants served by a remote model.
#[derive(Debug, Clone)]
pub struct ExternalAntoineSource {
    label: String,
    transport: Arc<dyn Transport>,
}

impl ExternalAntoineSource {
    pub fn new(label: impl Into<String>, transport: Arc<dyn Transport>) -> Self {
        Self {
            label: label.into(),
            transport,
        }
    }
}

impl AntoineSource for ExternalAntoineSource {
    fn label(&self) -> &str {
        &self.label
    }

    fn lookup(&self, canonical_smiles: &str) -> Result<Option<AntoineParameterSet>, AdapterError> {
        fetch_antoine(self.transport.as_ref(), canonical_smiles)
    }
}

#[derive(Debug, Deserialize)]
struct NrtlRow {
    smiles1: String,
    smiles2: String,
    variant: u8,
    a12: f64,
    a21: f64,
    b12: f64,
    b21: f64,
    e12: f64,
    e21: f64,
    f12: f64,
    f21: f64,
    c12: f64,
    d12: f64,
}

/// Stored NRTL parameters per ordered pair; looking up the reverse order
/// returns the swapped set.
#[derive(Debug, Clone, Default)]
pub struct NrtlPairTable {
    pairs: HashMap<(String, String), NrtlParameterSet>,
}

impl NrtlPairTable {
    /// Reads `smiles1,smiles2,variant,a12,a21,b12,b21,e12,e21,f12,f21,c12,d12`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, RegistryError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut table = Self::default();
        for (line, row) in rdr.deserialize::<NrtlRow>().enumerate() {
            let row_no = line + 2;
            let bad = |m: String| RegistryError::Table(format!("row {row_no}: {m}"));
            let row = row.map_err(|e| bad(e.to_string()))?;
            let variant = NrtlVariant::try_from(row.variant).map_err(bad)?;
            let params = NrtlParameterSet {
                a12: row.a12,
                a21: row.a21,
                b12: row.b12,
                b21: row.b21,
                e12: row.e12,
                e21: row.e21,
                f12: row.f12,
                f21: row.f21,
                c12: row.c12,
                d12: row.d12,
                variant,
            };
            params.validate().map_err(|e| bad(e.to_string()))?;
            let k1 = canonicalize(&parse_smiles(&row.smiles1).map_err(|e| bad(e.to_string()))?.graph);
            let k2 = canonicalize(&parse_smiles(&row.smiles2).map_err(|e| bad(e.to_string()))?.graph);
            table.insert(k1, k2, params).map_err(bad)?;
        }
        Ok(table)
    }

    pub fn demo() -> Self {
        Self::from_csv(DEMO_NRTL.as_bytes()).expect("bundled NRTL pairs are valid")
    }

    /// Keys must be canonical SMILES.
    pub fn insert(&mut self, smiles1: String, smiles2: String, params: NrtlParameterSet) -> Result<(), String> {
        let reverse = (smiles2.clone(), smiles1.clone());
        if self.pairs.contains_key(&reverse) || self.pairs.contains_key(&(smiles1.clone(), smiles2.clone())) {
            return Err(format!("duplicate pair {smiles1} / {smiles2}"));
        }
        self.pairs.insert((smiles1, smiles2), params);
        Ok(())
    }

    pub fn get(&self, smiles1: &str, smiles2: &str) -> Option<NrtlParameterSet> {
        if let Some(p) = self.pairs.get(&(smiles1.to_owned(), smiles2.to_owned())) {
            return Some(*p);
        }
        self.pairs
            .get(&(smiles2.to_owned(), smiles1.to_owned()))
            .map(NrtlParameterSet::swapped)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl ActivitySource for NrtlPairTable {
    fn description(&self) -> String {
        format!("NRTL with stored pair parameters ({} pairs)", self.len())
    }

    fn build(&self, model_name: &str, pair: [&Component; 2]) -> Result<Arc<dyn ActivityModel>, RegistryError> {
        let (s1, s2) = (&pair[0].canonical_smiles, &pair[1].canonical_smiles);
        let params = self.get(s1, s2).ok_or_else(|| RegistryError::NotCovered {
            smiles: format!("{s1} / {s2}"),
        })?;
        Ok(Arc::new(Nrtl::named(model_name, params)?))
    }
}

/// UNIFAC of either variant over one parameter table.
#[derive(Debug, Clone)]
pub struct UnifacSource {
    table: Arc<UnifacParameterTable>,
}

impl UnifacSource {
    pub fn new(table: Arc<UnifacParameterTable>) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &Arc<UnifacParameterTable> {
        &self.table
    }

    fn groups_for(&self, c: &Component, model_name: &str) -> Result<GroupCounts, RegistryError> {
        let required = || RegistryError::DecompositionRequired {
            smiles: c.canonical_smiles.clone(),
            model: model_name.to_owned(),
        };
        let assigned = c.groups.as_ref().ok_or_else(required)?;
        if assigned.keys().all(|g| self.table.group(g).is_some()) {
            return Ok(assigned.clone());
        }
        // assigned against another table; redo it against ours
        let graph = parse_smiles(&c.canonical_smiles)?.graph;
        decompose_groups(&graph, &self.table).map_err(|_| required())
    }
}

impl ActivitySource for UnifacSource {
    fn description(&self) -> String {
        match self.table.variant() {
            UnifacVariant::Original => "UNIFAC (original)".into(),
            UnifacVariant::Modified => "modified UNIFAC (Dortmund)".into(),
        }
    }

    fn build(&self, model_name: &str, pair: [&Component; 2]) -> Result<Arc<dyn ActivityModel>, RegistryError> {
        let g1 = self.groups_for(pair[0], model_name)?;
        let g2 = self.groups_for(pair[1], model_name)?;
        Ok(Arc::new(Unifac::new(model_name, self.table.clone(), [g1, g2])?))
    }
}

/// Activity coefficients from a remote model.
#[derive(Debug, Clone)]
pub struct ExternalActivitySource {
    transport: Arc<dyn Transport>,
}

impl ExternalActivitySource {
    pub fn new(transport: Arc<dyn Transport>) -> Self {
        Self { transport }
    }
}

impl ActivitySource for ExternalActivitySource {
    fn description(&self) -> String {
        "external activity model".into()
    }

    fn build(&self, model_name: &str, pair: [&Component; 2]) -> Result<Arc<dyn ActivityModel>, RegistryError> {
        Ok(Arc::new(ExternalActivityModel::new(
            model_name,
            [pair[0].canonical_smiles.clone(), pair[1].canonical_smiles.clone()],
            self.transport.clone(),
        )))
    }
}

/// Listing entry for one activity model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelInfo {
    pub name: String,
    pub description: String,
}

#[derive(Debug, Clone, Default)]
pub struct ProviderRegistry {
    antoine_sources: Vec<Arc<dyn AntoineSource>>,
    activity_sources: Vec<(String, Arc<dyn ActivitySource>)>,
    group_table: Option<Arc<UnifacParameterTable>>,
}

impl ProviderRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a source; earlier sources take precedence.
    pub fn with_antoine_source(mut self, source: Arc<dyn AntoineSource>) -> Self {
        self.antoine_sources.push(source);
        self
    }

    /// Registers (or replaces) a named activity model constructor.
    pub fn with_activity_source(mut self, name: impl Into<String>, source: Arc<dyn ActivitySource>) -> Self {
        let name = name.into();
        match self.activity_sources.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = source,
            None => self.activity_sources.push((name, source)),
        }
        self
    }

    /// Table used to assign groups when components are registered.
    pub fn with_group_table(mut self, table: Arc<UnifacParameterTable>) -> Self {
        self.group_table = Some(table);
        self
    }

    pub fn antoine_sources(&self) -> &[Arc<dyn AntoineSource>] {
        &self.antoine_sources
    }

    pub fn group_table(&self) -> Option<&Arc<UnifacParameterTable>> {
        self.group_table.as_ref()
    }

    pub fn models(&self) -> Vec<ModelInfo> {
        self.activity_sources
            .iter()
            .map(|(name, src)| ModelInfo {
                name: name.clone(),
                description: src.description(),
            })
            .collect()
    }

    /// Bundled demo data: Antoine table, NRTL pairs as `nrtl` / `nrtl-demo`,
    /// and both UNIFAC variants.
    pub fn demo() -> Self {
        let original = Arc::new(demo_unifac_table(UnifacVariant::Original));
        let modified = Arc::new(demo_unifac_table(UnifacVariant::Modified));
        let pairs: Arc<dyn ActivitySource> = Arc::new(NrtlPairTable::demo());
        Self::new()
            .with_antoine_source(Arc::new(AntoineTable::demo()))
            .with_activity_source("nrtl", pairs.clone())
            .with_activity_source("nrtl-demo", pairs)
            .with_activity_source("unifac", Arc::new(UnifacSource::new(original.clone())))
            .with_activity_source("unifac-modified", Arc::new(UnifacSource::new(modified)))
            .with_group_table(original)
    }
}

/// One of the bundled demonstration UNIFAC tables.
pub fn demo_unifac_table(variant: UnifacVariant) -> UnifacParameterTable {
    let (g, i) = match variant {
        UnifacVariant::Original => (DEMO_GROUPS, DEMO_INTERACTIONS),
        UnifacVariant::Modified => (DEMO_MOD_GROUPS, DEMO_MOD_INTERACTIONS),
    };
    UnifacParameterTable::from_csv(variant, g.as_bytes(), i.as_bytes()).expect("bundled UNIFAC table is valid")
}

/// Parses, canonicalizes and looks up whatever the registry knows about `smiles`.
pub fn register_component(smiles: &str, registry: &ProviderRegistry) -> Result<Component, RegistryError> {
    let parsed = parse_smiles(smiles)?;
    let canonical = canonicalize(&parsed.graph);
    let groups = registry
        .group_table
        .as_ref()
        .and_then(|t| decompose_groups(&parsed.graph, t).ok());
    let mut antoine = None;
    let mut name = None;
    for source in &registry.antoine_sources {
        if let Ok(Some(p)) = source.lookup(&canonical) {
            antoine = Some(p);
            name = source.name_of(&canonical);
            break;
        }
    }
    Ok(Component {
        input_smiles: smiles.to_owned(),
        canonical_smiles: canonical,
        name,
        groups,
        antoine,
        warnings: parsed.warnings,
    })
}

/// First source that covers the component. Unreachable remotes are skipped;
/// a remote that answers with invalid data is an error.
pub fn resolve_antoine(c: &Component, registry: &ProviderRegistry) -> Result<AntoineParameterSet, RegistryError> {
    for source in &registry.antoine_sources {
        match source.lookup(&c.canonical_smiles) {
            Ok(Some(p)) => return Ok(p),
            Ok(None) | Err(AdapterError::RemoteUnavailable(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(RegistryError::NotCovered {
        smiles: c.canonical_smiles.clone(),
    })
}

pub fn resolve_activity_model(
    name: &str,
    pair: [&Component; 2],
    registry: &ProviderRegistry,
) -> Result<Arc<dyn ActivityModel>, RegistryError> {
    let (_, source) = registry
        .activity_sources
        .iter()
        .find(|(n, _)| n == name)
        .ok_or_else(|| RegistryError::UnknownModel(name.to_owned()))?;
    source.build(name, pair)
}
