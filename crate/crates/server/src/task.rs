//! One request schema for every task, shared by the HTTP and command line paths.

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;

use thermoprop::activity::{activity_curve, ActivityCurve, NrtlVariant};
use thermoprop::antoine::{boiling_temperature, range_check, vapor_pressure, AntoineWarning};
use thermoprop::export::{activity_csv, fit_csv, saturation_csv, vle_csv};
use thermoprop::fit::{
    build_fit_grid, fit_nrtl, predict_targets, reconstruct_curves, FitGrid, FitOptions, FitResult, FitTemperatures,
};
use thermoprop::registry::{register_component, resolve_activity_model, resolve_antoine, Component, ProviderRegistry};
use thermoprop::units::{Kelvin, Pascal, StateSpec};
use thermoprop::vle::{build_diagram, BinarySystem, VleDiagram, GRID_STEP};

use crate::error::ApiError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    VaporPressure,
    BoilingTemperature,
    Activity,
    Vle,
    NrtlFit,
}

impl Task {
    pub fn arity(self) -> usize {
        match self {
            Task::VaporPressure | Task::BoilingTemperature => 1,
            Task::Activity | Task::Vle | Task::NrtlFit => 2,
        }
    }
}

/// Task parameters; the body of every task endpoint.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TaskInput {
    /// A single string is accepted for pure-component tasks.
    #[serde(deserialize_with = "one_or_many")]
    pub smiles: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(rename = "T_K", default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(rename = "p_Pa", default, skip_serializing_if = "Option::is_none")]
    pub pressure: Option<f64>,
    #[serde(rename = "T_range_K", default, skip_serializing_if = "Option::is_none")]
    pub temperature_range: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<NrtlVariant>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRequest {
    pub task: Task,
    #[serde(flatten)]
    pub input: TaskInput,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(String),
        Many(Vec<String>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    })
}

/// Saturation state of one pure component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturationPoint {
    pub smiles: String,
    pub name: Option<String>,
    #[serde(rename = "T_K")]
    pub temperature: Kelvin,
    #[serde(rename = "p_Pa")]
    pub pressure: Pascal,
    pub warnings: Vec<AntoineWarning>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutput {
    #[serde(flatten)]
    pub result: FitResult,
    pub source_model: String,
    pub grid: FitGrid,
    pub targets: Vec<ActivityCurve>,
    pub fitted: Vec<ActivityCurve>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TaskOutput {
    Saturation(SaturationPoint),
    Activity(ActivityCurve),
    Vle(VleDiagram),
    Fit(Box<FitOutput>),
}

impl TaskOutput {
    pub fn to_json(&self) -> Value {
        match self {
            TaskOutput::Saturation(s) => serde_json::to_value(s),
            TaskOutput::Activity(c) => serde_json::to_value(c),
            TaskOutput::Vle(d) => serde_json::to_value(d),
            TaskOutput::Fit(f) => serde_json::to_value(f),
        }
        .expect("task output serializes")
    }

    pub fn to_csv(&self) -> String {
        match self {
            TaskOutput::Saturation(s) => saturation_csv(&s.smiles, s.temperature, s.pressure),
            TaskOutput::Activity(c) => activity_csv(std::slice::from_ref(c)),
            TaskOutput::Vle(d) => vle_csv(d),
            TaskOutput::Fit(f) => fit_csv(&f.result, &f.grid, &f.targets),
        }
    }
}

/// Parses and registers one SMILES string.
pub fn validate_smiles(smiles: &str, registry: &ProviderRegistry) -> Result<Component, ApiError> {
    Ok(register_component(smiles, registry)?)
}

impl TaskRequest {
    /// Shape checks that do not need any model: arity, state and stray fields.
    pub fn check(&self) -> Result<(), ApiError> {
        let i = &self.input;
        let stray = |field: &str| Err(ApiError::input("unexpected_field", format!("`{field}` does not apply to this task")));
        let missing = |field: &str| Err(ApiError::input("missing_field", format!("`{field}` is required")));
        match self.task {
            Task::VaporPressure | Task::Activity => {
                if i.temperature.is_none() {
                    return missing("T_K");
                }
                if i.pressure.is_some() {
                    return stray("p_Pa");
                }
            }
            Task::BoilingTemperature => {
                if i.pressure.is_none() {
                    return missing("p_Pa");
                }
                if i.temperature.is_some() {
                    return stray("T_K");
                }
            }
            Task::Vle => {
                if i.temperature.is_some() == i.pressure.is_some() {
                    return Err(ApiError::input("state", "give exactly one of `T_K` and `p_Pa`"));
                }
            }
            Task::NrtlFit => {
                if i.temperature.is_some() == i.temperature_range.is_some() {
                    return Err(ApiError::input("state", "give exactly one of `T_K` and `T_range_K`"));
                }
                if i.pressure.is_some() {
                    return stray("p_Pa");
                }
            }
        }
        if self.task != Task::NrtlFit {
            if i.temperature_range.is_some() {
                return stray("T_range_K");
            }
            if i.variant.is_some() {
                return stray("variant");
            }
        }
        if self.task == Task::NrtlFit {
            build_fit_grid(i.variant.unwrap_or(NrtlVariant::Three), fit_temperatures(i))?;
        }
        let n = self.task.arity();
        if i.smiles.len() != n {
            return Err(ApiError::input(
                "component_count",
                format!("this task takes {n} component(s), got {}", i.smiles.len()),
            ));
        }
        if n == 1 && i.model.is_some() {
            return stray("model");
        }
        if n == 2 && i.model.is_none() {
            return missing("model");
        }
        Ok(())
    }
}

fn fit_temperatures(i: &TaskInput) -> FitTemperatures {
    match (i.temperature, i.temperature_range) {
        (_, Some([lo, hi])) => FitTemperatures::Range(Kelvin(lo), Kelvin(hi)),
        (t, None) => FitTemperatures::Single(Kelvin(t.unwrap_or(f64::NAN))),
    }
}

/// Runs one task against `registry`.
pub fn run_task(request: &TaskRequest, registry: &ProviderRegistry) -> Result<TaskOutput, ApiError> {
    request.check()?;
    let i = &request.input;
    let components = i
        .smiles
        .iter()
        .map(|s| register_component(s, registry))
        .collect::<Result<Vec<_>, _>>()?;
    match request.task {
        Task::VaporPressure => {
            let c = &components[0];
            let params = resolve_antoine(c, registry)?;
            let t = Kelvin(i.temperature.expect("checked"));
            let p = vapor_pressure(&params, t)?;
            Ok(TaskOutput::Saturation(SaturationPoint {
                smiles: c.canonical_smiles.clone(),
                name: c.name.clone(),
                temperature: t,
                pressure: p,
                warnings: range_check(&params, t),
            }))
        }
        Task::BoilingTemperature => {
            let c = &components[0];
            let params = resolve_antoine(c, registry)?;
            let p = Pascal(i.pressure.expect("checked"));
            let t = boiling_temperature(&params, p)?;
            Ok(TaskOutput::Saturation(SaturationPoint {
                smiles: c.canonical_smiles.clone(),
                name: c.name.clone(),
                temperature: t,
                pressure: p,
                warnings: range_check(&params, t),
            }))
        }
        Task::Activity => {
            let model = resolve_activity_model(i.model.as_deref().expect("checked"), [&components[0], &components[1]], registry)?;
            let t = StateSpec::isothermal(Kelvin(i.temperature.expect("checked")))?;
            Ok(TaskOutput::Activity(activity_curve(model.as_ref(), Kelvin(t.fixed_value()), GRID_STEP)?))
        }
        Task::Vle => {
            let pair = [&components[0], &components[1]];
            let state = match (i.temperature, i.pressure) {
                (Some(t), None) => StateSpec::isothermal(Kelvin(t))?,
                (None, Some(p)) => StateSpec::isobaric(Pascal(p))?,
                _ => unreachable!("checked"),
            };
            let model = resolve_activity_model(i.model.as_deref().expect("checked"), pair, registry)?;
            let sys = BinarySystem::new(resolve_antoine(pair[0], registry)?, resolve_antoine(pair[1], registry)?, model);
            Ok(TaskOutput::Vle(build_diagram(&state, &sys)?))
        }
        Task::NrtlFit => {
            let name = i.model.as_deref().expect("checked");
            let model = resolve_activity_model(name, [&components[0], &components[1]], registry)?;
            let grid = build_fit_grid(i.variant.unwrap_or(NrtlVariant::Three), fit_temperatures(i))?;
            let targets = predict_targets(model.as_ref(), &grid)?;
            let result = fit_nrtl(&targets, &grid, &FitOptions::default())?;
            let fitted = reconstruct_curves(&result.params, &grid)?;
            Ok(TaskOutput::Fit(Box::new(FitOutput {
                result,
                source_model: name.to_owned(),
                grid,
                targets,
                fitted,
            })))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(task: Task, json: Value) -> TaskRequest {
        TaskRequest {
            task,
            input: serde_json::from_value(json).unwrap(),
        }
    }

    #[test]
    fn single_smiles_string_is_accepted() {
        let r = req(Task::VaporPressure, serde_json::json!({"smiles": "CCO", "T_K": 350.0}));
        assert_eq!(r.input.smiles, ["CCO"]);
        r.check().unwrap();
    }

    #[test]
    fn variant_is_a_number() {
        let r = req(Task::NrtlFit, serde_json::json!({"smiles": ["CCO", "O"], "model": "unifac", "variant": 6, "T_range_K": [300.0, 350.0]}));
        assert_eq!(r.input.variant, Some(NrtlVariant::Six));
        assert!(serde_json::from_value::<TaskInput>(serde_json::json!({"smiles": "C", "variant": 4})).is_err());
    }

    #[test]
    fn shape_errors() {
        let code = |t, j| req(t, j).check().unwrap_err().code;
        assert_eq!(code(Task::Vle, serde_json::json!({"smiles": ["C"], "model": "nrtl", "T_K": 300.0})), "component_count");
        assert_eq!(code(Task::Vle, serde_json::json!({"smiles": ["C", "CC"], "model": "nrtl"})), "state");
        assert_eq!(
            code(Task::Vle, serde_json::json!({"smiles": ["C", "CC"], "model": "nrtl", "T_K": 300.0, "p_Pa": 1e5})),
            "state"
        );
        assert_eq!(code(Task::Activity, serde_json::json!({"smiles": ["C", "CC"], "T_K": 300.0})), "missing_field");
        assert_eq!(code(Task::VaporPressure, serde_json::json!({"smiles": "C", "T_K": 300.0, "model": "x"})), "unexpected_field");
    }

    #[test]
    fn range_with_three_parameters_is_forbidden() {
        let r = req(
            Task::NrtlFit,
            serde_json::json!({"smiles": ["CCCCCC", "CCO"], "model": "unifac", "variant": 3, "T_range_K": [300.0, 400.0]}),
        );
        let e = run_task(&r, &ProviderRegistry::demo()).unwrap_err();
        assert_eq!((e.code.as_str(), e.module.as_str()), ("range_forbidden", "fit"));
    }

    #[test]
    fn vapor_pressure_of_ethanol() {
        let r = req(Task::VaporPressure, serde_json::json!({"smiles": "OCC", "T_K": 351.4}));
        let TaskOutput::Saturation(s) = run_task(&r, &ProviderRegistry::demo()).unwrap() else {
            panic!("wrong output kind")
        };
        assert_eq!(s.smiles, "CCO");
        assert!((s.pressure.0 - 101_325.0).abs() < 3_000.0, "{}", s.pressure.0);
        let csv = TaskOutput::Saturation(s).to_csv();
        assert!(csv.starts_with("smiles,T_K,p_Pa\nCCO,351.4,"));
    }
}
