//! Client-facing error shape shared by the HTTP service and the CLI.

use serde::Serialize;
use serde_json::Value;

use thermoprop::activity::ActivityError;
use thermoprop::adapter::AdapterError;
use thermoprop::antoine::AntoineError;
use thermoprop::chem::ParseError;
use thermoprop::fit::FitError;
use thermoprop::registry::RegistryError;
use thermoprop::units::StateError;
use thermoprop::vle::VleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The request itself cannot be served as stated.
    Input,
    /// Body is not a well-formed request.
    Malformed,
    /// A remote model failed or misbehaved.
    Remote,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub class: ErrorClass,
    pub code: String,
    pub module: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl ApiError {
    pub fn new(class: ErrorClass, code: &str, module: &str, message: impl Into<String>) -> Self {
        Self {
            class,
            code: code.to_owned(),
            module: module.to_owned(),
            message: message.into(),
            offset: None,
            details: None,
        }
    }

    pub fn input(code: &str, message: impl Into<String>) -> Self {
        Self::new(ErrorClass::Input, code, "api", message)
    }

    pub fn status(&self) -> u16 {
        match self.class {
            ErrorClass::Input => 422,
            ErrorClass::Malformed => 400,
            ErrorClass::Remote => 502,
            ErrorClass::Internal => 500,
        }
    }

    /// Exit code of the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Input | ErrorClass::Malformed => 2,
            ErrorClass::Remote | ErrorClass::Internal => 1,
        }
    }

    /// `{"error": {...}}`
    pub fn to_json(&self) -> Value {
        serde_json::json!({ "error": self })
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} [{}/{}]", self.message, self.module, self.code)
    }
}

impl std::error::Error for ApiError {}

impl From<ParseError> for ApiError {
    fn from(e: ParseError) -> Self {
        let mut err = Self::new(ErrorClass::Input, "invalid_smiles", "chem", e.to_string());
        err.offset = Some(e.offset);
        err.details = serde_json::to_value(&e.kind).ok();
        err
    }
}

impl From<AdapterError> for ApiError {
    fn from(e: AdapterError) -> Self {
        let code = match e {
            AdapterError::RemoteUnavailable(_) => "remote_unavailable",
            AdapterError::ContractViolation(_) => "contract_violation",
        };
        Self::new(ErrorClass::Remote, code, "adapter", e.to_string())
    }
}

impl From<ActivityError> for ApiError {
    fn from(e: ActivityError) -> Self {
        let mut inner = &e;
        while let ActivityError::AtComposition { source, .. } = inner {
            inner = source;
        }
        let code = match inner {
            ActivityError::Remote(r) => {
                let mut err = ApiError::from(r.clone());
                err.message = e.to_string();
                return err;
            }
            ActivityError::AlphaOutOfRange { .. } => "alpha_out_of_range",
            ActivityError::MissingGroupData(_) => "missing_group_data",
            ActivityError::ParameterGap { .. } => "parameter_gap",
            ActivityError::InvalidComposition(_) => "invalid_composition",
            ActivityError::InvalidTemperature(_) => "invalid_temperature",
            ActivityError::InvalidParameters(_) => "invalid_parameters",
            ActivityError::NonFinite { .. } => "non_finite",
            ActivityError::GridSpacing(_) => "grid_spacing",
            ActivityError::InvalidCurve(_) => "invalid_curve",
            ActivityError::AtComposition { .. } => unreachable!("unwrapped above"),
        };
        Self::new(ErrorClass::Input, code, "activity", e.to_string())
    }
}

impl From<AntoineError> for ApiError {
    fn from(e: AntoineError) -> Self {
        let code = match e {
            AntoineError::InvalidParameters(_) => "invalid_parameters",
            AntoineError::SingularTemperature(_) => "singular_temperature",
            AntoineError::SingularPressure(_) => "singular_pressure",
            AntoineError::NonPhysical(_) => "non_physical",
            AntoineError::NonPositive(_) => "non_positive",
        };
        Self::new(ErrorClass::Input, code, "antoine", e.to_string())
    }
}

impl From<StateError> for ApiError {
    fn from(e: StateError) -> Self {
        let code = match e {
            StateError::Temperature(_) => "invalid_temperature",
            StateError::Pressure(_) => "invalid_pressure",
        };
        Self::new(ErrorClass::Input, code, "units", e.to_string())
    }
}

impl From<RegistryError> for ApiError {
    fn from(e: RegistryError) -> Self {
        let code = match e {
            RegistryError::InvalidSmiles(p) => return p.into(),
            RegistryError::Activity(a) => return a.into(),
            RegistryError::Remote(r) => return r.into(),
            RegistryError::NotCovered { .. } => "not_covered",
            RegistryError::UnknownModel(_) => "unknown_model",
            RegistryError::DecompositionRequired { .. } => "decomposition_required",
            RegistryError::Table(_) => "bad_table",
        };
        Self::new(ErrorClass::Input, code, "registry", e.to_string())
    }
}

impl From<VleError> for ApiError {
    fn from(e: VleError) -> Self {
        let (code, details) = match &e {
            VleError::Activity(a) => return a.clone().into(),
            VleError::Antoine(a) => return a.clone().into(),
            VleError::NoConvergence { .. } => ("no_convergence", None),
            VleError::BracketFailure { .. } => ("bracket_failure", None),
            VleError::PointFailures(failures) => {
                if let Some(f) = failures.first() {
                    if let VleError::Activity(ActivityError::Remote(_)) = f.error.as_ref() {
                        let mut err = ApiError::from((*f.error).clone());
                        err.message = e.to_string();
                        return err;
                    }
                }
                let at: Vec<Value> = failures
                    .iter()
                    .map(|f| serde_json::json!({"line": f.line, "composition": f.composition, "error": f.error.to_string()}))
                    .collect();
                ("point_failures", Some(Value::Array(at)))
            }
            VleError::ConsistencyViolation(report) => (
                "consistency_violation",
                Some(serde_json::json!({ "failed_checks": report.failed_names(), "report": report })),
            ),
        };
        let mut err = Self::new(ErrorClass::Input, code, "vle", e.to_string());
        err.details = details;
        err
    }
}

impl From<FitError> for ApiError {
    fn from(e: FitError) -> Self {
        let code = match e {
            FitError::Activity(a) => return a.into(),
            FitError::RangeRequired(_) => "range_required",
            FitError::RangeForbidden => "range_forbidden",
            FitError::InvalidRange { .. } => "invalid_range",
            FitError::GridMismatch(_) => "grid_mismatch",
            FitError::AllStartsFailed => "all_starts_failed",
            FitError::InvalidOptions(_) => "invalid_options",
        };
        Self::new(ErrorClass::Input, code, "fit", e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use thermoprop::chem::parse_smiles;

    #[test]
    fn parse_error_keeps_offset() {
        let e: ApiError = parse_smiles("C(").unwrap_err().into();
        assert_eq!(e.code, "invalid_smiles");
        assert_eq!(e.module, "chem");
        assert_eq!(e.status(), 422);
        assert!(e.offset.is_some());
    }

    #[test]
    fn nested_activity_error_reports_inner_code() {
        let e = ActivityError::AtComposition {
            x1: 0.5,
            source: Box::new(ActivityError::ParameterGap { main_m: 1, main_n: 7 }),
        };
        let api: ApiError = e.into();
        assert_eq!(api.code, "parameter_gap");
        assert!(api.message.contains("0.5"));
    }

    #[test]
    fn remote_failures_are_not_input_errors() {
        let api: ApiError = ActivityError::Remote(AdapterError::ContractViolation("x".into())).into();
        assert_eq!((api.code.as_str(), api.status(), api.exit_code()), ("contract_violation", 502, 1));
    }
}
