//! Scenario documents, the solve / validate / export commands, and their reports.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::aggregated::{solve_aggregated_detailed, AggregatedCoefficients, Candidate};
use crate::closed_form::{coefficients_complete, omega, solve_basic_with, SolveOptions};
use crate::error::{Error, Result};
use crate::model::{validate, AggregatedParams, CostParams, GenericCoefficients, ProductionParams, Solution};
use crate::numeric::format_significant;
use crate::optimizer::{minimize_2d, DEFAULT_TOL, NESTED_TOL};
use crate::trajectory::{exact_cost_aggregated, exact_cost_basic, sample_trajectory, write_csv, TrajectoryModel};

/// Significant digits of every number in a report.
pub const REPORT_DIGITS: usize = 6;
/// Samples per cycle when neither the caller nor the scenario sets a step.
pub const DEFAULT_SAMPLES_PER_CYCLE: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Basic,
    Aggregated,
}

/// Central-plant block of an aggregated scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentralBlock {
    pub n: u32,
    #[serde(rename = "K_c")]
    pub k_c: f64,
    pub c_v: f64,
    pub h_c: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioOptions {
    /// Trajectory sampling step.
    pub step: Option<f64>,
    /// Minimizer tolerance.
    pub tol: Option<f64>,
    #[serde(default)]
    pub force_partial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub model: ModelKind,
    pub production: ProductionParams,
    pub costs: CostParams,
    #[serde(default)]
    pub aggregated: Option<CentralBlock>,
    #[serde(default)]
    pub options: ScenarioOptions,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        let scenario: Scenario = serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        match (scenario.model, scenario.aggregated.is_some()) {
            (ModelKind::Basic, true) => Err(Error::Scenario("basic model takes no aggregated block".into())),
            (ModelKind::Aggregated, false) => Err(Error::Scenario("aggregated model needs an aggregated block".into())),
            _ => Ok(scenario),
        }
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        Scenario::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn aggregated_params(&self) -> Option<AggregatedParams> {
        self.aggregated.map(|b| AggregatedParams {
            plant: self.production,
            costs: self.costs,
            n: b.n,
            k_c: b.k_c,
            c_v: b.c_v,
            h_c: b.h_c,
        })
    }

    fn tol(&self) -> f64 {
        self.options.tol.unwrap_or(DEFAULT_TOL)
    }
}

/// Process exit code for a failed command: 2 invalid input, 3 no optimum, 4 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Validation(_)
        | Error::Scenario(_)
        | Error::NotCompleteBacklog(_)
        | Error::InvalidArgument(_)
        | Error::TimeOutOfRange { .. } => 2,
        Error::NoInteriorOptimum(_)
        | Error::NegativePeriod { .. }
        | Error::NoRoot(_)
        | Error::NoSignChange { .. }
        | Error::MinimizerFailed { .. } => 3,
        Error::Io(_) => 4,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum CoefficientBlock {
    Basic {
        /// Absent under partial backlogging, which has no closed form.
        generic: Option<GenericCoefficients>,
        omega: Option<f64>,
    },
    Aggregated {
        #[serde(flatten)]
        coefficients: AggregatedCoefficients,
        candidates: Vec<Candidate>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub solution: Solution,
    pub coefficients: CoefficientBlock,
}

pub fn run_solve(scenario: &Scenario) -> Result<SolveReport> {
    match scenario.aggregated_params() {
        None => {
            let options = SolveOptions { force_partial: scenario.options.force_partial, tol: scenario.tol() };
            let solution = solve_basic_with(&scenario.production, &scenario.costs, &options)?;
            let generic = coefficients_complete(&scenario.production, &scenario.costs).ok();
            Ok(SolveReport {
                solution,
                coefficients: CoefficientBlock::Basic { generic, omega: omega(&scenario.production) },
            })
        }
        Some(agg) => {
            let solved = solve_aggregated_detailed(&agg)?;
            Ok(SolveReport {
                solution: solved.solution,
                coefficients: CoefficientBlock::Aggregated {
                    coefficients: solved.coefficients,
                    candidates: solved.candidates,
                },
            })
        }
    }
}

/// Closed-form decision against the numerical optimum of the exact cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateReport {
    pub model: ModelKind,
    pub closed_form_pair: (f64, f64),
    /// Objective the closed form minimizes, at its own pair.
    pub closed_form_tc: f64,
    /// Exact cost at the closed-form pair.
    pub closed_form_exact_tc: f64,
    pub exact_optimum_pair: (f64, f64),
    pub exact_optimum_tc: f64,
    /// `(closed_form_exact_tc - exact_optimum_tc) / exact_optimum_tc`
    pub gap: f64,
    pub gap_percent: f64,
    pub iterations: usize,
}

pub fn run_validate(scenario: &Scenario) -> Result<ValidateReport> {
    let solution = run_solve(scenario)?.solution;
    let pair = (solution.t4_star, solution.t_star);
    let (params, costs) = validate(scenario.production, scenario.costs)?;
    let agg = scenario.aggregated_params();
    let exact = |t4: f64, t: f64| match &agg {
        Some(a) => exact_cost_aggregated(t4, t, a),
        None => exact_cost_basic(t4, t, &params, &costs),
    };
    let at_pair = exact(pair.0, pair.1)?;
    let tol = scenario.options.tol.unwrap_or(NESTED_TOL);
    let report = minimize_2d(|t4, t| exact(t4, t).unwrap_or(f64::INFINITY), pair, tol)?;
    let gap = (at_pair - report.value) / report.value;
    Ok(ValidateReport {
        model: scenario.model,
        closed_form_pair: pair,
        closed_form_tc: solution.tc,
        closed_form_exact_tc: at_pair,
        exact_optimum_pair: report.point,
        exact_optimum_tc: report.value,
        gap,
        gap_percent: 100.0 * gap,
        iterations: report.iterations,
    })
}

/// Trajectory CSV of the scenario's optimal cycle.
///
/// `step` overrides the scenario's step; without either, one cycle is split into
/// [`DEFAULT_SAMPLES_PER_CYCLE`] intervals.
pub fn run_export(scenario: &Scenario, step: Option<f64>) -> Result<Vec<u8>> {
    let solution = run_solve(scenario)?.solution;
    let step = step
        .or(scenario.options.step)
        .unwrap_or(solution.t_star / DEFAULT_SAMPLES_PER_CYCLE);
    let agg = scenario.aggregated_params();
    let model = match &agg {
        Some(a) => TrajectoryModel::Aggregated(a),
        None => TrajectoryModel::Basic(&scenario.production),
    };
    let points = sample_trajectory(&solution, model, step)?;
    let mut buf = Vec::new();
    write_csv(&points, &mut buf)?;
    Ok(buf)
}

/// Replaces `path` in one rename so that readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Pretty JSON with every number rounded to [`REPORT_DIGITS`] significant digits.
pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut value = serde_json::to_value(report).map_err(|e| Error::Scenario(e.to_string()))?;
    round_numbers(&mut value);
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| Error::Scenario(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn round_numbers(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if let Some(r) = format_significant(x, REPORT_DIGITS).parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Flat `key: value` text rendering of a JSON-serializable report.
pub fn to_text<T: Serialize>(report: &T) -> Result<String> {
    let value = serde_json::to_value(report).map_err(|e| Error::Scenario(e.to_string()))?;
    let mut out = String::new();
    flatten(&value, "", &mut out);
    Ok(out)
}

fn flatten(value: &Value, prefix: &str, out: &mut String) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(v, &key(k), out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let cells: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{prefix}: [{}]", cells.join(", "));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, &key(&i.to_string()), out);
            }
        }
        _ => {
            let _ = writeln!(out, "{prefix}: {}", scalar(value));
        }
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::Number(n) => n.as_f64().map(|x| format_significant(x, REPORT_DIGITS)).unwrap_or_else(|| n.to_string()),
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"{
        "model": "basic",
        "production": {"p": 6000, "alpha": 0.7, "lambda": 1000, "theta": 0.1, "gamma": 0.6,
                       "p_r": 4000, "alpha_r": 0.6, "beta": 1},
        "costs": {"K": 300, "c": 40, "c_d": 100, "c_p": 30, "c_s": 200, "c_u": 0, "h_s": 5, "h_r": 4}
    }"#;

    #[test]
    fn parses_reference_scenario() {
        let s = Scenario::from_json(BASIC).unwrap();
        assert_eq!(s.model, ModelKind::Basic);
        assert_eq!(s.costs.k, 300.0);
        assert!(s.aggregated_params().is_none());
    }

    #[test]
    fn rejects_unknown_fields_and_mismatched_blocks() {
        let extra = BASIC.replace("\"beta\": 1", "\"beta\": 1, \"delta\": 2");
        assert!(matches!(Scenario::from_json(&extra), Err(Error::Scenario(_))));
        let agg = BASIC.replace("\"model\": \"basic\"", "\"model\": \"aggregated\"");
        assert!(matches!(Scenario::from_json(&agg), Err(Error::Scenario(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Scenario("x".into())), 2);
        assert_eq!(exit_code(&Error::NoInteriorOptimum("x".into())), 3);
        assert_eq!(exit_code(&Error::MinimizerFailed { evaluations: 1 }), 3);
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 4);
    }

    #[test]
    fn json_numbers_are_rounded() {
        let text = to_json(&serde_json::json!({"x": 0.123456789, "v": [1.0, 2.5e-9]})).unwrap();
        assert!(text.contains("0.123457"), "{text}");
        assert!(text.contains("2.5e-9"), "{text}");
    }

    #[test]
    fn text_flattens_nested_fields() {
        let text = to_text(&serde_json::json!({"a": {"b": 1.5}, "c": [1, 2], "d": null})).unwrap();
        assert_eq!(text, "a.b: 1.5\nc: [1, 2]\nd: -\n");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
