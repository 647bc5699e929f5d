//! Versioned JSON run reports.
//!
//! Every numeric result carries a provenance tag so downstream tooling can
//! tell closed forms, quadrature values, and extrapolated limits apart
//! without reverse-engineering the flag combination that produced them.

use std::collections::BTreeMap;

use oscint::Complex;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "oscint-report/1";

/// How a reported number was obtained.
#[derive(Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Quadrature,
    Extrapolated,
}

/// Complex numbers are always emitted as separate re/im fields, never as
/// formatted "a+bi" strings.
#[derive(Clone, Copy, Serialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

impl From<Complex> for ComplexOut {
    fn from(z: Complex) -> Self {
        ComplexOut { re: z.re, im: z.im }
    }
}

/// One named numeric output with its provenance.
#[derive(Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: ComplexOut,
    pub provenance: Provenance,
    /// For expansion terms: the term decays like λ^{-exponent}.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
}

impl NamedValue {
    pub fn new(name: impl Into<String>, value: Complex, provenance: Provenance) -> Self {
        NamedValue {
            name: name.into(),
            value: value.into(),
            provenance,
            exponent: None,
            error_estimate: None,
        }
    }

    pub fn exponent(mut self, e: f64) -> Self {
        self.exponent = Some(e);
        self
    }

    pub fn error_estimate(mut self, e: f64) -> Self {
        self.error_estimate = Some(e);
        self
    }
}

/// The report printed to stdout. BTreeMap keys keep the serialization order
/// deterministic.
#[derive(Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    /// Defaults in effect for this run (schedules, grids, thresholds),
    /// echoed so a report is reproducible without consulting the source.
    pub defaults: BTreeMap<String, Value>,
    pub outputs: Vec<NamedValue>,
    pub diagnostics: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            schema: SCHEMA,
            command: command.into(),
            inputs: BTreeMap::new(),
            defaults: BTreeMap::new(),
            outputs: Vec::new(),
            diagnostics: BTreeMap::new(),
            warnings: Vec::new(),
            wall_time_ms: 0.0,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.into(), v.into());
    }

    pub fn default_in_effect(&mut self, key: &str, v: impl Into<Value>) {
        self.defaults.insert(key.into(), v.into());
    }

    pub fn diag(&mut self, key: &str, v: impl Into<Value>) {
        self.diagnostics.insert(key.into(), v.into());
    }

    /// Warnings go to stderr immediately and into the report.
    pub fn warn(&mut self, msg: String) {
        eprintln!("warning: {msg}");
        self.warnings.push(msg);
    }
}

pub fn complex_json(z: Complex) -> Value {
    serde_json::json!({ "re": z.re, "im": z.im })
}
