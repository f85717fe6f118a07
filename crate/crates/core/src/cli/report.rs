//! Machine-readable reports.

use serde::Serialize;

use super::instance::ExtNumber;
use crate::mixed::InnerInfimumResult;
use crate::space::Estimate;

pub const TOOL: &str = "varlp";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A computed number with the half-width of its final bisection bracket
/// (0 for exact values).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantity {
    pub value: ExtNumber,
    pub accuracy: f64,
}

impl Quantity {
    pub fn new(value: f64, accuracy: f64) -> Self {
        Quantity {
            value: ExtNumber(value),
            accuracy,
        }
    }
}

impl From<Estimate> for Quantity {
    fn from(e: Estimate) -> Self {
        Quantity::new(e.value, e.accuracy)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InnerRow {
    pub index: usize,
    pub lambda: ExtNumber,
    pub branch: &'static str,
    pub accuracy: f64,
}

impl InnerRow {
    pub fn new(index: usize, r: &InnerInfimumResult) -> Self {
        InnerRow {
            index,
            lambda: ExtNumber(r.lambda.value()),
            branch: r.branch.label(),
            accuracy: r.accuracy,
        }
    }
}

/// Common envelope of every JSON report.
#[derive(Debug, Serialize)]
pub struct Report<I: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub input: I,
    pub result: R,
}

impl<I: Serialize, R: Serialize> Report<I, R> {
    pub fn new(
        command: &'static str,
        tolerance: f64,
        seed: Option<u64>,
        input: I,
        result: R,
    ) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            command,
            tolerance,
            seed,
            input,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

pub fn verdict(violated: bool) -> &'static str {
    if violated {
        "VIOLATED"
    } else {
        "HOLDS"
    }
}

/// `field,value` rows for commands without a natural table.
pub fn key_value_csv(rows: &[(&str, String)]) -> String {
    let mut out = String::from("field,value\n");
    for (k, v) in rows {
        out.push_str(k);
        out.push(',');
        out.push_str(v);
        out.push('\n');
    }
    out
}

pub fn fmt_num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else {
        serde_json::to_string(&x).expect("finite floats serialize")
    }
}
