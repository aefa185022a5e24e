//! Run documents: JSON with `config`, `results` and `checks` keys, or CSV.

use std::io::Write;

use rug::Float;
use serde_json::{json, Map, Value};
use vpt_core::precision::format_sci;
use vpt_core::Precision;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Decimal rendering with an explicit `@<digits>` precision suffix.
pub fn decimal(value: &Float, prec: Precision) -> String {
    let digits = prec.decimal_digits();
    format!("{}@{digits}", format_sci(value, digits as usize))
}

/// Short decimal (no suffix) for f64 diagnostics.
pub fn short(value: f64) -> String {
    format!("{value:.6e}")
}

/// One comparison against a stored value.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: Value) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// Everything a subcommand produces.
#[derive(Debug, Default)]
pub struct Document {
    pub config: Map<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
    /// Header and rows for CSV output.
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Document {
    pub fn new(subcommand: &str) -> Self {
        let mut config = Map::new();
        config.insert("subcommand".into(), json!(subcommand));
        config.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        Self {
            config,
            results: Value::Null,
            ..Self::default()
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.config.insert(key.into(), value.into());
    }

    pub fn table(&mut self, header: &[&str], rows: Vec<Vec<String>>) {
        self.table = Some((header.iter().map(|s| s.to_string()).collect(), rows));
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let checks: Vec<Value> = self
                    .checks
                    .iter()
                    .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                    .collect();
                let mut results = self.results.clone();
                if let (Some((header, rows)), Value::Null) = (&self.table, &results) {
                    results = Value::Array(
                        rows.iter()
                            .map(|r| Value::Object(header.iter().cloned().zip(r.iter().map(|v| json!(v))).collect()))
                            .collect(),
                    );
                }
                let doc = json!({"config": self.config, "results": results, "checks": checks});
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)
            }
            Format::Csv => {
                let config: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={}", v.to_string().trim_matches('"'))).collect();
                writeln!(out, "# {}", config.join(" "))?;
                let mut w = csv::Writer::from_writer(&mut *out);
                match &self.table {
                    Some((header, rows)) => {
                        w.write_record(header)?;
                        for r in rows {
                            w.write_record(r)?;
                        }
                    }
                    None => {
                        w.write_record(["name", "passed", "detail"])?;
                        for c in &self.checks {
                            w.write_record([c.name.clone(), c.passed.to_string(), c.detail.to_string()])?;
                        }
                    }
                }
                w.flush()
            }
        }
    }
}
