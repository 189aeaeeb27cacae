//! Flat result rows and their CSV / JSON-lines encodings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Column order of the CSV output; matches the field order of [`ResultRecord`].
pub const HEADER: [&str; 16] = [
    "command",
    "grid",
    "seed",
    "alpha",
    "ka",
    "kd",
    "oracle",
    "kind",
    "subject",
    "value",
    "secondary",
    "lower",
    "upper",
    "iterations",
    "converged",
    "seconds",
];

/// One evaluated scenario. Every row repeats the full parameter tuple so a file of rows
/// can be filtered and plotted without extra context.
///
/// The meaning of `subject`, `value` and the optional columns depends on `kind`; see the
/// README for the per-command table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub grid: String,
    pub seed: u64,
    pub alpha: f64,
    pub ka: usize,
    pub kd: usize,
    pub oracle: Option<String>,
    pub kind: String,
    pub subject: String,
    pub value: f64,
    pub secondary: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// Encodes rows; CSV output always starts with the header, even with no rows.
pub fn encode(records: &[ResultRecord], format: OutputFormat) -> Result<Vec<u8>, CliError> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(HEADER).map_err(output_error)?;
            for r in records {
                w.serialize(r).map_err(output_error)?;
            }
            w.into_inner().map_err(|e| CliError::Output(e.to_string()))
        }
        OutputFormat::Json => {
            let mut out = Vec::new();
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(output_error)?;
                out.push(b'\n');
            }
            Ok(out)
        }
    }
}

/// Parses output previously produced by [`encode`].
pub fn decode(bytes: &[u8], format: OutputFormat) -> Result<Vec<ResultRecord>, CliError> {
    match format {
        OutputFormat::Csv => {
            let mut r = csv::Reader::from_reader(bytes);
            let header: Vec<String> = r.headers().map_err(output_error)?.iter().map(str::to_owned).collect();
            if header != HEADER {
                return Err(CliError::Output(format!("unexpected CSV header {header:?}")));
            }
            r.deserialize().collect::<Result<_, _>>().map_err(output_error)
        }
        OutputFormat::Json => bytes
            .split(|&b| b == b'\n')
            .filter(|line| !line.is_empty())
            .map(|line| serde_json::from_slice(line).map_err(output_error))
            .collect(),
    }
}

fn output_error(e: impl fmt::Display) -> CliError {
    CliError::Output(e.to_string())
}
