//! Record sinks: JSON lines or CSV with a fixed header per command.
//!
//! Every record is a flat serde struct. JSON lines carry `schema_version`
//! and the record kind; CSV columns are the command's header, with list
//! fields joined by spaces and absent fields left empty.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

enum Target {
    Json(Box<dyn Write>),
    Csv(Box<csv::Writer<Box<dyn Write>>>),
}

pub struct Sink {
    target: Target,
    header: &'static [&'static str],
}

impl Sink {
    /// Opens `path`, or stdout when absent, and writes the CSV header at once
    /// so that even an empty stream is well-formed.
    pub fn open(
        format: Format,
        path: Option<&Path>,
        header: &'static [&'static str],
    ) -> CliResult<Self> {
        let writer: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        let target = match format {
            Format::Json => Target::Json(writer),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(writer);
                w.write_record(header)?;
                Target::Csv(Box::new(w))
            }
        };
        Ok(Sink { target, header })
    }

    /// Writes one record of kind `record`.
    pub fn emit<T: Serialize>(&mut self, record: &str, fields: &T) -> CliResult<()> {
        let Value::Object(fields) = serde_json::to_value(fields)? else {
            return Err(CliError::Usage("records must be structs".into()));
        };
        match &mut self.target {
            Target::Json(w) => {
                let mut obj = Map::new();
                obj.insert("schema_version".into(), SCHEMA_VERSION.into());
                obj.insert("record".into(), record.into());
                obj.extend(fields);
                serde_json::to_writer(&mut *w, &obj)?;
                w.write_all(b"\n")?;
            }
            Target::Csv(w) => {
                let row: Vec<String> = self
                    .header
                    .iter()
                    .map(|&col| match col {
                        "record" => record.to_string(),
                        _ => fields.get(col).map(cell).unwrap_or_default(),
                    })
                    .collect();
                w.write_record(&row)?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> CliResult<()> {
        match self.target {
            Target::Json(mut w) => w.flush()?,
            Target::Csv(mut w) => w.flush()?,
        }
        Ok(())
    }
}

fn cell(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}
