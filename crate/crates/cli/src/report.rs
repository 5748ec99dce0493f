// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Persisted outputs.
//!
//! Every experiment produces a flat table of records. CSV files carry a
//! header row and a `schema_version` column; JSON files wrap the records as
//! `{"schema_version", "kind", "records", "details"}`. Output is assembled
//! in memory and written once, so equal inputs give equal bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{config_error, CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

/// A row type with a fixed column list.
///
/// `COLUMNS` must list the serialized field names in declaration order; the
/// CSV header is written from it so that empty tables still get one.
pub trait Record: Serialize + DeserializeOwned {
    const KIND: &'static str;
    const COLUMNS: &'static [&'static str];
}

#[derive(Serialize)]
struct Envelope<'a, R> {
    schema_version: u32,
    kind: &'a str,
    records: &'a [R],
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<&'a serde_json::Value>,
}

#[derive(Deserialize)]
struct OwnedEnvelope<R> {
    schema_version: u32,
    kind: String,
    records: Vec<R>,
}

/// Renders `records` in `format`. `details` holds structured extras and is
/// dropped from CSV output.
pub fn render<R: Record>(records: &[R], details: Option<&serde_json::Value>, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Json => {
            let envelope = Envelope {
                schema_version: SCHEMA_VERSION,
                kind: R::KIND,
                records,
                details,
            };
            let mut out = serde_json::to_vec_pretty(&envelope).map_err(|e| CliError::Io(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(R::COLUMNS).map_err(io)?;
            for r in records {
                w.serialize(r).map_err(io)?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Writes rendered bytes to `path`, or to stdout when `path` is `None`.
pub fn emit_report<R: Record>(
    records: &[R],
    details: Option<&serde_json::Value>,
    format: Format,
    path: Option<&Path>,
) -> CliResult<()> {
    write_output(&render(records, details, format)?, path)
}

/// Writes `bytes` to `path`, or to stdout when `path` is `None`.
pub fn write_output(bytes: &[u8], path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Reads back a table written by [`render`].
pub fn parse_report<R: Record>(bytes: &[u8], format: Format) -> CliResult<Vec<R>> {
    match format {
        Format::Json => {
            let env: OwnedEnvelope<R> =
                serde_json::from_slice(bytes).map_err(|e| config_error(format!("bad report: {e}")))?;
            if env.schema_version != SCHEMA_VERSION {
                return Err(config_error(format!(
                    "report schema version {} is not {SCHEMA_VERSION}",
                    env.schema_version
                )));
            }
            if env.kind != R::KIND {
                return Err(config_error(format!("report holds {}, not {}", env.kind, R::KIND)));
            }
            Ok(env.records)
        }
        Format::Csv => {
            let mut r = csv::Reader::from_reader(bytes);
            let header = r.headers().map_err(|e| config_error(e.to_string()))?;
            if header.iter().ne(R::COLUMNS.iter().copied()) {
                return Err(config_error(format!("unexpected CSV header {header:?}")));
            }
            r.deserialize()
                .collect::<Result<Vec<R>, _>>()
                .map_err(|e| config_error(format!("bad CSV row: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
    struct Row {
        name: String,
        value: f64,
        flag: Option<bool>,
        schema_version: u32,
    }

    impl Record for Row {
        const KIND: &'static str = "row";
        const COLUMNS: &'static [&'static str] = &["name", "value", "flag", "schema_version"];
    }

    fn rows() -> Vec<Row> {
        vec![
            Row {
                name: "a, with comma".into(),
                value: 0.1 + 0.2,
                flag: None,
                schema_version: SCHEMA_VERSION,
            },
            Row {
                name: "b".into(),
                value: 1e-300,
                flag: Some(true),
                schema_version: SCHEMA_VERSION,
            },
        ]
    }

    #[test]
    fn round_trip() {
        for format in [Format::Csv, Format::Json] {
            let bytes = render(&rows(), None, format).unwrap();
            assert_eq!(parse_report::<Row>(&bytes, format).unwrap(), rows());
            assert_eq!(render(&rows(), None, format).unwrap(), bytes);
        }
    }

    #[test]
    fn empty_tables_keep_their_header() {
        let csv = render::<Row>(&[], None, Format::Csv).unwrap();
        assert_eq!(csv, b"name,value,flag,schema_version\n");
        assert!(parse_report::<Row>(&csv, Format::Csv).unwrap().is_empty());
        let json = render::<Row>(&[], None, Format::Json).unwrap();
        assert!(String::from_utf8(json.clone()).unwrap().contains("\"schema_version\": 1"));
        assert!(parse_report::<Row>(&json, Format::Json).unwrap().is_empty());
    }

    #[test]
    fn schema_version_is_everywhere() {
        let csv = String::from_utf8(render(&rows(), None, Format::Csv).unwrap()).unwrap();
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",1")));
        let bumped = String::from_utf8(render(&rows(), None, Format::Json).unwrap())
            .unwrap()
            .replacen("\"schema_version\": 1", "\"schema_version\": 9", 1);
        assert!(parse_report::<Row>(bumped.as_bytes(), Format::Json).is_err());
    }

    #[test]
    fn details_only_in_json() {
        let extra = serde_json::json!({"note": [1, 2]});
        let json = String::from_utf8(render(&rows(), Some(&extra), Format::Json).unwrap()).unwrap();
        assert!(json.contains("\"details\""));
        let csv = String::from_utf8(render(&rows(), Some(&extra), Format::Csv).unwrap()).unwrap();
        assert!(!csv.contains("note"));
    }
}
