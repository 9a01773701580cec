//! JSON and CSV rendering. Both embed the resolved config and the library
//! version; CSV carries them (and the summary) as `#` comment lines above the
//! header.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::{CliError, Format, Opts, RunConfig};

#[derive(Serialize)]
struct Document<'a, R> {
    config: &'a RunConfig,
    rows: &'a [R],
    summary: &'a Value,
}

pub fn render<R: Serialize>(
    format: Format,
    config: &RunConfig,
    rows: &[R],
    summary: &Value,
) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(&Document { config, rows, summary })?;
            buf.push(b'\n');
            Ok(buf)
        }
        Format::Csv => {
            let mut buf = Vec::new();
            writeln!(buf, "# qcocycle {} config: {}", config.version, serde_json::to_string(config)?)?;
            writeln!(buf, "# summary: {}", serde_json::to_string(summary)?)?;
            let mut w = csv::Writer::from_writer(buf);
            for row in rows {
                w.serialize(row)?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.into_error()))
        }
    }
}

pub fn emit<R: Serialize>(opts: &Opts, config: &RunConfig, rows: &[R], summary: &Value) -> Result<(), CliError> {
    let bytes = render(opts.format, config, rows, summary)?;
    match &opts.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}
