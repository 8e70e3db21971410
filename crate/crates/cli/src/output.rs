use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::Format;

/// Failure of a command, with its exit code.
#[derive(Debug)]
pub enum CliError {
    Core(depthlab::Error),
    Usage(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(depthlab::Error::Resource { .. }) => 3,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<depthlab::Error> for CliError {
    fn from(e: depthlab::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    BoundViolated = 1,
}

/// The metadata block carried by every JSON document.
#[derive(Debug, Serialize)]
pub struct Metadata {
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub operation: &'static str,
    pub version: &'static str,
}

impl Metadata {
    pub fn new(operation: &'static str, n: Option<usize>, l: Option<usize>) -> Self {
        Self {
            n,
            l,
            operation,
            version: depthlab::VERSION,
        }
    }
}

/// A result in both output shapes.
pub struct Document {
    pub json: serde_json::Value,
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

pub struct Outcome {
    pub doc: Document,
    pub status: Status,
}

/// 17 significant digits, locale independent.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit(doc: &Document, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &doc.json).map_err(io::Error::from)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(doc.header)?;
            for row in &doc.rows {
                c.write_record(row)?;
            }
            c.flush()?;
        }
    }
    w.flush()?;
    Ok(())
}
