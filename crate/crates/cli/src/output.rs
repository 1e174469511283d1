//! Deterministic CSV writing.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::CliError;

/// Sink for one output: a file when a path is given, stdout otherwise.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Io(io::Error::new(e.kind(), format!("cannot create {}: {e}", p.display())))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// 17 significant digits, always in exponent form. Negative zero prints as
/// zero.
pub fn fmt(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

pub struct Csv {
    out: Box<dyn Write>,
    width: usize,
}

impl Csv {
    pub fn new(mut out: Box<dyn Write>, header: &[&str]) -> Result<Self, CliError> {
        writeln!(out, "{}", header.join(","))?;
        Ok(Self { out, width: header.len() })
    }

    pub fn row(&mut self, values: &[f64]) -> Result<(), CliError> {
        debug_assert_eq!(values.len(), self.width);
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Numerical(format!("non-finite value in output column {bad}")));
        }
        let line: Vec<String> = values.iter().map(|&v| fmt(v)).collect();
        writeln!(self.out, "{}", line.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.out.flush()?;
        Ok(())
    }
}
