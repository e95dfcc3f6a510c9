//! Versioned CSV output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{CliError, CliResult};

/// First line of every CSV file written by the tool.
pub const SCHEMA_LINE: &str = "# smoothcal-schema v1";

/// Writes the schema comment, the header and the rows, with LF line endings.
pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let io = |e: std::io::Error| CliError::io(path, e);
    let mut file = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(file, "{SCHEMA_LINE}").map_err(io)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file);
    let csv_io = |e: csv::Error| CliError::io(path, std::io::Error::other(e));
    w.write_record(header).map_err(csv_io)?;
    for row in rows {
        w.write_record(&row).map_err(csv_io)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

/// Shortest round-trip decimal form, so equal values always print equal bytes.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn create_dir(path: &Path) -> CliResult<()> {
    std::fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}
