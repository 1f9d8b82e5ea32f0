use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::CliError;

/// Reads a JSON file, reporting the offending field, line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        CliError::Config(format!("{}: field `{field}`: {inner}", path.display()))
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| write_error(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| write_error(path, e))
}

/// Opens a CSV file whose first line is `# manifest=<hash>`, followed by
/// one `# ` line per entry of `notes`.
pub fn csv_writer(path: &Path, hash: &str, notes: &[String]) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let file = File::create(path).map_err(|e| write_error(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "# manifest={hash}").map_err(|e| write_error(path, e))?;
    for n in notes {
        writeln!(out, "# {n}").map_err(|e| write_error(path, e))?;
    }
    Ok(csv::Writer::from_writer(out))
}

/// Reads CSV rows written by [`csv_writer`], skipping the manifest line.
pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    rdr.deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Manifest hash cited on the first line of a CSV file.
pub fn csv_manifest(path: &Path) -> Option<String> {
    let text = fs::read_to_string(path).ok()?;
    text.lines().next()?.strip_prefix("# manifest=").map(str::to_owned)
}

pub fn finish_csv<W: Write>(w: csv::Writer<W>, path: &Path) -> Result<(), CliError> {
    w.into_inner()
        .map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?
        .flush()
        .map_err(|e| write_error(path, e))
}

pub fn csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::Internal(format!("cannot write {}: {e}", path.display()))
}

fn write_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Internal(format!("cannot write {}: {e}", path.display()))
}
