//! CSV and JSON-lines writers. Each file starts with the experiment
//! configuration so that a result file identifies the run that produced it.
//! Nothing time-dependent is written.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{Error, Result};

/// Prefix of the metadata line in CSV files.
pub const META_PREFIX: &str = "# config: ";

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Writes `rows` as CSV after a `# config: {json}` line.
pub fn write_csv<M: Serialize, R: Serialize>(path: &Path, meta: &M, rows: &[R]) -> Result<()> {
    let mut file = create(path)?;
    writeln!(file, "{META_PREFIX}{}", serde_json::to_string(meta)?)
        .map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`], skipping `#` lines.
pub fn read_csv<R: DeserializeOwned>(path: &Path) -> Result<Vec<R>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(BufReader::new(file));
    reader
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// Returns the JSON metadata of a CSV file written by [`write_csv`].
pub fn read_csv_meta(path: &Path) -> Result<serde_json::Value> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut first = String::new();
    BufReader::new(file)
        .read_line(&mut first)
        .map_err(|e| Error::io(path, e))?;
    let json = first.trim_end().strip_prefix(META_PREFIX).unwrap_or("null");
    Ok(serde_json::from_str(json)?)
}

/// Writes `{"meta": meta}` followed by one JSON object per record.
pub fn write_jsonl<M: Serialize, R: Serialize>(path: &Path, meta: &M, records: &[R]) -> Result<()> {
    let mut file = create(path)?;
    let io = |e| Error::io(path, e);
    #[derive(Serialize)]
    struct Meta<'a, M> {
        meta: &'a M,
    }
    serde_json::to_writer(&mut file, &Meta { meta })?;
    writeln!(file).map_err(io)?;
    for record in records {
        serde_json::to_writer(&mut file, record)?;
        writeln!(file).map_err(io)?;
    }
    file.flush().map_err(io)
}
