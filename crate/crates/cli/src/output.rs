//! CSV and JSON writers. Every CSV starts with a comment line carrying the
//! config hash, followed by a header row.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_owned(), source }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Renders rows as CSV bytes.
pub fn csv_bytes(hash: &str, header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut buf = format!("# config_sha256={hash}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header).expect("in-memory write");
        for r in rows {
            w.write_record(r).expect("in-memory write");
        }
        w.flush().expect("in-memory flush");
    }
    buf
}

pub fn write_csv(dir: &Path, name: &str, hash: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf, CliError> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    fs::write(&path, csv_bytes(hash, header, rows)).map_err(io_err(&path))?;
    Ok(path)
}

pub fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    fs::write(&path, json_string(value)).map_err(io_err(&path))?;
    Ok(path)
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or very large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let b = csv_bytes("abc", &["x", "y"], &[vec![num(0.5), num(1e-20)]]);
        assert_eq!(String::from_utf8(b).unwrap(), "# config_sha256=abc\nx,y\n0.5,1e-20\n");
    }
}
