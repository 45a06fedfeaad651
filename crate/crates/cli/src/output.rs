//! Deterministic file output: atomic writes and float formatting.

use std::io::Write;
use std::path::Path;

use crate::error::{AppError, AppResult};

/// Write through a temporary file in the target directory and rename, so a
/// failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> AppResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| AppError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| AppError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| AppError::io(path, e))?;
    tmp.persist(path).map_err(|e| AppError::io(path, e.error))?;
    Ok(())
}

/// Shortest representation that parses back to the same double; exponent
/// notation for very small or large magnitudes.
pub fn shortest(x: f64) -> String {
    format!("{x:?}")
}

/// Seventeen significant digits in scientific notation, e.g.
/// `7.0710678118654746e-1`.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text from a header and rows of preformatted cells.
pub fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_roundtrip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 7.0, 1e21] {
            assert_eq!(shortest(x).parse::<f64>().unwrap(), x);
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(sig17(0.5), "5.0000000000000000e-1");
        assert_eq!(shortest(4e-9), "4e-9");
        assert_eq!(shortest(0.25), "0.25");
    }

    #[test]
    fn csv_layout() {
        assert_eq!(csv("a,b", vec![vec!["1".into(), "2".into()]]), "a,b\n1,2\n");
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
