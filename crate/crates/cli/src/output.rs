//! CSV writing. UTF-8, comma separated, one header row, LF line endings,
//! numbers with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use fracfact::LevyIndex;

use crate::{CliError, Result};

/// 17 significant digits in scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// `1.2`, `2.0`, `1.25`: the shortest round-tripping decimal.
pub fn fmt_alpha(alpha: LevyIndex) -> String {
    format!("{:?}", alpha.value())
}

pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt_num).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(fmt_num(0.75), "7.5000000000000000e-1");
        assert_eq!(fmt_num(-2.0), "-2.0000000000000000e0");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn alpha_labels() {
        assert_eq!(fmt_alpha(LevyIndex::new(2.0).unwrap()), "2.0");
        assert_eq!(fmt_alpha(LevyIndex::new(1.2).unwrap()), "1.2");
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&["k", "E"], [vec![1.0, 2.0]]);
        assert_eq!(s, "k,E\n1.0000000000000000e0,2.0000000000000000e0\n");
    }
}
