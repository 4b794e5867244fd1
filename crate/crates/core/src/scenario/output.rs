//! CSV time series, plain-text matrix dumps and atomic file writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::metrics::MetricsRecord;

pub const CSV_HEADER: &str =
    "step,time,s_vn,s_shannon,p_ent,excess_kurtosis,d2_power,frob_to_maxent,trace_error,min_eigenvalue";

fn optional(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn csv_row(r: &MetricsRecord) -> String {
    format!(
        "{},{:e},{:e},{:e},{:e},{},{:e},{:e},{:e},{}",
        r.step,
        r.time,
        r.s_vn,
        r.s_shannon,
        r.p_ent,
        optional(r.excess_kurtosis),
        r.d2_power,
        r.frob_to_maxent,
        r.trace_error,
        optional(r.min_eigenvalue),
    )
}

/// Header plus one line per record, newline-terminated.
pub fn to_csv(records: &[MetricsRecord]) -> String {
    let mut out = String::with_capacity(160 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

/// One row per line, entries `re+imj` with 17 significant digits.
pub fn format_matrix_dump(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = String::new();
    for i in 1..=n {
        for j in 1..=n {
            if j > 1 {
                out.push(' ');
            }
            let z = m.get(i, j);
            write!(out, "{:.16e}{:+.16e}j", z.re, z.im).expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

fn parse_entry(token: &str) -> Option<Complex64> {
    let body = token.strip_suffix('j')?;
    // the imaginary part starts at the last sign not belonging to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    let re = body[..split].parse().ok()?;
    let im = body[split..].parse().ok()?;
    Some(Complex64::new(re, im))
}

pub fn parse_matrix_dump(text: &str) -> Result<ComplexMatrix> {
    let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix dump".into()));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (idx, row) in rows.iter().enumerate() {
        let before = entries.len();
        for token in row.split_whitespace() {
            let z = parse_entry(token).ok_or_else(|| {
                Error::InvalidArgument(format!("dump row {}: bad entry `{token}`", idx + 1))
            })?;
            entries.push(z);
        }
        if entries.len() - before != n {
            return Err(Error::InvalidArgument(format!(
                "dump row {} has {} entries, expected {n}",
                idx + 1,
                entries.len() - before
            )));
        }
    }
    ComplexMatrix::from_row_major(n, &entries)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        // temporary files are created owner-only
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}
