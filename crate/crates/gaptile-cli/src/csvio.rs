//! CSV emission/parsing and atomic file writes.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing
//! a CSV back yields bit-identical doubles and re-verification from
//! artifacts reproduces in-memory results exactly.

use gaptile::circle::CoeffSeq;
use gaptile::tiling::TranslationSet;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

/// Writes via a temporary file in the same directory followed by a rename,
/// so readers never observe a half-written artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// `n,alpha` rows over the full symmetric index range.
pub fn alpha_csv(alpha: &CoeffSeq) -> String {
    let mut out = String::from("n,alpha\n");
    for (n, v) in alpha.iter() {
        writeln!(out, "{n},{v}").expect("string write");
    }
    out
}

/// `n,lambda` rows for the translation points in `[-window, window]`.
pub fn lambda_csv(set: &TranslationSet, window: usize) -> String {
    let w = window as i64;
    let mut out = String::from("n,lambda\n");
    for n in -w..=w {
        writeln!(out, "{n},{}", set.lambda(n)).expect("string write");
    }
    out
}

/// Generic two-column table with the given header.
pub fn two_column_csv(header: &str, rows: &[(f64, f64)]) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for (a, b) in rows {
        writeln!(out, "{a},{b}").expect("string write");
    }
    out
}

/// Parses an `n,alpha` table back into a coefficient sequence. Indices may
/// arrive in any order; omitted indices are zero; duplicates are rejected.
pub fn parse_alpha_csv(text: &str) -> Result<CoeffSeq, String> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "n,alpha" => {}
        Some((_, header)) => return Err(format!("expected header `n,alpha`, found `{header}`")),
        None => return Err("empty file".to_string()),
    }
    let mut entries: Vec<(i64, f64)> = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (n_text, v_text) = match (fields.next(), fields.next(), fields.next()) {
            (Some(n), Some(v), None) => (n, v),
            _ => return Err(format!("line {}: expected two fields", idx + 1)),
        };
        let n: i64 = n_text
            .trim()
            .parse()
            .map_err(|e| format!("line {}: bad index: {e}", idx + 1))?;
        let v: f64 = v_text
            .trim()
            .parse()
            .map_err(|e| format!("line {}: bad value: {e}", idx + 1))?;
        if entries.iter().any(|&(m, _)| m == n) {
            return Err(format!("line {}: duplicate index {n}", idx + 1));
        }
        entries.push((n, v));
    }
    if entries.is_empty() {
        return Err("no data rows".to_string());
    }
    let n_max = entries.iter().map(|&(n, _)| n.unsigned_abs()).max().unwrap() as usize;
    let mut alpha = CoeffSeq::zeros(n_max);
    for (n, v) in entries {
        alpha.set(n, v);
    }
    Ok(alpha)
}
