use std::path::Path;

use anyhow::{bail, Context, Result};

/// Parses a comma-separated list, or reads a single-column file when `arg`
/// names an existing file. A non-numeric first line in a file is taken as a
/// header.
pub fn parse_vector(arg: &str) -> Result<Vec<f64>> {
    let path = Path::new(arg);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .peekable();
        if let Some(first) = lines.peek() {
            if first.parse::<f64>().is_err() {
                lines.next();
            }
        }
        return lines
            .enumerate()
            .map(|(i, l)| {
                l.trim_end_matches(',').parse::<f64>().with_context(|| {
                    format!("{}: bad value {l:?} on data line {}", path.display(), i + 1)
                })
            })
            .collect();
    }
    let values = arg
        .split(',')
        .map(str::trim)
        .map(|s| {
            s.parse::<f64>()
                .with_context(|| format!("bad number {s:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        bail!("empty vector");
    }
    Ok(values)
}

/// Shortest round-trip decimal for each value.
pub fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(", ")
}
