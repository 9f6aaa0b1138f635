//! Input-file parsing: one semi-diameter per line, whitespace-separated
//! decimals, `#` comments.

use std::path::Path;

use quadric_axes::{ConjugateSystem, VecN};

use crate::CliError;

/// Parsed rows of an input file (uniform width).
#[derive(Debug)]
pub struct InputRows {
    pub rows: Vec<Vec<f64>>,
}

pub fn read_rows(path: &Path) -> Result<InputRows, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_rows(&text)
}

pub fn parse_rows(text: &str) -> Result<InputRows, CliError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut vals = Vec::new();
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| {
                CliError::input(format!(
                    "line {}: expected {} numbers",
                    lineno + 1,
                    width.unwrap_or(3)
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::input(format!(
                    "line {}: non-finite value",
                    lineno + 1
                )));
            }
            vals.push(v);
        }
        if let Some(w) = width {
            if vals.len() != w {
                return Err(CliError::input(format!(
                    "line {}: expected {} numbers",
                    lineno + 1,
                    w
                )));
            }
        } else {
            if vals.len() < 2 || vals.len() > 3 {
                return Err(CliError::input(format!(
                    "line {}: expected 2 or 3 numbers",
                    lineno + 1
                )));
            }
            width = Some(vals.len());
        }
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(CliError::input("input file holds no data rows".to_string()));
    }
    Ok(InputRows { rows })
}

impl InputRows {
    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    /// Interpret as a complete conjugate system (n rows of n numbers).
    pub fn as_system(&self) -> Result<ConjugateSystem, CliError> {
        let n = self.width();
        if self.rows.len() != n {
            return Err(CliError::input(format!(
                "expected {n} semi-diameter rows, got {}",
                self.rows.len()
            )));
        }
        ConjugateSystem::new(self.rows.iter().map(|r| VecN::from_slice(r)).collect())
            .map_err(CliError::geometry)
    }

    /// Interpret as a 2D conjugate pair (2 rows of 2 numbers).
    pub fn as_pair(&self) -> Result<([f64; 2], [f64; 2]), CliError> {
        if self.width() != 2 || self.rows.len() != 2 {
            return Err(CliError::input(
                "expected two rows of two numbers for a planar pair".to_string(),
            ));
        }
        Ok((
            [self.rows[0][0], self.rows[0][1]],
            [self.rows[1][0], self.rows[1][1]],
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let rows = parse_rows("# fixture\n3 0 0\n0 2 0 # third\n0 0 1\n").unwrap();
        assert_eq!(rows.rows.len(), 3);
        assert_eq!(rows.width(), 3);
        assert!(rows.as_system().is_ok());
    }

    #[test]
    fn rejects_malformed_row() {
        let err = parse_rows("1 0 0\n0 x 0\n0 0 1\n").unwrap_err();
        assert!(err.message.contains("line 2"));
        assert_eq!(err.exit_code, 2);
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = parse_rows("1 0 0\n0 1\n").unwrap_err();
        assert!(err.message.contains("line 2: expected 3 numbers"));
    }
}
