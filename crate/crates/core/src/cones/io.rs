//! Plain-text and JSON matrix formats for H- and V-representations.
//!
//! Text form: an optional run of `#` comment lines, a header `D M`, then `M`
//! rows of `D` rationals separated by whitespace.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::entropy_space::parse_rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub rows: Vec<Vec<String>>,
}

impl MatrixFile {
    pub fn from_rows<T: ToString>(dim: usize, rows: &[Vec<T>]) -> Self {
        MatrixFile {
            dim,
            rows: rows
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    pub fn to_text(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&format!("{} {}\n", self.dim, self.rows.len()));
        for r in &self.rows {
            out.push_str(&r.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<(MatrixFile, Vec<String>)> {
        let mut comments = Vec::new();
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).peekable();
        while let Some(l) = lines.peek() {
            match l.strip_prefix('#') {
                Some(c) => {
                    comments.push(c.trim().to_string());
                    lines.next();
                }
                None => break,
            }
        }
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `D M` header".into()))?;
        let hv: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        let [dim, m] = hv[..] else {
            return Err(Error::Parse(format!("bad header `{header}`")));
        };
        let mut rows = Vec::with_capacity(m);
        for l in lines.by_ref().take(m) {
            let r: Vec<String> = l.split_whitespace().map(str::to_string).collect();
            if r.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: r.len(),
                });
            }
            for x in &r {
                parse_rational(x)?;
            }
            rows.push(r);
        }
        if rows.len() != m {
            return Err(Error::Parse(format!("expected {m} rows, found {}", rows.len())));
        }
        Ok((MatrixFile { dim, rows }, comments))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<MatrixFile> {
        let m: MatrixFile = serde_json::from_str(text)?;
        for r in &m.rows {
            if r.len() != m.dim {
                return Err(Error::Dimension {
                    expected: m.dim,
                    found: r.len(),
                });
            }
        }
        Ok(m)
    }

    pub fn rationals(&self) -> Result<Vec<Vec<BigRational>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let m = MatrixFile::from_rows(3, &[vec![1, 1, -1], vec![1, -1, 1]]);
        let text = m.to_text(&["hrep".to_string()]);
        assert_eq!(text, "# hrep\n3 2\n1 1 -1\n1 -1 1\n");
        let (back, comments) = MatrixFile::parse_text(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(comments, vec!["hrep"]);
        assert_eq!(MatrixFile::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn malformed_text() {
        assert!(MatrixFile::parse_text("3 2\n1 1 -1\n").is_err());
        assert!(MatrixFile::parse_text("3 1\n1 1\n").is_err());
        assert!(MatrixFile::parse_text("3 1\n1 x 1\n").is_err());
        assert!(MatrixFile::parse_text("").is_err());
    }
}
