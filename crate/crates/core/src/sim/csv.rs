use std::io::Write;

use crate::error::{Error, Result};

/// Header plus numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvSeries {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvSeries {
    pub fn new(header: Vec<String>) -> Self {
        CsvSeries { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Dimension { expected: self.header.len(), actual: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// UTF-8, comma separated, LF line endings, 17 significant digits.
    pub fn to_csv_string(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn emit_csv<W: Write>(series: &CsvSeries, destination: &mut W) -> Result<()> {
    if series.rows.iter().any(|r| r.len() != series.header.len()) {
        return Err(Error::Dimension {
            expected: series.header.len(),
            actual: series.rows.iter().map(Vec::len).find(|&l| l != series.header.len()).unwrap_or(0),
        });
    }
    destination.write_all(series.to_csv_string().as_bytes())?;
    destination.flush()?;
    Ok(())
}
