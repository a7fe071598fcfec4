//! CSV and JSON artifacts. Numbers are written with 17 significant digits
//! so every value round-trips exactly.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::Value;
use shearwave_core::SampledField;

use crate::error::CliError;

pub struct Artifacts {
    dir: PathBuf,
    written: Vec<String>,
}

impl Artifacts {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    /// Writes a CSV with the given header and numeric rows.
    pub fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[f64]>,
    {
        let mut w = BufWriter::new(File::create(self.dir.join(name))?);
        writeln!(w, "{}", header.join(","))?;
        for row in rows {
            let mut first = true;
            for v in row.as_ref() {
                if !first {
                    w.write_all(b",")?;
                }
                write!(w, "{}", fmt_f64(*v))?;
                first = false;
            }
            w.write_all(b"\n")?;
        }
        w.flush()?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Writes every node of a sampled field as `row, col, fields...`.
    pub fn field_csv(
        &mut self,
        name: &str,
        row_label: &str,
        col_label: &str,
        field: &SampledField,
    ) -> Result<(), CliError> {
        let mut header = vec![row_label, col_label];
        header.extend(field.names().iter().copied());
        let data: Vec<&[f64]> = field
            .names()
            .iter()
            .map(|n| field.field(n).unwrap())
            .collect();
        let (rows, cols) = (field.rows(), field.cols());
        let lines = (0..rows.len).flat_map(|r| {
            let data = &data;
            (0..cols.len).map(move |c| {
                let i = field.index(r, c);
                let mut line = vec![rows.coord(r), cols.coord(c)];
                line.extend(data.iter().map(|d| d[i]));
                line
            })
        });
        self.csv(name, &header, lines)
    }

    pub fn json(&mut self, name: &str, value: &Value) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
        fs::write(self.dir.join(name), text + "\n")?;
        self.written.push(name.to_string());
        Ok(())
    }
}

/// `{:.16e}` for finite values; `nan`, `inf`, `-inf` otherwise.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON number, or `null` for non-finite values.
pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}
