use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "equihf-report/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub input_digest: String,
    pub values: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut out = String::with_capacity(71);
    out.push_str("sha256:");
    for b in hash {
        let _ = write!(out, "{b:02x}");
    }
    out
}

impl Report {
    pub fn new(command: impl Into<String>, input: &[u8]) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            input_digest: digest(input),
            values: BTreeMap::new(),
            verdicts: Vec::new(),
            tables: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.values.insert(key.into(), serde_json::to_value(v).expect("report values serialize"));
        self
    }

    pub fn verdict(&mut self, name: impl Into<String>, passed: bool, diagnostics: Vec<String>) -> &mut Self {
        self.verdicts.push(Verdict { name: name.into(), passed, diagnostics });
        self
    }

    pub fn table(&mut self, name: &str, columns: &[&str], rows: Vec<Vec<String>>) -> &mut Self {
        self.tables.push(Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows });
        self
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failed_verdicts(&self) -> Vec<&str> {
        self.verdicts.iter().filter(|v| !v.passed).map(|v| v.name.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.schema);
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "input: {}", self.input_digest);
        for (k, v) in &self.values {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{k} = {shown}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "table {} ({} rows)", t.name, t.rows.len());
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for row in &t.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                format!("  {}", padded.join("  ").trim_end())
            };
            let _ = writeln!(out, "{}", line(&t.columns));
            for row in &t.rows {
                let _ = writeln!(out, "{}", line(row));
            }
        }
        for v in &self.verdicts {
            let _ = writeln!(out, "[{}] {}", if v.passed { "PASS" } else { "FAIL" }, v.name);
            for d in &v.diagnostics {
                let _ = writeln!(out, "    {d}");
            }
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "timing: {ms:.3} ms");
        }
        let _ = writeln!(out, "result: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(digest(b""), "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn text_lists_verdicts_and_result() {
        let mut r = Report::new("check x", b"abc");
        r.value("dim", 2).verdict("d_squared_zero", false, vec!["d^2(x) = y".into()]);
        let text = r.to_text();
        assert!(text.contains("[FAIL] d_squared_zero"));
        assert!(text.ends_with("result: FAIL\n"));
        assert!(r.to_json().contains("\"schema\": \"equihf-report/1\""));
    }
}
