//! Reports and their three renderings. Ordering is fixed by construction, so
//! equal inputs give byte-identical output.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub value: String,
    /// Value the record is checked against, when there is one.
    pub target: Option<String>,
    pub error: Option<f64>,
    pub pass: bool,
}

impl Record {
    pub fn new(name: impl Into<String>, value: impl Into<String>, pass: bool) -> Self {
        Record { name: name.into(), params: BTreeMap::new(), value: value.into(), target: None, error: None, pass }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    pub fn target(mut self, t: impl Into<String>) -> Self {
        self.target = Some(t.into());
        self
    }

    pub fn error(mut self, e: f64) -> Self {
        self.error = Some(e);
        self
    }

    fn params_text(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub metadata: BTreeMap<String, String>,
    pub records: Vec<Record>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("version".to_string(), env!("CARGO_PKG_VERSION").to_string());
        Report { command: command.into(), metadata, records: Vec::new() }
    }

    pub fn meta(&mut self, k: &str, v: impl ToString) {
        self.metadata.insert(k.to_string(), v.to_string());
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Table => self.table(),
            Format::Json => self.json(),
            Format::Csv => self.csv(),
        }
    }

    fn json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a Report,
            pass: bool,
        }
        let mut s = serde_json::to_string_pretty(&Out { report: self, pass: self.pass() }).expect("report serializes");
        s.push('\n');
        s
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "params", "value", "target", "error", "pass"]).expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.name.clone(),
                r.params_text(),
                r.value.clone(),
                r.target.clone().unwrap_or_default(),
                r.error.map(|e| format!("{e:e}")).unwrap_or_default(),
                r.pass.to_string(),
            ])
            .expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
        out
    }

    fn table(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for (k, v) in &self.metadata {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        let rows: Vec<[String; 6]> = self
            .records
            .iter()
            .map(|r| {
                [
                    r.name.clone(),
                    r.params_text(),
                    r.value.clone(),
                    r.target.clone().unwrap_or_else(|| "-".into()),
                    r.error.map(|e| format!("{e:.2e}")).unwrap_or_else(|| "-".into()),
                    if r.pass { "ok" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        let head = ["check", "params", "value", "target", "error", "status"].map(String::from);
        let mut width = head.clone().map(|h| h.len());
        for r in &rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        for r in std::iter::once(&head).chain(&rows) {
            let cells: Vec<String> = r.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out.push_str(if self.pass() { "PASS\n" } else { "FAIL\n" });
        out
    }
}

/// Shortest round-trip text of a float, in exponent form when very small or
/// large.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e7).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}
