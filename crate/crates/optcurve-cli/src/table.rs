//! Renders q / maximal / minimal tables in the three output formats.
//!
//! A "-" cell always means "the declared search scope found nothing", never
//! "nobody looked"; the JSON form carries the scope string alongside so the
//! two cases stay distinguishable.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = optcurve::Error;
    fn from_str(s: &str) -> optcurve::Result<Format> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(optcurve::Error::InvalidInput(format!(
                "unknown format '{s}', expected text, json or csv"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Format::Text => write!(f, "text"),
            Format::Json => write!(f, "json"),
            Format::Csv => write!(f, "csv"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableRow {
    pub q: u64,
    /// None renders as "-": the declared scope was searched and came up empty.
    pub maximal: Option<String>,
    pub minimal: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveTable {
    pub title: String,
    /// What a "-" cell has been checked against, e.g. "exhaustive forms 1-3".
    pub scope: String,
    pub rows: Vec<TableRow>,
}

impl CurveTable {
    pub fn new(title: &str, scope: &str) -> CurveTable {
        CurveTable {
            title: title.to_string(),
            scope: scope.to_string(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, q: u64, maximal: Option<String>, minimal: Option<String>) {
        self.rows.push(TableRow {
            q,
            maximal,
            minimal,
        });
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Csv => self.to_csv(),
            Format::Json => serde_json::to_string_pretty(self).expect("table serializes") + "\n",
        }
    }

    fn to_text(&self) -> String {
        let dash = |c: &Option<String>| c.clone().unwrap_or_else(|| "-".into());
        let wq = self
            .rows
            .iter()
            .map(|r| r.q.to_string().len())
            .chain(["q".len()])
            .max()
            .unwrap();
        let wmax = self
            .rows
            .iter()
            .map(|r| dash(&r.maximal).len())
            .chain(["maximal".len()])
            .max()
            .unwrap();
        let mut out = format!("{}  (absent = {})\n", self.title, self.scope);
        out.push_str(&format!(
            "{:>wq$}  {:<wmax$}  {}\n",
            "q", "maximal", "minimal"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:>wq$}  {:<wmax$}  {}\n",
                r.q,
                dash(&r.maximal),
                dash(&r.minimal)
            ));
        }
        out
    }

    fn to_csv(&self) -> String {
        let dash = |c: &Option<String>| c.clone().unwrap_or_else(|| "-".into());
        let mut out = String::from("q,maximal,minimal\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.q, dash(&r.maximal), dash(&r.minimal)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CurveTable {
        let mut t = CurveTable::new("genus 3 covers", "exhaustive forms 1-3");
        t.push(47, Some("z^2=44x^2+19x+23+y".into()), None);
        t
    }

    #[test]
    fn absent_cells_render_as_dash() {
        let text = sample().render(Format::Text);
        assert!(text.contains("z^2=44x^2+19x+23+y"));
        assert!(text.lines().last().unwrap().trim_end().ends_with('-'));
        let csv = sample().render(Format::Csv);
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.ends_with(",-\n"));
    }

    #[test]
    fn json_keeps_absent_and_scope_distinguishable() {
        let json = sample().render(Format::Json);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rows"][0]["minimal"], serde_json::Value::Null);
        assert_eq!(v["scope"], "exhaustive forms 1-3");
    }

    #[test]
    fn empty_table_renders_header_only() {
        let t = CurveTable::new("empty", "nothing searched");
        let csv = t.render(Format::Csv);
        assert_eq!(csv, "q,maximal,minimal\n");
        let text = t.render(Format::Text);
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn format_parses() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("yaml".parse::<Format>().is_err());
    }
}
