//! Append-only JSONL store for search results and audit reports.
//!
//! One record per line: {cmd, params, hit, report, cursor, ts}. Records for
//! the same (cmd, params) pair must have non-decreasing cursors, which makes
//! crash recovery a single scan: the last record of a group tells where to
//! resume, and a report with "complete": true means there is nothing left.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Record {
    pub cmd: String,
    pub params: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hit: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<Value>,
    pub cursor: u64,
    pub ts: u64,
}

impl Record {
    pub fn new(cmd: &str, params: Value, cursor: u64) -> Record {
        Record {
            cmd: cmd.to_string(),
            params,
            hit: None,
            report: None,
            cursor,
            ts: now(),
        }
    }
}

pub fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Where a previous run of the same search left off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResumePoint {
    pub cursor: u64,
    pub complete: bool,
}

pub struct Store {
    path: PathBuf,
}

impl Store {
    pub fn open(path: impl AsRef<Path>) -> Store {
        Store {
            path: path.as_ref().to_path_buf(),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn load(&self) -> anyhow::Result<Vec<Record>> {
        if !self.path.exists() {
            return Ok(Vec::new());
        }
        let file = File::open(&self.path)
            .with_context(|| format!("open store {}", self.path.display()))?;
        let mut records = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line)
                .with_context(|| format!("store line {} is not a record", i + 1))?;
            records.push(rec);
        }
        Ok(records)
    }

    /// Appends one record, enforcing cursor monotonicity within its
    /// (cmd, params) group.
    pub fn append(&self, rec: &Record) -> anyhow::Result<()> {
        let existing = self.load()?;
        if let Some(last) = existing
            .iter()
            .rev()
            .find(|r| r.cmd == rec.cmd && r.params == rec.params)
        {
            if rec.cursor < last.cursor {
                bail!(
                    "cursor {} regresses below the stored {} for {}",
                    rec.cursor,
                    last.cursor,
                    rec.cmd
                );
            }
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("append to {}", self.path.display()))?;
        let mut line = serde_json::to_string(rec)?;
        line.push('\n');
        file.write_all(line.as_bytes())?;
        Ok(())
    }

    /// The furthest point any stored run of (cmd, params) reached.
    pub fn resume_point(&self, cmd: &str, params: &Value) -> anyhow::Result<Option<ResumePoint>> {
        let mut point: Option<ResumePoint> = None;
        for rec in self.load()? {
            if rec.cmd != cmd || &rec.params != params {
                continue;
            }
            let complete = rec
                .report
                .as_ref()
                .and_then(|r| r.get("complete"))
                .and_then(Value::as_bool)
                .unwrap_or(false);
            let p = point.get_or_insert(ResumePoint {
                cursor: 0,
                complete: false,
            });
            p.cursor = p.cursor.max(rec.cursor);
            p.complete |= complete;
        }
        Ok(point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn temp_store(name: &str) -> Store {
        let mut path = std::env::temp_dir();
        path.push(format!("optcurve-store-{name}-{}", std::process::id()));
        let _ = std::fs::remove_file(&path);
        Store::open(path)
    }

    #[test]
    fn roundtrip_preserves_records() {
        let store = temp_store("roundtrip");
        let params = json!({"q": 47, "form": 1});
        let mut rec = Record::new("genus3 exhaust", params.clone(), 94);
        rec.hit = Some(json!({"index": 98112, "count": 87}));
        store.append(&rec).unwrap();
        let back = store.load().unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].cursor, 94);
        assert_eq!(back[0].hit.as_ref().unwrap()["index"], 98112);
    }

    #[test]
    fn cursor_regression_rejected() {
        let store = temp_store("monotone");
        let params = json!({"q": 47});
        store.append(&Record::new("x", params.clone(), 100)).unwrap();
        store.append(&Record::new("x", params.clone(), 100)).unwrap();
        store.append(&Record::new("x", params.clone(), 150)).unwrap();
        assert!(store.append(&Record::new("x", params.clone(), 149)).is_err());
        // Other groups are unaffected.
        store.append(&Record::new("y", params, 3)).unwrap();
    }

    #[test]
    fn resume_point_reports_completion() {
        let store = temp_store("resume");
        let params = json!({"q": 47, "form": 1});
        assert_eq!(store.resume_point("s", &params).unwrap(), None);
        store.append(&Record::new("s", params.clone(), 1000)).unwrap();
        assert_eq!(
            store.resume_point("s", &params).unwrap(),
            Some(ResumePoint {
                cursor: 1000,
                complete: false
            })
        );
        let mut done = Record::new("s", params.clone(), 207646);
        done.report = Some(json!({"complete": true, "scanned": 207646}));
        store.append(&done).unwrap();
        let p = store.resume_point("s", &params).unwrap().unwrap();
        assert!(p.complete);
        assert_eq!(p.cursor, 207646);
    }

    #[test]
    fn missing_file_loads_empty() {
        let store = temp_store("missing");
        assert!(store.load().unwrap().is_empty());
    }
}
