use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub key: String,
    pub status: Status,
    pub details: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: Value,
    pub cells: Vec<Cell>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(suite: &str, config: Value) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            config,
            cells: Vec::new(),
            summary: Summary { pass: 0, fail: 0 },
        }
    }

    pub fn push(
        &mut self,
        key: impl Into<String>,
        passed: bool,
        details: impl Into<String>,
        data: Option<Value>,
    ) {
        let status = if passed { Status::Pass } else { Status::Fail };
        match status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
        }
        self.cells.push(Cell {
            key: key.into(),
            status,
            details: details.into(),
            data,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn cell(&self, key: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.key == key)
    }

    pub fn write_text(&self, out: &mut dyn Write, quiet: bool) -> io::Result<()> {
        for cell in &self.cells {
            if quiet && cell.status == Status::Pass {
                continue;
            }
            let tag = match cell.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            writeln!(out, "{tag} {} {}", cell.key, cell.details)?;
        }
        writeln!(
            out,
            "{}: {} passed, {} failed",
            self.suite, self.summary.pass, self.summary.fail
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_json(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts_and_text() {
        let mut r = VerificationReport::new("demo", serde_json::json!({"x": 1}));
        r.push("a", true, "fine", None);
        r.push("b", false, "broken", None);
        assert_eq!(r.summary, Summary { pass: 1, fail: 1 });
        assert!(!r.all_passed());
        let mut buf = Vec::new();
        r.write_text(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "FAIL b broken\ndemo: 1 passed, 1 failed\n");
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["summary"]["fail"], 1);
        assert_eq!(json["cells"][0]["status"], "pass");
    }
}
