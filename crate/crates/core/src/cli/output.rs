//! TSV tables and key=value summaries.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

/// 17 significant digits, enough to round-trip an `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Tab-separated table with a `#`-prefixed header block.
#[derive(Debug, Clone, Default)]
pub struct TsvTable {
    header: Vec<String>,
    columns: Vec<String>,
    body: String,
}

impl TsvTable {
    pub fn new(title: &str, columns: &[&str]) -> Self {
        Self {
            header: vec![format!("salpeter {title}")],
            columns: columns.iter().map(|c| c.to_string()).collect(),
            body: String::new(),
        }
    }

    /// Adds `# text` lines to the header, one per input line.
    pub fn comment(&mut self, text: &str) {
        self.header.extend(text.lines().map(str::to_string));
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns.len());
        let line = values
            .iter()
            .map(|&v| fmt_f64(v))
            .collect::<Vec<_>>()
            .join("\t");
        self.body.push_str(&line);
        self.body.push('\n');
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for h in &self.header {
            let _ = writeln!(s, "# {h}");
        }
        let _ = writeln!(s, "# {}", self.columns.join("\t"));
        s.push_str(&self.body);
        s
    }

    pub fn write_to(&self, path: &Path) -> io::Result<()> {
        let mut f = io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(self.render().as_bytes())?;
        f.flush()
    }
}

/// One thresholded diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// `true` when the value must be at least the threshold rather than at
    /// most.
    pub lower_bound: bool,
}

impl Check {
    pub fn passed(&self) -> bool {
        if self.lower_bound {
            self.value >= self.threshold
        } else {
            self.value <= self.threshold
        }
    }
}

/// Named scalar diagnostics plus pass/fail checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResidualReport {
    pub values: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl ResidualReport {
    pub fn value(&mut self, name: &str, v: f64) {
        self.values.push((name.to_string(), fmt_f64(v)));
    }

    pub fn text(&mut self, name: &str, v: impl ToString) {
        self.values.push((name.to_string(), v.to_string()));
    }

    pub fn at_most(&mut self, name: &str, value: f64, threshold: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            value,
            threshold,
            lower_bound: false,
        });
    }

    pub fn at_least(&mut self, name: &str, value: f64, threshold: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            value,
            threshold,
            lower_bound: true,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.values {
            let _ = writeln!(s, "{k}={v}");
        }
        for c in &self.checks {
            let verdict = if c.passed() { "pass" } else { "fail" };
            let op = if c.lower_bound { ">=" } else { "<=" };
            let _ = writeln!(
                s,
                "check.{}={verdict} ({} {op} {})",
                c.name,
                fmt_f64(c.value),
                fmt_f64(c.threshold)
            );
        }
        let _ = writeln!(s, "pass={}", self.passed());
        s
    }
}
