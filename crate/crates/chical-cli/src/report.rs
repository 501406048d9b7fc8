//! Machine-readable reports with stable key ordering.
//!
//! A report renders as one `key: value` line per field, in a fixed order:
//! command, argv echo, seed, inputs, results, checks (with witnesses),
//! summary, timing.  The timing line is the only non-deterministic part, so
//! golden comparisons strip it.

use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl CheckLine {
    pub fn pass(name: impl Into<String>) -> CheckLine {
        CheckLine {
            name: name.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: String) -> CheckLine {
        CheckLine {
            name: name.into(),
            pass: false,
            witness: Some(witness),
        }
    }

    pub fn from_result(name: impl Into<String>, r: chical_core::CheckResult) -> CheckLine {
        match r {
            Ok(()) => CheckLine::pass(name),
            Err(e) => CheckLine::fail(name, format!("{}: {}", e.check, e.witness)),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub argv: String,
    pub seed: Option<u64>,
    pub inputs: Vec<(String, String)>,
    pub results: Vec<(String, String)>,
    pub checks: Vec<CheckLine>,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            ..Report::default()
        }
    }

    pub fn input(&mut self, key: impl Into<String>, value: impl ToString) {
        self.inputs.push((key.into(), value.to_string()));
    }

    pub fn result(&mut self, key: impl Into<String>, value: impl ToString) {
        self.results.push((key.into(), value.to_string()));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        if !self.argv.is_empty() {
            writeln!(out, "argv: {}", self.argv).unwrap();
        }
        if let Some(seed) = self.seed {
            writeln!(out, "seed: {seed}").unwrap();
        }
        for (k, v) in &self.inputs {
            writeln!(out, "input.{k}: {v}").unwrap();
        }
        for (k, v) in &self.results {
            writeln!(out, "{k}: {v}").unwrap();
        }
        for c in &self.checks {
            writeln!(
                out,
                "check: {} {}",
                c.name,
                if c.pass { "pass" } else { "fail" }
            )
            .unwrap();
            if let Some(w) = &c.witness {
                writeln!(out, "witness: {w}").unwrap();
            }
        }
        if !self.checks.is_empty() {
            let passed = self.checks.iter().filter(|c| c.pass).count();
            writeln!(
                out,
                "summary: {passed} passed, {} failed",
                self.checks.len() - passed
            )
            .unwrap();
        }
        writeln!(out, "timing_ms: {}", self.timing_ms).unwrap();
        out
    }

    /// The rendering without the timing line, for golden comparisons.
    pub fn render_stable(&self) -> String {
        strip_timing(&self.render())
    }
}

/// Removes the timing line from a rendered report.
pub fn strip_timing(rendered: &str) -> String {
    rendered
        .lines()
        .filter(|l| !l.starts_with("timing_ms:"))
        .map(|l| format!("{l}\n"))
        .collect()
}
