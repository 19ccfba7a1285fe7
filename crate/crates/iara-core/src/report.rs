//! Structured verification reports. Every verdict carries the window it was
//! established on, and rendering is deterministic so identical configs give
//! byte-identical reports.

use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    /// e.g. "window |lambda| <= 3" or "full space"
    pub window: String,
    pub detail: String,
}

impl Verdict {
    pub fn pass(name: impl Into<String>, window: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            pass: true,
            window: window.into(),
            detail: detail.into(),
        }
    }

    pub fn fail(name: impl Into<String>, window: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            pass: false,
            window: window.into(),
            detail: detail.into(),
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "{}  {} [{}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.window
        );
        if !self.detail.is_empty() {
            let _ = write!(s, ": {}", self.detail);
        }
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn extend_verdicts(&mut self, vs: impl IntoIterator<Item = Verdict>) {
        self.verdicts.extend(vs);
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn all_pass(&self) -> bool {
        self.sections.iter().all(|s| s.all_pass())
    }

    pub fn verdict_count(&self) -> (usize, usize) {
        let total: usize = self.sections.iter().map(|s| s.verdicts.len()).sum();
        let passed: usize = self
            .sections
            .iter()
            .map(|s| s.verdicts.iter().filter(|v| v.pass).count())
            .sum();
        (passed, total)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            let _ = writeln!(out, "== {} ==", s.title);
            for l in &s.lines {
                let _ = writeln!(out, "{}", l);
            }
            for v in &s.verdicts {
                let _ = writeln!(out, "{}", v.render());
            }
        }
        let (p, t) = self.verdict_count();
        let _ = writeln!(out, "== summary ==");
        let _ = writeln!(
            out,
            "{}: {} of {} checks passed",
            if self.all_pass() { "OK" } else { "FAILED" },
            p,
            t
        );
        out
    }
}
