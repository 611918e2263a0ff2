//! Reporting helpers for the `acceptance` test target.

use std::io::Write;
use std::time::Duration;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Verdict {
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {:<28} {} ({}; {:.1} s)",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }

    /// Writes the line to the process stderr, bypassing the test harness's
    /// capture, then panics if the criterion failed.
    pub fn finish(&self) {
        let _ = writeln!(std::io::stderr().lock(), "{}", self.line());
        assert!(self.pass, "{}", self.line());
    }
}

/// Counts failures per named sub-check and keeps the first few examples.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    entries: Vec<(String, usize, Vec<String>)>,
    pub checked: usize,
}

impl Tally {
    pub fn record(&mut self, check: &str, ok: bool, example: impl FnOnce() -> String) {
        self.checked += 1;
        let i = match self.entries.iter().position(|e| e.0 == check) {
            Some(i) => i,
            None => {
                self.entries.push((check.to_string(), 0, Vec::new()));
                self.entries.len() - 1
            }
        };
        if !ok {
            let e = &mut self.entries[i];
            e.1 += 1;
            if e.2.len() < 3 {
                e.2.push(example());
            }
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        for (name, fails, ex) in other.entries {
            match self.entries.iter_mut().find(|e| e.0 == name) {
                Some(e) => {
                    e.1 += fails;
                    for x in ex {
                        if e.2.len() < 3 {
                            e.2.push(x);
                        }
                    }
                }
                None => self.entries.push((name, fails, ex)),
            }
        }
    }

    pub fn violations(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn violations_of(&self, check: &str) -> usize {
        self.entries.iter().filter(|e| e.0 == check).map(|e| e.1).sum()
    }

    pub fn summary(&self) -> String {
        let bad: Vec<String> = self
            .entries
            .iter()
            .filter(|e| e.1 > 0)
            .map(|e| format!("{}: {} e.g. {}", e.0, e.1, e.2.join(" | ")))
            .collect();
        if bad.is_empty() {
            format!("{} checks, 0 violations", self.checked)
        } else {
            format!("{} checks, {} violations [{}]", self.checked, self.violations(), bad.join("; "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_counts_and_merges() {
        let mut a = Tally::default();
        a.record("x", true, String::new);
        a.record("x", false, || "g1".into());
        let mut b = Tally::default();
        b.record("x", false, || "g2".into());
        b.record("y", true, String::new);
        a.merge(b);
        assert_eq!(a.checked, 4);
        assert_eq!(a.violations(), 2);
        assert_eq!(a.violations_of("y"), 0);
        assert!(a.summary().contains("g1 | g2"));
    }
}
