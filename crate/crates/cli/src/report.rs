//! Check rows, CSV and plain-text rendering.

use std::fmt::Write as _;

pub const SCHEMA: &str = "# kk-index-lab v1";

/// One checked quantity: passes iff `residual ≤ limit`.
///
/// `value` and `reference` are the raw numbers behind the residual, e.g. a
/// measured norm and its bound, or a kernel dimension and its prediction.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub quantity: String,
    pub truncation: String,
    pub value: f64,
    pub reference: f64,
    pub residual: f64,
    pub limit: f64,
}

impl Check {
    pub fn margin(&self) -> f64 {
        self.limit - self.residual
    }

    pub fn pass(&self) -> bool {
        self.residual <= self.limit
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub experiment: String,
    pub checks: Vec<Check>,
}

fn num(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.9e}")
    }
}

impl Report {
    pub fn new(experiment: &str) -> Self {
        Report {
            experiment: experiment.into(),
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, quantity: impl Into<String>, truncation: impl Into<String>, value: f64, reference: f64, residual: f64, limit: f64) {
        self.checks.push(Check {
            quantity: quantity.into(),
            truncation: truncation.into(),
            value,
            reference,
            residual,
            limit,
        });
    }

    /// `value ≤ bound`: residual `value − bound`, so the margin is the slack.
    pub fn at_most(&mut self, quantity: impl Into<String>, truncation: impl Into<String>, value: f64, bound: f64) {
        self.check(quantity, truncation, value, bound, value - bound, 0.0);
    }

    /// `|value − reference| ≤ limit`.
    pub fn close(&mut self, quantity: impl Into<String>, truncation: impl Into<String>, value: f64, reference: f64, limit: f64) {
        self.check(quantity, truncation, value, reference, (value - reference).abs(), limit);
    }

    /// A residual with nothing to compare against.
    pub fn residual(&mut self, quantity: impl Into<String>, truncation: impl Into<String>, residual: f64, limit: f64) {
        self.check(quantity, truncation, residual, 0.0, residual, limit);
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass()).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["experiment", "quantity", "truncation", "value", "reference", "residual", "limit", "margin", "pass"])
            .expect("in-memory write");
        for c in &self.checks {
            w.write_record([
                self.experiment.as_str(),
                &c.quantity,
                &c.truncation,
                &num(c.value),
                &num(c.reference),
                &num(c.residual),
                &num(c.limit),
                &num(c.margin()),
                if c.pass() { "true" } else { "false" },
            ])
            .expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields");
        format!("{SCHEMA}\n{body}")
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}: {} ({} checks, {} failed)",
            self.experiment,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.failures()
        );
        for c in self.checks.iter().filter(|c| !c.pass()) {
            let _ = writeln!(
                s,
                "  FAIL {} [{}]: residual {} > limit {}",
                c.quantity,
                c.truncation,
                num(c.residual),
                num(c.limit)
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = Report::new("demo");
        r.at_most("norm", "N=1", 0.5, 1.0);
        r.close("dim", "N=2, E=3", 11.0, 11.0, 0.0);
        r.residual("gap", "", f64::NAN, 1e-12);
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SCHEMA);
        assert_eq!(lines[2], "demo,norm,N=1,5.000000000e-1,1,-5.000000000e-1,0,5.000000000e-1,true");
        assert_eq!(lines[3], "demo,dim,\"N=2, E=3\",11,11,0,0,0,true");
        assert!(lines[4].ends_with("false"));
        assert_eq!(r.failures(), 1);
    }
}
