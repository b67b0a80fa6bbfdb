//! Structured verification reports.
//!
//! Every verification suite produces a [`Report`]: a list of named checks,
//! each carrying the identity it tested, the worst residual observed across
//! all instances, and the threshold it was held to.  Reports render as
//! aligned text for terminals and as versioned JSON for machines; both carry
//! the same numbers.

use serde::{Deserialize, Serialize};

/// Version of the JSON report layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// One verified identity, aggregated over all of its concrete instances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    /// Stable dotted identifier, e.g. `functor.compose`.
    pub id: String,
    /// The identity that was checked, written as mathematics.
    pub statement: String,
    /// What the check ranged over (group, subgroup pairs, probe count).
    pub context: String,
    /// Number of concrete instances folded into this check.
    pub instances: usize,
    /// Worst residual over all instances.
    pub residual: f64,
    /// Residual bound the check was held to.
    pub threshold: f64,
    pub pass: bool,
    /// True when the check ranged over no nonzero content (for example a
    /// functor that is identically zero); such checks pass by emptiness and
    /// are flagged so a reader can tell.
    pub vacuous: bool,
}

/// Accumulates residuals for one check across many instances.
#[derive(Debug, Clone)]
pub struct CheckBuilder {
    id: String,
    statement: String,
    context: String,
    threshold: f64,
    instances: usize,
    max_residual: f64,
    nonzero_content: bool,
}

impl CheckBuilder {
    pub fn new(id: &str, statement: &str, context: &str, threshold: f64) -> Self {
        CheckBuilder {
            id: id.to_string(),
            statement: statement.to_string(),
            context: context.to_string(),
            threshold,
            instances: 0,
            max_residual: 0.0,
            nonzero_content: false,
        }
    }

    /// Record one instance with the given residual.
    pub fn observe(&mut self, residual: f64) {
        self.instances += 1;
        self.nonzero_content = true;
        if residual > self.max_residual {
            self.max_residual = residual;
        }
    }

    /// Record an instance that is trivially satisfied (e.g. an identity on a
    /// zero-dimensional space).  Counts toward `instances` but not toward
    /// content.
    pub fn observe_vacuous(&mut self) {
        self.instances += 1;
    }

    /// Record an exact yes/no instance; a failed one is scored as residual 1
    /// against whatever threshold the check carries.
    pub fn observe_exact(&mut self, ok: bool) {
        self.observe(if ok { 0.0 } else { 1.0 });
    }

    pub fn finish(self) -> Check {
        let pass = self.max_residual < self.threshold || !self.nonzero_content;
        Check {
            id: self.id,
            statement: self.statement,
            context: self.context,
            instances: self.instances,
            residual: self.max_residual,
            threshold: self.threshold,
            pass,
            vacuous: !self.nonzero_content,
        }
    }
}

/// All checks from one verification suite run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    /// Suite name (`functor`, `scaling`, `multiplicity`, `automorphisms`,
    /// `integrity`).
    pub suite: String,
    /// Group the suite ran on.
    pub group: String,
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str, group: &str, tolerance: f64) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            suite: suite.to_string(),
            group: group.to_string(),
            tolerance,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.all_pass() { "ok" } else { "FAILED" };
        out.push_str(&format!(
            "suite {} on {}: {} checks, max residual {:.3e}, tolerance {:.1e} ... {}\n",
            self.suite,
            self.group,
            self.checks.len(),
            self.max_residual(),
            self.tolerance,
            verdict
        ));
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let vac = if c.vacuous { "  [vacuous]" } else { "" };
            out.push_str(&format!(
                "  [{status}] {:<32} {}  ({}; {} instances; residual {:.3e} < {:.1e}){vac}\n",
                c.id, c.statement, c.context, c.instances, c.residual, c.threshold
            ));
        }
        out
    }
}

/// Render several reports (one per suite) as a single JSON document.
pub fn reports_to_json(reports: &[Report]) -> serde_json::Value {
    serde_json::json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "all_pass": reports.iter().all(|r| r.all_pass()),
        "reports": reports,
    })
}
