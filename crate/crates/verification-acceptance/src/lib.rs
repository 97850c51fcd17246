//! Bookkeeping for the acceptance run: each criterion collects named
//! sub-checks, and the scoreboard prints one line per criterion.

use std::fmt;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct SubCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Sub-checks of one criterion. A criterion passes when all of them do.
#[derive(Debug, Clone, Default)]
pub struct Checks {
    items: Vec<SubCheck>,
}

impl Checks {
    pub fn new() -> Self {
        Self::default()
    }

    /// `value <= tolerance`; NaN fails.
    pub fn bound(&mut self, name: impl Into<String>, value: f64, tolerance: f64) -> bool {
        let pass = value <= tolerance;
        self.items.push(SubCheck { name: name.into(), pass, detail: format!("{value:.3e} <= {tolerance:.1e}") });
        pass
    }

    /// `value >= threshold`; a missing value fails.
    pub fn at_least(&mut self, name: impl Into<String>, value: Option<f64>, threshold: f64) -> bool {
        let pass = value.is_some_and(|v| v >= threshold);
        let shown = value.map_or("none".to_string(), |v| format!("{v:.3}"));
        self.items.push(SubCheck { name: name.into(), pass, detail: format!("{shown} >= {threshold}") });
        pass
    }

    /// Every entry strictly smaller than the one before.
    pub fn decreasing(&mut self, name: impl Into<String>, values: &[f64]) -> bool {
        let pass = values.len() >= 2 && values.windows(2).all(|w| w[1] < w[0]);
        let shown: Vec<String> = values.iter().map(|v| format!("{v:.3e}")).collect();
        self.items.push(SubCheck { name: name.into(), pass, detail: format!("decreasing [{}]", shown.join(", ")) });
        pass
    }

    pub fn flag(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> bool {
        self.items.push(SubCheck { name: name.into(), pass, detail: detail.into() });
        pass
    }

    pub fn items(&self) -> &[SubCheck] {
        &self.items
    }

    pub fn passed(&self) -> bool {
        !self.items.is_empty() && self.items.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SubCheck> {
        self.items.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub checks: Checks,
    /// Set when the criterion could not be evaluated at all.
    pub error: Option<String>,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.checks.passed()
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {verdict} {} ({} checks, {:.1}s)", self.id, self.title, self.checks.items().len(), self.seconds)?;
        if let Some(e) = &self.error {
            write!(f, "; error: {e}")?;
        }
        for c in self.checks.failures() {
            write!(f, "; {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Default)]
pub struct Scoreboard {
    results: Vec<CriterionResult>,
}

impl Scoreboard {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs one criterion, prints its line and keeps the result. An `Err`
    /// from the body fails the criterion but keeps the checks gathered so far.
    pub fn run<E: fmt::Display>(
        &mut self,
        id: u32,
        title: &'static str,
        body: impl FnOnce(&mut Checks) -> Result<(), E>,
    ) -> &CriterionResult {
        let start = Instant::now();
        let mut checks = Checks::new();
        let error = body(&mut checks).err().map(|e| e.to_string());
        let r = CriterionResult { id, title, checks, error, seconds: start.elapsed().as_secs_f64() };
        println!("{r}");
        self.results.push(r);
        self.results.last().expect("just pushed")
    }

    pub fn results(&self) -> &[CriterionResult] {
        &self.results
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CriterionResult::pass)
    }

    pub fn summary(&self) -> String {
        let passed = self.results.iter().filter(|r| r.pass()).count();
        let failed: Vec<String> = self.results.iter().filter(|r| !r.pass()).map(|r| r.id.to_string()).collect();
        if failed.is_empty() {
            format!("acceptance: {passed}/{} criteria passed", self.results.len())
        } else {
            format!("acceptance: {passed}/{} criteria passed; failed: {}", self.results.len(), failed.join(", "))
        }
    }
}

/// Writes every sub-check, one per line, for the detailed log.
pub fn detail_lines(r: &CriterionResult) -> Vec<String> {
    r.checks
        .items()
        .iter()
        .map(|c| format!("  [{}] {:>2}.{}: {}", if c.pass { "ok" } else { "FAIL" }, r.id, c.name, c.detail))
        .collect()
}
