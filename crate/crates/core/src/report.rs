//! Verification reports: named checks grouped into suites, rendered as
//! text or as a JSON tree.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::ncalg::{SmashElement, Tensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// The rewrite system was not certified up to the degree needed.
    Inconclusive,
}

impl Outcome {
    /// Worst of two outcomes (fail beats inconclusive beats pass).
    pub fn combine(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "inconclusive",
        }
    }

    /// Process exit status for this outcome.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub identity: String,
    pub case: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub millis: f64,
}

impl Check {
    pub fn new(identity: impl Into<String>, case: impl Into<String>, outcome: Outcome) -> Self {
        Check { identity: identity.into(), case: case.into(), outcome, witness: None, notes: Vec::new(), millis: 0.0 }
    }

    pub fn pass(identity: impl Into<String>, case: impl Into<String>) -> Self {
        Check::new(identity, case, Outcome::Pass)
    }

    pub fn fail(identity: impl Into<String>, case: impl Into<String>, witness: impl Into<String>) -> Self {
        Check::new(identity, case, Outcome::Fail).with_witness(witness)
    }

    /// Pass iff `residual` is zero. A nonzero residual counts as a failure
    /// only when the reduction was certified (`provisional == false`).
    pub fn residual(
        identity: impl Into<String>,
        case: impl Into<String>,
        residual: &SmashElement,
        provisional: bool,
    ) -> Self {
        match residual.leading() {
            None => Check::pass(identity, case),
            Some((m, c)) => {
                let lead = residual.ctx().term(m.clone(), c.clone());
                let outcome = if provisional { Outcome::Inconclusive } else { Outcome::Fail };
                Check::new(identity, case, outcome)
                    .with_witness(format!("leading term {lead} ({} terms)", residual.len()))
            }
        }
    }

    /// Same as [`Check::residual`] for tensors.
    pub fn tensor_residual(
        identity: impl Into<String>,
        case: impl Into<String>,
        residual: &Tensor,
        provisional: bool,
    ) -> Self {
        match residual.terms().iter().next_back() {
            None => Check::pass(identity, case),
            Some((k, c)) => {
                let mut lead = Tensor::zero(residual.ctxs().to_vec());
                lead.add_term(k.clone(), c.clone());
                let outcome = if provisional { Outcome::Inconclusive } else { Outcome::Fail };
                Check::new(identity, case, outcome)
                    .with_witness(format!("leading term {lead} ({} terms)", residual.len()))
            }
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.millis = start.elapsed().as_secs_f64() * 1e3;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Suite {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn new(name: impl Into<String>) -> Self {
        Suite { name: name.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn outcome(&self) -> Outcome {
        self.checks.iter().fold(Outcome::Pass, |o, c| o.combine(c.outcome))
    }

    pub fn passed(&self) -> bool {
        self.outcome() == Outcome::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.outcome != Outcome::Pass)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub outcome: Outcome,
    pub suites: Vec<Suite>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, instance: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            instance: instance.into(),
            seed: None,
            outcome: Outcome::Pass,
            suites: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn push_suite(&mut self, s: Suite) {
        self.outcome = self.outcome.combine(s.outcome());
        self.suites.push(s);
    }

    pub fn line(&mut self, l: impl Into<String>) {
        self.lines.push(l.into());
    }

    pub fn set_outcome(&mut self, o: Outcome) {
        self.outcome = o;
    }

    pub fn to_text(&self, timing: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} on {}", self.command, self.instance);
        if let Some(s) = self.seed {
            let _ = writeln!(out, "seed {s}");
        }
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        for s in &self.suites {
            let _ = writeln!(out, "[{}] {}", s.name, s.outcome().label());
            for c in &s.checks {
                let _ = write!(out, "  {:<12} {} {}", c.outcome.label(), c.identity, c.case);
                if timing {
                    let _ = write!(out, "  ({:.1} ms)", c.millis);
                }
                out.push('\n');
                if let Some(w) = &c.witness {
                    let _ = writeln!(out, "      witness: {w}");
                }
                for n in &c.notes {
                    let _ = writeln!(out, "      {n}");
                }
            }
        }
        let _ = writeln!(out, "result: {}", self.outcome.label());
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
