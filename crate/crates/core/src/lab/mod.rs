//! Executable checks of the completeness, transfer and ordering claims for
//! the fields in this crate. Every check ends up as an [`Assertion`] in a
//! [`DemoReport`].

use std::fmt;

use serde::Serialize;
use serde_json::Value;

mod axioms;
mod demos;
mod frechet;
pub mod sample;
mod transfer;

pub use axioms::check_axioms;
pub use demos::{
    demo_cantor_gap, demo_cauchy_completeness, demo_monotone_failure, demo_non_archimedean,
    demo_weierstrass_failure, pade_sqrt_one_plus_t, sqrt_one_plus_t_taylor,
};
pub use frechet::{demo_frechet, frechet_compare, FrechetOrder, SequenceSpec};
pub use transfer::{check_transfer, cubic_identity, inequality_system, sine_addition, TransferSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unresolved,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Unresolved => "UNRESOLVED",
        })
    }
}

/// One checked claim. A family of instances (`t < 1/n` for every `n`) is
/// one assertion with `cases` individual checks; it passes only if all of
/// them do, and `witness` names the first instance that did not.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub desc: String,
    pub verdict: Verdict,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Overall outcome of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unresolved,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub name: String,
    pub params: serde_json::Map<String, Value>,
    pub assertions: Vec<Assertion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_applicable: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl DemoReport {
    pub fn new(name: &str) -> DemoReport {
        DemoReport {
            name: name.to_string(),
            params: serde_json::Map::new(),
            assertions: Vec::new(),
            not_applicable: None,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> DemoReport {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn not_applicable(mut self, reason: impl Into<String>) -> DemoReport {
        self.not_applicable = Some(reason.into());
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn push(&mut self, assertion: Assertion) {
        self.assertions.push(assertion);
    }

    /// Records a single check.
    pub fn check(&mut self, desc: impl Into<String>, verdict: Verdict, witness: Option<String>) {
        self.push(Assertion { desc: desc.into(), verdict, cases: 1, witness });
    }

    pub fn family(&mut self, desc: impl Into<String>) -> Family<'_> {
        Family { report: self, desc: desc.into(), cases: 0, verdict: Verdict::Pass, witness: None }
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.assertions.iter().filter(|a| a.verdict == verdict).count()
    }

    pub fn status(&self) -> Status {
        if self.not_applicable.is_some() {
            Status::NotApplicable
        } else if self.count(Verdict::Fail) > 0 {
            Status::Fail
        } else if self.count(Verdict::Unresolved) > 0 {
            Status::Unresolved
        } else {
            Status::Pass
        }
    }

    pub fn all_pass(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["status"] = serde_json::to_value(self.status()).expect("status serializes");
        v
    }
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "demo {}", self.name)?;
        for (k, v) in &self.params {
            match v {
                Value::String(s) => write!(f, " {k}={s}")?,
                other => write!(f, " {k}={other}")?,
            }
        }
        writeln!(f)?;
        if let Some(reason) = &self.not_applicable {
            return writeln!(f, "  not applicable: {reason}");
        }
        for a in &self.assertions {
            write!(f, "  [{}] {}", a.verdict, a.desc)?;
            if a.cases != 1 {
                write!(f, " ({} cases)", a.cases)?;
            }
            if let Some(w) = &a.witness {
                write!(f, "  -- {w}")?;
            }
            writeln!(f)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        write!(
            f,
            "  {} pass, {} fail, {} unresolved",
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Unresolved)
        )
    }
}

/// Accumulates the instances of one family assertion; pushed on
/// [`Family::finish`].
pub struct Family<'a> {
    report: &'a mut DemoReport,
    desc: String,
    cases: u64,
    verdict: Verdict,
    witness: Option<String>,
}

impl Family<'_> {
    pub fn record(&mut self, verdict: Verdict, witness: impl FnOnce() -> String) {
        self.cases += 1;
        let worse = matches!(
            (self.verdict, verdict),
            (Verdict::Pass, Verdict::Fail | Verdict::Unresolved) | (Verdict::Unresolved, Verdict::Fail)
        );
        if worse {
            self.verdict = verdict;
            self.witness = Some(witness());
        }
    }

    pub fn pass_if(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.record(if ok { Verdict::Pass } else { Verdict::Fail }, witness);
    }

    pub fn finish(self) {
        let Family { report, desc, cases, verdict, witness } = self;
        report.push(Assertion { desc, verdict, cases, witness });
    }
}

/// Maps an undecided comparison to [`Verdict::Unresolved`] and any other
/// error to [`Verdict::Fail`].
pub(crate) fn verdict_of(r: crate::Result<bool>) -> Verdict {
    match r {
        Ok(true) => Verdict::Pass,
        Ok(false) => Verdict::Fail,
        Err(e) if e.is_unresolved() => Verdict::Unresolved,
        Err(_) => Verdict::Fail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_keeps_first_failure() {
        let mut r = DemoReport::new("x");
        let mut fam = r.family("n < 5");
        for n in 0..10 {
            fam.pass_if(n < 5, || format!("n = {n}"));
        }
        fam.finish();
        assert_eq!(r.assertions[0].cases, 10);
        assert_eq!(r.assertions[0].witness.as_deref(), Some("n = 5"));
        assert_eq!(r.status(), Status::Fail);
        let j = r.to_json();
        assert_eq!(j["status"], "fail");
        assert_eq!(j["assertions"][0]["verdict"], "fail");
    }
}
