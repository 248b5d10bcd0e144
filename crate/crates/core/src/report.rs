//! Named pass/fail checks with replayable witnesses.
//!
//! Every validator in the crate produces a [`ValidationReport`]. A failing
//! check always carries the concrete points, scalars, field elements or
//! arrows that exhibit the failure, rendered with the ids used in the input.

use std::fmt;

/// One item of a failure witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessItem {
    Point(String),
    Scalar(String),
    Element(String),
    /// An arrow `label: src -> dst`; when `src == dst` the label is a scalar id.
    Arrow {
        src: String,
        dst: String,
        label: String,
    },
    Note(String),
}

impl fmt::Display for WitnessItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessItem::Point(p) => write!(f, "point={p}"),
            WitnessItem::Scalar(s) => write!(f, "scalar={s}"),
            WitnessItem::Element(e) => write!(f, "elem={e}"),
            WitnessItem::Arrow { src, dst, label } => write!(f, "[{src},{dst},{label}]"),
            WitnessItem::Note(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Empty iff `passed`.
    pub witness: Vec<WitnessItem>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            witness: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, witness: Vec<WitnessItem>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            witness,
        }
    }

    /// `Ok(())` becomes a pass, `Err(witness)` a failure.
    pub fn from_result(name: impl Into<String>, r: Result<(), Vec<WitnessItem>>) -> Self {
        match r {
            Ok(()) => Check::pass(name),
            Err(w) => Check::fail(name, w),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "CHECK {} PASS", self.name)
        } else {
            write!(f, "CHECK {} FAIL", self.name)?;
            for w in &self.witness {
                write!(f, " {w}")?;
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    pub fn is_clean(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `Ok(())` if every item is `None`, otherwise the first witness.
pub(crate) fn first_fail<I>(it: I) -> Result<(), Vec<WitnessItem>>
where
    I: IntoIterator<Item = Option<Vec<WitnessItem>>>,
{
    match it.into_iter().flatten().next() {
        Some(w) => Err(w),
        None => Ok(()),
    }
}
