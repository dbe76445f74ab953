use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::id::NodeId;

/// Stable names of the axioms of T_univ, T_spec, T_gso and T_gso⁻.
///
/// The declaration order is the reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    E1,
    E2,
    E3,
    E4,
    E5,
    Gso1,
    Gso2,
    Gso3,
    Gso4,
    Gso5,
    Gso6,
    Gso7,
    Gso8,
    Gso9,
    O1,
    O2,
    O3,
    O4,
    O5,
    O6,
    O7,
    O8,
    O9,
    O10,
    Ex1,
    Ex2,
}

impl AxiomId {
    pub const ALL: [AxiomId; 26] = [
        AxiomId::E1,
        AxiomId::E2,
        AxiomId::E3,
        AxiomId::E4,
        AxiomId::E5,
        AxiomId::Gso1,
        AxiomId::Gso2,
        AxiomId::Gso3,
        AxiomId::Gso4,
        AxiomId::Gso5,
        AxiomId::Gso6,
        AxiomId::Gso7,
        AxiomId::Gso8,
        AxiomId::Gso9,
        AxiomId::O1,
        AxiomId::O2,
        AxiomId::O3,
        AxiomId::O4,
        AxiomId::O5,
        AxiomId::O6,
        AxiomId::O7,
        AxiomId::O8,
        AxiomId::O9,
        AxiomId::O10,
        AxiomId::Ex1,
        AxiomId::Ex2,
    ];

    pub fn name(self) -> &'static str {
        use AxiomId::*;
        match self {
            E1 => "E1",
            E2 => "E2",
            E3 => "E3",
            E4 => "E4",
            E5 => "E5",
            Gso1 => "GSO1",
            Gso2 => "GSO2",
            Gso3 => "GSO3",
            Gso4 => "GSO4",
            Gso5 => "GSO5",
            Gso6 => "GSO6",
            Gso7 => "GSO7",
            Gso8 => "GSO8",
            Gso9 => "GSO9",
            O1 => "O1",
            O2 => "O2",
            O3 => "O3",
            O4 => "O4",
            O5 => "O5",
            O6 => "O6",
            O7 => "O7",
            O8 => "O8",
            O9 => "O9",
            O10 => "O10",
            Ex1 => "EX1",
            Ex2 => "EX2",
        }
    }

    pub fn from_name(name: &str) -> Option<AxiomId> {
        AxiomId::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Consequences of T_spec checked as sanity properties of a valid spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Proposition {
    /// `earlier_than` is irreflexive.
    EarlierIrreflexive,
    /// `earlier_than` is transitive.
    EarlierTransitive,
    /// Mutually not-later-than occurrences are not nonsimultaneous.
    MutualNotLaterSimultaneous,
    /// `earlier_than(a,b)` excludes `not_later_than(b,a)`.
    EarlierExcludesReverse,
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Proposition::EarlierIrreflexive => "PROP1-IRREFLEXIVE",
            Proposition::EarlierTransitive => "PROP1-TRANSITIVE",
            Proposition::MutualNotLaterSimultaneous => "PROP2",
            Proposition::EarlierExcludesReverse => "PROP3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Axiom(AxiomId),
    Proposition(Proposition),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Axiom(a) => a.fmt(f),
            Rule::Proposition(p) => p.fmt(f),
        }
    }
}

impl From<AxiomId> for Rule {
    fn from(a: AxiomId) -> Self {
        Rule::Axiom(a)
    }
}

impl From<Proposition> for Rule {
    fn from(p: Proposition) -> Self {
        Rule::Proposition(p)
    }
}

/// One falsified instance: the rule and the values of its quantified variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub rule: Rule,
    pub witness: Vec<NodeId>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (", self.rule)?;
        for (i, x) in self.witness.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

pub const DEFAULT_WITNESS_LIMIT: usize = 100;

/// Outcome of a validation: empty iff every checked rule holds.
///
/// Witnesses beyond the cap are counted per rule in `omitted` but not stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub omitted: BTreeMap<Rule, usize>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty() && self.omitted.is_empty()
    }

    pub fn total(&self) -> usize {
        self.violations.len() + self.omitted.values().sum::<usize>()
    }

    /// Distinct rules that failed, in reporting order.
    pub fn failed_rules(&self) -> Vec<Rule> {
        let mut rules: Vec<Rule> = self
            .violations
            .iter()
            .map(|v| v.rule)
            .chain(self.omitted.keys().copied())
            .collect();
        rules.sort();
        rules.dedup();
        rules
    }

    pub fn violates(&self, rule: impl Into<Rule>) -> bool {
        let rule = rule.into();
        self.violations.iter().any(|v| v.rule == rule) || self.omitted.contains_key(&rule)
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// Merge another report, keeping violations in rule order.
    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.violations.sort_by_key(|v| v.rule);
        for (rule, n) in other.omitted {
            *self.omitted.entry(rule).or_default() += n;
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        for (rule, n) in &self.omitted {
            writeln!(f, "{rule} ... {n} more")?;
        }
        Ok(())
    }
}

/// Accumulates violations under a total cap and an optional per-rule cap.
#[derive(Debug)]
pub(crate) struct ReportBuilder {
    report: ValidationReport,
    total_limit: usize,
    per_rule_limit: Option<usize>,
    per_rule: BTreeMap<Rule, usize>,
}

impl ReportBuilder {
    pub(crate) fn new(total_limit: usize) -> Self {
        ReportBuilder {
            report: ValidationReport::default(),
            total_limit,
            per_rule_limit: None,
            per_rule: BTreeMap::new(),
        }
    }

    pub(crate) fn per_rule(mut self, limit: usize) -> Self {
        self.per_rule_limit = Some(limit);
        self
    }

    pub(crate) fn push(&mut self, rule: impl Into<Rule>, witness: Vec<NodeId>) {
        let rule = rule.into();
        let kept = self.per_rule.entry(rule).or_default();
        let under_rule_cap = self.per_rule_limit.is_none_or(|cap| *kept < cap);
        if under_rule_cap && self.report.violations.len() < self.total_limit {
            *kept += 1;
            self.report.violations.push(Violation { rule, witness });
        } else {
            *self.report.omitted.entry(rule).or_default() += 1;
        }
    }

    pub(crate) fn finish(mut self) -> ValidationReport {
        self.report.violations.sort_by_key(|v| v.rule);
        self.report
    }
}
