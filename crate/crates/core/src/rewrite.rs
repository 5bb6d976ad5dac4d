//! Labeled rewrite rules and the positioned rewrite step.

use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::is_identifier;
use crate::term::{match_term, Position, Substitution, Term};

/// A labeled rule `label(x1..xn) : lhs => rhs`, where `x1..xn` are the
/// variables of `lhs` in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    label: String,
    params: Vec<String>,
    lhs: Term,
    rhs: Term,
}

impl Rule {
    pub fn new(label: impl Into<String>, lhs: Term, rhs: Term) -> Result<Rule> {
        let label = label.into();
        let invalid = |reason: &str| Error::InvalidRule {
            label: label.clone(),
            reason: reason.to_string(),
        };
        if !is_identifier(&label) {
            return Err(invalid("label is not an identifier"));
        }
        if lhs.is_var() {
            return Err(invalid("left-hand side is a variable"));
        }
        let params = lhs.vars();
        if let Some(x) = rhs.vars().into_iter().find(|x| !params.contains(x)) {
            return Err(invalid(&format!("variable `{x}` occurs in the right-hand side only")));
        }
        Ok(Rule {
            label,
            params,
            lhs,
            rhs,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {} : {} => {}", self.label, self.lhs, self.rhs)
    }
}

/// An ordered list of rules with distinct labels. Order is significant: it
/// fixes redex enumeration order and tie-breaking.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn new() -> RuleSet {
        RuleSet::default()
    }

    pub fn from_rules(rules: impl IntoIterator<Item = Rule>) -> Result<RuleSet> {
        let mut rs = RuleSet::new();
        for r in rules {
            rs.push(r)?;
        }
        Ok(rs)
    }

    pub fn push(&mut self, rule: Rule) -> Result<()> {
        if self.get(rule.label()).is_some() {
            return Err(Error::DuplicateLabel(rule.label().to_string()));
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.label == label)
    }

    pub fn lookup(&self, label: &str) -> Result<&Rule> {
        self.get(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Index of the rule in declaration order.
    pub fn rank(&self, label: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.label == label)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rule> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl<'a> IntoIterator for &'a RuleSet {
    type Item = &'a Rule;
    type IntoIter = std::slice::Iter<'a, Rule>;

    fn into_iter(self) -> Self::IntoIter {
        self.rules.iter()
    }
}

/// The annotation `(p, ℓ, σ)` of a rewrite step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepLabel {
    pub position: Position,
    pub rule: String,
    pub subst: Substitution,
}

impl StepLabel {
    pub fn new(position: Position, rule: impl Into<String>, subst: Substitution) -> StepLabel {
        StepLabel {
            position,
            rule: rule.into(),
            subst,
        }
    }
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.position, self.rule, self.subst)
    }
}

/// `source →(p, ℓ, σ) target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RewriteStep {
    pub source: Term,
    pub label: StepLabel,
    pub target: Term,
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -[{},{}]-> {}",
            self.source, self.label.position, self.label.rule, self.target
        )
    }
}

/// Applies `rule` at position `p` of `t`. `Ok(None)` means the left-hand side
/// does not match the subterm there.
pub fn rewrite_at(t: &Term, rule: &Rule, p: &Position) -> Result<Option<RewriteStep>> {
    let redex = t.subterm_at(p)?;
    let Some(subst) = match_term(rule.lhs(), redex) else {
        return Ok(None);
    };
    let target = t.replace_at(p, subst.apply(rule.rhs()))?;
    Ok(Some(RewriteStep {
        source: t.clone(),
        label: StepLabel::new(p.clone(), rule.label(), subst),
        target,
    }))
}

/// Every `(p, ℓ, σ)` for which a rule of `rs` applies to `t`, ordered by
/// position (lexicographic) and then by rule order.
pub fn all_redexes(t: &Term, rs: &RuleSet) -> Vec<StepLabel> {
    let mut out = Vec::new();
    for p in t.positions() {
        let Ok(sub) = t.subterm_at(&p) else { continue };
        for rule in rs {
            if let Some(subst) = match_term(rule.lhs(), sub) {
                out.push(StepLabel::new(p.clone(), rule.label(), subst));
            }
        }
    }
    out
}

/// Re-derives the step described by `sl` on `t`, checking that the recorded
/// substitution is exactly the match at that position.
pub fn apply_step(t: &Term, sl: &StepLabel, rs: &RuleSet) -> Result<RewriteStep> {
    let rule = rs.lookup(&sl.rule)?;
    let mismatch = || Error::StepMismatch {
        position: sl.position.clone(),
        label: sl.rule.clone(),
        term: t.clone(),
    };
    match rewrite_at(t, rule, &sl.position) {
        Ok(Some(step)) if step.label.subst == sl.subst => Ok(step),
        Ok(_) | Err(Error::InvalidPosition { .. }) => Err(mismatch()),
        Err(e) => Err(e),
    }
}
