//! Rewriting-logic proof terms.
//!
//! A proof term certifies a sequent `[t] -> [t']` and is checked with four
//! deduction rules:
//!
//! - reflexivity: a term `t` proves `[t] -> [t]`;
//! - congruence: `f(π1..πn)` proves `[f(t1..tn)] -> [f(t1'..tn')]`;
//! - transitivity: `π1 ; π2` chains two proofs that meet in the middle;
//! - replacement: `ℓ(π1..πn)` for a rule `ℓ(x1..xn) : l => r` proves
//!   `[l{xi ↦ ti}] -> [r{xi ↦ ti'}]`.
//!
//! A strategy in this view is a set of proof terms; applying it to `t`
//! yields every `t'` such that some member proves `[t] -> [t']`.

use std::collections::BTreeSet;
use std::fmt;

use crate::ars::Derivation;
use crate::error::{Error, Result};
use crate::rewrite::{rewrite_at, RewriteStep, RuleSet, StepLabel};
use crate::syntax::{Cursor, Tok};
use crate::term::{parse_args, Position, Signature, Substitution, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProofTerm {
    /// Reflexivity.
    Embed(Term),
    /// Congruence. Only built through [`ProofTerm::cong`], which keeps the
    /// all-reflexive case in its canonical `Embed` form.
    Cong(Congruence),
    /// Transitivity.
    Trans(Box<ProofTerm>, Box<ProofTerm>),
    /// Replacement with the named rule.
    Repl(String, Vec<ProofTerm>),
}

/// `f(π1..πn)` with at least one non-reflexive argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Congruence {
    symbol: Symbol,
    args: Vec<ProofTerm>,
}

impl Congruence {
    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn args(&self) -> &[ProofTerm] {
        &self.args
    }
}

impl ProofTerm {
    pub fn embed(t: Term) -> ProofTerm {
        ProofTerm::Embed(t)
    }

    pub fn cong(symbol: Symbol, args: Vec<ProofTerm>) -> Result<ProofTerm> {
        if symbol.arity() != args.len() {
            return Err(Error::Arity {
                symbol: symbol.name().to_string(),
                expected: symbol.arity(),
                found: args.len(),
            });
        }
        if args.iter().all(|a| matches!(a, ProofTerm::Embed(_))) {
            let terms = args
                .into_iter()
                .map(|a| match a {
                    ProofTerm::Embed(t) => t,
                    _ => unreachable!(),
                })
                .collect();
            return Ok(ProofTerm::Embed(Term::App(symbol, terms)));
        }
        Ok(ProofTerm::Cong(Congruence { symbol, args }))
    }

    pub fn trans(first: ProofTerm, second: ProofTerm) -> ProofTerm {
        ProofTerm::Trans(Box::new(first), Box::new(second))
    }

    pub fn repl(label: impl Into<String>, args: Vec<ProofTerm>) -> ProofTerm {
        ProofTerm::Repl(label.into(), args)
    }

    pub fn is_reflexive(&self) -> bool {
        matches!(self, ProofTerm::Embed(_))
    }

    /// Length of the longest chain of `;`-separated components.
    pub fn trans_depth(&self) -> usize {
        match self {
            ProofTerm::Trans(a, b) => a.trans_depth() + b.trans_depth(),
            _ => 1,
        }
    }
}

/// The statement `[source] -> [target]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub source: Term,
    pub target: Term,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

fn substitution(params: &[String], terms: Vec<Term>) -> Substitution {
    params.iter().cloned().zip(terms).collect()
}

/// Infers the sequent proved by `pi`.
pub fn infer(pi: &ProofTerm, rs: &RuleSet) -> Result<Sequent> {
    match pi {
        ProofTerm::Embed(t) => Ok(Sequent {
            source: t.clone(),
            target: t.clone(),
        }),
        ProofTerm::Cong(c) => {
            let (srcs, tgts) = infer_all(&c.args, rs)?;
            Ok(Sequent {
                source: Term::App(c.symbol.clone(), srcs),
                target: Term::App(c.symbol.clone(), tgts),
            })
        }
        ProofTerm::Trans(a, b) => {
            let left = infer(a, rs)?;
            let right = infer(b, rs)?;
            if left.target != right.source {
                return Err(Error::Compose {
                    proof: pi.to_string(),
                    left_target: Box::new(left.target),
                    right_source: Box::new(right.source),
                });
            }
            Ok(Sequent {
                source: left.source,
                target: right.target,
            })
        }
        ProofTerm::Repl(label, args) => {
            let rule = rs.lookup(label)?;
            if rule.params().len() != args.len() {
                return Err(Error::Arity {
                    symbol: label.clone(),
                    expected: rule.params().len(),
                    found: args.len(),
                });
            }
            let (srcs, tgts) = infer_all(args, rs)?;
            Ok(Sequent {
                source: substitution(rule.params(), srcs).apply(rule.lhs()),
                target: substitution(rule.params(), tgts).apply(rule.rhs()),
            })
        }
    }
}

fn infer_all(args: &[ProofTerm], rs: &RuleSet) -> Result<(Vec<Term>, Vec<Term>)> {
    let mut srcs = Vec::with_capacity(args.len());
    let mut tgts = Vec::with_capacity(args.len());
    for a in args {
        let s = infer(a, rs)?;
        srcs.push(s.source);
        tgts.push(s.target);
    }
    Ok((srcs, tgts))
}

/// Whether `pi` proves `[t] -> [t2]`.
pub fn check(pi: &ProofTerm, t: &Term, t2: &Term, rs: &RuleSet) -> Result<bool> {
    let s = infer(pi, rs)?;
    Ok(s.source == *t && s.target == *t2)
}

/// Encodes a derivation: each step becomes a replacement wrapped in
/// congruences along its position, and steps are chained left-associatively.
pub fn from_derivation(d: &Derivation, rs: &RuleSet) -> Result<ProofTerm> {
    let mut proofs = d.steps().iter().map(|s| step_proof(s, rs));
    match proofs.next() {
        None => Ok(ProofTerm::Embed(d.source().clone())),
        Some(first) => proofs.try_fold(first?, |acc, p| Ok(ProofTerm::trans(acc, p?))),
    }
}

fn step_proof(step: &RewriteStep, rs: &RuleSet) -> Result<ProofTerm> {
    let rule = rs.lookup(&step.label.rule)?;
    let args = rule
        .params()
        .iter()
        .map(|x| {
            step.label
                .subst
                .get(x)
                .cloned()
                .map(ProofTerm::Embed)
                .ok_or_else(|| Error::MalformedDerivation(format!("step {step} leaves `{x}` unbound")))
        })
        .collect::<Result<Vec<_>>>()?;
    wrap(
        &step.source,
        step.label.position.indices(),
        ProofTerm::repl(rule.label(), args),
    )
}

fn wrap(t: &Term, path: &[usize], inner: ProofTerm) -> Result<ProofTerm> {
    let Some((&i, rest)) = path.split_first() else {
        return Ok(inner);
    };
    let Term::App(f, args) = t else {
        return Err(Error::MalformedDerivation(format!("no position {i} below {t}")));
    };
    if i == 0 || i > args.len() {
        return Err(Error::MalformedDerivation(format!("no position {i} below {t}")));
    }
    let mut inner = Some(inner);
    let children = args
        .iter()
        .enumerate()
        .map(|(j, a)| {
            if j + 1 == i {
                wrap(a, rest, inner.take().expect("single hole"))
            } else {
                Ok(ProofTerm::Embed(a.clone()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ProofTerm::cong(f.clone(), children)
}

/// Sequentializes a proof term into a derivation. Congruence arguments are
/// replayed left to right; a replacement first rewrites every occurrence of
/// its arguments inside the left-hand side (in position order) and then
/// fires the rule at the top.
pub fn to_derivation(pi: &ProofTerm, rs: &RuleSet) -> Result<Derivation> {
    infer(pi, rs)?;
    sequentialize(pi, rs)
}

fn sequentialize(pi: &ProofTerm, rs: &RuleSet) -> Result<Derivation> {
    match pi {
        ProofTerm::Embed(t) => Ok(Derivation::empty(t.clone())),
        ProofTerm::Trans(a, b) => sequentialize(a, rs)?.concat(sequentialize(b, rs)?),
        ProofTerm::Cong(c) => {
            let parts = c
                .args
                .iter()
                .map(|a| sequentialize(a, rs))
                .collect::<Result<Vec<_>>>()?;
            let start = Term::App(c.symbol.clone(), parts.iter().map(|d| d.source().clone()).collect());
            let mut out = Derivation::empty(start);
            for (i, part) in parts.iter().enumerate() {
                lift(&mut out, &Position::new(vec![i + 1]), part)?;
            }
            Ok(out)
        }
        ProofTerm::Repl(label, args) => {
            let rule = rs.lookup(label)?;
            let parts = args.iter().map(|a| sequentialize(a, rs)).collect::<Result<Vec<_>>>()?;
            let sources = substitution(rule.params(), parts.iter().map(|d| d.source().clone()).collect());
            let mut out = Derivation::empty(sources.apply(rule.lhs()));
            for p in rule.lhs().positions() {
                if let Ok(Term::Var(x)) = rule.lhs().subterm_at(&p) {
                    let i = rule
                        .params()
                        .iter()
                        .position(|y| y == x)
                        .expect("lhs variable is a param");
                    lift(&mut out, &p, &parts[i])?;
                }
            }
            let top = rewrite_at(out.target(), rule, &Position::root())?.ok_or_else(|| {
                Error::MalformedDerivation(format!("rule `{label}` does not apply to {}", out.target()))
            })?;
            out.push(top)?;
            Ok(out)
        }
    }
}

/// Replays `part` inside the subterm at `at` of the current end of `out`.
fn lift(out: &mut Derivation, at: &Position, part: &Derivation) -> Result<()> {
    for step in part.steps() {
        let source = out.target().clone();
        let target = source.replace_at(at, step.target.clone())?;
        out.push(RewriteStep {
            source,
            label: StepLabel::new(
                at.join(&step.label.position),
                step.label.rule.clone(),
                step.label.subst.clone(),
            ),
            target,
        })?;
    }
    Ok(())
}

/// Applies a strategy given as a finite set of proof terms: every target of
/// a member whose source is `t`. Members that fail to infer are skipped.
pub fn apply_proof_set<'a>(zeta: impl IntoIterator<Item = &'a ProofTerm>, t: &Term, rs: &RuleSet) -> BTreeSet<Term> {
    zeta.into_iter()
        .filter_map(|pi| infer(pi, rs).ok())
        .filter(|s| s.source == *t)
        .map(|s| s.target)
        .collect()
}

/// Parses the proof-term syntax
///
/// ```text
/// pt   := atom (";" atom)*
/// atom := ident | ident "(" pt ("," pt)* ")" | "(" pt ")"
/// ```
///
/// An identifier names a rule if `rs` has that label, a function symbol if
/// `sig` declares it, and otherwise a variable.
pub fn parse_proof(text: &str, sig: &Signature, rs: &RuleSet) -> Result<ProofTerm> {
    let mut cur = Cursor::new(text, 1, 1)?;
    let pi = parse_seq(&mut cur, sig, rs)?;
    cur.finish()?;
    Ok(pi)
}

fn parse_seq(cur: &mut Cursor, sig: &Signature, rs: &RuleSet) -> Result<ProofTerm> {
    let mut acc = parse_atom(cur, sig, rs)?;
    while cur.eat(&Tok::Semi) {
        let rhs = parse_atom(cur, sig, rs)?;
        acc = ProofTerm::trans(acc, rhs);
    }
    Ok(acc)
}

fn parse_atom(cur: &mut Cursor, sig: &Signature, rs: &RuleSet) -> Result<ProofTerm> {
    if cur.eat(&Tok::LParen) {
        let inner = parse_seq(cur, sig, rs)?;
        cur.expect(Tok::RParen)?;
        return Ok(inner);
    }
    let name = cur.ident()?;
    let has_args = cur.peek() == Some(&Tok::LParen);
    let args = if has_args {
        parse_args(cur, |c| parse_seq(c, sig, rs))?
    } else {
        Vec::new()
    };
    match (rs.get(&name), sig.get(&name)) {
        (Some(_), Some(_)) => Err(Error::AmbiguousIdent(name)),
        (Some(rule), None) => {
            if rule.params().len() != args.len() {
                return Err(Error::Arity {
                    symbol: name,
                    expected: rule.params().len(),
                    found: args.len(),
                });
            }
            Ok(ProofTerm::Repl(name, args))
        }
        (None, Some(sym)) => ProofTerm::cong(sym.clone(), args),
        (None, None) if has_args => Err(Error::UnknownLabel(name)),
        (None, None) if name.starts_with(|c: char| c.is_ascii_digit()) => Err(Error::UnknownSymbol(name)),
        (None, None) => Ok(ProofTerm::Embed(Term::Var(name))),
    }
}

pub fn print_proof(pi: &ProofTerm) -> String {
    pi.to_string()
}

impl fmt::Display for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofTerm::Trans(a, b) => {
                write!(f, "{a} ; ")?;
                if matches!(**b, ProofTerm::Trans(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            ProofTerm::Embed(t) => write!(f, "{t}"),
            ProofTerm::Cong(c) => write_app(f, c.symbol.name(), &c.args),
            ProofTerm::Repl(label, args) => write_app(f, label, args),
        }
    }
}

fn write_app(f: &mut fmt::Formatter<'_>, head: &str, args: &[ProofTerm]) -> fmt::Result {
    f.write_str(head)?;
    if !args.is_empty() {
        f.write_str("(")?;
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")?;
    }
    Ok(())
}
