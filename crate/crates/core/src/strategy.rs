//! Strategy combinators with explicit failure.
//!
//! Evaluating a strategy on a term yields either a new term or `stk`, the
//! failure constant. `stk` is never a term: it cannot appear inside one and
//! it is absorbing for sequential composition. Recursion goes through
//! `mu X . S`; every evaluation clause spends one unit of fuel so divergent
//! strategies stop with [`Error::FuelExhausted`] rather than looping.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::rewrite::{rewrite_at, RuleSet};
use crate::syntax::{Cursor, Tok};
use crate::term::{match_term, parse_term_from, Position, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrategyExpr {
    Id,
    Fail,
    /// Applies the named rule at the root of the term.
    RuleRef(String),
    Seq(Box<StrategyExpr>, Box<StrategyExpr>),
    First(Box<StrategyExpr>, Box<StrategyExpr>),
    Try(Box<StrategyExpr>),
    Not(Box<StrategyExpr>),
    IfTE(Box<StrategyExpr>, Box<StrategyExpr>, Box<StrategyExpr>),
    Repeat(Box<StrategyExpr>),
    Mu(String, Box<StrategyExpr>),
    SVar(String),
    /// Succeeds, leaving the term unchanged, iff the pattern matches some
    /// subterm. This is the rule `G => G` applied anywhere in the term.
    Occurs(Term),
}

impl StrategyExpr {
    pub fn rule(label: impl Into<String>) -> StrategyExpr {
        StrategyExpr::RuleRef(label.into())
    }

    pub fn seq(a: StrategyExpr, b: StrategyExpr) -> StrategyExpr {
        StrategyExpr::Seq(Box::new(a), Box::new(b))
    }

    pub fn first(a: StrategyExpr, b: StrategyExpr) -> StrategyExpr {
        StrategyExpr::First(Box::new(a), Box::new(b))
    }

    pub fn try_(s: StrategyExpr) -> StrategyExpr {
        StrategyExpr::Try(Box::new(s))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(s: StrategyExpr) -> StrategyExpr {
        StrategyExpr::Not(Box::new(s))
    }

    pub fn if_te(c: StrategyExpr, a: StrategyExpr, b: StrategyExpr) -> StrategyExpr {
        StrategyExpr::IfTE(Box::new(c), Box::new(a), Box::new(b))
    }

    pub fn repeat(s: StrategyExpr) -> StrategyExpr {
        StrategyExpr::Repeat(Box::new(s))
    }

    pub fn mu(var: impl Into<String>, body: StrategyExpr) -> StrategyExpr {
        StrategyExpr::Mu(var.into(), Box::new(body))
    }

    pub fn svar(var: impl Into<String>) -> StrategyExpr {
        StrategyExpr::SVar(var.into())
    }

    /// Strategy variables not bound by an enclosing `mu`, in order of appearance.
    pub fn free_vars(&self) -> Vec<String> {
        fn go(s: &StrategyExpr, bound: &mut Vec<String>, out: &mut Vec<String>) {
            use StrategyExpr::*;
            match s {
                Id | Fail | RuleRef(_) | Occurs(_) => {}
                SVar(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                Seq(a, b) | First(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Try(a) | Not(a) | Repeat(a) => go(a, bound, out),
                IfTE(a, b, c) => {
                    go(a, bound, out);
                    go(b, bound, out);
                    go(c, bound, out);
                }
                Mu(x, body) => {
                    bound.push(x.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

/// Outcome of applying a strategy: a term, or the failure constant `stk`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EvalResult {
    Value(Term),
    Stk,
}

impl EvalResult {
    pub fn is_stk(&self) -> bool {
        matches!(self, EvalResult::Stk)
    }

    pub fn value(&self) -> Option<&Term> {
        match self {
            EvalResult::Value(t) => Some(t),
            EvalResult::Stk => None,
        }
    }
}

impl fmt::Display for EvalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalResult::Value(t) => write!(f, "value: {t}"),
            EvalResult::Stk => f.write_str("stk"),
        }
    }
}

/// `mu` bindings in scope: each maps a variable to its `mu` node and the
/// environment that node was evaluated in.
struct Binding<'s> {
    var: &'s str,
    mu: &'s StrategyExpr,
    parent: Env<'s>,
}

type Env<'s> = Option<Rc<Binding<'s>>>;

struct Evaluator<'r> {
    rules: &'r RuleSet,
    fuel: usize,
}

impl Evaluator<'_> {
    fn tick(&mut self) -> Result<()> {
        if self.fuel == 0 {
            return Err(Error::FuelExhausted);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn eval<'s>(&mut self, s: &'s StrategyExpr, env: &Env<'s>, t: Term) -> Result<EvalResult> {
        stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || self.eval_clause(s, env, t))
    }

    fn eval_clause<'s>(&mut self, s: &'s StrategyExpr, env: &Env<'s>, t: Term) -> Result<EvalResult> {
        use EvalResult::*;
        use StrategyExpr::*;
        self.tick()?;
        match s {
            Id => Ok(Value(t)),
            Fail => Ok(Stk),
            RuleRef(label) => {
                let rule = self.rules.lookup(label)?;
                Ok(match rewrite_at(&t, rule, &Position::root())? {
                    Some(step) => Value(step.target),
                    None => Stk,
                })
            }
            Seq(a, b) => match self.eval(a, env, t)? {
                Stk => Ok(Stk),
                Value(v) => self.eval(b, env, v),
            },
            First(a, b) => match self.eval(a, env, t.clone())? {
                Stk => self.eval(b, env, t),
                v => Ok(v),
            },
            Try(a) => match self.eval(a, env, t.clone())? {
                Stk => Ok(Value(t)),
                v => Ok(v),
            },
            Not(a) => match self.eval(a, env, t.clone())? {
                Stk => Ok(Value(t)),
                Value(_) => Ok(Stk),
            },
            IfTE(c, a, b) => match self.eval(c, env, t.clone())? {
                Value(_) => self.eval(a, env, t),
                Stk => self.eval(b, env, t),
            },
            Repeat(a) => {
                // unfolds `mu X . try(seq(a, X))` iteratively
                let mut cur = t;
                loop {
                    match self.eval(a, env, cur.clone())? {
                        Stk => return Ok(Value(cur)),
                        Value(v) => cur = v,
                    }
                    self.tick()?;
                }
            }
            Mu(var, body) => {
                let env = Some(Rc::new(Binding {
                    var,
                    mu: s,
                    parent: env.clone(),
                }));
                self.eval(body, &env, t)
            }
            SVar(var) => {
                let mut scope = env.clone();
                while let Some(b) = scope {
                    if b.var == var {
                        return self.eval(b.mu, &b.parent, t);
                    }
                    scope = b.parent.clone();
                }
                Err(Error::UnboundSVar(var.clone()))
            }
            Occurs(g) => Ok(if occurs(g, &t) { Value(t) } else { Stk }),
        }
    }
}

/// Applies `s` to `t`. `fuel` bounds the number of evaluation clauses.
pub fn eval(s: &StrategyExpr, t: &Term, rs: &RuleSet, fuel: usize) -> Result<EvalResult> {
    let mut ev = Evaluator { rules: rs, fuel };
    ev.eval(s, &None, t.clone())
}

fn occurs(g: &Term, t: &Term) -> bool {
    match_term(g, t).is_some() || t.args().iter().any(|a| occurs(g, a))
}

/// Whether the pattern `g` matches some subterm of `t`.
pub fn check_invariant(g: &Term, t: &Term) -> bool {
    t.positions()
        .iter()
        .any(|p| t.subterm_at(p).is_ok_and(|sub| match_term(g, sub).is_some()))
}

/// `first(G => G, X => stk)`: keeps the term when `g` occurs in it and fails
/// otherwise.
pub fn invariant_strategy(g: &Term) -> StrategyExpr {
    StrategyExpr::first(StrategyExpr::Occurs(g.clone()), StrategyExpr::Fail)
}

/// `G => stk`: fails when `g` occurs in the term, and leaves it unchanged
/// otherwise.
pub fn forbidden_strategy(g: &Term) -> StrategyExpr {
    StrategyExpr::if_te(StrategyExpr::Occurs(g.clone()), StrategyExpr::Fail, StrategyExpr::Id)
}

/// Named strategies available for reference by name while parsing.
pub type StrategyEnv = BTreeMap<String, StrategyExpr>;

/// Parses
///
/// ```text
/// S := id | fail | <label> | <name> | X | mu X . S | occurs(<term>)
///    | seq(S,S) | first(S,S) | try(S) | not(S) | ifTE(S,S,S) | repeat(S)
/// ```
///
/// An identifier is a strategy variable if an enclosing `mu` binds it,
/// otherwise a named strategy from `named` (inlined), otherwise a rule label.
/// Unbound identifiers starting with an upper-case letter are rejected as
/// unbound strategy variables.
pub fn parse_strategy(text: &str, sig: &Signature, named: &StrategyEnv) -> Result<StrategyExpr> {
    let mut cur = Cursor::new(text, 1, 1)?;
    let s = parse_strategy_from(&mut cur, sig, named)?;
    cur.finish()?;
    Ok(s)
}

pub(crate) fn parse_strategy_from(cur: &mut Cursor, sig: &Signature, named: &StrategyEnv) -> Result<StrategyExpr> {
    StrategyParser {
        sig,
        named,
        bound: Vec::new(),
    }
    .expr(cur)
}

struct StrategyParser<'a> {
    sig: &'a Signature,
    named: &'a StrategyEnv,
    bound: Vec<String>,
}

impl StrategyParser<'_> {
    fn expr(&mut self, cur: &mut Cursor) -> Result<StrategyExpr> {
        let name = cur.ident()?;
        let call = cur.peek() == Some(&Tok::LParen);
        match name.as_str() {
            "id" if !call => return Ok(StrategyExpr::Id),
            "fail" if !call => return Ok(StrategyExpr::Fail),
            "mu" if matches!(cur.peek(), Some(Tok::Ident(_))) && cur.peek_at(1) == Some(&Tok::Dot) => {
                let var = cur.ident()?;
                cur.expect(Tok::Dot)?;
                self.bound.push(var.clone());
                let body = self.expr(cur);
                self.bound.pop();
                return Ok(StrategyExpr::mu(var, body?));
            }
            "occurs" if call => {
                cur.expect(Tok::LParen)?;
                let g = parse_term_from(cur, self.sig)?;
                cur.expect(Tok::RParen)?;
                return Ok(StrategyExpr::Occurs(g));
            }
            "seq" | "first" | "try" | "not" | "ifTE" | "repeat" if call => {
                return self.combinator(cur, &name);
            }
            _ => {}
        }
        if call {
            return Err(cur.error(format!("`{name}` is not a strategy combinator")));
        }
        if self.bound.contains(&name) {
            return Ok(StrategyExpr::SVar(name));
        }
        if let Some(s) = self.named.get(&name) {
            return Ok(s.clone());
        }
        if name.starts_with(|c: char| c.is_ascii_uppercase()) {
            return Err(Error::UnboundSVar(name));
        }
        Ok(StrategyExpr::RuleRef(name))
    }

    fn combinator(&mut self, cur: &mut Cursor, name: &str) -> Result<StrategyExpr> {
        let at = cur.prev_location();
        let mut args = Vec::new();
        cur.expect(Tok::LParen)?;
        loop {
            args.push(self.expr(cur)?);
            if !cur.eat(&Tok::Comma) {
                break;
            }
        }
        cur.expect(Tok::RParen)?;
        let want = match name {
            "seq" | "first" => 2,
            "ifTE" => 3,
            _ => 1,
        };
        if args.len() != want {
            return Err(Error::Parse {
                line: at.0,
                column: at.1,
                message: format!("`{name}` takes {want} argument(s), found {}", args.len()),
            });
        }
        let mut it = args.into_iter();
        let mut next = || it.next().expect("arity checked");
        Ok(match name {
            "seq" => StrategyExpr::seq(next(), next()),
            "first" => StrategyExpr::first(next(), next()),
            "try" => StrategyExpr::try_(next()),
            "not" => StrategyExpr::not(next()),
            "ifTE" => StrategyExpr::if_te(next(), next(), next()),
            _ => StrategyExpr::repeat(next()),
        })
    }
}

pub fn print_strategy(s: &StrategyExpr) -> String {
    s.to_string()
}

impl fmt::Display for StrategyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use StrategyExpr::*;
        match self {
            Id => f.write_str("id"),
            Fail => f.write_str("fail"),
            RuleRef(l) => f.write_str(l),
            SVar(x) => f.write_str(x),
            Seq(a, b) => write!(f, "seq({a},{b})"),
            First(a, b) => write!(f, "first({a},{b})"),
            Try(a) => write!(f, "try({a})"),
            Not(a) => write!(f, "not({a})"),
            IfTE(a, b, c) => write!(f, "ifTE({a},{b},{c})"),
            Repeat(a) => write!(f, "repeat({a})"),
            Mu(x, body) => write!(f, "mu {x} . {body}"),
            Occurs(g) => write!(f, "occurs({g})"),
        }
    }
}
