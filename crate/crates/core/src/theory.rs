//! Theory files: signature, rule and named-strategy declarations, one per
//! line.
//!
//! ```text
//! # comment
//! sig a/0 b/0 f/1 plus/2
//! rule r1 : a => b
//! strat norm = repeat(first(r1, r2))
//! ```
//!
//! Declarations may only refer to what was declared on earlier lines.

use crate::error::{Error, Result};
use crate::rewrite::{Rule, RuleSet};
use crate::strategy::{parse_strategy_from, StrategyEnv, StrategyExpr};
use crate::syntax::{Cursor, Tok};
use crate::term::{parse_term_from, Signature};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theory {
    pub signature: Signature,
    pub rules: RuleSet,
    pub strategies: StrategyEnv,
}

impl Theory {
    pub fn strategy(&self, name: &str) -> Option<&StrategyExpr> {
        self.strategies.get(name)
    }
}

pub fn parse_theory(text: &str) -> Result<Theory> {
    let mut th = Theory::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut cur = Cursor::new(line, line_no, 1)?;
        if cur.at_end() {
            continue;
        }
        let (kl, kc) = cur.location();
        let keyword = cur.ident()?;
        match keyword.as_str() {
            "sig" => sig_line(&mut cur, &mut th)?,
            "rule" => rule_line(&mut cur, &mut th)?,
            "strat" => strat_line(&mut cur, &mut th)?,
            other => {
                return Err(Error::Parse {
                    line: kl,
                    column: kc,
                    message: format!("expected `sig`, `rule` or `strat`, found `{other}`"),
                })
            }
        }
        cur.finish()?;
    }
    Ok(th)
}

fn sig_line(cur: &mut Cursor, th: &mut Theory) -> Result<()> {
    if cur.at_end() {
        return Err(cur.unexpected("a symbol declaration `name/arity`"));
    }
    while !cur.at_end() {
        let (l, c) = cur.location();
        let name = cur.ident()?;
        cur.expect(Tok::Slash)?;
        let arity = cur
            .ident()
            .ok()
            .and_then(|a| a.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse {
                line: l,
                column: c,
                message: format!("bad arity for `{name}`"),
            })?;
        th.signature.declare(&name, arity).map_err(|e| e.at(l, c))?;
    }
    Ok(())
}

fn rule_line(cur: &mut Cursor, th: &mut Theory) -> Result<()> {
    let (l, c) = cur.location();
    let label = cur.ident()?;
    cur.expect(Tok::Colon)?;
    let (tl, tc) = cur.location();
    let lhs = parse_term_from(cur, &th.signature).map_err(|e| e.at(tl, tc))?;
    cur.expect(Tok::Arrow)?;
    let (tl, tc) = cur.location();
    let rhs = parse_term_from(cur, &th.signature).map_err(|e| e.at(tl, tc))?;
    if th.strategies.contains_key(&label) {
        return Err(Error::DuplicateLabel(label).at(l, c));
    }
    let rule = Rule::new(label, lhs, rhs).map_err(|e| e.at(l, c))?;
    th.rules.push(rule).map_err(|e| e.at(l, c))
}

fn strat_line(cur: &mut Cursor, th: &mut Theory) -> Result<()> {
    let (l, c) = cur.location();
    let name = cur.ident()?;
    cur.expect(Tok::Eq)?;
    if th.strategies.contains_key(&name) || th.rules.get(&name).is_some() {
        return Err(Error::DuplicateLabel(name).at(l, c));
    }
    let (bl, bc) = cur.location();
    let body = parse_strategy_from(cur, &th.signature, &th.strategies).map_err(|e| e.at(bl, bc))?;
    th.strategies.insert(name, body);
    Ok(())
}
