//! First-order terms over a signature, positions, substitutions and
//! syntactic matching.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::syntax::{is_identifier, Cursor, Tok};

/// A function symbol with a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: String,
    arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Result<Symbol> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(Error::InvalidSymbol(format!("`{name}` is not an identifier")));
        }
        Ok(Symbol { name, arity })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A finite set of function symbols with pairwise distinct names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: BTreeMap<String, Symbol>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// Builds a signature from `(name, arity)` pairs.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, usize)>) -> Result<Signature> {
        let mut sig = Signature::new();
        for (name, arity) in pairs {
            sig.declare(name, arity)?;
        }
        Ok(sig)
    }

    pub fn declare(&mut self, name: &str, arity: usize) -> Result<Symbol> {
        if self.symbols.contains_key(name) {
            return Err(Error::InvalidSymbol(format!("`{name}` declared twice")));
        }
        let sym = Symbol::new(name, arity)?;
        self.symbols.insert(name.to_string(), sym.clone());
        Ok(sym)
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }

    /// Convenience constructor for `name(args..)`, checking declaration and arity.
    pub fn app(&self, name: &str, args: Vec<Term>) -> Result<Term> {
        let sym = self.get(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        Term::app(sym.clone(), args)
    }

    /// Nullary application.
    pub fn constant(&self, name: &str) -> Result<Term> {
        self.app(name, Vec::new())
    }
}

/// A first-order term. Terms are immutable values compared syntactically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(symbol: Symbol, args: Vec<Term>) -> Result<Term> {
        if symbol.arity() != args.len() {
            return Err(Error::Arity {
                symbol: symbol.name().to_string(),
                expected: symbol.arity(),
                found: args.len(),
            });
        }
        Ok(Term::App(symbol, args))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    /// Height of the tree; a variable or constant has depth 1.
    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    /// Variables in first-occurrence (left-to-right, preorder) order, without repeats.
    pub fn vars(&self) -> Vec<String> {
        fn walk(t: &Term, out: &mut Vec<String>) {
            match t {
                Term::Var(x) => {
                    if !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                Term::App(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Every valid position, in preorder (which is also lexicographic order).
    pub fn positions(&self) -> Vec<Position> {
        fn walk(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Position>) {
            out.push(Position(path.clone()));
            for (i, a) in t.args().iter().enumerate() {
                path.push(i + 1);
                walk(a, path, out);
                path.pop();
            }
        }
        let mut out = Vec::with_capacity(self.size());
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term> {
        let mut cur = self;
        for &i in p.indices() {
            cur = i
                .checked_sub(1)
                .and_then(|i| cur.args().get(i))
                .ok_or_else(|| Error::InvalidPosition {
                    position: p.clone(),
                    term: self.clone(),
                })?;
        }
        Ok(cur)
    }

    pub fn replace_at(&self, p: &Position, s: Term) -> Result<Term> {
        fn go(t: &Term, path: &[usize], s: Term) -> Option<Term> {
            match path.split_first() {
                None => Some(s),
                Some((&i, rest)) => match t {
                    Term::App(f, args) if i >= 1 && i <= args.len() => {
                        let mut args = args.clone();
                        args[i - 1] = go(&args[i - 1], rest, s)?;
                        Some(Term::App(f.clone(), args))
                    }
                    _ => None,
                },
            }
        }
        go(self, p.indices(), s).ok_or_else(|| Error::InvalidPosition {
            position: p.clone(),
            term: self.clone(),
        })
    }

    /// Checks that every symbol of the term is the one declared in `sig`.
    pub fn well_formed_in(&self, sig: &Signature) -> bool {
        match self {
            Term::Var(x) => !sig.contains(x),
            Term::App(f, args) => {
                sig.get(f.name()) == Some(f) && args.len() == f.arity() && args.iter().all(|a| a.well_formed_in(sig))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::App(s, args) => {
                f.write_str(s.name())?;
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
        }
    }
}

/// Canonical text form of a term.
pub fn print_term(t: &Term) -> String {
    t.to_string()
}

/// Parses a term. Identifiers declared in `sig` are function symbols; any
/// other alphabetic identifier is a variable.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut cur = Cursor::new(text, 1, 1)?;
    let t = parse_term_from(&mut cur, sig)?;
    cur.finish()?;
    Ok(t)
}

pub(crate) fn parse_term_from(cur: &mut Cursor, sig: &Signature) -> Result<Term> {
    let name = cur.ident()?;
    match sig.get(&name) {
        Some(sym) => {
            let args = if cur.peek() == Some(&Tok::LParen) {
                parse_args(cur, |c| parse_term_from(c, sig))?
            } else {
                Vec::new()
            };
            if args.len() != sym.arity() {
                return Err(Error::Arity {
                    symbol: name,
                    expected: sym.arity(),
                    found: args.len(),
                });
            }
            Ok(Term::App(sym.clone(), args))
        }
        None => {
            if name.starts_with(|c: char| c.is_ascii_digit()) || cur.peek() == Some(&Tok::LParen) {
                return Err(Error::UnknownSymbol(name));
            }
            Ok(Term::Var(name))
        }
    }
}

/// Parses `( item, item, ... )` including the possibly empty `()`.
pub(crate) fn parse_args<T>(cur: &mut Cursor, mut item: impl FnMut(&mut Cursor) -> Result<T>) -> Result<Vec<T>> {
    cur.expect(Tok::LParen)?;
    let mut out = Vec::new();
    if cur.eat(&Tok::RParen) {
        return Ok(out);
    }
    loop {
        out.push(item(cur)?);
        if cur.eat(&Tok::Comma) {
            continue;
        }
        cur.expect(Tok::RParen)?;
        return Ok(out);
    }
}

/// A path of 1-based child indices; the empty path is the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn new(indices: Vec<usize>) -> Position {
        Position(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    /// `i.p` for a position `p`.
    pub fn under(&self, i: usize) -> Position {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        Position(v)
    }

    /// Concatenation `self.other`.
    pub fn join(&self, other: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Position(v)
    }

    /// Prefix order: `self ≤ other` iff `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_strict_prefix_of(&self, other: &Position) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Position> {
        let s = s.trim();
        if s == "ε" || s == "eps" || s.is_empty() {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|part| match part.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("bad position `{s}`"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Position)
    }
}

/// A finite map from variable names to terms, applied simultaneously.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution(BTreeMap<String, Term>);

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    /// Binds `var` to `t`; fails (returning false) if `var` is already bound
    /// to a different term.
    pub fn bind(&mut self, var: &str, t: &Term) -> bool {
        match self.0.get(var) {
            Some(old) => old == t,
            None => {
                self.0.insert(var.to_string(), t.clone());
                true
            }
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) => self.0.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }
}

impl FromIterator<(String, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} ↦ {t}")?;
        }
        f.write_str("}")
    }
}

pub fn apply_subst(sigma: &Substitution, t: &Term) -> Term {
    sigma.apply(t)
}

/// Syntactic one-sided matching. Variables of `subject` are treated as
/// constants. Returns the unique substitution with domain `vars(pattern)`
/// mapping `pattern` onto `subject`, or `None` when none exists.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    fn go(p: &Term, s: &Term, sigma: &mut Substitution) -> bool {
        match (p, s) {
            (Term::Var(x), _) => sigma.bind(x, s),
            (Term::App(f, ps), Term::App(g, ss)) => f == g && ps.iter().zip(ss).all(|(p, s)| go(p, s, sigma)),
            (Term::App(..), Term::Var(_)) => false,
        }
    }
    let mut sigma = Substitution::new();
    go(pattern, subject, &mut sigma).then_some(sigma)
}
