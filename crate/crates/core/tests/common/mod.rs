//! Fixtures, random generators and brute-force oracles shared by the
//! integration tests (also pulled into the CLI acceptance suite).
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strata_core::ars::Derivation;
use strata_core::proof::{from_derivation, ProofTerm};
use strata_core::rewrite::{rewrite_at, RewriteStep, RuleSet};
use strata_core::strategy::StrategyExpr;
use strata_core::term::{Signature, Term};
use strata_core::theory::{parse_theory, Theory};

pub const REX: &str = "\
sig a/0 b/0 0/0 f/1 g/1 s/1 plus/2 h/2
rule r1 : a => b
rule r2 : g(x) => x
rule r3 : f(x) => g(x)
rule p0 : plus(0, y) => y
rule ps : plus(s(x), y) => s(plus(x, y))
";

/// A four-object chain a -> b -> c -> d.
pub const CHAIN: &str = "\
sig a/0 b/0 c/0 d/0 h/2
rule c1 : a => b
rule c2 : b => c
rule c3 : c => d
";

pub fn rex() -> Theory {
    parse_theory(REX).unwrap()
}

pub fn chain() -> Theory {
    parse_theory(CHAIN).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every term of depth at most `depth` built from `symbols` (names looked up
/// in `sig`) and the variables `vars`.
pub fn all_terms(sig: &Signature, symbols: &[&str], vars: &[&str], depth: usize) -> Vec<Term> {
    let syms: Vec<_> = symbols.iter().map(|s| sig.get(s).unwrap().clone()).collect();
    let mut levels: Vec<Vec<Term>> = vec![Vec::new()];
    for d in 1..=depth {
        let below: Vec<Term> = levels[d - 1].clone();
        let mut here: Vec<Term> = vars.iter().map(|v| Term::var(*v)).collect();
        for f in &syms {
            for args in tuples(&below, f.arity()) {
                here.push(Term::App(f.clone(), args));
            }
        }
        levels.push(here);
    }
    levels.pop().unwrap()
}

fn tuples(items: &[Term], n: usize) -> Vec<Vec<Term>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in tuples(items, n - 1) {
        for it in items {
            let mut v = vec![it.clone()];
            v.extend(rest.iter().cloned());
            out.push(v);
        }
    }
    out
}

/// The REX terms of depth at most 3 over `a b 0 f g s plus` and the variable `x`.
pub fn rex_desk_terms(th: &Theory) -> Vec<Term> {
    all_terms(&th.signature, &["a", "b", "0", "f", "g", "s", "plus"], &["x"], 3)
}

pub fn random_term(rng: &mut impl Rng, sig: &Signature, symbols: &[&str], vars: &[&str], depth: usize) -> Term {
    let leaf = depth <= 1 || rng.random_bool(0.25);
    let candidates: Vec<&str> = symbols
        .iter()
        .copied()
        .filter(|s| !leaf || sig.get(s).unwrap().arity() == 0)
        .collect();
    if leaf && !vars.is_empty() && rng.random_bool(0.3) {
        return Term::var(*vars.choose(rng).unwrap());
    }
    let f = sig.get(candidates.choose(rng).unwrap()).unwrap().clone();
    let args = (0..f.arity())
        .map(|_| random_term(rng, sig, symbols, vars, depth - 1))
        .collect();
    Term::App(f, args)
}

pub const REX_SYMBOLS: &[&str] = &["a", "b", "0", "f", "g", "s", "plus", "h"];

pub fn random_rex_term(rng: &mut impl Rng, th: &Theory, depth: usize) -> Term {
    random_term(rng, &th.signature, REX_SYMBOLS, &["x", "y"], depth)
}

pub fn random_strategy(rng: &mut impl Rng, th: &Theory, depth: usize) -> StrategyExpr {
    random_strategy_in(rng, th, depth, &mut Vec::new())
}

fn random_strategy_in(rng: &mut impl Rng, th: &Theory, depth: usize, bound: &mut Vec<String>) -> StrategyExpr {
    use StrategyExpr as S;
    let labels: Vec<&str> = th.rules.iter().map(|r| r.label()).collect();
    if depth == 0 || rng.random_bool(0.2) {
        return match rng.random_range(0..10) {
            0 => S::Id,
            1 => S::Fail,
            2 if !bound.is_empty() => S::svar(bound.choose(rng).unwrap().clone()),
            3 => S::Occurs(random_rex_term(rng, th, 2)),
            _ => S::rule(*labels.choose(rng).unwrap()),
        };
    }
    let mut sub = |rng: &mut _| random_strategy_in(rng, th, depth - 1, bound);
    match rng.random_range(0..9) {
        0 => S::seq(sub(rng), sub(rng)),
        1 => S::first(sub(rng), sub(rng)),
        2 => S::try_(sub(rng)),
        3 => S::not(sub(rng)),
        4 => S::if_te(sub(rng), sub(rng), sub(rng)),
        5 => S::repeat(sub(rng)),
        6 => {
            let var = ["X", "Y", "Z"][bound.len() % 3].to_string();
            bound.push(var.clone());
            let body = random_strategy_in(rng, th, depth - 1, bound);
            bound.pop();
            // guarded recursion most of the time, arbitrary bodies otherwise
            if rng.random_bool(0.7) {
                S::mu(var.clone(), S::try_(S::seq(body, S::svar(var))))
            } else {
                S::mu(var, body)
            }
        }
        _ => sub(rng),
    }
}

pub fn random_proof(rng: &mut impl Rng, th: &Theory, depth: usize) -> ProofTerm {
    if depth == 0 || rng.random_bool(0.2) {
        return ProofTerm::Embed(random_rex_term(rng, th, 2));
    }
    match rng.random_range(0..3) {
        0 => ProofTerm::trans(random_proof(rng, th, depth - 1), random_proof(rng, th, depth - 1)),
        1 => {
            let rules: Vec<_> = th.rules.iter().collect();
            let rule = rules.choose(rng).unwrap();
            let args = rule.params().iter().map(|_| random_proof(rng, th, depth - 1)).collect();
            ProofTerm::repl(rule.label(), args)
        }
        _ => {
            let name = ["f", "g", "s", "plus", "h"].choose(rng).unwrap();
            let sym = th.signature.get(name).unwrap().clone();
            let args = (0..sym.arity()).map(|_| random_proof(rng, th, depth - 1)).collect();
            ProofTerm::cong(sym, args).unwrap()
        }
    }
}

/// Every one-step rewrite of `t`, found by trying each rule at each position.
pub fn one_steps(t: &Term, rs: &RuleSet) -> Vec<RewriteStep> {
    let mut out = Vec::new();
    for p in t.positions() {
        for rule in rs {
            if let Some(step) = rewrite_at(t, rule, &p).unwrap() {
                out.push(step);
            }
        }
    }
    out
}

/// The full derivation tree from `t` up to length `n`.
pub fn derivation_tree(t: &Term, rs: &RuleSet, n: usize) -> BTreeSet<Derivation> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![Derivation::empty(t.clone())];
    for _ in 0..=n {
        let mut next = Vec::new();
        for d in frontier {
            if d.len() < n {
                for step in one_steps(d.target(), rs) {
                    next.push(d.then(step).unwrap());
                }
            }
            out.insert(d);
        }
        frontier = next;
    }
    out
}

/// Terms reachable from `t` in at most `k` steps.
pub fn bfs_reach(t: &Term, rs: &RuleSet, k: usize) -> BTreeSet<Term> {
    let mut seen: BTreeSet<Term> = [t.clone()].into();
    let mut frontier = vec![t.clone()];
    for _ in 0..k {
        let mut next = Vec::new();
        for u in &frontier {
            for s in one_steps(u, rs) {
                if seen.insert(s.target.clone()) {
                    next.push(s.target);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Subterms of `t`, with repetitions removed.
pub fn subterms(t: &Term) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for p in t.positions() {
        let s = t.subterm_at(&p).unwrap().clone();
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// Reflexivity at `t` plus every chain of at most `k` single-step proof
/// terms starting at `t`, so each has at most `k` Trans components.
pub fn proof_chains(t: &Term, rs: &RuleSet, k: usize) -> Vec<ProofTerm> {
    let single = |step: RewriteStep| {
        let d = Derivation::new(step.source.clone(), vec![step]).unwrap();
        from_derivation(&d, rs).unwrap()
    };
    let mut all = vec![ProofTerm::Embed(t.clone())];
    let mut layer: Vec<(ProofTerm, Term)> = one_steps(t, rs)
        .into_iter()
        .map(|s| (single(s.clone()), s.target))
        .collect();
    for j in 1..=k {
        all.extend(layer.iter().map(|(pi, _)| pi.clone()));
        if j == k {
            break;
        }
        let mut next = Vec::new();
        for (pi, end) in &layer {
            for step in one_steps(end, rs) {
                next.push((ProofTerm::trans(pi.clone(), single(step.clone())), step.target));
            }
        }
        layer = next;
    }
    all
}
