//! Term rewriting viewed as an abstract reduction system: derivations,
//! traced objects, intensional strategies and the abstract strategies they
//! generate.
//!
//! Objects are terms and step labels are `(position, rule, substitution)`
//! triples. An intensional strategy maps a traced object `[α]a` (the object
//! together with the history that produced it) to the steps it allows next.
//! Its extension is the set of derivations where every step was allowed at
//! the traced prefix preceding it, and is therefore closed under prefixes.
//!
//! The trace of a traced object grows by one `(object, label)` entry per
//! completed step, so `|α|` is the number of steps already taken.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rewrite::{all_redexes, apply_step, RewriteStep, RuleSet, StepLabel};
use crate::term::Term;

/// A composable sequence of rewrite steps starting at `source`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Derivation {
    source: Term,
    steps: Vec<RewriteStep>,
}

impl Derivation {
    pub fn empty(source: Term) -> Derivation {
        Derivation {
            source,
            steps: Vec::new(),
        }
    }

    pub fn new(source: Term, steps: Vec<RewriteStep>) -> Result<Derivation> {
        let mut d = Derivation::empty(source);
        for s in steps {
            d.push(s)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, step: RewriteStep) -> Result<()> {
        if step.source != *self.target() {
            return Err(Error::MalformedDerivation(format!(
                "step from {} does not continue a derivation ending at {}",
                step.source,
                self.target()
            )));
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn then(&self, step: RewriteStep) -> Result<Derivation> {
        let mut d = self.clone();
        d.push(step)?;
        Ok(d)
    }

    /// Sequential composition; `other` must start where `self` ends.
    pub fn concat(mut self, other: Derivation) -> Result<Derivation> {
        if other.source != *self.target() {
            return Err(Error::MalformedDerivation(format!(
                "cannot append a derivation from {} to one ending at {}",
                other.source,
                self.target()
            )));
        }
        self.steps.extend(other.steps);
        Ok(self)
    }

    pub fn source(&self) -> &Term {
        &self.source
    }

    pub fn target(&self) -> &Term {
        self.steps.last().map_or(&self.source, |s| &s.target)
    }

    pub fn steps(&self) -> &[RewriteStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The first `n` steps.
    pub fn prefix(&self, n: usize) -> Derivation {
        Derivation {
            source: self.source.clone(),
            steps: self.steps[..n.min(self.steps.len())].to_vec(),
        }
    }

    /// The traced object reached after the first `n` steps.
    pub fn traced_at(&self, n: usize) -> TracedObject {
        let n = n.min(self.steps.len());
        let trace = self.steps[..n]
            .iter()
            .map(|s| (s.source.clone(), s.label.clone()))
            .collect();
        let current = if n == 0 {
            self.source.clone()
        } else {
            self.steps[n - 1].target.clone()
        };
        TracedObject { trace, current }
    }

    /// Checks every step against the rules.
    pub fn validate(&self, rs: &RuleSet) -> Result<()> {
        for s in &self.steps {
            let replay = apply_step(&s.source, &s.label, rs)?;
            if replay.target != s.target {
                return Err(Error::MalformedDerivation(format!("step {s} does not replay")));
            }
        }
        Ok(())
    }

    /// One-line text form: `t0 -[p,l]-> t1 -[p,l]-> t2`; an empty derivation
    /// prints as its source.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Array of `{source, position, rule, subst, target}` step objects.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.steps
                .iter()
                .map(|s| {
                    let subst: serde_json::Map<String, Value> = s
                        .label
                        .subst
                        .iter()
                        .map(|(x, t)| (x.clone(), Value::String(t.to_string())))
                        .collect();
                    json!({
                        "source": s.source.to_string(),
                        "position": s.label.position.indices(),
                        "rule": s.label.rule,
                        "subst": subst,
                        "target": s.target.to_string(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.source)?;
        for s in &self.steps {
            write!(f, " -[{},{}]-> {}", s.label.position, s.label.rule, s.target)?;
        }
        Ok(())
    }
}

/// An object `[α]a` together with the history that reached it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TracedObject {
    trace: Vec<(Term, StepLabel)>,
    current: Term,
}

impl TracedObject {
    pub fn initial(a: Term) -> TracedObject {
        TracedObject {
            trace: Vec::new(),
            current: a,
        }
    }

    /// Builds a traced object, checking that the trace replays under `rs`
    /// and ends at `current`.
    pub fn new(trace: Vec<(Term, StepLabel)>, current: Term, rs: &RuleSet) -> Result<TracedObject> {
        for (i, (obj, label)) in trace.iter().enumerate() {
            let step = apply_step(obj, label, rs)?;
            let next = trace.get(i + 1).map_or(&current, |(o, _)| o);
            if step.target != *next {
                return Err(Error::MalformedDerivation(format!(
                    "trace entry {i} reaches {} instead of {next}",
                    step.target
                )));
            }
        }
        Ok(TracedObject { trace, current })
    }

    pub fn trace(&self) -> &[(Term, StepLabel)] {
        &self.trace
    }

    pub fn current(&self) -> &Term {
        &self.current
    }

    /// `|α|`, the number of completed steps.
    pub fn trace_len(&self) -> usize {
        self.trace.len()
    }

    /// The traced object after firing `step` from the current object.
    pub fn advance(&self, step: &RewriteStep) -> Result<TracedObject> {
        if step.source != self.current {
            return Err(Error::MalformedDerivation(format!(
                "step from {} fired at {}",
                step.source, self.current
            )));
        }
        let mut trace = self.trace.clone();
        trace.push((step.source.clone(), step.label.clone()));
        Ok(TracedObject {
            trace,
            current: step.target.clone(),
        })
    }
}

/// A partial function from traced objects to finite sets of next steps.
///
/// `choose` must be pure, and every label it returns should apply to the
/// current object; labels that do not are ignored by the enumerators.
pub trait IntensionalStrategy {
    fn name(&self) -> String;

    fn rules(&self) -> &RuleSet;

    fn choose(&self, obj: &TracedObject) -> Vec<StepLabel>;

    fn is_memoryless(&self) -> bool {
        false
    }

    /// The valid steps chosen at `obj`.
    fn steps(&self, obj: &TracedObject) -> Vec<RewriteStep> {
        self.choose(obj)
            .iter()
            .filter_map(|sl| apply_step(obj.current(), sl, self.rules()).ok())
            .collect()
    }
}

impl<S: IntensionalStrategy + ?Sized> IntensionalStrategy for &S {
    fn name(&self) -> String {
        (**self).name()
    }
    fn rules(&self) -> &RuleSet {
        (**self).rules()
    }
    fn choose(&self, obj: &TracedObject) -> Vec<StepLabel> {
        (**self).choose(obj)
    }
    fn is_memoryless(&self) -> bool {
        (**self).is_memoryless()
    }
}

impl<S: IntensionalStrategy + ?Sized> IntensionalStrategy for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn rules(&self) -> &RuleSet {
        (**self).rules()
    }
    fn choose(&self, obj: &TracedObject) -> Vec<StepLabel> {
        (**self).choose(obj)
    }
    fn is_memoryless(&self) -> bool {
        (**self).is_memoryless()
    }
}

type Selector = dyn Fn(&RuleSet, &Term) -> Vec<StepLabel> + Send + Sync;

/// A strategy whose choice depends only on the current object.
pub struct Memoryless {
    name: String,
    rules: RuleSet,
    select: Box<Selector>,
}

impl fmt::Debug for Memoryless {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Memoryless").field("name", &self.name).finish()
    }
}

impl IntensionalStrategy for Memoryless {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn rules(&self) -> &RuleSet {
        &self.rules
    }

    fn choose(&self, obj: &TracedObject) -> Vec<StepLabel> {
        (self.select)(&self.rules, obj.current())
    }

    fn is_memoryless(&self) -> bool {
        true
    }
}

/// Lifts a function of the current term to an intensional strategy that
/// ignores the trace.
pub fn memoryless<F>(name: impl Into<String>, rules: RuleSet, select: F) -> Memoryless
where
    F: Fn(&RuleSet, &Term) -> Vec<StepLabel> + Send + Sync + 'static,
{
    Memoryless {
        name: name.into(),
        rules,
        select: Box::new(select),
    }
}

/// Every redex of the current term.
pub fn all_steps(rs: RuleSet) -> Memoryless {
    memoryless("all", rs, |rs, t| all_redexes(t, rs))
}

/// Redexes whose position is maximal in the prefix order among all redex
/// positions, i.e. with no other redex strictly below them.
pub fn innermost_redexes(t: &Term, rs: &RuleSet) -> Vec<StepLabel> {
    let redexes = all_redexes(t, rs);
    redexes
        .iter()
        .filter(|sl| {
            !redexes
                .iter()
                .any(|other| sl.position.is_strict_prefix_of(&other.position))
        })
        .cloned()
        .collect()
}

pub fn innermost(rs: RuleSet) -> Memoryless {
    memoryless("innermost", rs, |rs, t| innermost_redexes(t, rs))
}

/// The innermost redex at the lexicographically greatest (rightmost)
/// position; among several rules matching there, the first declared wins.
pub fn rightmost_innermost_redex(t: &Term, rs: &RuleSet) -> Option<StepLabel> {
    let inner = innermost_redexes(t, rs);
    let best = inner.iter().map(|sl| &sl.position).max()?.clone();
    // all_redexes lists rules in declaration order within a position
    inner.into_iter().find(|sl| sl.position == best)
}

pub fn rightmost_innermost(rs: RuleSet) -> Memoryless {
    memoryless("rightmost-innermost", rs, |rs, t| {
        rightmost_innermost_redex(t, rs).into_iter().collect()
    })
}

/// Restricts `base` with the length bound `|α| < k - 1`: a step is allowed
/// only while fewer than `k - 1` steps have been taken, so the longest
/// derivation in the extension has `k - 1` steps.
#[derive(Debug)]
pub struct Bounded<S> {
    k: usize,
    base: S,
}

pub fn bounded<S: IntensionalStrategy>(k: usize, base: S) -> Bounded<S> {
    Bounded { k, base }
}

impl<S> Bounded<S> {
    pub fn bound(&self) -> usize {
        self.k
    }

    fn admits(&self, trace_len: usize) -> bool {
        (trace_len as i128) < (self.k as i128) - 1
    }
}

impl<S: IntensionalStrategy> IntensionalStrategy for Bounded<S> {
    fn name(&self) -> String {
        format!("bounded({}, {})", self.k, self.base.name())
    }

    fn rules(&self) -> &RuleSet {
        self.base.rules()
    }

    fn choose(&self, obj: &TracedObject) -> Vec<StepLabel> {
        if self.admits(obj.trace_len()) {
            self.base.choose(obj)
        } else {
            Vec::new()
        }
    }
}

/// All derivations from `a` of length at most `max_len` generated by `zeta`.
pub fn extension<S: IntensionalStrategy + ?Sized>(zeta: &S, a: &Term, max_len: usize) -> BTreeSet<Derivation> {
    let mut out = BTreeSet::new();
    let mut stack = vec![(Derivation::empty(a.clone()), TracedObject::initial(a.clone()))];
    while let Some((d, obj)) = stack.pop() {
        if d.len() < max_len {
            for step in zeta.steps(&obj) {
                let next_obj = obj.advance(&step).expect("step fired at its source");
                let next = d.then(step).expect("step continues the derivation");
                stack.push((next, next_obj));
            }
        }
        out.insert(d);
    }
    out
}

/// Whether `d` belongs to the extension of `zeta`: each step must be chosen
/// at the traced prefix before it.
pub fn in_extension<S: IntensionalStrategy + ?Sized>(zeta: &S, d: &Derivation) -> bool {
    d.steps().iter().enumerate().all(|(j, step)| {
        let obj = d.traced_at(j);
        zeta.choose(&obj).contains(&step.label)
            && apply_step(&step.source, &step.label, zeta.rules()).is_ok_and(|s| s.target == step.target)
    })
}

/// An extensional strategy: a (possibly infinite) set of derivations,
/// accessed through membership and bounded enumeration.
pub trait AbstractStrategy {
    fn contains(&self, d: &Derivation) -> bool;

    /// Exactly the members with the given source and length `<= max_len`.
    fn enumerate(&self, source: &Term, max_len: usize) -> BTreeSet<Derivation>;
}

/// The extension of an intensional strategy, as an abstract strategy.
#[derive(Debug)]
pub struct Extension<S>(pub S);

impl<S: IntensionalStrategy> AbstractStrategy for Extension<S> {
    fn contains(&self, d: &Derivation) -> bool {
        in_extension(&self.0, d)
    }

    fn enumerate(&self, source: &Term, max_len: usize) -> BTreeSet<Derivation> {
        extension(&self.0, source, max_len)
    }
}

/// An explicitly listed finite set of derivations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DerivationSet(pub BTreeSet<Derivation>);

impl AbstractStrategy for DerivationSet {
    fn contains(&self, d: &Derivation) -> bool {
        self.0.contains(d)
    }

    fn enumerate(&self, source: &Term, max_len: usize) -> BTreeSet<Derivation> {
        self.0
            .iter()
            .filter(|d| d.source() == source && d.len() <= max_len)
            .cloned()
            .collect()
    }
}

/// `⟦ζ⟧a` restricted to derivations of length at most `max_len`.
pub fn apply_abstract<Z: AbstractStrategy + ?Sized>(zeta: &Z, a: &Term, max_len: usize) -> BTreeSet<Term> {
    zeta.enumerate(a, max_len).iter().map(|d| d.target().clone()).collect()
}

/// True iff every prefix of every member is itself a member.
pub fn is_prefix_closed(ds: &BTreeSet<Derivation>) -> bool {
    ds.iter().all(|d| (0..d.len()).all(|n| ds.contains(&d.prefix(n))))
}

/// Targets of `zeta`-derivations from `a` at which `zeta` offers no further
/// step. `fuel` bounds the number of traced objects expanded; running out
/// with unexplored objects left is an error.
///
/// Memoryless strategies are explored up to the current term, so cycles in
/// the rewrite graph do not by themselves exhaust the fuel.
pub fn normal_forms_under<S: IntensionalStrategy + ?Sized>(zeta: &S, a: &Term, fuel: usize) -> Result<BTreeSet<Term>> {
    let dedup = zeta.is_memoryless();
    let mut seen: HashSet<Term> = HashSet::new();
    let mut queue = VecDeque::from([TracedObject::initial(a.clone())]);
    seen.insert(a.clone());
    let mut out = BTreeSet::new();
    let mut fuel = fuel;
    while let Some(obj) = queue.pop_front() {
        if fuel == 0 {
            return Err(Error::FuelExhausted);
        }
        fuel -= 1;
        let steps = zeta.steps(&obj);
        if steps.is_empty() {
            out.insert(obj.current().clone());
            continue;
        }
        for step in steps {
            if dedup && !seen.insert(step.target.clone()) {
                continue;
            }
            queue.push_back(obj.advance(&step)?);
        }
    }
    Ok(out)
}
