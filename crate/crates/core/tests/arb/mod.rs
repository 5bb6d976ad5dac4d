//! proptest strategies over the REX signature.
#![allow(dead_code)]

use proptest::prelude::*;

use strata_core::term::{Signature, Term};

/// Terms of depth at most `depth` over `symbols`, with variables drawn from `vars`.
pub fn term(sig: &Signature, symbols: &[&str], vars: &'static [&'static str], depth: u32) -> BoxedStrategy<Term> {
    let syms: Vec<_> = symbols.iter().map(|s| sig.get(s).unwrap().clone()).collect();
    let consts: Vec<Term> = syms
        .iter()
        .filter(|s| s.arity() == 0)
        .map(|s| Term::App(s.clone(), vec![]))
        .collect();
    let mut leaves: Vec<BoxedStrategy<Term>> = vec![proptest::sample::select(consts).boxed()];
    if !vars.is_empty() {
        leaves.push(proptest::sample::select(vars).prop_map(Term::var).boxed());
    }
    let leaf = proptest::strategy::Union::new(leaves).boxed();
    let compound: Vec<_> = syms.into_iter().filter(|s| s.arity() > 0).collect();
    leaf.prop_recursive(depth.saturating_sub(1), 64, 2, move |inner| {
        let compound = compound.clone();
        proptest::sample::select(compound).prop_flat_map(move |f| {
            proptest::collection::vec(inner.clone(), f.arity()).prop_map(move |args| Term::App(f.clone(), args))
        })
    })
    .boxed()
}
