//! Generators and oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use gtl::birel::BiRelModel;
use gtl::decide::Moment;
use gtl::flow::Flow;
use gtl::labelled::LabelledSystem;
use gtl::real::{RealModel, Value};
use gtl::{ClosureSet, Formula};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

pub fn random_flow(rng: &mut StdRng, max_t: usize) -> Flow {
    let n = rng.random_range(1..=max_t);
    Flow::from_indices((0..n).map(|_| rng.random_range(0..n)).collect()).unwrap()
}

/// Values are drawn from a small per-model pool so that ties are common.
pub fn random_real_model(rng: &mut StdRng, max_t: usize) -> RealModel {
    let flow = random_flow(rng, max_t);
    let mut pool: Vec<Value> = vec![Value::from_integer(0.into()), Value::from_integer(1.into())];
    for _ in 0..rng.random_range(1..=3) {
        let d: i64 = rng.random_range(2..=8);
        pool.push(Value::new(BigInt::from(rng.random_range(1..d)), BigInt::from(d)));
    }
    let val = ATOMS
        .iter()
        .map(|a| {
            let row = (0..flow.len()).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect();
            (a.to_string(), row)
        })
        .collect();
    RealModel::new(flow, val).unwrap()
}

/// Each atom holds at a random initial segment of the worlds at each moment.
pub fn random_birel_model(rng: &mut StdRng, max_w: usize, max_t: usize) -> BiRelModel {
    let flow = random_flow(rng, max_t);
    let nw = rng.random_range(1..=max_w);
    let worlds = (0..nw).map(|w| format!("w{w}")).collect();
    let mut val = BTreeMap::new();
    for a in ATOMS {
        let mut set = BTreeSet::new();
        for t in 0..flow.len() {
            let cut = rng.random_range(0..=nw);
            set.extend((0..cut).map(|w| (w, t)));
        }
        val.insert(a.to_string(), set);
    }
    BiRelModel::new(worlds, flow, val).unwrap()
}

pub fn random_formula(rng: &mut StdRng, atoms: &[&str], depth: usize) -> Formula {
    let leaf = depth == 0 || rng.random_bool(0.25);
    if leaf {
        return match rng.random_range(0..atoms.len() + 2) {
            0 => Formula::Bot,
            1 => Formula::Top,
            i => Formula::atom(atoms[i - 2]),
        };
    }
    let op = rng.random_range(0..7);
    let mut sub = || random_formula(rng, atoms, depth - 1);
    match op {
        0 => Formula::and(sub(), sub()),
        1 => Formula::or(sub(), sub()),
        2 => Formula::imp(sub(), sub()),
        3 => Formula::coimp(sub(), sub()),
        4 => Formula::next(sub()),
        5 => Formula::ev(sub()),
        _ => Formula::hence(sub()),
    }
}

pub fn formula_strategy(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bot),
        Just(Formula::Top),
        prop::sample::select(vec!["p", "q", "r", "a1", "long_name"]).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::coimp(a, b)),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::ev),
            inner.prop_map(Formula::hence),
        ]
    })
}

/// Every formula obtained by replacing exactly one connective (a constant,
/// a binary or a unary operator) by another of the same arity.
pub fn mutations(f: &Formula) -> Vec<Formula> {
    type Bin = fn(Formula, Formula) -> Formula;
    type Un = fn(Formula) -> Formula;
    let bins: [Bin; 4] = [Formula::and, Formula::or, Formula::imp, Formula::coimp];
    let uns: [Un; 3] = [Formula::next, Formula::ev, Formula::hence];
    let mut out = Vec::new();
    match f {
        Formula::Atom(_) => {}
        Formula::Bot => out.push(Formula::Top),
        Formula::Top => out.push(Formula::Bot),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Coimp(a, b) => {
            let (a, b) = (&**a, &**b);
            for mk in bins {
                let g = mk(a.clone(), b.clone());
                if g != *f {
                    out.push(g);
                }
            }
            let rebuild = |x: Formula, y: Formula| match f {
                Formula::And(..) => Formula::and(x, y),
                Formula::Or(..) => Formula::or(x, y),
                Formula::Imp(..) => Formula::imp(x, y),
                _ => Formula::coimp(x, y),
            };
            out.extend(mutations(a).into_iter().map(|m| rebuild(m, b.clone())));
            out.extend(mutations(b).into_iter().map(|m| rebuild(a.clone(), m)));
        }
        Formula::Next(a) | Formula::Ev(a) | Formula::Hence(a) => {
            let a = &**a;
            for mk in uns {
                let g = mk(a.clone());
                if g != *f {
                    out.push(g);
                }
            }
            let rebuild = |x: Formula| match f {
                Formula::Next(_) => Formula::next(x),
                Formula::Ev(_) => Formula::ev(x),
                _ => Formula::hence(x),
            };
            out.extend(mutations(a).into_iter().map(rebuild));
        }
    }
    out
}

/// Two chains side by side, `c` first, related by `rel` (pairs of chain
/// indices).
pub fn two_chain_system(c: &Moment, d: &Moment, rel: &BTreeSet<(usize, usize)>) -> LabelledSystem {
    let k = c.len();
    let sigma: Arc<ClosureSet> = c.sigma().clone();
    let names = (0..k).map(|i| format!("c{i}")).chain((0..d.len()).map(|j| format!("d{j}"))).collect();
    let labels = c.chain().iter().chain(d.chain()).cloned().collect();
    let order = (1..k).map(|i| (i - 1, i)).chain((1..d.len()).map(|j| (k + j - 1, k + j)));
    let rel = rel.iter().map(|&(i, j)| (i, k + j));
    LabelledSystem::new(sigma, names, labels, order, rel).unwrap()
}

/// All subsets of the `c × d` index pairs.
pub fn all_relations(k: usize, m: usize) -> Vec<BTreeSet<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    (0..1u32 << pairs.len())
        .map(|mask| (0..pairs.len()).filter(|&b| mask >> b & 1 == 1).map(|b| pairs[b]).collect())
        .collect()
}
