mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use gtl::birel::BiRelModel;
use gtl::calculus::{catalogue, Substitution};
use gtl::decide::{decide, Status};
use gtl::real::{one, zero, RealModel, Value};
use gtl::{parse, ClosureSet, Formula};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::*;

fn real_model() -> impl Strategy<Value = RealModel> {
    any::<u64>().prop_map(|s| random_real_model(&mut StdRng::seed_from_u64(s), 5))
}

fn birel_model() -> impl Strategy<Value = BiRelModel> {
    any::<u64>().prop_map(|s| random_birel_model(&mut StdRng::seed_from_u64(s), 4, 4))
}

fn small_formula() -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(|s| random_formula(&mut StdRng::seed_from_u64(s), &ATOMS, 3))
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(f in formula_strategy(8)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn real_values_come_from_the_valuation(m in real_model(), f in small_formula()) {
        let mut allowed: BTreeSet<Value> = [zero(), one()].into_iter().collect();
        for a in ATOMS {
            allowed.extend((0..m.flow().len()).map(|t| m.value(a, t)));
        }
        for v in m.eval_all(&f) {
            prop_assert!(allowed.contains(&v), "{} not among the atom values", v);
        }
    }

    #[test]
    fn next_shifts_and_fixpoints_unfold(m in real_model(), f in small_formula()) {
        let x = m.eval_all(&f);
        let next = m.eval_all(&Formula::next(f.clone()));
        let ev = m.eval_all(&Formula::ev(f.clone()));
        let hence = m.eval_all(&Formula::hence(f.clone()));
        for t in 0..m.flow().len() {
            let s = m.flow().succ(t);
            prop_assert_eq!(&next[t], &x[s]);
            prop_assert_eq!(&ev[t], (&x[t]).max(&ev[s]));
            prop_assert_eq!(&hence[t], (&x[t]).min(&hence[s]));
        }
    }

    #[test]
    fn axiom_instances_hold_in_real_models(
        m in real_model(),
        phi in small_formula(),
        psi in small_formula(),
        chi in small_formula(),
    ) {
        let sub: Substitution =
            [("phi", phi), ("psi", psi), ("chi", chi)].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        for s in catalogue() {
            let f = s.instantiate(&sub);
            prop_assert!(m.globally_true(&f), "{} instance {} fails", s.id, f);
        }
    }

    #[test]
    fn axiom_instances_hold_in_birel_models(m in birel_model(), phi in small_formula(), psi in small_formula()) {
        let sub: Substitution =
            [("phi", phi.clone()), ("psi", psi), ("chi", phi)].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        for s in catalogue() {
            let f = s.instantiate(&sub);
            prop_assert!(m.globally_true(&f), "{} instance {} fails", s.id, f);
        }
    }

    #[test]
    fn extensions_are_downward_closed(m in birel_model(), f in small_formula()) {
        let ext = m.extension_table(&f);
        for row in &ext {
            for w in 1..row.len() {
                prop_assert!(!row[w] || row[w - 1]);
            }
        }
    }

    #[test]
    fn one_world_models_are_crisp_real_models(m in birel_model(), f in small_formula()) {
        prop_assume!(m.worlds().len() == 1);
        let birel = m.extension_table(&f);
        let file = m.to_file();
        let val = ATOMS
            .iter()
            .map(|a| {
                let row = (0..m.flow().len())
                    .map(|t| {
                        let holds = file.val.get(*a).is_some_and(|ps| ps.iter().any(|[_, s]| s == m.flow().name(t)));
                        if holds { one() } else { zero() }
                    })
                    .collect();
                (a.to_string(), row)
            })
            .collect();
        let real = RealModel::new(m.flow().clone(), val).unwrap();
        for (t, v) in real.eval_all(&f).into_iter().enumerate() {
            prop_assert_eq!(v == one(), birel[t][0]);
        }
    }

    #[test]
    fn models_induce_quasimodels(m in birel_model(), f in small_formula()) {
        let sigma = Arc::new(ClosureSet::of(&f));
        let q = m.to_quasimodel(&sigma).unwrap();
        prop_assert!(q.validate_quasimodel().is_ok(), "{:?}", q.validate_quasimodel());
        let q = q.quotient().unwrap();
        prop_assert!(q.validate_system().is_ok(), "{:?}", q.validate_system());
        let closed = q.convex_closure();
        prop_assert_eq!(closed.rel(), q.rel());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn valid_verdicts_survive_random_models(
        seed in any::<u64>(),
        reals in prop::collection::vec(real_model(), 20),
        birels in prop::collection::vec(birel_model(), 20),
    ) {
        let f = random_formula(&mut StdRng::seed_from_u64(seed), &["p", "q"], 2);
        if let Ok(v) = decide(&f) {
            if v.status == Status::Valid {
                for m in &reals {
                    prop_assert!(m.globally_true(&f), "{} valid but fails in {}", f, m.to_json());
                }
                for m in &birels {
                    prop_assert!(m.globally_true(&f), "{} valid but fails in {}", f, m.to_json());
                }
            }
        }
    }
}
