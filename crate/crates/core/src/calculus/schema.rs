use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::formula::{parse, Formula};

/// Metavariable assignment produced by matching.
pub type Substitution = BTreeMap<String, Formula>;

/// An axiom schema. Every atom of the pattern is a metavariable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub id: &'static str,
    pub name: &'static str,
    pub pattern: Formula,
}

impl Schema {
    pub fn instantiate(&self, sub: &Substitution) -> Formula {
        substitute(&self.pattern, sub)
    }

    pub fn metavariables(&self) -> Vec<String> {
        self.pattern.atoms().into_iter().collect()
    }
}

const CATALOGUE: &[(&str, &str, &str)] = &[
    // intuitionistic base over ∧, ∨, ⇒, ⊥, ⊤
    ("I.a", "K", "phi => psi => phi"),
    ("I.b", "S", "(phi => psi => chi) => (phi => psi) => phi => chi"),
    ("I.c", "and-intro", "phi => psi => phi & psi"),
    ("I.d", "and-elim-left", "phi & psi => phi"),
    ("I.e", "and-elim-right", "phi & psi => psi"),
    ("I.f", "or-intro-left", "phi => phi | psi"),
    ("I.g", "or-intro-right", "psi => phi | psi"),
    ("I.h", "or-elim", "(phi => chi) => (psi => chi) => phi | psi => chi"),
    ("I.i", "ex-falso", "bot => phi"),
    ("I.j", "verum", "top"),
    // co-implication
    ("II.a", "coimp-split", "phi => psi | (phi <= psi)"),
    // linearity
    ("III.a", "goedel-dummett", "(phi => psi) | (psi => phi)"),
    ("III.b", "co-goedel-dummett", "!((phi <= psi) & (psi <= phi))"),
    // temporal
    ("IV.a", "next-serial", "!X bot"),
    ("IV.b", "next-or", "X (phi | psi) => X phi | X psi"),
    ("IV.c", "next-and", "X phi & X psi => X (phi & psi)"),
    ("IV.d", "next-k", "X (phi => psi) <=> (X phi => X psi)"),
    ("IV.e", "box-k", "G (phi => psi) => G phi => G psi"),
    ("IV.f", "box-k-dual", "G (phi => psi) => F phi => F psi"),
    ("IV.g", "box-fix", "G phi => phi & X G phi"),
    ("IV.h", "diamond-fix", "phi | X F phi => F phi"),
    ("IV.i", "box-induction", "G (phi => X phi) => phi => G phi"),
    ("IV.j", "diamond-induction", "G (X phi => phi) => F phi => phi"),
    // back-up confluence
    ("V", "next-coimp", "X (phi <= psi) => (X phi <= X psi)"),
];

/// All axiom schemas, in catalogue order.
pub fn catalogue() -> &'static [Schema] {
    static SCHEMAS: OnceLock<Vec<Schema>> = OnceLock::new();
    SCHEMAS.get_or_init(|| {
        CATALOGUE
            .iter()
            .map(|&(id, name, text)| Schema { id, name, pattern: parse(text).expect("catalogue patterns parse") })
            .collect()
    })
}

pub fn schema(id: &str) -> Option<&'static Schema> {
    catalogue().iter().find(|s| s.id == id)
}

/// Most general substitution making the pattern equal to `f`.
pub fn match_schema(f: &Formula, s: &Schema) -> Option<Substitution> {
    let mut sub = Substitution::new();
    matches(&s.pattern, f, &mut sub).then_some(sub)
}

fn matches(pat: &Formula, f: &Formula, sub: &mut Substitution) -> bool {
    use Formula::*;
    match (pat, f) {
        (Atom(m), _) => match sub.get(m) {
            Some(bound) => bound == f,
            None => {
                sub.insert(m.clone(), f.clone());
                true
            }
        },
        (Bot, Bot) | (Top, Top) => true,
        (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) | (Imp(a, b), Imp(c, d)) | (Coimp(a, b), Coimp(c, d)) => {
            matches(a, c, sub) && matches(b, d, sub)
        }
        (Next(a), Next(c)) | (Ev(a), Ev(c)) | (Hence(a), Hence(c)) => matches(a, c, sub),
        _ => false,
    }
}

pub fn substitute(pat: &Formula, sub: &Substitution) -> Formula {
    use Formula::*;
    let go = |x: &Formula| Box::new(substitute(x, sub));
    match pat {
        Atom(m) => sub.get(m).cloned().unwrap_or_else(|| pat.clone()),
        Bot | Top => pat.clone(),
        And(a, b) => And(go(a), go(b)),
        Or(a, b) => Or(go(a), go(b)),
        Imp(a, b) => Imp(go(a), go(b)),
        Coimp(a, b) => Coimp(go(a), go(b)),
        Next(a) => Next(go(a)),
        Ev(a) => Ev(go(a)),
        Hence(a) => Hence(go(a)),
    }
}
