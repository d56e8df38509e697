//! Hilbert-style proof checking.
//!
//! Group I of the calculus is a fixed finite basis for intuitionistic
//! propositional logic (see [`catalogue`]); other intuitionistic tautologies
//! must be derived. Proof lines are numbered from 1 and may only cite
//! earlier lines.

mod schema;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use schema::{catalogue, match_schema, schema, substitute, Schema, Substitution};

use crate::error::Result;
use crate::formula::{parse, Formula};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Justification {
    /// Instance of the schema with this id.
    Axiom(String),
    /// `φ` (first line) and `φ ⇒ ψ` (second line) give `ψ`.
    Mp([usize; 2]),
    /// `φ` gives `○φ`.
    NecX(usize),
    /// `φ` gives `□φ`.
    NecG(usize),
    /// `φ ⇒ ψ` gives `(φ ⇐ θ) ⇒ (ψ ⇐ θ)`.
    DimpMon(usize),
    /// `φ ⇒ ψ ∨ γ` gives `(φ ⇐ ψ) ⇒ γ`.
    DimpDis(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub formula: Formula,
    pub by: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub lines: Vec<Line>,
}

/// Why a line failed, with 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: expected {expected}, found {found}")]
pub struct ProofError {
    pub line: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Serialize, Deserialize)]
struct LineFile {
    formula: String,
    by: Justification,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn from_json(text: &str) -> Result<Proof> {
        let raw: Vec<LineFile> = serde_json::from_str(text)?;
        let lines = raw
            .into_iter()
            .map(|l| Ok(Line { formula: parse(&l.formula)?, by: l.by }))
            .collect::<Result<Vec<Line>>>()?;
        Ok(Proof { lines })
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<LineFile> =
            self.lines.iter().map(|l| LineFile { formula: l.formula.to_string(), by: l.by.clone() }).collect();
        serde_json::to_string_pretty(&raw).expect("proofs serialize")
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(id) => write!(f, "axiom {id}"),
            Justification::Mp([i, j]) => write!(f, "mp {i}, {j}"),
            Justification::NecX(i) => write!(f, "necX {i}"),
            Justification::NecG(i) => write!(f, "necG {i}"),
            Justification::DimpMon(i) => write!(f, "dimpMon {i}"),
            Justification::DimpDis(i) => write!(f, "dimpDis {i}"),
        }
    }
}

/// Checks every line; stops at the first failure.
pub fn check_proof(proof: &Proof) -> std::result::Result<(), ProofError> {
    for (k, line) in proof.lines.iter().enumerate() {
        check_line(proof, k, line)?;
    }
    Ok(())
}

fn check_line(proof: &Proof, k: usize, line: &Line) -> std::result::Result<(), ProofError> {
    let n = k + 1;
    let err = |expected: String| ProofError { line: n, expected, found: line.formula.to_string() };
    let cite = |i: usize| -> std::result::Result<&Formula, ProofError> {
        if i == 0 || i >= n {
            return Err(err(format!("a reference to an earlier line (1..{}), got {i}", n - 1)));
        }
        Ok(&proof.lines[i - 1].formula)
    };
    let f = &line.formula;
    match &line.by {
        Justification::Axiom(id) => {
            let s = schema(id).ok_or_else(|| err(format!("a known schema id, got `{id}`")))?;
            match_schema(f, s).map(|_| ()).ok_or_else(|| err(format!("an instance of {id} `{}`", s.pattern)))
        }
        Justification::Mp([i, j]) => {
            let (a, b) = (cite(*i)?, cite(*j)?);
            let want = Formula::imp(a.clone(), f.clone());
            if *b == want {
                Ok(())
            } else {
                Err(err(format!("line {j} to be `{want}`")))
            }
        }
        Justification::NecX(i) => {
            let want = Formula::next(cite(*i)?.clone());
            if *f == want { Ok(()) } else { Err(err(format!("`{want}`"))) }
        }
        Justification::NecG(i) => {
            let want = Formula::hence(cite(*i)?.clone());
            if *f == want { Ok(()) } else { Err(err(format!("`{want}`"))) }
        }
        Justification::DimpMon(i) => {
            let Formula::Imp(phi, psi) = cite(*i)? else {
                return Err(err(format!("line {i} to be an implication")));
            };
            match f {
                Formula::Imp(l, r) => match (&**l, &**r) {
                    (Formula::Coimp(a, t1), Formula::Coimp(b, t2)) if a == phi && b == psi && t1 == t2 => Ok(()),
                    _ => Err(err(format!("`({phi} <= θ) => ({psi} <= θ)`"))),
                },
                _ => Err(err(format!("`({phi} <= θ) => ({psi} <= θ)`"))),
            }
        }
        Justification::DimpDis(i) => {
            let Formula::Imp(phi, rhs) = cite(*i)? else {
                return Err(err(format!("line {i} to be of the form `φ => ψ | γ`")));
            };
            let Formula::Or(psi, gamma) = &**rhs else {
                return Err(err(format!("line {i} to be of the form `φ => ψ | γ`")));
            };
            let want = Formula::imp(Formula::coimp((**phi).clone(), (**psi).clone()), (**gamma).clone());
            if *f == want { Ok(()) } else { Err(err(format!("`{want}`"))) }
        }
    }
}

/// Instances over atoms `p`, `q` (and `r` for schemas with three
/// metavariables) of every axiom schema, followed by the derived families:
/// `○` distributing over `∨` and `∧` for zero, one and two operands, the
/// unfolding of `◇` and `□`, and two co-implication laws.
pub fn theorem_corpus() -> Vec<Formula> {
    let atoms: Substitution = [("phi", "p"), ("psi", "q"), ("chi", "r")]
        .into_iter()
        .map(|(m, a)| (m.to_string(), Formula::atom(a)))
        .collect();
    let mut out: Vec<Formula> = catalogue().iter().map(|s| s.instantiate(&atoms)).collect();
    let (p, q) = (Formula::atom("p"), Formula::atom("q"));
    let gammas: [Vec<Formula>; 3] = [vec![], vec![p.clone()], vec![p.clone(), q.clone()]];
    for g in &gammas {
        let nexts = g.iter().cloned().map(Formula::next);
        out.push(Formula::iff(Formula::next(Formula::disj(g.clone())), Formula::disj(nexts)));
    }
    for g in &gammas {
        let nexts = g.iter().cloned().map(Formula::next);
        out.push(Formula::iff(Formula::next(Formula::conj(g.clone())), Formula::conj(nexts)));
    }
    for text in ["F p => p | X F p", "p & X G p => G p", "(p <= p) => q", "(p <= q) => p"] {
        out.push(parse(text).expect("corpus formulas parse"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(f: &str, by: Justification) -> Line {
        Line { formula: parse(f).unwrap(), by }
    }

    #[test]
    fn single_axiom_line() {
        let pr = Proof { lines: vec![line("(p => q) | (q => p)", Justification::Axiom("III.a".into()))] };
        assert!(check_proof(&pr).is_ok());
    }

    #[test]
    fn bad_modus_ponens_is_reported_at_its_line() {
        let pr = Proof {
            lines: vec![
                line("p => q => p", Justification::Axiom("I.a".into())),
                line("q", Justification::Mp([1, 1])),
            ],
        };
        assert_eq!(check_proof(&pr).unwrap_err().line, 2);
    }

    #[test]
    fn dimp_dis_example() {
        let pr = Proof {
            lines: vec![
                line("p => p | q", Justification::Axiom("I.f".into())),
                line("(p <= p) => q", Justification::DimpDis(1)),
            ],
        };
        assert!(check_proof(&pr).is_ok());
    }

    #[test]
    fn dimp_mon_requires_shared_theta() {
        let good = Proof {
            lines: vec![
                line("p & q => p", Justification::Axiom("I.d".into())),
                line("((p & q) <= r) => (p <= r)", Justification::DimpMon(1)),
            ],
        };
        assert!(check_proof(&good).is_ok());
        let mut bad = good.clone();
        bad.lines[1].formula = parse("((p & q) <= r) => (p <= q)").unwrap();
        assert!(check_proof(&bad).is_err());
    }

    #[test]
    fn necessitation_needs_an_earlier_line() {
        let pr = Proof { lines: vec![line("G top", Justification::NecG(1))] };
        assert_eq!(check_proof(&pr).unwrap_err().line, 1);
        let pr = Proof {
            lines: vec![line("top", Justification::Axiom("I.j".into())), line("G top", Justification::NecG(2))],
        };
        assert!(check_proof(&pr).is_err());
        let pr = Proof {
            lines: vec![line("top", Justification::Axiom("I.j".into())), line("X top", Justification::NecX(1))],
        };
        assert!(check_proof(&pr).is_ok());
    }

    #[test]
    fn unknown_schema_rejected() {
        let pr = Proof { lines: vec![line("p", Justification::Axiom("IX".into()))] };
        assert!(check_proof(&pr).is_err());
    }

    #[test]
    fn json_format() {
        let text = r#"[{"formula":"p => p | q","by":{"axiom":"I.f"}},{"formula":"(p <= p) => q","by":{"dimpDis":1}}]"#;
        let pr = Proof::from_json(text).unwrap();
        assert!(check_proof(&pr).is_ok());
        assert_eq!(Proof::from_json(&pr.to_json()).unwrap(), pr);
        let mp = r#"[{"formula":"p","by":{"mp":[1,2]}}]"#;
        assert_eq!(Proof::from_json(mp).unwrap().lines[0].by, Justification::Mp([1, 2]));
    }

    #[test]
    fn corpus_contents() {
        let c = theorem_corpus();
        for s in ["X (p | q) <=> X p | X q", "!X bot", "G (p => X p) => p => G p", "X bot <=> bot", "X top <=> top"] {
            assert!(c.contains(&parse(s).unwrap()), "{s}");
        }
    }
}
