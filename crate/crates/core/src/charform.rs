//! Characteristic formulas of worlds `(ℓ, L)` and the laws they satisfy.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::decide::{enumerate_moments, transitions, Moment};
use crate::error::{Error, Result};
use crate::formula::{ClosureSet, Formula};
use crate::types::{check_sigma_size, enumerate_saturated, TwoSidedType};

/// A world: position `index` in the chain of `moment`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharContext {
    pub moment: Moment,
    pub index: usize,
}

impl CharContext {
    pub fn new(moment: Moment, index: usize) -> Result<CharContext> {
        if index >= moment.len() {
            return Err(Error::MalformedSystem(format!("index {index} outside a chain of length {}", moment.len())));
        }
        Ok(CharContext { moment, index })
    }

    pub fn label(&self) -> &TwoSidedType {
        &self.moment.chain()[self.index]
    }

    pub fn sigma(&self) -> &Arc<ClosureSet> {
        self.moment.sigma()
    }
}

/// `(→Δ, ←Δ)`: `⋀Δ⁺ ⇒ ⋁Δ⁻` and `⋀Δ⁺ ⇐ ⋁Δ⁻`.
pub fn arrow_formulas(delta: &TwoSidedType) -> (Formula, Formula) {
    let conj = Formula::conj(delta.pos().into_iter().cloned());
    let disj = Formula::disj(delta.neg().into_iter().cloned());
    (Formula::imp(conj.clone(), disj.clone()), Formula::coimp(conj, disj))
}

/// The three characteristic formulas of a world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chi {
    pub zero: Formula,
    pub plus: Formula,
    pub minus: Formula,
}

pub fn chi(w: &CharContext) -> Result<Chi> {
    let all = enumerate_saturated(w.sigma())?;
    let in_l: BTreeSet<u64> = w.moment.chain().iter().map(|t| t.pos_bits()).collect();
    let present = all
        .iter()
        .filter(|d| in_l.contains(&d.pos_bits()))
        .map(|d| Formula::coneg(arrow_formulas(d).0));
    let absent = all
        .iter()
        .filter(|d| !in_l.contains(&d.pos_bits()))
        .map(|d| Formula::neg(arrow_formulas(d).1));
    let zero = Formula::and(Formula::conj(present), Formula::conj(absent));
    let (to, from) = arrow_formulas(w.label());
    Ok(Chi { plus: Formula::and(from, zero.clone()), minus: Formula::imp(zero.clone(), to), zero })
}

/// Every world of the moment space over Σ, moments in enumeration order.
pub fn worlds(sigma: &Arc<ClosureSet>) -> Result<Vec<CharContext>> {
    Ok(enumerate_moments(sigma)?
        .into_iter()
        .flat_map(|m| (0..m.len()).map(move |i| CharContext { moment: m.clone(), index: i }))
        .collect())
}

/// Single-world laws for every world over Σ:
/// `χ⁺ ⇒ ψ` (ψ ∈ ℓ⁺), `ψ ⇒ χ⁻` (ψ ∈ ℓ⁻), `χ⁺ ⇒ (χ⁺ ⇐ ψ)` (ψ ∈ ℓ⁻) and
/// `(ψ ⇒ χ⁻) ⇒ χ⁻` (ψ ∈ ℓ⁺).
pub fn char_laws(sigma: &Arc<ClosureSet>) -> Result<Vec<Formula>> {
    check_sigma_size(sigma)?;
    let mut out = Vec::new();
    for w in worlds(sigma)? {
        let c = chi(&w)?;
        let l = w.label();
        for psi in l.pos() {
            out.push(Formula::imp(c.plus.clone(), psi.clone()));
        }
        for psi in l.neg() {
            out.push(Formula::imp(psi.clone(), c.minus.clone()));
        }
        for psi in l.neg() {
            out.push(Formula::imp(c.plus.clone(), Formula::coimp(c.plus.clone(), psi.clone())));
        }
        for psi in l.pos() {
            out.push(Formula::imp(Formula::imp(psi.clone(), c.minus.clone()), c.minus.clone()));
        }
    }
    Ok(out)
}

/// Successor relation on worlds: the union of all transitions of the full
/// moment space. `succ[w]` lists successors in world order.
pub fn world_relation(ws: &[CharContext]) -> Result<Vec<Vec<usize>>> {
    let mut starts: Vec<(usize, &Moment)> = Vec::new();
    let mut k = 0;
    while k < ws.len() {
        starts.push((k, &ws[k].moment));
        k += ws[k].moment.len();
    }
    let mut succ = vec![BTreeSet::new(); ws.len()];
    for &(a, c) in &starts {
        for &(b, d) in &starts {
            for t in transitions(c, d)? {
                for (i, j) in t.relation() {
                    succ[a + i].insert(b + j);
                }
            }
        }
    }
    Ok(succ.into_iter().map(|s| s.into_iter().collect()).collect())
}

/// Laws that mention successors:
/// `χ⁺(w) ⇒ ○⋁_{wRv} χ⁺(v)`, `○⋀_{wRv} χ⁻(v) ⇒ χ⁻(w)`, and for the
/// reflexive-transitive closure `R*`,
/// `⋁_{wR*v} χ⁺(v) ⇒ ○⋁_{wR*v} χ⁺(v)` and `○⋀_{wR*v} χ⁻(v) ⇒ ⋀_{wR*v} χ⁻(v)`.
pub fn successor_laws(sigma: &Arc<ClosureSet>) -> Result<Vec<Formula>> {
    check_sigma_size(sigma)?;
    let ws = worlds(sigma)?;
    let chis = ws.iter().map(chi).collect::<Result<Vec<Chi>>>()?;
    let succ = world_relation(&ws)?;
    let plus = |vs: &[usize]| Formula::disj(vs.iter().map(|&v| chis[v].plus.clone()));
    let minus = |vs: &[usize]| Formula::conj(vs.iter().map(|&v| chis[v].minus.clone()));
    let mut out = Vec::new();
    for w in 0..ws.len() {
        out.push(Formula::imp(chis[w].plus.clone(), Formula::next(plus(&succ[w]))));
        out.push(Formula::imp(Formula::next(minus(&succ[w])), chis[w].minus.clone()));
    }
    for w in 0..ws.len() {
        let mut seen = vec![false; ws.len()];
        let mut stack = vec![w];
        seen[w] = true;
        while let Some(v) = stack.pop() {
            for &u in &succ[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        let reach: Vec<usize> = (0..ws.len()).filter(|&v| seen[v]).collect();
        out.push(Formula::imp(plus(&reach), Formula::next(plus(&reach))));
        out.push(Formula::imp(Formula::next(minus(&reach)), minus(&reach)));
    }
    Ok(out)
}
