//! Two-sided Σ-types.
//!
//! A type is a pair of disjoint subsets of a closure set, stored as bit masks
//! over the closure set's canonical indices. Closure sets used with types are
//! therefore limited to 64 formulas.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{ClosureSet, Formula, Node};

/// Bit mask over closure-set indices.
pub type Bits = u64;

pub const MAX_SIGMA: usize = 64;

pub(crate) fn bit(i: usize) -> Bits {
    1 << i
}

pub(crate) fn all_bits(n: usize) -> Bits {
    if n == 64 {
        !0
    } else {
        (1 << n) - 1
    }
}

pub(crate) fn has(bits: Bits, i: usize) -> bool {
    bits & bit(i) != 0
}

pub(crate) fn check_sigma_size(sigma: &ClosureSet) -> Result<()> {
    if sigma.len() > MAX_SIGMA {
        Err(Error::SigmaTooLarge(sigma.len()))
    } else {
        Ok(())
    }
}

/// The closure conditions a two-sided type must satisfy, numbered as in the
/// usual presentation; the two constant conditions come last.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeCondition {
    Disjoint,
    ConjPos,
    ConjNeg,
    DisjPos,
    DisjNeg,
    ImpPos,
    ImpNeg,
    CoimpNeg,
    CoimpPos,
    EvNeg,
    HencePos,
    BotPos,
    TopNeg,
}

impl TypeCondition {
    pub fn number(self) -> u8 {
        self as u8 + 1
    }
}

impl fmt::Display for TypeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeCondition::BotPos => write!(f, "bot must be negative"),
            TypeCondition::TopNeg => write!(f, "top must be positive"),
            other => write!(f, "condition {}", other.number()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeViolation {
    pub condition: TypeCondition,
    pub formula: Formula,
}

impl fmt::Display for TypeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at `{}`", self.condition, self.formula)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TypeError {
    #[error("formula `{0}` is not in the closure set")]
    OutsideSigma(Formula),
    #[error("closure set has {0} formulas; at most 64 are supported")]
    SigmaTooLarge(usize),
    #[error("{0}")]
    Violation(TypeViolation),
}

/// First violated condition, scanning conditions in order and formulas in
/// canonical order within each condition.
pub(crate) fn find_violation(sigma: &ClosureSet, pos: Bits, neg: Bits) -> Option<(TypeCondition, usize)> {
    use TypeCondition::*;
    if pos & neg != 0 {
        return Some((Disjoint, (pos & neg).trailing_zeros() as usize));
    }
    let conds = [
        ConjPos, ConjNeg, DisjPos, DisjNeg, ImpPos, ImpNeg, CoimpNeg, CoimpPos, EvNeg, HencePos, BotPos, TopNeg,
    ];
    for cond in conds {
        for i in 0..sigma.len() {
            let (p, n) = (has(pos, i), has(neg, i));
            let bad = match (cond, sigma.node(i)) {
                (ConjPos, Node::And(a, b)) => p && !(has(pos, a) && has(pos, b)),
                (ConjNeg, Node::And(a, b)) => n && !(has(neg, a) || has(neg, b)),
                (DisjPos, Node::Or(a, b)) => p && !(has(pos, a) || has(pos, b)),
                (DisjNeg, Node::Or(a, b)) => n && !(has(neg, a) && has(neg, b)),
                (ImpPos, Node::Imp(a, b)) => p && !(has(neg, a) || has(pos, b)),
                (ImpNeg, Node::Imp(_, b)) => n && !has(neg, b),
                (CoimpNeg, Node::Coimp(a, b)) => n && !(has(neg, a) || has(pos, b)),
                (CoimpPos, Node::Coimp(a, _)) => p && !has(pos, a),
                (EvNeg, Node::Ev(a)) => n && !has(neg, a),
                (HencePos, Node::Hence(a)) => p && !has(pos, a),
                (BotPos, Node::Bot) => p,
                (TopNeg, Node::Top) => n,
                _ => false,
            };
            if bad {
                return Some((cond, i));
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct TwoSidedType {
    sigma: Arc<ClosureSet>,
    pos: Bits,
    neg: Bits,
}

impl PartialEq for TwoSidedType {
    fn eq(&self, other: &Self) -> bool {
        self.pos == other.pos && self.neg == other.neg && same_sigma(&self.sigma, &other.sigma)
    }
}

impl Eq for TwoSidedType {}

pub(crate) fn same_sigma(a: &Arc<ClosureSet>, b: &Arc<ClosureSet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl TwoSidedType {
    /// Builds a pair from explicit formula sets. Only membership in Σ is
    /// checked here; see [`TwoSidedType::check`].
    pub fn new<'a, P, N>(sigma: Arc<ClosureSet>, pos: P, neg: N) -> Result<TwoSidedType>
    where
        P: IntoIterator<Item = &'a Formula>,
        N: IntoIterator<Item = &'a Formula>,
    {
        check_sigma_size(&sigma)?;
        let mask = |items: Vec<&Formula>| -> Result<Bits> {
            items.into_iter().try_fold(0, |acc, f| {
                sigma.index_of(f).map(|i| acc | bit(i)).ok_or_else(|| Error::NotInSigma(f.clone()))
            })
        };
        let pos = mask(pos.into_iter().collect())?;
        let neg = mask(neg.into_iter().collect())?;
        Ok(TwoSidedType { sigma, pos, neg })
    }

    pub fn from_bits(sigma: Arc<ClosureSet>, pos: Bits, neg: Bits) -> TwoSidedType {
        debug_assert!(sigma.len() <= MAX_SIGMA);
        TwoSidedType { sigma, pos, neg }
    }

    /// Saturated type with the given positive part.
    pub fn saturated(sigma: Arc<ClosureSet>, pos: Bits) -> TwoSidedType {
        let neg = all_bits(sigma.len()) & !pos;
        TwoSidedType { sigma, pos, neg }
    }

    pub fn sigma(&self) -> &Arc<ClosureSet> {
        &self.sigma
    }

    pub fn pos_bits(&self) -> Bits {
        self.pos
    }

    pub fn neg_bits(&self) -> Bits {
        self.neg
    }

    pub fn is_pos(&self, f: &Formula) -> bool {
        self.sigma.index_of(f).is_some_and(|i| has(self.pos, i))
    }

    pub fn is_neg(&self, f: &Formula) -> bool {
        self.sigma.index_of(f).is_some_and(|i| has(self.neg, i))
    }

    pub fn pos(&self) -> Vec<&Formula> {
        self.members(self.pos)
    }

    pub fn neg(&self) -> Vec<&Formula> {
        self.members(self.neg)
    }

    fn members(&self, bits: Bits) -> Vec<&Formula> {
        (0..self.sigma.len()).filter(|&i| has(bits, i)).map(|i| self.sigma.get(i)).collect()
    }

    pub fn is_saturated(&self) -> bool {
        self.pos | self.neg == all_bits(self.sigma.len())
    }

    pub fn check(&self) -> Result<(), TypeViolation> {
        match find_violation(&self.sigma, self.pos, self.neg) {
            None => Ok(()),
            Some((condition, i)) => Err(TypeViolation { condition, formula: self.sigma.get(i).clone() }),
        }
    }

    /// The information order: `self <= other` iff `self` is at least as
    /// positive and at most as negative.
    pub fn leq(&self, other: &TwoSidedType) -> Result<bool> {
        if !same_sigma(&self.sigma, &other.sigma) {
            return Err(Error::SigmaMismatch);
        }
        Ok(self.neg & !other.neg == 0 && other.pos & !self.pos == 0)
    }
}

impl fmt::Display for TwoSidedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<&Formula>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "({{{}}}, {{{}}})", join(self.pos()), join(self.neg()))
    }
}

/// Checks the pair `(pos, neg)` against every type condition.
pub fn check_type(
    sigma: &Arc<ClosureSet>,
    pos: &BTreeSet<Formula>,
    neg: &BTreeSet<Formula>,
) -> Result<(), TypeError> {
    if let Some(f) = pos.iter().chain(neg).find(|f| !sigma.contains(f)) {
        return Err(TypeError::OutsideSigma(f.clone()));
    }
    if sigma.len() > MAX_SIGMA {
        return Err(TypeError::SigmaTooLarge(sigma.len()));
    }
    let ty = TwoSidedType::new(sigma.clone(), pos, neg).expect("membership checked above");
    ty.check().map_err(TypeError::Violation)
}

pub fn leq_sigma(a: &TwoSidedType, b: &TwoSidedType) -> Result<bool> {
    a.leq(b)
}

/// Positive parts of all saturated types over Σ, by depth-first assignment
/// in canonical order (positive branch first).
pub(crate) fn saturated_pos_sets(sigma: &ClosureSet) -> Vec<Bits> {
    fn go(sigma: &ClosureSet, i: usize, pos: Bits, out: &mut Vec<Bits>) {
        if i == sigma.len() {
            out.push(pos);
            return;
        }
        let p = |j: usize| has(pos, j);
        // (may be positive, may be negative)
        let (can_pos, can_neg) = match sigma.node(i) {
            Node::Atom | Node::Next(_) => (true, true),
            Node::Bot => (false, true),
            Node::Top => (true, false),
            Node::And(a, b) => {
                let v = p(a) && p(b);
                (v, !v)
            }
            Node::Or(a, b) => {
                let v = p(a) || p(b);
                (v, !v)
            }
            Node::Imp(a, b) => (!p(a) || p(b), !p(b)),
            Node::Coimp(a, b) => (p(a), !p(a) || p(b)),
            Node::Ev(a) => (true, !p(a)),
            Node::Hence(a) => (p(a), true),
        };
        if can_pos {
            go(sigma, i + 1, pos | bit(i), out);
        }
        if can_neg {
            go(sigma, i + 1, pos, out);
        }
    }
    let mut out = Vec::new();
    go(sigma, 0, 0, &mut out);
    out
}

/// All saturated two-sided types over Σ, in a deterministic order.
pub fn enumerate_saturated(sigma: &Arc<ClosureSet>) -> Result<Vec<TwoSidedType>> {
    check_sigma_size(sigma)?;
    Ok(saturated_pos_sets(sigma)
        .into_iter()
        .map(|pos| TwoSidedType::saturated(sigma.clone(), pos))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn sigma(s: &str) -> Arc<ClosureSet> {
        Arc::new(ClosureSet::of(&parse(s).unwrap()))
    }

    fn fs(items: &[&str]) -> BTreeSet<Formula> {
        items.iter().map(|s| parse(s).unwrap()).collect()
    }

    /// Oracle: every sign assignment, filtered by the condition checker.
    fn brute_force(sigma: &Arc<ClosureSet>) -> BTreeSet<Bits> {
        let n = sigma.len();
        (0..(1u64 << n))
            .filter(|&pos| find_violation(sigma, pos, all_bits(n) & !pos).is_none())
            .collect()
    }

    #[test]
    fn check_type_examples() {
        let s = sigma("F p");
        let err = check_type(&s, &fs(&["p"]), &fs(&["F p"])).unwrap_err();
        assert!(matches!(err, TypeError::Violation(TypeViolation { condition: TypeCondition::EvNeg, .. })));
        if let TypeError::Violation(v) = err {
            assert_eq!(v.condition.number(), 10);
        }

        let s = sigma("p");
        assert!(check_type(&s, &fs(&["p"]), &fs(&[])).is_ok());
        let t = TwoSidedType::new(s.clone(), &fs(&["p"]), &fs(&[])).unwrap();
        assert!(t.is_saturated());

        let s = sigma("G p");
        let err = check_type(&s, &fs(&["G p"]), &fs(&["p"])).unwrap_err();
        match err {
            TypeError::Violation(v) => assert_eq!(v.condition.number(), 11),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn check_type_rejects_outside_sigma() {
        let s = sigma("p");
        assert!(matches!(check_type(&s, &fs(&["q"]), &fs(&[])), Err(TypeError::OutsideSigma(_))));
    }

    #[test]
    fn constants_are_fixed() {
        let s = sigma("p | bot");
        let err = check_type(&s, &fs(&["bot", "p", "p | bot"]), &fs(&[])).unwrap_err();
        assert!(matches!(err, TypeError::Violation(TypeViolation { condition: TypeCondition::BotPos, .. })));
        let s = sigma("top");
        assert!(check_type(&s, &fs(&[]), &fs(&["top"])).is_err());
        assert_eq!(enumerate_saturated(&s).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_saturated(&sigma("p")).unwrap().len(), 2);
        let ev = enumerate_saturated(&sigma("F p")).unwrap();
        assert_eq!(ev.len(), 3);
        let shown: BTreeSet<String> = ev.iter().map(|t| t.to_string()).collect();
        let expected: BTreeSet<String> =
            ["({p, F p}, {})", "({F p}, {p})", "({}, {p, F p})"].iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, expected);
        let empty = Arc::new(ClosureSet::empty());
        let only = enumerate_saturated(&empty).unwrap();
        assert_eq!(only.len(), 1);
        assert!(only[0].pos().is_empty() && only[0].neg().is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for s in [
            "p => q",
            "p <= q",
            "(p & q) | !p",
            "G (p => X p) => (p => G p)",
            "X (p <= q) => (X p <= X q)",
            "F p | G ~q",
            "top <= (bot => p)",
        ] {
            let sig = sigma(s);
            let fast: BTreeSet<Bits> = saturated_pos_sets(&sig).into_iter().collect();
            assert_eq!(fast, brute_force(&sig), "{s}");
            assert!(fast.len() <= 1 << sig.len());
        }
    }

    #[test]
    fn leq_examples() {
        let s = sigma("p");
        let top = TwoSidedType::new(s.clone(), &fs(&["p"]), &fs(&[])).unwrap();
        let bot = TwoSidedType::new(s.clone(), &fs(&[]), &fs(&["p"])).unwrap();
        assert!(leq_sigma(&top, &bot).unwrap());
        assert!(!leq_sigma(&bot, &top).unwrap());
        assert!(leq_sigma(&top, &top).unwrap());
        let other = enumerate_saturated(&sigma("q")).unwrap();
        assert!(matches!(leq_sigma(&top, &other[0]), Err(Error::SigmaMismatch)));
    }

    #[test]
    fn leq_is_a_partial_order() {
        for s in ["p", "p & q", "F p => q", "X p <= G q"] {
            let types = enumerate_saturated(&sigma(s)).unwrap();
            for a in &types {
                assert!(a.leq(a).unwrap());
                assert_eq!(a.neg_bits(), all_bits(a.sigma().len()) & !a.pos_bits());
                for b in &types {
                    if a.leq(b).unwrap() && b.leq(a).unwrap() {
                        assert_eq!(a, b);
                    }
                    for c in &types {
                        if a.leq(b).unwrap() && b.leq(c).unwrap() {
                            assert!(a.leq(c).unwrap());
                        }
                    }
                }
            }
        }
    }
}
