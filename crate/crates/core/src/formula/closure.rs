use std::collections::{BTreeSet, HashMap};

use super::Formula;

/// Shape of a closure-set member, with children given as indices into the
/// same closure set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Atom,
    Bot,
    Top,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Coimp(usize, usize),
    Next(usize),
    Ev(usize),
    Hence(usize),
}

/// A finite, subformula-closed set of formulas in canonical order.
///
/// The canonical order sorts by AST size and then structurally, so every
/// formula comes after all of its proper subformulas.
#[derive(Clone, Debug)]
pub struct ClosureSet {
    formulas: Vec<Formula>,
    nodes: Vec<Node>,
    index: HashMap<Formula, usize>,
}

impl PartialEq for ClosureSet {
    fn eq(&self, other: &Self) -> bool {
        self.formulas == other.formulas
    }
}

impl Eq for ClosureSet {}

impl ClosureSet {
    pub fn empty() -> ClosureSet {
        ClosureSet::from_formulas(std::iter::empty())
    }

    /// Smallest subformula-closed set containing `f`.
    pub fn of(f: &Formula) -> ClosureSet {
        ClosureSet::from_formulas(std::iter::once(f.clone()))
    }

    pub fn from_formulas<I: IntoIterator<Item = Formula>>(formulas: I) -> ClosureSet {
        let mut all = BTreeSet::new();
        let mut stack: Vec<Formula> = formulas.into_iter().collect();
        while let Some(f) = stack.pop() {
            if all.contains(&f) {
                continue;
            }
            stack.extend(f.children().into_iter().cloned());
            all.insert(f);
        }
        let mut formulas: Vec<(usize, Formula)> = all.into_iter().map(|f| (f.size(), f)).collect();
        formulas.sort();
        let formulas: Vec<Formula> = formulas.into_iter().map(|(_, f)| f).collect();
        let index: HashMap<Formula, usize> =
            formulas.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let nodes = formulas
            .iter()
            .map(|f| {
                let ix = |g: &Formula| index[g];
                match f {
                    Formula::Atom(_) => Node::Atom,
                    Formula::Bot => Node::Bot,
                    Formula::Top => Node::Top,
                    Formula::And(a, b) => Node::And(ix(a), ix(b)),
                    Formula::Or(a, b) => Node::Or(ix(a), ix(b)),
                    Formula::Imp(a, b) => Node::Imp(ix(a), ix(b)),
                    Formula::Coimp(a, b) => Node::Coimp(ix(a), ix(b)),
                    Formula::Next(a) => Node::Next(ix(a)),
                    Formula::Ev(a) => Node::Ev(ix(a)),
                    Formula::Hence(a) => Node::Hence(ix(a)),
                }
            })
            .collect();
        ClosureSet { formulas, nodes, index }
    }

    /// Closing an already closed set is the identity.
    pub fn closure(&self) -> ClosureSet {
        ClosureSet::from_formulas(self.formulas.iter().cloned())
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn get(&self, i: usize) -> &Formula {
        &self.formulas[i]
    }

    pub fn node(&self, i: usize) -> Node {
        self.nodes[i]
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn set(items: &[&str]) -> BTreeSet<Formula> {
        items.iter().map(|s| parse(s).unwrap()).collect()
    }

    fn members(c: &ClosureSet) -> BTreeSet<Formula> {
        c.iter().cloned().collect()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(members(&ClosureSet::of(&parse("F p").unwrap())), set(&["F p", "p"]));
        assert_eq!(
            members(&ClosureSet::of(&parse("p => (q <= p)").unwrap())),
            set(&["p => (q <= p)", "p", "q <= p", "q"])
        );
        assert_eq!(members(&ClosureSet::of(&Formula::Bot)), set(&["bot"]));
        assert!(ClosureSet::empty().is_empty());
    }

    #[test]
    fn children_precede_parents() {
        let c = ClosureSet::of(&parse("G (p => X q) & F (p <= q)").unwrap());
        for i in 0..c.len() {
            let kids = match c.node(i) {
                Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) | Node::Coimp(a, b) => vec![a, b],
                Node::Next(a) | Node::Ev(a) | Node::Hence(a) => vec![a],
                _ => vec![],
            };
            assert!(kids.iter().all(|&k| k < i));
        }
    }

    #[test]
    fn closure_is_idempotent() {
        let c = ClosureSet::of(&parse("(p | q) => X (p & G q)").unwrap());
        assert_eq!(c.closure(), c);
    }
}
