//! Formulas of the Gödel temporal language.
//!
//! The AST only carries primitive connectives. Negation `!`, co-negation `~`
//! and the biconditional `<=>` exist in the concrete syntax and are expanded by
//! the parser.

mod closure;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use closure::{ClosureSet, Node};
pub use parse::{parse, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Bot,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// Implication `=>`.
    Imp(Box<Formula>, Box<Formula>),
    /// Co-implication `<=`.
    Coimp(Box<Formula>, Box<Formula>),
    /// Next, `X`.
    Next(Box<Formula>),
    /// Eventually, `F`.
    Ev(Box<Formula>),
    /// Henceforth, `G`.
    Hence(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn coimp(a: Formula, b: Formula) -> Formula {
        Formula::Coimp(Box::new(a), Box::new(b))
    }

    pub fn next(a: Formula) -> Formula {
        Formula::Next(Box::new(a))
    }

    pub fn ev(a: Formula) -> Formula {
        Formula::Ev(Box::new(a))
    }

    pub fn hence(a: Formula) -> Formula {
        Formula::Hence(Box::new(a))
    }

    /// `a => bot`
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    /// `top <= a`
    pub fn coneg(a: Formula) -> Formula {
        Formula::coimp(Formula::Top, a)
    }

    /// `(a => b) & (b => a)`
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Right-nested conjunction; the empty conjunction is `top`.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let items: Vec<Formula> = items.into_iter().collect();
        items
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::and(f, acc))
            .unwrap_or(Formula::Top)
    }

    /// Right-nested disjunction; the empty disjunction is `bot`.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let items: Vec<Formula> = items.into_iter().collect();
        items
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::or(f, acc))
            .unwrap_or(Formula::Bot)
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Bot | Formula::Top => vec![],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Coimp(a, b) => {
                vec![a, b]
            }
            Formula::Next(a) | Formula::Ev(a) | Formula::Hence(a) => vec![a],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(name) = self {
            out.insert(name.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    fn binding(&self) -> Level {
        match self {
            Formula::Imp(..) | Formula::Coimp(..) => Level::Loose,
            Formula::Or(..) => Level::Or,
            Formula::And(..) => Level::And,
            _ => Level::Unary,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Loose,
    Or,
    And,
    Unary,
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

fn write_operand(child: &Formula, parens: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if parens {
        write!(f, "(")?;
        write_formula(child, f)?;
        write!(f, ")")
    } else {
        write_formula(child, f)
    }
}

fn write_formula(x: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match x {
        Formula::Atom(name) => write!(f, "{name}"),
        Formula::Bot => write!(f, "bot"),
        Formula::Top => write!(f, "top"),
        Formula::Next(a) | Formula::Ev(a) | Formula::Hence(a) => {
            let op = match x {
                Formula::Next(_) => "X",
                Formula::Ev(_) => "F",
                _ => "G",
            };
            write!(f, "{op} ")?;
            write_operand(a, a.binding() < Level::Unary, f)
        }
        Formula::And(a, b) => {
            write_operand(a, a.binding() < Level::And, f)?;
            write!(f, " & ")?;
            write_operand(b, b.binding() <= Level::And, f)
        }
        Formula::Or(a, b) => {
            write_operand(a, a.binding() < Level::Or, f)?;
            write!(f, " | ")?;
            write_operand(b, b.binding() <= Level::Or, f)
        }
        Formula::Imp(a, b) => {
            // right-associative: only a right child of the same kind goes bare
            write_operand(a, a.binding() == Level::Loose, f)?;
            write!(f, " => ")?;
            write_operand(b, matches!(**b, Formula::Coimp(..)), f)
        }
        Formula::Coimp(a, b) => {
            // left-associative: only a left child of the same kind goes bare
            write_operand(a, matches!(**a, Formula::Imp(..)), f)?;
            write!(f, " <= ")?;
            write_operand(b, b.binding() == Level::Loose, f)
        }
    }
}
