//! Labelled spaces, labelled systems and quasimodels.
//!
//! A [`LabelledSystem`] is a finite poset of worlds, each labelled by a
//! saturated two-sided type, together with a successor relation. The checks
//! here are exhaustive; all structures are small and explicit.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{parse, ClosureSet, Formula, Node};
use crate::types::{find_violation, has, same_sigma, Bits, TwoSidedType};

/// Name of the condition a structure failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    OrderNotAntisymmetric,
    NotLocallyLinear,
    LabelNotType,
    LabelNotSaturated,
    LabelNotMonotone,
    ImpWitness,
    CoimpWitness,
    NotSerial,
    ForthDown,
    ForthUp,
    BackDown,
    BackUp,
    ImageNotConvex,
    PreimageNotConvex,
    NotSensible,
    EventualityNotRealized,
    HenceforthNotRefuted,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::OrderNotAntisymmetric => "order-antisymmetry",
            Condition::NotLocallyLinear => "local-linearity",
            Condition::LabelNotType => "label-type",
            Condition::LabelNotSaturated => "label-saturation",
            Condition::LabelNotMonotone => "label-monotonicity",
            Condition::ImpWitness => "implication-witness",
            Condition::CoimpWitness => "coimplication-witness",
            Condition::NotSerial => "seriality",
            Condition::ForthDown => "forth-down",
            Condition::ForthUp => "forth-up",
            Condition::BackDown => "back-down",
            Condition::BackUp => "back-up",
            Condition::ImageNotConvex => "image-convexity",
            Condition::PreimageNotConvex => "preimage-convexity",
            Condition::NotSensible => "sensibility",
            Condition::EventualityNotRealized => "eventuality",
            Condition::HenceforthNotRefuted => "henceforth-refutation",
        };
        f.write_str(s)
    }
}

/// A failed check: the condition, the worlds involved (by name) and the
/// formula concerned, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub worlds: Vec<String>,
    pub formula: Option<Formula>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at [{}]", self.condition, self.worlds.join(", "))?;
        if let Some(phi) = &self.formula {
            write!(f, " for `{phi}`")?;
        }
        Ok(())
    }
}

impl std::error::Error for Violation {}

pub type Check = std::result::Result<(), Violation>;

#[derive(Clone, Debug)]
pub struct LabelledSystem {
    sigma: Arc<ClosureSet>,
    names: Vec<String>,
    labels: Vec<TwoSidedType>,
    /// Reflexive-transitive closure of the given order pairs.
    leq: Vec<Vec<bool>>,
    /// `up[w]` lists every `v >= w` (including `w`), `down[w]` every `v <= w`.
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    rel: BTreeSet<(usize, usize)>,
}

impl LabelledSystem {
    /// `order` lists pairs `(w, v)` meaning `w <= v`; covering pairs are
    /// enough, the closure is computed here.
    pub fn new(
        sigma: Arc<ClosureSet>,
        names: Vec<String>,
        labels: Vec<TwoSidedType>,
        order: impl IntoIterator<Item = (usize, usize)>,
        rel: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<LabelledSystem> {
        let n = names.len();
        if labels.len() != n {
            return Err(Error::MalformedSystem(format!("{} worlds but {} labels", n, labels.len())));
        }
        if labels.iter().any(|l| !same_sigma(l.sigma(), &sigma)) {
            return Err(Error::SigmaMismatch);
        }
        let mut cover = vec![Vec::new(); n];
        for (a, b) in order {
            if a >= n || b >= n {
                return Err(Error::MalformedSystem(format!("order pair ({a}, {b}) out of range")));
            }
            cover[a].push(b);
        }
        let mut leq = vec![vec![false; n]; n];
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for w in 0..n {
            let mut stack = vec![w];
            leq[w][w] = true;
            while let Some(v) = stack.pop() {
                up[w].push(v);
                down[v].push(w);
                for &u in &cover[v] {
                    if !leq[w][u] {
                        leq[w][u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        let rel: BTreeSet<(usize, usize)> = rel.into_iter().collect();
        if let Some(&(a, b)) = rel.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::MalformedSystem(format!("relation pair ({a}, {b}) out of range")));
        }
        Ok(LabelledSystem { sigma, names, labels, leq, up, down, rel })
    }

    pub fn sigma(&self) -> &Arc<ClosureSet> {
        &self.sigma
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, w: usize) -> &TwoSidedType {
        &self.labels[w]
    }

    pub fn labels(&self) -> &[TwoSidedType] {
        &self.labels
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Worlds above `w`, including `w`.
    pub fn up(&self, w: usize) -> &[usize] {
        &self.up[w]
    }

    /// Worlds below `w`, including `w`.
    pub fn down(&self, w: usize) -> &[usize] {
        &self.down[w]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq[a][b] || self.leq[b][a]
    }

    pub fn rel(&self) -> &BTreeSet<(usize, usize)> {
        &self.rel
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.rel.contains(&(a, b))
    }

    /// Same worlds, order and labels; a different relation.
    pub fn with_rel(&self, rel: BTreeSet<(usize, usize)>) -> LabelledSystem {
        LabelledSystem { rel, ..self.clone() }
    }

    fn sorted(&self, set: &[usize]) -> std::vec::IntoIter<usize> {
        let mut v = set.to_vec();
        v.sort_unstable();
        v.into_iter()
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for &(a, b) in &self.rel {
            out[a].push(b);
        }
        out
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for &(a, b) in &self.rel {
            out[b].push(a);
        }
        out
    }

    /// Longest strict chain.
    pub fn height(&self) -> usize {
        let n = self.len();
        // a strictly smaller world has a strictly smaller down-set
        let mut memo = vec![0usize; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&w| self.down[w].len());
        for &w in &order {
            let best = self.down[w].iter().filter(|&&v| !self.leq[w][v]).map(|&v| memo[v]).max().unwrap_or(0);
            memo[w] = best + 1;
        }
        memo.into_iter().max().unwrap_or(0)
    }

    fn violation(&self, condition: Condition, worlds: &[usize], formula: Option<usize>) -> Violation {
        Violation {
            condition,
            worlds: worlds.iter().map(|&w| self.names[w].clone()).collect(),
            formula: formula.map(|i| self.sigma.get(i).clone()),
        }
    }

    /// Partial order, local linearity, labels are monotone saturated types,
    /// and the implication / co-implication witness conditions.
    pub fn validate_space(&self) -> Check {
        let n = self.len();
        for a in 0..n {
            if let Some(&b) = self.up[a].iter().find(|&&b| b != a && self.leq[b][a]) {
                return Err(self.violation(Condition::OrderNotAntisymmetric, &[a.min(b), a.max(b)], None));
            }
        }
        for a in 0..n {
            for set in [&self.up[a], &self.down[a]] {
                for (k, &b) in set.iter().enumerate() {
                    if let Some(&c) = set[k + 1..].iter().find(|&&c| !self.comparable(b, c)) {
                        return Err(self.violation(Condition::NotLocallyLinear, &[a, b.min(c), b.max(c)], None));
                    }
                }
            }
        }
        for w in 0..n {
            let l = &self.labels[w];
            if let Some((_, i)) = find_violation(&self.sigma, l.pos_bits(), l.neg_bits()) {
                return Err(self.violation(Condition::LabelNotType, &[w], Some(i)));
            }
            if !l.is_saturated() {
                return Err(self.violation(Condition::LabelNotSaturated, &[w], None));
            }
        }
        for a in 0..n {
            for &b in &self.up[a] {
                if !self.labels[a].leq(&self.labels[b]).unwrap_or(false) {
                    return Err(self.violation(Condition::LabelNotMonotone, &[a, b], None));
                }
            }
        }
        for w in 0..n {
            let l = &self.labels[w];
            for i in 0..self.sigma.len() {
                match self.sigma.node(i) {
                    Node::Imp(a, b) if has(l.neg_bits(), i) => {
                        let ok = self.down[w].iter().any(|&v| {
                            has(self.labels[v].pos_bits(), a) && has(self.labels[v].neg_bits(), b)
                        });
                        if !ok {
                            return Err(self.violation(Condition::ImpWitness, &[w], Some(i)));
                        }
                    }
                    Node::Coimp(a, b) if has(l.pos_bits(), i) => {
                        let ok = self.up[w].iter().any(|&v| {
                            has(self.labels[v].pos_bits(), a) && has(self.labels[v].neg_bits(), b)
                        });
                        if !ok {
                            return Err(self.violation(Condition::CoimpWitness, &[w], Some(i)));
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn check_serial(&self) -> Check {
        let succ = self.successors();
        match (0..self.len()).find(|&w| succ[w].is_empty()) {
            Some(w) => Err(self.violation(Condition::NotSerial, &[w], None)),
            None => Ok(()),
        }
    }

    /// The four confluence conditions, checked exhaustively.
    pub fn check_confluence(&self) -> Check {
        let succ = self.successors();
        let pred = self.predecessors();
        // pairs are visited in order, so the reported triple is deterministic
        for &(x1, y1) in &self.rel {
            // forth-down: x <= x1 R y1  =>  x R y <= y1
            if let Some(x) = self.sorted(&self.down[x1]).find(|&x| !succ[x].iter().any(|&y| self.leq[y][y1])) {
                return Err(self.violation(Condition::ForthDown, &[x, x1, y1], None));
            }
            // forth-up: x >= x1 R y1  =>  x R y >= y1
            if let Some(x) = self.sorted(&self.up[x1]).find(|&x| !succ[x].iter().any(|&y| self.leq[y1][y])) {
                return Err(self.violation(Condition::ForthUp, &[x, x1, y1], None));
            }
            // back-down: x1 R y1 >= y  =>  x1 >= x R y
            if let Some(y) = self.sorted(&self.down[y1]).find(|&y| !pred[y].iter().any(|&x| self.leq[x][x1])) {
                return Err(self.violation(Condition::BackDown, &[x1, y1, y], None));
            }
            // back-up: x1 R y1 <= y  =>  x1 <= x R y
            if let Some(y) = self.sorted(&self.up[y1]).find(|&y| !pred[y].iter().any(|&x| self.leq[x1][x])) {
                return Err(self.violation(Condition::BackUp, &[x1, y1, y], None));
            }
        }
        Ok(())
    }

    /// Images and preimages of single worlds are convex.
    pub fn check_convex(&self) -> Check {
        let check = |sets: &[Vec<usize>], cond: Condition| -> Check {
            for (w, set) in sets.iter().enumerate() {
                for &a in set {
                    for &b in set {
                        if a == b || !self.leq[a][b] {
                            continue;
                        }
                        let gap = self.sorted(&self.up[a]).find(|&m| self.leq[m][b] && !set.contains(&m));
                        if let Some(m) = gap {
                            return Err(self.violation(cond, &[w, a, m, b], None));
                        }
                    }
                }
            }
            Ok(())
        };
        check(&self.successors(), Condition::ImageNotConvex)?;
        check(&self.predecessors(), Condition::PreimageNotConvex)
    }

    pub fn check_sensible(&self) -> Check {
        for &(a, b) in &self.rel {
            if let Some(i) = first_insensible(&self.labels[a], &self.labels[b]) {
                return Err(self.violation(Condition::NotSensible, &[a, b], Some(i)));
            }
        }
        Ok(())
    }

    /// Every positive eventuality and negative henceforth is realized along a
    /// finite path (reflexive-transitive closure of the relation).
    pub fn check_omega_sensible(&self) -> Check {
        let pred = self.predecessors();
        let n = self.len();
        for i in 0..self.sigma.len() {
            let (arg, want_pos, cond) = match self.sigma.node(i) {
                Node::Ev(a) => (a, true, Condition::EventualityNotRealized),
                Node::Hence(a) => (a, false, Condition::HenceforthNotRefuted),
                _ => continue,
            };
            let goal = |w: usize| {
                let l = &self.labels[w];
                if want_pos {
                    has(l.pos_bits(), arg)
                } else {
                    has(l.neg_bits(), arg)
                }
            };
            let mut reach = vec![false; n];
            let mut queue: VecDeque<usize> = (0..n).filter(|&w| goal(w)).collect();
            for &w in &queue {
                reach[w] = true;
            }
            while let Some(w) = queue.pop_front() {
                for &v in &pred[w] {
                    if !reach[v] {
                        reach[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            for (w, l) in self.labels.iter().enumerate() {
                let claim = if want_pos { has(l.pos_bits(), i) } else { has(l.neg_bits(), i) };
                if claim && !reach[w] {
                    return Err(self.violation(cond, &[w], Some(i)));
                }
            }
        }
        Ok(())
    }

    /// Space conditions plus a serial, fully confluent, convex relation with
    /// sensible pairs.
    pub fn validate_system(&self) -> Check {
        self.validate_space()?;
        self.check_serial()?;
        self.check_confluence()?;
        self.check_convex()?;
        self.check_sensible()
    }

    pub fn validate_quasimodel(&self) -> Check {
        self.validate_system()?;
        self.check_omega_sensible()
    }

    /// Whether some world has `phi` in its negative part.
    pub fn falsifies(&self, phi: &Formula) -> Result<bool> {
        let i = self.sigma.index_of(phi).ok_or_else(|| Error::NotInSigma(phi.clone()))?;
        Ok(self.labels.iter().any(|l| has(l.neg_bits(), i)))
    }

    /// The relation `R+`: `x R+ y` iff there are `x1 <= x <= x2` and
    /// `y1 <= y <= y2` with `x2 R y1` and `x1 R y2`.
    pub fn convex_closure(&self) -> LabelledSystem {
        let n = self.len();
        let succ = self.successors();
        let mut rel = BTreeSet::new();
        let mut lower = vec![false; n];
        let mut upper = vec![false; n];
        for x in 0..n {
            // lower: y above some y1 with x2 R y1, x <= x2
            // upper: y below some y2 with x1 R y2, x1 <= x
            let mut touched = Vec::new();
            for &a in &self.up[x] {
                for &b in &succ[a] {
                    for &y in &self.up[b] {
                        lower[y] = true;
                        touched.push(y);
                    }
                }
            }
            for &a in &self.down[x] {
                for &b in &succ[a] {
                    for &y in &self.down[b] {
                        upper[y] = true;
                        touched.push(y);
                    }
                }
            }
            for &y in &touched {
                if lower[y] && upper[y] {
                    rel.insert((x, y));
                }
            }
            for y in touched {
                lower[y] = false;
                upper[y] = false;
            }
        }
        self.with_rel(rel)
    }

    /// Bisimulation quotient of a labelled system whose relation is a total
    /// function. Worlds become pairs `(label, component labels)`, ordered
    /// within equal component label sets by the label order; the relation is
    /// the convex closure of the induced one.
    pub fn quotient(&self) -> Result<LabelledSystem> {
        let n = self.len();
        let succ = self.successors();
        if let Some(w) = (0..n).find(|&w| succ[w].len() != 1) {
            return Err(Error::NotFunctional(self.names[w].clone(), succ[w].len()));
        }
        let key = |w: usize| -> (Bits, BTreeSet<Bits>) {
            let comp = self.up[w].iter().chain(&self.down[w]).map(|&v| self.labels[v].pos_bits()).collect();
            (self.labels[w].pos_bits(), comp)
        };
        let keys: Vec<(Bits, BTreeSet<Bits>)> = (0..n).map(key).collect();
        let classes: BTreeMap<&(Bits, BTreeSet<Bits>), usize> = {
            let distinct: BTreeSet<&(Bits, BTreeSet<Bits>)> = keys.iter().collect();
            distinct.into_iter().enumerate().map(|(i, k)| (k, i)).collect()
        };
        let class_keys: Vec<&(Bits, BTreeSet<Bits>)> = classes.keys().copied().collect();
        let m = class_keys.len();
        let names: Vec<String> = (0..m).map(|i| format!("q{i}")).collect();
        let labels: Vec<TwoSidedType> = class_keys
            .iter()
            .map(|(pos, _)| TwoSidedType::saturated(self.sigma.clone(), *pos))
            .collect();
        let mut order = Vec::new();
        for a in 0..m {
            for b in 0..m {
                let (la, ca) = class_keys[a];
                let (lb, cb) = class_keys[b];
                // label order on saturated types: more positive is lower
                if ca == cb && la & lb == *lb {
                    order.push((a, b));
                }
            }
        }
        let rel: BTreeSet<(usize, usize)> =
            (0..n).map(|w| (classes[&keys[w]], classes[&keys[succ[w][0]]])).collect();
        let q = LabelledSystem::new(self.sigma.clone(), names, labels, order, rel)?;
        Ok(q.convex_closure())
    }

    pub fn to_file(&self) -> QuasimodelFile {
        let label_of = |t: &TwoSidedType| LabelFile {
            pos: t.pos().iter().map(|f| f.to_string()).collect(),
            neg: t.neg().iter().map(|f| f.to_string()).collect(),
        };
        let n = self.len();
        let mut order = Vec::new();
        for a in 0..n {
            for b in self.sorted(&self.up[a]) {
                if a != b {
                    // covering pairs only
                    let covered = self.up[a].iter().any(|&c| c != a && c != b && self.leq[c][b]);
                    if !covered {
                        order.push([self.names[a].clone(), self.names[b].clone()]);
                    }
                }
            }
        }
        QuasimodelFile {
            sigma: self.sigma.iter().map(|f| f.to_string()).collect(),
            worlds: self.names.clone(),
            order,
            labels: (0..n).map(|w| (self.names[w].clone(), label_of(&self.labels[w]))).collect(),
            rel: self.rel.iter().map(|&(a, b)| [self.names[a].clone(), self.names[b].clone()]).collect(),
        }
    }

    pub fn from_file(file: &QuasimodelFile) -> Result<LabelledSystem> {
        let parsed: Vec<Formula> = file.sigma.iter().map(|s| parse(s)).collect::<Result<_, _>>()?;
        let sigma = Arc::new(ClosureSet::from_formulas(parsed));
        let index: BTreeMap<&str, usize> =
            file.worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
        if index.len() != file.worlds.len() {
            return Err(Error::MalformedSystem("duplicate world names".into()));
        }
        let world = |name: &String| index.get(name.as_str()).copied().ok_or_else(|| Error::UnknownWorld(name.clone()));
        let mut labels = Vec::with_capacity(file.worlds.len());
        for w in &file.worlds {
            let l = file
                .labels
                .get(w)
                .ok_or_else(|| Error::MalformedSystem(format!("world `{w}` has no label")))?;
            let pos: Vec<Formula> = l.pos.iter().map(|s| parse(s)).collect::<Result<_, _>>()?;
            let neg: Vec<Formula> = l.neg.iter().map(|s| parse(s)).collect::<Result<_, _>>()?;
            labels.push(TwoSidedType::new(sigma.clone(), &pos, &neg)?);
        }
        if let Some(extra) = file.labels.keys().find(|k| !index.contains_key(k.as_str())) {
            return Err(Error::UnknownWorld(extra.clone()));
        }
        let order = file.order.iter().map(|[a, b]| Ok((world(a)?, world(b)?))).collect::<Result<Vec<_>>>()?;
        let rel = file.rel.iter().map(|[a, b]| Ok((world(a)?, world(b)?))).collect::<Result<Vec<_>>>()?;
        LabelledSystem::new(sigma, file.worlds.clone(), labels, order, rel)
    }

    pub fn from_json(text: &str) -> Result<LabelledSystem> {
        LabelledSystem::from_file(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("quasimodel files serialize")
    }
}

/// On-disk form of a labelled system.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasimodelFile {
    pub sigma: Vec<String>,
    pub worlds: Vec<String>,
    #[serde(default)]
    pub order: Vec<[String; 2]>,
    pub labels: BTreeMap<String, LabelFile>,
    #[serde(default)]
    pub rel: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabelFile {
    #[serde(default)]
    pub pos: Vec<String>,
    #[serde(default)]
    pub neg: Vec<String>,
}

/// First temporal formula (by index) whose one-step condition fails for the
/// pair `(a, b)`.
pub(crate) fn first_insensible(a: &TwoSidedType, b: &TwoSidedType) -> Option<usize> {
    let sigma = a.sigma();
    let (ap, an, bp, bn) = (a.pos_bits(), a.neg_bits(), b.pos_bits(), b.neg_bits());
    (0..sigma.len()).find(|&i| match sigma.node(i) {
        Node::Next(f) => (has(ap, i) && !has(bp, f)) || (has(an, i) && !has(bn, f)),
        Node::Ev(f) => {
            (has(ap, i) && !(has(ap, f) || has(bp, i))) || (has(an, i) && !(has(an, f) && has(bn, i)))
        }
        Node::Hence(f) => {
            (has(ap, i) && !(has(ap, f) && has(bp, i))) || (has(an, i) && !(has(an, f) || has(bn, i)))
        }
        _ => false,
    })
}

/// The six one-step temporal conditions on an ordered pair of types.
pub fn sensible_pair(a: &TwoSidedType, b: &TwoSidedType) -> Result<bool> {
    if !same_sigma(a.sigma(), b.sigma()) {
        return Err(Error::SigmaMismatch);
    }
    Ok(first_insensible(a, b).is_none())
}
