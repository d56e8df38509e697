//! Bi-relational semantics over a linear order of worlds and a flow of
//! moments.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::Flow;
use crate::formula::{ClosureSet, Formula};
use crate::labelled::LabelledSystem;
use crate::types::{bit, check_sigma_size, TwoSidedType};

/// Worlds are listed in increasing order. `val[atom][t][w]` is membership of
/// `(w, t)` in the atom's extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiRelModel {
    worlds: Vec<String>,
    flow: Flow,
    val: BTreeMap<String, Vec<Vec<bool>>>,
}

/// `ext[t][w]`.
pub type Extension = Vec<Vec<bool>>;

type Pointwise<'a> = dyn Fn(&[bool], &[bool], usize) -> bool + 'a;

impl BiRelModel {
    /// `val` maps each atom to the `(world, moment)` index pairs where it
    /// holds; each must be downward closed in the world coordinate.
    pub fn new(worlds: Vec<String>, flow: Flow, val: BTreeMap<String, BTreeSet<(usize, usize)>>) -> Result<BiRelModel> {
        if worlds.is_empty() {
            return Err(Error::MalformedModel("a model needs at least one world".into()));
        }
        if worlds.iter().collect::<BTreeSet<_>>().len() != worlds.len() {
            return Err(Error::MalformedModel("world order is not a total order: duplicate world names".into()));
        }
        let (nw, nt) = (worlds.len(), flow.len());
        let mut table = BTreeMap::new();
        for (atom, pairs) in val {
            let mut ext = vec![vec![false; nw]; nt];
            for (w, t) in pairs {
                if w >= nw || t >= nt {
                    return Err(Error::MalformedModel(format!("valuation of `{atom}` is out of range")));
                }
                ext[t][w] = true;
            }
            for (t, row) in ext.iter().enumerate() {
                if let Some(w) = (1..nw).find(|&w| row[w] && !row[w - 1]) {
                    return Err(Error::MalformedModel(format!(
                        "valuation of `{atom}` is not downward closed: holds at ({}, {}) but not at ({}, {})",
                        worlds[w],
                        flow.name(t),
                        worlds[w - 1],
                        flow.name(t)
                    )));
                }
            }
            table.insert(atom, ext);
        }
        Ok(BiRelModel { worlds, flow, val: table })
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn flow(&self) -> &Flow {
        &self.flow
    }

    pub fn extension_table(&self, f: &Formula) -> Extension {
        let (nw, nt) = (self.worlds.len(), self.flow.len());
        let combine = |a: &Formula, b: &Formula, op: &Pointwise<'_>| -> Extension {
            let (x, y) = (self.extension_table(a), self.extension_table(b));
            (0..nt).map(|t| (0..nw).map(|w| op(&x[t], &y[t], w)).collect()).collect()
        };
        match f {
            Formula::Atom(p) => self.val.get(p).cloned().unwrap_or_else(|| vec![vec![false; nw]; nt]),
            Formula::Bot => vec![vec![false; nw]; nt],
            Formula::Top => vec![vec![true; nw]; nt],
            Formula::And(a, b) => combine(a, b, &|x, y, w| x[w] && y[w]),
            Formula::Or(a, b) => combine(a, b, &|x, y, w| x[w] || y[w]),
            // all v <= w with φ also have ψ
            Formula::Imp(a, b) => combine(a, b, &|x, y, w| (0..=w).all(|v| !x[v] || y[v])),
            // some v >= w has φ and not ψ
            Formula::Coimp(a, b) => combine(a, b, &|x, y, w| (w..nw).any(|v| x[v] && !y[v])),
            Formula::Next(a) => {
                let x = self.extension_table(a);
                (0..nt).map(|t| x[self.flow.succ(t)].clone()).collect()
            }
            Formula::Ev(a) => {
                let x = self.extension_table(a);
                (0..nt)
                    .map(|t| (0..nw).map(|w| self.flow.orbit(t).into_iter().any(|s| x[s][w])).collect())
                    .collect()
            }
            Formula::Hence(a) => {
                let x = self.extension_table(a);
                (0..nt)
                    .map(|t| (0..nw).map(|w| self.flow.orbit(t).into_iter().all(|s| x[s][w])).collect())
                    .collect()
            }
        }
    }

    /// The extension of `f` as `(world, moment)` index pairs.
    pub fn extension(&self, f: &Formula) -> BTreeSet<(usize, usize)> {
        let ext = self.extension_table(f);
        let mut out = BTreeSet::new();
        for (t, row) in ext.iter().enumerate() {
            out.extend(row.iter().enumerate().filter(|(_, &b)| b).map(|(w, _)| (w, t)));
        }
        out
    }

    pub fn globally_true(&self, f: &Formula) -> bool {
        self.extension_table(f).iter().all(|row| row.iter().all(|&b| b))
    }

    /// Labelled system on `W × T`: `(v, t) <= (w, t)` iff `v <= w`, labels
    /// collect the formulas of Σ true at each point, and each point steps to
    /// the same world at the successor moment.
    pub fn to_quasimodel(&self, sigma: &Arc<ClosureSet>) -> Result<LabelledSystem> {
        check_sigma_size(sigma)?;
        let (nw, nt) = (self.worlds.len(), self.flow.len());
        let point = |w: usize, t: usize| t * nw + w;
        let mut pos = vec![0u64; nw * nt];
        for (i, f) in sigma.iter().enumerate() {
            let ext = self.extension_table(f);
            for t in 0..nt {
                for w in 0..nw {
                    if ext[t][w] {
                        pos[point(w, t)] |= bit(i);
                    }
                }
            }
        }
        let mut names = Vec::with_capacity(nw * nt);
        for t in 0..nt {
            for w in 0..nw {
                names.push(format!("{}@{}", self.worlds[w], self.flow.name(t)));
            }
        }
        let labels = pos.into_iter().map(|p| TwoSidedType::saturated(sigma.clone(), p)).collect();
        let order = (0..nt).flat_map(|t| (1..nw).map(move |w| (point(w - 1, t), point(w, t))));
        let rel = (0..nt).flat_map(|t| (0..nw).map(move |w| (point(w, t), point(w, self.flow.succ(t)))));
        LabelledSystem::new(sigma.clone(), names, labels, order, rel)
    }

    pub fn from_file(file: &BiRelModelFile) -> Result<BiRelModel> {
        let flow = Flow::new(file.moments.clone(), &file.succ)?;
        let world_ix: BTreeMap<&str, usize> = file.worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
        let mut val = BTreeMap::new();
        for (atom, pairs) in &file.val {
            let mut set = BTreeSet::new();
            for [w, t] in pairs {
                let wi = world_ix.get(w.as_str()).copied().ok_or_else(|| Error::UnknownWorld(w.clone()))?;
                set.insert((wi, flow.index_of(t)?));
            }
            val.insert(atom.clone(), set);
        }
        BiRelModel::new(file.worlds.clone(), flow, val)
    }

    pub fn to_file(&self) -> BiRelModelFile {
        BiRelModelFile {
            worlds: self.worlds.clone(),
            moments: self.flow.names().to_vec(),
            succ: self.flow.succ_map(),
            val: self
                .val
                .iter()
                .map(|(a, ext)| {
                    let mut pairs = Vec::new();
                    for (t, row) in ext.iter().enumerate() {
                        for (w, &b) in row.iter().enumerate() {
                            if b {
                                pairs.push([self.worlds[w].clone(), self.flow.name(t).to_string()]);
                            }
                        }
                    }
                    (a.clone(), pairs)
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<BiRelModel> {
        BiRelModel::from_file(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model files serialize")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiRelModelFile {
    pub worlds: Vec<String>,
    pub moments: Vec<String>,
    pub succ: BTreeMap<String, String>,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<[String; 2]>>,
}

pub fn extension(m: &BiRelModel, f: &Formula) -> BTreeSet<(usize, usize)> {
    m.extension(f)
}

pub fn globally_true_birel(m: &BiRelModel, f: &Formula) -> bool {
    m.globally_true(f)
}

pub fn model_to_quasimodel(m: &BiRelModel, sigma: &Arc<ClosureSet>) -> Result<LabelledSystem> {
    m.to_quasimodel(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn notnot() -> BiRelModel {
        BiRelModel::from_json(
            r#"{"worlds":["0","1"],"moments":["t"],"succ":{"t":"t"},"val":{"p":[["0","t"]]}}"#,
        )
        .unwrap()
    }

    fn ext(m: &BiRelModel, s: &str) -> BTreeSet<(usize, usize)> {
        extension(m, &parse(s).unwrap())
    }

    #[test]
    fn double_negation_example() {
        let m = notnot();
        assert!(ext(&m, "!p").is_empty());
        assert_eq!(ext(&m, "!!p"), [(0, 0), (1, 0)].into_iter().collect());
        assert!(!ext(&m, "!!p => p").contains(&(1, 0)));
        assert!(ext(&m, "bot").is_empty());
        assert!(!globally_true_birel(&m, &parse("!!p => p").unwrap()));
        assert!(globally_true_birel(&m, &parse("top").unwrap()));
        assert!(globally_true_birel(&m, &parse("G p => p").unwrap()));
    }

    #[test]
    fn rejects_upward_valuation() {
        let err = BiRelModel::from_json(
            r#"{"worlds":["0","1"],"moments":["t"],"succ":{"t":"t"},"val":{"p":[["1","t"]]}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("downward closed"), "{err}");
    }

    #[test]
    fn coimplication_looks_upward() {
        let m = notnot();
        // p holds at 0 only; p <= q needs a world at or above with p and not q
        assert_eq!(ext(&m, "p <= q"), [(0, 0)].into_iter().collect());
        assert_eq!(ext(&m, "top <= p"), [(0, 0), (1, 0)].into_iter().collect());
    }

    #[test]
    fn single_point_quasimodel() {
        let m = BiRelModel::from_json(r#"{"worlds":["w"],"moments":["t"],"succ":{"t":"t"},"val":{"p":[["w","t"]]}}"#)
            .unwrap();
        let sigma = Arc::new(ClosureSet::of(&parse("p").unwrap()));
        let q = model_to_quasimodel(&m, &sigma).unwrap();
        assert_eq!(q.len(), 1);
        assert!(q.label(0).is_pos(&parse("p").unwrap()));
        assert!(q.related(0, 0));
        assert!(q.validate_quasimodel().is_ok());
    }

    #[test]
    fn notnot_quasimodel_falsifies() {
        let phi = parse("!!p => p").unwrap();
        let sigma = Arc::new(ClosureSet::of(&phi));
        let q = model_to_quasimodel(&notnot(), &sigma).unwrap();
        assert!(q.label(1).is_neg(&phi));
        assert!(q.validate_quasimodel().is_ok());
    }

    #[test]
    fn json_round_trip() {
        let m = notnot();
        assert_eq!(BiRelModel::from_json(&m.to_json()).unwrap(), m);
    }
}
