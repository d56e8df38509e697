//! Real-valued semantics with exact rational truth values.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::Flow;
use crate::formula::Formula;

pub type Value = BigRational;

pub fn zero() -> Value {
    BigRational::from_integer(BigInt::from(0))
}

pub fn one() -> Value {
    BigRational::from_integer(BigInt::from(1))
}

/// A flow with a valuation of atoms in `[0, 1]`. Atoms not mentioned read
/// as 0 everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealModel {
    flow: Flow,
    val: BTreeMap<String, Vec<Value>>,
}

impl RealModel {
    /// `val[atom][t]` is the value at moment index `t`.
    pub fn new(flow: Flow, val: BTreeMap<String, Vec<Value>>) -> Result<RealModel> {
        for (atom, row) in &val {
            if row.len() != flow.len() {
                return Err(Error::MalformedModel(format!(
                    "atom `{atom}` has {} values for {} moments",
                    row.len(),
                    flow.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| **v < zero() || **v > one()) {
                return Err(Error::MalformedModel(format!("value {v} of `{atom}` is outside [0, 1]")));
            }
        }
        Ok(RealModel { flow, val })
    }

    pub fn flow(&self) -> &Flow {
        &self.flow
    }

    pub fn value(&self, atom: &str, t: usize) -> Value {
        self.val.get(atom).map_or_else(zero, |row| row[t].clone())
    }

    /// Values of `f` at every moment.
    pub fn eval_all(&self, f: &Formula) -> Vec<Value> {
        let n = self.flow.len();
        let pointwise2 = |a: &Formula, b: &Formula, op: &dyn Fn(&Value, &Value) -> Value| -> Vec<Value> {
            let (x, y) = (self.eval_all(a), self.eval_all(b));
            x.iter().zip(&y).map(|(u, v)| op(u, v)).collect()
        };
        match f {
            Formula::Atom(p) => (0..n).map(|t| self.value(p, t)).collect(),
            Formula::Bot => vec![zero(); n],
            Formula::Top => vec![one(); n],
            Formula::And(a, b) => pointwise2(a, b, &|u, v| u.min(v).clone()),
            Formula::Or(a, b) => pointwise2(a, b, &|u, v| u.max(v).clone()),
            Formula::Imp(a, b) => pointwise2(a, b, &|u, v| if u <= v { one() } else { v.clone() }),
            Formula::Coimp(a, b) => pointwise2(a, b, &|u, v| if u > v { u.clone() } else { zero() }),
            Formula::Next(a) => {
                let x = self.eval_all(a);
                (0..n).map(|t| x[self.flow.succ(t)].clone()).collect()
            }
            Formula::Ev(a) => {
                let x = self.eval_all(a);
                (0..n)
                    .map(|t| self.flow.orbit(t).into_iter().map(|s| &x[s]).max().expect("orbit is nonempty").clone())
                    .collect()
            }
            Formula::Hence(a) => {
                let x = self.eval_all(a);
                (0..n)
                    .map(|t| self.flow.orbit(t).into_iter().map(|s| &x[s]).min().expect("orbit is nonempty").clone())
                    .collect()
            }
        }
    }

    pub fn eval(&self, f: &Formula, t: usize) -> Value {
        self.eval_all(f).swap_remove(t)
    }

    pub fn globally_true(&self, f: &Formula) -> bool {
        self.eval_all(f).iter().all(|v| *v == one())
    }

    pub fn from_file(file: &RealModelFile) -> Result<RealModel> {
        let flow = Flow::new(file.moments.clone(), &file.succ)?;
        let mut val = BTreeMap::new();
        for (atom, by_moment) in &file.val {
            let mut row = vec![zero(); flow.len()];
            for (t, text) in by_moment {
                let i = flow.index_of(t)?;
                row[i] = text
                    .trim()
                    .parse::<Value>()
                    .map_err(|_| Error::MalformedModel(format!("`{text}` is not a rational number")))?;
            }
            if by_moment.len() != flow.len() {
                let missing = flow.names().iter().find(|t| !by_moment.contains_key(*t)).expect("some moment missing");
                return Err(Error::MalformedModel(format!("atom `{atom}` has no value at moment `{missing}`")));
            }
            val.insert(atom.clone(), row);
        }
        RealModel::new(flow, val)
    }

    pub fn to_file(&self) -> RealModelFile {
        RealModelFile {
            moments: self.flow.names().to_vec(),
            succ: self.flow.succ_map(),
            val: self
                .val
                .iter()
                .map(|(a, row)| {
                    let by_t = row.iter().enumerate().map(|(t, v)| (self.flow.name(t).to_string(), v.to_string()));
                    (a.clone(), by_t.collect())
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<RealModel> {
        RealModel::from_file(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model files serialize")
    }
}

/// On-disk form of a real model; values are written `"num/den"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealModelFile {
    pub moments: Vec<String>,
    pub succ: BTreeMap<String, String>,
    #[serde(default)]
    pub val: BTreeMap<String, BTreeMap<String, String>>,
}

/// Value of `f` at the named moment.
pub fn eval_real(m: &RealModel, f: &Formula, t: &str) -> Result<Value> {
    let i = m.flow.index_of(t)?;
    Ok(m.eval(f, i))
}

pub fn globally_true_real(m: &RealModel, f: &Formula) -> bool {
    m.globally_true(f)
}
