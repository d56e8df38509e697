use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// A finite set of named moments with a total successor function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    names: Vec<String>,
    succ: Vec<usize>,
    index: HashMap<String, usize>,
}

impl Flow {
    pub fn new(names: Vec<String>, succ: &BTreeMap<String, String>) -> Result<Flow> {
        if names.is_empty() {
            return Err(Error::MalformedModel("a flow needs at least one moment".into()));
        }
        let index: HashMap<String, usize> = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        if index.len() != names.len() {
            return Err(Error::MalformedModel("duplicate moment names".into()));
        }
        if let Some(k) = succ.keys().find(|k| !index.contains_key(*k)) {
            return Err(Error::UnknownMoment(k.clone()));
        }
        let succ = names
            .iter()
            .map(|n| {
                let s = succ
                    .get(n)
                    .ok_or_else(|| Error::MalformedModel(format!("moment `{n}` has no successor")))?;
                index.get(s).copied().ok_or_else(|| Error::UnknownMoment(s.clone()))
            })
            .collect::<Result<Vec<usize>>>()?;
        Ok(Flow { names, succ, index })
    }

    /// A flow from successor indices; moments are named `t0`, `t1`, ...
    pub fn from_indices(succ: Vec<usize>) -> Result<Flow> {
        let n = succ.len();
        if n == 0 {
            return Err(Error::MalformedModel("a flow needs at least one moment".into()));
        }
        if let Some(&s) = succ.iter().find(|&&s| s >= n) {
            return Err(Error::UnknownMoment(format!("t{s}")));
        }
        let names: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
        let index = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        Ok(Flow { names, succ, index })
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

    pub fn name(&self, t: usize) -> &str {
        &self.names[t]
    }

    pub fn succ(&self, t: usize) -> usize {
        self.succ[t]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownMoment(name.to_string()))
    }

    /// The distinct moments `t, S(t), S²(t), ...`, in order of first visit.
    pub fn orbit(&self, t: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        let mut cur = t;
        while !seen[cur] {
            seen[cur] = true;
            out.push(cur);
            cur = self.succ[cur];
        }
        out
    }

    pub fn succ_map(&self) -> BTreeMap<String, String> {
        (0..self.len()).map(|t| (self.names[t].clone(), self.names[self.succ[t]].clone())).collect()
    }
}
