//! Decision procedure by elimination over moments.
//!
//! A moment is one candidate linear component: a witness-closed chain of
//! saturated types. Moments are connected by transitions, which are the
//! serial, surjective, convex, fully confluent and sensible relations
//! between two chains. Moments without a successor, or with an unrealized
//! eventuality, are removed until nothing changes. A formula is falsifiable
//! iff a surviving world carries it negatively.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::formula::{ClosureSet, Formula, Node};
use crate::labelled::{first_insensible, LabelledSystem};
use crate::types::{check_sigma_size, has, same_sigma, saturated_pos_sets, Bits, TwoSidedType};

pub const DEFAULT_BUDGET: usize = 12;

/// A witness-closed, strictly increasing chain of saturated types. Index 0
/// is the lowest (most positive) element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moment {
    chain: Vec<TwoSidedType>,
}

impl Moment {
    /// Checks that the chain is nonempty, strictly increasing, saturated and
    /// witness-closed.
    pub fn new(chain: Vec<TwoSidedType>) -> Result<Moment> {
        let first = chain.first().ok_or_else(|| Error::MalformedSystem("empty moment".into()))?;
        let sigma = first.sigma().clone();
        if chain.iter().any(|t| !same_sigma(t.sigma(), &sigma)) {
            return Err(Error::SigmaMismatch);
        }
        if chain.iter().any(|t| !t.is_saturated() || t.check().is_err()) {
            return Err(Error::MalformedSystem("moment members must be saturated types".into()));
        }
        let bits: Vec<Bits> = chain.iter().map(|t| t.pos_bits()).collect();
        if bits.windows(2).any(|w| !is_strictly_below(w[0], w[1])) {
            return Err(Error::MalformedSystem("moment chain must be strictly increasing".into()));
        }
        if !Witnesses::new(&sigma).closed(&bits) {
            return Err(Error::MalformedSystem("moment chain is not witness-closed".into()));
        }
        Ok(Moment { chain })
    }

    pub fn chain(&self) -> &[TwoSidedType] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn sigma(&self) -> &Arc<ClosureSet> {
        self.chain[0].sigma()
    }

    #[cfg(test)]
    fn bits(&self) -> Vec<Bits> {
        self.chain.iter().map(|t| t.pos_bits()).collect()
    }
}

/// A transition between two moments, given by one index interval of the
/// target per source index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition<'a> {
    pub source: &'a Moment,
    pub target: &'a Moment,
    intervals: Vec<(usize, usize)>,
}

impl Transition<'_> {
    /// Inclusive target interval `[lo, hi]` for each source index.
    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    pub fn relation(&self) -> BTreeSet<(usize, usize)> {
        self.intervals.iter().enumerate().flat_map(|(i, &(lo, hi))| (lo..=hi).map(move |j| (i, j))).collect()
    }
}

/// `a < b` in the type order, for saturated types given by positive parts.
fn is_strictly_below(a: Bits, b: Bits) -> bool {
    a != b && a & b == b
}

/// Masks for the implication and co-implication witness conditions.
struct Witnesses {
    /// (index of φ⇒ψ, φ, ψ)
    imps: Vec<(usize, usize, usize)>,
    coimps: Vec<(usize, usize, usize)>,
}

impl Witnesses {
    fn new(sigma: &ClosureSet) -> Witnesses {
        let mut imps = Vec::new();
        let mut coimps = Vec::new();
        for i in 0..sigma.len() {
            match sigma.node(i) {
                Node::Imp(a, b) => imps.push((i, a, b)),
                Node::Coimp(a, b) => coimps.push((i, a, b)),
                _ => {}
            }
        }
        Witnesses { imps, coimps }
    }

    /// Implications this type witnesses (φ positive, ψ negative).
    fn imp_witnessed(&self, t: Bits) -> Bits {
        self.imps.iter().filter(|&&(_, a, b)| has(t, a) && !has(t, b)).fold(0, |m, &(i, _, _)| m | 1 << i)
    }

    /// Implications this type needs witnessed (negative).
    fn imp_needed(&self, t: Bits) -> Bits {
        self.imps.iter().filter(|&&(i, _, _)| !has(t, i)).fold(0, |m, &(i, _, _)| m | 1 << i)
    }

    fn coimp_witnessed(&self, t: Bits) -> Bits {
        self.coimps.iter().filter(|&&(_, a, b)| has(t, a) && !has(t, b)).fold(0, |m, &(i, _, _)| m | 1 << i)
    }

    /// Co-implications this type needs witnessed (positive).
    fn coimp_needed(&self, t: Bits) -> Bits {
        self.coimps.iter().filter(|&&(i, _, _)| has(t, i)).fold(0, |m, &(i, _, _)| m | 1 << i)
    }

    fn closed(&self, chain: &[Bits]) -> bool {
        let mut below = 0;
        for &t in chain {
            below |= self.imp_witnessed(t);
            if self.imp_needed(t) & !below != 0 {
                return false;
            }
        }
        let mut above = 0;
        for &t in chain.iter().rev() {
            above |= self.coimp_witnessed(t);
            if self.coimp_needed(t) & !above != 0 {
                return false;
            }
        }
        true
    }
}

/// All witness-closed chains over the saturated types of Σ, as chains of
/// indices into `types`. Chains are produced depth-first from the bottom,
/// types in enumeration order.
fn moment_chains(sigma: &ClosureSet, types: &[Bits]) -> Vec<Vec<u32>> {
    let w = Witnesses::new(sigma);
    let imp_wit: Vec<Bits> = types.iter().map(|&t| w.imp_witnessed(t)).collect();
    let imp_need: Vec<Bits> = types.iter().map(|&t| w.imp_needed(t)).collect();
    let co_wit: Vec<Bits> = types.iter().map(|&t| w.coimp_witnessed(t)).collect();
    let co_need: Vec<Bits> = types.iter().map(|&t| w.coimp_needed(t)).collect();
    // above[t]: types strictly above t
    let above: Vec<Vec<u32>> = types
        .iter()
        .map(|&a| (0..types.len() as u32).filter(|&b| is_strictly_below(a, types[b as usize])).collect())
        .collect();

    struct Ctx<'a> {
        above: &'a [Vec<u32>],
        imp_wit: &'a [Bits],
        imp_need: &'a [Bits],
        co_wit: &'a [Bits],
        co_need: &'a [Bits],
        out: Vec<Vec<u32>>,
    }
    fn co_closed(ctx: &Ctx, chain: &[u32]) -> bool {
        let mut above = 0;
        chain.iter().rev().all(|&t| {
            above |= ctx.co_wit[t as usize];
            ctx.co_need[t as usize] & !above == 0
        })
    }
    fn go(ctx: &mut Ctx, chain: &mut Vec<u32>, below: Bits) {
        if co_closed(ctx, chain) {
            ctx.out.push(chain.clone());
        }
        let top = *chain.last().expect("nonempty chain") as usize;
        for k in 0..ctx.above[top].len() {
            let t = ctx.above[top][k];
            let below = below | ctx.imp_wit[t as usize];
            if ctx.imp_need[t as usize] & !below != 0 {
                continue;
            }
            chain.push(t);
            go(ctx, chain, below);
            chain.pop();
        }
    }
    let mut ctx = Ctx { above: &above, imp_wit: &imp_wit, imp_need: &imp_need, co_wit: &co_wit, co_need: &co_need, out: Vec::new() };
    for t in 0..types.len() {
        let below = imp_wit[t];
        if imp_need[t] & !below != 0 {
            continue;
        }
        go(&mut ctx, &mut vec![t as u32], below);
    }
    ctx.out
}

/// All moments over Σ in a deterministic order.
pub fn enumerate_moments(sigma: &Arc<ClosureSet>) -> Result<Vec<Moment>> {
    check_sigma_size(sigma)?;
    let types = saturated_pos_sets(sigma);
    Ok(moment_chains(sigma, &types)
        .into_iter()
        .map(|c| Moment {
            chain: c.into_iter().map(|t| TwoSidedType::saturated(sigma.clone(), types[t as usize])).collect(),
        })
        .collect())
}

/// `max_hi[i][lo]`: the largest `hi` such that every pair `(i, j)` with
/// `lo <= j <= hi` is sensible, or `None`.
fn max_hi(k: usize, m: usize, sens: &impl Fn(usize, usize) -> bool) -> Vec<Vec<Option<usize>>> {
    (0..k)
        .map(|i| {
            let mut row = vec![None; m];
            let mut run_end = None;
            for lo in (0..m).rev() {
                if sens(i, lo) {
                    run_end = Some(run_end.unwrap_or(lo));
                } else {
                    run_end = None;
                }
                row[lo] = run_end;
            }
            row
        })
        .collect()
}

/// Enumerates the interval assignments of all transitions from a chain of
/// length `k` to one of length `m`.
fn interval_assignments(k: usize, m: usize, sens: impl Fn(usize, usize) -> bool) -> Vec<Vec<(usize, usize)>> {
    let max_hi = max_hi(k, m, &sens);
    let mut out = Vec::new();
    let mut cur: Vec<(usize, usize)> = Vec::with_capacity(k);
    fn go(
        i: usize,
        k: usize,
        m: usize,
        max_hi: &[Vec<Option<usize>>],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i == k {
            if cur.last().is_some_and(|&(_, hi)| hi == m - 1) {
                out.push(cur.clone());
            }
            return;
        }
        let (lo_range, hi_min) = match cur.last() {
            None => (0..=0, 0),
            Some(&(lo, hi)) => (lo..=(hi + 1).min(m - 1), hi),
        };
        for lo in lo_range {
            let Some(top) = max_hi[i][lo] else { continue };
            for hi in lo.max(hi_min)..=top {
                cur.push((lo, hi));
                go(i + 1, k, m, max_hi, cur, out);
                cur.pop();
            }
        }
    }
    go(0, k, m, &max_hi, &mut cur, &mut out);
    out
}

/// Every transition from `c` to `d`.
pub fn transitions<'a>(c: &'a Moment, d: &'a Moment) -> Result<Vec<Transition<'a>>> {
    if !same_sigma(c.sigma(), d.sigma()) {
        return Err(Error::SigmaMismatch);
    }
    let sens = |i: usize, j: usize| first_insensible(&c.chain[i], &d.chain[j]).is_none();
    Ok(interval_assignments(c.len(), d.len(), sens)
        .into_iter()
        .map(|intervals| Transition { source: c, target: d, intervals })
        .collect())
}

/// Union of all transitions from a chain of length `k` to one of length
/// `m`, closed under convex closure, as one bit row per source index; `None`
/// when there is no transition.
fn closed_union(k: usize, m: usize, sens: impl Fn(usize, usize) -> bool) -> Option<Vec<u128>> {
    let max_hi = max_hi(k, m, &sens);
    let interval = |lo: usize, hi: usize| -> u128 { (((1u128 << (hi - lo)) << 1) - 1) << lo };
    // forward[i][lo]: reachable hi values
    let mut forward = vec![vec![0u128; m]; k];
    if let Some(top) = max_hi[0][0] {
        forward[0][0] = interval(0, top);
    }
    for i in 1..k {
        // smallest hi among states with lo <= lo' and hi >= lo' - 1
        for lo in 0..m {
            let Some(top) = max_hi[i][lo] else { continue };
            let mut min_hi = None;
            for prev in forward[i - 1].iter().take(lo + 1) {
                let allowed = if lo == 0 { *prev } else { *prev & !((1u128 << (lo - 1)) - 1) };
                if allowed != 0 {
                    let h = allowed.trailing_zeros() as usize;
                    min_hi = Some(min_hi.map_or(h, |x: usize| x.min(h)));
                }
            }
            if let Some(h) = min_hi {
                let from = h.max(lo);
                if from <= top {
                    forward[i][lo] = interval(from, top);
                }
            }
        }
    }
    if !forward[k - 1].iter().any(|&row| row >> (m - 1) & 1 == 1) {
        return None;
    }
    // backward[i][lo]: hi values from which the end is reachable
    let mut backward = vec![vec![0u128; m]; k];
    for lo in 0..m {
        if max_hi[k - 1][lo] == Some(m - 1) {
            backward[k - 1][lo] = 1 << (m - 1);
        }
    }
    for i in (0..k - 1).rev() {
        let next_max: Vec<Option<usize>> =
            backward[i + 1].iter().map(|&r| (r != 0).then(|| 127 - r.leading_zeros() as usize)).collect();
        for lo in 0..m {
            let Some(top) = max_hi[i][lo] else { continue };
            let mut row = 0;
            for hi in lo..=top {
                let ok = (lo..=(hi + 1).min(m - 1)).any(|l2| next_max[l2].is_some_and(|h2| h2 >= hi));
                if ok {
                    row |= 1 << hi;
                }
            }
            backward[i][lo] = row;
        }
    }
    let mut union = vec![0u128; k];
    for i in 0..k {
        for lo in 0..m {
            let both = forward[i][lo] & backward[i][lo];
            if both != 0 {
                let hi = 127 - both.leading_zeros() as usize;
                union[i] |= interval(lo, hi);
            }
        }
    }
    // convex closure between two chains: [min over suffix, max over prefix]
    let mut closed = vec![0u128; k];
    let mut suffix_min = m;
    let mut mins = vec![m; k];
    for i in (0..k).rev() {
        if union[i] != 0 {
            suffix_min = suffix_min.min(union[i].trailing_zeros() as usize);
        }
        mins[i] = suffix_min;
    }
    let mut prefix_max = None;
    for i in 0..k {
        if union[i] != 0 {
            let h = 127 - union[i].leading_zeros() as usize;
            prefix_max = Some(prefix_max.map_or(h, |x: usize| x.max(h)));
        }
        if let Some(h) = prefix_max {
            if mins[i] <= h {
                closed[i] = interval(mins[i], h);
            }
        }
    }
    Some(closed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Valid,
    Falsifiable,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Valid => "valid",
            Status::Falsifiable => "falsifiable",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub sigma_size: usize,
    pub types: usize,
    pub moments: usize,
    /// Worlds `(moment, index)` in the search space.
    pub worlds_explored: usize,
    pub surviving_moments: usize,
    pub rounds: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<LabelledSystem>,
    pub stats: Stats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Largest closure set the search accepts.
    pub budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { budget: DEFAULT_BUDGET }
    }
}

/// `(n+1) * 2^(n(n+1)+1)`.
pub fn size_bound(n: usize) -> BigUint {
    BigUint::from(n + 1) << (n * (n + 1) + 1)
}

pub fn decide(phi: &Formula) -> Result<Verdict> {
    decide_with(phi, Options::default())
}

pub fn decide_with(phi: &Formula, options: Options) -> Result<Verdict> {
    let start = Instant::now();
    let sigma = Arc::new(ClosureSet::of(phi));
    if sigma.len() > options.budget {
        return Err(Error::Budget { size: sigma.len(), budget: options.budget });
    }
    check_sigma_size(&sigma)?;
    let target = sigma.index_of(phi).expect("formula is in its own closure");
    let space = Space::build(&sigma);
    let mut stats = Stats {
        sigma_size: sigma.len(),
        types: space.types.len(),
        moments: space.moments.len(),
        worlds_explored: space.offsets.last().copied().unwrap_or(0),
        ..Stats::default()
    };
    let (alive, rounds) = space.eliminate();
    stats.rounds = rounds;
    stats.surviving_moments = alive.iter().filter(|&&a| a).count();
    let falsifying = (0..space.moments.len())
        .find(|&c| alive[c] && space.moments[c].iter().any(|&t| !has(space.types[t as usize], target)));
    let witness = match falsifying {
        None => None,
        Some(c) => {
            let w = space.witness(&sigma, &alive, c)?;
            w.validate_quasimodel().map_err(|v| Error::WitnessRejected(v.to_string()))?;
            if !w.falsifies(phi)? {
                return Err(Error::WitnessRejected("witness does not falsify the formula".into()));
            }
            Some(w)
        }
    };
    stats.elapsed = start.elapsed();
    Ok(Verdict {
        status: if witness.is_some() { Status::Falsifiable } else { Status::Valid },
        witness,
        stats,
    })
}

/// The full search space: types, moments, and for every moment the closed
/// union of transitions to every other moment.
struct Space {
    types: Vec<Bits>,
    moments: Vec<Vec<u32>>,
    /// First world index of each moment; one extra entry holds the total.
    offsets: Vec<usize>,
    /// `edges[c]`: `(d, rows)` for each moment `d` reachable by a transition.
    edges: Vec<Vec<(usize, Vec<u128>)>>,
    /// (index of ◇φ or □φ, index of φ, is ◇)
    temporal: Vec<(usize, usize, bool)>,
}

impl Space {
    fn build(sigma: &ClosureSet) -> Space {
        let types = saturated_pos_sets(sigma);
        let moments = moment_chains(sigma, &types);
        let n = types.len();
        let shared = Arc::new(sigma.clone());
        let ts: Vec<TwoSidedType> = types.iter().map(|&t| TwoSidedType::saturated(shared.clone(), t)).collect();
        let sens: Vec<Vec<bool>> =
            (0..n).map(|a| (0..n).map(|b| first_insensible(&ts[a], &ts[b]).is_none()).collect()).collect();
        let mut offsets = Vec::with_capacity(moments.len() + 1);
        let mut total = 0;
        for m in &moments {
            offsets.push(total);
            total += m.len();
        }
        offsets.push(total);
        let edges = moments
            .iter()
            .map(|c| {
                let (c0, cl) = (c[0] as usize, *c.last().expect("nonempty") as usize);
                moments
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| sens[c0][d[0] as usize] && sens[cl][*d.last().expect("nonempty") as usize])
                    .filter_map(|(j, d)| {
                        closed_union(c.len(), d.len(), |a, b| sens[c[a] as usize][d[b] as usize]).map(|rows| (j, rows))
                    })
                    .collect()
            })
            .collect();
        let temporal = (0..sigma.len())
            .filter_map(|i| match sigma.node(i) {
                Node::Ev(a) => Some((i, a, true)),
                Node::Hence(a) => Some((i, a, false)),
                _ => None,
            })
            .collect();
        Space { types, moments, offsets, edges, temporal }
    }

    /// Runs elimination to a fixpoint; returns the surviving moments and the
    /// number of rounds.
    fn eliminate(&self) -> (Vec<bool>, usize) {
        let mut alive = vec![true; self.moments.len()];
        let mut rounds = 0;
        loop {
            rounds += 1;
            let mut changed = false;
            // successor pass, repeated until stable
            loop {
                let mut inner = false;
                for c in 0..self.moments.len() {
                    if alive[c] && !self.edges[c].iter().any(|&(d, _)| alive[d]) {
                        alive[c] = false;
                        inner = true;
                    }
                }
                if !inner {
                    break;
                }
                changed = true;
            }
            // eventuality pass on the world graph
            let dead = self.unrealized(&alive);
            for c in dead {
                alive[c] = false;
                changed = true;
            }
            if !changed {
                return (alive, rounds);
            }
        }
    }

    /// Predecessor lists of the world graph restricted to `alive`.
    fn predecessors(&self, alive: &[bool]) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); *self.offsets.last().expect("offsets")];
        for (c, out) in self.edges.iter().enumerate() {
            if !alive[c] {
                continue;
            }
            for (d, rows) in out {
                if !alive[*d] {
                    continue;
                }
                for (i, &row) in rows.iter().enumerate() {
                    let mut r = row;
                    while r != 0 {
                        let j = r.trailing_zeros() as usize;
                        r &= r - 1;
                        pred[self.offsets[*d] + j].push(self.offsets[c] + i);
                    }
                }
            }
        }
        pred
    }

    /// Alive moments containing a world whose eventuality (◇ positive) or
    /// henceforth refutation (□ negative) is not realized.
    fn unrealized(&self, alive: &[bool]) -> Vec<usize> {
        if self.temporal.is_empty() {
            return Vec::new();
        }
        let pred = self.predecessors(alive);
        let world_type: Vec<Bits> =
            self.moments.iter().flat_map(|m| m.iter().map(|&t| self.types[t as usize])).collect();
        let mut bad = vec![false; self.moments.len()];
        for &(i, a, is_ev) in &self.temporal {
            let goal = |t: Bits| if is_ev { has(t, a) } else { !has(t, a) };
            let claim = |t: Bits| if is_ev { has(t, i) } else { !has(t, i) };
            let mut reach = vec![false; world_type.len()];
            let mut queue = VecDeque::new();
            for c in (0..self.moments.len()).filter(|&c| alive[c]) {
                for w in self.offsets[c]..self.offsets[c + 1] {
                    if goal(world_type[w]) {
                        reach[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            while let Some(w) = queue.pop_front() {
                for &v in &pred[w] {
                    if !reach[v] {
                        reach[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            for c in (0..self.moments.len()).filter(|&c| alive[c]) {
                if (self.offsets[c]..self.offsets[c + 1]).any(|w| claim(world_type[w]) && !reach[w]) {
                    bad[c] = true;
                }
            }
        }
        (0..self.moments.len()).filter(|&c| bad[c]).collect()
    }

    /// Surviving moments reachable from `start`, with all closed transition
    /// edges between them.
    fn witness(&self, sigma: &Arc<ClosureSet>, alive: &[bool], start: usize) -> Result<LabelledSystem> {
        let mut seen = vec![false; self.moments.len()];
        let mut order = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < order.len() {
            let c = order[k];
            k += 1;
            for &(d, _) in &self.edges[c] {
                if alive[d] && !seen[d] {
                    seen[d] = true;
                    order.push(d);
                }
            }
        }
        let mut base = vec![usize::MAX; self.moments.len()];
        let mut names = Vec::new();
        let mut labels = Vec::new();
        let mut le = Vec::new();
        for &c in &order {
            base[c] = names.len();
            for (i, &t) in self.moments[c].iter().enumerate() {
                if i > 0 {
                    le.push((names.len() - 1, names.len()));
                }
                names.push(format!("m{c}.{i}"));
                labels.push(TwoSidedType::saturated(sigma.clone(), self.types[t as usize]));
            }
        }
        let mut rel = BTreeSet::new();
        for &c in &order {
            for (d, rows) in &self.edges[c] {
                if !seen[*d] {
                    continue;
                }
                for (i, &row) in rows.iter().enumerate() {
                    for j in 0..self.moments[*d].len() {
                        if row >> j & 1 == 1 {
                            rel.insert((base[c] + i, base[*d] + j));
                        }
                    }
                }
            }
        }
        LabelledSystem::new(sigma.clone(), names, labels, le, rel)
    }
}
