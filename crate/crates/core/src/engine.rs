//! Tensor-network evaluation of a long diagram against an R-matrix bundle.
//!
//! Each crossing becomes a rank-4 tensor, each arc an index. The curl factor
//! `C^rot` of an arc is folded into the first tensor listing it. The entrance and
//! exit legs are fixed to the first basis vector, so a full contraction leaves
//! one scalar: the invariant (the full `dim x dim` output is a scalar multiple
//! of the identity).

use crate::diagram::{DiagramError, LongDiagram, PDCode};
use crate::poly::{Int, LaurentPoly, PolyError};
use crate::rmatrix::RMatrixBundle;
use rustc_hash::FxHashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("intermediate tensor with {0} legs exceeds the key width")]
    TooManyLegs(usize),
    #[error("contraction left {0} tensors")]
    Disconnected(usize),
}

const BITS: usize = 4;
const MAX_LEGS: usize = 128 / BITS;
/// Largest output (in entries) that may use a dense accumulator.
const DENSE_LIMIT: u128 = 1 << 22;

/// Sparse tensor; the value on leg `i` sits in bits `4i..4i+4` of the key.
#[derive(Clone, Debug, Default)]
pub struct Tensor {
    /// Index range of every leg.
    pub dim: usize,
    pub legs: Vec<usize>,
    pub entries: FxHashMap<u128, LaurentPoly>,
}

#[inline]
fn digit(key: u128, pos: usize) -> u128 {
    (key >> (BITS * pos)) & 0xf
}

impl Tensor {
    pub fn scalar(v: LaurentPoly) -> Tensor {
        let mut entries = FxHashMap::default();
        if !v.is_zero() {
            entries.insert(0, v);
        }
        Tensor { dim: 1, legs: Vec::new(), entries }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Number of index tuples, `dim^legs`.
    pub fn size(&self) -> u128 {
        (self.dim as u128).saturating_pow(self.legs.len() as u32)
    }

    /// Fraction of index tuples with a nonzero entry.
    pub fn fill(&self) -> f64 {
        self.nnz() as f64 / self.size() as f64
    }

    pub fn value_at(&self, idx: &[usize]) -> LaurentPoly {
        let key = idx.iter().enumerate().fold(0u128, |k, (i, &v)| k | ((v as u128) << (BITS * i)));
        self.entries.get(&key).cloned().unwrap_or_default()
    }

    /// Sums over equal values of every arc that occurs twice.
    fn trace_repeats(&mut self) {
        loop {
            let mut pair = None;
            'find: for i in 0..self.legs.len() {
                for j in i + 1..self.legs.len() {
                    if self.legs[i] == self.legs[j] {
                        pair = Some((i, j));
                        break 'find;
                    }
                }
            }
            let Some((i, j)) = pair else { return };
            let keep: Vec<usize> = (0..self.legs.len()).filter(|&p| p != i && p != j).collect();
            let mut out: FxHashMap<u128, LaurentPoly> = FxHashMap::default();
            for (k, v) in self.entries.drain() {
                if digit(k, i) != digit(k, j) {
                    continue;
                }
                let nk = keep.iter().enumerate().fold(0u128, |a, (n, &p)| a | (digit(k, p) << (BITS * n)));
                out.entry(nk).or_default().add_assign_ref(&v);
            }
            out.retain(|_, v| !v.is_zero());
            self.legs = keep.iter().map(|&p| self.legs[p]).collect();
            self.entries = out;
        }
    }
}

/// Scalar multiplication counts of one contraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepCount {
    pub mults: u64,
    pub log_cost: usize,
    /// The step used the dense accumulator.
    pub dense: bool,
}

/// Contracts the shared legs of `a` and `b`; free legs of `a` come first.
pub fn contract_pair(a: &Tensor, b: &Tensor) -> Result<(Tensor, StepCount), EngineError> {
    contract_with(a, b, true)
}

fn contract_with(a: &Tensor, b: &Tensor, allow_dense: bool) -> Result<(Tensor, StepCount), EngineError> {
    let shared: Vec<usize> = a.legs.iter().copied().filter(|x| b.legs.contains(x)).collect();
    let pos_a: Vec<usize> = shared.iter().map(|x| a.legs.iter().position(|y| y == x).unwrap()).collect();
    let pos_b: Vec<usize> = shared.iter().map(|x| b.legs.iter().position(|y| y == x).unwrap()).collect();
    let free_a: Vec<usize> = (0..a.legs.len()).filter(|p| !pos_a.contains(p)).collect();
    let free_b: Vec<usize> = (0..b.legs.len()).filter(|p| !pos_b.contains(p)).collect();
    let n_out = free_a.len() + free_b.len();
    if n_out > MAX_LEGS {
        return Err(EngineError::TooManyLegs(n_out));
    }
    let pack = |k: u128, pos: &[usize], shift: usize| {
        pos.iter().enumerate().fold(0u128, |acc, (n, &p)| acc | (digit(k, p) << (BITS * (n + shift))))
    };
    let mut groups: FxHashMap<u128, Vec<(u128, &LaurentPoly)>> = FxHashMap::default();
    for (k, v) in &b.entries {
        groups.entry(pack(*k, &pos_b, 0)).or_default().push((pack(*k, &free_b, free_a.len()), v));
    }
    let dim = a.dim.max(b.dim);
    let products: u128 = a
        .entries
        .keys()
        .filter_map(|k| groups.get(&pack(*k, &pos_a, 0)))
        .map(|g| g.len() as u128)
        .sum();
    let size = (dim as u128).saturating_pow(n_out as u32);
    let mut out: FxHashMap<u128, LaurentPoly> = FxHashMap::default();
    let mut mults = 0u64;
    let dense = allow_dense && size <= DENSE_LIMIT && 2 * products >= size;
    if dense {
        // The output may be more than half full: accumulate in a flat array.
        let offset = |key: u128, n: usize, shift: usize| {
            (0..n).fold(0usize, |acc, i| acc + digit(key, i + shift) as usize * dim.pow((i + shift) as u32))
        };
        let mut acc = vec![LaurentPoly::zero(); size as usize];
        let groups: FxHashMap<u128, Vec<(u128, usize, &LaurentPoly)>> = groups
            .into_iter()
            .map(|(g, v)| (g, v.into_iter().map(|(fb, x)| (fb, offset(fb, free_b.len(), free_a.len()), x)).collect()))
            .collect();
        for (k, va) in &a.entries {
            let Some(group) = groups.get(&pack(*k, &pos_a, 0)) else { continue };
            let oa = offset(pack(*k, &free_a, 0), free_a.len(), 0);
            for &(_, ob, vb) in group {
                mults += 1;
                acc[oa + ob].add_assign_ref(&(va * vb));
            }
        }
        for (i, v) in acc.into_iter().enumerate() {
            if !v.is_zero() {
                let mut key = 0u128;
                let mut rest = i;
                for n in 0..n_out {
                    key |= ((rest % dim) as u128) << (BITS * n);
                    rest /= dim;
                }
                out.insert(key, v);
            }
        }
    } else {
        for (k, va) in &a.entries {
            let Some(group) = groups.get(&pack(*k, &pos_a, 0)) else { continue };
            let fa = pack(*k, &free_a, 0);
            for &(fb, vb) in group {
                mults += 1;
                let prod = va * vb;
                match out.get_mut(&(fa | fb)) {
                    Some(acc) => acc.add_assign_ref(&prod),
                    None => {
                        out.insert(fa | fb, prod);
                    }
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    let legs = free_a.iter().map(|&p| a.legs[p]).chain(free_b.iter().map(|&p| b.legs[p])).collect();
    let log_cost = a.legs.len() + b.legs.len() - shared.len();
    Ok((Tensor { dim, legs, entries: out }, StepCount { mults, log_cost, dense }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStep {
    /// Node positions at the time of the step; the result replaces `a`, `b` is removed.
    pub a: usize,
    pub b: usize,
    pub arcs: Vec<usize>,
    pub log_cost: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
}

impl Plan {
    /// Largest per-step log cost; this is the score of a long diagram.
    pub fn max_log_cost(&self) -> usize {
        self.steps.iter().map(|s| s.log_cost).max().unwrap_or(0)
    }

    pub fn explain(&self, labels: &[u32]) -> String {
        let mut s = String::new();
        for (i, st) in self.steps.iter().enumerate() {
            let arcs: Vec<String> = st.arcs.iter().map(|&a| labels[a].to_string()).collect();
            writeln!(s, "step {:>3}: nodes {} + {} over arcs [{}]  log_cost {}", i + 1, st.a, st.b, arcs.join(","), st.log_cost)
                .unwrap();
        }
        writeln!(s, "max log_cost {}", self.max_log_cost()).unwrap();
        s
    }
}

fn apply_step(sets: &mut Vec<Vec<usize>>, a: usize, b: usize) -> (Vec<usize>, usize) {
    let shared: Vec<usize> = sets[a].iter().copied().filter(|x| sets[b].contains(x)).collect();
    let cost = sets[a].len() + sets[b].len() - shared.len();
    let merged: Vec<usize> = sets[a]
        .iter()
        .chain(sets[b].iter())
        .copied()
        .filter(|x| !shared.contains(x))
        .collect();
    sets[a] = merged;
    sets.remove(b);
    (shared, cost)
}

/// Greedy order: always the pair with the smallest log cost among pairs that
/// share an arc, ties to the lexicographically smallest pair.
pub fn plan_greedy(leg_sets: &[Vec<usize>]) -> Plan {
    let mut sets = leg_sets.to_vec();
    let mut steps = Vec::new();
    while sets.len() > 1 {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let sh = sets[i].iter().filter(|x| sets[j].contains(x)).count();
                if sh == 0 {
                    continue;
                }
                let cost = sets[i].len() + sets[j].len() - sh;
                if best.is_none_or(|(_, _, c)| cost < c) {
                    best = Some((i, j, cost));
                }
            }
        }
        let (a, b) = best.map_or((0, 1), |(i, j, _)| (i, j));
        let (arcs, log_cost) = apply_step(&mut sets, a, b);
        steps.push(PlanStep { a, b, arcs, log_cost });
    }
    Plan { steps }
}

/// Left-to-right order: the running product absorbs the next node each step.
pub fn plan_sequential(leg_sets: &[Vec<usize>]) -> Plan {
    let mut sets = leg_sets.to_vec();
    let mut steps = Vec::new();
    while sets.len() > 1 {
        let (arcs, log_cost) = apply_step(&mut sets, 0, 1);
        steps.push(PlanStep { a: 0, b: 1, arcs, log_cost });
    }
    Plan { steps }
}

/// Leg lists of the network nodes after boundary removal and self-loop tracing.
pub fn leg_sets(ld: &LongDiagram, open: bool) -> Vec<Vec<usize>> {
    ld.crossings
        .iter()
        .map(|c| {
            let mut legs: Vec<usize> = c
                .legs
                .iter()
                .copied()
                .filter(|&a| open || (a != ld.entrance && a != ld.exit))
                .collect();
            let dup: Vec<usize> = legs.iter().copied().filter(|a| legs.iter().filter(|b| *b == a).count() > 1).collect();
            legs.retain(|a| !dup.contains(a));
            legs
        })
        .collect()
}

/// Crossing tensors with curls absorbed. With `open` the boundary legs stay free.
pub fn build_network(ld: &LongDiagram, bundle: &RMatrixBundle, open: bool) -> Vec<Tensor> {
    let curl_pow: Vec<Vec<(Int, i32, i32)>> = ld
        .rot
        .iter()
        .map(|&r| {
            bundle
                .curl
                .iter()
                .map(|c| {
                    let (s, a, b) = c.as_unit_monomial().expect("curl entries are unit monomials");
                    let s = if r.rem_euclid(2) == 1 { s } else { 1 };
                    (Int::from(s), a * r, b * r)
                })
                .collect()
        })
        .collect();
    let mut absorbed = vec![false; ld.n_arcs()];
    let mut nodes = Vec::with_capacity(ld.crossings.len());
    for c in &ld.crossings {
        let r = if c.sign > 0 { &bundle.r_pos } else { &bundle.r_neg };
        let mut curl_here = [false; 4];
        for (i, &a) in c.legs.iter().enumerate() {
            if !absorbed[a] && ld.rot[a] != 0 {
                curl_here[i] = true;
            }
            absorbed[a] = true;
        }
        let boundary = |a: usize| !open && (a == ld.entrance || a == ld.exit);
        let kept: Vec<usize> = (0..4).filter(|&i| !boundary(c.legs[i])).collect();
        let mut entries = FxHashMap::default();
        'entry: for (k, v) in &r.entries {
            if c.legs.iter().zip(k).any(|(&a, &ki)| boundary(a) && ki != 0) {
                continue 'entry;
            }
            let mut val = v.clone();
            for i in 0..4 {
                if curl_here[i] {
                    let (s, ta, qb) = &curl_pow[c.legs[i]][k[i] as usize];
                    val = val.mul_monomial(s, *ta, *qb);
                }
            }
            let key = kept.iter().enumerate().fold(0u128, |acc, (n, &i)| acc | ((k[i] as u128) << (BITS * n)));
            entries.insert(key, val);
        }
        let mut t = Tensor { dim: bundle.dim, legs: kept.iter().map(|&i| c.legs[i]).collect(), entries };
        t.trace_repeats();
        nodes.push(t);
    }
    nodes
}

#[derive(Clone, Debug, Default)]
pub struct Counters {
    pub steps: Vec<StepCount>,
    pub max_nnz: usize,
    /// Largest fill ratio of an intermediate tensor with at least one leg.
    pub max_fill: f64,
}

impl Counters {
    pub fn total_mults(&self) -> u64 {
        self.steps.iter().map(|s| s.mults).sum()
    }
}

pub fn execute(mut nodes: Vec<Tensor>, plan: &Plan) -> Result<(Tensor, Counters), EngineError> {
    let mut counters = Counters::default();
    for st in &plan.steps {
        let b = nodes.remove(st.b);
        let (t, count) = contract_pair(&nodes[st.a], &b)?;
        counters.max_nnz = counters.max_nnz.max(t.nnz());
        if !t.legs.is_empty() {
            counters.max_fill = counters.max_fill.max(t.fill());
        }
        counters.steps.push(count);
        nodes[st.a] = t;
    }
    match nodes.len() {
        0 => Ok((Tensor::scalar(LaurentPoly::one()), counters)),
        1 => Ok((nodes.pop().unwrap(), counters)),
        n => Err(EngineError::Disconnected(n)),
    }
}

/// Long diagram with the smallest greedy max log cost; ties to the first.
pub fn choose_best_long(pd: &PDCode) -> Result<(LongDiagram, Plan), EngineError> {
    let mut best: Option<(LongDiagram, Plan)> = None;
    for ld in pd.to_long_diagrams()? {
        let plan = plan_greedy(&leg_sets(&ld, false));
        if best.as_ref().is_none_or(|(_, p)| plan.max_log_cost() < p.max_log_cost()) {
            best = Some((ld, plan));
        }
    }
    Ok(best.expect("at least one long diagram"))
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: LaurentPoly,
    pub cut_label: u32,
    pub outer_left: bool,
    pub max_log_cost: usize,
    pub counters: Counters,
}

fn finish(raw: &LaurentPoly, bundle: &RMatrixBundle) -> Result<LaurentPoly, EngineError> {
    Ok(raw.divide_exponents(bundle.exponent_divisor)?)
}

pub fn evaluate_long(ld: &LongDiagram, plan: &Plan, bundle: &RMatrixBundle) -> Result<Evaluation, EngineError> {
    let (t, counters) = execute(build_network(ld, bundle, false), plan)?;
    Ok(Evaluation {
        value: finish(&t.value_at(&[]), bundle)?,
        cut_label: ld.cut_label,
        outer_left: ld.outer_left,
        max_log_cost: plan.max_log_cost(),
        counters,
    })
}

pub fn evaluate(pd: &PDCode, bundle: &RMatrixBundle) -> Result<Evaluation, EngineError> {
    let (ld, plan) = choose_best_long(pd)?;
    evaluate_long(&ld, &plan, bundle)
}

/// The invariant from every long diagram of `pd`, in diagram order.
pub fn evaluate_all_long(pd: &PDCode, bundle: &RMatrixBundle) -> Result<Vec<LaurentPoly>, EngineError> {
    pd.to_long_diagrams()?
        .iter()
        .map(|ld| Ok(evaluate_long(ld, &plan_greedy(&leg_sets(ld, false)), bundle)?.value))
        .collect()
}

/// Full `dim x dim` matrix of the open long diagram, `m[out][in]`.
pub fn evaluate_open(ld: &LongDiagram, bundle: &RMatrixBundle) -> Result<Vec<Vec<LaurentPoly>>, EngineError> {
    let d = bundle.dim;
    let nodes = build_network(ld, bundle, true);
    if nodes.is_empty() {
        let id = (0..d).map(|i| (0..d).map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() }).collect());
        return Ok(id.collect());
    }
    let plan = plan_greedy(&leg_sets(ld, true));
    let (t, _) = execute(nodes, &plan)?;
    let ent = t.legs.iter().position(|&a| a == ld.entrance).expect("entrance leg");
    let ext = 1 - ent;
    let mut m = vec![vec![LaurentPoly::zero(); d]; d];
    for (k, v) in &t.entries {
        m[digit(*k, ext) as usize][digit(*k, ent) as usize] = finish(v, bundle)?;
    }
    Ok(m)
}
