//! Instance generators: random Q-d-CNFs, the independent-set lift to
//! multipartite graphs, and the multipartite-IS hardness reduction to ∀∃CNF.
//!
//! The hardness reduction carries a checkable ground truth: the compiled
//! formula is false exactly when the graph has a one-per-part independent
//! set (see [`multipartite_brute_force_is`]).

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::ForgeError;
use crate::formula::{
    Clause, CnfMatrix, Literal, QbfInstance, QuantPrefix, Quantifier, Var,
};

/// Undirected simple graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: u32,
    edges: BTreeSet<(u32, u32)>,
}

impl SimpleGraph {
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<SimpleGraph, ForgeError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == 0 || u > n {
                return Err(ForgeError::UnknownVertex(u));
            }
            if v == 0 || v > n {
                return Err(ForgeError::UnknownVertex(v));
            }
            if u == v {
                return Err(ForgeError::IntraPartEdge(u, v));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(SimpleGraph { n, edges: set })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(u32, u32)> {
        &self.edges
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}

/// Graph with the vertex set partitioned into parts; edges only cross parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipartiteGraph {
    parts: Vec<Vec<u32>>,
    edges: BTreeSet<(u32, u32)>,
}

impl MultipartiteGraph {
    pub fn new(
        parts: Vec<Vec<u32>>,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<MultipartiteGraph, ForgeError> {
        if parts.is_empty() {
            return Err(ForgeError::NoParts);
        }
        let mut part_of: BTreeMap<u32, usize> = BTreeMap::new();
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                if part_of.insert(v, i).is_some() {
                    return Err(ForgeError::DuplicateVertex(v));
                }
            }
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            let (pu, pv) = match (part_of.get(&u), part_of.get(&v)) {
                (Some(pu), Some(pv)) => (*pu, *pv),
                (None, _) => return Err(ForgeError::UnknownVertex(u)),
                (_, None) => return Err(ForgeError::UnknownVertex(v)),
            };
            if pu == pv {
                return Err(ForgeError::IntraPartEdge(u, v));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(MultipartiteGraph { parts, edges: set })
    }

    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    pub fn edges(&self) -> &BTreeSet<(u32, u32)> {
        &self.edges
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}

/// Lifts an independent-set instance `(g, k)` to one-per-part multipartite
/// independent set: `k` parts, each a copy of the vertex set.
///
/// In strict mode (the default) the two copies of the same vertex are linked
/// across parts, so a one-per-part independent set never repeats a vertex and
/// existence coincides with a size-`k` independent set in `g` exactly.
pub fn is_to_multipartite(
    g: &SimpleGraph,
    k: usize,
    strict: bool,
) -> Result<MultipartiteGraph, ForgeError> {
    if k < 1 {
        return Err(ForgeError::NoParts);
    }
    let n = g.n();
    let id = |i: usize, j: u32| -> u32 { i as u32 * n + j };
    let parts: Vec<Vec<u32>> = (0..k).map(|i| (1..=n).map(|j| id(i, j)).collect()).collect();
    let mut edges = Vec::new();
    for i in 0..k {
        for i2 in i + 1..k {
            for j in 1..=n {
                for j2 in 1..=n {
                    let linked = g.has_edge(j, j2) || (strict && j == j2);
                    if linked {
                        edges.push((id(i, j), id(i2, j2)));
                    }
                }
            }
        }
    }
    MultipartiteGraph::new(parts, edges)
}

/// Finds a one-per-part independent set by backtracking, or reports none.
pub fn multipartite_brute_force_is(g: &MultipartiteGraph) -> Option<Vec<u32>> {
    fn go(g: &MultipartiteGraph, chosen: &mut Vec<u32>) -> bool {
        if chosen.len() == g.num_parts() {
            return true;
        }
        let part = &g.parts()[chosen.len()];
        for &v in part {
            if chosen.iter().all(|&u| !g.has_edge(u, v)) {
                chosen.push(v);
                if go(g, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    if go(g, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

/// Compiles a multipartite one-per-part IS instance to a ∀∃CNF that is false
/// exactly when such an independent set exists.
///
/// The graph is padded to `2^κ` parts (`κ = ⌈log₂K⌉`) with isolated singleton
/// parts. One universal variable per vertex, `κ` existential selectors; each
/// vertex `v` in part `i` contributes the clause `y_v ∨ ⋁ ¬y_u ∨ αᵢ` over its
/// cross-part neighbors `u`, where `αᵢ` is falsified exactly when the
/// selectors spell `i−1` in binary.
pub fn multipartite_is_to_qbf(g: &MultipartiteGraph) -> QbfInstance {
    let kappa = {
        let k = g.num_parts();
        let mut bits = 0usize;
        while (1usize << bits) < k {
            bits += 1;
        }
        bits
    };
    let padded_parts = 1usize << kappa;

    // y variables: one per vertex, parts in order, then padding singletons.
    let mut y_of: BTreeMap<u32, Var> = BTreeMap::new();
    let mut next = 1u32;
    for part in g.parts() {
        for &v in part {
            y_of.insert(v, Var::of(next));
            next += 1;
        }
    }
    let pad_vertices: Vec<Var> = (g.num_parts()..padded_parts)
        .map(|_| {
            let v = Var::of(next);
            next += 1;
            v
        })
        .collect();
    let x_vars: Vec<Var> = (0..kappa)
        .map(|_| {
            let v = Var::of(next);
            next += 1;
            v
        })
        .collect();

    let neighbors = |v: u32| -> Vec<u32> {
        g.edges()
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    };
    let alpha = |i: usize| -> Vec<Literal> {
        (0..kappa)
            .map(|l| {
                let bit = (i >> l) & 1;
                if bit == 0 {
                    Literal::pos(x_vars[l])
                } else {
                    Literal::neg(x_vars[l])
                }
            })
            .collect()
    };

    let mut clauses = Vec::new();
    for (i, part) in g.parts().iter().enumerate() {
        for &v in part {
            let mut lits = vec![Literal::pos(y_of[&v])];
            for u in neighbors(v) {
                lits.push(Literal::neg(y_of[&u]));
            }
            lits.extend(alpha(i));
            clauses.push(Clause::new(lits).expect("vertex variables are distinct"));
        }
    }
    for (offset, &y) in pad_vertices.iter().enumerate() {
        let i = g.num_parts() + offset;
        let mut lits = vec![Literal::pos(y)];
        lits.extend(alpha(i));
        clauses.push(Clause::new(lits).expect("selector variables are fresh"));
    }

    let mut entries: Vec<(Quantifier, Var)> = Vec::new();
    for part in g.parts() {
        for &v in part {
            entries.push((Quantifier::Forall, y_of[&v]));
        }
    }
    for &y in &pad_vertices {
        entries.push((Quantifier::Forall, y));
    }
    for &x in &x_vars {
        entries.push((Quantifier::Exists, x));
    }

    let prefix = QuantPrefix::new(entries).expect("variables are fresh and distinct");
    let (matrix, _) = CnfMatrix::from_clauses(clauses);
    QbfInstance::new(prefix, matrix).expect("prefix covers every matrix variable")
}

/// Prefix layout for [`random_qdcnf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixShape {
    /// Universal/existential alternation, starting universal.
    Alternating,
    /// All universals, then all existentials.
    Ae,
    /// All existentials, then all universals.
    Ea,
    /// Seed-determined order.
    Random,
}

impl PrefixShape {
    pub fn parse(name: &str) -> Option<PrefixShape> {
        match name {
            "alternating" => Some(PrefixShape::Alternating),
            "ae" => Some(PrefixShape::Ae),
            "ea" => Some(PrefixShape::Ea),
            "random" => Some(PrefixShape::Random),
            _ => None,
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u64 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Deterministic pseudo-random prenex instance with `n` universal and `k`
/// existential variables and `m` distinct clauses of size 1..=d.
pub fn random_qdcnf(
    n: usize,
    k: usize,
    d: usize,
    m: usize,
    shape: PrefixShape,
    seed: u64,
) -> Result<QbfInstance, ForgeError> {
    if d < 1 {
        return Err(ForgeError::ZeroWidth);
    }
    let nv = n + k;
    let max_size = d.min(nv);
    let available: u64 = (1..=max_size as u64)
        .map(|s| binomial(nv as u64, s).saturating_mul(1u64 << s.min(63)))
        .fold(0u64, u64::saturating_add);
    if m as u64 > available {
        return Err(ForgeError::InfeasibleClauseCount {
            requested: m as u64,
            available,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut quants: Vec<Quantifier> = Vec::with_capacity(nv);
    match shape {
        PrefixShape::Ae => {
            quants.extend(std::iter::repeat(Quantifier::Forall).take(n));
            quants.extend(std::iter::repeat(Quantifier::Exists).take(k));
        }
        PrefixShape::Ea => {
            quants.extend(std::iter::repeat(Quantifier::Exists).take(k));
            quants.extend(std::iter::repeat(Quantifier::Forall).take(n));
        }
        PrefixShape::Alternating => {
            let (mut a, mut e) = (n, k);
            while a + e > 0 {
                if a > 0 {
                    quants.push(Quantifier::Forall);
                    a -= 1;
                }
                if e > 0 {
                    quants.push(Quantifier::Exists);
                    e -= 1;
                }
            }
        }
        PrefixShape::Random => {
            quants.extend(std::iter::repeat(Quantifier::Forall).take(n));
            quants.extend(std::iter::repeat(Quantifier::Exists).take(k));
            quants.shuffle(&mut rng);
        }
    }
    let entries: Vec<(Quantifier, Var)> = quants
        .into_iter()
        .enumerate()
        .map(|(i, q)| (q, Var::of(i as u32 + 1)))
        .collect();

    let mut seen: BTreeSet<Clause> = BTreeSet::new();
    let mut attempts = 0u64;
    while seen.len() < m {
        attempts += 1;
        if attempts > 200 * m as u64 + 100_000 {
            // Dense demand: rejection stalls, enumerate instead.
            seen.extend(fill_exhaustive(nv, max_size, m - seen.len(), &seen, &mut rng));
            break;
        }
        let size = rng.gen_range(1..=max_size);
        let mut vars: Vec<u32> = Vec::with_capacity(size);
        while vars.len() < size {
            let v = rng.gen_range(1..=nv as u32);
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let lits: Vec<Literal> = vars
            .iter()
            .map(|&v| Literal::new(Var::of(v), rng.gen_bool(0.5)))
            .collect();
        seen.insert(Clause::new(lits).expect("sampled variables are distinct"));
    }

    let prefix = QuantPrefix::new(entries).expect("fresh consecutive variables");
    let (matrix, _) = CnfMatrix::from_clauses(seen.into_iter().collect());
    Ok(QbfInstance::new(prefix, matrix).expect("prefix covers all variables"))
}

fn fill_exhaustive(
    nv: usize,
    max_size: usize,
    want: usize,
    seen: &BTreeSet<Clause>,
    rng: &mut ChaCha8Rng,
) -> Vec<Clause> {
    let mut all: Vec<Clause> = Vec::new();
    let mut stack: Vec<(Vec<Literal>, u32)> = vec![(Vec::new(), 1)];
    while let Some((lits, from)) = stack.pop() {
        if !lits.is_empty() {
            let c = Clause::new(lits.clone()).expect("distinct variables by construction");
            if !seen.contains(&c) {
                all.push(c);
            }
        }
        if lits.len() == max_size {
            continue;
        }
        for v in from..=nv as u32 {
            for positive in [true, false] {
                let mut next = lits.clone();
                next.push(Literal::new(Var::of(v), positive));
                stack.push((next, v + 1));
            }
        }
    }
    all.shuffle(rng);
    all.truncate(want);
    all
}
