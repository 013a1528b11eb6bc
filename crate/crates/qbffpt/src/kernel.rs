//! Sunflower kernelization: repeatedly find a sunflower of size ≥ s in a
//! part's label family and delete member vertices until none remains. With
//! s above the exchange-argument threshold this preserves the existence of
//! an independent selection, and the Erdős–Rado bound caps the surviving
//! part sizes at d!(s−1)^d − 1.

use std::collections::BTreeSet;

use crate::cgis::ClauseGraph;
use crate::error::KernelError;
use crate::formula::{Clause, Literal};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A sunflower in a family of equal-size literal sets: all pairwise
/// intersections equal the core, so the petals are pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sunflower {
    pub core: BTreeSet<Literal>,
    /// Indices into the searched family, ascending; at least two.
    pub members: Vec<usize>,
}

impl Sunflower {
    /// Checks the type invariants in linear time: the core is contained in
    /// every member and no element outside the core occurs in two members.
    pub fn check(&self, family: &[BTreeSet<Literal>]) -> bool {
        if self.members.len() < 2 {
            return false;
        }
        let mut seen_petal: BTreeSet<Literal> = BTreeSet::new();
        for &m in &self.members {
            let Some(set) = family.get(m) else {
                return false;
            };
            if !self.core.iter().all(|l| set.contains(l)) {
                return false;
            }
            for l in set {
                if !self.core.contains(l) && !seen_petal.insert(*l) {
                    return false;
                }
            }
        }
        true
    }
}

/// Threshold selection for the deletion rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMode {
    /// s = (K−1)d + 2, the published threshold. Its counting step assumes a
    /// clause blocks at most d petals, which holds for variable-disjoint
    /// petals; literal-set petals may share a variable with opposite
    /// polarity.
    Paper,
    /// s = 2(K−1)d + 2: a clause of d literals can block at most 2d
    /// literal-set petals, so the exchange argument holds unconditionally.
    Safe,
}

impl KernelMode {
    pub fn threshold(self, num_parts: usize, d: usize) -> usize {
        let base = num_parts.saturating_sub(1) * d;
        match self {
            KernelMode::Paper => base + 2,
            KernelMode::Safe => 2 * base + 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelMode::Paper => "paper",
            KernelMode::Safe => "safe",
        }
    }
}

/// Per-part size bound d!(s−1)^d; parts end strictly below it.
pub fn kernel_bound(d: usize, s: usize) -> u128 {
    let mut factorial: u128 = 1;
    for i in 2..=d as u128 {
        factorial = factorial.saturating_mul(i);
    }
    let mut power: u128 = 1;
    for _ in 0..d {
        power = power.saturating_mul((s as u128).saturating_sub(1));
    }
    factorial.saturating_mul(power)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartReport {
    pub before: usize,
    pub after: usize,
    pub sunflowers: usize,
    pub deleted: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub mode: KernelMode,
    pub s: usize,
    pub bound: u128,
    pub parts: Vec<PartReport>,
}

impl KernelReport {
    pub fn total_deleted(&self) -> usize {
        self.parts.iter().map(|p| p.deleted).sum()
    }
}

/// Finds a sunflower of size ≥ `a` in a family of equal-size literal sets.
/// Guaranteed to succeed when |family| > d!(a−1)^d; below that threshold it
/// may or may not find one. All sets must have the same size.
pub fn find_sunflower(
    family: &[BTreeSet<Literal>],
    a: usize,
) -> Result<Option<Sunflower>, KernelError> {
    if a < 2 {
        return Err(KernelError::ThresholdTooSmall(a));
    }
    let mut size = None;
    for set in family {
        match size {
            None => size = Some(set.len()),
            Some(s) if s != set.len() => {
                return Err(KernelError::UnequalSetSizes(s, set.len()));
            }
            _ => {}
        }
    }
    let indexed: Vec<(usize, BTreeSet<Literal>)> =
        family.iter().cloned().enumerate().collect();
    let found = search(&indexed, a);
    if let Some(sf) = &found {
        debug_assert!(sf.check(family));
    }
    Ok(found)
}

fn search(family: &[(usize, BTreeSet<Literal>)], a: usize) -> Option<Sunflower> {
    // Greedy maximal pairwise-disjoint subfamily, in index order.
    let mut disjoint: Vec<usize> = Vec::new();
    let mut used: BTreeSet<Literal> = BTreeSet::new();
    for (pos, (_, set)) in family.iter().enumerate() {
        if set.iter().all(|l| !used.contains(l)) {
            disjoint.push(pos);
            used.extend(set.iter().copied());
        }
    }
    let greedy = if disjoint.len() >= a {
        Some(Sunflower {
            core: BTreeSet::new(),
            members: disjoint.iter().map(|&p| family[p].0).collect(),
        })
    } else {
        None
    };
    // A large disjoint subfamily is good enough on its own. A small one (even
    // if it already meets `a`) often hides a far bigger sunflower around a
    // popular element, e.g. when most sets share a padding literal; chasing
    // it keeps the deletion rule's batches large.
    if disjoint.len() >= a.max(64) {
        return greedy;
    }

    // Every set meets the union of the disjoint subfamily; recurse on the
    // link of the most frequent element (smallest literal on ties).
    let mut best: Option<(usize, Literal)> = None;
    for l in &used {
        let count = family.iter().filter(|(_, s)| s.contains(l)).count();
        let better = match best {
            None => true,
            Some((c, bl)) => count > c || (count == c && *l < bl),
        };
        if better {
            best = Some((count, *l));
        }
    }
    let linked = best.and_then(|(count, pivot)| {
        if count < 2 {
            return None;
        }
        let link: Vec<(usize, BTreeSet<Literal>)> = family
            .iter()
            .filter(|(_, s)| s.contains(&pivot))
            .map(|(idx, s)| {
                let mut t = s.clone();
                t.remove(&pivot);
                (*idx, t)
            })
            .collect();
        let mut inner = search(&link, a)?;
        inner.core.insert(pivot);
        Some(inner)
    });
    match (greedy, linked) {
        (Some(g), Some(l)) => Some(if l.members.len() > g.members.len() { l } else { g }),
        (g, l) => g.or(l),
    }
}

/// One pass of the deletion rule on a label family: find a sunflower of
/// size ≥ s, then delete its smallest-index members while the remainder
/// still has at least s members (each single deletion is justified by the
/// exchange argument on the sunflower that remains).
fn reduce_labels(mut labels: Vec<Clause>, s: usize) -> (Vec<Clause>, PartReport) {
    let before = labels.len();
    let mut report = PartReport {
        before,
        after: before,
        sunflowers: 0,
        deleted: 0,
    };
    loop {
        let family: Vec<BTreeSet<Literal>> =
            labels.iter().map(Clause::literal_set).collect();
        let sf = match find_sunflower(&family, s) {
            Ok(Some(sf)) if sf.members.len() >= s => sf,
            _ => break,
        };
        report.sunflowers += 1;
        // Keep the s−1 largest member indices, delete the rest.
        let delete_count = sf.members.len() - (s - 1);
        log::debug!(
            "pass {}: {} labels, sunflower of {}, deleting {}",
            report.sunflowers,
            labels.len(),
            sf.members.len(),
            delete_count
        );
        let doomed: std::collections::BTreeSet<usize> =
            sf.members[..delete_count].iter().copied().collect();
        labels = labels
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !doomed.contains(i))
            .map(|(_, c)| c)
            .collect();
        report.deleted += delete_count;
    }
    report.after = labels.len();
    (labels, report)
}

/// Applies the deletion rule exhaustively to a single part.
pub fn reduce_part(
    g: &ClauseGraph,
    part: usize,
    s: usize,
) -> Result<(ClauseGraph, PartReport), KernelError> {
    if s < 2 {
        return Err(KernelError::ThresholdTooSmall(s));
    }
    let labels = g
        .parts()
        .get(part)
        .ok_or(crate::error::CgisError::PartOutOfRange(part))?
        .clone();
    let (labels, report) = reduce_labels(labels, s);
    Ok((g.with_part(part, labels), report))
}

/// Kernelizes every part. Parts are independent, so they are processed in
/// parallel when the `parallel` feature is on; the result is identical to
/// the sequential part-by-part reduction.
pub fn kernelize(g: &ClauseGraph, mode: KernelMode) -> (ClauseGraph, KernelReport) {
    let s = mode.threshold(g.num_parts(), g.d());
    let bound = kernel_bound(g.d(), s);

    // Fork only when the work amortizes the dispatch overhead.
    let work: usize = g.parts().iter().map(Vec::len).sum();
    #[cfg(feature = "parallel")]
    let reduced: Vec<(Vec<Clause>, PartReport)> = if work >= 4096 {
        g.parts()
            .par_iter()
            .map(|labels| reduce_labels(labels.clone(), s))
            .collect()
    } else {
        g.parts()
            .iter()
            .map(|labels| reduce_labels(labels.clone(), s))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let reduced: Vec<(Vec<Clause>, PartReport)> = {
        let _ = work;
        g.parts()
            .iter()
            .map(|labels| reduce_labels(labels.clone(), s))
            .collect()
    };

    let (parts, part_reports): (Vec<_>, Vec<_>) = reduced.into_iter().unzip();
    let out = g.with_parts(parts);

    // Erdős–Rado certificate: a part with more than d!(s−1)^d labels would
    // still contain a size-s sunflower, contradicting exhaustion. Equality
    // is reachable for d = 1 (s−1 leftover singletons), so the sound bound
    // is ≤, not <.
    if g.d() > 0 {
        for part in out.parts() {
            assert!((part.len() as u128) <= bound);
        }
    }

    (
        out,
        KernelReport {
            mode,
            s,
            bound,
            parts: part_reports,
        },
    )
}
