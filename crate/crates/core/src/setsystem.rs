//! Set systems: exact VC dimension, shatter function, the Sauer-Shelah
//! envelope, and the greedy peeling edge-bound certifier.
//!
//! Exact VC computation is exponential in the ground size, so it is guarded
//! by a cap (default 24). The peel certifier turns the symmetric-difference
//! deletion argument into an instance-specific sound bound: it peels the
//! vertex of a minimum symmetric-difference pair, charging
//! `|N(q1) \ N(q2)| / (1 - beta)` per step, and verifies at every step that
//! the charge covers the peeled degree.

use crate::incidence::{check_beta, intersection_size, BipartiteIncidenceGraph, IncidenceError};
use crate::rational::{format_rational, Rational};
use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::HashSet;
use thiserror::Error;

pub const DEFAULT_VC_CAP: usize = 24;
pub const DEFAULT_SHATTER_BUDGET: u128 = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetSystemError {
    #[error("ground set of size {0} exceeds the exact-VC cap {1}")]
    GroundTooLarge(usize, usize),
    #[error("enumerating C({ground}, {z}) subsets exceeds the budget {budget}")]
    BudgetExceeded { ground: usize, z: usize, budget: u128 },
    #[error("z = {0} out of range for ground size {1}")]
    ZOutOfRange(usize, usize),
    #[error("element {0} out of range for ground size {1}")]
    ElementOutOfRange(usize, usize),
    #[error("graph is not beta-nondegenerate at the peel step: pair ({q1}, {q2}) has charge {charge} < degree {degree}")]
    NotNondegenerate {
        q1: usize,
        q2: usize,
        charge: String,
        degree: usize,
    },
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

/// A finite multiset of subsets over the ground set `{0, .., ground_size-1}`.
/// Repeated sets are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    ground_size: usize,
    sets: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(ground_size: usize, mut sets: Vec<Vec<usize>>) -> Result<Self, SetSystemError> {
        for set in &mut sets {
            set.sort_unstable();
            set.dedup();
            if let Some(&max) = set.last() {
                if max >= ground_size {
                    return Err(SetSystemError::ElementOutOfRange(max, ground_size));
                }
            }
        }
        Ok(SetSystem { ground_size, sets })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Bitmask form; valid whenever `ground_size <= 64`.
    fn masks(&self) -> Vec<u64> {
        debug_assert!(self.ground_size <= 64);
        self.sets
            .iter()
            .map(|set| set.iter().fold(0u64, |acc, &e| acc | (1 << e)))
            .collect()
    }

    /// Neighbor sets of the right part over the left part of a graph.
    pub fn from_right_neighborhoods(graph: &BipartiteIncidenceGraph) -> Self {
        SetSystem {
            ground_size: graph.left_size(),
            sets: (0..graph.right_size())
                .map(|q| graph.neighbors(q).to_vec())
                .collect(),
        }
    }
}

fn is_shattered(trace_masks: &HashSet<u64>, subset: u64, size: u32) -> bool {
    let mut traces = HashSet::with_capacity(1 << size);
    for &m in trace_masks {
        traces.insert(m & subset);
        if traces.len() == 1usize << size {
            return true;
        }
    }
    false
}

/// Exact VC dimension with the default ground cap.
pub fn vc_dimension(system: &SetSystem) -> Result<i64, SetSystemError> {
    vc_dimension_capped(system, DEFAULT_VC_CAP)
}

/// Exact VC dimension: the largest `k` such that some `k`-subset of the
/// ground set is shattered. Returns -1 for the empty system (no set
/// shatters even the empty subset).
pub fn vc_dimension_capped(system: &SetSystem, cap: usize) -> Result<i64, SetSystemError> {
    if system.ground_size > cap.min(64) {
        return Err(SetSystemError::GroundTooLarge(system.ground_size, cap.min(64)));
    }
    if system.is_empty() {
        return Ok(-1);
    }
    let distinct: HashSet<u64> = system.masks().into_iter().collect();
    let g = system.ground_size;
    let mut best: i64 = 0;
    for k in 1..=g {
        if (1u128 << k) > distinct.len() as u128 {
            break; // not enough distinct traces to shatter a k-set
        }
        let mut found = false;
        for subset in (0..g).combinations(k) {
            let mask = subset.iter().fold(0u64, |acc, &e| acc | (1 << e));
            if is_shattered(&distinct, mask, k as u32) {
                found = true;
                break;
            }
        }
        if !found {
            break; // shattering is downward closed in the subset size
        }
        best = k as i64;
    }
    Ok(best)
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Exact shatter function: the maximum over `z`-subsets `B` of the ground
/// set of the number of distinct traces `{A cap B : A in F}`.
pub fn shatter_function(system: &SetSystem, z: usize) -> Result<usize, SetSystemError> {
    shatter_function_budgeted(system, z, DEFAULT_SHATTER_BUDGET)
}

pub fn shatter_function_budgeted(
    system: &SetSystem,
    z: usize,
    budget: u128,
) -> Result<usize, SetSystemError> {
    let g = system.ground_size;
    if z > g {
        return Err(SetSystemError::ZOutOfRange(z, g));
    }
    if binomial_u128(g, z) > budget {
        return Err(SetSystemError::BudgetExceeded { ground: g, z, budget });
    }
    if z == 0 {
        return Ok(if system.is_empty() { 0 } else { 1 });
    }
    if g > 64 {
        return Err(SetSystemError::GroundTooLarge(g, 64));
    }
    let masks = system.masks();
    let mut best = 0;
    for subset in (0..g).combinations(z) {
        let mask = subset.iter().fold(0u64, |acc, &e| acc | (1 << e));
        let traces: HashSet<u64> = masks.iter().map(|&m| m & mask).collect();
        best = best.max(traces.len());
    }
    Ok(best)
}

/// Sauer-Shelah envelope `sum_{i=0}^{d} C(z, i)`, exact.
pub fn sauer_envelope(d: usize, z: usize) -> BigUint {
    let mut total = BigUint::zero();
    let mut binom = BigUint::one(); // C(z, 0)
    for i in 0..=d {
        total += &binom;
        if i >= z {
            break;
        }
        binom = binom * BigUint::from(z - i) / BigUint::from(i + 1);
    }
    total
}

/// VC dimension of the two derived set systems of a bipartite graph:
/// first `{N(q) : q in Q}` over `P`, then `{N(p) : p in P}` over `Q`.
pub fn left_right_vc(graph: &BipartiteIncidenceGraph) -> Result<(i64, i64), SetSystemError> {
    let over_p = SetSystem::from_right_neighborhoods(graph);
    let over_q = SetSystem::from_right_neighborhoods(&graph.transpose());
    Ok((vc_dimension(&over_p)?, vc_dimension(&over_q)?))
}

/// One peel step: vertex `q1` was deleted against partner `q2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelStep {
    pub q1: usize,
    pub q2: usize,
    pub setminus_size: usize,
    pub charge: Rational,
}

/// An instance-specific certified upper bound on `|E(G)|`:
/// `certified_bound = sum of charges + final_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelCertificate {
    pub beta: Rational,
    pub steps: Vec<PeelStep>,
    pub final_degree: usize,
    pub certified_bound: Rational,
}

/// Greedy peel: while at least two right vertices survive, pick the pair
/// minimizing the symmetric difference of neighbor sets (orienting so
/// `|N(q1) \ N(q2)| <= |N(q2) \ N(q1)|`, ties by lowest `(q1, q2)`), peel
/// `q1` and charge `|N(q1) \ N(q2)| / (1 - beta)`. Aborts with the violating
/// pair whenever the charge fails to cover `|N(q1)|`, which certifies the
/// surviving graph is not beta-nondegenerate.
pub fn peel_certify(
    graph: &BipartiteIncidenceGraph,
    beta: &Rational,
) -> Result<PeelCertificate, SetSystemError> {
    check_beta(beta)?;
    let n = graph.right_size();
    let one_minus_beta = Rational::one() - beta;

    // Neighbor sets never change while peeling, so pairwise intersection
    // sizes can be computed once up front.
    let degrees: Vec<usize> = (0..n).map(|q| graph.degree(q)).collect();
    let mut inter = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let i = intersection_size(graph.neighbors(a), graph.neighbors(b));
            inter[a][b] = i;
            inter[b][a] = i;
        }
    }

    let mut alive: Vec<usize> = (0..n).collect();
    let mut steps = Vec::new();
    let mut bound = Rational::zero();

    while alive.len() >= 2 {
        // Minimum symmetric difference over ordered alive pairs with the
        // orientation |N(a) \ N(b)| <= |N(b) \ N(a)|; ties by (a, b).
        let mut best: Option<(usize, usize, usize)> = None; // (symdiff, a, b)
        for &a in &alive {
            for &b in &alive {
                if a == b {
                    continue;
                }
                let minus_ab = degrees[a] - inter[a][b];
                let minus_ba = degrees[b] - inter[a][b];
                if minus_ab > minus_ba {
                    continue;
                }
                let symdiff = minus_ab + minus_ba;
                let key = (symdiff, a, b);
                if best.is_none() || key < best.unwrap() {
                    best = Some(key);
                }
            }
        }
        let (_, q1, q2) = best.expect("at least one oriented pair exists");
        let setminus_size = degrees[q1] - inter[q1][q2];
        let charge = Rational::from_integer(setminus_size.into()) / &one_minus_beta;
        if charge < Rational::from_integer(degrees[q1].into()) {
            return Err(SetSystemError::NotNondegenerate {
                q1,
                q2,
                charge: format_rational(&charge),
                degree: degrees[q1],
            });
        }
        bound += &charge;
        steps.push(PeelStep {
            q1,
            q2,
            setminus_size,
            charge,
        });
        alive.retain(|&q| q != q1);
    }

    let final_degree = alive.first().map(|&q| degrees[q]).unwrap_or(0);
    bound += Rational::from_integer(final_degree.into());
    Ok(PeelCertificate {
        beta: beta.clone(),
        steps,
        final_degree,
        certified_bound: bound,
    })
}
