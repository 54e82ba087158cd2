//! The stage-`n` "consistent enough" check.
//!
//! A set `X` is rejected when a bounded refutation exists, or when some probe
//! sentence `p` (with `p, !p` not in `X`) has both `X + p` and `X + !p`
//! rejected. Rejection is anti-monotone: a rejected set stays rejected under
//! supersets. From that, two facts make the check tractable:
//!
//! * `X` is rejected iff every *completion* `X + L` is refuted within the
//!   budget, where `L` picks `p` or `!p` for every probe still undecided by
//!   `X`. So `X` is rejected iff `X + p` and `X + !p` are both rejected, for
//!   *any* undecided probe `p`; the branching probe can be chosen freely.
//! * Refutations are sound, so a satisfiable set is never rejected.
//!
//! The search below branches on one probe at a time, choosing probes over the
//! atoms already present first, and stops at the first satisfiable or
//! unrefutable completion. Subsets never need to be enumerated: rejection of
//! a subset propagates upward by anti-monotonicity.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{enumerate, sentence_size, Sentence, SentenceIndex};
use crate::prover::{refute_bounded, satisfiable, ProofBudget};

/// Default ceiling on the number of claims a checked set may hold.
pub const DEFAULT_MAX_CLAIMS: usize = 4096;
/// Default ceiling on search nodes for a single top-level check.
pub const DEFAULT_MAX_NODES: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConParams {
    pub proof_budget: ProofBudget,
    /// Probes are limited to sentences of at most this size.
    pub sentence_size_cap: u64,
    /// Only indices `0..probe_pool_cap` of the enumeration are scanned for probes.
    pub probe_pool_cap: u64,
}

impl Default for ConParams {
    fn default() -> Self {
        ConParams { proof_budget: ProofBudget::new(16), sentence_size_cap: 16, probe_pool_cap: 256 }
    }
}

/// A finite set of sentences in canonical (structural) order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClaimSet(BTreeSet<Sentence>);

impl ClaimSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: &Sentence) -> bool {
        self.0.contains(s)
    }

    pub fn insert(&mut self, s: Sentence) -> bool {
        self.0.insert(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sentence> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &ClaimSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn with(&self, s: Sentence) -> ClaimSet {
        let mut out = self.clone();
        out.insert(s);
        out
    }

    pub fn union(&self, other: &ClaimSet) -> ClaimSet {
        ClaimSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn to_vec(&self) -> Vec<Sentence> {
        self.0.iter().cloned().collect()
    }
}

impl FromIterator<Sentence> for ClaimSet {
    fn from_iter<I: IntoIterator<Item = Sentence>>(iter: I) -> Self {
        ClaimSet(iter.into_iter().collect())
    }
}

impl Extend<Sentence> for ClaimSet {
    fn extend<I: IntoIterator<Item = Sentence>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl<'a> IntoIterator for &'a ClaimSet {
    type Item = &'a Sentence;
    type IntoIter = std::collections::btree_set::Iter<'a, Sentence>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConError {
    #[error("claim set of {size} sentences exceeds the cap of {cap}; use a smaller stage")]
    TooManyClaims { size: usize, cap: usize },
    #[error("consistency search exceeded {limit} nodes; use a smaller probe pool or a larger proof budget")]
    SearchLimit { limit: u64 },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub max_depth: u64,
}

struct Probe {
    pos: Sentence,
    neg: Sentence,
    atoms: Vec<BigUint>,
}

/// Evaluates the check for one parameter set, with an optional shared memo.
pub struct ConChecker {
    params: ConParams,
    probes: Vec<Probe>,
    memo: Option<Mutex<HashMap<ClaimSet, bool>>>,
    memo_capacity: usize,
    max_claims: usize,
    max_nodes: u64,
    hits: AtomicU64,
    misses: AtomicU64,
    max_depth: AtomicU64,
}

impl ConChecker {
    pub fn new(params: ConParams) -> Self {
        let probes = probe_pool(&params)
            .into_iter()
            .map(|pos| {
                let mut atoms = BTreeSet::new();
                pos.for_each_atom(&mut |k| {
                    atoms.insert(k.clone());
                });
                Probe { neg: Sentence::not(pos.clone()), pos, atoms: atoms.into_iter().collect() }
            })
            .collect();
        ConChecker {
            params,
            probes,
            memo: Some(Mutex::new(HashMap::new())),
            memo_capacity: 1 << 20,
            max_claims: DEFAULT_MAX_CLAIMS,
            max_nodes: DEFAULT_MAX_NODES,
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            max_depth: AtomicU64::new(0),
        }
    }

    /// Same checker without a memo; results are identical, only slower.
    pub fn without_memo(params: ConParams) -> Self {
        ConChecker { memo: None, ..Self::new(params) }
    }

    pub fn with_limits(mut self, max_claims: usize, max_nodes: u64) -> Self {
        self.max_claims = max_claims;
        self.max_nodes = max_nodes;
        self
    }

    pub fn max_claims(&self) -> usize {
        self.max_claims
    }

    pub fn params(&self) -> &ConParams {
        &self.params
    }

    pub fn probe_count(&self) -> usize {
        self.probes.len()
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            max_depth: self.max_depth.load(Ordering::Relaxed),
        }
    }

    /// `true` iff `phi` is consistent enough at these parameters.
    pub fn check(&self, phi: &ClaimSet) -> Result<bool, ConError> {
        if phi.len() > self.max_claims {
            return Err(ConError::TooManyClaims { size: phi.len(), cap: self.max_claims });
        }
        let mut nodes = 0;
        self.rejected(phi, 0, &mut nodes).map(|r| !r)
    }

    fn lookup(&self, x: &ClaimSet) -> Option<bool> {
        let memo = self.memo.as_ref()?;
        let hit = memo.lock().expect("memo lock").get(x).copied();
        match hit {
            Some(_) => self.hits.fetch_add(1, Ordering::Relaxed),
            None => self.misses.fetch_add(1, Ordering::Relaxed),
        };
        hit
    }

    fn store(&self, x: &ClaimSet, value: bool) {
        if let Some(memo) = &self.memo {
            let mut m = memo.lock().expect("memo lock");
            if m.len() >= self.memo_capacity {
                m.clear();
            }
            m.insert(x.clone(), value);
        }
    }

    fn rejected(&self, x: &ClaimSet, depth: u64, nodes: &mut u64) -> Result<bool, ConError> {
        self.max_depth.fetch_max(depth, Ordering::Relaxed);
        if let Some(v) = self.lookup(x) {
            return Ok(v);
        }
        *nodes += 1;
        if *nodes > self.max_nodes {
            return Err(ConError::SearchLimit { limit: self.max_nodes });
        }
        let value = if satisfiable(x) {
            false
        } else if refute_bounded(x, self.params.proof_budget).is_refuted() {
            true
        } else {
            match self.pick_probe(x) {
                None => false,
                Some(p) => {
                    self.rejected(&x.with(p.pos.clone()), depth + 1, nodes)?
                        && self.rejected(&x.with(p.neg.clone()), depth + 1, nodes)?
                }
            }
        };
        self.store(x, value);
        Ok(value)
    }

    /// First undecided probe over atoms already in `x`, else the first
    /// undecided probe at all.
    fn pick_probe(&self, x: &ClaimSet) -> Option<&Probe> {
        let mut present = HashSet::new();
        for s in x {
            s.for_each_atom(&mut |k| {
                present.insert(k);
            });
        }
        let undecided = |p: &&Probe| !x.contains(&p.pos) && !x.contains(&p.neg);
        self.probes
            .iter()
            .filter(undecided)
            .find(|p| !p.atoms.is_empty() && p.atoms.iter().all(|a| present.contains(a)))
            .or_else(|| self.probes.iter().find(undecided))
    }
}

/// Probe sentences: enumeration indices below the pool cap whose size is
/// within the size cap, in index order.
pub fn probe_pool(params: &ConParams) -> Vec<Sentence> {
    (0..params.probe_pool_cap)
        .map(|k| enumerate(&SentenceIndex::new(k)))
        .filter(|s| sentence_size(s) <= params.sentence_size_cap)
        .collect()
}

/// One-shot check with a fresh checker.
pub fn con_n(phi: &ClaimSet, params: &ConParams) -> Result<bool, ConError> {
    ConChecker::new(*params).check(phi)
}

/// `false` only if `phi` is rejected while `phi + extra` is accepted, which
/// anti-monotonicity forbids.
pub fn con_monotone_check(phi: &ClaimSet, extra: &Sentence, params: &ConParams) -> Result<bool, ConError> {
    let checker = ConChecker::new(*params);
    let base = checker.check(phi)?;
    let bigger = checker.check(&phi.with(extra.clone()))?;
    Ok(!(!base && bigger))
}
