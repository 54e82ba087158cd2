//! Level-saturation resolution with subsumption.
//!
//! Level `d` holds (up to subsumption) every clause with a resolution
//! derivation of depth at most `d`. New clauses at a level only come from
//! pairs involving a clause first kept at the previous level, so the loop is a
//! FIFO given-clause search processed one generation at a time.

use super::cnf::{is_tautology, Lit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Saturation {
    /// Empty clause derived at this depth.
    Refuted(u64),
    /// No new clauses can be derived.
    Saturated,
    /// Depth budget used up.
    Exhausted,
}

pub(crate) fn saturate(input: &[Vec<Lit>], max_depth: u64) -> Saturation {
    let mut db = ClauseDb::default();
    let mut initial: Vec<Vec<Lit>> = input.to_vec();
    for c in &mut initial {
        c.sort_unstable();
        c.dedup();
    }
    initial.retain(|c| !is_tautology(c));
    if initial.iter().any(|c| c.is_empty()) {
        return Saturation::Refuted(0);
    }
    let mut frontier = db.insert_batch(initial);
    let mut depth = 0;
    while depth < max_depth {
        depth += 1;
        let mut candidates = Vec::new();
        for &f in &frontier {
            if !db.alive[f] {
                continue;
            }
            for other in 0..db.clauses.len() {
                if !db.alive[other] {
                    continue;
                }
                // pairs of two frontier clauses are visited once
                if other > f && db.level[other] == db.level[f] {
                    continue;
                }
                if let Some(r) = resolve(&db.clauses[f], &db.clauses[other]) {
                    if r.is_empty() {
                        return Saturation::Refuted(depth);
                    }
                    candidates.push(r);
                }
            }
        }
        for c in &mut candidates {
            c.sort_unstable();
        }
        candidates.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        candidates.dedup();
        frontier = db.insert_batch(candidates);
        if frontier.is_empty() {
            return Saturation::Saturated;
        }
    }
    Saturation::Exhausted
}

/// Binary resolvent on the unique clashing pair; `None` if the clauses do not
/// clash or the resolvent would be a tautology.
fn resolve(a: &[Lit], b: &[Lit]) -> Option<Vec<Lit>> {
    let mut clash = None;
    for &x in a {
        if b.binary_search(&(x ^ 1)).is_ok() {
            if clash.is_some() {
                return None;
            }
            clash = Some(x);
        }
    }
    let pivot = clash?;
    let mut out = Vec::with_capacity(a.len() + b.len() - 2);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if next != pivot && next != pivot ^ 1 {
            out.push(next);
        }
    }
    Some(out)
}

fn subsumes(small: &[Lit], big: &[Lit]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

#[derive(Default)]
struct ClauseDb {
    clauses: Vec<Vec<Lit>>,
    alive: Vec<bool>,
    level: Vec<u32>,
    generation: u32,
}

impl ClauseDb {
    /// Inserts clauses (sorted shortest first) that are not subsumed by a live
    /// clause, retiring live clauses they subsume. Returns the new indices.
    fn insert_batch(&mut self, batch: Vec<Vec<Lit>>) -> Vec<usize> {
        let generation = self.generation;
        self.generation += 1;
        let mut added = Vec::new();
        for c in batch {
            let subsumed = self.clauses.iter().zip(&self.alive).any(|(d, &alive)| alive && subsumes(d, &c));
            if subsumed {
                continue;
            }
            for i in 0..self.clauses.len() {
                if self.alive[i] && subsumes(&c, &self.clauses[i]) {
                    self.alive[i] = false;
                }
            }
            added.push(self.clauses.len());
            self.clauses.push(c);
            self.alive.push(true);
            self.level.push(generation);
        }
        added
    }
}
