//! Bounded membership in normal closures of free-group words, and random
//! probes of the support property of one-relator closures.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snf::Lattice;
use crate::word::{random_reduced_word, ConjugateProduct, Word};

pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;
pub const NODE_LIMIT_ENV: &str = "REEBTOP_NODE_LIMIT";

/// Node limit from the environment, falling back to the default.
pub fn node_limit_from_env() -> usize {
    std::env::var(NODE_LIMIT_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_LIMIT)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureQuery {
    pub relators: Vec<Word>,
    pub target: Word,
    pub radius: usize,
    pub factor_bound: usize,
    pub node_limit: usize,
}

impl ClosureQuery {
    pub fn new(relators: Vec<Word>, target: Word, radius: usize, factor_bound: usize) -> Result<Self> {
        if factor_bound == 0 {
            return Err(Error::InvalidParameter("factor bound must be >= 1".into()));
        }
        Ok(ClosureQuery {
            relators: relators.iter().map(Word::reduced).collect(),
            target: target.reduced(),
            radius,
            factor_bound,
            node_limit: node_limit_from_env(),
        })
    }

    pub fn with_node_limit(mut self, limit: usize) -> Self {
        self.node_limit = limit;
        self
    }

    /// Rank of the ambient free group: one past the largest generator used.
    pub fn rank(&self) -> usize {
        self.relators
            .iter()
            .chain(std::iter::once(&self.target))
            .filter_map(Word::max_gen)
            .max()
            .map_or(0, |g| g + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    Abelianization,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosureVerdict {
    Member(ConjugateProduct),
    NotMember(Certificate),
    Unknown(String),
}

impl ClosureVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, ClosureVerdict::Member(_))
    }

    pub fn is_not_member(&self) -> bool {
        matches!(self, ClosureVerdict::NotMember(_))
    }
}

/// Exponent-sum obstruction: `true` when the target's exponent vector lies
/// outside the lattice spanned by the relators' exponent vectors.
pub fn abelian_obstruction(relators: &[Word], target: &Word, rank: usize) -> bool {
    let rows: Vec<Vec<i64>> = relators.iter().map(|r| r.exponent_sums(rank)).collect();
    !Lattice::from_rows(rank, &rows).contains(&target.exponent_sums(rank))
}

/// All reduced words of length at most `radius` over `rank` generators, in
/// shortlex order.
pub fn words_up_to(rank: usize, radius: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..rank {
                for inv in [false, true] {
                    let l = crate::word::Letter::new(g, inv);
                    if w.letters().last().is_some_and(|&x| x.cancels(l)) {
                        continue;
                    }
                    let mut letters = w.letters().to_vec();
                    letters.push(l);
                    next.push(Word::from_letters(letters));
                }
            }
        }
        next.sort_by(|a, b| a.letters().cmp(b.letters()));
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The distinct conjugates `t r^{±1} t^-1` with `|t| <= radius`, each with the
/// first (shortlex-least) factor that produces it.
fn conjugates(relators: &[Word], rank: usize, radius: usize) -> Vec<(Word, (Word, usize, bool))> {
    let ts = words_up_to(rank, radius);
    let mut seen: HashMap<Word, (Word, usize, bool)> = HashMap::new();
    let mut order = Vec::new();
    for (ri, r) in relators.iter().enumerate() {
        if r.is_empty() {
            continue;
        }
        for inverse in [false, true] {
            let base = if inverse { r.inverse() } else { r.clone() };
            for t in &ts {
                let c = base.conjugate_by(t);
                if !seen.contains_key(&c) {
                    seen.insert(c.clone(), (t.clone(), ri, inverse));
                    order.push(c);
                }
            }
        }
    }
    order
        .into_iter()
        .map(|c| {
            let f = seen.remove(&c).expect("recorded");
            (c, f)
        })
        .collect()
}

/// Breadth-first search over reduced products of at most `factor_bound`
/// conjugates, deduplicated by reduced word.
pub fn member_bounded(q: &ClosureQuery) -> ClosureVerdict {
    let rank = q.rank();
    if abelian_obstruction(&q.relators, &q.target, rank) {
        return ClosureVerdict::NotMember(Certificate::Abelianization);
    }
    if q.target.is_empty() {
        return ClosureVerdict::Member(ConjugateProduct::default());
    }
    if q.relators.iter().all(Word::is_empty) {
        return ClosureVerdict::NotMember(Certificate::Exhaustive);
    }

    let conj = conjugates(&q.relators, rank, q.radius);
    // node -> (parent node, index into conj)
    let mut parent: HashMap<Word, Option<(Word, usize)>> = HashMap::new();
    parent.insert(Word::identity(), None);
    let mut frontier = vec![Word::identity()];
    let mut found = None;

    'layers: for _ in 0..q.factor_bound {
        let mut next = Vec::new();
        for w in &frontier {
            for (ci, (c, _)) in conj.iter().enumerate() {
                let p = w.mul(c);
                if parent.contains_key(&p) {
                    continue;
                }
                if parent.len() >= q.node_limit {
                    return ClosureVerdict::Unknown(format!("node limit {} reached", q.node_limit));
                }
                parent.insert(p.clone(), Some((w.clone(), ci)));
                if p == q.target {
                    found = Some(p);
                    break 'layers;
                }
                next.push(p);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let Some(mut node) = found else {
        return ClosureVerdict::Unknown(format!(
            "not reached with radius {} and {} factors",
            q.radius, q.factor_bound
        ));
    };
    let mut chain = Vec::new();
    while let Some(Some((prev, ci))) = parent.get(&node) {
        chain.push(*ci);
        node = prev.clone();
    }
    chain.reverse();
    let mut witness = ConjugateProduct::default();
    for ci in chain {
        let (t, ri, inv) = conj[ci].1.clone();
        witness.push(t, ri, inv);
    }
    match witness.evaluate(&q.relators) {
        Ok(v) if v == q.target => ClosureVerdict::Member(witness),
        _ => ClosureVerdict::Unknown("witness failed re-evaluation".into()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub relator: Word,
    pub generator: usize,
    pub rank: usize,
    pub samples: usize,
    pub radius: usize,
    pub factors: usize,
    pub seed: u64,
    pub trivial_skipped: usize,
    pub counterexamples: Vec<Word>,
}

/// Samples products of conjugates of `r^{±1}` and records every nontrivial
/// product that avoids `gen`. Requires `gen` in the cyclic core of `r`.
pub fn freiheitssatz_probe(
    r: &Word,
    gen: usize,
    rank: usize,
    samples: usize,
    radius: usize,
    factors: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let (_, core) = r.reduced().cyclic_reduce();
    if !core.contains_gen(gen) {
        return Err(Error::Precondition(format!(
            "generator {} does not occur in the cyclically reduced relator",
            gen + 1
        )));
    }
    support_probe(r, gen, rank, samples, radius, factors, seed)
}

/// The sampling loop without the support precondition.
pub fn support_probe(
    r: &Word,
    gen: usize,
    rank: usize,
    samples: usize,
    radius: usize,
    factors: usize,
    seed: u64,
) -> Result<ProbeReport> {
    if factors == 0 {
        return Err(Error::InvalidParameter("factor count must be >= 1".into()));
    }
    let r = r.reduced();
    let rank = rank.max(r.max_gen().map_or(0, |g| g + 1)).max(gen + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProbeReport {
        relator: r.clone(),
        generator: gen,
        rank,
        samples,
        radius,
        factors,
        seed,
        trivial_skipped: 0,
        counterexamples: Vec::new(),
    };
    let r_inv = r.inverse();
    for _ in 0..samples {
        let k = rng.gen_range(1..=factors);
        let mut acc = Word::identity();
        for _ in 0..k {
            let len = rng.gen_range(0..=radius);
            let t = random_reduced_word(&mut rng, rank, len);
            let base = if rng.gen_bool(0.5) { &r_inv } else { &r };
            acc = acc.mul(&base.conjugate_by(&t));
        }
        if acc.is_empty() {
            report.trivial_skipped += 1;
        } else if !acc.contains_gen(gen) {
            report.counterexamples.push(acc);
        }
    }
    Ok(report)
}
