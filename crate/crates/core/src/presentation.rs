//! Finite group presentations: deficiency, abelianization, Tietze moves, the
//! Ω invariant and the standard builders.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::snf::smith_normal_form;
use crate::word::{Alphabet, ConjugateProduct, Word};

/// `⟨ x1, ..., xn | r1, ..., rm ⟩`. Relators are stored freely reduced;
/// generator and relator order both matter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

/// `Z^free_rank + Z/d1 + Z/d2 + ...` with `d1 | d2 | ...`, each `di >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A reordering of a presentation: new generator `i` is old `generators[i]`,
/// new relator `j` is old `relators[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ordering {
    pub generators: Vec<usize>,
    pub relators: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaSearch {
    pub omega: usize,
    pub witness: Ordering,
    /// True when every generator ordering was examined.
    pub certified: bool,
    pub steps: u64,
    pub seed: u64,
}

/// Both directions of a relator replacement: `forward` writes the new relator
/// over the old relators, `backward` writes the old relator over the new ones.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplacementWitness {
    pub forward: ConjugateProduct,
    pub backward: ConjugateProduct,
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        let n = alphabet.len();
        for r in &relators {
            if r.max_gen().is_some_and(|g| g >= n) {
                return Err(Error::AlphabetMismatch);
            }
        }
        Ok(Presentation {
            alphabet,
            relators: relators.iter().map(Word::reduced).collect(),
        })
    }

    /// Parses `gens: a, b, h ; rels: [a,h], [b,h], [a,b] h^-1`.
    pub fn parse(src: &str) -> Result<Self> {
        let (gens_part, rels_part) = match src.find(';') {
            Some(i) => (&src[..i], &src[i + 1..]),
            None => (src, ""),
        };
        let gens_body = strip_key(gens_part, "gens").ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "expected `gens:`".into(),
        })?;
        let names: Vec<String> = gens_body
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        let alphabet = Alphabet::new(names)?;
        let rels_body = if rels_part.trim().is_empty() {
            ""
        } else {
            strip_key(rels_part, "rels").ok_or_else(|| Error::Parse {
                pos: src.len() - rels_part.len(),
                msg: "expected `rels:`".into(),
            })?
        };
        let relators = split_top_level(rels_body)
            .into_iter()
            .map(|s| alphabet.parse_word(s))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(alphabet, relators)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn deficiency(&self) -> i64 {
        self.rank() as i64 - self.relator_count() as i64
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| r.exponent_sums(self.rank())).collect()
    }

    pub fn abelianize(&self) -> AbelianInvariants {
        let n = self.rank();
        if self.relators.is_empty() {
            return AbelianInvariants {
                free_rank: n,
                torsion: vec![],
            };
        }
        let s = smith_normal_form(&self.relation_matrix());
        AbelianInvariants {
            free_rank: s.cokernel_free_rank(),
            torsion: s.torsion(),
        }
    }

    /// Least Ω in `1..=n` such that relator `i` (1-based) is a word in the
    /// first `Ω + i - 1` generators for every `i <= min(n - Ω, m)`.
    pub fn omega_fixed(&self) -> Result<usize> {
        if self.relators.is_empty() {
            return Err(Error::FreePresentation);
        }
        let needs: Vec<usize> = self.relators.iter().map(prefix_need).collect();
        Ok(omega_from_needs(&needs, self.rank()))
    }

    /// Minimises Ω over generator and relator orderings.
    ///
    /// For a fixed generator order the best relator order sorts relators by the
    /// length of generator prefix they need, so only generator orders are
    /// enumerated. Exhaustive when `n! <= budget`; otherwise random orders are
    /// sampled (seeded) and the result is an uncertified upper bound.
    pub fn omega_search(&self, budget: u64, seed: u64) -> Result<OmegaSearch> {
        if self.relators.is_empty() {
            return Err(Error::FreePresentation);
        }
        let n = self.rank();
        let supports: Vec<BTreeSet<usize>> = self.relators.iter().map(Word::support).collect();
        let evaluate = |order: &[usize]| -> (usize, Vec<usize>) {
            let mut pos = vec![0; n];
            for (p, &g) in order.iter().enumerate() {
                pos[g] = p;
            }
            let needs: Vec<usize> = supports
                .iter()
                .map(|s| s.iter().map(|&g| pos[g] + 1).max().unwrap_or(0))
                .collect();
            let mut rel_order: Vec<usize> = (0..needs.len()).collect();
            rel_order.sort_by_key(|&j| needs[j]);
            let sorted: Vec<usize> = rel_order.iter().map(|&j| needs[j]).collect();
            (omega_from_needs(&sorted, n), rel_order)
        };

        let exhaustive = factorial_at_most(n, budget);
        let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
        let mut steps = 0u64;
        let consider = |order: &[usize], best: &mut Option<(usize, Vec<usize>, Vec<usize>)>| {
            let (om, rels) = evaluate(order);
            if best.as_ref().is_none_or(|b| om < b.0) {
                *best = Some((om, order.to_vec(), rels));
            }
        };
        if exhaustive {
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                steps += 1;
                consider(&perm, &mut best);
                if best.as_ref().is_some_and(|b| b.0 == 1) || !next_permutation(&mut perm) {
                    break;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let identity: Vec<usize> = (0..n).collect();
            steps += 1;
            consider(&identity, &mut best);
            let mut perm = identity;
            while steps < budget && best.as_ref().is_none_or(|b| b.0 > 1) {
                perm.shuffle(&mut rng);
                steps += 1;
                consider(&perm, &mut best);
            }
        }
        let (omega, generators, relators) = best.expect("at least one ordering evaluated");
        Ok(OmegaSearch {
            omega,
            witness: Ordering {
                generators,
                relators,
            },
            certified: exhaustive,
            steps,
            seed,
        })
    }

    pub fn reordered(&self, ordering: &Ordering) -> Result<Presentation> {
        let n = self.rank();
        check_permutation(&ordering.generators, n)?;
        check_permutation(&ordering.relators, self.relator_count())?;
        let mut new_index = vec![0; n];
        for (p, &g) in ordering.generators.iter().enumerate() {
            new_index[g] = p;
        }
        Ok(Presentation {
            alphabet: self.alphabet.permuted(&ordering.generators),
            relators: ordering
                .relators
                .iter()
                .map(|&j| self.relators[j].relabel(&new_index))
                .collect(),
        })
    }

    /// Appends a fresh generator and the relator killing it.
    pub fn with_trivial_generator(&self, name: &str) -> Result<Presentation> {
        let mut alphabet = self.alphabet.clone();
        let g = alphabet.push(name.to_string())?;
        let mut relators = self.relators.clone();
        relators.push(Word::gen(g));
        Presentation::new(alphabet, relators)
    }

    /// Deletes the generator `x` named by a relator `x^{±1}` together with that
    /// relator, setting `x = 1` in the remaining relators.
    pub fn tietze_remove_trivial_generator(&self, i: usize) -> Result<Presentation> {
        let r = self.relators.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.relators.len(),
        })?;
        if r.len() != 1 {
            return Err(Error::NotSingleLetter(i));
        }
        let g = r.letters()[0].gen;
        let relators = self
            .relators
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, w)| w.eliminate_gen(g))
            .collect();
        Ok(Presentation {
            alphabet: self.alphabet.without(g),
            relators,
        })
    }

    /// Replaces relator `i` by `new` after checking both directions of the
    /// witness by exact evaluation in the free group.
    pub fn tietze_replace_relator(
        &self,
        i: usize,
        new: &Word,
        witness: &ReplacementWitness,
    ) -> Result<Presentation> {
        if i >= self.relators.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.relators.len(),
            });
        }
        if new.max_gen().is_some_and(|g| g >= self.rank()) {
            return Err(Error::AlphabetMismatch);
        }
        let new = new.reduced();
        let forward = witness.forward.evaluate(&self.relators)?;
        if forward != new {
            return Err(Error::WitnessRejected(format!(
                "forward witness evaluates to {}, expected {}",
                self.alphabet.format(&forward),
                self.alphabet.format(&new)
            )));
        }
        let mut relators = self.relators.clone();
        let old = std::mem::replace(&mut relators[i], new);
        let backward = witness.backward.evaluate(&relators)?;
        if backward != old {
            return Err(Error::WitnessRejected(format!(
                "backward witness evaluates to {}, expected {}",
                self.alphabet.format(&backward),
                self.alphabet.format(&old)
            )));
        }
        Ok(Presentation {
            alphabet: self.alphabet.clone(),
            relators,
        })
    }

    /// Same generators, and relators that match one-to-one up to conjugacy.
    pub fn equivalent_relators(&self, other: &Presentation) -> bool {
        if self.alphabet.names() != other.alphabet.names()
            || self.relators.len() != other.relators.len()
        {
            return false;
        }
        let mut used = vec![false; other.relators.len()];
        self.relators.iter().all(|r| {
            let hit = other
                .relators
                .iter()
                .enumerate()
                .find(|&(j, s)| !used[j] && r.conjugate_equivalent(s));
            match hit {
                Some((j, _)) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }

    // ---- builders -------------------------------------------------------

    /// `⟨ a1, b1, ..., ag, bg | Π [ai, bi] ⟩`.
    pub fn surface_group(g: usize) -> Result<Presentation> {
        if g == 0 {
            return Err(Error::InvalidParameter("surface genus must be >= 1".into()));
        }
        let alphabet = surface_alphabet(g, false);
        Presentation::new(alphabet, vec![surface_word(g)])
    }

    /// Circle bundle over the genus-`g` surface with Euler number `e`:
    /// generators `a1, b1, ..., ag, bg, h`, relators `[ai,h], [bi,h]` and
    /// `Π [ai,bi] · h^-e`.
    pub fn circle_bundle(g: usize, e: i64) -> Result<Presentation> {
        if g == 0 {
            return Err(Error::InvalidParameter("base genus must be >= 1".into()));
        }
        let alphabet = surface_alphabet(g, true);
        let h = Word::gen(2 * g);
        let mut relators = Vec::with_capacity(2 * g + 1);
        for i in 0..g {
            relators.push(Word::commutator(&Word::gen(2 * i), &h));
            relators.push(Word::commutator(&Word::gen(2 * i + 1), &h));
        }
        relators.push(surface_word(g).mul(&h.pow(-e)));
        Presentation::new(alphabet, relators)
    }

    /// The rank-2g presentation for `e = ±1`: `h` is eliminated as `Π [ai,bi]`
    /// and the relators are `[ai, h^e], [bi, h^e]`.
    pub fn circle_bundle_rank2g(g: usize, e: i64) -> Result<Presentation> {
        if g == 0 {
            return Err(Error::InvalidParameter("base genus must be >= 1".into()));
        }
        if e.abs() != 1 {
            return Err(Error::InvalidParameter("rank-2g presentation needs e = ±1".into()));
        }
        let alphabet = surface_alphabet(g, false);
        let he = surface_word(g).pow(e);
        let mut relators = Vec::with_capacity(2 * g);
        for i in 0..g {
            relators.push(Word::commutator(&Word::gen(2 * i), &he));
            relators.push(Word::commutator(&Word::gen(2 * i + 1), &he));
        }
        Presentation::new(alphabet, relators)
    }

    /// `⟨ x | x^p ⟩`.
    pub fn lens(p: u64) -> Result<Presentation> {
        if p == 0 {
            return Err(Error::InvalidParameter("lens order must be >= 1".into()));
        }
        Presentation::new(Alphabet::new(["x"])?, vec![Word::gen(0).pow(p as i64)])
    }

    /// Disjoint union of presentations; clashing generator names on the right
    /// get a numeric suffix.
    pub fn free_product(p: &Presentation, q: &Presentation) -> Result<Presentation> {
        let mut alphabet = p.alphabet.clone();
        for name in q.alphabet.names() {
            let mut candidate = name.clone();
            let mut k = 2;
            while alphabet.lookup(&candidate).is_some() {
                candidate = format!("{name}_{k}");
                k += 1;
            }
            alphabet.push(candidate)?;
        }
        let offset = p.rank();
        let mut relators = p.relators.clone();
        relators.extend(q.relators.iter().map(|r| r.shifted(offset)));
        Presentation::new(alphabet, relators)
    }

    /// One generator per handle of a genus-`alphabet.len()` handlebody and one
    /// relator per attaching word.
    pub fn heegaard_presentation(alphabet: Alphabet, attaching_words: Vec<Word>) -> Result<Presentation> {
        if attaching_words.len() > alphabet.len() {
            return Err(Error::InvalidParameter(format!(
                "{} attaching curves on a genus-{} surface",
                attaching_words.len(),
                alphabet.len()
            )));
        }
        Presentation::new(alphabet, attaching_words)
    }

    pub fn format(&self) -> String {
        let rels: Vec<String> = self.relators.iter().map(|r| self.alphabet.format(r)).collect();
        format!("gens: {} ; rels: {}", self.alphabet.names().join(", "), rels.join(", "))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// Attaching curves of the genus-(2g+1) splitting of the circle bundle, in the
/// handle order `h, a1..ag, b1..bg` and curve order `α1..αg, γ, β1..βg`:
/// `αi = [ai,h]`, `βi = [bi,h]`, `γ = h^-e · Π [ai,bi]`.
pub fn circle_bundle_attaching_words(g: usize, e: i64) -> Result<(Alphabet, Vec<Word>)> {
    if g == 0 {
        return Err(Error::InvalidParameter("base genus must be >= 1".into()));
    }
    let mut names = vec!["h".to_string()];
    names.extend((1..=g).map(|i| format!("a{i}")));
    names.extend((1..=g).map(|i| format!("b{i}")));
    let alphabet = Alphabet::new(names)?;
    let h = Word::gen(0);
    let a = |i: usize| Word::gen(1 + i);
    let b = |i: usize| Word::gen(1 + g + i);
    let mut words = Vec::with_capacity(2 * g + 1);
    for i in 0..g {
        words.push(Word::commutator(&a(i), &h));
    }
    let mut gamma = h.pow(-e);
    for i in 0..g {
        gamma = gamma.mul(&Word::commutator(&a(i), &b(i)));
    }
    words.push(gamma);
    for i in 0..g {
        words.push(Word::commutator(&b(i), &h));
    }
    Ok((alphabet, words))
}

fn surface_alphabet(g: usize, with_h: bool) -> Alphabet {
    let mut names: Vec<String> = (1..=g).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect();
    if with_h {
        names.push("h".into());
    }
    Alphabet::new(names).expect("distinct names")
}

/// `Π [a_i, b_i]` over generators `a_i = 2i`, `b_i = 2i+1`.
fn surface_word(g: usize) -> Word {
    let parts: Vec<Word> = (0..g)
        .map(|i| Word::commutator(&Word::gen(2 * i), &Word::gen(2 * i + 1)))
        .collect();
    Word::product(parts.iter())
}

/// Length of the shortest generator prefix containing the relator's support.
fn prefix_need(r: &Word) -> usize {
    r.support().iter().next_back().map_or(0, |&g| g + 1)
}

fn omega_from_needs(needs: &[usize], n: usize) -> usize {
    (1..=n)
        .find(|&omega| {
            let span = (n - omega).min(needs.len());
            (0..span).all(|i| needs[i] <= omega + i)
        })
        .unwrap_or(n)
}

fn factorial_at_most(n: usize, budget: u64) -> bool {
    let mut f: u64 = 1;
    for k in 2..=n as u64 {
        f = match f.checked_mul(k) {
            Some(v) => v,
            None => return false,
        };
        if f > budget {
            return false;
        }
    }
    true
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn check_permutation(p: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(Error::InvalidParameter(format!("ordering of length {} for {n} items", p.len())));
    }
    for &x in p {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidParameter("ordering is not a permutation".into()));
        }
    }
    Ok(())
}

fn strip_key<'a>(s: &'a str, key: &str) -> Option<&'a str> {
    let t = s.trim_start();
    let rest = t.strip_prefix(key)?;
    rest.trim_start().strip_prefix(':')
}

/// Splits on commas that are not nested inside brackets or parentheses.
pub fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|p| !p.is_empty());
    out
}
