//! Nielsen transformations and reduction of tuples of free-group words.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordTuple {
    entries: Vec<Word>,
}

impl WordTuple {
    pub fn new(entries: Vec<Word>) -> Self {
        WordTuple {
            entries: entries.iter().map(Word::reduced).collect(),
        }
    }

    pub fn entries(&self) -> &[Word] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.entries.iter().map(Word::len).sum()
    }

    pub fn apply(&mut self, mv: &NielsenMove) {
        mv.apply(&mut self.entries);
    }
}

/// Elementary Nielsen moves; `inverse` selects `u_by^-1` over `u_by`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NielsenMove {
    Swap(usize, usize),
    Invert(usize),
    /// `u_target <- u_target · u_by^{±1}`
    RightMul { target: usize, by: usize, inverse: bool },
    /// `u_target <- u_by^{±1} · u_target`
    LeftMul { target: usize, by: usize, inverse: bool },
}

impl NielsenMove {
    pub fn apply(&self, entries: &mut [Word]) {
        match *self {
            NielsenMove::Swap(i, j) => entries.swap(i, j),
            NielsenMove::Invert(i) => entries[i] = entries[i].inverse(),
            NielsenMove::RightMul { target, by, inverse } => {
                entries[target] = entries[target].mul(&signed(&entries[by], inverse));
            }
            NielsenMove::LeftMul { target, by, inverse } => {
                entries[target] = signed(&entries[by], inverse).mul(&entries[target]);
            }
        }
    }

    /// Rewrites a word over tuple positions so that it keeps its value after
    /// this move is applied to the tuple.
    fn pull_back(&self, expr: &Word, width: usize) -> Word {
        let mut images: Vec<Word> = (0..width).map(Word::gen).collect();
        match *self {
            NielsenMove::Swap(i, j) => images.swap(i, j),
            NielsenMove::Invert(i) => images[i] = Word::gen(i).inverse(),
            NielsenMove::RightMul { target, by, inverse } => {
                images[target] = Word::gen(target).mul(&signed(&Word::gen(by), !inverse));
            }
            NielsenMove::LeftMul { target, by, inverse } => {
                images[target] = signed(&Word::gen(by), !inverse).mul(&Word::gen(target));
            }
        }
        expr.substitute(&images)
    }
}

fn signed(w: &Word, inverse: bool) -> Word {
    if inverse {
        w.inverse()
    } else {
        w.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NielsenReduction {
    pub reduced: WordTuple,
    pub log: Vec<NielsenMove>,
    /// `expressions[k]` writes original entry `k` as a word in the reduced
    /// entries (generator `i` stands for reduced entry `i`).
    pub expressions: Vec<Word>,
}

/// Shortlex order on letter sequences.
fn shortlex(a: &Word, b: &Word) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.letters().cmp(b.letters()))
}

/// The lesser of `w` and `w^-1` in shortlex order.
fn sym_key(w: &Word) -> Word {
    let inv = w.inverse();
    if shortlex(&inv, w) == Ordering::Less {
        inv
    } else {
        w.clone()
    }
}

fn candidates(target: usize, by: usize) -> [NielsenMove; 4] {
    [
        NielsenMove::RightMul { target, by, inverse: false },
        NielsenMove::RightMul { target, by, inverse: true },
        NielsenMove::LeftMul { target, by, inverse: false },
        NielsenMove::LeftMul { target, by, inverse: true },
    ]
}

fn preview(entries: &[Word], mv: &NielsenMove) -> Word {
    match *mv {
        NielsenMove::RightMul { target, by, inverse } => entries[target].mul(&signed(&entries[by], inverse)),
        NielsenMove::LeftMul { target, by, inverse } => signed(&entries[by], inverse).mul(&entries[target]),
        _ => unreachable!("only products are previewed"),
    }
}

/// Scans pairs `(i, j)` in index order and applies the first move that
/// strictly shortens `u_i`. When none exists, applies the first length-preserving
/// move that lowers `u_i` in the symmetric shortlex order. Repeats until
/// neither kind of move applies, then inverts entries whose inverse is
/// shortlex-smaller.
pub fn nielsen_reduce(t: &WordTuple) -> NielsenReduction {
    let width = t.len();
    let mut entries = t.entries.clone();
    let mut log = Vec::new();

    'outer: loop {
        for i in 0..width {
            for j in 0..width {
                if i == j || entries[j].is_empty() {
                    continue;
                }
                for mv in candidates(i, j) {
                    if preview(&entries, &mv).len() < entries[i].len() {
                        mv.apply(&mut entries);
                        log.push(mv);
                        continue 'outer;
                    }
                }
            }
        }
        for i in 0..width {
            let key = sym_key(&entries[i]);
            for j in 0..width {
                if i == j || entries[j].is_empty() {
                    continue;
                }
                for mv in candidates(i, j) {
                    let next = preview(&entries, &mv);
                    if next.len() == entries[i].len() && shortlex(&sym_key(&next), &key) == Ordering::Less {
                        mv.apply(&mut entries);
                        log.push(mv);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    for i in 0..width {
        let inv = entries[i].inverse();
        if shortlex(&inv, &entries[i]) == Ordering::Less {
            let mv = NielsenMove::Invert(i);
            mv.apply(&mut entries);
            log.push(mv);
        }
    }

    let mut expressions: Vec<Word> = (0..width).map(Word::gen).collect();
    for mv in &log {
        for e in expressions.iter_mut() {
            *e = mv.pull_back(e, width);
        }
    }
    NielsenReduction {
        reduced: WordTuple { entries },
        log,
        expressions,
    }
}

pub fn replay(t: &WordTuple, log: &[NielsenMove]) -> WordTuple {
    let mut out = t.clone();
    for mv in log {
        out.apply(mv);
    }
    out
}

/// Does the `rank`-tuple `t` generate (hence freely generate) `F_rank`?
pub fn is_basis(t: &WordTuple, rank: usize) -> Result<bool> {
    if t.len() != rank {
        return Err(Error::TupleLength { got: t.len(), rank });
    }
    let red = nielsen_reduce(t);
    let mut seen = vec![false; rank];
    for w in red.reduced.entries() {
        match w.letters() {
            [Letter { gen, .. }] if *gen < rank && !seen[*gen] => seen[*gen] = true,
            _ => return Ok(false),
        }
    }
    Ok(true)
}
