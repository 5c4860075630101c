//! Free-group words over an ordered finite alphabet.
//!
//! A [`Word`] is a plain sequence of signed generator letters. Nothing forces
//! it to be freely reduced; [`Word::reduced`] produces the unique reduced
//! representative, and every group operation (`mul`, `pow`, `commutator`,
//! ...) returns reduced output.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator index together with its exponent sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn pos(gen: usize) -> Self {
        Letter { gen, inv: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inv: true }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }

    pub fn sign(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Wraps a raw letter sequence without reducing it.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from signed 1-based generator numbers: `[1, -2]` is `x1 x2^-1`.
    pub fn from_signed(ints: &[i64]) -> Self {
        Word(
            ints.iter()
                .map(|&i| {
                    assert!(i != 0, "generator numbers are 1-based");
                    Letter::new(i.unsigned_abs() as usize - 1, i < 0)
                })
                .collect(),
        )
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Free reduction via a cancellation stack.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) if self.0.len() > 1 => !f.cancels(l),
                _ => true,
            }
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters).reduced()
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.reduced() };
        let mut letters = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(&base.0);
        }
        Word(letters).reduced()
    }

    /// `[u, v] = u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        Word::product([u.clone(), v.clone(), u.inverse(), v.inverse()].iter())
    }

    /// `t w t^-1`.
    pub fn conjugate_by(&self, t: &Word) -> Word {
        Word::product([t.clone(), self.clone(), t.inverse()].iter())
    }

    pub fn product<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut letters = Vec::new();
        for p in parts {
            letters.extend_from_slice(&p.0);
        }
        Word(letters).reduced()
    }

    /// Splits the reduced form as `conjugator · core · conjugator^-1` with a
    /// cyclically reduced core.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let r = self.reduced();
        let letters = &r.0;
        let n = letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && letters[k].cancels(letters[n - 1 - k]) {
            k += 1;
        }
        (
            Word(letters[..k].to_vec()),
            Word(letters[k..n - k].to_vec()),
        )
    }

    /// Generators occurring in the reduced form.
    pub fn support(&self) -> BTreeSet<usize> {
        self.reduced().0.iter().map(|l| l.gen).collect()
    }

    pub fn contains_gen(&self, g: usize) -> bool {
        self.support().contains(&g)
    }

    /// Exponent sum per generator, over `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for l in &self.0 {
            if l.gen < n {
                v[l.gen] += l.sign();
            }
        }
        v
    }

    /// Largest generator index in use, if any.
    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Deletes every occurrence of `g` and shifts higher generator indices down.
    pub fn eliminate_gen(&self, g: usize) -> Word {
        Word(
            self.0
                .iter()
                .filter(|l| l.gen != g)
                .map(|l| Letter::new(if l.gen > g { l.gen - 1 } else { l.gen }, l.inv))
                .collect(),
        )
        .reduced()
    }

    /// Renames generators: letter `g` becomes `map[g]`.
    pub fn relabel(&self, map: &[usize]) -> Word {
        Word(self.0.iter().map(|l| Letter::new(map[l.gen], l.inv)).collect())
    }

    /// Applies the free-group homomorphism sending generator `g` to `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut letters = Vec::new();
        for l in &self.0 {
            let img = &images[l.gen];
            if l.inv {
                letters.extend(img.inverse().into_letters());
            } else {
                letters.extend_from_slice(&img.0);
            }
        }
        Word(letters).reduced()
    }

    /// Shifts all generator indices by `offset`.
    pub fn shifted(&self, offset: usize) -> Word {
        Word(self.0.iter().map(|l| Letter::new(l.gen + offset, l.inv)).collect())
    }

    /// Equality of cyclic cores up to rotation, i.e. conjugacy in the free group.
    pub fn conjugate_equivalent(&self, other: &Word) -> bool {
        let (_, a) = self.cyclic_reduce();
        let (_, b) = other.cyclic_reduce();
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let n = a.len();
        (0..n).any(|s| (0..n).all(|i| a.0[(i + s) % n] == b.0[i]))
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Uniformly random freely reduced word of exactly `len` letters over `n` generators.
pub fn random_reduced_word<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize) -> Word {
    assert!(n > 0);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(0..n), rng.gen_bool(0.5));
        if letters.last().is_some_and(|&p| p.cancels(l)) {
            continue;
        }
        letters.push(l);
    }
    Word(letters)
}

/// One factor `t · r_j^{±1} · t^-1` of a product of conjugates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConjugateFactor {
    pub conjugator: Word,
    pub relator: usize,
    pub inverse: bool,
}

/// A product of conjugates of relators, identified by index.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConjugateProduct {
    pub factors: Vec<ConjugateFactor>,
}

impl ConjugateProduct {
    pub fn new(factors: Vec<ConjugateFactor>) -> Self {
        ConjugateProduct { factors }
    }

    pub fn push(&mut self, conjugator: Word, relator: usize, inverse: bool) {
        self.factors.push(ConjugateFactor {
            conjugator,
            relator,
            inverse,
        });
    }

    pub fn evaluate(&self, relators: &[Word]) -> Result<Word> {
        let mut acc = Word::identity();
        for f in &self.factors {
            let r = relators.get(f.relator).ok_or(Error::IndexOutOfRange {
                index: f.relator,
                len: relators.len(),
            })?;
            let r = if f.inverse { r.inverse() } else { r.clone() };
            acc = acc.mul(&r.conjugate_by(&f.conjugator));
        }
        Ok(acc)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|f| {
                let r = format!("r{}{}", f.relator + 1, if f.inverse { "^-1" } else { "" });
                if f.conjugator.is_empty() {
                    r
                } else {
                    let t = alphabet.format(&f.conjugator);
                    format!("({t}) {r} ({t})^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

/// Ordered list of distinct generator names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    names: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;
    fn try_from(names: Vec<String>) -> Result<Self> {
        Alphabet::new(names)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.names
    }
}

fn valid_gen_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut a = Alphabet::default();
        for n in names {
            a.push(n.into())?;
        }
        Ok(a)
    }

    /// `x1, ..., xn`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        Alphabet::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("distinct names")
    }

    pub fn push(&mut self, name: String) -> Result<usize> {
        if !valid_gen_name(&name) {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("invalid generator name `{name}`"),
            });
        }
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateGenerator(name));
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn parse_word(&self, src: &str) -> Result<Word> {
        let mut p = Parser::new(src, |name: &str| {
            self.lookup(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
        });
        p.parse_all()
    }

    /// Parses `src`, appending any generator not yet in the alphabet.
    pub fn parse_word_extending(&mut self, src: &str) -> Result<Word> {
        let mut p = Parser::new(src, |name: &str| match self.lookup(name) {
            Some(i) => Ok(i),
            None => self.push(name.to_string()),
        });
        p.parse_all()
    }

    /// Removes generator `g`, shifting later indices down.
    pub fn without(&self, g: usize) -> Alphabet {
        Alphabet::new(
            self.names
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != g)
                .map(|(_, n)| n.clone()),
        )
        .expect("subset of a valid alphabet")
    }

    /// Reorders: new position `i` holds old generator `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Alphabet {
        Alphabet::new(order.iter().map(|&g| self.names[g].clone())).expect("permutation")
    }

    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            let name = self
                .names
                .get(l.gen)
                .cloned()
                .unwrap_or_else(|| format!("x{}", l.gen + 1));
            let exp = run as i64 * l.sign();
            parts.push(if exp == 1 {
                name
            } else {
                format!("{name}^{exp}")
            });
            i += run;
        }
        parts.join(" ")
    }
}

/// Checks that all parts share one alphabet and returns their reduced product.
pub fn compose<'a>(parts: impl IntoIterator<Item = (&'a Alphabet, &'a Word)>) -> Result<Word> {
    let mut alphabet: Option<&Alphabet> = None;
    let mut acc = Word::identity();
    for (a, w) in parts {
        match alphabet {
            Some(prev) if prev.names() != a.names() => return Err(Error::AlphabetMismatch),
            _ => alphabet = Some(a),
        }
        if w.max_gen().is_some_and(|g| g >= a.len()) {
            return Err(Error::AlphabetMismatch);
        }
        acc = acc.mul(w);
    }
    Ok(acc)
}

struct Parser<'s, F> {
    src: &'s str,
    bytes: &'s [u8],
    pos: usize,
    resolve: F,
}

impl<'s, F: FnMut(&str) -> Result<usize>> Parser<'s, F> {
    fn new(src: &'s str, resolve: F) -> Self {
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            resolve,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn parse_all(&mut self) -> Result<Word> {
        let w = self.word()?;
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(w)
    }

    fn word(&mut self) -> Result<Word> {
        let mut letters = Vec::new();
        let mut terms = 0;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphabetic() || c == b'[' || c == b'(' || c == b'1' {
                letters.extend(self.term()?.into_letters());
                terms += 1;
            } else {
                break;
            }
        }
        if terms == 0 {
            return self.err("expected a word");
        }
        Ok(Word::from_letters(letters))
    }

    fn term(&mut self) -> Result<Word> {
        let base = match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b']')?;
                let mut letters = u.letters().to_vec();
                letters.extend_from_slice(v.letters());
                letters.extend(u.inverse().into_letters());
                letters.extend(v.inverse().into_letters());
                Word::from_letters(letters)
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                w
            }
            Some(b'1') => {
                self.pos += 1;
                Word::identity()
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                let g = (self.resolve)(name)?;
                Word::gen(g)
            }
            _ => return self.err("expected a generator, `[`, `(` or `1`"),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.int()?;
            let unit = if e < 0 { base.inverse() } else { base };
            let mut letters = Vec::new();
            for _ in 0..e.unsigned_abs() {
                letters.extend_from_slice(unit.letters());
            }
            return Ok(Word::from_letters(letters));
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.bytes.len() && (self.bytes[self.pos] == b'-' || self.bytes[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        match self.src[start..self.pos].parse::<i64>() {
            Ok(v) if v.unsigned_abs() <= 10_000 => Ok(v),
            Ok(_) => {
                self.pos = start;
                self.err("exponent too large")
            }
            Err(_) => {
                self.pos = start;
                self.err("expected an integer exponent")
            }
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| format!("x{}{}", l.gen + 1, if l.inv { "^-1" } else { "" }))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn w(s: &str) -> Word {
        ab().parse_word(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("a a^-1").reduced(), Word::identity());
        assert_eq!(w("a b b^-1 a").reduced(), w("a a"));
        let c = w("a b a^-1 b^-1");
        assert_eq!(c.reduced(), c);
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("a b a^-1").cyclic_reduce(), (w("a"), w("b")));
        assert_eq!(w("a b a b").cyclic_reduce(), (Word::identity(), w("a b a b")));
        let (c, core) = w("a^-1 [a,b] a").cyclic_reduce();
        assert_eq!(c, Word::identity());
        assert_eq!(core, w("b a^-1 b^-1 a"));
        assert_eq!(w("a a^-1").cyclic_reduce(), (Word::identity(), Word::identity()));
    }

    #[test]
    fn support_examples() {
        assert_eq!(w("[a,b]").support(), [0, 1].into_iter().collect());
        assert_eq!(w("a b b^-1 a").support(), [0].into_iter().collect());
        assert!(Word::identity().support().is_empty());
    }

    #[test]
    fn compose_examples() {
        let a = Word::gen(0);
        let b = Word::gen(1);
        assert_eq!(Word::commutator(&a, &b), w("a b a^-1 b^-1"));
        assert_eq!(w("a b").inverse(), w("b^-1 a^-1"));
        let al = Alphabet::new(["a1", "b1", "a2", "b2"]).unwrap();
        let h = al.parse_word("[a1,b1][a2,b2]").unwrap().reduced();
        assert_eq!(h.len(), 8);
        assert!(h.is_reduced());
    }

    #[test]
    fn compose_rejects_mismatched_alphabets() {
        let a = ab();
        let c = Alphabet::new(["a", "c"]).unwrap();
        let x = Word::gen(0);
        assert_eq!(compose([(&a, &x), (&c, &x)]), Err(Error::AlphabetMismatch));
        assert_eq!(compose([(&a, &x), (&a, &x)]).unwrap(), w("a^2"));
    }

    #[test]
    fn grammar() {
        let mut al = Alphabet::default();
        let h = al.parse_word_extending("[a1,h] h^-3 (a1 h)^2 1").unwrap();
        assert_eq!(al.names(), &["a1".to_string(), "h".to_string()]);
        assert_eq!(al.format(&h.reduced()), "a1 h a1^-1 h^-4 a1 h a1 h");
        assert!(ab().parse_word("a c").is_err());
        assert!(ab().parse_word("a ^").is_err());
        assert!(ab().parse_word("[a b]").is_err());
        assert!(ab().parse_word("").is_err());
        assert_eq!(w("(a b)^-2"), w("b^-1 a^-1 b^-1 a^-1"));
        assert_eq!(w("[a,[a,b]]").reduced().len(), 10);
    }

    #[test]
    fn conjugate_equivalence() {
        assert!(w("a b b").conjugate_equivalent(&w("b a b")));
        assert!(w("b a b b^-1 a^-1").conjugate_equivalent(&w("b")));
        assert!(!w("a b").conjugate_equivalent(&w("a b^-1")));
    }

    #[test]
    fn conjugate_product_evaluates() {
        let rels = vec![w("[a,b]")];
        let mut cp = ConjugateProduct::default();
        cp.push(w("a"), 0, false);
        cp.push(Word::identity(), 0, false);
        assert_eq!(cp.evaluate(&rels).unwrap(), w("[a^2,b]").reduced());
        cp.push(Word::identity(), 3, false);
        assert!(cp.evaluate(&rels).is_err());
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..3, any::<bool>()), 0..16)
            .prop_map(|v| v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
    }

    proptest! {
        #[test]
        fn reduce_idempotent_and_shrinking(x in word_strategy()) {
            let r = x.reduced();
            prop_assert!(r.len() <= x.len());
            prop_assert_eq!(r.reduced(), r.clone());
            prop_assert!(r.is_reduced());
            prop_assert!(x.support().is_subset(&x.letters().iter().map(|l| l.gen).collect()));
        }

        #[test]
        fn group_axioms(x in word_strategy(), y in word_strategy(), z in word_strategy()) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert!(x.mul(&x.inverse()).is_empty());
            prop_assert_eq!(x.inverse().inverse(), x.clone());
            prop_assert_eq!(Word::commutator(&x, &y).inverse(), Word::commutator(&y, &x));
        }

        #[test]
        fn cyclic_core_reassembles(x in word_strategy()) {
            let (c, core) = x.cyclic_reduce();
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(core.conjugate_by(&c), x.reduced());
            prop_assert_eq!(core.is_empty(), x.reduced().is_empty());
            prop_assert!(core.support().is_subset(&x.support()));
        }

        #[test]
        fn format_parse_roundtrip(x in word_strategy()) {
            let al = Alphabet::new(["a", "b", "c"]).unwrap();
            let r = x.reduced();
            prop_assert_eq!(al.parse_word(&al.format(&r)).unwrap().reduced(), r);
        }
    }
}
