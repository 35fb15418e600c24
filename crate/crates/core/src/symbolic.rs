//! Finite words, cylinders and eventually periodic points of `X^N`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// The letters `0..size`. Sizes are capped at ten so that every letter is a
/// single decimal digit in the text encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet(u8);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: usize) -> Result<Self> {
        if (2..=10).contains(&size) {
            Ok(Alphabet(size as u8))
        } else {
            Err(Error::InvalidAlphabet(size))
        }
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn letters(self) -> impl Iterator<Item = u8> + Clone {
        0..self.0
    }

    pub fn check(self, letter: u8) -> Result<()> {
        if letter < self.0 {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                letter,
                size: self.size(),
            })
        }
    }

    fn parse_letter(self, c: char) -> Result<u8> {
        let d = c
            .to_digit(10)
            .ok_or_else(|| Error::Parse(alloc::format!("unexpected character {c:?}")))?;
        self.check(d as u8)?;
        Ok(d as u8)
    }

    pub(crate) fn same(self, other: Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }
}

/// A finite word over an [`Alphabet`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(alphabet: Alphabet, letters: Vec<u8>) -> Result<Self> {
        for &l in &letters {
            alphabet.check(l)?;
        }
        Ok(Word { alphabet, letters })
    }

    /// Callers guarantee that every letter is in range.
    pub(crate) fn from_raw(alphabet: Alphabet, letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&l| l < alphabet.0));
        Word { alphabet, letters }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    /// Parses a string of digit letters; `""` and `"ε"` denote the empty word.
    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ε" {
            return Ok(Word::empty(alphabet));
        }
        let letters = s
            .chars()
            .map(|c| alphabet.parse_letter(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { alphabet, letters })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word::from_raw(self.alphabet, self.letters[..n.min(self.len())].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::from_raw(self.alphabet, letters)
    }

    pub fn pushed(&self, letter: u8) -> Word {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Word::from_raw(self.alphabet, letters)
    }

    /// All words of length `n` in lexicographic order.
    pub fn all_of_length(alphabet: Alphabet, n: usize) -> Vec<Word> {
        let mut out = alloc::vec![Word::empty(alphabet)];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|w| alphabet.letters().map(move |l| w.pushed(l)))
                .collect();
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CylinderRelation {
    Equal,
    Contains,
    Contained,
    Disjoint,
}

/// The clopen set of all infinite words starting with a given prefix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cylinder {
    prefix: Word,
}

impl Cylinder {
    pub fn new(prefix: Word) -> Self {
        Cylinder { prefix }
    }

    pub fn whole(alphabet: Alphabet) -> Self {
        Cylinder::new(Word::empty(alphabet))
    }

    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        Word::parse(alphabet, s).map(Cylinder::new)
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.prefix.alphabet
    }

    pub fn relation(&self, other: &Cylinder) -> Result<CylinderRelation> {
        self.alphabet().same(other.alphabet())?;
        let (a, b) = (&self.prefix, &other.prefix);
        Ok(if a == b {
            CylinderRelation::Equal
        } else if a.is_prefix_of(b) {
            CylinderRelation::Contains
        } else if b.is_prefix_of(a) {
            CylinderRelation::Contained
        } else {
            CylinderRelation::Disjoint
        })
    }

    /// Inclusion as sets: `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Cylinder) -> bool {
        self.alphabet() == other.alphabet() && other.prefix.is_prefix_of(&self.prefix)
    }

    pub fn contains_point(&self, x: &BoundaryPoint) -> Result<bool> {
        self.alphabet().same(x.alphabet())?;
        Ok(self
            .prefix
            .letters
            .iter()
            .enumerate()
            .all(|(i, &l)| x.letter_at(i) == l))
    }

    pub fn children(&self) -> Vec<Cylinder> {
        self.alphabet()
            .letters()
            .map(|l| Cylinder::new(self.prefix.pushed(l)))
            .collect()
    }

    /// All cylinders of the given depth inside `self` (lexicographic order).
    pub fn subcylinders(&self, depth: usize) -> Vec<Cylinder> {
        if depth < self.depth() {
            return Vec::new();
        }
        Word::all_of_length(self.alphabet(), depth - self.depth())
            .into_iter()
            .map(|t| Cylinder::new(self.prefix.concat(&t)))
            .collect()
    }

    /// The coarsest cylinder partition of the complement: the siblings of
    /// every proper prefix along the path to `self`.
    pub fn complement_code(&self) -> Vec<Cylinder> {
        let mut out = Vec::new();
        for i in 0..self.depth() {
            let stem = self.prefix.prefix(i);
            for l in self.alphabet().letters() {
                if l != self.prefix.letters[i] {
                    out.push(Cylinder::new(stem.pushed(l)));
                }
            }
        }
        out
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            f.write_str("[ε]")
        } else {
            write!(f, "[{}]", self.prefix)
        }
    }
}

/// An eventually periodic infinite word `u · v^∞`, stored in canonical form:
/// the period is primitive and the preperiod is as short as possible.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryPoint {
    alphabet: Alphabet,
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl BoundaryPoint {
    pub fn new(alphabet: Alphabet, preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("period must be nonempty".into()));
        }
        for &l in preperiod.iter().chain(period.iter()) {
            alphabet.check(l)?;
        }
        Ok(Self::canonical(alphabet, preperiod, period))
    }

    pub fn constant(alphabet: Alphabet, letter: u8) -> Result<Self> {
        Self::new(alphabet, Vec::new(), alloc::vec![letter])
    }

    pub(crate) fn canonical(alphabet: Alphabet, mut preperiod: Vec<u8>, period: Vec<u8>) -> Self {
        let mut period = primitive_root(&period).to_vec();
        while let (Some(&p), Some(&q)) = (preperiod.last(), period.last()) {
            if p != q {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        BoundaryPoint {
            alphabet,
            preperiod,
            period,
        }
    }

    /// Parses `"u(v)"`: the preperiod `u` followed by `v` repeated forever.
    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or_else(|| Error::Parse(alloc::format!("missing '(' in point {s:?}")))?;
        let inner = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(alloc::format!("missing ')' in point {s:?}")))?;
        let pre = Word::parse(alphabet, &s[..open])?;
        let per = Word::parse(alphabet, inner)?;
        Self::new(alphabet, pre.letters, per.letters)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn letter_at(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word::from_raw(self.alphabet, (0..n).map(|i| self.letter_at(i)).collect())
    }

    /// The depth-`n` cylinder around the point.
    pub fn cylinder(&self, n: usize) -> Cylinder {
        Cylinder::new(self.prefix(n))
    }

    /// The point with its first `n` letters removed.
    pub fn shift(&self, n: usize) -> BoundaryPoint {
        if n <= self.preperiod.len() {
            return Self::canonical(self.alphabet, self.preperiod[n..].to_vec(), self.period.clone());
        }
        let mut period = self.period.clone();
        period.rotate_left((n - self.preperiod.len()) % self.period.len());
        Self::canonical(self.alphabet, Vec::new(), period)
    }

    /// `w · self`.
    pub fn prepend(&self, w: &Word) -> Result<BoundaryPoint> {
        self.alphabet.same(w.alphabet())?;
        let mut pre = w.letters.clone();
        pre.extend_from_slice(&self.preperiod);
        Ok(Self::canonical(self.alphabet, pre, self.period.clone()))
    }

    /// Smallest index where the two infinite words differ, or `None` when
    /// they are equal.
    pub fn first_disagreement(&self, other: &BoundaryPoint) -> Result<Option<usize>> {
        self.alphabet.same(other.alphabet)?;
        let bound = self.preperiod.len()
            + other.preperiod.len()
            + 2 * lcm(self.period.len(), other.period.len());
        Ok((0..bound).find(|&i| self.letter_at(i) != other.letter_at(i)))
    }

    /// Whether the point ends in the constant word `letter^∞`.
    pub fn is_cofinal_with_constant(&self, letter: u8) -> bool {
        self.period == [letter]
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.preperiod {
            write!(f, "{l}")?;
        }
        f.write_str("(")?;
        for &l in &self.period {
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

/// Strictly increasing positive depths `d_1 < d_2 < ... < d_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthSchedule {
    depths: Vec<usize>,
}

impl DepthSchedule {
    pub fn new(depths: Vec<usize>) -> Result<Self> {
        if depths.first() == Some(&0) || depths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSchedule);
        }
        Ok(DepthSchedule { depths })
    }

    /// The default schedule `1, 2, ..., n`.
    pub fn up_to(n: usize) -> Self {
        DepthSchedule {
            depths: (1..=n).collect(),
        }
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }
}

fn primitive_root(v: &[u8]) -> &[u8] {
    let n = v.len();
    for p in 1..n {
        if n.is_multiple_of(p) && (p..n).all(|i| v[i] == v[i - p]) {
            return &v[..p];
        }
    }
    v
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn word_string(letters: &[u8]) -> String {
    letters.iter().map(|l| l.to_string()).collect()
}
