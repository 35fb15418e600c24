//! Self-similar tree automorphisms given by a finite wreath recursion.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::symbolic::Alphabet;
use crate::{Error, Result, Ternary};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenPower {
    pub gen: u16,
    pub inverse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct GeneratorDef {
    name: String,
    perm: Vec<u8>,
    inv_perm: Vec<u8>,
    sections: Vec<Option<u16>>,
    involutive: bool,
}

/// A length-reducing rewrite `x·y → z` (or `x·y → 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
struct Rewrite {
    lhs: [GenPower; 2],
    rhs: Option<GenPower>,
}

/// Finite self-similar data: for each generator a permutation of the
/// alphabet and, for each letter, the generator (or identity) acting below it.
///
/// Involutions and pair rewrites can be declared on top of the recursion;
/// both are checked with the section-closure identity test before they are
/// used for normalising words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathTable {
    alphabet: Alphabet,
    gens: Vec<GeneratorDef>,
    rewrites: Vec<Rewrite>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "e"
}

impl WreathTable {
    /// `gens` lists `(name, root permutation, section names)`; a section
    /// name of `"1"` or `"e"` is the identity.
    pub fn new(alphabet: Alphabet, gens: &[(&str, &[u8], &[&str])]) -> Result<Self> {
        let k = alphabet.size();
        let mut defs: Vec<GeneratorDef> = Vec::with_capacity(gens.len());
        for (name, perm, _) in gens {
            if !valid_name(name) {
                return Err(Error::InvalidTable(format!("bad generator name {name:?}")));
            }
            if defs.iter().any(|d| d.name == *name) {
                return Err(Error::InvalidTable(format!("duplicate generator {name}")));
            }
            if perm.len() != k {
                return Err(Error::InvalidTable(format!("permutation of {name} has wrong length")));
            }
            let mut inv_perm = alloc::vec![u8::MAX; k];
            for (x, &y) in perm.iter().enumerate() {
                alphabet.check(y)?;
                if inv_perm[y as usize] != u8::MAX {
                    return Err(Error::InvalidTable(format!("permutation of {name} is not a bijection")));
                }
                inv_perm[y as usize] = x as u8;
            }
            defs.push(GeneratorDef {
                name: name.to_string(),
                perm: perm.to_vec(),
                inv_perm,
                sections: Vec::new(),
                involutive: false,
            });
        }
        for (i, (name, _, sections)) in gens.iter().enumerate() {
            if sections.len() != k {
                return Err(Error::InvalidTable(format!("generator {name} needs {k} sections")));
            }
            let mut resolved = Vec::with_capacity(k);
            for s in sections.iter() {
                let s = s.trim();
                if s == "1" || s == "e" {
                    resolved.push(None);
                } else {
                    let j = defs.iter().position(|d| d.name == s).ok_or_else(|| {
                        Error::InvalidTable(format!("section {s:?} of {name} is not a generator"))
                    })?;
                    resolved.push(Some(j as u16));
                }
            }
            defs[i].sections = resolved;
        }
        if defs.len() > u16::MAX as usize {
            return Err(Error::InvalidTable("too many generators".into()));
        }
        Ok(WreathTable {
            alphabet,
            gens: defs,
            rewrites: Vec::new(),
        })
    }

    /// Declares generators of order two after confirming `s·s = 1` with the
    /// identity oracle.
    pub fn with_involutions(mut self, names: &[&str], budget: usize) -> Result<Self> {
        for name in names {
            let g = self.index_of(name)?;
            let p = GenPower {
                gen: g as u16,
                inverse: false,
            };
            if self.is_identity(&[p, p], budget) != Ternary::Yes {
                return Err(Error::InvalidTable(format!("{name}^2 = 1 not confirmed")));
            }
            self.gens[g].involutive = true;
        }
        Ok(self)
    }

    /// Declares rewrites `lhs → rhs` where `lhs` has two letters and `rhs` at
    /// most one, after confirming `lhs·rhs⁻¹ = 1` with the identity oracle.
    pub fn with_rewrites(mut self, rules: &[(&str, &str)], budget: usize) -> Result<Self> {
        for (lhs, rhs) in rules {
            let l = self.parse_word_raw(lhs)?;
            let r = self.parse_word_raw(rhs)?;
            if l.len() != 2 || r.len() > 1 {
                return Err(Error::InvalidTable(format!("rewrite {lhs} -> {rhs} is not length reducing")));
            }
            let mut check = l.clone();
            check.extend(self.inverse_word(&r));
            let check = self.reduce(check);
            if self.is_identity(&check, budget) != Ternary::Yes {
                return Err(Error::InvalidTable(format!("relation {lhs} = {rhs} not confirmed")));
            }
            self.rewrites.push(Rewrite {
                lhs: [l[0], l[1]],
                rhs: r.first().copied(),
            });
        }
        Ok(self)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_name(&self, g: usize) -> &str {
        &self.gens[g].name
    }

    pub fn is_involutive(&self, g: usize) -> bool {
        self.gens[g].involutive
    }

    pub fn root_permutation(&self, g: usize) -> &[u8] {
        &self.gens[g].perm
    }

    /// Section names per letter, `None` for the identity.
    pub fn section_names(&self, g: usize) -> Vec<Option<&str>> {
        self.gens[g]
            .sections
            .iter()
            .map(|s| s.map(|j| self.gens[j as usize].name.as_str()))
            .collect()
    }

    /// Declared rewrites as text pairs.
    pub fn rewrite_rules(&self) -> Vec<(String, String)> {
        self.rewrites
            .iter()
            .map(|r| {
                let rhs = r.rhs.map(|p| alloc::vec![p]).unwrap_or_default();
                (self.format_word(&r.lhs), self.format_word(&rhs))
            })
            .collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.gens
            .iter()
            .position(|d| d.name == name)
            .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))
    }

    fn normalise(&self, p: GenPower) -> GenPower {
        if self.gens[p.gen as usize].involutive {
            GenPower {
                gen: p.gen,
                inverse: false,
            }
        } else {
            p
        }
    }

    pub(crate) fn inverse_word(&self, word: &[GenPower]) -> Vec<GenPower> {
        word.iter()
            .rev()
            .map(|p| {
                self.normalise(GenPower {
                    gen: p.gen,
                    inverse: !p.inverse,
                })
            })
            .collect()
    }

    fn cancels(&self, a: GenPower, b: GenPower) -> bool {
        a.gen == b.gen && (a.inverse != b.inverse || self.gens[a.gen as usize].involutive)
    }

    /// Free reduction, involution cancellation and declared pair rewrites,
    /// applied greedily with a stack.
    pub fn reduce(&self, word: impl IntoIterator<Item = GenPower>) -> Vec<GenPower> {
        let mut out: Vec<GenPower> = Vec::new();
        for p in word {
            let mut incoming = Some(self.normalise(p));
            while let Some(cur) = incoming.take() {
                match out.last().copied() {
                    Some(top) if self.cancels(top, cur) => {
                        out.pop();
                    }
                    Some(top) => {
                        if let Some(rw) = self.rewrites.iter().find(|r| r.lhs == [top, cur]) {
                            out.pop();
                            incoming = rw.rhs;
                        } else {
                            out.push(cur);
                        }
                    }
                    None => out.push(cur),
                }
            }
        }
        out
    }

    /// One letter through one generator power: image letter and next state.
    #[inline]
    fn step(&self, p: GenPower, letter: u8) -> (u8, Option<GenPower>) {
        let d = &self.gens[p.gen as usize];
        if p.inverse {
            let y = d.inv_perm[letter as usize];
            let next = d.sections[y as usize].map(|g| {
                self.normalise(GenPower {
                    gen: g,
                    inverse: true,
                })
            });
            (y, next)
        } else {
            (d.perm[letter as usize], d.sections[letter as usize].map(|g| GenPower { gen: g, inverse: false }))
        }
    }

    /// Image of `w` and the reduced section at `w`. The word acts as a
    /// composition of maps, so its rightmost factor is applied first.
    pub fn act_with_section(&self, word: &[GenPower], w: &[u8]) -> (Vec<u8>, Vec<GenPower>) {
        let mut cur = w.to_vec();
        let mut sections: Vec<Option<GenPower>> = alloc::vec![None; word.len()];
        for (idx, &f) in word.iter().enumerate().rev() {
            let mut state = Some(f);
            for letter in cur.iter_mut() {
                match state {
                    None => break,
                    Some(s) => {
                        let (y, next) = self.step(s, *letter);
                        *letter = y;
                        state = next;
                    }
                }
            }
            sections[idx] = state;
        }
        (cur, self.reduce(sections.into_iter().flatten()))
    }

    pub fn act_word(&self, word: &[GenPower], w: &[u8]) -> Vec<u8> {
        let mut cur = w.to_vec();
        for &f in word.iter().rev() {
            let mut state = Some(f);
            for letter in cur.iter_mut() {
                match state {
                    None => break,
                    Some(s) => {
                        let (y, next) = self.step(s, *letter);
                        *letter = y;
                        state = next;
                    }
                }
            }
        }
        cur
    }

    /// Coinductive identity test: explores the closure of `{word}` under
    /// taking first-level sections. `Yes` when the closure stays within
    /// `budget` distinct reduced words and none of them moves a letter.
    pub fn is_identity(&self, word: &[GenPower], budget: usize) -> Ternary {
        let start = self.reduce(word.iter().copied());
        if start.is_empty() {
            return Ternary::Yes;
        }
        let mut seen: BTreeSet<Vec<GenPower>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(w) = queue.pop_front() {
            for x in self.alphabet.letters() {
                let (img, s) = self.act_with_section(&w, &[x]);
                if img[0] != x {
                    return Ternary::No;
                }
                if !s.is_empty() && !seen.contains(&s) {
                    if seen.len() >= budget {
                        return Ternary::Unknown;
                    }
                    seen.insert(s.clone());
                    queue.push_back(s);
                }
            }
        }
        Ternary::Yes
    }

    fn parse_word_raw(&self, s: &str) -> Result<Vec<GenPower>> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.replace('⁻', "^-").replace('¹', "1");
        if s.is_empty() || s == "1" || s == "e" {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for factor in s.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    (n, e)
                }
                None => (factor, 1),
            };
            if name == "1" || name == "e" {
                continue;
            }
            let g = self.index_of(name)? as u16;
            for _ in 0..exp.unsigned_abs() {
                out.push(self.normalise(GenPower {
                    gen: g,
                    inverse: exp < 0,
                }));
            }
        }
        Ok(out)
    }

    /// Parses `"a*b*a^-1"` (also `a⁻¹`, integer exponents, `1` for the
    /// identity) and reduces it.
    pub fn parse_word(&self, s: &str) -> Result<Vec<GenPower>> {
        Ok(self.reduce(self.parse_word_raw(s)?))
    }

    pub fn format_word(&self, word: &[GenPower]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        let mut out = String::new();
        for (i, p) in word.iter().enumerate() {
            if i > 0 {
                out.push('*');
            }
            out.push_str(&self.gens[p.gen as usize].name);
            if p.inverse {
                out.push_str("^-1");
            }
        }
        out
    }
}

/// An element of the group generated by a [`WreathTable`], stored as a
/// reduced word over the generators. Equality and ordering compare the
/// reduced words, not the maps.
#[derive(Debug, Clone)]
pub struct TreeElement {
    table: Arc<WreathTable>,
    word: Vec<GenPower>,
}

impl TreeElement {
    pub fn identity(table: Arc<WreathTable>) -> Self {
        TreeElement {
            table,
            word: Vec::new(),
        }
    }

    pub fn from_word(table: Arc<WreathTable>, word: Vec<GenPower>) -> Self {
        let word = table.reduce(word);
        TreeElement { table, word }
    }

    pub fn generator(table: Arc<WreathTable>, g: usize) -> Self {
        Self::from_word(
            table,
            alloc::vec![GenPower {
                gen: g as u16,
                inverse: false
            }],
        )
    }

    pub fn parse(table: Arc<WreathTable>, s: &str) -> Result<Self> {
        let word = table.parse_word(s)?;
        Ok(TreeElement { table, word })
    }

    pub fn table(&self) -> &Arc<WreathTable> {
        &self.table
    }

    pub fn word(&self) -> &[GenPower] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub(crate) fn same_table(&self, other: &TreeElement) -> bool {
        Arc::ptr_eq(&self.table, &other.table) || self.table == other.table
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TreeElement) -> TreeElement {
        let word = self.table.reduce(self.word.iter().chain(other.word.iter()).copied());
        TreeElement {
            table: self.table.clone(),
            word,
        }
    }

    pub fn invert(&self) -> TreeElement {
        TreeElement {
            table: self.table.clone(),
            word: self.table.inverse_word(&self.word),
        }
    }

    pub fn act_word(&self, w: &[u8]) -> Vec<u8> {
        self.table.act_word(&self.word, w)
    }

    pub fn act_with_section(&self, w: &[u8]) -> (Vec<u8>, TreeElement) {
        let (img, s) = self.table.act_with_section(&self.word, w);
        (
            img,
            TreeElement {
                table: self.table.clone(),
                word: s,
            },
        )
    }

    pub fn is_identity(&self, budget: usize) -> Ternary {
        self.table.is_identity(&self.word, budget)
    }
}

impl PartialEq for TreeElement {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word
    }
}

impl Eq for TreeElement {}

impl PartialOrd for TreeElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TreeElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.cmp(&other.word)
    }
}

impl Hash for TreeElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.word.hash(state);
    }
}

impl fmt::Display for TreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table.format_word(&self.word))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grigorchuk_plain() -> WreathTable {
        WreathTable::new(
            Alphabet::BINARY,
            &[
                ("a", &[1, 0], &["1", "1"]),
                ("b", &[0, 1], &["a", "c"]),
                ("c", &[0, 1], &["a", "d"]),
                ("d", &[0, 1], &["1", "b"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn relations_hold_without_any_rewriting() {
        let t = grigorchuk_plain();
        for w in ["a*a", "b*b", "c*c", "d*d", "b*c*d", "d*c*b"] {
            let word = t.parse_word(w).unwrap();
            assert_eq!(t.is_identity(&word, 64), Ternary::Yes, "{w}");
        }
        let adad = t.parse_word("a*d*a*d*a*d*a*d").unwrap();
        assert_eq!(t.is_identity(&adad, 64), Ternary::Yes);
        for w in ["a", "b", "c", "d", "a*b", "a*d"] {
            let word = t.parse_word(w).unwrap();
            assert_eq!(t.is_identity(&word, 64), Ternary::No, "{w}");
        }
    }

    #[test]
    fn false_relations_are_rejected() {
        let t = grigorchuk_plain();
        assert!(t.clone().with_rewrites(&[("a*b", "c")], 64).is_err());
        assert!(t.with_involutions(&["a", "b"], 64).is_ok());
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(WreathTable::new(Alphabet::BINARY, &[("a", &[0, 0], &["1", "1"])]).is_err());
        assert!(WreathTable::new(Alphabet::BINARY, &[("a", &[1, 0], &["1", "z"])]).is_err());
        assert!(WreathTable::new(Alphabet::BINARY, &[("e", &[1, 0], &["1", "1"])]).is_err());
    }

    #[test]
    fn word_syntax() {
        let t = grigorchuk_plain();
        let w = t.parse_word("a * b^-1*a⁻¹").unwrap();
        assert_eq!(t.format_word(&w), "a*b^-1*a^-1");
        let w = t.parse_word("a^2*b").unwrap();
        assert_eq!(t.format_word(&w), "a*a*b");
        assert_eq!(t.format_word(&t.parse_word("a*a^-1").unwrap()), "1");
        assert!(t.parse_word("a*x").is_err());
        assert!(t.parse_word("a^z").is_err());
    }
}
