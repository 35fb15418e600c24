//! Prefix-exchange bijections: finite rule sets `u_j·s ↦ v_j·s` whose domain
//! and range words are complete prefix codes (Thompson's group `V` and its
//! relatives on a `k`-letter alphabet).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::{check_complete_code, longest_common_prefix, CodeIssue};
use crate::symbolic::{word_string, Alphabet, Word};
use crate::{Error, Result};

/// A prefix-exchange bijection in reduced form: no `k` sibling rules
/// `u·a ↦ v·a` remain, so two bijections are equal iff their rule lists are.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrefixBijection {
    alphabet: Alphabet,
    rules: Vec<(Vec<u8>, Vec<u8>)>,
}

impl PrefixBijection {
    pub fn new(alphabet: Alphabet, rules: Vec<(Word, Word)>) -> Result<Self> {
        let mut raw = Vec::with_capacity(rules.len());
        for (u, v) in rules {
            alphabet.same(u.alphabet())?;
            alphabet.same(v.alphabet())?;
            raw.push((u.into_letters(), v.into_letters()));
        }
        Self::validate_raw(alphabet, &raw)?;
        Ok(Self::canonical(alphabet, raw))
    }

    /// Builds from digit strings, e.g. `[("0", "00"), ("10", "01"), ("11", "1")]`.
    pub fn from_strs(alphabet: Alphabet, rules: &[(&str, &str)]) -> Result<Self> {
        let rules = rules
            .iter()
            .map(|(u, v)| Ok((Word::parse(alphabet, u)?, Word::parse(alphabet, v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, rules)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        PrefixBijection {
            alphabet,
            rules: alloc::vec![(Vec::new(), Vec::new())],
        }
    }

    /// Checks that domain and range words are complete prefix codes.
    pub fn validate_raw(alphabet: Alphabet, rules: &[(Vec<u8>, Vec<u8>)]) -> Result<()> {
        let domain: Vec<&[u8]> = rules.iter().map(|(u, _)| u.as_slice()).collect();
        match check_complete_code(alphabet, &domain) {
            Ok(()) => {}
            Err(CodeIssue::Incomplete) => return Err(Error::IncompleteCode),
            Err(CodeIssue::Overlapping) => return Err(Error::OverlappingCode),
        }
        let range: Vec<&[u8]> = rules.iter().map(|(_, v)| v.as_slice()).collect();
        check_complete_code(alphabet, &range).map_err(|_| Error::NotBijective)
    }

    fn canonical(alphabet: Alphabet, rules: Vec<(Vec<u8>, Vec<u8>)>) -> Self {
        let mut map: BTreeMap<Vec<u8>, Vec<u8>> = rules.into_iter().collect();
        let k = alphabet.size() as u8;
        loop {
            let mut merged = None;
            for (u, v) in &map {
                if u.last() != Some(&0) || v.last() != Some(&0) {
                    continue;
                }
                let p = &u[..u.len() - 1];
                let q = &v[..v.len() - 1];
                let all = (1..k).all(|a| {
                    let mut ua = p.to_vec();
                    ua.push(a);
                    map.get(&ua).is_some_and(|va| {
                        va.len() == v.len() && va.starts_with(q) && va[q.len()] == a
                    })
                });
                if all {
                    merged = Some((p.to_vec(), q.to_vec()));
                    break;
                }
            }
            match merged {
                None => break,
                Some((p, q)) => {
                    for a in 0..k {
                        let mut ua = p.clone();
                        ua.push(a);
                        map.remove(&ua);
                    }
                    map.insert(p, q);
                }
            }
        }
        PrefixBijection {
            alphabet,
            rules: map.into_iter().collect(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn rules(&self) -> &[(Vec<u8>, Vec<u8>)] {
        &self.rules
    }

    pub fn is_identity(&self) -> bool {
        self.rules.len() == 1 && self.rules[0].0.is_empty() && self.rules[0].1.is_empty()
    }

    /// Length of the longest domain word.
    pub fn resolution_depth(&self) -> usize {
        self.rules.iter().map(|(u, _)| u.len()).max().unwrap_or(0)
    }

    /// Image cylinder of `[w]` together with the section at `w`.
    ///
    /// When `w` extends a domain word the section is the identity. Otherwise
    /// the rules below `w` are collected and the image is a cylinder exactly
    /// when their range words tile one.
    pub fn act_with_section(&self, w: &[u8]) -> Result<(Vec<u8>, PrefixBijection)> {
        if let Some((u, v)) = self.rules.iter().find(|(u, _)| w.starts_with(u)) {
            let mut img = v.clone();
            img.extend_from_slice(&w[u.len()..]);
            return Ok((img, Self::identity(self.alphabet)));
        }
        let below: Vec<&(Vec<u8>, Vec<u8>)> =
            self.rules.iter().filter(|(u, _)| u.starts_with(w)).collect();
        let unresolved = Error::Unresolved {
            length: w.len(),
            needed: self.resolution_depth(),
        };
        let ranges: Vec<&[u8]> = below.iter().map(|(_, v)| v.as_slice()).collect();
        let q = longest_common_prefix(&ranges);
        let tails: Vec<&[u8]> = ranges.iter().map(|v| &v[q.len()..]).collect();
        if check_complete_code(self.alphabet, &tails).is_err() {
            return Err(unresolved);
        }
        let section = below
            .iter()
            .map(|(u, v)| (u[w.len()..].to_vec(), v[q.len()..].to_vec()))
            .collect();
        Ok((q.to_vec(), Self::canonical(self.alphabet, section)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PrefixBijection) -> Result<PrefixBijection> {
        self.alphabet.same(other.alphabet)?;
        let mut out = Vec::new();
        for (u, v) in &other.rules {
            if let Some((u2, v2)) = self.rules.iter().find(|(u2, _)| v.starts_with(u2)) {
                let mut img = v2.clone();
                img.extend_from_slice(&v[u2.len()..]);
                out.push((u.clone(), img));
            } else {
                for (u2, v2) in self.rules.iter().filter(|(u2, _)| u2.starts_with(v)) {
                    let mut dom = u.clone();
                    dom.extend_from_slice(&u2[v.len()..]);
                    out.push((dom, v2.clone()));
                }
            }
        }
        Ok(Self::canonical(self.alphabet, out))
    }

    pub fn invert(&self) -> PrefixBijection {
        let swapped = self.rules.iter().map(|(u, v)| (v.clone(), u.clone())).collect();
        Self::canonical(self.alphabet, swapped)
    }
}

impl fmt::Display for PrefixBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (u, v)) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let show = |x: &[u8]| if x.is_empty() { "ε".into() } else { word_string(x) };
            write!(f, "{}→{}", show(u), show(v))?;
        }
        f.write_str("}")
    }
}
