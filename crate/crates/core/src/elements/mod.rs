//! Computable homeomorphisms of the word space, behind one element contract.

mod full;
mod prefix;
mod tree;

pub use full::{odometer_add, FullGroupTable, MAX_POWER};
pub use prefix::PrefixBijection;
pub use tree::{GenPower, TreeElement, WreathTable};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::symbolic::{Alphabet, BoundaryPoint, Cylinder, Word};
use crate::{Error, Result, Ternary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Tree,
    Prefix,
    Full,
}

/// An element of one of the three families. Composition and inversion never
/// leave the family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElement {
    Tree(TreeElement),
    Prefix(PrefixBijection),
    Full(FullGroupTable),
}

impl From<TreeElement> for GroupElement {
    fn from(t: TreeElement) -> Self {
        GroupElement::Tree(t)
    }
}

impl From<PrefixBijection> for GroupElement {
    fn from(p: PrefixBijection) -> Self {
        GroupElement::Prefix(p)
    }
}

impl From<FullGroupTable> for GroupElement {
    fn from(f: FullGroupTable) -> Self {
        GroupElement::Full(f)
    }
}

impl GroupElement {
    pub fn kind(&self) -> ElementKind {
        match self {
            GroupElement::Tree(_) => ElementKind::Tree,
            GroupElement::Prefix(_) => ElementKind::Prefix,
            GroupElement::Full(_) => ElementKind::Full,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            GroupElement::Tree(t) => t.table().alphabet(),
            GroupElement::Prefix(p) => p.alphabet(),
            GroupElement::Full(_) => Alphabet::BINARY,
        }
    }

    /// The identity of the same family (and wreath table).
    pub fn identity_like(&self) -> GroupElement {
        match self {
            GroupElement::Tree(t) => TreeElement::identity(t.table().clone()).into(),
            GroupElement::Prefix(p) => PrefixBijection::identity(p.alphabet()).into(),
            GroupElement::Full(_) => FullGroupTable::identity().into(),
        }
    }

    pub fn resolution_depth(&self) -> usize {
        match self {
            GroupElement::Tree(_) => 0,
            GroupElement::Prefix(p) => p.resolution_depth(),
            GroupElement::Full(f) => f.resolution_depth(),
        }
    }

    /// Whether every cylinder maps to a cylinder of the same depth.
    pub fn is_depth_preserving(&self) -> bool {
        !matches!(self, GroupElement::Prefix(_))
    }

    /// Image word `w'` with `g([w]) = [w']`, and the section `g|_w` with
    /// `g(w·s) = w'·g|_w(s)`.
    pub fn act_with_section(&self, w: &Word) -> Result<(Word, GroupElement)> {
        self.alphabet().same(w.alphabet())?;
        let (img, sec): (Vec<u8>, GroupElement) = match self {
            GroupElement::Tree(t) => {
                let (img, s) = t.act_with_section(w.letters());
                (img, s.into())
            }
            GroupElement::Prefix(p) => {
                let (img, s) = p.act_with_section(w.letters())?;
                (img, s.into())
            }
            GroupElement::Full(f) => {
                let (img, s) = f.act_with_section(w.letters())?;
                (img, s.into())
            }
        };
        Ok((Word::from_raw(w.alphabet(), img), sec))
    }

    pub fn act_word(&self, w: &Word) -> Result<Word> {
        match self {
            GroupElement::Tree(t) => {
                self.alphabet().same(w.alphabet())?;
                Ok(Word::from_raw(w.alphabet(), t.act_word(w.letters())))
            }
            _ => self.act_with_section(w).map(|(img, _)| img),
        }
    }

    pub fn act_cylinder(&self, c: &Cylinder) -> Result<Cylinder> {
        self.act_word(c.prefix()).map(Cylinder::new)
    }

    pub fn section(&self, w: &Word) -> Result<GroupElement> {
        self.act_with_section(w).map(|(_, s)| s)
    }

    /// Exact image of an eventually periodic point. Follows the point in
    /// chunks, tracking `(section, position in the period)` until a state
    /// repeats; the output between the two visits is the image's period.
    pub fn act_point(&self, x: &BoundaryPoint, max_states: usize) -> Result<BoundaryPoint> {
        self.alphabet().same(x.alphabet())?;
        if let GroupElement::Tree(t) = self {
            if t.is_empty() {
                return Ok(x.clone());
            }
        }
        let pre = x.preperiod().len();
        let per = x.period().len();
        let mut out: Vec<u8> = Vec::new();
        let mut pos = 0usize;
        let mut g = self.clone();
        let mut seen: BTreeMap<(GroupElement, usize), usize> = BTreeMap::new();
        loop {
            if pos >= pre {
                let key = (g, (pos - pre) % per);
                if let Some(&start) = seen.get(&key) {
                    let period = out.split_off(start);
                    if period.is_empty() {
                        return Err(Error::NoCycleWithinBound(max_states));
                    }
                    return Ok(BoundaryPoint::canonical(x.alphabet(), out, period));
                }
                if seen.len() >= max_states {
                    return Err(Error::NoCycleWithinBound(max_states));
                }
                seen.insert(key.clone(), out.len());
                g = key.0;
            }
            let r = g.resolution_depth().max(1);
            let chunk = x.prefix(pos + r).letters()[pos..].to_vec();
            let (img, next) = g.act_with_section(&Word::from_raw(x.alphabet(), chunk))?;
            out.extend_from_slice(img.letters());
            pos += r;
            g = next;
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Tree(a), GroupElement::Tree(b)) => {
                if !a.same_table(b) {
                    return Err(Error::FamilyMismatch);
                }
                Ok(a.compose(b).into())
            }
            (GroupElement::Prefix(a), GroupElement::Prefix(b)) => Ok(a.compose(b)?.into()),
            (GroupElement::Full(a), GroupElement::Full(b)) => Ok(a.compose(b)?.into()),
            _ => Err(Error::FamilyMismatch),
        }
    }

    pub fn invert(&self) -> GroupElement {
        match self {
            GroupElement::Tree(t) => t.invert().into(),
            GroupElement::Prefix(p) => p.invert().into(),
            GroupElement::Full(f) => f.invert().into(),
        }
    }

    /// `self ∘ g ∘ self⁻¹`.
    pub fn conjugate(&self, g: &GroupElement) -> Result<GroupElement> {
        self.compose(g)?.compose(&self.invert())
    }

    /// Identity test. Prefix bijections and full-group tables have unique
    /// reduced forms and are decided exactly; tree automorphisms use the
    /// budgeted section closure.
    pub fn is_identity(&self, budget: usize) -> Ternary {
        match self {
            GroupElement::Tree(t) => t.is_identity(budget),
            GroupElement::Prefix(p) => Ternary::from_bool(p.is_identity()),
            GroupElement::Full(f) => Ternary::from_bool(f.is_identity()),
        }
    }

    /// Whether `self` and `other` are the same map (three-valued for trees).
    pub fn same_map(&self, other: &GroupElement, budget: usize) -> Result<Ternary> {
        if self == other {
            return Ok(Ternary::Yes);
        }
        Ok(self.compose(&other.invert())?.is_identity(budget))
    }

    /// Length of the stored representation (word length or rule count).
    pub fn size(&self) -> usize {
        match self {
            GroupElement::Tree(t) => t.len(),
            GroupElement::Prefix(p) => p.rules().len(),
            GroupElement::Full(f) => f.rows().len(),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Tree(t) => t.fmt(f),
            GroupElement::Prefix(p) => p.fmt(f),
            GroupElement::Full(t) => t.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CodeIssue {
    Incomplete,
    Overlapping,
}

/// Whether `words` is a complete prefix code: every infinite word has
/// exactly one of them as a prefix.
pub(crate) fn check_complete_code(alphabet: Alphabet, words: &[&[u8]]) -> core::result::Result<(), CodeIssue> {
    fn go(alphabet: Alphabet, words: &mut Vec<&[u8]>, depth: usize) -> core::result::Result<(), CodeIssue> {
        if words.is_empty() {
            return Err(CodeIssue::Incomplete);
        }
        if words.iter().any(|w| w.len() == depth) {
            return if words.len() == 1 {
                Ok(())
            } else {
                Err(CodeIssue::Overlapping)
            };
        }
        for l in alphabet.letters() {
            let mut sub: Vec<&[u8]> = words.iter().copied().filter(|w| w[depth] == l).collect();
            go(alphabet, &mut sub, depth + 1)?;
        }
        Ok(())
    }
    let mut all = words.to_vec();
    go(alphabet, &mut all, 0)
}

pub(crate) fn longest_common_prefix<'a>(words: &[&'a [u8]]) -> &'a [u8] {
    let Some(first) = words.first() else {
        return &[];
    };
    let mut n = first.len();
    for w in &words[1..] {
        n = n.min(first.iter().zip(w.iter()).take_while(|(a, b)| a == b).count());
    }
    &first[..n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_codes() {
        let a = Alphabet::BINARY;
        assert_eq!(check_complete_code(a, &[&[0], &[1, 0], &[1, 1]]), Ok(()));
        assert_eq!(check_complete_code(a, &[&[]]), Ok(()));
        assert_eq!(check_complete_code(a, &[&[0], &[1, 0]]), Err(CodeIssue::Incomplete));
        assert_eq!(check_complete_code(a, &[&[0], &[0, 1], &[1]]), Err(CodeIssue::Overlapping));
        assert_eq!(check_complete_code(a, &[&[0], &[0], &[1]]), Err(CodeIssue::Overlapping));
    }
}
