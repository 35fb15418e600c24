//! Elements of the topological full group of the binary odometer.
//!
//! The odometer `τ` adds one to a binary word read least-significant letter
//! first, with the carry running to the right: `τ(0w) = 1w`, `τ(1w) = 0·τ(w)`.
//! A table assigns a power of `τ` to each cylinder of a partition.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::{check_complete_code, longest_common_prefix, CodeIssue};
use crate::symbolic::{word_string, Alphabet, Word};
use crate::{Error, Result};

/// Largest absolute power of `τ` a table may carry.
pub const MAX_POWER: i64 = 64;

/// `τ^k` applied to a finite word: the image word and the carry `c` with
/// `τ^k(w·s) = image·τ^c(s)`.
pub fn odometer_add(w: &[u8], k: i64) -> (Vec<u8>, i64) {
    let mut carry = k;
    let mut out = Vec::with_capacity(w.len());
    for &bit in w {
        let s = bit as i64 + carry;
        out.push(s.rem_euclid(2) as u8);
        carry = s.div_euclid(2);
    }
    (out, carry)
}

fn value(w: &[u8]) -> Option<i128> {
    if w.len() > 62 {
        return None;
    }
    Some(w.iter().enumerate().map(|(i, &b)| (b as i128) << i).sum())
}

fn check_power(k: i64) -> Result<i64> {
    if k.abs() <= MAX_POWER {
        Ok(k)
    } else {
        Err(Error::PowerBound(k))
    }
}

/// A table `{(c_j, k_j)}` acting as `τ^{k_j}` on the cylinder `[c_j]`.
/// Stored in the coarsest form: no two sibling rows share a power.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FullGroupTable {
    rows: Vec<(Vec<u8>, i64)>,
}

impl FullGroupTable {
    pub fn new(rows: Vec<(Word, i64)>) -> Result<Self> {
        let mut raw = Vec::with_capacity(rows.len());
        for (c, k) in rows {
            Alphabet::BINARY.same(c.alphabet())?;
            raw.push((c.into_letters(), check_power(k)?));
        }
        Self::validate_raw(&raw)?;
        Ok(Self::canonical(raw))
    }

    pub fn from_strs(rows: &[(&str, i64)]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|(c, k)| Ok((Word::parse(Alphabet::BINARY, c)?, *k)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn identity() -> Self {
        FullGroupTable {
            rows: alloc::vec![(Vec::new(), 0)],
        }
    }

    /// The odometer itself, `{([ε], +1)}`.
    pub fn odometer() -> Self {
        FullGroupTable {
            rows: alloc::vec![(Vec::new(), 1)],
        }
    }

    /// Checks the row cylinders and their images both partition the space.
    pub fn validate_raw(rows: &[(Vec<u8>, i64)]) -> Result<()> {
        for &(_, k) in rows {
            check_power(k)?;
        }
        let domain: Vec<&[u8]> = rows.iter().map(|(c, _)| c.as_slice()).collect();
        match check_complete_code(Alphabet::BINARY, &domain) {
            Ok(()) => {}
            Err(CodeIssue::Incomplete) => return Err(Error::IncompleteCode),
            Err(CodeIssue::Overlapping) => return Err(Error::OverlappingCode),
        }
        let images: Vec<Vec<u8>> = rows.iter().map(|(c, k)| odometer_add(c, *k).0).collect();
        let images: Vec<&[u8]> = images.iter().map(|c| c.as_slice()).collect();
        check_complete_code(Alphabet::BINARY, &images).map_err(|_| Error::NotBijective)
    }

    fn canonical(rows: Vec<(Vec<u8>, i64)>) -> Self {
        let mut map: BTreeMap<Vec<u8>, i64> = rows.into_iter().collect();
        loop {
            let mut merged = None;
            for (c, &k) in &map {
                if c.last() == Some(&0) {
                    let mut sib = c.clone();
                    *sib.last_mut().unwrap() = 1;
                    if map.get(&sib) == Some(&k) {
                        merged = Some((c[..c.len() - 1].to_vec(), k));
                        break;
                    }
                }
            }
            match merged {
                None => break,
                Some((p, k)) => {
                    let mut c0 = p.clone();
                    c0.push(0);
                    let mut c1 = p.clone();
                    c1.push(1);
                    map.remove(&c0);
                    map.remove(&c1);
                    map.insert(p, k);
                }
            }
        }
        FullGroupTable {
            rows: map.into_iter().collect(),
        }
    }

    pub fn rows(&self) -> &[(Vec<u8>, i64)] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().all(|&(_, k)| k == 0)
    }

    /// Depth of the deepest row. Powers of `τ` preserve depth, so every
    /// word at least this long has an exact image of the same length.
    pub fn resolution_depth(&self) -> usize {
        self.rows.iter().map(|(c, _)| c.len()).max().unwrap_or(0)
    }

    pub fn act_with_section(&self, w: &[u8]) -> Result<(Vec<u8>, FullGroupTable)> {
        if let Some((_, k)) = self.rows.iter().find(|(c, _)| w.starts_with(c)) {
            let (img, carry) = odometer_add(w, *k);
            let section = FullGroupTable {
                rows: alloc::vec![(Vec::new(), check_power(carry)?)],
            };
            return Ok((img, section));
        }
        let unresolved = Error::Unresolved {
            length: w.len(),
            needed: self.resolution_depth(),
        };
        let below: Vec<(&[u8], Vec<u8>, i64)> = self
            .rows
            .iter()
            .filter(|(c, _)| c.starts_with(w))
            .map(|(c, k)| {
                let (img, carry) = odometer_add(c, *k);
                (c.as_slice(), img, carry)
            })
            .collect();
        let images: Vec<&[u8]> = below.iter().map(|(_, img, _)| img.as_slice()).collect();
        let q = longest_common_prefix(&images);
        // Powers of τ preserve measure, so a cylinder image has the same depth.
        if q.len() != w.len() {
            return Err(unresolved);
        }
        let tails: Vec<&[u8]> = images.iter().map(|v| &v[q.len()..]).collect();
        if check_complete_code(Alphabet::BINARY, &tails).is_err() {
            return Err(unresolved);
        }
        let mut rows = Vec::with_capacity(below.len());
        for (c, img, carry) in &below {
            let t = &c[w.len()..];
            let r = &img[q.len()..];
            let (vt, vr) = match (value(t), value(r)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(unresolved),
            };
            let m = vr - vt + (*carry as i128) * (1i128 << t.len());
            let m = i64::try_from(m).map_err(|_| Error::PowerBound(i64::MAX))?;
            rows.push((t.to_vec(), check_power(m)?));
        }
        Ok((q.to_vec(), Self::canonical(rows)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FullGroupTable) -> Result<FullGroupTable> {
        let mut out = Vec::new();
        for (c, k) in &other.rows {
            let (img, carry) = odometer_add(c, *k);
            if let Some((_, k2)) = self.rows.iter().find(|(c2, _)| img.starts_with(c2)) {
                out.push((c.clone(), check_power(k + k2)?));
            } else {
                for (c2, k2) in self.rows.iter().filter(|(c2, _)| c2.starts_with(&img)) {
                    let (pre, _) = odometer_add(&c2[img.len()..], -carry);
                    let mut dom = c.clone();
                    dom.extend_from_slice(&pre);
                    out.push((dom, check_power(k + k2)?));
                }
            }
        }
        Ok(Self::canonical(out))
    }

    pub fn invert(&self) -> FullGroupTable {
        let rows = self
            .rows
            .iter()
            .map(|(c, k)| (odometer_add(c, *k).0, -k))
            .collect();
        Self::canonical(rows)
    }
}

impl fmt::Display for FullGroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (c, k)) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let c = if c.is_empty() { "ε".into() } else { word_string(c) };
            write!(f, "[{c}]:{k:+}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_carries_to_the_right() {
        assert_eq!(odometer_add(&[1, 1], 1), (alloc::vec![0, 0], 1));
        assert_eq!(odometer_add(&[0, 1], 1), (alloc::vec![1, 1], 0));
        assert_eq!(odometer_add(&[1, 0], -1), (alloc::vec![0, 0], 0));
        assert_eq!(odometer_add(&[0, 0], -1), (alloc::vec![1, 1], -1));
    }

    #[test]
    fn validation_examples() {
        assert!(FullGroupTable::from_strs(&[("0", 1), ("1", -1)]).is_ok());
        assert_eq!(
            FullGroupTable::from_strs(&[("0", 1), ("1", 1)]).unwrap(),
            FullGroupTable::odometer()
        );
        assert_eq!(FullGroupTable::from_strs(&[("0", 1), ("1", 0)]), Err(Error::NotBijective));
        assert_eq!(FullGroupTable::from_strs(&[("0", 0)]), Err(Error::IncompleteCode));
        assert_eq!(FullGroupTable::from_strs(&[("", 65)]), Err(Error::PowerBound(65)));
    }

    #[test]
    fn identity_has_depth_zero() {
        let id = FullGroupTable::from_strs(&[("", 0)]).unwrap();
        assert_eq!(id.resolution_depth(), 0);
        assert!(id.is_identity());
    }

    #[test]
    fn first_return_swap_inside_a_cylinder() {
        // Swap [00] and [01] by τ^{±2}, identity on [1].
        let g = FullGroupTable::from_strs(&[("00", 2), ("01", -2), ("1", 0)]).unwrap();
        let (img, s) = g.act_with_section(&[0]).unwrap();
        assert_eq!(img, [0]);
        assert_eq!(s, FullGroupTable::from_strs(&[("0", 1), ("1", -1)]).unwrap());
        assert!(g.compose(&g).unwrap().is_identity());
    }

    #[test]
    fn power_bound_applies_to_products() {
        let g = FullGroupTable::from_strs(&[("", 64)]).unwrap();
        assert_eq!(g.compose(&FullGroupTable::odometer()), Err(Error::PowerBound(65)));
    }
}
