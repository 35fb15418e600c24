//! Named groups: generators, an optional rigid-stabiliser oracle and an
//! optional point classifier.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::elements::{
    ElementKind, FullGroupTable, GenPower, GroupElement, PrefixBijection, TreeElement, WreathTable, MAX_POWER,
};
use crate::symbolic::{Alphabet, BoundaryPoint, Cylinder, Word};
use crate::{Error, Result};

/// Budget used when presets confirm their declared relations.
const PRESET_ID_BUDGET: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointClass {
    Regular,
    Singular,
    NoRule,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointClass::Regular => "REGULAR",
            PointClass::Singular => "SINGULAR",
            PointClass::NoRule => "NO_RULE",
        })
    }
}

/// Preset classification rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classifier {
    None,
    /// Singular exactly at points cofinal with the constant word.
    CofinalWithConstant(u8),
    /// Every point is regular (free actions).
    AllRegular,
}

/// Family-specific generators of (a subgroup of) `rist([v])`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RistOracle {
    None,
    /// Lifts of the branching subgroup `K = ⟨(ab)², (abad)², (bada)²⟩` of the
    /// Grigorchuk group to the vertex `v`.
    GrigorchukBranch,
    /// First-return map of the odometer to `[v]` and the swap of `[v0]`, `[v1]`.
    OdometerFirstReturn,
    /// The generators copied into `[v]` and the swap of `[v0]`, `[v1]`.
    PrefixLocalize,
}

#[derive(Debug, Clone)]
pub struct GroupFamily {
    name: String,
    alphabet: Alphabet,
    kind: ElementKind,
    generators: Vec<(String, GroupElement)>,
    identity: GroupElement,
    oracle: RistOracle,
    classifier: Classifier,
}

/// One step of a generator word: a generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub gen: usize,
    pub inverse: bool,
}

impl GroupFamily {
    /// A family without oracle or classifier. All generators must share one
    /// element kind and alphabet.
    pub fn custom(name: &str, generators: Vec<(String, GroupElement)>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidArgument("a family needs at least one generator".into()))?;
        let identity = first.1.identity_like();
        for (n, g) in &generators {
            identity.compose(g)?;
            if generators.iter().filter(|(m, _)| m == n).count() > 1 {
                return Err(Error::InvalidArgument(format!("duplicate generator name {n}")));
            }
        }
        Ok(GroupFamily {
            name: name.to_string(),
            alphabet: first.1.alphabet(),
            kind: first.1.kind(),
            generators,
            identity,
            oracle: RistOracle::None,
            classifier: Classifier::None,
        })
    }

    pub fn with_oracle(mut self, oracle: RistOracle) -> Self {
        self.oracle = oracle;
        self
    }

    pub fn with_classifier(mut self, classifier: Classifier) -> Self {
        self.classifier = classifier;
        self
    }

    /// The Grigorchuk group: `a = σ`, `b = (a, c)`, `c = (a, d)`, `d = (1, b)`.
    pub fn grigorchuk() -> Self {
        let table = WreathTable::new(
            Alphabet::BINARY,
            &[
                ("a", &[1, 0], &["1", "1"]),
                ("b", &[0, 1], &["a", "c"]),
                ("c", &[0, 1], &["a", "d"]),
                ("d", &[0, 1], &["1", "b"]),
            ],
        )
        .and_then(|t| t.with_involutions(&["a", "b", "c", "d"], PRESET_ID_BUDGET))
        .and_then(|t| {
            t.with_rewrites(
                &[
                    ("b*c", "d"),
                    ("c*b", "d"),
                    ("b*d", "c"),
                    ("d*b", "c"),
                    ("c*d", "b"),
                    ("d*c", "b"),
                ],
                PRESET_ID_BUDGET,
            )
        })
        .expect("Grigorchuk table is valid");
        Self::from_table("grigorchuk", Arc::new(table))
            .with_oracle(RistOracle::GrigorchukBranch)
            .with_classifier(Classifier::CofinalWithConstant(1))
    }

    /// Every generator of a wreath table, in table order.
    pub fn from_table(name: &str, table: Arc<WreathTable>) -> Self {
        let generators = (0..table.generator_count())
            .map(|g| {
                (
                    table.generator_name(g).to_string(),
                    TreeElement::generator(table.clone(), g).into(),
                )
            })
            .collect();
        GroupFamily {
            name: name.to_string(),
            alphabet: table.alphabet(),
            kind: ElementKind::Tree,
            generators,
            identity: TreeElement::identity(table).into(),
            oracle: RistOracle::None,
            classifier: Classifier::None,
        }
    }

    /// The topological full group of the binary odometer, generated by the
    /// odometer `tau` and the swap `{[0]:+1, [1]:-1}`.
    pub fn odometer_full() -> Self {
        let swap = FullGroupTable::from_strs(&[("0", 1), ("1", -1)]).expect("valid swap");
        GroupFamily {
            name: "odometer-full".into(),
            alphabet: Alphabet::BINARY,
            kind: ElementKind::Full,
            generators: alloc::vec![
                ("tau".into(), FullGroupTable::odometer().into()),
                ("swap".into(), swap.into()),
            ],
            identity: FullGroupTable::identity().into(),
            oracle: RistOracle::OdometerFirstReturn,
            classifier: Classifier::AllRegular,
        }
    }

    /// Thompson's group `V` on binary words, with the usual generators of
    /// `F` (`A`, `B`), of `T` (`C`) and the transpositions `pi0`, `pi1`.
    pub fn prefix_v() -> Self {
        let b = Alphabet::BINARY;
        let gens: [(&str, &[(&str, &str)]); 5] = [
            ("A", &[("0", "00"), ("10", "01"), ("11", "1")]),
            ("B", &[("0", "0"), ("10", "100"), ("110", "101"), ("111", "11")]),
            ("C", &[("0", "11"), ("10", "0"), ("11", "10")]),
            ("pi0", &[("0", "10"), ("10", "0"), ("11", "11")]),
            ("pi1", &[("0", "0"), ("10", "110"), ("110", "10"), ("111", "111")]),
        ];
        let generators = gens
            .iter()
            .map(|(n, rules)| {
                let g = PrefixBijection::from_strs(b, rules).expect("valid generator");
                (n.to_string(), g.into())
            })
            .collect();
        GroupFamily {
            name: "prefix-v".into(),
            alphabet: b,
            kind: ElementKind::Prefix,
            generators,
            identity: PrefixBijection::identity(b).into(),
            oracle: RistOracle::PrefixLocalize,
            classifier: Classifier::None,
        }
    }

    /// Looks up a preset by its CLI name.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "grigorchuk" => Some(Self::grigorchuk()),
            "odometer-full" => Some(Self::odometer_full()),
            "prefix-v" => Some(Self::prefix_v()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn generators(&self) -> &[(String, GroupElement)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&GroupElement> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn generator_elements(&self) -> Vec<GroupElement> {
        self.generators.iter().map(|(_, g)| g.clone()).collect()
    }

    pub fn identity(&self) -> &GroupElement {
        &self.identity
    }

    pub fn oracle(&self) -> RistOracle {
        self.oracle
    }

    pub fn classifier(&self) -> Classifier {
        self.classifier
    }

    /// The wreath table behind a tree family.
    pub fn table(&self) -> Option<&Arc<WreathTable>> {
        match &self.identity {
            GroupElement::Tree(t) => Some(t.table()),
            _ => None,
        }
    }

    /// Generators followed by their inverses where these differ, in
    /// generator order.
    pub fn moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for (i, (_, g)) in self.generators.iter().enumerate() {
            out.push(Move { gen: i, inverse: false });
            if g.invert() != *g {
                out.push(Move { gen: i, inverse: true });
            }
        }
        out
    }

    pub fn move_element(&self, m: Move) -> GroupElement {
        let g = &self.generators[m.gen].1;
        if m.inverse {
            g.invert()
        } else {
            g.clone()
        }
    }

    pub fn move_label(&self, m: Move) -> String {
        let name = &self.generators[m.gen].0;
        if m.inverse {
            format!("{name}^-1")
        } else {
            name.clone()
        }
    }

    /// Evaluates a product of moves written left to right as composition.
    pub fn eval_moves(&self, word: &[Move]) -> Result<GroupElement> {
        let mut g = self.identity.clone();
        for &m in word {
            g = g.compose(&self.move_element(m))?;
        }
        Ok(g)
    }

    pub fn label_moves(&self, word: &[Move]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = word.iter().map(|&m| self.move_label(m)).collect();
        parts.join("*")
    }

    /// Distinct elements given by generator words of length at most
    /// `max_word_len`, in shortlex order of their first word, identity
    /// first. Stops after `max_elements` elements.
    pub fn enumerate(&self, max_word_len: usize, max_elements: usize) -> Result<Vec<(String, GroupElement)>> {
        let moves = self.moves();
        let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
        let mut out = alloc::vec![(String::from("1"), self.identity.clone())];
        seen.insert(self.identity.clone());
        let mut layer: Vec<(Vec<Move>, GroupElement)> = alloc::vec![(Vec::new(), self.identity.clone())];
        for _ in 0..max_word_len {
            let mut next = Vec::new();
            for (word, g) in &layer {
                for &m in &moves {
                    if out.len() >= max_elements {
                        return Ok(out);
                    }
                    let h = g.compose(&self.move_element(m))?;
                    if seen.insert(h.clone()) {
                        let mut w = word.clone();
                        w.push(m);
                        let label = match &h {
                            GroupElement::Tree(t) => t.to_string(),
                            _ => self.label_moves(&w),
                        };
                        out.push((label, h.clone()));
                        next.push((w, h));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        Ok(out)
    }

    /// Parses an element in the family's text syntax: a generator word such
    /// as `a*b^-1` for any family.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        if let GroupElement::Tree(t) = &self.identity {
            return TreeElement::parse(t.table().clone(), s).map(Into::into);
        }
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.replace('⁻', "^-").replace('¹', "1");
        let mut g = self.identity.clone();
        if s.is_empty() || s == "1" || s == "e" {
            return Ok(g);
        }
        for factor in s.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            let base = self
                .generator(name)
                .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
            let base = if exp < 0 { base.invert() } else { base.clone() };
            for _ in 0..exp.unsigned_abs() {
                g = g.compose(&base)?;
            }
        }
        Ok(g)
    }

    pub fn classify(&self, x: &BoundaryPoint) -> PointClass {
        match self.classifier {
            Classifier::None => PointClass::NoRule,
            Classifier::AllRegular => PointClass::Regular,
            Classifier::CofinalWithConstant(l) => {
                if x.is_cofinal_with_constant(l) {
                    PointClass::Singular
                } else {
                    PointClass::Regular
                }
            }
        }
    }

    /// Oracle output for `rist(u)`, or `None` when the family has no oracle.
    /// An empty list means the oracle has nothing to offer at this depth.
    pub fn rist_oracle(&self, u: &Cylinder) -> Result<Option<Vec<GroupElement>>> {
        self.alphabet.same(u.alphabet())?;
        match self.oracle {
            RistOracle::None => Ok(None),
            RistOracle::GrigorchukBranch => self.grigorchuk_branch(u).map(Some),
            RistOracle::OdometerFirstReturn => Ok(Some(odometer_first_return(u.prefix().letters())?)),
            RistOracle::PrefixLocalize => self.prefix_localize(u).map(Some),
        }
    }

    fn grigorchuk_branch(&self, u: &Cylinder) -> Result<Vec<GroupElement>> {
        if u.depth() == 0 {
            return Ok(self.generator_elements());
        }
        let table = self
            .table()
            .ok_or_else(|| Error::InvalidArgument("branch oracle needs a wreath table".into()))?;
        let idx = |n: &str| -> Result<GenPower> {
            Ok(GenPower {
                gen: table.index_of(n)? as u16,
                inverse: false,
            })
        };
        let (a, b, c, d) = (idx("a")?, idx("b")?, idx("c")?, idx("d")?);
        // σ: a ↦ aca, b ↦ d, c ↦ b, d ↦ c, so that σ(w) = (π(w), w) with π trivial on K.
        let sigma = |w: &[GenPower]| -> Vec<GenPower> {
            let mut out = Vec::with_capacity(w.len() * 2);
            for &p in w {
                let p = GenPower { gen: p.gen, inverse: false };
                if p == a {
                    out.extend_from_slice(&[a, c, a]);
                } else if p == b {
                    out.push(d);
                } else if p == c {
                    out.push(b);
                } else if p == d {
                    out.push(c);
                }
            }
            table.reduce(out)
        };
        let mut out = Vec::new();
        for k in ["a*b*a*b", "b*a*d*a*b*a*d*a", "a*b*a*d*a*b*a*d"] {
            let mut w = table.parse_word(k)?;
            for &letter in u.prefix().letters().iter().rev() {
                w = sigma(&w);
                if letter == 0 {
                    let mut conj = alloc::vec![a];
                    conj.extend_from_slice(&w);
                    conj.push(a);
                    w = table.reduce(conj);
                }
            }
            out.push(TreeElement::from_word(table.clone(), w).into());
        }
        Ok(out)
    }

    fn prefix_localize(&self, u: &Cylinder) -> Result<Vec<GroupElement>> {
        let alphabet = self.alphabet;
        let p = u.prefix().letters();
        let outside: Vec<(Vec<u8>, Vec<u8>)> = u
            .complement_code()
            .into_iter()
            .map(|c| (c.prefix().letters().to_vec(), c.prefix().letters().to_vec()))
            .collect();
        let build = |inside: Vec<(Vec<u8>, Vec<u8>)>| -> Result<GroupElement> {
            let mut rules: Vec<(Word, Word)> = Vec::new();
            for (x, y) in outside.iter().cloned().chain(inside) {
                rules.push((Word::new(alphabet, x)?, Word::new(alphabet, y)?));
            }
            Ok(PrefixBijection::new(alphabet, rules)?.into())
        };
        let mut out = Vec::new();
        for (_, g) in &self.generators {
            if let GroupElement::Prefix(pb) = g {
                let inside = pb
                    .rules()
                    .iter()
                    .map(|(x, y)| {
                        let mut px = p.to_vec();
                        px.extend_from_slice(x);
                        let mut py = p.to_vec();
                        py.extend_from_slice(y);
                        (px, py)
                    })
                    .collect();
                out.push(build(inside)?);
            }
        }
        let mut swap = Vec::new();
        for l in alphabet.letters() {
            let mut from = p.to_vec();
            from.push(l);
            let mut to = p.to_vec();
            to.push(match l {
                0 => 1,
                1 => 0,
                other => other,
            });
            swap.push((from, to));
        }
        let swap = build(swap)?;
        if !out.contains(&swap) {
            out.push(swap);
        }
        Ok(out)
    }
}

/// `τ^{2^n}` on `[v]` and the exchange of `[v0]` and `[v1]` by `τ^{±2^n}`,
/// both the identity off `[v]`. Empty once `2^n` exceeds the power bound.
pub fn odometer_first_return(v: &[u8]) -> Result<Vec<GroupElement>> {
    let n = v.len();
    if n >= 63 || (1i64 << n) > MAX_POWER {
        return Ok(Vec::new());
    }
    let step = 1i64 << n;
    let outside: Vec<(Vec<u8>, i64)> = (0..n)
        .map(|i| {
            let mut c = v[..i].to_vec();
            c.push(1 - v[i]);
            (c, 0)
        })
        .collect();
    let mut ret = outside.clone();
    ret.push((v.to_vec(), step));
    let mut swap = outside;
    let mut v0 = v.to_vec();
    v0.push(0);
    let mut v1 = v.to_vec();
    v1.push(1);
    swap.push((v0, step));
    swap.push((v1, -step));
    let mk = |rows: Vec<(Vec<u8>, i64)>| -> Result<GroupElement> {
        let rows = rows
            .into_iter()
            .map(|(c, k)| Ok((Word::new(Alphabet::BINARY, c)?, k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FullGroupTable::new(rows)?.into())
    };
    Ok(alloc::vec![mk(ret)?, mk(swap)?])
}
