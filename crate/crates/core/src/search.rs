//! Orbit certificates, minimality witnesses, rigid-stabiliser discovery and
//! transporter search. All searches are breadth first with moves tried in a
//! fixed order, so results are shortlex-minimal and reproducible.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::elements::GroupElement;
use crate::engine::in_rigid_stabiliser;
use crate::family::GroupFamily;
use crate::symbolic::{BoundaryPoint, Cylinder, Word};
use crate::{Error, Result, Ternary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchBudget {
    pub max_word_len: usize,
    pub max_states: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_word_len: 10,
            max_states: 200_000,
        }
    }
}

impl SearchBudget {
    pub fn new(max_word_len: usize, max_states: usize) -> Result<Self> {
        if max_word_len == 0 || max_states == 0 {
            return Err(Error::InvalidArgument("search budgets must be positive".into()));
        }
        Ok(SearchBudget {
            max_word_len,
            max_states,
        })
    }

    /// No limit on word length; only the state count bounds the search.
    pub fn states_only(max_states: usize) -> Self {
        SearchBudget {
            max_word_len: usize::MAX,
            max_states,
        }
    }
}

/// A product of generators: `(index, inverse)` pairs, leftmost applied last.
pub type MoveWord = Vec<(usize, bool)>;

/// Moves of a generator list: each generator, then its inverse unless the
/// generator is an involution.
fn moves_of(gens: &[GroupElement]) -> Vec<((usize, bool), GroupElement)> {
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        out.push(((i, false), g.clone()));
        let inv = g.invert();
        if inv != *g {
            out.push(((i, true), inv));
        }
    }
    out
}

/// Replays a move word over a generator list.
pub fn replay(gens: &[GroupElement], word: &[(usize, bool)], identity: &GroupElement) -> Result<GroupElement> {
    let mut g = identity.clone();
    for &(i, inv) in word {
        let m = if inv { gens[i].invert() } else { gens[i].clone() };
        g = g.compose(&m)?;
    }
    Ok(g)
}

/// Depth-`depth` cylinders met by `g([c])`.
fn image_cylinders(g: &GroupElement, c: &Cylinder, depth: usize) -> Result<Vec<Cylinder>> {
    let fine = c.depth().max(g.resolution_depth());
    let mut out = BTreeSet::new();
    for piece in c.subcylinders(fine) {
        let img = g.act_cylinder(&piece)?;
        if img.depth() >= depth {
            out.insert(Cylinder::new(img.prefix().prefix(depth)));
        } else {
            out.extend(img.subcylinders(depth));
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCertificate {
    pub seed: Cylinder,
    pub depth: usize,
    /// Reached cylinders with a shortest move word carrying a depth-`depth`
    /// piece of the seed into them.
    pub reached: BTreeMap<Cylinder, MoveWord>,
    /// The search stopped on a budget before the orbit closed.
    pub truncated: bool,
}

impl OrbitCertificate {
    pub fn is_complete(&self) -> bool {
        !self.truncated
    }
}

/// Breadth-first orbit of the depth-`depth` pieces of `seed`.
pub fn cylinder_orbit(
    gens: &[GroupElement],
    seed: &Cylinder,
    depth: usize,
    budget: SearchBudget,
) -> Result<OrbitCertificate> {
    if depth < seed.depth() {
        return Err(Error::InvalidArgument(format!(
            "orbit depth {depth} is shallower than the seed {seed}"
        )));
    }
    for g in gens {
        g.alphabet().same(seed.alphabet())?;
    }
    let moves = moves_of(gens);
    let mut reached: BTreeMap<Cylinder, MoveWord> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for c in seed.subcylinders(depth) {
        reached.insert(c.clone(), Vec::new());
        queue.push_back(c);
    }
    let mut truncated = false;
    while let Some(c) = queue.pop_front() {
        let word = reached[&c].clone();
        for (m, g) in &moves {
            for img in image_cylinders(g, &c, depth)? {
                if reached.contains_key(&img) {
                    continue;
                }
                if word.len() >= budget.max_word_len || reached.len() >= budget.max_states {
                    truncated = true;
                    continue;
                }
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(*m);
                w.extend_from_slice(&word);
                reached.insert(img.clone(), w);
                queue.push_back(img);
            }
        }
    }
    Ok(OrbitCertificate {
        seed: seed.clone(),
        depth,
        reached,
        truncated,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityWitness {
    pub depth: usize,
    /// Every seed reaches every depth-`depth` cylinder.
    pub holds: bool,
    pub truncated: bool,
    pub certificates: Vec<OrbitCertificate>,
}

/// Finite-depth surrogate for minimality: from every depth-`depth` cylinder
/// the generators reach every other one. Necessary for minimality, not
/// sufficient.
pub fn minimality_witness(
    gens: &[GroupElement],
    alphabet: crate::symbolic::Alphabet,
    depth: usize,
    budget: SearchBudget,
) -> Result<MinimalityWitness> {
    let total = Cylinder::whole(alphabet).subcylinders(depth);
    let mut certificates = Vec::with_capacity(total.len());
    let mut holds = true;
    let mut truncated = false;
    for seed in &total {
        let cert = cylinder_orbit(gens, seed, depth, budget)?;
        holds &= cert.reached.len() == total.len();
        truncated |= cert.truncated;
        certificates.push(cert);
    }
    Ok(MinimalityWitness {
        depth,
        holds,
        truncated,
        certificates,
    })
}

type RistKey = (String, Cylinder, usize, usize, usize);

/// Memoised rigid-stabiliser searches, keyed by family, cylinder and budgets.
#[derive(Debug, Default, Clone)]
pub struct RistCache {
    entries: BTreeMap<RistKey, Vec<(String, GroupElement)>>,
}

impl RistCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Enumerated non-identity elements lying in `rist(u)`.
pub fn rist_search(
    family: &GroupFamily,
    u: &Cylinder,
    budget: SearchBudget,
    id_budget: usize,
    cache: &mut RistCache,
) -> Result<Vec<(String, GroupElement)>> {
    let key = (
        String::from(family.name()),
        u.clone(),
        budget.max_word_len,
        budget.max_states,
        id_budget,
    );
    if let Some(hit) = cache.entries.get(&key) {
        return Ok(hit.clone());
    }
    let mut out = Vec::new();
    for (label, g) in family.enumerate(budget.max_word_len, budget.max_states)? {
        if g.is_identity(id_budget) != Ternary::No {
            continue;
        }
        if in_rigid_stabiliser(&g, u, id_budget)? == Ternary::Yes {
            out.push((label, g));
        }
    }
    cache.entries.insert(key, out.clone());
    Ok(out)
}

/// Generators of a subgroup of `rist(u)`: the family's oracle when it has
/// something to offer, otherwise enumeration. Oracle output is re-checked.
pub fn rist_generators(
    family: &GroupFamily,
    u: &Cylinder,
    budget: SearchBudget,
    id_budget: usize,
    cache: &mut RistCache,
) -> Result<Vec<GroupElement>> {
    if let Some(found) = family.rist_oracle(u)? {
        if !found.is_empty() {
            for g in &found {
                if in_rigid_stabiliser(g, u, id_budget)? != Ternary::Yes {
                    return Err(Error::InvalidArgument(format!(
                        "oracle element {g} is not confirmed in rist({u})"
                    )));
                }
            }
            return Ok(found);
        }
    }
    let found: Vec<GroupElement> = rist_search(family, u, budget, id_budget, cache)?
        .into_iter()
        .map(|(_, g)| g)
        .collect();
    if found.is_empty() {
        return Err(Error::EmptyRist(format!("{}", u.prefix())));
    }
    Ok(found)
}

/// Breadth-first search over points for a product `h` of `gens` (and their
/// inverses) such that `goal(h, h(start))` holds. Points are visited once;
/// the first hit in shortlex order is returned.
pub fn transporter_where<F>(
    gens: &[GroupElement],
    identity: &GroupElement,
    start: &BoundaryPoint,
    budget: SearchBudget,
    point_budget: usize,
    goal: F,
) -> Result<(GroupElement, MoveWord)>
where
    F: FnMut(&GroupElement, &BoundaryPoint) -> Result<bool>,
{
    transporter_keyed(gens, identity, start, budget, point_budget, |_, p| Ok(p.clone()), goal)
}

/// As [`transporter_where`], but states are identified by `key(h, h(start))`
/// instead of by the point alone, for goals that depend on more than the
/// point.
pub fn transporter_keyed<K, KF, F>(
    gens: &[GroupElement],
    identity: &GroupElement,
    start: &BoundaryPoint,
    budget: SearchBudget,
    point_budget: usize,
    mut key: KF,
    mut goal: F,
) -> Result<(GroupElement, MoveWord)>
where
    K: Ord,
    KF: FnMut(&GroupElement, &BoundaryPoint) -> Result<K>,
    F: FnMut(&GroupElement, &BoundaryPoint) -> Result<bool>,
{
    if goal(identity, start)? {
        return Ok((identity.clone(), Vec::new()));
    }
    let moves = moves_of(gens);
    let mut seen: BTreeSet<K> = BTreeSet::new();
    seen.insert(key(identity, start)?);
    let mut layer: Vec<(GroupElement, MoveWord, BoundaryPoint)> =
        alloc::vec![(identity.clone(), Vec::new(), start.clone())];
    for _ in 0..budget.max_word_len {
        let mut next = Vec::new();
        for (h, word, point) in &layer {
            for (m, g) in &moves {
                let p = g.act_point(point, point_budget)?;
                let h2 = g.compose(h)?;
                if !seen.insert(key(&h2, &p)?) {
                    continue;
                }
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(*m);
                w.extend_from_slice(word);
                if goal(&h2, &p)? {
                    return Ok((h2, w));
                }
                if seen.len() >= budget.max_states {
                    return Err(Error::SearchExhausted(format!(
                        "{} states visited without reaching the target",
                        seen.len()
                    )));
                }
                next.push((h2, w, p));
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Err(Error::SearchExhausted(format!(
        "no product of length at most {} reaches the target",
        budget.max_word_len
    )))
}

/// A product `h` of `gens` with `prefix(h(current), |target|) = target`.
pub fn transporter(
    gens: &[GroupElement],
    identity: &GroupElement,
    current: &BoundaryPoint,
    target: &Word,
    budget: SearchBudget,
    point_budget: usize,
) -> Result<GroupElement> {
    current.alphabet().same(target.alphabet())?;
    transporter_where(gens, identity, current, budget, point_budget, |_, p| {
        Ok(p.prefix(target.len()) == *target)
    })
    .map(|(h, _)| h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMinimality {
    pub cylinder: Cylinder,
    pub depth: usize,
    /// Every orbit of `rist(u)` on the depth-`depth` pieces of `u` consists of
    /// all pieces of some sub-cylinder `W`, so the rigid stabiliser acts
    /// minimally on each such `W` at this depth.
    pub holds: bool,
    /// A single orbit covers all of `u`.
    pub minimal_on_u: bool,
    /// The cylinders `W` (one per orbit), or empty when `holds` is false.
    pub blocks: Vec<Cylinder>,
    pub truncated: bool,
    pub certificates: Vec<OrbitCertificate>,
}

/// Orbit structure of `rist_generators(family, u)` on the depth-`depth`
/// sub-cylinders of `u`.
pub fn local_minimality_witness(
    family: &GroupFamily,
    u: &Cylinder,
    depth: usize,
    budget: SearchBudget,
    id_budget: usize,
    cache: &mut RistCache,
) -> Result<LocalMinimality> {
    if depth <= u.depth() {
        return Ok(LocalMinimality {
            cylinder: u.clone(),
            depth,
            holds: true,
            minimal_on_u: true,
            blocks: alloc::vec![u.clone()],
            truncated: false,
            certificates: Vec::new(),
        });
    }
    let gens = rist_generators(family, u, budget, id_budget, cache)?;
    let k = u.alphabet().size();
    let mut covered: BTreeSet<Cylinder> = BTreeSet::new();
    let mut certificates = Vec::new();
    let mut blocks = Vec::new();
    let mut holds = true;
    let mut truncated = false;
    for seed in u.subcylinders(depth) {
        if covered.contains(&seed) {
            continue;
        }
        let cert = cylinder_orbit(&gens, &seed, depth, SearchBudget::states_only(budget.max_states))?;
        truncated |= cert.truncated;
        let members: Vec<&[u8]> = cert.reached.keys().map(|c| c.prefix().letters()).collect();
        let common = crate::elements::longest_common_prefix(&members);
        let full = (depth - common.len()) as u32;
        if k.checked_pow(full) != Some(members.len()) {
            holds = false;
        } else {
            blocks.push(Cylinder::new(Word::new(u.alphabet(), common.to_vec())?));
        }
        covered.extend(cert.reached.keys().cloned());
        certificates.push(cert);
    }
    if !holds {
        blocks.clear();
    }
    Ok(LocalMinimality {
        cylinder: u.clone(),
        depth,
        holds,
        minimal_on_u: certificates.len() == 1,
        blocks,
        truncated,
        certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Alphabet;

    fn cyl(s: &str) -> Cylinder {
        Cylinder::parse(Alphabet::BINARY, s).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let g = GroupFamily::grigorchuk();
        let cert = cylinder_orbit(&g.generator_elements(), &cyl("00000"), 5, SearchBudget::states_only(1000)).unwrap();
        assert_eq!(cert.reached.len(), 32);
        let o = GroupFamily::odometer_full();
        let tau = alloc::vec![o.generator("tau").unwrap().clone()];
        let cert = cylinder_orbit(&tau, &cyl("0"), 1, SearchBudget::default()).unwrap();
        assert_eq!(cert.reached.len(), 2);
        let cert = cylinder_orbit(&[], &cyl("01"), 2, SearchBudget::default()).unwrap();
        assert_eq!(cert.reached.keys().cloned().collect::<Vec<_>>(), alloc::vec![cyl("01")]);
    }

    #[test]
    fn transporter_examples() {
        let o = GroupFamily::odometer_full();
        let tau = o.generator("tau").unwrap().clone();
        let zero = BoundaryPoint::parse(Alphabet::BINARY, "(0)").unwrap();
        let target = Word::parse(Alphabet::BINARY, "1").unwrap();
        let h = transporter(core::slice::from_ref(&tau), o.identity(), &zero, &target, SearchBudget::default(), 64).unwrap();
        assert_eq!(h, tau);
        let here = Word::parse(Alphabet::BINARY, "000").unwrap();
        let h = transporter(&[tau], o.identity(), &zero, &here, SearchBudget::default(), 64).unwrap();
        assert_eq!(h, *o.identity());
    }
}
