//! Stabilisers, rigid stabilisers, neighbourhood stabilisers and germs.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::elements::GroupElement;
use crate::family::GroupFamily;
use crate::symbolic::{BoundaryPoint, Cylinder};
use crate::{Error, Result, Ternary};

/// Whether `g(x) = x`. `Unknown` only when the point image needs more than
/// `max_states` states.
pub fn stabilises(g: &GroupElement, x: &BoundaryPoint, max_states: usize) -> Result<Ternary> {
    match g.act_point(x, max_states) {
        Ok(img) => Ok(Ternary::from_bool(img == *x)),
        Err(Error::NoCycleWithinBound(_)) => Ok(Ternary::Unknown),
        Err(e) => Err(e),
    }
}

/// Whether `g` is the identity on `c`: it maps `prefix(c)` to itself and its
/// section there is the identity.
pub fn fixes_cylinder_pointwise(g: &GroupElement, c: &Cylinder, budget: usize) -> Result<Ternary> {
    let (img, section) = g.act_with_section(c.prefix())?;
    if img != *c.prefix() {
        return Ok(Ternary::No);
    }
    Ok(section.is_identity(budget))
}

/// Like [`fixes_cylinder_pointwise`], but an unresolved cylinder is split
/// into its children until the element resolves.
fn fixes_refining(g: &GroupElement, c: &Cylinder, budget: usize) -> Result<Ternary> {
    match fixes_cylinder_pointwise(g, c, budget) {
        Err(Error::Unresolved { .. }) if c.depth() < g.resolution_depth() => {
            let mut acc = Ternary::Yes;
            for child in c.children() {
                acc = acc.and(fixes_refining(g, &child, budget)?);
                if acc.is_no() {
                    break;
                }
            }
            Ok(acc)
        }
        Err(Error::Unresolved { .. }) => Ok(Ternary::No),
        other => other,
    }
}

/// Whether `g ∈ rist(u)`, i.e. `g` fixes the complement of `u` pointwise.
/// The complement is checked on its coarsest cylinder cover.
pub fn in_rigid_stabiliser(g: &GroupElement, u: &Cylinder, budget: usize) -> Result<Ternary> {
    g.alphabet().same(u.alphabet())?;
    let mut acc = Ternary::Yes;
    for c in u.complement_code() {
        acc = acc.and(fixes_refining(g, &c, budget)?);
        if acc.is_no() {
            break;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GermVerdict {
    /// Fixes the depth-`n` cylinder around the point pointwise.
    Trivial(usize),
    /// Stabilises the point, but fixes no cylinder around it up to this depth.
    NontrivialUpTo(usize),
    NotInStabiliser,
    Unknown,
}

impl GermVerdict {
    pub fn is_trivial(self) -> bool {
        matches!(self, GermVerdict::Trivial(_))
    }

    pub fn witness_depth(self) -> Option<usize> {
        match self {
            GermVerdict::Trivial(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for GermVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GermVerdict::Trivial(n) => write!(f, "TRIVIAL({n})"),
            GermVerdict::NontrivialUpTo(n) => write!(f, "NONTRIVIAL_UP_TO({n})"),
            GermVerdict::NotInStabiliser => f.write_str("NOT_IN_STABILISER"),
            GermVerdict::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

/// Decides the germ of `g` at `x` up to `max_depth`: the least depth at which
/// `g` fixes the cylinder around `x` pointwise.
pub fn in_neighbourhood_stabiliser(
    g: &GroupElement,
    x: &BoundaryPoint,
    max_depth: usize,
    budget: usize,
    max_states: usize,
) -> Result<GermVerdict> {
    match stabilises(g, x, max_states)? {
        Ternary::No => return Ok(GermVerdict::NotInStabiliser),
        Ternary::Unknown => return Ok(GermVerdict::Unknown),
        Ternary::Yes => {}
    }
    let mut undecided = false;
    for n in 0..=max_depth {
        match fixes_refining(g, &x.cylinder(n), budget)? {
            Ternary::Yes => return Ok(GermVerdict::Trivial(n)),
            Ternary::Unknown => undecided = true,
            Ternary::No => {}
        }
    }
    Ok(if undecided {
        GermVerdict::Unknown
    } else {
        GermVerdict::NontrivialUpTo(max_depth)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermClass {
    pub representative: String,
    pub element: GroupElement,
    /// Verdict of the representative itself at the point.
    pub verdict: GermVerdict,
    /// Some quotient against an earlier class was undecided, so this class
    /// may coincide with one of them.
    pub provisional: bool,
    /// Number of enumerated stabiliser elements assigned to the class.
    pub members: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermReport {
    pub point: BoundaryPoint,
    pub classes: Vec<GermClass>,
    /// Number of enumerated elements that stabilise the point.
    pub stabilising: usize,
    /// Elements whose stabilisation could not be decided.
    pub undecided: usize,
}

impl GermReport {
    /// Definitive classes are pairwise distinct, so their number bounds
    /// `|St(x)/St⁰(x)|` from below.
    pub fn lower_bound(&self) -> usize {
        self.classes.iter().filter(|c| !c.provisional).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GermBudget {
    pub max_word_len: usize,
    pub max_depth: usize,
    pub id_budget: usize,
    pub max_states: usize,
    pub max_elements: usize,
}

/// Partitions enumerated stabiliser elements of `x` by their germs, using
/// pairwise quotient verdicts against the class representatives found so far.
pub fn germ_classes(family: &GroupFamily, x: &BoundaryPoint, budget: GermBudget) -> Result<GermReport> {
    family.alphabet().same(x.alphabet())?;
    let verdict = |g: &GroupElement| {
        in_neighbourhood_stabiliser(g, x, budget.max_depth, budget.id_budget, budget.max_states)
    };
    let mut classes: Vec<GermClass> = Vec::new();
    let mut stabilising = 0;
    let mut undecided = 0;
    for (label, g) in family.enumerate(budget.max_word_len, budget.max_elements)? {
        match stabilises(&g, x, budget.max_states)? {
            Ternary::No => continue,
            Ternary::Unknown => {
                undecided += 1;
                continue;
            }
            Ternary::Yes => stabilising += 1,
        }
        let mut provisional = false;
        let mut home = None;
        for (i, class) in classes.iter().enumerate() {
            match verdict(&g.compose(&class.element.invert())?)? {
                GermVerdict::Trivial(_) => {
                    home = Some(i);
                    break;
                }
                GermVerdict::Unknown => provisional = true,
                _ => {}
            }
        }
        match home {
            Some(i) => classes[i].members += 1,
            None => classes.push(GermClass {
                representative: label,
                verdict: verdict(&g)?,
                element: g,
                provisional,
                members: 1,
            }),
        }
    }
    Ok(GermReport {
        point: x.clone(),
        classes,
        stabilising,
        undecided,
    })
}

pub use crate::family::PointClass;

pub fn classify_point(family: &GroupFamily, x: &BoundaryPoint) -> PointClass {
    family.classify(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Alphabet;

    fn pt(s: &str) -> BoundaryPoint {
        BoundaryPoint::parse(Alphabet::BINARY, s).unwrap()
    }

    fn cyl(s: &str) -> Cylinder {
        Cylinder::parse(Alphabet::BINARY, s).unwrap()
    }

    #[test]
    fn fixing_cylinders() {
        let f = GroupFamily::grigorchuk();
        let d = f.generator("d").unwrap();
        let b = f.generator("b").unwrap();
        assert_eq!(fixes_cylinder_pointwise(d, &cyl("0"), 64).unwrap(), Ternary::Yes);
        assert_eq!(fixes_cylinder_pointwise(b, &cyl("0"), 64).unwrap(), Ternary::No);
        assert_eq!(in_rigid_stabiliser(d, &cyl("0"), 64).unwrap(), Ternary::No);
        assert_eq!(in_rigid_stabiliser(d, &cyl("1"), 256).unwrap(), Ternary::Yes);
        assert_eq!(in_rigid_stabiliser(f.generator("a").unwrap(), &cyl("0"), 64).unwrap(), Ternary::No);
    }

    #[test]
    fn refinement_handles_coarse_cylinders() {
        let f = GroupFamily::odometer_full();
        let ret = crate::family::odometer_first_return(&[1, 0]).unwrap();
        for g in &ret {
            assert_eq!(in_rigid_stabiliser(g, &cyl("10"), 8).unwrap(), Ternary::Yes, "{g}");
            assert_eq!(in_rigid_stabiliser(g, &cyl("11"), 8).unwrap(), Ternary::No, "{g}");
        }
        let tau = f.generator("tau").unwrap();
        assert_eq!(in_rigid_stabiliser(tau, &cyl("1"), 8).unwrap(), Ternary::No);
    }

    #[test]
    fn germ_verdicts() {
        let f = GroupFamily::grigorchuk();
        let g = |n: &str| f.generator(n).unwrap().clone();
        assert_eq!(
            in_neighbourhood_stabiliser(&g("d"), &pt("(0)"), 5, 64, 4096).unwrap(),
            GermVerdict::Trivial(1)
        );
        assert_eq!(
            in_neighbourhood_stabiliser(&g("b"), &pt("(1)"), 20, 256, 4096).unwrap(),
            GermVerdict::NontrivialUpTo(20)
        );
        assert_eq!(
            in_neighbourhood_stabiliser(&g("a"), &pt("(1)"), 5, 64, 4096).unwrap(),
            GermVerdict::NotInStabiliser
        );
        assert_eq!(stabilises(&g("b"), &pt("(1)"), 4096).unwrap(), Ternary::Yes);
        assert_eq!(stabilises(&g("a"), &pt("(1)"), 4096).unwrap(), Ternary::No);
    }
}
