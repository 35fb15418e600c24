//! Finite certificates for a homeomorphism `f` with `f(x) = y` that
//! conjugates the neighbourhood stabiliser of `x` onto that of `y`.
//!
//! Stage `i` records a depth `d_i`, cylinders `U_i ∋ x`, `V_i = g_i(U_i) ∋ y`
//! and `W_i ⊆ V_i` with `g_i(x) ∈ W_i`, and `g_i = h_i ∘ g_{i-1}` where `h_i`
//! fixes the complement of `V_{i-1}` pointwise. The maps `g_i` stabilise on
//! every point other than `x`, and their pointwise limit is `f`.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::elements::{ElementKind, GroupElement};
use crate::engine::{fixes_cylinder_pointwise, in_neighbourhood_stabiliser, in_rigid_stabiliser, GermVerdict};
use crate::family::GroupFamily;
use crate::search::{minimality_witness, rist_generators, transporter_keyed, RistCache, SearchBudget};
use crate::symbolic::{Alphabet, BoundaryPoint, Cylinder, DepthSchedule, Word};
use crate::{Error, Result, Ternary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Budgets {
    pub search: SearchBudget,
    /// Section-closure budget of the identity test.
    pub id_budget: usize,
    /// State budget for point images.
    pub point_budget: usize,
    /// Extra transporter attempts, each with two more letters of word length.
    pub retries: usize,
    /// `W_i` is the cylinder around `y` this many letters deeper than `V_i`.
    pub margin: usize,
    /// Depth bound for germ verdicts.
    pub germ_depth: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            search: SearchBudget::default(),
            id_budget: 512,
            point_budget: 4096,
            retries: 3,
            margin: 1,
            germ_depth: 30,
        }
    }
}

impl Budgets {
    /// Multiplies every budget (not the margin) by `factor`, keeping each at
    /// least one.
    pub fn scaled(self, factor: f64) -> Self {
        let s = |v: usize| -> usize {
            let scaled = v as f64 * factor;
            if scaled >= usize::MAX as f64 {
                usize::MAX
            } else if scaled < 1.0 {
                1
            } else {
                scaled as usize
            }
        };
        Budgets {
            search: SearchBudget {
                max_word_len: s(self.search.max_word_len),
                max_states: s(self.search.max_states),
            },
            id_budget: s(self.id_budget),
            point_budget: s(self.point_budget),
            retries: self.retries,
            margin: self.margin,
            germ_depth: s(self.germ_depth),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub index: usize,
    pub depth: usize,
    pub u: Cylinder,
    pub v: Cylinder,
    pub w: Cylinder,
    pub h: GroupElement,
    pub g: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugatorCertificate {
    pub family: String,
    pub alphabet: Alphabet,
    pub x: BoundaryPoint,
    pub y: BoundaryPoint,
    /// Stage 0 is the identity on the whole space.
    pub stages: Vec<Stage>,
    pub budgets: Budgets,
    pub design_flags: Vec<String>,
    pub warnings: Vec<String>,
}

impl ConjugatorCertificate {
    pub fn last(&self) -> &Stage {
        self.stages.last().expect("stage 0 is always present")
    }

    pub fn depths(&self) -> Vec<usize> {
        self.stages.iter().skip(1).map(|s| s.depth).collect()
    }
}

/// A failed build, with the stages completed before the failure.
#[derive(Debug, Clone)]
pub struct BuildFailure {
    pub partial: ConjugatorCertificate,
    pub error: Error,
}

impl fmt::Display for BuildFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (after {} completed stages)",
            self.error,
            self.partial.stages.len() - 1
        )
    }
}

fn design_flags(margin: usize) -> Vec<String> {
    if margin == 0 {
        alloc::vec!["W_equals_V".to_string()]
    } else {
        alloc::vec![format!("W_depth_margin:{margin}")]
    }
}

fn origin(family: &GroupFamily, x: &BoundaryPoint, y: &BoundaryPoint, budgets: Budgets) -> ConjugatorCertificate {
    let whole = Cylinder::whole(family.alphabet());
    ConjugatorCertificate {
        family: family.name().to_string(),
        alphabet: family.alphabet(),
        x: x.clone(),
        y: y.clone(),
        stages: alloc::vec![Stage {
            index: 0,
            depth: 0,
            u: whole.clone(),
            v: whole.clone(),
            w: whole,
            h: family.identity().clone(),
            g: family.identity().clone(),
        }],
        budgets,
        design_flags: design_flags(budgets.margin),
        warnings: Vec::new(),
    }
}

/// Runs the induction along `schedule`.
pub fn build_conjugator(
    family: &GroupFamily,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    schedule: &DepthSchedule,
    budgets: Budgets,
    cache: &mut RistCache,
) -> core::result::Result<ConjugatorCertificate, BuildFailure> {
    let mut cert = origin(family, x, y, budgets);
    let fail = |cert: &ConjugatorCertificate, error| BuildFailure {
        partial: cert.clone(),
        error,
    };
    if let Err(e) = family.alphabet().same(x.alphabet()).and(family.alphabet().same(y.alphabet())) {
        return Err(fail(&cert, e));
    }
    if let Some(&d1) = schedule.depths().first() {
        let gens = family.generator_elements();
        match minimality_witness(&gens, family.alphabet(), d1, SearchBudget::states_only(budgets.search.max_states)) {
            Ok(w) if w.holds => {}
            Ok(_) => cert
                .warnings
                .push(format!("minimality witness fails at depth {d1}")),
            Err(e) => return Err(fail(&cert, e)),
        }
    }
    extend(cert, family, schedule.depths(), cache)
}

/// Appends stages at the given depths, which must exceed the last one.
/// Earlier stages are untouched.
pub fn extend(
    mut cert: ConjugatorCertificate,
    family: &GroupFamily,
    depths: &[usize],
    cache: &mut RistCache,
) -> core::result::Result<ConjugatorCertificate, BuildFailure> {
    for &d in depths {
        if d <= cert.last().depth {
            return Err(BuildFailure {
                partial: cert,
                error: Error::InvalidSchedule,
            });
        }
        match next_stage(family, &cert, d, cache) {
            Ok(stage) => cert.stages.push(stage),
            Err(error) => return Err(BuildFailure { partial: cert, error }),
        }
    }
    Ok(cert)
}

fn agrees(p: &BoundaryPoint, q: &BoundaryPoint, n: usize) -> Result<bool> {
    Ok(match p.first_disagreement(q)? {
        None => true,
        Some(i) => i >= n,
    })
}

fn next_stage(family: &GroupFamily, cert: &ConjugatorCertificate, d: usize, cache: &mut RistCache) -> Result<Stage> {
    let budgets = cert.budgets;
    let prev = cert.last();
    let gens = rist_generators(family, &prev.v, budgets.search, budgets.id_budget, cache)?;
    let current = prev.g.act_point(&cert.x, budgets.point_budget)?;
    let u = cert.x.cylinder(d);
    let moved = match prev.g.act_word(u.prefix()) {
        Ok(w) => Some(w),
        Err(Error::Unresolved { .. }) => None,
        Err(e) => return Err(e),
    };
    let image = |h: &GroupElement| -> Result<Option<Word>> {
        if let Some(w) = &moved {
            match h.act_word(w) {
                Ok(v) => return Ok(Some(v)),
                Err(Error::Unresolved { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        match h.compose(&prev.g)?.act_word(u.prefix()) {
            Ok(v) => Ok(Some(v)),
            Err(Error::Unresolved { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let y = &cert.y;
    let goal = |h: &GroupElement, p: &BoundaryPoint| -> Result<bool> {
        match image(h)? {
            Some(v) if v.len() >= d => agrees(p, y, v.len() + budgets.margin),
            _ => Ok(false),
        }
    };
    let mut search = budgets.search;
    let mut attempt = 0;
    let h = loop {
        let key = |h: &GroupElement, p: &BoundaryPoint| -> Result<(BoundaryPoint, Option<Word>)> {
            let v = if family.kind() == ElementKind::Tree { None } else { image(h)? };
            Ok((p.clone(), v))
        };
        match transporter_keyed(&gens, family.identity(), &current, search, budgets.point_budget, key, &goal) {
            Ok((h, _)) => break h,
            Err(Error::SearchExhausted(msg)) if attempt >= budgets.retries => {
                return Err(Error::SearchExhausted(format!("stage at depth {d}: {msg}")))
            }
            Err(Error::SearchExhausted(_)) => {
                attempt += 1;
                search.max_word_len = search.max_word_len.saturating_add(2);
            }
            Err(e) => return Err(e),
        }
    };
    let g = h.compose(&prev.g)?;
    let v = g.act_cylinder(&u)?;
    let w = y.cylinder(v.depth() + budgets.margin);
    Ok(Stage {
        index: prev.index + 1,
        depth: d,
        u,
        v,
        w,
        h,
        g,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl From<Ternary> for Outcome {
    fn from(t: Ternary) -> Self {
        match t {
            Ternary::Yes => Outcome::Pass,
            Ternary::No => Outcome::Fail,
            Ternary::Unknown => Outcome::Unknown,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub stage: usize,
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome == Outcome::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail)
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.checks.iter().filter(|c| c.outcome == outcome).count()
    }

    fn push(&mut self, stage: usize, name: &'static str, result: Result<Ternary>, detail: impl Into<String>) {
        let (outcome, detail) = match result {
            Ok(t) => (t.into(), detail.into()),
            Err(e) => (Outcome::Fail, format!("{}: {e}", detail.into())),
        };
        self.checks.push(Check {
            stage,
            name,
            outcome,
            detail,
        });
    }
}

/// Re-derives every stage condition from the stored data alone.
pub fn verify_certificate(cert: &ConjugatorCertificate, budgets: Budgets) -> VerificationReport {
    let mut report = VerificationReport::default();
    let id = budgets.id_budget;
    let alphabet_ok = cert.x.alphabet() == cert.alphabet && cert.y.alphabet() == cert.alphabet;
    report.push(0, "alphabet", Ok(Ternary::from_bool(alphabet_ok)), "x and y over the certificate alphabet");
    let Some(first) = cert.stages.first() else {
        report.push(0, "origin", Ok(Ternary::No), "stage 0 missing");
        return report;
    };
    let origin_ok = (|| -> Result<Ternary> {
        let shape = first.index == 0
            && first.depth == 0
            && first.u.depth() == 0
            && first.v.depth() == 0
            && first.w.depth() == 0;
        Ok(Ternary::from_bool(shape)
            .and(first.g.is_identity(id))
            .and(first.h.is_identity(id)))
    })();
    report.push(0, "origin", origin_ok, "U_0 = V_0 = W_0 = X and g_0 = 1");

    for (prev, s) in cert.stages.iter().zip(cert.stages.iter().skip(1)) {
        let i = s.index;
        report.push(
            i,
            "index",
            Ok(Ternary::from_bool(s.index == prev.index + 1)),
            "stage indices are consecutive",
        );
        // (ii) U_i is the depth-d_i cylinder around x, and depths increase.
        let ii = (|| -> Result<Ternary> {
            Ok(Ternary::from_bool(
                s.depth > prev.depth && s.u.depth() == s.depth && s.u.contains_point(&cert.x)?,
            ))
        })();
        report.push(i, "schedule", ii, format!("U_{i} = {} has depth {} and contains x", s.u, s.depth));
        // (i) V_i = g_i(U_i).
        let image = (|| -> Result<Ternary> { Ok(Ternary::from_bool(s.g.act_cylinder(&s.u)? == s.v)) })();
        report.push(i, "image", image, format!("g_{i}(U_{i}) = V_{i} = {}", s.v));
        // (iii) V_i is a basis cylinder around y.
        let target = (|| -> Result<Ternary> {
            Ok(Ternary::from_bool(s.v.depth() >= s.depth && s.v.contains_point(&cert.y)?))
        })();
        report.push(i, "target", target, format!("y ∈ V_{i} and depth(V_{i}) ≥ {}", s.depth));
        // (iv) W_i ⊆ V_i, around y.
        let window = (|| -> Result<Ternary> {
            Ok(Ternary::from_bool(s.w.is_subset_of(&s.v) && s.w.contains_point(&cert.y)?))
        })();
        report.push(i, "window", window, format!("y ∈ W_{i} = {} ⊆ V_{i}", s.w));
        // (v) g_i(x) ∈ W_i.
        let point = match s.g.act_point(&cert.x, budgets.point_budget) {
            Ok(p) => s.w.contains_point(&p).map(Ternary::from_bool),
            Err(Error::NoCycleWithinBound(_)) => Ok(Ternary::Unknown),
            Err(e) => Err(e),
        };
        report.push(i, "point", point, format!("g_{i}(x) ∈ W_{i}"));
        // (vi) g_i agrees with g_{i-1} off U_{i-1}.
        let agreement = (|| -> Result<Ternary> {
            let q = prev.g.invert().compose(&s.g)?;
            in_rigid_stabiliser(&q, &prev.u, id)
        })();
        report.push(
            i,
            "agreement",
            agreement,
            format!("g_{}⁻¹ g_{i} fixes the complement of U_{} pointwise", prev.index, prev.index),
        );
        let nesting = Ternary::from_bool(
            s.u.is_subset_of(&prev.u) && s.v.is_subset_of(&prev.v) && s.w.is_subset_of(&prev.w),
        );
        report.push(i, "nesting", Ok(nesting), format!("U_{i}, V_{i}, W_{i} inside stage {}", prev.index));
        let factor = (|| -> Result<Ternary> {
            let supported = in_rigid_stabiliser(&s.h, &prev.v, id)?;
            let product = s.h.compose(&prev.g)?.same_map(&s.g, id)?;
            Ok(supported.and(product))
        })();
        report.push(
            i,
            "factor",
            factor,
            format!("h_{i} ∈ rist(V_{}) and g_{i} = h_{i} g_{}", prev.index, prev.index),
        );
    }
    report
}

/// A value of the limit map: exact, or only a certified prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitValue {
    Exact(BoundaryPoint),
    /// The image starts with `word`; `limit` is the exact value when it is
    /// known independently of the stages (`f(x) = y`).
    Prefix {
        word: Word,
        limit: Option<BoundaryPoint>,
    },
}

/// `f(z)`: exact for `z ∉ U_last`, where `f = g_N` on the complement of
/// `U_N` for the least such stage `N`.
pub fn eval_limit(cert: &ConjugatorCertificate, z: &BoundaryPoint, point_budget: usize) -> Result<LimitValue> {
    cert.alphabet.same(z.alphabet())?;
    for s in cert.stages.iter().skip(1) {
        if !s.u.contains_point(z)? {
            return s.g.act_point(z, point_budget).map(LimitValue::Exact);
        }
    }
    let last = cert.last();
    if cert.stages.len() == 1 {
        return last.g.act_point(z, point_budget).map(LimitValue::Exact);
    }
    if *z == cert.x {
        Ok(LimitValue::Prefix {
            word: cert.y.prefix(last.depth),
            limit: Some(cert.y.clone()),
        })
    } else {
        Ok(LimitValue::Prefix {
            word: last.v.prefix().clone(),
            limit: None,
        })
    }
}

/// `f⁻¹(z)`, mirroring [`eval_limit`] with `V_N` and `g_N⁻¹`.
pub fn eval_limit_inverse(cert: &ConjugatorCertificate, z: &BoundaryPoint, point_budget: usize) -> Result<LimitValue> {
    cert.alphabet.same(z.alphabet())?;
    for s in cert.stages.iter().skip(1) {
        if !s.v.contains_point(z)? {
            return s.g.invert().act_point(z, point_budget).map(LimitValue::Exact);
        }
    }
    let last = cert.last();
    if cert.stages.len() == 1 {
        return last.g.invert().act_point(z, point_budget).map(LimitValue::Exact);
    }
    if *z == cert.y {
        Ok(LimitValue::Prefix {
            word: cert.x.prefix(last.depth),
            limit: Some(cert.x.clone()),
        })
    } else {
        Ok(LimitValue::Prefix {
            word: last.u.prefix().clone(),
            limit: None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugation {
    pub element: GroupElement,
    pub stage: usize,
    /// Depth at which the original element fixes the cylinder around `x`.
    pub witness_depth: usize,
}

/// `g_N g g_N⁻¹` for `g` fixing a cylinder around `x` pointwise, where `N`
/// is the first stage at least as deep as that cylinder. The result fixes
/// `V_N` pointwise.
pub fn conjugate_element(
    cert: &ConjugatorCertificate,
    g: &GroupElement,
    max_depth: usize,
    budgets: Budgets,
) -> Result<Conjugation> {
    let verdict = in_neighbourhood_stabiliser(g, &cert.x, max_depth, budgets.id_budget, budgets.point_budget)?;
    let n = match verdict {
        GermVerdict::Trivial(n) => n,
        other => return Err(Error::NotInNbhdStabiliser(format!("{g} at x: {other}"))),
    };
    let stage = cert.stages.iter().find(|s| s.depth >= n).ok_or_else(|| {
        Error::NotInNbhdStabiliser(format!(
            "{g} fixes only the depth-{n} cylinder around x, deeper than the certificate"
        ))
    })?;
    let c = stage.g.conjugate(g)?;
    match fixes_cylinder_pointwise(&c, &stage.v, budgets.id_budget)? {
        Ternary::Yes => Ok(Conjugation {
            element: c,
            stage: stage.index,
            witness_depth: n,
        }),
        other => Err(Error::NotInNbhdStabiliser(format!(
            "conjugate of {g} fixes V_{} pointwise: {other}",
            stage.index
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuiteStatus {
    Pass,
    Fail,
    Unknown,
    Skipped,
}

impl fmt::Display for SuiteStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuiteStatus::Pass => "PASS",
            SuiteStatus::Fail => "FAIL",
            SuiteStatus::Unknown => "UNKNOWN",
            SuiteStatus::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteEntry {
    pub label: String,
    pub status: SuiteStatus,
    pub stage: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuiteReport {
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn count(&self, status: SuiteStatus) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    /// No failures and no undecided round trips.
    pub fn passed(&self) -> bool {
        self.count(SuiteStatus::Fail) == 0 && self.count(SuiteStatus::Unknown) == 0
    }
}

/// Conjugates each sample into the neighbourhood stabiliser of `y`, checks
/// membership, conjugates back through the stages and compares with the
/// original. Samples outside the neighbourhood stabiliser of `x` are skipped.
pub fn conjugation_suite(
    cert: &ConjugatorCertificate,
    samples: &[(String, GroupElement)],
    budgets: Budgets,
) -> SuiteReport {
    let mut report = SuiteReport::default();
    for (label, g) in samples {
        let entry = |status, stage, detail: String| SuiteEntry {
            label: label.clone(),
            status,
            stage,
            detail,
        };
        let conj = match conjugate_element(cert, g, budgets.germ_depth, budgets) {
            Ok(c) => c,
            Err(Error::NotInNbhdStabiliser(msg)) => {
                report.entries.push(entry(SuiteStatus::Skipped, None, msg));
                continue;
            }
            Err(e) => {
                report.entries.push(entry(SuiteStatus::Fail, None, e.to_string()));
                continue;
            }
        };
        let outcome = (|| -> Result<(SuiteStatus, String)> {
            let v_depth = cert.stages[conj.stage].v.depth();
            let depth = budgets.germ_depth.max(v_depth);
            let at_y =
                in_neighbourhood_stabiliser(&conj.element, &cert.y, depth, budgets.id_budget, budgets.point_budget)?;
            let n = match at_y {
                GermVerdict::Trivial(n) => n,
                GermVerdict::Unknown => return Ok((SuiteStatus::Unknown, format!("germ at y: {at_y}"))),
                other => return Ok((SuiteStatus::Fail, format!("germ at y: {other}"))),
            };
            let back_stage = cert
                .stages
                .iter()
                .find(|s| s.v.depth() >= n)
                .ok_or_else(|| Error::InvalidArgument("no stage deep enough to conjugate back".into()))?;
            let back = back_stage.g.invert().conjugate(&conj.element)?;
            let quotient = back.compose(&g.invert())?;
            let status = match quotient.is_identity(budgets.id_budget.saturating_mul(2)) {
                Ternary::Yes => SuiteStatus::Pass,
                Ternary::No => SuiteStatus::Fail,
                Ternary::Unknown => SuiteStatus::Unknown,
            };
            Ok((
                status,
                format!(
                    "TRIVIAL({}) at x, TRIVIAL({n}) at y, back through stage {}",
                    conj.witness_depth, back_stage.index
                ),
            ))
        })();
        match outcome {
            Ok((status, detail)) => report.entries.push(entry(status, Some(conj.stage), detail)),
            Err(e) => report.entries.push(entry(SuiteStatus::Fail, Some(conj.stage), e.to_string())),
        }
    }
    report
}

/// Rigid-stabiliser generators (and their inverses) of cylinders outside
/// `U_1`, taken breadth first from the coarsest ones, until `count` are found.
pub fn samples_off_first_stage(
    family: &GroupFamily,
    cert: &ConjugatorCertificate,
    count: usize,
    budgets: Budgets,
    cache: &mut RistCache,
) -> Result<Vec<(String, GroupElement)>> {
    let mut out: Vec<(String, GroupElement)> = Vec::new();
    let mut queue: VecDeque<Cylinder> = match cert.stages.get(1) {
        Some(s) => s.u.complement_code().into(),
        None => Cylinder::whole(cert.alphabet).children().into(),
    };
    let max_depth = cert.last().depth.max(1) + 8;
    while out.len() < count {
        let Some(c) = queue.pop_front() else { break };
        if c.depth() > max_depth {
            break;
        }
        match rist_generators(family, &c, budgets.search, budgets.id_budget, cache) {
            Ok(gens) => {
                for (j, g) in gens.into_iter().enumerate() {
                    let inv = g.invert();
                    let distinct = inv != g;
                    if !out.iter().any(|(_, e)| *e == g) {
                        out.push((format!("rist{c}#{j}"), g));
                    }
                    if distinct && !out.iter().any(|(_, e)| *e == inv) {
                        out.push((format!("rist{c}#{j}^-1"), inv));
                    }
                }
            }
            Err(Error::EmptyRist(_)) => {}
            Err(e) => return Err(e),
        }
        queue.extend(c.children());
    }
    out.truncate(count);
    Ok(out)
}
