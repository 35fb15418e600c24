//! JSON documents. Every file is an [`Envelope`]: a schema tag, a
//! deterministic body and a metadata object that may vary between runs.

use cantorstab_core::conjugator::{SuiteReport, VerificationReport};
use cantorstab_core::elements::ElementKind;
use cantorstab_core::engine::{GermReport, PointClass};
use cantorstab_core::family::GroupFamily;
use cantorstab_core::search::{LocalMinimality, MinimalityWitness, MoveWord, OrbitCertificate};
use cantorstab_core::{
    Alphabet, BoundaryPoint, Budgets, ConjugatorCertificate, Cylinder, FullGroupTable, GroupElement, PrefixBijection,
    SearchBudget, Stage, Word,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CERTIFICATE_SCHEMA: &str = "cantorstab/certificate/v1";
pub const VERIFY_SCHEMA: &str = "cantorstab/verify/v1";
pub const ORBIT_SCHEMA: &str = "cantorstab/orbit/v1";
pub const MINIMALITY_SCHEMA: &str = "cantorstab/minimality/v1";
pub const RIST_SCHEMA: &str = "cantorstab/rist/v1";
pub const GERMS_SCHEMA: &str = "cantorstab/germs/v1";
pub const CLASSIFY_SCHEMA: &str = "cantorstab/classify/v1";
pub const FAMILY_SCHEMA: &str = "cantorstab/family/v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: String,
    pub body: T,
    #[serde(default)]
    pub meta: Meta,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default)]
    pub tool: String,
    #[serde(default)]
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(schema: &str, body: T) -> Self {
        Envelope {
            schema: schema.to_string(),
            body,
            meta: Meta {
                tool: "cantorstab".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                ..Meta::default()
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

/// The canonical form of a body: compact JSON with fields in declaration order.
pub fn canonical<T: Serialize>(body: &T) -> String {
    serde_json::to_string(body).expect("documents serialize")
}

/// Parses an envelope and checks its schema tag.
pub fn read_envelope<T: for<'de> Deserialize<'de>>(text: &str, schema: &str) -> Result<Envelope<T>, CliError> {
    let env: Envelope<T> = serde_json::from_str(text)?;
    if env.schema != schema {
        return Err(CliError::Schema(format!("expected schema {schema:?}, found {:?}", env.schema)));
    }
    Ok(env)
}

/// Elements in the text syntax of their kind: generator words for tree
/// elements, rule pairs for prefix bijections, rows for full-group tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementDoc {
    Word(String),
    Rules(Vec<(String, String)>),
    Rows(Vec<(String, i64)>),
}

fn letters_to_string(letters: &[u8]) -> String {
    letters.iter().map(|l| char::from(b'0' + l)).collect()
}

pub fn word_string(w: &Word) -> String {
    letters_to_string(w.letters())
}

pub fn cylinder_string(c: &Cylinder) -> String {
    word_string(c.prefix())
}

impl ElementDoc {
    pub fn from_element(g: &GroupElement) -> Self {
        match g {
            GroupElement::Tree(t) => ElementDoc::Word(t.to_string()),
            GroupElement::Prefix(p) => ElementDoc::Rules(
                p.rules()
                    .iter()
                    .map(|(u, v)| (letters_to_string(u), letters_to_string(v)))
                    .collect(),
            ),
            GroupElement::Full(f) => {
                ElementDoc::Rows(f.rows().iter().map(|(c, k)| (letters_to_string(c), *k)).collect())
            }
        }
    }

    pub fn to_element(&self, family: &GroupFamily) -> Result<GroupElement, CliError> {
        let a = family.alphabet();
        let word = |s: &str| Word::parse(a, s).map_err(|e| CliError::Schema(format!("word {s:?}: {e}")));
        match (self, family.kind()) {
            (ElementDoc::Word(s), _) => family
                .parse_element(s)
                .map_err(|e| CliError::Schema(format!("element {s:?}: {e}"))),
            (ElementDoc::Rules(rules), ElementKind::Prefix) => {
                let rules = rules
                    .iter()
                    .map(|(u, v)| Ok((word(u)?, word(v)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                PrefixBijection::new(a, rules)
                    .map(Into::into)
                    .map_err(|e| CliError::Schema(format!("prefix bijection: {e}")))
            }
            (ElementDoc::Rows(rows), ElementKind::Full) => {
                let rows = rows
                    .iter()
                    .map(|(c, k)| Ok((word(c)?, *k)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                FullGroupTable::new(rows)
                    .map(Into::into)
                    .map_err(|e| CliError::Schema(format!("full-group table: {e}")))
            }
            // An empty list parses as rules; it is the identity of any kind.
            (ElementDoc::Rules(r), _) if r.is_empty() => Ok(family.identity().clone()),
            (doc, kind) => Err(CliError::Schema(format!("element {doc:?} does not fit a {kind:?} family"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetsDoc {
    pub max_word_len: usize,
    pub max_states: usize,
    pub id_budget: usize,
    pub point_budget: usize,
    pub retries: usize,
    pub margin: usize,
    pub germ_depth: usize,
}

impl From<Budgets> for BudgetsDoc {
    fn from(b: Budgets) -> Self {
        BudgetsDoc {
            max_word_len: b.search.max_word_len,
            max_states: b.search.max_states,
            id_budget: b.id_budget,
            point_budget: b.point_budget,
            retries: b.retries,
            margin: b.margin,
            germ_depth: b.germ_depth,
        }
    }
}

impl From<BudgetsDoc> for Budgets {
    fn from(b: BudgetsDoc) -> Self {
        Budgets {
            search: SearchBudget {
                max_word_len: b.max_word_len,
                max_states: b.max_states,
            },
            id_budget: b.id_budget,
            point_budget: b.point_budget,
            retries: b.retries,
            margin: b.margin,
            germ_depth: b.germ_depth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDoc {
    pub i: usize,
    pub d: usize,
    #[serde(rename = "U")]
    pub u: String,
    #[serde(rename = "V")]
    pub v: String,
    #[serde(rename = "W")]
    pub w: String,
    pub h: ElementDoc,
    pub g: ElementDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub family: String,
    pub alphabet: usize,
    pub x: String,
    pub y: String,
    pub stages: Vec<StageDoc>,
    pub budgets: BudgetsDoc,
    pub design_flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CertificateDoc {
    pub fn from_certificate(cert: &ConjugatorCertificate) -> Self {
        CertificateDoc {
            family: cert.family.clone(),
            alphabet: cert.alphabet.size(),
            x: cert.x.to_string(),
            y: cert.y.to_string(),
            stages: cert
                .stages
                .iter()
                .map(|s| StageDoc {
                    i: s.index,
                    d: s.depth,
                    u: cylinder_string(&s.u),
                    v: cylinder_string(&s.v),
                    w: cylinder_string(&s.w),
                    h: ElementDoc::from_element(&s.h),
                    g: ElementDoc::from_element(&s.g),
                })
                .collect(),
            budgets: cert.budgets.into(),
            design_flags: cert.design_flags.clone(),
            warnings: cert.warnings.clone(),
        }
    }

    /// Rebuilds the certificate over `family`. Structural problems are schema
    /// errors; whether the stages are correct is left to the verifier.
    pub fn to_certificate(&self, family: &GroupFamily) -> Result<ConjugatorCertificate, CliError> {
        let alphabet = Alphabet::new(self.alphabet).map_err(|e| CliError::Schema(e.to_string()))?;
        if alphabet != family.alphabet() {
            return Err(CliError::Schema(format!(
                "certificate alphabet {} differs from the family alphabet {}",
                self.alphabet,
                family.alphabet().size()
            )));
        }
        let point = |s: &str| BoundaryPoint::parse(alphabet, s).map_err(|e| CliError::Schema(format!("point {s:?}: {e}")));
        let cyl = |s: &str| Cylinder::parse(alphabet, s).map_err(|e| CliError::Schema(format!("cylinder {s:?}: {e}")));
        let stages = self
            .stages
            .iter()
            .map(|s| {
                Ok(Stage {
                    index: s.i,
                    depth: s.d,
                    u: cyl(&s.u)?,
                    v: cyl(&s.v)?,
                    w: cyl(&s.w)?,
                    h: s.h.to_element(family)?,
                    g: s.g.to_element(family)?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        if stages.is_empty() {
            return Err(CliError::Schema("certificate has no stages".into()));
        }
        Ok(ConjugatorCertificate {
            family: self.family.clone(),
            alphabet,
            x: point(&self.x)?,
            y: point(&self.y)?,
            stages,
            budgets: self.budgets.into(),
            design_flags: self.design_flags.clone(),
            warnings: self.warnings.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub stage: usize,
    pub name: String,
    pub outcome: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntryDoc {
    pub label: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteDoc {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    pub skipped: usize,
    pub entries: Vec<SuiteEntryDoc>,
}

impl SuiteDoc {
    pub fn from_report(r: &SuiteReport) -> Self {
        use cantorstab_core::conjugator::SuiteStatus as S;
        SuiteDoc {
            pass: r.count(S::Pass),
            fail: r.count(S::Fail),
            unknown: r.count(S::Unknown),
            skipped: r.count(S::Skipped),
            entries: r
                .entries
                .iter()
                .map(|e| SuiteEntryDoc {
                    label: e.label.clone(),
                    status: e.status.to_string(),
                    stage: e.stage,
                    detail: e.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub passed: bool,
    pub checks: Vec<CheckDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteDoc>,
}

impl VerifyDoc {
    pub fn new(report: &VerificationReport, suite: Option<&SuiteReport>) -> Self {
        VerifyDoc {
            passed: report.passed() && suite.is_none_or(|s| s.passed()),
            checks: report
                .checks
                .iter()
                .map(|c| CheckDoc {
                    stage: c.stage,
                    name: c.name.to_string(),
                    outcome: c.outcome.to_string(),
                    detail: c.detail.clone(),
                })
                .collect(),
            suite: suite.map(SuiteDoc::from_report),
        }
    }
}

/// Renders a move word as a generator word, leftmost factor applied last.
pub fn move_word_label(family_gens: &[String], word: &MoveWord) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter()
        .map(|&(g, inv)| {
            let name = family_gens.get(g).cloned().unwrap_or_else(|| format!("g{g}"));
            if inv {
                format!("{name}^-1")
            } else {
                name
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachedDoc {
    pub cylinder: String,
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDoc {
    pub seed: String,
    pub depth: usize,
    pub reached_count: usize,
    pub truncated: bool,
    pub reached: Vec<ReachedDoc>,
}

impl OrbitDoc {
    pub fn new(cert: &OrbitCertificate, gen_names: &[String]) -> Self {
        OrbitDoc {
            seed: cylinder_string(&cert.seed),
            depth: cert.depth,
            reached_count: cert.reached.len(),
            truncated: cert.truncated,
            reached: cert
                .reached
                .iter()
                .map(|(c, w)| ReachedDoc {
                    cylinder: cylinder_string(c),
                    word: move_word_label(gen_names, w),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityDoc {
    pub family: String,
    pub depth: usize,
    /// A finite-depth witness: necessary for minimality, not sufficient.
    pub label: String,
    pub holds: bool,
    pub truncated: bool,
    pub seeds: Vec<OrbitDoc>,
}

impl MinimalityDoc {
    pub fn new(family: &str, w: &MinimalityWitness, gen_names: &[String]) -> Self {
        MinimalityDoc {
            family: family.to_string(),
            depth: w.depth,
            label: format!("witness at depth {}", w.depth),
            holds: w.holds,
            truncated: w.truncated,
            seeds: w.certificates.iter().map(|c| OrbitDoc::new(c, gen_names)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledElementDoc {
    pub label: String,
    pub element: ElementDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMinimalityDoc {
    pub depth: usize,
    pub holds: bool,
    pub minimal_on_u: bool,
    pub blocks: Vec<String>,
    pub truncated: bool,
}

impl LocalMinimalityDoc {
    pub fn new(w: &LocalMinimality) -> Self {
        LocalMinimalityDoc {
            depth: w.depth,
            holds: w.holds,
            minimal_on_u: w.minimal_on_u,
            blocks: w.blocks.iter().map(cylinder_string).collect(),
            truncated: w.truncated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RistDoc {
    pub family: String,
    pub cylinder: String,
    pub source: String,
    pub max_word_len: usize,
    pub elements: Vec<LabelledElementDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_minimality: Option<LocalMinimalityDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermClassDoc {
    pub representative: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_depth: Option<usize>,
    pub provisional: bool,
    pub members: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermsDoc {
    pub point: String,
    pub lower_bound: usize,
    pub stabilising: usize,
    pub undecided: usize,
    pub classes: Vec<GermClassDoc>,
}

impl GermsDoc {
    pub fn new(r: &GermReport) -> Self {
        GermsDoc {
            point: r.point.to_string(),
            lower_bound: r.lower_bound(),
            stabilising: r.stabilising,
            undecided: r.undecided,
            classes: r
                .classes
                .iter()
                .map(|c| GermClassDoc {
                    representative: c.representative.clone(),
                    verdict: c.verdict.to_string(),
                    witness_depth: c.verdict.witness_depth(),
                    provisional: c.provisional,
                    members: c.members,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyDoc {
    pub family: String,
    pub point: String,
    pub class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub germs: Option<GermsDoc>,
}

impl ClassifyDoc {
    pub fn new(family: &str, point: &BoundaryPoint, class: PointClass, germs: Option<&GermReport>) -> Self {
        ClassifyDoc {
            family: family.to_string(),
            point: point.to_string(),
            class: class.to_string(),
            germs: germs.map(GermsDoc::new),
        }
    }
}
