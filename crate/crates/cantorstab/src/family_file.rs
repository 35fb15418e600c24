//! Family definitions: a preset name or a JSON file.
//!
//! ```json
//! {
//!   "schema": "cantorstab/family/v1",
//!   "name": "grigorchuk-copy",
//!   "kind": "tree",
//!   "alphabet": 2,
//!   "generators": [
//!     {"name": "a", "perm": [1, 0], "sections": ["1", "1"]},
//!     {"name": "b", "perm": [0, 1], "sections": ["a", "c"]}
//!   ],
//!   "relations": {"involutions": ["a", "b"], "rewrites": [["b*c", "d"]]},
//!   "oracle": "grigorchuk-branch",
//!   "classifier": {"cofinal_with": 1}
//! }
//! ```
//!
//! Prefix families list `"rules": [["0", "00"], ...]` per generator and full
//! group families list `"rows": [["", 1]]`.

use std::path::Path;
use std::sync::Arc;

use cantorstab_core::family::{Classifier, GroupFamily, RistOracle};
use cantorstab_core::{Alphabet, FullGroupTable, GroupElement, PrefixBijection, WreathTable, Word};
use serde::{Deserialize, Serialize};

use crate::doc::FAMILY_SCHEMA;
use crate::error::CliError;

/// Budget for confirming declared relations when a file is loaded.
const RELATION_BUDGET: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindDoc {
    Tree,
    Prefix,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sections: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<(String, i64)>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationsDoc {
    #[serde(default)]
    pub involutions: Vec<String>,
    #[serde(default)]
    pub rewrites: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleDoc {
    None,
    GrigorchukBranch,
    OdometerFirstReturn,
    PrefixLocalize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifierDoc {
    None,
    AllRegular,
    #[serde(rename = "cofinal_with")]
    CofinalWith(u8),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    #[serde(default)]
    pub schema: Option<String>,
    pub name: String,
    pub kind: KindDoc,
    pub alphabet: usize,
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub relations: RelationsDoc,
    #[serde(default)]
    pub oracle: Option<OracleDoc>,
    #[serde(default)]
    pub classifier: Option<ClassifierDoc>,
}

fn schema_err(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

impl FamilyDoc {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: FamilyDoc = serde_json::from_str(text)?;
        if let Some(s) = &doc.schema {
            if s != FAMILY_SCHEMA {
                return Err(schema_err(format!("expected schema {FAMILY_SCHEMA:?}, found {s:?}")));
            }
        }
        Ok(doc)
    }

    /// Validates the definition and builds the family.
    pub fn build(&self) -> Result<GroupFamily, CliError> {
        let alphabet = Alphabet::new(self.alphabet).map_err(|e| schema_err(e.to_string()))?;
        if self.generators.is_empty() {
            return Err(schema_err("a family needs at least one generator"));
        }
        let core = |e: cantorstab_core::Error| schema_err(format!("family {:?}: {e}", self.name));
        let family = match self.kind {
            KindDoc::Tree => {
                let mut rows = Vec::new();
                for g in &self.generators {
                    let (Some(perm), Some(sections)) = (&g.perm, &g.sections) else {
                        return Err(schema_err(format!("tree generator {:?} needs perm and sections", g.name)));
                    };
                    rows.push((g.name.as_str(), perm.as_slice(), sections.iter().map(String::as_str).collect::<Vec<_>>()));
                }
                let table_rows: Vec<(&str, &[u8], &[&str])> =
                    rows.iter().map(|(n, p, s)| (*n, *p, s.as_slice())).collect();
                let mut table = WreathTable::new(alphabet, &table_rows).map_err(core)?;
                let inv: Vec<&str> = self.relations.involutions.iter().map(String::as_str).collect();
                if !inv.is_empty() {
                    table = table.with_involutions(&inv, RELATION_BUDGET).map_err(core)?;
                }
                let rw: Vec<(&str, &str)> =
                    self.relations.rewrites.iter().map(|(l, r)| (l.as_str(), r.as_str())).collect();
                if !rw.is_empty() {
                    table = table.with_rewrites(&rw, RELATION_BUDGET).map_err(core)?;
                }
                GroupFamily::from_table(&self.name, Arc::new(table))
            }
            KindDoc::Prefix | KindDoc::Full => {
                if !self.relations.involutions.is_empty() || !self.relations.rewrites.is_empty() {
                    return Err(schema_err("relations apply to tree families only"));
                }
                let word = |s: &str| Word::parse(alphabet, s).map_err(core);
                let mut gens = Vec::new();
                for g in &self.generators {
                    let element: GroupElement = match (self.kind, &g.rules, &g.rows) {
                        (KindDoc::Prefix, Some(rules), None) => {
                            let rules = rules
                                .iter()
                                .map(|(u, v)| Ok((word(u)?, word(v)?)))
                                .collect::<Result<Vec<_>, CliError>>()?;
                            PrefixBijection::new(alphabet, rules).map_err(core)?.into()
                        }
                        (KindDoc::Full, None, Some(rows)) => {
                            if alphabet != Alphabet::BINARY {
                                return Err(schema_err("full-group tables are over the binary odometer"));
                            }
                            let rows = rows
                                .iter()
                                .map(|(c, k)| Ok((word(c)?, *k)))
                                .collect::<Result<Vec<_>, CliError>>()?;
                            FullGroupTable::new(rows).map_err(core)?.into()
                        }
                        _ => {
                            return Err(schema_err(format!(
                                "generator {:?} must give {} only",
                                g.name,
                                if self.kind == KindDoc::Prefix { "rules" } else { "rows" }
                            )))
                        }
                    };
                    gens.push((g.name.clone(), element));
                }
                GroupFamily::custom(&self.name, gens).map_err(core)?
            }
        };
        let oracle = match self.oracle.unwrap_or(OracleDoc::None) {
            OracleDoc::None => RistOracle::None,
            OracleDoc::GrigorchukBranch => RistOracle::GrigorchukBranch,
            OracleDoc::OdometerFirstReturn => RistOracle::OdometerFirstReturn,
            OracleDoc::PrefixLocalize => RistOracle::PrefixLocalize,
        };
        let classifier = match self.classifier.unwrap_or(ClassifierDoc::None) {
            ClassifierDoc::None => Classifier::None,
            ClassifierDoc::AllRegular => Classifier::AllRegular,
            ClassifierDoc::CofinalWith(l) => {
                alphabet.check(l).map_err(core)?;
                Classifier::CofinalWithConstant(l)
            }
        };
        Ok(family.with_oracle(oracle).with_classifier(classifier))
    }
}

/// A preset name, or else the path of a family definition file.
pub fn load_family(spec: &str) -> Result<GroupFamily, CliError> {
    if let Some(f) = GroupFamily::preset(spec) {
        return Ok(f);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Parse(format!(
            "unknown family {spec:?}: not a preset (grigorchuk, odometer-full, prefix-v) or a readable file"
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    FamilyDoc::parse(&text)?.build()
}
