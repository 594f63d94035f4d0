//! On-disk documents. Structured documents are pretty-printed JSON carrying a
//! `version` field; response sheets may also be given as a table with one
//! row per person (`person_id,ability,ability,...`).

use std::collections::BTreeSet;
use std::str::FromStr;

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grouping::{Balance, Group, GroupProfile, GroupingConfig, GroupingPlan, Objective};
use crate::profile::{Ability, AbilityCatalog, PersonProfile, ResponseSheet, ScoringMode, SwsVector};
use crate::quotient::Intelligence;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed table: {0}")]
    Table(#[from] csv::Error),
    #[error("unsupported document version {found} (expected {FORMAT_VERSION})")]
    UnsupportedVersion { found: u32 },
    #[error("malformed fraction `{0}`")]
    BadFraction(String),
    #[error("unknown intelligence {}", describe_unknown(.0))]
    UnknownIntelligence(Vec<(String, String)>),
    #[error("duplicate person id `{0}`")]
    DuplicatePerson(String),
}

impl DocumentError {
    /// Whether the document was readable but semantically invalid.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            DocumentError::UnknownIntelligence(_) | DocumentError::DuplicatePerson(_)
        )
    }
}

fn describe_unknown(items: &[(String, String)]) -> String {
    items
        .iter()
        .map(|(ability, value)| format!("`{value}` on ability `{ability}`"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Documents that carry a format version.
pub trait Versioned: Serialize + DeserializeOwned {
    fn version(&self) -> u32;

    fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("documents always serialize");
        text.push('\n');
        text
    }

    fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.version() != FORMAT_VERSION {
            return Err(DocumentError::UnsupportedVersion {
                found: doc.version(),
            });
        }
        Ok(doc)
    }
}

/// An intelligence given either by 1-based index or by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntelligenceRef {
    Index(u32),
    Name(String),
}

impl IntelligenceRef {
    pub fn resolve(&self) -> Option<Intelligence> {
        match self {
            IntelligenceRef::Index(i) => Intelligence::from_index(*i as usize),
            IntelligenceRef::Name(name) => Intelligence::from_name(name),
        }
    }

    fn describe(&self) -> String {
        match self {
            IntelligenceRef::Index(i) => i.to_string(),
            IntelligenceRef::Name(name) => name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbilityEntry {
    pub id: String,
    #[serde(default)]
    pub label: String,
    pub intelligences: Vec<IntelligenceRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogDocument {
    pub version: u32,
    pub abilities: Vec<AbilityEntry>,
}

impl Versioned for CatalogDocument {
    fn version(&self) -> u32 {
        self.version
    }
}

impl CatalogDocument {
    pub fn from_catalog(catalog: &AbilityCatalog) -> Self {
        CatalogDocument {
            version: FORMAT_VERSION,
            abilities: catalog
                .abilities
                .iter()
                .map(|a| AbilityEntry {
                    id: a.id.clone(),
                    label: a.label.clone(),
                    intelligences: a
                        .memberships
                        .iter()
                        .map(|c| IntelligenceRef::Name(c.name().to_string()))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Resolves intelligence references. The resulting catalog still needs
    /// [`crate::profile::validate_catalog`].
    pub fn to_catalog(&self) -> Result<AbilityCatalog, DocumentError> {
        let mut unknown = Vec::new();
        let abilities = self
            .abilities
            .iter()
            .map(|entry| {
                let memberships: BTreeSet<Intelligence> = entry
                    .intelligences
                    .iter()
                    .filter_map(|r| {
                        let resolved = r.resolve();
                        if resolved.is_none() {
                            unknown.push((entry.id.clone(), r.describe()));
                        }
                        resolved
                    })
                    .collect();
                Ability::new(entry.id.clone(), entry.label.clone(), memberships)
            })
            .collect();
        if !unknown.is_empty() {
            return Err(DocumentError::UnknownIntelligence(unknown));
        }
        Ok(AbilityCatalog::new(abilities))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseEntry {
    pub person_id: String,
    pub selected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponsesDocument {
    pub version: u32,
    pub responses: Vec<ResponseEntry>,
}

impl Versioned for ResponsesDocument {
    fn version(&self) -> u32 {
        self.version
    }
}

impl ResponsesDocument {
    /// Reads the tabular form. Blank fields are ignored, `#` starts a comment
    /// line, and a first row starting with `person_id` is taken as a header.
    pub fn from_table(text: &str) -> Result<Self, DocumentError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut responses = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            let mut fields = record.iter().filter(|f| !f.is_empty());
            let Some(person_id) = fields.next() else {
                continue;
            };
            if row == 0 && person_id.eq_ignore_ascii_case("person_id") {
                continue;
            }
            responses.push(ResponseEntry {
                person_id: person_id.to_string(),
                selected: fields.map(str::to_string).collect(),
            });
        }
        Ok(ResponsesDocument {
            version: FORMAT_VERSION,
            responses,
        })
    }

    pub fn to_table(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .flexible(true)
            .from_writer(Vec::new());
        for entry in &self.responses {
            let mut row = vec![entry.person_id.as_str()];
            row.extend(entry.selected.iter().map(String::as_str));
            writer.write_record(&row).expect("writing to memory");
        }
        String::from_utf8(writer.into_inner().expect("writing to memory")).expect("utf-8 input")
    }

    /// Accepts either form: JSON when the first non-blank character is `{`,
    /// the table otherwise.
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_table(text)
        }
    }

    pub fn to_sheets(&self) -> Result<Vec<ResponseSheet>, DocumentError> {
        let mut seen = BTreeSet::new();
        self.responses
            .iter()
            .map(|entry| {
                if !seen.insert(entry.person_id.as_str()) {
                    return Err(DocumentError::DuplicatePerson(entry.person_id.clone()));
                }
                Ok(ResponseSheet::new(entry.person_id.clone(), entry.selected.iter().cloned()))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilesDocument {
    pub version: u32,
    pub scoring: ScoringMode,
    /// Per-axis maximum of the scoring catalog.
    pub ideal: SwsVector,
    pub profiles: Vec<PersonProfile>,
}

impl Versioned for ProfilesDocument {
    fn version(&self) -> u32 {
        self.version
    }
}

impl ProfilesDocument {
    pub fn new(scoring: ScoringMode, ideal: SwsVector, profiles: Vec<PersonProfile>) -> Self {
        ProfilesDocument {
            version: FORMAT_VERSION,
            scoring,
            ideal,
            profiles,
        }
    }

    pub fn person(&self, id: &str) -> Option<&PersonProfile> {
        self.profiles.iter().find(|p| p.person_id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupEntry {
    pub members: Vec<String>,
    pub profile: SwsVector,
    /// Exact fraction, e.g. `"3/4"`.
    pub balance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveEntry {
    pub min_balance: String,
    pub sum_balances: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDocument {
    pub version: u32,
    pub config: GroupingConfig,
    pub ideal: SwsVector,
    pub groups: Vec<GroupEntry>,
    pub objective: ObjectiveEntry,
}

impl Versioned for PlanDocument {
    fn version(&self) -> u32 {
        self.version
    }
}

fn fraction<T: FromStr>(text: &str) -> Result<T, DocumentError> {
    text.parse()
        .map_err(|_| DocumentError::BadFraction(text.to_string()))
}

impl PlanDocument {
    pub fn from_plan(plan: &GroupingPlan, config: &GroupingConfig, ideal: SwsVector) -> Self {
        PlanDocument {
            version: FORMAT_VERSION,
            config: config.clone(),
            ideal,
            groups: plan
                .groups
                .iter()
                .map(|g| GroupEntry {
                    members: g.members.clone(),
                    profile: g.profile.profile,
                    balance: g.profile.balance.to_string(),
                })
                .collect(),
            objective: ObjectiveEntry {
                min_balance: plan.objective.min_balance.to_string(),
                sum_balances: plan.objective.sum_balances.to_string(),
            },
        }
    }

    pub fn to_plan(&self) -> Result<GroupingPlan, DocumentError> {
        let groups = self
            .groups
            .iter()
            .map(|g| {
                Ok(Group {
                    members: g.members.clone(),
                    profile: GroupProfile {
                        profile: g.profile,
                        balance: fraction::<Balance>(&g.balance)?,
                    },
                })
            })
            .collect::<Result<Vec<_>, DocumentError>>()?;
        Ok(GroupingPlan {
            groups,
            objective: Objective {
                min_balance: fraction::<Balance>(&self.objective.min_balance)?,
                sum_balances: fraction::<BigRational>(&self.objective.sum_balances)?,
            },
        })
    }
}
