//! Ability catalogs, response sheets and Spider Web System scoring.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quotient::{disjointify, CanonicalPartition, ElementId, Intelligence, LabeledFamily, AXES};

/// One score per intelligence, in axis order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SwsVector(pub [u32; AXES]);

impl SwsVector {
    pub const ZERO: SwsVector = SwsVector([0; AXES]);

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&s| u64::from(s)).sum()
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &SwsVector) -> SwsVector {
        SwsVector(std::array::from_fn(|s| self.0[s].max(other.0[s])))
    }

    /// True when every axis is at most the matching axis of `bound`.
    pub fn within(&self, bound: &SwsVector) -> bool {
        self.0.iter().zip(bound.0.iter()).all(|(a, b)| a <= b)
    }

    /// First axis where `self` exceeds `bound`.
    pub fn first_excess(&self, bound: &SwsVector) -> Option<Intelligence> {
        Intelligence::ALL
            .into_iter()
            .find(|c| self[*c] > bound[*c])
    }
}

impl Index<Intelligence> for SwsVector {
    type Output = u32;

    fn index(&self, class: Intelligence) -> &u32 {
        &self.0[class.slot()]
    }
}

impl fmt::Display for SwsVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ability {
    pub id: String,
    pub label: String,
    pub memberships: BTreeSet<Intelligence>,
}

impl Ability {
    pub fn new(
        id: impl Into<String>,
        label: impl Into<String>,
        memberships: impl IntoIterator<Item = Intelligence>,
    ) -> Self {
        Ability {
            id: id.into(),
            label: label.into(),
            memberships: memberships.into_iter().collect(),
        }
    }
}

/// A test instrument: abilities tagged with the intelligences they belong to.
/// Construction does not validate; see [`validate_catalog`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AbilityCatalog {
    pub abilities: Vec<Ability>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogFinding {
    EmptyId { position: usize },
    DuplicateId { id: String },
    Orphan { id: String },
}

impl fmt::Display for CatalogFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogFinding::EmptyId { position } => {
                write!(f, "ability #{position} has an empty id")
            }
            CatalogFinding::DuplicateId { id } => write!(f, "duplicate ability id `{id}`"),
            CatalogFinding::Orphan { id } => {
                write!(f, "ability `{id}` belongs to no intelligence (orphan)")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("invalid catalog: {}", join_findings(.0))]
    InvalidCatalog(Vec<CatalogFinding>),
    #[error("unknown ability ids in responses of `{person}`: {}", .ids.join(", "))]
    UnknownAbilities { person: String, ids: Vec<String> },
}

fn join_findings(findings: &[CatalogFinding]) -> String {
    findings.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub fn validate_catalog(catalog: &AbilityCatalog) -> Vec<CatalogFinding> {
    let mut findings = Vec::new();
    let mut seen = BTreeSet::new();
    let mut reported = BTreeSet::new();
    for (position, ability) in catalog.abilities.iter().enumerate() {
        if ability.id.is_empty() {
            findings.push(CatalogFinding::EmptyId { position });
            continue;
        }
        if !seen.insert(ability.id.as_str()) && reported.insert(ability.id.as_str()) {
            findings.push(CatalogFinding::DuplicateId {
                id: ability.id.clone(),
            });
        }
        if ability.memberships.is_empty() {
            findings.push(CatalogFinding::Orphan {
                id: ability.id.clone(),
            });
        }
    }
    findings
}

impl AbilityCatalog {
    pub fn new(abilities: Vec<Ability>) -> Self {
        AbilityCatalog { abilities }
    }

    /// The labeled family the catalog induces.
    pub fn family(&self) -> Result<LabeledFamily, ProfileError> {
        let findings = validate_catalog(self);
        if !findings.is_empty() {
            return Err(ProfileError::InvalidCatalog(findings));
        }
        let ids: Vec<ElementId> = self
            .abilities
            .iter()
            .map(|a| ElementId::new(a.id.clone()).expect("ids checked non-empty"))
            .collect();
        let family = LabeledFamily::from_memberships(
            ids.iter()
                .zip(&self.abilities)
                .map(|(id, a)| (id, a.memberships.iter().copied())),
        )
        .expect("memberships checked non-empty");
        Ok(family)
    }

    pub fn canonical(&self) -> Result<CanonicalPartition, ProfileError> {
        Ok(disjointify(&self.family()?))
    }
}

/// Which class sizes a sheet is counted against.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoringMode {
    /// Reduced classes: each selected ability counts exactly once.
    #[default]
    Reduced,
    /// Original overlapping classes; shared abilities count on every axis.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseSheet {
    pub person_id: String,
    pub selected: BTreeSet<String>,
}

impl ResponseSheet {
    pub fn new<S: Into<String>>(person_id: impl Into<String>, selected: impl IntoIterator<Item = S>) -> Self {
        ResponseSheet {
            person_id: person_id.into(),
            selected: selected.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonProfile {
    pub person_id: String,
    pub sws: SwsVector,
    pub selected: BTreeSet<String>,
}

impl PersonProfile {
    pub fn new(person_id: impl Into<String>, sws: SwsVector) -> Self {
        PersonProfile {
            person_id: person_id.into(),
            sws,
            selected: BTreeSet::new(),
        }
    }
}

/// Scores many sheets against one catalog without re-canonicalizing it.
#[derive(Debug, Clone)]
pub struct Scorer {
    axis_of: BTreeMap<String, Vec<Intelligence>>,
    ideal: SwsVector,
    mode: ScoringMode,
}

impl Scorer {
    pub fn new(catalog: &AbilityCatalog, mode: ScoringMode) -> Result<Self, ProfileError> {
        let family = catalog.family()?;
        let mut axis_of: BTreeMap<String, Vec<Intelligence>> = BTreeMap::new();
        let ideal = match mode {
            ScoringMode::Reduced => {
                let partition = disjointify(&family);
                for class in Intelligence::ALL {
                    for x in partition.reduced(class) {
                        axis_of.insert(x.to_string(), vec![class]);
                    }
                }
                SwsVector(partition.reduced_sizes().map(|n| n as u32))
            }
            ScoringMode::Raw => {
                for (x, classes) in family.memberships() {
                    axis_of.insert(x.to_string(), classes);
                }
                SwsVector(std::array::from_fn(|s| family.classes()[s].len() as u32))
            }
        };
        Ok(Scorer { axis_of, ideal, mode })
    }

    pub fn mode(&self) -> ScoringMode {
        self.mode
    }

    /// Maximum attainable score per axis.
    pub fn ideal(&self) -> SwsVector {
        self.ideal
    }

    pub fn score(&self, sheet: &ResponseSheet) -> Result<SwsVector, ProfileError> {
        let unknown: Vec<String> = sheet
            .selected
            .iter()
            .filter(|x| !self.axis_of.contains_key(x.as_str()))
            .cloned()
            .collect();
        if !unknown.is_empty() {
            return Err(ProfileError::UnknownAbilities {
                person: sheet.person_id.clone(),
                ids: unknown,
            });
        }
        let mut scores = [0u32; AXES];
        for x in &sheet.selected {
            for class in &self.axis_of[x.as_str()] {
                scores[class.slot()] += 1;
            }
        }
        Ok(SwsVector(scores))
    }

    pub fn profile(&self, sheet: &ResponseSheet) -> Result<PersonProfile, ProfileError> {
        Ok(PersonProfile {
            person_id: sheet.person_id.clone(),
            sws: self.score(sheet)?,
            selected: sheet.selected.clone(),
        })
    }
}

/// Counts selected abilities per reduced class.
pub fn score(catalog: &AbilityCatalog, sheet: &ResponseSheet) -> Result<SwsVector, ProfileError> {
    Scorer::new(catalog, ScoringMode::Reduced)?.score(sheet)
}

/// Counts selected abilities per original, overlapping class.
pub fn score_raw(catalog: &AbilityCatalog, sheet: &ResponseSheet) -> Result<SwsVector, ProfileError> {
    Scorer::new(catalog, ScoringMode::Raw)?.score(sheet)
}

/// Reduced class sizes: the full web.
pub fn ideal_sws(catalog: &AbilityCatalog) -> Result<SwsVector, ProfileError> {
    Ok(Scorer::new(catalog, ScoringMode::Reduced)?.ideal())
}
