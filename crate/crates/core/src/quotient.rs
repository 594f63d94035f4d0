//! Disjointification of the eight intelligence classes into a canonical
//! partition, plus the equivalence relation and quotient it induces.
//!
//! An ability can belong to several intelligences. Every ability that does is
//! kept only in the lowest-indexed class containing it and removed from the
//! others. Each element's fate depends only on its own membership set, so the
//! construction is a single pass computing `min(memberships)` per element; the
//! result is the same as resolving the shared elements one at a time in any
//! order.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the eight intelligences, in their fixed axis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Intelligence {
    Linguistic,
    LogicalMathematical,
    Spatial,
    BodilyKinaesthetic,
    Musical,
    Interpersonal,
    Intrapersonal,
    Naturalist,
}

/// Number of intelligence classes (and SWS axes).
pub const AXES: usize = 8;

impl Intelligence {
    pub const ALL: [Intelligence; AXES] = [
        Intelligence::Linguistic,
        Intelligence::LogicalMathematical,
        Intelligence::Spatial,
        Intelligence::BodilyKinaesthetic,
        Intelligence::Musical,
        Intelligence::Interpersonal,
        Intelligence::Intrapersonal,
        Intelligence::Naturalist,
    ];

    /// 1-based class index.
    pub fn index(self) -> usize {
        self.slot() + 1
    }

    /// 0-based position in axis arrays.
    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        index.checked_sub(1).and_then(|s| Self::ALL.get(s).copied())
    }

    pub fn name(self) -> &'static str {
        match self {
            Intelligence::Linguistic => "Linguistic",
            Intelligence::LogicalMathematical => "Logical-Mathematical",
            Intelligence::Spatial => "Spatial",
            Intelligence::BodilyKinaesthetic => "Bodily-Kinaesthetic",
            Intelligence::Musical => "Musical",
            Intelligence::Interpersonal => "Interpersonal",
            Intelligence::Intrapersonal => "Intrapersonal",
            Intelligence::Naturalist => "Naturalist",
        }
    }

    /// Parses a class name. Case, spaces, hyphens and underscores are
    /// ignored, a trailing "intelligence" is dropped, and the
    /// "Kinaesthetic-Bodily" / "Kinesthetic" spellings are accepted.
    pub fn from_name(name: &str) -> Option<Self> {
        let mut key: String = name
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        if let Some(stripped) = key.strip_suffix("intelligence") {
            key = stripped.to_string();
        }
        let found = match key.as_str() {
            "linguistic" | "verbal" | "verballinguistic" => Intelligence::Linguistic,
            "logicalmathematical" | "logical" | "mathematical" => {
                Intelligence::LogicalMathematical
            }
            "spatial" | "visualspatial" => Intelligence::Spatial,
            "bodilykinaesthetic" | "bodilykinesthetic" | "kinaestheticbodily"
            | "kinestheticbodily" | "kinaesthetic" | "kinesthetic" => {
                Intelligence::BodilyKinaesthetic
            }
            "musical" => Intelligence::Musical,
            "interpersonal" => Intelligence::Interpersonal,
            "intrapersonal" => Intelligence::Intrapersonal,
            "naturalist" | "naturalistic" => Intelligence::Naturalist,
            _ => return None,
        };
        Some(found)
    }
}

impl fmt::Display for Intelligence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Identifier of one cognitive ability. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ElementId(String);

impl ElementId {
    pub fn new(id: impl Into<String>) -> Result<Self, FamilyError> {
        let id = id.into();
        if id.is_empty() {
            return Err(FamilyError::EmptyId);
        }
        Ok(ElementId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for ElementId {
    type Error = FamilyError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        ElementId::new(value)
    }
}

impl From<ElementId> for String {
    fn from(id: ElementId) -> Self {
        id.0
    }
}

impl Borrow<str> for ElementId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("expected {AXES} intelligence classes, found {found}")]
    WrongClassCount { found: usize },
    #[error("element ids must be non-empty")]
    EmptyId,
    #[error("element `{element}` belongs to no intelligence class")]
    Orphan { element: ElementId },
    #[error("class {class} lists element `{element}` which is not in the universe")]
    Undeclared {
        element: ElementId,
        class: Intelligence,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("element `{0}` is not in the partition's domain")]
    UnknownElement(String),
}

/// The eight (possibly overlapping) intelligence classes over a universe of
/// abilities. Construction enforces that the universe is exactly the union
/// of the classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledFamily {
    classes: [BTreeSet<ElementId>; AXES],
}

impl LabeledFamily {
    /// Builds a family from an explicit class list, which must have exactly
    /// eight entries.
    pub fn from_classes(classes: Vec<BTreeSet<ElementId>>) -> Result<Self, FamilyError> {
        let classes: [BTreeSet<ElementId>; AXES] = classes
            .try_into()
            .map_err(|c: Vec<_>| FamilyError::WrongClassCount { found: c.len() })?;
        Ok(LabeledFamily { classes })
    }

    /// Builds a family over a declared universe; every universe element must
    /// appear in some class and every class member must be declared.
    pub fn with_universe(
        universe: &BTreeSet<ElementId>,
        classes: Vec<BTreeSet<ElementId>>,
    ) -> Result<Self, FamilyError> {
        let family = Self::from_classes(classes)?;
        for class in Intelligence::ALL {
            if let Some(stray) = family.class(class).iter().find(|x| !universe.contains(*x)) {
                return Err(FamilyError::Undeclared {
                    element: stray.clone(),
                    class,
                });
            }
        }
        if let Some(orphan) = universe
            .iter()
            .find(|x| family.classes.iter().all(|c| !c.contains(*x)))
        {
            return Err(FamilyError::Orphan {
                element: orphan.clone(),
            });
        }
        Ok(family)
    }

    /// Builds a family from per-element membership lists.
    pub fn from_memberships<'a, I, M>(elements: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = (&'a ElementId, M)>,
        M: IntoIterator<Item = Intelligence>,
    {
        let mut classes: [BTreeSet<ElementId>; AXES] = Default::default();
        for (id, memberships) in elements {
            let mut any = false;
            for class in memberships {
                classes[class.slot()].insert(id.clone());
                any = true;
            }
            if !any {
                return Err(FamilyError::Orphan { element: id.clone() });
            }
        }
        Ok(LabeledFamily { classes })
    }

    pub fn class(&self, class: Intelligence) -> &BTreeSet<ElementId> {
        &self.classes[class.slot()]
    }

    pub fn classes(&self) -> &[BTreeSet<ElementId>; AXES] {
        &self.classes
    }

    /// Union of all classes.
    pub fn universe(&self) -> BTreeSet<ElementId> {
        self.classes.iter().flatten().cloned().collect()
    }

    /// Every element with the ascending list of classes containing it.
    pub fn memberships(&self) -> BTreeMap<&ElementId, Vec<Intelligence>> {
        let mut out: BTreeMap<&ElementId, Vec<Intelligence>> = BTreeMap::new();
        for class in Intelligence::ALL {
            for x in self.class(class) {
                out.entry(x).or_default().push(class);
            }
        }
        out
    }
}

/// Abilities belonging to two or more intelligence classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OverlapSet {
    members: BTreeSet<ElementId>,
}

impl OverlapSet {
    pub fn members(&self) -> &BTreeSet<ElementId> {
        &self.members
    }

    pub fn contains(&self, id: &str) -> bool {
        self.members.contains(id)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn overlap_set(family: &LabeledFamily) -> OverlapSet {
    OverlapSet {
        members: family
            .memberships()
            .into_iter()
            .filter(|(_, m)| m.len() >= 2)
            .map(|(x, _)| x.clone())
            .collect(),
    }
}

/// Reduced classes plus the element → class quotient map.
///
/// All eight labeled classes are kept even when a reduction leaves one empty;
/// [`CanonicalPartition::quotient`] drops the empty ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalPartition {
    reduced: [BTreeSet<ElementId>; AXES],
    class_of: BTreeMap<ElementId, Intelligence>,
}

/// One non-empty equivalence class of the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub class: Intelligence,
    pub members: BTreeSet<ElementId>,
}

pub fn disjointify(family: &LabeledFamily) -> CanonicalPartition {
    let mut reduced: [BTreeSet<ElementId>; AXES] = Default::default();
    let mut class_of = BTreeMap::new();
    for (x, memberships) in family.memberships() {
        // memberships are ascending, so the first is the minimum index
        let keep = memberships[0];
        reduced[keep.slot()].insert(x.clone());
        class_of.insert(x.clone(), keep);
    }
    CanonicalPartition { reduced, class_of }
}

impl CanonicalPartition {
    /// Assembles a candidate partition without checking it. Use
    /// [`validate_partition`] to audit the result.
    pub fn from_parts(
        reduced: [BTreeSet<ElementId>; AXES],
        class_of: BTreeMap<ElementId, Intelligence>,
    ) -> Self {
        CanonicalPartition { reduced, class_of }
    }

    pub fn reduced(&self, class: Intelligence) -> &BTreeSet<ElementId> {
        &self.reduced[class.slot()]
    }

    pub fn reduced_classes(&self) -> &[BTreeSet<ElementId>; AXES] {
        &self.reduced
    }

    pub fn reduced_sizes(&self) -> [usize; AXES] {
        std::array::from_fn(|s| self.reduced[s].len())
    }

    pub fn class_of(&self, id: &str) -> Result<Intelligence, DomainError> {
        self.class_of
            .get(id)
            .copied()
            .ok_or_else(|| DomainError::UnknownElement(id.to_string()))
    }

    pub fn domain(&self) -> impl Iterator<Item = &ElementId> {
        self.class_of.keys()
    }

    pub fn related(&self, a: &str, b: &str) -> Result<bool, DomainError> {
        Ok(self.class_of(a)? == self.class_of(b)?)
    }

    /// Non-empty blocks in class-index order.
    pub fn quotient(&self) -> Vec<Block> {
        Intelligence::ALL
            .iter()
            .filter(|c| !self.reduced(**c).is_empty())
            .map(|&class| Block {
                class,
                members: self.reduced(class).clone(),
            })
            .collect()
    }
}

/// Free-function form of [`CanonicalPartition::related`].
pub fn related(partition: &CanonicalPartition, a: &str, b: &str) -> Result<bool, DomainError> {
    partition.related(a, b)
}

/// Free-function form of [`CanonicalPartition::quotient`].
pub fn quotient(partition: &CanonicalPartition) -> Vec<Block> {
    partition.quotient()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    /// Element present in more than one reduced class.
    NotDisjoint {
        element: ElementId,
        classes: Vec<Intelligence>,
    },
    /// Source element missing from every reduced class.
    Uncovered { element: ElementId },
    /// Reduced classes contain an element the source family lacks.
    Extraneous {
        element: ElementId,
        class: Intelligence,
    },
    /// Element kept somewhere other than its minimum source class.
    NotMinIndex {
        element: ElementId,
        expected: Intelligence,
        found: Intelligence,
    },
    /// Quotient map disagrees with reduced-class membership.
    MapMismatch {
        element: ElementId,
        mapped: Option<Intelligence>,
    },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::NotDisjoint { element, classes } => {
                let idx: Vec<String> = classes.iter().map(|c| c.index().to_string()).collect();
                write!(
                    f,
                    "disjointness: `{element}` appears in reduced classes {{{}}}",
                    idx.join(",")
                )
            }
            PartitionViolation::Uncovered { element } => {
                write!(f, "coverage: `{element}` is in no reduced class")
            }
            PartitionViolation::Extraneous { element, class } => write!(
                f,
                "coverage: `{element}` in reduced class {} is not in the source family",
                class.index()
            ),
            PartitionViolation::NotMinIndex {
                element,
                expected,
                found,
            } => write!(
                f,
                "min-index: `{element}` kept in class {} but its minimum class is {}",
                found.index(),
                expected.index()
            ),
            PartitionViolation::MapMismatch { element, mapped } => match mapped {
                Some(c) => write!(
                    f,
                    "quotient map: `{element}` mapped to class {} which does not hold it",
                    c.index()
                ),
                None => write!(f, "quotient map: `{element}` has no class"),
            },
        }
    }
}

/// Audits a candidate partition against its source family. An empty result
/// means the candidate is exactly the disjointification of `source`.
pub fn validate_partition(
    candidate: &CanonicalPartition,
    source: &LabeledFamily,
) -> Vec<PartitionViolation> {
    let mut report = Vec::new();
    let memberships = source.memberships();

    let mut holders: BTreeMap<&ElementId, Vec<Intelligence>> = BTreeMap::new();
    for class in Intelligence::ALL {
        for x in candidate.reduced(class) {
            holders.entry(x).or_default().push(class);
        }
    }

    for (&x, classes) in &holders {
        if classes.len() > 1 {
            report.push(PartitionViolation::NotDisjoint {
                element: x.clone(),
                classes: classes.clone(),
            });
        }
        if !memberships.contains_key(x) {
            for &class in classes {
                report.push(PartitionViolation::Extraneous {
                    element: x.clone(),
                    class,
                });
            }
        }
    }

    for (&x, source_classes) in &memberships {
        let expected = source_classes[0];
        match holders.get(x) {
            None => report.push(PartitionViolation::Uncovered { element: x.clone() }),
            Some(found) => {
                for &class in found.iter().filter(|c| **c != expected) {
                    report.push(PartitionViolation::NotMinIndex {
                        element: x.clone(),
                        expected,
                        found: class,
                    });
                }
            }
        }
    }

    for (x, found) in &holders {
        let mapped = candidate.class_of.get(*x).copied();
        if mapped.map_or(true, |c| !found.contains(&c)) {
            report.push(PartitionViolation::MapMismatch {
                element: (*x).clone(),
                mapped,
            });
        }
    }
    for (x, &mapped) in &candidate.class_of {
        if !holders.contains_key(x) {
            report.push(PartitionViolation::MapMismatch {
                element: x.clone(),
                mapped: Some(mapped),
            });
        }
    }

    report
}
