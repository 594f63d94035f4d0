//! Multiple-intelligence profiles modeled as a quotient space.
//!
//! * [`quotient`] turns the eight overlapping intelligence classes into a
//!   canonical partition and exposes the induced equivalence relation.
//! * [`profile`] scores response sheets into Spider Web System vectors.
//! * [`grouping`] forms groups whose members cover each other's gaps.
//! * [`render`] emits deterministic SVG webs and partition diagrams.
//! * [`document`] defines the JSON and tabular file formats.
//! * [`cli`] implements the `miq` command line.

pub mod cli;
pub mod document;
pub mod grouping;
pub mod profile;
pub mod quotient;
pub mod render;

pub use grouping::{
    exact_grouping, form_groups, greedy_grouping, group_profile, local_search, plan_objective,
    GroupingConfig, GroupingPlan, Objective, Roster, SearchMode,
};
pub use profile::{
    ideal_sws, score, validate_catalog, Ability, AbilityCatalog, PersonProfile, ResponseSheet,
    SwsVector,
};
pub use quotient::{
    disjointify, overlap_set, quotient, related, validate_partition, CanonicalPartition,
    ElementId, Intelligence, LabeledFamily,
};
