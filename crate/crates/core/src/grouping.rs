//! Formation of Homogeneous Intelligent Groups.
//!
//! A group's effective web is the componentwise maximum of its members' SWS
//! vectors: one strong member covers the others' gap on that axis. A group's
//! balance is the worst covered fraction over the axes, and a plan is scored
//! by the lexicographic pair (worst group balance, sum of balances). All
//! arithmetic is exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profile::{PersonProfile, SwsVector};
use crate::quotient::{Intelligence, AXES};

/// Fraction of the ideal web a group covers on its weakest axis.
pub type Balance = Ratio<u64>;

/// Largest roster the exhaustive search accepts.
pub const EXACT_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupingError {
    #[error("roster is empty")]
    EmptyRoster,
    #[error("group member list is empty")]
    EmptyGroup,
    #[error("group size must be at least 1")]
    InvalidGroupSize,
    #[error("duplicate person id `{0}`")]
    DuplicatePerson(String),
    #[error("person `{person}` scores above the ideal on the {axis} axis")]
    ExceedsIdeal { person: String, axis: Intelligence },
    #[error("exact grouping is limited to {limit} persons, roster has {n}")]
    SizeLimit { n: usize, limit: usize },
    #[error("plan does not partition the roster: {0}")]
    PlanMismatch(String),
}

/// Profiles to be grouped plus the ideal web they are measured against.
/// Profiles are held in ascending `person_id` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roster {
    profiles: Vec<PersonProfile>,
    ideal: SwsVector,
}

impl Roster {
    pub fn new(mut profiles: Vec<PersonProfile>, ideal: SwsVector) -> Result<Self, GroupingError> {
        profiles.sort_by(|a, b| a.person_id.cmp(&b.person_id));
        for pair in profiles.windows(2) {
            if pair[0].person_id == pair[1].person_id {
                return Err(GroupingError::DuplicatePerson(pair[0].person_id.clone()));
            }
        }
        for p in &profiles {
            if let Some(axis) = p.sws.first_excess(&ideal) {
                return Err(GroupingError::ExceedsIdeal {
                    person: p.person_id.clone(),
                    axis,
                });
            }
        }
        Ok(Roster { profiles, ideal })
    }

    pub fn profiles(&self) -> &[PersonProfile] {
        &self.profiles
    }

    pub fn ideal(&self) -> SwsVector {
        self.ideal
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    fn position(&self, person_id: &str) -> Option<usize> {
        self.profiles
            .binary_search_by(|p| p.person_id.as_str().cmp(person_id))
            .ok()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    #[default]
    Greedy,
    #[serde(rename = "local")]
    LocalSearch,
    Exact,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Greedy => "greedy",
            SearchMode::LocalSearch => "local",
            SearchMode::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupingConfig {
    pub group_size: usize,
    pub seed: u64,
    /// Maximum number of full swap passes per local search.
    pub search_budget: u32,
    /// Randomized restarts of local search in addition to the greedy start.
    pub restarts: u32,
    pub mode: SearchMode,
}

impl GroupingConfig {
    pub fn new(group_size: usize, mode: SearchMode) -> Self {
        GroupingConfig {
            group_size,
            seed: 0,
            search_budget: 100,
            restarts: 0,
            mode,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupProfile {
    pub profile: SwsVector,
    pub balance: Balance,
}

/// Covered fraction on the weakest axis; an axis with ideal 0 counts as
/// fully covered.
pub fn balance_of(profile: &SwsVector, ideal: &SwsVector) -> Balance {
    (0..AXES)
        .map(|s| {
            if ideal.0[s] == 0 {
                Balance::one()
            } else {
                Balance::new(u64::from(profile.0[s]), u64::from(ideal.0[s]))
            }
        })
        .min()
        .expect("eight axes")
}

pub fn group_profile(
    members: &[PersonProfile],
    ideal: &SwsVector,
) -> Result<GroupProfile, GroupingError> {
    if members.is_empty() {
        return Err(GroupingError::EmptyGroup);
    }
    let profile = members
        .iter()
        .fold(SwsVector::ZERO, |acc, m| acc.join(&m.sws));
    Ok(GroupProfile {
        balance: balance_of(&profile, ideal),
        profile,
    })
}

/// Lexicographic plan score; larger is better.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Objective {
    pub min_balance: Balance,
    pub sum_balances: BigRational,
}

impl Objective {
    pub fn from_balances<'a>(balances: impl IntoIterator<Item = &'a Balance>) -> Self {
        let mut min_balance: Option<Balance> = None;
        let mut sum_balances = BigRational::zero();
        for b in balances {
            min_balance = Some(min_balance.map_or(*b, |m| m.min(*b)));
            sum_balances += big(*b);
        }
        Objective {
            min_balance: min_balance.unwrap_or_else(Balance::zero),
            sum_balances,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.min_balance, self.sum_balances)
    }
}

fn big(b: Balance) -> BigRational {
    BigRational::new(BigInt::from(*b.numer()), BigInt::from(*b.denom()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    /// Member ids, ascending.
    pub members: Vec<String>,
    pub profile: GroupProfile,
}

/// Groups in canonical form: members sorted, groups ordered by their
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupingPlan {
    pub groups: Vec<Group>,
    pub objective: Objective,
}

impl GroupingPlan {
    pub fn canonical_form(&self) -> Vec<Vec<&str>> {
        let mut form: Vec<Vec<&str>> = self
            .groups
            .iter()
            .map(|g| {
                let mut m: Vec<&str> = g.members.iter().map(String::as_str).collect();
                m.sort_unstable();
                m
            })
            .collect();
        form.sort();
        form
    }
}

pub fn plan_objective(plan: &GroupingPlan) -> Objective {
    Objective::from_balances(plan.groups.iter().map(|g| &g.profile.balance))
}

/// Group sizes for `n` persons in groups of nominal size `k`:
/// `ceil(n / k)` groups whose sizes differ by at most one, larger first.
pub fn group_sizes(n: usize, k: usize) -> Vec<usize> {
    if n == 0 || k == 0 {
        return Vec::new();
    }
    let g = n.div_ceil(k);
    let (base, extra) = (n / g, n % g);
    (0..g).map(|i| base + usize::from(i < extra)).collect()
}

fn check_inputs(roster: &Roster, config: &GroupingConfig) -> Result<(), GroupingError> {
    if config.group_size == 0 {
        return Err(GroupingError::InvalidGroupSize);
    }
    if roster.is_empty() {
        return Err(GroupingError::EmptyRoster);
    }
    Ok(())
}

fn web_of(roster: &Roster, members: &[usize]) -> SwsVector {
    members
        .iter()
        .fold(SwsVector::ZERO, |acc, &i| acc.join(&roster.profiles[i].sws))
}

/// Builds the canonical plan for an assignment of roster indices.
fn build_plan(roster: &Roster, assignment: &[Vec<usize>]) -> GroupingPlan {
    let mut groups: Vec<Vec<usize>> = assignment
        .iter()
        .filter(|g| !g.is_empty())
        .map(|g| {
            let mut g = g.clone();
            g.sort_unstable();
            g
        })
        .collect();
    groups.sort();
    let groups: Vec<Group> = groups
        .iter()
        .map(|g| {
            let profile = web_of(roster, g);
            Group {
                members: g.iter().map(|&i| roster.profiles[i].person_id.clone()).collect(),
                profile: GroupProfile {
                    balance: balance_of(&profile, &roster.ideal),
                    profile,
                },
            }
        })
        .collect();
    let objective = Objective::from_balances(groups.iter().map(|g| &g.profile.balance));
    GroupingPlan { groups, objective }
}

/// Most complete persons first, each joining the group with the lowest
/// current balance that still has room.
pub fn greedy_grouping(roster: &Roster, config: &GroupingConfig) -> Result<GroupingPlan, GroupingError> {
    check_inputs(roster, config)?;
    let capacities = group_sizes(roster.len(), config.group_size);

    let mut order: Vec<usize> = (0..roster.len()).collect();
    // roster is id-sorted and the sort is stable, so ties stay in id order
    order.sort_by_key(|&i| std::cmp::Reverse(roster.profiles[i].sws.total()));

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); capacities.len()];
    let mut webs = vec![SwsVector::ZERO; capacities.len()];
    for person in order {
        let target = (0..capacities.len())
            .filter(|&g| members[g].len() < capacities[g])
            .min_by_key(|&g| (balance_of(&webs[g], &roster.ideal), g))
            .expect("capacities sum to roster size");
        members[target].push(person);
        webs[target] = webs[target].join(&roster.profiles[person].sws);
    }
    Ok(build_plan(roster, &members))
}

struct SwapState<'a> {
    roster: &'a Roster,
    groups: Vec<Vec<usize>>,
    group_of: Vec<usize>,
    balances: Vec<Balance>,
    objective: Objective,
}

impl<'a> SwapState<'a> {
    fn new(roster: &'a Roster, groups: Vec<Vec<usize>>) -> Self {
        let mut group_of = vec![0; roster.len()];
        for (g, members) in groups.iter().enumerate() {
            for &i in members {
                group_of[i] = g;
            }
        }
        let balances: Vec<Balance> = groups
            .iter()
            .map(|m| balance_of(&web_of(roster, m), &roster.ideal))
            .collect();
        let objective = Objective::from_balances(&balances);
        SwapState {
            roster,
            groups,
            group_of,
            balances,
            objective,
        }
    }

    fn balance_with(&self, group: usize, out: usize, incoming: usize) -> Balance {
        let web = self.groups[group]
            .iter()
            .map(|&i| if i == out { incoming } else { i })
            .fold(SwsVector::ZERO, |acc, i| acc.join(&self.roster.profiles[i].sws));
        balance_of(&web, &self.roster.ideal)
    }

    /// Applies the swap of persons `a` and `b` if it strictly improves the
    /// objective.
    fn try_swap(&mut self, a: usize, b: usize) -> bool {
        let (ga, gb) = (self.group_of[a], self.group_of[b]);
        let new_a = self.balance_with(ga, a, b);
        let new_b = self.balance_with(gb, b, a);

        let others_min = self
            .balances
            .iter()
            .enumerate()
            .filter(|(g, _)| *g != ga && *g != gb)
            .map(|(_, b)| *b)
            .min();
        let pair_min = new_a.min(new_b);
        let new_min = others_min.map_or(pair_min, |m| m.min(pair_min));
        if new_min < self.objective.min_balance {
            return false;
        }
        let delta = big(new_a) + big(new_b) - big(self.balances[ga]) - big(self.balances[gb]);
        if new_min == self.objective.min_balance && delta <= BigRational::zero() {
            return false;
        }

        for slot in self.groups[ga].iter_mut().filter(|i| **i == a) {
            *slot = b;
        }
        for slot in self.groups[gb].iter_mut().filter(|i| **i == b) {
            *slot = a;
        }
        self.group_of[a] = gb;
        self.group_of[b] = ga;
        self.balances[ga] = new_a;
        self.balances[gb] = new_b;
        self.objective = Objective {
            min_balance: new_min,
            sum_balances: &self.objective.sum_balances + delta,
        };
        true
    }

    /// Runs first-improvement passes; returns whether anything changed.
    fn descend(&mut self, budget: u32) -> bool {
        let n = self.roster.len();
        let mut changed = false;
        for _ in 0..budget {
            let mut improved = false;
            for a in 0..n {
                for b in a + 1..n {
                    if self.group_of[a] != self.group_of[b] && self.try_swap(a, b) {
                        improved = true;
                    }
                }
            }
            changed |= improved;
            if !improved {
                break;
            }
        }
        changed
    }
}

fn assignment_of(roster: &Roster, plan: &GroupingPlan) -> Result<Vec<Vec<usize>>, GroupingError> {
    let mut seen = BTreeSet::new();
    let mut groups = Vec::with_capacity(plan.groups.len());
    for group in &plan.groups {
        let mut members = Vec::with_capacity(group.members.len());
        for id in &group.members {
            let i = roster
                .position(id)
                .ok_or_else(|| GroupingError::PlanMismatch(format!("unknown person `{id}`")))?;
            if !seen.insert(i) {
                return Err(GroupingError::PlanMismatch(format!("`{id}` placed twice")));
            }
            members.push(i);
        }
        groups.push(members);
    }
    if seen.len() != roster.len() {
        let missing = (0..roster.len()).find(|i| !seen.contains(i)).expect("some index missing");
        return Err(GroupingError::PlanMismatch(format!(
            "`{}` is not placed",
            roster.profiles[missing].person_id
        )));
    }
    Ok(groups)
}

/// Swap descent from `initial`. Scans cross-group pairs in ascending
/// `(person_a, person_b)` order and applies every strictly improving swap,
/// for at most `search_budget` passes. Returns `initial` itself when no swap
/// helps.
pub fn local_search(
    initial: &GroupingPlan,
    roster: &Roster,
    config: &GroupingConfig,
) -> Result<GroupingPlan, GroupingError> {
    let groups = assignment_of(roster, initial)?;
    if config.search_budget == 0 {
        return Ok(initial.clone());
    }
    let mut state = SwapState::new(roster, groups);
    if !state.descend(config.search_budget) {
        return Ok(initial.clone());
    }
    Ok(build_plan(roster, &state.groups))
}

fn random_assignment(roster: &Roster, sizes: &[usize], rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..roster.len()).collect();
    order.shuffle(rng);
    let mut rest = order.as_slice();
    sizes
        .iter()
        .map(|&s| {
            let (head, tail) = rest.split_at(s);
            rest = tail;
            head.to_vec()
        })
        .collect()
}

/// Greater objective wins; ties go to the smaller canonical form.
fn better(candidate: &GroupingPlan, incumbent: &GroupingPlan) -> bool {
    match candidate.objective.cmp(&incumbent.objective) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => candidate.canonical_form() < incumbent.canonical_form(),
    }
}

/// Local search from the greedy plan and from `restarts` seeded random
/// starts, keeping the best result.
pub fn local_search_grouping(
    roster: &Roster,
    config: &GroupingConfig,
) -> Result<GroupingPlan, GroupingError> {
    let start = greedy_grouping(roster, config)?;
    let mut best = local_search(&start, roster, config)?;
    let sizes = group_sizes(roster.len(), config.group_size);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.restarts {
        let mut state = SwapState::new(roster, random_assignment(roster, &sizes, &mut rng));
        state.descend(config.search_budget);
        let candidate = build_plan(roster, &state.groups);
        if better(&candidate, &best) {
            best = candidate;
        }
    }
    Ok(best)
}

/// Exhaustive optimum over every admissible partition. Restricted to
/// rosters of at most [`EXACT_LIMIT`] persons.
pub fn exact_grouping(roster: &Roster, config: &GroupingConfig) -> Result<GroupingPlan, GroupingError> {
    check_inputs(roster, config)?;
    let n = roster.len();
    if n > EXACT_LIMIT {
        return Err(GroupingError::SizeLimit {
            n,
            limit: EXACT_LIMIT,
        });
    }
    let sizes = group_sizes(n, config.group_size);
    let mut search = ExactSearch {
        roster,
        groups: sizes.len(),
        floor: *sizes.last().expect("n >= 1"),
        ceil: sizes[0],
        blocks: Vec::new(),
        best: None,
    };
    search.extend(0);
    let (_, assignment) = search.best.expect("at least one admissible partition");
    Ok(build_plan(roster, &assignment))
}

struct ExactSearch<'a> {
    roster: &'a Roster,
    groups: usize,
    floor: usize,
    ceil: usize,
    blocks: Vec<Vec<usize>>,
    best: Option<(Objective, Vec<Vec<usize>>)>,
}

impl ExactSearch<'_> {
    // Persons are placed in id order and a new block may only be opened by
    // its smallest member, so each unlabeled partition is visited once and
    // `blocks` is always in canonical order.
    fn extend(&mut self, next: usize) {
        let n = self.roster.len();
        let remaining = n - next;
        let deficit: usize = self
            .blocks
            .iter()
            .map(|b| self.floor.saturating_sub(b.len()))
            .sum::<usize>()
            + (self.groups - self.blocks.len()) * self.floor;
        if deficit > remaining {
            return;
        }
        if next == n {
            if self.blocks.len() == self.groups {
                self.evaluate();
            }
            return;
        }
        for b in 0..self.blocks.len() {
            if self.blocks[b].len() < self.ceil {
                self.blocks[b].push(next);
                self.extend(next + 1);
                self.blocks[b].pop();
            }
        }
        if self.blocks.len() < self.groups {
            self.blocks.push(vec![next]);
            self.extend(next + 1);
            self.blocks.pop();
        }
    }

    fn evaluate(&mut self) {
        let balances: Vec<Balance> = self
            .blocks
            .iter()
            .map(|b| balance_of(&web_of(self.roster, b), &self.roster.ideal))
            .collect();
        let objective = Objective::from_balances(&balances);
        let replace = match &self.best {
            None => true,
            Some((best, form)) => objective > *best || (objective == *best && self.blocks < *form),
        };
        if replace {
            self.best = Some((objective, self.blocks.clone()));
        }
    }
}

/// Runs the search selected by `config.mode`.
pub fn form_groups(roster: &Roster, config: &GroupingConfig) -> Result<GroupingPlan, GroupingError> {
    match config.mode {
        SearchMode::Greedy => greedy_grouping(roster, config),
        SearchMode::LocalSearch => local_search_grouping(roster, config),
        SearchMode::Exact => exact_grouping(roster, config),
    }
}

/// Looks up the listed persons' profiles, in the given order.
pub fn members_by_id<'a>(
    roster: &'a Roster,
    ids: &[String],
) -> Result<Vec<&'a PersonProfile>, GroupingError> {
    let index: BTreeMap<&str, &PersonProfile> = roster
        .profiles
        .iter()
        .map(|p| (p.person_id.as_str(), p))
        .collect();
    ids.iter()
        .map(|id| {
            index
                .get(id.as_str())
                .copied()
                .ok_or_else(|| GroupingError::PlanMismatch(format!("unknown person `{id}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const IDEAL8: SwsVector = SwsVector([8; 8]);

    fn person(id: &str, sws: [u32; 8]) -> PersonProfile {
        PersonProfile::new(id, SwsVector(sws))
    }

    fn four() -> Roster {
        Roster::new(
            vec![
                person("A", [8, 0, 0, 0, 0, 0, 0, 0]),
                person("B", [0, 8, 8, 8, 8, 8, 8, 8]),
                person("C", [8, 8, 8, 8, 8, 8, 8, 0]),
                person("D", [0, 0, 0, 0, 0, 0, 0, 8]),
            ],
            IDEAL8,
        )
        .unwrap()
    }

    fn ratio(n: u64, d: u64) -> Balance {
        Balance::new(n, d)
    }

    fn bigr(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sizes_follow_remainder_rule() {
        assert_eq!(group_sizes(4, 2), vec![2, 2]);
        assert_eq!(group_sizes(7, 3), vec![3, 2, 2]);
        assert_eq!(group_sizes(5, 5), vec![5]);
        assert_eq!(group_sizes(5, 9), vec![5]);
        assert_eq!(group_sizes(10, 4), vec![4, 3, 3]);
    }

    #[test]
    fn group_profile_examples() {
        let solo = person("s", [1, 2, 3, 4, 5, 6, 7, 8]);
        let g = group_profile(std::slice::from_ref(&solo), &IDEAL8).unwrap();
        assert_eq!(g.profile, solo.sws);
        assert_eq!(g.balance, ratio(1, 8));

        let g = group_profile(
            &[person("a", [8, 0, 0, 0, 0, 0, 0, 0]), person("b", [0, 8, 0, 0, 0, 0, 0, 0])],
            &IDEAL8,
        )
        .unwrap();
        assert_eq!(g.profile, SwsVector([8, 8, 0, 0, 0, 0, 0, 0]));
        assert_eq!(g.balance, ratio(0, 1));

        let g = group_profile(
            &[person("a", [8, 0, 8, 0, 8, 0, 8, 0]), person("b", [0, 8, 0, 8, 0, 8, 0, 8])],
            &IDEAL8,
        )
        .unwrap();
        assert_eq!(g.balance, ratio(1, 1));

        assert_eq!(group_profile(&[], &IDEAL8), Err(GroupingError::EmptyGroup));
    }

    #[test]
    fn zero_ideal_axes_count_as_covered() {
        let ideal = SwsVector([4, 0, 4, 4, 4, 4, 4, 4]);
        assert_eq!(balance_of(&SwsVector([2, 0, 4, 4, 4, 4, 4, 4]), &ideal), ratio(1, 2));
        assert_eq!(balance_of(&SwsVector::ZERO, &SwsVector::ZERO), ratio(1, 1));
    }

    #[test]
    fn objective_examples() {
        let o = Objective::from_balances(&[ratio(1, 1)]);
        assert_eq!((o.min_balance, o.sum_balances), (ratio(1, 1), bigr(1, 1)));
        let o = Objective::from_balances(&[ratio(1, 2), ratio(1, 1)]);
        assert_eq!((o.min_balance, o.sum_balances.clone()), (ratio(1, 2), bigr(3, 2)));
        let swapped = Objective::from_balances(&[ratio(1, 1), ratio(1, 2)]);
        assert_eq!(o, swapped);
        assert!(Objective::from_balances(&[ratio(1, 2), ratio(1, 2)]) > Objective::from_balances(&[ratio(1, 4), ratio(1, 1)]));
    }

    #[test]
    fn roster_rejects_duplicates_and_excess() {
        let dup = Roster::new(vec![person("a", [0; 8]), person("a", [1; 8])], IDEAL8);
        assert_eq!(dup, Err(GroupingError::DuplicatePerson("a".into())));
        let over = Roster::new(vec![person("a", [9, 0, 0, 0, 0, 0, 0, 0])], IDEAL8);
        assert_eq!(
            over,
            Err(GroupingError::ExceedsIdeal {
                person: "a".into(),
                axis: Intelligence::Linguistic
            })
        );
    }

    #[test]
    fn exact_finds_complementary_pairing() {
        let plan = exact_grouping(&four(), &GroupingConfig::new(2, SearchMode::Exact)).unwrap();
        assert_eq!(plan.canonical_form(), vec![vec!["A", "B"], vec!["C", "D"]]);
        assert_eq!(plan.objective.min_balance, ratio(1, 1));
        assert_eq!(plan.objective.sum_balances, bigr(2, 1));
    }

    #[test]
    fn exact_pair_is_single_group() {
        let roster = Roster::new(vec![person("x", [1; 8]), person("y", [2; 8])], IDEAL8).unwrap();
        let plan = exact_grouping(&roster, &GroupingConfig::new(2, SearchMode::Exact)).unwrap();
        assert_eq!(plan.canonical_form(), vec![vec!["x", "y"]]);
    }

    #[test]
    fn exact_rejects_large_rosters() {
        let roster = Roster::new(
            (0..13).map(|i| person(&format!("p{i:02}"), [1; 8])).collect(),
            IDEAL8,
        )
        .unwrap();
        assert_eq!(
            exact_grouping(&roster, &GroupingConfig::new(3, SearchMode::Exact)),
            Err(GroupingError::SizeLimit { n: 13, limit: 12 })
        );
    }

    #[test]
    fn greedy_trace_on_four() {
        // B and C (total 56) go first and share group 0; A and D fill group 1.
        let plan = greedy_grouping(&four(), &GroupingConfig::new(2, SearchMode::Greedy)).unwrap();
        assert_eq!(plan.canonical_form(), vec![vec!["A", "D"], vec!["B", "C"]]);
        assert_eq!(plan.objective.min_balance, ratio(0, 1));
        assert_eq!(plan.objective.sum_balances, bigr(1, 1));
    }

    #[test]
    fn greedy_with_n_equal_k_is_one_group() {
        let plan = greedy_grouping(&four(), &GroupingConfig::new(4, SearchMode::Greedy)).unwrap();
        assert_eq!(plan.groups.len(), 1);
        assert_eq!(plan.groups[0].members, vec!["A", "B", "C", "D"]);
    }

    #[test]
    fn greedy_on_identical_profiles_is_id_ordered() {
        let roster = Roster::new(
            ["e", "b", "d", "a", "c", "f"].iter().map(|id| person(id, [3; 8])).collect(),
            IDEAL8,
        )
        .unwrap();
        let plan = greedy_grouping(&roster, &GroupingConfig::new(2, SearchMode::Greedy)).unwrap();
        // every group has the same balance, so persons cycle through groups
        assert_eq!(
            plan.canonical_form(),
            vec![vec!["a", "d"], vec!["b", "e"], vec!["c", "f"]]
        );
    }

    #[test]
    fn local_search_reaches_the_optimum_on_four() {
        let roster = four();
        let config = GroupingConfig::new(2, SearchMode::LocalSearch);
        let greedy = greedy_grouping(&roster, &config).unwrap();
        let improved = local_search(&greedy, &roster, &config).unwrap();
        assert_eq!(improved.canonical_form(), vec![vec!["A", "B"], vec!["C", "D"]]);
    }

    #[test]
    fn local_search_budget_zero_and_optimal_input() {
        let roster = four();
        let mut config = GroupingConfig::new(2, SearchMode::LocalSearch);
        let greedy = greedy_grouping(&roster, &config).unwrap();
        config.search_budget = 0;
        assert_eq!(local_search(&greedy, &roster, &config).unwrap(), greedy);

        config.search_budget = 10;
        let best = exact_grouping(&roster, &config).unwrap();
        assert_eq!(local_search(&best, &roster, &config).unwrap(), best);
    }

    #[test]
    fn local_search_rejects_foreign_plans() {
        let roster = four();
        let config = GroupingConfig::new(2, SearchMode::LocalSearch);
        let mut plan = greedy_grouping(&roster, &config).unwrap();
        plan.groups[0].members[0] = "Z".into();
        assert!(matches!(
            local_search(&plan, &roster, &config),
            Err(GroupingError::PlanMismatch(_))
        ));
    }

    #[test]
    fn empty_roster_and_zero_size_are_errors() {
        let empty = Roster::new(Vec::new(), IDEAL8).unwrap();
        let config = GroupingConfig::new(2, SearchMode::Greedy);
        assert_eq!(greedy_grouping(&empty, &config), Err(GroupingError::EmptyRoster));
        let config = GroupingConfig::new(0, SearchMode::Greedy);
        assert_eq!(greedy_grouping(&four(), &config), Err(GroupingError::InvalidGroupSize));
    }

    #[test]
    fn restarts_are_deterministic() {
        let roster = Roster::new(
            (0..11)
                .map(|i| {
                    let sws = std::array::from_fn(|s| ((i * 7 + s * 3) % 9) as u32);
                    person(&format!("p{i:02}"), sws)
                })
                .collect(),
            IDEAL8,
        )
        .unwrap();
        let mut config = GroupingConfig::new(3, SearchMode::LocalSearch);
        config.restarts = 6;
        config.seed = 1;
        let a = form_groups(&roster, &config).unwrap();
        let b = form_groups(&roster, &config).unwrap();
        assert_eq!(a, b);
        let exact = exact_grouping(&roster, &config).unwrap();
        assert!(exact.objective >= a.objective);
    }

    fn arb_roster(max: usize) -> impl Strategy<Value = Roster> {
        prop::collection::vec(prop::array::uniform8(0u32..=4), 1..=max).prop_map(|rows| {
            let profiles = rows
                .into_iter()
                .enumerate()
                .map(|(i, sws)| person(&format!("p{i}"), sws))
                .collect();
            Roster::new(profiles, SwsVector([4; 8])).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn plans_partition_the_roster(roster in arb_roster(9), k in 1usize..=4) {
            for mode in [SearchMode::Greedy, SearchMode::LocalSearch, SearchMode::Exact] {
                let plan = form_groups(&roster, &GroupingConfig::new(k, mode)).unwrap();
                let mut sizes: Vec<usize> = plan.groups.iter().map(|g| g.members.len()).collect();
                sizes.sort_unstable_by(|a, b| b.cmp(a));
                prop_assert_eq!(sizes, group_sizes(roster.len(), k));
                let placed: BTreeSet<&str> = plan
                    .groups
                    .iter()
                    .flat_map(|g| g.members.iter().map(String::as_str))
                    .collect();
                prop_assert_eq!(placed.len(), roster.len());
                prop_assert_eq!(plan_objective(&plan), plan.objective.clone());
            }
        }

        #[test]
        fn group_profile_ignores_member_order(roster in arb_roster(6)) {
            let mut members = roster.profiles().to_vec();
            let forward = group_profile(&members, &roster.ideal()).unwrap();
            members.reverse();
            prop_assert_eq!(group_profile(&members, &roster.ideal()).unwrap(), forward);
        }
    }
}
