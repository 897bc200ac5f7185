//! Information families over the partial-profile space.
//!
//! For an individual `i` with sincere order `q`, an information family
//! yields the cells the individual can distinguish: one singleton per
//! partial profile (complete information), the whole space (zero
//! information), or one cell per attainable winner set, namely the preimage
//! of that outcome under completing the profile with `q` (winner
//! information). Winner cells are built from the rule's winner cache and
//! keyed by their outcome set. They are constructed slice-locally, from the
//! outcomes attained within the `(i, q)` slice itself; building them from
//! the rule's global image and dropping empty preimages yields the same
//! family, since a cell appears exactly when its outcome is attained in the
//! slice. Every cell is therefore nonempty by construction.
//!
//! The informativeness order between two families is decided extensionally:
//! family `A` is at least as informative as family `B` when every cell of
//! `B` is the union of the `A`-cells it contains. Testing the union of the
//! maximal subfamily `{cell in A : cell ⊆ target}` is equivalent to the
//! existential form, because any witnessing subfamily is contained in the
//! maximal one and unions only grow.

use std::fmt;
use std::str::FromStr;

use crate::prefs::{
    bounded_indexing, Individual, LinearOrder, OrderSpace, PartialProfile, ProfileIndexing,
};
use crate::scc::{AltSet, SccRule, WinnerCache};
use crate::{Error, Result};

/// The three supported kinds of information family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfoKind {
    Complete,
    Zero,
    Winner,
}

impl fmt::Display for InfoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfoKind::Complete => f.write_str("complete"),
            InfoKind::Zero => f.write_str("zero"),
            InfoKind::Winner => f.write_str("winner"),
        }
    }
}

impl FromStr for InfoKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<InfoKind> {
        match s {
            "complete" => Ok(InfoKind::Complete),
            "zero" => Ok(InfoKind::Zero),
            "winner" => Ok(InfoKind::Winner),
            _ => Err(Error::input(format!(
                "unknown information kind {s:?}; expected complete, zero, or winner"
            ))),
        }
    }
}

/// Specification of an information family; the winner kind carries the rule
/// whose outcomes are observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfoProfileSpec {
    Complete,
    Zero,
    Winner(SccRule),
}

impl InfoProfileSpec {
    pub fn kind(&self) -> InfoKind {
        match self {
            InfoProfileSpec::Complete => InfoKind::Complete,
            InfoProfileSpec::Zero => InfoKind::Zero,
            InfoProfileSpec::Winner(_) => InfoKind::Winner,
        }
    }
}

impl fmt::Display for InfoProfileSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfoProfileSpec::Winner(rule) => write!(f, "winner({rule})"),
            other => write!(f, "{}", other.kind()),
        }
    }
}

/// What a single information cell tells its owner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfoDescriptor {
    /// The others' partial profile is known exactly.
    Exact(PartialProfile),
    /// Nothing is known beyond membership in the space.
    All,
    /// Exactly the profiles under which the completed election selects this
    /// outcome.
    Outcome(AltSet),
}

impl fmt::Display for InfoDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfoDescriptor::Exact(pbar) => write!(f, "exact({pbar})"),
            InfoDescriptor::All => f.write_str("all"),
            InfoDescriptor::Outcome(x) => write!(f, "outcome({{{x}}})"),
        }
    }
}

/// One cell of an information family, with its extension materialised as
/// ascending partial-profile indices.
#[derive(Debug, Clone)]
pub struct InfoSet {
    owner: Individual,
    sincere: LinearOrder,
    descriptor: InfoDescriptor,
    members: Vec<u64>,
    indexing: ProfileIndexing,
}

impl InfoSet {
    pub fn owner(&self) -> Individual {
        self.owner
    }

    pub fn sincere(&self) -> &LinearOrder {
        &self.sincere
    }

    pub fn descriptor(&self) -> &InfoDescriptor {
        &self.descriptor
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Ascending enumeration indices of the member partial profiles.
    pub fn member_indices(&self) -> &[u64] {
        &self.members
    }

    /// Materialises the member partial profiles.
    pub fn partial_profiles<'a>(
        &'a self,
        space: &'a OrderSpace,
    ) -> impl Iterator<Item = PartialProfile> + 'a {
        self.members
            .iter()
            .map(move |&pbar| self.indexing.partial_profile(space, self.owner, pbar))
    }
}

/// Identifies a cell without materialising partial profiles; used by the
/// searches, which work purely on indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CellKey {
    Exact(u64),
    All,
    Outcome(u16),
}

/// Bit set over the partial-profile index space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IndexSet {
    words: Vec<u64>,
}

impl IndexSet {
    pub(crate) fn empty(capacity: u64) -> IndexSet {
        IndexSet {
            words: vec![0; capacity.div_ceil(64) as usize],
        }
    }

    pub(crate) fn insert(&mut self, idx: u64) {
        self.words[(idx / 64) as usize] |= 1 << (idx % 64);
    }

    pub(crate) fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub(crate) fn union_with(&mut self, other: &IndexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    #[cfg(test)]
    pub(crate) fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    #[cfg(test)]
    pub(crate) fn intersects(&self, other: &IndexSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }
}

/// An information family pinned to one `(n, m)`, ready to enumerate cells
/// for any `(individual, sincere order)` pair.
pub struct InfoFamily {
    spec: InfoProfileSpec,
    n: usize,
    m: usize,
    space: OrderSpace,
    indexing: ProfileIndexing,
    cache: Option<WinnerCache>,
}

impl InfoFamily {
    /// Builds the family; for the winner kind this evaluates the rule over
    /// the whole profile space, subject to the state bound.
    pub fn new(
        spec: InfoProfileSpec,
        n: usize,
        m: usize,
        max_states: u64,
        workers: usize,
    ) -> Result<InfoFamily> {
        let indexing = bounded_indexing(n, m, max_states)?;
        let space = OrderSpace::new(n)?;
        let cache = match &spec {
            InfoProfileSpec::Winner(rule) => {
                Some(WinnerCache::build(rule, n, m, max_states, workers)?)
            }
            _ => None,
        };
        Ok(InfoFamily {
            spec,
            n,
            m,
            space,
            indexing,
            cache,
        })
    }

    /// Wraps an already-built winner cache.
    pub fn from_cache(cache: WinnerCache) -> InfoFamily {
        let rule = cache
            .rule()
            .expect("winner cache built from a rule")
            .clone();
        InfoFamily {
            spec: InfoProfileSpec::Winner(rule),
            n: cache.n(),
            m: cache.m(),
            space: OrderSpace::new(cache.n()).expect("cache sizes are valid"),
            indexing: *cache.indexing(),
            cache: Some(cache),
        }
    }

    pub fn spec(&self) -> &InfoProfileSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The interned order space backing this family; cells materialise
    /// their partial profiles against it.
    pub fn space(&self) -> &OrderSpace {
        &self.space
    }

    pub fn indexing(&self) -> &ProfileIndexing {
        &self.indexing
    }

    /// The cells for `(i, q)` in canonical enumeration order: singletons by
    /// profile index, the single all-cell, or outcome cells ordered by
    /// their outcome set.
    pub fn sets(&self, i: Individual, q: &LinearOrder) -> Result<Vec<InfoSet>> {
        if i < 1 || i > self.m {
            return Err(Error::input(format!(
                "individual {i} out of range 1..={}",
                self.m
            )));
        }
        let q_idx = self.space.index_of(q)?;
        let cells = self.cells(i, q_idx);
        Ok(cells
            .into_iter()
            .map(|(key, members)| {
                let descriptor = match key {
                    CellKey::Exact(pbar) => {
                        InfoDescriptor::Exact(self.indexing.partial_profile(&self.space, i, pbar))
                    }
                    CellKey::All => InfoDescriptor::All,
                    CellKey::Outcome(mask) => InfoDescriptor::Outcome(
                        AltSet::from_mask(mask).expect("attained outcomes are nonempty"),
                    ),
                };
                InfoSet {
                    owner: i,
                    sincere: q.clone(),
                    descriptor,
                    members,
                    indexing: self.indexing,
                }
            })
            .collect())
    }

    /// Index-level cells in canonical order, as `(key, ascending indices)`.
    pub(crate) fn cells(&self, i: Individual, q_idx: u32) -> Vec<(CellKey, Vec<u64>)> {
        let count = self.indexing.partial_count();
        match &self.spec {
            InfoProfileSpec::Complete => (0..count)
                .map(|pbar| (CellKey::Exact(pbar), vec![pbar]))
                .collect(),
            InfoProfileSpec::Zero => vec![(CellKey::All, (0..count).collect())],
            InfoProfileSpec::Winner(_) => {
                let cache = self.cache.as_ref().expect("winner family has a cache");
                let mut groups: Vec<Vec<u64>> = vec![Vec::new(); 1 << self.n];
                for pbar in 0..count {
                    let mask = cache.winners_for(i, pbar, q_idx).mask();
                    groups[mask as usize].push(pbar);
                }
                let mut keys: Vec<u16> = (1..(1u32 << self.n) as u16)
                    .filter(|&mask| !groups[mask as usize].is_empty())
                    .collect();
                keys.sort_by_key(|&mask| AltSet::from_mask(mask).expect("nonzero mask"));
                keys.into_iter()
                    .map(|mask| {
                        (
                            CellKey::Outcome(mask),
                            std::mem::take(&mut groups[mask as usize]),
                        )
                    })
                    .collect()
            }
        }
    }

    /// Same cells with extensions as bit sets, for the comparator.
    pub(crate) fn cell_bitsets(&self, i: Individual, q_idx: u32) -> Vec<(CellKey, IndexSet)> {
        let capacity = self.indexing.partial_count();
        self.cells(i, q_idx)
            .into_iter()
            .map(|(key, members)| {
                let mut bits = IndexSet::empty(capacity);
                for pbar in members {
                    bits.insert(pbar);
                }
                (key, bits)
            })
            .collect()
    }

    fn describe(&self, i: Individual, key: CellKey) -> InfoDescriptor {
        match key {
            CellKey::Exact(pbar) => {
                InfoDescriptor::Exact(self.indexing.partial_profile(&self.space, i, pbar))
            }
            CellKey::All => InfoDescriptor::All,
            CellKey::Outcome(mask) => {
                InfoDescriptor::Outcome(AltSet::from_mask(mask).expect("nonzero mask"))
            }
        }
    }
}

/// Verdict of the informativeness comparison, with the first failing cell.
#[derive(Debug, Clone)]
pub struct InformativenessVerdict {
    pub holds: bool,
    pub counterexample: Option<(Individual, LinearOrder, InfoDescriptor)>,
    pub cells_checked: u64,
}

/// Decides whether family `a` is at least as informative as family `b`:
/// every cell of `b` must equal the union of the `a`-cells contained in it.
pub fn at_least_as_informative(a: &InfoFamily, b: &InfoFamily) -> Result<InformativenessVerdict> {
    if a.n() != b.n() || a.m() != b.m() {
        return Err(Error::input(
            "informativeness comparison needs matching (n, m)",
        ));
    }
    let capacity = a.indexing.partial_count();
    let mut cells_checked = 0u64;
    for i in 1..=a.m() {
        for q_idx in 0..a.space.len() as u32 {
            let fine = a.cell_bitsets(i, q_idx);
            for (key, target) in b.cell_bitsets(i, q_idx) {
                cells_checked += 1;
                let mut union = IndexSet::empty(capacity);
                for (_, cell) in &fine {
                    if cell.is_subset_of(&target) {
                        union.union_with(cell);
                    }
                }
                if union != target {
                    return Ok(InformativenessVerdict {
                        holds: false,
                        counterexample: Some((
                            i,
                            a.space.order(q_idx).clone(),
                            b.describe(i, key),
                        )),
                        cells_checked,
                    });
                }
            }
        }
    }
    Ok(InformativenessVerdict {
        holds: true,
        counterexample: None,
        cells_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefs::Alt;

    const TEST_BOUND: u64 = 10_000_000;

    fn order(ids: &[u8]) -> LinearOrder {
        LinearOrder::from_ids(ids).unwrap()
    }

    fn family(spec: InfoProfileSpec, n: usize, m: usize) -> InfoFamily {
        InfoFamily::new(spec, n, m, TEST_BOUND, 1).unwrap()
    }

    #[test]
    fn zero_family_is_one_cell_covering_the_space() {
        let fam = family(InfoProfileSpec::Zero, 3, 2);
        let sets = fam.sets(1, &order(&[1, 2, 3])).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].len(), 6);
        assert_eq!(sets[0].descriptor(), &InfoDescriptor::All);
    }

    #[test]
    fn complete_family_is_all_singletons() {
        let fam = family(InfoProfileSpec::Complete, 3, 2);
        let sets = fam.sets(2, &order(&[1, 2, 3])).unwrap();
        assert_eq!(sets.len(), 6);
        assert!(sets.iter().all(|s| s.len() == 1));
        // The cell's member is exactly the profile named by its descriptor.
        for s in &sets {
            match s.descriptor() {
                InfoDescriptor::Exact(pbar) => {
                    let members: Vec<PartialProfile> =
                        s.partial_profiles(fam.space()).collect();
                    assert_eq!(&members[0], pbar);
                }
                other => panic!("unexpected descriptor {other:?}"),
            }
        }
    }

    #[test]
    fn copeland_winner_cell_for_shared_victory_is_pinned() {
        let fam = family(InfoProfileSpec::Winner(SccRule::Copeland), 3, 2);
        let sets = fam.sets(1, &order(&[2, 1, 3])).unwrap();
        let pair = AltSet::from_members(&[Alt(1), Alt(2)]).unwrap();
        let cell = sets
            .iter()
            .find(|s| s.descriptor() == &InfoDescriptor::Outcome(pair))
            .expect("outcome {1,2} attained");
        let members: Vec<PartialProfile> = cell.partial_profiles(fam.space()).collect();
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].orders(), &[order(&[1, 2, 3])]);
    }

    #[test]
    fn winner_cells_partition_the_space() {
        let rules = [
            SccRule::Borda,
            SccRule::Plurality,
            SccRule::NegativePlurality,
            SccRule::Copeland,
        ];
        for rule in rules {
            for (n, m) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
                let fam = family(InfoProfileSpec::Winner(rule.clone()), n, m);
                let count = fam.indexing().partial_count();
                for i in 1..=m {
                    for q_idx in 0..fam.space().len() as u32 {
                        let cells = fam.cell_bitsets(i, q_idx);
                        assert!(!cells.is_empty());
                        let mut union = IndexSet::empty(count);
                        for (k, (_, cell)) in cells.iter().enumerate() {
                            assert!(cell.count() > 0, "empty cell emitted");
                            for (_, other) in &cells[k + 1..] {
                                assert!(!cell.intersects(other), "cells overlap");
                            }
                            union.union_with(cell);
                        }
                        assert_eq!(union.count(), count, "cells do not cover the space");
                    }
                }
            }
        }
    }

    #[test]
    fn complete_and_zero_families_ignore_the_sincere_order() {
        for spec in [InfoProfileSpec::Complete, InfoProfileSpec::Zero] {
            for (n, m) in [(2, 2), (3, 2), (3, 3)] {
                let fam = family(spec.clone(), n, m);
                for i in 1..=m {
                    let reference = fam.cells(i, 0);
                    for q_idx in 1..fam.space().len() as u32 {
                        assert_eq!(fam.cells(i, q_idx), reference);
                    }
                }
            }
        }
    }

    #[test]
    fn informativeness_examples() {
        // Complete information refines the Copeland winner family.
        let complete = family(InfoProfileSpec::Complete, 3, 2);
        let winner = family(InfoProfileSpec::Winner(SccRule::Copeland), 3, 2);
        assert!(at_least_as_informative(&complete, &winner).unwrap().holds);

        // Winner cells partition the space, so they union to the zero cell.
        let winner_bo = family(InfoProfileSpec::Winner(SccRule::Borda), 3, 2);
        let zero = family(InfoProfileSpec::Zero, 3, 2);
        assert!(at_least_as_informative(&winner_bo, &zero).unwrap().holds);

        // The whole space cannot be assembled into one singleton.
        let zero22 = family(InfoProfileSpec::Zero, 2, 2);
        let complete22 = family(InfoProfileSpec::Complete, 2, 2);
        let verdict = at_least_as_informative(&zero22, &complete22).unwrap();
        assert!(!verdict.holds);
        assert!(verdict.counterexample.is_some());
    }

    #[test]
    fn informativeness_is_reflexive() {
        for spec in [
            InfoProfileSpec::Complete,
            InfoProfileSpec::Zero,
            InfoProfileSpec::Winner(SccRule::Borda),
        ] {
            let fam = family(spec.clone(), 3, 2);
            let again = family(spec, 3, 2);
            assert!(at_least_as_informative(&fam, &again).unwrap().holds);
        }
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        let a = family(InfoProfileSpec::Zero, 3, 2);
        let b = family(InfoProfileSpec::Zero, 3, 3);
        assert!(at_least_as_informative(&a, &b).is_err());
    }
}
