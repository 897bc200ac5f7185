//! Manipulability decision procedures with deterministic witness
//! extraction.
//!
//! Both searches walk the same fixed space: individuals in ascending order,
//! then the sincere order `q`, then the misreport `q'` (skipping `q' = q`,
//! where no strict gain is possible), then — for the information-limited
//! variant — the cells of the individual's information family ordered by
//! their key, then the partial profiles of the other individuals. The first
//! satisfying point in that order is the reported witness, so two runs, at
//! any worker count, return the identical witness.
//!
//! Reported state counts are positions in that canonical order: a negative
//! verdict always counts the full space `m * n! * (n!-1) * (n!)^(m-1)`, the
//! exhaustion certificate. Parallel runs partition `(individual, sincere)`
//! slices; the reduction keeps the hit with the smallest slice rank, which
//! is associative, commutative, and independent of scheduling.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::extension::{self, strict_ranked, succeq_ranked, ExtensionRule};
use crate::info::{InfoFamily, InfoKind, InfoProfileSpec};
use crate::prefs::{
    all_orders, Individual, LinearOrder, PartialProfile, MAX_ALTERNATIVES,
};
use crate::scc::{self, AltSet, SccRule, WinnerCache};
use crate::{Error, Result};

/// Limits and parallelism for one search.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Hard bound on the full-profile space `(n!)^m`.
    pub max_states: u64,
    /// Worker threads; 1 means a plain sequential scan.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            max_states: 10_000_000,
            workers: 1,
        }
    }
}

/// Search effort actually spent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// `(i, q, q', pbar)` tuples examined, in canonical order.
    pub states: u64,
    /// Wall-clock time; not part of any determinism contract.
    pub millis: u64,
}

/// Tag describing which information family a witness was found under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessInfo {
    pub kind: InfoKind,
    /// The observed outcome, for winner-information witnesses.
    pub outcome: Option<AltSet>,
}

/// A certified manipulation instance.
///
/// The witness re-verifies from its own fields: completing `gain_at` with
/// `sincere` and `misreport` must reproduce the recorded outcomes, the
/// misreport outcome must strictly beat the sincere outcome at `sincere`,
/// and for information-limited variants the weak improvement must hold on
/// every profile of the named cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WireWitness", into = "WireWitness")]
pub struct Witness {
    pub individual: Individual,
    pub sincere: LinearOrder,
    pub misreport: LinearOrder,
    pub info: Option<WitnessInfo>,
    pub gain_at: PartialProfile,
    pub outcome_sincere: AltSet,
    pub outcome_misreport: AltSet,
}

#[derive(Serialize, Deserialize)]
struct WireWitness {
    individual: usize,
    sincere: Vec<u8>,
    misreport: Vec<u8>,
    info: Option<WireInfo>,
    gain_at: Vec<Vec<u8>>,
    outcome_sincere: Vec<u8>,
    outcome_misreport: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct WireInfo {
    kind: String,
    outcome: Option<Vec<u8>>,
}

impl From<Witness> for WireWitness {
    fn from(w: Witness) -> WireWitness {
        let ids = |q: &LinearOrder| q.ranking().iter().map(|a| a.id()).collect::<Vec<u8>>();
        let set_ids = |s: &AltSet| s.members().iter().map(|a| a.id()).collect::<Vec<u8>>();
        WireWitness {
            individual: w.individual,
            sincere: ids(&w.sincere),
            misreport: ids(&w.misreport),
            info: w.info.as_ref().map(|info| WireInfo {
                kind: info.kind.to_string(),
                outcome: info.outcome.as_ref().map(&set_ids),
            }),
            gain_at: w.gain_at.orders().iter().map(&ids).collect(),
            outcome_sincere: set_ids(&w.outcome_sincere),
            outcome_misreport: set_ids(&w.outcome_misreport),
        }
    }
}

impl TryFrom<WireWitness> for Witness {
    type Error = Error;

    fn try_from(w: WireWitness) -> Result<Witness> {
        let orders = w
            .gain_at
            .iter()
            .map(|ids| LinearOrder::from_ids(ids))
            .collect::<Result<Vec<_>>>()?;
        let gain_at = PartialProfile::new(w.individual, orders)?;
        let info = w
            .info
            .map(|info| -> Result<WitnessInfo> {
                Ok(WitnessInfo {
                    kind: info.kind.parse()?,
                    outcome: info
                        .outcome
                        .map(|ids| {
                            AltSet::from_members(
                                &ids.iter().map(|&i| crate::prefs::Alt(i)).collect::<Vec<_>>(),
                            )
                        })
                        .transpose()?,
                })
            })
            .transpose()?;
        Ok(Witness {
            individual: w.individual,
            sincere: LinearOrder::from_ids(&w.sincere)?,
            misreport: LinearOrder::from_ids(&w.misreport)?,
            info,
            gain_at,
            outcome_sincere: w.outcome_sincere.parse_ids()?,
            outcome_misreport: w.outcome_misreport.parse_ids()?,
        })
    }
}

trait ParseIds {
    fn parse_ids(&self) -> Result<AltSet>;
}

impl ParseIds for Vec<u8> {
    fn parse_ids(&self) -> Result<AltSet> {
        AltSet::from_members(&self.iter().map(|&i| crate::prefs::Alt(i)).collect::<Vec<_>>())
    }
}

/// Outcome of a manipulability query.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    /// True iff the rule is manipulable in the queried sense.
    pub holds: bool,
    pub witness: Option<Witness>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Plain,
    Complete,
    Zero,
    Winner,
}

/// Raw location of a witness inside one `(i, q)` slice.
struct SliceHit {
    q2_idx: u32,
    cell_mask: Option<u16>,
    gain_pbar: u64,
    /// Tuples examined within the slice, in canonical order.
    inner: u64,
}

struct Engine<'a> {
    cache: &'a WinnerCache,
    group_cache: Option<&'a WinnerCache>,
    ext: ExtensionRule,
    kind: Kind,
}

impl Engine<'_> {
    fn scan_slice(&self, i: Individual, q_idx: u32) -> Option<SliceHit> {
        let indexing = self.cache.indexing();
        let space = self.cache.space();
        let k = space.len() as u32;
        let p = indexing.partial_count();
        let ranks = space.ranks(q_idx);
        match self.kind {
            Kind::Plain | Kind::Complete => {
                let mut q2_pos = 0u64;
                for q2 in 0..k {
                    if q2 == q_idx {
                        continue;
                    }
                    q2_pos += 1;
                    for pbar in 0..p {
                        let sin = self.cache.mask_at(indexing.splice(i, pbar, q_idx));
                        let mis = self.cache.mask_at(indexing.splice(i, pbar, q2));
                        if strict_ranked(self.ext, ranks, mis, sin) {
                            return Some(SliceHit {
                                q2_idx: q2,
                                cell_mask: None,
                                gain_pbar: pbar,
                                inner: (q2_pos - 1) * p + pbar + 1,
                            });
                        }
                    }
                }
                None
            }
            Kind::Zero => {
                let mut q2_pos = 0u64;
                for q2 in 0..k {
                    if q2 == q_idx {
                        continue;
                    }
                    q2_pos += 1;
                    let mut all_weak = true;
                    let mut first_strict = None;
                    for pbar in 0..p {
                        let sin = self.cache.mask_at(indexing.splice(i, pbar, q_idx));
                        let mis = self.cache.mask_at(indexing.splice(i, pbar, q2));
                        if !succeq_ranked(self.ext, ranks, mis, sin) {
                            all_weak = false;
                        } else if first_strict.is_none()
                            && !succeq_ranked(self.ext, ranks, sin, mis)
                        {
                            first_strict = Some(pbar);
                        }
                    }
                    if all_weak {
                        if let Some(gain_pbar) = first_strict {
                            return Some(SliceHit {
                                q2_idx: q2,
                                cell_mask: None,
                                gain_pbar,
                                inner: q2_pos * p,
                            });
                        }
                    }
                }
                None
            }
            Kind::Winner => {
                let group = self.group_cache.expect("winner search has a group cache");
                let n = space.n();
                let mut seen = vec![false; 1 << n];
                let mut all_weak = vec![true; 1 << n];
                let mut first_strict = vec![u64::MAX; 1 << n];
                let mut touched: Vec<u16> = Vec::with_capacity(1 << n);
                let mut q2_pos = 0u64;
                for q2 in 0..k {
                    if q2 == q_idx {
                        continue;
                    }
                    q2_pos += 1;
                    for &cell in &touched {
                        seen[cell as usize] = false;
                        all_weak[cell as usize] = true;
                        first_strict[cell as usize] = u64::MAX;
                    }
                    touched.clear();
                    for pbar in 0..p {
                        let sin_full = indexing.splice(i, pbar, q_idx);
                        let cell = group.mask_at(sin_full);
                        let sin = self.cache.mask_at(sin_full);
                        let mis = self.cache.mask_at(indexing.splice(i, pbar, q2));
                        if !seen[cell as usize] {
                            seen[cell as usize] = true;
                            touched.push(cell);
                        }
                        if !succeq_ranked(self.ext, ranks, mis, sin) {
                            all_weak[cell as usize] = false;
                        } else if first_strict[cell as usize] == u64::MAX
                            && !succeq_ranked(self.ext, ranks, sin, mis)
                        {
                            first_strict[cell as usize] = pbar;
                        }
                    }
                    let winner_cell = touched
                        .iter()
                        .filter(|&&cell| {
                            all_weak[cell as usize] && first_strict[cell as usize] != u64::MAX
                        })
                        .min_by_key(|&&cell| AltSet::from_mask(cell).expect("attained cell"));
                    if let Some(&cell) = winner_cell {
                        return Some(SliceHit {
                            q2_idx: q2,
                            cell_mask: Some(cell),
                            gain_pbar: first_strict[cell as usize],
                            inner: q2_pos * p,
                        });
                    }
                }
                None
            }
        }
    }
}

/// Decides Kelly/Fishburn manipulability of `rule` at `(n, m)`.
///
/// With `info = None` this is the full-information definition: some
/// individual, sincere order, misreport, and profile of the others where
/// the misreport outcome strictly beats the sincere outcome. With an
/// information family, the misreport must weakly improve the outcome on
/// every profile of some cell and strictly on at least one.
///
/// A positive verdict carries the first witness in canonical order; a
/// negative verdict is an exhaustion certificate.
pub fn decide_manipulability(
    rule: &SccRule,
    ext: ExtensionRule,
    info: Option<&InfoProfileSpec>,
    n: usize,
    m: usize,
    config: &SearchConfig,
) -> Result<Verdict> {
    let start = Instant::now();
    rule.validate(n, m)?;
    let cache = WinnerCache::build(rule, n, m, config.max_states, config.workers)?;
    let group_cache_owned = match info {
        Some(InfoProfileSpec::Winner(group_rule)) if group_rule != rule => {
            group_rule.validate(n, m)?;
            Some(WinnerCache::build(
                group_rule,
                n,
                m,
                config.max_states,
                config.workers,
            )?)
        }
        _ => None,
    };
    let group_cache = match info {
        Some(InfoProfileSpec::Winner(_)) => Some(group_cache_owned.as_ref().unwrap_or(&cache)),
        _ => None,
    };
    let kind = match info {
        None => Kind::Plain,
        Some(InfoProfileSpec::Complete) => Kind::Complete,
        Some(InfoProfileSpec::Zero) => Kind::Zero,
        Some(InfoProfileSpec::Winner(_)) => Kind::Winner,
    };
    let engine = Engine {
        cache: &cache,
        group_cache,
        ext,
        kind,
    };

    let space_len = cache.space().len() as u64;
    let p = cache.indexing().partial_count();
    let per_slice = (space_len - 1) * p;
    let slices: Vec<(Individual, u32)> = (1..=m)
        .flat_map(|i| (0..space_len as u32).map(move |q| (i, q)))
        .collect();

    let hit: Option<(u64, Individual, u32, SliceHit)> = if config.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
        pool.install(|| {
            slices
                .par_iter()
                .enumerate()
                .find_map_first(|(rank, &(i, q_idx))| {
                    engine
                        .scan_slice(i, q_idx)
                        .map(|h| (rank as u64, i, q_idx, h))
                })
        })
    } else {
        slices.iter().enumerate().find_map(|(rank, &(i, q_idx))| {
            engine
                .scan_slice(i, q_idx)
                .map(|h| (rank as u64, i, q_idx, h))
        })
    };

    let (witness, states) = match hit {
        Some((rank, i, q_idx, h)) => {
            let states = rank * per_slice + h.inner;
            let indexing = cache.indexing();
            let space = cache.space();
            let info_tag = match kind {
                Kind::Plain => None,
                Kind::Complete => Some(WitnessInfo {
                    kind: InfoKind::Complete,
                    outcome: None,
                }),
                Kind::Zero => Some(WitnessInfo {
                    kind: InfoKind::Zero,
                    outcome: None,
                }),
                Kind::Winner => Some(WitnessInfo {
                    kind: InfoKind::Winner,
                    outcome: Some(
                        AltSet::from_mask(h.cell_mask.expect("winner hit has a cell"))
                            .expect("attained cell"),
                    ),
                }),
            };
            let witness = Witness {
                individual: i,
                sincere: space.order(q_idx).clone(),
                misreport: space.order(h.q2_idx).clone(),
                info: info_tag,
                gain_at: indexing.partial_profile(space, i, h.gain_pbar),
                outcome_sincere: cache.winners_for(i, h.gain_pbar, q_idx),
                outcome_misreport: cache.winners_for(i, h.gain_pbar, h.q2_idx),
            };
            (Some(witness), states)
        }
        None => (None, slices.len() as u64 * per_slice),
    };

    Ok(Verdict {
        holds: witness.is_some(),
        witness,
        stats: SearchStats {
            states,
            millis: start.elapsed().as_millis() as u64,
        },
    })
}

/// Independently re-checks a witness straight from the definitions.
///
/// Every winner set is recomputed by direct scoring on materialised
/// profiles — none of the search caches are consulted — and for
/// information-limited witnesses the cell is re-enumerated from scratch.
/// Returns `Ok(false)` for a well-formed witness that fails the
/// conditions; malformed witnesses are input errors.
pub fn verify_witness(
    rule: &SccRule,
    ext: ExtensionRule,
    info: Option<&InfoProfileSpec>,
    witness: &Witness,
    max_states: u64,
) -> Result<bool> {
    let n = witness.sincere.n();
    let m = witness.gain_at.m();
    rule.validate(n, m)?;
    if witness.misreport.n() != n || witness.gain_at.n() != n {
        return Err(Error::input("witness mixes different alternative counts"));
    }
    if witness.individual != witness.gain_at.absent() {
        return Err(Error::input(
            "witness gain_at does not belong to the named individual",
        ));
    }
    if !witness.outcome_sincere.in_range(n) || !witness.outcome_misreport.in_range(n) {
        return Err(Error::input("witness outcome mentions unknown alternatives"));
    }
    match (info, &witness.info) {
        (None, None) => {}
        (Some(spec), Some(tag)) if spec.kind() == tag.kind => {}
        _ => {
            return Err(Error::input(
                "witness information tag does not match the queried family",
            ))
        }
    }

    // Both recorded outcomes must reproduce under direct evaluation.
    let sincere_profile = witness.gain_at.complete_with(&witness.sincere)?;
    let misreport_profile = witness.gain_at.complete_with(&witness.misreport)?;
    if scc::winners(rule, &sincere_profile)? != witness.outcome_sincere
        || scc::winners(rule, &misreport_profile)? != witness.outcome_misreport
    {
        return Ok(false);
    }

    // The strict gain at `gain_at`.
    if !extension::strictly_prefers(
        ext,
        &witness.sincere,
        witness.outcome_misreport,
        witness.outcome_sincere,
    )? {
        return Ok(false);
    }

    let spec = match info {
        None => return Ok(true),
        Some(spec) => spec,
    };
    match spec {
        InfoProfileSpec::Complete => Ok(true),
        InfoProfileSpec::Zero => {
            weak_improvement_over(rule, ext, witness, None, m, max_states)
        }
        InfoProfileSpec::Winner(group_rule) => {
            group_rule.validate(n, m)?;
            let observed = match witness.info.as_ref().and_then(|tag| tag.outcome) {
                Some(outcome) => outcome,
                None => {
                    return Err(Error::input(
                        "winner-information witness must name its observed outcome",
                    ))
                }
            };
            // Membership: the gain profile must itself lie in the cell.
            if scc::winners(group_rule, &sincere_profile)? != observed {
                return Ok(false);
            }
            weak_improvement_over(rule, ext, witness, Some((group_rule, observed)), m, max_states)
        }
    }
}

/// Checks the universal weak-improvement condition over a cell, enumerating
/// the partial-profile space directly.
fn weak_improvement_over(
    rule: &SccRule,
    ext: ExtensionRule,
    witness: &Witness,
    cell: Option<(&SccRule, AltSet)>,
    m: usize,
    max_states: u64,
) -> Result<bool> {
    let n = witness.sincere.n();
    for pbar in crate::prefs::partial_profiles(n, m, witness.individual, max_states)? {
        let sincere_profile = pbar.complete_with(&witness.sincere)?;
        if let Some((group_rule, observed)) = cell {
            if scc::winners(group_rule, &sincere_profile)? != observed {
                continue;
            }
        }
        let sin = scc::winners(rule, &sincere_profile)?;
        let mis = scc::winners(rule, &pbar.complete_with(&witness.misreport)?)?;
        if !extension::succeq(ext, &witness.sincere, mis, sin)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One implication checked by [`check_transfer_consistency`].
#[derive(Debug, Clone)]
pub struct TransferEntry {
    pub description: String,
    pub ok: bool,
}

/// Result of the monotonicity-transfer consistency run.
#[derive(Debug, Clone)]
pub struct TransferReport {
    pub entries: Vec<TransferEntry>,
    pub violations: Vec<String>,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Cross-validates the two transfer laws over the rule zoo at `(n, m)`.
///
/// First the structural premises are established exhaustively: the Kelly
/// relation is contained in the Fishburn relation at this `n`, the Fishburn
/// relation is antisymmetric (checked, not presumed), and the three
/// information families are ordered `complete >= winner >= zero` by the
/// informativeness comparator. Then, for every rule, manipulability under a
/// refined extension must survive to the coarser one, and manipulability
/// under a less informative family must survive to every more informative
/// family. Any violated implication is reported as a fatal inconsistency.
pub fn check_transfer_consistency(
    n: usize,
    m: usize,
    config: &SearchConfig,
) -> Result<TransferReport> {
    let zoo = [
        SccRule::Borda,
        SccRule::Plurality,
        SccRule::NegativePlurality,
        SccRule::Copeland,
    ];
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    let note = |entries: &mut Vec<TransferEntry>,
                    violations: &mut Vec<String>,
                    description: String,
                    ok: bool| {
        if !ok {
            violations.push(description.clone());
        }
        entries.push(TransferEntry { description, ok });
    };

    // Premise: Kelly comparisons survive under Fishburn at this n.
    let mut kelly_in_fishburn = true;
    let full = (1u32 << n) as u16;
    for q in all_orders(n)? {
        let ranks = q.rank_table();
        for b in 1..full {
            for c in 1..full {
                if succeq_ranked(ExtensionRule::Kelly, &ranks, b, c)
                    && !succeq_ranked(ExtensionRule::Fishburn, &ranks, b, c)
                {
                    kelly_in_fishburn = false;
                }
            }
        }
    }
    note(
        &mut entries,
        &mut violations,
        format!("kelly relation contained in fishburn relation at n={n}"),
        kelly_in_fishburn,
    );

    // Premise: Fishburn is antisymmetric at this n.
    let fishburn_antisymmetric =
        extension::check_antisymmetry(ExtensionRule::Fishburn, n)?.holds;
    note(
        &mut entries,
        &mut violations,
        format!("fishburn relation antisymmetric at n={n}"),
        fishburn_antisymmetric,
    );

    let exts = [ExtensionRule::Kelly, ExtensionRule::Fishburn];
    for rule in &zoo {
        // Informativeness facts for this rule's winner family.
        let complete = InfoFamily::new(
            InfoProfileSpec::Complete,
            n,
            m,
            config.max_states,
            config.workers,
        )?;
        let zero = InfoFamily::new(
            InfoProfileSpec::Zero,
            n,
            m,
            config.max_states,
            config.workers,
        )?;
        let winner = InfoFamily::new(
            InfoProfileSpec::Winner(rule.clone()),
            n,
            m,
            config.max_states,
            config.workers,
        )?;
        let c_over_w = crate::info::at_least_as_informative(&complete, &winner)?.holds;
        let c_over_z = crate::info::at_least_as_informative(&complete, &zero)?.holds;
        let w_over_z = crate::info::at_least_as_informative(&winner, &zero)?.holds;
        note(
            &mut entries,
            &mut violations,
            format!("complete >= winner({rule})"),
            c_over_w,
        );
        note(
            &mut entries,
            &mut violations,
            format!("complete >= zero ({rule} run)"),
            c_over_z,
        );
        note(
            &mut entries,
            &mut violations,
            format!("winner({rule}) >= zero"),
            w_over_z,
        );

        let specs = [
            ("complete", InfoProfileSpec::Complete),
            ("winner", InfoProfileSpec::Winner(rule.clone())),
            ("zero", InfoProfileSpec::Zero),
        ];
        let mut verdicts = Vec::new();
        for ext in exts {
            for (label, spec) in &specs {
                let verdict = decide_manipulability(rule, ext, Some(spec), n, m, config)?;
                verdicts.push((ext, *label, verdict.holds));
            }
        }
        let holds = |ext: ExtensionRule, label: &str| {
            verdicts
                .iter()
                .find(|(e, l, _)| *e == ext && *l == label)
                .map(|(_, _, h)| *h)
                .expect("verdict computed")
        };

        // Less informative manipulability transfers upward.
        let ordered_pairs: &[(&str, &str, bool)] = &[
            ("zero", "winner", w_over_z),
            ("zero", "complete", c_over_z),
            ("winner", "complete", c_over_w),
        ];
        for ext in exts {
            for &(lo, hi, premise) in ordered_pairs {
                if !premise {
                    continue;
                }
                let ok = !holds(ext, lo) || holds(ext, hi);
                note(
                    &mut entries,
                    &mut violations,
                    format!("{rule}: {lo}-{ext}-manipulable implies {hi}-{ext}-manipulable"),
                    ok,
                );
            }
        }

        // Kelly manipulability transfers to the coarser Fishburn relation.
        if kelly_in_fishburn && fishburn_antisymmetric {
            for (label, _) in &specs {
                let ok = !holds(ExtensionRule::Kelly, label)
                    || holds(ExtensionRule::Fishburn, label);
                note(
                    &mut entries,
                    &mut violations,
                    format!("{rule}: {label}-kelly-manipulable implies {label}-fishburn-manipulable"),
                    ok,
                );
            }
        }
    }

    Ok(TransferReport {
        entries,
        violations,
    })
}

/// Closed-form size of the exhausted search space at `(n, m)`.
pub fn exhaustion_states(n: usize, m: usize) -> u64 {
    let k = crate::prefs::factorial(n);
    m as u64 * k * (k - 1) * k.pow(m as u32 - 1)
}

const _: () = assert!(MAX_ALTERNATIVES <= 16);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefs::Alt;

    fn config() -> SearchConfig {
        SearchConfig::default()
    }

    fn order(ids: &[u8]) -> LinearOrder {
        LinearOrder::from_ids(ids).unwrap()
    }

    fn set(ids: &[u8]) -> AltSet {
        AltSet::from_members(&ids.iter().map(|&i| Alt(i)).collect::<Vec<_>>()).unwrap()
    }

    fn decide(
        rule: SccRule,
        ext: ExtensionRule,
        info: Option<InfoProfileSpec>,
        n: usize,
        m: usize,
    ) -> Verdict {
        decide_manipulability(&rule, ext, info.as_ref(), n, m, &config()).unwrap()
    }

    #[test]
    fn full_information_examples() {
        let v = decide(SccRule::Borda, ExtensionRule::Kelly, None, 3, 2);
        assert!(v.holds);
        let witness = v.witness.unwrap();
        assert!(verify_witness(
            &SccRule::Borda,
            ExtensionRule::Kelly,
            None,
            &witness,
            config().max_states
        )
        .unwrap());

        let v = decide(SccRule::Plurality, ExtensionRule::Kelly, None, 3, 3);
        assert!(!v.holds);
        assert_eq!(v.stats.states, exhaustion_states(3, 3));

        let v = decide(SccRule::NegativePlurality, ExtensionRule::Kelly, None, 5, 2);
        assert!(!v.holds);
        assert_eq!(v.stats.states, exhaustion_states(5, 2));

        let v = decide(
            SccRule::Majority(crate::scc::Rational::from_integer(1)),
            ExtensionRule::Kelly,
            None,
            2,
            2,
        );
        assert!(!v.holds);
    }

    #[test]
    fn copeland_winner_information_witness() {
        let v = decide(
            SccRule::Copeland,
            ExtensionRule::Kelly,
            Some(InfoProfileSpec::Winner(SccRule::Copeland)),
            3,
            2,
        );
        assert!(v.holds);
        let w = v.witness.unwrap();
        // Canonical first witness: individual 1, sincere [1,2,3], misreport
        // [1,3,2], observing the shared victory {1,2} pinned to the other
        // individual reporting [2,1,3].
        assert_eq!(w.individual, 1);
        assert_eq!(w.sincere, order(&[1, 2, 3]));
        assert_eq!(w.misreport, order(&[1, 3, 2]));
        assert_eq!(w.outcome_sincere, set(&[1, 2]));
        assert_eq!(w.outcome_misreport, set(&[1]));
        assert_eq!(w.gain_at.orders(), &[order(&[2, 1, 3])]);
        assert_eq!(
            w.info,
            Some(WitnessInfo {
                kind: InfoKind::Winner,
                outcome: Some(set(&[1, 2])),
            })
        );
        assert!(verify_witness(
            &SccRule::Copeland,
            ExtensionRule::Kelly,
            Some(&InfoProfileSpec::Winner(SccRule::Copeland)),
            &w,
            config().max_states
        )
        .unwrap());
    }

    #[test]
    fn negative_plurality_winner_information_contrast() {
        let np = SccRule::NegativePlurality;
        let winner = InfoProfileSpec::Winner(np.clone());

        let v = decide(np.clone(), ExtensionRule::Kelly, Some(winner.clone()), 4, 3);
        assert!(!v.holds);
        assert_eq!(v.stats.states, exhaustion_states(4, 3));

        let v = decide(np.clone(), ExtensionRule::Fishburn, Some(winner.clone()), 4, 3);
        assert!(v.holds);
        let w = v.witness.unwrap();
        assert!(verify_witness(
            &np,
            ExtensionRule::Fishburn,
            Some(&winner),
            &w,
            config().max_states
        )
        .unwrap());

        // Three divides m-1: fully-informed manipulation exists while the
        // winner-information variant is immune.
        let v = decide(np.clone(), ExtensionRule::Kelly, None, 3, 4);
        assert!(v.holds);
        let v = decide(np, ExtensionRule::Kelly, Some(winner), 3, 4);
        assert!(!v.holds);
        assert_eq!(v.stats.states, exhaustion_states(3, 4));
    }

    #[test]
    fn hand_built_witness_verifies_and_tampering_fails() {
        // Witness for Copeland at n=3, m=2, winner information: sincere
        // [2,1,3], misreport [2,3,1], observed outcome {1,2}, the other
        // individual reporting [1,2,3].
        let witness = Witness {
            individual: 1,
            sincere: order(&[2, 1, 3]),
            misreport: order(&[2, 3, 1]),
            info: Some(WitnessInfo {
                kind: InfoKind::Winner,
                outcome: Some(set(&[1, 2])),
            }),
            gain_at: PartialProfile::new(1, vec![order(&[1, 2, 3])]).unwrap(),
            outcome_sincere: set(&[1, 2]),
            outcome_misreport: set(&[2]),
        };
        let spec = InfoProfileSpec::Winner(SccRule::Copeland);
        assert!(verify_witness(
            &SccRule::Copeland,
            ExtensionRule::Kelly,
            Some(&spec),
            &witness,
            config().max_states
        )
        .unwrap());

        // Swapping sincere and misreport reverses the strict preference.
        let swapped = Witness {
            sincere: witness.misreport.clone(),
            misreport: witness.sincere.clone(),
            outcome_sincere: witness.outcome_misreport,
            outcome_misreport: witness.outcome_sincere,
            ..witness.clone()
        };
        assert!(!verify_witness(
            &SccRule::Copeland,
            ExtensionRule::Kelly,
            Some(&spec),
            &swapped,
            config().max_states
        )
        .unwrap());

        // A gain profile outside the named cell is rejected.
        let outside = Witness {
            gain_at: PartialProfile::new(1, vec![order(&[3, 2, 1])]).unwrap(),
            ..witness.clone()
        };
        assert!(!verify_witness(
            &SccRule::Copeland,
            ExtensionRule::Kelly,
            Some(&spec),
            &outside,
            config().max_states
        )
        .unwrap());

        // Mismatched info tag is malformed input, not a false verdict.
        assert!(verify_witness(
            &SccRule::Copeland,
            ExtensionRule::Kelly,
            None,
            &witness,
            config().max_states
        )
        .is_err());
    }

    #[test]
    fn witness_json_schema_is_stable() {
        let v = decide(
            SccRule::Copeland,
            ExtensionRule::Kelly,
            Some(InfoProfileSpec::Winner(SccRule::Copeland)),
            3,
            2,
        );
        let witness = v.witness.unwrap();
        let json = serde_json::to_value(&witness).unwrap();
        let object = json.as_object().unwrap();
        let mut keys: Vec<&str> = object.keys().map(|k| k.as_str()).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            vec![
                "gain_at",
                "individual",
                "info",
                "misreport",
                "outcome_misreport",
                "outcome_sincere",
                "sincere"
            ]
        );
        assert_eq!(json["individual"], 1);
        assert_eq!(json["sincere"], serde_json::json!([1, 2, 3]));
        assert_eq!(json["info"]["kind"], "winner");
        assert_eq!(json["info"]["outcome"], serde_json::json!([1, 2]));
        assert_eq!(json["gain_at"], serde_json::json!([[2, 1, 3]]));

        let back: Witness = serde_json::from_value(json).unwrap();
        assert_eq!(back, witness);

        // Full-information witnesses serialise a null info tag.
        let v = decide(SccRule::Borda, ExtensionRule::Kelly, None, 3, 2);
        let json = serde_json::to_value(v.witness.unwrap()).unwrap();
        assert!(json["info"].is_null());
    }

    #[test]
    fn malformed_witness_json_is_an_input_error() {
        let bad = serde_json::json!({
            "individual": 1,
            "sincere": [1, 1, 3],
            "misreport": [1, 3, 2],
            "info": null,
            "gain_at": [[2, 1, 3]],
            "outcome_sincere": [1],
            "outcome_misreport": [2],
        });
        assert!(serde_json::from_value::<Witness>(bad).is_err());
    }

    #[test]
    fn complete_information_matches_full_information() {
        for (rule, n, m) in [
            (SccRule::Borda, 3, 2),
            (SccRule::Copeland, 3, 3),
            (SccRule::Plurality, 3, 3),
        ] {
            let plain = decide(rule.clone(), ExtensionRule::Kelly, None, n, m);
            let complete = decide(
                rule.clone(),
                ExtensionRule::Kelly,
                Some(InfoProfileSpec::Complete),
                n,
                m,
            );
            assert_eq!(plain.holds, complete.holds, "{rule} at ({n},{m})");
            if let (Some(a), Some(b)) = (&plain.witness, &complete.witness) {
                assert_eq!(a.individual, b.individual);
                assert_eq!(a.sincere, b.sincere);
                assert_eq!(a.misreport, b.misreport);
                assert_eq!(a.gain_at, b.gain_at);
            }
        }
    }

    #[test]
    fn parallel_search_is_deterministic() {
        for (rule, info) in [
            (
                SccRule::Copeland,
                Some(InfoProfileSpec::Winner(SccRule::Copeland)),
            ),
            (SccRule::Borda, Some(InfoProfileSpec::Winner(SccRule::Borda))),
            (SccRule::Borda, None),
        ] {
            let sequential =
                decide_manipulability(&rule, ExtensionRule::Kelly, info.as_ref(), 3, 3, &config())
                    .unwrap();
            let parallel = decide_manipulability(
                &rule,
                ExtensionRule::Kelly,
                info.as_ref(),
                3,
                3,
                &SearchConfig {
                    workers: 4,
                    ..config()
                },
            )
            .unwrap();
            assert_eq!(sequential.holds, parallel.holds);
            assert_eq!(sequential.witness, parallel.witness);
            assert_eq!(sequential.stats.states, parallel.stats.states);
        }
    }

    #[test]
    fn information_hierarchy_is_monotone() {
        let zoo = [
            SccRule::Borda,
            SccRule::Plurality,
            SccRule::NegativePlurality,
            SccRule::Copeland,
        ];
        for rule in &zoo {
            for m in [2usize, 3, 4] {
                let verdict = |spec: InfoProfileSpec| {
                    decide(rule.clone(), ExtensionRule::Kelly, Some(spec), 3, m).holds
                };
                let zero = verdict(InfoProfileSpec::Zero);
                let winner = verdict(InfoProfileSpec::Winner(rule.clone()));
                let complete = verdict(InfoProfileSpec::Complete);
                assert!(!zero || winner, "{rule} at m={m}: zero but not winner");
                assert!(!winner || complete, "{rule} at m={m}: winner but not complete");
            }
        }
    }

    // Independent statement of the resolute-rule definition: compare the
    // two singleton outcomes directly by the sincere order.
    fn resolute_omega_manipulable(
        rule: &SccRule,
        spec: &InfoProfileSpec,
        n: usize,
        m: usize,
    ) -> bool {
        let family = InfoFamily::new(spec.clone(), n, m, 1 << 20, 1).unwrap();
        let space = crate::prefs::OrderSpace::new(n).unwrap();
        for i in 1..=m {
            for q in crate::prefs::all_orders(n).unwrap() {
                for q2 in crate::prefs::all_orders(n).unwrap() {
                    if q2 == q {
                        continue;
                    }
                    for cell in family.sets(i, &q).unwrap() {
                        let mut any_strict = false;
                        let mut all_weak = true;
                        for pbar in cell.partial_profiles(&space) {
                            let sin = scc::winners(rule, &pbar.complete_with(&q).unwrap()).unwrap();
                            let mis =
                                scc::winners(rule, &pbar.complete_with(&q2).unwrap()).unwrap();
                            assert_eq!(sin.len(), 1, "rule must be resolute here");
                            assert_eq!(mis.len(), 1);
                            let a = mis.members()[0];
                            let b = sin.members()[0];
                            if a == b {
                                continue;
                            }
                            if q.prefers(a, b) {
                                any_strict = true;
                            } else {
                                all_weak = false;
                            }
                        }
                        if any_strict && all_weak {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn resolute_slice_collapses_to_singleton_comparison() {
        // At n = 2 with odd m every positional rule is resolute.
        for m in [3usize, 5] {
            for rule in [SccRule::Borda, SccRule::Plurality] {
                for spec in [
                    InfoProfileSpec::Complete,
                    InfoProfileSpec::Zero,
                    InfoProfileSpec::Winner(rule.clone()),
                ] {
                    let via_sets =
                        decide(rule.clone(), ExtensionRule::Kelly, Some(spec.clone()), 2, m).holds;
                    let via_singletons = resolute_omega_manipulable(&rule, &spec, 2, m);
                    assert_eq!(via_sets, via_singletons, "{rule} m={m} {spec}");
                }
            }
        }
    }

    #[test]
    fn transfer_consistency_holds_at_small_sizes() {
        for (n, m) in [(3, 2), (3, 3)] {
            let report = check_transfer_consistency(n, m, &config()).unwrap();
            assert!(
                report.holds(),
                "violations at ({n},{m}): {:?}",
                report.violations
            );
            assert!(!report.entries.is_empty());
        }
    }

    // Literal restatement of the information-limited definition: enumerate
    // the individual's cells, materialise every member profile, and check
    // the universal and existential conditions by direct evaluation. The
    // cache-backed engine must agree with it on every query.
    fn definitional_manipulable(
        rule: &SccRule,
        ext: ExtensionRule,
        spec: Option<&InfoProfileSpec>,
        n: usize,
        m: usize,
    ) -> bool {
        let space = crate::prefs::OrderSpace::new(n).unwrap();
        let family = spec.map(|s| InfoFamily::new(s.clone(), n, m, 1 << 24, 1).unwrap());
        for i in 1..=m {
            for q in all_orders(n).unwrap() {
                for q2 in all_orders(n).unwrap() {
                    if q2 == q {
                        continue;
                    }
                    let cells: Vec<Vec<PartialProfile>> = match &family {
                        None => crate::prefs::partial_profiles(n, m, i, 1 << 24)
                            .unwrap()
                            .map(|pbar| vec![pbar])
                            .collect(),
                        Some(family) => family
                            .sets(i, &q)
                            .unwrap()
                            .iter()
                            .map(|cell| cell.partial_profiles(&space).collect())
                            .collect(),
                    };
                    for members in cells {
                        let mut all_weak = true;
                        let mut any_strict = false;
                        for pbar in &members {
                            let sin =
                                scc::winners(rule, &pbar.complete_with(&q).unwrap()).unwrap();
                            let mis =
                                scc::winners(rule, &pbar.complete_with(&q2).unwrap()).unwrap();
                            if !extension::succeq(ext, &q, mis, sin).unwrap() {
                                all_weak = false;
                            } else if extension::strictly_prefers(ext, &q, mis, sin).unwrap() {
                                any_strict = true;
                            }
                        }
                        if all_weak && any_strict {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn search_agrees_with_the_definitional_oracle() {
        let zoo = [
            SccRule::Borda,
            SccRule::Plurality,
            SccRule::NegativePlurality,
            SccRule::Copeland,
        ];
        for rule in &zoo {
            for (n, m) in [(3, 2), (2, 3)] {
                for ext in [ExtensionRule::Kelly, ExtensionRule::Fishburn] {
                    let specs: [Option<InfoProfileSpec>; 4] = [
                        None,
                        Some(InfoProfileSpec::Complete),
                        Some(InfoProfileSpec::Zero),
                        Some(InfoProfileSpec::Winner(rule.clone())),
                    ];
                    for spec in specs {
                        let engine =
                            decide_manipulability(rule, ext, spec.as_ref(), n, m, &config())
                                .unwrap()
                                .holds;
                        let oracle = definitional_manipulable(rule, ext, spec.as_ref(), n, m);
                        assert_eq!(
                            engine, oracle,
                            "{rule} {ext} {spec:?} at ({n},{m}): engine {engine}, oracle {oracle}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bound_refusal_is_an_error() {
        let err = decide_manipulability(
            &SccRule::Borda,
            ExtensionRule::Kelly,
            None,
            3,
            3,
            &SearchConfig {
                max_states: 10,
                workers: 1,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::BoundExceeded { .. }));
    }
}
