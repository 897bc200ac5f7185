//! Exhaustive checkers for structural properties of social choice
//! correspondences: weak set-monotonicity, set-monotonicity, upward
//! sensitivity, and unanimity.
//!
//! All three monotonicity-style checks walk the same space as the
//! manipulation searches — individuals ascending, then the sincere order,
//! then the partial profile of the others, then the adjacent position pair
//! being exchanged — so an upward-sensitivity witness doubles as the seed
//! of a manipulation witness. Every report carries evidence that re-checks
//! by direct evaluation of the defining condition, with no trust in the
//! search path.

use std::fmt;
use std::str::FromStr;

use crate::extension::ExtensionRule;
use crate::info::InfoProfileSpec;
use crate::manip::{decide_manipulability, SearchConfig, Verdict};
use crate::prefs::{Alt, Individual, LinearOrder, PartialProfile, Profile};
use crate::scc::{self, AltSet, SccRule, WinnerCache};
use crate::{Error, Result};

/// The checkable axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// Raising an alternative just above a sole winner keeps the outcome
    /// within {old winner, raised alternative}.
    Wsm,
    /// Exchanging an unchosen alternative with its lower neighbour never
    /// changes the outcome.
    Sm,
    /// Some adjacent raise above a sole winner injects the raised
    /// alternative into the outcome.
    Us,
    /// A commonly shared top alternative is the unique winner.
    Unanimity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Wsm => f.write_str("wsm"),
            Axiom::Sm => f.write_str("sm"),
            Axiom::Us => f.write_str("us"),
            Axiom::Unanimity => f.write_str("unanimity"),
        }
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Axiom> {
        match s {
            "wsm" => Ok(Axiom::Wsm),
            "sm" => Ok(Axiom::Sm),
            "us" => Ok(Axiom::Us),
            "unanimity" => Ok(Axiom::Unanimity),
            _ => Err(Error::input(format!(
                "unknown axiom {s:?}; expected wsm, sm, us, unanimity, or exclusions"
            ))),
        }
    }
}

/// The concrete situation backing a report: either an adjacent-swap tuple
/// or, for unanimity, a full profile.
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomEvidence {
    Swap {
        individual: Individual,
        others: PartialProfile,
        sincere: LinearOrder,
        /// The alternative moved down by the exchange.
        demoted: Alt,
        /// The alternative moved up by the exchange.
        promoted: Alt,
        /// The sole winner before the exchange, where the axiom needs one.
        winner: Option<Alt>,
        outcome_before: AltSet,
        outcome_after: AltSet,
    },
    Profile {
        profile: Profile,
        expected: AltSet,
        observed: AltSet,
    },
}

impl fmt::Display for AxiomEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomEvidence::Swap {
                individual,
                others,
                sincere,
                demoted,
                promoted,
                outcome_before,
                outcome_after,
                ..
            } => write!(
                f,
                "individual {individual} with sincere [{sincere}] among {others}: \
                 swapping {demoted}/{promoted} moves {{{outcome_before}}} to {{{outcome_after}}}"
            ),
            AxiomEvidence::Profile {
                profile,
                expected,
                observed,
            } => write!(
                f,
                "profile {profile}: expected {{{expected}}}, observed {{{observed}}}"
            ),
        }
    }
}

/// Outcome of one axiom check.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub axiom: Axiom,
    /// For universal axioms (wsm, sm, unanimity): no counterexample found.
    /// For the existential axiom (us): a witness exists.
    pub holds: bool,
    /// Counterexample for a failed universal axiom; witness for a
    /// satisfied existential one.
    pub evidence: Option<AxiomEvidence>,
}

/// Checks weak set-monotonicity of `rule` at `(n, m)` exhaustively.
pub fn check_wsm(rule: &SccRule, n: usize, m: usize, config: &SearchConfig) -> Result<AxiomReport> {
    rule.validate(n, m)?;
    if n == 2 {
        // No alternative pair fits strictly above a winner.
        return Ok(AxiomReport {
            axiom: Axiom::Wsm,
            holds: true,
            evidence: None,
        });
    }
    let cache = WinnerCache::build(rule, n, m, config.max_states, config.workers)?;
    Ok(check_wsm_with(&cache))
}

/// Weak set-monotonicity over an arbitrary prebuilt winner table.
pub fn check_wsm_with(cache: &WinnerCache) -> AxiomReport {
    let evidence = scan_swaps(cache, |ctx| {
        let winner_rank = ctx.ranks[ctx.winner?.index()];
        if ctx.promoted_rank >= winner_rank {
            return None;
        }
        let allowed =
            AltSet::singleton(ctx.winner.unwrap()).mask() | AltSet::singleton(ctx.promoted).mask();
        (ctx.after & !allowed != 0).then_some(())
    });
    AxiomReport {
        axiom: Axiom::Wsm,
        holds: evidence.is_none(),
        evidence,
    }
}

/// Checks set-monotonicity of `rule` at `(n, m)` exhaustively.
pub fn check_sm(rule: &SccRule, n: usize, m: usize, config: &SearchConfig) -> Result<AxiomReport> {
    rule.validate(n, m)?;
    let cache = WinnerCache::build(rule, n, m, config.max_states, config.workers)?;
    Ok(check_sm_with(&cache))
}

/// Set-monotonicity over an arbitrary prebuilt winner table.
pub fn check_sm_with(cache: &WinnerCache) -> AxiomReport {
    let evidence = scan_swaps(cache, |ctx| {
        if ctx.before & AltSet::singleton(ctx.demoted).mask() != 0 {
            return None;
        }
        (ctx.after != ctx.before).then_some(())
    });
    AxiomReport {
        axiom: Axiom::Sm,
        holds: evidence.is_none(),
        evidence,
    }
}

/// Searches for an upward-sensitivity witness of `rule` at `(n, m)`.
pub fn check_us(rule: &SccRule, n: usize, m: usize, config: &SearchConfig) -> Result<AxiomReport> {
    rule.validate(n, m)?;
    if n == 2 {
        // Unsatisfiable by structure: the raised pair cannot sit above a
        // winner when only two ranks exist.
        return Ok(AxiomReport {
            axiom: Axiom::Us,
            holds: false,
            evidence: None,
        });
    }
    let cache = WinnerCache::build(rule, n, m, config.max_states, config.workers)?;
    Ok(check_us_with(&cache))
}

/// Upward sensitivity over an arbitrary prebuilt winner table.
pub fn check_us_with(cache: &WinnerCache) -> AxiomReport {
    let evidence = scan_swaps(cache, |ctx| {
        let winner_rank = ctx.ranks[ctx.winner?.index()];
        if ctx.promoted_rank >= winner_rank {
            return None;
        }
        (ctx.after & AltSet::singleton(ctx.promoted).mask() != 0).then_some(())
    });
    AxiomReport {
        axiom: Axiom::Us,
        holds: evidence.is_some(),
        evidence,
    }
}

/// One candidate adjacent exchange handed to a scan predicate.
struct SwapContext<'a> {
    ranks: &'a [u8],
    winner: Option<Alt>,
    demoted: Alt,
    promoted: Alt,
    /// 1-based rank the promoted alternative held before the exchange.
    promoted_rank: u8,
    before: u16,
    after: u16,
}

/// Walks all `(individual, sincere order, others, adjacent pair)` tuples in
/// canonical order and returns evidence for the first tuple the predicate
/// accepts.
fn scan_swaps(
    cache: &WinnerCache,
    accept: impl Fn(&SwapContext) -> Option<()>,
) -> Option<AxiomEvidence> {
    let space = cache.space();
    let indexing = cache.indexing();
    let n = space.n();
    let k = space.len() as u32;
    let p = indexing.partial_count();
    for i in 1..=indexing.m() {
        for q_idx in 0..k {
            let order = space.order(q_idx);
            let ranks = space.ranks(q_idx);
            for pbar in 0..p {
                let before = cache.mask_at(indexing.splice(i, pbar, q_idx));
                let winner = (before.count_ones() == 1)
                    .then(|| Alt((before.trailing_zeros() + 1) as u8));
                for pos in 0..n - 1 {
                    let demoted = order.ranking()[pos];
                    let promoted = order.ranking()[pos + 1];
                    let swapped = space.adjacent_swap(q_idx, pos);
                    let after = cache.mask_at(indexing.splice(i, pbar, swapped));
                    let ctx = SwapContext {
                        ranks,
                        winner,
                        demoted,
                        promoted,
                        promoted_rank: pos as u8 + 2,
                        before,
                        after,
                    };
                    if accept(&ctx).is_some() {
                        return Some(AxiomEvidence::Swap {
                            individual: i,
                            others: indexing.partial_profile(space, i, pbar),
                            sincere: order.clone(),
                            demoted,
                            promoted,
                            winner,
                            outcome_before: AltSet::from_mask(before).expect("nonempty winners"),
                            outcome_after: AltSet::from_mask(after).expect("nonempty winners"),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Exhaustively checks that commonly shared tops win uniquely.
pub fn check_unanimity(
    rule: &SccRule,
    n: usize,
    m: usize,
    config: &SearchConfig,
) -> Result<AxiomReport> {
    rule.validate(n, m)?;
    let cache = WinnerCache::build(rule, n, m, config.max_states, config.workers)?;
    let indexing = cache.indexing();
    let space = cache.space();
    for idx in 0..indexing.full_count() as u64 {
        let digits = indexing.full_digits(idx);
        let top = space.order(digits[0]).top();
        if digits.iter().any(|&d| space.order(d).top() != top) {
            continue;
        }
        let observed = cache.winners_at(idx);
        if observed != AltSet::singleton(top) {
            return Ok(AxiomReport {
                axiom: Axiom::Unanimity,
                holds: false,
                evidence: Some(AxiomEvidence::Profile {
                    profile: indexing.profile(space, idx),
                    expected: AltSet::singleton(top),
                    observed,
                }),
            });
        }
    }
    Ok(AxiomReport {
        axiom: Axiom::Unanimity,
        holds: true,
        evidence: None,
    })
}

/// Re-checks evidence against the defining condition of `axiom` by direct
/// evaluation of `rule`.
pub fn verify_evidence(rule: &SccRule, axiom: Axiom, evidence: &AxiomEvidence) -> Result<bool> {
    verify_evidence_with(|p| scc::winners(rule, p), axiom, evidence)
}

/// Evidence re-check against an arbitrary winner function.
pub fn verify_evidence_with(
    eval: impl Fn(&Profile) -> Result<AltSet>,
    axiom: Axiom,
    evidence: &AxiomEvidence,
) -> Result<bool> {
    match (axiom, evidence) {
        (Axiom::Unanimity, AxiomEvidence::Profile {
            profile,
            expected,
            observed,
        }) => {
            let top = profile.order(1).top();
            let shared = profile.orders().iter().all(|q| q.top() == top);
            Ok(shared
                && *expected == AltSet::singleton(top)
                && eval(profile)? == *observed
                && observed != expected)
        }
        (
            _,
            AxiomEvidence::Swap {
                individual,
                others,
                sincere,
                demoted,
                promoted,
                winner,
                outcome_before,
                outcome_after,
            },
        ) => {
            let adjacent =
                sincere.rank(*demoted)? + 1 == sincere.rank(*promoted)?;
            if !adjacent {
                return Ok(false);
            }
            let before = eval(&others.complete_with(sincere)?)?;
            let swapped = sincere.with_swapped(*demoted, *promoted)?;
            let after = eval(&others.complete_with(&swapped)?)?;
            if before != *outcome_before || after != *outcome_after {
                return Ok(false);
            }
            let _ = individual;
            match axiom {
                Axiom::Wsm | Axiom::Us => {
                    let z = match winner {
                        Some(z) => *z,
                        None => return Ok(false),
                    };
                    let premise = before == AltSet::singleton(z)
                        && sincere.rank(*promoted)? < sincere.rank(z)?;
                    if !premise {
                        return Ok(false);
                    }
                    Ok(match axiom {
                        // A counterexample escapes {winner, promoted}.
                        Axiom::Wsm => {
                            let allowed =
                                AltSet::from_members(&[z, *promoted]).expect("two members");
                            !after.is_subset_of(allowed)
                        }
                        // A witness includes the promoted alternative.
                        _ => after.contains(*promoted),
                    })
                }
                Axiom::Sm => Ok(!before.contains(*demoted) && after != before),
                Axiom::Unanimity => Ok(false),
            }
        }
        _ => Ok(false),
    }
}

/// Combined run of the three monotonicity checks plus their cross laws.
#[derive(Debug)]
pub struct ExclusionsReport {
    pub wsm: AxiomReport,
    pub sm: AxiomReport,
    pub us: AxiomReport,
    /// The winner-information manipulation verdict, computed to validate
    /// the sufficient condition.
    pub manipulation: Verdict,
}

impl ExclusionsReport {
    /// The laws this report certifies.
    pub fn checks(&self) -> [(&'static str, bool); 3] {
        [
            ("sm implies wsm", !self.sm.holds || self.wsm.holds),
            ("sm and us never coexist", !(self.sm.holds && self.us.holds)),
            (
                "wsm and us force winner-information manipulability",
                !(self.wsm.holds && self.us.holds) || self.manipulation.holds,
            ),
        ]
    }

    pub fn consistent(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }
}

/// Runs wsm, sm, us, and the winner-information Kelly manipulation search
/// for `rule`, and cross-validates the laws connecting them. A violated
/// law is a fatal inconsistency: it means two checkers disagree.
pub fn check_exclusions(
    rule: &SccRule,
    n: usize,
    m: usize,
    config: &SearchConfig,
) -> Result<ExclusionsReport> {
    let report = ExclusionsReport {
        wsm: check_wsm(rule, n, m, config)?,
        sm: check_sm(rule, n, m, config)?,
        us: check_us(rule, n, m, config)?,
        manipulation: decide_manipulability(
            rule,
            ExtensionRule::Kelly,
            Some(&InfoProfileSpec::Winner(rule.clone())),
            n,
            m,
            config,
        )?,
    };
    if let Some((law, _)) = report.checks().iter().find(|(_, ok)| !ok) {
        return Err(Error::Inconsistent(format!(
            "{law} violated for {rule} at ({n},{m})"
        )));
    }
    Ok(report)
}
