//! Set-extension rules: lifting an order over alternatives to a relation
//! over nonempty sets of alternatives.
//!
//! Both supported rules are decidable comparison predicates evaluated on
//! demand; no relation tables are materialised. The strict part of a
//! relation is always derived generically as `succeq(b, c) && !succeq(c, b)`
//! — never special-cased per rule — so adding an extension rule cannot
//! change strictness semantics.

use std::fmt;
use std::str::FromStr;

use crate::prefs::{all_orders, Alt, LinearOrder};
use crate::scc::AltSet;
use crate::{Error, Result};

/// The supported extension rules.
///
/// Kelly: `B` is weakly above `C` iff `B = C` or every member of `B` weakly
/// beats every member of `C`. Fishburn: `B` is weakly above `C` iff the
/// members of `B \ C` weakly beat all of `C` and the members of `B` weakly
/// beat all of `C \ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionRule {
    Kelly,
    Fishburn,
}

impl fmt::Display for ExtensionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionRule::Kelly => f.write_str("kelly"),
            ExtensionRule::Fishburn => f.write_str("fishburn"),
        }
    }
}

impl FromStr for ExtensionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExtensionRule> {
        match s {
            "kelly" => Ok(ExtensionRule::Kelly),
            "fishburn" => Ok(ExtensionRule::Fishburn),
            _ => Err(Error::input(format!(
                "unknown extension rule {s:?}; expected kelly or fishburn"
            ))),
        }
    }
}

/// Whether `b` is weakly preferred to `c` under `rule` at order `q`.
pub fn succeq(rule: ExtensionRule, q: &LinearOrder, b: AltSet, c: AltSet) -> Result<bool> {
    check_operands(q, b, c)?;
    Ok(succeq_ranked(rule, &q.rank_table(), b.mask(), c.mask()))
}

/// Whether `b` is strictly preferred to `c`: weakly preferred and not
/// conversely.
pub fn strictly_prefers(
    rule: ExtensionRule,
    q: &LinearOrder,
    b: AltSet,
    c: AltSet,
) -> Result<bool> {
    check_operands(q, b, c)?;
    let ranks = q.rank_table();
    Ok(strict_ranked(rule, &ranks, b.mask(), c.mask()))
}

fn check_operands(q: &LinearOrder, b: AltSet, c: AltSet) -> Result<()> {
    if !b.in_range(q.n()) || !c.in_range(q.n()) {
        return Err(Error::input(format!(
            "set operand mentions alternatives beyond 1..={}",
            q.n()
        )));
    }
    Ok(())
}

/// Hot-path weak comparison over a rank table; masks must be nonempty.
pub(crate) fn succeq_ranked(rule: ExtensionRule, ranks: &[u8], b: u16, c: u16) -> bool {
    debug_assert!(b != 0 && c != 0);
    match rule {
        ExtensionRule::Kelly => b == c || max_rank(ranks, b) <= min_rank(ranks, c),
        ExtensionRule::Fishburn => {
            let b_only = b & !c;
            let c_only = c & !b;
            let first = b_only == 0 || max_rank(ranks, b_only) <= min_rank(ranks, c);
            first && (c_only == 0 || max_rank(ranks, b) <= min_rank(ranks, c_only))
        }
    }
}

pub(crate) fn strict_ranked(rule: ExtensionRule, ranks: &[u8], b: u16, c: u16) -> bool {
    succeq_ranked(rule, ranks, b, c) && !succeq_ranked(rule, ranks, c, b)
}

fn max_rank(ranks: &[u8], mut mask: u16) -> u8 {
    let mut worst = 0;
    while mask != 0 {
        let k = mask.trailing_zeros() as usize;
        worst = worst.max(ranks[k]);
        mask &= mask - 1;
    }
    worst
}

fn min_rank(ranks: &[u8], mut mask: u16) -> u8 {
    let mut best = u8::MAX;
    while mask != 0 {
        let k = mask.trailing_zeros() as usize;
        best = best.min(ranks[k]);
        mask &= mask - 1;
    }
    best
}

/// Outcome of an exhaustive structural check, with the first counterexample
/// found in enumeration order.
#[derive(Debug, Clone)]
pub struct LawVerdict {
    pub holds: bool,
    pub counterexample: Option<String>,
    pub cases_checked: u64,
}

/// Exhaustively checks that `rule` is faithful on singletons at size `n`:
/// `{x}` is weakly above `{y}` exactly when `x` weakly beats `y`.
pub fn check_singleton_law(rule: ExtensionRule, n: usize) -> Result<LawVerdict> {
    let mut cases = 0u64;
    for q in all_orders(n)? {
        for x in 1..=n as u8 {
            for y in 1..=n as u8 {
                cases += 1;
                let sx = AltSet::singleton(Alt(x));
                let sy = AltSet::singleton(Alt(y));
                let lifted = succeq(rule, &q, sx, sy)?;
                let base = q.rank(Alt(x))? <= q.rank(Alt(y))?;
                if lifted != base {
                    return Ok(LawVerdict {
                        holds: false,
                        counterexample: Some(format!("q=[{q}], x={x}, y={y}")),
                        cases_checked: cases,
                    });
                }
            }
        }
    }
    Ok(LawVerdict {
        holds: true,
        counterexample: None,
        cases_checked: cases,
    })
}

/// Whether the rule's relation is antisymmetric at size `n`: no two
/// distinct sets are weakly preferred to each other.
pub fn check_antisymmetry(rule: ExtensionRule, n: usize) -> Result<LawVerdict> {
    let full = (1u32 << n) as u16;
    let mut cases = 0u64;
    for q in all_orders(n)? {
        let ranks = q.rank_table();
        for b in 1..full {
            for c in 1..full {
                if b == c {
                    continue;
                }
                cases += 1;
                if succeq_ranked(rule, &ranks, b, c) && succeq_ranked(rule, &ranks, c, b) {
                    return Ok(LawVerdict {
                        holds: false,
                        counterexample: Some(format!(
                            "q=[{q}], b={{{}}}, c={{{}}}",
                            AltSet::from_mask(b)?,
                            AltSet::from_mask(c)?
                        )),
                        cases_checked: cases,
                    });
                }
            }
        }
    }
    Ok(LawVerdict {
        holds: true,
        counterexample: None,
        cases_checked: cases,
    })
}

/// One row of the exhaustive Kelly structural suite.
#[derive(Debug, Clone)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub violations: u64,
    pub cases: u64,
    pub first_violation: Option<String>,
}

/// Exhaustively checks the structural facts about the Kelly relation over
/// all orders and all pairs (or triples) of nonempty sets at size `n`:
/// the overlap bound for strict preference, comparability of proper
/// subsets, the non-domination criterion, the singleton/pair chains, top
/// dominance and blocking, the partial-order laws, and containment of the
/// Kelly relation in the Fishburn relation.
pub fn check_kelly_properties(n: usize) -> Result<Vec<PropertyCheck>> {
    if !(2..=5).contains(&n) {
        return Err(Error::input("kelly property suite supports 2 <= n <= 5"));
    }
    let full = (1u32 << n) as u16;
    let kelly = ExtensionRule::Kelly;
    let mut checks: Vec<PropertyCheck> = [
        "strict-implies-small-overlap",
        "comparable-proper-subset-is-singleton",
        "non-domination-criterion",
        "singleton-pair-chain",
        "top-singleton-dominates",
        "top-membership-blocks",
        "reflexive",
        "antisymmetric",
        "transitive",
        "kelly-within-fishburn",
    ]
    .iter()
    .map(|&name| PropertyCheck {
        name,
        violations: 0,
        cases: 0,
        first_violation: None,
    })
    .collect();

    let record = |checks: &mut Vec<PropertyCheck>, idx: usize, ok: bool, detail: &dyn Fn() -> String| {
        checks[idx].cases += 1;
        if !ok {
            checks[idx].violations += 1;
            if checks[idx].first_violation.is_none() {
                checks[idx].first_violation = Some(detail());
            }
        }
    };

    for q in all_orders(n)? {
        let ranks = q.rank_table();
        let top = AltSet::singleton(q.top()).mask();
        for b in 1..full {
            for c in 1..full {
                let detail = || {
                    format!(
                        "q=[{}], b={{{}}}, c={{{}}}",
                        q,
                        AltSet::from_mask(b).unwrap(),
                        AltSet::from_mask(c).unwrap()
                    )
                };
                let weak_bc = succeq_ranked(kelly, &ranks, b, c);
                let weak_cb = succeq_ranked(kelly, &ranks, c, b);
                let strict_bc = weak_bc && !weak_cb;
                let strict_cb = weak_cb && !weak_bc;

                // (i) strict preference forces almost-disjoint operands.
                let ok = !strict_bc || (b & c).count_ones() <= 1;
                record(&mut checks, 0, ok, &detail);

                // (ii) a comparable proper subset must be a singleton.
                let proper_subset = b != c && b & !c == 0;
                let comparable = weak_bc || weak_cb;
                let ok = !(proper_subset && comparable) || b.count_ones() == 1;
                record(&mut checks, 1, ok, &detail);

                // (iii) c does not strictly beat b iff b = c or some member
                // of b strictly beats some member of c.
                let exists_beat = min_rank(&ranks, b) < max_rank(&ranks, c);
                let ok = !strict_cb == (b == c || exists_beat);
                record(&mut checks, 2, ok, &detail);

                // (vi) keeping the top alternative blocks strict defeat.
                let ok = !(b & top != 0 && c & top == 0) || !strict_cb;
                record(&mut checks, 5, ok, &detail);

                // Partial order: antisymmetry.
                let ok = !(weak_bc && weak_cb) || b == c;
                record(&mut checks, 7, ok, &detail);

                // Transitivity over every third operand.
                if weak_bc {
                    for d in 1..full {
                        let ok = !succeq_ranked(kelly, &ranks, c, d)
                            || succeq_ranked(kelly, &ranks, b, d);
                        record(&mut checks, 8, ok, &|| {
                            format!(
                                "q=[{}], b={{{}}}, c={{{}}}, d={{{}}}",
                                q,
                                AltSet::from_mask(b).unwrap(),
                                AltSet::from_mask(c).unwrap(),
                                AltSet::from_mask(d).unwrap()
                            )
                        });
                    }
                }

                // Kelly comparisons survive under Fishburn.
                let ok = !weak_bc || succeq_ranked(ExtensionRule::Fishburn, &ranks, b, c);
                record(&mut checks, 9, ok, &detail);
            }

            // (v) the top singleton strictly beats everything else.
            let detail_b = || {
                format!("q=[{}], b={{{}}}", q, AltSet::from_mask(b).unwrap())
            };
            let ok = b == top || strict_ranked(kelly, &ranks, top, b);
            record(&mut checks, 4, ok, &detail_b);

            // Reflexivity.
            record(
                &mut checks,
                6,
                succeq_ranked(kelly, &ranks, b, b),
                &detail_b,
            );
        }

        // (iv) for x ranked above y: {x} > {x,y} > {y}.
        for x in 1..=n as u8 {
            for y in 1..=n as u8 {
                if x == y {
                    continue;
                }
                let detail = || format!("q=[{q}], x={x}, y={y}");
                if ranks[(y - 1) as usize] > ranks[(x - 1) as usize] {
                    let sx = 1u16 << (x - 1);
                    let sy = 1u16 << (y - 1);
                    let pair = sx | sy;
                    let ok = strict_ranked(kelly, &ranks, sx, pair)
                        && strict_ranked(kelly, &ranks, pair, sy);
                    record(&mut checks, 3, ok, &detail);
                }
            }
        }
    }
    Ok(checks)
}
