//! Social choice correspondences with exact scoring.
//!
//! A rule maps every full preference profile to a nonempty winner set. All
//! argmax comparisons are exact: positional scores are rationals (internally
//! scaled to integers, which preserves the argmax), Copeland scores are
//! integers, and the qualified-majority threshold is compared with cross
//! multiplication. Ties in the argmax are semantic content here — winner
//! sets of size greater than one drive everything downstream — so no
//! floating point is allowed anywhere in winner determination.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;

use crate::prefs::{
    bounded_indexing, Alt, Individual, OrderSpace, Profile, ProfileIndexing, MAX_ALTERNATIVES,
};
use crate::{Error, Result};

/// Exact rational scalar used for weights and thresholds.
pub type Rational = Ratio<i64>;

/// Parses `"a/b"` or an integer into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let make_err = || Error::input(format!("invalid rational {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| make_err())?;
        let den: i64 = den.trim().parse().map_err(|_| make_err())?;
        if den == 0 {
            return Err(Error::input("rational with zero denominator"));
        }
        Ok(Rational::new(num, den))
    } else {
        let num: i64 = s.parse().map_err(|_| make_err())?;
        Ok(Rational::from_integer(num))
    }
}

fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A nonempty subset of the alternatives, stored as a bitmask.
///
/// Ordering is lexicographic on the sorted member sequence (`{1} < {1,2} <
/// {1,3} < {2}`), which is the tie-break order used when a search has to
/// pick among several information cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AltSet(u16);

impl AltSet {
    pub fn singleton(a: Alt) -> AltSet {
        AltSet(1 << a.index())
    }

    pub fn from_members(members: &[Alt]) -> Result<AltSet> {
        let mut mask = 0u16;
        for &a in members {
            if a.id() < 1 || a.id() as usize > MAX_ALTERNATIVES {
                return Err(Error::input(format!("alternative {a} out of range")));
            }
            mask |= 1 << a.index();
        }
        AltSet::from_mask(mask)
    }

    pub(crate) fn from_mask(mask: u16) -> Result<AltSet> {
        if mask == 0 {
            return Err(Error::input("winner sets and set operands must be nonempty"));
        }
        Ok(AltSet(mask))
    }

    pub(crate) fn mask(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, a: Alt) -> bool {
        a.id() >= 1 && self.0 & (1 << a.index()) != 0
    }

    pub fn is_subset_of(self, other: AltSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn members(self) -> Vec<Alt> {
        (0..MAX_ALTERNATIVES)
            .filter(|k| self.0 & (1 << k) != 0)
            .map(Alt::from_index)
            .collect()
    }

    /// True iff every member is a valid alternative id for `n`.
    pub fn in_range(self, n: usize) -> bool {
        self.0 >> n == 0
    }
}

impl PartialOrd for AltSet {
    fn partial_cmp(&self, other: &AltSet) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AltSet {
    fn cmp(&self, other: &AltSet) -> std::cmp::Ordering {
        self.members().cmp(&other.members())
    }
}

impl fmt::Display for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.members().iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for AltSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<AltSet> {
        let mut members = Vec::new();
        for token in s.split_whitespace() {
            let id: u64 = token
                .parse()
                .map_err(|_| Error::input(format!("invalid alternative id {token:?}")))?;
            if id < 1 || id > MAX_ALTERNATIVES as u64 {
                return Err(Error::input(format!("alternative {id} out of range")));
            }
            members.push(Alt(id as u8));
        }
        AltSet::from_members(&members)
    }
}

/// A positional scoring vector `w_1 >= w_2 >= ... >= w_n`, `w_1 > w_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoringVector {
    weights: Vec<Rational>,
}

impl ScoringVector {
    pub fn new(weights: Vec<Rational>) -> Result<ScoringVector> {
        if weights.len() < 2 {
            return Err(Error::input("a scoring vector needs at least 2 weights"));
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::input("scoring vector weights must be nonincreasing"));
        }
        if weights.first() == weights.last() {
            return Err(Error::input(
                "scoring vector must separate the best and worst ranks",
            ));
        }
        Ok(ScoringVector { weights })
    }

    pub fn borda(n: usize) -> ScoringVector {
        ScoringVector {
            weights: (0..n)
                .map(|k| Rational::from_integer((n - 1 - k) as i64))
                .collect(),
        }
    }

    pub fn plurality(n: usize) -> ScoringVector {
        let mut weights = vec![Rational::zero(); n];
        weights[0] = Rational::from_integer(1);
        ScoringVector { weights }
    }

    pub fn negative_plurality(n: usize) -> ScoringVector {
        let mut weights = vec![Rational::from_integer(1); n];
        weights[n - 1] = Rational::zero();
        ScoringVector { weights }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Weight for a 1-based rank.
    pub fn weight(&self, rank: u8) -> Rational {
        self.weights[(rank - 1) as usize]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Integer weights with the same argmax, scaled by the lcm of the
    /// denominators.
    fn scaled(&self) -> Result<Vec<i64>> {
        let mut lcm = 1i64;
        for w in &self.weights {
            let den = *w.denom();
            let g = gcd(lcm, den);
            lcm = (lcm / g)
                .checked_mul(den)
                .ok_or_else(|| Error::config("scoring weights are too large to scale"))?;
        }
        self.weights
            .iter()
            .map(|w| {
                w.numer()
                    .checked_mul(lcm / w.denom())
                    .ok_or_else(|| Error::config("scoring weights are too large to scale"))
            })
            .collect()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// The rules studied by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SccRule {
    Positional(ScoringVector),
    Borda,
    Plurality,
    NegativePlurality,
    Copeland,
    /// Qualified majority on two alternatives with threshold `alpha >= m/2`.
    Majority(Rational),
}

impl SccRule {
    /// Checks that the rule is evaluable at `(n, m)`.
    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        if n < 2 || m < 2 {
            return Err(Error::config(
                "rules need n >= 2 alternatives and m >= 2 individuals",
            ));
        }
        if n > MAX_ALTERNATIVES {
            return Err(Error::config(format!(
                "at most {MAX_ALTERNATIVES} alternatives are supported"
            )));
        }
        match self {
            SccRule::Positional(w) if w.n() != n => Err(Error::config(format!(
                "scoring vector has {} weights but n = {n}",
                w.n()
            ))),
            SccRule::Majority(alpha) => {
                if n != 2 {
                    return Err(Error::config(
                        "the majority rule needs exactly 2 alternatives",
                    ));
                }
                if *alpha * 2 < Rational::from_integer(m as i64) {
                    return Err(Error::config(format!(
                        "majority threshold {} below m/2",
                        format_rational(alpha)
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The scoring vector realising this rule at `n`, if it is positional.
    pub fn scoring_vector(&self, n: usize) -> Option<ScoringVector> {
        match self {
            SccRule::Positional(w) => Some(w.clone()),
            SccRule::Borda => Some(ScoringVector::borda(n)),
            SccRule::Plurality => Some(ScoringVector::plurality(n)),
            SccRule::NegativePlurality => Some(ScoringVector::negative_plurality(n)),
            SccRule::Copeland | SccRule::Majority(_) => None,
        }
    }

    /// Structural unanimity decision: a positional rule is unanimous iff
    /// `w_1 > w_2`, Copeland is unanimous, and the qualified majority is
    /// unanimous iff all `m` individuals together clear its threshold.
    pub fn is_unanimous(&self, n: usize, m: usize) -> Result<bool> {
        self.validate(n, m)?;
        Ok(match self {
            SccRule::Copeland => true,
            SccRule::Majority(alpha) => *alpha < Rational::from_integer(m as i64),
            _ => {
                let w = self.scoring_vector(n).expect("positional rule");
                w.weight(1) > w.weight(2)
            }
        })
    }
}

impl fmt::Display for SccRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SccRule::Borda => f.write_str("borda"),
            SccRule::Plurality => f.write_str("plurality"),
            SccRule::NegativePlurality => f.write_str("negative-plurality"),
            SccRule::Copeland => f.write_str("copeland"),
            SccRule::Majority(alpha) => write!(f, "majority:{}", format_rational(alpha)),
            SccRule::Positional(w) => {
                f.write_str("positional:")?;
                for (k, weight) in w.weights().iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    f.write_str(&format_rational(weight))?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SccRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<SccRule> {
        match s {
            "borda" => return Ok(SccRule::Borda),
            "plurality" => return Ok(SccRule::Plurality),
            "negative-plurality" => return Ok(SccRule::NegativePlurality),
            "copeland" => return Ok(SccRule::Copeland),
            _ => {}
        }
        if let Some(alpha) = s.strip_prefix("majority:") {
            return Ok(SccRule::Majority(parse_rational(alpha)?));
        }
        if let Some(weights) = s.strip_prefix("positional:") {
            let weights = weights
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?;
            return Ok(SccRule::Positional(ScoringVector::new(weights)?));
        }
        Err(Error::input(format!(
            "unknown rule {s:?}; expected borda, plurality, negative-plurality, \
             copeland, majority:a, or positional:w1,w2,..."
        )))
    }
}

/// Exact positional score of `x` at `p`: the sum over individuals of the
/// weight at `x`'s rank.
pub fn positional_score(w: &ScoringVector, x: Alt, p: &Profile) -> Result<Rational> {
    if w.n() != p.n() {
        return Err(Error::input(format!(
            "scoring vector has {} weights but the profile ranks {}",
            w.n(),
            p.n()
        )));
    }
    let mut score = Rational::zero();
    for q in p.orders() {
        score += w.weight(q.rank(x)?);
    }
    Ok(score)
}

/// Copeland score of `x` at `p`: majority wins minus majority losses.
/// Pairwise ties contribute to neither side.
pub fn copeland_score(x: Alt, p: &Profile) -> Result<i64> {
    if x.id() < 1 || x.id() as usize > p.n() {
        return Err(Error::input(format!("alternative {x} out of range")));
    }
    let m = p.m() as i64;
    let mut wins = 0i64;
    let mut losses = 0i64;
    for other in 1..=p.n() as u8 {
        let y = Alt(other);
        if y == x {
            continue;
        }
        let for_x = p.orders().iter().filter(|q| q.prefers(x, y)).count() as i64;
        if for_x * 2 > m {
            wins += 1;
        } else if for_x * 2 < m {
            losses += 1;
        }
    }
    Ok(wins - losses)
}

/// Winner set of `rule` on `p`, by direct evaluation.
///
/// This is the reference path: it recomputes scores from the profile itself
/// and shares nothing with the cache-backed searches, so it doubles as the
/// independent check used by witness re-verification.
pub fn winners(rule: &SccRule, p: &Profile) -> Result<AltSet> {
    let (n, m) = (p.n(), p.m());
    rule.validate(n, m)?;
    match rule {
        SccRule::Copeland => {
            let scores = (1..=n as u8)
                .map(|id| copeland_score(Alt(id), p))
                .collect::<Result<Vec<i64>>>()?;
            argmax_set(&scores)
        }
        SccRule::Majority(alpha) => {
            let (a, b) = (Alt(1), Alt(2));
            let for_a = p.orders().iter().filter(|q| q.prefers(a, b)).count() as i64;
            let for_b = m as i64 - for_a;
            if Rational::from_integer(for_a) > *alpha {
                Ok(AltSet::singleton(a))
            } else if Rational::from_integer(for_b) > *alpha {
                Ok(AltSet::singleton(b))
            } else {
                AltSet::from_members(&[a, b])
            }
        }
        _ => {
            let w = rule.scoring_vector(n).expect("positional rule");
            let scores = (1..=n as u8)
                .map(|id| positional_score(&w, Alt(id), p))
                .collect::<Result<Vec<Rational>>>()?;
            argmax_set(&scores)
        }
    }
}

fn argmax_set<T: Ord>(scores: &[T]) -> Result<AltSet> {
    let best = scores.iter().max().expect("nonempty score list");
    let mut mask = 0u16;
    for (k, s) in scores.iter().enumerate() {
        if s == best {
            mask |= 1 << k;
        }
    }
    AltSet::from_mask(mask)
}

/// Integer-only evaluator used when filling winner caches.
enum Evaluator {
    Positional { scaled: Vec<i64> },
    Copeland,
    Majority { num: i64, den: i64 },
}

impl Evaluator {
    fn for_rule(rule: &SccRule, n: usize) -> Result<Evaluator> {
        Ok(match rule {
            SccRule::Copeland => Evaluator::Copeland,
            SccRule::Majority(alpha) => Evaluator::Majority {
                num: *alpha.numer(),
                den: *alpha.denom(),
            },
            _ => Evaluator::Positional {
                scaled: rule.scoring_vector(n).expect("positional rule").scaled()?,
            },
        })
    }

    fn winners_mask(&self, space: &OrderSpace, digits: &[u32]) -> u16 {
        let n = space.n();
        match self {
            Evaluator::Positional { scaled } => {
                let mut score = [0i64; MAX_ALTERNATIVES];
                for &d in digits {
                    let ranks = space.ranks(d);
                    for x in 0..n {
                        score[x] += scaled[(ranks[x] - 1) as usize];
                    }
                }
                argmax_mask(&score[..n])
            }
            Evaluator::Copeland => {
                let m = digits.len() as i64;
                let mut co = [0i64; MAX_ALTERNATIVES];
                for x in 0..n {
                    for y in (x + 1)..n {
                        let mut for_x = 0i64;
                        for &d in digits {
                            let ranks = space.ranks(d);
                            if ranks[x] < ranks[y] {
                                for_x += 1;
                            }
                        }
                        if for_x * 2 > m {
                            co[x] += 1;
                            co[y] -= 1;
                        } else if for_x * 2 < m {
                            co[x] -= 1;
                            co[y] += 1;
                        }
                    }
                }
                argmax_mask(&co[..n])
            }
            Evaluator::Majority { num, den } => {
                let m = digits.len() as i64;
                let for_a = digits.iter().filter(|&&d| space.ranks(d)[0] == 1).count() as i64;
                if for_a * den > *num {
                    0b01
                } else if (m - for_a) * den > *num {
                    0b10
                } else {
                    0b11
                }
            }
        }
    }
}

fn argmax_mask(scores: &[i64]) -> u16 {
    let best = *scores.iter().max().expect("nonempty score list");
    let mut mask = 0u16;
    for (k, &s) in scores.iter().enumerate() {
        if s == best {
            mask |= 1 << k;
        }
    }
    mask
}

/// Winner sets of one rule over the whole full-profile space at `(n, m)`.
///
/// Built once per query in a single pass (parallel over index ranges when
/// asked to), then shared immutably by every search that slices the space.
pub struct WinnerCache {
    rule: Option<SccRule>,
    space: OrderSpace,
    indexing: ProfileIndexing,
    winners: Vec<u16>,
    image: OnceLock<BTreeSet<AltSet>>,
}

impl WinnerCache {
    /// Evaluates `rule` on all `(n!)^m` profiles. Refuses spaces larger
    /// than `max_states`.
    pub fn build(
        rule: &SccRule,
        n: usize,
        m: usize,
        max_states: u64,
        workers: usize,
    ) -> Result<WinnerCache> {
        rule.validate(n, m)?;
        let evaluator = Evaluator::for_rule(rule, n)?;
        let mut cache = WinnerCache::build_with(n, m, max_states, workers, |space, digits| {
            evaluator.winners_mask(space, digits)
        })?;
        cache.rule = Some(rule.clone());
        Ok(cache)
    }

    /// Cache backed by an arbitrary winner function over order digits; lets
    /// the axiom checkers evaluate ad-hoc rules.
    pub fn build_with(
        n: usize,
        m: usize,
        max_states: u64,
        workers: usize,
        eval: impl Fn(&OrderSpace, &[u32]) -> u16 + Sync,
    ) -> Result<WinnerCache> {
        let indexing = bounded_indexing(n, m, max_states)?;
        let space = OrderSpace::new(n)?;
        let count = indexing.full_count() as u64;
        let mut winners = vec![0u16; count as usize];

        let fill = |start: u64, chunk: &mut [u16]| {
            let mut digits = indexing.full_digits(start);
            for (offset, slot) in chunk.iter_mut().enumerate() {
                if offset > 0 {
                    increment_digits(&mut digits, indexing.n_fact() as u32);
                }
                let mask = eval(&space, &digits);
                debug_assert!(mask != 0, "winner sets must be nonempty");
                *slot = mask;
            }
        };

        if workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
            let chunk_size = (count as usize / (workers * 8)).max(1024);
            pool.install(|| {
                winners
                    .par_chunks_mut(chunk_size)
                    .enumerate()
                    .for_each(|(k, chunk)| fill((k * chunk_size) as u64, chunk));
            });
        } else {
            fill(0, &mut winners);
        }

        Ok(WinnerCache {
            rule: None,
            space,
            indexing,
            winners,
            image: OnceLock::new(),
        })
    }

    /// The rule the cache was built from, when it came from [`Self::build`].
    pub fn rule(&self) -> Option<&SccRule> {
        self.rule.as_ref()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn m(&self) -> usize {
        self.indexing.m()
    }

    pub fn space(&self) -> &OrderSpace {
        &self.space
    }

    pub fn indexing(&self) -> &ProfileIndexing {
        &self.indexing
    }

    /// Winner set at a full-profile index.
    pub fn winners_at(&self, idx: u64) -> AltSet {
        AltSet(self.winners[idx as usize])
    }

    pub(crate) fn mask_at(&self, idx: u64) -> u16 {
        self.winners[idx as usize]
    }

    /// Winner set for individual `i` reporting order `q` against partial
    /// profile index `pbar`.
    pub fn winners_for(&self, i: Individual, pbar: u64, q: u32) -> AltSet {
        self.winners_at(self.indexing.splice(i, pbar, q))
    }

    /// All winner sets attained over the full-profile space.
    pub fn image(&self) -> &BTreeSet<AltSet> {
        self.image.get_or_init(|| {
            self.winners
                .iter()
                .map(|&mask| AltSet(mask))
                .collect::<BTreeSet<AltSet>>()
        })
    }
}

fn increment_digits(digits: &mut [u32], radix: u32) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return;
        }
        *d = 0;
    }
}

/// The set of winner sets attained by `rule` over all profiles at `(n, m)`.
pub fn image(
    rule: &SccRule,
    n: usize,
    m: usize,
    max_states: u64,
    workers: usize,
) -> Result<BTreeSet<AltSet>> {
    let cache = WinnerCache::build(rule, n, m, max_states, workers)?;
    Ok(cache.image().clone())
}
