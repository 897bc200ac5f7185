//! Alternatives, linear orders, preference profiles, and deterministic
//! enumeration.
//!
//! Alternatives are 1-based integer ids. A [`LinearOrder`] lists all `n`
//! alternatives best first, so the alternative at position `k` (1-based) has
//! rank `k`. Orders are enumerated in lexicographic order of that sequence;
//! profiles and partial profiles are enumerated in lexicographic order of
//! their individual orders with the smallest individual id varying slowest.
//! This fixed order is what makes every witness search in the crate
//! deterministic, so it must not change.
//!
//! The wire format for a profile is `"3 1 2;3 1 2;2 1 3"`: individuals
//! separated by `;`, each order a space-separated list of ids, best first.
//! A partial profile is prefixed with `!i;` naming the absent individual,
//! e.g. `"!2;3 1 2;2 1 3"`. ASCII only, no trailing separator.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Upper limit on the number of alternatives (sets are 16-bit masks).
pub const MAX_ALTERNATIVES: usize = 16;

/// Individuals are 1-based ids in `1..=m`.
pub type Individual = usize;

/// A single alternative, identified by a 1-based id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alt(pub u8);

impl Alt {
    /// 1-based id.
    pub fn id(self) -> u8 {
        self.0
    }

    pub(crate) fn index(self) -> usize {
        debug_assert!(self.0 >= 1);
        (self.0 - 1) as usize
    }

    pub(crate) fn from_index(idx: usize) -> Alt {
        Alt(idx as u8 + 1)
    }
}

impl fmt::Display for Alt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A strict ranking of all `n` alternatives, best first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearOrder {
    ranking: Vec<Alt>,
}

impl LinearOrder {
    /// Builds an order from a best-first sequence, validating that it is a
    /// permutation of `1..=n`.
    pub fn new(ranking: Vec<Alt>) -> Result<LinearOrder> {
        let n = ranking.len();
        if n == 0 {
            return Err(Error::input("an order must rank at least one alternative"));
        }
        if n > MAX_ALTERNATIVES {
            return Err(Error::input(format!(
                "at most {MAX_ALTERNATIVES} alternatives are supported"
            )));
        }
        let mut seen = [false; MAX_ALTERNATIVES];
        for &a in &ranking {
            if a.0 < 1 || a.0 as usize > n {
                return Err(Error::input(format!(
                    "alternative {a} out of range 1..={n}"
                )));
            }
            if seen[a.index()] {
                return Err(Error::input(format!("repeated alternative {a}")));
            }
            seen[a.index()] = true;
        }
        Ok(LinearOrder { ranking })
    }

    /// Convenience constructor from raw 1-based ids.
    pub fn from_ids(ids: &[u8]) -> Result<LinearOrder> {
        LinearOrder::new(ids.iter().map(|&i| Alt(i)).collect())
    }

    /// Number of alternatives ranked.
    pub fn n(&self) -> usize {
        self.ranking.len()
    }

    /// Best-first sequence.
    pub fn ranking(&self) -> &[Alt] {
        &self.ranking
    }

    /// The best alternative.
    pub fn top(&self) -> Alt {
        self.ranking[0]
    }

    /// 1-based rank of `x`: the number of alternatives weakly above it.
    pub fn rank(&self, x: Alt) -> Result<u8> {
        if x.0 < 1 || x.0 as usize > self.n() {
            return Err(Error::input(format!(
                "alternative {x} out of range 1..={}",
                self.n()
            )));
        }
        // Positions are unique, so the scan always succeeds.
        Ok(self.ranking.iter().position(|&a| a == x).unwrap() as u8 + 1)
    }

    /// The alternative holding the given 1-based rank.
    pub fn alt_at_rank(&self, rank: u8) -> Alt {
        self.ranking[(rank - 1) as usize]
    }

    /// True iff `x` is ranked strictly above `y`.
    pub fn prefers(&self, x: Alt, y: Alt) -> bool {
        for &a in &self.ranking {
            if a == x {
                return true;
            }
            if a == y {
                return false;
            }
        }
        false
    }

    /// Lookup table: `table[id-1]` is the 1-based rank of alternative `id`.
    pub fn rank_table(&self) -> Vec<u8> {
        let mut table = vec![0u8; self.n()];
        for (pos, &a) in self.ranking.iter().enumerate() {
            table[a.index()] = pos as u8 + 1;
        }
        table
    }

    /// The order obtained by exchanging `x` and `y`, all else fixed.
    pub fn with_swapped(&self, x: Alt, y: Alt) -> Result<LinearOrder> {
        if x == y {
            return Err(Error::input("cannot transpose an alternative with itself"));
        }
        let px = self.rank(x)? as usize - 1;
        let py = self.rank(y)? as usize - 1;
        let mut ranking = self.ranking.clone();
        ranking.swap(px, py);
        Ok(LinearOrder { ranking })
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.ranking.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for LinearOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<LinearOrder> {
        parse_order_segment(s, 0)
    }
}

/// Preferences of all `m` individuals; index `i-1` holds individual `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    orders: Vec<LinearOrder>,
}

impl Profile {
    pub fn new(orders: Vec<LinearOrder>) -> Result<Profile> {
        if orders.len() < 2 {
            return Err(Error::input("a profile needs at least 2 individuals"));
        }
        let n = orders[0].n();
        if orders.iter().any(|q| q.n() != n) {
            return Err(Error::input("all orders must rank the same alternatives"));
        }
        Ok(Profile { orders })
    }

    pub fn n(&self) -> usize {
        self.orders[0].n()
    }

    pub fn m(&self) -> usize {
        self.orders.len()
    }

    /// Order of individual `i` (1-based).
    pub fn order(&self, i: Individual) -> &LinearOrder {
        &self.orders[i - 1]
    }

    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    /// Drops individual `i`, producing the partial profile of the others.
    pub fn without(&self, i: Individual) -> Result<PartialProfile> {
        if i < 1 || i > self.m() {
            return Err(Error::input(format!("no individual {i}")));
        }
        let orders = self
            .orders
            .iter()
            .enumerate()
            .filter(|(j, _)| j + 1 != i)
            .map(|(_, q)| q.clone())
            .collect();
        PartialProfile::new(i, orders)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, q) in self.orders.iter().enumerate() {
            if j > 0 {
                f.write_str(";")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Profile> {
        let segments = split_segments(s)?;
        if segments.len() < 2 {
            return Err(Error::Parse {
                pos: 0,
                msg: "a profile needs at least 2 individuals".into(),
            });
        }
        let mut orders = Vec::with_capacity(segments.len());
        let mut n = 0;
        for (start, seg) in segments {
            let order = parse_order_segment(seg, start)?;
            if orders.is_empty() {
                n = order.n();
            } else if order.n() != n {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("expected {n} alternatives, found {}", order.n()),
                });
            }
            orders.push(order);
        }
        Ok(Profile { orders })
    }
}

/// Preferences of everyone except one individual.
///
/// `orders` holds the remaining individuals in increasing id order, so for
/// absent individual `i` the entry at position `j` belongs to individual
/// `j+1` when `j+1 < i` and to individual `j+2` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialProfile {
    absent: Individual,
    orders: Vec<LinearOrder>,
}

impl PartialProfile {
    pub fn new(absent: Individual, orders: Vec<LinearOrder>) -> Result<PartialProfile> {
        if orders.is_empty() {
            return Err(Error::input(
                "a partial profile needs at least 1 individual",
            ));
        }
        let m = orders.len() + 1;
        if absent < 1 || absent > m {
            return Err(Error::input(format!(
                "absent individual {absent} out of range 1..={m}"
            )));
        }
        let n = orders[0].n();
        if orders.iter().any(|q| q.n() != n) {
            return Err(Error::input("all orders must rank the same alternatives"));
        }
        Ok(PartialProfile { absent, orders })
    }

    pub fn n(&self) -> usize {
        self.orders[0].n()
    }

    /// Size of the full electorate, absent individual included.
    pub fn m(&self) -> usize {
        self.orders.len() + 1
    }

    pub fn absent(&self) -> Individual {
        self.absent
    }

    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    /// Splices `q` in as the absent individual's order.
    pub fn complete_with(&self, q: &LinearOrder) -> Result<Profile> {
        if q.n() != self.n() {
            return Err(Error::input("order ranks a different set of alternatives"));
        }
        let mut orders = self.orders.clone();
        orders.insert(self.absent - 1, q.clone());
        Profile::new(orders)
    }
}

impl fmt::Display for PartialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "!{};", self.absent)?;
        for (j, q) in self.orders.iter().enumerate() {
            if j > 0 {
                f.write_str(";")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

impl FromStr for PartialProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<PartialProfile> {
        let rest = s.strip_prefix('!').ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "partial profile must start with '!i;'".into(),
        })?;
        let semi = rest.find(';').ok_or_else(|| Error::Parse {
            pos: s.len(),
            msg: "missing ';' after absent individual".into(),
        })?;
        let absent: Individual = rest[..semi].trim().parse().map_err(|_| Error::Parse {
            pos: 1,
            msg: format!("invalid individual id {:?}", &rest[..semi]),
        })?;
        let body_start = 1 + semi + 1;
        let body = &s[body_start..];
        let mut orders = Vec::new();
        let mut n = 0;
        for (start, seg) in split_segments(body)? {
            let order = parse_order_segment(seg, body_start + start)?;
            if orders.is_empty() {
                n = order.n();
            } else if order.n() != n {
                return Err(Error::Parse {
                    pos: body_start + start,
                    msg: format!("expected {n} alternatives, found {}", order.n()),
                });
            }
            orders.push(order);
        }
        PartialProfile::new(absent, orders)
    }
}

fn split_segments(s: &str) -> Result<Vec<(usize, &str)>> {
    if s.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty input".into(),
        });
    }
    let mut out = Vec::new();
    let mut start = 0;
    for (pos, ch) in s.char_indices() {
        if ch == ';' {
            out.push((start, &s[start..pos]));
            start = pos + 1;
        }
    }
    out.push((start, &s[start..]));
    Ok(out)
}

fn parse_order_segment(seg: &str, seg_start: usize) -> Result<LinearOrder> {
    let mut ids: Vec<(usize, u64)> = Vec::new();
    let mut token_start = None;
    let bytes = seg.as_bytes();
    for pos in 0..=bytes.len() {
        let boundary = pos == bytes.len() || bytes[pos] == b' ';
        if boundary {
            if let Some(ts) = token_start.take() {
                let token = &seg[ts..pos];
                let id: u64 = token.parse().map_err(|_| Error::Parse {
                    pos: seg_start + ts,
                    msg: format!("invalid alternative id {token:?}"),
                })?;
                ids.push((seg_start + ts, id));
            }
        } else if !bytes[pos].is_ascii() {
            return Err(Error::Parse {
                pos: seg_start + pos,
                msg: "non-ASCII input".into(),
            });
        } else if token_start.is_none() {
            token_start = Some(pos);
        }
    }
    let n = ids.len();
    if n == 0 {
        return Err(Error::Parse {
            pos: seg_start,
            msg: "empty order".into(),
        });
    }
    if n > MAX_ALTERNATIVES {
        return Err(Error::Parse {
            pos: seg_start,
            msg: format!("at most {MAX_ALTERNATIVES} alternatives are supported"),
        });
    }
    let mut seen = [false; MAX_ALTERNATIVES];
    let mut ranking = Vec::with_capacity(n);
    for (pos, id) in ids {
        if id < 1 || id > n as u64 {
            return Err(Error::Parse {
                pos,
                msg: format!("alternative {id} out of range 1..={n}"),
            });
        }
        let a = Alt(id as u8);
        if seen[a.index()] {
            return Err(Error::Parse {
                pos,
                msg: format!("repeated alternative {id}"),
            });
        }
        seen[a.index()] = true;
        ranking.push(a);
    }
    Ok(LinearOrder { ranking })
}

/// `n!` as `u64`; callers keep `n` small enough for this not to overflow.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Yields all `n!` linear orders on `1..=n` exactly once, in lexicographic
/// order of the best-first sequence: `[1,2,3]`, `[1,3,2]`, ..., `[3,2,1]`.
pub fn all_orders(n: usize) -> Result<impl Iterator<Item = LinearOrder>> {
    if !(1..=MAX_ALTERNATIVES).contains(&n) {
        return Err(Error::input(format!(
            "order enumeration needs 1 <= n <= {MAX_ALTERNATIVES}"
        )));
    }
    let first: Vec<u8> = (1..=n as u8).collect();
    Ok(OrdersIter {
        next: Some(first),
    })
}

struct OrdersIter {
    next: Option<Vec<u8>>,
}

impl Iterator for OrdersIter {
    type Item = LinearOrder;

    fn next(&mut self) -> Option<LinearOrder> {
        let current = self.next.take()?;
        let order = LinearOrder {
            ranking: current.iter().map(|&i| Alt(i)).collect(),
        };
        self.next = next_permutation(current);
        Some(order)
    }
}

fn next_permutation(mut seq: Vec<u8>) -> Option<Vec<u8>> {
    let n = seq.len();
    if n < 2 {
        return None;
    }
    let mut i = n - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return None;
    }
    let mut j = n - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    Some(seq)
}

/// All `n!` orders of `1..=n` interned with rank tables and swap tables.
///
/// The order at index `k` is the `k`-th order in lexicographic enumeration
/// order, so indices are stable identifiers across the whole crate.
pub struct OrderSpace {
    n: usize,
    orders: Vec<LinearOrder>,
    ranks: Vec<Vec<u8>>,
    adj: Vec<Vec<u32>>,
}

impl OrderSpace {
    /// Materialises the space; practical for `n <= 8`.
    pub fn new(n: usize) -> Result<OrderSpace> {
        if !(1..=8).contains(&n) {
            return Err(Error::input("order space supports 1 <= n <= 8"));
        }
        let orders: Vec<LinearOrder> = all_orders(n)?.collect();
        let ranks: Vec<Vec<u8>> = orders.iter().map(|q| q.rank_table()).collect();
        let adj = orders
            .iter()
            .map(|q| {
                (0..n.saturating_sub(1))
                    .map(|pos| {
                        let mut seq = q.ranking.clone();
                        seq.swap(pos, pos + 1);
                        lex_rank(&seq) as u32
                    })
                    .collect()
            })
            .collect();
        Ok(OrderSpace {
            n,
            orders,
            ranks,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n!`.
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self, idx: u32) -> &LinearOrder {
        &self.orders[idx as usize]
    }

    /// `ranks(idx)[id-1]` is the 1-based rank of alternative `id`.
    pub fn ranks(&self, idx: u32) -> &[u8] {
        &self.ranks[idx as usize]
    }

    /// Index of an order in enumeration order.
    pub fn index_of(&self, q: &LinearOrder) -> Result<u32> {
        if q.n() != self.n {
            return Err(Error::input("order ranks a different set of alternatives"));
        }
        Ok(lex_rank(&q.ranking) as u32)
    }

    /// Index of the order with 0-based positions `pos` and `pos+1` exchanged.
    pub fn adjacent_swap(&self, idx: u32, pos: usize) -> u32 {
        self.adj[idx as usize][pos]
    }

    /// Index of the order with alternatives `x` and `y` exchanged.
    pub fn transposed(&self, idx: u32, x: Alt, y: Alt) -> Result<u32> {
        let swapped = self.order(idx).with_swapped(x, y)?;
        self.index_of(&swapped)
    }
}

/// Lexicographic rank of a permutation sequence (Lehmer code).
fn lex_rank(seq: &[Alt]) -> u64 {
    let n = seq.len();
    let mut rank = 0u64;
    for k in 0..n {
        let smaller_later = seq[k + 1..].iter().filter(|a| a.0 < seq[k].0).count() as u64;
        rank += smaller_later * factorial(n - 1 - k);
    }
    rank
}

/// Mixed-radix indexing of the profile spaces for fixed `(n, m)`.
///
/// A full profile is the number `sum_j d_j * (n!)^(m-j)` where `d_j` is the
/// enumeration index of individual `j`'s order; individual 1 varies slowest.
/// A partial profile with absent individual `i` uses the same scheme over
/// the remaining individuals in increasing id order.
#[derive(Debug, Clone, Copy)]
pub struct ProfileIndexing {
    n_fact: u64,
    m: usize,
}

impl ProfileIndexing {
    pub fn new(n: usize, m: usize) -> ProfileIndexing {
        ProfileIndexing {
            n_fact: factorial(n),
            m,
        }
    }

    pub fn n_fact(&self) -> u64 {
        self.n_fact
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `(n!)^m`, widened so the caller can bound-check before indexing.
    pub fn full_count(&self) -> u128 {
        (self.n_fact as u128).pow(self.m as u32)
    }

    /// `(n!)^(m-1)`; only valid once `full_count` passed a bound check.
    pub fn partial_count(&self) -> u64 {
        self.n_fact.pow(self.m as u32 - 1)
    }

    fn stride(&self, i: Individual) -> u64 {
        self.n_fact.pow((self.m - i) as u32)
    }

    /// Full-profile index obtained by giving individual `i` the order `q`
    /// on top of partial profile `pbar`.
    pub fn splice(&self, i: Individual, pbar: u64, q: u32) -> u64 {
        let s = self.stride(i);
        let hi = pbar / s;
        let lo = pbar % s;
        hi * s * self.n_fact + q as u64 * s + lo
    }

    /// Order indices of all `m` individuals for a full-profile index.
    pub fn full_digits(&self, mut idx: u64) -> Vec<u32> {
        let mut digits = vec![0u32; self.m];
        for j in (0..self.m).rev() {
            digits[j] = (idx % self.n_fact) as u32;
            idx /= self.n_fact;
        }
        digits
    }

    /// Order indices of the `m-1` present individuals for a partial index.
    pub fn partial_digits(&self, mut pbar: u64) -> Vec<u32> {
        let mut digits = vec![0u32; self.m - 1];
        for j in (0..self.m - 1).rev() {
            digits[j] = (pbar % self.n_fact) as u32;
            pbar /= self.n_fact;
        }
        digits
    }

    /// Inverse of [`Self::full_digits`].
    pub fn full_from_digits(&self, digits: &[u32]) -> u64 {
        digits
            .iter()
            .fold(0u64, |acc, &d| acc * self.n_fact + d as u64)
    }

    /// Inverse of [`Self::partial_digits`].
    pub fn partial_from_digits(&self, digits: &[u32]) -> u64 {
        digits
            .iter()
            .fold(0u64, |acc, &d| acc * self.n_fact + d as u64)
    }

    /// Materialises a partial profile from its index.
    pub fn partial_profile(
        &self,
        space: &OrderSpace,
        absent: Individual,
        pbar: u64,
    ) -> PartialProfile {
        let orders = self
            .partial_digits(pbar)
            .into_iter()
            .map(|d| space.order(d).clone())
            .collect();
        PartialProfile::new(absent, orders).expect("digits decode to a valid partial profile")
    }

    /// Materialises a full profile from its index.
    pub fn profile(&self, space: &OrderSpace, idx: u64) -> Profile {
        let orders = self
            .full_digits(idx)
            .into_iter()
            .map(|d| space.order(d).clone())
            .collect();
        Profile::new(orders).expect("digits decode to a valid profile")
    }
}

/// Refuses spaces larger than `max_states` full profiles.
///
/// Returns the indexing helper on success. The bound is on `(n!)^m`, the
/// size of the full-profile space, even for enumerations that only walk a
/// partial space: the two are used together everywhere.
pub fn bounded_indexing(n: usize, m: usize, max_states: u64) -> Result<ProfileIndexing> {
    if n < 2 || m < 2 {
        return Err(Error::input("need n >= 2 alternatives and m >= 2 individuals"));
    }
    if n > MAX_ALTERNATIVES {
        return Err(Error::input(format!(
            "at most {MAX_ALTERNATIVES} alternatives are supported"
        )));
    }
    let full = (factorial(n) as u128).checked_pow(m as u32);
    match full {
        Some(count) if count <= max_states as u128 => Ok(ProfileIndexing::new(n, m)),
        Some(count) => Err(Error::BoundExceeded {
            required: count,
            limit: max_states,
        }),
        None => Err(Error::BoundExceeded {
            required: u128::MAX,
            limit: max_states,
        }),
    }
}

/// Yields all `(n!)^(m-1)` partial profiles for the given absent individual
/// in index order. Refused if `(n!)^m` exceeds `max_states`.
pub fn partial_profiles(
    n: usize,
    m: usize,
    absent: Individual,
    max_states: u64,
) -> Result<impl Iterator<Item = PartialProfile>> {
    if absent < 1 || absent > m {
        return Err(Error::input(format!(
            "absent individual {absent} out of range 1..={m}"
        )));
    }
    let indexing = bounded_indexing(n, m, max_states)?;
    let space = OrderSpace::new(n)?;
    let count = indexing.partial_count();
    Ok((0..count).map(move |pbar| indexing.partial_profile(&space, absent, pbar)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn order(ids: &[u8]) -> LinearOrder {
        LinearOrder::from_ids(ids).unwrap()
    }

    #[test]
    fn rank_basics() {
        let q = order(&[2, 1, 3]);
        assert_eq!(q.rank(Alt(2)).unwrap(), 1);
        assert_eq!(q.rank(Alt(3)).unwrap(), 3);
        assert_eq!(order(&[1, 2, 3]).rank(Alt(2)).unwrap(), 2);
        assert!(q.rank(Alt(4)).is_err());
        assert!(q.rank(Alt(0)).is_err());
    }

    #[test]
    fn rank_is_a_bijection() {
        for n in 1..=5 {
            for q in all_orders(n).unwrap() {
                let ranks: HashSet<u8> = (1..=n as u8).map(|id| q.rank(Alt(id)).unwrap()).collect();
                assert_eq!(ranks.len(), n);
                assert!(ranks.iter().all(|&r| r >= 1 && r <= n as u8));
            }
        }
    }

    #[test]
    fn transposition_examples() {
        let q = order(&[2, 1, 3]);
        assert_eq!(q.with_swapped(Alt(1), Alt(2)).unwrap(), order(&[1, 2, 3]));
        let q = order(&[3, 1, 2]);
        assert_eq!(q.with_swapped(Alt(1), Alt(2)).unwrap(), order(&[3, 2, 1]));
        assert!(q.with_swapped(Alt(1), Alt(1)).is_err());
    }

    #[test]
    fn transposition_is_an_involution_and_fixes_the_rest() {
        for n in 2..=4 {
            for q in all_orders(n).unwrap() {
                for x in 1..=n as u8 {
                    for y in 1..=n as u8 {
                        if x == y {
                            continue;
                        }
                        let swapped = q.with_swapped(Alt(x), Alt(y)).unwrap();
                        assert_eq!(
                            swapped.with_swapped(Alt(x), Alt(y)).unwrap(),
                            q,
                            "transposing twice must restore the order"
                        );
                        for z in 1..=n as u8 {
                            if z != x && z != y {
                                assert_eq!(swapped.rank(Alt(z)), q.rank(Alt(z)));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        assert_eq!(all_orders(1).unwrap().count(), 1);
        let orders: Vec<LinearOrder> = all_orders(3).unwrap().collect();
        assert_eq!(orders.len(), 6);
        assert_eq!(orders[0], order(&[1, 2, 3]));
        assert_eq!(orders[5], order(&[3, 2, 1]));
        assert_eq!(all_orders(4).unwrap().count(), 24);
        for n in 1..=6 {
            let seen: HashSet<Vec<Alt>> = all_orders(n)
                .unwrap()
                .map(|q| q.ranking().to_vec())
                .collect();
            assert_eq!(seen.len() as u64, factorial(n));
        }
    }

    #[test]
    fn partial_profile_counts() {
        assert_eq!(partial_profiles(2, 2, 2, 1 << 20).unwrap().count(), 2);
        assert_eq!(partial_profiles(3, 2, 1, 1 << 20).unwrap().count(), 6);
        assert_eq!(partial_profiles(3, 3, 2, 1 << 20).unwrap().count(), 36);
        assert!(matches!(
            partial_profiles(3, 3, 2, 10),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(partial_profiles(3, 3, 4, 1 << 20).is_err());
    }

    #[test]
    fn partial_profile_enumeration_is_lexicographic() {
        let all: Vec<PartialProfile> = partial_profiles(3, 3, 2, 1 << 20).unwrap().collect();
        // Smallest individual id varies slowest.
        assert_eq!(all[0].orders()[0], order(&[1, 2, 3]));
        assert_eq!(all[0].orders()[1], order(&[1, 2, 3]));
        assert_eq!(all[1].orders()[0], order(&[1, 2, 3]));
        assert_eq!(all[1].orders()[1], order(&[1, 3, 2]));
        assert_eq!(all[35].orders()[0], order(&[3, 2, 1]));
        assert_eq!(all[35].orders()[1], order(&[3, 2, 1]));
    }

    #[test]
    fn parse_profile_examples() {
        let p: Profile = "3 1 2;3 1 2;2 1 3".parse().unwrap();
        assert_eq!(p.m(), 3);
        assert_eq!(p.order(1), &order(&[3, 1, 2]));
        assert_eq!(p.order(3), &order(&[2, 1, 3]));

        let p: Profile = "1 2;2 1".parse().unwrap();
        assert_eq!(p.n(), 2);

        let err = "1 1 2;3 2 1".parse::<Profile>().unwrap_err();
        assert!(matches!(err, Error::Parse { pos: 2, .. }), "{err:?}");

        assert!("1 2 3".parse::<Profile>().is_err());
        assert!("1 2;2 1;".parse::<Profile>().is_err());
        assert!("1 2;2 3".parse::<Profile>().is_err());
        assert!("1 2;2 1 3".parse::<Profile>().is_err());
    }

    #[test]
    fn parse_partial_profile() {
        let pbar: PartialProfile = "!2;3 1 2;2 1 3".parse().unwrap();
        assert_eq!(pbar.absent(), 2);
        assert_eq!(pbar.m(), 3);
        let full = pbar.complete_with(&order(&[1, 2, 3])).unwrap();
        assert_eq!(full.order(2), &order(&[1, 2, 3]));
        assert_eq!(full.order(3), &order(&[2, 1, 3]));
        assert_eq!(pbar.to_string(), "!2;3 1 2;2 1 3");
        assert!("!4;1 2;2 1".parse::<PartialProfile>().is_err());
    }

    #[test]
    fn round_trip_on_all_small_profiles() {
        for n in 2..=3usize {
            for m in 2..=3usize {
                let indexing = ProfileIndexing::new(n, m);
                let space = OrderSpace::new(n).unwrap();
                for idx in 0..indexing.full_count() as u64 {
                    let p = indexing.profile(&space, idx);
                    let back: Profile = p.to_string().parse().unwrap();
                    assert_eq!(back, p);
                }
            }
        }
    }

    #[test]
    fn order_space_round_trips_indices() {
        for n in 1..=5 {
            let space = OrderSpace::new(n).unwrap();
            assert_eq!(space.len() as u64, factorial(n));
            for idx in 0..space.len() as u32 {
                assert_eq!(space.index_of(space.order(idx)).unwrap(), idx);
            }
        }
    }

    #[test]
    fn adjacent_swap_table_is_involutive() {
        let space = OrderSpace::new(4).unwrap();
        for idx in 0..space.len() as u32 {
            for pos in 0..3 {
                let swapped = space.adjacent_swap(idx, pos);
                assert_ne!(swapped, idx);
                assert_eq!(space.adjacent_swap(swapped, pos), idx);
            }
        }
    }

    #[test]
    fn indexing_splice_matches_digit_insertion() {
        let indexing = ProfileIndexing::new(3, 3);
        for i in 1..=3 {
            for pbar in 0..indexing.partial_count() {
                for q in 0..6u32 {
                    let full = indexing.splice(i, pbar, q);
                    let digits = indexing.full_digits(full);
                    assert_eq!(digits[i - 1], q);
                    let mut others = digits.clone();
                    others.remove(i - 1);
                    assert_eq!(indexing.partial_from_digits(&others), pbar);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn prop_transposition_involution(n in 2usize..=6, seed in 0u64..10_000, xi in 0usize..6, yi in 0usize..6) {
            let count = factorial(n);
            let idx = (seed % count) as u32;
            let space = OrderSpace::new(n).unwrap();
            let q = space.order(idx).clone();
            let x = Alt((xi % n) as u8 + 1);
            let y = Alt((yi % n) as u8 + 1);
            prop_assume!(x != y);
            let twice = q.with_swapped(x, y).unwrap().with_swapped(x, y).unwrap();
            prop_assert_eq!(twice, q);
        }

        #[test]
        fn prop_profile_wire_round_trip(n in 2usize..=4, m in 2usize..=4, seed in 0u64..1_000_000) {
            let indexing = ProfileIndexing::new(n, m);
            let space = OrderSpace::new(n).unwrap();
            let idx = seed % indexing.full_count() as u64;
            let p = indexing.profile(&space, idx);
            let back: Profile = p.to_string().parse().unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
