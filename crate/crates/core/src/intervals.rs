//! Integer intervals, capture, ℓ-powerful families and the three selection
//! procedures used by the two-path algorithm.
//!
//! An interval `(a, b)` captures `(c, d)` when `a <= c <= d <= b`. A family
//! is ℓ-powerful in `(0, n)` when every length-ℓ window `(h, h + ℓ)` with
//! `0 <= h <= n - ℓ` is captured by some member. The selection procedures
//! thin a powerful family down to a sub-family whose endpoints are spread
//! apart while staying powerful for a smaller window length.

use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("interval ({a},{b}) has a > b")]
    Reversed { a: usize, b: usize },
    #[error("interval ({a},{b}) leaves the horizon (0,{n})")]
    OutOfHorizon { a: usize, b: usize, n: usize },
    #[error("window length {ell} is not admissible for horizon {n} (need 0 < {factor}*ell <= n)")]
    BadEll { ell: usize, n: usize, factor: usize },
    #[error("family is not {ell}-powerful in (0,{n}); first uncovered offset {offset}")]
    NotPowerful { ell: usize, n: usize, offset: usize },
    #[error("greedy selection stalled at b = {b}")]
    StuckProgress { b: usize },
    #[error("selected family violates the interleaving guarantee: {0}")]
    OrderViolation(String),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Interval {
    pub a: usize,
    pub b: usize,
}

impl From<(usize, usize)> for Interval {
    fn from((a, b): (usize, usize)) -> Self {
        Interval { a, b }
    }
}

impl From<Interval> for (usize, usize) {
    fn from(i: Interval) -> Self {
        (i.a, i.b)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl Interval {
    pub fn new(a: usize, b: usize) -> Result<Self, IntervalError> {
        if a > b {
            return Err(IntervalError::Reversed { a, b });
        }
        Ok(Interval { a, b })
    }

    pub fn len(self) -> usize {
        self.b - self.a
    }

    pub fn captures(self, inner: Interval) -> bool {
        captures(self, inner)
    }
}

pub fn captures(outer: Interval, inner: Interval) -> bool {
    outer.a <= inner.a && inner.b <= outer.b
}

/// A set of intervals inside the horizon `(0, n)`, kept in a stored order.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct IntervalFamily {
    n: usize,
    items: Vec<Interval>,
}

impl fmt::Debug for IntervalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} {:?}", self.n, self.items)
    }
}

impl IntervalFamily {
    pub fn new(n: usize, items: Vec<Interval>) -> Result<Self, IntervalError> {
        for &Interval { a, b } in &items {
            if a > b {
                return Err(IntervalError::Reversed { a, b });
            }
            if b > n {
                return Err(IntervalError::OutOfHorizon { a, b, n });
            }
        }
        Ok(IntervalFamily { n, items })
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, IntervalError> {
        Self::new(n, pairs.iter().map(|&p| p.into()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn items(&self) -> &[Interval] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, i: Interval) -> bool {
        self.items.contains(&i)
    }

    /// Left and right ends both strictly increasing in stored order.
    pub fn is_standard_form(&self) -> bool {
        self.items.windows(2).all(|w| w[0].a < w[1].a && w[0].b < w[1].b)
    }

    /// Drops every member captured by a different member, removes
    /// duplicates and sorts by left end. Capture power is unchanged.
    pub fn to_standard_form(&self) -> IntervalFamily {
        // Sorting by (a asc, b desc) puts every capturer before what it
        // captures; a member survives iff its b beats every earlier b.
        let mut sorted = self.items.clone();
        sorted.sort_by_key(|i| (i.a, Reverse(i.b)));
        sorted.dedup();
        let mut kept: Vec<Interval> = Vec::with_capacity(sorted.len());
        for iv in sorted {
            if kept.last().is_none_or(|last| iv.b > last.b) {
                kept.push(iv);
            }
        }
        IntervalFamily { n: self.n, items: kept }
    }

    fn check_ell(&self, ell: usize, factor: usize) -> Result<(), IntervalError> {
        if ell == 0 || factor * ell > self.n {
            Err(IntervalError::BadEll { ell, n: self.n, factor })
        } else {
            Ok(())
        }
    }

    /// Offsets `h` in `0..=n-ℓ` whose window `(h, h+ℓ)` no member captures.
    pub fn uncovered_offsets(&self, ell: usize) -> Result<Vec<usize>, IntervalError> {
        self.check_ell(ell, 1)?;
        Ok(uncovered(self.n, ell, self.items.iter().copied()))
    }

    pub fn is_powerful(&self, ell: usize) -> Result<bool, IntervalError> {
        Ok(self.uncovered_offsets(ell)?.is_empty())
    }

    fn require_powerful(&self, ell: usize) -> Result<(), IntervalError> {
        match self.uncovered_offsets(ell)?.first() {
            None => Ok(()),
            Some(&offset) => Err(IntervalError::NotPowerful { ell, n: self.n, offset }),
        }
    }

    /// Inclusion-minimal ℓ-powerful sub-family. The standard form is swept
    /// left to right and a member is dropped iff the rest stays powerful.
    pub fn prune_minimal(&self, ell: usize) -> Result<IntervalFamily, IntervalError> {
        self.require_powerful(ell)?;
        let std = self.to_standard_form();
        let mut alive = vec![true; std.items.len()];
        for i in 0..alive.len() {
            alive[i] = false;
            let rest = std.items.iter().zip(&alive).filter(|(_, &k)| k).map(|(iv, _)| *iv);
            if !uncovered(self.n, ell, rest).is_empty() {
                alive[i] = true;
            }
        }
        let items = std.items.iter().zip(&alive).filter(|(_, &k)| k).map(|(iv, _)| *iv).collect();
        Ok(IntervalFamily { n: self.n, items })
    }

    /// Greedy selection for a 2ℓ-powerful family: returns a minimally
    /// ℓ-powerful sub-family in standard form.
    pub fn int2_select(&self, ell: usize) -> Result<IntervalFamily, IntervalError> {
        self.check_ell(ell, 2)?;
        let n = self.n;
        let base = self.prune_minimal(2 * ell)?;
        let capturer = |lo: usize, hi: usize| {
            let window = Interval { a: lo, b: hi };
            base.items
                .iter()
                .copied()
                .filter(|iv| iv.captures(window))
                .max_by_key(|iv| (iv.b, iv.a))
        };

        let mut chosen = vec![capturer(0, 2 * ell).ok_or(IntervalError::StuckProgress { b: 0 })?];
        loop {
            let b = chosen.last().unwrap().b;
            let next = if b + ell < n {
                capturer(b - ell, b + ell)
            } else if b < n {
                capturer(n - 2 * ell, n)
            } else {
                break;
            };
            match next {
                Some(iv) if iv.b > b => chosen.push(iv),
                _ => return Err(IntervalError::StuckProgress { b }),
            }
        }
        IntervalFamily { n, items: chosen }.prune_minimal(ell)
    }

    /// Mirror image `(a, b) -> (n - b, n - a)`, stored sorted by left end.
    pub fn reverse_family(&self) -> IntervalFamily {
        let mut items: Vec<Interval> =
            self.items.iter().map(|iv| Interval { a: self.n - iv.b, b: self.n - iv.a }).collect();
        items.sort();
        IntervalFamily { n: self.n, items }
    }

    /// Selection for a 4ℓ-powerful family whose output has all endpoints at
    /// least ℓ apart, apart from the pairs `(a1,a2)`, `(b_{t-1},b_t)` and
    /// `(a_i, b_{i-2})`. The guarantee is checked before returning.
    pub fn mainint_select(&self, ell: usize) -> Result<IntervalFamily, IntervalError> {
        self.mainint_select_with(ell, 0)
    }

    /// The same pipeline, asserting [`check_mainint_with`] at the given
    /// slack. Slack 1 is the bound the pipeline is known to meet.
    pub fn mainint_select_with(&self, ell: usize, slack: usize) -> Result<IntervalFamily, IntervalError> {
        self.check_ell(ell, 4)?;
        let coarse = self.int2_select(2 * ell)?;
        let out = coarse.reverse_family().int2_select(ell)?.reverse_family();
        let problems = check_mainint_with(&out, ell, slack);
        if let Some(p) = problems.first() {
            return Err(IntervalError::OrderViolation(p.clone()));
        }
        Ok(out)
    }
}

fn uncovered(n: usize, ell: usize, items: impl Iterator<Item = Interval>) -> Vec<usize> {
    // reach[h] = largest right end among members starting at or before h.
    let mut reach: Vec<Option<usize>> = vec![None; n + 1];
    for iv in items {
        let slot = &mut reach[iv.a];
        *slot = Some(slot.map_or(iv.b, |b| b.max(iv.b)));
    }
    let mut best: Option<usize> = None;
    let mut out = Vec::new();
    for (h, r) in reach.iter().enumerate().take(n - ell + 1) {
        best = best.max(*r);
        if best.is_none_or(|b| b < h + ell) {
            out.push(h);
        }
    }
    out
}

/// Pairs `(i, j)` (0-based, `j >= i + 2`) breaking `a_j >= b_i - ℓ + 2`.
/// Holds for every minimally ℓ-powerful family in standard form.
pub fn minimality_gap_violations(fam: &IntervalFamily, ell: usize) -> Vec<(usize, usize)> {
    let it = fam.items();
    let mut out = Vec::new();
    for i in 0..it.len() {
        for j in i + 2..it.len() {
            if (it[j].a as i64) < it[i].b as i64 - ell as i64 + 2 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Result of checking the spacing bullets promised for an int2 selection.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Int2Check {
    /// `(i, j)` pairs failing `a_j >= b_i - ℓ + 2`.
    pub spacing: Vec<(usize, usize)>,
    /// 1-based `i` in `1 < i < t` with `b_i - b_{i-1} < ℓ`.
    pub right_gaps: Vec<usize>,
    /// 1-based `i` in `1 < i <= t` with `b_{i-1} - a_i < ℓ`.
    pub overlaps: Vec<usize>,
    /// Smallest `b_{i-1} - a_i` over `1 < i <= t`, if `t >= 2`.
    pub min_overlap: Option<i64>,
}

impl Int2Check {
    pub fn holds(&self) -> bool {
        self.spacing.is_empty() && self.right_gaps.is_empty() && self.overlaps.is_empty()
    }
}

pub fn check_int2(fam: &IntervalFamily, ell: usize) -> Int2Check {
    let it = fam.items();
    let t = it.len();
    let ell_i = ell as i64;
    let mut check = Int2Check { spacing: minimality_gap_violations(fam, ell), ..Default::default() };
    for i in 2..=t {
        let (prev, cur) = (it[i - 2], it[i - 1]);
        if i < t && (cur.b as i64 - prev.b as i64) < ell_i {
            check.right_gaps.push(i);
        }
        let overlap = prev.b as i64 - cur.a as i64;
        if overlap < ell_i {
            check.overlaps.push(i);
        }
        check.min_overlap = Some(check.min_overlap.map_or(overlap, |m: i64| m.min(overlap)));
    }
    check
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum End {
    A(usize),
    B(usize),
}

/// Violations of the interleaving order and the ℓ-gap guarantee of a
/// mainint selection, as human-readable strings (empty when it holds).
///
/// The order is `0 = a1 < a2 < {a3,b1} < {a4,b2} < ... < {at,b_(t-2)} <
/// b_(t-1) < bt = n`, where the two members of a brace group may coincide.
pub fn check_mainint(fam: &IntervalFamily, ell: usize) -> Vec<String> {
    check_mainint_with(fam, ell, 0)
}

/// Like [`check_mainint`], but each adjacent pair `(a_j, b_(j-1))` only
/// needs `a_j <= b_(j-1)` and a gap of `ell - slack` when `slack > 0`.
/// With `slack = 1` this is what the selection pipeline actually delivers.
pub fn check_mainint_with(fam: &IntervalFamily, ell: usize, slack: usize) -> Vec<String> {
    let it = fam.items();
    let t = it.len();
    let mut out = Vec::new();
    if t == 0 {
        out.push("empty family".into());
        return out;
    }
    let val = |e: End| match e {
        End::A(i) => it[i - 1].a,
        End::B(i) => it[i - 1].b,
    };
    if it[0].a != 0 {
        out.push(format!("a1 = {} != 0", it[0].a));
    }
    if it[t - 1].b != fam.n() {
        out.push(format!("bt = {} != n = {}", it[t - 1].b, fam.n()));
    }

    let mut groups: Vec<Vec<End>> = vec![vec![End::A(1)]];
    if t >= 2 {
        groups.push(vec![End::A(2)]);
    }
    for i in 3..=t {
        groups.push(vec![End::A(i), End::B(i - 2)]);
    }
    if t >= 2 {
        groups.push(vec![End::B(t - 1)]);
    }
    groups.push(vec![End::B(t)]);
    let adjacent = |x: End, y: End| matches!((x, y), (End::A(j), End::B(i)) if i + 1 == j);
    for w in groups.windows(2) {
        for &x in &w[0] {
            for &y in &w[1] {
                let loose = slack > 0 && adjacent(x, y);
                if val(x) > val(y) || (!loose && val(x) == val(y)) {
                    out.push(format!("order: {x:?} = {} not below {y:?} = {}", val(x), val(y)));
                }
            }
        }
    }

    let exempt = |x: End, y: End| {
        let pair = |p: End, q: End| (x == p && y == q) || (x == q && y == p);
        pair(End::A(1), End::A(2))
            || (t >= 2 && pair(End::B(t - 1), End::B(t)))
            || (3..=t).any(|i| pair(End::A(i), End::B(i - 2)))
    };
    let ends: Vec<End> = (1..=t).flat_map(|i| [End::A(i), End::B(i)]).collect();
    for (k, &x) in ends.iter().enumerate() {
        for &y in &ends[k + 1..] {
            if exempt(x, y) {
                continue;
            }
            let need = if adjacent(x, y) || adjacent(y, x) { ell.saturating_sub(slack) } else { ell };
            if val(x).abs_diff(val(y)) < need {
                out.push(format!("gap: {x:?} = {} and {y:?} = {} closer than {ell}", val(x), val(y)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, pairs: &[(usize, usize)]) -> IntervalFamily {
        IntervalFamily::from_pairs(n, pairs).unwrap()
    }

    // Direct scan: every window checked against every member.
    fn powerful_by_scan(f: &IntervalFamily, ell: usize) -> bool {
        (0..=f.n() - ell).all(|h| f.items().iter().any(|iv| iv.a <= h && h + ell <= iv.b))
    }

    #[test]
    fn capture_examples() {
        let iv = |a, b| Interval::new(a, b).unwrap();
        assert!(captures(iv(0, 7), iv(2, 5)));
        assert!(captures(iv(2, 5), iv(2, 5)));
        assert!(!captures(iv(2, 9), iv(0, 4)));
        assert_eq!(Interval::new(3, 2), Err(IntervalError::Reversed { a: 3, b: 2 }));
    }

    #[test]
    fn family_rejects_out_of_horizon() {
        assert!(matches!(
            IntervalFamily::from_pairs(5, &[(0, 6)]),
            Err(IntervalError::OutOfHorizon { .. })
        ));
    }

    #[test]
    fn standard_form_examples() {
        let f = fam(11, &[(4, 11), (0, 7), (2, 9)]).to_standard_form();
        assert_eq!(f, fam(11, &[(0, 7), (2, 9), (4, 11)]));
        assert!(f.is_standard_form());
        assert_eq!(fam(10, &[(0, 10), (2, 5)]).to_standard_form(), fam(10, &[(0, 10)]));
        assert_eq!(fam(10, &[]).to_standard_form(), fam(10, &[]));
        assert_eq!(fam(10, &[(1, 3), (1, 3), (1, 5)]).to_standard_form(), fam(10, &[(1, 5)]));
    }

    #[test]
    fn powerful_examples() {
        let full = fam(9, &[(0, 9)]);
        for ell in 1..=9 {
            assert!(full.is_powerful(ell).unwrap());
        }
        let good = fam(12, &[(0, 4), (1, 6), (3, 8), (5, 10), (7, 12)]);
        assert_eq!(good.is_powerful(4).unwrap(), powerful_by_scan(&good, 4));
        assert!(good.is_powerful(4).unwrap());
        let bad = fam(12, &[(0, 4), (1, 6), (3, 8), (5, 10), (8, 12)]);
        assert_eq!(bad.uncovered_offsets(4).unwrap(), vec![7]);
        assert!(!powerful_by_scan(&bad, 4));
        assert!(matches!(good.is_powerful(0), Err(IntervalError::BadEll { .. })));
        assert!(matches!(good.is_powerful(13), Err(IntervalError::BadEll { .. })));
    }

    #[test]
    fn prune_examples() {
        assert_eq!(fam(8, &[(0, 8)]).prune_minimal(3).unwrap(), fam(8, &[(0, 8)]));
        let f = fam(12, &[(0, 4), (1, 6), (3, 8), (5, 10), (7, 12)]);
        assert_eq!(f.prune_minimal(2).unwrap(), fam(12, &[(0, 4), (3, 8), (7, 12)]));
        let tight: Vec<_> = (0..=7).map(|i| (i, i + 3)).collect();
        assert_eq!(fam(10, &tight).prune_minimal(3).unwrap(), fam(10, &tight));
        assert!(matches!(
            fam(12, &[(0, 4)]).prune_minimal(2),
            Err(IntervalError::NotPowerful { offset: 3, .. })
        ));
    }

    #[test]
    fn int2_example() {
        let f = fam(12, &[(0, 4), (1, 6), (3, 8), (5, 10), (7, 12)]);
        assert_eq!(f.int2_select(2).unwrap(), fam(12, &[(0, 4), (3, 8), (7, 12)]));
        assert_eq!(fam(12, &[(0, 12)]).int2_select(6).unwrap(), fam(12, &[(0, 12)]));
        assert!(matches!(
            fam(12, &[(0, 4), (5, 12)]).int2_select(2),
            Err(IntervalError::NotPowerful { .. })
        ));
        assert!(matches!(f.int2_select(7), Err(IntervalError::BadEll { .. })));
    }

    #[test]
    fn int2_example_overlap_is_one_short() {
        // Minimal 2-powerful output with b1 - a2 = 1 = ℓ - 1: the overlap
        // bound ℓ does not survive pruning, ℓ - 1 does.
        let out = fam(12, &[(0, 4), (1, 6), (3, 8), (5, 10), (7, 12)]).int2_select(2).unwrap();
        let check = check_int2(&out, 2);
        assert!(check.spacing.is_empty() && check.right_gaps.is_empty());
        assert_eq!(check.overlaps, vec![2, 3]);
        assert_eq!(check.min_overlap, Some(1));
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(fam(7, &[(0, 7)]).reverse_family(), fam(7, &[(0, 7)]));
        assert_eq!(fam(12, &[(1, 6)]).reverse_family(), fam(12, &[(6, 11)]));
    }

    #[test]
    fn mainint_examples() {
        assert_eq!(fam(20, &[(0, 20)]).mainint_select(5).unwrap(), fam(20, &[(0, 20)]));
        let eights: Vec<_> = (0..=32).map(|i| (i, i + 8)).collect();
        let out = fam(40, &eights).mainint_select(2).unwrap();
        assert!(check_mainint(&out, 2).is_empty());
        assert!(out.is_powerful(2).unwrap());
        assert_eq!(out.items()[0].a, 0);
        assert_eq!(out.items().last().unwrap().b, 40);
        // a3 and b1 coincide here; the interleaving allows that.
        assert_eq!(out.items()[2].a, out.items()[0].b);
    }

    #[test]
    fn mainint_checker_flags_bad_orders() {
        assert!(!check_mainint(&fam(20, &[(1, 20)]), 2).is_empty());
        assert!(!check_mainint(&fam(20, &[(0, 10), (9, 20)]), 2).is_empty());
        assert!(check_mainint(&fam(20, &[(0, 10), (1, 20)]), 2).is_empty());
    }

    #[test]
    fn slack_only_loosens_adjacent_pairs() {
        assert!(check_mainint_with(&fam(20, &[(0, 10), (9, 20)]), 2, 1).is_empty());
        assert!(!check_mainint(&fam(20, &[(0, 10), (10, 20)]), 1).is_empty());
        assert!(check_mainint_with(&fam(20, &[(0, 10), (10, 20)]), 1, 1).is_empty());
        assert!(!check_mainint_with(&fam(20, &[(0, 10), (11, 20)]), 1, 1).is_empty());
        // a1/b1 is not an adjacent pair.
        assert!(!check_mainint_with(&fam(20, &[(0, 1), (1, 20)]), 2, 1).is_empty());
    }
}
