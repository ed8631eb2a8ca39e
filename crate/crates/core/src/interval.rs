//! Real intervals, unions of intervals and their Lebesgue measure.

use serde::{Deserialize, Serialize};

/// A bounded real interval `[lo, hi]`. Whether endpoints belong to it only
/// matters for membership tests; it never changes a measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Interval spanned by two points in either order.
    pub fn new(p: f64, q: f64) -> Interval {
        if p <= q {
            Interval { lo: p, hi: q }
        } else {
            Interval { lo: q, hi: p }
        }
    }

    pub fn len(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Membership in the open interval `(lo, hi)`.
    pub fn contains_open(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn contains_closed(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Distance from `x` to the closed interval; zero inside.
    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }

    /// Whether the open interiors intersect.
    pub fn overlaps_open(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (hi > lo).then_some(Interval { lo, hi })
    }

    pub fn clamp_to(&self, bounds: &Interval) -> Interval {
        Interval {
            lo: self.lo.clamp(bounds.lo, bounds.hi),
            hi: self.hi.clamp(bounds.lo, bounds.hi),
        }
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Merge intervals into a sorted list of maximal disjoint intervals.
///
/// Intervals that overlap or touch are joined; empty ones are dropped.
pub fn merge(intervals: &[Interval]) -> Vec<Interval> {
    let mut sorted: Vec<Interval> = intervals.iter().copied().filter(|i| !i.is_empty()).collect();
    sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
    let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    out
}

/// Total length of a union of intervals (the input need not be disjoint).
pub fn measure(intervals: &[Interval]) -> f64 {
    compensated_sum(merge(intervals).iter().map(Interval::len))
}

/// Measure of the symmetric difference of two unions of intervals.
pub fn symmetric_difference(a: &[Interval], b: &[Interval]) -> f64 {
    let a = merge(a);
    let b = merge(b);
    let mut inter = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if let Some(x) = a[i].intersect(&b[j]) {
            inter.push(x.len());
        }
        if a[i].hi < b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    let ma = compensated_sum(a.iter().map(Interval::len));
    let mb = compensated_sum(b.iter().map(Interval::len));
    (ma + mb - 2.0 * compensated_sum(inter)).max(0.0)
}

/// Whether `x` lies in any of the sorted disjoint intervals (closed test).
pub fn union_contains(sorted: &[Interval], x: f64) -> bool {
    let idx = sorted.partition_point(|iv| iv.hi < x);
    idx < sorted.len() && sorted[idx].lo <= x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi)
    }

    #[test]
    fn merge_joins_overlaps_and_touching() {
        let m = merge(&[iv(0.5, 0.7), iv(0.0, 0.2), iv(0.1, 0.3), iv(0.7, 0.8)]);
        assert_eq!(m, vec![iv(0.0, 0.3), iv(0.5, 0.8)]);
        assert!((measure(&m) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn symmetric_difference_basic() {
        let a = [iv(0.0, 1.0)];
        let b = [iv(0.25, 0.5), iv(0.75, 1.25)];
        assert!((symmetric_difference(&a, &b) - 0.75).abs() < 1e-15);
        assert_eq!(symmetric_difference(&a, &a), 0.0);
    }

    #[test]
    fn union_membership() {
        let m = merge(&[iv(0.1, 0.2), iv(0.4, 0.5)]);
        assert!(union_contains(&m, 0.15));
        assert!(!union_contains(&m, 0.3));
        assert!(union_contains(&m, 0.5));
        assert!(!union_contains(&m, 0.6));
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = std::iter::once(1.0).chain(std::iter::repeat_n(1e-16, 10_000));
        assert!((compensated_sum(v) - (1.0 + 1e-12)).abs() < 1e-18);
    }

    proptest! {
        #[test]
        fn merged_is_sorted_disjoint_and_measure_bounded(
            raw in proptest::collection::vec((0.0f64..1.0, 0.0f64..0.2), 0..40)
        ) {
            let ivs: Vec<Interval> = raw.iter().map(|&(a, w)| iv(a, a + w)).collect();
            let m = merge(&ivs);
            for w in m.windows(2) {
                prop_assert!(w[0].hi < w[1].lo);
            }
            let total: f64 = ivs.iter().map(Interval::len).sum();
            prop_assert!(measure(&ivs) <= total + 1e-12);
            for x in ivs.iter().map(Interval::mid) {
                prop_assert!(union_contains(&m, x));
            }
            prop_assert!(symmetric_difference(&ivs, &m) < 1e-12);
        }
    }
}
