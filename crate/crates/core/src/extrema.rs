//! Extrema of iterates `f^q`, computed recursively in `q`.
//!
//! The extrema of `f^q` are the extrema of `f^{q-1}` together with the new
//! solutions of `f^{q-1}(x) = C`. Each new solution is seeded by intersecting
//! the chord between two consecutive points of the previous extrema table with
//! the line `y = C`, then refined inside that monotone piece.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::map::MapFamily;
use crate::roots::{newton_bracketed, Tolerance};

/// Largest iteration count accepted by the engine.
pub const MAX_Q: usize = 20;

/// Default absolute residual for refined roots.
pub const DEFAULT_TOL_ROOT: f64 = 1e-12;

/// Ordinates within this multiple of `tol_root` of a target count as touching it.
pub const TOUCH_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
}

impl ExtremumKind {
    fn flipped(self) -> ExtremumKind {
        match self {
            ExtremumKind::Max => ExtremumKind::Min,
            ExtremumKind::Min => ExtremumKind::Max,
        }
    }
}

/// A local extremum of `f^q`. `depth` is the `i` with `f^i(x) = C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub x: f64,
    pub y: f64,
    pub kind: ExtremumKind,
    pub depth: usize,
}

/// A chord seed and the root it was refined into.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    /// Index of the segment that produced the seed.
    pub segment: usize,
    pub seed: f64,
    pub root: f64,
    /// Whether the segment touches `a` or `b` rather than joining two extrema.
    pub boundary: bool,
}

impl SeedRecord {
    pub fn relative_error(&self) -> f64 {
        (self.seed - self.root).abs() / self.root.abs()
    }
}

/// Sorted extrema of `f^q` on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaTable {
    pub q: usize,
    pub entries: Vec<Extremum>,
    pub domain: (f64, f64),
    /// Seeds used in the step that produced this table (roots of `f^{q-1} = C`).
    pub seeds: Vec<SeedRecord>,
}

impl ExtremaTable {
    /// Table of `f^0`, the identity, which has no extrema.
    pub fn identity(map: &MapFamily) -> ExtremaTable {
        ExtremaTable {
            q: 0,
            entries: Vec::new(),
            domain: map.domain(),
            seeds: Vec::new(),
        }
    }

    pub fn abscissas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.x).collect()
    }

    /// Partition points `a = q_1 < ... < q_k = b`.
    pub fn partition_points(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(self.entries.len() + 2);
        pts.push(self.domain.0);
        pts.extend(self.entries.iter().map(|e| e.x));
        pts.push(self.domain.1);
        pts
    }

    /// Index of the monotonicity interval containing `x` (the left one at a
    /// partition point).
    pub fn interval_index(&self, x: f64) -> usize {
        self.entries.partition_point(|e| e.x < x)
    }

    /// Monotonicity interval of `f^q` containing `x`.
    pub fn branch_containing(&self, x: f64) -> Interval {
        let j = self.interval_index(x);
        let lo = if j == 0 { self.domain.0 } else { self.entries[j - 1].x };
        let hi = if j == self.entries.len() {
            self.domain.1
        } else {
            self.entries[j].x
        };
        Interval { lo, hi }
    }

    /// Position of an extremum with abscissa `x`, if there is one within `tol`.
    pub fn find(&self, x: f64, tol: f64) -> Option<usize> {
        let j = self.interval_index(x);
        [j.checked_sub(1), Some(j)]
            .into_iter()
            .flatten()
            .filter(|&k| k < self.entries.len())
            .find(|&k| (self.entries[k].x - x).abs() <= tol)
    }

    /// Largest `|y - f^{(q - depth) mod p}(C)|` over the table.
    pub fn ordinate_deviation(&self, map: &MapFamily, p: usize) -> f64 {
        let c = map.critical();
        self.entries
            .iter()
            .map(|e| (e.y - map.raw_iterate(c, (self.q - e.depth) % p)).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|f^depth(x) - C|` over the table.
    pub fn depth_deviation(&self, map: &MapFamily) -> f64 {
        let c = map.critical();
        self.entries
            .iter()
            .map(|e| (map.raw_iterate(e.x, e.depth) - c).abs())
            .fold(0.0, f64::max)
    }

    pub fn segment_model(&self, map: &MapFamily) -> SegmentModel {
        build_segment_model(self, map)
    }
}

/// Split `[a, b]` at the extrema of `f^q` into closed intervals of monotonicity.
pub fn monotonicity_partition(table: &ExtremaTable) -> Vec<Interval> {
    table
        .partition_points()
        .windows(2)
        .map(|w| Interval { lo: w[0], hi: w[1] })
        .collect()
}

/// Straight segment joining `(x_l, y_l)` and `(x_r, y_r)` with `x_l < x_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub x_l: f64,
    pub y_l: f64,
    pub x_r: f64,
    pub y_r: f64,
}

impl Segment {
    pub fn slope(&self) -> f64 {
        (self.y_r - self.y_l) / (self.x_r - self.x_l)
    }

    pub fn intercept(&self) -> f64 {
        self.y_l - self.slope() * self.x_l
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.y_l + (x - self.x_l) * (self.y_r - self.y_l) / (self.x_r - self.x_l)
    }

    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.x_l,
            hi: self.x_r,
        }
    }

    /// Whether `y` lies strictly between the endpoint ordinates.
    pub fn spans(&self, y: f64) -> bool {
        (self.y_l - y) * (self.y_r - y) < 0.0
    }

    /// Abscissa where the chord (extended if needed) takes the value `y`.
    pub fn chord_solve(&self, y: f64) -> f64 {
        self.x_l + (y - self.y_l) * (self.x_r - self.x_l) / (self.y_r - self.y_l)
    }

    pub fn is_increasing(&self) -> bool {
        self.y_r > self.y_l
    }
}

/// Piecewise-linear model of `f^q` through its extrema and the boundary points.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentModel {
    pub q: usize,
    pub segments: Vec<Segment>,
    /// Whether each segment has `a` or `b` as an endpoint.
    pub boundary: Vec<bool>,
}

/// The segments for a given table, one per monotonicity interval.
pub fn build_segment_model(table: &ExtremaTable, map: &MapFamily) -> SegmentModel {
    let (a, b) = table.domain;
    let mut pts = Vec::with_capacity(table.entries.len() + 2);
    pts.push((a, map.raw_iterate(a, table.q)));
    pts.extend(table.entries.iter().map(|e| (e.x, e.y)));
    pts.push((b, map.raw_iterate(b, table.q)));
    let n = pts.len() - 1;
    let segments = pts
        .windows(2)
        .map(|w| Segment {
            x_l: w[0].0,
            y_l: w[0].1,
            x_r: w[1].0,
            y_r: w[1].1,
        })
        .collect();
    SegmentModel {
        q: table.q,
        segments,
        boundary: (0..n).map(|k| k == 0 || k + 1 == n).collect(),
    }
}

/// Chord seed and refined root of `f^q(x) = y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentRoot {
    pub seed: f64,
    pub root: f64,
}

/// Solve `f^q(x) = y_target` inside a monotone segment.
///
/// Returns `None` when the target is not strictly between the endpoint
/// ordinates. The seed comes from the chord; the refinement is a safeguarded
/// Newton iteration confined to the segment.
pub fn solve_in_segment(
    map: &MapFamily,
    q: usize,
    segment: &Segment,
    y_target: f64,
    tol_root: f64,
) -> Result<Option<SegmentRoot>> {
    if !segment.spans(y_target) {
        return Ok(None);
    }
    let seed = segment.chord_solve(y_target);
    let g = |x: f64| {
        let j = map.raw_iterate_jet(x, q);
        (j.value - y_target, j.d1)
    };
    let root = newton_bracketed(g, segment.x_l, segment.x_r, Some(seed), Tolerance::residual(tol_root))?;
    if !(root >= segment.x_l && root <= segment.x_r) {
        return Err(Error::RefineEscape {
            root,
            lo: segment.x_l,
            hi: segment.x_r,
        });
    }
    Ok(Some(SegmentRoot { seed, root }))
}

/// Chord seeds and refined roots of `f^q(x) = target` over every segment the
/// target crosses. Segments with an endpoint touching the target are skipped.
pub fn seed_errors(map: &MapFamily, model: &SegmentModel, target: f64, tol_root: f64) -> Result<Vec<SeedRecord>> {
    let touch = TOUCH_FACTOR * tol_root;
    let found: Vec<Option<SeedRecord>> = model
        .segments
        .par_iter()
        .enumerate()
        .map(|(k, seg)| {
            if (seg.y_l - target).abs() <= touch || (seg.y_r - target).abs() <= touch {
                return Ok(None);
            }
            Ok(
                solve_in_segment(map, model.q, seg, target, tol_root)?.map(|sr| SeedRecord {
                    segment: k,
                    seed: sr.seed,
                    root: sr.root,
                    boundary: model.boundary[k],
                }),
            )
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Extend the extrema table of `f^{q-1}` to the table of `f^q`.
pub fn extrema_step(map: &MapFamily, prev: &ExtremaTable, tol_root: f64) -> Result<ExtremaTable> {
    let q = prev.q + 1;
    if q > MAX_Q {
        return Err(Error::TooManyIterations { q, max: MAX_Q });
    }
    let c = map.critical();
    let fc = map.raw(c);
    let touch = TOUCH_FACTOR * tol_root;

    let mut entries: Vec<Extremum> = prev
        .entries
        .iter()
        .map(|e| {
            let kind = if (e.y - c).abs() <= touch {
                // f^{q-1} touches C here, so f^q = f(f^{q-1}) peaks at f(C).
                ExtremumKind::Max
            } else if e.y < c {
                e.kind
            } else {
                e.kind.flipped()
            };
            Extremum {
                x: e.x,
                y: map.raw(e.y),
                kind,
                depth: e.depth,
            }
        })
        .collect();

    let model = build_segment_model(prev, map);
    let seeds = seed_errors(map, &model, c, tol_root)?;
    for s in &seeds {
        let seg = &model.segments[s.segment];
        if s.root <= seg.x_l || s.root >= seg.x_r {
            return Err(Error::RefineEscape {
                root: s.root,
                lo: seg.x_l,
                hi: seg.x_r,
            });
        }
    }
    entries.extend(seeds.iter().map(|s| Extremum {
        x: s.root,
        y: fc,
        kind: ExtremumKind::Max,
        depth: q - 1,
    }));
    entries.sort_by(|a, b| a.x.total_cmp(&b.x));

    for w in entries.windows(2) {
        let scale = w[0].x.abs().max(w[1].x.abs());
        if w[1].x - w[0].x <= 8.0 * f64::EPSILON * scale {
            return Err(Error::DuplicateRoot {
                first: w[0].x,
                second: w[1].x,
            });
        }
        if w[0].kind == w[1].kind {
            return Err(Error::BrokenAlternation { q, x: w[1].x });
        }
    }

    Ok(ExtremaTable {
        q,
        entries,
        domain: prev.domain,
        seeds,
    })
}

/// Extrema tables for `f^0, f^1, ..., f^{q_max}`.
#[derive(Debug, Clone)]
pub struct ExtremaLadder {
    tables: Vec<ExtremaTable>,
}

impl ExtremaLadder {
    pub fn build(map: &MapFamily, q_max: usize, tol_root: f64) -> Result<ExtremaLadder> {
        if q_max > MAX_Q {
            return Err(Error::TooManyIterations { q: q_max, max: MAX_Q });
        }
        let mut tables = Vec::with_capacity(q_max + 1);
        tables.push(ExtremaTable::identity(map));
        for _ in 0..q_max {
            let next = extrema_step(map, tables.last().expect("non-empty"), tol_root)?;
            tables.push(next);
        }
        Ok(ExtremaLadder { tables })
    }

    pub fn q_max(&self) -> usize {
        self.tables.len() - 1
    }

    pub fn table(&self, q: usize) -> &ExtremaTable {
        &self.tables[q]
    }

    pub fn tables(&self) -> &[ExtremaTable] {
        &self.tables
    }
}

/// Inflection point and cubic error bound of the chord model on one segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBound {
    pub x_inf: f64,
    pub third_derivative: f64,
    pub bound: f64,
}

/// `(1/6) |f^q'''(x_inf)| ((b - a) / 2^q)^3` at the inflection point of `f^q`
/// inside the segment.
pub fn segment_error_bound(map: &MapFamily, q: usize, segment: &Segment) -> Result<ErrorBound> {
    if !map.is_smooth() {
        return Err(Error::NotDifferentiable { x: map.critical() });
    }
    let d2 = |x: f64| {
        let j = map.raw_iterate_jet(x, q);
        (j.d2, j.d3)
    };
    let (g_l, _) = d2(segment.x_l);
    let (g_r, _) = d2(segment.x_r);
    if !(g_l * g_r < 0.0) {
        return Err(Error::NoInflection {
            q,
            lo: segment.x_l,
            hi: segment.x_r,
        });
    }
    let x_inf = newton_bracketed(d2, segment.x_l, segment.x_r, None, Tolerance::residual(0.0))?;
    let third = map.raw_iterate_jet(x_inf, q).d3;
    let h = map.width() / 2f64.powi(q as i32);
    Ok(ErrorBound {
        x_inf,
        third_derivative: third,
        bound: third.abs() / 6.0 * h * h * h,
    })
}

/// Largest `|f^q(x) - chord(x)|` over `samples + 1` evenly spaced points.
pub fn chord_deviation(map: &MapFamily, q: usize, segment: &Segment, samples: usize) -> f64 {
    let n = samples.max(1);
    (0..=n)
        .map(|k| {
            let x = segment.x_l + (segment.x_r - segment.x_l) * k as f64 / n as f64;
            (map.raw_iterate(x, q) - segment.eval(x)).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    const R6: f64 = 3.99758311825456726610;

    fn ladder(r: f64, q: usize) -> (MapFamily, ExtremaLadder) {
        let m = MapFamily::logistic(r).unwrap();
        let l = ExtremaLadder::build(&m, q, DEFAULT_TOL_ROOT).unwrap();
        (m, l)
    }

    #[test]
    fn base_case_is_the_critical_point() {
        let (_, l) = ladder(3.7, 1);
        let t = l.table(1);
        assert_eq!(t.entries.len(), 1);
        let e = t.entries[0];
        assert_eq!(e.x, 0.5);
        assert_eq!(e.y, 3.7 / 4.0);
        assert_eq!(e.kind, ExtremumKind::Max);
        assert_eq!(e.depth, 0);
        let parts = monotonicity_partition(t);
        assert_eq!(
            parts,
            vec![Interval { lo: 0.0, hi: 0.5 }, Interval { lo: 0.5, hi: 1.0 }]
        );
    }

    #[test]
    fn second_iterate_of_full_logistic() {
        let (_, l) = ladder(4.0, 2);
        let t = l.table(2);
        // 4x(1-x) = 1/2 has roots (2 -+ sqrt 2)/4.
        let expected = [(2.0 - 2f64.sqrt()) / 4.0, 0.5, (2.0 + 2f64.sqrt()) / 4.0];
        assert_eq!(t.entries.len(), 3);
        for (e, x) in t.entries.iter().zip(expected) {
            assert!((e.x - x).abs() < 1e-14, "{} vs {x}", e.x);
        }
        let kinds: Vec<_> = t.entries.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![ExtremumKind::Max, ExtremumKind::Min, ExtremumKind::Max]);
        assert_eq!(monotonicity_partition(t).len(), 4);
    }

    #[test]
    fn partition_has_one_more_interval_than_extrema() {
        let (m, l) = ladder(3.9, 7);
        for t in l.tables() {
            let parts = monotonicity_partition(t);
            assert_eq!(parts.len(), t.entries.len() + 1);
            let model = t.segment_model(&m);
            assert_eq!(model.segments.len(), parts.len());
            assert_eq!(parts.first().unwrap().lo, 0.0);
            assert_eq!(parts.last().unwrap().hi, 1.0);
        }
    }

    #[test]
    fn segment_endpoints_lie_on_the_iterate() {
        let (m, l) = ladder(3.9, 6);
        let model = l.table(6).segment_model(&m);
        for s in &model.segments {
            assert!((m.raw_iterate(s.x_l, 6) - s.y_l).abs() < 1e-9);
            assert!((m.raw_iterate(s.x_r, 6) - s.y_r).abs() < 1e-9);
        }
    }

    #[test]
    fn supercycle_touching_extrema_are_not_duplicated() {
        // f^6(C) = C at the period-6 supercycle; the step to q = 7 must not
        // create a new root at C.
        let (m, l) = ladder(R6, 8);
        assert_eq!(l.table(6).entries.len(), 63);
        let t7 = l.table(7);
        assert_eq!(t7.entries.len(), 63 + t7.seeds.len());
        assert!(t7.ordinate_deviation(&m, 6) < 1e-9);
        assert!(t7.depth_deviation(&m) < 1e-9);
    }

    #[test]
    fn solve_in_segment_cases() {
        let (m, l) = ladder(R6, 6);
        let model = l.table(6).segment_model(&m);
        let seg = model
            .segments
            .iter()
            .find(|s| s.x_l < 0.46 && s.x_r > 0.47)
            .copied()
            .unwrap();
        let sr = solve_in_segment(&m, 6, &seg, 0.5, DEFAULT_TOL_ROOT).unwrap().unwrap();
        assert!((m.raw_iterate(sr.root, 6) - 0.5).abs() <= 1e-12);
        assert!(solve_in_segment(&m, 6, &seg, 1.5, DEFAULT_TOL_ROOT).unwrap().is_none());
    }

    #[test]
    fn error_bound_requires_smooth_map_and_inflection() {
        let (m, l) = ladder(R6, 6);
        let model = l.table(6).segment_model(&m);
        // First segment runs from the fixed point 0 to the first maximum.
        assert!(matches!(
            segment_error_bound(&m, 6, &model.segments[0]),
            Err(Error::NoInflection { .. })
        ));
        let t = MapFamily::tent(1.8).unwrap();
        assert!(segment_error_bound(&t, 2, &model.segments[3]).is_err());
    }

    #[test]
    fn error_bound_on_central_segment_is_order_of_magnitude() {
        let (m, l) = ladder(R6, 10);
        for q in 6..=10 {
            let model = l.table(q).segment_model(&m);
            let seg = model
                .segments
                .iter()
                .copied()
                .find(|s| s.x_l <= 0.465 && s.x_r > 0.465)
                .unwrap();
            let eb = segment_error_bound(&m, q, &seg).unwrap();
            assert!(seg.interval().contains_open(eb.x_inf));
            let dev = chord_deviation(&m, q, &seg, 2000);
            assert!(dev <= 4.0 * eb.bound, "q={q} dev={dev} bound={}", eb.bound);
        }
    }

    #[test]
    fn too_many_iterations_refused() {
        let m = MapFamily::logistic(3.5).unwrap();
        assert!(matches!(
            ExtremaLadder::build(&m, MAX_Q + 1, DEFAULT_TOL_ROOT),
            Err(Error::TooManyIterations { .. })
        ));
    }

    #[test]
    fn table_lookup_helpers() {
        let (_, l) = ladder(4.0, 2);
        let t = l.table(2);
        assert_eq!(t.find(0.5, 1e-12), Some(1));
        assert_eq!(t.find(0.4, 1e-12), None);
        let b = t.branch_containing(0.3);
        assert!((b.lo - (2.0 - 2f64.sqrt()) / 4.0).abs() < 1e-14 && b.hi == 0.5);
    }
}
