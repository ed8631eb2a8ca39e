//! Capture sets `W_R`: the points that reach a capture interval within `q`
//! iterations, and the capture probability `P_q`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extrema::{ExtremaLadder, ExtremaTable, Segment, TOUCH_FACTOR};
use crate::interval::{compensated_sum, merge, Interval};
use crate::map::MapFamily;
use crate::orbit::CaptureIntervalSet;
use crate::roots::{newton_bracketed, Tolerance};

/// Slopes at or below this magnitude make the tangent-line inverse unusable.
pub const SLOPE_FLOOR: f64 = 1e-8;
/// Largest endpoint disagreement with the exact piece, relative to its length.
pub const BACKPULL_GATE: f64 = 0.10;
/// Forward-image slack around the critical capture interval, relative to its length.
pub const BACKPULL_FORWARD_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaptureCase {
    /// Both endpoints map onto the endpoints of the capture interval.
    Monotone,
    /// The piece is cut off by an extremum of the iterate or by the domain boundary.
    Critical,
}

/// Linearized preimage of the critical capture interval and its exact counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Backpull {
    /// The preimage of `C` the piece is built around.
    pub center: f64,
    pub depth: usize,
    pub linear: Interval,
    pub exact: Interval,
    /// Largest endpoint gap divided by the exact length.
    pub relative_gap: f64,
    /// Worst forward-image excursion outside the critical interval, relative to its length.
    pub forward_excess: f64,
    /// Whether the exact piece replaced the linear one.
    pub fallback: bool,
}

/// One piece `W_qij` of the capture set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureSubinterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    /// Index `i` of the capture interval reached.
    pub orbit_index: usize,
    /// Index `j` of the monotonicity interval of `f^level`.
    pub partition_index: usize,
    pub case: CaptureCase,
    /// Number of iterations after which the piece lands in `I_Pi`.
    pub level: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backpull: Option<Backpull>,
}

impl CaptureSubinterval {
    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.lo,
            hi: self.hi,
        }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

/// `W_R` for one `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureSet {
    pub q: usize,
    pub subintervals: Vec<CaptureSubinterval>,
    /// Maximal disjoint intervals of the union, sorted.
    pub merged: Vec<Interval>,
    pub measure: f64,
    /// Measure of `W_Ri`, per capture interval.
    pub per_orbit: Vec<f64>,
    pub domain: (f64, f64),
}

/// `P_q` and the exact-`q` probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityReport {
    pub q: usize,
    pub p_q: f64,
    pub p_exact_q: Option<f64>,
    pub mc_estimate: Option<f64>,
    pub mc_halfwidth: Option<f64>,
}

/// The piece of branch `j` of `f^q` that lands in `target`.
///
/// The crossings are seeded from the chord of the segment and refined by a
/// safeguarded Newton iteration on the branch. Where the branch image stops
/// short of an endpoint of `target`, the piece ends at the branch endpoint.
pub fn compute_w_qij(
    map: &MapFamily,
    table: &ExtremaTable,
    segment: &Segment,
    target: Interval,
    orbit_index: usize,
    j: usize,
    tol_root: f64,
) -> Result<Option<CaptureSubinterval>> {
    let q = table.q;
    let touch = TOUCH_FACTOR * tol_root;
    let (y_min, y_max) = (segment.y_l.min(segment.y_r), segment.y_l.max(segment.y_r));
    if y_max <= target.lo + touch || y_min >= target.hi - touch {
        return Ok(None);
    }
    let increasing = segment.is_increasing();
    let g = |y: f64| {
        move |x: f64| {
            let jet = map.raw_iterate_jet(x, q);
            (jet.value - y, jet.d1)
        }
    };
    let cross = |y: f64| {
        newton_bracketed(
            g(y),
            segment.x_l,
            segment.x_r,
            Some(segment.chord_solve(y)),
            Tolerance::residual(tol_root),
        )
    };
    // Abscissas where the image equals the lower and upper target endpoints.
    let (x_lo, lo_clipped) = if target.lo > y_min + touch {
        (cross(target.lo)?, false)
    } else {
        (if increasing { segment.x_l } else { segment.x_r }, true)
    };
    let (x_hi, hi_clipped) = if target.hi < y_max - touch {
        (cross(target.hi)?, false)
    } else {
        (if increasing { segment.x_r } else { segment.x_l }, true)
    };
    let (lo, hi, lo_cut, hi_cut) = if x_lo <= x_hi {
        (x_lo, x_hi, lo_clipped, hi_clipped)
    } else {
        (x_hi, x_lo, hi_clipped, lo_clipped)
    };
    for x in [lo, hi] {
        if x < segment.x_l || x > segment.x_r {
            return Err(Error::RefineEscape {
                root: x,
                lo: segment.x_l,
                hi: segment.x_r,
            });
        }
    }
    if hi <= lo {
        return Ok(None);
    }
    let case = if lo_cut || hi_cut {
        CaptureCase::Critical
    } else {
        CaptureCase::Monotone
    };
    Ok(Some(CaptureSubinterval {
        lo,
        hi,
        lo_closed: lo_cut,
        hi_closed: hi_cut,
        orbit_index,
        partition_index: j,
        case,
        level: q,
        backpull: None,
    }))
}

/// Tangent-line inverse of `f^depth` applied to `target` around `center`,
/// where `f^depth(center)` lies in `target`.
///
/// `branch` clips the result. Fails with `ZeroSlope` if the orbit of
/// `center` passes too close to the critical point.
pub fn linearized_backpull(
    map: &MapFamily,
    center: f64,
    depth: usize,
    target: Interval,
    branch: Interval,
) -> Result<Interval> {
    let mut orbit = Vec::with_capacity(depth);
    let mut x = center;
    for _ in 0..depth {
        orbit.push(x);
        x = map.raw(x);
    }
    let mut lo = target.lo;
    let mut hi = target.hi;
    for &x_k in orbit.iter().rev() {
        let slope = map.raw_jet(x_k).d1;
        if slope.abs() <= SLOPE_FLOOR || !map.is_smooth() && x_k == map.critical() {
            return Err(Error::ZeroSlope { x: x_k });
        }
        let y_k = map.raw(x_k);
        let a = x_k + (lo - y_k) / slope;
        let b = x_k + (hi - y_k) / slope;
        lo = a.min(b);
        hi = a.max(b);
    }
    Ok(Interval { lo, hi }.clamp_to(&branch))
}

fn attach_backpull(map: &MapFamily, piece: &mut CaptureSubinterval, critical: Interval, tol_root: f64) -> Result<()> {
    let q = piece.level;
    let c = map.critical();
    let g = |x: f64| {
        let jet = map.raw_iterate_jet(x, q);
        (jet.value - c, jet.d1)
    };
    let center = match newton_bracketed(
        g,
        piece.lo,
        piece.hi,
        Some(piece.interval().mid()),
        Tolerance::residual(tol_root),
    ) {
        Ok(x) => x,
        Err(Error::InvalidBracket { .. }) => return Ok(()),
        Err(e) => return Err(e),
    };
    let exact = piece.interval();
    let linear = linearized_backpull(
        map,
        center,
        q,
        critical,
        exact.clamp_to(&Interval::new(map.domain().0, map.domain().1)),
    );
    let (linear, fallback) = match linear {
        Ok(iv) => (iv, false),
        Err(Error::ZeroSlope { .. }) => (exact, true),
        Err(e) => return Err(e),
    };
    let gap = (linear.lo - exact.lo).abs().max((linear.hi - exact.hi).abs());
    let relative_gap = gap / exact.len();
    let forward_excess = [linear.lo, linear.hi]
        .into_iter()
        .map(|x| critical.distance(map.raw_iterate(x, q)) / critical.len())
        .fold(0.0, f64::max);
    let fallback = fallback || relative_gap > BACKPULL_GATE || forward_excess > BACKPULL_FORWARD_SLACK;
    piece.backpull = Some(Backpull {
        center,
        depth: q,
        linear: if fallback { exact } else { linear },
        exact,
        relative_gap,
        forward_excess,
        fallback,
    });
    Ok(())
}

/// All pieces `W_lij` of one level `l`, over every capture interval and branch.
pub fn level_pieces(
    map: &MapFamily,
    table: &ExtremaTable,
    captures: &CaptureIntervalSet,
    tol_root: f64,
) -> Result<Vec<CaptureSubinterval>> {
    let model = table.segment_model(map);
    let per_segment: Vec<Result<Vec<CaptureSubinterval>>> = model
        .segments
        .par_iter()
        .enumerate()
        .map(|(j, seg)| {
            let mut out = Vec::new();
            for (i, &target) in captures.intervals.iter().enumerate() {
                if let Some(mut piece) = compute_w_qij(map, table, seg, target, i, j, tol_root)? {
                    if captures.critical_index == Some(i) && piece.case == CaptureCase::Monotone {
                        attach_backpull(map, &mut piece, target, tol_root)?;
                    }
                    out.push(piece);
                }
            }
            Ok(out)
        })
        .collect();
    let mut pieces = Vec::new();
    for r in per_segment {
        pieces.extend(r?);
    }
    Ok(pieces)
}

/// Assemble `W_R` for `q` from the exact preimages of the capture intervals.
///
/// Points reaching `I_P` at step `l` are back in `I_P` at step `l + p`, so the
/// union over all `l <= q` equals the union over the last `p` levels.
pub fn assemble_w_r(
    map: &MapFamily,
    q: usize,
    period: usize,
    captures: &CaptureIntervalSet,
    ladder: &ExtremaLadder,
    tol_root: f64,
) -> Result<CaptureSet> {
    if q > ladder.q_max() {
        return Err(Error::TooManyIterations { q, max: ladder.q_max() });
    }
    let first = (q + 1).saturating_sub(period.max(1));
    let mut subintervals = Vec::new();
    for l in first..=q {
        subintervals.extend(level_pieces(map, ladder.table(l), captures, tol_root)?);
    }
    let all: Vec<Interval> = subintervals.iter().map(CaptureSubinterval::interval).collect();
    let merged = merge(&all);
    let measure = compensated_sum(merged.iter().map(Interval::len));
    let per_orbit = (0..captures.intervals.len())
        .map(|i| {
            let own: Vec<Interval> = subintervals
                .iter()
                .filter(|s| s.orbit_index == i)
                .map(CaptureSubinterval::interval)
                .collect();
            compensated_sum(merge(&own).iter().map(Interval::len))
        })
        .collect();
    Ok(CaptureSet {
        q,
        subintervals,
        merged,
        measure,
        per_orbit,
        domain: map.domain(),
    })
}

impl CaptureSet {
    pub fn probability(&self) -> f64 {
        (self.measure / (self.domain.1 - self.domain.0)).clamp(0.0, 1.0)
    }

    /// Whether `x` lies in the closure of the union.
    pub fn contains(&self, x: f64) -> bool {
        crate::interval::union_contains(&self.merged, x)
    }
}

/// `P_q`, and the exact-`q` probability when the `q - 1` set is supplied.
pub fn probability(set: &CaptureSet, previous: Option<&CaptureSet>) -> ProbabilityReport {
    let p_q = set.probability();
    ProbabilityReport {
        q: set.q,
        p_q,
        p_exact_q: previous.map(|prev| p_q - prev.probability()),
        mc_estimate: None,
        mc_halfwidth: None,
    }
}

/// `P_q` and `P_q - P_{q-1}`, with the `q - 1` set from its own run.
pub fn probability_with_exact(
    map: &MapFamily,
    q: usize,
    period: usize,
    captures: &CaptureIntervalSet,
    ladder: &ExtremaLadder,
    tol_root: f64,
) -> Result<(CaptureSet, ProbabilityReport)> {
    let set = assemble_w_r(map, q, period, captures, ladder, tol_root)?;
    let report = if q == 0 {
        ProbabilityReport {
            p_exact_q: Some(set.probability()),
            ..probability(&set, None)
        }
    } else {
        let prev = assemble_w_r(map, q - 1, period, captures, ladder, tol_root)?;
        probability(&set, Some(&prev))
    };
    Ok((set, report))
}

/// Smallest `l <= q` with `f^l(x)` inside some capture interval.
pub fn first_entry(map: &MapFamily, captures: &CaptureIntervalSet, x: f64, q: usize, cushion: f64) -> Option<usize> {
    let mut y = x;
    for l in 0..=q {
        if captures.contains(y, cushion) {
            return Some(l);
        }
        y = map.raw(y);
    }
    None
}
