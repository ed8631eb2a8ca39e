//! Stable periodic orbits, their saddle partners and companion points, and
//! the capture intervals built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extrema::{ExtremaLadder, ExtremaTable, DEFAULT_TOL_ROOT};
use crate::interval::{compensated_sum, Interval};
use crate::map::MapFamily;
use crate::roots::{bisect, newton_bracketed, secant_polish, Tolerance};

/// Tuning for orbit detection and polishing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitOptions {
    /// Residual accepted for `f^p(S) = S` and related orbit equations.
    pub tol_orbit: f64,
    /// Iterations of the critical orbit discarded before recurrence tests.
    pub burn_in: usize,
    /// Near-recurrence distance that signals a candidate period.
    pub recurrence: f64,
    /// Residual for roots found on monotone branches.
    pub tol_root: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            tol_orbit: 1e-11,
            burn_in: 10_000,
            recurrence: 1e-8,
            tol_root: DEFAULT_TOL_ROOT,
        }
    }
}

/// Points and multiplier of the attracting cycle, before partners are known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableCycle {
    pub period: usize,
    /// `S_1, ..., S_p` with `S_{k+1} = f(S_k)`; `S_1` is the point nearest `C`.
    pub points: Vec<f64>,
    pub multiplier: f64,
}

/// A stable `p`-cycle with the unstable partners that bound its capture intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    pub period: usize,
    pub points: Vec<f64>,
    pub multiplier: f64,
    /// `U_i`: nearest repelling fixed point of `f^p` to `S_i`.
    pub saddles: Vec<f64>,
    /// `U_i'`: nearest solution of `f^p(x) = U_i` on the far side of `S_i`.
    pub companions: Vec<f64>,
}

/// A fixed point of `f^p` and the slope of `f^p` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub x: f64,
    pub slope: f64,
}

impl FixedPoint {
    pub fn is_repelling(&self) -> bool {
        self.slope.abs() > 1.0 + 1e-9
    }
}

/// Which reading of the capture-interval definition fixes the second endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaptureMode {
    /// Endpoints are `U_i` and `U_i'` themselves.
    #[default]
    Figure,
    /// Second endpoint is the nearest preimage of `U_i'` under `f^p`.
    Text,
}

/// The capture intervals `I_Pi` of a stable orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureIntervalSet {
    /// One open interval per orbit point, in orbit order.
    pub intervals: Vec<Interval>,
    /// Index of the interval containing the critical point, if any.
    pub critical_index: Option<usize>,
    /// Sum of the interval lengths.
    pub measure: f64,
    pub mode: CaptureMode,
}

impl CaptureIntervalSet {
    /// Whether `x` lies in some interval widened by `cushion` on both sides.
    pub fn contains(&self, x: f64, cushion: f64) -> bool {
        self.intervals
            .iter()
            .any(|iv| x > iv.lo - cushion && x < iv.hi + cushion)
    }

    pub fn critical_interval(&self) -> Option<Interval> {
        self.critical_index.map(|i| self.intervals[i])
    }
}

/// Detect the attracting cycle by iterating the critical point.
///
/// Returns `Ok(None)` when no stable cycle of period at most `p_max` shows up,
/// which is the expected outcome at chaotic parameters.
pub fn find_stable_orbit(map: &MapFamily, p_max: usize, opts: &OrbitOptions) -> Result<Option<StableCycle>> {
    let c = map.critical();
    let x = map.raw_iterate(c, opts.burn_in);
    let scale = map.width();
    let mut period = None;
    let mut y = x;
    let mut trail = Vec::with_capacity(2 * p_max + 1);
    trail.push(x);
    for _ in 0..2 * p_max {
        y = map.raw(y);
        trail.push(y);
    }
    for p in 1..=p_max {
        if (trail[p] - trail[0]).abs() < opts.recurrence * scale
            && (trail[2 * p] - trail[p]).abs() < opts.recurrence * scale
        {
            period = Some(p);
            break;
        }
    }
    let Some(p) = period else {
        return Ok(None);
    };

    let start = (0..p)
        .min_by(|&i, &j| (trail[i] - c).abs().total_cmp(&(trail[j] - c).abs()))
        .expect("p >= 1");
    let mut points = Vec::with_capacity(p);
    for k in 0..p {
        points.push(polish_periodic_point(map, trail[start + k], p, opts)?);
    }
    let multiplier = points.iter().map(|&s| map.raw_jet(s).d1).product::<f64>();
    if !(multiplier.abs() < 1.0) {
        return Ok(None);
    }
    Ok(Some(StableCycle {
        period: p,
        points,
        multiplier,
    }))
}

fn polish_periodic_point(map: &MapFamily, seed: f64, p: usize, opts: &OrbitOptions) -> Result<f64> {
    let reach = (1e3 * opts.recurrence).max(1e-6) * map.width();
    let mut x = seed;
    for _ in 0..100 {
        let j = map.raw_iterate_jet(x, p);
        let g = j.value - x;
        let dg = j.d1 - 1.0;
        if g.abs() <= 1e-3 * opts.tol_orbit || dg == 0.0 {
            break;
        }
        let next = x - g / dg;
        if !next.is_finite() || (next - seed).abs() > reach || !map.contains(next) {
            return Err(Error::PolishDivergence { seed, reached: next });
        }
        if next == x {
            break;
        }
        x = next;
    }
    if (map.raw_iterate(x, p) - x).abs() > opts.tol_orbit {
        return Err(Error::PolishDivergence { seed, reached: x });
    }
    Ok(x)
}

/// All fixed points of `f^p`, found branch by branch on the monotonicity
/// partition of `f^p`.
///
/// On an increasing branch `f^p'` is unimodal (negative Schwarzian), so the
/// branch splits at its maximum and at the points with `f^p' = 1` into
/// pieces on which `f^p(x) - x` is monotone. Decreasing branches need no split.
pub fn fixed_points(map: &MapFamily, table: &ExtremaTable, tol: f64) -> Result<Vec<FixedPoint>> {
    let p = table.q;
    let h = |x: f64| {
        let j = map.raw_iterate_jet(x, p);
        (j.value - x, j.d1 - 1.0)
    };
    let d1 = |x: f64| {
        let j = map.raw_iterate_jet(x, p);
        (j.d1 - 1.0, j.d2)
    };
    let mut roots: Vec<f64> = Vec::new();
    let pts = table.partition_points();
    for w in pts.windows(2) {
        let (u, v) = (w[0], w[1]);
        let increasing = map.raw_iterate(v, p) > map.raw_iterate(u, p);
        let mut cuts = vec![u];
        if increasing {
            let m = argmax_unimodal(|x| map.raw_iterate_jet(x, p).d1, u, v);
            cuts.push(m);
            for (s, t) in [(u, m), (m, v)] {
                let (a_s, _) = d1(s);
                let (a_t, _) = d1(t);
                if a_s * a_t < 0.0 {
                    cuts.push(newton_bracketed(d1, s, t, None, Tolerance::residual(1e-14))?);
                }
            }
        }
        cuts.push(v);
        cuts.sort_by(f64::total_cmp);
        for c in cuts.windows(2) {
            let (s, t) = (c[0], c[1]);
            let (h_s, _) = h(s);
            let (h_t, _) = h(t);
            if h_s.abs() <= tol {
                roots.push(s);
            }
            if h_t.abs() <= tol {
                roots.push(t);
            }
            if h_s.abs() > tol && h_t.abs() > tol && h_s * h_t < 0.0 {
                roots.push(newton_bracketed(h, s, t, None, Tolerance::residual(0.0))?);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() <= 1e-12 * map.width());
    Ok(roots
        .into_iter()
        .map(|x| FixedPoint {
            x,
            slope: map.raw_iterate_jet(x, p).d1,
        })
        .collect())
}

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`.
fn argmax_unimodal<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64) -> f64 {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    0.5 * (a + b)
}

/// All solutions of `f^q(x) = target`, at most one per monotone branch.
pub fn preimages(map: &MapFamily, table: &ExtremaTable, target: f64, tol: f64) -> Result<Vec<f64>> {
    let q = table.q;
    let g = |x: f64| {
        let j = map.raw_iterate_jet(x, q);
        (j.value - target, j.d1)
    };
    let mut out = Vec::new();
    for w in table.partition_points().windows(2) {
        let (u, v) = (w[0], w[1]);
        let (g_u, _) = g(u);
        let (g_v, _) = g(v);
        if g_u.abs() <= tol {
            out.push(u);
        }
        if g_v.abs() <= tol {
            out.push(v);
        }
        if g_u.abs() > tol && g_v.abs() > tol && g_u * g_v < 0.0 {
            out.push(newton_bracketed(g, u, v, None, Tolerance::residual(0.0))?);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|b, a| (*b - *a).abs() <= 1e-12 * map.width());
    Ok(out)
}

/// The repelling fixed point of `f^p` nearest to `S_i`.
pub fn find_saddle_partner(cycle: &StableCycle, i: usize, fixed: &[FixedPoint]) -> Result<f64> {
    let s = cycle.points[i];
    fixed
        .iter()
        .filter(|fp| fp.is_repelling())
        .map(|fp| fp.x)
        .min_by(|a, b| (a - s).abs().total_cmp(&(b - s).abs()))
        .ok_or(Error::NotFound {
            what: "saddle partner",
            index: i,
        })
}

/// The solution of `f^p(x) = U_i` nearest to `S_i` on the side opposite `U_i`.
pub fn find_companion(
    map: &MapFamily,
    table_p: &ExtremaTable,
    cycle: &StableCycle,
    i: usize,
    saddle: f64,
    tol: f64,
) -> Result<f64> {
    let s = cycle.points[i];
    let side = (saddle - s).signum();
    preimages(map, table_p, saddle, tol)?
        .into_iter()
        .filter(|&x| (x - saddle).abs() > 1e-12 * map.width() && (x - s) * side < 0.0)
        .min_by(|a, b| (a - s).abs().total_cmp(&(b - s).abs()))
        .ok_or(Error::NotFound {
            what: "companion point",
            index: i,
        })
}

impl PeriodicOrbit {
    /// Attach saddle partners and companions to a detected cycle.
    pub fn locate(map: &MapFamily, cycle: &StableCycle, opts: &OrbitOptions) -> Result<PeriodicOrbit> {
        let ladder = ExtremaLadder::build(map, cycle.period, opts.tol_root)?;
        let table = ladder.table(cycle.period);
        let fixed = fixed_points(map, table, 1e-2 * opts.tol_orbit)?;
        let mut saddles = Vec::with_capacity(cycle.period);
        let mut companions = Vec::with_capacity(cycle.period);
        let mut repelling: Vec<f64> = fixed.iter().filter(|fp| fp.is_repelling()).map(|fp| fp.x).collect();
        if repelling.is_empty() && cycle.period == 1 {
            // Every orbit is attracted: the whole domain is captured.
            let (a, b) = map.domain();
            let s = cycle.points[0];
            let (u, c) = if s - a <= b - s { (b, a) } else { (a, b) };
            return Ok(PeriodicOrbit {
                period: 1,
                points: cycle.points.clone(),
                multiplier: cycle.multiplier,
                saddles: vec![u],
                companions: vec![c],
            });
        }
        for i in 0..cycle.period {
            let s = cycle.points[i];
            repelling.sort_by(|a, b| (a - s).abs().total_cmp(&(b - s).abs()));
            let nearest = find_saddle_partner(cycle, i, &fixed)?;
            let mut chosen = None;
            // Nearest repelling fixed point whose interval isolates S_i.
            for &u in &repelling {
                let Ok(c) = find_companion(map, table, cycle, i, u, 1e-2 * opts.tol_orbit) else {
                    continue;
                };
                let iv = Interval::new(u, c);
                let isolated = cycle
                    .points
                    .iter()
                    .enumerate()
                    .all(|(k, &x)| k == i || !iv.contains_open(x));
                if isolated {
                    chosen = Some((u, c));
                    break;
                }
            }
            let (u, c) = match chosen {
                Some(pair) => pair,
                None => (
                    nearest,
                    find_companion(map, table, cycle, i, nearest, 1e-2 * opts.tol_orbit)?,
                ),
            };
            saddles.push(u);
            companions.push(c);
        }
        Ok(PeriodicOrbit {
            period: cycle.period,
            points: cycle.points.clone(),
            multiplier: cycle.multiplier,
            saddles,
            companions,
        })
    }

    /// Detect the stable orbit and its partners in one call.
    pub fn find(map: &MapFamily, p_max: usize, opts: &OrbitOptions) -> Result<Option<PeriodicOrbit>> {
        match find_stable_orbit(map, p_max, opts)? {
            Some(cycle) => Ok(Some(PeriodicOrbit::locate(map, &cycle, opts)?)),
            None => Ok(None),
        }
    }

    pub fn cycle(&self) -> StableCycle {
        StableCycle {
            period: self.period,
            points: self.points.clone(),
            multiplier: self.multiplier,
        }
    }
}

/// Build the capture intervals `I_Pi` from the saddles and companions.
pub fn capture_intervals(
    map: &MapFamily,
    orbit: &PeriodicOrbit,
    mode: CaptureMode,
    opts: &OrbitOptions,
) -> Result<CaptureIntervalSet> {
    let p = orbit.period;
    let intervals: Vec<Interval> = match mode {
        CaptureMode::Figure => (0..p)
            .map(|i| Interval::new(orbit.saddles[i], orbit.companions[i]))
            .collect(),
        CaptureMode::Text => {
            let ladder = ExtremaLadder::build(map, p, opts.tol_root)?;
            let table = ladder.table(p);
            (0..p)
                .map(|i| {
                    let s = orbit.points[i];
                    let far = preimages(map, table, orbit.companions[i], 1e-2 * opts.tol_orbit)?
                        .into_iter()
                        .min_by(|a, b| (a - s).abs().total_cmp(&(b - s).abs()))
                        .ok_or(Error::NotFound {
                            what: "preimage of companion",
                            index: i,
                        })?;
                    Ok(Interval::new(orbit.saddles[i], far))
                })
                .collect::<Result<_>>()?
        }
    };
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| intervals[i].lo.total_cmp(&intervals[j].lo));
    for w in order.windows(2) {
        let (i, j) = (w[0], w[1]);
        let slack = 1e-12 * map.width();
        if intervals[i].hi > intervals[j].lo + slack {
            return Err(Error::Overlap { first: i, second: j });
        }
    }
    let c = map.critical();
    let critical_index = intervals.iter().position(|iv| iv.contains_open(c));
    Ok(CaptureIntervalSet {
        measure: compensated_sum(intervals.iter().map(Interval::len)),
        intervals,
        critical_index,
        mode,
    })
}

/// A parameter value at which the critical point has period `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Supercycle {
    pub p: usize,
    pub r: f64,
    /// `f^p(C; r) - C` at the returned `r`.
    pub residual: f64,
}

/// Solve `f^p(C; r) = C` for `r` in `[r_lo, r_hi]` by bisection and a secant
/// polish, using `template` for the family (its own `r` is ignored).
pub fn find_supercycle_parameter(template: &MapFamily, p: usize, r_lo: f64, r_hi: f64) -> Result<Supercycle> {
    let c = template.critical();
    let residual = |r: f64| template.with_parameter_unchecked(r).raw_iterate(c, p) - c;
    let (lo, hi) = bisect(residual, r_lo, r_hi, 0.0)?;
    let (lo, hi) = if lo == hi {
        (lo, hi)
    } else {
        let width = 64.0 * f64::EPSILON * hi.abs();
        (lo - width, hi + width)
    };
    let candidates = [
        lo,
        hi,
        0.5 * (lo + hi),
        secant_polish(residual, lo, hi, Tolerance::residual(0.0)),
    ];
    let r = candidates
        .into_iter()
        .filter(|r| (r_lo.min(r_hi)..=r_lo.max(r_hi)).contains(r))
        .min_by(|a, b| residual(*a).abs().total_cmp(&residual(*b).abs()))
        .expect("bisection bracket lies in the search range");
    let map = template.with_parameter_unchecked(r);
    for k in 1..p {
        if p.is_multiple_of(k) && (map.raw_iterate(c, k) - c).abs() < 1e-8 * template.width() {
            return Err(Error::WrongPeriod { wanted: p, found: k });
        }
    }
    Ok(Supercycle {
        p,
        r,
        residual: residual(r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const R3: f64 = 3.83187405528331556841;
    const R6: f64 = 3.99758311825456726610;

    fn orbit(r: f64) -> (MapFamily, PeriodicOrbit) {
        let m = MapFamily::logistic(r).unwrap();
        let o = PeriodicOrbit::find(&m, 16, &OrbitOptions::default()).unwrap().unwrap();
        (m, o)
    }

    #[test]
    fn detects_period_three_supercycle() {
        let (_, o) = orbit(R3);
        assert_eq!(o.period, 3);
        assert!((o.points[0] - 0.5).abs() < 1e-12);
        assert!(o.multiplier.abs() < 1e-10);
    }

    #[test]
    fn period_two_matches_closed_form() {
        let r: f64 = 3.2;
        let (m, o) = orbit(r);
        assert_eq!(o.period, 2);
        let disc = ((r + 1.0) * (r - 3.0)).sqrt();
        let mut expected = [(r + 1.0 - disc) / (2.0 * r), (r + 1.0 + disc) / (2.0 * r)];
        expected.sort_by(f64::total_cmp);
        let mut got = o.points.clone();
        got.sort_by(f64::total_cmp);
        for (g, e) in got.iter().zip(expected) {
            assert!((g - e).abs() < 1e-12);
        }
        assert!((got[0] - 0.5130).abs() < 1e-4 && (got[1] - 0.7995).abs() < 1e-4);
        // Saddle partner is the repelling fixed point 1 - 1/r.
        let i = o.points.iter().position(|&s| (s - got[0]).abs() < 1e-9).unwrap();
        let u = 1.0 - 1.0 / r;
        assert!((o.saddles[i] - u).abs() < 1e-12);
        assert!(m.iterate_jet(u, 2).unwrap().d1.abs() > 1.0);
        // Companion is the mirror image 1 - U.
        assert!((o.companions[i] - 0.3125).abs() < 1e-12);
    }

    #[test]
    fn chaotic_parameter_has_no_attractor() {
        let m = MapFamily::logistic(4.0).unwrap();
        assert!(find_stable_orbit(&m, 16, &OrbitOptions::default()).unwrap().is_none());
    }

    #[test]
    fn fixed_point_case_uses_origin_as_saddle() {
        let (_, o) = orbit(2.5);
        assert_eq!(o.period, 1);
        assert!((o.points[0] - 0.6).abs() < 1e-12);
        assert_eq!(o.saddles[0], 0.0);
        assert_eq!(o.companions[0], 1.0);
    }

    #[test]
    fn supercycle_parameters() {
        let m = MapFamily::logistic(3.5).unwrap();
        let s3 = find_supercycle_parameter(&m, 3, 3.8, 3.87).unwrap();
        assert!((s3.r - R3).abs() < 1e-11 && s3.residual.abs() <= 1e-13);
        let s1 = find_supercycle_parameter(&m, 1, 1.9, 2.1).unwrap();
        assert!((s1.r - 2.0).abs() < 1e-14);
        assert!(matches!(
            find_supercycle_parameter(&m, 3, 3.0, 3.1),
            Err(Error::InvalidBracket { .. })
        ));
        // The period-3 root also solves f^6(C) = C but has the wrong period.
        assert!(matches!(
            find_supercycle_parameter(&m, 6, 3.83, 3.834),
            Err(Error::WrongPeriod { found: 3, .. })
        ));
    }

    #[test]
    fn companions_satisfy_definitional_residuals() {
        for r in [R3, R6] {
            let (m, o) = orbit(r);
            for i in 0..o.period {
                let (s, u, up) = (o.points[i], o.saddles[i], o.companions[i]);
                assert!((m.raw_iterate(u, o.period) - u).abs() < 1e-11);
                assert!((m.raw_iterate(up, o.period) - u).abs() < 1e-11);
                assert!(s > u.min(up) && s < u.max(up), "r={r} i={i}");
            }
        }
    }

    #[test]
    fn saddles_form_an_orbit_at_supercycles() {
        for r in [R3, R6] {
            let (m, o) = orbit(r);
            for i in 0..o.period {
                let next = o.saddles[(i + 1) % o.period];
                assert!((m.raw(o.saddles[i]) - next).abs() < 1e-9, "r={r} i={i}");
            }
        }
    }

    #[test]
    fn capture_intervals_basic() {
        let (m, o) = orbit(3.2);
        let cs = capture_intervals(&m, &o, CaptureMode::Figure, &OrbitOptions::default()).unwrap();
        let k = cs.critical_index.unwrap();
        assert!((cs.intervals[k].lo - 0.3125).abs() < 1e-12);
        assert!((cs.intervals[k].hi - 0.6875).abs() < 1e-12);
        let (m3, o3) = orbit(R3);
        let cs3 = capture_intervals(&m3, &o3, CaptureMode::Figure, &OrbitOptions::default()).unwrap();
        let containing = cs3.intervals.iter().filter(|iv| iv.contains_open(0.5)).count();
        assert_eq!(containing, 1);
        // U' of the point beside the maximum of f lies above the range of f^3.
        assert!(matches!(
            capture_intervals(&m3, &o3, CaptureMode::Text, &OrbitOptions::default()),
            Err(Error::NotFound { index: 1, .. })
        ));
    }

    #[test]
    fn flat_quartic_period_two() {
        let quartic = |r| MapFamily::custom(vec![0.0, 8.0, -24.0, 32.0, -16.0], 0.5, (0.0, 1.0), r).unwrap();
        let m = quartic(0.9);
        let o = PeriodicOrbit::find(&m, 16, &OrbitOptions::default()).unwrap().unwrap();
        assert_eq!(o.period, 2);
        let fixed = fixed_points(
            &m,
            ExtremaLadder::build(&m, 2, DEFAULT_TOL_ROOT).unwrap().table(2),
            1e-13,
        )
        .unwrap();
        assert_eq!(fixed.len(), 4);
        for u in &o.saddles {
            assert!((u - 0.793355).abs() < 1e-5);
        }
        capture_intervals(&m, &o, CaptureMode::Figure, &OrbitOptions::default()).unwrap();

        for m in [MapFamily::logistic(0.5).unwrap(), MapFamily::tent(0.9).unwrap()] {
            let o = PeriodicOrbit::find(&m, 16, &OrbitOptions::default()).unwrap().unwrap();
            let cs = capture_intervals(&m, &o, CaptureMode::Figure, &OrbitOptions::default()).unwrap();
            assert_eq!((o.period, cs.measure), (1, 1.0));
        }

        let m = quartic(0.95);
        let o = PeriodicOrbit::find(&m, 16, &OrbitOptions::default()).unwrap().unwrap();
        let cs = capture_intervals(&m, &o, CaptureMode::Figure, &OrbitOptions::default()).unwrap();
        assert!(o.saddles.iter().all(|&u| u > 0.8));
        assert!(cs.measure < 1.0);
    }
}
