//! Brute-force checks: Monte Carlo capture probability, dense-grid
//! reconstruction of the capture set and dense-grid extrema.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::capture::{first_entry, CaptureSet};
use crate::error::{Error, Result};
use crate::interval::{symmetric_difference, Interval};
use crate::map::{FamilyId, MapFamily};
use crate::orbit::CaptureIntervalSet;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const MIN_SAMPLES: usize = 1_000;
pub const MIN_RESOLUTION: usize = 100_000;
/// Samples per RNG stream; fixes the chunk plan and therefore the result.
pub const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_samples: usize,
    pub rng_seed: u64,
    pub q: usize,
    /// Outward widening of each capture interval in the entry test.
    pub cushion: f64,
}

impl McConfig {
    pub fn new(q: usize) -> McConfig {
        McConfig {
            n_samples: DEFAULT_SAMPLES,
            rng_seed: DEFAULT_SEED,
            q,
            cushion: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    /// Three binomial standard errors.
    pub halfwidth: f64,
    pub hits: usize,
    pub n: usize,
}

/// Fraction of uniform samples whose orbit enters a capture interval within `q` steps.
///
/// Chunk `k` draws from ChaCha8 stream `k` of the seed, so the estimate does
/// not depend on the thread schedule.
pub fn mc_capture_probability(map: &MapFamily, captures: &CaptureIntervalSet, cfg: &McConfig) -> Result<McEstimate> {
    if cfg.n_samples < MIN_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "n_samples = {} is below {MIN_SAMPLES}",
            cfg.n_samples
        )));
    }
    let (a, b) = map.domain();
    let chunks = cfg.n_samples.div_ceil(CHUNK);
    let hits: usize = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(k as u64);
            let n = CHUNK.min(cfg.n_samples - k * CHUNK);
            (0..n)
                .filter(|_| {
                    let x = a + (b - a) * rng.random::<f64>();
                    first_entry(map, captures, x, cfg.q, cfg.cushion).is_some()
                })
                .count()
        })
        .sum();
    let n = cfg.n_samples;
    let p = hits as f64 / n as f64;
    Ok(McEstimate {
        estimate: p,
        halfwidth: 3.0 * (p * (1.0 - p) / n as f64).sqrt(),
        hits,
        n,
    })
}

/// Cell-based reconstruction of the capture set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCaptureSet {
    pub resolution: usize,
    /// Maximal runs of captured cells, as intervals of cell edges.
    pub intervals: Vec<Interval>,
    pub captured: usize,
}

impl GridCaptureSet {
    /// Symmetric-difference allowance against an exact union of `count` intervals.
    pub fn error_bound(&self, width: f64, count: usize) -> f64 {
        2.0 * width * count.max(self.intervals.len()) as f64 / self.resolution as f64 + 1e-6
    }
}

/// Classify cell midpoints by whether they reach a capture interval within `q` steps.
pub fn grid_capture_set(
    map: &MapFamily,
    q: usize,
    captures: &CaptureIntervalSet,
    resolution: usize,
) -> Result<GridCaptureSet> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidConfig(format!(
            "grid resolution {resolution} is below {MIN_RESOLUTION}"
        )));
    }
    let (a, b) = map.domain();
    let h = (b - a) / resolution as f64;
    let hit: Vec<bool> = (0..resolution)
        .into_par_iter()
        .map(|k| first_entry(map, captures, a + (k as f64 + 0.5) * h, q, 0.0).is_some())
        .collect();
    let mut intervals = Vec::new();
    let mut start = None;
    for (k, &c) in hit.iter().enumerate() {
        match (c, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                intervals.push(Interval::new(a + s as f64 * h, a + k as f64 * h));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        intervals.push(Interval::new(a + s as f64 * h, b));
    }
    Ok(GridCaptureSet {
        resolution,
        intervals,
        captured: hit.iter().filter(|&&c| c).count(),
    })
}

/// Value of `f(x) / r` and its derivative, in double-double arithmetic.
fn shape_extended(map: &MapFamily, x: TwoFloat) -> (TwoFloat, TwoFloat) {
    match map.family() {
        FamilyId::Logistic => (x * (1.0 - x), 1.0 - x * 2.0),
        FamilyId::Tent => {
            if x < map.critical() {
                (x, TwoFloat::from(1.0))
            } else {
                (1.0 - x, TwoFloat::from(-1.0))
            }
        }
        FamilyId::Custom => {
            let mut v = TwoFloat::from(0.0);
            let mut d = TwoFloat::from(0.0);
            for &c in map.coeffs().iter().rev() {
                d = d * x + v;
                v = v * x + c;
            }
            (v, d)
        }
    }
}

/// The parameter of a superstable `p`-cycle near `map.r()`, refined in
/// double-double by Newton's method on `f^p(C; r) = C`.
pub fn supercycle_parameter_extended(map: &MapFamily, p: usize) -> TwoFloat {
    let c = map.critical();
    let mut r = TwoFloat::from(map.r());
    for _ in 0..20 {
        let mut y = TwoFloat::from(c);
        let mut dy = TwoFloat::from(0.0);
        for _ in 0..p {
            let (v, d) = shape_extended(map, y);
            dy = v + r * d * dy;
            y = r * v;
        }
        let g = y - c;
        if g == TwoFloat::from(0.0) || dy == TwoFloat::from(0.0) {
            break;
        }
        let step = g / dy;
        r -= step;
        if step.abs() <= TwoFloat::from(1e-31) * r.abs() {
            break;
        }
    }
    r
}

/// Sign of `(f^q)'(x)` from the chain rule, `prod sign(C - f^k(x))`, with the
/// orbit carried in double-double so that deep factors near supercycles keep
/// their sign.
fn derivative_sign(map: &MapFamily, r: TwoFloat, x: f64, q: usize) -> i8 {
    let c = map.critical();
    let mut y = TwoFloat::from(x);
    let mut sign = 1i8;
    for _ in 0..q {
        if y > c {
            sign = -sign;
        } else if y == TwoFloat::from(c) {
            return 0;
        }
        y = r * shape_extended(map, y).0;
    }
    sign
}

/// Approximate extrema of `f^q`: edges between adjacent cell centres where
/// the derivative changes sign.
pub fn grid_extrema(map: &MapFamily, q: usize, resolution: usize) -> Vec<f64> {
    grid_extrema_at(map, TwoFloat::from(map.r()), q, resolution)
}

/// As [`grid_extrema`], with the parameter given in double-double.
pub fn grid_extrema_at(map: &MapFamily, r: TwoFloat, q: usize, resolution: usize) -> Vec<f64> {
    let (a, b) = map.domain();
    let h = (b - a) / resolution as f64;
    let signs: Vec<i8> = (0..resolution)
        .into_par_iter()
        .map(|k| derivative_sign(map, r, a + (k as f64 + 0.5) * h, q))
        .collect();
    signs
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] * w[1] < 0)
        .map(|(k, _)| a + (k + 1) as f64 * h)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub q: usize,
    pub analytic_p: f64,
    pub mc_estimate: f64,
    pub mc_halfwidth: f64,
    pub grid_symmdiff: f64,
    pub grid_bound: f64,
    pub pass: bool,
}

/// Compare an analytic capture set with both oracles.
pub fn verify(
    map: &MapFamily,
    set: &CaptureSet,
    captures: &CaptureIntervalSet,
    cfg: &McConfig,
    resolution: usize,
) -> Result<VerificationReport> {
    let cfg = McConfig { q: set.q, ..*cfg };
    let mc = mc_capture_probability(map, captures, &cfg)?;
    let grid = grid_capture_set(map, set.q, captures, resolution)?;
    let symmdiff = symmetric_difference(&grid.intervals, &set.merged);
    let bound = grid.error_bound(map.width(), set.merged.len());
    let analytic = set.probability();
    let pass = (analytic - mc.estimate).abs() <= mc.halfwidth && symmdiff <= bound;
    Ok(VerificationReport {
        q: set.q,
        analytic_p: analytic,
        mc_estimate: mc.estimate,
        mc_halfwidth: mc.halfwidth,
        grid_symmdiff: symmdiff,
        grid_bound: bound,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::CaptureMode;

    fn whole(m: &MapFamily) -> CaptureIntervalSet {
        let (a, b) = m.domain();
        CaptureIntervalSet {
            intervals: vec![Interval::new(a - 1.0, b + 1.0)],
            critical_index: Some(0),
            measure: b - a,
            mode: CaptureMode::Figure,
        }
    }

    #[test]
    fn whole_domain_is_always_captured() {
        let m = MapFamily::logistic(3.9).unwrap();
        let est = mc_capture_probability(
            &m,
            &whole(&m),
            &McConfig {
                n_samples: 5_000,
                ..McConfig::new(3)
            },
        )
        .unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.halfwidth, 0.0);
    }

    #[test]
    fn zero_steps_measures_the_intervals() {
        let m = MapFamily::logistic(3.9).unwrap();
        let cs = CaptureIntervalSet {
            intervals: vec![Interval::new(0.2, 0.45)],
            critical_index: None,
            measure: 0.25,
            mode: CaptureMode::Figure,
        };
        let est = mc_capture_probability(
            &m,
            &cs,
            &McConfig {
                n_samples: 200_000,
                ..McConfig::new(0)
            },
        )
        .unwrap();
        assert!((est.estimate - 0.25).abs() <= est.halfwidth);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let m = MapFamily::logistic(3.7).unwrap();
        let cs = CaptureIntervalSet {
            intervals: vec![Interval::new(0.4, 0.6)],
            critical_index: Some(0),
            measure: 0.2,
            mode: CaptureMode::Figure,
        };
        let cfg = McConfig {
            n_samples: 50_000,
            ..McConfig::new(4)
        };
        let a = mc_capture_probability(&m, &cs, &cfg).unwrap();
        let b = mc_capture_probability(&m, &cs, &cfg).unwrap();
        assert_eq!(a, b);
        let c = mc_capture_probability(&m, &cs, &McConfig { rng_seed: 7, ..cfg }).unwrap();
        assert_ne!(a.hits, c.hits);
    }

    #[test]
    fn config_checks() {
        let m = MapFamily::logistic(3.7).unwrap();
        let cs = whole(&m);
        assert!(mc_capture_probability(
            &m,
            &cs,
            &McConfig {
                n_samples: 10,
                ..McConfig::new(1)
            }
        )
        .is_err());
        assert!(grid_capture_set(&m, 1, &cs, 10).is_err());
    }

    #[test]
    fn empty_capture_set_gives_empty_grid() {
        let m = MapFamily::logistic(3.7).unwrap();
        let cs = CaptureIntervalSet {
            intervals: vec![],
            critical_index: None,
            measure: 0.0,
            mode: CaptureMode::Figure,
        };
        let g = grid_capture_set(&m, 5, &cs, MIN_RESOLUTION).unwrap();
        assert!(g.intervals.is_empty());
    }

    #[test]
    fn extended_supercycle_parameter() {
        let m = MapFamily::logistic(3.8318740552833).unwrap();
        let r = supercycle_parameter_extended(&m, 3);
        assert!((r.hi() - 3.83187405528331556841).abs() < 1e-15);
        let m2 = MapFamily::logistic(2.01).unwrap();
        assert_eq!(supercycle_parameter_extended(&m2, 1), TwoFloat::from(2.0));
    }

    #[test]
    fn grid_extrema_count_at_full_logistic() {
        let m = MapFamily::logistic(4.0).unwrap();
        assert_eq!(grid_extrema(&m, 3, 100_000).len(), 7);
    }
}
