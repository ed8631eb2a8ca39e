//! Acceptance criteria 1-7. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use twofloat::TwoFloat;

use orbit_capture::capture::{assemble_w_r, first_entry, linearized_backpull};
use orbit_capture::extrema::{seed_errors, ExtremaLadder, ExtremumKind, DEFAULT_TOL_ROOT};
use orbit_capture::interval::{symmetric_difference, Interval};
use orbit_capture::map::MapFamily;
use orbit_capture::oracle::{
    grid_capture_set, grid_extrema_at, mc_capture_probability, supercycle_parameter_extended, McConfig,
};
use orbit_capture::orbit::{
    capture_intervals, find_supercycle_parameter, CaptureIntervalSet, CaptureMode, OrbitOptions, PeriodicOrbit,
};

const R3: f64 = 3.83187405528331556841;
const R6: f64 = 3.99758311825456726610;
const TOL: f64 = DEFAULT_TOL_ROOT;

struct Outcome {
    pass: bool,
    detail: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            pass: true,
            detail: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: String) {
        self.pass &= ok;
        self.detail.push(format!("{what} [{}]", if ok { "ok" } else { "FAIL" }));
    }
}

fn setup(r: f64) -> (MapFamily, PeriodicOrbit, CaptureIntervalSet) {
    let map = MapFamily::logistic(r).unwrap();
    let opts = OrbitOptions::default();
    let orbit = PeriodicOrbit::find(&map, 16, &opts).unwrap().unwrap();
    let captures = capture_intervals(&map, &orbit, CaptureMode::Figure, &opts).unwrap();
    (map, orbit, captures)
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let template = MapFamily::logistic(3.5).unwrap();
    for (p, lo, hi, want) in [(3, 3.8, 3.86, R3), (6, 3.9975, 3.9977, R6)] {
        match find_supercycle_parameter(&template, p, lo, hi) {
            Ok(s) => {
                out.check(
                    (s.r - want).abs() <= 1e-11 && s.residual.abs() <= 1e-13,
                    format!(
                        "p={p} r={:.17} |dr|={:.1e} residual={:.1e}",
                        s.r,
                        (s.r - want).abs(),
                        s.residual.abs()
                    ),
                );
            }
            Err(e) => out.check(false, format!("p={p}: {e}")),
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let map = MapFamily::logistic(R6).unwrap();
    let ladder = ExtremaLadder::build(&map, 6, TOL).unwrap();
    let table = ladder.table(6);
    let e = &table.entries;
    let Some(k) = (0..e.len().saturating_sub(1)).find(|&k| {
        (e[k].x - 0.4525).abs() <= 1e-3
            && (e[k].y - 0.002414).abs() <= 1e-3
            && (e[k + 1].x - 0.4787).abs() <= 1e-3
            && (e[k + 1].y - 0.9994).abs() <= 1e-3
    }) else {
        out.check(
            false,
            "consecutive extrema near (0.4525, 0.002414), (0.4787, 0.9994)".into(),
        );
        return out;
    };
    out.check(
        true,
        format!(
            "extrema ({:.5}, {:.6}) ({:.5}, {:.5})",
            e[k].x,
            e[k].y,
            e[k + 1].x,
            e[k + 1].y
        ),
    );
    let model = table.segment_model(&map);
    let seg = model.segments[k + 1];
    out.check((seg.slope() - 38.053).abs() <= 0.5, format!("slope {:.3}", seg.slope()));
    let seeds = seed_errors(&map, &model, map.critical(), TOL).unwrap();
    let here = seeds.iter().find(|s| s.segment == k + 1).expect("segment crosses C");
    out.check(
        (here.seed - 0.453).abs() <= 0.002,
        format!("seed {:.5} (0.453 +- 0.002)", here.seed),
    );
    out.check((here.root - 0.465).abs() <= 0.002, format!("root {:.5}", here.root));
    let e_rel = 100.0 * here.relative_error();
    out.check((e_rel - 2.58).abs() <= 0.3, format!("E_rel {e_rel:.4}% (2.58 +- 0.3)"));
    let worst = seeds.iter().map(|s| 100.0 * s.relative_error()).fold(0.0, f64::max);
    out.check(e_rel >= worst, format!("max over segments {worst:.2}%"));
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let map = MapFamily::logistic(R6).unwrap();
    let ladder = ExtremaLadder::build(&map, 10, TOL).unwrap();
    for m in 1..=4u32 {
        let q = 6 + m as usize;
        let model = ladder.table(q).segment_model(&map);
        let seeds = seed_errors(&map, &model, map.critical(), TOL).unwrap();
        let worst = seeds.iter().map(|s| 100.0 * s.relative_error()).fold(0.0, f64::max);
        let allowed = 1.2 * 2.58 / 2f64.powi(m as i32);
        let interior = seeds
            .iter()
            .filter(|s| !s.boundary)
            .map(|s| 100.0 * s.relative_error())
            .fold(0.0, f64::max);
        let central = seeds
            .iter()
            .min_by(|a, b| (a.root - 0.5).abs().total_cmp(&(b.root - 0.5).abs()))
            .map_or(f64::NAN, |s| 100.0 * s.relative_error());
        out.check(
            worst <= allowed,
            format!("m={m} worst {worst:.3}% <= {allowed:.3}% (interior {interior:.3}%, nearest C {central:.4}%)"),
        );
    }
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let (map, orbit, captures) = setup(R3);
    let ladder = ExtremaLadder::build(&map, 9, TOL).unwrap();
    let mut prev = assemble_w_r(&map, 2, orbit.period, &captures, &ladder, TOL)
        .unwrap()
        .probability();
    let mut worst_sigma: f64 = 0.0;
    let mut monotone = true;
    let mut min_exact = f64::INFINITY;
    let mut all_in = true;
    for q in 3..=9 {
        let p_q = assemble_w_r(&map, q, orbit.period, &captures, &ladder, TOL)
            .unwrap()
            .probability();
        let mc = mc_capture_probability(&map, &captures, &McConfig::new(q)).unwrap();
        let sigma = mc.halfwidth / 3.0;
        worst_sigma = worst_sigma.max((p_q - mc.estimate).abs() / sigma);
        all_in &= (p_q - mc.estimate).abs() <= mc.halfwidth;
        monotone &= p_q >= prev;
        min_exact = min_exact.min(p_q - prev);
        prev = p_q;
    }
    out.check(all_in, format!("worst |P - MC| = {worst_sigma:.2} sigma"));
    out.check(monotone, "P_q non-decreasing".into());
    out.check(min_exact >= -1e-9, format!("min P_exact {min_exact:.3e}"));
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    for (r, q) in [(R3, 6), (R3, 9), (R6, 8)] {
        let (map, orbit, captures) = setup(r);
        let ladder = ExtremaLadder::build(&map, q, TOL).unwrap();
        let set = assemble_w_r(&map, q, orbit.period, &captures, &ladder, TOL).unwrap();
        let mut missed = 0;
        for iv in &set.merged {
            for k in 1..=100 {
                let x = iv.lo + iv.len() * k as f64 / 101.0;
                if first_entry(&map, &captures, x, q, TOL).is_none() {
                    missed += 1;
                }
            }
        }
        let grid = grid_capture_set(&map, q, &captures, 1_000_000).unwrap();
        let sd = symmetric_difference(&grid.intervals, &set.merged);
        let bound = 2.0 * map.width() * set.merged.len() as f64 / 1e6 + 1e-6;
        out.check(
            missed == 0 && sd <= bound,
            format!(
                "p={} q={q}: {} intervals, {missed} missed samples, symmdiff {sd:.2e} <= {bound:.2e}",
                orbit.period,
                set.merged.len()
            ),
        );
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let resolution = 1_000_000;
    for (r, p) in [(R3, Some(3)), (R6, Some(6)), (3.7, None)] {
        let map = MapFamily::logistic(r).unwrap();
        let ladder = ExtremaLadder::build(&map, 8, TOL).unwrap();
        let h = map.width() / resolution as f64;
        let mut ok = true;
        let mut worst_loc: f64 = 0.0;
        let mut worst_ord: f64 = 0.0;
        for q in 1..=8 {
            let table = ladder.table(q);
            let r_grid = match p {
                Some(p) => supercycle_parameter_extended(&map, p),
                None => TwoFloat::from(r),
            };
            let grid = grid_extrema_at(&map, r_grid, q, resolution);
            if grid.len() != table.entries.len() {
                ok = false;
                out.detail.push(format!(
                    "r={r} q={q}: grid {} vs table {}",
                    grid.len(),
                    table.entries.len()
                ));
                continue;
            }
            for (g, e) in grid.iter().zip(&table.entries) {
                worst_loc = worst_loc.max((g - e.x).abs());
            }
            if let Some(p) = p {
                worst_ord = worst_ord.max(table.ordinate_deviation(&map, p));
            }
            for w in table.entries.windows(2) {
                ok &= w[0].kind != w[1].kind;
            }
            ok &= table.entries.iter().any(|e| e.kind == ExtremumKind::Max);
        }
        ok &= worst_loc <= h && worst_ord <= 1e-9;
        out.check(
            ok,
            format!("r={r}: location {worst_loc:.1e} <= {h:.0e}, ordinate {worst_ord:.1e}"),
        );
    }
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let (map, orbit, captures) = setup(R6);
    let ladder = ExtremaLadder::build(&map, 8, TOL).unwrap();
    let set = assemble_w_r(&map, 8, orbit.period, &captures, &ladder, TOL).unwrap();
    let critical = captures.critical_interval().unwrap();
    let domain = Interval::new(map.domain().0, map.domain().1);
    let (mut count, mut worst_gap, mut worst_fwd) = (0, 0.0f64, 0.0f64);
    let mut ok = true;
    for b in set.subintervals.iter().filter_map(|s| s.backpull) {
        count += 1;
        match linearized_backpull(&map, b.center, b.depth, critical, domain) {
            Ok(lin) => {
                let gap = (lin.lo - b.exact.lo).abs().max((lin.hi - b.exact.hi).abs()) / b.exact.len();
                let fwd = [lin.lo, lin.hi]
                    .iter()
                    .map(|&x| critical.distance(map.raw_iterate(x, b.depth)) / critical.len())
                    .fold(0.0, f64::max);
                worst_gap = worst_gap.max(gap);
                worst_fwd = worst_fwd.max(fwd);
            }
            Err(e) => {
                ok = false;
                out.detail.push(format!("depth {}: {e}", b.depth));
            }
        }
    }
    ok &= count > 0 && worst_gap <= 0.10 && worst_fwd <= 0.05;
    out.check(
        ok,
        format!(
            "{count} back-pulls, worst gap {:.3}% <= 10%, worst forward {:.3}% <= 5%",
            100.0 * worst_gap,
            100.0 * worst_fwd
        ),
    );
    out
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("supercycle parameters", criterion_1),
        ("numerical example", criterion_2),
        ("seed error decay", criterion_3),
        ("probability vs Monte Carlo", criterion_4),
        ("capture set soundness", criterion_5),
        ("extrema lemmas", criterion_6),
        ("back-pull gate", criterion_7),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} {:<28} {} ({:.1}s): {}",
            n + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail.join("; ")
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
