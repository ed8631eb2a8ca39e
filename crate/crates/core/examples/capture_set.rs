//! Capture set W_R at one q: pieces by level and case, merged measure.
//!
//! cargo run --example capture_set -- [r] [q]

use orbit_capture::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let r: f64 = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(3.83187405528331556841);
    let q: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(6);
    let map = MapFamily::logistic(r)?;
    let opts = OrbitOptions::default();
    let orbit = PeriodicOrbit::find(&map, 16, &opts)?.expect("stable orbit");
    let captures = capture_intervals(&map, &orbit, CaptureMode::Figure, &opts)?;
    let ladder = ExtremaLadder::build(&map, q, DEFAULT_TOL_ROOT)?;
    let set = assemble_w_r(&map, q, orbit.period, &captures, &ladder, DEFAULT_TOL_ROOT)?;

    for level in (q + 1).saturating_sub(orbit.period)..=q {
        let at: Vec<&CaptureSubinterval> = set.subintervals.iter().filter(|s| s.level == level).collect();
        let critical = at.iter().filter(|s| s.case == CaptureCase::Critical).count();
        println!("level {level:2}: {:4} pieces ({critical} critical)", at.len());
    }
    println!(
        "{} merged intervals, measure {:.10}, P_{q} = {:.10}",
        set.merged.len(),
        set.measure,
        set.probability()
    );
    for iv in set.merged.iter().take(8) {
        println!("  ({:.10}, {:.10})", iv.lo, iv.hi);
    }
    if set.merged.len() > 8 {
        println!("  ...");
    }
    Ok(())
}
