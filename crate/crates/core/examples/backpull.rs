//! Tangent-line back-pull of the critical capture interval against the exact
//! preimage pieces, at the period-6 supercycle.

use orbit_capture::prelude::*;

fn main() -> Result<()> {
    let map = MapFamily::logistic(3.99758311825456726610)?;
    let opts = OrbitOptions::default();
    let orbit = PeriodicOrbit::find(&map, 16, &opts)?.expect("stable orbit");
    let captures = capture_intervals(&map, &orbit, CaptureMode::Figure, &opts)?;
    let q = 8;
    let ladder = ExtremaLadder::build(&map, q, DEFAULT_TOL_ROOT)?;
    let set = assemble_w_r(&map, q, orbit.period, &captures, &ladder, DEFAULT_TOL_ROOT)?;
    let mut pulls: Vec<_> = set.subintervals.iter().filter_map(|s| s.backpull).collect();
    pulls.sort_by(|a, b| b.relative_gap.total_cmp(&a.relative_gap));
    println!("{} back-pulls; largest gaps:", pulls.len());
    for b in pulls.iter().take(10) {
        println!(
            "  depth {}  center {:.8}  |I| {:.3e}  gap {:.4}%  forward {:.4}%{}",
            b.depth,
            b.center,
            b.exact.len(),
            100.0 * b.relative_gap,
            100.0 * b.forward_excess,
            if b.fallback { "  (exact used)" } else { "" }
        );
    }
    Ok(())
}
