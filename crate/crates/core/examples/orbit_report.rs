//! Stable orbit, saddle partners, companions and capture intervals for one r.
//!
//! cargo run --example orbit_report -- 3.2

use orbit_capture::prelude::*;

fn main() -> Result<()> {
    let r: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3.2);
    let map = MapFamily::logistic(r)?;
    let opts = OrbitOptions::default();
    let Some(orbit) = PeriodicOrbit::find(&map, 16, &opts)? else {
        println!("r = {r}: no stable orbit of period <= 16");
        return Ok(());
    };
    let captures = capture_intervals(&map, &orbit, CaptureMode::Figure, &opts)?;
    println!("r = {r}  period {}  multiplier {:.3e}", orbit.period, orbit.multiplier);
    println!("  i   S_i            U_i            U_i'           |I_Pi|");
    for i in 0..orbit.period {
        let mark = if captures.critical_index == Some(i) {
            " <- C"
        } else {
            ""
        };
        println!(
            "{i:3}   {:.10}   {:.10}   {:.10}   {:.3e}{mark}",
            orbit.points[i],
            orbit.saddles[i],
            orbit.companions[i],
            captures.intervals[i].len()
        );
    }
    println!("measure of I_P: {:.6e}", captures.measure);
    Ok(())
}
