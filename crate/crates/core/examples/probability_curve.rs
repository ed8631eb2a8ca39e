//! P_q and the exact-q probability P_q - P_{q-1} over a range of q.

use orbit_capture::prelude::*;

fn main() -> Result<()> {
    let r: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3.99758311825456726610);
    let q_max = 14;
    let map = MapFamily::logistic(r)?;
    let opts = OrbitOptions::default();
    let orbit = PeriodicOrbit::find(&map, 16, &opts)?.expect("stable orbit");
    let captures = capture_intervals(&map, &orbit, CaptureMode::Figure, &opts)?;
    let ladder = ExtremaLadder::build(&map, q_max, DEFAULT_TOL_ROOT)?;
    println!("q,P_q,P_exact_q");
    for q in 0..=q_max {
        let (_, report) = probability_with_exact(&map, q, orbit.period, &captures, &ladder, DEFAULT_TOL_ROOT)?;
        println!("{q},{:.12},{:.12}", report.p_q, report.p_exact_q.unwrap_or(f64::NAN));
    }
    Ok(())
}
