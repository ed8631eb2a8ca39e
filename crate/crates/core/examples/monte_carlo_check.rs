//! Analytic capture probability against Monte Carlo and a dense grid.
//!
//! cargo run --release --example monte_carlo_check -- [r] [q_extra]

use orbit_capture::capture::assemble_w_r;
use orbit_capture::extrema::{ExtremaLadder, DEFAULT_TOL_ROOT};
use orbit_capture::map::MapFamily;
use orbit_capture::oracle::{verify, McConfig};
use orbit_capture::orbit::{capture_intervals, CaptureMode, OrbitOptions, PeriodicOrbit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let r: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3.831874055283316);
    let extra: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(6);

    let map = MapFamily::logistic(r)?;
    let opts = OrbitOptions::default();
    let orbit = PeriodicOrbit::find(&map, 16, &opts)?.ok_or("no stable orbit")?;
    let captures = capture_intervals(&map, &orbit, CaptureMode::Figure, &opts)?;
    let p = orbit.period;
    let ladder = ExtremaLadder::build(&map, p + extra, DEFAULT_TOL_ROOT)?;
    println!("r = {r}  p = {p}");
    println!(" q   analytic     mc           3sigma     symmdiff   bound      pass");
    for q in p..=p + extra {
        let set = assemble_w_r(&map, q, p, &captures, &ladder, DEFAULT_TOL_ROOT)?;
        let v = verify(&map, &set, &captures, &McConfig::new(q), 1_000_000)?;
        println!(
            "{q:2}   {:.8}   {:.8}   {:.2e}   {:.2e}   {:.2e}   {}",
            v.analytic_p, v.mc_estimate, v.mc_halfwidth, v.grid_symmdiff, v.grid_bound, v.pass
        );
    }
    Ok(())
}
