//! Bifurcation diagram data (r, x) for the logistic family as CSV on stdout.
//!
//! cargo run --release --example bifurcation > bifurcation.csv

use orbit_capture::cli::{attractor_samples, parameter_grid};
use orbit_capture::prelude::*;

fn main() -> Result<()> {
    let base = MapFamily::logistic(2.8)?;
    println!("r,x");
    for r in parameter_grid(2.8, 4.0, 600) {
        let map = base.with_parameter(r)?;
        for x in attractor_samples(&map, 2_000, 100) {
            println!("{r:.6},{x:.8}");
        }
    }
    Ok(())
}
