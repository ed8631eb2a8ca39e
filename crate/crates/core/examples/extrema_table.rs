//! Extrema of f^q built recursively, with counts per q and the table near C.
//!
//! cargo run --example extrema_table -- [r] [q]

use orbit_capture::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let r: f64 = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(3.99758311825456726610);
    let q: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(6);
    let map = MapFamily::logistic(r)?;
    let ladder = ExtremaLadder::build(&map, q, DEFAULT_TOL_ROOT)?;
    for t in ladder.tables().iter().skip(1) {
        println!("q = {:2}: {:5} extrema, {:5} new", t.q, t.entries.len(), t.seeds.len());
    }
    let table = ladder.table(q);
    println!("\nf^{q} extrema with 0.40 < x < 0.60:");
    for e in table.entries.iter().filter(|e| e.x > 0.4 && e.x < 0.6) {
        println!("  x = {:.6}  y = {:.6}  {:?}  depth {}", e.x, e.y, e.kind, e.depth);
    }
    Ok(())
}
