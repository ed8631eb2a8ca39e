//! The tent map is piecewise linear: the chord model is exact and the
//! smooth-only error bound is refused.

use orbit_capture::extrema::segment_error_bound;
use orbit_capture::prelude::*;

fn main() -> Result<()> {
    let map = MapFamily::tent(1.9)?;
    let ladder = ExtremaLadder::build(&map, 5, DEFAULT_TOL_ROOT)?;
    let table = ladder.table(5);
    println!("tent r = 1.9, f^5 has {} extrema", table.entries.len());
    let model = table.segment_model(&map);
    let seg = &model.segments[1];
    let mid = 0.5 * (seg.x_l + seg.x_r);
    println!(
        "chord vs f^5 at segment midpoint: {:.3e}",
        (seg.eval(mid) - map.raw_iterate(mid, 5)).abs()
    );
    if let Err(e) = segment_error_bound(&map, 5, seg) {
        println!("error bound: {e}");
    }
    println!("derivative at C: {:?}", map.derivative(0.5));
    Ok(())
}
