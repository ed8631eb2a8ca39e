//! Superstable parameters of the logistic family for small periods.

use orbit_capture::prelude::*;

fn main() -> Result<()> {
    let template = MapFamily::logistic(3.5)?;
    // Brackets around the first superstable p-cycle in each window.
    let brackets = [
        (1, 1.9, 2.1),
        (2, 3.2, 3.3),
        (4, 3.49, 3.5),
        (3, 3.8, 3.86),
        (5, 3.73, 3.74),
        (6, 3.9975, 3.9977),
    ];
    for (p, lo, hi) in brackets {
        match find_supercycle_parameter(&template, p, lo, hi) {
            Ok(s) => println!("p = {p}: r = {:.17}  residual {:+.1e}", s.r, s.residual),
            Err(e) => println!("p = {p}: {e}"),
        }
    }
    Ok(())
}
