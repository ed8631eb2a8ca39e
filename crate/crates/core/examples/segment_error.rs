//! Chord model of f^q between extrema: seed quality for f^q(x) = C and the
//! cubic error bound on each segment.
//!
//! cargo run --release --example segment_error

use orbit_capture::extrema::{chord_deviation, seed_errors, segment_error_bound};
use orbit_capture::prelude::*;

fn main() -> Result<()> {
    let map = MapFamily::logistic(3.99758311825456726610)?;
    let ladder = ExtremaLadder::build(&map, 10, DEFAULT_TOL_ROOT)?;
    println!(" q   segments  worst E_rel  interior  nearest C");
    for q in 6..=10 {
        let model = ladder.table(q).segment_model(&map);
        let seeds = seed_errors(&map, &model, map.critical(), DEFAULT_TOL_ROOT)?;
        let worst = seeds.iter().map(|s| s.relative_error()).fold(0.0, f64::max);
        let interior = seeds
            .iter()
            .filter(|s| !s.boundary)
            .map(|s| s.relative_error())
            .fold(0.0, f64::max);
        let near = seeds
            .iter()
            .min_by(|a, b| (a.root - 0.5).abs().total_cmp(&(b.root - 0.5).abs()))
            .map_or(f64::NAN, |s| s.relative_error());
        println!(
            "{q:2}   {:8}  {:10.4}%  {:7.4}%  {:8.5}%",
            model.segments.len(),
            100.0 * worst,
            100.0 * interior,
            100.0 * near
        );
    }

    let model = ladder.table(6).segment_model(&map);
    let mut crossing: Vec<_> = model.segments.iter().filter(|s| s.spans(map.critical())).collect();
    crossing.sort_by(|a, b| (a.x_l - 0.5).abs().total_cmp(&(b.x_l - 0.5).abs()));
    crossing.truncate(6);
    crossing.sort_by(|a, b| a.x_l.total_cmp(&b.x_l));
    println!("\nf^6 segments crossing C nearest x = 0.5: chord deviation vs bound");
    for seg in crossing {
        let dev = chord_deviation(&map, 6, seg, 400);
        match segment_error_bound(&map, 6, seg) {
            Ok(b) => println!(
                "  [{:.4}, {:.4}] slope {:8.3}  dev {:.3e}  bound {:.3e}",
                seg.x_l,
                seg.x_r,
                seg.slope(),
                dev,
                b.bound
            ),
            Err(e) => println!(
                "  [{:.4}, {:.4}] slope {:8.3}  dev {:.3e}  ({e})",
                seg.x_l,
                seg.x_r,
                seg.slope(),
                dev
            ),
        }
    }
    Ok(())
}
