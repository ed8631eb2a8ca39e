//! A polynomial unimodal map from a JSON description: the quartic
//! 1 - (2x - 1)^4 scaled by r.

use orbit_capture::prelude::*;

fn main() -> std::result::Result<(), Box<dyn std::error::Error>> {
    let spec: MapSpec = serde_json::from_str(
        r#"{"family": "custom", "coeffs": [0, 8, -24, 32, -16], "critical": 0.5, "domain": [0, 1], "r": 0.9}"#,
    )?;
    let map = MapFamily::from_spec(&spec)?;
    println!(
        "f(0.25) = {:.6}, S f(0.1) = {:.4}",
        map.eval(0.25)?,
        map.schwarzian(0.1)?
    );

    let opts = OrbitOptions::default();
    for r in [0.6, 0.8, 0.9, 0.95] {
        let m = map.with_parameter(r)?;
        match PeriodicOrbit::find(&m, 16, &opts)? {
            Some(o) => {
                let cs = capture_intervals(&m, &o, CaptureMode::Figure, &opts)?;
                let ladder = ExtremaLadder::build(&m, o.period + 4, DEFAULT_TOL_ROOT)?;
                let w = assemble_w_r(&m, o.period + 4, o.period, &cs, &ladder, DEFAULT_TOL_ROOT)?;
                println!(
                    "r = {r}: period {}, |I_P| = {:.4e}, P_{} = {:.6}",
                    o.period,
                    cs.measure,
                    o.period + 4,
                    w.probability()
                );
            }
            None => println!("r = {r}: no stable orbit found"),
        }
    }
    Ok(())
}
