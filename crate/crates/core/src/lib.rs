//! Capture intervals, capture sets and capture probabilities for stable
//! periodic orbits of unimodal maps of an interval.
//!
//! The pipeline runs from a [`map::MapFamily`] to its attracting cycle
//! ([`orbit`]), the extrema of the iterates ([`extrema`]), the set of points
//! captured within `q` steps ([`capture`]) and independent brute-force checks
//! ([`oracle`]).
//!
//! ```
//! use orbit_capture::prelude::*;
//!
//! let map = MapFamily::logistic(3.2).unwrap();
//! let opts = OrbitOptions::default();
//! let orbit = PeriodicOrbit::find(&map, 16, &opts).unwrap().unwrap();
//! assert_eq!(orbit.period, 2);
//! let captures = capture_intervals(&map, &orbit, CaptureMode::Figure, &opts).unwrap();
//! let ladder = ExtremaLadder::build(&map, 4, DEFAULT_TOL_ROOT).unwrap();
//! let w = assemble_w_r(&map, 4, orbit.period, &captures, &ladder, DEFAULT_TOL_ROOT).unwrap();
//! assert!(w.probability() > 0.99);
//! ```

pub mod capture;
pub mod cli;
pub mod error;
pub mod extrema;
pub mod interval;
pub mod map;
pub mod oracle;
pub mod orbit;
pub mod roots;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::capture::{
        assemble_w_r, probability, probability_with_exact, CaptureCase, CaptureSet, CaptureSubinterval,
    };
    pub use crate::error::{Error, Result};
    pub use crate::extrema::{ExtremaLadder, ExtremaTable, Extremum, ExtremumKind, DEFAULT_TOL_ROOT};
    pub use crate::interval::Interval;
    pub use crate::map::{MapFamily, MapSpec};
    pub use crate::oracle::{grid_capture_set, mc_capture_probability, McConfig};
    pub use crate::orbit::{
        capture_intervals, find_stable_orbit, find_supercycle_parameter, CaptureIntervalSet, CaptureMode, OrbitOptions,
        PeriodicOrbit,
    };
}
