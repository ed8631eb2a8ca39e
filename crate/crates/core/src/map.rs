//! Unimodal map families, exact iteration and derivative jets of iterates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of grid samples used to validate a map at construction.
pub const VALIDATION_GRID: usize = 10_000;

/// Which closed form a [`MapFamily`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyId {
    /// `r x (1 - x)` on `[0, 1]`.
    Logistic,
    /// `r min(x, 1 - x)` on `[0, 1]`.
    Tent,
    /// `r * sum_k c_k x^k` with a declared critical point.
    Custom,
}

/// Value and first three derivatives of a scalar function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet {
    pub fn identity(x: f64) -> Jet {
        Jet {
            value: x,
            d1: 1.0,
            d2: 0.0,
            d3: 0.0,
        }
    }

    /// Jet of `outer ∘ inner`, where `outer` is the jet of the outer function
    /// evaluated at `inner.value`.
    pub fn compose(outer: Jet, inner: Jet) -> Jet {
        let (h1, h2, h3) = (inner.d1, inner.d2, inner.d3);
        Jet {
            value: outer.value,
            d1: outer.d1 * h1,
            d2: outer.d2 * h1 * h1 + outer.d1 * h2,
            d3: outer.d3 * h1 * h1 * h1 + 3.0 * outer.d2 * h1 * h2 + outer.d1 * h3,
        }
    }
}

/// A one-parameter unimodal map `f(x; r)` on `[a, b]` with its maximum at `C`.
///
/// Instances are validated on a grid when built and are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct MapFamily {
    family: FamilyId,
    r: f64,
    domain: (f64, f64),
    critical: f64,
    /// Ascending polynomial coefficients (custom family only).
    coeffs: Vec<f64>,
}

/// On-disk description of a map.
///
/// ```json
/// {"family": "logistic", "r": 3.2, "domain": [0, 1]}
/// {"family": "custom", "coeffs": [0, 4, -4], "critical": 0.5, "domain": [0, 1]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum MapSpec {
    Logistic {
        r: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    Tent {
        r: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    Custom {
        coeffs: Vec<f64>,
        critical: f64,
        domain: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<f64>,
    },
}

impl MapFamily {
    pub fn logistic(r: f64) -> Result<MapFamily> {
        Self::build(FamilyId::Logistic, r, (0.0, 1.0), 0.5, Vec::new())
    }

    pub fn tent(r: f64) -> Result<MapFamily> {
        Self::build(FamilyId::Tent, r, (0.0, 1.0), 0.5, Vec::new())
    }

    /// Polynomial map `r * sum_k coeffs[k] x^k` on `domain` with maximum at `critical`.
    pub fn custom(coeffs: Vec<f64>, critical: f64, domain: (f64, f64), r: f64) -> Result<MapFamily> {
        if coeffs.is_empty() {
            return Err(Error::InvalidMap("custom map needs at least one coefficient".into()));
        }
        Self::build(FamilyId::Custom, r, domain, critical, coeffs)
    }

    pub fn from_spec(spec: &MapSpec) -> Result<MapFamily> {
        match spec {
            MapSpec::Logistic { r, domain } => {
                let d = domain.map_or((0.0, 1.0), |[a, b]| (a, b));
                Self::build(FamilyId::Logistic, *r, d, 0.5, Vec::new())
            }
            MapSpec::Tent { r, domain } => {
                let d = domain.map_or((0.0, 1.0), |[a, b]| (a, b));
                Self::build(FamilyId::Tent, *r, d, 0.5, Vec::new())
            }
            MapSpec::Custom {
                coeffs,
                critical,
                domain,
                r,
            } => Self::custom(coeffs.clone(), *critical, (domain[0], domain[1]), r.unwrap_or(1.0)),
        }
    }

    pub fn to_spec(&self) -> MapSpec {
        let domain = [self.domain.0, self.domain.1];
        match self.family {
            FamilyId::Logistic => MapSpec::Logistic {
                r: self.r,
                domain: Some(domain),
            },
            FamilyId::Tent => MapSpec::Tent {
                r: self.r,
                domain: Some(domain),
            },
            FamilyId::Custom => MapSpec::Custom {
                coeffs: self.coeffs.clone(),
                critical: self.critical,
                domain,
                r: Some(self.r),
            },
        }
    }

    /// Same family and domain with a different parameter value, re-validated.
    pub fn with_parameter(&self, r: f64) -> Result<MapFamily> {
        Self::build(self.family, r, self.domain, self.critical, self.coeffs.clone())
    }

    /// Same family with a different parameter, skipping validation.
    ///
    /// Used while scanning parameter space, where intermediate values may not
    /// define a valid self-map.
    pub(crate) fn with_parameter_unchecked(&self, r: f64) -> MapFamily {
        MapFamily { r, ..self.clone() }
    }

    fn build(family: FamilyId, r: f64, domain: (f64, f64), critical: f64, coeffs: Vec<f64>) -> Result<MapFamily> {
        let (a, b) = domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidMap(format!("domain [{a}, {b}] is not a proper interval")));
        }
        if !(critical > a && critical < b) {
            return Err(Error::InvalidMap(format!(
                "critical point {critical} not inside ({a}, {b})"
            )));
        }
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::InvalidMap(format!("parameter r = {r} must be positive")));
        }
        match family {
            FamilyId::Logistic if r > 4.0 => {
                return Err(Error::InvalidMap(format!("logistic r = {r} exceeds 4")));
            }
            FamilyId::Tent if r > 2.0 => return Err(Error::InvalidMap(format!("tent r = {r} exceeds 2"))),
            _ => {}
        }
        let map = MapFamily {
            family,
            r,
            domain,
            critical,
            coeffs,
        };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        let slack = 1e-12 * (b - a);
        let step = (b - a) / VALIDATION_GRID as f64;
        let mut prev: Option<(f64, f64)> = None;
        for k in 0..=VALIDATION_GRID {
            let x = if k == VALIDATION_GRID { b } else { a + k as f64 * step };
            let y = self.raw(x);
            if !(y >= a - slack && y <= b + slack) {
                return Err(Error::InvalidMap(format!("f({x}) = {y} leaves [{a}, {b}]")));
            }
            if let Some((px, py)) = prev {
                if px >= self.critical && y >= py && x > self.critical {
                    return Err(Error::InvalidMap(format!(
                        "f is not decreasing on ({}, b] near {x}",
                        self.critical
                    )));
                }
                if x <= self.critical && y <= py {
                    return Err(Error::InvalidMap(format!(
                        "f is not increasing on [a, {}) near {x}",
                        self.critical
                    )));
                }
            }
            prev = Some((x, y));
            if self.is_smooth() && (x - self.critical).abs() > 1e-6 * (b - a) {
                let j = self.raw_jet(x);
                if j.d1.abs() > 1e-12 {
                    let s = schwarzian_of(j);
                    if !(s < 0.0) {
                        return Err(Error::InvalidMap(format!(
                            "Schwarzian derivative {s} is not negative at x = {x}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> FamilyId {
        self.family
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn width(&self) -> f64 {
        self.domain.1 - self.domain.0
    }

    pub fn critical(&self) -> f64 {
        self.critical
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Whether the map has a continuous third derivative everywhere.
    pub fn is_smooth(&self) -> bool {
        self.family != FamilyId::Tent
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.domain.0 && x <= self.domain.1
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain {
                x,
                a: self.domain.0,
                b: self.domain.1,
            })
        }
    }

    /// `f(x)` without a domain check.
    #[inline]
    pub fn raw(&self, x: f64) -> f64 {
        match self.family {
            FamilyId::Logistic => self.r * x * (1.0 - x),
            FamilyId::Tent => self.r * if x < self.critical { x } else { 1.0 - x },
            FamilyId::Custom => self.r * horner(&self.coeffs, x),
        }
    }

    /// Value and derivatives of `f` at `x` without checks. The tent map
    /// reports its left-hand derivative at the kink.
    #[inline]
    pub fn raw_jet(&self, x: f64) -> Jet {
        match self.family {
            FamilyId::Logistic => Jet {
                value: self.r * x * (1.0 - x),
                d1: self.r * (1.0 - 2.0 * x),
                d2: -2.0 * self.r,
                d3: 0.0,
            },
            FamilyId::Tent => Jet {
                value: self.raw(x),
                d1: if x <= self.critical { self.r } else { -self.r },
                d2: 0.0,
                d3: 0.0,
            },
            FamilyId::Custom => {
                let [v, d1, d2, d3] = poly_jet(&self.coeffs, x);
                Jet {
                    value: self.r * v,
                    d1: self.r * d1,
                    d2: self.r * d2,
                    d3: self.r * d3,
                }
            }
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.raw(x))
    }

    /// `f^q(x)`; `q = 0` is the identity.
    pub fn iterate(&self, x: f64, q: usize) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.raw_iterate(x, q))
    }

    #[inline]
    pub fn raw_iterate(&self, mut x: f64, q: usize) -> f64 {
        for _ in 0..q {
            x = self.raw(x);
        }
        x
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        if self.family == FamilyId::Tent && x == self.critical {
            return Err(Error::NotDifferentiable { x });
        }
        Ok(self.raw_jet(x).d1)
    }

    /// `f''' / f' - 3/2 (f'' / f')^2`.
    pub fn schwarzian(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        if self.family == FamilyId::Tent && x == self.critical {
            return Err(Error::NotDifferentiable { x });
        }
        let j = self.raw_jet(x);
        if j.d1 == 0.0 {
            return Err(Error::Singular { x });
        }
        Ok(schwarzian_of(j))
    }

    /// Value and derivatives of `f^q` at `x` by repeated composition.
    pub fn iterate_jet(&self, x: f64, q: usize) -> Result<Jet> {
        self.check_domain(x)?;
        let mut jet = Jet::identity(x);
        for _ in 0..q {
            if self.family == FamilyId::Tent && jet.value == self.critical {
                return Err(Error::NotDifferentiable { x: jet.value });
            }
            jet = Jet::compose(self.raw_jet(jet.value), jet);
        }
        Ok(jet)
    }

    /// Jet of `f^q` at `x` with no checks; tent kinks use left derivatives.
    #[inline]
    pub fn raw_iterate_jet(&self, x: f64, q: usize) -> Jet {
        let mut jet = Jet::identity(x);
        for _ in 0..q {
            jet = Jet::compose(self.raw_jet(jet.value), jet);
        }
        jet
    }

    /// Handle evaluating `f^q`.
    pub fn iterate_handle(&self, q: usize) -> IterateHandle<'_> {
        IterateHandle { map: self, q }
    }
}

/// The `q`-fold composition `f^q` of a map.
#[derive(Debug, Clone, Copy)]
pub struct IterateHandle<'a> {
    pub map: &'a MapFamily,
    pub q: usize,
}

impl IterateHandle<'_> {
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.map.iterate(x, self.q)
    }

    pub fn jet(&self, x: f64) -> Result<Jet> {
        self.map.iterate_jet(x, self.q)
    }
}

fn schwarzian_of(j: Jet) -> f64 {
    let ratio = j.d2 / j.d1;
    j.d3 / j.d1 - 1.5 * ratio * ratio
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Value and first three derivatives of an ascending-coefficient polynomial.
fn poly_jet(coeffs: &[f64], x: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    // Synthetic division, repeated: out[k] accumulates p^(k)(x) / k!.
    for &c in coeffs.iter().rev() {
        out[3] = out[3] * x + out[2];
        out[2] = out[2] * x + out[1];
        out[1] = out[1] * x + out[0];
        out[0] = out[0] * x + c;
    }
    [out[0], out[1], 2.0 * out[2], 6.0 * out[3]]
}
