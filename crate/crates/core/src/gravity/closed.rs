//! Closed-form metric fields of the two reference families.

use super::{Family, MonodromySpec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFields {
    pub delta: f64,
    pub b: f64,
    pub exp_psi: f64,
}

impl MonodromySpec {
    /// `None` for custom monodromies and off the real domain of the formulas.
    /// The root `r` carries the sign of `v`, which keeps `(v + r) / 2` equal
    /// to `m-(infinity)` on both sides of `v = 0`.
    pub fn closed_form(&self, rho: f64, v: f64) -> Option<ClosedFields> {
        match self.family {
            Family::AiiiEps { eps } => {
                let eps = eps.re;
                let r = (v * v + rho * rho).sqrt().copysign(v);
                let half = 0.5 * (v + r);
                Some(ClosedFields {
                    delta: half / (eps * eps + half * half),
                    b: 2.0 * eps * (v - r),
                    exp_psi: (v + r) / (2.0 * r),
                })
            }
            Family::AiiiCs { c, s } => {
                let disc = v * v - rho * rho;
                if disc <= 0.0 {
                    return None;
                }
                let (c, s) = (c.re, s.re);
                let r = disc.sqrt().copysign(v);
                let half = 0.5 * (v + r);
                Some(ClosedFields {
                    delta: half / (s * s + c * c * half * half),
                    b: -2.0 * c * s * (v - r),
                    exp_psi: (v + r) / (2.0 * r),
                })
            }
            Family::Custom(_) => None,
        }
    }
}
