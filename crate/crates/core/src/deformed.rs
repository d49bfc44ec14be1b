//! Deformed logarithm and exponential from nonextensive statistics.
//!
//! `ln_p(y) = (y^p - 1)/p` and `e_p(z) = (1 + p·z)^(1/p)` are mutual
//! inverses. Both are evaluated through `exp_m1`/`ln_1p` so that small
//! indices and arguments near the tangency point keep full precision, and
//! `p = 0` yields the ordinary `ln`/`exp`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A probability used as the deformation index of `ln_p` and `e_p`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct DeformationIndex(f64);

impl DeformationIndex {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(DeformationIndex(p))
        } else {
            Err(Error::domain(format!("deformation index p = {p} is outside [0, 1]")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// True when `0 < p < 1`.
    pub fn is_interior(self) -> bool {
        self.0 > 0.0 && self.0 < 1.0
    }
}

impl TryFrom<f64> for DeformationIndex {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        DeformationIndex::new(p)
    }
}

impl From<DeformationIndex> for f64 {
    fn from(p: DeformationIndex) -> f64 {
        p.0
    }
}

/// Deformed logarithm `(y^p - 1)/p`, natural log at `p = 0`.
pub fn ln_p(p: DeformationIndex, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain(format!("ln_p requires y > 0, got {y}")));
    }
    let p = p.get();
    let ln_y = y.ln();
    if p == 0.0 {
        Ok(ln_y)
    } else {
        Ok((p * ln_y).exp_m1() / p)
    }
}

/// Deformed exponential `(1 + p·z)^(1/p)`, natural exp at `p = 0`.
///
/// Returns exactly 0 on the boundary `1 + p·z = 0`.
pub fn exp_p(p: DeformationIndex, z: f64) -> Result<f64> {
    let p = p.get();
    if p == 0.0 {
        return Ok(z.exp());
    }
    let pz = p * z;
    if pz.is_nan() || pz < -1.0 {
        return Err(Error::domain(format!(
            "exp_p requires 1 + p·z >= 0, got p = {p}, z = {z}"
        )));
    }
    if pz == -1.0 {
        return Ok(0.0);
    }
    Ok((pz.ln_1p() / p).exp())
}

/// `e_p(z) - 1` without cancellation near `z = 0`.
pub(crate) fn exp_p_m1(p: DeformationIndex, z: f64) -> Result<f64> {
    let p = p.get();
    if p == 0.0 {
        return Ok(z.exp_m1());
    }
    let pz = p * z;
    if pz.is_nan() || pz < -1.0 {
        return Err(Error::domain(format!(
            "exp_p requires 1 + p·z >= 0, got p = {p}, z = {z}"
        )));
    }
    if pz == -1.0 {
        return Ok(-1.0);
    }
    Ok((pz.ln_1p() / p).exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn idx(p: f64) -> DeformationIndex {
        DeformationIndex::new(p).unwrap()
    }

    #[test]
    fn index_rejects_outside_unit_interval() {
        assert!(DeformationIndex::new(-0.01).is_err());
        assert!(DeformationIndex::new(1.0 + 1e-12).is_err());
        assert!(DeformationIndex::new(f64::NAN).is_err());
        assert!(DeformationIndex::new(0.0).is_ok());
        assert!(DeformationIndex::new(1.0).is_ok());
    }

    #[test]
    fn ln_p_examples() {
        for p in [0.0, 0.1, 0.5, 1.0] {
            assert_eq!(ln_p(idx(p), 1.0).unwrap(), 0.0);
        }
        assert_relative_eq!(ln_p(idx(1.0), 3.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(ln_p(idx(0.5), 4.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(ln_p(idx(0.0), std::f64::consts::E).unwrap(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn ln_p_domain() {
        assert!(matches!(ln_p(idx(0.5), 0.0), Err(Error::Domain(_))));
        assert!(matches!(ln_p(idx(0.5), -2.0), Err(Error::Domain(_))));
        assert!(ln_p(idx(0.5), f64::NAN).is_err());
    }

    #[test]
    fn exp_p_examples() {
        assert_eq!(exp_p(idx(0.5), 0.0).unwrap(), 1.0);
        assert_relative_eq!(exp_p(idx(0.5), -1.0).unwrap(), 0.25, max_relative = 1e-14);
        for x in [-0.9, -0.3, 0.0, 0.7, 12.5] {
            assert_relative_eq!(exp_p(idx(1.0), x).unwrap(), 1.0 + x, max_relative = 1e-14);
        }
    }

    #[test]
    fn exp_p_boundary_is_exact_zero() {
        assert_eq!(exp_p(idx(0.5), -2.0).unwrap(), 0.0);
        assert_eq!(exp_p(idx(1.0), -1.0).unwrap(), 0.0);
        assert_eq!(exp_p_m1(idx(0.25), -4.0).unwrap(), -1.0);
        assert!(matches!(exp_p(idx(0.5), -2.5), Err(Error::Domain(_))));
    }

    #[test]
    fn limit_consistency_at_tiny_index() {
        let p = idx(1e-8);
        let mut y = 0.1;
        while y <= 10.0 {
            assert!((ln_p(p, y).unwrap() - y.ln()).abs() <= 1e-6);
            y += 0.01;
        }
        let mut z = -3.0;
        while z <= 3.0 {
            let rel = (exp_p(p, z).unwrap() - z.exp()).abs() / z.exp();
            assert!(rel <= 1e-6, "z = {z}");
            z += 0.01;
        }
    }

    proptest! {
        #[test]
        fn round_trip(p in 1e-6f64..=1.0, y in 1e-6f64..1e6) {
            let p = idx(p);
            prop_assume!(y.powf(p.get()) >= 1e-2);
            let l = ln_p(p, y).unwrap();
            let back = exp_p(p, l).unwrap();
            prop_assert!((back - y).abs() <= 1e-12 * y, "p={:?} y={} back={}", p, y, back);
        }

        #[test]
        fn ln_p_increasing(p in 0.0f64..=1.0, y in 1e-3f64..1e3, dy in 1e-6f64..10.0) {
            let p = idx(p);
            prop_assert!(ln_p(p, y + dy).unwrap() > ln_p(p, y).unwrap());
        }

        #[test]
        fn exp_p_increasing(p in 1e-3f64..=1.0, z in -0.999f64..50.0, dz in 1e-6f64..10.0) {
            let p = idx(p);
            prop_assert!(exp_p(p, z + dz).unwrap() > exp_p(p, z).unwrap());
        }
    }
}
