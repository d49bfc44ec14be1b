//! Contrast ratio between the time averages of the two options, in dB.
//!
//! For gains the ratio is `p·x / (p·ln_p(1+x))`, for losses
//! `(e_p(x) - 1) / x`. Both equal 1 at the tangency point `x = 0`, where the
//! options cannot be told apart. A band `|CR_dB| < threshold` is the fuzzy
//! region.
//!
//! With the default 0.5 dB band the gain side is fuzzier than one might
//! expect: at `x = 0.1` the contrast is only 0.105 dB for `p = 0.5` and
//! 0.198 dB for `p = 0.05`, and for `p = 0.5` gains leave the band at
//! `x ≈ 0.548`.

use serde::{Deserialize, Serialize};

use crate::deformed::{exp_p_m1, DeformationIndex};
use crate::error::{Error, Result};
use crate::gamble::{meiosis_plus, Domain};
use crate::roots::bisect;

pub const DEFAULT_THRESHOLD_DB: f64 = 0.5;

const BOUNDARY_TOL: f64 = 1e-10;
/// Gains are searched by doubling the bracket up to this change.
const GAIN_SEARCH_LIMIT: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Fuzzy,
    Crisp,
    /// `p` is 0 or 1: both options have the same time average for every `x`.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContrastReport {
    pub x: f64,
    pub p: DeformationIndex,
    pub cr_db: f64,
    pub classification: Classification,
    pub threshold_db: f64,
    /// Most negative fuzzy loss, `None` if the band extends to `x = -1`.
    pub loss_boundary: Option<f64>,
    /// Largest fuzzy gain, `None` if the band never closes.
    pub gain_boundary: Option<f64>,
}

fn require_interior(p: DeformationIndex) -> Result<()> {
    if p.is_interior() {
        Ok(())
    } else {
        Err(Error::DegenerateContrast(p.get()))
    }
}

/// Contrast ratio in dB; 0 at `x = 0`, positive for gains, negative for losses.
pub fn cr_db(p: DeformationIndex, x: f64) -> Result<f64> {
    if !(x >= -1.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "contrast ratio requires finite x >= -1, got {x}"
        )));
    }
    require_interior(p)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let ratio = if x > 0.0 {
        p.get() * x / meiosis_plus(p, x)?
    } else {
        exp_p_m1(p, x)? / x
    };
    Ok(10.0 * ratio.log10())
}

fn validate_threshold(threshold_db: f64) -> Result<()> {
    if threshold_db > 0.0 && threshold_db.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "threshold must be a positive number of dB, got {threshold_db}"
        )))
    }
}

/// Classifies `x` as fuzzy or crisp and locates both band edges for `p`.
pub fn classify(p: DeformationIndex, x: f64, threshold_db: f64) -> Result<ContrastReport> {
    validate_threshold(threshold_db)?;
    if !(x >= -1.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "contrast ratio requires finite x >= -1, got {x}"
        )));
    }
    if !p.is_interior() {
        return Ok(ContrastReport {
            x,
            p,
            cr_db: 0.0,
            classification: Classification::Degenerate,
            threshold_db,
            loss_boundary: None,
            gain_boundary: None,
        });
    }
    let cr = cr_db(p, x)?;
    let classification = if cr.abs() < threshold_db {
        Classification::Fuzzy
    } else {
        Classification::Crisp
    };
    let edge = |domain| match fuzzy_boundary(p, domain, threshold_db) {
        Ok(b) => Ok(Some(b)),
        Err(Error::BoundaryAtDomainEdge { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(ContrastReport {
        x,
        p,
        cr_db: cr,
        classification,
        threshold_db,
        loss_boundary: edge(Domain::Loss)?,
        gain_boundary: edge(Domain::Gain)?,
    })
}

/// Change at which `|CR_dB|` reaches `threshold_db` moving away from 0.
pub fn fuzzy_boundary(p: DeformationIndex, domain: Domain, threshold_db: f64) -> Result<f64> {
    validate_threshold(threshold_db)?;
    require_interior(p)?;
    let excess = |x: f64| Ok(cr_db(p, x)?.abs() - threshold_db);
    match domain {
        Domain::Loss => {
            if excess(-1.0)? < 0.0 {
                return Err(Error::BoundaryAtDomainEdge {
                    threshold_db,
                    edge: -1.0,
                });
            }
            bisect(excess, -1.0, 0.0, BOUNDARY_TOL)
        }
        Domain::Gain => {
            let mut hi = 1.0;
            while excess(hi)? < 0.0 {
                hi *= 2.0;
                if hi > GAIN_SEARCH_LIMIT {
                    return Err(Error::BoundaryAtDomainEdge {
                        threshold_db,
                        edge: GAIN_SEARCH_LIMIT,
                    });
                }
            }
            bisect(excess, 0.0, hi, BOUNDARY_TOL)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn idx(p: f64) -> DeformationIndex {
        DeformationIndex::new(p).unwrap()
    }

    #[test]
    fn cr_examples() {
        // 10 log10(0.5 / (sqrt 2 - 1))
        let oracle = 10.0 * (0.5 / (2f64.sqrt() - 1.0)).log10();
        assert!((cr_db(idx(0.5), 1.0).unwrap() - oracle).abs() < 1e-12);
        assert!((cr_db(idx(0.5), 1.0).unwrap() - 0.817).abs() < 1e-3);
        assert!((cr_db(idx(0.5), -1.0).unwrap() - 10.0 * 0.75f64.log10()).abs() < 1e-12);
        assert!((cr_db(idx(0.5), -1.0).unwrap() - -1.249).abs() < 1e-3);
        let ratio = 1.0 - 0.05f64.powf(1.0 / 0.95);
        assert!((cr_db(idx(0.95), -1.0).unwrap() - 10.0 * ratio.log10()).abs() < 1e-12);
        assert!((cr_db(idx(0.95), -1.0).unwrap() - -0.190).abs() < 1e-3);
        for p in [0.05, 0.5, 0.95] {
            assert_eq!(cr_db(idx(p), 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn cr_errors() {
        assert!(matches!(cr_db(idx(0.0), 0.5), Err(Error::DegenerateContrast(_))));
        assert!(matches!(cr_db(idx(1.0), -0.5), Err(Error::DegenerateContrast(_))));
        assert!(matches!(cr_db(idx(0.5), -1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn classify_examples() {
        let r = classify(idx(0.5), -0.1, 0.5).unwrap();
        assert_eq!(r.classification, Classification::Fuzzy);
        assert!((r.cr_db - 10.0 * 0.975f64.log10()).abs() < 1e-12);
        assert_eq!(classify(idx(0.5), -1.0, 0.5).unwrap().classification, Classification::Crisp);
        assert_eq!(classify(idx(0.95), -1.0, 0.5).unwrap().classification, Classification::Fuzzy);
        let d = classify(idx(1.0), 0.3, 0.5).unwrap();
        assert_eq!(d.classification, Classification::Degenerate);
        assert!(classify(idx(0.5), 0.3, 0.0).is_err());
    }

    #[test]
    fn classify_reports_boundaries() {
        let r = classify(idx(0.5), 0.2, 0.5).unwrap();
        assert!((r.loss_boundary.unwrap() - -0.4349962474650179).abs() < 1e-9);
        assert!((r.gain_boundary.unwrap() - 0.5476278299688151).abs() < 1e-9);
        let r = classify(idx(0.95), -1.0, 0.5).unwrap();
        assert_eq!(r.loss_boundary, None);
        assert!(r.gain_boundary.is_some());
    }

    #[test]
    fn boundary_closed_forms_half() {
        // Loss ratio is 1 + x/4 for p = 1/2; gain ratio is (sqrt(1+x) + 1)/2.
        let loss_oracle = (10f64.powf(-0.05) - 1.0) / 0.25;
        let s = 2.0 * 10f64.powf(0.05) - 1.0;
        let gain_oracle = s * s - 1.0;
        let lb = fuzzy_boundary(idx(0.5), Domain::Loss, 0.5).unwrap();
        let gb = fuzzy_boundary(idx(0.5), Domain::Gain, 0.5).unwrap();
        assert!((lb - loss_oracle).abs() < 1e-9, "{lb} vs {loss_oracle}");
        assert!((gb - gain_oracle).abs() < 1e-9, "{gb} vs {gain_oracle}");
        assert!((lb - -0.434997).abs() < 1e-6);
        assert!((gb - 0.547628).abs() < 1e-6);
    }

    #[test]
    fn boundary_at_domain_edge_near_certainty() {
        let p = idx(1.0 - 1e-9);
        assert!(matches!(
            fuzzy_boundary(p, Domain::Loss, 0.5),
            Err(Error::BoundaryAtDomainEdge { .. })
        ));
        assert!(matches!(
            fuzzy_boundary(p, Domain::Gain, 0.5),
            Err(Error::BoundaryAtDomainEdge { .. })
        ));
    }

    #[test]
    fn boundary_hits_threshold() {
        for p in [0.05, 0.1, 0.3, 0.5, 0.7] {
            for t in [0.1, 0.5, 1.0] {
                for domain in [Domain::Gain, Domain::Loss] {
                    if let Ok(b) = fuzzy_boundary(idx(p), domain, t) {
                        let cr = cr_db(idx(p), b).unwrap();
                        assert!((cr.abs() - t).abs() < 1e-8, "p={p} t={t} {domain:?}: {cr}");
                    }
                }
            }
        }
    }

    #[test]
    fn loss_contrast_exceeds_gain_contrast_at_matched_magnitude() {
        // Near 0, ln|loss ratio| - ln(gain ratio) = (1 - p^2) x^2 / 6 + O(x^3).
        for p in [0.05, 0.5, 0.95] {
            for x in [1e-3, 0.01, 0.1, 0.5, 1.0] {
                let gain = cr_db(idx(p), x).unwrap();
                let loss = cr_db(idx(p), -x).unwrap();
                assert!(loss.abs() > gain, "p={p} x={x}: {loss} vs {gain}");
            }
            let x = 1e-2;
            let gap_nepers = (cr_db(idx(p), -x).unwrap().abs() - cr_db(idx(p), x).unwrap())
                * std::f64::consts::LN_10
                / 10.0;
            let leading = (1.0 - p * p) * x * x / 6.0;
            assert!((gap_nepers - leading).abs() < 0.05 * leading, "p={p}");
        }
        for p in [0.05, 0.5] {
            let lb = fuzzy_boundary(idx(p), Domain::Loss, 0.5).unwrap();
            let gb = fuzzy_boundary(idx(p), Domain::Gain, 0.5).unwrap();
            assert!(lb.abs() < gb, "p={p}: {lb} vs {gb}");
        }
    }

    #[test]
    fn monotone_in_magnitude_on_grid() {
        for p in [0.05, 0.5, 0.95] {
            let mut prev = 0.0;
            for i in 1..=1000 {
                let cr = cr_db(idx(p), -(i as f64) / 1000.0).unwrap();
                assert!(cr <= prev, "loss side p={p} i={i}");
                prev = cr;
            }
            let mut prev = 0.0;
            for i in 1..=2000 {
                let cr = cr_db(idx(p), i as f64 / 1000.0).unwrap();
                assert!(cr >= prev, "gain side p={p} i={i}");
                prev = cr;
            }
        }
    }

    proptest! {
        #[test]
        fn sign_structure(p in 1e-3f64..0.999, x in -1.0f64..50.0) {
            let cr = cr_db(idx(p), x).unwrap();
            prop_assert!(cr * x.signum() >= -1e-12);
        }

        #[test]
        fn continuous_at_zero(p in 1e-2f64..0.99) {
            let eps = 1e-9;
            prop_assert!(cr_db(idx(p), eps).unwrap().abs() < 1e-6);
            prop_assert!(cr_db(idx(p), -eps).unwrap().abs() < 1e-6);
        }
    }
}
