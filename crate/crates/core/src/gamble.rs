//! Paired choices between a sure change and a risky change of equal
//! ensemble average, evaluated by their time averages.
//!
//! Gains compare the sure change `p·x` with the meiosis of the risky gain,
//! `(1+x)^p - 1`. Losses compare the risky change `x` with the hyperbole of
//! the sure loss, `e_p(ρ·x) - 1`, where `ρ >= 1` convexifies the curve so that
//! small losses fall into a risk-seeking region.

use serde::{Deserialize, Serialize};

use crate::deformed::{exp_p_m1, DeformationIndex};
use crate::error::{Error, Result};
use crate::roots::bisect;

/// Convexification rate used when none is given.
pub const DEFAULT_RHO: f64 = 1.05;

/// Absolute tolerance under which two compared changes count as a tie.
pub const TIE_TOLERANCE: f64 = 1e-12;

const CROSSOVER_EDGE: f64 = 1e-9;
const CROSSOVER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Gain,
    Loss,
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gain" => Ok(Domain::Gain),
            "loss" => Ok(Domain::Loss),
            other => Err(Error::Validation(format!(
                "unknown domain {other:?}, expected gain or loss"
            ))),
        }
    }
}

/// A sure change against a risky change of the same expected value.
///
/// Gains: win `p·M` for sure, or win `M` with probability `p`.
/// Losses: lose `p·M` for sure, or lose `M` with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GambleSpec {
    pub domain: Domain,
    /// Stake `M`, in currency.
    pub stake: f64,
    /// Initial wealth `W0`, in currency.
    pub initial_wealth: f64,
    pub p: DeformationIndex,
    /// Hyperbole convexification rate; only read in the loss domain.
    pub rho: f64,
}

impl GambleSpec {
    pub fn new(
        domain: Domain,
        stake: f64,
        initial_wealth: f64,
        p: DeformationIndex,
        rho: f64,
    ) -> Result<Self> {
        let spec = GambleSpec {
            domain,
            stake,
            initial_wealth,
            p,
            rho,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gain(stake: f64, initial_wealth: f64, p: DeformationIndex) -> Result<Self> {
        Self::new(Domain::Gain, stake, initial_wealth, p, DEFAULT_RHO)
    }

    pub fn loss(stake: f64, initial_wealth: f64, p: DeformationIndex, rho: f64) -> Result<Self> {
        Self::new(Domain::Loss, stake, initial_wealth, p, rho)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.initial_wealth > 0.0) || !self.initial_wealth.is_finite() {
            return Err(Error::domain(format!(
                "initial wealth must be positive, got {}",
                self.initial_wealth
            )));
        }
        if !(self.rho >= 1.0) || !self.rho.is_finite() {
            return Err(Error::domain(format!("rho must be >= 1, got {}", self.rho)));
        }
        match self.domain {
            Domain::Gain => {
                if !(self.stake >= 0.0) || !self.stake.is_finite() {
                    return Err(Error::domain(format!(
                        "gain stake must be >= 0, got {}",
                        self.stake
                    )));
                }
            }
            Domain::Loss => {
                if !(self.stake > 0.0) {
                    return Err(Error::domain(format!(
                        "loss stake must be > 0, got {}",
                        self.stake
                    )));
                }
                if self.stake > self.initial_wealth {
                    return Err(Error::domain(format!(
                        "cannot lose {} out of a wealth of {}",
                        self.stake, self.initial_wealth
                    )));
                }
                let x = self.change();
                if 1.0 + self.p.get() * self.rho * x < 0.0 {
                    return Err(Error::domain(format!(
                        "1 + p·rho·x < 0 for p = {}, rho = {}, x = {x}",
                        self.p.get(),
                        self.rho
                    )));
                }
            }
        }
        Ok(())
    }

    /// Hypothetical change `x`: `M/W0` for gains, `-M/W0` for losses.
    pub fn change(&self) -> f64 {
        let x = self.stake / self.initial_wealth;
        match self.domain {
            Domain::Gain => x,
            Domain::Loss => -x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Choice {
    SureOption,
    RiskyOption,
    Indifferent,
}

/// Outcome of comparing the two sides of a [`GambleSpec`].
///
/// In the gain domain `sure_change = p·x` and `risky_equivalent_change` is
/// the meiosis of the risky gain. In the loss domain `sure_change` is the
/// hyperbole of the sure loss and `risky_equivalent_change = x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub chosen: Choice,
    pub sure_change: f64,
    pub risky_equivalent_change: f64,
}

impl Decision {
    fn compare(sure_change: f64, risky_equivalent_change: f64) -> Self {
        let diff = sure_change - risky_equivalent_change;
        let chosen = if diff.abs() <= TIE_TOLERANCE {
            Choice::Indifferent
        } else if diff > 0.0 {
            Choice::SureOption
        } else {
            Choice::RiskyOption
        };
        Decision {
            chosen,
            sure_change,
            risky_equivalent_change,
        }
    }
}

/// Per-round growth factor `(1+x)^p` of a gamble paying `x` with frequency `p`.
pub fn time_average_factor_risky(p: DeformationIndex, x: f64) -> Result<f64> {
    if !(x >= -1.0) {
        return Err(Error::domain(format!("change x must be >= -1, got {x}")));
    }
    Ok((1.0 + x).powf(p.get()))
}

/// Growth factor `1 + p·x` of the sure change `p·x`.
pub fn time_average_factor_sure(p: DeformationIndex, x: f64) -> Result<f64> {
    let factor = 1.0 + p.get() * x;
    if !(factor >= 0.0) {
        return Err(Error::domain(format!(
            "1 + p·x must be >= 0, got p = {}, x = {x}",
            p.get()
        )));
    }
    Ok(factor)
}

/// Meiosis of a risky gain: `(1+x)^p - 1`, i.e. `p·ln_p(1+x)`.
pub fn meiosis_plus(p: DeformationIndex, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("meiosis requires x >= 0, got {x}")));
    }
    Ok((p.get() * x.ln_1p()).exp_m1())
}

/// Hyperbole of a sure loss: `e_p(ρ·x) - 1` for `-1 <= x < 0`.
pub fn hyperbole_minus(p: DeformationIndex, x: f64, rho: f64) -> Result<f64> {
    if !(-1.0..0.0).contains(&x) {
        return Err(Error::domain(format!(
            "hyperbole requires -1 <= x < 0, got {x}"
        )));
    }
    if !(rho >= 1.0) || !rho.is_finite() {
        return Err(Error::domain(format!("rho must be >= 1, got {rho}")));
    }
    exp_p_m1(p, rho * x)
}

/// The hyperbolized change `e_p(x) - 1` that a sure loss of `p·|x|` is
/// exaggerated into; a gamble paying it with frequency `p` has the same
/// time average `1 + p·x` as the sure loss.
pub fn hyperbolized_change(p: DeformationIndex, x: f64) -> Result<f64> {
    hyperbole_minus(p, x, 1.0)
}

/// Wealth after one round of the hyperbolized loss, on time average:
/// `W0·(1 - L/W0)^p` with `L = W0 - W0·(1 - p·M/W0)^(1/p)`.
pub fn hyperbole_time_average(p: DeformationIndex, stake: f64, initial_wealth: f64) -> Result<f64> {
    let pg = p.get();
    if pg == 0.0 {
        return Ok(initial_wealth);
    }
    let base = 1.0 - pg * stake / initial_wealth;
    if !(base >= 0.0) {
        return Err(Error::domain(format!(
            "1 - p·M/W0 must be >= 0, got {base}"
        )));
    }
    let exaggerated_loss = initial_wealth - initial_wealth * base.powf(1.0 / pg);
    Ok(initial_wealth * (1.0 - exaggerated_loss / initial_wealth).powf(pg))
}

/// Wealth after the sure loss of `p·M`: `W0·(1 - p·M/W0)`.
pub fn sure_loss_time_average(p: DeformationIndex, stake: f64, initial_wealth: f64) -> f64 {
    initial_wealth * (1.0 - p.get() * stake / initial_wealth)
}

pub fn decide_gain(spec: &GambleSpec) -> Result<Decision> {
    if spec.domain != Domain::Gain {
        return Err(Error::domain("decide_gain called with a loss-domain gamble"));
    }
    spec.validate()?;
    let x = spec.change();
    let sure = spec.p.get() * x;
    let risky = meiosis_plus(spec.p, x)?;
    Ok(Decision::compare(sure, risky))
}

pub fn decide_loss(spec: &GambleSpec) -> Result<Decision> {
    if spec.domain != Domain::Loss {
        return Err(Error::domain("decide_loss called with a gain-domain gamble"));
    }
    spec.validate()?;
    let x = spec.change();
    let sure = hyperbole_minus(spec.p, x, spec.rho)?;
    Ok(Decision::compare(sure, x))
}

pub fn decide(spec: &GambleSpec) -> Result<Decision> {
    match spec.domain {
        Domain::Gain => decide_gain(spec),
        Domain::Loss => decide_loss(spec),
    }
}

/// S-shaped value curve: meiosis for `x >= 0`, convexified hyperbole below.
pub fn s_curve(p: DeformationIndex, x: f64, rho: f64) -> Result<f64> {
    if x >= 0.0 {
        meiosis_plus(p, x)
    } else {
        hyperbole_minus(p, x, rho)
    }
}

/// Loss `x* < 0` where the convexified hyperbole crosses the line `x`.
///
/// Risky losses are preferred on `(x*, 0)` and sure losses below `x*`.
pub fn risk_seeking_crossover(p: DeformationIndex, rho: f64) -> Result<f64> {
    let pg = p.get();
    if !p.is_interior() {
        return Err(Error::domain(format!(
            "crossover requires 0 < p < 1, got {pg}"
        )));
    }
    if !rho.is_finite() || rho < 1.0 {
        return Err(Error::domain(format!("rho must be >= 1, got {rho}")));
    }
    if rho == 1.0 {
        return Err(Error::NoCrossover {
            p: pg,
            rho,
            reason: "the hyperbole only touches the line x at 0".into(),
        });
    }
    // e_p(ρx) is only defined down to x = -1/(pρ).
    let lo = (-1.0f64).max(-1.0 / (pg * rho)) + CROSSOVER_EDGE;
    let hi = -CROSSOVER_EDGE;
    let gap = |x: f64| Ok(hyperbole_minus(p, x, rho)? - x);
    match bisect(gap, lo, hi, CROSSOVER_TOL) {
        Ok(x) => Ok(x),
        Err(Error::NoBracket { .. }) => Err(Error::NoCrossover {
            p: pg,
            rho,
            reason: format!("the hyperbole stays below x on [{lo}, {hi}]"),
        }),
        Err(e) => Err(e),
    }
}
