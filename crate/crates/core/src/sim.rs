//! Monte Carlo simulation of a repeated multiplicative gamble.
//!
//! Each step multiplies wealth by `1 + x` with probability `p` and leaves it
//! unchanged otherwise. The time-average growth factor is the geometric mean
//! of the step multipliers, `(1+x)^p` in the long run; the ensemble-average
//! factor is the arithmetic mean across trajectories, `1 + p·x`.
//!
//! Trajectory `i` draws from stream `i` of `ChaCha8Rng::seed_from_u64(seed)`,
//! so the results do not depend on how trajectories are scheduled across
//! threads, and distinct master seeds never share substreams.
//! Since wealth after `t` steps depends only on the number of successes `k`,
//! trajectories are reduced into a histogram over `k`; integer counts merge
//! exactly and the floating-point sums run over the histogram in ascending
//! `k`, which keeps every statistic bit-identical across runs.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deformed::DeformationIndex;
use crate::error::{Error, Result};
use crate::numfmt::sig9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub p: DeformationIndex,
    pub x: f64,
    pub steps: u64,
    pub trajectories: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(p: DeformationIndex, x: f64, steps: u64, trajectories: u64, seed: u64) -> Result<Self> {
        let cfg = SimConfig {
            p,
            x,
            steps,
            trajectories,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x >= -1.0) || !self.x.is_finite() {
            return Err(Error::domain(format!(
                "change x must be finite and >= -1, got {}",
                self.x
            )));
        }
        if self.steps == 0 {
            return Err(Error::domain("steps must be >= 1"));
        }
        if self.trajectories == 0 {
            return Err(Error::domain("trajectories must be >= 1"));
        }
        Ok(())
    }

    fn is_ruinous(&self) -> bool {
        self.x == -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    /// Geometric mean of the step multipliers over all steps and trajectories.
    pub empirical_growth_factor: f64,
    /// `(1+x)^p`.
    pub analytic_growth_factor: f64,
    /// `(mean of final wealth)^(1/steps)` across trajectories.
    pub ensemble_mean_factor: f64,
    /// `1 + p·x`.
    pub analytic_ensemble_factor: f64,
    /// Relative error of the empirical growth factor; absolute error when the
    /// analytic factor is 0.
    pub relative_error: f64,
    pub ruined_trajectories: u64,
    pub steps: u64,
    pub trajectories: u64,
}

/// Relative wealth of one trajectory at `t = 0..=steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub id: u64,
    pub wealth: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRow {
    pub t: u64,
    pub ensemble_mean_wealth: f64,
    /// `(1 + p·x)^t`.
    pub analytic_ensemble_mean: f64,
    pub median_wealth: f64,
    /// `(1+x)^(p·t)`.
    pub analytic_median: f64,
}

/// Success counts of a set of trajectories; ruined ones are kept apart.
#[derive(Debug, Default, Clone)]
struct Histogram {
    by_successes: BTreeMap<u64, u64>,
    ruined: u64,
}

impl Histogram {
    fn add(&mut self, state: Walker) {
        if state.ruined {
            self.ruined += 1;
        } else {
            *self.by_successes.entry(state.successes).or_default() += 1;
        }
    }

    fn merge(mut self, other: Histogram) -> Histogram {
        self.ruined += other.ruined;
        for (k, n) in other.by_successes {
            *self.by_successes.entry(k).or_default() += n;
        }
        self
    }

    fn total(&self) -> u64 {
        self.ruined + self.by_successes.values().sum::<u64>()
    }

    /// ln of the mean wealth, `-inf` when every trajectory is ruined.
    fn ln_mean_wealth(&self, ln_multiplier: f64) -> f64 {
        let terms: Vec<f64> = self
            .by_successes
            .iter()
            .map(|(&k, &n)| (n as f64).ln() + ln_wealth(k, ln_multiplier))
            .collect();
        let Some(max) = terms.iter().copied().reduce(f64::max) else {
            return f64::NEG_INFINITY;
        };
        let sum = neumaier_sum(terms.iter().map(|t| (t - max).exp()));
        max + sum.ln() - (self.total() as f64).ln()
    }

    /// Median wealth; the mean of the two middle values for an even count.
    fn median_wealth(&self, ln_multiplier: f64) -> f64 {
        let mut entries: Vec<(f64, u64)> = self
            .by_successes
            .iter()
            .map(|(&k, &n)| (ln_wealth(k, ln_multiplier), n))
            .collect();
        if self.ruined > 0 {
            entries.push((f64::NEG_INFINITY, self.ruined));
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = self.total();
        let order_stat = |rank: u64| {
            let mut seen = 0;
            for &(lw, count) in &entries {
                seen += count;
                if rank < seen {
                    return lw.exp();
                }
            }
            unreachable!("rank below total count")
        };
        0.5 * (order_stat((n - 1) / 2) + order_stat(n / 2))
    }
}

fn ln_wealth(successes: u64, ln_multiplier: f64) -> f64 {
    if successes == 0 {
        0.0
    } else {
        successes as f64 * ln_multiplier
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// One trajectory's random stream and success count.
#[derive(Debug, Clone, Copy)]
struct Walker {
    successes: u64,
    ruined: bool,
}

struct Stream {
    rng: ChaCha8Rng,
    walker: Walker,
}

impl Stream {
    fn new(seed: u64, id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(id);
        Stream {
            rng,
            walker: Walker {
                successes: 0,
                ruined: false,
            },
        }
    }

    /// Advances one step; a ruined trajectory draws nothing further.
    fn step(&mut self, cfg: &SimConfig) {
        if self.walker.ruined {
            return;
        }
        if self.rng.random_bool(cfg.p.get()) {
            self.walker.successes += 1;
            if cfg.is_ruinous() {
                self.walker.ruined = true;
            }
        }
    }
}

fn run_trajectory(cfg: &SimConfig, id: u64, mut path: Option<&mut Vec<f64>>) -> Walker {
    let mut stream = Stream::new(cfg.seed, id);
    let multiplier = 1.0 + cfg.x;
    let mut wealth = 1.0;
    if let Some(p) = path.as_deref_mut() {
        p.push(wealth);
    }
    for _ in 0..cfg.steps {
        let before = stream.walker.successes;
        stream.step(cfg);
        if let Some(p) = path.as_deref_mut() {
            if stream.walker.successes != before {
                wealth *= multiplier;
            }
            p.push(wealth);
        }
    }
    stream.walker
}

fn summarize(cfg: &SimConfig, hist: &Histogram) -> SimSummary {
    let p = cfg.p.get();
    let steps = cfg.steps as f64;
    let n = hist.total();
    let analytic = (1.0 + cfg.x).powf(p);
    let empirical = if hist.ruined > 0 {
        0.0
    } else {
        let total_successes: u128 = hist
            .by_successes
            .iter()
            .map(|(&k, &c)| k as u128 * c as u128)
            .sum();
        let frequency = total_successes as f64 / (cfg.steps as f64 * n as f64);
        (1.0 + cfg.x).powf(frequency)
    };
    let ln_multiplier = cfg.x.ln_1p();
    let ensemble = (hist.ln_mean_wealth(ln_multiplier) / steps).exp();
    let relative_error = if analytic > 0.0 {
        (empirical - analytic).abs() / analytic
    } else {
        (empirical - analytic).abs()
    };
    SimSummary {
        empirical_growth_factor: empirical,
        analytic_growth_factor: analytic,
        ensemble_mean_factor: ensemble,
        analytic_ensemble_factor: 1.0 + p * cfg.x,
        relative_error,
        ruined_trajectories: hist.ruined,
        steps: cfg.steps,
        trajectories: cfg.trajectories,
    }
}

pub fn simulate(cfg: &SimConfig) -> Result<SimSummary> {
    cfg.validate()?;
    let hist = (0..cfg.trajectories)
        .into_par_iter()
        .fold(Histogram::default, |mut h, id| {
            h.add(run_trajectory(cfg, id, None));
            h
        })
        .reduce(Histogram::default, Histogram::merge);
    Ok(summarize(cfg, &hist))
}

/// Like [`simulate`], also returning every trajectory's wealth path.
///
/// Memory grows as `trajectories × steps`.
pub fn simulate_with_paths(cfg: &SimConfig) -> Result<(SimSummary, Vec<Trajectory>)> {
    cfg.validate()?;
    let runs: Vec<(Walker, Trajectory)> = (0..cfg.trajectories)
        .into_par_iter()
        .map(|id| {
            let mut wealth = Vec::with_capacity(cfg.steps as usize + 1);
            let walker = run_trajectory(cfg, id, Some(&mut wealth));
            (walker, Trajectory { id, wealth })
        })
        .collect();
    let mut hist = Histogram::default();
    let mut paths = Vec::with_capacity(runs.len());
    for (walker, path) in runs {
        hist.add(walker);
        paths.push(path);
    }
    Ok((summarize(cfg, &hist), paths))
}

/// Writes `trajectory_id,t,wealth` rows with a header.
pub fn write_paths_csv<W: Write>(out: W, paths: &[Trajectory]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["trajectory_id", "t", "wealth"])?;
    for path in paths {
        for (t, wealth) in path.wealth.iter().enumerate() {
            w.write_record([path.id.to_string(), t.to_string(), sig9(*wealth)])?;
        }
    }
    w.flush()
}

/// Ensemble mean and median wealth at every step next to their analytic
/// references, showing the mean track `(1+p·x)^t` while the typical
/// trajectory follows `(1+x)^(p·t)`.
pub fn divergence_demo(cfg: &SimConfig) -> Result<Vec<DivergenceRow>> {
    cfg.validate()?;
    let p = cfg.p.get();
    let ln_multiplier = cfg.x.ln_1p();
    let mut streams: Vec<Stream> = (0..cfg.trajectories)
        .map(|id| Stream::new(cfg.seed, id))
        .collect();
    let mut rows = Vec::with_capacity(cfg.steps as usize + 1);
    rows.push(DivergenceRow {
        t: 0,
        ensemble_mean_wealth: 1.0,
        analytic_ensemble_mean: 1.0,
        median_wealth: 1.0,
        analytic_median: 1.0,
    });
    for t in 1..=cfg.steps {
        streams.par_iter_mut().for_each(|s| s.step(cfg));
        let hist = streams
            .par_iter()
            .fold(Histogram::default, |mut h, s| {
                h.add(s.walker);
                h
            })
            .reduce(Histogram::default, Histogram::merge);
        let tf = t as f64;
        rows.push(DivergenceRow {
            t,
            ensemble_mean_wealth: hist.ln_mean_wealth(ln_multiplier).exp(),
            analytic_ensemble_mean: (1.0 + p * cfg.x).powf(tf),
            median_wealth: hist.median_wealth(ln_multiplier),
            analytic_median: (1.0 + cfg.x).powf(p * tf),
        });
    }
    Ok(rows)
}

/// Writes the divergence table as CSV with a header.
pub fn write_divergence_csv<W: Write>(out: W, rows: &[DivergenceRow]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "t",
        "ensemble_mean_wealth",
        "analytic_ensemble_mean",
        "median_wealth",
        "analytic_median",
    ])?;
    for r in rows {
        w.write_record([
            r.t.to_string(),
            sig9(r.ensemble_mean_wealth),
            sig9(r.analytic_ensemble_mean),
            sig9(r.median_wealth),
            sig9(r.analytic_median),
        ])?;
    }
    w.flush()
}
