//! Curve tables behind the four model figures.
//!
//! * `fig1`: meiosis `(1+x)^p - 1` with its tangent `p·x`, gains only.
//! * `fig2`: hyperbole `e_p(ρx) - 1` against the line `x`, losses only.
//! * `fig3`: contrast ratio in dB with the fuzzy band `±threshold`.
//! * `fig4`: the S-curve with the reference lines `x` and `p·x`.

use std::io::Write;

use serde::Serialize;
use timeavg_core::contrast::DEFAULT_THRESHOLD_DB;
use timeavg_core::numfmt::sig9;
use timeavg_core::{cr_db, meiosis_plus, s_curve, DeformationIndex, Error, DEFAULT_RHO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    /// `count` evenly spaced points, both ends included.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let span = self.max - self.min;
        let last = (self.count - 1) as f64;
        (0..self.count).map(move |i| {
            if i + 1 == self.count {
                self.max
            } else {
                self.min + span * i as f64 / last
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSet {
    pub p: DeformationIndex,
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureSpec {
    pub figure: FigureId,
    pub grid: Grid,
    pub params: Vec<ParamSet>,
    pub threshold_db: f64,
}

fn params(ps: &[f64], rho: Option<f64>) -> Vec<ParamSet> {
    ps.iter()
        .map(|&p| ParamSet {
            p: DeformationIndex::new(p).expect("default p in [0, 1]"),
            rho,
        })
        .collect()
}

impl FigureSpec {
    pub fn default_for(figure: FigureId) -> Self {
        let (grid, params) = match figure {
            FigureId::Fig1 => (Grid { min: 0.0, max: 2.0, count: 201 }, params(&[0.5, 0.1], None)),
            FigureId::Fig2 => (Grid { min: -1.0, max: 0.0, count: 101 }, params(&[0.5, 0.1], None)),
            FigureId::Fig3 => (
                Grid { min: -1.0, max: 2.0, count: 301 },
                params(&[0.5, 0.05, 0.95], None),
            ),
            FigureId::Fig4 => (
                Grid { min: -1.0, max: 2.0, count: 301 },
                params(&[0.5], Some(DEFAULT_RHO)),
            ),
        };
        FigureSpec {
            figure,
            grid,
            params,
            threshold_db: DEFAULT_THRESHOLD_DB,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let g = &self.grid;
        if !(g.min < g.max) || !g.min.is_finite() || !g.max.is_finite() {
            return Err(Error::Validation(format!(
                "grid needs finite min < max, got [{}, {}]",
                g.min, g.max
            )));
        }
        if g.count < 2 {
            return Err(Error::Validation(format!("grid needs count >= 2, got {}", g.count)));
        }
        let (lo, hi) = match self.figure {
            FigureId::Fig1 => (0.0, f64::INFINITY),
            FigureId::Fig2 => (-1.0, 0.0),
            FigureId::Fig3 | FigureId::Fig4 => (-1.0, f64::INFINITY),
        };
        if g.min < lo || g.max > hi {
            return Err(Error::Validation(format!(
                "{:?} grid [{}, {}] leaves the admissible range [{lo}, {hi}]",
                self.figure, g.min, g.max
            )));
        }
        if self.params.is_empty() {
            return Err(Error::Validation("at least one p is required".into()));
        }
        if let Some(rho) = self.params.iter().find_map(|s| s.rho.filter(|r| !(*r >= 1.0))) {
            return Err(Error::Validation(format!("rho must be >= 1, got {rho}")));
        }
        if !(self.threshold_db > 0.0) {
            return Err(Error::Validation(format!(
                "threshold must be positive, got {}",
                self.threshold_db
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

type Curve = Box<dyn Fn(f64) -> Result<f64, Error>>;

fn curve_name(prefix: &str, set: &ParamSet) -> String {
    match set.rho {
        Some(rho) => format!("{prefix}_p{}_rho{rho}", set.p.get()),
        None => format!("{prefix}_p{}", set.p.get()),
    }
}

fn tangents(params: &[ParamSet]) -> Vec<(String, Curve)> {
    params
        .iter()
        .map(|s| {
            let p = s.p.get();
            (format!("tangent_p{p}"), Box::new(move |x: f64| Ok(p * x)) as Curve)
        })
        .collect()
}

fn curves(spec: &FigureSpec) -> Vec<(String, Curve)> {
    let mut out: Vec<(String, Curve)> = Vec::new();
    match spec.figure {
        FigureId::Fig1 => {
            for s in &spec.params {
                let p = s.p;
                out.push((format!("meiosis_p{}", p.get()), Box::new(move |x| meiosis_plus(p, x))));
            }
            out.extend(tangents(&spec.params));
        }
        FigureId::Fig2 => {
            for s in &spec.params {
                let (p, rho) = (s.p, s.rho.unwrap_or(1.0));
                out.push((curve_name("hyperbole", s), Box::new(move |x| s_curve(p, x, rho))));
            }
            out.push(("line_x".into(), Box::new(Ok)));
        }
        FigureId::Fig3 => {
            for s in &spec.params {
                let p = s.p;
                out.push((format!("cr_p{}", p.get()), Box::new(move |x| cr_db(p, x))));
            }
            let t = spec.threshold_db;
            out.push(("band_upper".into(), Box::new(move |_| Ok(t))));
            out.push(("band_lower".into(), Box::new(move |_| Ok(-t))));
        }
        FigureId::Fig4 => {
            for s in &spec.params {
                let set = ParamSet {
                    p: s.p,
                    rho: Some(s.rho.unwrap_or(DEFAULT_RHO)),
                };
                let (p, rho) = (s.p, set.rho.unwrap());
                out.push((curve_name("s", &set), Box::new(move |x| s_curve(p, x, rho))));
            }
            out.push(("line_x".into(), Box::new(Ok)));
            out.extend(tangents(&spec.params));
        }
    }
    out
}

pub fn generate(spec: &FigureSpec) -> Result<FigureData, Error> {
    spec.validate()?;
    let curves = curves(spec);
    let mut columns = vec!["x".to_string()];
    columns.extend(curves.iter().map(|(name, _)| name.clone()));
    let rows = spec
        .grid
        .points()
        .map(|x| {
            let mut row = Vec::with_capacity(columns.len());
            row.push(x);
            for (_, f) in &curves {
                row.push(f(x)?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(FigureData { columns, rows })
}

pub fn write_csv<W: Write>(data: &FigureData, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&data.columns)?;
    for row in &data.rows {
        w.write_record(row.iter().map(|v| sig9(*v)))?;
    }
    w.flush()
}
