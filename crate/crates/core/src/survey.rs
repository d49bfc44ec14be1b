//! Choice-experiment analytics: response-share entropy and agreement between
//! the observed majority and the time-average model.
//!
//! Surveys are CSV files with the header
//! `id,description,domain,p,M,W0,rho,count_a,count_b,sure_option`.
//! Each row carries its own gamble parameters so that the mapping from a
//! question to `(domain, p, M, W0)` lives in data.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contrast::{classify, Classification};
use crate::deformed::DeformationIndex;
use crate::error::{Error, Result};
use crate::gamble::{decide, Choice, Domain, GambleSpec};

/// The three-question poll of 67 respondents shipped with the crate.
pub const BUNDLED_SURVEY: &str = include_str!("../data/survey.csv");

const HEADER: [&str; 10] = [
    "id",
    "description",
    "domain",
    "p",
    "M",
    "W0",
    "rho",
    "count_a",
    "count_b",
    "sure_option",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionLabel {
    A,
    B,
}

impl OptionLabel {
    pub fn other(self) -> Self {
        match self {
            OptionLabel::A => OptionLabel::B,
            OptionLabel::B => OptionLabel::A,
        }
    }
}

impl std::fmt::Display for OptionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OptionLabel::A => "a",
            OptionLabel::B => "b",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyProblem {
    pub id: String,
    pub description: String,
    pub count_a: u64,
    pub count_b: u64,
    pub gamble: GambleSpec,
    /// Which answer is the sure option; the other one is the risky option.
    pub sure_option: OptionLabel,
}

impl SurveyProblem {
    pub fn respondents(&self) -> u64 {
        self.count_a + self.count_b
    }

    /// Answer label the model picks for a given decision.
    pub fn label_for(&self, choice: Choice) -> Option<OptionLabel> {
        match choice {
            Choice::SureOption => Some(self.sure_option),
            Choice::RiskyOption => Some(self.sure_option.other()),
            Choice::Indifferent => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub id: String,
    pub respondents: u64,
    pub majority_share: f64,
    pub entropy_bits: f64,
    /// `None` when the model is indifferent.
    pub model_choice: Option<OptionLabel>,
    /// `None` on an exact tie.
    pub observed_majority: Option<OptionLabel>,
    pub agree: bool,
    pub cr_db: f64,
    pub classification: Classification,
}

/// Shannon entropy of a binary split, in bits, with `0·log 0 = 0`.
pub fn binary_entropy(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain(format!(
            "binary entropy requires 0 <= q <= 1, got {q}"
        )));
    }
    let term = |v: f64| if v == 0.0 { 0.0 } else { -v * v.log2() };
    Ok(term(q) + term(1.0 - q))
}

/// Compares the model's pick with the observed majority.
///
/// `rho` overrides the convexification rate stored with the problem.
pub fn analyze(
    problem: &SurveyProblem,
    rho: Option<f64>,
    threshold_db: f64,
) -> Result<AgreementReport> {
    let mut gamble = problem.gamble;
    if let Some(rho) = rho {
        gamble.rho = rho;
    }
    gamble.validate()?;
    let n = problem.respondents();
    if n == 0 {
        return Err(Error::Validation(format!(
            "problem {}: count_a + count_b must be >= 1",
            problem.id
        )));
    }
    let share_a = problem.count_a as f64 / n as f64;
    let (majority_share, observed_majority) = match problem.count_a.cmp(&problem.count_b) {
        std::cmp::Ordering::Greater => (share_a, Some(OptionLabel::A)),
        std::cmp::Ordering::Less => (1.0 - share_a, Some(OptionLabel::B)),
        std::cmp::Ordering::Equal => (0.5, None),
    };
    let decision = decide(&gamble)?;
    let model_choice = problem.label_for(decision.chosen);
    let contrast = classify(gamble.p, gamble.change(), threshold_db)?;
    Ok(AgreementReport {
        id: problem.id.clone(),
        respondents: n,
        majority_share,
        entropy_bits: binary_entropy(majority_share)?,
        model_choice,
        observed_majority,
        agree: model_choice.is_some() && model_choice == observed_majority,
        cr_db: contrast.cr_db,
        classification: contrast.classification,
    })
}

#[derive(Debug, Deserialize)]
struct Row {
    id: String,
    description: String,
    domain: String,
    p: f64,
    #[serde(rename = "M")]
    stake: f64,
    #[serde(rename = "W0")]
    initial_wealth: f64,
    rho: f64,
    count_a: u64,
    count_b: u64,
    sure_option: String,
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    let column = match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.field().map(|f| f as usize + 1),
        _ => None,
    };
    let message = match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.kind().to_string(),
        _ => e.to_string(),
    };
    Error::Parse {
        line,
        column,
        message,
    }
}

fn row_to_problem(row: Row, line: u64) -> Result<SurveyProblem> {
    let invalid = |msg: String| Error::Validation(format!("line {line} ({}): {msg}", row.id));
    if row.id.trim().is_empty() {
        return Err(invalid("id must not be empty".into()));
    }
    if row.count_a + row.count_b == 0 {
        return Err(invalid("count_a + count_b must be >= 1".into()));
    }
    let domain: Domain = row.domain.parse().map_err(|e: Error| invalid(e.to_string()))?;
    let sure_option = match row.sure_option.trim().to_ascii_lowercase().as_str() {
        "a" => OptionLabel::A,
        "b" => OptionLabel::B,
        other => return Err(invalid(format!("sure_option must be a or b, got {other:?}"))),
    };
    let p = DeformationIndex::new(row.p).map_err(|e| invalid(e.to_string()))?;
    let gamble = GambleSpec::new(domain, row.stake, row.initial_wealth, p, row.rho)
        .map_err(|e| invalid(e.to_string()))?;
    Ok(SurveyProblem {
        id: row.id,
        description: row.description,
        count_a: row.count_a,
        count_b: row.count_b,
        gamble,
        sure_option,
    })
}

/// Parses a survey from any reader.
pub fn parse_survey<R: Read>(reader: R) -> Result<Vec<SurveyProblem>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::Parse {
            line: 1,
            column: None,
            message: "missing header row".into(),
        });
    }
    for (i, expected) in HEADER.iter().enumerate() {
        match headers.get(i) {
            Some(h) if h == *expected => {}
            found => {
                return Err(Error::Parse {
                    line: 1,
                    column: Some(i + 1),
                    message: format!("expected header {expected:?}, found {found:?}"),
                })
            }
        }
    }
    if headers.len() != HEADER.len() {
        return Err(Error::Parse {
            line: 1,
            column: Some(HEADER.len() + 1),
            message: format!("expected {} columns, found {}", HEADER.len(), headers.len()),
        });
    }
    let mut problems = Vec::new();
    for result in rdr.deserialize::<Row>() {
        let row = result.map_err(csv_error)?;
        let line = problems.len() as u64 + 2;
        problems.push(row_to_problem(row, line)?);
    }
    if problems.is_empty() {
        return Err(Error::Parse {
            line: 2,
            column: None,
            message: "no data rows".into(),
        });
    }
    Ok(problems)
}

pub fn load_survey(path: impl AsRef<Path>) -> Result<Vec<SurveyProblem>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_survey(file)
}

pub fn bundled_survey() -> Vec<SurveyProblem> {
    parse_survey(BUNDLED_SURVEY.as_bytes()).expect("bundled survey is valid")
}
