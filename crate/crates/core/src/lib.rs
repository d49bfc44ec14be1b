//! Time-average decision model for simple gambles.
//!
//! A gamble that pays a relative wealth change `x` with probability `p`,
//! repeated indefinitely, grows wealth by the factor `(1+x)^p` per round,
//! whereas its ensemble average grows it by `1 + p·x`. This crate builds the
//! decision model on top of that distinction:
//!
//! * [`deformed`]: the deformed logarithm `ln_p` and exponential `e_p`.
//! * [`gamble`]: time-average factors, the meiosis (gains) and hyperbole
//!   (losses) evaluators, decision rules, the S-curve and the risk-seeking
//!   crossover.
//! * [`contrast`]: contrast ratio between time averages in dB and the
//!   fuzzy/crisp classification.
//! * [`sim`]: Monte Carlo wealth trajectories checking the analytic factors.
//! * [`survey`]: response-share entropy and model agreement for choice polls.

pub mod contrast;
pub mod deformed;
mod error;
pub mod gamble;
pub mod numfmt;
pub mod roots;
pub mod sim;
pub mod survey;

pub use contrast::{classify, cr_db, fuzzy_boundary, Classification, ContrastReport};
pub use deformed::{exp_p, ln_p, DeformationIndex};
pub use error::{Error, Result};
pub use gamble::{
    decide, decide_gain, decide_loss, hyperbole_minus, meiosis_plus, risk_seeking_crossover,
    s_curve, time_average_factor_risky, time_average_factor_sure, Choice, Decision, Domain,
    GambleSpec, DEFAULT_RHO,
};
pub use sim::{divergence_demo, simulate, DivergenceRow, SimConfig, SimSummary};
pub use survey::{analyze, binary_entropy, load_survey, AgreementReport, SurveyProblem};
