//! Evaluation harness: opponent-inference scoring, exact best response,
//! lambda heatmaps, match play, and the CSV schemas shared by the CLI.

pub mod best_response;
pub mod heatmap;
pub mod matches;
pub mod tssr;

pub use best_response::{best_response_value, brute_force_best_response, BestResponseReport};
pub use heatmap::{heatmap_sweep, HeatmapCell};
pub use matches::{play_matches, MatchReport};
pub use tssr::{tssr_evaluate, TssrOptions, TssrReport};

use std::str::FromStr;

use crate::belief::LambdaSchedule;
use crate::error::Error;
use crate::fosg::{Cursor, Game, Seat, ToMove};
use crate::policy::{
    enumerate_infostates, stabilize_policy, StabilizationConfig, StabilizedPolicy, TabularPolicy,
};
use crate::search::{Decider, IsmctsDecider, PimcDecider, SearchBudget};
use crate::Result;

/// Search family used to extract a policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Pimc,
    Ismcts,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Pimc => write!(f, "pimc"),
            Algorithm::Ismcts => write!(f, "ismcts"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text {
            "pimc" => Ok(Algorithm::Pimc),
            "ismcts" => Ok(Algorithm::Ismcts),
            other => Err(Error::InvalidConfig {
                message: format!("unknown algorithm {other:?}; expected pimc or ismcts"),
            }),
        }
    }
}

/// Builds the decider for one algorithm, schedule, and budget.
pub fn make_decider<'g, G: Game>(
    game: &'g G,
    algorithm: Algorithm,
    schedule: LambdaSchedule,
    budget: SearchBudget,
) -> Box<dyn Decider + 'g> {
    match algorithm {
        Algorithm::Pimc => Box::new(PimcDecider::new(game, schedule, budget)),
        Algorithm::Ismcts => Box::new(IsmctsDecider::new(game, schedule, budget)),
    }
}

/// Extracts and stabilizes one seat's policy, filling the metadata needed
/// to save it.
pub fn stabilized_policy<G: Game>(
    game: &G,
    algorithm: Algorithm,
    schedule: &LambdaSchedule,
    seat: Seat,
    budget: SearchBudget,
    stabilization: &StabilizationConfig,
    max_moves: Option<usize>,
) -> Result<StabilizedPolicy> {
    let infostates = enumerate_infostates(game, seat, max_moves);
    let decider = make_decider(game, algorithm, schedule.clone(), budget);
    let mut result = stabilize_policy(decider.as_ref(), &infostates, stabilization)?;
    result.policy.set_meta("game", game.name());
    result.policy.set_meta("seat", seat.to_string());
    result.policy.set_meta("lambda", schedule.canonical());
    result.policy.set_meta("seed", stabilization.base_seed.to_string());
    result
        .policy
        .set_meta("budget", budget.determinizations.to_string());
    Ok(result)
}

/// Exact seat-0 expected utility when both seats follow tabular policies.
pub fn expected_utility<G: Game>(
    game: &G,
    seat0_policy: &TabularPolicy,
    seat1_policy: &TabularPolicy,
) -> Result<f64> {
    fn walk<G: Game>(
        game: &G,
        cursor: &Cursor<G>,
        policies: [&TabularPolicy; 2],
    ) -> Result<f64> {
        match cursor.to_move() {
            ToMove::Terminal => game.try_utility(cursor.state(), 0),
            ToMove::Chance => {
                let mut value = 0.0;
                for (action, prob) in game.chance_outcomes(cursor.state()) {
                    let mut child = cursor.clone();
                    child.advance(action);
                    value += prob * walk(game, &child, policies)?;
                }
                Ok(value)
            }
            ToMove::Player(seat) => {
                let row = policies[seat].row(cursor.infostate(seat).key())?.clone();
                let mut value = 0.0;
                for (action, prob) in row {
                    if prob == 0.0 {
                        continue;
                    }
                    let mut child = cursor.clone();
                    child.advance(action);
                    value += prob * walk(game, &child, policies)?;
                }
                Ok(value)
            }
        }
    }
    walk(game, &Cursor::new(game), [seat0_policy, seat1_policy])
}

/// CSV schema `lambda,avg_tssr,ci`.
pub fn tssr_sweep_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("lambda,avg_tssr,ci\n");
    for (lambda, avg, ci) in rows {
        out.push_str(&format!("{lambda},{avg},{ci}\n"));
    }
    out
}

/// CSV schema `lambda,br_utility`.
pub fn exploitability_sweep_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("lambda,br_utility\n");
    for (lambda, value) in rows {
        out.push_str(&format!("{lambda},{value}\n"));
    }
    out
}

/// CSV schema `lambda0,lambda1,br_utility`.
pub fn heatmap_csv(cells: &[HeatmapCell]) -> String {
    let mut out = String::from("lambda0,lambda1,br_utility\n");
    for cell in cells {
        out.push_str(&format!(
            "{},{},{}\n",
            cell.lambda0, cell.lambda1, cell.br_value
        ));
    }
    out
}

/// CSV schema `lambda,win_rate,ci_halfwidth`.
pub fn match_sweep_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("lambda,win_rate,ci_halfwidth\n");
    for (lambda, rate, ci) in rows {
        out.push_str(&format!("{lambda},{rate},{ci}\n"));
    }
    out
}
