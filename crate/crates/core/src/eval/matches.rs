//! Head-to-head match play between two fixed policies.

use rayon::prelude::*;

use crate::error::Error;
use crate::fosg::{Cursor, Game, ToMove};
use crate::policy::{sample_row, TabularPolicy};
use crate::rng::stream;
use crate::Result;

const MATCH_STREAM: u64 = 0x4d41_5443;

/// Outcome counts for a block of matches, scored from seat 0's side.
#[derive(Debug, Clone)]
pub struct MatchReport {
    pub games: usize,
    pub wins: usize,
    pub draws: usize,
    pub losses: usize,
    /// Wins plus `draw_weight` per draw, over games played.
    pub win_rate: f64,
    /// Half-width of the 95% normal-approximation interval.
    pub ci_halfwidth: f64,
    pub draw_weight: f64,
}

fn play_one<G: Game>(
    game: &G,
    seat0: &TabularPolicy,
    seat1: &TabularPolicy,
    seed: u64,
    index: u64,
) -> Result<f64> {
    let mut rng = stream(seed, MATCH_STREAM, index);
    let mut cursor = Cursor::new(game);
    loop {
        match cursor.to_move() {
            ToMove::Terminal => return game.try_utility(cursor.state(), 0),
            ToMove::Chance => {
                let outcomes = game.chance_outcomes(cursor.state());
                let action = sample_chance(&outcomes, &mut rng);
                cursor.advance(action);
            }
            ToMove::Player(seat) => {
                let policy = if seat == 0 { seat0 } else { seat1 };
                let row = policy.row(cursor.infostate(seat).key())?;
                let action = sample_row(row, &mut rng);
                cursor.advance(action);
            }
        }
    }
}

fn sample_chance<R: rand::Rng>(outcomes: &[(crate::fosg::ActionId, f64)], rng: &mut R) -> crate::fosg::ActionId {
    let total: f64 = outcomes.iter().map(|(_, p)| p).sum();
    let mut r = rng.gen::<f64>() * total;
    for &(action, p) in outcomes {
        r -= p;
        if r <= 0.0 {
            return action;
        }
    }
    outcomes.last().expect("chance node with outcomes").0
}

/// Plays `games` independent matches and scores them for seat 0.
///
/// Each game draws from its own seeded stream, so results do not depend on
/// the worker count.
pub fn play_matches<G: Game>(
    game: &G,
    seat0: &TabularPolicy,
    seat1: &TabularPolicy,
    games: usize,
    seed: u64,
    draw_weight: f64,
) -> Result<MatchReport> {
    if games == 0 {
        return Err(Error::InvalidConfig {
            message: "match count must be positive".to_string(),
        });
    }
    if !(0.0..=1.0).contains(&draw_weight) {
        return Err(Error::InvalidConfig {
            message: format!("draw weight {draw_weight} must lie in [0, 1]"),
        });
    }
    let utilities: Vec<f64> = (0..games as u64)
        .into_par_iter()
        .map(|index| play_one(game, seat0, seat1, seed, index))
        .collect::<Result<Vec<f64>>>()?;
    let mut wins = 0;
    let mut draws = 0;
    let mut losses = 0;
    for u in &utilities {
        if *u > 0.0 {
            wins += 1;
        } else if *u < 0.0 {
            losses += 1;
        } else {
            draws += 1;
        }
    }
    let n = games as f64;
    let win_rate = (wins as f64 + draw_weight * draws as f64) / n;
    let ci_halfwidth = 1.96 * (win_rate * (1.0 - win_rate) / n).sqrt();
    Ok(MatchReport {
        games,
        wins,
        draws,
        losses,
        win_rate,
        ci_halfwidth,
        draw_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fosg::ActionId;
    use crate::games::leduc::LeducGame;
    use crate::games::liars_dice::{LiarsDiceConfig, LiarsDiceGame};
    use crate::policy::enumerate_infostates;

    fn uniform_policy<G: Game>(game: &G, seat: usize) -> TabularPolicy {
        let mut policy = TabularPolicy::new();
        for info in enumerate_infostates(game, seat, None) {
            let belief = crate::belief::private_belief(game, &info).unwrap();
            let legal = game.legal_actions(&belief.support()[0].state);
            let p = 1.0 / legal.len() as f64;
            policy.set_row(info.key(), legal.into_iter().map(|a| (a, p)).collect());
        }
        policy
    }

    fn fold_first_policy(game: &LeducGame) -> TabularPolicy {
        let mut policy = uniform_policy(game, 0);
        let keys: Vec<String> = policy.rows().keys().cloned().collect();
        for key in keys {
            let row = policy.row(&key).unwrap().clone();
            if row.iter().any(|(a, _)| *a == ActionId(0)) {
                let fixed: Vec<(ActionId, f64)> = row
                    .into_iter()
                    .map(|(a, _)| (a, if a == ActionId(0) { 1.0 } else { 0.0 }))
                    .collect();
                policy.set_row(&key, fixed);
            }
        }
        policy
    }

    #[test]
    fn a_seat_that_always_folds_never_wins() {
        let game = LeducGame::default();
        let folder = fold_first_policy(&game);
        let opponent = uniform_policy(&game, 1);
        let report = play_matches(&game, &folder, &opponent, 200, 7, 0.5).unwrap();
        assert_eq!(report.wins, 0);
        assert_eq!(report.draws, 0);
        assert_eq!(report.losses, 200);
        assert_eq!(report.win_rate, 0.0);
    }

    #[test]
    fn outcome_counts_partition_the_games() {
        let game = LiarsDiceGame::new(LiarsDiceConfig::with_faces(2)).unwrap();
        let p0 = uniform_policy(&game, 0);
        let p1 = uniform_policy(&game, 1);
        let report = play_matches(&game, &p0, &p1, 500, 11, 0.5).unwrap();
        assert_eq!(report.wins + report.draws + report.losses, 500);
        let expected =
            (report.wins as f64 + 0.5 * report.draws as f64) / 500.0;
        assert!((report.win_rate - expected).abs() <= 1e-15);
        assert!(report.win_rate > 0.2 && report.win_rate < 0.8);
    }

    #[test]
    fn identical_seeds_reproduce_identical_counts() {
        let game = LiarsDiceGame::new(LiarsDiceConfig::with_faces(2)).unwrap();
        let p0 = uniform_policy(&game, 0);
        let p1 = uniform_policy(&game, 1);
        let a = play_matches(&game, &p0, &p1, 300, 99, 0.5).unwrap();
        let b = play_matches(&game, &p0, &p1, 300, 99, 0.5).unwrap();
        assert_eq!(a.wins, b.wins);
        assert_eq!(a.draws, b.draws);
        assert_eq!(a.losses, b.losses);
        let c = play_matches(&game, &p0, &p1, 300, 100, 0.5).unwrap();
        assert!(c.wins != a.wins || c.losses != a.losses || c.draws != a.draws);
    }

    #[test]
    fn interval_width_matches_the_normal_approximation() {
        let game = LiarsDiceGame::new(LiarsDiceConfig::with_faces(2)).unwrap();
        let p0 = uniform_policy(&game, 0);
        let p1 = uniform_policy(&game, 1);
        let report = play_matches(&game, &p0, &p1, 1000, 3, 0.5).unwrap();
        let expected = 1.96 * (report.win_rate * (1.0 - report.win_rate) / 1000.0).sqrt();
        approx::assert_relative_eq!(report.ci_halfwidth, expected, max_relative = 1e-15);
        assert!(report.ci_halfwidth < 0.032);
    }

    #[test]
    fn rejects_empty_blocks_and_bad_draw_weights() {
        let game = LiarsDiceGame::new(LiarsDiceConfig::with_faces(2)).unwrap();
        let p0 = uniform_policy(&game, 0);
        let p1 = uniform_policy(&game, 1);
        assert!(play_matches(&game, &p0, &p1, 0, 1, 0.5).is_err());
        assert!(play_matches(&game, &p0, &p1, 10, 1, 1.5).is_err());
    }
}
