//! True State Sampling Ratio: how sharply an opponent can infer a seat's
//! hidden infostate from its observed actions.
//!
//! At an opponent decision node the candidates are every seat-i infostate
//! consistent with the opponent's own infostate (membership only).  The
//! posterior over candidates takes the chance prior times the likelihood of
//! seat i's observed actions under its policy; eta is the posterior mass on
//! the true candidate, and TSSR = eta * candidate-count.  A value of 1
//! means the actions leaked nothing beyond uniform guessing.

use std::collections::BTreeMap;

use crate::belief::consistent_worlds;
use crate::fosg::{Cursor, Game, Infostate, Seat, ToMove};
use crate::policy::TabularPolicy;
use crate::Result;

/// Evaluation switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct TssrOptions {
    /// Score only the opponent's first decision at each trajectory instead
    /// of every opponent decision node.
    pub first_decision_only: bool,
}

/// One scored (opponent infostate, true seat-i infostate) pair.
#[derive(Debug, Clone)]
pub struct TssrRecord {
    pub opponent_key: String,
    pub true_key: String,
    pub candidates: usize,
    pub eta: f64,
    pub tssr: f64,
    /// Total reach probability of the histories behind this record.
    pub weight: f64,
}

/// Reach-weighted TSSR summary.
#[derive(Debug, Clone)]
pub struct TssrReport {
    pub records: Vec<TssrRecord>,
    pub average: f64,
    /// 95% half-width from the weighted variance and effective sample size.
    pub ci: f64,
    /// Distinct opponent infostates scored.
    pub nodes: usize,
    pub seat: Seat,
    pub lambda: Option<String>,
}

struct Posterior {
    /// Candidate seat-i key -> (prior * likelihood) mass.
    masses: BTreeMap<String, f64>,
    total: f64,
}

fn posterior_at<G: Game>(
    game: &G,
    opponent_info: &Infostate,
    policy: &TabularPolicy,
    seat: Seat,
) -> Result<Posterior> {
    let worlds = consistent_worlds(game, opponent_info)?;
    let mut masses: BTreeMap<String, f64> = BTreeMap::new();
    for world in worlds.support() {
        let mut likelihood = 1.0;
        let mut cursor = Cursor::new(game);
        for &action in &world.path {
            if matches!(cursor.to_move(), ToMove::Player(s) if s == seat) {
                likelihood *= policy.prob(cursor.infostate(seat).key(), action)?;
            }
            cursor.advance(action);
        }
        *masses.entry(world.seat_keys[seat].clone()).or_insert(0.0) +=
            world.prior * likelihood;
    }
    let total = masses.values().sum();
    Ok(Posterior { masses, total })
}

/// Scores how much `policy` (played by `seat`) reveals to the opposing
/// seat, which plays `opponent_policy`.  Averages over every opponent
/// decision node reachable under both policies, weighted by reach.
pub fn tssr_evaluate<G: Game>(
    game: &G,
    policy: &TabularPolicy,
    seat: Seat,
    opponent_policy: &TabularPolicy,
    options: TssrOptions,
) -> Result<TssrReport> {
    let opponent = 1 - seat;
    // (opponent key, true seat key) -> accumulated reach.
    let mut reached: BTreeMap<(String, String), f64> = BTreeMap::new();
    let mut opponent_infos: BTreeMap<String, Infostate> = BTreeMap::new();
    let mut stack = vec![(Cursor::new(game), 1.0f64)];
    while let Some((cursor, reach)) = stack.pop() {
        match cursor.to_move() {
            ToMove::Terminal => continue,
            ToMove::Chance => {
                for (action, prob) in game.chance_outcomes(cursor.state()) {
                    if prob == 0.0 {
                        continue;
                    }
                    let mut child = cursor.clone();
                    child.advance(action);
                    stack.push((child, reach * prob));
                }
            }
            ToMove::Player(s) => {
                if s == opponent {
                    let info = cursor.infostate(opponent);
                    if !options.first_decision_only || info.decisions() == 0 {
                        let pair = (
                            info.key().to_string(),
                            cursor.infostate(seat).key().to_string(),
                        );
                        opponent_infos
                            .entry(pair.0.clone())
                            .or_insert_with(|| info.clone());
                        *reached.entry(pair).or_insert(0.0) += reach;
                    }
                }
                let acting = if s == seat { policy } else { opponent_policy };
                let row = acting.row(cursor.infostate(s).key())?.clone();
                for (action, prob) in row {
                    if prob == 0.0 {
                        continue;
                    }
                    let mut child = cursor.clone();
                    child.advance(action);
                    stack.push((child, reach * prob));
                }
            }
        }
    }

    let mut posteriors: BTreeMap<String, Posterior> = BTreeMap::new();
    for (key, info) in &opponent_infos {
        posteriors.insert(key.clone(), posterior_at(game, info, policy, seat)?);
    }

    let mut records = Vec::with_capacity(reached.len());
    for ((opponent_key, true_key), weight) in reached {
        let posterior = &posteriors[&opponent_key];
        let candidates = posterior.masses.len();
        let eta = if posterior.total > 0.0 {
            posterior.masses.get(&true_key).copied().unwrap_or(0.0) / posterior.total
        } else {
            0.0
        };
        records.push(TssrRecord {
            opponent_key,
            true_key,
            candidates,
            eta,
            tssr: eta * candidates as f64,
            weight,
        });
    }

    let total_weight: f64 = records.iter().map(|r| r.weight).sum();
    let average = records
        .iter()
        .map(|r| r.weight * r.tssr)
        .sum::<f64>()
        / total_weight;
    let variance = records
        .iter()
        .map(|r| r.weight * (r.tssr - average).powi(2))
        .sum::<f64>()
        / total_weight;
    let effective_n = total_weight * total_weight
        / records.iter().map(|r| r.weight * r.weight).sum::<f64>();
    let ci = 1.96 * (variance / effective_n).sqrt();
    Ok(TssrReport {
        nodes: posteriors.len(),
        seat,
        lambda: policy.meta().get("lambda").cloned(),
        records,
        average,
        ci,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::private_belief;
    use crate::fosg::ActionId;
    use crate::games::liars_dice::{LiarsDiceConfig, LiarsDiceGame};
    use crate::policy::enumerate_infostates;
    use crate::rng::stream;
    use rand::Rng;

    fn two_face_game() -> LiarsDiceGame {
        LiarsDiceGame::new(LiarsDiceConfig::with_faces(2)).unwrap()
    }

    fn legal_at(game: &LiarsDiceGame, info: &Infostate) -> Vec<ActionId> {
        let belief = private_belief(game, info).unwrap();
        game.legal_actions(&belief.support()[0].state)
    }

    fn uniform_policy(game: &LiarsDiceGame, seat: Seat) -> TabularPolicy {
        let mut policy = TabularPolicy::new();
        for info in enumerate_infostates(game, seat, None) {
            let legal = legal_at(game, &info);
            let p = 1.0 / legal.len() as f64;
            policy.set_row(info.key(), legal.into_iter().map(|a| (a, p)).collect());
        }
        policy
    }

    /// Rows depend only on the public projection, drawn from a seeded rng.
    fn public_constant_policy(game: &LiarsDiceGame, seat: Seat) -> TabularPolicy {
        let mut policy = TabularPolicy::new();
        for info in enumerate_infostates(game, seat, None) {
            let legal = legal_at(game, &info);
            let mut rng = stream(
                77,
                crate::rng::fnv1a(info.public_projection().key().as_bytes()),
                seat as u64,
            );
            let raw: Vec<f64> = legal.iter().map(|_| rng.gen::<f64>() + 0.05).collect();
            let total: f64 = raw.iter().sum();
            policy.set_row(
                info.key(),
                legal.into_iter().zip(raw).map(|(a, w)| (a, w / total)).collect(),
            );
        }
        policy
    }

    /// First decision reveals the die: a 1 opens 1x1, a 2 opens 1x2.
    fn revealing_policy(game: &LiarsDiceGame) -> TabularPolicy {
        let mut policy = TabularPolicy::new();
        for info in enumerate_infostates(game, 0, None) {
            let legal = legal_at(game, &info);
            let choice = if info.decisions() == 0 {
                let face = if info.key().contains("roll:1") { 1 } else { 2 };
                game.action_from_label(&format!("bid:1x{face}")).unwrap()
            } else {
                legal[0]
            };
            policy.set_row(
                info.key(),
                legal
                    .into_iter()
                    .map(|a| (a, if a == choice { 1.0 } else { 0.0 }))
                    .collect(),
            );
        }
        policy
    }

    #[test]
    fn uniform_policy_scores_exactly_one() {
        let game = two_face_game();
        let seat0 = uniform_policy(&game, 0);
        let seat1 = uniform_policy(&game, 1);
        let report =
            tssr_evaluate(&game, &seat0, 0, &seat1, TssrOptions::default()).unwrap();
        assert!((report.average - 1.0).abs() <= 1e-9, "average {}", report.average);
        for record in &report.records {
            assert!((record.tssr - 1.0).abs() <= 1e-9);
            assert_eq!(record.candidates, 2);
        }
    }

    #[test]
    fn public_constant_rows_score_exactly_one() {
        let game = two_face_game();
        let seat0 = public_constant_policy(&game, 0);
        let seat1 = uniform_policy(&game, 1);
        let report =
            tssr_evaluate(&game, &seat0, 0, &seat1, TssrOptions::default()).unwrap();
        assert!((report.average - 1.0).abs() <= 1e-9, "average {}", report.average);
        for record in &report.records {
            assert!((record.tssr - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn fully_revealing_policy_scores_the_candidate_count() {
        let game = two_face_game();
        let seat0 = revealing_policy(&game);
        let seat1 = uniform_policy(&game, 1);
        let report =
            tssr_evaluate(&game, &seat0, 0, &seat1, TssrOptions::default()).unwrap();
        assert!((report.average - 2.0).abs() <= 1e-9, "average {}", report.average);
    }

    #[test]
    fn values_stay_within_the_candidate_bound() {
        let game = two_face_game();
        for seed in 0..5u64 {
            let mut seat0 = TabularPolicy::new();
            for info in enumerate_infostates(&game, 0, None) {
                let legal = legal_at(&game, &info);
                let mut rng = stream(seed, crate::rng::fnv1a(info.key().as_bytes()), 0);
                let raw: Vec<f64> = legal.iter().map(|_| rng.gen::<f64>()).collect();
                let total: f64 = raw.iter().sum();
                seat0.set_row(
                    info.key(),
                    legal.into_iter().zip(raw).map(|(a, w)| (a, w / total)).collect(),
                );
            }
            let seat1 = uniform_policy(&game, 1);
            let report =
                tssr_evaluate(&game, &seat0, 0, &seat1, TssrOptions::default()).unwrap();
            assert!(report.average >= 0.0);
            for record in &report.records {
                assert!(record.tssr >= -1e-12);
                assert!(record.tssr <= record.candidates as f64 + 1e-12);
                assert!(record.eta >= 0.0 && record.eta <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn first_decision_flag_restricts_the_node_set() {
        let game = two_face_game();
        let seat0 = uniform_policy(&game, 0);
        let seat1 = uniform_policy(&game, 1);
        let all = tssr_evaluate(&game, &seat0, 0, &seat1, TssrOptions::default()).unwrap();
        let first = tssr_evaluate(
            &game,
            &seat0,
            0,
            &seat1,
            TssrOptions {
                first_decision_only: true,
            },
        )
        .unwrap();
        // Seat 1's first decision follows one of 4 opening bids with one of
        // 2 dice: 8 infostates, each seen with both true seat-0 dice.
        assert_eq!(first.nodes, 8);
        assert_eq!(first.records.len(), 16);
        assert!(first.nodes < all.nodes);
        let weight: f64 = first.records.iter().map(|r| r.weight).sum();
        assert!((weight - 1.0).abs() <= 1e-9, "every trajectory scores once");
    }

    #[test]
    fn sharper_rows_leak_more_than_uniform_ones() {
        // A half-revealing policy (die 1 always opens 1x1, die 2 mixes)
        // must sit strictly between the uniform and revealing extremes.
        let game = two_face_game();
        let mut seat0 = uniform_policy(&game, 0);
        for info in enumerate_infostates(&game, 0, None) {
            if info.decisions() == 0 && info.key().contains("roll:1") {
                let legal = legal_at(&game, &info);
                let opening = game.action_from_label("bid:1x1").unwrap();
                seat0.set_row(
                    info.key(),
                    legal
                        .into_iter()
                        .map(|a| (a, if a == opening { 1.0 } else { 0.0 }))
                        .collect(),
                );
            }
        }
        let seat1 = uniform_policy(&game, 1);
        let report =
            tssr_evaluate(&game, &seat0, 0, &seat1, TssrOptions::default()).unwrap();
        assert!(report.average > 1.0 + 1e-6);
        assert!(report.average < 2.0 - 1e-6);
    }
}
