//! Exact expectiminimax for two-player zero-sum games with chance.
//!
//! Values are always from seat 0's perspective: seat 0 maximizes, seat 1
//! minimizes, chance nodes take the full probability-weighted expectation.
//! Alpha-beta pruning applies at player nodes only; every chance child is
//! solved with a fresh full window, so expectations never mix in bounds.

use std::collections::HashMap;

use crate::fosg::{ActionId, Game, Seat, ToMove};

/// Transposition cache over canonical state keys.
///
/// Only exact values are stored: a node whose search failed outside its
/// alpha-beta window produced a bound, not a value, and caching it would
/// poison later lookups made under wider windows.
#[derive(Debug, Default)]
pub struct SolveCache {
    values: HashMap<String, f64>,
}

impl SolveCache {
    pub fn new() -> Self {
        SolveCache::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn alphabeta<G: Game>(
    game: &G,
    state: &G::State,
    mut alpha: f64,
    mut beta: f64,
    cache: &mut SolveCache,
) -> f64 {
    match game.to_move(state) {
        ToMove::Terminal => game.utility(state, 0),
        ToMove::Chance => {
            let key = game.state_key(state);
            if let Some(&v) = cache.values.get(&key) {
                return v;
            }
            let mut value = 0.0;
            for (action, prob) in game.chance_outcomes(state) {
                let child = game.next_state(state, action);
                value += prob * alphabeta(game, &child, f64::NEG_INFINITY, f64::INFINITY, cache);
            }
            cache.values.insert(key, value);
            value
        }
        ToMove::Player(seat) => {
            let key = game.state_key(state);
            if let Some(&v) = cache.values.get(&key) {
                return v;
            }
            let (alpha0, beta0) = (alpha, beta);
            let maximizing = seat == 0;
            let mut best = if maximizing {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
            for action in game.legal_actions(state) {
                let child = game.next_state(state, action);
                let value = alphabeta(game, &child, alpha, beta, cache);
                if maximizing {
                    best = best.max(value);
                    alpha = alpha.max(best);
                } else {
                    best = best.min(value);
                    beta = beta.min(best);
                }
                if alpha >= beta {
                    break;
                }
            }
            if alpha0 < best && best < beta0 {
                cache.values.insert(key, best);
            }
            best
        }
    }
}

/// Exact game value from seat 0's perspective.
pub fn solve_seat0<G: Game>(game: &G, state: &G::State, cache: &mut SolveCache) -> f64 {
    alphabeta(game, state, f64::NEG_INFINITY, f64::INFINITY, cache)
}

/// Exact game value from `seat`'s perspective.
pub fn solve_for_seat<G: Game>(
    game: &G,
    state: &G::State,
    seat: Seat,
    cache: &mut SolveCache,
) -> f64 {
    let v = solve_seat0(game, state, cache);
    if seat == 0 {
        v
    } else {
        -v
    }
}

/// Exact seat-0 value of the state after each legal action.
///
/// Each child is solved with a full window so every returned value is
/// exact, not a bound.
pub fn solve_action_values<G: Game>(
    game: &G,
    state: &G::State,
    cache: &mut SolveCache,
) -> Vec<(ActionId, f64)> {
    game.legal_actions(state)
        .into_iter()
        .map(|action| {
            let child = game.next_state(state, action);
            (action, solve_seat0(game, &child, cache))
        })
        .collect()
}

/// Reference expectiminimax without pruning or caching, for equivalence
/// checks.
pub fn plain_value_seat0<G: Game>(game: &G, state: &G::State) -> f64 {
    match game.to_move(state) {
        ToMove::Terminal => game.utility(state, 0),
        ToMove::Chance => game
            .chance_outcomes(state)
            .into_iter()
            .map(|(action, prob)| prob * plain_value_seat0(game, &game.next_state(state, action)))
            .sum(),
        ToMove::Player(seat) => {
            let values = game
                .legal_actions(state)
                .into_iter()
                .map(|action| plain_value_seat0(game, &game.next_state(state, action)));
            if seat == 0 {
                values.fold(f64::NEG_INFINITY, f64::max)
            } else {
                values.fold(f64::INFINITY, f64::min)
            }
        }
    }
}
