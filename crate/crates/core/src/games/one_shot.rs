//! Single-decision game with fixed payoffs.
//!
//! Seat 0 picks one action and the game ends with the configured payoff
//! (seat 1 receives the negation).  There is no chance and no hidden
//! information, which makes dominance and calibration properties of the
//! deciders easy to state exactly.

use crate::error::Error;
use crate::fosg::{ActionId, Game, Observation, Seat, ToMove};
use crate::Result;

/// World state: the chosen action, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OneShotState {
    chosen: Option<u32>,
}

/// The one-decision game; `payoffs[i]` is seat 0's utility for action `i`.
#[derive(Debug, Clone)]
pub struct OneShotGame {
    payoffs: Vec<f64>,
}

impl OneShotGame {
    pub fn new(payoffs: Vec<f64>) -> Result<Self> {
        if payoffs.is_empty() {
            return Err(Error::InvalidConfig {
                message: "one-shot game needs at least one action".into(),
            });
        }
        Ok(OneShotGame { payoffs })
    }
}

impl Game for OneShotGame {
    type State = OneShotState;

    fn initial_state(&self) -> OneShotState {
        OneShotState { chosen: None }
    }

    fn to_move(&self, state: &OneShotState) -> ToMove {
        match state.chosen {
            None => ToMove::Player(0),
            Some(_) => ToMove::Terminal,
        }
    }

    fn legal_actions(&self, _state: &OneShotState) -> Vec<ActionId> {
        (0..self.payoffs.len() as u32).map(ActionId).collect()
    }

    fn chance_outcomes(&self, _state: &OneShotState) -> Vec<(ActionId, f64)> {
        Vec::new()
    }

    fn next_state(&self, _state: &OneShotState, action: ActionId) -> OneShotState {
        OneShotState {
            chosen: Some(action.0),
        }
    }

    fn observation(&self, _state: &OneShotState, action: ActionId, _next: &OneShotState) -> Observation {
        let mut obs = Observation::empty(2);
        obs.public = self.action_label(action);
        obs
    }

    fn utility(&self, state: &OneShotState, seat: Seat) -> f64 {
        let value = self.payoffs[state.chosen.expect("terminal") as usize];
        if seat == 0 {
            value
        } else {
            -value
        }
    }

    fn action_label(&self, action: ActionId) -> String {
        format!("m{}", action.0)
    }

    fn action_from_label(&self, label: &str) -> Option<ActionId> {
        let idx: u32 = label.strip_prefix('m')?.parse().ok()?;
        if (idx as usize) < self.payoffs.len() {
            Some(ActionId(idx))
        } else {
            None
        }
    }

    fn state_key(&self, state: &OneShotState) -> String {
        match state.chosen {
            None => "os[]".to_string(),
            Some(a) => format!("os[{a}]"),
        }
    }

    fn name(&self) -> String {
        format!("one_shot(n={})", self.payoffs.len())
    }
}
