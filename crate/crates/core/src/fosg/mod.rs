//! Game abstraction with factored observations.
//!
//! A game exposes world states, an acting seat (player, chance, or
//! terminal), legal actions, exact chance distributions, and terminal
//! utilities.  Applying an action additionally yields an [`Observation`]:
//! one public component seen by everyone and one private component per
//! seat, with the empty string standing for "no observation".
//!
//! [`Infostate`] and [`PublicInfostate`] record observation sequences and
//! encode them into canonical string keys; [`Cursor`] replays a game while
//! maintaining every seat's infostate in lock step with the world state.

mod cursor;
mod infostate;

pub use cursor::{enumerate_initial_worlds, Cursor};
pub use infostate::{InfoEntry, Infostate, PublicInfostate};

use crate::error::Error;
use crate::Result;

/// Player index; seats are numbered from zero.
pub type Seat = usize;

/// Identifier of a move, dense and stable within one game configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub u32);

impl std::fmt::Display for ActionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Who moves in a world state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToMove {
    /// A player seat decides.
    Player(Seat),
    /// Chance resolves with an exact, enumerable outcome distribution.
    Chance,
    /// No moves remain; utilities are defined.
    Terminal,
}

/// What one transition reveals: a public component plus one private
/// component per seat.  Empty strings encode no observation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub public: String,
    pub private: Vec<String>,
}

impl Observation {
    /// An observation with empty public and private components for `players` seats.
    pub fn empty(players: usize) -> Self {
        Observation {
            public: String::new(),
            private: vec![String::new(); players],
        }
    }
}

/// A two-player zero-sum game with explicit chance and factored observations.
///
/// Implementations must be deterministic: identical states and actions give
/// identical successors, observations, and keys.  Legal actions at a player
/// node may depend only on that player's infostate, so that every world in a
/// belief support offers the acting seat the same choices.
pub trait Game: Send + Sync {
    /// Full world state, including all private information.
    type State: Clone + Send + Sync;

    /// Number of player seats (chance is a pseudo-seat, not counted).
    fn num_players(&self) -> usize {
        2
    }

    /// The root state, before any chance outcome has been drawn.
    fn initial_state(&self) -> Self::State;

    /// Who acts in `state`.
    fn to_move(&self, state: &Self::State) -> ToMove;

    /// Actions available to the acting player.  Undefined on chance and
    /// terminal nodes; use [`Game::try_legal_actions`] for a checked call.
    fn legal_actions(&self, state: &Self::State) -> Vec<ActionId>;

    /// Exact outcome distribution at a chance node, in a fixed order.
    fn chance_outcomes(&self, state: &Self::State) -> Vec<(ActionId, f64)>;

    /// Successor state after `action`, without observation bookkeeping.
    fn next_state(&self, state: &Self::State, action: ActionId) -> Self::State;

    /// What the transition `state --action--> next` reveals.
    fn observation(&self, state: &Self::State, action: ActionId, next: &Self::State)
        -> Observation;

    /// Terminal utility for `seat`.  Utilities sum to zero across seats.
    fn utility(&self, state: &Self::State, seat: Seat) -> f64;

    /// Human-readable, bijective label for an action.
    fn action_label(&self, action: ActionId) -> String;

    /// Inverse of [`Game::action_label`].
    fn action_from_label(&self, label: &str) -> Option<ActionId>;

    /// Canonical encoding of a world state, unique per distinct state.
    fn state_key(&self, state: &Self::State) -> String;

    /// Canonical description of the game and its configuration.
    fn name(&self) -> String;

    /// Checked action list: player and chance nodes yield their moves,
    /// terminal states are a domain error.
    fn try_legal_actions(&self, state: &Self::State) -> Result<Vec<ActionId>> {
        match self.to_move(state) {
            ToMove::Player(_) => Ok(self.legal_actions(state)),
            ToMove::Chance => Ok(self.chance_outcomes(state).into_iter().map(|(a, _)| a).collect()),
            ToMove::Terminal => Err(Error::TerminalState {
                key: self.state_key(state),
            }),
        }
    }

    /// Checked transition: validates the action and returns the successor
    /// together with its observation.
    fn try_apply(&self, state: &Self::State, action: ActionId) -> Result<(Self::State, Observation)> {
        let legal = self.try_legal_actions(state)?;
        if !legal.contains(&action) {
            return Err(Error::IllegalAction {
                action: self.action_label(action),
                legal: legal
                    .iter()
                    .map(|a| self.action_label(*a))
                    .collect::<Vec<_>>()
                    .join(", "),
            });
        }
        let next = self.next_state(state, action);
        let obs = self.observation(state, action, &next);
        Ok((next, obs))
    }

    /// Checked utility: errors on non-terminal states and bad seats.
    fn try_utility(&self, state: &Self::State, seat: Seat) -> Result<f64> {
        if seat >= self.num_players() {
            return Err(Error::SeatOutOfRange {
                seat,
                players: self.num_players(),
            });
        }
        match self.to_move(state) {
            ToMove::Terminal => Ok(self.utility(state, seat)),
            _ => Err(Error::NotTerminal {
                key: self.state_key(state),
            }),
        }
    }
}
