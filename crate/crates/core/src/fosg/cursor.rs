//! Replay cursor: a world state plus every seat's infostate, advanced in
//! lock step.
//!
//! The cursor is the single place where observations are routed into
//! infostates, so search, belief construction, policy enumeration, and
//! match play all agree on what each seat knows.

use super::{ActionId, Game, Infostate, PublicInfostate, Seat, ToMove};
use crate::error::Error;
use crate::Result;

/// A position in the game tree together with all derived views of it.
pub struct Cursor<'g, G: Game> {
    game: &'g G,
    state: G::State,
    infostates: Vec<Infostate>,
    public: PublicInfostate,
    move_number: usize,
    chance_prob: f64,
    path: Vec<ActionId>,
}

impl<'g, G: Game> Clone for Cursor<'g, G> {
    fn clone(&self) -> Self {
        Cursor {
            game: self.game,
            state: self.state.clone(),
            infostates: self.infostates.clone(),
            public: self.public.clone(),
            move_number: self.move_number,
            chance_prob: self.chance_prob,
            path: self.path.clone(),
        }
    }
}

impl<'g, G: Game> Cursor<'g, G> {
    /// A cursor at the root, before any chance outcome.
    pub fn new(game: &'g G) -> Self {
        Cursor {
            game,
            state: game.initial_state(),
            infostates: (0..game.num_players()).map(Infostate::new).collect(),
            public: PublicInfostate::new(),
            move_number: 0,
            chance_prob: 1.0,
            path: Vec::new(),
        }
    }

    pub fn game(&self) -> &'g G {
        self.game
    }

    pub fn state(&self) -> &G::State {
        &self.state
    }

    pub fn to_move(&self) -> ToMove {
        self.game.to_move(&self.state)
    }

    /// Infostate of one seat at the current position.
    pub fn infostate(&self, seat: Seat) -> &Infostate {
        &self.infostates[seat]
    }

    pub fn public_infostate(&self) -> &PublicInfostate {
        &self.public
    }

    /// Number of actions applied since the root.
    pub fn move_number(&self) -> usize {
        self.move_number
    }

    /// Product of the probabilities of all chance outcomes on the path.
    pub fn chance_prob(&self) -> f64 {
        self.chance_prob
    }

    /// The action sequence from the root to this position.
    pub fn path(&self) -> &[ActionId] {
        &self.path
    }

    /// Applies an action, recording the acting seat's own move and routing
    /// the transition's observation into every infostate.  The action must
    /// be legal; use [`Cursor::try_advance`] for a checked call.
    pub fn advance(&mut self, action: ActionId) {
        match self.game.to_move(&self.state) {
            ToMove::Player(seat) => {
                let label = self.game.action_label(action);
                self.infostates[seat].push_own_action(&label);
            }
            ToMove::Chance => {
                let p = self
                    .game
                    .chance_outcomes(&self.state)
                    .iter()
                    .find(|(a, _)| *a == action)
                    .map(|(_, p)| *p)
                    .unwrap_or(0.0);
                self.chance_prob *= p;
            }
            ToMove::Terminal => {}
        }
        let next = self.game.next_state(&self.state, action);
        let obs = self.game.observation(&self.state, action, &next);
        for (seat, info) in self.infostates.iter_mut().enumerate() {
            info.push_obs(&obs.public, &obs.private[seat]);
        }
        self.public.push_obs(&obs.public);
        self.state = next;
        self.move_number += 1;
        self.path.push(action);
    }

    /// Validated [`Cursor::advance`]: errors on terminal states and illegal
    /// actions.
    pub fn try_advance(&mut self, action: ActionId) -> Result<()> {
        let legal = self.game.try_legal_actions(&self.state)?;
        if !legal.contains(&action) {
            return Err(Error::IllegalAction {
                action: self.game.action_label(action),
                legal: legal
                    .iter()
                    .map(|a| self.game.action_label(*a))
                    .collect::<Vec<_>>()
                    .join(", "),
            });
        }
        self.advance(action);
        Ok(())
    }
}

/// Enumerates the worlds present once all opening chance moves have
/// resolved, each with its exact probability, in a fixed depth-first order.
pub fn enumerate_initial_worlds<G: Game>(game: &G) -> Vec<(G::State, f64)> {
    let mut out = Vec::new();
    let mut stack = vec![(game.initial_state(), 1.0)];
    while let Some((state, prob)) = stack.pop() {
        match game.to_move(&state) {
            ToMove::Chance => {
                // Reverse keeps depth-first order aligned with outcome order.
                for (action, p) in game.chance_outcomes(&state).into_iter().rev() {
                    stack.push((game.next_state(&state, action), prob * p));
                }
            }
            _ => out.push((state, prob)),
        }
    }
    out
}
