//! Bidding dice game with hidden rolls and a wild highest face.
//!
//! Each player secretly rolls `dice_per_player` dice with `faces` sides.
//! Players alternate, starting with seat 0, either raising the standing bid
//! `(count, face)` -- strictly increasing by count, then face -- or
//! challenging it.  The highest face is wild: it counts toward every other
//! face, while a bid on the wild face itself counts only actual wild dice.
//! A challenged bid stands when the table shows at least `count` matching
//! dice; the loser of the challenge loses the game (utility -1, winner +1).

use crate::fosg::{ActionId, Game, Observation, Seat, ToMove};
use crate::error::Error;
use crate::Result;

/// Configuration: dice per player and faces per die; two seats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiarsDiceConfig {
    pub dice_per_player: usize,
    pub faces: usize,
}

impl LiarsDiceConfig {
    /// One die each with `faces` sides.
    pub fn with_faces(faces: usize) -> Self {
        LiarsDiceConfig {
            dice_per_player: 1,
            faces,
        }
    }

    /// Total dice on the table.
    pub fn total_dice(&self) -> usize {
        2 * self.dice_per_player
    }

    fn validate(&self) -> Result<()> {
        if self.faces < 2 {
            return Err(Error::InvalidConfig {
                message: format!("need at least 2 faces, got {}", self.faces),
            });
        }
        if self.dice_per_player < 1 {
            return Err(Error::InvalidConfig {
                message: "need at least 1 die per player".into(),
            });
        }
        Ok(())
    }
}

/// A bid: at least `count` dice showing `face` across the table.
pub type Bid = (u8, u8);

/// All bids strictly above `last` (by count, then face), in ascending order.
/// With no standing bid, every `(count, face)` combination is open and
/// challenging is not available.
pub fn ld_legal_bids(config: &LiarsDiceConfig, last: Option<Bid>) -> Vec<Bid> {
    let mut bids = Vec::new();
    for count in 1..=config.total_dice() as u8 {
        for face in 1..=config.faces as u8 {
            let above = match last {
                None => true,
                Some((lc, lf)) => count > lc || (count == lc && face > lf),
            };
            if above {
                bids.push((count, face));
            }
        }
    }
    bids
}

/// Whether a challenged bid stands, given every die on the table.
/// Wild dice (highest face) count toward every face but their own.
pub fn ld_resolve_challenge(config: &LiarsDiceConfig, bid: Bid, all_dice: &[u8]) -> bool {
    let wild = config.faces as u8;
    let (count, face) = bid;
    let matching = all_dice
        .iter()
        .filter(|&&d| d == face || (face != wild && d == wild))
        .count();
    matching >= count as usize
}

/// World state: both rolls (dealt one seat at a time), the bid history, and
/// whether a challenge ended the game.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiarsDiceState {
    rolls: [Option<Vec<u8>>; 2],
    bids: Vec<Bid>,
    challenger: Option<Seat>,
    to_act: Seat,
}

impl LiarsDiceState {
    pub fn roll(&self, seat: Seat) -> Option<&[u8]> {
        self.rolls[seat].as_deref()
    }

    pub fn bids(&self) -> &[Bid] {
        &self.bids
    }
}

/// The dice game as a [`Game`].
#[derive(Debug, Clone)]
pub struct LiarsDiceGame {
    config: LiarsDiceConfig,
}

impl LiarsDiceGame {
    pub fn new(config: LiarsDiceConfig) -> Result<Self> {
        config.validate()?;
        Ok(LiarsDiceGame { config })
    }

    pub fn config(&self) -> &LiarsDiceConfig {
        &self.config
    }

    fn bid_id(&self, bid: Bid) -> ActionId {
        ActionId((bid.0 as u32 - 1) * self.config.faces as u32 + (bid.1 as u32 - 1))
    }

    fn id_bid(&self, id: ActionId) -> Option<Bid> {
        let faces = self.config.faces as u32;
        let n = self.config.total_dice() as u32 * faces;
        if id.0 < n {
            Some(((id.0 / faces + 1) as u8, (id.0 % faces + 1) as u8))
        } else {
            None
        }
    }

    fn challenge_id(&self) -> ActionId {
        ActionId((self.config.total_dice() * self.config.faces) as u32)
    }

    /// Chance action encoding one seat's full roll as base-`faces` digits.
    fn roll_id(&self, roll: &[u8]) -> ActionId {
        let mut idx = 0u32;
        for &face in roll.iter().rev() {
            idx = idx * self.config.faces as u32 + (face as u32 - 1);
        }
        ActionId(self.challenge_id().0 + 1 + idx)
    }

    fn id_roll(&self, id: ActionId) -> Option<Vec<u8>> {
        let base = self.challenge_id().0 + 1;
        if id.0 < base {
            return None;
        }
        let mut idx = id.0 - base;
        let mut roll = Vec::with_capacity(self.config.dice_per_player);
        for _ in 0..self.config.dice_per_player {
            roll.push((idx % self.config.faces as u32 + 1) as u8);
            idx /= self.config.faces as u32;
        }
        if idx == 0 {
            Some(roll)
        } else {
            None
        }
    }

    fn all_dice(&self, state: &LiarsDiceState) -> Vec<u8> {
        let mut dice = Vec::new();
        for roll in state.rolls.iter().flatten() {
            dice.extend_from_slice(roll);
        }
        dice
    }

    fn roll_label(roll: &[u8]) -> String {
        let faces: Vec<String> = roll.iter().map(|f| f.to_string()).collect();
        format!("roll:{}", faces.join(","))
    }
}

impl Game for LiarsDiceGame {
    type State = LiarsDiceState;

    fn initial_state(&self) -> LiarsDiceState {
        LiarsDiceState {
            rolls: [None, None],
            bids: Vec::new(),
            challenger: None,
            to_act: 0,
        }
    }

    fn to_move(&self, state: &LiarsDiceState) -> ToMove {
        if state.rolls.iter().any(|r| r.is_none()) {
            ToMove::Chance
        } else if state.challenger.is_some() {
            ToMove::Terminal
        } else {
            ToMove::Player(state.to_act)
        }
    }

    fn legal_actions(&self, state: &LiarsDiceState) -> Vec<ActionId> {
        let mut actions: Vec<ActionId> = ld_legal_bids(&self.config, state.bids.last().copied())
            .into_iter()
            .map(|b| self.bid_id(b))
            .collect();
        if !state.bids.is_empty() {
            actions.push(self.challenge_id());
        }
        actions
    }

    fn chance_outcomes(&self, state: &LiarsDiceState) -> Vec<(ActionId, f64)> {
        debug_assert!(state.rolls.iter().any(|r| r.is_none()));
        let n = (self.config.faces as u64).pow(self.config.dice_per_player as u32);
        let p = 1.0 / n as f64;
        let mut roll = vec![1u8; self.config.dice_per_player];
        let mut out = Vec::with_capacity(n as usize);
        loop {
            out.push((self.roll_id(&roll), p));
            let mut i = 0;
            loop {
                if i == roll.len() {
                    return out;
                }
                if roll[i] < self.config.faces as u8 {
                    roll[i] += 1;
                    roll[..i].iter_mut().for_each(|f| *f = 1);
                    break;
                }
                i += 1;
            }
        }
    }

    fn next_state(&self, state: &LiarsDiceState, action: ActionId) -> LiarsDiceState {
        let mut next = state.clone();
        if state.rolls[0].is_none() || state.rolls[1].is_none() {
            let seat = usize::from(state.rolls[0].is_some());
            next.rolls[seat] = Some(self.id_roll(action).expect("chance action is a roll"));
        } else if action == self.challenge_id() {
            next.challenger = Some(state.to_act);
        } else {
            next.bids.push(self.id_bid(action).expect("player action is a bid"));
            next.to_act = 1 - state.to_act;
        }
        next
    }

    fn observation(
        &self,
        state: &LiarsDiceState,
        action: ActionId,
        _next: &LiarsDiceState,
    ) -> Observation {
        let mut obs = Observation::empty(2);
        if state.rolls[0].is_none() || state.rolls[1].is_none() {
            let seat = usize::from(state.rolls[0].is_some());
            let roll = self.id_roll(action).expect("chance action is a roll");
            obs.private[seat] = Self::roll_label(&roll);
        } else {
            obs.public = self.action_label(action);
        }
        obs
    }

    fn utility(&self, state: &LiarsDiceState, seat: Seat) -> f64 {
        let challenger = state.challenger.expect("terminal state has a challenger");
        let bid = *state.bids.last().expect("challenge requires a bid");
        let stands = ld_resolve_challenge(&self.config, bid, &self.all_dice(state));
        let loser = if stands { challenger } else { 1 - challenger };
        if seat == loser {
            -1.0
        } else {
            1.0
        }
    }

    fn action_label(&self, action: ActionId) -> String {
        if action == self.challenge_id() {
            "challenge".to_string()
        } else if let Some((count, face)) = self.id_bid(action) {
            format!("bid:{count}x{face}")
        } else {
            Self::roll_label(&self.id_roll(action).expect("action in range"))
        }
    }

    fn action_from_label(&self, label: &str) -> Option<ActionId> {
        if label == "challenge" {
            return Some(self.challenge_id());
        }
        if let Some(rest) = label.strip_prefix("bid:") {
            let (c, f) = rest.split_once('x')?;
            let bid: Bid = (c.parse().ok()?, f.parse().ok()?);
            if bid.0 >= 1
                && bid.0 as usize <= self.config.total_dice()
                && bid.1 >= 1
                && bid.1 as usize <= self.config.faces
            {
                return Some(self.bid_id(bid));
            }
            return None;
        }
        if let Some(rest) = label.strip_prefix("roll:") {
            let roll: Option<Vec<u8>> = rest.split(',').map(|f| f.parse().ok()).collect();
            let roll = roll?;
            if roll.len() == self.config.dice_per_player
                && roll.iter().all(|&f| f >= 1 && f as usize <= self.config.faces)
            {
                return Some(self.roll_id(&roll));
            }
            return None;
        }
        None
    }

    fn state_key(&self, state: &LiarsDiceState) -> String {
        let roll_part = |r: &Option<Vec<u8>>| match r {
            Some(roll) => roll
                .iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join(","),
            None => "?".to_string(),
        };
        let bids: Vec<String> = state.bids.iter().map(|b| format!("{}x{}", b.0, b.1)).collect();
        let ch = match state.challenger {
            Some(seat) => format!("|ch{seat}"),
            None => String::new(),
        };
        format!(
            "ld[{};{}|{}{}]",
            roll_part(&state.rolls[0]),
            roll_part(&state.rolls[1]),
            bids.join(","),
            ch
        )
    }

    fn name(&self) -> String {
        format!(
            "liars_dice(dice={},faces={})",
            self.config.dice_per_player, self.config.faces
        )
    }
}
