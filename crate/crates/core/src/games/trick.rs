//! Two-suit trick-taking card game with a hidden talon.
//!
//! The deck has two suits of equal length.  Each player is dealt half of
//! the non-hidden cards; the talon stays face down for the whole game, so
//! deals remain uncertain even after all tricks are played.  Seat 0 leads
//! the first trick.  The follower must follow the led suit when possible;
//! an off-suit card never wins.  The higher rank in the led suit takes the
//! trick and its winner leads next.  Taking more tricks than the opponent
//! wins (+1/-1); an even split is a draw (0/0).

use super::{binom, combo_rank, combo_unrank};
use crate::error::Error;
use crate::fosg::{ActionId, Game, Observation, Seat, ToMove};
use crate::Result;

/// Configuration: deck size and talon size; two suits of equal ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrickGameConfig {
    pub total_cards: usize,
    pub hidden_cards: usize,
}

impl TrickGameConfig {
    pub fn suits(&self) -> usize {
        2
    }

    pub fn ranks_per_suit(&self) -> usize {
        self.total_cards / self.suits()
    }

    /// Cards dealt to each seat.
    pub fn hand_size(&self) -> usize {
        (self.total_cards - self.hidden_cards) / 2
    }

    fn validate(&self) -> Result<()> {
        if !matches!(self.total_cards, 10 | 20) {
            return Err(Error::InvalidConfig {
                message: format!("total_cards must be 10 or 20, got {}", self.total_cards),
            });
        }
        if !matches!(self.hidden_cards, 2 | 6) {
            return Err(Error::InvalidConfig {
                message: format!("hidden_cards must be 2 or 6, got {}", self.hidden_cards),
            });
        }
        if (self.total_cards - self.hidden_cards) % 2 != 0 || self.hand_size() == 0 {
            return Err(Error::InvalidConfig {
                message: "hands must be equal and non-empty".into(),
            });
        }
        Ok(())
    }
}

/// Card id: `suit * ranks_per_suit + (rank - 1)`.
pub type Card = u8;

/// Winner of a two-card trick: the follower only when it followed suit
/// with a higher rank.
pub fn trick_winner(config: &TrickGameConfig, leader_card: Card, follower_card: Card) -> Seat {
    let ranks = config.ranks_per_suit() as u8;
    let (lead_suit, lead_rank) = (leader_card / ranks, leader_card % ranks);
    let (follow_suit, follow_rank) = (follower_card / ranks, follower_card % ranks);
    if follow_suit == lead_suit && follow_rank > lead_rank {
        1
    } else {
        0
    }
}

/// Cards the follower may play from `hand` against `led`: the led suit when
/// held, otherwise the whole hand.
pub fn trick_follow_constraint(config: &TrickGameConfig, hand: &[Card], led: Card) -> Vec<Card> {
    let ranks = config.ranks_per_suit() as u8;
    let lead_suit = led / ranks;
    let following: Vec<Card> = hand.iter().copied().filter(|c| c / ranks == lead_suit).collect();
    if following.is_empty() {
        hand.to_vec()
    } else {
        following
    }
}

/// World state: remaining hands, the talon, the trick in progress, and the
/// running trick count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrickState {
    hands: [Option<Vec<Card>>; 2],
    hidden: Vec<Card>,
    lead: Option<(Seat, Card)>,
    tricks: [u8; 2],
    to_act: Seat,
    plays: Vec<Card>,
}

impl TrickState {
    pub fn hand(&self, seat: Seat) -> Option<&[Card]> {
        self.hands[seat].as_deref()
    }

    pub fn tricks(&self) -> [u8; 2] {
        self.tricks
    }
}

/// The trick game as a [`Game`].
#[derive(Debug, Clone)]
pub struct TrickGame {
    config: TrickGameConfig,
}

impl TrickGame {
    pub fn new(config: TrickGameConfig) -> Result<Self> {
        config.validate()?;
        Ok(TrickGame { config })
    }

    pub fn config(&self) -> &TrickGameConfig {
        &self.config
    }

    fn hand_size(&self) -> usize {
        self.config.hand_size()
    }

    /// Chance ids: seat-0 deals first, seat-1 deals after, both ranked over
    /// subsets of the full deck.
    fn deal_id(&self, seat: Seat, hand: &[Card]) -> ActionId {
        let base = self.config.total_cards as u32
            + seat as u32 * binom(self.config.total_cards, self.hand_size()) as u32;
        ActionId(base + combo_rank(self.config.total_cards, hand) as u32)
    }

    fn id_deal(&self, id: ActionId) -> Option<(Seat, Vec<Card>)> {
        let per_seat = binom(self.config.total_cards, self.hand_size()) as u32;
        let offset = id.0.checked_sub(self.config.total_cards as u32)?;
        let seat = (offset / per_seat) as usize;
        if seat > 1 {
            return None;
        }
        Some((
            seat,
            combo_unrank(
                self.config.total_cards,
                self.hand_size(),
                u64::from(offset % per_seat),
            ),
        ))
    }

    pub fn card_label(&self, card: Card) -> String {
        let ranks = self.config.ranks_per_suit() as u8;
        let suit = if card / ranks == 0 { 'a' } else { 'b' };
        format!("{}{}", suit, card % ranks + 1)
    }

    fn card_from_label(&self, label: &str) -> Option<Card> {
        let ranks = self.config.ranks_per_suit() as u8;
        let mut chars = label.chars();
        let suit = match chars.next()? {
            'a' => 0u8,
            'b' => 1u8,
            _ => return None,
        };
        let rank: u8 = chars.as_str().parse().ok()?;
        if rank >= 1 && rank <= ranks {
            Some(suit * ranks + rank - 1)
        } else {
            None
        }
    }

    fn hand_label(&self, hand: &[Card]) -> String {
        hand.iter().map(|&c| self.card_label(c)).collect::<Vec<_>>().join(",")
    }
}

impl Game for TrickGame {
    type State = TrickState;

    fn initial_state(&self) -> TrickState {
        TrickState {
            hands: [None, None],
            hidden: Vec::new(),
            lead: None,
            tricks: [0, 0],
            to_act: 0,
            plays: Vec::new(),
        }
    }

    fn to_move(&self, state: &TrickState) -> ToMove {
        if state.hands.iter().any(|h| h.is_none()) {
            ToMove::Chance
        } else if state.hands[0].as_ref().is_some_and(|h| h.is_empty()) && state.lead.is_none() {
            ToMove::Terminal
        } else {
            ToMove::Player(state.to_act)
        }
    }

    fn legal_actions(&self, state: &TrickState) -> Vec<ActionId> {
        let hand = state.hands[state.to_act].as_deref().expect("hands dealt");
        let cards = match state.lead {
            None => hand.to_vec(),
            Some((_, led)) => trick_follow_constraint(&self.config, hand, led),
        };
        cards.into_iter().map(|c| ActionId(u32::from(c))).collect()
    }

    fn chance_outcomes(&self, state: &TrickState) -> Vec<(ActionId, f64)> {
        let deck: Vec<Card> = match &state.hands[0] {
            None => (0..self.config.total_cards as u8).collect(),
            Some(hand0) => (0..self.config.total_cards as u8)
                .filter(|c| !hand0.contains(c))
                .collect(),
        };
        let seat = usize::from(state.hands[0].is_some());
        let n = binom(deck.len(), self.hand_size());
        let p = 1.0 / n as f64;
        (0..n)
            .map(|rank| {
                let local = combo_unrank(deck.len(), self.hand_size(), rank);
                let hand: Vec<Card> = local.iter().map(|&i| deck[i as usize]).collect();
                (self.deal_id(seat, &hand), p)
            })
            .collect()
    }

    fn next_state(&self, state: &TrickState, action: ActionId) -> TrickState {
        let mut next = state.clone();
        if state.hands.iter().any(|h| h.is_none()) {
            let (seat, hand) = self.id_deal(action).expect("chance action is a deal");
            if seat == 1 {
                next.hidden = (0..self.config.total_cards as u8)
                    .filter(|c| !hand.contains(c) && !state.hands[0].as_ref().unwrap().contains(c))
                    .collect();
            }
            next.hands[seat] = Some(hand);
            return next;
        }
        let card = action.0 as Card;
        let hand = next.hands[state.to_act].as_mut().expect("hands dealt");
        hand.retain(|&c| c != card);
        next.plays.push(card);
        match state.lead {
            None => {
                next.lead = Some((state.to_act, card));
                next.to_act = 1 - state.to_act;
            }
            Some((leader, led)) => {
                let winner = if leader == 0 {
                    trick_winner(&self.config, led, card)
                } else {
                    1 - trick_winner(&self.config, led, card)
                };
                next.tricks[winner] += 1;
                next.lead = None;
                next.to_act = winner;
            }
        }
        next
    }

    fn observation(&self, state: &TrickState, action: ActionId, _next: &TrickState) -> Observation {
        let mut obs = Observation::empty(2);
        if state.hands.iter().any(|h| h.is_none()) {
            let (seat, hand) = self.id_deal(action).expect("chance action is a deal");
            obs.private[seat] = format!("deal:{}", self.hand_label(&hand));
        } else {
            obs.public = self.action_label(action);
        }
        obs
    }

    fn utility(&self, state: &TrickState, seat: Seat) -> f64 {
        let [a, b] = state.tricks;
        let diff = f64::from(a) - f64::from(b);
        let sign = if diff > 0.0 {
            1.0
        } else if diff < 0.0 {
            -1.0
        } else {
            0.0
        };
        if seat == 0 {
            sign
        } else {
            -sign
        }
    }

    fn action_label(&self, action: ActionId) -> String {
        if (action.0 as usize) < self.config.total_cards {
            format!("play:{}", self.card_label(action.0 as Card))
        } else {
            let (seat, hand) = self.id_deal(action).expect("action in range");
            format!("deal{}:{}", seat, self.hand_label(&hand))
        }
    }

    fn action_from_label(&self, label: &str) -> Option<ActionId> {
        if let Some(card) = label.strip_prefix("play:") {
            return Some(ActionId(u32::from(self.card_from_label(card)?)));
        }
        for seat in 0..2 {
            if let Some(rest) = label.strip_prefix(&format!("deal{seat}:")) {
                let cards: Option<Vec<Card>> =
                    rest.split(',').map(|c| self.card_from_label(c)).collect();
                let cards = cards?;
                if cards.len() == self.hand_size() && cards.windows(2).all(|w| w[0] < w[1]) {
                    return Some(self.deal_id(seat, &cards));
                }
                return None;
            }
        }
        None
    }

    fn state_key(&self, state: &TrickState) -> String {
        let hand = |h: &Option<Vec<Card>>| match h {
            Some(cards) => self.hand_label(cards),
            None => "?".to_string(),
        };
        let plays: Vec<String> = state.plays.iter().map(|&c| self.card_label(c)).collect();
        format!(
            "tg[{};{};{}|{}|{}-{}]",
            hand(&state.hands[0]),
            hand(&state.hands[1]),
            self.hand_label(&state.hidden),
            plays.join(","),
            state.tricks[0],
            state.tricks[1]
        )
    }

    fn name(&self) -> String {
        format!(
            "trick(total={},hidden={})",
            self.config.total_cards, self.config.hidden_cards
        )
    }
}
