//! Two-round, six-card poker variant with one public board card.
//!
//! The deck holds two suits of three ranks.  Both players ante 1 and get
//! one private card.  A betting round follows (fixed raise of 2, at most
//! two raises, actions fold/call/raise with "call" doubling as check);
//! then one board card is revealed from the remaining four and a second
//! round is played with a raise of 4.  At showdown a hand pairing the
//! board beats any unpaired hand, otherwise the higher rank wins and equal
//! ranks split.  Folding concedes the pot.

use crate::fosg::{ActionId, Game, Observation, Seat, ToMove};

const RANKS: u8 = 3;
const DECK: u8 = 6;
const ANTE: i32 = 1;
const MAX_RAISES: u8 = 2;
const RAISE_SIZE: [i32; 2] = [2, 4];
const RANK_NAMES: [char; 3] = ['J', 'Q', 'K'];

/// Marker configuration; the game is fully fixed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LeducConfig;

/// World state: private cards, board, betting position, and contributions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeducState {
    cards: [Option<u8>; 2],
    board: Option<u8>,
    round: u8,
    to_act: Seat,
    contrib: [i32; 2],
    raises: u8,
    acted: u8,
    folded: Option<Seat>,
}

impl LeducState {
    pub fn card(&self, seat: Seat) -> Option<u8> {
        self.cards[seat]
    }

    pub fn board(&self) -> Option<u8> {
        self.board
    }

    pub fn contributions(&self) -> [i32; 2] {
        self.contrib
    }

    fn round_over(&self) -> bool {
        self.acted >= 2
    }
}

/// Leduc as a [`Game`].
#[derive(Debug, Clone, Default)]
pub struct LeducGame;

impl LeducGame {
    pub fn new(_config: LeducConfig) -> Self {
        LeducGame
    }

    /// Rank index 0..3 (jack, queen, king).
    pub fn rank(card: u8) -> u8 {
        card % RANKS
    }

    pub fn card_label(card: u8) -> String {
        let suit = if card / RANKS == 0 { 'a' } else { 'b' };
        format!("{}{}", RANK_NAMES[Self::rank(card) as usize], suit)
    }

    fn card_from_label(label: &str) -> Option<u8> {
        let mut chars = label.chars();
        let rank_char = chars.next()?;
        let rank = RANK_NAMES.iter().position(|&r| r == rank_char)? as u8;
        let suit = match chars.next()? {
            'a' => 0u8,
            'b' => 1u8,
            _ => return None,
        };
        if chars.next().is_some() {
            return None;
        }
        Some(suit * RANKS + rank)
    }

    fn card_action(card: u8) -> ActionId {
        ActionId(3 + u32::from(card))
    }

    /// Showdown winner, or `None` for a split pot.
    fn showdown(state: &LeducState) -> Option<Seat> {
        let board = state.board.expect("showdown has a board");
        let ranks = [
            Self::rank(state.cards[0].unwrap()),
            Self::rank(state.cards[1].unwrap()),
        ];
        let board_rank = Self::rank(board);
        match (ranks[0] == board_rank, ranks[1] == board_rank) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            _ => match ranks[0].cmp(&ranks[1]) {
                std::cmp::Ordering::Greater => Some(0),
                std::cmp::Ordering::Less => Some(1),
                std::cmp::Ordering::Equal => None,
            },
        }
    }
}

/// Player actions.
pub const FOLD: ActionId = ActionId(0);
/// Call, or check when nothing is outstanding.
pub const CALL: ActionId = ActionId(1);
/// Raise by the round's fixed amount.
pub const RAISE: ActionId = ActionId(2);

impl Game for LeducGame {
    type State = LeducState;

    fn initial_state(&self) -> LeducState {
        LeducState {
            cards: [None, None],
            board: None,
            round: 1,
            to_act: 0,
            contrib: [ANTE, ANTE],
            raises: 0,
            acted: 0,
            folded: None,
        }
    }

    fn to_move(&self, state: &LeducState) -> ToMove {
        if state.cards.iter().any(|c| c.is_none()) {
            ToMove::Chance
        } else if state.folded.is_some() {
            ToMove::Terminal
        } else if state.round_over() {
            if state.round == 1 && state.board.is_none() {
                ToMove::Chance
            } else {
                ToMove::Terminal
            }
        } else {
            ToMove::Player(state.to_act)
        }
    }

    fn legal_actions(&self, state: &LeducState) -> Vec<ActionId> {
        let mut actions = vec![FOLD, CALL];
        if state.raises < MAX_RAISES {
            actions.push(RAISE);
        }
        actions
    }

    fn chance_outcomes(&self, state: &LeducState) -> Vec<(ActionId, f64)> {
        let used: Vec<u8> = state
            .cards
            .iter()
            .flatten()
            .copied()
            .chain(state.board)
            .collect();
        let free: Vec<u8> = (0..DECK).filter(|c| !used.contains(c)).collect();
        let p = 1.0 / free.len() as f64;
        free.into_iter().map(|c| (Self::card_action(c), p)).collect()
    }

    fn next_state(&self, state: &LeducState, action: ActionId) -> LeducState {
        let mut next = state.clone();
        if state.cards.iter().any(|c| c.is_none()) {
            let seat = usize::from(state.cards[0].is_some());
            next.cards[seat] = Some((action.0 - 3) as u8);
            return next;
        }
        if state.round_over() {
            next.board = Some((action.0 - 3) as u8);
            next.round = 2;
            next.to_act = 0;
            next.raises = 0;
            next.acted = 0;
            return next;
        }
        let seat = state.to_act;
        match action {
            FOLD => next.folded = Some(seat),
            CALL => {
                next.contrib[seat] = state.contrib[1 - seat];
                next.acted = state.acted + 1;
                next.to_act = 1 - seat;
            }
            RAISE => {
                next.contrib[seat] =
                    state.contrib[1 - seat] + RAISE_SIZE[state.round as usize - 1];
                next.raises = state.raises + 1;
                next.acted = 1;
                next.to_act = 1 - seat;
            }
            _ => unreachable!("leduc player action"),
        }
        next
    }

    fn observation(&self, state: &LeducState, action: ActionId, _next: &LeducState) -> Observation {
        let mut obs = Observation::empty(2);
        if state.cards.iter().any(|c| c.is_none()) {
            let seat = usize::from(state.cards[0].is_some());
            obs.private[seat] = format!("card:{}", Self::card_label((action.0 - 3) as u8));
        } else if state.round_over() {
            obs.public = format!("board:{}", Self::card_label((action.0 - 3) as u8));
        } else {
            obs.public = self.action_label(action);
        }
        obs
    }

    fn utility(&self, state: &LeducState, seat: Seat) -> f64 {
        let winner = match state.folded {
            Some(folder) => Some(1 - folder),
            None => Self::showdown(state),
        };
        match winner {
            None => 0.0,
            Some(w) => {
                let gain = f64::from(state.contrib[1 - w]);
                if seat == w {
                    gain
                } else {
                    -gain
                }
            }
        }
    }

    fn action_label(&self, action: ActionId) -> String {
        match action {
            FOLD => "fold".to_string(),
            CALL => "call".to_string(),
            RAISE => "raise".to_string(),
            _ => format!("card:{}", Self::card_label((action.0 - 3) as u8)),
        }
    }

    fn action_from_label(&self, label: &str) -> Option<ActionId> {
        match label {
            "fold" => Some(FOLD),
            "call" => Some(CALL),
            "raise" => Some(RAISE),
            _ => {
                let card = Self::card_from_label(label.strip_prefix("card:")?)?;
                Some(Self::card_action(card))
            }
        }
    }

    fn state_key(&self, state: &LeducState) -> String {
        let card = |c: &Option<u8>| match c {
            Some(card) => Self::card_label(*card),
            None => "?".to_string(),
        };
        format!(
            "lp[{},{}|{}|r{} c{},{} raises{} acted{}{}]",
            card(&state.cards[0]),
            card(&state.cards[1]),
            card(&state.board),
            state.round,
            state.contrib[0],
            state.contrib[1],
            state.raises,
            state.acted,
            match state.folded {
                Some(seat) => format!(" f{seat}"),
                None => String::new(),
            }
        )
    }

    fn name(&self) -> String {
        "leduc".to_string()
    }
}
