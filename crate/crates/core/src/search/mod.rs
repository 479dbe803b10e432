//! Determinization search: an exact zero-sum solver plus PIMC and IS-MCTS
//! deciders that sample worlds from a lambda-mixture belief.

pub mod ismcts;
pub mod minimax;
pub mod pimc;

pub use ismcts::{IsmctsDecider, IsmctsReport};
pub use minimax::{plain_value_seat0, solve_action_values, solve_seat0, SolveCache};
pub use pimc::{PimcDecider, PimcReport};

use crate::fosg::{ActionId, Infostate};
use crate::Result;

/// A probability distribution over actions at one infostate.
pub type PolicyRow = Vec<(ActionId, f64)>;

/// Sampling effort for a single decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Sampled determinizations (PIMC) or iterations (IS-MCTS).
    pub determinizations: usize,
    /// Base seed; callers derive per-decision seeds from it.
    pub base_seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            determinizations: 1000,
            base_seed: 0,
        }
    }
}

/// One resolved decision: the chosen action and the row reported for it.
#[derive(Debug, Clone)]
pub struct Decision {
    pub action: ActionId,
    pub row: PolicyRow,
    /// Mixture weight used at this decision.
    pub lambda: f64,
}

/// A decision procedure that can be queried at any infostate of its game.
///
/// Calls are deterministic in `(infostate, seed)` so policy extraction can
/// replay passes exactly.
pub trait Decider: Send + Sync {
    fn decide(&self, infostate: &Infostate, seed: u64) -> Result<Decision>;
    fn name(&self) -> String;
}

/// Index of the maximal value, breaking exact ties toward the lowest
/// [`ActionId`].
pub(crate) fn argmax_lowest_id(values: &[(ActionId, f64)]) -> Option<ActionId> {
    let mut best: Option<(ActionId, f64)> = None;
    for &(action, value) in values {
        if value.is_nan() {
            continue;
        }
        match best {
            None => best = Some((action, value)),
            Some((ba, bv)) => {
                if value > bv || (value == bv && action < ba) {
                    best = Some((action, value));
                }
            }
        }
    }
    best.map(|(a, _)| a)
}

/// A point-mass row on `action` over the listed legal actions.
pub(crate) fn point_mass_row(legal: &[ActionId], action: ActionId) -> PolicyRow {
    legal
        .iter()
        .map(|&a| (a, if a == action { 1.0 } else { 0.0 }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_lowest_id_on_exact_ties() {
        let values = vec![
            (ActionId(3), 1.0),
            (ActionId(1), 1.0),
            (ActionId(2), 0.5),
        ];
        assert_eq!(argmax_lowest_id(&values), Some(ActionId(1)));
        assert_eq!(argmax_lowest_id(&[]), None);
        let nan_only = vec![(ActionId(0), f64::NAN)];
        assert_eq!(argmax_lowest_id(&nan_only), None);
    }

    #[test]
    fn point_mass_row_sums_to_one() {
        let legal = [ActionId(2), ActionId(5), ActionId(9)];
        let row = point_mass_row(&legal, ActionId(5));
        assert_eq!(row, vec![(ActionId(2), 0.0), (ActionId(5), 1.0), (ActionId(9), 0.0)]);
    }
}
