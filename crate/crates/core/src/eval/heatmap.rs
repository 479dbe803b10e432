//! Exploitability over a grid of two-stage lambda schedules.
//!
//! Each cell stabilizes one seat's policy under the schedule "lambda0 for
//! the first decision, lambda1 afterwards" and scores it with the exact
//! best response from the opposing seat.

use crate::belief::LambdaSchedule;
use crate::eval::best_response::best_response_value;
use crate::eval::{stabilized_policy, Algorithm};
use crate::fosg::{Game, Seat};
use crate::policy::StabilizationConfig;
use crate::search::SearchBudget;
use crate::Result;

/// One (lambda0, lambda1) schedule and its best-response value.
#[derive(Debug, Clone)]
pub struct HeatmapCell {
    /// Lambda used at the seat's first decision.
    pub lambda0: f64,
    /// Lambda used at every later decision.
    pub lambda1: f64,
    /// Exact best-response utility for the opposing seat.
    pub br_value: f64,
    /// Stabilization batches the cell's policy needed.
    pub batches: usize,
}

/// Sweeps the full `grid0` x `grid1` schedule grid for `seat`'s policy.
///
/// Cells are emitted in row-major order: `grid0` outer, `grid1` inner.
pub fn heatmap_sweep<G: Game>(
    game: &G,
    algorithm: Algorithm,
    grid0: &[f64],
    grid1: &[f64],
    seat: Seat,
    budget: SearchBudget,
    stabilization: &StabilizationConfig,
    max_moves: Option<usize>,
) -> Result<Vec<HeatmapCell>> {
    let responder = 1 - seat;
    let mut cells = Vec::with_capacity(grid0.len() * grid1.len());
    for &lambda0 in grid0 {
        for &lambda1 in grid1 {
            let schedule = LambdaSchedule::new(vec![lambda0], lambda1)?;
            let stabilized = stabilized_policy(
                game,
                algorithm,
                &schedule,
                seat,
                budget,
                stabilization,
                max_moves,
            )?;
            let report = best_response_value(game, &stabilized.policy, seat, responder)?;
            cells.push(HeatmapCell {
                lambda0,
                lambda1,
                br_value: report.value,
                batches: stabilized.batches,
            });
        }
    }
    Ok(cells)
}
