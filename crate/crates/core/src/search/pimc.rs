//! Perfect Information Monte Carlo over a lambda-mixture belief.
//!
//! Worlds are sampled from the mixture; each sampled world is solved
//! exactly and its per-action values are credited to a score table keyed by
//! the acting seat's infostate in that world.  Tables are then combined by
//! visit weight: for every action the aggregate is the visit-weighted mean
//! over tables where the action is legal, with weights renormalized to the
//! tables actually contributing.
//!
//! At `lambda = 0` every sampled world shares the true infostate, so the
//! procedure collapses bit-for-bit to the classic single-table algorithm
//! (see [`pimc_direct_reference`]).

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::Rng;

use crate::belief::{BeliefCache, BeliefDistribution, LambdaSchedule};
use crate::fosg::{ActionId, Game, Infostate, Seat, ToMove};
use crate::rng::stream;
use crate::search::minimax::{solve_action_values, SolveCache};
use crate::search::{argmax_lowest_id, point_mass_row, Decider, Decision, PolicyRow, SearchBudget};
use crate::Result;

const PIMC_STREAM: (u64, u64) = (0x5049_4d43, 0);

/// One score table: statistics for worlds sharing an own-infostate.
#[derive(Debug, Clone)]
pub struct PimcTable {
    pub infostate_key: String,
    pub actions: Vec<ActionId>,
    pub visits: usize,
    /// Summed exact child values, aligned with `actions`.
    pub sums: Vec<f64>,
}

impl PimcTable {
    pub fn mean(&self, action: ActionId) -> Option<f64> {
        if self.visits == 0 {
            return None;
        }
        self.actions
            .iter()
            .position(|&a| a == action)
            .map(|i| self.sums[i] / self.visits as f64)
    }
}

/// Outcome of one PIMC decision.
#[derive(Debug, Clone)]
pub struct PimcReport {
    pub action: ActionId,
    /// Aggregated value per action legal at the true infostate; NaN when no
    /// sampled table covered the action.
    pub aggregated: Vec<(ActionId, f64)>,
    pub row: PolicyRow,
    pub tables: Vec<PimcTable>,
    pub lambda: f64,
    pub samples: usize,
}

/// Support pre-solved once per (infostate, lambda): each world maps to its
/// table plus exact per-action values, so sampling is pure accumulation.
struct SolvedSupport<S> {
    belief: Arc<BeliefDistribution<S>>,
    tables: Vec<(String, Vec<ActionId>)>,
    /// Per support world: (table index, per-action actor values).
    world_values: Vec<(usize, Vec<f64>)>,
    legal_true: Vec<ActionId>,
}

fn presolve<G: Game>(
    game: &G,
    seat: Seat,
    belief: Arc<BeliefDistribution<G::State>>,
    legal_true: Vec<ActionId>,
) -> SolvedSupport<G::State> {
    let mut tables: Vec<(String, Vec<ActionId>)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut world_values = Vec::with_capacity(belief.support().len());
    let mut cache = SolveCache::new();
    let sign = if seat == 0 { 1.0 } else { -1.0 };
    for world in belief.support() {
        debug_assert!(matches!(game.to_move(&world.state), ToMove::Player(s) if s == seat));
        let key = world.seat_keys[seat].clone();
        let table = *index.entry(key.clone()).or_insert_with(|| {
            tables.push((key, game.legal_actions(&world.state)));
            tables.len() - 1
        });
        let values: Vec<f64> = solve_action_values(game, &world.state, &mut cache)
            .into_iter()
            .map(|(_, v)| sign * v)
            .collect();
        debug_assert_eq!(values.len(), tables[table].1.len());
        world_values.push((table, values));
    }
    SolvedSupport {
        belief,
        tables,
        world_values,
        legal_true,
    }
}

fn sample_and_aggregate<S, R: Rng>(
    solved: &SolvedSupport<S>,
    lambda: f64,
    budget: usize,
    rng: &mut R,
) -> PimcReport {
    let mut visits = vec![0usize; solved.tables.len()];
    let mut sums: Vec<Vec<f64>> = solved
        .tables
        .iter()
        .map(|(_, actions)| vec![0.0; actions.len()])
        .collect();
    for _ in 0..budget {
        let world = solved.belief.sample_index(rng);
        let (table, values) = &solved.world_values[world];
        visits[*table] += 1;
        for (slot, value) in sums[*table].iter_mut().zip(values) {
            *slot += value;
        }
    }
    let total = budget as f64;
    let aggregated: Vec<(ActionId, f64)> = solved
        .legal_true
        .iter()
        .map(|&action| {
            let mut weighted = 0.0;
            let mut weight = 0.0;
            for (t, (_, actions)) in solved.tables.iter().enumerate() {
                if visits[t] == 0 {
                    continue;
                }
                if let Some(pos) = actions.iter().position(|&a| a == action) {
                    let w = visits[t] as f64 / total;
                    weighted += w * (sums[t][pos] / visits[t] as f64);
                    weight += w;
                }
            }
            let value = if weight > 0.0 { weighted / weight } else { f64::NAN };
            (action, value)
        })
        .collect();
    let action = argmax_lowest_id(&aggregated).unwrap_or(solved.legal_true[0]);
    let row = point_mass_row(&solved.legal_true, action);
    let tables = solved
        .tables
        .iter()
        .zip(visits.iter().zip(sums))
        .map(|((key, actions), (&visits, sums))| PimcTable {
            infostate_key: key.clone(),
            actions: actions.clone(),
            visits,
            sums,
        })
        .collect();
    PimcReport {
        action,
        aggregated,
        row,
        tables,
        lambda,
        samples: budget,
    }
}

/// PIMC decision procedure bound to one game and lambda schedule.
pub struct PimcDecider<'g, G: Game> {
    game: &'g G,
    beliefs: BeliefCache<'g, G>,
    schedule: LambdaSchedule,
    budget: SearchBudget,
    solved: RwLock<HashMap<(String, u64), Arc<SolvedSupport<G::State>>>>,
}

impl<'g, G: Game> PimcDecider<'g, G> {
    pub fn new(game: &'g G, schedule: LambdaSchedule, budget: SearchBudget) -> Self {
        PimcDecider {
            game,
            beliefs: BeliefCache::new(game),
            schedule,
            budget,
            solved: RwLock::new(HashMap::new()),
        }
    }

    pub fn schedule(&self) -> &LambdaSchedule {
        &self.schedule
    }

    pub fn budget(&self) -> SearchBudget {
        self.budget
    }

    fn solved_support(
        &self,
        infostate: &Infostate,
        lambda: f64,
    ) -> Result<Arc<SolvedSupport<G::State>>> {
        let cache_key = (infostate.key().to_string(), lambda.to_bits());
        if let Some(hit) = self.solved.read().unwrap().get(&cache_key) {
            return Ok(hit.clone());
        }
        let mixture = self.beliefs.mixture(infostate, lambda)?;
        let private = self.beliefs.private(infostate)?;
        let legal_true = self.game.legal_actions(&private.support()[0].state);
        let built = Arc::new(presolve(self.game, infostate.seat(), mixture, legal_true));
        self.solved
            .write()
            .unwrap()
            .entry(cache_key)
            .or_insert_with(|| built.clone());
        Ok(built)
    }

    /// Full report for one decision; deterministic in `(infostate, seed)`.
    pub fn report(&self, infostate: &Infostate, seed: u64) -> Result<PimcReport> {
        let lambda = self.schedule.at(infostate.decisions());
        let solved = self.solved_support(infostate, lambda)?;
        let mut rng = stream(seed, PIMC_STREAM.0, PIMC_STREAM.1);
        Ok(sample_and_aggregate(
            &solved,
            lambda,
            self.budget.determinizations,
            &mut rng,
        ))
    }
}

impl<G: Game> Decider for PimcDecider<'_, G> {
    fn decide(&self, infostate: &Infostate, seed: u64) -> Result<Decision> {
        let report = self.report(infostate, seed)?;
        Ok(Decision {
            action: report.action,
            row: report.row,
            lambda: report.lambda,
        })
    }

    fn name(&self) -> String {
        "pimc".into()
    }
}

/// Classic single-table PIMC: sample from the private belief, re-solve every
/// sampled world, accumulate one score sum per action, divide by the budget.
///
/// Kept deliberately naive as the reference the mixture path must reproduce
/// bit-for-bit at `lambda = 0` under a shared seed.
pub fn pimc_direct_reference<G: Game>(
    game: &G,
    infostate: &Infostate,
    budget: usize,
    seed: u64,
) -> Result<PimcReport> {
    let belief = crate::belief::private_belief(game, infostate)?;
    let legal: Vec<ActionId> = game.legal_actions(&belief.support()[0].state);
    let sign = if infostate.seat() == 0 { 1.0 } else { -1.0 };
    let mut rng = stream(seed, PIMC_STREAM.0, PIMC_STREAM.1);
    let mut cache = SolveCache::new();
    let mut sums = vec![0.0; legal.len()];
    for _ in 0..budget {
        let world = belief.sample_world(&mut rng);
        for (slot, (_, value)) in sums
            .iter_mut()
            .zip(solve_action_values(game, &world.state, &mut cache))
        {
            *slot += sign * value;
        }
    }
    let aggregated: Vec<(ActionId, f64)> = legal
        .iter()
        .zip(&sums)
        .map(|(&a, &s)| (a, s / budget as f64))
        .collect();
    let action = argmax_lowest_id(&aggregated).unwrap_or(legal[0]);
    let row = point_mass_row(&legal, action);
    Ok(PimcReport {
        action,
        aggregated,
        row,
        tables: vec![PimcTable {
            infostate_key: infostate.key().to_string(),
            actions: legal,
            visits: budget,
            sums,
        }],
        lambda: 0.0,
        samples: budget,
    })
}
