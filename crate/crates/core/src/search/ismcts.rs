//! Information Set Monte Carlo Tree Search over a lambda-mixture belief.
//!
//! A single tree is grown whose nodes are keyed by the acting seat's
//! infostate.  Each iteration samples one world from the mixture, descends
//! the tree restricted to that world's legal actions (genuine chance nodes
//! are resolved by sampling), expands the lowest-id unvisited action,
//! finishes with a uniform random rollout, and backs the terminal utilities
//! up each traversed edge from the edge owner's perspective.
//!
//! The reported row is the normalized visit count of the true infostate's
//! node, so worlds sampled under other root infostates sharpen shared
//! descendant statistics without polluting the decision itself.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::Rng;

use crate::belief::{BeliefCache, BeliefDistribution, LambdaSchedule};
use crate::fosg::{ActionId, Cursor, Game, Infostate, Seat, ToMove};
use crate::rng::stream;
use crate::search::{Decider, Decision, PolicyRow, SearchBudget};
use crate::Result;

const ISMCTS_STREAM: (u64, u64) = (0x4953_4d43, 0);

/// Exploration constant in the UCT formula.
pub const UCT_EXPLORATION: f64 = 0.7;

/// Upper confidence bound for one child edge.
///
/// `parent_legal_visits` counts visits of the sibling edges legal in the
/// sampled world, not all visits at the node.
pub fn uct_score(mean: f64, child_visits: u64, parent_legal_visits: u64, exploration: f64) -> f64 {
    mean + exploration * ((parent_legal_visits as f64).ln() / child_visits as f64).sqrt()
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    action: ActionId,
    visits: u64,
    sum: f64,
}

#[derive(Debug)]
struct Node {
    seat: Seat,
    edges: Vec<Edge>,
}

impl Node {
    fn edge_visits(&self, action: ActionId) -> u64 {
        self.edges
            .iter()
            .find(|e| e.action == action)
            .map(|e| e.visits)
            .unwrap_or(0)
    }

    fn edge_pos(&mut self, action: ActionId) -> usize {
        match self.edges.binary_search_by_key(&action, |e| e.action) {
            Ok(i) => i,
            Err(i) => {
                self.edges.insert(
                    i,
                    Edge {
                        action,
                        visits: 0,
                        sum: 0.0,
                    },
                );
                i
            }
        }
    }
}

struct Tree {
    nodes: Vec<Node>,
    by_key: HashMap<String, usize>,
}

impl Tree {
    fn new() -> Self {
        Tree {
            nodes: Vec::new(),
            by_key: HashMap::new(),
        }
    }

    fn node_for(&mut self, key: &str, seat: Seat) -> usize {
        if let Some(&i) = self.by_key.get(key) {
            return i;
        }
        self.nodes.push(Node {
            seat,
            edges: Vec::new(),
        });
        let i = self.nodes.len() - 1;
        self.by_key.insert(key.to_string(), i);
        i
    }
}

fn sample_outcome<R: Rng>(outcomes: &[(ActionId, f64)], rng: &mut R) -> ActionId {
    let total: f64 = outcomes.iter().map(|(_, p)| p).sum();
    let r = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for &(action, prob) in outcomes {
        acc += prob;
        if r < acc {
            return action;
        }
    }
    outcomes.last().unwrap().0
}

fn rollout<G: Game, R: Rng>(game: &G, mut state: G::State, rng: &mut R) -> [f64; 2] {
    loop {
        match game.to_move(&state) {
            ToMove::Terminal => {
                return [game.utility(&state, 0), game.utility(&state, 1)];
            }
            ToMove::Chance => {
                let outcomes = game.chance_outcomes(&state);
                let action = sample_outcome(&outcomes, rng);
                state = game.next_state(&state, action);
            }
            ToMove::Player(_) => {
                let legal = game.legal_actions(&state);
                let action = legal[rng.gen_range(0..legal.len())];
                state = game.next_state(&state, action);
            }
        }
    }
}

/// Pre-replayed cursors for one mixture support, shared across decide calls.
struct RootSet<'g, G: Game> {
    belief: Arc<BeliefDistribution<G::State>>,
    cursors: Vec<Cursor<'g, G>>,
}

/// Outcome of one IS-MCTS decision.
#[derive(Debug, Clone)]
pub struct IsmctsReport {
    pub action: ActionId,
    /// Visit shares of the true infostate's node over its legal actions.
    pub row: PolicyRow,
    /// Per legal action: visits and mean value at the true node.
    pub per_action: Vec<(ActionId, u64, f64)>,
    /// Visits summed over every root-level node edge; equals the budget.
    pub total_root_visits: u64,
    pub true_node_visits: u64,
    pub iterations: usize,
    pub lambda: f64,
}

/// IS-MCTS decision procedure bound to one game and lambda schedule.
pub struct IsmctsDecider<'g, G: Game> {
    game: &'g G,
    beliefs: BeliefCache<'g, G>,
    schedule: LambdaSchedule,
    budget: SearchBudget,
    exploration: f64,
    roots: RwLock<HashMap<(String, u64), Arc<RootSet<'g, G>>>>,
}

impl<'g, G: Game> IsmctsDecider<'g, G> {
    pub fn new(game: &'g G, schedule: LambdaSchedule, budget: SearchBudget) -> Self {
        Self::with_exploration(game, schedule, budget, UCT_EXPLORATION)
    }

    pub fn with_exploration(
        game: &'g G,
        schedule: LambdaSchedule,
        budget: SearchBudget,
        exploration: f64,
    ) -> Self {
        IsmctsDecider {
            game,
            beliefs: BeliefCache::new(game),
            schedule,
            budget,
            exploration,
            roots: RwLock::new(HashMap::new()),
        }
    }

    pub fn schedule(&self) -> &LambdaSchedule {
        &self.schedule
    }

    pub fn budget(&self) -> SearchBudget {
        self.budget
    }

    fn root_set(&self, infostate: &Infostate, lambda: f64) -> Result<Arc<RootSet<'g, G>>> {
        let cache_key = (infostate.key().to_string(), lambda.to_bits());
        if let Some(hit) = self.roots.read().unwrap().get(&cache_key) {
            return Ok(hit.clone());
        }
        let belief = self.beliefs.mixture(infostate, lambda)?;
        let cursors = belief
            .support()
            .iter()
            .map(|world| {
                let mut cursor = Cursor::new(self.game);
                for &action in &world.path {
                    cursor.advance(action);
                }
                cursor
            })
            .collect();
        let built = Arc::new(RootSet { belief, cursors });
        self.roots
            .write()
            .unwrap()
            .entry(cache_key)
            .or_insert_with(|| built.clone());
        Ok(built)
    }

    /// Full report for one decision; deterministic in `(infostate, seed)`.
    pub fn report(&self, infostate: &Infostate, seed: u64) -> Result<IsmctsReport> {
        let lambda = self.schedule.at(infostate.decisions());
        let roots = self.root_set(infostate, lambda)?;
        let private = self.beliefs.private(infostate)?;
        let legal_true = self.game.legal_actions(&private.support()[0].state);
        let mut rng = stream(seed, ISMCTS_STREAM.0, ISMCTS_STREAM.1);
        let mut tree = Tree::new();
        let iterations = self.budget.determinizations;

        for _ in 0..iterations {
            let world = roots.belief.sample_index(&mut rng);
            let mut cursor = roots.cursors[world].clone();
            let mut path: Vec<(usize, usize)> = Vec::new();
            let utilities;
            loop {
                match cursor.to_move() {
                    ToMove::Terminal => {
                        let state = cursor.state();
                        utilities = [
                            self.game.utility(state, 0),
                            self.game.utility(state, 1),
                        ];
                        break;
                    }
                    ToMove::Chance => {
                        let outcomes = self.game.chance_outcomes(cursor.state());
                        cursor.advance(sample_outcome(&outcomes, &mut rng));
                    }
                    ToMove::Player(seat) => {
                        let legal = self.game.legal_actions(cursor.state());
                        let node_idx =
                            tree.node_for(cursor.infostate(seat).key(), seat);
                        let unvisited = legal
                            .iter()
                            .copied()
                            .filter(|&a| tree.nodes[node_idx].edge_visits(a) == 0)
                            .min();
                        if let Some(action) = unvisited {
                            let pos = tree.nodes[node_idx].edge_pos(action);
                            path.push((node_idx, pos));
                            cursor.advance(action);
                            utilities =
                                rollout(self.game, cursor.state().clone(), &mut rng);
                            break;
                        }
                        let parent_legal: u64 = legal
                            .iter()
                            .map(|&a| tree.nodes[node_idx].edge_visits(a))
                            .sum();
                        let mut chosen = legal[0];
                        let mut best = f64::NEG_INFINITY;
                        for &a in &legal {
                            let node = &tree.nodes[node_idx];
                            let edge = node.edges
                                [node.edges.binary_search_by_key(&a, |e| e.action).unwrap()];
                            let score = uct_score(
                                edge.sum / edge.visits as f64,
                                edge.visits,
                                parent_legal,
                                self.exploration,
                            );
                            if score > best {
                                best = score;
                                chosen = a;
                            }
                        }
                        let pos = tree.nodes[node_idx].edge_pos(chosen);
                        path.push((node_idx, pos));
                        cursor.advance(chosen);
                    }
                }
            }
            for (node_idx, pos) in path {
                let seat = tree.nodes[node_idx].seat;
                let edge = &mut tree.nodes[node_idx].edges[pos];
                edge.visits += 1;
                edge.sum += utilities[seat];
            }
        }

        let total_root_visits: u64 = roots
            .belief
            .marginal(infostate.seat())
            .iter()
            .filter_map(|(key, _)| tree.by_key.get(key))
            .map(|&i| tree.nodes[i].edges.iter().map(|e| e.visits).sum::<u64>())
            .sum();
        let true_node = tree.by_key.get(infostate.key()).copied();
        let stats: Vec<(ActionId, u64, f64)> = legal_true
            .iter()
            .map(|&a| match true_node {
                Some(i) => {
                    let node = &tree.nodes[i];
                    match node.edges.iter().find(|e| e.action == a) {
                        Some(e) if e.visits > 0 => (a, e.visits, e.sum / e.visits as f64),
                        _ => (a, 0, 0.0),
                    }
                }
                None => (a, 0, 0.0),
            })
            .collect();
        let true_node_visits: u64 = stats.iter().map(|(_, v, _)| v).sum();
        let row: PolicyRow = if true_node_visits == 0 {
            let uniform = 1.0 / legal_true.len() as f64;
            legal_true.iter().map(|&a| (a, uniform)).collect()
        } else {
            stats
                .iter()
                .map(|&(a, v, _)| (a, v as f64 / true_node_visits as f64))
                .collect()
        };
        let action = row
            .iter()
            .fold(None::<(ActionId, f64)>, |best, &(a, p)| match best {
                None => Some((a, p)),
                Some((ba, bp)) => {
                    if p > bp || (p == bp && a < ba) {
                        Some((a, p))
                    } else {
                        Some((ba, bp))
                    }
                }
            })
            .map(|(a, _)| a)
            .unwrap();

        Ok(IsmctsReport {
            action,
            row,
            per_action: stats,
            total_root_visits,
            true_node_visits,
            iterations,
            lambda,
        })
    }
}

impl<G: Game> Decider for IsmctsDecider<'_, G> {
    fn decide(&self, infostate: &Infostate, seed: u64) -> Result<Decision> {
        let report = self.report(infostate, seed)?;
        Ok(Decision {
            action: report.action,
            row: report.row,
            lambda: report.lambda,
        })
    }

    fn name(&self) -> String {
        "ismcts".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::liars_dice::{LiarsDiceConfig, LiarsDiceGame};
    use crate::games::{LeducGame, OneShotGame};

    fn two_face_game() -> LiarsDiceGame {
        LiarsDiceGame::new(LiarsDiceConfig::with_faces(2)).unwrap()
    }

    fn first_decision<'g>(game: &'g LiarsDiceGame, own: u8, other: u8) -> Cursor<'g, LiarsDiceGame> {
        let mut cursor = Cursor::new(game);
        for face in [own, other] {
            let a = game.action_from_label(&format!("roll:{face}")).unwrap();
            cursor.try_advance(a).unwrap();
        }
        cursor
    }

    #[test]
    fn uct_prefers_the_barely_explored_child() {
        // Child A: 10 visits, mean 0.5.  Child B: 1 visit, mean 0.0.
        // With 11 legal-sibling visits B's bonus dominates A's mean.
        let a = uct_score(0.5, 10, 11, UCT_EXPLORATION);
        let b = uct_score(0.0, 1, 11, UCT_EXPLORATION);
        assert!((a - 0.843).abs() < 1e-3, "score {a}");
        assert!((b - 1.084).abs() < 1e-3, "score {b}");
        assert!(b > a);
    }

    #[test]
    fn dominant_payoff_concentrates_visits() {
        let game = OneShotGame::new(vec![0.1, 0.9, -0.5]).unwrap();
        let decider = IsmctsDecider::new(
            &game,
            LambdaSchedule::constant(0.0).unwrap(),
            SearchBudget {
                determinizations: 300,
                base_seed: 0,
            },
        );
        let cursor = Cursor::new(&game);
        let report = decider.report(cursor.infostate(0), 1).unwrap();
        assert_eq!(report.action, ActionId(1));
        let share = report
            .row
            .iter()
            .find(|(a, _)| *a == ActionId(1))
            .map(|(_, p)| *p)
            .unwrap();
        assert!(share > 0.85, "share {share}");
    }

    #[test]
    fn root_child_visits_sum_to_the_budget() {
        let game = two_face_game();
        let decider = IsmctsDecider::new(
            &game,
            LambdaSchedule::constant(0.5).unwrap(),
            SearchBudget {
                determinizations: 500,
                base_seed: 0,
            },
        );
        let cursor = first_decision(&game, 1, 1);
        let report = decider.report(cursor.infostate(0), 4).unwrap();
        assert_eq!(report.total_root_visits, 500);
        assert!(report.true_node_visits > 0);
        assert!(report.true_node_visits <= 500);
    }

    #[test]
    fn finds_the_only_winning_opening_bid() {
        let game = two_face_game();
        let decider = IsmctsDecider::new(
            &game,
            LambdaSchedule::constant(0.0).unwrap(),
            SearchBudget {
                determinizations: 1000,
                base_seed: 0,
            },
        );
        let cursor = first_decision(&game, 1, 1);
        let report = decider.report(cursor.infostate(0), 3).unwrap();
        let winning = game.action_from_label("bid:2x1").unwrap();
        assert_eq!(report.action, winning);
    }

    #[test]
    fn row_is_a_distribution_over_true_legal_actions() {
        let game = LeducGame::default();
        let mut cursor = Cursor::new(&game);
        for label in ["card:Ja", "card:Kb"] {
            cursor.try_advance(game.action_from_label(label).unwrap()).unwrap();
        }
        let decider = IsmctsDecider::new(
            &game,
            LambdaSchedule::constant(1.0).unwrap(),
            SearchBudget {
                determinizations: 300,
                base_seed: 0,
            },
        );
        let report = decider.report(cursor.infostate(0), 9).unwrap();
        assert_eq!(report.total_root_visits, 300);
        let actions: Vec<ActionId> = report.row.iter().map(|(a, _)| *a).collect();
        assert_eq!(
            actions,
            game.legal_actions(cursor.state()),
            "row must cover exactly the legal actions"
        );
        let total: f64 = report.row.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn same_seed_reproduces_the_report() {
        let game = two_face_game();
        let decider = IsmctsDecider::new(
            &game,
            LambdaSchedule::constant(0.5).unwrap(),
            SearchBudget {
                determinizations: 400,
                base_seed: 0,
            },
        );
        let cursor = first_decision(&game, 2, 1);
        let a = decider.report(cursor.infostate(0), 17).unwrap();
        let b = decider.report(cursor.infostate(0), 17).unwrap();
        assert_eq!(a.action, b.action);
        assert_eq!(a.per_action, b.per_action);
    }
}
