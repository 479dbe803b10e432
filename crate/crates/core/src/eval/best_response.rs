//! Exact best response against a fixed tabular policy.
//!
//! The responder's tree is solved by backward induction over its
//! infostates: at each responder infostate the chosen action maximizes the
//! reach-weighted expected continuation, where reach weights multiply
//! chance probabilities and the fixed seat's policy probabilities only.
//! Values are exact; a brute-force pure-strategy oracle is provided for
//! cross-checking on small games.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::fosg::{ActionId, Cursor, Game, InfoEntry, Infostate, Seat, ToMove};
use crate::policy::{enumerate_infostates, TabularPolicy};
use crate::search::argmax_lowest_id;
use crate::Result;

/// Exact exploitability of one seat's policy.
#[derive(Debug, Clone)]
pub struct BestResponseReport {
    pub responder: Seat,
    /// Expected utility for the responder at the root.
    pub value: f64,
    /// Best action at every responder infostate reachable under the policy.
    pub actions: BTreeMap<String, ActionId>,
    /// Responder infostates considered.
    pub infostates: usize,
}

enum Node {
    Terminal {
        value: f64,
    },
    /// Chance or fixed-seat node: probability-weighted children.
    Expect {
        children: Vec<(f64, usize)>,
    },
    Responder {
        key: String,
        children: Vec<(ActionId, usize)>,
    },
}

struct ResponderTree {
    nodes: Vec<Node>,
    /// Responder infostate key -> (depth, member nodes, reach per member).
    groups: BTreeMap<String, (usize, Vec<(usize, f64)>)>,
}

fn build_tree<G: Game>(
    game: &G,
    policy: &TabularPolicy,
    policy_seat: Seat,
    responder: Seat,
) -> Result<ResponderTree> {
    fn go<G: Game>(
        game: &G,
        policy: &TabularPolicy,
        policy_seat: Seat,
        responder: Seat,
        cursor: &Cursor<G>,
        reach: f64,
        tree: &mut ResponderTree,
    ) -> Result<usize> {
        let index = tree.nodes.len();
        match cursor.to_move() {
            ToMove::Terminal => {
                let value = game.try_utility(cursor.state(), responder)?;
                tree.nodes.push(Node::Terminal { value });
                Ok(index)
            }
            ToMove::Chance => {
                tree.nodes.push(Node::Expect { children: vec![] });
                let mut children = Vec::new();
                for (action, prob) in game.chance_outcomes(cursor.state()) {
                    if prob == 0.0 {
                        continue;
                    }
                    let mut child = cursor.clone();
                    child.advance(action);
                    let child_idx =
                        go(game, policy, policy_seat, responder, &child, reach * prob, tree)?;
                    children.push((prob, child_idx));
                }
                tree.nodes[index] = Node::Expect { children };
                Ok(index)
            }
            ToMove::Player(seat) if seat == policy_seat => {
                tree.nodes.push(Node::Expect { children: vec![] });
                let row = policy.row(cursor.infostate(seat).key())?.clone();
                let mut children = Vec::new();
                for (action, prob) in row {
                    if prob == 0.0 {
                        continue;
                    }
                    let mut child = cursor.clone();
                    child.advance(action);
                    let child_idx =
                        go(game, policy, policy_seat, responder, &child, reach * prob, tree)?;
                    children.push((prob, child_idx));
                }
                tree.nodes[index] = Node::Expect { children };
                Ok(index)
            }
            ToMove::Player(_) => {
                let info = cursor.infostate(responder);
                let key = info.key().to_string();
                let depth = info.observations();
                tree.nodes.push(Node::Responder {
                    key: key.clone(),
                    children: vec![],
                });
                let mut children = Vec::new();
                for action in game.legal_actions(cursor.state()) {
                    let mut child = cursor.clone();
                    child.advance(action);
                    let child_idx =
                        go(game, policy, policy_seat, responder, &child, reach, tree)?;
                    children.push((action, child_idx));
                }
                tree.nodes[index] = Node::Responder {
                    key: key.clone(),
                    children,
                };
                let group = tree.groups.entry(key).or_insert((depth, Vec::new()));
                group.1.push((index, reach));
                Ok(index)
            }
        }
    }

    let mut tree = ResponderTree {
        nodes: Vec::new(),
        groups: BTreeMap::new(),
    };
    go(game, policy, policy_seat, responder, &Cursor::new(game), 1.0, &mut tree)?;
    Ok(tree)
}

fn node_value(
    tree: &ResponderTree,
    best: &BTreeMap<String, ActionId>,
    memo: &mut Vec<Option<f64>>,
    index: usize,
) -> f64 {
    if let Some(v) = memo[index] {
        return v;
    }
    let value = match &tree.nodes[index] {
        Node::Terminal { value } => *value,
        Node::Expect { children } => children
            .iter()
            .map(|&(p, child)| p * node_value(tree, best, memo, child))
            .sum(),
        Node::Responder { key, children } => {
            let action = best[key];
            let &(_, child) = children.iter().find(|(a, _)| *a == action).unwrap();
            node_value(tree, best, memo, child)
        }
    };
    memo[index] = Some(value);
    value
}

/// Computes the exact best response of `responder` against `policy` played
/// by the other seat.
pub fn best_response_value<G: Game>(
    game: &G,
    policy: &TabularPolicy,
    policy_seat: Seat,
    responder: Seat,
) -> Result<BestResponseReport> {
    if policy_seat == responder || responder >= game.num_players() {
        return Err(Error::InvalidConfig {
            message: format!(
                "responder seat {responder} must be the seat opposing the policy seat {policy_seat}"
            ),
        });
    }
    let tree = build_tree(game, policy, policy_seat, responder)?;
    // Deeper infostates first, so every continuation below a group is
    // already decided when the group itself is scored.
    let mut order: Vec<&String> = tree.groups.keys().collect();
    order.sort_by_key(|key| std::cmp::Reverse(tree.groups[*key].0));
    let mut best: BTreeMap<String, ActionId> = BTreeMap::new();
    let mut memo: Vec<Option<f64>> = vec![None; tree.nodes.len()];
    for key in order {
        let members = &tree.groups[key].1;
        let actions: Vec<ActionId> = match &tree.nodes[members[0].0] {
            Node::Responder { children, .. } => children.iter().map(|(a, _)| *a).collect(),
            _ => unreachable!(),
        };
        let scored: Vec<(ActionId, f64)> = actions
            .iter()
            .map(|&action| {
                let q: f64 = members
                    .iter()
                    .map(|&(node, reach)| {
                        let child = match &tree.nodes[node] {
                            Node::Responder { children, .. } => {
                                children.iter().find(|(a, _)| *a == action).unwrap().1
                            }
                            _ => unreachable!(),
                        };
                        reach * node_value(&tree, &best, &mut memo, child)
                    })
                    .sum();
                (action, q)
            })
            .collect();
        let action = argmax_lowest_id(&scored).unwrap();
        best.insert(key.clone(), action);
    }
    let infostates = tree.groups.len();
    let value = node_value(&tree, &best, &mut memo, 0);
    Ok(BestResponseReport {
        responder,
        value,
        actions: best,
        infostates,
    })
}

/// The responder's past decisions: (infostate key at the decision, action).
fn own_decision_trail<G: Game>(game: &G, info: &Infostate) -> Vec<(String, ActionId)> {
    let mut prefix = Infostate::new(info.seat());
    let mut trail = Vec::new();
    for entry in info.entries() {
        match entry {
            InfoEntry::Obs { public, private } => prefix.push_obs(public, private),
            InfoEntry::OwnAction { label } => {
                trail.push((
                    prefix.key().to_string(),
                    game.action_from_label(label).expect("recorded label"),
                ));
                prefix.push_own_action(label);
            }
        }
    }
    trail
}

/// The responder's infostates arranged as a forest: edges follow its own
/// actions, roots are its first decisions.
struct StrategyForest {
    roots: Vec<String>,
    legal: BTreeMap<String, Vec<ActionId>>,
    children: BTreeMap<(String, ActionId), Vec<String>>,
}

fn strategy_forest<G: Game>(game: &G, responder: Seat) -> Result<StrategyForest> {
    let infostates = enumerate_infostates(game, responder, None);
    let mut forest = StrategyForest {
        roots: Vec::new(),
        legal: BTreeMap::new(),
        children: BTreeMap::new(),
    };
    for info in &infostates {
        let belief = crate::belief::private_belief(game, info)?;
        let legal = game.legal_actions(&belief.support()[0].state);
        forest.legal.insert(info.key().to_string(), legal);
        let trail = own_decision_trail(game, info);
        match trail.last() {
            None => forest.roots.push(info.key().to_string()),
            Some((parent, action)) => {
                forest
                    .children
                    .entry((parent.clone(), *action))
                    .or_default()
                    .push(info.key().to_string());
            }
        }
    }
    forest.roots.sort();
    Ok(forest)
}

type Strategy = BTreeMap<String, ActionId>;

fn strategies_below(
    forest: &StrategyForest,
    key: &str,
    limit: usize,
) -> Result<Vec<Strategy>> {
    let mut result: Vec<Strategy> = Vec::new();
    for &action in &forest.legal[key] {
        let mut branch: Vec<Strategy> = vec![BTreeMap::from([(key.to_string(), action)])];
        if let Some(children) = forest.children.get(&(key.to_string(), action)) {
            for child in children {
                let child_strategies = strategies_below(forest, child, limit)?;
                let mut merged = Vec::new();
                for base in &branch {
                    for extension in &child_strategies {
                        let mut combined = base.clone();
                        combined.extend(extension.iter().map(|(k, v)| (k.clone(), *v)));
                        merged.push(combined);
                        if merged.len() > limit {
                            return Err(Error::InvalidConfig {
                                message: format!(
                                    "strategy space exceeds the oracle limit of {limit}"
                                ),
                            });
                        }
                    }
                }
                branch = merged;
            }
        }
        result.extend(branch);
        if result.len() > limit {
            return Err(Error::InvalidConfig {
                message: format!("strategy space exceeds the oracle limit of {limit}"),
            });
        }
    }
    Ok(result)
}

/// Responder value of one pure strategy, restricted to histories whose
/// first responder decision is `root`.
fn pure_strategy_value<G: Game>(
    game: &G,
    policy: &TabularPolicy,
    policy_seat: Seat,
    responder: Seat,
    strategy: &Strategy,
    root: &str,
    cursor: &Cursor<G>,
    seen_first: bool,
) -> Result<f64> {
    match cursor.to_move() {
        ToMove::Terminal => {
            debug_assert!(seen_first, "history skipped every responder decision");
            game.try_utility(cursor.state(), responder)
        }
        ToMove::Chance => {
            let mut value = 0.0;
            for (action, prob) in game.chance_outcomes(cursor.state()) {
                if prob == 0.0 {
                    continue;
                }
                let mut child = cursor.clone();
                child.advance(action);
                value += prob
                    * pure_strategy_value(
                        game, policy, policy_seat, responder, strategy, root, &child, seen_first,
                    )?;
            }
            Ok(value)
        }
        ToMove::Player(seat) if seat == policy_seat => {
            let row = policy.row(cursor.infostate(seat).key())?.clone();
            let mut value = 0.0;
            for (action, prob) in row {
                if prob == 0.0 {
                    continue;
                }
                let mut child = cursor.clone();
                child.advance(action);
                value += prob
                    * pure_strategy_value(
                        game, policy, policy_seat, responder, strategy, root, &child, seen_first,
                    )?;
            }
            Ok(value)
        }
        ToMove::Player(_) => {
            let key = cursor.infostate(responder).key();
            if !seen_first && key != root {
                return Ok(0.0);
            }
            let action = strategy[key];
            let mut child = cursor.clone();
            child.advance(action);
            pure_strategy_value(
                game, policy, policy_seat, responder, strategy, root, &child, true,
            )
        }
    }
}

/// Brute-force oracle: enumerates the responder's reduced pure strategies
/// per first-decision subtree and sums the per-subtree maxima.
///
/// Exponential in the subtree sizes; intended for oracle checks on small
/// games where the responder acts on every history.  `limit` bounds the
/// per-subtree strategy count.
pub fn brute_force_best_response<G: Game>(
    game: &G,
    policy: &TabularPolicy,
    policy_seat: Seat,
    responder: Seat,
    limit: usize,
) -> Result<f64> {
    let forest = strategy_forest(game, responder)?;
    let mut total = 0.0;
    for root in &forest.roots {
        let mut best = f64::NEG_INFINITY;
        for strategy in strategies_below(&forest, root, limit)? {
            let value = pure_strategy_value(
                game,
                policy,
                policy_seat,
                responder,
                &strategy,
                root,
                &Cursor::new(game),
                false,
            )?;
            best = best.max(value);
        }
        total += best;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::private_belief;
    use crate::eval::expected_utility;
    use crate::fosg::Observation;
    use crate::games::liars_dice::{LiarsDiceConfig, LiarsDiceGame};
    use crate::rng::stream;
    use rand::Rng;

    fn two_face_game() -> LiarsDiceGame {
        LiarsDiceGame::new(LiarsDiceConfig::with_faces(2)).unwrap()
    }

    fn legal_at<G: Game>(game: &G, info: &Infostate) -> Vec<ActionId> {
        let belief = private_belief(game, info).unwrap();
        game.legal_actions(&belief.support()[0].state)
    }

    fn uniform_policy<G: Game>(game: &G, seat: Seat) -> TabularPolicy {
        let mut policy = TabularPolicy::new();
        for info in enumerate_infostates(game, seat, None) {
            let legal = legal_at(game, &info);
            let p = 1.0 / legal.len() as f64;
            policy.set_row(info.key(), legal.into_iter().map(|a| (a, p)).collect());
        }
        policy
    }

    fn random_policy_with<G: Game>(
        game: &G,
        seat: Seat,
        seed: u64,
        seed_key: impl Fn(&Infostate) -> String,
    ) -> TabularPolicy {
        let mut policy = TabularPolicy::new();
        for info in enumerate_infostates(game, seat, None) {
            let legal = legal_at(game, &info);
            let key = seed_key(&info);
            let mut rng = stream(seed, crate::rng::fnv1a(key.as_bytes()), seat as u64);
            let raw: Vec<f64> = legal.iter().map(|_| rng.gen::<f64>() + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            policy.set_row(
                info.key(),
                legal.into_iter().zip(raw).map(|(a, w)| (a, w / total)).collect(),
            );
        }
        policy
    }

    fn random_policy<G: Game>(game: &G, seat: Seat, seed: u64) -> TabularPolicy {
        random_policy_with(game, seat, seed, |info| info.key().to_string())
    }

    #[test]
    fn matches_the_brute_force_oracle_against_uniform_play() {
        let game = two_face_game();
        let policy = uniform_policy(&game, 0);
        let exact = best_response_value(&game, &policy, 0, 1).unwrap();
        let oracle = brute_force_best_response(&game, &policy, 0, 1, 1_000_000).unwrap();
        assert!((exact.value - oracle).abs() <= 1e-9);
    }

    #[test]
    fn matches_the_oracle_for_random_policies_both_seats() {
        let game = two_face_game();
        for seed in 0..4u64 {
            let p0 = random_policy(&game, 0, seed);
            let exact = best_response_value(&game, &p0, 0, 1).unwrap();
            let oracle = brute_force_best_response(&game, &p0, 0, 1, 1_000_000).unwrap();
            assert!((exact.value - oracle).abs() <= 1e-9, "seed {seed}");
            let p1 = random_policy(&game, 1, seed);
            let exact = best_response_value(&game, &p1, 1, 0).unwrap();
            let oracle = brute_force_best_response(&game, &p1, 1, 0, 1_000_000).unwrap();
            assert!((exact.value - oracle).abs() <= 1e-9, "seed {seed} responder 0");
        }
    }

    #[test]
    fn dominates_one_hundred_random_responders() {
        let game = two_face_game();
        let policy = random_policy(&game, 0, 31);
        let br = best_response_value(&game, &policy, 0, 1).unwrap();
        for seed in 0..100u64 {
            let responder = random_policy(&game, 1, 1000 + seed);
            let responder_value = -expected_utility(&game, &policy, &responder).unwrap();
            assert!(
                responder_value <= br.value + 1e-9,
                "seed {seed}: {responder_value} > {}",
                br.value
            );
        }
    }

    #[test]
    fn best_action_map_covers_reachable_infostates_only() {
        let game = two_face_game();
        let policy = uniform_policy(&game, 0);
        let report = best_response_value(&game, &policy, 0, 1).unwrap();
        assert_eq!(report.responder, 1);
        assert!(report.infostates > 0);
        assert_eq!(report.actions.len(), report.infostates);
        assert!(report.value.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn rejects_a_responder_equal_to_the_policy_seat() {
        let game = two_face_game();
        let policy = uniform_policy(&game, 0);
        assert!(best_response_value(&game, &policy, 0, 0).is_err());
    }

    /// Wraps a game, tagging every non-empty observation component, which
    /// relabels all infostate keys without changing the game.
    struct Relabeled<G>(G);

    impl<G: Game> Game for Relabeled<G> {
        type State = G::State;

        fn num_players(&self) -> usize {
            self.0.num_players()
        }
        fn initial_state(&self) -> G::State {
            self.0.initial_state()
        }
        fn to_move(&self, state: &G::State) -> ToMove {
            self.0.to_move(state)
        }
        fn legal_actions(&self, state: &G::State) -> Vec<ActionId> {
            self.0.legal_actions(state)
        }
        fn chance_outcomes(&self, state: &G::State) -> Vec<(ActionId, f64)> {
            self.0.chance_outcomes(state)
        }
        fn next_state(&self, state: &G::State, action: ActionId) -> G::State {
            self.0.next_state(state, action)
        }
        fn observation(&self, state: &G::State, action: ActionId, next: &G::State) -> Observation {
            let tag = |s: String| if s.is_empty() { s } else { format!("tag.{s}") };
            let base = self.0.observation(state, action, next);
            Observation {
                public: tag(base.public),
                private: base.private.into_iter().map(tag).collect(),
            }
        }
        fn utility(&self, state: &G::State, seat: Seat) -> f64 {
            self.0.utility(state, seat)
        }
        fn action_label(&self, action: ActionId) -> String {
            self.0.action_label(action)
        }
        fn action_from_label(&self, label: &str) -> Option<ActionId> {
            self.0.action_from_label(label)
        }
        fn state_key(&self, state: &G::State) -> String {
            self.0.state_key(state)
        }
        fn name(&self) -> String {
            format!("relabeled({})", self.0.name())
        }
    }

    /// Rebuilds the key the same infostate would have without the wrapper's
    /// "tag." markers, so both games get identical random rows.
    fn untagged_key(info: &Infostate) -> String {
        let strip = |s: &str| s.strip_prefix("tag.").unwrap_or(s).to_string();
        let mut plain = Infostate::new(info.seat());
        for entry in info.entries() {
            match entry {
                InfoEntry::Obs { public, private } => {
                    plain.push_obs(&strip(public), &strip(private))
                }
                InfoEntry::OwnAction { label } => plain.push_own_action(label),
            }
        }
        plain.key().to_string()
    }

    #[test]
    fn value_is_invariant_to_infostate_relabeling() {
        let plain = two_face_game();
        let wrapped = Relabeled(two_face_game());
        for seed in [2u64, 12] {
            let policy_plain = random_policy(&plain, 0, seed);
            let policy_wrapped = random_policy_with(&wrapped, 0, seed, untagged_key);
            let a = best_response_value(&plain, &policy_plain, 0, 1).unwrap();
            let b = best_response_value(&wrapped, &policy_wrapped, 0, 1).unwrap();
            assert!((a.value - b.value).abs() <= 1e-12);
            assert_eq!(a.infostates, b.infostates);
        }
    }

    fn cartesian(lists: Vec<Vec<Strategy>>) -> Vec<Strategy> {
        let mut result: Vec<Strategy> = vec![BTreeMap::new()];
        for list in lists {
            let mut next = Vec::with_capacity(result.len() * list.len());
            for base in &result {
                for extension in &list {
                    let mut combined = base.clone();
                    combined.extend(extension.iter().map(|(k, v)| (k.clone(), *v)));
                    next.push(combined);
                }
            }
            result = next;
        }
        result
    }

    fn full_reduced_strategies<G: Game>(game: &G, seat: Seat) -> Vec<Strategy> {
        let forest = strategy_forest(game, seat).unwrap();
        cartesian(
            forest
                .roots
                .iter()
                .map(|root| strategies_below(&forest, root, 1_000_000).unwrap())
                .collect(),
        )
    }

    fn playout_value(
        game: &LiarsDiceGame,
        s0: &Strategy,
        s1: &Strategy,
        cursor: &Cursor<LiarsDiceGame>,
    ) -> f64 {
        match cursor.to_move() {
            ToMove::Terminal => game.utility(cursor.state(), 0),
            ToMove::Chance => game
                .chance_outcomes(cursor.state())
                .into_iter()
                .map(|(action, prob)| {
                    let mut child = cursor.clone();
                    child.advance(action);
                    prob * playout_value(game, s0, s1, &child)
                })
                .sum(),
            ToMove::Player(seat) => {
                let strategy = if seat == 0 { s0 } else { s1 };
                let action = strategy[cursor.infostate(seat).key()];
                let mut child = cursor.clone();
                child.advance(action);
                playout_value(game, s0, s1, &child)
            }
        }
    }

    /// Converts a mixture over reduced pure strategies into the equivalent
    /// behavioral policy.
    fn behavioral_from_mixture(
        game: &LiarsDiceGame,
        strategies: &[Strategy],
        weights: &[f64],
        seat: Seat,
    ) -> TabularPolicy {
        let mut policy = TabularPolicy::new();
        for info in enumerate_infostates(game, seat, None) {
            let legal = legal_at(game, &info);
            let trail = own_decision_trail(game, &info);
            let mut mass_per_action: BTreeMap<ActionId, f64> =
                legal.iter().map(|&a| (a, 0.0)).collect();
            let mut reach_mass = 0.0;
            for (strategy, &w) in strategies.iter().zip(weights) {
                if w == 0.0 {
                    continue;
                }
                let consistent = trail
                    .iter()
                    .all(|(key, action)| strategy.get(key) == Some(action));
                if consistent {
                    reach_mass += w;
                    if let Some(&chosen) = strategy.get(info.key()) {
                        *mass_per_action.get_mut(&chosen).unwrap() += w;
                    }
                }
            }
            let row: Vec<(ActionId, f64)> = if reach_mass > 0.0 {
                legal
                    .iter()
                    .map(|&a| (a, mass_per_action[&a] / reach_mass))
                    .collect()
            } else {
                let p = 1.0 / legal.len() as f64;
                legal.iter().map(|&a| (a, p)).collect()
            };
            policy.set_row(info.key(), row);
        }
        policy
    }

    #[test]
    fn near_equilibrium_mixture_is_barely_exploitable() {
        // Fictitious play on the reduced normal form brackets the game
        // value; the induced behavioral policy's exact exploitability must
        // match the matrix-side exploitability of the same mixture.
        let game = two_face_game();
        let rows = full_reduced_strategies(&game, 0);
        let cols = full_reduced_strategies(&game, 1);
        assert_eq!(rows.len(), 100);
        assert_eq!(cols.len(), 900);
        let root = Cursor::new(&game);
        let matrix: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| cols.iter().map(|c| playout_value(&game, r, c, &root)).collect())
            .collect();

        let mut row_counts = vec![0u32; rows.len()];
        let mut col_counts = vec![0u32; cols.len()];
        let mut row_payoff = vec![0.0; rows.len()];
        let mut col_payoff = vec![0.0; cols.len()];
        let (mut r, mut c) = (0usize, 0usize);
        let iterations = 40_000;
        for _ in 0..iterations {
            row_counts[r] += 1;
            col_counts[c] += 1;
            for (i, payoff) in row_payoff.iter_mut().enumerate() {
                *payoff += matrix[i][c];
            }
            for (j, payoff) in col_payoff.iter_mut().enumerate() {
                *payoff += matrix[r][j];
            }
            r = row_payoff
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            c = col_payoff
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
        }
        let x_bar: Vec<f64> = row_counts
            .iter()
            .map(|&n| n as f64 / iterations as f64)
            .collect();
        let y_bar: Vec<f64> = col_counts
            .iter()
            .map(|&n| n as f64 / iterations as f64)
            .collect();
        let value_vs_col = |column: usize| -> f64 {
            x_bar
                .iter()
                .enumerate()
                .map(|(i, &w)| w * matrix[i][column])
                .sum()
        };
        let lo = (0..cols.len())
            .map(value_vs_col)
            .fold(f64::INFINITY, f64::min);
        let hi = (0..rows.len())
            .map(|row| {
                y_bar
                    .iter()
                    .enumerate()
                    .map(|(j, &w)| w * matrix[row][j])
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(lo <= hi + 1e-12);
        assert!(hi - lo < 0.06, "fictitious play gap {}", hi - lo);

        let behavioral = behavioral_from_mixture(&game, &rows, &x_bar, 0);
        let report = best_response_value(&game, &behavioral, 0, 1).unwrap();
        assert!(
            (report.value - (-lo)).abs() <= 1e-9,
            "matrix exploitability {} vs tree {}",
            -lo,
            report.value
        );
        let midpoint = -(lo + hi) / 2.0;
        assert!((report.value - midpoint).abs() <= (hi - lo) / 2.0 + 1e-9);
    }
}
