//! Belief distributions over worlds consistent with an information state.
//!
//! Three conditionings are supported:
//!
//! - private: all worlds consistent with one seat's full infostate,
//! - public: all worlds consistent with the public observation sequence,
//! - mixture: the convex combination `(1 - lambda) * private + lambda *
//!   public`, mixed directly on world masses.
//!
//! Consistency is membership-only: worlds are weighted by exact chance
//! probabilities and replay legality, never by opponent policy.  Each
//! support entry records the full action path from the root, the canonical
//! world key, and every seat's infostate key at that world, so callers can
//! route determinizations without re-deriving views.

use std::collections::HashMap;
use std::io::Write;
use std::sync::{Arc, RwLock};

use rand::Rng;

use crate::error::Error;
use crate::fosg::{ActionId, Cursor, Game, Infostate, PublicInfostate, Seat, ToMove};
use crate::Result;

/// Mass tolerance for belief normalization checks.
pub const MASS_EPSILON: f64 = 1e-9;

/// How a belief is conditioned.
#[derive(Debug, Clone, PartialEq)]
pub enum BeliefKind {
    Private { seat: Seat },
    Public,
    Mixture { seat: Seat, lambda: f64 },
}

/// One world in a belief support.
#[derive(Debug, Clone)]
pub struct SupportWorld<S> {
    pub state: S,
    /// Canonical world encoding, unique within the game.
    pub world_key: String,
    /// Normalized probability mass.
    pub mass: f64,
    /// Unnormalized chance probability of the path.
    pub prior: f64,
    /// Infostate key of every seat at this world.
    pub seat_keys: Vec<String>,
    /// Action sequence from the root reaching this world.
    pub path: Vec<ActionId>,
}

/// A distribution over the worlds consistent with a conditioning key.
#[derive(Debug, Clone)]
pub struct BeliefDistribution<S> {
    kind: BeliefKind,
    conditioning_key: String,
    support: Vec<SupportWorld<S>>,
    /// Per seat: infostate-key marginals, sorted by key.
    marginals: Vec<Vec<(String, f64)>>,
}

impl<S> BeliefDistribution<S> {
    pub fn kind(&self) -> &BeliefKind {
        &self.kind
    }

    pub fn conditioning_key(&self) -> &str {
        &self.conditioning_key
    }

    pub fn support(&self) -> &[SupportWorld<S>] {
        &self.support
    }

    /// Marginal over one seat's infostate keys.
    pub fn marginal(&self, seat: Seat) -> &[(String, f64)] {
        &self.marginals[seat]
    }

    /// Mass a seat's marginal assigns to one infostate key.
    pub fn marginal_mass(&self, seat: Seat, key: &str) -> f64 {
        self.marginals[seat]
            .binary_search_by(|(k, _)| k.as_str().cmp(key))
            .map(|i| self.marginals[seat][i].1)
            .unwrap_or(0.0)
    }

    /// Total support mass; 1 within [`MASS_EPSILON`] by construction.
    pub fn total_mass(&self) -> f64 {
        self.support.iter().map(|w| w.mass).sum()
    }

    /// Draws a support index proportionally to mass.
    pub fn sample_index<R: Rng>(&self, rng: &mut R) -> usize {
        let r: f64 = rng.gen::<f64>() * self.total_mass();
        let mut acc = 0.0;
        for (i, world) in self.support.iter().enumerate() {
            acc += world.mass;
            if r < acc {
                return i;
            }
        }
        self.support.len() - 1
    }

    /// Draws a world proportionally to mass.
    pub fn sample_world<R: Rng>(&self, rng: &mut R) -> &SupportWorld<S> {
        &self.support[self.sample_index(rng)]
    }

    fn finish(kind: BeliefKind, key: String, mut support: Vec<SupportWorld<S>>, players: usize) -> Self {
        let total: f64 = support.iter().map(|w| w.prior).sum();
        for world in &mut support {
            world.mass = world.prior / total;
        }
        let marginals = compute_marginals(&support, players);
        BeliefDistribution {
            kind,
            conditioning_key: key,
            support,
            marginals,
        }
    }
}

fn compute_marginals<S>(support: &[SupportWorld<S>], players: usize) -> Vec<Vec<(String, f64)>> {
    (0..players)
        .map(|seat| {
            let mut acc: Vec<(String, f64)> = Vec::new();
            for world in support {
                let key = &world.seat_keys[seat];
                match acc.binary_search_by(|(k, _)| k.as_str().cmp(key)) {
                    Ok(i) => acc[i].1 += world.mass,
                    Err(i) => acc.insert(i, (key.clone(), world.mass)),
                }
            }
            acc
        })
        .collect()
}

/// What the consistency walk conditions on.
enum Query<'a> {
    SeatView(Seat, &'a Infostate),
    PublicView(&'a PublicInfostate),
}

impl Query<'_> {
    fn observations(&self) -> usize {
        match self {
            Query::SeatView(_, info) => info.observations(),
            Query::PublicView(public) => public.entries().len(),
        }
    }

    /// Whether the walk position is still on a path that can reach the key.
    fn admits<G: Game>(&self, cursor: &Cursor<G>) -> bool {
        match self {
            Query::SeatView(seat, info) => info.key().starts_with(cursor.infostate(*seat).key()),
            Query::PublicView(public) => {
                public.key().starts_with(cursor.public_infostate().key())
            }
        }
    }

    fn matches<G: Game>(&self, cursor: &Cursor<G>) -> bool {
        match self {
            Query::SeatView(seat, info) => cursor.infostate(*seat).key() == info.key(),
            Query::PublicView(public) => cursor.public_infostate().key() == public.key(),
        }
    }
}

/// Depth-first enumeration of every history whose recorded view matches the
/// query, pruning on key prefixes.
fn consistency_walk<'g, G: Game>(game: &'g G, query: &Query) -> Vec<Cursor<'g, G>> {
    let target = query.observations();
    let mut matches = Vec::new();
    let mut stack = vec![Cursor::new(game)];
    while let Some(cursor) = stack.pop() {
        if cursor.move_number() == target {
            if query.matches(&cursor) {
                matches.push(cursor);
            }
            continue;
        }
        let actions: Vec<ActionId> = match cursor.to_move() {
            ToMove::Terminal => continue,
            ToMove::Chance => game
                .chance_outcomes(cursor.state())
                .into_iter()
                .map(|(a, _)| a)
                .collect(),
            ToMove::Player(_) => game.legal_actions(cursor.state()),
        };
        // Children go on the stack in reverse so worlds come out in
        // stable depth-first action order.
        for action in actions.into_iter().rev() {
            let mut child = cursor.clone();
            child.advance(action);
            if query.admits(&child) {
                stack.push(child);
            }
        }
    }
    matches
}

fn collect_support<G: Game>(game: &G, cursors: Vec<Cursor<G>>) -> Vec<SupportWorld<G::State>> {
    cursors
        .into_iter()
        .map(|cursor| {
            let seat_keys = (0..game.num_players())
                .map(|s| cursor.infostate(s).key().to_string())
                .collect();
            SupportWorld {
                world_key: game.state_key(cursor.state()),
                mass: 0.0,
                prior: cursor.chance_prob(),
                seat_keys,
                path: cursor.path().to_vec(),
                state: cursor.state().clone(),
            }
        })
        .collect()
}

/// All worlds consistent with one seat's infostate, weighted by chance.
pub fn consistent_worlds<G: Game>(
    game: &G,
    infostate: &Infostate,
) -> Result<BeliefDistribution<G::State>> {
    let query = Query::SeatView(infostate.seat(), infostate);
    let cursors = consistency_walk(game, &query);
    if cursors.is_empty() {
        return Err(Error::UnreachableInfostate {
            key: infostate.key().to_string(),
        });
    }
    let support = collect_support(game, cursors);
    Ok(BeliefDistribution::finish(
        BeliefKind::Private {
            seat: infostate.seat(),
        },
        infostate.key().to_string(),
        support,
        game.num_players(),
    ))
}

/// The private belief of the infostate's seat (the seat's own marginal is a
/// point mass on the conditioning key).
pub fn private_belief<G: Game>(
    game: &G,
    infostate: &Infostate,
) -> Result<BeliefDistribution<G::State>> {
    consistent_worlds(game, infostate)
}

/// The public belief: all worlds consistent with the public sequence alone.
pub fn public_belief<G: Game>(
    game: &G,
    public: &PublicInfostate,
) -> Result<BeliefDistribution<G::State>> {
    let query = Query::PublicView(public);
    let cursors = consistency_walk(game, &query);
    if cursors.is_empty() {
        return Err(Error::UnreachableInfostate {
            key: public.key().to_string(),
        });
    }
    let support = collect_support(game, cursors);
    Ok(BeliefDistribution::finish(
        BeliefKind::Public,
        public.key().to_string(),
        support,
        game.num_players(),
    ))
}

/// Mixes already-built private and public beliefs on world masses:
/// `(1 - lambda) * private + lambda * public`.  Worlds with exactly zero
/// mixed mass (public-only worlds at `lambda = 0`) leave the support.
pub fn mix_beliefs<G: Game>(
    game: &G,
    private: &BeliefDistribution<G::State>,
    public: &BeliefDistribution<G::State>,
    lambda: f64,
) -> Result<BeliefDistribution<G::State>> {
    if !(0.0..=1.0).contains(&lambda) || lambda.is_nan() {
        return Err(Error::InvalidLambda { value: lambda });
    }
    let seat = match private.kind() {
        BeliefKind::Private { seat } => *seat,
        _ => unreachable!("mix_beliefs takes a private belief"),
    };
    let private_mass: HashMap<&str, f64> = private
        .support()
        .iter()
        .map(|w| (w.world_key.as_str(), w.mass))
        .collect();
    let mut support = Vec::with_capacity(public.support().len());
    for world in public.support() {
        let p_priv = private_mass.get(world.world_key.as_str()).copied().unwrap_or(0.0);
        let mass = (1.0 - lambda) * p_priv + lambda * world.mass;
        if mass > 0.0 {
            let mut entry = world.clone();
            entry.mass = mass;
            entry.prior = mass;
            support.push(entry);
        }
    }
    if support.is_empty() {
        return Err(Error::EmptyBeliefSupport {
            key: private.conditioning_key().to_string(),
        });
    }
    let marginals = compute_marginals(&support, game.num_players());
    Ok(BeliefDistribution {
        kind: BeliefKind::Mixture { seat, lambda },
        conditioning_key: private.conditioning_key().to_string(),
        support,
        marginals,
    })
}

/// The lambda-mixture belief for one infostate, built from fresh private
/// and public walks.
pub fn mixture_belief<G: Game>(
    game: &G,
    infostate: &Infostate,
    lambda: f64,
) -> Result<BeliefDistribution<G::State>> {
    if !(0.0..=1.0).contains(&lambda) || lambda.is_nan() {
        return Err(Error::InvalidLambda { value: lambda });
    }
    let private = private_belief(game, infostate)?;
    let public = public_belief(game, &infostate.public_projection())?;
    mix_beliefs(game, &private, &public, lambda)
}

/// Lambda values indexed by the acting player's own decision count, with a
/// fallback for deeper decisions.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSchedule {
    values: Vec<f64>,
    fallback: f64,
}

impl LambdaSchedule {
    pub fn new(values: Vec<f64>, fallback: f64) -> Result<Self> {
        for &v in values.iter().chain(std::iter::once(&fallback)) {
            if !(0.0..=1.0).contains(&v) || v.is_nan() {
                return Err(Error::InvalidLambda { value: v });
            }
        }
        Ok(LambdaSchedule { values, fallback })
    }

    /// The same lambda at every decision.
    pub fn constant(lambda: f64) -> Result<Self> {
        Self::new(Vec::new(), lambda)
    }

    /// Lambda for a seat's n-th decision (0-based).
    pub fn at(&self, decision_index: usize) -> f64 {
        self.values.get(decision_index).copied().unwrap_or(self.fallback)
    }

    /// The explicitly listed per-decision values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Lambda applied beyond the listed values.
    pub fn fallback(&self) -> f64 {
        self.fallback
    }

    /// Parses `"0.3"` or `"0.0,1.0"`; the last listed value doubles as the
    /// fallback.
    pub fn parse(text: &str) -> Result<Self> {
        let values: std::result::Result<Vec<f64>, _> =
            text.split(',').map(|v| v.trim().parse::<f64>()).collect();
        let values = values.map_err(|_| Error::InvalidConfig {
            message: format!("cannot parse lambda schedule {text:?}"),
        })?;
        if values.is_empty() {
            return Err(Error::InvalidConfig {
                message: "empty lambda schedule".into(),
            });
        }
        let fallback = *values.last().unwrap();
        Self::new(values, fallback)
    }

    /// Canonical text form accepted by [`LambdaSchedule::parse`].
    pub fn canonical(&self) -> String {
        if self.values.is_empty() {
            return format!("{}", self.fallback);
        }
        let mut parts: Vec<String> = self.values.iter().map(|v| format!("{v}")).collect();
        if self.values.last() != Some(&self.fallback) {
            parts.push(format!("{}", self.fallback));
        }
        parts.join(",")
    }
}

/// Thread-safe cache of private, public, and mixture beliefs for one game
/// instance.
pub struct BeliefCache<'g, G: Game> {
    game: &'g G,
    private: RwLock<HashMap<String, Arc<BeliefDistribution<G::State>>>>,
    public: RwLock<HashMap<String, Arc<BeliefDistribution<G::State>>>>,
    mixture: RwLock<HashMap<(String, u64), Arc<BeliefDistribution<G::State>>>>,
}

impl<'g, G: Game> BeliefCache<'g, G> {
    pub fn new(game: &'g G) -> Self {
        BeliefCache {
            game,
            private: RwLock::new(HashMap::new()),
            public: RwLock::new(HashMap::new()),
            mixture: RwLock::new(HashMap::new()),
        }
    }

    pub fn game(&self) -> &'g G {
        self.game
    }

    pub fn private(&self, infostate: &Infostate) -> Result<Arc<BeliefDistribution<G::State>>> {
        if let Some(hit) = self.private.read().unwrap().get(infostate.key()) {
            return Ok(hit.clone());
        }
        let built = Arc::new(private_belief(self.game, infostate)?);
        self.private
            .write()
            .unwrap()
            .entry(infostate.key().to_string())
            .or_insert_with(|| built.clone());
        Ok(built)
    }

    pub fn public(&self, public: &PublicInfostate) -> Result<Arc<BeliefDistribution<G::State>>> {
        if let Some(hit) = self.public.read().unwrap().get(public.key()) {
            return Ok(hit.clone());
        }
        let built = Arc::new(public_belief(self.game, public)?);
        self.public
            .write()
            .unwrap()
            .entry(public.key().to_string())
            .or_insert_with(|| built.clone());
        Ok(built)
    }

    pub fn mixture(
        &self,
        infostate: &Infostate,
        lambda: f64,
    ) -> Result<Arc<BeliefDistribution<G::State>>> {
        let cache_key = (infostate.key().to_string(), lambda.to_bits());
        if let Some(hit) = self.mixture.read().unwrap().get(&cache_key) {
            return Ok(hit.clone());
        }
        let private = self.private(infostate)?;
        let public = self.public(&infostate.public_projection())?;
        let built = Arc::new(mix_beliefs(self.game, &private, &public, lambda)?);
        self.mixture
            .write()
            .unwrap()
            .entry(cache_key)
            .or_insert_with(|| built.clone());
        Ok(built)
    }
}

/// Writes a belief as CSV rows `conditioning_key,world_id,mass`.
pub fn write_belief_csv<S, W: Write>(belief: &BeliefDistribution<S>, out: &mut W) -> Result<()> {
    writeln!(out, "conditioning_key,world_id,mass")?;
    for world in belief.support() {
        writeln!(
            out,
            "{},{},{}",
            belief.conditioning_key(),
            world.world_key,
            world.mass
        )?;
    }
    Ok(())
}
