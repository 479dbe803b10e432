//! Determinization-based search over belief distributions for small
//! two-player zero-sum imperfect-information games.
//!
//! The crate models games as factored-observation stochastic games: every
//! transition emits one public observation plus one private observation per
//! seat, and a player's information state is the recorded sequence of its
//! observations and own actions.  On top of that sit:
//!
//! - [`belief`]: exact private, public, and lambda-mixture distributions over
//!   the worlds consistent with an information state,
//! - [`search`]: perfect-information evaluation (expectiminimax), PIMC, and
//!   information-set MCTS driven by those beliefs,
//! - [`policy`]: tabular policy extraction with repeated-run stabilization
//!   and a line-oriented on-disk format,
//! - [`eval`]: opponent-inference scoring (TSSR), exact best response,
//!   lambda heatmaps, and head-to-head match play.
//!
//! Three benchmark games are provided in [`games`]: a bidding dice game with
//! a wild face, a two-suit trick-taking card game with a hidden talon, and a
//! two-round, six-card poker variant.

pub mod belief;
pub mod error;
pub mod eval;
pub mod fosg;
pub mod games;
pub mod policy;
pub mod rng;
pub mod search;

pub use belief::{BeliefDistribution, LambdaSchedule};
pub use error::Error;
pub use eval::Algorithm;
pub use fosg::{ActionId, Cursor, Game, Infostate, Observation, PublicInfostate, Seat, ToMove};
pub use policy::{StabilizationConfig, TabularPolicy};
pub use search::SearchBudget;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
