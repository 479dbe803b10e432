//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by game operations, belief construction, search, policy
/// handling, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation that needs a live position was given a terminal one.
    #[error("state is terminal: {key}")]
    TerminalState { key: String },

    /// An operation that needs a terminal position was given a live one.
    #[error("state is not terminal: {key}")]
    NotTerminal { key: String },

    /// The action is not available in the given state.
    #[error("illegal action {action}; legal: [{legal}]")]
    IllegalAction { action: String, legal: String },

    /// A seat index outside `0..num_players`.
    #[error("seat {seat} out of range for {players} players")]
    SeatOutOfRange { seat: usize, players: usize },

    /// A game configuration that violates its own constraints.
    #[error("invalid game config: {message}")]
    InvalidConfig { message: String },

    /// No history of the game produces the given information-state key.
    #[error("no reachable history matches infostate key {key}")]
    UnreachableInfostate { key: String },

    /// A belief was requested for a key with no consistent worlds.
    #[error("belief support is empty for key {key}")]
    EmptyBeliefSupport { key: String },

    /// A mixture coefficient outside `[0, 1]`.
    #[error("lambda {value} outside [0, 1]")]
    InvalidLambda { value: f64 },

    /// Stabilization still varied above threshold at the batch cap.
    #[error("policy did not stabilize after {batches} batches (last variation {variation:.6})")]
    NonConvergence { batches: usize, variation: f64 },

    /// A malformed line in a policy file.
    #[error("policy file line {line}: {message}")]
    PolicyParse { line: usize, message: String },

    /// A policy table has no row for an information state that came up.
    #[error("policy has no row for infostate {key}")]
    UncoveredInfostate { key: String },

    /// Underlying I/O failure while reading or writing files.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
