//! Tabular policies: enumeration, repeated-pass stabilization, and a
//! plain-text on-disk format.
//!
//! A stabilized policy is the running arithmetic mean of independent
//! extraction passes.  Passes are grouped into batches; after each batch
//! the running average is compared to the previous one and extraction
//! stops once the max-norm delta falls below the tolerance.  Each pass
//! seeds every decision from `(pass index, hash of the public infostate
//! key)`, so infostates that share a public view see identical sampling
//! noise within a pass.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::fosg::{ActionId, Cursor, Game, Infostate, ToMove};
use crate::rng::{derive_seed, fnv1a};
use crate::search::{Decider, PolicyRow};
use crate::Result;

/// Metadata keys every saved policy must carry.
pub const REQUIRED_META: [&str; 6] = ["algorithm", "budget", "game", "lambda", "seat", "seed"];

/// A behavioral policy stored as one action distribution per infostate key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TabularPolicy {
    rows: BTreeMap<String, PolicyRow>,
    meta: BTreeMap<String, String>,
}

impl TabularPolicy {
    pub fn new() -> Self {
        TabularPolicy::default()
    }

    pub fn rows(&self) -> &BTreeMap<String, PolicyRow> {
        &self.rows
    }

    pub fn row(&self, key: &str) -> Result<&PolicyRow> {
        self.rows.get(key).ok_or_else(|| Error::UncoveredInfostate {
            key: key.to_string(),
        })
    }

    pub fn set_row(&mut self, key: impl Into<String>, row: PolicyRow) {
        self.rows.insert(key.into(), row);
    }

    /// Probability the policy assigns to `action` at `key`.
    pub fn prob(&self, key: &str, action: ActionId) -> Result<f64> {
        Ok(self
            .row(key)?
            .iter()
            .find(|(a, _)| *a == action)
            .map(|(_, p)| *p)
            .unwrap_or(0.0))
    }

    /// Samples an action from the row at `key`.
    pub fn sample<R: Rng>(&self, key: &str, rng: &mut R) -> Result<ActionId> {
        let row = self.row(key)?;
        Ok(sample_row(row, rng))
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.meta.insert(key.into(), value.into());
    }
}

/// Samples an action from a row by cumulative mass.
pub fn sample_row<R: Rng>(row: &PolicyRow, rng: &mut R) -> ActionId {
    let total: f64 = row.iter().map(|(_, p)| p).sum();
    let r = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for &(action, p) in row {
        acc += p;
        if r < acc {
            return action;
        }
    }
    row.last().unwrap().0
}

/// Every distinct infostate at which `seat` acts, sorted by key.
///
/// `max_moves` bounds the history length for games too large to cover in
/// full; `None` enumerates everything.
pub fn enumerate_infostates<G: Game>(
    game: &G,
    seat: usize,
    max_moves: Option<usize>,
) -> Vec<Infostate> {
    let mut seen: BTreeMap<String, Infostate> = BTreeMap::new();
    let mut stack = vec![Cursor::new(game)];
    while let Some(cursor) = stack.pop() {
        if let Some(limit) = max_moves {
            if cursor.move_number() > limit {
                continue;
            }
        }
        let actions: Vec<ActionId> = match cursor.to_move() {
            ToMove::Terminal => continue,
            ToMove::Chance => game
                .chance_outcomes(cursor.state())
                .into_iter()
                .map(|(a, _)| a)
                .collect(),
            ToMove::Player(s) => {
                if s == seat {
                    let info = cursor.infostate(seat);
                    seen.entry(info.key().to_string())
                        .or_insert_with(|| info.clone());
                }
                game.legal_actions(cursor.state())
            }
        };
        for action in actions {
            let mut child = cursor.clone();
            child.advance(action);
            stack.push(child);
        }
    }
    seen.into_values().collect()
}

/// Knobs for the batched stabilization loop.
#[derive(Debug, Clone, Copy)]
pub struct StabilizationConfig {
    pub passes_per_batch: usize,
    pub max_batches: usize,
    /// Max-norm threshold on consecutive running averages.
    pub tolerance: f64,
    pub base_seed: u64,
}

impl Default for StabilizationConfig {
    fn default() -> Self {
        StabilizationConfig {
            passes_per_batch: 10,
            max_batches: 200,
            tolerance: 0.01,
            base_seed: 0,
        }
    }
}

/// A converged stabilization run.
#[derive(Debug, Clone)]
pub struct StabilizedPolicy {
    pub policy: TabularPolicy,
    pub batches: usize,
    pub passes: usize,
    /// Max-norm delta of the final batch comparison.
    pub last_variation: f64,
}

/// Seed for one `(pass, infostate)` decision.
pub fn pass_seed(base_seed: u64, pass: usize, infostate: &Infostate) -> u64 {
    let public = infostate.public_projection();
    derive_seed(base_seed, pass as u64, fnv1a(public.key().as_bytes()))
}

fn run_pass(
    decider: &dyn Decider,
    infostates: &[Infostate],
    base_seed: u64,
    pass: usize,
) -> Result<Vec<PolicyRow>> {
    infostates
        .par_iter()
        .map(|info| {
            decider
                .decide(info, pass_seed(base_seed, pass, info))
                .map(|d| d.row)
        })
        .collect()
}

/// Runs batched extraction passes until the running average settles.
///
/// Errors with [`Error::NonConvergence`] if the delta is still above the
/// tolerance after `max_batches` batches.
pub fn stabilize_policy(
    decider: &dyn Decider,
    infostates: &[Infostate],
    config: &StabilizationConfig,
) -> Result<StabilizedPolicy> {
    if config.passes_per_batch == 0 || config.max_batches == 0 {
        return Err(Error::InvalidConfig {
            message: "stabilization needs at least one pass per batch and one batch".into(),
        });
    }
    let mut sums: Vec<Vec<f64>> = Vec::new();
    let mut shapes: Vec<Vec<ActionId>> = Vec::new();
    let mut passes = 0usize;
    let mut previous: Option<Vec<Vec<f64>>> = None;
    let mut last_variation = f64::INFINITY;
    for batch in 1..=config.max_batches {
        for _ in 0..config.passes_per_batch {
            let rows = run_pass(decider, infostates, config.base_seed, passes)?;
            if passes == 0 {
                shapes = rows
                    .iter()
                    .map(|row| row.iter().map(|(a, _)| *a).collect())
                    .collect();
                sums = rows.iter().map(|row| vec![0.0; row.len()]).collect();
            }
            for (sum, row) in sums.iter_mut().zip(&rows) {
                for (slot, (_, p)) in sum.iter_mut().zip(row) {
                    *slot += p;
                }
            }
            passes += 1;
        }
        let average: Vec<Vec<f64>> = sums
            .iter()
            .map(|sum| sum.iter().map(|s| s / passes as f64).collect())
            .collect();
        if let Some(prev) = &previous {
            last_variation = average
                .iter()
                .zip(prev)
                .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
                .fold(0.0, f64::max);
            if last_variation < config.tolerance {
                let mut policy = TabularPolicy::new();
                for ((info, shape), avg) in infostates.iter().zip(&shapes).zip(&average) {
                    let row: PolicyRow =
                        shape.iter().copied().zip(avg.iter().copied()).collect();
                    policy.set_row(info.key(), row);
                }
                policy.set_meta("algorithm", decider.name());
                policy.set_meta("passes", passes.to_string());
                policy.set_meta("batches", batch.to_string());
                return Ok(StabilizedPolicy {
                    policy,
                    batches: batch,
                    passes,
                    last_variation,
                });
            }
        }
        previous = Some(average);
    }
    Err(Error::NonConvergence {
        batches: config.max_batches,
        variation: last_variation,
    })
}

/// Writes a policy as `# key=value` headers followed by tab-separated
/// `infostate_key  action_label  probability` lines.
pub fn save_policy<G: Game, W: Write>(
    game: &G,
    policy: &TabularPolicy,
    out: &mut W,
) -> Result<()> {
    for key in REQUIRED_META {
        if !policy.meta().contains_key(key) {
            return Err(Error::InvalidConfig {
                message: format!("policy metadata is missing required key {key:?}"),
            });
        }
    }
    for (key, value) in policy.meta() {
        writeln!(out, "# {key}={value}")?;
    }
    for (key, row) in policy.rows() {
        for &(action, p) in row {
            writeln!(out, "{key}\t{}\t{p}", game.action_label(action))?;
        }
    }
    Ok(())
}

/// Parses the format written by [`save_policy`], resolving action labels
/// through the game.
pub fn load_policy<G: Game, R: BufRead>(game: &G, input: R) -> Result<TabularPolicy> {
    let mut policy = TabularPolicy::new();
    let mut rows: BTreeMap<String, PolicyRow> = BTreeMap::new();
    for (index, line) in input.lines().enumerate() {
        let line = line?;
        let number = index + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix("# ") {
            let (key, value) = header.split_once('=').ok_or(Error::PolicyParse {
                line: number,
                message: "header is not key=value".into(),
            })?;
            policy.set_meta(key, value);
            continue;
        }
        let mut parts = line.split('\t');
        let (key, label, prob) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(k), Some(l), Some(p), None) => (k, l, p),
            _ => {
                return Err(Error::PolicyParse {
                    line: number,
                    message: "expected key<TAB>label<TAB>probability".into(),
                })
            }
        };
        let action = game.action_from_label(label).ok_or_else(|| Error::PolicyParse {
            line: number,
            message: format!("unknown action label {label:?}"),
        })?;
        let p: f64 = prob.parse().map_err(|_| Error::PolicyParse {
            line: number,
            message: format!("bad probability {prob:?}"),
        })?;
        rows.entry(key.to_string()).or_default().push((action, p));
    }
    for key in REQUIRED_META {
        if !policy.meta().contains_key(key) {
            return Err(Error::PolicyParse {
                line: 0,
                message: format!("missing required header {key:?}"),
            });
        }
    }
    for (key, row) in rows {
        let total: f64 = row.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::PolicyParse {
                line: 0,
                message: format!("row {key:?} sums to {total}, not 1"),
            });
        }
        policy.set_row(key, row);
    }
    Ok(policy)
}

pub fn save_policy_file<G: Game>(
    game: &G,
    policy: &TabularPolicy,
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    save_policy(game, policy, &mut file)
}

pub fn load_policy_file<G: Game>(game: &G, path: impl AsRef<Path>) -> Result<TabularPolicy> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    load_policy(game, file)
}
