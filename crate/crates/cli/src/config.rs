//! Experiment configuration: flat key-value file, overridden by CLI flags,
//! resolved against defaults.

use std::path::{Path, PathBuf};

use clap::Args;
use detmix_core::games::leduc::LeducGame;
use detmix_core::games::liars_dice::{LiarsDiceConfig, LiarsDiceGame};
use detmix_core::games::trick::{TrickGame, TrickGameConfig};
use detmix_core::{Algorithm, Error, LambdaSchedule, Result, SearchBudget, StabilizationConfig};
use serde::Deserialize;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DETMIX_OUT_DIR";

/// Optional settings from a `--config` file.  Every key has a CLI flag of
/// the same name; unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub game: Option<String>,
    pub dice: Option<usize>,
    pub faces: Option<usize>,
    pub total_cards: Option<usize>,
    pub hidden_cards: Option<usize>,
    pub algorithm: Option<String>,
    pub lambdas: Option<String>,
    pub grid0: Option<String>,
    pub grid1: Option<String>,
    pub budget: Option<u64>,
    pub seed: Option<u64>,
    pub passes_per_batch: Option<usize>,
    pub max_batches: Option<usize>,
    pub tolerance: Option<f64>,
    pub seat: Option<usize>,
    pub games: Option<usize>,
    pub draw_weight: Option<f64>,
    pub opponent_algorithm: Option<String>,
    pub opponent_lambda: Option<f64>,
    pub first_decision_only: Option<bool>,
    pub max_moves: Option<usize>,
    pub output: Option<String>,
    pub workers: Option<usize>,
}

/// CLI flags shared by every subcommand; unset flags fall back to the
/// config file, then to defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat key-value configuration file (TOML syntax).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Game: liars_dice, trick, or leduc.
    #[arg(long)]
    pub game: Option<String>,
    /// Dice per player (liars_dice).
    #[arg(long)]
    pub dice: Option<usize>,
    /// Die faces (liars_dice).
    #[arg(long)]
    pub faces: Option<usize>,
    /// Deck size (trick).
    #[arg(long)]
    pub total_cards: Option<usize>,
    /// Talon size (trick).
    #[arg(long)]
    pub hidden_cards: Option<usize>,
    /// Search algorithm: pimc or ismcts.
    #[arg(long)]
    pub algorithm: Option<String>,
    /// Lambda grid for sweeps, or the lambda schedule for `policy`.
    #[arg(long)]
    pub lambdas: Option<String>,
    /// First-decision lambda grid (heatmap).
    #[arg(long)]
    pub grid0: Option<String>,
    /// Later-decision lambda grid (heatmap).
    #[arg(long)]
    pub grid1: Option<String>,
    /// Determinizations per decision.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Base seed for sampling and stabilization.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Passes averaged per stabilization batch.
    #[arg(long)]
    pub passes_per_batch: Option<usize>,
    /// Stabilization batch cap before giving up.
    #[arg(long)]
    pub max_batches: Option<usize>,
    /// Stabilization stopping threshold (max-norm row change).
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Seat under test (0 or 1).
    #[arg(long)]
    pub seat: Option<usize>,
    /// Games per match block.
    #[arg(long)]
    pub games: Option<usize>,
    /// Score credited to each drawn game.
    #[arg(long)]
    pub draw_weight: Option<f64>,
    /// Opponent's algorithm (tssr, match).
    #[arg(long)]
    pub opponent_algorithm: Option<String>,
    /// Opponent's fixed lambda (tssr, match).
    #[arg(long)]
    pub opponent_lambda: Option<f64>,
    /// Score leakage only at the opponent's first decision.
    #[arg(long)]
    pub first_decision_only: Option<bool>,
    /// Cap on policy enumeration depth, in moves from the root.
    #[arg(long)]
    pub max_moves: Option<usize>,
    /// Output file; defaults to `<command>.csv` under the output directory.
    #[arg(long)]
    pub output: Option<String>,
    /// Rayon worker threads; results do not depend on this.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Fully resolved configuration with every default filled in.
#[derive(Debug, Clone)]
pub struct Config {
    pub game: String,
    pub dice: usize,
    pub faces: usize,
    pub total_cards: usize,
    pub hidden_cards: usize,
    pub algorithm: Algorithm,
    pub lambdas: String,
    pub grid0: String,
    pub grid1: String,
    pub budget: u64,
    pub seed: u64,
    pub passes_per_batch: usize,
    pub max_batches: usize,
    pub tolerance: f64,
    pub seat: usize,
    pub games: usize,
    pub draw_weight: f64,
    pub opponent_algorithm: Algorithm,
    /// Fixed opponent lambda; `None` tracks the sweep lambda (tssr) or
    /// falls back to 0 (match).
    pub opponent_lambda: Option<f64>,
    pub first_decision_only: bool,
    pub max_moves: Option<usize>,
    pub output: Option<String>,
    pub workers: Option<usize>,
}

fn invalid(message: impl Into<String>) -> Error {
    Error::InvalidConfig {
        message: message.into(),
    }
}

pub fn load_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| invalid(format!("config file {}: {e}", path.display())))
}

impl Config {
    /// Applies precedence: CLI flag, then config file, then default.
    pub fn resolve(args: &RunArgs) -> Result<Config> {
        let file = match &args.config {
            Some(path) => load_file_config(path)?,
            None => FileConfig::default(),
        };
        macro_rules! pick {
            ($field:ident, $default:expr) => {
                args.$field.clone().or(file.$field.clone()).unwrap_or($default)
            };
        }
        let algorithm_name = pick!(algorithm, "pimc".to_string());
        let algorithm: Algorithm = algorithm_name
            .parse()
            .map_err(|_| invalid(format!("unknown algorithm {algorithm_name:?}")))?;
        let opponent_name = pick!(opponent_algorithm, algorithm_name.clone());
        let opponent_algorithm: Algorithm = opponent_name
            .parse()
            .map_err(|_| invalid(format!("unknown algorithm {opponent_name:?}")))?;
        let config = Config {
            game: pick!(game, "liars_dice".to_string()),
            dice: pick!(dice, 1),
            faces: pick!(faces, 2),
            total_cards: pick!(total_cards, 6),
            hidden_cards: pick!(hidden_cards, 2),
            algorithm,
            lambdas: pick!(lambdas, "0.0,0.5,1.0".to_string()),
            grid0: pick!(grid0, "0.0,1.0".to_string()),
            grid1: pick!(grid1, "0.0,1.0".to_string()),
            budget: pick!(budget, 1000),
            seed: pick!(seed, 0),
            passes_per_batch: pick!(passes_per_batch, 10),
            max_batches: pick!(max_batches, 200),
            tolerance: pick!(tolerance, 0.01),
            seat: pick!(seat, 0),
            games: pick!(games, 1000),
            draw_weight: pick!(draw_weight, 0.5),
            opponent_algorithm,
            opponent_lambda: args.opponent_lambda.or(file.opponent_lambda),
            first_decision_only: pick!(first_decision_only, false),
            max_moves: args.max_moves.or(file.max_moves),
            output: args.output.clone().or(file.output.clone()),
            workers: args.workers.or(file.workers),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        match self.game.as_str() {
            "liars_dice" | "trick" | "leduc" => {}
            other => return Err(invalid(format!("unknown game {other:?}"))),
        }
        if self.seat > 1 {
            return Err(invalid(format!("seat {} must be 0 or 1", self.seat)));
        }
        if self.budget == 0 {
            return Err(invalid("budget must be positive"));
        }
        if let Some(l) = self.opponent_lambda {
            if !(0.0..=1.0).contains(&l) || l.is_nan() {
                return Err(invalid(format!("opponent_lambda {l} must lie in [0, 1]")));
            }
        }
        self.lambda_grid()?;
        LambdaSchedule::parse(&self.grid0)?;
        LambdaSchedule::parse(&self.grid1)?;
        Ok(())
    }

    /// The sweep grid (or the `policy` schedule) as validated values.
    pub fn lambda_grid(&self) -> Result<Vec<f64>> {
        let schedule = LambdaSchedule::parse(&self.lambdas)?;
        Ok(schedule.values().to_vec())
    }

    pub fn grid0_values(&self) -> Result<Vec<f64>> {
        Ok(LambdaSchedule::parse(&self.grid0)?.values().to_vec())
    }

    pub fn grid1_values(&self) -> Result<Vec<f64>> {
        Ok(LambdaSchedule::parse(&self.grid1)?.values().to_vec())
    }

    pub fn search_budget(&self) -> SearchBudget {
        SearchBudget {
            determinizations: self.budget as usize,
            base_seed: self.seed,
        }
    }

    pub fn stabilization(&self) -> StabilizationConfig {
        StabilizationConfig {
            passes_per_batch: self.passes_per_batch,
            max_batches: self.max_batches,
            tolerance: self.tolerance,
            base_seed: self.seed,
        }
    }

    /// Output path for a subcommand, honoring `output`, then the
    /// output-directory environment variable, then the working directory.
    pub fn output_path(&self, command: &str, extension: &str) -> PathBuf {
        match &self.output {
            Some(path) => PathBuf::from(path),
            None => {
                let dir = std::env::var(OUT_DIR_ENV).unwrap_or_else(|_| ".".to_string());
                PathBuf::from(dir).join(format!("{command}.{extension}"))
            }
        }
    }

    /// Canonical `key=value` lines describing the experiment, excluding
    /// execution-only settings (output path, worker count) so identical
    /// experiments produce identical bytes.
    pub fn echo_lines(&self, command: &str) -> Vec<String> {
        let mut lines = vec![
            format!("algorithm={}", self.algorithm),
            format!("budget={}", self.budget),
            format!("command={command}"),
            format!("dice={}", self.dice),
            format!("draw_weight={}", self.draw_weight),
            format!("faces={}", self.faces),
            format!("first_decision_only={}", self.first_decision_only),
            format!("game={}", self.game),
            format!("games={}", self.games),
            format!("grid0={}", self.grid0),
            format!("grid1={}", self.grid1),
            format!("hidden_cards={}", self.hidden_cards),
            format!("lambdas={}", self.lambdas),
            format!("max_batches={}", self.max_batches),
            format!(
                "max_moves={}",
                self.max_moves.map_or("none".to_string(), |m| m.to_string())
            ),
            format!("opponent_algorithm={}", self.opponent_algorithm),
            format!(
                "opponent_lambda={}",
                self.opponent_lambda
                    .map_or("same".to_string(), |l| l.to_string())
            ),
            format!("passes_per_batch={}", self.passes_per_batch),
            format!("seat={}", self.seat),
            format!("seed={}", self.seed),
            format!("tolerance={}", self.tolerance),
            format!("total_cards={}", self.total_cards),
        ];
        lines.sort();
        lines
    }
}

/// The concrete game a configuration names.
pub enum AnyGame {
    LiarsDice(LiarsDiceGame),
    Trick(TrickGame),
    Leduc(LeducGame),
}

pub fn build_game(config: &Config) -> Result<AnyGame> {
    match config.game.as_str() {
        "liars_dice" => Ok(AnyGame::LiarsDice(LiarsDiceGame::new(LiarsDiceConfig {
            dice_per_player: config.dice,
            faces: config.faces,
        })?)),
        "trick" => Ok(AnyGame::Trick(TrickGame::new(TrickGameConfig {
            total_cards: config.total_cards,
            hidden_cards: config.hidden_cards,
        })?)),
        "leduc" => Ok(AnyGame::Leduc(LeducGame::default())),
        other => Err(invalid(format!("unknown game {other:?}"))),
    }
}
