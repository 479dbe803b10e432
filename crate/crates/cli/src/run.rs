//! Subcommand execution: stabilize policies, evaluate, and write the CSV
//! plus its metadata sidecar.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use detmix_core::eval::{
    best_response_value, exploitability_sweep_csv, heatmap_csv, heatmap_sweep, match_sweep_csv,
    play_matches, stabilized_policy, tssr_evaluate, tssr_sweep_csv, TssrOptions,
};
use detmix_core::policy::{save_policy_file, StabilizedPolicy};
use detmix_core::{Algorithm, Game, LambdaSchedule, Result, Seat, TabularPolicy};
use sha2::{Digest, Sha256};

use crate::config::{build_game, AnyGame, Config};

/// What a subcommand produced: the main output plus any policy files.
pub struct RunOutput {
    pub csv_path: PathBuf,
    pub policy_files: Vec<(String, PathBuf)>,
}

/// Content hash in git blob framing (`blob <len>\0<bytes>`), hex encoded.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("blob {}\0", bytes.len()).as_bytes());
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        write!(hex, "{byte:02x}").unwrap();
    }
    hex
}

fn commented_header(config: &Config, command: &str) -> String {
    let mut out = String::new();
    for line in config.echo_lines(command) {
        out.push_str("# ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn write_sidecar(config: &Config, command: &str, output: &RunOutput) -> Result<()> {
    let mut text = String::new();
    for line in config.echo_lines(command) {
        text.push_str(&line);
        text.push('\n');
    }
    writeln!(
        text,
        "output={}",
        output.csv_path.display()
    )
    .unwrap();
    writeln!(
        text,
        "workers={}",
        config.workers.map_or("auto".to_string(), |w| w.to_string())
    )
    .unwrap();
    for (tag, path) in &output.policy_files {
        let bytes = std::fs::read(path)?;
        writeln!(text, "policy.{tag}={}", content_hash(&bytes)).unwrap();
    }
    let sidecar = sidecar_path(&output.csv_path);
    std::fs::write(sidecar, text)?;
    Ok(())
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta");
    csv.with_file_name(name)
}

/// Path for an archived intermediate policy, derived from the CSV path.
fn policy_path(csv: &Path, tag: &str) -> PathBuf {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    csv.with_file_name(format!("{stem}.{tag}.policy"))
}

fn log_stabilized(config: &Config, label: &str, result: &StabilizedPolicy) {
    eprintln!(
        "stabilized {label}: game={} batches={} passes={} variation={}",
        config.game, result.batches, result.passes, result.last_variation
    );
}

struct Runner<'a, G> {
    game: &'a G,
    config: &'a Config,
    csv_path: PathBuf,
    policy_files: Vec<(String, PathBuf)>,
}

impl<'a, G: Game> Runner<'a, G> {
    fn new(game: &'a G, config: &'a Config, command: &str) -> Self {
        Runner {
            game,
            config,
            csv_path: config.output_path(command, "csv"),
            policy_files: Vec::new(),
        }
    }

    /// Stabilizes one seat under a schedule, archives the policy file next
    /// to the CSV, and returns the policy.
    fn prepared_policy(
        &mut self,
        algorithm: Algorithm,
        schedule: &LambdaSchedule,
        seat: Seat,
        tag: &str,
    ) -> Result<StabilizedPolicy> {
        let result = stabilized_policy(
            self.game,
            algorithm,
            schedule,
            seat,
            self.config.search_budget(),
            &self.config.stabilization(),
            self.config.max_moves,
        )?;
        log_stabilized(self.config, tag, &result);
        let path = policy_path(&self.csv_path, tag);
        save_policy_file(self.game, &result.policy, &path)?;
        self.policy_files.push((tag.to_string(), path));
        Ok(result)
    }

    fn finish(self, command: &str, body: String) -> Result<RunOutput> {
        if let Some(parent) = self.csv_path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let content = format!("{}{}", commented_header(self.config, command), body);
        std::fs::write(&self.csv_path, content)?;
        let output = RunOutput {
            csv_path: self.csv_path,
            policy_files: self.policy_files,
        };
        write_sidecar(self.config, command, &output)?;
        Ok(output)
    }
}

fn run_tssr<G: Game>(game: &G, config: &Config) -> Result<RunOutput> {
    let mut runner = Runner::new(game, config, "tssr");
    let seat = config.seat;
    let mut rows = Vec::new();
    for lambda in config.lambda_grid()? {
        let schedule = LambdaSchedule::constant(lambda)?;
        let policy = runner
            .prepared_policy(config.algorithm, &schedule, seat, &format!("l{lambda}-s{seat}"))?
            .policy;
        let opponent_schedule = match config.opponent_lambda {
            Some(l) => LambdaSchedule::constant(l)?,
            None => schedule.clone(),
        };
        let opponent = runner
            .prepared_policy(
                config.opponent_algorithm,
                &opponent_schedule,
                1 - seat,
                &format!("l{lambda}-s{}", 1 - seat),
            )?
            .policy;
        let report = tssr_evaluate(
            game,
            &policy,
            seat,
            &opponent,
            TssrOptions {
                first_decision_only: config.first_decision_only,
            },
        )?;
        rows.push((lambda, report.average, report.ci));
    }
    runner.finish("tssr", tssr_sweep_csv(&rows))
}

fn run_exploit<G: Game>(game: &G, config: &Config) -> Result<RunOutput> {
    let mut runner = Runner::new(game, config, "exploit");
    let seat = config.seat;
    let mut rows = Vec::new();
    for lambda in config.lambda_grid()? {
        let schedule = LambdaSchedule::constant(lambda)?;
        let policy = runner
            .prepared_policy(config.algorithm, &schedule, seat, &format!("l{lambda}-s{seat}"))?
            .policy;
        let report = best_response_value(game, &policy, seat, 1 - seat)?;
        rows.push((lambda, report.value));
    }
    runner.finish("exploit", exploitability_sweep_csv(&rows))
}

fn run_heatmap<G: Game>(game: &G, config: &Config) -> Result<RunOutput> {
    let runner = Runner::new(game, config, "heatmap");
    let cells = heatmap_sweep(
        game,
        config.algorithm,
        &config.grid0_values()?,
        &config.grid1_values()?,
        config.seat,
        config.search_budget(),
        &config.stabilization(),
        config.max_moves,
    )?;
    for cell in &cells {
        eprintln!(
            "stabilized heatmap l0={} l1={}: game={} batches={}",
            cell.lambda0, cell.lambda1, config.game, cell.batches
        );
    }
    runner.finish("heatmap", heatmap_csv(&cells))
}

fn run_match<G: Game>(game: &G, config: &Config) -> Result<RunOutput> {
    let mut runner = Runner::new(game, config, "match");
    let seat = config.seat;
    let opponent_schedule = LambdaSchedule::constant(config.opponent_lambda.unwrap_or(0.0))?;
    let opponent = runner
        .prepared_policy(
            config.opponent_algorithm,
            &opponent_schedule,
            1 - seat,
            &format!("opponent-s{}", 1 - seat),
        )?
        .policy;
    let mut rows = Vec::new();
    for lambda in config.lambda_grid()? {
        let schedule = LambdaSchedule::constant(lambda)?;
        let policy = runner
            .prepared_policy(config.algorithm, &schedule, seat, &format!("l{lambda}-s{seat}"))?
            .policy;
        let (seat0, seat1): (&TabularPolicy, &TabularPolicy) = if seat == 0 {
            (&policy, &opponent)
        } else {
            (&opponent, &policy)
        };
        let report = play_matches(game, seat0, seat1, config.games, config.seed, config.draw_weight)?;
        let wins_for_test = if seat == 0 { report.wins } else { report.losses };
        let rate =
            (wins_for_test as f64 + config.draw_weight * report.draws as f64) / config.games as f64;
        let ci = 1.96 * (rate * (1.0 - rate) / config.games as f64).sqrt();
        rows.push((lambda, rate, ci));
    }
    runner.finish("match", match_sweep_csv(&rows))
}

fn run_policy<G: Game>(game: &G, config: &Config) -> Result<RunOutput> {
    let schedule = LambdaSchedule::parse(&config.lambdas)?;
    let result = stabilized_policy(
        game,
        config.algorithm,
        &schedule,
        config.seat,
        config.search_budget(),
        &config.stabilization(),
        config.max_moves,
    )?;
    log_stabilized(config, "policy", &result);
    let path = config.output_path("policy", "policy");
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    save_policy_file(game, &result.policy, &path)?;
    let output = RunOutput {
        csv_path: path.clone(),
        policy_files: vec![("policy".to_string(), path)],
    };
    write_sidecar(config, "policy", &output)?;
    Ok(output)
}

/// The subcommand being run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Tssr,
    Exploit,
    Heatmap,
    Match,
    Policy,
}

fn run_on<G: Game>(game: &G, kind: CommandKind, config: &Config) -> Result<RunOutput> {
    match kind {
        CommandKind::Tssr => run_tssr(game, config),
        CommandKind::Exploit => run_exploit(game, config),
        CommandKind::Heatmap => run_heatmap(game, config),
        CommandKind::Match => run_match(game, config),
        CommandKind::Policy => run_policy(game, config),
    }
}

pub fn run(kind: CommandKind, config: &Config) -> Result<RunOutput> {
    match build_game(config)? {
        AnyGame::LiarsDice(game) => run_on(&game, kind, config),
        AnyGame::Trick(game) => run_on(&game, kind, config),
        AnyGame::Leduc(game) => run_on(&game, kind, config),
    }
}
