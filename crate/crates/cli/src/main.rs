use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skilldepth::evaluation::{play_match, play_traced, GameValue, MatchSeeds};
use skilldepth::game::{params_from_genome, GameParams};
use skilldepth::harness::{self, output, ExperimentConfig, SweepRecord, TrialSummary};
use skilldepth::{Error, Genome, Result};

#[derive(Parser)]
#[command(
    name = "skilldepth",
    version,
    about = "Tune game rules for skill depth"
)]
struct Cli {
    /// Base seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat `key = value` experiment file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file or directory, depending on the command.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core). Never changes results.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Extra `key=value` settings, applied after the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and print the result.
    Play(PlayArgs),
    /// Estimate the win rate over a grid or sample of game instances.
    Sweep(SweepArgs),
    /// Average a sweep by the values of each dimension.
    Marginals(MarginalArgs),
    /// Run repeated optimizer trials.
    Optimize(OptimizeArgs),
    /// Replay recommended genomes for a fresh win-rate estimate.
    Validate(ValidateArgs),
    /// Measure forward-model speed.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Players {
    /// Player 1: ras, random or olmcts[:iterations[:depth[:c]]].
    #[arg(long)]
    p1: Option<String>,
    #[arg(long)]
    p2: Option<String>,
    /// Parameter space: 5d or 6d.
    #[arg(long)]
    space: Option<String>,
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    players: Players,
    /// Genome such as 3-4-9-8-7; default rules when omitted.
    #[arg(long)]
    genome: Option<String>,
    /// Write one JSON line per tick to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    players: Players,
    /// Points to sample; 0 sweeps the whole space.
    #[arg(long)]
    sample: Option<u64>,
    /// Games per point.
    #[arg(long)]
    trials: Option<u32>,
}

#[derive(Args)]
struct MarginalArgs {
    /// Sweep CSV to read.
    input: PathBuf,
    /// Dimensions to report; all of the sweep's dimensions by default.
    #[arg(long = "dim")]
    dims: Vec<String>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    players: Players,
    /// rmhc or mabrmhc.
    #[arg(long)]
    algo: Option<String>,
    /// Games per fitness call.
    #[arg(short, long)]
    r: Option<u32>,
    /// Games per trial.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    trials: Option<u32>,
    /// Games per audit of a recommendation (0 disables audits).
    #[arg(long)]
    audit: Option<u32>,
    /// Audit only the final recommendation of each trial.
    #[arg(long)]
    final_audit_only: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    players: Players,
    /// Genomes to replay.
    #[arg(long = "genome")]
    genomes: Vec<String>,
    /// trials.csv from `optimize`; its recommendations are replayed.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Games per genome.
    #[arg(long)]
    games: Option<u32>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 200)]
    games: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut config = ExperimentConfig::default();
    let mut settings = match &cli.config {
        Some(path) => config.load(path)?,
        None => Default::default(),
    };
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::InvalidValue {
            key: kv.clone(),
            message: "expected KEY=VALUE".into(),
        })?;
        config.set(k.trim(), v.trim())?;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if cli.out.is_some() {
        settings.out = cli.out.clone();
    }
    let jobs = cli.jobs.or(settings.jobs).unwrap_or(0);
    let out = settings.out;
    harness::with_jobs(jobs, move || dispatch(cli.command, config, out))?
}

fn apply_players(config: &mut ExperimentConfig, p: &Players) -> Result<()> {
    for (key, value) in [("p1", &p.p1), ("p2", &p.p2), ("space", &p.space)] {
        if let Some(v) = value {
            config.set(key, v)?;
        }
    }
    Ok(())
}

fn dispatch(command: Command, mut config: ExperimentConfig, out: Option<PathBuf>) -> Result<()> {
    match command {
        Command::Play(a) => {
            apply_players(&mut config, &a.players)?;
            config.validate()?;
            play(&config, a.genome.as_deref(), a.trace.as_deref())
        }
        Command::Sweep(a) => {
            apply_players(&mut config, &a.players)?;
            if let Some(n) = a.sample {
                config.set("sample", &n.to_string())?;
            }
            if let Some(t) = a.trials {
                config.sweep_trials = t;
            }
            let records = harness::sweep(&config)?;
            let path = out.unwrap_or_else(|| PathBuf::from("sweep.csv"));
            output::write_csv(&path, &config, &records)?;
            let mean = records.iter().map(|r| r.mean).sum::<f64>() / records.len() as f64;
            let below = records.iter().filter(|r| r.mean < 1.0).count();
            println!(
                "{} points, mean {mean:.4}, {below} below 1.0, written to {}",
                records.len(),
                path.display()
            );
            Ok(())
        }
        Command::Marginals(a) => marginals(&a, out.as_deref()),
        Command::Optimize(a) => {
            apply_players(&mut config, &a.players)?;
            let sets = [
                ("algo", a.algo),
                ("r", a.r.map(|v| v.to_string())),
                ("budget", a.budget.map(|v| v.to_string())),
                ("trials", a.trials.map(|v| v.to_string())),
                ("audit", a.audit.map(|v| v.to_string())),
            ];
            for (k, v) in sets {
                if let Some(v) = v {
                    config.set(k, &v)?;
                }
            }
            optimize(
                &config,
                !a.final_audit_only,
                &out.unwrap_or_else(|| PathBuf::from("optimize")),
            )
        }
        Command::Validate(a) => {
            apply_players(&mut config, &a.players)?;
            if let Some(g) = a.games {
                config.validate_games = g;
            }
            let mut genomes = a
                .genomes
                .iter()
                .map(|g| g.parse())
                .collect::<Result<Vec<Genome>>>()?;
            if let Some(path) = &a.input {
                let trials: Vec<TrialSummary> = output::read_csv(path)?;
                genomes.extend(trials.into_iter().map(|t| t.recommendation));
            }
            let report = harness::validate(&config, &genomes)?;
            if let Some(path) = &out {
                output::write_csv(path, &config, &report.per_genome)?;
            }
            for v in &report.per_genome {
                println!("{}\t{:.4}\t±{:.4}", v.genome, v.mean, v.se);
            }
            println!(
                "{} vs {}: {} over {} genomes x {} games",
                config.p1,
                config.p2,
                harness::format_percent(report.percent),
                report.per_genome.len(),
                config.validate_games
            );
            Ok(())
        }
        Command::Bench(a) => {
            let r = harness::bench(GameParams::default(), a.games, config.seed)?;
            println!(
                "{} ticks in {:.3} s: {:.0} ticks/s",
                r.ticks, r.seconds, r.ticks_per_second
            );
            Ok(())
        }
    }
}

fn play(config: &ExperimentConfig, genome: Option<&str>, trace: Option<&Path>) -> Result<()> {
    let params = match genome {
        Some(g) => params_from_genome(&config.space(), &g.parse()?)?,
        None => GameParams::default(),
    };
    let seeds = MatchSeeds::from_seed(config.seed);
    let outcome = match trace {
        Some(path) => {
            let (outcome, records) =
                play_traced(params, config.physics, &config.p1, &config.p2, seeds)?;
            output::write_jsonl(path, config, &records)?;
            outcome
        }
        None => play_match(params, config.physics, &config.p1, &config.p2, seeds)?,
    };
    let value = GameValue::from_outcome(&outcome);
    println!(
        "{} vs {}: {:?} (scores {} : {}, value {})",
        config.p1,
        config.p2,
        outcome.verdict,
        outcome.scores[0],
        outcome.scores[1],
        value.value()
    );
    Ok(())
}

fn marginals(a: &MarginalArgs, out: Option<&Path>) -> Result<()> {
    let records: Vec<SweepRecord> = output::read_csv(&a.input)?;
    let dims: Vec<String> = if a.dims.is_empty() {
        let mut d: Vec<String> = ["v_s", "v_t", "v_m", "d", "c"].map(String::from).to_vec();
        if records.first().is_some_and(|r| r.sr.is_some()) {
            d.push("sr".into());
        }
        d
    } else {
        a.dims.clone()
    };
    let mut rows = Vec::new();
    for dim in &dims {
        let spread = harness::between_group_variance(&records, dim)?;
        println!("{dim} (between-group variance {spread:.6})");
        for row in harness::marginals(&records, dim)? {
            println!(
                "  {:>6}\t{:.4}\t±{:.4}\t(n = {})",
                row.value, row.mean, row.se, row.points
            );
            rows.push(row);
        }
    }
    if let Some(path) = out {
        let meta = output::read_csv_meta(&a.input)?;
        output::write_csv(path, &meta, &rows)?;
    }
    Ok(())
}

fn optimize(config: &ExperimentConfig, audit_history: bool, dir: &Path) -> Result<()> {
    let result = harness::optimize_experiment(config, audit_history)?;
    output::write_jsonl(&dir.join("run.jsonl"), config, &result.log)?;
    output::write_csv(&dir.join("curves.csv"), config, &result.curves)?;
    output::write_csv(&dir.join("trials.csv"), config, &result.trials)?;
    for t in &result.trials {
        let audited = t
            .audited
            .map_or_else(|| "-".to_string(), |a| format!("{a:.4}"));
        println!(
            "trial {:>3}: {} best_fit_so_far {:.4} audited {audited}",
            t.trial, t.recommendation, t.best_fit_so_far
        );
    }
    println!("written to {}", dir.display());
    Ok(())
}
