//! Command-line front end: instance I/O, pipeline orchestration, and
//! human-readable or JSON reports.
//!
//! Exit codes are stable:
//! `0` success, `1` validation violations, `2` unreadable or malformed
//! input, `3` solver failure, `4` oracle/LP disagreement beyond tolerance,
//! `5` enumeration cap exceeded, `6` strategy file does not match the
//! instance, `7` improving deviations found by `verify`.

use crate::eval::{build_chain_for_profile, chain_values};
use crate::game::{validate, AssumptionBounds, GameInstance, StrategyProfile};
use crate::io;
use crate::lp::{build_dlp, solve_semi_stationary_parallel, SemiStationarySolution};
use crate::oracle::{oracle_solve, verify_nash, DeviationReport, VerifyMode, DEFAULT_CAP};
use crate::rational::{format_decimal, format_rational, parse_rational, to_f64, Rational};
use crate::reduction::{lift_strategy, reduce};
use crate::sim::{simulate_payoff, SimConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;
pub const EXIT_CAP: i32 = 5;
pub const EXIT_STRATEGY: i32 = 6;
pub const EXIT_DEVIATIONS: i32 = 7;

#[derive(Debug, Parser)]
#[command(
    name = "pisolve",
    about = "Solve and verify perfect-information semi-Markov games under the limiting ratio average payoff",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an instance file against the model rules.
    Validate {
        path: PathBuf,
        /// Lower sojourn-time bound.
        #[arg(long, default_value = "1/1000000000")]
        eps: String,
        /// Upper sojourn-time bound.
        #[arg(long, default_value = "1000000000")]
        max_sojourn: String,
    },
    /// Reduce a game to its single-controller process and print it as JSON.
    Reduce {
        path: PathBuf,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve per initial state, lift the strategy, optionally cross-check.
    Solve {
        path: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Print the full policy-to-value table by exact enumeration.
    Enumerate {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Show exact rationals instead of decimals.
        #[arg(long)]
        exact: bool,
    },
    /// Check a strategy profile for improving unilateral deviations.
    Verify {
        path: PathBuf,
        /// Strategy file produced by `solve --emit-strategy`.
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Lemma)]
        mode: Mode,
        #[arg(long, default_value = "1/1000000")]
        tol: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Estimate payoffs by Monte Carlo and print analytic values alongside.
    Simulate {
        path: PathBuf,
        /// Strategy file produced by `solve --emit-strategy`.
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long, default_value_t = 1)]
        initial_state: usize,
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        replications: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct SolveOpts {
    /// Initial state to solve for, or `all`.
    #[arg(long, default_value = "all")]
    pub initial_state: String,
    /// Cross-check the LP values against exact complete enumeration.
    #[arg(long)]
    pub oracle: bool,
    /// Also run the deviation checker in the given mode.
    #[arg(long, value_enum)]
    pub verify: Option<Mode>,
    /// Tolerance for cross-checks and deviation flags.
    #[arg(long, default_value = "1/1000000")]
    pub tol: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Show exact rationals where available.
    #[arg(long)]
    pub exact: bool,
    /// Omit timings so identical inputs give byte-identical reports.
    #[arg(long)]
    pub no_timings: bool,
    /// Write the lifted per-player strategy profile to a file.
    #[arg(long)]
    pub emit_strategy: Option<PathBuf>,
    /// Print each linear program as a plain-text equation listing.
    #[arg(long)]
    pub dump_lp: bool,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Lemma,
    Definition3,
}

impl From<Mode> for VerifyMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Lemma => VerifyMode::Lemma,
            Mode::Definition3 => VerifyMode::Definition3,
        }
    }
}

/// Worker-thread cap for per-initial-state solves.
fn thread_cap() -> usize {
    std::env::var("PISOLVE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Validate { path, eps, max_sojourn } => cmd_validate(&path, &eps, &max_sojourn),
        Command::Reduce { path, output } => cmd_reduce(&path, output.as_deref()),
        Command::Solve { path, opts } => cmd_solve(&path, &opts),
        Command::Enumerate { path, cap, format, exact } => cmd_enumerate(&path, cap, format, exact),
        Command::Verify { path, strategy, mode, tol, cap, format } => {
            cmd_verify(&path, &strategy, mode, &tol, cap, format)
        }
        Command::Simulate { path, strategy, initial_state, steps, seed, replications, format } => {
            cmd_simulate(&path, &strategy, initial_state, steps, seed, replications, format)
        }
    }
}

fn load_game(path: &std::path::Path) -> Result<GameInstance, i32> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    io::parse_game(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn parse_tol(tol: &str) -> Result<Rational, i32> {
    parse_rational(tol).map_err(|e| {
        eprintln!("error: bad tolerance: {e}");
        EXIT_PARSE
    })
}

/// Validates and prints violations; `Err` carries the exit code.
fn require_valid(game: &GameInstance) -> Result<(), i32> {
    let report = validate(game, &AssumptionBounds::default());
    if report.ok() {
        Ok(())
    } else {
        for v in report.violations() {
            eprintln!("violation: {v}");
        }
        Err(EXIT_INVALID)
    }
}

fn cmd_validate(path: &std::path::Path, eps: &str, max_sojourn: &str) -> i32 {
    let game = match load_game(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let bounds = match (parse_rational(eps), parse_rational(max_sojourn)) {
        (Ok(eps), Ok(m)) => AssumptionBounds { eps, m },
        (e1, e2) => {
            if let Err(e) = e1 {
                eprintln!("error: bad --eps: {e}");
            }
            if let Err(e) = e2 {
                eprintln!("error: bad --max-sojourn: {e}");
            }
            return EXIT_PARSE;
        }
    };
    let report = validate(&game, &bounds);
    if report.ok() {
        println!(
            "ok: {} players, {} states, {} state-action pairs",
            game.num_players(),
            game.num_states(),
            game.state_action_pairs()
        );
        EXIT_OK
    } else {
        for v in report.violations() {
            println!("violation: {v}");
        }
        EXIT_INVALID
    }
}

fn cmd_reduce(path: &std::path::Path, output: Option<&std::path::Path>) -> i32 {
    let game = match load_game(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    if let Err(code) = require_valid(&game) {
        return code;
    }
    let json = io::smdp_to_json(&reduce(&game));
    match output {
        Some(file) => {
            if let Err(e) = std::fs::write(file, json + "\n") {
                eprintln!("error: cannot write {}: {e}", file.display());
                return EXIT_PARSE;
            }
        }
        None => println!("{json}"),
    }
    EXIT_OK
}

#[derive(Serialize)]
struct InstanceSummary {
    players: usize,
    states: usize,
    state_action_pairs: usize,
}

#[derive(Serialize)]
struct ObjectiveEntry {
    initial_state: usize,
    value: f64,
    display: String,
}

#[derive(Serialize)]
struct OracleEntry {
    initial_state: usize,
    exact: String,
    value: f64,
}

#[derive(Serialize)]
struct OracleComparison {
    values: Vec<OracleEntry>,
    max_abs_diff: f64,
    agrees: bool,
}

#[derive(Serialize)]
struct DeviationRowDto {
    player: usize,
    initial_state: usize,
    equilibrium: String,
    equilibrium_value: f64,
    best_response: String,
    best_response_value: f64,
    improving: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct DeviationReportDto {
    mode: String,
    improving_found: bool,
    rows: Vec<DeviationRowDto>,
}

#[derive(Serialize)]
struct RunReport {
    instance: InstanceSummary,
    initial_states: Vec<usize>,
    objectives: Vec<ObjectiveEntry>,
    strategy: io::StrategyDto,
    profile: Vec<io::StrategyDto>,
    pivots: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviations: Option<DeviationReportDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<Timings>,
}

#[derive(Serialize)]
struct Timings {
    solve_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify_ms: Option<f64>,
    total_ms: f64,
}

fn deviation_report_dto(report: &DeviationReport) -> DeviationReportDto {
    DeviationReportDto {
        mode: report.mode.to_string(),
        improving_found: !report.no_improvement(),
        rows: report
            .rows
            .iter()
            .map(|r| DeviationRowDto {
                player: r.player,
                initial_state: r.initial_state,
                equilibrium: format_rational(&r.equilibrium),
                equilibrium_value: to_f64(&r.equilibrium),
                best_response: format_rational(&r.best_response),
                best_response_value: to_f64(&r.best_response),
                improving: r.improving,
                witness: r.witness.as_ref().map(|w| w.actions().to_vec()),
            })
            .collect(),
    }
}

fn cmd_solve(path: &std::path::Path, opts: &SolveOpts) -> i32 {
    let started = Instant::now();
    let game = match load_game(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    if let Err(code) = require_valid(&game) {
        return code;
    }
    let tol = match parse_tol(&opts.tol) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let initial_states: Vec<usize> = if opts.initial_state == "all" {
        (1..=game.num_states()).collect()
    } else {
        match opts.initial_state.parse::<usize>() {
            Ok(s) if s >= 1 && s <= game.num_states() => vec![s],
            _ => {
                eprintln!(
                    "error: --initial-state must be `all` or a state in 1..={}",
                    game.num_states()
                );
                return EXIT_PARSE;
            }
        }
    };

    let smdp = reduce(&game);
    if opts.dump_lp {
        for &s1 in &initial_states {
            println!("# dual program, initial state {s1}");
            print!("{}", build_dlp(&smdp, s1).dump());
        }
    }

    let solve_started = Instant::now();
    let solution = match solve_semi_stationary_parallel(&smdp, thread_cap()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: solver failed: {e}");
            return EXIT_SOLVER;
        }
    };
    let solve_ms = solve_started.elapsed().as_secs_f64() * 1e3;
    let profile = lift_strategy(&solution.strategy, &game);

    // oracle cross-check
    let mut oracle_section = None;
    let mut oracle_ms = None;
    if opts.oracle {
        let oracle_started = Instant::now();
        let result = match oracle_solve(&smdp, opts.cap) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: oracle failed: {e}");
                return EXIT_CAP;
            }
        };
        oracle_ms = Some(oracle_started.elapsed().as_secs_f64() * 1e3);
        let mut max_abs_diff: f64 = 0.0;
        let values: Vec<OracleEntry> = initial_states
            .iter()
            .map(|&s1| {
                let exact = &result.best_values[s1 - 1];
                let value = to_f64(exact);
                max_abs_diff = max_abs_diff.max((value - solution.values[s1 - 1]).abs());
                OracleEntry { initial_state: s1, exact: format_rational(exact), value }
            })
            .collect();
        let agrees = max_abs_diff <= to_f64(&tol);
        oracle_section = Some(OracleComparison { values, max_abs_diff, agrees });
    }

    // deviation check
    let mut deviations = None;
    let mut verify_ms = None;
    if let Some(mode) = opts.verify {
        let verify_started = Instant::now();
        let report = match verify_nash(&game, &profile, mode.into(), &tol, opts.cap) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: verification failed: {e}");
                return EXIT_CAP;
            }
        };
        verify_ms = Some(verify_started.elapsed().as_secs_f64() * 1e3);
        deviations = Some(deviation_report_dto(&report));
    }

    if let Some(file) = &opts.emit_strategy {
        if let Err(e) = std::fs::write(file, io::profile_to_json(&profile) + "\n") {
            eprintln!("error: cannot write {}: {e}", file.display());
            return EXIT_PARSE;
        }
    }

    let report = RunReport {
        instance: InstanceSummary {
            players: game.num_players(),
            states: game.num_states(),
            state_action_pairs: game.state_action_pairs(),
        },
        initial_states: initial_states.clone(),
        objectives: initial_states
            .iter()
            .map(|&s1| ObjectiveEntry {
                initial_state: s1,
                value: solution.values[s1 - 1],
                display: format!("{:.4}", solution.values[s1 - 1]),
            })
            .collect(),
        strategy: io::strategy_to_dto(&solution.strategy, 0),
        profile: profile
            .strategies()
            .iter()
            .enumerate()
            .map(|(i, s)| io::strategy_to_dto(s, i + 1))
            .collect(),
        pivots: solution.pivots.clone(),
        oracle: oracle_section,
        deviations,
        timings: if opts.no_timings {
            None
        } else {
            Some(Timings {
                solve_ms,
                oracle_ms,
                verify_ms,
                total_ms: started.elapsed().as_secs_f64() * 1e3,
            })
        },
    };

    match opts.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Text => print_solve_text(&game, &solution, &report, opts.exact),
    }

    if let Some(oracle) = &report.oracle {
        if !oracle.agrees {
            eprintln!(
                "error: LP and enumeration disagree by {} (tolerance {})",
                oracle.max_abs_diff, opts.tol
            );
            return EXIT_DISAGREEMENT;
        }
    }
    EXIT_OK
}

fn print_solve_text(
    game: &GameInstance,
    solution: &SemiStationarySolution,
    report: &RunReport,
    exact: bool,
) {
    println!(
        "instance: {} players, {} states, {} state-action pairs",
        report.instance.players, report.instance.states, report.instance.state_action_pairs
    );
    println!("initial state | objective | stationary row");
    for entry in &report.objectives {
        let row = solution.strategy.row(entry.initial_state).expect("solved row");
        println!("{:>13} | {:>9} | {}", entry.initial_state, entry.display, row);
    }
    for (i, strategy) in report.profile.iter().enumerate() {
        println!("player {} strategy:", i + 1);
        for (s1, row) in &strategy.rows {
            let actions: Vec<String> = row.values().map(|a| a.to_string()).collect();
            println!("  from {}: ({})", s1, actions.join(", "));
        }
    }
    println!("pivots per initial state: {:?}", report.pivots);
    if let Some(oracle) = &report.oracle {
        println!(
            "oracle check: {} (max |diff| = {:.2e})",
            if oracle.agrees { "agrees" } else { "DISAGREES" },
            oracle.max_abs_diff
        );
        if exact {
            for v in &oracle.values {
                println!("  enumeration value at {}: {}", v.initial_state, v.exact);
            }
        }
    }
    if let Some(dev) = &report.deviations {
        print_deviations_text(dev, exact);
    }
    if let Some(t) = &report.timings {
        println!("total time: {:.1} ms", t.total_ms);
    }
    if game.num_players() == 1 {
        println!("note: single controller; profile equals the stationary rows");
    }
}

fn print_deviations_text(dev: &DeviationReportDto, exact: bool) {
    println!(
        "deviation check ({} mode): {}",
        dev.mode,
        if dev.improving_found { "improving deviations FOUND" } else { "no improving deviation" }
    );
    for row in &dev.rows {
        let (eq, br) = if exact {
            (row.equilibrium.clone(), row.best_response.clone())
        } else {
            (
                format!("{:.4}", row.equilibrium_value),
                format!("{:.4}", row.best_response_value),
            )
        };
        let marker = if row.improving { "  IMPROVING" } else { "" };
        println!(
            "  player {} from state {}: profile {} vs best response {}{}",
            row.player, row.initial_state, eq, br, marker
        );
        if let Some(w) = &row.witness {
            let actions: Vec<String> = w.iter().map(|a| a.to_string()).collect();
            println!("    witness: ({})", actions.join(", "));
        }
    }
}

fn cmd_enumerate(path: &std::path::Path, cap: u64, format: Format, exact: bool) -> i32 {
    let game = match load_game(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    if let Err(code) = require_valid(&game) {
        return code;
    }
    let smdp = reduce(&game);
    let result = match oracle_solve(&smdp, cap) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CAP;
        }
    };
    let render = |r: &Rational| {
        if exact {
            format_rational(r)
        } else {
            format_decimal(r, 4)
        }
    };
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct TableRow {
                policy: Vec<usize>,
                values: Vec<String>,
            }
            #[derive(Serialize)]
            struct Table {
                policies: Vec<TableRow>,
                best_values: Vec<String>,
                optimal_rows: std::collections::BTreeMap<String, Vec<usize>>,
            }
            let table = Table {
                policies: result
                    .policies
                    .iter()
                    .zip(&result.values)
                    .map(|(p, v)| TableRow {
                        policy: p.actions().to_vec(),
                        values: v.iter().map(render).collect(),
                    })
                    .collect(),
                best_values: result.best_values.iter().map(render).collect(),
                optimal_rows: result
                    .strategy
                    .rows()
                    .iter()
                    .map(|(s1, p)| (s1.to_string(), p.actions().to_vec()))
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&table).unwrap());
        }
        Format::Text => {
            for (p, v) in result.policies.iter().zip(&result.values) {
                let vals: Vec<String> = v.iter().map(render).collect();
                println!("{} -> ({})", p, vals.join(", "));
            }
            let best: Vec<String> = result.best_values.iter().map(render).collect();
            println!("value vector: ({})", best.join(", "));
        }
    }
    EXIT_OK
}

fn load_profile(
    path: &std::path::Path,
    game: &GameInstance,
) -> Result<StrategyProfile, i32> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    let value: Result<serde_json::Value, _> = serde_json::from_str(&text);
    if value.is_err() {
        eprintln!("error: {}: malformed JSON", path.display());
        return Err(EXIT_PARSE);
    }
    io::profile_from_json(&text, game.num_players(), game.num_states()).map_err(|e| {
        eprintln!("error: strategy file does not match the instance: {e}");
        EXIT_STRATEGY
    })
}

fn cmd_verify(
    path: &std::path::Path,
    strategy: &std::path::Path,
    mode: Mode,
    tol: &str,
    cap: u64,
    format: Format,
) -> i32 {
    let game = match load_game(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    if let Err(code) = require_valid(&game) {
        return code;
    }
    let profile = match load_profile(strategy, &game) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let tol = match parse_tol(tol) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let report = match verify_nash(&game, &profile, mode.into(), &tol, cap) {
        Ok(r) => r,
        Err(crate::oracle::OracleError::CapExceeded { count, cap }) => {
            eprintln!("error: {count} policies exceed the cap of {cap}");
            return EXIT_CAP;
        }
        Err(e) => {
            eprintln!("error: strategy file does not match the instance: {e}");
            return EXIT_STRATEGY;
        }
    };
    let dto = deviation_report_dto(&report);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&dto).unwrap()),
        Format::Text => print_deviations_text(&dto, false),
    }
    if report.no_improvement() {
        EXIT_OK
    } else {
        EXIT_DEVIATIONS
    }
}

fn cmd_simulate(
    path: &std::path::Path,
    strategy: &std::path::Path,
    initial_state: usize,
    steps: u64,
    seed: u64,
    replications: u32,
    format: Format,
) -> i32 {
    let game = match load_game(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    if let Err(code) = require_valid(&game) {
        return code;
    }
    if initial_state < 1 || initial_state > game.num_states() {
        eprintln!("error: --initial-state must lie in 1..={}", game.num_states());
        return EXIT_PARSE;
    }
    let profile = match load_profile(strategy, &game) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let joint = match profile.joint_row(&game, initial_state) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: strategy file does not match the instance: {e}");
            return EXIT_STRATEGY;
        }
    };
    let chain = match build_chain_for_profile(&game, &joint) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: strategy file does not match the instance: {e}");
            return EXIT_STRATEGY;
        }
    };
    let analytic = match chain_values(&chain) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let cfg = SimConfig { steps, seed, initial_state, replications };
    let estimate = simulate_payoff(&chain, &cfg);

    #[derive(Serialize)]
    struct SimRow {
        criterion: String,
        estimate: f64,
        analytic: f64,
        analytic_exact: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        std_error: Option<f64>,
    }
    let rows: Vec<SimRow> = chain
        .criteria
        .iter()
        .enumerate()
        .map(|(k, criterion)| SimRow {
            criterion: criterion.to_string(),
            estimate: estimate.estimates[k],
            analytic: to_f64(&analytic[k][initial_state - 1]),
            analytic_exact: format_rational(&analytic[k][initial_state - 1]),
            std_error: estimate.std_errors.as_ref().map(|se| se[k]),
        })
        .collect();

    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct SimReport {
                initial_state: usize,
                steps: u64,
                seed: u64,
                replications: u32,
                rows: Vec<SimRow>,
            }
            let report = SimReport { initial_state, steps, seed, replications, rows };
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        Format::Text => {
            println!(
                "simulation from state {initial_state}: {steps} steps x {replications} replications, seed {seed}"
            );
            for row in &rows {
                let se = row
                    .std_error
                    .map(|s| format!(" (se {:.4})", s))
                    .unwrap_or_default();
                println!(
                    "  {:<10} estimate {:.4}{} | analytic {:.4} = {}",
                    row.criterion, row.estimate, se, row.analytic, row.analytic_exact
                );
            }
        }
    }
    EXIT_OK
}
