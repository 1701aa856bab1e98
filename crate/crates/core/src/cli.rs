//! Command-line front end.
//!
//! [`cmd_dispatch`] parses arguments and renders output without touching the
//! process, so it can be driven from tests. Exact fractions are the primary
//! output everywhere; decimals are annotations.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Result;
use crate::etrennes::{etrennes_solve, EtrennesConfig};
use crate::leher::{
    self, build_leher_matrix, conditional_lot_paul, conditional_lot_pierre, PaulAction, PaulStrategy,
    PierreAction, PierreStrategy, Rank,
};
use crate::montecarlo::{leher_simulate, Estimate};
use crate::pool::{pool_simulate, pool_solve, PoolConfig, DEFAULT_MAX_GAMES};
use crate::report::reproduce;
use crate::solver::{solve_zero_sum, GameMatrix, GameSolution};
use crate::Rational;

/// Band, in standard errors, within which a simulation agrees with its
/// exact target.
pub const SIGMA_BAND: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "lots", about = "Exact lots for Le Her, the pool, and Les Etrennes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two-player Le Her.
    #[command(subcommand)]
    Leher(LeherCommand),
    /// The problem of the pool.
    #[command(subcommand)]
    Pool(PoolCommand),
    /// The parity game between father and son.
    #[command(subcommand)]
    Etrennes(EtrennesCommand),
    /// Monte Carlo cross-checks.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Recompute every historical value; exit status 0 iff all match.
    Reproduce,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
enum LeherCommand {
    /// Paul's win probability for the central 2x2 table.
    Table {
        /// Print all 14x14 threshold pairs instead.
        #[arg(long)]
        thresholds: bool,
    },
    /// Minimax solution of the table.
    Solve {
        /// Solve the 14x14 threshold game instead.
        #[arg(long)]
        thresholds: bool,
    },
    /// A player's lot after seeing their own card.
    Conditional {
        #[arg(long, value_enum)]
        player: Player,
        #[arg(long, value_parser = parse_rank)]
        card: Rank,
        /// hold, switch (Paul) or draw (Pierre)
        #[arg(long)]
        action: String,
        /// The other player's strategy: threshold:t or 13 H/S characters.
        #[arg(long)]
        opponent: String,
    },
    /// Paul's lot when both sides mix with token weights.
    Value(Weights),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Player {
    Paul,
    Pierre,
}

#[derive(Debug, Args)]
struct Weights {
    /// Paul's weight on switching the 7.
    #[arg(long, allow_hyphen_values = true)]
    a: Rational,
    /// Paul's weight on holding the 7.
    #[arg(long, allow_hyphen_values = true)]
    b: Rational,
    /// Pierre's weight on switching the 8.
    #[arg(long, allow_hyphen_values = true)]
    c: Rational,
    /// Pierre's weight on holding the 8.
    #[arg(long, allow_hyphen_values = true)]
    d: Rational,
}

#[derive(Debug, Args)]
struct PoolArgs {
    #[arg(long, default_value_t = 3)]
    players: usize,
    /// Probability that the sitting champion wins a game.
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    p: Rational,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    ante: Rational,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    fee: Rational,
    /// Consecutive wins needed to take the pot; defaults to players - 1.
    #[arg(long)]
    streak: Option<usize>,
}

impl PoolArgs {
    fn config(&self) -> PoolConfig {
        let cfg = PoolConfig::new(self.players)
            .with_win_prob(self.p.clone())
            .with_ante(self.ante.clone())
            .with_fee(self.fee.clone());
        match self.streak {
            Some(s) => cfg.with_streak(s),
            None => cfg,
        }
    }
}

#[derive(Debug, Subcommand)]
enum PoolCommand {
    Solve(PoolArgs),
    Simulate {
        #[command(flatten)]
        pool: PoolArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_GAMES)]
        max_games: u64,
    },
}

#[derive(Debug, Subcommand)]
enum EtrennesCommand {
    Solve {
        #[arg(long, default_value = "4", allow_hyphen_values = true)]
        even: Rational,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        odd: Rational,
    },
}

#[derive(Debug, Subcommand)]
enum SimulateCommand {
    Leher {
        #[command(flatten)]
        weights: Weights,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
}

fn parse_rank(s: &str) -> std::result::Result<Rank, String> {
    let v: i64 = s.parse().map_err(|_| format!("{s:?} is not a rank"))?;
    Rank::new(v).map_err(|e| e.to_string())
}

/// What a command produced, and the exit status it asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// One command's result in all three renderings.
struct Rendered {
    text: String,
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    code: i32,
}

impl Rendered {
    fn ok(text: String, json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Rendered { text, json, header: header.iter().map(|s| s.to_string()).collect(), rows, code: 0 }
    }

    fn format(&self, format: Format) -> String {
        match format {
            Format::Text => format!("{}\n", self.text.trim_end()),
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.json).expect("json")),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory");
                for row in &self.rows {
                    w.write_record(row).expect("in-memory");
                }
                String::from_utf8(w.into_inner().expect("in-memory")).expect("utf-8")
            }
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn cmd_dispatch<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Output { stdout: rendered, stderr: String::new(), code }
            } else {
                Output { stdout: String::new(), stderr: rendered, code }
            };
        }
    };
    match run(&cli.command) {
        Ok(r) => Output { stdout: r.format(cli.format), stderr: String::new(), code: r.code },
        Err(e) => Output { stdout: String::new(), stderr: format!("error: {e}\n"), code: 1 },
    }
}

fn run(command: &Command) -> Result<Rendered> {
    match command {
        Command::Leher(LeherCommand::Table { thresholds }) => {
            let m = if *thresholds { leher::threshold_matrix() } else { build_leher_matrix() };
            Ok(render_matrix(&m))
        }
        Command::Leher(LeherCommand::Solve { thresholds }) => {
            let m = if *thresholds { leher::threshold_matrix() } else { build_leher_matrix() };
            Ok(render_solution(&m, &solve_zero_sum(&m)))
        }
        Command::Leher(LeherCommand::Conditional { player, card, action, opponent }) => {
            conditional(*player, *card, action, opponent)
        }
        Command::Leher(LeherCommand::Value(w)) => {
            let v = leher::mixed_value(&w.a, &w.b, &w.c, &w.d)?;
            Ok(render_value("value", &v))
        }
        Command::Pool(PoolCommand::Solve(args)) => render_pool(&args.config()),
        Command::Pool(PoolCommand::Simulate { pool, seed, trials, max_games }) => {
            render_pool_sim(&pool.config(), *seed, *trials, *max_games)
        }
        Command::Etrennes(EtrennesCommand::Solve { even, odd }) => {
            let cfg = EtrennesConfig::new(even.clone(), odd.clone())?;
            let m = crate::etrennes::etrennes_matrix(&cfg)?;
            Ok(render_solution(&m, &etrennes_solve(&cfg)?))
        }
        Command::Simulate(SimulateCommand::Leher { weights: w, seed, trials }) => {
            let target = leher::mixed_value(&w.a, &w.b, &w.c, &w.d)?;
            let est = leher_simulate(&w.a, &w.b, &w.c, &w.d, *seed, *trials)?;
            Ok(render_estimates(&[("paul_win".to_string(), est, target)], json!({"seed": seed})))
        }
        Command::Reproduce => render_report(),
    }
}

fn exact_and_decimal(v: &Rational) -> String {
    format!("{v} ≈ {}", v.to_decimal_default())
}

fn render_value(key: &str, v: &Rational) -> Rendered {
    Rendered::ok(
        exact_and_decimal(v),
        json!({ key: v, "decimal": v.to_decimal_default() }),
        &[key, "decimal"],
        vec![vec![v.to_string(), v.to_decimal_default()]],
    )
}

fn render_matrix(m: &GameMatrix) -> Rendered {
    let mut rows = Vec::new();
    for (i, r) in m.row_labels().iter().enumerate() {
        for (j, c) in m.col_labels().iter().enumerate() {
            rows.push(vec![r.clone(), c.clone(), m.get(i, j).to_string(), m.get(i, j).to_decimal_default()]);
        }
    }
    Rendered::ok(m.to_string(), serde_json::to_value(m).expect("json"), &["row", "col", "value", "decimal"], rows)
}

fn mix_text(labels: &[String], weights: &[Rational]) -> String {
    labels
        .iter()
        .zip(weights)
        .filter(|(_, w)| w.is_positive())
        .map(|(l, w)| format!("{l}: {w}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn render_solution(m: &GameMatrix, s: &GameSolution) -> Rendered {
    let row_w = s.row_mix.integer_weights();
    let col_w = s.col_mix.integer_weights();
    let ratio = |w: &[Rational]| {
        w.iter().filter(|x| x.is_positive()).map(ToString::to_string).collect::<Vec<_>>().join(":")
    };
    let mut text = String::new();
    let _ = writeln!(text, "value: {}", exact_and_decimal(&s.value));
    let _ = writeln!(text, "row mix {}  ({})", ratio(&row_w), mix_text(m.row_labels(), &row_w));
    let _ = writeln!(text, "col mix {}  ({})", ratio(&col_w), mix_text(m.col_labels(), &col_w));
    let json = json!({
        "value": s.value,
        "decimal": s.value.to_decimal_default(),
        "rows": m.row_labels(),
        "cols": m.col_labels(),
        "row_mix": s.row_mix.probabilities(),
        "col_mix": s.col_mix.probabilities(),
        "row_weights": row_w,
        "col_weights": col_w,
        "certificate": s.certificate,
        "method": s.method,
    });
    let probs_r = s.row_mix.probabilities();
    let probs_c = s.col_mix.probabilities();
    let mut rows = vec![vec!["value".into(), String::new(), s.value.to_string(), s.value.to_decimal_default()]];
    for (l, p) in m.row_labels().iter().zip(&probs_r) {
        rows.push(vec!["row".into(), l.clone(), p.to_string(), p.to_decimal_default()]);
    }
    for (l, p) in m.col_labels().iter().zip(&probs_c) {
        rows.push(vec!["col".into(), l.clone(), p.to_string(), p.to_decimal_default()]);
    }
    Rendered::ok(text, json, &["kind", "strategy", "exact", "decimal"], rows)
}

fn conditional(player: Player, card: Rank, action: &str, opponent: &str) -> Result<Rendered> {
    let lot = match player {
        Player::Paul => {
            let action: PaulAction = action.parse()?;
            let qs: PierreStrategy = opponent.parse()?;
            conditional_lot_paul(card, action, &qs)
        }
        Player::Pierre => {
            let action: PierreAction = action.parse()?;
            let ps: PaulStrategy = opponent.parse()?;
            conditional_lot_pierre(card, action, &ps)?
        }
    };
    let mut r = render_value("lot", &lot);
    if let Player::Paul = player {
        let over = num_bigint::BigInt::from(leher::DEALS_GIVEN_PAUL);
        if let Some(n) = lot.numer_over(&over) {
            r.text = format!("{} (= {n}/{over})", r.text);
        }
    }
    Ok(r)
}

fn render_pool(cfg: &PoolConfig) -> Result<Rendered> {
    let s = pool_solve(cfg)?;
    let mut text = String::new();
    let _ = writeln!(text, "expected games: {}", exact_and_decimal(&s.expected_games));
    let mut seats = Vec::new();
    let mut rows = Vec::new();
    for i in 0..cfg.players {
        let (w, pay, net) = (&s.win_prob[i], &s.expected_payment[i], &s.expected_net[i]);
        let _ = writeln!(
            text,
            "seat {}: win {}  payment {}  net {}",
            i + 1,
            exact_and_decimal(w),
            exact_and_decimal(pay),
            exact_and_decimal(net)
        );
        seats.push(json!({
            "seat": i + 1,
            "win_prob": w, "win_prob_decimal": w.to_decimal_default(),
            "expected_payment": pay, "expected_payment_decimal": pay.to_decimal_default(),
            "expected_net": net, "expected_net_decimal": net.to_decimal_default(),
        }));
        rows.push(vec![(i + 1).to_string(), w.to_string(), pay.to_string(), net.to_string()]);
    }
    let json = json!({
        "players": cfg.players,
        "champion_win_prob": cfg.champion_win_prob,
        "ante": cfg.ante,
        "fee": cfg.fee,
        "streak_required": cfg.streak_required,
        "expected_games": s.expected_games,
        "expected_games_decimal": s.expected_games.to_decimal_default(),
        "seats": seats,
    });
    Ok(Rendered::ok(text, json, &["seat", "win_prob", "expected_payment", "expected_net"], rows))
}

fn render_pool_sim(cfg: &PoolConfig, seed: u64, trials: u64, max_games: u64) -> Result<Rendered> {
    let exact = pool_solve(cfg)?;
    let sim = pool_simulate(cfg, seed, trials, max_games)?;
    let labelled: Vec<(String, Estimate, Rational)> = sim
        .win_prob
        .iter()
        .zip(&exact.win_prob)
        .enumerate()
        .map(|(i, (e, t))| (format!("seat {} win", i + 1), e.clone(), t.clone()))
        .collect();
    let mut r = render_estimates(
        &labelled,
        json!({ "seed": seed, "truncated": sim.truncated, "mean_games": sim.mean_games,
                "games_std_err": sim.games_std_err, "exact_games": exact.expected_games }),
    );
    let _ = write!(r.text, "mean games {:.6} ± {:.6} (exact {}); truncated {}", sim.mean_games,
        sim.games_std_err, exact.expected_games, sim.truncated);
    Ok(r)
}

fn render_estimates(items: &[(String, Estimate, Rational)], extra: Value) -> Rendered {
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (label, est, target) in items {
        let sigma = est.sigmas_from(target);
        let pass = est.within(target, SIGMA_BAND);
        all_pass &= pass;
        let verdict = if pass { "pass" } else { "fail" };
        let _ = writeln!(
            text,
            "[{verdict}] {label}: {:.6} ± {:.6} vs {} ({sigma:.2}σ, {} trials)",
            est.estimate,
            est.std_err,
            exact_and_decimal(target),
            est.trials
        );
        entries.push(json!({
            "label": label, "estimate": est.estimate, "std_err": est.std_err,
            "target": target, "sigma": sigma, "verdict": verdict, "trials": est.trials,
        }));
        rows.push(vec![
            label.clone(),
            est.estimate.to_string(),
            est.std_err.to_string(),
            target.to_string(),
            format!("{sigma}"),
            verdict.into(),
        ]);
    }
    let mut json = json!({ "entries": entries, "band_sigma": SIGMA_BAND });
    if let (Some(obj), Value::Object(more)) = (json.as_object_mut(), extra) {
        obj.extend(more);
    }
    let mut r = Rendered::ok(text, json, &["label", "estimate", "std_err", "target", "sigma", "verdict"], rows);
    r.code = if all_pass { 0 } else { 1 };
    r
}

fn render_report() -> Result<Rendered> {
    let report = reproduce()?;
    let rows = report
        .entries
        .iter()
        .map(|e| {
            vec![
                e.label.clone(),
                e.expected.to_string(),
                e.computed.to_string(),
                e.relation.symbol().to_string(),
                e.source.clone(),
                e.verdict.to_string(),
            ]
        })
        .collect();
    let mut text = report.to_string();
    if !report.all_pass() {
        text.push_str("\nfailing:");
        for e in report.failures() {
            let _ = write!(text, "\n  {}", e.label);
        }
    }
    let mut r = Rendered::ok(
        text,
        serde_json::to_value(&report.entries).expect("json"),
        &["label", "expected", "computed", "relation", "source", "verdict"],
        rows,
    );
    r.code = if report.all_pass() { 0 } else { 1 };
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Output {
        cmd_dispatch(std::iter::once("lots").chain(args.iter().copied()))
    }

    #[test]
    fn value_command() {
        let out = run(&["leher", "value", "--a", "3", "--b", "5", "--c", "1", "--d", "1"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(out.stdout, "11327/22100 ≈ 0.512533\n");
    }

    #[test]
    fn zero_weights_rejected() {
        let out = run(&["leher", "value", "--a", "0", "--b", "0", "--c", "1", "--d", "1"]);
        assert_ne!(out.code, 0);
        assert!(out.stderr.contains("weights"), "{}", out.stderr);
    }

    #[test]
    fn malformed_inputs() {
        assert_ne!(run(&["leher", "value", "--a", "1/0", "--b", "1", "--c", "1", "--d", "1"]).code, 0);
        assert_ne!(run(&["leher", "value", "--a", "-1", "--b", "1", "--c", "1", "--d", "1"]).code, 0);
        let out = run(&["leher", "conditional", "--player", "paul", "--card", "14", "--action", "hold",
            "--opponent", "threshold:8"]);
        assert_ne!(out.code, 0);
        assert_ne!(run(&["leher", "table", "--bogus"]).code, 0);
        assert!(run(&["frobnicate"]).stderr.contains("Usage"));
    }

    #[test]
    fn etrennes_command() {
        let out = run(&["etrennes", "solve"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("value: 4/5"), "{}", out.stdout);
        assert!(out.stdout.contains("row mix 1:4"), "{}", out.stdout);
    }

    #[test]
    fn conditional_command_shows_printed_denominator() {
        let out = run(&["leher", "conditional", "--player", "paul", "--card", "7", "--action", "switch",
            "--opponent", "threshold:8"]);
        assert_eq!(out.stdout, "26/85 ≈ 0.305882 (= 780/2550)\n");
        let out = run(&["leher", "conditional", "--player", "pierre", "--card", "8", "--action", "hold",
            "--opponent", "SSSSSSSHHHHHH", "--format", "json"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["lot"], "3/23");
    }

    #[test]
    fn pool_json_is_exact() {
        let out = run(&["pool", "solve", "--players", "3", "--p", "1/2", "--ante", "1", "--fee", "1", "--format", "json"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["expected_games"], "3");
        assert_eq!(v["seats"][2]["win_prob"], "2/7");
        assert_eq!(v["seats"][0]["expected_net"], "1/98");
        assert_eq!(v["seats"][0]["win_prob_decimal"], "0.357142");
    }

    #[test]
    fn pool_divergence_reported() {
        let out = run(&["pool", "solve", "--p", "0"]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("never terminates"));
    }

    #[test]
    fn csv_output() {
        let out = run(&["leher", "table", "--format", "csv"]);
        let mut lines = out.stdout.lines();
        assert_eq!(lines.next(), Some("row,col,value,decimal"));
        assert_eq!(lines.next(), Some("Switch the 7,Switch the 8,2828/5525,0.511855"));
    }

    #[test]
    fn solve_command_json() {
        let out = run(&["leher", "solve", "--format", "json"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["value"], "11327/22100");
        assert_eq!(v["row_weights"], json!(["3", "5"]));
        assert_eq!(v["col_weights"], json!(["5", "3"]));
    }

    #[test]
    fn reproduce_passes() {
        let out = run(&["reproduce"]);
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert!(out.stdout.trim_end().ends_with("27/27 entries pass"));
        let json = run(&["reproduce", "--format", "json"]);
        let v: Value = serde_json::from_str(&json.stdout).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 27);
        assert_eq!(json.stdout, run(&["reproduce", "--format", "json"]).stdout);
    }

    #[test]
    fn small_simulations() {
        let out = run(&["simulate", "leher", "--a", "1", "--b", "0", "--c", "1", "--d", "0", "--trials", "20000",
            "--format", "json"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["entries"][0]["target"], "2828/5525");
        assert_eq!(out.code, 0);
        let out = run(&["pool", "simulate", "--trials", "20000"]);
        assert_eq!(out.code, 0, "{}", out.stdout);
    }

    #[test]
    fn json_rationals_round_trip() {
        let out = run(&["leher", "table", "--thresholds", "--format", "json"]);
        let m: GameMatrix = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(m, leher::threshold_matrix());
    }
}
