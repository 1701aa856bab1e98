//! The problem of the pool for `n` players.
//!
//! Everyone antes. Seats 1 and 2 play the first game while the others queue
//! in seat order. Each game is between the champion (the last winner) and the
//! front of the queue; the loser pays the fee and goes to the back of the
//! queue. The first player to win `streak_required` games in a row takes the
//! pot, fees included. The champion wins each game with probability `p`; in
//! the opening game seat 1 counts as champion.
//!
//! The exact solver enumerates the reachable (champion, streak, queue)
//! states and solves two linear systems over the same transition matrix: one
//! for absorption probabilities, remaining games, and fee losses, and one for
//! the games-weighted win indicator that prices the pot.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::montecarlo::{Estimate, RandomStream};
use crate::Rational;

/// Trial cap used by [`pool_simulate`] unless told otherwise.
pub const DEFAULT_MAX_GAMES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolConfig {
    pub players: usize,
    pub champion_win_prob: Rational,
    pub ante: Rational,
    pub fee: Rational,
    pub streak_required: usize,
}

impl PoolConfig {
    /// Fair games, unit ante and fee, and a streak of `players - 1`.
    pub fn new(players: usize) -> Self {
        PoolConfig {
            players,
            champion_win_prob: Rational::ratio(1, 2),
            ante: Rational::one(),
            fee: Rational::one(),
            streak_required: players.saturating_sub(1).max(1),
        }
    }

    pub fn with_win_prob(mut self, p: Rational) -> Self {
        self.champion_win_prob = p;
        self
    }

    pub fn with_ante(mut self, ante: Rational) -> Self {
        self.ante = ante;
        self
    }

    pub fn with_fee(mut self, fee: Rational) -> Self {
        self.fee = fee;
        self
    }

    pub fn with_streak(mut self, streak: usize) -> Self {
        self.streak_required = streak;
        self
    }

    /// Checks the parameters, including that some player eventually takes
    /// the pot.
    pub fn validate(&self) -> Result<()> {
        self.validate_ranges()?;
        if self.champion_win_prob.is_zero() && self.streak_required > 1 {
            return Err(Error::Divergence(
                "a champion who never wins can never reach the required streak".into(),
            ));
        }
        Ok(())
    }

    fn validate_ranges(&self) -> Result<()> {
        if self.players < 2 {
            return Err(Error::InvalidConfig(format!("need at least 2 players, got {}", self.players)));
        }
        if !self.champion_win_prob.is_probability() {
            return Err(Error::ProbabilityOutOfRange(self.champion_win_prob.to_string()));
        }
        if self.ante.is_negative() || self.fee.is_negative() {
            return Err(Error::InvalidConfig("ante and fee must be nonnegative".into()));
        }
        if self.streak_required < 1 {
            return Err(Error::InvalidConfig("streak_required must be at least 1".into()));
        }
        Ok(())
    }
}

/// A live position: who holds the table, how many straight wins they have,
/// and who waits in which order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PoolState {
    pub champion: usize,
    pub streak: usize,
    pub queue: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Next {
    Continue(PoolState),
    PotTaken(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameOutcome {
    pub winner: usize,
    pub loser: usize,
    pub next: Next,
}

fn after_game(cfg: &PoolConfig, winner: usize, streak: usize, loser: usize, mut queue: Vec<usize>) -> GameOutcome {
    if streak >= cfg.streak_required {
        return GameOutcome { winner, loser, next: Next::PotTaken(winner) };
    }
    queue.push(loser);
    GameOutcome { winner, loser, next: Next::Continue(PoolState { champion: winner, streak, queue }) }
}

/// Seat 0 against seat 1, everyone else queued in order.
pub fn opening_game(cfg: &PoolConfig, incumbent_wins: bool) -> GameOutcome {
    let (winner, loser) = if incumbent_wins { (0, 1) } else { (1, 0) };
    after_game(cfg, winner, 1, loser, (2..cfg.players).collect())
}

/// The champion of `state` meets the front of the queue.
pub fn play_game(cfg: &PoolConfig, state: &PoolState, champion_wins: bool) -> GameOutcome {
    let challenger = state.queue[0];
    let rest = state.queue[1..].to_vec();
    if champion_wins {
        after_game(cfg, state.champion, state.streak + 1, challenger, rest)
    } else {
        after_game(cfg, challenger, 1, state.champion, rest)
    }
}

/// Both outcomes of a game with positive probability, paired with it.
fn branches(cfg: &PoolConfig, mut game: impl FnMut(bool) -> GameOutcome) -> Vec<(Rational, GameOutcome)> {
    let p = &cfg.champion_win_prob;
    [(p.clone(), true), (Rational::one() - p, false)]
        .into_iter()
        .filter(|(prob, _)| !prob.is_zero())
        .map(|(prob, champ)| (prob, game(champ)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolSolution {
    pub win_prob: Vec<Rational>,
    pub expected_games: Rational,
    /// Ante plus expected fees, per seat.
    pub expected_payment: Vec<Rational>,
    /// Expected pot share minus expected payment, per seat.
    pub expected_net: Vec<Rational>,
    /// Number of live states in the linear systems.
    pub states: usize,
}

/// Exact per-seat results for the pool.
pub fn pool_solve(cfg: &PoolConfig) -> Result<PoolSolution> {
    cfg.validate()?;
    let n = cfg.players;
    let opening = branches(cfg, |w| opening_game(cfg, w));

    let mut states: Vec<PoolState> = Vec::new();
    let mut index: HashMap<PoolState, usize> = HashMap::new();
    let mut intern = |s: &PoolState, states: &mut Vec<PoolState>| -> usize {
        *index.entry(s.clone()).or_insert_with(|| {
            states.push(s.clone());
            states.len() - 1
        })
    };
    for (_, o) in &opening {
        if let Next::Continue(s) = &o.next {
            intern(s, &mut states);
        }
    }
    let mut transitions: Vec<Vec<(Rational, GameOutcome, Option<usize>)>> = Vec::new();
    let mut cursor = 0;
    while cursor < states.len() {
        let state = states[cursor].clone();
        let mut row = Vec::new();
        for (prob, outcome) in branches(cfg, |w| play_game(cfg, &state, w)) {
            let target = match &outcome.next {
                Next::Continue(s) => Some(intern(s, &mut states)),
                Next::PotTaken(_) => None,
            };
            row.push((prob, outcome, target));
        }
        transitions.push(row);
        cursor += 1;
    }
    let size = states.len();

    // I - Q, and right-hand sides: n win columns, 1 games column, n loss columns.
    let mut system = vec![BTreeMap::new(); size];
    let mut rhs = vec![vec![Rational::zero(); 2 * n + 1]; size];
    for (s, row) in transitions.iter().enumerate() {
        *system[s].entry(s).or_insert_with(Rational::zero) += Rational::one();
        rhs[s][n] = Rational::one();
        for (prob, outcome, target) in row {
            match (target, &outcome.next) {
                (Some(t), _) => *system[s].entry(*t).or_insert_with(Rational::zero) -= prob,
                (None, Next::PotTaken(w)) => rhs[s][*w] += prob,
                (None, Next::Continue(_)) => unreachable!("continuing outcome without a state"),
            }
            rhs[s][n + 1 + outcome.loser] += prob;
        }
    }
    let diverged = || Error::Divergence("absorption is not certain from every state".into());
    let first = if size == 0 { Vec::new() } else { linalg::solve_sparse(&system, &rhs).ok_or_else(diverged)? };
    let wins_from: Vec<Vec<Rational>> = first.iter().map(|r| r[..n].to_vec()).collect();
    let weighted = if size == 0 { Vec::new() } else { linalg::solve_sparse(&system, &wins_from).ok_or_else(diverged)? };

    let mut win_prob = vec![Rational::zero(); n];
    let mut losses = vec![Rational::zero(); n];
    let mut games_times_win = vec![Rational::zero(); n];
    let mut expected_games = Rational::one();
    for (prob, outcome) in &opening {
        losses[outcome.loser] += prob;
        match &outcome.next {
            Next::PotTaken(w) => {
                win_prob[*w] += prob;
                games_times_win[*w] += prob;
            }
            Next::Continue(s) => {
                let k = index[s];
                expected_games += prob * &first[k][n];
                for i in 0..n {
                    win_prob[i] += prob * &first[k][i];
                    losses[i] += prob * &first[k][n + 1 + i];
                    games_times_win[i] += prob * (&first[k][i] + &weighted[k][i]);
                }
            }
        }
    }

    let players = Rational::from(n as u64);
    let expected_payment: Vec<Rational> = losses.iter().map(|l| &cfg.ante + &cfg.fee * l).collect();
    let expected_net: Vec<Rational> = (0..n)
        .map(|i| &players * &cfg.ante * &win_prob[i] + &cfg.fee * &games_times_win[i] - &expected_payment[i])
        .collect();
    Ok(PoolSolution { win_prob, expected_games, expected_payment, expected_net, states: size })
}

pub fn pool_win_probabilities(cfg: &PoolConfig) -> Result<Vec<Rational>> {
    Ok(pool_solve(cfg)?.win_prob)
}

pub fn pool_expected_games(cfg: &PoolConfig) -> Result<Rational> {
    Ok(pool_solve(cfg)?.expected_games)
}

/// Monte Carlo estimates of a [`PoolSolution`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolSimulation {
    pub trials: u64,
    /// Trials stopped at the game cap; excluded from every estimate.
    pub truncated: u64,
    pub win_prob: Vec<Estimate>,
    pub mean_games: f64,
    pub games_std_err: f64,
    pub mean_payment: Vec<f64>,
    pub mean_net: Vec<f64>,
}

/// Plays `trials` pools, each capped at `max_games` games.
pub fn pool_simulate(cfg: &PoolConfig, seed: u64, trials: u64, max_games: u64) -> Result<PoolSimulation> {
    cfg.validate_ranges()?;
    if trials == 0 || max_games == 0 {
        return Err(Error::InvalidConfig("trials and max_games must be at least 1".into()));
    }
    let n = cfg.players;
    let ante = cfg.ante.to_f64();
    let fee = cfg.fee.to_f64();
    let mut rng = RandomStream::new(seed);
    let mut wins = vec![0u64; n];
    let mut truncated = 0u64;
    let (mut games_sum, mut games_sq) = (0f64, 0f64);
    let mut payment_sum = vec![0f64; n];
    let mut net_sum = vec![0f64; n];
    let mut fees_owed = vec![0u64; n];

    for _ in 0..trials {
        fees_owed.iter_mut().for_each(|f| *f = 0);
        let mut outcome = opening_game(cfg, rng.bernoulli(&cfg.champion_win_prob)?);
        let mut games = 1u64;
        let winner = loop {
            fees_owed[outcome.loser] += 1;
            match outcome.next {
                Next::PotTaken(w) => break Some(w),
                Next::Continue(state) => {
                    if games >= max_games {
                        break None;
                    }
                    outcome = play_game(cfg, &state, rng.bernoulli(&cfg.champion_win_prob)?);
                    games += 1;
                }
            }
        };
        let Some(winner) = winner else {
            truncated += 1;
            continue;
        };
        wins[winner] += 1;
        let g = games as f64;
        games_sum += g;
        games_sq += g * g;
        let pot = n as f64 * ante + fee * g;
        for i in 0..n {
            let paid = ante + fee * fees_owed[i] as f64;
            payment_sum[i] += paid;
            net_sum[i] += if i == winner { pot } else { 0.0 } - paid;
        }
    }

    let done = trials - truncated;
    let per = |x: f64| if done == 0 { 0.0 } else { x / done as f64 };
    let mean_games = per(games_sum);
    let var = (per(games_sq) - mean_games * mean_games).max(0.0);
    Ok(PoolSimulation {
        trials,
        truncated,
        win_prob: wins.iter().map(|&w| Estimate::from_counts(w, done.max(1))).collect(),
        mean_games,
        games_std_err: if done == 0 { 0.0 } else { (var / done as f64).sqrt() },
        mean_payment: payment_sum.into_iter().map(per).collect(),
        mean_net: net_sum.into_iter().map(per).collect(),
    })
}
