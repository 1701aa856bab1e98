//! Oracles shared by the integration tests. They restate the rules from
//! scratch and use nothing from the crate except `Rational`.

#![allow(dead_code)]

use std::collections::HashMap;

use lots::Rational;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

/// Rank of card `index` in a 52-card deck, 1 (ace) to 13 (king).
fn rank_of(index: usize) -> u8 {
    (index / 4 + 1) as u8
}

/// Counts ordered three-card deals won by Paul and by Pierre when Paul
/// exchanges on ranks up to `paul_t` and Pierre draws on ranks up to
/// `pierre_t`. Every physical card is dealt separately.
pub fn brute_force_counts(paul_t: u8, pierre_t: u8) -> (u64, u64) {
    const KING: u8 = 13;
    let (mut paul_wins, mut pierre_wins) = (0u64, 0u64);
    for i in 0..52 {
        for j in 0..52 {
            if j == i {
                continue;
            }
            for k in 0..52 {
                if k == i || k == j {
                    continue;
                }
                let (mine, theirs, next) = (rank_of(i), rank_of(j), rank_of(k));
                let paul_final;
                let mut pierre_final;
                if mine <= paul_t {
                    if theirs == KING {
                        paul_final = mine;
                        pierre_final = theirs;
                    } else {
                        paul_final = theirs;
                        pierre_final = mine;
                        // Pierre knows Paul's card and only draws when behind.
                        if pierre_final < paul_final && next != KING {
                            pierre_final = next;
                        }
                    }
                } else {
                    paul_final = mine;
                    pierre_final = theirs;
                    if theirs <= pierre_t && next != KING {
                        pierre_final = next;
                    }
                }
                if paul_final > pierre_final {
                    paul_wins += 1;
                } else {
                    pierre_wins += 1;
                }
            }
        }
    }
    (paul_wins, pierre_wins)
}

pub fn brute_force_paul(paul_t: u8, pierre_t: u8) -> Rational {
    let (w, l) = brute_force_counts(paul_t, pierre_t);
    Rational::new(w, w + l).unwrap()
}

/// Partial sums of a pool played out game by game, with the probability of
/// every unfinished line after `depth` games.
#[derive(Debug, Clone)]
pub struct PoolTree {
    pub depth: u32,
    pub win: Vec<Rational>,
    /// E[G · 1{seat wins}] restricted to pools that ended within `depth`.
    pub games_times_win: Vec<Rational>,
    /// Expected games lost by each seat within `depth`.
    pub losses: Vec<Rational>,
    pub games: Rational,
    /// Probability that the pool is still running after `depth` games.
    pub tail: Rational,
}

/// Plays the pool forward over merged states. The champion of game one is
/// seat 0 and the challenger seat 1; the loser of every game joins the back
/// of the queue; the pot goes to the first player with `streak` straight wins.
pub fn pool_tree(n: usize, p: &Rational, streak: usize, depth: u32) -> PoolTree {
    let one = Rational::one();
    let mut win = vec![Rational::zero(); n];
    let mut games_times_win = vec![Rational::zero(); n];
    let mut losses = vec![Rational::zero(); n];
    let mut games = Rational::zero();
    // (champion, wins in a row, waiting seats) -> probability; the opening
    // game has a champion with no wins yet.
    let mut live: HashMap<(usize, usize, Vec<usize>), Rational> = HashMap::new();
    live.insert((0, 0, (1..n).collect()), one.clone());
    for g in 1..=depth {
        let mut next: HashMap<(usize, usize, Vec<usize>), Rational> = HashMap::new();
        for ((champ, run, queue), mass) in live {
            let challenger = queue[0];
            for (champ_wins, pr) in [(true, p.clone()), (false, &one - p)] {
                if pr.is_zero() {
                    continue;
                }
                let m = &mass * &pr;
                let (winner, loser, run) = if champ_wins { (champ, challenger, run + 1) } else { (challenger, champ, 1) };
                losses[loser] += &m;
                if run == streak {
                    win[winner] += &m;
                    games_times_win[winner] += &m * Rational::from(g as u64);
                    games += &m * Rational::from(g as u64);
                    continue;
                }
                let mut rest: Vec<usize> = queue[1..].to_vec();
                rest.push(loser);
                *next.entry((winner, run, rest)).or_insert_with(Rational::zero) += m;
            }
        }
        live = next;
    }
    let tail: Rational = live.values().sum();
    games += &tail * Rational::from(depth as u64);
    PoolTree { depth, win, games_times_win, losses, games, tail }
}

/// Tiny deterministic generator for test inputs (splitmix64).
pub struct Inputs(u64);

impl Inputs {
    pub fn new(seed: u64) -> Self {
        Inputs(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`; the modulo bias is irrelevant for test inputs.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }

    pub fn rational(&mut self, lo: i64, hi: i64, max_denom: i64) -> Rational {
        Rational::ratio(self.range(lo, hi), self.range(1, max_denom))
    }
}
