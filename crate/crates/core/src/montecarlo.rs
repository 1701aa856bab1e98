//! Seeded sampling used to cross-check the exact results.
//!
//! [`RandomStream`] is xorshift64* (Vigna): shifts 12, 25, 27 followed by
//! multiplication with `0x2545F4914F6CDD1D`. Output depends only on the
//! seed, so golden sequences carry across platforms and languages.
//!
//! Simulations only use the game rules (dealing, settling, rotating
//! players); they never look at the exact engine's results.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::leher::{self, Deal, DeckComposition, PaulStrategy, PierreStrategy, PAUL_ROWS, PIERRE_COLS};
use crate::Rational;

pub const XORSHIFT_MULTIPLIER: u64 = 0x2545_F491_4F6C_DD1D;
/// Replaces a zero seed, which would otherwise stay at zero forever.
pub const ZERO_SEED_REPLACEMENT: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    state: u64,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream { state: if seed == 0 { ZERO_SEED_REPLACEMENT } else { seed } }
    }

    /// Independent stream for partition `index` of a run seeded with `seed`.
    pub fn partition(seed: u64, index: u64) -> Self {
        // splitmix64 finalizer over the pair
        let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RandomStream::new(z ^ (z >> 31))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(XORSHIFT_MULTIPLIER)
    }

    /// Uniform integer in `[0, bound)` by rejection.
    pub fn next_below(&mut self, bound: u64) -> Result<u64> {
        if bound == 0 {
            return Err(Error::ZeroBound);
        }
        // Reject the low 2^64 mod bound outputs so the rest divides evenly.
        let reject_below = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= reject_below {
                return Ok(x % bound);
            }
        }
    }

    /// Uniform integer in `[0, bound)` for arbitrary-precision bounds.
    fn next_below_big(&mut self, bound: &BigUint) -> BigUint {
        if let Ok(small) = u64::try_from(bound) {
            return BigUint::from(self.next_below(small).expect("bound >= 1"));
        }
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        let top_bits = bits - 64 * (words as u64 - 1);
        loop {
            let mut digits: Vec<u64> = (0..words).map(|_| self.next_u64()).collect();
            if top_bits < 64 {
                digits[words - 1] &= (1u64 << top_bits) - 1;
            }
            let candidate = BigUint::from_slice(
                &digits.iter().flat_map(|d| [*d as u32, (d >> 32) as u32]).collect::<Vec<_>>(),
            );
            if &candidate < bound {
                return candidate;
            }
        }
    }

    /// True with exactly probability `p`.
    pub fn bernoulli(&mut self, p: &Rational) -> Result<bool> {
        if !p.is_probability() {
            return Err(Error::ProbabilityOutOfRange(p.to_string()));
        }
        let denom = p.denom().to_biguint().expect("positive denominator");
        let numer = p.numer().to_biguint().expect("nonnegative");
        Ok(self.next_below_big(&denom) < numer)
    }

    /// Deals one card from `deck`, returning its rank and the depleted deck.
    pub fn deal(&mut self, deck: &DeckComposition) -> Result<(leher::Rank, DeckComposition)> {
        let index = self.next_below(deck.total())?;
        let rank = deck.nth(index).expect("index below total");
        Ok((rank, deck.without(rank).expect("rank present")))
    }
}

/// Empirical win frequency with its binomial standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub std_err: f64,
}

impl Estimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let f = successes as f64 / trials as f64;
        Estimate { trials, successes, estimate: f, std_err: (f * (1.0 - f) / trials as f64).sqrt() }
    }

    /// Distance from `target` in standard errors. A zero standard error
    /// gives 0 on an exact hit and infinity otherwise.
    pub fn sigmas_from(&self, target: &Rational) -> f64 {
        let diff = (self.estimate - target.to_f64()).abs();
        if self.std_err > 0.0 {
            diff / self.std_err
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn within(&self, target: &Rational, sigmas: f64) -> bool {
        self.sigmas_from(target) <= sigmas
    }
}

/// Plays `trials` deals of Le Her. Each deal Paul draws a token: with weight
/// `a` he switches the seven and under, with weight `b` he holds the seven.
/// Pierre likewise switches the eight with weight `c` and holds it with `d`.
pub fn leher_simulate(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
    seed: u64,
    trials: u64,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let (row, col) = leher::weights_to_mixes(a, b, c, d)?;
    let p_switch7 = row.probabilities().swap_remove(0);
    let p_switch8 = col.probabilities().swap_remove(0);
    let switch7 = PaulStrategy::threshold(PAUL_ROWS[0])?;
    let hold7 = PaulStrategy::threshold(PAUL_ROWS[1])?;
    let switch8 = PierreStrategy::threshold(PIERRE_COLS[0])?;
    let hold8 = PierreStrategy::threshold(PIERRE_COLS[1])?;

    let mut rng = RandomStream::new(seed);
    let full = DeckComposition::full();
    let mut wins = 0u64;
    for _ in 0..trials {
        let ps = if rng.bernoulli(&p_switch7)? { &switch7 } else { &hold7 };
        let qs = if rng.bernoulli(&p_switch8)? { &switch8 } else { &hold8 };
        let (paul, deck) = rng.deal(&full)?;
        let (pierre, deck) = rng.deal(&deck)?;
        let (replacement, _) = rng.deal(&deck)?;
        if leher::paul_wins_deal(&Deal { paul, pierre, replacement }, ps, qs) {
            wins += 1;
        }
    }
    Ok(Estimate::from_counts(wins, trials))
}
