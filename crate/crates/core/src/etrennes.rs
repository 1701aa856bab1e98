//! Les Étrennes: the son guesses the parity of the tokens in his father's
//! hand and is paid only for a correct guess.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{solve_zero_sum, GameMatrix, GameSolution};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtrennesConfig {
    pub even_prize: Rational,
    pub odd_prize: Rational,
}

impl Default for EtrennesConfig {
    fn default() -> Self {
        EtrennesConfig { even_prize: Rational::from(4i64), odd_prize: Rational::one() }
    }
}

impl EtrennesConfig {
    pub fn new(even_prize: Rational, odd_prize: Rational) -> Result<Self> {
        let cfg = EtrennesConfig { even_prize, odd_prize };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !self.even_prize.is_positive() || !self.odd_prize.is_positive() {
            return Err(Error::InvalidConfig(format!(
                "prizes must be positive, got even={} odd={}",
                self.even_prize, self.odd_prize
            )));
        }
        Ok(())
    }
}

/// Rows are the son's guess (even, odd); columns the father's parity.
pub fn etrennes_matrix(cfg: &EtrennesConfig) -> Result<GameMatrix> {
    cfg.validate()?;
    GameMatrix::with_labels(
        vec!["guess even".into(), "guess odd".into()],
        vec!["hide even".into(), "hide odd".into()],
        vec![
            vec![cfg.even_prize.clone(), Rational::zero()],
            vec![Rational::zero(), cfg.odd_prize.clone()],
        ],
    )
}

pub fn etrennes_solve(cfg: &EtrennesConfig) -> Result<GameSolution> {
    Ok(solve_zero_sum(&etrennes_matrix(cfg)?))
}
