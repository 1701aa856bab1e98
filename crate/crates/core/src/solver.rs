//! Exact solutions of finite two-player zero-sum games.
//!
//! Payoffs are to the row player, who maximizes. [`solve_zero_sum`] checks for
//! a pure saddle point, removes strictly dominated strategies, then
//! enumerates square kernels of the surviving matrix in order of size and
//! lexicographic index. For each kernel the equalizing mixes and the value
//! are found by one exact linear solve per side; the first kernel whose mixes
//! are nonnegative and unbeatable on the full matrix wins. A finite game
//! always has such a kernel, so the search never comes up empty.
//!
//! The value is unique; the optimal mixes need not be. When several exist the
//! one returned comes from the smallest kernel, ties broken by the
//! lexicographically smallest row set and then column set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::Rational;

/// Rectangular payoff matrix with labelled strategies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct GameMatrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    entries: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: Vec<String>,
    cols: Vec<String>,
    entries: Vec<Vec<Rational>>,
}

impl TryFrom<MatrixRepr> for GameMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        GameMatrix::with_labels(r.rows, r.cols, r.entries)
    }
}

impl From<GameMatrix> for MatrixRepr {
    fn from(m: GameMatrix) -> Self {
        MatrixRepr { rows: m.row_labels, cols: m.col_labels, entries: m.entries }
    }
}

impl GameMatrix {
    /// Matrix with default labels `r1..rm`, `c1..cn`.
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let rows = (1..=entries.len()).map(|i| format!("r{i}")).collect();
        let cols = (1..=entries.first().map_or(0, Vec::len)).map(|j| format!("c{j}")).collect();
        GameMatrix::with_labels(rows, cols, entries)
    }

    pub fn with_labels(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        entries: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if entries.is_empty() || entries[0].is_empty() {
            return Err(Error::InvalidMatrix("needs at least one row and one column".into()));
        }
        let n = entries[0].len();
        if let Some(i) = entries.iter().position(|row| row.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                entries[i].len()
            )));
        }
        if row_labels.len() != entries.len() {
            return Err(Error::DimensionMismatch { expected: entries.len(), actual: row_labels.len() });
        }
        if col_labels.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: col_labels.len() });
        }
        Ok(GameMatrix { row_labels, col_labels, entries })
    }

    /// Convenience constructor from integer payoffs.
    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        GameMatrix::new(rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    fn column(&self, col: usize) -> impl Iterator<Item = &Rational> + '_ {
        self.entries.iter().map(move |row| &row[col])
    }

    /// The same game seen from the column player: `-Mᵀ`.
    pub fn negated_transpose(&self) -> GameMatrix {
        let entries = (0..self.cols()).map(|j| self.column(j).map(|x| -x).collect()).collect();
        GameMatrix {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            entries,
        }
    }

    /// `scale · M + shift`, entry by entry.
    pub fn affine(&self, scale: &Rational, shift: &Rational) -> GameMatrix {
        let entries =
            self.entries.iter().map(|row| row.iter().map(|x| scale * x + shift).collect()).collect();
        GameMatrix { entries, ..self.clone() }
    }

    /// Submatrix on the given (original) indices, labels carried along.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GameMatrix {
        GameMatrix {
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
            entries: rows.iter().map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect()).collect(),
        }
    }

    /// Expected payoff of every pure row against `col_mix`.
    pub fn row_payoffs(&self, col_mix: &MixedStrategy) -> Result<Vec<Rational>> {
        check_len(self.cols(), col_mix)?;
        let probs = col_mix.probabilities();
        Ok(self.entries.iter().map(|row| dot(row.iter(), &probs)).collect())
    }

    /// Expected payoff (to the row player) of every pure column against
    /// `row_mix`.
    pub fn col_payoffs(&self, row_mix: &MixedStrategy) -> Result<Vec<Rational>> {
        check_len(self.rows(), row_mix)?;
        let probs = row_mix.probabilities();
        Ok((0..self.cols()).map(|j| dot(self.column(j), &probs)).collect())
    }

    /// Expected payoff when both players mix.
    pub fn mixed_payoff(&self, row_mix: &MixedStrategy, col_mix: &MixedStrategy) -> Result<Rational> {
        let rows = self.row_payoffs(col_mix)?;
        check_len(self.rows(), row_mix)?;
        Ok(dot(rows.iter(), &row_mix.probabilities()))
    }

    /// Largest guaranteed payoff over pure rows.
    pub fn pure_maximin(&self) -> Rational {
        self.entries
            .iter()
            .map(|row| row.iter().min().expect("nonempty").clone())
            .max()
            .expect("nonempty")
    }

    /// Smallest ceiling over pure columns.
    pub fn pure_minimax(&self) -> Rational {
        (0..self.cols())
            .map(|j| self.column(j).max().expect("nonempty").clone())
            .min()
            .expect("nonempty")
    }
}

impl fmt::Display for GameMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            self.entries.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect();
        let label_w = self.row_labels.iter().map(String::len).max().unwrap_or(0);
        let col_w: Vec<usize> = (0..self.cols())
            .map(|j| cells.iter().map(|r| r[j].len()).chain([self.col_labels[j].len()]).max().unwrap_or(0))
            .collect();
        write!(f, "{:label_w$}", "")?;
        for (j, label) in self.col_labels.iter().enumerate() {
            write!(f, "  {:>w$}", label, w = col_w[j])?;
        }
        writeln!(f)?;
        for (label, row) in self.row_labels.iter().zip(&cells) {
            write!(f, "{label:label_w$}")?;
            for (j, cell) in row.iter().enumerate() {
                write!(f, "  {:>w$}", cell, w = col_w[j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn dot<'a>(xs: impl Iterator<Item = &'a Rational>, probs: &[Rational]) -> Rational {
    xs.zip(probs).filter(|(_, p)| !p.is_zero()).map(|(x, p)| x * p).sum()
}

fn check_len(expected: usize, mix: &MixedStrategy) -> Result<()> {
    if mix.len() != expected {
        return Err(Error::DimensionMismatch { expected, actual: mix.len() });
    }
    Ok(())
}

/// Nonnegative weights over a player's pure strategies, not necessarily
/// normalized. Token counts such as `3:5` are stored as given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct MixedStrategy {
    weights: Vec<Rational>,
}

impl TryFrom<Vec<Rational>> for MixedStrategy {
    type Error = Error;
    fn try_from(weights: Vec<Rational>) -> Result<Self> {
        MixedStrategy::new(weights)
    }
}

impl From<MixedStrategy> for Vec<Rational> {
    fn from(m: MixedStrategy) -> Self {
        m.weights
    }
}

impl MixedStrategy {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(Rational::is_negative) {
            return Err(Error::InvalidWeights("negative weight".into()));
        }
        if !weights.iter().any(Rational::is_positive) {
            return Err(Error::InvalidWeights("all weights are zero".into()));
        }
        Ok(MixedStrategy { weights })
    }

    pub fn from_integers(weights: &[i64]) -> Result<Self> {
        MixedStrategy::new(weights.iter().map(|&w| Rational::from(w)).collect())
    }

    /// All weight on strategy `index` out of `len`.
    pub fn pure(len: usize, index: usize) -> Self {
        assert!(index < len, "pure strategy index out of range");
        let mut weights = vec![Rational::zero(); len];
        weights[index] = Rational::one();
        MixedStrategy { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn probabilities(&self) -> Vec<Rational> {
        let total: Rational = self.weights.iter().sum();
        self.weights.iter().map(|w| w.checked_div(&total).expect("positive total")).collect()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.weights[i].is_positive()).collect()
    }

    /// Weights rescaled to coprime integers, e.g. `3/8, 5/8` becomes `3, 5`.
    pub fn integer_weights(&self) -> Vec<Rational> {
        use num_integer::Integer;
        let lcm = self.weights.iter().fold(num_bigint::BigInt::from(1), |acc, w| acc.lcm(w.denom()));
        let ints: Vec<_> = self.weights.iter().map(|w| w.numer() * (&lcm / w.denom())).collect();
        let gcd = ints.iter().fold(num_bigint::BigInt::from(0), |acc, x| acc.gcd(x));
        ints.into_iter().map(|x| Rational::from_integer(x / &gcd)).collect()
    }

    /// Ratio of the weights on strategies `i` and `j`, if `j` has weight.
    pub fn ratio(&self, i: usize, j: usize) -> Option<Rational> {
        self.weights[i].checked_div(&self.weights[j]).ok()
    }

    /// Embeds this mix into `len` strategies, placing weight `k` at
    /// `positions[k]` and zero elsewhere.
    pub fn embed(&self, len: usize, positions: &[usize]) -> MixedStrategy {
        assert_eq!(positions.len(), self.len(), "position map has wrong length");
        let mut weights = vec![Rational::zero(); len];
        for (w, &p) in self.weights.iter().zip(positions) {
            weights[p] = w.clone();
        }
        MixedStrategy { weights }
    }

    fn normalized(&self) -> MixedStrategy {
        MixedStrategy { weights: self.probabilities() }
    }
}

/// Payoffs of every pure deviation against a pair of mixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Payoff of each pure row against the column mix.
    pub row_payoffs: Vec<Rational>,
    /// Payoff to the row player of each pure column against the row mix.
    pub col_payoffs: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    SaddlePoint,
    SupportEnumeration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSolution {
    pub value: Rational,
    pub row_mix: MixedStrategy,
    pub col_mix: MixedStrategy,
    pub certificate: Certificate,
    pub method: SolveMethod,
}

/// Result of checking a pair of mixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub is_equilibrium: bool,
    /// Expected payoff of the pair.
    pub value: Rational,
    /// What the row mix guarantees: its worst column payoff.
    pub row_guarantee: Rational,
    /// What the column mix concedes at most: its best row payoff.
    pub col_guarantee: Rational,
    pub certificate: Certificate,
}

/// Checks that neither player can gain by a pure deviation.
pub fn verify_equilibrium(
    matrix: &GameMatrix,
    row_mix: &MixedStrategy,
    col_mix: &MixedStrategy,
) -> Result<Verification> {
    let row_payoffs = matrix.row_payoffs(col_mix)?;
    let col_payoffs = matrix.col_payoffs(row_mix)?;
    let value = dot(row_payoffs.iter(), &row_mix.probabilities());
    let col_guarantee = row_payoffs.iter().max().expect("nonempty").clone();
    let row_guarantee = col_payoffs.iter().min().expect("nonempty").clone();
    let is_equilibrium = col_guarantee <= value && row_guarantee >= value;
    Ok(Verification {
        is_equilibrium,
        value,
        row_guarantee,
        col_guarantee,
        certificate: Certificate { row_payoffs, col_payoffs },
    })
}

/// Every row that maximizes the expected payoff against `col_mix`, with that
/// payoff. Ties are all returned.
pub fn best_response(matrix: &GameMatrix, col_mix: &MixedStrategy) -> Result<(Vec<usize>, Rational)> {
    let payoffs = matrix.row_payoffs(col_mix)?;
    let best = payoffs.iter().max().expect("nonempty").clone();
    let rows = (0..payoffs.len()).filter(|&i| payoffs[i] == best).collect();
    Ok((rows, best))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceMode {
    /// Better against every opposing strategy. Preserves the value.
    Strict,
    /// At least as good everywhere and better somewhere. May drop optimal
    /// strategies, and with them the value, in degenerate games.
    Weak,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub matrix: GameMatrix,
    /// Original index of each surviving row.
    pub row_map: Vec<usize>,
    /// Original index of each surviving column.
    pub col_map: Vec<usize>,
    pub mode: DominanceMode,
    /// False for weak mode: the reduced value is not guaranteed to match.
    pub value_preserving: bool,
}

fn dominates<'a>(
    better: impl Iterator<Item = &'a Rational> + Clone,
    worse: impl Iterator<Item = &'a Rational> + Clone,
    mode: DominanceMode,
) -> bool {
    let mut pairs = better.zip(worse);
    match mode {
        DominanceMode::Strict => pairs.all(|(b, w)| b > w),
        DominanceMode::Weak => {
            let pairs: Vec<_> = pairs.collect();
            pairs.iter().all(|(b, w)| b >= w) && pairs.iter().any(|(b, w)| b > w)
        }
    }
}

/// Iterated removal of pure strategies dominated by another pure strategy.
pub fn eliminate_dominated(matrix: &GameMatrix, mode: DominanceMode) -> Reduction {
    let mut rows: Vec<usize> = (0..matrix.rows()).collect();
    let mut cols: Vec<usize> = (0..matrix.cols()).collect();
    loop {
        let row_vals = |r: usize, cols: &[usize]| cols.iter().map(move |&c| matrix.get(r, c)).collect::<Vec<_>>();
        let kept_rows: Vec<usize> = rows
            .iter()
            .copied()
            .filter(|&r| {
                let mine = row_vals(r, &cols);
                !rows.iter().any(|&s| {
                    s != r && dominates(row_vals(s, &cols).into_iter(), mine.iter().copied(), mode)
                })
            })
            .collect();
        let rows_changed = kept_rows.len() != rows.len();
        rows = kept_rows;

        // Column player minimizes: d dominates c when d is smaller.
        let col_vals = |c: usize, rows: &[usize]| rows.iter().map(move |&r| matrix.get(r, c)).collect::<Vec<_>>();
        let kept_cols: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&c| {
                let mine = col_vals(c, &rows);
                !cols.iter().any(|&d| {
                    d != c && dominates(mine.iter().copied(), col_vals(d, &rows).into_iter(), mode)
                })
            })
            .collect();
        let cols_changed = kept_cols.len() != cols.len();
        cols = kept_cols;

        if !rows_changed && !cols_changed {
            break;
        }
    }
    Reduction {
        matrix: matrix.submatrix(&rows, &cols),
        row_map: rows,
        col_map: cols,
        mode,
        value_preserving: mode == DominanceMode::Strict,
    }
}

/// Minimax value and optimal mixes of a zero-sum game, verified against the
/// input matrix before returning.
pub fn solve_zero_sum(matrix: &GameMatrix) -> GameSolution {
    let (row_mix, col_mix, method) = match pure_saddle(matrix) {
        Some((i, j)) => (
            MixedStrategy::pure(matrix.rows(), i),
            MixedStrategy::pure(matrix.cols(), j),
            SolveMethod::SaddlePoint,
        ),
        None => {
            let reduced = eliminate_dominated(matrix, DominanceMode::Strict);
            let (x, y) = kernel_search(matrix, &reduced)
                .expect("every finite zero-sum game has an extreme optimal kernel");
            (x, y, SolveMethod::SupportEnumeration)
        }
    };
    let check = verify_equilibrium(matrix, &row_mix, &col_mix).expect("dimensions match");
    assert!(check.is_equilibrium, "solver produced a non-equilibrium");
    GameSolution {
        value: check.value,
        row_mix,
        col_mix,
        certificate: check.certificate,
        method,
    }
}

/// Smallest row and column indices of a pure saddle point, if one exists.
fn pure_saddle(matrix: &GameMatrix) -> Option<(usize, usize)> {
    let maximin = matrix.pure_maximin();
    if maximin != matrix.pure_minimax() {
        return None;
    }
    let i = (0..matrix.rows()).find(|&i| matrix.entries[i].iter().min() == Some(&maximin))?;
    let j = (0..matrix.cols()).find(|&j| matrix.column(j).max() == Some(&maximin))?;
    Some((i, j))
}

/// Visits k-subsets of `0..n` in lexicographic order until `f` returns true.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return true;
        }
        let Some(p) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return false;
        };
        idx[p] += 1;
        for q in p + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Solves the bordered equalization system on kernel `rows × cols`:
/// `Σ_i x_i M[i][j] = v` for every kernel column and `Σ x_i = 1`.
/// Returns the weights and `v`, or `None` if the system is singular.
#[allow(clippy::needless_range_loop)]
fn equalize(entries: &[Vec<Rational>]) -> Option<(Vec<Rational>, Rational)> {
    let k = entries.len();
    // Unknowns: x_0..x_{k-1}, v. Equation j: Σ_i x_i a[i][j] - v = 0.
    let mut a = Vec::with_capacity(k + 1);
    let mut b = Vec::with_capacity(k + 1);
    for j in 0..k {
        let mut eq: Vec<Rational> = (0..k).map(|i| entries[i][j].clone()).collect();
        eq.push(-Rational::one());
        a.push(eq);
        b.push(Rational::zero());
    }
    let mut total = vec![Rational::one(); k];
    total.push(Rational::zero());
    a.push(total);
    b.push(Rational::one());
    let mut sol = linalg::solve_vec(&a, &b)?;
    let v = sol.pop()?;
    Some((sol, v))
}

fn kernel_search(full: &GameMatrix, reduced: &Reduction) -> Option<(MixedStrategy, MixedStrategy)> {
    let m = &reduced.matrix;
    let max_k = m.rows().min(m.cols());
    let mut found = None;
    for k in 1..=max_k {
        let hit = for_each_subset(m.rows(), k, |rows| {
            for_each_subset(m.cols(), k, |cols| {
                let sub: Vec<Vec<Rational>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
                let Some((x, vx)) = equalize(&sub) else { return false };
                if x.iter().any(Rational::is_negative) {
                    return false;
                }
                let transposed: Vec<Vec<Rational>> =
                    (0..k).map(|j| (0..k).map(|i| -&sub[i][j]).collect()).collect();
                let Some((y, neg_vy)) = equalize(&transposed) else { return false };
                if y.iter().any(Rational::is_negative) || -neg_vy != vx {
                    return false;
                }
                let row_positions: Vec<usize> = rows.iter().map(|&i| reduced.row_map[i]).collect();
                let col_positions: Vec<usize> = cols.iter().map(|&j| reduced.col_map[j]).collect();
                let (Ok(xs), Ok(ys)) = (MixedStrategy::new(x), MixedStrategy::new(y)) else {
                    return false;
                };
                let row_mix = xs.embed(full.rows(), &row_positions).normalized();
                let col_mix = ys.embed(full.cols(), &col_positions).normalized();
                let ok = verify_equilibrium(full, &row_mix, &col_mix)
                    .map(|v| v.is_equilibrium)
                    .unwrap_or(false);
                if ok {
                    found = Some((row_mix, col_mix));
                }
                ok
            })
        });
        if hit {
            break;
        }
    }
    found
}
