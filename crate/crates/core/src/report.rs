//! The reproduction battery: every historical value recomputed and compared
//! exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::leher::{
    self, build_leher_matrix, conditional_lot_paul, conditional_lot_pierre, conditional_mixed_lot_paul7,
    paul_win_probability, PaulAction, PaulStrategy, PierreAction, PierreStrategy, Rank,
};
use crate::solver::{solve_zero_sum, verify_equilibrium};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// How `computed` must stand against `expected` for the entry to pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Equal,
    #[serde(rename = "<")]
    Less,
    #[serde(rename = ">")]
    Greater,
}

impl Relation {
    fn holds(self, computed: &Rational, expected: &Rational) -> bool {
        match self {
            Relation::Equal => computed == expected,
            Relation::Less => computed < expected,
            Relation::Greater => computed > expected,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equal => "=",
            Relation::Less => "<",
            Relation::Greater => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub label: String,
    pub expected: Rational,
    pub computed: Rational,
    pub source: String,
    pub verdict: Verdict,
    pub relation: Relation,
}

impl ReportEntry {
    pub fn exact(label: impl Into<String>, expected: Rational, computed: Rational, source: &str) -> Self {
        Self::compare(label, Relation::Equal, expected, computed, source)
    }

    pub fn compare(
        label: impl Into<String>,
        relation: Relation,
        expected: Rational,
        computed: Rational,
        source: &str,
    ) -> Self {
        let verdict = if relation.holds(&computed, &expected) { Verdict::Pass } else { Verdict::Fail };
        ReportEntry { label: label.into(), expected, computed, source: source.to_string(), verdict, relation }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(ReportEntry::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "[{}] {}: computed {} (≈ {}) {} expected {}  -- {}",
                e.verdict,
                e.label,
                e.computed,
                e.computed.to_decimal_default(),
                e.relation.symbol(),
                e.expected,
                e.source
            )?;
        }
        let passed = self.entries.iter().filter(|e| e.passed()).count();
        write!(f, "{passed}/{} entries pass", self.entries.len())
    }
}

/// Signature of the four-weight mixed lot, so the battery can be pointed at
/// an alternative formula.
pub type MixedValueFn = fn(&Rational, &Rational, &Rational, &Rational) -> Result<Rational>;

const TABLE: &str = "Bernoulli-Montmort table of Paul's lots, 1713";
const WALDEGRAVE_1712: &str = "Waldegrave to Montmort, early 1712";
const BERNOULLI_1712: &str = "N. Bernoulli to Montmort, 30 Dec 1712";
const WALDEGRAVE_1713: &str = "Waldegrave to Montmort, Nov 1713";
const MONTMORT_1711: &str = "Montmort to N. Bernoulli, 10 Apr 1711";
const BERNOULLI_1711: &str = "N. Bernoulli to Montmort, 10 Nov 1711";

/// Runs the full battery with the crate's own mixed-lot formula.
pub fn reproduce() -> Result<Report> {
    reproduce_with(leher::mixed_value)
}

pub fn reproduce_with(mixed_value: MixedValueFn) -> Result<Report> {
    let q = Rational::ratio;
    let mut entries = Vec::new();

    let table = build_leher_matrix();
    for (i, row) in table.row_labels().iter().enumerate() {
        for (j, col) in table.col_labels().iter().enumerate() {
            let expected = [[2828, 2838], [2834, 2828]][i][j];
            let ps = PaulStrategy::threshold(leher::PAUL_ROWS[i])?;
            let qs = PierreStrategy::threshold(leher::PIERRE_COLS[j])?;
            entries.push(ReportEntry::exact(
                format!("Paul's lot, {row} / {col}"),
                q(expected, 5525),
                paul_win_probability(&ps, &qs),
                TABLE,
            ));
        }
    }

    let switch8 = PierreStrategy::threshold(8)?;
    let hold8 = PierreStrategy::threshold(7)?;
    let paul_holds8 = PaulStrategy::threshold(7)?;
    let paul_holds7 = PaulStrategy::threshold(6)?;
    let seven = Rank::SEVEN;
    let eight = Rank::EIGHT;
    let lot_switch = conditional_lot_paul(seven, PaulAction::Switch, &switch8);
    let lot_hold_vs_hold = conditional_lot_paul(seven, PaulAction::Hold, &hold8);
    let lot_hold_vs_draw = conditional_lot_paul(seven, PaulAction::Hold, &switch8);
    entries.extend([
        ReportEntry::exact("Paul with a 7, switching", q(780, 2550), lot_switch.clone(), WALDEGRAVE_1712),
        ReportEntry::exact(
            "Paul with a 7, holding, Pierre holds an 8",
            q(720, 2550),
            lot_hold_vs_hold.clone(),
            WALDEGRAVE_1712,
        ),
        ReportEntry::exact(
            "Paul with a 7, holding, Pierre switches an 8",
            q(816, 2550),
            lot_hold_vs_draw.clone(),
            WALDEGRAVE_1712,
        ),
        ReportEntry::exact(
            "Pierre with an 8, holding, Paul holds 8 and over",
            q(150, 1150),
            conditional_lot_pierre(eight, PierreAction::Hold, &paul_holds8)?,
            WALDEGRAVE_1712,
        ),
        ReportEntry::exact(
            "Pierre with an 8, switching, Paul holds 8 and over",
            q(210, 1150),
            conditional_lot_pierre(eight, PierreAction::Draw, &paul_holds8)?,
            WALDEGRAVE_1712,
        ),
        ReportEntry::exact(
            "Pierre with an 8, holding, Paul holds 7 and over",
            q(350, 1350),
            conditional_lot_pierre(eight, PierreAction::Hold, &paul_holds7)?,
            WALDEGRAVE_1712,
        ),
        ReportEntry::exact(
            "Pierre with an 8, switching, Paul holds 7 and over",
            q(314, 1350),
            conditional_lot_pierre(eight, PierreAction::Draw, &paul_holds7)?,
            WALDEGRAVE_1712,
        ),
    ]);

    let half = q(1, 2);
    entries.push(ReportEntry::exact(
        "Paul with a 7, both players mixing 1:1",
        q(774, 2550),
        conditional_mixed_lot_paul7(&half, &half)?,
        BERNOULLI_1712,
    ));
    entries.push(ReportEntry::exact(
        "Paul with a 7, always switching",
        q(780, 2550),
        conditional_mixed_lot_paul7(&Rational::one(), &half)?,
        BERNOULLI_1712,
    ));

    let minimax = q(11327, 22100);
    let solution = solve_zero_sum(&table);
    entries.push(ReportEntry::exact("Minimax value of the table", minimax.clone(), solution.value.clone(), WALDEGRAVE_1713));
    entries.push(ReportEntry::exact(
        "Paul's optimal tokens, switch : hold",
        q(3, 5),
        solution.row_mix.ratio(0, 1).unwrap_or_default(),
        WALDEGRAVE_1713,
    ));
    entries.push(ReportEntry::exact(
        "Pierre's optimal tokens, switch : hold",
        q(5, 3),
        solution.col_mix.ratio(0, 1).unwrap_or_default(),
        WALDEGRAVE_1713,
    ));

    let w = |n: i64| Rational::from(n);
    for (label, (a, b, c, d)) in [
        ("Paul mixing 3:5, Pierre always switches the 8", (3, 5, 1, 0)),
        ("Paul mixing 3:5, Pierre always holds the 8", (3, 5, 0, 1)),
        ("Pierre mixing 5:3, Paul always switches the 7", (1, 0, 5, 3)),
        ("Pierre mixing 5:3, Paul always holds the 7", (0, 1, 5, 3)),
    ] {
        entries.push(ReportEntry::exact(label, minimax.clone(), mixed_value(&w(a), &w(b), &w(c), &w(d))?, WALDEGRAVE_1713));
    }

    let thresholds = leher::threshold_matrix();
    let positions_row: Vec<usize> = leher::PAUL_ROWS.iter().map(|&t| t as usize).collect();
    let positions_col: Vec<usize> = leher::PIERRE_COLS.iter().map(|&t| t as usize).collect();
    let check = verify_equilibrium(
        &thresholds,
        &solution.row_mix.embed(thresholds.rows(), &positions_row),
        &solution.col_mix.embed(thresholds.cols(), &positions_col),
    )?;
    entries.push(ReportEntry::exact(
        "Paul's 3:5 guarantee over all 14 Pierre thresholds",
        minimax.clone(),
        check.row_guarantee,
        WALDEGRAVE_1713,
    ));
    entries.push(ReportEntry::exact(
        "Pierre's 5:3 ceiling over all 14 Paul thresholds",
        minimax,
        check.col_guarantee,
        WALDEGRAVE_1713,
    ));

    let pure = table.get(0, 0).clone();
    let advantage = &pure - &half;
    entries.push(ReportEntry::compare("Paul's advantage exceeds 1 in 85", Relation::Greater, q(1, 85), advantage.clone(), MONTMORT_1711));
    entries.push(ReportEntry::compare("Paul's advantage is below 1 in 84", Relation::Less, q(1, 84), advantage, MONTMORT_1711));
    let pierre_lot = Rational::one() - &pure;
    entries.push(ReportEntry::exact("Pierre's lot at the pure solution", q(2697, 5525), pierre_lot.clone(), BERNOULLI_1711));
    entries.push(ReportEntry::exact(
        "Pierre's lot to Paul's lot",
        q(2697, 2828),
        pierre_lot.checked_div(&pure)?,
        BERNOULLI_1711,
    ));
    entries.push(ReportEntry::exact(
        "(780 - 720) : (816 - 780)",
        q(5, 3),
        (&lot_switch - &lot_hold_vs_hold).checked_div(&(&lot_hold_vs_draw - &lot_switch))?,
        WALDEGRAVE_1712,
    ));

    Ok(Report { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn healthy_battery_passes() {
        let report = reproduce().unwrap();
        assert!(report.all_pass(), "{report}");
        assert_eq!(report.entries.len(), 27);
    }

    fn printed_denominator(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Result<Rational> {
        let m = build_leher_matrix();
        let num = a * c * m.get(0, 0) + b * c * m.get(1, 0) + a * d * m.get(0, 1) + b * d * m.get(1, 1);
        // The table entries already carry the 5525; the printed formula
        // divides by (a+b+c+d) where (a+b)(c+d) belongs.
        num.checked_div(&(a + b + c + d))
    }

    #[test]
    fn printed_denominator_fails_guarantee_entries() {
        let report = reproduce_with(printed_denominator).unwrap();
        let failing: Vec<&str> = report.failures().map(|e| e.label.as_str()).collect();
        assert_eq!(failing.len(), 4, "{failing:?}");
        assert!(failing.iter().all(|l| l.contains("mixing")));
    }

    #[test]
    fn json_keys_are_stable() {
        let entry = ReportEntry::exact("x", Rational::ratio(1, 2), Rational::ratio(2, 4), "src");
        let v = serde_json::to_value(&entry).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["computed", "expected", "label", "relation", "source", "verdict"]);
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["relation"], "=");
    }
}
