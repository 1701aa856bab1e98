//! Two-player Le Her on a full 52-card deck.
//!
//! Pierre deals one card to Paul and one to himself. Paul may hold or demand
//! a swap; Pierre refuses only when he holds a king. Pierre may then hold or
//! exchange his card for the next card of the deck, but a drawn king is
//! returned and he keeps what he had. Higher card wins; ties go to Pierre.
//!
//! After a completed swap Pierre knows both hands, so his play there is
//! forced: stand when his card is at least Paul's, draw otherwise. Pierre's
//! [`PierreStrategy`] only applies when Paul held.
//!
//! Exact lots are found by enumerating rank triples (Paul's card, Pierre's
//! card, the replacement) weighted by how many cards of each rank remain,
//! which covers all `52·51·50` ordered deals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{GameMatrix, MixedStrategy};
use crate::Rational;

pub const RANKS: usize = 13;
pub const SUITS: u8 = 4;
pub const DECK_SIZE: u64 = 52;
/// Number of ordered (Paul, Pierre, replacement) deals.
pub const ORDERED_DEALS: u64 = 52 * 51 * 50;
/// Ordered (Pierre, replacement) pairs once Paul's card is known.
pub const DEALS_GIVEN_PAUL: u64 = 51 * 50;

/// Card rank, ace low (1) to king high (13).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Rank(u8);

impl Rank {
    pub const ACE: Rank = Rank(1);
    pub const SEVEN: Rank = Rank(7);
    pub const EIGHT: Rank = Rank(8);
    pub const KING: Rank = Rank(13);

    pub fn new(value: i64) -> Result<Self> {
        if (1..=RANKS as i64).contains(&value) {
            Ok(Rank(value as u8))
        } else {
            Err(Error::InvalidRank(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_king(self) -> bool {
        self == Rank::KING
    }

    pub fn all() -> impl Iterator<Item = Rank> {
        (1..=RANKS as u8).map(Rank)
    }

    fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl TryFrom<u8> for Rank {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        Rank::new(v.into())
    }
}

impl From<Rank> for u8 {
    fn from(r: Rank) -> u8 {
        r.0
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rank {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: i64 = s.trim().parse().map_err(|_| Error::InvalidRank(-1))?;
        Rank::new(v)
    }
}

/// Cards left in the deck, by rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeckComposition {
    counts: [u8; RANKS],
}

impl Default for DeckComposition {
    fn default() -> Self {
        Self::full()
    }
}

impl DeckComposition {
    pub fn full() -> Self {
        DeckComposition { counts: [SUITS; RANKS] }
    }

    pub fn count(&self, rank: Rank) -> u64 {
        self.counts[rank.index()].into()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    /// Deck with one card of `rank` taken out, or `None` if none is left.
    pub fn without(&self, rank: Rank) -> Option<Self> {
        let mut next = *self;
        let slot = &mut next.counts[rank.index()];
        *slot = slot.checked_sub(1)?;
        Some(next)
    }

    /// Ranks still present with their multiplicities.
    pub fn ranks(&self) -> impl Iterator<Item = (Rank, u64)> + '_ {
        Rank::all().map(|r| (r, self.count(r))).filter(|&(_, c)| c > 0)
    }

    /// The rank of the `index`-th card when the deck is laid out by rank.
    pub fn nth(&self, index: u64) -> Option<Rank> {
        let mut left = index;
        for (rank, count) in self.ranks() {
            if left < count {
                return Some(rank);
            }
            left -= count;
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaulAction {
    Hold,
    Switch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PierreAction {
    Hold,
    Draw,
}

impl FromStr for PaulAction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hold" | "h" => Ok(PaulAction::Hold),
            "switch" | "s" => Ok(PaulAction::Switch),
            _ => Err(Error::ParseStrategy(s.to_string())),
        }
    }
}

impl FromStr for PierreAction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hold" | "h" => Ok(PierreAction::Hold),
            "draw" | "switch" | "d" | "s" => Ok(PierreAction::Draw),
            _ => Err(Error::ParseStrategy(s.to_string())),
        }
    }
}

/// Paul's action for every card he might be dealt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PaulStrategy {
    actions: [PaulAction; RANKS],
}

/// Pierre's action for every card he might hold when Paul has stood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PierreStrategy {
    actions: [PierreAction; RANKS],
}

fn check_threshold(t: i64) -> Result<u8> {
    if (0..=RANKS as i64).contains(&t) {
        Ok(t as u8)
    } else {
        Err(Error::InvalidThreshold(t))
    }
}

/// Shared text form: `threshold:t` or 13 characters, `S` for switching
/// (Pierre may also write `D`) and `H` for holding, ace first.
fn parse_actions<A: Copy>(s: &str, switch: A, hold: A, switch_chars: &[char]) -> Result<[A; RANKS]> {
    let bad = || Error::ParseStrategy(s.to_string());
    if let Some(t) = s.strip_prefix("threshold:") {
        let t = check_threshold(t.parse::<i64>().map_err(|_| bad())?)?;
        return Ok(std::array::from_fn(|i| if i < t as usize { switch } else { hold }));
    }
    let chars: Vec<char> = s.chars().collect();
    if chars.len() != RANKS {
        return Err(bad());
    }
    let mut out = [hold; RANKS];
    for (slot, c) in out.iter_mut().zip(chars) {
        let c = c.to_ascii_uppercase();
        *slot = if switch_chars.contains(&c) {
            switch
        } else if c == 'H' {
            hold
        } else {
            return Err(bad());
        };
    }
    Ok(out)
}

impl PaulStrategy {
    pub fn from_actions(actions: [PaulAction; RANKS]) -> Self {
        PaulStrategy { actions }
    }

    /// Switch on every rank up to and including `t`, hold above. `t = 0`
    /// never switches; `t = 13` switches even a king.
    pub fn threshold(t: i64) -> Result<Self> {
        let t = check_threshold(t)?;
        Ok(PaulStrategy {
            actions: std::array::from_fn(|i| if i < t as usize { PaulAction::Switch } else { PaulAction::Hold }),
        })
    }

    pub fn action(&self, card: Rank) -> PaulAction {
        self.actions[card.index()]
    }

    /// Same strategy with the action on one rank replaced.
    pub fn with(mut self, card: Rank, action: PaulAction) -> Self {
        self.actions[card.index()] = action;
        self
    }

    pub fn stands_on(&self, card: Rank) -> bool {
        self.action(card) == PaulAction::Hold
    }
}

impl PierreStrategy {
    pub fn from_actions(actions: [PierreAction; RANKS]) -> Self {
        PierreStrategy { actions }
    }

    /// Draw on every rank up to and including `t`, hold above.
    pub fn threshold(t: i64) -> Result<Self> {
        let t = check_threshold(t)?;
        Ok(PierreStrategy {
            actions: std::array::from_fn(|i| if i < t as usize { PierreAction::Draw } else { PierreAction::Hold }),
        })
    }

    pub fn action(&self, card: Rank) -> PierreAction {
        self.actions[card.index()]
    }

    pub fn with(mut self, card: Rank, action: PierreAction) -> Self {
        self.actions[card.index()] = action;
        self
    }
}

impl fmt::Display for PaulStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.actions
            .iter()
            .try_for_each(|a| f.write_str(if *a == PaulAction::Switch { "S" } else { "H" }))
    }
}

impl fmt::Display for PierreStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.actions
            .iter()
            .try_for_each(|a| f.write_str(if *a == PierreAction::Draw { "S" } else { "H" }))
    }
}

impl FromStr for PaulStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_actions(s, PaulAction::Switch, PaulAction::Hold, &['S']).map(PaulStrategy::from_actions)
    }
}

impl FromStr for PierreStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_actions(s, PierreAction::Draw, PierreAction::Hold, &['S', 'D']).map(PierreStrategy::from_actions)
    }
}

macro_rules! serde_via_text {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_text!(PaulStrategy);
serde_via_text!(PierreStrategy);

/// What remains to be decided once both players have acted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Settlement {
    /// Hands are final.
    Showdown { paul: Rank, pierre: Rank },
    /// Pierre exchanges `pierre` for the next card of the deck.
    PierreDraws { paul: Rank, pierre: Rank },
}

/// Applies Paul's decision and Pierre's response to the dealt hands.
pub fn settle(paul_card: Rank, pierre_card: Rank, paul: PaulAction, pierre_free: &PierreStrategy) -> Settlement {
    match paul {
        PaulAction::Switch if pierre_card.is_king() => {
            Settlement::Showdown { paul: paul_card, pierre: pierre_card }
        }
        PaulAction::Switch => {
            let (paul, pierre) = (pierre_card, paul_card);
            if pierre >= paul {
                Settlement::Showdown { paul, pierre }
            } else {
                Settlement::PierreDraws { paul, pierre }
            }
        }
        PaulAction::Hold => match pierre_free.action(pierre_card) {
            PierreAction::Hold => Settlement::Showdown { paul: paul_card, pierre: pierre_card },
            PierreAction::Draw => Settlement::PierreDraws { paul: paul_card, pierre: pierre_card },
        },
    }
}

/// Pierre's card after drawing; a drawn king is put back.
pub fn after_draw(current: Rank, drawn: Rank) -> Rank {
    if drawn.is_king() {
        current
    } else {
        drawn
    }
}

pub fn paul_wins(paul: Rank, pierre: Rank) -> bool {
    paul > pierre
}

/// One complete deal: the three cards in dealing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Deal {
    pub paul: Rank,
    pub pierre: Rank,
    pub replacement: Rank,
}

/// Whether Paul wins `deal` under the given pure strategies.
pub fn paul_wins_deal(deal: &Deal, ps: &PaulStrategy, qs: &PierreStrategy) -> bool {
    match settle(deal.paul, deal.pierre, ps.action(deal.paul), qs) {
        Settlement::Showdown { paul, pierre } => paul_wins(paul, pierre),
        Settlement::PierreDraws { paul, pierre } => paul_wins(paul, after_draw(pierre, deal.replacement)),
    }
}

/// Number of replacement cards (out of `deck`) for which Paul ends up
/// winning, given the settlement.
fn winning_replacements(settlement: Settlement, deck: &DeckComposition) -> u64 {
    match settlement {
        Settlement::Showdown { paul, pierre } => {
            if paul_wins(paul, pierre) {
                deck.total()
            } else {
                0
            }
        }
        Settlement::PierreDraws { paul, pierre } => deck
            .ranks()
            .filter(|&(drawn, _)| paul_wins(paul, after_draw(pierre, drawn)))
            .map(|(_, c)| c)
            .sum(),
    }
}

/// Ordered deals won by Paul, conditioned on his card, out of
/// [`DEALS_GIVEN_PAUL`].
fn paul_wins_given_card(card: Rank, action: PaulAction, qs: &PierreStrategy) -> u64 {
    let after_paul = DeckComposition::full().without(card).expect("full deck");
    after_paul
        .ranks()
        .map(|(pierre_card, weight)| {
            let rest = after_paul.without(pierre_card).expect("rank present");
            weight * winning_replacements(settle(card, pierre_card, action, qs), &rest)
        })
        .sum()
}

/// Paul's exact probability of taking the pot.
pub fn paul_win_probability(ps: &PaulStrategy, qs: &PierreStrategy) -> Rational {
    let full = DeckComposition::full();
    let wins: u64 = full
        .ranks()
        .map(|(card, weight)| weight * paul_wins_given_card(card, ps.action(card), qs))
        .sum();
    Rational::new(wins, ORDERED_DEALS).expect("nonzero denominator")
}

/// Pierre's exact probability of taking the pot.
pub fn pierre_win_probability(ps: &PaulStrategy, qs: &PierreStrategy) -> Rational {
    Rational::one() - paul_win_probability(ps, qs)
}

/// Paul's lot once he has seen `card` and committed to `action`, over
/// Pierre's 51 possible cards and 50 possible replacements.
pub fn conditional_lot_paul(card: Rank, action: PaulAction, qs: &PierreStrategy) -> Rational {
    Rational::new(paul_wins_given_card(card, action, qs), DEALS_GIVEN_PAUL).expect("nonzero denominator")
}

/// Pierre's lot holding `card` and taking `action`, given that Paul stood
/// under `ps`. Paul's card ranges over the ranks `ps` stands on, less the
/// card Pierre holds.
pub fn conditional_lot_pierre(card: Rank, action: PierreAction, ps: &PaulStrategy) -> Result<Rational> {
    let after_pierre = DeckComposition::full().without(card).expect("full deck");
    let qs = PierreStrategy::threshold(0)?.with(card, action);
    let mut paul_cards = 0u64;
    let mut pierre_wins = 0u64;
    for (paul_card, weight) in after_pierre.ranks().filter(|&(r, _)| ps.stands_on(r)) {
        let rest = after_pierre.without(paul_card).expect("rank present");
        let paul_won = winning_replacements(settle(paul_card, card, PaulAction::Hold, &qs), &rest);
        paul_cards += weight;
        pierre_wins += weight * (rest.total() - paul_won);
    }
    if paul_cards == 0 {
        return Err(Error::ImpossibleCondition(format!("Paul stands on no card under {ps}")));
    }
    Rational::new(pierre_wins, paul_cards * (DECK_SIZE - 2))
}

fn check_probability(p: &Rational) -> Result<()> {
    if p.is_probability() {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p.to_string()))
    }
}

/// Paul's lot with a seven when he switches with probability `p_switch` and
/// Pierre, having an eight, draws with probability `p_pierre_draw8`.
pub fn conditional_mixed_lot_paul7(p_switch: &Rational, p_pierre_draw8: &Rational) -> Result<Rational> {
    check_probability(p_switch)?;
    check_probability(p_pierre_draw8)?;
    let eight_switched = PierreStrategy::threshold(8)?;
    let eight_held = PierreStrategy::threshold(7)?;
    let switch = conditional_lot_paul(Rank::SEVEN, PaulAction::Switch, &eight_switched);
    let hold_vs_draw = conditional_lot_paul(Rank::SEVEN, PaulAction::Hold, &eight_switched);
    let hold_vs_hold = conditional_lot_paul(Rank::SEVEN, PaulAction::Hold, &eight_held);
    let one = Rational::one();
    let hold = p_pierre_draw8 * hold_vs_draw + (&one - p_pierre_draw8) * hold_vs_hold;
    Ok(p_switch * switch + (&one - p_switch) * hold)
}

/// Paul thresholds of the two rows of the central table: switch the seven
/// and under, hold the seven and over.
pub const PAUL_ROWS: [i64; 2] = [7, 6];
/// Pierre thresholds of the two columns: switch the eight and under, hold
/// the eight and over.
pub const PIERRE_COLS: [i64; 2] = [8, 7];

/// The 2×2 game between the two sensible thresholds on each side. Row 0 is
/// Paul switching the seven, column 0 is Pierre switching the eight.
pub fn build_leher_matrix() -> GameMatrix {
    let entries = PAUL_ROWS
        .iter()
        .map(|&tp| {
            let ps = PaulStrategy::threshold(tp).expect("valid");
            PIERRE_COLS
                .iter()
                .map(|&tq| paul_win_probability(&ps, &PierreStrategy::threshold(tq).expect("valid")))
                .collect()
        })
        .collect();
    GameMatrix::with_labels(
        vec!["Switch the 7".into(), "Hold the 7".into()],
        vec!["Switch the 8".into(), "Hold the 8".into()],
        entries,
    )
    .expect("2x2")
}

/// Paul's win probability for every pair of thresholds `0..=13`.
pub fn threshold_matrix() -> GameMatrix {
    let paul: Vec<PaulStrategy> = (0..=RANKS as i64).map(|t| PaulStrategy::threshold(t).expect("valid")).collect();
    let pierre: Vec<PierreStrategy> =
        (0..=RANKS as i64).map(|t| PierreStrategy::threshold(t).expect("valid")).collect();
    let entries = paul.iter().map(|ps| pierre.iter().map(|qs| paul_win_probability(ps, qs)).collect()).collect();
    GameMatrix::with_labels(
        (0..=RANKS).map(|t| format!("paul:threshold:{t}")).collect(),
        (0..=RANKS).map(|t| format!("pierre:threshold:{t}")).collect(),
        entries,
    )
    .expect("14x14")
}

/// Validates mixing weights and returns them as a pair of mixes over the
/// central table's rows `(a, b)` and columns `(c, d)`.
pub fn weights_to_mixes(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
) -> Result<(MixedStrategy, MixedStrategy)> {
    let row = MixedStrategy::new(vec![a.clone(), b.clone()])
        .map_err(|e| Error::InvalidWeights(format!("Paul's (a, b): {e}")))?;
    let col = MixedStrategy::new(vec![c.clone(), d.clone()])
        .map_err(|e| Error::InvalidWeights(format!("Pierre's (c, d): {e}")))?;
    Ok((row, col))
}

/// Paul's lot when he switches a seven with weight `a` against holding with
/// weight `b`, and Pierre switches an eight with weight `c` against holding
/// with weight `d`.
pub fn mixed_value(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Result<Rational> {
    let (row, col) = weights_to_mixes(a, b, c, d)?;
    build_leher_matrix().mixed_payoff(&row, &col)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn paul(t: i64) -> PaulStrategy {
        PaulStrategy::threshold(t).unwrap()
    }

    fn pierre(t: i64) -> PierreStrategy {
        PierreStrategy::threshold(t).unwrap()
    }

    #[test]
    fn table_cells() {
        assert_eq!(paul_win_probability(&paul(7), &pierre(8)), q(2828, 5525));
        assert_eq!(paul_win_probability(&paul(6), &pierre(8)), q(2834, 5525));
        assert_eq!(paul_win_probability(&paul(7), &pierre(7)), q(2838, 5525));
        assert_eq!(paul_win_probability(&paul(6), &pierre(7)), q(2828, 5525));
    }

    #[test]
    fn conditional_lots_for_paul() {
        for t in [0, 7, 8, 13] {
            assert_eq!(conditional_lot_paul(Rank::SEVEN, PaulAction::Switch, &pierre(t)), q(780, 2550));
        }
        assert_eq!(conditional_lot_paul(Rank::SEVEN, PaulAction::Hold, &pierre(7)), q(720, 2550));
        assert_eq!(conditional_lot_paul(Rank::SEVEN, PaulAction::Hold, &pierre(8)), q(816, 2550));
    }

    #[test]
    fn conditional_lots_for_pierre() {
        let lot = |a, t| conditional_lot_pierre(Rank::EIGHT, a, &paul(t)).unwrap();
        assert_eq!(lot(PierreAction::Hold, 7), q(150, 1150));
        assert_eq!(lot(PierreAction::Draw, 7), q(210, 1150));
        assert_eq!(lot(PierreAction::Hold, 6), q(350, 1350));
        assert_eq!(lot(PierreAction::Draw, 6), q(314, 1350));
    }

    #[test]
    fn pierre_condition_needs_a_stand() {
        let err = conditional_lot_pierre(Rank::EIGHT, PierreAction::Hold, &paul(13));
        assert!(matches!(err, Err(Error::ImpossibleCondition(_))));
        // Standing only on kings while Pierre holds a king leaves three.
        let kings_only = paul(12);
        assert!(conditional_lot_pierre(Rank::KING, PierreAction::Hold, &kings_only).is_ok());
    }

    #[test]
    fn mixed_lot_with_a_seven() {
        assert_eq!(conditional_mixed_lot_paul7(&q(1, 2), &q(1, 2)).unwrap(), q(774, 2550));
        for d in [q(0, 1), q(1, 3), q(1, 1)] {
            assert_eq!(conditional_mixed_lot_paul7(&Rational::one(), &d).unwrap(), q(780, 2550));
        }
        assert_eq!(conditional_mixed_lot_paul7(&Rational::zero(), &Rational::zero()).unwrap(), q(720, 2550));
        assert!(matches!(
            conditional_mixed_lot_paul7(&q(3, 2), &q(1, 2)),
            Err(Error::ProbabilityOutOfRange(_))
        ));
        assert!(conditional_mixed_lot_paul7(&q(1, 2), &q(-1, 2)).is_err());
    }

    #[test]
    fn mixed_value_examples() {
        let v = |a, b, c, d| mixed_value(&q(a, 1), &q(b, 1), &q(c, 1), &q(d, 1)).unwrap();
        assert_eq!(v(1, 1, 1, 1), q(2832, 5525));
        assert_eq!(v(1, 0, 1, 0), q(2828, 5525));
        assert_eq!(v(3, 5, 1, 0), q(11327, 22100));
        assert_eq!(v(3, 5, 0, 1), q(11327, 22100));
        assert_eq!(v(1, 0, 5, 3), q(11327, 22100));
        assert_eq!(q(11327, 22100), q(2831, 5525) + q(3, 4 * 5525));
        assert!(mixed_value(&q(0, 1), &q(0, 1), &q(1, 1), &q(1, 1)).is_err());
        assert!(mixed_value(&q(1, 1), &q(1, 1), &q(0, 1), &q(0, 1)).is_err());
        assert!(mixed_value(&q(-1, 1), &q(2, 1), &q(1, 1), &q(1, 1)).is_err());
    }

    #[test]
    fn montmort_printed_denominator_breaks_the_guarantee() {
        // Numerator over 5525·(a+b+c+d) instead of 5525·(a+b)(c+d).
        let (a, b, c, d) = (3i64, 5, 1, 0);
        let num = 2828 * a * c + 2834 * b * c + 2838 * a * d + 2828 * b * d;
        let printed = q(num, 13 * 17 * 25 * (a + b + c + d));
        assert_eq!(printed, q(22654, 9 * 5525));
        assert_ne!(printed, q(11327, 22100));
    }

    #[test]
    fn waldegrave_difference_ratio() {
        let hold_held = conditional_lot_paul(Rank::SEVEN, PaulAction::Hold, &pierre(7));
        let hold_drawn = conditional_lot_paul(Rank::SEVEN, PaulAction::Hold, &pierre(8));
        let switch = conditional_lot_paul(Rank::SEVEN, PaulAction::Switch, &pierre(8));
        let ratio = (&switch - &hold_held).checked_div(&(&hold_drawn - &switch)).unwrap();
        assert_eq!(ratio, q(5, 3));
    }

    #[test]
    fn table_matrix_layout() {
        let m = build_leher_matrix();
        assert_eq!(m.row_labels()[0], "Switch the 7");
        assert_eq!(m.col_labels()[0], "Switch the 8");
        assert_eq!(m.entries(), &[vec![q(2828, 5525), q(2838, 5525)], vec![q(2834, 5525), q(2828, 5525)]]);
        assert!(m.entries().iter().flatten().all(|x| x.is_positive() && *x < Rational::one()));
    }

    #[test]
    fn threshold_matrix_shape() {
        let m = threshold_matrix();
        assert_eq!((m.rows(), m.cols()), (14, 14));
        assert_eq!(m.get(7, 8), &q(2828, 5525));
        for t in 0..14 {
            assert!(m.get(13, t) < m.get(7, t), "switching kings should be worse at column {t}");
        }
    }

    #[test]
    fn strategy_text_forms() {
        assert_eq!(paul(7).to_string(), "SSSSSSSHHHHHH");
        assert_eq!("SSSSSSSHHHHHH".parse::<PaulStrategy>().unwrap(), paul(7));
        assert_eq!("threshold:7".parse::<PaulStrategy>().unwrap(), paul(7));
        assert_eq!("ssssssssddddd".parse::<PaulStrategy>().ok(), None);
        assert_eq!("DDDDDDDDHHHHH".parse::<PierreStrategy>().unwrap(), pierre(8));
        assert_eq!(pierre(8).to_string(), "SSSSSSSSHHHHH");
        assert_eq!("threshold:0".parse::<PierreStrategy>().unwrap().to_string(), "HHHHHHHHHHHHH");
        for bad in ["threshold:14", "threshold:-1", "threshold:x", "SSS", "SSSSSSSHHHHHHH", "SSSSSSSXHHHHH"] {
            assert!(bad.parse::<PaulStrategy>().is_err(), "{bad}");
        }
        let json = serde_json::to_string(&paul(3)).unwrap();
        assert_eq!(json, "\"SSSHHHHHHHHHH\"");
    }

    #[test]
    fn rank_bounds() {
        assert!(Rank::new(0).is_err());
        assert!(Rank::new(14).is_err());
        assert_eq!(Rank::all().max(), Some(Rank::KING));
        assert_eq!(Rank::all().count(), 13);
    }

    #[test]
    fn deck_bookkeeping() {
        let deck = DeckComposition::full();
        assert_eq!(deck.total(), 52);
        let d = deck.without(Rank::KING).unwrap();
        assert_eq!(d.count(Rank::KING), 3);
        assert_eq!(d.total(), 51);
        let empty_kings = d.without(Rank::KING).unwrap().without(Rank::KING).unwrap().without(Rank::KING).unwrap();
        assert_eq!(empty_kings.without(Rank::KING), None);
        assert_eq!(deck.nth(0), Some(Rank::ACE));
        assert_eq!(deck.nth(51), Some(Rank::KING));
        assert_eq!(deck.nth(52), None);
        assert_eq!(empty_kings.nth(47), Some(Rank::new(12).unwrap()));
    }

    #[test]
    fn drawn_king_is_returned() {
        let deal = Deal { paul: Rank::EIGHT, pierre: Rank::new(3).unwrap(), replacement: Rank::KING };
        assert!(paul_wins_deal(&deal, &paul(0), &pierre(13)));
    }

    #[test]
    fn refused_switch_leaves_pierre_on_king() {
        let deal = Deal { paul: Rank::ACE, pierre: Rank::KING, replacement: Rank::new(2).unwrap() };
        assert_eq!(settle(deal.paul, deal.pierre, PaulAction::Switch, &pierre(13)),
            Settlement::Showdown { paul: Rank::ACE, pierre: Rank::KING });
    }

    #[test]
    fn informed_draw_after_swap() {
        // Paul swaps a 3 for a 9; Pierre, now with the 3, must draw.
        let s = settle(Rank::new(3).unwrap(), Rank::new(9).unwrap(), PaulAction::Switch, &pierre(0));
        assert_eq!(s, Settlement::PierreDraws { paul: Rank::new(9).unwrap(), pierre: Rank::new(3).unwrap() });
        // Equal cards after the swap: Pierre stands on the tie.
        let s = settle(Rank::new(5).unwrap(), Rank::new(5).unwrap(), PaulAction::Switch, &pierre(13));
        assert!(matches!(s, Settlement::Showdown { .. }));
    }
}
