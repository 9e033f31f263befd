//! Ranks, percentiles and quartiles, and the per-unit FSS ↔ MNCS comparison.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::ids::{natural_cmp, UniversityId};
use crate::indicators::ScoreBoard;

#[derive(Debug, Error, PartialEq)]
pub enum RankingError {
    #[error("cannot rank an empty board")]
    EmptyBoard,
    #[error("percentile undefined for a population of {0}")]
    DegeneratePopulation(usize),
    #[error("rank {rank} outside 1..={n}")]
    InvalidRank { rank: usize, n: usize },
    #[error("unit `{0}` has a non-finite score")]
    NonFiniteScore(UniversityId),
    #[error("unit `{0}` appears twice")]
    DuplicateUnit(UniversityId),
    #[error("unit sets differ: only in FSS {only_fss:?}, only in MNCS {only_mncs:?}")]
    UnitSetMismatch {
        only_fss: Vec<UniversityId>,
        only_mncs: Vec<UniversityId>,
    },
}

/// Input to ranking: a unit, its score, and an optional hint ordering
/// exactly tied scores (lower first).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredUnit {
    pub unit: UniversityId,
    pub score: f64,
    pub staff: Option<usize>,
    pub tiebreak: Option<i64>,
}

impl ScoredUnit {
    pub fn new(unit: impl Into<UniversityId>, score: f64) -> Self {
        Self {
            unit: unit.into(),
            score,
            staff: None,
            tiebreak: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedEntry {
    pub unit: UniversityId,
    pub score: f64,
    pub rank: usize,
    pub percentile: f64,
    pub staff: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    pub label: String,
    /// In rank order.
    pub entries: Vec<RankedEntry>,
    /// Units sharing an identical score, in the order they were ranked.
    pub tie_groups: Vec<Vec<UniversityId>>,
    /// Set for single-unit populations, whose percentile is 100 by convention.
    pub degenerate: bool,
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, unit: &UniversityId) -> Option<&RankedEntry> {
        self.entries.iter().find(|e| &e.unit == unit)
    }
}

/// `100 · (n − rank) / (n − 1)`: 100 for the best unit, 0 for the worst.
pub fn percentile(rank: usize, n: usize) -> Result<f64, RankingError> {
    if n < 2 {
        return Err(RankingError::DegeneratePopulation(n));
    }
    if rank == 0 || rank > n {
        return Err(RankingError::InvalidRank { rank, n });
    }
    Ok(100.0 * (n - rank) as f64 / (n - 1) as f64)
}

/// `ceil(4 · rank / n)`; quartile 1 is the top.
pub fn quartile(rank: usize, n: usize) -> u8 {
    debug_assert!(rank >= 1 && rank <= n, "rank {rank} outside 1..={n}");
    (4 * rank).div_ceil(n) as u8
}

/// Ranks a board by score, highest first. Ties fall back to the natural
/// order of university ids.
pub fn rank(board: &ScoreBoard) -> Result<RankedList, RankingError> {
    let items = board
        .scores
        .iter()
        .map(|s| ScoredUnit {
            unit: s.unit.university.clone(),
            score: s.score,
            staff: Some(s.headcount),
            tiebreak: None,
        })
        .collect();
    rank_scores(board.scope.code(), items)
}

/// Ranks arbitrary scored units: score descending, then tie-break hint
/// ascending (units without a hint last), then natural id order.
pub fn rank_scores(label: impl Into<String>, mut items: Vec<ScoredUnit>) -> Result<RankedList, RankingError> {
    if items.is_empty() {
        return Err(RankingError::EmptyBoard);
    }
    if let Some(bad) = items.iter().find(|s| !s.score.is_finite()) {
        return Err(RankingError::NonFiniteScore(bad.unit.clone()));
    }
    items.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| match (a.tiebreak, b.tiebreak) {
                (Some(x), Some(y)) => x.cmp(&y),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            })
            .then_with(|| natural_cmp(a.unit.as_str(), b.unit.as_str()))
    });
    let mut seen = std::collections::BTreeSet::new();
    for s in &items {
        if !seen.insert(&s.unit) {
            return Err(RankingError::DuplicateUnit(s.unit.clone()));
        }
    }

    let n = items.len();
    let mut tie_groups = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && items[end].score == items[start].score {
            end += 1;
        }
        if end - start > 1 {
            tie_groups.push(items[start..end].iter().map(|s| s.unit.clone()).collect());
        }
        start = end;
    }

    let entries = items
        .into_iter()
        .enumerate()
        .map(|(i, s)| RankedEntry {
            unit: s.unit,
            score: s.score,
            rank: i + 1,
            percentile: percentile(i + 1, n).unwrap_or(100.0),
            staff: s.staff,
        })
        .collect();
    Ok(RankedList {
        label: label.into(),
        entries,
        tie_groups,
        degenerate: n < 2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Standing {
    pub score: f64,
    pub rank: usize,
    pub percentile: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub unit: UniversityId,
    pub staff: Option<usize>,
    pub fss: Standing,
    pub mncs: Standing,
    /// `rank_fss − rank_mncs`; positive when the unit improves under MNCS.
    pub rank_shift: i64,
    /// `percentile_mncs − percentile_fss`.
    pub percentile_shift: f64,
    pub quartile_fss: u8,
    pub quartile_mncs: u8,
}

impl ComparisonRow {
    pub fn quartile_shift(&self) -> i8 {
        self.quartile_fss as i8 - self.quartile_mncs as i8
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub label: String,
    /// Sorted by FSS rank.
    pub rows: Vec<ComparisonRow>,
    /// Tie groups of the two rankings, FSS first.
    pub ties: (Vec<Vec<UniversityId>>, Vec<Vec<UniversityId>>),
}

impl ComparisonTable {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn fss_scores(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.fss.score).collect()
    }

    pub fn mncs_scores(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mncs.score).collect()
    }
}

/// Pairs the two rankings of the same population unit by unit.
pub fn compare(fss: &RankedList, mncs: &RankedList) -> Result<ComparisonTable, RankingError> {
    let by_unit: BTreeMap<&UniversityId, &RankedEntry> = mncs.entries.iter().map(|e| (&e.unit, e)).collect();
    let only_fss: Vec<UniversityId> = fss
        .entries
        .iter()
        .filter(|e| !by_unit.contains_key(&e.unit))
        .map(|e| e.unit.clone())
        .collect();
    let fss_units: std::collections::BTreeSet<&UniversityId> = fss.entries.iter().map(|e| &e.unit).collect();
    let only_mncs: Vec<UniversityId> = mncs
        .entries
        .iter()
        .filter(|e| !fss_units.contains(&e.unit))
        .map(|e| e.unit.clone())
        .collect();
    if !only_fss.is_empty() || !only_mncs.is_empty() {
        return Err(RankingError::UnitSetMismatch { only_fss, only_mncs });
    }
    let n = fss.len();
    let step = if n > 1 { 100.0 / (n - 1) as f64 } else { 0.0 };
    let rows = fss
        .entries
        .iter()
        .map(|f| {
            let m = by_unit[&f.unit];
            let rank_shift = f.rank as i64 - m.rank as i64;
            ComparisonRow {
                unit: f.unit.clone(),
                staff: f.staff.or(m.staff),
                fss: Standing {
                    score: f.score,
                    rank: f.rank,
                    percentile: f.percentile,
                },
                mncs: Standing {
                    score: m.score,
                    rank: m.rank,
                    percentile: m.percentile,
                },
                rank_shift,
                // Exactly zero when ranks agree; computed from the shift so
                // rounding never flips its sign.
                percentile_shift: rank_shift as f64 * step,
                quartile_fss: quartile(f.rank, n),
                quartile_mncs: quartile(m.rank, n),
            }
        })
        .collect();
    Ok(ComparisonTable {
        label: fss.label.clone(),
        rows,
        ties: (fss.tie_groups.clone(), mncs.tie_groups.clone()),
    })
}

/// Rounds half away from zero to `decimals` places.
pub fn round_half_away(x: f64, decimals: u32) -> f64 {
    let f = 10f64.powi(decimals as i32);
    (x * f).round() / f
}

/// `↑k` for units improving under MNCS, `↓k` for those losing, `=` otherwise.
pub fn format_rank_shift(shift: i64) -> String {
    match shift.cmp(&0) {
        Ordering::Greater => format!("↑{shift}"),
        Ordering::Less => format!("↓{}", -shift),
        Ordering::Equal => "=".to_owned(),
    }
}

/// Signed one-decimal percentile shift: `+14.3`, `-10.7`, `0.0`.
pub fn format_percentile_shift(shift: f64) -> String {
    let r = round_half_away(shift, 1);
    if r > 0.0 {
        format!("+{r:.1}")
    } else if r < 0.0 {
        format!("{r:.1}")
    } else {
        "0.0".to_owned()
    }
}
