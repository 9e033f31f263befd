//! How far the FSS and MNCS rankings disagree: correlations, rank-shift
//! statistics, quartile migration, score dispersion, and min–max ranges of
//! the SDS-level statistics within a discipline.

use log::warn;
use serde::Serialize;
use thiserror::Error;

use crate::ids::UdaCode;
use crate::indicators::{Indicator, ScoreBoard};
use crate::ranking::ComparisonTable;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("a series has zero variance")]
    DegenerateVariance,
    #[error("mean is zero; coefficient of variation undefined")]
    ZeroMean,
    #[error("no rankable SDS in UDA `{0}`")]
    NoRankableSds(UdaCode),
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Median of a non-empty slice; the mean of the two middle values when the
/// length is even.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Sample Pearson correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 3 {
        return Err(StatsError::TooFewValues {
            needed: 3,
            got: xs.len(),
        });
    }
    let mx = mean(xs);
    let my = mean(ys);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::DegenerateVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ascending ranks; tied values share the mean of their positions.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && xs[idx[j]] == xs[idx[i]] {
            j += 1;
        }
        // Positions i+1 ..= j share their mean.
        let r = (i + 1 + j) as f64 / 2.0;
        for &k in &idx[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Spearman correlation: Pearson of the average-rank vectors.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// Rank-shift statistics of one comparison (one row of a shift table).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceSummary {
    pub label: String,
    pub n_units: usize,
    pub pct_shifting_rank: f64,
    pub mean_abs_shift: f64,
    pub median_abs_shift: f64,
    pub max_abs_shift: u64,
    pub mean_pct_shift: f64,
    pub median_pct_shift: f64,
    pub max_pct_shift: f64,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
}

/// Shift statistics over absolute rank shifts, non-shifting units included.
/// Correlations are left empty (with a warning) for fewer than three units
/// or a constant score column.
pub fn shift_stats(cmp: &ComparisonTable) -> DivergenceSummary {
    let n = cmp.n();
    let abs: Vec<f64> = cmp.rows.iter().map(|r| r.rank_shift.unsigned_abs() as f64).collect();
    let shifting = cmp.rows.iter().filter(|r| r.rank_shift != 0).count();
    let step = if n > 1 { 100.0 / (n - 1) as f64 } else { 0.0 };
    let (mean_abs, median_abs, max_abs) = if n == 0 {
        (0.0, 0.0, 0)
    } else {
        (
            mean(&abs),
            median(&abs),
            cmp.rows.iter().map(|r| r.rank_shift.unsigned_abs()).max().unwrap_or(0),
        )
    };
    let fss = cmp.fss_scores();
    let mncs = cmp.mncs_scores();
    let correlation = |name: &str, r: Result<f64, StatsError>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            warn!("{}: {name} omitted: {e}", cmp.label);
            None
        }
    };
    DivergenceSummary {
        label: cmp.label.clone(),
        n_units: n,
        pct_shifting_rank: if n == 0 { 0.0 } else { 100.0 * shifting as f64 / n as f64 },
        mean_abs_shift: mean_abs,
        median_abs_shift: median_abs,
        max_abs_shift: max_abs,
        mean_pct_shift: mean_abs * step,
        median_pct_shift: median_abs * step,
        max_pct_shift: max_abs as f64 * step,
        pearson: correlation("Pearson", pearson(&fss, &mncs)),
        spearman: correlation("Spearman", spearman(&fss, &mncs)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuartileSummary {
    pub label: String,
    pub n_units: usize,
    pub pct_shifting_quartile: f64,
    pub mean_abs_quartile_shift: f64,
    pub max_quartile_shift: u8,
    /// Share of FSS top-quartile units not in the MNCS top quartile.
    pub pct_leaving_q1: f64,
}

pub fn quartile_stats(cmp: &ComparisonTable) -> QuartileSummary {
    let n = cmp.n();
    let shifts: Vec<u8> = cmp
        .rows
        .iter()
        .map(|r| r.quartile_fss.abs_diff(r.quartile_mncs))
        .collect();
    let shifting = shifts.iter().filter(|&&s| s != 0).count();
    let q1: Vec<_> = cmp.rows.iter().filter(|r| r.quartile_fss == 1).collect();
    let leaving = q1.iter().filter(|r| r.quartile_mncs != 1).count();
    let pct = |k: usize, d: usize| if d == 0 { 0.0 } else { 100.0 * k as f64 / d as f64 };
    QuartileSummary {
        label: cmp.label.clone(),
        n_units: n,
        pct_shifting_quartile: pct(shifting, n),
        mean_abs_quartile_shift: if n == 0 {
            0.0
        } else {
            shifts.iter().map(|&s| f64::from(s)).sum::<f64>() / n as f64
        },
        max_quartile_shift: shifts.iter().copied().max().unwrap_or(0),
        pct_leaving_q1: pct(leaving, q1.len()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionStats {
    pub label: String,
    pub indicator: Indicator,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub std_dev: f64,
    pub coefficient_of_variation: f64,
}

pub fn dispersion(board: &ScoreBoard) -> Result<DispersionStats, StatsError> {
    dispersion_of(board.scope.code(), board.indicator, &board.values())
}

/// Mean, sample standard deviation and coefficient of variation of a score
/// column.
pub fn dispersion_of(label: &str, indicator: Indicator, values: &[f64]) -> Result<DispersionStats, StatsError> {
    if values.len() < 2 {
        return Err(StatsError::TooFewValues {
            needed: 2,
            got: values.len(),
        });
    }
    let m = mean(values);
    if m == 0.0 {
        return Err(StatsError::ZeroMean);
    }
    let ss: f64 = values.iter().map(|v| (v - m).powi(2)).sum();
    let sd = (ss / (values.len() - 1) as f64).sqrt();
    Ok(DispersionStats {
        label: label.to_owned(),
        indicator,
        mean: m,
        std_dev: sd,
        coefficient_of_variation: sd / m.abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinMax {
    pub min: f64,
    pub max: f64,
}

impl MinMax {
    fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        values.into_iter().fold(None, |acc, v| {
            Some(match acc {
                None => MinMax { min: v, max: v },
                Some(m) => MinMax {
                    min: m.min.min(v),
                    max: m.max.max(v),
                },
            })
        })
    }
}

/// Min–max of the SDS-level statistics of one discipline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeSummary {
    pub uda: UdaCode,
    pub n_sds: usize,
    pub pct_shifting_rank: MinMax,
    pub mean_abs_shift: MinMax,
    pub mean_pct_shift: MinMax,
    pub median_abs_shift: MinMax,
    pub max_abs_shift: MinMax,
    pub max_pct_shift: MinMax,
    /// `None` when no SDS had a defined correlation.
    pub pearson: Option<MinMax>,
    pub spearman: Option<MinMax>,
}

pub fn range_summary(per_sds: &[DivergenceSummary], uda: &UdaCode) -> Result<RangeSummary, StatsError> {
    if per_sds.is_empty() {
        return Err(StatsError::NoRankableSds(uda.clone()));
    }
    let range = |f: fn(&DivergenceSummary) -> f64| {
        MinMax::of(per_sds.iter().map(f)).expect("non-empty")
    };
    Ok(RangeSummary {
        uda: uda.clone(),
        n_sds: per_sds.len(),
        pct_shifting_rank: range(|s| s.pct_shifting_rank),
        mean_abs_shift: range(|s| s.mean_abs_shift),
        mean_pct_shift: range(|s| s.mean_pct_shift),
        median_abs_shift: range(|s| s.median_abs_shift),
        max_abs_shift: range(|s| s.max_abs_shift as f64),
        max_pct_shift: range(|s| s.max_pct_shift),
        pearson: MinMax::of(per_sds.iter().filter_map(|s| s.pearson)),
        spearman: MinMax::of(per_sds.iter().filter_map(|s| s.spearman)),
    })
}
