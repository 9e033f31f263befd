//! CSV exports, the score-replay reader, and the markdown report.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divergence::{DispersionStats, DivergenceSummary, MinMax, QuartileSummary, RangeSummary};
use crate::ids::UniversityId;
use crate::indicators::{ScopeBoards, ScoreBoard};
use crate::ranking::{
    compare, format_percentile_shift, format_rank_shift, rank_scores, round_half_away, ComparisonTable,
    RankingError, ScoredUnit,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("scores file line {line}: {message}")]
    Replay { line: u64, message: String },
    #[error(transparent)]
    Ranking(#[from] RankingError),
}

#[derive(Serialize)]
struct ScoreRow<'a> {
    level: &'a str,
    scope_code: &'a str,
    university_id: &'a str,
    indicator: &'a str,
    score: f64,
    research_staff_or_weight: f64,
}

/// Long-format scoreboard rows, one per (unit, indicator).
pub fn write_scoreboards<W: Write>(boards: &[&ScoreBoard], writer: W) -> Result<(), ReportError> {
    // Header written by hand so an empty board still has one.
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record([
        "level",
        "scope_code",
        "university_id",
        "indicator",
        "score",
        "research_staff_or_weight",
    ])?;
    for board in boards {
        for s in &board.scores {
            w.serialize(ScoreRow {
                level: board.level().as_str(),
                scope_code: board.scope.code(),
                university_id: s.unit.university.as_str(),
                indicator: board.indicator.as_str(),
                score: s.score,
                research_staff_or_weight: s.denominator.value(),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One row per unit with both scores; readable by [`read_replay`].
pub fn write_wide_scores<W: Write>(boards: &ScopeBoards, writer: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["unit", "staff", "fss_score", "mncs_score"])?;
    for (f, m) in boards.fss.scores.iter().zip(&boards.mncs.scores) {
        debug_assert_eq!(f.unit, m.unit);
        w.serialize((f.unit.university.as_str(), f.headcount, f.score, m.score))?;
    }
    w.flush()?;
    Ok(())
}

/// A row of a pre-scored file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReplayRow {
    #[serde(alias = "university", alias = "university_id")]
    pub unit: UniversityId,
    pub fss_score: f64,
    pub mncs_score: f64,
    #[serde(default)]
    pub staff: Option<usize>,
    /// Order among exactly tied FSS scores (lower first).
    #[serde(default)]
    pub fss_tiebreak: Option<i64>,
    #[serde(default)]
    pub mncs_tiebreak: Option<i64>,
}

/// Reads `unit,fss_score,mncs_score[,staff,fss_tiebreak,mncs_tiebreak]`.
pub fn read_replay<R: Read>(reader: R) -> Result<Vec<ReplayRow>, ReportError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut rows = Vec::new();
    let mut record = csv::StringRecord::new();
    while rdr.read_record(&mut record)? {
        let line = record.position().map_or(0, |p| p.line());
        let row: ReplayRow = record
            .deserialize(Some(&headers))
            .map_err(|e| ReportError::Replay {
                line,
                message: e.to_string(),
            })?;
        if !(row.fss_score.is_finite() && row.mncs_score.is_finite()) {
            return Err(ReportError::Replay {
                line,
                message: "scores must be finite".into(),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ReportError::Replay {
            line: 1,
            message: "no score rows".into(),
        });
    }
    Ok(rows)
}

/// Ranks both columns of a replay file and pairs them.
pub fn compare_replay(label: &str, rows: &[ReplayRow]) -> Result<ComparisonTable, ReportError> {
    let column = |score: fn(&ReplayRow) -> f64, hint: fn(&ReplayRow) -> Option<i64>| {
        rows.iter()
            .map(|r| ScoredUnit {
                unit: r.unit.clone(),
                score: score(r),
                staff: r.staff,
                tiebreak: hint(r),
            })
            .collect::<Vec<_>>()
    };
    let fss = rank_scores(label, column(|r| r.fss_score, |r| r.fss_tiebreak))?;
    let mncs = rank_scores(label, column(|r| r.mncs_score, |r| r.mncs_tiebreak))?;
    Ok(compare(&fss, &mncs)?)
}

#[derive(Serialize)]
struct ComparisonCsvRow<'a> {
    university: &'a str,
    staff: Option<usize>,
    fss_score: f64,
    fss_rank: usize,
    fss_pct: f64,
    mncs_score: f64,
    mncs_rank: usize,
    mncs_pct: f64,
    rank_shift: i64,
    pct_shift: f64,
    q_fss: u8,
    q_mncs: u8,
}

/// The comparison table in FSS rank order; doubles as scatter-plot data.
pub fn write_comparison<W: Write>(cmp: &ComparisonTable, writer: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in &cmp.rows {
        w.serialize(ComparisonCsvRow {
            university: r.unit.as_str(),
            staff: r.staff,
            fss_score: r.fss.score,
            fss_rank: r.fss.rank,
            fss_pct: r.fss.percentile,
            mncs_score: r.mncs.score,
            mncs_rank: r.mncs.rank,
            mncs_pct: r.mncs.percentile,
            rank_shift: r.rank_shift,
            pct_shift: r.percentile_shift,
            q_fss: r.quartile_fss,
            q_mncs: r.quartile_mncs,
        })?;
    }
    w.flush()?;
    Ok(())
}

fn write_rows<W: Write, T: Serialize>(rows: &[T], writer: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_shift_summaries<W: Write>(rows: &[DivergenceSummary], writer: W) -> Result<(), ReportError> {
    write_rows(rows, writer)
}

pub fn write_quartile_summaries<W: Write>(rows: &[QuartileSummary], writer: W) -> Result<(), ReportError> {
    write_rows(rows, writer)
}

pub fn write_dispersion<W: Write>(rows: &[DispersionStats], writer: W) -> Result<(), ReportError> {
    write_rows(rows, writer)
}

#[derive(Serialize)]
struct RangeCsvRow<'a> {
    uda: &'a str,
    n_sds: usize,
    pct_shifting_min: f64,
    pct_shifting_max: f64,
    mean_abs_shift_min: f64,
    mean_abs_shift_max: f64,
    mean_pct_shift_min: f64,
    mean_pct_shift_max: f64,
    median_abs_shift_min: f64,
    median_abs_shift_max: f64,
    max_abs_shift_min: f64,
    max_abs_shift_max: f64,
    max_pct_shift_min: f64,
    max_pct_shift_max: f64,
    pearson_min: Option<f64>,
    pearson_max: Option<f64>,
    spearman_min: Option<f64>,
    spearman_max: Option<f64>,
}

pub fn write_ranges<W: Write>(rows: &[RangeSummary], writer: W) -> Result<(), ReportError> {
    let flat: Vec<_> = rows
        .iter()
        .map(|r| RangeCsvRow {
            uda: r.uda.as_str(),
            n_sds: r.n_sds,
            pct_shifting_min: r.pct_shifting_rank.min,
            pct_shifting_max: r.pct_shifting_rank.max,
            mean_abs_shift_min: r.mean_abs_shift.min,
            mean_abs_shift_max: r.mean_abs_shift.max,
            mean_pct_shift_min: r.mean_pct_shift.min,
            mean_pct_shift_max: r.mean_pct_shift.max,
            median_abs_shift_min: r.median_abs_shift.min,
            median_abs_shift_max: r.median_abs_shift.max,
            max_abs_shift_min: r.max_abs_shift.min,
            max_abs_shift_max: r.max_abs_shift.max,
            max_pct_shift_min: r.max_pct_shift.min,
            max_pct_shift_max: r.max_pct_shift.max,
            pearson_min: r.pearson.map(|m| m.min),
            pearson_max: r.pearson.map(|m| m.max),
            spearman_min: r.spearman.map(|m| m.min),
            spearman_max: r.spearman.map(|m| m.max),
        })
        .collect();
    write_rows(&flat, writer)
}

fn opt3(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_owned(), |x| format!("{:.3}", round_half_away(x, 3)))
}

fn range1(m: &MinMax) -> String {
    format!("({:.1}-{:.1})", m.min, m.max)
}

/// Everything the markdown report shows for one scope.
#[derive(Debug, Clone)]
pub struct ScopeReport<'a> {
    pub comparison: &'a ComparisonTable,
    pub shifts: &'a DivergenceSummary,
    pub quartiles: &'a QuartileSummary,
    pub dispersion: &'a [DispersionStats],
}

/// Markdown with one ranking table per scope, then summary tables.
pub fn render_markdown(title: &str, scopes: &[ScopeReport<'_>], ranges: &[RangeSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {title}\n");
    for s in scopes {
        let c = s.comparison;
        let _ = writeln!(out, "## {}\n", c.label);
        let _ = writeln!(
            out,
            "| University | FSS score | FSS rank | FSS pct | MNCS score | MNCS rank | MNCS pct | Rank shift | Pct shift |"
        );
        let _ = writeln!(out, "|---|---:|---:|---:|---:|---:|---:|:---:|---:|");
        for r in &c.rows {
            let _ = writeln!(
                out,
                "| {} | {:.3} | {} | {:.1} | {:.3} | {} | {:.1} | {} | {} |",
                r.unit,
                round_half_away(r.fss.score, 3),
                r.fss.rank,
                round_half_away(r.fss.percentile, 1),
                round_half_away(r.mncs.score, 3),
                r.mncs.rank,
                round_half_away(r.mncs.percentile, 1),
                format_rank_shift(r.rank_shift),
                format_percentile_shift(r.percentile_shift),
            );
        }
        let d = s.shifts;
        let q = s.quartiles;
        let _ = writeln!(
            out,
            "\n| Units | % shifting rank | Mean shift | Median shift | Max shift | Pearson | Spearman |"
        );
        let _ = writeln!(out, "|---:|---:|---|---|---|---:|---:|");
        let _ = writeln!(
            out,
            "| {} | {:.1}% | {:.1} ({:.1}) | {:.1} ({:.1}) | {} ({:.1}) | {} | {} |",
            d.n_units,
            d.pct_shifting_rank,
            d.mean_abs_shift,
            d.mean_pct_shift,
            d.median_abs_shift,
            d.median_pct_shift,
            d.max_abs_shift,
            d.max_pct_shift,
            opt3(d.pearson),
            opt3(d.spearman),
        );
        let _ = writeln!(
            out,
            "\n| Shifting quartile | Mean quartile shift | Max quartile shift | Leaving Q1 |"
        );
        let _ = writeln!(out, "|---:|---:|---:|---:|");
        let _ = writeln!(
            out,
            "| {:.1}% | {:.1} | {} | {:.1}% |",
            q.pct_shifting_quartile, q.mean_abs_quartile_shift, q.max_quartile_shift, q.pct_leaving_q1
        );
        if !s.dispersion.is_empty() {
            let _ = writeln!(out, "\n| Indicator | Mean | Std dev | CV |");
            let _ = writeln!(out, "|---|---:|---:|---:|");
            for x in s.dispersion {
                let _ = writeln!(
                    out,
                    "| {} | {:.3} | {:.3} | {:.3} |",
                    x.indicator, x.mean, x.std_dev, x.coefficient_of_variation
                );
            }
        }
        out.push('\n');
    }
    if !ranges.is_empty() {
        let _ = writeln!(out, "## Ranges across SDS (min-max)\n");
        let _ = writeln!(
            out,
            "| UDA | SDS | % shifting | Mean pct shift | Median shift | Max pct shift | Pearson | Spearman |"
        );
        let _ = writeln!(out, "|---|---:|---|---|---|---|---|---|");
        for r in ranges {
            let corr = |m: Option<MinMax>| {
                m.map_or_else(|| "n/a".to_owned(), |m| format!("({:.3}-{:.3})", m.min, m.max))
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} |",
                r.uda,
                r.n_sds,
                range1(&r.pct_shifting_rank),
                range1(&r.mean_pct_shift),
                range1(&r.median_abs_shift),
                range1(&r.max_pct_shift),
                corr(r.pearson),
                corr(r.spearman),
            );
        }
    }
    out
}
