//! FSS and MNCS at professor and unit level, and per-scope scoreboards.
//!
//! FSS of a professor is the salary- and time-normalized sum of
//! `(c / c̄) · (1 / n)` over their publications. A unit's FSS is the mean,
//! over its in-scope staff, of each professor's FSS divided by the national
//! mean FSS of the productive professors of that professor's own SDS.
//!
//! MNCS of a unit is the mean of `c / c̄` over its publications, weighted by
//! `m / n` where `m` counts the unit's in-scope professors among the
//! authors.

use std::collections::BTreeMap;
use std::fmt;

use log::{debug, warn};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{normalized_impact, BaselineError, ScalingFactorTable};
use crate::corpus::{
    eligible_units, Corpus, CorpusError, FilterConfig, Level, Professor, SalaryTable, Scope,
    UnitId,
};
use crate::ids::{ProfessorId, PubId, SdsCode, UniversityId};

#[derive(Debug, Error)]
pub enum IndicatorError {
    #[error("professor `{professor}` has rank `{rank}` with no salary")]
    MissingSalary { professor: ProfessorId, rank: String },
    #[error("professor `{professor}` has non-positive years on staff ({years})")]
    NonPositiveTenure { professor: ProfessorId, years: f64 },
    #[error("SDS `{0}` has no productive professor nationally")]
    NoProductiveProfessors(SdsCode),
    #[error("{university} in {scope} has no professor with a defined SDS standard")]
    NoStandardizableStaff { university: UniversityId, scope: Scope },
    #[error("{university} in {scope} has no normalizable publication")]
    NoPublications { university: UniversityId, scope: Scope },
    #[error("{scope} is not rankable: {units} unit(s), {required} required")]
    ScopeNotRankable {
        scope: Scope,
        units: usize,
        required: usize,
    },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Indicator {
    Fss,
    Mncs,
}

impl Indicator {
    pub fn as_str(self) -> &'static str {
        match self {
            Indicator::Fss => "FSS",
            Indicator::Mncs => "MNCS",
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfessorScore {
    pub professor_id: ProfessorId,
    pub fss_p: f64,
    /// Publications entering the sum.
    pub term_count: usize,
    /// Publications left out because a baseline cell is missing.
    pub missing_baseline: usize,
    pub years_on_staff: f64,
    pub salary: f64,
}

/// FSS of one professor over their in-window, normalizable publications.
pub fn fss_professor(
    professor: &Professor,
    corpus: &Corpus,
    table: &ScalingFactorTable,
    salaries: &SalaryTable,
) -> Result<ProfessorScore, IndicatorError> {
    let salary = salaries
        .get(&professor.academic_rank)
        .ok_or_else(|| IndicatorError::MissingSalary {
            professor: professor.professor_id.clone(),
            rank: professor.academic_rank.to_string(),
        })?;
    let t = professor.years_on_staff;
    if t.is_nan() || t <= 0.0 {
        return Err(IndicatorError::NonPositiveTenure {
            professor: professor.professor_id.clone(),
            years: t,
        });
    }
    let mut sum = 0.0;
    let mut term_count = 0;
    let mut missing_baseline = 0;
    for pub_id in corpus.publications_of(&professor.professor_id) {
        let Some(p) = corpus.publication(pub_id) else { continue };
        if !corpus.window().contains(p.year) {
            continue;
        }
        match normalized_impact(p, table) {
            Ok(impact) => {
                sum += impact / f64::from(p.n_authors_total);
                term_count += 1;
            }
            Err(BaselineError::MissingBaseline { .. }) => missing_baseline += 1,
            Err(e) => unreachable!("normalized_impact only fails on missing baselines: {e}"),
        }
    }
    Ok(ProfessorScore {
        professor_id: professor.professor_id.clone(),
        fss_p: sum / (salary * t),
        term_count,
        missing_baseline,
        years_on_staff: t,
        salary,
    })
}

/// FSS of every professor in the corpus.
#[derive(Debug, Clone, Default)]
pub struct ProfessorScores(BTreeMap<ProfessorId, ProfessorScore>);

impl ProfessorScores {
    pub fn compute(corpus: &Corpus, table: &ScalingFactorTable) -> Result<Self, IndicatorError> {
        let mut map = BTreeMap::new();
        for p in corpus.professors() {
            let score = fss_professor(p, corpus, table, corpus.salaries())?;
            if score.missing_baseline > 0 {
                debug!(
                    "{}: {} publication(s) without baseline skipped",
                    p.professor_id, score.missing_baseline
                );
            }
            map.insert(p.professor_id.clone(), score);
        }
        Ok(Self(map))
    }

    pub fn get(&self, id: &ProfessorId) -> Option<&ProfessorScore> {
        self.0.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ProfessorScore> {
        self.0.values()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// National mean FSS over the productive (`fss_p > 0`) professors of an SDS.
pub fn sds_average_fss(
    corpus: &Corpus,
    sds: &SdsCode,
    scores: &ProfessorScores,
) -> Result<f64, IndicatorError> {
    let (sum, n) = corpus
        .professors()
        .filter(|p| &p.sds_code == sds)
        .filter_map(|p| scores.get(&p.professor_id))
        .filter(|s| s.fss_p > 0.0)
        .fold((0.0, 0usize), |(sum, n), s| (sum + s.fss_p, n + 1));
    if n == 0 {
        return Err(IndicatorError::NoProductiveProfessors(sds.clone()));
    }
    Ok(sum / n as f64)
}

/// SDS → national mean productive FSS, the divisor standardizing each
/// professor before averaging into a unit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FssStandards(BTreeMap<SdsCode, f64>);

impl FssStandards {
    /// Standards for every SDS of the field scheme that has a productive
    /// professor.
    pub fn national(corpus: &Corpus, scores: &ProfessorScores) -> Self {
        let mut map = BTreeMap::new();
        for sds in corpus.fields().sds_codes() {
            match sds_average_fss(corpus, sds, scores) {
                Ok(avg) => {
                    map.insert(sds.clone(), avg);
                }
                Err(e) => {
                    if corpus.professors().any(|p| &p.sds_code == sds) {
                        warn!("{e}; its professors are left out of FSS units");
                    }
                }
            }
        }
        Self(map)
    }

    pub fn get(&self, sds: &SdsCode) -> Option<f64> {
        self.0.get(sds).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SdsCode, f64)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }
}

/// Denominator of a unit score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Denominator {
    /// Research staff entering the FSS mean.
    ResearchStaff(usize),
    /// `Σ m / n` over the unit's publications.
    PublicationWeight(f64),
}

impl Denominator {
    pub fn value(&self) -> f64 {
        match *self {
            Denominator::ResearchStaff(n) => n as f64,
            Denominator::PublicationWeight(w) => w,
        }
    }
}

impl fmt::Display for Denominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Denominator::ResearchStaff(n) => write!(f, "{n}"),
            Denominator::PublicationWeight(w) => write!(f, "{w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitScore {
    pub unit: UnitId,
    pub indicator: Indicator,
    pub score: f64,
    pub denominator: Denominator,
    /// In-scope headcount after filtering.
    pub headcount: usize,
    /// Professors (FSS) or publications (MNCS) left out of the score.
    pub dropped: usize,
}

/// FSS of a set of professors making up one unit.
fn fss_of_staff<'a>(
    unit: UnitId,
    staff: impl Iterator<Item = &'a Professor>,
    scores: &ProfessorScores,
    standards: &FssStandards,
) -> Result<UnitScore, IndicatorError> {
    let mut sum = 0.0;
    let mut rs = 0usize;
    let mut headcount = 0usize;
    for p in staff {
        headcount += 1;
        let (Some(s), Some(std)) = (scores.get(&p.professor_id), standards.get(&p.sds_code)) else {
            continue;
        };
        sum += s.fss_p / std;
        rs += 1;
    }
    if rs == 0 {
        return Err(IndicatorError::NoStandardizableStaff {
            university: unit.university,
            scope: unit.scope,
        });
    }
    Ok(UnitScore {
        unit,
        indicator: Indicator::Fss,
        score: sum / rs as f64,
        denominator: Denominator::ResearchStaff(rs),
        headcount,
        dropped: headcount - rs,
    })
}

/// FSS of a university within a scope. Professors whose SDS has no
/// productive member nationally count neither in the sum nor in the staff.
pub fn fss_unit(
    university: &UniversityId,
    scope: &Scope,
    corpus: &Corpus,
    scores: &ProfessorScores,
    standards: &FssStandards,
) -> Result<UnitScore, IndicatorError> {
    corpus.check_scope(scope)?;
    let unit = UnitId {
        university: university.clone(),
        scope: scope.clone(),
    };
    fss_of_staff(unit, corpus.professors_in_scope(university, scope), scores, standards)
}

/// MNCS of a university within a scope. Uncited publications keep their
/// weight in the denominator; publications without a baseline are dropped.
pub fn mncs_unit(
    university: &UniversityId,
    scope: &Scope,
    corpus: &Corpus,
    table: &ScalingFactorTable,
) -> Result<UnitScore, IndicatorError> {
    corpus.check_scope(scope)?;
    let mut m: BTreeMap<&PubId, u32> = BTreeMap::new();
    let mut headcount = 0;
    for p in corpus.professors_in_scope(university, scope) {
        headcount += 1;
        for pub_id in corpus.publications_of(&p.professor_id) {
            *m.entry(pub_id).or_default() += 1;
        }
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let mut dropped = 0;
    for (pub_id, m_i) in m {
        let Some(p) = corpus.publication(pub_id) else { continue };
        if !corpus.window().contains(p.year) {
            continue;
        }
        let Ok(impact) = normalized_impact(p, table) else {
            dropped += 1;
            continue;
        };
        let weight = f64::from(m_i) / f64::from(p.n_authors_total);
        num += impact * weight;
        den += weight;
    }
    if den.is_nan() || den <= 0.0 {
        return Err(IndicatorError::NoPublications {
            university: university.clone(),
            scope: scope.clone(),
        });
    }
    Ok(UnitScore {
        unit: UnitId {
            university: university.clone(),
            scope: scope.clone(),
        },
        indicator: Indicator::Mncs,
        score: num / den,
        denominator: Denominator::PublicationWeight(den),
        headcount,
        dropped,
    })
}

/// What a scoreboard was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub corpus_digest: String,
    pub baseline_digest: String,
    pub config: FilterConfig,
}

/// Unit scores for one (indicator, scope) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreBoard {
    pub scope: Scope,
    pub indicator: Indicator,
    /// Sorted by university id.
    pub scores: Vec<UnitScore>,
    pub provenance: Provenance,
}

impl ScoreBoard {
    pub fn level(&self) -> Level {
        self.scope.level()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.scores.iter().map(|s| s.score).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DroppedUnit {
    pub unit: UnitId,
    pub indicator: Indicator,
    pub reason: String,
}

/// FSS and MNCS boards of one scope over the same unit set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScopeBoards {
    pub scope: Scope,
    pub fss: ScoreBoard,
    pub mncs: ScoreBoard,
    /// Eligible units left out because one of the indicators is undefined.
    pub dropped: Vec<DroppedUnit>,
}

impl ScopeBoards {
    pub fn board(&self, indicator: Indicator) -> &ScoreBoard {
        match indicator {
            Indicator::Fss => &self.fss,
            Indicator::Mncs => &self.mncs,
        }
    }
}

/// Everything unit scoring needs, computed once per corpus.
#[derive(Debug, Clone)]
pub struct ScoringContext<'a> {
    pub corpus: &'a Corpus,
    pub table: &'a ScalingFactorTable,
    pub scores: ProfessorScores,
    pub standards: FssStandards,
    pub provenance: Provenance,
}

impl<'a> ScoringContext<'a> {
    pub fn new(
        corpus: &'a Corpus,
        table: &'a ScalingFactorTable,
        cfg: &FilterConfig,
    ) -> Result<Self, IndicatorError> {
        let scores = ProfessorScores::compute(corpus, table)?;
        let standards = FssStandards::national(corpus, &scores);
        Ok(Self::with_standards(corpus, table, cfg, scores, standards))
    }

    /// Uses caller-supplied SDS standards instead of the corpus' own.
    pub fn with_standards(
        corpus: &'a Corpus,
        table: &'a ScalingFactorTable,
        cfg: &FilterConfig,
        scores: ProfessorScores,
        standards: FssStandards,
    ) -> Self {
        let provenance = Provenance {
            corpus_digest: corpus.digest(),
            baseline_digest: table.digest(),
            config: cfg.clone(),
        };
        Self {
            corpus,
            table,
            scores,
            standards,
            provenance,
        }
    }

    pub fn fss_unit(&self, university: &UniversityId, scope: &Scope) -> Result<UnitScore, IndicatorError> {
        fss_unit(university, scope, self.corpus, &self.scores, &self.standards)
    }

    pub fn mncs_unit(&self, university: &UniversityId, scope: &Scope) -> Result<UnitScore, IndicatorError> {
        mncs_unit(university, scope, self.corpus, self.table)
    }

    /// Both boards of one scope, restricted to units that have both scores.
    pub fn score_scope(&self, scope: &Scope, cfg: &FilterConfig) -> Result<ScopeBoards, IndicatorError> {
        let eligible = eligible_units(self.corpus, scope, cfg)?;
        let required = match scope.level() {
            Level::Sds => cfg.min_units_to_rank.max(1),
            Level::Uda | Level::Overall => 1,
        };
        let not_rankable = |units: usize| IndicatorError::ScopeNotRankable {
            scope: scope.clone(),
            units,
            required,
        };
        if !eligible.rankable {
            return Err(not_rankable(eligible.units.len()));
        }
        let mut fss = Vec::new();
        let mut mncs = Vec::new();
        let mut dropped = Vec::new();
        for (unit, _) in &eligible.units {
            let f = self.fss_unit(&unit.university, scope);
            let m = self.mncs_unit(&unit.university, scope);
            match (f, m) {
                (Ok(f), Ok(m)) => {
                    fss.push(f);
                    mncs.push(m);
                }
                (f, m) => {
                    for (indicator, err) in [(Indicator::Fss, f.err()), (Indicator::Mncs, m.err())] {
                        if let Some(err) = err {
                            warn!("dropping {} from {scope}: {err}", unit.university);
                            dropped.push(DroppedUnit {
                                unit: unit.clone(),
                                indicator,
                                reason: err.to_string(),
                            });
                        }
                    }
                }
            }
        }
        if fss.len() < required {
            return Err(not_rankable(fss.len()));
        }
        let board = |indicator, scores| ScoreBoard {
            scope: scope.clone(),
            indicator,
            scores,
            provenance: self.provenance.clone(),
        };
        Ok(ScopeBoards {
            scope: scope.clone(),
            fss: board(Indicator::Fss, fss),
            mncs: board(Indicator::Mncs, mncs),
            dropped,
        })
    }

    /// Boards for every scope of a level; unrankable scopes are listed, not fatal.
    pub fn score_level(&self, level: Level, cfg: &FilterConfig) -> Result<LevelScores, IndicatorError> {
        let mut boards = Vec::new();
        let mut not_rankable = Vec::new();
        for scope in self.corpus.scopes(level) {
            match self.score_scope(&scope, cfg) {
                Ok(b) => boards.push(b),
                Err(e @ IndicatorError::ScopeNotRankable { .. }) => {
                    debug!("{e}");
                    not_rankable.push(NotRankable {
                        scope,
                        reason: e.to_string(),
                    });
                }
                Err(e) => return Err(e),
            }
        }
        Ok(LevelScores {
            level,
            boards,
            not_rankable,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NotRankable {
    pub scope: Scope,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelScores {
    pub level: Level,
    pub boards: Vec<ScopeBoards>,
    pub not_rankable: Vec<NotRankable>,
}

/// Boards of all scopes of `level` for a freshly built context.
pub fn score_level(
    corpus: &Corpus,
    table: &ScalingFactorTable,
    level: Level,
    cfg: &FilterConfig,
) -> Result<LevelScores, IndicatorError> {
    ScoringContext::new(corpus, table, cfg)?.score_level(level, cfg)
}

/// One indicator's board for a single scope.
pub fn scoreboard(
    corpus: &Corpus,
    table: &ScalingFactorTable,
    indicator: Indicator,
    scope: &Scope,
    cfg: &FilterConfig,
) -> Result<ScoreBoard, IndicatorError> {
    let boards = ScoringContext::new(corpus, table, cfg)?.score_scope(scope, cfg)?;
    Ok(match indicator {
        Indicator::Fss => boards.fss,
        Indicator::Mncs => boards.mncs,
    })
}
