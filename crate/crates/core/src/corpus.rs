//! Publication / staff corpus: loading, validation, filtering and unit eligibility.
//!
//! A [`Corpus`] is a closed world: every authorship resolves to a publication
//! and a professor, every professor resolves to a field and a salary band.
//! It is immutable once built; filtering produces a new corpus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ids::{AcademicRank, CategoryCode, ProfessorId, PubId, SdsCode, UdaCode, UniversityId};

pub const PUBLICATIONS_FILE: &str = "publications.csv";
pub const AUTHORSHIPS_FILE: &str = "authorships.csv";
pub const PROFESSORS_FILE: &str = "professors.csv";
pub const FIELDS_FILE: &str = "fields.csv";
pub const SALARIES_FILE: &str = "salaries.csv";

const PUBLICATION_COLUMNS: &[&str] = &[
    "pub_id",
    "year",
    "doc_type",
    "subject_categories",
    "citations",
    "n_authors_total",
];
const AUTHORSHIP_COLUMNS: &[&str] = &["pub_id", "professor_id"];
const PROFESSOR_COLUMNS: &[&str] = &[
    "professor_id",
    "university_id",
    "sds_code",
    "academic_rank",
    "years_on_staff",
];
const FIELD_COLUMNS: &[&str] = &["sds_code", "sds_name", "uda_code", "uda_name"];
const SALARY_COLUMNS: &[&str] = &["academic_rank", "avg_yearly_salary"];

/// One problem found while loading or validating a corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub file: String,
    /// 1-based line in the source file (the header is line 1).
    pub line: Option<u64>,
    pub field: Option<String>,
    pub message: String,
}

impl Violation {
    fn new(file: &str, line: Option<u64>, field: Option<&str>, message: impl Into<String>) -> Self {
        Self {
            file: file.to_owned(),
            line,
            field: field.map(str::to_owned),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file)?;
        if let Some(line) = self.line {
            write!(f, ":{line}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " [{field}]")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("corpus is invalid ({} violation(s)); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
    #[error("unknown scope code `{0}`")]
    UnknownScope(String),
}

impl CorpusError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            CorpusError::Invalid(v) => v,
            _ => &[],
        }
    }
}

/// Inclusive range of publication years plus a label for the citation snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationWindow {
    pub start_year: i32,
    pub end_year: i32,
    #[serde(default)]
    pub citation_snapshot_label: String,
}

impl ObservationWindow {
    pub fn new(start_year: i32, end_year: i32) -> Self {
        Self {
            start_year,
            end_year,
            citation_snapshot_label: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.citation_snapshot_label = label.into();
        self
    }

    /// Window length in years; meaningful only when the window is valid.
    pub fn length_years(&self) -> f64 {
        f64::from(self.end_year - self.start_year + 1)
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start_year..=self.end_year).contains(&year)
    }

    pub fn validate(&self) -> Result<(), Violation> {
        if self.start_year > self.end_year {
            return Err(Violation::new(
                "config",
                None,
                Some("window"),
                format!(
                    "start_year {} is after end_year {}",
                    self.start_year, self.end_year
                ),
            ));
        }
        Ok(())
    }
}

impl Default for ObservationWindow {
    fn default() -> Self {
        Self::new(2008, 2012)
    }
}

/// Document type, normalized to lowercase words separated by single spaces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub struct DocType(String);

impl DocType {
    pub fn new(raw: &str) -> Self {
        let words: Vec<String> = raw
            .split(|c: char| c.is_whitespace() || c == '_')
            .filter(|w| !w.is_empty())
            .map(str::to_lowercase)
            .collect();
        Self(words.join(" "))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<String> for DocType {
    fn from(s: String) -> Self {
        Self::new(&s)
    }
}

impl From<DocType> for String {
    fn from(d: DocType) -> Self {
        d.0
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Publication {
    pub pub_id: PubId,
    pub year: i32,
    pub doc_type: DocType,
    pub subject_categories: Vec<CategoryCode>,
    pub citations: u32,
    /// All co-authors, national or not.
    pub n_authors_total: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Authorship {
    pub pub_id: PubId,
    pub professor_id: ProfessorId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Professor {
    pub professor_id: ProfessorId,
    pub university_id: UniversityId,
    pub sds_code: SdsCode,
    pub academic_rank: AcademicRank,
    /// Years worked within the observation window; may be fractional.
    pub years_on_staff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdsInfo {
    pub name: String,
    pub uda_code: UdaCode,
}

/// Two-level field classification: SDS codes grouped into UDA codes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FieldScheme {
    sds: BTreeMap<SdsCode, SdsInfo>,
    udas: BTreeMap<UdaCode, String>,
}

impl FieldScheme {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an SDS; fails if the code already exists or the UDA name disagrees
    /// with an earlier entry for the same UDA.
    pub fn insert(
        &mut self,
        sds_code: SdsCode,
        sds_name: impl Into<String>,
        uda_code: UdaCode,
        uda_name: impl Into<String>,
    ) -> Result<(), String> {
        if self.sds.contains_key(&sds_code) {
            return Err(format!("duplicate sds_code `{sds_code}`"));
        }
        let uda_name = uda_name.into();
        match self.udas.get(&uda_code) {
            Some(existing) if *existing != uda_name => {
                return Err(format!(
                    "uda_code `{uda_code}` named both `{existing}` and `{uda_name}`"
                ));
            }
            Some(_) => {}
            None => {
                self.udas.insert(uda_code.clone(), uda_name);
            }
        }
        self.sds.insert(
            sds_code,
            SdsInfo {
                name: sds_name.into(),
                uda_code,
            },
        );
        Ok(())
    }

    pub fn sds(&self, code: &SdsCode) -> Option<&SdsInfo> {
        self.sds.get(code)
    }

    pub fn uda_of(&self, code: &SdsCode) -> Option<&UdaCode> {
        self.sds.get(code).map(|s| &s.uda_code)
    }

    pub fn uda_name(&self, code: &UdaCode) -> Option<&str> {
        self.udas.get(code).map(String::as_str)
    }

    pub fn sds_codes(&self) -> impl Iterator<Item = &SdsCode> {
        self.sds.keys()
    }

    pub fn uda_codes(&self) -> impl Iterator<Item = &UdaCode> {
        self.udas.keys()
    }

    pub fn sds_in_uda<'a>(&'a self, uda: &'a UdaCode) -> impl Iterator<Item = &'a SdsCode> + 'a {
        self.sds
            .iter()
            .filter(move |(_, info)| &info.uda_code == uda)
            .map(|(code, _)| code)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SdsCode, &SdsInfo)> {
        self.sds.iter()
    }
}

/// Average yearly salary per academic rank.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SalaryTable(BTreeMap<AcademicRank, f64>);

impl SalaryTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, rank: AcademicRank, salary: f64) -> Result<(), String> {
        if !(salary.is_finite() && salary > 0.0) {
            return Err(format!("salary for `{rank}` must be positive, got {salary}"));
        }
        if self.0.contains_key(&rank) {
            return Err(format!("duplicate academic_rank `{rank}`"));
        }
        self.0.insert(rank, salary);
        Ok(())
    }

    pub fn get(&self, rank: &AcademicRank) -> Option<f64> {
        self.0.get(rank).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AcademicRank, f64)> {
        self.0.iter().map(|(r, s)| (r, *s))
    }

    /// Every salary multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self(self.0.iter().map(|(r, s)| (r.clone(), s * k)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub min_years_on_staff: f64,
    pub excluded_doc_types: BTreeSet<DocType>,
    pub min_professors_sds: usize,
    pub min_professors_uda: usize,
    pub min_professors_overall: usize,
    /// SDS-level only: scopes with fewer eligible universities are not ranked.
    pub min_units_to_rank: usize,
    /// Keep doc-type-excluded publications in the baseline population.
    pub baseline_include_all_doctypes: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            min_years_on_staff: 3.0,
            excluded_doc_types: ["editorial material", "meeting abstract", "reply"]
                .into_iter()
                .map(DocType::new)
                .collect(),
            min_professors_sds: 2,
            min_professors_uda: 10,
            min_professors_overall: 30,
            min_units_to_rank: 5,
            baseline_include_all_doctypes: false,
        }
    }
}

impl FilterConfig {
    /// A configuration that removes nothing and makes every university eligible.
    pub fn permissive() -> Self {
        Self {
            min_years_on_staff: 0.0,
            excluded_doc_types: BTreeSet::new(),
            min_professors_sds: 0,
            min_professors_uda: 0,
            min_professors_overall: 0,
            min_units_to_rank: 0,
            baseline_include_all_doctypes: false,
        }
    }

    pub fn min_professors(&self, level: Level) -> usize {
        match level {
            Level::Sds => self.min_professors_sds,
            Level::Uda => self.min_professors_uda,
            Level::Overall => self.min_professors_overall,
        }
    }

    pub fn validate(&self) -> Result<(), Violation> {
        if !(self.min_years_on_staff.is_finite() && self.min_years_on_staff >= 0.0) {
            return Err(Violation::new(
                "config",
                None,
                Some("min_years_on_staff"),
                "must be a non-negative number",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Sds,
    Uda,
    Overall,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Sds, Level::Uda, Level::Overall];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Sds => "SDS",
            Level::Uda => "UDA",
            Level::Overall => "OVERALL",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The population a university is measured in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    Sds(SdsCode),
    Uda(UdaCode),
    Overall,
}

impl Scope {
    pub fn level(&self) -> Level {
        match self {
            Scope::Sds(_) => Level::Sds,
            Scope::Uda(_) => Level::Uda,
            Scope::Overall => Level::Overall,
        }
    }

    pub fn code(&self) -> &str {
        match self {
            Scope::Sds(c) => c.as_str(),
            Scope::Uda(c) => c.as_str(),
            Scope::Overall => "OVERALL",
        }
    }

    /// Scope code with path separators replaced, for use in file names.
    pub fn file_stem(&self) -> String {
        let code: String = self
            .code()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect();
        format!("{}_{}", self.level().as_str().to_lowercase(), code)
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.level(), self.code())
    }
}

/// A university measured within a scope.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitId {
    pub university: UniversityId,
    pub scope: Scope,
}

/// Raw, unvalidated corpus tables.
#[derive(Debug, Clone, Default)]
pub struct CorpusParts {
    pub window: ObservationWindow,
    pub publications: Vec<Publication>,
    pub authorships: Vec<Authorship>,
    pub professors: Vec<Professor>,
    pub fields: FieldScheme,
    pub salaries: SalaryTable,
}

/// Source line numbers aligned with the vectors of a [`CorpusParts`].
#[derive(Debug, Clone, Default)]
struct SourceLines {
    publications: Vec<u64>,
    authorships: Vec<u64>,
    professors: Vec<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub universities: usize,
    pub professors: usize,
    pub publications: usize,
    pub authorships: usize,
    pub sds: usize,
    pub udas: usize,
    pub salary_bands: usize,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    window: ObservationWindow,
    publications: BTreeMap<PubId, Publication>,
    /// Publications that enter baselines but no authorship-linked analysis.
    baseline_only: BTreeMap<PubId, Publication>,
    professors: BTreeMap<ProfessorId, Professor>,
    authorships: Vec<Authorship>,
    fields: FieldScheme,
    salaries: SalaryTable,
    authors_by_pub: BTreeMap<PubId, Vec<ProfessorId>>,
    pubs_by_professor: BTreeMap<ProfessorId, Vec<PubId>>,
    staff_by_university: BTreeMap<UniversityId, Vec<ProfessorId>>,
}

struct Indexes {
    authors_by_pub: BTreeMap<PubId, Vec<ProfessorId>>,
    pubs_by_professor: BTreeMap<ProfessorId, Vec<PubId>>,
    staff_by_university: BTreeMap<UniversityId, Vec<ProfessorId>>,
}

fn build_indexes(authorships: &[Authorship], professors: &BTreeMap<ProfessorId, Professor>) -> Indexes {
    let mut authors_by_pub: BTreeMap<PubId, Vec<ProfessorId>> = BTreeMap::new();
    let mut pubs_by_professor: BTreeMap<ProfessorId, Vec<PubId>> = BTreeMap::new();
    for a in authorships {
        authors_by_pub
            .entry(a.pub_id.clone())
            .or_default()
            .push(a.professor_id.clone());
        pubs_by_professor
            .entry(a.professor_id.clone())
            .or_default()
            .push(a.pub_id.clone());
    }
    let mut staff_by_university: BTreeMap<UniversityId, Vec<ProfessorId>> = BTreeMap::new();
    for p in professors.values() {
        staff_by_university
            .entry(p.university_id.clone())
            .or_default()
            .push(p.professor_id.clone());
    }
    Indexes {
        authors_by_pub,
        pubs_by_professor,
        staff_by_university,
    }
}

impl Corpus {
    /// Validates the parts and builds the cross-reference indexes.
    pub fn from_parts(parts: CorpusParts) -> Result<Self, CorpusError> {
        Self::build(parts, None)
    }

    fn build(parts: CorpusParts, lines: Option<&SourceLines>) -> Result<Self, CorpusError> {
        let CorpusParts {
            window,
            publications,
            mut authorships,
            professors,
            fields,
            salaries,
        } = parts;
        let mut violations = Vec::new();
        if let Err(v) = window.validate() {
            violations.push(v);
        }
        let line_of = |kind: u8, idx: usize| -> Option<u64> {
            lines.and_then(|l| {
                let v = match kind {
                    0 => &l.publications,
                    1 => &l.authorships,
                    _ => &l.professors,
                };
                v.get(idx).copied()
            })
        };

        let mut pub_map = BTreeMap::new();
        for (idx, p) in publications.into_iter().enumerate() {
            let line = line_of(0, idx);
            if p.n_authors_total == 0 {
                violations.push(Violation::new(
                    PUBLICATIONS_FILE,
                    line,
                    Some("n_authors_total"),
                    format!("publication `{}` must have at least one author", p.pub_id),
                ));
            }
            if p.subject_categories.is_empty() {
                violations.push(Violation::new(
                    PUBLICATIONS_FILE,
                    line,
                    Some("subject_categories"),
                    format!("publication `{}` has no subject category", p.pub_id),
                ));
            }
            if pub_map.contains_key(&p.pub_id) {
                violations.push(Violation::new(
                    PUBLICATIONS_FILE,
                    line,
                    Some("pub_id"),
                    format!("duplicate pub_id `{}`", p.pub_id),
                ));
                continue;
            }
            pub_map.insert(p.pub_id.clone(), p);
        }

        let window_len = window.length_years();
        let mut prof_map = BTreeMap::new();
        for (idx, p) in professors.into_iter().enumerate() {
            let line = line_of(2, idx);
            if fields.sds(&p.sds_code).is_none() {
                violations.push(Violation::new(
                    PROFESSORS_FILE,
                    line,
                    Some("sds_code"),
                    format!("sds_code `{}` is not in the field scheme", p.sds_code),
                ));
            }
            if salaries.get(&p.academic_rank).is_none() {
                violations.push(Violation::new(
                    PROFESSORS_FILE,
                    line,
                    Some("academic_rank"),
                    format!("academic_rank `{}` has no salary", p.academic_rank),
                ));
            }
            if !(p.years_on_staff.is_finite()
                && p.years_on_staff > 0.0
                && p.years_on_staff <= window_len + 1e-9)
            {
                violations.push(Violation::new(
                    PROFESSORS_FILE,
                    line,
                    Some("years_on_staff"),
                    format!(
                        "years_on_staff {} must lie in (0, {window_len}]",
                        p.years_on_staff
                    ),
                ));
            }
            if prof_map.contains_key(&p.professor_id) {
                violations.push(Violation::new(
                    PROFESSORS_FILE,
                    line,
                    Some("professor_id"),
                    format!("duplicate professor_id `{}`", p.professor_id),
                ));
                continue;
            }
            prof_map.insert(p.professor_id.clone(), p);
        }

        let mut seen = BTreeSet::new();
        let mut keep = vec![true; authorships.len()];
        for (idx, a) in authorships.iter().enumerate() {
            let line = line_of(1, idx);
            if !pub_map.contains_key(&a.pub_id) {
                violations.push(Violation::new(
                    AUTHORSHIPS_FILE,
                    line,
                    Some("pub_id"),
                    format!("unknown pub_id `{}`", a.pub_id),
                ));
                keep[idx] = false;
            }
            if !prof_map.contains_key(&a.professor_id) {
                violations.push(Violation::new(
                    AUTHORSHIPS_FILE,
                    line,
                    Some("professor_id"),
                    format!("unknown professor_id `{}`", a.professor_id),
                ));
                keep[idx] = false;
            }
            if !seen.insert((a.pub_id.clone(), a.professor_id.clone())) {
                violations.push(Violation::new(
                    AUTHORSHIPS_FILE,
                    line,
                    None,
                    format!(
                        "duplicate authorship ({}, {})",
                        a.pub_id, a.professor_id
                    ),
                ));
                keep[idx] = false;
            }
        }
        let mut k = keep.into_iter();
        authorships.retain(|_| k.next().unwrap_or(false));
        authorships.sort();

        let idx = build_indexes(&authorships, &prof_map);
        for (pub_id, authors) in &idx.authors_by_pub {
            let p = &pub_map[pub_id];
            if authors.len() as u64 > u64::from(p.n_authors_total) {
                violations.push(Violation::new(
                    AUTHORSHIPS_FILE,
                    None,
                    Some("pub_id"),
                    format!(
                        "publication `{pub_id}` has {} authorships but n_authors_total = {}",
                        authors.len(),
                        p.n_authors_total
                    ),
                ));
            }
        }

        if !violations.is_empty() {
            return Err(CorpusError::Invalid(violations));
        }
        Ok(Self {
            window,
            publications: pub_map,
            baseline_only: BTreeMap::new(),
            professors: prof_map,
            authorships,
            fields,
            salaries,
            authors_by_pub: idx.authors_by_pub,
            pubs_by_professor: idx.pubs_by_professor,
            staff_by_university: idx.staff_by_university,
        })
    }

    /// Decomposes the corpus back into tables. Baseline-only publications are
    /// returned with the others (they have no authorships).
    pub fn to_parts(&self) -> CorpusParts {
        let mut publications: Vec<Publication> = self.publications.values().cloned().collect();
        publications.extend(self.baseline_only.values().cloned());
        CorpusParts {
            window: self.window.clone(),
            publications,
            authorships: self.authorships.clone(),
            professors: self.professors.values().cloned().collect(),
            fields: self.fields.clone(),
            salaries: self.salaries.clone(),
        }
    }

    pub fn window(&self) -> &ObservationWindow {
        &self.window
    }

    pub fn fields(&self) -> &FieldScheme {
        &self.fields
    }

    pub fn salaries(&self) -> &SalaryTable {
        &self.salaries
    }

    pub fn publication(&self, id: &PubId) -> Option<&Publication> {
        self.publications.get(id)
    }

    /// Publications available to authorship-linked analysis.
    pub fn publications(&self) -> impl Iterator<Item = &Publication> {
        self.publications.values()
    }

    /// Every publication entering the national baselines.
    pub fn baseline_publications(&self) -> impl Iterator<Item = &Publication> {
        self.publications.values().chain(self.baseline_only.values())
    }

    pub fn professor(&self, id: &ProfessorId) -> Option<&Professor> {
        self.professors.get(id)
    }

    pub fn professors(&self) -> impl Iterator<Item = &Professor> {
        self.professors.values()
    }

    pub fn authorships(&self) -> &[Authorship] {
        &self.authorships
    }

    pub fn authors_of(&self, pub_id: &PubId) -> &[ProfessorId] {
        self.authors_by_pub.get(pub_id).map_or(&[], Vec::as_slice)
    }

    pub fn publications_of(&self, professor: &ProfessorId) -> &[PubId] {
        self.pubs_by_professor
            .get(professor)
            .map_or(&[], Vec::as_slice)
    }

    pub fn universities(&self) -> impl Iterator<Item = &UniversityId> {
        self.staff_by_university.keys()
    }

    pub fn report(&self) -> LoadReport {
        LoadReport {
            universities: self.staff_by_university.len(),
            professors: self.professors.len(),
            publications: self.publications.len() + self.baseline_only.len(),
            authorships: self.authorships.len(),
            sds: self.fields.sds.len(),
            udas: self.fields.udas.len(),
            salary_bands: self.salaries.0.len(),
        }
    }

    pub fn in_scope(&self, professor: &Professor, scope: &Scope) -> bool {
        match scope {
            Scope::Overall => true,
            Scope::Sds(code) => &professor.sds_code == code,
            Scope::Uda(code) => self.fields.uda_of(&professor.sds_code) == Some(code),
        }
    }

    pub fn professors_in_scope<'a>(
        &'a self,
        university: &'a UniversityId,
        scope: &'a Scope,
    ) -> impl Iterator<Item = &'a Professor> + 'a {
        self.staff(university).filter(move |p| self.in_scope(p, scope))
    }

    /// Professors of one university.
    pub fn staff<'a>(&'a self, university: &UniversityId) -> impl Iterator<Item = &'a Professor> + 'a {
        self.staff_by_university
            .get(university)
            .map_or(&[][..], Vec::as_slice)
            .iter()
            .map(move |id| &self.professors[id])
    }

    pub fn check_scope(&self, scope: &Scope) -> Result<(), CorpusError> {
        let known = match scope {
            Scope::Overall => true,
            Scope::Sds(c) => self.fields.sds.contains_key(c),
            Scope::Uda(c) => self.fields.udas.contains_key(c),
        };
        if known {
            Ok(())
        } else {
            Err(CorpusError::UnknownScope(scope.code().to_owned()))
        }
    }

    /// All scopes of a level defined by the field scheme.
    pub fn scopes(&self, level: Level) -> Vec<Scope> {
        match level {
            Level::Sds => self.fields.sds_codes().cloned().map(Scope::Sds).collect(),
            Level::Uda => self.fields.uda_codes().cloned().map(Scope::Uda).collect(),
            Level::Overall => vec![Scope::Overall],
        }
    }

    /// SHA-256 over the canonical CSV serialization of every table.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        let mut tables: [Vec<u8>; 5] = Default::default();
        let [a, b, c, d, e] = &mut tables;
        // Writing into memory cannot fail.
        self.write_tables(a, b, c, d, e).ok();
        for t in &tables {
            hasher.update((t.len() as u64).to_le_bytes());
            hasher.update(t);
        }
        for id in self.baseline_only.keys() {
            hasher.update(id.as_str().as_bytes());
            hasher.update([0u8]);
        }
        hex::encode(hasher.finalize())
    }

    /// Writes the five corpus CSV files into `dir`.
    pub fn write_csv_dir(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let open = |name: &str| File::create(dir.join(name)).map(io::BufWriter::new);
        let mut p = open(PUBLICATIONS_FILE)?;
        let mut a = open(AUTHORSHIPS_FILE)?;
        let mut pr = open(PROFESSORS_FILE)?;
        let mut f = open(FIELDS_FILE)?;
        let mut s = open(SALARIES_FILE)?;
        self.write_tables(&mut p, &mut a, &mut pr, &mut f, &mut s)?;
        for w in [&mut p, &mut a, &mut pr, &mut f, &mut s] {
            w.flush()?;
        }
        Ok(())
    }

    fn write_tables(
        &self,
        publications: &mut dyn Write,
        authorships: &mut dyn Write,
        professors: &mut dyn Write,
        fields: &mut dyn Write,
        salaries: &mut dyn Write,
    ) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(publications);
        w.write_record(PUBLICATION_COLUMNS)?;
        let mut all: Vec<&Publication> = self.baseline_publications().collect();
        all.sort_by(|x, y| x.pub_id.cmp(&y.pub_id));
        for p in all {
            let cats: Vec<&str> = p.subject_categories.iter().map(|c| c.as_str()).collect();
            w.write_record([
                p.pub_id.as_str(),
                &p.year.to_string(),
                p.doc_type.as_str(),
                &cats.join("|"),
                &p.citations.to_string(),
                &p.n_authors_total.to_string(),
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_writer(authorships);
        w.write_record(AUTHORSHIP_COLUMNS)?;
        for a in &self.authorships {
            w.write_record([a.pub_id.as_str(), a.professor_id.as_str()])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_writer(professors);
        w.write_record(PROFESSOR_COLUMNS)?;
        for p in self.professors.values() {
            w.write_record([
                p.professor_id.as_str(),
                p.university_id.as_str(),
                p.sds_code.as_str(),
                p.academic_rank.as_str(),
                &p.years_on_staff.to_string(),
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_writer(fields);
        w.write_record(FIELD_COLUMNS)?;
        for (code, info) in &self.fields.sds {
            w.write_record([
                code.as_str(),
                &info.name,
                info.uda_code.as_str(),
                self.fields.uda_name(&info.uda_code).unwrap_or_default(),
            ])?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_writer(salaries);
        w.write_record(SALARY_COLUMNS)?;
        for (rank, salary) in self.salaries.iter() {
            w.write_record([rank.as_str(), &salary.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Locations of the five corpus files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusPaths {
    pub publications: PathBuf,
    pub authorships: PathBuf,
    pub professors: PathBuf,
    pub fields: PathBuf,
    pub salaries: PathBuf,
}

impl CorpusPaths {
    /// The standard file names inside one directory.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        Self {
            publications: dir.join(PUBLICATIONS_FILE),
            authorships: dir.join(AUTHORSHIPS_FILE),
            professors: dir.join(PROFESSORS_FILE),
            fields: dir.join(FIELDS_FILE),
            salaries: dir.join(SALARIES_FILE),
        }
    }

    pub fn all(&self) -> [&Path; 5] {
        [
            &self.publications,
            &self.authorships,
            &self.professors,
            &self.fields,
            &self.salaries,
        ]
    }
}

#[derive(Debug, Deserialize)]
struct PublicationRow {
    pub_id: String,
    year: i32,
    doc_type: String,
    subject_categories: String,
    citations: u32,
    n_authors_total: u32,
}

#[derive(Debug, Deserialize)]
struct AuthorshipRow {
    pub_id: String,
    professor_id: String,
}

#[derive(Debug, Deserialize)]
struct ProfessorRow {
    professor_id: String,
    university_id: String,
    sds_code: String,
    academic_rank: String,
    years_on_staff: f64,
}

#[derive(Debug, Deserialize)]
struct FieldRow {
    sds_code: String,
    sds_name: String,
    uda_code: String,
    uda_name: String,
}

#[derive(Debug, Deserialize)]
struct SalaryRow {
    academic_rank: String,
    avg_yearly_salary: f64,
}

/// Loads and validates a corpus from the five CSV files.
///
/// Every malformed row and every broken cross-reference is reported; nothing
/// is dropped silently.
pub fn load_corpus(paths: &CorpusPaths, window: ObservationWindow) -> Result<Corpus, CorpusError> {
    let mut violations = Vec::new();
    let pub_rows: Vec<(u64, PublicationRow)> =
        read_rows(&paths.publications, PUBLICATION_COLUMNS, &mut violations)?;
    let auth_rows: Vec<(u64, AuthorshipRow)> =
        read_rows(&paths.authorships, AUTHORSHIP_COLUMNS, &mut violations)?;
    let prof_rows: Vec<(u64, ProfessorRow)> =
        read_rows(&paths.professors, PROFESSOR_COLUMNS, &mut violations)?;
    let field_rows: Vec<(u64, FieldRow)> =
        read_rows(&paths.fields, FIELD_COLUMNS, &mut violations)?;
    let salary_rows: Vec<(u64, SalaryRow)> =
        read_rows(&paths.salaries, SALARY_COLUMNS, &mut violations)?;

    let mut fields = FieldScheme::new();
    for (line, r) in field_rows {
        if let Err(msg) = fields.insert(
            SdsCode::new(r.sds_code),
            r.sds_name,
            UdaCode::new(r.uda_code),
            r.uda_name,
        ) {
            violations.push(Violation::new(FIELDS_FILE, Some(line), Some("sds_code"), msg));
        }
    }
    let mut salaries = SalaryTable::new();
    for (line, r) in salary_rows {
        if let Err(msg) = salaries.insert(AcademicRank::new(r.academic_rank), r.avg_yearly_salary) {
            violations.push(Violation::new(
                SALARIES_FILE,
                Some(line),
                Some("avg_yearly_salary"),
                msg,
            ));
        }
    }

    let mut lines = SourceLines::default();
    let mut parts = CorpusParts {
        window,
        fields,
        salaries,
        ..Default::default()
    };
    for (line, r) in pub_rows {
        lines.publications.push(line);
        parts.publications.push(Publication {
            pub_id: PubId::new(r.pub_id),
            year: r.year,
            doc_type: DocType::new(&r.doc_type),
            subject_categories: r
                .subject_categories
                .split('|')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(CategoryCode::from)
                .collect(),
            citations: r.citations,
            n_authors_total: r.n_authors_total,
        });
    }
    for (line, r) in auth_rows {
        lines.authorships.push(line);
        parts.authorships.push(Authorship {
            pub_id: PubId::new(r.pub_id),
            professor_id: ProfessorId::new(r.professor_id),
        });
    }
    for (line, r) in prof_rows {
        lines.professors.push(line);
        parts.professors.push(Professor {
            professor_id: ProfessorId::new(r.professor_id),
            university_id: UniversityId::new(r.university_id),
            sds_code: SdsCode::new(r.sds_code),
            academic_rank: AcademicRank::new(r.academic_rank),
            years_on_staff: r.years_on_staff,
        });
    }
    if parts.publications.is_empty() && parts.professors.is_empty() {
        violations.push(Violation::new(
            PUBLICATIONS_FILE,
            None,
            None,
            "corpus contains no publications and no professors",
        ));
    }

    match Corpus::build(parts, Some(&lines)) {
        Ok(corpus) if violations.is_empty() => Ok(corpus),
        Ok(_) => Err(CorpusError::Invalid(violations)),
        Err(CorpusError::Invalid(more)) => {
            violations.extend(more);
            Err(CorpusError::Invalid(violations))
        }
        Err(e) => Err(e),
    }
}

/// Reads one CSV file into `(line, row)` pairs, collecting every malformed
/// row as a violation.
fn read_rows<T: for<'de> Deserialize<'de>>(
    path: &Path,
    columns: &[&str],
    violations: &mut Vec<Violation>,
) -> Result<Vec<(u64, T)>, CorpusError> {
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(io::BufReader::new(file));
    let headers = match rdr.headers() {
        Ok(h) => h.clone(),
        Err(e) => {
            violations.push(Violation::new(&file_name, Some(1), None, e.to_string()));
            return Ok(Vec::new());
        }
    };
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        violations.push(Violation::new(&file_name, Some(1), None, "missing header row"));
        return Ok(Vec::new());
    }
    let missing: Vec<&str> = columns
        .iter()
        .copied()
        .filter(|c| !headers.iter().any(|h| h == *c))
        .collect();
    if !missing.is_empty() {
        violations.push(Violation::new(
            &file_name,
            Some(1),
            None,
            format!("missing column(s): {}", missing.join(", ")),
        ));
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(0, |p| p.line());
                match record.deserialize::<T>(Some(&headers)) {
                    Ok(row) => rows.push((line, row)),
                    Err(err) => {
                        let (field, message) = match err.kind() {
                            csv::ErrorKind::Deserialize { err: de, .. } => (
                                de.field()
                                    .and_then(|i| headers.get(i as usize))
                                    .map(str::to_owned),
                                de.kind().to_string(),
                            ),
                            _ => (None, err.to_string()),
                        };
                        violations.push(Violation {
                            file: file_name.clone(),
                            line: Some(line),
                            field,
                            message,
                        });
                    }
                }
            }
            Err(e) => {
                violations.push(Violation::new(
                    &file_name,
                    e.position().map(|p| p.line()),
                    None,
                    e.to_string(),
                ));
                break;
            }
        }
    }
    Ok(rows)
}

/// What [`apply_filters`] removed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub professors_short_tenure: usize,
    pub publications_out_of_window: usize,
    pub publications_excluded_doc_type: usize,
    /// Doc-type-excluded publications kept for baseline computation only.
    pub publications_baseline_only: usize,
    pub authorships_removed: usize,
}

impl FilterReport {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

/// Removes short-tenure professors, out-of-window publications and
/// excluded document types. Authorships touching removed records go too.
///
/// With `baseline_include_all_doctypes`, excluded document types are kept
/// for the baselines but lose their authorships.
pub fn apply_filters(corpus: &Corpus, cfg: &FilterConfig) -> (Corpus, FilterReport) {
    let mut report = FilterReport::default();
    let window = &corpus.window;

    let professors: BTreeMap<ProfessorId, Professor> = corpus
        .professors
        .iter()
        .filter(|(_, p)| {
            let keep = p.years_on_staff >= cfg.min_years_on_staff;
            if !keep {
                report.professors_short_tenure += 1;
            }
            keep
        })
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();

    let mut publications = BTreeMap::new();
    let mut baseline_only = BTreeMap::new();
    for p in corpus.publications.values() {
        if !window.contains(p.year) {
            report.publications_out_of_window += 1;
        } else if cfg.excluded_doc_types.contains(&p.doc_type) {
            report.publications_excluded_doc_type += 1;
            if cfg.baseline_include_all_doctypes {
                report.publications_baseline_only += 1;
                baseline_only.insert(p.pub_id.clone(), p.clone());
            }
        } else {
            publications.insert(p.pub_id.clone(), p.clone());
        }
    }
    for p in corpus.baseline_only.values() {
        if !window.contains(p.year) {
            report.publications_out_of_window += 1;
        } else if cfg.baseline_include_all_doctypes || !cfg.excluded_doc_types.contains(&p.doc_type) {
            baseline_only.insert(p.pub_id.clone(), p.clone());
        } else {
            report.publications_excluded_doc_type += 1;
        }
    }

    let authorships: Vec<Authorship> = corpus
        .authorships
        .iter()
        .filter(|a| publications.contains_key(&a.pub_id) && professors.contains_key(&a.professor_id))
        .cloned()
        .collect();
    report.authorships_removed = corpus.authorships.len() - authorships.len();

    let idx = build_indexes(&authorships, &professors);
    let filtered = Corpus {
        window: window.clone(),
        publications,
        baseline_only,
        professors,
        authorships,
        fields: corpus.fields.clone(),
        salaries: corpus.salaries.clone(),
        authors_by_pub: idx.authors_by_pub,
        pubs_by_professor: idx.pubs_by_professor,
        staff_by_university: idx.staff_by_university,
    };
    (filtered, report)
}

/// Universities meeting the headcount threshold of one scope.
#[derive(Debug, Clone, PartialEq)]
pub struct EligibleUnits {
    pub scope: Scope,
    /// `(unit, in-scope headcount)` sorted by university.
    pub units: Vec<(UnitId, usize)>,
    /// False when the population is too small to rank.
    pub rankable: bool,
}

/// Universities whose post-filter headcount in `scope` reaches the level's
/// threshold. At SDS level a scope with fewer than `min_units_to_rank`
/// eligible universities is flagged not rankable; any empty scope is.
pub fn eligible_units(
    corpus: &Corpus,
    scope: &Scope,
    cfg: &FilterConfig,
) -> Result<EligibleUnits, CorpusError> {
    corpus.check_scope(scope)?;
    let mut headcount: BTreeMap<&UniversityId, usize> = BTreeMap::new();
    for p in corpus.professors.values().filter(|p| corpus.in_scope(p, scope)) {
        *headcount.entry(&p.university_id).or_default() += 1;
    }
    let min = cfg.min_professors(scope.level());
    let units: Vec<(UnitId, usize)> = headcount
        .into_iter()
        .filter(|&(_, n)| n >= min)
        .map(|(u, n)| {
            (
                UnitId {
                    university: u.clone(),
                    scope: scope.clone(),
                },
                n,
            )
        })
        .collect();
    let rankable = match scope.level() {
        Level::Sds => !units.is_empty() && units.len() >= cfg.min_units_to_rank,
        Level::Uda | Level::Overall => !units.is_empty(),
    };
    Ok(EligibleUnits {
        scope: scope.clone(),
        units,
        rankable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields() -> FieldScheme {
        let mut f = FieldScheme::new();
        f.insert("S1".into(), "Sector one", "U1".into(), "Area one").unwrap();
        f.insert("S2".into(), "Sector two", "U1".into(), "Area one").unwrap();
        f
    }

    fn salaries() -> SalaryTable {
        let mut s = SalaryTable::new();
        s.insert("full".into(), 100.0).unwrap();
        s.insert("associate".into(), 70.0).unwrap();
        s
    }

    fn prof(id: &str, uni: &str, sds: &str, years: f64) -> Professor {
        Professor {
            professor_id: id.into(),
            university_id: uni.into(),
            sds_code: sds.into(),
            academic_rank: "full".into(),
            years_on_staff: years,
        }
    }

    fn publication(id: &str, year: i32, doc: &str, cites: u32, n: u32) -> Publication {
        Publication {
            pub_id: id.into(),
            year,
            doc_type: DocType::new(doc),
            subject_categories: vec!["C1".into()],
            citations: cites,
            n_authors_total: n,
        }
    }

    fn auth(p: &str, a: &str) -> Authorship {
        Authorship {
            pub_id: p.into(),
            professor_id: a.into(),
        }
    }

    fn minimal_parts() -> CorpusParts {
        CorpusParts {
            window: ObservationWindow::new(2008, 2012),
            publications: vec![
                publication("P1", 2008, "article", 3, 2),
                publication("P2", 2009, "article", 0, 1),
                publication("P3", 2010, "review", 7, 4),
            ],
            authorships: vec![auth("P1", "A"), auth("P1", "B"), auth("P2", "A"), auth("P3", "B")],
            professors: vec![prof("A", "UNIV_1", "S1", 5.0), prof("B", "UNIV_1", "S2", 4.0)],
            fields: fields(),
            salaries: salaries(),
        }
    }

    #[test]
    fn minimal_fixture_counts() {
        let c = Corpus::from_parts(minimal_parts()).unwrap();
        let r = c.report();
        assert_eq!((r.universities, r.professors, r.publications), (1, 2, 3));
        assert_eq!(c.authors_of(&"P1".into()).len(), 2);
        assert_eq!(c.publications_of(&"B".into()).len(), 2);
    }

    #[test]
    fn dangling_authorship_is_reported() {
        let mut parts = minimal_parts();
        parts.authorships.push(auth("P2", "GHOST"));
        let err = Corpus::from_parts(parts).unwrap_err();
        let v = err.violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field.as_deref(), Some("professor_id"));
        assert!(v[0].message.contains("GHOST"));
    }

    #[test]
    fn too_many_authorships_is_reported() {
        let mut parts = minimal_parts();
        parts.professors.push(prof("C", "UNIV_1", "S1", 5.0));
        parts.professors.push(prof("D", "UNIV_1", "S1", 5.0));
        parts.professors.push(prof("E", "UNIV_1", "S1", 5.0));
        parts.publications[2].n_authors_total = 3;
        parts.authorships.extend([auth("P3", "C"), auth("P3", "D"), auth("P3", "E")]);
        let err = Corpus::from_parts(parts).unwrap_err();
        assert!(err.violations()[0].message.contains("4 authorships"));
    }

    #[test]
    fn duplicate_keys_and_bad_values_are_all_reported() {
        let mut parts = minimal_parts();
        parts.publications.push(publication("P1", 2011, "article", 1, 1));
        parts.publications[1].n_authors_total = 0;
        parts.professors[0].years_on_staff = 9.0;
        parts.professors[1].sds_code = "NOPE".into();
        let err = Corpus::from_parts(parts).unwrap_err();
        let fields: Vec<_> = err
            .violations()
            .iter()
            .filter_map(|v| v.field.clone())
            .collect();
        for f in ["pub_id", "n_authors_total", "years_on_staff", "sds_code"] {
            assert!(fields.iter().any(|x| x == f), "missing {f} in {fields:?}");
        }
    }

    #[test]
    fn short_tenure_professor_removed() {
        let mut parts = minimal_parts();
        parts.professors[0].years_on_staff = 2.5;
        let c = Corpus::from_parts(parts).unwrap();
        let (f, report) = apply_filters(&c, &FilterConfig::default());
        assert!(f.professor(&"A".into()).is_none());
        assert_eq!(report.professors_short_tenure, 1);
        assert_eq!(report.authorships_removed, 2);
        assert!(f.authors_of(&"P2".into()).is_empty());
        // The national corpus keeps the publication.
        assert!(f.publication(&"P2".into()).is_some());
    }

    #[test]
    fn meeting_abstract_excluded_everywhere_by_default() {
        let mut parts = minimal_parts();
        parts.publications[2].doc_type = DocType::new("Meeting Abstract");
        let c = Corpus::from_parts(parts).unwrap();
        let (f, report) = apply_filters(&c, &FilterConfig::default());
        assert!(f.publication(&"P3".into()).is_none());
        assert_eq!(f.baseline_publications().count(), 2);
        assert_eq!(report.publications_excluded_doc_type, 1);

        let cfg = FilterConfig {
            baseline_include_all_doctypes: true,
            ..FilterConfig::default()
        };
        let (f, report) = apply_filters(&c, &cfg);
        assert!(f.publication(&"P3".into()).is_none());
        assert_eq!(f.baseline_publications().count(), 3);
        assert_eq!(report.publications_baseline_only, 1);
        assert!(f.authors_of(&"P3".into()).is_empty());
    }

    #[test]
    fn out_of_window_publication_removed() {
        let mut parts = minimal_parts();
        parts.publications[0].year = 2014;
        let c = Corpus::from_parts(parts).unwrap();
        let (f, report) = apply_filters(&c, &FilterConfig::permissive());
        assert_eq!(report.publications_out_of_window, 1);
        assert!(f.publication(&"P1".into()).is_none());
    }

    #[test]
    fn zero_threshold_leaves_corpus_unchanged() {
        let c = Corpus::from_parts(minimal_parts()).unwrap();
        let (f, report) = apply_filters(&c, &FilterConfig::permissive());
        assert!(report.is_empty());
        assert_eq!(f.digest(), c.digest());
    }

    #[test]
    fn filtering_is_idempotent() {
        let mut parts = minimal_parts();
        parts.professors[0].years_on_staff = 1.0;
        parts.publications[1].doc_type = DocType::new("editorial_material");
        let c = Corpus::from_parts(parts).unwrap();
        for include in [false, true] {
            let cfg = FilterConfig {
                baseline_include_all_doctypes: include,
                ..FilterConfig::default()
            };
            let (once, _) = apply_filters(&c, &cfg);
            let (twice, report) = apply_filters(&once, &cfg);
            assert_eq!(once.digest(), twice.digest());
            assert!(report.publications_out_of_window == 0 && report.authorships_removed == 0);
        }
    }

    fn headcount_corpus(counts: &[usize]) -> Corpus {
        let mut parts = minimal_parts();
        parts.professors.clear();
        parts.authorships.clear();
        for (u, &n) in counts.iter().enumerate() {
            for k in 0..n {
                parts
                    .professors
                    .push(prof(&format!("U{u}P{k}"), &format!("UNIV_{}", u + 1), "S1", 5.0));
            }
        }
        Corpus::from_parts(parts).unwrap()
    }

    #[test]
    fn eligibility_threshold() {
        let c = headcount_corpus(&[3, 1, 2]);
        let e = eligible_units(&c, &Scope::Sds("S1".into()), &FilterConfig::default()).unwrap();
        assert_eq!(e.units.len(), 2);
        assert_eq!(e.units[0].1, 3);
        assert!(!e.rankable);
    }

    #[test]
    fn overall_threshold_excludes_29() {
        let c = headcount_corpus(&[29, 30]);
        let e = eligible_units(&c, &Scope::Overall, &FilterConfig::default()).unwrap();
        assert_eq!(e.units.len(), 1);
        assert_eq!(e.units[0].0.university.as_str(), "UNIV_2");
    }

    #[test]
    fn sds_with_four_units_not_rankable() {
        let c = headcount_corpus(&[2, 2, 2, 2]);
        let cfg = FilterConfig::default();
        let e = eligible_units(&c, &Scope::Sds("S1".into()), &cfg).unwrap();
        assert_eq!(e.units.len(), 4);
        assert!(!e.rankable);
        let c = headcount_corpus(&[2, 2, 2, 2, 2]);
        assert!(eligible_units(&c, &Scope::Sds("S1".into()), &cfg).unwrap().rankable);
    }

    #[test]
    fn unknown_scope_is_an_error() {
        let c = headcount_corpus(&[2]);
        let err = eligible_units(&c, &Scope::Uda("NOPE".into()), &FilterConfig::default());
        assert!(matches!(err, Err(CorpusError::UnknownScope(code)) if code == "NOPE"));
    }

    #[test]
    fn scope_file_stems_are_path_safe() {
        assert_eq!(Scope::Sds("CHIM/08".into()).file_stem(), "sds_CHIM_08");
        assert_eq!(Scope::Overall.file_stem(), "overall_OVERALL");
    }

    #[test]
    fn doc_type_normalization() {
        assert_eq!(DocType::new("  Editorial_Material ").as_str(), "editorial material");
    }
}
