//! Synthetic corpora with skewed publication and citation counts.
//!
//! Each professor gets a productivity multiplier `g ~ Gamma(k, 1/k)` and an
//! impact multiplier `m = ρ'·g + (1−ρ')·y` with independent
//! `y ~ Gamma(k_i, 1/k_i)`; both have mean 1. Publication counts are
//! Poisson in `g`; citations are gamma-mixed Poisson in `m`. ρ' is bisected
//! so that the measured correlation between a professor's publication count
//! and mean normalized impact lands on the configured target.
//!
//! Randomness comes from ChaCha8 seeded per (seed, attempt, professor,
//! stream), so the output is identical across platforms for a given seed.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{compute_scaling_factors, normalized_impact};
use crate::corpus::{
    apply_filters, Authorship, Corpus, CorpusError, CorpusParts, DocType, FieldScheme, FilterConfig,
    ObservationWindow, Professor, Publication, SalaryTable,
};
use crate::divergence::pearson;
use crate::ids::{CategoryCode, ProfessorId, PubId, SdsCode, UdaCode, UniversityId};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synth config: {0}")]
    Invalid(String),
    #[error("no acceptable corpus after {0} attempts")]
    Exhausted(u32),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("cannot read synth config: {0}")]
    Io(#[from] std::io::Error),
    #[error("synth config: {0}")]
    Parse(#[from] toml::de::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdsSpec {
    pub code: String,
    pub uda: String,
    /// Inclusive range of professors per university with staff in this SDS.
    pub professors: [u32; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankSpec {
    pub rank: String,
    pub salary: f64,
    /// Relative frequency among professors.
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_universities: usize,
    pub window: ObservationWindow,
    pub sds: Vec<SdsSpec>,
    /// UDA code → display name; missing codes get a generic name.
    pub uda_names: BTreeMap<String, String>,
    /// Probability that a university has staff in a given SDS.
    pub sds_presence: f64,
    pub ranks: Vec<RankSpec>,
    /// Mean lead-authored publications per professor over a full window.
    pub pubs_per_professor: f64,
    /// Gamma shape of the productivity multiplier (smaller = more skewed).
    pub productivity_shape: f64,
    /// Mean citations of a publication from the first window year.
    pub citation_mean: f64,
    /// Gamma shape of the per-publication citation multiplier.
    pub citation_dispersion: f64,
    /// Gamma shape of the professor-level impact component that is
    /// independent of productivity.
    pub impact_shape: f64,
    pub quantity_impact_corr: f64,
    /// Bisect the latent coupling to hit `quantity_impact_corr`; otherwise
    /// the target is used as the coupling directly.
    pub calibrate: bool,
    pub categories_per_uda: usize,
    pub multi_category_prob: f64,
    pub internal_coauthors_mean: f64,
    pub cross_university_prob: f64,
    pub external_coauthors_mean: f64,
    pub excluded_doctype_share: f64,
    pub short_tenure_share: f64,
    pub max_attempts: u32,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self::small()
    }
}

fn ranks_default() -> Vec<RankSpec> {
    [("PO", 110_000.0, 0.3), ("PA", 75_000.0, 0.35), ("RU", 50_000.0, 0.35)]
        .into_iter()
        .map(|(rank, salary, share)| RankSpec {
            rank: rank.into(),
            salary,
            share,
        })
        .collect()
}

fn sds_list(prefix: &str, uda: &str, n: usize, professors: [u32; 2]) -> Vec<SdsSpec> {
    (1..=n)
        .map(|i| SdsSpec {
            code: format!("{prefix}/{i:02}"),
            uda: uda.into(),
            professors,
        })
        .collect()
}

impl SynthConfig {
    pub const PRESETS: [&'static str; 3] = ["small", "chemistry-like", "scale"];

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "small" => Some(Self::small()),
            "chemistry-like" => Some(Self::chemistry_like()),
            "scale" => Some(Self::scale()),
            _ => None,
        }
    }

    /// A few universities in three SDS across two UDAs.
    pub fn small() -> Self {
        let mut sds = sds_list("CHIM", "3", 2, [2, 6]);
        sds.extend(sds_list("FIS", "2", 1, [2, 6]));
        Self {
            seed: 1,
            n_universities: 8,
            window: ObservationWindow::new(2008, 2012),
            sds,
            uda_names: [("2", "Physics"), ("3", "Chemistry")]
                .into_iter()
                .map(|(a, b)| (a.to_owned(), b.to_owned()))
                .collect(),
            sds_presence: 1.0,
            ranks: ranks_default(),
            pubs_per_professor: 6.0,
            productivity_shape: 1.0,
            citation_mean: 20.0,
            citation_dispersion: 8.0,
            impact_shape: 1.5,
            quantity_impact_corr: 0.6,
            calibrate: false,
            categories_per_uda: 3,
            multi_category_prob: 0.25,
            internal_coauthors_mean: 0.6,
            cross_university_prob: 0.3,
            external_coauthors_mean: 2.0,
            excluded_doctype_share: 0.05,
            short_tenure_share: 0.05,
            max_attempts: 20,
        }
    }

    /// Sized like a chemistry area: 61 universities, 12 SDS, about 3,200
    /// professors.
    pub fn chemistry_like() -> Self {
        Self {
            seed: 2011,
            n_universities: 61,
            sds: sds_list("CHIM", "3", 12, [1, 10]),
            uda_names: [("3".to_owned(), "Chemistry".to_owned())].into(),
            sds_presence: 0.78,
            pubs_per_professor: 12.0,
            calibrate: true,
            categories_per_uda: 8,
            ..Self::small()
        }
    }

    /// About 50 universities, 5,000 professors and 20,000 publications.
    pub fn scale() -> Self {
        let mut sds = Vec::new();
        for (prefix, uda) in [("MAT", "1"), ("FIS", "2"), ("CHIM", "3"), ("BIO", "5")] {
            sds.extend(sds_list(prefix, uda, 5, [1, 11]));
        }
        Self {
            seed: 5000,
            n_universities: 50,
            sds,
            uda_names: [
                ("1", "Mathematics and computer science"),
                ("2", "Physics"),
                ("3", "Chemistry"),
                ("5", "Biology"),
            ]
            .into_iter()
            .map(|(a, b)| (a.to_owned(), b.to_owned()))
            .collect(),
            sds_presence: 0.85,
            pubs_per_professor: 4.2,
            calibrate: true,
            categories_per_uda: 6,
            internal_coauthors_mean: 0.4,
            ..Self::small()
        }
    }

    pub fn load(path: &Path) -> Result<Self, SynthError> {
        let cfg: Self = toml::from_str(&std::fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::Invalid(m.to_owned()));
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if self.n_universities == 0 {
            return bad("n_universities must be at least 1");
        }
        if self.sds.is_empty() {
            return bad("at least one SDS is required");
        }
        if self.window.validate().is_err() {
            return bad("window start_year is after end_year");
        }
        for s in &self.sds {
            if s.professors[0] > s.professors[1] {
                return Err(SynthError::Invalid(format!("SDS {}: professors range is reversed", s.code)));
            }
        }
        let mut codes: Vec<&str> = self.sds.iter().map(|s| s.code.as_str()).collect();
        codes.sort_unstable();
        codes.dedup();
        if codes.len() != self.sds.len() {
            return bad("duplicate SDS code");
        }
        if self.ranks.is_empty() || self.ranks.iter().any(|r| !positive(r.salary) || r.share.is_nan() || r.share < 0.0) {
            return bad("ranks need positive salaries and non-negative shares");
        }
        if !positive(self.ranks.iter().map(|r| r.share).sum()) {
            return bad("rank shares sum to zero");
        }
        for (name, p) in [
            ("sds_presence", self.sds_presence),
            ("multi_category_prob", self.multi_category_prob),
            ("cross_university_prob", self.cross_university_prob),
            ("excluded_doctype_share", self.excluded_doctype_share),
            ("short_tenure_share", self.short_tenure_share),
        ] {
            if !prob(p) {
                return Err(SynthError::Invalid(format!("{name} must be in [0, 1]")));
            }
        }
        if !(0.0..1.0).contains(&self.quantity_impact_corr) {
            return bad("quantity_impact_corr must be in [0, 1)");
        }
        for (name, x) in [
            ("pubs_per_professor", self.pubs_per_professor),
            ("productivity_shape", self.productivity_shape),
            ("citation_mean", self.citation_mean),
            ("citation_dispersion", self.citation_dispersion),
            ("impact_shape", self.impact_shape),
        ] {
            if !positive(x) {
                return Err(SynthError::Invalid(format!("{name} must be positive")));
            }
        }
        let negative = |x: f64| x.is_nan() || x < 0.0;
        if negative(self.internal_coauthors_mean) || negative(self.external_coauthors_mean) {
            return bad("co-author means must be non-negative");
        }
        if self.categories_per_uda == 0 {
            return bad("categories_per_uda must be at least 1");
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be at least 1");
        }
        Ok(())
    }
}

/// What generation settled on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthReport {
    pub seed: u64,
    /// 0-based attempt that produced the corpus.
    pub attempt: u32,
    pub latent_coupling: f64,
    /// Publication count vs mean normalized impact, per professor.
    pub measured_quantity_impact_corr: Option<f64>,
    pub professors: usize,
    pub publications: usize,
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub corpus: Corpus,
    pub report: SynthReport,
}

const EXCLUDED_TYPES: [&str; 3] = ["editorial material", "meeting abstract", "reply"];

fn mix(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn stream(seed: u64, attempt: u32, index: u64, kind: u64) -> ChaCha8Rng {
    let s = mix(mix(mix(seed) ^ u64::from(attempt)) ^ index) ^ kind;
    ChaCha8Rng::seed_from_u64(mix(s))
}

fn poisson(rng: &mut ChaCha8Rng, lambda: f64) -> u32 {
    if lambda <= 0.0 {
        return 0;
    }
    let d = Poisson::new(lambda).expect("finite positive lambda");
    let x: f64 = d.sample(rng);
    x.min(f64::from(u32::MAX)) as u32
}

fn gamma_unit_mean(rng: &mut ChaCha8Rng, shape: f64) -> f64 {
    Gamma::new(shape, 1.0 / shape).expect("positive shape").sample(rng)
}

/// Professor-level draws that do not depend on the latent coupling.
struct Roster {
    professors: Vec<Professor>,
    g: Vec<f64>,
    y: Vec<f64>,
    categories: BTreeMap<String, Vec<(CategoryCode, f64)>>,
}

fn roster(cfg: &SynthConfig, attempt: u32) -> Roster {
    let mut rng = stream(cfg.seed, attempt, u64::MAX, 0);
    let window_len = cfg.window.length_years();

    let mut categories: BTreeMap<String, Vec<(CategoryCode, f64)>> = BTreeMap::new();
    for s in &cfg.sds {
        categories.entry(s.uda.clone()).or_insert_with(|| {
            (1..=cfg.categories_per_uda)
                .map(|k| {
                    let factor = (0.5 * rng.sample::<f64, _>(StandardNormal)).exp();
                    (CategoryCode::new(format!("SC{}-{k:02}", s.uda)), factor)
                })
                .collect()
        });
    }

    let share_total: f64 = cfg.ranks.iter().map(|r| r.share).sum();
    let prod = Gamma::new(cfg.productivity_shape, 1.0 / cfg.productivity_shape).expect("validated");
    let imp = Gamma::new(cfg.impact_shape, 1.0 / cfg.impact_shape).expect("validated");
    let mut professors = Vec::new();
    let mut g = Vec::new();
    let mut y = Vec::new();
    for u in 1..=cfg.n_universities {
        let university = UniversityId::new(format!("UNIV_{u}"));
        for s in &cfg.sds {
            if !rng.random_bool(cfg.sds_presence) {
                continue;
            }
            let count = rng.random_range(s.professors[0]..=s.professors[1]);
            for _ in 0..count {
                let mut pick = rng.random::<f64>() * share_total;
                let rank = cfg
                    .ranks
                    .iter()
                    .find(|r| {
                        pick -= r.share;
                        pick < 0.0
                    })
                    .unwrap_or(&cfg.ranks[cfg.ranks.len() - 1]);
                let years = if rng.random_bool(cfg.short_tenure_share) {
                    // Half-year steps strictly below three years.
                    f64::from(rng.random_range(1..=5u32)) * 0.5
                } else if rng.random_bool(0.2) && window_len > 3.0 {
                    f64::from(rng.random_range(3..=window_len as u32))
                } else {
                    window_len
                };
                professors.push(Professor {
                    professor_id: ProfessorId::new(format!("P{:05}", professors.len() + 1)),
                    university_id: university.clone(),
                    sds_code: SdsCode::new(s.code.clone()),
                    academic_rank: rank.rank.as_str().into(),
                    years_on_staff: years.min(window_len),
                });
                g.push(prod.sample(&mut rng));
                y.push(imp.sample(&mut rng));
            }
        }
    }

    Roster {
        professors,
        g,
        y,
        categories,
    }
}

fn build(cfg: &SynthConfig, attempt: u32, roster: &Roster, coupling: f64) -> CorpusParts {
    let window_len = cfg.window.length_years();
    let uda_of: BTreeMap<&str, &str> = cfg.sds.iter().map(|s| (s.code.as_str(), s.uda.as_str())).collect();

    let mut by_unit: BTreeMap<(&UniversityId, &SdsCode), Vec<usize>> = BTreeMap::new();
    let mut by_sds: BTreeMap<&SdsCode, Vec<usize>> = BTreeMap::new();
    for (i, p) in roster.professors.iter().enumerate() {
        by_unit.entry((&p.university_id, &p.sds_code)).or_default().push(i);
        by_sds.entry(&p.sds_code).or_default().push(i);
    }

    let mut publications = Vec::new();
    let mut authorships = Vec::new();
    for (j, prof) in roster.professors.iter().enumerate() {
        let mut rs = stream(cfg.seed, attempt, j as u64, 1);
        let mut rc = stream(cfg.seed, attempt, j as u64, 2);
        let mu = cfg.citation_mean * (coupling * roster.g[j] + (1.0 - coupling) * roster.y[j]);
        let n_pubs = poisson(
            &mut rs,
            cfg.pubs_per_professor * roster.g[j] * prof.years_on_staff / window_len,
        );
        let uda = uda_of[prof.sds_code.as_str()];
        let pool = &roster.categories[uda];
        // Each SDS leans on one category of its area.
        let home = (mix(prof.sds_code.as_str().bytes().map(u64::from).sum()) as usize) % pool.len();
        for _ in 0..n_pubs {
            let pub_id = PubId::new(format!("W{:07}", publications.len() + 1));
            let year = rs.random_range(cfg.window.start_year..=cfg.window.end_year);
            let excluded = rs.random_bool(cfg.excluded_doctype_share);
            let doc_type = if excluded {
                EXCLUDED_TYPES[rs.random_range(0..EXCLUDED_TYPES.len())]
            } else if rs.random_bool(0.1) {
                "review"
            } else {
                "article"
            };
            let first = if rs.random_bool(0.7) { home } else { rs.random_range(0..pool.len()) };
            let mut cats = vec![first];
            if pool.len() > 1 && rs.random_bool(cfg.multi_category_prob) {
                let mut second = rs.random_range(0..pool.len() - 1);
                if second >= first {
                    second += 1;
                }
                cats.push(second);
            }

            let mut authors = vec![j];
            let colleagues = &by_unit[&(&prof.university_id, &prof.sds_code)];
            let wanted = poisson(&mut rs, cfg.internal_coauthors_mean) as usize;
            let available: Vec<usize> = colleagues.iter().copied().filter(|&c| c != j).collect();
            for _ in 0..wanted.min(available.len()) {
                let c = available[rs.random_range(0..available.len())];
                if !authors.contains(&c) {
                    authors.push(c);
                }
            }
            if rs.random_bool(cfg.cross_university_prob) {
                let peers = &by_sds[&prof.sds_code];
                let c = peers[rs.random_range(0..peers.len())];
                if roster.professors[c].university_id != prof.university_id && !authors.contains(&c) {
                    authors.push(c);
                }
            }
            let external = poisson(&mut rs, cfg.external_coauthors_mean);

            let cat_factor = cats.iter().map(|&k| pool[k].1).sum::<f64>() / cats.len() as f64;
            let age = f64::from(cfg.window.end_year - year + 1) / window_len;
            let type_factor = if excluded { 0.2 } else { 1.0 };
            let h = gamma_unit_mean(&mut rc, cfg.citation_dispersion);
            let citations = poisson(&mut rc, mu * cat_factor * age * type_factor * h);

            for &a in &authors {
                authorships.push(Authorship {
                    pub_id: pub_id.clone(),
                    professor_id: roster.professors[a].professor_id.clone(),
                });
            }
            publications.push(Publication {
                pub_id,
                year,
                doc_type: DocType::new(doc_type),
                subject_categories: cats.iter().map(|&k| pool[k].0.clone()).collect(),
                citations,
                n_authors_total: authors.len() as u32 + external,
            });
        }
    }

    let mut fields = FieldScheme::new();
    for s in &cfg.sds {
        let uda_name = cfg
            .uda_names
            .get(&s.uda)
            .cloned()
            .unwrap_or_else(|| format!("Area {}", s.uda));
        fields
            .insert(
                SdsCode::new(s.code.clone()),
                format!("Sector {}", s.code),
                UdaCode::new(s.uda.clone()),
                uda_name,
            )
            .expect("validated config");
    }
    let mut salaries = SalaryTable::new();
    for r in &cfg.ranks {
        // Duplicate ranks keep the first salary.
        let _ = salaries.insert(r.rank.as_str().into(), r.salary);
    }
    CorpusParts {
        window: cfg.window.clone(),
        publications,
        authorships,
        professors: roster.professors.clone(),
        fields,
        salaries,
    }
}

/// True when some (year, category) cell holds at least 50 publications and
/// none of them is cited.
fn has_empty_large_cell(parts: &CorpusParts) -> bool {
    let mut cells: BTreeMap<(i32, &CategoryCode), (usize, usize)> = BTreeMap::new();
    for p in &parts.publications {
        for c in &p.subject_categories {
            let e = cells.entry((p.year, c)).or_default();
            e.0 += 1;
            e.1 += usize::from(p.citations > 0);
        }
    }
    cells.values().any(|&(n, cited)| n >= 50 && cited == 0)
}

/// Pearson correlation, over professors surviving the default filters with
/// at least one normalizable publication, between publication count and
/// mean normalized impact.
pub fn quantity_impact_correlation(corpus: &Corpus) -> Option<f64> {
    let (filtered, _) = apply_filters(corpus, &FilterConfig::default());
    let table = compute_scaling_factors(&filtered);
    let mut counts = Vec::new();
    let mut impacts = Vec::new();
    for prof in filtered.professors() {
        let vals: Vec<f64> = filtered
            .publications_of(&prof.professor_id)
            .iter()
            .filter_map(|id| filtered.publication(id))
            .filter_map(|p| normalized_impact(p, &table).ok())
            .collect();
        if !vals.is_empty() {
            counts.push(vals.len() as f64);
            impacts.push(vals.iter().sum::<f64>() / vals.len() as f64);
        }
    }
    pearson(&counts, &impacts).ok()
}

fn attempt(cfg: &SynthConfig, attempt: u32) -> Result<Option<Synthetic>, SynthError> {
    let roster = roster(cfg, attempt);
    let make = |coupling: f64| -> Result<(CorpusParts, Corpus, Option<f64>), SynthError> {
        let parts = build(cfg, attempt, &roster, coupling);
        let corpus = Corpus::from_parts(parts.clone())?;
        let r = quantity_impact_correlation(&corpus);
        Ok((parts, corpus, r))
    };

    let target = cfg.quantity_impact_corr;
    let mut coupling = target;
    if cfg.calibrate {
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut best = (f64::INFINITY, target);
        for _ in 0..10 {
            let mid = (lo + hi) / 2.0;
            let Some(r) = make(mid)?.2 else { break };
            if (r - target).abs() < best.0 {
                best = ((r - target).abs(), mid);
            }
            if r < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        coupling = best.1;
        log::debug!("latent coupling {coupling:.4} (|error| {:.4})", best.0);
    }
    let (parts, corpus, measured) = make(coupling)?;
    if has_empty_large_cell(&parts) {
        return Ok(None);
    }
    let report = SynthReport {
        seed: cfg.seed,
        attempt,
        latent_coupling: coupling,
        measured_quantity_impact_corr: measured,
        professors: parts.professors.len(),
        publications: parts.publications.len(),
    };
    Ok(Some(Synthetic { corpus, report }))
}

/// Generates a corpus; the same config always yields the same corpus.
pub fn generate(cfg: &SynthConfig) -> Result<Synthetic, SynthError> {
    cfg.validate()?;
    for a in 0..cfg.max_attempts {
        if let Some(s) = attempt(cfg, a)? {
            return Ok(s);
        }
        log::info!("attempt {a} left a large cell uncited; regenerating");
    }
    Err(SynthError::Exhausted(cfg.max_attempts))
}
