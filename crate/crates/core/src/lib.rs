//! University research-performance indicators and their divergence.
//!
//! The crate computes two indicators from a publication/staff corpus:
//!
//! * **FSS** (Fractional Scientific Strength), an efficiency indicator:
//!   field-normalized, author-fractionalized citation impact per unit of
//!   salary and time, standardized by field.
//! * **MNCS** (Mean Normalized Citation Score), a per-publication indicator:
//!   the mean field-normalized citation impact of a unit's output, weighted
//!   by the unit's fractional share of each publication.
//!
//! It then ranks universities by both, and measures how far the rankings
//! disagree (rank and percentile shifts, quartile migration, correlations,
//! dispersion).
//!
//! Pipeline: [`corpus::load_corpus`] → [`corpus::apply_filters`] →
//! [`baselines::compute_scaling_factors`] → [`indicators::score_level`] →
//! [`ranking::rank`] / [`ranking::compare`] → [`divergence`] summaries.

pub mod baselines;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod divergence;
pub mod ids;
pub mod indicators;
pub mod manifest;
pub mod ranking;
pub mod report;
pub mod synth;

pub use baselines::{compute_scaling_factors, normalized_impact, scaling_factor, ScalingFactorTable};
pub use corpus::{
    apply_filters, eligible_units, load_corpus, Corpus, CorpusPaths, FilterConfig, Level,
    ObservationWindow, Scope, UnitId,
};
pub use ids::{CategoryCode, ProfessorId, PubId, SdsCode, UdaCode, UniversityId};
pub use indicators::{Indicator, ScoreBoard};
pub use ranking::{compare, rank, ComparisonTable, RankedList};
