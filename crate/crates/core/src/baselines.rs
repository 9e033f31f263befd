//! Citation scaling factors: the mean citations of cited national
//! publications per (year, subject category), and the normalized impact
//! `c / c̄` both indicators are built on.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{Corpus, Publication};
use crate::ids::{CategoryCode, PubId};

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("publication `{pub_id}` has no baseline for ({year}, {category})")]
    MissingBaseline {
        pub_id: PubId,
        year: i32,
        category: CategoryCode,
    },
    #[error("baseline table row {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineCell {
    /// Mean citations over the cited publications of the cell.
    pub mean: f64,
    pub cited_count: u64,
    pub total_count: u64,
}

/// (year, subject category) → scaling factor. A cell exists only if at
/// least one of its publications is cited.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScalingFactorTable {
    cells: BTreeMap<(i32, CategoryCode), BaselineCell>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CellRow {
    year: i32,
    category: String,
    mean: f64,
    cited_count: u64,
    total_count: u64,
}

impl ScalingFactorTable {
    pub fn cell(&self, year: i32, category: &CategoryCode) -> Option<&BaselineCell> {
        self.cells.get(&(year, category.clone()))
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(i32, CategoryCode), &BaselineCell)> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Writes `year,category,mean,cited_count,total_count`. Means are printed
    /// in shortest round-trip form so a reload is exact.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), BaselineError> {
        let mut w = csv::Writer::from_writer(writer);
        for ((year, category), cell) in &self.cells {
            w.serialize(CellRow {
                year: *year,
                category: category.as_str().to_owned(),
                mean: cell.mean,
                cited_count: cell.cited_count,
                total_count: cell.total_count,
            })?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, BaselineError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut cells = BTreeMap::new();
        for (idx, row) in rdr.deserialize::<CellRow>().enumerate() {
            let row = row?;
            let line = idx as u64 + 2;
            if !(row.mean.is_finite() && row.mean > 0.0) || row.cited_count == 0 {
                return Err(BaselineError::Malformed {
                    line,
                    message: "cells need a positive mean and at least one cited publication"
                        .into(),
                });
            }
            let key = (row.year, CategoryCode::new(row.category));
            if cells.contains_key(&key) {
                return Err(BaselineError::Malformed {
                    line,
                    message: format!("duplicate cell ({}, {})", key.0, key.1),
                });
            }
            cells.insert(
                key,
                BaselineCell {
                    mean: row.mean,
                    cited_count: row.cited_count,
                    total_count: row.total_count,
                },
            );
        }
        Ok(Self { cells })
    }

    /// SHA-256 of the CSV export.
    pub fn digest(&self) -> String {
        let mut buf = Vec::new();
        // In-memory writes cannot fail.
        self.write_csv(&mut buf).ok();
        hex::encode(Sha256::digest(&buf))
    }
}

/// Builds the table over every baseline publication of the corpus. A
/// publication in k categories contributes to k cells.
pub fn compute_scaling_factors(corpus: &Corpus) -> ScalingFactorTable {
    #[derive(Default)]
    struct Acc {
        sum: u64,
        cited: u64,
        total: u64,
    }
    let mut acc: BTreeMap<(i32, CategoryCode), Acc> = BTreeMap::new();
    for p in corpus.baseline_publications() {
        for cat in &p.subject_categories {
            let a = acc.entry((p.year, cat.clone())).or_default();
            a.total += 1;
            if p.citations > 0 {
                a.cited += 1;
                a.sum += u64::from(p.citations);
            }
        }
    }
    let cells = acc
        .into_iter()
        .filter(|(_, a)| a.cited > 0)
        .map(|(k, a)| {
            (
                k,
                BaselineCell {
                    mean: a.sum as f64 / a.cited as f64,
                    cited_count: a.cited,
                    total_count: a.total,
                },
            )
        })
        .collect();
    ScalingFactorTable { cells }
}

/// The publication's c̄: its cell mean, or the arithmetic mean of the cell
/// means when it sits in several categories.
pub fn scaling_factor(publication: &Publication, table: &ScalingFactorTable) -> Result<f64, BaselineError> {
    let mut sum = 0.0;
    for cat in &publication.subject_categories {
        let cell = table
            .cell(publication.year, cat)
            .ok_or_else(|| BaselineError::MissingBaseline {
                pub_id: publication.pub_id.clone(),
                year: publication.year,
                category: cat.clone(),
            })?;
        sum += cell.mean;
    }
    Ok(sum / publication.subject_categories.len() as f64)
}

/// `citations / scaling_factor`.
pub fn normalized_impact(publication: &Publication, table: &ScalingFactorTable) -> Result<f64, BaselineError> {
    let c_bar = scaling_factor(publication, table)?;
    Ok(f64::from(publication.citations) / c_bar)
}
