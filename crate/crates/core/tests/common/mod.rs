#![allow(dead_code)]

use std::fs::File;
use std::path::PathBuf;

use rankdiff::ranking::{format_percentile_shift, format_rank_shift, round_half_away, ComparisonTable};
use rankdiff::report::{compare_replay, read_replay};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// Replays `<stem>_scores.csv` into a comparison table.
pub fn replay(stem: &str) -> ComparisonTable {
    let rows = read_replay(File::open(data_path(&format!("{stem}_scores.csv"))).unwrap()).unwrap();
    compare_replay(stem, &rows).unwrap()
}

/// One row of a published ranking table, cells kept as printed.
#[derive(Debug, Clone)]
pub struct PublishedRow {
    pub unit: String,
    pub fss_rank: usize,
    pub fss_pct: String,
    pub mncs_rank: usize,
    pub mncs_pct: String,
    pub rank_shift: String,
    pub pct_shift: String,
}

pub fn published(stem: &str) -> Vec<PublishedRow> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .from_path(data_path(&format!("{stem}_expected.tsv")))
        .unwrap();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            PublishedRow {
                unit: r[0].to_owned(),
                fss_rank: r[3].parse().unwrap(),
                fss_pct: r[4].to_owned(),
                mncs_rank: r[6].parse().unwrap(),
                mncs_pct: r[7].to_owned(),
                rank_shift: r[8].to_owned(),
                pct_shift: r[9].to_owned(),
            }
        })
        .collect()
}

/// True when `value`, rounded to the printed precision of `cell`, is within
/// 0.05 of it.
pub fn matches_printed(value: f64, cell: &str) -> bool {
    let decimals = cell.split_once('.').map_or(0, |(_, d)| d.len()) as u32;
    let printed: f64 = cell.parse().unwrap();
    (round_half_away(value, decimals) - printed).abs() <= 0.05 + 1e-9
}

/// Every rank, percentile, rank-shift and percentile-shift cell that
/// disagrees with the published table.
pub fn cell_mismatches(cmp: &ComparisonTable, table: &[PublishedRow]) -> Vec<String> {
    let mut out = Vec::new();
    if cmp.rows.len() != table.len() {
        out.push(format!("{} rows vs {} published", cmp.rows.len(), table.len()));
    }
    for p in table {
        let Some(r) = cmp.rows.iter().find(|r| r.unit.as_str() == p.unit) else {
            out.push(format!("{} missing", p.unit));
            continue;
        };
        let mut bad = |what: &str, ours: String, theirs: &str| {
            out.push(format!("{} {what}: computed {ours}, published {theirs}", p.unit));
        };
        if r.fss.rank != p.fss_rank {
            bad("FSS rank", r.fss.rank.to_string(), &p.fss_rank.to_string());
        }
        if r.mncs.rank != p.mncs_rank {
            bad("MNCS rank", r.mncs.rank.to_string(), &p.mncs_rank.to_string());
        }
        if !matches_printed(r.fss.percentile, &p.fss_pct) {
            bad("FSS percentile", format!("{:.3}", r.fss.percentile), &p.fss_pct);
        }
        if !matches_printed(r.mncs.percentile, &p.mncs_pct) {
            bad("MNCS percentile", format!("{:.3}", r.mncs.percentile), &p.mncs_pct);
        }
        let shift = format_rank_shift(r.rank_shift);
        if shift != p.rank_shift {
            bad("rank shift", shift, &p.rank_shift);
        }
        let pct = format_percentile_shift(r.percentile_shift);
        if pct != p.pct_shift {
            bad("percentile shift", pct, &p.pct_shift);
        }
    }
    out
}

/// One SDS, three universities, window 2008-2012.
pub const TINY_FIELDS: &str = "sds_code,sds_name,uda_code,uda_name\nCHIM/08,Pharmaceutical chemistry,03,Chemistry\n";
pub const TINY_SALARIES: &str = "academic_rank,avg_yearly_salary\nPO,110000\nPA,75000\nRU,50000\n";
pub const TINY_PROFESSORS: &str = "\
professor_id,university_id,sds_code,academic_rank,years_on_staff
A1,UNIV_A,CHIM/08,PO,5
A2,UNIV_A,CHIM/08,RU,5
B1,UNIV_B,CHIM/08,PA,5
B2,UNIV_B,CHIM/08,PA,4
C1,UNIV_C,CHIM/08,RU,5
C2,UNIV_C,CHIM/08,PO,5
C3,UNIV_C,CHIM/08,RU,2
";
pub const TINY_PUBLICATIONS: &str = "\
pub_id,year,doc_type,subject_categories,citations,n_authors_total
W01,2008,article,SC-A,10,3
W02,2008,article,SC-A,2,2
W03,2008,article,SC-A,0,4
W04,2009,review,SC-A|SC-B,6,5
W05,2009,article,SC-B,3,1
W06,2009,article,SC-B,9,2
W07,2010,editorial material,SC-A,4,1
W08,2011,article,SC-A,5,3
W09,2007,article,SC-A,50,1
W10,2011,article,SC-A,1,2
";
pub const TINY_AUTHORSHIPS: &str = "\
pub_id,professor_id
W01,A1
W01,A2
W02,B1
W03,C1
W04,A1
W04,B2
W05,C2
W06,B1
W06,B2
W07,A2
W08,C2
W08,C3
W09,A1
W10,A2
";

pub fn write_tiny_corpus(dir: &std::path::Path) {
    std::fs::create_dir_all(dir).unwrap();
    for (name, text) in [
        ("fields.csv", TINY_FIELDS),
        ("salaries.csv", TINY_SALARIES),
        ("professors.csv", TINY_PROFESSORS),
        ("publications.csv", TINY_PUBLICATIONS),
        ("authorships.csv", TINY_AUTHORSHIPS),
    ] {
        std::fs::write(dir.join(name), text).unwrap();
    }
}

/// Run configuration that ranks scopes with any number of universities.
pub const RANK_ANY: &str = "[filters]\nmin_units_to_rank = 1\n";
