//! Rebuilds a published SDS ranking comparison from its printed scores and
//! prints it as a Markdown table.
//!
//! `cargo run --example replay_published [SCORES_CSV]`

use std::fs::File;

use rankdiff::divergence::{quartile_stats, shift_stats};
use rankdiff::report::{compare_replay, read_replay, render_markdown, ScopeReport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/chim08_scores.csv").to_owned());
    let rows = read_replay(File::open(&path)?)?;
    let cmp = compare_replay("CHIM/08", &rows)?;
    let shifts = shift_stats(&cmp);
    let quartiles = quartile_stats(&cmp);
    let view = ScopeReport {
        comparison: &cmp,
        shifts: &shifts,
        quartiles: &quartiles,
        dispersion: &[],
    };
    print!("{}", render_markdown("CHIM/08, FSS vs MNCS", &[view], &[]));
    Ok(())
}
