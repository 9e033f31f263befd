//! Citation baselines per (year, subject category) and the normalized impact
//! of a few publications.
//!
//! `cargo run --example baselines`

use rankdiff::baselines::{compute_scaling_factors, normalized_impact};
use rankdiff::corpus::{apply_filters, FilterConfig};
use rankdiff::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = generate(&SynthConfig::small())?.corpus;
    let (corpus, _) = apply_filters(&raw, &FilterConfig::default());
    let table = compute_scaling_factors(&corpus);

    println!("{} cells", table.len());
    println!("{:>6} {:>8} {:>6} {:>6} {:>8}", "year", "category", "pubs", "cited", "mean");
    for ((year, cat), cell) in table.cells().take(12) {
        println!("{year:>6} {:>8} {:>6} {:>6} {:>8.3}", cat.as_str(), cell.total_count, cell.cited_count, cell.mean);
    }

    println!();
    for p in corpus.publications().take(8) {
        let cats: Vec<&str> = p.subject_categories.iter().map(|c| c.as_str()).collect();
        match normalized_impact(p, &table) {
            Ok(x) => println!("{} {} [{}] c={} -> {x:.3}", p.pub_id, p.year, cats.join("|"), p.citations),
            Err(e) => println!("{} skipped: {e}", p.pub_id),
        }
    }
    Ok(())
}
