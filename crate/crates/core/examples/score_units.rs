//! FSS and MNCS scoreboards for every SDS of a synthetic corpus.
//!
//! `cargo run --example score_units`

use rankdiff::baselines::compute_scaling_factors;
use rankdiff::corpus::{apply_filters, FilterConfig, Level};
use rankdiff::indicators::ScoringContext;
use rankdiff::ranking::rank;
use rankdiff::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = generate(&SynthConfig::small())?.corpus;
    let cfg = FilterConfig {
        min_units_to_rank: 3,
        ..FilterConfig::default()
    };
    let (corpus, _) = apply_filters(&raw, &cfg);
    let table = compute_scaling_factors(&corpus);
    let ctx = ScoringContext::new(&corpus, &table, &cfg)?;

    for (sds, std) in ctx.standards.iter() {
        println!("national mean FSS of productive {sds} professors: {std:.3e}");
    }

    let level = ctx.score_level(Level::Sds, &cfg)?;
    for nr in &level.not_rankable {
        println!("{} skipped: {}", nr.scope, nr.reason);
    }
    for b in &level.boards {
        println!("\n{}", b.scope);
        let fss = rank(&b.fss)?;
        for e in &fss.entries {
            let m = b.mncs.scores.iter().find(|s| s.unit.university == e.unit).unwrap();
            println!(
                "  #{:<2} {:<8} staff {:>2}  FSS {:.3}  MNCS {:.3}",
                e.rank,
                e.unit.as_str(),
                e.staff.unwrap_or(0),
                e.score,
                m.score
            );
        }
    }
    Ok(())
}
