//! How far FSS and MNCS rankings disagree, scope by scope, on a synthetic
//! chemistry-like corpus.
//!
//! `cargo run --release --example divergence`

use rankdiff::baselines::compute_scaling_factors;
use rankdiff::corpus::{apply_filters, FilterConfig, Level, Scope};
use rankdiff::ids::SdsCode;
use rankdiff::divergence::{dispersion, quartile_stats, range_summary, shift_stats};
use rankdiff::indicators::ScoringContext;
use rankdiff::ranking::{compare, rank};
use rankdiff::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = generate(&SynthConfig::chemistry_like())?.corpus;
    let cfg = FilterConfig::default();
    let (corpus, _) = apply_filters(&raw, &cfg);
    let table = compute_scaling_factors(&corpus);
    let ctx = ScoringContext::new(&corpus, &table, &cfg)?;

    let mut per_sds = Vec::new();
    println!("{:<10} {:>3} {:>8} {:>6} {:>4} {:>8} {:>8}", "scope", "n", "shifting", "mean", "max", "pearson", "spearman");
    for level in Level::ALL {
        for b in ctx.score_level(level, &cfg)?.boards {
            let cmp = compare(&rank(&b.fss)?, &rank(&b.mncs)?)?;
            let s = shift_stats(&cmp);
            println!(
                "{:<10} {:>3} {:>7.1}% {:>6.2} {:>4} {:>8.3} {:>8.3}",
                b.scope.code(),
                s.n_units,
                s.pct_shifting_rank,
                s.mean_abs_shift,
                s.max_abs_shift,
                s.pearson.unwrap_or(f64::NAN),
                s.spearman.unwrap_or(f64::NAN)
            );
            if b.scope == Scope::Overall {
                let q = quartile_stats(&cmp);
                println!(
                    "  quartiles: {:.1}% move, mean {:.2}, max {}, {:.1}% of Q1 leave it",
                    q.pct_shifting_quartile, q.mean_abs_quartile_shift, q.max_quartile_shift, q.pct_leaving_q1
                );
                for d in [dispersion(&b.fss)?, dispersion(&b.mncs)?] {
                    println!("  {}: mean {:.3} sd {:.3} cv {:.3}", d.indicator, d.mean, d.std_dev, d.coefficient_of_variation);
                }
            }
            if level == Level::Sds {
                per_sds.push(s);
            }
        }
    }

    for uda in corpus.fields().uda_codes() {
        let members: Vec<_> = per_sds
            .iter()
            .filter(|s| corpus.fields().uda_of(&SdsCode::new(s.label.as_str())) == Some(uda))
            .cloned()
            .collect();
        let Ok(r) = range_summary(&members, uda) else { continue };
        println!(
            "\nUDA {uda}: {} SDS, shifting {:.1}-{:.1}%, max shift {}-{}",
            r.n_sds, r.pct_shifting_rank.min, r.pct_shifting_rank.max, r.max_abs_shift.min, r.max_abs_shift.max
        );
    }
    Ok(())
}
