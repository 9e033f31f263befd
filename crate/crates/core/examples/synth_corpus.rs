//! Generates a preset synthetic corpus and reports the quantity-impact
//! correlation it achieved.
//!
//! `cargo run --release --example synth_corpus -- [PRESET] [OUT_DIR]`

use rankdiff::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "small".to_owned());
    let cfg = SynthConfig::preset(&name)
        .ok_or_else(|| format!("unknown preset {name}; try one of {}", SynthConfig::PRESETS.join(", ")))?;

    let start = std::time::Instant::now();
    let s = generate(&cfg)?;
    let r = &s.report;
    println!("{name}: {} professors, {} publications in {:.2?}", r.professors, r.publications, start.elapsed());
    println!(
        "seed {} attempt {} coupling {:.3} measured r {}",
        r.seed,
        r.attempt,
        r.latent_coupling,
        r.measured_quantity_impact_corr.map_or("n/a".into(), |x| format!("{x:.3}"))
    );
    if let Some(out) = args.next() {
        s.corpus.write_csv_dir(out.as_ref())?;
        println!("written to {out}");
    }
    Ok(())
}
