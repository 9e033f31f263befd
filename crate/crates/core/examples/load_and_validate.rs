//! Writes a small synthetic corpus to disk, loads it back and applies the
//! default filters.
//!
//! `cargo run --example load_and_validate [DIR]`

use rankdiff::corpus::{apply_filters, load_corpus, CorpusPaths, FilterConfig, ObservationWindow};
use rankdiff::synth::{generate, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tmp = tempfile::tempdir()?;
    let dir = std::env::args().nth(1).map_or_else(|| tmp.path().to_owned(), Into::into);
    if !CorpusPaths::in_dir(&dir).publications.exists() {
        generate(&SynthConfig::small())?.corpus.write_csv_dir(&dir)?;
    }

    let corpus = match load_corpus(&CorpusPaths::in_dir(&dir), ObservationWindow::default()) {
        Ok(c) => c,
        Err(e) => {
            for v in e.violations() {
                eprintln!("{v}");
            }
            return Err(e.into());
        }
    };
    let r = corpus.report();
    println!(
        "{} publications, {} authorships, {} professors in {} universities, {} SDS in {} UDAs",
        r.publications, r.authorships, r.professors, r.universities, r.sds, r.udas
    );

    let (filtered, report) = apply_filters(&corpus, &FilterConfig::default());
    println!("filtered: {report:?}");
    println!("left: {} professors, {} publications", filtered.professors().count(), filtered.publications().count());
    println!("digest {}", corpus.digest());
    Ok(())
}
