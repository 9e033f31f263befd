//! Acceptance gate: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use rankdiff::baselines::{compute_scaling_factors, normalized_impact, ScalingFactorTable};
use rankdiff::corpus::{Authorship, Corpus, FilterConfig, Level, Professor, Publication, Scope};
use rankdiff::divergence::{dispersion_of, pearson, quartile_stats, shift_stats, spearman};
use rankdiff::ids::{CategoryCode, ProfessorId, PubId, UniversityId};
use rankdiff::indicators::{fss_unit, mncs_unit, FssStandards, Indicator, ProfessorScores, ScoringContext};
use rankdiff::ranking::{compare, percentile, quartile, rank_scores, round_half_away, ComparisonTable, ScoredUnit};
use rankdiff::synth::{generate, SynthConfig};

use common::{cell_mismatches, published, replay};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

/// Collects sub-check failures for one criterion.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn near(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let line = format!("{what} = {got:.4} (want {want} ± {tol})");
        if (got - want).abs() <= tol + 1e-12 {
            self.notes.push(line);
        } else {
            self.failed.push(line);
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got == want {
            self.notes.push(format!("{what} = {got:?}"));
        } else {
            self.failed.push(format!("{what} = {got:?} (want {want:?})"));
        }
    }

    fn truth(&mut self, what: &str, ok: bool) {
        if ok {
            self.notes.push(what.to_owned());
        } else {
            self.failed.push(what.to_owned());
        }
    }

    fn outcome(self) -> Outcome {
        if self.failed.is_empty() {
            Ok(self.notes.join("; "))
        } else {
            Err(format!("failed: {} | passed: {}", self.failed.join("; "), self.notes.join("; ")))
        }
    }
}

fn runtime(c: &mut Checks, what: &str, elapsed: Duration, limit: Duration) {
    c.truth(
        &format!("{what} in {:.3}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs_f64()),
        elapsed < limit,
    );
}

fn replay_cells(c: &mut Checks, stem: &str) -> ComparisonTable {
    let t = Instant::now();
    let cmp = replay(stem);
    runtime(c, "replay", t.elapsed(), Duration::from_secs(1));
    let bad = cell_mismatches(&cmp, &published(stem));
    if bad.is_empty() {
        c.notes.push(format!("all {} rows match the published table", cmp.n()));
    } else {
        c.failed.push(format!("{} cell mismatches: {}", bad.len(), bad.join(", ")));
    }
    cmp
}

fn criterion_1() -> Outcome {
    let mut c = Checks::default();
    let cmp = replay_cells(&mut c, "chim08");
    let (f, m) = (cmp.fss_scores(), cmp.mncs_scores());
    c.near("Pearson", pearson(&f, &m).unwrap(), 0.864, 0.01);
    c.near("Spearman", spearman(&f, &m).unwrap(), 0.756, 0.01);
    c.outcome()
}

fn criterion_2() -> Outcome {
    let mut c = Checks::default();
    let s = shift_stats(&replay("chim08"));
    c.near("% shifting", round_half_away(s.pct_shifting_rank, 1), 89.7, 0.05);
    c.near("mean |shift|", s.mean_abs_shift, 4.6, 0.05);
    c.eq("median |shift|", s.median_abs_shift, 4.0);
    c.eq("max |shift|", s.max_abs_shift, 14);
    c.near("mean percentile shift", s.mean_pct_shift, 16.5, 0.1);
    c.near("max percentile shift", s.max_pct_shift, 50.0, 0.1);
    c.outcome()
}

fn criterion_3() -> Outcome {
    let mut c = Checks::default();
    let cmp = replay_cells(&mut c, "chemistry_uda");
    let s = shift_stats(&cmp);
    c.near("% shifting", round_half_away(s.pct_shifting_rank, 1), 88.6, 0.05);
    c.near("mean |shift|", s.mean_abs_shift, 5.2, 0.05);
    c.eq("median |shift|", s.median_abs_shift, 4.0);
    c.eq("max |shift|", s.max_abs_shift, 18);
    c.near("max percentile shift", s.max_pct_shift, 41.9, 0.1);
    c.near("Spearman", s.spearman.unwrap(), 0.851, 0.01);
    let p = s.pearson.unwrap();
    let prose = (p - 0.504).abs() <= 0.01;
    let table = (p - 0.805).abs() <= 0.01;
    c.truth(
        &format!(
            "Pearson {p:.4}: matches 0.504 {prose}, matches 0.805 {table}"
        ),
        prose || table,
    );
    c.outcome()
}

fn criterion_4() -> Outcome {
    let mut c = Checks::default();
    let t = Instant::now();
    let cmp = replay("overall");
    runtime(&mut c, "replay", t.elapsed(), Duration::from_secs(1));
    let top = cmp
        .rows
        .iter()
        .max_by(|a, b| a.percentile_shift.abs().total_cmp(&b.percentile_shift.abs()))
        .unwrap();
    c.near("max |percentile shift|", top.percentile_shift.abs(), 66.7, 0.05);
    c.eq("FSS rank of that unit", top.fss.rank, 13);
    c.eq("its rank shift", top.rank_shift, -42);
    let s = shift_stats(&cmp);
    c.near("Pearson", s.pearson.unwrap(), 0.574, 0.01);
    c.near("Spearman", s.spearman.unwrap(), 0.615, 0.01);
    c.near("mean percentile shift", s.mean_pct_shift, 20.0, 0.5);
    c.near("median percentile shift", s.median_pct_shift, 16.0, 1.0);
    let q = quartile_stats(&cmp);
    c.near("% shifting quartile", round_half_away(q.pct_shifting_quartile, 1), 48.4, 0.05);
    c.near("mean quartile shift", q.mean_abs_quartile_shift, 0.7, 0.05);
    c.eq("max quartile shift", q.max_quartile_shift, 3);
    c.near("% leaving Q1", round_half_away(q.pct_leaving_q1, 1), 31.3, 0.05);
    c.outcome()
}

fn criterion_5() -> Outcome {
    let mut c = Checks::default();
    let cmp = replay("overall");
    for (ind, vals, want) in [
        (Indicator::Fss, cmp.fss_scores(), (0.927, 0.385, 0.416)),
        (Indicator::Mncs, cmp.mncs_scores(), (0.744, 0.112, 0.150)),
    ] {
        let d = dispersion_of("overall", ind, &vals).unwrap();
        c.near(&format!("{ind} mean"), d.mean, want.0, 0.005);
        c.near(&format!("{ind} std"), d.std_dev, want.1, 0.005);
        c.near(&format!("{ind} CV"), d.coefficient_of_variation, want.2, 0.005);
    }
    c.outcome()
}

fn criterion_6() -> Outcome {
    let mut c = Checks::default();
    c.eq("percentile(25, 49)", round_half_away(percentile(25, 49).unwrap(), 1), 50.0);
    c.eq("percentile(40, 49)", round_half_away(percentile(40, 49).unwrap(), 1), 18.8);
    c.outcome()
}

// Property criteria on small synthetic corpora.

const CASES: u32 = 256;

fn runner() -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases: CASES,
            failure_persistence: None,
            max_global_rejects: 100_000,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn small_corpus(seed: u64, universities: usize, multi_category_prob: f64) -> Corpus {
    let cfg = SynthConfig {
        seed,
        n_universities: universities,
        multi_category_prob,
        ..SynthConfig::small()
    };
    generate(&cfg).expect("small synthetic corpus").corpus
}

fn scopes_of(corpus: &Corpus, university: &UniversityId) -> Vec<Scope> {
    let mut set = BTreeSet::new();
    for p in corpus.staff(university) {
        set.insert(Scope::Sds(p.sds_code.clone()));
        if let Some(uda) = corpus.fields().uda_of(&p.sds_code) {
            set.insert(Scope::Uda(uda.clone()));
        }
    }
    set.insert(Scope::Overall);
    set.into_iter().collect()
}

fn pick<T: Clone>(items: &[T], i: usize) -> T {
    items[i % items.len()].clone()
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Outcome {
    let t = Instant::now();
    match runner().run(&strategy, test) {
        Ok(()) => Ok(format!("{CASES} cases passed in {:.2}s", t.elapsed().as_secs_f64())),
        Err(e) => Err(format!("{name}: {e}")),
    }
}

fn criterion_7() -> Outcome {
    let strategy = (
        any::<u64>(),
        3usize..7,
        any::<usize>(),
        any::<usize>(),
        any::<bool>(),
        0.0f64..1.0,
        1u32..6,
        any::<usize>(),
    );
    run_property("MNCS paradox", strategy, |(seed, nu, ui, si, below, frac, n_total, ci)| {
        let corpus = small_corpus(seed, nu, 0.25);
        let table = compute_scaling_factors(&corpus);
        let univs: Vec<UniversityId> = corpus.universities().cloned().collect();
        let u = pick(&univs, ui);
        let scope = pick(&scopes_of(&corpus, &u), si);
        let Ok(before) = mncs_unit(&u, &scope, &corpus, &table) else {
            return Err(TestCaseError::reject("unit has no publications"));
        };
        let m = before.score;
        let cells: Vec<(i32, CategoryCode, f64)> =
            table.cells().map(|((y, c), cell)| (*y, c.clone(), cell.mean)).collect();
        let (year, cat, c_bar) = pick(&cells, ci);
        let citations = if below {
            prop_assume!(m > 0.0);
            let c = (frac * m * c_bar).floor() as u32;
            prop_assume!(f64::from(c) / c_bar < m);
            c
        } else {
            (m * c_bar).floor() as u32 + 1 + (frac * 5.0) as u32
        };
        let impact = f64::from(citations) / c_bar;
        let ordered = if below { impact < m } else { impact > m };
        prop_assert!(ordered);

        let staff: Vec<&Professor> = corpus.professors_in_scope(&u, &scope).collect();
        let authors = staff.len().min(n_total as usize).max(1);
        let mut parts = corpus.to_parts();
        let id = PubId::new("ADDED");
        parts.publications.push(Publication {
            pub_id: id.clone(),
            year,
            doc_type: rankdiff::corpus::DocType::new("article"),
            subject_categories: vec![cat],
            citations,
            n_authors_total: n_total.max(authors as u32),
        });
        for p in staff.iter().take(authors) {
            parts.authorships.push(Authorship {
                pub_id: id.clone(),
                professor_id: p.professor_id.clone(),
            });
        }
        let grown = Corpus::from_parts(parts).unwrap();
        let after = mncs_unit(&u, &scope, &grown, &table).unwrap().score;
        if below {
            prop_assert!(after < m, "impact {impact} < MNCS {m} but MNCS went to {after}");
        } else {
            prop_assert!(after > m, "impact {impact} > MNCS {m} but MNCS went to {after}");
        }
        Ok(())
    })
}

/// Copies every professor of `u` (same university, fresh ids) together with
/// every publication they authored, keeping only the copies' authorships.
fn clone_university(corpus: &Corpus, u: &UniversityId) -> Corpus {
    let mut parts = corpus.to_parts();
    let members: BTreeSet<ProfessorId> = corpus.staff(u).map(|p| p.professor_id.clone()).collect();
    let fresh = |id: &str| format!("CLONE_{id}");
    for p in corpus.staff(u) {
        parts.professors.push(Professor {
            professor_id: ProfessorId::new(fresh(p.professor_id.as_str())),
            ..p.clone()
        });
    }
    let touched: BTreeSet<&PubId> = corpus
        .authorships()
        .iter()
        .filter(|a| members.contains(&a.professor_id))
        .map(|a| &a.pub_id)
        .collect();
    for id in touched {
        let original = corpus.publication(id).unwrap();
        let copy_id = PubId::new(fresh(id.as_str()));
        parts.publications.push(Publication {
            pub_id: copy_id.clone(),
            ..original.clone()
        });
        for a in corpus.authors_of(id).iter().filter(|a| members.contains(*a)) {
            parts.authorships.push(Authorship {
                pub_id: copy_id.clone(),
                professor_id: ProfessorId::new(fresh(a.as_str())),
            });
        }
    }
    Corpus::from_parts(parts).unwrap()
}

fn criterion_8() -> Outcome {
    run_property(
        "size independence",
        (any::<u64>(), 3usize..7, any::<usize>()),
        |(seed, nu, ui)| {
            let corpus = small_corpus(seed, nu, 0.25);
            let table: ScalingFactorTable = compute_scaling_factors(&corpus);
            let scores = ProfessorScores::compute(&corpus, &table).unwrap();
            let standards = FssStandards::national(&corpus, &scores);
            let univs: Vec<UniversityId> = corpus.universities().cloned().collect();
            let u = pick(&univs, ui);
            let doubled = clone_university(&corpus, &u);
            let scores2 = ProfessorScores::compute(&doubled, &table).unwrap();
            for scope in scopes_of(&corpus, &u) {
                let f1 = fss_unit(&u, &scope, &corpus, &scores, &standards);
                let f2 = fss_unit(&u, &scope, &doubled, &scores2, &standards);
                match (f1, f2) {
                    (Ok(a), Ok(b)) => {
                        prop_assert!((a.score - b.score).abs() <= 1e-9, "FSS {scope}: {} vs {}", a.score, b.score);
                        prop_assert_eq!(b.headcount, 2 * a.headcount);
                    }
                    (Err(_), Err(_)) => {}
                    (a, b) => prop_assert!(false, "FSS {scope}: {a:?} vs {b:?}"),
                }
                let m1 = mncs_unit(&u, &scope, &corpus, &table);
                let m2 = mncs_unit(&u, &scope, &doubled, &table);
                match (m1, m2) {
                    (Ok(a), Ok(b)) => {
                        prop_assert!((a.score - b.score).abs() <= 1e-9, "MNCS {scope}: {} vs {}", a.score, b.score)
                    }
                    (Err(_), Err(_)) => {}
                    (a, b) => prop_assert!(false, "MNCS {scope}: {a:?} vs {b:?}"),
                }
            }
            Ok(())
        },
    )
}

fn criterion_9() -> Outcome {
    run_property(
        "salary scaling",
        (any::<u64>(), 3usize..7, -2.0f64..2.0),
        |(seed, nu, log_k)| {
            let k = 10f64.powf(log_k);
            let corpus = small_corpus(seed, nu, 0.25);
            let mut parts = corpus.to_parts();
            parts.salaries = parts.salaries.scaled(k);
            let scaled = Corpus::from_parts(parts).unwrap();
            let table = compute_scaling_factors(&corpus);
            let cfg = FilterConfig::permissive();
            let a = ScoringContext::new(&corpus, &table, &cfg).unwrap();
            let b = ScoringContext::new(&scaled, &table, &cfg).unwrap();
            for level in Level::ALL {
                for scope in corpus.scopes(level) {
                    let mut xs = Vec::new();
                    let mut ys = Vec::new();
                    for u in corpus.universities() {
                        match (a.fss_unit(u, &scope), b.fss_unit(u, &scope)) {
                            (Ok(x), Ok(y)) => {
                                prop_assert!((x.score - y.score).abs() <= 1e-9, "{u} {scope}: {} vs {}", x.score, y.score);
                                xs.push(ScoredUnit::new(u.clone(), x.score));
                                ys.push(ScoredUnit::new(u.clone(), y.score));
                            }
                            (Err(_), Err(_)) => {}
                            (x, y) => prop_assert!(false, "{u} {scope}: {x:?} vs {y:?}"),
                        }
                    }
                    if xs.is_empty() {
                        continue;
                    }
                    let rx = rank_scores("a", xs).unwrap();
                    let ry = rank_scores("b", ys).unwrap();
                    for (ex, ey) in rx.entries.iter().zip(&ry.entries) {
                        if ex.unit != ey.unit {
                            // Only scores equal to within rounding may swap.
                            prop_assert!((ex.score - rx.get(&ey.unit).unwrap().score).abs() <= 1e-9);
                        }
                    }
                }
            }
            Ok(())
        },
    )
}

fn criterion_10() -> Outcome {
    run_property(
        "citation rescaling",
        (any::<u64>(), 3usize..7, prop_oneof![Just(0.0), Just(0.25), Just(0.5)], any::<usize>(), 2u32..10),
        |(seed, nu, multi, ci, factor)| {
            let corpus = small_corpus(seed, nu, multi);
            let table = compute_scaling_factors(&corpus);
            let cells: Vec<(i32, CategoryCode)> = table.cells().map(|(k, _)| k.clone()).collect();
            let (year, cat) = pick(&cells, ci);
            let in_cell = |p: &Publication| p.year == year && p.subject_categories.contains(&cat);

            let mut parts = corpus.to_parts();
            for p in parts.publications.iter_mut().filter(|p| in_cell(p)) {
                p.citations *= factor;
            }
            let rescaled = Corpus::from_parts(parts).unwrap();
            let table2 = compute_scaling_factors(&rescaled);
            for p in corpus.publications().filter(|p| in_cell(p) && p.subject_categories.len() == 1) {
                let before = normalized_impact(p, &table).unwrap();
                let after = normalized_impact(rescaled.publication(&p.pub_id).unwrap(), &table2).unwrap();
                prop_assert!((before - after).abs() <= 1e-12, "{}: {before} vs {after}", p.pub_id);
            }

            for ((y, c), cell) in table.cells() {
                let members: Vec<&Publication> = corpus
                    .baseline_publications()
                    .filter(|p| p.year == *y && p.subject_categories.contains(c))
                    .collect();
                let cited: Vec<&&Publication> = members.iter().filter(|p| p.citations > 0).collect();
                let per_cell =
                    cited.iter().map(|p| f64::from(p.citations) / cell.mean).sum::<f64>() / cited.len() as f64;
                prop_assert!((per_cell - 1.0).abs() <= 1e-12, "cell ({y}, {c}): {per_cell}");
                if members.iter().all(|p| p.subject_categories.len() == 1) {
                    let mean = cited.iter().map(|p| normalized_impact(p, &table).unwrap()).sum::<f64>()
                        / cited.len() as f64;
                    prop_assert!((mean - 1.0).abs() <= 1e-12, "cell ({y}, {c}): {mean}");
                }
            }
            Ok(())
        },
    )
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

fn criterion_11() -> Outcome {
    let mut c = Checks::default();
    let t = Instant::now();
    let r = runner().run(
        &proptest::collection::vec(-1e6f64..1e6, 3..60),
        |xs| {
            let ys: Vec<f64> = xs.iter().map(|x| x.sin() * 1e3 + x * 0.1).collect();
            let distinct = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<BTreeSet<_>>().len() == v.len();
            prop_assume!(distinct(&xs) && distinct(&ys));
            let ranks = |v: &[f64]| {
                let mut idx: Vec<usize> = (0..v.len()).collect();
                idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
                let mut r = vec![0.0; v.len()];
                for (pos, &i) in idx.iter().enumerate() {
                    r[i] = (pos + 1) as f64;
                }
                r
            };
            let want = pearson(&ranks(&xs), &ranks(&ys));
            prop_assert_eq!(spearman(&xs, &ys), want);
            Ok(())
        },
    );
    c.truth(
        &format!("spearman == pearson of ranks over {CASES} tie-free cases"),
        r.is_ok(),
    );
    if let Err(e) = r {
        c.failed.push(e.to_string());
    }

    let mut pairs = 0u64;
    let mut mismatches = Vec::new();
    for n in 1..=6usize {
        let perms = permutations(n);
        let units: Vec<UniversityId> = (0..n).map(|i| UniversityId::new(format!("U{i}"))).collect();
        let step = if n > 1 { 100.0 / (n - 1) as f64 } else { 0.0 };
        for sf in &perms {
            for sm in &perms {
                pairs += 1;
                // sf[i] is unit i's 0-based FSS position.
                let board = |s: &Vec<usize>| {
                    rank_scores(
                        "p",
                        (0..n).map(|i| ScoredUnit::new(units[i].clone(), (n - s[i]) as f64)).collect(),
                    )
                    .unwrap()
                };
                let cmp = compare(&board(sf), &board(sm)).unwrap();
                let got = shift_stats(&cmp);
                let gq = quartile_stats(&cmp);

                let shifts: Vec<i64> = (0..n).map(|i| sf[i] as i64 - sm[i] as i64).collect();
                let mut abs: Vec<u64> = shifts.iter().map(|d| d.unsigned_abs()).collect();
                abs.sort_unstable();
                let moved = shifts.iter().filter(|&&d| d != 0).count();
                let mean = abs.iter().sum::<u64>() as f64 / n as f64;
                let median = if n % 2 == 1 {
                    abs[n / 2] as f64
                } else {
                    (abs[n / 2 - 1] + abs[n / 2]) as f64 / 2.0
                };
                let max = *abs.last().unwrap();
                let q = |pos: usize| (4 * (pos + 1)).div_ceil(n) as u8;
                let qs: Vec<u8> = (0..n).map(|i| q(sf[i]).abs_diff(q(sm[i]))).collect();
                let q1: Vec<usize> = (0..n).filter(|&i| q(sf[i]) == 1).collect();
                let leaving = q1.iter().filter(|&&i| q(sm[i]) != 1).count();

                let ok = close(got.pct_shifting_rank, 100.0 * moved as f64 / n as f64)
                    && close(got.mean_abs_shift, mean)
                    && close(got.median_abs_shift, median)
                    && got.max_abs_shift == max
                    && close(got.mean_pct_shift, mean * step)
                    && close(got.median_pct_shift, median * step)
                    && close(got.max_pct_shift, max as f64 * step)
                    && close(gq.pct_shifting_quartile, 100.0 * qs.iter().filter(|&&d| d > 0).count() as f64 / n as f64)
                    && close(gq.mean_abs_quartile_shift, qs.iter().map(|&d| f64::from(d)).sum::<f64>() / n as f64)
                    && gq.max_quartile_shift == *qs.iter().max().unwrap()
                    && close(
                        gq.pct_leaving_q1,
                        if q1.is_empty() { 0.0 } else { 100.0 * leaving as f64 / q1.len() as f64 },
                    )
                    && (0..n).all(|i| quartile(sf[i] + 1, n) == q(sf[i]));
                if !ok && mismatches.len() < 5 {
                    mismatches.push(format!("n={n} fss={sf:?} mncs={sm:?}"));
                }
            }
        }
    }
    c.truth(
        &format!("shift/quartile stats equal the enumeration oracle on all {pairs} permutation pairs (n ≤ 6)"),
        mismatches.is_empty(),
    );
    if !mismatches.is_empty() {
        c.failed.push(mismatches.join(", "));
    }
    c.notes.push(format!("{:.2}s", t.elapsed().as_secs_f64()));
    c.outcome()
}

fn read_tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_owned()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().unwrap() != "manifest.json" {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn criterion_12() -> Outcome {
    let mut c = Checks::default();
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");

    let t = Instant::now();
    let run = |args: &[&str]| rankdiff::cli::run_from_args(std::iter::once("rankdiff").chain(args.iter().copied()));
    let code = run(&["synth", "--preset", "scale", "--out", data.to_str().unwrap()]);
    c.eq("synth exit code", code, 0);
    c.notes.push(format!("generation {:.2}s", t.elapsed().as_secs_f64()));
    let corpus = rankdiff::corpus::load_corpus(
        &rankdiff::corpus::CorpusPaths::in_dir(&data),
        rankdiff::corpus::ObservationWindow::default(),
    )
    .unwrap();
    let r = corpus.report();
    c.truth(
        &format!("{} universities, {} professors, {} publications", r.universities, r.professors, r.publications),
        r.universities == 50
            && (4_500..=5_500).contains(&r.professors)
            && (18_000..=22_000).contains(&r.publications),
    );

    let again = tmp.path().join("data2");
    run(&["synth", "--preset", "scale", "--out", again.to_str().unwrap()]);
    c.truth("synth output identical across runs", read_tree(&data) == read_tree(&again));

    let pipeline = |out: &Path| -> Duration {
        let t = Instant::now();
        for level in ["sds", "uda", "overall"] {
            let o = out.join(level);
            let d = data.to_str().unwrap();
            assert_eq!(run(&["score", "--data", d, "--level", level, "--out", o.to_str().unwrap()]), 0);
            assert_eq!(
                run(&["compare", "--data", d, "--level", level, "--out", o.to_str().unwrap(), "--force"]),
                0
            );
        }
        t.elapsed()
    };
    let first = pipeline(&tmp.path().join("run1"));
    let second = pipeline(&tmp.path().join("run2"));
    runtime(&mut c, "score + compare + summarize, all levels", first, Duration::from_secs(10));
    c.notes.push(format!("second run {:.2}s", second.as_secs_f64()));
    let a = read_tree(&tmp.path().join("run1"));
    let b = read_tree(&tmp.path().join("run2"));
    c.truth(&format!("{} output files byte-identical across runs", a.len()), !a.is_empty() && a == b);
    c.outcome()
}

fn main() {
    let criteria: &[(&str, Criterion)] = &[
        ("1  CHIM/08 replay: cells and correlations", criterion_1),
        ("2  CHIM/08 shift statistics", criterion_2),
        ("3  Chemistry UDA replay and summary row", criterion_3),
        ("4  overall replay: shifts, correlations, quartiles", criterion_4),
        ("5  overall dispersion", criterion_5),
        ("6  percentile examples", criterion_6),
        ("7  MNCS paradox", criterion_7),
        ("8  size independence", criterion_8),
        ("9  salary scaling", criterion_9),
        ("10 within-cell citation rescaling", criterion_10),
        ("11 rank correlation and shift oracles", criterion_11),
        ("12 scale run", criterion_12),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for &(name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|w| name.contains(w.as_str())) {
            continue;
        }
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
