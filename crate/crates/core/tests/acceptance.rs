//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use cocoa_core::budget::Budget;
use cocoa_core::cocoa::{build_chain_with_budget, verify_chain, Cocoa};
use cocoa_core::fixtures::GOLDEN_CHAINS;
use cocoa_core::formula::{lower_bound_alphabet, lower_bound_family};
use cocoa_core::awa::from_ltl;

use common::*;

const RANDOM_FORMULAS: usize = 200;
const RANDOM_MAX_SIZE: usize = 6;
const GOLDEN_LENGTHS: [usize; 4] = [1, 2, 2, 4];
const MAX_COUNTEREXAMPLES: usize = 0;
const SLTM_PREFIX_LEN: usize = 4;
const LEMMA_PREFIX_LEN: usize = 3;
const LEMMA_SUFFIX_BOUNDS: (usize, usize) = (2, 2);
const LOWER_BOUND_N: usize = 1;
const LOWER_BOUND_MIN_SLTM: usize = 4;
const LOWER_BOUND_LEVELS: usize = 1;
const GOLDEN_TIME: Duration = Duration::from_secs(60);
const MAX_EVEN_TIME: Duration = Duration::from_secs(15 * 60);
const LOWER_BOUND_TIME: Duration = Duration::from_secs(5 * 60);

struct Corpus {
    cases: Vec<Case>,
    chains: Vec<Cocoa>,
    fixtures: usize,
}

fn all_ok<T: Send>(results: Vec<Result<T, String>>) -> Result<Vec<T>, String> {
    results.into_iter().collect()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    if start.elapsed() > limit {
        return Err(format!("took {:.1}s, limit {:.0}s", start.elapsed().as_secs_f64(), limit.as_secs_f64()));
    }
    Ok(())
}

fn golden() -> Result<String, String> {
    let start = Instant::now();
    for (g, &k) in GOLDEN_CHAINS.iter().zip(&GOLDEN_LENGTHS) {
        if g.levels.len() != k {
            return Err(format!("{} fixture lists {} levels", g.name, g.levels.len()));
        }
    }
    all_ok(GOLDEN_CHAINS.par_iter().map(check_golden).collect())?;
    within(GOLDEN_TIME, start)?;
    Ok(format!("chain lengths {GOLDEN_LENGTHS:?}, every level matches its formula on all lassos ({PREFIX},{PERIOD})"))
}

fn max_even(c: &Corpus, start: Instant) -> Result<String, String> {
    let lassos: usize = all_ok(
        c.cases
            .par_iter()
            .zip(&c.chains)
            .map(|(case, chain)| check_max_even(case, chain))
            .collect(),
    )?
    .into_iter()
    .sum();
    within(MAX_EVEN_TIME, start)?;
    Ok(format!(
        "{} formulas ({} fixtures, {RANDOM_FORMULAS} random), {lassos} lasso checks, {MAX_COUNTEREXAMPLES} counterexamples",
        c.cases.len(),
        c.fixtures
    ))
}

fn oracles(c: &Corpus) -> Result<String, String> {
    all_ok(c.cases.par_iter().map(check_awa_vs_eval).collect())?;
    all_ok(c.cases.par_iter().map(check_miyano_hayashi).collect())?;
    let levels: usize = all_ok(
        c.cases
            .par_iter()
            .zip(&c.chains)
            .map(|(case, chain)| check_levels(case, chain).map(|r| r.len()))
            .collect(),
    )?
    .into_iter()
    .sum();
    all_ok(c.cases.par_iter().zip(&c.chains).map(|(case, chain)| check_hd_ncw(case, chain)).collect())?;
    Ok(format!(
        "automaton = evaluator, obligation graphs preserve languages, {levels} levels preserved by determinize/minimize, HD-NCWs agree"
    ))
}

fn structure(c: &Corpus) -> Result<String, String> {
    let results = all_ok(
        c.cases
            .par_iter()
            .zip(&c.chains)
            .map(|(case, chain)| {
                check_sltm(case, chain, SLTM_PREFIX_LEN)?;
                let replay = check_levels(case, chain)?;
                let r = verify_chain(chain, &case.formula, PREFIX, PERIOD);
                if r.monotonicity_violations > 0 {
                    return Err(format!("{}: {} lassos break monotonicity", case.name, r.monotonicity_violations));
                }
                Ok((chain.sltm().len(), replay.iter().map(|l| l.determinized_states as f64 / l.bound).fold(0.0, f64::max)))
            })
            .collect(),
    )?;
    all_ok(
        c.cases[..c.fixtures]
            .par_iter()
            .zip(&c.chains[..c.fixtures])
            .map(|(case, chain)| check_strict(case, chain))
            .collect(),
    )?;
    let max_sltm = results.iter().map(|r| r.0).max().unwrap_or(0);
    Ok(format!(
        "SLTM witnesses, closure and distinct labels hold (largest SLTM {max_sltm}), levels consistent and transient-free, size bound and monotonicity hold, fixture chains strict"
    ))
}

fn lower_bound() -> Result<String, String> {
    let start = Instant::now();
    let alpha = lower_bound_alphabet(LOWER_BOUND_N, true).map_err(|e| e.to_string())?;
    let f = lower_bound_family(LOWER_BOUND_N).map_err(|e| e.to_string())?.to_nnf();
    let a = from_ltl(&f, &alpha).map_err(|e| e.to_string())?;
    let chain = build_chain_with_budget(&a, &Budget::default()).map_err(|e| e.to_string())?;
    let built = start.elapsed();
    if chain.k() != LOWER_BOUND_LEVELS {
        return Err(format!("{} levels", chain.k()));
    }
    if chain.sltm().len() < LOWER_BOUND_MIN_SLTM {
        return Err(format!("SLTM has only {} states", chain.sltm().len()));
    }
    let r = verify_chain(&chain, &f, PREFIX, PERIOD);
    if !r.passed() {
        return Err(format!("verification failed: {r:?}"));
    }
    within(LOWER_BOUND_TIME, start)?;
    Ok(format!(
        "n={LOWER_BOUND_N}: {} level, {} SLTM states, built in {:.1}s, {} lassos verified",
        chain.k(),
        chain.sltm().len(),
        built.as_secs_f64(),
        r.lassos
    ))
}

fn lemmas(c: &Corpus) -> Result<String, String> {
    let compared: usize = all_ok(
        c.cases
            .par_iter()
            .zip(&c.chains)
            .map(|(case, chain)| {
                check_reachable_transitions(case, chain, LEMMA_PREFIX_LEN)?;
                check_same_state_same_levels(case, chain, LEMMA_PREFIX_LEN, LEMMA_SUFFIX_BOUNDS)
            })
            .collect(),
    )?
    .into_iter()
    .sum();
    Ok(format!(
        "{compared} prefix pairs with one SLTM state agree on every level, reachable transitions depend only on the SLTM state"
    ))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: usize, name: &str, start: Instant, r: Result<String, String>| {
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS criterion {n} {name}: {detail} [{secs:.1}s]"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {n} {name}: {e} [{secs:.1}s]");
            }
        }
    };

    let t = Instant::now();
    report(1, "golden chains", t, golden());

    let t = Instant::now();
    let mut cases = fixture_cases();
    let fixtures = cases.len();
    cases.extend(random_cases(RANDOM_FORMULAS, RANDOM_MAX_SIZE));
    let chains: Vec<Cocoa> = cases.par_iter().map(Case::chain).collect();
    let corpus = Corpus { cases, chains, fixtures };
    report(2, "max-even soundness", t, max_even(&corpus, t));

    let t = Instant::now();
    report(3, "construction oracles", t, oracles(&corpus));

    let t = Instant::now();
    report(4, "structural invariants", t, structure(&corpus));

    let t = Instant::now();
    report(5, "lower-bound smoke", t, lower_bound());

    let t = Instant::now();
    report(6, "lemma properties", t, lemmas(&corpus));

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
