//! `cocoa`: translate LTL formulas into chains of co-Büchi automata, compute
//! natural colors, verify chains against the formula and run the lower-bound
//! benchmark.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cocoa_core::awa::from_ltl;
use cocoa_core::budget::{Budget, DEFAULT_MAX_STATES};
use cocoa_core::cocoa::{build_chain_with_budget, chain_from_sltm, natural_color, verify_chain, Cocoa, VerifyReport};
use cocoa_core::fixtures::{random_corpus, CORPUS_APS, CORPUS_SEED};
use cocoa_core::formula::{collect_identifiers, lower_bound_alphabet, lower_bound_family, parse_ltl};
use cocoa_core::hoa::to_hoa;
use cocoa_core::sltm::build_canonical_sltm_with_budget;
use cocoa_core::{Alphabet, Error, Formula, LassoWord};

#[derive(Parser)]
#[command(name = "cocoa", version, about = "LTL to chains of co-Büchi automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Artifact format written to --out
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Directory for artifacts
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Largest automaton any construction step may produce
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES as u64, value_parser = clap::value_parser!(u64).range(1..))]
    max_states: u64,

    /// Wall-clock budget in seconds
    #[arg(long, global = true, default_value_t = 300, value_parser = clap::value_parser!(u64).range(1..))]
    timeout_s: u64,

    /// Seed for randomized runs
    #[arg(long, global = true, default_value_t = CORPUS_SEED)]
    seed: u64,

    /// Print reports as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Atomic propositions, comma separated; defaults to the formula's identifiers in order
    #[arg(long, global = true, value_delimiter = ',')]
    aps: Option<Vec<String>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Hoa,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutation {
    DropAccepting,
}

#[derive(Args)]
struct Input {
    /// LTL formula, e.g. "GF a -> GF b"
    formula: Option<String>,

    /// Read the formula from a file instead
    #[arg(long, conflicts_with = "formula")]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the chain and report its levels
    Translate {
        #[command(flatten)]
        input: Input,
    },
    /// Natural color of a lasso word such as "{a};{a}{}"
    Color {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        word: String,
    },
    /// Check color parity against the formula on all bounded lassos
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        prefix: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        period: u64,
        /// Inject a fault before verifying
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
        /// Level to mutate; defaults to the last one
        #[arg(long, requires = "mutate")]
        level: Option<usize>,
        /// Verify this many random formulas over a, b instead of one formula
        #[arg(long, conflicts_with_all = ["formula", "input", "mutate"])]
        random: Option<usize>,
        /// Node bound for random formulas
        #[arg(long, default_value_t = 6)]
        max_size: usize,
    },
    /// Build the chain of the lower-bound family for parameter n
    Bench {
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Use every letter instead of the letters with exactly one proposition
        #[arg(long)]
        full_alphabet: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl Cli {
    fn budget(&self) -> Budget {
        Budget::new(self.max_states as usize, Some(Duration::from_secs(self.timeout_s)))
    }

    fn emit(&self, report: &Value, text: &str) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
        } else {
            print!("{text}");
        }
    }
}

struct Source {
    text: String,
    formula: Formula,
    alphabet: Alphabet,
}

fn read_formula(cli: &Cli, input: &Input) -> Result<Source, Failure> {
    let text = match (&input.formula, &input.input) {
        (Some(f), _) => f.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?
            .trim()
            .to_string(),
        (None, None) => return Err(usage("a formula or --input is required")),
    };
    let aps = match &cli.aps {
        Some(aps) => aps.clone(),
        None => {
            let found = collect_identifiers(&text)?;
            if found.is_empty() {
                vec!["p".to_string()]
            } else {
                found
            }
        }
    };
    let formula = parse_ltl(&text, &aps)?.to_nnf();
    let alphabet = Alphabet::full(&aps)?;
    Ok(Source { text, formula, alphabet })
}

fn build(cli: &Cli, src: &Source) -> Result<Cocoa, Failure> {
    let a = from_ltl(&src.formula, &src.alphabet)?;
    let mut chain = build_chain_with_budget(&a, &cli.budget())?;
    chain.formula = Some(src.text.clone());
    Ok(chain)
}

fn level_summary(chain: &Cocoa) -> Vec<Value> {
    chain
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            json!({
                "level": i + 1,
                "product_states": l.nfw_states,
                "determinized_states": l.determinized_states,
                "dfw_states": l.dfw.len(),
                "dfw_transitions": l.dfw.num_transitions(),
                "hd_ncw_states": l.ncw.len(),
                "hd_ncw_transitions": l.ncw.transition_count(),
            })
        })
        .collect()
}

fn level_lines(levels: &[Value]) -> String {
    levels
        .iter()
        .map(|l| {
            format!(
                "level {}: dfw {} states {} transitions, hd-ncw {} states (product {}, determinized {})\n",
                l["level"], l["dfw_states"], l["dfw_transitions"], l["hd_ncw_states"], l["product_states"], l["determinized_states"]
            )
        })
        .collect()
}

fn write_artifacts(cli: &Cli, chain: &Cocoa, dir: &Path) -> Result<Vec<String>, Failure> {
    fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    let mut files: Vec<(String, String)> = Vec::new();
    match cli.format {
        Format::Json => files.push((
            "chain.json".into(),
            serde_json::to_string_pretty(&chain.to_json()).expect("chains serialize") + "\n",
        )),
        Format::Dot => {
            files.push(("sltm.dot".into(), chain.sltm().to_dot()));
            for (i, l) in chain.levels.iter().enumerate() {
                let n = i + 1;
                files.push((format!("level{n}.dfw.dot"), l.dfw.to_dot(chain.sltm(), &format!("dfw{n}"))));
                files.push((format!("level{n}.ncw.dot"), l.ncw.to_dot(&format!("ncw{n}"))));
            }
        }
        Format::Hoa => {
            for (i, l) in chain.levels.iter().enumerate() {
                let n = i + 1;
                let name = format!("{} level {n}", chain.formula.as_deref().unwrap_or(""));
                files.push((format!("level{n}.hoa"), to_hoa(&l.ncw, name.trim())));
            }
        }
    }
    for (name, body) in &files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(files.into_iter().map(|(n, _)| n).collect())
}

fn translate(cli: &Cli, input: &Input) -> Result<u8, Failure> {
    let src = read_formula(cli, input)?;
    let start = Instant::now();
    let chain = build(cli, &src)?;
    let elapsed = start.elapsed();
    let files = match &cli.out {
        Some(dir) => write_artifacts(cli, &chain, dir)?,
        None => Vec::new(),
    };
    let levels = level_summary(&chain);
    let report = json!({
        "formula": src.text,
        "aps": src.alphabet.aps(),
        "awa_states": chain.awa.num_states(),
        "sltm_states": chain.sltm().len(),
        "k": chain.k(),
        "levels": levels,
        "files": files,
        "seconds": elapsed.as_secs_f64(),
    });
    let mut text = format!(
        "formula: {}\naps: {}\nawa states: {}\nsltm states: {}\nk={}\n",
        src.text,
        src.alphabet.aps().join(" "),
        chain.awa.num_states(),
        chain.sltm().len(),
        chain.k()
    );
    text += &level_lines(&levels);
    if let Some(dir) = &cli.out {
        text += &format!("wrote {} files to {}\n", files.len(), dir.display());
    }
    cli.emit(&report, &text);
    Ok(0)
}

fn color(cli: &Cli, input: &Input, word: &str) -> Result<u8, Failure> {
    let src = read_formula(cli, input)?;
    let w = LassoWord::parse(word, &src.alphabet)?;
    let chain = build(cli, &src)?;
    let c = natural_color(&chain, &w);
    let levels: Vec<bool> = (1..=chain.k()).map(|l| chain.level_accepts(l, &w)).collect();
    let member = c.is_multiple_of(2);
    let report = json!({
        "formula": src.text,
        "word": w.display(&src.alphabet),
        "color": c,
        "member": member,
        "k": chain.k(),
        "levels_accepting": levels,
    });
    cli.emit(&report, &format!("color={c} member={member}\n"));
    Ok(0)
}

fn report_json(text: &str, k: usize, r: &VerifyReport) -> Value {
    json!({
        "formula": text,
        "k": k,
        "lassos": r.lassos,
        "counterexamples": r.counterexamples,
        "monotonicity_violations": r.monotonicity_violations,
        "hd_ncw_disagreements": r.ncw_disagreements,
        "color_histogram": r.color_histogram,
        "first_counterexample": r.first_counterexample,
        "seconds": r.elapsed.as_secs_f64(),
        "passed": r.passed(),
    })
}

fn report_text(text: &str, k: usize, r: &VerifyReport, bounds: (u64, u64)) -> String {
    let colors: Vec<String> = r.color_histogram.iter().enumerate().map(|(c, n)| format!("{c}:{n}")).collect();
    let mut s = format!(
        "formula: {text}\nk: {k}\nlassos: {} (prefix <= {}, period <= {})\ncolors: {}\ncounterexamples: {}\nmonotonicity violations: {}\nhd-ncw disagreements: {}\nelapsed: {:.3}s\n",
        r.lassos,
        bounds.0,
        bounds.1,
        colors.join(" "),
        r.counterexamples,
        r.monotonicity_violations,
        r.ncw_disagreements,
        r.elapsed.as_secs_f64()
    );
    if let Some(c) = &r.first_counterexample {
        s += &format!(
            "first counterexample: {} color {} but {} the language\n",
            c.word,
            c.color,
            if c.in_language { "in" } else { "not in" }
        );
    }
    s += if r.passed() { "result: pass\n" } else { "result: FAIL\n" };
    s
}

#[allow(clippy::too_many_arguments)]
fn verify(
    cli: &Cli,
    input: &Input,
    prefix: u64,
    period: u64,
    mutate: Option<Mutation>,
    level: Option<usize>,
    random: Option<usize>,
    max_size: usize,
) -> Result<u8, Failure> {
    let bounds = (prefix as usize, period as usize);
    if let Some(count) = random {
        let aps: Vec<String> = CORPUS_APS.iter().map(|s| s.to_string()).collect();
        let alphabet = Alphabet::full(&aps)?;
        let mut reports = Vec::new();
        let mut text = String::new();
        let mut failed = 0;
        for f in random_corpus(cli.seed, count, max_size) {
            let shown = f.display(&aps).to_string();
            let chain = build_chain_with_budget(&from_ltl(&f, &alphabet)?, &cli.budget())?;
            let r = verify_chain(&chain, &f, bounds.0, bounds.1);
            failed += usize::from(!r.passed());
            text += &format!(
                "{} k={} lassos={} counterexamples={} {}\n",
                if r.passed() { "pass" } else { "FAIL" },
                chain.k(),
                r.lassos,
                r.counterexamples,
                shown
            );
            reports.push(report_json(&shown, chain.k(), &r));
        }
        text += &format!("{} formulas, {failed} failed, seed {}\n", count, cli.seed);
        cli.emit(&json!({ "seed": cli.seed, "formulas": reports, "failed": failed }), &text);
        return Ok(if failed == 0 { 0 } else { 1 });
    }
    let src = read_formula(cli, input)?;
    let mut chain = build(cli, &src)?;
    if let Some(Mutation::DropAccepting) = mutate {
        let l = level.unwrap_or(chain.k());
        if l == 0 || l > chain.k() {
            return Err(usage(format!("level {l} does not exist; the chain has {} levels", chain.k())));
        }
        chain = chain
            .drop_accepting(l, bounds.0, bounds.1)
            .ok_or_else(|| usage(format!("every transition of level {l} is redundant within the bounds")))?;
    }
    let r = verify_chain(&chain, &src.formula, bounds.0, bounds.1);
    cli.emit(&report_json(&src.text, chain.k(), &r), &report_text(&src.text, chain.k(), &r, (prefix, period)));
    Ok(if r.passed() { 0 } else { 1 })
}

fn bench(cli: &Cli, n: usize, full_alphabet: bool) -> Result<u8, Failure> {
    let start = Instant::now();
    let budget = cli.budget();
    let alphabet = lower_bound_alphabet(n, !full_alphabet)?;
    let f = lower_bound_family(n)?.to_nnf();
    let mut report = json!({
        "n": n,
        "alphabet": if full_alphabet { "full" } else { "singletons" },
        "letters": alphabet.len(),
        "formula_size": f.size(),
    });
    let progress = |line: String| {
        if !cli.json {
            println!("{line}");
        }
    };
    progress(format!("n={n} letters={} formula size {}", alphabet.len(), f.size()));
    let a = from_ltl(&f, &alphabet)?;
    report["awa_states"] = json!(a.num_states());
    progress(format!("awa states: {}", a.num_states()));

    let outcome = build_canonical_sltm_with_budget(&a, &budget).and_then(|b| {
        report["dual_graph_vertices"] = json!(b.g_neg.len());
        report["graph_vertices"] = json!(b.g_pos.len());
        report["naive_states"] = json!(b.naive.len());
        report["sltm_states"] = json!(b.sltm.len());
        report["label_checks"] = json!(b.label_checks);
        report["sltm_seconds"] = json!(start.elapsed().as_secs_f64());
        progress(
            format!(
                "obligation graphs: {} dual, {} primal vertices; naive states {}; sltm states {} ({} label checks) after {:.2}s",
                b.g_neg.len(),
                b.g_pos.len(),
                b.naive.len(),
                b.sltm.len(),
                b.label_checks,
                start.elapsed().as_secs_f64()
            ),
        );
        chain_from_sltm(&a, b, &budget)
    });
    let chain = match outcome {
        Ok(c) => c,
        Err(e) => {
            let failure = Failure::from(e);
            report["error"] = json!(failure.message);
            report["seconds"] = json!(start.elapsed().as_secs_f64());
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            }
            return Err(failure);
        }
    };
    let levels = level_summary(&chain);
    report["k"] = json!(chain.k());
    report["levels"] = json!(levels);
    report["seconds"] = json!(start.elapsed().as_secs_f64());
    let mut text = level_lines(&levels);
    text += &format!("k={}\nsltm states: {}\ntotal {:.2}s\n", chain.k(), chain.sltm().len(), start.elapsed().as_secs_f64());
    let mut code = 0;
    if n == 1 {
        let ok = chain.k() == 1 && chain.sltm().len() >= 4;
        report["lower_bound_check"] = json!(ok);
        text += if ok {
            "lower-bound check: pass (one level, at least 4 SLTM states)\n"
        } else {
            "lower-bound check: FAIL (expected one level and at least 4 SLTM states)\n"
        };
        code = if ok { 0 } else { 1 };
    }
    cli.emit(&report, &text);
    Ok(code)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Translate { input } => translate(cli, input),
        Command::Color { input, word } => color(cli, input, word),
        Command::Verify {
            input,
            prefix,
            period,
            mutate,
            level,
            random,
            max_size,
        } => verify(cli, input, *prefix, *period, *mutate, *level, *random, *max_size),
        Command::Bench { n, full_alphabet } => bench(cli, *n, *full_alphabet),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
