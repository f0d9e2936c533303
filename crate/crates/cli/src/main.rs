//! Command line front end. Builds a model from a JSON file or a builtin
//! family, then emits analysis artifacts: first-passage report as JSON,
//! bound tables as CSV, Cayley graph and semaphore automaton as DOT. With
//! `--out PREFIX` every artifact is written to `PREFIX.<kind>`; without it
//! the artifact matching `--format` goes to stdout.

use std::fs;
use std::hash::Hash;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixbound::chains::{build_chain, registry, ChainModel, ChainParams, SemigroupHandle};
use mixbound::languages::{expected_tau_test, pattern_loop_graph, psi_test, restart_matcher};
use mixbound::model::{
    automaton_dot, bounds_csv, build_model, first_passage_report, format_sig15, render,
    spec_of_model, ModelSpec,
};
use mixbound::passage::survival_curve;
use mixbound::poset::Poset;
use mixbound::ratio::{fmt_q, parse_q, Q};
use mixbound::semigroup::FiniteSemigroup;
use mixbound::sim::sample_first_passage;
use mixbound::syntactic::{
    push_probabilities, rees_quotient, syntactic_quotient, SyntacticQuotient,
};
use mixbound::transform::Alphabet;
use mixbound::SemaphoreAutomaton;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "mixbound",
    version,
    about = "First-passage analysis of finite Markov chains through their transformation semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact first-passage analysis: report JSON and bound table CSV.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
        /// Largest time in the survival and bound tables.
        #[arg(long, default_value_t = 30)]
        tmax: usize,
    },
    /// Monte Carlo first-passage sample: per-step table CSV and summary JSON.
    Simulate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
        /// Largest time in the sampled survival table.
        #[arg(long, default_value_t = 30)]
        tmax: usize,
        /// Number of trajectories.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Run seed; trajectory k draws from a stream derived from it and k.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// DOT of the right Cayley graph and the semaphore automaton.
    Graph {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Context quotient with the before/after survival check.
    Quotient {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
        /// Largest time in the compared survival tables.
        #[arg(long, default_value_t = 30)]
        tmax: usize,
    },
    /// Waiting time for one pattern: hit share, expected time, word series.
    Testword {
        /// Pattern over letters a, b, c, ... written as one word.
        pattern: String,
        /// Letter probabilities as comma separated ratios; uniform over the
        /// pattern's letters when omitted.
        #[arg(long)]
        probs: Option<String>,
        /// Truncation degree of the word series and the length table.
        #[arg(long, default_value_t = 12)]
        degree: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Analyze a builtin family by name; `chain list` prints the menu.
    Chain {
        /// Family name, or `list`.
        name: String,
        /// Size parameter of the family.
        #[arg(long)]
        n: Option<usize>,
        /// Poset JSON file for the linear-extension families.
        #[arg(long)]
        poset: Option<PathBuf>,
        /// Letter probabilities as comma separated ratios.
        #[arg(long)]
        probs: Option<String>,
        #[command(flatten)]
        output: Output,
        /// Largest time in the survival and bound tables.
        #[arg(long, default_value_t = 30)]
        tmax: usize,
    },
}

/// Where the model comes from: a JSON file or a builtin family. Exactly one
/// of the two must be given.
#[derive(Args)]
struct Source {
    /// Model JSON file.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Builtin family name instead of a model file.
    #[arg(long)]
    chain: Option<String>,
    /// Size parameter of the builtin family.
    #[arg(long)]
    n: Option<usize>,
    /// Poset JSON file for the builtin linear-extension families.
    #[arg(long)]
    poset: Option<PathBuf>,
    /// Letter probabilities as comma separated ratios, overriding the model
    /// file or the family default.
    #[arg(long)]
    probs: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Artifact path prefix; each artifact lands at PREFIX.<kind>.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Which artifact to print when --out is absent.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Print 15 significant digit decimals instead of exact ratios.
    #[arg(long)]
    float: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Analyze {
            source,
            output,
            tmax,
        } => emit_analysis(&source.build()?, tmax, &output),
        Command::Simulate {
            source,
            output,
            tmax,
            trials,
            seed,
        } => run_simulate(&source, &output, tmax, trials, seed),
        Command::Graph { source, output } => run_graph(&source, &output),
        Command::Quotient {
            source,
            output,
            tmax,
        } => run_quotient(&source, &output, tmax),
        Command::Testword {
            pattern,
            probs,
            degree,
            output,
        } => run_testword(&pattern, probs.as_deref(), degree, &output),
        Command::Chain {
            name,
            n,
            poset,
            probs,
            output,
            tmax,
        } => {
            if name == "list" {
                for builder in registry() {
                    println!("{:<12} {}", builder.name(), builder.describe());
                }
                return Ok(());
            }
            let model = build_builtin(&name, n, poset.as_deref(), probs.as_deref())?;
            emit_analysis(&model, tmax, &output)
        }
    }
}

impl Source {
    fn build(&self) -> Result<ChainModel, String> {
        match (&self.model, &self.chain) {
            (Some(_), Some(_)) => Err("give --model or --chain, not both".into()),
            (None, None) => Err("a model source is required: --model FILE or --chain NAME".into()),
            (Some(path), None) => {
                if self.n.is_some() || self.poset.is_some() {
                    return Err("--n and --poset parametrize builtin families; use --chain".into());
                }
                let text = read_file(path)?;
                let mut spec = ModelSpec::from_json(&text).map_err(lib)?;
                if let Some(probs) = &self.probs {
                    let parsed = parse_probs(probs)?;
                    if parsed.len() != spec.generators.len() {
                        return Err(format!(
                            "model has {} generators, got {} probabilities",
                            spec.generators.len(),
                            parsed.len()
                        ));
                    }
                    for (spot, p) in spec.generators.iter_mut().zip(&parsed) {
                        spot.prob = fmt_q(p);
                    }
                }
                build_model(&spec).map_err(lib)
            }
            (None, Some(name)) => {
                build_builtin(name, self.n, self.poset.as_deref(), self.probs.as_deref())
            }
        }
    }
}

fn build_builtin(
    name: &str,
    n: Option<usize>,
    poset: Option<&Path>,
    probs: Option<&str>,
) -> Result<ChainModel, String> {
    let poset = match poset {
        Some(path) => Some(Poset::from_json(&read_file(path)?).map_err(lib)?),
        None => None,
    };
    let probs = match probs {
        Some(s) => Some(parse_probs(s)?),
        None => None,
    };
    build_chain(name, &ChainParams { n, poset, probs }).map_err(lib)
}

fn emit_analysis(model: &ChainModel, tmax: usize, output: &Output) -> Result<(), String> {
    let mut em = Emitter::new(output, Format::Json);
    let report = first_passage_report(model, tmax, output.float).map_err(lib)?;
    em.artifact("report.json", Format::Json, &report.to_json())?;
    em.artifact(
        "bounds.csv",
        Format::Csv,
        &bounds_csv(model, tmax, output.float).map_err(lib)?,
    )?;
    em.artifact("automaton.dot", Format::Dot, &automaton_dot(&model.automaton))?;
    if em.to_file() {
        if let Some(spec) = spec_of_model(model) {
            em.artifact("model.json", Format::Json, &spec.to_json())?;
        }
    }
    em.finish()
}

fn run_simulate(
    source: &Source,
    output: &Output,
    tmax: usize,
    trials: u64,
    seed: u64,
) -> Result<(), String> {
    let model = source.build()?;
    let sample = sample_first_passage(&model.automaton, trials, tmax, seed).map_err(lib)?;
    let float = output.float;
    let mut em = Emitter::new(output, Format::Csv);
    let mut csv = String::from("t, survival, std_error\n");
    for t in 0..=tmax {
        csv.push_str(&format!(
            "{t}, {}, {}\n",
            fmt_float(sample.survival[t], float),
            fmt_float(sample.std_error[t], float)
        ));
    }
    em.artifact("sample.csv", Format::Csv, &csv)?;
    let hits: serde_json::Map<String, serde_json::Value> = model
        .kernel_labels
        .iter()
        .zip(&sample.hits)
        .map(|(name, &h)| (name.clone(), json!(h)))
        .collect();
    let mean_tau = if sample.mean_tau.is_nan() {
        json!(null)
    } else {
        json!(sample.mean_tau)
    };
    let summary = json!({
        "trials": sample.trials,
        "t_max": tmax,
        "seed": seed,
        "hits": hits,
        "censored": sample.censored,
        "mean_tau": mean_tau,
        "mean_tau_is_conditional": sample.censored > 0,
    });
    em.artifact("summary.json", Format::Json, &to_pretty(&summary))?;
    em.finish()
}

fn run_graph(source: &Source, output: &Output) -> Result<(), String> {
    let model = source.build()?;
    let mut em = Emitter::new(output, Format::Dot);
    em.artifact("cayley.dot", Format::Dot, &model.semigroup.to_dot())?;
    em.artifact("automaton.dot", Format::Dot, &automaton_dot(&model.automaton))?;
    em.finish()
}

fn run_quotient(source: &Source, output: &Output, tmax: usize) -> Result<(), String> {
    let model = source.build()?;
    let (syn, kernel_collapsed) = match &model.semigroup {
        SemigroupHandle::Maps(sg) => context_quotient(sg)?,
        SemigroupHandle::Words(sg) => context_quotient(sg)?,
    };
    let probs = model.alphabet.probs_required().map_err(lib)?;
    let pushed = push_probabilities(&syn.letter_map, syn.letters.len(), probs);
    let alphabet = Alphabet::new(syn.letters.clone(), Some(pushed)).map_err(lib)?;
    let ideal = syn.quotient.minimal_ideal();
    let auto = SemaphoreAutomaton::from_semigroup(&syn.quotient, &ideal, alphabet).map_err(lib)?;
    let before = survival_curve(&model.automaton, tmax).map_err(lib)?;
    let after = survival_curve(&auto, tmax).map_err(lib)?;
    let equal = before == after;

    let float = output.float;
    let mut em = Emitter::new(output, Format::Json);
    let summary = json!({
        "classes": syn.classes.len(),
        "class_sizes": syn.classes.iter().map(Vec::len).collect::<Vec<_>>(),
        "letters": syn.letters,
        "kernel_collapsed_first": kernel_collapsed,
        "survival_before": before.iter().map(|q| render(q, float)).collect::<Vec<_>>(),
        "survival_after": after.iter().map(|q| render(q, float)).collect::<Vec<_>>(),
        "survival_equal": equal,
    });
    em.artifact("quotient.json", Format::Json, &to_pretty(&summary))?;
    let mut csv = String::from("t, survival_before, survival_after\n");
    for t in 0..=tmax {
        csv.push_str(&format!(
            "{t}, {}, {}\n",
            render(&before[t], float),
            render(&after[t], float)
        ));
    }
    em.artifact("survival.csv", Format::Csv, &csv)?;
    em.artifact("quotient.dot", Format::Dot, &syn.quotient.to_dot())?;
    em.finish()
}

/// Context quotient of the model's semigroup. When the kernel is not a
/// single zero yet, the minimal ideal is collapsed to one first; that step
/// keeps letters and transient structure unchanged.
fn context_quotient<E: Clone + Eq + Hash>(
    sg: &FiniteSemigroup<E>,
) -> Result<(SyntacticQuotient, bool), String> {
    if sg.minimal_ideal().zero_element.is_some() {
        Ok((syntactic_quotient(sg).map_err(lib)?, false))
    } else {
        let rees = rees_quotient(sg).map_err(lib)?;
        Ok((syntactic_quotient(&rees.quotient).map_err(lib)?, true))
    }
}

fn run_testword(
    pattern: &str,
    probs: Option<&str>,
    degree: usize,
    output: &Output,
) -> Result<(), String> {
    let mut letters = Vec::new();
    for c in pattern.chars() {
        if !c.is_ascii_lowercase() {
            return Err(format!("pattern letter '{c}' is outside a..z"));
        }
        letters.push((c as u8 - b'a') as usize);
    }
    let highest = match letters.iter().max() {
        Some(&m) => m,
        None => return Err("pattern must not be empty".into()),
    };
    let parsed = match probs {
        Some(s) => Some(parse_probs(s)?),
        None => None,
    };
    let k = parsed.as_ref().map_or(highest + 1, Vec::len);
    if k > 26 {
        return Err(format!("alphabet of {k} letters does not fit a..z"));
    }
    if highest >= k {
        return Err(format!(
            "pattern reaches letter '{}', but only {k} probabilities were given",
            (b'a' + highest as u8) as char
        ));
    }
    let labels: Vec<String> = (0..k)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect();
    let alphabet = match parsed {
        Some(p) => Alphabet::new(labels, Some(p)),
        None => Alphabet::uniform(labels),
    }
    .map_err(lib)?;

    let psi = psi_test(&alphabet, &letters).map_err(lib)?;
    let tau = expected_tau_test(&alphabet, &letters).map_err(lib)?;
    let graph = pattern_loop_graph(&alphabet, &letters).map_err(lib)?;
    let series = graph.series(&alphabet, degree).map_err(lib)?;
    let masses = graph.length_masses(&alphabet, degree).map_err(lib)?;
    let matcher = restart_matcher(&alphabet, &letters).map_err(lib)?;

    let float = output.float;
    let mut em = Emitter::new(output, Format::Json);
    let var_labels: Vec<String> = (0..alphabet.len())
        .map(|i| alphabet.label(i).to_string())
        .collect();
    let summary = json!({
        "pattern": pattern,
        "psi": render(&psi, float),
        "expected_tau": render(&tau, float),
        "series": series.render(&var_labels),
        "series_degree": degree,
    });
    em.artifact("testword.json", Format::Json, &to_pretty(&summary))?;
    let mut csv = String::from("len, mass\n");
    for (len, m) in masses.iter().enumerate() {
        csv.push_str(&format!("{len}, {}\n", render(m, float)));
    }
    em.artifact("lengths.csv", Format::Csv, &csv)?;
    em.artifact("automaton.dot", Format::Dot, &automaton_dot(&matcher))?;
    em.artifact("loops.dot", Format::Dot, &graph.to_dot())?;
    em.finish()
}

/// Routes artifacts to `PREFIX.<kind>` files, or to stdout when the kind's
/// format matches the requested one. Refuses to finish silently: a run that
/// produced nothing is reported as an error.
struct Emitter {
    out: Option<PathBuf>,
    format: Format,
    emitted: usize,
}

impl Emitter {
    fn new(output: &Output, default_format: Format) -> Self {
        Emitter {
            out: output.out.clone(),
            format: output.format.unwrap_or(default_format),
            emitted: 0,
        }
    }

    fn to_file(&self) -> bool {
        self.out.is_some()
    }

    fn artifact(&mut self, kind: &str, format: Format, content: &str) -> Result<(), String> {
        match &self.out {
            Some(prefix) => {
                let mut name = prefix.clone().into_os_string();
                name.push(format!(".{kind}"));
                let path = PathBuf::from(name);
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        fs::create_dir_all(parent)
                            .map_err(|e| format!("{}: {e}", parent.display()))?;
                    }
                }
                fs::write(&path, content).map_err(|e| format!("{}: {e}", path.display()))?;
                eprintln!("wrote {}", path.display());
                self.emitted += 1;
            }
            None => {
                if format == self.format {
                    print!("{content}");
                    if !content.ends_with('\n') {
                        println!();
                    }
                    self.emitted += 1;
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<(), String> {
        if self.emitted == 0 {
            return Err(format!(
                "this command produces no {} artifact; pick another --format or use --out",
                self.format.name()
            ));
        }
        Ok(())
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_probs(s: &str) -> Result<Vec<Q>, String> {
    s.split(',')
        .map(|part| parse_q(part.trim()).map_err(lib))
        .collect()
}

fn fmt_float(v: f64, float: bool) -> String {
    if float {
        format_sig15(v)
    } else {
        format!("{v}")
    }
}

fn to_pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn lib(e: mixbound::Error) -> String {
    e.to_string()
}
