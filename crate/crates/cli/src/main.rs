//! Command-line front end for the pair-encoding laboratory.
//!
//! Exit codes: 0 on success, 2 for usage and I/O problems, 3 when a model
//! file is corrupt or does not match its input. Structured output goes to
//! stdout as JSON; diagnostics go to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pairenc_core::model::{self, MergeModel};
use pairenc_core::{bounds, bpe, evenodd, exact, families, reduction};
use pairenc_core::{exact::SearchBudget, families::Expected, families::Reference};
use pairenc_core::{reduction::CubicGraph, Text};

#[derive(Parser)]
#[command(name = "pairenc", version, about = "Pair-encoding compression laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a merge table on a file and report the utility.
    Train {
        input: PathBuf,
        /// Number of merges to learn.
        #[arg(short, long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Algorithm::Bpe)]
        algorithm: Algorithm,
        /// Where to write the model JSON.
        #[arg(long)]
        model_out: Option<PathBuf>,
        /// Treat the input as Unicode codepoints instead of raw bytes.
        #[arg(long)]
        codepoints: bool,
    },
    /// Encode a file into a token-id stream using a trained model.
    Encode {
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Where to write the token stream (stdout when omitted).
        #[arg(long)]
        tokens_out: Option<PathBuf>,
    },
    /// Decode a token-id stream back into the original file.
    Decode {
        tokens: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Where to write the decoded output (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the trainers and bounds on one input and emit a comparison report.
    Compare {
        input: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Also run the exact full/partial searches (budgeted).
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        codepoints: bool,
        /// Write witness models for each algorithm into this directory.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Generate a benchmark instance with machine-readable metadata.
    Gen {
        #[command(subcommand)]
        family: GenCommand,
    },
    /// Compute the packing and frequency bounds for an input.
    Bound {
        input: PathBuf,
        #[arg(short, long)]
        k: usize,
        #[arg(long)]
        codepoints: bool,
        /// Include the packing certificate in the output.
        #[arg(long)]
        certificate: bool,
    },
    /// Run the exact branch-and-bound searches on a small input.
    Exact {
        input: PathBuf,
        #[arg(short, long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ExactMode::Both)]
        mode: ExactMode,
        #[arg(long)]
        codepoints: bool,
        /// Override the search node budget (also via PAIRENC_BUDGET_NODES).
        #[arg(long)]
        max_nodes: Option<u64>,
        /// Override the search time limit in seconds.
        #[arg(long)]
        time_limit_secs: Option<u64>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Utility-ratio family: greedy earns 5t+1 against a reference worth 8t.
    Ratio {
        #[arg(long)]
        t: usize,
        /// Base path for the generated files (<out>.txt and <out>.json).
        #[arg(long, default_value = "instance")]
        out: PathBuf,
    },
    /// Compression-length family: greedy stalls at t+2 symbols, the
    /// reference reaches one.
    Length {
        #[arg(long)]
        t: usize,
        #[arg(long, default_value = "instance")]
        out: PathBuf,
    },
    /// Doubled-run family separating input-symbol strategies from optimal.
    Inputonly {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "instance")]
        out: PathBuf,
    },
    /// Max-cut reduction instance from a cubic graph.
    Reduction {
        /// Edge-list file: "n m" header, then one "u v" line per edge,
        /// 1-indexed.
        #[arg(long, conflicts_with_all = ["named", "random_n"])]
        graph: Option<PathBuf>,
        /// Built-in graph: k4, k33, or petersen.
        #[arg(long, conflicts_with = "random_n")]
        named: Option<String>,
        /// Sample a random cubic graph with this many vertices.
        #[arg(long)]
        random_n: Option<usize>,
        /// Seed for --random-n.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "instance")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Bpe,
    Evenodd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactMode {
    Full,
    Partial,
    Both,
}

struct Failure {
    code: i32,
    message: String,
}

type CliResult = Result<(), Failure>;

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(f) = run(cli) {
        eprintln!("error: {}", f.message);
        std::process::exit(f.code);
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Train {
            input,
            k,
            algorithm,
            model_out,
            codepoints,
        } => cmd_train(&input, k, algorithm, model_out.as_deref(), codepoints),
        Command::Encode {
            input,
            model,
            tokens_out,
        } => cmd_encode(&input, &model, tokens_out.as_deref()),
        Command::Decode { tokens, model, out } => cmd_decode(&tokens, &model, out.as_deref()),
        Command::Compare {
            input,
            k,
            exact,
            codepoints,
            witness_dir,
        } => cmd_compare(&input, k, exact, codepoints, witness_dir.as_deref()),
        Command::Gen { family } => cmd_gen(family),
        Command::Bound {
            input,
            k,
            codepoints,
            certificate,
        } => cmd_bound(&input, k, codepoints, certificate),
        Command::Exact {
            input,
            k,
            mode,
            codepoints,
            max_nodes,
            time_limit_secs,
        } => cmd_exact(&input, k, mode, codepoints, max_nodes, time_limit_secs),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, data: &[u8]) -> CliResult {
    fs::write(path, data).map_err(|e| fail(2, format!("cannot write {}: {e}", path.display())))
}

fn load_text(path: &Path, codepoints: bool) -> Result<Text, Failure> {
    let bytes = read_file(path)?;
    if codepoints {
        let s = String::from_utf8(bytes)
            .map_err(|_| fail(2, "input is not valid UTF-8; omit --codepoints for raw bytes"))?;
        Ok(Text::from_codepoints(&s))
    } else {
        Ok(Text::from_bytes(&bytes))
    }
}

fn load_model(path: &Path) -> Result<MergeModel, Failure> {
    let bytes = read_file(path)?;
    let s = String::from_utf8(bytes)
        .map_err(|_| fail(3, format!("model {} is not UTF-8", path.display())))?;
    MergeModel::from_json(&s)
        .map_err(|e| fail(3, format!("model {} is corrupt: {e}", path.display())))
}

fn search_budget(max_nodes: Option<u64>, time_limit_secs: Option<u64>) -> SearchBudget {
    let mut budget = SearchBudget::extended();
    if let Ok(v) = std::env::var("PAIRENC_BUDGET_NODES") {
        if let Ok(nodes) = v.parse::<u64>() {
            budget = budget.with_max_nodes(nodes);
        }
    }
    if let Some(nodes) = max_nodes {
        budget = budget.with_max_nodes(nodes);
    }
    if let Some(secs) = time_limit_secs {
        budget = budget.with_time_limit(Duration::from_secs(secs));
    }
    budget
}

fn cmd_train(
    input: &Path,
    k: usize,
    algorithm: Algorithm,
    model_out: Option<&Path>,
    codepoints: bool,
) -> CliResult {
    let text = load_text(input, codepoints)?;
    let (name, utility, merges, encoded_len, truncated, model) = match algorithm {
        Algorithm::Bpe => {
            let outcome = bpe::train(&text, k).map_err(|e| fail(2, e.to_string()))?;
            let model = MergeModel::from_sequence(text.alphabet(), &outcome.seq);
            (
                "bpe",
                outcome.utility(),
                outcome.seq.len(),
                outcome.encoded.len(),
                outcome.truncated,
                model,
            )
        }
        Algorithm::Evenodd => {
            let (seq, utility) = evenodd::evenodd(&text, k);
            let encoded_len = text.len() - utility;
            let model = MergeModel::from_partial(text.alphabet(), &seq);
            ("evenodd", utility, seq.len(), encoded_len, false, model)
        }
    };
    if let Some(path) = model_out {
        write_file(path, model.to_json().as_bytes())?;
    }
    let report = json!({
        "algorithm": name,
        "input_length": text.len(),
        "k": k,
        "utility": utility,
        "merges": merges,
        "encoded_length": encoded_len,
        "truncated": truncated,
        "model": model_out.map(|p| p.display().to_string()),
    });
    println!("{report}");
    Ok(())
}

fn cmd_encode(input: &Path, model_path: &Path, tokens_out: Option<&Path>) -> CliResult {
    let model = load_model(model_path)?;
    let bytes = read_file(input)?;
    let text = if model.is_byte_level() {
        Text::from_bytes(&bytes)
    } else {
        let s = String::from_utf8(bytes)
            .map_err(|_| fail(3, "input is not UTF-8 but the model is codepoint-level"))?;
        Text::from_codepoints_in(&model.base_alphabet(), &s)
            .map_err(|e| fail(3, format!("input does not fit the model: {e}")))?
    };
    let encoded = model
        .encode(&text)
        .map_err(|e| fail(3, format!("cannot encode with this model: {e}")))?;
    let stream = model::tokens_to_string(&encoded);
    match tokens_out {
        Some(path) => write_file(path, stream.as_bytes())?,
        None => println!("{stream}"),
    }
    Ok(())
}

fn cmd_decode(tokens: &Path, model_path: &Path, out: Option<&Path>) -> CliResult {
    let model = load_model(model_path)?;
    let stream = String::from_utf8(read_file(tokens)?)
        .map_err(|_| fail(3, "token stream is not UTF-8"))?;
    let ids =
        model::tokens_from_string(&stream).map_err(|e| fail(3, format!("bad token stream: {e}")))?;
    let text = model
        .decode_tokens(&ids)
        .map_err(|e| fail(3, format!("token stream does not fit the model: {e}")))?;
    let bytes = if model.is_byte_level() {
        text.to_bytes()
            .map_err(|e| fail(3, format!("decoded text is not byte-clean: {e}")))?
    } else {
        text.render().into_bytes()
    };
    match out {
        Some(path) => write_file(path, &bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(())
}

fn cmd_compare(
    input: &Path,
    k: usize,
    with_exact: bool,
    codepoints: bool,
    witness_dir: Option<&Path>,
) -> CliResult {
    let text = load_text(input, codepoints)?;
    if let Some(dir) = witness_dir {
        fs::create_dir_all(dir)
            .map_err(|e| fail(2, format!("cannot create {}: {e}", dir.display())))?;
    }
    let witness_path = |name: &str, model: &MergeModel| -> Result<Value, Failure> {
        match witness_dir {
            Some(dir) => {
                let path = dir.join(format!("{name}.model.json"));
                write_file(&path, model.to_json().as_bytes())?;
                Ok(Value::String(path.display().to_string()))
            }
            None => Ok(Value::Null),
        }
    };

    let start = Instant::now();
    let outcome = bpe::train(&text, k).map_err(|e| fail(2, e.to_string()))?;
    let bpe_ms = start.elapsed().as_secs_f64() * 1e3;
    let bpe_utility = outcome.utility();
    let bpe_model = MergeModel::from_sequence(text.alphabet(), &outcome.seq);

    let start = Instant::now();
    let (eo_seq, eo_utility) = evenodd::evenodd(&text, k);
    let eo_ms = start.elapsed().as_secs_f64() * 1e3;
    let eo_model = MergeModel::from_partial(text.alphabet(), &eo_seq);

    let start = Instant::now();
    let (pk, _) = bounds::pk(&text, k);
    let fk = bounds::fk(&text, k);
    let bounds_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut warnings: Vec<String> = Vec::new();
    let mut exact_section = Value::Null;
    let mut oms_utility = None;
    let mut ope_utility = None;
    if with_exact {
        let budget = search_budget(None, None);
        let full = exact::oms_opt(&text, k, &budget);
        let partial = exact::ope_opt(&text, k, &budget);
        match (full, partial) {
            (Ok(full), Ok(partial)) if full.exact && partial.exact => {
                oms_utility = Some(full.utility);
                ope_utility = Some(partial.utility);
                let full_model = MergeModel::from_sequence(text.alphabet(), &full.witness);
                let partial_model = MergeModel::from_partial(text.alphabet(), &partial.witness);
                exact_section = json!({
                    "oms": {
                        "utility": full.utility,
                        "compressed_length": text.len() - full.utility,
                        "nodes": full.nodes,
                        "witness": witness_path("oms", &full_model)?,
                    },
                    "ope": {
                        "utility": partial.utility,
                        "compressed_length": text.len() - partial.utility,
                        "nodes": partial.nodes,
                        "witness": witness_path("ope", &partial_model)?,
                    },
                });
            }
            (full, partial) => {
                let reason = [full.err(), partial.err()]
                    .into_iter()
                    .flatten()
                    .map(|e| e.to_string())
                    .next()
                    .unwrap_or_else(|| "search budget exhausted before completion".into());
                warnings.push(format!("exact search skipped: {reason}"));
            }
        }
    }

    // The invariants every report must satisfy.
    let chain_ok = bpe_utility <= oms_utility.unwrap_or(bpe_utility)
        && oms_utility.unwrap_or(0) <= ope_utility.unwrap_or(oms_utility.unwrap_or(0))
        && ope_utility.unwrap_or(0) <= pk
        && bpe_utility <= pk
        && pk <= fk
        && 2 * eo_utility >= fk
        && 3 * bpe_utility >= pk;
    if !chain_ok {
        return Err(fail(
            1,
            format!(
                "internal invariant violated: bpe {bpe_utility}, evenodd {eo_utility}, \
                 oms {oms_utility:?}, ope {ope_utility:?}, pk {pk}, fk {fk}"
            ),
        ));
    }

    let ratio = |num: usize, den: usize| -> Value {
        if den == 0 {
            Value::Null
        } else {
            json!(num as f64 / den as f64)
        }
    };
    let report = json!({
        "instance": {
            "length": text.len(),
            "alphabet_size": text.alphabet().len(),
            "k": k,
        },
        "algorithms": {
            "bpe": {
                "utility": bpe_utility,
                "compressed_length": text.len() - bpe_utility,
                "runtime_ms": bpe_ms,
                "witness": witness_path("bpe", &bpe_model)?,
            },
            "evenodd": {
                "utility": eo_utility,
                "compressed_length": text.len() - eo_utility,
                "runtime_ms": eo_ms,
                "witness": witness_path("evenodd", &eo_model)?,
            },
        },
        "exact": exact_section,
        "bounds": { "pk": pk, "fk": fk, "runtime_ms": bounds_ms },
        "ratios": {
            "bpe_over_pk": ratio(bpe_utility, pk),
            "evenodd_over_fk": ratio(eo_utility, fk),
        },
        "chain_checked": true,
        "warnings": warnings,
    });
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}

fn expected_json(e: &Expected) -> Value {
    match e {
        Expected::Utility(u) => json!({ "kind": "utility", "value": u }),
        Expected::CompressedLen(l) => json!({ "kind": "compressed_length", "value": l }),
    }
}

fn reference_json(text: &Text, r: &Reference) -> Value {
    let model = match r {
        Reference::Full(seq) => MergeModel::from_sequence(text.alphabet(), seq),
        Reference::Partial(seq) => MergeModel::from_partial(text.alphabet(), seq),
    };
    serde_json::from_str(&model.to_json()).unwrap()
}

fn write_instance(out: &Path, text: &Text, metadata: Value) -> CliResult {
    let txt_path = out.with_extension("txt");
    let json_path = out.with_extension("json");
    let mut rendered = text.render();
    rendered.push('\n');
    write_file(&txt_path, rendered.as_bytes())?;
    write_file(
        &json_path,
        serde_json::to_string_pretty(&metadata).unwrap().as_bytes(),
    )?;
    println!(
        "{}",
        json!({
            "text": txt_path.display().to_string(),
            "metadata": json_path.display().to_string(),
        })
    );
    Ok(())
}

fn family_metadata(name: &str, params: Value, inst: &families::FamilyInstance) -> Value {
    let mut meta = json!({
        "family": name,
        "k": inst.k,
        "length": inst.text.len(),
        "alphabet_size": inst.text.alphabet().len(),
        "expected_bpe": expected_json(&inst.expected_bpe),
        "expected_reference": expected_json(&inst.expected_reference),
        "reference_model": reference_json(&inst.text, &inst.reference),
    });
    if let Some(cap) = inst.input_only_cap {
        meta["input_only_cap"] = json!(cap);
    }
    for (key, value) in params.as_object().unwrap() {
        meta[key] = value.clone();
    }
    meta
}

fn cmd_gen(family: GenCommand) -> CliResult {
    match family {
        GenCommand::Ratio { t, out } => {
            let inst = families::family_ratio(t).map_err(|e| fail(2, e.to_string()))?;
            let meta = family_metadata("ratio", json!({ "t": t }), &inst);
            write_instance(&out, &inst.text, meta)
        }
        GenCommand::Length { t, out } => {
            let inst = families::family_length(t).map_err(|e| fail(2, e.to_string()))?;
            let meta = family_metadata("length", json!({ "t": t }), &inst);
            write_instance(&out, &inst.text, meta)
        }
        GenCommand::Inputonly { n, out } => {
            let inst = families::family_inputonly(n).map_err(|e| fail(2, e.to_string()))?;
            let meta = family_metadata("inputonly", json!({ "n": n }), &inst);
            write_instance(&out, &inst.text, meta)
        }
        GenCommand::Reduction {
            graph,
            named,
            random_n,
            seed,
            out,
        } => {
            let g = match (graph, named, random_n) {
                (Some(path), None, None) => {
                    let data = String::from_utf8(read_file(&path)?)
                        .map_err(|_| fail(2, "edge list is not UTF-8"))?;
                    CubicGraph::parse_edge_list(&data).map_err(|e| fail(2, e.to_string()))?
                }
                (None, Some(name), None) => match name.as_str() {
                    "k4" => CubicGraph::k4(),
                    "k33" => CubicGraph::k33(),
                    "petersen" => CubicGraph::petersen(),
                    other => return Err(fail(2, format!("unknown graph name {other:?}"))),
                },
                (None, None, Some(n)) => {
                    CubicGraph::random(n, seed).map_err(|e| fail(2, e.to_string()))?
                }
                _ => {
                    return Err(fail(
                        2,
                        "choose exactly one of --graph, --named, --random-n",
                    ))
                }
            };
            let inst = reduction::gen_instance(&g);
            let edges: Vec<[usize; 2]> =
                g.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect();
            let meta = json!({
                "family": "reduction",
                "n": inst.n,
                "k": inst.k,
                "length": inst.text.len(),
                "alphabet_size": inst.text.alphabet().len(),
                "edges": edges,
                "segments": inst.segments,
            });
            write_instance(&out, &inst.text, meta)
        }
    }
}

fn cmd_bound(input: &Path, k: usize, codepoints: bool, certificate: bool) -> CliResult {
    let text = load_text(input, codepoints)?;
    let (pk, cert) = bounds::pk(&text, k);
    let fk = bounds::fk(&text, k);
    let mut report = json!({ "k": k, "length": text.len(), "pk": pk, "fk": fk });
    if certificate {
        report["certificate"] = cert.to_json();
    }
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}

fn cmd_exact(
    input: &Path,
    k: usize,
    mode: ExactMode,
    codepoints: bool,
    max_nodes: Option<u64>,
    time_limit_secs: Option<u64>,
) -> CliResult {
    let text = load_text(input, codepoints)?;
    let budget = search_budget(max_nodes, time_limit_secs);
    let mut report = json!({ "k": k, "length": text.len() });
    if matches!(mode, ExactMode::Full | ExactMode::Both) {
        let r = exact::oms_opt(&text, k, &budget).map_err(|e| fail(2, e.to_string()))?;
        report["full"] = json!({ "utility": r.utility, "exact": r.exact, "nodes": r.nodes });
    }
    if matches!(mode, ExactMode::Partial | ExactMode::Both) {
        let r = exact::ope_opt(&text, k, &budget).map_err(|e| fail(2, e.to_string()))?;
        report["partial"] = json!({ "utility": r.utility, "exact": r.exact, "nodes": r.nodes });
    }
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}
