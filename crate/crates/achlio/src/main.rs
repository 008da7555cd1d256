use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use achlio::engine::{Outcome, RunRecord, SamplingModel};
use achlio::graph::{ExpansionMode, Graph, VertexSet};
use achlio::harness::{self, ExperimentConfig};
use achlio::posa::{brute_force_hamiltonian, hamiltonicity_search, BRUTE_FORCE_CAP};
use achlio::strategies::{hamilton_hitting_time, min_degree_hitting_time};
use achlio::verify;

#[derive(Parser)]
#[command(name = "achlio", about = "Achlioptas-process Hamiltonicity experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute one seeded run and write its record as JSON.
    Run(RunArgs),
    /// Run a (K × seed) battery and emit a long-format CSV.
    Sweep(SweepArgs),
    /// Re-check structural lemmas against a stored graph or run record.
    Verify(VerifyArgs),
    /// Cross-check the rotation search against brute force on small graphs.
    Oracle(OracleArgs),
}

#[derive(Args, Clone)]
struct CommonRunArgs {
    /// Optional JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated K sweep list (overrides --k).
    #[arg(long, value_delimiter = ',')]
    k_list: Vec<usize>,
    /// Sampling model: exact | relaxed.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    max_rounds: Option<u64>,
    /// Use the paper's asymptotic constants instead of desk-scale ones.
    #[arg(long)]
    fidelity: bool,
    /// d parameter for the d-out strategies.
    #[arg(long)]
    d: Option<usize>,
    /// Record the full per-round ledger in the output.
    #[arg(long)]
    ledger: bool,
    /// Output file (JSON for run, CSV for sweep); stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonRunArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// For --strategy collect-all-analyze: a RunRecord JSON with a ledger.
    #[arg(long)]
    record: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonRunArgs,
    /// Comma-separated explicit seed list; defaults to 0..9.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    /// Parallel worker count; defaults to the rayon global pool.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Plain-text edge list ("n m" header, then "u v" lines).
    #[arg(long)]
    graph: Option<String>,
    /// RunRecord JSON; its ledger rebuilds the graph.
    #[arg(long)]
    record: Option<String>,
    /// Lemma ids: core-size, avg-degree, resilient-diameter, certificate.
    #[arg(long, value_delimiter = ',', required = true)]
    lemma: Vec<String>,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 16)]
    k: usize,
    #[arg(long)]
    s_max: Option<usize>,
    /// "exhaustive" or "sampled:<count>".
    #[arg(long, default_value = "sampled:1000")]
    mode: String,
    #[arg(long, default_value_t = 8)]
    d_exp: usize,
    #[arg(long, default_value_t = 30)]
    bound: u32,
    /// Fraction of vertices removed as the adversarial set A.
    #[arg(long, default_value_t = 0.003)]
    a_frac: f64,
    /// Cycle file (one line of n vertex ids) for the certificate lemma.
    #[arg(long)]
    cycle: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn merge_config(c: &CommonRunArgs) -> Result<ExperimentConfig, String> {
    let mut cfg = match &c.config {
        Some(path) => harness::load_config_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = &c.strategy {
        cfg.strategy = s.clone();
    }
    if let Some(n) = c.n {
        cfg.n = n;
    }
    if !c.k_list.is_empty() {
        cfg.ks = c.k_list.clone();
    } else if let Some(k) = c.k {
        cfg.ks = vec![k];
    }
    if let Some(m) = &c.model {
        cfg.model = match m.as_str() {
            "exact" => SamplingModel::ExactMissing,
            "relaxed" => SamplingModel::RelaxedPairs,
            other => return Err(format!("unknown model '{other}'")),
        };
    }
    if let Some(mr) = c.max_rounds {
        cfg.max_rounds = mr;
    }
    if c.fidelity {
        cfg.fidelity = true;
    }
    if let Some(d) = c.d {
        cfg.d = d;
    }
    if c.ledger {
        cfg.ledger = true;
    }
    Ok(cfg)
}

fn emit(out: &Option<String>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{path}: {e}")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_run(args: &RunArgs) -> Result<bool, String> {
    let cfg = merge_config(&args.common)?;
    cfg.validate()?;
    if cfg.strategy == "collect-all-analyze" {
        let path = args
            .record
            .as_ref()
            .ok_or("collect-all-analyze needs --record <RunRecord JSON>")?;
        let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        let record: RunRecord = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
        let tau2 = min_degree_hitting_time(&record, 2)?;
        let tau_h = hamilton_hitting_time(&record, 200)?;
        let report = serde_json::json!({
            "n": record.n,
            "total_rounds": record.total_rounds,
            "min_degree_2_hitting_time": tau2,
            "hamiltonicity_hitting_time": tau_h,
        });
        emit(&args.common.out, &report.to_string())?;
        return Ok(tau_h.is_some());
    }
    let k = cfg.ks[0];
    let mut record = harness::run_one(&cfg, k, args.seed)?;
    record.timestamp = Some(chrono_lite_now());
    let success = matches!(record.outcome, Outcome::Hamiltonian(_));
    eprintln!(
        "{} n={} K={} seed={}: {:?} in {} rounds",
        record.strategy, record.n, record.k, args.seed, short_outcome(&record.outcome),
        record.total_rounds
    );
    emit(
        &args.common.out,
        &serde_json::to_string_pretty(&record).map_err(|e| e.to_string())?,
    )?;
    Ok(success)
}

fn short_outcome(o: &Outcome) -> String {
    match o {
        Outcome::Hamiltonian(_) => "hamiltonian".into(),
        other => format!("{other:?}"),
    }
}

/// Second-resolution UTC timestamp without pulling in a date crate; the
/// field is excluded from determinism comparisons anyway.
fn chrono_lite_now() -> String {
    use std::time::{SystemTime, UNIX_EPOCH};
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

fn cmd_sweep(args: &SweepArgs) -> Result<bool, String> {
    let mut cfg = merge_config(&args.common)?;
    if !args.seeds.is_empty() {
        cfg.seeds = args.seeds.clone();
    }
    cfg.validate()?;
    let csv = if let Some(jobs) = args.jobs {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| e.to_string())?;
        pool.install(|| harness::sweep(&cfg).map(|s| harness::sweep_csv(&cfg, &s)))?
    } else {
        let s = harness::sweep(&cfg)?;
        harness::sweep_csv(&cfg, &s)
    };
    emit(&args.common.out, &csv)?;
    Ok(true)
}

fn load_graph(args: &VerifyArgs) -> Result<Graph, String> {
    match (&args.graph, &args.record) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            Graph::parse_edge_list(&text).map_err(|e| e.to_string())
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            let record: RunRecord =
                serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
            let ledger = record.ledger.as_ref().ok_or("record has no ledger")?;
            let mut g = Graph::new(record.n);
            for entry in ledger {
                if let achlio::engine::Choice::Pick(i) = entry.choice {
                    let (u, v) = entry.candidates[i];
                    if u != v {
                        g.add_edge(u, v).map_err(|e| e.to_string())?;
                    }
                }
            }
            Ok(g)
        }
        (None, None) => Err("verify needs --graph or --record".into()),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, String> {
    let g = load_graph(args)?;
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let mut all_pass = true;
    for lemma in &args.lemma {
        let report = match lemma.as_str() {
            "core-size" => verify::verify_core_size(&g, args.d),
            "avg-degree" => {
                let mode = parse_mode(&args.mode)?;
                let s_max = args.s_max.unwrap_or((g.n() / 25).max(1));
                verify::verify_avg_degree(
                    &g,
                    args.k,
                    s_max,
                    mode,
                    achlio::graph::DEFAULT_SUBSET_BUDGET,
                    &mut rng,
                )
            }
            "resilient-diameter" => {
                let x = VertexSet::full(g.n());
                let a_size = ((g.n() as f64) * args.a_frac).round().max(1.0) as usize;
                let mut picked = VertexSet::new(g.n());
                use rand::Rng;
                while picked.len() < a_size.min(g.n()) {
                    let v = rng.gen_range(0..g.n()) as u32;
                    picked.insert(v);
                }
                verify::verify_resilient_diameter(&g, &x, &picked, args.d_exp, args.bound)
            }
            "certificate" => {
                let path = args.cycle.as_ref().ok_or("certificate needs --cycle")?;
                let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
                let cycle: Vec<u32> = text
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|e| format!("bad vertex '{t}': {e}")))
                    .collect::<Result<_, String>>()?;
                let pass = verify::verify_certificate(&g, &cycle);
                println!(
                    "{}",
                    serde_json::json!({"lemma": "certificate", "pass": pass})
                );
                all_pass &= pass;
                continue;
            }
            other => return Err(format!("unknown lemma id '{other}'")),
        };
        all_pass &= report.pass;
        println!(
            "{}",
            serde_json::to_string(&report).map_err(|e| e.to_string())?
        );
    }
    Ok(all_pass)
}

fn parse_mode(text: &str) -> Result<ExpansionMode, String> {
    if text == "exhaustive" {
        return Ok(ExpansionMode::Exhaustive);
    }
    if let Some(count) = text.strip_prefix("sampled:") {
        return count
            .parse()
            .map(ExpansionMode::Sampled)
            .map_err(|e| format!("bad sample count: {e}"));
    }
    Err(format!("unknown mode '{text}'"))
}

fn cmd_oracle(args: &OracleArgs) -> Result<bool, String> {
    use rand::Rng;
    if args.n > BRUTE_FORCE_CAP {
        return Err(format!("oracle n must be <= {BRUTE_FORCE_CAP}"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let mut disagreements = 0;
    for i in 0..args.count {
        let p = rng.gen_range(0.15..0.65);
        let g = Graph::gnp(args.n, p, &mut rng);
        let brute = brute_force_hamiltonian(&g).map_err(|e| e.to_string())?;
        let searched = hamiltonicity_search(&g, 200, &mut rng);
        if let Some(c) = &searched {
            if !verify::verify_certificate(&g, c) || brute.is_none() {
                eprintln!("graph {i}: search produced a bogus cycle");
                disagreements += 1;
            }
        }
        if brute.is_some() && searched.is_none() {
            // incompleteness, not unsoundness: report but do not fail
            eprintln!("graph {i}: search missed a Hamilton cycle (restarts exhausted)");
        }
    }
    println!(
        "oracle: {} graphs checked, {} soundness violations",
        args.count, disagreements
    );
    Ok(disagreements == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Run(a) => cmd_run(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
