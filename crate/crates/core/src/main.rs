use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use sparse_pcm::experiment::{self, Emit, ExperimentConfig, Input, SCHEMA_VERSION};
use sparse_pcm::io::LabelColumn;
use sparse_pcm::{AlgoConfig, Error, Registry};

/// Sparse possibilistic clustering runner.
///
/// Either give a JSON experiment file with --config, or describe a single
/// run with --algo and --m-ini. Flags override values from the file and
/// apply to every run in it.
#[derive(Debug, Parser)]
#[command(name = "sparse-pcm", version)]
struct Cli {
    /// JSON experiment configuration (schema_version 1).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Algorithm name: pcm, spcm, sapcm, apcm, fcm or kmeans.
    #[arg(long)]
    algo: Option<String>,

    #[arg(long = "m-ini")]
    m_ini: Option<usize>,

    #[arg(long)]
    alpha: Option<f64>,

    /// Sparsity strength in [0, 1).
    #[arg(long = "K")]
    k: Option<f64>,

    #[arg(long)]
    p: Option<f64>,

    #[arg(long)]
    seed: Option<u64>,

    /// Data file: CSV, or a JSON mixture spec when it ends in `.json`.
    #[arg(long, conflicts_with = "fixture")]
    input: Option<PathBuf>,

    /// CSV label column, by header name or 0-based index.
    #[arg(long = "label-column", requires = "input")]
    label_column: Option<LabelColumn>,

    /// Named data set, e.g. experiment1, example3, experiment2.
    #[arg(long)]
    fixture: Option<String>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Artifacts to write, comma separated: report, memberships, plot.
    #[arg(long, value_delimiter = ',')]
    emit: Option<Vec<Emit>>,

    /// List registered algorithms and exit.
    #[arg(long)]
    list: bool,
}

fn input_from_flags(cli: &Cli) -> Option<Input> {
    if let Some(path) = &cli.input {
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        return Some(if is_json {
            Input::Generator { path: path.clone() }
        } else {
            Input::Csv {
                path: path.clone(),
                label_column: cli.label_column.clone(),
            }
        });
    }
    cli.fixture.as_ref().map(|name| Input::Fixture {
        name: name.clone(),
        seed: cli.seed.unwrap_or(0),
    })
}

fn apply_flags(run: &mut AlgoConfig, cli: &Cli) {
    if let Some(a) = &cli.algo {
        run.algorithm = a.clone();
    }
    if let Some(m) = cli.m_ini {
        run.m_ini = m;
    }
    if cli.alpha.is_some() {
        run.alpha = cli.alpha;
    }
    if cli.k.is_some() {
        run.k = cli.k;
    }
    if let Some(p) = cli.p {
        run.p = p;
    }
    if let Some(s) = cli.seed {
        run.seed = s;
    }
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => {
            let algo = cli
                .algo
                .clone()
                .ok_or_else(|| Error::InvalidConfig("--algo is required without --config".into()))?;
            let m = cli
                .m_ini
                .ok_or_else(|| Error::InvalidConfig("--m-ini is required without --config".into()))?;
            let input = input_from_flags(cli)
                .ok_or_else(|| Error::InvalidConfig("one of --input or --fixture is required".into()))?;
            ExperimentConfig {
                schema_version: SCHEMA_VERSION,
                input,
                runs: vec![AlgoConfig::new(algo, m)],
                output_dir: PathBuf::from("out"),
                emit: vec![Emit::Report, Emit::Memberships, Emit::Plot],
            }
        }
    };
    if let Some(input) = input_from_flags(cli) {
        cfg.input = input;
    }
    if cfg.runs.is_empty() {
        if let (Some(a), Some(m)) = (&cli.algo, cli.m_ini) {
            cfg.runs.push(AlgoConfig::new(a.clone(), m));
        }
    }
    for run in &mut cfg.runs {
        apply_flags(run, cli);
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if let Some(emit) = &cli.emit {
        cfg.emit = emit.clone();
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        for c in Registry::with_builtins().iter() {
            println!("{:8} {}", c.name(), c.description());
        }
        return ExitCode::SUCCESS;
    }

    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match experiment::run_experiment(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_setup_error() { 2 } else { 1 });
        }
    };

    for r in &outcome.reports {
        let metrics = r
            .metrics
            .as_ref()
            .map(|m| format!(" RM={:.2} SR={:.2} MD={:.4}", m.rm, m.sr, m.md))
            .unwrap_or_default();
        println!(
            "{} seed={} m_ini={} m_final={} iterations={} converged={}{}",
            r.algorithm, r.seed, r.m_ini, r.m_final, r.iterations, r.converged, metrics
        );
    }
    for (i, e) in &outcome.failures {
        eprintln!("run {i} ({}) failed: {e}", cfg.runs[*i].algorithm);
    }
    if outcome.all_succeeded() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
