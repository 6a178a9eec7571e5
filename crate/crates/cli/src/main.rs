use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mvelastic::dtw::Window;
use mvelastic::io::{read_ts_file, write_results, TsFile};
use mvelastic::protocol::{run_fold, Classifier, Experiment};
use mvelastic::{
    ErpParams, LabeledDataset, LcssParams, MeasureConfig, MeasureId, MeeVariant, MsmParams, MultivariateSeries,
    NormPolicy, Params, Strategy, TweParams, GRID_CONVENTIONS,
};

/// Multivariate elastic distances, 1-NN tuning and the elastic ensemble.
#[derive(Parser, Debug)]
#[command(name = "mvelastic", version)]
struct Cli {
    /// Worker threads (default: all logical cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the distance between two series.
    Dist(DistArgs),
    /// Evaluate 1-NN with fixed parameters.
    Eval(EvalArgs),
    /// Tune each measure by leave-one-out CV, then evaluate on the test split.
    Tune(TuneArgs),
    /// Build and evaluate an elastic ensemble.
    Mee(MeeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    I,
    D,
    Both,
}

impl StrategyArg {
    fn strategies(self) -> Vec<Strategy> {
        match self {
            StrategyArg::I => vec![Strategy::Independent],
            StrategyArg::D => vec![Strategy::Dependent],
            StrategyArg::Both => Strategy::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    I,
    D,
    Id,
    A,
}

impl From<VariantArg> for MeeVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::I => MeeVariant::I,
            VariantArg::D => MeeVariant::D,
            VariantArg::Id => MeeVariant::ID,
            VariantArg::A => MeeVariant::A,
        }
    }
}

/// Parameters for measures evaluated without tuning.
#[derive(Args, Debug, Clone)]
struct MeasureFlags {
    /// Sakoe-Chiba band half-width for DTW, DDTW, LCSS and ERP, or "full".
    #[arg(long, default_value = "full")]
    window: String,
    /// WDTW / WDDTW weight steepness.
    #[arg(long)]
    g: Option<f64>,
    /// LCSS thresholds: one per dimension (independent) or a single value (dependent).
    #[arg(long, value_delimiter = ',')]
    epsilon: Vec<f64>,
    /// ERP gap values, one per dimension.
    #[arg(long, value_delimiter = ',')]
    gap: Vec<f64>,
    /// MSM split/merge cost.
    #[arg(long)]
    c: Option<f64>,
    /// TWE stiffness.
    #[arg(long)]
    nu: Option<f64>,
    /// TWE delete penalty.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args, Debug)]
struct DistArgs {
    /// First series: a .ts file (first instance is used) or one time point per line.
    #[arg(long)]
    a: PathBuf,
    /// Second series, same format.
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    measure: MeasureId,
    #[arg(long, value_enum)]
    strategy: StrategyArg,
    /// Order of the p-norm combining independent per-dimension distances.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[command(flatten)]
    params: MeasureFlags,
}

#[derive(Args, Debug, Clone)]
struct RunFlags {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Dataset name in the results (default: @problemName or the file stem).
    #[arg(long)]
    dataset: Option<String>,
    /// Z-normalize every dimension of every series first.
    #[arg(long)]
    norm: bool,
    /// Number of resamples; fold 0 is the split as given.
    #[arg(long, default_value_t = 1)]
    folds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Results CSV path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fill the elapsed_ms column. Timed output is not reproducible byte for byte.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    run: RunFlags,
    #[arg(long)]
    measure: MeasureId,
    #[arg(long, value_enum)]
    strategy: StrategyArg,
    #[command(flatten)]
    params: MeasureFlags,
}

#[derive(Args, Debug)]
struct TuneArgs {
    #[command(flatten)]
    run: RunFlags,
    /// A measure name, or "all" for the whole catalog.
    #[arg(long)]
    measure: String,
    #[arg(long, value_enum)]
    strategy: StrategyArg,
}

#[derive(Args, Debug)]
struct MeeArgs {
    #[command(flatten)]
    run: RunFlags,
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Where to write the per-fold member summaries.
    #[arg(long)]
    model_out: Option<PathBuf>,
}

/// Failures split by exit code.
enum Failure {
    /// Bad input, IO, or invalid parameters.
    Input(String),
    /// A broken internal invariant.
    Internal(String),
}

impl From<mvelastic::Error> for Failure {
    fn from(e: mvelastic::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let outcome = match pool.build() {
        Ok(pool) => {
            match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| pool.install(|| run(cli.command)))) {
                Ok(r) => r,
                Err(_) => Err(Failure::Internal("worker panicked".into())),
            }
        }
        Err(e) => Err(Failure::Internal(format!("cannot start worker pool: {e}"))),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Dist(args) => dist(args),
        Command::Eval(args) => {
            let classifiers = args
                .strategy
                .strategies()
                .into_iter()
                .map(|s| Ok(Classifier::Fixed(fixed_config(args.measure, s, 1.0, &args.params)?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            let config = format!(
                "command=eval measure={} strategy={:?} {}",
                args.measure,
                args.strategy,
                describe_params(&args.params)
            );
            experiment(&args.run, &classifiers, &config, None)
        }
        Command::Tune(args) => {
            let measures: Vec<MeasureId> = if args.measure.eq_ignore_ascii_case("all") {
                MeasureId::ALL.to_vec()
            } else {
                vec![args.measure.parse()?]
            };
            let classifiers: Vec<Classifier> = measures
                .iter()
                .flat_map(|&measure| {
                    args.strategy.strategies().into_iter().map(move |strategy| Classifier::Tuned { measure, strategy })
                })
                .collect();
            let config = format!("command=tune measure={} strategy={:?}", args.measure, args.strategy);
            experiment(&args.run, &classifiers, &config, None)
        }
        Command::Mee(args) => {
            let config = format!("command=mee variant={:?}", args.variant);
            let classifiers = [Classifier::Ensemble(args.variant.into())];
            experiment(&args.run, &classifiers, &config, args.model_out.as_deref())
        }
    }
}

fn dist(args: DistArgs) -> Result<(), Failure> {
    let a = read_series(&args.a)?;
    let b = read_series(&args.b)?;
    let mut values = Vec::new();
    for s in args.strategy.strategies() {
        let cfg = fixed_config(args.measure, s, args.p, &args.params)?;
        values.push(cfg.distance(&a, &b)?);
    }
    for v in values {
        println!("{}", format_significant(v, 12));
    }
    Ok(())
}

/// `value` rounded to `digits` significant digits, without trailing zeros.
fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let s = format!("{:.*e}", digits - 1, value);
    let v: f64 = s.parse().expect("formatted float parses");
    format!("{v}")
}

fn read_series(path: &Path) -> Result<MultivariateSeries, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    if text.lines().any(|l| l.trim().eq_ignore_ascii_case("@data")) {
        let file = mvelastic::parse_ts_file(&text).map_err(|e| io_err(path, e))?;
        return Ok(file.data.series()[0].clone());
    }
    let rows: Vec<Vec<f64>> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(n, l)| {
            l.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|_| io_err(path, format!("line {}: cannot parse {t:?}", n + 1))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    MultivariateSeries::from_rows(&rows).map_err(|e| io_err(path, e))
}

fn window(flags: &MeasureFlags) -> Result<Window, Failure> {
    if flags.window.eq_ignore_ascii_case("full") {
        return Ok(Window::Full);
    }
    flags.window.parse().map(Window::Band).map_err(|_| {
        Failure::Input(format!("--window must be \"full\" or a non-negative integer, got {:?}", flags.window))
    })
}

fn required<T: Copy>(value: Option<T>, flag: &str, measure: MeasureId) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Input(format!("{measure} needs --{flag}")))
}

fn fixed_config(measure: MeasureId, strategy: Strategy, p: f64, f: &MeasureFlags) -> Result<MeasureConfig, Failure> {
    let params = match measure {
        MeasureId::L2 | MeasureId::Dtwf | MeasureId::Ddtwf => Params::None,
        MeasureId::Dtw | MeasureId::Ddtw => Params::Window(window(f)?),
        MeasureId::Wdtw | MeasureId::Wddtw => Params::Weight { g: required(f.g, "g", measure)? },
        MeasureId::Lcss => {
            if f.epsilon.is_empty() {
                return Err(Failure::Input("LCSS needs --epsilon".into()));
            }
            Params::Lcss(LcssParams::new(f.epsilon.clone(), window(f)?)?)
        }
        MeasureId::Erp => {
            if f.gap.is_empty() {
                return Err(Failure::Input("ERP needs --gap".into()));
            }
            Params::Erp(ErpParams::new(f.gap.clone(), window(f)?)?)
        }
        MeasureId::Msm => Params::Msm(MsmParams::new(required(f.c, "c", measure)?)?),
        MeasureId::Twe => {
            Params::Twe(TweParams::new(required(f.nu, "nu", measure)?, required(f.lambda, "lambda", measure)?)?)
        }
    };
    Ok(MeasureConfig::new(measure, strategy, params, p)?)
}

fn describe_params(f: &MeasureFlags) -> String {
    let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
    format!(
        "window={} g={:?} epsilon={} gap={} c={:?} nu={:?} lambda={:?}",
        f.window,
        f.g,
        list(&f.epsilon),
        list(&f.gap),
        f.c,
        f.nu,
        f.lambda
    )
}

fn load(path: &Path) -> Result<TsFile, Failure> {
    read_ts_file(path).map_err(|e| io_err(path, e))
}

fn experiment(
    run: &RunFlags,
    classifiers: &[Classifier],
    config: &str,
    model_out: Option<&Path>,
) -> Result<(), Failure> {
    if run.folds == 0 {
        return Err(Failure::Input("--folds must be at least 1".into()));
    }
    let train_file = load(&run.train)?;
    let test_file = load(&run.test)?;
    let dataset = run
        .dataset
        .clone()
        .or_else(|| train_file.directive("problemName").map(str::to_string))
        .or_else(|| run.train.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "dataset".into());
    let train: &LabeledDataset = &train_file.data;
    let test: &LabeledDataset = &test_file.data;
    let exp = Experiment {
        dataset: dataset.clone(),
        norm: if run.norm { NormPolicy::ZNormPerSeriesPerDimension } else { NormPolicy::None },
        seed: run.seed,
        p: run.p,
        timing: run.timing,
    };

    let mut rows = Vec::new();
    let mut summaries = String::new();
    for classifier in classifiers {
        for fold in 0..run.folds {
            let outcome = run_fold(train, test, classifier, &exp, fold)?;
            if !(0.0..=1.0).contains(&outcome.row.test_acc) || !(0.0..=1.0).contains(&outcome.row.train_acc) {
                return Err(Failure::Internal(format!("accuracy out of range in {:?}", outcome.row)));
            }
            if let Some(s) = outcome.summary {
                summaries.push_str(&s);
            }
            rows.push(outcome.row);
        }
    }

    let header = format!(
        "# mvelastic {} {GRID_CONVENTIONS} {config} dataset={dataset} train={} test={} norm={} folds={} seed={} p={} timing={}\n",
        env!("CARGO_PKG_VERSION"),
        run.train.display(),
        run.test.display(),
        run.norm,
        run.folds,
        run.seed,
        run.p,
        run.timing
    );
    let csv = header + &write_results(&rows);
    match &run.out {
        Some(path) => fs::write(path, csv).map_err(|e| io_err(path, e))?,
        None => print!("{csv}"),
    }
    if let Some(path) = model_out {
        fs::write(path, summaries).map_err(|e| io_err(path, e))?;
    }
    Ok(())
}
