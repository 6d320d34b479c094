//! Thin command-line front end over the library: dataset generation,
//! labeling, kernel computation, SVM training/prediction, the MLP
//! baseline and the experiment harness.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qclassify::baselines::{mlp_predict, mlp_train, MlpConfig};
use qclassify::harness::{
    emit_plot_data, emit_report, run_experiment, run_preset, ExperimentConfig, Preset,
    PresetReport, Task,
};
use qclassify::harness::{materialize, PoolSpec};
use qclassify::io::{
    read_gram_csv, read_json, read_records, write_gram_csv, write_json, write_records,
};
use qclassify::measures::{discord_label, entanglement_label};
use qclassify::qkernel::{gram_matrix, FeatureMapConfig, DEFAULT_ALPHA, DEFAULT_REPS};
use qclassify::states::{features, rotate_records, BellKind, FeatureScheme};
use qclassify::svm::{platt_fit, train_smo, SmoParams, SvmModel};
use qclassify::{baselines, Result};

#[derive(Parser)]
#[command(
    name = "qclassify",
    version,
    about = "Quantum-kernel classification of two-qubit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset of two-qubit states as JSONL
    Gen(GenArgs),
    /// Apply fresh random local rotations to every state of a dataset
    Rotate(RotateArgs),
    /// Fill in exact labels (and the measure value) for a dataset
    Label(LabelArgs),
    /// Compute a kernel Gram or cross-kernel matrix as CSV
    Kernel(KernelArgs),
    /// Train a kernel SVM on a precomputed Gram matrix
    Train(TrainArgs),
    /// Predict labels for a cross-kernel matrix with a trained model
    Predict(PredictArgs),
    /// Train and evaluate the neural-network baseline
    Mlp(MlpArgs),
    /// Run an experiment from a config file or a named preset
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Werner,
    Horodecki,
    Mems,
    BellDiagonal,
}

#[derive(Clone, Copy, ValueEnum)]
enum BellArg {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl From<BellArg> for BellKind {
    fn from(arg: BellArg) -> BellKind {
        match arg {
            BellArg::PsiMinus => BellKind::PsiMinus,
            BellArg::PsiPlus => BellKind::PsiPlus,
            BellArg::PhiMinus => BellKind::PhiMinus,
            BellArg::PhiPlus => BellKind::PhiPlus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Entanglement,
    Discord,
}

impl From<TaskArg> for Task {
    fn from(arg: TaskArg) -> Task {
        match arg {
            TaskArg::Entanglement => Task::Entanglement,
            TaskArg::Discord => Task::Discord,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Dm16,
    Bloch15,
}

impl From<SchemeArg> for FeatureScheme {
    fn from(arg: SchemeArg) -> FeatureScheme {
        match arg {
            SchemeArg::Dm16 => FeatureScheme::Dm16,
            SchemeArg::Bloch15 => FeatureScheme::Bloch15,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_enum, default_value = "psi-minus")]
    bell: BellArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    p_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    p_max: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    t_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t_max: f64,
    /// Sample single-axis (zero-discord) Bell-diagonal states
    #[arg(long, default_value_t = false)]
    zero_discord: bool,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct RotateArgs {
    #[arg(long)]
    seed: u64,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct LabelArgs {
    #[arg(long, value_enum)]
    task: TaskArg,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelTypeArg {
    Quantum,
    Linear,
    Rbf,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long = "type", value_enum)]
    kernel_type: KernelTypeArg,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = DEFAULT_REPS)]
    reps: usize,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_enum, default_value = "dm16")]
    scheme: SchemeArg,
    /// Training dataset (Gram columns)
    #[arg(short = 'i', long)]
    input: PathBuf,
    /// Optional second dataset; output becomes the test x train cross-kernel
    #[arg(short = 'j', long)]
    test: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// Precomputed training Gram (CSV)
    #[arg(long)]
    kernel: PathBuf,
    /// Training dataset (JSONL), for labels
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum)]
    task: TaskArg,
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    max_passes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// Cross-kernel matrix, test rows x train columns (CSV)
    #[arg(long)]
    kernel: PathBuf,
    /// Test dataset (JSONL), for ids and parameters
    #[arg(long)]
    data: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct MlpArgs {
    #[arg(long, default_value_t = 50)]
    hidden: usize,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long, value_enum)]
    task: TaskArg,
    #[arg(long, value_enum, default_value = "dm16")]
    scheme: SchemeArg,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment config file (JSON)
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset
    #[arg(long)]
    preset: Option<String>,
    /// Master seed for presets
    #[arg(long, default_value_t = qclassify::harness::DEFAULT_PRESET_SEED)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
    /// Also write plot-ready CSV (per-cell suffixes for multi-cell reports)
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

fn label_dataset(path: &PathBuf, out: &PathBuf, task: Task) -> Result<()> {
    let mut records = read_records(path)?;
    for rec in &mut records {
        match task {
            Task::Entanglement => {
                let label = entanglement_label(&rec.dm)?;
                rec.label_ent = Some(label.value);
                rec.measure = Some(label.concurrence);
            }
            Task::Discord => {
                let label = discord_label(&rec.dm)?;
                rec.label_discord = Some(label.value);
                rec.measure = Some(label.discord);
            }
        }
    }
    write_records(out, &records)
}

fn dataset_labels(records: &[qclassify::StateRecord], task: Task) -> Result<Vec<i8>> {
    records
        .iter()
        .map(|rec| {
            let stored = match task {
                Task::Entanglement => rec.label_ent,
                Task::Discord => rec.label_discord,
            };
            match stored {
                Some(l) => Ok(l),
                // unlabeled datasets get exact labels on the fly
                None => Ok(match task {
                    Task::Entanglement => entanglement_label(&rec.dm)?.value,
                    Task::Discord => discord_label(&rec.dm)?.value,
                }),
            }
        })
        .collect()
}

fn feature_rows(records: &[qclassify::StateRecord], scheme: FeatureScheme) -> Vec<Vec<f64>> {
    records.iter().map(|r| features(&r.dm, scheme)).collect()
}

#[derive(serde::Serialize)]
struct Prediction {
    id: u64,
    decision: f64,
    label: i8,
    probability: f64,
}

#[derive(serde::Serialize)]
struct MlpReport {
    train_accuracy: f64,
    test_accuracy: f64,
    final_loss: f64,
    loss_trace: Vec<f64>,
    degenerate_all_one_class: Option<i8>,
    predictions: Vec<Prediction>,
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen(args) => {
            if args.zero_discord && !matches!(args.family, FamilyArg::BellDiagonal) {
                return Err(qclassify::Error::Config(
                    "--zero-discord only applies to --family bell-diagonal".into(),
                ));
            }
            let spec = match (args.family, args.zero_discord) {
                (FamilyArg::Werner, _) => PoolSpec::Werner {
                    bell: args.bell.into(),
                    p_min: args.p_min,
                    p_max: args.p_max,
                },
                (FamilyArg::Horodecki, _) => PoolSpec::Horodecki {
                    bell: args.bell.into(),
                    p_min: args.p_min,
                    p_max: args.p_max,
                },
                (FamilyArg::Mems, _) => PoolSpec::Mems,
                (FamilyArg::BellDiagonal, false) => PoolSpec::BellDiagonal {
                    t_min: args.t_min,
                    t_max: args.t_max,
                },
                (FamilyArg::BellDiagonal, true) => PoolSpec::ZeroDiscordBellDiagonal {
                    t_min: args.t_min,
                    t_max: args.t_max,
                },
            };
            // generation leaves labels empty; `label` fills them
            let mut records = match spec {
                PoolSpec::ZeroDiscordBellDiagonal { t_min, t_max } => {
                    qclassify::sample_zero_discord_bd(t_min, t_max, args.n, args.seed)?
                }
                _ => {
                    let mut recs = materialize(&spec, args.n, args.seed, Task::Entanglement)?;
                    for rec in &mut recs {
                        rec.label_ent = None;
                        rec.label_discord = None;
                        rec.measure = None;
                    }
                    recs
                }
            };
            records.sort_by_key(|r| r.id);
            write_records(&args.output, &records)?;
            eprintln!(
                "wrote {} records to {}",
                records.len(),
                args.output.display()
            );
        }
        Command::Rotate(args) => {
            let records = read_records(&args.input)?;
            let rotated = rotate_records(&records, args.seed);
            write_records(&args.output, &rotated)?;
            eprintln!("rotated {} records", rotated.len());
        }
        Command::Label(args) => {
            label_dataset(&args.input, &args.output, args.task.into())?;
        }
        Command::Kernel(args) => {
            let scheme: FeatureScheme = args.scheme.into();
            let train = read_records(&args.input)?;
            let x_train = feature_rows(&train, scheme);
            let x_test = args
                .test
                .as_ref()
                .map(|p| Ok::<_, qclassify::Error>(feature_rows(&read_records(p)?, scheme)))
                .transpose()?;
            let k = match args.kernel_type {
                KernelTypeArg::Quantum => {
                    let cfg = FeatureMapConfig::new(scheme.len(), args.alpha, args.reps)?;
                    gram_matrix(&x_train, x_test.as_deref(), &cfg)?
                }
                KernelTypeArg::Linear => baselines::linear_kernel(&x_train, x_test.as_deref())?,
                KernelTypeArg::Rbf => {
                    let gamma = args
                        .gamma
                        .unwrap_or_else(|| baselines::default_gamma(&x_train));
                    baselines::rbf_kernel(&x_train, x_test.as_deref(), gamma)?
                }
            };
            write_gram_csv(&args.output, &k)?;
            eprintln!("wrote {}x{} kernel matrix", k.rows, k.cols);
        }
        Command::Train(args) => {
            let gram = read_gram_csv(&args.kernel)?;
            let records = read_records(&args.data)?;
            let task: Task = args.task.into();
            let y = dataset_labels(&records, task)?;
            let params = SmoParams {
                c: args.c,
                tol: args.tol,
                max_passes: args.max_passes,
                seed: args.seed,
                record_objective: false,
            };
            let mut model = train_smo(&gram, &y, &params)?;
            platt_fit(&mut model, &gram, &y)?;
            model.metadata.kernel_digest = format!("precomputed:{}", args.kernel.display());
            model.metadata.seed = args.seed;
            write_json(&args.output, &model)?;
            eprintln!(
                "trained SVM: {} support vectors of {}, b = {:.6}",
                model.support_idx.len(),
                y.len(),
                model.b
            );
        }
        Command::Predict(args) => {
            let model: SvmModel = read_json(&args.model)?;
            let gram = read_gram_csv(&args.kernel)?;
            let records = read_records(&args.data)?;
            if gram.rows != records.len() {
                return Err(qclassify::Error::Contract(format!(
                    "kernel has {} rows but dataset has {} records",
                    gram.rows,
                    records.len()
                )));
            }
            let decisions = model.decision_values(&gram)?;
            let labels = model.predict(&gram)?;
            let probs = model.predict_proba(&gram)?;
            let predictions: Vec<Prediction> = records
                .iter()
                .zip(decisions.iter().zip(labels.iter().zip(&probs)))
                .map(|(rec, (&decision, (&label, &probability)))| Prediction {
                    id: rec.id,
                    decision,
                    label,
                    probability,
                })
                .collect();
            write_json(&args.output, &predictions)?;
            eprintln!("predicted {} states", predictions.len());
        }
        Command::Mlp(args) => {
            let task: Task = args.task.into();
            let scheme: FeatureScheme = args.scheme.into();
            let train = read_records(&args.train)?;
            let test = read_records(&args.test)?;
            let x_train = feature_rows(&train, scheme);
            let y_train = dataset_labels(&train, task)?;
            let y01: Vec<f64> = y_train
                .iter()
                .map(|&l| if l == 1 { 1.0 } else { 0.0 })
                .collect();
            let cfg = MlpConfig {
                n_hidden: args.hidden,
                epochs: args.epochs,
                learning_rate: args.lr,
                seed: args.seed,
            };
            let model = mlp_train(&x_train, &y01, &cfg)?;
            let (_, train_preds) = mlp_predict(&model, &x_train);
            let train_accuracy = train_preds
                .iter()
                .zip(&y_train)
                .filter(|(p, t)| p == t)
                .count() as f64
                / y_train.len() as f64;

            let x_test = feature_rows(&test, scheme);
            let y_test = dataset_labels(&test, task)?;
            let (probs, preds) = mlp_predict(&model, &x_test);
            let test_accuracy = preds.iter().zip(&y_test).filter(|(p, t)| p == t).count() as f64
                / y_test.len() as f64;
            let degenerate = if preds.iter().all(|&p| p == preds[0]) {
                Some(preds[0])
            } else {
                None
            };
            let predictions: Vec<Prediction> = test
                .iter()
                .zip(preds.iter().zip(&probs))
                .map(|(rec, (&label, &probability))| Prediction {
                    id: rec.id,
                    decision: probability,
                    label,
                    probability,
                })
                .collect();
            let report = MlpReport {
                train_accuracy,
                test_accuracy,
                final_loss: model.loss_trace.last().copied().unwrap_or(f64::NAN),
                loss_trace: model.loss_trace.clone(),
                degenerate_all_one_class: degenerate,
                predictions,
            };
            write_json(&args.output, &report)?;
            eprintln!(
                "MLP: train accuracy {train_accuracy:.4}, test accuracy {test_accuracy:.4}{}",
                if degenerate.is_some() {
                    " (degenerate: one-class output)"
                } else {
                    ""
                }
            );
        }
        Command::Experiment(args) => {
            let started = Instant::now();
            let report: PresetReport = match (&args.config, &args.preset) {
                (Some(path), None) => {
                    let cfg: ExperimentConfig = read_json(path)?;
                    PresetReport::Experiment {
                        report: Box::new(run_experiment(&cfg)?),
                    }
                }
                (None, Some(name)) => {
                    let preset = Preset::from_name(name).ok_or_else(|| {
                        qclassify::Error::Config(format!(
                            "unknown preset {name:?}; available: {}",
                            Preset::ALL.map(|p| p.name()).join(", ")
                        ))
                    })?;
                    run_preset(preset, args.seed)?
                }
                _ => {
                    return Err(qclassify::Error::Config(
                        "pass exactly one of --config or --preset".into(),
                    ))
                }
            };
            emit_report(&report, &args.output)?;
            if let Some(plot_path) = &args.plot_data {
                let experiments = report.experiments();
                if experiments.len() == 1 {
                    emit_plot_data(experiments[0].1, plot_path)?;
                } else {
                    for (label, exp) in experiments {
                        let stem = plot_path
                            .file_stem()
                            .and_then(|s| s.to_str())
                            .unwrap_or("plot");
                        let ext = plot_path
                            .extension()
                            .and_then(|s| s.to_str())
                            .unwrap_or("csv");
                        let sibling = plot_path.with_file_name(format!("{stem}-{label}.{ext}"));
                        emit_plot_data(exp, sibling)?;
                    }
                }
            }
            for (label, exp) in report.experiments() {
                let m = &exp.metrics;
                eprintln!(
                    "{}{}: accuracy {:.4} precision {:.4} recall {:.4} f1 {:.4}{}",
                    exp.config.name,
                    if label.is_empty() {
                        String::new()
                    } else {
                        format!(" [{label}]")
                    },
                    m.accuracy,
                    m.precision,
                    m.recall,
                    m.f1,
                    if m.degenerate_all_one_class.is_some() {
                        " (degenerate)"
                    } else {
                        ""
                    }
                );
            }
            eprintln!("wall time: {:.1}s", started.elapsed().as_secs_f64());
        }
    }
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(err) = run() {
        eprintln!("error: {err}");
        let mut source = std::error::Error::source(&err);
        while let Some(cause) = source {
            eprintln!("  caused by: {cause}");
            source = cause.source();
        }
        std::process::exit(1);
    }
}
