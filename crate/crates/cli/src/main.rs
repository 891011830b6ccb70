//! `steno`: stimulus generation, sketch analysis, corpus reports and the
//! study service.
//!
//! Exit status: 0 success, 2 usage error, 3 data error.

use std::fs;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use steno_core::catalog::{stimulus_seed, write_synthetic_catalog, Catalog};
use steno_core::classify::{DatasetProperties, GradeThresholds, TrendDirection};
use steno_core::io::{load_series_csv, load_stroke_json, save_series_csv};
use steno_core::loess::estimate_trend_loess;
use steno_core::metrics::RegressionOutcome;
use steno_core::noise::{inject_gaussian_noise, measure_snr, NoiseLevel};
use steno_core::pipeline::{summarize, CorpusReport};
use steno_core::plan::{build_stimulus_plan_with, PlanOptions};
use steno_core::render::{regression_plot_svg, stimulus_svg, to_canvas};
use steno_core::session::SketchAction;
use steno_core::spectrum::estimate_trend_fft;
use steno_core::store::{SessionEvent, SessionStore};
use steno_core::stroke::{CanvasSpec, StrokeRecord};
use steno_core::{Analyzer, StenoError, TimeSeries, ANALYSIS_SAMPLES};

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser)]
#[command(name = "steno", version, about = "Visual stenography toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write noisy CSV + SVG stimuli for one dataset.
    GenStimuli(GenArgs),
    /// Compare one sketch with its stimulus.
    Analyze(AnalyzeArgs),
    /// Analyze every accepted sketch in a study data directory.
    Report(ReportArgs),
    /// Run the HTTP study service.
    Serve(ServeArgs),
    /// Write a synthetic study directory (catalog and, optionally, sessions).
    Demo(DemoArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Source series, CSV with an `x,y` header.
    #[arg(long)]
    data: PathBuf,
    /// Noise level: none, 30, 20, 10 or 5. Repeat for several; default all.
    #[arg(long = "snr")]
    levels: Vec<NoiseLevel>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum TrendArg {
    Up,
    Down,
    Constant,
}

#[derive(Args)]
struct AnalysisOptions {
    /// Grade thresholds JSON; omitted fields keep their defaults.
    #[arg(long)]
    thresholds: Option<PathBuf>,
    /// Analysis grid length.
    #[arg(long, default_value_t = ANALYSIS_SAMPLES)]
    samples: usize,
}

impl AnalysisOptions {
    fn analyzer(&self, canvas: CanvasSpec) -> Result<Analyzer, StenoError> {
        let thresholds = match &self.thresholds {
            Some(p) => GradeThresholds::load(p)?,
            None => GradeThresholds::default(),
        };
        Ok(Analyzer {
            canvas,
            samples: self.samples,
            thresholds,
            ..Analyzer::default()
        })
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Stimulus in data units (CSV).
    #[arg(long)]
    stimulus: PathBuf,
    /// Captured stroke (JSON).
    #[arg(long)]
    sketch: PathBuf,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "constant")]
    trend: TrendArg,
    /// The stimulus has a periodic component.
    #[arg(long)]
    periodic: bool,
    /// The stimulus has prominent peaks and valleys.
    #[arg(long)]
    peaks: bool,
    /// The stimulus carries no added noise.
    #[arg(long)]
    noise_free: bool,
    #[command(flatten)]
    options: AnalysisOptions,
}

#[derive(Args)]
struct ReportArgs {
    /// Study data directory (catalog.json + sessions.jsonl).
    #[arg(long)]
    sessions: PathBuf,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for per-dataset error-vs-noise plots.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    options: AnalysisOptions,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    #[arg(long, env = steno_server::DATA_DIR_ENV)]
    data: PathBuf,
    #[command(flatten)]
    options: AnalysisOptions,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per synthetic dataset.
    #[arg(long, default_value_t = 950)]
    samples: usize,
    /// Simulated participants with complete sessions.
    #[arg(long, default_value_t = 0)]
    participants: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let result = match cli.command {
        Command::GenStimuli(a) => gen_stimuli(a),
        Command::Analyze(a) => analyze(a),
        Command::Report(a) => report(a),
        Command::Serve(a) => serve(a),
        Command::Demo(a) => demo(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

fn write_json(value: &impl serde::Serialize, out: Option<&Path>) -> Result<(), StenoError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => {
            if let Some(parent) = p.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn gen_stimuli(a: GenArgs) -> Result<(), StenoError> {
    let base = load_series_csv(&a.data)?;
    let levels = if a.levels.is_empty() { NoiseLevel::ALL.to_vec() } else { a.levels };
    let stem = a
        .data
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "stimulus".into());
    let canvas = CanvasSpec::default();
    fs::create_dir_all(&a.out)?;
    for level in levels {
        let noisy = inject_gaussian_noise(&base, level, stimulus_seed(a.seed, 0, level))?;
        let name = format!("{stem}_{}", level.tag());
        save_series_csv(&noisy, &a.out.join(format!("{name}.csv")))?;
        fs::write(a.out.join(format!("{name}.svg")), stimulus_svg(&to_canvas(&noisy, &canvas)?, &canvas))?;
        let measured = match measure_snr(&base, &noisy)?.db() {
            Some(db) => format!("{db:.3}"),
            None => "inf".into(),
        };
        println!("{name}\tlevel={level}\tmeasured_db={measured}");
    }
    Ok(())
}

fn analyze(a: AnalyzeArgs) -> Result<(), StenoError> {
    let stimulus = load_series_csv(&a.stimulus)?;
    let stroke = load_stroke_json(&a.sketch)?;
    let analyzer = a.options.analyzer(stroke.canvas)?;
    let props = DatasetProperties {
        trend: match a.trend {
            TrendArg::Up => TrendDirection::Up,
            TrendArg::Down => TrendDirection::Down,
            TrendArg::Constant => TrendDirection::Constant,
        },
        periodic: a.periodic,
        peaks_valleys: a.peaks,
        noisy: !a.noise_free,
    };
    let comparison = analyzer.analyze(&stimulus, &stroke, &props)?;
    write_json(&comparison, a.out.as_deref())
}

fn report(a: ReportArgs) -> Result<(), StenoError> {
    let catalog = Catalog::load(&a.sessions)?;
    let sessions = SessionStore::in_dir(&a.sessions).replay(&catalog.dataset_ids())?;
    let analyzer = a.options.analyzer(catalog.canvas)?;
    let reports = analyzer.session_reports(&catalog, sessions.values())?;
    let regressions = summarize(&reports);
    if let Some(dir) = &a.svg {
        fs::create_dir_all(dir)?;
        for r in &regressions {
            let fit = r.fit.map(|f| match f {
                RegressionOutcome::PercentChange { slope, intercept, .. }
                | RegressionOutcome::UndefinedBaseline { slope, intercept } => (slope, intercept),
            });
            let title = match r.fit.and_then(|f| f.percent()) {
                Some(p) => format!("{} / {} ({p:+.1}%)", r.dataset, r.metric),
                None => format!("{} / {}", r.dataset, r.metric),
            };
            fs::write(
                dir.join(format!("{}_{}.svg", r.dataset, r.metric)),
                regression_plot_svg(&title, &r.points, fit),
            )?;
        }
    }
    eprintln!("{} sketches from {} sessions", reports.len(), sessions.len());
    write_json(&CorpusReport { reports, regressions }, a.out.as_deref())
}

fn serve(a: ServeArgs) -> Result<(), StenoError> {
    let analyzer = a.options.analyzer(CanvasSpec::default())?;
    let state = Arc::new(steno_server::AppState::open(&a.data, analyzer)?);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(steno_server::serve(SocketAddr::new(a.host, a.port), state))?;
    Ok(())
}

/// Writes a synthetic catalog and, for each simulated participant, a
/// complete session whose sketches cycle through tracing the stimulus,
/// drawing its smooth FFT trend and drawing its LOESS trend.
fn demo(a: DemoArgs) -> Result<(), StenoError> {
    let catalog = write_synthetic_catalog(&a.out, a.seed, a.samples)?;
    let store = SessionStore::in_dir(&a.out);
    if store.path().exists() {
        fs::remove_file(store.path())?;
    }
    let datasets = catalog.dataset_ids();
    let opts = PlanOptions {
        allow_any_dataset_count: true,
    };
    for participant in 0..a.participants {
        let id = format!("p{participant:04}");
        store.append(&SessionEvent::Created {
            session: id.clone(),
            participant,
            seed: catalog.seed,
        })?;
        let plan = build_stimulus_plan_with(&datasets, participant, catalog.seed, opts)?;
        for (k, assignment) in plan.assignments.iter().enumerate() {
            let px = to_canvas(&catalog.stimulus(&assignment.dataset, assignment.level)?, &catalog.canvas)?;
            let drawn = simulated_sketch(&px, (participant + k) % 3, &catalog.canvas)?;
            let stroke = StrokeRecord::from_canvas_series(&id, &assignment.dataset, catalog.canvas, &drawn);
            store.append(&SessionEvent::Sketch {
                session: id.clone(),
                stimulus: assignment.dataset.clone(),
                action: SketchAction::Accept,
                stroke: Some(stroke),
            })?;
        }
    }
    eprintln!(
        "wrote {} datasets and {} sessions to {}",
        datasets.len(),
        a.participants,
        a.out.display()
    );
    Ok(())
}

fn simulated_sketch(px: &TimeSeries, style: usize, canvas: &CanvasSpec) -> Result<TimeSeries, StenoError> {
    let drawn = match style {
        0 => return Ok(px.clone()),
        1 => estimate_trend_fft(px)?,
        _ => estimate_trend_loess(px, 0.4)?,
    };
    px.with_ys(drawn.ys().iter().map(|y| y.clamp(0.0, canvas.height)).collect())
}
