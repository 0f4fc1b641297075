//! Command-line surface for the settlement morphospace toolkit.
//!
//! Subcommands: `measure` footprint rasters into morphospace points,
//! `generate` theoretical reference configurations, `plot` pairwise scatter
//! views of a dataset, and `classify` points against a band table. Every
//! command is reproducible: seeds default to a fixed constant, no
//! environment variables are consulted, and identical invocations produce
//! byte-identical outputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use morphospace_core::dataset::{self, MorphoDataset};
use morphospace_core::generators::{
    anneal_entropy, generate, random_field, AnnealMode, AnnealParams, GenKind, GenSpec,
};
use morphospace_core::metrics::{measure_with_workers, DensityMode, MorphoPoint};
use morphospace_core::raster::{self, Polarity, RasterFormat};
use morphospace_core::svg::{emit_svg_scatter, Axis};
use morphospace_core::Grid;

/// Fixed default seed; never derived from the clock.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "morphospace",
    version,
    about = "Place settlement footprint grids in the density/permeability/information morphospace"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure footprint rasters into morphospace points (CSV rows).
    Measure(MeasureArgs),
    /// Generate a theoretical reference configuration.
    Generate(GenerateArgs),
    /// Emit the three pairwise scatter plots of a dataset.
    Plot(PlotArgs),
    /// Classify dataset points against a band table.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct MeasureArgs {
    /// Input rasters: PGM (P2/P5) or plain-text '0'/'1' grids.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    /// Density denominator: whole grid or convex hull of the footprint.
    #[arg(long, value_enum, default_value_t = ModeArg::Global)]
    mode: ModeArg,

    /// Grayscale binarisation threshold (built where value < threshold).
    #[arg(long, default_value_t = raster::DEFAULT_THRESHOLD)]
    threshold: u8,

    /// Treat bright pixels as built instead of dark ones.
    #[arg(long)]
    invert: bool,

    /// Resample each input to WxH (e.g. 3000x3000) before measuring.
    #[arg(long, value_name = "WxH", value_parser = parse_dims)]
    resample: Option<(usize, usize)>,

    /// Append rows to this dataset file instead of printing to stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads for the window scan (never changes the output bytes).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    workers: u16,

    /// Category recorded on every measured point.
    #[arg(long)]
    category: Option<String>,

    /// Population recorded on the point (single input only).
    #[arg(long)]
    population: Option<u64>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Configuration process to run.
    #[arg(long, value_enum)]
    kind: KindArg,

    /// Square grid extent in cells.
    #[arg(long, default_value_t = 3000)]
    size: usize,

    /// Grid width; overrides --size.
    #[arg(long)]
    width: Option<usize>,

    /// Grid height; overrides --size.
    #[arg(long)]
    height: Option<usize>,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Occupancy probability (random) or start occupancy (anneal).
    #[arg(long, default_value_t = 0.5)]
    p: f64,

    /// Built square side for the ordered tiling.
    #[arg(long, default_value_t = 8)]
    block: usize,

    /// Open street width for the ordered tiling.
    #[arg(long, default_value_t = 2)]
    street: usize,

    /// Lattice spacing for the dispersed configuration.
    #[arg(long, default_value_t = 10)]
    spacing: usize,

    /// Particle budget for DLA (seed cell included).
    #[arg(long, default_value_t = 20_000)]
    particles: usize,

    /// Cells to place for restricted-random aggregation.
    #[arg(long, default_value_t = 500)]
    cells: usize,

    /// Swap proposals for annealing.
    #[arg(long, default_value_t = 10_000)]
    steps: usize,

    /// Annealing acceptance rule.
    #[arg(long, value_enum, default_value_t = AnnealModeArg::Greedy)]
    anneal_mode: AnnealModeArg,

    /// Initial temperature for metropolis annealing.
    #[arg(long, default_value_t = 0.01)]
    t0: f64,

    /// Geometric cooling factor per step.
    #[arg(long, default_value_t = 0.999)]
    cooling: f64,

    /// Output grid file; stdout (text format) when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Grid encoding; default inferred from the output extension
    /// (.pgm binary PGM, anything else plain text).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Measure the generated grid and append the point to this dataset file.
    #[arg(long, value_name = "DATASET")]
    measure: Option<PathBuf>,

    /// Label for the measured point (defaults to kind-seed).
    #[arg(long)]
    label: Option<String>,

    /// Write the annealing trace (step,H,accepted CSV) to this file.
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,

    /// Worker threads for the measurement scan.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    workers: u16,
}

#[derive(Args)]
struct PlotArgs {
    /// Dataset CSV produced by `measure` / `generate --measure`.
    dataset: PathBuf,

    /// Directory for de_ipe.svg, de_i.svg, and ipe_i.svg.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Dataset CSV to classify.
    dataset: PathBuf,

    /// JSON band table; the built-in urban-band / non-urban table when omitted.
    #[arg(long, value_name = "FILE")]
    bands: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Global,
    Hull,
}

impl From<ModeArg> for DensityMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Global => DensityMode::Global,
            ModeArg::Hull => DensityMode::Hull,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Random,
    Ordered,
    Dispersed,
    Dla,
    Rrp,
    Anneal,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnnealModeArg {
    Greedy,
    Metropolis,
}

impl From<AnnealModeArg> for AnnealMode {
    fn from(m: AnnealModeArg) -> Self {
        match m {
            AnnealModeArg::Greedy => AnnealMode::Greedy,
            AnnealModeArg::Metropolis => AnnealMode::Metropolis,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Pgm,
    PgmAscii,
    Text,
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let w = w.parse::<usize>().map_err(|e| format!("bad width: {e}"))?;
    let h = h.parse::<usize>().map_err(|e| format!("bad height: {e}"))?;
    if w == 0 || h == 0 {
        return Err("dimensions must be positive".into());
    }
    Ok((w, h))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Measure(args) => cmd_measure(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Plot(args) => cmd_plot(args),
        Command::Classify(args) => cmd_classify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

// ── measure ──────────────────────────────────────────────────────────────────

fn cmd_measure(args: MeasureArgs) -> Result<ExitCode> {
    if args.population.is_some() && args.inputs.len() > 1 {
        bail!("--population applies to a single input");
    }
    let polarity = if args.invert {
        Polarity::LightIsBuilt
    } else {
        Polarity::DarkIsBuilt
    };

    let mut dataset = match &args.out {
        Some(path) if path.exists() => MorphoDataset::load_csv(path)
            .with_context(|| format!("loading existing dataset {}", path.display()))?,
        _ => MorphoDataset::new(),
    };

    let mut failures = 0usize;
    let mut stdout_rows = String::new();
    for input in &args.inputs {
        match measure_one(input, &args, polarity) {
            Ok(mut point) => {
                point.label = unique_label(&dataset, &point.label);
                if args.out.is_some() {
                    dataset
                        .push(point, input.display().to_string())
                        .map_err(|e| anyhow!(e))?;
                } else {
                    let mut single = MorphoDataset::new();
                    single
                        .push(point, input.display().to_string())
                        .map_err(|e| anyhow!(e))?;
                    // Rows only; the header is printed once below.
                    for line in single.to_csv().lines().skip(1) {
                        stdout_rows.push_str(line);
                        stdout_rows.push('\n');
                    }
                }
            }
            Err(err) => {
                failures += 1;
                eprintln!("error: {}: {err:#}", input.display());
            }
        }
    }

    if let Some(path) = &args.out {
        dataset
            .save_csv(path)
            .with_context(|| format!("writing dataset {}", path.display()))?;
    } else {
        println!("{}", dataset::CSV_HEADER);
        print!("{stdout_rows}");
    }

    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn measure_one(input: &Path, args: &MeasureArgs, polarity: Polarity) -> Result<MorphoPoint> {
    let mut grid = raster::load_raster_with(input, args.threshold, polarity)?;
    if let Some((w, h)) = args.resample {
        grid = grid.resample(w, h)?;
    }
    let label = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| input.display().to_string());
    let mut point = measure_with_workers(
        &grid,
        args.mode.into(),
        label,
        args.population,
        args.workers as usize,
    )?;
    point.category = args.category.clone();
    Ok(point)
}

/// Suffix a label with -2, -3, ... until it is unique in the dataset.
fn unique_label(dataset: &MorphoDataset, label: &str) -> String {
    if !dataset.contains_label(label) {
        return label.to_string();
    }
    let mut n = 2usize;
    loop {
        let candidate = format!("{label}-{n}");
        if !dataset.contains_label(&candidate) {
            return candidate;
        }
        n += 1;
    }
}

// ── generate ─────────────────────────────────────────────────────────────────

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    let width = args.width.unwrap_or(args.size);
    let height = args.height.unwrap_or(args.size);

    let kind = match args.kind {
        KindArg::Random => GenKind::Random { p: args.p },
        KindArg::Ordered => GenKind::Ordered {
            block_size: args.block,
            street_width: args.street,
        },
        KindArg::Dispersed => GenKind::Dispersed {
            spacing: args.spacing,
        },
        KindArg::Dla => GenKind::Dla {
            particles: args.particles,
        },
        KindArg::Rrp => GenKind::Rrp {
            cells_to_place: args.cells,
        },
        KindArg::Anneal => GenKind::Anneal {
            p: args.p,
            params: AnnealParams {
                steps: args.steps,
                mode: args.anneal_mode.into(),
                initial_temperature: args.t0,
                cooling: args.cooling,
            },
        },
    };
    let spec = GenSpec {
        kind,
        width,
        height,
        seed: args.seed,
    };

    // The anneal trace is produced alongside the grid, so that path runs the
    // process directly; everything else goes through the dispatcher.
    let grid: Grid =
        if let (GenKind::Anneal { p, params }, Some(trace_path)) = (&spec.kind, &args.trace) {
            let start = random_field(width, height, *p, spec.seed)?;
            let (grid, trace) = anneal_entropy(&start, params, spec.seed.wrapping_add(1))?;
            let mut csv = String::from("step,H,accepted\n");
            for t in &trace {
                writeln!(csv, "{},{},{}", t.step, t.entropy_bits, t.accepted)?;
            }
            std::fs::write(trace_path, csv)
                .with_context(|| format!("writing trace {}", trace_path.display()))?;
            grid
        } else {
            if args.trace.is_some() {
                bail!("--trace is only meaningful with --kind anneal");
            }
            generate(&spec)?
        };

    match &args.out {
        Some(path) => {
            let format = match args.format {
                Some(FormatArg::Pgm) => RasterFormat::PgmBinary,
                Some(FormatArg::PgmAscii) => RasterFormat::PgmAscii,
                Some(FormatArg::Text) => RasterFormat::Text,
                None => match path.extension().and_then(|e| e.to_str()) {
                    Some("pgm") => RasterFormat::PgmBinary,
                    _ => RasterFormat::Text,
                },
            };
            raster::save_raster(&grid, path, format)?;
        }
        None => {
            let bytes = raster::encode_raster(&grid, RasterFormat::Text);
            print!("{}", String::from_utf8(bytes).expect("text grid is ascii"));
        }
    }

    if let Some(dataset_path) = &args.measure {
        let mut dataset = if dataset_path.exists() {
            MorphoDataset::load_csv(dataset_path)?
        } else {
            MorphoDataset::new()
        };
        let label = args
            .label
            .clone()
            .unwrap_or_else(|| format!("{}-s{}", kind_name(&spec.kind), spec.seed));
        let label = unique_label(&dataset, &label);
        let mut point = measure_with_workers(
            &grid,
            DensityMode::Global,
            label,
            None,
            args.workers as usize,
        )?;
        point.category = Some("theoretical".into());
        dataset.push(point, spec.digest()).map_err(|e| anyhow!(e))?;
        dataset.save_csv(dataset_path)?;
    }

    Ok(ExitCode::SUCCESS)
}

fn kind_name(kind: &GenKind) -> &'static str {
    match kind {
        GenKind::Random { .. } => "random",
        GenKind::Ordered { .. } => "ordered",
        GenKind::Dispersed { .. } => "dispersed",
        GenKind::Dla { .. } => "dla",
        GenKind::Rrp { .. } => "rrp",
        GenKind::Anneal { .. } => "anneal",
    }
}

// ── plot ─────────────────────────────────────────────────────────────────────

fn cmd_plot(args: PlotArgs) -> Result<ExitCode> {
    let dataset = MorphoDataset::load_csv(&args.dataset)
        .with_context(|| format!("loading dataset {}", args.dataset.display()))?;
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    for (x, y, name) in [
        (Axis::De, Axis::IPe, "de_ipe.svg"),
        (Axis::De, Axis::I, "de_i.svg"),
        (Axis::IPe, Axis::I, "ipe_i.svg"),
    ] {
        let path = args.out_dir.join(name);
        emit_svg_scatter(&dataset, x, y, &path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

// ── classify ─────────────────────────────────────────────────────────────────

fn cmd_classify(args: ClassifyArgs) -> Result<ExitCode> {
    let dataset = MorphoDataset::load_csv(&args.dataset)
        .with_context(|| format!("loading dataset {}", args.dataset.display()))?;
    let bands = match &args.bands {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading band table {}", path.display()))?;
            let table = dataset::load_bands(&text)?;
            for (a, b) in &table.overlaps {
                eprintln!("warning: bands {a:?} and {b:?} overlap; first match wins");
            }
            table.bands
        }
        None => dataset::default_bands(),
    };
    let mut out = String::new();
    for point in dataset.points() {
        writeln!(out, "{},{}", point.label, dataset::classify(point, &bands))?;
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}
