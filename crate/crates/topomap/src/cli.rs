//! Command-line front end. [`run`] maps every failure onto a documented
//! exit code and never leaves a partial output file behind.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use topomap_core::datagen::{generate, SyntheticKind, SyntheticSpec};
use topomap_core::density::{check_fraction, default_bandwidth, kde_density};
use topomap_core::{
    components_at, compute_emst, diagram_from_mst, probe_layout, project, verify_projection, MetricKind,
    OptimizedSettings, PlacementStrategy, PointCloud, SortedMst, Vec2, VerificationReport,
};

use crate::io::{self, AtomicFile, CsvOptions, IoError};
use crate::svg::{render_svg, Coloring, SvgOptions};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INGESTION: u8 = 3;
pub const EXIT_VERIFICATION: u8 = 4;
pub const EXIT_STRICT_FALLBACK: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "topomap", version, about = "Topology-preserving 2-D projection of point clouds")]
pub struct Cli {
    /// Worker threads for the parallel kernels. Defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project a point cloud to 2-D, verify the result and write it.
    Project(ProjectArgs),
    /// Check that a layout preserves the 0-dimensional persistence of a cloud.
    Verify(VerifyArgs),
    /// Annotate a foreign 2-D layout with the cloud's largest components.
    Probe(ProbeArgs),
    /// Write a synthetic dataset.
    Generate(GenerateArgs),
    /// Write the persistence diagram and optionally a component cut.
    Diagram(DiagramArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Angular,
}

impl From<MetricArg> for MetricKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Euclidean => MetricKind::Euclidean,
            MetricArg::Angular => MetricKind::Angular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    #[value(name = "1d")]
    OneD,
    Geometric,
    Optimized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeaderArg {
    Auto,
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Gaussians,
    Rings,
    Spheres,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input CSV, one point per row.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "euclidean")]
    pub metric: MetricArg,
    /// Field delimiter of the input.
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    #[arg(long, value_enum, default_value = "auto")]
    pub header: HeaderArg,
    /// Zero-based column holding a class label instead of a coordinate.
    #[arg(long)]
    pub label_column: Option<usize>,
    /// Spanning tree cache: read when the file exists, written otherwise.
    #[arg(long)]
    pub mst_cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Write an SVG scatter plot here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Kernel bandwidth for the density estimate. Defaults to 1/20 of the
    /// layout's bounding-box diagonal.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Fraction of the maximum density from which points are highlighted.
    #[arg(long, default_value_t = 0.5)]
    pub density_threshold: f64,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Layout CSV (`x,y`).
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "geometric")]
    pub strategy: StrategyArg,
    #[command(flatten)]
    pub render: RenderArgs,
    /// Persistence diagram CSV of the input.
    #[arg(long)]
    pub diagram: Option<PathBuf>,
    /// Per-merge log CSV.
    #[arg(long)]
    pub merge_log: Option<PathBuf>,
    /// Verification report in key=value form.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Treat any optimizer fallback as a failure.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Layout CSV to check.
    #[arg(long)]
    pub layout: PathBuf,
    /// Absolute tolerance on edge lengths, scaled by max(1, length).
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Write the report here as well; `.csv` selects the CSV form.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Foreign layout CSV (`x,y`), e.g. from another projection method.
    #[arg(long)]
    pub layout: PathBuf,
    /// Number of topology-changing edges after which to cut.
    #[arg(long)]
    pub components_at: usize,
    /// Number of largest components to annotate.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Per-point annotations (`point,label,x,y`).
    #[arg(long)]
    pub output: PathBuf,
    /// Per-component scores (`label,size,fragmentation`).
    #[arg(long)]
    pub components: Option<PathBuf>,
    #[command(flatten)]
    pub render: RenderArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Points per cluster, comma separated. Defaults depend on the kind.
    #[arg(long, value_delimiter = ',')]
    pub counts: Option<Vec<usize>>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Diagram CSV (`birth,death,creator,edge_a,edge_b`).
    #[arg(long)]
    pub output: PathBuf,
    /// Also cut the filtration after this many edges.
    #[arg(long, requires = "labels")]
    pub components_at: Option<usize>,
    /// Component labels (`point,label`) of the cut.
    #[arg(long, requires = "components_at")]
    pub labels: Option<PathBuf>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Ingestion(#[from] IoError),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    StrictFallback(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Ingestion(_) => EXIT_INGESTION,
            CliError::Verification(_) => EXIT_VERIFICATION,
            CliError::StrictFallback(_) => EXIT_STRICT_FALLBACK,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn data_error(path: &Path, source: topomap_core::Error) -> CliError {
    match source.kind() {
        topomap_core::ErrorKind::Usage => usage(format!("{}: {source}", path.display())),
        _ => CliError::Ingestion(IoError::Data { path: path.into(), source }),
    }
}

fn check_input(path: &Path) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(usage(format!("{}: input file does not exist", path.display())))
    }
}

fn check_output(path: &Path) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if path.is_dir() {
        return Err(usage(format!("{}: output path is a directory", path.display())));
    }
    if dir.is_dir() {
        Ok(())
    } else {
        Err(usage(format!("{}: output directory does not exist", path.display())))
    }
}

fn check_outputs<'a>(paths: impl IntoIterator<Item = &'a Option<PathBuf>>) -> CliResult<()> {
    paths.into_iter().flatten().try_for_each(|p| check_output(p))
}

fn check_render(render: &RenderArgs) -> CliResult<()> {
    if let Some(h) = render.bandwidth {
        if !(h > 0.0 && h.is_finite()) {
            return Err(usage("--bandwidth must be positive"));
        }
    }
    check_fraction(render.density_threshold).map_err(|_| usage("--density-threshold must lie in (0, 1]"))?;
    check_outputs([&render.svg])
}

impl InputArgs {
    fn check(&self) -> CliResult<()> {
        check_input(&self.input)?;
        if !self.delimiter.is_ascii() {
            return Err(usage("--delimiter must be a single ASCII character"));
        }
        if let Some(cache) = &self.mst_cache {
            if !cache.is_file() {
                check_output(cache)?;
            }
        }
        Ok(())
    }

    fn load(&self) -> CliResult<io::LoadedCloud> {
        let options = CsvOptions {
            delimiter: self.delimiter as u8,
            has_header: match self.header {
                HeaderArg::Auto => None,
                HeaderArg::Yes => Some(true),
                HeaderArg::No => Some(false),
            },
            label_column: self.label_column,
        };
        let loaded = io::load_csv(&self.input, &options, self.metric.into())?;
        info!("loaded {} points in {} dimensions", loaded.cloud.len(), loaded.cloud.dim());
        Ok(loaded)
    }

    /// Spanning tree of `cloud`, through the cache when one is configured.
    fn tree(&self, cloud: &PointCloud) -> CliResult<SortedMst> {
        match &self.mst_cache {
            Some(cache) if cache.is_file() => {
                let mst = io::load_mst(cache, cloud.len())?;
                info!("read spanning tree from {}", cache.display());
                Ok(mst)
            }
            Some(cache) => {
                let mst = compute_emst(cloud);
                io::write_file_atomic(cache, &io::to_bytes(|w| io::write_mst(w, &mst)))?;
                Ok(mst)
            }
            None => Ok(compute_emst(cloud)),
        }
    }
}

fn render(coords: &[Vec2], coloring: Coloring<'_>, args: &RenderArgs) -> CliResult<Option<Vec<u8>>> {
    if args.svg.is_none() {
        return Ok(None);
    }
    let bandwidth = args.bandwidth.unwrap_or_else(|| default_bandwidth(coords));
    let density = kde_density(coords, bandwidth).map_err(|e| usage(e.to_string()))?;
    let options = SvgOptions { threshold_fraction: args.density_threshold, ..SvgOptions::default() };
    let svg = render_svg(coords, &density, coloring, &options).map_err(|e| usage(e.to_string()))?;
    Ok(Some(svg.into_bytes()))
}

fn report_text(report: &VerificationReport) -> Vec<u8> {
    io::to_bytes(|w| io::write_report_text(w, report))
}

/// Writes every pending output or none: all temporaries are created first
/// and only persisted once each of them was written.
fn commit_all(outputs: Vec<(PathBuf, Vec<u8>)>) -> CliResult<()> {
    let mut staged = Vec::with_capacity(outputs.len());
    for (path, bytes) in &outputs {
        let mut f = AtomicFile::create(path)?;
        std::io::Write::write_all(f.writer(), bytes).map_err(|source| IoError::Io { path: path.clone(), source })?;
        staged.push(f);
    }
    for f in staged {
        f.commit()?;
    }
    Ok(())
}

fn run_project(args: &ProjectArgs) -> CliResult<()> {
    args.input.check()?;
    check_output(&args.output)?;
    check_outputs([&args.diagram, &args.merge_log, &args.report])?;
    check_render(&args.render)?;

    let loaded = args.input.load()?;
    let cloud = &loaded.cloud;
    let mst = args.input.tree(cloud)?;
    let strategy = match args.strategy {
        StrategyArg::OneD => PlacementStrategy::OneDimensional,
        StrategyArg::Geometric => PlacementStrategy::Geometric,
        StrategyArg::Optimized => PlacementStrategy::Optimized(OptimizedSettings::default()),
    };
    let layout = project(cloud, &mst, strategy).map_err(|e| match e {
        topomap_core::Error::GapViolation { .. } => CliError::Verification(e.to_string()),
        other => data_error(&args.input.input, other),
    })?;
    let fallbacks = layout.fallback_count();
    if fallbacks > 0 {
        let merges = layout.merge_log.len();
        warn!(
            "{fallbacks} of {merges} merges fell back to the geometric placement ({:.1}%)",
            100.0 * fallbacks as f64 / merges as f64
        );
    }

    let tolerance = strategy.gap_tolerance();
    let report = verify_projection(cloud, &layout.coords, tolerance).map_err(|e| data_error(&args.input.input, e))?;
    print!("{}", String::from_utf8_lossy(&report_text(&report)));
    if !report.pd_equal {
        return Err(CliError::Verification("layout failed verification; nothing was written".into()));
    }
    if args.strict && fallbacks > 0 {
        return Err(CliError::StrictFallback(format!(
            "{fallbacks} optimizer fallbacks with --strict; nothing was written"
        )));
    }

    let mut outputs = vec![(args.output.clone(), io::to_bytes(|w| io::write_layout(w, &layout.coords)))];
    if let Some(p) = &args.diagram {
        let pd = diagram_from_mst(&mst);
        outputs.push((p.clone(), io::to_bytes(|w| io::write_diagram(w, &pd))));
    }
    if let Some(p) = &args.merge_log {
        outputs.push((p.clone(), io::to_bytes(|w| io::write_merge_log(w, &layout.merge_log))));
    }
    if let Some(p) = &args.report {
        outputs.push((p.clone(), report_text(&report)));
    }
    if let (Some(p), Some(svg)) = (&args.render.svg, render(&layout.coords, Coloring::Density, &args.render)?) {
        outputs.push((p.clone(), svg));
    }
    commit_all(outputs)
}

fn run_verify(args: &VerifyArgs) -> CliResult<()> {
    args.input.check()?;
    check_input(&args.layout)?;
    check_outputs([&args.report])?;
    if !(args.tolerance > 0.0 && args.tolerance.is_finite()) {
        return Err(usage("--tolerance must be positive"));
    }
    let loaded = args.input.load()?;
    let coords = io::load_layout(&args.layout)?;
    let mst = args.input.tree(&loaded.cloud)?;
    let report = topomap_core::verify_against_mst(&mst, &coords, args.tolerance)
        .map_err(|e| data_error(&args.layout, e))?;
    let text = report_text(&report);
    print!("{}", String::from_utf8_lossy(&text));
    if let Some(p) = &args.report {
        let bytes = if p.extension().is_some_and(|e| e == "csv") {
            io::to_bytes(|w| io::write_report_csv(w, &report))
        } else {
            text
        };
        io::write_file_atomic(p, &bytes)?;
    }
    if report.pd_equal {
        Ok(())
    } else {
        Err(CliError::Verification("layout does not preserve the persistence diagram".into()))
    }
}

fn run_probe(args: &ProbeArgs) -> CliResult<()> {
    args.input.check()?;
    check_input(&args.layout)?;
    check_output(&args.output)?;
    check_outputs([&args.components])?;
    check_render(&args.render)?;
    if args.top == 0 {
        return Err(usage("--top must be at least 1"));
    }
    let loaded = args.input.load()?;
    let n = loaded.cloud.len();
    if args.components_at > n - 1 {
        return Err(usage(format!("--components-at {} exceeds n - 1 = {}", args.components_at, n - 1)));
    }
    let coords = io::load_layout(&args.layout)?;
    if coords.len() != n {
        return Err(usage(format!("layout has {} rows but the cloud has {n} points", coords.len())));
    }
    if args.input.mst_cache.is_some() {
        warn!("--mst-cache is ignored by probe");
    }
    let probe = probe_layout(&loaded.cloud, &coords, args.components_at, args.top)
        .map_err(|e| data_error(&args.layout, e))?;
    for c in &probe.components {
        println!("label={} size={} fragmentation={}", c.label, c.size, io::fmt_f64(c.fragmentation));
    }

    let mut outputs = vec![(args.output.clone(), io::to_bytes(|w| io::write_probe_points(w, &probe)))];
    if let Some(p) = &args.components {
        outputs.push((p.clone(), io::to_bytes(|w| io::write_probe_components(w, &probe))));
    }
    // largest component gets the first palette color
    let palette: Vec<Option<usize>> = probe
        .labels
        .iter()
        .map(|l| l.and_then(|l| probe.components.iter().position(|c| c.label == l)))
        .collect();
    if let (Some(p), Some(svg)) = (&args.render.svg, render(&coords, Coloring::Labels(&palette), &args.render)?) {
        outputs.push((p.clone(), svg));
    }
    commit_all(outputs)
}

fn run_generate(args: &GenerateArgs) -> CliResult<()> {
    check_output(&args.output)?;
    let kind = match args.kind {
        KindArg::Gaussians => SyntheticKind::Gaussians,
        KindArg::Rings => SyntheticKind::Rings,
        KindArg::Spheres => SyntheticKind::ConcentricSpheres,
    };
    let mut spec = SyntheticSpec::default_for(kind, args.seed);
    if let Some(counts) = &args.counts {
        spec.counts = counts.clone();
    }
    spec.validate().map_err(|e| usage(e.to_string()))?;
    let data = generate(&spec).map_err(|e| usage(e.to_string()))?;
    let bytes = io::to_bytes(|w| io::write_points(w, &data.cloud, Some(&data.labels)));
    io::write_file_atomic(&args.output, &bytes)?;
    info!("wrote {} points to {}", data.cloud.len(), args.output.display());
    Ok(())
}

fn run_diagram(args: &DiagramArgs) -> CliResult<()> {
    args.input.check()?;
    check_output(&args.output)?;
    check_outputs([&args.labels])?;
    let loaded = args.input.load()?;
    let n = loaded.cloud.len();
    if let Some(k) = args.components_at {
        if k > n - 1 {
            return Err(usage(format!("--components-at {k} exceeds n - 1 = {}", n - 1)));
        }
    }
    let mst = args.input.tree(&loaded.cloud)?;
    let pd = diagram_from_mst(&mst);
    let mut outputs = vec![(args.output.clone(), io::to_bytes(|w| io::write_diagram(w, &pd)))];
    if let (Some(k), Some(p)) = (args.components_at, &args.labels) {
        let partition = components_at(&mst, k).map_err(|e| data_error(&args.input.input, e))?;
        outputs.push((p.clone(), io::to_bytes(|w| io::write_labels(w, &partition.labels))));
    }
    commit_all(outputs)
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        // a pool that already exists keeps its size
        if rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_err() {
            warn!("thread pool already initialized; --threads ignored");
        }
    }
    match &cli.command {
        Command::Project(a) => run_project(a),
        Command::Verify(a) => run_verify(a),
        Command::Probe(a) => run_probe(a),
        Command::Generate(a) => run_generate(a),
        Command::Diagram(a) => run_diagram(a),
    }
}

/// Runs the parsed command line, reporting failures on stderr.
pub fn run(cli: &Cli) -> ExitCode {
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
