use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hvd_core::hvd::{verify_cells, verify_with_band, DEFAULT_BAND};
use hvd_core::{
    convert, delaunay, detect_degeneracies, voronoi, Halfspace, ModelPoint, ModelTag, Rational, Route, ScalarKind,
    VerificationReport, VoronoiOptions,
};

use crate::document::{DelaunayDocument, DiagramDocument, DocScalar, PointSetDocument, Value};
use crate::render::{render_svg, RenderOptions};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "hvd", version, about = "Hyperbolic Voronoi diagrams via power diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the Voronoi diagram of a point set.
    Compute(ComputeArgs),
    /// Convert a point set to another model.
    Convert(ConvertArgs),
    /// Extract the Delaunay complex of a point set or diagram.
    Delaunay(DelaunayArgs),
    /// Draw a planar diagram as SVG.
    Render(RenderArgs),
    /// Compare a point set's or diagram's cells with nearest-site search.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    pub input: PathBuf,
    /// Convert the sites to this model before computing.
    #[arg(long)]
    pub model: Option<String>,
    /// Override the document's curvature.
    #[arg(long, allow_hyphen_values = true)]
    pub curvature: Option<String>,
    #[arg(long, default_value = "klein")]
    pub route: String,
    /// Use exact rational arithmetic.
    #[arg(long)]
    pub exact: bool,
    /// Keep only cell halfspaces (any dimension).
    #[arg(long)]
    pub implicit: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Attach a verification summary over this many samples.
    #[arg(long)]
    pub verify: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub to: String,
    #[arg(long)]
    pub exact: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DelaunayArgs {
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub input: PathBuf,
    #[arg(long, default_value = "klein")]
    pub model: String,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 800)]
    pub width: u32,
    /// Polyline segments per boundary; 0 draws exact arcs.
    #[arg(long, default_value_t = 0)]
    pub samples_per_arc: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BAND)]
    pub band: f64,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let color = stdout.is_terminal() && std::env::var_os("NO_COLOR").is_none();
    run_with(args, &mut stdout.lock(), &mut std::io::stderr(), color)
}

/// [`run`] with explicit streams; `color` enables ANSI PASS/FAIL.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = write!(err, "{e}");
                return 2;
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            let line = line.strip_prefix("error: ").unwrap_or(line);
            let _ = writeln!(err, "{}", CliError::Parse(line.to_string()).report_line());
            return 2;
        }
    };
    match dispatch(cli.command, out, color) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.report_line());
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, color: bool) -> Result<(), CliError> {
    match command {
        Command::Compute(a) => {
            let doc = read_json::<PointSetDocument>(&a.input)?;
            let diagram = compute(&doc, &a)?;
            emit(&to_json(&diagram)?, a.output.as_deref(), out)
        }
        Command::Convert(a) => {
            let doc = read_json::<PointSetDocument>(&a.input)?;
            let to = parse_model(&a.to)?;
            let converted = if exact_mode(&doc, a.exact)? {
                convert_document::<Rational>(&doc, to)?
            } else {
                convert_document::<f64>(&doc, to)?
            };
            emit(&to_json(&converted)?, a.output.as_deref(), out)
        }
        Command::Delaunay(a) => {
            let raw = read_raw(&a.input)?;
            let section = match parse_input(&raw)? {
                Input::Diagram(d) => match d.delaunay {
                    Some(s) => s,
                    None => delaunay_of(&d.input, parse_route(&d.route)?)?,
                },
                Input::Points(p) => delaunay_of(&p, Route::Klein)?,
            };
            emit(&to_json(&section)?, a.output.as_deref(), out)
        }
        Command::Render(a) => {
            let doc = read_json::<DiagramDocument>(&a.input)?;
            let opts = RenderOptions {
                model: parse_model(&a.model)?,
                width: a.width,
                samples_per_arc: a.samples_per_arc,
            };
            let svg = render_svg(&doc, &opts)?;
            write_file(&a.output, &svg)
        }
        Command::Check(a) => {
            let raw = read_raw(&a.input)?;
            let report = match parse_input(&raw)? {
                Input::Diagram(d) => check_diagram(&d, &a)?,
                Input::Points(p) => check_points(&p, &a)?,
            };
            let text = format_report(&report, color);
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::CheckFailed(format!(
                    "{} of {} compared samples disagree",
                    report.disagreements, report.compared
                )))
            }
        }
    }
}

enum Input {
    Points(PointSetDocument),
    Diagram(Box<DiagramDocument>),
}

/// A document with a `cells` key is a diagram; anything else a point set.
fn parse_input(raw: &str) -> Result<Input, CliError> {
    let value: serde_json::Value = serde_json::from_str(raw).map_err(|e| CliError::Parse(e.to_string()))?;
    if value.get("cells").is_some() {
        let d = serde_json::from_str::<DiagramDocument>(raw).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(Input::Diagram(Box::new(d)))
    } else {
        Ok(Input::Points(
            serde_json::from_str(raw).map_err(|e| CliError::Parse(e.to_string()))?,
        ))
    }
}

fn read_raw(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json<D: serde::de::DeserializeOwned>(path: &Path) -> Result<D, CliError> {
    let raw = read_raw(path)?;
    serde_json::from_str(&raw).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn to_json<D: serde::Serialize>(doc: &D) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| CliError::Other(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn parse_model(s: &str) -> Result<ModelTag, CliError> {
    s.parse().map_err(|e: hvd_core::models::UnknownModel| CliError::Parse(e.to_string()))
}

fn parse_route(s: &str) -> Result<Route, CliError> {
    s.parse().map_err(CliError::Parse)
}

fn exact_mode(doc: &PointSetDocument, flag: bool) -> Result<bool, CliError> {
    Ok(flag || doc.scalar_kind()? == ScalarKind::ExactRational)
}

fn convert_document<T: DocScalar>(doc: &PointSetDocument, to: ModelTag) -> Result<PointSetDocument, CliError> {
    let points = doc.points::<T>()?;
    if doc.model_tag()? == to {
        let mut same = doc.clone();
        same.scalar = crate::document::scalar_name(T::KIND).into();
        return Ok(same);
    }
    let converted = convert_points(&points, to)?;
    let curvature = match points.first() {
        Some(p) => p.curvature().clone(),
        None => hvd_core::Curvature::new(T::read(&doc.curvature)?)?,
    };
    Ok(PointSetDocument::from_points(&converted, doc.dimension, to, &curvature))
}

fn convert_points<T: DocScalar>(points: &[ModelPoint<T>], to: ModelTag) -> Result<Vec<ModelPoint<T>>, CliError> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            convert(p, to).map_err(|e| {
                CliError::Core(hvd_core::Error::AtPoint {
                    index: i,
                    source: Box::new(e),
                })
            })
        })
        .collect()
}

fn compute(doc: &PointSetDocument, a: &ComputeArgs) -> Result<DiagramDocument, CliError> {
    let mut doc = doc.clone();
    if let Some(k) = &a.curvature {
        doc.curvature = Value::Text(k.clone());
    }
    let options = VoronoiOptions {
        route: parse_route(&a.route)?,
        explicit: !a.implicit,
    };
    let model = a.model.as_deref().map(parse_model).transpose()?;
    if exact_mode(&doc, a.exact)? {
        compute_as::<Rational>(&doc, model, &options, a.verify, a.seed)
    } else {
        compute_as::<f64>(&doc, model, &options, a.verify, a.seed)
    }
}

fn compute_as<T: DocScalar>(
    doc: &PointSetDocument,
    model: Option<ModelTag>,
    options: &VoronoiOptions,
    samples: Option<usize>,
    seed: u64,
) -> Result<DiagramDocument, CliError> {
    let mut points = doc.points::<T>()?;
    if let Some(m) = model {
        points = convert_points(&points, m)?;
    }
    let diagram = voronoi(&points, options)?;
    let dt = if options.explicit { Some(delaunay(&diagram)?) } else { None };
    let degeneracies = detect_degeneracies(&points)?;
    let verification = samples
        .map(|n| verify_with_band(&diagram, n, seed, DEFAULT_BAND))
        .transpose()?;
    Ok(DiagramDocument::from_diagram(
        &diagram,
        dt.as_ref(),
        &degeneracies,
        verification.as_ref(),
    ))
}

fn delaunay_of(doc: &PointSetDocument, route: Route) -> Result<DelaunayDocument, CliError> {
    let options = VoronoiOptions { route, explicit: true };
    if exact_mode(doc, false)? {
        let v = voronoi(&doc.points::<Rational>()?, &options)?;
        Ok(DelaunayDocument::from_complex(&delaunay(&v)?))
    } else {
        let v = voronoi(&doc.points::<f64>()?, &options)?;
        Ok(DelaunayDocument::from_complex(&delaunay(&v)?))
    }
}

fn check_points(doc: &PointSetDocument, a: &CheckArgs) -> Result<VerificationReport, CliError> {
    let options = VoronoiOptions {
        route: Route::Klein,
        explicit: false,
    };
    if exact_mode(doc, false)? {
        let v = voronoi(&doc.points::<Rational>()?, &options)?;
        Ok(verify_with_band(&v, a.samples, a.seed, a.band)?)
    } else {
        let v = voronoi(&doc.points::<f64>()?, &options)?;
        Ok(verify_with_band(&v, a.samples, a.seed, a.band)?)
    }
}

/// Checks the cells stored in the document, without recomputing them.
fn check_diagram(doc: &DiagramDocument, a: &CheckArgs) -> Result<VerificationReport, CliError> {
    let sites = doc.input.points::<f64>()?;
    if doc.cells.len() != sites.len() {
        return Err(CliError::Parse(format!(
            "diagram has {} cells for {} sites",
            doc.cells.len(),
            sites.len()
        )));
    }
    let cells = doc
        .cells
        .iter()
        .map(|c| {
            c.halfspaces
                .iter()
                .map(|h| {
                    Ok(Halfspace::new(
                        h.normal.iter().map(f64::read).collect::<Result<Vec<_>, _>>()?,
                        f64::read(&h.offset)?,
                    ))
                })
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(verify_cells(&sites, &cells, a.samples, a.seed, a.band)?)
}

fn format_report(r: &VerificationReport, color: bool) -> String {
    let verdict = match (r.passed(), color) {
        (true, true) => "\x1b[32mPASS\x1b[0m",
        (true, false) => "PASS",
        (false, true) => "\x1b[31mFAIL\x1b[0m",
        (false, false) => "FAIL",
    };
    let mut s = format!(
        "{verdict}\nsamples: {}\nseed: {}\nband: {:e}\ncompared: {}\nexcluded: {}\nagreement rate: {:.6}\ndisagreements: {}\nmax gap: {:e}\n",
        r.samples, r.seed, r.band, r.compared, r.excluded, r.agreement_rate, r.disagreements, r.max_gap
    );
    if let Some(w) = &r.witness {
        let label = w.diagram_label.map_or("none".to_string(), |l| l.to_string());
        s.push_str(&format!(
            "witness: point {:?} claimed by {} but nearest to {} (gap {:e})\n",
            w.point, label, w.nearest, w.gap
        ));
    }
    s
}
