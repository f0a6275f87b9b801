//! Batch command-line front end.
//!
//! Exit codes: 0 success, 1 validation or domain error, 2 unreadable or
//! malformed input, 3 usage error. Results go to stdout (or `--out`),
//! diagnostics to stderr. Nothing is read from the environment or config
//! files; a run is fully determined by its arguments and input files.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use crate::crossmap::{Crossmap, CrossmapSummary};
use crate::io::{self, IoError, WideCrosswalkDocument};
use crate::transform::{self, TransformError};
use crate::viz::{self, Ordering, RenderStyle, VizError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "crossmap",
    version,
    about = "Validate, apply and draw crossmaps between taxonomies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Names {
    /// Source taxonomy name [default: <file stem>:from]
    #[arg(long)]
    source_name: Option<String>,
    /// Target taxonomy name [default: <file stem>:to]
    #[arg(long)]
    target_name: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an edge list and print a one-line summary
    Validate {
        edges: PathBuf,
        #[command(flatten)]
        names: Names,
    },
    /// Apply a crossmap to a key,value series
    Transform {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Drop data categories the crossmap does not cover instead of failing
        #[arg(long)]
        allow_unmatched: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        names: Names,
    },
    /// Compose two edge lists into one
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw an edge list as SVG or DOT
    Render {
        edges: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Order::SplitsFirst)]
        order: Order,
        #[arg(long)]
        hide_unit_weights: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        names: Names,
    },
    /// Print relation counts and the most synthetic targets
    Summarize {
        edges: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        names: Names,
    },
    /// Turn two columns of a wide crosswalk table into an edge list
    ImportCrosswalk {
        table: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[allow(clippy::enum_variant_names)]
enum Order {
    SplitsFirst,
    TargetIndegree,
    InputOrder,
}

impl From<Order> for Ordering {
    fn from(order: Order) -> Self {
        match order {
            Order::SplitsFirst => Ordering::SplitsFirst,
            Order::TargetIndegree => Ordering::TargetInDegree,
            Order::InputOrder => Ordering::InputOrder,
        }
    }
}

/// A failed command, already classified by exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(err: IoError) -> Self {
        let code = match err {
            IoError::Crossmap { .. } | IoError::DuplicateSourceCode { .. } => EXIT_DOMAIN,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl From<TransformError> for Failure {
    fn from(err: TransformError) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: err.to_string(),
        }
    }
}

impl From<VizError> for Failure {
    fn from(err: VizError) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: err.to_string(),
        }
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", err.render());
                    EXIT_OK
                }
                _ => {
                    let _ = writeln!(stderr, "{}", err.render());
                    let _ = write!(stderr, "{}", Cli::command().render_help());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".to_string())
}

fn load_map(path: &Path, names: &Names) -> Result<Crossmap, Failure> {
    let text = read_text(path)?;
    let stem = stem(path);
    let source = names.source_name.clone().unwrap_or_else(|| format!("{stem}:from"));
    let target = names.target_name.clone().unwrap_or_else(|| format!("{stem}:to"));
    io::read_edge_list(&text, source, target).map_err(|e| prefix(path, e.into()))
}

fn prefix(path: &Path, mut failure: Failure) -> Failure {
    failure.message = format!("{}: {}", path.display(), failure.message);
    failure
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
        }
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(format!("cannot write output: {e}"))),
    }
}

fn summary_line(s: &CrossmapSummary) -> String {
    format!(
        "{} sources, {} targets, {} links, {} split sources, {} aggregate targets, max in-degree {}{}",
        s.n_sources,
        s.n_targets,
        s.n_links,
        s.n_splits,
        s.n_aggregates,
        s.max_in_degree,
        if s.is_crosswalk { " (crosswalk)" } else { "" }
    )
}

fn summary_text(map: &Crossmap, s: &CrossmapSummary) -> String {
    let synthetic: Vec<String> = s
        .most_synthetic_targets
        .iter()
        .map(|(label, d)| format!("{label} ({d})"))
        .collect();
    format!(
        "source taxonomy: {}\ntarget taxonomy: {}\nsources: {}\ntargets: {}\nlinks: {}\nsplit sources: {}\naggregate targets: {}\nmax in-degree: {}\ncrosswalk: {}\nmost synthetic targets: {}\n",
        map.source_taxonomy(),
        map.target_taxonomy(),
        s.n_sources,
        s.n_targets,
        s.n_links,
        s.n_splits,
        s.n_aggregates,
        s.max_in_degree,
        if s.is_crosswalk { "yes" } else { "no" },
        synthetic.join(", ")
    )
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Validate { edges, names } => {
            let map = load_map(&edges, &names)?;
            emit(&format!("valid\n{}\n", summary_line(&map.summarize())), None, stdout)
        }
        Command::Transform {
            map,
            data,
            allow_unmatched,
            out,
            names,
        } => {
            let crossmap = load_map(&map, &names)?;
            let series =
                io::read_series(&read_text(&data)?, crossmap.source_taxonomy()).map_err(|e| prefix(&data, e.into()))?;
            let result = transform::apply_with_report(&crossmap, &series, allow_unmatched)?;
            if !result.unmatched.is_empty() {
                let dropped: Vec<&str> = result.unmatched.iter().map(|l| l.as_str()).collect();
                let _ = writeln!(
                    stderr,
                    "warning: {} unmatched categories dropped: {}",
                    dropped.len(),
                    dropped.join(", ")
                );
            }
            emit(&io::write_series(&result.series), out.as_deref(), stdout)
        }
        Command::Compose { first, second, out } => {
            let middle = format!("{}:to", stem(&first));
            let a = load_map(
                &first,
                &Names {
                    source_name: None,
                    target_name: Some(middle.clone()),
                },
            )?;
            let b = load_map(
                &second,
                &Names {
                    source_name: Some(middle),
                    target_name: None,
                },
            )?;
            let composed = transform::compose(&a, &b)?;
            emit(&io::write_edge_list(&composed), out.as_deref(), stdout)
        }
        Command::Render {
            edges,
            format,
            order,
            hide_unit_weights,
            out,
            names,
        } => {
            let map = load_map(&edges, &names)?;
            let plan = viz::layout_bipartite(&map, order.into());
            let text = match format {
                Format::Svg => {
                    let style = RenderStyle {
                        hide_unit_weights,
                        ..RenderStyle::default()
                    };
                    viz::render_svg(&plan, &map, &style)?
                }
                Format::Dot => viz::render_plan_dot(&plan),
            };
            emit(&text, out.as_deref(), stdout)
        }
        Command::Summarize { edges, json, names } => {
            let map = load_map(&edges, &names)?;
            let summary = map.summarize();
            let text = if json {
                format!("{}\n", io::write_summary_json(&summary))
            } else {
                summary_text(&map, &summary)
            };
            emit(&text, None, stdout)
        }
        Command::ImportCrosswalk { table, from, to, out } => {
            let doc = WideCrosswalkDocument::parse(&read_text(&table)?).map_err(|e| prefix(&table, e.into()))?;
            let map = io::import_crosswalk(&doc, &from, &to).map_err(|e| prefix(&table, e.into()))?;
            emit(&io::write_edge_list(&map), out.as_deref(), stdout)
        }
    }
}
