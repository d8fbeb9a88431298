//! `projflip` subcommands. Every command prints a JSON report (or SVG/DOT
//! text when asked for) and returns an exit code: 0 ok, 1 a verification
//! failed, 2 bad input.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use projflip_core::arrangement::{Arrangement, ArrangementError, Coloring};
use projflip_core::checks::{run_suite, SuiteManifest, DEFAULT_SUITE};
use projflip_core::coherence::{Configuration, DotId};
use projflip_core::flip::{apply_flip, Direction};
use projflip_core::io::{format_rational, ConfigurationFile, FlipWordFile, LineSetFile};
use projflip_core::motion::{event_word, MotionScript};
use projflip_core::poly::RealRoot;
use projflip_core::relations::{apply_word, configurations_equal};
use projflip_core::render::{render_dual_dot, render_svg, Chart};
use projflip_core::seed::seed_configuration;

/// Overrides every RNG seed (suite base seed, configuration seeding).
pub const SEED_ENV: &str = "PROJFLIP_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "projflip", version, about = "Line arrangements, coherent configurations and Desargues flips")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the arrangement of a line set.
    Arrange {
        #[arg(long)]
        lines: PathBuf,
    },
    /// Checkerboard-color the regions.
    Color {
        #[arg(long)]
        lines: PathBuf,
        /// Exchange black and white.
        #[arg(long)]
        swap: bool,
    },
    /// Dual quadrangulation as JSON or DOT.
    Dual {
        #[arg(long)]
        lines: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// One Desargues flip at a dot.
    Flip {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        dot: DotId,
        #[arg(long, value_enum)]
        direction: Option<Dir>,
    },
    /// Apply a flip word.
    Word {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        word: PathBuf,
    },
    /// Event word and snapshots of a motion script.
    Simulate {
        #[arg(long)]
        motion: PathBuf,
    },
    /// Run a verification suite (the shipped default when no file is given).
    Verify {
        #[arg(long)]
        suite: Option<PathBuf>,
    },
    /// Draw an arrangement as SVG, or its dual as DOT.
    Render {
        #[arg(long)]
        lines: PathBuf,
        #[arg(long, value_enum, default_value_t = ChartArg::Auto)]
        chart: ChartArg,
        #[arg(long, value_enum, default_value_t = RenderFormat::Svg)]
        format: RenderFormat,
        #[arg(long)]
        swap: bool,
    },
}

#[derive(clap::Args, Debug)]
struct Source {
    /// Configuration file.
    #[arg(long, conflicts_with = "lines", required_unless_present = "lines")]
    config: Option<PathBuf>,
    /// Line set; a coherent configuration is seeded on its dual.
    #[arg(long)]
    lines: Option<PathBuf>,
    /// RNG seed for seeding from lines.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RenderFormat {
    Svg,
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChartArg {
    Auto,
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Dir {
    PointToLine,
    LineToPoint,
}

struct Failure {
    code: i32,
    report: Value,
}

fn input_error(msg: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INPUT,
        report: json!({ "ok": false, "error": msg.to_string() }),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

fn seed_override() -> Result<Option<u64>, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| input_error(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn load_lines(path: &Path) -> Result<LineSetFile, Failure> {
    LineSetFile::parse(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn arrangement_error(e: ArrangementError) -> Failure {
    let mut report = json!({ "ok": false, "error": e.to_string() });
    if let ArrangementError::NotGeneric(g) = &e {
        report["coincident"] = json!(g.coincident);
        report["concurrent"] = json!(g.concurrent);
    }
    Failure { code: EXIT_INPUT, report }
}

fn build(path: &Path) -> Result<Arrangement, Failure> {
    let file = load_lines(path)?;
    let oriented = file.oriented().map_err(input_error)?;
    if oriented.len() < 2 {
        return Err(input_error(format!("{}: at least 2 lines are required", path.display())));
    }
    Arrangement::build_oriented(oriented).map_err(arrangement_error)
}

fn coloring(arr: &Arrangement, swap: bool) -> Result<Coloring, Failure> {
    let col = arr.checkerboard_color().map_err(arrangement_error)?;
    Ok(if swap { col.swapped() } else { col })
}

fn signs(s: &[i8]) -> String {
    s.iter().map(|&x| if x > 0 { '+' } else if x < 0 { '-' } else { '0' }).collect()
}

fn load_source(src: &Source) -> Result<Configuration, Failure> {
    if let Some(path) = &src.config {
        let f = ConfigurationFile::parse(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        return f.to_configuration().map_err(|e| input_error(format!("{}: {e}", path.display())));
    }
    let path = src.lines.as_ref().expect("clap requires one source");
    let arr = build(path)?;
    let col = coloring(&arr, false)?;
    let seed = seed_override()?.unwrap_or(src.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    seed_configuration(&arr.dual_quadrangulation(&col), &mut rng).map_err(input_error)
}

fn config_json(c: &Configuration) -> Value {
    serde_json::to_value(ConfigurationFile::from_configuration(c)).expect("json")
}

fn root_json(r: &RealRoot) -> Value {
    match r {
        RealRoot::Exact(t) => json!({ "exact": format_rational(t), "approx": r.approx() }),
        RealRoot::Isolated { poly, lo, hi } => json!({
            "poly": poly.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
            "lo": format_rational(lo),
            "hi": format_rational(hi),
            "approx": r.approx(),
        }),
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::PointToLine => "point-to-line",
        Direction::LineToPoint => "line-to-point",
    }
}

fn execute(cmd: Command) -> Result<(i32, String), Failure> {
    match cmd {
        Command::Arrange { lines } => {
            let arr = build(&lines)?;
            let regions: Vec<Value> = arr
                .regions()
                .iter()
                .map(|r| json!({ "signs": signs(&r.signs), "sides": r.boundary.len() }))
                .collect();
            let vertices: Vec<Value> = arr
                .vertices()
                .iter()
                .map(|v| json!({ "lines": [v.lines.0, v.lines.1], "point": v.point.to_string() }))
                .collect();
            Ok((
                EXIT_OK,
                pretty(&json!({
                    "ok": true,
                    "census": arr.census(),
                    "vertices": vertices,
                    "regions": regions,
                    "triangles": arr.triangular_regions(),
                })),
            ))
        }
        Command::Color { lines, swap } => {
            let arr = build(&lines)?;
            let col = coloring(&arr, swap)?;
            let regions: Vec<Value> = arr
                .regions()
                .iter()
                .enumerate()
                .map(|(k, r)| json!({ "region": k, "signs": signs(&r.signs), "color": col.color(k) }))
                .collect();
            Ok((EXIT_OK, pretty(&json!({ "ok": true, "regions": regions }))))
        }
        Command::Dual { lines, format } => {
            let arr = build(&lines)?;
            let dual = arr.dual_quadrangulation(&coloring(&arr, false)?);
            Ok((
                EXIT_OK,
                match format {
                    Format::Dot => render_dual_dot(&dual),
                    Format::Json => pretty(&json!({
                        "ok": true,
                        "dots": dual.dots.len(),
                        "edges": dual.edges.len(),
                        "faces": dual.faces.len(),
                        "graph": dual,
                    })),
                },
            ))
        }
        Command::Flip { source, dot, direction } => {
            let c = load_source(&source)?;
            let dir = match direction {
                Some(Dir::PointToLine) => Direction::PointToLine,
                Some(Dir::LineToPoint) => Direction::LineToPoint,
                None => Direction::for_center(c.dots.get(&dot).map(|d| d.color).ok_or_else(|| input_error(format!("--dot {dot}: no such dot")))?),
            };
            match apply_flip(&c, dot, dir) {
                Ok(out) => Ok((
                    EXIT_OK,
                    pretty(&json!({
                        "ok": true,
                        "dot": dot,
                        "direction": direction_name(dir),
                        "new_dot": c.next_id(),
                        "configuration": config_json(&out),
                    })),
                )),
                Err(e) => Err(input_error(format!("--dot {dot}: {e}"))),
            }
        }
        Command::Word { source, word } => {
            let c = load_source(&source)?;
            let w = FlipWordFile::parse(&read(&word)?).map_err(|e| input_error(format!("{}: {e}", word.display())))?.word;
            match apply_word(&c, &w) {
                Ok(end) => Ok((
                    EXIT_OK,
                    pretty(&json!({
                        "ok": true,
                        "events": w.events.len(),
                        "returns_to_start": configurations_equal(&c, &end),
                        "configuration": config_json(&end),
                    })),
                )),
                Err(e) => Err(input_error(format!("{}: {e}", word.display()))),
            }
        }
        Command::Simulate { motion } => {
            let ms = MotionScript::parse(&read(&motion)?).map_err(|e| input_error(format!("{}: {e}", motion.display())))?;
            let (tl, word) = event_word(&ms).map_err(|e| input_error(format!("{}: {e}", motion.display())))?;
            let events: Vec<Value> = tl
                .events
                .iter()
                .map(|e| json!({ "time": root_json(&e.time), "triple": e.triple, "direction": direction_name(e.direction) }))
                .collect();
            let snapshots: Vec<Value> = tl
                .snapshot_times
                .iter()
                .zip(&tl.snapshots)
                .map(|(t, a)| json!({ "time": format_rational(t), "census": a.census(), "triangles": a.triangular_regions().len() }))
                .collect();
            Ok((
                EXIT_OK,
                pretty(&json!({
                    "ok": true,
                    "event_count": events.len(),
                    "events": events,
                    "snapshots": snapshots,
                    "word": FlipWordFile::new(word),
                })),
            ))
        }
        Command::Verify { suite } => {
            let text = match &suite {
                Some(p) => read(p)?,
                None => DEFAULT_SUITE.to_string(),
            };
            let m = SuiteManifest::parse(&text).map_err(input_error)?;
            let report = run_suite(&m, seed_override()?).map_err(input_error)?;
            let code = if report.passed { EXIT_OK } else { EXIT_FAILED };
            Ok((code, pretty(&serde_json::to_value(&report).expect("json"))))
        }
        Command::Render { lines, chart, format, swap } => {
            let arr = build(&lines)?;
            let col = coloring(&arr, swap)?;
            match format {
                RenderFormat::Dot => Ok((EXIT_OK, render_dual_dot(&arr.dual_quadrangulation(&col)))),
                RenderFormat::Svg => {
                    let chart = match chart {
                        ChartArg::Auto => Chart::Auto,
                        ChartArg::X => Chart::X,
                        ChartArg::Y => Chart::Y,
                        ChartArg::Z => Chart::Z,
                    };
                    render_svg(&arr, &col, chart).map(|s| (EXIT_OK, s)).map_err(|e| input_error(format!("--chart: {e}")))
                }
            }
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.to_string()),
                _ => (EXIT_INPUT, pretty(&json!({ "ok": false, "error": e.to_string() }))),
            };
        }
    };
    match execute(cli.command) {
        Ok(r) => r,
        Err(f) => (f.code, pretty(&f.report)),
    }
}
