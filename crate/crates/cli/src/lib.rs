//! Command-line front end: argument parsing, dispatch and exit codes.
//!
//! Exit codes: 0 success, 1 a "false" answer, 2 usage or input error,
//! 3 a size cap was exceeded, 4 a verification failed.

pub mod grid;
pub mod regress;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use interval_garside::garside::emit_presentation;
use interval_garside::homology::{Complex, IntMatrix, DEFAULT_RECURSION_CAP};
use interval_garside::words::{cayley_distances, length, reduced_expression};
use interval_garside::{Error, Garside, GroupElement, GroupParams, Interval, Method, DEFAULT_GROUP_CAP};
use serde::Serialize;

use crate::grid::{parse_points, select};
use crate::verify::{run_suites, Options, Status, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

/// Environment variable overriding the group-size cap.
pub const CAP_ENV: &str = "GARSIDE_CAP";

#[derive(Debug, Parser)]
#[command(name = "igarside", version, about = "Interval Garside structures for B(e,e,n)")]
pub struct Cli {
    /// Largest number of group elements any command may enumerate.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Largest number of rewriting or recursion steps.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    rewrite_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GroupArgs {
    #[arg(long)]
    e: u32,
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Generic,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduced expression of an element given as JSON.
    Reduce {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        element: String,
    },
    /// Length of an element given as JSON.
    Length {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        element: String,
    },
    /// Summary of the interval [1, λ^k], with optional checks and exports.
    Interval {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        verify_lattice: bool,
        /// Write the interval as FORMAT (dot or json) to PATH.
        #[arg(long, num_args = 2, value_names = ["FORMAT", "PATH"])]
        export: Option<Vec<String>>,
    },
    /// Normal form of a signed word such as "t0 s3 t1^-1 D".
    Nf {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        word: String,
    },
    /// Whether two signed words represent the same element (exit 0 or 1).
    Equal {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
    },
    /// The monoid presentation.
    Presentation {
        #[command(flatten)]
        point: PointArgs,
        /// Also write the diagram in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// First or second integral homology.
    Homology {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        /// Write the cells and the differentials d2, d3 as JSON.
        #[arg(long)]
        dump_matrices: Option<PathBuf>,
    },
    /// Verification suites over one point or the default grid.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        e: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random words per point in the normal-form suite.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Length histogram from breadth-first search of the Cayley graph.
    #[command(hide = true)]
    Bfs {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Compute results for a grid and write them as JSON lines.
    Freeze {
        #[arg(long)]
        path: PathBuf,
        /// Points as "e,n,k;e,n,k"; the default grid when absent.
        #[arg(long)]
        points: Option<String>,
    },
    /// Recompute the records of a frozen file and report drift (exit 4).
    Regress {
        #[arg(long)]
        path: PathBuf,
    },
}

/// An error together with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::TheoremViolation(_) | Error::Lattice(_) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        };
        Failure { code, message: err.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn io_failure(path: &std::path::Path, err: std::io::Error) -> Failure {
    usage(format!("{}: {err}", path.display()))
}

struct Context<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    group_cap: usize,
    rewrite_cap: usize,
}

impl Context<'_> {
    fn emit(&mut self, text: impl std::fmt::Display) -> Result<(), Failure> {
        writeln!(self.out, "{text}").map_err(|e| usage(e.to_string()))
    }

    fn log(&mut self, text: impl std::fmt::Display) {
        let _ = writeln!(self.err, "{text}");
    }

    fn emit_json<T: Serialize>(&mut self, value: &T) -> Result<(), Failure> {
        self.emit(serde_json::to_string(value).expect("output serializes"))
    }

    fn garside(&self, point: &PointArgs) -> Result<Garside, Failure> {
        let params = GroupParams::new(point.group.e, point.group.n)?;
        params.check_k(point.k)?;
        let interval = Interval::build(params, point.k, self.group_cap)?;
        Ok(Garside::build(interval, false)?)
    }
}

fn group_cap(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("{CAP_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_GROUP_CAP),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = group_cap(cli.cap).and_then(|group_cap| {
        let mut ctx = Context { out, err, group_cap, rewrite_cap: cli.rewrite_cap };
        dispatch(cli.command, &mut ctx)
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn parse_element(group: &GroupArgs, json: &str) -> Result<GroupElement, Failure> {
    let params = GroupParams::new(group.e, group.n)?;
    let w: GroupElement = json.parse()?;
    if w.params() != params {
        return Err(Error::ParamMismatch { e1: group.e, n1: group.n, e2: w.e(), n2: w.n() }.into());
    }
    Ok(w)
}

#[derive(Serialize)]
struct IntervalSummary {
    e: u32,
    n: usize,
    k: u32,
    size: usize,
    height: usize,
    atoms: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lattice: Option<interval_garside::LatticeReport>,
}

#[derive(Serialize)]
struct MatrixDump {
    method: String,
    cells: [Vec<interval_garside::homology::Cell>; 4],
    d2: Vec<Vec<i64>>,
    d3: Vec<Vec<i64>>,
}

fn dispatch(command: Command, ctx: &mut Context) -> Result<i32, Failure> {
    match command {
        Command::Reduce { group, element } => {
            let w = parse_element(&group, &element)?;
            ctx.emit(reduced_expression(&w))?;
        }
        Command::Length { group, element } => {
            let w = parse_element(&group, &element)?;
            ctx.emit(length(&w))?;
        }
        Command::Interval { point, verify_lattice, export } => {
            let params = GroupParams::new(point.group.e, point.group.n)?;
            params.check_k(point.k)?;
            let export = match export.as_deref() {
                None => None,
                Some([format, path]) => {
                    let format = ExportFormat::from_str(format, true)
                        .map_err(|_| usage(format!("unknown export format {format:?}; use dot or json")))?;
                    Some((format, PathBuf::from(path)))
                }
                Some(_) => return Err(usage("--export takes FORMAT and PATH")),
            };
            let interval = Interval::build(params, point.k, ctx.group_cap)?;
            let lattice = verify_lattice.then(|| interval.verify_lattice());
            let ok = lattice.as_ref().is_none_or(|r| r.is_lattice());
            if let Some((format, path)) = export {
                let text = match format {
                    ExportFormat::Dot => interval.to_dot(),
                    ExportFormat::Json => {
                        serde_json::to_string(&interval.to_json()).expect("interval serializes")
                    }
                };
                fs::write(&path, text).map_err(|e| io_failure(&path, e))?;
            }
            ctx.emit_json(&IntervalSummary {
                e: params.e(),
                n: params.n(),
                k: point.k,
                size: interval.len(),
                height: interval.length(interval.top()),
                atoms: interval.atoms().iter().map(|(x, _)| x.to_string()).collect(),
                lattice,
            })?;
            if !ok {
                return Ok(EXIT_VIOLATION);
            }
        }
        Command::Nf { point, word } => {
            let g = ctx.garside(&point)?;
            let nf = g.normal_form_str(&word)?;
            ctx.emit_json(&g.to_json(&nf))?;
        }
        Command::Equal { point, w1, w2 } => {
            let g = ctx.garside(&point)?;
            let same = g.words_equal(&w1, &w2)?;
            ctx.emit(same)?;
            return Ok(if same { EXIT_OK } else { EXIT_FALSE });
        }
        Command::Presentation { point, dot } => {
            let params = GroupParams::new(point.group.e, point.group.n)?;
            let presentation = emit_presentation(params, point.k)?;
            if let Some(path) = dot {
                fs::write(&path, presentation.to_dot()).map_err(|e| io_failure(&path, e))?;
            }
            ctx.emit(presentation.to_text().trim_end())?;
        }
        Command::Homology { point, order, method, dump_matrices } => {
            if point.group.n < 3 && order == 2 {
                ctx.log("note: second homology for n = 2 has no reference values");
            }
            let g = ctx.garside(&point)?;
            let cap = ctx.rewrite_cap.max(DEFAULT_RECURSION_CAP);
            let (primary, secondary) = match method {
                MethodArg::Closed => (Complex::build(&g, Method::Closed, cap)?, None),
                MethodArg::Generic => (Complex::build(&g, Method::Generic, cap)?, None),
                MethodArg::Both => (
                    Complex::build(&g, Method::Closed, cap)?,
                    Some(Complex::build(&g, Method::Generic, cap)?),
                ),
            };
            if let Some(path) = dump_matrices {
                let dump = MatrixDump {
                    method: if method == MethodArg::Generic { "generic" } else { "closed" }.into(),
                    cells: [0, 1, 2, 3].map(|r| primary.basis.cells(r).to_vec()),
                    d2: primary.d[1].to_i64_rows(),
                    d3: primary.d[2].to_i64_rows(),
                };
                let text = serde_json::to_string(&dump).expect("matrices serialize");
                fs::write(&path, text).map_err(|e| io_failure(&path, e))?;
            }
            if let Some(generic) = &secondary {
                let mut differs = false;
                for r in [2, 3] {
                    differs |= report_column_differences(ctx, &primary, generic, r);
                }
                if differs {
                    return Ok(EXIT_VIOLATION);
                }
            }
            ctx.emit_json(&primary.homology(order as usize)?)?;
        }
        Command::Verify { suite, e, n, k, seed, samples } => {
            let points = select(e, n, k).map_err(usage)?;
            let opts = Options { group_cap: ctx.group_cap, rewrite_cap: ctx.rewrite_cap, seed, samples };
            let outcomes = run_suites(suite, &points, opts);
            let mut code = EXIT_OK;
            for o in &outcomes {
                ctx.emit(o)?;
                match o.status {
                    Status::Fail => code = EXIT_VIOLATION,
                    Status::Cap if code == EXIT_OK => code = EXIT_CAP,
                    _ => {}
                }
            }
            let count = |s| outcomes.iter().filter(|o| o.status == s).count();
            ctx.log(format!(
                "{} passed, {} failed, {} skipped, {} over cap",
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Skip),
                count(Status::Cap)
            ));
            return Ok(code);
        }
        Command::Bfs { group } => {
            let params = GroupParams::new(group.e, group.n)?;
            let dist = cayley_distances(params, ctx.group_cap)?;
            let top = dist.values().copied().max().unwrap_or(0);
            let mut histogram = vec![0usize; top + 1];
            for &d in dist.values() {
                histogram[d] += 1;
            }
            ctx.emit_json(&serde_json::json!({
                "e": group.e,
                "n": group.n,
                "order": dist.len(),
                "max_length": top,
                "histogram": histogram,
            }))?;
        }
        Command::Freeze { path, points } => {
            let points = match points {
                Some(spec) => parse_points(&spec).map_err(usage)?,
                None => grid::default_grid(),
            };
            let records = regress::freeze(&points, ctx.group_cap)?;
            for p in &points {
                let key = format!("h2 {p}");
                if let (Some(record), Some(formula)) = (
                    records.iter().find(|r| r.key == key),
                    interval_garside::h2_formula(p.e, p.n, p.k),
                ) {
                    let formula = serde_json::to_value(&formula).expect("serializes");
                    if record.value != formula {
                        ctx.log(format!(
                            "note: {key} is {} but the closed formula gives {formula}",
                            record.value
                        ));
                    }
                }
            }
            fs::write(&path, regress::to_lines(&records)).map_err(|e| io_failure(&path, e))?;
            ctx.log(format!("froze {} records to {}", records.len(), path.display()));
        }
        Command::Regress { path } => {
            let text = fs::read_to_string(&path).map_err(|e| io_failure(&path, e))?;
            let records = regress::parse_lines(&text).map_err(usage)?;
            for r in records.iter().filter(|r| r.version != regress::VERSION) {
                ctx.log(format!("note: {} was frozen by version {}", r.key, r.version));
            }
            let drifts = regress::regress(&records, ctx.group_cap)?;
            for d in &drifts {
                ctx.emit(format!("DRIFT {}: frozen {} now {}", d.key, d.frozen, d.now))?;
            }
            ctx.log(format!("{} records checked, {} drifted", records.len(), drifts.len()));
            if !drifts.is_empty() {
                return Ok(EXIT_VIOLATION);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Prints every column where the two complexes disagree; returns whether any did.
fn report_column_differences(ctx: &mut Context, closed: &Complex, generic: &Complex, r: usize) -> bool {
    let (a, b): (&IntMatrix, &IntMatrix) = (&closed.d[r - 1], &generic.d[r - 1]);
    let mut differs = false;
    for (c, cell) in closed.basis.cells(r).iter().enumerate() {
        let column = |m: &IntMatrix| -> Vec<String> { (0..m.rows()).map(|i| m[(i, c)].to_string()).collect() };
        let (x, y) = (column(a), column(b));
        if x != y {
            differs = true;
            ctx.log(format!("d{r} column {cell}: closed [{}] generic [{}]", x.join(", "), y.join(", ")));
        }
    }
    differs
}
