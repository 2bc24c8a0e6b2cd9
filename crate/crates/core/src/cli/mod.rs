//! Command-line front end: `list`, `sample`, `figure`, `verify`, `trace`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::calculus::{ResidualReport, StencilConfig};
use crate::export::{write_csv, write_vtk_polydata, write_vtk_structured_grid};
use crate::fields::{catalog, recipe, Kind};
use crate::flow::trace_field_line;
use crate::sampling::CoordBox;
use crate::{Error, Vec3};

pub mod figure;
pub mod verify;

pub use figure::{figure_mesh, ClippedBand, FigureId, FigureMesh};
pub use verify::{case_ids, select_cases, verify_case, verify_cases, VerifyConfig};

const DEFAULT_TIMESTAMP: &str = "1970-01-01T00:00:00Z";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Vtk,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "beltrami",
    version,
    about = "Construct and verify Beltrami fields, MHD equilibria and Euler flows"
)]
pub struct Cli {
    /// Finite-difference step.
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub h: f64,
    /// Pass threshold for residual checks.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Seed of the low-discrepancy sampler.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// ISO-8601 timestamp recorded in reports; defaults to SOURCE_DATE_EPOCH or the Unix epoch.
    #[arg(long, global = true)]
    pub timestamp: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the recipe catalog.
    List {
        /// Restrict to one family: beltrami, generalized, mhd, euler.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Sample a recipe on a Cartesian grid.
    Sample {
        #[arg(long)]
        case: String,
        /// Nodes per axis: `N` or `NX,NY,NZ`.
        #[arg(long, default_value = "16")]
        grid: String,
        /// `x0,x1,y0,y1,z0,z1`; defaults to the recipe's grid box.
        #[arg(long, allow_hyphen_values = true)]
        bounds: Option<String>,
    },
    /// Emit the surface mesh and field samples of a figure.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        /// Vertices per parameter direction.
        #[arg(long, default_value_t = 40)]
        resolution: usize,
    },
    /// Run the residual and invariant checks and write a JSON report.
    Verify {
        /// Case id, comma-separated ids, or `all`.
        #[arg(long, default_value = "all")]
        case: String,
        /// Repeat every stencil check at h/2 and report the observed order.
        #[arg(long)]
        richardson: bool,
        /// Sample points per recipe.
        #[arg(long, default_value_t = verify::SAMPLE_POINTS)]
        points: usize,
    },
    /// Trace a field line and tabulate invariants along it.
    Trace {
        #[arg(long)]
        case: String,
        /// Start point `x,y,z`; defaults to a point inside the recipe domain.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
        #[arg(long, default_value_t = 1e-2)]
        ds: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Comma-separated invariant names; all declared invariants by default.
        #[arg(long)]
        invariants: Option<String>,
        /// Integrate `w` itself instead of `w/|w|`.
        #[arg(long)]
        raw: bool,
    },
}

/// Provenance embedded in every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command_line: String,
    pub case_ids: Vec<String>,
    pub cfg: StencilConfig,
    pub tol: f64,
    pub seed: u64,
    pub tool_version: &'static str,
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub manifest: RunManifest,
    pub results: Vec<ResidualReport>,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.results.iter().all(ResidualReport::ok)
    }
}

/// Timestamp from the flag, else `SOURCE_DATE_EPOCH`, else the Unix epoch.
pub fn resolve_timestamp(flag: Option<&str>) -> Result<String, Error> {
    if let Some(t) = flag {
        chrono::DateTime::parse_from_rfc3339(t).map_err(|e| Error::Usage(format!("invalid --timestamp `{t}`: {e}")))?;
        return Ok(t.to_string());
    }
    match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(s) => {
            let secs: i64 = s
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("SOURCE_DATE_EPOCH `{s}` is not an integer")))?;
            let t = chrono::DateTime::from_timestamp(secs, 0)
                .ok_or_else(|| Error::Usage(format!("SOURCE_DATE_EPOCH `{s}` is out of range")))?;
            Ok(t.to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
        }
        Err(_) => Ok(DEFAULT_TIMESTAMP.to_string()),
    }
}

/// Parses and runs a command line; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let command_line = std::iter::once("beltrami".to_string())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    match execute(&cli, &command_line) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Runs a parsed command. `Ok(false)` means some check failed.
pub fn execute(cli: &Cli, command_line: &str) -> Result<bool, Error> {
    if !(cli.h > 0.0 && cli.h.is_finite()) {
        return Err(Error::Usage(format!("--h must be positive, got {}", cli.h)));
    }
    match &cli.command {
        Command::List { kind } => cmd_list(cli, kind.as_deref()).map(|_| true),
        Command::Sample { case, grid, bounds } => cmd_sample(cli, case, grid, bounds.as_deref()).map(|_| true),
        Command::Figure { id, resolution } => cmd_figure(cli, *id, *resolution).map(|_| true),
        Command::Verify {
            case,
            richardson,
            points,
        } => cmd_verify(cli, command_line, case, *richardson, *points),
        Command::Trace {
            case,
            start,
            ds,
            steps,
            invariants,
            raw,
        } => cmd_trace(cli, case, start.as_deref(), *ds, *steps, invariants.as_deref(), *raw).map(|_| true),
    }
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("invalid number `{t}` in {what}")))
        })
        .collect()
}

fn cmd_list(cli: &Cli, kind: Option<&str>) -> Result<(), Error> {
    let filter = match kind {
        Some(k) => Some(Kind::by_name(k).ok_or_else(|| Error::Usage(format!("unknown kind `{k}`")))?),
        None => None,
    };
    let recipes: Vec<_> = catalog()
        .into_iter()
        .filter(|r| filter.is_none_or(|k| r.kind() == k))
        .collect();
    let mut out = open_output(&cli.out)?;
    match cli.format {
        Some(Format::Json) => {
            #[derive(Serialize)]
            struct Row<'a> {
                id: &'a str,
                kind: &'static str,
                chart: &'static str,
                summary: &'a str,
            }
            let rows: Vec<Row> = recipes
                .iter()
                .map(|r| Row {
                    id: &r.id,
                    kind: r.kind().short_name(),
                    chart: r.chart_name(),
                    summary: &r.summary,
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
        Some(f) => return Err(Error::Usage(format!("list does not support {f:?} output"))),
        None => {
            let width = recipes.iter().map(|r| r.id.len()).max().unwrap_or(0);
            for r in &recipes {
                writeln!(
                    out,
                    "{:<width$}  {:<11}  {:<11}  {}",
                    r.id,
                    r.kind().short_name(),
                    r.chart_name(),
                    r.summary
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn parse_grid(s: &str) -> Result<[usize; 3], Error> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Usage(format!("invalid grid `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    let dims = match parts.as_slice() {
        [n] => [*n; 3],
        [a, b, c] => [*a, *b, *c],
        _ => return Err(Error::Usage(format!("grid must be N or NX,NY,NZ, got `{s}`"))),
    };
    if dims.contains(&0) {
        return Err(Error::Usage("grid dimensions must be positive".into()));
    }
    Ok(dims)
}

fn parse_bounds(s: &str) -> Result<CoordBox, Error> {
    let v = parse_floats(s, "--bounds")?;
    if v.len() != 6 {
        return Err(Error::Usage(format!("bounds need six numbers, got `{s}`")));
    }
    Ok(CoordBox::new([v[0], v[2], v[4]], [v[1], v[3], v[5]]))
}

fn axis(lo: f64, hi: f64, k: usize, n: usize) -> f64 {
    if n == 1 {
        0.5 * (lo + hi)
    } else {
        lo + (hi - lo) * k as f64 / (n - 1) as f64
    }
}

/// Grid nodes (x fastest) and field values; fails if any node is outside the
/// recipe's domain.
pub fn sample_grid(case: &str, dims: [usize; 3], bounds: Option<CoordBox>) -> Result<(Vec<Vec3>, Vec<Vec3>), Error> {
    let r = recipe(case).ok_or_else(|| Error::UnknownCase(case.to_string()))?;
    let b = bounds.unwrap_or(r.grid_bounds);
    let field = r.build()?;
    let outside = || {
        Error::BoundsOutsideDomain(format!(
            "[{}, {}] x [{}, {}] x [{}, {}]",
            b.lo[0], b.hi[0], b.lo[1], b.hi[1], b.lo[2], b.hi[2]
        ))
    };
    let mut points = Vec::with_capacity(dims.iter().product());
    let mut values = Vec::with_capacity(points.capacity());
    for k in 0..dims[2] {
        for j in 0..dims[1] {
            for i in 0..dims[0] {
                let p = Vec3::new(
                    axis(b.lo[0], b.hi[0], i, dims[0]),
                    axis(b.lo[1], b.hi[1], j, dims[1]),
                    axis(b.lo[2], b.hi[2], k, dims[2]),
                );
                if !r.domain.contains(p) {
                    return Err(outside());
                }
                values.push(field.try_eval(p).ok_or_else(outside)?);
                points.push(p);
            }
        }
    }
    Ok((points, values))
}

fn point_rows(points: &[Vec3], vectors: &[Vec3]) -> Vec<Vec<f64>> {
    points
        .iter()
        .zip(vectors)
        .map(|(p, w)| vec![p.x, p.y, p.z, w.x, w.y, w.z])
        .collect()
}

const POINT_HEADER: [&str; 6] = ["x", "y", "z", "wx", "wy", "wz"];

fn cmd_sample(cli: &Cli, case: &str, grid: &str, bounds: Option<&str>) -> Result<(), Error> {
    let dims = parse_grid(grid)?;
    let bounds = bounds.map(parse_bounds).transpose()?;
    let (points, values) = sample_grid(case, dims, bounds)?;
    let mut out = open_output(&cli.out)?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv(&mut out, &POINT_HEADER, &point_rows(&points, &values))?,
        Format::Vtk => write_vtk_structured_grid(&mut out, case, dims, &points, &values)?,
        Format::Json => return Err(Error::Usage("sample writes csv or vtk".into())),
    }
    out.flush()?;
    Ok(())
}

fn cmd_figure(cli: &Cli, id: FigureId, resolution: usize) -> Result<(), Error> {
    let mesh = figure_mesh(id, resolution)?;
    let mut out = open_output(&cli.out)?;
    match cli.format.unwrap_or(Format::Vtk) {
        Format::Csv => write_csv(&mut out, &POINT_HEADER, &point_rows(&mesh.points, &mesh.vectors))?,
        Format::Vtk => write_vtk_polydata(&mut out, id.name(), &mesh.points, &mesh.quads, &mesh.vectors)?,
        Format::Json => {
            #[derive(Serialize)]
            struct Summary<'a> {
                figure: FigureId,
                case_id: &'static str,
                n_points: usize,
                n_quads: usize,
                clipped: &'a [ClippedBand],
            }
            let s = Summary {
                figure: id,
                case_id: id.case_id(),
                n_points: mesh.points.len(),
                n_quads: mesh.quads.len(),
                clipped: &mesh.clipped,
            };
            serde_json::to_writer_pretty(&mut out, &s)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    for c in &mesh.clipped {
        eprintln!(
            "clipped {}: {} = {:.6}, {} in [{:.6}, {:.6}]",
            id.name(),
            c.row_parameter,
            c.row_value,
            c.column_parameter,
            c.from,
            c.to
        );
    }
    Ok(())
}

/// Runs the selected cases and assembles the report.
pub fn build_verify_report(
    command_line: &str,
    selector: &str,
    vc: &VerifyConfig,
    timestamp: String,
) -> Result<VerifyReport, Error> {
    let ids = select_cases(selector)?;
    let results = verify_cases(&ids, vc)?;
    Ok(VerifyReport {
        manifest: RunManifest {
            command_line: command_line.to_string(),
            case_ids: ids,
            cfg: vc.cfg,
            tol: vc.tol,
            seed: vc.seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp,
        },
        results,
    })
}

fn cmd_verify(cli: &Cli, command_line: &str, selector: &str, richardson: bool, points: usize) -> Result<bool, Error> {
    if let Some(f @ (Format::Csv | Format::Vtk)) = cli.format {
        return Err(Error::Usage(format!("verify writes json, not {f:?}")));
    }
    if points == 0 {
        return Err(Error::Usage("--points must be positive".into()));
    }
    let vc = VerifyConfig {
        cfg: StencilConfig { h: cli.h, richardson },
        tol: cli.tol,
        seed: cli.seed,
        n_points: points,
    };
    let report = build_verify_report(
        command_line,
        selector,
        &vc,
        resolve_timestamp(cli.timestamp.as_deref())?,
    )?;
    let mut out = open_output(&cli.out)?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    let failed: Vec<&ResidualReport> = report.results.iter().filter(|r| !r.ok()).collect();
    for r in &failed {
        eprintln!(
            "FAIL {} {}: max residual {:e}{}",
            r.case_id,
            r.check_name,
            r.max_residual,
            r.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
        );
    }
    eprintln!("{} checks, {} failed", report.results.len(), failed.len());
    Ok(failed.is_empty())
}

fn cmd_trace(
    cli: &Cli,
    case: &str,
    start: Option<&str>,
    ds: f64,
    steps: usize,
    invariants: Option<&str>,
    raw: bool,
) -> Result<(), Error> {
    let r = recipe(case).ok_or_else(|| Error::UnknownCase(case.to_string()))?;
    let field = r.build()?;
    let seed = match start {
        Some(s) => match parse_floats(s, "--start")?.as_slice() {
            [x, y, z] => Vec3::new(*x, *y, *z),
            _ => return Err(Error::Usage(format!("start must be x,y,z, got `{s}`"))),
        },
        None => verify::trace_seed(&r.domain),
    };
    let selected = match invariants {
        None => field.invariants().to_vec(),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| {
                field.invariant(name).cloned().ok_or_else(|| {
                    let known: Vec<&str> = field.invariants().iter().map(|i| i.name()).collect();
                    Error::Usage(format!(
                        "{case} has no invariant `{name}` (known: {})",
                        known.join(", ")
                    ))
                })
            })
            .collect::<Result<_, _>>()?,
    };
    let mut trace = trace_field_line(&field, seed, ds, steps, !raw, None).map_err(|e| Error::Usage(e.to_string()))?;
    trace.case_id = case.to_string();
    let mut out = open_output(&cli.out)?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => trace.write_csv(&mut out, &selected)?,
        f => return Err(Error::Usage(format!("trace writes csv, not {f:?}"))),
    }
    out.flush()?;
    eprintln!("{} steps, termination {:?}", trace.steps_taken(), trace.termination);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_bounds_parsing() {
        assert_eq!(parse_grid("16").unwrap(), [16; 3]);
        assert_eq!(parse_grid("2,3,4").unwrap(), [2, 3, 4]);
        assert!(parse_grid("2,3").is_err());
        let b = parse_bounds("-1,1,-2,2,0,3").unwrap();
        assert_eq!(b.lo, [-1.0, -2.0, 0.0]);
        assert_eq!(b.hi, [1.0, 2.0, 3.0]);
    }

    #[test]
    fn explicit_timestamp_is_kept() {
        let t = resolve_timestamp(Some("2024-05-01T12:00:00Z")).unwrap();
        assert_eq!(t, "2024-05-01T12:00:00Z");
        assert!(resolve_timestamp(Some("yesterday")).is_err());
    }

    #[test]
    fn axis_crossing_bounds_rejected() {
        let b = CoordBox::new([-0.5, -0.5, 0.5], [0.5, 0.5, 1.0]);
        let err = sample_grid("spherical-fig1", [4, 4, 4], Some(b)).unwrap_err();
        assert!(matches!(err, Error::BoundsOutsideDomain(_)));
    }

    #[test]
    fn sample_row_count() {
        let b = CoordBox::new([-1.0; 3], [1.0; 3]);
        let (p, w) = sample_grid("cartesian-linear", [16; 3], Some(b)).unwrap();
        assert_eq!(p.len(), 4096);
        assert_eq!(w.len(), 4096);
    }

    fn run_to_string(args: &[&str]) -> (i32, String) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out");
        let mut full = vec!["beltrami", "--out", path.to_str().unwrap()];
        full.extend_from_slice(args);
        let code = run(full);
        (code, std::fs::read_to_string(&path).unwrap_or_default())
    }

    #[test]
    fn list_filters_by_kind() {
        let (code, all) = run_to_string(&["list"]);
        assert_eq!(code, 0);
        assert!(all.lines().any(|l| l.starts_with("spherical-fig1 ")));
        for kind in ["mhd", "euler"] {
            let (_, some) = run_to_string(&["list", "--kind", kind]);
            assert_eq!(some.lines().count(), 5, "{kind}");
        }
        assert_eq!(run_to_string(&["list", "--kind", "nonsense"]).0, 2);
    }

    #[test]
    fn sample_writes_csv_grid() {
        let (code, csv) = run_to_string(&["sample", "--case", "cartesian-linear", "--grid", "16"]);
        assert_eq!(code, 0);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,y,z,wx,wy,wz"));
        assert_eq!(lines.count(), 4096);
    }

    #[test]
    fn sample_vtk_is_readable() {
        let (code, text) = run_to_string(&[
            "--format",
            "vtk",
            "sample",
            "--case",
            "spherical-fig1",
            "--grid",
            "4,5,6",
        ]);
        assert_eq!(code, 0);
        let vtk = vtkio::Vtk::parse_legacy_be(text.as_bytes()).unwrap();
        let vtkio::model::DataSet::StructuredGrid { pieces, .. } = vtk.data else {
            panic!("expected a structured grid");
        };
        let vtkio::model::Piece::Inline(piece) = &pieces[0] else {
            panic!("expected inline data");
        };
        assert_eq!(piece.num_points(), 120);
    }

    #[test]
    fn bounds_across_the_axis_exit_2() {
        let args = [
            "sample",
            "--case",
            "spherical-fig1",
            "--bounds",
            "-0.5,0.5,-0.5,0.5,0.5,1",
        ];
        assert_eq!(run_to_string(&args).0, 2);
        assert_eq!(run_to_string(&["sample", "--case", "no-such-case"]).0, 2);
    }

    fn verify_json(args: &[&str]) -> (i32, serde_json::Value) {
        let (code, text) = run_to_string(args);
        (code, serde_json::from_str(&text).unwrap())
    }

    #[test]
    fn toroidal_hypothesis_is_an_expected_failure() {
        let (code, v) = verify_json(&["verify", "--case", "toroidal-hypothesis"]);
        assert_eq!(code, 0);
        let r = &v["results"][0];
        assert_eq!(r["pass"], false);
        assert_eq!(r["expected_failure"], true);
        assert!(r["max_residual"].as_f64().unwrap() > 0.1);
    }

    #[test]
    fn richardson_orders_are_second() {
        let (code, v) = verify_json(&["verify", "--case", "mhd-xy", "--richardson", "--points", "200"]);
        assert_eq!(code, 0);
        let orders: Vec<f64> = v["results"]
            .as_array()
            .unwrap()
            .iter()
            .filter_map(|r| r["order_estimate"].as_f64())
            .collect();
        assert!(!orders.is_empty());
        assert!(orders.iter().all(|o| (1.6..=2.4).contains(o)), "{orders:?}");
    }

    #[test]
    fn manifest_records_the_run() {
        let (_, v) = verify_json(&[
            "--seed",
            "3",
            "--timestamp",
            "2024-05-01T12:00:00Z",
            "verify",
            "--case",
            "mhd-xy",
        ]);
        let m = &v["manifest"];
        assert_eq!(m["seed"], 3);
        assert_eq!(m["timestamp"], "2024-05-01T12:00:00Z");
        assert_eq!(m["case_ids"][0], "mhd-xy");
        assert!(m["command_line"].as_str().unwrap().starts_with("beltrami --out "));
    }

    fn trace_rows(args: &[&str]) -> Vec<Vec<f64>> {
        let (code, csv) = run_to_string(args);
        assert_eq!(code, 0);
        csv.lines()
            .skip(1)
            .map(|l| l.split(',').map(|t| t.parse().unwrap()).collect())
            .collect()
    }

    #[test]
    fn spherical_trace_stays_on_the_sphere() {
        let rows = trace_rows(&[
            "trace",
            "--case",
            "spherical-fig1",
            "--start",
            "0.6,0,0.8",
            "--steps",
            "100",
        ]);
        assert_eq!(rows.len(), 101);
        for r in rows {
            assert!((Vec3::new(r[1], r[2], r[3]).norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn fig2_trace_conserves_l_z() {
        let rows = trace_rows(&[
            "trace",
            "--case",
            "gb-fig2",
            "--start",
            "0.3,0.2,0.1",
            "--invariants",
            "L_z",
        ]);
        assert_eq!(rows.len(), 1001);
        let l0 = rows[0][4];
        assert!(rows.iter().all(|r| (r[4] - l0).abs() < 1e-6 * l0.abs().max(1.0)));
    }
}
