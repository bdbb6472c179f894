//! Command-line front end. `cmd_dispatch` is the whole program; the binary
//! only forwards its arguments and exit code.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::analysis::{analyze, CodeAnalysis};
use crate::error::Error;
use crate::exact_ball::{
    ball_points, classify_ball, floor_pow, iroot, is_representable, mu, parse_rational, BallCase, DistanceSet,
    NormOrderedBall, PowRadius,
};
use crate::families::{
    bound_report, default_delta_sup, default_theta_min, family, max_search_volume, min_p_threshold_a,
    p_range_b, parse_radius, perfect_bound_row, perfect_radius_bound, quasiperfect_bound_row, BoundMode,
    BoundRow, FamilyKind,
};
use crate::lattice::{hnf, parse_basis, LatticeBasis};
use crate::search::{run_search_with, SearchOptions, SearchQuery};

#[derive(Parser, Debug)]
#[command(name = "lpcodes", version, about = "Perfect and quasi-perfect lattice codes in Z^n under l_p metrics")]
struct Cli {
    /// Output encoding; tables, bounds and distance sets default to csv, the rest to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Packing and covering radii, imperfection degree and densities of a lattice.
    Analyze(AnalyzeArgs),
    /// Exhaustive search over a volume range.
    Search(SearchArgs),
    /// Integer points of an l_p ball.
    Ball(BallArgs),
    /// Elements of the distance set up to a limit.
    Distset(DistsetArgs),
    /// Build (and optionally verify) a lattice from one of the explicit families.
    Family(FamilyArgs),
    /// Density bounds limiting the radius and volume of perfect or quasi-perfect codes.
    Bounds(BoundsArgs),
    /// Regenerate one of the reference tables.
    Tables(TablesArgs),
    /// SVG of the polyomino of a planar ball, optionally tiled by a lattice.
    Polyomino(PolyominoArgs),
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    p: u32,
    /// Generator rows as JSON (`[[1,5],[0,24]]`) or compact (`1,5;0,24`).
    #[arg(long)]
    basis: String,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    min_volume: u64,
    /// Volume cap; derived from the covering density bound when omitted.
    #[arg(long)]
    max_volume: Option<u64>,
    /// Best known covering density used to derive the volume cap.
    #[arg(long)]
    theta_min: Option<f64>,
    #[arg(long, default_value_t = 1)]
    t_max: u64,
    #[arg(long)]
    no_dedupe: bool,
    #[arg(long, env = "QP_JOBS")]
    jobs: Option<usize>,
    /// Append `volume<TAB>hits<TAB>millis` per finished volume; volumes recorded
    /// with no hits are skipped on the next run.
    #[arg(long, value_name = "PATH")]
    checkpoint: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BallArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    p: u32,
    /// Radius as `r^p`.
    #[arg(long, conflicts_with = "r", required_unless_present = "r")]
    rpow: Option<u64>,
    /// Radius as an exact rational; also reports the shape class.
    #[arg(long)]
    r: Option<String>,
    /// Include the points themselves.
    #[arg(long)]
    list: bool,
}

#[derive(Args, Debug)]
struct DistsetArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    p: u32,
    /// Largest value `s = r^p` to include.
    #[arg(long)]
    limit: u64,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    r: String,
    #[arg(long)]
    p: u32,
    /// Analyze the constructed lattice and compare with the prediction.
    #[arg(long)]
    verify: bool,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    theta_min: Option<f64>,
    #[arg(long, default_value = "quasiperfect")]
    mode: String,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[arg(long, value_enum)]
    which: Which,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Table1,
    Table2,
    Table3,
    Table4,
}

#[derive(Args, Debug)]
struct PolyominoArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    r: String,
    #[arg(long)]
    basis: Option<String>,
}

/// A failure with its exit code: 1 for bad input, 2 for internal errors.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(flag: &str, e: impl std::fmt::Display) -> Self {
        Failure { code: 1, message: format!("{flag}: {e}") }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Overflow(_) | Error::LimitExceeded { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: e.to_string() }
}

/// Runs the CLI on `argv` (program name first), printing to stdout/stderr.
pub fn cmd_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Same as [`cmd_dispatch`] with explicit output streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = execute(&cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::input("--out", e)),
        None => out.write_all(text.as_bytes()).map_err(internal),
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let format = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Analyze(a) => {
            let b = read_basis(&a.basis, a.dim)?;
            check_p(a.p)?;
            let analysis = analyze(&b, a.p)?;
            match format(Format::Json) {
                Format::Json => to_json(&analysis),
                Format::Csv => to_csv([AnalysisRecord::from(&analysis)]),
            }
        }
        Command::Search(a) => cmd_search(a, format(Format::Json)),
        Command::Ball(a) => cmd_ball(a, format(Format::Json)),
        Command::Distset(a) => {
            check_p(a.p)?;
            check_dim(a.dim)?;
            check_grid("--limit", a.dim, a.p, a.limit, a.dim, LIST_BUDGET)?;
            let d = DistanceSet::new(a.dim, a.p, PowRadius(a.limit));
            let ball = NormOrderedBall::new(a.dim, a.p, PowRadius(a.limit));
            let rows: Vec<DistRow> = d
                .elements()
                .iter()
                .map(|&s| DistRow { s: s.get(), r: s.radius(a.p), mu: ball.count_within(s) as u64 })
                .collect();
            match format(Format::Csv) {
                Format::Json => to_json(&rows),
                Format::Csv => to_csv(rows),
            }
        }
        Command::Family(a) => cmd_family(a),
        Command::Bounds(a) => cmd_bounds(a, format(Format::Csv)),
        Command::Tables(a) => {
            let f = format(Format::Csv);
            match a.which {
                Which::Table1 => emit(f, table1()?),
                Which::Table2 => emit(f, table2()?),
                Which::Table3 => emit(f, table3()),
                Which::Table4 => emit(f, table4()),
            }
        }
        Command::Polyomino(a) => {
            if a.dim != 2 {
                return Err(Error::DimensionUnsupported { dim: a.dim, supported: "polyominoes are planar, --dim 2" }.into());
            }
            check_p(a.p)?;
            let r = parse_rational(&a.r).map_err(|e| Failure::input("--r", e))?;
            let basis = a.basis.as_deref().map(|b| read_basis(b, 2)).transpose()?;
            Ok(polyomino_svg(a.p, &r, basis.as_ref())?)
        }
    }
}

fn check_p(p: u32) -> Result<(), Failure> {
    if p == 0 {
        return Err(Failure::input("--p", "must be a positive integer"));
    }
    Ok(())
}

fn check_dim(n: usize) -> Result<(), Failure> {
    if !(1..=crate::lattice::MAX_DIM).contains(&n) {
        return Err(Failure::input("--dim", "must lie in 1..=4"));
    }
    Ok(())
}

// Grid cells a command may touch: listing keeps every point in memory,
// counting only walks the cells.
const LIST_BUDGET: u64 = 4_000_000;
const COUNT_BUDGET: u64 = 2_000_000_000;

// Refuses radii whose bounding box, raised to `power` sides, exceeds `budget`.
fn check_grid(flag: &str, n: usize, p: u32, s: u64, power: usize, budget: u64) -> Result<(), Failure> {
    let side = iroot(s, p).saturating_mul(2).saturating_add(1);
    let cells = (0..power).try_fold(1u64, |acc, _| acc.checked_mul(side));
    match cells {
        Some(c) if c <= budget => Ok(()),
        _ => Err(Failure {
            code: 2,
            message: format!("{flag}: radius^p {s} in dimension {n} needs more than {budget} grid cells"),
        }),
    }
}

fn read_basis(text: &str, dim: usize) -> Result<LatticeBasis, Failure> {
    check_dim(dim)?;
    let b = parse_basis(text).map_err(|e| Failure::input("--basis", e))?;
    if b.dim() != dim {
        return Err(Failure::input("--basis", format!("has dimension {}, but --dim is {dim}", b.dim())));
    }
    Ok(b)
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(internal)?;
    s.push('\n');
    Ok(s)
}

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(internal)?;
    }
    String::from_utf8(w.into_inner().map_err(internal)?).map_err(internal)
}

fn emit<T: Serialize>(format: Format, rows: Vec<T>) -> Result<String, Failure> {
    match format {
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(rows),
    }
}

#[derive(Serialize)]
struct DistRow {
    s: u64,
    r: f64,
    mu: u64,
}

/// One flat CSV record per analysis; the basis uses the compact form.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct AnalysisRecord {
    pub basis: String,
    pub dim: usize,
    pub p: u32,
    pub det: u64,
    pub r_pow: u64,
    #[serde(rename = "R_pow")]
    pub covering_pow: u64,
    pub r: f64,
    #[serde(rename = "R")]
    pub covering_radius: f64,
    pub t: u64,
    pub mu_r: u64,
    #[serde(rename = "mu_R")]
    pub mu_cover: u64,
    pub disc_pack_density: f64,
    pub disc_cover_density: f64,
    pub shortest_pow: u64,
    pub real_pack_radius: f64,
    pub real_pack_density: f64,
    pub real_cover_radius: Option<f64>,
    pub real_cover_density: Option<f64>,
}

impl From<&CodeAnalysis> for AnalysisRecord {
    fn from(a: &CodeAnalysis) -> Self {
        AnalysisRecord {
            basis: a.basis.to_string(),
            dim: a.dim,
            p: a.p,
            det: a.det,
            r_pow: a.packing_pow.get(),
            covering_pow: a.covering_pow.get(),
            r: a.packing_radius,
            covering_radius: a.covering_radius,
            t: a.t,
            mu_r: a.mu_r,
            mu_cover: a.mu_cover,
            disc_pack_density: a.disc_pack_density,
            disc_cover_density: a.disc_cover_density,
            shortest_pow: a.shortest_pow.get(),
            real_pack_radius: a.real_pack_radius,
            real_pack_density: a.real_pack_density,
            real_cover_radius: a.real_cover_radius,
            real_cover_density: a.real_cover_density,
        }
    }
}

fn cmd_search(a: &SearchArgs, format: Format) -> Result<String, Failure> {
    check_p(a.p)?;
    check_dim(a.dim)?;
    if a.min_volume == 0 {
        return Err(Failure::input("--min-volume", "must be positive"));
    }
    if a.jobs == Some(0) {
        return Err(Failure::input("--jobs", "must be positive"));
    }
    let (max_volume, provenance) = match (a.max_volume, a.theta_min) {
        (Some(0), _) => return Err(Failure::input("--max-volume", "must be positive")),
        (Some(v), _) => (v, format!("volume cap {v} supplied by --max-volume")),
        (None, theta) => {
            let theta = theta.or_else(|| default_theta_min(a.dim, a.p)).ok_or_else(|| {
                Failure::input("--max-volume", "required: no default covering density for this (dim, p); pass --max-volume or --theta-min")
            })?;
            let v = max_search_volume(a.dim, a.p, theta, BoundMode::Quasiperfect)?;
            (v, format!("volume cap {v} from the quasi-perfect covering density bound with theta_min = {theta}"))
        }
    };
    if a.min_volume > max_volume {
        return Err(Failure::input("--min-volume", format!("exceeds the volume cap {max_volume}")));
    }
    let q = SearchQuery {
        n: a.dim,
        p: a.p,
        volume_min: a.min_volume,
        volume_max: max_volume,
        t_max: a.t_max,
        dedupe: !a.no_dedupe,
    };
    let opts = SearchOptions { jobs: a.jobs, checkpoint: a.checkpoint.clone(), bound_provenance: provenance };
    let report = run_search_with(&q, &opts)?;
    match format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv(report.hits.iter().map(|h| AnalysisRecord::from(&h.analysis))),
    }
}

fn cmd_ball(a: &BallArgs, format: Format) -> Result<String, Failure> {
    check_p(a.p)?;
    check_dim(a.dim)?;
    let flag = if a.r.is_some() { "--r" } else { "--rpow" };
    let (s, shape) = match (&a.r, a.rpow) {
        (Some(text), _) => {
            let r = parse_rational(text).map_err(|e| Failure::input("--r", e))?;
            let s = floor_pow(&r, a.p).map_err(|e| Failure::input("--r", e))?;
            (s, Some(classify_ball(a.dim, a.p, &r)))
        }
        (None, Some(s)) => (PowRadius(s), None),
        (None, None) => return Err(Failure::input("--rpow", "one of --rpow or --r is required")),
    };
    let listed = a.list || format == Format::Csv;
    let points = if listed {
        check_grid(flag, a.dim, a.p, s.get(), a.dim, LIST_BUDGET)?;
        ball_points(a.dim, a.p, s)
    } else {
        check_grid(flag, a.dim, a.p, s.get(), a.dim - 1, COUNT_BUDGET)?;
        Vec::new()
    };
    let count = if listed { points.len() as u64 } else { mu(a.dim, a.p, s) };
    match format {
        Format::Json => {
            let mut v = json!({
                "dim": a.dim,
                "p": a.p,
                "r_pow": s.get(),
                "r": s.radius(a.p),
                "in_distance_set": is_representable(a.dim, a.p, s),
                "mu": count,
            });
            if let Some(shape) = shape {
                v["case"] = json!(case_name(shape.case));
                v["predicted_mu"] = json!(shape.predicted_mu.map(|m| m.to_string()));
            }
            if a.list {
                v["points"] = json!(points);
            }
            to_json(&v)
        }
        Format::Csv => {
            let mut text = String::new();
            for (i, x) in points.iter().enumerate() {
                if i == 0 {
                    let header: Vec<String> = (0..a.dim).map(|j| format!("x{j}")).collect();
                    text.push_str(&header.join(","));
                    text.push('\n');
                }
                let row: Vec<String> = x.iter().map(i64::to_string).collect();
                text.push_str(&row.join(","));
                text.push('\n');
            }
            Ok(text)
        }
    }
}

fn case_name(c: BallCase) -> &'static str {
    match c {
        BallCase::CaseI => "i",
        BallCase::CaseII => "ii",
        BallCase::CaseIII => "iii",
        BallCase::CaseIV => "iv",
        BallCase::Unclassified => "unclassified",
    }
}

fn cmd_family(a: &FamilyArgs) -> Result<String, Failure> {
    check_p(a.p)?;
    let kind: FamilyKind = a.kind.parse().map_err(|e| Failure::input("--kind", e))?;
    let r = parse_radius(&a.r).map_err(|e| Failure::input("--r", e))?;
    let spec = family(kind, &r, a.p).map_err(|e| Failure::input("--r/--p", e))?;
    let mut v = serde_json::to_value(&spec).map_err(internal)?;
    if a.verify {
        let analysis = analyze(&spec.basis, a.p)?;
        let ok = analysis.t == spec.predicted_t && analysis.disc_pack_ratio() == spec.predicted_disc_density;
        v["verification"] = json!({
            "verified": ok,
            "observed_t": analysis.t,
            "observed_disc_density": analysis.disc_pack_ratio().to_string(),
            "analysis": analysis,
        });
    }
    to_json(&v)
}

fn cmd_bounds(a: &BoundsArgs, format: Format) -> Result<String, Failure> {
    check_p(a.p)?;
    if a.dim < 2 || a.dim > crate::lattice::MAX_DIM {
        return Err(Failure::input("--dim", "must lie in 2..=4"));
    }
    let mode: BoundMode = a.mode.parse().map_err(|e| Failure::input("--mode", e))?;
    let theta = match a.theta_min.or_else(|| default_theta_min(a.dim, a.p)) {
        Some(t) if t > 1.0 => t,
        Some(_) => return Err(Failure::input("--theta-min", "must exceed 1")),
        None => return Err(Failure::input("--theta-min", "required: no default for this (dim, p)")),
    };
    let report = bound_report(a.dim, a.p, theta, mode)?;
    match format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv(report.rows.iter().map(|r| BoundCsv {
            r_pow: r.r_pow.get(),
            mu: r.mu,
            delta_lower: r.delta_lower,
            theta_upper_7: r.theta_upper_7,
            theta_upper_8: r.theta_upper_8,
        })),
    }
}

#[derive(Serialize)]
struct BoundCsv {
    r_pow: u64,
    mu: u64,
    delta_lower: f64,
    theta_upper_7: f64,
    theta_upper_8: f64,
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Row {
    /// `perfect` (covering radius equals packing radius) or `quasiperfect`.
    pub block: &'static str,
    pub r_pow: u64,
    pub mu: u64,
    pub delta_lower: f64,
    pub theta_upper_7: f64,
    /// Only reported for the quasi-perfect block.
    pub theta_upper_8: Option<f64>,
}

fn table1_row(block: &'static str, row: BoundRow) -> Table1Row {
    Table1Row {
        block,
        r_pow: row.r_pow.get(),
        mu: row.mu,
        delta_lower: round4(row.delta_lower),
        theta_upper_7: round4(row.theta_upper_7),
        theta_upper_8: (block == "quasiperfect").then(|| round4(row.theta_upper_8)),
    }
}

/// Bounds for the planar Euclidean case around each threshold radius: the
/// last radius passing the covering-side bound (perfect and quasi-perfect),
/// the packing bound from the best packing density, and the last radius
/// passing the packing-side bound.
pub fn table1() -> Result<Vec<Table1Row>, Error> {
    let (n, p) = (2usize, 2u32);
    let theta = default_theta_min(n, p).expect("planar Euclidean constant");
    let delta = default_delta_sup(n, p).expect("planar Euclidean constant");
    let perfect_cover = bound_report(n, p, theta, BoundMode::Perfect)?.r_pow_max;
    let (_, perfect_pack) = perfect_radius_bound(n, p, delta)?;
    let quasi = bound_report(n, p, theta, BoundMode::Quasiperfect)?;
    let quasi_pack = quasi
        .rows
        .iter()
        .filter(|r| r.theta_upper_8 >= theta)
        .map(|r| r.r_pow)
        .next_back()
        .unwrap_or(PowRadius::ZERO);
    let d = DistanceSet::new(n, p, PowRadius(perfect_pack.get() * 2 + 64));
    let around = |s: PowRadius| -> Result<Vec<PowRadius>, Error> {
        let e = d.elements();
        let i = e.binary_search(&s).map_err(|_| Error::invalid("threshold outside the distance set"))?;
        Ok(e[i.saturating_sub(2)..(i + 3).min(e.len())].to_vec())
    };
    let mut rows = Vec::new();
    for center in [perfect_cover, perfect_pack] {
        for s in around(center)? {
            rows.push(table1_row("perfect", perfect_bound_row(n, p, s)));
        }
    }
    for center in [quasi.r_pow_max, quasi_pack] {
        for s in around(center)? {
            rows.push(table1_row("quasiperfect", quasiperfect_bound_row(n, p, s)?));
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table2Row {
    pub lattice: String,
    pub t: u64,
    pub r_pow: u64,
    pub r: f64,
    pub real_r: f64,
    #[serde(rename = "R_pow")]
    pub covering_pow: u64,
    #[serde(rename = "R")]
    pub covering_radius: f64,
    #[serde(rename = "real_R")]
    pub real_covering_radius: f64,
    /// Exact `μ(r)/det`.
    pub disc_pack: String,
    pub disc_pack_density: f64,
    pub real_pack_density: f64,
    /// Exact `μ(R)/det`.
    pub disc_cover: String,
    pub disc_cover_density: f64,
    pub real_cover_density: f64,
}

/// Every congruence class of planar lattices of volume 24 under ℓ_2.
pub fn table2() -> Result<Vec<Table2Row>, Error> {
    let q = SearchQuery::new(2, 2, 24, 24, u64::MAX);
    let report = run_search_with(&q, &SearchOptions::default())?;
    Ok(report
        .hits
        .iter()
        .map(|h| {
            let a = &h.analysis;
            Table2Row {
                lattice: h.basis.to_string(),
                t: a.t,
                r_pow: a.packing_pow.get(),
                r: round4(a.packing_radius),
                real_r: round4(a.real_pack_radius),
                covering_pow: a.covering_pow.get(),
                covering_radius: round4(a.covering_radius),
                real_covering_radius: round4(a.real_cover_radius.unwrap_or(f64::NAN)),
                disc_pack: a.disc_pack_ratio().to_string(),
                disc_pack_density: round4(a.disc_pack_density),
                real_pack_density: round4(a.real_pack_density),
                disc_cover: a.disc_cover_ratio().to_string(),
                disc_cover_density: round4(a.disc_cover_density),
                real_cover_density: round4(a.real_cover_density.unwrap_or(f64::NAN)),
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table3Row {
    pub r: u64,
    pub p_min: u32,
}

pub fn table3() -> Vec<Table3Row> {
    (2..=14).map(|r| Table3Row { r, p_min: min_p_threshold_a(r) }).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table4Row {
    pub r: u64,
    /// Space-separated exponents.
    pub p_values: String,
}

pub fn table4() -> Vec<Table4Row> {
    (3..=14)
        .map(|r| Table4Row {
            r,
            p_values: p_range_b(r).iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
        })
        .collect()
}

const PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7"];

/// Unit squares centred at the points of `B_p^2(r)`; with a basis, every
/// lattice translate meeting a window around the origin is drawn too.
pub fn polyomino_svg(p: u32, r: &BigRational, basis: Option<&LatticeBasis>) -> Result<String, Error> {
    let s = floor_pow(r, p)?;
    let tile = ball_points(2, p, s);
    let rho = iroot(s.get(), p) as i64;
    let (window, centers) = match basis {
        None => (rho + 1, vec![(vec![0i64, 0], 0usize)]),
        Some(b) => {
            let h = hnf(b)?;
            let w = 3 * rho + 3;
            let reach = w + rho;
            let rows = h.rows();
            let (d0, b01, d1) = (rows[0][0], rows[0][1], rows[1][1]);
            let mut centers = Vec::new();
            for c0 in (-reach / d0 - 1)..=(reach / d0 + 1) {
                let x = c0 * d0;
                let base = c0 * b01;
                let lo = (-reach - base).div_euclid(d1);
                let hi = (reach - base).div_euclid(d1) + 1;
                for c1 in lo..=hi {
                    let y = base + c1 * d1;
                    if x.abs() <= reach && y.abs() <= reach {
                        let colour = (c0.rem_euclid(4) * 2 + c1.rem_euclid(2)) as usize;
                        centers.push((vec![x, y], colour));
                    }
                }
            }
            (w, centers)
        }
    };
    let unit = 12;
    let side = (2 * window + 1) * unit;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{side}" height="{side}" fill="white"/>"#);
    for (c, colour) in &centers {
        let _ = writeln!(svg, r#"<g fill="{}" stroke="black" stroke-width="0.5">"#, PALETTE[colour % PALETTE.len()]);
        for x in &tile {
            let (px, py) = (c[0] + x[0], c[1] + x[1]);
            if px.abs() > window || py.abs() > window {
                continue;
            }
            let sx = (px + window) * unit;
            let sy = (window - py) * unit;
            let _ = writeln!(svg, r#"<rect x="{sx}" y="{sy}" width="{unit}" height="{unit}"/>"#);
        }
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
