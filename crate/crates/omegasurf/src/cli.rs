//! Command-line front end.
//!
//! Exit codes: 0 success, 1 solve or validation failure, 2 usage or input
//! error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use omegasurf_core::boundary::BoundarySet;
use omegasurf_core::projection::{project_cloud, tangential_relax, SolverConfig};
use omegasurf_core::solid_angle::{classic_omega, sample};
use omegasurf_core::spatial::median;
use omegasurf_core::surface::{
    build_mesh, principal_direction_field, section_curves, seed_points, trace_principal_lines, Family, SeedGrid,
    TraceConfig,
};
use omegasurf_core::{Executor, Point3, Vec3};

use crate::formats::{self, num, write_csv};
use crate::parallel::{resolve_threads, Pool};
use crate::scene::parse_scene;
use crate::validate;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

type CliResult = Result<(), CliError>;

#[derive(Debug, Parser)]
#[command(name = "omegasurf", version, about = "Constant-solid-angle surfaces from closed boundary curves")]
pub struct Cli {
    /// Worker threads, 0 = one per core. OMEGASURF_THREADS overrides this.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Potential, classic solid angle and gradient at points read from CSV.
    Eval(EvalArgs),
    /// Project a seed grid (or seed file) onto a level set and mesh it.
    /// Levels use the 2π-free potential convention.
    Surface(SurfaceArgs),
    /// Level curves in a section plane for several potential values.
    Sections(SectionsArgs),
    /// Per-vertex principal curvatures and combed directions of a surface OBJ.
    Curvature(CurvatureArgs),
    /// Trace principal-curvature lines over a surface OBJ.
    Trace(TraceArgs),
    /// Sample the potential over a seed grid to choose a level.
    Scan(ScanArgs),
    /// Run the built-in acceptance suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    /// Single unit-current loop only; `omega_classic` is always filled.
    Classic,
    /// 2π-free weighted potential; `omega_classic` is blank for other scenes.
    Potential,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub scene: PathBuf,
    /// CSV of x,y,z rows (header optional).
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "potential")]
    pub convention: Convention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeedSource {
    Grid,
    File,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 32)]
    pub grid_nx: usize,
    #[arg(long, default_value_t = 32)]
    pub grid_ny: usize,
    /// x0,y0,x1,y1,z; defaults to the scene's bounding box at its mid height.
    #[arg(long, value_parser = parse_region)]
    pub grid_region: Option<[f64; 5]>,
}

impl GridArgs {
    fn grid(&self, set: &BoundarySet) -> Result<SeedGrid, CliError> {
        let [x0, y0, x1, y1, z] = self.grid_region.unwrap_or_else(|| {
            let bb = set.bounding_box();
            [bb.min.x, bb.min.y, bb.max.x, bb.max.y, bb.center().z]
        });
        SeedGrid::xy(x0, y0, x1, y1, z, self.grid_nx, self.grid_ny).map_err(|e| CliError::Input(format!("seed grid: {e}")))
    }
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub damping: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Step cap in scene units (default a quarter of the bounding-box diagonal).
    #[arg(long)]
    pub max_step: Option<f64>,
}

impl SolverArgs {
    fn config(&self, set: &BoundarySet, omega_c: f64) -> Result<SolverConfig, CliError> {
        let mut cfg = SolverConfig::for_set(set, omega_c);
        if let Some(t) = self.tol {
            cfg.tol_omega = t;
        }
        if let Some(d) = self.damping {
            cfg.damping = d;
        }
        if let Some(m) = self.max_iterations {
            cfg.max_iterations = m;
        }
        if let Some(s) = self.max_step {
            cfg.max_step = s;
        }
        cfg.validate().map_err(|e| CliError::Input(format!("solver settings: {e}")))?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub scene: PathBuf,
    /// Target potential (2π-free: classic Ω − 2π for a single unit loop).
    #[arg(long, allow_hyphen_values = true)]
    pub omega_c: f64,
    #[arg(long, value_enum, default_value = "grid")]
    pub seeds: SeedSource,
    /// Seed CSV for `--seeds file`; the OBJ then holds vertices only.
    #[arg(long)]
    pub seed_file: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Drop cells with an edge longer than this many median edges.
    #[arg(long, default_value_t = omegasurf_core::surface::DEFAULT_STRETCH_LIMIT)]
    pub stretch_limit: f64,
    /// Tangential smoothing passes after projection (grid seeds only).
    #[arg(long, default_value_t = 0)]
    pub relax: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// CSV rows: seed_index,status,iterations,residual.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SectionsArgs {
    #[arg(long)]
    pub scene: PathBuf,
    /// Comma-separated potential values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub omega: Vec<f64>,
    /// Corner of the section rectangle.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub origin: Vec3,
    /// Full edge vectors of the section rectangle.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub u_axis: Vec3,
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub v_axis: Vec3,
    #[arg(long, default_value_t = 41)]
    pub nx: usize,
    #[arg(long, default_value_t = 41)]
    pub ny: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// OBJ of `l` records.
    #[arg(long)]
    pub out: PathBuf,
    /// CSV rows: omega,polyline,points,failed_seeds.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[arg(long)]
    pub scene: PathBuf,
    #[arg(long)]
    pub surface: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub scene: PathBuf,
    #[arg(long)]
    pub surface: PathBuf,
    /// Level to re-project onto; defaults to the median potential of the
    /// mesh vertices.
    #[arg(long, allow_hyphen_values = true)]
    pub omega_c: Option<f64>,
    /// 1 follows the larger principal curvature, 2 the smaller.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub family: u8,
    /// Default: 4 median edges.
    #[arg(long)]
    pub seed_spacing: Option<f64>,
    /// Default: half a median edge.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub max_steps: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// CSV rows: trace,points,stop.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub scene: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// CSV rows: x,y,z,potential.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Run only these criteria, e.g. `--only 1,6,13`.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let arr: [f64; N] = v.try_into().map_err(|_| format!("expected {N} comma-separated numbers"))?;
    if arr.iter().all(|x| x.is_finite()) {
        Ok(arr)
    } else {
        Err("values must be finite".into())
    }
}

fn parse_region(s: &str) -> Result<[f64; 5], String> {
    parse_floats::<5>(s)
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    parse_floats::<3>(s).map(Vec3::from_array)
}

fn load_scene(path: &Path) -> Result<BoundarySet, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_scene(&bytes)
        .map(|s| s.set)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Input(format!("{}: {e}", path.display()))
}

fn fmt_err(path: &Path) -> impl Fn(formats::FormatError) -> CliError + '_ {
    move |e| CliError::Input(format!("{}: {e}", path.display()))
}

fn read_mesh(path: &Path) -> Result<omegasurf_core::surface::SurfaceMesh, CliError> {
    let f = File::open(path).map_err(io_err(path))?;
    formats::read_obj(BufReader::new(f))
        .map_err(fmt_err(path))?
        .into_mesh()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn vec_fields(v: Vec3) -> [String; 3] {
    [num(v.x), num(v.y), num(v.z)]
}

fn eval(args: &EvalArgs, pool: &Pool) -> CliResult {
    let set = load_scene(&args.scene)?;
    if args.convention == Convention::Classic && !set.is_classic_eligible() {
        return Err(CliError::Input(
            "--convention classic needs a scene with exactly one loop of current 1".into(),
        ));
    }
    let f = File::open(&args.points).map_err(io_err(&args.points))?;
    let points = formats::read_points_csv(f).map_err(fmt_err(&args.points))?;
    let rows = pool.map(&points, &|&p: &Point3| {
        let s = sample(&set, p, false).ok();
        let classic = classic_omega(&set, p).ok();
        (p, s, classic)
    });
    let failed = rows.iter().filter(|r| r.1.is_none()).count();
    let out = create(&args.out)?;
    write_csv(
        out,
        &["x", "y", "z", "potential", "omega_classic", "gx", "gy", "gz"],
        rows.into_iter().map(|(p, s, classic)| {
            let mut row = vec_fields(p).to_vec();
            match s {
                Some(s) => {
                    row.push(num(s.omega));
                    row.push(classic.map(num).unwrap_or_default());
                    row.extend(vec_fields(s.grad));
                }
                None => row.extend(std::iter::repeat_n(String::new(), 5)),
            }
            row
        }),
    )
    .map_err(fmt_err(&args.out))?;
    if failed > 0 {
        return Err(CliError::Failure(format!("{failed} of {} points lie on the boundary", points.len())));
    }
    Ok(())
}

fn surface(args: &SurfaceArgs, pool: &Pool) -> CliResult {
    let set = load_scene(&args.scene)?;
    let cfg = args.solver.config(&set, args.omega_c)?;
    let (results, mesh) = match args.seeds {
        SeedSource::Grid => {
            let grid = args.grid.grid(&set)?;
            let seeds = seed_points(&grid).map_err(|e| CliError::Input(format!("seed grid: {e}")))?;
            let mut results = project_cloud(&set, &seeds, &cfg, pool);
            let neighbors = grid.lattice_neighbors();
            for _ in 0..args.relax {
                let pts: Vec<Point3> = results.iter().map(|r| r.point).collect();
                let nb: Vec<Vec<usize>> = neighbors
                    .iter()
                    .enumerate()
                    .map(|(i, n)| {
                        if results[i].converged() && n.iter().all(|&j| results[j].converged()) {
                            n.clone()
                        } else {
                            Vec::new()
                        }
                    })
                    .collect();
                let relaxed = tangential_relax(&set, &pts, &nb, &cfg, 0.5, pool);
                for (r, mut new) in results.iter_mut().zip(relaxed) {
                    if r.converged() {
                        new.iterations += r.iterations;
                        *r = new;
                    }
                }
            }
            let mesh = build_mesh(&grid, &results, args.stretch_limit);
            (results, mesh)
        }
        SeedSource::File => {
            let path = args
                .seed_file
                .as_ref()
                .ok_or_else(|| CliError::Input("--seeds file needs --seed-file".into()))?;
            let f = File::open(path).map_err(io_err(path))?;
            let seeds = formats::read_points_csv(f).map_err(fmt_err(path))?;
            let results = project_cloud(&set, &seeds, &cfg, pool);
            let pts = results.iter().filter(|r| r.converged()).map(|r| r.point).collect();
            let mesh = omegasurf_core::surface::SurfaceMesh::from_parts(pts, Vec::new())
                .map_err(|e| CliError::Failure(e.to_string()))?;
            (results, mesh)
        }
    };
    formats::write_obj_mesh(create(&args.out)?, &mesh).map_err(io_err(&args.out))?;
    if let Some(path) = &args.report {
        write_csv(
            create(path)?,
            &["seed_index", "status", "iterations", "residual"],
            results.iter().enumerate().map(|(i, r)| {
                vec![i.to_string(), r.status.as_str().to_string(), r.iterations.to_string(), num(r.residual)]
            }),
        )
        .map_err(fmt_err(path))?;
    }
    let converged = results.iter().filter(|r| r.converged()).count();
    log::info!(
        "{converged}/{} seeds converged, {} faces, {} components",
        results.len(),
        mesh.faces.len(),
        mesh.component_count()
    );
    if converged == 0 {
        return Err(CliError::Failure("no seed converged".into()));
    }
    Ok(())
}

fn sections(args: &SectionsArgs, pool: &Pool) -> CliResult {
    let set = load_scene(&args.scene)?;
    let cfg = args.solver.config(&set, args.omega[0])?;
    let grid = SeedGrid::new(args.origin, args.u_axis, args.v_axis, args.nx, args.ny, 0.0)
        .map_err(|e| CliError::Input(format!("section plane: {e}")))?;
    let secs = section_curves(&set, &grid, &args.omega, &cfg, pool).map_err(|e| CliError::Input(e.to_string()))?;
    let lines: Vec<_> = secs.iter().flat_map(|s| s.polylines.iter().cloned()).collect();
    formats::write_obj_polylines(create(&args.out)?, &lines).map_err(io_err(&args.out))?;
    if let Some(path) = &args.report {
        let mut rows = Vec::new();
        for s in &secs {
            if s.polylines.is_empty() {
                rows.push(vec![num(s.omega), String::new(), "0".into(), s.failures.to_string()]);
            }
            for (k, l) in s.polylines.iter().enumerate() {
                rows.push(vec![num(s.omega), k.to_string(), l.len().to_string(), s.failures.to_string()]);
            }
        }
        write_csv(create(path)?, &["omega", "polyline", "points", "failed_seeds"], rows).map_err(fmt_err(path))?;
    }
    Ok(())
}

fn curvature(args: &CurvatureArgs, pool: &Pool) -> CliResult {
    let set = load_scene(&args.scene)?;
    let mesh = read_mesh(&args.surface)?;
    let frames = principal_direction_field(&set, &mesh.vertices, pool);
    let missing = frames.iter().filter(|f| f.is_none()).count();
    let header = ["x", "y", "z", "k1", "k2", "d1x", "d1y", "d1z", "d2x", "d2y", "d2z", "umbilic_flag"];
    write_csv(
        create(&args.out)?,
        &header,
        mesh.vertices.iter().zip(&frames).map(|(&p, f)| {
            let mut row = vec_fields(p).to_vec();
            match f {
                Some(f) => {
                    row.push(num(f.kappa1));
                    row.push(num(f.kappa2));
                    row.extend(vec_fields(f.dir1));
                    row.extend(vec_fields(f.dir2));
                    row.push(u8::from(f.umbilic).to_string());
                }
                None => row.extend(std::iter::repeat_n(String::new(), 9)),
            }
            row
        }),
    )
    .map_err(fmt_err(&args.out))?;
    if missing > 0 {
        return Err(CliError::Failure(format!("no curvature frame at {missing} vertices")));
    }
    Ok(())
}

fn trace(args: &TraceArgs, pool: &Pool) -> CliResult {
    let set = load_scene(&args.scene)?;
    let mesh = read_mesh(&args.surface)?;
    let Some(edge) = mesh.median_edge_length() else {
        return Err(CliError::Input(format!("{}: mesh has no faces", args.surface.display())));
    };
    let omega_c = match args.omega_c {
        Some(w) => w,
        None => {
            let mut p: Vec<f64> = pool
                .map(&mesh.vertices, &|&v: &Point3| omegasurf_core::solid_angle::potential(&set, v).ok())
                .into_iter()
                .flatten()
                .collect();
            let w = median(&mut p).ok_or_else(|| CliError::Input("cannot evaluate the mesh vertices".into()))?;
            log::info!("tracing on level {w}");
            w
        }
    };
    let cfg = args.solver.config(&set, omega_c)?;
    let family = if args.family == 1 { Family::First } else { Family::Second };
    let tc = TraceConfig::new(
        family,
        args.seed_spacing.unwrap_or(4.0 * edge),
        args.step.unwrap_or(0.5 * edge),
        args.max_steps,
    );
    let traces = trace_principal_lines(&set, &mesh, &cfg, &tc, pool).map_err(|e| CliError::Input(e.to_string()))?;
    let lines: Vec<_> = traces.iter().map(|t| t.points.clone()).collect();
    formats::write_obj_polylines(create(&args.out)?, &lines).map_err(io_err(&args.out))?;
    if let Some(path) = &args.report {
        write_csv(
            create(path)?,
            &["trace", "points", "stop"],
            traces
                .iter()
                .enumerate()
                .map(|(i, t)| vec![i.to_string(), t.points.len().to_string(), format!("{:?}", t.stop)]),
        )
        .map_err(fmt_err(path))?;
    }
    Ok(())
}

fn scan(args: &ScanArgs, pool: &Pool) -> CliResult {
    let set = load_scene(&args.scene)?;
    let grid = args.grid.grid(&set)?;
    let seeds = seed_points(&grid).map_err(|e| CliError::Input(e.to_string()))?;
    let values = pool.map(&seeds, &|&p: &Point3| omegasurf_core::solid_angle::potential(&set, p).ok());
    let mut ok: Vec<f64> = values.iter().flatten().copied().collect();
    if ok.is_empty() {
        return Err(CliError::Failure("potential undefined at every grid point".into()));
    }
    ok.sort_by(f64::total_cmp);
    let q = |f: f64| ok[((ok.len() - 1) as f64 * f).round() as usize];
    println!(
        "potential over {} points: min {} q25 {} median {} q75 {} max {}",
        ok.len(),
        num(q(0.0)),
        num(q(0.25)),
        num(q(0.5)),
        num(q(0.75)),
        num(q(1.0))
    );
    if let Some(path) = &args.out {
        write_csv(
            create(path)?,
            &["x", "y", "z", "potential"],
            seeds.iter().zip(&values).map(|(&p, v)| {
                let mut row = vec_fields(p).to_vec();
                row.push(v.map(num).unwrap_or_default());
                row
            }),
        )
        .map_err(fmt_err(path))?;
    }
    Ok(())
}

fn run_validate(args: &ValidateArgs, threads: usize) -> CliResult {
    let outcomes = validate::run(&args.only, threads);
    let mut stdout = std::io::stdout().lock();
    for o in &outcomes {
        let _ = writeln!(stdout, "{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let total: f64 = outcomes.iter().map(|o| o.seconds).sum();
    let _ = writeln!(stdout, "{} of {} criteria passed in {total:.1}s", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        return Err(CliError::Failure(format!("{failed} criteria failed")));
    }
    Ok(())
}

/// Parses `std::env::args`, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).parse_default_env().try_init();
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> CliResult {
    let threads = resolve_threads(cli.threads);
    let pool = Pool::new(threads).map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    log::debug!("using {} threads", pool.threads());
    match &cli.command {
        Command::Eval(a) => eval(a, &pool),
        Command::Surface(a) => surface(a, &pool),
        Command::Sections(a) => sections(a, &pool),
        Command::Curvature(a) => curvature(a, &pool),
        Command::Trace(a) => trace(a, &pool),
        Command::Scan(a) => scan(a, &pool),
        Command::Validate(a) => run_validate(a, pool.threads()),
    }
}
