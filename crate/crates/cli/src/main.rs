//! `nondeg` — one verb per capability: generators, incidence builders,
//! nondegeneracy checks, spanning counts, VC/shatter/peel, similar-triangle
//! counting, and bound evaluation, all over the shared text formats.
//!
//! Exit status: 0 on success, 1 on domain errors, 2 on usage errors.
//! Results go to stdout; the resolved configuration (including the seed of
//! every randomized command) is echoed to stderr first.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nondeg_core::bounds::{self, BoundFormula, BoundKind};
use nondeg_core::constructions::{self, Seed};
use nondeg_core::geom::{Hyperplane, RationalPoint, Sphere};
use nondeg_core::incidence::{self, GeometricObjects};
use nondeg_core::io;
use nondeg_core::rational::{format_rational, parse_rational, Rational};
use nondeg_core::setsystem;
use nondeg_core::simtri;
use nondeg_core::TriangleShape;

/// A domain error: the name of the failing condition plus its message.
struct DomainError {
    label: String,
    message: String,
}

fn domain<E: std::fmt::Debug + std::fmt::Display>(e: E) -> DomainError {
    let debug = format!("{e:?}");
    let label = debug
        .split(|c| c == '(' || c == ' ' || c == '{')
        .next()
        .unwrap_or("Error")
        .to_string();
    DomainError {
        label,
        message: e.to_string(),
    }
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Comma-separated squared side lengths `L2,s2,s3`.
#[derive(Clone)]
struct ShapeSides(Vec<Rational>);

fn shape_arg(s: &str) -> Result<ShapeSides, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated rationals, got `{s}`"));
    }
    parts
        .iter()
        .map(|p| rational_arg(p.trim()))
        .collect::<Result<_, _>>()
        .map(ShapeSides)
}

/// Comma-separated rational coordinates.
#[derive(Clone)]
struct Coords(Vec<Rational>);

fn coords_arg(s: &str) -> Result<Coords, String> {
    s.split(',')
        .map(|p| rational_arg(p.trim()))
        .collect::<Result<_, _>>()
        .map(Coords)
}

#[derive(Parser)]
#[command(name = "nondeg", version, about = "Exact incidence-geometry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seeded generators writing the shared text formats
    #[command(subcommand)]
    Gen(GenCommand),
    /// Build or count point-object incidences
    #[command(subcommand)]
    Incidence(IncidenceCommand),
    /// Nondegeneracy checks, graph-side and geometric
    #[command(subcommand)]
    Check(CheckCommand),
    /// Count distinct spanning hyperplanes or spheres
    #[command(subcommand)]
    Spanning(SpanningCommand),
    /// Exact VC dimension of a set system or both sides of a graph
    Vcdim(VcdimArgs),
    /// Exact shatter function value at z
    Shatter(ShatterArgs),
    /// Peeling edge-bound certificate
    Peel(PeelArgs),
    /// Count triangles similar to a shape
    Simtri(SimtriArgs),
    /// Evaluate a closed-form incidence bound
    Bounds(BoundsArgs),
    /// Measured-versus-bound reports
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Distinct integer lattice points
    Points(GenPointsArgs),
    /// Exact rational points on a sphere
    Onsphere(GenOnsphereArgs),
    /// Circumsphere family over random point subsets
    Spheres(GenSpheresArgs),
    /// Degenerate cluster: a rich circle on a sphere
    Cluster(GenClusterArgs),
    /// Random dense nondegenerate bipartite graph
    GraphThm1(GenGraphArgs),
}

#[derive(Args)]
struct GenPointsArgs {
    #[arg(long)]
    count: usize,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    bound: i64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct GenOnsphereArgs {
    #[arg(long)]
    count: usize,
    #[arg(long)]
    dim: usize,
    /// Sphere center as comma-separated rationals (default: origin)
    #[arg(long, value_parser = coords_arg)]
    center: Option<Coords>,
    /// Squared radius (default: 1)
    #[arg(long, value_parser = rational_arg)]
    sq_radius: Option<Rational>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct GenSpheresArgs {
    #[arg(long)]
    points: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct GenClusterArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    circle: usize,
    #[arg(long)]
    off: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out_points: String,
    #[arg(long)]
    out_sphere: String,
}

#[derive(Args)]
struct GenGraphArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = rational_arg)]
    beta: Rational,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: String,
}

#[derive(Args)]
struct ObjectFiles {
    #[arg(long)]
    points: String,
    #[arg(long, conflicts_with = "planes")]
    spheres: Option<String>,
    #[arg(long)]
    planes: Option<String>,
}

#[derive(Subcommand)]
enum IncidenceCommand {
    /// Print the incidence count
    Count(ObjectFiles),
    /// Write the incidence graph file
    Build(IncidenceBuildArgs),
}

#[derive(Args)]
struct IncidenceBuildArgs {
    #[command(flatten)]
    files: ObjectFiles,
    #[arg(long)]
    out: String,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Graph beta-nondegeneracy (Q side)
    Nondeg(CheckGraphArgs),
    /// Graph beta-nondegeneracy on both sides
    DualNondeg(CheckGraphArgs),
    /// Geometric nondegeneracy of each sphere
    GeoSphere(CheckGeoArgs),
    /// Geometric nondegeneracy of each hyperplane
    GeoPlane(CheckGeoArgs),
}

#[derive(Args)]
struct CheckGraphArgs {
    #[arg(long)]
    graph: String,
    #[arg(long, value_parser = rational_arg)]
    beta: Rational,
}

#[derive(Args)]
struct CheckGeoArgs {
    #[arg(long)]
    points: String,
    #[arg(long)]
    spheres: Option<String>,
    #[arg(long)]
    planes: Option<String>,
    #[arg(long, value_parser = rational_arg)]
    beta: Rational,
}

#[derive(Subcommand)]
enum SpanningCommand {
    Planes(PointsFileArgs),
    Spheres(PointsFileArgs),
}

#[derive(Args)]
struct PointsFileArgs {
    #[arg(long)]
    points: String,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct VcdimArgs {
    /// Set-system file: prints one integer
    #[arg(long, group = "input")]
    sets: Option<String>,
    /// Graph file: prints `left L` and `right R`
    #[arg(long, group = "input")]
    graph: Option<String>,
}

#[derive(Args)]
struct ShatterArgs {
    #[arg(long)]
    sets: String,
    #[arg(long)]
    z: usize,
}

#[derive(Args)]
struct PeelArgs {
    #[arg(long)]
    graph: String,
    #[arg(long, value_parser = rational_arg)]
    beta: Rational,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimtriAlgo {
    Brute,
    Orbit,
}

#[derive(Args)]
struct SimtriArgs {
    #[arg(long)]
    points: String,
    /// Squared side lengths `L2,s2,s3`
    #[arg(long, value_parser = shape_arg)]
    shape: ShapeSides,
    #[arg(long, value_enum)]
    algo: SimtriAlgo,
    /// Print the ordered match total instead of the unordered count
    #[arg(long)]
    ordered: bool,
    /// Also print per-pair match counts `a b matches`
    #[arg(long)]
    breakdown: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: Option<u32>,
}

#[derive(Subcommand)]
enum ReportCommand {
    /// One CSV row comparing a measured count against a bound
    Ratio(RatioArgs),
}

#[derive(Args)]
struct RatioArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    measured: u64,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: Option<u32>,
}

fn config(entries: &[(&str, String)]) {
    let parts: Vec<String> = entries.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!("config: {}", parts.join(" "));
}

fn load_points(path: &str) -> Result<Vec<RationalPoint>, DomainError> {
    let text = io::read_to_string(path).map_err(domain)?;
    Ok(io::parse_points(&text).map_err(domain)?.0)
}

fn load_spheres(path: &str) -> Result<Vec<Sphere>, DomainError> {
    let text = io::read_to_string(path).map_err(domain)?;
    Ok(io::parse_spheres(&text).map_err(domain)?.0)
}

fn load_planes(path: &str) -> Result<Vec<Hyperplane>, DomainError> {
    let text = io::read_to_string(path).map_err(domain)?;
    Ok(io::parse_hyperplanes(&text).map_err(domain)?.0)
}

fn load_objects(
    spheres: &Option<String>,
    planes: &Option<String>,
) -> Result<GeometricObjects, DomainError> {
    match (spheres, planes) {
        (Some(path), None) => Ok(GeometricObjects::Spheres(load_spheres(path)?)),
        (None, Some(path)) => Ok(GeometricObjects::Hyperplanes(load_planes(path)?)),
        _ => Err(DomainError {
            label: "Usage".into(),
            message: "exactly one of --spheres / --planes is required".into(),
        }),
    }
}

fn parse_kind(kind: &str, d: Option<u32>) -> Result<BoundFormula, DomainError> {
    let kind: BoundKind = kind.parse().map_err(domain)?;
    BoundFormula::new(kind, d).map_err(domain)
}

fn build_shape(sides: &[Rational]) -> Result<TriangleShape, DomainError> {
    TriangleShape::new([sides[0].clone(), sides[1].clone(), sides[2].clone()]).map_err(domain)
}

fn run(cli: Cli) -> Result<(), DomainError> {
    match cli.command {
        Command::Gen(cmd) => run_gen(cmd),
        Command::Incidence(cmd) => run_incidence(cmd),
        Command::Check(cmd) => run_check(cmd),
        Command::Spanning(cmd) => run_spanning(cmd),
        Command::Vcdim(args) => run_vcdim(args),
        Command::Shatter(args) => run_shatter(args),
        Command::Peel(args) => run_peel(args),
        Command::Simtri(args) => run_simtri(args),
        Command::Bounds(args) => run_bounds(args),
        Command::Report(ReportCommand::Ratio(args)) => run_ratio(args),
    }
}

fn run_gen(cmd: GenCommand) -> Result<(), DomainError> {
    match cmd {
        GenCommand::Points(a) => {
            config(&[
                ("command", "gen points".into()),
                ("count", a.count.to_string()),
                ("dim", a.dim.to_string()),
                ("bound", a.bound.to_string()),
                ("seed", a.seed.to_string()),
            ]);
            let pts = constructions::gen_random_points(a.count, a.dim, a.bound, Seed(a.seed))
                .map_err(domain)?;
            io::write_string(&a.out, &io::write_points(&pts, Some(a.seed))).map_err(domain)?;
        }
        GenCommand::Onsphere(a) => {
            config(&[
                ("command", "gen onsphere".into()),
                ("count", a.count.to_string()),
                ("dim", a.dim.to_string()),
                ("seed", a.seed.to_string()),
            ]);
            let center = match a.center {
                Some(coords) => RationalPoint::new(coords.0),
                None => RationalPoint::origin(a.dim),
            };
            let sq_radius = a
                .sq_radius
                .unwrap_or_else(|| Rational::from_integer(1.into()));
            let sphere = Sphere::new(center, sq_radius).map_err(domain)?;
            let pts = constructions::gen_points_on_sphere(a.count, a.dim, &sphere, Seed(a.seed))
                .map_err(domain)?;
            io::write_string(&a.out, &io::write_points(&pts, Some(a.seed))).map_err(domain)?;
        }
        GenCommand::Spheres(a) => {
            config(&[
                ("command", "gen spheres".into()),
                ("points", a.points.clone()),
                ("k", a.k.to_string()),
                ("seed", a.seed.to_string()),
            ]);
            let pts = load_points(&a.points)?;
            let spheres =
                constructions::gen_sphere_family(&pts, a.k, Seed(a.seed)).map_err(domain)?;
            io::write_string(&a.out, &io::write_spheres(&spheres, Some(a.seed)))
                .map_err(domain)?;
        }
        GenCommand::Cluster(a) => {
            config(&[
                ("command", "gen cluster".into()),
                ("dim", a.dim.to_string()),
                ("circle", a.circle.to_string()),
                ("off", a.off.to_string()),
                ("seed", a.seed.to_string()),
            ]);
            let (pts, sphere) =
                constructions::gen_degenerate_cluster(a.dim, a.circle, a.off, Seed(a.seed))
                    .map_err(domain)?;
            io::write_string(&a.out_points, &io::write_points(&pts, Some(a.seed)))
                .map_err(domain)?;
            io::write_string(&a.out_sphere, &io::write_spheres(&[sphere], Some(a.seed)))
                .map_err(domain)?;
        }
        GenCommand::GraphThm1(a) => {
            config(&[
                ("command", "gen graph-thm1".into()),
                ("m", a.m.to_string()),
                ("n", a.n.to_string()),
                ("beta", format_rational(&a.beta)),
                ("seed", a.seed.to_string()),
            ]);
            let out = constructions::thm1_random_graph(a.m, a.n, &a.beta, Seed(a.seed))
                .map_err(domain)?;
            io::write_string(&a.out, &io::write_graph(&out.graph, Some(a.seed)))
                .map_err(domain)?;
            println!("passed {}", out.passed);
            println!("edges {}", out.graph.edge_count());
            println!("rho {}", format_rational(&out.rho));
            println!("min_degree {}", out.min_degree);
            println!("max_pair_intersection {}", out.max_pair_intersection);
        }
    }
    Ok(())
}

fn run_incidence(cmd: IncidenceCommand) -> Result<(), DomainError> {
    match cmd {
        IncidenceCommand::Count(files) => {
            config(&[
                ("command", "incidence count".into()),
                ("points", files.points.clone()),
            ]);
            let pts = load_points(&files.points)?;
            let objects = load_objects(&files.spheres, &files.planes)?;
            let graph = incidence::build_incidence(&pts, &objects).map_err(domain)?;
            println!("{}", graph.edge_count());
        }
        IncidenceCommand::Build(a) => {
            config(&[
                ("command", "incidence build".into()),
                ("points", a.files.points.clone()),
                ("out", a.out.clone()),
            ]);
            let pts = load_points(&a.files.points)?;
            let objects = load_objects(&a.files.spheres, &a.files.planes)?;
            let graph = incidence::build_incidence(&pts, &objects).map_err(domain)?;
            io::write_string(&a.out, &io::write_graph(&graph, None)).map_err(domain)?;
        }
    }
    Ok(())
}

fn load_graph(path: &str) -> Result<nondeg_core::BipartiteIncidenceGraph, DomainError> {
    let text = io::read_to_string(path).map_err(domain)?;
    Ok(io::parse_graph(&text).map_err(domain)?.0)
}

fn run_check(cmd: CheckCommand) -> Result<(), DomainError> {
    match cmd {
        CheckCommand::Nondeg(a) => {
            config(&[
                ("command", "check nondeg".into()),
                ("graph", a.graph.clone()),
                ("beta", format_rational(&a.beta)),
            ]);
            let graph = load_graph(&a.graph)?;
            let report = incidence::check_nondegenerate(&graph, &a.beta).map_err(domain)?;
            print!("{}", io::write_report(&report));
        }
        CheckCommand::DualNondeg(a) => {
            config(&[
                ("command", "check dual-nondeg".into()),
                ("graph", a.graph.clone()),
                ("beta", format_rational(&a.beta)),
            ]);
            let graph = load_graph(&a.graph)?;
            let forward = incidence::check_nondegenerate(&graph, &a.beta).map_err(domain)?;
            let dual = incidence::check_dually_nondegenerate(&graph, &a.beta).map_err(domain)?;
            println!("verdict {}", forward.verdict && dual.verdict);
            for w in forward.witnesses.iter().chain(&dual.witnesses) {
                println!("{} {} {} {}", w.q, w.q_other, w.intersection, w.degree);
            }
        }
        CheckCommand::GeoSphere(a) => {
            config(&[
                ("command", "check geo-sphere".into()),
                ("points", a.points.clone()),
                ("beta", format_rational(&a.beta)),
            ]);
            let path = a.spheres.as_ref().ok_or_else(|| DomainError {
                label: "Usage".into(),
                message: "--spheres is required".into(),
            })?;
            let pts = load_points(&a.points)?;
            for (i, s) in load_spheres(path)?.iter().enumerate() {
                let ok = incidence::geometric_nondegeneracy_sphere(&pts, s, &a.beta)
                    .map_err(domain)?;
                println!("{i} {ok}");
            }
        }
        CheckCommand::GeoPlane(a) => {
            config(&[
                ("command", "check geo-plane".into()),
                ("points", a.points.clone()),
                ("beta", format_rational(&a.beta)),
            ]);
            let path = a.planes.as_ref().ok_or_else(|| DomainError {
                label: "Usage".into(),
                message: "--planes is required".into(),
            })?;
            let pts = load_points(&a.points)?;
            for (i, h) in load_planes(path)?.iter().enumerate() {
                let ok = incidence::geometric_nondegeneracy_hyperplane(&pts, h, &a.beta)
                    .map_err(domain)?;
                println!("{i} {ok}");
            }
        }
    }
    Ok(())
}

fn run_spanning(cmd: SpanningCommand) -> Result<(), DomainError> {
    match cmd {
        SpanningCommand::Planes(a) => {
            config(&[("command", "spanning planes".into()), ("points", a.points.clone())]);
            let pts = load_points(&a.points)?;
            println!("{}", incidence::count_spanning_hyperplanes(&pts));
        }
        SpanningCommand::Spheres(a) => {
            config(&[("command", "spanning spheres".into()), ("points", a.points.clone())]);
            let pts = load_points(&a.points)?;
            println!("{}", incidence::count_spanning_spheres(&pts));
        }
    }
    Ok(())
}

fn run_vcdim(args: VcdimArgs) -> Result<(), DomainError> {
    if let Some(path) = args.sets {
        config(&[("command", "vcdim".into()), ("sets", path.clone())]);
        let text = io::read_to_string(&path).map_err(domain)?;
        let (system, _) = io::parse_setsystem(&text).map_err(domain)?;
        println!("{}", setsystem::vc_dimension(&system).map_err(domain)?);
    } else if let Some(path) = args.graph {
        config(&[("command", "vcdim".into()), ("graph", path.clone())]);
        let graph = load_graph(&path)?;
        let (left, right) = setsystem::left_right_vc(&graph).map_err(domain)?;
        println!("left {left}");
        println!("right {right}");
    }
    Ok(())
}

fn run_shatter(args: ShatterArgs) -> Result<(), DomainError> {
    config(&[
        ("command", "shatter".into()),
        ("sets", args.sets.clone()),
        ("z", args.z.to_string()),
    ]);
    let text = io::read_to_string(&args.sets).map_err(domain)?;
    let (system, _) = io::parse_setsystem(&text).map_err(domain)?;
    println!("{}", setsystem::shatter_function(&system, args.z).map_err(domain)?);
    Ok(())
}

fn run_peel(args: PeelArgs) -> Result<(), DomainError> {
    config(&[
        ("command", "peel".into()),
        ("graph", args.graph.clone()),
        ("beta", format_rational(&args.beta)),
    ]);
    let graph = load_graph(&args.graph)?;
    let cert = setsystem::peel_certify(&graph, &args.beta).map_err(domain)?;
    let text = io::write_peel_certificate(&cert);
    print!("{text}");
    if let Some(out) = args.out {
        io::write_string(&out, &text).map_err(domain)?;
    }
    Ok(())
}

fn run_simtri(args: SimtriArgs) -> Result<(), DomainError> {
    let shape_str: Vec<String> = args.shape.0.iter().map(format_rational).collect();
    config(&[
        ("command", "simtri".into()),
        ("points", args.points.clone()),
        ("shape", shape_str.join(",")),
        (
            "algo",
            match args.algo {
                SimtriAlgo::Brute => "brute".into(),
                SimtriAlgo::Orbit => "orbit".into(),
            },
        ),
        ("ordered", args.ordered.to_string()),
    ]);
    let pts = load_points(&args.points)?;
    let shape = build_shape(&args.shape.0)?;
    let count = match (args.algo, args.ordered) {
        (SimtriAlgo::Brute, false) => simtri::count_similar_brute(&pts, &shape).map_err(domain)?,
        (SimtriAlgo::Brute, true) | (SimtriAlgo::Orbit, true) => {
            simtri::count_similar_ordered(&pts, &shape).map_err(domain)?
        }
        (SimtriAlgo::Orbit, false) => simtri::count_similar_orbit(&pts, &shape).map_err(domain)?,
    };
    println!("{count}");
    if args.breakdown {
        let index = simtri::build_distance_index(&pts).map_err(domain)?;
        let [l, s2, s3] = shape.sq_sides();
        for a in 0..pts.len() {
            for b in 0..pts.len() {
                if a == b {
                    continue;
                }
                let r = nondeg_core::geom::squared_distance(&pts[a], &pts[b]);
                let ka = &r * s2 / l;
                let kb = &r * s3 / l;
                let matches = index
                    .level_set(a, &ka)
                    .iter()
                    .filter(|&&c| {
                        c != b
                            && nondeg_core::geom::squared_distance(&pts[b], &pts[c]) == kb
                    })
                    .count();
                if matches > 0 {
                    println!("{a} {b} {matches}");
                }
            }
        }
    }
    Ok(())
}

fn run_bounds(args: BoundsArgs) -> Result<(), DomainError> {
    config(&[
        ("command", "bounds".into()),
        ("kind", args.kind.clone()),
        ("m", args.m.to_string()),
        ("n", args.n.to_string()),
        ("d", args.d.map_or("-".into(), |d| d.to_string())),
    ]);
    let formula = parse_kind(&args.kind, args.d)?;
    let value = bounds::evaluate(&formula, args.m, args.n).map_err(domain)?;
    let (index, term) = bounds::dominant_term(&formula, args.m, args.n).map_err(domain)?;
    println!("value {}", value.to_decimal_string_truncated(50));
    println!("dominant {} {}", index, term.describe());
    Ok(())
}

fn run_ratio(args: RatioArgs) -> Result<(), DomainError> {
    config(&[
        ("command", "report ratio".into()),
        ("kind", args.kind.clone()),
        ("measured", args.measured.to_string()),
        ("m", args.m.to_string()),
        ("n", args.n.to_string()),
    ]);
    let formula = parse_kind(&args.kind, args.d)?;
    let report = bounds::ratio_report(args.measured, &formula, args.m, args.n).map_err(domain)?;
    println!("{}", bounds::RatioReport::csv_header());
    println!("{}", report.csv_line());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.label, e.message);
            ExitCode::FAILURE
        }
    }
}
