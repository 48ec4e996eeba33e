mod scene;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use quadsec::approx::{conjecture_report, quadrisecant_approximation, ApproxError, ConjectureReport};
use quadsec::knot::{
    builtin_knot, check_genericity, knot_to_json, load_knot, perturb_to_generic, GenericityReport, KnotError, KnotFamily,
    PolygonalKnot,
};
use quadsec::measures::{bound_grid_csv, measure_report, minimize_bound, BoundMinimum, BoundType, MeasureReport};
use quadsec::secants::{
    enumerate_quadrisecants, pannwitz_lower_check, quadrisecant_upper_bound, quadrisecants_csv, Quadrisecant,
    SecantError,
};
use quadsec::topology::wirtinger::SearchBudget;
use quadsec::topology::{
    build_theta, essential_quadrisecant_check, CertifyOptions, EssentialityReport, KnotGroupCache,
};
use quadsec::ToleranceConfig;
use scene::Scene;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "quadsec", version, allow_negative_numbers = true, about = "Quadrisecants, essentiality and geometric measures of polygonal knots")]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    /// Seed for perturbation, projections and group searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Perturb the input to a generic position, magnitude relative to the shortest edge.
    #[arg(long, global = true)]
    perturb: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write an OBJ/PLY scene of the knot and its quadrisecants.
    #[arg(long, global = true)]
    export: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, global = true)]
    tol_unit: Option<f64>,
    #[arg(long, global = true)]
    tol_skew: Option<f64>,
    #[arg(long, global = true)]
    tol_dir: Option<f64>,
    #[arg(long, global = true)]
    tol_quadric: Option<f64>,
    #[arg(long, global = true)]
    tol_on_surface: Option<f64>,
    #[arg(long, global = true)]
    tol_line: Option<f64>,
    #[arg(long, global = true)]
    tol_cond_max: Option<f64>,
    #[arg(long, global = true)]
    tol_len: Option<f64>,
    #[arg(long, global = true)]
    tol_embed: Option<f64>,
    #[arg(long, global = true)]
    tol_param: Option<f64>,
    #[arg(long, global = true)]
    tol_hit: Option<f64>,
    #[arg(long, global = true)]
    tol_contained: Option<f64>,
    #[arg(long, global = true)]
    tol_family_step: Option<f64>,
}

#[derive(Args)]
struct KnotInput {
    /// Knot JSON file.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    knot: Option<PathBuf>,
    /// Built-in family instead of a file, e.g. `trefoil`, `torus(2,5)`, `hexagonal_trefoil`.
    #[arg(long)]
    builtin: Option<String>,
    /// Vertex count for `--builtin`.
    #[arg(long, short = 'n', default_value_t = 64)]
    vertices: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate quadrisecants and certify the essentiality of their secants.
    Quadrisecants {
        #[command(flatten)]
        input: KnotInput,
        /// Skip the essentiality checks.
        #[arg(long)]
        no_essential: bool,
    },
    /// Build the quadrisecant approximation and compare it with the source.
    Approx {
        #[command(flatten)]
        input: KnotInput,
        /// Directory for `approximation.json` and `verdict.json`.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Length, curvature, thickness, ropelength, distortion, bridges, hull.
    Measures {
        #[command(flatten)]
        input: KnotInput,
    },
    /// Minimized ropelength bound constants.
    Bounds {
        #[arg(long, default_value = "all")]
        kind: String,
        /// Emit a CSV grid of the bound functions with this many intervals instead.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Write the scene (knot, quadrisecant lines, optional Θ-graph loops).
    Export {
        #[command(flatten)]
        input: KnotInput,
        /// Include the Θ-graph loops of each middle secant.
        #[arg(long)]
        theta: bool,
    },
    /// Write a built-in knot as knot JSON.
    Generate {
        family: String,
        #[arg(long, short = 'n', default_value_t = 64)]
        vertices: usize,
    },
}

#[derive(Debug)]
enum Failure {
    NotGeneric(String),
    Validation(String),
    Empty(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::NotGeneric(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Empty(_) => 4,
            Failure::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::NotGeneric(m) | Failure::Validation(m) | Failure::Empty(m) | Failure::Other(m) => m,
        }
    }
}

const PERTURB_HINT: &str = "rerun with --perturb <magnitude>, e.g. --perturb 1e-3";

impl From<KnotError> for Failure {
    fn from(e: KnotError) -> Self {
        match e {
            KnotError::CannotPerturb(_) => Failure::NotGeneric(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<SecantError> for Failure {
    fn from(e: SecantError) -> Self {
        match e {
            SecantError::NotGeneric(_) | SecantError::FiveSecantDetected(_) => {
                Failure::NotGeneric(format!("{e}; {PERTURB_HINT}"))
            }
            SecantError::MissingMetadata => Failure::Validation(e.to_string()),
        }
    }
}

impl From<ApproxError> for Failure {
    fn from(e: ApproxError) -> Self {
        match e {
            ApproxError::NoQuadrisecants => Failure::Empty(e.to_string()),
            ApproxError::Secant(s) => s.into(),
            ApproxError::Topology(t) => Failure::Other(t.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

fn json<T: Serialize>(command: &str, body: T) -> String {
    serde_json::to_string_pretty(&Envelope { schema: SCHEMA, command, body }).expect("report serializes") + "\n"
}

fn tolerance(a: &TolArgs) -> Result<ToleranceConfig, Failure> {
    let mut t = ToleranceConfig::default();
    let fields: [(&str, Option<f64>, &mut f64); 13] = [
        ("tol-unit", a.tol_unit, &mut t.tol_unit),
        ("tol-skew", a.tol_skew, &mut t.tol_skew),
        ("tol-dir", a.tol_dir, &mut t.tol_dir),
        ("tol-quadric", a.tol_quadric, &mut t.tol_quadric),
        ("tol-on-surface", a.tol_on_surface, &mut t.tol_on_surface),
        ("tol-line", a.tol_line, &mut t.tol_line),
        ("tol-cond-max", a.tol_cond_max, &mut t.cond_max),
        ("tol-len", a.tol_len, &mut t.tol_len),
        ("tol-embed", a.tol_embed, &mut t.tol_embed),
        ("tol-param", a.tol_param, &mut t.tol_param),
        ("tol-hit", a.tol_hit, &mut t.tol_hit),
        ("tol-contained", a.tol_contained, &mut t.tol_contained),
        ("tol-family-step", a.tol_family_step, &mut t.family_step),
    ];
    for (name, value, slot) in fields {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::Validation(format!("--{name} must be positive and finite, got {v}")));
            }
            *slot = v;
        }
    }
    Ok(t)
}

struct Ctx {
    tol: ToleranceConfig,
    seed: u64,
    perturb: Option<f64>,
    format: Format,
    export: Option<PathBuf>,
    out: Option<PathBuf>,
}

impl Ctx {
    fn load(&self, input: &KnotInput) -> Result<PolygonalKnot, Failure> {
        let k = match (&input.knot, &input.builtin) {
            (Some(path), _) => load_knot(path, &self.tol)?,
            (None, Some(name)) => builtin_knot(KnotFamily::parse(name)?, input.vertices)?,
            (None, None) => return Err(Failure::Validation("no knot given".into())),
        };
        match self.perturb {
            Some(mag) => {
                if !(mag.is_finite() && mag >= 0.0) {
                    return Err(Failure::Validation(format!("--perturb must be non-negative, got {mag}")));
                }
                Ok(perturb_to_generic(&k, mag * k.min_edge_length(), self.seed, &self.tol)?)
            }
            None => Ok(k),
        }
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn export_scene(&self, k: &PolygonalKnot, quads: &[Quadrisecant], theta: bool) -> Result<(), Failure> {
        if let Some(path) = &self.export {
            write_scene(path, &scene_of(k, quads, theta, self.seed, &self.tol))?;
        }
        Ok(())
    }
}

fn scene_of(k: &PolygonalKnot, quads: &[Quadrisecant], theta: bool, seed: u64, tol: &ToleranceConfig) -> Scene {
    let mut s = Scene::default();
    s.add("knot", k.vertices(), true);
    for q in quads {
        let lp = q.line_points();
        s.add("quadrisecants", &[lp[0].point, lp[3].point], false);
    }
    if theta {
        for q in quads {
            let lp = q.line_points();
            if let Ok(th) = build_theta(k, &lp[1], &lp[2], seed, tol) {
                for arc in [&th.alpha, &th.gamma] {
                    let mut l = arc.clone();
                    l.extend(th.beta.iter().rev().skip(1).take(th.beta.len().saturating_sub(2)));
                    s.add("theta", &l, true);
                }
            }
        }
    }
    s
}

fn write_scene(path: &Path, s: &Scene) -> Result<(), Failure> {
    let text = match path.extension().and_then(|e| e.to_str()) {
        Some("ply") => s.to_ply(),
        _ => s.to_obj(),
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize)]
struct QuadrisecantsReport {
    name: Option<String>,
    vertices: usize,
    genericity: GenericityReport,
    count: usize,
    upper_bound: usize,
    within_upper_bound: bool,
    pannwitz_floor: Option<bool>,
    quadrisecants: Vec<Quadrisecant>,
    essentiality: Vec<EssentialityReport>,
}

fn cmd_quadrisecants(ctx: &Ctx, input: &KnotInput, no_essential: bool) -> Result<(), Failure> {
    let k = ctx.load(input)?;
    let genericity = check_genericity(&k, &ctx.tol);
    if !genericity.is_generic {
        return Err(SecantError::NotGeneric(Box::new(genericity)).into());
    }
    let quads = enumerate_quadrisecants(&k, &ctx.tol)?;
    let (quads, essentiality): (Vec<Quadrisecant>, Vec<EssentialityReport>) = if no_essential || quads.is_empty() {
        (quads, Vec::new())
    } else {
        let cache = KnotGroupCache::new(&k, ctx.seed, SearchBudget::default());
        let opts = CertifyOptions { seed: ctx.seed, ..Default::default() };
        quads.par_iter().map(|q| essential_quadrisecant_check(&k, q, &cache, &opts, &ctx.tol)).unzip()
    };
    ctx.export_scene(&k, &quads, false)?;
    if ctx.format == Format::Csv {
        return ctx.emit(&quadrisecants_csv(&quads));
    }
    let upper_bound = quadrisecant_upper_bound(k.n());
    let report = QuadrisecantsReport {
        name: k.name().map(String::from),
        vertices: k.n(),
        genericity,
        count: quads.len(),
        upper_bound,
        within_upper_bound: quads.len() <= upper_bound,
        pannwitz_floor: pannwitz_lower_check(&k, &quads).ok(),
        quadrisecants: quads,
        essentiality,
    };
    ctx.emit(&json("quadrisecants", report))
}

fn cmd_approx(ctx: &Ctx, input: &KnotInput, out_dir: &Path) -> Result<(), Failure> {
    let k = ctx.load(input)?;
    let a = quadrisecant_approximation(&k, &ctx.tol)?;
    let verdict: ConjectureReport = conjecture_report(&a, &ctx.tol)?;
    std::fs::create_dir_all(out_dir)?;
    if let Some(ak) = a.knot() {
        let ak = ak.with_name(format!("approximation of {}", k.name().unwrap_or("knot")));
        std::fs::write(out_dir.join("approximation.json"), knot_to_json(&ak) + "\n")?;
    }
    let text = json("approx", &verdict);
    std::fs::write(out_dir.join("verdict.json"), &text)?;
    ctx.export_scene(&k, &a.quadrisecants, false)?;
    ctx.emit(&text)
}

fn measures_csv(m: &MeasureReport) -> String {
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    let rows = [
        ("length", m.length.to_string()),
        ("total_curvature", m.total_curvature.to_string()),
        ("thickness", m.thickness.value.to_string()),
        ("thickness_near_zero", m.thickness.near_zero.to_string()),
        ("ropelength", opt(m.ropelength)),
        ("distortion_lo", m.distortion.lo.to_string()),
        ("distortion_hi", m.distortion.hi.to_string()),
        ("distortion_converged", m.distortion.converged.to_string()),
        ("bridge_x", m.bridge_counts[0].map_or(String::new(), |b| b.to_string())),
        ("bridge_y", m.bridge_counts[1].map_or(String::new(), |b| b.to_string())),
        ("bridge_z", m.bridge_counts[2].map_or(String::new(), |b| b.to_string())),
        ("superbridge_estimate", m.superbridge_estimate.to_string()),
    ];
    let mut s = String::from("measure,value\n");
    for (k, v) in rows {
        s.push_str(&format!("{k},{v}\n"));
    }
    s
}

fn cmd_measures(ctx: &Ctx, input: &KnotInput) -> Result<(), Failure> {
    let k = ctx.load(input)?;
    let m = measure_report(&k, &ctx.tol);
    ctx.export_scene(&k, &[], false)?;
    match ctx.format {
        Format::Csv => ctx.emit(&measures_csv(&m)),
        Format::Json => ctx.emit(&json("measures", &m)),
    }
}

#[derive(Serialize)]
struct BoundsReport {
    bounds: Vec<BoundMinimum>,
}

fn cmd_bounds(ctx: &Ctx, kind: &str, grid: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = grid {
        if n == 0 {
            return Err(Failure::Validation("--grid needs at least one interval".into()));
        }
        return ctx.emit(&bound_grid_csv(n));
    }
    let kinds: Vec<BoundType> = if kind == "all" {
        BoundType::ALL.to_vec()
    } else {
        vec![BoundType::parse(kind).ok_or_else(|| Failure::Validation(format!("unknown bound type `{kind}`")))?]
    };
    let bounds: Vec<BoundMinimum> = kinds.into_iter().map(minimize_bound).collect();
    match ctx.format {
        Format::Csv => {
            let mut s = String::from("kind,value,r,s,t\n");
            for b in &bounds {
                let name = serde_json::to_value(b.kind).expect("kind serializes");
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    name.as_str().unwrap_or_default(),
                    b.value,
                    b.argmin[0],
                    b.argmin[1],
                    b.argmin[2]
                ));
            }
            ctx.emit(&s)
        }
        Format::Json => ctx.emit(&json("bounds", BoundsReport { bounds })),
    }
}

fn cmd_export(ctx: &Ctx, input: &KnotInput, theta: bool) -> Result<(), Failure> {
    let k = ctx.load(input)?;
    let quads = match enumerate_quadrisecants(&k, &ctx.tol) {
        Ok(q) => q,
        Err(e) => {
            eprintln!("warning: {e}; exporting the knot only");
            Vec::new()
        }
    };
    let s = scene_of(&k, &quads, theta, ctx.seed, &ctx.tol);
    match ctx.export.as_ref().or(ctx.out.as_ref()) {
        Some(p) => write_scene(p, &s),
        None => {
            print!("{}", s.to_obj());
            Ok(())
        }
    }
}

fn cmd_generate(ctx: &Ctx, family: &str, n: usize) -> Result<(), Failure> {
    let k = builtin_knot(KnotFamily::parse(family)?, n)?;
    let k = match ctx.perturb {
        Some(mag) => perturb_to_generic(&k, mag * k.min_edge_length(), ctx.seed, &ctx.tol)?,
        None => k,
    };
    ctx.emit(&(knot_to_json(&k) + "\n"))
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Other(e.to_string()))?;
    }
    let ctx = Ctx {
        tol: tolerance(&cli.tol)?,
        seed: cli.seed,
        perturb: cli.perturb,
        format: cli.format,
        export: cli.export,
        out: cli.out,
    };
    match &cli.command {
        Command::Quadrisecants { input, no_essential } => cmd_quadrisecants(&ctx, input, *no_essential),
        Command::Approx { input, out_dir } => cmd_approx(&ctx, input, out_dir),
        Command::Measures { input } => cmd_measures(&ctx, input),
        Command::Bounds { kind, grid } => cmd_bounds(&ctx, kind, *grid),
        Command::Export { input, theta } => cmd_export(&ctx, input, *theta),
        Command::Generate { family, vertices } => cmd_generate(&ctx, family, *vertices),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(3);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
