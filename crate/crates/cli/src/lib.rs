//! The `mvglue` command line: scene loading, the six commands and their reports.

pub mod report;

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mvglue_core::cohomology::{MvContext, Piece};
use mvglue_core::diffcoh::verify_diagram1;
use mvglue_core::exactalg::{Int, Rat};
use mvglue_core::gluing::Gluing;
use mvglue_core::scene::{bundled_source, format_rat, IntValue, Scene};
use mvglue_core::simplicial::CoeffRing;
use mvglue_core::{cohomology, Error};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub use report::{Report, SceneInfo};

#[derive(Debug, Parser)]
#[command(name = "mvglue", version, about = "Exact Mayer-Vietoris gluing of differential cohomology classes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Add wall-clock time to the report (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ring {
    Int,
    Rat,
    Ratmod,
}

impl From<Ring> for CoeffRing {
    fn from(r: Ring) -> Self {
        match r {
            Ring::Int => CoeffRing::Int,
            Ring::Rat => CoeffRing::Rat,
            Ring::Ratmod => CoeffRing::RatModInt,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PieceArg {
    #[value(name = "X", alias = "x")]
    X,
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "D", alias = "d")]
    D,
}

impl From<PieceArg> for Piece {
    fn from(p: PieceArg) -> Self {
        match p {
            PieceArg::X => Piece::X,
            PieceArg::A => Piece::A,
            PieceArg::B => Piece::B,
            PieceArg::D => Piece::D,
        }
    }
}

#[derive(Debug, Args)]
pub struct SceneArgs {
    /// Scene file, or the name of a bundled scene.
    #[arg(long)]
    pub scene: String,

    #[arg(long, allow_hyphen_values = true)]
    pub degree: i64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 100)]
    pub samples: usize,

    #[arg(long, env = "MVGLUE_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cohomology group of one piece.
    Cohomology {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, value_enum, default_value_t = Ring::Int)]
        ring: Ring,
        #[arg(long, value_enum, default_value_t = PieceArg::X)]
        piece: PieceArg,
    },
    /// Glue two named classes on A and B into a class on X.
    Glue {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        fa: String,
        #[arg(long)]
        fb: String,
        /// Write the scene back out with the glued class added.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Name of the glued class in the output scene.
        #[arg(long, default_value = "glued")]
        name: String,
    },
    /// Check the hexagon identities and exact sequences of the class group.
    VerifyDiagram1 {
        #[command(flatten)]
        scene: SceneArgs,
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long, value_enum, default_value_t = PieceArg::X)]
        piece: PieceArg,
    },
    /// Check exactness of the three Mayer-Vietoris rows and the commuting squares.
    VerifyDiagram2 {
        #[command(flatten)]
        scene: SceneArgs,
    },
    /// Check the lemmas behind the gluing theorem and the obstruction map.
    VerifyLemmas {
        #[command(flatten)]
        scene: SceneArgs,
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// The obstruction group W and the map from J_o to it.
    Obstruction {
        #[command(flatten)]
        scene: SceneArgs,
    },
}

/// A failure that ends the run before a report exists. Internal solver
/// failures get exit code 1, everything else is an input error.
#[derive(Debug)]
pub struct RunError {
    pub message: String,
    pub internal: bool,
}

impl RunError {
    fn input(message: String) -> Self {
        RunError { message, internal: false }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError { internal: matches!(e, Error::Internal(_)), message: e.to_string() }
    }
}

/// Exit status and rendered report.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    /// The run failed before producing a report; `output` is a message for stderr.
    pub aborted: bool,
}

/// Reads a scene from a path, falling back to the bundled scenes by name.
pub fn load_scene(arg: &str) -> Result<(Scene, SceneInfo), RunError> {
    let path = Path::new(arg);
    let (src, bundled) = if path.exists() {
        let src = std::fs::read_to_string(path).map_err(|e| RunError::input(format!("{arg}: {e}")))?;
        (src, false)
    } else if let Some(src) = bundled_source(arg) {
        (src.to_string(), true)
    } else {
        let names = mvglue_core::scene::bundled_names().join(", ");
        return Err(RunError::input(format!("{arg}: no such file, and not a bundled scene ({names})")));
    };
    let scene = Scene::parse(&src).map_err(|e| RunError::input(format!("{arg}: {e}")))?;
    let info = SceneInfo {
        name: scene.name().map(str::to_string),
        source: arg.to_string(),
        bundled,
        sha256: hex::encode(Sha256::digest(src.as_bytes())),
    };
    Ok((scene, info))
}

fn ints(v: &[Int]) -> Value {
    serde_json::to_value(
        v.iter()
            .map(|x| match i64::try_from(x) {
                Ok(n) => IntValue::Num(n),
                Err(_) => IntValue::Str(x.to_string()),
            })
            .collect::<Vec<_>>(),
    )
    .expect("integers serialize")
}

fn rats(v: &[Rat]) -> Value {
    Value::from(v.iter().map(format_rat).collect::<Vec<_>>())
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    match execute(cli) {
        Ok(mut report) => {
            if cli.timing {
                report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            let code = if report.passed { 0 } else { 1 };
            let output = match cli.format {
                Format::Json => report.to_json(),
                Format::Text if report.command == "cohomology" => {
                    format!("{}\n", report.result["group"].as_str().unwrap_or_default())
                }
                Format::Text => report.to_text(),
            };
            Outcome { code, output, aborted: false }
        }
        Err(e) => Outcome { code: if e.internal { 1 } else { 2 }, output: format!("error: {e}\n"), aborted: true },
    }
}

fn execute(cli: &Cli) -> Result<Report, RunError> {
    match &cli.command {
        Command::Cohomology { scene, ring, piece } => {
            let (s, info) = load_scene(&scene.scene)?;
            let k = scene.degree;
            let g = s.ctx.group((*piece).into(), (*ring).into(), k);
            let mut r = Report::new("cohomology", info, k);
            r.result = json!({
                "piece": Piece::from(*piece).to_string(),
                "ring": format!("{:?}", ring).to_lowercase(),
                "group": g.describe(),
                "rational_rank": g.rational_dim(),
                "orders": ints(&g.integer_orders()),
            });
            Ok(r)
        }
        Command::Glue { scene, fa, fb, out, name } => {
            let (s, info) = load_scene(&scene.scene)?;
            glue(&s, info, scene.degree, fa, fb, out.as_deref(), name)
        }
        Command::VerifyDiagram1 { scene, sampling, piece } => {
            let (s, info) = load_scene(&scene.scene)?;
            let mut r = Report::new("verify-diagram1", info, scene.degree);
            r.seed = Some(sampling.seed);
            r.samples = Some(sampling.samples);
            let space = s.ctx.space((*piece).into());
            r.result = json!({ "piece": Piece::from(*piece).to_string() });
            r.set_checks(verify_diagram1(space, scene.degree, sampling.samples, sampling.seed));
            Ok(r)
        }
        Command::VerifyDiagram2 { scene } => {
            let (s, info) = load_scene(&scene.scene)?;
            let mut r = Report::new("verify-diagram2", info, scene.degree);
            r.set_checks(cohomology::verify_diagram2(&s.ctx, scene.degree)?);
            Ok(r)
        }
        Command::VerifyLemmas { scene, sampling } => {
            let (s, info) = load_scene(&scene.scene)?;
            let g = Gluing::new(s.ctx.clone(), scene.degree)?;
            let mut r = Report::new("verify-lemmas", info, scene.degree);
            r.seed = Some(sampling.seed);
            r.samples = Some(sampling.samples);
            r.result = json!({
                "W": g.w.group.to_string(),
                "J_o": g.j_o.group().to_string(),
                "J_o/b(im d1*)": g.quotient.to_string(),
            });
            r.set_checks(g.verify_lemmas(sampling.samples, sampling.seed));
            Ok(r)
        }
        Command::Obstruction { scene } => {
            let (s, info) = load_scene(&scene.scene)?;
            let g = Gluing::new(s.ctx.clone(), scene.degree)?;
            let mut r = Report::new("obstruction", info, scene.degree);
            let images: Vec<Value> = g
                .j_o
                .generators()
                .iter()
                .map(|v| g.omega(v, None).map(|c| json!({ "v": ints(v), "omega": ints(&c.coords) })))
                .collect::<Result<_, _>>()?;
            r.result = json!({
                "W": g.w.group.to_string(),
                "W_invariant_factors": ints(g.w.group.invariant_factors()),
                "W_free_rank": g.w.group.free_rank(),
                "J_o": g.j_o.group().to_string(),
                "J_o/b(im d1*)": g.quotient.to_string(),
                "H^k(X;Z)": s.ctx.x.int(scene.degree).group().to_string(),
                "omega_on_generators": images,
            });
            Ok(r)
        }
    }
}

fn glue(
    s: &Scene,
    info: SceneInfo,
    k: i64,
    fa: &str,
    fb: &str,
    out: Option<&Path>,
    name: &str,
) -> Result<Report, RunError> {
    let (pa, a) = s.class(fa)?;
    let (pb, b) = s.class(fb)?;
    if (*pa, *pb) != (Piece::A, Piece::B) {
        return Err(RunError::input(format!("--fa must live on A and --fb on B, got {pa} and {pb}")));
    }
    if a.degree != k || b.degree != k {
        return Err(RunError::input(format!("classes have degrees {} and {}, expected {k}", a.degree, b.degree)));
    }
    let ctx: &Arc<MvContext> = &s.ctx;
    let g = Gluing::new(ctx.clone(), k)?;
    let mut r = Report::new("glue", info, k);
    match g.glue(a, b) {
        Err(Error::IncoherentPair(m)) => {
            r.set_checks(vec![mvglue_core::report::Check::fail("glue/coherent", m)]);
            Ok(r)
        }
        Err(e) => Err(e.into()),
        Ok((f, cert)) => {
            let hx = ctx.x.int(k);
            r.result = json!({
                "H^k(X;Z)": hx.group().to_string(),
                "characteristic_class": ints(&cert.characteristic_class),
                "v": ints(&cert.v),
                "w": ints(&cert.w),
                "v0": ints(&cert.v0),
                "theta": rats(&cert.theta),
                "class": serde_json::to_value(s.class_file(Piece::X, &f)?).expect("class serializes"),
            });
            let mut checks = vec![
                mvglue_core::report::Check::pass("glue/coherent"),
                mvglue_core::report::Check::new("glue/restricts-to-A", cert.restricts_to_a, None),
                mvglue_core::report::Check::new("glue/restricts-to-B", cert.restricts_to_b, None),
            ];
            if let Some(path) = out {
                let text = s.with_class(name, Piece::X, &f)?;
                std::fs::write(path, text).map_err(|e| RunError::input(format!("{}: {e}", path.display())))?;
                checks.push(mvglue_core::report::Check::pass("glue/written").with_detail(path.display().to_string()));
            }
            r.set_checks(checks);
            Ok(r)
        }
    }
}
