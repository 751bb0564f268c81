mod config;
mod report;

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hilbert_interp::charts::{
    atlas_comparison, chart_norm, equivalence_study, AtlasConfig, ChartAtlas, CircleFunction,
};
use hilbert_interp::compare::Comparison;
use hilbert_interp::couple::{norm_psi, two_point_counterexample, CoupleData};
use hilbert_interp::elliptic::{calculus_check, lifting_check, EllipticOperator};
use hilbert_interp::hormander::{
    hnorm, interpolation_identity_check, FourierDistribution, SmoothnessIndex,
};
use hilbert_interp::param::{parse, ParamFn};
use hilbert_interp::verify::{run_suite, Suite, SuiteConfig, Summary};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::load_config;
use crate::report::{write_records, Format};

const SEED_ENV: &str = "HILBERT_INTERP_SEED";

#[derive(Parser)]
#[command(
    name = "hilbert-interp",
    version,
    about = "Interpolation of Hilbert couples and refined Sobolev scales"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded verification suites and emit one record per check.
    Verify(VerifyArgs),
    /// Print a norm of serialized input.
    Norm(NormArgs),
    /// Compare the interpolation norm with the refined Sobolev norm of a torus distribution.
    InterpCheck(InterpArgs),
    /// Compare two routes to the same norm on the torus for `A = 1 - Δ`.
    TorusCheck(TorusArgs),
    /// Two-point operator table `t/s, norm_ratio, bound_ratio` as CSV.
    Counterexample(CounterexampleArgs),
    /// Chart norm against Fourier norm over single modes on the circle.
    ChartsStudy(ChartsArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Option<Suite>,
    #[arg(long)]
    seed: Option<u64>,
    /// TOML file with a `version` key; see the README for its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Multiplies every tolerance.
    #[arg(long)]
    tolerance_scale: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; 0 uses every logical core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Attach wall times to records.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormKind {
    /// Fourier norm of `H^{s,φ}` on the torus.
    Hs,
    /// Norm of a couple vector in `X_ψ`.
    Psi,
    /// `‖φ_s(1-Δ) u‖` on the torus.
    Calculus,
    /// Chart norm of a circle function.
    Chart,
}

#[derive(Args)]
struct IndexArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    s: f64,
    #[arg(long, default_value = "1")]
    phi: String,
}

#[derive(Args)]
struct NormArgs {
    #[arg(value_enum)]
    kind: NormKind,
    #[command(flatten)]
    index: IndexArgs,
    /// Interpolation parameter for `psi`.
    #[arg(long, default_value = "pow(0.5)")]
    psi: String,
    /// JSON input; `-` reads standard input.
    #[arg(long)]
    input: PathBuf,
    /// Atlas settings for `chart`, from the `[atlas]` table.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct InterpArgs {
    #[command(flatten)]
    index: IndexArgs,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum TorusKind {
    /// `‖φ_s(A)u‖` against the Fourier norm.
    Calculus,
    /// `‖Au‖` in `H^{s,φ}` against `‖u‖` in `H^{s+2,φ}`.
    Lifting,
}

#[derive(Args)]
struct TorusArgs {
    #[arg(value_enum)]
    kind: TorusKind,
    #[command(flatten)]
    index: IndexArgs,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long)]
    psi: String,
    /// Smaller eigenvalue `s > 1`.
    #[arg(long, default_value_t = 2.0)]
    s: f64,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1,10,100,1000,10000,100000,1000000"
    )]
    ratios: Vec<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ChartsArgs {
    #[command(flatten)]
    index: IndexArgs,
    #[arg(long, default_value_t = 16)]
    max_mode: i64,
    /// Also compare with the atlas rotated by this angle.
    #[arg(long, allow_hyphen_values = true)]
    rotation: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

enum Failure {
    Checks,
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: hilbert_interp::Error| e.to_string())
}

fn read_input(path: &Path) -> io::Result<String> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)?;
    } else {
        File::open(path)?.read_to_string(&mut text)?;
    }
    Ok(text)
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_input(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: invalid input: {e}", path.display())))
}

fn index(args: &IndexArgs) -> Result<SmoothnessIndex, Failure> {
    Ok(SmoothnessIndex::new(args.s, parse(&args.phi)?)?)
}

fn atlas_from(config: Option<&Path>) -> Result<AtlasConfig, Failure> {
    match config {
        Some(p) => Ok(load_config(p)
            .map_err(Failure::Usage)?
            .atlas
            .unwrap_or_default()),
        None => Ok(AtlasConfig::default()),
    }
}

fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn verify(args: VerifyArgs) -> CmdResult {
    let mut cfg = SuiteConfig::default();
    let mut format = Format::default();
    let mut output = None;
    if let Some(path) = &args.config {
        let file = load_config(path).map_err(Failure::Usage)?;
        cfg.suite = file.suite.unwrap_or(cfg.suite);
        cfg.seed = file.seed.unwrap_or(cfg.seed);
        cfg.timings = file.timings.unwrap_or(cfg.timings);
        cfg.counts = file.counts.unwrap_or(cfg.counts);
        cfg.tolerances = file.tolerances.unwrap_or(cfg.tolerances);
        cfg.atlas = file.atlas.unwrap_or(cfg.atlas);
        format = file.format.unwrap_or(format);
        output = file.output;
    }
    if let Ok(v) = std::env::var(SEED_ENV) {
        cfg.seed = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer")))?;
    }
    cfg.suite = args.suite.unwrap_or(cfg.suite);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.timings |= args.timings;
    if let Some(k) = args.tolerance_scale {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Failure::Usage(format!(
                "tolerance scale must be positive, got {k}"
            )));
        }
        cfg.tolerances = cfg.tolerances.scaled(k);
    }
    format = args.format.unwrap_or(format);
    output = args.output.or(output);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()?;
    let records = pool.install(|| run_suite(&cfg))?;
    write_records(open_output(output.as_deref())?, &records, format)?;
    let summary = Summary::of(&records);
    eprintln!("suite {} seed {}: {summary}", cfg.suite, cfg.seed);
    if summary.failed > 0 {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}

fn norm(args: NormArgs) -> CmdResult {
    let value = match args.kind {
        NormKind::Hs => hnorm(
            &parse_json::<FourierDistribution>(&args.input)?,
            &index(&args.index)?,
        )?,
        NormKind::Calculus => EllipticOperator::default().calculus_norm(
            &parse_json::<FourierDistribution>(&args.input)?,
            &index(&args.index)?,
        )?,
        NormKind::Psi => {
            let (c, u) = parse_json::<CoupleData>(&args.input)?.into_parts()?;
            norm_psi(&c, &parse(&args.psi)?, &u)?
        }
        NormKind::Chart => {
            let f = CircleFunction::spectral(parse_json::<FourierDistribution>(&args.input)?)?;
            let atlas = ChartAtlas::new(atlas_from(args.config.as_deref())?)?;
            chart_norm(&atlas, &f, &index(&args.index)?)?.value
        }
    };
    println!("{}", sig15(value));
    Ok(())
}

fn interp_check(args: InterpArgs) -> CmdResult {
    let u: FourierDistribution = parse_json(&args.input)?;
    let cmp = interpolation_identity_check(&u, &index(&args.index)?, args.eps, args.delta)?;
    print_comparison(&cmp, args.tolerance)
}

fn torus_check(args: TorusArgs) -> CmdResult {
    let u: FourierDistribution = parse_json(&args.input)?;
    let idx = index(&args.index)?;
    let cmp = match args.kind {
        TorusKind::Calculus => calculus_check(&u, &idx)?,
        TorusKind::Lifting => lifting_check(&EllipticOperator::default(), &u, &idx)?,
    };
    print_comparison(&cmp, args.tolerance)
}

fn print_comparison(cmp: &Comparison, tolerance: f64) -> CmdResult {
    let ok = cmp.agrees(tolerance);
    println!("lhs {}", sig15(cmp.lhs));
    println!("rhs {}", sig15(cmp.rhs));
    println!("rel_diff {}", sig15(cmp.rel_diff()));
    println!("verdict {}", if ok { "pass" } else { "fail" });
    if ok {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn counterexample(args: CounterexampleArgs) -> CmdResult {
    let psi: ParamFn = parse(&args.psi)?;
    let mut w = csv::Writer::from_writer(open_output(args.output.as_deref())?);
    w.write_record(["t_over_s", "norm_ratio", "bound_ratio"])?;
    for &q in &args.ratios {
        let tp = two_point_counterexample(&psi, args.s, args.s * q)?;
        w.write_record([sig15(q), sig15(tp.norm_ratio), sig15(tp.bound_ratio)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct StudyOutput {
    s: f64,
    phi: String,
    modes: Vec<i64>,
    ratios: Vec<f64>,
    ratio_min: f64,
    ratio_max: f64,
    spread: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rotated_spread: Option<f64>,
}

fn charts_study(args: ChartsArgs) -> CmdResult {
    if args.max_mode < 0 {
        return Err(Failure::Usage("max mode must be non-negative".into()));
    }
    let cfg = atlas_from(args.config.as_deref())?;
    let atlas = ChartAtlas::new(cfg)?;
    let idx = index(&args.index)?;
    let modes: Vec<i64> = (0..=args.max_mode).collect();
    let family = modes
        .iter()
        .map(|&k| CircleFunction::mode(k, Complex64::new(1.0, 0.0)))
        .collect::<Result<Vec<_>, _>>()?;
    let st = equivalence_study(&atlas, &family, &idx)?;
    let rotated_spread = match args.rotation {
        Some(r) => {
            let other = ChartAtlas::new(AtlasConfig {
                centers: cfg.centers.map(|c| c + r),
                ..cfg
            })?;
            Some(atlas_comparison(&atlas, &other, &family, &idx)?.spread())
        }
        None => None,
    };
    let out = StudyOutput {
        s: idx.s,
        phi: idx.phi.to_string(),
        modes,
        spread: st.spread(),
        ratio_min: st.ratio_min,
        ratio_max: st.ratio_max,
        ratios: st.ratios,
        rotated_spread,
    };
    println!("{}", serde_json::to_string(&out)?);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Norm(a) => norm(a),
        Command::InterpCheck(a) => interp_check(a),
        Command::TorusCheck(a) => torus_check(a),
        Command::Counterexample(a) => counterexample(a),
        Command::ChartsStudy(a) => charts_study(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
