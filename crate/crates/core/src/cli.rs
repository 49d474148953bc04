//! Command-line workbench: build complexes and codes, take products,
//! measure parameters, decode syndromes and run Monte Carlo experiments.
//!
//! Every report embeds the fully resolved configuration plus the tool
//! version, artifacts are written atomically (temp file + rename), and all
//! randomness flows from the `--seed` argument, so identical invocations
//! produce byte-identical outputs.

use crate::chain::{self, ChainComplex};
use crate::classical::{self, BipartiteCode};
use crate::decoders::{self, ComponentDecoder, ErrorType};
use crate::gf2;
use crate::lsv;
use crate::product::{self, ProductCode};
use crate::simplicial;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Message(String),
    #[error("bad --budget value `{0}`: expected an integer or 2^k")]
    BadBudget(String),
}

macro_rules! cli_bail {
    ($($arg:tt)*) => {
        return Err(CliError::Message(format!($($arg)*)))
    };
}

#[derive(Parser)]
#[command(name = "qldpc", version = VERSION, about = "chain-complex CSS code workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a complex or a classical code and write it to a file.
    #[command(subcommand)]
    Build(BuildCommand),
    /// Combine a 2-complex with a classical code into a product code.
    Product(ProductArgs),
    /// Measure N, K, D_X, D_Z of a product code.
    Params(ParamsArgs),
    /// Decode one syndrome of a product code.
    Decode(DecodeArgs),
    /// Seeded Monte Carlo decoding trials.
    Simulate(SimulateArgs),
    /// Face counts, degree statistics and validation of a stored object.
    Inspect(InspectArgs),
}

#[derive(Subcommand)]
enum BuildCommand {
    /// LSV quotient complex from Cartwright-Steger generators.
    Lsv(BuildLsvArgs),
    /// Classical component code (path or random regular LDPC).
    Code(BuildCodeArgs),
    /// Triangulated torus fixture.
    Torus(BuildTorusArgs),
}

#[derive(Args)]
struct BuildLsvArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    e: usize,
    /// Coefficients of p_y over F_q, constant term first, e.g. "1,1,1".
    #[arg(long)]
    poly: String,
    #[arg(long, default_value_t = 200_000)]
    max_size: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BuildCodeArgs {
    #[arg(long, value_enum)]
    kind: CodeKindArg,
    /// Path length (bits) for --kind path.
    #[arg(long)]
    m: Option<usize>,
    /// Bits for --kind ldpc.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dv: Option<usize>,
    #[arg(long)]
    dc: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeKindArg {
    Path,
    Ldpc,
}

#[derive(Args)]
struct BuildTorusArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    c: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProductArgs {
    /// Component complex (chain or simplicial JSON).
    #[arg(long)]
    complex: PathBuf,
    /// Component code in matrix text format.
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ParamsArgs {
    /// Product code file.
    code: PathBuf,
    /// Enumeration budget, integer or 2^k.
    #[arg(long, default_value = "2^22")]
    budget: String,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long = "type", value_enum)]
    error_type: ErrorTypeArg,
    /// Syndrome in bit-vector text format.
    #[arg(long)]
    syndrome: PathBuf,
    #[arg(long, value_enum, default_value_t = ComponentArg::Local)]
    component: ComponentArg,
    /// Correction output (bit-vector text); stdout JSON summary either way.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Product code file (X/Z simulation)...
    #[arg(long, conflicts_with = "complex")]
    code: Option<PathBuf>,
    /// ...or a bare 2-complex for the local coboundary decoders.
    #[arg(long)]
    complex: Option<PathBuf>,
    #[arg(long = "type", value_enum)]
    error_type: SimTypeArg,
    #[arg(long)]
    weight: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ComponentArg::Local)]
    component: ComponentArg,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ErrorTypeArg {
    X,
    Z,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SimTypeArg {
    X,
    Z,
    /// Local coboundary decoder on a bare complex.
    Local,
    /// Single-edge decoder on a bare complex.
    SingleEdge,
}

#[derive(Clone, Copy, PartialEq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ComponentArg {
    Local,
    SingleEdge,
}

impl From<ComponentArg> for ComponentDecoder {
    fn from(c: ComponentArg) -> ComponentDecoder {
        match c {
            ComponentArg::Local => ComponentDecoder::LocalCoboundary,
            ComponentArg::SingleEdge => ComponentDecoder::SingleEdge,
        }
    }
}

pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            let reason = json!({ "error": e.to_string() });
            eprintln!("{reason}");
            1
        }
    }
}

/// Entry point for tests: run with explicit argv.
pub fn run_args<I, S>(argv: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Message(e.to_string()))?;
    run(cli)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build(BuildCommand::Lsv(args)) => build_lsv(args),
        Command::Build(BuildCommand::Code(args)) => build_code(args),
        Command::Build(BuildCommand::Torus(args)) => build_torus(args),
        Command::Product(args) => do_product(args),
        Command::Params(args) => do_params(args),
        Command::Decode(args) => do_decode(args),
        Command::Simulate(args) => do_simulate(args),
        Command::Inspect(args) => do_inspect(args),
    }
}

/// Atomic write: temp file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn parse_budget(text: &str) -> Result<u64, CliError> {
    if let Some(exp) = text.strip_prefix("2^") {
        let k: u32 = exp.parse().map_err(|_| CliError::BadBudget(text.into()))?;
        if k >= 64 {
            return Err(CliError::BadBudget(text.into()));
        }
        return Ok(1 << k);
    }
    text.parse().map_err(|_| CliError::BadBudget(text.into()))
}

fn load_complex(path: &Path) -> Result<ChainComplex, CliError> {
    let text = std::fs::read_to_string(path)?;
    // Simplicial files carry a "vertices" key; chain files a "dimension".
    if text.contains("\"vertices\"") {
        match simplicial::simplicial_from_json(&text) {
            Ok(s) => return Ok(s.into_chain()),
            Err(e) => cli_bail!("{}: {e}", path.display()),
        }
    }
    chain::complex_from_json(&text)
        .map_err(|e| CliError::Message(format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> Result<BipartiteCode, CliError> {
    let text = std::fs::read_to_string(path)?;
    let h = gf2::matrix_from_text(&text)
        .map_err(|e| CliError::Message(format!("{}: {e}", path.display())))?;
    BipartiteCode::new(h, classical::CodeKind::Custom, 0)
        .map_err(|e| CliError::Message(format!("{}: {e}", path.display())))
}

fn load_product(path: &Path) -> Result<ProductCode, CliError> {
    let text = std::fs::read_to_string(path)?;
    product::product_from_json(&text)
        .map_err(|e| CliError::Message(format!("{}: {e}", path.display())))
}

fn build_lsv(args: BuildLsvArgs) -> Result<(), CliError> {
    let coeffs: Vec<u64> = args
        .poly
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Message(format!("bad --poly `{}`", args.poly)))?;
    let ctx = lsv::build_structure(args.q, args.d, args.e, &coeffs)
        .map_err(|e| CliError::Message(e.to_string()))?;
    let (complex, info) = lsv::build_quotient_complex(&ctx, args.max_size)
        .map_err(|e| CliError::Message(e.to_string()))?;
    write_atomic(&args.out, &simplicial::simplicial_to_json(&complex))?;
    let summary = json!({
        "version": VERSION,
        "config": {
            "command": "build lsv",
            "q": args.q, "d": args.d, "e": args.e,
            "poly": coeffs, "max_size": args.max_size,
            "out": args.out.display().to_string(),
        },
        "group_size": info.group_size,
        "generators": info.generator_count,
        "bfs_depth": info.bfs_depth,
        "face_counts": [complex.face_count(0), complex.face_count(1), complex.face_count(2)],
    });
    println!("{summary:#}");
    Ok(())
}

fn build_code(args: BuildCodeArgs) -> Result<(), CliError> {
    let (code, config) = match args.kind {
        CodeKindArg::Path => {
            let Some(m) = args.m else {
                cli_bail!("--kind path needs --m");
            };
            let code = classical::path_code(m).map_err(|e| CliError::Message(e.to_string()))?;
            (
                code,
                json!({ "command": "build code", "kind": "path", "m": m }),
            )
        }
        CodeKindArg::Ldpc => {
            let (Some(n), Some(dv), Some(dc)) = (args.n, args.dv, args.dc) else {
                cli_bail!("--kind ldpc needs --n, --dv, --dc");
            };
            let code = classical::random_regular_ldpc(n, dv, dc, args.seed)
                .map_err(|e| CliError::Message(e.to_string()))?;
            (
                code,
                json!({
                    "command": "build code", "kind": "ldpc",
                    "n": n, "dv": dv, "dc": dc, "seed": args.seed,
                }),
            )
        }
    };
    write_atomic(&args.out, &gf2::matrix_to_text(code.h()))?;
    let summary = json!({
        "version": VERSION,
        "config": config,
        "bits": code.n_bits(),
        "checks": code.n_checks(),
        "k": code.k(),
        "decoder_radius": code.decoder_radius(),
    });
    println!("{summary:#}");
    Ok(())
}

fn build_torus(args: BuildTorusArgs) -> Result<(), CliError> {
    let torus =
        simplicial::fixture_torus(args.r, args.c).map_err(|e| CliError::Message(e.to_string()))?;
    write_atomic(&args.out, &simplicial::simplicial_to_json(&torus))?;
    let summary = json!({
        "version": VERSION,
        "config": { "command": "build torus", "r": args.r, "c": args.c },
        "face_counts": [torus.face_count(0), torus.face_count(1), torus.face_count(2)],
    });
    println!("{summary:#}");
    Ok(())
}

fn do_product(args: ProductArgs) -> Result<(), CliError> {
    let x = load_complex(&args.complex)?;
    let y = load_code(&args.code)?;
    let p = product::build_product_sparse(&x, &y).map_err(|e| CliError::Message(e.to_string()))?;
    write_atomic(&args.out, &product::product_to_json(&p))?;
    let summary = json!({
        "version": VERSION,
        "config": {
            "command": "product",
            "complex": args.complex.display().to_string(),
            "code": args.code.display().to_string(),
            "out": args.out.display().to_string(),
        },
        "n": p.n_qubits(),
        "checks_x": p.layout().n_grade0(),
        "checks_z": p.layout().n_grade2(),
    });
    println!("{summary:#}");
    Ok(())
}

fn do_params(args: ParamsArgs) -> Result<(), CliError> {
    let budget = parse_budget(&args.budget)?;
    let p = load_product(&args.code)?;
    let report = product::product_params(&p, budget);
    let audit = product::weight_audit(&p);
    let out = json!({
        "version": VERSION,
        "config": {
            "command": "params",
            "code": args.code.display().to_string(),
            "budget": budget,
        },
        "params": report,
        "weight_audit": audit,
    });
    let text = format!("{out:#}");
    if let Some(path) = &args.report {
        write_atomic(path, &text)?;
    }
    println!("{text}");
    Ok(())
}

fn do_decode(args: DecodeArgs) -> Result<(), CliError> {
    let p = load_product(&args.code)?;
    let syndrome_text = std::fs::read_to_string(&args.syndrome)?;
    let syndrome = gf2::vector_from_text(&syndrome_text)
        .map_err(|e| CliError::Message(format!("{}: {e}", args.syndrome.display())))?;
    let outcome = match args.error_type {
        ErrorTypeArg::X => decoders::x_decode(&p, &syndrome),
        ErrorTypeArg::Z => decoders::z_decode(&p, &syndrome, args.component.into()),
    }
    .map_err(|e| CliError::Message(e.to_string()))?;
    if let Some(out) = &args.out {
        write_atomic(out, &gf2::vector_to_text(&outcome.correction))?;
    }
    let summary = json!({
        "version": VERSION,
        "config": {
            "command": "decode",
            "code": args.code.display().to_string(),
            "type": args.error_type,
            "syndrome": args.syndrome.display().to_string(),
        },
        "status": outcome.status,
        "iterations": outcome.iterations,
        "syndrome_weights": outcome.syndrome_weights,
        "correction_weight": outcome.correction.weight(),
    });
    println!("{summary:#}");
    Ok(())
}

fn do_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let (report, target) = match args.error_type {
        SimTypeArg::X | SimTypeArg::Z => {
            let Some(code_path) = &args.code else {
                cli_bail!("--type x/z simulates a product code; pass --code");
            };
            let p = load_product(code_path)?;
            let which = match args.error_type {
                SimTypeArg::X => ErrorType::X,
                _ => ErrorType::Z,
            };
            let report = decoders::simulate_product(
                &p,
                which,
                args.weight,
                args.trials,
                args.seed,
                args.component.into(),
            )
            .map_err(|e| CliError::Message(e.to_string()))?;
            (report, code_path.display().to_string())
        }
        SimTypeArg::Local | SimTypeArg::SingleEdge => {
            let Some(complex_path) = &args.complex else {
                cli_bail!("--type local/single-edge simulates a bare complex; pass --complex");
            };
            let x = load_complex(complex_path)?;
            let report = decoders::simulate_local(
                &x,
                matches!(args.error_type, SimTypeArg::SingleEdge),
                args.weight,
                args.trials,
                args.seed,
            );
            (report, complex_path.display().to_string())
        }
    };
    let out = json!({
        "version": VERSION,
        "config": {
            "command": "simulate",
            "target": target,
            "type": args.error_type,
            "weight": args.weight,
            "trials": args.trials,
            "seed": args.seed,
            "component": args.component,
        },
        "trials": report.trials,
        "successes": report.successes,
        "stalls": report.stalls,
        "equivalence_failures": report.equivalence_failures,
        "mean_iterations": report.mean_iterations,
    });
    let text = format!("{out:#}");
    if let Some(path) = &args.report {
        write_atomic(path, &text)?;
    }
    println!("{text}");
    Ok(())
}

fn do_inspect(args: InspectArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.path)?;
    let out = if text.contains("\"vertices\"") {
        let s = simplicial::simplicial_from_json(&text)
            .map_err(|e| CliError::Message(e.to_string()))?;
        let validation = s.chain().validate();
        json!({
            "version": VERSION,
            "config": { "command": "inspect", "path": args.path.display().to_string() },
            "kind": "simplicial",
            "dimension": s.dimension(),
            "face_counts": (0..=s.dimension()).map(|p| s.face_count(p)).collect::<Vec<_>>(),
            "degree_stats": s.degree_stats(),
            "valid": validation.is_ok(),
            "violation": validation.err().map(|v| format!("grade {} face {}", v.grade, v.face)),
        })
    } else if text.contains("\"x_face_counts\"") {
        let p = product::product_from_json(&text).map_err(|e| CliError::Message(e.to_string()))?;
        json!({
            "version": VERSION,
            "config": { "command": "inspect", "path": args.path.display().to_string() },
            "kind": "product",
            "n": p.n_qubits(),
            "k": p.k(),
            "valid": p.complex().validate().is_ok(),
        })
    } else {
        let x = chain::complex_from_json(&text).map_err(|e| CliError::Message(e.to_string()))?;
        let validation = x.validate();
        json!({
            "version": VERSION,
            "config": { "command": "inspect", "path": args.path.display().to_string() },
            "kind": "chain",
            "dimension": x.dimension(),
            "face_counts": x.face_counts(),
            "valid": validation.is_ok(),
            "violation": validation.err().map(|v| format!("grade {} face {}", v.grade, v.face)),
        })
    };
    println!("{out:#}");
    Ok(())
}

#[derive(Args)]
struct InspectArgs {
    path: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<(), CliError> {
        run_args(std::iter::once("qldpc").chain(args.iter().copied()))
    }

    #[test]
    fn budget_parsing() {
        assert_eq!(parse_budget("1024").unwrap(), 1024);
        assert_eq!(parse_budget("2^22").unwrap(), 1 << 22);
        assert!(parse_budget("2^99").is_err());
        assert!(parse_budget("abc").is_err());
    }

    #[test]
    fn torus_path_product_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let torus = dir.path().join("t.json");
        let code = dir.path().join("y.mtx");
        let prod = dir.path().join("p.json");
        run(&[
            "build",
            "torus",
            "--r",
            "3",
            "--c",
            "3",
            "--out",
            torus.to_str().unwrap(),
        ])
        .unwrap();
        run(&[
            "build",
            "code",
            "--kind",
            "path",
            "--m",
            "2",
            "--out",
            code.to_str().unwrap(),
        ])
        .unwrap();
        run(&[
            "product",
            "--complex",
            torus.to_str().unwrap(),
            "--code",
            code.to_str().unwrap(),
            "--out",
            prod.to_str().unwrap(),
        ])
        .unwrap();
        run(&["inspect", prod.to_str().unwrap()]).unwrap();
        run(&["params", prod.to_str().unwrap(), "--budget", "2^22"]).unwrap();
    }

    #[test]
    fn simulate_reports_are_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let torus = dir.path().join("t.json");
        let code = dir.path().join("y.mtx");
        let prod = dir.path().join("p.json");
        let rep1 = dir.path().join("r1.json");
        let rep2 = dir.path().join("r2.json");
        run(&[
            "build",
            "torus",
            "--r",
            "3",
            "--c",
            "3",
            "--out",
            torus.to_str().unwrap(),
        ])
        .unwrap();
        run(&[
            "build",
            "code",
            "--kind",
            "path",
            "--m",
            "3",
            "--out",
            code.to_str().unwrap(),
        ])
        .unwrap();
        run(&[
            "product",
            "--complex",
            torus.to_str().unwrap(),
            "--code",
            code.to_str().unwrap(),
            "--out",
            prod.to_str().unwrap(),
        ])
        .unwrap();
        for rep in [&rep1, &rep2] {
            run(&[
                "simulate",
                "--code",
                prod.to_str().unwrap(),
                "--type",
                "z",
                "--weight",
                "2",
                "--trials",
                "25",
                "--seed",
                "7",
                "--report",
                rep.to_str().unwrap(),
            ])
            .unwrap();
        }
        let a = std::fs::read(&rep1).unwrap();
        let b = std::fs::read(&rep2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn decode_subcommand_runs() {
        let dir = tempfile::tempdir().unwrap();
        let torus = dir.path().join("t.json");
        let code = dir.path().join("y.mtx");
        let prod = dir.path().join("p.json");
        let syn = dir.path().join("s.txt");
        let corr = dir.path().join("c.txt");
        run(&[
            "build",
            "torus",
            "--r",
            "3",
            "--c",
            "3",
            "--out",
            torus.to_str().unwrap(),
        ])
        .unwrap();
        run(&[
            "build",
            "code",
            "--kind",
            "path",
            "--m",
            "2",
            "--out",
            code.to_str().unwrap(),
        ])
        .unwrap();
        run(&[
            "product",
            "--complex",
            torus.to_str().unwrap(),
            "--code",
            code.to_str().unwrap(),
            "--out",
            prod.to_str().unwrap(),
        ])
        .unwrap();
        // Zero syndrome over the Z checks (18 triangles x 2 path bits).
        std::fs::write(&syn, "36\n").unwrap();
        run(&[
            "decode",
            "--code",
            prod.to_str().unwrap(),
            "--type",
            "z",
            "--syndrome",
            syn.to_str().unwrap(),
            "--out",
            corr.to_str().unwrap(),
        ])
        .unwrap();
        let text = std::fs::read_to_string(&corr).unwrap();
        let v = gf2::vector_from_text(&text).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn ldpc_build_is_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let c1 = dir.path().join("c1.mtx");
        let c2 = dir.path().join("c2.mtx");
        for c in [&c1, &c2] {
            run(&[
                "build",
                "code",
                "--kind",
                "ldpc",
                "--n",
                "12",
                "--dv",
                "3",
                "--dc",
                "4",
                "--seed",
                "7",
                "--out",
                c.to_str().unwrap(),
            ])
            .unwrap();
        }
        assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
    }
}
