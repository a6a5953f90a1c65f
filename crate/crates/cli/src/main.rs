use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use chaintwist::certify::{
    certify_orbit, fathi_certificate, fathi_word, hyperbolicity_report, symbolic_orbit,
    CertificateOutcome, HyperbolicityReport, SymbolicOrbit,
};
use chaintwist::homology::{mapping_torus_h1, surgered_h1, FramingConvention};
use chaintwist::linalg::AbelianGroupInvariant;
use chaintwist::surgery::{
    chain_surgery_h1, compile_contact_diagram, tightness_verdict, Slope, SurgerySpec,
    TightnessVerdict, VerdictKind,
};
use chaintwist::words::{build_monodromy, CurveId, FamilyParams, SurfaceSpec, TwistWord};

const EXIT_INVALID: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

const EXPONENT_NOTE: &str =
    "f already contains one t_a1, so family exponent m corresponds to t_gamma^(m-1) f";

#[derive(Parser)]
#[command(
    name = "chaintwist",
    version,
    about = "Certificates and surgery data for chain-twist monodromies"
)]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the JSON document here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filling-orbit pseudo-Anosov certificate.
    Certify(OrbitArgs),
    /// Symbolic orbit of a curve.
    Orbit(OrbitArgs),
    /// First homology of the bundle and, with --r, of the surgered manifold.
    Homology(HomologyArgs),
    /// Contact surgery diagram.
    Compile(SurgeryArgs),
    /// Tightness verdict and hyperbolicity report.
    Verdict(SurgeryArgs),
    /// Verdicts and homology over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long)]
    g: u32,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    n: i64,
    /// Iterate this word instead of t_a1 t_a2 ... t_a2g t_a(2g+1)^n.
    #[arg(long)]
    word: Option<String>,
    #[arg(long, default_value = "a1", value_parser = parse_curve_name)]
    gamma: u32,
    /// Defaults to 2g - 1.
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args)]
struct Family {
    #[arg(long)]
    g: u32,
    #[arg(long, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
}

impl Family {
    fn params(&self) -> FamilyParams {
        FamilyParams::new(self.g, self.m, self.n)
    }
}

#[derive(Args)]
struct HomologyArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<Slope>,
    #[arg(long, default_value_t = FramingConvention::BindingPage)]
    framing: FramingConvention,
}

#[derive(Args)]
struct SurgeryArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long, allow_hyphen_values = true)]
    r: Slope,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    g: u32,
    /// Inclusive range `A..B` or a single integer.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    m: RangeInclusive<i64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    n: RangeInclusive<i64>,
    /// Comma-separated slopes.
    #[arg(
        long,
        allow_hyphen_values = true,
        value_delimiter = ',',
        required = true
    )]
    r_list: Vec<Slope>,
    #[arg(long, default_value_t = FramingConvention::BindingPage)]
    framing: FramingConvention,
}

fn parse_curve_name(s: &str) -> Result<u32, String> {
    s.strip_prefix('a')
        .unwrap_or(s)
        .parse::<u32>()
        .ok()
        .filter(|&i| i >= 1)
        .ok_or_else(|| format!("expected a curve name like a1, got {s:?}"))
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let bad = |e: std::num::ParseIntError| format!("bad range {s:?}: {e}");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.parse().map_err(bad)?, b.parse().map_err(bad)?),
        None => {
            let v = s.parse().map_err(bad)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

enum Failure {
    Invalid(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

/// A JSON document and whether it reports an inconclusive result.
struct Report {
    body: serde_json::Value,
    inconclusive: bool,
}

impl Report {
    fn ok(v: impl Serialize) -> Result<Self, Failure> {
        Ok(Report {
            body: serde_json::to_value(v)?,
            inconclusive: false,
        })
    }
}

#[derive(Serialize)]
struct CertifyOutput {
    #[serde(flatten)]
    outcome: CertificateOutcome,
    exponent_note: &'static str,
}

#[derive(Serialize)]
struct HomologyOutput {
    g: u32,
    m: i64,
    n: i64,
    mapping_torus: AbelianGroupInvariant,
    #[serde(skip_serializing_if = "Option::is_none")]
    surgery: Option<SurgeryHomology>,
}

#[derive(Serialize)]
struct SurgeryHomology {
    r: Slope,
    framing: FramingConvention,
    h1: AbelianGroupInvariant,
    /// Same group from the integer-chain presentation.
    chain_route_agrees: bool,
}

#[derive(Serialize)]
struct VerdictOutput {
    g: u32,
    m: i64,
    n: i64,
    r: Slope,
    verdict: TightnessVerdict,
    hyperbolicity: Option<HyperbolicityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hyperbolicity_note: Option<String>,
}

#[derive(Serialize)]
struct SweepRow {
    m: i64,
    n: i64,
    r: Slope,
    verdict: VerdictKind,
    h1: AbelianGroupInvariant,
    bundle_hyperbolic: Option<chaintwist::certify::BundleHyperbolic>,
}

fn word_or_family(args: &OrbitArgs) -> Result<TwistWord, Failure> {
    match &args.word {
        Some(text) => Ok(TwistWord::parse(SurfaceSpec::closed(args.g)?, text)?),
        None => Ok(fathi_word(args.g, args.n)?),
    }
}

fn gamma_of(args: &OrbitArgs, w: &TwistWord) -> Result<CurveId, Failure> {
    Ok(w.surface().curve(args.gamma)?)
}

fn iterations(args: &OrbitArgs) -> usize {
    args.max_iters
        .unwrap_or((2 * args.g as usize).saturating_sub(1))
}

fn certify(args: &OrbitArgs) -> Result<Report, Failure> {
    let outcome = match &args.word {
        None if args.gamma == 1 && args.max_iters.is_none() => fathi_certificate(args.g, args.n)?,
        _ => {
            let w = word_or_family(args)?;
            certify_orbit(&w, gamma_of(args, &w)?, iterations(args))?
        }
    };
    let inconclusive = !outcome.is_certified();
    Ok(Report {
        body: serde_json::to_value(CertifyOutput {
            outcome,
            exponent_note: EXPONENT_NOTE,
        })?,
        inconclusive,
    })
}

fn orbit(args: &OrbitArgs) -> Result<Report, Failure> {
    let w = word_or_family(args)?;
    let o: SymbolicOrbit = symbolic_orbit(&w, gamma_of(args, &w)?, iterations(args))?;
    let inconclusive = !o.is_resolved();
    Ok(Report {
        body: serde_json::to_value(o)?,
        inconclusive,
    })
}

fn surgery_homology(
    w: &TwistWord,
    r: Slope,
    framing: FramingConvention,
) -> Result<SurgeryHomology, Failure> {
    let h1 = surgered_h1(w, r, framing);
    let chain = chain_surgery_h1(w, r, framing)?;
    Ok(SurgeryHomology {
        r,
        framing,
        chain_route_agrees: chain == h1,
        h1,
    })
}

fn homology(args: &HomologyArgs) -> Result<Report, Failure> {
    let params = args.family.params();
    let w = build_monodromy(params)?;
    let surgery = args
        .r
        .map(|r| surgery_homology(&w, r, args.framing))
        .transpose()?;
    Report::ok(HomologyOutput {
        g: params.g,
        m: params.m,
        n: params.n,
        mapping_torus: mapping_torus_h1(&w),
        surgery,
    })
}

fn compile(args: &SurgeryArgs) -> Result<Report, Failure> {
    let diagram = compile_contact_diagram(SurgerySpec {
        params: args.family.params(),
        r: args.r,
    })?;
    Report::ok(diagram)
}

fn verdict(args: &SurgeryArgs) -> Result<Report, Failure> {
    let params = args.family.params();
    if params.g < 1 {
        return Err(Failure::Invalid(format!(
            "genus must be at least 1, got {}",
            params.g
        )));
    }
    let (hyperbolicity, hyperbolicity_note) = if params.g >= 2 {
        (Some(hyperbolicity_report(params, args.r)?), None)
    } else {
        (
            None,
            Some("hyperbolicity is only reported for g >= 2".to_string()),
        )
    };
    Report::ok(VerdictOutput {
        g: params.g,
        m: params.m,
        n: params.n,
        r: args.r,
        verdict: tightness_verdict(params.g, args.r, params.m, params.n),
        hyperbolicity,
        hyperbolicity_note,
    })
}

fn sweep(args: &SweepArgs) -> Result<Report, Failure> {
    SurfaceSpec::closed(args.g)?;
    let mut slopes = args.r_list.clone();
    slopes.sort();
    let grid: Vec<(i64, i64, Slope)> = args
        .m
        .clone()
        .flat_map(|m| args.n.clone().map(move |n| (m, n)))
        .flat_map(|(m, n)| slopes.iter().map(move |&r| (m, n, r)))
        .collect();
    let rows: Result<Vec<SweepRow>, chaintwist::Error> = grid
        .par_iter()
        .map(|&(m, n, r)| {
            let params = FamilyParams::new(args.g, m, n);
            let w = build_monodromy(params)?;
            let bundle_hyperbolic = if args.g >= 2 {
                Some(hyperbolicity_report(params, r)?.bundle_hyperbolic)
            } else {
                None
            };
            Ok(SweepRow {
                m,
                n,
                r,
                verdict: tightness_verdict(args.g, r, m, n).kind,
                h1: surgered_h1(&w, r, args.framing),
                bundle_hyperbolic,
            })
        })
        .collect();
    Report::ok(rows?)
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Certify(a) => certify(a),
        Command::Orbit(a) => orbit(a),
        Command::Homology(a) => homology(a),
        Command::Compile(a) => compile(a),
        Command::Verdict(a) => verdict(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn emit(cli: &Cli, body: &serde_json::Value) -> io::Result<()> {
    let mut text = if cli.pretty {
        serde_json::to_string_pretty(body)?
    } else {
        serde_json::to_string(body)?
    };
    text.push('\n');
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report.body) {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            if report.inconclusive {
                ExitCode::from(EXIT_INCONCLUSIVE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
