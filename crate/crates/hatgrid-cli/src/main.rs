//! hatgrid command-line interface.
//!
//! Exit codes: 0 success, 1 internal error, 2 bad or degenerate
//! parameters, 3 verification defects / oracle mismatches.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use hatgrid::assemble::{generate, triangle_in_interior, verify, Chirality, TileKind, Tiling};
use hatgrid::classify::pattern_point;
use hatgrid::exactnum::{parse_rational, GoldenNumber};
use hatgrid::fibline::{fib_word, FibParams, GapLabel};
use hatgrid::io::{read_json, render_svg, write_json, Colouring};
use hatgrid::orient::{fractal_orient, install_colour_tables, oracle_run};
use hatgrid::{Error, Roles};

#[derive(Parser)]
#[command(name = "hatgrid", version, about = "Aperiodic hat-monotile tilings from two rational parameters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a tiling window and write it as JSON or SVG.
    Generate(GenerateArgs),
    /// Re-verify the exact kite coverage of a saved JSON tiling.
    Verify { file: PathBuf },
    /// Print tile-count and Fibonacci-gap statistics for a window.
    Stats(StatsArgs),
    /// Compare the fractal orientation resolver against the
    /// constraint-propagation oracle.
    OracleDiff(OracleDiffArgs),
    /// Print the S/L Fibonacci gap word of one line family.
    Fibword(FibwordArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Line offset d0 as a rational, e.g. 1/5
    #[arg(long, allow_hyphen_values = true)]
    d0: String,
    /// Line offset d1 as a rational, e.g. 1/7 (d2 = -d0-d1)
    #[arg(long, allow_hyphen_values = true)]
    d1: String,
}

impl ParamArgs {
    fn params(&self) -> Result<FibParams, Error> {
        let d0 = GoldenNumber::from_rational(parse_rational(&self.d0)?);
        let d1 = GoldenNumber::from_rational(parse_rational(&self.d1)?);
        FibParams::new(d0, d1)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Hat8,
    Tenkite,
}

impl From<ModeArg> for TileKind {
    fn from(m: ModeArg) -> TileKind {
        match m {
            ModeArg::Hat8 => TileKind::Hat8,
            ModeArg::Tenkite => TileKind::TenKite,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RolesArg {
    Standard,
    Mirrored,
}

impl From<RolesArg> for Roles {
    fn from(r: RolesArg) -> Roles {
        match r {
            RolesArg::Standard => Roles::Standard,
            RolesArg::Mirrored => Roles::Mirrored,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColouringArg {
    ByType,
    ByOrientation,
}

impl From<ColouringArg> for Colouring {
    fn from(c: ColouringArg) -> Colouring {
        match c {
            ColouringArg::ByType => Colouring::ByType,
            ColouringArg::ByOrientation => Colouring::ByOrientation,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 20)]
    radius: i64,
    #[arg(long, value_enum, default_value_t = ModeArg::Hat8)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = RolesArg::Standard)]
    roles: RolesArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, value_enum, default_value_t = ColouringArg::ByType)]
    colouring: ColouringArg,
    /// Draw the 10-kite centre-line decoration (tenkite mode only)
    #[arg(long)]
    decoration: bool,
    /// Output file (stdout when omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 20)]
    radius: i64,
    #[arg(long, value_enum, default_value_t = ModeArg::Hat8)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = RolesArg::Standard)]
    roles: RolesArg,
    /// Number of Fibonacci gaps to sample per line family
    #[arg(long, default_value_t = 100_000)]
    gaps: usize,
}

#[derive(Args)]
struct OracleDiffArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 16)]
    radius: i64,
    #[arg(long, value_enum, default_value_t = RolesArg::Standard)]
    roles: RolesArg,
}

#[derive(Args)]
struct FibwordArgs {
    /// Line offset as a rational, e.g. 1/5
    #[arg(long, allow_hyphen_values = true)]
    d: String,
    #[arg(long, default_value_t = 0)]
    start: i64,
    #[arg(long, default_value_t = 89)]
    count: usize,
}

/// Optional override of the frozen fractal colour tables, loaded from
/// $HATGRID_TABLE_DIR/orientation_tables.json.
#[derive(Deserialize)]
struct TableFile {
    lightblue: [u8; 3],
    white: [u8; 3],
}

fn load_table_override() -> Result<(), String> {
    let Some(dir) = std::env::var_os("HATGRID_TABLE_DIR") else {
        return Ok(());
    };
    let path = PathBuf::from(dir).join("orientation_tables.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let t: TableFile =
        serde_json::from_str(&text).map_err(|e| format!("bad table file {}: {e}", path.display()))?;
    install_colour_tables(t.lightblue, t.white).map_err(|e| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateParameter(_) | Error::MalformedRational(_) => 2,
        Error::VerificationFailed(_) => 3,
        _ => 1,
    }
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_generate(args: &GenerateArgs) -> Result<(), Error> {
    let p = args.params.params()?;
    let t = generate(&p, args.radius, args.mode.into(), args.roles.into())?;
    let text = match args.format {
        FormatArg::Json => write_json(&t)?,
        FormatArg::Svg => render_svg(&t, args.colouring.into(), args.decoration)?,
    };
    emit(&text, &args.output)
}

fn run_verify(file: &PathBuf) -> Result<(), Error> {
    let t = read_json(&std::fs::read_to_string(file)?)?;
    let r = verify(&t);
    println!(
        "{} tiles, {} missing kites, {} double-covered kites",
        t.tiles.len(),
        r.missing.len(),
        r.double_covered.len()
    );
    if r.is_clean() {
        Ok(())
    } else {
        Err(Error::VerificationFailed(format!(
            "{} kites missing, {} double-covered",
            r.missing.len(),
            r.double_covered.len()
        )))
    }
}

/// Tile counts restricted to centre triangles inside the interior
/// verification region.
fn interior_counts(t: &Tiling) -> HashMap<hatgrid::classify::HatType, usize> {
    let mut counts = HashMap::new();
    for tile in &t.tiles {
        if triangle_in_interior(tile.centre, t.interior_radius) {
            *counts.entry(tile.hat_type).or_default() += 1;
        }
    }
    counts
}

fn run_stats(args: &StatsArgs) -> Result<(), Error> {
    let p = args.params.params()?;
    let t = generate(&p, args.radius, args.mode.into(), args.roles.into())?;
    let r = verify(&t);
    println!("window radius {} (interior {})", t.radius, t.interior_radius);
    println!("tiles (window / interior-centred):");
    let interior = interior_counts(&t);
    let mut types: Vec<_> = r.counts_by_type.iter().collect();
    types.sort_by_key(|(ty, _)| format!("{ty:?}"));
    for (ty, n) in &types {
        println!(
            "  {:<14} {:>6} / {:>6}",
            format!("{ty:?}"),
            n,
            interior.get(ty).copied().unwrap_or(0)
        );
    }
    let flipped = t
        .tiles
        .iter()
        .filter(|tile| tile.chirality == Chirality::Flipped)
        .count();
    let lightblue = r
        .counts_by_type
        .get(&hatgrid::classify::HatType::Lightblue)
        .copied()
        .unwrap_or(0);
    println!("flipped/lightblue = {flipped}/{lightblue}");
    for k in 0..3 {
        let word = fib_word(0, args.gaps, p.d(k))?;
        let s = word.iter().filter(|&&g| g == GapLabel::S).count();
        let l = word.len() - s;
        println!(
            "family {k}: {l} L, {s} S, L/S = {:.6} (Phi = {:.6})",
            l as f64 / s as f64,
            (1.0 + 5f64.sqrt()) / 2.0
        );
    }
    Ok(())
}

fn run_oracle_diff(args: &OracleDiffArgs) -> Result<(), Error> {
    let p = args.params.params()?;
    let roles: Roles = args.roles.into();
    let out = oracle_run(&p, roles, args.radius)?;
    let mut mismatches = 0usize;
    for (&v, &(o, _)) in &out.unflipped {
        let corner = fractal_orient(&pattern_point(v, &p)?, roles)?;
        if corner != o.corner {
            mismatches += 1;
            println!("mismatch at vertex {v:?}: oracle {} fractal {corner}", o.corner);
        }
    }
    let t = generate(&p, args.radius, TileKind::Hat8, roles)?;
    let flipped_by_centre: HashMap<_, _> = t
        .tiles
        .iter()
        .filter(|tile| tile.chirality == Chirality::Flipped)
        .map(|tile| (tile.centre, tile.orientation.corner))
        .collect();
    let mut flipped_compared = 0usize;
    for (tri, o) in &out.flipped {
        if let Some(&corner) = flipped_by_centre.get(tri) {
            flipped_compared += 1;
            if corner != o.corner {
                mismatches += 1;
                println!("mismatch at flipped centre {tri:?}: oracle {} fractal {corner}", o.corner);
            }
        }
    }
    println!(
        "{} unflipped resolved, {} flipped compared, {} unresolved, {} mismatches",
        out.unflipped.len(),
        flipped_compared,
        out.unresolved.len(),
        mismatches
    );
    if mismatches == 0 {
        Ok(())
    } else {
        Err(Error::VerificationFailed(format!(
            "{mismatches} orientation mismatches"
        )))
    }
}

fn run_fibword(args: &FibwordArgs) -> Result<(), Error> {
    let d = GoldenNumber::from_rational(parse_rational(&args.d)?);
    let word = fib_word(args.start, args.count, &d)?;
    let mut line = String::new();
    for g in &word {
        line.push_str(&g.to_string());
        if line.len() == 80 {
            println!("{line}");
            line.clear();
        }
    }
    if !line.is_empty() {
        println!("{line}");
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Err(msg) = load_table_override() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => run_generate(a),
        Command::Verify { file } => run_verify(file),
        Command::Stats(a) => run_stats(a),
        Command::OracleDiff(a) => run_oracle_diff(a),
        Command::Fibword(a) => run_fibword(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
