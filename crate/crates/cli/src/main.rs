use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use covwit_core::format::{g17, to_json_pretty};
use covwit_core::selftest::{self, Level};
use covwit_core::twirl::{twirl, Symmetry};
use covwit_core::{hh, quo, werner3, CMat, HhCoeffs, LinMapSpec, QuoCoeffs, S3Coeffs, Tolerances};

mod coeff;

use coeff::{parse_coeff, parse_tuple};

#[derive(Parser, Debug)]
#[command(name = "covwit", version, about = "Certificates for group-symmetric quantum maps and states")]
struct Cli {
    /// Negative-eigenvalue threshold, relative to max(1, Frobenius norm).
    #[arg(long, global = true, value_name = "TOL")]
    tol_psd: Option<f64>,
    /// Equality tolerance.
    #[arg(long, global = true, value_name = "TOL")]
    tol_eq: Option<f64>,
    /// Seed recorded in certificates and used by randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write JSON output to this path instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write output to this path instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide membership of a map or state in every region of its family.
    #[command(subcommand)]
    Certify(Certify),
    /// Emit a named invariant state as matrix JSON.
    #[command(subcommand)]
    State(StateCmd),
    /// Apply a witness map to a state.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Project a matrix onto the commutant of a symmetry group.
    Twirl(TwirlArgs),
    /// Inequality systems and vertices of the hh regions.
    #[command(subcommand)]
    Regions(RegionsCmd),
    /// Closed-form verdicts on a parameter grid, as CSV.
    #[command(subcommand)]
    Sweep(SweepCmd),
    /// Run the oracle-agreement suite.
    Selftest(SelftestArgs),
}

#[derive(Subcommand, Debug)]
enum Certify {
    /// Hyperoctahedral-covariant map with parameters a, b, c.
    Hh(HhArgs),
    /// Tripartite Werner state, entanglement detection.
    Werner3(TupleArgs),
    /// U⊗Ū⊗U-invariant state.
    Quo(TupleArgs),
}

#[derive(Args, Debug)]
struct HhArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_coeff)]
    a: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_coeff)]
    b: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_coeff)]
    c: f64,
}

#[derive(Args, Debug)]
struct TupleArgs {
    #[arg(long)]
    d: usize,
    /// ae,a12,a13,a23,re123,im123 as decimals or p/q.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_tuple)]
    coeffs: [f64; 6],
    /// Witness grid size per parameter axis.
    #[arg(long, default_value_t = werner3::DEFAULT_GRID)]
    grid: usize,
}

#[derive(Subcommand, Debug)]
enum StateCmd {
    /// The one-parameter tripartite Werner family.
    RhoT {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_coeff)]
        t: f64,
    },
}

#[derive(Subcommand, Debug)]
enum WitnessCmd {
    /// Smallest eigenvalue of (id ⊗ W)(state).
    Apply {
        /// Map JSON of the witness W.
        #[arg(long)]
        witness: PathBuf,
        /// Matrix JSON of the state; W acts on the last factor.
        #[arg(long)]
        state: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Hh,
    Uuu,
    Uubaru,
    Oo,
    Qorth,
}

impl From<Family> for Symmetry {
    fn from(f: Family) -> Self {
        match f {
            Family::Hh => Symmetry::Hh,
            Family::Uuu => Symmetry::Uuu,
            Family::Uubaru => Symmetry::Uubaru,
            Family::Oo => Symmetry::Oo,
            Family::Qorth => Symmetry::Qorth,
        }
    }
}

#[derive(Args, Debug)]
struct TwirlArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    matrix_file: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Vertices,
    Inequalities,
}

#[derive(Subcommand, Debug)]
enum RegionsCmd {
    Hh {
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "vertices")]
        emit: Emit,
    },
}

#[derive(Subcommand, Debug)]
enum SweepCmd {
    Hh {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        grid: usize,
        /// Fix a and sweep only b and c.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_coeff)]
        a: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value = "quick", value_parser = parse_level)]
    level: Level,
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse().map_err(|e: covwit_core::Error| e.to_string())
}

/// Failures that are not caused by the input.
#[derive(Debug)]
struct NumericalFailure(String);

impl std::fmt::Display for NumericalFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NumericalFailure {}

fn tolerances(cli: &Cli) -> anyhow::Result<Tolerances> {
    let mut t = Tolerances::default();
    if let Some(x) = cli.tol_psd {
        t = t.with_psd_tol(x)?;
    }
    if let Some(x) = cli.tol_eq {
        t = t.with_eq_tol(x)?;
    }
    Ok(t)
}

fn destination(cli: &Cli) -> Option<&Path> {
    cli.json.as_deref().or(cli.out.as_deref())
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match destination(cli) {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn read_json(path: &Path) -> anyhow::Result<serde_json::Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_matrix(path: &Path) -> anyhow::Result<CMat> {
    serde_json::from_value(read_json(path)?).with_context(|| format!("matrix JSON in {}", path.display()))
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::Certify(c) => {
            let cert = match c {
                Certify::Hh(h) => hh::decide(&HhCoeffs::new(h.d, h.a, h.b, h.c)?, &tol, cli.seed)?,
                Certify::Werner3(t) => {
                    werner3::detect_entanglement_w3(&S3Coeffs::new(t.d, t.coeffs)?, t.grid, &tol, cli.seed)?
                }
                Certify::Quo(t) => quo::decide_quo(&QuoCoeffs::from_tuple(t.d, t.coeffs)?, t.grid, &tol, cli.seed)?,
            };
            emit(cli, &cert.to_json_string())?;
            if destination(cli).is_some() {
                println!("{}: {}", cert.family, cert.verdict);
            }
        }
        Command::State(StateCmd::RhoT { d, t }) => {
            let (_, rho) = werner3::rho_t(*d, *t)?;
            emit(cli, &to_json_pretty(&rho)?)?;
        }
        Command::Witness(WitnessCmd::Apply { witness, state }) => {
            let w = LinMapSpec::from_json(&read_json(witness)?)?;
            let rho = read_matrix(state)?;
            let d_id = rho.rows() / w.d_in().max(1);
            let img = w.id_tensor_apply(&rho, d_id)?;
            let p = covwit_core::linalg::is_psd(&img, &tol)?;
            let out = json!({
                "d_id": d_id,
                "d_in": w.d_in(),
                "d_out": w.d_out(),
                "min_eig": p.min_eig,
                "passed": p.psd,
                "psd_tol": tol.psd_tol,
            });
            emit(cli, &to_json_pretty(&out)?)?;
        }
        Command::Twirl(a) => {
            let x = read_matrix(&a.matrix_file)?;
            let sym = Symmetry::from(a.family);
            let p = twirl(sym, &x)?;
            let coeffs: Vec<[f64; 2]> = p.coeffs.iter().map(|z| [z.re, z.im]).collect();
            let out = json!({
                "family": sym.name(),
                "d": sym.local_dim(x.rows())?,
                "matrix": p.matrix,
                "coeffs": coeffs,
                "residual_norm": p.residual_norm,
            });
            emit(cli, &to_json_pretty(&out)?)?;
        }
        Command::Regions(RegionsCmd::Hh { d, emit: what }) => {
            let regions = hh::regions(*d)?;
            let mut out = serde_json::Map::new();
            for r in regions {
                let v = match what {
                    Emit::Vertices => serde_json::to_value(&r.vertices)?,
                    Emit::Inequalities => serde_json::to_value(&r.inequalities)?,
                };
                out.insert(r.name, v);
            }
            emit(cli, &to_json_pretty(&json!({ "family": "hh", "d": d, "regions": out }))?)?;
        }
        Command::Sweep(SweepCmd::Hh { d, grid, a }) => {
            let rows = hh::sweep(*d, *grid, *a, &tol)?;
            let expected = grid * grid * if a.is_some() { 1 } else { *grid };
            if rows.len() != expected {
                bail!(NumericalFailure(format!("sweep produced {} rows, expected {expected}", rows.len())));
            }
            let mut csv = String::from("a,b,c,positive,cp,ccp,ppt,eb\n");
            for r in &rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    g17(r.a),
                    g17(r.b),
                    g17(r.c),
                    r.positive.name(),
                    r.cp.name(),
                    r.ccp.name(),
                    r.ppt.name(),
                    r.eb.name()
                ));
            }
            emit(cli, &csv)?;
        }
        Command::Selftest(s) => {
            let results = selftest::run(s.level, cli.seed);
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("{} of {} criteria passed", results.len() - failed, results.len());
            if let Some(p) = destination(cli) {
                fs::write(p, to_json_pretty(&results)?).with_context(|| format!("writing {}", p.display()))?;
            }
            if failed > 0 {
                bail!(NumericalFailure(format!("{failed} self-test criteria failed")));
            }
        }
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let numerical = e.chain().any(|c| {
        c.is::<NumericalFailure>()
            || c.downcast_ref::<covwit_core::Error>().is_some_and(|x| x.is_numerical())
    });
    if numerical {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
