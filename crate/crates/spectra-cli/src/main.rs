use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spectra::arith::{parse_rat, Rat};
use spectra::canonical::{self, Hamiltonian};
use spectra::focktype;
use spectra::forward;
use spectra::measure::{generate_lacunary, DiscreteMeasure, LacunarityParams};
use spectra::report::Report;
use spectra::stieltjes::{self, CertifyConfig, JacobiMatrix};
use spectra::Error;

const BITS_ENV: &str = "SPECTRA_BITS";

#[derive(Parser)]
#[command(name = "spectra", version, about = "Exact and validated inverse spectral computations for Jacobi matrices")]
struct Cli {
    /// Working precision in bits for enclosures.
    #[arg(long, global = true, env = BITS_ENV, default_value_t = 128, value_parser = clap::value_parser!(u32).range(16..))]
    bits: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a deterministic geometric measure.
    Gen {
        #[arg(long)]
        atoms: usize,
        #[arg(long, value_parser = rat_arg)]
        t_ratio: Rat,
        #[arg(long, value_parser = rat_arg)]
        m_ratio: Rat,
        #[arg(long, value_parser = rat_arg, default_value = "1")]
        t1: Rat,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure to Jacobi matrix.
    Inverse(Io),
    /// Jacobi matrix to spectral measure.
    Forward(Io),
    /// Jacobi matrix to Hamiltonian.
    CanonicalToH {
        #[command(flatten)]
        io: Io,
        /// Length of the first interval; defaults to 1000/q_1.
        #[arg(long, value_parser = rat_arg)]
        l1: Option<Rat>,
    },
    /// Hamiltonian to Jacobi matrix.
    CanonicalFromH(Io),
    /// Monodromy polynomials of a Hamiltonian and the two measures they carry.
    Monodromy(Io),
    /// Fock-type weights sigma from a measure nu.
    FockSigma {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Certify a family of inequalities and emit a verdict report.
    Verify {
        which: Which,
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long, value_enum, default_value_t = Emit::Both)]
        emit: Emit,
    },
    /// Append a receding top atom to a base measure and tabulate the first entries.
    TailExperiment {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_parser = rat_arg)]
        m_top: Rat,
        /// Comma-separated positions of the appended atom.
        #[arg(long, value_delimiter = ',', value_parser = rat_arg, required = true)]
        t_values: Vec<Rat>,
        #[arg(long, value_enum, default_value_t = Emit::Both)]
        emit: Emit,
    },
}

#[derive(Args, Clone)]
struct Io {
    /// Input JSON file, or a directory of them for `verify`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; for reports a path prefix (or a directory when the input is one).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, value_parser = rat_arg)]
    lambda: Rat,
    #[arg(long, value_parser = rat_arg)]
    kappa: Rat,
    #[arg(long, value_parser = rat_arg)]
    theta: Rat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Thm11,
    Thm12,
    Thm13,
    Thm14,
    Thm15,
    Steps,
    Lemma22,
    Stmt41,
    Cor52,
}

impl Which {
    fn name(self) -> &'static str {
        match self {
            Which::Thm11 => "thm11",
            Which::Thm12 => "thm12",
            Which::Thm13 => "thm13",
            Which::Thm14 => "thm14",
            Which::Thm15 => "thm15",
            Which::Steps => "steps",
            Which::Lemma22 => "lemma22",
            Which::Stmt41 => "stmt41",
            Which::Cor52 => "cor52",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
    Both,
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(s) => f.write_str(s),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

/// Settings echoed into every header.
struct Ctx {
    bits: u32,
    bits_from_env: bool,
}

impl Ctx {
    fn header(&self, command: &str) -> Value {
        json!({ "command": command, "bits": self.bits.to_string(), "bits_source": self.source() })
    }

    fn source(&self) -> &'static str {
        if self.bits_from_env {
            "env"
        } else {
            "flag_or_default"
        }
    }

    fn stamp(&self, r: &mut Report, command: &str) {
        r.set("command", command);
        r.set("bits", self.bits);
        r.set("bits_source", self.source());
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let bits_from_env = std::env::var_os(BITS_ENV).is_some() && !std::env::args().any(|a| a == "--bits" || a.starts_with("--bits="));
    let ctx = Ctx { bits: cli.bits, bits_from_env };
    let code = match run(&ctx, cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    };
    ExitCode::from(code)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Lib(Error::Parse(format!("{}: {e}", path.display()))))
}

fn write_text(path: Option<&Path>, text: &str) -> Outcome<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_value(ctx: &Ctx, command: &str, out: Option<&Path>, result: Value) -> Outcome<u8> {
    let doc = json!({ "header": ctx.header(command), "result": result });
    let mut text = serde_json::to_string_pretty(&doc).expect("json");
    text.push('\n');
    write_text(out, &text)?;
    Ok(0)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(ctx: &Ctx, command: Command) -> Outcome<u8> {
    let bits = ctx.bits;
    match command {
        Command::Gen { atoms, t_ratio, m_ratio, t1, seed, out } => {
            let mu = generate_lacunary(atoms, &t_ratio, &m_ratio, &t1, seed)?;
            let mut text = serde_json::to_string_pretty(&mu).expect("json");
            text.push('\n');
            write_text(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Inverse(io) => {
            let mu = load_measure(&io.input)?;
            let res = stieltjes::inverse_spectral(&mu, bits, None)?;
            let code = report_code(&res.consistency);
            emit_value(ctx, "inverse", io.out.as_deref(), to_value(&res))?;
            Ok(code)
        }
        Command::Forward(io) => {
            let j: JacobiMatrix = read_json(&io.input)?;
            emit_value(ctx, "forward", io.out.as_deref(), to_value(&forward::spectral_measure(&j, bits)?))
        }
        Command::CanonicalToH { io, l1 } => {
            let j: JacobiMatrix = read_json(&io.input)?;
            let h = canonical::jacobi_to_hamiltonian(&j, l1.as_ref())?;
            emit_value(ctx, "canonical-to-h", io.out.as_deref(), to_value(&h))
        }
        Command::CanonicalFromH(io) => {
            let h: Hamiltonian = read_json(&io.input)?;
            emit_value(ctx, "canonical-from-h", io.out.as_deref(), to_value(&canonical::hamiltonian_to_jacobi(&h)?))
        }
        Command::Monodromy(io) => {
            let h: Hamiltonian = read_json(&io.input)?;
            let m = canonical::monodromy(&h);
            let measures = canonical::measures_from_monodromy(&m, bits)?;
            emit_value(ctx, "monodromy", io.out.as_deref(), json!({ "monodromy": m, "det": m.det(), "measures": measures }))
        }
        Command::FockSigma { io, truncation } => {
            let nu: DiscreteMeasure = read_json(&io.input)?;
            let fd = focktype::sigma_from_nu(&nu, truncation.unwrap_or(nu.len()))?;
            emit_value(ctx, "fock-sigma", io.out.as_deref(), to_value(&fd))
        }
        Command::Verify { which, io, params, truncation, emit } => {
            let p = LacunarityParams::new(params.lambda, params.kappa, params.theta);
            if io.input.is_dir() {
                verify_dir(ctx, which, &io, &p, truncation, emit)
            } else {
                let mut r = verify_one(bits, which, &io.input, &p, truncation)?;
                ctx.stamp(&mut r, &format!("verify {}", which.name()));
                emit_report(&r, io.out.as_deref(), emit)?;
                Ok(report_code(&r))
            }
        }
        Command::TailExperiment { io, m_top, t_values, emit } => {
            let base: DiscreteMeasure = read_json(&io.input)?;
            let (_, mut r) = stieltjes::tail_sensitivity_experiment(&base, &m_top, &t_values, bits)?;
            ctx.stamp(&mut r, "tail-experiment");
            r.set("m_top", spectra::arith::format_rat(&m_top));
            emit_report(&r, io.out.as_deref(), emit)?;
            Ok(report_code(&r))
        }
    }
}

fn load_measure(path: &Path) -> Outcome<DiscreteMeasure> {
    let mu: DiscreteMeasure = read_json(path)?;
    if !mu.is_normalized() {
        eprintln!("note: {} normalized to unit mass", path.display());
    }
    Ok(mu.normalize())
}

fn report_code(r: &Report) -> u8 {
    r.exit_code() as u8
}

fn verify_one(bits: u32, which: Which, input: &Path, p: &LacunarityParams, truncation: Option<usize>) -> Outcome<Report> {
    let mut r = match which {
        Which::Thm11 => {
            let nu: DiscreteMeasure = read_json(input)?;
            let n = truncation.unwrap_or(nu.len().saturating_sub(1).max(1));
            let mut r = focktype::theorem11_check(&nu, p, n)?;
            r.set("truncation", n);
            r
        }
        Which::Thm12 => stieltjes::theorem12_check(&load_measure(input)?, p)?,
        Which::Thm13 => forward::theorem13_check(&read_json(input)?, p, bits)?,
        Which::Thm14 => canonical::theorem14_check(&load_measure(input)?, p)?.0,
        Which::Thm15 => canonical::theorem15_check(&read_json(input)?, p, bits)?,
        Which::Steps | Which::Lemma22 => {
            let mu = load_measure(input)?;
            let cfg = CertifyConfig::lacunary(p.clone());
            let res = stieltjes::inverse_spectral(&mu, bits, Some(&cfg))?;
            let mut r = if matches!(which, Which::Steps) {
                let mut r = res.certs;
                r.absorb(res.consistency);
                r
            } else {
                stieltjes::lemma22_envelope(&res.levels, p)?
            };
            r.set("bits_used", res.bits_used);
            r
        }
        Which::Stmt41 => forward::statement41_certify(&read_json(input)?, p, bits)?,
        Which::Cor52 => {
            let nu: DiscreteMeasure = read_json(input)?;
            let n = truncation.unwrap_or(nu.len().saturating_sub(1).max(1));
            let mut r = focktype::corollary52_check(&focktype::sigma_from_nu(&nu, n)?, p, bits)?;
            r.set("truncation", n);
            r
        }
    };
    r.set("lambda", spectra::arith::format_rat(&p.lambda));
    r.set("kappa", spectra::arith::format_rat(&p.kappa));
    r.set("theta", spectra::arith::format_rat(&p.theta));
    r.set("input", input.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    Ok(r)
}

/// Every `*.json` in the directory, one thread per input; each writes `<stem>.json|csv` into `--out`.
fn verify_dir(ctx: &Ctx, which: Which, io: &Io, p: &LacunarityParams, truncation: Option<usize>, emit: Emit) -> Outcome<u8> {
    let Some(out_dir) = io.out.as_deref() else {
        return Err(Failure::Io("a directory input needs --out <directory>".into()));
    };
    fs::create_dir_all(out_dir).map_err(|e| Failure::Io(format!("{}: {e}", out_dir.display())))?;
    let mut inputs: Vec<PathBuf> = fs::read_dir(&io.input)
        .map_err(|e| Failure::Io(format!("{}: {e}", io.input.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    inputs.sort();
    let codes: Vec<u8> = std::thread::scope(|s| {
        let handles: Vec<_> = inputs
            .iter()
            .map(|input| {
                s.spawn(move || {
                    let stem = input.file_stem().unwrap_or_default();
                    let result = verify_one(ctx.bits, which, input, p, truncation).and_then(|mut r| {
                        ctx.stamp(&mut r, &format!("verify {}", which.name()));
                        emit_report(&r, Some(&out_dir.join(stem)), emit)?;
                        Ok(report_code(&r))
                    });
                    result.unwrap_or_else(|e| {
                        eprintln!("error: {}: {e}", input.display());
                        3
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or(3)).collect()
    });
    Ok(combine(&codes))
}

/// Input errors dominate, then certified failures, then open verdicts.
fn combine(codes: &[u8]) -> u8 {
    [3, 1, 2].into_iter().find(|c| codes.contains(c)).unwrap_or(0)
}

fn emit_report(r: &Report, out: Option<&Path>, emit: Emit) -> Outcome<()> {
    let json = || {
        let mut t = r.to_json();
        t.push('\n');
        t
    };
    match out {
        Some(prefix) => {
            if emit != Emit::Csv {
                write_text(Some(&prefix.with_extension("json")), &json())?;
            }
            if emit != Emit::Json {
                write_text(Some(&prefix.with_extension("csv")), &r.to_csv())?;
            }
        }
        None => match emit {
            Emit::Csv => write_text(None, &r.to_csv())?,
            _ => write_text(None, &json())?,
        },
    }
    Ok(())
}
