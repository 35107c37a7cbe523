use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ghwlab::code::{CodeParams, CyclicCode};
use ghwlab::error::GhwError;
use ghwlab::field::{build_field, FieldSpec};
use ghwlab::formulas::{self, FormulaKind};
use ghwlab::ghw;
use ghwlab::verify::{self, ScanConfig};

const EXIT_DISAGREE: u8 = 1;
const EXIT_REJECTED: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "ghwlab", about = "Generalized Hamming weights of a reducible cyclic code family", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a field tower and print its defining data.
    Field(FieldArgs),
    /// Validate code parameters and print the derived quantities.
    Code(CodeArgs),
    /// Print the weight hierarchy of one instance.
    Ghw(GhwArgs),
    /// Cross-check oracle, identity and closed form on one instance.
    Verify(VerifyArgs),
    /// Scan the parameter grid and verify everything found.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long)]
    m: u32,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    e: u64,
    #[arg(long)]
    t: usize,
    /// Exponent a, reduced mod Q-1.
    #[arg(long)]
    a: u64,
    /// Comma-separated residues mod e.
    #[arg(long, value_delimiter = ',')]
    delta: Vec<u64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct GhwArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Per-rank subspace cap for the oracle fallback.
    #[arg(long)]
    cap: Option<u128>,
    /// Explain which closed-form branch applied at each rank.
    #[arg(long)]
    explain: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    cap: Option<u128>,
    /// Identity-check samples per rank.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Record wall-clock timings (off by default for byte-stable output).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    cap: Option<u128>,
    #[arg(long, default_value_t = 8)]
    max_e: u64,
    #[arg(long, default_value_t = 80)]
    max_n: u64,
    #[arg(long, default_value_t = 8)]
    max_dim: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Also rerun each hierarchy over an alternative field construction.
    #[arg(long)]
    alt_gamma: bool,
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn env_u128(name: &str) -> Option<u128> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn effective_cap(flag: Option<u128>) -> u128 {
    flag.or_else(|| env_u128("GHWLAB_CAP_SUBSPACES"))
        .unwrap_or(1_000_000)
}

fn effective_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| env_u64("GHWLAB_SEED")).unwrap_or(7)
}

fn build_spec(p: u64, s: u32, m: u32) -> Result<Arc<FieldSpec>, ExitCode> {
    match build_field(p, s, m) {
        Ok(f) => Ok(Arc::new(f)),
        Err(e) => {
            eprintln!("field construction failed: {e}");
            Err(ExitCode::from(EXIT_REJECTED))
        }
    }
}

fn build_code(args: &CodeArgs) -> Result<CyclicCode, ExitCode> {
    let spec = build_spec(args.p, args.s, args.m)?;
    match CyclicCode::build(
        spec,
        CodeParams {
            e: args.e,
            t: args.t,
            a: args.a,
            delta: args.delta.clone(),
        },
    ) {
        Ok(c) => Ok(c),
        Err(rej) => {
            eprintln!("parameters rejected: {rej}");
            Err(ExitCode::from(EXIT_REJECTED))
        }
    }
}

fn run_field(args: &FieldArgs) -> Result<(), ExitCode> {
    let f = build_spec(args.p, args.s, args.m)?;
    match args.format {
        Format::Json => {
            let v = serde_json::json!({
                "p": f.p(),
                "s": f.s(),
                "m": f.m(),
                "q": f.q(),
                "order": f.order(),
                "modulus": f.modulus(),
                "gamma": f.gamma().0,
                "subfield_step": f.subfield().step(),
            });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        _ => {
            println!("F_{} = F_{}^{} over F_{} = F_{}^{}", f.order(), f.q(), f.m(), f.q(), f.p(), f.s());
            println!("modulus (low..high): {:?}", f.modulus());
            println!("gamma (packed): {}", f.gamma().0);
            println!("subfield generator exponent: {}", f.subfield().step());
        }
    }
    Ok(())
}

fn run_code(args: &CodeArgs) -> Result<(), ExitCode> {
    let c = build_code(args)?;
    let d = c.derived();
    match args.format {
        Format::Json => {
            let v = serde_json::json!({
                "key": c.key(),
                "exponents": d.exponents,
                "delta_gcd": d.delta_gcd,
                "n": d.length,
                "k": c.dimension(),
                "class_count": d.class_count,
                "parity_check": c.parity_check_poly(),
                "formula": formulas::classify(&c).map(|k| format!("{k:?}")),
            });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        _ => {
            println!("exponents: {:?}", d.exponents);
            println!("delta gcd: {}", d.delta_gcd);
            println!("[n, k] = [{}, {}]", d.length, c.dimension());
            println!("period classes N = {}", d.class_count);
            println!("parity check (low..high): {:?}", c.parity_check_poly());
            match formulas::classify(&c) {
                Some(k) => println!("closed form: {k:?}"),
                None => println!("closed form: none (oracle only)"),
            }
        }
    }
    Ok(())
}

fn explain_rank(kind: FormulaKind, t: usize, m: u32, r: usize) -> String {
    let s = formulas::branch_index(t, m, r);
    match kind {
        FormulaKind::EqualSplitSingleClass => format!(
            "s = {s} from ({}-s-1)m < r <= ({}-s)m", t, t
        ),
        FormulaKind::EqualSplitTwoClass => {
            let upper = 2 * r as u32 <= (2 * (t - s) as u32 - 1) * m;
            format!(
                "s = {s}, {} branch (2r {} (2(t-s)-1)m)",
                if upper { "half-exponent" } else { "doubled" },
                if upper { "<=" } else { ">" }
            )
        }
        FormulaKind::ProgressionSingleClass => {
            if r <= m as usize {
                format!("low-rank branch (r <= m)")
            } else {
                format!("s = {s} branch ((t-s-1)m < r <= (t-s)m)")
            }
        }
    }
}

fn run_ghw(args: &GhwArgs) -> Result<(), ExitCode> {
    let c = build_code(&args.code)?;
    let cap = effective_cap(args.cap);
    let kind = formulas::classify(&c);
    let k = c.dimension();
    let mut rows = Vec::new();
    for r in 1..=k {
        let (d, method) = match kind {
            Some(kd) => (
                formulas::closed_form(
                    kd,
                    c.spec().q(),
                    c.spec().m(),
                    c.params().e,
                    c.params().t,
                    c.derived().delta_gcd,
                    r,
                )
                .expect("in-hypothesis instance"),
                format!("{kd:?}"),
            ),
            None => match ghw::ghw_bruteforce(&c, r, cap) {
                Ok(o) => (o.d, "oracle".to_string()),
                Err(GhwError::CapExceeded { needed, cap }) => {
                    eprintln!("rank {r}: {needed} subspaces exceed the cap {cap}");
                    return Err(ExitCode::from(EXIT_CAP));
                }
                Err(e) => {
                    eprintln!("oracle failed: {e}");
                    return Err(ExitCode::from(EXIT_REJECTED));
                }
            },
        };
        rows.push((r, d, method));
    }
    match args.code.format {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(r, d, method)| serde_json::json!({"r": r, "d": d, "method": method}))
                .collect();
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Csv => {
            println!("r,d,method");
            for (r, d, method) in &rows {
                println!("{r},{d},{method}");
            }
        }
        Format::Table => {
            for (r, d, method) in &rows {
                print!("d_{r} = {d}  [{method}]");
                if args.explain {
                    if let Some(kd) = kind {
                        print!("  {}", explain_rank(kd, c.params().t, c.spec().m(), *r));
                    }
                }
                println!();
            }
        }
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<(), ExitCode> {
    let c = build_code(&args.code)?;
    let cfg = ScanConfig {
        subspace_cap: effective_cap(args.cap),
        eq1_samples: args.samples,
        seed: effective_seed(args.seed),
        timings: args.timings,
        ..ScanConfig::default()
    };
    let rec = verify::verify_instance(&c, &cfg, 0);
    let bad = rec.ranks.iter().any(|r| r.agree == Some(false) || !r.identity_ok)
        || !rec.hierarchy_ok;
    match args.code.format {
        Format::Table => {
            for r in &rec.ranks {
                println!(
                    "r = {}: oracle = {:?}, formula = {:?}, agree = {:?}, identity checks = {} ({})",
                    r.r,
                    r.d_oracle,
                    r.d_formula,
                    r.agree,
                    r.identity_checked,
                    if r.identity_ok { "ok" } else { "FAILED" },
                );
            }
            println!("hierarchy sanity: {}", if rec.hierarchy_ok { "ok" } else { "FAILED" });
        }
        _ => println!("{}", serde_json::to_string_pretty(&rec).unwrap()),
    }
    if bad {
        Err(ExitCode::from(EXIT_DISAGREE))
    } else {
        Ok(())
    }
}

fn run_scan_cmd(args: &ScanArgs) -> Result<(), ExitCode> {
    let default_scan_cap = ScanConfig::default().subspace_cap;
    let cfg = ScanConfig {
        max_e: args.max_e,
        max_length: args.max_n,
        max_dimension: args.max_dim,
        subspace_cap: args
            .cap
            .or_else(|| env_u128("GHWLAB_CAP_SUBSPACES"))
            .unwrap_or(default_scan_cap),
        eq1_samples: args.samples,
        seed: effective_seed(args.seed),
        check_alt_gamma: args.alt_gamma,
        timings: args.timings,
        ..ScanConfig::default()
    };
    let report = verify::run_scan(&cfg);
    match args.format {
        Format::Csv => print!("{}", verify::report_csv(&report)),
        _ => println!("{}", verify::report_json(&report)),
    }
    if report.all_agree() {
        Ok(())
    } else {
        Err(ExitCode::from(EXIT_DISAGREE))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Field(a) => run_field(a),
        Cmd::Code(a) => run_code(a),
        Cmd::Ghw(a) => run_ghw(a),
        Cmd::Verify(a) => run_verify(a),
        Cmd::Scan(a) => run_scan_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
