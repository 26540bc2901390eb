//! `heis`: coefficient tables, point evaluation, kernel grids, Weil matrices
//! and the verification suite from the command line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harmonic_eisenstein::eisenstein::{
    eval_vartheta, eval_vartheta_tilde, harmonic_expansion, q_expansion, required_m_max,
};
use harmonic_eisenstein::kernel::{theta_h, theta_tilde_h, theta_tilde_shifted_h};
use harmonic_eisenstein::verify::{all_passed, render_table, run_suite};
use harmonic_eisenstein::weil::{rho_dual, rho_s, rho_t};
use harmonic_eisenstein::{
    CosetIndex, Error, FramePoint, LatticeContext, ModularPoint, ShiftPair, Suite, WeilMatrix,
};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "heis",
    version,
    about = "Weight-one Eisenstein series for N·Z² and its harmonic preimage"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Fourier coefficients c_h(m/N) and c̃_h(m/N)
    Coeffs,
    /// ϑ_h(τ) and θ̃_h(τ) with certified tail bounds
    Eval,
    /// Run a verification suite
    Verify,
    /// Θ_h and Θ̃_h on a (τ, t) grid
    Kernel,
    /// Weil representation matrices ρ(T), ρ(S) and their duals
    Weil,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long, global = true)]
    level: Option<u32>,
    /// Coset "h1,h2" or "all"
    #[arg(long, global = true)]
    h: Option<String>,
    #[arg(long, global = true)]
    mmax: Option<i64>,
    /// "u,v"; repeat for a grid
    #[arg(long, global = true, allow_hyphen_values = true)]
    tau: Vec<String>,
    /// Comma-separated frame parameters
    #[arg(long, global = true)]
    t: Option<String>,
    /// Shift ε; the kernel is then evaluated at (ε, −ε)
    #[arg(long, global = true, allow_hyphen_values = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file with the same keys as the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    suite: Option<String>,
}

/// The `--config` file; flags given on the command line win.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    level: Option<u32>,
    h: Option<String>,
    mmax: Option<i64>,
    tau: Option<Vec<String>>,
    t: Option<String>,
    eps: Option<f64>,
    tol: Option<f64>,
    format: Option<Format>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    suite: Option<String>,
}

#[derive(Debug)]
struct Config {
    ctx: LatticeContext,
    cosets: Vec<CosetIndex>,
    mmax: Option<i64>,
    taus: Vec<ModularPoint>,
    ts: Vec<FramePoint>,
    eps: Option<f64>,
    tol: f64,
    format: Format,
    out: Option<PathBuf>,
    seed: u64,
    suite: Suite,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::Truncation { .. } | Error::Quadrature { .. } | Error::IllConditioned(_) => {
                Failure::Numeric(err.to_string())
            }
            _ => Failure::Usage(err.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a.parse().map_err(|_| usage(format!("bad {what} {s:?}")))?;
            let b = b.parse().map_err(|_| usage(format!("bad {what} {s:?}")))?;
            Ok((a, b))
        }
        _ => Err(usage(format!("{what} must look like \"a,b\", got {s:?}"))),
    }
}

fn resolve(flags: Flags) -> Result<Config, Failure> {
    let file = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let level = flags.level.or(file.level).unwrap_or(3);
    let ctx = LatticeContext::new(level)?;
    let h = flags.h.or(file.h).unwrap_or_else(|| "all".into());
    let cosets = if h == "all" {
        ctx.cosets().collect()
    } else {
        let (a, b) = parse_pair(&h, "coset")?;
        if a.fract() != 0.0 || b.fract() != 0.0 {
            return Err(usage(format!("coset entries must be integers, got {h:?}")));
        }
        vec![ctx.coset(a as i64, b as i64)]
    };
    let mmax = flags.mmax.or(file.mmax);
    if matches!(mmax, Some(m) if m < 0) {
        return Err(usage("--mmax must be nonnegative"));
    }
    let tau_strings = if flags.tau.is_empty() {
        file.tau.unwrap_or_default()
    } else {
        flags.tau
    };
    let taus = if tau_strings.is_empty() {
        vec![ModularPoint::i()]
    } else {
        tau_strings
            .iter()
            .map(|s| {
                let (u, v) = parse_pair(s, "tau")?;
                Ok(ModularPoint::new(u, v)?)
            })
            .collect::<Result<_, Failure>>()?
    };
    let ts = flags
        .t
        .or(file.t)
        .unwrap_or_else(|| "1".into())
        .split(',')
        .map(|x| {
            let t: f64 = x
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad t value {x:?}")))?;
            Ok(FramePoint::new(t)?)
        })
        .collect::<Result<_, Failure>>()?;
    let tol = flags.tol.or(file.tol).unwrap_or(1e-12);
    if tol.is_nan() || tol <= 0.0 {
        return Err(usage("--tol must be positive"));
    }
    let suite = flags
        .suite
        .or(file.suite)
        .unwrap_or_else(|| "all".into())
        .parse::<Suite>()?;
    Ok(Config {
        ctx,
        cosets,
        mmax,
        taus,
        ts,
        eps: flags.eps.or(file.eps),
        tol,
        format: flags.format.or(file.format).unwrap_or(Format::Pretty),
        out: flags.out.or(file.out),
        seed: flags.seed.or(file.seed).unwrap_or(0),
        suite,
    })
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain JSON value");
    s.push('\n');
    s
}

fn hpair(h: CosetIndex) -> [u32; 2] {
    [h.h1(), h.h2()]
}

/// Decimal places backed by the tail bound, so no uncertified digit is printed.
fn certified(x: f64, bound: f64) -> String {
    let digits = (-(bound.max(1e-16)).log10()).floor().clamp(1.0, 16.0) as usize;
    format!("{x:.digits$}")
}

fn certified_complex(z: Complex64, bound: f64) -> String {
    let im = certified(z.im.abs(), bound);
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {im}i", certified(z.re, bound))
}

fn cmd_coeffs(cfg: &Config) -> Result<String, Failure> {
    let mmax = cfg.mmax.unwrap_or(30);
    let exps = cfg
        .cosets
        .iter()
        .map(|&h| harmonic_expansion(&cfg.ctx, h, mmax))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match cfg.format {
        Format::Json => {
            let blocks: Vec<Value> = exps.iter().map(|e| json!(e.to_json())).collect();
            if blocks.len() == 1 {
                json_text(&blocks[0])
            } else {
                json_text(&Value::Array(blocks))
            }
        }
        Format::Csv if exps.len() == 1 => exps[0].to_csv(),
        Format::Csv => {
            let mut out = String::from("h1,h2,m,num,den,c_tilde,symbolic\n");
            for e in &exps {
                let h = e.coset();
                for line in e.to_csv().lines().skip(1) {
                    let _ = writeln!(out, "{},{},{line}", h.h1(), h.h2());
                }
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for e in &exps {
                let _ = writeln!(
                    out,
                    "N = {}, h = {}, m ≤ {}",
                    cfg.ctx.level(),
                    e.coset(),
                    mmax
                );
                let _ = writeln!(out, "  {:>5}  {:>8}  {:>22}  exact", "m", "c", "c̃");
                let json = e.to_json();
                let mut ms: Vec<i64> = json
                    .c
                    .iter()
                    .map(|r| r.m)
                    .chain(json.c_tilde.iter().map(|r| r.m))
                    .collect();
                ms.sort_unstable();
                ms.dedup();
                for m in ms {
                    let c = json.c.iter().find(|r| r.m == m).map(|r| {
                        if r.den == 1 {
                            r.num.to_string()
                        } else {
                            format!("{}/{}", r.num, r.den)
                        }
                    });
                    let ct = json.c_tilde.iter().find(|r| r.m == m);
                    let _ = writeln!(
                        out,
                        "  {m:>5}  {:>8}  {:>22}  {}",
                        c.unwrap_or_default(),
                        ct.map(|r| format!("{:.15}", r.value)).unwrap_or_default(),
                        e.skeleton(m).map(|s| s.to_string()).unwrap_or_default()
                    );
                }
            }
            out
        }
    })
}

fn cmd_eval(cfg: &Config) -> Result<String, Failure> {
    let mut rows = Vec::new();
    for tau in &cfg.taus {
        let mmax = match cfg.mmax {
            Some(m) => m,
            None => required_m_max(&cfg.ctx, tau.v(), cfg.tol)?,
        };
        for &h in &cfg.cosets {
            let a = eval_vartheta(&q_expansion(&cfg.ctx, h, mmax)?, tau, cfg.tol)?;
            let b = eval_vartheta_tilde(&harmonic_expansion(&cfg.ctx, h, mmax)?, tau, cfg.tol)?;
            rows.push((*tau, h, mmax, a, b));
        }
    }
    Ok(match cfg.format {
        Format::Json => json_text(&Value::Array(
            rows.iter()
                .map(|(tau, h, m, a, b)| {
                    json!({
                        "N": cfg.ctx.level(), "h": hpair(*h), "tau": [tau.u(), tau.v()], "m_max": m,
                        "vartheta": [a.value.re, a.value.im], "vartheta_tail": a.tail_bound,
                        "vartheta_tilde": [b.value.re, b.value.im], "vartheta_tilde_tail": b.tail_bound,
                    })
                })
                .collect(),
        )),
        Format::Csv => {
            let mut out = String::from("h1,h2,u,v,m_max,vartheta_re,vartheta_im,vartheta_tail,vartheta_tilde_re,vartheta_tilde_im,vartheta_tilde_tail\n");
            for (tau, h, m, a, b) in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{m},{:e},{:e},{:e},{:e},{:e},{:e}",
                    h.h1(), h.h2(), tau.u(), tau.v(),
                    a.value.re, a.value.im, a.tail_bound, b.value.re, b.value.im, b.tail_bound
                );
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for (tau, h, m, a, b) in &rows {
                let _ = writeln!(out, "N = {}, h = {h}, τ = {tau}, m ≤ {m}", cfg.ctx.level());
                let _ = writeln!(out, "  ϑ  = {}  (tail ≤ {:.1e})", certified_complex(a.value, a.tail_bound), a.tail_bound);
                let _ = writeln!(out, "  θ̃  = {}  (tail ≤ {:.1e})", certified_complex(b.value, b.tail_bound), b.tail_bound);
            }
            out
        }
    })
}

fn cmd_kernel(cfg: &Config) -> Result<String, Failure> {
    let shift = cfg.eps.map(|e| ShiftPair::new(e, -e)).transpose()?;
    let mut rows = Vec::new();
    for tau in &cfg.taus {
        for t in &cfg.ts {
            for &h in &cfg.cosets {
                let th = theta_h(&cfg.ctx, h, tau, t, cfg.tol)?;
                let tt = match shift {
                    Some(s) => theta_tilde_shifted_h(&cfg.ctx, h, tau, t, s, cfg.tol)?,
                    None => theta_tilde_h(&cfg.ctx, h, tau, t, cfg.tol)?,
                };
                rows.push((*tau, *t, h, th, tt));
            }
        }
    }
    let eps = cfg.eps.unwrap_or(0.0);
    Ok(match cfg.format {
        Format::Json => json_text(&Value::Array(
            rows.iter()
                .map(|(tau, t, h, a, b)| {
                    json!({
                        "N": cfg.ctx.level(), "h": hpair(*h), "tau": [tau.u(), tau.v()], "t": t.t(), "eps": eps,
                        "theta": [a.value.re, a.value.im], "theta_tilde": [b.value.re, b.value.im],
                        "tail": a.tail_bound.max(b.tail_bound),
                    })
                })
                .collect(),
        )),
        Format::Csv | Format::Pretty => {
            let mut out = String::from("h1,h2,u,v,t,eps,theta_re,theta_im,theta_tilde_re,theta_tilde_im,tail\n");
            for (tau, t, h, a, b) in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{eps},{:e},{:e},{:e},{:e},{:e}",
                    h.h1(), h.h2(), tau.u(), tau.v(), t.t(),
                    a.value.re, a.value.im, b.value.re, b.value.im, a.tail_bound.max(b.tail_bound)
                );
            }
            out
        }
    })
}

fn cmd_weil(cfg: &Config) -> Result<String, Failure> {
    let t = rho_t(&cfg.ctx);
    let s = rho_s(&cfg.ctx);
    let dual_t = rho_dual(&t).with_label("rho_dual(T)");
    let dual_s = rho_dual(&s).with_label("rho_dual(S)");
    let mats: [&WeilMatrix; 4] = [&t, &s, &dual_t, &dual_s];
    Ok(match cfg.format {
        Format::Json => json_text(&Value::Array(
            mats.iter().map(|m| json!(m.to_json())).collect(),
        )),
        Format::Csv => {
            let mut out = String::from("matrix,row_h1,row_h2,col_h1,col_h2,re,im\n");
            for m in mats {
                for r in cfg.ctx.cosets() {
                    for c in cfg.ctx.cosets() {
                        let z = m.entry(r, c);
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{:e},{:e}",
                            m.label(),
                            r.h1(),
                            r.h2(),
                            c.h1(),
                            c.h2(),
                            z.re,
                            z.im
                        );
                    }
                }
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for m in mats {
                let _ = writeln!(
                    out,
                    "{} (N = {}, rows and columns in order {:?})",
                    m.label(),
                    cfg.ctx.level(),
                    cfg.ctx.cosets().map(|h| h.to_string()).collect::<Vec<_>>()
                );
                for r in cfg.ctx.cosets() {
                    let row: Vec<String> = cfg
                        .ctx
                        .cosets()
                        .map(|c| {
                            let z = m.entry(r, c);
                            format!("{:>8.5}{:+.5}i", z.re, z.im)
                        })
                        .collect();
                    let _ = writeln!(out, "  {}", row.join("  "));
                }
            }
            out
        }
    })
}

fn cmd_verify(cfg: &Config) -> Result<(String, bool), Failure> {
    let reports = run_suite(&cfg.ctx, cfg.suite, cfg.seed)?;
    let ok = all_passed(&reports);
    let text = match cfg.format {
        Format::Json => {
            let mut out = String::new();
            for r in &reports {
                out.push_str(&r.to_json_line()?);
                out.push('\n');
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("check,residual,tolerance,passed\n");
            for r in &reports {
                let _ = writeln!(
                    out,
                    "{},{:e},{:e},{}",
                    r.check, r.residual, r.tolerance, r.passed
                );
            }
            out
        }
        Format::Pretty => render_table(&reports),
    };
    Ok((text, ok))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = resolve(cli.opts)?;
    let (text, ok) = match cli.command {
        Command::Coeffs => (cmd_coeffs(&cfg)?, true),
        Command::Eval => (cmd_eval(&cfg)?, true),
        Command::Kernel => (cmd_kernel(&cfg)?, true),
        Command::Weil => (cmd_weil(&cfg)?, true),
        Command::Verify => cmd_verify(&cfg)?,
    };
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => print!("{text}"),
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("certification failure: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
