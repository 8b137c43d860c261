//! The `arcmilnor` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad usage or a violated
//! precondition, 3 the computation was abandoned (work bound, blowup limit,
//! a center that is not rational, a cover class that is not polynomial).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_integer::Integer;
use serde_json::{json, Value};

use crate::formulas::{
    class_xn1, count_xn1_formula, lefschetz_acampo, lefschetz_table, motivic_series_p, motivic_volume_chi,
    motivic_volume_s, s_invariants, zeta_monodromy, CoverMode, FormulaError,
};
use crate::jets::{count_fixed_locus, count_points_xn1, CountOptions, JetError, DEFAULT_WORK_BOUND};
use crate::poly::{MultiPoly, PolyError};
use crate::resolve::{load_resolution, resolve_germ, ResolutionData, ResolveError};
use crate::verify::{verify_mt, verify_pt_counts, verify_sec, verify_triv, Germ, VerificationReport, VerifyError};

#[derive(Parser, Debug)]
#[command(name = "arcmilnor", version, about = "Monodromy invariants from resolutions and from arc counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GermArgs {
    /// Polynomial expression, e.g. "x^2+y^3".
    #[arg(long = "f", conflicts_with = "res")]
    f: Option<String>,
    /// Comma-separated variable names.
    #[arg(long, value_delimiter = ',', default_value = "x,y")]
    vars: Vec<String>,
    /// Resolution data in JSON, as written by `resolve --json`.
    #[arg(long)]
    res: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    max_blowups: usize,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_WORK_BOUND)]
    work_bound: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Chi,
    Split,
    Count,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Embedded resolution and its numerical data.
    Resolve {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Lefschetz number of the n-th power of the monodromy.
    Lefschetz {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monodromy zeta function.
    Zeta {
        #[command(flatten)]
        germ: GermArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Moebius-inverted Lefschetz numbers, by default over one full period.
    SInvariants {
        #[command(flatten)]
        germ: GermArgs,
        /// Largest index of the Lefschetz table used.
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Class of the jet space X_{n,1} (`--mode count` evaluates at L = q).
    Class {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "chi")]
        mode: Mode,
        #[arg(long)]
        q: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Generating series P(T) in closed form, optionally one coefficient.
    Series {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, value_enum, default_value = "chi")]
        mode: Mode,
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Motivic volume S, the limit of -P(T) at infinity.
    Volume {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long, value_enum, default_value = "chi")]
        mode: Mode,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Number of F_q-points of X_{n,1} by arc enumeration.
    Count {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Number of F_q-points fixed by the d-th power of the jet monodromy.
    FixedCount {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare the resolution side with the arc side.
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Interpolated Euler characteristic of X_{n,1} against Lambda(M^n).
    Mt {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Arc counts against the closed formula, prime by prime.
    Pt {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fixed loci of the jet monodromy against Lambda(M^gcd(n, d)).
    Sec {
        #[command(flatten)]
        germ: GermArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monomial normal-crossing loci: closed form against enumeration.
    Triv {
        /// Exponents N_i of the monomial.
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u64>,
        /// Orders k_i of the coordinates.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u64>,
        /// Ambient dimension.
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Failure of one invocation, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn abort(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<ResolveError> for Failure {
    fn from(e: ResolveError) -> Self {
        let code = match e {
            ResolveError::NonRationalCenter(_) | ResolveError::MaxBlowupsExceeded(_) | ResolveError::ChartCheck(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<JetError> for Failure {
    fn from(e: JetError) -> Self {
        let code = match e {
            JetError::WorkBoundExceeded(_) | JetError::Overflow | JetError::Interpolation(_) => 3,
            JetError::Poly(_) | JetError::NotVanishingAtOrigin | JetError::NotAdmissible { .. } | JetError::InvalidArgument(_) => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        let code = match e {
            FormulaError::MissingCoverClass(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Poly(e) => e.into(),
            VerifyError::Resolve(e) => e.into(),
            VerifyError::Jets(e) => e.into(),
            VerifyError::Formula(e) => e.into(),
            VerifyError::Precondition(m) => Failure::usage(m),
        }
    }
}

/// What a subcommand produced: the JSON value, its text rendering, and
/// whether a verification failed.
struct Output {
    json: Value,
    text: String,
    failed: bool,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            failed: false,
        }
    }

    fn report(r: VerificationReport) -> Self {
        Output {
            json: serde_json::to_value(&r).expect("reports serialize"),
            text: r.to_text(),
            failed: !r.passed(),
        }
    }
}

impl GermArgs {
    fn germ(&self) -> Result<Germ, Failure> {
        let Some(f) = &self.f else {
            return Err(Failure::usage("this subcommand needs a polynomial (--f)"));
        };
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        Ok(Germ::parse(f, &vars)?)
    }

    fn polynomial(&self) -> Result<MultiPoly, Failure> {
        Ok(self.germ()?.poly)
    }

    fn resolution(&self) -> Result<ResolutionData, Failure> {
        match (&self.f, &self.res) {
            (Some(_), None) => Ok(resolve_germ(&self.polynomial()?, self.max_blowups)?),
            (None, Some(path)) => {
                let bytes = std::fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                Ok(load_resolution(&bytes)?)
            }
            _ => Err(Failure::usage("give exactly one of --f or --res")),
        }
    }
}

fn cover_mode(mode: Mode) -> Result<CoverMode, Failure> {
    match mode {
        Mode::Chi => Ok(CoverMode::Chi),
        Mode::Split => Ok(CoverMode::Split),
        Mode::Count => Err(Failure::usage("--mode count is only available for `class`")),
    }
}

fn positive(n: u64, flag: &str) -> Result<u64, Failure> {
    if n == 0 {
        return Err(Failure::usage(format!("{flag} must be at least 1")));
    }
    Ok(n)
}

fn resolution_text(res: &ResolutionData) -> String {
    let mut lines = vec![format!("ambient dimension {}", res.ambient_dim)];
    for d in &res.divisors {
        lines.push(format!(
            "E{}: N={} nu={} chi_open={} adjacent={:?} strict_contacts={}",
            d.id, d.n, d.nu, d.chi_open, d.adjacent, d.strict_contacts
        ));
    }
    for s in &res.strata {
        let class = s.class.as_ref().map(|c| format!(" class={c}")).unwrap_or_default();
        lines.push(format!("stratum {:?}: chi_open={} m={}{class}", s.ids, s.chi_open, s.m));
    }
    lines.join("\n")
}

fn execute(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Resolve { germ, .. } => {
            let res = germ.resolution()?;
            let json: Value = serde_json::from_str(&res.to_json()).expect("valid json");
            Ok(Output::ok(json, resolution_text(&res)))
        }
        Command::Lefschetz { germ, n, .. } => {
            let res = germ.resolution()?;
            let value = lefschetz_acampo(&res, positive(*n, "--n")?);
            Ok(Output::ok(json!({ "n": n, "lefschetz": value }), value.to_string()))
        }
        Command::Zeta { germ, .. } => {
            let z = zeta_monodromy(&germ.resolution()?);
            let exps: BTreeMap<String, i64> = z.exponents().into_iter().map(|(i, e)| (i.to_string(), e)).collect();
            Ok(Output::ok(json!({ "zeta": z.to_string(), "exponents": exps }), z.to_string()))
        }
        Command::SInvariants { germ, n, .. } => {
            let res = germ.resolution()?;
            let period = res.divisors.iter().fold(1u64, |l, d| l.lcm(&d.n));
            let table = lefschetz_table(&res, positive(n.unwrap_or(period), "--n")?);
            let s = s_invariants(&table)?;
            let text = s.iter().map(|(i, v)| format!("{i}: {v}")).collect::<Vec<_>>().join("\n");
            let map: BTreeMap<String, i64> = s.iter().map(|(i, v)| (i.to_string(), *v)).collect();
            Ok(Output::ok(json!({ "s": map }), text))
        }
        Command::Class { germ, n, mode, q, .. } => {
            let res = germ.resolution()?;
            let n = positive(*n, "--n")?;
            match (mode, q) {
                (Mode::Count, Some(q)) => {
                    let c = count_xn1_formula(&res, n, *q)?;
                    Ok(Output::ok(json!({ "n": n, "q": q, "count": c.to_string() }), c.to_string()))
                }
                (Mode::Count, None) => Err(Failure::usage("--mode count needs --q")),
                (_, Some(_)) => Err(Failure::usage("--q only applies with --mode count")),
                (m, None) => {
                    let v = class_xn1(&res, n, cover_mode(*m)?)?;
                    Ok(Output::ok(json!({ "n": n, "class": v.to_string() }), v.to_string()))
                }
            }
        }
        Command::Series { germ, mode, n, .. } => {
            let res = germ.resolution()?;
            let p = motivic_series_p(&res, cover_mode(*mode)?)?;
            let mut json = json!({ "series": p.render() });
            let mut text = p.render();
            if let Some(n) = n {
                let c = p.coefficient(*n);
                json["n"] = json!(n);
                json["coefficient"] = json!(c.to_string());
                text = format!("{text}\nT^{n}: {c}");
            }
            Ok(Output::ok(json, text))
        }
        Command::Volume { germ, mode, .. } => {
            let res = germ.resolution()?;
            let value = match cover_mode(*mode)? {
                CoverMode::Chi => motivic_volume_chi(&res).to_string(),
                CoverMode::Split => motivic_volume_s(&res)?.to_string(),
            };
            Ok(Output::ok(json!({ "volume": value }), value))
        }
        Command::Count { germ, n, q, out } => {
            let c = count_points_xn1(&germ.polynomial()?, *n, *q, &count_options(out))?;
            Ok(Output::ok(json!({ "n": n, "q": q, "count": c.to_string() }), c.to_string()))
        }
        Command::FixedCount { germ, n, d, q, out } => {
            let c = count_fixed_locus(&germ.polynomial()?, *n, *d, *q, &count_options(out))?;
            Ok(Output::ok(json!({ "n": n, "d": d, "q": q, "count": c.to_string() }), c.to_string()))
        }
        Command::Verify { which } => {
            let report = match which {
                VerifyCommand::Mt { germ, n, primes, out } => {
                    verify_mt(&germ.germ()?, *n, primes.as_deref(), &count_options(out))?
                }
                VerifyCommand::Pt { germ, n, primes, out } => {
                    verify_pt_counts(&germ.germ()?, *n, primes, &count_options(out))?
                }
                VerifyCommand::Sec { germ, n, d, primes, out } => {
                    verify_sec(&germ.germ()?, *n, *d, primes.as_deref(), &count_options(out))?
                }
                VerifyCommand::Triv {
                    exponents, k, m, n, q, ..
                } => verify_triv(exponents, k, *m, *n, *q)?,
            };
            Ok(Output::report(report))
        }
    }
}

fn count_options(out: &OutArgs) -> CountOptions {
    CountOptions {
        work_bound: out.work_bound,
    }
}

fn out_args(command: &Command) -> &OutArgs {
    match command {
        Command::Resolve { out, .. }
        | Command::Lefschetz { out, .. }
        | Command::Zeta { out, .. }
        | Command::SInvariants { out, .. }
        | Command::Class { out, .. }
        | Command::Series { out, .. }
        | Command::Volume { out, .. }
        | Command::Count { out, .. }
        | Command::FixedCount { out, .. } => out,
        Command::Verify { which } => match which {
            VerifyCommand::Mt { out, .. }
            | VerifyCommand::Pt { out, .. }
            | VerifyCommand::Sec { out, .. }
            | VerifyCommand::Triv { out, .. } => out,
        },
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let out = out_args(&cli.command);
    let result = match out.threads {
        Some(0) => return Err(Failure::usage("--threads must be at least 1")),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Failure::abort(e.to_string()))?
            .install(|| execute(&cli.command))?,
        None => execute(&cli.command)?,
    };
    let mut rendered = if out.json {
        serde_json::to_string_pretty(&result.json).expect("json values serialize")
    } else {
        result.text
    };
    rendered.push('\n');
    match &out.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => stdout
            .write_all(rendered.as_bytes())
            .map_err(|e| Failure::abort(e.to_string()))?,
    }
    Ok(if result.failed { 1 } else { 0 })
}

/// Runs one invocation, writing results to `stdout` and diagnostics to
/// `stderr`, and returns the exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
