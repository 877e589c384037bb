//! `conebessel`: evaluate, verify, sample and run the acceptance battery.
//!
//! Exit codes: 0 success or all checks passed, 1 a check failed, 2 usage
//! error, 3 domain or numerical error.

mod input;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use conebessel::bessel::{bessel_J, limit_rate, olshanski_psi, wolf_haar_oracle};
use conebessel::cone::{RectMatrix, Spectrum};
use conebessel::dunkl::{
    b_to_a_limit, dunkl_bessel_B, dunkl_bessel_B_imag, dunklchar_check, harish_chandra_check, hyp0F0,
    MultiplicityB,
};
use conebessel::hypergroup::{sample_ball, verify_multiplicativity, verify_product_formula};
use conebessel::jack::{jack_C, pochhammer_gen, Partition};
use conebessel::laplace::{
    sonine_eval, sonine_phi, verify_addition, verify_beta_projection, verify_laplace, verify_laplace_mod,
    verify_polar_route, PolarMethod,
};
use conebessel::linalg::Matrix;
use conebessel::mc::{RngStream, CHUNK};
use conebessel::measures::{haar_unitary, sample_beta_general, sample_matrix_beta, wishart_sample, BetaParams};
use conebessel::report::{SuiteSummary, VerificationReport, SCHEMA_VERSION};
use conebessel::series::{BesselValue, SeriesControl};
use conebessel::special::{beta_const, gamma_omega};
use conebessel::suite::{example_q2_report, rate_report, run_suite, SuiteConfig, IDENTITIES};
use conebessel::{Error, Field, FieldParams};

use input::{cone_point, herm, parse_complex, parse_list, parse_matrix, parse_real, parse_real_list};

#[derive(Parser)]
#[command(name = "conebessel", version, about = "Bessel functions on matrix cones: evaluation and verification")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// File of key=value lines supplying flags not given on the command line.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function.
    Eval(EvalArgs),
    /// Check one identity and print a JSON report.
    Verify(Box<VerifyArgs>),
    /// Draw samples and print them as CSV.
    Sample(SampleArgs),
    /// Run the acceptance battery.
    Suite(SuiteArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Rank of the cone.
    #[arg(long, default_value_t = 1)]
    q: usize,
    /// Base field: R, C or H.
    #[arg(long, default_value = "R")]
    field: String,
    /// Random seed.
    #[arg(long, env = "CONEBESSEL_SEED", default_value_t = 0)]
    seed: u64,
    /// Leave wall-clock times out of reports.
    #[arg(long)]
    no_timestamp: bool,
    /// Full matrix for a matrix-valued flag, as KEY=PATH (repeatable).
    #[arg(long, value_name = "KEY=PATH")]
    matrix_file: Vec<String>,
}

impl Common {
    fn fp(&self) -> Result<FieldParams, Error> {
        FieldParams::new(self.field.parse()?, self.q)
    }

    fn field(&self) -> Result<Field, Error> {
        self.field.parse()
    }

    /// Value of a matrix-valued flag, with `--matrix-file` taking precedence.
    fn matrix_flag(&self, key: &str, flag: &Option<String>) -> Result<String, Error> {
        for entry in &self.matrix_file {
            if let Some((k, path)) = entry.split_once('=') {
                if k.trim() == key {
                    return Ok(format!("@{}", path.trim()));
                }
            }
        }
        flag.clone().ok_or_else(|| Error::Validation(format!("missing --{key}")))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalFn {
    Bessel,
    Jack,
    Pochhammer,
    #[value(name = "dunklA")]
    DunklA,
    #[value(name = "dunklB")]
    DunklB,
    Psi,
    GammaOmega,
    BetaConst,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    function: EvalFn,
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    /// Spectrum, comma separated (complex entries allowed).
    #[arg(long)]
    x: Option<String>,
    /// Partition such as (3,1) or 3,1.
    #[arg(long)]
    lambda: Option<String>,
    /// Jack parameter; defaults to 2/d.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    k2: Option<f64>,
    /// Evaluate type B at the imaginary second argument i*eta.
    #[arg(long)]
    imag: bool,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// Series degree cap.
    #[arg(long, default_value_t = 30)]
    k_max: usize,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "list")]
    identity: Option<String>,
    /// Print the identity table.
    #[arg(long)]
    list: bool,
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    /// Relative tolerance (identity default when absent).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    m1: Option<String>,
    #[arg(long)]
    m2: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// Ascending list of mu values for the limit identities.
    #[arg(long)]
    mus: Option<String>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    ptilde: Option<usize>,
    /// Polar route integration: mc or quad.
    #[arg(long, default_value = "mc")]
    method: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    Wishart,
    Beta,
    BetaGeneral,
    Haar,
    Ball,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    dist: Dist,
    #[command(flatten)]
    common: Common,
    /// Number of samples.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    /// Wishart scale matrix (diagonal list or @path); identity by default.
    #[arg(long)]
    sigma: Option<String>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Ten times fewer Monte Carlo samples.
    #[arg(long)]
    quick: bool,
    #[arg(long, env = "CONEBESSEL_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the JSON summary here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    no_timestamp: bool,
}

/// Failure of a subcommand, mapped onto an exit code.
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Validation(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> Result<T, Failure> {
    v.clone().ok_or_else(|| usage(format!("missing --{name}")))
}

fn real_flag(v: &Option<String>, name: &str) -> Result<f64, Failure> {
    Ok(parse_real(&need(v, name)?)?)
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA_VERSION));
    }
    v
}

fn print_json(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn args_with_config() -> Result<Vec<String>, Failure> {
    let mut args: Vec<String> = std::env::args().collect();
    let pos = args.iter().position(|a| a == "--config" || a.starts_with("--config="));
    if let Some(i) = pos {
        let path = match args[i].strip_prefix("--config=") {
            Some(p) => p.to_string(),
            None => args.get(i + 1).cloned().ok_or_else(|| usage("--config needs a path"))?,
        };
        let text = fs::read_to_string(&path).map_err(|e| usage(format!("cannot read config {path}: {e}")))?;
        let extra = input::config_args(&text, &args)?;
        args.extend(extra);
    }
    Ok(args)
}

fn main() -> ExitCode {
    let args = match args_with_config() {
        Ok(a) => a,
        Err(f) => return report_failure(f),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return report_failure(usage(format!("cannot set thread count: {e}")));
        }
    }
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Suite(a) => cmd_suite(a),
    };
    result.unwrap_or_else(report_failure)
}

fn report_failure(f: Failure) -> ExitCode {
    match f {
        Failure::Usage(m) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Failure::Domain(m) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn value_json(v: &BesselValue) -> Value {
    json!({
        "value": v.value,
        "truncation_degree": v.truncation_degree,
        "est_tail": v.est_tail,
        "converged": v.converged,
        "advice": v.advice,
    })
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.12}", z.re)
    } else {
        format!("{:.12} {} {:.12}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
    }
}

fn cmd_eval(a: &EvalArgs) -> CmdResult {
    let c = &a.common;
    let fp = c.fp()?;
    let ctrl = SeriesControl::new(a.k_max, 1e-12)?;
    let alpha = a.alpha.unwrap_or_else(|| fp.alpha());
    let name = EvalFn::to_possible_value(&a.function).expect("named").get_name().to_string();
    let spectrum = |flag: &Option<String>, key: &str| -> Result<Spectrum, Failure> {
        let v = parse_list(&need(flag, key)?)?;
        if v.len() != fp.q {
            return Err(usage(format!("--{key} must have q = {} entries", fp.q)));
        }
        Ok(Spectrum::complex(v))
    };
    let series: Option<BesselValue>;
    let value: Complex64 = match a.function {
        EvalFn::Bessel => {
            let mu = parse_complex(&need(&a.mu, "mu")?)?;
            let v = bessel_J(mu, &spectrum(&a.x, "x")?, fp, &ctrl)?;
            series = Some(v);
            v.value
        }
        EvalFn::Jack => {
            let lambda: Partition = need(&a.lambda, "lambda")?.parse()?;
            series = None;
            jack_C(&lambda, alpha, &spectrum(&a.x, "x")?)?
        }
        EvalFn::Pochhammer => {
            let lambda: Partition = need(&a.lambda, "lambda")?.parse()?;
            series = None;
            pochhammer_gen(parse_complex(&need(&a.mu, "mu")?)?, &lambda, alpha)
        }
        EvalFn::DunklA => {
            let v = hyp0F0(&spectrum(&a.xi, "xi")?, &spectrum(&a.eta, "eta")?, alpha, &ctrl)?;
            series = Some(v);
            v.value
        }
        EvalFn::DunklB => {
            let k = match (a.k1, a.k2, &a.mu) {
                (Some(k1), Some(k2), _) => MultiplicityB::new(k1, k2)?,
                (None, None, Some(mu)) => MultiplicityB::geometric(parse_real(mu)?, fp)?,
                _ => return Err(usage("dunklB needs --k1 and --k2, or --mu for the geometric multiplicity")),
            };
            let v = if a.imag {
                dunkl_bessel_B_imag(k, &parse_real_list(&need(&a.xi, "xi")?)?, &parse_real_list(&need(&a.eta, "eta")?)?, &ctrl)?
            } else {
                dunkl_bessel_B(k, &parse_list(&need(&a.xi, "xi")?)?, &parse_list(&need(&a.eta, "eta")?)?, &ctrl)?
            };
            series = Some(v);
            v.value
        }
        EvalFn::Psi => {
            fp.require_matrix_field()?;
            let b = parse_matrix(&c.matrix_flag("b", &a.b)?)?;
            let point = cone_point(&c.matrix_flag("a", &a.a)?, fp.field, fp.q)?;
            series = None;
            olshanski_psi(&b, &point)?
        }
        EvalFn::GammaOmega => {
            series = None;
            gamma_omega(fp, parse_complex(&need(&a.mu, "mu")?)?)?
        }
        EvalFn::BetaConst => {
            series = None;
            Complex64::new(beta_const(fp, real_flag(&a.mu, "mu")?, real_flag(&a.nu, "nu")?)?, 0.0)
        }
    };
    if a.json {
        let mut v = json!({ "fn": name, "q": fp.q, "field": fp.field.to_string(), "value": value });
        if let Some(s) = &series {
            v["series"] = value_json(s);
        }
        print_json(&with_schema(v));
    } else {
        let mut out = std::io::stdout().lock();
        match &series {
            Some(s) if s.value.is_nan() => {
                let _ = writeln!(out, "refused: argument too large for double-precision series ({:?})", s.advice);
            }
            Some(s) => {
                let _ = writeln!(
                    out,
                    "{} +- {:.1e} (degree {}, {})",
                    fmt_complex(value),
                    s.est_tail,
                    s.truncation_degree,
                    if s.converged { "converged" } else { "not converged" }
                );
            }
            None => {
                let _ = writeln!(out, "{}", fmt_complex(value));
            }
        }
    }
    if series.is_some_and(|s| !s.converged) {
        return Err(Failure::Domain("series did not converge".into()));
    }
    Ok(ExitCode::SUCCESS)
}

fn print_list() {
    let mut out = std::io::stdout().lock();
    let width = IDENTITIES.iter().map(|(id, _)| id.len()).max().unwrap_or(0);
    for (id, formula) in IDENTITIES {
        let _ = writeln!(out, "{id:<width$}  {formula}");
    }
}

fn cmd_verify(a: &VerifyArgs) -> CmdResult {
    if a.list {
        print_list();
        return Ok(ExitCode::SUCCESS);
    }
    let c = &a.common;
    let id = need(&a.identity, "identity")?;
    let fp = c.fp()?;
    let field = fp.field;
    let q = fp.q;
    let seed = c.seed;
    let point = |key: &str, flag: &Option<String>| -> Result<_, Failure> { Ok(cone_point(&c.matrix_flag(key, flag)?, field, q)?) };
    let samples = |default: usize| a.samples.unwrap_or(default);
    let mu = || real_flag(&a.mu, "mu");
    let nu = || real_flag(&a.nu, "nu");
    let reals = |flag: &Option<String>, key: &str| -> Result<Vec<f64>, Failure> { Ok(parse_real_list(&need(flag, key)?)?) };
    let rep: VerificationReport = match id.as_str() {
        "product-formula" => {
            let tol = a.tol.unwrap_or(if q == 1 { 1e-2 } else { 3e-2 });
            verify_product_formula(mu()?, &point("r", &a.r)?, &point("s", &a.s)?, fp, samples(1_000_000), seed, tol)?
        }
        "multiplicativity" => {
            let tol = a.tol.unwrap_or(if q == 1 { 1e-2 } else { 3e-2 });
            let s = herm(&c.matrix_flag("s", &a.s)?, field, q)?;
            verify_multiplicativity(&s, &point("r", &a.r)?, &point("t", &a.t)?, mu()?, fp, samples(1_000_000), seed, tol)?
        }
        "wolf-haar" => {
            let p = need(&a.p, "p")?;
            let text = c.matrix_flag("x", &a.x)?;
            let m = if text.starts_with('@') {
                parse_matrix(&text)?
            } else {
                Matrix::from_rows(p, q, parse_list(&text)?)?
            };
            let x = RectMatrix::new(m, field)?;
            let n = samples(100_000);
            let cmp = wolf_haar_oracle(&x, fp, n, seed)?;
            VerificationReport::stochastic("wolf-haar", cmp.series.require()?, cmp.mc.value, cmp.mc.stderr, a.tol, seed)
                .with_sigma(3.0)
                .param("p", p)
                .param("q", q)
                .param("field", field.to_string())
                .param("samples", n)
        }
        "harish-chandra" => harish_chandra_check(fp, &reals(&a.xi, "xi")?, &reals(&a.eta, "eta")?, samples(100_000), seed)?,
        "dunklchar" => dunklchar_check(mu()?, fp, &reals(&a.xi, "xi")?, &reals(&a.eta, "eta")?, samples(100_000), seed)?,
        "limit-exp" => {
            let mus = reals(&a.mus, "mus")?;
            let rows = limit_rate(&point("y", &a.y)?, &mus, fp, &SeriesControl::default())?;
            rate_report("limit-exp", &rows).param("q", q).param("field", field.to_string())
        }
        "limit-BtoA" => {
            let mus = reals(&a.mus, "mus")?;
            let rows = b_to_a_limit(fp, &reals(&a.xi, "xi")?, &reals(&a.b, "b")?, &mus, &SeriesControl::default())?;
            rate_report("limit-BtoA", &rows).param("q", q).param("field", field.to_string())
        }
        "laplace" => verify_laplace(mu()?, &point("y", &a.y)?, fp, None, a.tol)?,
        "laplace-mod" => verify_laplace_mod(mu()?, Some(&point("m", &a.m)?), &point("y", &a.y)?, fp, None, a.tol)?,
        "addition" => verify_addition(mu()?, nu()?, &point("m1", &a.m1)?, &point("m2", &a.m2)?, &point("x", &a.x)?, fp, None, a.tol)?,
        "sonine" => sonine_eval(mu()?, nu()?, &point("m", &a.m)?, fp, None, a.tol)?,
        "sonine-phi" => sonine_phi(mu()?, nu()?, &point("s", &a.s)?, &point("x", &a.x)?, fp, None, a.tol)?,
        "polar-route" => {
            let method = match a.method.as_str() {
                "mc" => PolarMethod::MonteCarlo { samples: samples(200_000), seed },
                "quad" => PolarMethod::Quadrature,
                other => return Err(usage(format!("unknown --method {other}; use mc or quad"))),
            };
            let ptilde = need(&a.ptilde, "ptilde")?;
            verify_polar_route(ptilde, need(&a.p, "p")?, &point("lambda", &a.lambda)?, &point("x", &a.x)?, fp, method, a.tol)?
        }
        "beta-projection" => {
            let r: usize = need(&a.r, "r")?.trim().parse().map_err(|_| usage("--r must be an integer here"))?;
            verify_beta_projection(need(&a.ptilde, "ptilde")?, fp, need(&a.p, "p")?, r, samples(200_000), seed)?
        }
        "example-q2" => example_q2_report(&reals(&a.xi, "xi")?)?,
        other => return Err(usage(format!("unknown identity '{other}'; see verify --list"))),
    };
    let rep = if c.no_timestamp { rep.without_timestamp() } else { rep };
    let pass = rep.pass;
    print_json(&with_schema(serde_json::to_value(&rep).expect("serializable")));
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn csv_header(field: Field, rows: usize, cols: usize) -> String {
    let mut names = Vec::new();
    for i in 1..=rows {
        for j in 1..=cols {
            if field == Field::R {
                names.push(format!("m{i}{j}"));
            } else {
                names.push(format!("m{i}{j}_re"));
                names.push(format!("m{i}{j}_im"));
            }
        }
    }
    names.join(",")
}

fn csv_row(field: Field, m: &Matrix) -> String {
    let mut cells = Vec::new();
    for z in m.data() {
        cells.push(format!("{:.17e}", z.re));
        if field != Field::R {
            cells.push(format!("{:.17e}", z.im));
        }
    }
    cells.join(",")
}

type Draw = dyn Fn(&mut RngStream) -> Result<Matrix, Error>;

fn cmd_sample(a: &SampleArgs) -> CmdResult {
    let c = &a.common;
    let fp = c.fp()?;
    fp.require_matrix_field()?;
    let field = c.field()?;
    let q = fp.q;
    let draw: Box<Draw> = match a.dist {
        Dist::Wishart => {
            let p = need(&a.p, "p")?;
            let sigma = match &a.sigma {
                Some(s) => cone_point(s, field, q)?,
                None => conebessel::cone::ConePoint::identity(q, field)?,
            };
            Box::new(move |rng| Ok(wishart_sample(fp, p, &sigma, rng)?.matrix().clone()))
        }
        Dist::Beta => {
            let (p, r) = (need(&a.p, "p")?, need(&a.r, "r")?);
            Box::new(move |rng| Ok(sample_matrix_beta(q, field, p, r, rng)?.matrix().clone()))
        }
        Dist::BetaGeneral => {
            let params = BetaParams::new(fp, need(&a.mu, "mu")?, need(&a.nu, "nu")?)?;
            Box::new(move |rng| Ok(sample_beta_general(&params, rng)?.matrix().clone()))
        }
        Dist::Haar => Box::new(move |rng| haar_unitary(q, field, rng)),
        Dist::Ball => {
            let mu = need(&a.mu, "mu")?;
            Box::new(move |rng| Ok(sample_ball(fp, mu, 1, rng)?.0.remove(0).matrix().clone()))
        }
    };
    let name = Dist::to_possible_value(&a.dist).expect("named").get_name().to_string();
    let mut out = std::io::stdout().lock();
    let params: Vec<String> = [
        Some(format!("dist={name}")),
        Some(format!("q={q}")),
        Some(format!("field={field}")),
        a.p.map(|p| format!("p={p}")),
        a.r.map(|r| format!("r={r}")),
        a.mu.map(|m| format!("mu={m}")),
        a.nu.map(|m| format!("nu={m}")),
        Some(format!("n={}", a.n)),
        Some(format!("seed={}", c.seed)),
    ]
    .into_iter()
    .flatten()
    .collect();
    let _ = writeln!(out, "# {}", params.join(" "));
    let _ = writeln!(out, "{}", csv_header(field, q, q));
    for chunk in 0..a.n.div_ceil(CHUNK) {
        let mut rng = RngStream::new(c.seed, chunk as u64);
        for _ in 0..CHUNK.min(a.n - chunk * CHUNK) {
            let m = draw(&mut rng)?;
            let _ = writeln!(out, "{}", csv_row(field, &m));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_suite(a: &SuiteArgs) -> CmdResult {
    let mut summary: SuiteSummary = run_suite(&SuiteConfig::new(a.seed, a.quick));
    if a.no_timestamp {
        summary.reports = summary.reports.into_iter().map(VerificationReport::without_timestamp).collect();
    }
    for r in &summary.reports {
        eprintln!("{}", r.summary_line());
    }
    eprintln!("{} passed, {} failed", summary.passed, summary.failed);
    let text = serde_json::to_string_pretty(&summary).expect("serializable");
    match &a.json {
        Some(path) => fs::write(path, text + "\n").map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    Ok(ExitCode::from(summary.exit_code() as u8))
}
