//! Command-line front end: evaluate the special functions, run the
//! verification suites, drive the continuous transform, and emit the
//! spinor-field demo table.
//!
//! Output goes to stdout and is byte-identical for identical flags and
//! seeds; timing is written to stderr. Exit codes: 0 ok, 2 usage errors,
//! 3 domain errors, 4 verification failure.

mod suites;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperspherical::funcs::{
    self, assoc_z, conical_p, hyper_m, hyper_z, jacobi_p, principal_z, rep_matrix, sph_p, supp_p,
    zonal_z,
};
use hyperspherical::group::ComplexEulerAngles;
use hyperspherical::halfint::HalfInt;
use hyperspherical::harmonic::{
    dirac_field_components, discrete_l_values, radial_bessel, vilenkin_forward, vilenkin_inverse,
    DiracSign, Spectrum,
};
use hyperspherical::oracle::QuadratureSpec;
use hyperspherical::special::{bessel_j, C64};
use serde_json::{json, Value};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "hsph",
    version,
    about = "Hyperspherical functions and harmonic analysis on SL(2,C)"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Relative tolerance for series evaluations and verification gates
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized verification samples
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Number of randomized samples per verification check
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function at a point
    Eval(EvalArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Forward/inverse continuous transform
    Transform(TransformArgs),
    /// Tabulate the spinor-field demo components
    DiracDemo(DiracArgs),
    /// Tabulate a function over a (theta, tau) grid as CSV
    Table(TableArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Function: sph_p | jacobi_p | hyper_z | hyper_m | zonal | assoc |
    /// conical | supp | principal | rep_matrix | cg | bessel_j
    #[arg(long = "fn")]
    function: String,
    #[arg(long)]
    l: Option<HalfInt>,
    #[arg(long)]
    m: Option<HalfInt>,
    #[arg(long)]
    n: Option<HalfInt>,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long, default_value_t = 0.0)]
    psi: f64,
    #[arg(long, default_value_t = 0.0)]
    veps: f64,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    /// principal-series lambda (integer)
    #[arg(long)]
    lambda: Option<i64>,
    /// argument for bessel_j
    #[arg(long)]
    x: Option<f64>,
    /// Clebsch-Gordan indices
    #[arg(long)]
    l1: Option<HalfInt>,
    #[arg(long)]
    l2: Option<HalfInt>,
    #[arg(long)]
    m1: Option<HalfInt>,
    #[arg(long)]
    m2: Option<HalfInt>,
}

#[derive(Args)]
struct VerifyArgs {
    /// symmetry | homomorphism | addition | recurrence | casimir | appell |
    /// integral | cg | commutators | plancherel | all
    #[arg(long)]
    suite: String,
}

#[derive(Args)]
struct TransformArgs {
    /// Test function: exp-decay | shifted-exp | gauss | zero
    #[arg(long = "fn")]
    function: Option<String>,
    #[arg(long, default_value = "0")]
    m: HalfInt,
    #[arg(long, default_value = "0")]
    n: HalfInt,
    #[arg(long, default_value_t = 20.0)]
    rho_max: f64,
    #[arg(long, default_value_t = 400)]
    rho_n: usize,
    /// tau cutoff of the forward quadrature
    #[arg(long, default_value_t = 4.5)]
    tau_max: f64,
    #[arg(long, default_value_t = 256)]
    quad_nodes: usize,
    /// probe the reconstruction and report errors
    #[arg(long)]
    roundtrip: bool,
    /// write the spectrum JSON here instead of stdout
    #[arg(long)]
    out: Option<String>,
    /// read a spectrum JSON and evaluate the inverse
    #[arg(long)]
    spectrum: Option<String>,
    #[arg(long)]
    inverse: bool,
    /// evaluation point for --inverse
    #[arg(long)]
    at: Option<f64>,
}

#[derive(Args)]
struct DiracArgs {
    #[arg(long, default_value = "1/2")]
    l: HalfInt,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    kdot: f64,
    #[arg(long = "C1", default_value_t = 1.0)]
    c1: f64,
    #[arg(long = "C2", default_value_t = 0.0)]
    c2: f64,
    /// cross-check the assembly against the library pieces
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct TableArgs {
    /// sph_p | jacobi_p | hyper_z | zonal | assoc
    #[arg(long = "fn")]
    function: String,
    #[arg(long, default_value = "1")]
    l: HalfInt,
    #[arg(long, default_value = "0")]
    m: HalfInt,
    #[arg(long, default_value = "0")]
    n: HalfInt,
    #[arg(long, default_value_t = 0.0)]
    theta_min: f64,
    #[arg(long, default_value_t = 3.0)]
    theta_max: f64,
    #[arg(long, default_value_t = 0.0)]
    tau_min: f64,
    #[arg(long, default_value_t = 0.0)]
    tau_max: f64,
    #[arg(long, default_value_t = 10)]
    steps: usize,
}

#[derive(Debug)]
enum CliError {
    Domain(String),
    Verification,
}

impl From<funcs::FuncsError> for CliError {
    fn from(e: funcs::FuncsError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<hyperspherical::harmonic::HarmonicError> for CliError {
    fn from(e: hyperspherical::harmonic::HarmonicError) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("domain error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Verification) => ExitCode::from(4),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Eval(args) => cmd_eval(cli, args),
        Command::Verify(args) => {
            suites::cmd_verify(cli.format, &args.suite, cli.samples, cli.seed, cli.tol)
        }
        Command::Transform(args) => cmd_transform(cli, args),
        Command::DiracDemo(args) => cmd_dirac(cli, args),
        Command::Table(args) => cmd_table(args),
    }
}

fn cplx(z: C64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Domain(format!("missing required flag --{name}")))
}

fn print_record(format: Format, record: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(record).unwrap()),
        _ => print_record_text(record),
    }
}

fn print_record_text(record: &Value) {
    if let Some(obj) = record.as_object() {
        for (k, v) in obj {
            match v {
                Value::Object(o) if o.contains_key("re") && o.len() == 2 => {
                    println!("{k}: {} {:+}i", o["re"], o["im"]);
                }
                _ => println!("{k}: {v}"),
            }
        }
    } else {
        println!("{record}");
    }
}

fn cmd_eval(cli: &Cli, args: &EvalArgs) -> Result<(), CliError> {
    let tol = cli.tol.unwrap_or(1e-12);
    let angles = ComplexEulerAngles::new(
        args.phi, args.eps, args.theta, args.tau, args.psi, args.veps,
    );
    let mut inputs = json!({
        "fn": args.function,
        "theta": args.theta,
        "tau": args.tau,
    });
    let outputs: Value = match args.function.as_str() {
        "sph_p" => {
            let (l, m, n) = (need(args.l, "l")?, need(args.m, "m")?, need(args.n, "n")?);
            cplx(sph_p(l, m, n, args.theta)?)
        }
        "jacobi_p" => {
            let (l, m, n) = (need(args.l, "l")?, need(args.m, "m")?, need(args.n, "n")?);
            cplx(jacobi_p(l, m, n, args.tau)?)
        }
        "hyper_z" => {
            let (l, m, n) = (need(args.l, "l")?, need(args.m, "m")?, need(args.n, "n")?);
            cplx(hyper_z(l, m, n, args.theta, args.tau)?)
        }
        "hyper_m" => {
            let (l, m, n) = (need(args.l, "l")?, need(args.m, "m")?, need(args.n, "n")?);
            cplx(hyper_m(l, m, n, &angles)?)
        }
        "zonal" => cplx(zonal_z(need(args.l, "l")?, args.theta, args.tau)?),
        "assoc" => cplx(assoc_z(
            need(args.l, "l")?,
            need(args.m, "m")?,
            args.theta,
            args.tau,
        )?),
        "conical" => {
            let r = conical_p(
                need(args.rho, "rho")?,
                need(args.m, "m")?,
                need(args.n, "n")?,
                args.tau,
                tol,
            )?;
            json!({
                "value": cplx(r.value),
                "terms_used": r.terms_used,
                "converged": r.converged,
                "est_error": r.est_error,
            })
        }
        "supp" => {
            let r = supp_p(
                need(args.sigma, "sigma")?,
                need(args.m, "m")?,
                need(args.n, "n")?,
                args.tau,
                tol,
            )?;
            json!({
                "value": cplx(r.value),
                "terms_used": r.terms_used,
                "converged": r.converged,
                "est_error": r.est_error,
            })
        }
        "principal" => {
            let r = principal_z(
                need(args.lambda, "lambda")?,
                need(args.rho, "rho")?,
                need(args.m, "m")?,
                need(args.n, "n")?,
                args.theta,
                args.tau,
                tol,
            )?;
            json!({
                "value": cplx(r.value),
                "terms_used": r.terms_used,
                "converged": r.converged,
                "est_error": r.est_error,
            })
        }
        "rep_matrix" => {
            let l = need(args.l, "l")?;
            let t = rep_matrix(l, &angles)?;
            let rows: Vec<Value> = HalfInt::weights(l)
                .map(|m| Value::Array(HalfInt::weights(l).map(|n| cplx(t.get(m, n))).collect()))
                .collect();
            inputs["l"] = json!(l.to_string());
            json!({"dim": t.dim_row, "rows": rows})
        }
        "cg" => {
            let v = hyperspherical::cg::cg_su2(
                need(args.l1, "l1")?,
                need(args.l2, "l2")?,
                need(args.l, "l")?,
                need(args.m1, "m1")?,
                need(args.m2, "m2")?,
            );
            json!({ "value": v })
        }
        "bessel_j" => {
            let l = need(args.l, "l")?;
            json!({"value": bessel_j(l, need(args.x, "x")?, tol)})
        }
        other => {
            return Err(CliError::Domain(format!("unknown function `{other}`")));
        }
    };
    if let Some(l) = args.l {
        inputs["l"] = json!(l.to_string());
    }
    if let Some(m) = args.m {
        inputs["m"] = json!(m.to_string());
    }
    if let Some(n) = args.n {
        inputs["n"] = json!(n.to_string());
    }
    let record = json!({
        "command": "eval",
        "inputs": inputs,
        "outputs": outputs,
        "tolerances": {"tol": tol},
    });
    if cli.format == Format::Csv {
        return Err(CliError::Domain(
            "eval does not produce CSV; use table".into(),
        ));
    }
    print_record(cli.format, &record);
    Ok(())
}

fn named_test_function(name: &str) -> Result<Box<dyn Fn(f64) -> C64>, CliError> {
    match name {
        "exp-decay" => Ok(Box::new(|x: f64| C64::new((1.0 - x).exp(), 0.0))),
        "shifted-exp" => Ok(Box::new(|x: f64| {
            C64::new((1.0 - x).exp() * (x - 1.0), 0.0)
        })),
        "gauss" => Ok(Box::new(|x: f64| {
            C64::new((-(x - 2.0) * (x - 2.0) * 2.0).exp(), 0.0)
        })),
        "zero" => Ok(Box::new(|_| C64::new(0.0, 0.0))),
        other => Err(CliError::Domain(format!("unknown test function `{other}`"))),
    }
}

fn cmd_transform(cli: &Cli, args: &TransformArgs) -> Result<(), CliError> {
    if args.inverse {
        let path = args
            .spectrum
            .as_ref()
            .ok_or_else(|| CliError::Domain("--inverse needs --spectrum FILE".into()))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Domain(format!("cannot read {path}: {e}")))?;
        let spec = Spectrum::from_json(&text)
            .map_err(|e| CliError::Domain(format!("bad spectrum JSON: {e}")))?;
        let x = need(args.at, "at")?;
        if x < 1.0 {
            return Err(CliError::Domain("inverse point must satisfy x >= 1".into()));
        }
        let v = vilenkin_inverse(&spec, x)?;
        let record = json!({
            "command": "transform-inverse",
            "inputs": {"spectrum": path, "at": x},
            "outputs": {"value": cplx(v)},
        });
        print_record(cli.format, &record);
        return Ok(());
    }

    let name = args
        .function
        .as_deref()
        .ok_or_else(|| CliError::Domain("forward transform needs --fn".into()))?;
    let f = named_test_function(name)?;
    let grid: Vec<f64> = (0..args.rho_n)
        .map(|i| args.rho_max * i as f64 / (args.rho_n - 1).max(1) as f64)
        .collect();
    let quad = QuadratureSpec::gauss_legendre(0.0, args.tau_max, args.quad_nodes);
    let l_list = discrete_l_values(args.m, args.n);
    let spec = vilenkin_forward(&*f, args.m, args.n, &grid, &l_list, &quad)?;
    if let Some(warn) = spec.grid_warning() {
        eprintln!("warning: rho grid may be coarse (adjacent jump {warn:.1}% of peak)");
    }
    let spectrum_json = spec.to_json();
    if let Some(out) = &args.out {
        std::fs::write(out, &spectrum_json)
            .map_err(|e| CliError::Domain(format!("cannot write {out}: {e}")))?;
    }

    if args.roundtrip {
        let probes = [1.2, 1.5, 3.0];
        let chats: Vec<f64> = probes
            .iter()
            .map(|&x| {
                let rec = vilenkin_inverse(&spec, x)?;
                Ok((f(x) / rec).re)
            })
            .collect::<Result<_, CliError>>()?;
        let chat = chats.iter().sum::<f64>() / chats.len() as f64;
        let mut worst = 0.0f64;
        for &x in &probes {
            let rec = vilenkin_inverse(&spec, x)? * chat;
            let denom = f(x).norm().max(1e-300);
            worst = worst.max((rec - f(x)).norm() / denom);
        }
        let chat_spread = chats
            .iter()
            .map(|c| (c - chat).abs() / chat.abs().max(1e-300))
            .fold(0.0f64, f64::max);
        let record = json!({
            "command": "transform",
            "inputs": {"fn": name, "m": args.m.to_string(), "n": args.n.to_string(),
                       "rho_max": args.rho_max, "rho_n": args.rho_n},
            "outputs": {
                "normalization_constant": chat,
                "normalization_spread": chat_spread,
                "max_relative_roundtrip_error": worst,
                "discrete_terms": spec.discrete.len(),
            },
        });
        print_record(cli.format, &record);
    } else if args.out.is_none() {
        println!("{spectrum_json}");
    }
    Ok(())
}

fn cmd_dirac(cli: &Cli, args: &DiracArgs) -> Result<(), CliError> {
    let kappa = C64::new(args.kappa, 0.0);
    let kdot = C64::new(args.kdot, 0.0);
    let c1 = C64::new(args.c1, 0.0);
    let c2 = C64::new(args.c2, 0.0);
    let _ = cli;
    println!(
        "r,theta,tau,psi1_re,psi1_im,psi2_re,psi2_im,psidot1_re,psidot1_im,psidot2_re,psidot2_im"
    );
    let mut worst_check = 0.0f64;
    for r_idx in 1..=3 {
        let r = 0.5 * r_idx as f64;
        for theta_idx in 1..=3 {
            let theta = 0.25 * std::f64::consts::PI * theta_idx as f64;
            for tau_idx in 1..=2 {
                let tau = 0.4 * tau_idx as f64;
                let a = ComplexEulerAngles::new(0.3, 0.1, theta, tau, 0.0, 0.0);
                let comps =
                    dirac_field_components(r, &a, args.l, kappa, kdot, c1, c2, DiracSign::Upper)?;
                println!(
                    "{r},{theta},{tau},{},{},{},{},{},{},{},{}",
                    comps[0].re,
                    comps[0].im,
                    comps[1].re,
                    comps[1].im,
                    comps[2].re,
                    comps[2].im,
                    comps[3].re,
                    comps[3].im
                );
                if args.check {
                    // psi1 must equal f1(r) e^{-1/2(eps+i phi)} Z^{1/2}_l
                    let (f1, _) = radial_bessel(args.l, kappa, kdot, r, c1, c2);
                    let z = assoc_z(args.l, HalfInt::HALF, theta, tau)?;
                    let phase = C64::new(-0.5 * a.eps, -0.5 * a.phi).exp();
                    worst_check = worst_check.max((comps[0] - f1 * phase * z).norm());
                }
            }
        }
    }
    if args.check {
        eprintln!("assembly check worst deviation: {worst_check:.3e}");
        if worst_check > 1e-12 {
            return Err(CliError::Verification);
        }
    }
    Ok(())
}

fn cmd_table(args: &TableArgs) -> Result<(), CliError> {
    println!("theta,tau,value_re,value_im");
    let steps = args.steps.max(2);
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        let theta = args.theta_min + t * (args.theta_max - args.theta_min);
        let tau = args.tau_min + t * (args.tau_max - args.tau_min);
        let v = match args.function.as_str() {
            "sph_p" => sph_p(args.l, args.m, args.n, theta)?,
            "jacobi_p" => jacobi_p(args.l, args.m, args.n, tau)?,
            "hyper_z" => hyper_z(args.l, args.m, args.n, theta, tau)?,
            "zonal" => zonal_z(args.l, theta, tau)?,
            "assoc" => assoc_z(args.l, args.m, theta, tau)?,
            other => {
                return Err(CliError::Domain(format!(
                    "unknown table function `{other}`"
                )))
            }
        };
        println!("{theta},{tau},{},{}", v.re, v.im);
    }
    Ok(())
}
