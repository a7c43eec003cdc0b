//! Command-line front end.
//!
//! Six subcommands mirror the library surface: `growth` (power-norm
//! brackets and exponent fits), `kreiss` (resolvent / semigroup constant
//! scans), `lp` (randomized square-function inequality searches),
//! `technical` (central Poisson-mass identities), `bootstrap` (the
//! exponent iteration), and `exponents` (the index calculus table).
//!
//! Output is CSV by default, JSON with `--json` (a versioned envelope
//! carrying the config and the statement being exercised); `--out FILE`
//! redirects either format to a file. `--threads` (or the environment
//! variable `KREISSLAB_THREADS`) caps the worker pool; results are
//! byte-identical regardless of the thread count.
//!
//! Exit codes: 0 on success, 1 on internal or convergence failures,
//! 2 on usage errors (bad flags or mathematical domain violations).

use crate::bounds::{bootstrap_trajectory, exponents, technical_check, ExponentRecord};
use crate::error::{Error, Result};
use crate::experiments::{
    fit_exponent, growth_experiment, lp_inequality_experiment, ExperimentConfig, LpKind,
};
use crate::kreiss::{
    absolute_strong_kreiss_constant, default_moduli, default_radii, kreiss_constant,
    strong_kreiss_constant, window_power_sum_ratio, KreissReport, DEFAULT_PHASES,
};
use crate::symbols::mobius_symbol;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "kreiss-lab",
    version,
    about = "Numerical laboratory for power growth of convolution operators on lp(Z)",
    max_term_width = 100
)]
struct Cli {
    /// Emit a JSON report instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Worker threads (overrides KREISSLAB_THREADS; default: all cores).
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Norm brackets of q_a(S)^N along a power grid, with exponent fits.
    Growth(GrowthArgs),
    /// Kreiss-type constant scans for q_a(S).
    Kreiss(KreissArgs),
    /// Randomized square-function inequality searches on the torus.
    Lp(LpArgs),
    /// Central Poisson-mass ratios and window-weight variation checks.
    Technical(TechnicalArgs),
    /// The exponent bootstrap alpha -> alpha/2 + delta_p.
    Bootstrap(BootstrapArgs),
    /// The index calculus table: p', p'', delta_p, tau_p.
    Exponents(ExponentsArgs),
}

#[derive(Args, Debug)]
struct GrowthArgs {
    /// Blaschke parameter in [0, 1); 0 gives the plain shift.
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    /// Lebesgue index of the norms.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Powers: either "A..B" (doubling from A to B) or a comma list.
    #[arg(long, default_value = "16..4096", value_name = "SPEC")]
    n: String,
    /// Truncation tolerance for the powered symbols.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args, Debug)]
struct KreissArgs {
    /// Scan kind.
    #[arg(long, default_value = "kreiss", value_name = "KIND")]
    kind: String,
    /// Blaschke parameter in [0, 1); 0 gives the plain shift.
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    /// Lebesgue index.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Largest resolvent power for --kind iterated.
    #[arg(long, default_value_t = 5, value_name = "K")]
    k_max: u32,
    /// Taylor cutoff for --kind absolute.
    #[arg(long, default_value_t = 1024, value_name = "TERMS")]
    n_max: usize,
    /// Window endpoint N for --kind window.
    #[arg(long, default_value_t = 100, value_name = "N")]
    n: u64,
}

#[derive(Args, Debug)]
struct LpArgs {
    /// Inequality kind: forward, weak-l1, reverse, blocks, or stechkin.
    #[arg(long, default_value = "forward", value_name = "KIND")]
    kind: String,
    /// Lebesgue index.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Base RNG seed.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Trials per interval count.
    #[arg(long, default_value_t = 64)]
    trials: usize,
    /// Largest interval count (L scans the powers of 2 up to this).
    #[arg(long, default_value_t = 16, value_name = "L")]
    l_max: usize,
    /// Intervals are drawn inside [-R, R].
    #[arg(long, default_value_t = 512, value_name = "R")]
    freq_range: i64,
    /// Number of random coefficients per trial.
    #[arg(long, default_value_t = 48, value_name = "COUNT")]
    support: usize,
    /// Baseline quadrature grid size.
    #[arg(long, default_value_t = 256)]
    m: usize,
    /// Tolerance for internal consistency checks.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args, Debug)]
struct TechnicalArgs {
    /// Window sizes N: a comma list.
    #[arg(long = "N", default_value = "10000", value_name = "LIST")]
    n: String,
}

#[derive(Args, Debug)]
struct BootstrapArgs {
    /// Lebesgue index.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Starting exponent (1 = the a-priori linear growth bound).
    #[arg(long, default_value_t = 1.0)]
    alpha0: f64,
    /// ln of the per-step constant E_p.
    #[arg(long, default_value_t = 0.0)]
    log_ep: f64,
    /// Target power selecting the depth K = floor(log2(ln N / ln ln N)).
    #[arg(long = "N", default_value_t = 1_000_000, value_name = "N")]
    n: u64,
}

#[derive(Args, Debug)]
struct ExponentsArgs {
    /// Comma list of Lebesgue indices.
    #[arg(long, default_value = "1.5,2,3,4", value_name = "LIST")]
    p: String,
}

/// Parses argv, runs the requested experiment, and returns the process
/// exit code (0 success, 1 internal error, 2 usage error).
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads.or_else(|| {
        std::env::var("KREISSLAB_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
    });
    let outcome = match threads {
        Some(k) if k > 0 => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => {
                eprintln!("error: cannot build a {k}-thread pool: {e}");
                return 1;
            }
        },
        _ => dispatch(&cli),
    };
    match outcome {
        Ok(payload) => match write_payload(cli.out.as_deref(), &payload) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_payload(out: Option<&std::path::Path>, payload: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, payload),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<String> {
    match &cli.cmd {
        Cmd::Growth(args) => run_growth(args, cli.json),
        Cmd::Kreiss(args) => run_kreiss(args, cli.json),
        Cmd::Lp(args) => run_lp(args, cli.json),
        Cmd::Technical(args) => run_technical(args, cli.json),
        Cmd::Bootstrap(args) => run_bootstrap(args, cli.json),
        Cmd::Exponents(args) => run_exponents(args, cli.json),
    }
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

fn run_growth(args: &GrowthArgs, as_json: bool) -> Result<String> {
    let ns = parse_powers(&args.n)?;
    let series = growth_experiment(args.a, args.p, &ns, args.tol)?;
    if as_json {
        let fit_plain = fit_exponent(&series, false).ok();
        let fit_log = fit_exponent(&series, true).ok();
        return Ok(envelope(
            "growth",
            json!({"a": args.a, "p": args.p, "n": ns, "tol": args.tol}),
            "power norms ||T^N||_p of the unimodular Blaschke convolution symbol grow like N^{|1/2 - 1/p|}",
            json!({"series": series, "fit": fit_plain, "fit_log_corrected": fit_log}),
        ));
    }
    let mut csv = String::from("N,lower,upper,method_lower,method_upper\n");
    for pt in &series.points {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            pt.n, pt.bracket.lower, pt.bracket.upper, pt.bracket.lower_method, pt.bracket.upper_method
        ));
    }
    Ok(csv)
}

fn run_kreiss(args: &KreissArgs, as_json: bool) -> Result<String> {
    let op = mobius_symbol(args.a, 1e-12)?;
    let e0 = vec![Complex64::new(1.0, 0.0)];
    let config = json!({
        "kind": args.kind, "a": args.a, "p": args.p,
        "k_max": args.k_max, "n_max": args.n_max, "n": args.n,
    });
    let (report, statement): (KreissReport, &str) = match args.kind.as_str() {
        "kreiss" => (
            kreiss_constant(&op, args.p, 1, &default_moduli())?,
            "resolvent condition sup (|lambda|-1) ||R(lambda,T)|| over |lambda| > 1",
        ),
        "iterated" => (
            kreiss_constant(&op, args.p, args.k_max, &default_moduli())?,
            "iterated resolvent condition sup_k (|lambda|-1)^k ||R(lambda,T)^k||",
        ),
        "strong" => (
            strong_kreiss_constant(&op, args.p, &default_radii(), DEFAULT_PHASES)?,
            "semigroup condition sup_z e^{-|z|} ||e^{zT}||",
        ),
        "absolute" => (
            absolute_strong_kreiss_constant(&op, args.p, &e0, &default_radii(), args.n_max)?,
            "absolutely summed semigroup condition sup_r e^{-r} sum_n r^n/n! ||T^n x||",
        ),
        "window" => {
            let ratio = window_power_sum_ratio(&op, args.p, &e0, args.n)?;
            let statement =
                "windowed power sum sum_{N-2 sqrt(N) <= n <= N} ||T^n x||_p^p / (N^{p/2} ||x||_p^p)";
            if as_json {
                return Ok(envelope(
                    "kreiss",
                    config,
                    statement,
                    json!({"n": args.n, "ratio": ratio}),
                ));
            }
            return Ok(format!("N,ratio\n{},{}\n", args.n, ratio));
        }
        other => {
            return Err(Error::domain(format!(
                "unknown scan kind {other:?} (expected kreiss, iterated, strong, absolute, or window)"
            )))
        }
    };
    if as_json {
        return Ok(envelope("kreiss", config, statement, json!(report)));
    }
    let mut csv = String::from("parameter,value\n");
    for s in &report.samples {
        csv.push_str(&format!("{},{}\n", s.parameter, s.value));
    }
    Ok(csv)
}

fn run_lp(args: &LpArgs, as_json: bool) -> Result<String> {
    let kind: LpKind = args.kind.parse()?;
    let cfg = ExperimentConfig {
        seed: args.seed,
        trials: args.trials,
        p: args.p,
        l_max: args.l_max,
        freq_range: args.freq_range,
        support_size: args.support,
        m: args.m,
        tol: args.tol,
    };
    let report = lp_inequality_experiment(kind, &cfg)?;
    if as_json {
        return Ok(envelope(
            "lp",
            json!(cfg),
            lp_statement(kind),
            json!(report),
        ));
    }
    let mut csv = String::from("L,worst_ratio,mean_ratio,witness_seed\n");
    for row in &report.per_l {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.l, row.worst_ratio, row.mean_ratio, row.witness_seed
        ));
    }
    Ok(csv)
}

fn lp_statement(kind: LpKind) -> &'static str {
    match kind {
        LpKind::Forward => {
            "square-function bound ||(sum_I |M_I f|^2)^{1/2}||_p <= D_p L^{1/p'-1/2} ||f||_p, p' = min(p,2)"
        }
        LpKind::WeakL1 => {
            "weak-type bound ||(sum_I |M_I f|^2)^{1/2}||_{1,inf} <= D L^{1/2} ||f||_1"
        }
        LpKind::Reverse => {
            "reverse bound ||M_I f||_p <= C_p L^{1/2-1/p''} ||(sum |M_I f|^2)^{1/2}||_p on consecutive intervals, p'' = max(p,2)"
        }
        LpKind::Blocks => {
            "quadratic-block bound ||f||_p <= C L^{1/2-1/p''} (sum_n ||M_{[n^2+1,(n+1)^2]} f||_p^{p'})^{1/p'}"
        }
        LpKind::Stechkin => {
            "monotone-multiplier bound ||sum_k a_k c_k gamma^k||_p <= D_p ||sum_k c_k gamma^k||_p"
        }
    }
}

fn run_technical(args: &TechnicalArgs, as_json: bool) -> Result<String> {
    let ns = parse_u64_list(&args.n)?;
    let reports = ns
        .iter()
        .map(|&n| technical_check(n))
        .collect::<Result<Vec<_>>>()?;
    if as_json {
        return Ok(envelope(
            "technical",
            json!({"N": ns}),
            "central Poisson masses N^{N+K}/(N+K)! stay within a constant of e^N/sqrt(N), and inverse window masses have bounded variation",
            json!(reports),
        ));
    }
    let mut csv = String::from("N,min_ratio,max_ratio,r0,variation_sum_scaled,weight_variation\n");
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.min_ratio, r.max_ratio, r.r0, r.variation_sum_scaled, r.weight_variation
        ));
    }
    Ok(csv)
}

fn run_bootstrap(args: &BootstrapArgs, as_json: bool) -> Result<String> {
    let state = bootstrap_trajectory(args.alpha0, args.p, args.log_ep, args.n)?;
    if as_json {
        let results = json!({
            "state": state,
            "final_alpha": state.final_alpha(),
            "residual": state.residual(),
            "closed_form_final": state.closed_form(state.depth),
            "log_slack_exponent": state.log_slack_exponent(),
        });
        return Ok(envelope(
            "bootstrap",
            json!({"p": args.p, "alpha0": args.alpha0, "log_ep": args.log_ep, "N": args.n}),
            "the exponent iteration alpha -> alpha/2 + delta_p halves the distance to its fixed point 2 delta_p",
            results,
        ));
    }
    let mut csv = String::from("step,alpha\n");
    for (k, alpha) in state.alphas.iter().enumerate() {
        csv.push_str(&format!("{k},{alpha}\n"));
    }
    Ok(csv)
}

fn run_exponents(args: &ExponentsArgs, as_json: bool) -> Result<String> {
    let ps = parse_f64_list(&args.p)?;
    let records = ps
        .iter()
        .map(|&p| exponents(p))
        .collect::<Result<Vec<ExponentRecord>>>()?;
    if as_json {
        return Ok(envelope(
            "exponents",
            json!({"p": ps}),
            "index calculus: p' = min(p,2), p'' = max(p,2), delta_p = (2/p' - 1/p)/2, tau_p = |1/2 - 1/p|",
            json!(records),
        ));
    }
    let mut csv = String::from("p,p_prime,p_dprime,dual,delta,tau,final_exponent\n");
    for r in &records {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.p,
            r.p_prime,
            r.p_dprime,
            r.dual,
            r.delta,
            r.tau,
            2.0 * r.delta
        ));
    }
    Ok(csv)
}

// ---------------------------------------------------------------------------
// Small parsing / formatting helpers.

fn envelope(
    command: &str,
    config: serde_json::Value,
    statement: &str,
    results: serde_json::Value,
) -> String {
    let doc = json!({
        "schema_version": 1,
        "command": command,
        "config": config,
        "statement": statement,
        "results": results,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("reports are serializable");
    s.push('\n');
    s
}

/// "A..B" doubles from A to B (inclusive while it fits); a comma list is
/// taken verbatim.
fn parse_powers(spec: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = spec.split_once("..") {
        let a: u64 = parse_int(a.trim())?;
        let b: u64 = parse_int(b.trim())?;
        if a == 0 || b < a {
            return Err(Error::domain(format!(
                "power range must satisfy 1 <= A <= B, got {spec:?}"
            )));
        }
        let mut v = Vec::new();
        let mut x = a;
        loop {
            v.push(x);
            match x.checked_mul(2) {
                Some(next) if next <= b => x = next,
                _ => break,
            }
        }
        return Ok(v);
    }
    parse_u64_list(spec)
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',').map(|t| parse_int(t.trim())).collect()
}

fn parse_int(s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| Error::domain(format!("expected a nonnegative integer, got {s:?}")))
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("expected a real number, got {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_specs() {
        assert_eq!(parse_powers("16..4096").unwrap(), vec![16, 32, 64, 128, 256, 512, 1024, 2048, 4096]);
        assert_eq!(parse_powers("3..20").unwrap(), vec![3, 6, 12]);
        assert_eq!(parse_powers("4,9,25").unwrap(), vec![4, 9, 25]);
        assert!(parse_powers("8..4").is_err());
        assert!(parse_powers("0..4").is_err());
        assert!(parse_powers("x..4").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_cli(["kreiss-lab", "growth", "--p", "0.5", "--n", "4,8"]), 2);
        assert_eq!(run_cli(["kreiss-lab", "no-such-command"]), 2);
        assert_eq!(run_cli(["kreiss-lab", "lp", "--kind", "bogus"]), 2);
    }

    #[test]
    fn happy_paths_exit_0() {
        assert_eq!(run_cli(["kreiss-lab", "exponents", "--p", "2,4"]), 0);
        assert_eq!(run_cli(["kreiss-lab", "bootstrap", "--N", "1000000", "--json"]), 0);
        assert_eq!(run_cli(["kreiss-lab", "--help"]), 0);
    }

    #[test]
    fn growth_csv_schema() {
        let ns = parse_powers("4..16").unwrap();
        let series = growth_experiment(0.0, 1.0, &ns, 1e-10).unwrap();
        let args = GrowthArgs {
            a: 0.0,
            p: 1.0,
            n: "4..16".into(),
            tol: 1e-10,
        };
        let csv = run_growth(&args, false).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("N,lower,upper,method_lower,method_upper"));
        assert_eq!(csv.lines().count(), series.points.len() + 1);
        for line in lines {
            assert_eq!(line.split(',').count(), 5, "row {line:?}");
        }
    }

    #[test]
    fn technical_json_has_the_envelope_fields() {
        let args = TechnicalArgs { n: "256".into() };
        let payload = run_technical(&args, true).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&payload).unwrap();
        assert_eq!(doc["schema_version"], 1);
        assert_eq!(doc["command"], "technical");
        assert!(doc["results"][0]["min_ratio"].is_number());
        assert!(doc["results"][0]["max_ratio"].is_number());
        assert!(doc["statement"].is_string());
    }
}
