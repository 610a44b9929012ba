//! `threshlab`: generate instances, certify q-smallness, estimate critical
//! probabilities, run the fragmentation processes and verify the threshold
//! bounds from the command line.
//!
//! Machine-readable output goes to `--out` (or stdout), human summaries to
//! stderr. Exit codes: 0 success, 1 a verification failed, 2 usage, input or
//! resource error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use threshlab::certify::{self, Budget, Certificate};
use threshlab::estimate::{
    constant_check, lemma44_record, not_small_q, pc_auto, pc_exact, pc_monte_carlo,
    records_to_csv, verify_kkpp, verify_main_at, verify_prop21, VerificationRecord, VerifyOptions,
};
use threshlab::exec::Exec;
use threshlab::families::FamilySpec;
use threshlab::format::{read_hypergraph_file, write_hypergraph};
use threshlab::process::{run_batch, FailureRule, RunSpec};
use threshlab::rng::substream;
use threshlab::suite::{run_full_suite, SuiteConfig};
use threshlab::Hypergraph;

#[derive(Parser, Debug)]
#[command(name = "threshlab", version, about = "Hypergraph threshold laboratory")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Master seed; trial i draws from a substream derived from it.
    #[arg(long, global = true, env = "THRESHLAB_SEED", default_value_t = 1)]
    seed: u64,
    /// Trials or Monte Carlo draws (default depends on the command).
    #[arg(long, global = true, env = "THRESHLAB_TRIALS")]
    trials: Option<usize>,
    /// Bisection tolerance for q(H) and for Monte Carlo p_c.
    #[arg(long, global = true, env = "THRESHLAB_TOL")]
    tol: Option<f64>,
    /// Cover weight parameter q (default: just above q(H), where H is not q-small).
    #[arg(long, global = true, env = "THRESHLAB_Q")]
    q: Option<f64>,
    /// Failure probability for run-restart, run-main and verify main.
    #[arg(long, global = true, env = "THRESHLAB_EPS")]
    eps: Option<f64>,
    /// Sampling factor L for verify prop21.
    #[arg(long = "L", global = true, env = "THRESHLAB_L", default_value_t = 8.0)]
    l: f64,
    /// Cap on the number of edge subsets the exact cover search enumerates.
    #[arg(long, global = true, env = "THRESHLAB_BUDGET")]
    budget: Option<u64>,
    /// Output file (a directory for `suite`); stdout when absent.
    #[arg(long, global = true, env = "THRESHLAB_OUT")]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "THRESHLAB_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a family instance in the hypergraph file format.
    Gen { family: String },
    /// Decide q-smallness at --q with a certificate, or compute q(H) without it.
    Qsmall { instance: String },
    /// Largest kappa for which the instance is kappa-spread.
    Spread { instance: String },
    /// Critical probability p_c.
    Pc {
        instance: String,
        #[arg(long, value_enum, default_value_t = PcMethod::Auto)]
        method: PcMethod,
    },
    /// Halving process.
    RunPp { instance: String },
    /// Restart process.
    RunRestart { instance: String },
    /// Success/failure retry process.
    RunMain {
        instance: String,
        #[arg(long, value_enum, default_value_t = Rule::Fragments)]
        rule: Rule,
    },
    /// Check one of the threshold inequalities.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Re-check a q-smallness certificate against an instance.
    CheckCert { instance: String, certificate: PathBuf },
    /// Run the full acceptance matrix.
    Suite {
        /// Thread counts for the determinism re-runs; the first run is reported.
        #[arg(long, value_delimiter = ',', default_value = "8,4,1")]
        thread_counts: Vec<usize>,
        /// Draws per Monte Carlo probability.
        #[arg(long, default_value_t = 20_000)]
        mc_trials: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    /// p_c <= min(1, 8 q(H) log2(2 l)) together with q(H) <= p_c.
    Kkpp { instance: String },
    /// q(H) <= p_c.
    Firstmoment { instance: String },
    /// P(X_p contains an edge) > 1 - eps at p = min(1, 48 q log2(l/eps)).
    Main { instance: String },
    /// Mean fragment weight per size against L^-t binom(l, t).
    Prop21 {
        instance: String,
        /// A single size t instead of every 1 <= t <= l.
        #[arg(long)]
        t: Option<usize>,
    },
    /// The exact constant computation 819/4096 + 1/32 < 1/4.
    Constants,
    /// A kappa-spread instance is not (1/kappa)-small.
    Lemma44 { instance: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PcMethod {
    Auto,
    Exact,
    Mc,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Rule {
    Fragments,
    Residual,
}

/// Everything that determines a command's output, written next to it.
#[derive(Serialize)]
struct ExperimentConfig<'a> {
    command: String,
    instance: Option<&'a str>,
    #[serde(flatten)]
    params: &'a Common,
    version: &'static str,
}

/// Command failures that are not verification failures.
struct Failure(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.into())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Gen { family } => {
            let h = family.parse::<FamilySpec>()?.generate()?;
            emit(c, &write_hypergraph(&h))?;
            eprintln!("{family}: {} vertices, {} edges", h.ground_size(), h.len());
            Ok(true)
        }
        Command::Qsmall { instance } => qsmall(c, instance),
        Command::Spread { instance } => {
            let h = load(instance)?;
            let w = certify::spread_of_with(&h, budget(c))?;
            eprintln!("kappa = {} (witness {:?}, in {} edges)", w.kappa, w.witness_y, w.count);
            emit_json(c, &w)?;
            Ok(true)
        }
        Command::Pc { instance, method } => {
            let h = load(instance)?;
            let opts = options(c, 20_000);
            let est = match method {
                PcMethod::Auto => pc_auto(&h, &opts)?,
                PcMethod::Exact => pc_exact(&h)?,
                PcMethod::Mc => pc_monte_carlo(&h, opts.trials, opts.mc_pc_tol, c.seed, Exec::default())?,
            };
            eprintln!(
                "p_c = {:.6} in [{:.6}, {:.6}] ({})",
                est.value,
                est.ci_low,
                est.ci_high,
                est.method.name()
            );
            emit_json(c, &est)?;
            Ok(true)
        }
        Command::RunPp { instance } => run_process(c, "run-pp", instance, |_| RunSpec::Pp),
        Command::RunRestart { instance } => {
            run_process(c, "run-restart", instance, |eps| RunSpec::Restart { eps })
        }
        Command::RunMain { instance, rule } => {
            let rule = match rule {
                Rule::Fragments => FailureRule::Fragments,
                Rule::Residual => FailureRule::Residual,
            };
            run_process(c, "run-main", instance, |eps| RunSpec::Main { eps, rule })
        }
        Command::Verify { check } => verify(c, check),
        Command::CheckCert { instance, certificate } => {
            let h = load(instance)?;
            let text = fs::read_to_string(certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            let cert = Certificate::from_json(&text)?;
            let check = certify::verify_certificate(&h, &cert)?;
            eprintln!(
                "undercovers: {}, weight {} (claimed {}), small: {}",
                check.undercovers, check.recomputed_weight, cert.weight, check.small
            );
            emit_json(c, &check)?;
            Ok(check.valid())
        }
        Command::Suite { thread_counts, mc_trials } => {
            let cfg = SuiteConfig {
                seed: c.seed,
                trials: c.trials.unwrap_or(10_000),
                mc_trials: *mc_trials,
                exec: Exec::default(),
            };
            let report = run_full_suite(&cfg, thread_counts)?;
            let dir = c.out.clone().unwrap_or_else(|| PathBuf::from("suite-output"));
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            for (name, content) in report.outputs()? {
                write_file(&dir.join(name), &content)?;
            }
            for criterion in &report.criteria {
                println!("{}", criterion.line());
            }
            eprintln!("outputs written to {}", dir.display());
            Ok(report.pass())
        }
    }
}

fn qsmall(c: &Common, instance: &str) -> Outcome {
    let h = load(instance)?;
    let budget = budget(c);
    match c.q {
        Some(q) => {
            let (weight, cover) = certify::min_cover_weight_with(&h, q, budget)?;
            let (small, _) = certify::is_q_small_with(&h, q, budget)?;
            eprintln!("{instance} at q = {q}: min cover weight {weight}, q-small: {small}");
            #[derive(Serialize)]
            struct Answer {
                q: f64,
                small: bool,
                min_weight: f64,
                certificate: Option<Certificate>,
            }
            emit_json(
                c,
                &Answer {
                    q,
                    small,
                    min_weight: weight,
                    certificate: small.then(|| cover.certificate()),
                },
            )?;
        }
        None => {
            let tol = c.tol.unwrap_or(certify::DEFAULT_Q_TOL);
            let q = certify::q_of_with(&h, tol, budget)?;
            eprintln!("{instance}: q(H) = {q} (to {tol})");
            #[derive(Serialize)]
            struct Answer {
                q_of: f64,
                tol: f64,
            }
            emit_json(c, &Answer { q_of: q, tol })?;
        }
    }
    Ok(true)
}

fn run_process(c: &Common, command: &str, instance: &str, spec: impl Fn(f64) -> RunSpec) -> Outcome {
    let h = load(instance)?;
    let opts = options(c, 1);
    let q = match c.q {
        Some(q) => q,
        None => not_small_q(&h, &opts)?,
    };
    let spec = spec(c.eps.unwrap_or(0.1));
    let trials = c.trials.unwrap_or(1);
    write_config(c, command, Some(instance))?;
    if trials == 1 {
        let trace = spec.run(&h, q, &mut substream(c.seed, 0))?;
        eprintln!(
            "{}: q = {q}, found = {}, rounds = {}, U weight = {}",
            trace.variant.name(),
            trace.found,
            trace.rounds.len(),
            trace.u_weight
        );
        let text = match c.out.as_deref() {
            Some(p) if has_extension(p, "csv") => trace.to_csv()?,
            _ => trace.to_json(),
        };
        emit(c, &text)?;
    } else {
        let b = run_batch(&h, q, spec, trials, c.seed, Exec::default())?;
        eprintln!(
            "{}: q = {q}, found {}/{} ({:.4}), U weight mean {:.4} max {:.4}",
            spec.variant().name(),
            b.found,
            b.trials,
            b.found_rate(),
            b.u_weight_mean,
            b.u_weight_max
        );
        emit_json(c, &b)?;
    }
    Ok(true)
}

fn verify(c: &Common, check: &Check) -> Outcome {
    let opts = options(c, 20_000);
    let (name, records): (&str, Vec<VerificationRecord>) = match check {
        Check::Kkpp { instance } => {
            let r = verify_kkpp(instance, &load(instance)?, &opts)?;
            (instance, vec![r.kkpp, r.first_moment])
        }
        Check::Firstmoment { instance } => {
            let r = verify_kkpp(instance, &load(instance)?, &opts)?;
            (instance, vec![r.first_moment])
        }
        Check::Main { instance } => {
            let h = load(instance)?;
            let q = match c.q {
                Some(q) => q,
                None => not_small_q(&h, &opts)?,
            };
            let r = verify_main_at(instance, &h, q, c.eps.unwrap_or(0.1), &opts)?;
            (instance, vec![r.record])
        }
        Check::Prop21 { instance, t } => {
            let q = c.q.ok_or_else(|| anyhow!("verify prop21 needs --q"))?;
            let opts = VerifyOptions {
                trials: c.trials.unwrap_or(10_000),
                ..opts
            };
            (instance, verify_prop21(instance, &load(instance)?, q, c.l, *t, &opts)?)
        }
        Check::Constants => {
            let report = constant_check();
            eprintln!("{} + {} = {}", report.head, report.tail, report.total);
            ("-", report.records())
        }
        Check::Lemma44 { instance } => {
            let opts = VerifyOptions {
                budget: budget(c),
                ..opts
            };
            (instance, vec![lemma44_record(instance, &load(instance)?, &opts)?])
        }
    };
    for r in &records {
        eprintln!(
            "{} {}: {} {} {} -> {}{}",
            r.instance,
            r.check,
            r.lhs,
            r.relation,
            r.rhs,
            if r.pass { "pass" } else { "FAIL" },
            if r.vacuous { " (vacuous)" } else { "" }
        );
    }
    write_config(c, &format!("verify {}", check_name(check)), (name != "-").then_some(name))?;
    let text = match c.out.as_deref() {
        Some(p) if has_extension(p, "json") => {
            serde_json::to_string_pretty(&records).context("serializing records")?
        }
        _ => records_to_csv(&records)?,
    };
    emit(c, &text)?;
    Ok(records.iter().all(|r| r.pass))
}

fn check_name(check: &Check) -> &'static str {
    match check {
        Check::Kkpp { .. } => "kkpp",
        Check::Firstmoment { .. } => "firstmoment",
        Check::Main { .. } => "main",
        Check::Prop21 { .. } => "prop21",
        Check::Constants => "constants",
        Check::Lemma44 { .. } => "lemma44",
    }
}

/// A hypergraph file if `source` names one, otherwise a family spec.
fn load(source: &str) -> anyhow::Result<Hypergraph> {
    if Path::new(source).is_file() {
        return read_hypergraph_file(source).with_context(|| format!("reading {source}"));
    }
    let spec: FamilySpec = source
        .parse()
        .map_err(|_| anyhow!("{source:?} is neither a hypergraph file nor a family spec"))?;
    Ok(spec.generate()?)
}

fn budget(c: &Common) -> Budget {
    c.budget.map(Budget::with_subsets).unwrap_or_default()
}

fn options(c: &Common, default_trials: usize) -> VerifyOptions {
    let mut opts = VerifyOptions {
        trials: c.trials.unwrap_or(default_trials),
        seed: c.seed,
        budget: budget(c),
        ..VerifyOptions::default()
    };
    if let Some(tol) = c.tol {
        opts.q_tol = tol;
        opts.mc_pc_tol = tol;
    }
    opts
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

fn write_file(path: &Path, content: &str) -> anyhow::Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

fn emit(c: &Common, text: &str) -> anyhow::Result<()> {
    match &c.out {
        Some(path) => write_file(path, text),
        None => {
            let mut out = io::stdout().lock();
            let newline = if text.ends_with('\n') { "" } else { "\n" };
            match out.write_all(text.as_bytes()).and_then(|_| out.write_all(newline.as_bytes())) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn emit_json<T: Serialize>(c: &Common, value: &T) -> anyhow::Result<()> {
    emit(c, &serde_json::to_string_pretty(value).context("serializing output")?)
}

/// Writes `<out>.config.json` next to a file output.
fn write_config(c: &Common, command: &str, instance: Option<&str>) -> anyhow::Result<()> {
    let Some(out) = &c.out else { return Ok(()) };
    let config = ExperimentConfig {
        command: command.to_string(),
        instance,
        params: c,
        version: env!("CARGO_PKG_VERSION"),
    };
    let mut path = out.clone().into_os_string();
    path.push(".config.json");
    write_file(
        Path::new(&path),
        &serde_json::to_string_pretty(&config).context("serializing config")?,
    )
}
