//! Command execution: validated run configuration, deterministic
//! seeding, report collection, and file output.
//!
//! Row order is fixed by (dimension, trial, function) and every float is
//! rendered with 17 significant digits, so reruns with an identical
//! configuration produce byte-identical files. Worker threads only
//! compute rows; assembly happens in trial order on the calling thread.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use qfiw::dynamics::{dynamic_bound, Evolution};
use qfiw::fop::{catalog, check_axioms, FunctionGrid, MonotoneFunction};
use qfiw::inequalities::{
    default_lambda_sweep, hk_decompose, independence_sweep, main_gap, park_luo_gap,
    refined_heisenberg_gap, schrodinger_gap, witness_park_luo, ParkLuoWitness,
};
use qfiw::purelimit::{pure_equalities, radial_limit_sweep, RadialFamily};
use qfiw::report::{fmt_sig17, write_csv, write_jsonl, GapReport, Verdict};
use qfiw::states::{
    sample, sample_observable, DensityMatrix, Ensemble, MatrixJson, Observable, SamplerConfig,
};
use qfiw::{Error, Result};

use crate::{Cli, Command, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_IO: i32 = 4;

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Serialize(_) => EXIT_IO,
        Error::Config(_) | Error::Parameter(_) | Error::Domain(_) => EXIT_CONFIG,
        _ => EXIT_MATH,
    }
}

/// Run a parsed invocation and return the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let cfg = RunConfig::resolve(cli)?;
    if let Command::Counterexample {
        lambda1: Some(lambda1),
    } = cli.command
    {
        if !(lambda1 > 0.5 && lambda1 < 1.0) {
            return Err(Error::Config(format!("lambda1 {lambda1} outside (0.5, 1)")));
        }
    }
    std::fs::create_dir_all(&cfg.out_dir)?;
    let stem = cli.command.name();
    match dispatch(cli, &cfg) {
        Ok(outcome) => finish(&cfg, stem, outcome),
        Err(e) => {
            let code = exit_code_for(&e);
            Summary::failed(&cfg, stem, code, e.to_string()).write(&cfg.out_dir, stem)?;
            eprintln!("error: {e}");
            Ok(code)
        }
    }
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<Outcome> {
    match &cli.command {
        Command::Axioms => cmd_axioms(cfg),
        Command::Table1 => cmd_table1(cfg),
        Command::Main => cmd_main(cfg),
        Command::Hk => cmd_hk(cfg),
        Command::Refined => cmd_refined(cfg),
        Command::ParkLuo => cmd_park_luo(cfg),
        Command::Counterexample { lambda1 } => cmd_counterexample(cfg, *lambda1),
        Command::Dynamics => cmd_dynamics(cfg),
        Command::PureLimit => cmd_pure_limit(cfg),
        Command::RandomSuite => cmd_random_suite(cfg),
    }
}

/// Validated run parameters shared by the subcommands.
struct RunConfig {
    dims: Vec<usize>,
    trials: u64,
    seed: u64,
    fs: Vec<MonotoneFunction<f64>>,
    out_dir: PathBuf,
    format: Format,
}

impl RunConfig {
    fn resolve(cli: &Cli) -> Result<Self> {
        if cli.dims.is_empty() {
            return Err(Error::Config("need at least one dimension".into()));
        }
        for &d in &cli.dims {
            if !(2..=16).contains(&d) {
                return Err(Error::Config(format!("dimension {d} outside [2, 16]")));
            }
        }
        if cli.trials == 0 || cli.trials > 100_000 {
            return Err(Error::Config(format!(
                "trials {} outside [1, 100000]",
                cli.trials
            )));
        }
        let fs = if cli.f_keys.is_empty() {
            catalog::<f64>()
        } else {
            cli.f_keys
                .iter()
                .map(|k| MonotoneFunction::<f64>::from_key(k))
                .collect::<Result<Vec<_>>>()?
        };
        let out_dir = cli
            .out_dir
            .clone()
            .or_else(|| std::env::var_os("QFIW_OUT_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("qfiw-out"));
        Ok(RunConfig {
            dims: cli.dims.clone(),
            trials: cli.trials,
            seed: cli.seed,
            fs,
            out_dir,
            format: cli.format,
        })
    }
}

/// Whether a row is supposed to hold or to be violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Expect {
    Hold,
    Violate,
}

fn satisfied(expect: Expect, report: &GapReport) -> bool {
    match expect {
        Expect::Hold => report.passed(),
        Expect::Violate => report.verdict == Verdict::Violated,
    }
}

/// Everything a subcommand produces besides its extra files.
struct Outcome {
    rows: Vec<(Expect, GapReport)>,
    /// False when a theory-mandated finding (e.g. a witness) is absent.
    requirements_met: bool,
    extra: Map<String, Value>,
}

impl Outcome {
    fn new(rows: Vec<(Expect, GapReport)>) -> Self {
        Outcome {
            rows,
            requirements_met: true,
            extra: Map::new(),
        }
    }
}

fn finish(cfg: &RunConfig, stem: &str, outcome: Outcome) -> Result<i32> {
    let unexpected = outcome
        .rows
        .iter()
        .filter(|(expect, report)| !satisfied(*expect, report))
        .count();
    let code = if unexpected == 0 && outcome.requirements_met {
        EXIT_OK
    } else {
        EXIT_MATH
    };
    let reports: Vec<GapReport> = outcome.rows.into_iter().map(|(_, r)| r).collect();
    write_reports(cfg, stem, &reports)?;
    Summary::of(cfg, stem, &reports, unexpected, outcome.extra, code).write(&cfg.out_dir, stem)?;
    Ok(code)
}

fn write_reports(cfg: &RunConfig, stem: &str, reports: &[GapReport]) -> Result<()> {
    if matches!(cfg.format, Format::Csv | Format::Both) {
        let file = std::fs::File::create(cfg.out_dir.join(format!("{stem}-reports.csv")))?;
        write_csv(file, reports)?;
    }
    if matches!(cfg.format, Format::Json | Format::Both) {
        let file = std::fs::File::create(cfg.out_dir.join(format!("{stem}-reports.jsonl")))?;
        write_jsonl(file, reports)?;
    }
    Ok(())
}

#[derive(Debug, Default, Serialize)]
struct Counts {
    total: usize,
    holds: usize,
    equality: usize,
    violated: usize,
}

#[derive(Debug, Serialize)]
struct WorstRow {
    gap: f64,
    name: String,
    f_label: String,
    dim: usize,
    seed: Option<u64>,
}

#[derive(Debug, Serialize)]
struct Summary {
    command: String,
    seed: u64,
    dims: Vec<usize>,
    trials: u64,
    format: String,
    f_keys: Vec<String>,
    catalog: Vec<String>,
    counts: Counts,
    /// Rows whose verdict differs from what the run requires.
    unexpected_rows: usize,
    worst: Option<WorstRow>,
    exit_code: i32,
    error: Option<String>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

impl Summary {
    fn of(
        cfg: &RunConfig,
        stem: &str,
        reports: &[GapReport],
        unexpected: usize,
        extra: Map<String, Value>,
        exit_code: i32,
    ) -> Self {
        let mut counts = Counts::default();
        let mut worst: Option<WorstRow> = None;
        for r in reports {
            counts.total += 1;
            match r.verdict {
                Verdict::Holds => counts.holds += 1,
                Verdict::Equality => counts.equality += 1,
                Verdict::Violated => counts.violated += 1,
            }
            if worst.as_ref().is_none_or(|w| r.gap < w.gap) {
                worst = Some(WorstRow {
                    gap: r.gap,
                    name: r.name.clone(),
                    f_label: r.f_label.clone(),
                    dim: r.dim,
                    seed: r.seed,
                });
            }
        }
        Summary {
            command: stem.into(),
            seed: cfg.seed,
            dims: cfg.dims.clone(),
            trials: cfg.trials,
            format: cfg.format.as_str().into(),
            f_keys: cfg.fs.iter().map(|f| f.label().to_string()).collect(),
            catalog: catalog::<f64>()
                .iter()
                .map(|f| f.label().to_string())
                .collect(),
            counts,
            unexpected_rows: unexpected,
            worst,
            exit_code,
            error: None,
            extra,
        }
    }

    fn failed(cfg: &RunConfig, stem: &str, exit_code: i32, message: String) -> Self {
        let mut s = Summary::of(cfg, stem, &[], 0, Map::new(), exit_code);
        s.error = Some(message);
        s
    }

    fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        let mut buf = serde_json::to_vec_pretty(self)?;
        buf.push(b'\n');
        std::fs::write(dir.join(format!("{stem}-summary.json")), buf)?;
        Ok(())
    }
}

const SALT_STATE: u64 = 1;
const SALT_OBS_A: u64 = 2;
const SALT_OBS_B: u64 = 3;
const SALT_HAMILTONIAN: u64 = 4;

// splitmix64 finalizer; spreads (salt, dim, trial) into decorrelated streams
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn draw_seed(base: u64, salt: u64, dim: usize, trial: u64) -> u64 {
    mix64(base ^ mix64(salt ^ mix64(((dim as u64) << 32) | trial)))
}

fn draw_triple(
    cfg: &RunConfig,
    dim: usize,
    trial: u64,
) -> Result<(u64, DensityMatrix, Observable, Observable)> {
    let seed = draw_seed(cfg.seed, SALT_STATE, dim, trial);
    let rho = sample(&SamplerConfig::new(dim, seed, Ensemble::HilbertSchmidt)?)?;
    let a = sample_observable(dim, draw_seed(cfg.seed, SALT_OBS_A, dim, trial), 1.0)?;
    let b = sample_observable(dim, draw_seed(cfg.seed, SALT_OBS_B, dim, trial), 1.0)?;
    Ok((seed, rho, a, b))
}

/// Run `worker` for every (dimension, trial) pair in parallel and splice
/// the produced rows back together in deterministic order.
fn per_trial<W>(cfg: &RunConfig, worker: W) -> Result<Vec<(Expect, GapReport)>>
where
    W: Fn(usize, u64) -> Result<Vec<(Expect, GapReport)>> + Sync,
{
    let mut rows = Vec::new();
    for &dim in &cfg.dims {
        let chunks: Vec<Vec<(Expect, GapReport)>> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| worker(dim, trial))
            .collect::<Result<_>>()?;
        rows.extend(chunks.into_iter().flatten());
    }
    Ok(rows)
}

fn cmd_axioms(cfg: &RunConfig) -> Result<Outcome> {
    let grid = FunctionGrid::<f64>::default_log();
    let mut rows = Vec::new();
    for f in &cfg.fs {
        let mut r = check_axioms(f, &grid)?;
        r.seed = Some(cfg.seed);
        rows.push((Expect::Hold, r));
    }
    Ok(Outcome::new(rows))
}

type Closed = Box<dyn Fn(f64) -> f64>;

/// The fixed catalog rows with the closed forms of their transforms.
fn transform_rows() -> Vec<(MonotoneFunction<f64>, f64, Closed)> {
    let arithmetic = || Box::new(|x: f64| 0.5 * (1.0 + x)) as Closed;
    let power_pair = |b: f64| Box::new(move |x: f64| 0.5 * (x.powf(b) + x.powf(1.0 - b))) as Closed;
    vec![
        (MonotoneFunction::rld(), 0.0, arithmetic()),
        (
            MonotoneFunction::wyd(-0.5).expect("exponent in range"),
            0.0,
            arithmetic(),
        ),
        (MonotoneFunction::bkm(), 0.0, arithmetic()),
        (
            MonotoneFunction::wyd(0.1).expect("exponent in range"),
            0.1 * 0.9,
            power_pair(0.1),
        ),
        (
            MonotoneFunction::wyd(0.25).expect("exponent in range"),
            0.25 * 0.75,
            power_pair(0.25),
        ),
        (
            MonotoneFunction::wyd(0.49).expect("exponent in range"),
            0.49 * 0.51,
            power_pair(0.49),
        ),
        (
            MonotoneFunction::wy(),
            0.25,
            Box::new(|x: f64| x.sqrt()) as Closed,
        ),
        (
            MonotoneFunction::sld(),
            0.5,
            Box::new(|x: f64| 2.0 * x / (1.0 + x)) as Closed,
        ),
    ]
}

fn cmd_table1(cfg: &RunConfig) -> Result<Outcome> {
    let grid = FunctionGrid::<f64>::default_log();
    let mut rows = Vec::new();
    for (f, zero, closed) in transform_rows() {
        let tf = f.tilde();
        let mut dev = (f.f_zero() - zero).abs();
        for &x in grid.points() {
            dev = dev.max((tf.eval(x)? - closed(x)).abs());
        }
        rows.push((
            Expect::Hold,
            GapReport::new("table1", f.label(), 0, Some(cfg.seed), 0.0, dev, 1e-10, ""),
        ));
    }
    Ok(Outcome::new(rows))
}

fn cmd_main(cfg: &RunConfig) -> Result<Outcome> {
    let rows = per_trial(cfg, |dim, trial| {
        let (seed, rho, a, b) = draw_triple(cfg, dim, trial)?;
        cfg.fs
            .iter()
            .map(|f| Ok((Expect::Hold, main_gap(&rho, f, &a, &b, Some(seed))?)))
            .collect()
    })?;
    Ok(Outcome::new(rows))
}

fn cmd_hk(cfg: &RunConfig) -> Result<Outcome> {
    let rows = per_trial(cfg, |dim, trial| {
        let (seed, rho, a, b) = draw_triple(cfg, dim, trial)?;
        let mut out = Vec::with_capacity(cfg.fs.len() * 2);
        for f in &cfg.fs {
            let bound = main_gap(&rho, f, &a, &b, Some(seed))?;
            let decomp = hk_decompose(&rho, f, &a, &b)?;
            let tol = 1e-8 * bound.gap.abs().max(1.0);
            let recon = GapReport::new(
                "hk",
                f.label(),
                dim,
                Some(seed),
                decomp.f_of_f(),
                bound.gap,
                tol,
                bound.state_fingerprint.clone(),
            );
            out.push((Expect::Hold, bound));
            out.push((Expect::Hold, recon));
        }
        Ok(out)
    })?;
    Ok(Outcome::new(rows))
}

fn cmd_refined(cfg: &RunConfig) -> Result<Outcome> {
    let rows = per_trial(cfg, |dim, trial| {
        let (seed, rho, a, b) = draw_triple(cfg, dim, trial)?;
        let mut out = Vec::with_capacity(cfg.fs.len() * 3);
        for f in &cfg.fs {
            let refined = refined_heisenberg_gap(&rho, f, &a, &b, Some(seed))?;
            out.push((Expect::Hold, refined.product));
            out.push((Expect::Hold, refined.factor_a));
            out.push((Expect::Hold, refined.factor_b));
        }
        Ok(out)
    })?;
    Ok(Outcome::new(rows))
}

fn cmd_park_luo(cfg: &RunConfig) -> Result<Outcome> {
    let sqrt = MonotoneFunction::<f64>::from_key("sqrt")?;
    let mut rows = per_trial(cfg, |dim, trial| {
        let (seed, rho, a, b) = draw_triple(cfg, dim, trial)?;
        Ok(vec![(
            Expect::Hold,
            park_luo_gap(&rho, &sqrt, &a, &b, Some(seed))?,
        )])
    })?;
    let mut found = Vec::new();
    let mut missing = Vec::new();
    let mut safe = Vec::new();
    for f in &cfg.fs {
        // a mean with f(0) > 0 exceeds sqrt near zero; the logarithmic
        // mean exceeds it for x > 1
        let expected = f.is_regular() || f.label() == "bkm";
        match witness_park_luo(f)? {
            Some(w) => {
                let mut r = w.report.clone();
                r.seed = Some(cfg.seed);
                rows.push((Expect::Violate, r));
                write_witness(cfg, f.label(), &w)?;
                found.push(f.label().to_string());
            }
            None if expected => missing.push(f.label().to_string()),
            None => safe.push(f.label().to_string()),
        }
    }
    let mut outcome = Outcome::new(rows);
    outcome.requirements_met = missing.is_empty();
    outcome.extra.insert("witnesses_found".into(), json!(found));
    outcome
        .extra
        .insert("witnesses_missing".into(), json!(missing));
    outcome
        .extra
        .insert("no_witness_needed".into(), json!(safe));
    Ok(outcome)
}

fn write_witness(cfg: &RunConfig, label: &str, w: &ParkLuoWitness) -> Result<()> {
    #[derive(Serialize)]
    struct Dump<'a> {
        f_label: &'a str,
        x0: f64,
        rho: MatrixJson,
        a: MatrixJson,
        b: MatrixJson,
        report: &'a GapReport,
    }
    let dump = Dump {
        f_label: label,
        x0: w.x0,
        rho: MatrixJson::from_matrix(w.rho.matrix()),
        a: MatrixJson::from_matrix(w.a.matrix()),
        b: MatrixJson::from_matrix(w.b.matrix()),
        report: &w.report,
    };
    let name = format!("park-luo-witness-{}.json", label.replace(':', "-"));
    let mut buf = serde_json::to_vec_pretty(&dump)?;
    buf.push(b'\n');
    std::fs::write(cfg.out_dir.join(name), buf)?;
    Ok(())
}

fn cmd_counterexample(cfg: &RunConfig, lambda1: Option<f64>) -> Result<Outcome> {
    let lambdas = match lambda1 {
        Some(l) => vec![l],
        None => default_lambda_sweep(),
    };
    let mut rows = Vec::new();
    for mut r in independence_sweep(&lambdas, &cfg.fs)? {
        r.seed = Some(cfg.seed);
        rows.push((Expect::Violate, r));
    }
    Ok(Outcome::new(rows))
}

struct TrajectoryRow {
    dim: usize,
    trial: u64,
    seed: u64,
    f_label: String,
    t: f64,
    lhs: f64,
    rhs: f64,
    gap: f64,
}

type TrialChunk = (Vec<(Expect, GapReport)>, Vec<TrajectoryRow>);

fn cmd_dynamics(cfg: &RunConfig) -> Result<Outcome> {
    let times: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
    let mut rows = Vec::new();
    let mut trajectory = Vec::new();
    for &dim in &cfg.dims {
        let chunks: Vec<TrialChunk> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| -> Result<_> {
                let seed = draw_seed(cfg.seed, SALT_STATE, dim, trial);
                let rho0 = sample(&SamplerConfig::new(dim, seed, Ensemble::HilbertSchmidt)?)?;
                let h =
                    sample_observable(dim, draw_seed(cfg.seed, SALT_HAMILTONIAN, dim, trial), 1.0)?;
                let k = sample_observable(dim, draw_seed(cfg.seed, SALT_OBS_B, dim, trial), 1.0)?;
                let evolution = Evolution::new(rho0, h.clone(), times.clone())?;
                let mut out = Vec::new();
                let mut traj = Vec::new();
                let mut derivative = evolution.derivative_check(0.37)?;
                derivative.seed = Some(seed);
                out.push((Expect::Hold, derivative));
                for &t in &times {
                    let state = evolution.state_at(t)?;
                    for f in &cfg.fs {
                        let r = dynamic_bound(&state, f, &h, &k, Some(seed))?;
                        traj.push(TrajectoryRow {
                            dim,
                            trial,
                            seed,
                            f_label: r.f_label.clone(),
                            t,
                            lhs: r.lhs,
                            rhs: r.rhs,
                            gap: r.gap,
                        });
                        out.push((Expect::Hold, r));
                    }
                }
                Ok((out, traj))
            })
            .collect::<Result<_>>()?;
        for (out, traj) in chunks {
            rows.extend(out);
            trajectory.extend(traj);
        }
    }
    write_trajectory(cfg, &trajectory)?;
    let mut outcome = Outcome::new(rows);
    outcome
        .extra
        .insert("trajectory_rows".into(), json!(trajectory.len()));
    Ok(outcome)
}

fn write_trajectory(cfg: &RunConfig, rows: &[TrajectoryRow]) -> Result<()> {
    let file = std::fs::File::create(cfg.out_dir.join("dynamics-trajectory.csv"))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(file);
    w.write_record(["dim", "trial", "seed", "f_label", "t", "lhs", "rhs", "gap"])?;
    for r in rows {
        w.write_record([
            r.dim.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.f_label.clone(),
            fmt_sig17(r.t),
            fmt_sig17(r.lhs),
            fmt_sig17(r.rhs),
            fmt_sig17(r.gap),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_pure_limit(cfg: &RunConfig) -> Result<Outcome> {
    let epsilons = vec![1e-2, 1e-3, 1e-4, 1e-5];
    let regular: Vec<MonotoneFunction<f64>> =
        cfg.fs.iter().filter(|f| f.is_regular()).cloned().collect();
    let mut rows = Vec::new();
    let mut sweep_rows = Vec::new();
    let mut sweep_summary = Map::new();
    for &dim in &cfg.dims {
        let seed = draw_seed(cfg.seed, SALT_STATE, dim, 0);
        let mut probs = vec![0.0; dim];
        probs[0] = 1.0;
        let pure = DensityMatrix::from_diagonal(&probs)?;
        let a = sample_observable(dim, draw_seed(cfg.seed, SALT_OBS_A, dim, 0), 1.0)?;
        let b = sample_observable(dim, draw_seed(cfg.seed, SALT_OBS_B, dim, 0), 1.0)?;
        for f in &cfg.fs {
            let mut r = pure_equalities(&pure, f, &a, &b)?;
            r.seed = Some(seed);
            rows.push((Expect::Hold, r));
        }
        let family = RadialFamily::new(pure.clone(), epsilons.clone())?;
        let sweep = radial_limit_sweep(&family, &regular, &a, &b)?;
        for row in &sweep.rows {
            sweep_rows.push((dim, row.f_label.clone(), row.epsilon, row.q, row.residual));
        }
        let monotone = sweep.monotone.iter().all(|(_, ok)| *ok);
        sweep_summary.insert(
            format!("dim{dim}"),
            json!({
                "limit": sweep.limit,
                "final_residual": sweep.final_residual,
                "final_spread": sweep.final_spread,
                "monotone": monotone,
            }),
        );
    }
    write_sweep(cfg, &sweep_rows)?;
    let mut outcome = Outcome::new(rows);
    outcome
        .extra
        .insert("sweep".into(), Value::Object(sweep_summary));
    Ok(outcome)
}

fn write_sweep(cfg: &RunConfig, rows: &[(usize, String, f64, f64, f64)]) -> Result<()> {
    let file = std::fs::File::create(cfg.out_dir.join("pure-limit-sweep.csv"))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(file);
    w.write_record(["dim", "f_label", "epsilon", "q", "residual"])?;
    for (dim, f_label, epsilon, q, residual) in rows {
        w.write_record([
            dim.to_string(),
            f_label.clone(),
            fmt_sig17(*epsilon),
            fmt_sig17(*q),
            fmt_sig17(*residual),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_random_suite(cfg: &RunConfig) -> Result<Outcome> {
    let rows = per_trial(cfg, |dim, trial| {
        let (seed, rho, a, b) = draw_triple(cfg, dim, trial)?;
        let mut out = Vec::with_capacity(2 + cfg.fs.len() * 4);
        let pair = schrodinger_gap(&rho, &a, &b, Some(seed))?;
        out.push((Expect::Hold, pair.schrodinger));
        out.push((Expect::Hold, pair.heisenberg));
        for f in &cfg.fs {
            out.push((Expect::Hold, main_gap(&rho, f, &a, &b, Some(seed))?));
            let refined = refined_heisenberg_gap(&rho, f, &a, &b, Some(seed))?;
            out.push((Expect::Hold, refined.product));
            out.push((Expect::Hold, refined.factor_a));
            out.push((Expect::Hold, refined.factor_b));
        }
        Ok(out)
    })?;
    Ok(Outcome::new(rows))
}
