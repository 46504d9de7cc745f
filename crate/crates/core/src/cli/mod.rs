//! The `hitchinlab` command line.
//!
//! Every subcommand prints one JSON report carrying `"schema": 1`. Exit
//! codes: 0 when the report passes, 1 when an identity or drift check fails
//! (or a numerical run breaks down), 2 on bad input.

pub mod config;
pub mod output;

use crate::bundles_p1::{hankel_determinant, splitting_type, TransitionData};
use crate::elliptic_cm::{cm_flow, cm_verify, default_tori, CMState, CmFlowOptions, Torus};
use crate::error::{invalid, Error, Result};
use crate::exactalg::{format_rat, parse_rat, Rat, Series};
use crate::garnier::{
    check_involution, check_involution_sampled, hamilton_flow, FlowOptions, GarnierData, PhaseState, Twist,
};
use crate::gaudin::{commutativity_check, gaudin_operators, gaudin_spectrum};
use crate::liedata::{bun_dim, group_data, Family};
use crate::opers::{schwarzian, transform_hill, transport_residual, CoordinateChange, HillOperator};
use crate::spectral::{hitchin_base_dim, isospectrality_check, spectral_curve};
use crate::verify::verify_all;
use clap::{Parser, Subcommand};
use config::RunConfig;
use num_complex::Complex64;
use output::{rats, render, write_csv};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "hitchinlab", version, about = "Exact and numerical checks for Garnier, Calogero-Moser and Gaudin systems")]
pub struct Cli {
    /// TOML or JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel checks.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Use sampled floating-point checks instead of exact symbolic ones.
    #[arg(long, global = true)]
    pub sampled: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Splitting type of a rank-2 bundle on the projective line.
    #[command(name = "classify-p1")]
    ClassifyP1 {
        #[arg(long)]
        m: usize,
        /// `a_1,…,a_{m−1}` as integers, fractions or decimals.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Garnier system.
    #[command(subcommand)]
    Garnier(GarnierCmd),
    /// Elliptic Calogero-Moser system.
    #[command(subcommand)]
    Cm(CmCmd),
    /// Quantum Gaudin hamiltonians.
    #[command(subcommand)]
    Gaudin(GaudinCmd),
    /// Hill operators and the Schwarzian.
    #[command(subcommand)]
    Oper(OperCmd),
    /// Chevalley degrees and moduli dimensions.
    Dims {
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        genus: i64,
    },
    /// Every module's invariant suite.
    #[command(name = "verify-all")]
    VerifyAll {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GarnierCmd {
    /// Pairwise Poisson brackets of the hamiltonians.
    Check {
        #[arg(long)]
        n: usize,
        /// Keep every twist parameter symbolic.
        #[arg(long)]
        twisted: bool,
        /// Marked points; defaults to 0, 1, 3, 6, …
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        /// Random states for `--sampled`.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Implicit-midpoint flow of one hamiltonian.
    Flow {
        #[arg(long)]
        data: PathBuf,
        /// 1-based index of the generating hamiltonian.
        #[arg(long, default_value_t = 1)]
        h: usize,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        drift_tol: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Spectral curve `y² = a(z) b(z)` at a rational state.
    Spectral {
        #[arg(long)]
        data: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CmCmd {
    /// Flow of `H₂` with drift of the conserved quantities.
    Flow {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        drift_tol: Option<f64>,
        /// Evaluate conserved quantities every this many steps.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Theta and Weierstrass identities on three tori.
    Verify {
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GaudinCmd {
    /// Exact commutators of the hamiltonians and with the diagonal `sl₂`.
    Check {
        #[arg(long)]
        dims: String,
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Joint eigenvalue data on the singular vectors.
    Spectrum {
        #[arg(long)]
        dims: String,
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum OperCmd {
    /// Schwarzian derivative of a coordinate change.
    Schwarzian {
        /// Coefficients `s_0, s_1, …`.
        #[arg(long, allow_hyphen_values = true)]
        series: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Potential of `∂² + u` in a new coordinate.
    Transform {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        s: PathBuf,
    },
}

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, |k| std::env::var(k).ok(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, env: impl Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, env) {
        Ok((report, pass)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &report).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(report.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) if pass => 0,
                Ok(()) => 1,
                Err(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// 1 for numerical breakdowns, 2 for everything caused by the input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } | Error::Collision { .. } | Error::FitResidual { .. } => 1,
        _ => 2,
    }
}

fn execute(cli: &Cli, env: impl Fn(&str) -> Option<String>) -> Result<(String, bool)> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), env)?;
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    if cli.sampled {
        cfg.exact = false;
    }
    cfg.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| invalid(format!("cannot start thread pool: {e}")))?;
    let (report, pass) = pool.install(|| dispatch(&cli.command, &cfg))?;
    Ok((render(&report)?, pass))
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<(Value, bool)> {
    match cmd {
        Command::ClassifyP1 { m, coeffs } => classify_p1(*m, coeffs),
        Command::Garnier(g) => match g {
            GarnierCmd::Check { n, twisted, points, samples, seed } => {
                garnier_check(*n, *twisted, points.as_deref(), *samples, *seed, cfg)
            }
            GarnierCmd::Flow { data, h, t_end, step, drift_tol, csv } => garnier_flow(
                data,
                *h,
                *t_end,
                step.unwrap_or(cfg.step),
                drift_tol.unwrap_or(cfg.drift_tol),
                csv.as_deref(),
            ),
            GarnierCmd::Spectral { data } => garnier_spectral(data),
        },
        Command::Cm(c) => match c {
            CmCmd::Flow { data, t_end, step, drift_tol, stride, csv } => cm_flow_cmd(
                data,
                *t_end,
                step.unwrap_or(cfg.step),
                drift_tol.unwrap_or(cfg.drift_tol),
                *stride,
                csv.as_deref(),
            ),
            CmCmd::Verify { tol, samples, seed } => {
                let tol = tol.unwrap_or(cfg.identity_tol);
                if !(tol > 0.0) {
                    return Err(invalid("--tol must be positive"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let r = cm_verify(&default_tori(), *samples, tol, &mut rng)?;
                Ok((serde_json::to_value(&r).map_err(ser)?, r.pass))
            }
        },
        Command::Gaudin(g) => match g {
            GaudinCmd::Check { dims, points } => {
                let family = gaudin_operators(&parse_dims(dims)?, &parse_rats(points)?)?;
                let r = commutativity_check(&family)?;
                let pass = r.all_zero && r.diagonal_sl2;
                Ok((serde_json::to_value(&r).map_err(ser)?, pass))
            }
            GaudinCmd::Spectrum { dims, points } => {
                let family = gaudin_operators(&parse_dims(dims)?, &parse_rats(points)?)?;
                Ok((serde_json::to_value(gaudin_spectrum(&family)?).map_err(ser)?, true))
            }
        },
        Command::Oper(o) => match o {
            OperCmd::Schwarzian { series, order } => oper_schwarzian(series, order.unwrap_or(cfg.series_order)),
            OperCmd::Transform { u, s } => oper_transform(u, s, cfg.series_order),
        },
        Command::Dims { group, n, genus } => dims(group, *n, *genus),
        Command::VerifyAll { quick, seed } => {
            let r = verify_all(*quick, *seed);
            Ok((serde_json::to_value(&r).map_err(ser)?, r.pass))
        }
    }
}

fn ser(e: serde_json::Error) -> Error {
    invalid(format!("cannot serialize report: {e}"))
}

/// Comma-separated rationals.
pub fn parse_rats(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(parse_rat).collect()
}

fn parse_dims(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|d| d.trim().parse::<usize>().map_err(|_| invalid(format!("bad dimension `{d}`"))))
        .collect()
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("bad JSON in {}: {e}", path.display())))
}

fn json_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => parse_rat(&n.to_string()),
        Value::String(s) => parse_rat(s),
        other => Err(invalid(format!("expected a number, got {other}"))),
    }
}

fn json_rats(v: &Value, key: &str) -> Result<Vec<Rat>> {
    v.as_array()
        .ok_or_else(|| invalid(format!("`{key}` must be an array")))?
        .iter()
        .map(json_rat)
        .collect()
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| invalid(format!("missing field `{key}`")))
}

/// `{"t": [...], "lambda": [...], "y": [...], "p": [...]}`; `lambda` may be
/// omitted for the untwisted system.
pub fn load_garnier_state(path: &Path) -> Result<(GarnierData, PhaseState<Rat>)> {
    let v = read_json(path)?;
    let t = json_rats(field(&v, "t")?, "t")?;
    let data = match v.get("lambda") {
        None | Some(Value::Null) => GarnierData::untwisted(t)?,
        Some(l) => GarnierData::twisted(t, json_rats(l, "lambda")?)?,
    };
    let state = PhaseState::new(json_rats(field(&v, "y")?, "y")?, json_rats(field(&v, "p")?, "p")?)?;
    if state.n() != data.n() {
        return Err(invalid(format!("{} marked points but {} positions", data.n(), state.n())));
    }
    Ok((data, state))
}

fn json_complex(v: &Value, key: &str) -> Result<Complex64> {
    let bad = || invalid(format!("`{key}` entries must be [re, im] pairs"));
    let a = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
    let re = a[0].as_f64().ok_or_else(bad)?;
    let im = a[1].as_f64().ok_or_else(bad)?;
    Ok(Complex64::new(re, im))
}

fn json_complexes(v: &Value, key: &str) -> Result<Vec<Complex64>> {
    v.as_array()
        .ok_or_else(|| invalid(format!("`{key}` must be an array")))?
        .iter()
        .map(|z| json_complex(z, key))
        .collect()
}

/// `{"tau": [re, im], "c": [re, im], "q": [[re, im], ...], "p": [[re, im], ...]}`.
pub fn load_cm_state(path: &Path) -> Result<(Torus, CMState)> {
    let v = read_json(path)?;
    let torus = Torus::new(json_complex(field(&v, "tau")?, "tau")?)?;
    let state = CMState::new(
        json_complexes(field(&v, "q")?, "q")?,
        json_complexes(field(&v, "p")?, "p")?,
        json_complex(field(&v, "c")?, "c")?,
    )?;
    Ok((torus, state))
}

/// A bare coefficient array, or `{"coeffs": [...], "order": K}`.
pub fn load_series(path: &Path, default_order: usize) -> Result<Series> {
    let v = read_json(path)?;
    let (coeffs, order) = match &v {
        Value::Array(_) => (json_rats(&v, "coeffs")?, default_order),
        Value::Object(_) => {
            let order = match v.get("order") {
                None => default_order,
                Some(o) => o.as_u64().ok_or_else(|| invalid("`order` must be a non-negative integer"))? as usize,
            };
            (json_rats(field(&v, "coeffs")?, "coeffs")?, order)
        }
        _ => return Err(invalid(format!("{} must hold an array or an object", path.display()))),
    };
    if coeffs.len() > order + 1 {
        return Err(invalid(format!("{} coefficients exceed order {order}", coeffs.len())));
    }
    Series::new(coeffs, order)
}

fn classify_p1(m: usize, coeffs: &str) -> Result<(Value, bool)> {
    let data = TransitionData::new(m, parse_rats(coeffs)?)?;
    let st = splitting_type(&data);
    let hankel = if m % 2 == 0 { Some(format_rat(&hankel_determinant(data.coeffs())?)) } else { None };
    Ok((
        json!({ "m": m, "k": st.k, "type": format!("O({})+O({})", st.k, st.other()), "hankel": hankel }),
        true,
    ))
}

fn garnier_check(n: usize, twisted: bool, points: Option<&str>, samples: usize, seed: u64, cfg: &RunConfig) -> Result<(Value, bool)> {
    let t = match points {
        Some(p) => parse_rats(p)?,
        None => GarnierData::default_points(n),
    };
    if t.len() != n {
        return Err(invalid(format!("--n {n} but {} points given", t.len())));
    }
    let data = GarnierData::new(t, if twisted { Twist::Symbolic } else { Twist::Untwisted })?;
    if cfg.exact {
        let r = check_involution(&data)?;
        Ok((serde_json::to_value(&r).map_err(ser)?, r.all_zero))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = check_involution_sampled(&data, samples, cfg.identity_tol, &mut rng)?;
        Ok((serde_json::to_value(&r).map_err(ser)?, r.all_zero))
    }
}

fn garnier_flow(path: &Path, h: usize, t_end: f64, step: f64, tol: f64, csv: Option<&Path>) -> Result<(Value, bool)> {
    let (data, state) = load_garnier_state(path)?;
    let traj = hamilton_flow(&data, h, &state.to_f64(), t_end, step, &FlowOptions::default())?;
    let report = traj.report();
    let iso = isospectrality_check(&data, &traj)?;
    let untwisted = data.is_untwisted();
    let pass = report.max_drift.iter().all(|&d| d < tol) && (!untwisted || report.max_constraint < tol) && iso.max_drift < tol;
    if let Some(path) = csv {
        let n = data.n();
        let mut header = vec!["t".to_string()];
        for prefix in ["y", "p", "G"] {
            header.extend((1..=n).map(|i| format!("{prefix}{i}")));
        }
        let rows = traj.times.iter().enumerate().map(|(s, &t)| {
            let st = &traj.states[s];
            let mut row = vec![t];
            row.extend(&st.y);
            row.extend(&st.p);
            row.extend(&traj.hamiltonians[s]);
            row
        });
        write_csv(create(path)?, &header, rows)?;
    }
    Ok((
        json!({
            "n": data.n(),
            "h": h,
            "untwisted": untwisted,
            "drift_tol": tol,
            "flow": report,
            "isospectral": iso,
            "pass": pass,
        }),
        pass,
    ))
}

fn create(path: &Path) -> Result<std::fs::File> {
    std::fs::File::create(path).map_err(|e| invalid(format!("cannot create {}: {e}", path.display())))
}

fn garnier_spectral(path: &Path) -> Result<(Value, bool)> {
    let (data, state) = load_garnier_state(path)?;
    let curve = spectral_curve(&data, &state)?;
    Ok((
        json!({
            "a": rats(curve.a.coeffs()),
            "b": rats(curve.b.coeffs()),
            "deg_a": curve.a.degree(),
            "deg_b": curve.b.degree(),
            "genus": curve.genus,
        }),
        true,
    ))
}

fn cm_flow_cmd(path: &Path, t_end: f64, step: f64, tol: f64, stride: usize, csv: Option<&Path>) -> Result<(Value, bool)> {
    let (torus, state) = load_cm_state(path)?;
    let opts = CmFlowOptions { stride, ..Default::default() };
    let traj = cm_flow(&state, &torus, t_end, step, &opts)?;
    let report = traj.report();
    let pass = report.drift.iter().all(|&d| d < tol);
    if let Some(path) = csv {
        let n = state.n();
        let mut header = vec!["t".to_string()];
        for prefix in ["q", "p"] {
            for i in 1..=n {
                header.push(format!("{prefix}{i}_re"));
                header.push(format!("{prefix}{i}_im"));
            }
        }
        for k in 1..=traj.invariants[0].len() {
            header.push(format!("H{k}_re"));
            header.push(format!("H{k}_im"));
        }
        let rows = traj.times.iter().enumerate().map(|(s, &t)| {
            let st = &traj.states[s];
            let mut row = vec![t];
            row.extend(st.q.iter().chain(&st.p).chain(&traj.invariants[s]).flat_map(|z| [z.re, z.im]));
            row
        });
        write_csv(create(path)?, &header, rows)?;
    }
    let initial: Vec<[f64; 2]> = traj.invariants[0].iter().map(|z| [z.re, z.im]).collect();
    Ok((json!({ "drift_tol": tol, "initial": initial, "report": report, "pass": pass }), pass))
}

fn oper_schwarzian(series: &str, order: usize) -> Result<(Value, bool)> {
    let coeffs = parse_rats(series)?;
    if coeffs.len() > order + 1 {
        return Err(invalid(format!("{} coefficients exceed order {order}", coeffs.len())));
    }
    let s = CoordinateChange::new(Series::new(coeffs, order)?)?;
    let d = schwarzian(&s)?;
    Ok((
        json!({ "order": d.order(), "coeffs": rats(d.coeffs()), "vanishes": d.is_zero() }),
        true,
    ))
}

fn oper_transform(u: &Path, s: &Path, default_order: usize) -> Result<(Value, bool)> {
    let op = HillOperator::new(load_series(u, default_order)?);
    let change = CoordinateChange::new(load_series(s, default_order)?)?;
    let out = transform_hill(&op, &change)?;
    let residual_zero = transport_residual(&op, &change, &out)?.iter().all(Series::is_zero);
    Ok((
        json!({ "order": out.order(), "coeffs": rats(out.u.coeffs()), "transport_residual_zero": residual_zero }),
        residual_zero,
    ))
}

fn dims(group: &str, n: u32, genus: i64) -> Result<(Value, bool)> {
    let family: Family = group.parse()?;
    let d = group_data(family, n)?;
    let bun = bun_dim(d.dim_g, d.dim_z, genus)?;
    let base = hitchin_base_dim(&d.degrees, genus)?;
    Ok((
        json!({
            "group": family.to_string(),
            "n": n,
            "genus": genus,
            "degrees": d.degrees,
            "dim_g": d.dim_g,
            "dim_z": d.dim_z,
            "bun_dim": bun,
            "base_dim": base,
            "consistent": bun == base,
        }),
        bun == base,
    ))
}
