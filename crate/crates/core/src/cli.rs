//! Command-line front end: argument parsing, config resolution, report
//! rendering and the exit-code contract.
//!
//! Exit codes: 0 pass, 1 nonzero residual or failed order gate, 2 usage or
//! parse error, 3 pole, 4 precision exhausted.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bigfloat::DEFAULT_PRECISION;
use crate::bivariate::{build_lattice, eval_def1, eval_def2, orthogonality_check, BivFreeParams, BivTruncParams};
use crate::exact::{format_scalar, parse_scalar, rat, Scalar};
use crate::multispectral::{residual_sweep, ResidualOp};
use crate::qlimit::{
    check_operator_limit, check_poly_limit_def1, check_poly_limit_def2, check_recurrence_limit,
    ConvergenceReport, LimitConfig,
};
use crate::univariate::{
    detect_truncation, dunkl_apply, dunkl_eigenvalue, eval_recurrence, gram_matrix, orthogonality_data,
    UniParams,
};
use crate::{Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_RESIDUAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_POLE: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Pole(_) | Error::Normalization(_) => EXIT_POLE,
        Error::Precision { .. } => EXIT_PRECISION,
        Error::Interpolation(_) => EXIT_RESIDUAL,
        Error::Degree { .. } | Error::Inadmissible(_) | Error::Parse(_) | Error::Config(_) => EXIT_USAGE,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bi",
    version,
    about = "Exact Bannai-Ito polynomial tables, identity checks and q -> -1 limit studies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Parameter assignments, e.g. `alpha=1/2 beta=-1/3`.
    #[arg(long, global = true, num_args = 1.., value_name = "K=V")]
    pub params: Vec<String>,
    /// Lattice size of a truncated family.
    #[arg(long = "N", global = true, value_name = "N")]
    pub n: Option<usize>,
    /// Sweep every degree pair with n1 + n2 <= this bound.
    #[arg(long = "max-deg", global = true)]
    pub max_deg: Option<usize>,
    /// Comma separated, strictly decreasing, e.g. `1e-3,1e-4`.
    #[arg(long, global = true, value_delimiter = ',', value_name = "T,..")]
    pub t: Vec<String>,
    /// Working precision in bits for the limit checks.
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for the random sample points of residual sweeps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Random points per degree pair in residual sweeps.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// First variable (or `x` for the univariate family).
    #[arg(long, global = true, visible_alias = "x", allow_hyphen_values = true)]
    pub z1: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z2: Option<String>,
    /// Flat `key = value` file. Flags win over the file, the file over defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one polynomial exactly.
    Eval {
        /// `1` truncated family, `2` free family, `uni` univariate (degree n1 at x = z1).
        #[arg(long, value_enum)]
        def: Family,
        #[arg(long, default_value_t = 0)]
        n1: usize,
        #[arg(long, default_value_t = 0)]
        n2: usize,
    },
    /// Check an identity exactly; exit 1 on any nonzero residual.
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Empirical convergence of the q -> -1 limits.
    Qlimit {
        #[command(subcommand)]
        check: LimitCheck,
    },
    /// Grid, weight and norm tables.
    Table {
        #[command(subcommand)]
        table: TableKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "1")]
    Def1,
    #[value(name = "2")]
    Def2,
    Uni,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum VerifyCheck {
    /// Bivariate Gram matrix on the lattice.
    Ortho,
    /// Univariate Gram matrix on the grid.
    OrthoUni,
    /// Univariate Dunkl eigenvalue equation.
    Dunkl,
    L1,
    L2,
    /// Three-term recurrence in n1.
    Threerec,
    /// Nine-term recurrence.
    Ninerec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum LimitCheck {
    /// Askey-Wilson and q-Racah factors.
    Poly,
    /// Operator coefficients and eigenvalues.
    Operator,
    /// Recurrence coefficients.
    Recurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum TableKind {
    Uni,
    Biv,
}

/// Flags merged with the config file and parsed exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: BTreeMap<String, Scalar>,
    pub n: Option<usize>,
    pub max_deg: Option<usize>,
    pub t: Option<Vec<Scalar>>,
    pub precision: usize,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub points: Option<usize>,
    pub z1: Option<Scalar>,
    pub z2: Option<Scalar>,
}

const FREE_KEYS: [&str; 5] = ["alpha", "beta", "gamma", "delta", "epsilon"];
const TRUNC_KEYS: [&str; 4] = ["p1", "p2", "p3", "c"];
const UNI_KEYS: [&str; 4] = ["rho1", "rho2", "r1", "r2"];

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn pick<T: FromStr>(flag: Option<T>, file: Option<String>, key: &str) -> Result<Option<T>> {
    match (flag, file) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(s)) => s
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("bad value for {key}: {s:?}"))),
        (None, None) => Ok(None),
    }
}

fn parse_list(items: &[String]) -> Result<Vec<Scalar>> {
    items.iter().map(|s| parse_scalar(s)).collect()
}

pub fn resolve(opts: &Options) -> Result<RunConfig> {
    let mut file = match &opts.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    let n = pick(opts.n, file.remove("N"), "N")?;
    let max_deg = pick(opts.max_deg, file.remove("max-deg"), "max-deg")?;
    let precision = pick(opts.precision, file.remove("precision"), "precision")?.unwrap_or(DEFAULT_PRECISION);
    let seed = pick(opts.seed, file.remove("seed"), "seed")?.unwrap_or(1);
    let points = pick(opts.points, file.remove("points"), "points")?;
    let out = opts.out.clone().or(file.remove("out").map(PathBuf::from));
    let format = match (opts.format, file.remove("format")) {
        (Some(f), _) => Some(f),
        (None, Some(s)) => Some(Format::from_str(&s, true).map_err(|_| Error::Parse(format!("bad format {s:?}")))?),
        (None, None) => None,
    };
    let t_file = file.remove("t");
    let t = if !opts.t.is_empty() {
        Some(parse_list(&opts.t)?)
    } else if let Some(s) = t_file {
        Some(parse_list(&s.split(',').map(str::to_string).collect::<Vec<_>>())?)
    } else {
        None
    };
    let z1_file = file.remove("z1");
    let z2_file = file.remove("z2");
    let z1 = opts.z1.clone().or(z1_file).map(|s| parse_scalar(&s)).transpose()?;
    let z2 = opts.z2.clone().or(z2_file).map(|s| parse_scalar(&s)).transpose()?;

    let mut params = BTreeMap::new();
    for (k, v) in file {
        params.insert(k, parse_scalar(&v)?);
    }
    for kv in &opts.params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {kv:?}")))?;
        params.insert(k.trim().to_string(), parse_scalar(v)?);
    }
    Ok(RunConfig { params, n, max_deg, t, precision, format, out, seed, points, z1, z2 })
}

impl RunConfig {
    fn allow(&self, groups: &[&[&str]]) -> Result<()> {
        for k in self.params.keys() {
            if !groups.iter().any(|g| g.contains(&k.as_str())) {
                let known: Vec<&str> = groups.iter().flat_map(|g| g.iter().copied()).collect();
                return Err(Error::Config(format!("unknown parameter {k:?} (expected one of {})", known.join(", "))));
            }
        }
        Ok(())
    }

    fn param(&self, key: &str, default: Scalar) -> Scalar {
        self.params.get(key).cloned().unwrap_or(default)
    }

    fn free(&self) -> BivFreeParams {
        BivFreeParams::new(
            self.param("alpha", rat(1, 2)),
            self.param("beta", rat(1, 3)),
            self.param("gamma", rat(1, 5)),
            self.param("delta", rat(1, 7)),
            self.param("epsilon", rat(1, 11)),
        )
    }

    fn trunc(&self, default_n: usize) -> BivTruncParams {
        BivTruncParams::new(
            self.param("p1", rat(1, 5)),
            self.param("p2", rat(1, 7)),
            self.param("p3", rat(1, 11)),
            self.param("c", rat(1, 3)),
            self.n.unwrap_or(default_n),
        )
    }

    /// Defaults give a type i) family for even `N` and a type iii) family
    /// for odd `N`; a missing `r1` is solved from the truncation condition.
    fn uni(&self, n: usize) -> UniParams {
        let target = rat(n as i64 + 1, 2);
        if n % 2 == 0 {
            let rho1 = self.param("rho1", rat(3, 7));
            let r1 = self.param("r1", &rho1 + &target);
            UniParams::new(rho1, self.param("rho2", rat(-7, 2)), r1, self.param("r2", rat(-4, 5)))
        } else {
            let r2 = self.param("r2", rat(-1, 1));
            let r1 = self.param("r1", &target - &r2);
            UniParams::new(self.param("rho1", rat(-4, 5)), self.param("rho2", rat(-4, 1)), r1, r2)
        }
    }

    fn limit_config(&self) -> LimitConfig {
        let mut cfg = LimitConfig { precision: self.precision, ..LimitConfig::default() };
        if let Some(t) = &self.t {
            cfg.t_values = t.clone();
        }
        cfg
    }

    fn point(&self, z1: Scalar, z2: Scalar) -> (Scalar, Scalar) {
        (self.z1.clone().unwrap_or(z1), self.z2.clone().unwrap_or(z2))
    }
}

fn free_json(p: &BivFreeParams) -> Value {
    json!({
        "alpha": format_scalar(&p.alpha),
        "beta": format_scalar(&p.beta),
        "gamma": format_scalar(&p.gamma),
        "delta": format_scalar(&p.delta),
        "epsilon": format_scalar(&p.epsilon),
    })
}

fn trunc_json(p: &BivTruncParams) -> Value {
    json!({
        "p1": format_scalar(&p.p1),
        "p2": format_scalar(&p.p2),
        "p3": format_scalar(&p.p3),
        "c": format_scalar(&p.c),
        "N": p.n,
    })
}

fn uni_json(p: &UniParams) -> Value {
    json!({
        "rho1": format_scalar(&p.rho1),
        "rho2": format_scalar(&p.rho2),
        "r1": format_scalar(&p.r1),
        "r2": format_scalar(&p.r2),
    })
}

/// A rendered command result.
pub struct Output {
    pub json: Value,
    /// Header first.
    pub csv: Vec<Vec<String>>,
    /// Bare text used when no format is requested (only `eval`).
    pub plain: Option<String>,
    pub code: i32,
    /// Printed to stderr when the run does not pass.
    pub failure: Option<String>,
}

impl Output {
    fn new(json: Value, csv: Vec<Vec<String>>) -> Self {
        Output { json, csv, plain: None, code: EXIT_PASS, failure: None }
    }

    fn fail_if(mut self, failed: bool, msg: impl FnOnce() -> String) -> Self {
        if failed {
            self.code = EXIT_RESIDUAL;
            self.failure = Some(msg());
        }
        self
    }

    pub fn render(&self, format: Option<Format>) -> Result<String> {
        match (format, &self.plain) {
            (None, Some(p)) => Ok(format!("{p}\n")),
            (None, None) | (Some(Format::Json), _) => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json values always serialize");
                s.push('\n');
                Ok(s)
            }
            (Some(Format::Csv), _) => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.csv {
                    w.write_record(row).map_err(|e| Error::Config(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("csv of utf-8 fields is utf-8"))
            }
        }
    }
}

fn draw(rng: &mut ChaCha8Rng) -> Scalar {
    // Odd prime denominators keep samples off the half- and quarter-integer poles.
    const DEN: [i64; 6] = [7, 11, 13, 17, 19, 23];
    rat(rng.gen_range(-60..=60), DEN[rng.gen_range(0..DEN.len())])
}

/// Deterministic sample points for a seed.
pub fn sample_points(seed: u64, count: usize) -> Vec<(Scalar, Scalar)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

fn simplex(max: usize) -> Vec<(usize, usize)> {
    (0..=max).flat_map(|a| (0..=(max - a)).map(move |b| (a, b))).collect()
}

fn cmd_eval(cfg: &RunConfig, family: Family, n1: usize, n2: usize) -> Result<Output> {
    let (z1, z2) = cfg.point(Scalar::zero(), Scalar::zero());
    let (value, params) = match family {
        Family::Def1 => {
            cfg.allow(&[&TRUNC_KEYS])?;
            let p = cfg.trunc(4);
            (eval_def1(&p, n1, n2, &z1, &z2)?, trunc_json(&p))
        }
        Family::Def2 => {
            cfg.allow(&[&FREE_KEYS])?;
            let p = cfg.free();
            (eval_def2(&p, n1, n2, &z1, &z2)?, free_json(&p))
        }
        Family::Uni => {
            cfg.allow(&[&UNI_KEYS])?;
            let p = cfg.uni(cfg.n.unwrap_or(2));
            (eval_recurrence(&p, n1, &z1)?, uni_json(&p))
        }
    };
    let def = match family {
        Family::Def1 => "1",
        Family::Def2 => "2",
        Family::Uni => "uni",
    };
    let v = format_scalar(&value);
    let json = json!({
        "def": def, "params": params, "n1": n1, "n2": n2,
        "z1": format_scalar(&z1), "z2": format_scalar(&z2), "value": v,
    });
    let csv = vec![
        vec!["def", "n1", "n2", "z1", "z2", "value"].into_iter().map(String::from).collect(),
        vec![def.into(), n1.to_string(), n2.to_string(), format_scalar(&z1), format_scalar(&z2), v.clone()],
    ];
    let mut out = Output::new(json, csv);
    out.plain = Some(v);
    Ok(out)
}

fn residual_output(op: &str, params: Value, extra: Value, cases: usize, max: &Scalar, worst: Value) -> Output {
    let mut json = json!({ "op": op, "params": params, "max_residual": format_scalar(max), "cases": cases });
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
        if !worst.is_null() {
            m.insert("worst".into(), worst.clone());
        }
    }
    let csv = vec![
        vec!["op".into(), "cases".into(), "max_residual".into(), "worst".into()],
        vec![op.into(), cases.to_string(), format_scalar(max), if worst.is_null() { String::new() } else { worst.to_string() }],
    ];
    Output::new(json, csv)
        .fail_if(!max.is_zero(), || format!("{op}: nonzero residual {} at {worst}", format_scalar(max)))
}

fn cmd_verify(cfg: &RunConfig, check: VerifyCheck) -> Result<Output> {
    let seed = cfg.seed;
    match check {
        VerifyCheck::Ortho => {
            cfg.allow(&[&TRUNC_KEYS])?;
            let p = cfg.trunc(3);
            let rep = orthogonality_check(&p)?;
            let passed = rep.passed();
            let mut json = serde_json::to_value(&rep).expect("report serializes");
            if let Value::Object(m) = &mut json {
                m.insert("op".into(), "ortho".into());
                m.insert("params".into(), trunc_json(&p));
                if rep.worst.is_none() {
                    m.remove("worst");
                }
            }
            let csv = vec![
                ["op", "N", "cases", "max_residual", "range_extension_holds", "outside_weights_vanish"]
                    .map(String::from)
                    .to_vec(),
                vec![
                    "ortho".into(),
                    rep.n.to_string(),
                    rep.cases.to_string(),
                    format_scalar(&rep.max_residual),
                    rep.range_extension_holds.to_string(),
                    rep.outside_weights_vanish.to_string(),
                ],
            ];
            Ok(Output::new(json, csv).fail_if(!passed, || format!("ortho: failed, worst {:?}", rep.worst)))
        }
        VerifyCheck::OrthoUni => {
            cfg.allow(&[&UNI_KEYS])?;
            let n = cfg.n.unwrap_or(2);
            let p = cfg.uni(n);
            let trunc = detect_truncation(&p, n);
            let data = orthogonality_data(&p, &trunc)?;
            let g = gram_matrix(&p, &data)?;
            let mut max = Scalar::zero();
            let mut worst = Value::Null;
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let r = if i == j { (v - &data.norms[i]).abs() } else { v.abs() };
                    if r > max {
                        max = r;
                        worst = json!([i, j]);
                    }
                }
            }
            let extra = json!({ "N": n, "truncation": trunc });
            Ok(residual_output("ortho-uni", uni_json(&p), extra, (n + 1) * (n + 1), &max, worst))
        }
        VerifyCheck::Dunkl => {
            cfg.allow(&[&UNI_KEYS])?;
            let p = cfg.uni(2);
            let max_deg = cfg.max_deg.unwrap_or(6);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut max, mut worst, mut cases) = (Scalar::zero(), Value::Null, 0);
            for n in 0..=max_deg {
                let f = |x: &Scalar| eval_recurrence(&p, n, x);
                for _ in 0..cfg.points.unwrap_or(n + 2) {
                    let x = draw(&mut rng);
                    let r = (dunkl_apply(&p, f, &x)? - dunkl_eigenvalue(&p, n) * f(&x)?).abs();
                    cases += 1;
                    if r > max {
                        max = r;
                        worst = json!([n, format_scalar(&x)]);
                    }
                }
            }
            let extra = json!({ "max_deg": max_deg, "seed": seed });
            Ok(residual_output("dunkl", uni_json(&p), extra, cases, &max, worst))
        }
        VerifyCheck::L1 | VerifyCheck::L2 | VerifyCheck::Threerec | VerifyCheck::Ninerec => {
            cfg.allow(&[&FREE_KEYS])?;
            let op = match check {
                VerifyCheck::L1 => ResidualOp::L1,
                VerifyCheck::L2 => ResidualOp::L2,
                VerifyCheck::Threerec => ResidualOp::ThreeTerm,
                _ => ResidualOp::NineTerm,
            };
            let p = cfg.free();
            let max_deg = cfg.max_deg.unwrap_or(4);
            let points = sample_points(seed, cfg.points.unwrap_or(5));
            let rep = residual_sweep(op, &p, max_deg, &points)?;
            let worst = rep.worst.as_ref().map_or(Value::Null, |w| json!(w));
            let extra = json!({ "max_deg": max_deg, "seed": seed, "points": points.len() });
            Ok(residual_output(rep.op, free_json(&p), extra, rep.cases, &rep.max_residual, worst))
        }
    }
}

fn cmd_qlimit(cfg: &RunConfig, check: LimitCheck) -> Result<Output> {
    let lc = cfg.limit_config();
    let max_deg = cfg.max_deg.unwrap_or(2);
    let mut reports: Vec<ConvergenceReport> = Vec::new();
    let (name, params) = match check {
        LimitCheck::Poly => {
            cfg.allow(&[&FREE_KEYS, &TRUNC_KEYS])?;
            let (z1, z2) = cfg.point(rat(3, 7), rat(-2, 9));
            let free = cfg.free();
            let trunc = cfg.trunc(max_deg.max(2));
            for (n1, n2) in simplex(max_deg) {
                reports.extend(check_poly_limit_def2(&lc, &free, n1, n2, &z1, &z2)?);
                reports.extend(check_poly_limit_def1(&lc, &trunc, n1, n2, &z1, &z2)?);
            }
            let mut params = free_json(&free);
            if let (Value::Object(m), Value::Object(t)) = (&mut params, trunc_json(&trunc)) {
                m.extend(t);
            }
            ("poly", params)
        }
        LimitCheck::Operator => {
            cfg.allow(&[&FREE_KEYS])?;
            let (z1, z2) = cfg.point(rat(3, 7), rat(-2, 9));
            let p = cfg.free();
            reports = check_operator_limit(&lc, &p, &z1, &z2, &simplex(max_deg))?;
            ("operator", free_json(&p))
        }
        LimitCheck::Recurrence => {
            cfg.allow(&[&FREE_KEYS])?;
            let (z1, z2) = cfg.point(rat(1, 7), rat(-2, 9));
            let p = cfg.free();
            for (n1, n2) in simplex(max_deg) {
                reports.extend(check_recurrence_limit(&lc, &p, n1, n2, &z1, &z2)?);
            }
            ("recurrence", free_json(&p))
        }
    };
    let pass = reports.iter().all(|r| r.pass);
    let json = json!({
        "check": name,
        "params": params,
        "t": lc.t_values.iter().map(format_scalar).collect::<Vec<_>>(),
        "precision": lc.precision,
        "pass": pass,
        "reports": reports,
    });
    let mut csv = vec![["check", "t", "error", "order", "max_imag", "pass"].map(String::from).to_vec()];
    for r in &reports {
        for (t, e) in r.t.iter().zip(&r.error) {
            csv.push(vec![
                r.check.clone(),
                format!("{t:e}"),
                format!("{e:e}"),
                r.order.map_or(String::new(), |o| format!("{o:.4}")),
                format!("{:e}", r.max_imag),
                r.pass.to_string(),
            ]);
        }
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    Ok(Output::new(json, csv).fail_if(!pass, || format!("order gate failed: {}", failed.join(", "))))
}

fn cmd_table(cfg: &RunConfig, kind: TableKind) -> Result<Output> {
    match kind {
        TableKind::Uni => {
            cfg.allow(&[&UNI_KEYS])?;
            let n = cfg.n.unwrap_or(2);
            let p = cfg.uni(n);
            let data = orthogonality_data(&p, &detect_truncation(&p, n))?;
            let mut csv = vec![["k", "grid", "weight", "norm"].map(String::from).to_vec()];
            for k in 0..=n {
                csv.push(vec![
                    k.to_string(),
                    format_scalar(&data.grid[k]),
                    format_scalar(&data.weights[k]),
                    format_scalar(&data.norms[k]),
                ]);
            }
            Ok(Output::new(serde_json::to_value(&data).expect("table serializes"), csv))
        }
        TableKind::Biv => {
            cfg.allow(&[&TRUNC_KEYS])?;
            let lat = build_lattice(&cfg.trunc(2))?;
            let mut csv = vec![["table", "i", "j", "value"].map(String::from).to_vec()];
            let mut row = |t: &str, i: usize, j: Option<usize>, v: &Scalar| {
                csv.push(vec![t.into(), i.to_string(), j.map_or(String::new(), |j| j.to_string()), format_scalar(v)]);
            };
            for (name, table) in [("z1", &lat.z1), ("w1", &lat.w1)] {
                for (r, cols) in table.iter().enumerate() {
                    for (s, v) in cols.iter().enumerate() {
                        row(name, r, Some(s), v);
                    }
                }
            }
            for (name, table) in [("z2", &lat.z2), ("w2", &lat.w2)] {
                for (s, v) in table.iter().enumerate() {
                    row(name, s, None, v);
                }
            }
            for ((a, b), v) in &lat.h {
                row("H", *a, Some(*b), v);
            }
            Ok(Output::new(lat.to_json(), csv))
        }
    }
}

/// Runs a parsed command and writes its report; returns the exit code.
pub fn execute(cli: &Cli) -> Result<i32> {
    let cfg = resolve(&cli.opts)?;
    let out = match &cli.command {
        Command::Eval { def, n1, n2 } => cmd_eval(&cfg, *def, *n1, *n2)?,
        Command::Verify { check } => cmd_verify(&cfg, *check)?,
        Command::Qlimit { check } => cmd_qlimit(&cfg, *check)?,
        Command::Table { table } => cmd_table(&cfg, *table)?,
    };
    let text = out.render(cfg.format)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if let Some(msg) = &out.failure {
        eprintln!("{msg}");
    }
    Ok(out.code)
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
