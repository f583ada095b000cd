//! The `ergmat` command line.
//!
//! Every option can also come from a TOML file given by `--config`: global
//! keys (`seed`, `threads`, `out`) at the top level and command options in a
//! table named after the command (`[sample]`, `[verify.borel]`, ...), spelled
//! like the long flags. Flags win over the file. Each run records its fully
//! resolved configuration: inside the document for JSON outputs, on stderr
//! for sample and estimate streams.

use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use ergmat_core::battery;
use ergmat_core::characteristic::cf_mu_s;
use ergmat_core::decomposition::{decompose_samples, default_cluster_tol, estimate_all, mixture_from_estimates};
use ergmat_core::diagnostics::{borel_test, invariance_test, orbital_convergence_test, tightness_diagnostic};
use ergmat_core::exec::map_indexed;
use ergmat_core::matrix::Matrix;
use ergmat_core::moments::estimate;
use ergmat_core::sampling::{haar_square, sample_mu_s};
use ergmat_core::{
    CfGrid, Complex64, CornerMatrix, EstimateMethod, Field, MomentVector, RngHandle, SpectrumDelta, SpectrumEstimate,
    TestReport,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::io::{self, SampleRecord};
use crate::parallel::{available_threads, Exec};

/// Agreement required between the two estimators under `estimate --check`.
pub const CHECK_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(
    name = "ergmat",
    version,
    about = "Sample, identify, decompose and verify ergodic bi-invariant measures mu_s = Law(G diag(s) O) on infinite matrices of rank m"
)]
pub struct Cli {
    /// Root seed of every random stream
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: available parallelism; 1 runs serially)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file supplying defaults for any option
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output path, "-" for stdout
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw n x m corners C_n(G) diag(s) O of the ergodic measure mu_s
    Sample(SampleArgs),
    /// Recover s from each corner via the spectrum of X*X/n or the power sums tr[(X*X/n)^k]
    Estimate(EstimateArgs),
    /// Ergodic decomposition: cluster per-sample estimates into atoms of the mixing measure
    Decompose(DecomposeArgs),
    /// Characteristic functional of mu_s at diagonal test matrices D_lambda
    Cf(CfArgs),
    /// Run verification suites (Borel truncation, bi-invariance, orbital convergence, tightness)
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleArgs {
    /// Measure to draw from; `mu_s` is the ergodic ensemble Law(G diag(s) O)
    #[arg(long)]
    pub measure: Option<String>,
    /// Spectral parameter s_1 >= ... >= s_m >= 0, comma separated
    #[arg(long)]
    pub s: Option<String>,
    /// Sort --s into descending order instead of rejecting it
    #[arg(long, action = ArgAction::SetTrue)]
    #[serde(default)]
    pub sort_s: bool,
    /// real (O(inf) x O(m)) or complex (U(inf) x U(m))
    #[arg(long)]
    pub field: Option<String>,
    /// Corner size n
    #[arg(long)]
    pub rows: Option<usize>,
    /// Number of independent corners
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateArgs {
    /// Sample file ("-" for stdin)
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: Option<String>,
    /// eigen (singular values of X/sqrt(n)) or moments (Newton inversion of power sums)
    #[arg(long)]
    pub method: Option<String>,
    /// Highest power sum entering the residual column (at least m; default m)
    #[arg(long)]
    pub k: Option<usize>,
    /// Also run the other method and fail unless both agree within 1e-8
    #[arg(long, action = ArgAction::SetTrue)]
    #[serde(default)]
    pub check: bool,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeArgs {
    /// Sample file ("-" for stdin)
    #[arg(long = "in")]
    #[serde(rename = "in")]
    pub input: Option<String>,
    /// Single-linkage merge distance in sup-norm (default 5 median(s_1)/sqrt(n))
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfArgs {
    /// Spectral parameter, comma separated
    #[arg(long)]
    pub s: Option<String>,
    /// Sort --s into descending order instead of rejecting it
    #[arg(long, action = ArgAction::SetTrue)]
    #[serde(default)]
    pub sort_s: bool,
    /// real or complex
    #[arg(long)]
    pub field: Option<String>,
    /// "default", or lambda points separated by ';' with comma-separated entries
    #[arg(long)]
    pub grid: Option<String>,
    /// Haar draws of O averaged over
    #[arg(long)]
    pub mc: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub suite: Suite,
}

#[derive(Subcommand, Debug)]
pub enum Suite {
    /// sqrt(N) times the S x S corner of a Haar matrix is asymptotically Gaussian
    Borel(BorelArgs),
    /// mu_s is invariant under X -> u X v^-1
    Invariance(InvarianceArgs),
    /// Orbital corners of sqrt(n) W D_s converge to mu_s
    Orbital(OrbitalArgs),
    /// Max-entry quantiles of mu_s stay controlled by s_1 (tightness)
    Tightness(TightnessArgs),
    /// The full acceptance battery
    All,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BorelArgs {
    /// Haar dimension N
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub big_n: Option<usize>,
    /// Corner size S
    #[arg(long = "S")]
    #[serde(rename = "S")]
    pub big_s: Option<usize>,
    /// Monte Carlo sample count
    #[arg(long)]
    pub samples: Option<usize>,
    /// real or complex
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceArgs {
    /// Spectral parameter, comma separated
    #[arg(long)]
    pub s: Option<String>,
    /// Sort --s into descending order instead of rejecting it
    #[arg(long, action = ArgAction::SetTrue)]
    #[serde(default)]
    pub sort_s: bool,
    /// Corner size n
    #[arg(long)]
    pub n: Option<usize>,
    /// Monte Carlo sample count
    #[arg(long)]
    pub samples: Option<usize>,
    /// real or complex
    #[arg(long)]
    pub field: Option<String>,
    /// "default", or lambda points separated by ';' with comma-separated entries
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitalArgs {
    /// Spectral parameter, comma separated
    #[arg(long)]
    pub s: Option<String>,
    /// Sort --s into descending order instead of rejecting it
    #[arg(long, action = ArgAction::SetTrue)]
    #[serde(default)]
    pub sort_s: bool,
    /// Corner size n
    #[arg(long)]
    pub n: Option<usize>,
    /// Monte Carlo sample count
    #[arg(long)]
    pub samples: Option<usize>,
    /// real or complex
    #[arg(long)]
    pub field: Option<String>,
    /// "default", or lambda points separated by ';' with comma-separated entries
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TightnessArgs {
    /// Spectra separated by ';', entries by ','
    #[arg(long)]
    pub specs: Option<String>,
    /// Corner size n
    #[arg(long)]
    pub n: Option<usize>,
    /// Monte Carlo sample count
    #[arg(long)]
    pub samples: Option<usize>,
    /// real or complex
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Globals {
    seed: Option<u64>,
    threads: Option<usize>,
    out: Option<String>,
}

struct Ctx {
    seed: u64,
    threads: usize,
    out: String,
    exec: Exec,
}

impl Ctx {
    fn config(&self, command: &str, rest: Value) -> Value {
        let mut map = Map::new();
        map.insert("command".into(), json!(command));
        map.insert("seed".into(), json!(self.seed));
        map.insert("threads".into(), json!(self.threads));
        map.insert("out".into(), json!(self.out));
        if let Value::Object(rest) = rest {
            map.extend(rest);
        }
        Value::Object(map)
    }

    fn root(&self) -> RngHandle {
        RngHandle::from_seed(self.seed)
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn load_config(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| usage(format!("config {}: {e}", path.display())))?;
    serde_json::to_value(table).map_err(|e| usage(format!("config {}: {e}", path.display())))
}

fn section<'a>(file: Option<&'a Value>, path: &[&str]) -> Option<&'a Value> {
    path.iter().try_fold(file?, |v, k| v.get(k))
}

/// Overlays the options given as flags on the file section.
fn layered<T: Serialize + DeserializeOwned>(flags: &T, file: Option<&Value>, name: &str) -> Result<T> {
    let mut merged = match file {
        Some(Value::Object(m)) => m.clone(),
        Some(_) => return Err(usage(format!("config section [{name}] must be a table"))),
        None => Map::new(),
    };
    if let Value::Object(given) = serde_json::to_value(flags).map_err(|e| usage(e.to_string()))? {
        for (k, v) in given {
            if !v.is_null() && v != Value::Bool(false) {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| usage(format!("config [{name}]: {e}")))
}

pub fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| usage(format!("cannot parse {t:?} as a finite number")))
        })
        .collect()
}

/// Parses `s`; without `sort` the values must already be descending.
pub fn parse_spectrum(text: &str, sort: bool) -> Result<SpectrumDelta> {
    let values = parse_floats(text)?;
    let spec = if sort {
        SpectrumDelta::from_unsorted(values)
    } else {
        SpectrumDelta::new(values)
    };
    spec.map_err(|e| usage(format!("{e} (pass --sort-s to sort the values)")))
}

/// `"default"` or `l_1,..,l_m;l_1,..,l_m;...` with each point descending.
pub fn parse_grid(text: &str, m: usize) -> Result<CfGrid> {
    if text.trim() == "default" {
        return Ok(CfGrid::default_for_rank(m));
    }
    let points = text
        .split(';')
        .map(|p| {
            let v = parse_floats(p).map_err(|e| usage(format!("grid: {e}")))?;
            if v.len() != m {
                return Err(usage(format!("grid point {p:?} has {} entries, s has {m}", v.len())));
            }
            SpectrumDelta::new(v).map_err(|e| usage(format!("grid point {p:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    CfGrid::new(points).map_err(|e| usage(format!("grid: {e}")))
}

fn parse_field(text: Option<&str>) -> Result<Field> {
    let text = text.unwrap_or("real");
    Field::parse(text).ok_or_else(|| usage(format!("unknown field {text:?}; expected real or complex")))
}

fn positive(value: usize, name: &str) -> Result<usize> {
    if value == 0 {
        Err(usage(format!("{name} must be at least 1")))
    } else {
        Ok(value)
    }
}

fn read_corners(path: &str) -> Result<(Vec<SampleRecord>, Vec<CornerMatrix>)> {
    let records = io::read_samples(io::open_input(path)?)?;
    let corners = records.iter().map(SampleRecord::to_corner).collect::<ergmat_core::Result<Vec<_>>>()?;
    Ok((records, corners))
}

fn log_config(config: &Value) {
    eprintln!("config: {config}");
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let file = cli.config.as_ref().map(load_config).transpose()?;
    let globals: Globals = match &file {
        Some(Value::Object(top)) => {
            let picked: Map<String, Value> = top.iter().filter(|(_, v)| !v.is_object()).map(|(k, v)| (k.clone(), v.clone())).collect();
            serde_json::from_value(Value::Object(picked)).map_err(|e| usage(format!("config: {e}")))?
        }
        _ => Globals::default(),
    };
    let threads = cli.threads.or(globals.threads).unwrap_or_else(available_threads);
    let threads = positive(threads, "threads")?;
    let ctx = Ctx {
        seed: cli.seed.or(globals.seed).unwrap_or(0),
        threads,
        out: cli.out.or(globals.out).unwrap_or_else(|| "-".into()),
        exec: Exec::with_threads(threads).map_err(|e| usage(e.to_string()))?,
    };
    let file = file.as_ref();
    match &cli.command {
        Command::Sample(a) => cmd_sample(&ctx, layered(a, section(file, &["sample"]), "sample")?),
        Command::Estimate(a) => cmd_estimate(&ctx, layered(a, section(file, &["estimate"]), "estimate")?),
        Command::Decompose(a) => cmd_decompose(&ctx, layered(a, section(file, &["decompose"]), "decompose")?),
        Command::Cf(a) => cmd_cf(&ctx, layered(a, section(file, &["cf"]), "cf")?),
        Command::Verify(v) => cmd_verify(&ctx, &v.suite, file),
    }
}

fn cmd_sample(ctx: &Ctx, a: SampleArgs) -> Result<()> {
    let measure = a.measure.as_deref().unwrap_or("mu_s");
    if measure != "mu_s" {
        return Err(usage(format!("unknown measure {measure:?}; supported: mu_s")));
    }
    let spec = parse_spectrum(a.s.as_deref().ok_or_else(|| usage("--s is required"))?, a.sort_s)?;
    let field = parse_field(a.field.as_deref())?;
    let rows = positive(a.rows.ok_or_else(|| usage("--rows is required"))?, "rows")?;
    let count = a.count.unwrap_or(1);
    let config = ctx.config(
        "sample",
        json!({
            "measure": measure,
            "s": spec.as_slice(),
            "field": field.as_str(),
            "rows": rows,
            "count": count,
            "sample_stream": "stream of sample i = root(seed).split(i)",
        }),
    );
    let root = ctx.root();
    let records = map_indexed(&ctx.exec, count, |i| {
        let h = root.split(i as u64);
        SampleRecord::from_corner(i.to_string(), &sample_mu_s(&spec, field, rows, h), h)
    });
    log_config(&config);
    io::write_samples(&records, io::create_output(&ctx.out)?)
}

fn residual_up_to(x: &CornerMatrix, e: &SpectrumEstimate, k: usize) -> Result<f64> {
    if e.n < e.spec.rank() {
        return Ok(f64::INFINITY);
    }
    let observed = MomentVector::empirical(x, k)?;
    let fitted = MomentVector::exact(&e.spec, k);
    Ok((1..=k)
        .map(|j| (observed.get(j) - fitted.get(j)).abs() / observed.get(j).max(1.0))
        .fold(0.0, f64::max))
}

fn cmd_estimate(ctx: &Ctx, a: EstimateArgs) -> Result<()> {
    let input = a.input.as_deref().ok_or_else(|| usage("--in is required"))?;
    let method_name = a.method.as_deref().unwrap_or("eigen");
    let method = EstimateMethod::parse(method_name)
        .ok_or_else(|| usage(format!("unknown method {method_name:?}; expected eigen or moments")))?;
    let (records, corners) = read_corners(input)?;
    let m = corners.first().ok_or(ergmat_core::Error::EmptySampleSet)?.cols();
    if let Some(x) = corners.iter().find(|x| x.cols() != m) {
        return Err(ergmat_core::Error::RankMismatch { expected: m, found: x.cols() }.into());
    }
    let k = a.k.unwrap_or(m);
    if k < m {
        return Err(usage(format!("--k must be at least m = {m}")));
    }
    let other = match method {
        EstimateMethod::Eigen => EstimateMethod::Moments,
        EstimateMethod::Moments => EstimateMethod::Eigen,
    };
    let config = ctx.config(
        "estimate",
        json!({ "in": input, "method": method.as_str(), "k": k, "check": a.check }),
    );
    log_config(&config);
    let results = map_indexed(&ctx.exec, corners.len(), |i| -> Result<(SpectrumEstimate, f64)> {
        let x = &corners[i];
        let mut e = estimate(x, method)?;
        if k > m {
            e.residual = residual_up_to(x, &e, k)?;
        }
        let gap = if a.check {
            let alt = estimate(x, other)?;
            e.spec.sup_distance(&alt.spec).unwrap_or(f64::INFINITY)
        } else {
            0.0
        };
        Ok((e, gap))
    });
    let mut rows = Vec::with_capacity(results.len());
    let mut worst: Option<(usize, f64)> = None;
    for (i, r) in results.into_iter().enumerate() {
        let (e, gap) = r?;
        if !(gap <= CHECK_TOL) && worst.is_none_or(|(_, g)| gap > g) {
            worst = Some((i, gap));
        }
        rows.push((records[i].id.clone(), e));
    }
    io::write_estimates(&rows, io::create_output(&ctx.out)?)?;
    match worst {
        Some((i, gap)) => Err(Error::Failed(format!(
            "eigen and moment estimates differ by {gap:e} on record {} (tolerance {CHECK_TOL:e})",
            records[i].id
        ))),
        None => Ok(()),
    }
}

fn cmd_decompose(ctx: &Ctx, a: DecomposeArgs) -> Result<()> {
    let input = a.input.as_deref().ok_or_else(|| usage("--in is required"))?;
    if let Some(t) = a.tol {
        if !(t > 0.0) {
            return Err(usage("--tol must be positive"));
        }
    }
    let (records, corners) = read_corners(input)?;
    if corners.is_empty() {
        return Err(ergmat_core::Error::EmptySampleSet.into());
    }
    let mixture = match a.tol {
        Some(t) => decompose_samples(&corners, t, &ctx.exec)?,
        None => {
            let est = estimate_all(&corners, &ctx.exec)?;
            mixture_from_estimates(&est, default_cluster_tol(&est, corners[0].rows()))?
        }
    };
    let mut seeds: Vec<u64> = records.iter().map(|r| r.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    let config = ctx.config(
        "decompose",
        json!({
            "in": input,
            "tol": a.tol.map_or(json!("auto"), io::num),
            "records": records.len(),
            "sample_seeds": seeds,
        }),
    );
    io::write_document(&io::document("mixture", config, io::mixture_json(&mixture)), io::create_output(&ctx.out)?)
}

fn cmd_cf(ctx: &Ctx, a: CfArgs) -> Result<()> {
    let spec = parse_spectrum(a.s.as_deref().ok_or_else(|| usage("--s is required"))?, a.sort_s)?;
    let field = parse_field(a.field.as_deref())?;
    let grid_text = a.grid.as_deref().unwrap_or("default");
    let grid = parse_grid(grid_text, spec.rank())?;
    let mc = positive(a.mc.unwrap_or(10_000), "mc")?;
    let cf = cf_mu_s(&spec, &grid, field, mc, ctx.root(), &ctx.exec)?;
    let config = ctx.config(
        "cf",
        json!({ "s": spec.as_slice(), "field": field.as_str(), "grid": grid_text, "mc": mc }),
    );
    io::write_document(&io::document("cf", config, io::cf_json(&cf)), io::create_output(&ctx.out)?)
}

fn random_pair_test(
    spec: &SpectrumDelta,
    n: usize,
    samples: usize,
    grid: &CfGrid,
    field: Field,
    rng: RngHandle,
    exec: &Exec,
) -> Result<TestReport> {
    let m = spec.rank();
    if n < m {
        return Err(usage(format!("n = {n} is smaller than m = {m}")));
    }
    Ok(match field {
        Field::Real => {
            let u: Matrix<f64> = haar_square(n, rng.split(0))?;
            let v: Matrix<f64> = haar_square(m, rng.split(1))?;
            invariance_test(spec, n, &u, &v, samples, grid, rng.split(2), exec)?
        }
        Field::Complex => {
            let u: Matrix<Complex64> = haar_square(n, rng.split(0))?;
            let v: Matrix<Complex64> = haar_square(m, rng.split(1))?;
            invariance_test(spec, n, &u, &v, samples, grid, rng.split(2), exec)?
        }
    })
}

fn cmd_verify(ctx: &Ctx, suite: &Suite, file: Option<&Value>) -> Result<()> {
    let (name, params, reports) = match suite {
        Suite::Borel(a) => {
            let a = layered(a, section(file, &["verify", "borel"]), "verify.borel")?;
            let (big_n, s) = (a.big_n.unwrap_or(1000), a.big_s.unwrap_or(1));
            let samples = a.samples.unwrap_or(100_000);
            let field = parse_field(a.field.as_deref())?;
            let r = borel_test(big_n, s, samples, field, ctx.root(), &ctx.exec)?;
            ("borel", json!({ "N": big_n, "S": s, "samples": samples, "field": field.as_str() }), vec![r])
        }
        Suite::Invariance(a) => {
            let a = layered(a, section(file, &["verify", "invariance"]), "verify.invariance")?;
            let spec = parse_spectrum(a.s.as_deref().unwrap_or("2,1"), a.sort_s)?;
            let n = positive(a.n.unwrap_or(64), "n")?;
            let samples = a.samples.unwrap_or(10_000);
            let field = parse_field(a.field.as_deref())?;
            let grid_text = a.grid.as_deref().unwrap_or("default");
            let grid = parse_grid(grid_text, spec.rank())?;
            let r = random_pair_test(&spec, n, samples, &grid, field, ctx.root(), &ctx.exec)?;
            let params = json!({
                "s": spec.as_slice(), "n": n, "samples": samples, "field": field.as_str(), "grid": grid_text,
                "pair_streams": "u from root.split(0), v from root.split(1), samples from root.split(2)",
            });
            ("invariance", params, vec![r])
        }
        Suite::Orbital(a) => {
            let a = layered(a, section(file, &["verify", "orbital"]), "verify.orbital")?;
            let spec = parse_spectrum(a.s.as_deref().unwrap_or("1"), a.sort_s)?;
            let n = positive(a.n.unwrap_or(1024), "n")?;
            let samples = a.samples.unwrap_or(10_000);
            let field = parse_field(a.field.as_deref())?;
            let grid_text = a.grid.as_deref().unwrap_or("default");
            let grid = parse_grid(grid_text, spec.rank())?;
            let r = orbital_convergence_test(&spec, n, samples, &grid, field, ctx.root(), &ctx.exec)?;
            let params = json!({ "s": spec.as_slice(), "n": n, "samples": samples, "field": field.as_str(), "grid": grid_text });
            ("orbital", params, vec![r])
        }
        Suite::Tightness(a) => {
            let a = layered(a, section(file, &["verify", "tightness"]), "verify.tightness")?;
            let text = a.specs.as_deref().unwrap_or("1;10;100");
            let specs = text.split(';').map(|s| parse_spectrum(s, true)).collect::<Result<Vec<_>>>()?;
            let n = positive(a.n.unwrap_or(64), "n")?;
            let samples = a.samples.unwrap_or(1000);
            let field = parse_field(a.field.as_deref())?;
            let r = tightness_diagnostic(&specs, n, samples, field, ctx.root(), &ctx.exec)?;
            ("tightness", json!({ "specs": text, "n": n, "samples": samples, "field": field.as_str() }), vec![r])
        }
        Suite::All => ("all", json!({ "criteria": battery::CRITERIA }), battery::run_all(ctx.seed, &ctx.exec)?),
    };
    let mut params = params;
    params.as_object_mut().expect("object").insert("suite".into(), json!(name));
    let passed = reports.iter().all(|r| r.passed);
    let result = json!({
        "passed": passed,
        "reports": reports.iter().map(io::report_json).collect::<Vec<_>>(),
    });
    let config = ctx.config("verify", params);
    io::write_document(&io::document("verify", config, result), io::create_output(&ctx.out)?)?;
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
        Err(Error::Failed(format!("failed: {}", failed.join(", "))))
    }
}
