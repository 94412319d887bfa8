//! Scenario files, experiment orchestration, seeded random instances and
//! persistence of reports and trajectories.
//!
//! A scenario is a JSON document:
//!
//! ```json
//! {"representation": {"type": "torus", "weights": [[1], [-1]]},
//!  "space": "affine", "start": [[1, 0], [0, 0]],
//!  "flow": {"max_time": 10000, "grad_tol": 1e-7},
//!  "analyses": ["classify", "flow", "dichotomy"],
//!  "seed": 42, "output_dir": "./out"}
//! ```
//!
//! Random instances draw from SplitMix64 with state initialised to the seed.
//! The draw order is fixed: `d = 1 + u % d_max`, `r = 1 + u % r_max`, the
//! weights row by row as `-w_max + u % (2 w_max + 1)`, then for each
//! coordinate `re`, `im` as `2 f - 1` and a zero flag `f < 1/4`, where
//! `f = (u >> 11) * 2^-53`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::{
    make_matrix_rep, make_torus_rep, maximal_torus_in, stabilizer_algebra, CMatrix, LieVector, Point,
    Representation, C64, DEFAULT_STABILIZER_TOL,
};
use crate::error::{Error, Result};
use crate::flow::{
    analyze_limit, integrate_flow, projected_flow, projective_flow, FlowField, FlowParams, FlowTrajectory,
    LimitReport, Termination,
};
use crate::git::{self, OnePS, StabilityReport, Verdict};
use crate::rational::{self, Rational};
use crate::symplectic::{moment_map, nu_map, Chart, MomentValue, NuValue};

/// Version string recorded in reports.
pub const TOOL_VERSION: &str = concat!("mmflow ", env!("CARGO_PKG_VERSION"));

/// Serializes a point as a list of `[re, im]` pairs.
pub fn serialize_point<S: Serializer>(x: &Point, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|z| [z.re, z.im]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RepresentationSpec {
    Torus { weights: Vec<Vec<i64>> },
    /// Skew-Hermitian basis matrices, row-major, entries as `[re, im]`.
    MatrixLie { basis: Vec<Vec<Vec<[f64; 2]>>> },
}

impl RepresentationSpec {
    pub fn build(&self) -> Result<Representation> {
        match self {
            RepresentationSpec::Torus { weights } => {
                let rank = weights.first().map_or(0, Vec::len);
                if let Some(i) = weights.iter().position(|w| w.len() != rank) {
                    return Err(schema(format!("representation.weights[{i}]"), "rows must have equal length"));
                }
                make_torus_rep(rank, weights).map_err(|e| schema("representation.weights", e))
            }
            RepresentationSpec::MatrixLie { basis } => {
                let mut mats = Vec::with_capacity(basis.len());
                for (a, m) in basis.iter().enumerate() {
                    let n = m.len();
                    if m.iter().any(|row| row.len() != n) {
                        return Err(schema(format!("representation.basis[{a}]"), "matrix must be square"));
                    }
                    mats.push(CMatrix::from_fn(n, n, |i, j| C64::new(m[i][j][0], m[i][j][1])));
                }
                make_matrix_rep(mats).map_err(|e| schema("representation.basis", e))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Classify,
    Flow,
    Dichotomy,
    ProjectedFlow,
    Nu,
    KempfNessRay,
}

fn default_output_dir() -> String {
    "out".to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub representation: RepresentationSpec,
    #[serde(default)]
    pub space: Chart,
    pub start: Vec<[f64; 2]>,
    #[serde(default)]
    pub flow: FlowParams,
    pub analyses: Vec<Analysis>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
}

fn schema(path: impl Into<String>, reason: impl ToString) -> Error {
    Error::Schema { path: path.into(), reason: reason.to_string() }
}

impl Scenario {
    pub fn build_representation(&self) -> Result<Representation> {
        self.representation.build()
    }

    pub fn start_point(&self) -> Point {
        Point::from_iterator(self.start.len(), self.start.iter().map(|p| C64::new(p[0], p[1])))
    }

    /// Checks the constraints the JSON schema cannot express.
    pub fn validate(&self) -> Result<()> {
        let rep = self.build_representation()?;
        if self.start.len() != rep.dim() {
            return Err(schema(
                "start",
                format!("expected {} coordinates, found {}", rep.dim(), self.start.len()),
            ));
        }
        if self.analyses.is_empty() {
            return Err(schema("analyses", "at least one analysis is required"));
        }
        self.flow.validate().map_err(|e| schema("flow", e))
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let scenario: Scenario = serde_path_to_error::deserialize(&value).map_err(|e| {
        let path = e.path().to_string();
        schema(if path == "." { String::new() } else { path }, e.into_inner())
    })?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn serialize_scenario(s: &Scenario) -> String {
    serde_json::to_string_pretty(s).expect("scenario serializes")
}

/// Summary of one integrated flow; the samples go to CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowSummary {
    pub space: Chart,
    pub termination: Termination,
    pub terminal_time: f64,
    #[serde(serialize_with = "serialize_point")]
    pub terminal: Point,
    pub terminal_mu_norm_sq: f64,
    pub samples: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub max_energy_increase: f64,
    pub csv: String,
}

impl FlowSummary {
    fn new(traj: &FlowTrajectory, csv: &str) -> Self {
        FlowSummary {
            space: traj.chart,
            termination: traj.termination,
            terminal_time: traj.terminal_time,
            terminal: traj.terminal.clone(),
            terminal_mu_norm_sq: traj.terminal_mu_norm_sq(),
            samples: traj.samples.len(),
            accepted_steps: traj.accepted_steps,
            rejected_steps: traj.rejected_steps,
            max_energy_increase: traj.max_energy_increase,
            csv: csv.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectedFlowSummary {
    /// Maximal torus of the stabilizer of the start point.
    pub torus: Vec<LieVector>,
    pub flow: FlowSummary,
    pub limit: LimitReport,
    /// Distance of the projected moment map at the limit from the
    /// stabilizer algebra of the limit.
    pub stabilizer_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RaySummary {
    pub lambda: OnePS,
    /// `destabilizer` when the start is unstable, else `seeded`.
    pub source: String,
    #[serde(serialize_with = "rational::serialize")]
    pub slope: Rational,
    /// `(t, energy)` along `exp(t lambda) x`.
    pub energies: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AnalysisResults {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classify: Option<StabilityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dichotomy: Option<LimitReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projected_flow: Option<ProjectedFlowSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<NuValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kempf_ness_ray: Option<RaySummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub scenario: Scenario,
    pub moment: MomentValue,
    pub results: AnalysisResults,
    /// Wall-clock seconds per analysis. The only nondeterministic field.
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with timings removed, for comparisons across runs.
    pub fn to_json_without_timings(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut value {
            map.remove("timings");
        }
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}

/// CSV with header `t,re_z1,im_z1,...,mu_norm_sq,step`, one row per sample.
pub fn trajectory_csv(traj: &FlowTrajectory) -> String {
    let d = traj.terminal.len();
    let mut out = String::from("t");
    for i in 1..=d {
        let _ = write!(out, ",re_z{i},im_z{i}");
    }
    out.push_str(",mu_norm_sq,step\n");
    for s in &traj.samples {
        let _ = write!(out, "{:.16e}", s.t);
        for z in s.point.iter() {
            let _ = write!(out, ",{:.16e},{:.16e}", z.re, z.im);
        }
        let _ = writeln!(out, ",{:.16e},{:.16e}", s.mu_norm_sq, s.step);
    }
    out
}

fn timed<T>(timings: &mut BTreeMap<String, f64>, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f()?;
    timings.insert(name.to_string(), start.elapsed().as_secs_f64());
    Ok(out)
}

fn flow_in(space: Chart, rep: &Representation, x0: &Point, params: &FlowParams) -> Result<FlowTrajectory> {
    match space {
        Chart::Affine => integrate_flow(rep, x0, params),
        Chart::Projective => projective_flow(rep, x0, params),
    }
}

/// Runs the scenario's analyses and writes `report.json` and the trajectory
/// CSVs into its output directory.
pub fn run_scenario(s: &Scenario) -> Result<RunReport> {
    run_scenario_in(s, Path::new(&s.output_dir))
}

/// [`run_scenario`] writing into `out_dir` instead of the scenario's own
/// output directory.
pub fn run_scenario_in(s: &Scenario, out_dir: &Path) -> Result<RunReport> {
    let (report, files) = execute(s)?;
    fs::create_dir_all(out_dir)?;
    for (name, contents) in &files {
        fs::write(out_dir.join(name), contents)?;
    }
    fs::write(out_dir.join("report.json"), report.to_json() + "\n")?;
    Ok(report)
}

/// Runs the analyses without touching the filesystem; returns the report and
/// the files it refers to.
pub fn execute(s: &Scenario) -> Result<(RunReport, Vec<(String, String)>)> {
    s.validate()?;
    let rep = s.build_representation()?;
    let x0 = s.start_point();
    let wants = |a: Analysis| s.analyses.contains(&a);
    let mut timings = BTreeMap::new();
    let mut results = AnalysisResults::default();
    let mut files = Vec::new();

    if wants(Analysis::Classify) {
        results.classify = Some(timed(&mut timings, "classify", || git::classify_stability(&rep, &x0))?);
    }
    let mut trajectory = None;
    if wants(Analysis::Flow) {
        let traj = timed(&mut timings, "flow", || flow_in(s.space, &rep, &x0, &s.flow))?;
        files.push(("trajectory.csv".to_string(), trajectory_csv(&traj)));
        results.flow = Some(FlowSummary::new(&traj, "trajectory.csv"));
        trajectory = Some(traj);
    }
    if wants(Analysis::Dichotomy) {
        let limit = timed(&mut timings, "dichotomy", || {
            let traj = match &trajectory {
                Some(t) => t.clone(),
                None => flow_in(s.space, &rep, &x0, &s.flow)?,
            };
            Ok(analyze_limit(&rep, &traj, &x0))
        })?;
        results.dichotomy = Some(limit);
    }
    if wants(Analysis::ProjectedFlow) {
        let (summary, csv) = timed(&mut timings, "projected_flow", || {
            let stab = stabilizer_algebra(&rep, &x0, DEFAULT_STABILIZER_TOL);
            let torus = maximal_torus_in(&stab, &rep)?;
            let traj = projected_flow(&rep, &x0, &torus, &s.flow)?;
            let limit = analyze_limit(&rep, &traj, &x0);
            let stabilizer_residual = stabilizer_residual(&rep, &torus, &limit.limit);
            let csv = trajectory_csv(&traj);
            let summary = ProjectedFlowSummary {
                torus: traj.restricted_to.clone().unwrap_or_default(),
                flow: FlowSummary::new(&traj, "trajectory_projected.csv"),
                limit,
                stabilizer_residual,
            };
            Ok((summary, csv))
        })?;
        files.push(("trajectory_projected.csv".to_string(), csv));
        results.projected_flow = Some(summary);
    }
    if wants(Analysis::Nu) {
        results.nu = Some(timed(&mut timings, "nu", || nu_map(&rep, &x0))?);
    }
    if wants(Analysis::KempfNessRay) {
        results.kempf_ness_ray = Some(timed(&mut timings, "kempf_ness_ray", || kempf_ness_ray(&rep, &x0, s.seed))?);
    }
    let moment = moment_map(&rep, &x0, s.space)?;
    let report = RunReport {
        tool_version: TOOL_VERSION.to_string(),
        scenario: s.clone(),
        moment,
        results,
        timings,
    };
    Ok((report, files))
}

/// Distance of `mu_{T-perp}(x)` from the stabilizer algebra of `x`, in the
/// invariant inner product.
pub fn stabilizer_residual(rep: &Representation, torus: &[LieVector], x: &Point) -> f64 {
    let field = FlowField::projected(rep, torus).unwrap_or_else(|_| FlowField::new(rep));
    let mu = field.mu_hat(x);
    let basis = rep.orthonormalize(&stabilizer_algebra(rep, x, DEFAULT_STABILIZER_TOL));
    let mut rest = mu;
    for b in &basis {
        let p = rep.pair(b, &rest);
        rest = &rest - &(b * p);
    }
    rep.norm(&rest)
}

fn kempf_ness_ray(rep: &Representation, x: &Point, seed: u64) -> Result<RaySummary> {
    let (lambda, source) = match git::destabilizer(rep, x)? {
        Some(l) => (l, "destabilizer"),
        None => {
            let rank = rep.algebra_dim();
            let mut rng = SplitMix64::seed_from_u64(seed);
            let lambda = loop {
                let l: Vec<i64> = (0..rank).map(|_| -3 + (rng.next_u64() % 7) as i64).collect();
                if l.iter().any(|&v| v != 0) {
                    break OnePS(l);
                }
            };
            (lambda, "seeded")
        }
    };
    let slope = git::asymptotic_slope(rep, x, &lambda)?;
    let energies = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&t| git::one_ps_energy(rep, x, &lambda, t).map(|e| (t, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RaySummary { lambda, source: source.to_string(), slope, energies })
}

/// Bounds for [`random_instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceBounds {
    pub d_max: usize,
    pub r_max: usize,
    pub weight_max: i64,
}

impl Default for InstanceBounds {
    fn default() -> Self {
        InstanceBounds { d_max: 6, r_max: 2, weight_max: 3 }
    }
}

fn unit_interval(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A seeded random torus representation and start point.
pub fn random_instance(seed: u64, bounds: &InstanceBounds) -> (Representation, Point) {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let d = 1 + (rng.next_u64() % bounds.d_max.max(1) as u64) as usize;
    let r = 1 + (rng.next_u64() % bounds.r_max.max(1) as u64) as usize;
    let wmax = bounds.weight_max.max(0);
    let span = (2 * wmax + 1) as u64;
    let weights: Vec<Vec<i64>> = (0..d)
        .map(|_| (0..r).map(|_| -wmax + (rng.next_u64() % span) as i64).collect())
        .collect();
    let mut x = Point::zeros(d);
    for i in 0..d {
        let re = 2.0 * unit_interval(&mut rng) - 1.0;
        let im = 2.0 * unit_interval(&mut rng) - 1.0;
        let zero = unit_interval(&mut rng) < 0.25;
        if !zero {
            x[i] = C64::new(re, im);
        }
    }
    let rep = make_torus_rep(r, &weights).expect("bounded weights form a valid torus representation");
    (rep, x)
}

/// One row of the flow-versus-classification suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteRow {
    pub seed: u64,
    pub dim: usize,
    pub rank: usize,
    pub verdict: Verdict,
    pub initial_support: usize,
    pub limit_support: usize,
    pub mu_norm: f64,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.rows.len()
    }

    /// Fixed-width pass/fail table.
    pub fn table(&self) -> String {
        let mut out = String::from("seed  d  r  verdict     |S0|  |Sinf|  mu_norm     result\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>4}  {}  {}  {:<10}  {:>4}  {:>6}  {:.3e}  {}",
                r.seed,
                r.dim,
                r.rank,
                format!("{:?}", r.verdict),
                r.initial_support,
                r.limit_support,
                r.mu_norm,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "passed {}/{}", self.passed(), self.rows.len());
        out
    }
}

/// Whether the flow outcome agrees with the exact classification: polystable
/// points keep their support and reach a zero of the moment map; unstable
/// points lose support; semistable points lose support and reach a zero.
pub fn flow_agrees_with_verdict(verdict: Verdict, limit: &LimitReport, mu_tol: f64) -> bool {
    let kept = limit.support == limit.initial_support;
    let shrank = limit.support.len() < limit.initial_support.len()
        && limit.support.iter().all(|i| limit.initial_support.contains(i));
    match verdict {
        Verdict::Stable | Verdict::Polystable => limit.mu_norm <= mu_tol && kept,
        Verdict::Unstable => shrank,
        Verdict::Semistable => limit.mu_norm <= mu_tol && shrank,
    }
}

/// Classifies and flows one seeded instance.
pub fn suite_row(seed: u64, bounds: &InstanceBounds, params: &FlowParams) -> SuiteRow {
    let (rep, x0) = random_instance(seed, bounds);
    let mut row = SuiteRow {
        seed,
        dim: rep.dim(),
        rank: rep.algebra_dim(),
        verdict: Verdict::Polystable,
        initial_support: 0,
        limit_support: 0,
        mu_norm: f64::NAN,
        pass: false,
        error: None,
    };
    let outcome = git::classify_stability(&rep, &x0).and_then(|report| {
        let traj = integrate_flow(&rep, &x0, params)?;
        Ok((report, analyze_limit(&rep, &traj, &x0)))
    });
    match outcome {
        Ok((report, limit)) => {
            row.verdict = report.verdict;
            row.initial_support = limit.initial_support.len();
            row.limit_support = limit.support.len();
            row.mu_norm = limit.mu_norm;
            row.pass = flow_agrees_with_verdict(report.verdict, &limit, 1e-5);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs seeds `1..=seeds` across the available cores; the output order and
/// content do not depend on scheduling.
pub fn run_suite(seeds: u64, bounds: &InstanceBounds, params: &FlowParams) -> SuiteReport {
    let all: Vec<u64> = (1..=seeds).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(all.len().max(1));
    let chunk = all.len().div_ceil(workers).max(1);
    let rows = std::thread::scope(|scope| {
        let handles: Vec<_> = all
            .chunks(chunk)
            .map(|c| scope.spawn(move || c.iter().map(|&s| suite_row(s, bounds, params)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite worker panicked")).collect()
    });
    SuiteReport { rows }
}

/// Reads and parses a scenario file; failures to read count as parse errors.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, column: 0, message: e.to_string() })?;
    parse_scenario(&text)
}
