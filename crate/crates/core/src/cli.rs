//! The `krein-bc` command-line front end.
//!
//! Exit codes: 0 success, 1 mathematical failure (validation, check,
//! singularity), 2 input error.
//!
//! Configs are JSON:
//!
//! ```json
//! {
//!   "model": "point3d",
//!   "n": 2,
//!   "centers": [[0, 0, 0], [0, 0, 1]],
//!   "A": [[[-0.159, 0], [0, 0]], [[0, 0], [-0.159, 0]]],
//!   "B": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
//! }
//! ```
//!
//! Complex entries are `[re, im]` pairs; `centers` is required for `point3d`
//! and forbidden for `star`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryPair;
use crate::error::Error;
use crate::krein::{self, EigenvalueHit, ScanConfig};
use crate::matops::{ComplexMatrix, C64};
use crate::models::{self, PointInteractions, SpacePoint, SpectralModel, StarGraph};
use crate::quadrature;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable capping the scan's worker threads (0 = automatic).
pub const THREADS_ENV: &str = "KREIN_BC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "krein-bc", version, about = "Resolvents and bound states of self-adjoint extensions given by A Γ₁φ = B Γ₂φ")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that (A, B) defines a self-adjoint extension.
    Validate { config: PathBuf },
    /// Search for negative eigenvalues.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        config: PathBuf,
        #[arg(long, default_value_t = -10.0)]
        zmin: f64,
        #[arg(long, default_value_t = -0.01)]
        zmax: f64,
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Detection threshold on σ_min (default: 1e-4 × grid median).
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the Green kernel at point pairs read from a file.
    Green {
        config: PathBuf,
        /// Spectral parameter, e.g. "-1+0.5i".
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity checks at random spectral parameters.
    Check {
        config: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip validation of (A, B).
        #[arg(long)]
        unchecked: bool,
    },
    /// Print linear-relation data attached to (A, B).
    Relation {
        config: PathBuf,
        #[arg(long, value_enum)]
        op: RelationOp,
        /// Skip validation of (A, B).
        #[arg(long)]
        unchecked: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RelationOp {
    ToUnitary,
    Canonical,
    Adjoint,
    IsSelfadjoint,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    fn failure(message: impl Into<String>) -> Self {
        Self { code: EXIT_FAILURE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BadRange(_)
            | Error::OutsideResolventSet(_)
            | Error::OnBranchCut(_)
            | Error::InvalidModel(_)
            | Error::InvalidPoint(_)
            | Error::DimensionMismatch(_)
            | Error::NonSquare { .. }
            | Error::NonFinite => EXIT_INPUT,
            _ => EXIT_FAILURE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Star,
    Point3d,
}

type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub model: ModelKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centers: Option<Vec<[f64; 3]>>,
    #[serde(rename = "A")]
    pub a: JsonMatrix,
    #[serde(rename = "B")]
    pub b: JsonMatrix,
}

fn matrix_from_json(name: &str, n: usize, m: &JsonMatrix) -> Result<ComplexMatrix, CliError> {
    if m.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(CliError::input(format!("{name} must be {n}x{n}")));
    }
    let data = m.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
    ComplexMatrix::new(n, n, data).map_err(|e| CliError::input(format!("{name}: {e}")))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows()).map(|i| m.row(i).iter().map(|c| [c.re, c.im]).collect()).collect()
}

impl ModelConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::input(format!("config: {e}")))?;
        if cfg.n == 0 {
            return Err(CliError::input("config: n must be positive"));
        }
        match (cfg.model, &cfg.centers) {
            (ModelKind::Point3d, Some(c)) if c.len() == cfg.n => {}
            (ModelKind::Point3d, Some(c)) => {
                return Err(CliError::input(format!("config: {} centers for n = {}", c.len(), cfg.n)))
            }
            (ModelKind::Point3d, None) => return Err(CliError::input("config: point3d requires centers")),
            (ModelKind::Star, Some(_)) => return Err(CliError::input("config: star model takes no centers")),
            (ModelKind::Star, None) => {}
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn matrices(&self) -> Result<(ComplexMatrix, ComplexMatrix), CliError> {
        Ok((matrix_from_json("A", self.n, &self.a)?, matrix_from_json("B", self.n, &self.b)?))
    }

    pub fn build_model(&self) -> Result<Box<dyn SpectralModel>, CliError> {
        Ok(match self.model {
            ModelKind::Star => Box::new(StarGraph::new(self.n)?),
            ModelKind::Point3d => Box::new(PointInteractions::new(self.centers.clone().unwrap_or_default())?),
        })
    }

    /// The pair, validated unless `unchecked`.
    pub fn pair(&self, unchecked: bool) -> Result<BoundaryPair, CliError> {
        let (a, b) = self.matrices()?;
        if unchecked {
            Ok(BoundaryPair::unchecked(a, b)?)
        } else {
            Ok(BoundaryPair::validate(a, b)?)
        }
    }
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Result<C64, CliError> {
    let bad = || CliError::input(format!("cannot parse complex number {s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().ok().filter(|re| re.is_finite()).map(|re| C64::new(re, 0.0)).ok_or_else(bad);
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re_part.parse::<f64>().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}

/// Entry point used by the binary.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (including the program name) and runs the command, writing
/// reports to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate { config } => cmd_validate(&config, out),
        Command::Spectrum { config, zmin, zmax, grid, tol, threshold, out: path } => {
            let cfg = ScanConfig { z_min: zmin, z_max: zmax, grid_points: grid, refine_tol: tol, detect_threshold: threshold };
            cmd_spectrum(&config, &cfg, path.as_deref(), out)
        }
        Command::Green { config, z, points, out: path } => cmd_green(&config, &z, &points, path.as_deref(), out),
        Command::Check { config, samples, seed, unchecked } => cmd_check(&config, samples, seed, unchecked, out),
        Command::Relation { config, op, unchecked } => cmd_relation(&config, op, unchecked, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn emit(path: Option<&Path>, body: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| CliError::input(format!("{}: {e}", p.display()))),
        None => out.write_all(body.as_bytes()).map_err(CliError::from),
    }
}

fn cmd_validate(config: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = ModelConfig::load(config)?;
    let (a, b) = cfg.matrices()?;
    let report = BoundaryPair::diagnose(&a, &b)?;
    let n = cfg.n;
    match BoundaryPair::validate(a, b) {
        Ok(_) => {
            writeln!(
                out,
                "PASS hermiticity_defect={:.3e} tolerance={:.3e} rank={}/{n}",
                report.hermiticity_defect, report.tolerance, report.rank
            )?;
            Ok(EXIT_OK)
        }
        Err(Error::NotSelfAdjointCondition { defect, tolerance }) => {
            writeln!(out, "FAIL NotSelfAdjointCondition hermiticity_defect={defect:.3e} tolerance={tolerance:.3e}")?;
            Ok(EXIT_FAILURE)
        }
        Err(Error::RankDeficient { rank, n }) => {
            writeln!(out, "FAIL RankDeficient rank={rank}/{n}")?;
            Ok(EXIT_FAILURE)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitRecord {
    pub z: f64,
    pub sigma_min: f64,
    pub residual: f64,
    pub multiplicity: usize,
    pub null_vector: Vec<[f64; 2]>,
}

impl From<&EigenvalueHit> for HitRecord {
    fn from(h: &EigenvalueHit) -> Self {
        Self {
            z: h.z,
            sigma_min: h.sigma_min,
            residual: h.residual,
            multiplicity: h.multiplicity,
            null_vector: h.null_vector.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl From<&HitRecord> for EigenvalueHit {
    fn from(r: &HitRecord) -> Self {
        Self {
            z: r.z,
            null_vector: r.null_vector.iter().map(|&[re, im]| C64::new(re, im)).collect(),
            sigma_min: r.sigma_min,
            residual: r.residual,
            multiplicity: r.multiplicity,
        }
    }
}

/// Contents of the file written by `krein-bc spectrum`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub model: ModelKind,
    pub n: usize,
    pub scan: ScanConfig,
    pub hits: Vec<HitRecord>,
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::input(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::failure(format!("thread pool: {e}")))
}

fn cmd_spectrum(config: &Path, scan: &ScanConfig, path: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = ModelConfig::load(config)?;
    scan.validate()?;
    let pair = cfg.pair(false)?;
    let model = cfg.build_model()?;
    let pool = thread_pool()?;
    let hits = pool.install(|| krein::scan_eigenvalues(&pair, model.as_ref(), scan))?;
    let report = SpectrumReport {
        model: cfg.model,
        n: cfg.n,
        scan: scan.clone(),
        hits: hits.iter().map(HitRecord::from).collect(),
    };
    let mut body = serde_json::to_string_pretty(&report).map_err(|e| CliError::failure(e.to_string()))?;
    body.push('\n');
    emit(path, &body, out)?;
    if let Some(p) = path {
        writeln!(out, "{} eigenvalue(s) written to {}", hits.len(), p.display())?;
    }
    Ok(EXIT_OK)
}

fn parse_f64(cell: &str, line: usize) -> Result<f64, CliError> {
    cell.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::input(format!("points line {line}: bad number {cell:?}")))
}

fn parse_edge_point(cell: &str, line: usize) -> Result<SpacePoint, CliError> {
    let (edge, x) = cell
        .trim()
        .split_once(':')
        .ok_or_else(|| CliError::input(format!("points line {line}: expected edge:coordinate, got {cell:?}")))?;
    let edge = edge
        .trim()
        .parse::<usize>()
        .map_err(|_| CliError::input(format!("points line {line}: bad edge index {edge:?}")))?;
    Ok(SpacePoint::Edge { edge, x: parse_f64(x, line)? })
}

/// Reads point-pair rows: `edge:x,edge:y` for the star graph and
/// `x1,x2,x3,y1,y2,y3` in three dimensions. Blank lines and lines starting
/// with `#` are skipped.
pub fn parse_point_pairs(text: &str, kind: ModelKind) -> Result<Vec<(SpacePoint, SpacePoint)>, CliError> {
    let mut rows = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = l.split(',').collect();
        match kind {
            ModelKind::Star => {
                if cells.len() != 2 {
                    return Err(CliError::input(format!("points line {line}: expected 2 cells")));
                }
                rows.push((parse_edge_point(cells[0], line)?, parse_edge_point(cells[1], line)?));
            }
            ModelKind::Point3d => {
                if cells.len() != 6 {
                    return Err(CliError::input(format!("points line {line}: expected 6 cells")));
                }
                let v = cells.iter().map(|c| parse_f64(c, line)).collect::<Result<Vec<_>, _>>()?;
                rows.push((SpacePoint::Space([v[0], v[1], v[2]]), SpacePoint::Space([v[3], v[4], v[5]])));
            }
        }
    }
    Ok(rows)
}

fn point_cells(p: &SpacePoint) -> String {
    match p {
        SpacePoint::Edge { edge, x } => format!("{edge}:{x}"),
        SpacePoint::Space([a, b, c]) => format!("{a},{b},{c}"),
    }
}

fn cmd_green(config: &Path, z: &str, points: &Path, path: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = ModelConfig::load(config)?;
    let z = parse_complex(z)?;
    let pair = cfg.pair(false)?;
    let model = cfg.build_model()?;
    if !model.resolvent_set_contains(z) {
        return Err(Error::OutsideResolventSet(z).into());
    }
    let text = std::fs::read_to_string(points)
        .map_err(|e| CliError::input(format!("{}: {e}", points.display())))?;
    let rows = parse_point_pairs(&text, cfg.model)?;
    for (x, y) in &rows {
        model.check_point(x)?;
        model.check_point(y)?;
    }
    // singularity is a property of z alone
    krein::correction_matrix(&pair, model.as_ref(), z)?;

    let mut body = String::new();
    body.push_str(match cfg.model {
        ModelKind::Star => "x,y,re_g,im_g\n",
        ModelKind::Point3d => "x1,x2,x3,y1,y2,y3,re_g,im_g\n",
    });
    for (x, y) in &rows {
        let value = match krein::perturbed_green(&pair, model.as_ref(), x, y, z) {
            Ok(g) => format!("{},{}", g.re, g.im),
            Err(Error::CoincidentPoints) => "ERR,coincident_points".to_string(),
            Err(Error::PointAtCenter(j)) => format!("ERR,point_at_center_{j}"),
            Err(e) => return Err(e.into()),
        };
        let _ = writeln!(body, "{},{},{}", point_cells(x), point_cells(y), value);
    }
    emit(path, &body, out)?;
    Ok(EXIT_OK)
}

/// One line of the `check` report.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub failures: usize,
    pub skipped: bool,
}

impl CheckOutcome {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, max_error: 0.0, tolerance, failures: 0, skipped: false }
    }

    fn record(&mut self, r: Result<f64, Error>) {
        match r {
            Ok(e) if e.is_finite() => self.max_error = self.max_error.max(e),
            _ => {
                self.failures += 1;
                self.max_error = f64::INFINITY;
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.skipped || (self.failures == 0 && self.max_error <= self.tolerance)
    }
}

fn random_nonreal(rng: &mut ChaCha8Rng) -> C64 {
    let re = rng.gen_range(-5.0..5.0);
    let im = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    C64::new(re, im)
}

fn random_point(rng: &mut ChaCha8Rng, cfg: &ModelConfig) -> SpacePoint {
    match &cfg.centers {
        None => SpacePoint::Edge { edge: rng.gen_range(0..cfg.n), x: rng.gen_range(0.0..3.0) },
        Some(centers) => loop {
            let anchor = centers[rng.gen_range(0..centers.len())];
            let p = [
                anchor[0] + rng.gen_range(-2.0..2.0),
                anchor[1] + rng.gen_range(-2.0..2.0),
                anchor[2] + rng.gen_range(-2.0..2.0),
            ];
            let clear = centers.iter().all(|c| {
                ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) + (p[2] - c[2]).powi(2)).sqrt() > 0.1
            });
            if clear {
                break SpacePoint::Space(p);
            }
        },
    }
}

fn compare(
    a: &Result<ComplexMatrix, Error>,
    b: &Result<ComplexMatrix, Error>,
    f: impl Fn(&ComplexMatrix, &ComplexMatrix) -> f64,
) -> Result<f64, Error> {
    match (a, b) {
        (Ok(a), Ok(b)) => Ok(f(a, b)),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    }
}

fn distance(p: &SpacePoint, q: &SpacePoint) -> f64 {
    match (p, q) {
        (SpacePoint::Space(a), SpacePoint::Space(b)) => {
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
        }
        _ => f64::INFINITY,
    }
}

/// Runs the identity checks behind `krein-bc check`.
pub fn run_checks(cfg: &ModelConfig, pair: &BoundaryPair, samples: usize, seed: u64) -> Result<Vec<CheckOutcome>, CliError> {
    let model = cfg.build_model()?;
    let m = model.as_ref();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut forms = CheckOutcome::new("form-equivalence", 1e-10);
    let mut conj = CheckOutcome::new("conjugate-symmetry", 1e-10);
    let mut oracle = CheckOutcome::new("abstract-oracle", 1e-10);
    let mut qfun = CheckOutcome::new("q-function-quadrature", 1e-8);
    let mut herm = CheckOutcome::new("kernel-hermiticity", 1e-10);
    let mut canon = CheckOutcome::new("canonical-range", 1e-9);
    qfun.skipped = cfg.model != ModelKind::Star;

    for _ in 0..samples {
        let z = random_nonreal(&mut rng);
        let q = m.q_matrix(z)?;
        let f1 = krein::correction_matrix_form1(pair, &q);
        let f2 = krein::correction_matrix_form2(pair, &q);
        forms.record(compare(&f1, &f2, |a, b| a.max_abs_diff(b)));
        let partner = m.q_matrix(z.conj()).and_then(|qc| krein::correction_matrix_form1(pair, &qc));
        conj.record(compare(&f2, &partner, |b, p| b.adjoint().max_abs_diff(p)));
        let abstract_c = krein::abstract_correction(pair, m, z);
        oracle.record(compare(&f1, &abstract_c, |a, c| a.max_abs_diff(c)));

        let zeta = random_nonreal(&mut rng);
        if let ModelKind::Star = cfg.model {
            let star = StarGraph::new(cfg.n)?;
            qfun.record(models::gamma_gram(&star, z, zeta).and_then(|g| {
                let (quad, _) = quadrature::star_gamma_gram(&star, z, zeta, 1e-12)?;
                Ok(g.max_abs_diff(&quad))
            }));
        }

        let x = random_point(&mut rng, cfg);
        let mut y = random_point(&mut rng, cfg);
        while distance(&x, &y) < 0.1 {
            y = random_point(&mut rng, cfg);
        }
        herm.record(krein::perturbed_green(pair, m, &x, &y, z).and_then(|g| {
            let h = krein::perturbed_green(pair, m, &y, &x, z.conj())?;
            Ok((g - h.conj()).norm())
        }));
    }
    canon.record(Ok(pair.relation().max_principal_angle(&pair.canonical_range_form())));

    Ok(vec![forms, conj, oracle, qfun, herm, canon])
}

fn cmd_check(config: &Path, samples: usize, seed: u64, unchecked: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = ModelConfig::load(config)?;
    let pair = cfg.pair(unchecked)?;
    let outcomes = run_checks(&cfg, &pair, samples, seed)?;
    writeln!(out, "checks: model={:?} n={} samples={samples} seed={seed}", cfg.model, cfg.n)?;
    let mut all = true;
    for o in &outcomes {
        let verdict = if o.skipped {
            "SKIP"
        } else if o.passed() {
            "PASS"
        } else {
            all = false;
            "FAIL"
        };
        writeln!(
            out,
            "{:<24} max_err={:.3e} tol={:.0e} failures={} {verdict}",
            o.name, o.max_error, o.tolerance, o.failures
        )?;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct MatrixOut {
    rows: usize,
    cols: usize,
    entries: JsonMatrix,
}

fn matrix_out(m: &ComplexMatrix) -> MatrixOut {
    MatrixOut { rows: m.rows(), cols: m.cols(), entries: matrix_to_json(m) }
}

fn cmd_relation(config: &Path, op: RelationOp, unchecked: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = ModelConfig::load(config)?;
    let pair = cfg.pair(unchecked)?;
    let body = match op {
        RelationOp::IsSelfadjoint => format!("{}\n", pair.relation().is_selfadjoint()),
        RelationOp::ToUnitary => json_line(&matrix_out(&pair.to_unitary()?))?,
        RelationOp::Canonical => json_line(&matrix_out(pair.canonical_range_form().basis()))?,
        RelationOp::Adjoint => json_line(&matrix_out(pair.relation().adjoint_relation().basis()))?,
    };
    out.write_all(body.as_bytes())?;
    Ok(EXIT_OK)
}

fn json_line(v: &impl Serialize) -> Result<String, CliError> {
    serde_json::to_string(v).map(|s| s + "\n").map_err(|e| CliError::failure(e.to_string()))
}
