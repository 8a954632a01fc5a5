//! Command-line front end. `main` only maps [`run`]'s outcome to an exit status.

mod matrix_file;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use matrix_file::{load_matrix, parse_complex, parse_matrix};

use crate::closed_forms::{registry, FormKind};
use crate::error::{Error, Result};
use crate::fock::{make_fock, make_grid, observable_xp, LineRealization, XpMode};
use crate::lie::{build_observable, fock_vacuum_state, AtomFormula, GENERATOR_SETS, OBSERVABLES};
use crate::linalg::{charfun_exact, decompose, spectral_measure, HermitianOperator, StateVector, C64};
use crate::measure::CharacteristicFunctionTrace;
use crate::report::{fmt_f64, to_csv, to_json, ReportDocument, ReportEntry, ReportMetadata, SCHEMA};
use crate::stone::{stone_cdf, stone_charfun, Extrapolation, ResolventBackend, ResolventProbeConfig, UniformGrid};
use crate::verify::{run_suite, Suite};

/// Exit status for a configuration error.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for a numerical failure.
pub const EXIT_NUMERICAL: i32 = 3;
/// Exit status when a verdict fails.
pub const EXIT_VERIFICATION: i32 = 4;

/// A state off unit norm by less than this is renormalized with a warning.
pub const RENORMALIZE_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "spectral-cf", version, about = "Spectral measures and characteristic functions of quantum observables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// List catalogue observables, generator sets, line observables and closed forms.
    List(ListArgs),
    /// Eigenvalues, multiplicities and eigenprojections.
    Decompose(DecomposeArgs),
    /// Characteristic function <u, e^{itH} u> by exact decomposition and/or resolvent probes.
    Charfun(CharfunArgs),
    /// Smoothed density, distribution function and atoms from resolvent probes.
    Stone(StoneArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Cross-validation report for one observable and state.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Stone,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Auto,
    Dense,
    Lanczos,
}

impl From<Backend> for ResolventBackend {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Auto => ResolventBackend::Auto,
            Backend::Dense => ResolventBackend::DenseLu,
            Backend::Lanczos => ResolventBackend::Lanczos,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ObservableArgs {
    /// Catalogue name, `fock:<mode>:<n_max>`, `grid:<mode>:<n_points>:<x_max>` or a matrix file.
    #[arg(long)]
    pub observable: String,
    /// `vacuum` or comma-separated amplitudes such as `0.6,0.48+0.64i`.
    #[arg(long, default_value = "vacuum", allow_hyphen_values = true)]
    pub state: String,
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Record the wall-clock time in JSON metadata (output is then no longer reproducible).
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ListArgs {
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub observable: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    /// Descending Poisson widths; the last one is the working width.
    #[arg(long, value_delimiter = ',', default_value = "1e-3")]
    pub epsilons: Vec<f64>,
    /// `none`, `richardson` or `deconvolution:<t_max>`.
    #[arg(long, default_value = "none")]
    pub extrapolation: String,
    #[arg(long, value_enum, default_value = "auto")]
    pub backend: Backend,
}

#[derive(Debug, Args, Serialize)]
pub struct CharfunArgs {
    #[command(flatten)]
    pub target: ObservableArgs,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: Method,
    /// Sample points `lo:hi:n`.
    #[arg(long = "t", default_value = "-5:5:256", allow_hyphen_values = true)]
    pub t: String,
    #[command(flatten)]
    pub probe: ProbeArgs,
    /// Largest accepted |stone - exact e^{-ε|t|}| for `--method both`.
    #[arg(long, default_value_t = 1e-6)]
    pub pair_tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct StoneArgs {
    #[command(flatten)]
    pub target: ObservableArgs,
    #[command(flatten)]
    pub probe: ProbeArgs,
    /// Probe grid `lo:hi:n`; chosen from the state's moments when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Output grid `lo:hi:n`; the probe samples are linearly interpolated onto it.
    #[arg(long, allow_hyphen_values = true)]
    pub sample: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// `printed` (alias `paper`), `corrected` or `all`.
    #[arg(long, default_value = "corrected")]
    pub suite: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    pub target: ObservableArgs,
    #[arg(long = "t", default_value = "-5:5:64", allow_hyphen_values = true)]
    pub t: String,
    #[command(flatten)]
    pub probe: ProbeArgs,
    /// Closed-form id to compare the exact characteristic function with.
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    pub pair_tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// What a successful run produced.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub verdict_pass: bool,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn pass(text: String) -> Self {
        Self {
            text,
            verdict_pass: true,
            warnings: Vec::new(),
        }
    }
}

/// Maps a library error to the exit status of its class.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

/// An observable with what is known about it.
pub struct ResolvedObservable {
    pub id: String,
    pub matrix: HermitianOperator,
    pub vacuum: Option<StateVector>,
    pub reference_cf: Option<&'static str>,
    pub reference_atoms: Option<AtomFormula>,
}

fn line_reference(mode: XpMode) -> Option<&'static str> {
    match mode {
        XpMode::X => Some("gaussian-X"),
        XpMode::P => Some("gaussian-P"),
        XpMode::XPlusP => Some("gaussian-X+P"),
        XpMode::XpPlusPx => Some("xp-px-vacuum"),
        XpMode::Su11H => Some("su11-boson-vacuum"),
        XpMode::Quad(..) => None,
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("cannot read {what} from '{s}'")))
}

pub fn resolve_observable(id: &str) -> Result<ResolvedObservable> {
    if OBSERVABLES.contains(&id) {
        let obs = build_observable(id)?;
        let vacuum = match obs.vacuum_of {
            Some(_) => Some(fock_vacuum_state(id)?),
            None => None,
        };
        return Ok(ResolvedObservable {
            id: id.into(),
            matrix: obs.matrix,
            vacuum,
            reference_cf: obs.reference_cf,
            reference_atoms: obs.reference_atoms,
        });
    }
    let line = |space: &dyn LineRealization, mode: XpMode| -> Result<ResolvedObservable> {
        Ok(ResolvedObservable {
            id: id.into(),
            matrix: observable_xp(mode, space)?,
            vacuum: Some(space.vacuum().clone()),
            reference_cf: line_reference(mode),
            reference_atoms: None,
        })
    };
    if let Some(rest) = id.strip_prefix("fock:") {
        let (mode, n) = rest
            .rsplit_once(':')
            .ok_or_else(|| Error::Invalid(format!("expected fock:<mode>:<n_max>, got '{id}'")))?;
        return line(&make_fock(parse_num(n, "n_max")?)?, mode.parse()?);
    }
    if let Some(rest) = id.strip_prefix("grid:") {
        let parts: Vec<&str> = rest.rsplitn(3, ':').collect();
        if parts.len() != 3 {
            return Err(Error::Invalid(format!("expected grid:<mode>:<n_points>:<x_max>, got '{id}'")));
        }
        let grid = make_grid(parse_num(parts[1], "n_points")?, parse_num(parts[0], "x_max")?)?;
        return line(&grid, parts[2].parse()?);
    }
    let path = std::path::Path::new(id);
    if path.is_file() {
        return Ok(ResolvedObservable {
            id: id.into(),
            matrix: load_matrix(path)?,
            vacuum: None,
            reference_cf: None,
            reference_atoms: None,
        });
    }
    Err(Error::Unknown(id.into()))
}

/// Parses a state; returns it with a warning when it had to be renormalized.
pub fn parse_state(spec: &str, obs: &ResolvedObservable) -> Result<(StateVector, Option<String>)> {
    if spec.trim() == "vacuum" {
        let v = obs.vacuum.clone().ok_or_else(|| {
            Error::Invalid(format!("'{}' has no vacuum; pass amplitudes with --state", obs.id))
        })?;
        return Ok((v, None));
    }
    let amps = spec
        .split(',')
        .map(|t| parse_complex(t.trim()).ok_or_else(|| Error::Invalid(format!("cannot read amplitude '{t}'"))))
        .collect::<Result<Vec<C64>>>()?;
    if amps.len() != obs.matrix.dim() {
        return Err(Error::DimensionMismatch {
            expected: obs.matrix.dim(),
            found: amps.len(),
        });
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let off = (norm - 1.0).abs();
    if off <= crate::linalg::NORM_TOL {
        return Ok((StateVector::from_complex(&amps)?, None));
    }
    if off < RENORMALIZE_TOL {
        let v = StateVector::normalized(crate::linalg::CVector::from_column_slice(&amps))?;
        return Ok((v, Some(format!("state norm {norm} renormalized to 1"))));
    }
    Err(Error::Invalid(format!(
        "state norm is {norm}; amplitudes must be normalized (tolerance {RENORMALIZE_TOL})"
    )))
}

/// Parses `lo:hi:n`.
pub fn parse_range(s: &str) -> Result<UniformGrid> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [lo, hi, n] => UniformGrid::new(parse_num(lo, "lower bound")?, parse_num(hi, "upper bound")?, parse_num(n, "point count")?),
        _ => Err(Error::Invalid(format!("expected lo:hi:n, got '{s}'"))),
    }
}

pub fn parse_extrapolation(s: &str) -> Result<Extrapolation> {
    match s {
        "none" => Ok(Extrapolation::None),
        "richardson" => Ok(Extrapolation::Richardson),
        other => match other.strip_prefix("deconvolution:") {
            Some(t) => Ok(Extrapolation::PoissonDeconvolution {
                t_max: parse_num(t, "t_max")?,
            }),
            None => Err(Error::Invalid(format!(
                "unknown extrapolation '{other}' (none, richardson, deconvolution:<t_max>)"
            ))),
        },
    }
}

fn probe_config(probe: &ProbeArgs, h: &HermitianOperator, u: &StateVector, grid: Option<UniformGrid>) -> Result<ResolventProbeConfig> {
    let base = match grid {
        Some(g) => ResolventProbeConfig::new(probe.epsilons.clone(), g)?,
        None => ResolventProbeConfig::auto(h, u, probe.epsilons.clone())?,
    };
    Ok(base
        .with_extrapolation(parse_extrapolation(&probe.extrapolation)?)
        .with_backend(probe.backend.into()))
}

fn metadata(config: &impl Serialize, out: &OutputArgs) -> ReportMetadata {
    let mut m = ReportMetadata::new(serde_json::to_value(config).unwrap_or(Value::Null));
    if out.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        m.timestamp = Some(format!("unix:{secs}"));
    }
    m
}

fn envelope(meta: ReportMetadata, body: Value) -> Value {
    let mut doc = json!({"schema": SCHEMA, "metadata": meta});
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc
}

fn cplx(z: C64) -> Value {
    json!([z.re, z.im])
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let (out, outcome) = match &cli.command {
        Command::List(a) => (&a.out, cmd_list(a)?),
        Command::Decompose(a) => (&a.out, cmd_decompose(a, &cli.command)?),
        Command::Charfun(a) => (&a.out, cmd_charfun(a, &cli.command)?),
        Command::Stone(a) => (&a.out, cmd_stone(a, &cli.command)?),
        Command::Verify(a) => (&a.out, cmd_verify(a)?),
        Command::Report(a) => (&a.out, cmd_report(a, &cli.command)?),
    };
    match &out.output {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(outcome.text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(outcome)
}

fn cmd_list(a: &ListArgs) -> Result<Outcome> {
    let modes = ["X", "P", "X+P", "XP+PX", "su11-H", "quad(a,b)"];
    let forms: Vec<Value> = registry()
        .iter()
        .map(|f| json!({"id": f.id, "kind": f.kind, "description": f.provenance}))
        .collect();
    let text = match a.out.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&envelope(
            metadata(&json!({"command": "list"}), &a.out),
            json!({
                "observables": OBSERVABLES,
                "generator_sets": GENERATOR_SETS,
                "line_modes": modes,
                "closed_forms": forms,
            }),
        )),
        _ => {
            let mut s = String::from("observables:\n");
            for o in OBSERVABLES {
                s.push_str(&format!("  {o}\n"));
            }
            s.push_str("generator sets:\n");
            for g in GENERATOR_SETS {
                s.push_str(&format!("  {g}\n"));
            }
            s.push_str("line observables (fock:<mode>:<n_max>, grid:<mode>:<n_points>:<x_max>):\n");
            for m in modes {
                s.push_str(&format!("  {m}\n"));
            }
            s.push_str("closed forms:\n");
            for f in registry() {
                let kind = match f.kind {
                    FormKind::CharacteristicFunction => "cf",
                    FormKind::Printed => "printed",
                    FormKind::Density => "density",
                    FormKind::Cdf => "cdf",
                };
                s.push_str(&format!("  {:<40} {:<8} {}\n", f.id, kind, f.provenance));
            }
            s
        }
    };
    Ok(Outcome::pass(text))
}

fn cmd_decompose(a: &DecomposeArgs, config: &Command) -> Result<Outcome> {
    let obs = resolve_observable(&a.observable)?;
    let d = decompose(&obs.matrix)?;
    let text = match a.out.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let projections: Vec<Value> = d
                .projections()
                .iter()
                .map(|p| {
                    Value::Array(
                        (0..p.nrows())
                            .map(|i| Value::Array((0..p.ncols()).map(|j| cplx(p[(i, j)])).collect()))
                            .collect(),
                    )
                })
                .collect();
            to_json(&envelope(
                metadata(config, &a.out),
                json!({
                    "observable": obs.id,
                    "dim": d.dim(),
                    "merge_tol": d.merge_tol(),
                    "eigenvalues": d.eigenvalues(),
                    "multiplicities": d.multiplicities(),
                    "projections": projections,
                }),
            ))
        }
        _ => to_csv(
            &["index", "eigenvalue", "multiplicity"],
            d.eigenvalues()
                .iter()
                .zip(d.multiplicities())
                .enumerate()
                .map(|(k, (l, m))| vec![k.to_string(), fmt_f64(*l), m.to_string()]),
        ),
    };
    Ok(Outcome::pass(text))
}

struct CfRows {
    exact: Option<CharacteristicFunctionTrace>,
    stone: Option<CharacteristicFunctionTrace>,
}

impl CfRows {
    /// `|stone - exact e^{-ε|t|}|` per sample, with `ε` the damping left in the stone trace.
    fn diffs(&self) -> Option<Vec<f64>> {
        let (e, s) = (self.exact.as_ref()?, self.stone.as_ref()?);
        let damped = e.damped(s.epsilon);
        Some(damped.values.iter().zip(&s.values).map(|(a, b)| (a - b).norm()).collect())
    }
}

fn compute_cf(
    method: Method,
    obs: &ResolvedObservable,
    u: &StateVector,
    ts: &[f64],
    probe: &ProbeArgs,
) -> Result<CfRows> {
    let exact = match method {
        Method::Exact | Method::Both => Some(charfun_exact(&obs.matrix, u, ts)?),
        Method::Stone => None,
    };
    let stone = match method {
        Method::Stone | Method::Both => {
            let config = probe_config(probe, &obs.matrix, u, None)?;
            Some(stone_charfun(&obs.matrix, u, &config, ts)?)
        }
        Method::Exact => None,
    };
    Ok(CfRows { exact, stone })
}

fn cmd_charfun(a: &CharfunArgs, config: &Command) -> Result<Outcome> {
    let obs = resolve_observable(&a.target.observable)?;
    let (u, warning) = parse_state(&a.target.state, &obs)?;
    let ts = parse_range(&a.t)?.points();
    let rows = compute_cf(a.method, &obs, &u, &ts, &a.probe)?;
    let diffs = rows.diffs();
    let pass = diffs.as_ref().is_none_or(|d| d.iter().all(|&x| x <= a.pair_tol));

    let text = match a.out.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let points: Vec<Value> = (0..ts.len())
                .map(|k| {
                    let mut p = json!({"t": ts[k]});
                    if let Some(e) = &rows.exact {
                        p["exact"] = cplx(e.values[k]);
                    }
                    if let Some(s) = &rows.stone {
                        p["stone"] = cplx(s.values[k]);
                    }
                    if let Some(d) = &diffs {
                        p["abs_diff"] = json!(d[k]);
                    }
                    p
                })
                .collect();
            to_json(&envelope(
                metadata(config, &a.out),
                json!({
                    "observable": obs.id,
                    "method": a.method,
                    "epsilon": rows.stone.as_ref().map(|s| s.epsilon),
                    "pair_tol": a.pair_tol,
                    "pass": pass,
                    "points": points,
                }),
            ))
        }
        _ => {
            let mut header = vec!["t"];
            if rows.exact.is_some() {
                header.extend(["re_exact", "im_exact"]);
            }
            if rows.stone.is_some() {
                header.extend(["re_stone", "im_stone"]);
            }
            if diffs.is_some() {
                header.push("abs_diff");
            }
            let lines = (0..ts.len()).map(|k| {
                let mut row = vec![fmt_f64(ts[k])];
                for tr in [&rows.exact, &rows.stone].into_iter().flatten() {
                    row.push(fmt_f64(tr.values[k].re));
                    row.push(fmt_f64(tr.values[k].im));
                }
                if let Some(d) = &diffs {
                    row.push(fmt_f64(d[k]));
                }
                row
            });
            to_csv(&header, lines)
        }
    };
    let mut outcome = Outcome::pass(text);
    outcome.verdict_pass = pass;
    outcome.warnings.extend(warning);
    if !pass {
        let worst = diffs.unwrap_or_default().into_iter().fold(0.0, f64::max);
        outcome
            .warnings
            .push(format!("abs_diff reaches {worst:e}, above the pair tolerance {:e}", a.pair_tol));
    }
    Ok(outcome)
}

/// Linear interpolation of `(x, y)` samples on a uniform grid.
fn interpolate(samples: &[(f64, f64)], x: f64) -> f64 {
    let n = samples.len();
    let (x0, x1) = (samples[0].0, samples[n - 1].0);
    if x <= x0 {
        return samples[0].1;
    }
    if x >= x1 {
        return samples[n - 1].1;
    }
    let h = (x1 - x0) / (n - 1) as f64;
    let k = (((x - x0) / h).floor() as usize).min(n - 2);
    let (xa, ya) = samples[k];
    let (xb, yb) = samples[k + 1];
    ya + (yb - ya) * (x - xa) / (xb - xa)
}

fn cmd_stone(a: &StoneArgs, config: &Command) -> Result<Outcome> {
    let obs = resolve_observable(&a.target.observable)?;
    let (u, warning) = parse_state(&a.target.state, &obs)?;
    let grid = a.lambda.as_deref().map(parse_range).transpose()?;
    let probe = probe_config(&a.probe, &obs.matrix, &u, grid)?;
    let m = stone_cdf(&obs.matrix, &u, &probe)?;
    let density = m.density.clone().unwrap_or_default();
    let cdf = m.cdf.clone().unwrap_or_default();
    let rows: Vec<(f64, f64, f64)> = match a.sample.as_deref().map(parse_range).transpose()? {
        Some(g) => g
            .points()
            .into_iter()
            .map(|x| (x, interpolate(&density, x), interpolate(&cdf, x)))
            .collect(),
        None => density.iter().zip(&cdf).map(|(d, c)| (d.0, d.1, c.1)).collect(),
    };
    let text = match a.out.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&envelope(
            metadata(config, &a.out),
            json!({
                "observable": obs.id,
                "method": m.method,
                "epsilon_used": m.epsilon_used,
                "tail_bound": m.tail_bound,
                "probe_grid": probe.t_grid,
                "atoms": m.atoms,
                "samples": rows.iter().map(|r| json!({"lambda": r.0, "density": r.1, "cdf": r.2})).collect::<Vec<_>>(),
            }),
        )),
        _ => to_csv(
            &["lambda", "density", "cdf"],
            rows.iter().map(|r| vec![fmt_f64(r.0), fmt_f64(r.1), fmt_f64(r.2)]),
        ),
    };
    let mut outcome = Outcome::pass(text);
    outcome.warnings.extend(warning);
    if a.out.format != Some(Format::Json) {
        for atom in &m.atoms {
            outcome
                .warnings
                .push(format!("atom at {} with weight {}", fmt_f64(atom.location), fmt_f64(atom.weight)));
        }
    }
    Ok(outcome)
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let suite: Suite = a.suite.parse()?;
    let mut doc = run_suite(suite);
    if a.out.timestamp {
        doc.metadata = metadata(&doc.metadata.config, &a.out);
    }
    let text = match a.out.format.unwrap_or(Format::Text) {
        Format::Json => doc.to_json(),
        Format::Csv => to_csv(
            &["name", "pass", "abs_error", "tolerance"],
            doc.entries
                .iter()
                .map(|e| vec![e.name.clone(), e.pass.to_string(), fmt_f64(e.abs_error), fmt_f64(e.tolerance)]),
        ),
        Format::Text => doc.to_text(),
    };
    let mut outcome = Outcome::pass(text);
    outcome.verdict_pass = doc.all_pass();
    Ok(outcome)
}

fn cmd_report(a: &ReportArgs, config: &Command) -> Result<Outcome> {
    let obs = resolve_observable(&a.target.observable)?;
    let (u, warning) = parse_state(&a.target.state, &obs)?;
    let ts = parse_range(&a.t)?.points();
    let mut doc = ReportDocument::new(metadata(config, &a.out));

    let rows = compute_cf(Method::Both, &obs, &u, &ts, &a.probe)?;
    let diffs = rows.diffs().unwrap_or_default();
    let worst = diffs.iter().copied().fold(0.0, f64::max);
    let eps = rows.stone.as_ref().map_or(0.0, |s| s.epsilon);
    doc.push(ReportEntry::new(
        "stone-vs-exact",
        format!("resolvent-probe characteristic function equals the exact one times e^{{-ε|t|}}, ε = {eps}"),
        json!(worst),
        json!(0.0),
        worst,
        a.pair_tol,
    ));

    let exact = rows.exact.as_ref().expect("both methods requested");
    let reference = a.reference.as_deref().or(if a.target.state.trim() == "vacuum" { obs.reference_cf } else { None });
    if let Some(id) = reference {
        let form = crate::closed_forms::closed_form(id)?;
        let mut err: f64 = 0.0;
        for (t, v) in exact.iter() {
            err = err.max((v - form.evaluate(t)?).norm());
        }
        doc.push(ReportEntry::new(
            format!("exact-vs-{id}"),
            format!("exact characteristic function equals the closed form {id}"),
            json!(err),
            json!(0.0),
            err,
            1e-10,
        ));
    }
    if let Some(formula) = obs.reference_atoms {
        let measure = spectral_measure(&obs.matrix, &u)?;
        let expect = formula(u.amplitudes().as_slice());
        let err = if expect.len() == measure.atoms.len() {
            expect
                .iter()
                .zip(&measure.atoms)
                .map(|(x, y)| (x.location - y.location).abs().max((x.weight - y.weight).abs()))
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        doc.push(ReportEntry::new(
            "exact-atoms-vs-formula",
            "spectral measure equals the parametric law of the catalogue entry",
            json!(measure.atoms.iter().map(|x| [x.location, x.weight]).collect::<Vec<_>>()),
            json!(expect.iter().map(|x| [x.location, x.weight]).collect::<Vec<_>>()),
            err,
            1e-10,
        ));
    }

    let text = match a.out.format.unwrap_or(Format::Json) {
        Format::Text => doc.to_text(),
        _ => doc.to_json(),
    };
    let mut outcome = Outcome::pass(text);
    outcome.verdict_pass = doc.all_pass();
    outcome.warnings.extend(warning);
    Ok(outcome)
}

/// Sizes the global thread pool from `SPECTRAL_CF_THREADS` (0 or unset: one per core).
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("SPECTRAL_CF_THREADS") else {
        return Ok(());
    };
    let n: usize = parse_num(&raw, "SPECTRAL_CF_THREADS")?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Invalid(format!("cannot size the thread pool: {e}")))?;
    }
    Ok(())
}
