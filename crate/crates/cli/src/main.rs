//! Atlas over the parameter box of an indirectly damped coupled system.
//!
//! Subcommands either report data — `classify`, `preset`, `scan`,
//! `spectrum`, `resolvent`, `asymptotics` — or check the closed-form
//! classifier against independent measurements (`verify`).  Exit code 0
//! means the run completed (warnings allowed), 1 means a verification
//! check failed, 2 means the invocation itself was unusable: bad flags,
//! inadmissible parameters, or an I/O failure.
//!
//! Data files written under `--out` carry no timestamps or run metadata,
//! so equal inputs give byte-identical artifacts; provenance lives in the
//! accompanying `manifest.json`.

mod presets;
mod report;

use std::collections::BTreeMap;
use std::env;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use gevrey_core::expansion::{expand_roots, BranchExpansion};
use gevrey_core::resolvent::{default_lambda_grid, resolvent_curve_on, resolvent_norm};
use gevrey_core::spectral::builtin_models;
use gevrey_core::sweep::{
    contraction_margin, estimate_gevrey, sweep_spectrum, MuGrid, ND_RE_EXPONENT,
};
use gevrey_core::{
    classify_regularity, criterion_check, interpolation_check, model_by_name, partition_cell,
    stability_order, Error as CoreError, Params, RegularityKind, RegularityVerdict,
    StabilityInfo, StabilityRegion,
};

use presets::{preset_by_name, preset_point, sweep_values, PRESETS};
use report::OutputSink;

/// Relative agreement required between a spectral-tail estimate and the
/// classified exponent.
const SPECTRUM_REL_TOL: f64 = 0.03;
/// Analytic-grade floor for the spectral-tail estimate.
const SPECTRUM_ANALYTIC_MIN: f64 = 0.97;
/// Relative agreement required between the expansion ratio law and the
/// classified exponent (the law is closed-form, so this only absorbs
/// floating-point noise).
const ASYMPTOTICS_REL_TOL: f64 = 1e-6;
/// Random draws per spectral model in the interpolation check.
const INTERPOLATION_DRAWS: usize = 100;
/// Lattice spacing bounds for `scan`.
const SCAN_H_MIN: f64 = 1e-4;
const SCAN_H_MAX: f64 = 0.1;
/// A change edge farther than this many lattice steps from every printed
/// boundary line counts as unmatched.
const EDGE_MATCH_FACTOR: f64 = 0.75;

#[derive(Parser)]
#[command(
    name = "gevrey-atlas",
    version,
    about = "Classify and verify smoothing classes of an indirectly damped coupled system",
    propagate_version = true
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Directory for artifacts (tables, reports, manifest.json).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Table artifact format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Snap parameters within EPS onto the nearest printed boundary value.
    #[arg(long, global = true, value_name = "EPS")]
    snap: Option<f64>,
    /// Worker threads, 0 = all cores (GEVREY_ATLAS_JOBS overrides).
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    jobs: usize,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// One parameter point of the coupled system.
#[derive(Args, Clone, Copy)]
struct PointArgs {
    /// Coupling order exponent.
    #[arg(long)]
    alpha: f64,
    /// Damping order exponent.
    #[arg(long)]
    beta: f64,
    /// Second-propagator order exponent.
    #[arg(long)]
    gamma: f64,
    /// Propagation speed ratio.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Coupling strength.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    b: f64,
    /// Damping strength.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
}

impl PointArgs {
    fn params(&self, snap: Option<f64>) -> Result<Params> {
        let p = Params::exploratory(self.alpha, self.beta, self.gamma, self.a, self.b, self.k)
            .map_err(anyhow::Error::from)?;
        Ok(match snap {
            Some(eps) => p.snapped(eps),
            None => p,
        })
    }

    fn record(&self, opts: &mut BTreeMap<String, String>) {
        opts.insert("alpha".into(), self.alpha.to_string());
        opts.insert("beta".into(), self.beta.to_string());
        opts.insert("gamma".into(), self.gamma.to_string());
        opts.insert("a".into(), self.a.to_string());
        opts.insert("b".into(), self.b.to_string());
        opts.insert("k".into(), self.k.to_string());
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify one parameter point: smoothing kind, subregion, order, cell.
    Classify {
        #[command(flatten)]
        point: PointArgs,
        /// Also evaluate the decay order for this labelled stability region
        /// (S1-S5, St1, St2).
        #[arg(long, value_name = "LABEL")]
        stability: Option<String>,
    },
    /// List bundled one-parameter sweeps, or run one by name.
    Preset {
        /// Sweep name; omit to list all presets.
        name: Option<String>,
        /// Axis step (breakpoints are always included).
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Override the preset's speed ratio.
        #[arg(long)]
        a: Option<f64>,
    },
    /// Classify an (alpha, beta) lattice at fixed gamma and summarize the
    /// observed boundaries against the printed ones.
    Scan {
        /// Second-propagator exponent; required unless --same-speed.
        #[arg(long, required_unless_present = "same_speed")]
        gamma: Option<f64>,
        /// Lattice spacing in alpha and beta.
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        /// Speed ratio (default 2, or 1 with --same-speed).
        #[arg(long)]
        a: Option<f64>,
        /// Scan the same-speed partition (fixes a = 1, gamma = 1).
        #[arg(long)]
        same_speed: bool,
    },
    /// Check the classifier at one point against spectrum, resolvent,
    /// expansion, and interpolation measurements.
    Verify {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value_t = VerifyMode::All)]
        mode: VerifyMode,
    },
    /// Sweep the four spectral branches over a frequency grid.
    Spectrum {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 1e2)]
        mu_min: f64,
        #[arg(long, default_value_t = 1e10)]
        mu_max: f64,
        #[arg(long, default_value_t = 33)]
        points: usize,
    },
    /// Trace the resolvent norm along the imaginary axis.
    Resolvent {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 1e3)]
        lambda_min: f64,
        #[arg(long, default_value_t = 1e9)]
        lambda_max: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
        /// Spectral sequence to restrict modes to:
        /// linear | dirichlet-1d | bilaplacian-1d | geometric[:MU0:RATIO].
        #[arg(long)]
        model: Option<String>,
        /// Mode truncation index for --model.
        #[arg(long, default_value_t = 4000)]
        n_max: usize,
    },
    /// Expand the spectral branches in closed form and report the
    /// damping-to-frequency ratio law.
    Asymptotics {
        #[command(flatten)]
        point: PointArgs,
        /// Term budget per branch.
        #[arg(long, default_value_t = 48)]
        terms: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Spectrum,
    Resolvent,
    Asymptotics,
    Interpolation,
    All,
}

impl VerifyMode {
    fn as_str(self) -> &'static str {
        match self {
            VerifyMode::Spectrum => "spectrum",
            VerifyMode::Resolvent => "resolvent",
            VerifyMode::Asymptotics => "asymptotics",
            VerifyMode::Interpolation => "interpolation",
            VerifyMode::All => "all",
        }
    }

    fn includes(self, other: VerifyMode) -> bool {
        self == VerifyMode::All || self == other
    }
}

fn main() {
    let cli = Cli::parse();
    configure_threads(&cli.global);
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

/// Resolve the worker-thread count; the environment variable wins over
/// the flag, and 0 leaves the choice to the runtime.
fn configure_threads(g: &GlobalOpts) {
    let jobs = match env::var("GEVREY_ATLAS_JOBS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                eprintln!("warning: ignoring non-numeric GEVREY_ATLAS_JOBS={s:?}");
                g.jobs
            }
        },
        Err(_) => g.jobs,
    };
    if jobs > 0 {
        // Errors only if a global pool already exists; that pool then wins.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
}

fn run(cli: Cli) -> Result<i32> {
    let g = cli.global;
    match cli.command {
        Command::Classify { point, stability } => cmd_classify(&g, point, stability),
        Command::Preset { name, step, a } => cmd_preset(&g, name, step, a),
        Command::Scan { gamma, h, a, same_speed } => cmd_scan(&g, gamma, h, a, same_speed),
        Command::Verify { point, mode } => cmd_verify(&g, point, mode),
        Command::Spectrum { point, mu_min, mu_max, points } => {
            cmd_spectrum(&g, point, mu_min, mu_max, points)
        }
        Command::Resolvent { point, lambda_min, lambda_max, points, model, n_max } => {
            cmd_resolvent(&g, point, lambda_min, lambda_max, points, model, n_max)
        }
        Command::Asymptotics { point, terms } => cmd_asymptotics(&g, point, terms),
    }
}

fn kind_str(kind: RegularityKind) -> &'static str {
    match kind {
        RegularityKind::Analytic => "Analytic",
        RegularityKind::Gevrey => "Gevrey",
        RegularityKind::NotDifferentiable => "NotDifferentiable",
    }
}

/// Filename fragment identifying a parameter point.
fn point_id(p: &Params) -> String {
    let mut id = format!("{}-{}-{}-{}", p.alpha, p.beta, p.gamma, p.a);
    if p.b != 1.0 || p.k != 1.0 {
        id.push_str(&format!("-b{}-k{}", p.b, p.k));
    }
    id
}

/// Cell label for display; the uncovered same-speed edge prints as "-".
fn cell_label(p: &Params) -> Result<String> {
    match partition_cell(p) {
        Ok(cell) => Ok(cell.as_str().to_string()),
        Err(CoreError::NoCell { .. }) | Err(CoreError::InvalidParams(_)) => Ok("-".to_string()),
        Err(e) => Err(e.into()),
    }
}

/// Serialize rows as a CSV (RFC 4180: CRLF records, header row) or a JSON
/// array, and hand the bytes to the sink.
fn write_table<T: Serialize>(
    sink: &mut OutputSink,
    stem: &str,
    format: Format,
    rows: &[T],
) -> Result<()> {
    if !sink.enabled() {
        return Ok(());
    }
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::CRLF)
                .from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            let bytes = w.into_inner().context("flushing csv")?;
            sink.write(&format!("{stem}.csv"), &bytes)
        }
        Format::Json => sink.write_json(&format!("{stem}.json"), &rows),
    }
}

fn common_options(g: &GlobalOpts) -> BTreeMap<String, String> {
    let mut opts = BTreeMap::new();
    opts.insert("format".into(), g.format.as_str().to_string());
    if let Some(eps) = g.snap {
        opts.insert("snap".into(), eps.to_string());
    }
    opts.insert("seed".into(), g.seed.to_string());
    opts
}

// ---------------------------------------------------------------------------
// classify

#[derive(Serialize)]
struct ClassifyReport {
    params: Params,
    verdict: RegularityVerdict,
    cell: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    stability: Option<StabilityInfo>,
}

fn parse_stability_label(label: &str) -> Result<StabilityRegion> {
    Ok(match label.to_ascii_uppercase().as_str() {
        "S1" => StabilityRegion::S1,
        "S2" => StabilityRegion::S2,
        "S3" => StabilityRegion::S3,
        "S4" => StabilityRegion::S4,
        "S5" => StabilityRegion::S5,
        "ST1" | "S~1" => StabilityRegion::St1,
        "ST2" | "S~2" => StabilityRegion::St2,
        _ => bail!("unknown stability label {label:?} (expected S1-S5, St1, St2)"),
    })
}

fn cmd_classify(g: &GlobalOpts, point: PointArgs, stability: Option<String>) -> Result<i32> {
    let p = point.params(g.snap)?;
    let verdict = classify_regularity(&p)?;
    let cell = cell_label(&p)?;
    let stability = match stability {
        Some(label) => Some(stability_order(parse_stability_label(&label)?, &p)?),
        None => None,
    };
    let rep = ClassifyReport { params: p, verdict, cell, stability };

    if g.format == Format::Json && g.out.is_none() {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        println!(
            "point:     alpha = {}, beta = {}, gamma = {}, a = {}, b = {}, k = {}",
            p.alpha, p.beta, p.gamma, p.a, p.b, p.k
        );
        println!("kind:      {}", kind_str(verdict.kind));
        println!("region:    {}", verdict.region);
        println!("cell:      {}", rep.cell);
        match (verdict.mu, verdict.delta_inf) {
            (Some(mu), Some(di)) => {
                println!("mu:        {mu}");
                println!("delta_inf: {di}   (smoothing class delta > delta_inf)");
            }
            _ => println!("mu:        -   (no resolvent decay)"),
        }
        if let Some(info) = &rep.stability {
            match info.poly_order {
                Some(order) => {
                    println!("stability: {} decay, order t^-{order} ({})", debug_lower(info.kind), info.s_region)
                }
                None => println!("stability: {} ({})", debug_lower(info.kind), info.s_region),
            }
        }
    }

    let mut opts = common_options(g);
    point.record(&mut opts);
    let mut sink = OutputSink::new(g.out.as_deref(), "classify", opts)?;
    sink.write_json(&format!("report_classify_{}.json", point_id(&p)), &rep)?;
    sink.finish()?;
    Ok(0)
}

fn debug_lower<T: std::fmt::Debug>(v: T) -> String {
    format!("{v:?}").to_ascii_lowercase()
}

/// Display a float rounded to 9 decimals with trailing noise dropped,
/// for human-facing summaries (tables keep full precision).
fn fmt_g(x: f64) -> String {
    ((x * 1e9).round() / 1e9).to_string()
}

// ---------------------------------------------------------------------------
// preset

#[derive(Serialize)]
struct PresetRow {
    value: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    a: f64,
    kind: &'static str,
    region: &'static str,
    cell: String,
    mu: Option<f64>,
    delta_inf: Option<f64>,
}

#[derive(Serialize)]
struct PresetReport {
    preset: String,
    axis: &'static str,
    a: f64,
    step: f64,
    segments: Vec<PresetSegment>,
}

#[derive(Serialize)]
struct PresetSegment {
    from: f64,
    to: f64,
    kind: &'static str,
    region: &'static str,
    mu_from: Option<f64>,
    mu_to: Option<f64>,
}

fn cmd_preset(g: &GlobalOpts, name: Option<String>, step: f64, a: Option<f64>) -> Result<i32> {
    let Some(name) = name else {
        for preset in &PRESETS {
            println!("{:22} {}", preset.name, preset.summary);
        }
        return Ok(0);
    };
    let Some(preset) = preset_by_name(&name) else {
        bail!(
            "unknown preset {name:?}; available: {}",
            PRESETS.map(|p| p.name).join(", ")
        );
    };
    if !(step > 0.0 && step <= 0.5) {
        bail!("step {step} out of range (0, 0.5]");
    }
    let a = a.unwrap_or(preset.default_a);

    let mut rows = Vec::new();
    for v in sweep_values(preset, step) {
        let p = preset_point(preset, v, a)?;
        let p = match g.snap {
            Some(eps) => p.snapped(eps),
            None => p,
        };
        let verdict = classify_regularity(&p)?;
        rows.push(PresetRow {
            value: v,
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            a: p.a,
            kind: kind_str(verdict.kind),
            region: verdict.region.as_str(),
            cell: cell_label(&p)?,
            mu: verdict.mu,
            delta_inf: verdict.delta_inf,
        });
    }

    // Collapse consecutive rows with one verdict into printed segments.
    let mut segments: Vec<PresetSegment> = Vec::new();
    for row in &rows {
        match segments.last_mut() {
            Some(seg) if seg.kind == row.kind && seg.region == row.region => {
                seg.to = row.value;
                seg.mu_to = row.mu;
            }
            _ => segments.push(PresetSegment {
                from: row.value,
                to: row.value,
                kind: row.kind,
                region: row.region,
                mu_from: row.mu,
                mu_to: row.mu,
            }),
        }
    }

    println!("{}: {} ({} points, a = {a})", preset.name, preset.summary, rows.len());
    let axis = preset.axis.as_str();
    for seg in &segments {
        let order = match (seg.mu_from, seg.mu_to) {
            (Some(f), Some(t)) if f != t => format!(", mu {} -> {}", fmt_g(f), fmt_g(t)),
            (Some(f), _) => format!(", mu = {}", fmt_g(f)),
            _ => String::new(),
        };
        let range = if seg.from == seg.to {
            format!("{axis} = {}", fmt_g(seg.from))
        } else {
            format!("{axis} in [{}, {}]", fmt_g(seg.from), fmt_g(seg.to))
        };
        println!("  {range}  {} ({}){order}", seg.kind, seg.region);
    }

    let mut opts = common_options(g);
    opts.insert("preset".into(), preset.name.to_string());
    opts.insert("step".into(), step.to_string());
    opts.insert("a".into(), a.to_string());
    let mut sink = OutputSink::new(g.out.as_deref(), "preset", opts)?;
    write_table(&mut sink, &format!("sweep_{}", preset.name), g.format, &rows)?;
    sink.write_json(
        &format!("report_{}.json", preset.name),
        &PresetReport { preset: preset.name.to_string(), axis, a, step, segments },
    )?;
    sink.finish()?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// scan

#[derive(Serialize, Clone)]
struct ScanRow {
    alpha: f64,
    beta: f64,
    kind: &'static str,
    region: &'static str,
    cell: String,
    mu: Option<f64>,
    delta_inf: Option<f64>,
}

/// A printed boundary: label plus implicit form `f(alpha, beta) = 0`.
struct BoundaryLine {
    label: String,
    f: Box<dyn Fn(f64, f64) -> f64 + Sync>,
}

impl BoundaryLine {
    fn new(label: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Sync + 'static) -> Self {
        BoundaryLine { label: label.into(), f: Box::new(f) }
    }

    /// Distance from a point to the zero set, normalized by the local
    /// gradient (central differences, so curved boundaries work too).
    fn distance(&self, al: f64, be: f64) -> f64 {
        let v = (self.f)(al, be);
        if !v.is_finite() {
            return f64::INFINITY;
        }
        let h = 1e-6;
        let da = ((self.f)(al + h, be) - (self.f)(al - h, be)) / (2.0 * h);
        let db = ((self.f)(al, be + h) - (self.f)(al, be - h)) / (2.0 * h);
        let grad = da.hypot(db);
        if grad < 1e-12 {
            return f64::INFINITY;
        }
        v.abs() / grad
    }
}

/// The printed verdict/partition boundary lines for one slice.
fn boundary_lines(gamma: f64, same_speed: bool) -> Vec<BoundaryLine> {
    let ga = gamma;
    let mut lines = Vec::new();
    if same_speed {
        lines.push(BoundaryLine::new("beta = alpha", |al, be| be - al));
        lines.push(BoundaryLine::new("alpha = 1/2", |al, _| al - 0.5));
        lines.push(BoundaryLine::new("beta = 1/2", |_, be| be - 0.5));
        lines.push(BoundaryLine::new("4 alpha - 2 beta = 1", |al, be| 4.0 * al - 2.0 * be - 1.0));
        lines.push(BoundaryLine::new("2 alpha - beta = 0", |al, be| 2.0 * al - be));
        lines.push(BoundaryLine::new("2 alpha - beta = 1/2", |al, be| 2.0 * al - be - 0.5));
        lines.push(BoundaryLine::new("2 alpha - beta = 1", |al, be| 2.0 * al - be - 1.0));
        return lines;
    }
    lines.push(BoundaryLine::new("2 alpha - beta = 0", |al, be| 2.0 * al - be));
    lines.push(BoundaryLine::new("2 alpha - beta = gamma", move |al, be| 2.0 * al - be - ga));
    let cross = (2.0 - ga).max(ga);
    lines.push(BoundaryLine::new(
        format!("2 alpha + beta = {}", if ga >= 1.0 { "gamma" } else { "2 - gamma" }),
        move |al, be| 2.0 * al + be - cross,
    ));
    let alpha_split = ga.max(1.0) / 2.0;
    lines.push(BoundaryLine::new(
        if ga > 1.0 { "alpha = gamma/2" } else { "alpha = 1/2" },
        move |al, _| al - alpha_split,
    ));
    lines.push(BoundaryLine::new("beta = 1/2", |_, be| be - 0.5));
    let beta_split = if ga >= 1.0 { ga / 2.0 } else { 1.0 - ga / 2.0 };
    if (beta_split - 0.5).abs() > 1e-12 {
        lines.push(BoundaryLine::new(
            if ga >= 1.0 { "beta = gamma/2" } else { "beta = 1 - gamma/2" },
            move |_, be| be - beta_split,
        ));
    }
    lines.push(BoundaryLine::new("beta = alpha", |al, be| be - al));
    if (ga - 1.0).abs() > 1e-12 {
        lines.push(BoundaryLine::new(
            "2 alpha - 2 beta = gamma - 1",
            move |al, be| 2.0 * al - 2.0 * be - ga + 1.0,
        ));
    }
    lines.push(BoundaryLine::new(
        "4 alpha - 2 beta = gamma",
        move |al, be| 4.0 * al - 2.0 * be - ga,
    ));
    if ga > 1.0 {
        // Curved upper boundary of the pure-damping Gevrey pocket.
        lines.push(BoundaryLine::new(
            "beta (4 alpha - gamma - 1) = 4 alpha^2 - 2 alpha gamma",
            move |al, be| {
                if 4.0 * al - ga - 1.0 <= 0.05 {
                    f64::INFINITY
                } else {
                    be * (4.0 * al - ga - 1.0) - (4.0 * al * al - 2.0 * al * ga)
                }
            },
        ));
    }
    lines
}

#[derive(Serialize)]
struct LineSummary {
    label: String,
    edges: usize,
    max_offset: f64,
}

#[derive(Serialize)]
struct ScanReport {
    slice: String,
    h: f64,
    a: f64,
    points: usize,
    analytic: usize,
    gevrey: usize,
    not_differentiable: usize,
    lines: Vec<LineSummary>,
    gap_edges: usize,
    unmatched_edges: usize,
    unmatched_samples: Vec<(f64, f64)>,
}

fn axis_values(max: f64, h: f64) -> Vec<f64> {
    let mut vals = Vec::new();
    let mut i = 0u64;
    loop {
        let v = h * i as f64;
        if v > max + 1e-12 {
            break;
        }
        vals.push(v.min(max));
        i += 1;
    }
    if (vals.last().copied().unwrap_or(f64::NAN) - max).abs() > 1e-12 {
        vals.push(max);
    }
    vals
}

fn cmd_scan(
    g: &GlobalOpts,
    gamma: Option<f64>,
    h: f64,
    a: Option<f64>,
    same_speed: bool,
) -> Result<i32> {
    if !(SCAN_H_MIN..=SCAN_H_MAX).contains(&h) {
        bail!("lattice spacing h = {h} out of range [{SCAN_H_MIN}, {SCAN_H_MAX}]");
    }
    let gamma = match (gamma, same_speed) {
        (Some(ga), true) if (ga - 1.0).abs() > 1e-12 => {
            bail!("--same-speed requires gamma = 1, got {ga}")
        }
        (ga, true) => {
            debug_assert!(ga.is_none() || ga == Some(1.0));
            1.0
        }
        (Some(ga), false) => ga,
        (None, false) => unreachable!("clap enforces gamma unless --same-speed"),
    };
    let a = match (a, same_speed) {
        (Some(av), true) if (av - 1.0).abs() > 1e-12 => {
            bail!("--same-speed requires a = 1, got {av}")
        }
        (av, true) => {
            let _ = av;
            1.0
        }
        (Some(av), false) => av,
        (None, false) => {
            // Keep a genuinely different-speed slice even at gamma = 1.
            2.0
        }
    };
    if !same_speed && (gamma - 1.0).abs() < 1e-12 && (a - 1.0).abs() < 1e-12 {
        bail!("a = gamma = 1 is the same-speed case; pass --same-speed");
    }

    let alpha_max = if same_speed { 1.0 } else { (gamma + 1.0) / 2.0 };
    let alphas = axis_values(alpha_max, h);
    let betas = axis_values(1.0, h);

    let columns: Vec<Vec<ScanRow>> = alphas
        .par_iter()
        .map(|&al| {
            betas
                .iter()
                .map(|&be| {
                    let p = Params::new(al, be, gamma, a)?;
                    let verdict = classify_regularity(&p)?;
                    Ok(ScanRow {
                        alpha: al,
                        beta: be,
                        kind: kind_str(verdict.kind),
                        region: verdict.region.as_str(),
                        cell: cell_label(&p)?,
                        mu: verdict.mu,
                        delta_inf: verdict.delta_inf,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    // Change edges between lattice neighbours, matched to printed lines.
    let lines = boundary_lines(gamma, same_speed);
    let mut line_edges = vec![(0usize, 0.0f64); lines.len()];
    let mut gap_edges = 0usize;
    let mut unmatched = Vec::new();
    let mut edge = |row1: &ScanRow, row2: &ScanRow| {
        if row1.region == row2.region && row1.cell == row2.cell {
            return;
        }
        if row1.cell == "-" || row2.cell == "-" {
            gap_edges += 1;
            return;
        }
        let (ma, mb) = ((row1.alpha + row2.alpha) / 2.0, (row1.beta + row2.beta) / 2.0);
        let best = lines
            .iter()
            .enumerate()
            .map(|(i, l)| (i, l.distance(ma, mb)))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((i, d)) if d <= EDGE_MATCH_FACTOR * h => {
                line_edges[i].0 += 1;
                line_edges[i].1 = line_edges[i].1.max(d);
            }
            _ => unmatched.push((ma, mb)),
        }
    };
    for (ci, col) in columns.iter().enumerate() {
        for (ri, row) in col.iter().enumerate() {
            if ri + 1 < col.len() {
                edge(row, &col[ri + 1]);
            }
            if ci + 1 < columns.len() {
                edge(row, &columns[ci + 1][ri]);
            }
        }
    }

    let rows: Vec<ScanRow> = columns.into_iter().flatten().collect();
    let count = |k: &str| rows.iter().filter(|r| r.kind == k).count();
    let slice = if same_speed { "same-speed".to_string() } else { gamma.to_string() };
    let report = ScanReport {
        slice: slice.clone(),
        h,
        a,
        points: rows.len(),
        analytic: count("Analytic"),
        gevrey: count("Gevrey"),
        not_differentiable: count("NotDifferentiable"),
        lines: lines
            .iter()
            .zip(&line_edges)
            .filter(|(_, (n, _))| *n > 0)
            .map(|(l, &(n, d))| LineSummary { label: l.label.clone(), edges: n, max_offset: d })
            .collect(),
        gap_edges,
        unmatched_edges: unmatched.len(),
        unmatched_samples: unmatched.iter().take(8).copied().collect(),
    };

    println!(
        "scanned {} points at h = {h} (slice {slice}, a = {a}): Analytic {}, Gevrey {}, NotDifferentiable {}",
        report.points, report.analytic, report.gevrey, report.not_differentiable
    );
    println!("boundary summary:");
    for l in &report.lines {
        println!("  {:<48} {:>6} edges, max offset {:.2e}", l.label, l.edges, l.max_offset);
    }
    if report.gap_edges > 0 {
        println!("  (uncovered-edge cells touched by {} edges)", report.gap_edges);
    }
    if report.unmatched_edges > 0 {
        println!(
            "  UNMATCHED: {} change edges off every printed line, first at {:?}",
            report.unmatched_edges, report.unmatched_samples[0]
        );
    } else {
        println!("  all change edges lie on printed lines");
    }

    let mut opts = common_options(g);
    opts.insert("gamma".into(), gamma.to_string());
    opts.insert("h".into(), h.to_string());
    opts.insert("a".into(), a.to_string());
    opts.insert("same_speed".into(), same_speed.to_string());
    let mut sink = OutputSink::new(g.out.as_deref(), "scan", opts)?;
    write_table(&mut sink, &format!("regionmap_{slice}"), g.format, &rows)?;
    sink.write_json(&format!("report_scan_{slice}.json"), &report)?;
    sink.finish()?;
    Ok(if report.unmatched_edges > 0 { 1 } else { 0 })
}

// ---------------------------------------------------------------------------
// verify

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    status: &'static str,
    measured: Option<f64>,
    expected: Option<f64>,
    detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, measured: Option<f64>, expected: Option<f64>, detail: String) -> Self {
        CheckResult { name, status: "PASS", measured, expected, detail }
    }

    fn fail(name: &'static str, measured: Option<f64>, expected: Option<f64>, detail: String) -> Self {
        CheckResult { name, status: "FAIL", measured, expected, detail }
    }

    fn warn(name: &'static str, detail: String) -> Self {
        CheckResult { name, status: "WARN", measured: None, expected: None, detail }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    params: Params,
    verdict: RegularityVerdict,
    cell: String,
    checks: Vec<CheckResult>,
    status: &'static str,
}

/// Expected exponent for agreement checks: 1 for analytic, mu for Gevrey,
/// none when not differentiable.
fn expected_exponent(verdict: &RegularityVerdict) -> Option<f64> {
    match verdict.kind {
        RegularityKind::Analytic => Some(1.0),
        RegularityKind::Gevrey => verdict.mu,
        RegularityKind::NotDifferentiable => None,
    }
}

/// Is a core error an inconclusive-measurement condition (reported as a
/// warning) rather than a hard fault?
fn is_soft(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::PoorFit(_)
            | CoreError::InconclusiveFit(_)
            | CoreError::InsufficientData { .. }
            | CoreError::DepthExhausted(_)
            | CoreError::DegenerateBalance(_)
            | CoreError::NoConvergence { .. }
    )
}

fn check_spectrum(p: &Params, verdict: &RegularityVerdict) -> Result<CheckResult> {
    const NAME: &str = "spectrum";
    let sweep = sweep_spectrum(p, &MuGrid::standard())?;
    let margin = contraction_margin(&sweep);
    let est = match estimate_gevrey(&sweep, 0.5) {
        Ok(est) => est,
        Err(e) if is_soft(&e) => return Ok(CheckResult::warn(NAME, format!("{e}"))),
        Err(e) => return Err(e.into()),
    };
    if margin > 1e-8 {
        return Ok(CheckResult::fail(
            NAME,
            Some(margin),
            Some(0.0),
            format!("spectral abscissa {margin:.2e} is positive: not a contraction"),
        ));
    }
    let expected = expected_exponent(verdict);
    let result = match verdict.kind {
        RegularityKind::Analytic => {
            let ok = !est.not_differentiable && est.mu_hat >= SPECTRUM_ANALYTIC_MIN;
            let detail = format!(
                "tail estimate mu_hat = {:.4}, analytic floor {SPECTRUM_ANALYTIC_MIN}",
                est.mu_hat
            );
            if ok {
                CheckResult::pass(NAME, Some(est.mu_hat), expected, detail)
            } else {
                CheckResult::fail(NAME, Some(est.mu_hat), expected, detail)
            }
        }
        RegularityKind::Gevrey => {
            let mu = verdict.mu.expect("gevrey verdict carries mu");
            let ok = !est.not_differentiable && (est.mu_hat - mu).abs() <= SPECTRUM_REL_TOL * mu;
            let detail = format!(
                "tail estimate mu_hat = {:.4} vs mu = {mu} (rel tol {SPECTRUM_REL_TOL})",
                est.mu_hat
            );
            if ok {
                CheckResult::pass(NAME, Some(est.mu_hat), expected, detail)
            } else {
                CheckResult::fail(NAME, Some(est.mu_hat), expected, detail)
            }
        }
        RegularityKind::NotDifferentiable => {
            let detail = format!(
                "not_differentiable flag = {}, mu_hat = {:.4}",
                est.not_differentiable, est.mu_hat
            );
            if est.not_differentiable {
                CheckResult::pass(NAME, Some(est.mu_hat), None, detail)
            } else {
                CheckResult::fail(NAME, Some(est.mu_hat), None, detail)
            }
        }
    };
    Ok(result)
}

fn check_resolvent(p: &Params) -> Result<CheckResult> {
    const NAME: &str = "resolvent";
    let curve = match resolvent_curve_on(p, &default_lambda_grid()) {
        Ok(c) => c,
        Err(e) if is_soft(&e) => return Ok(CheckResult::warn(NAME, format!("{e}"))),
        Err(e) => return Err(e.into()),
    };
    match criterion_check(p, &curve) {
        Ok(rep) => {
            let expected = expected_exponent(&rep.expected);
            let result = if rep.pass {
                CheckResult::pass(NAME, Some(rep.fitted_m), expected, rep.detail)
            } else {
                CheckResult::fail(NAME, Some(rep.fitted_m), expected, rep.detail)
            };
            Ok(result)
        }
        Err(e) if is_soft(&e) => Ok(CheckResult::warn(NAME, format!("{e}"))),
        Err(e) => Err(e.into()),
    }
}

/// Decay-over-frequency ratio law read off the closed-form expansions:
/// the smoothing exponent is the worst `real_power / leading_power` over
/// oscillatory branches, clamped to analytic grade at 1.
fn ratio_law(expansions: &[BranchExpansion]) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for e in expansions {
        let Some(&(lead, s)) = e.terms.first() else { continue };
        let oscillatory = s > 0.0 && lead.im.abs() > 1e-9 * lead.norm();
        if !oscillatory {
            continue;
        }
        let ratio = e.real_power.map(|r| r / s).unwrap_or(0.0);
        worst = Some(worst.map_or(ratio, |w: f64| w.min(ratio)));
    }
    worst.map(|w| w.min(1.0))
}

fn check_asymptotics(p: &Params, verdict: &RegularityVerdict, terms: usize) -> Result<CheckResult> {
    const NAME: &str = "asymptotics";
    let expansions = match expand_roots(p, terms) {
        Ok(ex) => ex,
        Err(e) if is_soft(&e) => return Ok(CheckResult::warn(NAME, format!("{e}"))),
        Err(e) => return Err(e.into()),
    };
    // No oscillatory branch: the spectrum imposes no smoothing constraint.
    let mu_pred = ratio_law(&expansions).unwrap_or(1.0);
    let expected = expected_exponent(verdict);
    let (ok, detail) = match verdict.kind {
        RegularityKind::Analytic => (
            mu_pred >= 1.0 - ASYMPTOTICS_REL_TOL,
            format!("ratio law min r/s = {mu_pred} (analytic grade needs 1)"),
        ),
        RegularityKind::Gevrey => {
            let mu = verdict.mu.expect("gevrey verdict carries mu");
            (
                (mu_pred - mu).abs() <= ASYMPTOTICS_REL_TOL * mu,
                format!("ratio law min r/s = {mu_pred} vs mu = {mu}"),
            )
        }
        RegularityKind::NotDifferentiable => (
            mu_pred <= ND_RE_EXPONENT,
            format!("ratio law min r/s = {mu_pred} (expected <= {ND_RE_EXPONENT})"),
        ),
    };
    Ok(if ok {
        CheckResult::pass(NAME, Some(mu_pred), expected, detail)
    } else {
        CheckResult::fail(NAME, Some(mu_pred), expected, detail)
    })
}

fn check_interpolation(seed: u64) -> Result<CheckResult> {
    const NAME: &str = "interpolation";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_slack = f64::INFINITY;
    let mut draws = 0usize;
    for model in builtin_models() {
        for _ in 0..INTERPOLATION_DRAWS {
            let dim = rng.gen_range(1..=12);
            let x: Vec<f64> =
                (0..dim).map(|_| 10f64.powf(rng.gen_range(-3.0..3.0))).collect();
            let r = rng.gen_range(0.0..2.0);
            let q = r + rng.gen_range(0.0..4.0);
            let pp = r + (q - r) * rng.gen_range(0.0..=1.0);
            let rep = interpolation_check(model.as_ref(), &x, pp, q, r)?;
            worst_slack = worst_slack.min(rep.slack);
            draws += 1;
            if !rep.holds {
                return Ok(CheckResult::fail(
                    NAME,
                    Some(rep.slack),
                    Some(1.0),
                    format!(
                        "moment interpolation violated on {} (p = {pp}, q = {q}, r = {r})",
                        model.name()
                    ),
                ));
            }
        }
    }
    Ok(CheckResult::pass(
        NAME,
        Some(worst_slack),
        Some(1.0),
        format!("worst slack {worst_slack:.3e} over {draws} draws"),
    ))
}

fn cmd_verify(g: &GlobalOpts, point: PointArgs, mode: VerifyMode) -> Result<i32> {
    let p = point.params(g.snap)?;
    let verdict = classify_regularity(&p)?;
    let cell = cell_label(&p)?;

    let mut checks = Vec::new();
    if mode.includes(VerifyMode::Spectrum) {
        checks.push(check_spectrum(&p, &verdict)?);
    }
    if mode.includes(VerifyMode::Resolvent) {
        checks.push(check_resolvent(&p)?);
    }
    if mode.includes(VerifyMode::Asymptotics) {
        checks.push(check_asymptotics(&p, &verdict, 48)?);
    }
    if mode.includes(VerifyMode::Interpolation) {
        checks.push(check_interpolation(g.seed)?);
    }

    let any_fail = checks.iter().any(|c| c.status == "FAIL");
    let any_warn = checks.iter().any(|c| c.status == "WARN");
    let status = if any_fail {
        "FAIL"
    } else if any_warn {
        "WARN"
    } else {
        "PASS"
    };

    println!(
        "point: alpha = {}, beta = {}, gamma = {}, a = {}, b = {}, k = {}",
        p.alpha, p.beta, p.gamma, p.a, p.b, p.k
    );
    let order = match (verdict.mu, verdict.delta_inf) {
        (Some(mu), Some(di)) => format!(", mu = {mu}, delta_inf = {di}"),
        _ => String::new(),
    };
    println!("verdict: {} ({}){order}, cell {cell}", kind_str(verdict.kind), verdict.region);
    for c in &checks {
        println!("  {:<14} {:<4} {}", c.name, c.status, c.detail);
    }
    println!("verify: {status}");

    let mut opts = common_options(g);
    point.record(&mut opts);
    opts.insert("mode".into(), mode.as_str().to_string());
    let mut sink = OutputSink::new(g.out.as_deref(), "verify", opts)?;
    sink.write_json(
        &format!("report_verify_{}.json", point_id(&p)),
        &VerifyReport { params: p, verdict, cell, checks, status },
    )?;
    sink.finish()?;
    Ok(if any_fail { 1 } else { 0 })
}

// ---------------------------------------------------------------------------
// spectrum

#[derive(Serialize)]
struct SpectrumRow {
    mu: f64,
    re_1: f64,
    im_1: f64,
    re_2: f64,
    im_2: f64,
    re_3: f64,
    im_3: f64,
    re_4: f64,
    im_4: f64,
}

#[derive(Serialize)]
struct SpectrumReport {
    params: Params,
    contraction_margin: f64,
    estimate: Option<gevrey_core::sweep::GevreyEstimate>,
    estimate_error: Option<String>,
    warnings: Vec<gevrey_core::sweep::SweepWarning>,
}

fn cmd_spectrum(
    g: &GlobalOpts,
    point: PointArgs,
    mu_min: f64,
    mu_max: f64,
    points: usize,
) -> Result<i32> {
    let p = point.params(g.snap)?;
    let grid = MuGrid::geometric(mu_min, mu_max, points).map_err(anyhow::Error::from)?;
    let sweep = sweep_spectrum(&p, &grid).map_err(anyhow::Error::from)?;
    let margin = contraction_margin(&sweep);
    let estimate = estimate_gevrey(&sweep, 0.5);

    let rows: Vec<SpectrumRow> = sweep
        .mu
        .iter()
        .enumerate()
        .map(|(i, &mu)| SpectrumRow {
            mu,
            re_1: sweep.branches[0][i].re,
            im_1: sweep.branches[0][i].im,
            re_2: sweep.branches[1][i].re,
            im_2: sweep.branches[1][i].im,
            re_3: sweep.branches[2][i].re,
            im_3: sweep.branches[2][i].im,
            re_4: sweep.branches[3][i].re,
            im_4: sweep.branches[3][i].im,
        })
        .collect();

    println!(
        "swept {} frequencies in [{mu_min:.3e}, {mu_max:.3e}]; spectral abscissa {margin:.3e}",
        rows.len()
    );
    match &estimate {
        Ok(est) => {
            if est.overdamped {
                println!("no oscillatory branch: overdamped point, no smoothing constraint");
            } else if est.not_differentiable {
                println!("tail estimate: not differentiable (a branch loses damping)");
            } else {
                println!("tail estimate: mu_hat = {:.6}", est.mu_hat);
            }
            for b in &est.branches {
                let ratio = b.ratio.map(|r| format!("{r:.6}")).unwrap_or_else(|| "-".into());
                println!(
                    "  branch {}: |Re| exponent {}, |Im| exponent {}, ratio {}",
                    b.branch,
                    b.re_fit.as_ref().map(|f| format!("{:.4}", f.exponent)).unwrap_or_else(|| "-".into()),
                    b.im_fit.as_ref().map(|f| format!("{:.4}", f.exponent)).unwrap_or_else(|| "-".into()),
                    ratio
                );
            }
        }
        Err(e) => println!("tail estimate unavailable: {e}"),
    }
    if !sweep.warnings.is_empty() {
        println!("warnings: {}", sweep.warnings.len());
    }

    let mut opts = common_options(g);
    point.record(&mut opts);
    opts.insert("mu_min".into(), mu_min.to_string());
    opts.insert("mu_max".into(), mu_max.to_string());
    opts.insert("points".into(), points.to_string());
    let mut sink = OutputSink::new(g.out.as_deref(), "spectrum", opts)?;
    let id = point_id(&p);
    write_table(&mut sink, &format!("sweep_spectrum_{id}"), g.format, &rows)?;
    let (estimate, estimate_error) = match estimate {
        Ok(est) => (Some(est), None),
        Err(e) => (None, Some(e.to_string())),
    };
    sink.write_json(
        &format!("report_spectrum_{id}.json"),
        &SpectrumReport {
            params: p,
            contraction_margin: margin,
            estimate,
            estimate_error,
            warnings: sweep.warnings.clone(),
        },
    )?;
    sink.finish()?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// resolvent

#[derive(Serialize)]
struct ResolventRow {
    lambda: f64,
    norm: f64,
}

#[derive(Serialize)]
struct ModalRow {
    lambda: f64,
    discrete: f64,
    refined: f64,
    argmax: usize,
    truncated: bool,
}

#[derive(Serialize)]
struct ResolventReport {
    params: Params,
    curve: gevrey_core::ResolventCurve,
    model: Option<String>,
    modal: Option<Vec<ModalRow>>,
}

fn geometric_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min > 0.0 && max > min) {
        bail!("bad grid range [{min}, {max}]");
    }
    if n < 2 {
        bail!("grid needs at least 2 points, got {n}");
    }
    let step = (max / min).powf(1.0 / (n - 1) as f64);
    Ok((0..n).map(|i| min * step.powi(i as i32)).collect())
}

fn cmd_resolvent(
    g: &GlobalOpts,
    point: PointArgs,
    lambda_min: f64,
    lambda_max: f64,
    points: usize,
    model: Option<String>,
    n_max: usize,
) -> Result<i32> {
    let p = point.params(g.snap)?;
    let lambdas = geometric_grid(lambda_min, lambda_max, points)?;
    let curve = resolvent_curve_on(&p, &lambdas).map_err(anyhow::Error::from)?;
    let rows: Vec<ResolventRow> = curve
        .lambda
        .iter()
        .zip(&curve.values)
        .map(|(&lambda, &norm)| ResolventRow { lambda, norm })
        .collect();

    let modal = match &model {
        Some(spec) => {
            let m = model_by_name(spec).map_err(anyhow::Error::from)?;
            let mut out = Vec::with_capacity(lambdas.len());
            for &lambda in &lambdas {
                let s = resolvent_norm(&p, lambda, m.as_ref(), n_max)
                    .map_err(anyhow::Error::from)?;
                out.push(ModalRow {
                    lambda,
                    discrete: s.discrete,
                    refined: s.refined,
                    argmax: s.argmax,
                    truncated: s.truncated,
                });
            }
            Some(out)
        }
        None => None,
    };

    println!(
        "resolvent norm on {} frequencies in [{lambda_min:.3e}, {lambda_max:.3e}]",
        rows.len()
    );
    println!(
        "tail fit: norm ~ lambda^-m with m = {:.6} (r^2 = {:.6}); decay exponent vs classifier:",
        -curve.fit.exponent,
        curve.fit.r_squared
    );
    let verdict = classify_regularity(&p)?;
    match verdict.mu {
        Some(mu) => println!("  classified mu = {mu} ({} {})", kind_str(verdict.kind), verdict.region),
        None => println!("  classified {} ({})", kind_str(verdict.kind), verdict.region),
    }
    if curve.boundary_fraction > 0.0 {
        println!(
            "note: frequency-search boundary hit on {:.0}% of points",
            curve.boundary_fraction * 100.0
        );
    }
    if let Some(modal) = &modal {
        let truncated = modal.iter().filter(|r| r.truncated).count();
        if truncated > 0 {
            println!("note: modal supremum truncated at n_max = {n_max} on {truncated} points");
        }
    }

    let mut opts = common_options(g);
    point.record(&mut opts);
    opts.insert("lambda_min".into(), lambda_min.to_string());
    opts.insert("lambda_max".into(), lambda_max.to_string());
    opts.insert("points".into(), points.to_string());
    if let Some(m) = &model {
        opts.insert("model".into(), m.clone());
        opts.insert("n_max".into(), n_max.to_string());
    }
    let mut sink = OutputSink::new(g.out.as_deref(), "resolvent", opts)?;
    let id = point_id(&p);
    write_table(&mut sink, &format!("sweep_resolvent_{id}"), g.format, &rows)?;
    if let Some(modal_rows) = &modal {
        write_table(&mut sink, &format!("sweep_resolvent_modal_{id}"), g.format, modal_rows)?;
    }
    sink.write_json(
        &format!("report_resolvent_{id}.json"),
        &ResolventReport { params: p, curve, model, modal },
    )?;
    sink.finish()?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// asymptotics

#[derive(Serialize)]
struct AsymptoticsReport {
    params: Params,
    branches: Vec<BranchExpansion>,
    ratio_law_mu: Option<f64>,
    verdict: RegularityVerdict,
}

fn cmd_asymptotics(g: &GlobalOpts, point: PointArgs, terms: usize) -> Result<i32> {
    let p = point.params(g.snap)?;
    let branches = expand_roots(&p, terms).map_err(anyhow::Error::from)?;
    let mu_pred = ratio_law(&branches);
    let verdict = classify_regularity(&p)?;

    for (i, e) in branches.iter().enumerate() {
        let head: Vec<String> = e
            .terms
            .iter()
            .take(3)
            .map(|(c, q)| format!("({:+.6e} {:+.6e}i) mu^{q}", c.re, c.im))
            .collect();
        println!("branch {i}: {}{}", head.join(" + "), if e.terms.len() > 3 { " + ..." } else { "" });
        match (e.real_power, e.real_coeff) {
            (Some(r), Some(c)) => {
                println!("  damping term: Re coefficient {:+.6e} at mu^{r}", c.re)
            }
            _ => println!("  no damping term within {terms} terms (exact: {})", e.exact),
        }
    }
    match mu_pred {
        Some(mu) => println!("ratio law: min real/leading exponent over oscillatory branches = {mu}"),
        None => println!("ratio law: no oscillatory branch (overdamped point)"),
    }
    match verdict.mu {
        Some(mu) => println!("classifier: mu = {mu} ({} {})", kind_str(verdict.kind), verdict.region),
        None => println!("classifier: {} ({})", kind_str(verdict.kind), verdict.region),
    }

    let mut opts = common_options(g);
    point.record(&mut opts);
    opts.insert("terms".into(), terms.to_string());
    let mut sink = OutputSink::new(g.out.as_deref(), "asymptotics", opts)?;
    sink.write_json(
        &format!("report_asymptotics_{}.json", point_id(&p)),
        &AsymptoticsReport { params: p, branches, ratio_law_mu: mu_pred, verdict },
    )?;
    sink.finish()?;
    Ok(0)
}

// ---------------------------------------------------------------------------
