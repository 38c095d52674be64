use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use memwin_core::attractor::{
    find_fixed_point, linspace, potential, section_slope_at_half, sweep_section, sweep_xa,
    write_sweep_csv, DEFAULT_ROOT_TOL,
};
use memwin_core::sim::{detect_limit_cycle, integrate, DEFAULT_CYCLE_EPS};
use memwin_core::windows::{classify_window, DEFAULT_CLASSIFY_GRID, DEFAULT_CLASSIFY_TOL};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::manifest::RunManifest;
use crate::params::{
    config, resolve_drive, resolve_model, DriveArgs, ModelArgs, SimArgs, WindowArgs,
};

#[derive(Args, Debug)]
pub struct Common {
    /// Where to write the run manifest.
    #[arg(long, value_name = "FILE", global = true)]
    pub manifest: Option<PathBuf>,
    /// Reserved; every algorithm here is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    drive: DriveArgs,
    #[command(flatten)]
    sim: SimArgs,
    /// Output CSV; each initial state gets a `_x0_<value>` suffix.
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct AttractorArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    drive: DriveArgs,
    #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Window exponents, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    p: Vec<u32>,
    /// Range of a+ = h(I+) tau+ as LO,HI.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "0.1,10"
    )]
    a_plus_range: Vec<f64>,
    /// Range of a- = h(I-) tau- as LO,HI.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "-10,-0.1"
    )]
    a_minus_range: Vec<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Sweep the line a- = a+ - offset instead of the full grid.
    #[arg(long)]
    section: bool,
    #[arg(long, default_value_t = 10.0)]
    offset: f64,
    #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
    tol: f64,
    /// Output CSV; several exponents get a `_p<p>` suffix each.
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct PotentialArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    drive: DriveArgs,
    /// Grid points on [0, 1].
    #[arg(long, default_value_t = 1001)]
    grid: usize,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long, default_value_t = DEFAULT_CLASSIFY_GRID)]
    grid: usize,
    #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
    tol: f64,
}

/// `out.csv` + `_x0_0.1` -> `out_x0_0.1.csv`.
pub fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    f(&mut out)
        .and_then(|_| out.flush())
        .with_context(|| format!("writing {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct RunSummary {
    x0: f64,
    output: PathBuf,
    final_x: f64,
    final_xbar: Option<f64>,
    periodic: Option<bool>,
    cycle_residual: Option<f64>,
}

pub fn simulate(a: &SimulateArgs, common: &Common) -> Result<()> {
    let start = Instant::now();
    let mut inputs = Vec::new();
    let model = resolve_model(&a.model, &mut inputs)?;
    let drive = resolve_drive(&a.drive, &model, &mut inputs)?;
    let configs = a.sim.configs()?;
    let mut manifest = RunManifest::new(
        "simulate",
        json!({
            "model": model,
            "drive": drive,
            "x0": a.sim.x0,
            "periods": a.sim.periods,
            "steps_per_segment": a.sim.steps_per_segment,
            "dt": a.sim.dt,
            "record_stride": a.sim.record_stride,
            "clamp_tol": configs[0].clamp_tol,
        }),
        inputs,
        common.seed,
    );

    let summaries: Vec<RunSummary> = configs
        .par_iter()
        .map(|c| {
            let tr = integrate(&model, &drive, c)?;
            let path = suffixed(&a.output, &format!("_x0_{}", c.x0));
            write_file(&path, |out| tr.write_csv(out))?;
            let cycle = if c.periods >= 2 {
                Some(detect_limit_cycle(&tr, tr.period, DEFAULT_CYCLE_EPS)?)
            } else {
                None
            };
            let last_avg = tr
                .averaged
                .len()
                .checked_sub(1)
                .and_then(|k| tr.averaged_at(k));
            Ok(RunSummary {
                x0: c.x0,
                output: path,
                final_x: *tr.states.last().expect("trajectory has a first sample"),
                final_xbar: last_avg,
                periodic: cycle.map(|l| l.periodic),
                cycle_residual: cycle.map(|l| l.residual),
            })
        })
        .collect::<Result<_>>()?;

    print_json(&summaries)?;
    let outputs = summaries.iter().map(|s| s.output.clone()).collect();
    manifest = manifest.finish(outputs, start.elapsed());
    manifest.emit(common.manifest.as_deref(), Some(&a.output))
}

pub fn attractor(a: &AttractorArgs, common: &Common) -> Result<()> {
    let start = Instant::now();
    let mut inputs = Vec::new();
    let model = resolve_model(&a.model, &mut inputs)?;
    let drive = resolve_drive(&a.drive, &model, &mut inputs)?;
    let report = find_fixed_point(&model, &drive, a.tol)?;
    print_json(&report)?;
    RunManifest::new(
        "attractor",
        json!({ "model": model, "drive": drive, "tol": a.tol }),
        inputs,
        common.seed,
    )
    .finish(Vec::new(), start.elapsed())
    .emit(common.manifest.as_deref(), None)
}

fn checked_range(param: &'static str, r: &[f64]) -> Result<(f64, f64)> {
    let &[lo, hi] = r else {
        return Err(config(
            param,
            format!("expected LO,HI, got {} values", r.len()),
        ));
    };
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(config(
            param,
            format!("bounds must be finite, got {lo},{hi}"),
        ));
    }
    if lo > hi {
        return Err(config(param, format!("inverted range {lo},{hi}")));
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct SectionSummary {
    p: u32,
    output: PathBuf,
    crossing_a_plus: f64,
    slope_at_half: f64,
}

pub fn sweep(a: &SweepArgs, common: &Common) -> Result<()> {
    let start = Instant::now();
    let (ap_lo, ap_hi) = checked_range("a-plus-range", &a.a_plus_range)?;
    let (am_lo, am_hi) = checked_range("a-minus-range", &a.a_minus_range)?;
    if a.n == 0 {
        return Err(config("n", "need at least one grid point"));
    }
    if a.p.is_empty() {
        return Err(config("p", "need at least one exponent"));
    }
    if a.section && !(a.offset > 0.0 && a.offset.is_finite()) {
        return Err(config(
            "offset",
            format!("must be finite and > 0, got {}", a.offset),
        ));
    }
    let a_plus = linspace(ap_lo, ap_hi, a.n);
    let a_minus = linspace(am_lo, am_hi, a.n);

    let mut outputs = Vec::new();
    let mut sections = Vec::new();
    for &p in &a.p {
        let path = if a.p.len() > 1 {
            suffixed(&a.output, &format!("_p{p}"))
        } else {
            a.output.clone()
        };
        let cells = if a.section {
            sweep_section(&a_plus, a.offset, p, a.tol)?
        } else {
            sweep_xa(&a_plus, &a_minus, p, a.tol)?
        };
        write_file(&path, |out| write_sweep_csv(&cells, out))?;
        if a.section {
            let (crossing_a_plus, slope_at_half) = section_slope_at_half(p, a.offset)?;
            sections.push(SectionSummary {
                p,
                output: path.clone(),
                crossing_a_plus,
                slope_at_half,
            });
        }
        outputs.push(path);
    }
    if a.section {
        print_json(&sections)?;
    }

    let mut params = json!({
        "p": a.p,
        "a_plus_range": [ap_lo, ap_hi],
        "n": a.n,
        "section": a.section,
        "tol": a.tol,
    });
    if a.section {
        params["offset"] = json!(a.offset);
    } else {
        params["a_minus_range"] = json!([am_lo, am_hi]);
    }
    RunManifest::new("sweep", params, Vec::new(), common.seed)
        .finish(outputs, start.elapsed())
        .emit(common.manifest.as_deref(), Some(&a.output))
}

pub fn potential_cmd(a: &PotentialArgs, common: &Common) -> Result<()> {
    let start = Instant::now();
    let mut inputs = Vec::new();
    let model = resolve_model(&a.model, &mut inputs)?;
    let drive = resolve_drive(&a.drive, &model, &mut inputs)?;
    let curve = potential(&model, &drive, a.grid)?;
    write_file(&a.output, |out| curve.write_csv(out))?;
    RunManifest::new(
        "potential",
        json!({ "model": model, "drive": drive, "grid": a.grid }),
        inputs,
        common.seed,
    )
    .finish(vec![a.output.clone()], start.elapsed())
    .emit(common.manifest.as_deref(), Some(&a.output))
}

pub fn classify(a: &ClassifyArgs, common: &Common) -> Result<()> {
    let start = Instant::now();
    let window = a.window.resolve()?;
    let class = classify_window(&window, a.grid, a.tol)?;
    print_json(&class)?;
    RunManifest::new(
        "classify",
        json!({ "window": window, "grid": a.grid, "tol": a.tol }),
        Vec::new(),
        common.seed,
    )
    .finish(Vec::new(), start.elapsed())
    .emit(common.manifest.as_deref(), None)
}
