//! Flag groups shared by the subcommands and their resolution into core types.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::{Args, ValueEnum};
use memwin_core::device::{Activation, MemristorModel};
use memwin_core::drive::{PulseLayout, PulseTrain, Waveform};
use memwin_core::sim::SimConfig;
use memwin_core::windows::WindowSpec;
use memwin_core::Error;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Pulse strength `gamma * I * tau` used when neither a current nor a strength is given.
const DEFAULT_STRENGTH: f64 = 0.01;
/// `gamma * I0 * T` used for smooth drives by default.
const DEFAULT_SMOOTH_STRENGTH: f64 = 0.05;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum WindowArg {
    Biolek,
    Joglekar,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ActivationArg {
    Linear,
    Threshold,
    Quadratic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DriveArg {
    Rect,
    Sin,
    Tri,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LayoutArg {
    PlusThenMinus,
    MinusThenPlus,
}

#[derive(Args, Debug, Clone)]
pub struct WindowArgs {
    #[arg(long, value_enum, default_value = "biolek")]
    pub window: WindowArg,
    /// Window exponent.
    #[arg(long, default_value_t = 1)]
    pub p: u32,
}

impl WindowArgs {
    pub fn resolve(&self) -> Result<WindowSpec> {
        Ok(match self.window {
            WindowArg::Biolek => WindowSpec::biolek(self.p)?,
            WindowArg::Joglekar => WindowSpec::joglekar(self.p)?,
        })
    }
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Model definition JSON; replaces the individual model flags.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["window", "p", "activation", "gamma", "i_t", "r_on", "r_off"])]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, value_enum, default_value = "linear")]
    pub activation: ActivationArg,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Threshold current, required with `--activation threshold`.
    #[arg(long)]
    pub i_t: Option<f64>,
    #[arg(long, requires = "r_off")]
    pub r_on: Option<f64>,
    #[arg(long, requires = "r_on")]
    pub r_off: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct DriveArgs {
    /// Drive definition JSON; replaces the individual drive flags.
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with_all = [
            "drive", "i_plus", "tau_plus", "i_minus", "tau_minus", "period", "layout", "i0",
            "gamma_i_plus_tau_plus", "gamma_i_minus_tau_minus", "gamma_i0_t",
        ]
    )]
    pub drive_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "rect")]
    pub drive: DriveArg,
    #[arg(long, default_value_t = 1.0)]
    pub period: f64,
    #[arg(long, conflicts_with = "gamma_i_plus_tau_plus")]
    pub i_plus: Option<f64>,
    #[arg(long, conflicts_with = "gamma_i_minus_tau_minus")]
    pub i_minus: Option<f64>,
    /// Defaults to 0.2 * period.
    #[arg(long)]
    pub tau_plus: Option<f64>,
    /// Defaults to 0.2 * period.
    #[arg(long)]
    pub tau_minus: Option<f64>,
    #[arg(long, value_enum, default_value = "plus-then-minus")]
    pub layout: LayoutArg,
    /// Amplitude of the sinusoid or triangle.
    #[arg(long, conflicts_with = "gamma_i0_t")]
    pub i0: Option<f64>,
    /// Positive pulse strength gamma * I+ * tau+ (linear activation only).
    #[arg(long)]
    pub gamma_i_plus_tau_plus: Option<f64>,
    /// Negative pulse strength gamma * I- * tau- (linear activation only).
    #[arg(long)]
    pub gamma_i_minus_tau_minus: Option<f64>,
    /// Smooth drive strength gamma * I0 * T (linear activation only).
    #[arg(long = "gamma-i0-T", visible_alias = "gamma-i0-t")]
    pub gamma_i0_t: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SimArgs {
    /// Initial states, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub x0: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub periods: usize,
    #[arg(long, default_value_t = 16)]
    pub steps_per_segment: usize,
    /// Step size for sinusoid and triangle drives; must divide the period.
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 1)]
    pub record_stride: usize,
}

impl SimArgs {
    pub fn configs(&self) -> Result<Vec<SimConfig>> {
        if self.x0.is_empty() {
            return Err(config("x0", "at least one initial state is needed"));
        }
        for (k, x) in self.x0.iter().enumerate() {
            if self.x0[..k].contains(x) {
                return Err(config("x0", format!("{x} is listed twice")));
            }
        }
        self.x0
            .iter()
            .map(|&x0| {
                let c = SimConfig {
                    x0,
                    periods: self.periods,
                    steps_per_segment: self.steps_per_segment,
                    dt: self.dt,
                    record_stride: self.record_stride,
                    ..SimConfig::default()
                };
                c.validate()?;
                Ok(c)
            })
            .collect()
    }
}

/// An input file and its SHA-256.
#[derive(Clone, Debug, Serialize)]
pub struct InputFile {
    pub path: PathBuf,
    pub sha256: String,
}

pub fn config(param: &'static str, reason: impl Into<String>) -> anyhow::Error {
    Error::Config {
        param,
        reason: reason.into(),
    }
    .into()
}

fn read_json<T: serde::de::DeserializeOwned>(
    param: &'static str,
    path: &Path,
    inputs: &mut Vec<InputFile>,
) -> Result<T> {
    let bytes = fs::read(path).map_err(|e| config(param, format!("{}: {e}", path.display())))?;
    inputs.push(InputFile {
        path: path.to_path_buf(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    });
    serde_json::from_slice(&bytes).map_err(|e| config(param, format!("{}: {e}", path.display())))
}

pub fn resolve_model(a: &ModelArgs, inputs: &mut Vec<InputFile>) -> Result<MemristorModel> {
    if let Some(path) = &a.model {
        let m: MemristorModel = read_json("model", path, inputs)?;
        m.validate()?;
        return Ok(m);
    }
    let activation = match a.activation {
        ActivationArg::Linear => Activation::Linear { gamma: a.gamma },
        ActivationArg::Quadratic => Activation::Quadratic { gamma: a.gamma },
        ActivationArg::Threshold => Activation::Threshold {
            gamma: a.gamma,
            i_t: a
                .i_t
                .ok_or_else(|| config("i-t", "required with --activation threshold"))?,
        },
    };
    let m = MemristorModel::new(a.window.resolve()?, activation)?;
    match (a.r_on, a.r_off) {
        (Some(on), Some(off)) => Ok(m.with_resistances(on, off)?),
        _ => Ok(m),
    }
}

pub fn resolve_drive(
    a: &DriveArgs,
    model: &MemristorModel,
    inputs: &mut Vec<InputFile>,
) -> Result<Waveform> {
    if let Some(path) = &a.drive_file {
        let w: Waveform = read_json("drive-file", path, inputs)?;
        w.validate()?;
        return Ok(w);
    }
    let compound = [
        ("gamma-i-plus-tau-plus", a.gamma_i_plus_tau_plus),
        ("gamma-i-minus-tau-minus", a.gamma_i_minus_tau_minus),
        ("gamma-i0-T", a.gamma_i0_t),
    ];
    let linear_gamma = match model.activation {
        Activation::Linear { gamma } => Some(gamma),
        _ => None,
    };
    if linear_gamma.is_none() {
        if let Some((name, _)) = compound.iter().find(|(_, v)| v.is_some()) {
            return Err(config(name, "compound strengths need --activation linear"));
        }
    }
    let gamma = linear_gamma.unwrap_or(1.0);
    let t = a.period;

    let w = match a.drive {
        DriveArg::Rect => {
            let tau_plus = a.tau_plus.unwrap_or(0.2 * t);
            let tau_minus = a.tau_minus.unwrap_or(0.2 * t);
            let i_plus = match (a.i_plus, a.gamma_i_plus_tau_plus) {
                (Some(i), _) => i,
                (None, Some(s)) => s / (gamma * tau_plus),
                (None, None) => DEFAULT_STRENGTH / (gamma * tau_plus),
            };
            let i_minus = match (a.i_minus, a.gamma_i_minus_tau_minus) {
                (Some(i), _) => i,
                (None, Some(s)) => s / (gamma * tau_minus),
                (None, None) => -DEFAULT_STRENGTH / (gamma * tau_minus),
            };
            let layout = match a.layout {
                LayoutArg::PlusThenMinus => PulseLayout::PlusThenMinus,
                LayoutArg::MinusThenPlus => PulseLayout::MinusThenPlus,
            };
            Waveform::Rectangular(
                PulseTrain::new(i_plus, tau_plus, i_minus, tau_minus, t)?.with_layout(layout),
            )
        }
        DriveArg::Sin | DriveArg::Tri => {
            let i0 = match (a.i0, a.gamma_i0_t) {
                (Some(i), _) => i,
                (None, Some(s)) => s / (gamma * t),
                (None, None) => DEFAULT_SMOOTH_STRENGTH / (gamma * t),
            };
            if matches!(a.drive, DriveArg::Sin) {
                Waveform::Sinusoid { i0, period: t }
            } else {
                Waveform::Triangle { i0, period: t }
            }
        }
    };
    w.validate()?;
    Ok(w)
}
