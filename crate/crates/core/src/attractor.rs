//! Period-averaged dynamics: fixed points, stability, potentials and sweeps.
//!
//! Averaging the state equation over one drive period gives
//! `dx̄/dt = (1/T) ∫_0^T f(x̄, I(t)) dt`, which for a rectangular pulse train
//! reduces to `(f(x̄, I+) τ+ + f(x̄, I-) τ-) / T`. A zero of this rate is a
//! fixed point; it attracts when the rate decreases through it. For the
//! Biolek window the zero solves
//!
//! ```text
//! a+ (1 - x^(2p)) + a- (1 - (x - 1)^(2p)) = 0,    a± = h(I±) τ±
//! ```
//!
//! which for `p = 1` has the closed form [`biolek_xa_closed_form`].

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::csv::{format_optional, format_value, write_row};
use crate::device::MemristorModel;
use crate::drive::{PulseTrain, Waveform};
use crate::numeric::{bisect, derivative, simpson};
use crate::windows::WindowKind;
use crate::{Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Cells in the sign-change scan that precedes bisection.
pub const SCAN_CELLS: usize = 1024;
/// Step for the finite-difference stability derivative.
pub const FD_STEP: f64 = 1e-6;
/// Relative threshold below which the averaged rate counts as identically zero.
pub const NEUTRAL_REL_TOL: f64 = 1e-12;
/// Simpson panels per period for smooth drives.
pub const QUAD_PANELS: usize = 1024;

/// Per-pulse strengths `a+ = h(I+) τ+ > 0` and `a- = h(I-) τ- < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseStrengths {
    pub a_plus: f64,
    pub a_minus: f64,
}

impl PulseStrengths {
    pub fn new(a_plus: f64, a_minus: f64) -> Result<Self> {
        if !(a_plus > 0.0 && a_plus.is_finite()) {
            return Err(Error::config(
                "a_plus",
                format!("must be finite and > 0, got {a_plus}"),
            ));
        }
        if !(a_minus < 0.0 && a_minus.is_finite()) {
            return Err(Error::config(
                "a_minus",
                format!("must be finite and < 0, got {a_minus}"),
            ));
        }
        Ok(PulseStrengths { a_plus, a_minus })
    }

    /// Strengths delivered by `train` to `model`.
    pub fn from_drive(model: &MemristorModel, train: &PulseTrain) -> Result<Self> {
        let h = |i| model.activation.rate(i);
        Self::new(
            h(train.i_plus) * train.tau_plus,
            h(train.i_minus) * train.tau_minus,
        )
    }

    /// `α = a+ / a-`, always negative.
    pub fn alpha(&self) -> f64 {
        self.a_plus / self.a_minus
    }

    pub fn is_balanced(&self, rel_tol: f64) -> bool {
        (self.a_plus + self.a_minus).abs() <= rel_tol * self.a_plus.max(-self.a_minus)
    }
}

/// Averaged rate `(1/T) ∫_0^T f(x, I(t)) dt`.
pub fn averaged_rhs(m: &MemristorModel, w: &Waveform, x: f64) -> Result<f64> {
    let period = w.period();
    match w.segments() {
        Ok(segments) => {
            let mut sum = 0.0;
            for seg in segments {
                if seg.current != 0.0 {
                    sum += m.state_rate(x, seg.current)? * seg.duration;
                }
            }
            Ok(sum / period)
        }
        Err(Error::NotPiecewiseConstant) => {
            Ok(integrate_over_period(w, |t| m.state_rate(x, w.sample(t)))? / period)
        }
        Err(e) => Err(e),
    }
}

/// Simpson quadrature over one period, split at the waveform's breakpoints.
fn integrate_over_period<F>(w: &Waveform, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let period = w.period();
    let mut edges = w.breakpoints();
    edges.push(period);
    let panels = (QUAD_PANELS / (edges.len() - 1)).max(2);
    let mut total = 0.0;
    for e in edges.windows(2) {
        // nudge inside the piece so sign-dependent windows see the piece's polarity
        let (a, b) = (e[0], e[1]);
        let inset = 1e-14 * period;
        total += simpson(&mut f, a + inset, b - inset, panels)?;
    }
    Ok(total)
}

/// Scale of the drive used to judge whether the averaged rate vanishes:
/// the larger of the total positive and negative activation per period.
/// Errors when either polarity is inactive.
pub fn drive_scale(m: &MemristorModel, w: &Waveform) -> Result<f64> {
    let (pos, neg) = match w {
        Waveform::Rectangular(train) => {
            let s = PulseStrengths::from_drive(m, train)?;
            (s.a_plus, -s.a_minus)
        }
        _ => {
            let h = |t: f64| m.activation.rate(w.sample(t));
            let pos = integrate_over_period(w, |t| Ok(h(t).max(0.0)))?;
            let neg = integrate_over_period(w, |t| Ok((-h(t)).max(0.0)))?;
            if pos <= 0.0 {
                return Err(Error::config(
                    "drive",
                    "no positive activation over the period",
                ));
            }
            if neg <= 0.0 {
                return Err(Error::config(
                    "drive",
                    "no negative activation over the period",
                ));
            }
            (pos, neg)
        }
    };
    Ok(pos.max(neg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointKind {
    Stable,
    Neutral,
    None,
}

/// A zero of the averaged rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPoint {
    pub x: f64,
    /// Derivative of the averaged rate at `x` (per unit time); negative when stable.
    pub stability_value: f64,
    /// `|∫_0^T f(x, I(t)) dt|` at `x`.
    pub residual: f64,
}

impl FixedPoint {
    pub fn is_stable(&self) -> bool {
        self.stability_value < 0.0
    }
}

/// Outcome of [`find_fixed_point`]. `x_a` is set only for a stable point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub x_a: Option<f64>,
    pub kind: FixedPointKind,
    pub stability_value: Option<f64>,
    pub residual: Option<f64>,
    /// Every zero found in the scan, stable or not.
    #[serde(skip)]
    pub roots: Vec<FixedPoint>,
}

/// Locates and classifies the fixed points of the averaged dynamics.
pub fn find_fixed_point(m: &MemristorModel, w: &Waveform, tol: f64) -> Result<FixedPointReport> {
    m.validate()?;
    w.validate()?;
    let scale = drive_scale(m, w)?;
    let period = w.period();
    let rhs = |x: f64| averaged_rhs(m, w, x);

    let xs: Vec<f64> = (0..=SCAN_CELLS)
        .map(|k| k as f64 / SCAN_CELLS as f64)
        .collect();
    let values = xs.iter().map(|&x| rhs(x)).collect::<Result<Vec<_>>>()?;
    let max_abs = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if max_abs < NEUTRAL_REL_TOL * scale / period {
        return Ok(FixedPointReport {
            x_a: None,
            kind: FixedPointKind::Neutral,
            stability_value: None,
            residual: Some(max_abs * period),
            roots: Vec::new(),
        });
    }

    let mut roots = Vec::new();
    for k in 0..SCAN_CELLS {
        let interior_zero = k > 0 && values[k] == 0.0;
        let x = if interior_zero {
            xs[k]
        } else if values[k] * values[k + 1] < 0.0 {
            bisect(rhs, xs[k], xs[k + 1], tol)?
        } else {
            continue;
        };
        let stability_value = derivative(rhs, x, FD_STEP, 0.0, 1.0)?;
        let residual = rhs(x)?.abs() * period;
        roots.push(FixedPoint {
            x,
            stability_value,
            residual,
        });
    }

    let report = match roots.iter().find(|r| r.is_stable()) {
        Some(r) => FixedPointReport {
            x_a: Some(r.x),
            kind: FixedPointKind::Stable,
            stability_value: Some(r.stability_value),
            residual: Some(r.residual),
            roots,
        },
        None => FixedPointReport {
            x_a: None,
            kind: FixedPointKind::None,
            stability_value: None,
            residual: None,
            roots,
        },
    };
    Ok(report)
}

/// Closed-form Biolek `p = 1` attractor, `(1 - sqrt(α² + α + 1)) / (α + 1)`.
///
/// Evaluated in the rationalised form `-α / (1 + sqrt(α² + α + 1))`, which
/// has no removable singularity at `α = -1` (where it gives exactly 0.5).
pub fn biolek_xa_closed_form(alpha: f64) -> Result<f64> {
    if !(alpha < 0.0 && alpha.is_finite()) {
        return Err(Error::config(
            "alpha",
            format!("must be finite and < 0, got {alpha}"),
        ));
    }
    Ok(-alpha / (1.0 + (alpha * alpha + alpha + 1.0).sqrt()))
}

/// Left side of the Biolek fixed-point condition; strictly decreasing in `x`.
fn biolek_balance(p: u32, s: &PulseStrengths, x: f64) -> f64 {
    let e = 2 * p as i32;
    s.a_plus * (1.0 - x.powi(e)) + s.a_minus * (1.0 - (x - 1.0).powi(e))
}

/// Biolek attractor for any exponent, by bisection on `[0, 1]`.
pub fn biolek_fixed_point_general(p: u32, s: &PulseStrengths, tol: f64) -> Result<f64> {
    if p == 0 {
        return Err(Error::config(
            "p",
            "window exponent must be a positive integer",
        ));
    }
    PulseStrengths::new(s.a_plus, s.a_minus)?;
    bisect(|x| Ok(biolek_balance(p, s, x)), 0.0, 1.0, tol)
}

/// Sampled potential `U(x) = -∫_0^x T·rate(ξ) dξ`, anchored at `U(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialCurve {
    pub xs: Vec<f64>,
    pub numeric: Vec<f64>,
    /// Polynomial form for built-in windows under rectangular drives.
    pub closed_form: Option<Vec<f64>>,
}

impl PotentialCurve {
    /// Grid point with the lowest numeric potential.
    pub fn argmin(&self) -> f64 {
        let k = self
            .numeric
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| k)
            .unwrap_or(0);
        self.xs[k]
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "x,U_numeric,U_closed_form")?;
        for (k, (&x, &u)) in self.xs.iter().zip(&self.numeric).enumerate() {
            let closed = self.closed_form.as_ref().map(|c| c[k]);
            write_row(
                out,
                &[format_value(x), format_value(u), format_optional(closed)],
            )?;
        }
        Ok(())
    }
}

pub fn potential(m: &MemristorModel, w: &Waveform, grid_n: usize) -> Result<PotentialCurve> {
    if grid_n < 2 {
        return Err(Error::config(
            "grid_n",
            format!("need at least 2 points, got {grid_n}"),
        ));
    }
    m.validate()?;
    w.validate()?;
    let period = w.period();
    let force = |x: f64| -> Result<f64> { Ok(-period * averaged_rhs(m, w, x)?) };
    let xs: Vec<f64> = (0..grid_n)
        .map(|k| k as f64 / (grid_n - 1) as f64)
        .collect();

    let mut numeric = Vec::with_capacity(grid_n);
    numeric.push(0.0);
    let mut u = 0.0;
    let mut f_left = force(xs[0])?;
    for cell in xs.windows(2) {
        let (a, b) = (cell[0], cell[1]);
        let f_mid = force(0.5 * (a + b))?;
        let f_right = force(b)?;
        u += (b - a) / 6.0 * (f_left + 4.0 * f_mid + f_right);
        numeric.push(u);
        f_left = f_right;
    }

    let closed_form = closed_form_potential(m, w)?.map(|u| {
        let u0 = u(0.0);
        xs.iter().map(|&x| u(x) - u0).collect()
    });
    Ok(PotentialCurve {
        xs,
        numeric,
        closed_form,
    })
}

type PotentialFn = Box<dyn Fn(f64) -> f64>;

fn closed_form_potential(m: &MemristorModel, w: &Waveform) -> Result<Option<PotentialFn>> {
    let Waveform::Rectangular(train) = w else {
        return Ok(None);
    };
    let h = |i| m.activation.rate(i);
    let a_plus = h(train.i_plus) * train.tau_plus;
    let a_minus = h(train.i_minus) * train.tau_minus;
    let q = 2 * m.window.p() as i32 + 1;
    let qf = q as f64;
    Ok(match m.window.kind() {
        WindowKind::Biolek => Some(Box::new(move |x: f64| {
            -a_plus * (x - x.powi(q) / qf) - a_minus * (x - (x - 1.0).powi(q) / qf)
        })),
        WindowKind::Joglekar => Some(Box::new(move |x: f64| {
            -(a_plus + a_minus) * (x - (2.0 * x - 1.0).powi(q) / (2.0 * qf))
        })),
        WindowKind::Custom(_) => None,
    })
}

/// One cell of a Biolek attractor sweep; `x_a` is absent where the strengths
/// do not have opposite signs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub a_plus: f64,
    pub a_minus: f64,
    pub x_a: Option<f64>,
}

/// Attractor location over the grid `a_plus × a_minus`, row-major in `a_plus`.
pub fn sweep_xa(a_plus: &[f64], a_minus: &[f64], p: u32, tol: f64) -> Result<Vec<SweepCell>> {
    if p == 0 {
        return Err(Error::config(
            "p",
            "window exponent must be a positive integer",
        ));
    }
    let pairs: Vec<(f64, f64)> = a_plus
        .iter()
        .flat_map(|&ap| a_minus.iter().map(move |&am| (ap, am)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(ap, am)| sweep_cell(ap, am, p, tol))
        .collect()
}

/// Attractor location along the line `a_minus = a_plus - offset`.
pub fn sweep_section(a_plus: &[f64], offset: f64, p: u32, tol: f64) -> Result<Vec<SweepCell>> {
    if p == 0 {
        return Err(Error::config(
            "p",
            "window exponent must be a positive integer",
        ));
    }
    a_plus
        .par_iter()
        .map(|&ap| sweep_cell(ap, ap - offset, p, tol))
        .collect()
}

fn sweep_cell(a_plus: f64, a_minus: f64, p: u32, tol: f64) -> Result<SweepCell> {
    let x_a = match PulseStrengths::new(a_plus, a_minus) {
        Ok(s) => Some(biolek_fixed_point_general(p, &s, tol)?),
        Err(_) => None,
    };
    Ok(SweepCell {
        a_plus,
        a_minus,
        x_a,
    })
}

pub fn write_sweep_csv<W: Write>(cells: &[SweepCell], out: &mut W) -> io::Result<()> {
    writeln!(out, "a_plus,a_minus,x_a")?;
    for c in cells {
        write_row(
            out,
            &[
                format_value(c.a_plus),
                format_value(c.a_minus),
                format_optional(c.x_a),
            ],
        )?;
    }
    Ok(())
}

/// Where the section `a_minus = a_plus - offset` crosses `x_a = 0.5`, and
/// the slope `d x_a / d a_plus` there.
pub fn section_slope_at_half(p: u32, offset: f64) -> Result<(f64, f64)> {
    if !(offset > 0.0 && offset.is_finite()) {
        return Err(Error::config(
            "offset",
            format!("must be finite and > 0, got {offset}"),
        ));
    }
    let xa = |ap: f64| -> Result<f64> {
        let s = PulseStrengths::new(ap, ap - offset)?;
        biolek_fixed_point_general(p, &s, 0.0)
    };
    let lo = 1e-9 * offset;
    let hi = offset * (1.0 - 1e-9);
    let crossing = bisect(|ap| Ok(xa(ap)? - 0.5), lo, hi, 0.0)?;
    // implicit differentiation of a+ g+(x) + a- g-(x) = 0 along a- = a+ - offset
    let x = xa(crossing)?;
    let e = 2 * p as i32;
    let g_plus = 1.0 - x.powi(e);
    let g_minus = 1.0 - (x - 1.0).powi(e);
    let dg_plus = -(e as f64) * x.powi(e - 1);
    let dg_minus = -(e as f64) * (x - 1.0).powi(e - 1);
    let slope = -(g_plus + g_minus) / (crossing * dg_plus + (crossing - offset) * dg_minus);
    Ok((crossing, slope))
}

/// Evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}
