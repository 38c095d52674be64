//! Time-domain integration of `dx/dt = f(x, I(t))`.
//!
//! Rectangular drives are integrated segment by segment with classical RK4,
//! so no step straddles a current discontinuity. Smooth drives use a fixed
//! step that must divide the period. Either way every period is stepped on
//! the same grid, which keeps moving averages and period-to-period
//! comparisons aligned sample for sample.

use std::io::{self, Write};

use crate::csv::{format_optional, format_value, write_row};
use crate::device::MemristorModel;
use crate::drive::Waveform;
use crate::{Error, Result, DEFAULT_CLAMP_TOL};

/// Default tolerance for [`detect_limit_cycle`].
pub const DEFAULT_CYCLE_EPS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub x0: f64,
    pub periods: usize,
    /// RK4 sub-steps per constant-current segment (rectangular drives).
    pub steps_per_segment: usize,
    /// Step for smooth drives; must divide the period.
    pub dt: f64,
    /// Keep every `record_stride`-th step. Must divide the steps per period.
    pub record_stride: usize,
    pub clamp_tol: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            x0: 0.5,
            periods: 100,
            steps_per_segment: 16,
            dt: 1e-3,
            record_stride: 1,
            clamp_tol: DEFAULT_CLAMP_TOL,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.x0) {
            return Err(Error::config(
                "x0",
                format!("must lie in [0, 1], got {}", self.x0),
            ));
        }
        if self.periods == 0 {
            return Err(Error::config("periods", "must be at least 1"));
        }
        if self.steps_per_segment == 0 {
            return Err(Error::config("steps_per_segment", "must be at least 1"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config(
                "dt",
                format!("must be finite and > 0, got {}", self.dt),
            ));
        }
        if self.record_stride == 0 {
            return Err(Error::config("record_stride", "must be at least 1"));
        }
        if !(self.clamp_tol >= 0.0 && self.clamp_tol.is_finite()) {
            return Err(Error::config("clamp_tol", "must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Recorded samples of `x(t)` and of its forward one-period average.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub period: f64,
    pub times: Vec<f64>,
    pub states: Vec<f64>,
    /// `averaged[k]` is the mean of `x` over `[times[k], times[k] + period]`;
    /// it is shorter than `states` by the samples of the final period.
    pub averaged: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn averaged_at(&self, k: usize) -> Option<f64> {
        self.averaged.get(k).copied()
    }

    /// Index of the recorded sample closest to `t`.
    pub fn index_near(&self, t: f64) -> usize {
        let k = self.times.partition_point(|&s| s < t);
        if k == 0 {
            return 0;
        }
        if k >= self.times.len() {
            return self.times.len() - 1;
        }
        if (self.times[k] - t).abs() < (t - self.times[k - 1]).abs() {
            k
        } else {
            k - 1
        }
    }

    /// Writes `t,x,xbar`, leaving `xbar` empty where the window overruns the record.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "t,x,xbar")?;
        for (k, (&t, &x)) in self.times.iter().zip(&self.states).enumerate() {
            write_row(
                out,
                &[
                    format_value(t),
                    format_value(x),
                    format_optional(self.averaged_at(k)),
                ],
            )?;
        }
        Ok(())
    }
}

/// One RK4 step within a period: start offset, length, and the current if
/// it is constant over the step.
#[derive(Clone, Copy, Debug)]
struct Step {
    offset: f64,
    h: f64,
    current: Option<f64>,
}

fn step_plan(w: &Waveform, c: &SimConfig) -> Result<Vec<Step>> {
    let period = w.period();
    match w.segments() {
        Ok(segments) => {
            let mut plan = Vec::with_capacity(segments.len() * c.steps_per_segment);
            let mut start = 0.0;
            for seg in segments {
                let h = seg.duration / c.steps_per_segment as f64;
                for j in 0..c.steps_per_segment {
                    plan.push(Step {
                        offset: start + j as f64 * h,
                        h,
                        current: Some(seg.current),
                    });
                }
                start += seg.duration;
            }
            Ok(plan)
        }
        Err(Error::NotPiecewiseConstant) => {
            let n = (period / c.dt).round();
            if n < 1.0 || (n * c.dt - period).abs() > 1e-9 * period {
                return Err(Error::config(
                    "dt",
                    format!("must divide the period {period}, got {}", c.dt),
                ));
            }
            let n = n as usize;
            let h = period / n as f64;
            Ok((0..n)
                .map(|k| Step {
                    offset: k as f64 * h,
                    h,
                    current: None,
                })
                .collect())
        }
        Err(e) => Err(e),
    }
}

/// Integrates the model under the drive for `c.periods` periods.
pub fn integrate(m: &MemristorModel, w: &Waveform, c: &SimConfig) -> Result<Trajectory> {
    m.validate()?;
    w.validate()?;
    c.validate()?;
    let period = w.period();
    let plan = step_plan(w, c)?;
    if plan.len() % c.record_stride != 0 {
        return Err(Error::config(
            "record_stride",
            format!("must divide the {} steps per period", plan.len()),
        ));
    }
    let model = m.clone();
    let window = model.window.clone().with_clamp_tol(c.clamp_tol)?;
    let model = MemristorModel { window, ..model };

    let per_period = plan.len() / c.record_stride;
    let capacity = c.periods * per_period + 1;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut x = c.x0;
    times.push(0.0);
    states.push(x);

    for k in 0..c.periods {
        let base = k as f64 * period;
        for (s, step) in plan.iter().enumerate() {
            let t0 = base + step.offset;
            x = rk4_step(&model, w, step, t0, x).map_err(|e| match e {
                Error::Domain { x, .. } => Error::Divergence { t: t0, x },
                other => other,
            })?;
            if x.is_nan() || x < -c.clamp_tol || x > 1.0 + c.clamp_tol {
                return Err(Error::Divergence { t: t0 + step.h, x });
            }
            x = x.clamp(0.0, 1.0);
            if (s + 1) % c.record_stride == 0 {
                let t = if s + 1 == plan.len() {
                    (k + 1) as f64 * period
                } else {
                    t0 + step.h
                };
                times.push(t);
                states.push(x);
            }
        }
    }

    let averaged = moving_average_series(&times, &states, period)?;
    Ok(Trajectory {
        period,
        times,
        states,
        averaged,
    })
}

fn rk4_step(m: &MemristorModel, w: &Waveform, step: &Step, t0: f64, x: f64) -> Result<f64> {
    let h = step.h;
    let current = |t: f64| step.current.unwrap_or_else(|| w.sample(t));
    let k1 = m.state_rate(x, current(t0))?;
    let k2 = m.state_rate(x + 0.5 * h * k1, current(t0 + 0.5 * h))?;
    let k3 = m.state_rate(x + 0.5 * h * k2, current(t0 + 0.5 * h))?;
    let k4 = m.state_rate(x + h * k3, current(t0 + h))?;
    Ok(x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

/// Forward moving average `(1/T) ∫_t^{t+T} x(s) ds` at each recorded sample,
/// by the trapezoidal rule on the recorded points.
pub fn moving_average(tr: &Trajectory, period: f64) -> Result<Vec<f64>> {
    moving_average_series(&tr.times, &tr.states, period)
}

fn moving_average_series(times: &[f64], states: &[f64], period: f64) -> Result<Vec<f64>> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::config(
            "period",
            format!("must be finite and > 0, got {period}"),
        ));
    }
    let available = match (times.first(), times.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    let eps = 1e-9 * period;
    if available + eps < period {
        return Err(Error::Length {
            needed: period,
            available,
        });
    }
    let n = times.len();
    let cell = |k: usize| 0.5 * (times[k + 1] - times[k]) * (states[k] + states[k + 1]);
    let last = times[n - 1];

    let mut out = Vec::new();
    // `full` holds the trapezoid sum over cells i..j.
    let mut full = 0.0;
    let mut j = 0usize;
    let mut since_resync = 0usize;
    for i in 0..n {
        let target = times[i] + period;
        if target > last + eps {
            break;
        }
        if i > 0 {
            full -= cell(i - 1);
        }
        while j + 1 < n && times[j + 1] <= target + eps {
            full += cell(j);
            j += 1;
        }
        since_resync += 1;
        if since_resync >= (j - i).max(1) {
            full = (i..j).map(cell).sum();
            since_resync = 0;
        }
        let mut integral = full;
        let gap = target - times[j];
        if gap > eps && j + 1 < n {
            let frac = gap / (times[j + 1] - times[j]);
            let x_end = states[j] + frac * (states[j + 1] - states[j]);
            integral += 0.5 * gap * (states[j] + x_end);
        }
        out.push(integral / period);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitCycle {
    pub periodic: bool,
    /// `max |x(t) - x(t - T)|` over the final recorded period.
    pub residual: f64,
}

/// Compares the last two recorded periods point by point.
pub fn detect_limit_cycle(tr: &Trajectory, period: f64, eps: f64) -> Result<LimitCycle> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::config(
            "period",
            format!("must be finite and > 0, got {period}"),
        ));
    }
    let (Some(&first), Some(&last)) = (tr.times.first(), tr.times.last()) else {
        return Err(Error::Length {
            needed: 2.0 * period,
            available: 0.0,
        });
    };
    let slack = 1e-9 * period;
    if last - first + slack < 2.0 * period {
        return Err(Error::Length {
            needed: 2.0 * period,
            available: last - first,
        });
    }
    let start = tr.times.partition_point(|&t| t < last - period - slack);
    let mut residual: f64 = 0.0;
    for k in start..tr.len() {
        let earlier = interpolate(&tr.times, &tr.states, tr.times[k] - period, slack);
        residual = residual.max((tr.states[k] - earlier).abs());
    }
    Ok(LimitCycle {
        periodic: residual < eps,
        residual,
    })
}

fn interpolate(times: &[f64], values: &[f64], t: f64, slack: f64) -> f64 {
    let k = times.partition_point(|&s| s < t - slack);
    if k >= times.len() {
        return values[times.len() - 1];
    }
    if (times[k] - t).abs() <= slack || k == 0 {
        return values[k];
    }
    let frac = (t - times[k - 1]) / (times[k] - times[k - 1]);
    values[k - 1] + frac * (values[k] - values[k - 1])
}
