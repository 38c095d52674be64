//! Periodic driving currents.
//!
//! A rectangular drive places the positive pulse at the start of the period
//! and the negative pulse at `T/2` (or the mirror image for
//! [`PulseLayout::MinusThenPlus`]). When a pulse is longer than half the
//! period the second pulse is pushed back so the two never overlap.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseLayout {
    #[default]
    PlusThenMinus,
    MinusThenPlus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseTrain {
    pub i_plus: f64,
    pub tau_plus: f64,
    pub i_minus: f64,
    pub tau_minus: f64,
    pub period: f64,
    #[serde(default)]
    pub layout: PulseLayout,
}

impl PulseTrain {
    pub fn new(
        i_plus: f64,
        tau_plus: f64,
        i_minus: f64,
        tau_minus: f64,
        period: f64,
    ) -> Result<Self> {
        let train = PulseTrain {
            i_plus,
            tau_plus,
            i_minus,
            tau_minus,
            period,
            layout: PulseLayout::PlusThenMinus,
        };
        train.validate()?;
        Ok(train)
    }

    pub fn with_layout(mut self, layout: PulseLayout) -> Self {
        self.layout = layout;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |param: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(
                    param,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        };
        positive("i_plus", self.i_plus)?;
        positive("tau_plus", self.tau_plus)?;
        positive("tau_minus", self.tau_minus)?;
        positive("period", self.period)?;
        if !(self.i_minus < 0.0 && self.i_minus.is_finite()) {
            return Err(Error::config(
                "i_minus",
                format!("must be finite and < 0, got {}", self.i_minus),
            ));
        }
        if self.tau_plus + self.tau_minus > self.period * (1.0 + 1e-12) {
            return Err(Error::config(
                "tau_plus + tau_minus",
                format!(
                    "pulses ({} + {}) do not fit in the period {}",
                    self.tau_plus, self.tau_minus, self.period
                ),
            ));
        }
        Ok(())
    }

    /// Quiet time per period, `T - tau_plus - tau_minus`.
    pub fn quiet_time(&self) -> f64 {
        (self.period - self.tau_plus - self.tau_minus).max(0.0)
    }

    /// Net charge per period.
    pub fn charge(&self) -> f64 {
        self.i_plus * self.tau_plus + self.i_minus * self.tau_minus
    }

    fn segments(&self) -> Vec<Segment> {
        let (first, second) = match self.layout {
            PulseLayout::PlusThenMinus => {
                ((self.tau_plus, self.i_plus), (self.tau_minus, self.i_minus))
            }
            PulseLayout::MinusThenPlus => {
                ((self.tau_minus, self.i_minus), (self.tau_plus, self.i_plus))
            }
        };
        let t = self.period;
        let snap = |v: f64, to: f64| if (v - to).abs() <= 1e-12 * t { to } else { v };
        let first_end = snap(first.0, t);
        let second_start =
            snap((0.5 * t).max(first_end).min(t - second.0), first_end).max(first_end);
        let second_end = snap((second_start + second.0).min(t), t);
        let edges = [0.0, first_end, second_start, second_end, t];
        let currents = [first.1, 0.0, second.1, 0.0];
        edges
            .windows(2)
            .zip(currents)
            .filter(|(e, _)| e[1] > e[0])
            .map(|(e, current)| Segment {
                duration: e[1] - e[0],
                current,
            })
            .collect()
    }
}

/// A constant-current stretch of one period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub current: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Waveform {
    #[serde(rename = "rect")]
    Rectangular(PulseTrain),
    #[serde(rename = "sin")]
    Sinusoid { i0: f64, period: f64 },
    /// Odd triangle wave: 0 at `t = 0`, `+i0` at `T/4`, `-i0` at `3T/4`.
    #[serde(rename = "tri")]
    Triangle { i0: f64, period: f64 },
}

impl Waveform {
    pub fn period(&self) -> f64 {
        match *self {
            Waveform::Rectangular(p) => p.period,
            Waveform::Sinusoid { period, .. } | Waveform::Triangle { period, .. } => period,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Waveform::Rectangular(p) => p.validate(),
            Waveform::Sinusoid { i0, period } | Waveform::Triangle { i0, period } => {
                if !(i0 >= 0.0 && i0.is_finite()) {
                    return Err(Error::config(
                        "i0",
                        format!("must be finite and >= 0, got {i0}"),
                    ));
                }
                if !(period > 0.0 && period.is_finite()) {
                    return Err(Error::config(
                        "period",
                        format!("must be finite and > 0, got {period}"),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Current at time `t`.
    pub fn sample(&self, t: f64) -> f64 {
        let period = self.period();
        let phase = (t / period).rem_euclid(1.0);
        match *self {
            Waveform::Rectangular(p) => {
                let local = t.rem_euclid(period);
                let mut start = 0.0;
                for seg in p.segments() {
                    let end = start + seg.duration;
                    if local < end {
                        return seg.current;
                    }
                    start = end;
                }
                0.0
            }
            Waveform::Sinusoid { i0, .. } => i0 * (2.0 * PI * phase).sin(),
            Waveform::Triangle { i0, .. } => {
                let shape = if phase < 0.25 {
                    4.0 * phase
                } else if phase < 0.75 {
                    2.0 - 4.0 * phase
                } else {
                    4.0 * phase - 4.0
                };
                i0 * shape
            }
        }
    }

    /// Piecewise-constant decomposition of one period, in time order.
    pub fn segments(&self) -> Result<Vec<Segment>> {
        match self {
            Waveform::Rectangular(p) => Ok(p.segments()),
            _ => Err(Error::NotPiecewiseConstant),
        }
    }

    /// Times within `[0, T)` where the current changes sign or jumps.
    /// Quadrature panels should break at these points.
    pub fn breakpoints(&self) -> Vec<f64> {
        let period = self.period();
        match self {
            Waveform::Rectangular(p) => {
                let mut t = 0.0;
                let mut out = vec![0.0];
                for seg in p.segments() {
                    t += seg.duration;
                    if t < period {
                        out.push(t);
                    }
                }
                out
            }
            Waveform::Sinusoid { .. } => vec![0.0, 0.5 * period],
            Waveform::Triangle { .. } => vec![0.0, 0.25 * period, 0.5 * period, 0.75 * period],
        }
    }
}
