//! Current-controlled first-order memristor: `dx/dt = h(I) g(x, I)`.

use serde::{Deserialize, Serialize};

use crate::windows::WindowSpec;
use crate::{Error, Result};

/// Rate function `h(I)`. Every kind satisfies `h(0) = 0` and has the sign
/// of `I` wherever it is non-zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Activation {
    /// `h(I) = gamma * I`.
    Linear { gamma: f64 },
    /// `h(I) = sign(I) * gamma * (|I| - i_t)` above the threshold, 0 below.
    Threshold { gamma: f64, i_t: f64 },
    /// `h(I) = sign(I) * gamma * I^2`.
    Quadratic { gamma: f64 },
}

impl Activation {
    pub fn gamma(&self) -> f64 {
        match *self {
            Activation::Linear { gamma }
            | Activation::Threshold { gamma, .. }
            | Activation::Quadratic { gamma } => gamma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let gamma = self.gamma();
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::config(
                "gamma",
                format!("must be finite and > 0, got {gamma}"),
            ));
        }
        if let Activation::Threshold { i_t, .. } = *self {
            if !(i_t >= 0.0 && i_t.is_finite()) {
                return Err(Error::config(
                    "i_t",
                    format!("must be finite and >= 0, got {i_t}"),
                ));
            }
        }
        Ok(())
    }

    /// Evaluates `h(i)`.
    pub fn rate(&self, i: f64) -> f64 {
        if i == 0.0 {
            return 0.0;
        }
        match *self {
            Activation::Linear { gamma } => gamma * i,
            Activation::Threshold { gamma, i_t } => {
                if i.abs() > i_t {
                    i.signum() * gamma * (i.abs() - i_t)
                } else {
                    0.0
                }
            }
            Activation::Quadratic { gamma } => i.signum() * gamma * i * i,
        }
    }
}

/// Window plus activation, with an optional linear memristance read-out.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemristorModel {
    pub window: WindowSpec,
    pub activation: Activation,
    /// Resistance in the fully-on state `x = 1`, in ohms.
    #[serde(default)]
    pub r_on: Option<f64>,
    /// Resistance in the fully-off state `x = 0`, in ohms.
    #[serde(default)]
    pub r_off: Option<f64>,
}

impl MemristorModel {
    pub fn new(window: WindowSpec, activation: Activation) -> Result<Self> {
        let model = MemristorModel {
            window,
            activation,
            r_on: None,
            r_off: None,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn with_resistances(mut self, r_on: f64, r_off: f64) -> Result<Self> {
        self.r_on = Some(r_on);
        self.r_off = Some(r_off);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.activation.validate()?;
        match (self.r_on, self.r_off) {
            (None, None) => Ok(()),
            (Some(on), Some(off)) => {
                if !(on > 0.0 && on.is_finite()) {
                    return Err(Error::config("r_on", format!("must be > 0, got {on}")));
                }
                if !(off > on && off.is_finite()) {
                    return Err(Error::config(
                        "r_off",
                        format!("must exceed r_on = {on}, got {off}"),
                    ));
                }
                Ok(())
            }
            _ => Err(Error::config(
                "r_on/r_off",
                "both resistances must be given together",
            )),
        }
    }

    /// `f(x, i) = h(i) g(x, i)`; exactly zero when no current flows.
    pub fn state_rate(&self, x: f64, i: f64) -> Result<f64> {
        let h = self.activation.rate(i);
        let g = self.window.eval(x, i)?;
        if h == 0.0 {
            return Ok(0.0);
        }
        Ok(h * g)
    }

    /// `R(x) = r_on x + r_off (1 - x)`.
    pub fn memristance(&self, x: f64) -> Result<f64> {
        let (Some(on), Some(off)) = (self.r_on, self.r_off) else {
            return Err(Error::config(
                "r_on/r_off",
                "memristance requires both resistances",
            ));
        };
        let x = crate::windows::check_state(x, self.window.clamp_tol())?;
        Ok(on * x + off * (1.0 - x))
    }

    /// Voltage across the device, `V = R(x) I`.
    pub fn voltage(&self, x: f64, i: f64) -> Result<f64> {
        Ok(self.memristance(x)? * i)
    }
}
