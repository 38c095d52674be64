//! Window functions `g(x, I)` and their structural classification.
//!
//! A window multiplies the state rate so that drift vanishes at the state
//! boundaries. Two built-in shapes are provided:
//!
//! * Joglekar: `g(x) = 1 - (2x - 1)^(2p)`, independent of the current.
//! * Biolek: `g(x, I) = 1 - (x - H(-I))^(2p)`, which depends on the sign of
//!   the current through the Heaviside step `H` (with `H(0) = 1`).
//!
//! [`classify_window`] decides numerically whether a window satisfies the
//! hypotheses under which a periodically driven device always has a single
//! stable fixed point (`Class1`), or those under which it never has one
//! (`Class2`).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, DEFAULT_CLAMP_TOL};

/// Grid size used by the default classification.
pub const DEFAULT_CLASSIFY_GRID: usize = 1001;
/// Tolerance used by the default classification.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Checks `x` against `[0, 1]` and clamps round-off excursions up to `tol`.
pub fn check_state(x: f64, tol: f64) -> Result<f64> {
    if x.is_nan() || x < -tol || x > 1.0 + tol {
        return Err(Error::Domain { x, tol });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// Joglekar window `1 - (2x - 1)^(2p)`.
pub fn eval_joglekar(x: f64, p: u32) -> Result<f64> {
    let x = check_state(x, DEFAULT_CLAMP_TOL)?;
    Ok(joglekar(x, p))
}

/// Biolek window `1 - (x - H(-i))^(2p)`, with `H(0) = 1` so that `i = 0`
/// evaluates like a positive current.
pub fn eval_biolek(x: f64, i: f64, p: u32) -> Result<f64> {
    let x = check_state(x, DEFAULT_CLAMP_TOL)?;
    Ok(biolek(x, i, p))
}

fn joglekar(x: f64, p: u32) -> f64 {
    1.0 - (2.0 * x - 1.0).powi(2 * p as i32)
}

fn biolek(x: f64, i: f64, p: u32) -> f64 {
    let shift = if i < 0.0 { 1.0 } else { 0.0 };
    1.0 - (x - shift).powi(2 * p as i32)
}

/// User-supplied window `(x, i) -> g`.
#[derive(Clone)]
pub struct CustomWindow {
    name: String,
    eval: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl CustomWindow {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        CustomWindow {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CustomWindow").field(&self.name).finish()
    }
}

#[derive(Clone, Debug)]
pub enum WindowKind {
    Joglekar,
    Biolek,
    Custom(CustomWindow),
}

/// A window shape together with its exponent and clamp tolerance.
#[derive(Clone, Debug)]
pub struct WindowSpec {
    kind: WindowKind,
    p: u32,
    clamp_tol: f64,
}

impl WindowSpec {
    pub fn joglekar(p: u32) -> Result<Self> {
        Self::builtin(WindowKind::Joglekar, p)
    }

    pub fn biolek(p: u32) -> Result<Self> {
        Self::builtin(WindowKind::Biolek, p)
    }

    /// A custom window. The exponent is not used by custom windows and is
    /// reported as 1.
    pub fn custom(window: CustomWindow) -> Self {
        WindowSpec {
            kind: WindowKind::Custom(window),
            p: 1,
            clamp_tol: DEFAULT_CLAMP_TOL,
        }
    }

    fn builtin(kind: WindowKind, p: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::config(
                "p",
                "window exponent must be a positive integer",
            ));
        }
        Ok(WindowSpec {
            kind,
            p,
            clamp_tol: DEFAULT_CLAMP_TOL,
        })
    }

    pub fn with_clamp_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::config(
                "clamp_tol",
                format!("must be finite and >= 0, got {tol}"),
            ));
        }
        self.clamp_tol = tol;
        Ok(self)
    }

    pub fn kind(&self) -> &WindowKind {
        &self.kind
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn clamp_tol(&self) -> f64 {
        self.clamp_tol
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self.kind, WindowKind::Custom(_))
    }

    /// Evaluates `g(x, i)`.
    pub fn eval(&self, x: f64, i: f64) -> Result<f64> {
        let x = check_state(x, self.clamp_tol)?;
        Ok(match &self.kind {
            WindowKind::Joglekar => joglekar(x, self.p),
            WindowKind::Biolek => biolek(x, i, self.p),
            WindowKind::Custom(c) => (c.eval)(x, i),
        })
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WindowKind::Joglekar => write!(f, "joglekar(p={})", self.p),
            WindowKind::Biolek => write!(f, "biolek(p={})", self.p),
            WindowKind::Custom(c) => write!(f, "custom({})", c.name),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum WindowName {
    Joglekar,
    Biolek,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowDef {
    kind: WindowName,
    p: u32,
}

impl Serialize for WindowSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let kind = match &self.kind {
            WindowKind::Joglekar => WindowName::Joglekar,
            WindowKind::Biolek => WindowName::Biolek,
            WindowKind::Custom(c) => {
                return Err(serde::ser::Error::custom(format!(
                    "custom window '{}' cannot be serialized",
                    c.name
                )))
            }
        };
        WindowDef { kind, p: self.p }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WindowSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let def = WindowDef::deserialize(d)?;
        let spec = match def.kind {
            WindowName::Joglekar => WindowSpec::joglekar(def.p),
            WindowName::Biolek => WindowSpec::biolek(def.p),
        };
        spec.map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowClassKind {
    /// Attracting class: monotone in `x`, pinned to 1 and 0 at opposite
    /// boundaries depending on the current sign.
    Class1,
    /// Neutral class: current-independent, positive inside `(0, 1)`.
    Class2,
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub condition: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowClass {
    pub class: WindowClassKind,
    pub evidence: Vec<Evidence>,
}

impl WindowClass {
    pub fn passed(&self, condition: &str) -> Option<bool> {
        self.evidence
            .iter()
            .find(|e| e.condition == condition)
            .map(|e| e.pass)
    }
}

/// Representative currents used to probe the two polarities.
const PROBE_POSITIVE: f64 = 1.0;
const PROBE_NEGATIVE: f64 = -1.0;

/// Number of halvings used when chasing a suspected jump.
const JUMP_REFINEMENTS: usize = 48;

/// Classifies `w` on a uniform grid of `grid_n` points over `[0, 1]`.
pub fn classify_window(w: &WindowSpec, grid_n: usize, tol: f64) -> Result<WindowClass> {
    if grid_n < 3 {
        return Err(Error::config(
            "grid_n",
            format!("need at least 3 points, got {grid_n}"),
        ));
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::config(
            "tol",
            format!("must be finite and >= 0, got {tol}"),
        ));
    }
    let xs: Vec<f64> = (0..grid_n)
        .map(|k| k as f64 / (grid_n - 1) as f64)
        .collect();
    let plus = sample(w, &xs, PROBE_POSITIVE)?;
    let minus = sample(w, &xs, PROBE_NEGATIVE)?;
    let last = grid_n - 1;

    let cont_plus = continuous(w, &xs, PROBE_POSITIVE, tol)?;
    let cont_minus = continuous(w, &xs, PROBE_NEGATIVE, tol)?;
    let decreasing = plus.windows(2).all(|d| d[1] - d[0] <= tol);
    let increasing = minus.windows(2).all(|d| d[1] - d[0] >= -tol);
    let near = |v: f64, target: f64| (v - target).abs() <= tol;
    let independent = plus.iter().zip(&minus).all(|(a, b)| (a - b).abs() <= tol);
    let positive = plus[1..last].iter().all(|&v| v > 0.0);

    let evidence = vec![
        ("continuous in x (I>0)", cont_plus),
        ("continuous in x (I<0)", cont_minus),
        ("non-increasing in x (I>0)", decreasing),
        ("g(0) = 1 (I>0)", near(plus[0], 1.0)),
        ("g(1) = 0 (I>0)", near(plus[last], 0.0)),
        ("non-decreasing in x (I<0)", increasing),
        ("g(0) = 0 (I<0)", near(minus[0], 0.0)),
        ("g(1) = 1 (I<0)", near(minus[last], 1.0)),
        ("independent of I", independent),
        ("positive on (0,1)", positive),
    ];
    let class1 = evidence[..8].iter().all(|(_, pass)| *pass);
    let class2 = cont_plus && independent && positive;
    let class = if class1 {
        WindowClassKind::Class1
    } else if class2 {
        WindowClassKind::Class2
    } else {
        WindowClassKind::Unclassified
    };
    Ok(WindowClass {
        class,
        evidence: evidence
            .into_iter()
            .map(|(condition, pass)| Evidence {
                condition: condition.to_string(),
                pass,
            })
            .collect(),
    })
}

fn sample(w: &WindowSpec, xs: &[f64], i: f64) -> Result<Vec<f64>> {
    xs.iter().map(|&x| w.eval(x, i)).collect()
}

/// Grid test for jumps: every cell is bisected towards its larger half-step
/// difference. A continuous function's difference collapses with the cell
/// width; a jump keeps it bounded away from zero.
fn continuous(w: &WindowSpec, xs: &[f64], i: f64, tol: f64) -> Result<bool> {
    let threshold = tol.max(1e-6);
    for cell in xs.windows(2) {
        let (mut a, mut b) = (cell[0], cell[1]);
        let (mut ga, mut gb) = (w.eval(a, i)?, w.eval(b, i)?);
        if !(ga.is_finite() && gb.is_finite()) {
            return Ok(false);
        }
        for _ in 0..JUMP_REFINEMENTS {
            let m = 0.5 * (a + b);
            let gm = w.eval(m, i)?;
            if !gm.is_finite() {
                return Ok(false);
            }
            if (gm - ga).abs() >= (gb - gm).abs() {
                b = m;
                gb = gm;
            } else {
                a = m;
                ga = gm;
            }
        }
        if (gb - ga).abs() > threshold {
            return Ok(false);
        }
    }
    Ok(true)
}
