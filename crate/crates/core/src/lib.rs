//! Window-function memristor models driven by periodic current waveforms.
//!
//! The crate covers first-order current-controlled devices `dx/dt = h(I) g(x, I)`:
//!
//! * [`windows`]: Joglekar, Biolek and user-supplied window functions, plus a
//!   numerical classifier that sorts a window into the attracting class
//!   (`Class1`, Biolek-like) or the neutral class (`Class2`, Joglekar-like).
//! * [`device`]: activation functions `h(I)` and the assembled state equation.
//! * [`drive`]: alternating-polarity pulse trains and sine/triangle waveforms.
//! * [`sim`]: fixed-step RK4 integration, forward one-period moving average and
//!   limit-cycle detection.
//! * [`attractor`]: the period-averaged rate, fixed points and their stability,
//!   potential functions and Biolek parameter sweeps.

pub mod attractor;
pub mod csv;
pub mod device;
pub mod drive;
mod error;
mod numeric;
pub mod sim;
pub mod windows;

pub use error::{Error, Result};

/// States within this distance outside `[0, 1]` are clamped instead of rejected.
pub const DEFAULT_CLAMP_TOL: f64 = 1e-12;
