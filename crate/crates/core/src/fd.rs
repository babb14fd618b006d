//! Finite-difference policy shared by the derivative cross-checks.
//!
//! All first derivatives use symmetric differences with one Richardson
//! extrapolation level: `D(h) = (f(h) - f(-h)) / 2h` combined as
//! `(4 D(h/2) - D(h)) / 3`, which is fourth-order accurate. The default
//! step is `1e-5` scaled by the coordinate magnitude.

/// Default base step for first-derivative checks.
pub const DEFAULT_STEP: f64 = 1e-5;

/// Derivative of `f` at `t = 0` by symmetric differences with one
/// Richardson level.
pub fn richardson<F: Fn(f64) -> f64>(f: F, h: f64) -> f64 {
    let d = |h: f64| (f(h) - f(-h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// Step scaled to the magnitude of the coordinates being perturbed.
pub fn scaled_step(magnitude: f64) -> f64 {
    DEFAULT_STEP * magnitude.max(1.0)
}
