//! The two invariant families of (special) Lagrangian 3-folds, their
//! samplers, the flat Harvey-Lawson testbed in C^3, and the asymptotic
//! cone residuals.
//!
//! * Torus leaves: level sets `{mu_1 = c1, mu_2 = c2, Im(XY) = c3}` of the
//!   torus moment map plus one holomorphic phase function. Sampled by a
//!   gauge-fixed Newton solve (torus phases set to zero), continuation in
//!   the transverse slice, and an exact torus sweep.
//! * SO(3) leaves: orbits of the curve `(0, Y(s), 0, 0)`, `Re(Y^2) = c`,
//!   computed in closed form. `Im Omega` vanishes on them for every `a`;
//!   they are honestly Lagrangian only in the cone limit `a = 0`, where
//!   the orbit spheres cease to carry symplectic area. The sampler serves
//!   both regimes and the verification engine reports the difference.
//! * Flat Harvey-Lawson families: the SO(3)-invariant `Im(lambda^3) = c`
//!   family and the torus family in flat C^3, used to validate the engine
//!   before any conifold formula is trusted.

use crate::ambient::{lift_to_resolved, Generator, Patch, ResolvedPoint, XyuvPoint};
use crate::cy_structure::{displace, CyStructure};
use crate::fd;
use crate::moment_maps::{generator_vector_field, t2_moment};
use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SlagError {
    #[error("Newton iteration did not converge (infeasible constants or bad seed)")]
    NoConvergence,
    #[error("singular constraint Jacobian: leaf degenerates at this slice")]
    SingularJacobian,
    #[error("continuation stalled at slice {0}")]
    ContinuationStall(f64),
    #[error("SO(3) orbit degenerates at Y = 0 (cone vertex)")]
    DegenerateOrbit,
    #[error("{0}")]
    Infeasible(String),
    #[error(transparent)]
    Cy(#[from] crate::cy_structure::CyError),
}

/// Which hyperbola component of `Re(Y^2) = c` an SO(3) leaf follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

/// A family member: the family tag plus its real constants.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum LeafSpec {
    T2Leaf { c: [f64; 3] },
    So3Leaf { c: f64, branch: Branch },
    HlFlatSo3 { c: f64 },
    HlFlatTorus { c: [f64; 3] },
}

/// A sampled leaf: points, per-point tangent frames (holomorphic
/// components in the point's chart), and the sample parameters that
/// produced each point.
#[derive(Debug, Clone)]
pub struct Sample<P> {
    pub points: Vec<P>,
    pub frames: Vec<[[C64; 3]; 3]>,
    pub params: Vec<Vec<f64>>,
}

pub type LeafSample = Sample<ResolvedPoint>;
pub type FlatSample = Sample<[C64; 3]>;

impl<P> Sample<P> {
    fn with_capacity(n: usize) -> Self {
        Sample { points: Vec::with_capacity(n), frames: Vec::with_capacity(n), params: Vec::with_capacity(n) }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

// ---------------------------------------------------------------------------
// torus leaves
// ---------------------------------------------------------------------------

/// Residuals of the three leaf equations at `p`:
/// `(mu_1 - c1, mu_2 - c2, Im(XY) - c3)`.
pub fn t2_leaf_residual(s: &CyStructure, p: &ResolvedPoint, c: &[f64; 3]) -> Result<[f64; 3], SlagError> {
    let mu = t2_moment(s, p)?;
    let im_xy = (p.xyuv.x * p.xyuv.y).im;
    Ok([mu[0] - c[0], mu[1] - c[1], im_xy - c[2]])
}

/// Gauge-fixed Newton solve for a point of the leaf `{mu = (c1,c2),
/// Im(XY) = c3}` at transverse slice `|Y| = rho_y`.
///
/// The torus action rotates the phases of `U` and `Y` freely, so they are
/// pinned to zero and the unknowns are `(rho_u, Re lambda_+, Im lambda_+)`
/// — three real unknowns for the three equations. The Jacobian is a
/// Richardson finite difference.
pub fn t2_leaf_solve(
    s: &CyStructure,
    c: &[f64; 3],
    rho_y: f64,
    seed: (f64, C64),
) -> Result<ResolvedPoint, SlagError> {
    if rho_y <= 0.0 {
        return Err(SlagError::Infeasible("transverse slice |Y| must be positive".into()));
    }
    let build = |x: &[f64; 3]| -> ResolvedPoint {
        ResolvedPoint::from_patch_coords(
            Patch::HPlus,
            [C64::new(x[0], 0.0), C64::new(rho_y, 0.0), C64::new(x[1], x[2])],
        )
    };
    let f = |x: &[f64; 3]| -> Result<[f64; 3], SlagError> { t2_leaf_residual(s, &build(x), c) };
    let mut x = [seed.0.max(1e-8), seed.1.re, seed.1.im];
    let scale = 1.0 + c.iter().map(|v| v.abs()).fold(rho_y, f64::max);
    for _ in 0..60 {
        let r = f(&x)?;
        let rn = r.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if rn < 1e-12 * scale {
            return Ok(build(&x));
        }
        // FD Jacobian
        let mut jac = [[0.0f64; 3]; 3];
        for j in 0..3 {
            let h = fd::DEFAULT_STEP * x[j].abs().max(0.1);
            for (i, row) in jac.iter_mut().enumerate() {
                row[j] = fd::richardson(
                    |t| {
                        let mut xt = x;
                        xt[j] += t;
                        f(&xt).map(|r| r[i]).unwrap_or(f64::NAN)
                    },
                    h,
                );
            }
        }
        let step = solve3(&jac, &r).ok_or(SlagError::SingularJacobian)?;
        // damped update keeping rho_u positive
        let mut lam = 1.0;
        loop {
            let cand = [x[0] - lam * step[0], x[1] - lam * step[1], x[2] - lam * step[2]];
            if cand[0] > 0.0 {
                let cr = f(&cand)?;
                let crn = cr.iter().map(|v| v.abs()).fold(0.0, f64::max);
                if crn < rn || lam < 1e-3 {
                    x = cand;
                    break;
                }
            }
            lam *= 0.5;
            if lam < 1e-6 {
                return Err(SlagError::NoConvergence);
            }
        }
    }
    let r = f(&x)?;
    if r.iter().map(|v| v.abs()).fold(0.0, f64::max) < 1e-10 * scale {
        Ok(build(&x))
    } else {
        Err(SlagError::NoConvergence)
    }
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-14 {
        return None;
    }
    let mut out = [0.0; 3];
    for k in 0..3 {
        let mut m = *a;
        for row in 0..3 {
            m[row][k] = b[row];
        }
        let dk = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        out[k] = dk / det;
    }
    Some(out)
}

/// Default multi-seed attempt order for a fresh slice.
fn t2_seed_candidates(rho_y: f64) -> Vec<(f64, C64)> {
    let mut seeds = Vec::new();
    for &ru in &[rho_y, 0.5 * rho_y, 2.0 * rho_y] {
        for &lx in &[0.9, -0.9, 0.3, -0.3] {
            for &ly in &[0.4, -0.4, 0.05, -0.05] {
                seeds.push((ru, C64::new(lx, ly)));
            }
        }
    }
    seeds
}

/// Solve at a slice trying several seeds.
pub fn t2_leaf_solve_any(s: &CyStructure, c: &[f64; 3], rho_y: f64) -> Result<ResolvedPoint, SlagError> {
    let mut last = SlagError::NoConvergence;
    for seed in t2_seed_candidates(rho_y) {
        match t2_leaf_solve(s, c, rho_y, seed) {
            Ok(p) => return Ok(p),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// FD Jacobian of the three leaf functions `(mu_1, mu_2, Im XY)` with
/// respect to the six real chart coordinates at `p`. Rows are gradients;
/// full rank 3 away from the degeneration locus is the foliation
/// statement.
pub fn t2_constraint_jacobian(s: &CyStructure, p: &ResolvedPoint) -> Result<[[f64; 6]; 3], SlagError> {
    let funcs = |q: &ResolvedPoint| -> Result<[f64; 3], SlagError> {
        let mu = t2_moment(s, q)?;
        Ok([mu[0], mu[1], (q.xyuv.x * q.xyuv.y).im])
    };
    let scale = p.patch_coords().iter().map(|c| c.norm()).fold(1.0f64, f64::max);
    let h = fd::DEFAULT_STEP * scale;
    let mut m = [[0.0f64; 6]; 3];
    for k in 0..6 {
        let mut dir = [C64::default(); 3];
        dir[k / 2] = if k % 2 == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
        for i in 0..3 {
            m[i][k] = fd::richardson(
                |t| funcs(&displace(p, &dir, t)).map(|f| f[i]).unwrap_or(f64::NAN),
                h,
            );
        }
    }
    Ok(m)
}

fn real6(v: &[C64; 3]) -> [f64; 6] {
    [v[0].re, v[0].im, v[1].re, v[1].im, v[2].re, v[2].im]
}

fn complex3(v: &[f64; 6]) -> [C64; 3] {
    [C64::new(v[0], v[1]), C64::new(v[2], v[3]), C64::new(v[4], v[5])]
}

/// Project a trial direction onto the kernel of the constraint Jacobian:
/// `v - M^T (M M^T)^{-1} M v`. Returns `None` when `M M^T` is singular
/// (rank drop — degenerate leaf point).
fn kernel_project(m: &[[f64; 6]; 3], trial: &[f64; 6]) -> Option<[f64; 6]> {
    let mut mv = [0.0f64; 3];
    for i in 0..3 {
        for k in 0..6 {
            mv[i] += m[i][k] * trial[k];
        }
    }
    let mut mmt = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..6 {
                mmt[i][j] += m[i][k] * m[j][k];
            }
        }
    }
    let coef = solve3(&mmt, &mv)?;
    let mut out = *trial;
    for k in 0..6 {
        for i in 0..3 {
            out[k] -= m[i][k] * coef[i];
        }
    }
    Some(out)
}

/// Tangent frame of a torus leaf at a solved point: the two torus fields
/// plus a transverse direction obtained by projecting the slice direction
/// onto the kernel of the constraint Jacobian.
pub fn t2_leaf_frame(s: &CyStructure, p: &ResolvedPoint) -> Result<[[C64; 3]; 3], SlagError> {
    let v1 = generator_vector_field(Generator::B1, p).components;
    let v2 = generator_vector_field(Generator::B2, p).components;
    let m = t2_constraint_jacobian(s, p)?;
    // trial: the slice direction d/d|Y| (second chart coordinate, real axis
    // in the gauge; any direction with a transverse component works)
    let trial = real6(&[C64::default(), C64::new(1.0, 0.0), C64::default()]);
    let mut v3 = kernel_project(&m, &trial).ok_or(SlagError::SingularJacobian)?;
    // remove the components along the orbit directions so the frame is
    // honestly 3-dimensional
    for w in [&v1, &v2] {
        let wr = real6(w);
        let wn: f64 = wr.iter().map(|x| x * x).sum();
        if wn > 1e-20 {
            let dot: f64 = v3.iter().zip(wr.iter()).map(|(a, b)| a * b).sum();
            for k in 0..6 {
                v3[k] -= dot / wn * wr[k];
            }
        }
    }
    Ok([v1, v2, complex3(&v3)])
}

/// Sample a torus leaf: continuation of the gauge-fixed solve across
/// `n_transverse` slices of `|Y|` in `rho_y_range`, then an exact torus
/// sweep of `n_theta1 x n_theta2` phases. The transverse frame vector is
/// pushed through the (diagonal, holomorphic) torus action exactly.
pub fn t2_leaf_sample(
    s: &CyStructure,
    c: &[f64; 3],
    n_theta1: usize,
    n_theta2: usize,
    n_transverse: usize,
    rho_y_range: (f64, f64),
) -> Result<LeafSample, SlagError> {
    let (lo, hi) = rho_y_range;
    assert!(lo > 0.0 && hi > lo && n_transverse > 0);
    // continuation backbone in log-spaced slices, warm-started
    let mut backbone: Vec<(f64, ResolvedPoint)> = Vec::with_capacity(n_transverse);
    let mut warm: Option<(f64, C64)> = None;
    for k in 0..n_transverse {
        let f = if n_transverse == 1 { 0.5 } else { k as f64 / (n_transverse - 1) as f64 };
        let rho_y = lo * (hi / lo).powf(f);
        let solved = match warm {
            Some(seed) => t2_leaf_solve(s, c, rho_y, seed)
                .or_else(|_| t2_leaf_solve_any(s, c, rho_y)),
            None => t2_leaf_solve_any(s, c, rho_y),
        };
        match solved {
            Ok(p) => {
                let [u, _, l] = p.patch_coords();
                warm = Some((u.re, l));
                backbone.push((rho_y, p));
            }
            Err(_) if backbone.is_empty() => continue, // slice infeasible, try next
            Err(_) => return Err(SlagError::ContinuationStall(rho_y)),
        }
    }
    if backbone.is_empty() {
        return Err(SlagError::Infeasible(format!(
            "no leaf point found for constants {c:?} in slice range {rho_y_range:?}"
        )));
    }
    let mut out = LeafSample::with_capacity(backbone.len() * n_theta1 * n_theta2);
    for (rho_y, p0) in &backbone {
        let frame0 = t2_leaf_frame(s, p0)?;
        for i1 in 0..n_theta1 {
            let th1 = std::f64::consts::TAU * i1 as f64 / n_theta1 as f64;
            for i2 in 0..n_theta2 {
                let th2 = std::f64::consts::TAU * i2 as f64 / n_theta2 as f64;
                // the torus action is diagonal in the H+ chart:
                // (U, Y, lambda) -> (e^{i th2} U, e^{i th1} Y,
                // e^{-i(th1+th2)} lambda). Building the image directly in
                // H+ keeps point and frame in one chart even when
                // |lambda| = 1 and the blow-down patch choice is unstable.
                let ph = |ang: f64| C64::new(0.0, ang).exp();
                let [u0, y0, l0] = p0.patch_coords();
                let p = ResolvedPoint::from_patch_coords(
                    Patch::HPlus,
                    [ph(th2) * u0, ph(th1) * y0, ph(-(th1 + th2)) * l0],
                );
                let v3 = [
                    ph(th2) * frame0[2][0],
                    ph(th1) * frame0[2][1],
                    ph(-(th1 + th2)) * frame0[2][2],
                ];
                let v1 = generator_vector_field(Generator::B1, &p).components;
                let v2 = generator_vector_field(Generator::B2, &p).components;
                out.points.push(p);
                out.frames.push([v1, v2, v3]);
                out.params.push(vec![th1, th2, *rho_y]);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// SO(3) leaves
// ---------------------------------------------------------------------------

/// Unit vector `n` on S^2 by the Fibonacci spiral, avoiding the exact
/// poles.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let th = golden * k as f64;
            [r * th.cos(), r * th.sin(), z]
        })
        .collect()
}

/// The hyperbola branch `Re(Y^2) = c` as `s -> Y(s)`, with its velocity.
/// For `c > 0` the branches are `u = +-sqrt(c) cosh s`; for `c < 0` they
/// are `v = +-sqrt(-c) cosh s`; for `c = 0` they are the two diagonal
/// lines, parametrized as `t e^{+- i pi/4}` with `t = sinh s` (both signs
/// of `t` covered, vertex excluded by the sampler).
pub fn so3_profile(c: f64, branch: Branch, s: f64) -> (C64, C64) {
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    if c > 0.0 {
        let q = c.sqrt();
        (
            C64::new(sign * q * s.cosh(), q * s.sinh()),
            C64::new(sign * q * s.sinh(), q * s.cosh()),
        )
    } else if c < 0.0 {
        let q = (-c).sqrt();
        (
            C64::new(q * s.sinh(), sign * q * s.cosh()),
            C64::new(q * s.cosh(), sign * q * s.sinh()),
        )
    } else {
        let dir = C64::new(1.0, sign) / 2f64.sqrt();
        (dir * s.sinh(), dir * s.cosh())
    }
}

/// The orbit map: the SO(3) orbit of `(0, Y, 0, 0)` consists of the points
/// `Y * P (1, -i n) / sqrt(2)` for unit `n` in R^3 — an exact rotation of
/// the start point for every `n`, with `r^2 = |Y|^2` constant on the
/// orbit.
pub fn so3_orbit_point(y: C64, n: &[f64; 3]) -> XyuvPoint {
    // w = P z with z = (1, -i n1, -i n2, -i n3)/sqrt(2)
    let z = crate::ambient::ZPoint([
        C64::new(1.0 / 2f64.sqrt(), 0.0),
        C64::new(0.0, -n[0] / 2f64.sqrt()),
        C64::new(0.0, -n[1] / 2f64.sqrt()),
        C64::new(0.0, -n[2] / 2f64.sqrt()),
    ]);
    let w = crate::ambient::to_xyuv(&z);
    XyuvPoint::new(y * w.x, y * w.y, y * w.u, y * w.v)
}

/// Sample an SO(3) leaf: `n_s` profile values `s` in `s_range` crossed
/// with a Fibonacci sphere of `n_sphere` orbit directions. Frames are the
/// `A~2`, `A~3` generator fields plus the exact profile velocity (the
/// CP^1 datum is constant along the profile curve, so the velocity has no
/// `lambda` component).
pub fn so3_leaf_sample(
    s: &CyStructure,
    c: f64,
    branch: Branch,
    n_s: usize,
    n_sphere: usize,
    s_range: (f64, f64),
) -> Result<LeafSample, SlagError> {
    let _ = s;
    let sphere = fibonacci_sphere(n_sphere);
    let mut out = LeafSample::with_capacity(n_s * n_sphere);
    for k in 0..n_s {
        let f = if n_s == 1 { 0.5 } else { k as f64 / (n_s - 1) as f64 };
        let sv = s_range.0 + (s_range.1 - s_range.0) * f;
        let (y, ydot) = so3_profile(c, branch, sv);
        if y.norm() < 1e-12 {
            // cone vertex on the c = 0 lines
            if c == 0.0 {
                continue;
            }
            return Err(SlagError::DegenerateOrbit);
        }
        for (j, n) in sphere.iter().enumerate() {
            let w = so3_orbit_point(y, n);
            let p = lift_to_resolved(&w).map_err(|_| SlagError::DegenerateOrbit)?;
            let v1 = generator_vector_field(Generator::A2, &p).components;
            let v2 = generator_vector_field(Generator::A3, &p).components;
            // profile direction: d/ds of Y(s) * w_hat(n); linear in Y, so the
            // xyuv velocity is (ydot/y) * w and the CP^1 datum is frozen
            let scale = ydot / y;
            let v3 = match p.patch {
                Patch::HPlus => [scale * w.u, scale * w.y, C64::default()],
                Patch::HMinus => [scale * w.x, scale * w.v, C64::default()],
            };
            out.points.push(p);
            out.frames.push([v1, v2, v3]);
            out.params.push(vec![sv, j as f64]);
        }
    }
    if out.is_empty() {
        return Err(SlagError::Infeasible("empty SO(3) sample".into()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// flat Harvey-Lawson testbed in C^3
// ---------------------------------------------------------------------------

/// The SO(3)-invariant flat family: `lambda * u` with `u` in S^2 and
/// `Im(lambda^3) = c`. For `c = 0` the curve is the real axis (a special
/// Lagrangian plane); for `c != 0`, `lambda = (c / sin 3phi)^{1/3}
/// e^{i phi}` sweeps one `R x S^2` component as `phi` runs over
/// `(0, pi/3)`.
pub fn hl_flat_so3(c: f64, n_lambda: usize, n_sphere: usize) -> Result<FlatSample, SlagError> {
    let sphere = fibonacci_sphere(n_sphere);
    let lambdas: Vec<(C64, C64)> = if c == 0.0 {
        // lambda real, lambda-dot = 1
        (0..n_lambda)
            .map(|k| {
                let t = 0.3 + 2.0 * k as f64 / n_lambda.max(1) as f64;
                (C64::new(t, 0.0), C64::new(1.0, 0.0))
            })
            .collect()
    } else {
        let sign = c.signum();
        let cc = c.abs();
        (0..n_lambda)
            .map(|k| {
                let f = (k as f64 + 0.5) / n_lambda as f64;
                let phi = sign * (0.05 + (std::f64::consts::FRAC_PI_3 - 0.1) * f);
                let rho = (cc / (3.0 * phi.abs()).sin().abs()).powf(1.0 / 3.0);
                let lam = C64::from_polar(rho, phi);
                // velocity d lambda / d phi with Im(lambda^3) held fixed:
                // 3 lambda^2 lambda-dot purely real, magnitude from
                // d rho/d phi = -rho cos(3 phi) / sin(3 phi)
                let drho = -rho * (3.0 * phi).cos() / (3.0 * phi).sin();
                let ldot = C64::from_polar(drho, phi) + C64::new(0.0, 1.0) * lam;
                (lam, ldot)
            })
            .collect()
    };
    let mut out = FlatSample::with_capacity(lambdas.len() * n_sphere);
    for (lam, ldot) in &lambdas {
        for n in &sphere {
            let u = *n;
            // two tangent directions of S^2 at u
            let (t1, t2) = sphere_tangents(&u);
            let point = [C64::new(u[0], 0.0) * lam, C64::new(u[1], 0.0) * lam, C64::new(u[2], 0.0) * lam];
            let v1 = [C64::new(t1[0], 0.0) * lam, C64::new(t1[1], 0.0) * lam, C64::new(t1[2], 0.0) * lam];
            let v2 = [C64::new(t2[0], 0.0) * lam, C64::new(t2[1], 0.0) * lam, C64::new(t2[2], 0.0) * lam];
            let v3 = [C64::new(u[0], 0.0) * ldot, C64::new(u[1], 0.0) * ldot, C64::new(u[2], 0.0) * ldot];
            out.points.push(point);
            out.frames.push([v1, v2, v3]);
            out.params.push(vec![lam.re, lam.im]);
        }
    }
    Ok(out)
}

fn sphere_tangents(u: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pick = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = pick[0] * u[0] + pick[1] * u[1] + pick[2] * u[2];
    let mut t1 = [pick[0] - dot * u[0], pick[1] - dot * u[1], pick[2] - dot * u[2]];
    let n1 = (t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]).sqrt();
    for x in t1.iter_mut() {
        *x /= n1;
    }
    let t2 = [
        u[1] * t1[2] - u[2] * t1[1],
        u[2] * t1[0] - u[0] * t1[2],
        u[0] * t1[1] - u[1] * t1[0],
    ];
    (t1, t2)
}

/// The flat torus family: `|z1|^2 - |z2|^2 = c2`, `|z1|^2 - |z3|^2 = c3`,
/// `Im(z1 z2 z3) = c1`. Gauge-fixed construction (phases of `z1, z2`
/// zero) parametrized by `rho_1`, then swept by the exact torus action
/// `(e^{i t1} z1, e^{i t2} z2, e^{-i(t1+t2)} z3)`.
pub fn hl_flat_torus(
    c: &[f64; 3],
    n_theta1: usize,
    n_theta2: usize,
    n_rho: usize,
) -> Result<FlatSample, SlagError> {
    let (c1, c2, c3) = (c[0], c[1], c[2]);
    let rho_min = (c2.max(c3).max(0.0)).sqrt() + 0.25;
    let mut out = FlatSample::with_capacity(n_rho * n_theta1 * n_theta2);
    for k in 0..n_rho {
        let f = if n_rho == 1 { 0.5 } else { k as f64 / (n_rho - 1) as f64 };
        let r1 = rho_min + 2.0 * f;
        let r2 = (r1 * r1 - c2).sqrt();
        let r3 = (r1 * r1 - c3).sqrt();
        let prod = r1 * r2 * r3;
        if prod <= c1.abs() {
            continue;
        }
        let psi = (c1 / prod).asin();
        let base = |rr1: f64| -> [C64; 3] {
            let rr2 = (rr1 * rr1 - c2).sqrt();
            let rr3 = (rr1 * rr1 - c3).sqrt();
            let pp = (c1 / (rr1 * rr2 * rr3)).asin();
            [C64::new(rr1, 0.0), C64::new(rr2, 0.0), C64::from_polar(rr3, pp)]
        };
        let p0 = base(r1);
        let _ = psi;
        // curve direction by Richardson FD of the construction map
        let h = fd::DEFAULT_STEP;
        let dp: [C64; 3] = std::array::from_fn(|i| {
            let re = fd::richardson(|t| base(r1 + t)[i].re, h);
            let im = fd::richardson(|t| base(r1 + t)[i].im, h);
            C64::new(re, im)
        });
        for i1 in 0..n_theta1 {
            let th1 = std::f64::consts::TAU * i1 as f64 / n_theta1 as f64;
            for i2 in 0..n_theta2 {
                let th2 = std::f64::consts::TAU * i2 as f64 / n_theta2 as f64;
                let ph = [
                    C64::new(0.0, th1).exp(),
                    C64::new(0.0, th2).exp(),
                    C64::new(0.0, -(th1 + th2)).exp(),
                ];
                let z: [C64; 3] = std::array::from_fn(|i| ph[i] * p0[i]);
                let i = C64::new(0.0, 1.0);
                let v1 = [i * z[0], C64::default(), -i * z[2]];
                let v2 = [C64::default(), i * z[1], -i * z[2]];
                let v3: [C64; 3] = std::array::from_fn(|j| ph[j] * dp[j]);
                out.points.push(z);
                out.frames.push([v1, v2, v3]);
                out.params.push(vec![th1, th2, r1]);
            }
        }
    }
    if out.is_empty() {
        return Err(SlagError::Infeasible(format!("flat torus constants {c:?} infeasible")));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// asymptotic cones
// ---------------------------------------------------------------------------

/// Which asymptotic cone system to test against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ConeFamily {
    T2,
    So3,
}

/// Scale-invariant residual of the asymptotic cone equations at a point.
///
/// Torus cone: `|X|^2 = |Y|^2`, `|U|^2 = |V|^2`, `Im(XY) = 0`, each
/// normalized by `r^2`. The same equations in `z` coordinates are
/// `Im(z0 conj(z1)) = Im(z2 conj(z3)) = Im(z0^2 + z1^2) = 0`; both
/// evaluations are computed and must agree to rounding.
///
/// SO(3) cone: `Re(Y^2) = 0` in orbit terms, whose SO(3)-invariant form is
/// `Re((X+Y)^2) = 0` (since `z0 = (X+Y)/sqrt(2)` is fixed by the action
/// and `Y^2 = 2 z0^2` on the orbit); normalized by `r^2`.
pub fn cone_residual(family: ConeFamily, w: &XyuvPoint) -> f64 {
    let rsq = w.radius_sq();
    if rsq == 0.0 {
        return 0.0;
    }
    match family {
        ConeFamily::T2 => {
            let e1 = w.x.norm_sqr() - w.y.norm_sqr();
            let e2 = w.v.norm_sqr() - w.u.norm_sqr();
            let e3 = (w.x * w.y).im;
            let z = crate::ambient::to_z(w).0;
            let z1 = -2.0 * (z[0] * z[1].conj()).im;
            let z2 = -2.0 * (z[2] * z[3].conj()).im;
            let z3 = 0.5 * (z[0] * z[0] + z[1] * z[1]).im;
            debug_assert!((e1 - z1).abs() < 1e-12 * rsq.max(1.0));
            debug_assert!((e2 - z2).abs() < 1e-12 * rsq.max(1.0));
            debug_assert!((e3 - z3).abs() < 1e-12 * rsq.max(1.0));
            e1.abs().max(e2.abs()).max(e3.abs()) / rsq
        }
        ConeFamily::So3 => {
            let s = w.x + w.y;
            (s * s).re.abs() / rsq
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment_maps::so3_moment;
    use rand::Rng;
    use rand::SeedableRng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn t2_residual_vanishes_at_own_level() {
        let s = CyStructure::new(1.0);
        let p = ResolvedPoint::from_patch_coords(
            Patch::HPlus,
            [C64::new(0.7, 0.0), C64::new(1.1, 0.0), C64::new(0.3, -0.5)],
        );
        let mu = t2_moment(&s, &p).unwrap();
        let cc = [mu[0], mu[1], (p.xyuv.x * p.xyuv.y).im];
        let r = t2_leaf_residual(&s, &p, &cc).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn t2_solve_generic() {
        let s = CyStructure::new(1.0);
        let cc = [0.3, 0.1, 0.2];
        let p = t2_leaf_solve_any(&s, &cc, 1.2).unwrap();
        let r = t2_leaf_residual(&s, &p, &cc).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-10), "{r:?}");
        // gauge: U and Y real positive
        let [u, y, _] = p.patch_coords();
        assert!(u.im.abs() < 1e-14 && y.im.abs() < 1e-14 && u.re > 0.0 && y.re > 0.0);
    }

    #[test]
    fn t2_solve_cone_case() {
        // a = 0, c = 0: the exact cone |X| = |Y|, |U| = |V|, XY real
        let s = CyStructure::new(0.0);
        let p = t2_leaf_solve_any(&s, &[0.0, 0.0, 0.0], 1.0).unwrap();
        assert!(cone_residual(ConeFamily::T2, &p.xyuv) < 1e-10);
    }

    #[test]
    fn t2_sample_residuals() {
        let s = CyStructure::new(1.0);
        let cc = [0.3, 0.1, 0.2];
        let sample = t2_leaf_sample(&s, &cc, 4, 4, 3, (0.8, 2.0)).unwrap();
        assert!(!sample.is_empty());
        for p in &sample.points {
            let r = t2_leaf_residual(&s, p, &cc).unwrap();
            assert!(r.iter().all(|v| v.abs() < 1e-9), "{r:?}");
        }
    }

    #[test]
    fn t2_frame_is_tangent() {
        // directional derivative of each constraint along each frame
        // vector vanishes
        let s = CyStructure::new(1.0);
        let cc = [0.3, 0.1, 0.2];
        let p = t2_leaf_solve_any(&s, &cc, 1.2).unwrap();
        let frame = t2_leaf_frame(&s, &p).unwrap();
        for v in &frame {
            let h = fd::DEFAULT_STEP;
            for i in 0..3 {
                let d = fd::richardson(
                    |t| t2_leaf_residual(&s, &displace(&p, v, t), &cc).unwrap()[i],
                    h,
                );
                assert!(d.abs() < 1e-6, "constraint {i} derivative {d:e}");
            }
        }
    }

    #[test]
    fn t2_bolt_touching_spec() {
        // c1 = c2, c3 = 0 leaves meet the bolt in a circle; generic points
        // still solve cleanly
        let s = CyStructure::new(1.0);
        let cc = [0.8, 0.8, 0.0];
        let sample = t2_leaf_sample(&s, &cc, 3, 3, 3, (0.3, 1.5)).unwrap();
        for p in &sample.points {
            let r = t2_leaf_residual(&s, p, &cc).unwrap();
            assert!(r.iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn foliation_jacobian_rank() {
        let s = CyStructure::new(1.0);
        let mut r = rng(3);
        let mut full_rank = 0;
        let total = 100;
        for _ in 0..total {
            let coords: [C64; 3] = std::array::from_fn(|_| {
                C64::new(r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5))
            });
            let p = ResolvedPoint::from_patch_coords(Patch::HPlus, coords);
            let m = t2_constraint_jacobian(&s, &p).unwrap();
            // rank via the Gram determinant of the rows
            let mut g = [[0.0f64; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..6 {
                        g[i][j] += m[i][k] * m[j][k];
                    }
                }
            }
            let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
                - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
            if det.abs() > 1e-16 {
                full_rank += 1;
            }
        }
        assert!(full_rank * 100 >= total * 99, "rank-3 at {full_rank}/{total}");
    }

    #[test]
    fn so3_profile_invariants() {
        for &(cc, br) in &[(1.0, Branch::Plus), (1.0, Branch::Minus), (0.5, Branch::Plus), (-2.0, Branch::Minus)] {
            for k in 0..20 {
                let s = -2.0 + 4.0 * k as f64 / 19.0;
                let (y, ydot) = so3_profile(cc, br, s);
                assert!(((y * y).re - cc).abs() < 1e-12 * (1.0 + cc.abs()), "Re Y^2");
                // velocity consistency by FD
                let h = 1e-6;
                let (yp, _) = so3_profile(cc, br, s + h);
                let (ym, _) = so3_profile(cc, br, s - h);
                assert!(((yp - ym) / (2.0 * h) - ydot).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn so3_cone_profile() {
        let (y, _) = so3_profile(0.0, Branch::Plus, 0.7);
        assert!((y * y).re.abs() < 1e-14);
        let p = so3_orbit_point(y, &[0.3, -0.5, (1.0f64 - 0.34).sqrt()]);
        assert!(cone_residual(ConeFamily::So3, &p) < 1e-14);
    }

    #[test]
    fn so3_orbit_point_geometry() {
        let y = C64::new(1.3, 0.4);
        for n in fibonacci_sphere(30) {
            let w = so3_orbit_point(y, &n);
            // r^2 = |Y|^2, on the quadric, and Y^2 = 2 z0^2
            assert!((w.radius_sq() - y.norm_sqr()).abs() < 1e-12);
            assert!(w.quadric_defect().norm() < 1e-13);
            let z0 = (w.x + w.y) / 2f64.sqrt();
            assert!((2.0 * z0 * z0 - y * y).norm() < 1e-12);
        }
        // n = (1,0,0) recovers the start point (0, Y, 0, 0)
        let w = so3_orbit_point(y, &[1.0, 0.0, 0.0]);
        assert!(w.x.norm() < 1e-15 && w.u.norm() < 1e-15 && w.v.norm() < 1e-15);
        assert!((w.y - y).norm() < 1e-15);
    }

    #[test]
    fn so3_sample_moment_and_radius() {
        // the family sits on a coadjoint sphere of radius a^2 (zero level
        // exactly at a = 0), r^2 = |Y|^2 constant on orbits, min over the
        // branch equal to c
        for &a in &[0.0, 1.0] {
            let s = CyStructure::new(a);
            let sample = so3_leaf_sample(&s, 1.0, Branch::Plus, 7, 20, (-1.5, 1.5)).unwrap();
            let mut min_rsq = f64::INFINITY;
            for p in &sample.points {
                let mu = so3_moment(&s, p).unwrap();
                let norm = mu.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((norm - a * a).abs() < 1e-9);
                min_rsq = min_rsq.min(p.radius_sq());
            }
            assert!((min_rsq - 1.0).abs() < 1e-10, "min r^2 = {min_rsq}");
        }
    }

    #[test]
    fn so3_leaf_avoids_bolt() {
        let s = CyStructure::new(1.0);
        let sample = so3_leaf_sample(&s, 0.5, Branch::Minus, 5, 10, (-2.0, 2.0)).unwrap();
        for p in &sample.points {
            assert!(p.fiber_norm_sq() > 0.0 || p.radius_sq() > 0.0);
            assert!(p.radius_sq() >= 0.5 - 1e-12);
        }
    }

    #[test]
    fn so3_cone_residual_decay() {
        // residual = |c| / r^2 exactly
        let cc = 1.0;
        for &sv in &[0.5, 1.5, 3.0] {
            let (y, _) = so3_profile(cc, Branch::Plus, sv);
            let w = so3_orbit_point(y, &[0.0, 1.0, 0.0]);
            let res = cone_residual(ConeFamily::So3, &w);
            assert!((res - cc / w.radius_sq()).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_so3_family_equations() {
        let sample = hl_flat_so3(1.0, 8, 12).unwrap();
        for z in &sample.points {
            // z = lambda * u with u a real unit vector, so
            // sum z_j^2 = lambda^2 and lambda^3 = (lambda^2)^{3/2} up to
            // the branch; the constructed phases stay within it
            let l2: C64 = z.iter().map(|w| w * w).sum();
            let l3 = l2.powf(1.5);
            assert!((l3.im.abs() - 1.0).abs() < 1e-10, "Im lambda^3 = {}", l3.im);
        }
    }

    #[test]
    fn flat_so3_plane_case() {
        let sample = hl_flat_so3(0.0, 5, 10).unwrap();
        for z in &sample.points {
            assert!(z.iter().all(|w| w.im.abs() < 1e-14), "not a real point");
        }
    }

    #[test]
    fn flat_torus_family_equations() {
        let cc = [0.0, 1.0, 1.0];
        let sample = hl_flat_torus(&cc, 4, 4, 3).unwrap();
        for z in &sample.points {
            let e1 = z[0].norm_sqr() - z[1].norm_sqr() - cc[1];
            let e2 = z[0].norm_sqr() - z[2].norm_sqr() - cc[2];
            let e3 = (z[0] * z[1] * z[2]).im - cc[0];
            assert!(e1.abs() < 1e-10 && e2.abs() < 1e-10 && e3.abs() < 1e-10);
        }
    }

    #[test]
    fn cone_residual_t2_zero_on_cone() {
        let w = XyuvPoint::new(c(1.0), c(1.0), c(1.0), c(1.0));
        assert!(cone_residual(ConeFamily::T2, &w) < 1e-15);
    }

    #[test]
    fn t2_cone_residual_decreases_along_leaf() {
        let s = CyStructure::new(1.0);
        let cc = [0.3, 0.1, 0.2];
        let mut prev = f64::INFINITY;
        let mut warm: Option<(f64, C64)> = None;
        for &target in &[10.0f64, 100.0, 1000.0] {
            // slice |Y| ~ r / sqrt(2 (1 + rho)); iterate once to land near r
            let rho_y = target / 2f64.sqrt();
            let p = match warm {
                Some(seed) => t2_leaf_solve(&s, &cc, rho_y, seed).unwrap(),
                None => t2_leaf_solve_any(&s, &cc, rho_y).unwrap(),
            };
            let [u, _, l] = p.patch_coords();
            warm = Some((u.re, l));
            let res = cone_residual(ConeFamily::T2, &p.xyuv);
            assert!(res < prev, "residual not decreasing: {res} vs {prev}");
            prev = res;
        }
    }
}
