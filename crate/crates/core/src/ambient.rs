//! Ambient coordinates on the conifold and its small resolution.
//!
//! The singular quadric `XY - UV = 0` in the `(X,Y,U,V)` coordinates is
//! related to the standard quadric coordinates `(z0,..,z3)` by the unitary
//! change of variables `P`. The resolution attaches a CP^1 datum
//! `[lambda_1 : lambda_2]` killed by the matrix `[[X,U],[V,Y]]`, with two
//! inhomogeneous patches `H+` (coordinates `(U,Y,lambda_+)`) and `H-`
//! (coordinates `(X,V,lambda_-)`).
//!
//! The module also carries the SO(4) action conjugated to the new
//! variables, the five Lie algebra generators used by the torus and SO(3)
//! families, and their exact one-parameter flows.

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Relative tolerance for on-variety membership checks, scaled by `r^2`.
pub const ON_VARIETY_TOL: f64 = 1e-9;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[derive(Debug, Error)]
pub enum AmbientError {
    #[error("the origin has no unique lift to the resolved conifold")]
    Origin,
    #[error("point is off the quadric: |XY - UV| = {defect:.3e} exceeds {tol:.3e}")]
    NotOnQuadric { defect: f64, tol: f64 },
    #[error("patch transition undefined: inhomogeneous coordinate would be infinite")]
    PatchBoundary,
    #[error("matrix is not orthogonal: |g^T g - I| = {0:.3e}")]
    NotOrthogonal(f64),
    #[error("matrix is orthogonal but not special: det = {0:.6}")]
    NotSpecialOrthogonal(f64),
}

// ---------------------------------------------------------------------------
// small matrix helpers (4x4 complex / real, fixed size)
// ---------------------------------------------------------------------------

pub type CMat4 = [[C64; 4]; 4];
pub type RMat4 = [[f64; 4]; 4];

pub fn cmat4_mul_vec(m: &CMat4, v: &[C64; 4]) -> [C64; 4] {
    let mut out = [C64::default(); 4];
    for i in 0..4 {
        let mut s = C64::default();
        for j in 0..4 {
            s += m[i][j] * v[j];
        }
        out[i] = s;
    }
    out
}

pub fn cmat4_mul(a: &CMat4, b: &CMat4) -> CMat4 {
    let mut out = [[C64::default(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = C64::default();
            for k in 0..4 {
                s += a[i][k] * b[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn cmat4_adjoint(m: &CMat4) -> CMat4 {
    let mut out = [[C64::default(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = m[j][i].conj();
        }
    }
    out
}

fn rmat_to_cmat(m: &RMat4) -> CMat4 {
    let mut out = [[C64::default(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = c(m[i][j]);
        }
    }
    out
}

fn rmat4_mul(a: &RMat4, b: &RMat4) -> RMat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// The unitary change of variables from `(z0,..,z3)` to `(X,Y,U,V)`.
pub fn p_matrix() -> CMat4 {
    let s = c(1.0 / 2f64.sqrt());
    [
        [s, -I * s, c(0.0), c(0.0)],
        [s, I * s, c(0.0), c(0.0)],
        [c(0.0), c(0.0), -I * s, s],
        [c(0.0), c(0.0), -I * s, -s],
    ]
}

/// `P^{-1} = P^*`, the conjugate transpose of [`p_matrix`].
pub fn p_star() -> CMat4 {
    cmat4_adjoint(&p_matrix())
}

// ---------------------------------------------------------------------------
// points
// ---------------------------------------------------------------------------

/// A point of C^4 in the standard quadric coordinates `z0,..,z3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZPoint(pub [C64; 4]);

impl ZPoint {
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `sum z_i^2`, the quadric form whose zero set is the conifold.
    pub fn quadric_form(&self) -> C64 {
        self.0.iter().map(|z| z * z).sum()
    }
}

/// A point of C^4 in the `(X,Y,U,V)` coordinates, where the conifold is
/// `XY - UV = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyuvPoint {
    pub x: C64,
    pub y: C64,
    pub u: C64,
    pub v: C64,
}

impl XyuvPoint {
    pub fn new(x: C64, y: C64, u: C64, v: C64) -> Self {
        Self { x, y, u, v }
    }

    pub fn from_array(w: [C64; 4]) -> Self {
        Self { x: w[0], y: w[1], u: w[2], v: w[3] }
    }

    pub fn to_array(&self) -> [C64; 4] {
        [self.x, self.y, self.u, self.v]
    }

    /// `r^2 = |X|^2 + |Y|^2 + |U|^2 + |V|^2`.
    pub fn radius_sq(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.u.norm_sqr() + self.v.norm_sqr()
    }

    /// `XY - UV`; vanishes on the conifold.
    pub fn quadric_defect(&self) -> C64 {
        self.x * self.y - self.u * self.v
    }

    pub fn is_on_quadric(&self, tol: f64) -> bool {
        self.quadric_defect().norm() <= tol * self.radius_sq()
    }
}

/// Change of variables `(z0,..,z3) -> (X,Y,U,V)` by the unitary matrix `P`.
pub fn to_xyuv(z: &ZPoint) -> XyuvPoint {
    XyuvPoint::from_array(cmat4_mul_vec(&p_matrix(), &z.0))
}

/// Inverse change of variables, an exact application of `P^*`.
pub fn to_z(w: &XyuvPoint) -> ZPoint {
    ZPoint(cmat4_mul_vec(&p_star(), &w.to_array()))
}

/// Homogeneous coordinates `[lambda_1 : lambda_2]` on CP^1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cp1Point {
    pub l1: C64,
    pub l2: C64,
}

impl Cp1Point {
    pub fn new(l1: C64, l2: C64) -> Self {
        debug_assert!(l1.norm_sqr() + l2.norm_sqr() > 0.0);
        Self { l1, l2 }
    }

    /// `lambda_+ = lambda_2 / lambda_1` (patch `H+`).
    pub fn lambda_plus(&self) -> C64 {
        self.l2 / self.l1
    }

    /// `lambda_- = lambda_1 / lambda_2` (patch `H-`).
    pub fn lambda_minus(&self) -> C64 {
        self.l1 / self.l2
    }

    /// `|lambda_2|^2 / (|lambda_1|^2 + |lambda_2|^2)`, the height function of
    /// the circle action on CP^1. Smooth on both patches.
    pub fn s2_height(&self) -> f64 {
        let n1 = self.l1.norm_sqr();
        let n2 = self.l2.norm_sqr();
        n2 / (n1 + n2)
    }

    /// Projective distance: sine of the Fubini-Study angle between two
    /// representatives. Zero iff the points agree in CP^1.
    pub fn projective_dist(&self, other: &Cp1Point) -> f64 {
        let cross = self.l1 * other.l2 - self.l2 * other.l1;
        let n = (self.l1.norm_sqr() + self.l2.norm_sqr())
            * (other.l1.norm_sqr() + other.l2.norm_sqr());
        cross.norm() / n.sqrt()
    }
}

/// The two inhomogeneous charts of CP^1 and the induced charts on the
/// resolved conifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Patch {
    HPlus,
    HMinus,
}

impl Patch {
    pub fn other(&self) -> Patch {
        match self {
            Patch::HPlus => Patch::HMinus,
            Patch::HMinus => Patch::HPlus,
        }
    }
}

/// A point of the resolved conifold: ambient coordinates plus the CP^1
/// datum and the chart it is currently expressed in.
///
/// In `H+` the local coordinates are `(U, Y, lambda_+)`, in `H-` they are
/// `(X, V, lambda_-)`. On the overlap
/// `(X, V, lambda_-) = (-lambda_+ U, -lambda_+ Y, 1/lambda_+)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedPoint {
    pub xyuv: XyuvPoint,
    pub cp1: Cp1Point,
    pub patch: Patch,
}

impl ResolvedPoint {
    /// Local coordinates in the point's current chart.
    pub fn patch_coords(&self) -> [C64; 3] {
        match self.patch {
            Patch::HPlus => [self.xyuv.u, self.xyuv.y, self.cp1.lambda_plus()],
            Patch::HMinus => [self.xyuv.x, self.xyuv.v, self.cp1.lambda_minus()],
        }
    }

    /// Rebuild a resolved point from chart coordinates. The remaining two
    /// ambient coordinates are reconstructed from the incidence relations.
    pub fn from_patch_coords(patch: Patch, coords: [C64; 3]) -> Self {
        match patch {
            Patch::HPlus => {
                let [u, y, lp] = coords;
                ResolvedPoint {
                    xyuv: XyuvPoint::new(-lp * u, y, u, -lp * y),
                    cp1: Cp1Point::new(c(1.0), lp),
                    patch,
                }
            }
            Patch::HMinus => {
                let [x, v, lm] = coords;
                ResolvedPoint {
                    xyuv: XyuvPoint::new(x, -lm * v, -lm * x, v),
                    cp1: Cp1Point::new(lm, c(1.0)),
                    patch,
                }
            }
        }
    }

    pub fn radius_sq(&self) -> f64 {
        self.xyuv.radius_sq()
    }

    /// Squared norm of the fibre coordinates in the current chart; zero
    /// exactly on the bolt CP^1.
    pub fn fiber_norm_sq(&self) -> f64 {
        let [c1, c2, _] = self.patch_coords();
        c1.norm_sqr() + c2.norm_sqr()
    }

    pub fn is_on_bolt(&self) -> bool {
        self.fiber_norm_sq() == 0.0
    }

    /// Residuals of the two incidence equations of the resolution,
    /// `X l1 + U l2` and `V l1 + Y l2`, normalised by scale.
    pub fn incidence_defect(&self) -> f64 {
        let w = &self.xyuv;
        let e1 = w.x * self.cp1.l1 + w.u * self.cp1.l2;
        let e2 = w.v * self.cp1.l1 + w.y * self.cp1.l2;
        let scale = (self.cp1.l1.norm_sqr() + self.cp1.l2.norm_sqr()).sqrt()
            * (1.0 + w.radius_sq().sqrt());
        (e1.norm() + e2.norm()) / scale
    }
}

/// Blow-down lift: recover the CP^1 datum of a nonzero quadric point.
///
/// Both representatives `[-U : X]` and `[-Y : V]` describe the same point
/// of CP^1; the one with the larger norm is used so the lift stays well
/// conditioned near the coordinate axes. The chart is chosen by
/// `max(|l1|, |l2|)`, ties to `H+`.
pub fn lift_to_resolved(w: &XyuvPoint) -> Result<ResolvedPoint, AmbientError> {
    let rsq = w.radius_sq();
    if rsq == 0.0 {
        return Err(AmbientError::Origin);
    }
    let defect = w.quadric_defect().norm();
    if defect > ON_VARIETY_TOL * rsq {
        return Err(AmbientError::NotOnQuadric { defect, tol: ON_VARIETY_TOL * rsq });
    }
    let rep1 = Cp1Point { l1: -w.u, l2: w.x };
    let rep2 = Cp1Point { l1: -w.y, l2: w.v };
    let n1 = rep1.l1.norm_sqr() + rep1.l2.norm_sqr();
    let n2 = rep2.l1.norm_sqr() + rep2.l2.norm_sqr();
    let cp1 = if n1 >= n2 { rep1 } else { rep2 };
    let patch = if cp1.l1.norm() >= cp1.l2.norm() { Patch::HPlus } else { Patch::HMinus };
    Ok(ResolvedPoint { xyuv: *w, cp1, patch })
}

/// Re-express a point in the opposite chart. Involutive on the overlap.
pub fn transition(p: &ResolvedPoint) -> Result<ResolvedPoint, AmbientError> {
    let blocked = match p.patch {
        // target chart H- needs lambda_2 != 0, H+ needs lambda_1 != 0
        Patch::HPlus => p.cp1.l2.norm_sqr() == 0.0,
        Patch::HMinus => p.cp1.l1.norm_sqr() == 0.0,
    };
    if blocked {
        return Err(AmbientError::PatchBoundary);
    }
    Ok(ResolvedPoint { patch: p.patch.other(), ..*p })
}

// ---------------------------------------------------------------------------
// group actions
// ---------------------------------------------------------------------------

/// An SO(4) element conjugated to the `(X,Y,U,V)` coordinates,
/// `g~ = P g P^*`.
#[derive(Debug, Clone)]
pub struct GroupElement {
    /// The conjugated matrix acting on `(X,Y,U,V)`.
    pub matrix: CMat4,
    /// The original real rotation acting on `(z0,..,z3)`.
    pub real_matrix: RMat4,
}

/// Conjugate a real special orthogonal matrix to the `(X,Y,U,V)` frame.
pub fn conjugate_action(g: &RMat4) -> Result<GroupElement, AmbientError> {
    let mut defect = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += g[k][i] * g[k][j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((s - target).abs());
        }
    }
    if defect > 1e-9 {
        return Err(AmbientError::NotOrthogonal(defect));
    }
    let det = rmat4_det(g);
    if (det - 1.0).abs() > 1e-9 {
        return Err(AmbientError::NotSpecialOrthogonal(det));
    }
    let tilde = cmat4_mul(&cmat4_mul(&p_matrix(), &rmat_to_cmat(g)), &p_star());
    Ok(GroupElement { matrix: tilde, real_matrix: *g })
}

fn rmat4_det(m: &RMat4) -> f64 {
    // cofactor expansion along the first row
    let minor = |r0: usize, rows: [usize; 3], cols: [usize; 3]| -> f64 {
        let _ = r0;
        let a = |i: usize, j: usize| m[rows[i]][cols[j]];
        a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
    };
    let rows = [1, 2, 3];
    m[0][0] * minor(0, rows, [1, 2, 3]) - m[0][1] * minor(0, rows, [0, 2, 3])
        + m[0][2] * minor(0, rows, [0, 1, 3])
        - m[0][3] * minor(0, rows, [0, 1, 2])
}

/// Probe point with the given CP^1 datum and unit-scale fibre coordinates:
/// `(X,Y,U,V) = (l2, -l1, -l1, l2)` satisfies both incidence equations and
/// the quadric equation for any `[l1:l2]`.
fn cp1_probe(cp1: &Cp1Point) -> XyuvPoint {
    XyuvPoint::new(cp1.l2, -cp1.l1, -cp1.l1, cp1.l2)
}

impl GroupElement {
    pub fn apply_xyuv(&self, w: &XyuvPoint) -> XyuvPoint {
        XyuvPoint::from_array(cmat4_mul_vec(&self.matrix, &w.to_array()))
    }

    /// Induced action on the CP^1 base. Computed by transporting a probe
    /// point with the same CP^1 datum and reading off its blow-down lift;
    /// the result does not depend on the probe because the SO(4) action is
    /// a bundle automorphism over CP^1.
    pub fn apply_cp1(&self, cp1: &Cp1Point) -> Cp1Point {
        let moved = self.apply_xyuv(&cp1_probe(cp1));
        lift_to_resolved(&moved)
            .expect("probe point stays on the quadric under a unitary action")
            .cp1
    }

    /// Action on a resolved point: ambient part by the matrix, CP^1 part by
    /// the induced base action, chart re-chosen for the new position.
    pub fn apply(&self, p: &ResolvedPoint) -> ResolvedPoint {
        let xyuv = self.apply_xyuv(&p.xyuv);
        let cp1 = self.apply_cp1(&p.cp1);
        let patch = if cp1.l1.norm() >= cp1.l2.norm() { Patch::HPlus } else { Patch::HMinus };
        ResolvedPoint { xyuv, cp1, patch }
    }
}

/// The five so(4) generators used by the torus and SO(3) families, acting
/// on `(X,Y,U,V)` as `g~ = P g P^*` of the corresponding real rotation
/// generator. `B1, B2` span the maximal torus; `A1, A2, A3` span the SO(3)
/// fixing `z0` (note `A1` coincides with `B2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    B1,
    B2,
    A1,
    A2,
    A3,
}

impl Generator {
    pub const TORUS: [Generator; 2] = [Generator::B1, Generator::B2];
    pub const SO3: [Generator; 3] = [Generator::A1, Generator::A2, Generator::A3];

    /// The real antisymmetric generator in the `z` frame (a single-plane
    /// rotation generator in every case).
    pub fn real_matrix(&self) -> RMat4 {
        let mut m = [[0.0; 4]; 4];
        let (i, j, s) = match self {
            // B1: z0-z1 plane; B2 = A1: z2-z3 plane; A2: z1-z3; A3: z1-z2
            Generator::B1 => (1, 0, 1.0),
            Generator::B2 | Generator::A1 => (3, 2, 1.0),
            Generator::A2 => (1, 3, 1.0),
            Generator::A3 => (2, 1, 1.0),
        };
        m[i][j] = s;
        m[j][i] = -s;
        m
    }

    /// The conjugated matrix acting on `(X,Y,U,V)`.
    pub fn matrix(&self) -> CMat4 {
        let a = rmat_to_cmat(&self.real_matrix());
        cmat4_mul(&cmat4_mul(&p_matrix(), &a), &p_star())
    }

    /// Closed-form action of the generator on `lambda_+`, i.e. the value of
    /// `d lambda_+` on the generator vector field.
    pub fn lambda_plus_field(&self, lp: C64) -> C64 {
        match self {
            Generator::B1 | Generator::B2 | Generator::A1 => -I * lp,
            Generator::A2 => I * c(0.5) * (c(1.0) - lp * lp),
            Generator::A3 => c(0.5) * (c(1.0) + lp * lp),
        }
    }

    /// Closed-form action on `lambda_-`.
    pub fn lambda_minus_field(&self, lm: C64) -> C64 {
        match self {
            Generator::B1 | Generator::B2 | Generator::A1 => I * lm,
            Generator::A2 => I * c(0.5) * (c(1.0) - lm * lm),
            Generator::A3 => -c(0.5) * (c(1.0) + lm * lm),
        }
    }

    /// Exact one-parameter subgroup `exp(t gen)`. The real generator is a
    /// unit-speed rotation in a single 2-plane, so
    /// `exp(tA) = I + sin(t) A + (1 - cos(t)) A^2` exactly.
    pub fn flow_element(&self, t: f64) -> GroupElement {
        let a = self.real_matrix();
        let a2 = rmat4_mul(&a, &a);
        let (s, cs) = t.sin_cos();
        let mut rot = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rot[i][j] = s * a[i][j] + (1.0 - cs) * a2[i][j];
            }
            rot[i][i] += 1.0;
        }
        conjugate_action(&rot).expect("exact rotation is special orthogonal")
    }
}

/// Apply `exp(t gen)` to a resolved point.
pub fn generator_flow(gen: Generator, t: f64, p: &ResolvedPoint) -> ResolvedPoint {
    gen.flow_element(t).apply(p)
}

/// Rodrigues rotation in R^3, embedded as `diag(1, R)` in SO(4): the SO(3)
/// subgroup fixing `z0`. `axis` need not be normalised.
pub fn so3_element(axis: [f64; 3], angle: f64) -> Result<GroupElement, AmbientError> {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let (kx, ky, kz) = if n == 0.0 { (1.0, 0.0, 0.0) } else { (axis[0] / n, axis[1] / n, axis[2] / n) };
    let (s, cs) = angle.sin_cos();
    let v = 1.0 - cs;
    let r = [
        [cs + kx * kx * v, kx * ky * v - kz * s, kx * kz * v + ky * s],
        [ky * kx * v + kz * s, cs + ky * ky * v, ky * kz * v - kx * s],
        [kz * kx * v - ky * s, kz * ky * v + kx * s, cs + kz * kz * v],
    ];
    let mut g = [[0.0; 4]; 4];
    g[0][0] = 1.0;
    for i in 0..3 {
        for j in 0..3 {
            g[i + 1][j + 1] = r[i][j];
        }
    }
    conjugate_action(&g)
}

/// A random SO(4) element, drawn by Gram-Schmidt on a Gaussian matrix with
/// a determinant fix-up.
pub fn random_so4<R: rand::Rng>(rng: &mut R) -> GroupElement {
    let mut q = [[0.0f64; 4]; 4];
    loop {
        let mut a = [[0.0f64; 4]; 4];
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x = gauss(rng);
            }
        }
        let mut ok = true;
        for j in 0..4 {
            let mut v = [a[0][j], a[1][j], a[2][j], a[3][j]];
            for k in 0..j {
                let dot: f64 = (0..4).map(|i| q[i][k] * v[i]).sum();
                for i in 0..4 {
                    v[i] -= dot * q[i][k];
                }
            }
            let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-8 {
                ok = false;
                break;
            }
            for i in 0..4 {
                q[i][j] = v[i] / n;
            }
        }
        if ok {
            break;
        }
    }
    if rmat4_det(&q) < 0.0 {
        for row in q.iter_mut() {
            row.swap(2, 3);
        }
    }
    conjugate_action(&q).expect("orthonormalised matrix")
}

fn gauss<R: rand::Rng>(rng: &mut R) -> f64 {
    // Box-Muller; avoids pulling rand_distr in for one distribution
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u1.ln()).sqrt() * u2.cos()
}
