//! The Calabi-Yau structure of the resolved conifold.
//!
//! The Kaehler potential is a function `F_a(r^2)` known only through its
//! derivatives: `F' = gamma / r^2` where `gamma` is the positive root of
//! the cubic `gamma^3 + 6 a^2 gamma^2 - r^4 = 0`. The metric is
//!
//! ```text
//! g = F' tr(dW* dW) + F'' |tr(W* dW)|^2 + 4 a^2 g_{S^2}
//! ```
//!
//! expressed here as an explicit 3x3 Hermitian matrix in the patch
//! coordinates, together with the holomorphic volume form
//! `Omega = dU ^ dY ^ dlambda_+ = dV ^ dX ^ dlambda_-` and the one-forms
//! `alpha` whose exterior derivatives recover the Kaehler form.
//!
//! Conventions, fixed once and used everywhere downstream:
//! `h(u,v) = sum_jk H_jk u_j conj(v_k)`, `g = Re h`, `J = i`,
//! `omega(u,v) = g(Ju,v) = -Im h(u,v)`.
//!
//! The flat C^3 structure lives here too, as the oracle geometry the
//! verification engine is validated against first.

use crate::ambient::{Patch, ResolvedPoint};
use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CyError {
    #[error("potential derivative undefined at the cone point (r^2 = 0 with a = 0)")]
    ConePoint,
    #[error("tangent vectors based at different points")]
    BasePointMismatch,
    #[error("operation needs fiber coordinates but the point lies on the bolt")]
    Bolt,
    #[error("frame spans no volume: |Omega(frame)| = {0:.3e}")]
    ZeroVolumeForm(f64),
}

// ---------------------------------------------------------------------------
// gamma and the potential derivatives
// ---------------------------------------------------------------------------

/// Root data of the potential cubic at one radius.
#[derive(Debug, Clone, Copy)]
pub struct GammaResult {
    pub gamma: f64,
    /// `d gamma / d(r^2)`, from the identity `gamma' gamma (gamma + 4a^2) = (2/3) r^2`.
    pub gamma_prime: f64,
    /// Closed-form intermediate `N = (r^4 - 16a^6 + sqrt(r^8 - 32 a^6 r^4)) / 2`;
    /// complex when `r^4 < 32 a^6`. Diagnostic only.
    pub n: C64,
}

/// Evaluator for `gamma`, `F'` and `F''` at resolution parameter `a`.
#[derive(Debug, Clone, Copy)]
pub struct KaehlerPotential {
    pub a: f64,
}

impl KaehlerPotential {
    pub fn new(a: f64) -> Self {
        assert!(a >= 0.0, "resolution parameter must be nonnegative");
        Self { a }
    }

    /// Unique positive root of `gamma^3 + 6a^2 gamma^2 - r^4 = 0` by
    /// safeguarded Newton. The cubic is strictly increasing on
    /// `gamma > 0` with `p(0) = -r^4 < 0`, so the root is unique; both
    /// `r^{4/3}` and `r^2/(sqrt(6) a)` are upper bounds.
    pub fn solve_gamma(&self, rsq: f64) -> Result<GammaResult, CyError> {
        let a = self.a;
        if rsq <= 0.0 {
            if a == 0.0 || rsq < 0.0 {
                return Err(CyError::ConePoint);
            }
            // smooth limit at the bolt: gamma ~ r^2 / (sqrt(6) a)
            return Ok(GammaResult {
                gamma: 0.0,
                gamma_prime: 1.0 / (6f64.sqrt() * a),
                n: self.closed_form_n(0.0),
            });
        }
        let r4 = rsq * rsq;
        let asq = a * a;
        let mut hi = rsq.powf(2.0 / 3.0); // r^{4/3}
        if a > 0.0 {
            hi = hi.min(rsq / (6f64.sqrt() * a));
        }
        let mut lo = 0.0f64;
        let p = |g: f64| (g + 6.0 * asq) * g * g - r4;
        let dp = |g: f64| (3.0 * g + 12.0 * asq) * g;
        let mut g = hi;
        for _ in 0..100 {
            let f = p(g);
            if f > 0.0 {
                hi = g;
            } else {
                lo = g;
            }
            let d = dp(g);
            let mut next = if d > 0.0 { g - f / d } else { 0.5 * (lo + hi) };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - g).abs() <= 1e-16 * g.max(1.0) {
                g = next;
                break;
            }
            g = next;
        }
        let gamma_prime = (2.0 / 3.0) * rsq / (g * (g + 4.0 * asq));
        Ok(GammaResult { gamma: g, gamma_prime, n: self.closed_form_n(rsq) })
    }

    fn closed_form_n(&self, rsq: f64) -> C64 {
        let r4 = rsq * rsq;
        let a6 = self.a.powi(6);
        let disc = r4 * r4 - 32.0 * a6 * r4;
        if disc >= 0.0 {
            C64::new(0.5 * (r4 - 16.0 * a6 + disc.sqrt()), 0.0)
        } else {
            C64::new(0.5 * (r4 - 16.0 * a6), 0.5 * (-disc).sqrt())
        }
    }

    /// Cardano-style closed form `gamma = -2a^2 + 4a^4 N^{-1/3} + N^{1/3}`
    /// via the principal complex cube root. For `r^4 < 32 a^6` the
    /// intermediate `N` is complex with `|N| = 8 a^6`, so the two cube-root
    /// terms are conjugate and the imaginary parts cancel; the result is
    /// checked to be real and is a diagnostic cross-check of
    /// [`solve_gamma`], not the authoritative path.
    pub fn gamma_closed_form(&self, rsq: f64) -> Result<f64, CyError> {
        if rsq <= 0.0 {
            return Err(CyError::ConePoint);
        }
        if self.a == 0.0 {
            return Ok(rsq.powf(2.0 / 3.0));
        }
        let n = self.closed_form_n(rsq);
        let n13 = n.powf(1.0 / 3.0);
        let a2 = self.a * self.a;
        let g = -C64::new(2.0 * a2, 0.0) + C64::new(4.0 * a2 * a2, 0.0) / n13 + n13;
        debug_assert!(g.im.abs() < 1e-9 * g.re.abs().max(1.0));
        Ok(g.re)
    }

    /// `F' = gamma / r^2`; equals `1/(sqrt(6) a)` at the bolt and
    /// `r^{-2/3}` exactly when `a = 0`.
    pub fn f_prime(&self, rsq: f64) -> Result<f64, CyError> {
        if rsq == 0.0 {
            if self.a == 0.0 {
                return Err(CyError::ConePoint);
            }
            return Ok(1.0 / (6f64.sqrt() * self.a));
        }
        Ok(self.solve_gamma(rsq)?.gamma / rsq)
    }

    /// `F'' = (gamma' r^2 - gamma) / r^4`, rewritten via the cubic as
    /// `-gamma^2 / (3 r^4 (gamma + 4a^2))` which is free of cancellation;
    /// equals `-1/(72 a^4)` at the bolt.
    pub fn f_double_prime(&self, rsq: f64) -> Result<f64, CyError> {
        if rsq == 0.0 {
            if self.a == 0.0 {
                return Err(CyError::ConePoint);
            }
            return Ok(-1.0 / (72.0 * self.a.powi(4)));
        }
        let g = self.solve_gamma(rsq)?.gamma;
        Ok(-g * g / (3.0 * rsq * rsq * (g + 4.0 * self.a * self.a)))
    }
}

// ---------------------------------------------------------------------------
// tangent vectors
// ---------------------------------------------------------------------------

/// A tangent vector of the resolved conifold, as holomorphic components in
/// the base point's patch coordinates. A real tangent vector corresponds
/// to `v + conj(v)` under the standard identification; `J` acts as
/// multiplication by `i`.
#[derive(Debug, Clone, Copy)]
pub struct TangentVector {
    pub base: ResolvedPoint,
    pub components: [C64; 3],
}

impl TangentVector {
    pub fn new(base: ResolvedPoint, components: [C64; 3]) -> Self {
        Self { base, components }
    }

    pub fn same_base(&self, other: &TangentVector) -> bool {
        self.base.patch == other.base.patch
            && self
                .base
                .patch_coords()
                .iter()
                .zip(other.base.patch_coords().iter())
                .all(|(a, b)| {
                    (a - b).norm() <= 1e-10 * (1.0 + a.norm())
                })
    }

    pub fn scale(&self, s: C64) -> TangentVector {
        TangentVector { base: self.base, components: self.components.map(|c| s * c) }
    }

    /// Push the vector to the opposite chart with the analytic Jacobian of
    /// `(U,Y,lambda) -> (-lambda U, -lambda Y, 1/lambda)` (same shape in
    /// both directions). The Jacobian determinant is -1, which is why
    /// `Omega` changes written order but not value across charts.
    pub fn transition(&self, new_base: &ResolvedPoint) -> TangentVector {
        let [c1, c2, l] = self.base.patch_coords();
        let [v1, v2, vl] = self.components;
        TangentVector {
            base: *new_base,
            components: [-l * v1 - c1 * vl, -l * v2 - c2 * vl, -vl / (l * l)],
        }
    }
}

/// Move the base point a parameter `t` along constant patch components
/// `v`; used by every finite-difference check.
pub fn displace(p: &ResolvedPoint, v: &[C64; 3], t: f64) -> ResolvedPoint {
    let c = p.patch_coords();
    ResolvedPoint::from_patch_coords(
        p.patch,
        [c[0] + t * v[0], c[1] + t * v[1], c[2] + t * v[2]],
    )
}

// ---------------------------------------------------------------------------
// Hermitian 3x3 forms
// ---------------------------------------------------------------------------

/// Hermitian matrix `H` of a metric in patch coordinates:
/// `h(u,v) = sum_jk H_jk u_j conj(v_k)`.
pub type HMat3 = [[C64; 3]; 3];

pub fn herm_pair(h: &HMat3, u: &[C64; 3], v: &[C64; 3]) -> C64 {
    let mut s = C64::default();
    for j in 0..3 {
        for k in 0..3 {
            s += h[j][k] * u[j] * v[k].conj();
        }
    }
    s
}

pub fn det3c(m: &[[C64; 3]; 3]) -> C64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Determinant of a 6x6 real matrix by Gaussian elimination with partial
/// pivoting.
pub fn det6(m: &[[f64; 6]; 6]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..6 {
        let piv = (col..6)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..6 {
            let f = a[row][col] / a[col][col];
            for k in col..6 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

/// Cholesky feasibility of a symmetric 6x6 matrix; `true` iff positive
/// definite to working precision.
pub fn cholesky6_ok(m: &[[f64; 6]; 6]) -> bool {
    let mut l = [[0.0f64; 6]; 6];
    for i in 0..6 {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// the geometry interface and the two structures
// ---------------------------------------------------------------------------

/// What the verification engine needs from a geometry: the Hermitian
/// metric matrix and the holomorphic volume form in local holomorphic
/// coordinates. `g`, `omega` and everything else derive from these.
pub trait Geometry {
    type Point: Clone;
    fn hermitian(&self, p: &Self::Point) -> HMat3;
    fn volume_form(&self, p: &Self::Point, v1: &[C64; 3], v2: &[C64; 3], v3: &[C64; 3]) -> C64;

    fn metric(&self, p: &Self::Point, u: &[C64; 3], v: &[C64; 3]) -> f64 {
        herm_pair(&self.hermitian(p), u, v).re
    }

    fn kahler(&self, p: &Self::Point, u: &[C64; 3], v: &[C64; 3]) -> f64 {
        -herm_pair(&self.hermitian(p), u, v).im
    }
}

/// Flat C^3 with the Euclidean metric and `Omega_0 = dz1 ^ dz2 ^ dz3`:
/// the oracle geometry.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatC3;

impl Geometry for FlatC3 {
    type Point = [C64; 3];

    fn hermitian(&self, _p: &[C64; 3]) -> HMat3 {
        let mut h = [[C64::default(); 3]; 3];
        for (i, row) in h.iter_mut().enumerate() {
            row[i] = C64::new(1.0, 0.0);
        }
        h
    }

    fn volume_form(&self, _p: &[C64; 3], v1: &[C64; 3], v2: &[C64; 3], v3: &[C64; 3]) -> C64 {
        det3c(&[*v1, *v2, *v3])
    }
}

/// The resolved conifold with resolution parameter `a` and its Ricci-flat
/// Kaehler structure.
#[derive(Debug, Clone, Copy)]
pub struct CyStructure {
    pub a: f64,
    pub potential: KaehlerPotential,
}

impl CyStructure {
    pub fn new(a: f64) -> Self {
        Self { a, potential: KaehlerPotential::new(a) }
    }

    /// The Hermitian metric matrix in the point's patch coordinates.
    ///
    /// With chart coordinates `(c1, c2, l)` — `(U, Y, lambda_+)` on `H+`,
    /// `(X, V, lambda_-)` on `H-` — and `rho = |l|^2`,
    /// `sigma = |c1|^2 + |c2|^2`:
    ///
    /// ```text
    /// H = F' [[1+rho, 0, l c1*], [0, 1+rho, l c2*], [l* c1, l* c2, sigma]]
    ///   + F'' b b*      with b = ((1+rho) c1*, (1+rho) c2*, l* sigma)
    ///   + 4a^2 diag(0, 0, 1/(1+rho)^2)
    /// ```
    ///
    /// which is the chain-rule expansion of
    /// `F' tr(dW*dW) + F'' |tr(W*dW)|^2 + 4a^2 g_{S^2}` through the
    /// incidence relations of the chart.
    pub fn hermitian_metric(&self, p: &ResolvedPoint) -> Result<HMat3, CyError> {
        let [c1, c2, l] = p.patch_coords();
        let rho = l.norm_sqr();
        let sigma = c1.norm_sqr() + c2.norm_sqr();
        let rsq = (1.0 + rho) * sigma;
        let fp = self.potential.f_prime(rsq)?;
        let fpp = self.potential.f_double_prime(rsq)?;
        let one_rho = C64::new(1.0 + rho, 0.0);
        let sig = C64::new(sigma, 0.0);
        let zero = C64::default();
        let h1: HMat3 = [
            [one_rho, zero, l * c1.conj()],
            [zero, one_rho, l * c2.conj()],
            [l.conj() * c1, l.conj() * c2, sig],
        ];
        let b = [one_rho * c1.conj(), one_rho * c2.conj(), l.conj() * sig];
        let mut h = [[zero; 3]; 3];
        for j in 0..3 {
            for k in 0..3 {
                h[j][k] = fp * h1[j][k] + fpp * b[j] * b[k].conj();
            }
        }
        h[2][2] += C64::new(4.0 * self.a * self.a / ((1.0 + rho) * (1.0 + rho)), 0.0);
        Ok(h)
    }

    /// `g(u,v) = Re h(u,v)`.
    pub fn metric_eval(&self, u: &TangentVector, v: &TangentVector) -> Result<f64, CyError> {
        if !u.same_base(v) {
            return Err(CyError::BasePointMismatch);
        }
        let h = self.hermitian_metric(&u.base)?;
        Ok(herm_pair(&h, &u.components, &v.components).re)
    }

    /// `J v = i v` in holomorphic patch coordinates.
    pub fn complex_structure_apply(&self, v: &TangentVector) -> TangentVector {
        v.scale(C64::new(0.0, 1.0))
    }

    /// `omega(u,v) = g(Ju, v) = -Im h(u,v)`.
    pub fn kahler_form_eval(&self, u: &TangentVector, v: &TangentVector) -> Result<f64, CyError> {
        if !u.same_base(v) {
            return Err(CyError::BasePointMismatch);
        }
        let h = self.hermitian_metric(&u.base)?;
        Ok(-herm_pair(&h, &u.components, &v.components).im)
    }

    /// `alpha_rc(v) = F' Im tr(W* dW)(v)`. In chart coordinates
    /// `tr(W* dW) = (1+rho)(c1* dc1 + c2* dc2) + l* sigma dl`, i.e. the
    /// pairing of `v` against the same vector `b` that enters the metric.
    pub fn alpha_rc_eval(&self, p: &ResolvedPoint, v: &[C64; 3]) -> Result<f64, CyError> {
        let [c1, c2, l] = p.patch_coords();
        let rho = l.norm_sqr();
        let sigma = c1.norm_sqr() + c2.norm_sqr();
        let fp = self.potential.f_prime((1.0 + rho) * sigma)?;
        let trace = C64::new(1.0 + rho, 0.0) * (c1.conj() * v[0] + c2.conj() * v[1])
            + l.conj() * C64::new(sigma, 0.0) * v[2];
        Ok(fp * trace.im)
    }

    /// `alpha_pm(v) = (1/2) Im(l * conj(dl)(v)) / (1 + |l|^2)` in the
    /// current chart; the potential one-form of the S^2 area form.
    pub fn alpha_pm_eval(&self, p: &ResolvedPoint, v: &[C64; 3]) -> f64 {
        let l = p.patch_coords()[2];
        0.5 * (l * v[2].conj()).im / (1.0 + l.norm_sqr())
    }

    /// `Omega = dU ^ dY ^ dlambda_+ = dV ^ dX ^ dlambda_-`: determinant of
    /// the chart components, with a sign on `H-` because its coordinate
    /// order is `(X, V, lambda_-)`.
    pub fn holomorphic_volume_eval(
        &self,
        p: &ResolvedPoint,
        v1: &[C64; 3],
        v2: &[C64; 3],
        v3: &[C64; 3],
    ) -> C64 {
        let d = det3c(&[*v1, *v2, *v3]);
        match p.patch {
            Patch::HPlus => d,
            Patch::HMinus => -d,
        }
    }

    /// The 6x6 real Gram matrix of `g` on the real coordinate frame
    /// `(e1, ie1, e2, ie2, e3, ie3)`.
    pub fn real_gram(&self, p: &ResolvedPoint) -> Result<[[f64; 6]; 6], CyError> {
        let h = self.hermitian_metric(p)?;
        let mut basis = [[C64::default(); 3]; 6];
        for k in 0..3 {
            basis[2 * k][k] = C64::new(1.0, 0.0);
            basis[2 * k + 1][k] = C64::new(0.0, 1.0);
        }
        let mut g = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                g[i][j] = herm_pair(&h, &basis[i], &basis[j]).re;
            }
        }
        Ok(g)
    }

    /// Monge-Ampere ratio: the `g`-volume of the coordinate 6-frame over
    /// `|Omega(coordinate 3-frame)|^2`. Constancy of this ratio over the
    /// whole space is the Ricci-flatness certificate; it also equals
    /// `(det H)^2` for the Hermitian matrix `H`.
    pub fn monge_ampere_ratio(&self, p: &ResolvedPoint) -> Result<f64, CyError> {
        if p.is_on_bolt() {
            return Err(CyError::Bolt);
        }
        let g = self.real_gram(p)?;
        // |Omega| on the coordinate frame is exactly 1 in either chart
        Ok(det6(&g))
    }
}

impl Geometry for CyStructure {
    type Point = ResolvedPoint;

    fn hermitian(&self, p: &ResolvedPoint) -> HMat3 {
        self.hermitian_metric(p)
            .expect("metric defined away from the cone point")
    }

    fn volume_form(&self, p: &ResolvedPoint, v1: &[C64; 3], v2: &[C64; 3], v3: &[C64; 3]) -> C64 {
        self.holomorphic_volume_eval(p, v1, v2, v3)
    }
}
