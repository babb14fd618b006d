//! Moment maps for the torus and SO(3) actions.
//!
//! Each isometric circle action has a Hamiltonian built from two pieces: a
//! fiber part proportional to `F'(r^2)` and a multiple of the
//! corresponding S^2 Hamiltonian on the base CP^1. All formulas below are
//! certified, not assumed: [`hamiltonian_residual`] checks
//! `d mu_xi = omega(X_xi, .)` by finite differences for every generator,
//! and that check pins both the coefficients and the signs.
//!
//! The S^2 parts are written in homogeneous CP^1 coordinates, so every
//! moment evaluation is chart-independent.

use crate::ambient::{Generator, ResolvedPoint};
use crate::cy_structure::{displace, CyError, CyStructure, TangentVector};
use crate::fd;
use num_complex::Complex64 as C64;

/// A moment-map value in a fixed generator basis: `(B~1, B~2)` for the
/// torus, `(A~1, A~2, A~3)` for SO(3).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentValue {
    pub components: Vec<f64>,
}

impl MomentValue {
    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Torus moment map. Both circle factors act on `lambda_+` the same way,
/// so they share the S^2 term:
///
/// ```text
/// mu_1 = (1/2) F'(r^2) (|X|^2 - |Y|^2) + 2 a^2 t
/// mu_2 = (1/2) F'(r^2) (|V|^2 - |U|^2) + 2 a^2 t
/// ```
///
/// with `t = |lambda_2|^2 / (|lambda_1|^2 + |lambda_2|^2)` the height
/// function of the rotation of CP^1.
pub fn t2_moment(s: &CyStructure, p: &ResolvedPoint) -> Result<[f64; 2], CyError> {
    let w = &p.xyuv;
    let fp = s.potential.f_prime(p.radius_sq())?;
    let t = p.cp1.s2_height();
    let base = 2.0 * s.a * s.a * t;
    Ok([
        0.5 * fp * (w.x.norm_sqr() - w.y.norm_sqr()) + base,
        0.5 * fp * (w.v.norm_sqr() - w.u.norm_sqr()) + base,
    ])
}

/// SO(3) moment map in the `(A~1, A~2, A~3)` basis:
///
/// ```text
/// mu_1 = -(1/2) F' (|U|^2 - |V|^2)      +   a^2 (|l2|^2 - |l1|^2) / |l|^2
/// mu_2 = -(1/2) F' Re[(U-V)(conj(Y-X))] - 2 a^2 Re(l2 conj(l1)) / |l|^2
/// mu_3 = +(1/2) F' Im[(U+V)(conj(Y-X))] + 2 a^2 Im(l2 conj(l1)) / |l|^2
/// ```
///
/// Equivariant: `mu(g.p)` is the adjoint rotation of `mu(p)`, so the norm
/// is constant on orbits. The reference orbit through `(0, Y, 0, 0)` sits
/// at `mu = (-a^2, 0, 0)`-length `a^2`; it is a zero level only in the
/// cone limit `a = 0`.
pub fn so3_moment(s: &CyStructure, p: &ResolvedPoint) -> Result<[f64; 3], CyError> {
    let w = &p.xyuv;
    let fp = s.potential.f_prime(p.radius_sq())?;
    let asq = s.a * s.a;
    let l1 = p.cp1.l1;
    let l2 = p.cp1.l2;
    let lsq = l1.norm_sqr() + l2.norm_sqr();
    let cross = l2 * l1.conj();
    let u_minus_v = w.u - w.v;
    let u_plus_v = w.u + w.v;
    let y_minus_x = w.y - w.x;
    Ok([
        -0.5 * fp * (w.u.norm_sqr() - w.v.norm_sqr()) + asq * (l2.norm_sqr() - l1.norm_sqr()) / lsq,
        -0.5 * fp * (u_minus_v * y_minus_x.conj()).re - 2.0 * asq * cross.re / lsq,
        0.5 * fp * (u_plus_v * (-y_minus_x).conj()).im + 2.0 * asq * cross.im / lsq,
    ])
}

/// The moment component generated by one generator: torus generators index
/// into [`t2_moment`], SO(3) generators into [`so3_moment`]. (`A~1` and
/// `B~2` are the same rotation but sit in different bases, with different
/// Hamiltonians differing by a constant plus sign conventions — both
/// satisfy the Hamiltonian identity.)
pub fn moment_component(s: &CyStructure, gen: Generator, p: &ResolvedPoint) -> Result<f64, CyError> {
    Ok(match gen {
        Generator::B1 => t2_moment(s, p)?[0],
        Generator::B2 => t2_moment(s, p)?[1],
        Generator::A1 => so3_moment(s, p)?[0],
        Generator::A2 => so3_moment(s, p)?[1],
        Generator::A3 => so3_moment(s, p)?[2],
    })
}

/// Infinitesimal action in patch coordinates: the fiber components are
/// read straight off the conjugated matrix, the CP^1 component is the
/// closed-form lambda field.
pub fn generator_vector_field(gen: Generator, p: &ResolvedPoint) -> TangentVector {
    let m = gen.matrix();
    let v = crate::ambient::cmat4_mul_vec(&m, &p.xyuv.to_array());
    // v is d/dt of (X, Y, U, V)
    let components = match p.patch {
        crate::ambient::Patch::HPlus => {
            [v[2], v[1], gen.lambda_plus_field(p.cp1.lambda_plus())]
        }
        crate::ambient::Patch::HMinus => {
            [v[0], v[3], gen.lambda_minus_field(p.cp1.lambda_minus())]
        }
    };
    TangentVector::new(*p, components)
}

/// `|d mu_xi(v) - omega(X_xi, v)|`, the Hamiltonian certificate. The
/// differential is a Richardson finite difference of the moment component
/// along the real direction `v`.
pub fn hamiltonian_residual(
    s: &CyStructure,
    gen: Generator,
    p: &ResolvedPoint,
    v: &[C64; 3],
) -> Result<f64, CyError> {
    let scale = p.patch_coords().iter().map(|c| c.norm()).fold(1.0f64, f64::max);
    let h = fd::DEFAULT_STEP * scale;
    let d_mu = fd::richardson(
        |t| moment_component(s, gen, &displace(p, v, t)).unwrap_or(f64::NAN),
        h,
    );
    if d_mu.is_nan() {
        return Err(CyError::ConePoint);
    }
    let x_xi = generator_vector_field(gen, p);
    let om = s.kahler_form_eval(&x_xi, &TangentVector::new(*p, *v))?;
    Ok((d_mu - om).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{generator_flow, lift_to_resolved, Patch, XyuvPoint};
    use rand::Rng;
    use rand::SeedableRng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn cx(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }

    fn rand_point<R: Rng>(r: &mut R) -> ResolvedPoint {
        let coords = std::array::from_fn(|_| cx(r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5)));
        ResolvedPoint::from_patch_coords(Patch::HPlus, coords)
    }

    #[test]
    fn t2_moment_on_bolt() {
        let s = CyStructure::new(1.2);
        // [1:0] pole: fiber terms and height vanish
        let p = ResolvedPoint::from_patch_coords(Patch::HPlus, [c(0.0), c(0.0), c(0.0)]);
        let mu = t2_moment(&s, &p).unwrap();
        assert!(mu[0].abs() < 1e-15 && mu[1].abs() < 1e-15);
        // [0:1] pole: height 1, value 2a^2 in both slots
        let q = ResolvedPoint::from_patch_coords(Patch::HMinus, [c(0.0), c(0.0), c(0.0)]);
        let mu = t2_moment(&s, &q).unwrap();
        let expect = 2.0 * 1.2f64 * 1.2;
        assert!((mu[0] - expect).abs() < 1e-14 && (mu[1] - expect).abs() < 1e-14);
    }

    #[test]
    fn t2_moment_invariant_along_torus_flows() {
        let s = CyStructure::new(1.0);
        let mut r = rng(7);
        for _ in 0..20 {
            let p = rand_point(&mut r);
            let mu0 = t2_moment(&s, &p).unwrap();
            for gen in [Generator::B1, Generator::B2] {
                let q = generator_flow(gen, r.gen_range(-3.0..3.0), &p);
                let mu1 = t2_moment(&s, &q).unwrap();
                assert!((mu0[0] - mu1[0]).abs() < 1e-12 && (mu0[1] - mu1[1]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn t2_moment_patch_independent() {
        let s = CyStructure::new(0.8);
        let mut r = rng(13);
        for _ in 0..20 {
            let p = rand_point(&mut r);
            let q = crate::ambient::transition(&p).unwrap();
            let mu_p = t2_moment(&s, &p).unwrap();
            let mu_q = t2_moment(&s, &q).unwrap();
            assert!((mu_p[0] - mu_q[0]).abs() < 1e-13 && (mu_p[1] - mu_q[1]).abs() < 1e-13);
        }
    }

    #[test]
    fn so3_moment_reference_orbit() {
        // at the cone (a = 0), the orbit of (0, Y, 0, 0) is a zero level;
        // at a > 0 it sits on the coadjoint sphere of radius a^2
        for &a in &[0.0, 1.0] {
            let s = CyStructure::new(a);
            let base = lift_to_resolved(&XyuvPoint::new(c(0.0), cx(1.3, 0.4), c(0.0), c(0.0))).unwrap();
            let mut r = rng(17);
            for _ in 0..30 {
                let g = crate::ambient::so3_element(
                    [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)],
                    r.gen_range(-3.0..3.0),
                )
                .unwrap();
                let q = g.apply(&base);
                let mu = so3_moment(&s, &q).unwrap();
                let norm = (mu[0] * mu[0] + mu[1] * mu[1] + mu[2] * mu[2]).sqrt();
                assert!((norm - a * a).abs() < 1e-9, "a={a}: |mu| = {norm}");
            }
        }
    }

    #[test]
    fn so3_moment_norm_constant_on_orbits() {
        // coadjoint equivariance implies |mu| is an orbit invariant
        let s = CyStructure::new(1.0);
        let mut r = rng(19);
        for _ in 0..10 {
            let p = rand_point(&mut r);
            let mu0 = so3_moment(&s, &p).unwrap();
            let n0 = (mu0.iter().map(|x| x * x).sum::<f64>()).sqrt();
            for _ in 0..5 {
                let g = crate::ambient::so3_element(
                    [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)],
                    r.gen_range(-3.0..3.0),
                )
                .unwrap();
                let q = g.apply(&p);
                let mu1 = so3_moment(&s, &q).unwrap();
                let n1 = (mu1.iter().map(|x| x * x).sum::<f64>()).sqrt();
                assert!((n0 - n1).abs() < 1e-9 * (1.0 + n0), "{n0} vs {n1}");
            }
        }
    }

    #[test]
    fn vector_field_closed_forms() {
        // B~1 at (U, Y, l): (0, iY, -il); B~2: (iU, 0, -il)
        let p = ResolvedPoint::from_patch_coords(Patch::HPlus, [cx(0.3, 0.1), cx(1.0, -0.2), cx(0.4, 0.5)]);
        let [u, y, l] = p.patch_coords();
        let i = C64::new(0.0, 1.0);
        let v1 = generator_vector_field(Generator::B1, &p).components;
        assert!(v1[0].norm() < 1e-15);
        assert!((v1[1] - i * y).norm() < 1e-14);
        assert!((v1[2] + i * l).norm() < 1e-15);
        let v2 = generator_vector_field(Generator::B2, &p).components;
        assert!((v2[0] - i * u).norm() < 1e-14);
        assert!(v2[1].norm() < 1e-15);
        assert!((v2[2] + i * l).norm() < 1e-15);
    }

    #[test]
    fn vector_field_vanishes_at_fixed_point() {
        // A~1 fixes (0, Y, 0, 0) with lambda_+ = 0
        let p = lift_to_resolved(&XyuvPoint::new(c(0.0), c(2.0), c(0.0), c(0.0))).unwrap();
        let v = generator_vector_field(Generator::A1, &p).components;
        assert!(v.iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn vector_field_matches_flow_fd() {
        let mut r = rng(23);
        for _ in 0..10 {
            let p = rand_point(&mut r);
            for gen in [Generator::B1, Generator::B2, Generator::A1, Generator::A2, Generator::A3] {
                let field = generator_vector_field(gen, &p).components;
                let h = 1e-6;
                let coords = |t: f64| {
                    let q = generator_flow(gen, t, &p);
                    let q = lift_to_resolved(&q.xyuv).unwrap();
                    let q = if q.patch == p.patch { q } else { crate::ambient::transition(&q).unwrap() };
                    q.patch_coords()
                };
                let plus = coords(h);
                let minus = coords(-h);
                for k in 0..3 {
                    let fd_val = (plus[k] - minus[k]) / (2.0 * h);
                    assert!((fd_val - field[k]).norm() < 1e-8, "{gen:?} comp {k}");
                }
            }
        }
    }

    #[test]
    fn hamiltonian_identity_all_generators() {
        let mut r = rng(29);
        for &a in &[0.0, 1.0] {
            let s = CyStructure::new(a);
            for _ in 0..50 {
                let p = rand_point(&mut r);
                if a == 0.0 && p.radius_sq() < 0.1 {
                    continue;
                }
                let v: [C64; 3] =
                    std::array::from_fn(|_| cx(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
                for gen in [Generator::B1, Generator::B2, Generator::A1, Generator::A2, Generator::A3] {
                    let res = hamiltonian_residual(&s, gen, &p, &v).unwrap();
                    assert!(res < 1e-6, "a={a} {gen:?}: residual {res:e}");
                }
            }
        }
    }

    #[test]
    fn hamiltonian_residual_at_critical_point() {
        // v = X_xi at the A~1 fixed point: both sides vanish
        let s = CyStructure::new(1.0);
        let p = lift_to_resolved(&XyuvPoint::new(c(0.0), c(2.0), c(0.0), c(0.0))).unwrap();
        let x_xi = generator_vector_field(Generator::A1, &p).components;
        let res = hamiltonian_residual(&s, Generator::A1, &p, &x_xi).unwrap();
        assert!(res < 1e-8);
    }
}
