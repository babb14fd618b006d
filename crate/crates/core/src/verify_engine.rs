//! The calibrated-geometry certifier.
//!
//! Every claim about a submanifold is turned into a normalized, scale
//! invariant residual on sampled tangent frames:
//!
//! * Lagrangian: `max |omega(v_i, v_j)|` over pairs, divided by the
//!   product of the metric norms;
//! * special: `|Im Omega(frame)| / |Omega(frame)|`;
//! * calibration: `sqrt(det Gram_g(frame)) / |Omega(frame)|` — constant
//!   across Lagrangian frames of one structure, equal to 1 in flat C^3;
//! * cone: the asymptotic cone residual of the family (conifold samples
//!   only).
//!
//! Frames whose normalized 6x3 component matrix has smallest singular
//! value below `1e-8` are rank-flagged and excluded from pass/fail
//! statistics: orbit coordinates degenerate on measure-zero loci and that
//! is expected, not a failure.

use crate::ambient::{lift_to_resolved, transition, GroupElement, ResolvedPoint};
use crate::cy_structure::{displace, CyStructure, Geometry, TangentVector};
use crate::fd;
use crate::slag_families::{cone_residual, ConeFamily, Sample};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub const RANK_TOL: f64 = 1e-8;

/// Pass/fail thresholds of a verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    pub lagrangian: f64,
    pub special: f64,
    pub calibration_rel_std: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { lagrangian: 1e-8, special: 1e-8, calibration_rel_std: 1e-6 }
    }
}

/// Residuals of one sampled frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRow {
    pub lagrangian: f64,
    pub special: f64,
    pub calibration: f64,
    pub cone: f64,
    /// `false` when the frame is (numerically) rank deficient; such rows
    /// are excluded from the pass/fail statistics.
    pub rank_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColumnStats {
    pub max: f64,
    pub mean: f64,
    pub stddev: f64,
}

fn stats(values: impl Iterator<Item = f64> + Clone) -> ColumnStats {
    let mut n = 0usize;
    let mut sum = 0.0;
    let mut max = 0.0f64;
    for v in values.clone() {
        n += 1;
        sum += v;
        max = max.max(v.abs());
    }
    if n == 0 {
        return ColumnStats { max: 0.0, mean: 0.0, stddev: 0.0 };
    }
    let mean = sum / n as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    ColumnStats { max, mean, stddev: var.sqrt() }
}

/// Aggregated result of certifying one sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub rows: Vec<SampleRow>,
    pub lagrangian: ColumnStats,
    pub special: ColumnStats,
    pub calibration: ColumnStats,
    pub cone: ColumnStats,
    /// Median calibration ratio: the measured normalization constant
    /// relating `Omega` to the metric volume on Lagrangian planes.
    pub kappa: f64,
    pub calibration_rel_std: f64,
    pub rank_flagged: usize,
    pub tolerances: Tolerances,
    pub passed: bool,
}

/// Normalized Lagrangian residual of a frame.
pub fn lagrangian_residual<G: Geometry>(geo: &G, p: &G::Point, frame: &[[C64; 3]; 3]) -> f64 {
    let norms: Vec<f64> = frame.iter().map(|v| geo.metric(p, v, v).max(0.0).sqrt()).collect();
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            let d = norms[i] * norms[j];
            if d > 0.0 {
                worst = worst.max(geo.kahler(p, &frame[i], &frame[j]).abs() / d);
            }
        }
    }
    worst
}

/// Phase-style special residual `|Im Omega| / |Omega|`; `None` when the
/// frame spans no volume.
pub fn special_residual<G: Geometry>(geo: &G, p: &G::Point, frame: &[[C64; 3]; 3]) -> Option<f64> {
    let om = geo.volume_form(p, &frame[0], &frame[1], &frame[2]);
    let scale: f64 = frame
        .iter()
        .map(|v| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        .product();
    if om.norm() < 1e-14 * scale.max(1e-300) {
        return None;
    }
    Some(om.im.abs() / om.norm())
}

/// `sqrt(det Gram_g(frame)) / |Omega(frame)|`.
pub fn calibration_ratio<G: Geometry>(geo: &G, p: &G::Point, frame: &[[C64; 3]; 3]) -> Option<f64> {
    let om = geo.volume_form(p, &frame[0], &frame[1], &frame[2]);
    if om.norm() == 0.0 {
        return None;
    }
    let mut g3 = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g3[i][j] = geo.metric(p, &frame[i], &frame[j]);
        }
    }
    let det = g3[0][0] * (g3[1][1] * g3[2][2] - g3[1][2] * g3[2][1])
        - g3[0][1] * (g3[1][0] * g3[2][2] - g3[1][2] * g3[2][0])
        + g3[0][2] * (g3[1][0] * g3[2][1] - g3[1][1] * g3[2][0]);
    if det <= 0.0 {
        return None;
    }
    Some(det.sqrt() / om.norm())
}

/// Eigenvalues of a symmetric 3x3 matrix, ascending (trigonometric closed
/// form).
pub fn sym3_eigenvalues(a: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if p1 == 0.0 {
        let mut d = [a[0][0], a[1][1], a[2][2]];
        d.sort_by(f64::total_cmp);
        return d;
    }
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (detb / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3 * 2.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut out = [e1, e2, e3];
    out.sort_by(f64::total_cmp);
    out
}

/// Smallest singular value of the real 6x3 matrix whose columns are the
/// frame vectors, each column Euclidean-normalized first (so the check is
/// about directions, not magnitudes).
pub fn frame_min_singular_value(frame: &[[C64; 3]; 3]) -> f64 {
    let mut cols = [[0.0f64; 6]; 3];
    for (c, v) in cols.iter_mut().zip(frame.iter()) {
        let mut col = [v[0].re, v[0].im, v[1].re, v[1].im, v[2].re, v[2].im];
        let n = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            return 0.0;
        }
        for x in col.iter_mut() {
            *x /= n;
        }
        *c = col;
    }
    let mut mtm = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..6 {
                mtm[i][j] += cols[i][k] * cols[j][k];
            }
        }
    }
    sym3_eigenvalues(&mtm)[0].max(0.0).sqrt()
}

/// Certify a sample against the tolerances. `cone` selects which
/// asymptotic cone system (if any) the per-sample cone residual uses.
pub fn run_report<G, F>(
    geo: &G,
    sample: &Sample<G::Point>,
    tolerances: &Tolerances,
    cone: F,
) -> VerificationReport
where
    G: Geometry,
    F: Fn(&G::Point) -> f64,
{
    let mut rows = Vec::with_capacity(sample.len());
    for (p, frame) in sample.points.iter().zip(sample.frames.iter()) {
        let rank_ok = frame_min_singular_value(frame) > RANK_TOL;
        let lagrangian = lagrangian_residual(geo, p, frame);
        let special = special_residual(geo, p, frame).unwrap_or(f64::NAN);
        let calibration = calibration_ratio(geo, p, frame).unwrap_or(f64::NAN);
        let rank_ok = rank_ok && special.is_finite() && calibration.is_finite();
        rows.push(SampleRow { lagrangian, special, calibration, cone: cone(p), rank_ok });
    }
    summarize(rows, tolerances.clone())
}

fn summarize(rows: Vec<SampleRow>, tolerances: Tolerances) -> VerificationReport {
    let good: Vec<&SampleRow> = rows.iter().filter(|r| r.rank_ok).collect();
    let rank_flagged = rows.len() - good.len();
    let lagrangian = stats(good.iter().map(|r| r.lagrangian));
    let special = stats(good.iter().map(|r| r.special));
    let calibration = stats(good.iter().map(|r| r.calibration));
    let cone = stats(good.iter().map(|r| r.cone));
    let mut calib_sorted: Vec<f64> = good.iter().map(|r| r.calibration).collect();
    calib_sorted.sort_by(f64::total_cmp);
    let kappa = if calib_sorted.is_empty() {
        f64::NAN
    } else {
        calib_sorted[calib_sorted.len() / 2]
    };
    let calibration_rel_std =
        if calibration.mean != 0.0 { calibration.stddev / calibration.mean.abs() } else { f64::NAN };
    let passed = !good.is_empty()
        && lagrangian.max <= tolerances.lagrangian
        && special.max <= tolerances.special
        && calibration_rel_std <= tolerances.calibration_rel_std;
    VerificationReport {
        rows,
        lagrangian,
        special,
        calibration,
        cone,
        kappa,
        calibration_rel_std,
        rank_flagged,
        tolerances,
        passed,
    }
}

/// Convenience cone callback for conifold samples.
pub fn conifold_cone(family: ConeFamily) -> impl Fn(&ResolvedPoint) -> f64 {
    move |p: &ResolvedPoint| cone_residual(family, &p.xyuv)
}

/// No cone system (flat samples).
pub fn no_cone<P>() -> impl Fn(&P) -> f64 {
    |_: &P| 0.0
}

// ---------------------------------------------------------------------------
// invariance suite
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormKind {
    Metric,
    Kahler,
    HoloVol,
    AlphaRc,
}

/// Differential of the group action in the chart coordinates, by
/// Richardson finite differences. The action is holomorphic in the chart,
/// so a real-parameter difference along a complex direction yields the
/// complex-linear differential. Returns the image point together with the
/// pushed vector, both in the image point's preferred chart.
pub fn group_pushforward(
    g: &GroupElement,
    p: &ResolvedPoint,
    v: &[C64; 3],
) -> (ResolvedPoint, [C64; 3]) {
    let q = lift_to_resolved(&g.apply_xyuv(&p.xyuv)).expect("isometry preserves the quadric");
    let image_coords = |t: f64| -> [C64; 3] {
        let moved = displace(p, v, t);
        let lifted = lift_to_resolved(&g.apply_xyuv(&moved.xyuv)).expect("on quadric");
        let lifted = if lifted.patch == q.patch { lifted } else { transition(&lifted).expect("overlap") };
        lifted.patch_coords()
    };
    let scale = p.patch_coords().iter().map(|c| c.norm()).fold(1.0f64, f64::max);
    let h = 1e-4 * scale;
    let pushed: [C64; 3] = std::array::from_fn(|k| {
        let re = fd::richardson(|t| image_coords(t)[k].re, h);
        let im = fd::richardson(|t| image_coords(t)[k].im, h);
        C64::new(re, im)
    });
    (q, pushed)
}

/// Max pullback defect of one structure form under one group element over
/// the supplied points and probe vectors, normalized per sample.
pub fn invariance_residual(
    s: &CyStructure,
    form: FormKind,
    g: &GroupElement,
    points: &[ResolvedPoint],
    probes: &[[[C64; 3]; 3]],
) -> f64 {
    let mut worst = 0.0f64;
    for (p, frame) in points.iter().zip(probes.iter()) {
        let mut pushed_frame = [[C64::default(); 3]; 3];
        let mut q = *p;
        for (dst, v) in pushed_frame.iter_mut().zip(frame.iter()) {
            let (qq, pv) = group_pushforward(g, p, v);
            q = qq;
            *dst = pv;
        }
        let defect = match form {
            FormKind::Metric => {
                let before = s
                    .metric_eval(&TangentVector::new(*p, frame[0]), &TangentVector::new(*p, frame[1]))
                    .unwrap();
                let after = s
                    .metric_eval(
                        &TangentVector::new(q, pushed_frame[0]),
                        &TangentVector::new(q, pushed_frame[1]),
                    )
                    .unwrap();
                (after - before).abs() / (1.0 + before.abs())
            }
            FormKind::Kahler => {
                let before = s
                    .kahler_form_eval(&TangentVector::new(*p, frame[0]), &TangentVector::new(*p, frame[1]))
                    .unwrap();
                let after = s
                    .kahler_form_eval(
                        &TangentVector::new(q, pushed_frame[0]),
                        &TangentVector::new(q, pushed_frame[1]),
                    )
                    .unwrap();
                (after - before).abs() / (1.0 + before.abs())
            }
            FormKind::HoloVol => {
                let before = s.holomorphic_volume_eval(p, &frame[0], &frame[1], &frame[2]);
                let after =
                    s.holomorphic_volume_eval(&q, &pushed_frame[0], &pushed_frame[1], &pushed_frame[2]);
                (after - before).norm() / (1.0 + before.norm())
            }
            FormKind::AlphaRc => {
                let before = s.alpha_rc_eval(p, &frame[0]).unwrap();
                let after = s.alpha_rc_eval(&q, &pushed_frame[0]).unwrap();
                (after - before).abs() / (1.0 + before.abs())
            }
        };
        worst = worst.max(defect);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::Patch;
    use crate::cy_structure::FlatC3;
    use crate::slag_families::{hl_flat_so3, hl_flat_torus, so3_leaf_sample, t2_leaf_sample, Branch};
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

    #[test]
    fn flat_plane_frame_is_calibrated() {
        let flat = FlatC3;
        let p = [c(0.0); 3];
        let e: [[C64; 3]; 3] = [
            [c(1.0), c(0.0), c(0.0)],
            [c(0.0), c(1.0), c(0.0)],
            [c(0.0), c(0.0), c(1.0)],
        ];
        assert_eq!(lagrangian_residual(&flat, &p, &e), 0.0);
        assert_eq!(special_residual(&flat, &p, &e), Some(0.0));
        assert!((calibration_ratio(&flat, &p, &e).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn flat_families_pass_engine() {
        // the oracle gate: both Harvey-Lawson families certify cleanly
        let flat = FlatC3;
        let tol = Tolerances { lagrangian: 1e-9, special: 1e-9, calibration_rel_std: 1e-9 };
        let so3 = hl_flat_so3(1.0, 10, 30).unwrap();
        let rep = run_report(&flat, &so3, &tol, no_cone());
        assert!(rep.passed, "flat SO(3) family: {rep:?}");
        assert!((rep.kappa - 1.0).abs() < 1e-12);
        let torus = hl_flat_torus(&[0.0, 1.0, 1.0], 5, 5, 4).unwrap();
        let rep = run_report(&flat, &torus, &tol, no_cone());
        assert!(rep.passed, "flat torus family: lag {:?} special {:?}", rep.lagrangian, rep.special);
        assert!((rep.kappa - 1.0).abs() < 1e-12);
    }

    #[test]
    fn t2_leaves_certify() {
        let s = CyStructure::new(1.0);
        let sample = t2_leaf_sample(&s, &[0.3, 0.1, 0.2], 5, 5, 3, (0.8, 2.0)).unwrap();
        let rep = run_report(&s, &sample, &Tolerances::default(), conifold_cone(ConeFamily::T2));
        assert!(
            rep.passed,
            "lagrangian {:?} special {:?} calib rel std {}",
            rep.lagrangian, rep.special, rep.calibration_rel_std
        );
    }

    #[test]
    fn t2_cone_leaf_certifies_at_a_zero() {
        let s = CyStructure::new(0.0);
        let sample = t2_leaf_sample(&s, &[0.0, 0.0, 0.0], 4, 4, 3, (0.7, 1.8)).unwrap();
        let rep = run_report(&s, &sample, &Tolerances::default(), conifold_cone(ConeFamily::T2));
        assert!(rep.passed);
        // the sample is the exact cone
        assert!(rep.cone.max < 1e-9);
    }

    #[test]
    fn so3_leaves_certify_at_cone_limit() {
        let s = CyStructure::new(0.0);
        let sample = so3_leaf_sample(&s, 1.0, Branch::Plus, 6, 25, (-1.5, 1.5)).unwrap();
        let rep = run_report(&s, &sample, &Tolerances::default(), conifold_cone(ConeFamily::So3));
        assert!(
            rep.passed,
            "lagrangian {:?} special {:?} calib {}",
            rep.lagrangian, rep.special, rep.calibration_rel_std
        );
    }

    #[test]
    fn so3_leaves_at_positive_a_are_special_but_not_lagrangian() {
        // Im Omega still vanishes, but the orbit spheres carry symplectic
        // area ~ a^2: the Lagrangian residual is O(1) after normalization
        let s = CyStructure::new(1.0);
        let sample = so3_leaf_sample(&s, 1.0, Branch::Plus, 4, 15, (-1.0, 1.0)).unwrap();
        let rep = run_report(&s, &sample, &Tolerances::default(), conifold_cone(ConeFamily::So3));
        assert!(rep.special.max < 1e-8, "Im Omega should vanish: {:?}", rep.special);
        assert!(rep.lagrangian.max > 1e-3, "expected Lagrangian defect at a > 0");
        assert!(!rep.passed);
    }

    #[test]
    fn calibration_constant_across_families() {
        let s = CyStructure::new(0.0);
        let t2 = t2_leaf_sample(&s, &[0.0, 0.0, 0.0], 4, 4, 3, (0.7, 1.8)).unwrap();
        let so3 = so3_leaf_sample(&s, 1.0, Branch::Plus, 5, 20, (-1.2, 1.2)).unwrap();
        let rep1 = run_report(&s, &t2, &Tolerances::default(), conifold_cone(ConeFamily::T2));
        let rep2 = run_report(&s, &so3, &Tolerances::default(), conifold_cone(ConeFamily::So3));
        assert!(
            (rep1.kappa - rep2.kappa).abs() < 1e-6 * rep1.kappa.abs(),
            "kappa mismatch: {} vs {}",
            rep1.kappa,
            rep2.kappa
        );
        // kappa relates Omega to the metric volume: for a Lagrangian plane
        // |Omega|^2 det(H) = det Gram, so kappa = sqrt(det H) = sqrt(2/3)
        assert!((rep1.kappa - (2.0f64 / 3.0).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn residuals_are_scale_invariant() {
        let s = CyStructure::new(1.0);
        let sample = t2_leaf_sample(&s, &[0.3, 0.1, 0.2], 2, 2, 2, (0.9, 1.5)).unwrap();
        let p = &sample.points[0];
        let f = &sample.frames[0];
        let scaled: [[C64; 3]; 3] =
            [f[0].map(|c| c * 17.0), f[1].map(|c| c * 0.003), f[2].map(|c| c * 250.0)];
        let l0 = lagrangian_residual(&s, p, f);
        let l1 = lagrangian_residual(&s, p, &scaled);
        assert!((l0 - l1).abs() < 1e-12);
        let s0 = special_residual(&s, p, f).unwrap();
        let s1 = special_residual(&s, p, &scaled).unwrap();
        assert!((s0 - s1).abs() < 1e-12);
    }

    #[test]
    fn negative_control_j_rotated_frame() {
        // replacing v3 by J v1 makes the frame non-Lagrangian:
        // omega(v1, J v1) = -g(v1, v1)
        let s = CyStructure::new(1.0);
        let sample = t2_leaf_sample(&s, &[0.3, 0.1, 0.2], 2, 2, 2, (0.9, 1.5)).unwrap();
        let p = &sample.points[0];
        let f = &sample.frames[0];
        let i = C64::new(0.0, 1.0);
        let broken = [f[0], f[1], f[0].map(|c| i * c)];
        assert!(lagrangian_residual(&s, p, &broken) > 1e-1);
    }

    #[test]
    fn negative_control_wrong_phase() {
        let flat = FlatC3;
        let p = [c(0.0); 3];
        let ph = C64::from_polar(1.0, std::f64::consts::FRAC_PI_6);
        let e: [[C64; 3]; 3] = [
            [ph, c(0.0), c(0.0)],
            [c(0.0), c(1.0), c(0.0)],
            [c(0.0), c(0.0), c(1.0)],
        ];
        let sp = special_residual(&flat, &p, &e).unwrap();
        assert!((sp - (std::f64::consts::FRAC_PI_6).sin()).abs() < 1e-12);
    }

    #[test]
    fn negative_control_off_leaf_points() {
        let s = CyStructure::new(1.0);
        let mut sample = t2_leaf_sample(&s, &[0.3, 0.1, 0.2], 3, 3, 2, (0.9, 1.5)).unwrap();
        // shove points off the leaf but keep the frames: Lagrangian
        // residual must light up
        for p in sample.points.iter_mut() {
            let coords = p.patch_coords();
            *p = ResolvedPoint::from_patch_coords(
                p.patch,
                [coords[0] + cx(3e-3, 6e-3), coords[1], coords[2] - cx(0.0, 4.5e-3)],
            );
        }
        let rep = run_report(&s, &sample, &Tolerances::default(), conifold_cone(ConeFamily::T2));
        assert!(!rep.passed);
        assert!(rep.lagrangian.max > 1e-3 || rep.special.max > 1e-3);
    }

    #[test]
    fn rank_deficient_frame_is_flagged() {
        let f: [[C64; 3]; 3] = [
            [c(1.0), c(0.0), c(0.0)],
            [c(2.0), c(0.0), c(0.0)],
            [c(0.0), c(0.0), c(1.0)],
        ];
        assert!(frame_min_singular_value(&f) < RANK_TOL);
        let g: [[C64; 3]; 3] = [
            [c(1.0), c(0.0), c(0.0)],
            [c(0.0), c(1.0), c(0.0)],
            [c(0.0), c(0.0), c(1.0)],
        ];
        assert!(frame_min_singular_value(&g) > 0.99);
    }

    #[test]
    fn sym3_eigenvalues_reference() {
        let m = [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]];
        let e = sym3_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-12);
        assert!((e[1] - 3.0).abs() < 1e-12);
        assert!((e[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn invariance_suite() {
        let s = CyStructure::new(1.0);
        let mut r = rng(7);
        for _ in 0..5 {
            let g = crate::ambient::random_so4(&mut r);
            let mut points = Vec::new();
            let mut probes = Vec::new();
            for _ in 0..5 {
                let coords: [C64; 3] = std::array::from_fn(|_| {
                    cx(r.gen_range(0.4..1.4), r.gen_range(-1.0..1.0))
                });
                points.push(ResolvedPoint::from_patch_coords(Patch::HPlus, coords));
                probes.push(std::array::from_fn(|_| {
                    std::array::from_fn(|_| cx(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
                }));
            }
            for form in [FormKind::Metric, FormKind::Kahler, FormKind::HoloVol, FormKind::AlphaRc] {
                let res = invariance_residual(&s, form, &g, &points, &probes);
                assert!(res < 1e-9, "{form:?}: {res:e}");
            }
            // identity exactly
            let id = crate::ambient::conjugate_action(&{
                let mut m = [[0.0; 4]; 4];
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = 1.0;
                }
                m
            })
            .unwrap();
            let res = invariance_residual(&s, FormKind::Metric, &id, &points, &probes);
            assert!(res < 1e-10);
        }
    }
}
