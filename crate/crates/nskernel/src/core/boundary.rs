//! Boundary geometry: Euclidean distance, nearest boundary point and the
//! tangential/normal split of vectors.

use nalgebra::{DMatrix, DVector};

use super::domain::{CPoint, DomainSpec, C64};
use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 100;

/// Defining-function data sufficient for nearest-point Newton iterations.
/// Implemented by [`DomainSpec`] and by transformed domains in the geometry
/// module.
pub trait RealDefiningFn {
    fn dim(&self) -> usize;
    fn rho(&self, z: &[C64]) -> f64;
    /// `d rho / d z_i`; the real gradient is `2 conj(grad_z)`.
    fn grad_z(&self, z: &[C64]) -> Result<Vec<C64>>;
    /// `(rho_zz, rho_zzbar)`.
    fn hess(&self, z: &[C64]) -> Result<(DMatrix<C64>, DMatrix<C64>)>;
}

impl RealDefiningFn for DomainSpec {
    fn dim(&self) -> usize {
        DomainSpec::dim(self)
    }

    fn rho(&self, z: &[C64]) -> f64 {
        DomainSpec::rho(self, z)
    }

    fn grad_z(&self, z: &[C64]) -> Result<Vec<C64>> {
        Ok(self.rho_jets(z)?.grad_z)
    }

    fn hess(&self, z: &[C64]) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
        let j = self.rho_jets(z)?;
        Ok((j.hess_zz, j.hess_zzbar))
    }
}

/// Interior point together with its unique nearest boundary point.
#[derive(Clone, Debug)]
pub struct BoundaryFrame {
    pub p: CPoint,
    /// Nearest boundary point.
    pub foot: CPoint,
    /// Euclidean distance `|p - foot|`.
    pub delta: f64,
    /// Outward unit normal at `foot` (Hermitian convention).
    pub normal: Vec<C64>,
}

impl BoundaryFrame {
    /// Split `v = v_H + v_N` into tangential and normal parts at the foot,
    /// with respect to the Hermitian inner product.
    pub fn split(&self, v: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let coeff: C64 = v.iter().zip(&self.normal).map(|(a, b)| a * b.conj()).sum();
        let v_n: Vec<C64> = self.normal.iter().map(|nu| coeff * nu).collect();
        let v_h: Vec<C64> = v.iter().zip(&v_n).map(|(a, b)| a - b).collect();
        (v_h, v_n)
    }

    /// `|<v, normal>|`, the length of the normal component.
    pub fn normal_component(&self, v: &[C64]) -> f64 {
        let coeff: C64 = v.iter().zip(&self.normal).map(|(a, b)| a * b.conj()).sum();
        coeff.norm()
    }
}

/// Nearest boundary point of a smooth domain, by Newton on the Lagrange
/// system `q - p = lambda * 2 grad_zbar rho(q)`, `rho(q) = 0`, initialized at
/// the radial projection of `p`.
pub fn nearest_boundary_point(f: &dyn RealDefiningFn, p: &[C64]) -> Result<(CPoint, f64)> {
    if f.rho(p) >= 0.0 {
        return Err(Error::OutsideDomain(format!("rho(p) = {:.3e} >= 0", f.rho(p))));
    }

    // Radial initialization: scale p outward until rho crosses zero.
    let pn: f64 = p.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if pn < 1e-12 {
        return Err(Error::Ambiguity(
            "no unique nearest boundary point from the domain center".into(),
        ));
    }
    let mut hi = 1.0;
    while f.rho(&scale(p, hi)) < 0.0 {
        hi *= 1.5;
        if hi > 1e6 {
            return Err(Error::Domain("radial ray never leaves the domain".into()));
        }
    }
    let mut lo = 1.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f.rho(&scale(p, mid)) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q0 = scale(p, 0.5 * (lo + hi));
    nearest_boundary_point_from(f, p, &q0)
}

/// Same Newton iteration, started from an explicit boundary guess; used when
/// the radial projection is not a safe initializer (e.g. normalized domains
/// whose boundary passes through the origin).
pub fn nearest_boundary_point_from(
    f: &dyn RealDefiningFn,
    p: &[C64],
    q0: &[C64],
) -> Result<(CPoint, f64)> {
    let n = f.dim();
    let mut q: Vec<C64> = q0.to_vec();
    let mut lambda = {
        // Distance-consistent initial multiplier.
        let g = f.grad_z(&q)?;
        let gn2: f64 = g.iter().map(|x| 4.0 * x.norm_sqr()).sum();
        let diff: f64 = q.iter().zip(p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        diff / gn2.sqrt().max(1e-300)
    };

    // Real Newton on F(q, lambda) = (q - p - lambda * G(q), rho(q)) with
    // G = 2 grad_zbar rho; unknowns are the 2n real coordinates plus lambda.
    for _ in 0..NEWTON_MAX_ITER {
        let g = f.grad_z(&q)?;
        let big_g: Vec<C64> = g.iter().map(|x| 2.0 * x.conj()).collect();
        let (hzz, hzzb) = f.hess(&q)?;

        let mut rhs = DVector::zeros(2 * n + 1);
        for i in 0..n {
            let r = q[i] - p[i] - lambda * big_g[i];
            rhs[2 * i] = -r.re;
            rhs[2 * i + 1] = -r.im;
        }
        rhs[2 * n] = -f.rho(&q);

        // dG_i(u) = 2 conj(hzz_ij) conj(u_j) + 2 conj(hzzb_ij) u_j.
        let mut jac = DMatrix::zeros(2 * n + 1, 2 * n + 1);
        for i in 0..n {
            for j in 0..n {
                let a = 2.0 * hzz[(i, j)].conj();
                let b = 2.0 * hzzb[(i, j)].conj();
                // u_j = x + iy; dG_i = a (x - iy) + b (x + iy).
                let d_re = a + b;
                let d_im = (b - a) * C64::new(0.0, 1.0);
                jac[(2 * i, 2 * j)] += -lambda * d_re.re;
                jac[(2 * i + 1, 2 * j)] += -lambda * d_re.im;
                jac[(2 * i, 2 * j + 1)] += -lambda * d_im.re;
                jac[(2 * i + 1, 2 * j + 1)] += -lambda * d_im.im;
            }
            jac[(2 * i, 2 * i)] += 1.0;
            jac[(2 * i + 1, 2 * i + 1)] += 1.0;
            jac[(2 * i, 2 * n)] = -big_g[i].re;
            jac[(2 * i + 1, 2 * n)] = -big_g[i].im;
            // d rho (u) = Re <u, G>.
            jac[(2 * n, 2 * i)] = big_g[i].re;
            jac[(2 * n, 2 * i + 1)] = big_g[i].im;
        }

        let step = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Degeneracy("singular Newton system for nearest point".into()))?;
        for i in 0..n {
            q[i] += C64::new(step[2 * i], step[2 * i + 1]);
        }
        lambda += step[2 * n];
        if step.norm() < NEWTON_TOL {
            let delta: f64 = q.iter().zip(p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            return Ok((CPoint(q), delta));
        }
    }
    Err(Error::Degeneracy("nearest-point Newton did not converge".into()))
}

/// Boundary frame for a smooth domain given by any defining function.
pub fn frame_for(f: &dyn RealDefiningFn, p: &[C64]) -> Result<BoundaryFrame> {
    let (foot, delta) = nearest_boundary_point(f, p)?;
    finish_frame(f, p, foot, delta)
}

/// Boundary frame with an explicit initial guess for the foot.
pub fn frame_for_with_guess(
    f: &dyn RealDefiningFn,
    p: &[C64],
    foot_guess: &[C64],
) -> Result<BoundaryFrame> {
    let (foot, delta) = nearest_boundary_point_from(f, p, foot_guess)?;
    finish_frame(f, p, foot, delta)
}

fn finish_frame(
    f: &dyn RealDefiningFn,
    p: &[C64],
    foot: CPoint,
    delta: f64,
) -> Result<BoundaryFrame> {
    let g = f.grad_z(&foot)?;
    let gbar: Vec<C64> = g.iter().map(|x| x.conj()).collect();
    let gn: f64 = gbar.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if gn < 1e-14 {
        return Err(Error::Degeneracy("vanishing gradient at the foot point".into()));
    }
    let normal: Vec<C64> = gbar.iter().map(|x| x / gn).collect();

    // Frame invariants: the foot lies on the zero set and p - foot is
    // anti-parallel to the outward normal.
    let rho_foot = f.rho(&foot);
    if rho_foot.abs() > 1e-10 {
        return Err(Error::Degeneracy(format!("foot misses the boundary: rho = {rho_foot:.3e}")));
    }
    if delta > 1e-12 {
        let diff: Vec<C64> =
            p.iter().zip(foot.iter()).map(|(a, b)| (a - b) / delta).collect();
        let align: C64 = diff.iter().zip(&normal).map(|(a, b)| a * b.conj()).sum();
        // align should be -1 up to an angle tolerance of 1e-8.
        if (align + C64::new(1.0, 0.0)).norm() > 1e-7 {
            return Err(Error::Ambiguity(format!(
                "p - foot is not normal at the foot (defect {:.3e})",
                (align + C64::new(1.0, 0.0)).norm()
            )));
        }
    }
    Ok(BoundaryFrame { p: CPoint(p.to_vec()), foot, delta, normal })
}

/// Boundary frame of a model domain at an interior point `p`.
///
/// For the ball the foot is `p/|p|` and `delta = 1 - |p|`; other smooth
/// variants run the Lagrange Newton solver. The polydisc is rejected, as is
/// the center of a ball (no unique foot).
pub fn boundary_frame(spec: &DomainSpec, p: &[C64]) -> Result<BoundaryFrame> {
    if !spec.contains(p) {
        return Err(Error::OutsideDomain(format!("rho(p) = {:.3e}", spec.rho(p))));
    }
    match spec {
        DomainSpec::Polydisc { .. } => Err(Error::Unsupported(
            "polydisc is excluded from boundary-geometry operations".into(),
        )),
        DomainSpec::Ball { .. } => {
            let pn = CPoint(p.to_vec()).norm();
            if pn < 1e-12 {
                return Err(Error::Ambiguity("ball center has no unique foot".into()));
            }
            let foot = CPoint(p.iter().map(|x| x / pn).collect());
            finish_frame(spec, p, foot, 1.0 - pn)
        }
        _ => frame_for(spec, p),
    }
}

fn scale(p: &[C64], s: f64) -> Vec<C64> {
    p.iter().map(|x| x * s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::domain::RhoPoly;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ball_radial_frame() {
        let d = DomainSpec::ball(2);
        let f = boundary_frame(&d, &[c(0.0, 0.0), c(0.9, 0.0)]).unwrap();
        assert_abs_diff_eq!(f.delta, 0.1, epsilon = 1e-14);
        assert_abs_diff_eq!((f.foot[1] - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((f.normal[1] - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn disc_half_radius() {
        let d = DomainSpec::ball(1);
        let f = boundary_frame(&d, &[c(0.5, 0.0)]).unwrap();
        assert_abs_diff_eq!(f.delta, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!((f.foot[0] - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn ball_center_is_ambiguous() {
        let d = DomainSpec::ball(2);
        assert!(matches!(
            boundary_frame(&d, &[c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::Ambiguity(_))
        ));
    }

    #[test]
    fn outside_point_rejected() {
        let d = DomainSpec::ball(2);
        assert!(boundary_frame(&d, &[c(0.0, 0.0), c(1.5, 0.0)]).is_err());
    }

    #[test]
    fn diagonal_ball_axis_point() {
        // Nearest point on {4|z1|^2 + |z2|^2 = 1} to (0, 0.9) is (0, 1).
        let d = DomainSpec::diagonal_ball(&[4.0, 1.0]).unwrap();
        let f = boundary_frame(&d, &[c(0.0, 0.0), c(0.9, 0.0)]).unwrap();
        assert_abs_diff_eq!(f.delta, 0.1, epsilon = 1e-10);
        assert_abs_diff_eq!((f.foot[1] - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn diagonal_ball_off_axis_against_scan_oracle() {
        // Dense parameter scan of the ellipse as an independent oracle.
        let d = DomainSpec::diagonal_ball(&[4.0, 1.0]).unwrap();
        let p = [c(0.21, 0.0), c(0.52, 0.0)];
        let f = boundary_frame(&d, &p).unwrap();
        let mut best = f64::INFINITY;
        let m = 400_000;
        for k in 0..m {
            let th = std::f64::consts::PI * (k as f64 + 0.5) / m as f64;
            let q = [c(0.5 * th.cos(), 0.0), c(th.sin(), 0.0)];
            let dist =
                ((q[0] - p[0]).norm_sqr() + (q[1] - p[1]).norm_sqr()).sqrt();
            best = best.min(dist);
        }
        assert_abs_diff_eq!(f.delta, best, epsilon = 1e-6);
    }

    #[test]
    fn reinhardt_frame_invariants() {
        let rho = RhoPoly::new(
            2,
            vec![(vec![1, 0], 1.0), (vec![0, 1], 1.0), (vec![2, 0], 0.1), (vec![0, 0], -1.0)],
        )
        .unwrap();
        let d = DomainSpec::smooth_reinhardt(rho).unwrap();
        let p = [c(0.3, 0.1), c(0.6, -0.2)];
        let f = boundary_frame(&d, &p).unwrap();
        assert!(d.rho(&f.foot).abs() < 1e-10);
        let (vh, vn) = f.split(&[c(0.3, 0.7), c(-0.4, 0.2)]);
        let pairing: C64 = vh.iter().zip(&f.normal).map(|(a, b)| a * b.conj()).sum();
        assert!(pairing.norm() < 1e-12);
        for i in 0..2 {
            assert_abs_diff_eq!(
                (vh[i] + vn[i] - c(if i == 0 { 0.3 } else { -0.4 }, if i == 0 { 0.7 } else { 0.2 }))
                    .norm(),
                0.0,
                epsilon = 1e-14
            );
        }
    }
}
