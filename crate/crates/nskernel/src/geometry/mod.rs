//! Biholomorphic-map machinery: the Cayley transform, affine and quadratic
//! normalization stages, transformation-rule residuals, and pullback
//! evaluators that transport kernel and metric data along a map.

pub mod pinchuk;

pub use pinchuk::{
    normalized_boundary_distance, pinchuk_normalize, pinchuk_normalize_for, scaling_frame,
    scaling_frame_for, PinchukMap, ScalingFrame,
};

use nalgebra::DMatrix;

use crate::core::{CPoint, RealDefiningFn, C64};
use crate::error::{Error, Result};
use crate::metric::{metric_tensor, pull_back_log_jet, KernelEvaluator, LogJet, MapJet};

/// One stage of a holomorphic map of `C^n`.
#[derive(Clone, Debug)]
pub enum MapStage {
    Identity,
    /// `z -> A z + b`.
    Affine { a: DMatrix<C64>, b: Vec<C64> },
    /// The Cayley involution `(sqrt(2) 'z/(z_n - 1), (z_n + 1)/(z_n - 1))`.
    Cayley,
    /// `('z, z_n + 'z^T Q 'z)` with symmetric `Q` on the tangential block.
    QuadraticLast { q: DMatrix<C64> },
}

impl MapStage {
    fn forward(&self, z: &[C64]) -> Result<Vec<C64>> {
        let n = z.len();
        match self {
            MapStage::Identity => Ok(z.to_vec()),
            MapStage::Affine { a, b } => {
                let mut out = b.clone();
                for i in 0..n {
                    for j in 0..n {
                        out[i] += a[(i, j)] * z[j];
                    }
                }
                Ok(out)
            }
            MapStage::Cayley => {
                let u = z[n - 1] - C64::new(1.0, 0.0);
                if u.norm() < 1e-14 {
                    return Err(Error::CayleyPole);
                }
                let mut out = Vec::with_capacity(n);
                let s2 = C64::new(2.0f64.sqrt(), 0.0);
                for zi in z.iter().take(n - 1) {
                    out.push(s2 * zi / u);
                }
                out.push((z[n - 1] + C64::new(1.0, 0.0)) / u);
                Ok(out)
            }
            MapStage::QuadraticLast { q } => {
                let m = n - 1;
                let mut quad = C64::new(0.0, 0.0);
                for i in 0..m {
                    for j in 0..m {
                        quad += q[(i, j)] * z[i] * z[j];
                    }
                }
                let mut out = z.to_vec();
                out[m] += quad;
                Ok(out)
            }
        }
    }

    fn jacobian(&self, z: &[C64]) -> Result<DMatrix<C64>> {
        let n = z.len();
        match self {
            MapStage::Identity => Ok(DMatrix::identity(n, n)),
            MapStage::Affine { a, .. } => Ok(a.clone()),
            MapStage::Cayley => {
                let u = z[n - 1] - C64::new(1.0, 0.0);
                if u.norm() < 1e-14 {
                    return Err(Error::CayleyPole);
                }
                let s2 = C64::new(2.0f64.sqrt(), 0.0);
                let mut j = DMatrix::zeros(n, n);
                for i in 0..n - 1 {
                    j[(i, i)] = s2 / u;
                    j[(i, n - 1)] = -s2 * z[i] / (u * u);
                }
                j[(n - 1, n - 1)] = C64::new(-2.0, 0.0) / (u * u);
                Ok(j)
            }
            MapStage::QuadraticLast { q } => {
                let m = n - 1;
                let mut j = DMatrix::identity(n, n);
                for g in 0..m {
                    let mut v = C64::new(0.0, 0.0);
                    for mu in 0..m {
                        v += (q[(mu, g)] + q[(g, mu)]) * z[mu];
                    }
                    j[(m, g)] = v;
                }
                Ok(j)
            }
        }
    }

    fn hessian(&self, z: &[C64]) -> Result<Vec<DMatrix<C64>>> {
        let n = z.len();
        let zeros = vec![DMatrix::zeros(n, n); n];
        match self {
            MapStage::Identity | MapStage::Affine { .. } => Ok(zeros),
            MapStage::Cayley => {
                let u = z[n - 1] - C64::new(1.0, 0.0);
                if u.norm() < 1e-14 {
                    return Err(Error::CayleyPole);
                }
                let s2 = C64::new(2.0f64.sqrt(), 0.0);
                let u2 = u * u;
                let u3 = u2 * u;
                let mut h = zeros;
                for i in 0..n - 1 {
                    h[i][(i, n - 1)] = -s2 / u2;
                    h[i][(n - 1, i)] = -s2 / u2;
                    h[i][(n - 1, n - 1)] = 2.0 * s2 * z[i] / u3;
                }
                h[n - 1][(n - 1, n - 1)] = C64::new(4.0, 0.0) / u3;
                Ok(h)
            }
            MapStage::QuadraticLast { q } => {
                let m = n - 1;
                let mut h = zeros;
                for i in 0..m {
                    for j in 0..m {
                        h[m][(i, j)] = q[(i, j)] + q[(j, i)];
                    }
                }
                Ok(h)
            }
        }
    }

    fn inverse(&self) -> Result<MapStage> {
        match self {
            MapStage::Identity => Ok(MapStage::Identity),
            MapStage::Affine { a, b } => {
                let ainv = a.clone().try_inverse().ok_or_else(|| {
                    Error::Degeneracy("affine stage is not invertible".into())
                })?;
                let mut binv = vec![C64::new(0.0, 0.0); b.len()];
                for i in 0..b.len() {
                    for j in 0..b.len() {
                        binv[i] -= ainv[(i, j)] * b[j];
                    }
                }
                Ok(MapStage::Affine { a: ainv, b: binv })
            }
            MapStage::Cayley => Ok(MapStage::Cayley),
            MapStage::QuadraticLast { q } => Ok(MapStage::QuadraticLast { q: -q.clone() }),
        }
    }
}

/// A holomorphic map assembled from stages (applied first to last), with
/// exact Jacobians, second derivatives and inverse.
#[derive(Clone, Debug)]
pub struct Biholo {
    n: usize,
    stages: Vec<MapStage>,
}

impl Biholo {
    pub fn identity(n: usize) -> Self {
        Biholo { n, stages: vec![MapStage::Identity] }
    }

    pub fn linear(a: DMatrix<C64>) -> Self {
        let n = a.nrows();
        Biholo { n, stages: vec![MapStage::Affine { a, b: vec![C64::new(0.0, 0.0); n] }] }
    }

    pub fn translation(b: Vec<C64>) -> Self {
        let n = b.len();
        Biholo { n, stages: vec![MapStage::Affine { a: DMatrix::identity(n, n), b }] }
    }

    pub fn affine(a: DMatrix<C64>, b: Vec<C64>) -> Self {
        let n = a.nrows();
        Biholo { n, stages: vec![MapStage::Affine { a, b }] }
    }

    pub fn cayley(n: usize) -> Self {
        Biholo { n, stages: vec![MapStage::Cayley] }
    }

    /// Dilation `('z / sqrt(eta), z_n / eta)`.
    pub fn anisotropic_dilation(n: usize, eta: f64) -> Self {
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            a[(i, i)] = C64::new(1.0 / eta.sqrt(), 0.0);
        }
        a[(n - 1, n - 1)] = C64::new(1.0 / eta, 0.0);
        Biholo::linear(a)
    }

    pub fn from_stages(n: usize, stages: Vec<MapStage>) -> Self {
        Biholo { n, stages }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Composition `after o self`.
    pub fn then(mut self, after: &Biholo) -> Self {
        self.stages.extend(after.stages.iter().cloned());
        self
    }

    pub fn forward(&self, z: &[C64]) -> Result<CPoint> {
        let mut x = z.to_vec();
        for s in &self.stages {
            x = s.forward(&x)?;
        }
        Ok(CPoint(x))
    }

    pub fn jacobian(&self, z: &[C64]) -> Result<DMatrix<C64>> {
        Ok(self.map_jet(z)?.jac)
    }

    pub fn det_jacobian(&self, z: &[C64]) -> Result<C64> {
        Ok(self.jacobian(z)?.determinant())
    }

    /// Jacobian and per-component second derivatives by the chain rule over
    /// the stages.
    pub fn map_jet(&self, z: &[C64]) -> Result<MapJet> {
        let n = self.n;
        let mut x = z.to_vec();
        let mut jac = DMatrix::identity(n, n);
        let mut hess = vec![DMatrix::zeros(n, n); n];
        for s in &self.stages {
            let js = s.jacobian(&x)?;
            let hs = s.hessian(&x)?;
            // H_new_l = J_s-weighted old Hessians + stage Hessian pushed
            // through the accumulated Jacobian.
            let mut hess_new = vec![DMatrix::zeros(n, n); n];
            for l in 0..n {
                let mut hl = DMatrix::zeros(n, n);
                for p in 0..n {
                    if js[(l, p)].norm_sqr() != 0.0 {
                        hl += &hess[p] * js[(l, p)];
                    }
                }
                // plus sum_{p,q} hs_l[p][q] jac[p][a] jac[q][c]
                let tmp = jac.transpose() * &hs[l] * &jac;
                hl += tmp;
                hess_new[l] = hl;
            }
            hess = hess_new;
            jac = js * jac;
            x = s.forward(&x)?;
        }
        Ok(MapJet { jac, hess })
    }

    pub fn inverse(&self) -> Result<Biholo> {
        let mut stages = Vec::with_capacity(self.stages.len());
        for s in self.stages.iter().rev() {
            stages.push(s.inverse()?);
        }
        Ok(Biholo { n: self.n, stages })
    }

    /// Finite-difference probe of the Jacobian and inverse round-trip at
    /// deterministic sample points.
    pub fn probe(&self, points: &[CPoint]) -> Result<()> {
        let h = 1e-6;
        let inv = self.inverse()?;
        for p in points {
            let jac = self.jacobian(p)?;
            let base = self.forward(p)?;
            for j in 0..self.n {
                let mut q = p.0.clone();
                q[j] += C64::new(h, 0.0);
                let fq = self.forward(&q)?;
                for i in 0..self.n {
                    let fd = (fq[i] - base[i]) / h;
                    let err = (fd - jac[(i, j)]).norm() / jac[(i, j)].norm().max(1.0);
                    if err > 1e-5 {
                        return Err(Error::Degeneracy(format!(
                            "jacobian probe failed at entry ({i},{j}): fd error {err:.3e}"
                        )));
                    }
                }
            }
            let back = inv.forward(&base)?;
            let rt: f64 =
                back.iter().zip(p.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            if rt > 1e-9 {
                return Err(Error::Degeneracy(format!("inverse round-trip defect {rt:.3e}")));
            }
        }
        Ok(())
    }
}

/// The Cayley transform as a point map.
pub fn cayley(z: &[C64]) -> Result<CPoint> {
    Biholo::cayley(z.len()).forward(z)
}

/// The Cayley transform with full derivative data; it is an involution.
pub fn cayley_data(n: usize) -> Biholo {
    Biholo::cayley(n)
}

// --- pullback evaluator ---------------------------------------------------------

/// Kernel data on a domain `D` obtained from data on `D' = F(D)` through the
/// transformation rule; `map` is `F` and must send `D` into `D'`.
pub struct PullbackEvaluator<E> {
    pub inner: E,
    pub map: Biholo,
}

impl<E: KernelEvaluator> PullbackEvaluator<E> {
    pub fn new(inner: E, map: Biholo) -> Self {
        PullbackEvaluator { inner, map }
    }
}

impl<E: KernelEvaluator> KernelEvaluator for PullbackEvaluator<E> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn order(&self) -> u32 {
        self.inner.order()
    }

    fn kernel(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        let d1 = self.inner.order() as f64 + 1.0;
        let fz = self.map.forward(z)?;
        let fw = self.map.forward(w)?;
        let detz = self.map.det_jacobian(z)?;
        let detw = self.map.det_jacobian(w)?;
        let k = self.inner.kernel(&fz, &fw)?;
        Ok(cpow(detz, d1) * k * cpow(detw, d1).conj())
    }

    fn log_jet(&self, z: &[C64]) -> Result<LogJet> {
        let fz = self.map.forward(z)?;
        let inner_jet = self.inner.log_jet(&fz)?;
        let mj = self.map.map_jet(z)?;
        Ok(pull_back_log_jet(&inner_jet, &mj))
    }

    fn certified(&self, z: &[C64]) -> bool {
        match self.map.forward(z) {
            Ok(fz) => self.inner.certified(&fz),
            Err(_) => false,
        }
    }
}

/// Principal complex power `u^p` for real `p`.
fn cpow(u: C64, p: f64) -> C64 {
    (p * u.ln()).exp()
}

/// Exact evaluator for a diagonal ball, as the pullback of the unit ball
/// under `z_i -> sqrt(a_i) z_i`.
pub fn diagonal_ball_evaluator(
    scales: &[f64],
    d: u32,
) -> PullbackEvaluator<crate::metric::BallEvaluator> {
    let n = scales.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = C64::new(scales[i].sqrt(), 0.0);
    }
    PullbackEvaluator::new(crate::metric::BallEvaluator::new(n, d), Biholo::linear(a))
}

/// Exact evaluator on the Siegel half-space `2 Re z_n + |'z|^2 < 0`, as the
/// pullback of the unit ball under the Cayley transform.
pub fn siegel_evaluator(n: usize, d: u32) -> PullbackEvaluator<crate::metric::BallEvaluator> {
    PullbackEvaluator::new(crate::metric::BallEvaluator::new(n, d), Biholo::cayley(n))
}

// --- transformation-rule residuals ----------------------------------------------

/// Relative residual of the kernel transformation rule
/// `K_src(z, w) = det F'(z)^{d+1} K_dst(Fz, Fw) conj(det F'(w))^{d+1}`.
pub fn transform_kernel_residual(
    map: &Biholo,
    src: &dyn KernelEvaluator,
    dst: &dyn KernelEvaluator,
    z: &[C64],
    w: &[C64],
) -> Result<f64> {
    if !src.certified(z) || !src.certified(w) {
        return Err(Error::Uncertified("source points are not certified".into()));
    }
    let d1 = src.order() as f64 + 1.0;
    let lhs = src.kernel(z, w)?;
    let fz = map.forward(z)?;
    let fw = map.forward(w)?;
    if !dst.certified(&fz) || !dst.certified(&fw) {
        return Err(Error::Uncertified("image points are not certified".into()));
    }
    let rhs = cpow(map.det_jacobian(z)?, d1)
        * dst.kernel(&fz, &fw)?
        * cpow(map.det_jacobian(w)?, d1).conj();
    Ok((lhs - rhs).norm() / lhs.norm().max(1e-300))
}

/// Relative residual of the metric transformation rules: the matrix law
/// `G_src(z) = F'(z)^T G_dst(Fz) conj(F'(z))` and the length law
/// `tau_src(z, v) = tau_dst(Fz, F'(z) v)`; returns the larger of the two.
pub fn transform_metric_residual(
    map: &Biholo,
    src: &dyn KernelEvaluator,
    dst: &dyn KernelEvaluator,
    z: &[C64],
    v: &[C64],
) -> Result<f64> {
    let n = src.dim();
    let fz = map.forward(z)?;
    let jac = map.jacobian(z)?;
    let g_src = metric_tensor(src, z)?;
    let g_dst = metric_tensor(dst, &fz)?;

    let pulled = jac.transpose() * &g_dst.g * jac.map(|x| x.conj());
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        for j in 0..n {
            num += (g_src.g[(i, j)] - pulled[(i, j)]).norm_sqr();
            den += g_src.g[(i, j)].norm_sqr();
        }
    }
    let matrix_res = (num / den.max(1e-300)).sqrt();

    let mut fv = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n {
            fv[i] += jac[(i, j)] * v[j];
        }
    }
    let tau_src = g_src.tau(v);
    let tau_dst = g_dst.tau(&fv);
    let tau_res = (tau_src - tau_dst).abs() / tau_src.abs().max(1e-300);

    Ok(matrix_res.max(tau_res))
}

// --- transformed defining functions ----------------------------------------------

/// Defining-function data of `h(D)` given data for `D` and the inverse map
/// `back = h^{-1}`; powers the nearest-point solver on normalized domains.
pub struct TransformedDomain<'a> {
    pub base: &'a dyn RealDefiningFn,
    pub back: Biholo,
}

impl<'a> TransformedDomain<'a> {
    pub fn new(base: &'a dyn RealDefiningFn, back: Biholo) -> Self {
        TransformedDomain { base, back }
    }
}

impl RealDefiningFn for TransformedDomain<'_> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn rho(&self, z: &[C64]) -> f64 {
        match self.back.forward(z) {
            Ok(w) => self.base.rho(&w),
            Err(_) => f64::INFINITY,
        }
    }

    fn grad_z(&self, z: &[C64]) -> Result<Vec<C64>> {
        let w = self.back.forward(z)?;
        let grad = self.base.grad_z(&w)?;
        let jac = self.back.jacobian(z)?;
        let n = self.dim();
        let mut g = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            for l in 0..n {
                g[i] += grad[l] * jac[(l, i)];
            }
        }
        Ok(g)
    }

    fn hess(&self, z: &[C64]) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
        let n = self.dim();
        let w = self.back.forward(z)?;
        let grad = self.base.grad_z(&w)?;
        let (hzz_b, hzzb_b) = self.base.hess(&w)?;
        let mj = self.back.map_jet(z)?;
        let jac = &mj.jac;
        let mut hzz = jac.transpose() * &hzz_b * jac;
        for l in 0..n {
            hzz += &mj.hess[l] * grad[l];
        }
        let hzzb = jac.transpose() * &hzzb_b * jac.map(|x| x.conj());
        Ok((hzz, hzzb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::DomainSpec;
    use crate::metric::BallEvaluator;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cayley_fixed_values() {
        // Phi(b*) = 0 with b* = ('0, -1).
        let b_star = [c(0.0, 0.0), c(-1.0, 0.0)];
        let img = cayley(&b_star).unwrap();
        assert!(img.iter().all(|z| z.norm() < 1e-15));
        // Involution at a generic point.
        let z = [c(0.1, 0.2), c(-0.5, 0.0)];
        let twice = cayley(&cayley(&z).unwrap()).unwrap();
        for (a, b) in twice.iter().zip(&z) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn cayley_derivative_at_base_point() {
        // Phi'(b*) = -diag(1/sqrt(2), ..., 1/2) and
        // det Phi'(b*) = (-1)^n 2^{-(n+1)/2}.
        for n in [1usize, 2, 3] {
            let map = Biholo::cayley(n);
            let mut b_star = vec![c(0.0, 0.0); n];
            b_star[n - 1] = c(-1.0, 0.0);
            let jac = map.jacobian(&b_star).unwrap();
            for i in 0..n - 1 {
                assert_abs_diff_eq!(
                    (jac[(i, i)] + c(1.0 / 2.0f64.sqrt(), 0.0)).norm(),
                    0.0,
                    epsilon = 1e-14
                );
            }
            assert_abs_diff_eq!(
                (jac[(n - 1, n - 1)] + c(0.5, 0.0)).norm(),
                0.0,
                epsilon = 1e-14
            );
            let det = map.det_jacobian(&b_star).unwrap();
            let expect = (-1.0f64).powi(n as i32) * 2.0f64.powf(-(n as f64 + 1.0) / 2.0);
            assert_abs_diff_eq!((det - c(expect, 0.0)).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn probe_validates_stages() {
        let n = 2;
        let mut q = DMatrix::zeros(n, n);
        q[(0, 0)] = c(0.3, -0.1);
        let composite = Biholo::from_stages(
            n,
            vec![
                MapStage::QuadraticLast { q },
                MapStage::Affine {
                    a: DMatrix::from_row_slice(n, n, &[c(0.0, 1.0), c(0.5, 0.0), c(0.0, 0.0), c(2.0, 0.0)]),
                    b: vec![c(0.1, 0.0), c(0.0, -0.2)],
                },
            ],
        );
        let pts = vec![
            CPoint(vec![c(0.1, 0.2), c(-0.3, 0.1)]),
            CPoint(vec![c(-0.2, 0.05), c(0.4, -0.3)]),
            CPoint(vec![c(0.0, 0.0), c(0.2, 0.2)]),
            CPoint(vec![c(0.3, -0.3), c(-0.1, -0.1)]),
            CPoint(vec![c(0.05, 0.15), c(0.25, 0.0)]),
        ];
        composite.probe(&pts).unwrap();
    }

    #[test]
    fn siegel_kernel_at_base_point() {
        // K_{D_inf, d}(b*) = c (n!/(2^{n+1} pi^n))^{d+1}.
        for (n, d) in [(1usize, 0u32), (2, 0), (2, 1)] {
            let ev = siegel_evaluator(n, d);
            let mut b_star = vec![c(0.0, 0.0); n];
            b_star[n - 1] = c(-1.0, 0.0);
            let k = ev.kernel_diag(&b_star).unwrap();
            let nf: f64 = (1..=n).product::<usize>() as f64;
            let expect = crate::kernel::weight_constant(n, d)
                * (nf / (2.0f64.powi(n as i32 + 1) * std::f64::consts::PI.powi(n as i32)))
                    .powi(d as i32 + 1);
            assert_relative_eq!(k, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn kernel_rule_exact_for_dilation() {
        // Disc of radius 1/2 onto the unit disc, d = 1, closed forms on both
        // sides computed independently.
        let src = diagonal_ball_evaluator(&[4.0], 1);
        let dst = BallEvaluator::new(1, 1);
        let map = Biholo::linear(DMatrix::from_row_slice(1, 1, &[c(2.0, 0.0)]));
        let r = transform_kernel_residual(
            &map,
            &src,
            &dst,
            &[c(0.0, 0.0)],
            &[c(0.0, 0.0)],
        )
        .unwrap();
        assert!(r < 1e-12, "residual {r:.3e}");
        let r2 = transform_kernel_residual(
            &map,
            &src,
            &dst,
            &[c(0.2, 0.1)],
            &[c(-0.1, 0.3)],
        )
        .unwrap();
        assert!(r2 < 1e-12, "residual {r2:.3e}");
    }

    #[test]
    fn identity_map_zero_residual() {
        let ev = BallEvaluator::new(2, 1);
        let map = Biholo::identity(2);
        let z = [c(0.2, 0.1), c(0.1, -0.2)];
        let r = transform_kernel_residual(&map, &ev, &ev, &z, &z).unwrap();
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-14);
        let rm = transform_metric_residual(&map, &ev, &ev, &z, &[c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert_abs_diff_eq!(rm, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn unitary_rotation_metric_residual() {
        let ev = BallEvaluator::new(2, 0);
        let th: f64 = 0.41;
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[c(th.cos(), 0.0), c(-th.sin(), 0.0), c(th.sin(), 0.0), c(th.cos(), 0.0)],
        );
        let map = Biholo::linear(a);
        let z = [c(0.0, 0.0), c(0.0, 0.0)];
        let r = transform_metric_residual(&map, &ev, &ev, &z, &[c(0.3, 0.2), c(0.5, -0.1)])
            .unwrap();
        assert!(r < 1e-12, "residual {r:.3e}");
    }

    #[test]
    fn metric_rule_for_diagonal_map_off_center() {
        let src = diagonal_ball_evaluator(&[4.0, 1.0], 1);
        let dst = BallEvaluator::new(2, 1);
        let mut a = DMatrix::zeros(2, 2);
        a[(0, 0)] = c(2.0, 0.0);
        a[(1, 1)] = c(1.0, 0.0);
        let map = Biholo::linear(a);
        let z = [c(0.1, 0.05), c(0.3, -0.2)];
        let r =
            transform_metric_residual(&map, &src, &dst, &z, &[c(1.0, 0.5), c(-0.3, 0.2)])
                .unwrap();
        assert!(r < 1e-11, "residual {r:.3e}");
    }

    #[test]
    fn transformed_domain_jets_match_direct() {
        // h(z) = (2 z1, z2 - 1) sends the diagonal ball onto the unit ball
        // centered at ('0, -1); check the defining data of the image domain.
        let spec = DomainSpec::diagonal_ball(&[4.0, 1.0]).unwrap();
        let mut a = DMatrix::zeros(2, 2);
        a[(0, 0)] = c(2.0, 0.0);
        a[(1, 1)] = c(1.0, 0.0);
        let h = Biholo::affine(a, vec![c(0.0, 0.0), c(-1.0, 0.0)]);
        let td = TransformedDomain { base: &spec, back: h.inverse().unwrap() };
        // Image defining function is |w1|^2 + |w2 + 1|^2 - 1.
        let w = [c(0.2, 0.1), c(-0.5, 0.3)];
        let direct =
            w[0].norm_sqr() + (w[1] + c(1.0, 0.0)).norm_sqr() - 1.0;
        assert_abs_diff_eq!(td.rho(&w), direct, epsilon = 1e-14);
        let g = td.grad_z(&w).unwrap();
        assert_abs_diff_eq!((g[0] - w[0].conj()).norm(), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!((g[1] - (w[1] + c(1.0, 0.0)).conj()).norm(), 0.0, epsilon = 1e-13);
    }
}
