//! The Narasimhan–Simha type metric of a kernel model: tensor, volume
//! density, the invariant beta, vector lengths, holomorphic sectional and
//! Ricci curvature, and path lengths.
//!
//! Everything is assembled from the exact mixed jet of `log K`; finite
//! differences appear only in test oracles.

mod logjet;

pub use logjet::{
    ball_log_jet_scaled, log_jet_from_kernel_jet, pull_back_log_jet, BallEvaluator,
    KernelEvaluator, LogJet, MapJet, PolydiscEvaluator, SeriesEvaluator,
};

use nalgebra::DMatrix;

use crate::core::{CPoint, C64};
use crate::error::{Error, Result};
use crate::quad::GaussRule;

/// Metric data at a point: the tensor `G`, its determinant and inverse, and
/// the first/second derivative tables feeding the curvature formulas.
#[derive(Clone, Debug)]
pub struct MetricPointData {
    pub z: CPoint,
    pub g: DMatrix<C64>,
    pub det_g: f64,
    pub g_inv: DMatrix<C64>,
    /// `first[c][(a, b)] = d g_{a bbar} / d z_c`.
    pub first: Vec<DMatrix<C64>>,
    /// `second[c][d][(a, b)] = d^2 g_{a bbar} / d z_c d zbar_d`.
    pub second: Vec<Vec<DMatrix<C64>>>,
}

impl MetricPointData {
    /// Squared length `sum g_{a bbar} v^a conj(v^b)`.
    pub fn tau_sq(&self, v: &[C64]) -> f64 {
        let n = self.g.nrows();
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                acc += self.g[(a, b)] * v[a] * v[b].conj();
            }
        }
        acc.re
    }

    pub fn tau(&self, v: &[C64]) -> f64 {
        self.tau_sq(v).max(0.0).sqrt()
    }
}

/// Metric tensor and derivative ladder at `z`. Positive definiteness is
/// established by Cholesky; failure reports the offending eigenvalue.
pub fn metric_tensor(ev: &dyn KernelEvaluator, z: &[C64]) -> Result<MetricPointData> {
    let jet = ev.log_jet(z)?;
    let n = jet.n;
    // Hermitian clean-up of roundoff before factoring.
    let mut g = jet.g.clone();
    for a in 0..n {
        for b in 0..a {
            let avg = 0.5 * (g[(a, b)] + g[(b, a)].conj());
            g[(a, b)] = avg;
            g[(b, a)] = avg.conj();
        }
        g[(a, a)] = C64::new(g[(a, a)].re, 0.0);
    }

    let chol = g.clone().cholesky().ok_or_else(|| {
        let eig = g.clone().symmetric_eigen();
        let min = eig.eigenvalues.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        Error::Degeneracy(format!("metric tensor not positive definite (eigenvalue {min:.6e})"))
    })?;
    let det_g: f64 = chol.l().diagonal().iter().map(|v| v.norm_sqr()).product();
    let g_inv = chol.inverse();

    Ok(MetricPointData {
        z: CPoint(z.to_vec()),
        g,
        det_g,
        g_inv,
        first: jet.dg,
        second: jet.ddg,
    })
}

/// The biholomorphic invariant `beta = det G * K^{-1/(d+1)}`.
pub fn beta_invariant(ev: &dyn KernelEvaluator, z: &[C64]) -> Result<f64> {
    let mpd = metric_tensor(ev, z)?;
    let k = ev.kernel_diag(z)?;
    Ok(mpd.det_g * k.powf(-1.0 / (ev.order() as f64 + 1.0)))
}

/// Length `tau(z, v)` of a tangent vector.
pub fn vector_length(ev: &dyn KernelEvaluator, z: &[C64], v: &[C64]) -> Result<f64> {
    Ok(metric_tensor(ev, z)?.tau(v))
}

/// Holomorphic sectional curvature
/// `R(z, v) = sum R_{abar b c dbar} vbar^a v^b v^c vbar^d / tau^4`.
pub fn sectional_curvature(ev: &dyn KernelEvaluator, z: &[C64], v: &[C64]) -> Result<f64> {
    let mpd = metric_tensor(ev, z)?;
    sectional_from_data(&mpd, v)
}

pub fn sectional_from_data(mpd: &MetricPointData, v: &[C64]) -> Result<f64> {
    let n = mpd.g.nrows();
    if v.iter().all(|x| x.norm_sqr() == 0.0) {
        return Err(Error::Contract("curvature requires a nonzero vector".into()));
    }
    // R_{abar b c dbar} = -d^2 g_{b abar}/dz_c dzb_d
    //   + sum_{mu nu} g^{nu mubar} (d g_{b mubar}/dz_c)(d g_{nu abar}/dzb_d),
    // with g^{nu mubar} = (G^{-1})[(mu, nu)] and
    // d g_{nu abar}/dzb_d = conj(d g_{a nubar}/dz_d).
    let mut num = C64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for dd in 0..n {
                    let mut r = -mpd.second[cc][dd][(b, a)];
                    for mu in 0..n {
                        for nu in 0..n {
                            r += mpd.g_inv[(mu, nu)]
                                * mpd.first[cc][(b, mu)]
                                * mpd.first[dd][(a, nu)].conj();
                        }
                    }
                    num += r * v[a].conj() * v[b] * v[cc] * v[dd].conj();
                }
            }
        }
    }
    let tau2 = mpd.tau_sq(v);
    Ok(num.re / (tau2 * tau2))
}

/// Ricci curvature `Ric(z, v) = sum Ric_{a bbar} v^a vbar^b / tau^2` with
/// `Ric_{a bbar} = -d^2 log det G / dz_a dzb_b` via Jacobi's formula.
pub fn ricci_curvature(ev: &dyn KernelEvaluator, z: &[C64], v: &[C64]) -> Result<f64> {
    let mpd = metric_tensor(ev, z)?;
    ricci_from_data(&mpd, v)
}

pub fn ricci_from_data(mpd: &MetricPointData, v: &[C64]) -> Result<f64> {
    let n = mpd.g.nrows();
    if v.iter().all(|x| x.norm_sqr() == 0.0) {
        return Err(Error::Contract("curvature requires a nonzero vector".into()));
    }
    let ric = ricci_tensor(mpd);
    let mut num = C64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            num += ric[(a, b)] * v[a] * v[b].conj();
        }
    }
    Ok(num.re / mpd.tau_sq(v))
}

/// `Ric_{a bbar} = -[tr(G^{-1} d_a dbar_b G) - tr(G^{-1} (dbar_b G) G^{-1} (d_a G))]`.
pub fn ricci_tensor(mpd: &MetricPointData) -> DMatrix<C64> {
    let n = mpd.g.nrows();
    let mut ric = DMatrix::zeros(n, n);
    for a in 0..n {
        // (d_a G)[(i, j)] = first[a][(i, j)].
        let da = &mpd.first[a];
        for b in 0..n {
            // (dbar_b G)[(i, j)] = conj(first[b][(j, i)]).
            let mut db = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    db[(i, j)] = mpd.first[b][(j, i)].conj();
                }
            }
            let mut dd = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    dd[(i, j)] = mpd.second[a][b][(i, j)];
                }
            }
            let t1 = (&mpd.g_inv * dd).trace();
            let t2 = (&mpd.g_inv * db * &mpd.g_inv * da).trace();
            ric[(a, b)] = -(t1 - t2);
        }
    }
    ric
}

/// Riemannian length of a piecewise-linear path, by composite Gauss
/// quadrature per segment with panel doubling until the relative change
/// drops below 1e-6.
pub fn path_length(ev: &dyn KernelEvaluator, nodes: &[CPoint]) -> Result<f64> {
    if nodes.len() < 2 {
        return Ok(0.0);
    }
    let rule = GaussRule::new(16);
    let mut total = 0.0;
    for seg in nodes.windows(2) {
        let (a, b) = (&seg[0], &seg[1]);
        let dir: Vec<C64> = b.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
        if dir.iter().all(|x| x.norm_sqr() == 0.0) {
            continue;
        }
        let speed = |t: f64| -> Result<f64> {
            let z: Vec<C64> =
                a.iter().zip(&dir).map(|(x, d)| x + d * C64::new(t, 0.0)).collect();
            vector_length(ev, &z, &dir)
        };
        let mut panels = 1usize;
        let mut last = f64::INFINITY;
        loop {
            let mut acc = 0.0;
            let mut failed = None;
            for p in 0..panels {
                let lo = p as f64 / panels as f64;
                let hi = (p + 1) as f64 / panels as f64;
                acc += rule.integrate(lo, hi, |t| match speed(t) {
                    Ok(v) => v,
                    Err(e) => {
                        failed = Some(e);
                        f64::NAN
                    }
                });
            }
            if let Some(e) = failed {
                return Err(e);
            }
            if (acc - last).abs() <= 1e-6 * acc.abs().max(1e-300) {
                total += acc;
                break;
            }
            last = acc;
            panels *= 2;
            if panels > 1 << 14 {
                return Err(Error::Degeneracy("path length refinement did not settle".into()));
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::DomainSpec;
    use crate::kernel::build_model;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ball2_weighted_metric_at_origin() {
        // G(0) = (d+1)(n+1) I = 6 I for n = 2, d = 1.
        let ev = BallEvaluator::new(2, 1);
        let mpd = metric_tensor(&ev, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 6.0 } else { 0.0 };
                assert_abs_diff_eq!((mpd.g[(i, j)] - c(expect, 0.0)).norm(), 0.0, epsilon = 1e-13);
            }
        }
        assert_abs_diff_eq!(mpd.det_g, 36.0, epsilon = 1e-12);
    }

    #[test]
    fn disc_metric_off_center() {
        // g_{1 1bar}(0.5) = 2/(1 - 0.25)^2 = 32/9 for n = 1, d = 0.
        let ev = BallEvaluator::new(1, 0);
        let mpd = metric_tensor(&ev, &[c(0.5, 0.0)]).unwrap();
        assert_relative_eq!(mpd.g[(0, 0)].re, 32.0 / 9.0, epsilon = 1e-13);
    }

    #[test]
    fn polydisc_metric_is_product() {
        let ev = PolydiscEvaluator::new(2, 0);
        let mpd = metric_tensor(&ev, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        for i in 0..2 {
            assert_abs_diff_eq!(mpd.g[(i, i)].re, 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn ball_beta_is_constant() {
        // beta = (d+1)^n (n+1)^n c^{-1/(d+1)} pi^n / n!.
        let ev = BallEvaluator::new(1, 0);
        let b0 = beta_invariant(&ev, &[c(0.0, 0.0)]).unwrap();
        let b1 = beta_invariant(&ev, &[c(0.4, 0.2)]).unwrap();
        assert_relative_eq!(b0, 2.0 * std::f64::consts::PI, epsilon = 1e-12);
        assert_relative_eq!(b1, b0, epsilon = 1e-12);
    }

    #[test]
    fn vector_lengths() {
        let ev = BallEvaluator::new(2, 1);
        let z = [c(0.0, 0.0), c(0.0, 0.0)];
        let t = vector_length(&ev, &z, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_relative_eq!(t, 6.0f64.sqrt(), epsilon = 1e-13);
        let zero = vector_length(&ev, &z, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(zero, 0.0, epsilon = 1e-15);
        // Homogeneity tau(z, 3v) = 3 tau(z, v) on the disc: tau(0, 1) = sqrt(2).
        let ev1 = BallEvaluator::new(1, 0);
        let t3 = vector_length(&ev1, &[c(0.0, 0.0)], &[c(3.0, 0.0)]).unwrap();
        assert_relative_eq!(t3, 3.0 * 2.0f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn ball_sectional_curvature_constant() {
        for (n, d, z, v) in [
            (1usize, 0u32, vec![c(0.0, 0.0)], vec![c(1.0, 0.0)]),
            (1, 0, vec![c(0.35, -0.2)], vec![c(0.3, 0.7)]),
            (2, 1, vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.2, 0.1), c(-0.4, 0.3)]),
            (2, 1, vec![c(0.3, 0.1), c(-0.2, 0.25)], vec![c(1.0, 0.0), c(0.5, -0.5)]),
        ] {
            let ev = BallEvaluator::new(n, d);
            let r = sectional_curvature(&ev, &z, &v).unwrap();
            let expect = -2.0 / ((d as f64 + 1.0) * (n as f64 + 1.0));
            assert_relative_eq!(r, expect, epsilon = 1e-10);
        }
    }

    #[test]
    fn ball_ricci_constant_and_proportional_to_metric() {
        let ev = BallEvaluator::new(2, 1);
        let z = [c(0.25, -0.1), c(0.1, 0.3)];
        let v = [c(0.4, 0.2), c(-0.3, 0.6)];
        let ric = ricci_curvature(&ev, &z, &v).unwrap();
        assert_relative_eq!(ric, -0.5, epsilon = 1e-10);
        // Ric matrix = -(1/(d+1)) G identically on the ball.
        let mpd = metric_tensor(&ev, &z).unwrap();
        let ric_mat = ricci_tensor(&mpd);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(
                    (ric_mat[(i, j)] + mpd.g[(i, j)] * 0.5).norm(),
                    0.0,
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn series_model_reproduces_ball_curvatures() {
        let model = build_model(&DomainSpec::ball(2), 0, 30, 1e-12).unwrap();
        let ev = SeriesEvaluator::new(&model);
        let z = [c(0.2, 0.1), c(-0.15, 0.22)];
        let v = [c(0.7, -0.1), c(0.2, 0.5)];
        assert_relative_eq!(
            sectional_curvature(&ev, &z, &v).unwrap(),
            -2.0 / 3.0,
            epsilon = 1e-8
        );
        assert_relative_eq!(ricci_curvature(&ev, &z, &v).unwrap(), -1.0, epsilon = 1e-8);
    }

    #[test]
    fn curvature_scale_invariance_in_v() {
        let ev = BallEvaluator::new(2, 0);
        let z = [c(0.1, 0.0), c(0.2, -0.1)];
        let v = [c(0.5, 0.3), c(-0.2, 0.1)];
        let lam = c(1.7, -0.4);
        let vl: Vec<C64> = v.iter().map(|x| x * lam).collect();
        assert_relative_eq!(
            sectional_curvature(&ev, &z, &v).unwrap(),
            sectional_curvature(&ev, &z, &vl).unwrap(),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            ricci_curvature(&ev, &z, &v).unwrap(),
            ricci_curvature(&ev, &z, &vl).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn radial_path_length_is_atanh() {
        // Int_0^s sqrt(2)/(1-t^2) dt = sqrt(2) atanh(s) on the disc, d = 0.
        let ev = BallEvaluator::new(1, 0);
        let s = 0.8f64;
        let nodes = vec![CPoint(vec![c(0.0, 0.0)]), CPoint(vec![c(s, 0.0)])];
        let len = path_length(&ev, &nodes).unwrap();
        assert_relative_eq!(len, 2.0f64.sqrt() * s.atanh(), epsilon = 1e-7);
        // Degenerate single-point curve.
        let zero = path_length(&ev, &[CPoint(vec![c(0.3, 0.0)])]).unwrap();
        assert_abs_diff_eq!(zero, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn path_length_additive_and_reparametrization_invariant() {
        let ev = BallEvaluator::new(2, 1);
        let a = CPoint(vec![c(0.0, 0.0), c(0.0, 0.0)]);
        let m = CPoint(vec![c(0.2, 0.1), c(0.1, 0.0)]);
        let b = CPoint(vec![c(0.4, 0.2), c(0.2, 0.0)]);
        let whole = path_length(&ev, &[a.clone(), m.clone(), b.clone()]).unwrap();
        let split = path_length(&ev, &[a.clone(), m.clone()]).unwrap()
            + path_length(&ev, &[m.clone(), b.clone()]).unwrap();
        assert_relative_eq!(whole, split, epsilon = 1e-9);
        // Collinear mid-node insertion does not change the value.
        let q = CPoint(vec![c(0.1, 0.05), c(0.05, 0.0)]);
        let refine = path_length(&ev, &[a.clone(), q, m.clone()]).unwrap();
        let direct = path_length(&ev, &[a, m]).unwrap();
        assert_relative_eq!(refine, direct, epsilon = 1e-9);
    }
}
