//! Mixed jets of `log K(z, z)` and their transport under holomorphic maps.
//!
//! The metric needs `L_{a bbar}`, its holomorphic derivatives `L_{a bbar c}`
//! and the mixed fourth-order data `L_{a bbar c dbar}`. Those entries are
//! unchanged by the pluriharmonic term `(d+1) log |det F'|^2` of the
//! transformation rule, so pulling a jet back along a biholomorphism is pure
//! chain rule on the inner jet.

use nalgebra::DMatrix;

use crate::core::{MultiIndex, C64};
use crate::error::{Error, Result};
use crate::kernel::{kernel_eval, kernel_jet, KernelJet, KernelModel};

/// Mixed log-kernel jet at a point.
///
/// `g[(a,b)] = L_{a bbar}`, `dg[c][(a,b)] = L_{a bbar c}`,
/// `ddg[c][d][(a,b)] = L_{a bbar c dbar}` where `L = log K(z, z)`.
#[derive(Clone, Debug)]
pub struct LogJet {
    pub n: usize,
    pub g: DMatrix<C64>,
    pub dg: Vec<DMatrix<C64>>,
    pub ddg: Vec<Vec<DMatrix<C64>>>,
}

impl LogJet {
    /// `L_{a bbar c}` with the symmetry `a <-> c` available to callers.
    pub fn d1(&self, a: usize, b: usize, c: usize) -> C64 {
        self.dg[c][(a, b)]
    }

    /// `L_{a bbar c dbar}`.
    pub fn d2(&self, a: usize, b: usize, c: usize, d: usize) -> C64 {
        self.ddg[c][d][(a, b)]
    }
}

/// Kernel data sufficient for the metric pipeline. Implemented by series
/// models, closed ball/polydisc forms and pullbacks along biholomorphisms.
pub trait KernelEvaluator {
    fn dim(&self) -> usize;
    fn order(&self) -> u32;
    /// Off-diagonal kernel `K(z, w)`.
    fn kernel(&self, z: &[C64], w: &[C64]) -> Result<C64>;
    /// Diagonal kernel `K(z, z) > 0`.
    fn kernel_diag(&self, z: &[C64]) -> Result<f64> {
        let v = self.kernel(z, z)?;
        if !(v.re > 0.0) {
            return Err(Error::Degeneracy(format!("nonpositive diagonal kernel {v}")));
        }
        Ok(v.re)
    }
    /// Mixed jet of `log K` at `z`.
    fn log_jet(&self, z: &[C64]) -> Result<LogJet>;
    /// Whether `z` lies in the region the evaluator certifies.
    fn certified(&self, z: &[C64]) -> bool {
        let _ = z;
        true
    }
}

impl<E: KernelEvaluator + ?Sized> KernelEvaluator for &E {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn order(&self) -> u32 {
        (**self).order()
    }
    fn kernel(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        (**self).kernel(z, w)
    }
    fn kernel_diag(&self, z: &[C64]) -> Result<f64> {
        (**self).kernel_diag(z)
    }
    fn log_jet(&self, z: &[C64]) -> Result<LogJet> {
        (**self).log_jet(z)
    }
    fn certified(&self, z: &[C64]) -> bool {
        (**self).certified(z)
    }
}

impl<E: KernelEvaluator + ?Sized> KernelEvaluator for Box<E> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn order(&self) -> u32 {
        (**self).order()
    }
    fn kernel(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        (**self).kernel(z, w)
    }
    fn kernel_diag(&self, z: &[C64]) -> Result<f64> {
        (**self).kernel_diag(z)
    }
    fn log_jet(&self, z: &[C64]) -> Result<LogJet> {
        (**self).log_jet(z)
    }
    fn certified(&self, z: &[C64]) -> bool {
        (**self).certified(z)
    }
}

/// A model is its own evaluator.
impl KernelEvaluator for KernelModel {
    fn dim(&self) -> usize {
        self.domain().dim()
    }
    fn order(&self) -> u32 {
        KernelModel::order(self)
    }
    fn kernel(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        Ok(kernel_eval(self, z, w).value)
    }
    fn log_jet(&self, z: &[C64]) -> Result<LogJet> {
        log_jet_from_kernel_jet(&kernel_jet(self, z))
    }
    fn certified(&self, z: &[C64]) -> bool {
        KernelModel::certified(self, z)
    }
}

// --- series-backed evaluator ---------------------------------------------------

/// Evaluator backed by a truncated series model.
pub struct SeriesEvaluator<'a> {
    pub model: &'a KernelModel,
}

impl<'a> SeriesEvaluator<'a> {
    pub fn new(model: &'a KernelModel) -> Self {
        SeriesEvaluator { model }
    }
}

impl KernelEvaluator for SeriesEvaluator<'_> {
    fn dim(&self) -> usize {
        self.model.domain().dim()
    }

    fn order(&self) -> u32 {
        self.model.order()
    }

    fn kernel(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        Ok(kernel_eval(self.model, z, w).value)
    }

    fn log_jet(&self, z: &[C64]) -> Result<LogJet> {
        let jet = kernel_jet(self.model, z);
        log_jet_from_kernel_jet(&jet)
    }

    fn certified(&self, z: &[C64]) -> bool {
        self.model.certified(z)
    }
}

/// Convert a raw kernel jet `J(A, B) = d^A d^Bbar K` on the diagonal into the
/// log-jet entries via the quotient-rule ladder.
pub fn log_jet_from_kernel_jet(jet: &KernelJet) -> Result<LogJet> {
    let n = jet.z.dim();
    let k = jet.get(&MultiIndex::zero(n), &MultiIndex::zero(n)).re;
    if !(k > 0.0) {
        return Err(Error::Degeneracy(format!("nonpositive diagonal kernel {k:.6e}")));
    }
    let e = |i: usize| MultiIndex::unit(n, i);
    let e2 = |i: usize, j: usize| e(i).plus(&e(j));
    let zero = MultiIndex::zero(n);

    // Shorthands for jet entries with holomorphic block A, antiholomorphic B.
    let j = |a: &MultiIndex, b: &MultiIndex| jet.get(a, b);

    let kx = k;
    let mut g = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let kab = j(&e(a), &e(b));
            let ka = j(&e(a), &zero);
            let kb = j(&zero, &e(b));
            g[(a, b)] = kab / kx - ka * kb / (kx * kx);
        }
    }

    let mut dg = vec![DMatrix::zeros(n, n); n];
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                let kabc = j(&e2(a, c), &e(b));
                let kab = j(&e(a), &e(b));
                let kac = j(&e2(a, c), &zero);
                let kcb = j(&e(c), &e(b));
                let ka = j(&e(a), &zero);
                let kb = j(&zero, &e(b));
                let kc = j(&e(c), &zero);
                dg[c][(a, b)] = kabc / kx
                    - kab * kc / (kx * kx)
                    - kac * kb / (kx * kx)
                    - ka * kcb / (kx * kx)
                    + 2.0 * ka * kb * kc / (kx * kx * kx);
            }
        }
    }

    let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
    for c in 0..n {
        for d in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let k2 = kx * kx;
                    let k3 = k2 * kx;
                    let k4 = k3 * kx;
                    let kabcd = j(&e2(a, c), &e2(b, d));
                    let kabc = j(&e2(a, c), &e(b));
                    let kabd = j(&e(a), &e2(b, d));
                    let kab = j(&e(a), &e(b));
                    let kad = j(&e(a), &e(d));
                    let kcb = j(&e(c), &e(b));
                    let kcd = j(&e(c), &e(d));
                    let kac = j(&e2(a, c), &zero);
                    let kbd = j(&zero, &e2(b, d));
                    let kacd = j(&e2(a, c), &e(d));
                    let kcbd = j(&e(c), &e2(b, d));
                    let ka = j(&e(a), &zero);
                    let kb = j(&zero, &e(b));
                    let kc = j(&e(c), &zero);
                    let kd = j(&zero, &e(d));

                    // dbar_d of the five-term expansion of L_{a bbar c}.
                    let mut v = kabcd / kx - kabc * kd / k2;
                    v += -kabd * kc / k2 - kab * kcd / k2 + 2.0 * kab * kc * kd / k3;
                    v += -kacd * kb / k2 - kac * kbd / k2 + 2.0 * kac * kb * kd / k3;
                    v += -kad * kcb / k2 - ka * kcbd / k2 + 2.0 * ka * kcb * kd / k3;
                    v += 2.0 * (kad * kb * kc + ka * kbd * kc + ka * kb * kcd) / k3
                        - 6.0 * ka * kb * kc * kd / k4;
                    ddg[c][d][(a, b)] = v;
                }
            }
        }
    }

    Ok(LogJet { n, g, dg, ddg })
}

// --- closed-form evaluators ----------------------------------------------------

/// Exact evaluator for the unit ball: `L = m log(1/(1 - |z|^2)) + const` with
/// `m = (d+1)(n+1)`, whose derivative ladder is explicit.
pub struct BallEvaluator {
    pub n: usize,
    pub d: u32,
}

impl BallEvaluator {
    pub fn new(n: usize, d: u32) -> Self {
        BallEvaluator { n, d }
    }
}

impl KernelEvaluator for BallEvaluator {
    fn dim(&self) -> usize {
        self.n
    }

    fn order(&self) -> u32 {
        self.d
    }

    fn kernel(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        crate::kernel::closed_kernel(&crate::core::DomainSpec::ball(self.n), self.d, z, w)
    }

    fn log_jet(&self, z: &[C64]) -> Result<LogJet> {
        let n = self.n;
        let s: f64 = z.iter().map(|v| v.norm_sqr()).sum();
        if s >= 1.0 {
            return Err(Error::OutsideDomain(format!("|z|^2 = {s} >= 1")));
        }
        let m = (self.d as f64 + 1.0) * (n as f64 + 1.0);
        Ok(ball_log_jet_scaled(z, m))
    }
}

/// Log-jet of `-m log(1 - |z|^2)` in any dimension.
pub fn ball_log_jet_scaled(z: &[C64], m: f64) -> LogJet {
    let n = z.len();
    let s: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    let dd = 1.0 / (1.0 - s);
    let d2 = dd * dd;
    let d3 = d2 * dd;
    let d4 = d3 * dd;
    let zb: Vec<C64> = z.iter().map(|v| v.conj()).collect();

    let kr = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let mut g = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            g[(a, b)] = m * (kr(a, b) * dd + zb[a] * z[b] * d2);
        }
    }
    let mut dg = vec![DMatrix::zeros(n, n); n];
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                dg[c][(a, b)] = m
                    * (kr(a, b) * zb[c] * d2
                        + kr(c, b) * zb[a] * d2
                        + 2.0 * zb[a] * z[b] * zb[c] * d3);
            }
        }
    }
    let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
    for c in 0..n {
        for d in 0..n {
            for a in 0..n {
                for b in 0..n {
                    ddg[c][d][(a, b)] = m
                        * (kr(a, b) * kr(c, d) * d2
                            + 2.0 * kr(a, b) * zb[c] * z[d] * d3
                            + kr(c, b) * kr(a, d) * d2
                            + 2.0 * kr(c, b) * zb[a] * z[d] * d3
                            + 2.0 * kr(a, d) * z[b] * zb[c] * d3
                            + 2.0 * kr(c, d) * zb[a] * z[b] * d3
                            + 6.0 * zb[a] * z[b] * zb[c] * z[d] * d4);
                }
            }
        }
    }
    LogJet { n, g, dg, ddg }
}

/// Exact evaluator for the unit polydisc: a product of one-dimensional discs,
/// so the log-jet is supported on coinciding indices.
pub struct PolydiscEvaluator {
    pub n: usize,
    pub d: u32,
}

impl PolydiscEvaluator {
    pub fn new(n: usize, d: u32) -> Self {
        PolydiscEvaluator { n, d }
    }
}

impl KernelEvaluator for PolydiscEvaluator {
    fn dim(&self) -> usize {
        self.n
    }

    fn order(&self) -> u32 {
        self.d
    }

    fn kernel(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        crate::kernel::closed_kernel(&crate::core::DomainSpec::polydisc(self.n), self.d, z, w)
    }

    fn log_jet(&self, z: &[C64]) -> Result<LogJet> {
        let n = self.n;
        let m = 2.0 * (self.d as f64 + 1.0);
        let mut g = DMatrix::zeros(n, n);
        let mut dg = vec![DMatrix::zeros(n, n); n];
        let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
        for i in 0..n {
            if z[i].norm_sqr() >= 1.0 {
                return Err(Error::OutsideDomain(format!("|z_{i}| >= 1")));
            }
            let one = ball_log_jet_scaled(&[z[i]], m);
            g[(i, i)] = one.g[(0, 0)];
            dg[i][(i, i)] = one.dg[0][(0, 0)];
            ddg[i][i][(i, i)] = one.ddg[0][0][(0, 0)];
        }
        Ok(LogJet { n, g, dg, ddg })
    }
}

// --- pullback -------------------------------------------------------------------

/// First and second derivatives of a holomorphic map at a point, as needed to
/// transport a log-jet: `jac[(l, a)] = dF_l/dz_a`,
/// `hess[l][(a, c)] = d^2 F_l / dz_a dz_c`.
#[derive(Clone, Debug)]
pub struct MapJet {
    pub jac: DMatrix<C64>,
    pub hess: Vec<DMatrix<C64>>,
}

/// Chain rule transporting the log-jet of the target domain at `F(z)` to the
/// source domain at `z` for a holomorphic `F`.
pub fn pull_back_log_jet(inner: &LogJet, map: &MapJet) -> LogJet {
    let n = map.jac.ncols();
    let nn = inner.n;
    let jc = |l: usize, a: usize| map.jac[(l, a)];
    let hc = |l: usize, a: usize, c: usize| map.hess[l][(a, c)];

    let mut g = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut v = C64::new(0.0, 0.0);
            for l in 0..nn {
                for mm in 0..nn {
                    v += inner.g[(l, mm)] * jc(l, a) * jc(mm, b).conj();
                }
            }
            g[(a, b)] = v;
        }
    }

    let mut dg = vec![DMatrix::zeros(n, n); n];
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut v = C64::new(0.0, 0.0);
                for l in 0..nn {
                    for mm in 0..nn {
                        let jb = jc(mm, b).conj();
                        for q in 0..nn {
                            v += inner.d1(l, mm, q) * jc(l, a) * jc(q, c) * jb;
                        }
                        v += inner.g[(l, mm)] * hc(l, a, c) * jb;
                    }
                }
                dg[c][(a, b)] = v;
            }
        }
    }

    let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
    for c in 0..n {
        for d in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut v = C64::new(0.0, 0.0);
                    for l in 0..nn {
                        for mm in 0..nn {
                            let jb = jc(mm, b).conj();
                            let hbd = hc(mm, b, d).conj();
                            for q in 0..nn {
                                let jqc = jc(q, c);
                                for h in 0..nn {
                                    v += inner.d2(l, mm, q, h)
                                        * jc(l, a)
                                        * jqc
                                        * jb
                                        * jc(h, d).conj();
                                }
                                v += inner.d1(l, mm, q) * jc(l, a) * jqc * hbd;
                                // L_{l mbar hbar} = conj(L_{m lbar h}).
                                v += inner.d1(mm, l, q).conj()
                                    * hc(l, a, c)
                                    * jb
                                    * jc(q, d).conj();
                            }
                            v += inner.g[(l, mm)] * hc(l, a, c) * hbd;
                        }
                    }
                    ddg[c][d][(a, b)] = v;
                }
            }
        }
    }

    LogJet { n, g, dg, ddg }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::DomainSpec;
    use crate::kernel::build_model;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn series_log_jet_matches_closed_ball_jet() {
        // The conversion ladder against the explicit ball formulas, at an
        // interior point with both real and imaginary parts.
        let model = build_model(&DomainSpec::ball(2), 1, 34, 1e-12).unwrap();
        let series = SeriesEvaluator::new(&model);
        let closed = BallEvaluator::new(2, 1);
        let z = [c(0.21, -0.12), c(0.05, 0.3)];
        let a = series.log_jet(&z).unwrap();
        let b = closed.log_jet(&z).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!((a.g[(i, j)] - b.g[(i, j)]).norm(), 0.0, epsilon = 1e-9);
                for q in 0..2 {
                    assert_abs_diff_eq!(
                        (a.d1(i, j, q) - b.d1(i, j, q)).norm(),
                        0.0,
                        epsilon = 1e-8
                    );
                    for h in 0..2 {
                        assert_abs_diff_eq!(
                            (a.d2(i, j, q, h) - b.d2(i, j, q, h)).norm(),
                            0.0,
                            epsilon = 1e-7
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn disc_log_jet_values() {
        // n = 1, d = 0 at real t: L_{1 1bar} = 2/(1-t^2)^2,
        // L_{1 1bar 1} = 4t D^2 + 4 t^3 D^3, D = 1/(1-t^2).
        let ev = BallEvaluator::new(1, 0);
        let t = 0.37;
        let jet = ev.log_jet(&[c(t, 0.0)]).unwrap();
        let dd = 1.0 / (1.0 - t * t);
        assert_abs_diff_eq!(jet.g[(0, 0)].re, 2.0 * dd * dd, epsilon = 1e-13);
        assert_abs_diff_eq!(
            jet.d1(0, 0, 0).re,
            4.0 * t * dd * dd + 4.0 * t.powi(3) * dd.powi(3),
            epsilon = 1e-12
        );
    }

    #[test]
    fn pullback_under_unitary_preserves_ball_jet_at_origin() {
        let inner = BallEvaluator::new(2, 0);
        let th: f64 = 0.63;
        let mut jac = DMatrix::zeros(2, 2);
        jac[(0, 0)] = c(th.cos(), 0.0);
        jac[(0, 1)] = c(-th.sin(), 0.0);
        jac[(1, 0)] = c(th.sin(), 0.0);
        jac[(1, 1)] = c(th.cos(), 0.0);
        let map = MapJet { jac, hess: vec![DMatrix::zeros(2, 2); 2] };
        let jet = inner.log_jet(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let pulled = pull_back_log_jet(&jet, &map);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(
                    (pulled.g[(i, j)] - jet.g[(i, j)]).norm(),
                    0.0,
                    epsilon = 1e-13
                );
            }
        }
    }
}
