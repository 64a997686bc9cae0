//! Least-norm minimum integrals with jet constraints at a point.
//!
//! In the orthonormal basis `e_alpha = z^alpha / sqrt(gamma_alpha)` the
//! squared norm is Euclidean, so the kinds with linear constraints reduce to
//! least-norm solves against a small constraint Gram matrix. The kinds `I`
//! and `M` carry a positive-semidefinite quadratic normalization on the
//! second jet; their value is assembled from the full spectrum of the
//! induced pencil on the second-jet block (the harmonic composition of the
//! per-mode least-norm problems), which is the reading under which the
//! curvature identities close.

use nalgebra::{DMatrix, DVector};

use crate::core::{enumerate_multiindices, DomainSpec, MultiIndex, C64};
use crate::error::{Error, Result};
use crate::kernel::KernelModel;
use crate::metric::{
    beta_invariant, metric_tensor, ricci_curvature, sectional_curvature, KernelEvaluator,
    SeriesEvaluator,
};

/// The six minimum-integral kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinIntegralKind {
    I0,
    I1,
    I2,
    /// `Lambda_k` with `k` in `1..=n`.
    Lambda(usize),
    I,
    M,
}

impl MinIntegralKind {
    pub fn label(&self) -> String {
        match self {
            MinIntegralKind::I0 => "I0".into(),
            MinIntegralKind::I1 => "I1".into(),
            MinIntegralKind::I2 => "I2".into(),
            MinIntegralKind::Lambda(k) => format!("lambda_{k}"),
            MinIntegralKind::I => "I".into(),
            MinIntegralKind::M => "M".into(),
        }
    }
}

/// Solution of a minimum-integral problem.
#[derive(Clone, Debug)]
pub struct MinIntegralResult {
    pub kind: MinIntegralKind,
    pub value: f64,
    /// Monomial coefficients of the minimizer over `|alpha| <= N`, aligned
    /// with the model's index order; `value = sum |c_alpha|^2 gamma_alpha`.
    pub minimizer: Vec<C64>,
    /// Violations of the equality constraints.
    pub residuals: Vec<f64>,
    /// Truncation degree actually used.
    pub n_used: u32,
    /// Relative drift of the value between truncations `N` and `N - 2`.
    pub drift: f64,
    /// Pencil eigenvalues for the kinds `I` and `M` (empty otherwise).
    pub spectrum: Vec<f64>,
}

struct BasisJets {
    indices: Vec<MultiIndex>,
    sqrt_inv_gamma: Vec<f64>,
    values: Vec<C64>,
    /// `d1[j][k] = d e_{alpha_k} / d z_j (p)`.
    d1: Vec<Vec<C64>>,
    /// `d2[i][j][k] = d^2 e_{alpha_k} / d z_i d z_j (p)`.
    d2: Vec<Vec<Vec<C64>>>,
}

fn basis_jets(model: &KernelModel, p: &[C64], max_degree: u32) -> BasisJets {
    let n = model.domain().dim();
    let indices = enumerate_multiindices(n, max_degree);
    let mut pows: Vec<Vec<C64>> = Vec::with_capacity(n);
    for &pi in p.iter() {
        let mut row = vec![C64::new(1.0, 0.0)];
        for _ in 0..max_degree {
            row.push(row.last().unwrap() * pi);
        }
        pows.push(row);
    }
    let monomial = |alpha: &MultiIndex| -> C64 {
        let mut v = C64::new(1.0, 0.0);
        for (i, &a) in alpha.0.iter().enumerate() {
            v *= pows[i][a as usize];
        }
        v
    };

    let sqrt_inv_gamma: Vec<f64> = indices
        .iter()
        .map(|a| (-0.5 * model.log_moment(a).expect("index within model truncation")).exp())
        .collect();
    let values: Vec<C64> = indices
        .iter()
        .zip(&sqrt_inv_gamma)
        .map(|(a, &s)| monomial(a) * s)
        .collect();

    let mut d1 = vec![vec![C64::new(0.0, 0.0); indices.len()]; n];
    let mut d2 = vec![vec![vec![C64::new(0.0, 0.0); indices.len()]; n]; n];
    for (k, alpha) in indices.iter().enumerate() {
        for j in 0..n {
            let ej = MultiIndex::unit(n, j);
            if alpha.dominates(&ej) {
                let ff = alpha.falling_factorial(&ej);
                d1[j][k] = ff * monomial(&alpha.minus(&ej)) * sqrt_inv_gamma[k];
            }
            for i in 0..n {
                let eij = MultiIndex::unit(n, i).plus(&ej);
                if alpha.dominates(&eij) {
                    let ff = alpha.falling_factorial(&eij);
                    d2[i][j][k] = ff * monomial(&alpha.minus(&eij)) * sqrt_inv_gamma[k];
                }
            }
        }
    }

    BasisJets { indices, sqrt_inv_gamma, values, d1, d2 }
}

/// Rows of the equality-constraint system for a kind, with right-hand sides.
fn constraint_rows(
    kind: MinIntegralKind,
    jets: &BasisJets,
    n: usize,
    v: &[C64],
) -> Result<(Vec<Vec<C64>>, Vec<C64>)> {
    let m = jets.indices.len();
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let value_row = jets.values.clone();
    let dir_row = |v: &[C64]| -> Vec<C64> {
        (0..m)
            .map(|k| (0..n).map(|j| v[j] * jets.d1[j][k]).sum())
            .collect()
    };
    match kind {
        MinIntegralKind::I0 => Ok((vec![value_row], vec![one])),
        MinIntegralKind::I1 => Ok((vec![value_row, dir_row(v)], vec![zero, one])),
        MinIntegralKind::I2 => {
            let hess_row: Vec<C64> = (0..m)
                .map(|k| {
                    let mut acc = zero;
                    for i in 0..n {
                        for j in 0..n {
                            acc += v[i] * v[j] * jets.d2[i][j][k];
                        }
                    }
                    acc
                })
                .collect();
            Ok((vec![value_row, dir_row(v), hess_row], vec![zero, zero, one]))
        }
        MinIntegralKind::Lambda(k) => {
            if k == 0 || k > n {
                return Err(Error::Contract(format!("lambda_k requires 1 <= k <= n, got {k}")));
            }
            let mut rows = vec![value_row];
            let mut rhs = vec![zero];
            for j in 0..k {
                rows.push(jets.d1[j].clone());
                rhs.push(if j + 1 == k { one } else { zero });
            }
            Ok((rows, rhs))
        }
        MinIntegralKind::I | MinIntegralKind::M => {
            let mut rows = vec![value_row];
            let mut rhs = vec![zero];
            for j in 0..n {
                rows.push(jets.d1[j].clone());
                rhs.push(zero);
            }
            Ok((rows, rhs))
        }
    }
}

fn rows_to_matrix(rows: &[Vec<C64>]) -> DMatrix<C64> {
    let m = rows[0].len();
    DMatrix::from_fn(rows.len(), m, |i, j| rows[i][j])
}

/// Minimal-norm solution of `A c = b`; the value is `b^H (A A^H)^{-1} b`.
fn least_norm(a: &DMatrix<C64>, b: &DVector<C64>) -> Result<(DVector<C64>, f64)> {
    let gram = a * a.adjoint();
    let chol = gram.cholesky().ok_or_else(|| {
        Error::Infeasible("singular constraint Gram matrix (truncation too small?)".into())
    })?;
    let y = chol.solve(b);
    let c = a.adjoint() * &y;
    let value = b.dotc(&y).re;
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::Degeneracy(format!("least-norm value {value:.3e}")));
    }
    Ok((c, value))
}

struct Solved {
    value: f64,
    coeffs_on: DVector<C64>,
    residuals: Vec<f64>,
    spectrum: Vec<f64>,
}

fn solve_kind(
    model: &KernelModel,
    kind: MinIntegralKind,
    jets: &BasisJets,
    p: &[C64],
    v: &[C64],
) -> Result<Solved> {
    let n = model.domain().dim();
    let (rows, rhs_v) = constraint_rows(kind, jets, n, v)?;
    let a = rows_to_matrix(&rows);
    let rhs = DVector::from_iterator(rhs_v.len(), rhs_v.iter().copied());

    match kind {
        MinIntegralKind::I | MinIntegralKind::M => {
            if v.iter().all(|x| x.norm_sqr() == 0.0) {
                return Err(Error::Contract("kinds I and M require a nonzero vector".into()));
            }
            // Metric data at p from the same model.
            let ev = SeriesEvaluator::new(model);
            let mpd = metric_tensor(&ev, p)?;
            let k_diag = ev.kernel_diag(p)?;

            // Second-jet map W: column i holds sum_g v_g d2[i][g][.].
            let m = jets.indices.len();
            let mut w = DMatrix::zeros(m, n);
            for i in 0..n {
                for kk in 0..m {
                    let mut acc = C64::new(0.0, 0.0);
                    for g in 0..n {
                        acc += v[g] * jets.d2[i][g][kk];
                    }
                    w[(kk, i)] = acc;
                }
            }
            // Project the columns onto the complement of the constraint span.
            let vmat = a.transpose();
            let gram = vmat.adjoint() * &vmat;
            let chol = gram
                .cholesky()
                .ok_or_else(|| Error::Infeasible("singular constraint Gram matrix".into()))?;
            let coeff = chol.solve(&(vmat.adjoint() * &w));
            let w_t = &w - &vmat * coeff;
            let b_mat = w_t.adjoint() * &w_t;

            // Pairing matrix of the quadratic normalization.
            let q = match kind {
                MinIntegralKind::I => mpd.g_inv.map(|x| x.conj()),
                _ => {
                    let scale = k_diag.powi(n as i32 - 1) * mpd.det_g;
                    mpd.g_inv.map(|x| x.conj() * scale)
                }
            };

            // Pencil spectrum: eigenvalues of L^H B L with Q = L L^H.
            let lq = q.clone().cholesky().ok_or_else(|| {
                Error::Degeneracy("normalization pairing is not positive definite".into())
            })?;
            let l = lq.l();
            let pencil = l.adjoint() * &b_mat * &l;
            let eig = pencil.symmetric_eigen();
            let mut spectrum: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            spectrum.sort_by(|x, y| y.partial_cmp(x).unwrap());
            let total: f64 = spectrum.iter().sum();
            if !(total > 0.0) {
                return Err(Error::Infeasible(
                    "second-jet block is trivial at this truncation".into(),
                ));
            }
            let value = 1.0 / total;

            // Deterministic representative of the extremal family: among the
            // top pencil eigenvectors, the one maximizing the leading
            // coefficient magnitude, rescaled to norm^2 = value and rotated
            // so its leading coefficient is positive real.
            let top = spectrum[0];
            let mut best: Option<DVector<C64>> = None;
            let mut best_lead = -1.0;
            for (idx, &mu) in eig.eigenvalues.iter().enumerate() {
                if mu < top * (1.0 - 1e-10) {
                    continue;
                }
                let x = eig.eigenvectors.column(idx).into_owned();
                let cand = (&w_t * (&l * x)).map(|z| z.conj());
                let lead = cand
                    .iter()
                    .find(|z| z.norm() > 1e-14)
                    .map(|z| z.norm())
                    .unwrap_or(0.0);
                if lead > best_lead {
                    best_lead = lead;
                    best = Some(cand);
                }
            }
            let mut c = best.ok_or_else(|| Error::Degeneracy("empty pencil".into()))?;
            let norm = c.norm();
            if norm > 0.0 {
                c /= C64::new(norm, 0.0);
                c *= C64::new(value.sqrt(), 0.0);
                let lead = c.iter().find(|z| z.norm() > 1e-14).copied();
                if let Some(lead) = lead {
                    let phase = lead / lead.norm();
                    c /= phase;
                }
            }
            let residuals: Vec<f64> = (&a * &c - &rhs).iter().map(|z| z.norm()).collect();
            Ok(Solved { value, coeffs_on: c, residuals, spectrum })
        }
        _ => {
            let (c, value) = least_norm(&a, &rhs)?;
            let residuals: Vec<f64> = (&a * &c - &rhs).iter().map(|z| z.norm()).collect();
            Ok(Solved { value, coeffs_on: c, residuals, spectrum: Vec::new() })
        }
    }
}

/// Solve a minimum integral for the model at `p` with direction `v`.
pub fn minimum_integral(
    model: &KernelModel,
    kind: MinIntegralKind,
    p: &[C64],
    v: &[C64],
) -> Result<MinIntegralResult> {
    let n = model.domain().dim();
    if p.len() != n || v.len() != n {
        return Err(Error::Contract("point/vector dimension mismatch".into()));
    }
    let big_n = model.truncation();
    if big_n < 2 {
        return Err(Error::Infeasible("truncation must be at least 2".into()));
    }
    if !model.certified(p) {
        return Err(Error::Uncertified(format!(
            "p needs domain scale {:.4} > r_eval {:.4}",
            model.domain().scale_to_contain(p),
            model.r_eval()
        )));
    }

    let jets = basis_jets(model, p, big_n);
    let solved = solve_kind(model, kind, &jets, p, v)?;

    let jets_lower = basis_jets(model, p, big_n - 2);
    let lower = solve_kind(model, kind, &jets_lower, p, v)?;
    let drift = (solved.value - lower.value).abs() / solved.value.abs().max(1e-300);

    // Convert the orthonormal-basis coefficients to monomial coefficients.
    let minimizer: Vec<C64> = solved
        .coeffs_on
        .iter()
        .zip(&jets.sqrt_inv_gamma)
        .map(|(c, &s)| c * s)
        .collect();

    Ok(MinIntegralResult {
        kind,
        value: solved.value,
        minimizer,
        residuals: solved.residuals,
        n_used: big_n,
        drift,
        spectrum: solved.spectrum,
    })
}

/// Both sides of the identities tying the minimum integrals to the kernel
/// and metric quantities, with relative residuals.
#[derive(Clone, Debug, serde::Serialize)]
pub struct IdentityReport {
    pub p: Vec<(f64, f64)>,
    pub v: Vec<(f64, f64)>,
    pub n_used: u32,
    pub max_drift: f64,
    pub kernel_value: f64,
    pub tau_sq: f64,
    pub sectional: f64,
    pub det_g: f64,
    pub beta: f64,
    pub ricci: f64,
    pub i0: f64,
    pub i1: f64,
    pub i2: f64,
    pub lambdas: Vec<f64>,
    pub big_i: f64,
    pub big_m: f64,
    /// Residuals, in order: K vs 1/I0; tau^2 vs I0/I1; R vs 2 - I1^2/(I0 I2);
    /// g vs I0^n/lambda; beta vs I0^{n + 1/(d+1)}/lambda; I vs K^{n-1} g M;
    /// Ric vs (n+1) - I1 lambda/(I0 M).
    pub residuals: Vec<f64>,
}

pub fn extremal_identity_report(
    model: &KernelModel,
    p: &[C64],
    v: &[C64],
) -> Result<IdentityReport> {
    let n = model.domain().dim();
    let d = model.order();
    let ev = SeriesEvaluator::new(model);

    let mpd = metric_tensor(&ev, p)?;
    let kernel_value = ev.kernel_diag(p)?;
    let tau_sq = mpd.tau_sq(v);
    let sectional = sectional_curvature(&ev, p, v)?;
    let ricci = ricci_curvature(&ev, p, v)?;
    let beta = beta_invariant(&ev, p)?;
    let det_g = mpd.det_g;

    let mut max_drift: f64 = 0.0;
    let mut run = |kind: MinIntegralKind| -> Result<f64> {
        let r = minimum_integral(model, kind, p, v)?;
        max_drift = max_drift.max(r.drift);
        Ok(r.value)
    };
    let i0 = run(MinIntegralKind::I0)?;
    let i1 = run(MinIntegralKind::I1)?;
    let i2 = run(MinIntegralKind::I2)?;
    let mut lambdas = Vec::with_capacity(n);
    for k in 1..=n {
        lambdas.push(run(MinIntegralKind::Lambda(k))?);
    }
    let big_i = run(MinIntegralKind::I)?;
    let big_m = run(MinIntegralKind::M)?;
    let lambda: f64 = lambdas.iter().product();

    let rel = |lhs: f64, rhs: f64| (lhs - rhs).abs() / lhs.abs().max(1e-300);
    let residuals = vec![
        rel(kernel_value, 1.0 / i0),
        rel(tau_sq, i0 / i1),
        rel(sectional, 2.0 - i1 * i1 / (i0 * i2)),
        rel(det_g, i0.powi(n as i32) / lambda),
        rel(beta, i0.powf(n as f64 + 1.0 / (d as f64 + 1.0)) / lambda),
        rel(big_i, kernel_value.powi(n as i32 - 1) * det_g * big_m),
        rel(ricci, (n as f64 + 1.0) - i1 * lambda / (i0 * big_m)),
    ];

    Ok(IdentityReport {
        p: p.iter().map(|z| (z.re, z.im)).collect(),
        v: v.iter().map(|z| (z.re, z.im)).collect(),
        n_used: model.truncation(),
        max_drift,
        kernel_value,
        tau_sq,
        sectional,
        det_g,
        beta,
        ricci,
        i0,
        i1,
        i2,
        lambdas,
        big_i,
        big_m,
        residuals,
    })
}

/// One comparison row of a monotonicity check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MonotonicityRow {
    pub quantity: String,
    pub inner: f64,
    pub outer: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct MonotonicityReport {
    pub rows: Vec<MonotonicityRow>,
    pub all_satisfied: bool,
}

/// Containment test for Reinhardt domains via their shadows: every sampled
/// boundary ray of the inner shadow must stay inside the outer shadow.
pub fn domain_contained(inner: &DomainSpec, outer: &DomainSpec) -> Result<bool> {
    if inner.dim() != outer.dim() {
        return Err(Error::Contract("dimension mismatch".into()));
    }
    let n = inner.dim();
    for dir in crate::core::domain::shadow_directions(n, 64) {
        let sigma = crate::core::domain::shadow_boundary_scale(inner, &dir)?;
        let t: Vec<f64> = dir.iter().map(|u| u * sigma * (1.0 - 1e-9)).collect();
        if outer.rho_shadow(&t) >= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monotonicity of the minimum integrals under domain inclusion, with the
/// anti-monotone `K tau^2` check.
pub fn monotonicity_check(
    inner: &KernelModel,
    outer: &KernelModel,
    p: &[C64],
    v: &[C64],
) -> Result<MonotonicityReport> {
    if !domain_contained(inner.domain(), outer.domain())? {
        return Err(Error::Containment(format!(
            "{:?} is not contained in {:?}",
            inner.domain(),
            outer.domain()
        )));
    }
    let n = inner.domain().dim();
    let slack = 1e-9;
    let mut rows = Vec::new();
    let le = |label: String, a: f64, b: f64, rows: &mut Vec<MonotonicityRow>| {
        rows.push(MonotonicityRow {
            quantity: label,
            inner: a,
            outer: b,
            satisfied: a <= b + slack * a.abs().max(b.abs()),
        });
    };

    for kind in [MinIntegralKind::I0, MinIntegralKind::I1, MinIntegralKind::I2] {
        let a = minimum_integral(inner, kind, p, v)?.value;
        let b = minimum_integral(outer, kind, p, v)?.value;
        le(kind.label(), a, b, &mut rows);
    }
    for k in 1..=n {
        let a = minimum_integral(inner, MinIntegralKind::Lambda(k), p, v)?.value;
        let b = minimum_integral(outer, MinIntegralKind::Lambda(k), p, v)?.value;
        le(format!("lambda_{k}"), a, b, &mut rows);
    }
    {
        let a = minimum_integral(inner, MinIntegralKind::M, p, v)?.value;
        let b = minimum_integral(outer, MinIntegralKind::M, p, v)?.value;
        le("M".into(), a, b, &mut rows);
    }
    {
        // K tau^2 is anti-monotone (it equals 1/I1).
        let evi = SeriesEvaluator::new(inner);
        let evo = SeriesEvaluator::new(outer);
        let a = evi.kernel_diag(p)? * metric_tensor(&evi, p)?.tau_sq(v);
        let b = evo.kernel_diag(p)? * metric_tensor(&evo, p)?.tau_sq(v);
        rows.push(MonotonicityRow {
            quantity: "K*tau^2".into(),
            inner: a,
            outer: b,
            satisfied: a + slack * a.abs().max(b.abs()) >= b,
        });
    }
    let all = rows.iter().all(|r| r.satisfied);
    Ok(MonotonicityReport { rows, all_satisfied: all })
}

/// Minimizer of `I0` in monomial coefficients predicted by the reproducing
/// property: the expansion of `K(., p)/K(p)`.
pub fn i0_minimizer_reference(model: &KernelModel, p: &[C64]) -> Result<Vec<C64>> {
    let jets = basis_jets(model, p, model.truncation());
    let ev = SeriesEvaluator::new(model);
    let k = ev.kernel_diag(p)?;
    Ok(jets
        .values
        .iter()
        .zip(&jets.sqrt_inv_gamma)
        .map(|(e, &s)| e.conj() / k * s)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::build_model;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn disc_model() -> KernelModel {
        build_model(&DomainSpec::ball(1), 0, 24, 1e-12).unwrap()
    }

    #[test]
    fn disc_i0_is_pi_with_constant_minimizer() {
        let m = disc_model();
        let r =
            minimum_integral(&m, MinIntegralKind::I0, &[c(0.0, 0.0)], &[c(1.0, 0.0)]).unwrap();
        assert_relative_eq!(r.value, PI, epsilon = 1e-12);
        // Minimizer is the constant function 1.
        assert_abs_diff_eq!((r.minimizer[0] - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        for cc in &r.minimizer[1..] {
            assert_abs_diff_eq!(cc.norm(), 0.0, epsilon = 1e-12);
        }
        assert!(r.residuals.iter().all(|&x| x < 1e-12));
        assert!(r.drift < 1e-12);
    }

    #[test]
    fn disc_i1_and_i2() {
        let m = disc_model();
        let p = [c(0.0, 0.0)];
        let v = [c(1.0, 0.0)];
        let r1 = minimum_integral(&m, MinIntegralKind::I1, &p, &v).unwrap();
        assert_relative_eq!(r1.value, PI / 2.0, epsilon = 1e-12);
        let r2 = minimum_integral(&m, MinIntegralKind::I2, &p, &v).unwrap();
        assert_relative_eq!(r2.value, PI / 12.0, epsilon = 1e-12);
    }

    #[test]
    fn disc_big_i_and_m_close_the_curvature_identity() {
        // At the disc center I = pi/6 and M = pi/12, the values forced by
        // Ric = (n+1) - I1 lambda / (I0 M) = -1.
        let m = disc_model();
        let p = [c(0.0, 0.0)];
        let v = [c(1.0, 0.0)];
        let i = minimum_integral(&m, MinIntegralKind::I, &p, &v).unwrap();
        assert_relative_eq!(i.value, PI / 6.0, epsilon = 1e-10);
        let bm = minimum_integral(&m, MinIntegralKind::M, &p, &v).unwrap();
        assert_relative_eq!(bm.value, PI / 12.0, epsilon = 1e-10);
    }

    #[test]
    fn ball2_identities_at_center_and_off_center() {
        let m = build_model(&DomainSpec::ball(2), 1, 22, 1e-12).unwrap();
        for p in [[c(0.0, 0.0), c(0.0, 0.0)], [c(0.3, 0.0), c(0.2, 0.0)]] {
            let rep = extremal_identity_report(&m, &p, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
            for (i, res) in rep.residuals.iter().enumerate() {
                assert!(*res < 1e-7, "identity {i} residual {res:.3e} at p = {p:?}");
            }
        }
    }

    #[test]
    fn i0_minimizer_is_normalized_kernel() {
        let m = build_model(&DomainSpec::ball(2), 0, 16, 1e-12).unwrap();
        let p = [c(0.35, 0.1), c(-0.2, 0.15)];
        let r =
            minimum_integral(&m, MinIntegralKind::I0, &p, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let reference = i0_minimizer_reference(&m, &p).unwrap();
        for (cm, rf) in r.minimizer.iter().zip(&reference) {
            assert_abs_diff_eq!((cm - rf).norm(), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn homogeneity_in_v() {
        let m = disc_model();
        let p = [c(0.2, 0.0)];
        let v = [c(1.0, 0.0)];
        let v2 = [c(2.0, 0.0)];
        let i1 = minimum_integral(&m, MinIntegralKind::I1, &p, &v).unwrap().value;
        let i1s = minimum_integral(&m, MinIntegralKind::I1, &p, &v2).unwrap().value;
        assert_relative_eq!(i1s, i1 / 4.0, epsilon = 1e-10);
        let i2 = minimum_integral(&m, MinIntegralKind::I2, &p, &v).unwrap().value;
        let i2s = minimum_integral(&m, MinIntegralKind::I2, &p, &v2).unwrap().value;
        assert_relative_eq!(i2s, i2 / 16.0, epsilon = 1e-10);
        for kind in [MinIntegralKind::I, MinIntegralKind::M] {
            let a = minimum_integral(&m, kind, &p, &v).unwrap().value;
            let b = minimum_integral(&m, kind, &p, &v2).unwrap().value;
            assert_relative_eq!(b, a / 4.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn lambda_product_identity() {
        // prod lambda_k = 1/(K^n g).
        let m = build_model(&DomainSpec::ball(2), 0, 18, 1e-12).unwrap();
        let p = [c(0.1, 0.05), c(0.2, -0.1)];
        let mut lambda = 1.0;
        for k in 1..=2 {
            lambda *=
                minimum_integral(&m, MinIntegralKind::Lambda(k), &p, &[c(1.0, 0.0), c(0.0, 0.0)])
                    .unwrap()
                    .value;
        }
        let ev = SeriesEvaluator::new(&m);
        let kk = ev.kernel_diag(&p).unwrap();
        let g = metric_tensor(&ev, &p).unwrap().det_g;
        assert_relative_eq!(lambda, 1.0 / (kk * kk * g), epsilon = 1e-8);
    }

    #[test]
    fn monotonicity_disc_in_bigger_disc() {
        // I0 = pi on the unit disc, 4 pi on the radius-2 disc.
        let inner = build_model(&DomainSpec::ball(1), 0, 16, 1e-12).unwrap();
        let outer =
            build_model(&DomainSpec::diagonal_ball(&[0.25]).unwrap(), 0, 16, 1e-12).unwrap();
        let rep =
            monotonicity_check(&inner, &outer, &[c(0.0, 0.0)], &[c(1.0, 0.0)]).unwrap();
        assert!(rep.all_satisfied);
        let i0 = &rep.rows[0];
        assert_relative_eq!(i0.inner, PI, epsilon = 1e-10);
        assert_relative_eq!(i0.outer, 4.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn equal_domains_give_equalities() {
        let a = build_model(&DomainSpec::ball(2), 0, 12, 1e-12).unwrap();
        let b = a.clone();
        let rep = monotonicity_check(
            &a,
            &b,
            &[c(0.1, 0.0), c(0.0, 0.0)],
            &[c(1.0, 0.0), c(0.5, 0.0)],
        )
        .unwrap();
        assert!(rep.all_satisfied);
        for row in &rep.rows {
            assert_relative_eq!(row.inner, row.outer, epsilon = 1e-12);
        }
    }

    #[test]
    fn containment_violation_detected() {
        let big = build_model(&DomainSpec::diagonal_ball(&[0.25]).unwrap(), 0, 8, 1e-12).unwrap();
        let small = build_model(&DomainSpec::ball(1), 0, 8, 1e-12).unwrap();
        assert!(matches!(
            monotonicity_check(&big, &small, &[c(0.0, 0.0)], &[c(1.0, 0.0)]),
            Err(Error::Containment(_))
        ));
    }

    #[test]
    fn infeasible_when_truncation_too_small() {
        let m = build_model(&DomainSpec::ball(1), 0, 2, 1e-12).unwrap();
        // N = 2 passes the floor but N - 2 = 0 cannot satisfy I2 constraints.
        assert!(minimum_integral(&m, MinIntegralKind::I2, &[c(0.0, 0.0)], &[c(1.0, 0.0)])
            .is_err());
    }
}
