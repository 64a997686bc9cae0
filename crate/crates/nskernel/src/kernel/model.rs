//! Truncated series models of the weighted kernels.
//!
//! A model carries the moment table `{alpha -> gamma_alpha}` for `|alpha| <= N`
//! together with a truncation certificate: a geometric-ratio tail bound valid
//! on the domain scaled by `r_eval`. Moments are stored in log space; series
//! are assembled with compensated summation.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rayon::prelude::*;

use super::moments::{
    ball_log_moment, diagonal_log_moment, polydisc_log_moment, shadow_moment,
    shadow_monomial_sup, ShadowWeight, UnitWeight,
};
use crate::core::domain::{shadow_boundary_scale, shadow_directions};
use crate::core::{enumerate_multiindices, CPoint, DomainSpec, MultiIndex, C64};
use crate::error::{Error, Result};
use crate::quad::KahanSum;

/// Kernel value together with its certification flag: `certified` is false
/// when either argument lies outside the region the tail bound was stated on.
#[derive(Clone, Copy, Debug)]
pub struct KernelValue {
    pub value: C64,
    pub certified: bool,
}

/// Diagonal kernel jet: `d^A_z d^B_wbar K(z, w)|_{w=z}` for `|A|, |B| <= 2`.
#[derive(Clone, Debug)]
pub struct KernelJet {
    pub z: CPoint,
    pub values: BTreeMap<(MultiIndex, MultiIndex), C64>,
    pub certified: bool,
}

impl KernelJet {
    pub fn get(&self, a: &MultiIndex, b: &MultiIndex) -> C64 {
        self.values[&(a.clone(), b.clone())]
    }
}

/// Computable surrogate of the order-`d` weighted kernel on a Reinhardt
/// domain: moments for `|alpha| <= N` plus a tail certificate.
#[derive(Clone, Debug)]
pub struct KernelModel {
    domain: DomainSpec,
    d: u32,
    truncation: u32,
    tol: f64,
    /// Certified region is the closed domain scaled by this factor. Stated as
    /// a domain shrink rather than a coordinate box so that ball-like domains
    /// keep a nonempty certificate near the boundary.
    r_eval: f64,
    indices: Vec<MultiIndex>,
    log_moments: Vec<f64>,
    inv_moments: Vec<f64>,
    tail_bound: f64,
    base: Option<Box<KernelModel>>,
}

impl KernelModel {
    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn r_eval(&self) -> f64 {
        self.r_eval
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn base_model(&self) -> Option<&KernelModel> {
        self.base.as_deref()
    }

    pub fn log_moment(&self, alpha: &MultiIndex) -> Option<f64> {
        self.indices.iter().position(|a| a == alpha).map(|i| self.log_moments[i])
    }

    pub fn moment(&self, alpha: &MultiIndex) -> Option<f64> {
        self.log_moment(alpha).map(f64::exp)
    }

    /// Whether `z` lies in the certified region `r_eval * closure(D)`.
    pub fn certified(&self, z: &[C64]) -> bool {
        self.domain.scale_to_contain(z) <= self.r_eval + 1e-12
    }

    /// A lower-truncation view sharing this model's moments; used for
    /// truncation-drift estimates without rebuilding quadrature data.
    pub fn truncated(&self, sub_n: u32) -> KernelModel {
        assert!(sub_n <= self.truncation);
        let mut indices = Vec::new();
        let mut log_moments = Vec::new();
        let mut inv_moments = Vec::new();
        for ((alpha, &lg), &ig) in
            self.indices.iter().zip(&self.log_moments).zip(&self.inv_moments)
        {
            if alpha.degree() <= sub_n {
                indices.push(alpha.clone());
                log_moments.push(lg);
                inv_moments.push(ig);
            }
        }
        let mut m = KernelModel {
            domain: self.domain.clone(),
            d: self.d,
            truncation: sub_n,
            tol: self.tol,
            r_eval: self.r_eval,
            indices,
            log_moments,
            inv_moments,
            tail_bound: f64::INFINITY,
            base: None,
        };
        if let Ok(tb) = truncation_tail_bound(&m, 0.0) {
            m.tail_bound = tb;
        }
        m
    }

    /// Diagonal kernel on the shadow variables `t_i = |z_i|^2`; this is the
    /// weight source `K_{D,0}(t)` when the model has order 0.
    pub fn kernel_diag_shadow(&self, t: &[f64]) -> f64 {
        let mut acc = KahanSum::new();
        for (alpha, &ig) in self.indices.iter().zip(&self.inv_moments) {
            let mut term = ig;
            for (i, &a) in alpha.0.iter().enumerate() {
                term *= t[i].powi(a as i32);
            }
            acc.add(term);
        }
        acc.value()
    }

    /// Diagonal shadow kernel with the dropped tail completed geometrically
    /// from the last two degree shells. The series has positive terms, so
    /// the truncated value underestimates; the completion removes most of
    /// that bias near the shadow boundary, where weighted moment integrands
    /// need the weight.
    pub fn kernel_diag_shadow_completed(&self, t: &[f64]) -> f64 {
        let nshell = self.truncation as usize;
        let mut shells = vec![KahanSum::new(); nshell + 1];
        for (alpha, &ig) in self.indices.iter().zip(&self.inv_moments) {
            let mut term = ig;
            for (i, &a) in alpha.0.iter().enumerate() {
                term *= t[i].powi(a as i32);
            }
            shells[alpha.degree() as usize].add(term);
        }
        let mut acc = KahanSum::new();
        for s in &shells {
            acc.add(s.value());
        }
        let mut value = acc.value();
        if nshell >= 1 {
            let last = shells[nshell].value();
            let prev = shells[nshell - 1].value();
            if prev > 0.0 {
                let q = last / prev;
                if q >= 1.0 {
                    // Divergent tail: the point sits on or outside the
                    // shadow boundary.
                    return f64::INFINITY;
                }
                if q > 0.0 {
                    value += last * q / (1.0 - q);
                }
            }
        }
        value
    }
}

struct ModelWeight<'a> {
    base: &'a KernelModel,
    d: u32,
}

impl ShadowWeight for ModelWeight<'_> {
    fn eval(&self, t: &[f64]) -> f64 {
        let k = self.base.kernel_diag_shadow_completed(t);
        if k.is_finite() {
            k.powi(-(self.d as i32))
        } else {
            0.0
        }
    }
}

/// Build a kernel model. `r_eval` defaults to 0.9 when not given.
///
/// Ball, polydisc and diagonal-ball moments come from their Gamma-ratio
/// closed forms; SmoothReinhardt moments are quadrature integrals over the
/// shadow, weighted by an order-0 base model at truncation `N + 10` when
/// `d >= 1` (built recursively unless supplied).
pub fn build_model(
    spec: &DomainSpec,
    d: u32,
    truncation: u32,
    tol: f64,
) -> Result<KernelModel> {
    build_model_with(spec, d, truncation, tol, None, None)
}

pub fn build_model_with(
    spec: &DomainSpec,
    d: u32,
    truncation: u32,
    tol: f64,
    r_eval: Option<f64>,
    base: Option<KernelModel>,
) -> Result<KernelModel> {
    spec.validate()?;
    let n = spec.dim();
    // Guardrails keeping moment tables in the 1e4 range.
    if n > 3 {
        return Err(Error::Unsupported(format!("dimension guardrail: n <= 3, got {n}")));
    }
    if truncation > 60 {
        return Err(Error::Unsupported(format!(
            "truncation guardrail: N <= 60, got {truncation}"
        )));
    }
    let r_eval = r_eval.unwrap_or(0.9);
    if !(r_eval > 0.0 && r_eval < 1.0) {
        return Err(Error::Domain(format!("r_eval must lie in (0,1), got {r_eval}")));
    }
    let indices = enumerate_multiindices(n, truncation);

    let (log_moments, base_model, weight_rel_err) = match spec {
        DomainSpec::Ball { .. } => (
            indices.iter().map(|a| ball_log_moment(n, d, a)).collect::<Vec<_>>(),
            None,
            0.0,
        ),
        DomainSpec::Polydisc { .. } => {
            (indices.iter().map(|a| polydisc_log_moment(d, a)).collect(), None, 0.0)
        }
        DomainSpec::DiagonalBall { scales, .. } => (
            indices.iter().map(|a| diagonal_log_moment(n, d, scales, a)).collect(),
            None,
            0.0,
        ),
        DomainSpec::SmoothReinhardt { .. } => {
            if d == 0 {
                let logs = indices
                    .par_iter()
                    .map(|a| shadow_moment(spec, a, &UnitWeight, tol / 10.0).map(|v| v.ln()))
                    .collect::<Result<Vec<_>>>()?;
                (logs, None, 0.0)
            } else {
                let base = match base {
                    Some(b) => {
                        if b.order() != 0 || b.truncation() < truncation {
                            return Err(Error::Domain(
                                "base model must have order 0 and truncation >= N".into(),
                            ));
                        }
                        b
                    }
                    None => build_model_with(spec, 0, truncation + 10, tol, Some(r_eval), None)?,
                };
                let weight = ModelWeight { base: &base, d };
                let logs = indices
                    .par_iter()
                    .map(|a| shadow_moment(spec, a, &weight, tol / 10.0).map(|v| v.ln()))
                    .collect::<Result<Vec<_>>>()?;
                // First-order propagation of the weight error: the relative
                // uncertainty of K_0 enters each moment as d * (dK/K).
                let gamma0 = base.inv_moments[0].recip();
                let rel = d as f64 * base.tail_bound * gamma0;
                (logs, Some(Box::new(base)), rel)
            }
        }
    };

    for (a, &lg) in indices.iter().zip(&log_moments) {
        if !lg.is_finite() {
            return Err(Error::Degeneracy(format!("nonpositive moment at alpha = {:?}", a.0)));
        }
    }
    let inv_moments: Vec<f64> = log_moments.iter().map(|&lg| (-lg).exp()).collect();

    let mut model = KernelModel {
        domain: spec.clone(),
        d,
        truncation,
        tol,
        r_eval,
        indices,
        log_moments,
        inv_moments,
        tail_bound: 0.0,
        base: base_model,
    };
    model.tail_bound = truncation_tail_bound(&model, weight_rel_err)?;
    Ok(model)
}

/// Geometric-ratio majorization of the dropped tail on `r_eval * closure(D)`,
/// from the last two degree shells, plus the propagated weight error.
fn truncation_tail_bound(model: &KernelModel, weight_rel_err: f64) -> Result<f64> {
    let spec = &model.domain;
    let s2 = model.r_eval * model.r_eval;
    let dirs: Vec<(Vec<f64>, f64)> = shadow_directions(spec.dim(), 32)
        .into_iter()
        .map(|u| {
            let sigma = shadow_boundary_scale(spec, &u)?;
            Ok((u, sigma))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut shell = vec![KahanSum::new(); model.truncation as usize + 1];
    let mut total = KahanSum::new();
    for (alpha, &ig) in model.indices.iter().zip(&model.inv_moments) {
        let m = alpha.degree();
        let sup = shadow_monomial_sup(spec, alpha, &dirs);
        let term = sup * s2.powi(m as i32) * ig;
        shell[m as usize].add(term);
        total.add(term);
    }
    let weight_term = weight_rel_err * total.value();
    if model.truncation == 0 {
        // No shell ratio available; the series is a single constant term.
        return Ok(weight_term);
    }
    let t_last = shell[model.truncation as usize].value();
    let t_prev = shell[model.truncation as usize - 1].value();
    if t_prev <= 0.0 {
        return Ok(weight_term);
    }
    let q = t_last / t_prev;
    let geo = if q < 0.999 { t_last * q / (1.0 - q) } else { f64::INFINITY };
    Ok(geo + weight_term)
}

/// Truncated series `sum_{|alpha| <= N} z^alpha conj(w)^alpha / gamma_alpha`.
pub fn kernel_eval(model: &KernelModel, z: &[C64], w: &[C64]) -> KernelValue {
    let n = model.domain.dim();
    debug_assert_eq!(z.len(), n);
    debug_assert_eq!(w.len(), n);
    // zeta_i = z_i conj(w_i); each term is zeta^alpha / gamma_alpha.
    let zeta: Vec<C64> = z.iter().zip(w).map(|(a, b)| a * b.conj()).collect();
    let pows = power_table(&zeta, model.truncation);
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for (alpha, &ig) in model.indices.iter().zip(&model.inv_moments) {
        let mut term = C64::new(ig, 0.0);
        for (i, &a) in alpha.0.iter().enumerate() {
            term *= pows[i][a as usize];
        }
        re.add(term.re);
        im.add(term.im);
    }
    KernelValue {
        value: C64::new(re.value(), im.value()),
        certified: model.certified(z) && model.certified(w),
    }
}

/// All diagonal mixed derivatives up to order (2, 2) by exact term-wise
/// differentiation of the truncated series.
pub fn kernel_jet(model: &KernelModel, z: &[C64]) -> KernelJet {
    let n = model.domain.dim();
    let jet_orders = enumerate_multiindices(n, 2);
    let pows = power_table(z, model.truncation);
    let conj_pows: Vec<Vec<C64>> =
        pows.iter().map(|row| row.iter().map(|v| v.conj()).collect()).collect();

    let mut sums: BTreeMap<(MultiIndex, MultiIndex), (KahanSum, KahanSum)> = BTreeMap::new();
    for a in &jet_orders {
        for b in &jet_orders {
            sums.insert((a.clone(), b.clone()), (KahanSum::new(), KahanSum::new()));
        }
    }

    for (alpha, &ig) in model.indices.iter().zip(&model.inv_moments) {
        for ((a, b), acc) in sums.iter_mut() {
            if !(alpha.dominates(a) && alpha.dominates(b)) {
                continue;
            }
            let coeff = alpha.falling_factorial(a) * alpha.falling_factorial(b) * ig;
            let mut term = C64::new(coeff, 0.0);
            let za = alpha.minus(a);
            let wb = alpha.minus(b);
            for i in 0..n {
                term *= pows[i][za.0[i] as usize];
                term *= conj_pows[i][wb.0[i] as usize];
            }
            acc.0.add(term.re);
            acc.1.add(term.im);
        }
    }

    let values = sums
        .into_iter()
        .map(|(k, (re, im))| (k, C64::new(re.value(), im.value())))
        .collect();
    KernelJet { z: CPoint(z.to_vec()), values, certified: model.certified(z) }
}

fn power_table(z: &[C64], max_degree: u32) -> Vec<Vec<C64>> {
    z.iter()
        .map(|&zi| {
            let mut row = Vec::with_capacity(max_degree as usize + 1);
            let mut v = C64::new(1.0, 0.0);
            row.push(v);
            for _ in 0..max_degree {
                v *= zi;
                row.push(v);
            }
            row
        })
        .collect()
}

// --- persistence ---------------------------------------------------------------

const FORMAT_HEADER: &str = "NSKERNEL-MOMENTS v1";

impl KernelModel {
    /// Write the documented text format: a version line, a header line of
    /// `key=value` fields (domain as compact JSON), then one line
    /// `a_1 ... a_n log_gamma_alpha` per moment.
    pub fn write<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{FORMAT_HEADER}")?;
        let dom = serde_json::to_string(&self.domain)
            .map_err(|e| Error::Format(format!("domain serialization failed: {e}")))?;
        writeln!(
            out,
            "domain={dom} d={} N={} tol={} r_eval={} tail_bound={}",
            self.d, self.truncation, self.tol, self.r_eval, self.tail_bound
        )?;
        for (alpha, lg) in self.indices.iter().zip(&self.log_moments) {
            let idx: Vec<String> = alpha.0.iter().map(|a| a.to_string()).collect();
            writeln!(out, "{} {}", idx.join(" "), lg)?;
        }
        Ok(())
    }

    pub fn save_to(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        self.write(&mut f)
    }

    pub fn read<R: Read>(input: R) -> Result<KernelModel> {
        let mut lines = BufReader::new(input).lines();
        let version = lines
            .next()
            .ok_or_else(|| Error::Format("empty model file".into()))??;
        if version.trim() != FORMAT_HEADER {
            return Err(Error::Format(format!("unexpected version line `{version}`")));
        }
        let header =
            lines.next().ok_or_else(|| Error::Format("missing header line".into()))??;
        let mut domain = None;
        let (mut d, mut n_t, mut tol, mut r_eval, mut tail) = (None, None, None, None, None);
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("malformed header field `{field}`")))?;
            match key {
                "domain" => {
                    domain = Some(serde_json::from_str::<DomainSpec>(value).map_err(|e| {
                        Error::Format(format!("bad domain in header: {e}"))
                    })?)
                }
                "d" => d = Some(value.parse::<u32>().map_err(|e| Error::Format(e.to_string()))?),
                "N" => {
                    n_t = Some(value.parse::<u32>().map_err(|e| Error::Format(e.to_string()))?)
                }
                "tol" => {
                    tol = Some(value.parse::<f64>().map_err(|e| Error::Format(e.to_string()))?)
                }
                "r_eval" => {
                    r_eval = Some(value.parse::<f64>().map_err(|e| Error::Format(e.to_string()))?)
                }
                "tail_bound" => {
                    tail = Some(value.parse::<f64>().map_err(|e| Error::Format(e.to_string()))?)
                }
                other => return Err(Error::Format(format!("unknown header key `{other}`"))),
            }
        }
        let domain = domain.ok_or_else(|| Error::Format("header missing domain".into()))?;
        let d = d.ok_or_else(|| Error::Format("header missing d".into()))?;
        let truncation = n_t.ok_or_else(|| Error::Format("header missing N".into()))?;
        let tol = tol.ok_or_else(|| Error::Format("header missing tol".into()))?;
        let r_eval = r_eval.ok_or_else(|| Error::Format("header missing r_eval".into()))?;
        let tail_bound = tail.ok_or_else(|| Error::Format("header missing tail_bound".into()))?;

        let n = domain.dim();
        let mut table: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != n + 1 {
                return Err(Error::Format(format!("bad moment line `{line}`")));
            }
            let mut alpha = Vec::with_capacity(n);
            for p in &parts[..n] {
                alpha.push(p.parse::<u32>().map_err(|e| Error::Format(e.to_string()))?);
            }
            let lg = parts[n].parse::<f64>().map_err(|e| Error::Format(e.to_string()))?;
            table.insert(MultiIndex(alpha), lg);
        }
        let indices = enumerate_multiindices(n, truncation);
        if table.len() != indices.len() {
            return Err(Error::Format(format!(
                "moment table covers {} indices, expected {}",
                table.len(),
                indices.len()
            )));
        }
        let log_moments: Vec<f64> = indices
            .iter()
            .map(|a| {
                table
                    .get(a)
                    .copied()
                    .ok_or_else(|| Error::Format(format!("missing moment for {:?}", a.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        let inv_moments = log_moments.iter().map(|&lg| (-lg).exp()).collect();
        Ok(KernelModel {
            domain,
            d,
            truncation,
            tol,
            r_eval,
            indices,
            log_moments,
            inv_moments,
            tail_bound,
            base: None,
        })
    }

    pub fn load_from(path: &Path) -> Result<KernelModel> {
        KernelModel::read(std::fs::File::open(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::RhoPoly;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trivial_model_single_moment() {
        let m = build_model(&DomainSpec::ball(1), 0, 0, 1e-10).unwrap();
        assert_eq!(m.indices().len(), 1);
        assert_abs_diff_eq!(m.moment(&MultiIndex(vec![0])).unwrap(), PI, epsilon = 1e-13);
    }

    #[test]
    fn ball2_weighted_first_moment() {
        // gamma_{(0,0)} = pi^4/2 * Gamma(4)/Gamma(6) = pi^4/40 for n=2, d=1.
        let m = build_model(&DomainSpec::ball(2), 1, 8, 1e-10).unwrap();
        let expect = PI.powi(4) / 40.0;
        assert_abs_diff_eq!(
            m.moment(&MultiIndex(vec![0, 0])).unwrap(),
            expect,
            epsilon = 1e-12 * expect
        );
    }

    #[test]
    fn series_matches_disc_closed_form() {
        // K_{disc,0}(0.5, 0.5) = 1/(pi (1 - 0.25)^2) = 16/(9 pi).
        let m = build_model(&DomainSpec::ball(1), 0, 40, 1e-12).unwrap();
        let v = kernel_eval(&m, &[c(0.5, 0.0)], &[c(0.5, 0.0)]);
        assert!(v.certified);
        assert_abs_diff_eq!(v.value.re, 16.0 / (9.0 * PI), epsilon = 1e-10);
        assert_abs_diff_eq!(v.value.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn series_matches_ball2_weighted_closed_form() {
        // c = Gamma(6)/(2 Gamma(4)) = 10 at n=2, d=1;
        // K(z,z) = c (2/pi^2)^2 (1-|z|^2)^{-6} at z = (0.3, 0.4).
        let m = build_model(&DomainSpec::ball(2), 1, 30, 1e-12).unwrap();
        let z = [c(0.3, 0.0), c(0.4, 0.0)];
        let v = kernel_eval(&m, &z, &z);
        let expect = 10.0 * (2.0 / (PI * PI)).powi(2) * 0.75f64.powi(-6);
        assert_abs_diff_eq!(v.value.re, expect, epsilon = 1e-8 * expect);
    }

    #[test]
    fn diagonal_kernel_at_origin_is_inverse_gamma0() {
        let m = build_model(&DomainSpec::polydisc(2), 1, 6, 1e-10).unwrap();
        let z = [c(0.0, 0.0), c(0.0, 0.0)];
        let v = kernel_eval(&m, &z, &z);
        assert_abs_diff_eq!(v.value.re, 9.0 / PI.powi(4), epsilon = 1e-13);
    }

    #[test]
    fn reinhardt_quadrature_build_matches_ball() {
        let rho =
            RhoPoly::new(2, vec![(vec![1, 0], 1.0), (vec![0, 1], 1.0), (vec![0, 0], -1.0)])
                .unwrap();
        let spec = DomainSpec::smooth_reinhardt(rho).unwrap();
        let m = build_model(&spec, 0, 6, 1e-10).unwrap();
        for alpha in m.indices() {
            let q = m.moment(alpha).unwrap();
            let exact = super::super::moments::ball_moment(2, 0, alpha);
            assert_abs_diff_eq!(q, exact, epsilon = 1e-8 * exact);
        }
    }

    #[test]
    fn jet_at_origin_diagonal_only() {
        let m = build_model(&DomainSpec::ball(2), 0, 10, 1e-10).unwrap();
        let jet = kernel_jet(&m, &[c(0.0, 0.0), c(0.0, 0.0)]);
        for ((a, b), v) in &jet.values {
            if a != b {
                assert_abs_diff_eq!(v.norm(), 0.0, epsilon = 1e-15);
            }
        }
        // values[(e1, e1)] = 1/gamma_{e1} = 6/pi^2.
        let e1 = MultiIndex(vec![1, 0]);
        assert_abs_diff_eq!(
            jet.get(&e1, &e1).re,
            6.0 / (PI * PI),
            epsilon = 1e-13
        );
    }

    #[test]
    fn jet_disc_first_mixed() {
        let m = build_model(&DomainSpec::ball(1), 0, 10, 1e-10).unwrap();
        let jet = kernel_jet(&m, &[c(0.0, 0.0)]);
        assert_abs_diff_eq!(
            jet.get(&MultiIndex(vec![1]), &MultiIndex(vec![1])).re,
            2.0 / PI,
            epsilon = 1e-14
        );
    }

    #[test]
    fn jet_hermitian_symmetry() {
        let m = build_model(&DomainSpec::ball(2), 1, 12, 1e-10).unwrap();
        let jet = kernel_jet(&m, &[c(0.21, 0.13), c(-0.32, 0.4)]);
        for ((a, b), v) in &jet.values {
            let sym = jet.get(b, a);
            assert_abs_diff_eq!((v - sym.conj()).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn tail_bound_certifies_series_truncation() {
        let m = build_model_with(&DomainSpec::ball(1), 0, 40, 1e-12, Some(0.8), None).unwrap();
        let z = [c(0.8, 0.0)];
        let series = kernel_eval(&m, &z, &z).value.re;
        let exact = 1.0 / (PI * (1.0 - 0.64f64).powi(2));
        assert!((series - exact).abs() <= m.tail_bound());
    }

    #[test]
    fn tail_bound_decreases_with_truncation() {
        let mut last = f64::INFINITY;
        for n_t in [10u32, 20, 30, 40] {
            let m =
                build_model_with(&DomainSpec::ball(2), 0, n_t, 1e-12, Some(0.7), None).unwrap();
            assert!(m.tail_bound() < last);
            last = m.tail_bound();
        }
    }

    #[test]
    fn persistence_roundtrip() {
        let m = build_model(&DomainSpec::diagonal_ball(&[4.0, 1.0]).unwrap(), 1, 8, 1e-10)
            .unwrap();
        let mut buf = Vec::new();
        m.write(&mut buf).unwrap();
        let back = KernelModel::read(buf.as_slice()).unwrap();
        assert_eq!(back.truncation(), m.truncation());
        assert_eq!(back.order(), m.order());
        for (a, b) in m.log_moments.iter().zip(&back.log_moments) {
            assert_eq!(a, b);
        }
        let z = [c(0.2, 0.1), c(0.3, -0.2)];
        let v1 = kernel_eval(&m, &z, &z).value;
        let v2 = kernel_eval(&back, &z, &z).value;
        assert_eq!(v1, v2);
    }
}
