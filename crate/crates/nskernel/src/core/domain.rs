//! Model domains and their canonical defining functions.
//!
//! Every variant is Reinhardt (invariant under independent coordinate
//! rotations), so kernels reduce to diagonal monomial series. Defining
//! functions are fixed per variant to make Levi-form values reproducible:
//! `|z|^2 - 1`, `max_i |z_i| - 1`, `sum a_i |z_i|^2 - 1` and
//! `rho_hat(|z_1|^2, ..., |z_n|^2)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;

/// A point of `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoint(pub Vec<C64>);

impl CPoint {
    pub fn zero(n: usize) -> Self {
        CPoint(vec![C64::new(0.0, 0.0); n])
    }

    pub fn from_re(re: &[f64]) -> Self {
        CPoint(re.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `sum |z_i|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Hermitian inner product `<z, w> = sum z_i conj(w_i)`.
    pub fn herm_inner(&self, w: &[C64]) -> C64 {
        self.0.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
    }

    /// `max_i |z_i|`, the radius that truncation certificates are stated in.
    pub fn max_coord_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Deref for CPoint {
    type Target = [C64];
    fn deref(&self) -> &[C64] {
        &self.0
    }
}

impl DerefMut for CPoint {
    fn deref_mut(&mut self) -> &mut [C64] {
        &mut self.0
    }
}

impl From<Vec<C64>> for CPoint {
    fn from(v: Vec<C64>) -> Self {
        CPoint(v)
    }
}

/// Sparse real polynomial in the Reinhardt variables `t_i = |z_i|^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RhoPoly {
    n: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl RhoPoly {
    pub fn new(n: usize, terms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        for (e, _) in &terms {
            if e.len() != n {
                return Err(Error::Domain(format!(
                    "exponent vector {e:?} does not match dimension {n}"
                )));
            }
        }
        Ok(RhoPoly { n, terms })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Vec<u32>, f64)] {
        &self.terms
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(t).map(|(&k, &x)| x.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// d rho_hat / d t_i.
    pub fn grad(&self, t: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for (e, c) in &self.terms {
            for i in 0..self.n {
                if e[i] == 0 {
                    continue;
                }
                let mut v = c * e[i] as f64;
                for j in 0..self.n {
                    let k = if j == i { e[j] - 1 } else { e[j] };
                    v *= t[j].powi(k as i32);
                }
                g[i] += v;
            }
        }
        g
    }

    /// d^2 rho_hat / d t_i d t_j.
    pub fn hess(&self, t: &[f64]) -> Vec<Vec<f64>> {
        let mut h = vec![vec![0.0; self.n]; self.n];
        for (e, c) in &self.terms {
            for i in 0..self.n {
                for j in 0..self.n {
                    let fij = if i == j {
                        if e[i] < 2 {
                            continue;
                        }
                        (e[i] * (e[i] - 1)) as f64
                    } else {
                        if e[i] == 0 || e[j] == 0 {
                            continue;
                        }
                        (e[i] * e[j]) as f64
                    };
                    let mut v = c * fij;
                    for k in 0..self.n {
                        let mut p = e[k];
                        if k == i {
                            p -= 1;
                        }
                        if k == j {
                            p -= 1;
                        }
                        v *= t[k].powi(p as i32);
                    }
                    h[i][j] += v;
                }
            }
        }
        h
    }
}

/// First and second complex derivatives of the defining function at a point.
#[derive(Clone, Debug)]
pub struct RhoJets {
    pub value: f64,
    /// `d rho / d z_i`.
    pub grad_z: Vec<C64>,
    /// `d^2 rho / d z_i d z_j`.
    pub hess_zz: DMatrix<C64>,
    /// `d^2 rho / d z_i d conj(z_j)` (Hermitian).
    pub hess_zzbar: DMatrix<C64>,
}

/// A model domain with canonical defining-function data.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    /// Unit ball `|z| < 1`.
    Ball { n: usize },
    /// Unit polydisc `max_i |z_i| < 1`. Non-smooth boundary; excluded from
    /// boundary-geometry operations.
    Polydisc { n: usize },
    /// Complex ellipsoid `sum a_i |z_i|^2 < 1` with all `a_i > 0`.
    DiagonalBall { n: usize, scales: Vec<f64> },
    /// `rho_hat(|z_1|^2, ..., |z_n|^2) < 0` for a real polynomial `rho_hat`.
    SmoothReinhardt { n: usize, rho: RhoPoly },
}

impl DomainSpec {
    pub fn ball(n: usize) -> Self {
        DomainSpec::Ball { n }
    }

    pub fn polydisc(n: usize) -> Self {
        DomainSpec::Polydisc { n }
    }

    pub fn diagonal_ball(scales: &[f64]) -> Result<Self> {
        if scales.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::Domain("diagonal ball scales must be positive".into()));
        }
        Ok(DomainSpec::DiagonalBall { n: scales.len(), scales: scales.to_vec() })
    }

    pub fn smooth_reinhardt(rho: RhoPoly) -> Result<Self> {
        let spec = DomainSpec::SmoothReinhardt { n: rho.dim(), rho };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Ball { n }
            | DomainSpec::Polydisc { n }
            | DomainSpec::DiagonalBall { n, .. }
            | DomainSpec::SmoothReinhardt { n, .. } => *n,
        }
    }

    /// Canonical defining function. Negative inside, zero on the boundary.
    pub fn rho(&self, z: &[C64]) -> f64 {
        match self {
            DomainSpec::Ball { .. } => z.iter().map(|w| w.norm_sqr()).sum::<f64>() - 1.0,
            DomainSpec::Polydisc { .. } => {
                z.iter().map(|w| w.norm()).fold(f64::NEG_INFINITY, f64::max) - 1.0
            }
            DomainSpec::DiagonalBall { scales, .. } => {
                z.iter().zip(scales).map(|(w, a)| a * w.norm_sqr()).sum::<f64>() - 1.0
            }
            DomainSpec::SmoothReinhardt { rho, .. } => {
                let t: Vec<f64> = z.iter().map(|w| w.norm_sqr()).collect();
                rho.eval(&t)
            }
        }
    }

    pub fn contains(&self, z: &[C64]) -> bool {
        self.rho(z) < 0.0
    }

    /// Evaluation of rho on the shadow variables `t_i = |z_i|^2 >= 0`.
    pub fn rho_shadow(&self, t: &[f64]) -> f64 {
        match self {
            DomainSpec::Ball { .. } => t.iter().sum::<f64>() - 1.0,
            DomainSpec::Polydisc { .. } => t.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x)) - 1.0,
            DomainSpec::DiagonalBall { scales, .. } => {
                t.iter().zip(scales).map(|(x, a)| a * x).sum::<f64>() - 1.0
            }
            DomainSpec::SmoothReinhardt { rho, .. } => rho.eval(t),
        }
    }

    /// Complex derivative data of the canonical defining function.
    /// The polydisc has no smooth defining function and is rejected.
    pub fn rho_jets(&self, z: &[C64]) -> Result<RhoJets> {
        let n = self.dim();
        match self {
            DomainSpec::Polydisc { .. } => Err(Error::Unsupported(
                "polydisc boundary is not smooth; boundary-geometry operations are undefined".into(),
            )),
            DomainSpec::Ball { .. } => Ok(RhoJets {
                value: self.rho(z),
                grad_z: z.iter().map(|w| w.conj()).collect(),
                hess_zz: DMatrix::zeros(n, n),
                hess_zzbar: DMatrix::identity(n, n),
            }),
            DomainSpec::DiagonalBall { scales, .. } => {
                let mut h = DMatrix::zeros(n, n);
                for i in 0..n {
                    h[(i, i)] = C64::new(scales[i], 0.0);
                }
                Ok(RhoJets {
                    value: self.rho(z),
                    grad_z: z.iter().zip(scales).map(|(w, a)| a * w.conj()).collect(),
                    hess_zz: DMatrix::zeros(n, n),
                    hess_zzbar: h,
                })
            }
            DomainSpec::SmoothReinhardt { rho, .. } => {
                // rho(z) = rho_hat(t), t_i = z_i conj(z_i):
                //   d rho / d z_i            = rho_t_i conj(z_i)
                //   d^2 rho / d z_i d z_j    = rho_t_i_t_j conj(z_i) conj(z_j)
                //   d^2 rho / d z_i d zb_j   = rho_t_i_t_j z_j conj(z_i) + delta_ij rho_t_i
                let t: Vec<f64> = z.iter().map(|w| w.norm_sqr()).collect();
                let g = rho.grad(&t);
                let hh = rho.hess(&t);
                let grad_z: Vec<C64> = (0..n).map(|i| g[i] * z[i].conj()).collect();
                let mut hzz = DMatrix::zeros(n, n);
                let mut hzzb = DMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        hzz[(i, j)] = hh[i][j] * z[i].conj() * z[j].conj();
                        hzzb[(i, j)] = hh[i][j] * z[j] * z[i].conj();
                    }
                    hzzb[(i, i)] += g[i];
                }
                Ok(RhoJets { value: rho.eval(&t), grad_z, hess_zz: hzz, hess_zzbar: hzzb })
            }
        }
    }

    /// Largest `r` with `r e_i` inside the domain.
    pub fn axis_radius(&self, i: usize) -> Result<f64> {
        match self {
            DomainSpec::Ball { .. } | DomainSpec::Polydisc { .. } => Ok(1.0),
            DomainSpec::DiagonalBall { scales, .. } => Ok(1.0 / scales[i].sqrt()),
            DomainSpec::SmoothReinhardt { rho, n } => {
                let f = |s: f64| {
                    let mut t = vec![0.0; *n];
                    t[i] = s;
                    rho.eval(&t)
                };
                let root = axis_root(f)?;
                Ok(root.sqrt())
            }
        }
    }

    /// Construction-time sanity checks; nontrivial only for SmoothReinhardt.
    pub fn validate(&self) -> Result<()> {
        if let DomainSpec::SmoothReinhardt { rho, n } = self {
            let zero = vec![0.0; *n];
            if !(rho.eval(&zero) < 0.0) {
                return Err(Error::Domain("rho_hat(0) must be negative".into()));
            }
            for i in 0..*n {
                self.axis_radius(i)?;
            }
            // Gradient of rho(z) must not vanish on a boundary sample.
            for dir in shadow_directions(*n, 24) {
                let s = shadow_boundary_scale(self, &dir)?;
                let t: Vec<f64> = dir.iter().map(|d| d * s).collect();
                let z: Vec<C64> = t.iter().map(|&x| C64::new(x.sqrt(), 0.0)).collect();
                let jets = self.rho_jets(&z)?;
                let gn: f64 = jets.grad_z.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
                if gn < 1e-10 {
                    return Err(Error::Domain(format!(
                        "defining-function gradient vanishes near boundary sample t = {t:?}"
                    )));
                }
            }
        }
        if let DomainSpec::DiagonalBall { scales, n } = self {
            if scales.len() != *n || scales.iter().any(|&a| !(a > 0.0)) {
                return Err(Error::Domain("diagonal ball scales must be positive".into()));
            }
        }
        Ok(())
    }

    /// Smallest `sigma > 0` with `z/sigma` in the closed domain, found by
    /// bisection; used for scaled-containment checks and truncation
    /// certificates. The domain must be star-convex about the origin (true
    /// for all variants).
    pub fn scale_to_contain(&self, z: &[C64]) -> f64 {
        if z.iter().all(|w| w.norm_sqr() == 0.0) {
            return 0.0;
        }
        let scaled = |s: f64| -> Vec<C64> { z.iter().map(|w| w / s).collect() };
        let mut hi = 1.0;
        while !self.contains(&scaled(hi)) {
            hi *= 2.0;
            if hi > 1e6 {
                return f64::INFINITY;
            }
        }
        let mut lo = hi;
        while self.contains(&scaled(lo)) {
            lo *= 0.5;
            if lo < 1e-12 {
                break;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.contains(&scaled(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

fn axis_root(f: impl Fn(f64) -> f64) -> Result<f64> {
    if !(f(0.0) < 0.0) {
        return Err(Error::Domain("origin is not interior".into()));
    }
    let mut hi = 1.0;
    let mut count = 0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        count += 1;
        if count > 60 {
            return Err(Error::Domain("domain is unbounded along a coordinate axis".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Deterministic directions on the positive unit simplex of R^n.
pub(crate) fn shadow_directions(n: usize, per_axis: usize) -> Vec<Vec<f64>> {
    match n {
        1 => vec![vec![1.0]],
        2 => (0..=per_axis)
            .map(|k| {
                let phi = std::f64::consts::FRAC_PI_2 * k as f64 / per_axis as f64;
                vec![phi.cos().powi(2), phi.sin().powi(2)]
            })
            .collect(),
        _ => {
            let m = (per_axis as f64).sqrt().ceil() as usize;
            let mut dirs = Vec::new();
            for a in 0..=m {
                for b in 0..=m {
                    let (x, y) = (a as f64 / m as f64, b as f64 / m as f64);
                    let mut d = vec![x, y, (2.0 - x - y).max(0.0)];
                    let s: f64 = d.iter().sum();
                    if s > 0.0 {
                        d.iter_mut().for_each(|v| *v /= s);
                        dirs.push(d);
                    }
                }
            }
            dirs
        }
    }
}

/// Positive scale `s` with `s * dir` on the shadow boundary.
pub(crate) fn shadow_boundary_scale(spec: &DomainSpec, dir: &[f64]) -> Result<f64> {
    let f = |s: f64| {
        let t: Vec<f64> = dir.iter().map(|d| d * s).collect();
        spec.rho_shadow(&t)
    };
    axis_root(f)
}

/// Levi form `sum_{mu,nu} d^2 rho / dz_mu dzb_nu (q) w_mu conj(w_nu)` of the
/// canonical defining function at a boundary point `q`, for a tangential
/// vector `w`.
pub fn levi_form(spec: &DomainSpec, q: &[C64], w: &[C64]) -> Result<f64> {
    let jets = spec.rho_jets(q)?;
    if jets.value.abs() > 1e-8 {
        return Err(Error::Contract(format!(
            "levi_form requires a boundary point; rho(q) = {:.3e}",
            jets.value
        )));
    }
    let grad_norm: f64 = jets.grad_z.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    // Tangency: <w, nu> = 0 for the Hermitian normal nu ~ conj(grad_z).
    let pairing: C64 = w.iter().zip(&jets.grad_z).map(|(wi, gi)| wi * gi).sum();
    let wnorm: f64 = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if pairing.norm() > 1e-8 * grad_norm * wnorm.max(1.0) {
        return Err(Error::Contract(format!(
            "levi_form requires a tangential vector; <w, nu> = {:.3e}",
            pairing.norm() / grad_norm
        )));
    }
    let mut v = C64::new(0.0, 0.0);
    for i in 0..q.len() {
        for j in 0..q.len() {
            v += jets.hess_zzbar[(i, j)] * w[i] * w[j].conj();
        }
    }
    Ok(v.re)
}

// --- serialization -----------------------------------------------------------

/// Schema: `{ "type": ..., "n": ..., "scales"?: [...], "rho_coeffs"?: [{"exponents": [...], "coeff": ...}] }`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainDoc {
    #[serde(rename = "type")]
    kind: String,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    scales: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho_coeffs: Option<Vec<RhoTermDoc>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RhoTermDoc {
    exponents: Vec<u32>,
    coeff: f64,
}

impl Serialize for DomainSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = match self {
            DomainSpec::Ball { n } => {
                DomainDoc { kind: "ball".into(), n: *n, scales: None, rho_coeffs: None }
            }
            DomainSpec::Polydisc { n } => {
                DomainDoc { kind: "polydisc".into(), n: *n, scales: None, rho_coeffs: None }
            }
            DomainSpec::DiagonalBall { n, scales } => DomainDoc {
                kind: "diagonal_ball".into(),
                n: *n,
                scales: Some(scales.clone()),
                rho_coeffs: None,
            },
            DomainSpec::SmoothReinhardt { n, rho } => DomainDoc {
                kind: "smooth_reinhardt".into(),
                n: *n,
                scales: None,
                rho_coeffs: Some(
                    rho.terms()
                        .iter()
                        .map(|(e, c)| RhoTermDoc { exponents: e.clone(), coeff: *c })
                        .collect(),
                ),
            },
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DomainSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let doc = DomainDoc::deserialize(d)?;
        let spec = match doc.kind.as_str() {
            "ball" => DomainSpec::Ball { n: doc.n },
            "polydisc" => DomainSpec::Polydisc { n: doc.n },
            "diagonal_ball" => {
                let scales = doc
                    .scales
                    .ok_or_else(|| DeError::custom("diagonal_ball requires `scales`"))?;
                if scales.len() != doc.n {
                    return Err(DeError::custom("`scales` length must equal `n`"));
                }
                DomainSpec::DiagonalBall { n: doc.n, scales }
            }
            "smooth_reinhardt" => {
                let coeffs = doc
                    .rho_coeffs
                    .ok_or_else(|| DeError::custom("smooth_reinhardt requires `rho_coeffs`"))?;
                let rho = RhoPoly::new(
                    doc.n,
                    coeffs.into_iter().map(|t| (t.exponents, t.coeff)).collect(),
                )
                .map_err(DeError::custom)?;
                DomainSpec::SmoothReinhardt { n: doc.n, rho }
            }
            other => return Err(DeError::custom(format!("unknown domain type `{other}`"))),
        };
        spec.validate().map_err(DeError::custom)?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ball_levi_is_identity_hessian() {
        let d = DomainSpec::ball(2);
        let q = [c(0.0, 0.0), c(1.0, 0.0)];
        let w = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_abs_diff_eq!(levi_form(&d, &q, &w).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn diagonal_ball_levi_scales() {
        let d = DomainSpec::diagonal_ball(&[4.0, 1.0]).unwrap();
        let q = [c(0.0, 0.0), c(1.0, 0.0)];
        let w = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_abs_diff_eq!(levi_form(&d, &q, &w).unwrap(), 4.0, epsilon = 1e-14);
    }

    #[test]
    fn reinhardt_levi_from_symbolic_hessian() {
        // rho_hat = t1 + t2 + 0.1 t1^2 - 1 at q = (0, 1), w = e1.
        // Independent route: rho(z) = |z1|^2 + |z2|^2 + 0.1|z1|^4 - 1, so
        // d^2 rho / dz1 dzb1 = 1 + 0.4 |z1|^2 = 1 at q.
        let rho = RhoPoly::new(
            2,
            vec![(vec![1, 0], 1.0), (vec![0, 1], 1.0), (vec![2, 0], 0.1), (vec![0, 0], -1.0)],
        )
        .unwrap();
        let d = DomainSpec::smooth_reinhardt(rho).unwrap();
        let q = [c(0.0, 0.0), c(1.0, 0.0)];
        let w = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_abs_diff_eq!(levi_form(&d, &q, &w).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn levi_phase_and_scale_invariance() {
        let d = DomainSpec::ball(2);
        let q = [c(0.0, 0.0), c(1.0, 0.0)];
        let w = [c(0.3, 0.4), c(0.0, 0.0)];
        let base = levi_form(&d, &q, &w).unwrap();
        let phase = C64::from_polar(1.0, 0.77);
        let wp: Vec<C64> = w.iter().map(|x| x * phase).collect();
        assert_abs_diff_eq!(levi_form(&d, &q, &wp).unwrap(), base, epsilon = 1e-13);
        let lam = c(1.5, -0.2);
        let wl: Vec<C64> = w.iter().map(|x| x * lam).collect();
        assert_abs_diff_eq!(levi_form(&d, &q, &wl).unwrap(), lam.norm_sqr() * base, epsilon = 1e-12);
    }

    #[test]
    fn non_tangential_vector_rejected() {
        let d = DomainSpec::ball(2);
        let q = [c(0.0, 0.0), c(1.0, 0.0)];
        let w = [c(0.0, 0.0), c(1.0, 0.0)];
        assert!(levi_form(&d, &q, &w).is_err());
    }

    #[test]
    fn polydisc_has_no_smooth_jets() {
        let d = DomainSpec::polydisc(2);
        assert!(d.rho_jets(&[c(0.5, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn domain_roundtrip_json() {
        let rho = RhoPoly::new(
            2,
            vec![(vec![1, 0], 1.0), (vec![0, 1], 1.0), (vec![2, 0], 0.1), (vec![0, 0], -1.0)],
        )
        .unwrap();
        for spec in [
            DomainSpec::ball(3),
            DomainSpec::polydisc(2),
            DomainSpec::diagonal_ball(&[4.0, 1.0]).unwrap(),
            DomainSpec::smooth_reinhardt(rho).unwrap(),
        ] {
            let s = serde_json::to_string(&spec).unwrap();
            let back: DomainSpec = serde_json::from_str(&s).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let s = r#"{"type": "ball", "n": 2, "radius": 2.0}"#;
        assert!(serde_json::from_str::<DomainSpec>(s).is_err());
    }

    #[test]
    fn unbounded_reinhardt_rejected() {
        // rho_hat = t1 - t2 - 1 is unbounded along t2.
        let rho =
            RhoPoly::new(2, vec![(vec![1, 0], 1.0), (vec![0, 1], -1.0), (vec![0, 0], -1.0)])
                .unwrap();
        assert!(DomainSpec::smooth_reinhardt(rho).is_err());
    }
}
