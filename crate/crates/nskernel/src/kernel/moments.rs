//! Moment coefficients `gamma_alpha = ||z^alpha||^2` of the weighted spaces.
//!
//! Closed Gamma-ratio forms exist for the ball, polydisc and diagonal ball;
//! general Reinhardt domains integrate `t^alpha K_0(t)^{-d}` over the shadow
//! by nested adaptive quadrature. All values are carried in log space.

use crate::core::{log_gamma, DomainSpec, MultiIndex};
use crate::error::{Error, Result};
use crate::quad::{adaptive, KahanSum};

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// `ln gamma_alpha` for the unit ball:
/// `gamma = pi^{(d+1)n}/(n!)^d * G(d(n+1)+1) prod G(a_i+1) / G((d+1)(n+1)+|a|)`.
pub fn ball_log_moment(n: usize, d: u32, alpha: &MultiIndex) -> f64 {
    let nf = n as f64;
    let df = d as f64;
    let mut v = (df + 1.0) * nf * LN_PI - df * log_gamma(nf + 1.0).unwrap()
        + log_gamma(df * (nf + 1.0) + 1.0).unwrap()
        - log_gamma((df + 1.0) * (nf + 1.0) + alpha.degree() as f64).unwrap();
    for &a in &alpha.0 {
        v += log_gamma(a as f64 + 1.0).unwrap();
    }
    v
}

/// `gamma_alpha` for the unit ball, in linear scale.
pub fn ball_moment(n: usize, d: u32, alpha: &MultiIndex) -> f64 {
    ball_log_moment(n, d, alpha).exp()
}

/// `ln gamma_alpha` for the unit polydisc: a product of disc moments
/// `pi^{d+1} B(a_i + 1, 2d + 1)` per coordinate.
pub fn polydisc_log_moment(d: u32, alpha: &MultiIndex) -> f64 {
    let df = d as f64;
    alpha
        .0
        .iter()
        .map(|&a| {
            (df + 1.0) * LN_PI + log_gamma(a as f64 + 1.0).unwrap()
                + log_gamma(2.0 * df + 1.0).unwrap()
                - log_gamma(a as f64 + 2.0 * df + 2.0).unwrap()
        })
        .sum()
}

/// `ln gamma_alpha` for the diagonal ball `sum a_i |z_i|^2 < 1`: the linear
/// map `z_i -> sqrt(a_i) z_i` onto the ball rescales each ball moment by
/// `prod a_i^{-(alpha_i + d + 1)}`.
pub fn diagonal_log_moment(n: usize, d: u32, scales: &[f64], alpha: &MultiIndex) -> f64 {
    let mut v = ball_log_moment(n, d, alpha);
    for (i, &a) in alpha.0.iter().enumerate() {
        v -= (a as f64 + d as f64 + 1.0) * scales[i].ln();
    }
    v
}

/// Weight on the Reinhardt shadow for a quadrature moment build: either the
/// trivial weight or `K_{D,0}(t)^{-d}` evaluated from an order-0 model.
pub trait ShadowWeight: Sync {
    fn eval(&self, t: &[f64]) -> f64;
}

pub struct UnitWeight;

impl ShadowWeight for UnitWeight {
    fn eval(&self, _t: &[f64]) -> f64 {
        1.0
    }
}

/// `gamma_alpha = pi^n Int_shadow t^alpha w(t) dt` by nested adaptive
/// Gauss-Legendre over the shadow `{t >= 0 : rho_hat(t) < 0}`, which is
/// downward closed for the supported domains.
pub fn shadow_moment(
    spec: &DomainSpec,
    alpha: &MultiIndex,
    weight: &dyn ShadowWeight,
    tol: f64,
) -> Result<f64> {
    let n = spec.dim();
    let mut prefix = vec![0.0; n];
    let integrand = |t: &[f64]| -> f64 {
        let mono: f64 =
            t.iter().zip(&alpha.0).map(|(&x, &a)| x.powi(a as i32)).product();
        mono * weight.eval(t)
    };
    let v = integrate_slice(spec, &mut prefix, 0, tol, &integrand)?;
    Ok(v * LN_PI.exp().powi(n as i32))
}

fn integrate_slice(
    spec: &DomainSpec,
    prefix: &mut Vec<f64>,
    k: usize,
    tol: f64,
    integrand: &dyn Fn(&[f64]) -> f64,
) -> Result<f64> {
    let n = spec.dim();
    let upper = slice_upper(spec, prefix, k)?;
    if upper <= 0.0 {
        return Ok(0.0);
    }
    if k == n - 1 {
        let mut local = prefix.clone();
        let mut f = move |t: f64| {
            local[k] = t;
            integrand(&local)
        };
        let (v, _) = adaptive(&mut f, 0.0, upper, tol, 20)?;
        return Ok(v);
    }
    let inner_tol = tol / (10.0 * upper.max(1.0));
    let local = prefix.clone();
    let mut failure: Option<Error> = None;
    let mut f = |t: f64| -> f64 {
        let mut scratch = local.clone();
        scratch[k] = t;
        match integrate_slice(spec, &mut scratch, k + 1, inner_tol, integrand) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                f64::NAN
            }
        }
    };
    let result = adaptive(&mut f, 0.0, upper, tol, 20);
    if let Some(e) = failure {
        return Err(e);
    }
    let (v, _) = result?;
    Ok(v)
}

/// Largest `s` with `(prefix_{<k}, s, 0, ..., 0)` inside the shadow closure.
fn slice_upper(spec: &DomainSpec, prefix: &[f64], k: usize) -> Result<f64> {
    let n = spec.dim();
    let eval = |s: f64| {
        let mut t = vec![0.0; n];
        t[..k].copy_from_slice(&prefix[..k]);
        t[k] = s;
        spec.rho_shadow(&t)
    };
    if eval(0.0) >= 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    let mut count = 0;
    while eval(hi) < 0.0 {
        hi *= 2.0;
        count += 1;
        if count > 60 {
            return Err(Error::Domain("shadow is unbounded along a slice".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if eval(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `sup_shadow t^alpha`, estimated over a deterministic direction sample of
/// the shadow boundary; used by truncation certificates. A 10% slack covers
/// the gap between the sample maximum and the true supremum.
pub fn shadow_monomial_sup(spec: &DomainSpec, alpha: &MultiIndex, dirs: &[(Vec<f64>, f64)]) -> f64 {
    let mut best: f64 = 0.0;
    for (u, sigma) in dirs {
        let mut v = KahanSum::new();
        let mut ok = true;
        for (i, &a) in alpha.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let t = sigma * u[i];
            if t <= 0.0 {
                ok = false;
                break;
            }
            v.add(a as f64 * t.ln());
        }
        if ok {
            best = best.max(v.value().exp());
        }
    }
    let _ = spec;
    1.1 * best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::RhoPoly;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn disc_area() {
        // gamma_0 for n=1, d=0 is the area of the unit disc.
        let v = ball_moment(1, 0, &MultiIndex(vec![0]));
        assert_abs_diff_eq!(v, PI, epsilon = 1e-13);
    }

    #[test]
    fn ball2_volume() {
        let v = ball_moment(2, 0, &MultiIndex(vec![0, 0]));
        assert_abs_diff_eq!(v, PI * PI / 2.0, epsilon = 1e-13);
    }

    #[test]
    fn weighted_disc_moment() {
        // 1/gamma_0 = K_{disc,1}(0) = 3/pi^2, so gamma_0 = pi^2/3.
        let v = ball_moment(1, 1, &MultiIndex(vec![0]));
        assert_abs_diff_eq!(v, PI * PI / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn ball_moment_matches_beta_quadrature() {
        // Independent oracle from the Dirichlet reduction: for n=2, d=1,
        // gamma_alpha = pi^4/2 * Int_0^1 (1-s)^3 s^{|a|+1} ds * C(a)
        // where the multinomial part is a1! a2! / (|a|+1)!.
        let alpha = MultiIndex(vec![2, 1]);
        let m = alpha.degree() as f64;
        let mut f = |s: f64| (1.0 - s).powi(3) * s.powf(m + 1.0);
        let (beta_int, _) = adaptive(&mut f, 0.0, 1.0, 1e-14, 30).unwrap();
        let multinom = 2.0 * 1.0 / 24.0; // a1! a2! / Gamma(|a| + n)
        let expect = PI.powi(4) / 2.0 * beta_int * multinom;
        assert_abs_diff_eq!(ball_moment(2, 1, &alpha), expect, epsilon = 1e-12 * expect);
    }

    #[test]
    fn polydisc_moment_product() {
        // K_{polydisc(2),1}(0,0) = 9/pi^4 means gamma_{(0,0)} = pi^4/9.
        let v = polydisc_log_moment(1, &MultiIndex(vec![0, 0])).exp();
        assert_abs_diff_eq!(v, PI.powi(4) / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_moment_matches_direct_disc_integral() {
        // Disc of radius 2 (a = 1/4), d = 0: gamma_k = pi R^{2k+2}/(k+1).
        for k in 0..5u32 {
            let v = diagonal_log_moment(1, 0, &[0.25], &MultiIndex(vec![k])).exp();
            let expect = PI * 4.0f64.powi(k as i32 + 1) / (k as f64 + 1.0);
            assert_abs_diff_eq!(v, expect, epsilon = 1e-12 * expect);
        }
    }

    #[test]
    fn shadow_quadrature_reproduces_ball_moments() {
        // The ball as a degenerate SmoothReinhardt domain.
        let rho =
            RhoPoly::new(2, vec![(vec![1, 0], 1.0), (vec![0, 1], 1.0), (vec![0, 0], -1.0)])
                .unwrap();
        let spec = DomainSpec::smooth_reinhardt(rho).unwrap();
        for alpha in [MultiIndex(vec![0, 0]), MultiIndex(vec![2, 1]), MultiIndex(vec![4, 3])] {
            let q = shadow_moment(&spec, &alpha, &UnitWeight, 1e-12).unwrap();
            let exact = ball_moment(2, 0, &alpha);
            assert_abs_diff_eq!(q, exact, epsilon = 1e-10 * exact);
        }
    }
}
