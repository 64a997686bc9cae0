//! Exact kernels for the homogeneous model domains.

use crate::core::{log_gamma, DomainSpec, C64};
use crate::error::{Error, Result};

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// `ln c` with `c = Gamma((d+1)(n+1)) / (n! Gamma(d(n+1)+1))`, the constant
/// relating the order-`d` ball kernel to the `(d+1)`-st power of the Bergman
/// kernel.
pub fn log_weight_constant(n: usize, d: u32) -> f64 {
    let nf = n as f64;
    let df = d as f64;
    log_gamma((df + 1.0) * (nf + 1.0)).unwrap()
        - log_gamma(nf + 1.0).unwrap()
        - log_gamma(df * (nf + 1.0) + 1.0).unwrap()
}

pub fn weight_constant(n: usize, d: u32) -> f64 {
    log_weight_constant(n, d).exp()
}

fn herm_inner(z: &[C64], w: &[C64]) -> C64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

/// Principal power `u^{-m}` for `Re u > 0`.
fn recip_pow(u: C64, m: f64) -> C64 {
    (-m * u.ln()).exp()
}

fn disc_kernel(d: u32, z: C64, w: C64) -> C64 {
    let df = d as f64;
    let pref = (2.0 * df + 1.0) * (-(df + 1.0) * LN_PI).exp();
    pref * recip_pow(C64::new(1.0, 0.0) - z * w.conj(), 2.0 * (df + 1.0))
}

/// Exact `K_{D,d}(z, w)` for the ball, polydisc and diagonal ball.
///
/// The diagonal ball is pushed forward to the unit ball under the linear map
/// `z_i -> sqrt(a_i) z_i` with the `(det F')^{d+1}` transformation rule.
pub fn closed_kernel(spec: &DomainSpec, d: u32, z: &[C64], w: &[C64]) -> Result<C64> {
    if spec.rho(z) > 1e-12 || spec.rho(w) > 1e-12 {
        return Err(Error::OutsideDomain(format!(
            "closed kernel arguments must lie in the closure (rho = {:.3e}, {:.3e})",
            spec.rho(z),
            spec.rho(w)
        )));
    }
    match spec {
        DomainSpec::Ball { n } => {
            let m = (d as f64 + 1.0) * (*n as f64 + 1.0);
            let pref = (log_weight_constant(*n, d)
                + (d as f64 + 1.0) * (log_gamma(*n as f64 + 1.0).unwrap() - *n as f64 * LN_PI))
                .exp();
            Ok(pref * recip_pow(C64::new(1.0, 0.0) - herm_inner(z, w), m))
        }
        DomainSpec::Polydisc { .. } => {
            Ok(z.iter().zip(w).map(|(&a, &b)| disc_kernel(d, a, b)).product())
        }
        DomainSpec::DiagonalBall { n, scales } => {
            let fz: Vec<C64> = z.iter().zip(scales).map(|(v, a)| v * a.sqrt()).collect();
            let fw: Vec<C64> = w.iter().zip(scales).map(|(v, a)| v * a.sqrt()).collect();
            let det_pow: f64 = scales.iter().map(|a| a.powi(d as i32 + 1)).product();
            Ok(det_pow * closed_kernel(&DomainSpec::Ball { n: *n }, d, &fz, &fw)?)
        }
        DomainSpec::SmoothReinhardt { .. } => Err(Error::Unsupported(
            "no closed kernel for general smooth Reinhardt domains".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn disc_bergman_at_origin() {
        let v = closed_kernel(&DomainSpec::ball(1), 0, &[c(0.0, 0.0)], &[c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(v.re, 1.0 / PI, epsilon = 1e-15);
    }

    #[test]
    fn polydisc2_weighted_at_origin() {
        let z = [c(0.0, 0.0), c(0.0, 0.0)];
        let v = closed_kernel(&DomainSpec::polydisc(2), 1, &z, &z).unwrap();
        assert_abs_diff_eq!(v.re, 9.0 / PI.powi(4), epsilon = 1e-14);
    }

    #[test]
    fn diagonal_ball_transformation_at_origin() {
        let spec = DomainSpec::diagonal_ball(&[4.0, 1.5]).unwrap();
        let z = [c(0.0, 0.0), c(0.0, 0.0)];
        let v = closed_kernel(&spec, 1, &z, &z).unwrap();
        let ball = closed_kernel(&DomainSpec::ball(2), 1, &z, &z).unwrap();
        assert_abs_diff_eq!(v.re, (4.0 * 1.5f64).powi(2) * ball.re, epsilon = 1e-12);
    }

    #[test]
    fn weight_constants() {
        assert_abs_diff_eq!(weight_constant(1, 0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(weight_constant(1, 1), 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(weight_constant(2, 1), 10.0, epsilon = 1e-13);
    }

    #[test]
    fn hermitian_antisymmetry() {
        let spec = DomainSpec::ball(2);
        let z = [c(0.2, 0.3), c(-0.1, 0.4)];
        let w = [c(-0.3, 0.1), c(0.2, 0.2)];
        let a = closed_kernel(&spec, 1, &z, &w).unwrap();
        let b = closed_kernel(&spec, 1, &w, &z).unwrap();
        assert_abs_diff_eq!((a - b.conj()).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn outside_closure_rejected() {
        let spec = DomainSpec::ball(1);
        assert!(closed_kernel(&spec, 0, &[c(1.2, 0.0)], &[c(0.0, 0.0)]).is_err());
    }
}
