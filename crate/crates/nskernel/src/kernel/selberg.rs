//! The homogeneous-domain constant `c(s)` defined by
//! `1/c(s) = Int_D |K(z,w)|^{2s} / (K(z) K(w))^s * K(z) dV(z)`.
//!
//! The integral is taken over `z` with `w` fixed; transitivity of the
//! automorphism group makes the value independent of `w`, which is asserted
//! numerically rather than assumed.

use super::closed::closed_kernel;
use crate::core::{DomainSpec, C64};
use crate::error::{Error, Result};
use crate::quad::{adaptive, GaussRule, KahanSum};

/// `c(s)` for the unit ball or polydisc at a fixed interior `w`.
pub fn selberg_constant(spec: &DomainSpec, s: u32, w: &[C64]) -> Result<f64> {
    if s == 0 {
        return Err(Error::Domain("selberg constant requires s >= 1".into()));
    }
    if !spec.contains(w) {
        return Err(Error::OutsideDomain("selberg base point must be interior".into()));
    }
    match spec {
        DomainSpec::Ball { n: 1 } => Ok(1.0 / disc_integral(s, w[0])?),
        DomainSpec::Ball { n: 2 } => Ok(1.0 / ball2_integral(s, w)?),
        DomainSpec::Polydisc { .. } => {
            // Product domain and product kernel factor the integral.
            let mut c = 1.0;
            for &wi in w {
                c /= disc_integral(s, wi)?;
            }
            Ok(c)
        }
        _ => Err(Error::Unsupported(
            "selberg constant is implemented for Ball(1), Ball(2) and polydiscs".into(),
        )),
    }
}

fn integrand(spec: &DomainSpec, s: u32, z: &[C64], w: &[C64], kw: f64) -> f64 {
    let kzw = closed_kernel(spec, 0, z, w).unwrap_or(C64::new(0.0, 0.0));
    let kz = closed_kernel(spec, 0, z, z).map(|v| v.re).unwrap_or(0.0);
    if kz <= 0.0 {
        return 0.0;
    }
    kzw.norm_sqr().powi(s as i32) / (kz * kw).powi(s as i32) * kz
}

/// 2D polar quadrature over the unit disc; the angular direction uses a
/// uniform grid (spectrally accurate for the analytic periodic integrand).
fn disc_integral(s: u32, w: C64) -> Result<f64> {
    let spec = DomainSpec::ball(1);
    let kw = closed_kernel(&spec, 0, &[w], &[w])?.re;
    let m = 48usize;
    let mut radial = |r: f64| -> f64 {
        let mut acc = KahanSum::new();
        for k in 0..m {
            let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            let z = [C64::from_polar(r, th)];
            acc.add(integrand(&spec, s, &z, &[w], kw));
        }
        r * acc.value() * 2.0 * std::f64::consts::PI / m as f64
    };
    let (v, _) = adaptive(&mut radial, 0.0, 1.0, 1e-10, 24)?;
    Ok(v)
}

/// Polar quadrature over the unit ball of C^2: uniform angular grids in both
/// phases, nested radial integration over the quarter disc r1^2 + r2^2 < 1.
fn ball2_integral(s: u32, w: &[C64]) -> Result<f64> {
    let spec = DomainSpec::ball(2);
    let kw = closed_kernel(&spec, 0, w, w)?.re;
    let m = 32usize;
    let rule = GaussRule::new(31);
    let two_pi = 2.0 * std::f64::consts::PI;

    let angular = |r1: f64, r2: f64| -> f64 {
        let mut acc = KahanSum::new();
        for k1 in 0..m {
            let t1 = two_pi * k1 as f64 / m as f64;
            for k2 in 0..m {
                let t2 = two_pi * k2 as f64 / m as f64;
                let z = [C64::from_polar(r1, t1), C64::from_polar(r2, t2)];
                acc.add(integrand(&spec, s, &z, w, kw));
            }
        }
        acc.value() * (two_pi / m as f64).powi(2)
    };

    let mut outer = |r1: f64| -> f64 {
        let upper = (1.0 - r1 * r1).max(0.0).sqrt();
        if upper <= 0.0 {
            return 0.0;
        }
        r1 * rule.integrate(0.0, upper, |r2| r2 * angular(r1, r2))
    };
    let (v, _) = adaptive(&mut outer, 0.0, 1.0, 1e-8, 12)?;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn reproducing_identity_gives_one() {
        // s = 1 collapses to the reproducing property: c(1) = 1.
        let v = selberg_constant(&DomainSpec::ball(1), 1, &[c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-8);
        let v = selberg_constant(&DomainSpec::ball(1), 1, &[c(0.3, -0.2)]).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn disc_s2_is_three() {
        // Independent quadrature oracle: at w = 0 the integral reduces to
        // (1/pi) Int (1-|z|^2)^2 dV = 1/3.
        let v = selberg_constant(&DomainSpec::ball(1), 2, &[c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(v, 3.0, epsilon = 1e-7);
    }

    #[test]
    fn polydisc_s2_factorizes() {
        let v = selberg_constant(&DomainSpec::polydisc(2), 2, &[c(0.1, 0.0), c(0.0, 0.2)])
            .unwrap();
        assert_abs_diff_eq!(v, 9.0, epsilon = 1e-5);
    }
}
