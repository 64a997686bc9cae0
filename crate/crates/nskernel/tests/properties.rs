//! Property tests for the structural invariants.

use proptest::prelude::*;

use nskernel::core::{enumerate_multiindices, levi_form, DomainSpec, C64};
use nskernel::geometry::cayley;
use nskernel::kernel::{build_model, kernel_eval, KernelModel};
use nskernel::metric::{
    ricci_curvature, sectional_curvature, vector_length, BallEvaluator,
};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn shared_model() -> &'static KernelModel {
    use std::sync::OnceLock;
    static MODEL: OnceLock<KernelModel> = OnceLock::new();
    MODEL.get_or_init(|| build_model(&DomainSpec::ball(2), 1, 16, 1e-12).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiindex_enumeration_graded_and_counted(n in 1usize..5, cap in 0u32..10) {
        let idx = enumerate_multiindices(n, cap);
        for w in idx.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        // C(n + cap, n) by direct product formula.
        let mut count = 1u64;
        for k in 1..=n as u64 {
            count = count * (cap as u64 + k) / k;
        }
        prop_assert_eq!(idx.len() as u64, count);
    }

    #[test]
    fn kernel_hermitian_and_positive(
        zr in -0.4f64..0.4, zi in -0.4f64..0.4,
        wr in -0.4f64..0.4, wi in -0.4f64..0.4,
        ur in -0.4f64..0.4, ui in -0.4f64..0.4,
        vr in -0.4f64..0.4, vi in -0.4f64..0.4,
    ) {
        let model = shared_model();
        let z = [c(zr, zi), c(wr, wi)];
        let w = [c(ur, ui), c(vr, vi)];
        let kzw = kernel_eval(model, &z, &w).value;
        let kwz = kernel_eval(model, &w, &z).value;
        prop_assert!((kzw - kwz.conj()).norm() <= 1e-12 * kzw.norm().max(1.0));
        // Diagonal positivity: every term of the diagonal series is >= 0,
        // so K(z, z) >= 1/gamma_0.
        let kzz = kernel_eval(model, &z, &z).value;
        prop_assert!(kzz.im.abs() < 1e-14 * kzz.re.max(1.0));
        let gamma0 = model.moment(&nskernel::MultiIndex(vec![0, 0])).unwrap();
        prop_assert!(kzz.re >= 1.0 / gamma0 - 1e-12);
    }

    #[test]
    fn levi_form_phase_and_scale(
        w1r in -1.0f64..1.0, w1i in -1.0f64..1.0,
        theta in 0.0f64..std::f64::consts::TAU, lam_r in 0.1f64..2.0, lam_i in -1.0f64..1.0,
    ) {
        let spec = DomainSpec::diagonal_ball(&[4.0, 1.0]).unwrap();
        let q = [c(0.0, 0.0), c(1.0, 0.0)];
        let w = [c(w1r, w1i), c(0.0, 0.0)];
        prop_assume!(w[0].norm() > 1e-3);
        let base = levi_form(&spec, &q, &w).unwrap();
        let phase = C64::from_polar(1.0, theta);
        let wp: Vec<C64> = w.iter().map(|x| x * phase).collect();
        let lv = levi_form(&spec, &q, &wp).unwrap();
        prop_assert!((lv - base).abs() <= 1e-10 * base.abs().max(1.0));
        let lam = c(lam_r, lam_i);
        let wl: Vec<C64> = w.iter().map(|x| x * lam).collect();
        let ls = levi_form(&spec, &q, &wl).unwrap();
        prop_assert!((ls - lam.norm_sqr() * base).abs() <= 1e-10 * ls.abs().max(1.0));
    }

    #[test]
    fn tau_homogeneous_curvatures_invariant(
        zr in -0.3f64..0.3, zi in -0.3f64..0.3,
        v1r in -1.0f64..1.0, v1i in -1.0f64..1.0,
        v2r in -1.0f64..1.0, v2i in -1.0f64..1.0,
        lam_r in 0.2f64..2.0, lam_i in -1.0f64..1.0,
    ) {
        let ev = BallEvaluator::new(2, 1);
        let z = [c(zr, zi), c(zi * 0.5, zr * 0.5)];
        let v = [c(v1r, v1i), c(v2r, v2i)];
        prop_assume!(v.iter().map(|x| x.norm_sqr()).sum::<f64>() > 1e-3);
        let lam = c(lam_r, lam_i);
        let vl: Vec<C64> = v.iter().map(|x| x * lam).collect();
        let t = vector_length(&ev, &z, &v).unwrap();
        let tl = vector_length(&ev, &z, &vl).unwrap();
        prop_assert!((tl - lam.norm() * t).abs() <= 1e-10 * tl.max(1.0));
        let r = sectional_curvature(&ev, &z, &v).unwrap();
        let rl = sectional_curvature(&ev, &z, &vl).unwrap();
        prop_assert!((r - rl).abs() <= 1e-9);
        // Curvature bound R <= 2 holds everywhere.
        prop_assert!(r <= 2.0);
        let ric = ricci_curvature(&ev, &z, &v).unwrap();
        let ricl = ricci_curvature(&ev, &z, &vl).unwrap();
        prop_assert!((ric - ricl).abs() <= 1e-9);
    }

    #[test]
    fn cayley_involution(
        z1r in -2.0f64..2.0, z1i in -2.0f64..2.0,
        z2r in -2.0f64..0.5, z2i in -2.0f64..2.0,
    ) {
        let z = [c(z1r, z1i), c(z2r, z2i)];
        prop_assume!((z[1] - c(1.0, 0.0)).norm() > 1e-3);
        let once = cayley(&z).unwrap();
        prop_assume!((once[1] - c(1.0, 0.0)).norm() > 1e-3);
        let twice = cayley(&once).unwrap();
        for (a, b) in twice.iter().zip(&z) {
            prop_assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()));
        }
    }
}
