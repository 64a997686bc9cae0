//! Boundary normalization maps and anisotropic scaling frames.
//!
//! For a strongly pseudoconvex boundary point `zeta`, the composite
//! `h_zeta = phi3 o phi2 o phi1` (after a recorded unitary pre-rotation
//! aligning the gradient with the last coordinate) brings the defining
//! function to the normal form `2 Re(z_n + Q(z)) + H(z) + o(|z|^2)` with
//! `Q('z, 0) = 0` and `H('z, 0) = |'z|^2`. Scaling frames compose the
//! normalization with the dilation `('z/sqrt(eta), z_n/eta)` that blows the
//! point up to the Siegel half-space.

use nalgebra::DMatrix;

use super::{Biholo, MapStage, TransformedDomain};
use crate::core::{frame_for_with_guess, CPoint, DomainSpec, RealDefiningFn, C64};
use crate::error::{Error, Result};

/// Data of one boundary normalization map.
#[derive(Clone, Debug)]
pub struct PinchukMap {
    pub zeta: CPoint,
    /// Recorded unitary pre-rotation (identity when the gradient is already
    /// aligned with `('0, positive)`).
    pub pre_unitary: DMatrix<C64>,
    /// Matrix of the linear stage phi1 in rotated coordinates.
    pub p_matrix: DMatrix<C64>,
    /// Symmetric holomorphic-Hessian coefficients after phi1.
    pub a1: DMatrix<C64>,
    /// Hermitian mixed-Hessian coefficients after phi1.
    pub b1: DMatrix<C64>,
    /// Tangential Levi eigenvalues, sorted descending.
    pub levi_eigenvalues: Vec<f64>,
    /// `Lambda = diag(sqrt(lambda_i), 1)`.
    pub lambda: DMatrix<C64>,
    /// Tangential unitary of phi3 (fixes the last coordinate).
    pub u_matrix: DMatrix<C64>,
    /// The full composite `h_zeta` (including the pre-rotation).
    pub map: Biholo,
    /// Gradient norm `|grad_zbar rho(zeta)|` of the canonical defining
    /// function at `zeta`.
    pub gradient_norm: f64,
    /// Residuals of the normal-form extraction: `|Q('z,0)|` block and
    /// `|H('z,0) - |'z|^2|` block of the pushed-forward 2-jet at 0.
    pub q_residual: f64,
    pub h_residual: f64,
}

impl PinchukMap {
    /// `h_zeta'(p)` at a point.
    pub fn derivative(&self, p: &[C64]) -> Result<DMatrix<C64>> {
        self.map.jacobian(p)
    }
}

/// Build the normalization map of a model domain at the boundary point
/// `zeta`.
pub fn pinchuk_normalize(spec: &DomainSpec, zeta: &[C64]) -> Result<PinchukMap> {
    pinchuk_normalize_for(spec, zeta)
}

/// Build the normalization map for any smooth defining function.
pub fn pinchuk_normalize_for(dom: &dyn RealDefiningFn, zeta: &[C64]) -> Result<PinchukMap> {
    let n = dom.dim();
    let rho_val = dom.rho(zeta);
    if rho_val.abs() > 1e-8 {
        return Err(Error::Contract(format!(
            "zeta must lie on the boundary; rho(zeta) = {rho_val:.3e}"
        )));
    }
    let grad = dom.grad_z(zeta)?;
    let grad_norm: f64 = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    if grad_norm < 1e-12 {
        return Err(Error::Degeneracy("vanishing gradient at zeta".into()));
    }

    // Pre-rotation: make grad_z rho point along ('0, positive real). In the
    // rotated coordinates w = U0 z the gradient becomes conj(U0) grad_z rho.
    let pre_unitary = gradient_alignment_unitary(&grad, grad_norm);
    let u0 = Biholo::linear(pre_unitary.clone());
    let zeta_r = u0.forward(zeta)?;

    // Defining data in rotated coordinates.
    let back0 = u0.inverse()?;
    let td0 = TransformedDomain { base: dom, back: back0 };
    let grad_r = td0.grad_z(&zeta_r)?;
    let (hzz_r, hzzb_r) = td0.hess(&zeta_r)?;

    // phi1: w = P (z - zeta) with the gradient-aligned P matrix. The rows
    // follow the construction: tangential rows use the conjugate gradient,
    // the last row the gradient itself.
    let mut p_mat = DMatrix::zeros(n, n);
    let gn_conj = grad_r[n - 1].conj();
    for nu in 0..n - 1 {
        p_mat[(nu, nu)] = gn_conj;
        p_mat[(nu, n - 1)] = -grad_r[nu].conj();
    }
    for nu in 0..n {
        p_mat[(n - 1, nu)] = grad_r[nu];
    }
    if p_mat[(n - 1, n - 1)].norm() < 1e-12 {
        return Err(Error::Degeneracy("d rho / d z_n vanishes after rotation".into()));
    }
    let p_inv = p_mat
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Degeneracy("phi1 matrix is singular".into()))?;
    let mut shift = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n {
            shift[i] -= p_mat[(i, j)] * zeta_r[j];
        }
    }
    let phi1 = MapStage::Affine { a: p_mat.clone(), b: shift };

    // Second-order data after phi1.
    let a1 = (p_inv.transpose() * &hzz_r * &p_inv).map(|x| x * 0.5);
    let b1 = p_inv.adjoint() * &hzzb_r * &p_inv;

    // phi2 removes the tangential block of a1.
    let m = n - 1;
    let mut q_block = DMatrix::zeros(n, n);
    for i in 0..m {
        for j in 0..m {
            q_block[(i, j)] = a1[(i, j)];
        }
    }
    let phi2 = MapStage::QuadraticLast { q: q_block };

    // phi3 diagonalizes the tangential Levi block of b1. With
    // H(z) = z^H conj(b1) z, the block U' = V^T of the eigenbasis of the
    // tangential b1 followed by Lambda^{-1} scaling renders it |'z|^2.
    let mut lam = DMatrix::identity(n, n);
    let mut u_mat = DMatrix::identity(n, n);
    let mut levi_eigenvalues = Vec::new();
    if m > 0 {
        let tang = b1.view((0, 0), (m, m)).into_owned();
        let eig = tang.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
        for (slot, &idx) in order.iter().enumerate() {
            let lv = eig.eigenvalues[idx];
            if !(lv > 0.0) {
                return Err(Error::NotStronglyPseudoconvex(format!(
                    "tangential Levi eigenvalue {lv:.3e} at zeta"
                )));
            }
            levi_eigenvalues.push(lv);
            lam[(slot, slot)] = C64::new(lv.sqrt(), 0.0);
            // Column of V, phase-fixed so the largest entry is positive real.
            let col = eig.eigenvectors.column(idx);
            let lead = col
                .iter()
                .cloned()
                .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
                .unwrap();
            let phase = if lead.norm() > 0.0 { lead / lead.norm() } else { C64::new(1.0, 0.0) };
            for r in 0..m {
                // U' = V^T: row `slot` of U' is the (phase-fixed) eigenvector.
                u_mat[(slot, r)] = col[r] / phase;
            }
        }
    }
    let phi3 = MapStage::Affine {
        a: &lam * &u_mat,
        b: vec![C64::new(0.0, 0.0); n],
    };

    let map = Biholo::from_stages(
        n,
        vec![
            MapStage::Affine { a: pre_unitary.clone(), b: vec![C64::new(0.0, 0.0); n] },
            phi1,
            phi2,
            phi3,
        ],
    );

    // Normal-form extraction at the origin of the image domain.
    let back = map.inverse()?;
    let td = TransformedDomain { base: dom, back };
    let (hzz_img, hzzb_img) = td.hess(&vec![C64::new(0.0, 0.0); n])?;
    let mut q_residual: f64 = 0.0;
    let mut h_residual: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            q_residual = q_residual.max((hzz_img[(i, j)] * 0.5).norm());
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            h_residual = h_residual.max((hzzb_img[(i, j)] - target).norm());
        }
    }

    Ok(PinchukMap {
        zeta: CPoint(zeta.to_vec()),
        pre_unitary,
        p_matrix: p_mat,
        a1,
        b1,
        levi_eigenvalues,
        lambda: lam,
        u_matrix: u_mat,
        map,
        gradient_norm: grad_norm,
        q_residual,
        h_residual,
    })
}

/// Unitary `U0` with `conj(U0) g = ('0, |g|)`; identity when `g` already
/// points along `('0, positive)`.
fn gradient_alignment_unitary(g: &[C64], gnorm: f64) -> DMatrix<C64> {
    let n = g.len();
    let aligned = g[..n - 1].iter().all(|x| x.norm() < 1e-14 * gnorm)
        && g[n - 1].im.abs() < 1e-14 * gnorm
        && g[n - 1].re > 0.0;
    if aligned {
        return DMatrix::identity(n, n);
    }
    // Build an orthonormal basis q_1, ..., q_n with q_n = g/|g| by
    // Gram-Schmidt over the standard basis, then U0 = Q^T.
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let qn: Vec<C64> = g.iter().map(|x| x / gnorm).collect();
    for k in 0..n {
        if cols.len() == n - 1 {
            break;
        }
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[k] = C64::new(1.0, 0.0);
        // Orthogonalize against q_n and the collected columns.
        let proj: C64 = v.iter().zip(&qn).map(|(a, b)| a * b.conj()).sum();
        for (vi, qi) in v.iter_mut().zip(&qn) {
            *vi -= proj * qi;
        }
        for c in &cols {
            let pr: C64 = v.iter().zip(c).map(|(a, b)| a * b.conj()).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= pr * ci;
            }
        }
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    cols.push(qn);
    let q = DMatrix::from_fn(n, n, |i, j| cols[j][i]);
    q.transpose()
}

/// One step of the boundary scaling: normalization at the foot point plus
/// the anisotropic dilation carrying `p` to `('0, -1)`.
#[derive(Clone, Debug)]
pub struct ScalingFrame {
    pub p: CPoint,
    pub zeta: CPoint,
    /// Euclidean boundary distance of `p`.
    pub delta: f64,
    /// `eta = delta * |grad_zbar rho(zeta)|`.
    pub eta: f64,
    pub pinchuk: PinchukMap,
    /// The dilation `('z/sqrt(eta), z_n/eta)`.
    pub dilation: Biholo,
    /// `h'(p)`.
    pub s_matrix: DMatrix<C64>,
}

impl ScalingFrame {
    /// The full map `T o h` from ambient coordinates to the scaled domain.
    pub fn full_map(&self) -> Biholo {
        self.pinchuk.map.clone().then(&self.dilation)
    }

    /// Scaled defining function `rho_tilde(z) = rho(h^{-1}(sqrt(eta) 'z, eta z_n)) / eta`.
    pub fn scaled_rho(&self, dom: &dyn RealDefiningFn, z: &[C64]) -> Result<f64> {
        let n = z.len();
        let mut w: Vec<C64> = z.to_vec();
        for wi in w.iter_mut().take(n - 1) {
            *wi *= self.eta.sqrt();
        }
        w[n - 1] *= self.eta;
        let back = self.pinchuk.map.inverse()?;
        let pre = back.forward(&w)?;
        Ok(dom.rho(&pre) / self.eta)
    }

    /// `sup |rho_tilde - (2 Re z_n + |'z|^2)|` over a deterministic sample of
    /// the closed ball of radius `r`.
    pub fn sup_deviation_from_limit(&self, dom: &dyn RealDefiningFn, r: f64) -> Result<f64> {
        let n = self.p.dim();
        let mut worst: f64 = 0.0;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..256 {
            let mut z = vec![C64::new(0.0, 0.0); n];
            let mut norm2 = 0.0;
            for zi in z.iter_mut() {
                *zi = C64::new(2.0 * next() - 1.0, 2.0 * next() - 1.0);
                norm2 += zi.norm_sqr();
            }
            let scale = r * next().powf(1.0 / (2.0 * n as f64)) / norm2.sqrt().max(1e-12);
            for zi in z.iter_mut() {
                *zi *= scale;
            }
            let rt = self.scaled_rho(dom, &z)?;
            let limit = 2.0 * z[n - 1].re
                + z[..n - 1].iter().map(|x| x.norm_sqr()).sum::<f64>();
            worst = worst.max((rt - limit).abs());
        }
        Ok(worst)
    }
}

/// Build the scaling frame of a model domain at distance `delta` inward
/// from the boundary point `p0`.
pub fn scaling_frame(spec: &DomainSpec, p0: &[C64], delta: f64) -> Result<ScalingFrame> {
    scaling_frame_for(spec, p0, delta)
}

/// Scaling frame for any smooth defining function.
pub fn scaling_frame_for(dom: &dyn RealDefiningFn, p0: &[C64], delta: f64) -> Result<ScalingFrame> {
    let n = dom.dim();
    let rho_val = dom.rho(p0);
    if rho_val.abs() > 1e-8 {
        return Err(Error::Contract(format!("p0 must lie on the boundary; rho = {rho_val:.3e}")));
    }
    let grad = dom.grad_z(p0)?;
    let gbar: Vec<C64> = grad.iter().map(|x| x.conj()).collect();
    let gn: f64 = gbar.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let p: Vec<C64> = p0
        .iter()
        .zip(&gbar)
        .map(|(x, g)| x - g * (delta / gn))
        .collect();

    let frame = frame_for_with_guess(dom, &p, p0)?;
    let pinchuk = pinchuk_normalize_for(dom, &frame.foot)?;
    let eta = frame.delta * pinchuk.gradient_norm;
    let dilation = Biholo::anisotropic_dilation(n, eta);
    let s_matrix = pinchuk.derivative(&p)?;

    let sf = ScalingFrame {
        p: CPoint(p.clone()),
        zeta: frame.foot.clone(),
        delta: frame.delta,
        eta,
        pinchuk,
        dilation,
        s_matrix,
    };

    // Frame invariant: T o h carries p to b* = ('0, -1).
    let image = sf.full_map().forward(&p)?;
    let mut defect: f64 = (image[n - 1] + C64::new(1.0, 0.0)).norm();
    for zi in image.iter().take(n - 1) {
        defect = defect.max(zi.norm());
    }
    if defect > 1e-9 {
        return Err(Error::Degeneracy(format!("scaling frame base-point defect {defect:.3e}")));
    }
    Ok(sf)
}

/// Boundary frame of the normalized domain `h(D)` at a point, for distance
/// measurements in the normalized coordinates.
pub fn normalized_boundary_distance(
    dom: &dyn RealDefiningFn,
    pinchuk: &PinchukMap,
    z: &[C64],
) -> Result<f64> {
    let td = TransformedDomain { base: dom, back: pinchuk.map.inverse()? };
    Ok(frame_for_with_guess(&td, z, &vec![C64::new(0.0, 0.0); z.len()])?.delta)
}
