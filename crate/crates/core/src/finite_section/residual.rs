//! Residuals of the operator identities behind the classifier, measured on
//! finite sections.
//!
//! Witness residuals are built at an internal size `M` between `4N` and `16N`
//! and read on the leading `N/2` block: the coefficients of `φʲ` spread to
//! index about `2j`, so sections at size `N` would leave truncation error in
//! the block itself.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;

use super::matrix::{ad_mul, composition_block, leading_gap, toeplitz_matrix};
use super::series::{adj_lft, mul_lft, ZERO};
use super::trace::ResidualTrace;
use crate::adjoint::{phi_sigma_inv, sigma_phi_inv, triple_from_coeffs, AdjointTriple};
use crate::classifier::{is_coposinormal, is_posinormal};
use crate::error::{Error, Result};
use crate::mobius::{is_selfmap_of_disk, Mobius};
use crate::scalar::{to_c64, unit_cmp, Cplx, Real, Sign, C64};

const OVERSAMPLE: usize = 4;
const OVERSAMPLE_MAX: usize = 16;

/// Internal size for products that sum over the powers of `φ`. Row `j` of
/// `C_φ` decays like `jⁱ|φ(0)|ⁱ`, so the depth grows with `(1+p)/(1−p)` for
/// the largest `p = |ψ(0)|` among the maps involved.
fn internal_size(maps: &[&Mobius<f64>], n: usize) -> usize {
    let p = maps.iter().filter_map(|f| f.at_zero().ok()).map(|z| z.norm()).fold(0.0, f64::max).min(0.999);
    let k = ((1.0 + p) / (1.0 - p)).ceil() as usize;
    k.clamp(OVERSAMPLE, OVERSAMPLE_MAX) * n
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidParameter(format!("truncation order {n} must be at least 2")))
    } else {
        Ok(())
    }
}

fn check_selfmap<R: Real>(phi: &Mobius<R>) -> Result<()> {
    if is_selfmap_of_disk(phi).value {
        Ok(())
    } else {
        Err(Error::NotASelfmap)
    }
}

fn triple<R: Real>(phi: &Mobius<R>) -> Result<AdjointTriple<R>> {
    let [a, b, c, d] = phi.coeffs();
    triple_from_coeffs(&a, &b, &c, &d)
}

/// `1/f` as a map.
fn reciprocal<R: Real>(f: &Mobius<R>) -> Result<Mobius<R>> {
    let [a, b, c, d] = f.coeffs();
    Mobius::new(c, d, a, b)
}

/// Leading-block deviation between `A*` and `T_g C_σ T_h*` at size `N`.
pub fn cowen_residual<R: Real>(phi: &Mobius<R>, n: usize) -> Result<f64> {
    check_size(n)?;
    check_selfmap(phi)?;
    let t = triple(phi)?;
    let a = composition_block(&phi.to_f64(), n, n);
    let g = toeplitz_matrix(&t.g, n)?;
    let s = composition_block(&t.sigma.to_f64(), n, n);
    let h = toeplitz_matrix(&t.h, n)?;
    let rhs = g * s * h.adjoint();
    Ok(leading_gap(&a.adjoint(), &rhs, n / 2))
}

fn witness_undefined(what: &str) -> Error {
    Error::WitnessUndefined(format!("C_phi is not {what}"))
}

/// Leading `N/2` columns of `T = T_{1/h}* T_{1/(g∘σ⁻¹)} C_{φ∘σ⁻¹}` at size `m`.
fn posinormal_witness_columns<R: Real>(phi: &Mobius<R>, m: usize, cols: usize) -> Result<DMatrix<C64>> {
    let t = triple(phi)?;
    let psi = phi_sigma_inv(phi)?.to_f64();
    let k = reciprocal(&t.g.compose(&t.sigma.inverse()?)?)?.to_f64();
    let hinv = reciprocal(&t.h)?.to_f64();
    let mut out = composition_block(&psi, m, cols);
    for j in 0..cols {
        let col: Vec<C64> = out.column(j).iter().copied().collect();
        let col = adj_lft(&mul_lft(&col, &k), &hinv);
        out.column_mut(j).copy_from_slice(&col);
    }
    Ok(out)
}

/// Leading-block deviation of `A = A*T` with the posinormality witness `T`.
pub fn posinormal_witness_residual<R: Real>(phi: &Mobius<R>, n: usize) -> Result<f64> {
    check_size(n)?;
    if !is_posinormal(phi)?.value {
        return Err(witness_undefined("posinormal"));
    }
    let half = n / 2;
    let f = phi.to_f64();
    let m = if phi.is_constant() { OVERSAMPLE * n } else { internal_size(&[&f, &phi_sigma_inv(phi)?.to_f64()], n) };
    let a = composition_block(&f, m, half);
    let lhs = a.rows(0, half).into_owned();
    if phi.is_constant() {
        // φ ≡ 0: A is self-adjoint and T = I
        return Ok(leading_gap(&lhs, &lhs.adjoint(), half));
    }
    let t = posinormal_witness_columns(phi, m, half)?;
    Ok(leading_gap(&lhs, &(a.adjoint() * t), half))
}

/// Leading-block deviation of `A* = AT` with `T = T_{g∘φ⁻¹} C_{σ∘φ⁻¹} T_h*`.
pub fn coposinormal_witness_residual<R: Real>(phi: &Mobius<R>, n: usize) -> Result<f64> {
    check_size(n)?;
    if !is_coposinormal(phi)?.value {
        return Err(witness_undefined("coposinormal"));
    }
    let half = n / 2;
    let f = phi.to_f64();
    let m = if phi.is_constant() { OVERSAMPLE * n } else { internal_size(&[&f, &sigma_phi_inv(phi)?.to_f64()], n) };
    let rows = composition_block(&f, half, m);
    let lhs = rows.columns(0, half).adjoint();
    if phi.is_constant() {
        return Ok(leading_gap(&lhs, &rows.columns(0, half).into_owned(), half));
    }
    let t = triple(phi)?;
    let chi = composition_block(&sigma_phi_inv(phi)?.to_f64(), m, half);
    let gp = t.g.compose(&phi.inverse()?)?.to_f64();
    let (hc, hd) = (to_c64(t.h.a()), to_c64(t.h.b()));
    let mut cols = DMatrix::from_element(m, half, ZERO);
    for j in 0..half {
        // T_h* e_j = conj(d) e_j + conj(c) e_{j-1}
        let mut v: Vec<C64> = chi.column(j).iter().map(|x| hd.conj() * x).collect();
        if j > 0 {
            for (vi, x) in v.iter_mut().zip(chi.column(j - 1).iter()) {
                *vi += hc.conj() * x;
            }
        }
        cols.column_mut(j).copy_from_slice(&mul_lft(&v, &gp));
    }
    Ok(leading_gap(&lhs, &(rows * cols), half))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interrupter {
    /// Leading-block deviation of `AA* = A*PA`.
    pub residual: f64,
    /// Smallest eigenvalue of the `N×N` section of `P = TT*`.
    pub min_eig: f64,
}

/// Checks the interrupter `P = TT*` built from the posinormality witness.
pub fn interrupter_residual<R: Real>(phi: &Mobius<R>, n: usize) -> Result<Interrupter> {
    check_size(n)?;
    if !is_posinormal(phi)?.value {
        return Err(witness_undefined("posinormal"));
    }
    let half = n / 2;
    let f = phi.to_f64();
    if phi.is_constant() {
        let rows = composition_block(&f, half, OVERSAMPLE * n);
        let aah = &rows * rows.adjoint();
        let ata = rows.columns(0, half).adjoint() * rows.columns(0, half);
        return Ok(Interrupter { residual: leading_gap(&aah, &ata, half), min_eig: 1.0 });
    }
    let psi = phi_sigma_inv(phi)?.to_f64();
    let m = internal_size(&[&f, &psi], n);
    let rows = composition_block(&f, half, m);
    let aah = &rows * rows.adjoint();
    let t = triple(phi)?;
    let k = reciprocal(&t.g.compose(&t.sigma.inverse()?)?)?.to_f64();
    let hinv = reciprocal(&t.h)?.to_f64();
    // T* v = C_ψ* T_k* T_{1/h} v, applied to the first N/2 columns of A and
    // to the first N unit vectors in one product
    let a = composition_block(&f, m, half);
    let mut w = DMatrix::from_element(m, half + n, ZERO);
    for j in 0..half + n {
        let v: Vec<C64> = if j < half {
            a.column(j).iter().copied().collect()
        } else {
            let mut e = vec![ZERO; m];
            e[j - half] = Complex::new(1.0, 0.0);
            e
        };
        w.column_mut(j).copy_from_slice(&adj_lft(&mul_lft(&v, &hinv), &k));
    }
    let z = ad_mul(&composition_block(&psi, m, m), &w);
    let x = z.columns(0, half).into_owned();
    let residual = leading_gap(&aah, &ad_mul(&x, &x), half);
    let y = z.columns(half, n).into_owned();
    let eig = SymmetricEigen::new(ad_mul(&y, &y));
    let min_eig = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Interrupter { residual, min_eig })
}

/// `γ_N = min ‖p∘φ‖` over polynomials with `p(0) = 1` and degree below `N`.
///
/// `φ(D)` is the disk `D(m, ρ)` and `U = (φ − m)/ρ` is a disk automorphism,
/// so in the basis `Uᵏ` the Gram matrix is `G_{jk} = ζ₀^{k−j}` (`k ≥ j`) with
/// `ζ₀ = U(0)`. Writing `p(m + ρu) = Σ xₖuᵏ`, the constraint is
/// `Σ xₖu₀ᵏ = 1` with `u₀ = −m/ρ`, and `γ_N = 1/‖L⁻¹ c̄‖` for `G = LL*`.
pub fn range_membership_gamma<R: Real>(phi: &Mobius<R>, sizes: &[usize]) -> Result<Vec<f64>> {
    check_selfmap(phi)?;
    if let Some(v) = phi.constant_value() {
        let zero = crate::scalar::is_zero_c(&v).value;
        return Ok(sizes.iter().map(|&s| if zero || s < 2 { 1.0 } else { 0.0 }).collect());
    }
    let f = phi.to_f64();
    let (a, b, c, d) = (*f.a(), *f.b(), *f.c(), *f.d());
    let den = d.norm_sqr() - c.norm_sqr();
    let center = (b * d.conj() - a * c.conj()) / den;
    let rho = (center.norm_sqr() - (b.norm_sqr() - a.norm_sqr()) / den).max(0.0).sqrt();
    let zeta = (b / d - center) / rho;
    let u0 = -center / rho;
    let nmax = sizes.iter().copied().max().unwrap_or(0);
    if nmax == 0 {
        return Ok(vec![]);
    }
    let g =
        DMatrix::from_fn(
            nmax,
            nmax,
            |j, k| if k >= j { zeta.powu((k - j) as u32) } else { zeta.conj().powu((j - k) as u32) },
        );
    let chol =
        nalgebra::Cholesky::new(g).ok_or_else(|| Error::Inconsistent("Gram matrix not positive definite".into()))?;
    let l = chol.l();
    // forward substitution is prefix-consistent, so one solve serves every size
    let mut y = vec![ZERO; nmax];
    let mut pow = Complex::new(1.0, 0.0);
    for i in 0..nmax {
        let mut acc = pow.conj();
        for (k, yk) in y.iter().enumerate().take(i) {
            acc -= l[(i, k)] * yk;
        }
        y[i] = acc / l[(i, i)];
        pow *= u0;
    }
    let mut partial = vec![0.0; nmax + 1];
    for i in 0..nmax {
        partial[i + 1] = partial[i] + y[i].norm_sqr();
    }
    Ok(sizes.iter().map(|&s| 1.0 / partial[s].sqrt()).collect())
}

/// `1 − γ_N/γ_{N/2}` along the ladder; converges to zero exactly when the
/// constant `1` lies in the range of `C_φ*`.
pub fn range_membership_residual<R: Real>(phi: &Mobius<R>, ladder: &[usize]) -> Result<ResidualTrace> {
    for &n in ladder {
        check_size(n)?;
    }
    let sizes: Vec<usize> = ladder.iter().flat_map(|&n| [n / 2, n]).collect();
    let gammas = range_membership_gamma(phi, &sizes)?;
    let points = ladder
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let (lo, hi) = (gammas[2 * i], gammas[2 * i + 1]);
            let r = if !(hi.is_finite() && lo.is_finite()) || hi < 1e-10 { 1.0 } else { (1.0 - hi / lo).abs() };
            (n, r)
        })
        .collect();
    Ok(ResidualTrace::new("range_membership", points))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelAction {
    /// Deviation of `C_φ* K_α` from `K_{φ(α)}`.
    pub adjoint: f64,
    /// Deviation of `C_φ K_α` from `conj(g(α)) h K_{σ(α)}`.
    pub forward: f64,
}

impl KernelAction {
    pub fn max(&self) -> f64 {
        self.adjoint.max(self.forward)
    }
}

pub fn kernel_action_residual<R: Real>(phi: &Mobius<R>, alpha: &Cplx<R>, n: usize) -> Result<KernelAction> {
    check_size(n)?;
    if unit_cmp(alpha).value != Sign::Neg {
        return Err(Error::AlphaOutsideDisk);
    }
    check_selfmap(phi)?;
    let half = n / 2;
    let m = OVERSAMPLE * n;
    let f = phi.to_f64();
    let al = to_c64(alpha);
    let kernel = |p: C64, len: usize| -> Vec<C64> {
        let mut out = Vec::with_capacity(len);
        let mut acc = Complex::new(1.0, 0.0);
        for _ in 0..len {
            out.push(acc);
            acc *= p.conj();
        }
        out
    };
    let k_alpha = nalgebra::DVector::from_vec(kernel(al, m));

    let cols = composition_block(&f, m, half);
    let lhs = cols.adjoint() * &k_alpha;
    let phi_alpha = kernel(f.eval(&al)?, half);
    let adjoint = lhs.iter().zip(&phi_alpha).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);

    let rows = composition_block(&f, half, m);
    let lhs = rows * &k_alpha;
    let t = triple(phi)?;
    let (g, sigma, h) = (t.g.to_f64(), t.sigma.to_f64(), t.h.to_f64());
    let scale = g.eval(&al)?.conj();
    let rhs = mul_lft(&kernel(sigma.eval(&al)?, half), &h);
    let forward = lhs.iter().zip(&rhs).map(|(x, y)| (x - scale * y).norm()).fold(0.0, f64::max);
    Ok(KernelAction { adjoint, forward })
}

/// Runs `f` at every ladder point.
pub fn trace_of(name: &str, ladder: &[usize], mut f: impl FnMut(usize) -> Result<f64>) -> Result<ResidualTrace> {
    let mut points = Vec::with_capacity(ladder.len());
    for &n in ladder {
        points.push((n, f(n)?));
    }
    Ok(ResidualTrace::new(name, points))
}
