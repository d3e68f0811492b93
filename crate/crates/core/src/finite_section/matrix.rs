//! Truncated matrices in the monomial basis `{zⁿ}`.

use nalgebra::DMatrix;

use super::series::{check_pole, mul_lft, taylor_coeffs, ONE, ZERO};
use crate::error::{Error, Result};
use crate::mobius::{is_selfmap_of_disk, Mobius};
use crate::scalar::{Real, C64};

/// Columns `0..cols` of the matrix of `C_φ`, each cut at `rows`. Column `j`
/// holds the coefficients of `φʲ`.
pub(crate) fn composition_block(phi: &Mobius<f64>, rows: usize, cols: usize) -> DMatrix<C64> {
    let mut out = DMatrix::from_element(rows, cols, ZERO);
    let mut v = vec![ZERO; rows];
    if rows > 0 {
        v[0] = ONE;
    }
    for k in 0..cols {
        out.column_mut(k).copy_from_slice(&v);
        if k + 1 < cols {
            v = mul_lft(&v, phi);
        }
    }
    out
}

/// `N×N` section of `C_φ`.
pub fn composition_matrix<R: Real>(phi: &Mobius<R>, n: usize) -> Result<DMatrix<C64>> {
    if !is_selfmap_of_disk(phi).value {
        return Err(Error::NotASelfmap);
    }
    Ok(composition_block(&phi.to_f64(), n, n))
}

/// `N×N` section of the analytic Toeplitz operator `T_f`.
pub fn toeplitz_matrix<R: Real>(symbol: &Mobius<R>, n: usize) -> Result<DMatrix<C64>> {
    check_pole(symbol)?;
    let s = taylor_coeffs(symbol, n)?;
    Ok(DMatrix::from_fn(n, n, |i, j| if i >= j { s[i - j] } else { ZERO }))
}

/// `xᴴy` as four real products, which run on the blocked real kernel.
pub(crate) fn ad_mul(x: &DMatrix<C64>, y: &DMatrix<C64>) -> DMatrix<C64> {
    let xr = x.map(|z| z.re).transpose();
    let xi = x.map(|z| z.im).transpose();
    let yr = y.map(|z| z.re);
    let yi = y.map(|z| z.im);
    let re = &xr * &yr + &xi * &yi;
    let im = &xr * &yi - &xi * &yr;
    re.zip_map(&im, C64::new)
}

/// Largest entry modulus of the leading `n×n` block of `x − y`.
pub(crate) fn leading_gap(x: &DMatrix<C64>, y: &DMatrix<C64>, n: usize) -> f64 {
    let mut out = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            out = out.max((x[(i, j)] - y[(i, j)]).norm());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{lit, Rat};
    use num_complex::Complex;

    fn m(a: &str, b: &str, c: &str, d: &str) -> Mobius<Rat> {
        Mobius::new(lit(a), lit(b), lit(c), lit(d)).unwrap()
    }

    fn re(x: f64) -> C64 {
        Complex::new(x, 0.0)
    }

    /// Column `j` by repeated dense convolution of the series of `φ`.
    fn dense_composition(phi: &Mobius<Rat>, n: usize) -> DMatrix<C64> {
        let s = taylor_coeffs(phi, n).unwrap();
        let mut out = DMatrix::from_element(n, n, ZERO);
        let mut p = vec![ZERO; n];
        p[0] = ONE;
        for j in 0..n {
            for i in 0..n {
                out[(i, j)] = p[i];
            }
            p = (0..n).map(|i| (0..=i).map(|k| p[k] * s[i - k]).sum()).collect();
        }
        out
    }

    #[test]
    fn composition_examples() {
        let id = composition_matrix(&Mobius::<Rat>::identity(), 5).unwrap();
        assert_eq!(id, DMatrix::identity(5, 5));
        let a = composition_matrix(&m("1/2+1/2i", "0", "0", "1"), 4).unwrap();
        let alpha = Complex::new(0.5, 0.5);
        assert_eq!(a, DMatrix::from_diagonal(&nalgebra::DVector::from_fn(4, |k, _| alpha.powu(k as u32))));
        let a = composition_matrix(&m("1", "0", "-1", "2"), 3).unwrap();
        let expect = DMatrix::from_row_slice(3, 3, &[ONE, ZERO, ZERO, ZERO, re(0.5), ZERO, ZERO, re(0.25), re(0.25)]);
        assert_eq!(a, expect);
        assert_eq!(composition_matrix(&m("2", "0", "0", "1"), 3), Err(Error::NotASelfmap));
    }

    #[test]
    fn recurrence_matches_convolution() {
        for phi in [m("3", "1", "-1", "5"), m("1/3+1/5i", "1/4", "-1/5i", "1"), m("1/2", "1/2", "0", "1")] {
            let fast = composition_matrix(&phi, 24).unwrap();
            let slow = dense_composition(&phi, 24);
            assert!(leading_gap(&fast, &slow, 24) < 1e-14, "{phi}");
        }
    }

    #[test]
    fn split_product() {
        let x = DMatrix::from_fn(7, 5, |i, j| Complex::new((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64).sin()));
        let y = DMatrix::from_fn(7, 4, |i, j| Complex::new((i + j) as f64 * 0.3 - 1.0, ((i * j) as f64).cos()));
        assert!(leading_gap(&ad_mul(&x, &y), &x.ad_mul(&y), 4) < 1e-13);
    }

    #[test]
    fn toeplitz_examples() {
        let one = Mobius::<Rat>::constant(lit("1"));
        assert_eq!(toeplitz_matrix(&one, 4).unwrap(), DMatrix::identity(4, 4));
        let h = m("-1", "2", "0", "1");
        let t = toeplitz_matrix(&h, 3).unwrap();
        let expect =
            DMatrix::from_row_slice(3, 3, &[re(2.0), ZERO, ZERO, re(-1.0), re(2.0), ZERO, ZERO, re(-1.0), re(2.0)]);
        assert_eq!(t, expect);
        let g = Mobius::<Rat>::constant(lit("1/2"));
        assert_eq!(toeplitz_matrix(&g, 3).unwrap(), DMatrix::identity(3, 3) * re(0.5));
    }

    #[test]
    fn column_norms_bounded() {
        // ‖C_φ‖² ≤ (1 + |φ(0)|)/(1 − |φ(0)|) bounds every column norm
        let phi = m("3", "1", "-1", "5");
        let bound = (1.0 + 0.2) / (1.0 - 0.2);
        let mut prev = [0.0; 16];
        for n in [16, 32, 64] {
            let a = composition_matrix(&phi, n).unwrap();
            for (j, p) in prev.iter_mut().enumerate() {
                let norm2 = a.column(j).norm_squared();
                assert!(norm2 >= *p - 1e-15 && norm2 <= bound + 1e-12);
                *p = norm2;
            }
        }
    }
}
