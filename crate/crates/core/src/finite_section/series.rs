//! Power series of linear-fractional functions and the Toeplitz actions they
//! induce, all by first-order recurrences.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mobius::Mobius;
use crate::scalar::{Real, Sign, C64};

pub(crate) const ZERO: C64 = Complex::new(0.0, 0.0);
pub(crate) const ONE: C64 = Complex::new(1.0, 0.0);

/// Rejects symbols whose pole lies in the closed disk.
pub(crate) fn check_pole<R: Real>(f: &Mobius<R>) -> Result<()> {
    if f.is_constant() {
        return Ok(());
    }
    if f.pole_margin().sign().value == Sign::Pos {
        Ok(())
    } else {
        Err(Error::PoleInClosedDisk)
    }
}

/// First `n` Maclaurin coefficients of `(az + b)/(cz + d)`.
pub fn taylor_coeffs<R: Real>(f: &Mobius<R>, n: usize) -> Result<Vec<C64>> {
    check_pole(f)?;
    let mut e = vec![ZERO; n];
    if n > 0 {
        e[0] = ONE;
    }
    Ok(mul_lft(&e, &f.to_f64()))
}

/// Coefficients of `f·v`, truncated to `v.len()`; `d` must be nonzero.
pub(crate) fn mul_lft(v: &[C64], f: &Mobius<f64>) -> Vec<C64> {
    let (a, b, c, d) = (*f.a(), *f.b(), *f.c(), *f.d());
    let mut out = Vec::with_capacity(v.len());
    let mut prev = ZERO;
    for n in 0..v.len() {
        let mut u = b * v[n];
        if n > 0 {
            u += a * v[n - 1];
        }
        prev = (u - c * prev) / d;
        out.push(prev);
    }
    out
}

/// `T_f* v` for an analytic-Toeplitz operator with linear-fractional symbol,
/// truncated to `v.len()`. Beyond the constant term the symbol's series is
/// geometric, so the upper-triangular sums telescope backwards.
pub(crate) fn adj_lft(v: &[C64], f: &Mobius<f64>) -> Vec<C64> {
    let (a, b, c, d) = (*f.a(), *f.b(), *f.c(), *f.d());
    let s0 = (b / d).conj();
    let s1 = ((a - c * b / d) / d).conj();
    let r = (-c / d).conj();
    let mut out = vec![ZERO; v.len()];
    let mut tail = ZERO;
    for i in (0..v.len()).rev() {
        out[i] = s0 * v[i] + s1 * tail;
        tail = v[i] + r * tail;
    }
    out
}
