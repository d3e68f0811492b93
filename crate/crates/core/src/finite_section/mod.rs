//! Finite sections of `C_φ`, `T_g`, `T_h` and the witness operators, used as
//! a numerical oracle for the algebraic verdicts. Everything here runs in
//! complex `f64` regardless of the backend of the input map.

mod matrix;
mod residual;
mod series;
mod trace;

pub use matrix::{composition_matrix, toeplitz_matrix};
pub use residual::{
    coposinormal_witness_residual, cowen_residual, interrupter_residual, kernel_action_residual,
    posinormal_witness_residual, range_membership_gamma, range_membership_residual, trace_of, Interrupter,
    KernelAction,
};
pub use series::taylor_coeffs;
pub use trace::{ResidualTrace, TraceVerdict, FLOOR, SLOPE, STAGNATION};

use crate::classifier::ClassificationReport;
use crate::error::Result;
use crate::mobius::Mobius;
use crate::scalar::{lit, Real};

/// Ladder used when none is given.
pub const DEFAULT_LADDER: [usize; 4] = [16, 32, 64, 128];

/// Every trace that applies to the map: the adjoint formula, the witnesses
/// and interrupter the verdicts promise, range membership of `1`, and the
/// kernel action at `α = 1/2`.
pub fn verify<R: Real>(
    phi: &Mobius<R>,
    report: &ClassificationReport<R>,
    ladder: &[usize],
) -> Result<Vec<ResidualTrace>> {
    let mut out = vec![trace_of("cowen", ladder, |n| cowen_residual(phi, n))?];
    if report.posinormal.value {
        out.push(trace_of("posinormal_witness", ladder, |n| posinormal_witness_residual(phi, n))?);
        let mut eigs = Vec::new();
        out.push(trace_of("interrupter", ladder, |n| {
            let i = interrupter_residual(phi, n)?;
            eigs.push((n, (-i.min_eig).max(0.0)));
            Ok(i.residual)
        })?);
        out.push(ResidualTrace::new("interrupter_negativity", eigs));
    }
    if report.coposinormal.value {
        out.push(trace_of("coposinormal_witness", ladder, |n| coposinormal_witness_residual(phi, n))?);
    }
    out.push(range_membership_residual(phi, ladder)?);
    let half = lit::<R>("1/2");
    out.push(trace_of("kernel_action", ladder, |n| Ok(kernel_action_residual(phi, &half, n)?.max()))?);
    Ok(out)
}
