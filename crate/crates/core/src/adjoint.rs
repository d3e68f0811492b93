//! Cowen's adjoint formula `C_φ* = T_g C_σ T_h*` for linear-fractional `φ`.

use num_complex::Complex;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::mobius::{is_disk_automorphism, is_selfmap_of_disk, Mobius};
use crate::scalar::{Cplx, Real};

/// `σ(z) = (āz − c̄)/(−b̄z + d̄)`, `g(z) = 1/(−b̄z + d̄)`, `h(z) = cz + d`.
///
/// `σ` depends only on the map; `g` and `h` depend on the coefficient
/// representative, here the canonical one. Rescaling the representative by
/// `λ` rescales `g` by `1/λ̄` and `h` by `λ`, which leaves `T_g C_σ T_h*`
/// unchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjointTriple<R> {
    pub sigma: Mobius<R>,
    pub g: Mobius<R>,
    pub h: Mobius<R>,
}

impl<R: Real> AdjointTriple<R> {
    pub fn to_json(&self) -> Json {
        json!({
            "sigma": self.sigma.to_json(),
            "g": self.g.to_json(),
            "h": self.h.to_json(),
        })
    }
}

/// Triple for an explicit coefficient representative `(a, b, c, d)`.
pub fn triple_from_coeffs<R: Real>(a: &Cplx<R>, b: &Cplx<R>, c: &Cplx<R>, d: &Cplx<R>) -> Result<AdjointTriple<R>> {
    let zero = Complex::new(R::zero(), R::zero());
    let one = Complex::new(R::one(), R::zero());
    let sigma = Mobius::new(a.conj(), -c.conj(), -b.conj(), d.conj())?;
    let g = Mobius::new(zero.clone(), one.clone(), -b.conj(), d.conj())?;
    let h = Mobius::new(c.clone(), d.clone(), zero, one)?;
    Ok(AdjointTriple { sigma, g, h })
}

pub fn adjoint_triple<R: Real>(phi: &Mobius<R>) -> Result<AdjointTriple<R>> {
    if !is_selfmap_of_disk(phi).value {
        return Err(Error::NotASelfmap);
    }
    triple_from_coeffs(phi.a(), phi.b(), phi.c(), phi.d())
}

/// `φ∘σ⁻¹`.
pub fn phi_sigma_inv<R: Real>(phi: &Mobius<R>) -> Result<Mobius<R>> {
    let t = adjoint_triple(phi)?;
    phi.compose(&t.sigma.inverse()?)
}

/// `σ∘φ⁻¹`.
pub fn sigma_phi_inv<R: Real>(phi: &Mobius<R>) -> Result<Mobius<R>> {
    let t = adjoint_triple(phi)?;
    t.sigma.compose(&phi.inverse()?)
}

/// Adjoint map of the conjugate `τ∘φ∘τ⁻¹`, recomputed from scratch.
pub fn conjugated_adjoint<R: Real>(phi: &Mobius<R>, tau: &Mobius<R>) -> Result<Mobius<R>> {
    if !is_disk_automorphism(tau).value {
        return Err(Error::NotAnAutomorphism);
    }
    let psi = tau.compose(phi)?.compose(&tau.inverse()?)?;
    Ok(adjoint_triple(&psi)?.sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{lit, Rat};

    fn m(a: &str, b: &str, c: &str, d: &str) -> Mobius<Rat> {
        Mobius::new(lit(a), lit(b), lit(c), lit(d)).unwrap()
    }

    #[test]
    fn triple_of_worked_example() {
        let phi = m("1", "0", "-1", "2");
        let t = adjoint_triple(&phi).unwrap();
        assert_eq!(t.sigma, m("1", "1", "0", "2"));
        // canonical representative (1/2, 0, -1/2, 1)
        assert_eq!(t.g, Mobius::constant(lit("1")));
        assert_eq!(t.h, m("-1/2", "1", "0", "1"));
        // the representative (1, 0, -1, 2) gives g = 1/2, h = -z + 2
        let raw = triple_from_coeffs(&lit("1"), &lit("0"), &lit("-1"), &lit("2")).unwrap();
        assert_eq!(raw.sigma, t.sigma);
        assert_eq!(raw.g, Mobius::constant(lit("1/2")));
        assert_eq!(raw.h, m("-1", "2", "0", "1"));
    }

    #[test]
    fn identity_triple() {
        let t = adjoint_triple(&Mobius::<Rat>::identity()).unwrap();
        assert!(t.sigma.is_identity());
        assert_eq!(t.g, Mobius::constant(lit("1")));
        assert_eq!(t.h, Mobius::constant(lit("1")));
    }

    #[test]
    fn composites() {
        let phi = m("1", "0", "-1", "2");
        let psi = phi_sigma_inv(&phi).unwrap();
        assert!(psi.projectively_equal(&m("2", "-1", "-2", "3")).value);
        assert!(is_selfmap_of_disk(&psi).value);
        let chi = sigma_phi_inv(&phi).unwrap();
        assert!(chi.projectively_equal(&m("3", "1", "2", "2")).value);
        assert!(!is_selfmap_of_disk(&chi).value);
        assert!(is_selfmap_of_disk(&sigma_phi_inv(&m("1", "1", "0", "2")).unwrap()).value);
        let alpha = m("1/3+1/4i", "0", "0", "1");
        let rot = phi_sigma_inv(&alpha).unwrap();
        assert!(rot.projectively_equal(&m("7/25+24/25i", "0", "0", "1")).value);
        assert_eq!(adjoint_triple(&m("2", "0", "0", "1")), Err(Error::NotASelfmap));
    }

    #[test]
    fn conjugation_examples() {
        let phi = m("1", "0", "-1", "2");
        assert_eq!(conjugated_adjoint(&phi, &Mobius::identity()).unwrap(), adjoint_triple(&phi).unwrap().sigma);
        let neg = m("-1", "0", "0", "1");
        assert_eq!(conjugated_adjoint(&phi, &neg).unwrap(), m("1", "-1", "0", "2"));
        let alpha = m("1/2+1/3i", "0", "0", "1");
        let tau = Mobius::tau(lit("1/4-1/5i")).unwrap();
        let lhs = conjugated_adjoint(&alpha, &tau).unwrap();
        let rhs = tau.compose(&m("1/2-1/3i", "0", "0", "1")).unwrap().compose(&tau.inverse().unwrap()).unwrap();
        assert!(lhs.projectively_equal(&rhs).value);
        assert_eq!(conjugated_adjoint(&phi, &m("1", "1", "0", "2")), Err(Error::NotAnAutomorphism));
    }
}
