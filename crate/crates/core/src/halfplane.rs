//! Conjugation to the right halfplane by `ν(z) = (1+z)/(1−z)`.
//!
//! A selfmap fixing `1` becomes an affine selfmap `Φ(z) = sz + r` of the
//! halfplane. Maps fixing another boundary point `w` are first rotated by
//! `z ↦ w̄φ(wz)`.

use num_complex::Complex;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::mobius::{classify, ClassKind, ExtPoint, Mobius};
use crate::scalar::{cplx_json, is_real_c, is_zero_c, unit_cmp, Cplx, Real, Sign};

#[derive(Clone, Debug, PartialEq)]
pub struct HalfplaneForm<R> {
    pub s: R,
    pub r: Cplx<R>,
    /// Unimodular `w` carried to `1` before conjugating.
    pub rotation: Cplx<R>,
}

impl<R: Real> HalfplaneForm<R> {
    pub fn to_json(&self) -> Json {
        json!({"s": self.s.to_json(), "r": cplx_json(&self.r), "rotation": cplx_json(&self.rotation)})
    }
}

fn c<R: Real>(re: i64) -> Cplx<R> {
    Complex::new(R::from_ratio(re, 1), R::zero())
}

/// `ν` as a map.
pub fn cayley_map<R: Real>() -> Mobius<R> {
    Mobius::new(c(1), c(1), c(-1), c(1)).expect("valid")
}

/// `ν⁻¹(z) = (z−1)/(z+1)`.
pub fn cayley_inv_map<R: Real>() -> Mobius<R> {
    Mobius::new(c(1), c(-1), c(1), c(1)).expect("valid")
}

pub fn cayley<R: Real>(z: &ExtPoint<R>) -> ExtPoint<R> {
    cayley_map().apply(z)
}

pub fn cayley_inv<R: Real>(z: &ExtPoint<R>) -> ExtPoint<R> {
    cayley_inv_map().apply(z)
}

fn rotate_to_one<R: Real>(phi: &Mobius<R>, w: &Cplx<R>) -> Result<Mobius<R>> {
    Mobius::rotation(w.conj())?.compose(phi)?.compose(&Mobius::rotation(w.clone())?)
}

/// `(s, r)` with `ν∘ψ∘ν⁻¹ = sz + r`, where `ψ` is `φ` rotated so that its
/// boundary fixed point sits at `1`. The boundary point used is the
/// Denjoy-Wolff point for hyperbolic and parabolic maps and the second fixed
/// point for dilation maps with one.
pub fn halfplane_form<R: Real>(phi: &Mobius<R>) -> Result<HalfplaneForm<R>> {
    let class = classify(phi)?;
    let point = match class.kind {
        ClassKind::HyperbolicAutomorphism
        | ClassKind::HyperbolicNonAutomorphism
        | ClassKind::ParabolicAutomorphism
        | ClassKind::ParabolicNonAutomorphism => class.denjoy_wolff,
        ClassKind::DilationInteriorBoundary => class.second_fixed_point,
        _ => return Err(Error::NoBoundaryFixedPoint),
    };
    let w = match point.and_then(|p| p.exact) {
        Some(ExtPoint::Finite(w)) => w,
        _ => return Err(Error::InexactFixedPoint),
    };
    let psi = rotate_to_one(phi, &w)?;
    let big = cayley_map().compose(&psi)?.compose(&cayley_inv_map())?;
    if !is_zero_c(big.c()).value || !is_real_c(big.a()).value {
        return Err(Error::Inconsistent("halfplane conjugate is not a real-slope affine map".into()));
    }
    Ok(HalfplaneForm { s: big.a().re.clone(), r: big.b().clone(), rotation: w })
}

/// `w·ν⁻¹(sν(w̄z) + r)`.
pub fn from_halfplane<R: Real>(s: &R, r: &Cplx<R>, w: &Cplx<R>) -> Result<Mobius<R>> {
    if s.sign().value != Sign::Pos {
        return Err(Error::InvalidParameter(format!("s = {s} must be positive")));
    }
    if r.re.sign().value == Sign::Neg {
        return Err(Error::InvalidParameter("Re r must be nonnegative".into()));
    }
    if unit_cmp(w).value != Sign::Zero {
        return Err(Error::InvalidParameter("rotation must be unimodular".into()));
    }
    let affine = Mobius::affine(Complex::new(s.clone(), R::zero()), r.clone())?;
    let psi = cayley_inv_map().compose(&affine)?.compose(&cayley_map())?;
    Mobius::rotation(w.clone())?.compose(&psi)?.compose(&Mobius::rotation(w.conj())?)
}

/// `φ_t(z) = ((2−t)z + t)/(−tz + 2 + t)`, the map with `ν∘φ_t∘ν⁻¹ = z + t`.
pub fn parabolic_map<R: Real>(t: &Cplx<R>) -> Result<Mobius<R>> {
    if t.re.sign().value == Sign::Neg {
        return Err(Error::InvalidParameter("Re t must be nonnegative".into()));
    }
    if is_zero_c(t).value {
        return Err(Error::InvalidParameter("t must be nonzero".into()));
    }
    let two = c::<R>(2);
    Mobius::new(two.clone() - t.clone(), t.clone(), -t.clone(), two + t.clone())
}

/// Whether `φ_s∘φ_t = φ_{s+t}`.
pub fn semigroup_check<R: Real>(s: &Cplx<R>, t: &Cplx<R>) -> Result<bool> {
    let lhs = parabolic_map(s)?.compose(&parabolic_map(t)?)?;
    let rhs = parabolic_map(&(s.clone() + t.clone()))?;
    Ok(lhs.projectively_equal(&rhs).value)
}

impl<R: Real> HalfplaneForm<R> {
    /// Translation parameter of a parabolic map; `None` unless `s = 1`.
    pub fn translation(&self) -> Option<&Cplx<R>> {
        if (self.s.clone() - R::one()).sign().value == Sign::Zero {
            Some(&self.r)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint::{adjoint_triple, phi_sigma_inv, sigma_phi_inv};
    use crate::mobius::is_disk_automorphism;
    use crate::scalar::{lit, Rat};
    use num_traits::{One, Zero};

    fn m(a: &str, b: &str, c: &str, d: &str) -> Mobius<Rat> {
        Mobius::new(lit(a), lit(b), lit(c), lit(d)).unwrap()
    }

    fn q(s: &str) -> Rat {
        lit::<Rat>(s).re
    }

    fn fin(s: &str) -> ExtPoint<Rat> {
        ExtPoint::Finite(lit(s))
    }

    #[test]
    fn cayley_points() {
        assert_eq!(cayley(&fin("0")), fin("1"));
        assert_eq!(cayley(&fin("1")), ExtPoint::Infinity);
        for z in ["1/3", "-1/2+1/5i", "2/7i", "-3/4-1/9i"] {
            assert_eq!(cayley_inv(&cayley(&fin(z))), fin(z));
        }
    }

    #[test]
    fn forms_of_worked_examples() {
        let hyp = halfplane_form(&m("1", "1", "0", "2")).unwrap();
        assert_eq!((hyp.s, hyp.r), (q("2"), lit("1")));
        let dil = halfplane_form(&m("1", "0", "-1", "2")).unwrap();
        assert_eq!((dil.s, dil.r.clone()), (q("1/2"), lit("1/2")));
        assert!(!dil.r.re.is_zero());
        for t in ["1/2", "1", "3/4+2i", "5i"] {
            let f = halfplane_form(&parabolic_map(&lit::<Rat>(t)).unwrap()).unwrap();
            assert_eq!((f.s, f.r), (Rat::one(), lit(t)));
        }
        assert_eq!(halfplane_form(&m("1/2", "0", "0", "1")), Err(Error::NoBoundaryFixedPoint));
    }

    #[test]
    fn rotated_boundary_point() {
        let w: Cplx<Rat> = lit("3/5+4/5i");
        let phi = from_halfplane(&q("3"), &lit("1/2+i"), &w).unwrap();
        let f = halfplane_form(&phi).unwrap();
        assert_eq!((f.s, f.r, f.rotation), (q("3"), lit("1/2+i"), w));
    }

    #[test]
    fn from_halfplane_examples() {
        assert_eq!(from_halfplane(&q("2"), &lit("1"), &lit("1")).unwrap(), m("1", "1", "0", "2"));
        let t: Cplx<Rat> = lit("1/3+1/7i");
        assert_eq!(from_halfplane(&Rat::one(), &t, &lit("1")).unwrap(), parabolic_map(&t).unwrap());
        assert!(from_halfplane(&Rat::one(), &lit("0"), &lit("1")).unwrap().is_identity());
        assert!(from_halfplane(&q("2"), &lit("-1"), &lit("1")).is_err());
        assert!(from_halfplane(&q("0"), &lit("1"), &lit("1")).is_err());
        assert!(from_halfplane(&q("2"), &lit("1"), &lit("1/2")).is_err());
    }

    #[test]
    fn parabolic_family() {
        assert_eq!(parabolic_map(&lit::<Rat>("1/2")).unwrap(), m("3", "1", "-1", "5"));
        assert_eq!(parabolic_map(&lit::<Rat>("1")).unwrap(), m("1", "1", "-1", "3"));
        assert!(is_disk_automorphism(&parabolic_map(&lit::<Rat>("i")).unwrap()).value);
        assert!(!is_disk_automorphism(&parabolic_map(&lit::<Rat>("1/100+i")).unwrap()).value);
        assert!(parabolic_map(&lit::<Rat>("-1")).is_err());
        assert!(parabolic_map(&lit::<Rat>("0")).is_err());
    }

    #[test]
    fn semigroup_and_adjoints() {
        assert!(semigroup_check(&lit::<Rat>("1/2"), &lit("1/2")).unwrap());
        assert!(semigroup_check(&lit::<Rat>("i"), &lit("1")).unwrap());
        assert!(semigroup_check(&lit::<Rat>("0"), &lit("1")).is_err());
        let t: Cplx<Rat> = lit("2/3+5/4i");
        let phi = parabolic_map(&t).unwrap();
        let sigma = adjoint_triple(&phi).unwrap().sigma;
        assert!(sigma.projectively_equal(&parabolic_map(&t.conj()).unwrap()).value);
        let two_i_im: Cplx<Rat> = lit("5/2i");
        assert!(phi_sigma_inv(&phi).unwrap().projectively_equal(&parabolic_map(&two_i_im).unwrap()).value);
        assert!(sigma_phi_inv(&phi).unwrap().projectively_equal(&parabolic_map(&-two_i_im).unwrap()).value);
    }

    #[test]
    fn zero_location_of_parabolic_maps() {
        for k in 0..=12 {
            let t: Cplx<Rat> = Complex::new(Rat::new(k.into(), 8.into()), q("1/3"));
            let inside = parabolic_map(&t).unwrap().zero_in_disk().value.is_some();
            assert_eq!(inside, k < 8, "t = {t}");
        }
    }
}
