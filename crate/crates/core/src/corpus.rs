//! Seeded corpus of rational linear-fractional selfmaps.
//!
//! Maps are drawn stratum by stratum in rotation so that every fixed-point
//! class, and both outcomes of each verdict, appear in any corpus of a few
//! dozen maps or more. All coefficients are rationals with small
//! denominators, so the whole corpus runs in the exact backend.
//!
//! Every map keeps `|φ(0)| ≤ 7/8`, `|c| ≤ 7/8·|d|`, and its zero `−b/a` off
//! the annulus `7/8 < |z| < 8/7`. Finite sections of `C_φ` need a depth
//! growing like `(1+p)/(1−p)` in the first two ratios, and range membership
//! of `1` is decided at rate `|b/a|ᴺ`, so this margin keeps the numerical
//! checks at desk scale.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mapspec::MapSpec;
use crate::mobius::{is_selfmap_of_disk, Mobius};
use crate::scalar::{abs2, Cplx, Rat};

/// Strata in drawing order.
pub const STRATA: [&str; 12] = [
    "generic",
    "affine",
    "tau-alpha-tau",
    "elliptic",
    "parabolic",
    "parabolic-automorphism",
    "hyperbolic",
    "hyperbolic-automorphism",
    "dilation-boundary",
    "canonical-hypo",
    "constant",
    "identity",
];

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub stratum: &'static str,
    pub spec: MapSpec,
}

/// Squared bound on `|φ(0)|`, `|c/d|` and the distance of the zero from the circle.
fn margin() -> Rat {
    Rat::new(49.into(), 64.into())
}

/// Whether the map keeps the corpus margin.
pub fn within_margin(phi: &Mobius<Rat>) -> bool {
    let (a2, b2, c2, d2) = (abs2(phi.a()), abs2(phi.b()), abs2(phi.c()), abs2(phi.d()));
    let k = margin();
    let pole = c2 <= k.clone() * d2.clone();
    let at_zero = d2.is_zero() || b2 <= k.clone() * d2;
    let zero = phi.is_constant() || a2.is_zero() || b2 <= k.clone() * a2.clone() || b2.clone() * k >= a2;
    pole && at_zero && zero
}

struct Draw {
    rng: ChaCha8Rng,
}

impl Draw {
    fn rat(&mut self, lo: i64, hi: i64, den: i64) -> Rat {
        let q = self.rng.random_range(1..=den);
        let p = self.rng.random_range(lo * q..=hi * q);
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    /// Positive rational in `(lo, hi)`.
    fn open(&mut self, lo: i64, hi: i64, den: i64) -> Rat {
        loop {
            let x = self.rat(lo, hi, den);
            if x > Rat::from_integer(lo.into()) && x < Rat::from_integer(hi.into()) {
                return x;
            }
        }
    }

    fn cplx(&mut self, den: i64) -> Cplx<Rat> {
        Complex::new(self.rat(-1, 1, den), self.rat(-1, 1, den))
    }

    /// Point with `|z|² < bound`.
    fn in_disk(&mut self, bound: &Rat) -> Cplx<Rat> {
        loop {
            let z = self.cplx(12);
            if abs2(&z) < *bound {
                return z;
            }
        }
    }

    /// Rational point of the unit circle from a Pythagorean triple.
    fn unimodular(&mut self) -> Cplx<Rat> {
        let m: i64 = self.rng.random_range(1..=6);
        let n: i64 = self.rng.random_range(0..=6);
        let h = m * m + n * n;
        let x = Rat::new((m * m - n * n).into(), h.into());
        let y = Rat::new((2 * m * n).into(), h.into());
        match self.rng.random_range(0..4) {
            0 => Complex::new(x, y),
            1 => Complex::new(-y, x),
            2 => Complex::new(-x, -y),
            _ => Complex::new(y, -x),
        }
    }

    fn nonzero_in_disk(&mut self) -> Cplx<Rat> {
        loop {
            let z = self.in_disk(&Rat::one());
            if !z.is_zero() {
                return z;
            }
        }
    }

    fn halfplane(&mut self, s: Rat, r: Cplx<Rat>) -> MapSpec {
        let w = if self.rng.random_bool(0.5) { Complex::one() } else { self.unimodular() };
        MapSpec::Halfplane { s, r, w }
    }

    fn entry(&mut self, stratum: &str) -> MapSpec {
        match stratum {
            "generic" => loop {
                let spec = MapSpec::Coeffs { a: self.cplx(8), b: self.cplx(8), c: self.cplx(8), d: Complex::one() };
                if spec.validate().is_err() {
                    continue;
                }
                let Ok(phi) = spec.to_map::<Rat>() else { continue };
                if !phi.is_constant() && is_selfmap_of_disk(&phi).value {
                    return spec;
                }
            },
            "affine" => loop {
                let a = self.nonzero_in_disk();
                let b = if self.rng.random_bool(0.3) { Complex::zero() } else { self.cplx(8) };
                let spec = MapSpec::Coeffs { a, b, c: Complex::zero(), d: Complex::one() };
                if is_selfmap_of_disk(&spec.to_map::<Rat>().expect("affine map")).value {
                    return spec;
                }
            },
            "tau-alpha-tau" => MapSpec::TauAlphaTau { w: self.in_disk(&Rat::one()), alpha: self.nonzero_in_disk() },
            "elliptic" => loop {
                let alpha = self.unimodular();
                if !alpha.is_one() {
                    return MapSpec::TauAlphaTau { w: self.in_disk(&Rat::one()), alpha };
                }
            },
            "parabolic" => {
                let r = Complex::new(self.open(0, 3, 8), self.rat(-2, 2, 6));
                self.halfplane(Rat::one(), r)
            }
            "parabolic-automorphism" => loop {
                let im = self.rat(-3, 3, 6);
                if !im.is_zero() {
                    return self.halfplane(Rat::one(), Complex::new(Rat::zero(), im));
                }
            },
            "hyperbolic" => {
                let s = self.open(1, 4, 6);
                let r = Complex::new(self.open(0, 3, 8), self.rat(-2, 2, 6));
                self.halfplane(s, r)
            }
            "hyperbolic-automorphism" => loop {
                let s = self.open(0, 4, 6);
                if !s.is_one() {
                    let r = Complex::new(Rat::zero(), self.rat(-2, 2, 6));
                    return self.halfplane(s, r);
                }
            },
            "dilation-boundary" => {
                let s = self.open(0, 1, 8);
                let r = Complex::new(self.open(0, 3, 8), self.rat(-2, 2, 6));
                self.halfplane(s, r)
            }
            "canonical-hypo" => MapSpec::CanonicalHypo { s: self.open(0, 1, 10), eta: self.unimodular() },
            "constant" => {
                let v = if self.rng.random_bool(0.25) { Complex::zero() } else { self.in_disk(&Rat::one()) };
                MapSpec::Constant { v }
            }
            "identity" => {
                MapSpec::Coeffs { a: Complex::one(), b: Complex::zero(), c: Complex::zero(), d: Complex::one() }
            }
            other => unreachable!("unknown stratum {other}"),
        }
    }
}

/// `n` maps from `seed`, cycling through [`STRATA`]. The identity stratum
/// contributes only its first turn; later turns fall back to `generic`.
pub fn corpus(seed: u64, n: usize) -> Vec<CorpusEntry> {
    let mut draw = Draw { rng: ChaCha8Rng::seed_from_u64(seed) };
    (0..n)
        .map(|k| {
            let mut stratum = STRATA[k % STRATA.len()];
            if stratum == "identity" && k >= STRATA.len() {
                stratum = "generic";
            }
            loop {
                let spec = draw.entry(stratum);
                if spec.to_map::<Rat>().is_ok_and(|phi| within_margin(&phi)) {
                    return CorpusEntry { stratum, spec };
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::mobius::classify;

    #[test]
    fn deterministic() {
        assert_eq!(corpus(7, 40), corpus(7, 40));
        assert_ne!(corpus(7, 40), corpus(8, 40));
    }

    #[test]
    fn every_class_appears() {
        let mut kinds = BTreeSet::new();
        for e in corpus(1, 60) {
            let phi = e.spec.to_map::<Rat>().unwrap();
            assert!(is_selfmap_of_disk(&phi).value, "{} {}", e.stratum, e.spec);
            assert!(within_margin(&phi));
            kinds.insert(classify(&phi).unwrap().kind.name());
        }
        assert_eq!(kinds.len(), 9, "{kinds:?}");
    }
}
