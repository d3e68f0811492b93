//! Linear-fractional maps `z -> (az+b)/(cz+d)` on the extended plane.

mod circle;
mod class;

pub use circle::{image_of_unit_circle, is_disk_automorphism, is_selfmap_of_disk, GeneralizedCircle};
pub use class::{classify, fixed_points, ClassKind, MapClass};

use std::fmt;

use num_complex::Complex;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::scalar::{abs2, c64_json, cplx_json, format_cplx, is_zero_c, to_c64, Cplx, Judged, Real, Sign, C64};

/// A point of the Riemann sphere.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtPoint<R> {
    Finite(Cplx<R>),
    Infinity,
}

impl<R: Real> ExtPoint<R> {
    pub fn finite(&self) -> Option<&Cplx<R>> {
        match self {
            ExtPoint::Finite(z) => Some(z),
            ExtPoint::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtPoint::Infinity)
    }

    pub fn to_f64(&self) -> ExtPoint<f64> {
        match self {
            ExtPoint::Finite(z) => ExtPoint::Finite(to_c64(z)),
            ExtPoint::Infinity => ExtPoint::Infinity,
        }
    }

    /// Sign of `|z|^2 - 1`; infinity counts as outside.
    pub fn unit_cmp(&self) -> Judged<Sign> {
        match self {
            ExtPoint::Finite(z) => crate::scalar::unit_cmp(z),
            ExtPoint::Infinity => Judged::sure(Sign::Pos),
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            ExtPoint::Finite(z) => cplx_json(z),
            ExtPoint::Infinity => Json::String("inf".into()),
        }
    }
}

impl<R: Real> From<Cplx<R>> for ExtPoint<R> {
    fn from(z: Cplx<R>) -> Self {
        ExtPoint::Finite(z)
    }
}

/// A complex number known in the map's backend when representable there,
/// always with a float approximation.
#[derive(Clone, Debug, PartialEq)]
pub struct Value<R> {
    pub exact: Option<Cplx<R>>,
    pub approx: C64,
}

impl<R: Real> Value<R> {
    pub fn exact(z: Cplx<R>) -> Self {
        Value { approx: to_c64(&z), exact: Some(z) }
    }

    pub fn approx(z: C64) -> Self {
        Value { exact: None, approx: z }
    }

    pub fn to_json(&self) -> Json {
        let mut m = serde_json::Map::new();
        if let Some(z) = &self.exact {
            m.insert("exact".into(), cplx_json(z));
        }
        m.insert("approx".into(), c64_json(self.approx));
        Json::Object(m)
    }
}

/// Extended-plane analogue of [`Value`].
#[derive(Clone, Debug, PartialEq)]
pub struct Point<R> {
    pub exact: Option<ExtPoint<R>>,
    pub approx: ExtPoint<f64>,
}

impl<R: Real> Point<R> {
    pub fn exact(p: ExtPoint<R>) -> Self {
        Point { approx: p.to_f64(), exact: Some(p) }
    }

    pub fn approx(p: ExtPoint<f64>) -> Self {
        Point { exact: None, approx: p }
    }

    pub fn infinity() -> Self {
        Point::exact(ExtPoint::Infinity)
    }

    pub fn approx_finite(&self) -> Option<C64> {
        self.approx.finite().copied()
    }

    pub fn to_json(&self) -> Json {
        let mut m = serde_json::Map::new();
        if let Some(p) = &self.exact {
            m.insert("exact".into(), p.to_json());
        }
        m.insert("approx".into(), self.approx.to_json());
        Json::Object(m)
    }
}

/// Linear-fractional map stored in canonical normalization: `d = 1`, else
/// `c = 1`, else `a = 1`, else `b = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mobius<R> {
    a: Cplx<R>,
    b: Cplx<R>,
    c: Cplx<R>,
    d: Cplx<R>,
    constant: bool,
}

fn zero<R: Real>() -> Cplx<R> {
    Complex::new(R::zero(), R::zero())
}

fn one<R: Real>() -> Cplx<R> {
    Complex::new(R::one(), R::zero())
}

fn raw_zero<R: Real>(z: &Cplx<R>) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

impl<R: Real> Mobius<R> {
    pub fn new(a: Cplx<R>, b: Cplx<R>, c: Cplx<R>, d: Cplx<R>) -> Result<Self> {
        if [&a, &b, &c, &d].iter().all(|z| raw_zero(z)) {
            return Err(Error::AllZeroCoefficients);
        }
        if raw_zero(&c) && raw_zero(&d) {
            return Err(Error::ZeroDenominatorMap);
        }
        let pivot = [&d, &c, &a, &b].into_iter().find(|z| !raw_zero(z)).cloned().unwrap_or_else(one);
        let (a, b, c, d) = (a / pivot.clone(), b / pivot.clone(), c / pivot.clone(), d / pivot);
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        let constant = is_zero_c(&det).value;
        Ok(Mobius { a, b, c, d, constant })
    }

    pub fn identity() -> Self {
        Mobius { a: one(), b: zero(), c: zero(), d: one(), constant: false }
    }

    /// The constant map `z -> v`.
    pub fn constant(v: Cplx<R>) -> Self {
        Mobius { a: zero(), b: v, c: zero(), d: one(), constant: true }
    }

    /// `z -> a z + b`.
    pub fn affine(a: Cplx<R>, b: Cplx<R>) -> Result<Self> {
        Self::new(a, b, zero(), one())
    }

    /// `z -> eta z`.
    pub fn rotation(eta: Cplx<R>) -> Result<Self> {
        Self::affine(eta, zero())
    }

    /// The involutive automorphism `z -> (w - z)/(1 - conj(w) z)`.
    pub fn tau(w: Cplx<R>) -> Result<Self> {
        Self::new(-one::<R>(), w.clone(), -w.conj(), one())
    }

    pub fn a(&self) -> &Cplx<R> {
        &self.a
    }
    pub fn b(&self) -> &Cplx<R> {
        &self.b
    }
    pub fn c(&self) -> &Cplx<R> {
        &self.c
    }
    pub fn d(&self) -> &Cplx<R> {
        &self.d
    }

    pub fn coeffs(&self) -> [Cplx<R>; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    /// `ad - bc` of the normalized representative.
    pub fn det(&self) -> Cplx<R> {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    pub fn is_identity(&self) -> bool {
        !self.constant && raw_zero(&self.b) && raw_zero(&self.c) && self.a == self.d
    }

    /// Value of a constant map; `None` for nonconstant maps.
    pub fn constant_value(&self) -> Option<Cplx<R>> {
        if !self.constant {
            None
        } else if !raw_zero(&self.d) {
            Some(self.b.clone() / self.d.clone())
        } else {
            Some(self.a.clone() / self.c.clone())
        }
    }

    pub fn pole(&self) -> ExtPoint<R> {
        if raw_zero(&self.c) {
            ExtPoint::Infinity
        } else {
            ExtPoint::Finite(-self.d.clone() / self.c.clone())
        }
    }

    /// Evaluation on the extended plane.
    pub fn apply(&self, z: &ExtPoint<R>) -> ExtPoint<R> {
        if let Some(v) = self.constant_value() {
            return ExtPoint::Finite(v);
        }
        match z {
            ExtPoint::Infinity => {
                if raw_zero(&self.c) {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite(self.a.clone() / self.c.clone())
                }
            }
            ExtPoint::Finite(z) => {
                let den = self.c.clone() * z.clone() + self.d.clone();
                if raw_zero(&den) {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite((self.a.clone() * z.clone() + self.b.clone()) / den)
                }
            }
        }
    }

    /// Evaluation at a finite point that must not be the pole.
    pub fn eval(&self, z: &Cplx<R>) -> Result<Cplx<R>> {
        match self.apply(&ExtPoint::Finite(z.clone())) {
            ExtPoint::Finite(w) => Ok(w),
            ExtPoint::Infinity => Err(Error::EvaluationAtPole),
        }
    }

    /// `self(0)`, which is finite for every selfmap.
    pub fn at_zero(&self) -> Result<Cplx<R>> {
        self.eval(&zero())
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Mobius<R>) -> Result<Mobius<R>> {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&g.a, &g.b, &g.c, &g.d);
        Mobius::new(
            a1.clone() * a2.clone() + b1.clone() * c2.clone(),
            a1.clone() * b2.clone() + b1.clone() * d2.clone(),
            c1.clone() * a2.clone() + d1.clone() * c2.clone(),
            c1.clone() * b2.clone() + d1.clone() * d2.clone(),
        )
    }

    pub fn inverse(&self) -> Result<Mobius<R>> {
        if self.constant {
            return Err(Error::ConstantMapNotInvertible);
        }
        Mobius::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }

    /// `n`-fold composition by repeated squaring of the coefficient matrix.
    pub fn power(&self, n: u64) -> Result<Mobius<R>> {
        if n == 0 {
            return Ok(Mobius::identity());
        }
        let mut acc: Option<Mobius<R>> = None;
        let mut base = self.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(m) => m.compose(&base)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.compose(&base)?;
        }
        Ok(acc.unwrap_or_else(Mobius::identity))
    }

    /// `(ad - bc)/(cz + d)^2`.
    pub fn derivative_at(&self, z: &Cplx<R>) -> Result<Cplx<R>> {
        if self.constant {
            return Ok(zero());
        }
        let den = self.c.clone() * z.clone() + self.d.clone();
        if raw_zero(&den) {
            return Err(Error::EvaluationAtPole);
        }
        Ok(self.det() / (den.clone() * den))
    }

    /// The zero of the map when it lies in the open unit disk.
    pub fn zero_in_disk(&self) -> Judged<Option<Cplx<R>>> {
        if let Some(v) = self.constant_value() {
            return is_zero_c(&v).map(|z| if z { Some(zero()) } else { None });
        }
        if raw_zero(&self.b) {
            return Judged::sure(Some(zero()));
        }
        if raw_zero(&self.a) {
            return Judged::sure(None);
        }
        let beta = -self.b.clone() / self.a.clone();
        crate::scalar::unit_cmp(&beta).is_neg().map(|inside| if inside { Some(beta) } else { None })
    }

    /// All 2x2 minors of the stacked coefficient vectors vanish.
    pub fn projectively_equal(&self, other: &Mobius<R>) -> Judged<bool> {
        let u = self.coeffs();
        let v = other.coeffs();
        let mut out = Judged::sure(true);
        for i in 0..4 {
            for j in i + 1..4 {
                let minor = u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone();
                out = out.and(is_zero_c(&minor));
            }
        }
        out
    }

    pub fn to_f64(&self) -> Mobius<f64> {
        let [a, b, c, d] = self.coeffs().map(|z| to_c64(&z));
        Mobius::new(a, b, c, d).expect("normalized map stays valid in f64")
    }

    pub fn to_json(&self) -> Json {
        json!({
            "a": cplx_json(&self.a),
            "b": cplx_json(&self.b),
            "c": cplx_json(&self.c),
            "d": cplx_json(&self.d),
            "constant": self.constant,
            "descriptor": self.descriptor(),
        })
    }

    /// `coeffs:` form descriptor of the normalized coefficients.
    pub fn descriptor(&self) -> String {
        format!(
            "coeffs:a={},b={},c={},d={}",
            format_cplx(&self.a),
            format_cplx(&self.b),
            format_cplx(&self.c),
            format_cplx(&self.d)
        )
    }

    /// `|d|^2 - |c|^2`, positive exactly when the pole lies outside the closed disk.
    pub(crate) fn pole_margin(&self) -> R {
        abs2(&self.d) - abs2(&self.c)
    }
}

impl<R: Real> fmt::Display for Mobius<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({})z + ({}))/(({})z + ({}))",
            format_cplx(&self.a),
            format_cplx(&self.b),
            format_cplx(&self.c),
            format_cplx(&self.d)
        )
    }
}
