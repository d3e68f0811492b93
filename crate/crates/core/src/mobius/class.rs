//! Fixed-point taxonomy of selfmaps.
//!
//! For `c != 0` the fixed points are the roots of `cz^2 + (d-a)z - b`. With
//! `S` and `P` their sum and product and `M = |z1 - z2|^4`, the moduli
//! `u_i = |z_i|^2` satisfy `u1 + u2 = (|S|^2 + sqrt M)/2` and `u1 u2 = |P|^2`.
//! The sign of `(1-u1)(1-u2)` and of `u1 + u2 - 2` then locate both points
//! relative to the circle using a single square root, which [`Quad`] settles
//! exactly.

use num_complex::Complex;
use serde_json::{json, Value as Json};

use super::{is_disk_automorphism, is_selfmap_of_disk, ExtPoint, Mobius, Point, Value};
use crate::error::{Error, Result};
use crate::scalar::{abs2, csqrt_exact, is_zero_c, unit_cmp, Backend, Judged, Quad, Real, Sign, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Constant,
    Identity,
    EllipticAutomorphism,
    DilationInteriorExterior,
    DilationInteriorBoundary,
    HyperbolicAutomorphism,
    HyperbolicNonAutomorphism,
    ParabolicAutomorphism,
    ParabolicNonAutomorphism,
}

impl ClassKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Constant => "Constant",
            ClassKind::Identity => "Identity",
            ClassKind::EllipticAutomorphism => "EllipticAutomorphism",
            ClassKind::DilationInteriorExterior => "DilationInteriorExterior",
            ClassKind::DilationInteriorBoundary => "DilationInteriorBoundary",
            ClassKind::HyperbolicAutomorphism => "HyperbolicAutomorphism",
            ClassKind::HyperbolicNonAutomorphism => "HyperbolicNonAutomorphism",
            ClassKind::ParabolicAutomorphism => "ParabolicAutomorphism",
            ClassKind::ParabolicNonAutomorphism => "ParabolicNonAutomorphism",
        }
    }

    pub fn is_automorphism(self) -> bool {
        matches!(
            self,
            ClassKind::Identity
                | ClassKind::EllipticAutomorphism
                | ClassKind::HyperbolicAutomorphism
                | ClassKind::ParabolicAutomorphism
        )
    }

    pub fn is_dilation(self) -> bool {
        matches!(self, ClassKind::DilationInteriorExterior | ClassKind::DilationInteriorBoundary)
    }

    pub fn is_parabolic(self) -> bool {
        matches!(self, ClassKind::ParabolicAutomorphism | ClassKind::ParabolicNonAutomorphism)
    }

    pub fn is_hyperbolic(self) -> bool {
        matches!(self, ClassKind::HyperbolicAutomorphism | ClassKind::HyperbolicNonAutomorphism)
    }

    /// Types whose Denjoy-Wolff point lies on the unit circle.
    pub fn has_boundary_dw(self) -> bool {
        self.is_parabolic() || self.is_hyperbolic()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapClass<R> {
    pub kind: ClassKind,
    /// For elliptic automorphisms this slot holds the interior fixed point,
    /// which is not a Denjoy-Wolff point; see `elliptic`.
    pub denjoy_wolff: Option<Point<R>>,
    pub second_fixed_point: Option<Point<R>>,
    pub derivative_at_dw: Option<Value<R>>,
    pub elliptic: bool,
    pub marginal: bool,
}

impl<R: Real> MapClass<R> {
    fn bare(kind: ClassKind, marginal: bool) -> Self {
        MapClass {
            kind,
            denjoy_wolff: None,
            second_fixed_point: None,
            derivative_at_dw: None,
            elliptic: false,
            marginal,
        }
    }

    pub fn to_json(&self) -> Json {
        json!({
            "kind": self.kind.name(),
            "denjoy_wolff": self.denjoy_wolff.as_ref().map(Point::to_json),
            "second_fixed_point": self.second_fixed_point.as_ref().map(Point::to_json),
            "derivative_at_dw": self.derivative_at_dw.as_ref().map(Value::to_json),
            "elliptic": self.elliptic,
            "marginal": self.marginal,
        })
    }
}

fn two<R: Real>() -> R {
    R::one() + R::one()
}

fn approx_roots(f: &Mobius<f64>) -> [C64; 2] {
    let (a, b, c, d) = (*f.a(), *f.b(), *f.c(), *f.d());
    let disc = (d - a) * (d - a) + 4.0 * b * c;
    let s = disc.sqrt();
    [((a - d) + s) / (2.0 * c), ((a - d) - s) / (2.0 * c)]
}

/// Fixed points on the extended plane; a double fixed point is listed once.
pub fn fixed_points<R: Real>(f: &Mobius<R>) -> Result<Vec<Point<R>>> {
    if f.is_constant() {
        return Err(Error::ConstantMap);
    }
    if f.is_identity() {
        return Err(Error::IdentityMapAllFixed);
    }
    let (a, b, c, d) = (f.a().clone(), f.b().clone(), f.c().clone(), f.d().clone());
    if is_zero_c(&c).value {
        let one = Complex::new(R::one(), R::zero());
        let slope = one - a.clone();
        if is_zero_c(&slope).value {
            return Ok(vec![Point::infinity()]);
        }
        let z0 = b / (slope * d);
        return Ok(vec![Point::exact(ExtPoint::Finite(z0)), Point::infinity()]);
    }
    let disc = (d.clone() - a.clone()) * (d.clone() - a.clone())
        + Complex::new(R::from_ratio(4, 1), R::zero()) * b * c.clone();
    let twoc = c * Complex::new(two::<R>(), R::zero());
    if is_zero_c(&disc).value {
        return Ok(vec![Point::exact(ExtPoint::Finite((a - d) / twoc))]);
    }
    match csqrt_exact(&disc) {
        Some(s) => Ok(vec![
            Point::exact(ExtPoint::Finite((a.clone() - d.clone() + s.clone()) / twoc.clone())),
            Point::exact(ExtPoint::Finite((a - d - s) / twoc)),
        ]),
        None => {
            let [r1, r2] = approx_roots(&f.to_f64());
            Ok(vec![Point::approx(ExtPoint::Finite(r1)), Point::approx(ExtPoint::Finite(r2))])
        }
    }
}

fn derivative_value<R: Real>(f: &Mobius<R>, p: &Point<R>) -> Option<Value<R>> {
    match &p.exact {
        Some(ExtPoint::Finite(z)) => f.derivative_at(z).ok().map(Value::exact),
        Some(ExtPoint::Infinity) => None,
        None => {
            let z = p.approx_finite()?;
            f.to_f64().derivative_at(&z).ok().map(Value::approx)
        }
    }
}

/// Sign of `|p|^2 - 1`, exact when the point is.
fn point_unit_cmp<R: Real>(p: &Point<R>) -> Judged<Sign> {
    match &p.exact {
        Some(e) => e.unit_cmp(),
        None => {
            let r = p.approx_finite().map(|z| z.norm_sqr()).unwrap_or(f64::INFINITY);
            crate::scalar::Real::sign(&(r - 1.0)).taint(true)
        }
    }
}

fn modulus_key<R: Real>(p: &Point<R>) -> f64 {
    p.approx_finite().map(|z| z.norm_sqr()).unwrap_or(f64::INFINITY)
}

/// Fixed-point type of a selfmap of the disk.
/// A selfmap other than the identity has no two fixed points on one side of
/// the circle and no fixed point outside it when affine. In the float backend
/// such a sign can only come from rounding a boundary point, so it is read as
/// `Zero` and flagged marginal; the exact backend keeps it and reports the
/// inconsistency.
fn settle_on_circle<R: Real>(sign: &mut Judged<Sign>, impossible: Sign) {
    if R::BACKEND == Backend::Float && sign.value == impossible {
        sign.value = Sign::Zero;
        sign.marginal = true;
    }
}

pub fn classify<R: Real>(f: &Mobius<R>) -> Result<MapClass<R>> {
    let sm = is_selfmap_of_disk(f);
    if !sm.value {
        return Err(Error::NotASelfmap);
    }
    let mut marginal = sm.marginal;
    if let Some(v) = f.constant_value() {
        let mut out = MapClass::bare(ClassKind::Constant, marginal);
        out.denjoy_wolff = Some(Point::exact(ExtPoint::Finite(v)));
        return Ok(out);
    }
    if f.is_identity() {
        return Ok(MapClass::bare(ClassKind::Identity, marginal));
    }
    let auto = is_disk_automorphism(f);
    marginal |= auto.marginal;
    let (a, b, c, d) = (f.a().clone(), f.b().clone(), f.c().clone(), f.d().clone());

    let c_zero = is_zero_c(&c);
    marginal |= c_zero.marginal;
    if c_zero.value {
        let pts = fixed_points(f)?;
        let z0 = pts[0].clone();
        let mut side = point_unit_cmp(&z0);
        settle_on_circle::<R>(&mut side, Sign::Pos);
        marginal |= side.marginal;
        let deriv = Some(Value::exact(a.clone() / d.clone()));
        let kind = match (side.value, auto.value) {
            (Sign::Neg, true) => ClassKind::EllipticAutomorphism,
            (Sign::Neg, false) => ClassKind::DilationInteriorExterior,
            (Sign::Zero, false) => ClassKind::HyperbolicNonAutomorphism,
            _ => return Err(Error::Inconsistent(format!("affine selfmap with fixed point {:?}", z0.approx))),
        };
        return Ok(MapClass {
            kind,
            denjoy_wolff: Some(z0),
            second_fixed_point: Some(Point::infinity()),
            derivative_at_dw: deriv,
            elliptic: kind == ClassKind::EllipticAutomorphism,
            marginal,
        });
    }

    let disc = (d.clone() - a.clone()) * (d.clone() - a.clone())
        + Complex::new(R::from_ratio(4, 1), R::zero()) * b.clone() * c.clone();
    let disc_zero = is_zero_c(&disc);
    marginal |= disc_zero.marginal;
    if disc_zero.value {
        let z = (a - d) / (c * Complex::new(two::<R>(), R::zero()));
        let mut side = unit_cmp(&z);
        settle_on_circle::<R>(&mut side, Sign::Pos);
        settle_on_circle::<R>(&mut side, Sign::Neg);
        marginal |= side.marginal;
        if side.value != Sign::Zero {
            return Err(Error::Inconsistent("double fixed point off the unit circle".into()));
        }
        let kind = if auto.value { ClassKind::ParabolicAutomorphism } else { ClassKind::ParabolicNonAutomorphism };
        return Ok(MapClass {
            kind,
            denjoy_wolff: Some(Point::exact(ExtPoint::Finite(z))),
            second_fixed_point: None,
            derivative_at_dw: Some(Value::exact(Complex::new(R::one(), R::zero()))),
            elliptic: false,
            marginal,
        });
    }

    let s = (a.clone() - d.clone()) / c.clone();
    let p = -b / c.clone();
    let c2 = abs2(&c);
    let m = abs2(&disc) / (c2.clone() * c2);
    let s2 = abs2(&s);
    let x = R::one() + abs2(&p) - s2.clone() / two::<R>();
    // sign of (1 - u1)(1 - u2) = sign(2X - sqrt M) / 2
    let mut across = Quad::new(two::<R>() * x, -R::one(), m.clone()).sign();
    settle_on_circle::<R>(&mut across, Sign::Pos);
    marginal |= across.marginal;
    let pts = fixed_points(f)?;
    let (p1, p2) = (pts[0].clone(), pts[1].clone());
    match across.value {
        Sign::Neg => {
            let (inner, outer) = order_by_side(p1, p2, Sign::Neg);
            let kind = if auto.value { ClassKind::EllipticAutomorphism } else { ClassKind::DilationInteriorExterior };
            Ok(MapClass {
                kind,
                derivative_at_dw: derivative_value(f, &inner),
                denjoy_wolff: Some(inner),
                second_fixed_point: Some(outer),
                elliptic: auto.value,
                marginal,
            })
        }
        Sign::Zero => {
            // u1 + u2 - 2 = (|S|^2 - 4 + sqrt M)/2
            let spread = Quad::new(s2 - R::from_ratio(4, 1), R::one(), m).sign();
            marginal |= spread.marginal;
            match spread.value {
                Sign::Neg => {
                    let (boundary, inner) = order_by_side(p1, p2, Sign::Zero);
                    Ok(MapClass {
                        kind: ClassKind::DilationInteriorBoundary,
                        derivative_at_dw: derivative_value(f, &inner),
                        denjoy_wolff: Some(inner),
                        second_fixed_point: Some(boundary),
                        elliptic: false,
                        marginal,
                    })
                }
                Sign::Pos => {
                    let (boundary, outer) = order_by_side(p1, p2, Sign::Zero);
                    Ok(MapClass {
                        kind: ClassKind::HyperbolicNonAutomorphism,
                        derivative_at_dw: derivative_value(f, &boundary),
                        denjoy_wolff: Some(boundary),
                        second_fixed_point: Some(outer),
                        elliptic: false,
                        marginal,
                    })
                }
                Sign::Zero => {
                    let d1 = derivative_value(f, &p1);
                    let d2 = derivative_value(f, &p2);
                    let attracting_first = match (&d1, &d2) {
                        (Some(Value { exact: Some(x), .. }), _) => unit_cmp(x).value == Sign::Neg,
                        (Some(v), _) => v.approx.norm_sqr() < 1.0,
                        (None, _) => false,
                    };
                    let (dw, other, dd) = if attracting_first { (p1, p2, d1) } else { (p2, p1, d2) };
                    Ok(MapClass {
                        kind: ClassKind::HyperbolicAutomorphism,
                        denjoy_wolff: Some(dw),
                        second_fixed_point: Some(other),
                        derivative_at_dw: dd,
                        elliptic: false,
                        marginal,
                    })
                }
            }
        }
        Sign::Pos => Err(Error::Inconsistent("both fixed points on the same side of the circle".into())),
    }
}

/// Returns `(q, r)` where `q` is the point whose side of the circle is
/// `want` (`Neg` inside, `Zero` on it); `r` is the other one.
fn order_by_side<R: Real>(p1: Point<R>, p2: Point<R>, want: Sign) -> (Point<R>, Point<R>) {
    if let (Some(_), Some(_)) = (&p1.exact, &p2.exact) {
        if point_unit_cmp(&p1).value == want {
            return (p1, p2);
        }
        if point_unit_cmp(&p2).value == want {
            return (p2, p1);
        }
    }
    let k1 = modulus_key(&p1);
    let k2 = modulus_key(&p2);
    let first = match want {
        Sign::Neg => k1 <= k2,
        _ => (k1 - 1.0).abs() <= (k2 - 1.0).abs(),
    };
    if first {
        (p1, p2)
    } else {
        (p2, p1)
    }
}
