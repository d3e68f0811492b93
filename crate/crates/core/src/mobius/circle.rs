use num_complex::Complex;
use serde_json::{json, Value as Json};

use super::{ExtPoint, Mobius};
use crate::error::{Error, Result};
use crate::scalar::{abs2, cplx_json, is_zero_c, Cplx, Judged, Real, Sign};

/// Image of the unit circle: a circle, or a line when the pole is on it.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneralizedCircle<R> {
    Circle {
        center: Cplx<R>,
        radius_sq: R,
    },
    /// The exact backend keeps `direction` unnormalized.
    Line {
        point: Cplx<R>,
        direction: Cplx<R>,
    },
}

impl<R: Real> GeneralizedCircle<R> {
    pub fn to_json(&self) -> Json {
        match self {
            GeneralizedCircle::Circle { center, radius_sq } => {
                json!({"kind": "circle", "center": cplx_json(center), "radius_sq": radius_sq.to_json()})
            }
            GeneralizedCircle::Line { point, direction } => {
                json!({"kind": "line", "point": cplx_json(point), "direction": cplx_json(direction)})
            }
        }
    }
}

pub fn image_of_unit_circle<R: Real>(f: &Mobius<R>) -> Result<GeneralizedCircle<R>> {
    if f.is_constant() {
        return Err(Error::ConstantMap);
    }
    let margin = f.pole_margin();
    if margin.sign().value == Sign::Zero {
        let candidates =
            [Complex::new(R::one(), R::zero()), Complex::new(-R::one(), R::zero()), Complex::new(R::zero(), R::one())];
        let images: Vec<Cplx<R>> = candidates
            .iter()
            .filter_map(|z| match f.apply(&ExtPoint::Finite(z.clone())) {
                ExtPoint::Finite(w) => Some(w),
                ExtPoint::Infinity => None,
            })
            .take(2)
            .collect();
        let point = images[0].clone();
        let mut direction = images[1].clone() - point.clone();
        if let Some(n) = abs2(&direction).sqrt_exact().filter(|_| R::BACKEND == crate::scalar::Backend::Float) {
            direction = direction / Complex::new(n, R::zero());
        }
        return Ok(GeneralizedCircle::Line { point, direction });
    }
    let (a, b, c, d) = (f.a(), f.b(), f.c(), f.d());
    let den = Complex::new(margin.clone(), R::zero());
    let center = (b.clone() * d.conj() - a.clone() * c.conj()) / den;
    let radius_sq = abs2(&center) - (abs2(b) - abs2(a)) / margin;
    Ok(GeneralizedCircle::Circle { center, radius_sq })
}

/// Whether `f` maps the open unit disk into itself.
///
/// For nonconstant maps this asks for the pole outside the closed disk and
/// for the image disk to sit in the closed unit disk, which by openness puts
/// the image of the open disk inside the open disk.
pub fn is_selfmap_of_disk<R: Real>(f: &Mobius<R>) -> Judged<bool> {
    if let Some(v) = f.constant_value() {
        return crate::scalar::unit_cmp(&v).is_neg();
    }
    let orient = f.pole_margin().sign();
    if orient.value != Sign::Pos {
        return Judged::new(false, orient.marginal);
    }
    let Ok(GeneralizedCircle::Circle { center, radius_sq }) = image_of_unit_circle(f) else {
        return Judged::new(false, orient.marginal);
    };
    let m2 = abs2(&center);
    let slack = R::one() - m2.clone() - radius_sq.clone();
    let four = R::from_ratio(4, 1);
    let first = slack.sign().is_nonneg();
    let second = (slack.clone() * slack - four * m2 * radius_sq).sign().is_nonneg();
    first.and(second).taint(orient.marginal)
}

/// Whether `f` is a conformal automorphism of the unit disk.
pub fn is_disk_automorphism<R: Real>(f: &Mobius<R>) -> Judged<bool> {
    if f.is_constant() {
        return Judged::sure(false);
    }
    let selfmap = is_selfmap_of_disk(f);
    if !selfmap.value {
        return selfmap;
    }
    match image_of_unit_circle(f) {
        Ok(GeneralizedCircle::Circle { center, radius_sq }) => {
            let centered = is_zero_c(&center);
            let unit = (radius_sq - R::one()).sign().is_zero();
            selfmap.and(centered).and(unit)
        }
        _ => Judged::new(false, selfmap.marginal),
    }
}
