//! Posinormality, coposinormality and hyponormality of `C_φ`.
//!
//! Every verdict is reached twice. The criterion route asks whether `φ∘σ⁻¹`
//! (resp. `σ∘φ⁻¹`) maps the disk into itself, plus a zero of `φ` in the disk
//! for posinormality. The case route dispatches on the fixed-point type. The
//! two must agree; in the exact backend a disagreement is an error, in the
//! float backend it marks the verdict marginal.

use num_complex::Complex;
use serde_json::{json, Value as Json};

use crate::adjoint::{phi_sigma_inv, sigma_phi_inv, triple_from_coeffs, AdjointTriple};
use crate::error::{Error, Result};
use crate::halfplane::{halfplane_form, HalfplaneForm};
use crate::mobius::{classify, is_selfmap_of_disk, ClassKind, ExtPoint, MapClass, Mobius, Value};
use crate::scalar::{abs2, cplx_json, is_real_c, is_zero_c, unit_cmp, Backend, Cplx, Judged, Quad, Real, Sign};

/// Which case of the fixed-point analysis produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    ConstantZero,
    ConstantNonzero,
    Automorphism,
    DilationExterior,
    DilationBoundary,
    Parabolic,
    Hyperbolic,
    NormalForm,
    BoundaryForm,
    NotHyponormal,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::ConstantZero => "constant-zero",
            Branch::ConstantNonzero => "constant-nonzero",
            Branch::Automorphism => "automorphism",
            Branch::DilationExterior => "dilation-exterior",
            Branch::DilationBoundary => "dilation-boundary",
            Branch::Parabolic => "parabolic",
            Branch::Hyperbolic => "hyperbolic",
            Branch::NormalForm => "normal-form",
            Branch::BoundaryForm => "boundary-form",
            Branch::NotHyponormal => "not-hyponormal",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness<R> {
    /// `β` in the disk with `φ(β) = 0`.
    Zero(Cplx<R>),
    Canonical(CanonicalDilationForm<R>),
    Halfplane(HalfplaneForm<R>),
    /// `φ(z) = αz`.
    Normal {
        alpha: Cplx<R>,
    },
    /// `φ(z) = sz/(1 − (1−s)η̄z)`.
    Boundary {
        s: R,
        eta: Cplx<R>,
    },
}

impl<R: Real> Witness<R> {
    pub fn to_json(&self) -> Json {
        match self {
            Witness::Zero(beta) => json!({"kind": "zero", "beta": cplx_json(beta)}),
            Witness::Canonical(f) => json!({"kind": "canonical", "form": f.to_json()}),
            Witness::Halfplane(h) => json!({"kind": "halfplane", "form": h.to_json()}),
            Witness::Normal { alpha } => json!({"kind": "normal", "alpha": cplx_json(alpha)}),
            Witness::Boundary { s, eta } => json!({"kind": "boundary", "s": s.to_json(), "eta": cplx_json(eta)}),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<R> {
    pub value: bool,
    pub route_criterion: bool,
    pub route_case: bool,
    pub branch: Branch,
    pub witness: Option<Witness<R>>,
    pub marginal: bool,
}

impl<R: Real> Verdict<R> {
    pub fn to_json(&self) -> Json {
        json!({
            "value": self.value,
            "route_criterion": self.route_criterion,
            "route_case": self.route_case,
            "branch": self.branch.name(),
            "witness": self.witness.as_ref().map(Witness::to_json),
            "marginal": self.marginal,
        })
    }
}

fn settle<R: Real>(
    what: &str,
    criterion: Judged<bool>,
    case: Judged<bool>,
    branch: Branch,
    witness: Option<Witness<R>>,
) -> Result<Verdict<R>> {
    let mut marginal = criterion.marginal || case.marginal;
    if criterion.value != case.value {
        if R::BACKEND == Backend::Exact {
            return Err(Error::CrossCheckMismatch(format!(
                "{what}: criterion route gives {}, case route ({}) gives {}",
                criterion.value,
                branch.name(),
                case.value
            )));
        }
        marginal = true;
    }
    Ok(Verdict {
        value: case.value,
        route_criterion: criterion.value,
        route_case: case.value,
        branch,
        witness,
        marginal,
    })
}

/// `ψ = τ_w∘φ∘τ_w = az/(1 − cz)` for a map with interior fixed point `w`,
/// where `τ_w(z) = (w−z)/(1−w̄z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalDilationForm<R> {
    pub w: Value<R>,
    pub alpha: Value<R>,
    pub c: Value<R>,
    /// `c = 0`, so that `φ = τ_w∘(ατ_w)`.
    pub conjugate_dilation: Judged<bool>,
    /// `|w| < |α|`; only decided when `c = 0`.
    pub w_inside_alpha: Option<Judged<bool>>,
}

impl<R: Real> CanonicalDilationForm<R> {
    pub fn to_json(&self) -> Json {
        json!({
            "w": self.w.to_json(),
            "alpha": self.alpha.to_json(),
            "c": self.c.to_json(),
            "conjugate_dilation": self.conjugate_dilation.value,
            "w_inside_alpha": self.w_inside_alpha.map(|j| j.value),
        })
    }
}

fn re<R: Real>(x: R) -> Cplx<R> {
    Complex::new(x, R::zero())
}

/// `c = 0` holds exactly when the fixed-point polynomial `cz² + (d−a)z − b`
/// is proportional to its reflection `−b̄z² + conj(d−a)z + c̄`.
fn reflection_symmetric<R: Real>(phi: &Mobius<R>) -> Judged<bool> {
    let (a, b, c, d) = (phi.a(), phi.b(), phi.c(), phi.d());
    let p = [c.clone(), d.clone() - a.clone(), -b.clone()];
    let q = [-b.conj(), (d.clone() - a.clone()).conj(), c.conj()];
    let mut out = Judged::sure(true);
    for i in 0..3 {
        for j in i + 1..3 {
            out = out.and(is_zero_c(&(p[i].clone() * q[j].clone() - p[j].clone() * q[i].clone())));
        }
    }
    out
}

/// For `φ = τ_w∘(ατ_w)` in `d = 1` normalization, `r = |w|²` is the smaller
/// root of `r² + (2 − Q)r + 1` with `Q = (d−a)²/(−bc)`, and `α = (a+r)/(1+ar)`.
/// Then `|w| < |α|` iff
/// `|a|² + 2r·Re a + r² − r − 2r²·Re a − r³|a|² > 0`.
fn decide_w_inside_alpha<R: Real>(phi: &Mobius<R>) -> Judged<bool> {
    let (a, b, c, d) = (phi.a(), phi.b(), phi.c(), phi.d());
    let b0 = is_zero_c(b);
    if b0.value {
        // αz: w = 0 and α ≠ 0
        return Judged::new(true, b0.marginal);
    }
    let dma = d.clone() - a.clone();
    let q = ((dma.clone() * dma) / (-(b.clone() * c.clone()))).re;
    let two = R::from_ratio(2, 1);
    let half = R::from_ratio(1, 2);
    let disc = q.clone() * q.clone() - R::from_ratio(4, 1) * q.clone();
    let r = Quad::new((q - two.clone()) * half.clone(), -half, disc);
    let r2 = r.mul(&r);
    let r3 = r2.mul(&r);
    let a2 = abs2(a);
    let two_re = two * a.re.clone();
    let f = r.scale(&two_re).add(&r2).sub(&r).sub(&r2.scale(&two_re)).sub(&r3.scale(&a2)).plus(&a2);
    f.sign().is_pos().taint(b0.marginal)
}

pub fn canonical_dilation_form<R: Real>(phi: &Mobius<R>) -> Result<CanonicalDilationForm<R>> {
    let class = classify(phi)?;
    canonical_with(phi, &class)
}

fn canonical_with<R: Real>(phi: &Mobius<R>, class: &MapClass<R>) -> Result<CanonicalDilationForm<R>> {
    if !matches!(
        class.kind,
        ClassKind::DilationInteriorExterior | ClassKind::DilationInteriorBoundary | ClassKind::EllipticAutomorphism
    ) {
        return Err(Error::NotDilationType);
    }
    let point = class.denjoy_wolff.as_ref().ok_or(Error::NotDilationType)?;
    let (w, alpha, c) = match &point.exact {
        Some(ExtPoint::Finite(w)) => {
            let tau = Mobius::tau(w.clone())?;
            let psi = tau.compose(phi)?.compose(&tau)?;
            let (pa, pc, pd) = (psi.a().clone(), psi.c().clone(), psi.d().clone());
            (Value::exact(w.clone()), Value::exact(pa / pd.clone()), Value::exact(-pc / pd))
        }
        _ => {
            let w = point.approx_finite().ok_or(Error::NotDilationType)?;
            let tau = Mobius::tau(w)?;
            let psi = tau.compose(&phi.to_f64())?.compose(&tau)?;
            (Value::approx(w), Value::approx(psi.a() / psi.d()), Value::approx(-psi.c() / psi.d()))
        }
    };
    let conjugate_dilation = reflection_symmetric(phi);
    let w_inside_alpha = conjugate_dilation.value.then(|| decide_w_inside_alpha(phi));
    Ok(CanonicalDilationForm { w, alpha, c, conjugate_dilation, w_inside_alpha })
}

fn zero_witness<R: Real>(zero: &Judged<Option<Cplx<R>>>) -> Option<Witness<R>> {
    zero.value.clone().map(Witness::Zero)
}

fn halfplane_witness<R: Real>(phi: &Mobius<R>) -> Option<Witness<R>> {
    halfplane_form(phi).ok().map(Witness::Halfplane)
}

fn constant_verdict<R: Real>(what: &str, v: &Cplx<R>) -> Result<Verdict<R>> {
    let zero = is_zero_c(v);
    let branch = if zero.value { Branch::ConstantZero } else { Branch::ConstantNonzero };
    let witness = zero.value.then(|| Witness::Zero(re(R::zero())));
    settle(what, zero, zero, branch, witness)
}

pub fn is_posinormal<R: Real>(phi: &Mobius<R>) -> Result<Verdict<R>> {
    let class = classify(phi)?;
    posinormal_with(phi, &class)
}

fn posinormal_with<R: Real>(phi: &Mobius<R>, class: &MapClass<R>) -> Result<Verdict<R>> {
    const WHAT: &str = "posinormal";
    if let Some(v) = phi.constant_value() {
        let zero = phi.zero_in_disk().map(|z| z.is_some());
        let case = is_zero_c(&v);
        let branch = if case.value { Branch::ConstantZero } else { Branch::ConstantNonzero };
        return settle(WHAT, zero, case, branch, case.value.then(|| Witness::Zero(re(R::zero()))));
    }
    let zero = phi.zero_in_disk();
    let vanishes = zero.clone().map(|z| z.is_some());
    let criterion = is_selfmap_of_disk(&phi_sigma_inv(phi)?).and(vanishes);
    let tainted = |j: Judged<bool>| j.taint(class.marginal);
    let (case, branch, witness) = match class.kind {
        k if k.is_automorphism() => (Judged::sure(true), Branch::Automorphism, zero_witness(&zero)),
        ClassKind::DilationInteriorExterior => {
            let form = canonical_with(phi, class)?;
            let ok = match form.w_inside_alpha {
                Some(inside) => form.conjugate_dilation.and(inside),
                None => form.conjugate_dilation,
            };
            (ok, Branch::DilationExterior, Some(Witness::Canonical(form)))
        }
        ClassKind::ParabolicNonAutomorphism => {
            let w = zero_witness(&zero).or_else(|| halfplane_witness(phi));
            (vanishes, Branch::Parabolic, w)
        }
        ClassKind::DilationInteriorBoundary => {
            let w = zero_witness(&zero).or_else(|| halfplane_witness(phi));
            (vanishes, Branch::DilationBoundary, w)
        }
        ClassKind::HyperbolicNonAutomorphism => (Judged::sure(false), Branch::Hyperbolic, halfplane_witness(phi)),
        k => return Err(Error::Inconsistent(format!("unexpected class {}", k.name()))),
    };
    settle(WHAT, criterion, tainted(case), branch, witness)
}

pub fn is_coposinormal<R: Real>(phi: &Mobius<R>) -> Result<Verdict<R>> {
    let class = classify(phi)?;
    coposinormal_with(phi, &class)
}

fn coposinormal_with<R: Real>(phi: &Mobius<R>, class: &MapClass<R>) -> Result<Verdict<R>> {
    const WHAT: &str = "coposinormal";
    if let Some(v) = phi.constant_value() {
        return constant_verdict(WHAT, &v);
    }
    let criterion = is_selfmap_of_disk(&sigma_phi_inv(phi)?);
    let (case, branch, witness) = match class.kind {
        k if k.is_automorphism() => (Judged::sure(true), Branch::Automorphism, None),
        ClassKind::HyperbolicNonAutomorphism => (Judged::sure(true), Branch::Hyperbolic, halfplane_witness(phi)),
        ClassKind::ParabolicNonAutomorphism => (Judged::sure(true), Branch::Parabolic, halfplane_witness(phi)),
        ClassKind::DilationInteriorExterior => {
            let form = canonical_with(phi, class)?;
            (form.conjugate_dilation, Branch::DilationExterior, Some(Witness::Canonical(form)))
        }
        ClassKind::DilationInteriorBoundary => (Judged::sure(false), Branch::DilationBoundary, halfplane_witness(phi)),
        k => return Err(Error::Inconsistent(format!("unexpected class {}", k.name()))),
    };
    settle(WHAT, criterion, case.taint(class.marginal), branch, witness)
}

/// Matches `φ` against `αz` and `sz/(1 − (1−s)η̄z)` with `0 < s < 1`, `|η| = 1`.
fn hyponormal_form<R: Real>(phi: &Mobius<R>) -> (Judged<bool>, Branch, Option<Witness<R>>) {
    if let Some(v) = phi.constant_value() {
        let z = is_zero_c(&v);
        let w = z.value.then(|| Witness::Normal { alpha: re(R::zero()) });
        return (z, if z.value { Branch::NormalForm } else { Branch::NotHyponormal }, w);
    }
    let (a, b, c) = (phi.a(), phi.b(), phi.c());
    let b0 = is_zero_c(b);
    if !b0.value {
        return (b0.map(|_| false), Branch::NotHyponormal, None);
    }
    // b = 0 forces d = 1 in canonical normalization
    let c0 = is_zero_c(c).taint(b0.marginal);
    if c0.value {
        return (c0, Branch::NormalForm, Some(Witness::Normal { alpha: a.clone() }));
    }
    let real = is_real_c(a).taint(c0.marginal);
    let s = a.re.clone();
    let one_minus = R::one() - s.clone();
    let lower = s.sign().is_pos();
    let upper = one_minus.sign().is_pos();
    let fits = real.and(lower).and(upper);
    if !fits.value {
        return (fits, Branch::NotHyponormal, None);
    }
    let modulus = (abs2(c) - one_minus.clone() * one_minus.clone()).sign().is_zero();
    let ok = fits.and(modulus);
    if !ok.value {
        return (ok, Branch::NotHyponormal, None);
    }
    let eta = (-c.clone() / re(one_minus)).conj();
    (ok, Branch::BoundaryForm, Some(Witness::Boundary { s, eta }))
}

pub fn is_hyponormal<R: Real>(phi: &Mobius<R>) -> Result<Verdict<R>> {
    let class = classify(phi)?;
    let pos = posinormal_with(phi, &class)?;
    hyponormal_with(phi, &pos)
}

fn hyponormal_with<R: Real>(phi: &Mobius<R>, pos: &Verdict<R>) -> Result<Verdict<R>> {
    let fixes_zero = is_zero_c(&phi.at_zero()?);
    let criterion = Judged::new(pos.value, pos.marginal).and(fixes_zero);
    let (case, branch, witness) = hyponormal_form(phi);
    settle("hyponormal", criterion, case, branch, witness)
}

/// `φ∘…∘φ` (`n` times).
pub fn power_map<R: Real>(phi: &Mobius<R>, n: u64) -> Result<Mobius<R>> {
    if n == 0 {
        return Err(Error::InvalidParameter("power must be positive".into()));
    }
    phi.power(n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport<R> {
    pub map: Mobius<R>,
    pub map_class: MapClass<R>,
    pub adjoint: AdjointTriple<R>,
    pub halfplane: Option<HalfplaneForm<R>>,
    pub canonical: Option<CanonicalDilationForm<R>>,
    pub posinormal: Verdict<R>,
    pub coposinormal: Verdict<R>,
    pub hyponormal: Verdict<R>,
    pub subnormal_equivalent: bool,
    /// Smallest `n` with `φⁿ` not posinormal, for a parabolic map that is
    /// posinormal and coposinormal.
    pub power_breakdown_at_n: Option<u64>,
    pub notes: Vec<String>,
}

impl<R: Real> ClassificationReport<R> {
    pub fn to_json(&self) -> Json {
        json!({
            "map": self.map.to_json(),
            "map_class": self.map_class.to_json(),
            "adjoint": self.adjoint.to_json(),
            "halfplane": self.halfplane.as_ref().map(HalfplaneForm::to_json),
            "canonical": self.canonical.as_ref().map(CanonicalDilationForm::to_json),
            "posinormal": self.posinormal.to_json(),
            "coposinormal": self.coposinormal.to_json(),
            "hyponormal": self.hyponormal.to_json(),
            "subnormal_equivalent": self.subnormal_equivalent,
            "power_breakdown_at_n": self.power_breakdown_at_n,
            "notes": self.notes,
        })
    }

    pub fn marginal(&self) -> bool {
        self.map_class.marginal || self.posinormal.marginal || self.coposinormal.marginal || self.hyponormal.marginal
    }
}

pub fn classify_report<R: Real>(phi: &Mobius<R>) -> Result<ClassificationReport<R>> {
    let map_class = classify(phi)?;
    let [a, b, c, d] = phi.coeffs();
    let adjoint = triple_from_coeffs(&a, &b, &c, &d)?;
    let posinormal = posinormal_with(phi, &map_class)?;
    let coposinormal = coposinormal_with(phi, &map_class)?;
    let hyponormal = hyponormal_with(phi, &posinormal)?;
    let halfplane = halfplane_form(phi).ok();
    let canonical = canonical_with(phi, &map_class).ok();

    let mut notes = Vec::new();
    if map_class.kind == ClassKind::Constant && posinormal.value {
        notes.push("constant zero symbol: C_phi is self-adjoint".to_string());
    }
    if map_class.elliptic {
        notes.push("elliptic automorphism: the interior fixed point is not a Denjoy-Wolff point".to_string());
    }
    let mut power_breakdown_at_n = None;
    if map_class.kind == ClassKind::ParabolicNonAutomorphism && posinormal.value && coposinormal.value {
        if let Some(t) = halfplane.as_ref().and_then(HalfplaneForm::translation) {
            power_breakdown_at_n = (R::one() / t.re.clone()).ceil_u64();
        }
        if let Some(n) = power_breakdown_at_n {
            notes.push(format!("posinormal and coposinormal, but the power phi^{n} is not posinormal"));
        }
    }
    if map_class.kind == ClassKind::HyperbolicNonAutomorphism {
        notes.push("hyperbolic non-automorphism: coposinormal, never posinormal".to_string());
    }
    if map_class.marginal || posinormal.marginal || coposinormal.marginal || hyponormal.marginal {
        notes.push("float decision within tolerance of a boundary case".to_string());
    }
    Ok(ClassificationReport {
        map: phi.clone(),
        subnormal_equivalent: hyponormal.value,
        map_class,
        adjoint,
        halfplane,
        canonical,
        posinormal,
        coposinormal,
        hyponormal,
        power_breakdown_at_n,
        notes,
    })
}

/// `τ_w∘(ατ_w)` for `|w| < 1` and `|α| ≤ 1`.
pub fn tau_alpha_tau<R: Real>(w: &Cplx<R>, alpha: &Cplx<R>) -> Result<Mobius<R>> {
    if unit_cmp(w).value != Sign::Neg {
        return Err(Error::InvalidParameter("w must lie in the open unit disk".into()));
    }
    if unit_cmp(alpha).value == Sign::Pos {
        return Err(Error::InvalidParameter("alpha must lie in the closed unit disk".into()));
    }
    let tau = Mobius::tau(w.clone())?;
    let scaled = Mobius::affine(alpha.clone(), re(R::zero()))?.compose(&tau)?;
    tau.compose(&scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfplane::parabolic_map;
    use crate::scalar::{lit, Rat};

    fn m(a: &str, b: &str, c: &str, d: &str) -> Mobius<Rat> {
        Mobius::new(lit(a), lit(b), lit(c), lit(d)).unwrap()
    }

    fn tat(w: &str, alpha: &str) -> Mobius<Rat> {
        tau_alpha_tau(&lit(w), &lit(alpha)).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let f = canonical_dilation_form(&m("1/3+1/4i", "0", "0", "1")).unwrap();
        assert_eq!(f.w.exact, Some(lit("0")));
        assert_eq!(f.alpha.exact, Some(lit("1/3+1/4i")));
        assert_eq!(f.c.exact, Some(lit("0")));
        let f = canonical_dilation_form(&tat("1/4", "1/2")).unwrap();
        assert_eq!((f.w.exact, f.alpha.exact, f.c.exact), (Some(lit("1/4")), Some(lit("1/2")), Some(lit("0"))));
        assert!(f.conjugate_dilation.value && f.w_inside_alpha.unwrap().value);
        // τ_0 = −z, so ψ(z) = −φ(−z) = (1/2)z/(1 + z/2)
        let f = canonical_dilation_form(&m("1", "0", "-1", "2")).unwrap();
        assert_eq!((f.w.exact, f.alpha.exact, f.c.exact), (Some(lit("0")), Some(lit("1/2")), Some(lit("-1/2"))));
        assert!(!f.conjugate_dilation.value && f.w_inside_alpha.is_none());
        assert_eq!(canonical_dilation_form(&m("1", "1", "0", "2")), Err(Error::NotDilationType));
    }

    #[test]
    fn irrational_fixed_point_decided_exactly() {
        // |w| = 0.3605...
        let w: Cplx<f64> = Complex::new(0.3, 0.2);
        for (alpha, expect) in [(0.5, true), (0.3, false), (0.37, true), (0.35, false)] {
            let phi = tau_alpha_tau(&w, &Complex::new(alpha, 0.0)).unwrap();
            let f = canonical_dilation_form(&phi).unwrap();
            assert!(f.conjugate_dilation.value);
            assert_eq!(f.w_inside_alpha.unwrap().value, expect, "alpha {alpha}");
            assert!((f.alpha.approx - Complex::new(alpha, 0.0)).norm() < 1e-12);
        }
        // 1/(4 − z) has fixed points 2 ± √3, both real and mutually reflected
        let phi = m("0", "1", "-1", "4");
        let f = canonical_dilation_form(&phi).unwrap();
        assert!(f.w.exact.is_none());
        assert!(f.conjugate_dilation.value);
        let w = 2.0 - 3f64.sqrt();
        assert!((f.w.approx.re - w).abs() < 1e-14);
        // α = φ'(w) = 1/(4−w)² = w², so |w| < |α| fails
        assert!(!f.w_inside_alpha.unwrap().value);
        assert!((f.alpha.approx.re - w * w).abs() < 1e-14);
    }

    #[test]
    fn worked_verdicts() {
        let phi = parabolic_map(&lit::<Rat>("1/2")).unwrap();
        let r = classify_report(&phi).unwrap();
        assert!(r.posinormal.value && r.coposinormal.value && !r.hyponormal.value);
        assert_eq!(r.posinormal.witness, Some(Witness::Zero(lit("-1/3"))));
        assert_eq!(r.power_breakdown_at_n, Some(2));
        assert!(!is_posinormal(&power_map(&phi, 2).unwrap()).unwrap().value);

        let r = classify_report(&m("1", "0", "-1", "2")).unwrap();
        assert!(r.posinormal.value && !r.coposinormal.value && r.hyponormal.value && r.subnormal_equivalent);
        assert_eq!(r.hyponormal.branch, Branch::BoundaryForm);
        assert_eq!(r.hyponormal.witness, Some(Witness::Boundary { s: lit::<Rat>("1/2").re, eta: lit("1") }));

        let r = classify_report(&m("1", "1", "0", "2")).unwrap();
        assert!(!r.posinormal.value && r.coposinormal.value);
        assert_eq!(r.posinormal.branch, Branch::Hyperbolic);

        let both = classify_report(&tat("1/4", "1/2")).unwrap();
        assert!(both.posinormal.value && both.coposinormal.value);
        let co = classify_report(&tat("1/2", "1/4")).unwrap();
        assert!(!co.posinormal.value && co.coposinormal.value);
        assert_eq!(co.posinormal.branch, Branch::DilationExterior);
    }

    #[test]
    fn hyponormal_forms() {
        let r = is_hyponormal(&m("3/5+4/5i", "0", "0", "1")).unwrap();
        assert!(r.value);
        assert_eq!(r.witness, Some(Witness::Normal { alpha: lit("3/5+4/5i") }));
        assert!(is_hyponormal(&m("1/2i", "0", "0", "1")).unwrap().value);
        let eta: Cplx<Rat> = lit("3/5-4/5i");
        let s: Cplx<Rat> = lit("1/3");
        let phi = Mobius::new(s.clone(), lit("0"), -(lit::<Rat>("2/3") * eta.conj()), lit("1")).unwrap();
        let v = is_hyponormal(&phi).unwrap();
        assert_eq!(v.witness, Some(Witness::Boundary { s: s.re, eta }));
        // φ(0) = 0 but second fixed point outside the closed disk: not posinormal
        let v = is_hyponormal(&m("1/2", "0", "-1/4", "1")).unwrap();
        assert!(!v.value && v.route_criterion == v.route_case);
        assert!(!is_hyponormal(&parabolic_map(&lit::<Rat>("1/2")).unwrap()).unwrap().value);
    }

    #[test]
    fn constants() {
        let r = classify_report(&Mobius::<Rat>::constant(lit("0"))).unwrap();
        assert!(r.posinormal.value && r.coposinormal.value && r.hyponormal.value);
        assert!(r.notes.iter().any(|n| n.contains("self-adjoint")));
        let r = classify_report(&Mobius::<Rat>::constant(lit("1/2"))).unwrap();
        assert!(!r.posinormal.value && !r.coposinormal.value && !r.hyponormal.value);
        assert_eq!(classify_report(&m("2", "0", "0", "1")).unwrap_err(), Error::NotASelfmap);
    }

    #[test]
    fn automorphisms() {
        for phi in [
            Mobius::<Rat>::identity(),
            m("3/5+4/5i", "0", "0", "1"),
            Mobius::tau(lit("1/3-1/4i")).unwrap(),
            m("1", "1/2", "1/2", "1"),
            parabolic_map(&lit::<Rat>("2i")).unwrap(),
        ] {
            let r = classify_report(&phi).unwrap();
            assert!(r.posinormal.value && r.coposinormal.value, "{phi}");
            assert_eq!(r.posinormal.branch, Branch::Automorphism);
        }
    }

    #[test]
    fn power_map_examples() {
        let phi = parabolic_map(&lit::<Rat>("1/2")).unwrap();
        assert_eq!(power_map(&phi, 2).unwrap(), parabolic_map(&lit("1")).unwrap());
        assert_eq!(power_map(&phi, 1).unwrap(), phi);
        let a: Cplx<Rat> = lit("1/2+1/3i");
        let cube = a.clone() * a.clone() * a.clone();
        assert_eq!(
            power_map(&Mobius::affine(a, lit("0")).unwrap(), 3).unwrap(),
            Mobius::affine(cube, lit("0")).unwrap()
        );
        assert!(power_map(&phi, 0).is_err());
        let r = classify_report(&parabolic_map(&lit::<Rat>("1/3+i")).unwrap()).unwrap();
        assert_eq!(r.power_breakdown_at_n, Some(3));
        let r = classify_report(&parabolic_map(&lit::<Rat>("2/5")).unwrap()).unwrap();
        assert_eq!(r.power_breakdown_at_n, Some(3));
        assert!(is_posinormal(&power_map(&parabolic_map(&lit::<Rat>("2/5")).unwrap(), 2).unwrap()).unwrap().value);
    }

    #[test]
    fn float_backend_agrees() {
        for phi in [m("1", "0", "-1", "2"), m("1", "1", "0", "2"), tat("1/4", "1/2"), tat("1/2", "1/4")] {
            let exact = classify_report(&phi).unwrap();
            let float = classify_report(&phi.to_f64()).unwrap();
            assert_eq!(exact.posinormal.value, float.posinormal.value);
            assert_eq!(exact.coposinormal.value, float.coposinormal.value);
            assert_eq!(exact.hyponormal.value, float.hyponormal.value);
        }
    }
}
