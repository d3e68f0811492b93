//! Textual map specifications.
//!
//! A specification is either a coefficient list or one of the named families:
//!
//! ```text
//! coeffs:a=1,b=0,c=-1,d=2
//! parabolic:t=1/2
//! tau-alpha-tau:w=1/4,alpha=1/2
//! halfplane:s=1/2,r=1[,w=i]
//! canonical-hypo:s=1/2,eta=1
//! constant:v=1/3
//! rotation:theta=0.5
//! ```
//!
//! Numbers are complex literals (`RE`, `IMi`, `RE+IMi`, `RE-IMi`) whose parts
//! are integers, decimals or `p/q`. Decimals are read exactly, so every
//! family except `rotation` builds exactly in both backends.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde_json::Value as Json;

use crate::classifier::tau_alpha_tau;
use crate::error::{Error, Result};
use crate::halfplane::{from_halfplane, parabolic_map};
use crate::mobius::Mobius;
use crate::scalar::{abs2, format_cplx, parse_rat_cplx, Backend, Cplx, Rat, Real};

#[derive(Clone, Debug, PartialEq)]
pub enum MapSpec {
    Coeffs {
        a: Cplx<Rat>,
        b: Cplx<Rat>,
        c: Cplx<Rat>,
        d: Cplx<Rat>,
    },
    Parabolic {
        t: Cplx<Rat>,
    },
    TauAlphaTau {
        w: Cplx<Rat>,
        alpha: Cplx<Rat>,
    },
    Halfplane {
        s: Rat,
        r: Cplx<Rat>,
        w: Cplx<Rat>,
    },
    CanonicalHypo {
        s: Rat,
        eta: Cplx<Rat>,
    },
    Constant {
        v: Cplx<Rat>,
    },
    /// `z ↦ e^{iθ} z`, θ in radians.
    Rotation {
        theta: Rat,
    },
}

struct Field<'a> {
    key: &'a str,
    value: &'a str,
    /// Byte offset of `value` in the whole input.
    at: usize,
    key_at: usize,
}

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn fields(body: &str, base: usize) -> Result<Vec<Field<'_>>> {
    let mut out: Vec<Field<'_>> = Vec::new();
    let mut off = base;
    for part in body.split(',') {
        let lead = part.len() - part.trim_start().len();
        let Some(eq) = part.find('=') else {
            return Err(parse_err(off + lead, "expected key=value"));
        };
        let key = part[..eq].trim();
        if key.is_empty() {
            return Err(parse_err(off + lead, "empty key"));
        }
        if out.iter().any(|f| f.key == key) {
            return Err(parse_err(off + lead, format!("duplicate key '{key}'")));
        }
        out.push(Field { key, value: &part[eq + 1..], at: off + eq + 1, key_at: off + lead });
        off += part.len() + 1;
    }
    Ok(out)
}

struct Fields<'a> {
    list: Vec<Field<'a>>,
    end: usize,
}

impl Fields<'_> {
    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        let i = self.list.iter().position(|f| f.key == key)?;
        let f = self.list.remove(i);
        Some((f.value.to_string(), f.at))
    }

    fn cplx(&mut self, key: &str) -> Result<Cplx<Rat>> {
        match self.take(key) {
            Some((v, at)) => number(&v, at),
            None => Err(parse_err(self.end, format!("missing key '{key}'"))),
        }
    }

    fn cplx_or(&mut self, key: &str, default: Cplx<Rat>) -> Result<Cplx<Rat>> {
        match self.take(key) {
            Some((v, at)) => number(&v, at),
            None => Ok(default),
        }
    }

    fn real(&mut self, key: &str) -> Result<Rat> {
        let (v, at) = self.take(key).ok_or_else(|| parse_err(self.end, format!("missing key '{key}'")))?;
        let z = number(&v, at)?;
        if !z.im.is_zero() {
            return Err(parse_err(at, format!("'{key}' must be real")));
        }
        Ok(z.re)
    }

    fn finish(self) -> Result<()> {
        match self.list.first() {
            Some(f) => Err(parse_err(f.key_at, format!("unknown key '{}'", f.key))),
            None => Ok(()),
        }
    }
}

fn number(text: &str, at: usize) -> Result<Cplx<Rat>> {
    let lead = text.len() - text.trim_start().len();
    parse_rat_cplx(text, at + lead).map_err(|e| parse_err(e.pos, e.msg))
}

/// Parses a form descriptor.
pub fn parse_map_spec(text: &str) -> Result<MapSpec> {
    let Some(colon) = text.find(':') else {
        return Err(parse_err(0, "expected '<family>:<key>=<value>,...'"));
    };
    let family = text[..colon].trim();
    let mut f = Fields { list: fields(&text[colon + 1..], colon + 1)?, end: text.len() };
    let spec = match family {
        "coeffs" => MapSpec::Coeffs { a: f.cplx("a")?, b: f.cplx("b")?, c: f.cplx("c")?, d: f.cplx("d")? },
        "parabolic" => MapSpec::Parabolic { t: f.cplx("t")? },
        "tau-alpha-tau" => MapSpec::TauAlphaTau { w: f.cplx("w")?, alpha: f.cplx("alpha")? },
        "halfplane" => {
            let s = f.real("s")?;
            let r = f.cplx("r")?;
            let w = f.cplx_or("w", Complex::one())?;
            MapSpec::Halfplane { s, r, w }
        }
        "canonical-hypo" => MapSpec::CanonicalHypo { s: f.real("s")?, eta: f.cplx("eta")? },
        "constant" => MapSpec::Constant { v: f.cplx("v")? },
        "rotation" => MapSpec::Rotation { theta: f.real("theta")? },
        _ => return Err(parse_err(text.len() - text.trim_start().len(), format!("unknown family '{family}'"))),
    };
    f.finish()?;
    spec.validate()?;
    Ok(spec)
}

fn json_number(v: &Json, what: &str) -> Result<Cplx<Rat>> {
    let text = match v {
        Json::String(s) => s.clone(),
        Json::Number(n) => n.to_string(),
        _ => return Err(parse_err(0, format!("{what}: expected a number or numeric string"))),
    };
    parse_rat_cplx(&text, 0).map_err(|e| parse_err(0, format!("{what}: {} at {}", e.msg, e.pos)))
}

fn json_coeff(v: Option<&Json>, key: &str) -> Result<Cplx<Rat>> {
    match v {
        None => Err(parse_err(0, format!("missing coefficient '{key}'"))),
        Some(Json::Array(pair)) if pair.len() == 2 => {
            let re = json_number(&pair[0], key)?;
            let im = json_number(&pair[1], key)?;
            if !re.im.is_zero() || !im.im.is_zero() {
                return Err(parse_err(0, format!("{key}: [re, im] parts must be real")));
            }
            Ok(Complex::new(re.re, im.re))
        }
        Some(Json::Array(_)) => Err(parse_err(0, format!("{key}: expected a [re, im] pair"))),
        Some(other) => json_number(other, key),
    }
}

impl MapSpec {
    /// Reads a specification from JSON: a descriptor string, `{"spec": ...}`,
    /// or `{"a": [re, im], "b": ..., "c": ..., "d": ...}`.
    pub fn from_json(v: &Json) -> Result<MapSpec> {
        match v {
            Json::String(s) => parse_map_spec(s),
            Json::Object(o) if o.contains_key("spec") => match &o["spec"] {
                Json::String(s) if o.len() == 1 => parse_map_spec(s),
                Json::String(_) => Err(parse_err(0, "'spec' objects take no other keys")),
                _ => Err(parse_err(0, "'spec' must be a string")),
            },
            Json::Object(o) => {
                if let Some(k) = o.keys().find(|k| !matches!(k.as_str(), "a" | "b" | "c" | "d")) {
                    return Err(parse_err(0, format!("unknown key '{k}'")));
                }
                let spec = MapSpec::Coeffs {
                    a: json_coeff(o.get("a"), "a")?,
                    b: json_coeff(o.get("b"), "b")?,
                    c: json_coeff(o.get("c"), "c")?,
                    d: json_coeff(o.get("d"), "d")?,
                };
                spec.validate()?;
                Ok(spec)
            }
            _ => Err(parse_err(0, "expected a descriptor string or an object")),
        }
    }

    /// Reads one line of a batch file. Lines that are not JSON are taken as
    /// bare descriptors.
    pub fn from_line(line: &str) -> Result<MapSpec> {
        let trimmed = line.trim();
        if trimmed.starts_with('{') || trimmed.starts_with('"') {
            let v: Json = serde_json::from_str(trimmed)
                .map_err(|e| parse_err(e.column().saturating_sub(1), format!("invalid JSON: {e}")))?;
            MapSpec::from_json(&v)
        } else {
            parse_map_spec(trimmed)
        }
    }

    /// Family preconditions. Whether the result is a selfmap is left to the
    /// classifier.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Validation(m.to_string()));
        match self {
            MapSpec::Coeffs { a, b, c, d } => {
                if c.is_zero() && d.is_zero() {
                    return bad("denominator cz+d is identically zero");
                }
                if a.is_zero() && b.is_zero() {
                    return bad("numerator az+b is identically zero; use constant:v=0");
                }
            }
            MapSpec::Parabolic { t } => {
                if t.re.is_negative() {
                    return bad("parabolic family needs Re t >= 0");
                }
                if t.is_zero() {
                    return bad("parabolic family needs t != 0");
                }
            }
            MapSpec::TauAlphaTau { w, alpha } => {
                if abs2(w) >= Rat::one() {
                    return bad("w must lie in the open unit disk");
                }
                if abs2(alpha) > Rat::one() {
                    return bad("alpha must lie in the closed unit disk");
                }
            }
            MapSpec::Halfplane { s, r, w } => {
                if !s.is_positive() {
                    return bad("halfplane form needs s > 0");
                }
                if r.re.is_negative() {
                    return bad("halfplane form needs Re r >= 0");
                }
                if abs2(w) != Rat::one() {
                    return bad("halfplane rotation w must be unimodular");
                }
            }
            MapSpec::CanonicalHypo { s, eta } => {
                if !s.is_positive() || *s >= Rat::one() {
                    return bad("canonical hyponormal form needs 0 < s < 1");
                }
                if abs2(eta) != Rat::one() {
                    return bad("canonical hyponormal form needs |eta| = 1");
                }
            }
            MapSpec::Constant { .. } | MapSpec::Rotation { .. } => {}
        }
        Ok(())
    }

    /// Whether building the map needs the float backend.
    pub fn requires_float(&self) -> bool {
        matches!(self, MapSpec::Rotation { theta } if !theta.is_zero())
    }

    /// The map in backend `R`.
    pub fn to_map<R: Real>(&self) -> Result<Mobius<R>> {
        self.validate()?;
        let cv = |z: &Cplx<Rat>| Complex::new(R::from_rat(&z.re), R::from_rat(&z.im));
        let validation = |e: Error| match e {
            Error::InvalidParameter(m) => Error::Validation(m),
            e => e,
        };
        match self {
            MapSpec::Coeffs { a, b, c, d } => Mobius::new(cv(a), cv(b), cv(c), cv(d)),
            MapSpec::Parabolic { t } => parabolic_map(&cv(t)).map_err(validation),
            MapSpec::TauAlphaTau { w, alpha } => tau_alpha_tau(&cv(w), &cv(alpha)).map_err(validation),
            MapSpec::Halfplane { s, r, w } => from_halfplane(&R::from_rat(s), &cv(r), &cv(w)).map_err(validation),
            MapSpec::CanonicalHypo { s, eta } => {
                let s = R::from_rat(s);
                let k = -(cv(eta).conj() * (R::one() - s.clone()));
                Mobius::new(Complex::new(s, R::zero()), Complex::zero(), k, Complex::one())
            }
            MapSpec::Constant { v } => Ok(Mobius::constant(cv(v))),
            MapSpec::Rotation { theta } => {
                if theta.is_zero() {
                    return Ok(Mobius::identity());
                }
                if R::BACKEND == Backend::Exact {
                    return Err(Error::Validation("rotation by a nonzero angle needs the float backend".into()));
                }
                let th = R::from_rat(theta).to_f64();
                let part = |x: f64| R::from_rat(&Rat::from_float(x).expect("cos and sin are finite"));
                Mobius::rotation(Complex::new(part(th.cos()), part(th.sin())))
            }
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            MapSpec::Coeffs { .. } => "coeffs",
            MapSpec::Parabolic { .. } => "parabolic",
            MapSpec::TauAlphaTau { .. } => "tau-alpha-tau",
            MapSpec::Halfplane { .. } => "halfplane",
            MapSpec::CanonicalHypo { .. } => "canonical-hypo",
            MapSpec::Constant { .. } => "constant",
            MapSpec::Rotation { .. } => "rotation",
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = format_cplx::<Rat>;
        write!(f, "{}:", self.family())?;
        match self {
            MapSpec::Coeffs { a, b, c, d } => write!(f, "a={},b={},c={},d={}", z(a), z(b), z(c), z(d)),
            MapSpec::Parabolic { t } => write!(f, "t={}", z(t)),
            MapSpec::TauAlphaTau { w, alpha } => write!(f, "w={},alpha={}", z(w), z(alpha)),
            MapSpec::Halfplane { s, r, w } => {
                write!(f, "s={s},r={}", z(r))?;
                if !w.is_one() {
                    write!(f, ",w={}", z(w))?;
                }
                Ok(())
            }
            MapSpec::CanonicalHypo { s, eta } => write!(f, "s={s},eta={}", z(eta)),
            MapSpec::Constant { v } => write!(f, "v={}", z(v)),
            MapSpec::Rotation { theta } => write!(f, "theta={theta}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::lit;

    fn m(a: &str, b: &str, c: &str, d: &str) -> Mobius<Rat> {
        Mobius::new(lit(a), lit(b), lit(c), lit(d)).unwrap()
    }

    fn build(text: &str) -> Mobius<Rat> {
        parse_map_spec(text).unwrap().to_map().unwrap()
    }

    #[test]
    fn examples() {
        assert!(build("parabolic:t=1/2").projectively_equal(&m("3/2", "1/2", "-1/2", "5/2")).value);
        assert!(build("coeffs:a=1,b=0,c=-1,d=2").projectively_equal(&m("1", "0", "-1", "2")).value);
        assert!(matches!(parse_map_spec("parabolic:t=-1"), Err(Error::Validation(_))));
        assert!(build("canonical-hypo:s=1/2,eta=1").projectively_equal(&m("1", "0", "-1", "2")).value);
        assert!(build("tau-alpha-tau:w=0,alpha=1/2").projectively_equal(&m("1/2", "0", "0", "1")).value);
        assert!(build("constant:v=1/3").is_constant());
        assert!(build("rotation:theta=0").is_identity());
        assert!(build("halfplane:s=1,r=1").projectively_equal(&build("parabolic:t=1")).value);
    }

    #[test]
    fn decimals_are_exact() {
        let spec = parse_map_spec("coeffs:a=0.5,b=0.25-1e-1i,c=0,d=1").unwrap();
        assert_eq!(spec.to_string(), "coeffs:a=1/2,b=1/4-1/10i,c=0,d=1");
    }

    #[test]
    fn positions() {
        let at = |text: &str| match parse_map_spec(text) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{text}: {other:?}"),
        };
        assert_eq!(at("parabolic"), 0);
        assert_eq!(at("parabolic:t=1/x"), 14);
        assert_eq!(at("coeffs:a=1,b=0,c=0"), 18);
        assert_eq!(at("coeffs:a=1,b=0,c=0,d=1,e=2"), 23);
        assert_eq!(at("parabolic:t=1,t=2"), 14);
        assert_eq!(at("nope:t=1"), 0);
        assert_eq!(at("parabolic:t"), 10);
        assert_eq!(at("halfplane:s=1+i,r=0"), 12);
    }

    #[test]
    fn validation() {
        for text in [
            "parabolic:t=0",
            "tau-alpha-tau:w=1,alpha=0",
            "tau-alpha-tau:w=0,alpha=2",
            "halfplane:s=0,r=1",
            "halfplane:s=1,r=-1",
            "halfplane:s=1,r=1,w=1/2",
            "canonical-hypo:s=1,eta=1",
            "canonical-hypo:s=1/2,eta=1/2",
            "coeffs:a=1,b=0,c=0,d=0",
            "coeffs:a=0,b=0,c=1,d=1",
        ] {
            assert!(matches!(parse_map_spec(text), Err(Error::Validation(_))), "{text}");
        }
    }

    #[test]
    fn round_trip() {
        for text in [
            "coeffs:a=1/2+1/3i,b=-i,c=0,d=5",
            "parabolic:t=1/2-3i",
            "tau-alpha-tau:w=1/4i,alpha=-1/2",
            "halfplane:s=2,r=1/3+i,w=-1",
            "halfplane:s=1/2,r=0",
            "canonical-hypo:s=1/3,eta=-i",
            "constant:v=-1/7",
            "rotation:theta=1/3",
        ] {
            let spec = parse_map_spec(text).unwrap();
            assert_eq!(spec.to_string(), text);
            assert_eq!(parse_map_spec(&spec.to_string()).unwrap(), spec);
        }
    }

    #[test]
    fn rotation_needs_float() {
        let spec = parse_map_spec("rotation:theta=1/2").unwrap();
        assert!(spec.requires_float());
        assert!(matches!(spec.to_map::<Rat>(), Err(Error::Validation(_))));
        let phi = spec.to_map::<f64>().unwrap();
        assert!((phi.a().norm() - 1.0).abs() < 1e-15 && (phi.a().arg() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn json_inputs() {
        let v: Json = serde_json::from_str(r#"{"a":["1","0"],"b":[0,0],"c":[-1,0],"d":"2"}"#).unwrap();
        assert_eq!(MapSpec::from_json(&v).unwrap().to_string(), "coeffs:a=1,b=0,c=-1,d=2");
        assert_eq!(MapSpec::from_line(r#"{"spec":"parabolic:t=1"}"#).unwrap().to_string(), "parabolic:t=1");
        assert_eq!(MapSpec::from_line(r#""constant:v=0""#).unwrap().to_string(), "constant:v=0");
        assert_eq!(MapSpec::from_line(" parabolic:t=1 ").unwrap().to_string(), "parabolic:t=1");
        assert!(MapSpec::from_line(r#"{"a":[1,0]}"#).is_err());
        assert!(MapSpec::from_line(r#"{"a":[1,0],"b":0,"c":0,"d":1,"e":1}"#).is_err());
        assert!(MapSpec::from_line("{oops").is_err());
        assert_eq!(
            MapSpec::from_json(&serde_json::json!({"a":[0.5,0],"b":0,"c":0,"d":1})).unwrap().to_string(),
            "coeffs:a=1/2,b=0,c=0,d=1"
        );
    }
}
