//! Scalar backends.
//!
//! Everything above this module is generic over [`Real`], which is implemented
//! for exact rationals ([`Rat`]) and for `f64`. Sign decisions go through
//! [`Real::sign`]; the float backend treats magnitudes up to [`eps`] as zero
//! and flags such decisions as marginal.

use std::fmt;
use std::ops::Neg;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

pub type Rat = BigRational;
pub type Cplx<R> = Complex<R>;
pub type C64 = Complex<f64>;

pub const DEFAULT_EPS: f64 = 1e-12;

/// Name of the environment variable read for the initial float tolerance.
pub const EPS_ENV: &str = "POSILAB_EPS";

fn eps_cell() -> &'static AtomicU64 {
    static CELL: OnceLock<AtomicU64> = OnceLock::new();
    CELL.get_or_init(|| {
        let e = std::env::var(EPS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|e| e.is_finite() && *e >= 0.0)
            .unwrap_or(DEFAULT_EPS);
        AtomicU64::new(e.to_bits())
    })
}

/// Boundary tolerance of the float backend.
pub fn eps() -> f64 {
    f64::from_bits(eps_cell().load(Ordering::Relaxed))
}

/// Overrides the float tolerance for the whole process.
pub fn set_eps(e: f64) {
    assert!(e.is_finite() && e >= 0.0, "tolerance must be finite and nonnegative");
    eps_cell().store(e.to_bits(), Ordering::Relaxed);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }
}

/// A decision together with a flag saying whether it hinged on a float
/// comparison within tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Judged<T> {
    pub value: T,
    pub marginal: bool,
}

impl<T> Judged<T> {
    pub fn sure(value: T) -> Self {
        Judged { value, marginal: false }
    }

    pub fn new(value: T, marginal: bool) -> Self {
        Judged { value, marginal }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Judged<U> {
        Judged { value: f(self.value), marginal: self.marginal }
    }

    /// Marks the result marginal if `other` was.
    pub fn taint(mut self, other: bool) -> Self {
        self.marginal |= other;
        self
    }
}

impl Judged<bool> {
    pub fn and(self, other: Judged<bool>) -> Judged<bool> {
        Judged::new(self.value && other.value, self.marginal || other.marginal)
    }
}

impl Judged<Sign> {
    pub fn is_neg(self) -> Judged<bool> {
        self.map(|s| s == Sign::Neg)
    }
    pub fn is_zero(self) -> Judged<bool> {
        self.map(|s| s == Sign::Zero)
    }
    pub fn is_pos(self) -> Judged<bool> {
        self.map(|s| s == Sign::Pos)
    }
    pub fn is_nonneg(self) -> Judged<bool> {
        self.map(|s| s != Sign::Neg)
    }
    pub fn is_nonpos(self) -> Judged<bool> {
        self.map(|s| s != Sign::Pos)
    }
}

/// Ordered field used as the real part of the complex scalars.
pub trait Real:
    Clone + fmt::Debug + fmt::Display + PartialEq + Num + Signed + Neg<Output = Self> + Send + Sync + 'static
{
    const BACKEND: Backend;

    /// Sign with the backend's notion of zero.
    fn sign(&self) -> Judged<Sign>;

    fn to_f64(&self) -> f64;

    fn from_rat(r: &Rat) -> Self;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rat(&Rat::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Square root if it is representable; `None` for negative input or an
    /// irrational root in the exact backend.
    fn sqrt_exact(&self) -> Option<Self>;

    /// Smallest integer `n` with `n >= self`, for positive arguments.
    fn ceil_u64(&self) -> Option<u64>;

    fn to_json(&self) -> Value;
}

impl Real for f64 {
    const BACKEND: Backend = Backend::Float;

    fn sign(&self) -> Judged<Sign> {
        let x = *self;
        if x == 0.0 {
            Judged::sure(Sign::Zero)
        } else if x.abs() <= eps() {
            Judged::new(Sign::Zero, true)
        } else if x > 0.0 {
            Judged::sure(Sign::Pos)
        } else {
            Judged::sure(Sign::Neg)
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rat(r: &Rat) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if *self < 0.0 {
            if self.abs() <= eps() {
                Some(0.0)
            } else {
                None
            }
        } else {
            Some(self.sqrt())
        }
    }

    fn ceil_u64(&self) -> Option<u64> {
        if self.is_finite() && *self > 0.0 && *self < 1e18 {
            Some(self.ceil() as u64)
        } else {
            None
        }
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

impl Real for Rat {
    const BACKEND: Backend = Backend::Exact;

    fn sign(&self) -> Judged<Sign> {
        Judged::sure(if self.is_zero() {
            Sign::Zero
        } else if self.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        })
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        let n = isqrt_exact(self.numer())?;
        let d = isqrt_exact(self.denom())?;
        Some(Rat::new(n, d))
    }

    fn ceil_u64(&self) -> Option<u64> {
        if !self.is_positive() {
            return None;
        }
        self.ceil().to_integer().to_u64()
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

pub fn cplx<R: Real>(re: R, im: R) -> Cplx<R> {
    Complex::new(re, im)
}

pub fn to_c64<R: Real>(z: &Cplx<R>) -> C64 {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64(z: C64) -> Cplx<f64> {
    z
}

/// `|z|^2`.
pub fn abs2<R: Real>(z: &Cplx<R>) -> R {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}

/// Sign of `|z|^2 - 1`.
pub fn unit_cmp<R: Real>(z: &Cplx<R>) -> Judged<Sign> {
    (abs2(z) - R::one()).sign()
}

pub fn is_zero_c<R: Real>(z: &Cplx<R>) -> Judged<bool> {
    z.re.sign().is_zero().and(z.im.sign().is_zero())
}

pub fn is_real_c<R: Real>(z: &Cplx<R>) -> Judged<bool> {
    z.im.sign().is_zero()
}

/// Complex square root when representable (principal branch).
pub fn csqrt_exact<R: Real>(z: &Cplx<R>) -> Option<Cplx<R>> {
    let two = R::one() + R::one();
    if z.re.is_zero() && z.im.is_zero() {
        return Some(Complex::new(R::zero(), R::zero()));
    }
    let r = abs2(z).sqrt_exact()?;
    if !z.re.is_negative() {
        let re = ((r + z.re.clone()) / two.clone()).sqrt_exact()?;
        let im = z.im.clone() / (two * re.clone());
        Some(Complex::new(re, im))
    } else {
        let mut im = ((r - z.re.clone()) / two.clone()).sqrt_exact()?;
        if z.im.is_negative() {
            im = -im;
        }
        let re = z.im.clone() / (two * im.clone());
        Some(Complex::new(re, im))
    }
}

pub fn cplx_json<R: Real>(z: &Cplx<R>) -> Value {
    Value::Array(vec![z.re.to_json(), z.im.to_json()])
}

pub fn c64_json(z: C64) -> Value {
    cplx_json(&z)
}

/// Renders `z` as a literal accepted by [`parse_cplx`].
pub fn format_cplx<R: Real>(z: &Cplx<R>) -> String {
    let im_zero = z.im.is_zero();
    let re_zero = z.re.is_zero();
    if im_zero {
        return z.re.to_string();
    }
    let im = if z.im.is_negative() { -z.im.clone() } else { z.im.clone() };
    let im_s = if im.is_one() { String::new() } else { im.to_string() };
    if re_zero {
        let sign = if z.im.is_negative() { "-" } else { "" };
        format!("{sign}{im_s}i")
    } else {
        let sign = if z.im.is_negative() { "-" } else { "+" };
        format!("{}{sign}{im_s}i", z.re)
    }
}

/// Number `p + q*sqrt(d)` with `d >= 0`, used to settle comparisons involving
/// one square root without leaving the backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Quad<R> {
    pub p: R,
    pub q: R,
    pub d: R,
}

impl<R: Real> Quad<R> {
    pub fn new(p: R, q: R, d: R) -> Self {
        Quad { p, q, d }
    }

    pub fn rational(p: R, d: R) -> Self {
        Quad { p, q: R::zero(), d }
    }

    pub fn add(&self, o: &Self) -> Self {
        Quad::new(self.p.clone() + o.p.clone(), self.q.clone() + o.q.clone(), self.d.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Quad::new(self.p.clone() - o.p.clone(), self.q.clone() - o.q.clone(), self.d.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p.clone() * o.p.clone() + self.q.clone() * o.q.clone() * self.d.clone();
        let q = self.p.clone() * o.q.clone() + self.q.clone() * o.p.clone();
        Quad::new(p, q, self.d.clone())
    }

    pub fn scale(&self, k: &R) -> Self {
        Quad::new(self.p.clone() * k.clone(), self.q.clone() * k.clone(), self.d.clone())
    }

    pub fn plus(&self, k: &R) -> Self {
        Quad::new(self.p.clone() + k.clone(), self.q.clone(), self.d.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64() + self.q.to_f64() * self.d.to_f64().max(0.0).sqrt()
    }

    /// Value in the backend, when the root is representable.
    pub fn value(&self) -> Option<R> {
        let s = self.d.sqrt_exact()?;
        Some(self.p.clone() + self.q.clone() * s)
    }

    pub fn sign(&self) -> Judged<Sign> {
        let sp = self.p.sign();
        let sd = self.d.sign();
        let sq = if sd.value == Sign::Zero {
            Judged::new(Sign::Zero, sd.marginal)
        } else {
            self.q.sign().taint(sd.marginal)
        };
        let m = sp.marginal || sq.marginal;
        match (sp.value, sq.value) {
            (_, Sign::Zero) => sp.taint(m),
            (Sign::Zero, _) => sq.taint(m),
            (a, b) if a == b => Judged::new(a, m),
            (a, b) => {
                let diff = self.p.clone() * self.p.clone() - self.q.clone() * self.q.clone() * self.d.clone();
                let s = diff.sign();
                let v = match s.value {
                    Sign::Pos => a,
                    Sign::Neg => b,
                    Sign::Zero => Sign::Zero,
                };
                Judged::new(v, m || s.marginal)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralError {
    pub pos: usize,
    pub msg: String,
}

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
    base: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn err(&self, msg: impl Into<String>) -> LiteralError {
        LiteralError { pos: self.base + self.i, msg: msg.into() }
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.i;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.i += 1;
        }
        if self.i == start {
            None
        } else {
            std::str::from_utf8(&self.s[start..self.i]).ok()
        }
    }

    /// Unsigned real: `D`, `D.D`, `.D`, `D/D`, optional exponent on decimals.
    fn unsigned_real(&mut self) -> Result<Rat, LiteralError> {
        let int = self.digits().map(str::to_owned);
        if self.peek() == Some(b'/') {
            let num = int.ok_or_else(|| self.err("expected digits before '/'"))?;
            self.i += 1;
            let den = self.digits().map(str::to_owned);
            let den = den.ok_or_else(|| self.err("expected denominator digits"))?;
            let den: BigInt = den.parse().map_err(|_| self.err("bad denominator"))?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            let num: BigInt = num.parse().map_err(|_| self.err("bad numerator"))?;
            return Ok(Rat::new(num, den));
        }
        let mut frac = String::new();
        if self.peek() == Some(b'.') {
            self.i += 1;
            frac = self.digits().unwrap_or("").to_owned();
        }
        if int.is_none() && frac.is_empty() {
            return Err(self.err("expected a number"));
        }
        let mut exp: i64 = 0;
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.i += 1;
            let neg = match self.peek() {
                Some(b'-') => {
                    self.i += 1;
                    true
                }
                Some(b'+') => {
                    self.i += 1;
                    false
                }
                _ => false,
            };
            let e = self.digits().map(str::to_owned);
            let e = e.ok_or_else(|| self.err("expected exponent digits"))?;
            exp = e.parse::<i64>().map_err(|_| self.err("exponent out of range"))?;
            if exp > 4000 {
                return Err(self.err("exponent out of range"));
            }
            if neg {
                exp = -exp;
            }
        }
        let mantissa: BigInt =
            format!("{}{}", int.unwrap_or_default(), frac).parse().map_err(|_| self.err("bad number"))?;
        let shift = exp - frac.len() as i64;
        let ten = BigInt::from(10);
        Ok(if shift >= 0 {
            Rat::from_integer(mantissa * num_traits::pow(ten, shift as usize))
        } else {
            Rat::new(mantissa, num_traits::pow(ten, (-shift) as usize))
        })
    }

    /// Optional sign, optional magnitude, optional `i`. Returns (value, is_imaginary).
    fn term(&mut self, first: bool) -> Result<(Rat, bool), LiteralError> {
        let mut neg = false;
        match self.peek() {
            Some(b'+') => self.i += 1,
            Some(b'-') => {
                self.i += 1;
                neg = true;
            }
            _ if !first => return Err(self.err("expected '+' or '-'")),
            _ => {}
        }
        let mag = if matches!(self.peek(), Some(b'0'..=b'9' | b'.')) { Some(self.unsigned_real()?) } else { None };
        let imag = if matches!(self.peek(), Some(b'i' | b'j')) {
            self.i += 1;
            true
        } else {
            false
        };
        let v = match (mag, imag) {
            (Some(m), _) => m,
            (None, true) => Rat::one(),
            (None, false) => return Err(self.err("expected a number")),
        };
        Ok((if neg { -v } else { v }, imag))
    }
}

/// Parses a complex literal: `RE`, `IMi`, `RE+IMi`, `RE-IMi`, where each
/// part is an integer, a decimal (optionally with exponent) or `p/q`.
/// Decimals are read exactly. `base` offsets reported error positions.
pub fn parse_rat_cplx(text: &str, base: usize) -> Result<Cplx<Rat>, LiteralError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cur = Cursor { s: compact.as_bytes(), i: 0, base };
    if compact.is_empty() {
        return Err(cur.err("empty number"));
    }
    let mut re = Rat::zero();
    let mut im = Rat::zero();
    let mut seen = (false, false);
    let mut first = true;
    while cur.peek().is_some() {
        let at = cur.i;
        let (v, imag) = cur.term(first)?;
        first = false;
        if imag {
            if seen.1 {
                cur.i = at;
                return Err(cur.err("duplicate imaginary part"));
            }
            seen.1 = true;
            im = v;
        } else {
            if seen.0 || seen.1 {
                cur.i = at;
                return Err(cur.err("real part must come first"));
            }
            seen.0 = true;
            re = v;
        }
    }
    Ok(Complex::new(re, im))
}

pub fn parse_cplx<R: Real>(text: &str) -> Result<Cplx<R>, LiteralError> {
    let z = parse_rat_cplx(text, 0)?;
    Ok(Complex::new(R::from_rat(&z.re), R::from_rat(&z.im)))
}

/// Complex literal for code and tests.
///
/// # Panics
///
/// Panics if `text` is not a valid literal.
pub fn lit<R: Real>(text: &str) -> Cplx<R> {
    match parse_cplx(text) {
        Ok(z) => z,
        Err(e) => panic!("bad complex literal {text:?}: {} at {}", e.msg, e.pos),
    }
}
