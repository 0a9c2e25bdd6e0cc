//! Capped relative precision p-adic numbers.
//!
//! A nonzero value is `p^v * u` with `u` a unit known modulo `p^rel`,
//! `rel <= cap`. Cancellation can leave a value that is only known to be
//! divisible by some `p^abs`; that is kept as an inexact zero so that
//! inverting it reports lost precision instead of a fake answer.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use thiserror::Error;

/// Valuation bound reported for exact zero.
pub const INF: i64 = i64::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("precision exhausted: value is zero modulo p^{0}")]
    PrecisionExhausted(i64),
    #[error("no square root: {0}")]
    NoSquareRoot(String),
    #[error("unsupported prime/precision: p = {p}, N = {cap}")]
    InvalidField { p: u32, cap: u32 },
    #[error("cannot parse p-adic literal {0:?}")]
    Parse(String),
}

/// The prime and working precision shared by all scalars of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    pub p: u32,
    pub cap: u32,
}

impl Field {
    /// `p` must be prime (2..=97) and `p^cap` must fit below 2^126.
    pub fn new(p: u32, cap: u32) -> Result<Self, PadicError> {
        let prime = (2..=97).contains(&p) && (2..p).all(|d| !p.is_multiple_of(d));
        if !prime || cap == 0 || (cap as f64) * (p as f64).log2() >= 126.0 {
            return Err(PadicError::InvalidField { p, cap });
        }
        Ok(Field { p, cap })
    }

    pub fn zero(&self) -> Padic {
        Padic { p: self.p, cap: self.cap, repr: Repr::Zero }
    }

    pub fn one(&self) -> Padic {
        self.int(1)
    }

    pub fn int(&self, x: i64) -> Padic {
        if x == 0 {
            return self.zero();
        }
        let p = self.p as i64;
        let mut v = 0;
        let mut y = x;
        while y % p == 0 {
            y /= p;
            v += 1;
        }
        let m = ppow(self.p, self.cap);
        let u = if y > 0 { (y as u128) % m } else { m - ((-(y as i128)) as u128 % m) };
        Padic { p: self.p, cap: self.cap, repr: Repr::Unit { val: v, unit: u % m, rel: self.cap } }
    }

    /// `num / den` for small integers, `den != 0`.
    pub fn ratio(&self, num: i64, den: i64) -> Padic {
        let d = self.int(den).inv().expect("nonzero denominator");
        self.int(num) * d
    }

    /// `p^k`.
    pub fn pow_p(&self, k: i64) -> Padic {
        Padic { p: self.p, cap: self.cap, repr: Repr::Unit { val: k, unit: 1, rel: self.cap } }
    }

    /// `p^val * unit` with the unit reduced modulo `p^cap`.
    pub fn from_parts(&self, val: i64, unit: i64) -> Padic {
        self.int(unit) * self.pow_p(val)
    }

    /// A value with valuation uniform in `vmin..=vmax` and uniformly random
    /// unit digits at full precision.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, vmin: i64, vmax: i64) -> Padic {
        let val = rng.gen_range(vmin..=vmax);
        let m = ppow(self.p, self.cap);
        let unit = loop {
            let u = rng.gen::<u128>() % m;
            if !u.is_multiple_of(self.p as u128) {
                break u;
            }
        };
        Padic { p: self.p, cap: self.cap, repr: Repr::Unit { val, unit, rel: self.cap } }
    }

    /// A random element of `Z_p` (zero with probability `p^-vmax`-ish).
    pub fn random_integer<R: Rng + ?Sized>(&self, rng: &mut R, vmax: i64) -> Padic {
        if rng.gen_range(0..(self.p as u64).pow(3)) == 0 {
            return self.zero();
        }
        let mut v = 0;
        while v < vmax && rng.gen_range(0..self.p) == 0 {
            v += 1;
        }
        self.random(rng, v, v)
    }

    /// Parses `"0"`, `"u"`, `"p^v"` or `"p^v*u"`; an optional
    /// `" (mod p^N)"` suffix lowers the relative precision to `N`.
    pub fn parse(&self, s: &str) -> Result<Padic, PadicError> {
        let bad = || PadicError::Parse(s.to_string());
        let (body, rel) = match s.find("(mod") {
            Some(i) => {
                let tail = s[i + 4..].trim().trim_end_matches(')').trim();
                let (base, exp) = tail.split_once('^').ok_or_else(bad)?;
                if base.trim().parse::<u32>().map_err(|_| bad())? != self.p {
                    return Err(bad());
                }
                (&s[..i], Some(exp.trim().parse::<u32>().map_err(|_| bad())?))
            }
            None => (s, None),
        };
        let body: String = body.chars().filter(|c| !c.is_whitespace()).collect();
        let (pow_part, unit_part) = match body.split_once('*') {
            Some((a, b)) => (Some(a), b),
            None if body.contains('^') => (Some(body.as_str()), "1"),
            None => (None, body.as_str()),
        };
        let val = match pow_part {
            Some(pp) => {
                let (base, exp) = pp.split_once('^').ok_or_else(bad)?;
                if base.parse::<u32>().map_err(|_| bad())? != self.p {
                    return Err(bad());
                }
                exp.parse::<i64>().map_err(|_| bad())?
            }
            None => 0,
        };
        let u: i128 = unit_part.parse().map_err(|_| bad())?;
        if u == 0 {
            return Ok(self.zero());
        }
        let m = ppow(self.p, self.cap) as i128;
        let r = ((u % m) + m) % m;
        let x = normalize_unit(self.p, self.cap, 0, r as u128, self.cap);
        let mut out = x * self.pow_p(val);
        if let (Some(n), Repr::Unit { rel, unit, .. }) = (rel, &mut out.repr) {
            if n < *rel {
                *rel = n.max(1);
                *unit %= ppow(self.p, *rel);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    /// Known only to be divisible by `p^abs`.
    Approx0 { abs: i64 },
    Unit { val: i64, unit: u128, rel: u32 },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Padic {
    p: u32,
    cap: u32,
    repr: Repr,
}

pub(crate) fn ppow(p: u32, e: u32) -> u128 {
    (p as u128).pow(e)
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    if let Some(x) = a.checked_mul(b) {
        return x % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut r = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            r = (r + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    r
}

/// Inverse of a unit modulo `p^e` by Newton iteration from the inverse mod p.
fn inv_mod(u: u128, p: u32, e: u32) -> u128 {
    let pm = p as u128;
    let u0 = u % pm;
    let mut x = (1..pm).find(|x| (x * u0) % pm == 1).expect("unit");
    let mut k = 1;
    while k < e {
        k = (2 * k).min(e);
        let m = ppow(p, k);
        let ux = mulmod(u % m, x, m);
        x = mulmod(x, (2 + m - ux % m) % m, m);
    }
    x % ppow(p, e)
}

/// Builds `p^val * x` where `x` is known modulo `p^width` and may not be a unit.
fn normalize_unit(p: u32, cap: u32, val: i64, x: u128, width: u32) -> Padic {
    if x == 0 {
        return Padic { p, cap, repr: Repr::Approx0 { abs: val + width as i64 } };
    }
    let mut k = 0u32;
    let mut y = x;
    while y.is_multiple_of(p as u128) {
        y /= p as u128;
        k += 1;
    }
    let rel = (width - k).min(cap);
    Padic { p, cap, repr: Repr::Unit { val: val + k as i64, unit: y % ppow(p, rel), rel } }
}

impl Padic {
    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> Field {
        Field { p: self.p, cap: self.cap }
    }

    pub fn is_zero(&self) -> bool {
        !matches!(self.repr, Repr::Unit { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// Valuation of a value known to be nonzero.
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Unit { val, .. } => Some(val),
            _ => None,
        }
    }

    /// Guaranteed lower bound on the valuation: the valuation itself, the
    /// absolute precision of an inexact zero, or [`INF`].
    pub fn vmin(&self) -> i64 {
        match self.repr {
            Repr::Zero => INF,
            Repr::Approx0 { abs } => abs,
            Repr::Unit { val, .. } => val,
        }
    }

    /// Absolute precision: the value is known modulo `p^abs_prec`.
    pub fn abs_prec(&self) -> i64 {
        match self.repr {
            Repr::Zero => INF,
            Repr::Approx0 { abs } => abs,
            Repr::Unit { val, rel, .. } => val + rel as i64,
        }
    }

    /// Relative precision (0 for zeros).
    pub fn rel_prec(&self) -> u32 {
        match self.repr {
            Repr::Unit { rel, .. } => rel,
            _ => 0,
        }
    }

    /// Unit part, as a residue modulo `p^rel`.
    pub fn unit(&self) -> Option<u128> {
        match self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// Depth to which `self` and `other` agree: `vmin(self - other)`.
    pub fn agreement(&self, other: &Padic) -> i64 {
        (self - other).vmin()
    }

    pub fn inv(&self) -> Result<Padic, PadicError> {
        match self.repr {
            Repr::Zero => Err(PadicError::DivisionByZero),
            Repr::Approx0 { abs } => Err(PadicError::PrecisionExhausted(abs)),
            Repr::Unit { val, unit, rel } => Ok(Padic {
                p: self.p,
                cap: self.cap,
                repr: Repr::Unit { val: -val, unit: inv_mod(unit, self.p, rel), rel },
            }),
        }
    }

    pub fn div(&self, other: &Padic) -> Result<Padic, PadicError> {
        Ok(self * &other.inv()?)
    }

    /// The unit part as an element with valuation 0.
    pub fn unit_part(&self) -> Option<Padic> {
        match self.repr {
            Repr::Unit { unit, rel, .. } => {
                Some(Padic { p: self.p, cap: self.cap, repr: Repr::Unit { val: 0, unit, rel } })
            }
            _ => None,
        }
    }

    /// Square root by Hensel lifting; odd `p` only. Of the two roots the one
    /// whose unit is the smaller residue mod `p` is returned.
    pub fn sqrt(&self) -> Result<Padic, PadicError> {
        if self.p == 2 {
            return Err(PadicError::NoSquareRoot("p = 2 is not supported".into()));
        }
        let (val, unit, rel) = match self.repr {
            Repr::Zero => return Ok(self.clone()),
            Repr::Approx0 { abs } => {
                return Ok(Padic { p: self.p, cap: self.cap, repr: Repr::Approx0 { abs: abs.div_euclid(2) } })
            }
            Repr::Unit { val, unit, rel } => (val, unit, rel),
        };
        if val % 2 != 0 {
            return Err(PadicError::NoSquareRoot(format!("odd valuation {val}")));
        }
        let pm = self.p as u128;
        let r = unit % pm;
        let x0 = (1..pm).find(|x| (x * x) % pm == r).ok_or_else(|| {
            PadicError::NoSquareRoot(format!("{} is not a square mod {}", r, self.p))
        })?;
        let mut x = x0.min(pm - x0);
        let mut k = 1;
        while k < rel {
            k = (2 * k).min(rel);
            let m = ppow(self.p, k);
            // x <- (x + u/x) / 2
            let ux = mulmod(unit % m, inv_mod(x, self.p, k), m);
            let s = (x + ux) % m;
            x = mulmod(s, inv_mod(2, self.p, k), m);
        }
        Ok(Padic { p: self.p, cap: self.cap, repr: Repr::Unit { val: val / 2, unit: x, rel } })
    }

    /// The representative of `self` modulo `p^k` with no digits at or above
    /// `p^k`; such a value is exact, so it carries full relative precision.
    pub fn reduce_mod(&self, k: i64) -> Result<Padic, PadicError> {
        match self.repr {
            Repr::Zero => Ok(self.clone()),
            _ if self.vmin() >= k => Ok(self.field().zero()),
            Repr::Approx0 { abs } => Err(PadicError::PrecisionExhausted(abs)),
            Repr::Unit { val, unit, rel } => {
                if val + (rel as i64) < k {
                    return Err(PadicError::PrecisionExhausted(val + rel as i64));
                }
                let u = unit % ppow(self.p, (k - val) as u32);
                Ok(Padic { p: self.p, cap: self.cap, repr: Repr::Unit { val, unit: u, rel: self.cap } })
            }
        }
    }

    /// Digits of the unit part as a signed integer in `(-p^rel/2, p^rel/2]`.
    pub fn centered_unit(&self) -> Option<i128> {
        match self.repr {
            Repr::Unit { unit, rel, .. } => {
                let m = ppow(self.p, rel);
                Some(if unit > m / 2 { unit as i128 - m as i128 } else { unit as i128 })
            }
            _ => None,
        }
    }

    fn check(&self, other: &Padic) {
        assert_eq!(self.p, other.p, "mixing p-adic numbers of different primes");
    }

    fn add_impl(&self, other: &Padic) -> Padic {
        self.check(other);
        let cap = self.cap.min(other.cap);
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) => Padic { cap, ..other.clone() },
            (_, Repr::Zero) => Padic { cap, ..self.clone() },
            _ => {
                let abs = self.abs_prec().min(other.abs_prec());
                let vmin = self.vmin().min(other.vmin());
                if vmin >= abs {
                    return Padic { p, cap, repr: Repr::Approx0 { abs } };
                }
                let width = (abs - vmin) as u32;
                let m = ppow(p, width);
                let term = |x: &Padic| -> u128 {
                    match x.repr {
                        Repr::Unit { val, unit, .. } => {
                            let shift = (val - vmin) as u32;
                            if shift >= width {
                                0
                            } else {
                                mulmod(unit % m, ppow(p, shift), m)
                            }
                        }
                        _ => 0,
                    }
                };
                let s = (term(self) + term(other)) % m;
                normalize_unit(p, cap, vmin, s, width)
            }
        }
    }

    fn mul_impl(&self, other: &Padic) -> Padic {
        self.check(other);
        let cap = self.cap.min(other.cap);
        let p = self.p;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Repr::Zero,
            (Repr::Approx0 { abs: a }, Repr::Approx0 { abs: b }) => Repr::Approx0 { abs: a + b },
            (Repr::Approx0 { abs }, Repr::Unit { val, .. }) | (Repr::Unit { val, .. }, Repr::Approx0 { abs }) => {
                Repr::Approx0 { abs: abs + val }
            }
            (Repr::Unit { val: va, unit: ua, rel: ra }, Repr::Unit { val: vb, unit: ub, rel: rb }) => {
                let rel = (*ra).min(*rb).min(cap);
                let m = ppow(p, rel);
                Repr::Unit { val: va + vb, unit: mulmod(ua % m, ub % m, m), rel }
            }
        };
        Padic { p, cap, repr }
    }

    fn neg_impl(&self) -> Padic {
        match self.repr {
            Repr::Unit { val, unit, rel } => {
                let m = ppow(self.p, rel);
                Padic { p: self.p, cap: self.cap, repr: Repr::Unit { val, unit: (m - unit) % m, rel } }
            }
            _ => self.clone(),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $imp:expr) => {
        impl $tr<&Padic> for &Padic {
            type Output = Padic;
            fn $f(self, rhs: &Padic) -> Padic {
                $imp(self, rhs)
            }
        }
        impl $tr<Padic> for Padic {
            type Output = Padic;
            fn $f(self, rhs: Padic) -> Padic {
                $imp(&self, &rhs)
            }
        }
        impl $tr<&Padic> for Padic {
            type Output = Padic;
            fn $f(self, rhs: &Padic) -> Padic {
                $imp(&self, rhs)
            }
        }
        impl $tr<Padic> for &Padic {
            type Output = Padic;
            fn $f(self, rhs: Padic) -> Padic {
                $imp(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Padic, b: &Padic| a.add_impl(b));
binop!(Sub, sub, |a: &Padic, b: &Padic| a.add_impl(&b.neg_impl()));
binop!(Mul, mul, |a: &Padic, b: &Padic| a.mul_impl(b));

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.neg_impl()
    }
}

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.neg_impl()
    }
}

impl fmt::Display for Padic {
    /// `p^v * u (mod p^N)` with `u` the centered unit and `N` the relative precision.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Approx0 { abs } => write!(f, "0 (mod {}^{})", self.p, abs),
            Repr::Unit { val, rel, .. } => {
                write!(f, "{}^{} * {} (mod {}^{})", self.p, val, self.centered_unit().unwrap(), self.p, rel)
            }
        }
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::new(3, 32).unwrap()
    }

    #[test]
    fn one_plus_minus_one_vanishes_to_full_precision() {
        let f = f3();
        let s = f.int(1) + f.int(-1);
        assert!(s.is_zero());
        assert_eq!(s.vmin(), 32);
    }

    #[test]
    fn valuation_is_additive() {
        let f = f3();
        assert_eq!((f.int(3) * f.int(3)).valuation(), Some(2));
        assert_eq!(f.ratio(1, 9).valuation(), Some(-2));
    }

    #[test]
    fn inversion_errors_are_distinct() {
        let f = f3();
        assert_eq!(f.zero().inv(), Err(PadicError::DivisionByZero));
        let z = f.int(5) - f.int(5);
        assert!(matches!(z.inv(), Err(PadicError::PrecisionExhausted(_))));
    }

    #[test]
    fn sqrt_examples() {
        let f5 = Field::new(5, 32).unwrap();
        assert_eq!(f5.int(1).sqrt().unwrap(), f5.int(1));
        assert_eq!(f5.int(4).sqrt().unwrap(), f5.int(2));
        assert!(f5.int(2).sqrt().is_err());
        assert!(f5.int(5).sqrt().is_err());
        let f = Field::new(3, 10).unwrap();
        let a = f.int(1) + f.pow_p(4) * f.int(7);
        let s = a.sqrt().unwrap();
        assert!((&s * &s).agreement(&a) >= 10);
    }

    #[test]
    fn display_and_parse_round_trip() {
        let f = f3();
        let x = f.from_parts(-2, 7);
        assert_eq!(x.to_string(), "3^-2 * 7 (mod 3^32)");
        assert_eq!(f.parse("3^-2*7").unwrap(), x);
        assert_eq!(f.parse(&x.to_string()).unwrap(), x);
        assert_eq!(f.parse("0").unwrap(), f.zero());
        assert_eq!(f.parse("-1").unwrap(), f.int(-1));
        assert_eq!(f.parse("3^4").unwrap(), f.pow_p(4));
        assert!(f.parse("5^1*2").is_err());
    }

    #[test]
    fn field_rejects_oversized_precision() {
        assert!(Field::new(5, 54).is_ok());
        assert!(Field::new(5, 55).is_err());
        assert!(Field::new(4, 10).is_err());
    }

    #[test]
    fn cancellation_lowers_relative_precision() {
        let f = f3();
        let a = f.int(1) + f.pow_p(5);
        let d = &a - &f.int(1);
        assert_eq!(d.valuation(), Some(5));
        assert_eq!(d.rel_prec(), 27);
    }
}
