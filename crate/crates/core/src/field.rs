//! Exact arithmetic in the quadratic field Q(β), β = (1+√5)/2.
//!
//! Elements are stored as `a + b·β` with `a`, `b` arbitrary-precision
//! rationals. Since β² = β + 1 every product reduces back to this basis, so
//! all orbit formulas of the golden maps stay integer-coefficient. Sign and
//! ordering are decided with integer arithmetic only; no floating point is
//! involved in any comparison.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// Golden mean as a binary64, for float-mode code paths only.
pub const BETA_F64: f64 = 1.618_033_988_749_895;

/// Builds the rational `p/q`. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// An element `a + b·β` of Q(β).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GoldenNum {
    a: Rat,
    b: Rat,
}

/// The four field operations, for callers that dispatch on an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies `op` to `x` and `y`. Division by zero is the only error.
pub fn arith(op: FieldOp, x: &GoldenNum, y: &GoldenNum) -> Result<GoldenNum> {
    Ok(match op {
        FieldOp::Add => x + y,
        FieldOp::Sub => x - y,
        FieldOp::Mul => x * y,
        FieldOp::Div => x.checked_div(y)?,
    })
}

impl GoldenNum {
    pub fn new(a: Rat, b: Rat) -> Self {
        GoldenNum { a, b }
    }

    pub fn zero() -> Self {
        GoldenNum::default()
    }

    pub fn one() -> Self {
        GoldenNum::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        GoldenNum::new(Rat::from_integer(BigInt::from(n)), Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        GoldenNum::new(r, Rat::zero())
    }

    /// `p/q + r/s·β`.
    pub fn from_parts(p: i64, q: i64, r: i64, s: i64) -> Self {
        GoldenNum::new(rat(p, q), rat(r, s))
    }

    pub fn beta() -> Self {
        GoldenNum::new(Rat::zero(), Rat::one())
    }

    /// 1/β = β − 1.
    pub fn inv_beta() -> Self {
        GoldenNum::from_parts(-1, 1, 1, 1)
    }

    /// Rational part.
    pub fn a(&self) -> &Rat {
        &self.a
    }

    /// Coefficient of β.
    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// β^k for any integer k, via β^k = F_k·β + F_{k−1} with the Fibonacci
    /// numbers extended to negative indices.
    pub fn beta_pow(k: i64) -> Self {
        let (f_prev, f_k) = fibonacci_pair(k);
        GoldenNum::new(Rat::from_integer(f_prev), Rat::from_integer(f_k))
    }

    /// `self · β`, cheaper than a general product.
    pub fn mul_beta(&self) -> Self {
        GoldenNum::new(self.b.clone(), &self.a + &self.b)
    }

    /// `self / β`, i.e. `self · (β − 1)`.
    pub fn div_beta(&self) -> Self {
        GoldenNum::new(&self.b - &self.a, self.a.clone())
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, r: &Rat) -> Self {
        GoldenNum::new(&self.a * r, &self.b * r)
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Rat::from_integer(BigInt::from(n)))
    }

    /// Field norm N(a + bβ) = a² + ab − b², the product with the conjugate.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    /// Galois conjugate, sending β to 1 − β.
    pub fn conjugate(&self) -> Self {
        GoldenNum::new(&self.a + &self.b, -self.b.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(GoldenNum::new(c.a / &n, c.b / n))
    }

    pub fn checked_div(&self, rhs: &GoldenNum) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    /// Exact sign of `a + bβ`: −1, 0 or +1.
    ///
    /// Writing a + bβ = ((2a+b) + b√5)/2, the sign is that of p + q√5 with
    /// p = 2a+b and q = b; when p and q disagree in sign, p² is compared
    /// against 5q².
    pub fn signum(&self) -> i8 {
        let p: Rat = &self.a + &self.a + &self.b;
        let q = &self.b;
        let sp = rat_sign(&p);
        let sq = rat_sign(q);
        if sp == sq || sq == 0 {
            return sp;
        }
        if sp == 0 {
            return sq;
        }
        let p2 = &p * &p;
        let q2 = q * q * Rat::from_integer(BigInt::from(5));
        // sp and sq differ and are both nonzero; p² = 5q² is impossible.
        if p2 > q2 {
            sp
        } else {
            sq
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Representation as (p + q√5)/r with integers and r > 0.
    fn sqrt5_form(&self) -> (BigInt, BigInt, BigInt) {
        // a + bβ = (2a + b)/2 + (b/2)√5
        let den = self.a.denom().lcm(self.b.denom()) * BigInt::from(2);
        let two_a_plus_b: Rat = &self.a + &self.a + &self.b;
        let p = (two_a_plus_b * Rat::from_integer(den.clone()) / Rat::from_integer(BigInt::from(2))).to_integer();
        let q = (&self.b * Rat::from_integer(den.clone()) / Rat::from_integer(BigInt::from(2))).to_integer();
        (p, q, den)
    }

    /// Exact floor of the real number represented.
    ///
    /// q√5 is bracketed between consecutive integers by an integer square
    /// root of 5q², which is never a perfect square for q ≠ 0.
    pub fn floor(&self) -> BigInt {
        let (p, q, r) = self.sqrt5_form();
        if q.is_zero() {
            return p.div_floor(&r);
        }
        let s = (BigInt::from(5) * &q * &q).sqrt();
        // q√5 lies strictly inside (lo, lo + 1)
        let lo = if q.sign() == Sign::Plus { s } else { -s - BigInt::one() };
        (p + lo).div_floor(&r)
    }

    /// Correctly rounded decimal with `digits` places after the point (round
    /// half away from zero; ties can only occur for rational values).
    pub fn approx(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self.scale(&Rat::from_integer(scale));
        let neg = scaled.is_negative();
        let mag = if neg { -scaled } else { scaled };
        let half = GoldenNum::from_rat(rat(1, 2));
        let n = (&mag + &half).floor();
        format_fixed(&n, digits, neg && !n.is_zero())
    }

    /// Correctly rounded decimal with `sig` significant digits, written in
    /// plain positional notation.
    pub fn approx_sig(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return format_fixed(&BigInt::zero(), sig - 1, false);
        }
        let mag = self.abs();
        let mut e = self.decimal_exponent(&mag);
        loop {
            let places = (sig as i64 - 1 - e).max(0) as usize;
            let s = self.approx(places);
            // Rounding may carry into a new leading digit (9.99… → 10.0…).
            let int_digits = s.trim_start_matches('-').split('.').next().unwrap().trim_start_matches('0').len();
            let lead_ok = if e >= 0 { int_digits as i64 == e + 1 } else { int_digits == 0 };
            if lead_ok || places == 0 {
                return s;
            }
            e += 1;
        }
    }

    /// Largest e with 10^e ≤ |x|, for x ≠ 0.
    fn decimal_exponent(&self, mag: &GoldenNum) -> i64 {
        let ten = GoldenNum::from_int(10);
        let mut e = 0i64;
        let mut p = GoldenNum::one();
        if mag >= &p {
            loop {
                let next = &p * &ten;
                if &next > mag {
                    return e;
                }
                p = next;
                e += 1;
            }
        } else {
            let tenth = GoldenNum::from_rat(rat(1, 10));
            loop {
                p = &p * &tenth;
                e -= 1;
                if &p <= mag {
                    return e;
                }
            }
        }
    }

    /// Nearest binary64, for float-mode consumers. Never used to decide an
    /// exact comparison.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        if b == 0.0 {
            return a;
        }
        // Rounding the sum via a 20-digit decimal keeps cancellation out of
        // the picture when a ≈ −bβ.
        self.approx_sig(20).parse().unwrap_or(a + b * BETA_F64)
    }

    /// Midpoint of two elements.
    pub fn midpoint(x: &GoldenNum, y: &GoldenNum) -> GoldenNum {
        (x + y).scale(&rat(1, 2))
    }
}

fn rat_sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// (F_{k−1}, F_k) for any integer k, with F_{−n} = (−1)^{n+1} F_n.
fn fibonacci_pair(k: i64) -> (BigInt, BigInt) {
    if k >= 0 {
        let (mut f0, mut f1) = (BigInt::one(), BigInt::zero()); // F_{-1}, F_0
        for _ in 0..k {
            let f2 = &f0 + &f1;
            f0 = f1;
            f1 = f2;
        }
        (f0, f1)
    } else {
        // walk downward: F_{n-1} = F_{n+1} - F_n
        let (mut f_prev, mut f_k) = (BigInt::one(), BigInt::zero()); // (F_{-1}, F_0)
        for _ in 0..(-k) {
            let f_prev2 = &f_k - &f_prev; // F_{n-2} = F_n - F_{n-1}
            f_k = f_prev;
            f_prev = f_prev2;
        }
        (f_prev, f_k)
    }
}

fn format_fixed(n: &BigInt, digits: usize, neg: bool) -> String {
    let mut s = n.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = "0".repeat(digits + 1 - s.len()) + &s;
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

impl Ord for GoldenNum {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            1 => Ordering::Greater,
            0 => Ordering::Equal,
            _ => Ordering::Less,
        }
    }
}

impl PartialOrd for GoldenNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b GoldenNum> for &'a GoldenNum {
            type Output = GoldenNum;
            fn $method(self, rhs: &'b GoldenNum) -> GoldenNum {
                let f: fn(&GoldenNum, &GoldenNum) -> GoldenNum = $body;
                f(self, rhs)
            }
        }
        impl $tr<GoldenNum> for GoldenNum {
            type Output = GoldenNum;
            fn $method(self, rhs: GoldenNum) -> GoldenNum {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b GoldenNum> for GoldenNum {
            type Output = GoldenNum;
            fn $method(self, rhs: &'b GoldenNum) -> GoldenNum {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<GoldenNum> for &'a GoldenNum {
            type Output = GoldenNum;
            fn $method(self, rhs: GoldenNum) -> GoldenNum {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| GoldenNum::new(&x.a + &y.a, &x.b + &y.b));
forward_binop!(Sub, sub, |x, y| GoldenNum::new(&x.a - &y.a, &x.b - &y.b));
// (a + bβ)(c + dβ) = ac + bd + (ad + bc + bd)β
forward_binop!(Mul, mul, |x, y| {
    let bd = &x.b * &y.b;
    GoldenNum::new(&x.a * &y.a + &bd, &x.a * &y.b + &x.b * &y.a + bd)
});
// Panics on a zero divisor, like the rationals it is built from; use
// `checked_div` where the divisor is untrusted.
forward_binop!(Div, div, |x, y| x.checked_div(y).expect("division by zero in Q(β)"));

impl Neg for GoldenNum {
    type Output = GoldenNum;
    fn neg(self) -> GoldenNum {
        GoldenNum::new(-self.a, -self.b)
    }
}

impl Neg for &GoldenNum {
    type Output = GoldenNum;
    fn neg(self) -> GoldenNum {
        GoldenNum::new(-self.a.clone(), -self.b.clone())
    }
}

impl AddAssign<&GoldenNum> for GoldenNum {
    fn add_assign(&mut self, rhs: &GoldenNum) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&GoldenNum> for GoldenNum {
    fn sub_assign(&mut self, rhs: &GoldenNum) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl From<i64> for GoldenNum {
    fn from(n: i64) -> Self {
        GoldenNum::from_int(n)
    }
}

impl From<Rat> for GoldenNum {
    fn from(r: Rat) -> Self {
        GoldenNum::from_rat(r)
    }
}

fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Canonical form `p/q + r/s*b`, both fractions in lowest terms and always
/// written with a denominator.
impl fmt::Display for GoldenNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*b", fmt_rat(&self.a), fmt_rat(&self.b))
    }
}

impl fmt::Debug for GoldenNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GoldenNum({} ≈ {})", self, self.approx(6))
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

/// Parses a sum of terms, each a rational `p/q` optionally followed by `*b`
/// (or a bare `b`). The canonical `p/q + r/s*b` form is one instance.
impl FromStr for GoldenNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let src = s.trim();
        if src.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        // Split into signed terms, keeping a leading sign with each term and
        // treating "+ -r/s" as a single negative term.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut expect_term = true;
        for ch in src.chars() {
            match ch {
                ' ' | '\t' => continue,
                '+' | '-' if expect_term => {
                    if ch == '-' {
                        neg = !neg;
                    }
                }
                '+' | '-' => {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = ch == '-';
                    expect_term = true;
                }
                _ => {
                    cur.push(ch);
                    expect_term = false;
                }
            }
        }
        if expect_term {
            return Err(Error::Parse(format!("dangling sign in {src:?}")));
        }
        terms.push((neg, cur));

        let mut acc = GoldenNum::zero();
        for (neg, t) in terms {
            let (coef, is_beta) = if let Some(c) = t.strip_suffix("*b") {
                (parse_rat(c)?, true)
            } else if t == "b" {
                (Rat::one(), true)
            } else if let Some(c) = t.strip_suffix('b') {
                (parse_rat(c)?, true)
            } else {
                (parse_rat(&t)?, false)
            };
            let coef = if neg { -coef } else { coef };
            if is_beta {
                acc.b += coef;
            } else {
                acc.a += coef;
            }
        }
        Ok(acc)
    }
}

/// Integer written as a JSON number when it fits in i64, else as a string.
fn int_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

fn int_from_json(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| format!("non-integer {n}")),
        serde_json::Value::String(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        other => Err(format!("expected integer, found {other}")),
    }
}

impl Serialize for GoldenNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("GoldenNum", 3)?;
        st.serialize_field("a", &[int_to_json(self.a.numer()), int_to_json(self.a.denom())])?;
        st.serialize_field("b", &[int_to_json(self.b.numer()), int_to_json(self.b.denom())])?;
        st.serialize_field("dec", &self.approx_sig(15))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GoldenNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: [serde_json::Value; 2],
            b: [serde_json::Value; 2],
        }
        let raw = Raw::deserialize(deserializer)?;
        let part = |pair: &[serde_json::Value; 2]| -> std::result::Result<Rat, D::Error> {
            let p = int_from_json(&pair[0]).map_err(de::Error::custom)?;
            let q = int_from_json(&pair[1]).map_err(de::Error::custom)?;
            if q.is_zero() {
                return Err(de::Error::custom("zero denominator"));
            }
            Ok(Rat::new(p, q))
        };
        Ok(GoldenNum::new(part(&raw.a)?, part(&raw.b)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GoldenNum {
        s.parse().unwrap()
    }

    #[test]
    fn beta_squared_reduces() {
        let b = GoldenNum::beta();
        assert_eq!(&b * &b, GoldenNum::from_parts(1, 1, 1, 1));
        assert_eq!(GoldenNum::from_parts(1, 1, 1, 1).checked_div(&b).unwrap(), b);
        assert_eq!(&b - &GoldenNum::one(), GoldenNum::one().checked_div(&b).unwrap());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = arith(FieldOp::Div, &GoldenNum::one(), &GoldenNum::zero());
        assert!(matches!(r, Err(Error::DivisionByZero)));
    }

    #[test]
    fn signs() {
        assert_eq!(g("-3/2 + 1*b").signum(), 1);
        assert_eq!(GoldenNum::zero().signum(), 0);
        assert_eq!(g("1 - b").signum(), -1);
        // 2 - b > 0, -2 + b < 0
        assert_eq!(g("2 - b").signum(), 1);
        assert_eq!(g("-2 + b").signum(), -1);
    }

    #[test]
    fn powers() {
        assert_eq!(GoldenNum::beta_pow(3), GoldenNum::from_parts(1, 1, 2, 1));
        assert_eq!(GoldenNum::beta_pow(-1), GoldenNum::from_parts(-1, 1, 1, 1));
        assert_eq!(GoldenNum::beta_pow(0), GoldenNum::one());
        assert_eq!(GoldenNum::beta_pow(-2), GoldenNum::from_parts(2, 1, -1, 1));
        for k in -12..12 {
            assert_eq!(GoldenNum::beta_pow(k).mul_beta(), GoldenNum::beta_pow(k + 1));
            assert_eq!(GoldenNum::beta_pow(k).div_beta(), GoldenNum::beta_pow(k - 1));
        }
    }

    #[test]
    fn approximations() {
        assert_eq!(GoldenNum::beta().approx(10), "1.6180339887");
        let x = &GoldenNum::one() + &GoldenNum::beta_pow(-2);
        assert_eq!(x.approx(6), "1.381966");
        assert_eq!(GoldenNum::zero().approx(3), "0.000");
        assert_eq!(GoldenNum::from_rat(rat(-1, 2)).approx(0), "-1");
        assert_eq!(GoldenNum::from_rat(rat(1, 8)).approx(2), "0.13");
        assert_eq!(g("1 - b").approx(4), "-0.6180");
        assert_eq!(GoldenNum::beta().approx_sig(15), "1.61803398874989");
        assert_eq!(GoldenNum::beta_pow(-10).approx_sig(3), "0.00813");
        assert_eq!(GoldenNum::from_rat(rat(999_999, 1000)).approx_sig(3), "1000");
    }

    #[test]
    fn floor_is_exact_near_integers() {
        assert_eq!(GoldenNum::beta().floor(), BigInt::from(1));
        assert_eq!(g("-1 + 0*b").floor(), BigInt::from(-1));
        assert_eq!((-GoldenNum::beta()).floor(), BigInt::from(-2));
        // β^20 is within 1e-4 of an integer (Lucas number 15127)
        let b20 = GoldenNum::beta_pow(20);
        assert_eq!(b20.floor(), BigInt::from(15126));
    }

    #[test]
    fn display_and_parse() {
        let x = GoldenNum::from_parts(3, 2, -1, 3);
        assert_eq!(x.to_string(), "3/2 + -1/3*b");
        assert_eq!(g("3/2 + -1/3*b"), x);
        assert_eq!(g("3/2 - 1/3*b"), x);
        assert_eq!(g("3/2+0/1*b"), GoldenNum::from_rat(rat(3, 2)));
        assert_eq!(g("b"), GoldenNum::beta());
        assert_eq!(g("-2b + 1"), GoldenNum::from_parts(1, 1, -2, 1));
        assert!("".parse::<GoldenNum>().is_err());
        assert!("1/0".parse::<GoldenNum>().is_err());
        assert!("1 +".parse::<GoldenNum>().is_err());
        assert!("x".parse::<GoldenNum>().is_err());
    }

    #[test]
    fn json_shape() {
        let x = GoldenNum::from_parts(-1, 1, 1, 1);
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(v["a"], serde_json::json!([-1, 1]));
        assert_eq!(v["b"], serde_json::json!([1, 1]));
        assert_eq!(v["dec"], "0.618033988749895");
        let back: GoldenNum = serde_json::from_value(v).unwrap();
        assert_eq!(back, x);
        let big = GoldenNum::beta_pow(200);
        let back: GoldenNum = serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(back, big);
    }
}
