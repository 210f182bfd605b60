//! The maps T_α, S_α and B, their digit functions and expansions.
//!
//! Exact-mode functions take α and the point as [`GoldenNum`]s and never
//! round. Float-mode counterparts live in [`float`].

pub mod float;
mod matching;

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{GoldenNum, BETA_F64};

pub use matching::{
    diff_state, ell, ell_via_b, matching_index, t_orbits_meet, DiffState, MarkovInfo, MatchInfo, MatchOutcome, Start,
    DEFAULT_MAX_ITER,
};

/// A digit of an S-, T- or B-expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Digit {
    Neg,
    Zero,
    Pos,
}

impl Digit {
    pub fn value(self) -> i8 {
        match self {
            Digit::Neg => -1,
            Digit::Zero => 0,
            Digit::Pos => 1,
        }
    }

    pub fn from_value(v: i8) -> Result<Digit> {
        match v {
            -1 => Ok(Digit::Neg),
            0 => Ok(Digit::Zero),
            1 => Ok(Digit::Pos),
            _ => Err(Error::Domain(format!("digit {v} outside {{-1,0,1}}"))),
        }
    }

    pub fn is_nonzero(self) -> bool {
        self != Digit::Zero
    }

    /// Symbol in the compact `-0+` alphabet.
    pub fn symbol(self) -> char {
        match self {
            Digit::Neg => '-',
            Digit::Zero => '0',
            Digit::Pos => '+',
        }
    }

    pub fn negate(self) -> Digit {
        match self {
            Digit::Neg => Digit::Pos,
            Digit::Zero => Digit::Zero,
            Digit::Pos => Digit::Neg,
        }
    }
}

impl From<Digit> for i8 {
    fn from(d: Digit) -> i8 {
        d.value()
    }
}

impl TryFrom<i8> for Digit {
    type Error = Error;
    fn try_from(v: i8) -> Result<Digit> {
        Digit::from_value(v)
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Compact rendering over `-0+`, e.g. `+00+`.
pub fn digits_to_compact(ds: &[Digit]) -> String {
    ds.iter().map(|d| d.symbol()).collect()
}

/// Inverse of [`digits_to_compact`]; also accepts `1` for `+`.
pub fn digits_from_compact(s: &str) -> Result<Vec<Digit>> {
    s.chars()
        .map(|c| match c {
            '-' => Ok(Digit::Neg),
            '0' => Ok(Digit::Zero),
            '+' | '1' => Ok(Digit::Pos),
            _ => Err(Error::Parse(format!("invalid digit symbol {c:?}"))),
        })
        .collect()
}

/// True when no nonzero digit is immediately followed by a nonzero digit.
pub fn has_isolated_nonzero(ds: &[Digit]) -> bool {
    ds.windows(2).all(|w| !(w[0].is_nonzero() && w[1].is_nonzero()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapKind {
    S,
    T,
    B,
}

impl std::str::FromStr for MapKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<MapKind> {
        match s {
            "S" | "s" => Ok(MapKind::S),
            "T" | "t" => Ok(MapKind::T),
            "B" | "b" => Ok(MapKind::B),
            _ => Err(Error::Parse(format!("unknown map {s:?}; expected S, T or B"))),
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MapKind::S => "S",
            MapKind::T => "T",
            MapKind::B => "B",
        };
        f.write_str(s)
    }
}

/// The parameter α, either exact in Q(β) or a binary64.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Exact(GoldenNum),
    Float(f64),
}

/// Upper bound accepted for float-mode α.
pub const FLOAT_ALPHA_MAX: f64 = 1.618_033_988_8;

impl Param {
    pub fn exact(alpha: GoldenNum) -> Result<Param> {
        if alpha < GoldenNum::one() || alpha > GoldenNum::beta() {
            return Err(Error::Domain(format!("alpha {} outside [1, β]", alpha.approx_sig(15))));
        }
        Ok(Param::Exact(alpha))
    }

    pub fn float(alpha: f64) -> Result<Param> {
        if !(1.0..=FLOAT_ALPHA_MAX).contains(&alpha) {
            return Err(Error::Domain(format!("alpha {alpha} outside [1, {FLOAT_ALPHA_MAX}]")));
        }
        Ok(Param::Float(alpha))
    }

    pub fn as_exact(&self) -> Option<&GoldenNum> {
        match self {
            Param::Exact(a) => Some(a),
            Param::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Exact(a) => a.to_f64(),
            Param::Float(a) => *a,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Param::Exact(_))
    }
}

fn check_unit_interval(x: &GoldenNum, lo: &GoldenNum) -> Result<()> {
    if x < lo || x > &GoldenNum::one() {
        return Err(Error::Domain(format!("point {} outside [{}, 1]", x.approx_sig(15), lo.approx_sig(3))));
    }
    Ok(())
}

/// Index t with x ∈ J_t, where J_0 = [−1/β, 1/β] is closed.
pub fn branch_index(x: &GoldenNum) -> Result<Digit> {
    check_unit_interval(x, &GoldenNum::from_int(-1))?;
    let ib = GoldenNum::inv_beta();
    Ok(if x > &ib {
        Digit::Pos
    } else if x < &-&ib {
        Digit::Neg
    } else {
        Digit::Zero
    })
}

fn shift_by(t: Digit, alpha: &GoldenNum) -> GoldenNum {
    match t {
        Digit::Neg => alpha.clone(),
        Digit::Zero => GoldenNum::zero(),
        Digit::Pos => -alpha,
    }
}

/// S_α(x) = βx − t(x)α, together with the digit t(x).
pub fn step_s_digit(alpha: &GoldenNum, x: &GoldenNum) -> Result<(GoldenNum, Digit)> {
    let t = branch_index(x)?;
    Ok((x.mul_beta() + shift_by(t, alpha), t))
}

pub fn step_s(alpha: &GoldenNum, x: &GoldenNum) -> Result<GoldenNum> {
    step_s_digit(alpha, x).map(|(y, _)| y)
}

/// T_α(x) = β^{1+|t|}x − tβα, together with t(x).
pub fn step_t_digit(alpha: &GoldenNum, x: &GoldenNum) -> Result<(GoldenNum, Digit)> {
    let t = branch_index(x)?;
    let s = x.mul_beta() + shift_by(t, alpha);
    // β²x − tβα = β(βx − tα)
    let y = if t == Digit::Zero { s } else { s.mul_beta() };
    Ok((y, t))
}

pub fn step_t(alpha: &GoldenNum, x: &GoldenNum) -> Result<GoldenNum> {
    step_t_digit(alpha, x).map(|(y, _)| y)
}

/// Greedy digit b(x): 1 iff x ≥ 1/β.
pub fn b_digit(x: &GoldenNum) -> Result<Digit> {
    check_unit_interval(x, &GoldenNum::zero())?;
    Ok(if x >= &GoldenNum::inv_beta() { Digit::Pos } else { Digit::Zero })
}

/// B(x) = βx − b(x) on [0, 1], together with b(x).
pub fn step_b_digit(x: &GoldenNum) -> Result<(GoldenNum, Digit)> {
    let b = b_digit(x)?;
    let y = x.mul_beta();
    Ok(if b == Digit::Pos { (y - GoldenNum::one(), b) } else { (y, b) })
}

pub fn step_b(x: &GoldenNum) -> Result<GoldenNum> {
    step_b_digit(x).map(|(y, _)| y)
}

/// One application of the chosen map; `alpha` is ignored for B.
pub fn step(map: MapKind, alpha: &GoldenNum, x: &GoldenNum) -> Result<(GoldenNum, Digit)> {
    match map {
        MapKind::S => step_s_digit(alpha, x),
        MapKind::T => step_t_digit(alpha, x),
        MapKind::B => step_b_digit(x),
    }
}

/// One row of an orbit dump: the j-th iterate and the digit read there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitPoint {
    pub j: usize,
    pub point: GoldenNum,
    pub digit: Digit,
}

/// The first `n` iterates x, F(x), …, F^{n−1}(x) with their digits.
pub fn orbit(map: MapKind, alpha: &GoldenNum, x: &GoldenNum, n: usize) -> Result<Vec<OrbitPoint>> {
    let mut out = Vec::with_capacity(n);
    let mut cur = x.clone();
    for j in 0..n {
        let (next, digit) = step(map, alpha, &cur)?;
        out.push(OrbitPoint { j, point: cur, digit });
        cur = next;
    }
    Ok(out)
}

/// The first `n` digits of the expansion of x under the chosen map.
pub fn expansion(map: MapKind, alpha: &GoldenNum, x: &GoldenNum, n: usize) -> Result<Vec<Digit>> {
    if n == 0 {
        return Err(Error::Domain("expansion length must be at least 1".into()));
    }
    Ok(orbit(map, alpha, x, n)?.into_iter().map(|p| p.digit).collect())
}

/// Expansion for either parameter mode; float mode flags boundary
/// ambiguities as errors instead of choosing a branch.
pub fn expansion_param(map: MapKind, p: &Param, x: &GoldenNum, n: usize) -> Result<Vec<Digit>> {
    match p {
        Param::Exact(a) => expansion(map, a, x, n),
        Param::Float(a) => float::expansion(map, *a, x.to_f64(), n),
    }
}

/// Writes an orbit as CSV rows `j,point_exact,point_decimal,digit`.
pub fn write_orbit_csv<W: Write>(rows: &[OrbitPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["j", "point_exact", "point_decimal", "digit"])?;
    for r in rows {
        w.write_record([r.j.to_string(), r.point.to_string(), r.point.approx_sig(15), r.digit.value().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// S_α^k(x) from its first k digits: β^k(x − α·Σ s_j β^{−j}).
pub fn s_iterate_closed_form(alpha: &GoldenNum, x: &GoldenNum, digits: &[Digit]) -> GoldenNum {
    let mut v = GoldenNum::zero();
    let mut p = GoldenNum::one();
    for d in digits {
        p = p.div_beta();
        match d {
            Digit::Pos => v += &p,
            Digit::Neg => v -= &p,
            Digit::Zero => {}
        }
    }
    GoldenNum::beta_pow(digits.len() as i64) * (x - &(alpha * &v))
}

/// Display transform from an S-matching word to the corresponding T-word:
/// every non-terminal 0 directly after a nonzero digit is dropped, and with
/// `drop_leading_zero` the initial 0 is dropped as well.
pub fn t_word_from_s_word(ds: &[Digit], drop_leading_zero: bool) -> Vec<Digit> {
    let mut out = Vec::with_capacity(ds.len());
    for (i, d) in ds.iter().enumerate() {
        if i == 0 && drop_leading_zero && *d == Digit::Zero {
            continue;
        }
        let terminal = i + 1 == ds.len();
        if *d == Digit::Zero && i > 0 && ds[i - 1].is_nonzero() && !terminal {
            continue;
        }
        out.push(*d);
    }
    out
}

/// Returns the golden mean, for float callers that want it by name.
pub fn beta_f64() -> f64 {
    BETA_F64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GoldenNum {
        s.parse().unwrap()
    }

    #[test]
    fn branch_indices() {
        assert_eq!(branch_index(&GoldenNum::one()).unwrap(), Digit::Pos);
        assert_eq!(branch_index(&GoldenNum::zero()).unwrap(), Digit::Zero);
        assert_eq!(branch_index(&GoldenNum::from_int(-1)).unwrap(), Digit::Neg);
        assert_eq!(branch_index(&GoldenNum::inv_beta()).unwrap(), Digit::Zero);
        assert_eq!(branch_index(&-GoldenNum::inv_beta()).unwrap(), Digit::Zero);
        assert!(branch_index(&GoldenNum::beta()).is_err());
    }

    #[test]
    fn s_and_t_steps() {
        let alpha = g("3/2");
        let b = GoldenNum::beta();
        assert_eq!(step_s(&alpha, &GoldenNum::one()).unwrap(), &b - &alpha);
        assert_eq!(step_s(&alpha, &GoldenNum::zero()).unwrap(), GoldenNum::zero());
        let x = GoldenNum::one() - alpha.clone();
        assert_eq!(step_s(&alpha, &x).unwrap(), &b - &(&b * &alpha));
        let t1 = step_t(&alpha, &GoldenNum::one()).unwrap();
        assert_eq!(t1, &(&b * &b) - &(&b * &alpha));
        let s2 = step_s(&alpha, &step_s(&alpha, &GoldenNum::one()).unwrap()).unwrap();
        assert_eq!(t1, s2);
        let half = g("1/2");
        assert_eq!(step_t(&alpha, &half).unwrap(), half.mul_beta());
        assert_eq!(step_t(&alpha, &-GoldenNum::one()).unwrap(), -t1);
    }

    #[test]
    fn b_steps() {
        let ib = GoldenNum::inv_beta();
        assert_eq!(step_b(&ib).unwrap(), GoldenNum::zero());
        assert_eq!(step_b(&GoldenNum::one()).unwrap(), ib);
        assert_eq!(step_b(&GoldenNum::beta_pow(-2)).unwrap(), ib);
        assert!(step_b(&g("-1/2")).is_err());
    }

    #[test]
    fn expansions() {
        let one = GoldenNum::one();
        let b = expansion(MapKind::B, &one, &one, 5).unwrap();
        assert_eq!(digits_to_compact(&b), "++000");
        let z = expansion(MapKind::S, &g("3/2"), &GoldenNum::zero(), 4).unwrap();
        assert_eq!(digits_to_compact(&z), "0000");
        // a point of (1+1/β³, 1+1/β²)
        let alpha = GoldenNum::one() + GoldenNum::beta_pow(-3) + GoldenNum::beta_pow(-6);
        let d = expansion(MapKind::S, &alpha, &one, 4).unwrap();
        assert_eq!(digits_to_compact(&d), "+00+");
    }

    #[test]
    fn compact_round_trip() {
        let ds = digits_from_compact("+0-00+").unwrap();
        assert_eq!(digits_to_compact(&ds), "+0-00+");
        assert!(digits_from_compact("+x").is_err());
    }

    #[test]
    fn orbit_csv_rows() {
        let rows = orbit(MapKind::B, &GoldenNum::one(), &GoldenNum::one(), 3).unwrap();
        let mut buf = Vec::new();
        write_orbit_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "j,point_exact,point_decimal,digit");
        assert_eq!(lines[1], "0,1/1 + 0/1*b,1.00000000000000,1");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn t_word_display() {
        let d = digits_from_compact("+0+0000+").unwrap();
        assert_eq!(digits_to_compact(&t_word_from_s_word(&d, false)), "++000+");
        let e = digits_from_compact("0000-0-0").unwrap();
        assert_eq!(digits_to_compact(&t_word_from_s_word(&e, true)), "000--0");
    }

    #[test]
    fn param_validation() {
        assert!(Param::exact(g("3/2")).is_ok());
        assert!(Param::exact(g("2")).is_err());
        assert!(Param::exact(g("1/2")).is_err());
        assert!(Param::float(1.5).is_ok());
        assert!(Param::float(1.7).is_err());
    }
}
