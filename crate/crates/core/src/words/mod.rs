//! Combinatorics of matching words: admissible block form, the mirror map
//! φ, Property M, valuations, interval endpoints, cascades and the
//! normalizer substitution Ξ.

mod atlas;
mod record;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::Digit;
use crate::error::{Error, Result};
use crate::field::GoldenNum;

pub use atlas::{enumerate_matching_words, read_atlas_csv, Atlas, AtlasRow};
pub use record::{k_constant, k_constant_alternate, n_count, MatchingRecord};

/// A finite word over {0, 1}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word01(Vec<u8>);

/// A finite word over {−1, 0, 1}.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SignedWord(Vec<i8>);

impl Word01 {
    pub fn new(digits: Vec<u8>) -> Result<Word01> {
        if let Some(p) = digits.iter().position(|&d| d > 1) {
            return Err(Error::Parse(format!("digit {} at position {p} is not 0 or 1", digits[p])));
        }
        Ok(Word01(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn to_signed(&self) -> SignedWord {
        SignedWord(self.0.iter().map(|&d| d as i8).collect())
    }

    pub fn valuation(&self) -> GoldenNum {
        valuation(self.0.iter().map(|&d| d as i64))
    }

    pub fn prefix(&self, n: usize) -> Word01 {
        Word01(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn concat(&self, other: &Word01) -> Word01 {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word01(v)
    }

    pub fn is_exceptional(&self) -> bool {
        self.0 == [1, 0] || self.0 == [1, 0, 0, 1]
    }
}

impl SignedWord {
    pub fn new(digits: Vec<i8>) -> Result<SignedWord> {
        if let Some(p) = digits.iter().position(|&d| !(-1..=1).contains(&d)) {
            return Err(Error::Parse(format!("digit {} at position {p} outside {{-1,0,1}}", digits[p])));
        }
        Ok(SignedWord(digits))
    }

    pub fn from_digits(ds: &[Digit]) -> SignedWord {
        SignedWord(ds.iter().map(|d| d.value()).collect())
    }

    pub fn to_digits(&self) -> Vec<Digit> {
        self.0.iter().map(|&d| Digit::from_value(d).expect("validated")).collect()
    }

    pub fn digits(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negate(&self) -> SignedWord {
        SignedWord(self.0.iter().map(|d| -d).collect())
    }

    /// The word as a 0/1 word, if it has no −1 digits.
    pub fn to_word01(&self) -> Option<Word01> {
        self.0.iter().map(|&d| u8::try_from(d).ok()).collect::<Option<Vec<_>>>().map(Word01)
    }

    pub fn valuation(&self) -> GoldenNum {
        valuation(self.0.iter().map(|&d| d as i64))
    }

    /// True when no two nonzero digits are adjacent.
    pub fn has_isolated_nonzero(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == 0 || w[1] == 0)
    }
}

impl fmt::Display for Word01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word01({self})")
    }
}

/// Rendered over `-0+`; e.g. −(0010) prints as `00-0`.
impl fmt::Display for SignedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            let c = match d {
                -1 => '-',
                0 => '0',
                _ => '+',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedWord({self})")
    }
}

impl FromStr for Word01 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word01> {
        let s = s.trim();
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("invalid binary word {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word01)
    }
}

impl FromStr for SignedWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<SignedWord> {
        let s = s.trim();
        s.chars()
            .map(|c| match c {
                '-' => Ok(-1),
                '0' => Ok(0),
                '+' | '1' => Ok(1),
                _ => Err(Error::Parse(format!("invalid signed word {s:?}"))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(SignedWord)
    }
}

macro_rules! serde_via_string {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_string())
            }
        }
        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_string!(Word01);
serde_via_string!(SignedWord);

/// v(w) = Σ w_j β^{−j} for a finite word with integer digits.
pub fn valuation<I>(digits: I) -> GoldenNum
where
    I: IntoIterator<Item = i64>,
    I::IntoIter: DoubleEndedIterator,
{
    let mut acc = GoldenNum::zero();
    for d in digits.into_iter().rev() {
        acc = (acc + GoldenNum::from_int(d)).div_beta();
    }
    acc
}

/// Lexicographic comparison of finite words padded with zeros.
pub fn lex_compare(u: &[i8], w: &[i8]) -> Ordering {
    let n = u.len().max(w.len());
    for k in 0..n {
        let a = u.get(k).copied().unwrap_or(0);
        let b = w.get(k).copied().unwrap_or(0);
        match a.cmp(&b) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

/// The three blocks, indexed 0, 1, 2.
pub const BLOCKS: [&[u8]; 3] = [&[0, 0], &[0, 0, 1], &[0, 1]];

pub fn block_len(i: u8) -> usize {
    BLOCKS[i as usize].len()
}

/// Decomposition d = 1·w_{i_1}⋯w_{i_n}·(1 − i_n/2), or the exceptional
/// word 10.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub indices: Vec<u8>,
    pub terminal: u8,
    pub exceptional: bool,
}

impl BlockDecomposition {
    pub fn ten() -> BlockDecomposition {
        BlockDecomposition { indices: Vec::new(), terminal: 0, exceptional: true }
    }

    /// Builds the decomposition from indices, checking the admissibility
    /// conditions.
    pub fn from_indices(indices: Vec<u8>) -> Result<BlockDecomposition> {
        let n = indices.len();
        if n == 0 {
            return Err(Error::Construction("block sequence must be nonempty".into()));
        }
        if indices.iter().any(|&i| i > 2) {
            return Err(Error::Construction("block index outside {0,1,2}".into()));
        }
        if indices[n - 1] == 1 {
            return Err(Error::Construction("last block index must not be 1".into()));
        }
        if n >= 2 && indices[0] != 2 {
            return Err(Error::Construction("first block index must be 2 when n ≥ 2".into()));
        }
        let terminal = 1 - indices[n - 1] / 2;
        Ok(BlockDecomposition { indices, terminal, exceptional: false })
    }

    /// Reassembles the word.
    pub fn word(&self) -> Word01 {
        if self.exceptional {
            return Word01(vec![1, 0]);
        }
        let mut v = vec![1];
        for &i in &self.indices {
            v.extend_from_slice(BLOCKS[i as usize]);
        }
        v.push(self.terminal);
        Word01(v)
    }

    pub fn word_len(&self) -> usize {
        if self.exceptional {
            2
        } else {
            2 + self.indices.iter().map(|&i| block_len(i)).sum::<usize>()
        }
    }
}

/// Parses `w` into admissible block form.
///
/// The body between the leading 1 and the terminal digit is read greedily:
/// `01` is w_2, `00` followed by `1` is w_1, any other `00` is w_0. No block
/// begins with 1, so this choice is forced and the decomposition unique.
pub fn parse_block_form(w: &Word01) -> Result<BlockDecomposition> {
    let d = w.digits();
    if d == [1, 0] {
        return Ok(BlockDecomposition::ten());
    }
    let fail = |position: usize| Error::NotAdmissible { position };
    if d.first() != Some(&1) {
        return Err(fail(0));
    }
    if d.len() < 4 {
        return Err(fail(d.len().min(1)));
    }
    let body = &d[1..d.len() - 1];
    let mut indices = Vec::new();
    let mut p = 0;
    while p < body.len() {
        if body[p] != 0 || p + 1 >= body.len() {
            return Err(fail(p + 1));
        }
        if body[p + 1] == 1 {
            indices.push(2);
            p += 2;
        } else if body.get(p + 2) == Some(&1) {
            indices.push(1);
            p += 3;
        } else {
            indices.push(0);
            p += 2;
        }
    }
    let n = indices.len();
    if n >= 2 && indices[0] != 2 {
        return Err(fail(1));
    }
    let last = indices[n - 1];
    if last == 1 || d[d.len() - 1] != 1 - last / 2 {
        return Err(fail(d.len() - 1));
    }
    Ok(BlockDecomposition { indices, terminal: 1 - last / 2, exceptional: false })
}

/// φ(d): −(01) for d = 10, otherwise −(0·w_{2−i_1}⋯w_{2−i_n}·(i_n/2)).
pub fn phi(bd: &BlockDecomposition) -> SignedWord {
    if bd.exceptional {
        return SignedWord(vec![0, -1]);
    }
    let mut v: Vec<i8> = vec![0];
    for &i in &bd.indices {
        v.extend(BLOCKS[(2 - i) as usize].iter().map(|&x| -(x as i8)));
    }
    v.push(-((bd.indices[bd.indices.len() - 1] / 2) as i8));
    SignedWord(v)
}

/// Why a word fails Property M.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum PropertyMFailure {
    NotAdmissible {
        position: usize,
    },
    /// σ^shift(d) ≻ d.
    ShiftOfWord {
        shift: usize,
    },
    /// σ^shift(−φ(d)) ≻ d.
    ShiftOfMirror {
        shift: usize,
    },
}

/// Checks Property M: d ∈ 𝓑 and every shift of d and of −φ(d) is ⪯ d.
pub fn property_m_check(d: &Word01) -> std::result::Result<BlockDecomposition, PropertyMFailure> {
    let bd = match parse_block_form(d) {
        Ok(bd) => bd,
        Err(Error::NotAdmissible { position }) => return Err(PropertyMFailure::NotAdmissible { position }),
        Err(_) => return Err(PropertyMFailure::NotAdmissible { position: 0 }),
    };
    let ds = d.to_signed();
    let ds = ds.digits();
    for j in 1..ds.len() {
        if lex_compare(&ds[j..], ds) == Ordering::Greater {
            return Err(PropertyMFailure::ShiftOfWord { shift: j });
        }
    }
    let mirror = phi(&bd).negate();
    let ms = mirror.digits();
    for j in 0..ms.len() {
        if lex_compare(&ms[j..], ds) == Ordering::Greater {
            return Err(PropertyMFailure::ShiftOfMirror { shift: j });
        }
    }
    Ok(bd)
}

pub fn has_property_m(d: &Word01) -> bool {
    property_m_check(d).is_ok()
}

/// Endpoints of the matching interval I_d.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Endpoints {
    pub alpha_minus: GoldenNum,
    pub alpha_plus: GoldenNum,
    /// Only I_10 = (1+1/β², β] contains its right endpoint.
    pub closed_right: bool,
}

impl Endpoints {
    pub fn length(&self) -> GoldenNum {
        &self.alpha_plus - &self.alpha_minus
    }

    pub fn midpoint(&self) -> GoldenNum {
        GoldenNum::midpoint(&self.alpha_minus, &self.alpha_plus)
    }

    pub fn contains(&self, alpha: &GoldenNum) -> bool {
        alpha > &self.alpha_minus && (alpha < &self.alpha_plus || (self.closed_right && alpha == &self.alpha_plus))
    }
}

/// Endpoints of I_d from the closed formula in β^m, v(d) and d_m.
/// Does not check Property M.
pub fn interval_endpoints(d: &Word01) -> Result<Endpoints> {
    if d.digits() == [1, 0] {
        return Ok(Endpoints {
            alpha_minus: GoldenNum::one() + GoldenNum::beta_pow(-2),
            alpha_plus: GoldenNum::beta(),
            closed_right: true,
        });
    }
    let m = d.len() as i64;
    let dm = d.last().ok_or_else(|| Error::Domain("empty word".into()))? as i64;
    let bm = GoldenNum::beta_pow(m);
    let bmv = &bm * &d.valuation();
    let a = GoldenNum::beta_pow(dm);
    let b = GoldenNum::beta_pow(1 - dm);
    let alpha_minus = (&bm + &a).checked_div(&(&bmv + &a))?;
    let alpha_plus = (&bm - &b).checked_div(&(&bmv - &b))?;
    Ok(Endpoints { alpha_minus, alpha_plus, closed_right: false })
}

/// Cylinder Δ(u) of points in [0,1] whose β-expansion begins with u, as a
/// half-open interval [lo, hi).
pub fn cylinder(u: &Word01) -> Result<(GoldenNum, GoldenNum)> {
    if u.digits().windows(2).any(|w| w == [1, 1]) {
        return Err(Error::Domain(format!("word {u} has consecutive 1s")));
    }
    let n = u.len() as i64;
    let lo = u.valuation();
    let width = match u.last() {
        Some(1) => GoldenNum::beta_pow(-(n + 1)),
        _ => GoldenNum::beta_pow(-n),
    };
    let hi = &lo + &width;
    Ok((lo, hi))
}

/// Cascade map: ψ(d) = d·(−e) if d_m = 0 and d·(−e_2⋯e_m) if d_m = 1.
pub fn psi(d: &Word01) -> Result<Word01> {
    if d.is_exceptional() {
        return Err(Error::ExceptionalWord(d.to_string()));
    }
    let bd = property_m_check(d).map_err(|f| Error::Construction(format!("{d} lacks Property M: {f:?}")))?;
    let mirror = phi(&bd).negate();
    let tail = if d.last() == Some(0) { mirror.digits() } else { &mirror.digits()[1..] };
    let mut v = d.digits().to_vec();
    v.extend(tail.iter().map(|&x| x as u8));
    Ok(Word01(v))
}

/// Ξ(d) over {0,1,2,3}: 101 for d = 10, else 1·ξ(w_{i_1})⋯ξ(w_{i_n})·01 with
/// ξ(w_0) = ξ(w_2) = 02 and ξ(w_1) = 030.
pub fn xi(bd: &BlockDecomposition) -> Vec<u8> {
    if bd.exceptional {
        return vec![1, 0, 1];
    }
    let mut v = vec![1];
    for &i in &bd.indices {
        if i == 1 {
            v.extend_from_slice(&[0, 3, 0]);
        } else {
            v.extend_from_slice(&[0, 2]);
        }
    }
    v.extend_from_slice(&[0, 1]);
    v
}

pub fn xi_string(w: &[u8]) -> String {
    w.iter().map(|d| char::from(b'0' + d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word01 {
        s.parse().unwrap()
    }

    fn bp(k: i64) -> GoldenNum {
        GoldenNum::beta_pow(k)
    }

    #[test]
    fn block_parsing() {
        let bd = parse_block_form(&w("10100001001")).unwrap();
        assert_eq!(bd.indices, vec![2, 0, 1, 0]);
        assert_eq!(bd.terminal, 1);
        assert_eq!(bd.word(), w("10100001001"));
        assert!(matches!(parse_block_form(&w("1010001")), Err(Error::NotAdmissible { .. })));
        assert!(parse_block_form(&w("10")).unwrap().exceptional);
        assert!(parse_block_form(&w("1001")).is_ok());
        assert!(parse_block_form(&w("1000")).is_err());
        assert!(parse_block_form(&w("100001")).is_err());
        assert!(parse_block_form(&w("0101")).is_err());
        assert!(parse_block_form(&w("1")).is_err());
        assert!(parse_block_form(&w("")).is_err());
    }

    #[test]
    fn mirror_words() {
        let e = |s: &str| phi(&parse_block_form(&w(s)).unwrap()).to_string();
        assert_eq!(e("10"), "0-");
        assert_eq!(e("1001"), "00-0");
        assert_eq!(e("10100001001"), "0000-00-0-0");
    }

    #[test]
    fn lex_order() {
        assert_eq!(lex_compare(&[1, 0, 0, 0], &[1, 0, 1, 0]), Ordering::Less);
        assert_eq!(lex_compare(&[1, 0, 1], &[1, 0, 1]), Ordering::Equal);
        assert_eq!(lex_compare(&[0, 1], &[0, 0, 1]), Ordering::Greater);
        assert_eq!(lex_compare(&[1], &[1, 0, 0]), Ordering::Equal);
    }

    #[test]
    fn property_m() {
        assert!(has_property_m(&w("10100001001")));
        assert!(has_property_m(&w("1010")));
        assert!(has_property_m(&w("1001")));
        assert!(has_property_m(&w("10")));
        assert!(matches!(property_m_check(&w("1010001")), Err(PropertyMFailure::NotAdmissible { .. })));
        // admissible, but the shift 101001 beats the prefix 101000
        assert_eq!(property_m_check(&w("101000101001")), Err(PropertyMFailure::ShiftOfWord { shift: 6 }));
    }

    #[test]
    fn valuations() {
        assert_eq!(w("10").valuation(), GoldenNum::inv_beta());
        assert_eq!(valuation([0, 1, 0, 0, 2]), GoldenNum::inv_beta() - bp(-6));
        let d = w("1001");
        let e = phi(&parse_block_form(&d).unwrap());
        assert_eq!(d.valuation() - e.valuation(), GoldenNum::one());
        assert_eq!(valuation(std::iter::empty()), GoldenNum::zero());
    }

    #[test]
    fn endpoints() {
        let one = GoldenNum::one();
        let ten = interval_endpoints(&w("10")).unwrap();
        assert_eq!(ten.alpha_minus, &one + &bp(-2));
        assert_eq!(ten.alpha_plus, GoldenNum::beta());
        assert!(ten.closed_right);
        let e = interval_endpoints(&w("1001")).unwrap();
        assert_eq!(e.alpha_minus, &one + &bp(-3));
        assert_eq!(e.alpha_plus, &one + &bp(-2));
        assert!(!e.closed_right);
    }

    #[test]
    fn cascade_map() {
        assert_eq!(psi(&w("1010")).unwrap(), w("10100001"));
        assert!(matches!(psi(&w("10")), Err(Error::ExceptionalWord(_))));
        assert!(matches!(psi(&w("1001")), Err(Error::ExceptionalWord(_))));
        let a = interval_endpoints(&w("1010")).unwrap();
        let b = interval_endpoints(&w("10100001")).unwrap();
        assert_eq!(a.alpha_minus, b.alpha_plus);
    }

    #[test]
    fn xi_words() {
        let x = |s: &str| xi_string(&xi(&parse_block_form(&w(s)).unwrap()));
        assert_eq!(x("10"), "101");
        assert_eq!(x("1001"), "10201");
        assert_eq!(x("1010"), "10201");
    }

    #[test]
    fn cylinders() {
        let (lo, hi) = cylinder(&w("10")).unwrap();
        assert_eq!(lo, GoldenNum::inv_beta());
        assert_eq!(hi, GoldenNum::inv_beta() + bp(-2));
        let (lo, hi) = cylinder(&w("1")).unwrap();
        assert_eq!((lo, hi), (GoldenNum::inv_beta(), GoldenNum::one()));
        assert!(cylinder(&w("11")).is_err());
    }

    #[test]
    fn word_parsing() {
        assert!("102".parse::<Word01>().is_err());
        assert_eq!("00-0".parse::<SignedWord>().unwrap().digits(), &[0, 0, -1, 0]);
        assert!(Word01::new(vec![2]).is_err());
        assert!(SignedWord::new(vec![2]).is_err());
    }
}
