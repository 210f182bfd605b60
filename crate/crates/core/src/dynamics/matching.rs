//! Matching detection for S_α.
//!
//! The orbits of 1 and 1−α are iterated together. Their difference is
//! tracked twice: symbolically by the four-state automaton and numerically
//! by classifying the exact difference. The first entry of either orbit into
//! its hole region gives ℓ_α, which must bracket the matching index.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{step_b, step_s_digit, step_t, Digit};
use crate::error::{Error, Result};
use crate::field::GoldenNum;

pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Class of S_α^j(1) − S_α^j(1−α).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffState {
    Zero,
    AlphaOverBeta,
    Alpha,
    BetaAlpha,
}

impl DiffState {
    pub fn value(self, alpha: &GoldenNum) -> GoldenNum {
        match self {
            DiffState::Zero => GoldenNum::zero(),
            DiffState::AlphaOverBeta => alpha.div_beta(),
            DiffState::Alpha => alpha.clone(),
            DiffState::BetaAlpha => alpha.mul_beta(),
        }
    }

    /// The state whose value equals `diff`, if any. At α = 1 no two classes
    /// coincide either, since the values α/β, α, βα are always distinct.
    pub fn classify(diff: &GoldenNum, alpha: &GoldenNum) -> Option<DiffState> {
        [DiffState::Zero, DiffState::AlphaOverBeta, DiffState::Alpha, DiffState::BetaAlpha]
            .into_iter()
            .find(|s| &s.value(alpha) == diff)
    }

    /// Automaton transition on the digit pair (d, e) read at the current
    /// points. `None` marks a pair the automaton forbids.
    pub fn next(self, d: Digit, e: Digit) -> Option<DiffState> {
        use Digit::*;
        match (self, d, e) {
            (DiffState::Zero, _, _) if d == e => Some(DiffState::Zero),
            (DiffState::AlphaOverBeta, Pos, Zero) | (DiffState::AlphaOverBeta, Zero, Neg) => Some(DiffState::Zero),
            (DiffState::AlphaOverBeta, Zero, Zero) => Some(DiffState::Alpha),
            (DiffState::Alpha, Pos, Zero) | (DiffState::Alpha, Zero, Neg) => Some(DiffState::AlphaOverBeta),
            (DiffState::Alpha, Zero, Zero) => Some(DiffState::BetaAlpha),
            (DiffState::BetaAlpha, Pos, Neg) => Some(DiffState::AlphaOverBeta),
            _ => None,
        }
    }
}

/// Result of a successful matching search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchInfo {
    /// Matching index m(α).
    pub m: usize,
    /// First m digits of the S-expansion of 1.
    pub d: Vec<Digit>,
    /// First m digits of the S-expansion of 1−α.
    pub e: Vec<Digit>,
    /// ℓ_α = min(ℓ_α(1), ℓ_α(1−α)); `None` only for α = 1.
    pub ell: Option<usize>,
    /// Common point S^m(1) = S^m(1−α).
    pub meeting_point: GoldenNum,
}

/// Eventually periodic critical orbits without matching.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkovInfo {
    /// Index of the first pair that is later revisited.
    pub preperiod: usize,
    pub period: usize,
    /// Orbit of 1 up to (excluding) the first repeat.
    pub orbit_one: Vec<GoldenNum>,
    /// Orbit of 1−α up to (excluding) the first repeat.
    pub orbit_one_minus_alpha: Vec<GoldenNum>,
    /// Digits read along the orbits above.
    pub d: Vec<Digit>,
    pub e: Vec<Digit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatchOutcome {
    Matched(MatchInfo),
    MarkovDetected(MarkovInfo),
}

impl MatchOutcome {
    pub fn matched(&self) -> Option<&MatchInfo> {
        match self {
            MatchOutcome::Matched(m) => Some(m),
            MatchOutcome::MarkovDetected(_) => None,
        }
    }
}

fn internal(msg: String) -> Error {
    Error::Internal(msg)
}

/// Searches for the smallest m ≥ 1 with S^m(1) = S^m(1−α).
///
/// Returns `MarkovDetected` when the pair of orbit points repeats exactly
/// before matching, and `NotFound` when neither happens within `max_iter`
/// steps.
pub fn matching_index(alpha: &GoldenNum, max_iter: usize) -> Result<MatchOutcome> {
    if alpha < &GoldenNum::one() || alpha > &GoldenNum::beta() {
        return Err(Error::Domain(format!("alpha {} outside [1, β]", alpha.approx_sig(15))));
    }
    if max_iter == 0 {
        return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
    }
    let is_one = alpha == &GoldenNum::one();
    let ib = GoldenNum::inv_beta();
    let aob = alpha.div_beta();
    let neg_ib = -&ib;
    let neg_aob = -&aob;

    let mut x = GoldenNum::one();
    let mut y = GoldenNum::one() - alpha.clone();
    let mut state = DiffState::Alpha;
    let mut seen: HashMap<(GoldenNum, GoldenNum), usize> = HashMap::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ds = Vec::new();
    let mut es = Vec::new();
    let mut ell: Option<usize> = None;

    for j in 0..max_iter {
        if let Some(&first) = seen.get(&(x.clone(), y.clone())) {
            if let (false, Some(l)) = (is_one, ell) {
                return Err(internal(format!("hole entered at {l} but orbits became periodic at {j}")));
            }
            return Ok(MatchOutcome::MarkovDetected(MarkovInfo {
                preperiod: first,
                period: j - first,
                orbit_one: xs,
                orbit_one_minus_alpha: ys,
                d: ds,
                e: es,
            }));
        }
        seen.insert((x.clone(), y.clone()), j);

        if ell.is_none() && !is_one {
            let in_hole_one = x > ib && x <= aob;
            let in_hole_other = y >= neg_aob && y < neg_ib;
            if in_hole_one || in_hole_other {
                ell = Some(j);
            }
        }

        let (nx, d) = step_s_digit(alpha, &x)?;
        let (ny, e) = step_s_digit(alpha, &y)?;
        let next_state = state
            .next(d, e)
            .ok_or_else(|| internal(format!("forbidden digit pair ({d}, {e}) from {state:?} at step {}", j + 1)))?;
        let diff = &nx - &ny;
        let actual = DiffState::classify(&diff, alpha)
            .ok_or_else(|| internal(format!("orbit difference {} outside the four classes", diff.approx_sig(15))))?;
        if actual != next_state {
            return Err(internal(format!(
                "automaton predicts {next_state:?} but difference is {actual:?} at step {}",
                j + 1
            )));
        }
        xs.push(x);
        ys.push(y);
        ds.push(d);
        es.push(e);
        x = nx;
        y = ny;
        state = next_state;
        let m = j + 1;

        if state == DiffState::Zero {
            if !is_one {
                let l = ell.ok_or_else(|| internal(format!("matched at {m} without a hole entry")))?;
                if m != l + 1 && m != l + 2 {
                    return Err(internal(format!("matching index {m} not in {{ℓ+1, ℓ+2}} with ℓ = {l}")));
                }
            }
            return Ok(MatchOutcome::Matched(MatchInfo { m, d: ds, e: es, ell, meeting_point: x }));
        }
        if let Some(l) = ell {
            if m >= l + 2 {
                return Err(internal(format!("hole entered at {l} but no matching by step {m}")));
            }
        }
    }
    Err(Error::NotFound { max_iter })
}

/// Class of the orbit difference after j steps.
pub fn diff_state(alpha: &GoldenNum, j: usize) -> Result<DiffState> {
    let mut x = GoldenNum::one();
    let mut y = GoldenNum::one() - alpha.clone();
    for _ in 0..j {
        x = step_s_digit(alpha, &x)?.0;
        y = step_s_digit(alpha, &y)?.0;
    }
    DiffState::classify(&(&x - &y), alpha)
        .ok_or_else(|| internal(format!("difference after {j} steps outside the four classes")))
}

/// Which critical orbit `ell` follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    One,
    OneMinusAlpha,
}

/// ℓ_α(x) for x = 1 or x = 1−α: one less than the first j with
/// S^j(|x|) ≤ 0. The hole characterisation is evaluated alongside and must
/// give the same index.
pub fn ell(alpha: &GoldenNum, which: Start, max_iter: usize) -> Result<usize> {
    if alpha == &GoldenNum::one() {
        return Err(Error::Domain("ℓ is undefined at alpha = 1".into()));
    }
    let ib = GoldenNum::inv_beta();
    let aob = alpha.div_beta();
    let mut z = match which {
        Start::One => GoldenNum::one(),
        Start::OneMinusAlpha => alpha - &GoldenNum::one(),
    };
    let mut hole: Option<usize> = None;
    for j in 0..=max_iter {
        if !z.is_positive() {
            let l = j.checked_sub(1).ok_or_else(|| internal("ℓ of a nonpositive start".into()))?;
            if hole != Some(l) {
                return Err(internal(format!("ℓ = {l} but hole entry at {hole:?}")));
            }
            return Ok(l);
        }
        if hole.is_none() && z > ib && z <= aob {
            hole = Some(j);
        }
        z = step_s_digit(alpha, &z)?.0;
    }
    Err(Error::NotFound { max_iter })
}

/// ℓ_α(x) via the β-transformation: the first j with
/// B^j(|x|/α) ∈ (1/(βα), 1/β].
pub fn ell_via_b(alpha: &GoldenNum, which: Start, max_iter: usize) -> Result<usize> {
    let one = GoldenNum::one();
    let start = match which {
        Start::One => one.clone(),
        Start::OneMinusAlpha => alpha - &one,
    };
    let mut z = start.checked_div(alpha)?;
    let lo = alpha.mul_beta().recip()?;
    let hi = GoldenNum::inv_beta();
    for j in 0..=max_iter {
        if z > lo && z <= hi {
            return Ok(j);
        }
        z = step_b(&z)?;
    }
    Err(Error::NotFound { max_iter })
}

/// Whether the T_α-orbits of 1 and β(1−α) share a point.
///
/// Both orbits are followed until they meet or until each has closed into a
/// cycle; in the latter case every point is known and they never meet.
pub fn t_orbits_meet(alpha: &GoldenNum, max_iter: usize) -> Result<bool> {
    let mut a = GoldenNum::one();
    let mut b = (GoldenNum::one() - alpha.clone()).mul_beta();
    let mut seen_a: HashSet<GoldenNum> = HashSet::new();
    let mut seen_b: HashSet<GoldenNum> = HashSet::new();
    let mut a_closed = false;
    let mut b_closed = false;
    for _ in 0..max_iter {
        if !a_closed {
            if seen_b.contains(&a) {
                return Ok(true);
            }
            a_closed = !seen_a.insert(a.clone());
        }
        if !b_closed {
            if seen_a.contains(&b) {
                return Ok(true);
            }
            b_closed = !seen_b.insert(b.clone());
        }
        if a_closed && b_closed {
            return Ok(false);
        }
        if !a_closed {
            a = step_t(alpha, &a)?;
        }
        if !b_closed {
            b = step_t(alpha, &b)?;
        }
    }
    Err(Error::NotFound { max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(k: i64) -> GoldenNum {
        GoldenNum::beta_pow(k)
    }

    #[test]
    fn matching_examples() {
        let one = GoldenNum::one();
        let a = &one + &bp(-3).scale_int(2);
        assert_eq!(matching_index(&a, 100).unwrap().matched().unwrap().m, 2);
        let a = &(&one + &bp(-3)) + &bp(-6);
        let info = matching_index(&a, 100).unwrap();
        assert_eq!(info.matched().unwrap().m, 4);
        let a = &one + &bp(-3);
        assert!(matches!(matching_index(&a, 100).unwrap(), MatchOutcome::MarkovDetected(_)));
        let a = &one + &bp(-2);
        match matching_index(&a, 100).unwrap() {
            MatchOutcome::MarkovDetected(mk) => assert_eq!(mk.period, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(matching_index(&one, 100).unwrap(), MatchOutcome::MarkovDetected(_)));
    }

    #[test]
    fn markov_case_iv_shape() {
        let a = GoldenNum::one() + bp(-3);
        match matching_index(&a, 100).unwrap() {
            MatchOutcome::MarkovDetected(mk) => {
                assert_eq!(mk.preperiod, 1);
                assert_eq!(mk.period, 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diff_states() {
        let a = GoldenNum::one() + bp(-4);
        assert_eq!(diff_state(&a, 0).unwrap(), DiffState::Alpha);
        assert_eq!(diff_state(&a, 1).unwrap(), DiffState::AlphaOverBeta);
        let a = GoldenNum::from_parts(3, 2, 0, 1);
        assert_eq!(diff_state(&a, 2).unwrap(), DiffState::Zero);
    }

    #[test]
    fn not_found_is_reported() {
        // 1 + 1/β⁴ + 1/β⁹ + … style points need long orbits; a tiny budget
        // cannot decide them.
        let a = GoldenNum::one() + bp(-9);
        assert!(matches!(matching_index(&a, 2), Err(Error::NotFound { max_iter: 2 })));
    }

    #[test]
    fn ell_at_beta() {
        let b = GoldenNum::beta();
        assert_eq!(ell(&b, Start::One, 10).unwrap(), 0);
        assert_eq!(ell_via_b(&b, Start::One, 10).unwrap(), 0);
    }

    #[test]
    fn t_meeting() {
        let a = GoldenNum::from_parts(3, 2, 0, 1);
        assert!(t_orbits_meet(&a, 100).unwrap());
        assert!(!t_orbits_meet(&(GoldenNum::one() + bp(-3)), 100).unwrap());
        assert!(!t_orbits_meet(&GoldenNum::one(), 100).unwrap());
    }
}
