use serde::Serialize;

use super::{
    block_len, interval_endpoints, phi, property_m_check, valuation, xi, BlockDecomposition, Endpoints, SignedWord,
    Word01, BLOCKS,
};
use crate::error::{Error, Result};
use crate::field::GoldenNum;

/// A validated matching word with everything derived from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchingRecord {
    pub d: Word01,
    pub e: SignedWord,
    pub m: usize,
    pub blocks: BlockDecomposition,
    pub alpha_minus: GoldenNum,
    pub alpha_plus: GoldenNum,
    pub closed_right: bool,
    pub n_count: i64,
    pub k_d: GoldenNum,
    /// Ξ(d) over {0,1,2,3}.
    pub xi: Vec<u8>,
    pub xi_valuation: GoldenNum,
}

impl MatchingRecord {
    /// Validates Property M and derives the record. The structural
    /// identities v(d) − v(e) = 1 and α⁻ < 1/v(d) < α⁺ are re-checked.
    pub fn new(d: &Word01) -> Result<MatchingRecord> {
        let blocks = property_m_check(d).map_err(|f| match f {
            super::PropertyMFailure::NotAdmissible { position } => Error::NotAdmissible { position },
            other => Error::Construction(format!("{d} lacks Property M: {other:?}")),
        })?;
        let e = phi(&blocks);
        let vd = d.valuation();
        if &vd - &e.valuation() != GoldenNum::one() {
            return Err(Error::Internal(format!("v(d) − v(φ(d)) ≠ 1 for {d}")));
        }
        let Endpoints { alpha_minus, alpha_plus, closed_right } = interval_endpoints(d)?;
        let centre = vd.recip()?;
        if !(GoldenNum::one() < alpha_minus
            && alpha_minus < centre
            && (centre < alpha_plus || (closed_right && centre == alpha_plus))
            && alpha_plus <= GoldenNum::beta())
        {
            return Err(Error::Internal(format!("endpoint ordering fails for {d}")));
        }
        let n = n_count(d, &e);
        let k_d = k_constant(d, &e);
        let xi_word = xi(&blocks);
        let xi_valuation = valuation(xi_word.iter().map(|&x| x as i64));
        Ok(MatchingRecord {
            d: d.clone(),
            m: d.len(),
            e,
            blocks,
            alpha_minus,
            alpha_plus,
            closed_right,
            n_count: n,
            k_d,
            xi: xi_word,
            xi_valuation,
        })
    }

    pub fn endpoints(&self) -> Endpoints {
        Endpoints {
            alpha_minus: self.alpha_minus.clone(),
            alpha_plus: self.alpha_plus.clone(),
            closed_right: self.closed_right,
        }
    }

    pub fn midpoint(&self) -> GoldenNum {
        GoldenNum::midpoint(&self.alpha_minus, &self.alpha_plus)
    }

    pub fn length(&self) -> GoldenNum {
        &self.alpha_plus - &self.alpha_minus
    }

    pub fn is_unexceptional(&self) -> bool {
        !self.d.is_exceptional()
    }

    pub fn contains(&self, alpha: &GoldenNum) -> bool {
        self.endpoints().contains(alpha)
    }
}

/// 𝔫(d) = #{d_j = 1} − #{e_j = −1}.
pub fn n_count(d: &Word01, e: &SignedWord) -> i64 {
    let ones = d.digits().iter().filter(|&&x| x == 1).count() as i64;
    let negs = e.digits().iter().filter(|&&x| x == -1).count() as i64;
    ones - negs
}

/// K_d = Σ_{d_{t+1}=1} v(d_1^t) − Σ_{e_{t+1}=−1} (1 + v(e_1^t)).
pub fn k_constant(d: &Word01, e: &SignedWord) -> GoldenNum {
    let mut k = GoldenNum::zero();
    let mut vd = GoldenNum::zero();
    let mut ve = GoldenNum::zero();
    let mut scale = GoldenNum::one();
    for (&dj, &ej) in d.digits().iter().zip(e.digits()) {
        if dj == 1 {
            k += &vd;
        }
        if ej == -1 {
            k -= &(GoldenNum::one() + ve.clone());
        }
        scale = scale.div_beta();
        vd += &scale.scale_int(dj as i64);
        ve += &scale.scale_int(ej as i64);
    }
    k
}

/// K_d through the block indices, valid for d ≠ 10:
/// −1 + Σ_{i_k=2} v(1w_{i_1}⋯w_{i_k}) − Σ_{i_k=0} v(1w_{i_1}⋯w_{i_k})
/// + v(d_1⋯d_{m−3})/β + 1/β^{m−1}, the sums over k ≤ n−1.
pub fn k_constant_alternate(d: &Word01, blocks: &BlockDecomposition) -> Result<GoldenNum> {
    if blocks.exceptional {
        return Err(Error::ExceptionalWord(d.to_string()));
    }
    let m = d.len();
    let n = blocks.indices.len();
    let mut k = GoldenNum::from_int(-1);
    let mut prefix: Vec<u8> = vec![1];
    for &i in &blocks.indices[..n - 1] {
        prefix.extend_from_slice(BLOCKS[i as usize]);
        let v = valuation(prefix.iter().map(|&x| x as i64));
        match i {
            2 => k += &v,
            0 => k -= &v,
            _ => {}
        }
    }
    debug_assert_eq!(prefix.len() + block_len(blocks.indices[n - 1]) + 1, m);
    k += &d.prefix(m - 3).valuation().div_beta();
    k += &GoldenNum::beta_pow(-(m as i64 - 1));
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(s: &str) -> MatchingRecord {
        MatchingRecord::new(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(rec("10").n_count, 0);
        assert_eq!(rec("1001").n_count, 1);
        assert_eq!(rec("10100001").n_count, 1);
    }

    #[test]
    fn k_values() {
        assert_eq!(rec("10").k_d, GoldenNum::from_int(-1));
        let inv_b2 = -GoldenNum::beta_pow(-2);
        assert_eq!(rec("1001").k_d, inv_b2);
        assert_eq!(rec("1010").k_d, inv_b2);
        for w in ["1001", "1010", "10100001", "10100001001"] {
            let r = rec(w);
            assert_eq!(k_constant_alternate(&r.d, &r.blocks).unwrap(), r.k_d, "{w}");
        }
    }

    #[test]
    fn rejects_non_m_words() {
        let bad: Word01 = "1010001".parse().unwrap();
        assert!(matches!(MatchingRecord::new(&bad), Err(Error::NotAdmissible { .. })));
        let bad: Word01 = "101000101001".parse().unwrap();
        assert!(matches!(MatchingRecord::new(&bad), Err(Error::Construction(_))));
    }

    #[test]
    fn xi_valuation_matches_normalizer_sum() {
        let r = rec("1001");
        let b = |k| GoldenNum::beta_pow(k);
        assert_eq!(r.xi_valuation, b(-1) + b(-3).scale_int(2) + b(-5));
    }
}
