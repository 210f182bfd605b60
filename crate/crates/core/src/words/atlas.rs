use std::collections::HashMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{block_len, psi, BlockDecomposition, MatchingRecord, Word01};
use crate::error::{Error, Result};
use crate::field::GoldenNum;
use crate::measures::FreqAffine;

/// All matching words up to a length bound, sorted by descending left
/// endpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atlas {
    pub max_len: usize,
    pub records: Vec<MatchingRecord>,
}

/// One exported atlas line; every field is text so that exact values
/// survive a CSV round trip unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasRow {
    pub word: String,
    pub e_word: String,
    pub m: usize,
    pub alpha_minus_exact: String,
    pub alpha_plus_exact: String,
    pub alpha_minus_dec: String,
    pub alpha_plus_dec: String,
    pub length_dec: String,
    pub n_count: i64,
    #[serde(rename = "K_d_exact")]
    pub k_d_exact: String,
    #[serde(rename = "freq_S_exact")]
    pub freq_s_exact: String,
    pub cascade_parent: String,
}

fn word_len(indices: &[u8]) -> usize {
    2 + indices.iter().map(|&i| block_len(i)).sum::<usize>()
}

/// Depth-first walk over block sequences extending `prefix`, collecting
/// every admissible one whose word fits in `max_len`.
fn walk(prefix: &mut Vec<u8>, max_len: usize, out: &mut Vec<BlockDecomposition>) {
    if word_len(prefix) > max_len {
        return;
    }
    if prefix.last() != Some(&1) {
        if let Ok(bd) = BlockDecomposition::from_indices(prefix.clone()) {
            out.push(bd);
        }
    }
    for i in 0..3u8 {
        prefix.push(i);
        walk(prefix, max_len, out);
        prefix.pop();
    }
}

/// Every word of 𝓜 with length at most `max_len`.
///
/// Block sequences are generated depth-first (i_1 = 2 once n ≥ 2), the
/// subtrees under each second block are walked in parallel, and each
/// assembled word is kept iff it has Property M.
pub fn enumerate_matching_words(max_len: usize) -> Result<Atlas> {
    if max_len < 2 {
        return Err(Error::InvalidConfig("max_len must be at least 2".into()));
    }
    let mut candidates: Vec<BlockDecomposition> = vec![BlockDecomposition::ten()];
    for single in [0u8, 2] {
        if word_len(&[single]) <= max_len {
            candidates.push(BlockDecomposition::from_indices(vec![single])?);
        }
    }
    let deeper: Vec<BlockDecomposition> = (0..3u8)
        .into_par_iter()
        .flat_map_iter(|second| {
            let mut out = Vec::new();
            walk(&mut vec![2, second], max_len, &mut out);
            out
        })
        .collect();
    candidates.extend(deeper);

    let mut records: Vec<MatchingRecord> = candidates
        .into_par_iter()
        .filter_map(|bd| {
            let w = bd.word();
            match MatchingRecord::new(&w) {
                Ok(r) => Some(Ok(r)),
                Err(Error::Construction(_)) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    records.par_sort_by(|a, b| b.alpha_minus.cmp(&a.alpha_minus));
    Ok(Atlas { max_len, records })
}

impl Atlas {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn words(&self) -> Vec<String> {
        self.records.iter().map(|r| r.d.to_string()).collect()
    }

    pub fn get(&self, d: &Word01) -> Option<&MatchingRecord> {
        self.records.iter().find(|r| &r.d == d)
    }

    /// Σ |I_d| over the atlas.
    pub fn coverage(&self) -> GoldenNum {
        self.records.iter().fold(GoldenNum::zero(), |acc, r| acc + r.length())
    }

    /// Checks that the intervals lie in (1, β] and are pairwise disjoint.
    /// Records are sorted by descending α⁻, so it suffices to compare
    /// neighbours.
    pub fn check_disjoint(&self) -> Result<()> {
        let one = GoldenNum::one();
        let beta = GoldenNum::beta();
        for r in &self.records {
            if r.alpha_minus < one || r.alpha_plus > beta || r.alpha_minus >= r.alpha_plus {
                return Err(Error::Internal(format!("interval of {} outside (1, β]", r.d)));
            }
        }
        for pair in self.records.windows(2) {
            if pair[1].alpha_plus > pair[0].alpha_minus {
                return Err(Error::Internal(format!("intervals of {} and {} overlap", pair[0].d, pair[1].d)));
            }
        }
        Ok(())
    }

    /// For each word in the atlas that is ψ of another atlas word, that
    /// preimage.
    pub fn cascade_parents(&self) -> HashMap<Word01, Word01> {
        self.records
            .iter()
            .filter(|r| r.is_unexceptional())
            .filter_map(|r| psi(&r.d).ok().map(|child| (child, r.d.clone())))
            .filter(|(child, _)| child.len() <= self.max_len)
            .collect()
    }

    pub fn rows(&self) -> Vec<AtlasRow> {
        let parents = self.cascade_parents();
        self.records
            .iter()
            .map(|r| AtlasRow {
                word: r.d.to_string(),
                e_word: r.e.to_string(),
                m: r.m,
                alpha_minus_exact: r.alpha_minus.to_string(),
                alpha_plus_exact: r.alpha_plus.to_string(),
                alpha_minus_dec: r.alpha_minus.approx_sig(15),
                alpha_plus_dec: r.alpha_plus.approx_sig(15),
                length_dec: r.length().approx_sig(15),
                n_count: r.n_count,
                k_d_exact: r.k_d.to_string(),
                freq_s_exact: FreqAffine::from_record(r).to_string(),
                cascade_parent: parents.get(&r.d).map(|p| p.to_string()).unwrap_or_default(),
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows() {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, &self.rows())?;
        Ok(())
    }
}

/// Parses an atlas CSV written by [`Atlas::write_csv`].
pub fn read_atlas_csv<R: Read>(input: R) -> Result<Vec<AtlasRow>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_atlases() {
        assert_eq!(enumerate_matching_words(2).unwrap().words(), vec!["10"]);
        assert_eq!(enumerate_matching_words(3).unwrap().words(), vec!["10"]);
        assert_eq!(enumerate_matching_words(4).unwrap().words(), vec!["10", "1001", "1010"]);
        assert!(enumerate_matching_words(1).is_err());
    }

    #[test]
    fn disjoint_and_sorted() {
        let atlas = enumerate_matching_words(12).unwrap();
        atlas.check_disjoint().unwrap();
        assert!(atlas.coverage() < GoldenNum::beta() - GoldenNum::one());
    }

    #[test]
    fn csv_round_trip() {
        let atlas = enumerate_matching_words(8).unwrap();
        let mut buf = Vec::new();
        atlas.write_csv(&mut buf).unwrap();
        let rows = read_atlas_csv(buf.as_slice()).unwrap();
        assert_eq!(rows, atlas.rows());
        for (row, rec) in rows.iter().zip(&atlas.records) {
            let back: GoldenNum = row.alpha_minus_exact.parse().unwrap();
            assert_eq!(back, rec.alpha_minus);
            assert_eq!(back.to_string(), row.alpha_minus_exact);
        }
        let header = String::from_utf8(buf).unwrap();
        assert!(header.starts_with(
            "word,e_word,m,alpha_minus_exact,alpha_plus_exact,alpha_minus_dec,alpha_plus_dec,length_dec,n_count,K_d_exact,freq_S_exact,cascade_parent"
        ));
    }

    #[test]
    fn cascade_parent_column() {
        let atlas = enumerate_matching_words(8).unwrap();
        let rows = atlas.rows();
        let child = rows.iter().find(|r| r.word == "10100001").unwrap();
        assert_eq!(child.cascade_parent, "1010");
        let root = rows.iter().find(|r| r.word == "1010").unwrap();
        assert_eq!(root.cascade_parent, "");
    }
}
