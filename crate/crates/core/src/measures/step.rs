use std::io::Write;

use serde::Serialize;

use crate::dynamics::{step_s, Digit};
use crate::error::{Error, Result};
use crate::field::GoldenNum;

/// A piecewise-constant function on [−1, 1].
///
/// Pieces are half-open [x_i, x_{i+1}) except the last, which is closed.
/// Adjacent pieces always carry different values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFunction {
    breaks: Vec<GoldenNum>,
    values: Vec<GoldenNum>,
}

/// One weighted indicator 1_{[lo, hi)}.
#[derive(Debug, Clone, PartialEq)]
pub struct Indicator {
    pub lo: GoldenNum,
    pub hi: GoldenNum,
    pub weight: GoldenNum,
}

/// One CSV row of an exported step function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRow {
    pub x_left_exact: String,
    pub x_left_dec: String,
    pub value_exact: String,
    pub value_dec: String,
}

fn sorted_unique(mut xs: Vec<GoldenNum>) -> Vec<GoldenNum> {
    xs.sort();
    xs.dedup();
    xs
}

impl StepFunction {
    /// Builds Σ weight·1_{[lo,hi)} on [−1, 1]. An indicator with hi < lo is
    /// a construction error; one with hi = lo contributes nothing.
    pub fn from_indicators(pieces: &[Indicator]) -> Result<StepFunction> {
        let neg_one = GoldenNum::from_int(-1);
        let one = GoldenNum::one();
        let mut xs = vec![neg_one.clone(), one.clone()];
        for p in pieces {
            if p.hi < p.lo {
                return Err(Error::Construction(format!(
                    "reversed indicator [{}, {})",
                    p.lo.approx_sig(15),
                    p.hi.approx_sig(15)
                )));
            }
            if p.lo < neg_one || p.hi > one {
                return Err(Error::Construction("indicator outside [−1, 1]".into()));
            }
            xs.push(p.lo.clone());
            xs.push(p.hi.clone());
        }
        let breaks = sorted_unique(xs);
        let values = breaks
            .windows(2)
            .map(|w| {
                pieces.iter().filter(|p| p.lo <= w[0] && w[1] <= p.hi).fold(GoldenNum::zero(), |acc, p| acc + &p.weight)
            })
            .collect();
        Ok(StepFunction::canonical(breaks, values))
    }

    /// Constant function on [−1, 1].
    pub fn constant(c: GoldenNum) -> StepFunction {
        StepFunction { breaks: vec![GoldenNum::from_int(-1), GoldenNum::one()], values: vec![c] }
    }

    /// Builds from raw breakpoints and values, merging equal neighbours.
    pub fn from_parts(breaks: Vec<GoldenNum>, values: Vec<GoldenNum>) -> Result<StepFunction> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::Construction("need one more breakpoint than values".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Construction("breakpoints must increase strictly".into()));
        }
        if breaks[0] != GoldenNum::from_int(-1) || breaks[breaks.len() - 1] != GoldenNum::one() {
            return Err(Error::Construction("breakpoints must span [−1, 1]".into()));
        }
        Ok(StepFunction::canonical(breaks, values))
    }

    fn canonical(breaks: Vec<GoldenNum>, values: Vec<GoldenNum>) -> StepFunction {
        let mut b = vec![breaks[0].clone()];
        let mut v: Vec<GoldenNum> = Vec::new();
        for (i, val) in values.into_iter().enumerate() {
            if v.last() == Some(&val) {
                *b.last_mut().unwrap() = breaks[i + 1].clone();
            } else {
                v.push(val);
                b.push(breaks[i + 1].clone());
            }
        }
        StepFunction { breaks: b, values: v }
    }

    pub fn breakpoints(&self) -> &[GoldenNum] {
        &self.breaks
    }

    pub fn values(&self) -> &[GoldenNum] {
        &self.values
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&GoldenNum, &GoldenNum, &GoldenNum)> {
        self.breaks.windows(2).zip(&self.values).map(|(w, v)| (&w[0], &w[1], v))
    }

    /// Value at x, using the half-open convention.
    pub fn eval(&self, x: &GoldenNum) -> Result<GoldenNum> {
        if x < &self.breaks[0] || x > &self.breaks[self.breaks.len() - 1] {
            return Err(Error::Domain(format!("{} outside [−1, 1]", x.approx_sig(15))));
        }
        // first break strictly greater than x
        let idx = self.breaks.partition_point(|b| b <= x);
        let piece = idx.saturating_sub(1).min(self.values.len() - 1);
        Ok(self.values[piece].clone())
    }

    /// ∫_a^b f dλ for −1 ≤ a ≤ b ≤ 1.
    pub fn integrate(&self, a: &GoldenNum, b: &GoldenNum) -> GoldenNum {
        let mut total = GoldenNum::zero();
        for (lo, hi, v) in self.pieces() {
            let l = if lo > a { lo } else { a };
            let h = if hi < b { hi } else { b };
            if l < h {
                total += &(v * &(h - l));
            }
        }
        total
    }

    pub fn total(&self) -> GoldenNum {
        self.integrate(&GoldenNum::from_int(-1), &GoldenNum::one())
    }

    pub fn scale(&self, c: &GoldenNum) -> StepFunction {
        let values = self.values.iter().map(|v| v * c).collect();
        StepFunction::canonical(self.breaks.clone(), values)
    }

    /// x ↦ f(x/β) on [−1, 1].
    pub fn dilate_by_beta(&self) -> StepFunction {
        let one = GoldenNum::one();
        let neg_one = GoldenNum::from_int(-1);
        let mut xs = vec![neg_one, one];
        for b in &self.breaks {
            let y = b.mul_beta();
            if y.abs() < GoldenNum::one() {
                xs.push(y);
            }
        }
        let breaks = sorted_unique(xs);
        let values = breaks
            .iter()
            .take(breaks.len() - 1)
            .map(|x| self.eval(&x.div_beta()).expect("inside [−1/β, 1/β]"))
            .collect();
        StepFunction::canonical(breaks, values)
    }

    pub fn min_value(&self) -> GoldenNum {
        self.values.iter().min().cloned().unwrap_or_default()
    }

    /// f(x) = f(−x) off the breakpoints.
    pub fn is_even(&self) -> bool {
        let n = self.values.len();
        (0..n).all(|i| self.values[i] == self.values[n - 1 - i] && self.breaks[i] == -&self.breaks[n - i])
    }

    /// Checks L f = f for the transfer operator of S_α, comparing at the
    /// midpoint of every piece of a common refinement.
    pub fn is_invariant_under_s(&self, alpha: &GoldenNum) -> Result<bool> {
        let ib = GoldenNum::inv_beta();
        let one = GoldenNum::one();
        let neg_one = GoldenNum::from_int(-1);
        let mut sources: Vec<GoldenNum> = self.breaks.clone();
        sources.push(ib.clone());
        sources.push(-&ib);
        let mut xs = vec![neg_one.clone(), one.clone()];
        for s in &sources {
            xs.push(s.clone());
            for shift in [-1i64, 0, 1] {
                let y = s.mul_beta() + alpha.scale_int(shift);
                if y >= neg_one && y <= one {
                    xs.push(y);
                }
            }
        }
        let xs = sorted_unique(xs);
        for w in xs.windows(2) {
            let mid = GoldenNum::midpoint(&w[0], &w[1]);
            if self.transfer_at(alpha, &mid)? != self.eval(&mid)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// (L f)(x) = Σ_{S(y)=x} f(y)/β.
    fn transfer_at(&self, alpha: &GoldenNum, x: &GoldenNum) -> Result<GoldenNum> {
        let mut acc = GoldenNum::zero();
        for t in [Digit::Neg, Digit::Zero, Digit::Pos] {
            let y = (x + &alpha.scale_int(t.value() as i64)).div_beta();
            if y.abs() > GoldenNum::one() {
                continue;
            }
            if crate::dynamics::branch_index(&y)? == t {
                debug_assert_eq!(&step_s(alpha, &y)?, x);
                acc += &self.eval(&y)?;
            }
        }
        Ok(acc.div_beta())
    }

    pub fn rows(&self) -> Vec<StepRow> {
        self.pieces()
            .map(|(lo, _, v)| StepRow {
                x_left_exact: lo.to_string(),
                x_left_dec: lo.approx_sig(15),
                value_exact: v.to_string(),
                value_dec: v.approx_sig(15),
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in self.rows() {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            breakpoints: &'a [GoldenNum],
            values: &'a [GoldenNum],
        }
        serde_json::to_writer_pretty(out, &Doc { breakpoints: &self.breaks, values: &self.values })?;
        Ok(())
    }

    /// Polyline vertices tracing the graph, two per piece.
    pub fn polyline(&self) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(2 * self.values.len());
        for (lo, hi, v) in self.pieces() {
            let y = v.to_f64();
            pts.push((lo.to_f64(), y));
            pts.push((hi.to_f64(), y));
        }
        pts
    }
}

/// A float step function with a bound on the omitted tail mass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloatStepFunction {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
    /// Upper bound on the pointwise error from truncating the series.
    pub tail_bound: f64,
}

impl FloatStepFunction {
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.breaks.partition_point(|&b| b <= x);
        self.values[idx.saturating_sub(1).min(self.values.len() - 1)]
    }

    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        self.breaks
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| {
                let l = w[0].max(a);
                let h = w[1].min(b);
                if l < h {
                    v * (h - l)
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Mean of the function over each of `bins` equal bins of [−1, 1],
    /// i.e. the exact bin masses divided by bin width.
    pub fn bin_averages(&self, bins: usize) -> Vec<f64> {
        let w = 2.0 / bins as f64;
        (0..bins)
            .map(|i| {
                let a = -1.0 + i as f64 * w;
                self.integrate(a, a + w) / w
            })
            .collect()
    }
}

impl From<&StepFunction> for FloatStepFunction {
    fn from(f: &StepFunction) -> Self {
        FloatStepFunction {
            breaks: f.breaks.iter().map(GoldenNum::to_f64).collect(),
            values: f.values.iter().map(GoldenNum::to_f64).collect(),
            tail_bound: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GoldenNum {
        s.parse().unwrap()
    }

    #[test]
    fn indicators_and_integrals() {
        let f = StepFunction::from_indicators(&[
            Indicator { lo: g("-1/2"), hi: g("1/2"), weight: g("1") },
            Indicator { lo: g("0"), hi: g("1"), weight: g("1") },
        ])
        .unwrap();
        assert_eq!(f.breakpoints().len(), 5);
        assert_eq!(f.eval(&g("0")).unwrap(), g("2"));
        assert_eq!(f.eval(&g("1")).unwrap(), g("1"));
        assert_eq!(f.eval(&g("-1")).unwrap(), g("0"));
        assert_eq!(f.total(), g("2"));
        assert!(!f.is_even());
    }

    #[test]
    fn reversed_indicator_rejected() {
        let r = StepFunction::from_indicators(&[Indicator { lo: g("1/2"), hi: g("0"), weight: g("1") }]);
        assert!(matches!(r, Err(Error::Construction(_))));
    }

    #[test]
    fn merging_and_dilation() {
        let f =
            StepFunction::from_parts(vec![g("-1"), g("0"), g("1/2"), g("1")], vec![g("1"), g("1"), g("2")]).unwrap();
        assert_eq!(f.values().len(), 2);
        let c = StepFunction::constant(g("1/2"));
        assert_eq!(c.dilate_by_beta(), c);
        assert!(c.is_even());
        assert!(StepFunction::from_parts(vec![g("-1"), g("1")], vec![]).is_err());
    }

    #[test]
    fn lebesgue_is_invariant_for_alpha_one() {
        let half = StepFunction::constant(g("1/2"));
        // constant density is not S_1-invariant; the T_1 jump map has it
        assert!(!half.is_invariant_under_s(&GoldenNum::one()).unwrap());
    }

    #[test]
    fn csv_shape() {
        let mut buf = Vec::new();
        StepFunction::constant(g("1/2")).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x_left_exact,x_left_dec,value_exact,value_dec\n"));
        assert!(text.contains("-1/1 + 0/1*b,-1.00000000000000,1/2 + 0/1*b,0.500000000000000"));
    }
}
