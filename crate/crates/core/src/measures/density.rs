use crate::dynamics::float as fl;
use crate::dynamics::{matching_index, step_s, MapKind, MatchOutcome, Param, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::field::{GoldenNum, BETA_F64};
use crate::words::{MatchingRecord, Word01};

use super::step::{FloatStepFunction, Indicator, StepFunction};

/// Pieces of Σ_t w_t (1_{[−x_t, −y_t)} + 1_{[y_t, x_t)}) for orbit points
/// x_t of 1 and y_t of 1−α.
fn orbit_indicators(xs: &[GoldenNum], ys: &[GoldenNum], weights: &[GoldenNum]) -> Result<Vec<Indicator>> {
    let mut out = Vec::with_capacity(2 * xs.len());
    for ((x, y), w) in xs.iter().zip(ys).zip(weights) {
        if y > x {
            return Err(Error::Construction(format!(
                "orbit of 1−α above orbit of 1 ({} > {})",
                y.approx_sig(15),
                x.approx_sig(15)
            )));
        }
        out.push(Indicator { lo: -x, hi: -y, weight: w.clone() });
        out.push(Indicator { lo: y.clone(), hi: x.clone(), weight: w.clone() });
    }
    Ok(out)
}

fn orbit(alpha: &GoldenNum, start: GoldenNum, n: usize) -> Result<Vec<GoldenNum>> {
    let mut pts = Vec::with_capacity(n);
    let mut x = start;
    for _ in 0..n {
        let next = step_s(alpha, &x)?;
        pts.push(x);
        x = next;
    }
    Ok(pts)
}

/// Exact invariant density of S_α.
///
/// For matching α the finite sum over the first m(α) orbit points is
/// normalized by 2α·v(Ξ(d)). When the critical orbits are eventually
/// periodic the series is summed in closed form over the cycle,
/// normalized by its integral and checked against the transfer operator.
pub fn density_s(alpha: &GoldenNum) -> Result<StepFunction> {
    density_s_with(alpha, DEFAULT_MAX_ITER)
}

pub fn density_s_with(alpha: &GoldenNum, max_iter: usize) -> Result<StepFunction> {
    let outcome = match matching_index(alpha, max_iter) {
        Ok(o) => o,
        Err(Error::NotFound { .. }) => {
            return Err(Error::NonMatchingExact(format!(
                "alpha {} neither matches nor closes up within {max_iter} steps",
                alpha.approx_sig(15)
            )))
        }
        Err(e) => return Err(e),
    };
    match outcome {
        MatchOutcome::Matched(info) => {
            let digits: Vec<u8> = info
                .d
                .iter()
                .map(|d| u8::try_from(d.value()).map_err(|_| Error::Internal("negative digit in matching word".into())))
                .collect::<Result<_>>()?;
            let word = Word01::new(digits)?;
            let rec = MatchingRecord::new(&word)?;
            density_s_matching(alpha, &rec)
        }
        MatchOutcome::MarkovDetected(info) => {
            let p = info.preperiod;
            let q = info.period;
            let cycle = (GoldenNum::one() - GoldenNum::beta_pow(-(q as i64))).recip()?;
            let weights: Vec<GoldenNum> = (0..p + q)
                .map(|t| {
                    let w = GoldenNum::beta_pow(-(t as i64 + 1));
                    if t < p {
                        w
                    } else {
                        w * &cycle
                    }
                })
                .collect();
            let raw = StepFunction::from_indicators(&orbit_indicators(
                &info.orbit_one,
                &info.orbit_one_minus_alpha,
                &weights,
            )?)?;
            let f = raw.scale(&raw.total().recip()?);
            if !f.is_invariant_under_s(alpha)? {
                return Err(Error::NonMatchingExact(format!(
                    "periodic sum at alpha {} is not invariant",
                    alpha.approx_sig(15)
                )));
            }
            Ok(f)
        }
    }
}

/// Density of S_α for α known to lie in I_d.
pub fn density_s_matching(alpha: &GoldenNum, rec: &MatchingRecord) -> Result<StepFunction> {
    let m = rec.m;
    let xs = orbit(alpha, GoldenNum::one(), m)?;
    let ys = orbit(alpha, GoldenNum::one() - alpha.clone(), m)?;
    let weights: Vec<GoldenNum> = (0..m).map(|t| GoldenNum::beta_pow(-(t as i64 + 1))).collect();
    let raw = StepFunction::from_indicators(&orbit_indicators(&xs, &ys, &weights)?)?;
    let c = (alpha * &rec.xi_valuation).scale_int(2);
    Ok(raw.scale(&c.recip()?))
}

/// ν(J_0) = ∫ f over [−1/β, 1/β].
pub fn measure_j0(f: &StepFunction) -> GoldenNum {
    let ib = GoldenNum::inv_beta();
    f.integrate(&-&ib, &ib)
}

/// Density of T_α from that of S_α: g(x) = f(x/β)/(β ν(J_0)).
pub fn density_t_from(f: &StepFunction) -> Result<StepFunction> {
    let scale = measure_j0(f).mul_beta().recip()?;
    Ok(f.dilate_by_beta().scale(&scale))
}

pub fn density_t(alpha: &GoldenNum) -> Result<StepFunction> {
    density_t_from(&density_s(alpha)?)
}

/// Truncated density of S_α in floating point, summing `depth` orbit
/// terms. The tail bound is the sup-norm mass of the omitted terms.
pub fn density_s_float(alpha: f64, depth: usize) -> Result<FloatStepFunction> {
    if depth == 0 {
        return Err(Error::InvalidConfig("truncation depth must be at least 1".into()));
    }
    Param::float(alpha)?;
    let mut x = 1.0;
    let mut y = 1.0 - alpha;
    let mut pieces: Vec<(f64, f64, f64)> = Vec::with_capacity(2 * depth);
    let mut w = 1.0 / BETA_F64;
    let mut matched = false;
    for _ in 0..depth {
        if (x - y).abs() < 1e-15 {
            matched = true;
            break;
        }
        if y > x {
            return Err(Error::Numeric(format!("orbit of 1−α above orbit of 1 at alpha {alpha}")));
        }
        pieces.push((-x, -y, w));
        pieces.push((y, x, w));
        x = fl::step(MapKind::S, alpha, x)?.0;
        y = fl::step(MapKind::S, alpha, y)?.0;
        w /= BETA_F64;
    }
    let mut breaks: Vec<f64> = vec![-1.0, 1.0];
    for &(lo, hi, _) in &pieces {
        breaks.push(lo);
        breaks.push(hi);
    }
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup();
    let raw: Vec<f64> = breaks
        .windows(2)
        .map(|s| {
            let mid = 0.5 * (s[0] + s[1]);
            pieces.iter().filter(|p| p.0 <= mid && mid < p.1).map(|p| p.2).sum()
        })
        .collect();
    let total: f64 = breaks.windows(2).zip(&raw).map(|(s, v)| v * (s[1] - s[0])).sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::Numeric("degenerate truncated density".into()));
    }
    // Σ_{t ≥ T} 2·β^{−(t+1)} pointwise, over the normalizer
    let tail = if matched { 0.0 } else { 2.0 * w * BETA_F64 * BETA_F64 / total };
    Ok(FloatStepFunction { breaks, values: raw.into_iter().map(|v| v / total).collect(), tail_bound: tail })
}
