use std::fmt;

use serde::Serialize;

use crate::dynamics::{matching_index, MatchOutcome, Param, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::field::GoldenNum;
use crate::words::{MatchingRecord, Word01};

use super::density::{density_s, density_s_float, measure_j0};

/// 𝔣_S on one matching interval, written as c0 + c1/α.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreqAffine {
    pub constant: GoldenNum,
    pub coef_inv_alpha: GoldenNum,
}

impl FreqAffine {
    pub fn from_record(rec: &MatchingRecord) -> FreqAffine {
        let denom = rec.xi_valuation.mul_beta().recip().expect("v(Ξ) > 0");
        FreqAffine {
            constant: GoldenNum::one() + &rec.k_d * &denom,
            coef_inv_alpha: -(denom.scale_int(rec.n_count - 1)),
        }
    }

    pub fn eval(&self, alpha: &GoldenNum) -> Result<GoldenNum> {
        Ok(&self.constant + &self.coef_inv_alpha.checked_div(alpha)?)
    }

    pub fn eval_f64(&self, alpha: f64) -> f64 {
        self.constant.to_f64() + self.coef_inv_alpha.to_f64() / alpha
    }

    /// Sign of the derivative in α: 1 increasing, 0 constant, −1 decreasing.
    pub fn trend(&self) -> i8 {
        -self.coef_inv_alpha.signum()
    }
}

impl fmt::Display for FreqAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coef_inv_alpha.is_zero() {
            write!(f, "{}", self.constant)
        } else {
            write!(f, "({}) + ({})/alpha", self.constant, self.coef_inv_alpha)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FreqMethod {
    ClosedForm,
    Integrated,
    Empirical,
    LimitNumeric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum FreqNumber {
    Exact(GoldenNum),
    Float(f64),
}

impl FreqNumber {
    pub fn to_f64(&self) -> f64 {
        match self {
            FreqNumber::Exact(g) => g.to_f64(),
            FreqNumber::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&GoldenNum> {
        match self {
            FreqNumber::Exact(g) => Some(g),
            FreqNumber::Float(_) => None,
        }
    }
}

impl fmt::Display for FreqNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreqNumber::Exact(g) => write!(f, "{g}"),
            FreqNumber::Float(x) => write!(f, "{x:.15}"),
        }
    }
}

/// A digit-0 frequency together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyValue {
    pub value: FreqNumber,
    pub method: FreqMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
}

impl FrequencyValue {
    fn exact(value: GoldenNum, method: FreqMethod) -> FrequencyValue {
        FrequencyValue { value: FreqNumber::Exact(value), method, tail_bound: None }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// (5+√5)/10, the frequency of 0 for S_1 and for greedy β-expansions.
pub fn freq_s_at_one() -> GoldenNum {
    GoldenNum::from_parts(2, 5, 1, 5)
}

/// Closed-form 𝔣_S(α) for α ∈ I_d.
pub fn freq_s_record(rec: &MatchingRecord, alpha: &GoldenNum) -> Result<FrequencyValue> {
    if !rec.contains(alpha) {
        return Err(Error::Domain(format!("alpha {} not in the interval of {}", alpha.approx_sig(15), rec.d)));
    }
    Ok(FrequencyValue::exact(FreqAffine::from_record(rec).eval(alpha)?, FreqMethod::ClosedForm))
}

/// Exact 𝔣_S(α): closed form at α = 1 and at matching α, otherwise the
/// integral of the exact density when the critical orbits close up.
pub fn freq_s(alpha: &GoldenNum) -> Result<FrequencyValue> {
    if alpha == &GoldenNum::one() {
        return Ok(FrequencyValue::exact(freq_s_at_one(), FreqMethod::ClosedForm));
    }
    match matching_index(alpha, DEFAULT_MAX_ITER) {
        Ok(MatchOutcome::Matched(info)) => {
            let digits: Vec<u8> = info.d.iter().map(|d| d.value() as u8).collect();
            let rec = MatchingRecord::new(&Word01::new(digits)?)?;
            freq_s_record(&rec, alpha)
        }
        Ok(MatchOutcome::MarkovDetected(_)) => freq_s_integrated(alpha),
        Err(Error::NotFound { max_iter }) => Err(Error::NonMatchingExact(format!(
            "alpha {} does not match within {max_iter} steps",
            alpha.approx_sig(15)
        ))),
        Err(e) => Err(e),
    }
}

/// ν_α(J_0) from the exact density.
pub fn freq_s_integrated(alpha: &GoldenNum) -> Result<FrequencyValue> {
    Ok(FrequencyValue::exact(measure_j0(&density_s(alpha)?), FreqMethod::Integrated))
}

/// ν_α(J_0) from a truncated float density, with the pointwise tail bound
/// scaled to the length of J_0.
pub fn freq_s_limit_numeric(alpha: f64, depth: usize) -> Result<FrequencyValue> {
    let f = density_s_float(alpha, depth)?;
    let ib = crate::dynamics::float::INV_BETA;
    Ok(FrequencyValue {
        value: FreqNumber::Float(f.integrate(-ib, ib)),
        method: FreqMethod::LimitNumeric,
        tail_bound: Some(2.0 * ib * f.tail_bound),
    })
}

/// 𝔣_S for either kind of parameter; float parameters require a
/// truncation depth.
pub fn freq_s_param(p: &Param, depth: Option<usize>) -> Result<FrequencyValue> {
    match (p, depth) {
        (Param::Exact(a), None) => freq_s(a),
        (Param::Exact(a), Some(d)) => match freq_s(a) {
            Err(Error::NonMatchingExact(_)) => freq_s_limit_numeric(a.to_f64(), d),
            other => other,
        },
        (Param::Float(a), Some(d)) => freq_s_limit_numeric(*a, d),
        (Param::Float(_), None) => Err(Error::NonMatchingExact("float parameter needs a truncation depth".into())),
    }
}

/// 𝔣_T = 2 − 1/𝔣_S, keeping the method tag.
pub fn freq_t(fs: &FrequencyValue) -> Result<FrequencyValue> {
    let value = match &fs.value {
        FreqNumber::Exact(g) => FreqNumber::Exact(GoldenNum::from_int(2) - g.recip()?),
        FreqNumber::Float(x) => {
            if *x == 0.0 {
                return Err(Error::DivisionByZero);
            }
            FreqNumber::Float(2.0 - 1.0 / x)
        }
    };
    // d(2 − 1/x) = dx/x², and 𝔣_S ≥ 1/2
    let tail_bound = fs.tail_bound.map(|t| {
        let x = fs.to_f64() - t;
        t / (x * x).max(0.25)
    });
    Ok(FrequencyValue { value, method: fs.method, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GoldenNum {
        s.parse().unwrap()
    }

    #[test]
    fn boundary_values() {
        let one = freq_s(&GoldenNum::one()).unwrap();
        assert_eq!(one.value, FreqNumber::Exact(freq_s_at_one()));
        assert_eq!(freq_t(&one).unwrap().value, FreqNumber::Exact(GoldenNum::inv_beta()));
        let at_beta = freq_s(&GoldenNum::beta()).unwrap();
        assert_eq!(at_beta.method, FreqMethod::ClosedForm);
        assert_eq!(at_beta.value, FreqNumber::Exact(freq_s_at_one()));
    }

    #[test]
    fn plateau_example() {
        let rec = MatchingRecord::new(&"1001".parse().unwrap()).unwrap();
        let fs = freq_s_record(&rec, &rec.midpoint()).unwrap();
        assert_eq!(fs.value, FreqNumber::Exact(g("4/5")));
        assert_eq!(freq_t(&fs).unwrap().value, FreqNumber::Exact(g("3/4")));
        assert_eq!(FreqAffine::from_record(&rec).to_string(), "4/5 + 0/1*b");
        assert!(freq_s_record(&rec, &GoldenNum::beta()).is_err());
    }

    #[test]
    fn integrated_agrees_with_closed_form() {
        let alpha = g("3/2");
        let closed = freq_s(&alpha).unwrap();
        let integ = freq_s_integrated(&alpha).unwrap();
        assert_eq!(closed.value, integ.value);
        let num = freq_s_limit_numeric(1.5, 60).unwrap();
        assert!((num.to_f64() - closed.to_f64()).abs() < 1e-9);
    }

    #[test]
    fn markov_frequency_is_continuous_limit() {
        // 1 + 1/β² is the right end of I_1001, where 𝔣_S = 4/5
        let alpha = GoldenNum::one() + GoldenNum::beta_pow(-2);
        let fs = freq_s(&alpha).unwrap();
        assert_eq!(fs.method, FreqMethod::Integrated);
        assert_eq!(fs.value, FreqNumber::Exact(g("4/5")));
    }

    #[test]
    fn float_param_needs_depth() {
        let p = Param::float(1.45).unwrap();
        assert!(matches!(freq_s_param(&p, None), Err(Error::NonMatchingExact(_))));
        let v = freq_s_param(&p, Some(50)).unwrap();
        assert_eq!(v.method, FreqMethod::LimitNumeric);
        assert!(v.tail_bound.unwrap() < 1e-8);
    }
}
