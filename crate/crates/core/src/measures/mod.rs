//! Invariant densities of S_α and T_α as exact step functions, and the
//! digit-0 frequency functions.

mod density;
mod freq;
mod step;

pub use density::{
    density_s, density_s_float, density_s_matching, density_s_with, density_t, density_t_from, measure_j0,
};
pub use freq::{
    freq_s, freq_s_at_one, freq_s_integrated, freq_s_limit_numeric, freq_s_param, freq_s_record, freq_t, FreqAffine,
    FreqMethod, FreqNumber, FrequencyValue,
};
pub use step::{FloatStepFunction, Indicator, StepFunction, StepRow};
