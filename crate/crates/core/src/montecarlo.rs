//! Floating-point Birkhoff averages and empirical densities.
//!
//! Chains use ChaCha8 seeded from the run seed, with the chain index as
//! stream number, so a run is reproducible for any thread count.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::float::{self as fl, FloatDigit};
use crate::dynamics::{MapKind, FLOAT_ALPHA_MAX};
use crate::error::{Error, Result};
use crate::measures::FloatStepFunction;

pub const DEFAULT_BURN_IN: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartPoint {
    /// Chain 0 starts here; further chains draw their start from their
    /// own stream.
    Fixed(f64),
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub map: MapKind,
    pub alpha: f64,
    pub x0: StartPoint,
    /// Total tallied iterations over all chains.
    pub iterations: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub bins: usize,
    pub chains: usize,
}

impl SimConfig {
    pub fn new(map: MapKind, alpha: f64, iterations: u64, seed: u64) -> SimConfig {
        SimConfig {
            map,
            alpha,
            x0: StartPoint::Random,
            iterations,
            burn_in: DEFAULT_BURN_IN,
            seed,
            bins: 200,
            chains: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be at least 1".into()));
        }
        if self.bins < 2 {
            return Err(Error::InvalidConfig("bins must be at least 2".into()));
        }
        if self.chains == 0 {
            return Err(Error::InvalidConfig("chains must be at least 1".into()));
        }
        if self.map != MapKind::B && !(1.0..=FLOAT_ALPHA_MAX).contains(&self.alpha) {
            return Err(Error::Domain(format!("alpha {} outside [1, β]", self.alpha)));
        }
        if let StartPoint::Fixed(x) = self.x0 {
            let (lo, hi) = domain(self.map);
            if !(lo..=hi).contains(&x) {
                return Err(Error::Domain(format!("x0 {x} outside [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// State space of each map.
pub fn domain(map: MapKind) -> (f64, f64) {
    match map {
        MapKind::B => (0.0, 1.0),
        MapKind::S | MapKind::T => (-1.0, 1.0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    /// Digit value → relative frequency among tallied steps.
    pub freq_by_digit: BTreeMap<i8, f64>,
    pub digit_counts: BTreeMap<i8, u64>,
    pub histogram: Vec<u64>,
    pub domain: (f64, f64),
    /// Steps whose point fell in the guard band around a branch boundary;
    /// they are binned but not tallied.
    pub boundary_hits: u64,
    pub wall_time: f64,
}

impl SimResult {
    pub fn freq(&self, digit: i8) -> f64 {
        self.freq_by_digit.get(&digit).copied().unwrap_or(0.0)
    }

    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &SimResult) -> bool {
        self.digit_counts == other.digit_counts
            && self.histogram == other.histogram
            && self.boundary_hits == other.boundary_hits
    }

    /// Histogram as densities over the domain, integrating to 1.
    pub fn density(&self) -> Histogram {
        let total: u64 = self.histogram.iter().sum();
        let width = (self.domain.1 - self.domain.0) / self.histogram.len() as f64;
        Histogram {
            lo: self.domain.0,
            hi: self.domain.1,
            densities: self.histogram.iter().map(|&c| c as f64 / (total as f64 * width)).collect(),
        }
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

/// A normalized histogram on [lo, hi] with equal-width bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub densities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct HistRow {
    bin_left: f64,
    bin_right: f64,
    density_estimate: f64,
}

impl Histogram {
    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.densities.len() as f64
    }

    pub fn mass(&self) -> f64 {
        self.densities.iter().sum::<f64>() * self.width()
    }

    /// Mass below and above the midpoint of the domain.
    pub fn half_masses(&self) -> (f64, f64) {
        let n = self.densities.len();
        let w = self.width();
        let left: f64 = self.densities[..n / 2].iter().sum::<f64>() * w;
        let right: f64 = self.densities[n - n / 2..].iter().sum::<f64>() * w;
        (left, right)
    }

    /// ½ Σ |p_i − q_i| against the bin masses of `f`.
    pub fn total_variation(&self, f: &FloatStepFunction) -> f64 {
        let w = self.width();
        0.5 * self
            .densities
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let a = self.lo + i as f64 * w;
                (d * w - f.integrate(a, a + w)).abs()
            })
            .sum::<f64>()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(out);
        let w = self.width();
        for (i, &d) in self.densities.iter().enumerate() {
            let a = self.lo + i as f64 * w;
            wr.serialize(HistRow { bin_left: a, bin_right: a + w, density_estimate: d })?;
        }
        wr.flush()?;
        Ok(())
    }
}

struct Tally {
    counts: [u64; 3],
    hist: Vec<u64>,
    boundary: u64,
}

fn digit_of(map: MapKind, x: f64) -> FloatDigit {
    match map {
        MapKind::B => fl::b_digit(x),
        MapKind::S | MapKind::T => fl::branch_index(x),
    }
}

fn run_chain(cfg: &SimConfig, chain: usize, steps: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chain as u64);
    let (lo, hi) = domain(cfg.map);
    let mut x = match cfg.x0 {
        StartPoint::Fixed(x0) if chain == 0 => x0,
        _ => rng.random_range(lo..hi),
    };
    for _ in 0..cfg.burn_in {
        x = fl::step(cfg.map, cfg.alpha, x)?.0;
    }
    let bins = cfg.bins;
    let scale = bins as f64 / (hi - lo);
    let mut t = Tally { counts: [0; 3], hist: vec![0; bins], boundary: 0 };
    for _ in 0..steps {
        let fd = digit_of(cfg.map, x);
        let bin = (((x - lo) * scale) as usize).min(bins - 1);
        t.hist[bin] += 1;
        if fd.ambiguous {
            t.boundary += 1;
        } else {
            t.counts[(fd.digit.value() + 1) as usize] += 1;
        }
        x = fl::step(cfg.map, cfg.alpha, x)?.0;
        if !x.is_finite() {
            return Err(Error::Numeric("non-finite iterate".into()));
        }
    }
    Ok(t)
}

/// Iterates the map along independent chains and tallies digits and
/// positions after burn-in.
pub fn simulate(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let start = Instant::now();
    let chains = cfg.chains.min(cfg.iterations as usize).max(1);
    let base = cfg.iterations / chains as u64;
    let extra = cfg.iterations % chains as u64;
    let tallies: Vec<Tally> = (0..chains)
        .into_par_iter()
        .map(|c| run_chain(cfg, c, base + u64::from((c as u64) < extra)))
        .collect::<Result<_>>()?;

    let mut counts = [0u64; 3];
    let mut hist = vec![0u64; cfg.bins];
    let mut boundary = 0;
    for t in &tallies {
        for (acc, c) in counts.iter_mut().zip(t.counts) {
            *acc += c;
        }
        for (acc, c) in hist.iter_mut().zip(&t.hist) {
            *acc += c;
        }
        boundary += t.boundary;
    }
    let tallied: u64 = counts.iter().sum();
    let mut freq_by_digit = BTreeMap::new();
    let mut digit_counts = BTreeMap::new();
    for (i, &c) in counts.iter().enumerate() {
        let d = i as i8 - 1;
        if cfg.map == MapKind::B && d == -1 {
            continue;
        }
        digit_counts.insert(d, c);
        freq_by_digit.insert(d, if tallied == 0 { 0.0 } else { c as f64 / tallied as f64 });
    }
    Ok(SimResult {
        freq_by_digit,
        digit_counts,
        histogram: hist,
        domain: domain(cfg.map),
        boundary_hits: boundary,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Normalized position histogram of a run.
pub fn empirical_density(cfg: &SimConfig) -> Result<Histogram> {
    Ok(simulate(cfg)?.density())
}
