//! The `golden` command-line program.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::dynamics::{
    self, digits_to_compact, float as fl, matching_index, orbit, write_orbit_csv, MapKind, MatchOutcome, Param,
};
use crate::error::{Error, Result};
use crate::field::GoldenNum;
use crate::measures::{
    density_s, density_s_float, density_t_from, freq_s_param, freq_t, FreqAffine, FreqNumber, FrequencyValue,
    StepFunction,
};
use crate::montecarlo::{simulate, SimConfig, StartPoint};
use crate::verify::{self, VerifyOptions};
use crate::words::{enumerate_matching_words, interval_endpoints, psi, MatchingRecord, Word01};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "golden", version, about = "Matching, densities and digit frequencies of symmetric golden maps")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "csv")]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Report failures as a JSON object on standard error.
    #[arg(long, global = true)]
    pub error_json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Digit expansion of a point.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Starting point, exact or decimal.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value = "S")]
        map: MapKind,
        #[arg(long, default_value_t = 20)]
        digits: usize,
    },
    /// Matching index and matching word.
    Match {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = dynamics::DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// All matching words up to a length.
    Atlas {
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Endpoints of the matching interval of a word.
    Interval {
        #[arg(long)]
        word: String,
    },
    /// Repeated cascade images of a word.
    Cascade {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
    /// Invariant density as a step function.
    Density {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// S for the symmetric map, T for its jump transformation.
        #[arg(long, default_value = "S")]
        map: MapKind,
        /// Terms summed for parameters without an exact density.
        #[arg(long)]
        truncation_depth: Option<usize>,
        /// Emit (x, y) polyline vertices instead of pieces.
        #[arg(long)]
        plot: bool,
        /// Emit an empirical histogram from this many iterations.
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        bins: usize,
    },
    /// Frequency of the digit 0 for S and T.
    Freq {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        truncation_depth: Option<usize>,
        /// Add Birkhoff averages from this many iterations.
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Frequencies sampled on every matching interval.
    Sweep {
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
    /// Run the acceptance checks.
    Verify {
        /// Run a single check.
        #[arg(long)]
        criterion: Option<u8>,
        #[arg(long, default_value_t = 10_000_000)]
        iterations: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses a parameter: `mid:`, `left:` or `right:` followed by a word, a
/// decimal (float mode), or an exact element of Q(β).
pub fn parse_alpha(s: &str) -> Result<Param> {
    let s = s.trim();
    if let Some((kind, w)) = s.split_once(':') {
        let word: Word01 = w.parse()?;
        let e = interval_endpoints(&word)?;
        let a = match kind {
            "mid" => e.midpoint(),
            "left" => e.alpha_minus,
            "right" => e.alpha_plus,
            _ => return Err(Error::Parse(format!("unknown interval point {kind:?}"))),
        };
        return Param::exact(a);
    }
    if is_decimal(s) {
        let x: f64 = s.parse().map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        return Param::float(x);
    }
    Param::exact(s.parse()?)
}

fn is_decimal(s: &str) -> bool {
    !s.contains('/') && !s.contains('b') && (s.contains('.') || s.contains('e') || s.contains('E'))
}

fn parse_point(s: &str) -> Result<(GoldenNum, Option<f64>)> {
    if is_decimal(s) {
        let x: f64 = s.parse().map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        Ok((GoldenNum::zero(), Some(x)))
    } else {
        Ok((s.parse()?, None))
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_rows<T: Serialize>(out: &mut dyn Write, format: Format, rows: &[T]) -> Result<()> {
    match format {
        Format::Json => write_json(out, &rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn check_density_map(map: MapKind) -> Result<()> {
    if map == MapKind::B {
        return Err(Error::InvalidConfig("densities are available for S and T".into()));
    }
    Ok(())
}

/// A digit word as 0/1 text when it has no negative digits.
fn word_text(ds: &[dynamics::Digit]) -> String {
    if ds.iter().all(|d| d.value() >= 0) {
        ds.iter().map(|d| char::from(b'0' + d.value() as u8)).collect()
    } else {
        digits_to_compact(ds)
    }
}

#[derive(Serialize)]
struct MatchRow {
    alpha_exact: String,
    alpha_dec: String,
    kind: &'static str,
    m: String,
    d: String,
    e: String,
    ell: String,
}

#[derive(Serialize)]
struct IntervalRow {
    word: String,
    interval: String,
    alpha_minus_exact: String,
    alpha_plus_exact: String,
    alpha_minus_dec: String,
    alpha_plus_dec: String,
    closed_right: bool,
}

fn interval_row(word: &Word01) -> Result<IntervalRow> {
    let e = interval_endpoints(word)?;
    let close = if e.closed_right { "]" } else { ")" };
    Ok(IntervalRow {
        word: word.to_string(),
        interval: format!("({}, {}{close}", e.alpha_minus.approx_sig(15), e.alpha_plus.approx_sig(15)),
        alpha_minus_exact: e.alpha_minus.to_string(),
        alpha_plus_exact: e.alpha_plus.to_string(),
        alpha_minus_dec: e.alpha_minus.approx_sig(15),
        alpha_plus_dec: e.alpha_plus.approx_sig(15),
        closed_right: e.closed_right,
    })
}

#[derive(Serialize)]
struct FreqRow {
    alpha: String,
    method: String,
    freq_s_exact: String,
    freq_s_dec: String,
    freq_t_exact: String,
    freq_t_dec: String,
    tail_bound: String,
}

fn freq_row(alpha: &str, fs: &FrequencyValue, ft: &FrequencyValue) -> FreqRow {
    let exact = |v: &FreqNumber| v.as_exact().map(|g| g.to_string()).unwrap_or_default();
    let dec = |v: &FreqNumber| match v {
        FreqNumber::Exact(g) => g.approx_sig(15),
        FreqNumber::Float(x) => format!("{x:.15}"),
    };
    FreqRow {
        alpha: alpha.to_string(),
        method: serde_json::to_value(fs.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        freq_s_exact: exact(&fs.value),
        freq_s_dec: dec(&fs.value),
        freq_t_exact: exact(&ft.value),
        freq_t_dec: dec(&ft.value),
        tail_bound: fs.tail_bound.map(|t| format!("{t:.3e}")).unwrap_or_default(),
    }
}

#[derive(Serialize)]
struct SweepRow {
    word: String,
    n_count: i64,
    alpha_exact: String,
    alpha_dec: String,
    freq_s_exact: String,
    freq_s_dec: String,
    freq_t_exact: String,
    freq_t_dec: String,
}

/// k exact points strictly inside I_d, evenly spaced.
fn sample_points(r: &MatchingRecord, k: usize) -> Vec<GoldenNum> {
    let len = r.length();
    (1..=k).map(|i| &r.alpha_minus + &len.scale(&crate::field::rat(i as i64, k as i64 + 1))).collect()
}

fn sweep_rows(max_len: usize, points: usize) -> Result<Vec<SweepRow>> {
    if points == 0 {
        return Err(Error::InvalidConfig("points must be at least 1".into()));
    }
    let atlas = enumerate_matching_words(max_len)?;
    let rows: Vec<Vec<SweepRow>> = atlas
        .records
        .par_iter()
        .map(|r| {
            let aff = FreqAffine::from_record(r);
            sample_points(r, points)
                .into_iter()
                .map(|a| {
                    let fs = aff.eval(&a)?;
                    let ft = GoldenNum::from_int(2) - fs.recip()?;
                    Ok(SweepRow {
                        word: r.d.to_string(),
                        n_count: r.n_count,
                        alpha_exact: a.to_string(),
                        alpha_dec: a.approx_sig(15),
                        freq_s_exact: fs.to_string(),
                        freq_s_dec: fs.approx_sig(15),
                        freq_t_exact: ft.to_string(),
                        freq_t_dec: ft.approx_sig(15),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn emit_step(out: &mut dyn Write, format: Format, f: &StepFunction, plot: bool) -> Result<()> {
    if plot {
        #[derive(Serialize)]
        struct Pt {
            x: f64,
            y: f64,
        }
        let pts: Vec<Pt> = f.polyline().into_iter().map(|(x, y)| Pt { x, y }).collect();
        return write_rows(out, format, &pts);
    }
    match format {
        Format::Csv => f.write_csv(&mut *out),
        Format::Json => {
            f.write_json(&mut *out)?;
            writeln!(out)?;
            Ok(())
        }
    }
}

/// Runs one parsed command; returns the process exit status.
pub fn execute(cli: &Cli) -> Result<i32> {
    let mut out = open_output(&cli.output)?;
    let out: &mut dyn Write = &mut *out;
    let format = cli.format;
    match &cli.command {
        Command::Expand { alpha, point, map, digits } => {
            let p = parse_alpha(alpha)?;
            let (x, xf) = parse_point(point)?;
            match (&p, xf) {
                (Param::Exact(a), None) => {
                    let rows = orbit(*map, a, &x, *digits)?;
                    let compact = digits_to_compact(&rows.iter().map(|r| r.digit).collect::<Vec<_>>());
                    match format {
                        Format::Csv => write_orbit_csv(&rows, &mut *out)?,
                        Format::Json => write_json(
                            out,
                            &json!({"alpha": a, "map": map.to_string(), "point": x, "digits": compact, "orbit": rows.iter().map(|r| json!({"j": r.j, "point": r.point, "digit": r.digit.value()})).collect::<Vec<_>>()}),
                        )?,
                    }
                }
                _ => {
                    let a = p.to_f64();
                    let x0 = xf.unwrap_or_else(|| x.to_f64());
                    let ds = fl::expansion(*map, a, x0, *digits)?;
                    #[derive(Serialize)]
                    struct Row {
                        j: usize,
                        digit: i8,
                    }
                    match format {
                        Format::Csv => {
                            let rows: Vec<Row> =
                                ds.iter().enumerate().map(|(j, d)| Row { j, digit: d.value() }).collect();
                            write_rows(out, format, &rows)?
                        }
                        Format::Json => write_json(
                            out,
                            &json!({"alpha": a, "map": map.to_string(), "point": x0, "digits": digits_to_compact(&ds)}),
                        )?,
                    }
                }
            }
        }
        Command::Match { alpha, max_iter } => {
            let p = parse_alpha(alpha)?;
            match p {
                Param::Exact(a) => {
                    let outcome = matching_index(&a, *max_iter)?;
                    match format {
                        Format::Json => write_json(out, &json!({"alpha": a, "outcome": outcome}))?,
                        Format::Csv => {
                            let row = match &outcome {
                                MatchOutcome::Matched(i) => MatchRow {
                                    alpha_exact: a.to_string(),
                                    alpha_dec: a.approx_sig(15),
                                    kind: "matched",
                                    m: i.m.to_string(),
                                    d: word_text(&i.d),
                                    e: digits_to_compact(&i.e),
                                    ell: i.ell.map(|l| l.to_string()).unwrap_or_default(),
                                },
                                MatchOutcome::MarkovDetected(i) => MatchRow {
                                    alpha_exact: a.to_string(),
                                    alpha_dec: a.approx_sig(15),
                                    kind: "markov",
                                    m: String::new(),
                                    d: word_text(&i.d),
                                    e: digits_to_compact(&i.e),
                                    ell: String::new(),
                                },
                            };
                            write_rows(out, format, &[row])?
                        }
                    }
                }
                Param::Float(a) => {
                    let m = fl::estimate_matching_index(a, *max_iter, 1e-9)?;
                    let row = MatchRow {
                        alpha_exact: String::new(),
                        alpha_dec: format!("{a}"),
                        kind: "estimate",
                        m: m.map(|m| m.to_string()).unwrap_or_default(),
                        d: String::new(),
                        e: String::new(),
                        ell: String::new(),
                    };
                    write_rows(out, format, &[row])?
                }
            }
        }
        Command::Atlas { max_len } => {
            let atlas = enumerate_matching_words(*max_len)?;
            match format {
                Format::Csv => atlas.write_csv(&mut *out)?,
                Format::Json => {
                    atlas.write_json(&mut *out)?;
                    writeln!(out)?;
                }
            }
        }
        Command::Interval { word } => {
            let w: Word01 = word.parse()?;
            write_rows(out, format, &[interval_row(&w)?])?;
        }
        Command::Cascade { word, steps } => {
            let mut w: Word01 = word.parse()?;
            MatchingRecord::new(&w)?;
            let mut rows = vec![interval_row(&w)?];
            for _ in 0..*steps {
                w = psi(&w)?;
                rows.push(interval_row(&w)?);
            }
            write_rows(out, format, &rows)?;
        }
        Command::Density { alpha, map, truncation_depth, plot, iterations, seed, bins } => {
            check_density_map(*map)?;
            let p = parse_alpha(alpha)?;
            if let Some(n) = iterations {
                let cfg =
                    SimConfig { bins: *bins, x0: StartPoint::Random, ..SimConfig::new(*map, p.to_f64(), *n, *seed) };
                let hist = simulate(&cfg)?.density();
                match format {
                    Format::Csv => hist.write_csv(&mut *out)?,
                    Format::Json => write_json(out, &hist)?,
                }
                return Ok(0);
            }
            let exact = match &p {
                Param::Exact(a) => match density_s(a) {
                    Ok(f) => Some(f),
                    Err(Error::NonMatchingExact(_)) if truncation_depth.is_some() => None,
                    Err(e) => return Err(e),
                },
                Param::Float(_) => None,
            };
            match exact {
                Some(f) => {
                    let f = if *map == MapKind::T { density_t_from(&f)? } else { f };
                    emit_step(out, format, &f, *plot)?;
                }
                None => {
                    let depth = truncation_depth
                        .ok_or_else(|| Error::NonMatchingExact("float parameter needs --truncation-depth".into()))?;
                    if *map == MapKind::T {
                        return Err(Error::InvalidConfig("truncated densities are available for S only".into()));
                    }
                    let f = density_s_float(p.to_f64(), depth)?;
                    #[derive(Serialize)]
                    struct Row {
                        x_left: f64,
                        value: f64,
                    }
                    match format {
                        Format::Json => write_json(out, &f)?,
                        Format::Csv => {
                            let rows: Vec<Row> =
                                f.breaks.iter().zip(&f.values).map(|(&x_left, &value)| Row { x_left, value }).collect();
                            write_rows(out, format, &rows)?;
                        }
                    }
                }
            }
        }
        Command::Freq { alpha, truncation_depth, iterations, seed } => {
            let p = parse_alpha(alpha)?;
            let mut rows = Vec::new();
            match freq_s_param(&p, *truncation_depth) {
                Ok(fs) => {
                    let ft = freq_t(&fs)?;
                    rows.push(freq_row(alpha, &fs, &ft));
                }
                Err(e) if iterations.is_none() => return Err(e),
                Err(_) => {}
            }
            if let Some(n) = iterations {
                let a = p.to_f64();
                let s = simulate(&SimConfig::new(MapKind::S, a, *n, *seed))?;
                let t = simulate(&SimConfig::new(MapKind::T, a, *n, *seed))?;
                let mk = |x: f64| FrequencyValue {
                    value: FreqNumber::Float(x),
                    method: crate::measures::FreqMethod::Empirical,
                    tail_bound: None,
                };
                rows.push(freq_row(alpha, &mk(s.freq(0)), &mk(t.freq(0))));
            }
            write_rows(out, format, &rows)?;
        }
        Command::Sweep { max_len, points } => {
            write_rows(out, format, &sweep_rows(*max_len, *points)?)?;
        }
        Command::Verify { criterion, iterations, seed } => {
            let opts = VerifyOptions { mc_iterations: *iterations, seed: *seed };
            let reports = match criterion {
                Some(id) => vec![verify::run(*id, &opts)?],
                None => verify::run_all(&opts),
            };
            match format {
                Format::Json => write_json(out, &reports)?,
                Format::Csv => {
                    for r in &reports {
                        writeln!(out, "{r}")?;
                    }
                }
            }
            out.flush()?;
            return Ok(if reports.iter().all(|r| r.passed) { 0 } else { 1 });
        }
    }
    out.flush()?;
    Ok(0)
}

/// Caps the worker pool from `GOLDEN_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("GOLDEN_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("GOLDEN_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Error::InvalidConfig("GOLDEN_THREADS must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Internal(e.to_string()))?;
    }
    Ok(())
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|_| execute(&cli));
    match result {
        Ok(code) => code,
        Err(e) => {
            if cli.error_json {
                eprintln!("{}", json!({"error": {"kind": e.kind(), "message": e.to_string()}}));
            } else {
                eprintln!("error: {e}");
            }
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_notations() {
        assert_eq!(parse_alpha("3/2").unwrap(), Param::Exact("3/2".parse().unwrap()));
        assert!(matches!(parse_alpha("1.45").unwrap(), Param::Float(_)));
        let mid = parse_alpha("mid:1001").unwrap();
        let e = interval_endpoints(&"1001".parse().unwrap()).unwrap();
        assert_eq!(mid, Param::Exact(e.midpoint()));
        assert_eq!(parse_alpha("right:10").unwrap(), Param::Exact(GoldenNum::beta()));
        assert!(parse_alpha("top:10").is_err());
        assert!(parse_alpha("2").is_err());
    }

    #[test]
    fn sweep_is_monotone_per_interval() {
        let rows = sweep_rows(10, 4).unwrap();
        for chunk in rows.chunk_by(|a, b| a.word == b.word) {
            let vals: Vec<GoldenNum> = chunk.iter().map(|r| r.freq_s_exact.parse().unwrap()).collect();
            let trend = (chunk[0].n_count - 1).signum();
            for w in vals.windows(2) {
                // 𝔣_S = c0 − (𝔫−1)c/α rises in α when 𝔫 > 1
                match trend {
                    0 => assert_eq!(w[0], w[1]),
                    1 => assert!(w[0] < w[1], "{}", chunk[0].word),
                    _ => assert!(w[0] > w[1], "{}", chunk[0].word),
                }
            }
        }
    }
}
