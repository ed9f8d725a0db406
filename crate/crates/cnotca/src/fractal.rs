//! Rule-60 reference automaton, popcount time series, fractal-dimension and
//! equilibration-law fits, and flashback detection.
//!
//! The bidiagonal single-gate dynamics iterates the elementary cellular
//! automaton `a_i' = a_i XOR a_{i-1}` (rule 60), whose row `t` holds the
//! binomial coefficients `C(t, i)` mod 2. Row popcounts are `2^popcount(t)`
//! and their cumulative sum through `t = 2^m - 1` is exactly `3^m`, which
//! pins the Hausdorff dimension `log2(3)` of the on-bit set.
//!
//! At times `t = 2^m` the evolved labels are anomalously sparse, so a bulk
//! Bloch radius decays only polynomially there while following a stretched
//! exponential elsewhere; [`decay_fit`] extracts both laws.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::lattice::{build_step, bulk_window, BoundaryCondition, DEFAULT_MARGIN};
use crate::pauli::PauliString;
use crate::product_state::{SiteFactors, SingleQubitState};

/// True iff `C(n, k)` is odd (Lucas: every base-2 digit of `k` must fit
/// under the corresponding digit of `n`).
#[must_use]
pub const fn binomial_odd(n: u64, k: u64) -> bool {
    k & !n == 0
}

/// Row `t` of the rule-60 automaton seeded with a single bit: `t + 1` cells,
/// cell `i` on iff `C(t, i)` is odd.
#[must_use]
pub fn rule60_row(t: u64) -> BitVec {
    let len = t as usize + 1;
    let mut row = BitVec::zeros(len);
    for i in 0..len {
        if binomial_odd(t, i as u64) {
            row.set(i);
        }
    }
    row
}

/// One step of the rule-60 recursion `a_i' = a_i XOR a_{i-1}`, growing the
/// row by one cell. Used as the independent cross-check of [`rule60_row`].
#[must_use]
pub fn rule60_next(row: &BitVec) -> BitVec {
    let len = row.len() + 1;
    let mut next = BitVec::zeros(len);
    for i in 0..len {
        let above = i < row.len() && row.get(i);
        let left = i > 0 && row.get(i - 1);
        if above ^ left {
            next.set(i);
        }
    }
    next
}

/// Per-row popcounts of the rule-60 triangle for `t` in `0..=t_max`.
#[must_use]
pub fn rule60_popcounts(t_max: u64) -> Vec<u64> {
    (0..=t_max).map(|t| rule60_row(t).count_ones() as u64).collect()
}

/// Popcount time series of a label evolved by repeated application of a
/// step matrix, for `t` in `0..=t_max`.
#[derive(Debug, Clone)]
pub struct PopcountSeries {
    counts: Vec<u64>,
    cumulative: Vec<u64>,
}

impl PopcountSeries {
    #[must_use]
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let mut cumulative = Vec::with_capacity(counts.len());
        let mut acc = 0u64;
        for &c in &counts {
            acc += c;
            cumulative.push(acc);
        }
        Self { counts, cumulative }
    }

    /// On-bit count at time `t` (index 0 is the seed itself).
    #[must_use]
    pub fn count(&self, t: u64) -> u64 {
        self.counts[t as usize]
    }

    /// Total on-bits through time `t` inclusive.
    #[must_use]
    pub fn cumulative(&self, t: u64) -> u64 {
        self.cumulative[t as usize]
    }

    #[must_use]
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Evolves `seed` by `step` and records popcounts for `t` in `0..=t_max`.
#[must_use]
pub fn popcount_series(seed: &BitVec, step: &BitMatrix, t_max: u64) -> PopcountSeries {
    let mut counts = Vec::with_capacity(t_max as usize + 1);
    let mut v = seed.clone();
    counts.push(v.count_ones() as u64);
    for _ in 0..t_max {
        v = step.mul_vec(&v);
        counts.push(v.count_ones() as u64);
    }
    PopcountSeries::from_counts(counts)
}

/// State-picture popcount series in a bulk window: a single seed on the
/// even 0-based sublattice of a window sized for `t_max`, evolved by the
/// full circuit step under open boundaries.
pub fn bulk_state_series(t_max: u64, margin: usize) -> Result<PopcountSeries> {
    let window = bulk_window(t_max, margin);
    let spec = build_step(window.width, BoundaryCondition::Open)?;
    let mut v = BitVec::basis(window.width, window.center);
    let mut counts = Vec::with_capacity(t_max as usize + 1);
    counts.push(v.count_ones() as u64);
    for _ in 0..t_max {
        spec.step_state(&mut v);
        counts.push(v.count_ones() as u64);
    }
    Ok(PopcountSeries::from_counts(counts))
}

/// Least-squares regression output.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Fitted time range (inclusive).
    pub window: (u64, u64),
    /// Times removed from the window before fitting.
    pub excluded: Vec<u64>,
}

fn linear_fit(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 2 {
        return Err(Error::EmptyFitWindow);
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::EmptyFitWindow);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    // Numerically constant targets are fit exactly by the horizontal line.
    let r_squared = if syy <= 1e-20 * n {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok((slope, intercept, r_squared))
}

/// Log-log regression of cumulative popcount against time over the window;
/// the slope estimates the Hausdorff dimension of the on-bit set.
///
/// # Errors
/// [`Error::EmptyFitWindow`] if fewer than two usable points remain.
pub fn hausdorff_fit(series: &PopcountSeries, window: (u64, u64)) -> Result<FitResult> {
    let (lo, hi) = window;
    assert!(lo >= 1 && (hi as usize) < series.len(), "window outside series");
    let points: Vec<(f64, f64)> = (lo..=hi)
        .map(|t| ((t as f64).ln(), (series.cumulative(t) as f64).ln()))
        .collect();
    let (slope, intercept, r_squared) = linear_fit(&points)?;
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        window,
        excluded: Vec::new(),
    })
}

/// Powers of two up to `t_max`, the flashback times.
#[must_use]
pub fn flashback_times(t_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut t = 1u64;
    while t <= t_max {
        out.push(t);
        t *= 2;
    }
    out
}

fn near_flashback(t: u64, band: u64) -> bool {
    flashback_times(t + band)
        .into_iter()
        .any(|f| t.abs_diff(f) <= band)
}

/// Bloch radius of a bulk site over time.
#[derive(Debug, Clone)]
pub struct DecaySample {
    pub t: u64,
    pub r: f64,
    /// True when the point sits within the dyadic exclusion band and is
    /// left out of the bulk fit.
    pub excluded: bool,
}

/// Output of [`decay_fit`]: the sampled radius series, the stretched
/// exponential bulk fit, and the dyadic power-law (flashback) fit.
#[derive(Debug, Clone)]
pub struct DecayReport {
    pub samples: Vec<DecaySample>,
    /// Regression of `ln(-ln r)` on `ln t` over non-dyadic times; the slope
    /// estimates the fractal codimension `h - 1`.
    pub bulk: FitResult,
    /// Regression of `ln r(2^m)` on `m`; the slope is `ln gamma < 0`.
    pub flashback: FitResult,
}

/// Half-width of the exclusion band around each power of two for the bulk
/// fit. The dips are localized exactly at `t = 2^m`; a two-site band guards
/// their immediate neighbors.
pub const DYADIC_BAND: u64 = 2;

/// Bulk Bloch-radius series for a product state in a thermodynamic-limit
/// window, with [`DEFAULT_MARGIN`].
///
/// # Errors
/// Propagates construction and expectation failures.
pub fn bloch_radius_series(state: &SingleQubitState, t_max: u64) -> Result<Vec<f64>> {
    bloch_radius_series_with_margin(state, t_max, DEFAULT_MARGIN)
}

/// As [`bloch_radius_series`] with an explicit edge margin.
pub fn bloch_radius_series_with_margin(
    state: &SingleQubitState,
    t_max: u64,
    margin: usize,
) -> Result<Vec<f64>> {
    let window = bulk_window(t_max, margin);
    let spec = build_step(window.width, BoundaryCondition::Open)?;
    let factors = SiteFactors::new(state);
    let n = window.width;
    let mut strings = [
        PauliString::x(n, window.center),
        PauliString::y(n, window.center),
        PauliString::z(n, window.center),
    ];
    let mut series = Vec::with_capacity(t_max as usize + 1);
    for t in 0..=t_max {
        let x = factors.expectation(&strings[0])?;
        let y = factors.expectation(&strings[1])?;
        let z = factors.expectation(&strings[2])?;
        series.push((x * x + y * y + z * z).sqrt());
        if t < t_max {
            for p in &mut strings {
                p.heisenberg_step(&spec);
            }
        }
    }
    Ok(series)
}

/// Fits the equilibration laws of the single-site density matrix in the
/// thermodynamic limit.
///
/// The bulk fit regresses `ln(-ln r(t))` on `ln t` over non-dyadic times in
/// `[max(8, t_max/16), t_max]`, excluding a `±2` band around each power of
/// two. The flashback fit regresses `ln r(2^m)` on `m`.
///
/// # Errors
/// [`Error::FitRejected`] when the radius vanishes identically for `t >= 1`
/// (Y eigenstates equilibrate in one step, leaving nothing to fit), or when
/// a selected point has `r = 0` or `r >= 1`.
pub fn decay_fit(state: &SingleQubitState, t_max: u64) -> Result<DecayReport> {
    decay_fit_with_margin(state, t_max, DEFAULT_MARGIN)
}

/// As [`decay_fit`] with an explicit window margin.
///
/// # Errors
/// See [`decay_fit`].
pub fn decay_fit_with_margin(
    state: &SingleQubitState,
    t_max: u64,
    margin: usize,
) -> Result<DecayReport> {
    let series = bloch_radius_series_with_margin(state, t_max, margin)?;
    if series.iter().skip(1).all(|&r| r == 0.0) {
        return Err(Error::FitRejected(
            "bloch radius is identically zero for t >= 1 (x = z = 0 initial state)".into(),
        ));
    }

    let t_lo = (t_max / 16).max(8).min(t_max);
    let mut samples = Vec::with_capacity(t_max as usize);
    let mut bulk_points = Vec::new();
    let mut excluded = Vec::new();
    for t in 1..=t_max {
        let r = series[t as usize];
        let in_band = near_flashback(t, DYADIC_BAND);
        let in_window = t >= t_lo;
        let used = in_window && !in_band;
        samples.push(DecaySample {
            t,
            r,
            excluded: in_band,
        });
        if in_window && in_band {
            excluded.push(t);
        }
        if used {
            if r == 0.0 {
                return Err(Error::FitRejected(format!(
                    "bloch radius reached exact zero at t = {t}; the state is at or \
                     numerically indistinguishable from a Y eigenstate"
                )));
            }
            if r >= 1.0 {
                return Err(Error::FitRejected(format!(
                    "bloch radius {r} at t = {t} has not decayed"
                )));
            }
            bulk_points.push(((t as f64).ln(), (-(r.ln())).ln()));
        }
    }
    let (slope, intercept, r_squared) = linear_fit(&bulk_points)?;
    let bulk = FitResult {
        slope,
        intercept,
        r_squared,
        window: (t_lo, t_max),
        excluded,
    };

    let dyadic_points: Vec<(f64, f64)> = flashback_times(t_max)
        .into_iter()
        .enumerate()
        .map(|(m, t)| {
            let r = series[t as usize];
            if r <= 0.0 {
                return Err(Error::FitRejected(format!(
                    "bloch radius vanished at flashback time t = {t}"
                )));
            }
            Ok((m as f64, r.ln()))
        })
        .collect::<Result<_>>()?;
    let (slope, intercept, r_squared) = linear_fit(&dyadic_points)?;
    let flashback = FitResult {
        slope,
        intercept,
        r_squared,
        window: (1, 1 << (dyadic_points.len() - 1)),
        excluded: Vec::new(),
    };

    Ok(DecayReport {
        samples,
        bulk,
        flashback,
    })
}
