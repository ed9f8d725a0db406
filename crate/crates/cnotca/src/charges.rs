//! Conserved and oscillating charges near the open boundary.
//!
//! Under open boundaries the one-step Heisenberg map sends each pure-Z
//! string to a product of pure-Z strings on sites at or below it, so the
//! left subalgebras are preserved and every boundary label has a finite
//! orbit. Discrete Fourier transforms over an orbit give formal sums that
//! the step map scales by a root of unity; their expectation values, mode
//! weighted, are constants of the motion.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf2::{BitVec, ORDER_CAP};
use crate::lattice::{BoundaryCondition, CircuitSpec};
use crate::pauli::{z_label_step, z_orbit, PauliString};
use crate::product_state::{SiteFactors, SingleQubitState};

/// A formal complex combination of pure-Z strings, keyed by label.
#[derive(Debug, Clone)]
pub struct ZSum {
    n: usize,
    terms: BTreeMap<BitVec, Complex64>,
}

/// Coefficients smaller than this are dropped as exact zeros.
const COEFF_EPS: f64 = 1e-14;

impl ZSum {
    #[must_use]
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, label: BitVec, coeff: Complex64) {
        assert_eq!(label.len(), self.n, "label length mismatch");
        use std::collections::btree_map::Entry;
        match self.terms.entry(label) {
            Entry::Vacant(slot) => {
                if coeff.norm() >= COEFF_EPS {
                    slot.insert(coeff);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().norm() < COEFF_EPS {
                    slot.remove();
                }
            }
        }
    }

    #[must_use]
    pub fn terms(&self) -> &BTreeMap<BitVec, Complex64> {
        &self.terms
    }

    /// Applies the one-step Heisenberg map to every term.
    #[must_use]
    pub fn stepped(&self, spec: &CircuitSpec) -> Self {
        let mut out = Self::empty(self.n);
        for (label, &coeff) in &self.terms {
            out.add_term(z_label_step(label, spec), coeff);
        }
        out
    }

    #[must_use]
    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = Self::empty(self.n);
        for (label, &coeff) in &self.terms {
            out.add_term(label.clone(), coeff * factor);
        }
        out
    }

    /// Term-wise equality within `tol` on coefficients.
    #[must_use]
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.n != other.n || self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms.iter().all(|(label, coeff)| {
            other
                .terms
                .get(label)
                .is_some_and(|c| (c - coeff).norm() <= tol)
        })
    }

    /// Expectation value on a product state (a finite sum of pure-Z string
    /// expectations).
    ///
    /// # Errors
    /// Propagates phase-contract failures (cannot occur for pure-Z terms).
    pub fn expectation(&self, state: &SingleQubitState) -> Result<Complex64> {
        let factors = SiteFactors::new(state);
        let mut acc = Complex64::new(0.0, 0.0);
        for (label, coeff) in &self.terms {
            let value = factors.expectation(&PauliString::from_z_label(label.clone()))?;
            acc += coeff * value;
        }
        Ok(acc)
    }
}

/// Principal `p`-th root of unity raised to `exponent`, exact for the
/// periods 1, 2, and 4 that arise near the boundary.
#[must_use]
pub fn root_of_unity_pow(p: usize, exponent: i64) -> Complex64 {
    let e = exponent.rem_euclid(p as i64) as usize;
    match p {
        1 => Complex64::new(1.0, 0.0),
        2 => Complex64::new(if e == 0 { 1.0 } else { -1.0 }, 0.0),
        4 => match e {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        },
        _ => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / p as f64),
    }
}

/// The Fourier-mode invariants of the orbit of `Z_site`: for each mode `j`
/// the sum over orbit entries `i` of `omega^{-i j} mu^i(Z_site)`, which the
/// step map multiplies by `omega^j`.
///
/// # Errors
/// Open boundaries only; orbit search is capped at [`ORDER_CAP`].
pub fn fourier_charges(site: usize, spec: &CircuitSpec) -> Result<Vec<ZSum>> {
    let orbit = z_orbit(site, spec, ORDER_CAP)?;
    let p = orbit.period();
    let mut charges = Vec::with_capacity(p);
    for mode in 0..p {
        let mut sum = ZSum::empty(spec.n());
        for (i, label) in orbit.labels().iter().enumerate() {
            let coeff = root_of_unity_pow(p, -((i * mode) as i64));
            sum.add_term(label.clone(), coeff);
        }
        charges.push(sum);
    }
    Ok(charges)
}

/// Verification output of [`oscillation_report`].
#[derive(Debug, Clone)]
pub struct OscillationReport {
    /// Orbit period of the label.
    pub period: usize,
    /// `<Z_site>(t)` for `t` in `0..=t_max`.
    pub series: Vec<f64>,
    /// True iff the series repeats with exactly the orbit period.
    pub periodic: bool,
    /// Per mode `j`, the largest drift of `omega^{-j t} <I(j)>(t)` from its
    /// initial value.
    pub mode_drift: Vec<f64>,
}

impl OscillationReport {
    /// All checks passed within `tol`.
    #[must_use]
    pub fn passes(&self, tol: f64) -> bool {
        self.periodic && self.mode_drift.iter().all(|&d| d <= tol)
    }
}

/// Computes `<Z_site>(t)` for `t <= t_max`, asserts the exact orbit period,
/// and measures the drift of each mode-weighted invariant expectation.
///
/// # Errors
/// Open boundaries only; propagates expectation failures.
pub fn oscillation_report(
    site: usize,
    state: &SingleQubitState,
    spec: &CircuitSpec,
    t_max: u64,
) -> Result<OscillationReport> {
    if spec.bc() != BoundaryCondition::Open {
        return Err(Error::PeriodicUnsupported);
    }
    let factors = SiteFactors::new(state);
    let orbit = z_orbit(site, spec, ORDER_CAP)?;
    let p = orbit.period();

    let mut series = Vec::with_capacity(t_max as usize + 1);
    let mut label = BitVec::basis(spec.n(), site);
    for t in 0..=t_max {
        series.push(factors.expectation(&PauliString::from_z_label(label.clone()))?);
        if t < t_max {
            label = z_label_step(&label, spec);
        }
    }

    let periodic = (0..series.len().saturating_sub(p))
        .all(|t| series[t + p] == series[t]);

    // <I(j)>(t) = sum_i omega^{-i j} s(t + i); weighting by omega^{-j t}
    // must freeze it.
    let mut mode_drift = vec![0.0f64; p];
    if series.len() >= p {
        let weighted = |mode: usize, t: usize| -> Complex64 {
            let inner: Complex64 = (0..p)
                .map(|i| {
                    root_of_unity_pow(p, -((i * mode) as i64)) * series[t + i]
                })
                .sum();
            root_of_unity_pow(p, -((mode * t) as i64)) * inner
        };
        for (mode, drift) in mode_drift.iter_mut().enumerate() {
            let reference = weighted(mode, 0);
            for t in 0..=(series.len() - p) {
                *drift = drift.max((weighted(mode, t) - reference).norm());
            }
        }
    }

    Ok(OscillationReport {
        period: p,
        series,
        periodic,
        mode_drift,
    })
}

/// True iff every evolved label of `Z_j` for `j < k_sites` keeps its support
/// within the first `k_sites` sites for all `t <= t_max`.
#[must_use]
pub fn left_subalgebra_closed(k_sites: usize, spec: &CircuitSpec, t_max: u64) -> bool {
    assert!(k_sites >= 1 && k_sites <= spec.n(), "k out of range");
    (0..k_sites).all(|j| {
        let mut label = BitVec::basis(spec.n(), j);
        for _ in 0..t_max {
            label = z_label_step(&label, spec);
            match label.highest_set() {
                Some(h) if h < k_sites => {}
                _ => return false,
            }
        }
        true
    })
}

/// Mirror of [`left_subalgebra_closed`] for the X strings anchored at the
/// right boundary.
#[must_use]
pub fn right_subalgebra_closed(k_sites: usize, spec: &CircuitSpec, t_max: u64) -> bool {
    assert!(k_sites >= 1 && k_sites <= spec.n(), "k out of range");
    let n = spec.n();
    (n - k_sites..n).all(|j| {
        let mut label = BitVec::basis(n, j);
        for _ in 0..t_max {
            label = crate::pauli::x_label_step(&label, spec);
            match label.lowest_set() {
                Some(l) if l >= n - k_sites => {}
                _ => return false,
            }
        }
        true
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_step;
    use approx::assert_abs_diff_eq;

    fn open(n: usize) -> CircuitSpec {
        build_step(n, BoundaryCondition::Open).unwrap()
    }

    #[test]
    fn charge_of_site_one_is_conserved_z() {
        let spec = open(8);
        let charges = fourier_charges(0, &spec).unwrap();
        assert_eq!(charges.len(), 1);
        let sum = &charges[0];
        assert_eq!(sum.terms().len(), 1);
        assert!(sum.terms().contains_key(&BitVec::basis(8, 0)));
        assert!(sum.stepped(&spec).approx_eq(sum, 0.0));
    }

    #[test]
    fn site_two_modes_are_symmetric_and_antisymmetric() {
        let spec = open(8);
        let charges = fourier_charges(1, &spec).unwrap();
        assert_eq!(charges.len(), 2);
        // Mode 0 is Z_2 + Z_1 Z_2 (1-based); the step fixes it.
        let even = &charges[0];
        assert!(even.stepped(&spec).approx_eq(even, 0.0));
        // Mode 1 flips sign each step.
        let odd = &charges[1];
        assert!(odd
            .stepped(&spec)
            .approx_eq(&odd.scaled(Complex64::new(-1.0, 0.0)), 0.0));
    }

    #[test]
    fn site_three_modes_scale_by_i_powers() {
        let spec = open(8);
        let charges = fourier_charges(2, &spec).unwrap();
        assert_eq!(charges.len(), 4, "orbit of Z_3 has period 4");
        for (mode, sum) in charges.iter().enumerate() {
            let expected = sum.scaled(root_of_unity_pow(4, mode as i64));
            assert!(
                sum.stepped(&spec).approx_eq(&expected, 0.0),
                "mode {mode} not an eigenvector of the step map"
            );
        }
    }

    #[test]
    fn rejects_periodic_boundaries() {
        let spec = build_step(8, BoundaryCondition::Periodic).unwrap();
        assert!(matches!(
            fourier_charges(2, &spec),
            Err(Error::PeriodicUnsupported)
        ));
        let state = SingleQubitState::from_angles(0.5, 0.0);
        assert!(oscillation_report(2, &state, &spec, 8).is_err());
    }

    #[test]
    fn z2_series_alternates() {
        let spec = open(8);
        let state = SingleQubitState::from_angles(0.8, 0.0);
        let (_, _, z) = state.bloch();
        let report = oscillation_report(1, &state, &spec, 9).unwrap();
        assert_eq!(report.period, 2);
        assert!(report.passes(1e-12));
        for (t, value) in report.series.iter().enumerate() {
            let expected = if t % 2 == 0 { z } else { z * z };
            assert_abs_diff_eq!(value, &expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn z1_series_constant_and_z3_period_four() {
        let spec = open(8);
        let state = SingleQubitState::from_angles(1.1, 0.4);
        let report1 = oscillation_report(0, &state, &spec, 12).unwrap();
        assert_eq!(report1.period, 1);
        assert!(report1.series.windows(2).all(|w| w[0] == w[1]));
        assert!(report1.passes(1e-12));

        let report3 = oscillation_report(2, &state, &spec, 16).unwrap();
        assert_eq!(report3.period, 4);
        assert!(report3.passes(1e-12));
    }

    #[test]
    fn subalgebra_closures() {
        let spec = open(10);
        assert!(left_subalgebra_closed(1, &spec, 32));
        assert!(left_subalgebra_closed(3, &spec, 16));
        assert!(left_subalgebra_closed(10, &spec, 16));
        assert!(right_subalgebra_closed(1, &spec, 32));
        assert!(right_subalgebra_closed(4, &spec, 16));
    }

    #[test]
    fn mode_invariants_freeze_on_random_states_vs_oracle() {
        // The invariant expectations, mode weighted, stay put; checked
        // against the dense oracle series at n = 8.
        use crate::oracle::DenseState;
        let spec = open(8);
        let states = [
            SingleQubitState::from_angles(0.4, 1.3),
            SingleQubitState::from_angles(1.9, 5.1),
            SingleQubitState::from_angles(2.4, 0.2),
        ];
        for state in states {
            for site in 0..4usize {
                let charges = fourier_charges(site, &spec).unwrap();
                let p = charges.len();
                let mut dense = DenseState::from_product(8, &state).unwrap();
                // dense expectation series of Z_site over one period window
                let mut series = Vec::new();
                for _ in 0..(3 * p + 1) {
                    let value = dense.expectation(&PauliString::z(8, site));
                    assert_abs_diff_eq!(value.im, 0.0, epsilon = 1e-12);
                    series.push(value.re);
                    dense.step(&spec);
                }
                for (mode, charge) in charges.iter().enumerate() {
                    let reference = charge.expectation(&state).unwrap();
                    for t in 0..=(series.len() - p) {
                        let inner: Complex64 = (0..p)
                            .map(|i| {
                                root_of_unity_pow(p, -((i * mode) as i64)) * series[t + i]
                            })
                            .sum();
                        let weighted = root_of_unity_pow(p, -((mode * t) as i64)) * inner;
                        assert_abs_diff_eq!(
                            (weighted - reference).norm(),
                            0.0,
                            epsilon = 1e-12
                        );
                    }
                }
            }
        }
    }
}
