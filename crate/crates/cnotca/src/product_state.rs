//! Translation-invariant product initial states and exact expectation values
//! of Pauli strings on them.
//!
//! For a product state every string expectation factorizes over sites, so an
//! evolved string's expectation is `i^k` times a product of the four site
//! values `<1> = 1`, `<X> = x`, `<Z> = z`, `<XZ> = -i y`. Only the counts of
//! sites in each class matter, which the bit labels provide directly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hard failure threshold on the imaginary part of an expectation value; a
/// Hermitian string must come out exactly real, so anything above this is a
/// phase-tracking bug rather than roundoff.
const IMAG_TOL: f64 = 1e-9;

/// A normalized single-qubit state `a0 |0> + a1 |1>`, replicated over the
/// lattice as the initial product state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitState {
    a0: Complex64,
    a1: Complex64,
}

impl SingleQubitState {
    /// State from Bloch angles: amplitudes `(cos(theta/2), e^{i phi} sin(theta/2))`.
    #[must_use]
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            a0: Complex64::new((theta / 2.0).cos(), 0.0),
            a1: Complex64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    /// State from raw amplitudes.
    ///
    /// # Errors
    /// Rejects amplitudes whose norm deviates from 1 by more than 1e-9;
    /// smaller deviations are renormalized away.
    pub fn from_amplitudes(a0: Complex64, a1: Complex64) -> Result<Self> {
        let norm_sq = a0.norm_sqr() + a1.norm_sqr();
        if (norm_sq - 1.0).abs() > IMAG_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        let norm = norm_sq.sqrt();
        Ok(Self {
            a0: a0 / norm,
            a1: a1 / norm,
        })
    }

    #[must_use]
    pub const fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.a0, self.a1)
    }

    /// Bloch components `(<X>, <Y>, <Z>)`.
    #[must_use]
    pub fn bloch(&self) -> (f64, f64, f64) {
        let cross = self.a0.conj() * self.a1;
        (
            2.0 * cross.re,
            2.0 * cross.im,
            self.a0.norm_sqr() - self.a1.norm_sqr(),
        )
    }
}

/// The four per-site expectation values keyed by the (X bit, Z bit) pair of
/// a site operator.
#[derive(Debug, Clone, Copy)]
pub struct SiteFactors {
    x: f64,
    y: f64,
    z: f64,
}

impl SiteFactors {
    #[must_use]
    pub fn new(state: &SingleQubitState) -> Self {
        let (x, y, z) = state.bloch();
        Self { x, y, z }
    }

    /// Site value for the (X bit, Z bit) pair: `1`, `x`, `z`, or `-i y`.
    #[must_use]
    pub fn factor(&self, x_bit: bool, z_bit: bool) -> Complex64 {
        match (x_bit, z_bit) {
            (false, false) => Complex64::new(1.0, 0.0),
            (true, false) => Complex64::new(self.x, 0.0),
            (false, true) => Complex64::new(self.z, 0.0),
            (true, true) => Complex64::new(0.0, -self.y),
        }
    }

    /// Exact expectation of a Pauli string on the product state:
    /// `i^k * x^{#X-only} * z^{#Z-only} * (-i y)^{#XZ}`.
    ///
    /// # Errors
    /// A surviving imaginary part at least 1e-9 in magnitude means the
    /// string is not Hermitian, which signals a phase-tracking bug
    /// ([`Error::PhaseContract`]).
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        let w = p.weights();
        let magnitude = self.x.powi(w.x_only as i32)
            * self.z.powi(w.z_only as i32)
            * self.y.powi(w.both as i32);
        // i^k * (-i)^both = i^(k + 3*both)
        let quarter_turns = (p.phase() as usize + 3 * w.both) % 4;
        let value = I.powu(quarter_turns as u32) * magnitude;
        if value.im.abs() >= IMAG_TOL {
            return Err(Error::PhaseContract(value.im));
        }
        Ok(value.re)
    }
}

/// Convenience wrapper building the factor table on the fly.
///
/// # Errors
/// See [`SiteFactors::expectation`].
pub fn string_expectation(p: &PauliString, state: &SingleQubitState) -> Result<f64> {
    SiteFactors::new(state).expectation(p)
}
