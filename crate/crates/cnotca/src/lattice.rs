//! Construction of the brickwork circuit matrices.
//!
//! One full circuit step applies a layer of CNOT gates on the odd bonds
//! (sites 1-2, 3-4, ... in 1-based terms) followed by a layer on the even
//! bonds (2-3, 4-5, ...). On computational-basis labels each CNOT acts as
//! `target ^= control`, so the layers are GF(2) matrices `C1` and `C2` and
//! the step matrix is `U = C2 * C1`. Periodic boundary conditions add one
//! wrap gate from the last site to the first in the even layer.
//!
//! Sites are 0-based throughout the library; the CLI converts to 1-based
//! site numbers on output.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Lattice boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Open,
    Periodic,
}

/// Default edge margin (in sites) for [`bulk_window`].
pub const DEFAULT_MARGIN: usize = 4;

fn check_n(n: usize, bc: BoundaryCondition) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::OddSiteCount(n));
    }
    if bc == BoundaryCondition::Periodic && n < 4 {
        return Err(Error::PeriodicTooSmall(n));
    }
    Ok(())
}

/// Gate list for the odd layer: (control, target) = (0,1), (2,3), ...
/// Boundary conditions do not change this layer.
fn odd_gates(n: usize) -> Vec<(usize, usize)> {
    (0..n / 2).map(|k| (2 * k, 2 * k + 1)).collect()
}

/// Gate list for the even layer: (1,2), (3,4), ..., plus the wrap gate
/// (n-1, 0) under periodic boundary conditions.
fn even_gates(n: usize, bc: BoundaryCondition) -> Vec<(usize, usize)> {
    let mut gates: Vec<(usize, usize)> = (1..n / 2).map(|k| (2 * k - 1, 2 * k)).collect();
    if bc == BoundaryCondition::Periodic {
        gates.push((n - 1, 0));
    }
    gates
}

fn layer_matrix(n: usize, gates: &[(usize, usize)]) -> BitMatrix {
    let mut m = BitMatrix::identity(n);
    for &(control, target) in gates {
        m.set(target, control);
    }
    m
}

/// The odd-bond CNOT layer as a GF(2) matrix.
///
/// # Errors
/// Rejects odd or too-small `n`.
pub fn layer_odd(n: usize, bc: BoundaryCondition) -> Result<BitMatrix> {
    check_n(n, bc)?;
    Ok(layer_matrix(n, &odd_gates(n)))
}

/// The even-bond CNOT layer as a GF(2) matrix.
///
/// For `n = 2` with open boundaries there is no even-bond gate and the layer
/// is the identity.
///
/// # Errors
/// Rejects odd `n`, and periodic boundaries with `n < 4`.
pub fn layer_even(n: usize, bc: BoundaryCondition) -> Result<BitMatrix> {
    check_n(n, bc)?;
    Ok(layer_matrix(n, &even_gates(n, bc)))
}

/// A constructed circuit step: the layer matrices, their product, and the
/// gate lists they came from.
///
/// Values are immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct CircuitSpec {
    n: usize,
    bc: BoundaryCondition,
    c1: BitMatrix,
    c2: BitMatrix,
    u: BitMatrix,
    odd: Vec<(usize, usize)>,
    even: Vec<(usize, usize)>,
}

/// Builds the full circuit step `U = C2 * C1` and verifies that both layers
/// are involutions (which also guarantees `U` is invertible, with inverse
/// `C1 * C2`).
///
/// # Errors
/// Rejects odd `n`, and periodic boundaries with `n < 4`.
pub fn build_step(n: usize, bc: BoundaryCondition) -> Result<CircuitSpec> {
    let c1 = layer_odd(n, bc)?;
    let c2 = layer_even(n, bc)?;
    let u = c2.mul(&c1);
    debug_assert!(c1.mul(&c1).is_identity());
    debug_assert!(c2.mul(&c2).is_identity());
    Ok(CircuitSpec {
        n,
        bc,
        c1,
        c2,
        u,
        odd: odd_gates(n),
        even: even_gates(n, bc),
    })
}

impl CircuitSpec {
    #[must_use]
    pub const fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub const fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    #[must_use]
    pub fn c1(&self) -> &BitMatrix {
        &self.c1
    }

    #[must_use]
    pub fn c2(&self) -> &BitMatrix {
        &self.c2
    }

    /// The full step matrix `U = C2 * C1`.
    #[must_use]
    pub fn u(&self) -> &BitMatrix {
        &self.u
    }

    /// Odd-layer gates as (control, target) pairs, applied first in a step.
    #[must_use]
    pub fn odd_gates(&self) -> &[(usize, usize)] {
        &self.odd
    }

    /// Even-layer gates as (control, target) pairs, applied second.
    #[must_use]
    pub fn even_gates(&self) -> &[(usize, usize)] {
        &self.even
    }

    /// Advances a computational-basis label by one circuit step without
    /// materializing the matrix product: `target ^= control` per gate, odd
    /// layer first. Agrees with `u().mul_vec(bits)`.
    pub fn step_state(&self, bits: &mut BitVec) {
        assert_eq!(bits.len(), self.n, "step_state: dimension mismatch");
        for &(control, target) in &self.odd {
            if bits.get(control) {
                bits.flip(target);
            }
        }
        for &(control, target) in &self.even {
            if bits.get(control) {
                bits.flip(target);
            }
        }
    }

    /// Step matrix for Heisenberg-evolved pure-Z labels: the transpose of
    /// `U`. Support spreads toward lower site indices under open boundaries.
    #[must_use]
    pub fn z_label_matrix(&self) -> BitMatrix {
        self.u.transpose()
    }

    /// Step matrix for Heisenberg-evolved pure-X labels: `C1 * C2 = U^-1`.
    /// Support spreads toward higher site indices under open boundaries.
    #[must_use]
    pub fn x_label_matrix(&self) -> BitMatrix {
        self.c1.mul(&self.c2)
    }
}

/// Lower bidiagonal single-gate-per-step variant of the circuit: ones on the
/// diagonal and first subdiagonal. Iterating it on a basis label runs the
/// rule-60 cellular automaton, whose rows are binomial coefficients mod 2.
#[must_use]
pub fn build_sheared(n: usize) -> BitMatrix {
    let mut m = BitMatrix::identity(n);
    for i in 1..n {
        m.set(i, i - 1);
    }
    m
}

/// A finite window emulating the infinite lattice for a bulk site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BulkWindow {
    /// Window width in sites (even).
    pub width: usize,
    /// Seed/measurement site, 0-based. Rounded onto the even 0-based
    /// sublattice (a control site of the odd layer) so that bulk series are
    /// translates of the leftmost-site configuration.
    pub center: usize,
}

/// Sizes a window so that label supports evolved for `t` steps stay at least
/// `margin / 2` sites away from both edges (support grows by at most two
/// sites per step, one per layer).
#[must_use]
pub fn bulk_window(t: u64, margin: usize) -> BulkWindow {
    let width = 4 * (t as usize) + 2 * margin.max(2);
    let mut center = width / 2;
    if !center.is_multiple_of(2) {
        center += 1;
    }
    BulkWindow { width, center }
}

/// Rule-60 cell addressed by the state-picture point (site offset, time).
///
/// For a seed on the even 0-based sublattice of a large open lattice, the
/// label bit at `offset` sites right of the seed after `t` steps equals the
/// rule-60 cell at row `t + offset/2`, column `offset`. The offset map was
/// fixed by matching the first four circuit steps against the bidiagonal
/// dynamics and is frozen here; `lattice::tests` re-derives it for t < 64.
#[must_use]
pub fn shear_cell(offset: usize, t: u64) -> (u64, u64) {
    (t + (offset as u64) / 2, offset as u64)
}
