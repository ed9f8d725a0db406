//! Brute-force dense state-vector simulator used as ground truth for the
//! GF(2) fast paths.
//!
//! Capped at 12 qubits; this is a test fixture, not a performance path.
//! Gates are applied by index masking without materializing matrices,
//! except in [`heisenberg_reference`], which builds explicit 2^n x 2^n
//! matrices (capped at 8 qubits) to certify the sign handling of the Pauli
//! module.

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::lattice::CircuitSpec;
use crate::pauli::PauliString;
use crate::product_state::SingleQubitState;

/// Largest state-vector register the oracle accepts.
pub const MAX_QUBITS: usize = 12;
/// Largest register for explicit-matrix conjugation.
pub const MAX_MATRIX_QUBITS: usize = 8;

/// A dense `n`-qubit state. Site 0 is the most significant amplitude-index
/// bit, matching the label convention of the GF(2) picture.
#[derive(Debug, Clone)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n == 0 || n > cap {
        return Err(Error::OracleTooLarge { n, cap });
    }
    Ok(())
}

impl DenseState {
    /// Computational-basis state from a bit label.
    ///
    /// # Errors
    /// Rejects registers larger than [`MAX_QUBITS`].
    pub fn from_label(label: &BitVec) -> Result<Self> {
        let n = label.len();
        check_cap(n, MAX_QUBITS)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        let mut index = 0usize;
        for site in label.ones() {
            index |= 1 << (n - 1 - site);
        }
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Product state `|psi_0>^(x) n`.
    ///
    /// # Errors
    /// Rejects registers larger than [`MAX_QUBITS`].
    pub fn from_product(n: usize, state: &SingleQubitState) -> Result<Self> {
        check_cap(n, MAX_QUBITS)?;
        let (a0, a1) = state.amplitudes();
        let amps = (0..1usize << n)
            .map(|index| {
                (0..n)
                    .map(|site| {
                        if index >> (n - 1 - site) & 1 == 1 {
                            a1
                        } else {
                            a0
                        }
                    })
                    .product()
            })
            .collect();
        Ok(Self { n, amps })
    }

    #[must_use]
    pub const fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[must_use]
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    fn mask(&self, site: usize) -> usize {
        assert!(site < self.n, "site {site} out of range (n={})", self.n);
        1 << (self.n - 1 - site)
    }

    /// Applies a CNOT: swaps the amplitude pairs whose control bit is set.
    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        assert_ne!(control, target, "control and target must differ");
        let cm = self.mask(control);
        let tm = self.mask(target);
        for index in 0..self.amps.len() {
            if index & cm != 0 && index & tm == 0 {
                self.amps.swap(index, index | tm);
            }
        }
    }

    /// One circuit step: the odd layer's gates, then the even layer's.
    pub fn step(&mut self, spec: &CircuitSpec) {
        assert_eq!(self.n, spec.n(), "step: size mismatch");
        for &(control, target) in spec.odd_gates() {
            self.apply_cnot(control, target);
        }
        for &(control, target) in spec.even_gates() {
            self.apply_cnot(control, target);
        }
    }

    /// Evolves by `t` circuit steps.
    pub fn evolve(&mut self, spec: &CircuitSpec, t: u64) {
        for _ in 0..t {
            self.step(spec);
        }
    }

    /// Applies a Pauli string: `P |x> = i^k (-1)^{|c AND x|} |x XOR b>`.
    #[must_use]
    pub fn apply_string(&self, p: &PauliString) -> Self {
        assert_eq!(self.n, p.n(), "apply_string: size mismatch");
        let b_mask = self.label_mask(p.x_bits());
        let c_mask = self.label_mask(p.z_bits());
        let phase = Complex64::new(0.0, 1.0).powu(u32::from(p.phase()));
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (index, amp) in self.amps.iter().enumerate() {
            let sign = if (index & c_mask).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            amps[index ^ b_mask] = phase * sign * amp;
        }
        Self { n: self.n, amps }
    }

    /// Expectation value `<psi| P |psi>`.
    #[must_use]
    pub fn expectation(&self, p: &PauliString) -> Complex64 {
        let applied = self.apply_string(p);
        self.amps
            .iter()
            .zip(&applied.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn label_mask(&self, label: &BitVec) -> usize {
        let mut mask = 0usize;
        for site in label.ones() {
            mask |= self.mask(site);
        }
        mask
    }

    /// Partial trace onto one site or two adjacent sites.
    ///
    /// # Errors
    /// Rejects empty site lists, more than two sites, and non-adjacent
    /// pairs; propagates density-matrix validation.
    pub fn reduced_density(&self, sites: &[usize]) -> Result<DensityMatrix> {
        let dim = match sites {
            [site] => {
                assert!(*site < self.n, "site out of range");
                2
            }
            [a, b] => {
                assert!(*a < self.n && *b < self.n, "site out of range");
                assert_eq!(*b, *a + 1, "pair must be adjacent and ascending");
                4
            }
            _ => panic!("reduced_density takes one site or two adjacent sites"),
        };
        let masks: Vec<usize> = sites.iter().map(|&s| self.mask(s)).collect();
        let extract = |index: usize| -> usize {
            masks
                .iter()
                .fold(0, |acc, &m| (acc << 1) | usize::from(index & m != 0))
        };
        let insert = |index: usize, local: usize| -> usize {
            let mut out = index;
            for (pos, &m) in masks.iter().enumerate() {
                if local >> (masks.len() - 1 - pos) & 1 == 1 {
                    out |= m;
                } else {
                    out &= !m;
                }
            }
            out
        };
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (index, amp) in self.amps.iter().enumerate() {
            let row = extract(index);
            for col in 0..dim {
                let other = insert(index, col);
                data[row * dim + col] += amp * self.amps[other].conj();
            }
        }
        DensityMatrix::new(dim, data)
    }
}

/// A dense complex matrix, used only for reference conjugation.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    #[must_use]
    pub const fn dim(&self) -> usize {
        self.dim
    }

    #[must_use]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Largest entrywise deviation from another matrix.
    #[must_use]
    pub fn max_deviation(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Explicit matrix of a Pauli string (register capped at [`MAX_MATRIX_QUBITS`]).
///
/// # Errors
/// Rejects oversized registers.
pub fn string_matrix(p: &PauliString) -> Result<DenseMatrix> {
    check_cap(p.n(), MAX_MATRIX_QUBITS)?;
    let n = p.n();
    let dim = 1usize << n;
    let mask = |label: &BitVec| -> usize {
        label.ones().map(|site| 1 << (n - 1 - site)).sum()
    };
    let b_mask = mask(p.x_bits());
    let c_mask = mask(p.z_bits());
    let phase = Complex64::new(0.0, 1.0).powu(u32::from(p.phase()));
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let sign = if (col & c_mask).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        data[(col ^ b_mask) * dim + col] = phase * sign;
    }
    Ok(DenseMatrix { dim, data })
}

/// Conjugates a dense matrix by a CNOT permutation in place.
fn conjugate_cnot(m: &mut DenseMatrix, n: usize, control: usize, target: usize) {
    let cm = 1usize << (n - 1 - control);
    let tm = 1usize << (n - 1 - target);
    let perm = |index: usize| -> usize {
        if index & cm != 0 {
            index ^ tm
        } else {
            index
        }
    };
    let dim = m.dim;
    let old = m.data.clone();
    for row in 0..dim {
        for col in 0..dim {
            m.data[row * dim + col] = old[perm(row) * dim + perm(col)];
        }
    }
}

/// Reference Heisenberg evolution by explicit 2^n x 2^n conjugation,
/// `P -> U^-t P U^t`, conjugating by the even layer first within each step.
///
/// # Errors
/// Rejects registers larger than [`MAX_MATRIX_QUBITS`].
pub fn heisenberg_reference(p: &PauliString, spec: &CircuitSpec, t: u64) -> Result<DenseMatrix> {
    check_cap(spec.n(), MAX_MATRIX_QUBITS)?;
    assert_eq!(p.n(), spec.n(), "heisenberg_reference: size mismatch");
    let mut m = string_matrix(p)?;
    for _ in 0..t {
        for &(control, target) in spec.even_gates() {
            conjugate_cnot(&mut m, spec.n(), control, target);
        }
        for &(control, target) in spec.odd_gates() {
            conjugate_cnot(&mut m, spec.n(), control, target);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_step, BoundaryCondition};
    use crate::pauli::Pauli;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn open(n: usize) -> CircuitSpec {
        build_step(n, BoundaryCondition::Open).unwrap()
    }

    #[test]
    fn cnot_truth_table() {
        // |10> -> |11>
        let mut s = DenseState::from_label(&BitVec::from_indices(2, &[0])).unwrap();
        s.apply_cnot(0, 1);
        assert_abs_diff_eq!(s.amplitudes()[0b11].re, 1.0, epsilon = 1e-15);

        // |00> -> |00>
        let mut s = DenseState::from_label(&BitVec::zeros(2)).unwrap();
        s.apply_cnot(0, 1);
        assert_abs_diff_eq!(s.amplitudes()[0b00].re, 1.0, epsilon = 1e-15);

        // (|00> + |10>)/sqrt(2) -> (|00> + |11>)/sqrt(2)
        let mut s = DenseState::from_label(&BitVec::zeros(2)).unwrap();
        s.amps[0b00] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        s.amps[0b10] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        s.apply_cnot(0, 1);
        assert_abs_diff_eq!(s.amplitudes()[0b00].re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[0b11].re, FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn size_cap_enforced() {
        assert!(matches!(
            DenseState::from_label(&BitVec::zeros(14)),
            Err(Error::OracleTooLarge { n: 14, .. })
        ));
        let p = PauliString::identity(10);
        assert!(string_matrix(&p).is_err());
    }

    #[test]
    fn basis_states_stay_basis_states_and_match_labels() {
        for bc in [BoundaryCondition::Open, BoundaryCondition::Periodic] {
            let spec = build_step(8, bc).unwrap();
            let label0 = BitVec::from_indices(8, &[0, 3, 4]);
            let mut dense = DenseState::from_label(&label0).unwrap();
            let mut label = label0;
            for _ in 0..20 {
                dense.step(&spec);
                label = spec.u().mul_vec(&label);
                let expected = DenseState::from_label(&label).unwrap();
                let on: Vec<usize> = dense
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.norm() > 1e-12)
                    .map(|(i, _)| i)
                    .collect();
                assert_eq!(on.len(), 1, "support not a single basis state");
                assert_abs_diff_eq!(
                    (expected.amplitudes()[on[0]]).re,
                    1.0,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn one_step_of_1000() {
        let spec = open(4);
        let mut s = DenseState::from_label(&BitVec::from_indices(4, &[0])).unwrap();
        s.step(&spec);
        // |1000> -> |1110>
        let expected = DenseState::from_label(&BitVec::from_indices(4, &[0, 1, 2])).unwrap();
        for (a, b) in s.amplitudes().iter().zip(expected.amplitudes()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn all_zeros_fixed_point() {
        let spec = open(6);
        let mut s = DenseState::from_label(&BitVec::zeros(6)).unwrap();
        s.evolve(&spec, 13);
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn unitarity_over_many_steps() {
        let spec = build_step(8, BoundaryCondition::Periodic).unwrap();
        let state = SingleQubitState::from_angles(1.2, 0.7);
        let mut s = DenseState::from_product(8, &state).unwrap();
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);
        s.evolve(&spec, 64);
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn product_state_reduces_to_site_rho() {
        let state = SingleQubitState::from_angles(0.9, 0.4);
        let dense = DenseState::from_product(6, &state).unwrap();
        let (x, y, z) = state.bloch();
        let expected = DensityMatrix::from_bloch(x, y, z);
        for site in 0..6 {
            let rho = dense.reduced_density(&[site]).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    assert_abs_diff_eq!(
                        (rho.entry(r, c) - expected.entry(r, c)).norm(),
                        0.0,
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn bell_state_partial_trace() {
        let mut s = DenseState::from_label(&BitVec::zeros(2)).unwrap();
        s.amps[0b00] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        s.amps[0b11] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let rho = s.reduced_density(&[0]).unwrap();
        assert_abs_diff_eq!(rho.entry(0, 0).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(0, 1).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn heisenberg_reference_trivial_cases() {
        let spec = open(4);
        let id = PauliString::identity(4);
        let m = heisenberg_reference(&id, &spec, 3).unwrap();
        for r in 0..m.dim() {
            for c in 0..m.dim() {
                let expected = if r == c { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(m.entry(r, c).re, expected, epsilon = 1e-15);
            }
        }

        // Z_2 after one step is Z_1 Z_2 (1-based).
        let evolved = heisenberg_reference(&PauliString::z(4, 1), &spec, 1).unwrap();
        let expected =
            string_matrix(&PauliString::from_ops(4, &[(0, Pauli::Z), (1, Pauli::Z)])).unwrap();
        assert!(evolved.max_deviation(&expected) < 1e-14);
    }

    #[test]
    fn cnot_conjugation_of_all_two_site_paulis() {
        // Exhaustive dense check that the bit-update-only rule (phase
        // untouched) reproduces true CNOT conjugation, both orientations.
        let ops = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        for (control, target) in [(0usize, 1usize), (1, 0)] {
            for p in ops {
                for q in ops {
                    for extra_phase in 0..4u8 {
                        let base = PauliString::from_ops(2, &[(0, p), (1, q)]);
                        let string = PauliString::from_labels(
                            base.x_bits().clone(),
                            base.z_bits().clone(),
                            (base.phase() + extra_phase) % 4,
                        );
                        let mut fast = string.clone();
                        fast.apply_cnot(control, target);

                        let dense = string_matrix(&string).unwrap();
                        let mut conj = dense.clone();
                        conjugate_cnot(&mut conj, 2, control, target);
                        let from_fast = string_matrix(&fast).unwrap();
                        assert!(
                            conj.max_deviation(&from_fast) < 1e-14,
                            "mismatch for ({p:?}, {q:?}) k+{extra_phase} gate ({control},{target})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn y_pair_conjugates_to_minus_x_z() {
        // Direct fixture: CNOT (Y(x)Y) CNOT = -(X(x)Z).
        let yy = PauliString::from_ops(2, &[(0, Pauli::Y), (1, Pauli::Y)]);
        let mut m = string_matrix(&yy).unwrap();
        conjugate_cnot(&mut m, 2, 0, 1);
        let xz = string_matrix(&PauliString::from_ops(2, &[(0, Pauli::X), (1, Pauli::Z)])).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert_abs_diff_eq!((m.entry(r, c) + xz.entry(r, c)).norm(), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn string_step_matches_dense_conjugation() {
        // Phase exactness: every single-site Pauli, both boundary
        // conditions, t up to 16, matrix register sizes.
        for bc in [BoundaryCondition::Open, BoundaryCondition::Periodic] {
            for n in [4usize, 6, 8] {
                let spec = build_step(n, bc).unwrap();
                for site in 0..n {
                    for op in [Pauli::X, Pauli::Y, Pauli::Z] {
                        let p0 = PauliString::from_ops(n, &[(site, op)]);
                        let mut fast = p0.clone();
                        for t in 0..=16u64 {
                            let reference = heisenberg_reference(&p0, &spec, t).unwrap();
                            let from_fast = string_matrix(&fast).unwrap();
                            assert!(
                                reference.max_deviation(&from_fast) < 1e-12,
                                "bc={bc:?} n={n} site={site} op={op:?} t={t}"
                            );
                            fast.heisenberg_step(&spec);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn expectations_match_dense_at_ten_qubits() {
        // Above the explicit-matrix cap the state-vector route still
        // certifies the fast path: <psi| P(t) |psi> = <psi(t)| P |psi(t)>.
        let n = 10;
        let state = SingleQubitState::from_angles(0.8, 2.1);
        for bc in [BoundaryCondition::Open, BoundaryCondition::Periodic] {
            let spec = build_step(n, bc).unwrap();
            let factors = crate::product_state::SiteFactors::new(&state);
            let mut dense = DenseState::from_product(n, &state).unwrap();
            for t in 0..=16u64 {
                for site in [0usize, 3, 7, 9] {
                    for op in [Pauli::X, Pauli::Y, Pauli::Z] {
                        let p0 = PauliString::from_ops(n, &[(site, op)]);
                        let fast = factors.expectation(&p0.evolved(&spec, t)).unwrap();
                        let reference = dense.expectation(&p0);
                        assert_abs_diff_eq!(reference.im, 0.0, epsilon = 1e-10);
                        assert_abs_diff_eq!(fast, reference.re, epsilon = 1e-10);
                    }
                }
                dense.step(&spec);
            }
        }
    }
}
