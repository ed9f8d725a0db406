//! Pauli strings with exact phase and their Heisenberg evolution through
//! CNOT layers.
//!
//! A string is stored as `i^k * prod_j X_j^{b_j} Z_j^{c_j}` with the X part
//! `b`, the Z part `c`, and the phase exponent `k` mod 4. Conjugating by a
//! CNOT maps the normal form back to the normal form: the target picks up
//! the control's X bit, the control picks up the target's Z bit, and since
//! no X ever has to move past a Z on the same site, the `i^k` prefix is
//! unchanged. The dense 4x4 conjugation check in `oracle` covers all 64
//! two-site strings to pin this down.
//!
//! For pure-X and pure-Z strings the same update is a linear map on the
//! label column alone: Z labels step by `U^T` (support spreads toward lower
//! site indices), X labels by `C1 * C2 = U^-1` (support spreads toward
//! higher indices).

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::lattice::{BoundaryCondition, CircuitSpec};

/// Single-site Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// (X bit, Z bit, phase exponent) of the site operator:
    /// `Y = i * X * Z` carries one factor of `i`.
    #[must_use]
    pub const fn parts(self) -> (bool, bool, u8) {
        match self {
            Pauli::I => (false, false, 0),
            Pauli::X => (true, false, 0),
            Pauli::Y => (true, true, 1),
            Pauli::Z => (false, true, 0),
        }
    }
}

/// A Pauli string `i^k * prod_j X_j^{b_j} Z_j^{c_j}` on `n` sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    n: usize,
    x_bits: BitVec,
    z_bits: BitVec,
    phase: u8,
}

impl PauliString {
    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x_bits: BitVec::zeros(n),
            z_bits: BitVec::zeros(n),
            phase: 0,
        }
    }

    /// Single-site `X` at `site` (0-based).
    #[must_use]
    pub fn x(n: usize, site: usize) -> Self {
        Self::from_ops(n, &[(site, Pauli::X)])
    }

    /// Single-site `Y` at `site` (0-based).
    #[must_use]
    pub fn y(n: usize, site: usize) -> Self {
        Self::from_ops(n, &[(site, Pauli::Y)])
    }

    /// Single-site `Z` at `site` (0-based).
    #[must_use]
    pub fn z(n: usize, site: usize) -> Self {
        Self::from_ops(n, &[(site, Pauli::Z)])
    }

    /// String with the given operators placed at distinct sites.
    ///
    /// # Panics
    /// Panics if a site is out of range or repeated.
    #[must_use]
    pub fn from_ops(n: usize, ops: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(site, op) in ops {
            assert!(site < n, "site {site} out of range (n={n})");
            assert!(
                !s.x_bits.get(site) && !s.z_bits.get(site),
                "site {site} assigned twice"
            );
            let (b, c, k) = op.parts();
            if b {
                s.x_bits.set(site);
            }
            if c {
                s.z_bits.set(site);
            }
            s.phase = (s.phase + k) % 4;
        }
        s
    }

    /// String from raw X/Z labels and phase exponent.
    ///
    /// # Panics
    /// Panics if the label lengths differ.
    #[must_use]
    pub fn from_labels(x_bits: BitVec, z_bits: BitVec, phase: u8) -> Self {
        assert_eq!(x_bits.len(), z_bits.len(), "label length mismatch");
        Self {
            n: x_bits.len(),
            x_bits,
            z_bits,
            phase: phase % 4,
        }
    }

    /// Pure-Z string from a label column.
    #[must_use]
    pub fn from_z_label(label: BitVec) -> Self {
        let n = label.len();
        Self {
            n,
            x_bits: BitVec::zeros(n),
            z_bits: label,
            phase: 0,
        }
    }

    /// Pure-X string from a label column.
    #[must_use]
    pub fn from_x_label(label: BitVec) -> Self {
        let n = label.len();
        Self {
            n,
            x_bits: label,
            z_bits: BitVec::zeros(n),
            phase: 0,
        }
    }

    #[must_use]
    pub const fn n(&self) -> usize {
        self.n
    }

    /// X-part label (`b` bits).
    #[must_use]
    pub fn x_bits(&self) -> &BitVec {
        &self.x_bits
    }

    /// Z-part label (`c` bits).
    #[must_use]
    pub fn z_bits(&self) -> &BitVec {
        &self.z_bits
    }

    /// Phase exponent `k` of the `i^k` prefix.
    #[must_use]
    pub const fn phase(&self) -> u8 {
        self.phase
    }

    /// Counts of sites carrying only X, only Z, and both.
    #[must_use]
    pub fn weights(&self) -> PauliWeights {
        let both = self.x_bits.and_count(&self.z_bits);
        PauliWeights {
            x_only: self.x_bits.count_ones() - both,
            z_only: self.z_bits.count_ones() - both,
            both,
        }
    }

    /// Number of sites in the support (any non-identity operator).
    #[must_use]
    pub fn support_size(&self) -> usize {
        let w = self.weights();
        w.x_only + w.z_only + w.both
    }

    /// A string equals its adjoint iff the phase parity matches the number
    /// of sites carrying `XZ`.
    #[must_use]
    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize + self.x_bits.and_count(&self.z_bits)).is_multiple_of(2)
    }

    /// Conjugates in place by a CNOT with the given control and target.
    ///
    /// # Panics
    /// Panics if sites coincide or are out of range.
    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        assert!(control < self.n && target < self.n, "site out of range");
        assert_ne!(control, target, "control and target must differ");
        if self.x_bits.get(control) {
            self.x_bits.flip(target);
        }
        if self.z_bits.get(target) {
            self.z_bits.flip(control);
        }
    }

    /// One Heisenberg step `P -> U^-1 P U`: conjugates by the even layer's
    /// gates first, then the odd layer's, since the odd layer acts first on
    /// states and each layer is its own inverse.
    pub fn heisenberg_step(&mut self, spec: &CircuitSpec) {
        assert_eq!(self.n, spec.n(), "heisenberg_step: size mismatch");
        for &(control, target) in spec.even_gates() {
            self.apply_cnot(control, target);
        }
        for &(control, target) in spec.odd_gates() {
            self.apply_cnot(control, target);
        }
    }

    /// Heisenberg evolution by `t` steps, returning the evolved string.
    #[must_use]
    pub fn evolved(&self, spec: &CircuitSpec, t: u64) -> Self {
        let mut p = self.clone();
        for _ in 0..t {
            p.heisenberg_step(spec);
        }
        p
    }
}

/// Support-size breakdown of a string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliWeights {
    pub x_only: usize,
    pub z_only: usize,
    pub both: usize,
}

/// One step of the pure-Z label map (the `U^T` action), applied gate-wise.
/// Agrees with [`PauliString::heisenberg_step`] restricted to pure-Z strings.
#[must_use]
pub fn z_label_step(label: &BitVec, spec: &CircuitSpec) -> BitVec {
    let mut out = label.clone();
    z_label_step_in_place(&mut out, spec);
    out
}

pub(crate) fn z_label_step_in_place(label: &mut BitVec, spec: &CircuitSpec) {
    for &(control, target) in spec.even_gates() {
        if label.get(target) {
            label.flip(control);
        }
    }
    for &(control, target) in spec.odd_gates() {
        if label.get(target) {
            label.flip(control);
        }
    }
}

/// One step of the pure-X label map (the `C1 * C2` action), applied
/// gate-wise. Agrees with [`PauliString::heisenberg_step`] restricted to
/// pure-X strings.
#[must_use]
pub fn x_label_step(label: &BitVec, spec: &CircuitSpec) -> BitVec {
    let mut out = label.clone();
    for &(control, target) in spec.even_gates() {
        if out.get(control) {
            out.flip(target);
        }
    }
    for &(control, target) in spec.odd_gates() {
        if out.get(control) {
            out.flip(target);
        }
    }
    out
}

/// Orbit of a pure-Z label under the one-step Heisenberg map.
#[derive(Debug, Clone)]
pub struct ZOrbit {
    labels: Vec<BitVec>,
}

impl ZOrbit {
    /// Orbit entries starting from the seed label; entry `i` is the label
    /// after `i` steps.
    #[must_use]
    pub fn labels(&self) -> &[BitVec] {
        &self.labels
    }

    /// Least `p >= 1` with the label returning to the seed after `p` steps.
    #[must_use]
    pub fn period(&self) -> usize {
        self.labels.len()
    }
}

/// Follows the label of `Z_site` until it first returns to itself.
///
/// # Errors
/// Open boundaries only ([`Error::PeriodicUnsupported`]); gives up after
/// `cap` steps ([`Error::OrbitCapExceeded`]).
pub fn z_orbit(site: usize, spec: &CircuitSpec, cap: u64) -> Result<ZOrbit> {
    if spec.bc() != BoundaryCondition::Open {
        return Err(Error::PeriodicUnsupported);
    }
    assert!(site < spec.n(), "site {site} out of range");
    let seed = BitVec::basis(spec.n(), site);
    let mut labels = vec![seed.clone()];
    let mut current = seed.clone();
    for _ in 0..cap {
        z_label_step_in_place(&mut current, spec);
        if current == seed {
            return Ok(ZOrbit { labels });
        }
        labels.push(current.clone());
    }
    Err(Error::OrbitCapExceeded(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{BitVec, ORDER_CAP};
    use crate::lattice::{build_step, BoundaryCondition};
    use proptest::prelude::*;

    fn open(n: usize) -> CircuitSpec {
        build_step(n, BoundaryCondition::Open).unwrap()
    }

    #[test]
    fn cnot_rules_on_single_sites() {
        // Z on the target spreads to the control, phase untouched.
        let mut p = PauliString::z(4, 1);
        p.apply_cnot(0, 1);
        assert_eq!(p, PauliString::from_ops(4, &[(0, Pauli::Z), (1, Pauli::Z)]));

        // X on the control spreads to the target.
        let mut p = PauliString::x(4, 0);
        p.apply_cnot(0, 1);
        assert_eq!(p, PauliString::from_ops(4, &[(0, Pauli::X), (1, Pauli::X)]));

        // Z on the control and X on the target are fixed.
        let mut p = PauliString::from_ops(4, &[(0, Pauli::Z), (1, Pauli::X)]);
        let q = p.clone();
        p.apply_cnot(0, 1);
        assert_eq!(p, q);
    }

    #[test]
    fn cnot_on_y_pair() {
        // Y(x)Y conjugates to -(X(x)Z): the bit parts become X and Z and the
        // i^2 prefix carried in from Y*Y stays, which is the minus sign.
        let mut p = PauliString::from_ops(2, &[(0, Pauli::Y), (1, Pauli::Y)]);
        assert_eq!(p.phase(), 2);
        p.apply_cnot(0, 1);
        assert_eq!(p.phase(), 2);
        assert_eq!(p.x_bits(), &BitVec::from_indices(2, &[0]));
        assert_eq!(p.z_bits(), &BitVec::from_indices(2, &[1]));
        assert!(p.is_hermitian());
    }

    #[test]
    fn heisenberg_step_matches_z_map_table() {
        // mu(Z_2) = Z_1 Z_2, mu(Z_4) = Z_3 Z_4 in 1-based site numbers.
        let spec = open(6);
        let mut p = PauliString::z(6, 1);
        p.heisenberg_step(&spec);
        assert_eq!(p, PauliString::from_z_label(BitVec::from_indices(6, &[0, 1])));

        let mut p = PauliString::z(6, 3);
        p.heisenberg_step(&spec);
        assert_eq!(p, PauliString::from_z_label(BitVec::from_indices(6, &[2, 3])));

        let mut p = PauliString::z(6, 2);
        p.heisenberg_step(&spec);
        assert_eq!(
            p,
            PauliString::from_z_label(BitVec::from_indices(6, &[0, 1, 2]))
        );

        let mut p = PauliString::z(6, 4);
        p.heisenberg_step(&spec);
        assert_eq!(
            p,
            PauliString::from_z_label(BitVec::from_indices(6, &[2, 3, 4]))
        );
    }

    #[test]
    fn heisenberg_step_on_x2() {
        let spec = open(4);
        let mut p = PauliString::x(4, 1);
        p.heisenberg_step(&spec);
        assert_eq!(
            p,
            PauliString::from_x_label(BitVec::from_indices(4, &[1, 2, 3]))
        );
    }

    #[test]
    fn label_steps_match_examples() {
        let spec = open(4);
        let c = z_label_step(&BitVec::basis(4, 1), &spec);
        assert_eq!(c, BitVec::from_indices(4, &[0, 1]));

        let b = x_label_step(&BitVec::basis(4, 0), &spec);
        assert_eq!(b, BitVec::from_indices(4, &[0, 1]));

        assert!(z_label_step(&BitVec::zeros(4), &spec).is_zero());
    }

    #[test]
    fn label_steps_match_matrices() {
        for bc in [BoundaryCondition::Open, BoundaryCondition::Periodic] {
            let spec = build_step(8, bc).unwrap();
            let zm = spec.z_label_matrix();
            let xm = spec.x_label_matrix();
            for site in 0..8 {
                let c = BitVec::basis(8, site);
                assert_eq!(z_label_step(&c, &spec), zm.mul_vec(&c), "z at {site}");
                assert_eq!(x_label_step(&c, &spec), xm.mul_vec(&c), "x at {site}");
            }
        }
    }

    #[test]
    fn orbit_periods_near_left_boundary() {
        let spec = open(8);
        assert_eq!(z_orbit(0, &spec, 64).unwrap().period(), 1);
        assert_eq!(z_orbit(1, &spec, 64).unwrap().period(), 2);
        let orbit3 = z_orbit(2, &spec, 64).unwrap();
        assert_eq!(orbit3.period(), 4);
        // Two steps in: Z_3 -> Z_1 Z_3 (1-based).
        assert_eq!(orbit3.labels()[2], BitVec::from_indices(8, &[0, 2]));
    }

    #[test]
    fn orbit_rejects_periodic_and_caps() {
        let periodic = build_step(8, BoundaryCondition::Periodic).unwrap();
        assert!(matches!(
            z_orbit(2, &periodic, 64),
            Err(Error::PeriodicUnsupported)
        ));
        let spec = open(8);
        assert!(matches!(
            z_orbit(7, &spec, 2),
            Err(Error::OrbitCapExceeded(2))
        ));
    }

    #[test]
    fn orbit_period_divides_order_of_u() {
        let spec = open(8);
        let order = spec.u().multiplicative_order(ORDER_CAP).unwrap();
        for site in 0..8 {
            let period = z_orbit(site, &spec, ORDER_CAP).unwrap().period() as u64;
            assert_eq!(order % period, 0, "site {site}");
        }
    }

    proptest! {
        #[test]
        fn left_light_cone(site in 0usize..16, t in 0u64..33) {
            let spec = open(16);
            let mut label = BitVec::basis(16, site);
            for _ in 0..t {
                z_label_step_in_place(&mut label, &spec);
            }
            prop_assert!(!label.is_zero());
            prop_assert!(label.highest_set().unwrap() <= site);
        }

        #[test]
        fn right_light_cone(site in 0usize..16, t in 0u64..33) {
            let spec = open(16);
            let mut label = BitVec::basis(16, site);
            for _ in 0..t {
                label = x_label_step(&label, &spec);
            }
            prop_assert!(!label.is_zero());
            prop_assert!(label.lowest_set().unwrap() >= site);
        }

        #[test]
        fn label_step_agrees_with_string_step(site in 0usize..12, t in 0u64..33) {
            let spec = open(12);
            let mut z_string = PauliString::z(12, site);
            let mut z_label = BitVec::basis(12, site);
            let mut x_string = PauliString::x(12, site);
            let mut x_label = BitVec::basis(12, site);
            for _ in 0..t {
                z_string.heisenberg_step(&spec);
                z_label = z_label_step(&z_label, &spec);
                x_string.heisenberg_step(&spec);
                x_label = x_label_step(&x_label, &spec);
            }
            prop_assert_eq!(z_string.z_bits(), &z_label);
            prop_assert!(z_string.x_bits().is_zero());
            prop_assert_eq!(z_string.phase(), 0);
            prop_assert_eq!(x_string.x_bits(), &x_label);
            prop_assert!(x_string.z_bits().is_zero());
        }

        #[test]
        fn hermiticity_preserved(ops in proptest::collection::vec((0usize..8, 0u8..4), 1..4), t in 0u64..17) {
            let assignments: Vec<(usize, Pauli)> = ops
                .iter()
                .enumerate()
                .map(|(slot, &(_, p))| {
                    let pauli = match p {
                        0 => Pauli::I,
                        1 => Pauli::X,
                        2 => Pauli::Y,
                        _ => Pauli::Z,
                    };
                    (2 * slot, pauli)
                })
                .collect();
            let spec = open(8);
            let p = PauliString::from_ops(8, &assignments);
            prop_assert!(p.is_hermitian());
            let evolved = p.evolved(&spec, t);
            prop_assert!(evolved.is_hermitian());
        }
    }
}
