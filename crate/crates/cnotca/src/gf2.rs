//! Bit-packed linear algebra over GF(2).
//!
//! [`BitVec`] carries state labels and Pauli-string label columns; [`BitMatrix`]
//! carries the circuit layer matrices and their products. All arithmetic is
//! modulo 2: addition is XOR, and a matrix-vector product reduces to an AND
//! followed by a popcount parity per row.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap for [`BitMatrix::multiplicative_order`].
pub const ORDER_CAP: u64 = 1 << 20;

// ---------------------------------------------------------------------------
// BitVec
// ---------------------------------------------------------------------------

/// A dense vector over GF(2), one bit per site, packed into 64-bit words.
///
/// Bits at positions `>= len` are kept zero so that popcounts and word-wise
/// comparisons are meaningful.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    /// Creates a zero vector of the given length.
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Creates a basis vector with a single bit set.
    #[must_use]
    pub fn basis(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index);
        v
    }

    /// Creates a vector with the listed bits set.
    #[must_use]
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i);
        }
        v
    }

    #[must_use]
    pub const fn len(&self) -> usize {
        self.len
    }

    #[must_use]
    pub const fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Returns true if bit `i` is set.
    ///
    /// # Panics
    /// Panics if `i >= self.len()`.
    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn clear(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// XOR-assigns another vector into this one (addition in GF(2)).
    ///
    /// # Panics
    /// Panics if lengths differ.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(
            self.len, other.len,
            "xor_assign: length mismatch ({} vs {})",
            self.len, other.len
        );
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Returns the XOR of two vectors.
    #[must_use]
    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Number of set bits.
    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of positions where both vectors have a set bit.
    #[must_use]
    pub fn and_count(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "and_count: length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Parity of the AND with another vector, i.e. the GF(2) inner product.
    #[must_use]
    pub fn dot(&self, other: &Self) -> bool {
        self.and_count(other) % 2 == 1
    }

    /// Index of the lowest set bit, or `None` for the zero vector.
    #[must_use]
    pub fn lowest_set(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Index of the highest set bit, or `None` for the zero vector.
    #[must_use]
    pub fn highest_set(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(wi * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    /// Iterates over the indices of set bits in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| OnesIter {
            word: w,
            base: wi * 64,
        })
    }
}

struct OnesIter {
    word: u64,
    base: usize,
}

impl Iterator for OnesIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let bit = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + bit)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({}; ", self.len)?;
        f.debug_list().entries(self.ones()).finish()?;
        write!(f, ")")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// BitMatrix
// ---------------------------------------------------------------------------

/// A square matrix over GF(2), stored row-major as one [`BitVec`] per row.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    /// Creates the zero matrix of dimension `n`.
    #[must_use]
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|_| BitVec::zeros(n)).collect(),
        }
    }

    /// Creates the identity matrix of dimension `n`.
    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|i| BitVec::basis(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows.
    ///
    /// # Panics
    /// Panics if any row length differs from the row count.
    #[must_use]
    pub fn from_rows(rows: Vec<BitVec>) -> Self {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "row {i} has length {}, expected {n}", r.len());
        }
        Self { n, rows }
    }

    #[must_use]
    pub const fn dim(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.rows[i].set(j);
    }

    /// Matrix-vector product mod 2: `out_i = parity(row_i AND v)`.
    ///
    /// # Panics
    /// Panics if `v.len() != self.dim()`.
    #[must_use]
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.n, "mul_vec: dimension mismatch");
        let mut out = BitVec::zeros(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(i);
            }
        }
        out
    }

    /// Matrix product mod 2.
    ///
    /// Row `i` of the result is the XOR of the rows of `other` selected by
    /// the set bits of row `i` of `self`, which is fast for the sparse
    /// circuit-layer matrices.
    ///
    /// # Panics
    /// Panics if dimensions differ.
    #[must_use]
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "mul: dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(self.n);
                for j in row.ones() {
                    acc.xor_assign(&other.rows[j]);
                }
                acc
            })
            .collect();
        Self { n: self.n, rows }
    }

    /// Matrix power mod 2 by square-and-multiply; `M^0 = I`.
    #[must_use]
    pub fn pow(&self, mut t: u64) -> Self {
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                result = result.mul(&base);
            }
            t >>= 1;
            if t > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    #[must_use]
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in self.rows[i].ones() {
                out.rows[j].set(i);
            }
        }
        out
    }

    #[must_use]
    pub fn is_identity(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.count_ones() == 1 && r.get(i))
    }

    /// Rank over GF(2) by Gaussian elimination.
    #[must_use]
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(pivot) = (rank..self.n).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse mod 2 by Gauss-Jordan elimination.
    ///
    /// # Errors
    /// Returns [`Error::SingularMatrix`] if no inverse exists.
    pub fn inverse(&self) -> Result<Self> {
        let mut left = self.rows.clone();
        let mut right: Vec<BitVec> = (0..self.n).map(|i| BitVec::basis(self.n, i)).collect();
        for col in 0..self.n {
            let Some(pivot) = (col..self.n).find(|&r| left[r].get(col)) else {
                return Err(Error::SingularMatrix);
            };
            left.swap(col, pivot);
            right.swap(col, pivot);
            let (lp, rp) = (left[col].clone(), right[col].clone());
            for r in 0..self.n {
                if r != col && left[r].get(col) {
                    left[r].xor_assign(&lp);
                    right[r].xor_assign(&rp);
                }
            }
        }
        Ok(Self {
            n: self.n,
            rows: right,
        })
    }

    /// Least `t >= 1` with `M^t = I`, found by iterated multiplication.
    ///
    /// # Errors
    /// [`Error::SingularMatrix`] if the matrix is not invertible mod 2 (no
    /// order exists), or [`Error::OrderNotFound`] if the order exceeds `cap`.
    pub fn multiplicative_order(&self, cap: u64) -> Result<u64> {
        if self.rank() != self.n {
            return Err(Error::SingularMatrix);
        }
        let mut power = self.clone();
        for t in 1..=cap {
            if power.is_identity() {
                return Ok(t);
            }
            power = power.mul(self);
        }
        Err(Error::OrderNotFound(cap))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{}):", self.n, self.n)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice;
    use proptest::prelude::*;

    fn mat(rows: &[&[usize]]) -> BitMatrix {
        let n = rows.len();
        BitMatrix::from_rows(rows.iter().map(|r| BitVec::from_indices(n, r)).collect())
    }

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::zeros(130);
        assert!(v.is_zero());
        v.set(0);
        v.set(64);
        v.set(129);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.lowest_set(), Some(0));
        assert_eq!(v.highest_set(), Some(129));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        v.flip(64);
        assert!(!v.get(64));
        v.clear(0);
        assert_eq!(v.count_ones(), 1);
    }

    #[test]
    fn bitvec_and_count_crosses_words() {
        let a = BitVec::from_indices(200, &[0, 63, 64, 150]);
        let b = BitVec::from_indices(200, &[63, 64, 151]);
        assert_eq!(a.and_count(&b), 2);
        assert!(!a.dot(&b));
    }

    #[test]
    fn mat_vec_c1_on_e1() {
        // One odd CNOT layer sends the first basis label to the first column.
        let c1 = lattice::layer_odd(4, lattice::BoundaryCondition::Open).unwrap();
        let v = BitVec::basis(4, 0);
        let out = c1.mul_vec(&v);
        assert_eq!(out, BitVec::from_indices(4, &[0, 1]));
    }

    #[test]
    fn mat_vec_zero() {
        let m = mat(&[&[0, 1], &[1]]);
        assert!(m.mul_vec(&BitVec::zeros(2)).is_zero());
    }

    #[test]
    fn mat_vec_full_step_on_e1() {
        let spec = lattice::build_step(4, lattice::BoundaryCondition::Open).unwrap();
        let out = spec.u().mul_vec(&BitVec::basis(4, 0));
        // One step of |1000> in the label picture, checked against the dense
        // oracle in oracle::tests.
        assert_eq!(out, BitVec::from_indices(4, &[0, 1, 2]));
    }

    #[test]
    fn mat_mul_layers() {
        let bc = lattice::BoundaryCondition::Open;
        let c1 = lattice::layer_odd(4, bc).unwrap();
        let c2 = lattice::layer_even(4, bc).unwrap();
        let u = c2.mul(&c1);
        let expected = mat(&[&[0], &[0, 1], &[0, 1, 2], &[2, 3]]);
        assert_eq!(u, expected);
        // C1 is an involution.
        assert!(c1.mul(&c1).is_identity());
        // I * M = M.
        assert_eq!(BitMatrix::identity(4).mul(&u), u);
    }

    #[test]
    fn mat_pow_small_cases() {
        let spec = lattice::build_step(4, lattice::BoundaryCondition::Open).unwrap();
        assert!(spec.u().pow(4).is_identity());
        assert!(spec.u().pow(0).is_identity());
        // Sheared dynamics reproduces the binomial row: bits of row 4 mod 2.
        let sheared = lattice::build_sheared(8);
        let col = sheared.pow(4).mul_vec(&BitVec::basis(8, 0));
        assert_eq!(col, BitVec::from_indices(8, &[0, 4]));
    }

    #[test]
    fn order_of_small_circuits() {
        let spec = lattice::build_step(4, lattice::BoundaryCondition::Open).unwrap();
        assert_eq!(spec.u().multiplicative_order(ORDER_CAP).unwrap(), 4);
        assert_eq!(
            BitMatrix::identity(6).multiplicative_order(ORDER_CAP).unwrap(),
            1
        );
        let spec50 = lattice::build_step(50, lattice::BoundaryCondition::Open).unwrap();
        assert_eq!(spec50.u().multiplicative_order(ORDER_CAP).unwrap(), 64);
    }

    #[test]
    fn order_errors() {
        let singular = mat(&[&[0, 1], &[0, 1]]);
        assert!(matches!(
            singular.multiplicative_order(16),
            Err(Error::SingularMatrix)
        ));
        let spec50 = lattice::build_step(50, lattice::BoundaryCondition::Open).unwrap();
        assert!(matches!(
            spec50.u().multiplicative_order(10),
            Err(Error::OrderNotFound(10))
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let spec = lattice::build_step(16, lattice::BoundaryCondition::Open).unwrap();
        let inv = spec.u().inverse().unwrap();
        assert!(spec.u().mul(&inv).is_identity());
        assert!(inv.mul(spec.u()).is_identity());
        assert!(mat(&[&[0, 1], &[0, 1]]).inverse().is_err());
    }

    #[test]
    fn circuit_matrices_are_invertible() {
        for n in [2usize, 4, 6, 16, 50] {
            let spec = lattice::build_step(n, lattice::BoundaryCondition::Open).unwrap();
            assert_eq!(spec.c1().rank(), n);
            assert_eq!(spec.c2().rank(), n);
            assert_eq!(spec.u().rank(), n);
            assert_eq!(lattice::build_sheared(n).rank(), n);
        }
        for n in [4usize, 6, 16, 50] {
            let spec = lattice::build_step(n, lattice::BoundaryCondition::Periodic).unwrap();
            assert_eq!(spec.u().rank(), n);
        }
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = BitMatrix> {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), n).prop_map(
            move |bits| {
                let rows = bits
                    .into_iter()
                    .map(|row| {
                        let mut v = BitVec::zeros(n);
                        for (i, b) in row.into_iter().enumerate() {
                            if b {
                                v.set(i);
                            }
                        }
                        v
                    })
                    .collect();
                BitMatrix::from_rows(rows)
            },
        )
    }

    proptest! {
        #[test]
        fn mul_is_associative(a in arb_matrix(9), b in arb_matrix(9), c in arb_matrix(9)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn pow_adds_exponents(m in arb_matrix(7), s in 0u64..64, t in 0u64..64) {
            prop_assert_eq!(m.pow(s + t), m.pow(s).mul(&m.pow(t)));
        }

        #[test]
        fn transpose_involution(m in arb_matrix(10)) {
            prop_assert_eq!(m.transpose().transpose(), m);
        }
    }
}
