//! Reduced density matrices for single sites and nearest-neighbor pairs,
//! von Neumann entropy, and mutual information.
//!
//! A single-site density matrix is `(1 + x X + y Y + z Z) / 2` with the
//! Bloch components given by expectation values of the Heisenberg-evolved
//! single-site Paulis. A pair density matrix is the sixteen-term expansion
//! over two-site Pauli products, each expectation evaluated through the
//! exact phase-tracked string path (the X and Z parts of a pair string can
//! interfere through signs, in particular after wrapping a periodic chain).
//!
//! Entropies are reported in bits, so the maximal single-site value is 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::CircuitSpec;
use crate::pauli::{Pauli, PauliString};
use crate::product_state::{SiteFactors, SingleQubitState};

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues may undershoot 0 or overshoot 1 by this much before the run
/// is treated as a phase bug instead of roundoff.
const EIGENVALUE_SLACK: f64 = 1e-9;
/// Convergence target for the off-diagonal Frobenius norm in the Jacobi
/// eigensolver.
const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// A Hermitian, unit-trace matrix of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Builds and validates a density matrix from row-major entries.
    ///
    /// # Errors
    /// Rejects non-Hermitian data (1e-10) and traces off 1 (1e-10).
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        assert!(dim == 2 || dim == 4, "dimension must be 2 or 4");
        assert_eq!(data.len(), dim * dim, "entry count mismatch");
        let m = Self { dim, data };
        m.validate()?;
        Ok(m)
    }

    /// Single-qubit density matrix from Bloch components.
    #[must_use]
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Self {
        let h = |re: f64, im: f64| Complex64::new(re, im) * 0.5;
        Self {
            dim: 2,
            data: vec![h(1.0 + z, 0.0), h(x, -y), h(x, y), h(1.0 - z, 0.0)],
        }
    }

    #[must_use]
    pub const fn dim(&self) -> usize {
        self.dim
    }

    #[must_use]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[must_use]
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    /// Bloch components of a 2x2 matrix.
    ///
    /// # Panics
    /// Panics on dimension 4.
    #[must_use]
    pub fn bloch(&self) -> (f64, f64, f64) {
        assert_eq!(self.dim, 2, "bloch: only defined for one qubit");
        let off = self.entry(0, 1);
        (
            2.0 * off.re,
            -2.0 * off.im,
            self.entry(0, 0).re - self.entry(1, 1).re,
        )
    }

    fn validate(&self) -> Result<()> {
        let mut herm_dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                herm_dev = herm_dev.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        if herm_dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian(herm_dev));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::BadTrace((tr - Complex64::new(1.0, 0.0)).norm()));
        }
        Ok(())
    }

    /// Eigenvalues, ascending, clamped into [0, 1].
    ///
    /// The 2x2 case uses the closed form through the Bloch radius; the 4x4
    /// case runs a cyclic Jacobi iteration to off-diagonal norm < 1e-12.
    ///
    /// # Errors
    /// [`Error::EigenvalueRange`] if any eigenvalue falls outside
    /// `[-1e-9, 1 + 1e-9]` before clamping.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut eigs = if self.dim == 2 {
            let (x, y, z) = self.bloch();
            let r = (x * x + y * y + z * z).sqrt();
            vec![(1.0 - r) / 2.0, (1.0 + r) / 2.0]
        } else {
            jacobi_eigenvalues(self.dim, &self.data)?
        };
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        eigs.into_iter().map(clamp_eigenvalue).collect()
    }
}

fn clamp_eigenvalue(lambda: f64) -> Result<f64> {
    if !(-EIGENVALUE_SLACK..=1.0 + EIGENVALUE_SLACK).contains(&lambda) {
        return Err(Error::EigenvalueRange(lambda));
    }
    Ok(lambda.clamp(0.0, 1.0))
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix; returns the real
/// diagonal after the off-diagonal Frobenius norm drops below tolerance.
fn jacobi_eigenvalues(dim: usize, data: &[Complex64]) -> Result<Vec<f64>> {
    let mut a = data.to_vec();
    let idx = |r: usize, c: usize| r * dim + c;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..dim)
            .flat_map(|i| (0..dim).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[idx(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_TOL {
            return Ok((0..dim).map(|i| a[idx(i, i)].re).collect());
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let g = a[idx(p, q)];
                if g.norm() < JACOBI_TOL / (dim * dim) as f64 {
                    continue;
                }
                let alpha = a[idx(p, p)].re;
                let beta = a[idx(q, q)].re;
                let u = g / g.norm();
                // tan(2 theta) = 2|g| / (alpha - beta)
                let t = if alpha == beta {
                    1.0
                } else {
                    let zeta = (alpha - beta) / (2.0 * g.norm());
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- A R, mixing columns p and q
                for r in 0..dim {
                    let ap = a[idx(r, p)];
                    let aq = a[idx(r, q)];
                    a[idx(r, p)] = c * ap + s * u.conj() * aq;
                    a[idx(r, q)] = -s * u * ap + c * aq;
                }
                // A <- R^dagger A, mixing rows p and q
                for col in 0..dim {
                    let ap = a[idx(p, col)];
                    let aq = a[idx(q, col)];
                    a[idx(p, col)] = c * ap + s * u * aq;
                    a[idx(q, col)] = -s * u.conj() * ap + c * aq;
                }
            }
        }
    }
    Err(Error::NoConvergence)
}

/// Von Neumann entropy in bits (log base 2), with `0 log 0 = 0`.
///
/// # Errors
/// Propagates eigenvalue-range violations.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_from_eigenvalues(&rho.eigenvalues()?))
}

fn entropy_from_eigenvalues(eigs: &[f64]) -> f64 {
    eigs.iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum()
}

const PAULI_OPS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

fn sigma(p: Pauli) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        Pauli::I => [[one, z], [z, one]],
        Pauli::X => [[z, one], [one, z]],
        Pauli::Y => [[z, -i], [i, z]],
        Pauli::Z => [[one, z], [z, -one]],
    }
}

/// The fifteen non-identity pair strings on (site, site + 1) in the fixed
/// (left op, right op) scan order used by [`pair_rho_from_expectations`].
fn pair_strings(n: usize, site: usize) -> Vec<PauliString> {
    let mut out = Vec::with_capacity(15);
    for p in PAULI_OPS {
        for q in PAULI_OPS {
            if p == Pauli::I && q == Pauli::I {
                continue;
            }
            out.push(PauliString::from_ops(n, &[(site, p), (site + 1, q)]));
        }
    }
    out
}

fn pair_rho_from_expectations(expectations: &[f64]) -> Result<DensityMatrix> {
    assert_eq!(expectations.len(), 15);
    let mut data = vec![Complex64::new(0.0, 0.0); 16];
    let mut coeffs = Vec::with_capacity(16);
    coeffs.push((Pauli::I, Pauli::I, 1.0));
    let mut it = expectations.iter();
    for p in PAULI_OPS {
        for q in PAULI_OPS {
            if p == Pauli::I && q == Pauli::I {
                continue;
            }
            coeffs.push((p, q, *it.next().unwrap()));
        }
    }
    for (p, q, e) in coeffs {
        let sp = sigma(p);
        let sq = sigma(q);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        data[(2 * a + b) * 4 + (2 * c + d)] += sp[a][c] * sq[b][d] * e * 0.25;
                    }
                }
            }
        }
    }
    DensityMatrix::new(4, data)
}

/// Reduced density matrix of one site after `t` circuit steps, computed
/// from the expectations of the evolved `X`, `Y`, `Z` strings at that site.
///
/// # Errors
/// Propagates phase-contract violations from the expectation path.
pub fn single_qubit_rho(
    site: usize,
    t: u64,
    spec: &CircuitSpec,
    state: &SingleQubitState,
) -> Result<DensityMatrix> {
    assert!(site < spec.n(), "site {site} out of range");
    let factors = SiteFactors::new(state);
    let x = factors.expectation(&PauliString::x(spec.n(), site).evolved(spec, t))?;
    let y = factors.expectation(&PauliString::y(spec.n(), site).evolved(spec, t))?;
    let z = factors.expectation(&PauliString::z(spec.n(), site).evolved(spec, t))?;
    Ok(DensityMatrix::from_bloch(x, y, z))
}

/// Reduced density matrix of the nearest-neighbor pair (site, site + 1)
/// after `t` circuit steps, via the sixteen-term Pauli-pair expansion with
/// every expectation taken through the phase-tracked string path.
///
/// # Errors
/// Propagates phase-contract violations.
pub fn two_qubit_rho(
    site: usize,
    t: u64,
    spec: &CircuitSpec,
    state: &SingleQubitState,
) -> Result<DensityMatrix> {
    assert!(site + 1 < spec.n(), "pair ({site}, {}) out of range", site + 1);
    let factors = SiteFactors::new(state);
    let expectations = pair_strings(spec.n(), site)
        .into_iter()
        .map(|p| factors.expectation(&p.evolved(spec, t)))
        .collect::<Result<Vec<_>>>()?;
    pair_rho_from_expectations(&expectations)
}

/// Nearest-neighbor mutual information `M(i) = S(i) + S(i+1) - S(i, i+1)`
/// in bits.
///
/// # Errors
/// Propagates from the density-matrix and entropy paths.
pub fn mutual_information(
    site: usize,
    t: u64,
    spec: &CircuitSpec,
    state: &SingleQubitState,
) -> Result<f64> {
    let s_left = von_neumann_entropy(&single_qubit_rho(site, t, spec, state)?)?;
    let s_right = von_neumann_entropy(&single_qubit_rho(site + 1, t, spec, state)?)?;
    let s_pair = von_neumann_entropy(&two_qubit_rho(site, t, spec, state)?)?;
    Ok(s_left + s_right - s_pair)
}

/// A time-by-site grid of entropies or mutual information, row `t` first.
#[derive(Debug, Clone)]
pub struct EntropyGrid {
    n_times: usize,
    n_sites: usize,
    values: Vec<f64>,
    max_bits: f64,
}

impl EntropyGrid {
    /// Number of time rows (t = 0 through t = T inclusive).
    #[must_use]
    pub const fn n_times(&self) -> usize {
        self.n_times
    }

    /// Number of site columns (sites, or pairs for mutual information).
    #[must_use]
    pub const fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Saturation value in bits used for image scaling.
    #[must_use]
    pub const fn max_bits(&self) -> f64 {
        self.max_bits
    }

    #[must_use]
    pub fn value(&self, t: usize, site: usize) -> f64 {
        assert!(t < self.n_times && site < self.n_sites, "grid index out of range");
        self.values[t * self.n_sites + site]
    }

    /// One time row, sites ascending.
    #[must_use]
    pub fn row(&self, t: usize) -> &[f64] {
        &self.values[t * self.n_sites..(t + 1) * self.n_sites]
    }
}

/// Single-site entropy for every site and every `t` in `0..=t_max`.
///
/// The builder advances one set of evolved strings incrementally, so the
/// whole grid costs one pass of Heisenberg steps.
///
/// # Errors
/// Propagates from the expectation and entropy paths.
pub fn single_entropy_grid(
    spec: &CircuitSpec,
    state: &SingleQubitState,
    t_max: u64,
) -> Result<EntropyGrid> {
    let n = spec.n();
    let factors = SiteFactors::new(state);
    let mut strings: Vec<[PauliString; 3]> = (0..n)
        .map(|i| {
            [
                PauliString::x(n, i),
                PauliString::y(n, i),
                PauliString::z(n, i),
            ]
        })
        .collect();
    let n_times = t_max as usize + 1;
    let mut values = Vec::with_capacity(n_times * n);
    for t in 0..n_times {
        for triple in &strings {
            let x = factors.expectation(&triple[0])?;
            let y = factors.expectation(&triple[1])?;
            let z = factors.expectation(&triple[2])?;
            values.push(von_neumann_entropy(&DensityMatrix::from_bloch(x, y, z))?);
        }
        if t + 1 < n_times {
            for triple in &mut strings {
                for p in triple.iter_mut() {
                    p.heisenberg_step(spec);
                }
            }
        }
    }
    Ok(EntropyGrid {
        n_times,
        n_sites: n,
        values,
        max_bits: 1.0,
    })
}

/// Nearest-neighbor mutual information for every pair (left site index) and
/// every `t` in `0..=t_max`.
///
/// # Errors
/// Propagates from the expectation and entropy paths.
pub fn mutual_information_grid(
    spec: &CircuitSpec,
    state: &SingleQubitState,
    t_max: u64,
) -> Result<EntropyGrid> {
    let n = spec.n();
    assert!(n >= 2, "need at least one pair");
    let factors = SiteFactors::new(state);
    let mut singles: Vec<[PauliString; 3]> = (0..n)
        .map(|i| {
            [
                PauliString::x(n, i),
                PauliString::y(n, i),
                PauliString::z(n, i),
            ]
        })
        .collect();
    let mut pairs: Vec<Vec<PauliString>> = (0..n - 1).map(|i| pair_strings(n, i)).collect();
    let n_times = t_max as usize + 1;
    let mut values = Vec::with_capacity(n_times * (n - 1));
    for t in 0..n_times {
        let mut single_entropy = Vec::with_capacity(n);
        for triple in &singles {
            let x = factors.expectation(&triple[0])?;
            let y = factors.expectation(&triple[1])?;
            let z = factors.expectation(&triple[2])?;
            single_entropy.push(von_neumann_entropy(&DensityMatrix::from_bloch(x, y, z))?);
        }
        for (i, pair) in pairs.iter().enumerate() {
            let expectations = pair
                .iter()
                .map(|p| factors.expectation(p))
                .collect::<Result<Vec<_>>>()?;
            let s_pair = von_neumann_entropy(&pair_rho_from_expectations(&expectations)?)?;
            values.push(single_entropy[i] + single_entropy[i + 1] - s_pair);
        }
        if t + 1 < n_times {
            for triple in &mut singles {
                for p in triple.iter_mut() {
                    p.heisenberg_step(spec);
                }
            }
            for pair in &mut pairs {
                for p in pair.iter_mut() {
                    p.heisenberg_step(spec);
                }
            }
        }
    }
    Ok(EntropyGrid {
        n_times,
        n_sites: n - 1,
        values,
        max_bits: 2.0,
    })
}
