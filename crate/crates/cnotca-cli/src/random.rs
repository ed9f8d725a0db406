//! Seeded random product states for oracle self-checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cnotca::product_state::SingleQubitState;

/// Draws `count` Bloch-sphere-uniform single-qubit states. The stream is a
/// pure function of the seed, so checks are reproducible across runs and
/// platforms.
#[must_use]
pub fn random_states(seed: u64, count: usize) -> Vec<SingleQubitState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let theta = z.acos();
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            SingleQubitState::from_angles(theta, phi)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_normalized() {
        let a = random_states(7, 5);
        let b = random_states(7, 5);
        for (s, t) in a.iter().zip(&b) {
            assert_eq!(s.amplitudes(), t.amplitudes());
            let (x, y, z) = s.bloch();
            assert!((x * x + y * y + z * z - 1.0).abs() < 1e-12);
        }
        let c = random_states(8, 5);
        assert_ne!(a[0].amplitudes(), c[0].amplitudes());
    }
}
