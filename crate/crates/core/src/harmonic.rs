//! Harmonic sums on uniform grids.
//!
//! Every oscillatory quantity in the noise model (the phase integral, the
//! decoherence function and its derivative) is a sum over a harmonic comb
//!
//! ```text
//! S_k = Σ_{j=1}^{J} c_j · exp(i·j·(φ0 + θ·k)),   k = 0..K
//! ```
//!
//! evaluated on a uniform time grid. Direct summation costs `J·K` complex
//! exponentials; for large combs the sum is rewritten with Bluestein's
//! identity `jk = (j² + k² − (k − j)²)/2` as a chirp convolution and computed
//! with FFTs in `O((J + K) log(J + K))`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Below this many `J·K` terms the direct sum is cheaper than the FFT route.
const DIRECT_LIMIT: usize = 1 << 16;

/// `S_k` for `k = 0..count`, `coeffs[j - 1] = c_j`.
pub fn harmonic_sums(coeffs: &[Complex64], phase0: f64, theta: f64, count: usize) -> Vec<Complex64> {
    if coeffs.is_empty() || count == 0 {
        return vec![Complex64::new(0.0, 0.0); count];
    }
    if coeffs.len().saturating_mul(count) <= DIRECT_LIMIT {
        direct(coeffs, phase0, theta, count)
    } else {
        chirp(coeffs, phase0, theta, count)
    }
}

/// Real-coefficient convenience wrapper.
pub fn harmonic_sums_real(coeffs: &[f64], phase0: f64, theta: f64, count: usize) -> Vec<Complex64> {
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    harmonic_sums(&c, phase0, theta, count)
}

fn direct(coeffs: &[Complex64], phase0: f64, theta: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let base = phase0 + theta * k as f64;
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * Complex64::cis((i + 1) as f64 * base))
                .sum()
        })
        .collect()
}

fn chirp(coeffs: &[Complex64], phase0: f64, theta: f64, count: usize) -> Vec<Complex64> {
    let modes = coeffs.len();
    let len = (modes + count + 1).next_power_of_two();
    let zero = Complex64::new(0.0, 0.0);

    // exp(i θ m² / 2)
    let chirp_phase = |m: usize| {
        let m = m as f64;
        (0.5 * theta * m * m) % TAU
    };

    let mut a = vec![zero; len];
    for (i, c) in coeffs.iter().enumerate() {
        let j = i + 1;
        let start = Complex64::cis((j as f64 * phase0) % TAU);
        a[j] = c * start * Complex64::cis(chirp_phase(j));
    }
    let mut b = vec![zero; len];
    for m in 0..count.max(modes + 1) {
        let w = Complex64::cis(-chirp_phase(m));
        if m < count {
            b[m] = w;
        }
        if m >= 1 && m <= modes {
            b[len - m] = w;
        }
    }

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);
    forward.process(&mut a);
    forward.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inverse.process(&mut a);

    let scale = 1.0 / len as f64;
    (0..count)
        .map(|k| a[k] * scale * Complex64::cis(chirp_phase(k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(coeffs: &[Complex64], phase0: f64, theta: f64, k: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in coeffs.iter().enumerate() {
            let ang = (i as f64 + 1.0) * (phase0 + theta * k as f64);
            acc += c * Complex64::new(ang.cos(), ang.sin());
        }
        acc
    }

    fn random_coeffs(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|j| Complex64::from_polar(1.0 / (j + 1) as f64, rng.random::<f64>() * TAU))
            .collect()
    }

    #[test]
    fn chirp_route_matches_naive_sum() {
        let coeffs = random_coeffs(1666, 3);
        let theta = 0.03 * 0.05;
        let out = chirp(&coeffs, 0.0, theta, 2001);
        for k in [0, 1, 17, 1000, 1999, 2000] {
            let want = naive(&coeffs, 0.0, theta, k);
            assert!((out[k] - want).norm() < 1e-11, "k={k}: {} vs {}", out[k], want);
        }
    }

    #[test]
    fn chirp_route_honours_start_phase() {
        let coeffs = random_coeffs(300, 9);
        let (phase0, theta) = (12.5 * 0.2514, 0.2514 * 0.01);
        let out = chirp(&coeffs, phase0, theta, 700);
        for k in [0, 350, 699] {
            let want = naive(&coeffs, phase0, theta, k);
            assert!((out[k] - want).norm() < 1e-11);
        }
    }

    #[test]
    fn small_problems_use_exact_direct_sum() {
        let coeffs = random_coeffs(5, 1);
        let out = harmonic_sums(&coeffs, 0.1, 0.7, 4);
        for (k, v) in out.iter().enumerate() {
            assert!((v - naive(&coeffs, 0.1, 0.7, k)).norm() < 1e-14);
        }
    }

    #[test]
    fn empty_inputs() {
        assert!(harmonic_sums(&[], 0.0, 1.0, 3).iter().all(|z| z.norm() == 0.0));
        assert!(harmonic_sums(&random_coeffs(3, 0), 0.0, 1.0, 0).is_empty());
    }
}
