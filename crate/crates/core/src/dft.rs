//! Arbitrary-length discrete Fourier transforms via Bluestein's chirp-z
//! reformulation.
//!
//! Convention: `X_k = Σ_j x_j · e^{+2πijk/n}`. This is the orientation of the
//! Gauss-sum transform `G_m = Σ_j ω^{mj} θ(g^j)` with `ω = e^{2πi/(q−1)}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// `X_k = Σ_j x_j e^{+2πijk/n}` in `O(n log n)` for any `n`.
///
/// Uses `jk = (j² + k² − (k−j)²)/2` to turn the transform into a linear
/// convolution with the chirp `e^{−iπl²/n}`, evaluated with power-of-two FFTs.
pub fn bluestein(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    if n <= 1 {
        return input.to_vec();
    }
    // w_j = e^{iπ j²/n}; j² is reduced mod 2n so the angle stays small.
    let two_n = 2 * n as u64;
    let chirp: Vec<Complex64> = (0..n as u64)
        .map(|j| {
            let r = (j * j) % two_n;
            Complex64::from_polar(1.0, PI * r as f64 / n as f64)
        })
        .collect();

    let m = (2 * n - 1).next_power_of_two();
    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for (slot, (x, w)) in a.iter_mut().zip(input.iter().zip(&chirp)) {
        *slot = x * w;
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = chirp[0].conj();
    for l in 1..n {
        let c = chirp[l].conj();
        b[l] = c;
        b[m - l] = c;
    }

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(m);
    let inverse = planner.plan_fft_inverse(m);
    forward.process(&mut a);
    forward.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inverse.process(&mut a);

    let scale = 1.0 / m as f64;
    (0..n).map(|k| a[k] * chirp[k] * scale).collect()
}
