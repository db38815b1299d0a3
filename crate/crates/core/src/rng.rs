//! Seeded generator streams and circularly symmetric complex Gaussians.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Stream id reserved for drawing a coloring matrix from a master seed.
/// Per-sample streams use ids `0..samples`, which never reach this value.
pub const COLORING_STREAM: u64 = 1 << 63;

/// Independent stream `stream` of the ChaCha8 generator keyed by `seed`.
///
/// Each Monte Carlo sample or trial gets its own stream, so the value it
/// produces is fixed by `(seed, index)` regardless of which thread runs it.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One draw from CN(0, 1): independent real and imaginary parts, each with
/// variance 1/2.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_gaussian_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}
