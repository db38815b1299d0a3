//! Temporally correlated block-fading MIMO channel within one block.
//!
//! Stacking conventions used everywhere in the crate:
//!
//! * `x` is transmit-antenna major, then time index: `x[t * L + l]`.
//! * `s` is transmit-antenna major, then receive antenna, then the rank index:
//!   `s[(t * R + r) * Q + q]`.
//! * `y`, `ybar` and `n` are receive-antenna major, then time index:
//!   `y[r * L + l]`.
//!
//! All indices are zero-based in code; the index-set module uses the
//! one-based `[1:L]` labels.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMatrix};
use crate::rng;
use crate::{Error, Result};

/// Antenna counts, block length and correlation rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "R")]
    pub r: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "Q")]
    pub q: usize,
}

impl Dims {
    pub fn new(t: usize, r: usize, l: usize, q: usize) -> Result<Self> {
        if t == 0 || r == 0 || l == 0 || q == 0 {
            return Err(Error::InvalidDims(format!(
                "T={t}, R={r}, L={l}, Q={q}: all must be at least 1"
            )));
        }
        if q > l {
            return Err(Error::InvalidDims(format!("Q={q} exceeds L={l}")));
        }
        Ok(Dims { t, r, l, q })
    }

    /// Rejects dims outside `T <= R`, `L > T Q`, where the index-set
    /// construction and the Jacobian witness are defined.
    pub fn require_construction_regime(&self) -> Result<()> {
        if self.t > self.r {
            return Err(Error::InvalidDims(format!(
                "T={} exceeds R={}; the construction needs T <= R",
                self.t, self.r
            )));
        }
        if self.l <= self.t * self.q {
            return Err(Error::InvalidDims(format!(
                "L={} must exceed T*Q={}",
                self.l,
                self.t * self.q
            )));
        }
        Ok(())
    }

    pub fn with_r(&self, r: usize) -> Self {
        Dims { r, ..*self }
    }

    pub fn input_len(&self) -> usize {
        self.t * self.l
    }

    pub fn fading_len(&self) -> usize {
        self.t * self.r * self.q
    }

    pub fn output_len(&self) -> usize {
        self.r * self.l
    }

    /// Every dims with `1 <= T <= R <= 6`, `1 <= Q <= 3`, `T Q < L <= 8`.
    pub fn sweep_grid() -> Vec<Dims> {
        let mut grid = Vec::new();
        for r in 1..=6 {
            for t in 1..=r {
                for q in 1..=3 {
                    for l in (t * q + 1)..=8 {
                        grid.push(Dims { t, r, l, q });
                    }
                }
            }
        }
        grid
    }
}

/// Linear signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Snr(f64);

impl Snr {
    pub fn new(rho: f64) -> Result<Self> {
        if rho > 0.0 && rho.is_finite() {
            Ok(Snr(rho))
        } else {
            Err(Error::InvalidArgument(format!("SNR must be positive and finite, got {rho}")))
        }
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Snr::new(10f64.powf(db / 10.0))
    }

    pub fn rho(&self) -> f64 {
        self.0
    }

    pub fn db(&self) -> f64 {
        10.0 * self.0.log10()
    }
}

/// Default relative rank tolerance for coloring blocks.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// The R x T grid of L x Q coloring blocks `Z_{r,t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoringMatrix {
    dims: Dims,
    // r-major: blocks[r * T + t]
    blocks: Vec<CMatrix>,
}

impl ColoringMatrix {
    /// Builds a coloring matrix, checking every block is L x Q with
    /// `sigma_min > DEFAULT_RANK_TOL * sigma_max`.
    pub fn new(dims: Dims, blocks: Vec<CMatrix>) -> Result<Self> {
        Self::with_rank_tol(dims, blocks, DEFAULT_RANK_TOL)
    }

    pub fn with_rank_tol(dims: Dims, blocks: Vec<CMatrix>, rank_tol: f64) -> Result<Self> {
        if blocks.len() != dims.r * dims.t {
            return Err(Error::Shape(format!(
                "expected {} coloring blocks, got {}",
                dims.r * dims.t,
                blocks.len()
            )));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.nrows() != dims.l || b.ncols() != dims.q {
                return Err(Error::Shape(format!(
                    "block (r={}, t={}) is {}x{}, expected {}x{}",
                    i / dims.t,
                    i % dims.t,
                    b.nrows(),
                    b.ncols(),
                    dims.l,
                    dims.q
                )));
            }
            if linalg::singular_value_ratio(b) <= rank_tol {
                return Err(Error::InvalidArgument(format!(
                    "block (r={}, t={}) is rank deficient",
                    i / dims.t,
                    i % dims.t
                )));
            }
        }
        Ok(ColoringMatrix { dims, blocks })
    }

    /// I.i.d. CN(0, 1) entries.
    pub fn gaussian<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> Self {
        let blocks = (0..dims.r * dims.t)
            .map(|_| CMatrix::from_fn(dims.l, dims.q, |_, _| rng::complex_gaussian(rng)))
            .collect();
        ColoringMatrix { dims, blocks }
    }

    /// Gaussian coloring matrix drawn from the reserved coloring stream of `seed`.
    pub fn from_seed(dims: Dims, seed: u64) -> Self {
        Self::gaussian(dims, &mut rng::stream(seed, rng::COLORING_STREAM))
    }

    /// All-ones blocks (Q = 1 gives the classic constant block-fading model).
    pub fn ones(dims: Dims) -> Self {
        let blocks = vec![CMatrix::from_element(dims.l, dims.q, Complex64::new(1.0, 0.0)); dims.r * dims.t];
        ColoringMatrix { dims, blocks }
    }

    pub(crate) fn from_blocks_unchecked(dims: Dims, blocks: Vec<CMatrix>) -> Self {
        debug_assert_eq!(blocks.len(), dims.r * dims.t);
        ColoringMatrix { dims, blocks }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Block `Z_{r,t}` (zero-based indices).
    pub fn block(&self, r: usize, t: usize) -> &CMatrix {
        &self.blocks[r * self.dims.t + t]
    }

    pub(crate) fn block_mut(&mut self, r: usize, t: usize) -> &mut CMatrix {
        &mut self.blocks[r * self.dims.t + t]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        ColoringMatrix {
            dims: self.dims,
            blocks: self.blocks.iter().map(|b| b * alpha).collect(),
        }
    }

    /// The stacked RL x TQ matrix.
    pub fn stacked(&self) -> CMatrix {
        let Dims { t, r, l, q } = self.dims;
        let mut z = CMatrix::zeros(r * l, t * q);
        for rr in 0..r {
            for tt in 0..t {
                z.view_mut((rr * l, tt * q), (l, q)).copy_from(self.block(rr, tt));
            }
        }
        z
    }

    fn check_dims(&self, dims: Dims) -> Result<()> {
        if self.dims != dims {
            return Err(Error::Shape(format!(
                "coloring matrix built for {:?}, used with {:?}",
                self.dims, dims
            )));
        }
        Ok(())
    }
}

/// The transmitted block `x`, length TL.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelInput {
    l: usize,
    x: Vec<Complex64>,
}

impl ChannelInput {
    pub fn new(dims: Dims, x: Vec<Complex64>) -> Result<Self> {
        if x.len() != dims.input_len() {
            return Err(Error::Shape(format!("input has length {}, expected {}", x.len(), dims.input_len())));
        }
        if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("input has non-finite entries".into()));
        }
        Ok(ChannelInput { l: dims.l, x })
    }

    pub fn ones(dims: Dims) -> Self {
        ChannelInput { l: dims.l, x: vec![Complex64::new(1.0, 0.0); dims.input_len()] }
    }

    pub fn zeros(dims: Dims) -> Self {
        ChannelInput { l: dims.l, x: vec![Complex64::new(0.0, 0.0); dims.input_len()] }
    }

    /// `x_t`, the signal on transmit antenna `t`.
    pub fn antenna(&self, t: usize) -> &[Complex64] {
        &self.x[t * self.l..(t + 1) * self.l]
    }

    /// `X_t = diag(x_t)`.
    pub fn diag(&self, t: usize) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(self.antenna(t)))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.x
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        ChannelInput { l: self.l, x: self.x.iter().map(|v| v * alpha).collect() }
    }

    fn check_dims(&self, dims: Dims) -> Result<()> {
        if self.l != dims.l || self.x.len() != dims.input_len() {
            return Err(Error::Shape("channel input does not match dims".into()));
        }
        Ok(())
    }
}

/// Whitened fading vectors `s_{r,t}` so that `h_{r,t} = Z_{r,t} s_{r,t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingRealization {
    r: usize,
    q: usize,
    s: Vec<Complex64>,
}

impl FadingRealization {
    pub fn new(dims: Dims, s: Vec<Complex64>) -> Result<Self> {
        if s.len() != dims.fading_len() {
            return Err(Error::Shape(format!("fading vector has length {}, expected {}", s.len(), dims.fading_len())));
        }
        Ok(FadingRealization { r: dims.r, q: dims.q, s })
    }

    pub fn zeros(dims: Dims) -> Self {
        FadingRealization { r: dims.r, q: dims.q, s: vec![Complex64::new(0.0, 0.0); dims.fading_len()] }
    }

    /// `s_{r,t}` (length Q).
    pub fn block(&self, r: usize, t: usize) -> &[Complex64] {
        let o = (t * self.r + r) * self.q;
        &self.s[o..o + self.q]
    }

    pub(crate) fn block_mut(&mut self, r: usize, t: usize) -> &mut [Complex64] {
        let o = (t * self.r + r) * self.q;
        &mut self.s[o..o + self.q]
    }

    /// `s_t` (length RQ).
    pub fn antenna(&self, t: usize) -> &[Complex64] {
        let len = self.r * self.q;
        &self.s[t * len..(t + 1) * len]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.s
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        FadingRealization { r: self.r, q: self.q, s: self.s.iter().map(|v| v * alpha).collect() }
    }

    fn check_dims(&self, dims: Dims) -> Result<()> {
        if self.r != dims.r || self.q != dims.q || self.s.len() != dims.fading_len() {
            return Err(Error::Shape("fading realization does not match dims".into()));
        }
        Ok(())
    }
}

/// Receiver noise `n`, length RL.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRealization {
    n: Vec<Complex64>,
}

impl NoiseRealization {
    pub fn new(dims: Dims, n: Vec<Complex64>) -> Result<Self> {
        if n.len() != dims.output_len() {
            return Err(Error::Shape(format!("noise has length {}, expected {}", n.len(), dims.output_len())));
        }
        Ok(NoiseRealization { n })
    }

    pub fn zeros(dims: Dims) -> Self {
        NoiseRealization { n: vec![Complex64::new(0.0, 0.0); dims.output_len()] }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.n
    }
}

/// `Xi_t = blockdiag(X_t Z_{1,t}, ..., X_t Z_{R,t})`, an RL x RQ matrix.
pub fn xi(dims: Dims, z: &ColoringMatrix, x: &ChannelInput, t: usize) -> CMatrix {
    let Dims { r, l, q, .. } = dims;
    let xt = x.diag(t);
    let mut m = CMatrix::zeros(r * l, r * q);
    for rr in 0..r {
        m.view_mut((rr * l, rr * q), (l, q)).copy_from(&(&xt * z.block(rr, t)));
    }
    m
}

/// Noise-free output `ybar = sum_t Xi_t s_t`.
pub fn ybar(dims: Dims, z: &ColoringMatrix, x: &ChannelInput, s: &FadingRealization) -> Result<Vec<Complex64>> {
    z.check_dims(dims)?;
    x.check_dims(dims)?;
    s.check_dims(dims)?;
    let mut acc = nalgebra::DVector::<Complex64>::zeros(dims.output_len());
    for t in 0..dims.t {
        let st = nalgebra::DVector::from_column_slice(s.antenna(t));
        acc += xi(dims, z, x, t) * st;
    }
    Ok(acc.iter().copied().collect())
}

/// `y = sqrt(rho / T) ybar + n`.
pub fn apply_channel(
    dims: Dims,
    snr: Snr,
    z: &ColoringMatrix,
    x: &ChannelInput,
    s: &FadingRealization,
    n: &NoiseRealization,
) -> Result<Vec<Complex64>> {
    if n.n.len() != dims.output_len() {
        return Err(Error::Shape("noise does not match dims".into()));
    }
    let gain = (snr.rho() / dims.t as f64).sqrt();
    let yb = ybar(dims, z, x, s)?;
    Ok(yb.iter().zip(&n.n).map(|(a, b)| a * gain + b).collect())
}

/// Per-receive-antenna form `y_r = sqrt(rho/T) sum_t diag(h_{r,t}) x_t + n_r`
/// with `h_{r,t} = Z_{r,t} s_{r,t}`. Same result as [`apply_channel`] by a
/// different evaluation order.
pub fn apply_channel_per_antenna(
    dims: Dims,
    snr: Snr,
    z: &ColoringMatrix,
    x: &ChannelInput,
    s: &FadingRealization,
    n: &NoiseRealization,
) -> Result<Vec<Complex64>> {
    z.check_dims(dims)?;
    x.check_dims(dims)?;
    s.check_dims(dims)?;
    if n.n.len() != dims.output_len() {
        return Err(Error::Shape("noise does not match dims".into()));
    }
    let gain = (snr.rho() / dims.t as f64).sqrt();
    let mut y = n.n.clone();
    for r in 0..dims.r {
        for t in 0..dims.t {
            let h = z.block(r, t) * nalgebra::DVector::from_column_slice(s.block(r, t));
            let xt = x.antenna(t);
            for l in 0..dims.l {
                y[r * dims.l + l] += gain * h[l] * xt[l];
            }
        }
    }
    Ok(y)
}

/// Draws `x`, `s`, `n` i.i.d. CN(0, 1), in that order, from a generator
/// seeded with `seed`.
pub fn sample_realization(dims: Dims, seed: u64) -> (ChannelInput, FadingRealization, NoiseRealization) {
    sample_with(dims, &mut rng::stream(seed, 0))
}

pub(crate) fn sample_with<R: Rng + ?Sized>(
    dims: Dims,
    rng: &mut R,
) -> (ChannelInput, FadingRealization, NoiseRealization) {
    let x = rng::complex_gaussian_vec(rng, dims.input_len());
    let s = rng::complex_gaussian_vec(rng, dims.fading_len());
    let n = rng::complex_gaussian_vec(rng, dims.output_len());
    (
        ChannelInput { l: dims.l, x },
        FadingRealization { r: dims.r, q: dims.q, s },
        NoiseRealization { n },
    )
}

/// The L x L diagonal block for receive antenna `r` of the conditional
/// covariance of `y` given `x`: `I_L + (rho/T) sum_t X_t Z_{r,t} Z_{r,t}^H X_t^H`.
/// Blocks for different receive antennas are uncorrelated.
fn covariance_block(dims: Dims, snr: Snr, z: &ColoringMatrix, x: &ChannelInput, r: usize) -> CMatrix {
    let scale = snr.rho() / dims.t as f64;
    let mut c = CMatrix::identity(dims.l, dims.l);
    for t in 0..dims.t {
        let xt = x.antenna(t);
        let b = z.block(r, t);
        let xz = DMatrix::from_fn(dims.l, dims.q, |i, j| xt[i] * b[(i, j)]);
        c += (&xz * xz.adjoint()) * Complex64::new(scale, 0.0);
    }
    c
}

/// Covariance `I_RL + (rho/T) sum_t Xi_t Xi_t^H` of `y` given `x`.
pub fn conditional_covariance(dims: Dims, snr: Snr, z: &ColoringMatrix, x: &ChannelInput) -> Result<CMatrix> {
    z.check_dims(dims)?;
    x.check_dims(dims)?;
    let l = dims.l;
    let mut c = CMatrix::zeros(dims.output_len(), dims.output_len());
    for r in 0..dims.r {
        c.view_mut((r * l, r * l), (l, l)).copy_from(&covariance_block(dims, snr, z, x, r));
    }
    Ok(c)
}

/// `h(y | x = x) = log det(pi e Sigma(x))` in nats.
pub fn conditional_entropy_given_x(dims: Dims, snr: Snr, z: &ColoringMatrix, x: &ChannelInput) -> Result<f64> {
    z.check_dims(dims)?;
    x.check_dims(dims)?;
    let base = dims.output_len() as f64 * (std::f64::consts::PI * std::f64::consts::E).ln();
    let mut logdet = 0.0;
    for r in 0..dims.r {
        let block = covariance_block(dims, snr, z, x, r);
        logdet += linalg::hermitian_logdet(&block)
            .ok_or_else(|| Error::Verification("conditional covariance not positive definite".into()))?;
    }
    Ok(base + logdet)
}
