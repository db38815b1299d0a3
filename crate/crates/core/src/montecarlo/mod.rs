//! Seeded Monte Carlo checks.
//!
//! * [`mc_logdet`]: `E[log |det J|^2]` over Gaussian `(s, x)`, the integral
//!   that has to be finite for the entropy lower bound.
//! * [`hyx_growth_check`]: slope of `E_x[h(y | x)]` against `log rho`.
//! * [`mc_mi_slope`]: slope of a k-NN estimate of `I(x; y) / L` against
//!   `log rho` under Gaussian inputs. This is the slope of a lower bound on
//!   the pre-log, not the pre-log itself.
//!
//! Sample `i` always reads stream `i` of the master seed. Every SNR point
//! reuses the same samples, so slopes are free of between-point sampling
//! noise.

pub mod knn;

use num_complex::Complex64;
use serde::Serialize;

use crate::exec;
use crate::index_sets::IndexSelection;
use crate::jacobian::{self, DEFAULT_TOL};
use crate::linalg;
use crate::model::{self, ChannelInput, ColoringMatrix, FadingRealization};
use crate::rng;
use crate::{Dims, Error, Result, Snr};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Ascending SNR points.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrGrid {
    points: Vec<Snr>,
}

impl SnrGrid {
    pub fn new(points: Vec<Snr>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidArgument(format!("SNR grid needs at least 3 points, got {}", points.len())));
        }
        if points.windows(2).any(|w| w[1].rho() <= w[0].rho()) {
            return Err(Error::InvalidArgument("SNR grid must be strictly increasing".into()));
        }
        Ok(SnrGrid { points })
    }

    /// `points` values evenly spaced in dB from `start_db` to `stop_db`.
    pub fn log_spaced_db(start_db: f64, stop_db: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidArgument(format!("SNR grid needs at least 3 points, got {points}")));
        }
        let step = (stop_db - start_db) / (points - 1) as f64;
        let snrs = (0..points)
            .map(|i| Snr::from_db(start_db + step * i as f64))
            .collect::<Result<Vec<_>>>()?;
        SnrGrid::new(snrs)
    }

    pub fn points(&self) -> &[Snr] {
        &self.points
    }

    fn log_rhos(&self) -> Vec<f64> {
        self.points.iter().map(|s| s.rho().ln()).collect()
    }
}

impl Default for SnrGrid {
    /// Five points over 20–40 dB.
    fn default() -> Self {
        SnrGrid::log_spaced_db(20.0, 40.0, 5).expect("static grid is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogDetEstimate {
    pub estimate: McEstimate,
    /// Draws whose Jacobian failed `sigma_min > tol * sigma_max`; they
    /// contribute `log(tol^2)`.
    pub floored: usize,
    pub floored_fraction: f64,
    pub tol: f64,
}

pub fn mc_logdet(
    dims: Dims,
    z: &ColoringMatrix,
    sel: &IndexSelection,
    samples: usize,
    seed: u64,
) -> Result<LogDetEstimate> {
    mc_logdet_with_tol(dims, z, sel, samples, seed, DEFAULT_TOL)
}

pub fn mc_logdet_with_tol(
    dims: Dims,
    z: &ColoringMatrix,
    sel: &IndexSelection,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<LogDetEstimate> {
    if samples < 2 {
        return Err(Error::InvalidArgument("mc_logdet needs at least 2 samples".into()));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    // surfaces selection and shape errors before the parallel loop
    jacobian::assemble(dims, sel, z, &ChannelInput::ones(dims), &FadingRealization::zeros(dims))?;
    let floor = (tol * tol).ln();
    let draws: Vec<(f64, bool)> = exec::map_indexed(samples, |i| {
        let mut r = rng::stream(seed, i as u64);
        let x = ChannelInput::new(dims, rng::complex_gaussian_vec(&mut r, dims.input_len())).expect("dims");
        let s = FadingRealization::new(dims, rng::complex_gaussian_vec(&mut r, dims.fading_len())).expect("dims");
        let j = jacobian::assemble(dims, sel, z, &x, &s).expect("validated above");
        if linalg::singular_value_ratio(&j.matrix) > tol {
            (2.0 * jacobian::log_abs_det(&j).log_abs, false)
        } else {
            (floor, true)
        }
    });
    let values: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let floored = draws.iter().filter(|d| d.1).count();
    let (mean, std_err) = exec::mean_and_std_err(&values);
    Ok(LogDetEstimate {
        estimate: McEstimate { mean, std_err, samples, seed },
        floored,
        floored_fraction: floored as f64 / samples as f64,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthPoint {
    pub snr_db: f64,
    pub rho: f64,
    pub h_y_given_x: McEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub slope: f64,
    pub intercept: f64,
    pub per_point: Vec<GrowthPoint>,
}

fn conditional_entropies(dims: Dims, z: &ColoringMatrix, inputs: &[ChannelInput], snr: Snr) -> Result<Vec<f64>> {
    exec::map_indexed(inputs.len(), |i| model::conditional_entropy_given_x(dims, snr, z, &inputs[i]))
        .into_iter()
        .collect()
}

/// Regression of `E_x[h(y | x)]` (closed form per `x`, averaged over
/// `samples` Gaussian inputs) on `log rho`.
pub fn hyx_growth_check(
    dims: Dims,
    z: &ColoringMatrix,
    grid: &SnrGrid,
    samples: usize,
    seed: u64,
) -> Result<GrowthReport> {
    if samples < 2 {
        return Err(Error::InvalidArgument("hyx_growth_check needs at least 2 samples".into()));
    }
    if z.dims() != dims {
        return Err(Error::Shape("coloring matrix does not match dims".into()));
    }
    let inputs: Vec<ChannelInput> = exec::map_indexed(samples, |i| {
        let mut r = rng::stream(seed, i as u64);
        ChannelInput::new(dims, rng::complex_gaussian_vec(&mut r, dims.input_len())).expect("dims")
    });
    let mut per_point = Vec::with_capacity(grid.points().len());
    for &snr in grid.points() {
        let h = conditional_entropies(dims, z, &inputs, snr)?;
        let (mean, std_err) = exec::mean_and_std_err(&h);
        per_point.push(GrowthPoint {
            snr_db: snr.db(),
            rho: snr.rho(),
            h_y_given_x: McEstimate { mean, std_err, samples, seed },
        });
    }
    let ys: Vec<f64> = per_point.iter().map(|p| p.h_y_given_x.mean).collect();
    let (slope, intercept) = exec::least_squares(&grid.log_rhos(), &ys);
    Ok(GrowthReport { slope, intercept, per_point })
}

/// Largest `R L` accepted by [`mc_mi_slope`] (real dimension `2 R L <= 8`).
pub const MAX_MI_OUTPUT: usize = 4;

/// Default neighbour rank for the entropy estimator.
pub const DEFAULT_KNN_K: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiPoint {
    pub snr_db: f64,
    pub rho: f64,
    /// k-NN estimate of `h(y)`.
    pub h_y: McEstimate,
    /// Sample average of the closed-form `h(y | x)`.
    pub h_y_given_x: McEstimate,
    /// `h_y - h_y_given_x`, nats per block.
    pub mi: McEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiSlope {
    /// Least-squares slope of `mi / L` against `log rho`.
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_err: f64,
    pub per_point: Vec<MiPoint>,
}

pub fn mc_mi_slope(
    dims: Dims,
    z: &ColoringMatrix,
    grid: &SnrGrid,
    samples: usize,
    knn_k: usize,
    seed: u64,
) -> Result<MiSlope> {
    if dims.output_len() > MAX_MI_OUTPUT {
        return Err(Error::InvalidArgument(format!(
            "R*L = {} exceeds {MAX_MI_OUTPUT}; the k-NN entropy estimate is unreliable there",
            dims.output_len()
        )));
    }
    if knn_k == 0 {
        return Err(Error::InvalidArgument("knn_k must be at least 1".into()));
    }
    if samples < 100 * knn_k {
        return Err(Error::InvalidArgument(format!(
            "{samples} samples is fewer than 100 * knn_k = {}",
            100 * knn_k
        )));
    }
    if z.dims() != dims {
        return Err(Error::Shape("coloring matrix does not match dims".into()));
    }

    let draws: Vec<(ChannelInput, Vec<Complex64>, Vec<Complex64>)> = exec::map_indexed(samples, |i| {
        let (x, s, n) = model::sample_with(dims, &mut rng::stream(seed, i as u64));
        let yb = model::ybar(dims, z, &x, &s).expect("dims");
        (x, yb, n.as_slice().to_vec())
    });
    let inputs: Vec<ChannelInput> = draws.iter().map(|d| d.0.clone()).collect();
    let dim = 2 * dims.output_len();

    let mut per_point = Vec::with_capacity(grid.points().len());
    for &snr in grid.points() {
        let gain = (snr.rho() / dims.t as f64).sqrt();
        let mut pts = Vec::with_capacity(samples * dim);
        for (_, yb, n) in &draws {
            for (a, b) in yb.iter().zip(n) {
                let y = a * gain + b;
                pts.push(y.re);
                pts.push(y.im);
            }
        }
        let hy = knn::kl_entropy(&pts, dim, knn_k)?;
        let hyx = conditional_entropies(dims, z, &inputs, snr)?;
        let (hyx_mean, hyx_se) = exec::mean_and_std_err(&hyx);
        let est = |mean, std_err| McEstimate { mean, std_err, samples, seed };
        per_point.push(MiPoint {
            snr_db: snr.db(),
            rho: snr.rho(),
            h_y: est(hy.value, hy.std_err),
            h_y_given_x: est(hyx_mean, hyx_se),
            mi: est(hy.value - hyx_mean, hy.std_err.hypot(hyx_se)),
        });
    }
    let l = dims.l as f64;
    let xs = grid.log_rhos();
    let ys: Vec<f64> = per_point.iter().map(|p| p.mi.mean / l).collect();
    let errs: Vec<f64> = per_point.iter().map(|p| p.mi.std_err / l).collect();
    let (slope, intercept) = exec::least_squares(&xs, &ys);
    Ok(MiSlope { slope, intercept, slope_std_err: exec::slope_std_err(&xs, &errs), per_point })
}
