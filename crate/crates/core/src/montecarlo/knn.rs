//! Kozachenko–Leonenko k-nearest-neighbour differential entropy estimate.
//!
//! `h ≈ psi(N) - psi(k) + log V_d + (d / N) sum_i log eps_i`, with `eps_i`
//! the Euclidean distance from sample `i` to its k-th nearest neighbour and
//! `V_d` the volume of the unit d-ball. Output is in nats.

use kiddo::{ImmutableKdTree, SquaredEuclidean};
use statrs::function::gamma::{digamma, ln_gamma};

use crate::exec;
use crate::{Error, Result};

/// Largest supported real dimension.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub value: f64,
    /// Standard error of the mean of the per-sample log-distance terms.
    pub std_err: f64,
}

pub fn ln_unit_ball_volume(dim: usize) -> f64 {
    let d = dim as f64;
    0.5 * d * std::f64::consts::PI.ln() - ln_gamma(0.5 * d + 1.0)
}

/// Estimates the entropy of the samples stored row-major in `points`, each
/// `dim` reals long.
pub fn kl_entropy(points: &[f64], dim: usize, k: usize) -> Result<EntropyEstimate> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidArgument(format!("k-NN entropy supports 1..={MAX_DIM} dimensions, got {dim}")));
    }
    if !points.len().is_multiple_of(dim) {
        return Err(Error::Shape(format!("{} reals do not split into {dim}-vectors", points.len())));
    }
    let n = points.len() / dim;
    if k == 0 || n <= k {
        return Err(Error::InvalidArgument(format!("need more than k={k} samples, got {n}")));
    }
    let log_dists = match dim {
        1 => log_knn_distances::<1>(points, k),
        2 => log_knn_distances::<2>(points, k),
        3 => log_knn_distances::<3>(points, k),
        4 => log_knn_distances::<4>(points, k),
        5 => log_knn_distances::<5>(points, k),
        6 => log_knn_distances::<6>(points, k),
        7 => log_knn_distances::<7>(points, k),
        8 => log_knn_distances::<8>(points, k),
        _ => unreachable!(),
    };
    if log_dists.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("duplicate samples: zero nearest-neighbour distance".into()));
    }
    let terms: Vec<f64> = log_dists.iter().map(|v| dim as f64 * v).collect();
    let (mean, std_err) = exec::mean_and_std_err(&terms);
    let value = digamma(n as f64) - digamma(k as f64) + ln_unit_ball_volume(dim) + mean;
    Ok(EntropyEstimate { value, std_err })
}

fn log_knn_distances<const D: usize>(points: &[f64], k: usize) -> Vec<f64> {
    let pts: Vec<[f64; D]> = points
        .chunks_exact(D)
        .map(|c| c.try_into().expect("chunk has D entries"))
        .collect();
    let tree: ImmutableKdTree<f64, D> = ImmutableKdTree::new_from_slice(&pts);
    exec::map_indexed(pts.len(), |i| {
        // the query point itself comes back first at distance zero
        let nn = tree.nearest_n::<SquaredEuclidean>(&pts[i], k + 1);
        0.5 * nn[k].distance.ln()
    })
}
