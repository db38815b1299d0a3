//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// `log |det M|` together with the unit phase `det M / |det M|`.
///
/// A singular matrix is flagged by `log_abs == -inf` and `phase == 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_abs: f64,
    pub phase: Complex64,
}

impl LogDet {
    pub fn is_singular(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    /// The determinant itself. Overflows for very large `log_abs`.
    pub fn value(&self) -> Complex64 {
        if self.is_singular() {
            Complex64::new(0.0, 0.0)
        } else {
            self.phase * self.log_abs.exp()
        }
    }
}

/// Log-determinant through LU factorisation with partial pivoting.
///
/// A pivot is treated as zero when it is exactly zero or non-finite; the
/// numerical rank decision belongs to [`singular_value_ratio`].
pub fn log_abs_det(m: &CMatrix) -> LogDet {
    assert!(m.is_square(), "log_abs_det of a non-square matrix");
    let n = m.nrows();
    let mut a = m.clone();
    let mut log_abs = 0.0;
    let mut phase = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let (mut piv, mut best) = (k, 0.0);
        for i in k..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return LogDet {
                log_abs: f64::NEG_INFINITY,
                phase: Complex64::new(0.0, 0.0),
            };
        }
        if piv != k {
            a.swap_rows(piv, k);
            phase = -phase;
        }
        let p = a[(k, k)];
        log_abs += best.ln();
        phase *= p / best;
        for i in (k + 1)..n {
            let f = a[(i, k)] / p;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in (k + 1)..n {
                let u = a[(k, j)];
                a[(i, j)] -= f * u;
            }
        }
    }
    LogDet { log_abs, phase }
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// `sigma_min / sigma_max`; zero for the zero matrix, and 1 for 0x0.
pub fn singular_value_ratio(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        (Some(_), _) => 0.0,
        _ => 1.0,
    }
}

/// Scale-free nonsingularity test `sigma_min > tol * sigma_max`.
pub fn is_nonsingular(m: &CMatrix, tol: f64) -> bool {
    singular_value_ratio(m) > tol
}

/// `log det` of a Hermitian positive definite matrix via Cholesky.
pub fn hermitian_logdet(m: &CMatrix) -> Option<f64> {
    let chol = m.clone().cholesky()?;
    let l = chol.l_dirty();
    Some((0..m.nrows()).map(|i| 2.0 * l[(i, i)].re.ln()).sum())
}
