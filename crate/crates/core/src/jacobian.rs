//! The square Jacobian of `(s, x_D) -> P ybar` and its nonsingularity.
//!
//! Rows are the selected outputs `(r, i)` with `i` in `I_r`, receive antenna
//! major. The first TQR columns are the derivatives with respect to `s` in
//! its stacking order (`t`, `r`, `q`); the remaining columns are the
//! derivatives with respect to the data symbols `x_t[d]`, `d` in `D_t`,
//! grouped by `t`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::exec;
use crate::index_sets::{self, IndexSelection};
use crate::linalg::{self, CMatrix, LogDet};
use crate::model::{ChannelInput, ColoringMatrix, FadingRealization};
use crate::rng;
use crate::{Dims, Error, Result};

/// Default relative tolerance for declaring a Jacobian nonsingular.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance the explicit witness must clear.
pub const WITNESS_TOL: f64 = 1e-6;

/// Attempts made by [`witness`] before giving up.
pub const WITNESS_ATTEMPTS: usize = 16;

/// Output row `(r, i)`: receive antenna (zero-based) and time label (one-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowLabel {
    pub r: usize,
    pub i: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ColumnLabel {
    /// Derivative with respect to `s_{r,t}[q]` (zero-based).
    Fading { t: usize, r: usize, q: usize },
    /// Derivative with respect to `x_t[d]`, `d` a one-based data label.
    Data { t: usize, d: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianAssembly {
    pub matrix: CMatrix,
    pub rows: Vec<RowLabel>,
    pub columns: Vec<ColumnLabel>,
}

impl JacobianAssembly {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `a_{r,t}^{(l)} = [Z_{r,t}]_{l} s_{r,t}` for a one-based label `l`.
fn fading_coefficient(z: &ColoringMatrix, s: &FadingRealization, r: usize, t: usize, label: usize) -> Complex64 {
    let b = z.block(r, t);
    s.block(r, t)
        .iter()
        .enumerate()
        .map(|(q, sq)| b[(label - 1, q)] * sq)
        .sum()
}

/// Builds the Jacobian for a selection that passes
/// [`index_sets::validate_selection`].
pub fn assemble(
    dims: Dims,
    sel: &IndexSelection,
    z: &ColoringMatrix,
    x: &ChannelInput,
    s: &FadingRealization,
) -> Result<JacobianAssembly> {
    dims.require_construction_regime()?;
    let report = index_sets::validate_selection(dims, sel);
    if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
        return Err(Error::InvalidArgument(format!("index selection fails {}: {}", bad.name, bad.detail)));
    }
    if z.dims() != dims || x.as_slice().len() != dims.input_len() || s.as_slice().len() != dims.fading_len() {
        return Err(Error::Shape("Jacobian inputs do not match dims".into()));
    }
    assemble_unchecked(dims, sel, z, x, s)
}

fn assemble_unchecked(
    dims: Dims,
    sel: &IndexSelection,
    z: &ColoringMatrix,
    x: &ChannelInput,
    s: &FadingRealization,
) -> Result<JacobianAssembly> {
    let Dims { t: nt, r: nr, q: nq, .. } = dims;
    let rows: Vec<RowLabel> = (0..nr)
        .flat_map(|r| sel.i_sets[r].iter().map(move |&i| RowLabel { r, i }))
        .collect();
    let mut columns = Vec::with_capacity(rows.len());
    for t in 0..nt {
        for r in 0..nr {
            for q in 0..nq {
                columns.push(ColumnLabel::Fading { t, r, q });
            }
        }
    }
    for t in 0..nt {
        for &d in &sel.d_sets[t] {
            columns.push(ColumnLabel::Data { t, d });
        }
    }
    if rows.len() != columns.len() {
        return Err(Error::Shape(format!("{} rows but {} columns", rows.len(), columns.len())));
    }
    let n = rows.len();
    let mut m = CMatrix::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        match *col {
            ColumnLabel::Fading { t, r, q } => {
                let xt = x.antenna(t);
                let b = z.block(r, t);
                for (row_idx, row) in rows.iter().enumerate().filter(|(_, row)| row.r == r) {
                    m[(row_idx, j)] = xt[row.i - 1] * b[(row.i - 1, q)];
                }
            }
            ColumnLabel::Data { t, d } => {
                for (row_idx, row) in rows.iter().enumerate().filter(|(_, row)| row.i == d) {
                    m[(row_idx, j)] = fading_coefficient(z, s, row.r, t, d);
                }
            }
        }
    }
    Ok(JacobianAssembly { matrix: m, rows, columns })
}

/// `log |det J|` and phase of an assembled Jacobian.
pub fn log_abs_det(j: &JacobianAssembly) -> LogDet {
    linalg::log_abs_det(&j.matrix)
}

/// How each genericity trial draws its coloring matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialColoring {
    /// I.i.d. CN(0, 1) entries, fresh per trial.
    Gaussian,
    /// Equal blocks, a fresh CN(0, 1) base block per trial.
    ConstantFading,
    /// The same coloring matrix in every trial.
    Fixed(ColoringMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialSetup {
    pub coloring: TrialColoring,
    /// Force `x = 0` in every trial.
    pub zero_input: bool,
}

impl Default for TrialSetup {
    fn default() -> Self {
        TrialSetup { coloring: TrialColoring::Gaussian, zero_input: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericityReport {
    pub trials: usize,
    pub nonsingular: usize,
    pub fraction: f64,
    /// Smallest `sigma_min / sigma_max` seen over all trials.
    pub min_ratio: f64,
    pub n: usize,
}

fn draw_coloring<R: Rng + ?Sized>(dims: Dims, coloring: &TrialColoring, rng: &mut R) -> ColoringMatrix {
    match coloring {
        TrialColoring::Gaussian => ColoringMatrix::gaussian(dims, rng),
        TrialColoring::ConstantFading => {
            let base = CMatrix::from_fn(dims.l, dims.q, |_, _| rng::complex_gaussian(rng));
            ColoringMatrix::from_blocks_unchecked(dims, vec![base; dims.r * dims.t])
        }
        TrialColoring::Fixed(z) => z.clone(),
    }
}

/// Fraction of seeded random `(Z, x, s)` draws whose Jacobian satisfies
/// `sigma_min > tol * sigma_max`. Trial `k` uses stream `k` of `seed`.
pub fn genericity_trial(
    dims: Dims,
    sel: &IndexSelection,
    trials: usize,
    seed: u64,
    tol: f64,
    setup: &TrialSetup,
) -> Result<GenericityReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    if let TrialColoring::Fixed(z) = &setup.coloring {
        if z.dims() != dims {
            return Err(Error::Shape("fixed coloring matrix does not match dims".into()));
        }
    }
    // Validate once; the per-trial assembly skips the checks.
    let probe = ColoringMatrix::ones(dims);
    assemble(dims, sel, &probe, &ChannelInput::ones(dims), &FadingRealization::zeros(dims))?;

    let ratios = exec::map_indexed(trials, |k| {
        let mut rng = rng::stream(seed, k as u64);
        let z = draw_coloring(dims, &setup.coloring, &mut rng);
        let x = rng::complex_gaussian_vec(&mut rng, dims.input_len());
        let s = rng::complex_gaussian_vec(&mut rng, dims.fading_len());
        let x = if setup.zero_input {
            ChannelInput::zeros(dims)
        } else {
            ChannelInput::new(dims, x).expect("sampled input matches dims")
        };
        let s = FadingRealization::new(dims, s).expect("sampled fading matches dims");
        let j = assemble_unchecked(dims, sel, &z, &x, &s).expect("validated selection");
        linalg::singular_value_ratio(&j.matrix)
    });
    let nonsingular = ratios.iter().filter(|&&r| r > tol).count();
    Ok(GenericityReport {
        trials,
        nonsingular,
        fraction: nonsingular as f64 / trials as f64,
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        n: sel.rows(),
    })
}

/// Coloring matrix with every block equal to `base`.
pub fn constant_fading_z(dims: Dims, base: &CMatrix) -> Result<ColoringMatrix> {
    ColoringMatrix::new(dims, vec![base.clone(); dims.r * dims.t])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub log_abs_det: f64,
    pub sv_ratio: f64,
    pub tol: f64,
    pub attempts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub z: ColoringMatrix,
    pub x: ChannelInput,
    pub s: FadingRealization,
    pub selection: IndexSelection,
    pub certificate: Certificate,
}

/// Explicit `(Z, x = 1, s)` with a nonsingular Jacobian, built antenna by
/// antenna.
///
/// Base case (the first T receive antennas): `s_{r,t} = 0` for `r != t`, and
/// random blocks, which makes the pilot rows of each antenna nonsingular and
/// the diagonal data entries nonzero with probability one.
///
/// Each further receive antenna `R'` uses the sets of [`index_sets::lemma5_sets`]
/// for `R'`: rows `G \ G_t` of `Z_{R',t}` are zero, rows `G_t` random,
/// `s_{R',t}` annihilates the rows `G_t \ {g_t}`, rows in the other
/// antennas' `L_t'` are zero and rows in `L_t` stay random. Rows outside
/// `I_R'` are unconstrained.
///
/// The result is accepted once `sigma_min > tol * sigma_max`; up to
/// [`WITNESS_ATTEMPTS`] independent draws are tried.
pub fn witness(dims: Dims, seed: u64, tol: f64) -> Result<Witness> {
    dims.require_construction_regime()?;
    let selection = IndexSelection::canonical(dims)?;
    let steps: Vec<index_sets::Lemma5Sets> = ((dims.t + 1)..=dims.r)
        .map(|rp| index_sets::lemma5_sets(dims.with_r(rp)))
        .collect::<Result<_>>()?;
    let x = ChannelInput::ones(dims);
    let mut best = 0.0f64;
    for attempt in 0..WITNESS_ATTEMPTS {
        let mut rng = rng::stream(seed, attempt as u64);
        let (z, s) = witness_draw(dims, &steps, &mut rng)?;
        let j = assemble(dims, &selection, &z, &x, &s)?;
        let ratio = linalg::singular_value_ratio(&j.matrix);
        best = best.max(ratio);
        if ratio > tol {
            let certificate = Certificate {
                log_abs_det: log_abs_det(&j).log_abs,
                sv_ratio: ratio,
                tol,
                attempts: attempt + 1,
            };
            return Ok(Witness { z, x, s, selection, certificate });
        }
    }
    Err(Error::Construction(format!(
        "no witness for {dims:?} after {WITNESS_ATTEMPTS} attempts (best sigma ratio {best:e})"
    )))
}

fn witness_draw<R: Rng + ?Sized>(
    dims: Dims,
    steps: &[index_sets::Lemma5Sets],
    rng: &mut R,
) -> Result<(ColoringMatrix, FadingRealization)> {
    let zero = Complex64::new(0.0, 0.0);
    let mut z = ColoringMatrix::gaussian(dims, rng);
    let mut s = FadingRealization::zeros(dims);
    for t in 0..dims.t {
        for v in s.block_mut(t, t) {
            *v = rng::complex_gaussian(rng);
        }
    }

    for (step, sets) in steps.iter().enumerate() {
        let r = dims.t + step;
        let mut in_g = vec![false; dims.l + 1];
        for &i in sets.g_sets.iter().flatten() {
            in_g[i] = true;
        }
        for t in 0..dims.t {
            let g_t = &sets.g_sets[t];
            let block = z.block_mut(r, t);
            for (i, &g) in in_g.iter().enumerate().skip(1) {
                let foreign_g = g && !g_t.contains(&i);
                let foreign_l = sets.l_sets.iter().enumerate().any(|(u, lu)| u != t && lu.contains(&i));
                if foreign_g || foreign_l {
                    block.row_mut(i - 1).fill(zero);
                }
            }
            // s_{r,t} is the column of [Z_{r,t}]_{G_t}^{-1} picking out g_t:
            // orthogonal to the other rows of G_t, nonzero against row g_t.
            let rows: Vec<usize> = g_t.iter().map(|&i| i - 1).collect();
            let sub = block.select_rows(rows.iter());
            let anchor = g_t.iter().position(|&i| i == sets.anchors[t]).expect("anchor lies in G_t");
            let mut e = nalgebra::DVector::<Complex64>::zeros(dims.q);
            e[anchor] = Complex64::new(1.0, 0.0);
            let sol = sub
                .lu()
                .solve(&e)
                .ok_or_else(|| Error::Construction(format!("singular G_t block at receive antenna {}", r + 1)))?;
            let norm = sol.norm();
            for (dst, v) in s.block_mut(r, t).iter_mut().zip(sol.iter()) {
                *dst = v / norm;
            }
        }
    }
    Ok((z, s))
}

/// Exponent of the Bézout bound `2^(sum |D_t| + TQR)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BezoutExponent {
    pub exponent: usize,
    pub data_columns: usize,
    pub fading_columns: usize,
}

impl std::fmt::Display for BezoutExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "2^{}", self.exponent)
    }
}

pub fn bezout_exponent(dims: Dims, sel: &IndexSelection) -> BezoutExponent {
    let data_columns = sel.data_columns();
    let fading_columns = dims.t * dims.q * dims.r;
    BezoutExponent { exponent: data_columns + fading_columns, data_columns, fading_columns }
}
