//! Row-selection, pilot and data index sets.
//!
//! Sets hold one-based labels from `[1:L]` as sorted vectors. The pilot
//! construction also records the order in which labels were assigned
//! (`fill_order`), which is how the cyclic filling is usually written out.

use num_integer::Integer;
use serde::Serialize;

use crate::{Dims, Error, Result};

pub type IndexSet = Vec<usize>;

/// Target total size of the row-selection sets: `min{TL - T + TQR, RL}`.
pub fn row_budget(dims: Dims) -> usize {
    let Dims { t, r, l, q } = dims;
    (t * l - t + t * q * r).min(r * l)
}

fn theta_unchecked(dims: Dims) -> i64 {
    let Dims { t, r, l, q } = dims;
    let (t, r, l, q) = (t as i64, r as i64, l as i64, q as i64);
    t.max(t * q * r - (r - t) * l)
}

/// Total pilot count `max{T, TQR - (R - T)L}`.
pub fn theta_r(dims: Dims) -> Result<usize> {
    dims.require_construction_regime()?;
    Ok(theta_unchecked(dims) as usize)
}

/// Row-selection sets `I_1, ..., I_R` together with `k` and `ell`.
///
/// The first `k` antennas keep every row, antenna `k + 1` keeps
/// `[1:TQ + ell]` and the rest keep `[1:TQ]`.
pub fn build_i(dims: Dims) -> Result<(Vec<IndexSet>, usize, usize)> {
    dims.require_construction_regime()?;
    let Dims { t, r, l, q } = dims;
    let num = t * l - t;
    let den = l - t * q;
    let full = num / den;
    let k = full.min(r);
    let ell = num - den * full;
    let sets = (0..r)
        .map(|rr| {
            let len = if rr < k {
                l
            } else if rr == k {
                t * q + ell
            } else {
                t * q
            };
            (1..=len).collect()
        })
        .collect();
    Ok((sets, k, ell))
}

/// Pilot labels per transmit antenna in the order the cyclic filling
/// assigns them.
///
/// Step `j = 1, ..., theta` puts label `i = j mod L` into `P_t` with
/// `t = j + floor((j - 1) / lcm(T, L)) mod T`, residues taken in `[1:L]`
/// and `[1:T]`.
pub fn pilot_fill_order(dims: Dims) -> Result<Vec<IndexSet>> {
    let theta = theta_r(dims)?;
    let Dims { t, l, .. } = dims;
    let lcm = t.lcm(&l);
    let mut sets: Vec<IndexSet> = vec![Vec::new(); t];
    for j in 1..=theta {
        let i = (j - 1) % l + 1;
        let shifted = j + (j - 1) / lcm;
        let tt = (shifted - 1) % t;
        if sets[tt].contains(&i) {
            // The restart rule has no minimal antenna left that lacks this
            // label; the construction is undefined from here on.
            return Err(Error::Construction(format!(
                "pilot filling revisits label {i} on antenna {} at step {j} for {dims:?}",
                tt + 1
            )));
        }
        sets[tt].push(i);
    }
    Ok(sets)
}

/// Pilot sets `P_1, ..., P_T` (sorted).
pub fn build_p(dims: Dims) -> Result<Vec<IndexSet>> {
    let mut sets = pilot_fill_order(dims)?;
    for s in &mut sets {
        s.sort_unstable();
    }
    Ok(sets)
}

/// Data sets `D_t = [1:L] \ P_t`.
pub fn build_d(l: usize, p: &[IndexSet]) -> Vec<IndexSet> {
    p.iter()
        .map(|pt| (1..=l).filter(|i| !pt.contains(i)).collect())
        .collect()
}

/// A full choice of index sets for one `Dims`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSelection {
    #[serde(rename = "I")]
    pub i_sets: Vec<IndexSet>,
    #[serde(rename = "P")]
    pub p_sets: Vec<IndexSet>,
    #[serde(rename = "D")]
    pub d_sets: Vec<IndexSet>,
    pub theta: usize,
    pub k: usize,
    pub ell: usize,
}

impl IndexSelection {
    /// The canonical construction above.
    pub fn canonical(dims: Dims) -> Result<Self> {
        let (i_sets, k, ell) = build_i(dims)?;
        let p_sets = build_p(dims)?;
        let d_sets = build_d(dims.l, &p_sets);
        Ok(IndexSelection { i_sets, p_sets, d_sets, theta: theta_r(dims)?, k, ell })
    }

    /// A user-supplied selection; `D_t` is derived, `theta` is the value the
    /// pilot sets are supposed to reach, `k` and `ell` are left at zero.
    pub fn from_sets(dims: Dims, i_sets: Vec<IndexSet>, p_sets: Vec<IndexSet>) -> Self {
        let norm = |mut v: Vec<IndexSet>| {
            for s in &mut v {
                s.sort_unstable();
                s.dedup();
            }
            v
        };
        let i_sets = norm(i_sets);
        let p_sets = norm(p_sets);
        let d_sets = build_d(dims.l, &p_sets);
        let theta = theta_unchecked(dims).max(0) as usize;
        IndexSelection { i_sets, p_sets, d_sets, theta, k: 0, ell: 0 }
    }

    pub fn rows(&self) -> usize {
        self.i_sets.iter().map(Vec::len).sum()
    }

    pub fn data_columns(&self) -> usize {
        self.d_sets.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Check { name, passed, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectionReport {
    pub checks: Vec<Check>,
}

impl SelectionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks every size and complement identity a selection must satisfy.
pub fn validate_selection(dims: Dims, sel: &IndexSelection) -> SelectionReport {
    let Dims { t, r, l, q } = dims;
    let mut checks = Vec::new();

    checks.push(Check::new(
        "regime",
        dims.require_construction_regime().is_ok(),
        format!("T={t} <= R={r} and L={l} > TQ={}", t * q),
    ));

    let in_range = |sets: &[IndexSet]| sets.iter().flatten().all(|&i| (1..=l).contains(&i));
    let well_formed = sel.i_sets.len() == r
        && sel.p_sets.len() == t
        && sel.d_sets.len() == t
        && in_range(&sel.i_sets)
        && in_range(&sel.p_sets)
        && in_range(&sel.d_sets);
    checks.push(Check::new(
        "well_formed",
        well_formed,
        format!("{} I-sets, {} P-sets, {} D-sets, labels in [1:{l}]", sel.i_sets.len(), sel.p_sets.len(), sel.d_sets.len()),
    ));

    let sum_i = sel.rows();
    let budget = row_budget(dims);
    checks.push(Check::new("sum_I", sum_i == budget, format!("sum |I_r| = {sum_i}, required {budget}")));

    let sum_p: usize = sel.p_sets.iter().map(Vec::len).sum();
    let theta = theta_unchecked(dims);
    checks.push(Check::new("sum_P", sum_p as i64 == theta, format!("sum |P_t| = {sum_p}, required {theta}")));

    let max_p = sel.p_sets.iter().map(Vec::len).max().unwrap_or(0);
    let min_p = sel.p_sets.iter().map(Vec::len).min().unwrap_or(0);
    checks.push(Check::new("P_size_bound", max_p <= t * q, format!("max |P_t| = {max_p}, bound TQ = {}", t * q)));
    checks.push(Check::new("P_balance", max_p - min_p <= 1, format!("|P_t| ranges over [{min_p}, {max_p}]")));

    let complement = sel.p_sets.len() == sel.d_sets.len()
        && sel.p_sets.iter().zip(&sel.d_sets).all(|(p, d)| {
            p.iter().all(|i| !d.contains(i)) && (1..=l).all(|i| p.contains(&i) || d.contains(&i))
        });
    checks.push(Check::new("D_complement", complement, "D_t and P_t partition [1:L]".into()));

    let columns = t * q * r + sel.data_columns();
    checks.push(Check::new(
        "squareness",
        sum_i == columns,
        format!("rows {sum_i}, columns TQR + sum |D_t| = {columns}"),
    ));

    SelectionReport { checks }
}

/// Auxiliary sets for adding one receive antenna to the witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma5Sets {
    /// Pilot sets built for `R - 1` receive antennas.
    pub p_tilde: Vec<IndexSet>,
    /// `L_t = Ptilde_t \ P_t`.
    pub l_sets: Vec<IndexSet>,
    /// Pairwise disjoint `G_t`, each of size Q and meeting `P_t`.
    pub g_sets: Vec<IndexSet>,
    /// `g_t`: the smallest label of `G_t` that is a pilot of antenna `t`.
    pub anchors: Vec<usize>,
}

/// Builds `Ptilde_t`, `L_t` and searches `G_t` for `R > T`.
///
/// The `G_t` are found by exhaustive backtracking over Q-subsets in
/// lexicographic order. Failure of any property is reported as
/// [`Error::Verification`].
pub fn lemma5_sets(dims: Dims) -> Result<Lemma5Sets> {
    dims.require_construction_regime()?;
    if dims.r <= dims.t {
        return Err(Error::InvalidDims(format!("R={} must exceed T={}", dims.r, dims.t)));
    }
    let p = build_p(dims)?;
    let p_tilde = build_p(dims.with_r(dims.r - 1))?;
    let (i_sets, _, _) = build_i(dims)?;
    let i_last = &i_sets[dims.r - 1];

    let l_sets: Vec<IndexSet> = p_tilde
        .iter()
        .zip(&p)
        .map(|(pt, p)| pt.iter().copied().filter(|i| !p.contains(i)).collect())
        .collect();

    for a in 0..dims.t {
        for b in (a + 1)..dims.t {
            if l_sets[a].iter().any(|i| l_sets[b].contains(i)) {
                return Err(Error::Verification(format!("L_{} and L_{} intersect for {dims:?}", a + 1, b + 1)));
            }
        }
        if !l_sets[a].iter().all(|i| i_last.contains(i)) {
            return Err(Error::Verification(format!("L_{} is not inside I_R for {dims:?}", a + 1)));
        }
    }

    let universe: IndexSet = i_last
        .iter()
        .copied()
        .filter(|i| !l_sets.iter().any(|lt| lt.contains(i)))
        .collect();
    if universe.len() != dims.t * dims.q {
        return Err(Error::Verification(format!(
            "I_R minus the L_t has {} labels, but T*Q = {} are needed for {dims:?}",
            universe.len(),
            dims.t * dims.q
        )));
    }

    let mut g_sets = Vec::with_capacity(dims.t);
    let mut used = vec![false; universe.len()];
    if !search_g(&universe, &p, dims.q, 0, &mut used, &mut g_sets) {
        return Err(Error::Verification(format!("no admissible G_t exist for {dims:?}")));
    }
    let anchors = g_sets
        .iter()
        .zip(&p)
        .map(|(g, p)| *g.iter().find(|i| p.contains(i)).expect("search guarantees a pilot in G_t"))
        .collect();
    Ok(Lemma5Sets { p_tilde, l_sets, g_sets, anchors })
}

fn search_g(
    universe: &[usize],
    pilots: &[IndexSet],
    q: usize,
    t: usize,
    used: &mut Vec<bool>,
    out: &mut Vec<IndexSet>,
) -> bool {
    if t == pilots.len() {
        return true;
    }
    let free: Vec<usize> = (0..universe.len()).filter(|&i| !used[i]).collect();
    let mut pick = Vec::with_capacity(q);
    choose(&free, q, 0, &mut pick, &mut |combo| {
        if !combo.iter().any(|&i| pilots[t].contains(&universe[i])) {
            return false;
        }
        for &i in combo {
            used[i] = true;
        }
        out.push(combo.iter().map(|&i| universe[i]).collect());
        if search_g(universe, pilots, q, t + 1, used, out) {
            return true;
        }
        out.pop();
        for &i in combo {
            used[i] = false;
        }
        false
    })
}

// Visits q-combinations of `pool` in lexicographic order until `visit` accepts one.
fn choose(pool: &[usize], q: usize, start: usize, pick: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if pick.len() == q {
        return visit(pick);
    }
    for idx in start..pool.len() {
        if pool.len() - idx < q - pick.len() {
            break;
        }
        pick.push(pool[idx]);
        if choose(pool, q, idx + 1, pick, visit) {
            return true;
        }
        pick.pop();
    }
    false
}

/// Re-checks properties (i)-(iii) on a set of auxiliary sets.
pub fn check_lemma5(dims: Dims, sets: &Lemma5Sets) -> Vec<Check> {
    let mut checks = Vec::new();
    let t = dims.t;
    let p = build_p(dims).unwrap_or_default();
    let i_last = build_i(dims).map(|(i, _, _)| i[dims.r - 1].clone()).unwrap_or_default();

    let disjoint = |sets: &[IndexSet]| {
        (0..sets.len()).all(|a| ((a + 1)..sets.len()).all(|b| sets[a].iter().all(|i| !sets[b].contains(i))))
    };
    checks.push(Check::new("L_disjoint", disjoint(&sets.l_sets), "L_t pairwise disjoint".into()));
    checks.push(Check::new(
        "L_in_I_R",
        sets.l_sets.iter().flatten().all(|i| i_last.contains(i)),
        "every L_t inside I_R".into(),
    ));
    checks.push(Check::new("G_disjoint", disjoint(&sets.g_sets), "G_t pairwise disjoint".into()));
    checks.push(Check::new(
        "G_size",
        sets.g_sets.len() == t && sets.g_sets.iter().all(|g| g.len() == dims.q),
        format!("|G_t| = Q = {}", dims.q),
    ));
    checks.push(Check::new(
        "G_meets_P",
        p.len() == sets.g_sets.len() && sets.g_sets.iter().zip(&p).all(|(g, p)| g.iter().any(|i| p.contains(i))),
        "G_t intersects P_t".into(),
    ));
    let mut union: Vec<usize> = sets.g_sets.iter().flatten().copied().collect();
    union.sort_unstable();
    let expected: Vec<usize> = i_last.iter().copied().filter(|i| !sets.l_sets.iter().any(|lt| lt.contains(i))).collect();
    checks.push(Check::new("G_cover", union == expected, "union of G_t equals I_R minus union of L_t".into()));
    checks.push(Check::new(
        "anchors",
        sets.anchors.len() == t
            && sets.anchors.iter().zip(&sets.g_sets).zip(&p).all(|((a, g), p)| g.contains(a) && p.contains(a)),
        "g_t in G_t and P_t".into(),
    ));
    checks
}
