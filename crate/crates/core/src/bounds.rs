//! Closed-form pre-log bounds in exact rational arithmetic.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::{Dims, Error, Result};

pub type Rational = Ratio<i64>;

fn rat(n: usize) -> Rational {
    Rational::from_integer(n as i64)
}

/// `max(value, 0)`.
pub fn clamp_nonneg(value: Rational) -> Rational {
    if value < Rational::zero() {
        Rational::zero()
    } else {
        value
    }
}

/// Lower bound with `t_prime <= R` active transmit antennas:
/// `min{T'(1 - 1/L), R(1 - T'Q/L)}`. May be negative when `T'Q > L`.
pub fn chi_low(dims: Dims, t_prime: usize) -> Result<Rational> {
    if t_prime == 0 || t_prime > dims.r {
        return Err(Error::InvalidArgument(format!(
            "active transmit antennas T'={t_prime} must lie in [1, R={}]",
            dims.r
        )));
    }
    let l = rat(dims.l);
    let first = rat(t_prime) * (Rational::from_integer(1) - l.recip());
    let second = rat(dims.r) * (Rational::from_integer(1) - rat(t_prime * dims.q) / l);
    Ok(first.min(second))
}

/// Crossing point `RL / (L + RQ - 1)` of the two branches of [`chi_low`].
pub fn t_opt(dims: Dims) -> Rational {
    Rational::new((dims.r * dims.l) as i64, (dims.l + dims.r * dims.q - 1) as i64)
}

pub fn eta(dims: Dims) -> Rational {
    let topt = t_opt(dims);
    let l = rat(dims.l);
    let one = Rational::from_integer(1);
    let ceil = topt.ceil();
    let floor = topt.floor();
    let a = rat(dims.r) * (one - ceil * rat(dims.q) / l);
    let b = floor * (one - l.recip());
    a.max(b)
}

/// Best lower bound for T transmit antennas, switching some off if that helps.
pub fn chi_star(dims: Dims) -> Rational {
    if rat(dims.t) <= t_opt(dims) {
        rat(dims.t) * (Rational::from_integer(1) - rat(dims.l).recip())
    } else {
        eta(dims)
    }
}

/// Constant block-fading pre-log `M*(1 - M*/L)`, `M* = min{T, R, floor(L/2)}`.
pub fn zheng_tse(dims: Dims) -> (usize, Rational) {
    let m = dims.t.min(dims.r).min(dims.l / 2);
    (m, rat(m) * (Rational::from_integer(1) - Rational::new(m as i64, dims.l as i64)))
}

/// Scan of [`chi_low`] over `T' in [1, min{T, R}]`; ties go to the smaller T'.
pub fn best_t(dims: Dims) -> (usize, Rational) {
    let mut best = (1, chi_low(dims, 1).expect("T'=1 is always admissible"));
    for tp in 2..=dims.t.min(dims.r) {
        let v = chi_low(dims, tp).expect("T' <= R");
        if v > best.1 {
            best = (tp, v);
        }
    }
    best
}

/// A rational rendered as `"p/q"` together with a float approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl Exact {
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl std::fmt::Display for Exact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiLowEntry {
    pub t_prime: usize,
    pub raw: Rational,
    pub clamped: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrelogReport {
    pub chi_low_per_t: Vec<ChiLowEntry>,
    pub t_opt: Rational,
    pub eta: Rational,
    pub chi_star: Rational,
    pub chi_star_clamped: Rational,
    pub m_star: usize,
    pub zheng_tse: Rational,
    pub best_t: usize,
    pub best_chi: Rational,
}

pub fn prelog_report(dims: Dims) -> PrelogReport {
    let chi_low_per_t = (1..=dims.r)
        .map(|tp| {
            let raw = chi_low(dims, tp).expect("T' <= R");
            ChiLowEntry { t_prime: tp, raw, clamped: clamp_nonneg(raw) }
        })
        .collect();
    let (m_star, zt) = zheng_tse(dims);
    let (best_t, best_chi) = best_t(dims);
    let cs = chi_star(dims);
    PrelogReport {
        chi_low_per_t,
        t_opt: t_opt(dims),
        eta: eta(dims),
        chi_star: cs,
        chi_star_clamped: clamp_nonneg(cs),
        m_star,
        zheng_tse: zt,
        best_t,
        best_chi,
    }
}

/// Serialisable entry used by the CLI and tests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactJson {
    pub value: String,
    pub approx: f64,
}

impl From<Rational> for ExactJson {
    fn from(r: Rational) -> Self {
        let e = Exact(r);
        ExactJson { value: e.to_string(), approx: e.to_f64() }
    }
}
