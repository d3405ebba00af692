//! Asymptotic rate bounds in bits per channel use, evaluated in `f64`.
//!
//! All logarithms are base 2. Log-binomials go through the log-gamma
//! function so that subblock lengths in the thousands do not overflow.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

use crate::cscc::cscc_gen_codesize_bound;
use crate::error::{invalid, outside, Result};

const LN_2: f64 = std::f64::consts::LN_2;

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("relative distance {delta} outside (0,1)")));
    }
    Ok(())
}

fn check_weight(len: u32, w: u32) -> Result<()> {
    if len == 0 || w > len {
        return Err(invalid(format!("need 0 <= w <= L with L >= 1, got L={len}, w={w}")));
    }
    Ok(())
}

/// `h(x) = -x log x - (1-x) log(1-x)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("entropy argument {x} outside [0,1]")));
    }
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(x) + term(1.0 - x))
}

/// `2ω(1-ω)`.
pub fn delta_star(omega: f64) -> f64 {
    2.0 * omega * (1.0 - omega)
}

/// `log2 C(n,k)`; negative infinity outside `0 <= k <= n`.
pub fn log2_binom(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > n {
        return f64::NEG_INFINITY;
    }
    let (n, k) = (n as f64, k as f64);
    (ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)) / LN_2
}

/// `log2 Σ_{j >= k} C(n,j)`, summed in log space.
pub fn log2_binom_tail(n: u64, k: i64) -> f64 {
    let terms: Vec<f64> = (k.max(0)..=n as i64).map(|j| log2_binom(n, j)).collect();
    let Some(top) = terms.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    top + terms.iter().map(|t| (t - top).exp2()).sum::<f64>().log2()
}

/// `log2` of a positive exact rational, accurate for huge numerators and
/// denominators.
pub fn log2_exact(q: &BigRational) -> Result<f64> {
    if !q.is_positive() {
        return Err(invalid("logarithm of a non-positive value"));
    }
    Ok(log2_big(q.numer()) - log2_big(q.denom()))
}

fn log2_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_f64().expect("at most 64 bits");
    top.log2() + shift as f64
}

/// The known CSCC bound with `ũ = δL/4` and `c` standing for `⌈ũ⌉`.
fn gamma_sp_at(len: u32, w: u32, u: f64, c: f64) -> f64 {
    let (lf, n, wu, k) = (f64::from(len), u64::from(len), u64::from(w), u64::from(len - w));
    let (ci, fi) = (c as i64, c as i64 - 1);
    let hi = (1.0 + u - c) / lf;
    let lo = (c - u) / lf;
    let h = binary_entropy((c - u).clamp(0.0, 1.0)).unwrap_or(0.0);
    let weighted = |weight: f64, value: f64| if weight == 0.0 { 0.0 } else { weight * value };
    log2_binom(n, i64::from(w)) / lf
        - weighted(hi, log2_binom(wu, ci))
        - weighted(lo, log2_binom(wu, fi))
        - weighted(lo, log2_binom(k, fi))
        - weighted(hi, log2_binom(k, ci))
        - h / lf
}

/// CSCC expression with `ũ = δL/4`, evaluated without a domain check.
pub fn gamma_sp_expr(len: u32, w: u32, delta: f64) -> f64 {
    let u = delta * f64::from(len) / 4.0;
    gamma_sp_at(len, w, u, u.ceil())
}

/// Known sphere-packing bound on the CSCC rate, for `0 < δ < δ*(w/L)`.
pub fn gamma_sp(len: u32, w: u32, delta: f64) -> Result<f64> {
    check_weight(len, w)?;
    check_delta(delta)?;
    let ds = delta_star(f64::from(w) / f64::from(len));
    if delta >= ds {
        return Err(outside(format!("needs δ < δ* = {ds:.6}, got {delta}")));
    }
    Ok(gamma_sp_expr(len, w, delta))
}

/// CSCC bound from the weight-`w+1` ambient space, without a domain check.
pub fn gamma_sp_acute_expr(len: u32, w: u32, delta: f64) -> f64 {
    let lf = f64::from(len);
    let k = u64::from(len - w);
    let triple = log2_binom(k, 2) + f64::from(w).log2();
    let h = binary_entropy((lf * delta / 4.0 - 0.5).clamp(0.0, 1.0)).unwrap_or(0.0);
    log2_binom(u64::from(len), i64::from(w) + 1) / lf
        - (delta / 4.0 - 1.0 / (2.0 * lf)) * triple
        - h / lf
        - (3.0 / (2.0 * lf) - delta / 4.0) * (k as f64).log2()
}

/// Improved CSCC bound, for `2/L < δ < 6/L <= δ*(w/L)` and `L >= w+2`.
pub fn gamma_sp_acute(len: u32, w: u32, delta: f64) -> Result<f64> {
    check_weight(len, w)?;
    check_delta(delta)?;
    let lf = f64::from(len);
    if len < w + 2 || w == 0 {
        return Err(outside(format!("needs 1 <= w <= L-2, got L={len}, w={w}")));
    }
    let ds = delta_star(f64::from(w) / lf);
    if !(delta > 2.0 / lf && delta < 6.0 / lf) || 6.0 / lf > ds {
        return Err(outside(format!(
            "needs 2/L < δ < 6/L <= δ* = {ds:.6}, got δ = {delta}"
        )));
    }
    Ok(gamma_sp_acute_expr(len, w, delta))
}

/// SECC rate quantities at one `(L, w, δ)`. Fields tied to the two-space
/// argument are absent for `δ >= 2/L`; the older bound is absent for
/// `δ > 4/L`. Non-finite values are reported as absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeccRates {
    pub r1: Option<f64>,
    pub nu: Option<f64>,
    /// 1 when lowering the threshold helps (`ν > 0`), else 0.
    pub alpha_hat: Option<u8>,
    /// `min{R1, R1 - ν}`.
    pub bound: Option<f64>,
    pub sigma_sp: Option<f64>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn secc_rate_bounds(len: u32, w: u32, delta: f64) -> Result<SeccRates> {
    check_weight(len, w)?;
    check_delta(delta)?;
    let lf = f64::from(len);
    let n = u64::from(len);
    let tail = log2_binom_tail(n, i64::from(w));
    let gap = f64::from(len - w).log2();

    let sigma_sp = if delta * lf / 4.0 <= 1.0 {
        let h = binary_entropy(delta * lf / 4.0)?;
        finite(tail / lf - h / lf - delta / 4.0 * (gap + f64::from(w + 1).log2()))
    } else {
        None
    };

    if delta >= 2.0 / lf {
        return Ok(SeccRates {
            r1: None,
            nu: None,
            alpha_hat: None,
            bound: None,
            sigma_sp,
        });
    }
    let h = binary_entropy(delta * lf / 2.0)?;
    let r1 = finite(tail / lf - h / lf - delta / 2.0 * gap);
    let lower = log2_binom_tail(n, i64::from(w) - 1);
    let nu = finite(delta / 2.0 * (lf.log2() - gap) - (lower - tail) / lf);
    let alpha_hat = nu.map(|v| u8::from(v > 0.0));
    let bound = match (r1, nu) {
        (Some(r), Some(v)) => Some(r.min(r - v)),
        _ => None,
    };
    Ok(SeccRates {
        r1,
        nu,
        alpha_hat,
        bound,
        sigma_sp,
    })
}

/// Smallest δ at which the lowered-threshold space beats the plain one.
pub fn secc_crossover_delta(len: u32, w: u32) -> Result<f64> {
    check_weight(len, w)?;
    if w == 0 || w == len {
        return Err(outside(format!("needs 0 < w < L, got L={len}, w={w}")));
    }
    let n = u64::from(len);
    let lf = f64::from(len);
    let ratio = log2_binom_tail(n, i64::from(w) - 1) - log2_binom_tail(n, i64::from(w));
    Ok(2.0 / (lf * (lf / f64::from(len - w)).log2()) * ratio)
}

/// `(1/(mL)) log2` of the finite-length generalized CSCC bound at
/// `d = floor(mLδ)`.
pub fn cscc_finite_rate(m: usize, len: u32, w: u32, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let n = m as f64 * f64::from(len);
    let d = (n * delta).floor() as u64;
    let bound = cscc_gen_codesize_bound(m, len, w, d)?;
    if bound.is_zero() {
        return Err(outside("empty bound"));
    }
    Ok(log2_exact(&bound)? / n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateFamily {
    Cscc,
    Secc,
}

/// One δ row of a comparison table; `None` marks an out-of-domain cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateBoundRow {
    Cscc {
        delta: f64,
        gamma_sp: Option<f64>,
        gamma_sp_acute: Option<f64>,
    },
    Secc {
        delta: f64,
        r1: Option<f64>,
        r1_minus_nu: Option<f64>,
        sigma_sp: Option<f64>,
    },
}

impl RateFamily {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            RateFamily::Cscc => &["delta", "gamma_sp", "gamma_sp_acute"],
            RateFamily::Secc => &["delta", "r1", "r1_minus_nu", "sigma_sp"],
        }
    }
}

impl RateBoundRow {
    pub fn delta(&self) -> f64 {
        match self {
            RateBoundRow::Cscc { delta, .. } | RateBoundRow::Secc { delta, .. } => *delta,
        }
    }

    /// Values in the order of [`RateFamily::columns`], after `delta`.
    pub fn values(&self) -> Vec<Option<f64>> {
        match *self {
            RateBoundRow::Cscc {
                gamma_sp,
                gamma_sp_acute,
                ..
            } => vec![gamma_sp, gamma_sp_acute],
            RateBoundRow::Secc {
                r1,
                r1_minus_nu,
                sigma_sp,
                ..
            } => vec![r1, r1_minus_nu, sigma_sp],
        }
    }
}

/// Evaluates one family's bounds on each δ of the grid.
pub fn rate_table(family: RateFamily, len: u32, w: u32, deltas: &[f64]) -> Vec<RateBoundRow> {
    deltas
        .iter()
        .map(|&delta| match family {
            RateFamily::Cscc => RateBoundRow::Cscc {
                delta,
                gamma_sp: gamma_sp(len, w, delta).ok().and_then(finite),
                gamma_sp_acute: gamma_sp_acute(len, w, delta).ok().and_then(finite),
            },
            RateFamily::Secc => {
                let rates = secc_rate_bounds(len, w, delta).ok();
                let r1 = rates.and_then(|r| r.r1);
                let nu = rates.and_then(|r| r.nu);
                RateBoundRow::Secc {
                    delta,
                    r1,
                    r1_minus_nu: r1.zip(nu).map(|(r, v)| r - v),
                    sigma_sp: rates.and_then(|r| r.sigma_sp),
                }
            }
        })
        .collect()
}

/// CSV text for one family over several `w`. A leading `w` column keeps
/// the series apart; absent cells are written as `NA`.
pub fn rate_table_csv(family: RateFamily, len: u32, ws: &[u32], deltas: &[f64]) -> String {
    let mut out = String::from("w,");
    out.push_str(&family.columns().join(","));
    out.push('\n');
    for &w in ws {
        for row in rate_table(family, len, w, deltas) {
            out.push_str(&format!("{w},{:.6}", row.delta()));
            for v in row.values() {
                match v {
                    Some(x) => out.push_str(&format!(",{x:.9}")),
                    None => out.push_str(",NA"),
                }
            }
            out.push('\n');
        }
    }
    out
}

/// `start, start+step, …` up to `stop` inclusive, computed by index so the
/// points do not drift.
pub fn delta_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
        return Err(invalid("grid needs finite bounds and a positive step"));
    }
    if stop < start {
        return Ok(Vec::new());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + step * i as f64).collect())
}
