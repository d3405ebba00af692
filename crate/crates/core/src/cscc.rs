//! Constant subblock-composition codes: every subblock of length `L` has
//! weight exactly `w`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::{binom, ExactRational};
use crate::error::{invalid, outside, Result};
use crate::lp::{min_ratio, ReducedLP};
use crate::orbits::{constrained_ball_size, enumerate_cscc_profiles, orbit_size, OrbitIndexSet};
use crate::profile::WeightProfile;

/// Code parameters: `m` subblocks of length `len`, subblock weight `w`,
/// minimum distance `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsccInstance {
    pub m: usize,
    pub len: u32,
    pub w: u32,
    pub d: u64,
}

impl CsccInstance {
    pub fn new(m: usize, len: u32, w: u32, d: u64) -> Result<Self> {
        check_shape(m, len, w, d)?;
        Ok(Self { m, len, w, d })
    }

    /// Packing radius `floor((d-1)/2)`.
    pub fn t(&self) -> u64 {
        (self.d - 1) / 2
    }

    pub fn center(&self) -> WeightProfile {
        WeightProfile::constant(self.m, self.w, self.len).expect("validated instance")
    }
}

pub(crate) fn check_shape(m: usize, len: u32, w: u32, d: u64) -> Result<()> {
    if m == 0 || len == 0 {
        return Err(invalid("need at least one subblock of positive length"));
    }
    if w > len {
        return Err(invalid(format!("weight {w} exceeds subblock length {len}")));
    }
    let n = m as u64 * u64::from(len);
    if d == 0 || d > n {
        return Err(invalid(format!("distance {d} outside 1..={n}")));
    }
    Ok(())
}

/// Single-constraint program over the orbits near `[w,…,w]`.
pub fn cscc_reduced_lp(inst: &CsccInstance) -> Result<ReducedLP> {
    let t = inst.t();
    let cols = enumerate_cscc_profiles(inst.m, inst.len, inst.w, t)?;
    let v = inst.center();
    let row = cols
        .iter()
        .map(|u| constrained_ball_size(&v, u, t))
        .collect::<Result<Vec<_>>>()?;
    let objective = cols.iter().map(orbit_size).collect();
    let rows = OrbitIndexSet::from_profiles(cols.kind(), vec![v]);
    ReducedLP::new(rows, cols, vec![row], objective)
}

/// Generalized sphere-packing bound, evaluated as the minimum ratio
/// `|O_u| / M_{w,u}` of the single-row program.
pub fn cscc_gsp_bound(inst: &CsccInstance) -> Result<ExactRational> {
    let lp = cscc_reduced_lp(inst)?;
    min_ratio(&lp, &inst.center())
}

fn ratio(n: BigInt, d: BigInt) -> ExactRational {
    BigRational::new(n, d)
}

fn pow(b: &BigInt, e: usize) -> BigInt {
    num_traits::pow(b.clone(), e)
}

/// Closed form for `t = 1`, `1 <= w <= L-1`.
pub fn cscc_closed_form_t1(m: usize, len: u32, w: u32) -> Result<ExactRational> {
    if m == 0 {
        return Err(invalid("need at least one subblock"));
    }
    if w == 0 || w >= len {
        return Err(outside(format!("t=1 closed form needs 1 <= w <= L-1, got w={w}, L={len}")));
    }
    let (n, w64) = (u64::from(len), i64::from(w));
    let rest = pow(&binom(n, w64), m - 1);
    Ok(if 2 * w <= len {
        ratio(binom(n, w64 - 1) * rest, BigInt::from(w))
    } else {
        ratio(binom(n, w64 + 1) * rest, BigInt::from(len - w))
    })
}

/// Closed form for `t = 2`, `2 <= w <= L-2`, `m >= 2`.
pub fn cscc_closed_form_t2(m: usize, len: u32, w: u32) -> Result<ExactRational> {
    if m < 2 {
        return Err(outside("t=2 closed form needs at least two subblocks"));
    }
    if w < 2 || w + 2 > len {
        return Err(outside(format!("t=2 closed form needs 2 <= w <= L-2, got w={w}, L={len}")));
    }
    let (n, w64) = (u64::from(len), i64::from(w));
    let mu = m as u64;
    let full = pow(&binom(n, w64), m);
    let scaled = (mu + 1) * u64::from(w);
    Ok(if scaled <= n + 2 {
        let k = BigInt::from(len - w + 1);
        ratio(full, &k * &k)
    } else if scaled + 2 >= mu * n {
        let k = BigInt::from(w + 1);
        ratio(full, &k * &k)
    } else {
        ratio(full, BigInt::from(1 + mu * u64::from(w) * u64::from(len - w)))
    })
}

/// Code-size bound obtained by measuring balls inside the weight-`w+1`
/// composition space. Needs `2m < d <= 6m` and `L >= w+2`.
pub fn cscc_gen_codesize_bound(m: usize, len: u32, w: u32, d: u64) -> Result<ExactRational> {
    check_shape(m, len, w, d)?;
    let mu = m as u64;
    if d <= 2 * mu || d > 6 * mu {
        return Err(outside(format!("needs 2m < d <= 6m, got m={m}, d={d}")));
    }
    if len < w + 2 {
        return Err(outside(format!("needs L >= w+2, got L={len}, w={w}")));
    }
    let t = (d - 1) / 2;
    let tt = ((t - mu) / 2) as usize;
    let (n, k) = (u64::from(len), len - w);
    let numer = pow(&binom(n, i64::from(w) + 1), m);
    let triple = binom(u64::from(k), 2) * BigInt::from(w);
    let denom = binom(mu, tt as i64) * pow(&triple, tt) * pow(&BigInt::from(k), m - tt);
    if denom.is_zero() {
        return Err(outside("no weight-raising neighbours at this distance (w = 0)"));
    }
    Ok(ratio(numer, denom))
}
