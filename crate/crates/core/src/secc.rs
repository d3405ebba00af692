//! Subblock energy-constrained codes: every subblock of length `L` has
//! weight at least `w`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{binom, ExactInteger, ExactRational};
use crate::cscc::check_shape;
use crate::error::{invalid, outside, Result};
use crate::lp::{solve_min, Certificate, ReducedLP};
use crate::orbits::{constrained_ball_size, enumerate_secc_cols, enumerate_secc_rows, orbit_size};
use crate::profile::WeightProfile;

/// Code parameters: `m` subblocks of length `len`, every subblock weight at
/// least `w`, minimum distance `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeccInstance {
    pub m: usize,
    pub len: u32,
    pub w: u32,
    pub d: u64,
}

impl SeccInstance {
    pub fn new(m: usize, len: u32, w: u32, d: u64) -> Result<Self> {
        check_shape(m, len, w, d)?;
        Ok(Self { m, len, w, d })
    }

    pub fn t(&self) -> u64 {
        (self.d - 1) / 2
    }
}

/// Rows are the profiles of the space, columns every profile within
/// distance `t` of some row.
pub fn secc_reduced_lp(inst: &SeccInstance) -> Result<ReducedLP> {
    secc_reduced_lp_at_radius(inst.m, inst.len, inst.w, inst.t())
}

/// Same program addressed by packing radius instead of distance. Useful
/// when `2t+1` exceeds the code length.
pub fn secc_reduced_lp_at_radius(m: usize, len: u32, w: u32, t: u64) -> Result<ReducedLP> {
    check_shape(m, len, w, 1)?;
    let rows = enumerate_secc_rows(m, len, w);
    let cols = enumerate_secc_cols(m, len, w, t);
    let matrix = rows
        .iter()
        .map(|v| {
            cols.iter()
                .map(|u| constrained_ball_size(v, u, t))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let objective = cols.iter().map(orbit_size).collect();
    ReducedLP::new(rows, cols, matrix, objective)
}

/// Optimum of the reduced program.
pub fn secc_gsp_bound(inst: &SeccInstance) -> Result<ExactRational> {
    Ok(solve_min(&secc_reduced_lp(inst)?)?.value)
}

fn frac(n: ExactInteger, d: u64) -> ExactRational {
    BigRational::new(n, BigInt::from(d))
}

/// `C(m,s) L^s`: size of the orbit with `s` subblocks one below full weight.
fn lowered_orbit(m: usize, len: u32, s: usize) -> ExactInteger {
    binom(m as u64, s as i64) * num_traits::pow(BigInt::from(len), s)
}

fn check_wl1(m: usize, len: u32) -> Result<()> {
    if m == 0 {
        return Err(invalid("need at least one subblock"));
    }
    if len == 0 {
        return Err(invalid("subblock length must be positive"));
    }
    if (2 * len as usize) < m {
        return Err(outside(format!("needs L >= m/2, got m={m}, L={len}")));
    }
    Ok(())
}

fn check_m1(len: u32, w: u32) -> Result<()> {
    if len == 0 || w > len {
        return Err(invalid(format!("need 0 <= w <= L with L >= 1, got L={len}, w={w}")));
    }
    if 2 * w < len {
        return Err(outside(format!("needs w >= L/2, got L={len}, w={w}")));
    }
    Ok(())
}

/// Shared residue-class sum: `k` drives the case split and `term(s)` is the
/// orbit size with `s` subblocks (or positions) lowered by one.
fn residue_sum(k: usize, term: impl Fn(usize) -> ExactInteger) -> ExactRational {
    let quarter = k / 4;
    let pair = |a: usize, den: usize| frac(term(a) + term(a + 1), den as u64);
    match k % 4 {
        0 => BigRational::one() + (0..quarter).map(|i| pair(4 * i + 2, 4 * i + 4)).sum::<BigRational>(),
        1 => BigRational::one() + (0..quarter).map(|i| pair(4 * i + 3, 4 * i + 5)).sum::<BigRational>(),
        2 => (0..=quarter).map(|i| pair(4 * i, 4 * i + 2)).sum(),
        _ => (0..=quarter).map(|i| pair(4 * i + 1, 4 * i + 3)).sum(),
    }
}

/// Closed form for `t = 1`, `w = L-1`, over the stated range `L >= m/2`.
/// For `m >= 2` it equals the program optimum only when `2L >= m+2`; on the
/// two diagonals `2L ∈ {m, m+1}` it is a strict upper bound.
pub fn secc_closed_form_wl1(m: usize, len: u32) -> Result<ExactRational> {
    check_wl1(m, len)?;
    Ok(residue_sum(m, |s| lowered_orbit(m, len, s)))
}

/// Closed form for `t = 1`, a single subblock, `w >= L/2`.
pub fn secc_closed_form_m1(len: u32, w: u32) -> Result<ExactRational> {
    check_m1(len, w)?;
    Ok(residue_sum((len - w) as usize, |s| binom(u64::from(len), s as i64)))
}

/// Builds the certificate pattern shared by both families. `profile(s)` is
/// the profile with `s` lowered entries and `lead` is the profile carrying
/// unit cover mass when `k ≡ 0 (mod 4)`.
fn residue_certificate(
    k: usize,
    term: impl Fn(usize) -> ExactInteger,
    profile: impl Fn(usize) -> WeightProfile,
    lead: usize,
) -> Certificate {
    let mut cert = Certificate::default();
    let quarter = k / 4;
    let unit = |den: usize| frac(BigInt::one(), den as u64);
    let put = |cert: &mut Certificate, ys: [usize; 2], y_den: usize, xs: [usize; 2], first: usize| {
        for s in ys {
            cert.primal.insert(profile(s), unit(y_den));
        }
        let x1 = frac(term(first), (first + 1) as u64);
        let x2 = (BigRational::from_integer(term(first + 1)) - &x1) / BigRational::from_integer(BigInt::from(first + 2));
        cert.dual.insert(profile(xs[0]), x1);
        cert.dual.insert(profile(xs[1]), x2);
    };
    match k % 4 {
        0 => {
            cert.primal.insert(profile(lead), frac(BigInt::one(), 1) / BigRational::from_integer(term(lead)));
            cert.dual.insert(profile(0), BigRational::one());
            for i in 0..quarter {
                put(&mut cert, [4 * i + 2, 4 * i + 3], 4 * i + 4, [4 * i + 3, 4 * i + 4], 4 * i + 2);
            }
        }
        1 => {
            cert.primal.insert(profile(0), BigRational::one());
            cert.dual.insert(profile(0), BigRational::one());
            for i in 0..quarter {
                put(&mut cert, [4 * i + 3, 4 * i + 4], 4 * i + 5, [4 * i + 4, 4 * i + 5], 4 * i + 3);
            }
        }
        2 => {
            for i in 0..=quarter {
                put(&mut cert, [4 * i, 4 * i + 1], 4 * i + 2, [4 * i + 1, 4 * i + 2], 4 * i);
            }
        }
        _ => {
            for i in 0..=quarter {
                put(&mut cert, [4 * i + 1, 4 * i + 2], 4 * i + 3, [4 * i + 2, 4 * i + 3], 4 * i + 1);
            }
        }
    }
    cert.primal.retain(|_, y| !y.is_zero());
    cert.dual.retain(|_, x| !x.is_zero());
    cert
}

/// `[L,…,L, L-1,…,L-1]` with `full` entries equal to `L`.
pub fn top_profile(m: usize, len: u32, full: usize) -> Result<WeightProfile> {
    if full > m || len == 0 {
        return Err(invalid(format!("no profile with {full} of {m} subblocks at full weight {len}")));
    }
    let mut ws = vec![len; full];
    ws.resize(m, len - 1);
    WeightProfile::new(ws, len)
}

/// Optimality certificate for `w = L-1`, `t = 1`, indexed by the profiles
/// with every entry in `{L-1, L}`.
pub fn build_certificate_table1(m: usize, len: u32) -> Result<Certificate> {
    check_wl1(m, len)?;
    Ok(residue_certificate(
        m,
        |s| lowered_orbit(m, len, s),
        |s| top_profile(m, len, m - s).expect("index within range"),
        1,
    ))
}

/// Optimality certificate for a single subblock with `w >= L/2`, `t = 1`.
pub fn build_certificate_table2(len: u32, w: u32) -> Result<Certificate> {
    check_m1(len, w)?;
    Ok(residue_certificate(
        (len - w) as usize,
        |s| binom(u64::from(len), s as i64),
        |s| WeightProfile::new(vec![len - s as u32], len).expect("index within range"),
        0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binom_tail;
    use crate::lp::{verify_certificate, Verdict};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn gsp(m: usize, len: u32, w: u32, d: u64) -> ExactRational {
        secc_gsp_bound(&SeccInstance::new(m, len, w, d).unwrap()).unwrap()
    }

    #[test]
    fn example_program() {
        let lp = secc_reduced_lp(&SeccInstance::new(4, 3, 2, 3).unwrap()).unwrap();
        assert_eq!((lp.rows().len(), lp.cols().len()), (5, 9));
        let first: Vec<i64> = lp.matrix()[0].iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(first, vec![1, 12, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(gsp(4, 3, 2, 3), q(83, 2));
    }

    #[test]
    fn structural_examples() {
        for t in 0..4u64 {
            let lp = secc_reduced_lp_at_radius(1, 6, 6, t).unwrap();
            assert_eq!(lp.rows().len(), 1);
            assert_eq!(lp.cols().len(), t as usize + 1);
        }
        let lp = secc_reduced_lp(&SeccInstance::new(2, 2, 1, 3).unwrap()).unwrap();
        assert_eq!((lp.rows().len(), lp.cols().len()), (3, 5));
    }

    #[test]
    fn zero_radius_is_space_size() {
        for (m, len, w) in [(1, 5, 3), (2, 4, 2), (3, 3, 2)] {
            let space = num_traits::pow(binom_tail(u64::from(len), i64::from(w)), m);
            assert_eq!(gsp(m, len, w, 1), BigRational::from_integer(space.clone()));
            assert_eq!(gsp(m, len, w, 2), BigRational::from_integer(space));
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(secc_closed_form_wl1(4, 3).unwrap(), q(83, 2));
        for len in 2..8 {
            assert_eq!(secc_closed_form_wl1(2, len).unwrap(), q(1 + 2 * i64::from(len), 2));
            assert_eq!(secc_closed_form_wl1(1, len).unwrap(), q(1, 1));
            assert_eq!(secc_closed_form_m1(len, len).unwrap(), q(1, 1));
        }
        assert_eq!(secc_closed_form_m1(4, 2).unwrap(), q(5, 2));
        assert!(secc_closed_form_m1(5, 2).is_err());
        assert!(secc_closed_form_wl1(9, 4).is_err());
        assert!(secc_closed_form_wl1(3, 0).is_err());
    }

    #[test]
    fn below_half_weight_single_subblock() {
        // Outside the closed-form range, but the program is still solvable.
        assert_eq!(gsp(1, 5, 2, 3), q(5, 1));
    }

    #[test]
    fn example_certificate() {
        let cert = build_certificate_table1(4, 3).unwrap();
        let p = |ws: &[u32]| WeightProfile::new(ws.to_vec(), 3).unwrap();
        assert_eq!(cert.primal.len(), 3);
        assert_eq!(cert.primal[&p(&[3, 3, 3, 2])], q(1, 12));
        assert_eq!(cert.primal[&p(&[3, 3, 2, 2])], q(1, 4));
        assert_eq!(cert.primal[&p(&[3, 2, 2, 2])], q(1, 4));
        assert_eq!(cert.dual.len(), 3);
        assert_eq!(cert.dual[&p(&[3, 3, 3, 3])], q(1, 1));
        assert_eq!(cert.dual[&p(&[3, 2, 2, 2])], q(18, 1));
        assert_eq!(cert.dual[&p(&[2, 2, 2, 2])], q(45, 2));
    }

    #[test]
    fn small_certificates() {
        let c = build_certificate_table1(2, 5).unwrap();
        assert_eq!(c.primal[&top_profile(2, 5, 2).unwrap()], q(1, 2));
        assert_eq!(c.primal[&top_profile(2, 5, 1).unwrap()], q(1, 2));
        let c = build_certificate_table1(1, 4).unwrap();
        let full = top_profile(1, 4, 1).unwrap();
        assert_eq!((c.primal[&full].clone(), c.dual[&full].clone()), (q(1, 1), q(1, 1)));

        let single = |len: u32, w: u32| WeightProfile::new(vec![w], len).unwrap();
        let c = build_certificate_table2(4, 2).unwrap();
        assert_eq!(c.primal[&single(4, 4)], q(1, 2));
        assert_eq!(c.primal[&single(4, 3)], q(1, 2));
        let c = build_certificate_table2(6, 6).unwrap();
        assert_eq!((c.primal[&single(6, 6)].clone(), c.dual[&single(6, 6)].clone()), (q(1, 1), q(1, 1)));
        assert!(build_certificate_table2(5, 2).is_err());
    }

    #[test]
    fn table1_triangle() {
        for m in 1..=8usize {
            for len in (m as u32).div_ceil(2).max(1)..=6 {
                let lp = secc_reduced_lp_at_radius(m, len, len - 1, 1).unwrap();
                let cert = build_certificate_table1(m, len).unwrap();
                let closed = secc_closed_form_wl1(m, len).unwrap();
                let optimum = solve_min(&lp).unwrap().value;
                let verdict = verify_certificate(&lp, &cert).unwrap();
                assert_eq!(cert.primal_value(&lp), closed);
                if m == 1 || 2 * len as usize >= m + 2 {
                    assert_eq!(verdict, Verdict::Valid { value: closed.clone() }, "m={m} L={len}");
                    assert_eq!(optimum, closed);
                } else {
                    // Boundary diagonals: the cover is still feasible, the
                    // packing is not, and the optimum sits strictly below.
                    assert!(matches!(verdict, Verdict::DualInfeasible { .. }), "m={m} L={len}");
                    assert!(optimum < closed, "m={m} L={len}");
                }
            }
        }
    }

    #[test]
    fn boundary_values() {
        let lp = secc_reduced_lp_at_radius(3, 2, 1, 1).unwrap();
        assert_eq!(solve_min(&lp).unwrap().value, q(29, 5));
        assert_eq!(secc_closed_form_wl1(3, 2).unwrap(), q(6, 1));
        let lp = secc_reduced_lp_at_radius(2, 1, 0, 1).unwrap();
        assert_eq!(solve_min(&lp).unwrap().value, q(4, 3));
        assert_eq!(secc_closed_form_wl1(2, 1).unwrap(), q(3, 2));
    }

    #[test]
    fn table2_triangle() {
        for len in 1..=10u32 {
            for w in len.div_ceil(2)..=len {
                let lp = secc_reduced_lp_at_radius(1, len, w, 1).unwrap();
                let cert = build_certificate_table2(len, w).unwrap();
                let closed = secc_closed_form_m1(len, w).unwrap();
                assert_eq!(
                    verify_certificate(&lp, &cert).unwrap(),
                    Verdict::Valid { value: closed.clone() },
                    "L={len} w={w}"
                );
                assert_eq!(solve_min(&lp).unwrap().value, closed);
            }
        }
    }

    #[test]
    fn non_increasing_in_threshold() {
        for (m, len) in [(1, 6), (2, 3), (2, 4), (3, 3)] {
            for d in 1..=5 {
                let values: Vec<_> = (0..=len).map(|w| gsp(m, len, w, d)).collect();
                assert!(values.windows(2).all(|p| p[0] >= p[1]), "m={m} L={len} d={d}");
            }
        }
    }
}
