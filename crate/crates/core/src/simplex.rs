//! Dense dictionary simplex over exact rationals.
//!
//! Covering programs `min c·y s.t. My >= 1, y >= 0` are solved through their
//! packing dual `max 1·x s.t. Mᵀx <= c, x >= 0`, whose slack basis is feasible
//! whenever `c >= 0`, so no phase one is needed. The covering solution is read
//! off the reduced costs of the slacks.

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Degenerate pivots tolerated under the largest-coefficient rule before
/// falling back to Bland's rule.
const DEGENERATE_STREAK: usize = 50;

#[derive(Debug, Clone)]
pub(crate) struct CoveringSolution {
    pub value: BigRational,
    /// One entry per column of the covering matrix.
    pub primal: Vec<BigRational>,
    /// One entry per row of the covering matrix.
    pub dual: Vec<BigRational>,
}

/// `basic_i = rhs_i - Σ_j coef[i][j]·nonbasic_j`, `z = value + Σ_j obj[j]·nonbasic_j`.
struct Dictionary {
    coef: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
    obj: Vec<Scalar>,
    value: Scalar,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
}

impl Dictionary {
    fn entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (j, o) in self.obj.iter().enumerate() {
            if !o.is_positive() {
                continue;
            }
            best = match best {
                None => Some(j),
                Some(b) if bland => {
                    if self.nonbasic[j] < self.nonbasic[b] {
                        Some(j)
                    } else {
                        Some(b)
                    }
                }
                Some(b) => match o.cmp(&self.obj[b]) {
                    Ordering::Greater => Some(j),
                    Ordering::Equal if self.nonbasic[j] < self.nonbasic[b] => Some(j),
                    _ => Some(b),
                },
            };
        }
        best
    }

    /// Minimum-ratio row; ties go to the smallest basic variable index.
    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, Scalar)> = None;
        for (i, row) in self.coef.iter().enumerate() {
            let a = &row[col];
            if !a.is_positive() {
                continue;
            }
            let ratio = self.rhs[i].div(a);
            best = match best {
                None => Some((i, ratio)),
                Some((b, r)) => match ratio.cmp(&r) {
                    Ordering::Less => Some((i, ratio)),
                    Ordering::Equal if self.basic[i] < self.basic[b] => Some((i, ratio)),
                    _ => Some((b, r)),
                },
            };
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let inv = self.coef[p][q].recip();
        {
            let row = &mut self.coef[p];
            for (j, a) in row.iter_mut().enumerate() {
                if j != q && !a.is_zero() {
                    *a = a.mul(&inv);
                }
            }
            row[q] = inv.clone();
        }
        self.rhs[p] = self.rhs[p].mul(&inv);

        let pivot_row = std::mem::take(&mut self.coef[p]);
        let support: Vec<usize> = pivot_row
            .iter()
            .enumerate()
            .filter(|(j, a)| *j != q && !a.is_zero())
            .map(|(j, _)| j)
            .collect();
        let pivot_rhs = self.rhs[p].clone();

        for (i, row) in self.coef.iter_mut().enumerate() {
            if i == p {
                continue;
            }
            let factor = row[q].clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &support {
                row[j] = row[j].sub_mul(&factor, &pivot_row[j]);
            }
            row[q] = factor.mul(&inv).neg();
            self.rhs[i] = self.rhs[i].sub_mul(&factor, &pivot_rhs);
        }

        let factor = self.obj[q].clone();
        if !factor.is_zero() {
            for &j in &support {
                self.obj[j] = self.obj[j].sub_mul(&factor, &pivot_row[j]);
            }
            self.obj[q] = factor.mul(&inv).neg();
            self.value = self.value.add(&factor.mul(&pivot_rhs));
        }
        self.coef[p] = pivot_row;
        std::mem::swap(&mut self.basic[p], &mut self.nonbasic[q]);
    }
}

/// Solves `min Σ_u cost[u]·y_u` subject to `Σ_u entry(v,u)·y_u >= 1` for every
/// row `v`, `y >= 0`. `entry(v, u)` must be non-negative, costs positive.
pub(crate) fn solve_covering(
    rows: usize,
    cols: usize,
    entry: impl Fn(usize, usize) -> Scalar,
    costs: &[Scalar],
) -> Result<CoveringSolution> {
    if costs.len() != cols {
        return Err(Error::Mismatch(format!(
            "{} costs for {cols} columns",
            costs.len()
        )));
    }
    if costs.iter().any(Scalar::is_negative) {
        return Err(Error::Mismatch("negative objective coefficient".into()));
    }
    // Packing dual: one dictionary row per covering column, one nonbasic
    // variable per covering row. Variables 0..rows are the packing variables,
    // rows..rows+cols the slacks.
    let coef: Vec<Vec<Scalar>> = (0..cols)
        .map(|u| (0..rows).map(|v| entry(v, u)).collect())
        .collect();
    let mut dict = Dictionary {
        coef,
        rhs: costs.to_vec(),
        obj: vec![Scalar::one(); rows],
        value: Scalar::zero(),
        basic: (rows..rows + cols).collect(),
        nonbasic: (0..rows).collect(),
    };

    let mut streak = 0usize;
    while let Some(q) = dict.entering(streak >= DEGENERATE_STREAK) {
        // An entering packing variable with no blocking constraint means
        // some covering row is all zeros.
        let p = dict.leaving(q).ok_or(Error::Infeasible)?;
        if dict.rhs[p].is_zero() {
            streak += 1;
        } else {
            streak = 0;
        }
        dict.pivot(p, q);
    }

    let mut dual = vec![BigRational::default(); rows];
    let mut primal = vec![BigRational::default(); cols];
    for (i, &var) in dict.basic.iter().enumerate() {
        if var < rows {
            dual[var] = dict.rhs[i].to_big();
        }
    }
    for (j, &var) in dict.nonbasic.iter().enumerate() {
        if var >= rows {
            primal[var - rows] = dict.obj[j].neg().to_big();
        }
    }
    Ok(CoveringSolution {
        value: dict.value.to_big(),
        primal,
        dual,
    })
}
