//! Exact covering linear programs and primal-dual certificate checks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::combinatorics::{ExactInteger, ExactRational};
use crate::error::{Error, Result};
use crate::orbits::OrbitIndexSet;
use crate::profile::WeightProfile;
use crate::scalar::Scalar;
use crate::simplex::solve_covering;

/// `min Σ_u c_u Y_u` subject to `M Y >= 1`, `Y >= 0`, with rows and columns
/// indexed by weight profiles.
#[derive(Debug, Clone)]
pub struct ReducedLP {
    rows: OrbitIndexSet,
    cols: OrbitIndexSet,
    matrix: Vec<Vec<ExactInteger>>,
    objective: Vec<ExactInteger>,
}

impl ReducedLP {
    pub fn new(
        rows: OrbitIndexSet,
        cols: OrbitIndexSet,
        matrix: Vec<Vec<ExactInteger>>,
        objective: Vec<ExactInteger>,
    ) -> Result<Self> {
        check_dense(&matrix, &objective)?;
        if matrix.len() != rows.len() || objective.len() != cols.len() {
            return Err(Error::Mismatch(format!(
                "{}x{} matrix for {} rows and {} columns",
                matrix.len(),
                objective.len(),
                rows.len(),
                cols.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            matrix,
            objective,
        })
    }

    pub fn rows(&self) -> &OrbitIndexSet {
        &self.rows
    }

    pub fn cols(&self) -> &OrbitIndexSet {
        &self.cols
    }

    pub fn matrix(&self) -> &[Vec<ExactInteger>] {
        &self.matrix
    }

    pub fn objective(&self) -> &[ExactInteger] {
        &self.objective
    }

    /// Entry for a (row, column) profile pair, if both are indexed.
    pub fn entry(&self, v: &WeightProfile, u: &WeightProfile) -> Option<&ExactInteger> {
        let i = self.rows.index_of(v)?;
        let j = self.cols.index_of(u)?;
        Some(&self.matrix[i][j])
    }

    /// Converts dense solution vectors into a profile-keyed certificate,
    /// dropping zero entries.
    pub fn certificate(&self, primal: &[ExactRational], dual: &[ExactRational]) -> Certificate {
        let sparse = |set: &OrbitIndexSet, xs: &[ExactRational]| {
            set.iter()
                .zip(xs)
                .filter(|(_, x)| !x.is_zero())
                .map(|(p, x)| (p.clone(), x.clone()))
                .collect()
        };
        Certificate {
            primal: sparse(&self.cols, primal),
            dual: sparse(&self.rows, dual),
        }
    }
}

/// Optimal value with an optimal primal (per column) and dual (per row).
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: ExactRational,
    pub primal: Vec<ExactRational>,
    pub dual: Vec<ExactRational>,
}

/// Sparse primal `Y` (keyed by column profile) and dual `X` (keyed by row
/// profile). Missing keys are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificate {
    pub primal: BTreeMap<WeightProfile, ExactRational>,
    pub dual: BTreeMap<WeightProfile, ExactRational>,
}

impl Certificate {
    pub fn primal_value(&self, lp: &ReducedLP) -> ExactRational {
        self.primal
            .iter()
            .filter_map(|(u, y)| {
                lp.cols
                    .index_of(u)
                    .map(|j| y * BigRational::from_integer(lp.objective[j].clone()))
            })
            .sum()
    }

    pub fn dual_value(&self) -> ExactRational {
        self.dual.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Both sides feasible with equal objective values.
    Valid { value: ExactRational },
    /// A negative entry or an uncovered row (`(M Y)_v < 1`).
    PrimalInfeasible { at: usize },
    /// A negative entry or a violated packing constraint (`(X M)_u > c_u`).
    DualInfeasible { at: usize },
    /// Both sides feasible but the objective values differ.
    Gap {
        primal: ExactRational,
        dual: ExactRational,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Valid { .. } => "valid",
            Verdict::PrimalInfeasible { .. } => "primal-infeasible",
            Verdict::DualInfeasible { .. } => "dual-infeasible",
            Verdict::Gap { .. } => "gap",
        }
    }
}

fn check_dense(matrix: &[Vec<ExactInteger>], objective: &[ExactInteger]) -> Result<()> {
    if let Some((i, row)) = matrix
        .iter()
        .enumerate()
        .find(|(_, r)| r.len() != objective.len())
    {
        return Err(Error::Mismatch(format!(
            "row {i} has {} entries, expected {}",
            row.len(),
            objective.len()
        )));
    }
    if matrix.iter().flatten().any(Signed::is_negative) {
        return Err(Error::Mismatch("negative constraint entry".into()));
    }
    if objective.iter().any(|c| !c.is_positive()) {
        return Err(Error::Mismatch("objective entries must be positive".into()));
    }
    Ok(())
}

/// Exact dense verification of `(Y, X)` against `min c·Y, MY >= 1`.
pub fn verify_dense(
    matrix: &[Vec<ExactInteger>],
    objective: &[ExactInteger],
    primal: &[ExactRational],
    dual: &[ExactRational],
) -> Result<Verdict> {
    check_dense(matrix, objective)?;
    if primal.len() != objective.len() || dual.len() != matrix.len() {
        return Err(Error::Mismatch(format!(
            "certificate lengths {}/{} for a {}x{} program",
            primal.len(),
            dual.len(),
            matrix.len(),
            objective.len()
        )));
    }
    if let Some(j) = primal.iter().position(Signed::is_negative) {
        return Ok(Verdict::PrimalInfeasible { at: j });
    }
    if let Some(i) = dual.iter().position(Signed::is_negative) {
        return Ok(Verdict::DualInfeasible { at: i });
    }
    let one = BigRational::from_integer(BigInt::from(1));
    for (i, row) in matrix.iter().enumerate() {
        let covered: BigRational = row
            .iter()
            .zip(primal)
            .filter(|(a, y)| !a.is_zero() && !y.is_zero())
            .map(|(a, y)| y * BigRational::from_integer(a.clone()))
            .sum();
        if covered < one {
            return Ok(Verdict::PrimalInfeasible { at: i });
        }
    }
    for (j, c) in objective.iter().enumerate() {
        let load: BigRational = matrix
            .iter()
            .zip(dual)
            .filter(|(row, x)| !row[j].is_zero() && !x.is_zero())
            .map(|(row, x)| x * BigRational::from_integer(row[j].clone()))
            .sum();
        if load > BigRational::from_integer(c.clone()) {
            return Ok(Verdict::DualInfeasible { at: j });
        }
    }
    let primal_value: BigRational = objective
        .iter()
        .zip(primal)
        .map(|(c, y)| y * BigRational::from_integer(c.clone()))
        .sum();
    let dual_value: BigRational = dual.iter().sum();
    if primal_value == dual_value {
        Ok(Verdict::Valid {
            value: primal_value,
        })
    } else {
        Ok(Verdict::Gap {
            primal: primal_value,
            dual: dual_value,
        })
    }
}

/// Solves a dense covering program exactly and re-verifies the optimality
/// certificate before returning it.
pub fn solve_dense(matrix: &[Vec<ExactInteger>], objective: &[ExactInteger]) -> Result<LpSolution> {
    check_dense(matrix, objective)?;
    let costs: Vec<Scalar> = objective.iter().map(Scalar::from_bigint).collect();
    let sol = solve_covering(
        matrix.len(),
        objective.len(),
        |v, u| Scalar::from_bigint(&matrix[v][u]),
        &costs,
    )?;
    match verify_dense(matrix, objective, &sol.primal, &sol.dual)? {
        Verdict::Valid { value } if value == sol.value => Ok(LpSolution {
            value,
            primal: sol.primal,
            dual: sol.dual,
        }),
        other => Err(Error::Mismatch(format!(
            "simplex returned a certificate that fails verification: {}",
            other.label()
        ))),
    }
}

/// Exact optimum of a reduced program together with optimal primal and
/// dual vectors in the program's row and column order.
pub fn solve_min(lp: &ReducedLP) -> Result<LpSolution> {
    solve_dense(&lp.matrix, &lp.objective)
}

/// Checks a profile-keyed certificate against `lp`. Keys that are not
/// indices of `lp` are reported as a mismatch, not as a verdict.
pub fn verify_certificate(lp: &ReducedLP, cert: &Certificate) -> Result<Verdict> {
    let densify = |set: &OrbitIndexSet, map: &BTreeMap<WeightProfile, ExactRational>, side| {
        let mut out = vec![BigRational::zero(); set.len()];
        for (p, x) in map {
            let i = set.index_of(p).ok_or_else(|| {
                Error::Mismatch(format!("{side} certificate entry {p} is not indexed by the program"))
            })?;
            out[i] = x.clone();
        }
        Ok::<_, Error>(out)
    };
    let primal = densify(&lp.cols, &cert.primal, "primal")?;
    let dual = densify(&lp.rows, &cert.dual, "dual")?;
    verify_dense(&lp.matrix, &lp.objective, &primal, &dual)
}

/// `min_u c_u / M_{v,u}` over columns with a positive entry, for a program
/// with the single constraint row `row`.
pub fn min_ratio(lp: &ReducedLP, row: &WeightProfile) -> Result<ExactRational> {
    if lp.rows.len() != 1 {
        return Err(Error::Mismatch(format!(
            "ratio bound needs a single-row program, got {} rows",
            lp.rows.len()
        )));
    }
    if lp.rows.index_of(row).is_none() {
        return Err(Error::Mismatch(format!("{row} is not the program's row")));
    }
    lp.matrix[0]
        .iter()
        .zip(&lp.objective)
        .filter(|(a, _)| a.is_positive())
        .map(|(a, c)| BigRational::new(c.clone(), a.clone()))
        .min()
        .ok_or(Error::Infeasible)
}
