//! The n-ary resultant matrix `A(g_1, ..., g_n)` and its valuation profile.
//!
//! Block `k` has `m_k` rows; row `j` of the block carries the coefficients
//! (low to high) of `prod_{l != k} g_l`, shifted right by `j` columns.
//! A correction row vector `U` multiplies from the left: `U A` is the
//! coefficient vector of `sum_k u_k prod_{l != k} g_l`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{omit_product, MonicPoly};
use crate::ring::{PadicContext, Valuation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultantMatrix {
    matrix: Matrix,
    degrees: Vec<usize>,
    omitted: Vec<MonicPoly>,
}

impl ResultantMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// `m_1, ..., m_n`, which are also the block row counts.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Total degree `M`.
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// `prod_{l != k} g_l` for each block `k`.
    pub fn omitted_products(&self) -> &[MonicPoly] {
        &self.omitted
    }

    /// First row index of each block.
    pub fn block_starts(&self) -> Vec<usize> {
        self.degrees
            .iter()
            .scan(0, |acc, &m| {
                let start = *acc;
                *acc += m;
                Some(start)
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<BigInt> {
        self.matrix.det()
    }
}

/// Valuation data of a factor tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultantProfile {
    #[serde(serialize_with = "crate::problem::ser_bigint")]
    pub res: BigInt,
    pub t: u64,
    /// `t'`, present only for profiles computed in special form.
    pub t_prime: Option<u64>,
    /// Column exponents `d_1 >= ... >= d_M` (special form only).
    pub d: Vec<u64>,
    /// `t - (d_2 + ... + d_M)`; always equal to `t_prime`.
    pub e_prime: Option<u64>,
}

impl ResultantProfile {
    /// The exponent that governs a lifting step in the given form.
    pub fn effective(&self, special: bool) -> u64 {
        if special {
            self.t_prime.unwrap_or(self.t)
        } else {
            self.t
        }
    }
}

fn validate(gs: &[MonicPoly]) -> Result<()> {
    if gs.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    if let Some(k) = gs.iter().position(|g| g.degree() == 0) {
        return Err(Error::DegreeZeroFactor(k));
    }
    Ok(())
}

pub fn build_matrix(gs: &[MonicPoly]) -> Result<ResultantMatrix> {
    validate(gs)?;
    let size: usize = gs.iter().map(MonicPoly::degree).sum();
    let mut matrix = Matrix::zeros(size, size);
    let mut omitted = Vec::with_capacity(gs.len());
    let mut row = 0;
    for (k, g) in gs.iter().enumerate() {
        let a = omit_product(gs, k)?;
        let coeffs = a.full_coeffs();
        for shift in 0..g.degree() {
            for (i, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    matrix[(row, shift + i)] = c.clone();
                }
            }
            row += 1;
        }
        omitted.push(a);
    }
    Ok(ResultantMatrix {
        matrix,
        degrees: gs.iter().map(MonicPoly::degree).collect(),
        omitted,
    })
}

/// `det A(g_1, ..., g_n)`, exactly.
pub fn resultant(gs: &[MonicPoly]) -> Result<BigInt> {
    build_matrix(gs)?.determinant()
}

/// `d_i = (n-1) - max{ j in [0, n-1] : m_1 + ... + m_j <= i - 1 }` for
/// `i = 1..M`, from an ascending degree sequence.
pub fn column_exponents(degrees: &[usize]) -> Vec<u64> {
    let n = degrees.len();
    let total: usize = degrees.iter().sum();
    let mut prefix = vec![0usize; n];
    for j in 1..n {
        prefix[j] = prefix[j - 1] + degrees[j - 1];
    }
    (1..=total)
        .map(|i| {
            let jmax = (0..n).rev().find(|&j| prefix[j] <= i - 1).unwrap_or(0);
            (n - 1 - jmax) as u64
        })
        .collect()
}

/// `sum_{j in [1, n-1]} ((n - j) m_j - 1)` for an ascending degree sequence.
pub fn special_reduction(degrees: &[usize]) -> u64 {
    let n = degrees.len();
    degrees
        .iter()
        .take(n.saturating_sub(1))
        .enumerate()
        .map(|(j, &m)| ((n - 1 - j) * m - 1) as u64)
        .sum()
}

/// Checks that degrees ascend and every factor is `X^{m_k}` modulo `p`.
pub fn check_special_form(gs: &[MonicPoly], ctx: &PadicContext) -> Result<()> {
    if let Some(k) = gs.windows(2).position(|w| w[0].degree() > w[1].degree()) {
        return Err(Error::NotSpecialForm(format!(
            "degrees must ascend, but factor {} has degree {} > {}",
            k,
            gs[k].degree(),
            gs[k + 1].degree()
        )));
    }
    if let Some(k) = gs.iter().position(|g| !g.is_x_power_mod_p(ctx)) {
        return Err(Error::NotSpecialForm(format!(
            "factor {k} is not congruent to X^{} modulo {}",
            gs[k].degree(),
            ctx.p()
        )));
    }
    Ok(())
}

pub fn profile(gs: &[MonicPoly], ctx: &PadicContext, special: bool) -> Result<ResultantProfile> {
    let res = resultant(gs)?;
    profile_from_resultant(gs, res, ctx, special)
}

/// Builds a profile around a resultant the caller already has.
pub fn profile_from_resultant(
    gs: &[MonicPoly],
    res: BigInt,
    ctx: &PadicContext,
    special: bool,
) -> Result<ResultantProfile> {
    validate(gs)?;
    let t = match ctx.val(&res) {
        Valuation::Finite(t) => t,
        Valuation::Infinite => return Err(Error::ZeroResultant),
    };
    if !special {
        return Ok(ResultantProfile {
            res,
            t,
            t_prime: None,
            d: Vec::new(),
            e_prime: None,
        });
    }
    check_special_form(gs, ctx)?;
    let degrees: Vec<usize> = gs.iter().map(MonicPoly::degree).collect();
    let d = column_exponents(&degrees);
    let reduction = special_reduction(&degrees);
    let d_tail: u64 = d.iter().skip(1).sum();
    if reduction != d_tail {
        return Err(Error::InvariantViolated(format!(
            "column exponent sum {d_tail} differs from degree reduction {reduction}"
        )));
    }
    let t_prime = t.checked_sub(reduction).ok_or_else(|| {
        Error::InvariantViolated(format!("t' = {t} - {reduction} is negative"))
    })?;
    Ok(ResultantProfile {
        res,
        t,
        t_prime: Some(t_prime),
        d,
        e_prime: Some(t - d_tail),
    })
}
