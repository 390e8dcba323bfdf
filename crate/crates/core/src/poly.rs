//! Monic integer polynomials, the two-polynomial Sylvester resultant and the
//! discriminant.
//!
//! Coefficients are exact integers everywhere; truncation to a power of `p`
//! only happens where a caller asks for it explicitly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{reduce_balanced, reduce_canonical, PadicContext, Valuation};

/// A monic polynomial `X^m + c_{m-1} X^{m-1} + ... + c_0`.
///
/// Only the `m` lower coefficients are stored (low to high); the leading 1
/// is implicit, so monicity holds by construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonicPoly {
    lower: Vec<BigInt>,
}

impl MonicPoly {
    pub fn new(lower: Vec<BigInt>) -> Self {
        MonicPoly { lower }
    }

    pub fn one() -> Self {
        MonicPoly { lower: Vec::new() }
    }

    /// `X^m`.
    pub fn x_pow(m: usize) -> Self {
        MonicPoly {
            lower: vec![BigInt::zero(); m],
        }
    }

    /// `X + a`.
    pub fn linear(a: impl Into<BigInt>) -> Self {
        MonicPoly {
            lower: vec![a.into()],
        }
    }

    pub fn from_lower<T: Into<BigInt>>(lower: impl IntoIterator<Item = T>) -> Self {
        MonicPoly {
            lower: lower.into_iter().map(Into::into).collect(),
        }
    }

    /// Builds from a full coefficient list (low to high) whose last entry must be 1.
    pub fn from_full(coeffs: &[BigInt]) -> Result<Self> {
        match coeffs.split_last() {
            Some((lead, lower)) if lead.is_one() => Ok(MonicPoly {
                lower: lower.to_vec(),
            }),
            _ => Err(Error::HypothesisViolated(
                "leading coefficient must be 1".into(),
            )),
        }
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    pub fn lower_coeffs(&self) -> &[BigInt] {
        &self.lower
    }

    pub fn lower_coeffs_mut(&mut self) -> &mut [BigInt] {
        &mut self.lower
    }

    /// All `m + 1` coefficients, low to high.
    pub fn full_coeffs(&self) -> Vec<BigInt> {
        let mut c = self.lower.clone();
        c.push(BigInt::one());
        c
    }

    pub fn mul(&self, other: &MonicPoly) -> MonicPoly {
        let full = dense::mul(&self.full_coeffs(), &other.full_coeffs());
        MonicPoly::from_full(&full).expect("product of monic polynomials is monic")
    }

    pub fn derivative(&self) -> Vec<BigInt> {
        dense::derivative(&self.full_coeffs())
    }

    /// Coefficientwise `self - other`, as a dense vector of length `max(deg) + 1`.
    pub fn sub(&self, other: &MonicPoly) -> Vec<BigInt> {
        dense::sub(&self.full_coeffs(), &other.full_coeffs())
    }

    /// True iff `self ≡ X^m (mod p)`.
    pub fn is_x_power_mod_p(&self, ctx: &PadicContext) -> bool {
        self.lower.iter().all(|c| ctx.val(c).at_least(1))
    }

    pub fn reduce_canonical(&self, modulus: &BigInt) -> MonicPoly {
        MonicPoly {
            lower: self.lower.iter().map(|c| reduce_canonical(c, modulus)).collect(),
        }
    }

    pub fn reduce_balanced(&self, modulus: &BigInt) -> MonicPoly {
        MonicPoly {
            lower: self.lower.iter().map(|c| reduce_balanced(c, modulus)).collect(),
        }
    }

    pub fn congruent_mod(&self, other: &MonicPoly, r: u64, ctx: &PadicContext) -> bool {
        dense::congruent(&self.full_coeffs(), &other.full_coeffs(), r, ctx)
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.degree();
        match m {
            0 => return write!(f, "1"),
            1 => write!(f, "X")?,
            _ => write!(f, "X^{m}")?,
        }
        for i in (0..m).rev() {
            let c = &self.lower[i];
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            write!(f, " {sign} ")?;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if i == 1 {
                        write!(f, "X")?;
                    } else {
                        write!(f, "X^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonicPoly({self})")
    }
}

/// Exact product; the empty product is the constant 1.
pub fn product(ps: &[MonicPoly]) -> MonicPoly {
    ps.iter().fold(MonicPoly::one(), |acc, p| acc.mul(p))
}

/// Product of all factors except the one at (0-based) index `k`.
pub fn omit_product(gs: &[MonicPoly], k: usize) -> Result<MonicPoly> {
    if k >= gs.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: gs.len(),
        });
    }
    Ok(gs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .fold(MonicPoly::one(), |acc, (_, g)| acc.mul(g)))
}

/// Classical Sylvester resultant of two monic polynomials of degree >= 1.
pub fn sylvester_resultant(g: &MonicPoly, h: &MonicPoly) -> Result<BigInt> {
    if g.degree() == 0 || h.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    sylvester_dense(&g.full_coeffs(), &h.full_coeffs())
}

/// Sylvester resultant of two arbitrary integer polynomials given as full
/// coefficient vectors (low to high, nonzero leading coefficient).
///
/// Rows are laid out high to low: `deg b` shifted copies of `a`, then
/// `deg a` shifted copies of `b`. For monic inputs this is
/// `prod (alpha_i - beta_j)` over the roots of `a` and `b`.
pub fn sylvester_dense(a: &[BigInt], b: &[BigInt]) -> Result<BigInt> {
    let a = dense::trimmed(a);
    let b = dense::trimmed(b);
    if a.is_empty() || b.is_empty() {
        return Ok(BigInt::zero());
    }
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return Ok(BigInt::one());
    }
    let mut s = Matrix::zeros(size, size);
    for r in 0..n {
        for (i, c) in a.iter().rev().enumerate() {
            s[(r, r + i)] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in b.iter().rev().enumerate() {
            s[(n + r, r + i)] = c.clone();
        }
    }
    s.det()
}

/// `Δ(f) = (-1)^{m(m-1)/2} Res(f, f')`; degree-one polynomials have `Δ = 1`.
pub fn discriminant(f: &MonicPoly) -> Result<BigInt> {
    let m = f.degree();
    if m == 0 {
        return Err(Error::DegreeZero);
    }
    let r = sylvester_dense(&f.full_coeffs(), &f.derivative())?;
    Ok(if (m * (m - 1) / 2) % 2 == 1 { -r } else { r })
}

/// Helpers on dense coefficient vectors (low to high, not necessarily monic).
pub mod dense {
    use super::*;

    pub fn trimmed(a: &[BigInt]) -> &[BigInt] {
        let len = a.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
        &a[..len]
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    pub fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let len = a.len().max(b.len());
        (0..len)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_default();
                match b.get(i) {
                    Some(y) => x - y,
                    None => x,
                }
            })
            .collect()
    }

    pub fn derivative(a: &[BigInt]) -> Vec<BigInt> {
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect()
    }

    /// True iff every coefficient of `a - b` is divisible by `p^r`.
    pub fn congruent(a: &[BigInt], b: &[BigInt], r: u64, ctx: &PadicContext) -> bool {
        sub(a, b).iter().all(|c| ctx.val(c).at_least(r))
    }

    /// Minimum valuation over the coefficients of `a - b`.
    pub fn diff_valuation(a: &[BigInt], b: &[BigInt], ctx: &PadicContext) -> Valuation {
        ctx.min_val(sub(a, b).iter())
    }
}
