//! Smith normal form over `Z_p`, computed modulo `p^K`, and row-system
//! solving `x A = y`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{exact_div, inverse_mod, reduce_canonical, PadicContext, Valuation};

/// Tie-breaking order among entries of minimal valuation when choosing a pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum PivotRule {
    /// Smallest row, then smallest column.
    #[default]
    RowMajor,
    /// Smallest column, then smallest row.
    ColumnMajor,
    /// Largest row, then largest column.
    Reverse,
}

impl PivotRule {
    pub const ALL: [PivotRule; 3] = [PivotRule::RowMajor, PivotRule::ColumnMajor, PivotRule::Reverse];

    fn prefers(self, a: (usize, usize), b: (usize, usize)) -> bool {
        match self {
            PivotRule::RowMajor => a < b,
            PivotRule::ColumnMajor => (a.1, a.0) < (b.1, b.0),
            PivotRule::Reverse => a > b,
        }
    }
}

/// `S A T ≡ diag(p^{e_1}, ..., p^{e_k}) (mod p^K)` with `S`, `T` invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub e: Vec<u64>,
    pub s: Matrix,
    pub t: Matrix,
    pub k: u64,
}

impl SmithDecomposition {
    pub fn total(&self) -> u64 {
        self.e.iter().sum()
    }

    pub fn max_exponent(&self) -> u64 {
        self.e.last().copied().unwrap_or(0)
    }

    pub fn diagonal(&self, ctx: &PadicContext) -> Matrix {
        Matrix::diagonal(&self.e.iter().map(|&e| ctx.pow(e)).collect::<Vec<_>>())
    }
}

pub fn smith_p(a: &Matrix, k: u64, ctx: &PadicContext) -> Result<SmithDecomposition> {
    smith_p_with(a, k, ctx, PivotRule::default())
}

pub fn smith_p_with(
    a: &Matrix,
    k: u64,
    ctx: &PadicContext,
    rule: PivotRule,
) -> Result<SmithDecomposition> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Smith form of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    ctx.check_exponent(k)?;
    let n = a.rows();
    let modulus = ctx.pow(k);
    let reduce = |x: &BigInt| reduce_canonical(x, &modulus);
    let mut w = a.map_entries(reduce);
    let mut s = Matrix::identity(n);
    let mut t = Matrix::identity(n);
    let mut e = Vec::with_capacity(n);
    let mut total = 0u64;

    for i in 0..n {
        let mut best: Option<(u64, (usize, usize))> = None;
        for r in i..n {
            for c in i..n {
                if let Valuation::Finite(v) = ctx.val(&w[(r, c)]) {
                    let better = match best {
                        None => true,
                        Some((bv, pos)) => v < bv || (v == bv && rule.prefers((r, c), pos)),
                    };
                    if better {
                        best = Some((v, (r, c)));
                    }
                }
            }
        }
        let Some((v, (pr, pc))) = best else {
            return Err(singular_or_low(a, k, ctx));
        };
        total += v;
        if total >= k {
            return Err(singular_or_low(a, k, ctx));
        }
        w.swap_rows(i, pr);
        s.swap_rows(i, pr);
        w.swap_cols(i, pc);
        t.swap_cols(i, pc);

        let pv = ctx.pow(v);
        let unit = exact_div(&w[(i, i)], &pv);
        let inv = inverse_mod(&unit, &modulus)
            .ok_or_else(|| Error::InvariantViolated("pivot is not a unit times p^v".into()))?;
        for c in 0..n {
            w[(i, c)] = reduce(&(&w[(i, c)] * &inv));
            s[(i, c)] = reduce(&(&s[(i, c)] * &inv));
        }

        for r in i + 1..n {
            if w[(r, i)].is_zero() {
                continue;
            }
            let q = exact_div(&w[(r, i)], &pv);
            for c in i..n {
                let sub = &q * &w[(i, c)];
                w[(r, c)] = reduce(&(&w[(r, c)] - sub));
            }
            for c in 0..n {
                let sub = &q * &s[(i, c)];
                s[(r, c)] = reduce(&(&s[(r, c)] - sub));
            }
        }
        for c in i + 1..n {
            if w[(i, c)].is_zero() {
                continue;
            }
            let q = exact_div(&w[(i, c)], &pv);
            // rows below i are already cleared in column i, so only row i changes in w
            w[(i, c)] = BigInt::zero();
            for r in 0..n {
                let sub = &q * &t[(r, i)];
                t[(r, c)] = reduce(&(&t[(r, c)] - sub));
            }
        }
        e.push(v);
    }
    Ok(SmithDecomposition { e, s, t, k })
}

fn singular_or_low(a: &Matrix, k: u64, _ctx: &PadicContext) -> Error {
    match a.det() {
        Ok(d) if d.is_zero() => Error::SingularMatrix,
        _ => Error::PrecisionTooLow { working: k },
    }
}

/// Solves `x A ≡ y (mod p^precision)`.
///
/// Every entry of `y` must be divisible by `p^bound`, and `bound` must be at
/// least the largest elementary divisor exponent of `A`. The working modulus
/// is `p^(precision + e + 1)` with `e = val_p(det A)`, so the returned `x`
/// in fact satisfies the congruence to that higher exponent.
pub fn solve_row(
    a: &Matrix,
    y: &[BigInt],
    ctx: &PadicContext,
    bound: u64,
    precision: u64,
) -> Result<Vec<BigInt>> {
    solve_row_with(a, y, ctx, bound, precision, PivotRule::default())
}

pub fn solve_row_with(
    a: &Matrix,
    y: &[BigInt],
    ctx: &PadicContext,
    bound: u64,
    precision: u64,
    rule: PivotRule,
) -> Result<Vec<BigInt>> {
    if y.len() != a.rows() || !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against a {}x{} matrix",
            y.len(),
            a.rows(),
            a.cols()
        )));
    }
    for (index, yi) in y.iter().enumerate() {
        if let Valuation::Finite(v) = ctx.val(yi) {
            if v < bound {
                return Err(Error::InsufficientValuation {
                    index,
                    valuation: v,
                    bound,
                });
            }
        }
    }
    // e is not known before the decomposition; bound >= e_k is a usable
    // first guess and the decomposition tells us whether it sufficed.
    let mut k = precision
        .checked_add(bound)
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::PrecisionCapExceeded {
            exponent: u64::MAX,
            cap: ctx.cap(),
        })?;
    let snf = loop {
        match smith_p_with(a, k, ctx, rule) {
            Ok(snf) => {
                let needed = precision + snf.total() + 1;
                if needed > k {
                    k = needed;
                    continue;
                }
                break snf;
            }
            Err(Error::PrecisionTooLow { .. }) => {
                k = k.checked_mul(2).ok_or(Error::PrecisionCapExceeded {
                    exponent: u64::MAX,
                    cap: ctx.cap(),
                })?;
                ctx.check_exponent(k)?;
            }
            Err(err) => return Err(err),
        }
    };
    solve_with_decomposition(&snf, y, ctx)
}

/// True iff `val_p(det A) = t`, decided modulo `p^{t+1}` without computing
/// the determinant exactly.
pub fn determinant_valuation_is(a: &Matrix, t: u64, ctx: &PadicContext) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let modulus = ctx.pow(t + 1);
    let reduced = a.map_entries(|x| reduce_canonical(x, &modulus));
    match smith_p(&reduced, t + 1, ctx) {
        Ok(snf) => Ok(snf.total() == t),
        Err(Error::PrecisionTooLow { .. }) | Err(Error::SingularMatrix) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `x = (z_i / p^{e_i})_i S` with `z = y T`, all modulo `p^K`.
pub fn solve_with_decomposition(
    snf: &SmithDecomposition,
    y: &[BigInt],
    ctx: &PadicContext,
) -> Result<Vec<BigInt>> {
    let modulus = ctx.pow(snf.k);
    let z = snf.t.left_mul(y)?;
    let w = z
        .iter()
        .zip(&snf.e)
        .enumerate()
        .map(|(index, (zi, &ei))| {
            let zi = reduce_canonical(zi, &modulus);
            match ctx.val(&zi) {
                Valuation::Finite(v) if v < ei => Err(Error::InsufficientValuation {
                    index,
                    valuation: v,
                    bound: ei,
                }),
                _ => Ok(exact_div(&zi, &ctx.pow(ei))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(snf
        .s
        .left_mul(&w)?
        .iter()
        .map(|x| reduce_canonical(x, &modulus))
        .collect())
}

/// Checks that `x A ∈ p^u` forces `x ∈ p^{u - e}`, where `e = val_p(det A)`,
/// or `x ∈ p^{u - e'}` with `e' = e - (d_2 + ... + d_k)` when column
/// exponents `d` (p^{d_i} dividing column i) are supplied.
pub fn valuation_shift_bound(
    a: &Matrix,
    x: &[BigInt],
    u: u64,
    column_exponents: Option<&[u64]>,
    ctx: &PadicContext,
) -> Result<bool> {
    let e = ctx
        .val(&a.det()?)
        .finite()
        .ok_or(Error::SingularMatrix)?;
    let shift = match column_exponents {
        None => e,
        Some(d) => {
            if d.len() != a.cols() {
                return Err(Error::DimensionMismatch("column exponent count".into()));
            }
            for (c, &dc) in d.iter().enumerate() {
                if !a.column(c).all(|v| ctx.val(v).at_least(dc)) {
                    return Err(Error::HypothesisViolated(format!(
                        "column {c} is not divisible by p^{dc}"
                    )));
                }
            }
            let tail: u64 = d.iter().skip(1).sum();
            e.checked_sub(tail).ok_or_else(|| {
                Error::InvariantViolated("column exponents exceed the determinant valuation".into())
            })?
        }
    };
    if u < shift {
        return Err(Error::HypothesisViolated(format!("u = {u} is below {shift}")));
    }
    let xa = a.left_mul(x)?;
    if !ctx.min_val(&xa).at_least(u) {
        return Err(Error::HypothesisViolated(format!(
            "x A is not divisible by p^{u}"
        )));
    }
    Ok(ctx.min_val(x).at_least(u - shift))
}

/// `det` of a matrix reduced modulo `p^K` is a unit iff the matrix is invertible mod `p`.
pub fn is_unimodular_mod_p(m: &Matrix, ctx: &PadicContext) -> Result<bool> {
    let d = m.det()?;
    Ok(!d.is_zero() && ctx.val(&d) == Valuation::Finite(0))
}

/// True iff `S A T ≡ diag(p^{e_i}) (mod p^K)`.
pub fn reconstructs(a: &Matrix, snf: &SmithDecomposition, ctx: &PadicContext) -> Result<bool> {
    let lhs = snf.s.mul(a)?.mul(&snf.t)?;
    let diff_ok = (0..a.rows()).all(|r| {
        (0..a.cols()).all(|c| {
            let target = if r == c { ctx.pow(snf.e[r]) } else { BigInt::zero() };
            ctx.val(&(&lhs[(r, c)] - target)).at_least(snf.k)
        })
    });
    Ok(diff_ok)
}

#[cfg(test)]
fn unit_vector(n: usize, i: usize) -> Vec<BigInt> {
    (0..n)
        .map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn m(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn bigs(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    #[test]
    fn smith_examples() {
        let c2 = PadicContext::new(2).unwrap();
        assert_eq!(smith_p(&Matrix::identity(3), 10, &c2).unwrap().e, vec![0, 0, 0]);
        let d = m(&[vec![2, 0], vec![0, 4]]);
        assert_eq!(smith_p(&d, 10, &c2).unwrap().e, vec![1, 2]);
        let a = m(&[vec![14, 9, 1], vec![0, 7, 1], vec![0, 2, 1]]);
        let snf = smith_p(&a, 10, &c2).unwrap();
        assert_eq!(snf.e, vec![0, 0, 1]);
        assert!(reconstructs(&a, &snf, &c2).unwrap());
    }

    #[test]
    fn determinant_valuation_matches_exact_det() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for i in 0..300 {
            let ctx = PadicContext::new([2u64, 3, 5][i % 3]).unwrap();
            let n = rng.gen_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-12i64..=12)).collect())
                .collect();
            let a = m(&rows);
            let v = ctx.val(&a.det().unwrap());
            for t in 0..6 {
                assert_eq!(
                    determinant_valuation_is(&a, t, &ctx).unwrap(),
                    v == Valuation::Finite(t),
                    "{rows:?} t={t}"
                );
            }
        }
    }

    #[test]
    fn smith_errors() {
        let c2 = PadicContext::new(2).unwrap();
        let sing = m(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(smith_p(&sing, 10, &c2), Err(Error::SingularMatrix));
        let d = m(&[vec![2, 0], vec![0, 4]]);
        assert_eq!(smith_p(&d, 3, &c2), Err(Error::PrecisionTooLow { working: 3 }));
        assert_eq!(smith_p(&d, 2, &c2), Err(Error::PrecisionTooLow { working: 2 }));
        assert!(smith_p(&d, 4, &c2).is_ok());
    }

    #[test]
    fn solve_examples() {
        let c2 = PadicContext::new(2).unwrap();
        let y = bigs(&[5, -7, 11]);
        let x = solve_row(&Matrix::identity(3), &y, &c2, 0, 20).unwrap();
        let modulus = c2.pow(20);
        let y_red: Vec<BigInt> = y.iter().map(|v| reduce_canonical(v, &modulus)).collect();
        let x_red: Vec<BigInt> = x.iter().map(|v| reduce_canonical(v, &modulus)).collect();
        assert_eq!(x_red, y_red);

        let d = m(&[vec![1, 0], vec![0, 2]]);
        let x = solve_row(&d, &bigs(&[0, 2]), &c2, 1, 5).unwrap();
        assert_eq!(x, bigs(&[0, 1]));

        let a = m(&[vec![14, 9, 1], vec![0, 7, 1], vec![0, 2, 1]]);
        let x = solve_row(&a, &bigs(&[2, -4, -2]), &c2, 1, 2).unwrap();
        let four = BigInt::from(4);
        let x4: Vec<BigInt> = x.iter().map(|v| reduce_canonical(v, &four)).collect();
        assert_eq!(x4, bigs(&[3, 3, 0]));

        assert!(matches!(
            solve_row(&a, &bigs(&[1, 0, 0]), &c2, 1, 2),
            Err(Error::InsufficientValuation { index: 0, .. })
        ));
    }

    #[test]
    fn shift_bound_examples() {
        let c2 = PadicContext::new(2).unwrap();
        let d = m(&[vec![1, 0], vec![0, 2]]);
        assert!(valuation_shift_bound(&d, &bigs(&[0, 0]), 5, None, &c2).unwrap());
        assert!(valuation_shift_bound(&d, &bigs(&[0, 2]), 2, None, &c2).unwrap());
    }

    fn random_nonsingular(rng: &mut impl Rng, prime: u64) -> Matrix {
        loop {
            let n = rng.gen_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let scale = (prime as i64).pow(rng.gen_range(0..3));
                            scale * rng.gen_range(-20..=20)
                        })
                        .collect()
                })
                .collect();
            let a = m(&rows);
            if !a.det().unwrap().is_zero() {
                return a;
            }
        }
    }

    #[test]
    fn decompositions_reconstruct_under_every_pivot_rule() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for i in 0..150 {
            let prime = [2u64, 3, 5][i % 3];
            let ctx = PadicContext::new(prime).unwrap();
            let a = random_nonsingular(&mut rng, prime);
            let e = ctx.val(&a.det().unwrap()).finite().unwrap();
            for rule in PivotRule::ALL {
                let snf = smith_p_with(&a, e + 3, &ctx, rule).unwrap();
                assert!(snf.e.windows(2).all(|w| w[0] <= w[1]));
                assert_eq!(snf.total(), e);
                assert!(reconstructs(&a, &snf, &ctx).unwrap());
                assert!(is_unimodular_mod_p(&snf.s, &ctx).unwrap());
                assert!(is_unimodular_mod_p(&snf.t, &ctx).unwrap());
            }
        }
    }

    #[test]
    fn largest_divisor_respects_column_exponents() {
        // p^{d_i} | column i with d non-increasing forces e_k <= e - (d_2 + ... + d_k)
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        let mut checked = 0;
        while checked < 100 {
            let prime = [2u64, 3][checked % 2];
            let ctx = PadicContext::new(prime).unwrap();
            let n = rng.gen_range(1..=5);
            let mut d: Vec<u64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            d.sort_unstable_by(|a, b| b.cmp(a));
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|c| (prime as i64).pow(d[c] as u32) * rng.gen_range(-9..=9))
                        .collect()
                })
                .collect();
            let a = m(&rows);
            let det = a.det().unwrap();
            if det.is_zero() {
                continue;
            }
            let e = ctx.val(&det).finite().unwrap();
            let snf = smith_p(&a, e + 2, &ctx).unwrap();
            let tail: u64 = d.iter().skip(1).sum();
            assert!(snf.max_exponent() <= e - tail);
            checked += 1;
        }
    }

    #[test]
    fn solutions_satisfy_the_system() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        for i in 0..150 {
            let prime = [2u64, 3, 5][i % 3];
            let ctx = PadicContext::new(prime).unwrap();
            let a = random_nonsingular(&mut rng, prime);
            let e = ctx.val(&a.det().unwrap()).finite().unwrap();
            let pe = ctx.pow(e);
            let y: Vec<BigInt> = (0..a.rows())
                .map(|_| &pe * BigInt::from(rng.gen_range(-1000i64..=1000)))
                .collect();
            let precision = rng.gen_range(1..=12);
            let x = solve_row(&a, &y, &ctx, e, precision).unwrap();
            let xa = a.left_mul(&x).unwrap();
            for (l, r) in xa.iter().zip(&y) {
                assert!(ctx.val(&(l - r)).at_least(precision));
            }
            // and the shift bound: x A ∈ p^u ⇒ x ∈ p^{u-e}
            let u = e + rng.gen_range(0..4);
            let pu = ctx.pow(u);
            let y2: Vec<BigInt> = (0..a.rows())
                .map(|_| &pu * BigInt::from(rng.gen_range(-50i64..=50)))
                .collect();
            let x2 = solve_row(&a, &y2, &ctx, e, u + 5).unwrap();
            let exact_y2 = a.left_mul(&x2).unwrap();
            if ctx.min_val(&exact_y2).at_least(u) {
                assert!(valuation_shift_bound(&a, &x2, u, None, &ctx).unwrap());
            }
        }
    }

    #[test]
    fn deterministic() {
        let ctx = PadicContext::new(3).unwrap();
        let a = m(&[vec![9, 3, 1], vec![3, 27, 6], vec![1, 0, 2]]);
        let one = smith_p(&a, 12, &ctx).unwrap();
        let two = smith_p(&a, 12, &ctx).unwrap();
        assert_eq!(one, two);
        assert_eq!(unit_vector(3, 1), bigs(&[0, 1, 0]));
    }
}
