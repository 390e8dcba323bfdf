//! Seeded property corpora for the algebraic identities and the lifting
//! contracts.
//!
//! Case `i` of a corpus draws from its own ChaCha8 stream, so results are
//! identical whether cases run sequentially or fan out over a thread pool,
//! and they are always reported in case order.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lift::{
    check_uniqueness_bound, lift_step_with, new_system, FactorSystem, LiftOptions, Mode,
    ModeRequest,
};
use crate::linalg::Matrix;
use crate::locsmith::{is_unimodular_mod_p, reconstructs, smith_p_with, solve_row_with, PivotRule};
use crate::poly::{discriminant, product, sylvester_resultant, MonicPoly};
use crate::resmat::{build_matrix, column_exponents, resultant};
use crate::ring::{PadicContext, Valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled and falls
    /// back to sequential execution otherwise.
    #[default]
    Parallel,
}

impl Execution {
    pub fn map<T, F>(self, cases: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..cases).map(f).collect(),
            Execution::Parallel => parallel_map(cases, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(cases: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..cases).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(cases: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..cases).map(f).collect()
}

/// Independent stream for case `index` of a corpus seeded with `seed`.
pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// What happened to one corpus case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CaseResult {
    Pass,
    /// The instance did not meet the property's hypothesis.
    Skipped,
    Fail(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusOutcome {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub skipped: usize,
    /// `(case index, reason)`, in case order.
    pub failures: Vec<(usize, String)>,
}

impl CorpusOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn collect(name: &str, results: Vec<CaseResult>) -> Self {
        let mut out = CorpusOutcome {
            name: name.to_string(),
            cases: results.len(),
            passed: 0,
            skipped: 0,
            failures: Vec::new(),
        };
        for (i, r) in results.into_iter().enumerate() {
            match r {
                CaseResult::Pass => out.passed += 1,
                CaseResult::Skipped => out.skipped += 1,
                CaseResult::Fail(why) => out.failures.push((i, why)),
            }
        }
        out
    }

    pub fn summary(&self) -> String {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{status} {}: {} cases, {} passed, {} skipped",
            self.name, self.cases, self.passed, self.skipped
        );
        if let Some((i, why)) = self.failures.first() {
            line.push_str(&format!(", first failure at case {i}: {why}"));
        }
        line
    }
}

fn run(name: &str, cases: usize, exec: Execution, f: impl Fn(usize) -> CaseResult + Sync + Send) -> CorpusOutcome {
    CorpusOutcome::collect(name, exec.map(cases, f))
}

fn fail_on<E: std::fmt::Display>(e: E) -> CaseResult {
    CaseResult::Fail(e.to_string())
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return CaseResult::Fail(format!($($fmt)+));
        }
    };
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return fail_on(err),
        }
    };
}

const PRIMES: [u64; 3] = [2, 3, 5];

fn prime_ctx(index: usize) -> PadicContext {
    PadicContext::new(PRIMES[index % PRIMES.len()]).expect("small primes are prime")
}

pub fn random_monic(rng: &mut impl Rng, degree: usize, bound: i64) -> MonicPoly {
    MonicPoly::from_lower((0..degree).map(|_| rng.gen_range(-bound..=bound)))
}

/// `n <= 4` factors of degree `<= 4` with coefficients in `[-100, 100]`.
pub fn random_tuple(rng: &mut impl Rng) -> Vec<MonicPoly> {
    let n = rng.gen_range(1..=4);
    (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=4);
            random_monic(rng, d, 100)
        })
        .collect()
}

/// `g + p^r h` for a random `h` of lower degree.
pub fn perturb(g: &MonicPoly, ctx: &PadicContext, r: u64, rng: &mut impl Rng, bound: i64) -> MonicPoly {
    let pr = ctx.pow(r);
    MonicPoly::new(
        g.lower_coeffs()
            .iter()
            .map(|c| c + &pr * BigInt::from(rng.gen_range(-bound..=bound)))
            .collect(),
    )
}

fn pairwise_product(gs: &[MonicPoly]) -> Result<BigInt> {
    let mut acc = BigInt::one();
    for k in 0..gs.len() {
        for l in k + 1..gs.len() {
            acc *= sylvester_resultant(&gs[k], &gs[l])?;
        }
    }
    Ok(acc)
}

fn disc_identity_holds(gs: &[MonicPoly]) -> Result<bool> {
    let res = resultant(gs)?;
    let mut rhs = &res * &res;
    for g in gs {
        rhs *= discriminant(g)?;
    }
    Ok(discriminant(&product(gs))? == rhs)
}

/// `Res(g_1..g_n)` equals the product of the pairwise Sylvester resultants.
pub fn resultant_product_corpus(seed: u64, cases: usize, exec: Execution) -> CorpusOutcome {
    run("resultant-product", cases, exec, |i| {
        let gs = random_tuple(&mut case_rng(seed, i));
        let lhs = attempt!(resultant(&gs));
        let rhs = attempt!(pairwise_product(&gs));
        ensure!(lhs == rhs, "Res = {lhs}, pairwise product = {rhs}");
        CaseResult::Pass
    })
}

/// `Δ(∏ g_k) = ∏ Δ(g_k) · Res²`.
pub fn discriminant_product_corpus(seed: u64, cases: usize, exec: Execution) -> CorpusOutcome {
    run("discriminant-product", cases, exec, |i| {
        let gs = random_tuple(&mut case_rng(seed, i));
        ensure!(attempt!(disc_identity_holds(&gs)), "identity fails for {gs:?}");
        CaseResult::Pass
    })
}

/// Perturbing factors (or `f`) by multiples of `p^r` moves the resultant
/// (or the discriminant) by a multiple of `p^r`.
pub fn perturbation_corpus(seed: u64, cases: usize, exec: Execution) -> CorpusOutcome {
    run("perturbation-congruences", cases, exec, |i| {
        let mut rng = case_rng(seed, i);
        let ctx = prime_ctx(i);
        let r = rng.gen_range(0..=8);
        let gs = random_tuple(&mut rng);
        let moved: Vec<MonicPoly> = gs.iter().map(|g| perturb(g, &ctx, r, &mut rng, 50)).collect();
        let dr = attempt!(resultant(&gs)) - attempt!(resultant(&moved));
        ensure!(ctx.val(&dr).at_least(r), "resultants differ at valuation {}", ctx.val(&dr));
        let f = product(&gs);
        let f2 = perturb(&f, &ctx, r, &mut rng, 50);
        let dd = attempt!(discriminant(&f)) - attempt!(discriminant(&f2));
        ensure!(ctx.val(&dd).at_least(r), "discriminants differ at valuation {}", ctx.val(&dd));
        CaseResult::Pass
    })
}

/// `2 t <= val Δ(f)` whenever `f ≡ ∏ g_k (mod p Δ(f))` and `Δ(f) != 0`.
pub fn discriminant_bound_corpus(seed: u64, cases: usize, exec: Execution) -> CorpusOutcome {
    run("discriminant-bound", cases, exec, |i| {
        let mut rng = case_rng(seed, i);
        let ctx = prime_ctx(i);
        let gs = random_tuple(&mut rng);
        let g = product(&gs);
        let dg = attempt!(discriminant(&g));
        let Valuation::Finite(v) = ctx.val(&dg) else {
            return CaseResult::Skipped;
        };
        let f = perturb(&g, &ctx, v + 1 + rng.gen_range(0..3), &mut rng, 20);
        let df = attempt!(discriminant(&f));
        let vf = match ctx.val(&df) {
            Valuation::Finite(vf) => vf,
            Valuation::Infinite => return CaseResult::Skipped,
        };
        if !f.congruent_mod(&g, vf + 1, &ctx) {
            return CaseResult::Skipped;
        }
        let t = ctx.val(&attempt!(resultant(&gs)));
        ensure!(
            matches!(t, Valuation::Finite(t) if 2 * t <= vf),
            "t = {t}, val Δ(f) = {vf}"
        );
        CaseResult::Pass
    })
}

fn random_nonsingular(rng: &mut impl Rng, prime: u64, max_dim: usize) -> Matrix {
    loop {
        let n = rng.gen_range(1..=max_dim);
        let mut a = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let scale = BigInt::from(prime).pow(rng.gen_range(0..3u32));
                a[(r, c)] = scale * BigInt::from(rng.gen_range(-30i64..=30));
            }
        }
        if !a.det().map(|d| d.is_zero()).unwrap_or(true) {
            return a;
        }
    }
}

/// Smith decompositions reconstruct, have unit transforms and the right
/// exponent sum; row solves satisfy `x A ≡ y`.
pub fn smith_corpus(seed: u64, cases: usize, exec: Execution) -> CorpusOutcome {
    run("smith-contract", cases, exec, |i| {
        let mut rng = case_rng(seed, i);
        let ctx = prime_ctx(i);
        let a = random_nonsingular(&mut rng, ctx.p(), 6);
        smith_case(&a, &ctx, &mut rng, PivotRule::ALL[i % 3])
    })
}

fn smith_case(a: &Matrix, ctx: &PadicContext, rng: &mut impl Rng, rule: PivotRule) -> CaseResult {
    let det = attempt!(a.det());
    let Valuation::Finite(e) = ctx.val(&det) else {
        return CaseResult::Skipped;
    };
    let k = e + 1 + rng.gen_range(0..8);
    let snf = attempt!(smith_p_with(a, k, ctx, rule));
    ensure!(snf.e.windows(2).all(|w| w[0] <= w[1]), "exponents not sorted: {:?}", snf.e);
    ensure!(snf.total() == e, "sum of exponents {} != val det {e}", snf.total());
    ensure!(attempt!(reconstructs(a, &snf, ctx)), "S A T is not diagonal mod p^{k}");
    ensure!(attempt!(is_unimodular_mod_p(&snf.s, ctx)), "S is not invertible");
    ensure!(attempt!(is_unimodular_mod_p(&snf.t, ctx)), "T is not invertible");
    let pe = ctx.pow(e);
    let y: Vec<BigInt> = (0..a.rows())
        .map(|_| &pe * BigInt::from(rng.gen_range(-1000i64..=1000)))
        .collect();
    let precision = rng.gen_range(1..=16);
    let x = attempt!(solve_row_with(a, &y, ctx, e, precision, rule));
    let xa = attempt!(a.left_mul(&x));
    ensure!(
        xa.iter().zip(&y).all(|(l, r)| ctx.val(&(l - r)).at_least(precision)),
        "x A differs from y modulo p^{precision}"
    );
    CaseResult::Pass
}

/// A random valid system together with the exact factorization it approximates.
#[derive(Debug, Clone)]
pub struct Instance {
    pub system: FactorSystem,
    pub truth: Vec<MonicPoly>,
}

/// Draws `f = ∏ g_k` over `Z` and perturbs each `g_k` by `p^s` noise, with
/// `s` just above the bound the mode requires. Special instances use factors
/// congruent to `X^{m_k}` modulo `p`.
pub fn random_instance(rng: &mut impl Rng, ctx: &PadicContext, special: bool, max_n: usize) -> Instance {
    let p = ctx.p() as i64;
    loop {
        let n = rng.gen_range(1..=max_n);
        let mut degrees: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        if special {
            degrees.sort_unstable();
        }
        let truth: Vec<MonicPoly> = degrees
            .iter()
            .map(|&d| {
                if special {
                    MonicPoly::from_lower((0..d).map(|_| p * rng.gen_range(-12i64..=12)))
                } else {
                    random_monic(rng, d, 30)
                }
            })
            .collect();
        let f = product(&truth);
        let Ok(res) = build_matrix(&truth).and_then(|a| a.determinant()) else {
            continue;
        };
        let Valuation::Finite(t) = ctx.val(&res) else {
            continue;
        };
        if t > 12 {
            continue;
        }
        let mode = if special { ModeRequest::Special } else { ModeRequest::General };
        // profile at an s that is certainly large enough, to learn t'
        let Ok(probe) = new_system(ctx, f.clone(), truth.clone(), 2 * t + 1, mode) else {
            continue;
        };
        let s = probe.required_precision() + rng.gen_range(0..=3);
        let start: Vec<MonicPoly> = truth.iter().map(|g| perturb(g, ctx, s, rng, 5)).collect();
        match new_system(ctx, f, start, s, mode) {
            Ok(system) if !system.is_exact() => return Instance { system, truth },
            _ => continue,
        }
    }
}

/// Coefficient bound for a product of factors `≡ X^{χ_k} mod p` with
/// ascending degrees: `val(b_i) >= n - max{ j : χ_1 + ... + χ_j <= i }`.
pub fn coefficient_bounds_hold(factors: &[MonicPoly], ctx: &PadicContext) -> bool {
    let n = factors.len();
    let prod = product(factors).full_coeffs();
    prod.iter().enumerate().all(|(i, b)| {
        let mut partial = 0;
        let mut jmax = 0;
        for (j, g) in factors.iter().enumerate() {
            partial += g.degree();
            if partial <= i {
                jmax = j + 1;
            }
        }
        ctx.val(b).at_least((n - jmax) as u64)
    })
}

fn step_contract(sys: &FactorSystem, truth: &[MonicPoly], steps: usize) -> CaseResult {
    let ctx = sys.ctx();
    let t = sys.t();
    let t_eff = sys.t_eff();
    let opts = LiftOptions::default();
    let mut cur = sys.clone();
    for _ in 0..steps {
        if cur.is_exact() {
            break;
        }
        if cur.mode() == Mode::Special {
            let p = cur.profile();
            ensure!(p.e_prime.is_some() && p.e_prime == p.t_prime, "e' missing or != t'");
            ensure!(coefficient_bounds_hold(cur.factors(), ctx), "coefficient bound fails");
            let d = column_exponents(&cur.factors().iter().map(MonicPoly::degree).collect::<Vec<_>>());
            let a = attempt!(build_matrix(cur.factors()));
            for (c, &dc) in d.iter().enumerate() {
                ensure!(
                    a.matrix().column(c).all(|v| ctx.val(v).at_least(dc)),
                    "column {c} not divisible by p^{dc}"
                );
            }
        }
        let s = cur.s();
        let (next, step) = attempt!(lift_step_with(&cur, &opts));
        let moved = s - t_eff;
        for (k, (g, h)) in cur.factors().iter().zip(&step.new_factors).enumerate() {
            ensure!(g.degree() == h.degree(), "factor {k} changed degree");
            ensure!(g.congruent_mod(h, moved, ctx), "factor {k} moved below p^{moved}");
        }
        ensure!(
            cur.f().congruent_mod(&product(&step.new_factors), 2 * moved, ctx),
            "product not congruent to f modulo p^{}",
            2 * moved
        );
        ensure!(
            next.factors().iter().zip(cur.factors()).all(|(h, g)| g.congruent_mod(h, moved, ctx)),
            "reduced factors moved below p^{moved}"
        );
        let vres = ctx.val(&attempt!(resultant(&step.new_factors)));
        ensure!(vres == Valuation::Finite(t), "val Res changed to {vres}");
        ensure!(step.record.defect <= t_eff, "defect {} > {t_eff}", step.record.defect);
        ensure!(next.s() >= 2 * moved, "precision {} < {}", next.s(), 2 * moved);
        cur = next;
    }
    // the lift converges to the unique factorization near the start, which the
    // exact integer factors also are
    for (k, (g, h)) in cur.factors().iter().zip(truth).enumerate() {
        if cur.is_exact() {
            ensure!(g == h, "factor {k} is exact but differs from the integer factor");
        } else {
            let reach = cur.s() - t_eff;
            ensure!(
                g.congruent_mod(h, reach, ctx),
                "factor {k} differs from the integer factor below p^{reach}"
            );
        }
    }
    CaseResult::Pass
}

/// Lifting-step contract on random general (even cases) and special (odd
/// cases) instances, three steps each.
pub fn lift_contract_corpus(seed: u64, cases: usize, exec: Execution) -> CorpusOutcome {
    run("lift-step-contract", cases, exec, |i| {
        let mut rng = case_rng(seed, i);
        let ctx = prime_ctx(i / 2);
        let inst = random_instance(&mut rng, &ctx, i % 2 == 1, 3);
        step_contract(&inst.system, &inst.truth, 3)
    })
}

/// Two admissible lifts from different pivot rules and right-hand sides
/// that agree only modulo `p^{s-t}` still agree modulo `p^{2s-3t}`.
pub fn uniqueness_corpus(seed: u64, cases: usize, exec: Execution) -> CorpusOutcome {
    run("uniqueness-bound", cases, exec, |i| {
        let mut rng = case_rng(seed, i);
        let ctx = prime_ctx(i / 2);
        let inst = random_instance(&mut rng, &ctx, i % 2 == 1, 3);
        uniqueness_case(&inst.system, &mut rng, PivotRule::ALL[1 + i % 2])
    })
}

pub fn uniqueness_case(sys: &FactorSystem, rng: &mut impl Rng, other: PivotRule) -> CaseResult {
    let ctx = sys.ctx();
    let t_eff = sys.t_eff();
    let moved = sys.s() - t_eff;
    let beta = attempt!(sys.scaled_residual());
    let a = attempt!(build_matrix(sys.factors()));
    let pm = ctx.pow(moved);
    let beta2: Vec<BigInt> = beta
        .iter()
        .map(|b| b + &pm * BigInt::from(rng.gen_range(-9i64..=9)))
        .collect();
    let u1 = attempt!(solve_row_with(a.matrix(), &beta, ctx, t_eff, moved, PivotRule::RowMajor));
    let u2 = attempt!(solve_row_with(a.matrix(), &beta2, ctx, t_eff, moved, other));
    let lift_a = attempt!(sys.apply_correction(&u1));
    let lift_b = attempt!(sys.apply_correction(&u2));
    match check_uniqueness_bound(sys, &lift_a, &lift_b, 0) {
        Ok(true) => CaseResult::Pass,
        Ok(false) => CaseResult::Fail(format!(
            "lifts differ modulo p^{}",
            2 * sys.s() - 3 * t_eff
        )),
        Err(e) => fail_on(e),
    }
}

/// Identity suites on one user-supplied factor tuple, with random
/// perturbations drawn from `seed`.
pub fn tuple_suites(
    gs: &[MonicPoly],
    ctx: &PadicContext,
    seed: u64,
    cases: usize,
    exec: Execution,
) -> Result<Vec<CorpusOutcome>> {
    if gs.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    let res = resultant(gs)?;
    let mut out = Vec::new();

    let pairwise = pairwise_product(gs)?;
    out.push(CorpusOutcome::collect(
        "resultant-product",
        vec![if pairwise == res {
            CaseResult::Pass
        } else {
            CaseResult::Fail(format!("Res = {res}, pairwise product = {pairwise}"))
        }],
    ));
    out.push(CorpusOutcome::collect(
        "discriminant-product",
        vec![if disc_identity_holds(gs)? {
            CaseResult::Pass
        } else {
            CaseResult::Fail("identity fails".into())
        }],
    ));
    let f = product(gs);
    let df = discriminant(&f)?;
    let bound = match (ctx.val(&res), ctx.val(&df)) {
        (_, Valuation::Infinite) => CaseResult::Skipped,
        (Valuation::Finite(t), Valuation::Finite(v)) if 2 * t <= v => CaseResult::Pass,
        (t, v) => CaseResult::Fail(format!("t = {t}, val Δ = {v}")),
    };
    out.push(CorpusOutcome::collect("discriminant-bound", vec![bound]));

    out.push(run("resultant-perturbation", cases, exec, |i| {
        let mut rng = case_rng(seed, i);
        let r = rng.gen_range(0..=8);
        let moved: Vec<MonicPoly> = gs.iter().map(|g| perturb(g, ctx, r, &mut rng, 50)).collect();
        let d = &res - attempt!(resultant(&moved));
        ensure!(ctx.val(&d).at_least(r), "resultants differ at valuation {}", ctx.val(&d));
        CaseResult::Pass
    }));
    out.push(run("discriminant-perturbation", cases, exec, |i| {
        let mut rng = case_rng(seed ^ 0x9e37_79b9, i);
        let r = rng.gen_range(0..=8);
        let f2 = perturb(&f, ctx, r, &mut rng, 50);
        let d = &df - attempt!(discriminant(&f2));
        ensure!(ctx.val(&d).at_least(r), "discriminants differ at valuation {}", ctx.val(&d));
        CaseResult::Pass
    }));
    let a = build_matrix(gs)?.into_matrix();
    out.push(run("smith-contract", PivotRule::ALL.len(), exec, |i| {
        if res.is_zero() {
            return CaseResult::Skipped;
        }
        smith_case(&a, ctx, &mut case_rng(seed, i), PivotRule::ALL[i])
    }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_of_execution() {
        let seq = resultant_product_corpus(1, 40, Execution::Sequential);
        let par = resultant_product_corpus(1, 40, Execution::Parallel);
        assert_eq!(seq, par);
        assert!(seq.ok());
        let a: u64 = case_rng(5, 3).gen();
        let b: u64 = case_rng(5, 3).gen();
        let c: u64 = case_rng(5, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn small_corpora_pass() {
        for outcome in [
            discriminant_product_corpus(2, 30, Execution::Parallel),
            perturbation_corpus(3, 30, Execution::Parallel),
            discriminant_bound_corpus(4, 30, Execution::Parallel),
            smith_corpus(5, 30, Execution::Parallel),
            lift_contract_corpus(6, 20, Execution::Parallel),
            uniqueness_corpus(7, 20, Execution::Parallel),
        ] {
            assert!(outcome.ok(), "{}", outcome.summary());
        }
    }

    #[test]
    fn tuple_suites_on_example() {
        let ctx = PadicContext::new(2).unwrap();
        let gs = [
            MonicPoly::from_lower([0]),
            MonicPoly::from_lower([2]),
            MonicPoly::from_lower([7]),
        ];
        let outcomes = tuple_suites(&gs, &ctx, 0, 20, Execution::Sequential).unwrap();
        assert!(outcomes.iter().all(CorpusOutcome::ok));
        assert_eq!(outcomes.len(), 6);
    }
}
