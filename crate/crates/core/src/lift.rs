//! Hensel lifting of an approximate factorization `f ≡ g_1 ⋯ g_n (mod p^s)`.
//!
//! One step solves `U A(g_1..g_n) = β` for the scaled residual
//! `b = p^{t-s} (f - ∏ g_k)` and moves each factor by `p^{s-t} u_k`.
//! In special form (`f ≡ X^M mod p`, degrees ascending) the smaller exponent
//! `t'` takes the place of `t`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::locsmith::{determinant_valuation_is, smith_p_with, solve_with_decomposition, PivotRule};
use crate::poly::{dense, product, MonicPoly};
use crate::resmat::{build_matrix, profile_from_resultant, ResultantProfile};
use crate::ring::{PadicContext, Valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    General,
    Special,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::General => "general",
            Mode::Special => "special",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeRequest {
    #[default]
    Auto,
    General,
    Special,
}

impl std::str::FromStr for ModeRequest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(ModeRequest::Auto),
            "general" => Ok(ModeRequest::General),
            "special" => Ok(ModeRequest::Special),
            other => Err(Error::input(
                "mode",
                format!("expected auto, general or special, got {other:?}"),
            )),
        }
    }
}

/// How a step computes its correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftOptions {
    pub pivot: PivotRule,
    /// Extra `p`-adic digits carried in the correction beyond `s + t`.
    /// The correction only needs `s - t` digits for the step to be valid;
    /// carrying `s + t` makes it agree with the exact `Z_p` solution on
    /// every digit that can influence the next precision.
    pub guard: u64,
    /// Representatives used when truncating factors to the new precision.
    pub reduction: Reduction,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            pivot: PivotRule::RowMajor,
            guard: 2,
            reduction: Reduction::Balanced,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    /// Coefficients in `(-p^s/2, p^s/2]`.
    Balanced,
    /// Coefficients in `[0, p^s)`.
    Canonical,
    /// Keep the unreduced coefficients.
    None,
}

impl Reduction {
    fn apply(self, g: &MonicPoly, modulus: &BigInt) -> MonicPoly {
        match self {
            Reduction::Balanced => g.reduce_balanced(modulus),
            Reduction::Canonical => g.reduce_canonical(modulus),
            Reduction::None => g.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSystem {
    ctx: PadicContext,
    f: MonicPoly,
    factors: Vec<MonicPoly>,
    s: u64,
    mode: Mode,
    profile: ResultantProfile,
    exact: bool,
}

impl FactorSystem {
    pub fn ctx(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn f(&self) -> &MonicPoly {
        &self.f
    }

    pub fn factors(&self) -> &[MonicPoly] {
        &self.factors
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Profile of the factors the system was created from. Lifting leaves
    /// `t`, `t'` and the column exponents unchanged, so it stays valid.
    pub fn profile(&self) -> &ResultantProfile {
        &self.profile
    }

    pub fn t(&self) -> u64 {
        self.profile.t
    }

    pub fn t_prime(&self) -> Option<u64> {
        self.profile.t_prime
    }

    /// `t` in general mode, `t'` in special mode.
    pub fn t_eff(&self) -> u64 {
        self.profile.effective(self.mode == Mode::Special)
    }

    /// True once `f = ∏ g_k` holds exactly.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Smallest `s` the selected mode accepts.
    pub fn required_precision(&self) -> u64 {
        self.profile.t + self.t_eff() + 1
    }

    /// `f - ∏ g_k` as a dense vector.
    pub fn residual(&self) -> Vec<BigInt> {
        self.f.sub(&product(&self.factors))
    }

    pub fn residual_valuation(&self) -> Valuation {
        self.ctx.min_val(&self.residual())
    }

    /// `β = p^{t-s} (f - ∏ g_k)` in degrees `0..M-1` (`t'` in special mode).
    pub fn scaled_residual(&self) -> Result<Vec<BigInt>> {
        let residual = self.residual();
        let m = self.f.degree();
        if !residual[m].is_zero() {
            return Err(Error::InvariantViolated("residual has degree M".into()));
        }
        let step = self.s - self.t_eff();
        let scale = self.ctx.pow(step);
        residual[..m]
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(&scale);
                if r.is_zero() {
                    Ok(q)
                } else {
                    Err(Error::InvariantViolated(format!(
                        "residual not divisible by p^{step}"
                    )))
                }
            })
            .collect()
    }

    /// `g_k + p^{s-t} u_k`, with `u` the concatenated per-factor corrections.
    pub fn apply_correction(&self, u: &[BigInt]) -> Result<Vec<MonicPoly>> {
        if u.len() != self.f.degree() {
            return Err(Error::DimensionMismatch(format!(
                "{} correction coefficients for total degree {}",
                u.len(),
                self.f.degree()
            )));
        }
        let scale = self.ctx.pow(self.s - self.t_eff());
        let mut offset = 0;
        Ok(self
            .factors
            .iter()
            .map(|g| {
                let mk = g.degree();
                let lower = g
                    .lower_coeffs()
                    .iter()
                    .zip(&u[offset..offset + mk])
                    .map(|(c, uk)| c + &scale * uk)
                    .collect();
                offset += mk;
                MonicPoly::new(lower)
            })
            .collect())
    }
}

pub fn new_system(
    ctx: &PadicContext,
    f: MonicPoly,
    factors: Vec<MonicPoly>,
    s: u64,
    mode: ModeRequest,
) -> Result<FactorSystem> {
    if factors.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    if let Some(k) = factors.iter().position(|g| g.degree() == 0) {
        return Err(Error::DegreeZeroFactor(k));
    }
    let total: usize = factors.iter().map(MonicPoly::degree).sum();
    if total != f.degree() {
        return Err(Error::DegreeMismatch {
            expected: f.degree(),
            actual: total,
        });
    }
    ctx.check_exponent(s)?;
    let special_shape = f.is_x_power_mod_p(ctx);
    let mode = match mode {
        ModeRequest::Auto if special_shape => Mode::Special,
        ModeRequest::Auto | ModeRequest::General => Mode::General,
        ModeRequest::Special if special_shape => Mode::Special,
        ModeRequest::Special => {
            return Err(Error::NotSpecialForm(format!(
                "f is not congruent to X^{} modulo {}",
                f.degree(),
                ctx.p()
            )))
        }
    };
    let mut factors = factors;
    if mode == Mode::Special {
        // stable, so equal degrees keep the caller's order
        factors.sort_by_key(MonicPoly::degree);
    }
    let residual = f.sub(&product(&factors));
    let residual_val = ctx.min_val(&residual);
    if !residual_val.at_least(s) {
        return Err(Error::NotCongruent { s });
    }
    let res = build_matrix(&factors)?.determinant()?;
    let profile = profile_from_resultant(&factors, res, ctx, mode == Mode::Special)?;
    let system = FactorSystem {
        ctx: ctx.clone(),
        f,
        factors,
        s,
        mode,
        profile,
        exact: residual_val.is_infinite(),
    };
    let required = system.required_precision();
    if s < required {
        return Err(Error::PrecisionBoundViolated {
            mode,
            required,
            actual: s,
        });
    }
    Ok(system)
}

/// Everything one lifting step computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftStep {
    /// `p^{t-s} (f - ∏ g_k)` (with `t'` in special mode), degrees `0..M-1`.
    pub b: Vec<BigInt>,
    /// The right-hand side actually solved for; equal to `b` as a vector.
    pub beta: Vec<BigInt>,
    /// Concatenated correction coefficients, `m_k` per factor.
    pub u: Vec<BigInt>,
    /// `g_k + p^{s-t} u_k`, before any reduction.
    pub new_factors: Vec<MonicPoly>,
    pub record: StepRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    /// Precision at the start of the step.
    pub s: u64,
    /// `s'`: minimal valuation of the coefficient changes.
    pub s_achieved: u64,
    /// `s - s'`.
    pub defect: u64,
    /// Valuation of `f - ∏ g̃_k`.
    pub residual_valuation: Valuation,
    /// Precision the next step starts from.
    pub next_s: u64,
    /// Factors after the step, canonical modulo `p^{next_s}`.
    #[serde(serialize_with = "crate::problem::ser_polys")]
    pub factors: Vec<MonicPoly>,
}

/// One step with default options.
pub fn lift_step(sys: &FactorSystem) -> Result<(FactorSystem, LiftStep)> {
    lift_step_with(sys, &LiftOptions::default())
}

pub fn lift_step_with(sys: &FactorSystem, opts: &LiftOptions) -> Result<(FactorSystem, LiftStep)> {
    if sys.exact {
        return Err(Error::ExactFactorizationReached);
    }
    let ctx = &sys.ctx;
    let s = sys.s;
    let t_eff = sys.t_eff();
    let step_size = s - t_eff;
    if sys.residual().iter().all(Zero::is_zero) {
        return Ok(exact_step(sys));
    }
    let t = sys.profile.t;
    let b = sys.scaled_residual()?;
    let a = build_matrix(&sys.factors)?;
    // val det A = t is known, so the working exponent is fixed up front
    let precision = s + t_eff + opts.guard;
    let snf = smith_p_with(a.matrix(), precision + t + 1, ctx, opts.pivot)?;
    if snf.total() != t {
        return Err(Error::InvariantViolated(format!(
            "elementary divisor exponents sum to {}, expected {t}",
            snf.total()
        )));
    }
    if snf.max_exponent() > t_eff {
        return Err(Error::InvariantViolated(format!(
            "largest elementary divisor exponent {} exceeds {t_eff}",
            snf.max_exponent()
        )));
    }
    let u = solve_with_decomposition(&snf, &b, ctx)?;
    let new_factors = sys.apply_correction(&u)?;

    let s_achieved = sys
        .factors
        .iter()
        .zip(&new_factors)
        .map(|(old, new)| dense::diff_valuation(&old.full_coeffs(), &new.full_coeffs(), ctx))
        .min()
        .unwrap_or(Valuation::Infinite);
    let new_residual = sys.f.sub(&product(&new_factors));
    let residual_valuation = ctx.min_val(&new_residual);
    let exact = residual_valuation.is_infinite();
    let floor = 2 * step_size;
    let next_s = match residual_valuation {
        Valuation::Finite(v) => v,
        Valuation::Infinite => floor,
    };
    let s_achieved = match s_achieved {
        Valuation::Finite(v) => v,
        Valuation::Infinite => next_s,
    };
    if next_s < floor {
        return Err(Error::InvariantViolated(format!(
            "step from s = {s} reached only p^{next_s}, below the guaranteed p^{floor}"
        )));
    }
    if s_achieved < step_size {
        return Err(Error::InvariantViolated(format!(
            "factors moved at p^{s_achieved}, below p^{step_size}"
        )));
    }
    ctx.check_exponent(next_s)?;

    let modulus = ctx.pow(next_s);
    let factors = if exact {
        new_factors.clone()
    } else {
        new_factors
            .iter()
            .map(|g| opts.reduction.apply(g, &modulus))
            .collect()
    };
    // reduction can land exactly on a true factorization
    let exact = exact || sys.f == product(&factors);
    if !determinant_valuation_is(build_matrix(&factors)?.matrix(), t, ctx)? {
        return Err(Error::InvariantViolated(format!(
            "resultant valuation of the lifted factors differs from {t}"
        )));
    }
    let record = StepRecord {
        step: 0,
        s,
        s_achieved,
        defect: s.saturating_sub(s_achieved),
        residual_valuation,
        next_s,
        factors: factors.iter().map(|g| g.reduce_canonical(&modulus)).collect(),
    };
    let next = FactorSystem {
        ctx: ctx.clone(),
        f: sys.f.clone(),
        factors,
        s: next_s,
        mode: sys.mode,
        profile: sys.profile.clone(),
        exact,
    };
    Ok((
        next,
        LiftStep {
            beta: b.clone(),
            b,
            u,
            new_factors,
            record,
        },
    ))
}

fn exact_step(sys: &FactorSystem) -> (FactorSystem, LiftStep) {
    let m = sys.f.degree();
    let zeros = vec![BigInt::zero(); m];
    let modulus = sys.ctx.pow(sys.s);
    let record = StepRecord {
        step: 0,
        s: sys.s,
        s_achieved: sys.s,
        defect: 0,
        residual_valuation: Valuation::Infinite,
        next_s: sys.s,
        factors: sys.factors.iter().map(|g| g.reduce_canonical(&modulus)).collect(),
    };
    let mut next = sys.clone();
    next.exact = true;
    (
        next,
        LiftStep {
            b: zeros.clone(),
            beta: zeros.clone(),
            u: zeros,
            new_factors: sys.factors.clone(),
            record,
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub p: u64,
    pub mode: Mode,
    pub t: u64,
    pub t_prime: Option<u64>,
    pub initial_s: u64,
    pub steps: Vec<StepRecord>,
    /// Precision of `f ≡ ∏ g_k` after the last step.
    pub final_s: u64,
    pub exact: bool,
}

/// Runs exactly `n` steps, or fewer if the factorization becomes exact.
pub fn lift_steps(sys: &FactorSystem, n: usize, opts: &LiftOptions) -> Result<(FactorSystem, LiftReport)> {
    let mut report = empty_report(sys);
    let mut cur = sys.clone();
    for i in 0..n {
        if cur.exact {
            break;
        }
        let (next, mut step) = lift_step_with(&cur, opts)?;
        step.record.step = i + 1;
        report.steps.push(step.record);
        cur = next;
    }
    report.final_s = cur.s;
    report.exact = cur.exact;
    Ok((cur, report))
}

/// Lifts until the factors are determined to `target` digits.
///
/// After a step from precision `s`, the factors agree with the true
/// `Z_p`-factors modulo `p^{s-t}` (`t'` in special mode), so iteration
/// continues until `s - t ≥ target`; at that point `f ≡ ∏ g_k (mod p^target)`
/// holds as well. A system already at `s ≥ target` is returned as is.
/// Returned factors are canonical modulo `p^target`.
pub fn lift_to_precision(
    sys: &FactorSystem,
    target: u64,
    max_steps: usize,
    opts: &LiftOptions,
) -> Result<(Vec<MonicPoly>, FactorSystem, LiftReport)> {
    sys.ctx.check_exponent(target)?;
    let mut report = empty_report(sys);
    let mut cur = sys.clone();
    if sys.s < target {
        loop {
            if cur.exact || cur.s.saturating_sub(cur.t_eff()) >= target {
                break;
            }
            if report.steps.len() == max_steps {
                return Err(Error::MaxStepsExceeded(max_steps));
            }
            let (next, mut step) = lift_step_with(&cur, opts)?;
            step.record.step = report.steps.len() + 1;
            report.steps.push(step.record);
            cur = next;
        }
    }
    report.final_s = cur.s;
    report.exact = cur.exact;
    let modulus = sys.ctx.pow(target);
    let factors = cur
        .factors
        .iter()
        .map(|g| g.reduce_canonical(&modulus))
        .collect();
    Ok((factors, cur, report))
}

fn empty_report(sys: &FactorSystem) -> LiftReport {
    LiftReport {
        p: sys.ctx.p(),
        mode: sys.mode,
        t: sys.profile.t,
        t_prime: sys.profile.t_prime,
        initial_s: sys.s,
        steps: Vec::new(),
        final_s: sys.s,
        exact: sys.exact,
    }
}

/// Renders factors with balanced coefficients modulo `p^n`.
pub fn balanced(factors: &[MonicPoly], ctx: &PadicContext, n: u64) -> Vec<MonicPoly> {
    let modulus = ctx.pow(n);
    factors.iter().map(|g| g.reduce_balanced(&modulus)).collect()
}

/// Two admissible lifts of `sys` with parameter `r` agree modulo
/// `p^{2s - 3t - r}` (`t'` in special mode). Verifies the hypotheses, then
/// reports whether the conclusion holds.
pub fn check_uniqueness_bound(
    sys: &FactorSystem,
    lift_a: &[MonicPoly],
    lift_b: &[MonicPoly],
    r: u64,
) -> Result<bool> {
    let ctx = &sys.ctx;
    let s = sys.s;
    let t = sys.t_eff();
    let n = sys.factors.len();
    if lift_a.len() != n || lift_b.len() != n {
        return Err(Error::HypothesisViolated(format!(
            "expected {n} factors in each lift"
        )));
    }
    let r_max = s.saturating_sub(2 * t);
    if r > r_max {
        return Err(Error::HypothesisViolated(format!("r = {r} exceeds s - 2t = {r_max}")));
    }
    for (name, lift) in [("first", lift_a), ("second", lift_b)] {
        for (k, (g, h)) in sys.factors.iter().zip(lift).enumerate() {
            if g.degree() != h.degree() {
                return Err(Error::HypothesisViolated(format!(
                    "{name} lift: factor {k} has degree {} instead of {}",
                    h.degree(),
                    g.degree()
                )));
            }
            if !g.congruent_mod(h, s - t, ctx) {
                return Err(Error::HypothesisViolated(format!(
                    "{name} lift: factor {k} is not congruent to g_{k} modulo p^{}",
                    s - t
                )));
            }
        }
        let prod_prec = 2 * (s - t) - r;
        if !sys.f.congruent_mod(&product(lift), prod_prec, ctx) {
            return Err(Error::HypothesisViolated(format!(
                "{name} lift: product is not congruent to f modulo p^{prod_prec}"
            )));
        }
    }
    let modulus = 2 * s - 3 * t - r;
    Ok(lift_a
        .iter()
        .zip(lift_b)
        .all(|(a, b)| a.congruent_mod(b, modulus, ctx)))
}

/// Single three-factor step versus two nested two-factor steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyComparison {
    pub mode: Mode,
    pub s: u64,
    pub degrees: Vec<usize>,
    pub t: u64,
    pub t_prime: Option<u64>,
    /// `val Res(g_2, g_3)`.
    pub t0: u64,
    /// `val Res(g_1, g_2 g_3)`.
    pub t1: u64,
    pub t0_prime: Option<u64>,
    pub t1_prime: Option<u64>,
    pub direct: StrategyOutcome,
    pub nested: StrategyOutcome,
}

impl StrategyComparison {
    /// Guaranteed factor precision of the direct step minus that of the nested one.
    pub fn advantage(&self) -> i64 {
        self.direct.guaranteed_factor_precision as i64 - self.nested.guaranteed_factor_precision as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyOutcome {
    pub guaranteed_factor_precision: u64,
    pub guaranteed_product_precision: u64,
    /// Minimal valuation of the coefficient changes.
    pub achieved_factor_precision: u64,
    pub achieved_product_precision: Valuation,
    #[serde(serialize_with = "crate::problem::ser_polys")]
    pub factors: Vec<MonicPoly>,
}

pub fn compare_strategies(sys: &FactorSystem, opts: &LiftOptions) -> Result<StrategyComparison> {
    if sys.factors.len() != 3 {
        return Err(Error::HypothesisViolated(format!(
            "strategy comparison needs exactly 3 factors, got {}",
            sys.factors.len()
        )));
    }
    if sys.exact {
        return Err(Error::ExactFactorizationReached);
    }
    let ctx = &sys.ctx;
    let s = sys.s;
    let request = match sys.mode {
        Mode::General => ModeRequest::General,
        Mode::Special => ModeRequest::Special,
    };
    let keep = LiftOptions {
        reduction: Reduction::None,
        ..*opts
    };
    let [g1, g2, g3] = [&sys.factors[0], &sys.factors[1], &sys.factors[2]];

    let (_, direct_step) = lift_step_with(sys, &keep)?;
    let t_eff = sys.t_eff();
    let direct = outcome(
        sys,
        &direct_step.new_factors,
        s - t_eff,
        2 * (s - t_eff),
    );

    let outer = new_system(ctx, sys.f.clone(), vec![g1.clone(), g2.mul(g3)], s, request)?;
    let (_, outer_step) = lift_step_with(&outer, &keep)?;
    let t1_eff = outer.t_eff();
    let s_inner = s - t1_eff;
    let h1 = outer_step.new_factors[0].clone();
    let h2 = outer_step.new_factors[1].clone();
    let inner = new_system(ctx, h2, vec![g2.clone(), g3.clone()], s_inner, request)?;
    let (_, inner_step) = lift_step_with(&inner, &keep)?;
    let t0_eff = inner.t_eff();
    let mut nested_factors = vec![h1];
    nested_factors.extend(inner_step.new_factors.iter().cloned());
    let nested = outcome(
        sys,
        &nested_factors,
        s_inner - t0_eff,
        2 * (s_inner - t0_eff),
    );

    Ok(StrategyComparison {
        mode: sys.mode,
        s,
        degrees: sys.factors.iter().map(MonicPoly::degree).collect(),
        t: sys.t(),
        t_prime: sys.t_prime(),
        t0: inner.t(),
        t1: outer.t(),
        t0_prime: inner.t_prime(),
        t1_prime: outer.t_prime(),
        direct,
        nested,
    })
}

fn outcome(sys: &FactorSystem, lifted: &[MonicPoly], factor_prec: u64, product_prec: u64) -> StrategyOutcome {
    let ctx = &sys.ctx;
    let achieved_factor = sys
        .factors
        .iter()
        .zip(lifted)
        .map(|(g, h)| dense::diff_valuation(&g.full_coeffs(), &h.full_coeffs(), ctx))
        .min()
        .unwrap_or(Valuation::Infinite);
    let achieved_product = ctx.min_val(&sys.f.sub(&product(lifted)));
    let modulus = ctx.pow(product_prec);
    StrategyOutcome {
        guaranteed_factor_precision: factor_prec,
        guaranteed_product_precision: product_prec,
        achieved_factor_precision: achieved_factor.finite().unwrap_or(product_prec),
        achieved_product_precision: achieved_product,
        factors: lifted.iter().map(|g| g.reduce_canonical(&modulus)).collect(),
    }
}

/// Canonical residue of every coefficient modulo `p^n`.
pub fn canonical(factors: &[MonicPoly], ctx: &PadicContext, n: u64) -> Vec<MonicPoly> {
    let modulus = ctx.pow(n);
    factors.iter().map(|g| g.reduce_canonical(&modulus)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(lower: &[i64]) -> MonicPoly {
        MonicPoly::from_lower(lower.iter().copied())
    }

    fn ex31() -> FactorSystem {
        let ctx = PadicContext::new(2).unwrap();
        new_system(
            &ctx,
            p(&[8, -2, 1]),
            vec![p(&[0]), p(&[2]), p(&[7])],
            3,
            ModeRequest::Auto,
        )
        .unwrap()
    }

    #[test]
    fn example_system() {
        let sys = ex31();
        assert_eq!(sys.mode(), Mode::General);
        assert_eq!(sys.t(), 1);
        assert_eq!(sys.required_precision(), 3);
    }

    #[test]
    fn validation_errors() {
        let ctx = PadicContext::new(2).unwrap();
        let f = p(&[8, -2, 1]);
        assert_eq!(
            new_system(&ctx, f.clone(), vec![p(&[0]), p(&[2])], 3, ModeRequest::Auto),
            Err(Error::DegreeMismatch { expected: 3, actual: 2 })
        );
        assert_eq!(
            new_system(&ctx, f.clone(), vec![p(&[0]), p(&[2]), p(&[7])], 4, ModeRequest::Auto),
            Err(Error::NotCongruent { s: 4 })
        );
        assert_eq!(
            new_system(&ctx, f.clone(), vec![p(&[0]), p(&[2]), p(&[7])], 2, ModeRequest::Auto),
            Err(Error::PrecisionBoundViolated {
                mode: Mode::General,
                required: 3,
                actual: 2
            })
        );
        assert!(matches!(
            new_system(&ctx, f, vec![p(&[0]), p(&[2]), p(&[7])], 3, ModeRequest::Special),
            Err(Error::NotSpecialForm(_))
        ));
        let sq = p(&[1, 2]);
        assert_eq!(
            new_system(&ctx, sq, vec![p(&[1]), p(&[1])], 5, ModeRequest::Auto),
            Err(Error::ZeroResultant)
        );
    }

    #[test]
    fn first_step_of_example() {
        let sys = ex31();
        let (next, step) = lift_step(&sys).unwrap();
        let expected = [p(&[12]), p(&[14]), p(&[7])];
        for (g, e) in next.factors().iter().zip(&expected) {
            assert!(g.congruent_mod(e, 3, sys.ctx()));
        }
        assert_eq!(next.s(), 4);
        assert_eq!(step.record.defect, 1);
        assert_eq!(step.b.len(), 3);
    }

    #[test]
    fn uniqueness_example() {
        let sys = ex31();
        let a = [p(&[12]), p(&[14]), p(&[7])];
        let b = [p(&[4]), p(&[6]), p(&[7])];
        assert!(check_uniqueness_bound(&sys, &a, &b, 0).unwrap());
        assert!(check_uniqueness_bound(&sys, &a, &a, 0).unwrap());
        let far = [p(&[0]), p(&[2]), p(&[7])];
        assert!(matches!(
            check_uniqueness_bound(&sys, &a, &far, 0),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn exact_factorization_stops() {
        let ctx = PadicContext::new(3).unwrap();
        let gs = vec![p(&[1]), p(&[4])];
        let f = product(&gs);
        let sys = new_system(&ctx, f, gs.clone(), 5, ModeRequest::Auto).unwrap();
        assert!(sys.is_exact());
        assert_eq!(lift_step(&sys), Err(Error::ExactFactorizationReached));

        let (factors, _, report) =
            lift_to_precision(&sys, 50, 10, &LiftOptions::default()).unwrap();
        assert!(report.steps.is_empty() && report.exact);
        assert_eq!(factors, gs);
    }

    #[test]
    fn target_at_or_below_start_returns_immediately() {
        let sys = ex31();
        let (factors, _, report) = lift_to_precision(&sys, 2, 10, &LiftOptions::default()).unwrap();
        assert!(report.steps.is_empty());
        assert_eq!(factors, vec![p(&[0]), p(&[2]), p(&[3])]);
    }

    #[test]
    fn example_lifts_to_target() {
        let sys = ex31();
        let (factors, _, report) =
            lift_to_precision(&sys, 514, 20, &LiftOptions::default()).unwrap();
        let precisions: Vec<u64> = report.steps.iter().map(|r| r.s).collect();
        assert_eq!(precisions, vec![3, 4, 6, 10, 18, 34, 66, 130, 258, 514]);
        assert!(report.steps.iter().all(|r| r.defect == 1));
        assert!(sys.f().congruent_mod(&product(&factors), 514, sys.ctx()));
        assert!(matches!(
            lift_to_precision(&sys, 514, 3, &LiftOptions::default()),
            Err(Error::MaxStepsExceeded(3))
        ));
    }

    #[test]
    fn comparison_needs_three_factors() {
        let ctx = PadicContext::new(3).unwrap();
        let sys = new_system(&ctx, p(&[2, 3]), vec![p(&[1]), p(&[2])], 5, ModeRequest::Auto).unwrap();
        assert!(matches!(
            compare_strategies(&sys, &LiftOptions::default()),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
