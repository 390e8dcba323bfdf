//! Truncated p-adic integer arithmetic.
//!
//! Elements of `Z_p` are carried as exact integers; a [`Residue`] pins an
//! element of `Z / p^N` to its canonical representative in `[0, p^N)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default upper bound on any precision exponent handled by a context.
pub const DEFAULT_PRECISION_CAP: u64 = 1 << 22;

/// A p-adic valuation. `Infinite` is the valuation of zero and compares
/// greater than every finite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }

    /// True iff `p^bound` divides the valued element.
    pub fn at_least(self, bound: u64) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

/// Serialized as a number, or the string `"inf"`.
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => ser.serialize_u64(*v),
            Valuation::Infinite => ser.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// The ring `Z_p` together with a safety cap on working exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicContext {
    p: u64,
    p_big: BigInt,
    cap: u64,
}

impl PadicContext {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_cap(p, DEFAULT_PRECISION_CAP)
    }

    pub fn with_cap(p: u64, cap: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if cap == 0 {
            return Err(Error::InvalidPrecisionCap);
        }
        Ok(PadicContext {
            p,
            p_big: BigInt::from(p),
            cap,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> &BigInt {
        &self.p_big
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn check_exponent(&self, exponent: u64) -> Result<()> {
        if exponent > self.cap {
            Err(Error::PrecisionCapExceeded {
                exponent,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    /// `p^k` as an exact integer.
    pub fn pow(&self, k: u64) -> BigInt {
        num_traits::pow(self.p_big.clone(), k as usize)
    }

    /// Largest `i` with `p^i | x`, or `Infinite` for zero.
    pub fn val(&self, x: &BigInt) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinite;
        }
        if self.p == 2 {
            return Valuation::Finite(x.trailing_zeros().unwrap_or(0));
        }
        if !(x.magnitude() % self.p).is_zero() {
            return Valuation::Finite(0);
        }
        let mut rest = x.abs();
        // Gallop with p^(2^j) until divisibility fails, then walk back down.
        let mut powers = vec![self.p_big.clone()];
        let mut v = 0u64;
        loop {
            let last = powers.last().unwrap();
            let (q, r) = rest.div_rem(last);
            if !r.is_zero() {
                break;
            }
            v += 1u64 << (powers.len() - 1);
            rest = q;
            let sq = last * last;
            powers.push(sq);
        }
        powers.pop();
        for (j, pw) in powers.iter().enumerate().rev() {
            let (q, r) = rest.div_rem(pw);
            if r.is_zero() {
                rest = q;
                v += 1u64 << j;
            }
        }
        Valuation::Finite(v)
    }

    /// Minimum valuation over a sequence of integers (`Infinite` if empty or all zero).
    pub fn min_val<'a>(&self, xs: impl IntoIterator<Item = &'a BigInt>) -> Valuation {
        xs.into_iter()
            .map(|x| self.val(x))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn canonical(&self, x: &BigInt, n: u64) -> Residue {
        let modulus = self.pow(n);
        Residue {
            value: reduce_canonical(x, &modulus),
            prec: n,
        }
    }

    /// Multiplicative inverse of a unit residue.
    pub fn inv_unit(&self, x: &Residue) -> Result<Residue> {
        if x.prec > 0 && (&x.value % &self.p_big).is_zero() {
            return Err(Error::NotAUnit(x.value.to_string()));
        }
        let modulus = self.pow(x.prec);
        Ok(Residue {
            value: inverse_mod(&x.value, &modulus)
                .ok_or_else(|| Error::NotAUnit(x.value.to_string()))?,
            prec: x.prec,
        })
    }
}

/// An element of `Z / p^prec`, stored as its representative in `[0, p^prec)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigInt,
    prec: u64,
}

impl Residue {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn into_value(self) -> BigInt {
        self.value
    }
}

/// Representative of `x` in `[0, m)`.
pub fn reduce_canonical(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

/// Representative of `x` in `(-m/2, m/2]`.
pub fn reduce_balanced(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    let twice: BigInt = &r << 1;
    if &twice > m {
        r - m
    } else {
        r
    }
}

/// Inverse of `x` modulo `m`, if it exists.
pub(crate) fn inverse_mod(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let x = x.mod_floor(m);
    x.modinv(m)
}

/// `x / p^k` for `x` known to be divisible by `p^k`.
pub(crate) fn exact_div(x: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = x.div_rem(d);
    debug_assert!(r.is_zero(), "inexact division");
    q
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases cover all of `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
