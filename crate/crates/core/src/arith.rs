// SPDX-License-Identifier: Apache-2.0

//! Exact integer and rational arithmetic, p-adic valuations, and the unit
//! groups `(Z/p^m)^×` (primitive roots and Teichmüller lifts).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator (zero is `0/1`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(String);

impl FromStr for ExactRational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(ExactRational::new(n, d))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exponent of `p` in a nonzero big integer.
pub fn bigint_val(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational: `q = p^v · u/w` with `p ∤ uw`.
pub fn padic_val(q: &ExactRational, p: u64) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(bigint_val(q.numer(), p) as i64 - bigint_val(q.denom(), p) as i64)
}

/// Exponent of `p` in a positive machine integer.
pub fn vp(mut n: u64, p: u64) -> u32 {
    assert!(n > 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

pub fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// Odd primes strictly below `bound`.
pub fn odd_primes_below(bound: u64) -> Vec<u64> {
    (3..bound).step_by(2).filter(|&n| is_prime(n)).collect()
}

pub fn is_squarefree(m: i64) -> bool {
    if m == 0 {
        return false;
    }
    let n = m.unsigned_abs();
    let mut f = 2u64;
    while f * f <= n {
        if n % (f * f) == 0 {
            return false;
        }
        f += 1;
    }
    true
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn mod_mul(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

/// Extended gcd: returns `(g, x, y)` with `a·x + b·y = g ≥ 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn mod_inverse(a: u64, modulus: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, modulus as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(modulus as i128) as u64)
}

pub fn pow_u64(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("prime power overflows u64")
}

/// Kronecker symbol `(a/n)`, extending the Jacobi symbol to all integers `n`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut k = 1i32;
    let tab2 = [0i32, 1, 0, -1, 0, -1, 0, 1];
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v % 2 == 1 {
        k = tab2[(a & 7) as usize];
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if n > 1 { 0 } else { k };
        }
        let mut v = 0;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 {
            k *= tab2[(n & 7) as usize];
        }
        // reciprocity: a, n odd, n > 0
        if a & n & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = n % r;
        n = r;
    }
}

/// An element of `(Z/p^m)^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModUnit {
    pub value: u64,
    pub p: u64,
    pub m: u32,
}

impl ModUnit {
    pub fn new(value: u64, p: u64, m: u32) -> Result<Self> {
        let modulus = pow_u64(p, m);
        let value = value % modulus;
        if value % p == 0 {
            return Err(Error::NotUnit { value, p });
        }
        Ok(ModUnit { value, p, m })
    }

    pub fn modulus(&self) -> u64 {
        pow_u64(self.p, self.m)
    }

    /// Order of `(Z/p^m)^×`.
    pub fn group_order(&self) -> u64 {
        pow_u64(self.p, self.m - 1) * (self.p - 1)
    }

    pub fn pow(&self, e: u64) -> ModUnit {
        ModUnit { value: mod_pow(self.value, e, self.modulus()), ..*self }
    }

    pub fn mul(&self, other: &ModUnit) -> ModUnit {
        debug_assert_eq!((self.p, self.m), (other.p, other.m));
        ModUnit { value: mod_mul(self.value, other.value, self.modulus()), ..*self }
    }

    pub fn inverse(&self) -> ModUnit {
        let inv = mod_inverse(self.value, self.modulus()).expect("unit");
        ModUnit { value: inv, ..*self }
    }

    /// Multiplicative order, by trial over divisors of the group order.
    pub fn order(&self) -> u64 {
        let n = self.group_order();
        let mut best = n;
        for q in prime_factors(n) {
            while best % q == 0 && mod_pow(self.value, best / q, self.modulus()) == 1 {
                best /= q;
            }
        }
        best
    }
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut f = 1;
    while f * f <= n {
        if n % f == 0 {
            small.push(f);
            if f * f != n {
                large.push(n / f);
            }
        }
        f += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Smallest generator of `(Z/p^m)^×`.
pub fn primitive_root(p: u64, m: u32) -> Result<ModUnit> {
    check_odd_prime(p)?;
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    let modulus = pow_u64(p, m);
    (2..modulus)
        .filter(|g| g % p != 0)
        .map(|g| ModUnit { value: g, p, m })
        .find(|u| u.order() == u.group_order())
        .ok_or_else(|| Error::Precondition(format!("no primitive root mod {modulus}")))
}

/// Teichmüller lift of `g`: the unique `(p-1)`-th root of unity mod `p^m`
/// congruent to `g` mod `p`, obtained by iterated p-th powering.
pub fn teichmuller(g: u64, p: u64, m: u32) -> Result<ModUnit> {
    let mut t = ModUnit::new(g, p, m)?;
    for _ in 1..m {
        t = t.pow(p);
    }
    Ok(t)
}

/// Sign of a big integer as -1, 0, 1.
pub fn sign_of(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn to_i64(n: &BigInt) -> Option<i64> {
    n.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_val(&q(12, 1), 3).unwrap(), 1);
        assert_eq!(padic_val(&q(-1, 12), 3).unwrap(), -1);
        assert_eq!(padic_val(&q(691, 32760), 691).unwrap(), 1);
        assert_eq!(padic_val(&ExactRational::zero(), 5), Err(Error::ZeroValuation));
    }

    #[test]
    fn rational_is_reduced() {
        let r = q(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        let z = q(0, -7);
        assert_eq!(z.to_string(), "0");
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!("-691/2730".parse::<ExactRational>().unwrap(), q(-691, 2730));
        assert_eq!(q(-691, 2730).to_string(), "-691/2730");
        assert!("1/0".parse::<ExactRational>().is_err());
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(3, 1).unwrap().value, 2);
        assert_eq!(primitive_root(7, 1).unwrap().value, 3);
        assert_eq!(primitive_root(5, 2).unwrap().value, 2);
        assert!(primitive_root(9, 1).is_err());
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(2, 3, 1).unwrap().value, 2);
        assert_eq!(teichmuller(2, 3, 2).unwrap().value, 8);
        assert!(teichmuller(6, 3, 2).is_err());
    }

    #[test]
    fn teichmuller_grid() {
        for p in odd_primes_below(50) {
            for m in 1..=6u32 {
                if p.checked_pow(m).map_or(true, |x| x > 1 << 40) {
                    continue;
                }
                let modulus = pow_u64(p, m);
                for g in (1..p.min(12)).chain([p + 1, 2 * p + 3]) {
                    if g % p == 0 {
                        continue;
                    }
                    let t = teichmuller(g, p, m).unwrap();
                    assert_eq!(t.pow(p - 1).value, 1, "p={p} m={m} g={g}");
                    assert_eq!(t.value % p, g % p);
                    assert!(t.value < modulus);
                }
            }
        }
    }

    #[test]
    fn primitive_root_has_full_order() {
        for p in odd_primes_below(30) {
            for m in 1..=3 {
                let g = primitive_root(p, m).unwrap();
                let n = g.group_order();
                // brute-force order
                let mut x = 1u64;
                let mut k = 0;
                loop {
                    x = mod_mul(x, g.value, g.modulus());
                    k += 1;
                    if x == 1 {
                        break;
                    }
                }
                assert_eq!(k, n);
            }
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in odd_primes_below(60) {
            for a in -60i64..60 {
                let e = mod_pow(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let expected = match e {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(kronecker(a, p as i64), expected, "({a}/{p})");
            }
        }
        assert_eq!(kronecker(-23, 3), 1);
        assert_eq!(kronecker(8, 5), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(1, 2), 1);
        assert_eq!(kronecker(-4, -1), -1);
        assert_eq!(kronecker(5, -1), 1);
    }

    #[test]
    fn divisor_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert!(is_squarefree(-30));
        assert!(!is_squarefree(12));
        assert!(!is_squarefree(0));
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in 1i64..100_000, b in 1i64..100_000, c in 1i64..100_000, d in 1i64..100_000, sa: bool) {
            let x = q(if sa { -a } else { a }, b);
            let y = q(c, d);
            for p in [3u64, 5, 7, 11] {
                let lhs = padic_val(&(&x * &y), p).unwrap();
                prop_assert_eq!(lhs, padic_val(&x, p).unwrap() + padic_val(&y, p).unwrap());
            }
        }

        #[test]
        fn rational_display_roundtrip(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let r = q(n, d);
            prop_assert_eq!(r.to_string().parse::<ExactRational>().unwrap(), r);
        }
    }
}
