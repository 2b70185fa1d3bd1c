// SPDX-License-Identifier: Apache-2.0

//! Kummer's criterion for totally real `F ∈ {Q, Q(√m)}` through zeta values
//! at negative integers, irregular-prime scans, and the two-sided check at
//! `p = 3` against class numbers of quadratic fields.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{check_odd_prime, is_squarefree, odd_primes_below, padic_val, pow_u64, ExactRational};
use crate::cyclo::profile_any;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::qforms::{class_group, fundamental_disc, minus_three_twist};
use crate::zeta::{bernoulli_upto, zeta_neg};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerQuantity {
    pub i: u64,
    pub value: ExactRational,
    pub valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerVerdict {
    pub field: Field,
    pub p: u64,
    pub hypothesis_ok: bool,
    pub divisible: bool,
    pub witnesses: Vec<u64>,
    pub quantities: Vec<KummerQuantity>,
}

fn require_totally_real(field: &Field) -> Result<()> {
    if field.is_totally_real() {
        Ok(())
    } else {
        Err(Error::NotTotallyReal)
    }
}

/// Whether every decomposition group `Δ_v`, `v | p`, has even order. In a
/// cyclic `Δ` of even order this is the same as complex conjugation lying in
/// every `Δ_v`, i.e. no prime above `p` splitting in `F(ζ_p)/F(ζ_p + ζ_p⁻¹)`.
pub fn hypothesis_check(field: &Field, p: u64) -> Result<bool> {
    require_totally_real(field)?;
    let prof = profile_any(field, p)?;
    Ok(prof.local_degrees.iter().all(|&dv| dv % 2 == 0))
}

/// Zeta-side quantities for every odd `i < d` and the resulting verdict.
pub fn kummer_check(field: &Field, p: u64) -> Result<KummerVerdict> {
    require_totally_real(field)?;
    check_odd_prime(p)?;
    let hypothesis_ok = hypothesis_check(field, p)?;
    let prof = profile_any(field, p)?;
    let d = prof.d;
    let mut quantities = Vec::new();
    for i in (1..d).step_by(2) {
        let z = zeta_neg(field, i as usize + 1)?;
        let value = if i == d - 1 { z * ExactRational::from_integer(pow_u64(p, prof.a)) } else { z };
        let valuation = padic_val(&value, p)?;
        quantities.push(KummerQuantity { i, value, valuation });
    }
    let witnesses: Vec<u64> = quantities.iter().filter(|q| q.valuation >= 1).map(|q| q.i).collect();
    Ok(KummerVerdict { field: *field, p, hypothesis_ok, divisible: !witnesses.is_empty(), witnesses, quantities })
}

/// Odd primes below `bound` for which the criterion over `Q` reports divisibility.
pub fn irregular_scan(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    // fill the Bernoulli table once instead of racing to extend it
    bernoulli_upto(bound as usize);
    odd_primes_below(bound)
        .into_par_iter()
        .filter(|&p| kummer_check(&Field::Rational, p).map(|v| v.divisible).unwrap_or(false))
        .collect()
}

/// Odd primes below `bound` at which the criterion for `F` reports divisibility.
pub fn kummer_scan(field: &Field, bound: u64) -> Result<Vec<u64>> {
    require_totally_real(field)?;
    if *field == Field::Rational {
        return Ok(irregular_scan(bound));
    }
    bernoulli_upto(bound.max(2) as usize);
    odd_primes_below(bound)
        .into_par_iter()
        .map(|p| kummer_check(field, p).map(|v| v.divisible.then_some(p)))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

/// `(3 | h(F(ζ_3)), zeta-side divisibility)` for `F = Q(√m)`, `m > 1`.
///
/// The left side uses only form class groups of `Q(√m)` and `Q(√(-3m))`; the
/// right side only zeta values.
pub fn scholz_verify(m: i64) -> Result<(bool, bool)> {
    if m <= 1 || !is_squarefree(m) {
        return Err(Error::Precondition(format!("m = {m} must be a squarefree integer > 1")));
    }
    if m == 3 {
        return Err(Error::Precondition("m = 3 is excluded".into()));
    }
    let field = Field::quadratic(m)?;
    if !hypothesis_check(&field, 3)? {
        return Err(Error::Hypothesis(format!("a prime above 3 splits in Q(√{m}, √-3)/Q(√{m})")));
    }
    let h_plus = class_group(fundamental_disc(m)?)?.order();
    let h_minus = class_group(fundamental_disc(minus_three_twist(m)?)?)?.order();
    let lhs = (h_plus * h_minus) % 3 == 0;
    let rhs = kummer_check(&field, 3)?.divisible;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(m: i64) -> Field {
        Field::quadratic(m).unwrap()
    }

    #[test]
    fn hypothesis_examples() {
        for p in odd_primes_below(60) {
            assert!(hypothesis_check(&Field::Rational, p).unwrap());
        }
        assert!(!hypothesis_check(&quad(6), 3).unwrap());
        assert!(hypothesis_check(&quad(5), 3).unwrap());
        assert_eq!(hypothesis_check(&quad(-5), 3), Err(Error::NotTotallyReal));
    }

    #[test]
    fn kummer_examples() {
        let v = kummer_check(&Field::Rational, 37).unwrap();
        assert!(v.divisible && v.witnesses.contains(&31));
        assert!(!kummer_check(&Field::Rational, 5).unwrap().divisible);
        let v = kummer_check(&quad(5), 3).unwrap();
        assert!(!v.divisible && v.hypothesis_ok);
        assert_eq!(v.quantities.len(), 1);
        assert_eq!(v.quantities[0].value, ExactRational::new(1, 10));
        let v = kummer_check(&quad(6), 3).unwrap();
        assert!(!v.hypothesis_ok);
    }

    #[test]
    fn scan_examples() {
        assert!(irregular_scan(30).is_empty());
        assert_eq!(irregular_scan(40), vec![37]);
        assert_eq!(irregular_scan(110), vec![37, 59, 67, 101, 103]);
        assert_eq!(kummer_scan(&Field::Rational, 110).unwrap(), irregular_scan(110));
        let five = kummer_scan(&quad(5), 40).unwrap();
        for p in odd_primes_below(40) {
            assert_eq!(five.contains(&p), kummer_check(&quad(5), p).unwrap().divisible);
        }
        assert_eq!(kummer_scan(&quad(-5), 40), Err(Error::NotTotallyReal));
    }

    #[test]
    fn scholz_examples() {
        assert_eq!(scholz_verify(5).unwrap(), (false, false));
        assert_eq!(scholz_verify(2).unwrap(), (false, false));
        let (l, r) = scholz_verify(79).unwrap();
        assert_eq!(l, r);
        assert!(scholz_verify(6).is_err());
        assert!(scholz_verify(3).is_err());
    }

    #[test]
    fn witnesses_are_odd_and_in_range() {
        for p in odd_primes_below(120) {
            let v = kummer_check(&Field::Rational, p).unwrap();
            assert_eq!(v.divisible, !v.witnesses.is_empty());
            assert!(v.witnesses.iter().all(|&i| i % 2 == 1 && i >= 1 && i < p - 1));
        }
    }
}
