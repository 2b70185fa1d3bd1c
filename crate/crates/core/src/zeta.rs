// SPDX-License-Identifier: Apache-2.0

//! Bernoulli numbers, quadratic Dirichlet characters, generalized Bernoulli
//! numbers and special values `ζ_F(1-k)` for `F = Q` and real quadratic `F`.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{kronecker, ExactRational};
use crate::error::{Error, Result};
use crate::field::{is_fundamental, Field};

/// Binomial row `C(n, 0..=n)`.
fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

/// `B_0..=B_n` from the defining recurrence `Σ_{k≤n} C(n+1,k) B_k = 0`.
pub fn bernoulli_recurrence(n: usize) -> Vec<ExactRational> {
    let mut out = Vec::with_capacity(n + 1);
    extend_recurrence(&mut out, n);
    out
}

fn extend_recurrence(b: &mut Vec<ExactRational>, n: usize) {
    if b.is_empty() {
        b.push(ExactRational::one());
    }
    for j in b.len()..=n {
        if j >= 3 && j % 2 == 1 {
            b.push(ExactRational::zero());
            continue;
        }
        let row = binomial_row(j + 1);
        let mut acc = ExactRational::zero();
        for (k, bk) in b.iter().enumerate().take(j) {
            if !bk.is_zero() {
                acc = &acc + &(bk * &ExactRational::from_integer(row[k].clone()));
            }
        }
        b.push(-(acc / ExactRational::from_integer(j as i64 + 1)));
    }
}

/// `B_0..=B_n` by the Akiyama–Tanigawa transform, with the sign of `B_1`
/// flipped to the `B_1 = -1/2` convention.
pub fn bernoulli_akiyama_tanigawa(n: usize) -> Vec<ExactRational> {
    let mut a: Vec<ExactRational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(ExactRational::new(1, m as i64 + 1));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * ExactRational::from_integer(j as i64);
        }
        out.push(a[0].clone());
    }
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

static BERNOULLI: RwLock<Vec<ExactRational>> = RwLock::new(Vec::new());

/// `B_0..=B_n` (with `B_1 = -1/2`), memoized for the process.
///
/// Each extension of the table is computed with the recurrence and checked
/// entry by entry against the Akiyama–Tanigawa transform.
pub fn bernoulli_upto(n: usize) -> Vec<ExactRational> {
    {
        let memo = BERNOULLI.read().unwrap();
        if memo.len() > n {
            return memo[..=n].to_vec();
        }
    }
    let mut memo = BERNOULLI.write().unwrap();
    if memo.len() <= n {
        let start = memo.len();
        let mut table = memo.clone();
        extend_recurrence(&mut table, n);
        let check = bernoulli_akiyama_tanigawa(n);
        for k in start..=n {
            assert_eq!(table[k], check[k], "Bernoulli algorithms disagree at B_{k}");
        }
        *memo = table;
    }
    memo[..=n].to_vec()
}

pub fn bernoulli(n: usize) -> ExactRational {
    {
        let memo = BERNOULLI.read().unwrap();
        if let Some(b) = memo.get(n) {
            return b.clone();
        }
    }
    bernoulli_upto(n).pop().unwrap()
}

/// Number of memoized Bernoulli numbers.
pub fn memoized_len() -> usize {
    BERNOULLI.read().unwrap().len()
}

/// Seed the memo table with externally stored values `B_0..` (for example from
/// an on-disk cache). Entries the table already holds are left alone.
pub fn seed_bernoulli(values: &[ExactRational]) {
    let mut memo = BERNOULLI.write().unwrap();
    if values.len() > memo.len() {
        let start = memo.len();
        memo.extend_from_slice(&values[start..]);
    }
}

/// Kronecker character `a ↦ (D/a)` of a fundamental discriminant, or the
/// trivial character when `D = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadCharacter {
    disc: i64,
}

impl QuadCharacter {
    pub fn new(disc: i64) -> Result<Self> {
        if disc != 1 && !is_fundamental(disc) {
            return Err(Error::NotFundamental(disc));
        }
        Ok(QuadCharacter { disc })
    }

    pub fn trivial() -> Self {
        QuadCharacter { disc: 1 }
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn conductor(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    pub fn eval(&self, a: i64) -> i32 {
        if self.disc == 1 {
            1
        } else {
            kronecker(self.disc, a)
        }
    }

    /// `χ(-1)`: +1 for even characters, -1 for odd ones.
    pub fn parity(&self) -> i32 {
        if self.disc < 0 {
            -1
        } else {
            1
        }
    }
}

/// Generalized Bernoulli number
/// `B_{n,χ} = f^{n-1} Σ_{a=1}^{f} χ(a) B_n(a/f)`, expanded as
/// `(1/f) Σ_k C(n,k) B_k f^k Σ_a χ(a) a^{n-k}`.
pub fn gen_bernoulli(n: usize, chi: &QuadCharacter) -> ExactRational {
    assert!(n >= 1, "gen_bernoulli needs n ≥ 1");
    let f = chi.conductor();
    let b = bernoulli_upto(n);
    // power sums S_j = Σ χ(a) a^j, j = 0..=n
    let mut sums = vec![BigInt::zero(); n + 1];
    for a in 1..=f {
        let c = chi.eval(a as i64);
        if c == 0 {
            continue;
        }
        let mut pw = BigInt::one();
        let a_big = BigInt::from(a);
        for s in sums.iter_mut() {
            if c > 0 {
                *s += &pw;
            } else {
                *s -= &pw;
            }
            pw *= &a_big;
        }
    }
    let row = binomial_row(n);
    let f_big = BigInt::from(f);
    let mut fk = BigInt::one();
    let mut acc = ExactRational::zero();
    for k in 0..=n {
        if !b[k].is_zero() && !sums[n - k].is_zero() {
            let coeff = ExactRational::from_integer(&row[k] * &fk * &sums[n - k]);
            acc = &acc + &(&b[k] * &coeff);
        }
        fk *= &f_big;
    }
    acc / ExactRational::from_integer(f as i64)
}

/// True when `p` divides the numerator of no `B_k` with `k ≤ p - 3` even.
pub fn is_regular(p: u64) -> bool {
    if p < 5 {
        return true;
    }
    let b = bernoulli_upto(p as usize - 3);
    let modulus = BigInt::from(p);
    (2..=p as usize - 3).step_by(2).all(|k| !(b[k].numer() % &modulus).is_zero())
}

/// `L(1-n, χ) = -B_{n,χ}/n`.
pub fn l_value_neg(n: usize, chi: &QuadCharacter) -> ExactRational {
    -(gen_bernoulli(n, chi) / ExactRational::from_integer(n as i64))
}

/// `ζ_F(1-k)` for totally real `F` and `k ≥ 2`.
pub fn zeta_neg(field: &Field, k: usize) -> Result<ExactRational> {
    if k < 2 {
        return Err(Error::Precondition(format!("zeta_neg needs k ≥ 2, got {k}")));
    }
    let riemann = -(bernoulli(k) / ExactRational::from_integer(k as i64));
    match field {
        Field::Rational => Ok(riemann),
        Field::Quadratic(q) if q.is_real() => {
            let chi = QuadCharacter::new(q.disc())?;
            Ok(riemann * l_value_neg(k, &chi))
        }
        Field::Quadratic(_) => Err(Error::NotTotallyReal),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{odd_primes_below, padic_val};

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    /// Direct finite sum `f^{n-1} Σ χ(a) B_n(a/f)` with the Bernoulli polynomial
    /// evaluated term by term.
    fn gen_bernoulli_direct(n: usize, chi: &QuadCharacter) -> ExactRational {
        let b = bernoulli_recurrence(n);
        let f = chi.conductor() as i64;
        let mut total = ExactRational::zero();
        for a in 1..=f {
            let c = chi.eval(a);
            if c == 0 {
                continue;
            }
            let x = q(a, f);
            let mut poly = ExactRational::zero();
            for (k, bk) in b.iter().enumerate() {
                let mut xp = ExactRational::one();
                for _ in 0..(n - k) {
                    xp = &xp * &x;
                }
                let binom = ExactRational::from_integer(binomial_row(n)[k].clone());
                poly = &poly + &(&(bk * &binom) * &xp);
            }
            total = &total + &(poly * ExactRational::from(c as i64));
        }
        let mut scale = ExactRational::one();
        for _ in 1..n {
            scale = scale * ExactRational::from(f);
        }
        total * scale
    }

    #[test]
    fn bernoulli_examples() {
        let b = bernoulli_upto(12);
        assert_eq!(b[0], q(1, 1));
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[12], q(-691, 2730));
        assert_eq!(b[7], q(0, 1));
    }

    #[test]
    fn two_bernoulli_algorithms_agree() {
        let n = 400;
        assert_eq!(bernoulli_recurrence(n), bernoulli_akiyama_tanigawa(n));
    }

    #[test]
    fn gen_bernoulli_examples() {
        assert_eq!(gen_bernoulli(4, &QuadCharacter::trivial()), q(-1, 30));
        assert_eq!(gen_bernoulli(1, &QuadCharacter::new(-3).unwrap()), q(-1, 3));
        assert_eq!(gen_bernoulli(1, &QuadCharacter::new(-4).unwrap()), q(-1, 2));
        assert_eq!(gen_bernoulli(2, &QuadCharacter::new(5).unwrap()), q(4, 5));
        assert!(QuadCharacter::new(20).is_err());
    }

    #[test]
    fn gen_bernoulli_matches_direct_sum() {
        for d in [-3i64, -4, -7, -8, -15, -20, 5, 8, 12, 13, 21, 24] {
            let chi = QuadCharacter::new(d).unwrap();
            for n in 1..=8 {
                assert_eq!(gen_bernoulli(n, &chi), gen_bernoulli_direct(n, &chi), "D={d} n={n}");
            }
        }
    }

    #[test]
    fn trivial_character_reduces_to_bernoulli() {
        let triv = QuadCharacter::trivial();
        for n in 2..=30 {
            assert_eq!(gen_bernoulli(n, &triv), bernoulli(n));
        }
    }

    #[test]
    fn parity_vanishing() {
        for d in -200i64..=200 {
            if !is_fundamental(d) {
                continue;
            }
            let chi = QuadCharacter::new(d).unwrap();
            for n in 1..=40usize {
                let mismatched = chi.parity() == if n % 2 == 0 { -1 } else { 1 };
                if mismatched {
                    assert!(gen_bernoulli(n, &chi).is_zero(), "D={d} n={n}");
                } else {
                    assert!(!gen_bernoulli(n, &chi).is_zero(), "D={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn von_staudt_clausen() {
        for p in odd_primes_below(200) {
            let b = bernoulli((p - 1) as usize);
            assert_eq!(padic_val(&b, p).unwrap(), -1, "p={p}");
        }
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_neg(&Field::Rational, 2).unwrap(), q(-1, 12));
        assert_eq!(zeta_neg(&Field::Rational, 12).unwrap(), q(691, 32760));
        assert_eq!(zeta_neg(&Field::quadratic(5).unwrap(), 2).unwrap(), q(1, 30));
        assert!(zeta_neg(&Field::quadratic(5).unwrap(), 3).unwrap().is_zero());
        assert_eq!(zeta_neg(&Field::quadratic(-5).unwrap(), 2), Err(Error::NotTotallyReal));
        assert!(zeta_neg(&Field::Rational, 1).is_err());
    }

    #[test]
    fn memo_is_consistent_under_threads() {
        let handles: Vec<_> = (0..8)
            .map(|t| std::thread::spawn(move || bernoulli_upto(60 + 10 * t)))
            .collect();
        let reference = bernoulli_recurrence(130);
        for h in handles {
            let got = h.join().unwrap();
            assert_eq!(got[..], reference[..got.len()]);
        }
    }
}
