// SPDX-License-Identifier: Apache-2.0

//! Cyclotomic bookkeeping for `Q` and quadratic fields at an odd prime `p`:
//! `a(F)`, `d = |F(μ_p):F|`, local degrees at primes above `p`, and orders of
//! twisted roots of unity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{check_odd_prime, kronecker, mod_pow, pow_u64, vp};
use crate::error::{Error, Result};
use crate::field::{Field, QuadFieldData, Splitting};

/// Level `n` of `μ_{p^n}`, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Finite(u32),
    Infinite,
}

impl Level {
    fn cap(self, e: u32) -> u32 {
        match self {
            Level::Finite(n) => n.min(e),
            Level::Infinite => e,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(n) => write!(f, "{n}"),
            Level::Infinite => f.write_str("∞"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloProfile {
    pub a: u32,
    pub d: u64,
    /// `|Δ_v|` for each prime `v | p`.
    pub local_degrees: Vec<u64>,
}

impl CycloProfile {
    pub fn s_p(&self) -> usize {
        self.local_degrees.len()
    }
}

pub fn b_of(i: u64, p: u64) -> u32 {
    vp(i, p)
}

/// `(-1)^{(p-1)/2} p`.
pub fn p_star(p: u64) -> i64 {
    if p % 4 == 1 {
        p as i64
    } else {
        -(p as i64)
    }
}

/// True when `m` is `±1` or `p*`, the values the quadratic rank formulas exclude.
pub fn is_excluded(m: i64, p: u64) -> bool {
    m == 1 || m == -1 || m == p_star(p)
}

/// Cyclotomic profile; rejects `m ∈ {±1, p*}` for quadratic fields.
pub fn profile(field: &Field, p: u64) -> Result<CycloProfile> {
    if let Field::Quadratic(q) = field {
        if is_excluded(q.m(), p) {
            return Err(Error::ExcludedField { m: q.m(), p });
        }
    }
    profile_any(field, p)
}

/// Profile without the exclusion of `m = p*`, where `F ⊂ Q(μ_p)` and
/// `d = (p-1)/2`.
pub fn profile_any(field: &Field, p: u64) -> Result<CycloProfile> {
    check_odd_prime(p)?;
    let full = p - 1;
    let q = match field {
        Field::Rational => return Ok(CycloProfile { a: 1, d: full, local_degrees: vec![full] }),
        Field::Quadratic(q) => q,
    };
    let d = if q.m() == p_star(p) { full / 2 } else { full };
    let local_degrees = match q.splitting(p) {
        Splitting::Split => vec![full, full],
        Splitting::Inert => vec![full],
        Splitting::Ramified => {
            if ramified_contains_sqrt_p_star(q, p) {
                vec![full / 2]
            } else {
                vec![full]
            }
        }
    };
    Ok(CycloProfile { a: 1, d, local_degrees })
}

/// For `p` ramified in `Q(√m)`, `m = p*·m₁`: whether `p` splits in `Q(√m₁)`,
/// i.e. whether the completion contains `√p*`.
fn ramified_contains_sqrt_p_star(q: &QuadFieldData, p: u64) -> bool {
    let m1 = q.m() / p_star(p);
    kronecker(m1, p as i64) == 1
}

/// True in the configuration where `p` ramifies in `F` and splits in `Q(√m₁)`.
pub fn is_exceptional(field: &Field, p: u64) -> bool {
    match field {
        Field::Rational => false,
        Field::Quadratic(q) => q.splitting(p) == Splitting::Ramified && ramified_contains_sqrt_p_star(q, p),
    }
}

/// `(|S_p|, |S_p^{(i)}|)`.
pub fn sp_i(field: &Field, p: u64, i: u64) -> Result<(usize, usize)> {
    let prof = profile(field, p)?;
    let with_i = prof.local_degrees.iter().filter(|&&dv| i % dv == 0).count();
    Ok((prof.s_p(), with_i))
}

/// Order of `μ_{p^n}^{⊗i}(L)` for a field with `|L(μ_p):L| = d_l`, `a(L) = a_l`.
pub fn w_order(d_l: u64, a_l: u32, p: u64, i: u64, n: Level) -> u64 {
    assert!(d_l >= 1 && a_l >= 1);
    if i % d_l != 0 {
        return 1;
    }
    pow_u64(p, n.cap(a_l + vp(i, p)))
}

/// Order of `{x ∈ Z/p^n : u^i x = x for all u ∈ H}`, `H` given by generators.
pub fn brute_w(p: u64, n: u32, i: u64, gens: &[u64]) -> u64 {
    let q = pow_u64(p, n);
    let twists: Vec<u64> = gens.iter().map(|&u| mod_pow(u % q, i, q)).collect();
    (0..q)
        .filter(|&x| twists.iter().all(|&t| (t as u128 * x as u128 % q as u128) as u64 == x))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(m: i64) -> Field {
        Field::quadratic(m).unwrap()
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_of(6, 3), 1);
        assert_eq!(b_of(5, 3), 0);
        assert_eq!(b_of(27, 3), 3);
    }

    #[test]
    fn profile_examples() {
        for p in [3u64, 5, 7, 11, 691] {
            let prof = profile(&Field::Rational, p).unwrap();
            assert_eq!(prof, CycloProfile { a: 1, d: p - 1, local_degrees: vec![p - 1] });
        }
        assert_eq!(profile(&quad(6), 3).unwrap().local_degrees, vec![1]);
        assert_eq!(profile(&quad(2), 3).unwrap().local_degrees, vec![2]);
        assert_eq!(profile(&quad(-23), 3).unwrap().local_degrees, vec![2, 2]);
        assert!(matches!(profile(&quad(-3), 3), Err(Error::ExcludedField { .. })));
        assert!(matches!(profile(&quad(5), 5), Err(Error::ExcludedField { .. })));
        assert!(profile(&quad(-1), 5).is_err());
        let degenerate = profile_any(&quad(5), 5).unwrap();
        assert_eq!((degenerate.d, degenerate.local_degrees.clone()), (2, vec![2]));
    }

    #[test]
    fn sp_i_examples() {
        assert_eq!(sp_i(&Field::Rational, 3, 1).unwrap(), (1, 0));
        assert_eq!(sp_i(&quad(6), 3, 1).unwrap(), (1, 1));
        assert_eq!(sp_i(&Field::Rational, 3, 2).unwrap(), (1, 1));
    }

    #[test]
    fn w_order_examples() {
        assert_eq!(w_order(2, 1, 3, 2, Level::Infinite), 3);
        for n in 1..5 {
            assert_eq!(w_order(2, 1, 3, 1, Level::Finite(n)), 1);
        }
        assert_eq!(w_order(2, 1, 3, 1, Level::Infinite), 1);
        assert_eq!(w_order(1, 2, 5, 10, Level::Finite(2)), 25);
    }

    #[test]
    fn brute_w_examples() {
        assert_eq!(brute_w(3, 2, 1, &[]), 9);
        assert_eq!(brute_w(3, 2, 1, &[2]), 1);
        assert_eq!(brute_w(3, 2, 2, &[8]), 9);
    }

    #[test]
    fn ramified_local_degree_matches_square_residues() {
        // √p* lies in Q_p(√m) iff m/p* is a nonzero square mod p
        for p in [3u64, 5, 7, 11, 13] {
            let squares: Vec<i64> = (1..p as i64).map(|x| x * x % p as i64).collect();
            for m in -200i64..200 {
                let Ok(f) = Field::quadratic(m) else { continue };
                if is_excluded(m, p) || m % p as i64 != 0 {
                    continue;
                }
                let m1 = (m / p_star(p)).rem_euclid(p as i64);
                let expected = if squares.contains(&m1) { (p - 1) / 2 } else { p - 1 };
                assert_eq!(profile(&f, p).unwrap().local_degrees, vec![expected], "m={m} p={p}");
            }
        }
    }

    #[test]
    fn local_w_orders_match_decomposition_subgroup() {
        // Gal(F_v(μ_{p^n})/F_v) is all of (Z/p^n)^× unless F_v ∩ Q_p(μ_{p^n}) is
        // Q_p(√p*), in which case it is the subgroup of squares. Checking
        // w_order against brute_w with a_v = 1 confirms the local a-values.
        use crate::arith::primitive_root;
        for p in [3u64, 5, 7] {
            for m in -60i64..60 {
                let Ok(f) = Field::quadratic(m) else { continue };
                if is_excluded(m, p) {
                    continue;
                }
                let prof = profile(&f, p).unwrap();
                for n in 1..=3u32 {
                    let g = primitive_root(p, n).unwrap().value;
                    let q = pow_u64(p, n);
                    let h = if is_exceptional(&f, p) { g * g % q } else { g };
                    for i in 1..=2 * p * (p - 1) {
                        for &dv in &prof.local_degrees {
                            assert_eq!(w_order(dv, 1, p, i, Level::Finite(n)), brute_w(p, n, i, &[h]), "m={m} p={p} n={n} i={i}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn exceptional_iff_sp1_nonzero() {
        for p in [3u64, 5, 7] {
            for m in -150i64..150 {
                let Ok(f) = Field::quadratic(m) else { continue };
                if is_excluded(m, p) {
                    continue;
                }
                let (_, s1) = sp_i(&f, p, 1).unwrap();
                assert_eq!(s1 > 0, is_exceptional(&f, p) && p == 3, "m={m} p={p}");
            }
        }
    }
}
