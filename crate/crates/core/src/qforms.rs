// SPDX-License-Identifier: Apache-2.0

//! Binary quadratic forms of fundamental discriminant, their class groups
//! (narrow for `D > 0`), and `p`-parts of S-class groups.

use std::collections::HashMap;
use std::fmt;

use num_integer::{Integer, Roots};
use serde::{Deserialize, Serialize};

use crate::abgroup::FinAbGroup;
use crate::arith::{ext_gcd, is_squarefree};
use crate::error::{Error, Result};
pub use crate::field::{fundamental_disc, is_fundamental, splitting, QuadFieldData, Splitting};

/// The form `a x² + b xy + c y²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Principal form of discriminant `d`.
    pub fn principal(d: i64) -> Self {
        let b = d.rem_euclid(2);
        QuadForm::new(1, b, (b * b - d) / 4)
    }

    /// Form with leading coefficient `a` and discriminant `d`, if one exists.
    pub fn with_leading(d: i64, a: i64) -> Option<Self> {
        let m = 2 * a.abs();
        (0..m)
            .find(|&b| (b * b - d).rem_euclid(4 * a.abs()) == 0)
            .map(|b| QuadForm::new(a, b, (b * b - d) / (4 * a)))
    }

    /// Class of the inverse (opposite) form.
    pub fn inverse(&self) -> Self {
        QuadForm::new(self.a, -self.b, self.c)
    }

    /// Gauss composition (Dirichlet's united forms, general gcd version).
    pub fn compose(&self, other: &QuadForm) -> QuadForm {
        let d = self.disc();
        debug_assert_eq!(d, other.disc());
        let (a1, b1, _) = (self.a as i128, self.b as i128, self.c as i128);
        let (a2, b2, c2) = (other.a as i128, other.b as i128, other.c as i128);
        let s = (b1 + b2) / 2;
        let (g1, _, v1) = ext_gcd(a1, a2);
        let (e, x, w) = ext_gcd(g1, s);
        let v = v1 * x;
        let a3 = a1 * a2 / (e * e);
        let b3 = b2 + 2 * (a2 / e) * (v * (b1 - b2) / 2 - w * c2);
        let m = 2 * a3.abs();
        let b3 = b3.rem_euclid(m);
        let c3 = (b3 * b3 - d as i128) / (4 * a3);
        debug_assert_eq!((b3 * b3 - d as i128) % (4 * a3), 0);
        QuadForm::new(a3 as i64, b3 as i64, c3 as i64)
    }
}

/// `⌊√D⌋` for `D > 0`.
fn isqrt(d: i64) -> i64 {
    d.sqrt()
}

fn is_reduced_definite(f: &QuadForm) -> bool {
    f.b.abs() <= f.a && f.a <= f.c && (f.b >= 0 || (f.b.abs() != f.a && f.a != f.c))
}

fn reduce_definite(f: QuadForm) -> QuadForm {
    let d = f.disc();
    let (mut a, mut b) = (f.a, f.b);
    loop {
        // move b into (-a, a]
        let r = (b + a).rem_euclid(2 * a) - a;
        let r = if r == -a { a } else { r };
        b = r;
        let c = (b * b - d) / (4 * a);
        if a > c {
            a = c;
            b = -b;
            continue;
        }
        if (a == c || b.abs() == a) && b < 0 {
            b = -b;
        }
        return QuadForm::new(a, b, c);
    }
}

fn is_reduced_indefinite(f: &QuadForm, s: i64) -> bool {
    let a2 = 2 * f.a.abs();
    f.b > 0 && f.b <= s && a2 + f.b > s && a2 - f.b <= s
}

/// One step of the reduction operator for indefinite forms.
fn rho(f: &QuadForm, s: i64) -> QuadForm {
    let d = f.disc();
    let c = f.c;
    let m = 2 * c.abs();
    let target = -f.b;
    let b = if c.abs() > s {
        // representative in (-|c|, |c|]
        (target + c.abs() - 1).rem_euclid(m) - (c.abs() - 1)
    } else {
        s - (s - target).rem_euclid(m)
    };
    QuadForm::new(c, b, (b * b - d) / (4 * c))
}

fn reduce_indefinite(f: QuadForm) -> QuadForm {
    let s = isqrt(f.disc());
    let mut g = f;
    while !is_reduced_indefinite(&g, s) {
        g = rho(&g, s);
    }
    g
}

/// Forms in the ρ-cycle of a reduced indefinite form.
fn cycle(f: &QuadForm) -> Vec<QuadForm> {
    let s = isqrt(f.disc());
    let mut out = vec![*f];
    let mut g = rho(f, s);
    while g != *f {
        out.push(g);
        g = rho(&g, s);
    }
    out
}

/// Canonical representative of the (proper) equivalence class of `f`.
pub fn canonical(f: QuadForm) -> QuadForm {
    if f.disc() < 0 {
        let f = if f.a < 0 { QuadForm::new(-f.a, f.b, -f.c) } else { f };
        reduce_definite(f)
    } else {
        let r = reduce_indefinite(f);
        cycle(&r).into_iter().min().expect("cycle is nonempty")
    }
}

/// All reduced forms of discriminant `d` (for `d > 0`, every reduced form,
/// not just cycle representatives).
pub fn reduced_forms(d: i64) -> Vec<QuadForm> {
    let mut out = Vec::new();
    if d < 0 {
        let amax = (-d / 3).sqrt() + 1;
        for a in 1..=amax {
            for b in -a + 1..=a {
                let n = b * b - d;
                if n % (4 * a) != 0 {
                    continue;
                }
                let f = QuadForm::new(a, b, n / (4 * a));
                if f.is_primitive() && is_reduced_definite(&f) {
                    out.push(f);
                }
            }
        }
    } else {
        let s = isqrt(d);
        for b in 1..=s {
            let n = b * b - d;
            if n % 4 != 0 {
                continue;
            }
            let ac = n / 4;
            for a in 1..=ac.abs() {
                if ac % a != 0 {
                    continue;
                }
                for sa in [a, -a] {
                    let f = QuadForm::new(sa, b, ac / sa);
                    if f.is_primitive() && is_reduced_indefinite(&f, s) {
                        out.push(f);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Class group of a fundamental discriminant with an explicit discrete-log
/// map onto a presentation `Z^r / relations`.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    disc: i64,
    generators: Vec<QuadForm>,
    relations: Vec<Vec<i64>>,
    dlog: HashMap<QuadForm, Vec<i64>>,
    structure: FinAbGroup,
}

impl ClassGroup {
    pub fn compute(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            return Err(Error::NotFundamental(d));
        }
        let mut classes: Vec<QuadForm> = reduced_forms(d).into_iter().map(canonical).collect();
        classes.sort();
        classes.dedup();

        let identity = canonical(QuadForm::principal(d));
        let mut generators: Vec<QuadForm> = Vec::new();
        let mut relations: Vec<Vec<i64>> = Vec::new();
        let mut dlog: HashMap<QuadForm, Vec<i64>> = HashMap::from([(identity, Vec::new())]);
        let pad = |v: &[i64], len: usize| {
            let mut v = v.to_vec();
            v.resize(len, 0);
            v
        };

        for &g in &classes {
            if dlog.contains_key(&g) {
                continue;
            }
            let r = generators.len();
            generators.push(g);
            for row in relations.iter_mut() {
                row.push(0);
            }
            // smallest k with g^k in the current subgroup
            let mut k = 1i64;
            let mut power = g;
            while !dlog.contains_key(&power) {
                power = canonical(power.compose(&g));
                k += 1;
            }
            let mut rel: Vec<i64> = pad(&dlog[&power], r + 1).iter().map(|x| -x).collect();
            rel[r] += k;
            relations.push(rel);
            // extend the subgroup by cosets g^j H, j < k
            let old: Vec<(QuadForm, Vec<i64>)> = dlog.iter().map(|(f, v)| (*f, pad(v, r + 1))).collect();
            let mut gj = identity;
            for j in 0..k {
                for (f, v) in &old {
                    let h = canonical(gj.compose(f));
                    let mut w = v.clone();
                    w[r] += j;
                    dlog.entry(h).or_insert(w);
                }
                gj = canonical(gj.compose(&g));
            }
        }
        let n = generators.len();
        for v in dlog.values_mut() {
            v.resize(n, 0);
        }
        debug_assert_eq!(dlog.len(), classes.len());
        let structure = FinAbGroup::from_relations(&relations, n)?;
        debug_assert_eq!(structure.order() as usize, classes.len());
        Ok(ClassGroup { disc: d, generators, relations, dlog, structure })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn structure(&self) -> &FinAbGroup {
        &self.structure
    }

    pub fn order(&self) -> u64 {
        self.structure.order()
    }

    /// Canonical representatives of all classes, sorted.
    pub fn classes(&self) -> Vec<QuadForm> {
        let mut v: Vec<QuadForm> = self.dlog.keys().copied().collect();
        v.sort();
        v
    }

    pub fn generators(&self) -> &[QuadForm] {
        &self.generators
    }

    /// Exponent vector of the class of `f` on the chosen generators.
    pub fn dlog(&self, f: &QuadForm) -> Option<&[i64]> {
        self.dlog.get(&canonical(*f)).map(|v| v.as_slice())
    }

    /// Structure of the quotient by the subgroup generated by the given classes.
    pub fn quotient_by(&self, forms: &[QuadForm]) -> FinAbGroup {
        let mut rows = self.relations.clone();
        for f in forms {
            rows.push(self.dlog(f).expect("form has the right discriminant").to_vec());
        }
        FinAbGroup::from_relations(&rows, self.generators.len()).expect("quotient of a finite group")
    }

    /// Narrow class group modulo the class of `(-1, δ, (D - δ²)/4)`, i.e. the
    /// ordinary class group when `D > 0`.
    pub fn wide(&self) -> FinAbGroup {
        if self.disc < 0 {
            return self.structure.clone();
        }
        let b = self.disc.rem_euclid(2);
        self.quotient_by(&[QuadForm::new(-1, b, (self.disc - b * b) / 4)])
    }
}

/// Form class group of the fundamental discriminant `d` (narrow when `d > 0`).
pub fn class_group(d: i64) -> Result<FinAbGroup> {
    Ok(ClassGroup::compute(d)?.structure)
}

/// A form `(p, b, c)` of discriminant `d`, if `p` is split or ramified.
pub fn prime_form(d: i64, p: u64) -> Option<QuadForm> {
    QuadForm::with_leading(d, p as i64)
}

/// `p`-part of the class group modulo the classes of primes above `p`.
pub fn s_class_group(d: i64, p: u64) -> Result<FinAbGroup> {
    let cg = ClassGroup::compute(d)?;
    let q = match prime_form(d, p) {
        Some(f) => cg.quotient_by(&[f]),
        None => cg.structure.clone(),
    };
    Ok(q.p_part(p))
}

/// Squarefree kernel of a nonzero integer, with sign.
pub fn squarefree_part(n: i64) -> i64 {
    assert_ne!(n, 0);
    let sign = n.signum();
    let mut rest = n.abs();
    let mut out = 1;
    let mut q = 2;
    while q * q <= rest {
        let mut e = 0;
        while rest % q == 0 {
            rest /= q;
            e += 1;
        }
        if e % 2 == 1 {
            out *= q;
        }
        q += 1;
    }
    sign * out * rest
}

/// The radicand `m'` of the twist `Q(√(-3m))`, stripped to be squarefree.
pub fn minus_three_twist(m: i64) -> Result<i64> {
    if !is_squarefree(m) || m == 1 || m == -1 || m == -3 || m == 0 {
        return Err(Error::Precondition(format!("m = {m} is not admissible for the p = 3 twist")));
    }
    Ok(squarefree_part(-3 * m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_group_examples() {
        assert_eq!(class_group(-23).unwrap().invariants(), &[3]);
        assert!(class_group(-4).unwrap().is_trivial());
        assert!(class_group(5).unwrap().is_trivial());
        assert_eq!(class_group(-84).unwrap().invariants(), &[2, 2]);
        assert_eq!(class_group(-47).unwrap().invariants(), &[5]);
        // narrow class number of Q(√3) is 2, wide is 1
        let cg = ClassGroup::compute(12).unwrap();
        assert_eq!(cg.structure().invariants(), &[2]);
        assert!(cg.wide().is_trivial());
        assert!(class_group(-20).is_ok());
        assert!(class_group(-16).is_err());
    }

    #[test]
    fn reduced_definite_forms_of_minus_23() {
        assert_eq!(
            reduced_forms(-23),
            vec![QuadForm::new(1, 1, 6), QuadForm::new(2, -1, 3), QuadForm::new(2, 1, 3)]
        );
    }

    #[test]
    fn s_class_group_examples() {
        assert!(s_class_group(-23, 3).unwrap().is_trivial());
        assert!(s_class_group(-4, 3).unwrap().is_trivial());
        // 5 is inert in Q(√-23): the 5-part is untouched (and trivial)
        assert_eq!(s_class_group(-23, 5).unwrap(), class_group(-23).unwrap().p_part(5));
        // 3 is inert in Q(√-47)? (-47/3) = (1/3) = 1, split; use 5: (-47/5) = (3/5) = -1
        assert_eq!(s_class_group(-47, 5).unwrap().invariants(), &[5]);
    }

    #[test]
    fn twist_radicands() {
        assert_eq!(minus_three_twist(5).unwrap(), -15);
        assert_eq!(minus_three_twist(-2).unwrap(), 6);
        assert_eq!(minus_three_twist(6).unwrap(), -2);
        assert!(minus_three_twist(-3).is_err());
        assert_eq!(squarefree_part(-18), -2);
    }

    #[test]
    fn composition_inverse_and_identity() {
        for d in [-23i64, -47, -84, -3299, 229, 1009, 4 * 79] {
            let e = canonical(QuadForm::principal(d));
            for f in ClassGroup::compute(d).unwrap().classes() {
                assert_eq!(canonical(f.compose(&e)), f);
                assert_eq!(canonical(f.compose(&f.inverse())), e);
            }
        }
    }
}
