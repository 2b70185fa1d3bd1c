// SPDX-License-Identifier: Apache-2.0

//! Finite abelian groups in invariant-factor form, the group ring
//! `(Z/p^m)[Δ]` of a cyclic group `Δ` of order `d | p-1`, its idempotents
//! `ε_j`, and modules with a cyclic group action.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{mod_inverse, mod_mul, mod_pow, pow_u64, primitive_root, teichmuller, vp};
use crate::error::{Error, Result};
use crate::lattice::{invariant_factors, relative_kernel, to_rows, Row};

/// Finite abelian group `⊕ Z/d_k` with `d_1 | d_2 | … | d_r`, all `d_k ≥ 2`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FinAbGroup {
    invariants: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<String>>,
}

impl PartialEq for FinAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.invariants == other.invariants
    }
}

impl Eq for FinAbGroup {}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.invariants)
    }
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup::default()
    }

    pub fn cyclic(n: u64) -> Self {
        FinAbGroup::from_cyclic_orders(&[n])
    }

    /// Build from an invariant-factor list, checking the divisibility chain.
    pub fn from_invariants(invariants: Vec<u64>) -> Result<Self> {
        if invariants.iter().any(|&d| d < 2) {
            return Err(Error::Precondition("invariant factors must be ≥ 2".into()));
        }
        if invariants.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Precondition(format!("{invariants:?} is not a divisibility chain")));
        }
        Ok(FinAbGroup { invariants, generators: None })
    }

    /// Normalize an arbitrary direct sum of cyclic groups.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let n = orders.len();
        let rows: Vec<Row> = orders
            .iter()
            .enumerate()
            .map(|(k, &o)| {
                let mut r = vec![BigInt::from(0); n];
                r[k] = BigInt::from(o);
                r
            })
            .collect();
        let invariants = invariant_factors(&rows, n).expect("cyclic orders must be positive");
        FinAbGroup { invariants, generators: None }
    }

    /// `Z^ncols / rowspace(rows)`; errors if the quotient is infinite.
    pub fn from_relations(rows: &[Vec<i64>], ncols: usize) -> Result<Self> {
        let invariants = invariant_factors(&to_rows(rows), ncols)
            .ok_or_else(|| Error::Precondition("relations do not present a finite group".into()))?;
        Ok(FinAbGroup { invariants, generators: None })
    }

    pub fn with_generator_labels(mut self, labels: Vec<String>) -> Self {
        self.generators = Some(labels);
        self
    }

    pub fn generator_labels(&self) -> Option<&[String]> {
        self.generators.as_deref()
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn ngens(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.invariants.iter().all(|&d| pow_u64(p, vp(d, p)) == d)
    }

    /// `r_{p^n}`: number of invariant factors divisible by `p^n`.
    pub fn rank_pn(&self, p: u64, n: u32) -> u32 {
        assert!(n >= 1, "rank_pn needs n ≥ 1");
        self.invariants.iter().filter(|&&d| vp(d, p) >= n).count() as u32
    }

    /// Sylow p-subgroup.
    pub fn p_part(&self, p: u64) -> FinAbGroup {
        let invariants = self
            .invariants
            .iter()
            .map(|&d| pow_u64(p, vp(d, p)))
            .filter(|&d| d > 1)
            .collect();
        FinAbGroup { invariants, generators: None }
    }

    /// `N / p^n N`.
    pub fn mod_pn(&self, p: u64, n: u32) -> FinAbGroup {
        let q = pow_u64(p, n);
        let invariants = self.invariants.iter().map(|&d| d.gcd(&q)).filter(|&d| d > 1).collect();
        FinAbGroup { invariants, generators: None }
    }

    /// Exponent of `p` in the group order.
    pub fn log_order(&self, p: u64) -> u32 {
        self.invariants.iter().map(|&d| vp(d, p)).sum()
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut all = self.invariants.clone();
        all.extend_from_slice(&other.invariants);
        FinAbGroup::from_cyclic_orders(&all)
    }

    /// Reduce integer coordinates into canonical residues.
    pub fn reduce(&self, x: &[i64]) -> Vec<u64> {
        x.iter()
            .zip(&self.invariants)
            .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
            .collect()
    }

    pub fn zero_element(&self) -> Vec<u64> {
        vec![0; self.ngens()]
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.invariants)
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect()
    }

    pub fn scale(&self, x: &[u64], c: u64) -> Vec<u64> {
        x.iter().zip(&self.invariants).map(|(&a, &d)| mod_mul(a, c, d)).collect()
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.invariants).map(|(&a, &d)| (d - a) % d).collect()
    }

    /// Every element, in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::with_capacity(self.ngens())];
        for &d in &self.invariants {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Elements of the subgroup spanned by `gens`.
    pub fn span(&self, gens: &[Vec<u64>]) -> HashSet<Vec<u64>> {
        let mut seen: HashSet<Vec<u64>> = HashSet::from([self.zero_element()]);
        let mut frontier = vec![self.zero_element()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    fn relation_rows(&self) -> Vec<Row> {
        let r = self.ngens();
        (0..r)
            .map(|k| {
                let mut row = vec![BigInt::from(0); r];
                row[k] = BigInt::from(self.invariants[k]);
                row
            })
            .collect()
    }

    /// Structure of the subgroup generated by `gens` (coordinate vectors).
    pub fn subgroup(&self, gens: &[Vec<u64>]) -> FinAbGroup {
        if gens.is_empty() {
            return FinAbGroup::trivial();
        }
        let g: Vec<Row> = gens.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let ker = relative_kernel(&g, &self.relation_rows(), self.ngens());
        let invariants = invariant_factors(&ker, gens.len()).expect("subgroup of a finite group is finite");
        FinAbGroup { invariants, generators: None }
    }

    /// Structure of the quotient by the subgroup generated by `gens`.
    pub fn quotient(&self, gens: &[Vec<i64>]) -> FinAbGroup {
        let mut rows = self.relation_rows();
        rows.extend(to_rows(gens));
        let invariants = invariant_factors(&rows, self.ngens()).expect("quotient of a finite group is finite");
        FinAbGroup { invariants, generators: None }
    }
}

/// Element of `(Z/p^m)[Δ]`, `Δ = ⟨τ⟩` cyclic of order `d | p-1`, with
/// `τ = σ^{(p-1)/d}`. `coeffs[k]` is the coefficient of `τ^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    p: u64,
    m: u32,
    coeffs: Vec<u64>,
}

impl GroupRingElt {
    pub fn zero(p: u64, m: u32, d: u64) -> Self {
        GroupRingElt { p, m, coeffs: vec![0; d as usize] }
    }

    pub fn one(p: u64, m: u32, d: u64) -> Self {
        GroupRingElt::tau_pow(p, m, d, 0)
    }

    /// `τ^k` for any integer `k`.
    pub fn tau_pow(p: u64, m: u32, d: u64, k: i64) -> Self {
        let mut e = GroupRingElt::zero(p, m, d);
        e.coeffs[k.rem_euclid(d as i64) as usize] = 1;
        e
    }

    pub fn modulus(&self) -> u64 {
        pow_u64(self.p, self.m)
    }

    pub fn order_of_delta(&self) -> u64 {
        self.coeffs.len() as u64
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_compat(&self, other: &Self) {
        assert_eq!((self.p, self.m, self.coeffs.len()), (other.p, other.m, other.coeffs.len()));
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compat(other);
        let q = self.modulus();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| (a + b) % q).collect();
        GroupRingElt { coeffs, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compat(other);
        let q = self.modulus();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| (a + q - b) % q).collect();
        GroupRingElt { coeffs, ..*self }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compat(other);
        let q = self.modulus();
        let d = self.coeffs.len();
        let mut coeffs = vec![0u64; d];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = (i + j) % d;
                coeffs[k] = (coeffs[k] + mod_mul(a, b, q)) % q;
            }
        }
        GroupRingElt { coeffs, ..*self }
    }
}

/// Primitive `d`-th root of unity `ω(g)^{(p-1)/d}` mod `p^m`, where `g` is the
/// smallest generator of `(Z/p^m)^×` and `ω` the Teichmüller character.
pub fn delta_root_of_unity(p: u64, m: u32, d: u64) -> Result<u64> {
    if d == 0 || (p - 1) % d != 0 {
        return Err(Error::BadDeltaOrder { d, p });
    }
    let g = primitive_root(p, m)?;
    let omega = teichmuller(g.value, p, m)?;
    Ok(omega.pow((p - 1) / d).value)
}

/// `ε_j = (1/d) Σ_{k<d} ω(g)^{jk(p-1)/d} σ^{-k(p-1)/d}` in `(Z/p^m)[Δ]`.
pub fn idempotent(j: i64, p: u64, m: u32, d: u64) -> Result<GroupRingElt> {
    let zeta = delta_root_of_unity(p, m, d)?;
    let q = pow_u64(p, m);
    let inv_d = mod_inverse(d % q, q).expect("d | p-1 is prime to p");
    let j = j.rem_euclid(d as i64) as u64;
    let mut e = GroupRingElt::zero(p, m, d);
    for k in 0..d {
        let c = mod_mul(mod_pow(zeta, j * k, q), inv_d, q);
        let slot = ((d - k) % d) as usize;
        e.coeffs[slot] = (e.coeffs[slot] + c) % q;
    }
    Ok(e)
}

/// A finite abelian group with an action of a cyclic group of the given
/// order, described by the image of each standard generator under a
/// distinguished generator of the acting group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActedGroup {
    group: FinAbGroup,
    /// `action[k]` = coordinates of the image of generator `k`.
    action: Vec<Vec<u64>>,
    order: u64,
}

impl ActedGroup {
    pub fn new(group: FinAbGroup, action: Vec<Vec<i64>>, order: u64) -> Result<Self> {
        let r = group.ngens();
        if action.len() != r || action.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidAction(format!("action must be a {r}×{r} matrix")));
        }
        if order == 0 {
            return Err(Error::InvalidAction("acting group order must be positive".into()));
        }
        let action: Vec<Vec<u64>> = action.iter().map(|row| group.reduce(row)).collect();
        for (k, row) in action.iter().enumerate() {
            if group.scale(row, group.invariants()[k]).iter().any(|&c| c != 0) {
                return Err(Error::InvalidAction(format!(
                    "image of generator {k} is not killed by its order {}",
                    group.invariants()[k]
                )));
            }
        }
        let acted = ActedGroup { group, action, order };
        for k in 0..r {
            let mut e = acted.group.zero_element();
            e[k] = 1;
            if acted.apply_pow(&e, order) != e {
                return Err(Error::InvalidAction(format!("action does not have order dividing {order}")));
            }
        }
        Ok(acted)
    }

    pub fn trivial_action(group: FinAbGroup, order: u64) -> Self {
        let r = group.ngens();
        let action = (0..r)
            .map(|k| {
                let mut row = vec![0i64; r];
                row[k] = 1;
                row
            })
            .collect();
        ActedGroup::new(group, action, order).expect("identity action is valid")
    }

    /// Cyclic group `Z/n` with the generator acting by multiplication by `u`.
    pub fn scalar(n: u64, u: u64, order: u64) -> Result<Self> {
        let g = FinAbGroup::cyclic(n);
        if g.is_trivial() {
            return Ok(ActedGroup::trivial_action(g, order));
        }
        ActedGroup::new(g, vec![vec![(u % n) as i64]], order)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn action_rows(&self) -> &[Vec<u64>] {
        &self.action
    }

    pub fn acting_order(&self) -> u64 {
        self.order
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let mut y = self.group.zero_element();
        for (k, &c) in x.iter().enumerate() {
            if c != 0 {
                y = self.group.add(&y, &self.group.scale(&self.action[k], c));
            }
        }
        y
    }

    pub fn apply_pow(&self, x: &[u64], t: u64) -> Vec<u64> {
        let mut y = x.to_vec();
        for _ in 0..t {
            y = self.apply(&y);
        }
        y
    }

    /// Smallest `t ≥ 1` with the generator's `t`-th power acting trivially.
    pub fn action_order(&self) -> u64 {
        let gens: Vec<Vec<u64>> = (0..self.group.ngens())
            .map(|k| {
                let mut e = self.group.zero_element();
                e[k] = 1;
                e
            })
            .collect();
        let mut cur = gens.clone();
        for t in 1..=self.order {
            cur = cur.iter().map(|x| self.apply(x)).collect();
            if cur == gens {
                return t;
            }
        }
        self.order
    }

    /// Action of a group-ring element `Σ c_k τ^k`, `τ` the distinguished generator.
    pub fn apply_ring(&self, elt: &GroupRingElt, x: &[u64]) -> Vec<u64> {
        let mut acc = self.group.zero_element();
        let mut power = x.to_vec();
        for &c in elt.coeffs() {
            if c != 0 {
                acc = self.group.add(&acc, &self.group.scale(&power, c));
            }
            power = self.apply(&power);
        }
        acc
    }

    /// The same group with the generator acting by `u · (old action)`, i.e.
    /// the tensor product with a rank-one module on which the generator acts
    /// by `u`.
    pub fn twisted(&self, u: u64) -> Result<Self> {
        let rows = self
            .action
            .iter()
            .map(|row| self.group.scale(row, u).into_iter().map(|c| c as i64).collect())
            .collect();
        ActedGroup::new(self.group.clone(), rows, self.order)
    }

    fn check_precision(&self, p: u64, m: u32) -> Result<()> {
        if !self.group.is_p_group(p) {
            return Err(Error::NotPGroup(p));
        }
        let modulus = pow_u64(p, m);
        if self.group.exponent() > modulus {
            return Err(Error::InsufficientPrecision { exponent: self.group.exponent(), modulus });
        }
        Ok(())
    }

    /// Images of the standard generators under `ε_j` (with `d` the acting order).
    pub fn eigen_generators(&self, j: i64, p: u64, m: u32) -> Result<Vec<Vec<u64>>> {
        self.check_precision(p, m)?;
        let e = idempotent(j, p, m, self.order)?;
        Ok((0..self.group.ngens())
            .map(|k| {
                let mut x = self.group.zero_element();
                x[k] = 1;
                self.apply_ring(&e, &x)
            })
            .collect())
    }
}

/// `ε_j M` as an abstract group, via the image of the idempotent.
pub fn eigenspace(module: &ActedGroup, j: i64, p: u64, m: u32) -> Result<FinAbGroup> {
    let gens = module.eigen_generators(j, p, m)?;
    Ok(module.group.subgroup(&gens))
}

/// Value of the mod-`p^level` cyclotomic character on the distinguished
/// generator of the acting group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterValue {
    pub value: u64,
    pub level: u32,
}

/// `χ(g)^i mod p^n`, checking it does not depend on the lift of `χ(g)` from
/// `Z/p^level`.
pub fn twist_unit(chi: CharacterValue, p: u64, n: u32, i: u64) -> Result<u64> {
    let vp_i = vp(i, p);
    if chi.level + vp_i < n {
        return Err(Error::IllDefinedTwist { level: chi.level, vp_i, n });
    }
    if chi.value % p == 0 {
        return Err(Error::NotUnit { value: chi.value, p });
    }
    Ok(mod_pow(chi.value, i, pow_u64(p, n)))
}

/// `(μ_{p^n}^{⊗i} ⊗ A)_G`: the quotient of `A/p^n` by all
/// `χ(g)^i·g(x) - x`, with `G` cyclic generated by the module's distinguished
/// generator.
pub fn coinvariants_twisted(module: &ActedGroup, p: u64, n: u32, i: u64, chi: CharacterValue) -> Result<FinAbGroup> {
    let u = twist_unit(chi, p, n, i)?;
    let g = &module.group;
    let q = pow_u64(p, n) as i64;
    let r = g.ngens();
    let mut rels: Vec<Vec<i64>> = Vec::with_capacity(2 * r);
    for k in 0..r {
        let mut row = vec![0i64; r];
        row[k] = q;
        rels.push(row);
        let mut row: Vec<i64> = g.scale(&module.action[k], u).into_iter().map(|c| c as i64).collect();
        row[k] -= 1;
        rels.push(row);
    }
    Ok(g.quotient(&rels))
}
