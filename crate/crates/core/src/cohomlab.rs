// SPDX-License-Identifier: Apache-2.0

//! Brute-force cohomology of finite cyclic groups acting on small modules,
//! used to check twisting and cohomological-triviality statements on
//! explicit models.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::abgroup::{delta_root_of_unity, idempotent, ActedGroup};
use crate::arith::{check_odd_prime, divisors, mod_pow, pow_u64, primitive_root, vp};
use crate::error::{Error, Result};

/// `Z/p^n` with a cyclic group of order `order` whose generator acts by `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicModule {
    p: u64,
    n: u32,
    order: u64,
    u: u64,
}

impl CyclicModule {
    pub fn new(p: u64, n: u32, order: u64, u: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let q = pow_u64(p, n);
        if order == 0 || u % p == 0 {
            return Err(Error::InvalidAction(format!("u = {u} is not a unit mod {q}")));
        }
        let u = u % q;
        if mod_pow(u, order, q) != 1 {
            return Err(Error::InvalidAction(format!("{u}^{order} ≢ 1 mod {q}")));
        }
        Ok(CyclicModule { p, n, order, u })
    }

    pub fn modulus(&self) -> u64 {
        pow_u64(self.p, self.n)
    }

    /// The norm element `Σ_{k<N} u^k` as a scalar mod `p^n`.
    fn norm_scalar(&self) -> u64 {
        let q = self.modulus();
        let mut acc = 0u64;
        let mut uk = 1u64;
        for _ in 0..self.order {
            acc = (acc + uk) % q;
            uk = (uk as u128 * self.u as u128 % q as u128) as u64;
        }
        acc
    }
}

fn scalar_kernel_image(c: u64, q: u64) -> (usize, usize) {
    let mut kernel = 0usize;
    let mut image = HashSet::new();
    for x in 0..q {
        let y = (c as u128 * x as u128 % q as u128) as u64;
        if y == 0 {
            kernel += 1;
        }
        image.insert(y);
    }
    (kernel, image.len())
}

/// `(|H⁰|, |H¹|, |H²|)`.
pub type CohomologyOrders = (u64, u64, u64);

/// Orders `(|H⁰|, |H¹|, |H²|)` by counting kernels and images in `Z/p^n`.
pub fn cyclic_cohomology(m: &CyclicModule) -> CohomologyOrders {
    let q = m.modulus();
    let (ker_d, im_d) = scalar_kernel_image((m.u + q - 1) % q, q);
    let (ker_n, im_n) = scalar_kernel_image(m.norm_scalar(), q);
    let h0 = ker_d as u64;
    let h1 = (ker_n / im_d) as u64;
    let h2 = (ker_d / im_n) as u64;
    (h0, h1, h2)
}

/// Cohomology of `Z/p^n` under `G = (Z/p^level)^×`, the generator `g` acting
/// by `g̃^i` for a lift `g̃`, for every subgroup `H ⊆ G`. Entries are
/// `(|H|, (h0, h1, h2))`. Errors if `g̃^i mod p^n` depends on the lift.
pub fn twisted_unit_cohomology(p: u64, i: u64, n: u32, level: u32) -> Result<Vec<(u64, CohomologyOrders)>> {
    check_odd_prime(p)?;
    if level == 0 || level > n {
        return Err(Error::IllDefinedTwist { level, vp_i: vp(i, p), n });
    }
    let q = pow_u64(p, n);
    let step = pow_u64(p, level);
    let g = primitive_root(p, level)?;
    let u = mod_pow(g.value, i, q);
    for k in 0..pow_u64(p, n - level) {
        if mod_pow(g.value + k * step, i, q) != u {
            return Err(Error::IllDefinedTwist { level, vp_i: vp(i, p), n });
        }
    }
    let order = g.group_order();
    let mut out = Vec::new();
    for e in divisors(order) {
        let sub_order = order / e;
        let module = CyclicModule::new(p, n, sub_order, mod_pow(u, e, q))?;
        out.push((sub_order, cyclic_cohomology(&module)));
    }
    Ok(out)
}

/// Whether `μ_{p^n}^{⊗i}` is cohomologically trivial for every subgroup of
/// `G = (Z/p^{n-b})^×`, the Galois group of `Q(μ_{p^{n-b}})/Q`.
pub fn verify_coh_trivial(p: u64, i: u64, n: u32, a: u32, b: u32) -> Result<bool> {
    if a != 1 {
        return Err(Error::Precondition("the model is Q(μ_{p^k})/Q, which has a = 1".into()));
    }
    if vp(i, p) != b {
        return Err(Error::Precondition(format!("b = {b} but v_{p}({i}) = {}", vp(i, p))));
    }
    if n <= a + b {
        return Err(Error::WrongRegime { n, ab: a + b });
    }
    let table = twisted_unit_cohomology(p, i, n, n - b)?;
    Ok(table.iter().all(|&(_, (_, h1, h2))| h1 == 1 && h2 == 1))
}

fn image_set(module: &ActedGroup, j: i64, p: u64, m: u32) -> Result<HashSet<Vec<u64>>> {
    let e = idempotent(j, p, m, module.acting_order())?;
    Ok(module.group().elements().iter().map(|x| module.apply_ring(&e, x)).collect())
}

/// Element-level check of `ε_{j+1}(μ_{p^m} ⊗ M) = μ_{p^m} ⊗ ε_j M`, with the
/// distinguished generator of `Δ` acting on `μ_{p^m}` by `ω(g)^{(p-1)/d}`.
pub fn verify_mu_twist(p: u64, m: u32, d: u64, j: i64, module: &ActedGroup) -> Result<bool> {
    if module.acting_order() != d {
        return Err(Error::InvalidAction(format!("acting order {} differs from d = {d}", module.acting_order())));
    }
    let zeta = delta_root_of_unity(p, m, d)?;
    // precision and p-group checks
    module.eigen_generators(j, p, m)?;
    let tensor = module.twisted(zeta)?;
    Ok(image_set(&tensor, j + 1, p, m)? == image_set(module, j, p, m)?)
}

/// Whether the norm `M_G → M^G` is an isomorphism, for `|G|` prime to `p`.
pub fn verify_norm_iso(module: &ActedGroup, p: u64) -> Result<bool> {
    let order = module.acting_order();
    if order % p == 0 {
        return Err(Error::NormIsoNotExpected { order, p });
    }
    let g = module.group();
    let elements = g.elements();
    let norm = |x: &Vec<u64>| {
        let mut acc = g.zero_element();
        let mut y = x.clone();
        for _ in 0..order {
            acc = g.add(&acc, &y);
            y = module.apply(&y);
        }
        acc
    };
    let augmentation: HashSet<Vec<u64>> = elements.iter().map(|x| g.add(&module.apply(x), &g.neg(x))).collect();
    let invariants = elements.iter().filter(|x| module.apply(x) == **x).count();
    let kernel: HashSet<Vec<u64>> = elements.iter().filter(|x| norm(x) == g.zero_element()).cloned().collect();
    let coinvariants = elements.len() / augmentation.len();
    Ok(coinvariants == invariants && kernel == augmentation)
}
