// SPDX-License-Identifier: Apache-2.0

//! `keven check`: seeded spot checks of identities that hold for every input.

use std::fmt::Write as _;

use keven_core::abgroup::{delta_root_of_unity, eigenspace};
use keven_core::arith::{divisors, mod_pow, pow_u64};
use keven_core::qforms::{canonical, is_fundamental, ClassGroup};
use keven_core::{ActedGroup, FinAbGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) fn run(seed: u64, trials: usize) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = format!("seed {seed}\n");
    rank_identity(&mut rng, trials)?;
    writeln!(log, "rank identity: {trials} groups ok").unwrap();
    associativity(&mut rng, trials)?;
    writeln!(log, "composition associativity: {trials} triples ok").unwrap();
    eigen_orders(&mut rng, trials)?;
    writeln!(log, "eigenspace orders: {trials} modules ok").unwrap();
    Ok(log)
}

fn rank_identity(rng: &mut ChaCha8Rng, trials: usize) -> Result<(), String> {
    for _ in 0..trials {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=4);
        let orders: Vec<u64> = (0..rng.gen_range(0..=4)).map(|_| pow_u64(p, rng.gen_range(0..=5)) * rng.gen_range(1..=12)).collect();
        let g = FinAbGroup::from_cyclic_orders(&orders);
        if g.rank_pn(p, n) != g.mod_pn(p, n).rank_pn(p, n) {
            return Err(format!("rank identity fails for {g}, p = {p}, n = {n}"));
        }
    }
    Ok(())
}

fn associativity(rng: &mut ChaCha8Rng, trials: usize) -> Result<(), String> {
    for _ in 0..trials {
        let d = loop {
            let d = rng.gen_range(-2000i64..2000);
            if is_fundamental(d) {
                break d;
            }
        };
        let classes = ClassGroup::compute(d).map_err(|e| e.to_string())?.classes();
        let f = classes[rng.gen_range(0..classes.len())];
        let g = classes[rng.gen_range(0..classes.len())];
        let h = classes[rng.gen_range(0..classes.len())];
        let left = canonical(canonical(f.compose(&g)).compose(&h));
        let right = canonical(f.compose(&canonical(g.compose(&h))));
        if left != right {
            return Err(format!("composition not associative for D = {d}: {f} {g} {h}"));
        }
    }
    Ok(())
}

/// `Z/p^e` with `τ` acting by `ζ^t` lies entirely in the `t`-eigenspace.
fn eigen_orders(rng: &mut ChaCha8Rng, trials: usize) -> Result<(), String> {
    for _ in 0..trials {
        let p = [3u64, 5, 7, 13][rng.gen_range(0..4)];
        let ds = divisors(p - 1);
        let d = ds[rng.gen_range(0..ds.len())];
        let e = rng.gen_range(1..=3u32);
        let t = rng.gen_range(0..d);
        let zeta = delta_root_of_unity(p, e, d).map_err(|e| e.to_string())?;
        let q = pow_u64(p, e);
        let module = ActedGroup::scalar(q, mod_pow(zeta, t, q), d).map_err(|e| e.to_string())?;
        for j in 0..d {
            let order = eigenspace(&module, j as i64, p, e).map_err(|e| e.to_string())?.order();
            let expected = if j == t { q } else { 1 };
            if order != expected {
                return Err(format!("|ε_{j} M| = {order}, expected {expected} (p = {p}, d = {d}, t = {t})"));
            }
        }
    }
    Ok(())
}
