// SPDX-License-Identifier: Apache-2.0

//! Integer row reduction: Smith normal form diagonals and relative kernels.
//! Everything is done over `BigInt`; matrices here are small but elimination
//! can blow intermediate entries past 64 bits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Row = Vec<BigInt>;

pub fn to_rows(rows: &[Vec<i64>]) -> Vec<Row> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Position of the nonzero entry of least absolute value in the block
/// `rows[t..][t..]`.
fn min_entry(a: &[Row], t: usize, ncols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().take(ncols).skip(t) {
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Diagonal of the Smith normal form of the given rows (absolute values,
/// zeros included up to `min(rows, ncols)`).
pub fn smith_diagonal(rows: &[Row], ncols: usize) -> Vec<BigInt> {
    let mut a: Vec<Row> = rows.to_vec();
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let Some((pi, pj)) = min_entry(&a, t, ncols) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            let pivot = a[t][t].clone();
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                for j in t..ncols {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                let (pi, pj) = min_entry(&a, t, ncols).expect("nonzero block");
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            // pivot must divide the remaining block
            let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !a[i][j].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    for j in t..ncols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    while diag.len() < nrows.min(ncols) {
        diag.push(BigInt::zero());
    }
    diag
}

/// Invariant factors (> 1, ascending) of `Z^ncols / rowspace(rows)`, or
/// `None` when the quotient is infinite.
pub fn invariant_factors(rows: &[Row], ncols: usize) -> Option<Vec<u64>> {
    let diag = smith_diagonal(rows, ncols);
    if diag.len() < ncols || diag.iter().any(|d| d.is_zero()) {
        return None;
    }
    let mut out: Vec<u64> = diag
        .into_iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().expect("invariant factor exceeds u64"))
        .collect();
    out.sort_unstable();
    Some(out)
}

/// Lattice of coefficient vectors `c ∈ Z^s` with `Σ c_l v_l ∈ rowspace(base)`,
/// where `v_1..v_s` are the rows of `gens`. Returned as a generating set.
pub fn relative_kernel(gens: &[Row], base: &[Row], ncols: usize) -> Vec<Row> {
    let s = gens.len();
    let width = ncols + s;
    let mut a: Vec<Row> = Vec::with_capacity(s + base.len());
    for (l, g) in gens.iter().enumerate() {
        let mut row = g.clone();
        row.resize(width, BigInt::zero());
        row[ncols + l] = BigInt::one();
        a.push(row);
    }
    for b in base {
        let mut row = b.clone();
        row.resize(width, BigInt::zero());
        a.push(row);
    }
    let mut pivot_row = 0;
    for col in 0..ncols {
        loop {
            // row with smallest nonzero entry in this column at or below pivot_row
            let best = (pivot_row..a.len())
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()));
            let Some(best) = best else { break };
            a.swap(pivot_row, best);
            let pivot = a[pivot_row][col].clone();
            let mut cleared = true;
            for i in pivot_row + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&pivot);
                for j in col..width {
                    let v = &a[pivot_row][j] * &q;
                    a[i][j] -= v;
                }
                cleared &= a[i][col].is_zero();
            }
            if cleared {
                pivot_row += 1;
                break;
            }
        }
    }
    a.into_iter()
        .skip(pivot_row)
        .map(|row| row[ncols..].to_vec())
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(rows: &[Vec<i64>], n: usize) -> Option<Vec<u64>> {
        invariant_factors(&to_rows(rows), n)
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(inv(&[vec![2, 0], vec![0, 3]], 2), Some(vec![6]));
        assert_eq!(inv(&[vec![4, 0], vec![0, 6]], 2), Some(vec![2, 12]));
        assert_eq!(inv(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3), Some(vec![2, 6, 12]));
        assert_eq!(inv(&[vec![1, 2]], 2), None);
        assert_eq!(inv(&[vec![3, 1], vec![0, 1]], 2), Some(vec![3]));
        assert_eq!(inv(&[], 0), Some(vec![]));
    }

    #[test]
    fn kernel_of_cyclic_generator() {
        // In Z/12, the subgroup generated by 8 has order 3: kernel is 3Z.
        let ker = relative_kernel(&to_rows(&[vec![8]]), &to_rows(&[vec![12]]), 1);
        assert_eq!(invariant_factors(&ker, 1), Some(vec![3]));
    }
}
