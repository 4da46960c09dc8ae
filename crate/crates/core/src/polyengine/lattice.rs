//! Exact integer lattices: Hermite normal form and integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type IntVec = Vec<BigInt>;

/// Row Hermite normal form of the lattice spanned by `rows`.
///
/// Zero rows are dropped, pivots are positive and entries above each pivot
/// lie in `[0, pivot)`, so two row sets span the same lattice iff their
/// forms agree.
pub fn hermite_normal_form(rows: &[IntVec]) -> Vec<IntVec> {
    let mut m: Vec<IntVec> = rows.to_vec();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let pivots = echelon(&mut m, ncols);
    m.truncate(pivots.len());
    for (r, &c) in pivots.iter().enumerate() {
        for k in 0..r {
            let (q, _) = m[k][c].div_mod_floor(&m[r][c]);
            if !q.is_zero() {
                let row = m[r].clone();
                for (x, y) in m[k].iter_mut().zip(&row) {
                    *x -= &q * y;
                }
            }
        }
    }
    m
}

/// Integer row echelon form restricted to the first `ncols` columns.
/// Returns the pivot column of each leading row; rows below are zero on
/// those columns.
fn echelon(m: &mut [IntVec], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let best = (r..m.len()).filter(|&k| !m[k][c].is_zero()).min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(p) = best else { break };
            m.swap(r, p);
            let mut done = true;
            for k in r + 1..m.len() {
                if m[k][c].is_zero() {
                    continue;
                }
                let q = m[k][c].div_floor(&m[r][c]);
                let row = m[r].clone();
                for (x, y) in m[k].iter_mut().zip(&row) {
                    *x -= &q * y;
                }
                if !m[k][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Z-basis of `{u ∈ Z^N : A u = 0}` for the `m x N` matrix `a`.
pub fn integer_kernel(a: &[IntVec], n: usize) -> Vec<IntVec> {
    let m = a.len();
    let mut aug: Vec<IntVec> = (0..n)
        .map(|j| {
            let mut row: IntVec = a.iter().map(|r| r[j].clone()).collect();
            row.extend((0..n).map(|k| BigInt::from((k == j) as i32)));
            row
        })
        .collect();
    let pivots = echelon(&mut aug, m);
    let basis: Vec<IntVec> = aug[pivots.len()..].iter().map(|r| r[m..].to_vec()).collect();
    hermite_normal_form(&basis)
}

/// Rank of the integer row set over the rationals.
pub fn rank(rows: &[IntVec]) -> usize {
    hermite_normal_form(rows).len()
}

/// `A u` for an integer matrix.
pub fn apply(a: &[IntVec], u: &[BigInt]) -> IntVec {
    a.iter().map(|r| r.iter().zip(u).map(|(x, y)| x * y).sum()).collect()
}

pub fn from_i64(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<IntVec> {
        rows.iter().map(|r| from_i64(r)).collect()
    }

    #[test]
    fn hnf_is_canonical() {
        let a = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let b = mat(&[&[2, 4, 4], &[-4, 10, 16], &[10, -4, -16], &[0, 0, 0]]);
        assert_eq!(hermite_normal_form(&a), hermite_normal_form(&b));
        let h = hermite_normal_form(&a);
        assert!(h.iter().all(|r| r.iter().any(|x| !x.is_zero())));
    }

    #[test]
    fn kernel_of_row_sum() {
        let a = mat(&[&[1, 1, 1]]);
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&a, v).iter().all(|x| x.is_zero()));
        }
        // the standard basis e0-e1, e1-e2 spans the same lattice
        let std = mat(&[&[1, -1, 0], &[0, 1, -1]]);
        assert_eq!(hermite_normal_form(&std), k);
    }

    #[test]
    fn index_two_sublattice_differs() {
        let full = mat(&[&[1, -1, 0], &[0, 1, -1]]);
        let half = mat(&[&[2, -2, 0], &[0, 1, -1]]);
        assert_eq!(rank(&half), 2);
        assert_ne!(hermite_normal_form(&full), hermite_normal_form(&half));
    }
}
