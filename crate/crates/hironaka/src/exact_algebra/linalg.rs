//! Gaussian elimination over a [`Field`].

use super::field::Field;

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in place, drops zero rows
/// and returns the pivot columns.
pub fn rref<K: Field>(rows: &mut Vec<Vec<K>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = x.sub(&y.mul(&factor));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank<K: Field>(rows: &[Vec<K>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of the right kernel {x : A x = 0}.
pub fn nullspace<K: Field>(ctx: &K::Ctx, rows: &[Vec<K>], ncols: usize) -> Vec<Vec<K>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![K::zero(ctx); ncols];
        v[free] = K::one(ctx);
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = m[i][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Solution set of A x = b: a particular solution and a kernel basis, or `None` if inconsistent.
pub fn solve<K: Field>(ctx: &K::Ctx, a: &[Vec<K>], b: &[K], ncols: usize) -> Option<(Vec<K>, Vec<Vec<K>>)> {
    let mut aug: Vec<Vec<K>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![K::zero(ctx); ncols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[i][ncols].clone();
    }
    Some((x, nullspace(ctx, a, ncols)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::Q;
    use num_bigint::BigInt;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let (x, ker) = solve(&(), &a, &[q(3), q(1)], 2).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(ker.is_empty());
        assert!(solve(&(), &[vec![q(1), q(1)], vec![q(2), q(2)]], &[q(1), q(3)], 2).is_none());
    }

    #[test]
    fn kernel_dimension() {
        let a = vec![vec![q(1), q(2), q(3)]];
        assert_eq!(nullspace(&(), &a, 3).len(), 2);
        assert_eq!(rank(&a, 3), 1);
    }
}
