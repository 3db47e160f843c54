use num_traits::Zero;

use crate::model::Rat;

/// Solves `a x = b` exactly by Gauss-Jordan elimination; `None` if singular.
pub fn solve_dense(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for k in col..n {
            if !a[col][k].is_zero() {
                a[col][k] *= &inv;
            }
        }
        b[col] *= &inv;
        let pivot_row = a[col].clone();
        let pivot_b = b[col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for k in col..n {
                if !pivot_row[k].is_zero() {
                    let d = &factor * &pivot_row[k];
                    a[r][k] -= d;
                }
            }
            b[r] -= &factor * &pivot_b;
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rat;

    #[test]
    fn two_by_two() {
        let a = vec![vec![rat(1, 1), rat(-1, 2)], vec![rat(0, 1), rat(1, 1)]];
        let x = solve_dense(a, vec![rat(1, 4), rat(1, 2)]).unwrap();
        assert_eq!(x, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        assert!(solve_dense(a, vec![rat(0, 1), rat(0, 1)]).is_none());
    }
}
