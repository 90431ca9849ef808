use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Result of a Smith normal form computation: `left · M · right = diag`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub diag: IntMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries `d1 | d2 | ... | dr`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.diag.rows().min(self.diag.cols());
        (0..k)
            .map(|i| self.diag[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Index of the nonzero entry of smallest absolute value in `column` among
/// rows `from..`, lowest row index on ties.
fn min_abs_pivot(m: &IntMatrix, column: usize, from: usize) -> Option<usize> {
    let mut best: Option<(usize, BigInt)> = None;
    for i in from..m.rows() {
        let v = &m[(i, column)];
        if v.is_zero() {
            continue;
        }
        let a = v.abs();
        match &best {
            Some((_, b)) if *b <= a => {}
            _ => best = Some((i, a)),
        }
    }
    best.map(|(i, _)| i)
}

/// Row-style Hermite normal form. Returns `(H, U)` with `H = U·M`, `U`
/// unimodular, `H` in row echelon form with positive pivots and the entries
/// above each pivot reduced into `[0, pivot)`. Zero rows collect at the
/// bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..m.cols() {
        if r == rows {
            break;
        }
        loop {
            let Some(p) = min_abs_pivot(&h, c, r) else {
                break;
            };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                h.sub_row_multiple(i, r, &q);
                u.sub_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            h.sub_row_multiple(i, r, &q);
            u.sub_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// HNF with zero rows removed: a canonical basis of the row lattice.
pub fn hnf_basis(m: &IntMatrix) -> IntMatrix {
    hnf(m).0.nonzero_rows()
}

/// Smith normal form with accumulated unimodular transforms.
pub fn snf(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize, BigInt)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = &a[(i, j)];
                    if v.is_zero() {
                        continue;
                    }
                    let av = v.abs();
                    if best.as_ref().is_none_or(|(_, _, b)| av < *b) {
                        best = Some((i, j, av));
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                a.sub_row_multiple(i, t, &q);
                left.sub_row_multiple(i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                a.sub_col_multiple(j, t, &q);
                right.sub_col_multiple(j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block
            let pivot = a[(t, t)].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    a.sub_row_multiple(t, i, &minus_one);
                    left.sub_row_multiple(t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }
    SmithForm {
        left,
        right,
        diag: a,
    }
}

/// Basis (as rows, in HNF) of the left integer kernel `{v : v·M = 0}`.
/// The result is saturated in `Z^rows`.
pub fn kernel_int(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(m);
    let rank = (0..h.rows())
        .take_while(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count();
    let k = u.select_rows(rank..h.rows());
    if k.rows() == 0 {
        return IntMatrix::zeros(0, m.rows());
    }
    hnf_basis(&k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det;

    fn im(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn assert_unimodular(u: &IntMatrix) {
        let d = det(u).unwrap();
        assert!(d == BigInt::from(1) || d == BigInt::from(-1), "det {d}");
    }

    #[test]
    fn hnf_of_swap_matrix() {
        let m = im(&[vec![0, 1], vec![1, 0]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, m);
    }

    #[test]
    fn hnf_of_identity_is_identity() {
        let (h, u) = hnf(&IntMatrix::identity(5));
        assert_eq!(h, IntMatrix::identity(5));
        assert_eq!(u, IntMatrix::identity(5));
    }

    #[test]
    fn hnf_reduces_above_pivot() {
        let m = im(&[vec![2, 4], vec![0, 3]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, im(&[vec![2, 1], vec![0, 3]]));
        assert_eq!(u.mul(&m).unwrap(), h);
        assert_unimodular(&u);
    }

    #[test]
    fn hnf_of_rank_deficient_pushes_zero_rows_down() {
        let m = im(&[vec![2, 4, 6], vec![1, 2, 3], vec![0, 0, 5]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, im(&[vec![1, 2, 3], vec![0, 0, 5], vec![0, 0, 0]]));
        assert_eq!(u.mul(&m).unwrap(), h);
        assert_unimodular(&u);
    }

    #[test]
    fn snf_reorders_for_divisibility() {
        let s = snf(&IntMatrix::diagonal(&[4, 2]));
        assert_eq!(s.diag, IntMatrix::diagonal(&[2, 4]));
    }

    #[test]
    fn snf_of_a2_gram() {
        let m = im(&[vec![2, 1], vec![1, 2]]);
        let s = snf(&m);
        assert_eq!(s.diag, IntMatrix::diagonal(&[1, 3]));
        assert_eq!(s.left.mul(&m).unwrap().mul(&s.right).unwrap(), s.diag);
    }

    #[test]
    fn snf_fixes_non_dividing_diagonal() {
        let m = IntMatrix::diagonal(&[6, 4]);
        let s = snf(&m);
        assert_eq!(s.diag, IntMatrix::diagonal(&[2, 12]));
        assert_unimodular(&s.left);
        assert_unimodular(&s.right);
    }

    #[test]
    fn snf_of_zero_matrix_is_trivial() {
        let s = snf(&IntMatrix::zeros(2, 3));
        assert!(s.diag.is_zero());
        assert_eq!(s.left, IntMatrix::identity(2));
        assert_eq!(s.right, IntMatrix::identity(3));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_int(&im(&[vec![1], vec![1]])), im(&[vec![1, -1]]));
        assert_eq!(kernel_int(&im(&[vec![2], vec![4]])), im(&[vec![2, -1]]));
        let k = kernel_int(&im(&[vec![2, 1], vec![1, 1]]));
        assert_eq!(k.rows(), 0);
    }

    #[test]
    fn kernel_of_empty_column_matrix_is_everything() {
        let k = kernel_int(&IntMatrix::zeros(3, 0));
        assert_eq!(k, IntMatrix::identity(3));
    }
}
