//! Exact integer and rational matrix algebra.

mod matrix;
mod normal_form;

pub use matrix::{int_bilinear, rat_bilinear, rat_left_apply, IntMatrix, RatMatrix};
pub use normal_form::{hnf, hnf_basis, kernel_int, snf, SmithForm};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Determinant by Bareiss fraction-free elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.row_vecs();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Inertia of a real symmetric form: counts of positive, negative and zero
/// eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Self {
            positive,
            negative,
            zero,
        }
    }

    pub fn dimension(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.zero == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.positive == 0 && self.zero == 0
    }

    pub fn is_indefinite(&self) -> bool {
        self.positive > 0 && self.negative > 0
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

/// Exact signature by symmetric Gaussian elimination over the rationals.
/// When every remaining diagonal entry vanishes but an off-diagonal one does
/// not, the hyperbolic 2x2 block is split off as one positive and one
/// negative direction.
pub fn signature(m: &IntMatrix) -> Result<Signature> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sig = Signature::new(0, 0, 0);

    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let i = active.remove(pos);
            let p = a[i][i].clone();
            if p.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            for &r in &active {
                if a[r][i].is_zero() {
                    continue;
                }
                let f = &a[r][i] / &p;
                for &s in &active {
                    let t = &f * &a[i][s];
                    a[r][s] -= t;
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(pi, &i)| {
            active[pi + 1..]
                .iter()
                .find(|&&j| !a[i][j].is_zero())
                .map(|&j| (i, j))
        });
        let Some((i, j)) = pair else {
            sig.zero += active.len();
            break;
        };
        sig.positive += 1;
        sig.negative += 1;
        active.retain(|&k| k != i && k != j);
        let b = a[i][j].clone();
        let mut update = Vec::with_capacity(active.len() * active.len());
        for &r in &active {
            for &s in &active {
                let t = (&a[r][i] * &a[j][s] + &a[r][j] * &a[i][s]) / &b;
                update.push((r, s, t));
            }
        }
        for (r, s, t) in update {
            a[r][s] -= t;
        }
    }
    Ok(sig)
}
