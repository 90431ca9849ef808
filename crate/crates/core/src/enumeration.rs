//! Exact short-vector enumeration in definite lattices: integral LLL on the
//! Gram matrix followed by Fincke–Pohst tree search.
//!
//! Everything runs in integer arithmetic. Gram–Schmidt data is kept in the
//! fraction-free form of the integral LLL algorithm (`d_i` = leading
//! principal minors, `λ_ij = d_j μ_ij`), so no bound is ever rounded.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::IntMatrix;

/// Lovász constant δ = 99/100.
const DELTA_NUM: i64 = 99;
const DELTA_DEN: i64 = 100;

/// An LLL-reduced basis. `transform · original · transformᵀ = gram`, in the
/// caller's sign convention.
#[derive(Clone, Debug)]
pub struct ReducedBasis {
    pub gram: IntMatrix,
    pub transform: IntMatrix,
    /// The input was negative definite and was negated for reduction.
    pub negated: bool,
}

impl ReducedBasis {
    /// Positive-definite Gram used internally.
    fn positive_gram(&self) -> IntMatrix {
        if self.negated {
            self.gram.neg()
        } else {
            self.gram.clone()
        }
    }
}

/// Fraction-free Gram–Schmidt data: `d[0] = 1`, `d[i]` the `i`-th leading
/// principal minor, `lambda[i][j]` for `j < i` (1-indexed).
#[derive(Clone, Debug)]
struct IntegralGs {
    d: Vec<BigInt>,
    lambda: Vec<Vec<BigInt>>,
}

fn gs_row(gram: &IntMatrix, gs: &mut IntegralGs, k: usize) -> Result<()> {
    for j in 1..=k {
        let mut u = gram[(k - 1, j - 1)].clone();
        for i in 1..j {
            u = (&gs.d[i] * &u - &gs.lambda[k][i] * &gs.lambda[j][i]) / &gs.d[i - 1];
        }
        if j < k {
            gs.lambda[k][j] = u;
        } else {
            if !u.is_positive() {
                return Err(Error::Indefinite);
            }
            gs.d[k] = u;
        }
    }
    Ok(())
}

fn integral_gram_schmidt(gram: &IntMatrix) -> Result<IntegralGs> {
    let n = gram.rows();
    let mut gs = IntegralGs {
        d: vec![BigInt::one(); n + 1],
        lambda: vec![vec![BigInt::zero(); n + 1]; n + 1],
    };
    for k in 1..=n {
        gs_row(gram, &mut gs, k)?;
    }
    Ok(gs)
}

/// Sign normalisation: `Ok(false)` for positive definite, `Ok(true)` for
/// negative definite.
fn definiteness(l: &Lattice) -> Result<bool> {
    let s = l.signature();
    if s.is_positive_definite() {
        Ok(false)
    } else if s.is_negative_definite() {
        Ok(true)
    } else {
        Err(Error::Indefinite)
    }
}

/// Integral LLL (Cohen, Alg. 2.6.7) on a positive-definite Gram matrix.
fn lll_positive(g: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let n = g.rows();
    let mut gram = g.clone();
    let mut h = IntMatrix::identity(n);
    if n <= 1 {
        return Ok((gram, h));
    }
    let mut gs = IntegralGs {
        d: vec![BigInt::one(); n + 1],
        lambda: vec![vec![BigInt::zero(); n + 1]; n + 1],
    };
    gs.d[1] = gram[(0, 0)].clone();
    if !gs.d[1].is_positive() {
        return Err(Error::Indefinite);
    }
    let (dn, dd) = (BigInt::from(DELTA_NUM), BigInt::from(DELTA_DEN));
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            gs_row(&gram, &mut gs, k)?;
        }
        size_reduce(&mut gram, &mut h, &mut gs, k, k - 1);
        let lhs = &dd * &gs.d[k] * &gs.d[k - 2];
        let lam = &gs.lambda[k][k - 1];
        let rhs = &dn * &gs.d[k - 1] * &gs.d[k - 1] - &dd * lam * lam;
        if lhs < rhs {
            swap(&mut gram, &mut h, &mut gs, k, kmax);
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                size_reduce(&mut gram, &mut h, &mut gs, k, l);
            }
            k += 1;
        }
    }
    Ok((gram, h))
}

fn size_reduce(gram: &mut IntMatrix, h: &mut IntMatrix, gs: &mut IntegralGs, k: usize, l: usize) {
    let lam = gs.lambda[k][l].clone();
    let dl = gs.d[l].clone();
    if (&lam * BigInt::from(2)).abs() <= dl {
        return;
    }
    // nearest integer to λ/d
    let two = BigInt::from(2);
    let q = (&lam * &two + &dl).div_floor(&(&dl * &two));
    h.sub_row_multiple(k - 1, l - 1, &q);
    gram.sub_row_multiple(k - 1, l - 1, &q);
    gram.sub_col_multiple(k - 1, l - 1, &q);
    gs.lambda[k][l] = lam - &q * &dl;
    for i in 1..l {
        let t = &q * &gs.lambda[l][i];
        gs.lambda[k][i] -= t;
    }
}

fn swap(gram: &mut IntMatrix, h: &mut IntMatrix, gs: &mut IntegralGs, k: usize, kmax: usize) {
    h.swap_rows(k - 1, k - 2);
    gram.swap_rows(k - 1, k - 2);
    gram.swap_cols(k - 1, k - 2);
    for j in 1..k - 1 {
        let t = std::mem::take(&mut gs.lambda[k][j]);
        gs.lambda[k][j] = std::mem::replace(&mut gs.lambda[k - 1][j], t);
    }
    let lam = gs.lambda[k][k - 1].clone();
    let b = (&gs.d[k - 2] * &gs.d[k] + &lam * &lam) / &gs.d[k - 1];
    for i in k + 1..=kmax {
        let t = gs.lambda[i][k].clone();
        gs.lambda[i][k] = (&gs.d[k] * &gs.lambda[i][k - 1] - &lam * &t) / &gs.d[k - 1];
        gs.lambda[i][k - 1] = (&b * &t + &lam * &gs.lambda[i][k]) / &gs.d[k];
    }
    gs.d[k - 1] = b;
}

/// LLL-reduces a definite lattice (δ = 99/100). Negative-definite input is
/// negated for the reduction; the returned Gram keeps the caller's sign.
pub fn lll_reduce(l: &Lattice) -> Result<ReducedBasis> {
    if l.rank() == 0 {
        return Ok(ReducedBasis {
            gram: IntMatrix::zeros(0, 0),
            transform: IntMatrix::zeros(0, 0),
            negated: false,
        });
    }
    let negated = definiteness(l)?;
    let g = if negated {
        l.gram().neg()
    } else {
        l.gram().clone()
    };
    let (gram, transform) = lll_positive(&g)?;
    Ok(ReducedBasis {
        gram: if negated { gram.neg() } else { gram },
        transform,
        negated,
    })
}

/// Checks the size-reduction and Lovász conditions exactly.
pub fn is_lll_reduced(reduced: &ReducedBasis) -> bool {
    let g = reduced.positive_gram();
    let n = g.rows();
    let Ok(gs) = integral_gram_schmidt(&g) else {
        return false;
    };
    for i in 2..=n {
        for j in 1..i {
            if (&gs.lambda[i][j] * BigInt::from(2)).abs() > gs.d[j] {
                return false;
            }
        }
        let lam = &gs.lambda[i][i - 1];
        let lhs = BigInt::from(DELTA_DEN) * &gs.d[i] * &gs.d[i - 2];
        let rhs = BigInt::from(DELTA_NUM) * &gs.d[i - 1] * &gs.d[i - 1]
            - BigInt::from(DELTA_DEN) * lam * lam;
        if lhs < rhs {
            return false;
        }
    }
    true
}

/// Precomputed data for Fincke–Pohst on a positive-definite Gram matrix.
///
/// With `A_j = Σ_{i>j} λ_ij x_i`, the norm is
/// `Σ_j (d_j x_j + A_j)² / (d_j d_{j-1})`; scaling by
/// `W = lcm_j(d_j d_{j-1})` makes every term an integer `ω_j (d_j x_j + A_j)²`.
struct Enumerator {
    n: usize,
    gs: IntegralGs,
    omega: Vec<BigInt>,
    scale: BigInt,
}

impl Enumerator {
    fn new(gram: &IntMatrix) -> Result<Self> {
        let n = gram.rows();
        let gs = integral_gram_schmidt(gram)?;
        let scale = (1..=n).fold(BigInt::one(), |acc, j| acc.lcm(&(&gs.d[j] * &gs.d[j - 1])));
        let mut omega = vec![BigInt::zero(); n + 1];
        for j in 1..=n {
            omega[j] = &scale / (&gs.d[j] * &gs.d[j - 1]);
        }
        Ok(Self {
            n,
            gs,
            omega,
            scale,
        })
    }

    fn center_numerator(&self, j: usize, x: &[i64]) -> BigInt {
        let mut a = BigInt::zero();
        for i in j + 1..=self.n {
            if x[i] != 0 {
                a += &self.gs.lambda[i][j] * x[i];
            }
        }
        a
    }

    /// Admissible values of `x_j` given the remaining scaled budget, ordered
    /// by absolute value with positive values first.
    fn level_values(&self, j: usize, x: &[i64], budget: &BigInt, zero_prefix: bool) -> Vec<i64> {
        let a = self.center_numerator(j, x);
        let s = (budget / &self.omega[j]).sqrt();
        let dj = &self.gs.d[j];
        let lo = (-&s - &a).div_ceil(dj);
        let hi = (&s - &a).div_floor(dj);
        let lo: i64 = if zero_prefix {
            lo.max(BigInt::zero())
        } else {
            lo
        }
        .try_into()
        .expect("coordinate bound fits in i64");
        let hi: i64 = hi.try_into().expect("coordinate bound fits in i64");
        let mut vals: Vec<i64> = (lo..=hi).collect();
        vals.sort_by_key(|&v| (v.unsigned_abs(), v < 0));
        vals
    }

    fn term(&self, j: usize, x: &[i64]) -> BigInt {
        let t = &self.gs.d[j] * x[j] + self.center_numerator(j, x);
        &self.omega[j] * &t * &t
    }

    /// All nonzero `x` (one of each `±x`, last nonzero coordinate positive)
    /// with `xᵀ G x ≤ bound`, in the reduced coordinates.
    fn run(&self, bound: &BigInt) -> Vec<Vec<i64>> {
        if self.n == 0 || bound.is_negative() {
            return Vec::new();
        }
        let total = bound * &self.scale;
        let x = vec![0i64; self.n + 1];
        let top = self.level_values(self.n, &x, &total, true);
        let mut found: Vec<Vec<i64>> = top
            .into_par_iter()
            .flat_map_iter(|v| {
                let mut x = vec![0i64; self.n + 1];
                x[self.n] = v;
                let rem = &total - self.term(self.n, &x);
                let mut out = Vec::new();
                if !rem.is_negative() {
                    self.descend(self.n - 1, &mut x, rem, v == 0, &mut out);
                }
                out
            })
            .collect();
        found.sort();
        found
    }

    fn descend(
        &self,
        j: usize,
        x: &mut Vec<i64>,
        budget: BigInt,
        zero_prefix: bool,
        out: &mut Vec<Vec<i64>>,
    ) {
        if j == 0 {
            if !zero_prefix {
                out.push(x[1..].to_vec());
            }
            return;
        }
        for v in self.level_values(j, x, &budget, zero_prefix) {
            x[j] = v;
            let rem = &budget - self.term(j, x);
            if rem.is_negative() {
                continue;
            }
            self.descend(j - 1, x, rem, zero_prefix && v == 0, out);
        }
        x[j] = 0;
    }
}

/// One enumerated vector, in the coordinates of the input lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVector {
    pub coords: Vec<BigInt>,
    pub norm: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumStatus {
    Complete,
    /// The requested norm has the wrong sign for this lattice; nothing can match.
    SignMismatch,
}

/// Vectors listed up to sign (first nonzero coordinate positive), sorted
/// lexicographically, with per-norm counts.
#[derive(Clone, Debug)]
pub struct ShortVectorReport {
    pub bound: BigInt,
    pub vectors: Vec<ShortVector>,
    pub counts: BTreeMap<BigInt, usize>,
    pub status: EnumStatus,
}

impl ShortVectorReport {
    fn empty(bound: BigInt, status: EnumStatus) -> Self {
        Self {
            bound,
            vectors: Vec::new(),
            counts: BTreeMap::new(),
            status,
        }
    }

    /// Number of vectors counting both signs.
    pub fn total_with_signs(&self) -> usize {
        2 * self.vectors.len()
    }
}

fn canonical_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => v.into_iter().map(|c| -c).collect(),
        _ => v,
    }
}

/// Every nonzero vector with `0 < |⟨v,v⟩| ≤ |bound|`, up to sign. `bound`
/// uses the lattice's own sign convention.
pub fn short_vectors(l: &Lattice, bound: &BigInt) -> Result<ShortVectorReport> {
    if l.rank() == 0 {
        return Ok(ShortVectorReport::empty(
            bound.clone(),
            EnumStatus::Complete,
        ));
    }
    let reduced = lll_reduce(l)?;
    if (reduced.negated && bound.is_positive()) || (!reduced.negated && bound.is_negative()) {
        return Ok(ShortVectorReport::empty(
            bound.clone(),
            EnumStatus::SignMismatch,
        ));
    }
    let enumerator = Enumerator::new(&reduced.positive_gram())?;
    let found = enumerator.run(&bound.abs());
    let mut vectors: Vec<ShortVector> = found
        .into_iter()
        .map(|x| {
            let xb: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
            let coords = canonical_sign(reduced.transform.left_apply(&xb));
            let norm = l.norm(&coords);
            ShortVector { coords, norm }
        })
        .collect();
    vectors.sort_by(|a, b| a.coords.cmp(&b.coords));
    let mut counts = BTreeMap::new();
    for v in &vectors {
        *counts.entry(v.norm.clone()).or_insert(0) += 1;
    }
    Ok(ShortVectorReport {
        bound: bound.clone(),
        vectors,
        counts,
        status: EnumStatus::Complete,
    })
}

/// All vectors of norm exactly `n`, up to sign.
pub fn vectors_with_norm(l: &Lattice, n: &BigInt) -> Result<ShortVectorReport> {
    if n.is_zero() {
        return Err(Error::InvalidParameter("norm must be nonzero".into()));
    }
    let mut report = short_vectors(l, n)?;
    report.vectors.retain(|v| &v.norm == n);
    report.counts.retain(|k, _| k == n);
    Ok(report)
}

/// Minimal `|⟨v,v⟩|` over nonzero vectors.
pub fn min_norm(l: &Lattice) -> Result<BigInt> {
    if l.rank() == 0 {
        return Err(Error::EmptyLattice);
    }
    let reduced = lll_reduce(l)?;
    let g = reduced.positive_gram();
    let bound = (0..g.rows())
        .map(|i| g[(i, i)].clone())
        .min()
        .expect("rank >= 1");
    let enumerator = Enumerator::new(&g)?;
    let found = enumerator.run(&bound);
    found
        .iter()
        .map(|x| {
            let xb: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
            crate::linalg::int_bilinear(&xb, &g, &xb)
        })
        .min()
        .ok_or_else(|| Error::SelfCheck("enumeration missed a basis vector".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{root_lattice, RootKind};
    use crate::linalg::det;

    #[test]
    fn reduced_diagonal_is_untouched() {
        let l = Lattice::from_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        let r = lll_reduce(&l).unwrap();
        assert_eq!(r.transform, IntMatrix::identity(2));
        assert_eq!(&r.gram, l.gram());
    }

    #[test]
    fn lagrange_reduction_by_hand() {
        // [[2,3],[3,6]]: round(3/2) = 2, b2 - 2 b1 has norm 6 - 12 + 8 = 2
        // and ⟨b1, b2 - 2 b1⟩ = 3 - 4 = -1
        let l = Lattice::from_rows(&[vec![2, 3], vec![3, 6]]).unwrap();
        let r = lll_reduce(&l).unwrap();
        assert_eq!(
            r.gram,
            IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]).unwrap()
        );
        assert_eq!(det(&r.gram).unwrap(), BigInt::from(3));
        assert_eq!(l.gram().congruent(&r.transform).unwrap(), r.gram);
        assert!(is_lll_reduced(&r));
    }

    #[test]
    fn negative_definite_keeps_sign() {
        let e8 = root_lattice(RootKind::E8).unwrap();
        let r = lll_reduce(&e8).unwrap();
        assert!(r.negated);
        assert_eq!(e8.gram().congruent(&r.transform).unwrap(), r.gram);
        assert!(is_lll_reduced(&r));
    }

    #[test]
    fn indefinite_rejected() {
        let u = root_lattice(RootKind::U).unwrap();
        assert!(matches!(lll_reduce(&u), Err(Error::Indefinite)));
        assert!(matches!(
            short_vectors(&u, &BigInt::from(2)),
            Err(Error::Indefinite)
        ));
    }

    #[test]
    fn a2_has_three_root_pairs() {
        let a2 = root_lattice(RootKind::A(2)).unwrap();
        let r = vectors_with_norm(&a2, &BigInt::from(-2)).unwrap();
        assert_eq!(r.vectors.len(), 3);
        assert_eq!(r.total_with_signs(), 6);
        assert!(r.vectors.iter().all(|v| v.norm == BigInt::from(-2)));
    }

    #[test]
    fn sign_mismatch_is_reported() {
        let a2 = root_lattice(RootKind::A(2)).unwrap();
        let r = vectors_with_norm(&a2, &BigInt::from(2)).unwrap();
        assert_eq!(r.status, EnumStatus::SignMismatch);
        assert!(r.vectors.is_empty());
    }

    #[test]
    fn min_norm_examples() {
        assert_eq!(
            min_norm(&root_lattice(RootKind::A(1)).unwrap()).unwrap(),
            BigInt::from(2)
        );
        let l = Lattice::from_rows(&[vec![4, 2], vec![2, 6]]).unwrap();
        assert_eq!(min_norm(&l).unwrap(), BigInt::from(4));
        assert!(matches!(
            min_norm(&Lattice::zero()),
            Err(Error::EmptyLattice)
        ));
    }
}
