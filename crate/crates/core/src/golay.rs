//! The extended binary Golay code and the Niemeier lattice with root system
//! `A1^24` built from it.
//!
//! Points are numbered `1..=24`; point `p` is bit `p - 1` of a codeword mask.
//! The coordinate labelling of the quadratic-residue construction is
//! point 1 ↔ ∞ and point `k + 2` ↔ `k` for `k ∈ {0, …, 22}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::enumeration;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{hnf_basis, IntMatrix, Signature};

pub const LENGTH: usize = 24;
pub const DIMENSION: usize = 12;
pub const ALL_ONES: u32 = (1 << LENGTH) - 1;

/// Nonzero squares modulo 23.
pub const QUADRATIC_RESIDUES_23: [usize; 11] = [1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18];

/// Point `1..=24` for the residue `k` modulo 23.
fn residue_point(k: usize) -> usize {
    k % 23 + 2
}

pub fn mask_of(points: &[usize]) -> Result<u32> {
    points.iter().try_fold(0u32, |m, &p| {
        if (1..=LENGTH).contains(&p) {
            Ok(m | 1 << (p - 1))
        } else {
            Err(Error::InvalidParameter(format!("point {p} outside 1..=24")))
        }
    })
}

pub fn points_of(mask: u32) -> Vec<usize> {
    (0..LENGTH)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

pub fn weight(mask: u32) -> u32 {
    mask.count_ones()
}

#[derive(Clone, Debug)]
pub struct GolayCode {
    generator: [u32; DIMENSION],
    /// All 4096 codewords, ascending as integers.
    words: Vec<u32>,
}

impl GolayCode {
    pub fn generator_rows(&self) -> &[u32; DIMENSION] {
        &self.generator
    }

    pub fn codewords(&self) -> &[u32] {
        &self.words
    }

    pub fn contains(&self, word: u32) -> bool {
        self.words.binary_search(&word).is_ok()
    }

    pub fn weight_distribution(&self) -> BTreeMap<u32, usize> {
        let mut dist = BTreeMap::new();
        for &w in &self.words {
            *dist.entry(weight(w)).or_insert(0) += 1;
        }
        dist
    }

    pub fn words_of_weight(&self, w: u32) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().copied().filter(move |&c| weight(c) == w)
    }

    pub fn octads(&self) -> Vec<u32> {
        self.words_of_weight(8).collect()
    }

    pub fn dodecads(&self) -> Vec<u32> {
        self.words_of_weight(12).collect()
    }

    /// Every pair of generator rows meets in an even number of points.
    pub fn is_self_orthogonal(&self) -> bool {
        self.generator
            .iter()
            .all(|&a| self.generator.iter().all(|&b| weight(a & b).is_multiple_of(2)))
    }

    /// Self-dual: self-orthogonal of dimension `LENGTH / 2`.
    pub fn is_self_dual(&self) -> bool {
        self.is_self_orthogonal() && f2_rank(&self.generator) == LENGTH / 2
    }

    /// Codeword of weight `w` containing `must_contain` and disjoint from
    /// `must_avoid` whose sorted point list is lexicographically smallest.
    pub fn find_word(&self, w: u32, must_contain: &[usize], must_avoid: &[usize]) -> Result<u32> {
        let inside = mask_of(must_contain)?;
        let outside = mask_of(must_avoid)?;
        self.words_of_weight(w)
            .filter(|&c| c & inside == inside && c & outside == 0)
            .min_by_key(|&c| points_of(c))
            .ok_or_else(|| {
                Error::NotFound(format!(
                    "no weight-{w} codeword containing {must_contain:?} and avoiding {must_avoid:?}"
                ))
            })
    }

    pub fn find_octad(&self, must_contain: &[usize], must_avoid: &[usize]) -> Result<u32> {
        self.find_word(8, must_contain, must_avoid)
    }

    pub fn find_dodecad(&self, must_contain: &[usize], must_avoid: &[usize]) -> Result<u32> {
        self.find_word(12, must_contain, must_avoid)
    }

    fn self_check(&self) -> Result<()> {
        if f2_rank(&self.generator) != DIMENSION {
            return Err(Error::SelfCheck("generator rank is not 12".into()));
        }
        if !self.is_self_dual() {
            return Err(Error::SelfCheck("code is not self-dual".into()));
        }
        if !self.contains(ALL_ONES) {
            return Err(Error::SelfCheck("all-ones word missing".into()));
        }
        let dist = self.weight_distribution();
        let expected: BTreeMap<u32, usize> = [(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)]
            .into_iter()
            .collect();
        if dist != expected {
            return Err(Error::SelfCheck(format!("weight distribution {dist:?}")));
        }
        Ok(())
    }
}

fn f2_rank(rows: &[u32]) -> usize {
    let mut pivots: Vec<u32> = Vec::new();
    for &r in rows {
        let mut r = r;
        for &p in &pivots {
            r = r.min(r ^ p);
        }
        if r != 0 {
            pivots.push(r);
            pivots.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    pivots.len()
}

/// Reduced row echelon form over F2, pivot on the lowest point first.
fn f2_rref(rows: &[u32]) -> Vec<u32> {
    let mut m: Vec<u32> = rows.to_vec();
    let mut r = 0;
    for bit in 0..LENGTH {
        let Some(p) = (r..m.len()).find(|&i| m[i] >> bit & 1 == 1) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i] >> bit & 1 == 1 {
                m[i] ^= m[r];
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Extended quadratic-residue construction: the 23 words
/// `{∞} ∪ (QR + i)` span the code; the generator is their reduced echelon form.
pub fn build_golay() -> Result<GolayCode> {
    let infinity = 1u32;
    let spanning: Vec<u32> = (0..23)
        .map(|i| {
            QUADRATIC_RESIDUES_23
                .iter()
                .fold(infinity, |m, &q| m | 1 << (residue_point(q + i) - 1))
        })
        .collect();
    let rref = f2_rref(&spanning);
    if rref.len() != DIMENSION {
        return Err(Error::SelfCheck(format!(
            "span has dimension {}",
            rref.len()
        )));
    }
    let mut generator = [0u32; DIMENSION];
    generator.copy_from_slice(&rref);
    let mut words = vec![0u32];
    for &g in &generator {
        let more: Vec<u32> = words.iter().map(|&w| w ^ g).collect();
        words.extend(more);
    }
    words.sort_unstable();
    let code = GolayCode { generator, words };
    code.self_check()?;
    Ok(code)
}

/// The Niemeier lattice `N = {x ∈ (A1*)^24 : x mod A1^24 ∈ C}` in the
/// negative-definite convention, with the 24 positive roots located.
#[derive(Clone, Debug)]
pub struct NiemeierA1 {
    pub lattice: Lattice,
    /// Row `i` holds the root `x_{i+1}` in the basis of `lattice`.
    pub roots: IntMatrix,
    /// Basis of `lattice` in doubled root coordinates: row `r` stands for
    /// `Σ_i r_i x_i / 2`.
    pub doubled_basis: IntMatrix,
}

impl NiemeierA1 {
    /// Lattice coordinates of `(Σ_{i ∈ points} x_i) / k`, or an error if
    /// that vector is not in `N`.
    pub fn scaled_root_sum(&self, points: &[usize], k: i64) -> Result<Vec<BigInt>> {
        let mut acc = vec![BigInt::zero(); LENGTH];
        for &p in points {
            if !(1..=LENGTH).contains(&p) {
                return Err(Error::InvalidParameter(format!("point {p} outside 1..=24")));
            }
            for (a, r) in acc.iter_mut().zip(self.roots.row(p - 1)) {
                *a += r;
            }
        }
        let k = BigInt::from(k);
        if acc.iter().any(|a| !a.is_multiple_of(&k)) {
            return Err(Error::NotFound(format!(
                "(sum of roots over {points:?})/{k} is not a lattice vector"
            )));
        }
        Ok(acc.into_iter().map(|a| a / &k).collect())
    }

    /// Glue vector `(Σ_{i ∈ c} x_i)/2` of a codeword.
    pub fn glue_vector(&self, word: u32) -> Result<Vec<BigInt>> {
        self.scaled_root_sum(&points_of(word), 2)
    }

    /// `[N : A1^24]`.
    pub fn root_span_index(&self) -> BigInt {
        crate::linalg::det(&self.roots)
            .expect("square")
            .magnitude()
            .clone()
            .into()
    }
}

pub fn build_niemeier(code: &GolayCode) -> Result<NiemeierA1> {
    let mut gens = IntMatrix::diagonal(&[2; LENGTH]);
    let words = IntMatrix::from_rows(
        &code
            .generator_rows()
            .iter()
            .map(|&w| (0..LENGTH).map(|i| i64::from(w >> i & 1)).collect())
            .collect::<Vec<Vec<i64>>>(),
    )?;
    gens = gens.vstack(&words)?;
    let basis = hnf_basis(&gens);
    if basis.rows() != LENGTH {
        return Err(Error::SelfCheck("glue span has wrong rank".into()));
    }
    // ⟨x_i, x_j⟩ = -2 δ_ij, so Gram = -B B^T / 2
    let bbt = basis.mul(&basis.transpose())?;
    let two = BigInt::from(2);
    let mut gram = IntMatrix::zeros(LENGTH, LENGTH);
    for i in 0..LENGTH {
        for j in 0..LENGTH {
            let v = &bbt[(i, j)];
            if !v.is_multiple_of(&two) {
                return Err(Error::SelfCheck("Niemeier Gram is not integral".into()));
            }
            gram[(i, j)] = -(v / &two);
        }
    }
    let lattice = Lattice::new(gram)?;
    let inv = basis
        .to_rational()
        .inverse()
        .ok_or_else(|| Error::SelfCheck("basis is singular".into()))?;
    let roots = inv
        .scale(&num_rational::BigRational::from_integer(two))
        .to_integer()
        .ok_or_else(|| Error::SelfCheck("a root is not a lattice vector".into()))?;
    let n = NiemeierA1 {
        lattice,
        roots,
        doubled_basis: basis,
    };
    verify_niemeier(&n)?;
    Ok(n)
}

fn verify_niemeier(n: &NiemeierA1) -> Result<()> {
    let l = &n.lattice;
    if !l.is_even() {
        return Err(Error::SelfCheck("N is not even".into()));
    }
    if !l.det().is_one() && l.det() != BigInt::from(-1) {
        return Err(Error::SelfCheck(format!("det N = {}", l.det())));
    }
    if l.signature() != Signature::new(0, LENGTH, 0) {
        return Err(Error::SelfCheck("N is not negative definite".into()));
    }
    for i in 0..LENGTH {
        for j in 0..LENGTH {
            let ip = l.inner(n.roots.row(i), n.roots.row(j));
            let expected = if i == j { -2 } else { 0 };
            if ip != BigInt::from(expected) {
                return Err(Error::SelfCheck(format!("⟨x{}, x{}⟩ = {ip}", i + 1, j + 1)));
            }
        }
    }
    let roots = enumeration::vectors_with_norm(l, &BigInt::from(-2))?;
    if roots.vectors.len() != LENGTH {
        return Err(Error::SelfCheck(format!(
            "{} roots up to sign, expected 24",
            roots.vectors.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn code() -> &'static GolayCode {
        static CODE: OnceLock<GolayCode> = OnceLock::new();
        CODE.get_or_init(|| build_golay().unwrap())
    }

    #[test]
    fn weight_distribution_matches_enumeration() {
        // independent count straight from the spanning words, not the cache
        let mut dist = BTreeMap::new();
        for s in 0u32..1 << 12 {
            let w = (0..12)
                .filter(|&i| s >> i & 1 == 1)
                .fold(0u32, |acc, i| acc ^ code().generator_rows()[i]);
            *dist.entry(weight(w)).or_insert(0usize) += 1;
        }
        let expected: BTreeMap<u32, usize> = [(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)]
            .into_iter()
            .collect();
        assert_eq!(dist, expected);
        assert_eq!(code().weight_distribution(), expected);
    }

    #[test]
    fn self_dual_and_closed() {
        assert!(code().is_self_dual());
        let words = code().codewords();
        for (k, &a) in words.iter().enumerate().step_by(97) {
            let b = words[(k * 31 + 7) % words.len()];
            assert!(code().contains(a ^ b));
        }
        assert!(code().contains(ALL_ONES));
    }

    #[test]
    fn octads_through_a_point() {
        let through_one = code().octads().iter().filter(|&&o| o & 1 == 1).count();
        assert_eq!(through_one, 253);
        let o = code().find_octad(&[1], &[]).unwrap();
        assert_eq!(weight(o), 8);
        assert_eq!(code().find_octad(&points_of(o), &[]).unwrap(), o);
    }

    #[test]
    fn five_points_determine_an_octad() {
        // Steiner system S(5,8,24)
        let octads = code().octads();
        let five = mask_of(&[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(octads.iter().filter(|&&o| o & five == five).count(), 1);
        // a 6-set with no octad through it makes the query fail
        let o = code().find_octad(&[1, 2, 3, 4, 5], &[]).unwrap();
        let outside = (1..=24).find(|p| o >> (p - 1) & 1 == 0).unwrap();
        assert!(matches!(
            code().find_octad(&[1, 2, 3, 4, 5, outside], &[]),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn dodecads() {
        let d = code().dodecads();
        assert_eq!(d.len(), 2576);
        assert_eq!(d.iter().filter(|&&w| w & 1 == 1).count(), 1288);
        for &w in d.iter().take(50) {
            assert!(code().contains(w ^ ALL_ONES));
            assert_eq!(weight(w ^ ALL_ONES), 12);
        }
        let first = code().find_dodecad(&[1], &[]).unwrap();
        assert_eq!(first & 1, 1);
    }

    #[test]
    fn bad_points_rejected() {
        assert!(mask_of(&[0]).is_err());
        assert!(mask_of(&[25]).is_err());
        assert_eq!(points_of(mask_of(&[3, 1, 24]).unwrap()), vec![1, 3, 24]);
    }

    #[test]
    fn niemeier_invariants() {
        let n = build_niemeier(code()).unwrap();
        assert_eq!(n.lattice.rank(), 24);
        assert!(n.lattice.is_unimodular());
        assert_eq!(n.root_span_index(), BigInt::from(4096));
        for o in code().octads().into_iter().take(20) {
            let g = n.glue_vector(o).unwrap();
            assert_eq!(n.lattice.norm(&g), BigInt::from(-4));
        }
        let d = code().dodecads()[0];
        assert_eq!(n.lattice.norm(&n.glue_vector(d).unwrap()), BigInt::from(-6));
        assert!(n.scaled_root_sum(&[1, 2], 2).is_err());
    }
}
