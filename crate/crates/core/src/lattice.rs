//! Integral lattices given by Gram matrices, sublattices, discriminant forms
//! and overlattices.
//!
//! Root lattices use the negative-definite convention: diagonal `-2`,
//! adjacent Dynkin nodes `+1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqf::{small_rational, Fqf, FqfElement};
use crate::linalg::{
    self, hnf_basis, int_bilinear, kernel_int, rat_bilinear, rat_left_apply, snf, IntMatrix,
    RatMatrix, Signature,
};

/// A free Z-module with a symmetric integral bilinear form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: IntMatrix,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare {
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Self { gram })
    }

    /// Like [`Lattice::new`] but also requires every diagonal entry to be even.
    pub fn even(gram: IntMatrix) -> Result<Self> {
        let l = Self::new(gram)?;
        if !l.is_even() {
            return Err(Error::OddLattice);
        }
        Ok(l)
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    /// The rank-0 lattice.
    pub fn zero() -> Self {
        Self {
            gram: IntMatrix::zeros(0, 0),
        }
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigInt {
        linalg::det(&self.gram).expect("gram is square")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn signature(&self) -> Signature {
        linalg::signature(&self.gram).expect("gram is symmetric")
    }

    pub fn inner(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        int_bilinear(x, &self.gram, y)
    }

    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        self.inner(x, x)
    }

    /// Orthogonal direct sum (block-diagonal Gram).
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice {
            gram: self.gram.block_diag(&other.gram),
        }
    }

    /// `L^m`.
    pub fn power(&self, m: usize) -> Lattice {
        (0..m).fold(Lattice::zero(), |acc, _| acc.direct_sum(self))
    }

    /// `L(-1)`: same module, form negated.
    pub fn negated(&self) -> Lattice {
        Lattice {
            gram: self.gram.neg(),
        }
    }

    /// Change of basis: the Gram matrix of the rows of `basis`.
    pub fn sublattice_gram(&self, basis: &IntMatrix) -> Result<Lattice> {
        Lattice::new(self.gram.congruent(basis)?)
    }

    pub fn to_record(&self) -> Result<LatticeRecord> {
        let gram = self
            .gram
            .entries()
            .iter()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::InvalidParameter("Gram entry exceeds i64".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeRecord {
            rank: self.rank(),
            gram,
        })
    }

    pub fn from_record(rec: &LatticeRecord) -> Result<Self> {
        if rec.gram.len() != rec.rank * rec.rank {
            return Err(Error::Parse(format!(
                "rank {} needs {} Gram entries, found {}",
                rec.rank,
                rec.rank * rec.rank,
                rec.gram.len()
            )));
        }
        let data = rec.gram.iter().map(|&x| BigInt::from(x)).collect();
        Lattice::new(IntMatrix::new(rec.rank, rec.rank, data)?)
    }

    /// `{"rank": n, "gram": [row-major entries]}`.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_record()?)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: LatticeRecord = serde_json::from_str(s)?;
        Self::from_record(&rec)
    }
}

/// On-disk lattice format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRecord {
    pub rank: usize,
    pub gram: Vec<i64>,
}

/// Root lattices and the few other building blocks used here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    /// The hyperbolic plane.
    U,
    /// `<k>`, the rank-one lattice with Gram `[[k]]`; `k` must be even.
    Rank1(i64),
    /// `A_1^24`.
    A1Pow24,
}

fn dynkin_gram(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = BigInt::from(-2);
    }
    for &(a, b) in edges {
        m[(a, b)] = BigInt::one();
        m[(b, a)] = BigInt::one();
    }
    m
}

/// Bourbaki labelling: chain 1-3-4-5-...-n, node 2 attached to node 4.
fn e_edges(n: usize) -> Vec<(usize, usize)> {
    let mut edges = vec![(0, 2), (1, 3)];
    for i in 2..n - 1 {
        edges.push((i, i + 1));
    }
    edges
}

pub fn root_lattice(kind: RootKind) -> Result<Lattice> {
    let gram = match kind {
        RootKind::A(m) => {
            if m < 1 {
                return Err(Error::InvalidParameter("A_m needs m >= 1".into()));
            }
            let edges: Vec<_> = (0..m - 1).map(|i| (i, i + 1)).collect();
            dynkin_gram(m, &edges)
        }
        RootKind::D(n) => {
            if n < 4 {
                return Err(Error::InvalidParameter("D_n needs n >= 4".into()));
            }
            let mut edges: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
            edges.push((n - 3, n - 1));
            dynkin_gram(n, &edges)
        }
        RootKind::E6 => dynkin_gram(6, &e_edges(6)),
        RootKind::E7 => dynkin_gram(7, &e_edges(7)),
        RootKind::E8 => dynkin_gram(8, &e_edges(8)),
        RootKind::U => IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])?,
        RootKind::Rank1(k) => {
            if k % 2 != 0 {
                return Err(Error::InvalidParameter(format!("<{k}> is not even")));
            }
            IntMatrix::diagonal(&[k])
        }
        RootKind::A1Pow24 => IntMatrix::diagonal(&[-2; 24]),
    };
    Lattice::new(gram)
}

/// A sublattice of an ambient lattice, stored as an HNF basis of row
/// vectors in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient: Lattice,
    basis: IntMatrix,
}

impl Sublattice {
    /// The sublattice generated by the rows of `generators` (dependent
    /// generators are fine; the stored basis is their HNF).
    pub fn new(ambient: Lattice, generators: &IntMatrix) -> Result<Self> {
        if generators.rows() > 0 && generators.cols() != ambient.rank() {
            return Err(Error::DimensionMismatch(format!(
                "generators have {} coordinates, ambient rank is {}",
                generators.cols(),
                ambient.rank()
            )));
        }
        let basis = if generators.rows() == 0 {
            IntMatrix::zeros(0, ambient.rank())
        } else {
            hnf_basis(generators)
        };
        Ok(Self { ambient, basis })
    }

    pub fn full(ambient: Lattice) -> Self {
        let basis = IntMatrix::identity(ambient.rank());
        Self { ambient, basis }
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// The induced lattice `B G B^T`.
    pub fn lattice(&self) -> Lattice {
        self.ambient
            .sublattice_gram(&self.basis)
            .expect("basis matches ambient")
    }

    /// Whether `v` (ambient coordinates) lies in this sublattice.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let extended = self
            .basis
            .vstack(&IntMatrix::from_big_rows(vec![v.to_vec()], v.len()).expect("row"))
            .expect("same width");
        hnf_basis(&extended) == self.basis
    }

    /// Smallest primitive sublattice containing this one.
    pub fn saturation(&self) -> Sublattice {
        if self.rank() == 0 {
            return self.clone();
        }
        let perp = kernel_int(&self.basis.transpose());
        let basis = if perp.rows() == 0 {
            IntMatrix::identity(self.ambient.rank())
        } else {
            kernel_int(&perp.transpose())
        };
        Sublattice {
            ambient: self.ambient.clone(),
            basis,
        }
    }

    /// `[saturation : self]`, the product of the elementary divisors of the basis.
    pub fn index_in_saturation(&self) -> BigInt {
        snf(&self.basis)
            .invariant_factors()
            .iter()
            .fold(BigInt::one(), |acc, d| acc * d)
    }

    pub fn is_primitive(&self) -> bool {
        self.index_in_saturation().is_one()
    }

    /// `{v ∈ ambient : ⟨v, t⟩ = 0 for all t}`; always primitive.
    pub fn orthogonal_complement(&self) -> Sublattice {
        let n = self.ambient.rank();
        let pairing = self
            .ambient
            .gram
            .mul(&self.basis.transpose())
            .expect("shapes agree");
        let basis = if self.rank() == 0 {
            IntMatrix::identity(n)
        } else {
            kernel_int(&pairing)
        };
        Sublattice {
            ambient: self.ambient.clone(),
            basis,
        }
    }

    pub fn intersect(&self, other: &Sublattice) -> Result<Sublattice> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        let n = self.ambient.rank();
        if self.rank() == 0 || other.rank() == 0 {
            return Sublattice::new(self.ambient.clone(), &IntMatrix::zeros(0, n));
        }
        let stacked = self.basis.vstack(&other.basis)?;
        let k = kernel_int(&stacked);
        if k.rows() == 0 {
            return Sublattice::new(self.ambient.clone(), &IntMatrix::zeros(0, n));
        }
        let coeffs = k.select_cols(&(0..self.rank()).collect::<Vec<_>>());
        let gens = coeffs.mul(&self.basis)?;
        Sublattice::new(self.ambient.clone(), &gens)
    }
}

/// `A_L = L*/L` with its discriminant quadratic form, plus the data needed
/// to move between dual vectors and group elements.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    pub fqf: Fqf,
    /// Row `i` is a representative of generator `g_i` in `L*`, in rational
    /// coordinates with respect to the basis of `L`.
    pub lifts: RatMatrix,
    gram: IntMatrix,
    /// `coefficient_i = ((y·G)·coord_map)_i mod d_i` for a dual vector `y`.
    coord_map: IntMatrix,
}

impl DiscriminantForm {
    /// Group element represented by a dual vector given in lattice coordinates.
    pub fn element_of(&self, y: &[BigRational]) -> Result<FqfElement> {
        let n = self.gram.rows();
        if y.len() != n {
            return Err(Error::DimensionMismatch("dual vector length".into()));
        }
        let dual_coords = rat_left_apply(y, &self.gram.to_rational());
        if !dual_coords.iter().all(BigRational::is_integer) {
            return Err(Error::GlueOutsideDual);
        }
        let c: Vec<BigInt> = dual_coords.iter().map(BigRational::to_integer).collect();
        let raw = self.coord_map.left_apply(&c);
        let coeffs = raw
            .iter()
            .zip(self.fqf.orders())
            .map(|(x, &d)| x.mod_floor(&BigInt::from(d)).to_u64().expect("reduced"))
            .collect();
        Ok(FqfElement(coeffs))
    }

    /// The lift `Σ x_i · lift_i` of a group element.
    pub fn lift_of(&self, x: &FqfElement) -> Vec<BigRational> {
        let coeffs: Vec<BigRational> =
            x.0.iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect();
        rat_left_apply(&coeffs, &self.lifts)
    }

    /// Discriminant form of `L1 ⊕ L2` presented as the sum of the two forms.
    pub fn direct_sum(&self, other: &DiscriminantForm) -> DiscriminantForm {
        let (n1, n2) = (self.gram.rows(), other.gram.rows());
        let (k1, k2) = (self.lifts.rows(), other.lifts.rows());
        let mut lifts = RatMatrix::zeros(k1 + k2, n1 + n2);
        for i in 0..k1 {
            for j in 0..n1 {
                lifts[(i, j)] = self.lifts[(i, j)].clone();
            }
        }
        for i in 0..k2 {
            for j in 0..n2 {
                lifts[(k1 + i, n1 + j)] = other.lifts[(i, j)].clone();
            }
        }
        DiscriminantForm {
            fqf: self.fqf.direct_sum(&other.fqf),
            lifts,
            gram: self.gram.block_diag(&other.gram),
            coord_map: self.coord_map.block_diag(&other.coord_map),
        }
    }
}

/// Discriminant form of a nondegenerate even lattice, via the Smith form of
/// its Gram matrix. Factors are returned as a divisor chain.
pub fn discriminant_form(l: &Lattice) -> Result<DiscriminantForm> {
    if !l.is_even() {
        return Err(Error::OddLattice);
    }
    let n = l.rank();
    let g = l.gram().clone();
    let ginv = g.to_rational().inverse().ok_or(Error::Degenerate)?;
    let s = snf(&g);
    let factors = s.invariant_factors();
    let nontrivial: Vec<usize> = (0..factors.len())
        .filter(|&i| !factors[i].is_one())
        .collect();
    let vinv = s
        .right
        .to_rational()
        .inverse()
        .and_then(|m| m.to_integer())
        .expect("SNF transform is unimodular");
    let lifts_all = vinv.to_rational().mul(&ginv)?;
    let lifts = RatMatrix::from_rat_rows(
        nontrivial
            .iter()
            .map(|&i| lifts_all.row(i).to_vec())
            .collect(),
        n,
    )?;
    let coord_map = s.right.select_cols(&nontrivial);

    let k = nontrivial.len();
    let mut orders = Vec::with_capacity(k);
    for &i in &nontrivial {
        orders.push(
            factors[i]
                .to_u64()
                .ok_or_else(|| Error::InvalidParameter("discriminant group too large".into()))?,
        );
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut q = Vec::with_capacity(k);
    let mut b = vec![Vec::with_capacity(k); k];
    for i in 0..k {
        for j in 0..k {
            let v = rat_bilinear(lifts.row(i), &g, lifts.row(j));
            let (m, modulus) = if i == j {
                (v, &two)
            } else {
                (v, &BigRational::one())
            };
            let reduced = &m - (&m / modulus).floor() * modulus;
            let small = small_rational(reduced.numer(), reduced.denom())?;
            if i == j {
                q.push(small);
            }
            b[i].push(small);
        }
    }
    let fqf = Fqf::new(orders, q, b)?;
    Ok(DiscriminantForm {
        fqf,
        lifts,
        gram: g,
        coord_map,
    })
}

/// Minimal number of generators of `A_L`.
pub fn l_invariant(l: &Lattice) -> Result<usize> {
    if !l.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    Ok(snf(l.gram())
        .invariant_factors()
        .iter()
        .filter(|d| !d.is_one())
        .count())
}

/// Generators (rows, rational lattice coordinates) of an isotropic subgroup
/// `H ⊂ A_L`, and the declared order `|H|`.
#[derive(Clone, Debug)]
pub struct GlueSpec {
    pub generators: RatMatrix,
    pub order: u64,
}

impl GlueSpec {
    pub fn new(generators: Vec<Vec<BigRational>>, order: u64) -> Result<Self> {
        let cols = generators.first().map_or(0, Vec::len);
        Ok(Self {
            generators: RatMatrix::from_rat_rows(generators, cols)?,
            order,
        })
    }
}

/// Overlattice together with its basis expressed in the coordinates of the
/// original lattice.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: Lattice,
    pub basis: RatMatrix,
}

/// Overlattice `L' ⊇ L` determined by an isotropic subgroup of `A_L`.
pub fn overlattice_from_glue(l: &Lattice, glue: &GlueSpec) -> Result<Lattice> {
    glue_overlattice(l, glue).map(|o| o.lattice)
}

/// Same as [`overlattice_from_glue`], also returning the new basis.
pub fn glue_overlattice(l: &Lattice, glue: &GlueSpec) -> Result<Overlattice> {
    let n = l.rank();
    let g = l.gram();
    let gr = g.to_rational();
    let rows = glue.generators.row_vecs();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("glue vector length".into()));
    }
    for y in &rows {
        if !rat_left_apply(y, &gr).iter().all(BigRational::is_integer) {
            return Err(Error::GlueOutsideDual);
        }
    }
    for (i, y) in rows.iter().enumerate() {
        for (j, z) in rows.iter().enumerate().skip(i) {
            let v = rat_bilinear(y, g, z);
            let ok = if i == j {
                (&v / BigRational::from_integer(BigInt::from(2))).is_integer()
            } else {
                v.is_integer()
            };
            if !ok {
                return Err(Error::NonIsotropicGlue(format!(
                    "generators {i},{j} pair to {v}"
                )));
            }
        }
    }
    let mut all = RatMatrix::identity(n).row_vecs();
    all.extend(rows);
    let stacked = RatMatrix::from_rat_rows(all, n)?;
    let (scaled, denom) = stacked.clear_denominators();
    let hb = hnf_basis(&scaled);
    let inv = BigRational::new(BigInt::one(), denom);
    let basis = hb.to_rational().scale(&inv);
    let new_gram = basis.mul(&gr)?.mul(&basis.transpose())?;
    let new_gram = new_gram
        .to_integer()
        .ok_or_else(|| Error::BadOverlattice("non-integral Gram entries".into()))?;
    let lattice = Lattice::new(new_gram)?;
    if !lattice.is_even() {
        return Err(Error::BadOverlattice("odd norm in glued lattice".into()));
    }
    let (d_old, d_new) = (l.det().abs(), lattice.det().abs());
    let expected = BigInt::from(glue.order).pow(2);
    if d_new.is_zero() || !(&d_old % &d_new).is_zero() || &d_old / &d_new != expected {
        return Err(Error::GlueOrderMismatch {
            declared: glue.order,
            actual: if d_new.is_zero() {
                "degenerate".into()
            } else {
                format!("sqrt({})", BigRational::new(d_old, d_new))
            },
        });
    }
    Ok(Overlattice { lattice, basis })
}
