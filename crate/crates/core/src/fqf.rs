//! Finite quadratic forms: a finite abelian group `⊕ Z/d_i` with a quadratic
//! form valued in `Q/2Z` and its bilinear form valued in `Q/Z`.
//!
//! Values are compared modulo `2Z` (resp. `Z`) only; the stored
//! representatives are canonical, in `[0, 2)` and `[0, 1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default budget for [`Fqf::isomorphic`]: number of candidate generator
/// images examined before giving up.
pub const DEFAULT_ISO_BUDGET: u64 = 1_000_000;

/// Canonical representative of `r` in `[0, m)`.
pub fn reduce_mod(r: Rational64, m: i64) -> Rational64 {
    let m = Rational64::from_integer(m);
    let k = (r / m).floor();
    r - k * m
}

/// Canonical representative in `Q/2Z`.
pub fn mod2(r: Rational64) -> Rational64 {
    reduce_mod(r, 2)
}

/// Canonical representative in `Q/Z`.
pub fn mod1(r: Rational64) -> Rational64 {
    reduce_mod(r, 1)
}

/// An element of `⊕ Z/d_i`, coefficients reduced into `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FqfElement(pub Vec<u64>);

impl FqfElement {
    pub fn coefficients(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FqfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite quadratic form on `⊕ Z/d_i` given by its values on the standard
/// generators `g_i` and the pairings `b(g_i, g_j)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Fqf {
    orders: Vec<u64>,
    q: Vec<Rational64>,
    /// Symmetric; `b[i][i] = q_i mod 1`.
    b: Vec<Vec<Rational64>>,
    /// All values are integers once multiplied by `scale`.
    scale: i64,
    q_scaled: Vec<i64>,
    b_scaled: Vec<Vec<i64>>,
}

impl Fqf {
    /// Builds a form from generator orders, generator values and the full
    /// symmetric pairing matrix (the diagonal is ignored). Orders equal to 1
    /// are kept as given.
    pub fn new(
        orders: Vec<u64>,
        q: Vec<Rational64>,
        pairings: Vec<Vec<Rational64>>,
    ) -> Result<Self> {
        let k = orders.len();
        if q.len() != k || pairings.len() != k || pairings.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch("form data length mismatch".into()));
        }
        if orders.contains(&0) {
            return Err(Error::InvalidParameter("cyclic factor of order 0".into()));
        }
        let q: Vec<Rational64> = q.into_iter().map(mod2).collect();
        let mut b = vec![vec![Rational64::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                b[i][j] = if i == j {
                    mod1(q[i])
                } else {
                    mod1(pairings[i][j])
                };
            }
        }
        for i in 0..k {
            for j in 0..i {
                if b[i][j] != b[j][i] {
                    return Err(Error::InvalidParameter(
                        "pairing matrix not symmetric".into(),
                    ));
                }
            }
        }
        // well-definedness on Z/d_i: d q(g) ∈ Z, d² q(g) ∈ 2Z, d b(g_i, g_j) ∈ Z
        for i in 0..k {
            let d = Rational64::from_integer(orders[i] as i64);
            if !(d * q[i]).is_integer() || !mod2(d * d * q[i]).is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "q(g{i}) = {} is not a quadratic form on Z/{}",
                    q[i], orders[i]
                )));
            }
            for j in 0..k {
                if i != j && !(d * b[i][j]).is_integer() {
                    return Err(Error::InvalidParameter(format!(
                        "b(g{i}, g{j}) = {} incompatible with order {}",
                        b[i][j], orders[i]
                    )));
                }
            }
        }
        let scale = orders.iter().fold(1i64, |acc, &d| acc.lcm(&(d as i64))) * 2;
        let to_scaled = |r: &Rational64| (r * scale).to_integer();
        let q_scaled = q.iter().map(to_scaled).collect();
        let b_scaled = b
            .iter()
            .map(|row| row.iter().map(to_scaled).collect())
            .collect();
        Ok(Self {
            orders,
            q,
            b,
            scale,
            q_scaled,
            b_scaled,
        })
    }

    /// The cyclic form `(value)` on `Z/order`, written `(a/n)` in the
    /// literature.
    pub fn cyclic(order: u64, value: Rational64) -> Result<Self> {
        Self::new(vec![order], vec![value], vec![vec![Rational64::zero()]])
    }

    /// Orthogonal sum of cyclic forms `(a_1/n_1) ⊕ (a_2/n_2) ⊕ ...`, each
    /// given as `(order, numerator, denominator)`.
    pub fn diagonal(parts: &[(u64, i64, i64)]) -> Result<Self> {
        parts.iter().try_fold(Self::trivial(), |acc, &(n, a, d)| {
            Ok(acc.direct_sum(&Self::cyclic(n, Rational64::new(a, d))?))
        })
    }

    pub fn trivial() -> Self {
        Self::new(vec![], vec![], vec![]).expect("empty form")
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn q_values(&self) -> &[Rational64] {
        &self.q
    }

    pub fn pairing(&self, i: usize, j: usize) -> Rational64 {
        self.b[i][j]
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn group_order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Number of cyclic factors of order > 1 in this presentation. This is
    /// the minimal number of generators only when the orders form a divisor
    /// chain, as they do for forms coming from a Smith decomposition.
    pub fn nontrivial_factors(&self) -> usize {
        self.orders.iter().filter(|&&d| d > 1).count()
    }

    /// Minimal number of generators of the underlying group, computed from
    /// the primary decomposition.
    pub fn min_generators(&self) -> usize {
        let mut per_prime: BTreeMap<u64, usize> = BTreeMap::new();
        for &d in &self.orders {
            for p in prime_factors(d) {
                *per_prime.entry(p).or_default() += 1;
            }
        }
        per_prime.values().copied().max().unwrap_or(0)
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &d| acc.lcm(&d))
    }

    fn check(&self, x: &FqfElement) {
        assert_eq!(
            x.0.len(),
            self.orders.len(),
            "element does not belong to this form"
        );
    }

    pub fn zero(&self) -> FqfElement {
        FqfElement(vec![0; self.orders.len()])
    }

    /// Element from arbitrary integer coefficients, reduced modulo the orders.
    pub fn element(&self, coeffs: &[i64]) -> FqfElement {
        assert_eq!(coeffs.len(), self.orders.len());
        FqfElement(
            coeffs
                .iter()
                .zip(&self.orders)
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
                .collect(),
        )
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> FqfElement {
        let mut c = vec![0; self.orders.len()];
        c[i] = 1 % self.orders[i];
        FqfElement(c)
    }

    pub fn add(&self, x: &FqfElement, y: &FqfElement) -> FqfElement {
        self.check(x);
        self.check(y);
        FqfElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.orders)
                .map(|((a, b), d)| (a + b) % d)
                .collect(),
        )
    }

    pub fn scalar_mul(&self, n: i64, x: &FqfElement) -> FqfElement {
        self.check(x);
        FqfElement(
            x.0.iter()
                .zip(&self.orders)
                .map(|(&a, &d)| {
                    let d = d as i128;
                    ((n as i128 * a as i128).rem_euclid(d)) as u64
                })
                .collect(),
        )
    }

    /// `q(x)` scaled by `self.scale`, reduced into `[0, 2·scale)`.
    fn q_scaled_of(&self, x: &FqfElement) -> i64 {
        let m = 2 * self.scale as i128;
        let mut acc: i128 = 0;
        for i in 0..x.0.len() {
            let xi = x.0[i] as i128;
            if xi == 0 {
                continue;
            }
            acc = (acc + (xi * xi % m) * self.q_scaled[i] as i128) % m;
            for j in i + 1..x.0.len() {
                let xj = x.0[j] as i128;
                if xj != 0 {
                    acc = (acc + 2 * ((xi * xj) % m) * self.b_scaled[i][j] as i128) % m;
                }
            }
        }
        acc.rem_euclid(m) as i64
    }

    /// `q(x) = Σ x_i² q(g_i) + 2 Σ_{i<j} x_i x_j b(g_i, g_j)` in `Q/2Z`.
    pub fn eval_q(&self, x: &FqfElement) -> Rational64 {
        self.check(x);
        Rational64::new(self.q_scaled_of(x), self.scale)
    }

    /// `b(x, y)` in `Q/Z`.
    pub fn eval_b(&self, x: &FqfElement, y: &FqfElement) -> Rational64 {
        self.check(x);
        self.check(y);
        let m = self.scale as i128;
        let mut acc: i128 = 0;
        for i in 0..x.0.len() {
            for j in 0..y.0.len() {
                let t = (x.0[i] as i128 * y.0[j] as i128) % m;
                acc = (acc + t * self.b_scaled[i][j] as i128) % m;
            }
        }
        Rational64::new(acc.rem_euclid(m) as i64, self.scale)
    }

    pub fn element_order(&self, x: &FqfElement) -> u64 {
        self.check(x);
        x.0.iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&c, &d)| acc.lcm(&(d / c.gcd(&d))))
    }

    /// Orthogonal direct sum: concatenated factors, zero cross pairings.
    pub fn direct_sum(&self, other: &Fqf) -> Fqf {
        let k1 = self.orders.len();
        let k = k1 + other.orders.len();
        let mut orders = self.orders.clone();
        orders.extend(&other.orders);
        let mut q = self.q.clone();
        q.extend(&other.q);
        let mut b = vec![vec![Rational64::zero(); k]; k];
        for i in 0..k1 {
            b[i][..k1].copy_from_slice(&self.b[i]);
        }
        for i in 0..other.orders.len() {
            b[k1 + i][k1..].copy_from_slice(&other.b[i]);
        }
        Fqf::new(orders, q, b).expect("direct sum of valid forms is valid")
    }

    /// The form `-q` on the same group.
    pub fn negate(&self) -> Fqf {
        let q = self.q.iter().map(|&v| -v).collect();
        let b = self
            .b
            .iter()
            .map(|row| row.iter().map(|&v| -v).collect())
            .collect();
        Fqf::new(self.orders.clone(), q, b).expect("negation of a valid form is valid")
    }

    /// Every group element, in lexicographic order of coefficient tuples.
    pub fn elements(&self) -> impl Iterator<Item = FqfElement> + '_ {
        let total = self.group_order();
        let mut cur = vec![0u64; self.orders.len()];
        let mut emitted = 0u64;
        std::iter::from_fn(move || {
            if emitted == total {
                return None;
            }
            let out = FqfElement(cur.clone());
            emitted += 1;
            for i in (0..cur.len()).rev() {
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = 0;
            }
            Some(out)
        })
    }

    /// All elements of exact order `n` with `q ≡ 0 mod 2Z`, lexicographic.
    pub fn isotropic_elements(&self, n: u64) -> Vec<FqfElement> {
        if n == 0 || !self.exponent().is_multiple_of(n) {
            return Vec::new();
        }
        self.elements()
            .filter(|x| self.element_order(x) == n && self.q_scaled_of(x) == 0)
            .collect()
    }

    /// Histogram of `(element order, q value)` over the whole group; an
    /// isomorphism invariant.
    pub fn value_histogram(&self) -> BTreeMap<(u64, Rational64), u64> {
        let mut h = BTreeMap::new();
        for x in self.elements() {
            *h.entry((self.element_order(&x), self.eval_q(&x)))
                .or_insert(0) += 1;
        }
        h
    }

    /// Searches for an isometry `self → other` (a group isomorphism
    /// preserving `q`). The search assigns images to the generators of
    /// `self` in lexicographic order, pruning by element order, `q`-value,
    /// pairings with earlier images and injectivity; the first complete
    /// assignment found is the lexicographically smallest isometry.
    pub fn isomorphic(&self, other: &Fqf, budget: u64) -> IsoOutcome {
        if self.group_order() != other.group_order() {
            return IsoOutcome::NotIsomorphic;
        }
        if self.group_order() == 1 {
            return IsoOutcome::Isomorphic(Isometry {
                images: self.orders.iter().map(|_| other.zero()).collect(),
            });
        }
        if self.value_histogram() != other.value_histogram() {
            return IsoOutcome::NotIsomorphic;
        }
        let mut search = IsoSearch::new(self, other, budget);
        match search.run() {
            Some(Ok(images)) => IsoOutcome::Isomorphic(Isometry { images }),
            Some(Err(())) => IsoOutcome::Undecided {
                explored: search.explored,
            },
            None => IsoOutcome::NotIsomorphic,
        }
    }

    /// Convenience wrapper with the default budget.
    pub fn is_isomorphic_to(&self, other: &Fqf) -> IsoOutcome {
        self.isomorphic(other, DEFAULT_ISO_BUDGET)
    }

    /// Serializable summary (orders, canonical values as `"a/b"` strings).
    pub fn to_record(&self) -> FqfRecord {
        FqfRecord {
            orders: self.orders.clone(),
            q: self.q.iter().map(ToString::to_string).collect(),
            b: self
                .b
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

impl fmt::Debug for Fqf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fqf({self})")
    }
}

impl fmt::Display for Fqf {
    /// `Z/4 ⊕ Z/11 : q = [5/4, 4/11]`, plus off-diagonal pairings when present.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "trivial");
        }
        let groups: Vec<String> = self.orders.iter().map(|d| format!("Z/{d}")).collect();
        let qs: Vec<String> = self.q.iter().map(ToString::to_string).collect();
        write!(f, "{} : q = [{}]", groups.join(" ⊕ "), qs.join(", "))?;
        let mut off = Vec::new();
        for i in 0..self.orders.len() {
            for j in i + 1..self.orders.len() {
                if !self.b[i][j].is_zero() {
                    off.push(format!("b{i}{j}={}", self.b[i][j]));
                }
            }
        }
        if !off.is_empty() {
            write!(f, ", {}", off.join(", "))?;
        }
        Ok(())
    }
}

/// JSON-facing form record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FqfRecord {
    pub orders: Vec<u64>,
    pub q: Vec<String>,
    pub b: Vec<Vec<String>>,
}

/// Images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub images: Vec<FqfElement>,
}

impl Isometry {
    pub fn apply(&self, target: &Fqf, x: &FqfElement) -> FqfElement {
        x.0.iter()
            .zip(&self.images)
            .fold(target.zero(), |acc, (&c, img)| {
                target.add(&acc, &target.scalar_mul(c as i64, img))
            })
    }

    /// Exhaustive check: `q` is preserved on every element and the map is a
    /// bijection.
    pub fn verify(&self, source: &Fqf, target: &Fqf) -> bool {
        if source.group_order() != target.group_order()
            || self.images.len() != source.num_generators()
        {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        for x in source.elements() {
            let y = self.apply(target, &x);
            if source.eval_q(&x) != target.eval_q(&y) || !seen.insert(y) {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic(Isometry),
    NotIsomorphic,
    /// The candidate budget ran out before the search was decided.
    Undecided {
        explored: u64,
    },
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }

    pub fn isometry(&self) -> Option<&Isometry> {
        match self {
            IsoOutcome::Isomorphic(m) => Some(m),
            _ => None,
        }
    }
}

struct IsoSearch<'a> {
    src: &'a Fqf,
    dst: &'a Fqf,
    dst_elements: Vec<FqfElement>,
    strides: Vec<usize>,
    /// candidates per source generator, indices into `dst_elements`
    candidates: Vec<Vec<usize>>,
    budget: u64,
    explored: u64,
}

impl<'a> IsoSearch<'a> {
    fn new(src: &'a Fqf, dst: &'a Fqf, budget: u64) -> Self {
        let dst_elements: Vec<FqfElement> = dst.elements().collect();
        let mut strides = vec![1usize; dst.orders.len()];
        for i in (0..dst.orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dst.orders[i + 1] as usize;
        }
        let candidates = (0..src.num_generators())
            .map(|i| {
                let g = src.generator(i);
                let (ord, qv) = (src.element_order(&g), src.q_scaled_of(&g));
                let target = Rational64::new(qv, src.scale);
                dst_elements
                    .iter()
                    .enumerate()
                    .filter(|(_, y)| dst.element_order(y) == ord && dst.eval_q(y) == target)
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        Self {
            src,
            dst,
            dst_elements,
            strides,
            candidates,
            budget,
            explored: 0,
        }
    }

    fn index_of(&self, x: &FqfElement) -> usize {
        x.0.iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    /// `None`: exhausted without success. `Some(Err)`: budget exceeded.
    fn run(&mut self) -> Option<std::result::Result<Vec<FqfElement>, ()>> {
        let mut in_subgroup = vec![false; self.dst_elements.len()];
        in_subgroup[0] = true;
        let members = vec![0usize];
        let mut chosen = Vec::new();
        match self.extend(&mut chosen, &members, &mut in_subgroup) {
            Ok(true) => Some(Ok(chosen
                .iter()
                .map(|&k| self.dst_elements[k].clone())
                .collect())),
            Ok(false) => None,
            Err(()) => Some(Err(())),
        }
    }

    fn extend(
        &mut self,
        chosen: &mut Vec<usize>,
        members: &[usize],
        in_subgroup: &mut [bool],
    ) -> std::result::Result<bool, ()> {
        let i = chosen.len();
        if i == self.src.num_generators() {
            return Ok(members.len() as u64 == self.dst.group_order());
        }
        let d = self.src.orders[i];
        for ci in 0..self.candidates[i].len() {
            let k = self.candidates[i][ci];
            self.explored += 1;
            if self.explored > self.budget {
                return Err(());
            }
            let y = &self.dst_elements[k];
            let pairings_ok = (0..i)
                .all(|j| self.dst.eval_b(y, &self.dst_elements[chosen[j]]) == self.src.b[i][j]);
            if !pairings_ok {
                continue;
            }
            // injectivity: m·y ∉ current subgroup for 0 < m < d
            let mut multiples = Vec::with_capacity(d as usize);
            let mut cur = self.dst.zero();
            let mut injective = true;
            for m in 0..d {
                if m > 0 && in_subgroup[self.index_of(&cur)] {
                    injective = false;
                    break;
                }
                multiples.push(cur.clone());
                cur = self.dst.add(&cur, y);
            }
            if !injective {
                continue;
            }
            let mut grown = Vec::with_capacity(members.len() * d as usize);
            for mult in &multiples {
                for &s in members {
                    let z = self.dst.add(&self.dst_elements[s], mult);
                    grown.push(self.index_of(&z));
                }
            }
            for &g in &grown {
                in_subgroup[g] = true;
            }
            chosen.push(k);
            if self.extend(chosen, &grown, in_subgroup)? {
                return Ok(true);
            }
            chosen.pop();
            for &g in &grown {
                in_subgroup[g] = false;
            }
            for &s in members {
                in_subgroup[s] = true;
            }
        }
        Ok(false)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Parses `"a/b"` or `"a"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a, b))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `true` when `r` is `0` modulo `2Z`.
pub fn is_zero_mod2(r: Rational64) -> bool {
    mod2(r).is_zero()
}

pub(crate) fn small_rational(
    num: &num_bigint::BigInt,
    den: &num_bigint::BigInt,
) -> Result<Rational64> {
    let n = i64::try_from(num).map_err(|_| Error::InvalidParameter("value too large".into()))?;
    let d = i64::try_from(den).map_err(|_| Error::InvalidParameter("value too large".into()))?;
    if d.is_negative() || d.is_zero() {
        return Err(Error::InvalidParameter("bad denominator".into()));
    }
    Ok(Rational64::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn canonical_representatives() {
        assert_eq!(mod2(r(-5, 4)), r(3, 4));
        assert_eq!(mod2(r(-10, 11)), r(12, 11));
        assert_eq!(mod1(r(-1, 3)), r(2, 3));
        assert_eq!(mod2(r(4, 1)), r(0, 1));
    }

    #[test]
    fn eval_zero_is_zero() {
        let f = Fqf::diagonal(&[(4, 5, 4), (11, 4, 11)]).unwrap();
        assert_eq!(f.eval_q(&f.zero()), r(0, 1));
    }

    #[test]
    fn eval_five_y_on_a9_form() {
        let f = Fqf::cyclic(10, r(-9, 10)).unwrap();
        let v = f.eval_q(&f.element(&[5]));
        assert_eq!(v, r(3, 2));
        assert_eq!(mod2(v - r(-1, 2)), r(0, 1));
    }

    #[test]
    fn eval_two_g_on_five_quarters() {
        let f = Fqf::cyclic(4, r(5, 4)).unwrap();
        // 4·(5/4) = 5 ≡ 1
        assert_eq!(f.eval_q(&f.element(&[2])), r(1, 1));
    }

    #[test]
    fn rejects_ill_defined_values() {
        assert!(Fqf::cyclic(4, r(1, 4)).is_ok());
        assert!(Fqf::cyclic(4, r(1, 8)).is_err());
        // 3·(1/3) = 1 is an integer but 9·(1/3) = 3 is odd
        assert!(Fqf::cyclic(3, r(1, 3)).is_err());
    }

    #[test]
    fn direct_sum_examples() {
        let f = Fqf::diagonal(&[(4, 5, 4)]).unwrap();
        assert_eq!(f.direct_sum(&Fqf::trivial()), f);
        let g = Fqf::diagonal(&[(4, 5, 4), (11, 4, 11)]).unwrap();
        assert_eq!(g.orders(), &[4, 11]);
        assert_eq!(g.group_order(), 44);
        let h = Fqf::diagonal(&[(5, -2, 5), (5, -6, 5)]).unwrap();
        assert_eq!(h.orders(), &[5, 5]);
        assert_eq!(h.min_generators(), 2);
        assert_eq!(g.min_generators(), 1);
    }

    #[test]
    fn negate_examples() {
        let f = Fqf::diagonal(&[(4, -5, 4), (11, -4, 11)]).unwrap();
        let g = Fqf::diagonal(&[(4, 5, 4), (11, 4, 11)]).unwrap();
        assert!(f.negate().is_isomorphic_to(&g).is_isomorphic());
        assert_eq!(Fqf::trivial().negate(), Fqf::trivial());
        assert_eq!(f.negate().negate(), f);
    }

    #[test]
    fn isotropic_elements_of_trivial_form() {
        assert!(Fqf::trivial().isotropic_elements(2).is_empty());
    }

    #[test]
    fn isotropic_elements_of_hyperbolic_two_group() {
        // u_1 ⊕ ... : Z/2 x Z/2 with q = 0,0 and b = 1/2
        let f = Fqf::new(
            vec![2, 2],
            vec![r(0, 1), r(0, 1)],
            vec![vec![r(0, 1), r(1, 2)], vec![r(1, 2), r(0, 1)]],
        )
        .unwrap();
        let iso = f.isotropic_elements(2);
        assert_eq!(iso, vec![FqfElement(vec![0, 1]), FqfElement(vec![1, 0])]);
    }

    #[test]
    fn isomorphic_identity() {
        let f = Fqf::diagonal(&[(8, 9, 8), (3, 2, 3), (5, 8, 5)]).unwrap();
        let m = f.is_isomorphic_to(&f);
        let iso = m.isometry().unwrap();
        assert!(iso.verify(&f, &f));
        // lexicographically first image of each generator is itself
        assert_eq!(iso.images[0], f.generator(0));
    }

    #[test]
    fn five_quarters_not_three_quarters() {
        // Z/4 has automorphisms ±1 only; 1 ↦ 3 gives 9·(3/4) ≡ 3/4 ≠ 5/4
        let a = Fqf::cyclic(4, r(5, 4)).unwrap();
        let b = Fqf::cyclic(4, r(3, 4)).unwrap();
        assert_eq!(
            a.isomorphic(&b, DEFAULT_ISO_BUDGET),
            IsoOutcome::NotIsomorphic
        );
    }

    #[test]
    fn cyclic_vs_split_presentation() {
        // Z/44 with q = 21/44 ... pick any generator value and split it by CRT
        let split = Fqf::diagonal(&[(4, 5, 4), (11, 4, 11)]).unwrap();
        let g = split.element(&[1, 1]);
        let cyc = Fqf::cyclic(44, split.eval_q(&g)).unwrap();
        let m = cyc.is_isomorphic_to(&split);
        assert!(m.isometry().unwrap().verify(&cyc, &split));
        let back = split.is_isomorphic_to(&cyc);
        assert!(back.isometry().unwrap().verify(&split, &cyc));
    }

    #[test]
    fn five_torsion_forms_classified_by_square_class() {
        // (6/5)⊕(2/5) ≅ (-2/5)⊕(-6/5): both split as square ⊕ non-square
        let a = Fqf::diagonal(&[(5, 6, 5), (5, 2, 5)]).unwrap();
        let b = Fqf::diagonal(&[(5, -2, 5), (5, -6, 5)]).unwrap();
        assert!(a.is_isomorphic_to(&b).is_isomorphic());
        // (2/5)⊕(8/5): square ⊕ square, a different discriminant class
        let c = Fqf::diagonal(&[(5, 2, 5), (5, 8, 5)]).unwrap();
        assert_eq!(a.is_isomorphic_to(&c), IsoOutcome::NotIsomorphic);
    }

    #[test]
    fn budget_exhaustion_is_explicit() {
        let g = Fqf::diagonal(&[(3, 2, 3), (3, 4, 3), (3, 2, 3), (3, 4, 3)]).unwrap();
        let h = Fqf::diagonal(&[(3, 2, 3), (3, 2, 3), (3, 4, 3), (3, 4, 3)]).unwrap();
        match g.isomorphic(&h, 0) {
            IsoOutcome::Undecided { explored } => assert_eq!(explored, 1),
            other => panic!("expected undecided, got {other:?}"),
        }
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("-5/4").unwrap(), r(-5, 4));
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
