use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use forge_core::enumeration::short_vectors;
use forge_core::fqf::{mod2, Fqf, FqfElement};
use forge_core::lattice::{discriminant_form, Lattice, Sublattice};
use forge_core::linalg::{det, hnf, kernel_int, signature, snf, IntMatrix};

fn matrix(max_dim: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-range..=range, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows).unwrap())
    })
}

/// Product of elementary operations; always unimodular.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..4 * n).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, q, swap) in ops {
            if i == j {
                continue;
            }
            u.sub_row_multiple(i, j, &BigInt::from(q));
            if swap {
                u.swap_rows(i, j);
            }
        }
        u
    })
}

fn symmetric(n: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-range..=range, n * (n + 1) / 2).prop_map(move |v| {
        let mut m = IntMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m[(i, j)] = BigInt::from(v[k]);
                m[(j, i)] = BigInt::from(v[k]);
                k += 1;
            }
        }
        m
    })
}

/// Positive definite Gram `A Aᵀ` with `A` small and nonsingular, doubled to
/// make it even.
fn definite_even(n: usize) -> impl Strategy<Value = Lattice> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, n), n)
        .prop_map(|rows| IntMatrix::from_rows(&rows).unwrap())
        .prop_filter("nonsingular", |a| !det(a).unwrap().is_zero())
        .prop_map(|a| {
            let g = a.mul(&a.transpose()).unwrap();
            let two = IntMatrix::diagonal(&vec![2; g.rows()]);
            Lattice::new(two.mul(&g).unwrap()).unwrap()
        })
}

fn is_row_echelon(h: &IntMatrix) -> bool {
    let mut last: Option<usize> = None;
    for i in 0..h.rows() {
        let lead = h.row(i).iter().position(|x| !x.is_zero());
        match (last, lead) {
            (_, None) => {
                if (i..h.rows()).any(|k| h.row(k).iter().any(|x| !x.is_zero())) {
                    return false;
                }
                return true;
            }
            (Some(l), Some(p)) if p <= l => return false,
            (_, Some(p)) => {
                if !h[(i, p)].is_positive() {
                    return false;
                }
                for k in 0..i {
                    if h[(k, p)].is_negative() || h[(k, p)] >= h[(i, p)] {
                        return false;
                    }
                }
                last = Some(p);
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_unimodular_echelon(m in matrix(5, 9)) {
        let (h, u) = hnf(&m);
        prop_assert_eq!(u.mul(&m).unwrap(), h.clone());
        prop_assert!(det(&u).unwrap().abs().is_one());
        prop_assert!(is_row_echelon(&h));
    }

    #[test]
    fn snf_divisor_chain(m in matrix(5, 9)) {
        let s = snf(&m);
        prop_assert_eq!(s.left.mul(&m).unwrap().mul(&s.right).unwrap(), s.diag.clone());
        prop_assert!(det(&s.left).unwrap().abs().is_one());
        prop_assert!(det(&s.right).unwrap().abs().is_one());
        let f = s.invariant_factors();
        let r = s.rank();
        for w in f[..r].windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(f[r..].iter().all(Zero::is_zero));
        if m.is_square() {
            let d = det(&m).unwrap().abs();
            let prod = f.iter().fold(BigInt::one(), |a, x| a * x);
            prop_assert_eq!(prod, d);
        }
    }

    #[test]
    fn kernel_is_saturated(m in matrix(5, 4)) {
        let k = kernel_int(&m);
        if k.rows() > 0 {
            prop_assert!(k.mul(&m).unwrap().is_zero());
            prop_assert!(snf(&k).invariant_factors().iter().all(One::is_one));
        }
        prop_assert_eq!(k.rows() + snf(&m).rank(), m.rows());
    }

    #[test]
    fn signature_congruence_invariant((g, u) in (1usize..=5).prop_flat_map(|n| (symmetric(n, 4), unimodular(n)))) {
        let s = signature(&g).unwrap();
        prop_assert_eq!(s.dimension(), g.rows());
        prop_assert_eq!(signature(&g.congruent(&u).unwrap()).unwrap(), s);
    }

    #[test]
    fn fqf_polarization_and_scaling(l in (1usize..=3).prop_flat_map(definite_even), seed in any::<u64>()) {
        let f = discriminant_form(&l).unwrap().fqf;
        let elems: Vec<FqfElement> = f.elements().collect();
        let pick = |k: u64| elems[(k % elems.len() as u64) as usize].clone();
        let (x, y) = (pick(seed), pick(seed.rotate_left(17) ^ 0x9e37));
        let lhs = f.eval_q(&f.add(&x, &y));
        let rhs = mod2(f.eval_q(&x) + f.eval_q(&y) + Rational64::from_integer(2) * f.eval_b(&x, &y));
        prop_assert_eq!(lhs, rhs);
        for n in -3i64..=3 {
            let nx = f.scalar_mul(n, &x);
            prop_assert_eq!(f.eval_q(&nx), mod2(Rational64::from_integer(n * n) * f.eval_q(&x)));
        }
    }

    #[test]
    fn discriminant_form_of_sum(a in (1usize..=2).prop_flat_map(definite_even), b in (1usize..=2).prop_flat_map(definite_even)) {
        let sum = discriminant_form(&a.direct_sum(&b)).unwrap().fqf;
        let parts = discriminant_form(&a).unwrap().fqf.direct_sum(&discriminant_form(&b).unwrap().fqf);
        prop_assert!(sum.is_isomorphic_to(&parts).is_isomorphic());
    }

    #[test]
    fn saturation_and_double_complement(l in (2usize..=4).prop_flat_map(definite_even), rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..=2)) {
        let n = l.rank();
        let gens: Vec<Vec<i64>> = rows.into_iter().map(|r| r[..n].to_vec()).collect();
        let t = Sublattice::new(l.clone(), &IntMatrix::from_rows(&gens).unwrap()).unwrap();
        let sat = t.saturation();
        prop_assert_eq!(sat.saturation(), sat.clone());
        prop_assert_eq!(t.orthogonal_complement().orthogonal_complement(), sat);
    }

    #[test]
    fn counts_invariant_under_basis_change((l, u) in (1usize..=4).prop_flat_map(|n| (definite_even(n), unimodular(n)))) {
        let l2 = Lattice::new(l.gram().congruent(&u).unwrap()).unwrap();
        let bound = (0..l.rank()).map(|i| l.gram()[(i, i)].clone()).max().unwrap();
        let a = short_vectors(&l, &bound).unwrap();
        let b = short_vectors(&l2, &bound).unwrap();
        prop_assert_eq!(a.counts, b.counts);
    }
}

#[test]
fn isomorphism_is_symmetric_on_fixtures() {
    let forms = [
        Fqf::diagonal(&[(4, 5, 4), (11, 4, 11)]).unwrap(),
        Fqf::diagonal(&[(44, 23, 44)]).unwrap(),
        Fqf::diagonal(&[(5, -2, 5), (5, -6, 5)]).unwrap(),
        Fqf::diagonal(&[(5, 8, 5), (5, 6, 5)]).unwrap(),
        Fqf::diagonal(&[(2, 1, 2), (2, 1, 2)]).unwrap(),
    ];
    for a in &forms {
        assert!(a.is_isomorphic_to(a).is_isomorphic());
        for b in &forms {
            let ab = a.is_isomorphic_to(b);
            let ba = b.is_isomorphic_to(a);
            assert_eq!(ab.is_isomorphic(), ba.is_isomorphic());
            if let Some(m) = ab.isometry() {
                assert!(m.verify(a, b));
            }
        }
    }
}
