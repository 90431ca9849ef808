use num_bigint::BigInt;
use num_traits::Signed;

use forge_core::enumeration::{
    is_lll_reduced, lll_reduce, min_norm, short_vectors, vectors_with_norm,
};
use forge_core::golay::{build_golay, build_niemeier};
use forge_core::lattice::{root_lattice, RootKind};
use forge_core::linalg::det;

/// Root pairs of E8 in the even coordinate model `D8 ∪ (D8 + ½·1)`,
/// counted by scanning doubled coordinates in [-2, 2]^8.
fn e8_model_root_pairs() -> usize {
    let mut count = 0;
    let mut y = [-2i64; 8];
    'outer: loop {
        // y = 2x; x integral with even sum, or all x_i ∈ ½ + Z with even sum
        let all_even = y.iter().all(|c| c % 2 == 0);
        let all_odd = y.iter().all(|c| c % 2 != 0);
        let sum: i64 = y.iter().sum();
        let in_lattice = (all_even || all_odd) && sum % 4 == 0;
        let norm4: i64 = y.iter().map(|c| c * c).sum();
        if in_lattice && norm4 == 8 {
            count += 1;
        }
        for c in y.iter_mut() {
            if *c < 2 {
                *c += 1;
                continue 'outer;
            }
            *c = -2;
        }
        break;
    }
    count / 2
}

#[test]
fn e8_has_120_root_pairs() {
    let e8 = root_lattice(RootKind::E8).unwrap();
    let r = vectors_with_norm(&e8, &BigInt::from(-2)).unwrap();
    assert_eq!(r.vectors.len(), 120);
    assert_eq!(e8_model_root_pairs(), 120);
    for v in &r.vectors {
        assert_eq!(e8.norm(&v.coords), BigInt::from(-2));
        assert!(v
            .coords
            .iter()
            .find(|c| c.sign() != num_bigint::Sign::NoSign)
            .unwrap()
            .is_positive());
    }
    assert!(r.vectors.windows(2).all(|w| w[0].coords < w[1].coords));
}

#[test]
fn reduction_of_distorted_e8_keeps_det() {
    let e8 = root_lattice(RootKind::E8).unwrap();
    let mut u = forge_core::linalg::IntMatrix::identity(8);
    for i in 1..8 {
        u.sub_row_multiple(i, i - 1, &BigInt::from(-3));
    }
    let distorted = forge_core::lattice::Lattice::new(e8.gram().congruent(&u).unwrap()).unwrap();
    let r = lll_reduce(&distorted).unwrap();
    assert!(is_lll_reduced(&r));
    assert_eq!(det(&r.gram).unwrap(), BigInt::from(1));
    assert!(det(&r.transform).unwrap().abs() == BigInt::from(1));
    assert_eq!(distorted.gram().congruent(&r.transform).unwrap(), r.gram);
}

#[test]
fn niemeier_roots_are_the_coordinate_roots() {
    let n = build_niemeier(&build_golay().unwrap()).unwrap();
    let r = vectors_with_norm(&n.lattice, &BigInt::from(-2)).unwrap();
    assert_eq!(r.vectors.len(), 24);
    assert_eq!(min_norm(&n.lattice).unwrap(), BigInt::from(2));
    let mut roots: Vec<Vec<BigInt>> = n.roots.row_vecs();
    for v in roots.iter_mut() {
        if v.iter()
            .find(|c| c.sign() != num_bigint::Sign::NoSign)
            .unwrap()
            .is_negative()
        {
            v.iter_mut().for_each(|c| *c = -c.clone());
        }
    }
    roots.sort();
    let found: Vec<Vec<BigInt>> = r.vectors.into_iter().map(|v| v.coords).collect();
    assert_eq!(found, roots);
}

#[test]
fn counts_by_norm_in_a2() {
    let a2 = root_lattice(RootKind::A(2)).unwrap();
    let r = short_vectors(&a2, &BigInt::from(-6)).unwrap();
    // hexagonal lattice: 6 vectors of norm 2 and 6 of norm 6
    assert_eq!(r.counts.get(&BigInt::from(-2)), Some(&3));
    assert_eq!(r.counts.get(&BigInt::from(-6)), Some(&3));
    assert_eq!(r.counts.len(), 2);
}
