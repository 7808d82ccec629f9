use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use crate::dga::{ring_for_coeff, structural_suite, MonomialComplex, SignMode};
use crate::koszul::{check_homotopy_s, check_ideal_homotopy, quotient_quasi_iso_check, IdealIdentity};
use crate::linalg::complex::to_field_rows;
use crate::linalg::field::rank;
use crate::linalg::{smith_normal_form, Coeff, CohomologyResult, IntegerMatrix, Rationals};
use crate::polyhedral::{
    b_dga_reduction_check, build_bxk, oracle_compare_cxx, rxk_summand_check, verify_f_x, verify_h_g, Space,
};
use crate::real_mac::{basis_size, build_bk, build_rbar, rbar_product, verify_f};
use crate::report::CheckReport;
use crate::simplicial::{
    catalog, mask_vertices, oracle::suspended_full_subcomplex, reduced_cohomology, splitting_oracle, ShiftMode,
    SimplicialComplex, VertexSubset,
};

fn complex_from_masks(m: usize, masks: &[u64]) -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = masks.iter().filter(|&&f| f != 0).map(|&f| mask_vertices(f)).collect();
    SimplicialComplex::from_facets(m, &facets).unwrap()
}

/// A complex on `lo..=hi` vertices, ghost vertices allowed.
fn complexes(lo: usize, hi: usize) -> impl Strategy<Value = SimplicialComplex> {
    (lo..=hi).prop_flat_map(|m| {
        proptest::collection::vec(0u64..(1 << m), 0..6).prop_map(move |masks| complex_from_masks(m, &masks))
    })
}

fn matrices() -> impl Strategy<Value = IntegerMatrix> {
    (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c).prop_map(move |entries| {
            let mut a = IntegerMatrix::zeros(r, c);
            for (n, e) in entries.into_iter().enumerate() {
                a.set(n / c.max(1), n % c.max(1), BigInt::from(e));
            }
            a
        })
    })
}

fn all_pass(reports: &[CheckReport]) -> Result<(), TestCaseError> {
    for r in reports {
        prop_assert!(!r.is_fail(), "{} failed: {:?}", r.check, r.witness);
    }
    Ok(())
}

/// Universal coefficients for cochains: dim H^d(C; F_p) = r_d + t_p(H^d) + t_p(H^{d+1}).
fn uct_holds(z: &CohomologyResult, zp: &CohomologyResult, p: u64) -> bool {
    let p = BigInt::from(p);
    let tp = |d: i32| z.get(d).torsion.iter().filter(|t| (*t % &p).is_zero()).count();
    let lo = z.degrees().chain(zp.degrees()).min().unwrap_or(0) - 1;
    let hi = z.degrees().chain(zp.degrees()).max().unwrap_or(0) + 1;
    (lo..=hi).all(|d| zp.get(d).free_rank == z.get(d).free_rank + tp(d) + tp(d + 1))
}

fn euler_of_basis(c: &MonomialComplex) -> i64 {
    c.basis()
        .iter()
        .map(|b| if b.total_degree() % 2 == 0 { 1 } else { -1 })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_normal_form_is_valid(a in matrices()) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d.clone());
        prop_assert!(snf.u.determinant().abs().is_one());
        prop_assert!(snf.v.determinant().abs().is_one());
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                prop_assert!(i == j || snf.d.get(i, j).is_zero());
            }
        }
        let f = snf.invariant_factors();
        prop_assert!(f.iter().all(|x| x.is_positive()));
        prop_assert!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        let tail = snf.rank()..snf.d.rows().min(snf.d.cols());
        prop_assert!(tail.into_iter().all(|i| snf.d.get(i, i).is_zero()));
        prop_assert_eq!(rank(&Rationals, to_field_rows(&Rationals, &a), a.cols()), snf.rank());
    }

    #[test]
    fn full_subcomplexes(k in complexes(1, 6), j in any::<u64>(), j2 in any::<u64>()) {
        let m = k.m();
        prop_assert_eq!(k.full_subcomplex(VertexSubset::full(m)), k.clone());
        let j = VertexSubset::from_mask(j & ((1 << m) - 1));
        let inner = VertexSubset::from_mask(j2 & j.mask());
        let kj = k.full_subcomplex(j);
        for &s in kj.simplices() {
            for b in mask_vertices(s) {
                prop_assert!(kj.contains(s & !(1 << (b - 1))));
            }
        }
        // K_J' computed directly or through K_J
        let verts = j.vertices();
        let reindexed: Vec<usize> = inner.vertices().iter().map(|v| verts.iter().position(|w| w == v).unwrap() + 1).collect();
        let nested = kj.full_subcomplex(VertexSubset::new(&reindexed, kj.m()).unwrap());
        prop_assert_eq!(nested, k.full_subcomplex(inner));
    }

    #[test]
    fn cones_are_acyclic(base in complexes(0, 4)) {
        let m = base.m() + 1;
        let apex = 1u64 << (m - 1);
        let masks: Vec<u64> = base.facets().iter().map(|&f| f | apex).collect();
        let cone = complex_from_masks(m, &masks);
        prop_assert!(cone.is_cone());
        for coeff in [Coeff::Z, Coeff::Q, Coeff::Zp(2)] {
            prop_assert!(reduced_cohomology(&cone, coeff).unwrap().is_zero());
        }
    }

    #[test]
    fn euler_and_universal_coefficients(k in complexes(1, 6)) {
        let z = reduced_cohomology(&k, Coeff::Z).unwrap();
        let q = reduced_cohomology(&k, Coeff::Q).unwrap();
        for (d, g) in q.iter() {
            prop_assert_eq!(g.free_rank, z.get(*d).free_rank);
        }
        prop_assert_eq!(q.total_free_rank(), z.total_free_rank());
        for p in [2, 3] {
            let zp = reduced_cohomology(&k, Coeff::Zp(p)).unwrap();
            prop_assert!(uct_holds(&z, &zp, p));
            prop_assert_eq!(zp.euler_characteristic(), k.reduced_euler_characteristic());
        }
        prop_assert_eq!(q.euler_characteristic(), k.reduced_euler_characteristic());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn real_models_agree(k in complexes(1, 5)) {
        let m = k.m();
        let rbar = build_rbar(&k);
        let (bk, bk_product) = build_bk(&k);
        let want: usize = k.simplices().iter().map(|s| 1usize << (m - s.count_ones() as usize)).sum();
        prop_assert_eq!(basis_size(&k), want);
        prop_assert_eq!(rbar.len(), want);
        prop_assert_eq!(bk.len(), want);

        all_pass(&structural_suite(&rbar, Some((&rbar_product(&k), SignMode::FirstDegree))))?;
        all_pass(&structural_suite(&bk, Some((&bk_product, SignMode::TotalDegree))))?;
        all_pass(&[verify_f(&k)])?;

        let oracle = splitting_oracle(&k, Coeff::Z, &ShiftMode::Real).unwrap();
        prop_assert_eq!(rbar.cohomology(Coeff::Z).unwrap(), oracle.clone());
        prop_assert_eq!(bk.cohomology(Coeff::Z).unwrap(), oracle);

        // alternating counts of basis elements and of cohomology ranks
        for c in [&rbar, &bk] {
            let chi = euler_of_basis(c);
            prop_assert_eq!(c.cohomology(Coeff::Q).unwrap().euler_characteristic(), chi);
            prop_assert_eq!(c.cohomology(Coeff::Zp(2)).unwrap().euler_characteristic(), chi);
        }

        // per support component against the suspended full subcomplex
        let by_support = bk.cohomology_by_support(Coeff::Q).unwrap();
        for j in 0..(1u64 << m) {
            let got = by_support.get(&j).cloned().unwrap_or_default();
            let want = suspended_full_subcomplex(&k, VertexSubset::from_mask(j), Coeff::Q).unwrap();
            prop_assert_eq!(got.euler_characteristic(), want.euler_characteristic(), "J = {:b}", j);
        }

        let ring = ring_for_coeff(&bk, &bk_product, Coeff::Q).unwrap();
        prop_assert!(ring.graded_commutative);
    }

    #[test]
    fn relabeling_preserves_cohomology(
        (k, perm) in complexes(1, 5).prop_flat_map(|k| {
            let ids: Vec<usize> = (1..=k.m()).collect();
            (Just(k), Just(ids).prop_shuffle())
        })
    ) {
        let relabeled = k.relabel(&perm).unwrap();
        for coeff in [Coeff::Z, Coeff::Zp(2)] {
            prop_assert_eq!(
                build_bk(&relabeled).0.cohomology(coeff).unwrap(),
                build_bk(&k).0.cohomology(coeff).unwrap()
            );
        }
    }

    #[test]
    fn koszul_homotopies_and_quotient(k in complexes(1, 4), extra in 0usize..2) {
        let cap = k.m() + extra;
        all_pass(&[check_ideal_homotopy(&k, cap, IdealIdentity::Sum, Coeff::Z)])?;
        all_pass(&[check_ideal_homotopy(&k, cap, IdealIdentity::Difference, Coeff::Zp(2))])?;
        for coeff in [Coeff::Z, Coeff::Zp(2)] {
            all_pass(&quotient_quasi_iso_check(&k, cap, coeff).unwrap())?;
        }
    }

    #[test]
    fn resolution_homotopy(m in 1usize..=3, cap in 0usize..=4) {
        all_pass(&[check_homotopy_s(m, cap)])?;
    }
}

fn spaces() -> impl Strategy<Value = Space> {
    prop_oneof![
        (1i32..=3).prop_map(Space::sphere),
        Just(Space::wedge_of_spheres("S1vS2", &[1, 2])),
        Just(Space::wedge_of_spheres("S2vS2", &[2, 2])),
        Just(Space::cp2()),
        Just(Space::circle_dga()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn polyhedral_models(
        (k, spaces) in complexes(1, 3).prop_flat_map(|k| {
            let m = k.m();
            (Just(k), proptest::collection::vec(spaces(), m))
        })
    ) {
        let plain = spaces.iter().all(|s| !s.has_differential());
        all_pass(&verify_h_g(&k, &spaces).unwrap())?;
        all_pass(&[verify_f_x(&k, &spaces).unwrap()])?;
        if plain {
            let (bxk, product) = build_bxk(&k, &spaces).unwrap();
            all_pass(&structural_suite(&bxk, Some((&product, SignMode::TotalDegree))))?;
            all_pass(&oracle_compare_cxx(&k, &spaces, Coeff::Z).unwrap())?;
            all_pass(&[b_dga_reduction_check(&k, &spaces).unwrap()])?;
        }
        let spheres = spaces.iter().all(|s| s.len() == 1 && !s.has_differential());
        all_pass(&[rxk_summand_check(&k, &spaces, Coeff::Z, spheres).unwrap().0])?;
    }
}

#[test]
fn catalog_universal_coefficients() {
    for name in ["rp2_6", "gon5", "points3", "boundary4", "simplex3"] {
        let k = catalog(name).unwrap();
        let bk = build_bk(&k).0;
        let z = bk.cohomology(Coeff::Z).unwrap();
        for p in [2, 3] {
            assert!(
                uct_holds(&z, &bk.cohomology(Coeff::Zp(p)).unwrap(), p),
                "{name} over Z{p}"
            );
        }
        let q = bk.cohomology(Coeff::Q).unwrap();
        let free: BTreeMap<i32, usize> = z
            .iter()
            .filter(|(_, g)| g.free_rank > 0)
            .map(|(d, g)| (*d, g.free_rank))
            .collect();
        let qr: BTreeMap<i32, usize> = q
            .iter()
            .filter(|(_, g)| g.free_rank > 0)
            .map(|(d, g)| (*d, g.free_rank))
            .collect();
        assert_eq!(free, qr, "{name}");
    }
}

#[test]
fn every_single_sign_fault_is_caught() {
    for name in ["gon4", "points2"] {
        let k = catalog(name).unwrap();
        let (bk, _) = build_bk(&k);
        let rbar = build_rbar(&k);
        let f = crate::real_mac::map_f(&k);
        for (model, faulty_bk) in [("bk", true), ("rbar", false)] {
            let c = if faulty_bk { &bk } else { &rbar };
            for source in 0..c.len() {
                for term in 0..c.d(source).len() {
                    let bad = c.with_flipped_sign(source, term);
                    let (r, b) = if faulty_bk { (&rbar, &bad) } else { (&bad, &bk) };
                    let report = crate::real_mac::check_signed_chain_map("f", r, b, &f);
                    assert!(report.is_fail(), "{name} {model} {source}:{term} not caught");
                    assert!(report.witness.is_some());
                }
            }
        }
    }
}

#[test]
fn product_faults_are_caught() {
    let k = catalog("gon4").unwrap();
    let (bk, product) = build_bk(&k);
    let mut caught = 0;
    let mut tried = 0;
    for a in 0..bk.len() {
        for b in 0..bk.len() {
            if product.get(a, b).is_empty() || a == b {
                continue;
            }
            tried += 1;
            let bad = product.with_flipped_entry(a, b, 0);
            let reports = structural_suite(&bk, Some((&bad, SignMode::TotalDegree)));
            if reports.iter().any(|r| r.is_fail()) {
                caught += 1;
            }
        }
    }
    assert!(tried > 0);
    assert!(
        caught * 10 >= tried * 9,
        "only {caught} of {tried} product faults caught"
    );
}
