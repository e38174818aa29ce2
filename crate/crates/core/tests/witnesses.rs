//! End-to-end checks of the witness constructions.
//!
//! Where a class is small enough to enumerate, every block-lower-triangular
//! member is driven through the path builders and the resulting certificate
//! lengths are checked for exactness by pure logic: a member that does not
//! commute with the representative is at distance at least 2, so a validated
//! length-2 certificate is optimal without any search.  The distance
//! witnesses carry their own exhaustive verification; the tests here confirm
//! the advertised error behaviour on unsupported shapes and the tamper
//! resistance of certificates.

use cigraph::gf::{field, Elem};
use cigraph::graph::{GraphError, PathCertificate};
use cigraph::involutions::{
    canonical_t, enumerate_class, transposed_t, ClassSpec, Involution, DEFAULT_CLASS_CAP,
};
use cigraph::matrix::{conjugate, Mat};
use cigraph::witnesses::{
    path_lower_triangular, path_n_ge_4k, path_to_transpose, witness_distance3_char2,
    witness_distance3_odd, witness_distance4_char2, VerifiedBound, Verification, WitnessError,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn upper_right_is_zero(spec: &ClassSpec, x: &Involution) -> bool {
    let (n, k) = (spec.n(), spec.k());
    x.mat()
        .block(0..n - k, n - k..n)
        .codes()
        .iter()
        .all(|&c| c == 0)
}

/// Expected exact distance for a block-lower member reached by a length <= 2
/// certificate: 0 for the representative itself, 1 for a commuting member,
/// and otherwise 2 (a non-commuting member cannot be closer).
fn short_distance(t: &Involution, x: &Involution) -> usize {
    if x.mat() == t.mat() {
        0
    } else if x.mat().commutes_with(t.mat()) {
        1
    } else {
        2
    }
}

#[test]
fn block_lower_paths_are_exact_across_the_rank_two_class_over_gf2() {
    let f = field(2, 1).unwrap();
    let spec = ClassSpec::new(&f, 4, 2).unwrap();
    let t = canonical_t(&spec);
    let members = enumerate_class(&spec, DEFAULT_CLASS_CAP).unwrap();
    assert_eq!(members.len(), 210);
    let mut covered = 0usize;
    for x in members.iter().filter(|x| upper_right_is_zero(&spec, x)) {
        let cert = path_lower_triangular(&t, x).unwrap();
        assert_eq!(cert.length(), short_distance(&t, x));
        assert_eq!(cert.vertices().first().unwrap(), t.mat());
        assert_eq!(cert.vertices().last().unwrap(), x.mat());
        covered += 1;
    }
    // The block-lower members include the representative, invertible
    // couplings of the identity blocks, and the mixed-rank shapes.
    assert!(covered > 20, "only {covered} block-lower members found");
}

#[test]
fn block_lower_paths_are_exact_across_the_rank_two_class_over_gf3() {
    let f = field(3, 1).unwrap();
    let spec = ClassSpec::new(&f, 4, 2).unwrap();
    let t = canonical_t(&spec);
    let members = enumerate_class(&spec, DEFAULT_CLASS_CAP).unwrap();
    assert_eq!(members.len(), 10530);
    let mut covered = 0usize;
    for x in members.iter().filter(|x| upper_right_is_zero(&spec, x)) {
        let cert = path_lower_triangular(&t, x).unwrap();
        assert_eq!(cert.length(), short_distance(&t, x));
        covered += 1;
    }
    // 81 couplings each for the two scalar diagonal shapes plus 12*12*9
    // mixed shapes.
    assert_eq!(covered, 1458);
}

#[test]
fn half_dimension_odd_rank_couplings_fall_back_to_three_steps() {
    let f = field(3, 1).unwrap();
    for n in [6usize, 10] {
        let k = n / 2;
        let spec = ClassSpec::new(&f, n, k).unwrap();
        let t = canonical_t(&spec);
        // Invertible coupling of the two scalar blocks: the sign-pattern
        // search is empty here, so the path must route through two
        // plane-aligned members.
        let two = Elem(2);
        let mut m = Mat::identity(&f, n);
        for i in 0..k {
            m.set(k + i, k + i, f.neg(Elem::ONE));
            m.set(k + i, i, two);
        }
        let x = Involution::new(&spec, m).unwrap();
        let cert = path_lower_triangular(&t, &x).unwrap();
        assert_eq!(cert.length(), 3, "invertible coupling at n = {n}");
    }
}

#[test]
fn half_dimension_odd_rank_degenerate_couplings_still_take_two_steps() {
    let f = field(3, 1).unwrap();
    let spec = ClassSpec::new(&f, 6, 3).unwrap();
    let t = canonical_t(&spec);
    // Rank-two coupling: one tied pair short of full, which leaves a free
    // sign position and a two-step path despite n = 2k with k odd.
    let two = Elem(2);
    let mut m = Mat::identity(&f, 6);
    for i in 0..3 {
        m.set(3 + i, 3 + i, f.neg(Elem::ONE));
    }
    m.set(3, 0, two);
    m.set(4, 1, two);
    let x = Involution::new(&spec, m).unwrap();
    let cert = path_lower_triangular(&t, &x).unwrap();
    assert_eq!(cert.length(), 2);
}

#[test]
fn wide_corank_paths_are_exact_across_the_rank_one_class() {
    let f = field(3, 1).unwrap();
    let spec = ClassSpec::new(&f, 4, 1).unwrap();
    let t = canonical_t(&spec);
    let members = enumerate_class(&spec, DEFAULT_CLASS_CAP).unwrap();
    assert_eq!(members.len(), 1080);
    for x in &members {
        let cert = path_n_ge_4k(&t, x).unwrap();
        assert_eq!(cert.length(), short_distance(&t, x));
    }
}

#[test]
fn wide_corank_paths_cover_sampled_conjugates_in_dimension_five() {
    let f = field(3, 1).unwrap();
    let spec = ClassSpec::new(&f, 5, 1).unwrap();
    let t = canonical_t(&spec);
    let mut rng = StdRng::seed_from_u64(42);
    for _ in 0..1000 {
        let g = loop {
            let codes: Vec<u8> = (0..25).map(|_| rng.gen_range(0..3u8)).collect();
            let candidate = Mat::from_codes(&f, 5, 5, codes).unwrap();
            if candidate.is_invertible() {
                break candidate;
            }
        };
        let x = Involution::new(&spec, conjugate(&g, t.mat()).unwrap()).unwrap();
        let cert = path_n_ge_4k(&t, &x).unwrap();
        assert_eq!(cert.length(), short_distance(&t, &x));
    }
}

#[test]
fn distance_three_witnesses_verify_in_odd_characteristic() {
    let f = field(3, 1).unwrap();
    // (4, 2) and (5, 2) take the coupled-shift branch, (3, 1) and (6, 2)
    // the unipotent-product branch.
    for (n, k) in [(3usize, 1usize), (4, 2), (5, 2), (6, 2)] {
        let spec = ClassSpec::new(&f, n, k).unwrap();
        let x = witness_distance3_odd(&spec).unwrap();
        let t = canonical_t(&spec);
        assert!(!x.mat().commutes_with(t.mat()), "witness for ({n}, {k})");
    }
}

#[test]
fn distance_three_witness_with_two_unipotent_blocks() {
    let f = field(3, 1).unwrap();
    let spec = ClassSpec::new(&f, 7, 2).unwrap();
    let x = witness_distance3_odd(&spec).unwrap();
    assert!(!x.mat().commutes_with(canonical_t(&spec).mat()));
}

#[test]
fn distance_three_witnesses_verify_in_characteristic_two() {
    let f = field(2, 1).unwrap();
    for (n, k) in [(4usize, 2usize), (5, 2), (7, 2)] {
        let spec = ClassSpec::new(&f, n, k).unwrap();
        let x = witness_distance3_char2(&spec).unwrap();
        let t = canonical_t(&spec);
        assert!(!x.mat().commutes_with(t.mat()), "witness for ({n}, {k})");
    }
}

#[test]
fn transpose_pair_distance_is_exactly_four_in_dimension_six() {
    let f = field(2, 1).unwrap();
    let spec = ClassSpec::new(&f, 6, 3).unwrap();
    // Lower bound: no pair drawn from the two commuting neighbourhoods
    // commutes, so no path of length three or less exists.
    let report = witness_distance4_char2(&spec).unwrap();
    assert_eq!(report.bound, VerifiedBound::AtLeast(4));
    match report.verification {
        Verification::ExhaustiveScan { pairs } => assert!(pairs > 0),
        other => panic!("expected an exhaustive scan, got {other:?}"),
    }
    // Upper bound: an explicit validated four-edge chain.
    let cert = path_to_transpose(&spec).unwrap();
    assert_eq!(cert.length(), 4);
    assert_eq!(cert.vertices().first().unwrap(), canonical_t(&spec).mat());
    assert_eq!(
        cert.vertices().last().unwrap(),
        transposed_t(&spec).mat()
    );
}

#[test]
fn transpose_chain_scales_to_dimension_ten_without_enumeration() {
    let f = field(2, 1).unwrap();
    let spec = ClassSpec::new(&f, 10, 5).unwrap();
    let cert = path_to_transpose(&spec).unwrap();
    assert_eq!(cert.length(), 4);
    assert_eq!(
        cert.vertices().last().unwrap(),
        transposed_t(&spec).mat()
    );
}

#[test]
fn edgeless_dimension_two_class_still_yields_the_vacuous_lower_bound() {
    let f = field(2, 1).unwrap();
    let spec = ClassSpec::new(&f, 2, 1).unwrap();
    // The rank-one class in dimension two has an empty commuting
    // neighbourhood, so the scan is vacuous and the bound is honest.
    let report = witness_distance4_char2(&spec).unwrap();
    assert_eq!(report.bound, VerifiedBound::AtLeast(4));
    assert_eq!(report.verification, Verification::ExhaustiveScan { pairs: 0 });
    // The matching chain does not exist: the graph has no edges at all.
    assert!(matches!(
        path_to_transpose(&spec),
        Err(WitnessError::BranchUnavailable { .. })
    ));
}

#[test]
fn builders_reject_unsupported_shapes() {
    let f2 = field(2, 1).unwrap();
    let f3 = field(3, 1).unwrap();

    // A member with a nonzero upper-right block is not block-lower.
    let spec = ClassSpec::new(&f2, 4, 2).unwrap();
    let t = canonical_t(&spec);
    let skew = enumerate_class(&spec, DEFAULT_CLASS_CAP)
        .unwrap()
        .into_iter()
        .find(|x| !upper_right_is_zero(&spec, x))
        .unwrap();
    assert!(matches!(
        path_lower_triangular(&t, &skew),
        Err(WitnessError::NotLowerTriangular)
    ));

    // Paths start from the canonical representative only.
    let other = enumerate_class(&spec, DEFAULT_CLASS_CAP)
        .unwrap()
        .into_iter()
        .find(|x| x.mat() != t.mat())
        .unwrap();
    assert!(matches!(
        path_lower_triangular(&other, &t),
        Err(WitnessError::NotCanonicalStart)
    ));

    // Mixing classes is rejected before any construction runs.
    let spec_other = ClassSpec::new(&f2, 4, 1).unwrap();
    assert!(matches!(
        path_lower_triangular(&t, &canonical_t(&spec_other)),
        Err(WitnessError::ClassMismatch)
    ));

    // Ranks above half the dimension mirror low-rank classes under
    // negation; the builders do not cover them directly.
    let mirror = ClassSpec::new(&f3, 4, 3).unwrap();
    let tm = canonical_t(&mirror);
    let mut m = Mat::identity(&f3, 4);
    for i in 1..4 {
        m.set(i, i, f3.neg(Elem::ONE));
    }
    m.set(1, 0, Elem::ONE);
    let target = Involution::new(&mirror, m).unwrap();
    assert!(matches!(
        path_lower_triangular(&tm, &target),
        Err(WitnessError::BranchUnavailable { .. })
    ));

    // The rank-one class in dimension two is a disjoint union of edges.
    let tiny = ClassSpec::new(&f3, 2, 1).unwrap();
    let tt = canonical_t(&tiny);
    let mut m = Mat::identity(&f3, 2);
    m.set(1, 1, f3.neg(Elem::ONE));
    m.set(1, 0, Elem::ONE);
    let target = Involution::new(&tiny, m).unwrap();
    assert!(matches!(
        path_lower_triangular(&tt, &target),
        Err(WitnessError::BranchUnavailable { .. })
    ));

    // The two-step construction needs odd characteristic and n >= 4k.
    let spec = ClassSpec::new(&f3, 4, 2).unwrap();
    let t = canonical_t(&spec);
    assert!(matches!(
        path_n_ge_4k(&t, &t),
        Err(WitnessError::BranchUnavailable { .. })
    ));
    let spec = ClassSpec::new(&f2, 8, 2).unwrap();
    let t = canonical_t(&spec);
    assert!(matches!(
        path_n_ge_4k(&t, &t),
        Err(WitnessError::BranchUnavailable { .. })
    ));

    // Witness families outside their parameter windows.
    assert!(matches!(
        witness_distance3_odd(&ClassSpec::new(&f3, 8, 2).unwrap()),
        Err(WitnessError::BranchUnavailable { .. })
    ));
    assert!(matches!(
        witness_distance3_odd(&ClassSpec::new(&f2, 4, 2).unwrap()),
        Err(WitnessError::BranchUnavailable { .. })
    ));
    assert!(matches!(
        witness_distance3_char2(&ClassSpec::new(&f2, 6, 3).unwrap()),
        Err(WitnessError::BranchUnavailable { .. })
    ));
    assert!(matches!(
        witness_distance3_char2(&ClassSpec::new(&f3, 4, 2).unwrap()),
        Err(WitnessError::BranchUnavailable { .. })
    ));
    assert!(matches!(
        witness_distance4_char2(&ClassSpec::new(&f2, 6, 2).unwrap()),
        Err(WitnessError::BranchUnavailable { .. })
    ));
    assert!(matches!(
        witness_distance4_char2(&ClassSpec::new(&f3, 6, 3).unwrap()),
        Err(WitnessError::BranchUnavailable { .. })
    ));
    assert!(matches!(
        path_to_transpose(&ClassSpec::new(&f2, 6, 2).unwrap()),
        Err(WitnessError::BranchUnavailable { .. })
    ));
    assert!(matches!(
        path_to_transpose(&ClassSpec::new(&f3, 6, 3).unwrap()),
        Err(WitnessError::BranchUnavailable { .. })
    ));
}

#[test]
fn tampered_certificates_are_rejected() {
    let f = field(3, 1).unwrap();
    let spec = ClassSpec::new(&f, 4, 2).unwrap();
    let t = canonical_t(&spec);

    // An edge between non-commuting members is refused.
    let hostile = enumerate_class(&spec, DEFAULT_CLASS_CAP)
        .unwrap()
        .into_iter()
        .find(|x| !x.mat().commutes_with(t.mat()))
        .unwrap();
    let cert = PathCertificate::new(vec![t.mat().clone(), hostile.into_mat()]);
    assert!(matches!(
        cert.validate(&spec),
        Err(GraphError::BadCertificate { step: 0, .. })
    ));

    // A vertex outside the class is refused even if every edge commutes.
    let cert = PathCertificate::new(vec![t.mat().clone(), Mat::identity(&f, 4)]);
    assert!(cert.validate(&spec).is_err());

    // The empty walk is not a path.
    let cert = PathCertificate::new(Vec::new());
    assert!(cert.validate(&spec).is_err());
}
