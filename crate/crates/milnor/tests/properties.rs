//! Randomized structural laws: serialization round-trips, product rules,
//! characteristic-polynomial shape, and agreement of the counting backends.
//!
//! Each property is a law the library promises for *every* valid input, so
//! the generators here are deliberately unbiased: random small integer
//! matrices, filtered only by well-formedness.

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use milnor::arrangement::CentralArrangement;
use milnor::decompose::{irreducible_decomposition, monodromy_report};
use milnor::ffcount::{CountMethod, PointCounter, PrimeField};
use milnor::lattice::IntersectionLattice;
use milnor::poly::IntPoly;

/// Random rows with entries in -2..=2; dimension and row count vary.
fn rows_strategy(max_dim: usize, max_rows: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2..=max_dim).prop_flat_map(move |dim| {
        proptest::collection::vec(proptest::collection::vec(-2i64..=2, dim), 1..=max_rows)
    })
}

/// Any well-formed central arrangement (zero rows and duplicate
/// hyperplanes are rejected by the constructor, not by the generator).
fn arrangement(max_dim: usize, max_rows: usize) -> impl Strategy<Value = CentralArrangement> {
    rows_strategy(max_dim, max_rows).prop_filter_map("rows must form a central arrangement", |rows| {
        CentralArrangement::from_integer_rows(&rows).ok()
    })
}

/// Arrangements whose normals span the ambient space, as the point
/// counter requires.
fn essential_arrangement(max_dim: usize, max_rows: usize) -> impl Strategy<Value = CentralArrangement> {
    arrangement(max_dim, max_rows).prop_filter("normals must span", CentralArrangement::is_essential)
}

proptest! {
    #[test]
    fn document_round_trip_is_identity(a in arrangement(4, 6)) {
        let reparsed = CentralArrangement::parse_document(&a.to_document()).unwrap();
        prop_assert_eq!(&reparsed, &a);

        let named = a.with_name("round-trip");
        let reparsed = CentralArrangement::parse_document(&named.to_document()).unwrap();
        prop_assert_eq!(reparsed, named);
    }

    #[test]
    fn decomposition_adds_over_products(
        a in essential_arrangement(3, 5),
        b in essential_arrangement(3, 5),
    ) {
        let da = irreducible_decomposition(&a).unwrap();
        let db = irreducible_decomposition(&b).unwrap();
        let dp = irreducible_decomposition(&a.product(&b)).unwrap();

        prop_assert_eq!(dp.block_count(), da.block_count() + db.block_count());
        prop_assert_eq!(
            dp.monodromy_order(),
            da.monodromy_order().gcd(&db.monodromy_order())
        );

        let mut expected_sizes = da.factor_sizes();
        expected_sizes.extend(db.factor_sizes());
        expected_sizes.sort_unstable();
        let mut got_sizes = dp.factor_sizes();
        got_sizes.sort_unstable();
        prop_assert_eq!(got_sizes, expected_sizes);
    }

    #[test]
    fn monodromy_order_divides_degree_and_flags_agree(a in essential_arrangement(4, 6)) {
        let report = monodromy_report(&a).unwrap();
        let d0 = report.decomposition.monodromy_order();
        prop_assert_eq!(a.degree() % d0, 0);
        prop_assert_eq!(report.trivial(), d0 == 1);
        let lattice = IntersectionLattice::build(&a).unwrap();
        prop_assert_eq!(&report.projective_euler, &lattice.projective_euler_characteristic());
    }

    #[test]
    fn chi_is_multiplicative_over_products(
        a in arrangement(3, 5),
        b in arrangement(3, 5),
    ) {
        let chi_a = IntersectionLattice::build(&a).unwrap().characteristic_polynomial();
        let chi_b = IntersectionLattice::build(&b).unwrap().characteristic_polynomial();
        let chi_prod =
            IntersectionLattice::build(&a.product(&b)).unwrap().characteristic_polynomial();
        prop_assert_eq!(chi_prod, chi_a.mul(&chi_b));
    }

    #[test]
    fn chi_alternates_in_sign_down_to_the_corank(a in arrangement(4, 6)) {
        let n = a.ambient_dim();
        let r = a.rank();
        let lattice = IntersectionLattice::build(&a).unwrap();
        let chi = lattice.characteristic_polynomial();
        prop_assert_eq!(chi.degree(), n);
        for k in 0..=n {
            let c = chi.coeff(k);
            if k < n - r {
                prop_assert_eq!(c, BigInt::from(0));
            } else if (n - k) % 2 == 0 {
                prop_assert!(c > BigInt::from(0), "coeff of t^{k} should be positive in {chi}");
            } else {
                prop_assert!(c < BigInt::from(0), "coeff of t^{k} should be negative in {chi}");
            }
        }
        // chi = (t - 1) * projective count polynomial, exactly.
        let projective = lattice.projective_count_polynomial();
        prop_assert_eq!(projective.mul(&IntPoly::from_coeffs(vec![-1, 1])), chi);
    }

    #[test]
    fn essentialization_shifts_chi_by_a_power_of_t(a in arrangement(4, 6)) {
        let chi = IntersectionLattice::build(&a).unwrap().characteristic_polynomial();
        let ess = a.essentialize();
        let chi_ess = IntersectionLattice::build(&ess).unwrap().characteristic_polynomial();
        let shift = IntPoly::monomial(BigInt::from(1), a.ambient_dim() - a.rank());
        prop_assert_eq!(chi, shift.mul(&chi_ess));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counting_backends_agree_and_match_chi(a in essential_arrangement(3, 6)) {
        let counter = PointCounter::new(&a).unwrap();
        let chi = IntersectionLattice::build(&a).unwrap().characteristic_polynomial();
        for p in [2u64, 3, 5, 7] {
            if !counter.is_good_prime(p) {
                continue;
            }
            let field = PrimeField::new(p).unwrap();
            let brute = counter.count_milnor_fiber(&field, CountMethod::Brute).unwrap();
            let factored = counter.count_milnor_fiber(&field, CountMethod::Factored).unwrap();
            let fast = counter.count_milnor_fiber(&field, CountMethod::Fast).unwrap();
            prop_assert_eq!(&brute.value, &factored.value);
            prop_assert_eq!(&brute.value, &fast.value);

            let complement = counter.count_affine_complement(&field).unwrap();
            prop_assert_eq!(complement.value, chi.eval(&BigInt::from(p)));
        }
    }

    #[test]
    fn thread_count_never_changes_counts(a in essential_arrangement(3, 5)) {
        let one = PointCounter::new(&a).unwrap().with_threads(1);
        let three = PointCounter::new(&a).unwrap().with_threads(3);
        for p in [3u64, 5] {
            if !one.is_good_prime(p) {
                continue;
            }
            let field = PrimeField::new(p).unwrap();
            for method in [CountMethod::Brute, CountMethod::Factored, CountMethod::Fast] {
                let serial = one.count_milnor_fiber(&field, method).unwrap();
                let parallel = three.count_milnor_fiber(&field, method).unwrap();
                prop_assert_eq!(serial.value, parallel.value);
            }
        }
    }
}

#[test]
fn documents_accept_rational_coefficients() {
    // Rational rows canonicalize to the primitive integer normal, so these
    // two documents describe the same arrangement.
    let halves = CentralArrangement::parse_document(
        r#"{"hyperplanes": [["1/2","1"],["1","0"]]}"#,
    )
    .unwrap();
    let integers =
        CentralArrangement::parse_document(r#"{"hyperplanes": [["1","2"],["1","0"]]}"#).unwrap();
    assert_eq!(halves, integers);
}
