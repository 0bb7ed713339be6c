use bcpair_core::centralizer::{find_m, solve_centralizer, AnsatzSpec};
use bcpair_core::eigenspace::{expected_charpoly, m_action_with, EigenField};
use bcpair_core::linalg;
use bcpair_core::rat::{int, rat};
use bcpair_core::zoo::monic_a;
use bcpair_core::*;
use proptest::prelude::*;

fn e() -> ParamSet {
    ParamSet::empty()
}

fn dixmier(alpha: i64) -> (DiffOp, DiffOp) {
    let b = FamilySpec::DixmierR2 { alpha: CoefPoly::from_i64(&e(), alpha) }.build().unwrap();
    (b.l, b.m.unwrap())
}

#[test]
fn mironov_genus_two_companion() {
    let spec = FamilySpec::MironovR2 { g: 2, alpha: CoefPoly::one(&e()) };
    let l = spec.build().unwrap().l;
    let (basis, m) = find_m(&l, &AnsatzSpec::new(10)).unwrap();
    assert_eq!(basis.dimension(), 4);
    assert_eq!(m.order(), Some(10));
    assert!(l.commutator(&m).unwrap().is_zero());
    let curve = hyperelliptic_reduce(&l, &m).unwrap();
    assert_eq!(curve.genus(), 2);
    assert!(curve.coeffs().iter().all(|a| a.as_rational().is_some()));
    assert_eq!(poly_in_op(&l, &curve).unwrap(), &m * &m);
    assert!(!curve_report(&curve).unwrap().singular);

    // invariant under M -> -M; a shift of L still reduces to zero remainder
    assert_eq!(hyperelliptic_reduce(&l, &-m.clone()).unwrap(), curve);
    let shifted = &l + &DiffOp::identity(&e()).scale_rat(&int(5));
    let moved = hyperelliptic_reduce(&shifted, &m).unwrap();
    assert_eq!(poly_in_op(&shifted, &moved).unwrap(), &m * &m);
    let r = rank_of(&l, &m).unwrap();
    assert_eq!((4 % r, 10 % r), (0, 0));
}

#[test]
fn chebyshev_family_rank_two() {
    let spec =
        FamilySpec::ChebCanonical { r: 2, g: 1, a: CoefPoly::constant(&e(), monic_a(2)), b: CoefPoly::zero(&e()) };
    let l = spec.build().unwrap().l;
    let (basis, m) = find_m(&l, &AnsatzSpec::new(6)).unwrap();
    assert_eq!(basis.dimension(), 3);
    let pair = CommutingPair::verify(l, m, Provenance::Family(spec)).unwrap();
    assert_eq!(pair.rank, 2);
    for lam in [int(1), rat(-1, 2)] {
        let report = certify_rank(&pair.l, &pair.m, &pair.curve, &lam).unwrap();
        assert_eq!(report.charpoly, expected_charpoly(&pair.curve.eval(&lam).unwrap(), 2));
        assert!(report.certified, "{report:?}");
    }
}

#[test]
fn dixmier_eigenspaces() {
    let (l, m) = dixmier(1);
    let curve = hyperelliptic_reduce(&l, &m).unwrap();
    assert_eq!(curve.rational_coeffs().unwrap(), vec![int(-1), int(0), int(0), int(1)]);

    let kernel = series_kernel(&l, &int(2), 30).unwrap();
    let shifted = &l - &DiffOp::identity(&e()).scale_rat(&int(2));
    for psi in &kernel.basis {
        let image = apply_series(&shifted, psi).unwrap();
        assert_eq!(image.valid_through, 26);
        assert!(image.is_zero());
    }

    let action = m_action(&l, &m, &int(2), &curve).unwrap();
    let sq = linalg::mat_mul(&action.matrix, &action.matrix);
    for (i, row) in sq.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert_eq!(*v, if i == j { int(7) } else { int(0) });
        }
    }
    let report = certify_rank(&l, &m, &curve, &int(2)).unwrap();
    assert_eq!(report.charpoly, vec![int(49), int(0), int(-14), int(0), int(1)]);
    assert_eq!(report.minimal_poly, vec![int(-7), int(0), int(1)]);
    assert_eq!(report.field, EigenField::Quadratic(int(7)));
    assert!(report.certified);
}

#[test]
fn action_is_independent_of_truncation() {
    let (l, m) = dixmier(3);
    let curve = hyperelliptic_reduce(&l, &m).unwrap();
    let base = m_action(&l, &m, &rat(1, 3), &curve).unwrap();
    for extra in [1, 8, 20] {
        assert_eq!(m_action_with(&l, &m, &rat(1, 3), &curve, 14 + extra).unwrap(), base);
    }
    assert!(matches!(
        m_action_with(&l, &m, &rat(1, 3), &curve, 9),
        Err(Error::TruncationTooSmall { got: 9, need: 10 })
    ));
}

#[test]
fn centralizer_requires_numeric_operator() {
    let ps = ParamSet::new(["alpha"]).unwrap();
    let l = FamilySpec::DixmierR2 { alpha: CoefPoly::param(&ps, "alpha").unwrap() }.build().unwrap().l;
    assert_eq!(solve_centralizer(&l, &AnsatzSpec::new(6)).unwrap_err(), Error::SymbolicParams(vec!["alpha".into()]));
}

/// Characteristic polynomial by the Faddeev-LeVerrier recursion.
fn faddeev_leverrier(a: &[Vec<Rat>]) -> Vec<Rat> {
    let n = a.len();
    let mut coeffs = vec![int(0); n + 1];
    coeffs[n] = int(1);
    let mut mk = vec![vec![int(0); n]; n];
    for k in 1..=n {
        // M_k = A M_(k-1) + c_(n-k+1) I
        let mut next = linalg::mat_mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = linalg::mat_mul(a, &mk);
        let trace: Rat = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -trace / int(k as i64);
    }
    coeffs
}

proptest! {
    #[test]
    fn charpoly_matches_faddeev_leverrier(entries in prop::collection::vec(-6i64..=6, 16), size in 1usize..=4, den in 1i64..=3) {
        let a: Vec<Vec<Rat>> = (0..size).map(|i| (0..size).map(|j| rat(entries[4 * i + j], den)).collect()).collect();
        prop_assert_eq!(linalg::charpoly(&a), faddeev_leverrier(&a));
        prop_assert_eq!(linalg::determinant(&a) * int(if size % 2 == 0 { 1 } else { -1 }), linalg::charpoly(&a)[0].clone());
    }
}
