use bcpair_core::rat::{int, rat};
use bcpair_core::zoo::monic_a;
use bcpair_core::*;

fn alpha_ps() -> ParamSet {
    ParamSet::new(["alpha"]).unwrap()
}

fn alpha() -> CoefPoly {
    CoefPoly::param(&alpha_ps(), "alpha").unwrap()
}

fn d(k: usize) -> DiffOp {
    DiffOp::d_pow(&alpha_ps(), k)
}

fn c(v: Rat) -> CoefPoly {
    CoefPoly::constant(&alpha_ps(), v)
}

fn x(e: u32) -> CoefPoly {
    CoefPoly::x(&alpha_ps()).pow(e)
}

/// `sum coeff * D^k` for `(k, coeff)` pairs.
fn d_poly(terms: &[(usize, Rat)]) -> DiffOp {
    let mut out = DiffOp::zero(&alpha_ps());
    for (k, v) in terms {
        out = &out + &d(*k).scale_rat(v);
    }
    out
}

fn cheb_family(r: i64, g: u32, b: CoefPoly) -> DiffOp {
    FamilySpec::ChebCanonical { r, g, a: c(monic_a(r)), b }.build().unwrap().l
}

fn gg(g: u32) -> Rat {
    int(i64::from(g * (g + 1)))
}

/// The inner operator written out with `D` powers and the trailing
/// `x^2 + alpha`, plus the weight `r^2` and the `D`-polynomial subtracted.
fn written(inner: DiffOp, r: i64, g: u32, tail: &[(usize, Rat)]) -> DiffOp {
    let inner = &inner + &DiffOp::mul_op(&(&x(2) + &alpha()));
    &inner.pow(2) - &d_poly(tail).scale_rat(&(int(r * r) * gg(g)))
}

#[test]
fn rank_four_example_up_to_constant() {
    for g in 1..=3 {
        let inner =
            &d_poly(&[(4, int(1))]) - &DiffOp::term(2, &x(2) + &c(int(1))) - DiffOp::term(1, x(1).scale(&int(3)));
        let expected = written(inner, 4, g, &[(4, int(1)), (2, int(-1))]);
        let built = cheb_family(4, g, &alpha() - &c(rat(1, 8)));
        let diff = &built - &expected;
        assert_eq!(diff, DiffOp::mul_op(&c(int(-2) * gg(g))), "g = {g}");
    }
}

#[test]
fn rank_five_example_is_exact() {
    for g in 1..=3 {
        let inner = &d_poly(&[(5, int(1)), (3, rat(-5, 4))])
            - &DiffOp::term(2, x(2))
            - DiffOp::term(1, &x(1).scale(&int(3)) - &c(rat(5, 16)));
        let expected = written(inner, 5, g, &[(5, int(1)), (3, rat(-5, 4)), (1, rat(5, 16))]);
        assert_eq!(cheb_family(5, g, alpha()), expected, "g = {g}");
    }
}

#[test]
fn rank_six_example_up_to_constant() {
    for g in 1..=3 {
        let inner = &d_poly(&[(6, int(1)), (4, rat(-3, 2))])
            - &DiffOp::term(2, &x(2) - &c(rat(9, 16)))
            - DiffOp::term(1, x(1).scale(&int(3)));
        let expected = written(inner, 6, g, &[(6, int(1)), (4, rat(-3, 2)), (2, rat(9, 16))]);
        let built = cheb_family(6, g, &alpha() + &c(rat(1, 32)));
        let diff = &built - &expected;
        assert!(diff.order() == Some(0) && diff.coeff(0).as_rational().is_some(), "g = {g}: {diff}");
        assert_eq!(diff.coeff(0).as_rational().unwrap(), rat(36, 32) * gg(g));
    }
}

#[test]
fn rank_seven_example_is_exact() {
    for g in 1..=3 {
        let inner = &d_poly(&[(7, int(1)), (5, rat(-7, 4)), (3, rat(7, 8))])
            - &DiffOp::term(2, x(2))
            - DiffOp::term(1, &x(1).scale(&int(3)) + &c(rat(7, 64)));
        let tail = [(7, int(1)), (5, rat(-7, 4)), (3, rat(7, 8)), (1, rat(-7, 64))];
        assert_eq!(cheb_family(7, g, alpha()), written(inner, 7, g, &tail), "g = {g}");
    }
}

#[test]
fn canonical_form_from_rank_four() {
    for r in 2..=7 {
        let l = cheb_family(r, 1, CoefPoly::zero(&alpha_ps()));
        assert_eq!(l.order(), Some(2 * r as usize));
        let report = l.canonical_check().unwrap();
        assert_eq!(report.is_monic, r > 2, "r = {r}");
        assert_eq!(report.is_canonical, r > 3, "r = {r}");
    }
}

#[test]
fn automorphism_maps_order_four_family_to_canonical_family() {
    let ps = ParamSet::new(["a", "b"]).unwrap();
    let a = CoefPoly::param(&ps, "a").unwrap();
    let b = CoefPoly::param(&ps, "b").unwrap();
    for r in [1i64, 2, 3, -2] {
        for g in 1..=2 {
            let z = FamilySpec::ChebZ { r, g, a: a.clone(), b: b.clone() }.build().unwrap().l;
            let shifted = &b - &CoefPoly::one(&ps);
            let canon = FamilySpec::ChebCanonical { r: r.abs(), g, a: a.clone(), b: shifted }.build().unwrap().l;
            assert_eq!(z.weyl_automorphism(), canon, "r = {r}, g = {g}");
        }
    }
}

#[test]
fn chebyshev_against_cosine_identity() {
    // cos(theta) = 3/5, so cos(5 theta) = Re((3 + 4i)^5) / 5^5
    let (mut re, mut im) = (1i64, 0i64);
    for _ in 0..5 {
        (re, im) = (3 * re - 4 * im, 3 * im + 4 * re);
    }
    let t5 = chebyshev(5);
    assert_eq!(t5.coeffs(), vec![int(0), int(5), int(0), int(-20), int(0), int(16)]);
    assert_eq!(t5.poly.eval_rational(&rat(3, 5)).unwrap(), rat(re, 3125));
    for r in 0..=8i64 {
        let (mut re, mut im) = (1i64, 0i64);
        for _ in 0..r {
            (re, im) = (3 * re - 4 * im, 3 * im + 4 * re);
        }
        let t = chebyshev(r);
        assert_eq!(t.poly.eval_rational(&rat(3, 5)).unwrap(), rat(re, 5i64.pow(r as u32)), "r = {r}");
        assert_eq!(chebyshev(-r), t);
        if r >= 1 {
            assert_eq!(t.coeffs()[r as usize], int(1 << (r - 1)));
        }
        let parity = (r % 2) as usize;
        assert!(t.coeffs().iter().enumerate().all(|(k, v)| k % 2 == parity || v == &int(0)));
    }
}

#[test]
fn chebyshev_nesting() {
    for n in 0..=4 {
        for m in 0..=4 {
            assert!(cheb_nest_check(n, m), "T_{n}(T_{m})");
        }
    }
}

#[test]
fn dixmier_pairs_commute_symbolically() {
    for spec in [FamilySpec::DixmierR2 { alpha: alpha() }, FamilySpec::DixmierR3 { alpha: alpha() }] {
        let built = spec.build().unwrap();
        let m = built.m.unwrap();
        assert_eq!(built.l.order(), Some(spec.order_l()));
        assert_eq!(m.order(), Some(spec.order_m()));
        assert!(built.l.commutator(&m).unwrap().is_zero());
        let rhs = &built.l.pow(3) - &DiffOp::mul_op(&alpha());
        assert_eq!(&m * &m, rhs, "{spec}");
        assert_eq!(built.l.adjoint() == built.l, spec.rank() == 2);
    }
}

#[test]
fn families_are_self_adjoint_where_expected() {
    let e = ParamSet::empty();
    let one = CoefPoly::one(&e);
    for g in 1..=3 {
        let l = FamilySpec::MironovR2 { g, alpha: one.clone() }.build().unwrap().l;
        assert_eq!(l.adjoint(), l);
        assert_eq!(l.order(), Some(4));
    }
    let orders = [
        (FamilySpec::MironovR3 { g: 1, alpha: one.clone() }, 6),
        (FamilySpec::RankTwoK { k: 2, g: 1, alpha: one.clone() }, 8),
        (FamilySpec::RankThreeK { k: 1, g: 1, alpha: one.clone() }, 6),
        (FamilySpec::RankThreeK { k: 2, g: 1, alpha: one.clone() }, 12),
    ];
    for (spec, n) in orders {
        assert_eq!(spec.build().unwrap().l.order(), Some(n), "{spec}");
    }
}
