use std::path::{Path, PathBuf};
use std::process::Command as Process;

use bcpair_cli::document::{read_op, write_op, OperatorDocument};
use bcpair_core::rat::{int, rat};
use bcpair_core::zoo::monic_a;
use bcpair_core::{CoefPoly, DiffOp, FamilySpec, ParamSet};
use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = bcpair_cli::run(std::iter::once("bcpair").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn e() -> ParamSet {
    ParamSet::empty()
}

fn zoo_pairs() -> Vec<(&'static str, DiffOp, DiffOp)> {
    let one = CoefPoly::one(&e());
    let mut out = Vec::new();
    for spec in [
        FamilySpec::DixmierR2 { alpha: one.clone() },
        FamilySpec::DixmierR3 { alpha: CoefPoly::from_i64(&e(), -2) },
        FamilySpec::MironovR2 { g: 2, alpha: one.clone() },
        FamilySpec::RankThreeK { k: 1, g: 1, alpha: one },
    ] {
        let b = spec.build().unwrap();
        if let Some(m) = b.m {
            out.push((spec.tag(), b.l, m));
        }
    }
    out
}

fn write_pair(dir: &TempDir, l: &DiffOp, m: &DiffOp) -> (PathBuf, PathBuf) {
    let (lp, mp) = (dir.path().join("L.json"), dir.path().join("M.json"));
    write_op(&lp, l).unwrap();
    write_op(&mp, m).unwrap();
    (lp, mp)
}

#[test]
fn verify_pair_accepts_zoo_pairs_and_rejects_perturbations() {
    let pairs = zoo_pairs();
    assert!(pairs.len() >= 2);
    for (tag, l, m) in pairs {
        let dir = tempfile::tempdir().unwrap();
        let (lp, mp) = write_pair(&dir, &l, &m);
        let (code, out) = run(&["verify-pair", s(&lp), s(&mp)]);
        assert_eq!(code, 0, "{tag}\n{out}");

        // +x in the free term breaks commutation
        let bumped = &m + &DiffOp::mul_op(&CoefPoly::x(m.params()));
        write_op(&mp, &bumped).unwrap();
        let (code, out) = run(&["verify-pair", s(&lp), s(&mp)]);
        assert_eq!(code, 1, "{tag}\n{out}");

        // +1 keeps [L, M] = 0 but M^2 is no longer a polynomial in L
        let shifted = &m + &DiffOp::identity(m.params());
        write_op(&mp, &shifted).unwrap();
        let (code, out) = run(&["verify-pair", s(&lp), s(&mp)]);
        assert_eq!(code, 1, "{tag}\n{out}");
    }
}

/// Every `x^e D^k` slot up to the x-degree of each coefficient.
fn slots(op: &DiffOp) -> Vec<(usize, u32)> {
    op.coeffs().flat_map(|(k, c)| (0..=c.deg_x().unwrap_or(0)).map(move |e| (k, e))).collect()
}

#[test]
fn every_single_coefficient_bump_is_rejected() {
    for (tag, l, m) in zoo_pairs() {
        let dir = tempfile::tempdir().unwrap();
        let (lp, mp) = write_pair(&dir, &l, &m);
        let bump = |k: usize, xe: u32| DiffOp::term(k, CoefPoly::monomial(&e(), int(1), xe, &[]));
        for (k, e) in slots(&m) {
            write_op(&mp, &(&m + &bump(k, e))).unwrap();
            let (code, out) = run(&["verify-pair", s(&lp), s(&mp)]);
            assert_eq!(code, 1, "{tag}: M + x^{e} D^{k}\n{out}");
        }
        write_op(&mp, &m).unwrap();
        // L + 1 is still a commuting pair, with the curve shifted in lambda
        for (k, e) in slots(&l).into_iter().filter(|&s| s != (0, 0)) {
            write_op(&lp, &(&l + &bump(k, e))).unwrap();
            let (code, out) = run(&["verify-pair", s(&lp), s(&mp)]);
            assert_eq!(code, 1, "{tag}: L + x^{e} D^{k}\n{out}");
        }
        write_op(&lp, &(&l + &bump(0, 0))).unwrap();
        assert_eq!(run(&["verify-pair", s(&lp), s(&mp)]).0, 0, "{tag}");
    }
}

#[test]
fn dixmier_flow() {
    let dir = tempfile::tempdir().unwrap();
    let (lp, mp) = (dir.path().join("L.json"), dir.path().join("M.json"));
    let (code, out) = run(&["build", "dixmier-r2", "--alpha", "1", "-o", s(&lp)]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["find-m", s(&lp), "--order", "6", "-o", s(&mp)]);
    assert_eq!(code, 0, "{out}");

    let (code, out) = run(&["--json", "curve", s(&lp), s(&mp)]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["coefficients"], serde_json::json!(["0", "0", "-1"]));
    assert_eq!(v["results"]["genus"], 1);
    assert_eq!(v["results"]["rank"], 2);
    assert_eq!(v["results"]["singular"], false);

    let (code, out) = run(&["commutator", s(&lp), s(&lp)]);
    assert_eq!(code, 0, "{out}");

    let (code, out) = run(&["certify-rank", s(&lp), s(&mp), "--lambda", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("(mu^2 - 7)^2"), "{out}");
    assert!(out.contains("mu^2 - 7\n"), "{out}");

    // lambda = 1 is a branch point
    let (code, out) = run(&["certify-rank", s(&lp), s(&mp), "--lambda", "1"]);
    assert_eq!(code, 1, "{out}");

    let (code, out) = run(&["certify-rank", s(&lp), s(&mp), "--lambda", "2", "--margin", "0"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn companion_from_build_matches_find_m() {
    let dir = tempfile::tempdir().unwrap();
    let (lp, mp, fp) = (dir.path().join("L.json"), dir.path().join("M.json"), dir.path().join("F.json"));
    let (code, out) = run(&["build", "dixmier-r2", "--alpha", "3/2", "-o", s(&lp), "--m-out", s(&mp)]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["find-m", s(&lp), "--order", "6", "-o", s(&fp)]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(read_op(&mp).unwrap(), read_op(&fp).unwrap());
}

#[test]
fn symbolic_documents_round_trip_through_commands() {
    let dir = tempfile::tempdir().unwrap();
    let (zp, sp) = (dir.path().join("Z.json"), dir.path().join("S.json"));
    let (code, out) = run(&["build", "cheb-z", "--r", "2", "-o", s(&zp)]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["weyl-auto", s(&zp), "-o", s(&sp)]);
    assert_eq!(code, 0, "{out}");

    let ps = ParamSet::new(["a", "b"]).unwrap();
    let b = CoefPoly::param(&ps, "b").unwrap();
    let a = CoefPoly::param(&ps, "a").unwrap();
    let expected = FamilySpec::ChebCanonical { r: 2, g: 1, a, b: &b - &CoefPoly::one(&ps) }.build().unwrap().l;
    assert_eq!(read_op(&sp).unwrap(), expected);

    // find-m needs numeric coefficients
    let (code, out) = run(&["find-m", s(&zp), "--order", "6"]);
    assert_eq!(code, 2, "{out}");
}

#[test]
fn canonical_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    for (r, want) in [(2, 1), (3, 1), (4, 0), (5, 0)] {
        let p = dir.path().join(format!("L{r}.json"));
        let a = monic_a(r).to_string();
        let (code, out) = run(&["build", "cheb-canonical", "--r", &r.to_string(), "--a", &a, "--b", "0", "-o", s(&p)]);
        assert_eq!(code, 0, "{out}");
        let (code, out) = run(&["canonical-check", s(&p)]);
        assert_eq!(code, want, "r = {r}\n{out}");
    }
}

#[test]
fn mironov_commands() {
    let (code, out) =
        run(&["mironov-verify", "--V", "x^3 + alpha", "--W", "2x", "--Q", "lambda + x", "--curve", "lambda^3 - alpha"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&[
        "--json",
        "mironov-verify",
        "--V",
        "x^3 + alpha",
        "--W",
        "2x",
        "--Q",
        "lambda - x",
        "--curve",
        "lambda^3 - alpha",
    ]);
    assert_eq!(code, 1, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["relation_holds"], false);
    assert!(v["results"]["first_mismatch"]["degree"].is_u64());

    let (code, out) = run(&["--json", "mironov-solve-g1", "--V", "x^3 + alpha", "--W", "2x"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"]["Q"], "lambda + (x)");
    assert_eq!(v["results"]["coefficients"], serde_json::json!(["0", "0", "-alpha"]));

    let (code, out) = run(&["mironov-solve-g1", "--V", "x^3", "--W", "6x"]);
    assert_eq!(code, 1, "{out}");
    let (code, out) = run(&["mironov-verify", "--V", "x", "--W", "0", "--Q", "2lambda", "--curve", "lambda^3"]);
    assert_eq!(code, 2, "{out}");
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["adjoint", s(&missing)]).0, 2);
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"format\": \"something-else\"}").unwrap();
    assert_eq!(run(&["adjoint", s(&garbage)]).0, 2);
    assert_eq!(run(&["build", "dixmier-r2", "--alpha", "0"]).0, 2);
    assert_eq!(run(&["build", "dixmier-r2", "--alpha", "x"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn human_and_json_reports_agree() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("L.json");
    write_op(&p, &DiffOp::d_pow(&e(), 3)).unwrap();
    let (_, human) = run(&["adjoint", s(&p)]);
    let (_, json) = run(&["--json", "adjoint", s(&p)]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["results"]["self_adjoint"], false);
    assert!(human.contains("self_adjoint") && human.contains("false"));
    assert_eq!(v["status"], "ok");
    assert!(v["timings"]["elapsed_ms"].is_number());
}

#[test]
fn binary_reports_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("L.json");
    let bin = env!("CARGO_BIN_EXE_bcpair");
    let status = Process::new(bin).args(["build", "dixmier-r2", "--alpha", "1", "-o", s(&p)]).status().unwrap();
    assert!(status.success());
    let out = Process::new(bin).args(["commutator", s(&p), s(&p)]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("zero"));
    let out = Process::new(bin).args(["find-m", s(&p), "--order", "3", "--cap", "12"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

fn family() -> impl Strategy<Value = FamilySpec> {
    let c = (-5i64..=5, 1i64..=4).prop_map(|(n, d)| CoefPoly::constant(&e(), rat(n, d)));
    let nonzero = (1i64..=5, 1i64..=4, any::<bool>())
        .prop_map(|(n, d, neg)| CoefPoly::constant(&e(), if neg { rat(-n, d) } else { rat(n, d) }));
    prop_oneof![
        nonzero.clone().prop_map(|alpha| FamilySpec::DixmierR2 { alpha }),
        nonzero.clone().prop_map(|alpha| FamilySpec::DixmierR3 { alpha }),
        (1u32..=3, nonzero.clone()).prop_map(|(g, alpha)| FamilySpec::MironovR2 { g, alpha }),
        (1u32..=2, nonzero.clone()).prop_map(|(g, alpha)| FamilySpec::MironovR3 { g, alpha }),
        (1i64..=4, 1u32..=2, nonzero.clone(), c.clone()).prop_map(|(r, g, a, b)| FamilySpec::ChebZ { r, g, a, b }),
        (2i64..=5, 1u32..=2, nonzero, c).prop_map(|(r, g, a, b)| FamilySpec::ChebCanonical { r, g, a, b }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn documents_round_trip(spec in family()) {
        let built = spec.build().unwrap();
        for op in std::iter::once(&built.l).chain(built.m.as_ref()) {
            let doc = OperatorDocument::from_op(op);
            let back = OperatorDocument::from_json(&doc.to_json()).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(&back.to_op().unwrap(), op);
        }
    }

    #[test]
    fn commutator_command_matches_library(n in -3i64..=3, d in 1i64..=3) {
        let dir = tempfile::tempdir().unwrap();
        let l = FamilySpec::DixmierR2 { alpha: CoefPoly::one(&e()) }.build().unwrap().l;
        let other = &DiffOp::d_pow(&e(), 2) + &DiffOp::mul_op(&CoefPoly::x(&e()).scale(&rat(n, d)));
        let (lp, op) = write_pair(&dir, &l, &other);
        let out = dir.path().join("C.json");
        let (code, _) = run(&["commutator", s(&lp), s(&op), "-o", s(&out)]);
        let expected = l.commutator(&other).unwrap();
        prop_assert_eq!(code, if expected.is_zero() { 0 } else { 1 });
        prop_assert_eq!(read_op(&out).unwrap(), expected);
    }
}

#[test]
fn scalar_documents() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    let op = DiffOp::mul_op(&CoefPoly::constant(&e(), int(-3)));
    write_op(&p, &op).unwrap();
    assert_eq!(read_op(&p).unwrap(), op);
    let zero = DiffOp::zero(&e());
    write_op(&p, &zero).unwrap();
    assert_eq!(read_op(&p).unwrap(), zero);
}
