use std::collections::BTreeMap;
use std::path::Path;

use bcpair_core::centralizer::{find_m, initial_degree, AnsatzSpec};
use bcpair_core::eigenspace::{certify_rank_with, EigenField};
use bcpair_core::rat::{format_rat, parse_rat, Rat};
use bcpair_core::{
    cheb_operator, chebyshev, curve_report, hyperelliptic_reduce, poly_in_op, rank_of, solve_mironov_g1,
    verify_mironov_relation, CoefPoly, DiffOp, FamilySpec, HyperellipticCurve, MironovCheck, ParamSet, QPoly, VW,
};
use serde_json::{json, Value};

use crate::document::{op_value, read_op, write_op};
use crate::expr::parse_polys;
use crate::report::{matrix_human, matrix_value, poly_human, rat_value, RunReport};
use crate::{BuildArgs, CliError, Command, Family};

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Build(_) => "build",
        Command::Cheb { .. } => "cheb",
        Command::Commutator { .. } => "commutator",
        Command::Adjoint { .. } => "adjoint",
        Command::CanonicalCheck { .. } => "canonical-check",
        Command::WeylAuto { .. } => "weyl-auto",
        Command::FindM { .. } => "find-m",
        Command::Curve { .. } => "curve",
        Command::VerifyPair { .. } => "verify-pair",
        Command::MironovVerify { .. } => "mironov-verify",
        Command::MironovSolveG1 { .. } => "mironov-solve-g1",
        Command::CertifyRank { .. } => "certify-rank",
    }
}

pub fn execute(cmd: &Command, rep: &mut RunReport) -> Result<(), CliError> {
    match cmd {
        Command::Build(args) => build(args, rep),
        Command::Cheb { r } => {
            rep.input("r", *r);
            let t = chebyshev(*r);
            let coeffs = t.coeffs();
            rep.fact("T_r", poly_human(&coeffs, "z"), coeffs.iter().map(rat_value).collect::<Value>());
            rep.text("T_r(D)", cheb_operator(*r, bcpair_core::ChebVar::D, &ParamSet::empty()).to_string());
            Ok(())
        }
        Command::Commutator { a, b, out } => {
            let (a, b) = load_pair(rep, ("A", a), ("B", b))?;
            let c = a.commutator(&b)?;
            op_fact(rep, "commutator", &c);
            rep.flag("zero", c.is_zero());
            save(rep, out.as_deref(), &c)?;
            if !c.is_zero() {
                rep.fail(1, "the operators do not commute");
            }
            Ok(())
        }
        Command::Adjoint { a, out } => {
            let a = load(rep, "A", a)?;
            let adj = a.adjoint();
            op_fact(rep, "adjoint", &adj);
            rep.flag("self_adjoint", adj == a);
            save(rep, out.as_deref(), &adj)
        }
        Command::CanonicalCheck { a } => {
            let a = load(rep, "A", a)?;
            let c = a.canonical_check()?;
            rep.fact("order", a.order().unwrap().to_string(), a.order().unwrap());
            rep.flag("monic", c.is_monic);
            rep.flag("subleading_zero", c.subleading_zero);
            rep.flag("canonical", c.is_canonical);
            if !c.is_canonical {
                rep.fail(1, "operator is not in canonical form");
            }
            Ok(())
        }
        Command::WeylAuto { a, out } => {
            let a = load(rep, "A", a)?;
            let s = a.weyl_automorphism();
            op_fact(rep, "image", &s);
            save(rep, out.as_deref(), &s)
        }
        Command::FindM { l, order, degree, cap, out } => {
            let l = load(rep, "L", l)?;
            rep.input("order", *order);
            let mut spec = AnsatzSpec::new(*order).with_cap(*cap);
            if let Some(b) = degree {
                spec = spec.with_degree(*b);
            }
            rep.input("initial_degree", degree.unwrap_or_else(|| initial_degree(&l, *order)));
            rep.input("cap", *cap);
            let (basis, m) = find_m(&l, &spec)?;
            rep.fact("degree", basis.degree.to_string(), basis.degree);
            rep.fact("dimension", basis.dimension().to_string(), basis.dimension());
            op_fact(rep, "M", &m);
            rep.flag("commutes", l.commutator(&m)?.is_zero());
            save(rep, out.as_deref(), &m)
        }
        Command::Curve { l, m } => {
            let (l, m) = load_pair(rep, ("L", l), ("M", m))?;
            let curve = hyperelliptic_reduce(&l, &m)?;
            curve_facts(rep, &curve)?;
            rep.fact("rank", rank_of(&l, &m)?.to_string(), rank_of(&l, &m)?);
            Ok(())
        }
        Command::VerifyPair { l, m } => verify_pair(rep, l, m),
        Command::MironovVerify { v, w, q, curve } => mironov_verify(rep, v, w, q, curve),
        Command::MironovSolveG1 { v, w } => {
            rep.input("V", v.as_str());
            rep.input("W", w.as_str());
            let (_, polys) = parse_polys(&[v, w])?;
            let vw = VW::new(polys[0].clone(), polys[1].clone())?;
            let (q, curve) = solve_mironov_g1(&vw)?;
            rep.text("Q", q.to_string());
            curve_facts(rep, &curve)?;
            rep.flag("relation_holds", verify_mironov_relation(&vw, &q, &curve)?.holds());
            Ok(())
        }
        Command::CertifyRank { l, m, lambda, margin } => certify(rep, l, m, lambda, *margin),
    }
}

fn load(rep: &mut RunReport, key: &str, path: &Path) -> Result<DiffOp, CliError> {
    rep.input(key, path.display().to_string());
    read_op(path)
}

/// Loads two operators and lifts them to the union of their parameters.
fn load_pair(rep: &mut RunReport, a: (&str, &Path), b: (&str, &Path)) -> Result<(DiffOp, DiffOp), CliError> {
    let (x, y) = (load(rep, a.0, a.1)?, load(rep, b.0, b.1)?);
    let ps = x.params().union(y.params());
    Ok((x.lift(&ps)?, y.lift(&ps)?))
}

fn save(rep: &mut RunReport, path: Option<&Path>, op: &DiffOp) -> Result<(), CliError> {
    if let Some(p) = path {
        write_op(p, op)?;
        rep.text("written", p.display().to_string());
    }
    Ok(())
}

fn op_fact(rep: &mut RunReport, key: &str, op: &DiffOp) {
    rep.fact(key, op.to_string(), op_value(op));
}

fn poly_value(c: &CoefPoly) -> Value {
    match c.as_rational() {
        Some(r) => rat_value(&r),
        None => Value::String(c.to_string()),
    }
}

fn curve_facts(rep: &mut RunReport, curve: &HyperellipticCurve) -> Result<(), CliError> {
    rep.fact("genus", curve.genus().to_string(), curve.genus());
    let shown: Vec<String> = curve.coeffs().iter().rev().map(|c| c.to_string()).collect();
    rep.fact(
        "coefficients",
        format!("(a_{}, ..., a_0) = ({})", curve.degree() - 1, shown.join(", ")),
        curve.coeffs().iter().rev().map(poly_value).collect::<Value>(),
    );
    rep.text("curve", curve.to_string());
    if curve.rational_coeffs().is_some() {
        let r = curve_report(curve)?;
        rep.fact("discriminant", format_rat(&r.discriminant), rat_value(&r.discriminant));
        rep.flag("singular", r.singular);
    }
    Ok(())
}

fn build(args: &BuildArgs, rep: &mut RunReport) -> Result<(), CliError> {
    let constant = |key: &str, s: &str, rep: &mut RunReport| -> Result<CoefPoly, CliError> {
        rep.input(key, s);
        Ok(parse_polys(&[s])?.1.remove(0))
    };
    let (r, g, k) = (args.r, args.g, args.k);
    let spec = match args.family {
        Family::DixmierR2 => FamilySpec::DixmierR2 { alpha: constant("alpha", &args.alpha, rep)? },
        Family::DixmierR3 => FamilySpec::DixmierR3 { alpha: constant("alpha", &args.alpha, rep)? },
        Family::MironovR2 => FamilySpec::MironovR2 { g, alpha: constant("alpha", &args.alpha, rep)? },
        Family::MironovR3 => FamilySpec::MironovR3 { g, alpha: constant("alpha", &args.alpha, rep)? },
        Family::RankTwoK => FamilySpec::RankTwoK { k, g, alpha: constant("alpha", &args.alpha, rep)? },
        Family::RankThreeK => FamilySpec::RankThreeK { k, g, alpha: constant("alpha", &args.alpha, rep)? },
        Family::ChebZ => FamilySpec::ChebZ { r, g, a: constant("a", &args.a, rep)?, b: constant("b", &args.b, rep)? },
        Family::ChebCanonical => {
            FamilySpec::ChebCanonical { r, g, a: constant("a", &args.a, rep)?, b: constant("b", &args.b, rep)? }
        }
    };
    rep.text("family", spec.to_string());
    let built = spec.build()?;
    rep.fact("order_L", spec.order_l().to_string(), spec.order_l());
    rep.fact("order_M", spec.order_m().to_string(), spec.order_m());
    rep.fact("rank", spec.rank().to_string(), spec.rank());
    rep.fact("genus", spec.genus().to_string(), spec.genus());
    op_fact(rep, "L", &built.l);
    save(rep, args.out.as_deref(), &built.l)?;
    match (&built.m, &args.m_out) {
        (Some(m), out) => {
            op_fact(rep, "M", m);
            if let Some(p) = out {
                write_op(p, m)?;
                rep.text("written_M", p.display().to_string());
            }
        }
        (None, Some(_)) => {
            return Err(CliError::Usage(format!("{} has no closed-form companion; use find-m", spec.tag())));
        }
        (None, None) => {}
    }
    Ok(())
}

fn verify_pair(rep: &mut RunReport, l: &Path, m: &Path) -> Result<(), CliError> {
    let (l, m) = load_pair(rep, ("L", l), ("M", m))?;
    let comm = l.commutator(&m)?;
    rep.flag("commutes", comm.is_zero());
    if !comm.is_zero() {
        rep.fail(1, format!("[L, M] is nonzero of order {}", comm.order().unwrap()));
        return Ok(());
    }
    let curve = hyperelliptic_reduce(&l, &m)?;
    curve_facts(rep, &curve)?;
    let round_trip = poly_in_op(&l, &curve)? == &m * &m;
    rep.flag("square_is_f_of_L", round_trip);
    let r = rank_of(&l, &m)?;
    rep.fact("rank", r.to_string(), r);
    if !round_trip {
        rep.fail(1, "M^2 differs from f(L)");
    }
    Ok(())
}

/// Splits a polynomial over parameters that may include `lambda` into its
/// coefficients in `lambda`, each over the remaining parameters.
fn split_lambda(p: &CoefPoly) -> Result<BTreeMap<u32, CoefPoly>, CliError> {
    if p.params().index_of("lambda").is_none() {
        return Ok(BTreeMap::from([(0, p.clone())]));
    }
    let mut parts = p.split_param("lambda")?;
    parts.retain(|_, c| !c.is_zero());
    Ok(parts)
}

fn lambda_free(p: &CoefPoly, what: &str) -> Result<CoefPoly, CliError> {
    let parts = split_lambda(p)?;
    match parts.keys().max() {
        None => Ok(CoefPoly::zero(&p.params().without(&["lambda"]))),
        Some(0) => Ok(parts[&0].clone()),
        Some(_) => Err(CliError::Usage(format!("{what} must not depend on lambda"))),
    }
}

/// Coefficients `c_0 .. c_(d-1)` of a polynomial monic of degree `d` in lambda.
fn monic_in_lambda(p: &CoefPoly, what: &str) -> Result<(u32, Vec<CoefPoly>), CliError> {
    let parts = split_lambda(p)?;
    let d = *parts.keys().max().unwrap_or(&0);
    if d == 0 || !parts[&d].is_one() {
        return Err(CliError::Usage(format!("{what} must be monic in lambda of positive degree")));
    }
    let ps = parts[&d].params().clone();
    let coeffs = (0..d).map(|k| parts.get(&k).cloned().unwrap_or_else(|| CoefPoly::zero(&ps))).collect();
    Ok((d, coeffs))
}

fn mironov_verify(rep: &mut RunReport, v: &str, w: &str, q: &str, curve: &str) -> Result<(), CliError> {
    for (k, s) in [("V", v), ("W", w), ("Q", q), ("curve", curve)] {
        rep.input(k, s);
    }
    let (_, polys) = parse_polys(&[v, w, q, curve])?;
    let vw = VW::new(lambda_free(&polys[0], "V")?, lambda_free(&polys[1], "W")?)?;
    let (g, qc) = monic_in_lambda(&polys[2], "Q")?;
    let (deg, fc) = monic_in_lambda(&polys[3], "curve")?;
    if deg % 2 == 0 {
        return Err(CliError::Usage("curve must have odd degree in lambda".into()));
    }
    let curve = HyperellipticCurve::new((deg - 1) / 2, fc)?;
    if curve.genus() != g {
        return Err(CliError::Usage(format!("Q has degree {g} but the curve has genus {}", curve.genus())));
    }
    let q = QPoly::new(qc)?;
    rep.text("Q", q.to_string());
    rep.text("curve", curve.to_string());
    match verify_mironov_relation(&vw, &q, &curve)? {
        MironovCheck::Holds => rep.flag("relation_holds", true),
        MironovCheck::Mismatch { degree, lhs, rhs } => {
            rep.flag("relation_holds", false);
            rep.fact(
                "first_mismatch",
                format!("lambda^{degree}: {lhs} vs {rhs}"),
                json!({ "degree": degree, "lhs": lhs.to_string(), "rhs": rhs.to_string() }),
            );
            rep.fail(1, format!("relation fails at lambda^{degree}"));
        }
    }
    Ok(())
}

fn parse_lambda(s: &str) -> Result<Rat, CliError> {
    if let Some(r) = parse_rat(s) {
        return Ok(r);
    }
    let (_, p) = parse_polys(&[s])?;
    p[0].as_rational().ok_or_else(|| CliError::Usage(format!("lambda must be a rational number, got {s:?}")))
}

fn factored(f: &Rat, r: usize) -> String {
    if num_traits::Zero::is_zero(f) {
        return format!("mu^{}", 2 * r);
    }
    let inner = poly_human(&[-f.clone(), Rat::from_integer(0.into()), Rat::from_integer(1.into())], "mu");
    if r == 1 {
        inner
    } else {
        format!("({inner})^{r}")
    }
}

fn certify(rep: &mut RunReport, l: &Path, m: &Path, lambda: &str, margin: usize) -> Result<(), CliError> {
    let (l, m) = load_pair(rep, ("L", l), ("M", m))?;
    rep.input("lambda", lambda);
    let lam = parse_lambda(lambda)?;
    let curve = hyperelliptic_reduce(&l, &m)?;
    rep.input("margin", margin);
    rep.text("curve", curve.to_string());
    let r = certify_rank_with(&l, &m, &curve, &lam, margin)?;
    let f = &r.action.f_lambda;
    rep.fact("f(lambda)", format_rat(f), rat_value(f));
    rep.fact("matrix", matrix_human(&r.action.matrix), matrix_value(&r.action.matrix));
    let cp: Value = r.charpoly.iter().map(rat_value).collect();
    rep.fact("charpoly", poly_human(&r.charpoly, "mu"), cp);
    if r.charpoly_matches {
        rep.text("charpoly_factored", factored(f, r.rank));
    }
    rep.flag("charpoly_matches", r.charpoly_matches);
    rep.fact(
        "minimal_poly",
        poly_human(&r.minimal_poly, "mu"),
        r.minimal_poly.iter().map(rat_value).collect::<Value>(),
    );
    rep.flag("square_is_f", r.square_is_f);
    rep.flag("trace_zero", r.trace_zero);
    rep.flag("det_matches", r.det_matches);
    rep.flag("stable_under_truncation", r.stable_under_truncation);
    let field = match &r.field {
        EigenField::Rationals => "Q".to_string(),
        EigenField::Quadratic(d) => format!("Q(sqrt({}))", format_rat(d)),
    };
    rep.text("field", field);
    let dims: Vec<String> = r
        .eigenspaces
        .iter()
        .map(|e| match e.sign {
            0 => format!("mu = 0: {}", e.dimension),
            1 => format!("mu = +sqrt(f): {}", e.dimension),
            _ => format!("mu = -sqrt(f): {}", e.dimension),
        })
        .collect();
    rep.fact(
        "eigenspaces",
        dims.join(", "),
        r.eigenspaces.iter().map(|e| json!({ "sign": e.sign, "dimension": e.dimension })).collect::<Value>(),
    );
    rep.fact("rank", r.rank.to_string(), r.rank);
    rep.fact("rank_of_orders", r.rank_of_orders.to_string(), r.rank_of_orders);
    if let Some(w) = &r.warning {
        rep.text("warning", w.clone());
    }
    rep.fact(
        "certified",
        if r.certified { format!("rank {} certified", r.rank) } else { "not certified".into() },
        r.certified,
    );
    if !r.certified {
        rep.fail(1, "rank certificate failed");
    }
    Ok(())
}
