//! Self-adjoint operators of order 4, `L = (D^2 + V)^2 + W`.
//!
//! Such an `L` of rank 2 and genus `g` comes with a polynomial
//! `Q(x, lambda) = lambda^g + q_(g-1)(x) lambda^(g-1) + ... + q_0(x)` satisfying
//!
//! ```text
//! (lambda - W) Q^2 - V Q_x^2 + Q_xx^2 / 4 - Q_x Q_xxx / 2
//!     + Q (V_x Q_x + 2 V Q_xx + Q_xxxx / 2) = f(lambda)
//! ```
//!
//! where `mu^2 = f(lambda)` is the spectral curve. This module checks that
//! relation at any genus and solves it at genus 1.

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::poly::{CoefPoly, ParamSet};
use crate::rat::{int, rat, rat_sqrt, Rat};
use crate::spectral::HyperellipticCurve;

/// The pair `(V, W)` of `L = (D^2 + V)^2 + W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VW {
    pub v: CoefPoly,
    pub w: CoefPoly,
}

impl VW {
    pub fn new(v: CoefPoly, w: CoefPoly) -> Result<Self> {
        let ps = CoefPoly::common_params(v.params(), w.params())?;
        Ok(VW { v: v.lift(&ps)?, w: w.lift(&ps)? })
    }

    pub fn params(&self) -> &ParamSet {
        self.v.params()
    }

    /// `(D^2 + V)^2 + W`.
    pub fn reassemble(&self) -> DiffOp {
        let inner = &DiffOp::d_pow(self.params(), 2) + &DiffOp::mul_op(&self.v);
        &(&inner * &inner) + &DiffOp::mul_op(&self.w)
    }
}

/// Monic `Q = lambda^g + q_(g-1) lambda^(g-1) + ... + q_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    genus: u32,
    coeffs: Vec<CoefPoly>,
}

impl QPoly {
    /// From `q_0 .. q_(g-1)`.
    pub fn new(coeffs: Vec<CoefPoly>) -> Result<Self> {
        let genus = coeffs.len() as u32;
        if genus == 0 {
            return Err(Error::GenusMismatch(0, 1));
        }
        let mut ps = coeffs[0].params().clone();
        for c in &coeffs {
            ps = CoefPoly::common_params(&ps, c.params())?;
        }
        let coeffs = coeffs.iter().map(|c| c.lift(&ps)).collect::<Result<_>>()?;
        Ok(QPoly { genus, coeffs })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// `q_0 .. q_(g-1)`.
    pub fn coeffs(&self) -> &[CoefPoly] {
        &self.coeffs
    }

    pub fn params(&self) -> &ParamSet {
        self.coeffs[0].params()
    }

    fn to_lam(&self, ps: &ParamSet) -> Result<Lam> {
        let mut out = self.coeffs.iter().map(|c| c.lift(ps)).collect::<Result<Vec<_>>>()?;
        out.push(CoefPoly::one(ps));
        Ok(Lam(out))
    }
}

impl std::fmt::Display for QPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.genus {
            1 => write!(f, "lambda")?,
            g => write!(f, "lambda^{g}")?,
        }
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            match k {
                0 => write!(f, " + ({c})")?,
                1 => write!(f, " + ({c})*lambda")?,
                _ => write!(f, " + ({c})*lambda^{k}")?,
            }
        }
        Ok(())
    }
}

/// Polynomial in `lambda` with coefficients in `x` and parameters,
/// ascending powers.
#[derive(Clone, Debug)]
struct Lam(Vec<CoefPoly>);

impl Lam {
    fn coeff(&self, k: usize, ps: &ParamSet) -> CoefPoly {
        self.0.get(k).cloned().unwrap_or_else(|| CoefPoly::zero(ps))
    }

    fn add(&self, o: &Lam) -> Lam {
        let n = self.0.len().max(o.0.len());
        let ps = self.0.first().or(o.0.first()).unwrap().params().clone();
        Lam((0..n).map(|k| &self.coeff(k, &ps) + &o.coeff(k, &ps)).collect())
    }

    fn mul(&self, o: &Lam) -> Lam {
        let ps = self.0[0].params().clone();
        let mut out = vec![CoefPoly::zero(&ps); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Lam(out)
    }

    fn scale(&self, c: &CoefPoly) -> Lam {
        Lam(self.0.iter().map(|a| a * c).collect())
    }

    fn dx(&self) -> Lam {
        Lam(self.0.iter().map(CoefPoly::dx).collect())
    }
}

/// Left-hand side of the relation for given `V`, `W`, `Q`, all over `ps`.
fn relation_lhs(v: &CoefPoly, w: &CoefPoly, q: &Lam) -> Lam {
    let ps = v.params();
    let q1 = q.dx();
    let q2 = q1.dx();
    let q3 = q2.dx();
    let q4 = q3.dx();
    let lam_minus_w = Lam(vec![-w, CoefPoly::one(ps)]);
    let half = CoefPoly::constant(ps, rat(1, 2));
    let quarter = CoefPoly::constant(ps, rat(1, 4));
    let inner = q1.scale(&v.dx()).add(&q2.scale(&(v * &CoefPoly::from_i64(ps, 2)))).add(&q4.scale(&half));
    lam_minus_w
        .mul(&q.mul(q))
        .add(&q1.mul(&q1).scale(&-v))
        .add(&q2.mul(&q2).scale(&quarter))
        .add(&q1.mul(&q3).scale(&-&half))
        .add(&q.mul(&inner))
}

/// Outcome of [`verify_mironov_relation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MironovCheck {
    Holds,
    /// The highest power of `lambda` whose coefficients differ.
    Mismatch {
        degree: usize,
        lhs: CoefPoly,
        rhs: CoefPoly,
    },
}

impl MironovCheck {
    pub fn holds(&self) -> bool {
        matches!(self, MironovCheck::Holds)
    }
}

/// Exact check of the relation in the ring of polynomials in `x`, `lambda`
/// and the parameters.
pub fn verify_mironov_relation(vw: &VW, q: &QPoly, curve: &HyperellipticCurve) -> Result<MironovCheck> {
    if q.genus() != curve.genus() {
        return Err(Error::GenusMismatch(q.genus(), curve.genus()));
    }
    let ps = CoefPoly::common_params(vw.params(), q.params())?;
    let ps = CoefPoly::common_params(&ps, curve.params())?;
    let (v, w) = (vw.v.lift(&ps)?, vw.w.lift(&ps)?);
    let lhs = relation_lhs(&v, &w, &q.to_lam(&ps)?);
    let mut rhs = curve.coeffs().iter().map(|c| c.lift(&ps)).collect::<Result<Vec<_>>>()?;
    rhs.push(CoefPoly::one(&ps));
    let top = lhs.0.len().max(rhs.len());
    for k in (0..top).rev() {
        let (l, r) = (lhs.coeff(k, &ps), rhs.get(k).cloned().unwrap_or_else(|| CoefPoly::zero(&ps)));
        if l != r {
            return Ok(MironovCheck::Mismatch { degree: k, lhs: l, rhs: r });
        }
    }
    Ok(MironovCheck::Holds)
}

/// Splits an order-4 self-adjoint operator into `(V, W)`.
pub fn decompose_selfadjoint4(l: &DiffOp) -> Result<VW> {
    let shape = |msg: &str| Error::NotSelfAdjointShape(msg.to_string());
    if l.order() != Some(4) {
        return Err(shape("order is not 4"));
    }
    if !l.coeff(4).is_one() {
        return Err(shape("leading coefficient is not 1"));
    }
    if !l.coeff(3).is_zero() {
        return Err(shape("coefficient of D^3 is nonzero"));
    }
    let (c2, c1, c0) = (l.coeff(2), l.coeff(1), l.coeff(0));
    if c1 != c2.dx() {
        return Err(shape("coefficient of D is not the derivative of the coefficient of D^2"));
    }
    let v = c2.scale(&rat(1, 2));
    let w = &(&c0 - &v.dx().dx()) - &(&v * &v);
    let vw = VW { v, w };
    if l.adjoint() != *l || vw.reassemble() != *l {
        return Err(shape("operator is not self-adjoint"));
    }
    Ok(vw)
}

fn fresh_name(ps: &ParamSet) -> String {
    let mut name = "t".to_string();
    while ps.index_of(&name).is_some() {
        name.push('_');
    }
    name
}

/// Solves the relation at genus 1 with `Q = lambda + q_0(x)`.
///
/// The `lambda^2` coefficient forces `q_0 = (W + a_2) / 2`. The remaining
/// coefficients must be free of `x`, which gives polynomial equations in
/// `a_2` (linear or quadratic). Returns `Q` and the curve.
pub fn solve_mironov_g1(vw: &VW) -> Result<(QPoly, HyperellipticCurve)> {
    let ps = vw.params().clone();
    let tname = fresh_name(&ps);
    let pt = ps.union(&ParamSet::new([tname.as_str()])?);
    let (v, w) = (vw.v.lift(&pt)?, vw.w.lift(&pt)?);
    let t = CoefPoly::param(&pt, &tname)?;
    let q = Lam(vec![(&w + &t).scale(&rat(1, 2)), CoefPoly::one(&pt)]);
    let lhs = relation_lhs(&v, &w, &q);

    // x-dependent parts of the lambda^1 and lambda^0 coefficients, as
    // polynomials in t
    let mut equations: Vec<(String, Vec<CoefPoly>)> = Vec::new();
    for k in [1usize, 0] {
        for (e, c) in lhs.coeff(k, &pt).x_coeffs() {
            if e == 0 || c.is_zero() {
                continue;
            }
            let parts = c.split_param(&tname)?;
            let deg = *parts.keys().next_back().unwrap() as usize;
            let zero = CoefPoly::zero(&ps);
            let poly = (0..=deg).map(|i| parts.get(&(i as u32)).cloned().unwrap_or_else(|| zero.clone())).collect();
            equations.push((format!("coefficient of lambda^{k} x^{e}: {c}"), poly));
        }
    }

    let mut candidates: Vec<CoefPoly> = Vec::new();
    if let Some((what, _)) = equations.iter().find(|(_, p)| p.len() == 1) {
        return Err(Error::NoPolynomialSolution(what.clone()));
    }
    if let Some((what, p)) = equations.iter().find(|(_, p)| p.len() == 2) {
        let root = (-&p[0])
            .div_exact(&p[1])
            .filter(|r| r.as_constant().is_some())
            .ok_or_else(|| Error::NoPolynomialSolution(format!("{what} has no polynomial root")))?;
        candidates.push(root);
    } else if let Some((what, p)) = equations.first() {
        let c: Option<Vec<Rat>> = p.iter().map(CoefPoly::as_rational).collect();
        let c = c.ok_or_else(|| Error::NoPolynomialSolution(format!("{what} is not solvable over the rationals")))?;
        let disc = &c[1] * &c[1] - int(4) * &c[0] * &c[2];
        let s = rat_sqrt(&disc).ok_or_else(|| Error::NoPolynomialSolution(format!("{what} has no rational root")))?;
        for sign in [int(1), int(-1)] {
            let r = (-&c[1] + sign * &s) / (int(2) * &c[2]);
            candidates.push(CoefPoly::constant(&ps, r));
        }
    } else {
        candidates.push(CoefPoly::zero(&ps));
    }

    let mut last = None;
    for a2 in candidates {
        match try_candidate(vw, &a2) {
            Ok(found) => return Ok(found),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one candidate"))
}

fn try_candidate(vw: &VW, a2: &CoefPoly) -> Result<(QPoly, HyperellipticCurve)> {
    let ps = vw.params();
    let q0 = (&vw.w + &a2.lift(ps)?).scale(&rat(1, 2));
    let lhs = relation_lhs(&vw.v, &vw.w, &Lam(vec![q0.clone(), CoefPoly::one(ps)]));
    let mut coeffs = Vec::new();
    for k in 0..3 {
        let c = lhs.coeff(k, ps);
        if c.as_constant().is_none() {
            return Err(Error::NoPolynomialSolution(format!("coefficient of lambda^{k} is {c}")));
        }
        coeffs.push(c);
    }
    let q = QPoly::new(vec![q0])?;
    let curve = HyperellipticCurve::new(1, coeffs)?;
    match verify_mironov_relation(vw, &q, &curve)? {
        MironovCheck::Holds => Ok((q, curve)),
        MironovCheck::Mismatch { degree, .. } => {
            Err(Error::VerificationFailed(format!("solved relation fails at lambda^{degree}")))
        }
    }
}
