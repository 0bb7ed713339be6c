//! Companion operators by exact linear algebra.
//!
//! For a numeric `L` the ansatz `M = sum_{i<=m, e<=B} u_{i,e} x^e D^i` turns
//! `[L, M] = 0` into a homogeneous linear system in the `u_{i,e}`: one equation
//! per monomial `x^t D^k` of the commutator. The system is solved over the
//! rationals and every basis element is re-verified against `L`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{CoefPoly, ParamSet};
use crate::rat::{rat_sqrt, Rat};

pub const DEFAULT_DEGREE_CAP: usize = 64;

/// Shape of the ansatz for `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzSpec {
    /// target order `m`
    pub order: usize,
    /// starting `x`-degree bound; `None` picks it from `L`
    pub degree: Option<usize>,
    /// the degree bound doubles until it would pass this cap
    pub cap: usize,
}

impl AnsatzSpec {
    pub fn new(order: usize) -> Self {
        AnsatzSpec { order, degree: None, cap: DEFAULT_DEGREE_CAP }
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = Some(degree);
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// `ceil(m * maxdeg_x(L) / ord(L)) + 4`.
pub fn initial_degree(l: &DiffOp, m: usize) -> usize {
    let n = l.order().unwrap_or(0).max(1);
    (m * l.max_x_degree() as usize).div_ceil(n) + 4
}

/// Basis of the operators of order `<= order` with coefficients of degree
/// `<= degree` that commute with `L`, in reduced echelon form (highest order
/// first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerBasis {
    pub elements: Vec<DiffOp>,
    pub order: usize,
    pub degree: usize,
}

impl CentralizerBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    /// Elements of exact order `m`.
    pub fn of_order(&self, m: usize) -> Vec<&DiffOp> {
        self.elements.iter().filter(|e| e.order() == Some(m)).collect()
    }

    /// Whether `op` lies in the span of the basis.
    pub fn contains(&self, op: &DiffOp) -> bool {
        let Ok(op) = op.to_numeric() else { return false };
        let Some(v) = to_vector(&op, self.order, self.degree) else { return false };
        let mut rows: Vec<Vec<Rat>> = self
            .elements
            .iter()
            .map(|e| to_vector(e, self.order, self.degree).expect("basis fits its own ansatz"))
            .collect();
        let before = linalg::rank(rows.clone());
        rows.push(v);
        linalg::rank(rows) == before
    }
}

/// Column index of `x^e D^i`; column 0 is `x^B D^m`.
fn column(i: usize, e: usize, m: usize, b: usize) -> usize {
    (m - i) * (b + 1) + (b - e)
}

fn to_vector(op: &DiffOp, m: usize, b: usize) -> Option<Vec<Rat>> {
    let mut v = vec![Rat::zero(); (m + 1) * (b + 1)];
    for (i, c) in op.coeffs() {
        if i > m {
            return None;
        }
        for (mono, val) in c.terms() {
            let e = mono.x as usize;
            if e > b || mono.p.iter().any(|&p| p > 0) {
                return None;
            }
            v[column(i, e, m, b)] = val.clone();
        }
    }
    Some(v)
}

fn from_vector(v: &[Rat], m: usize, b: usize) -> DiffOp {
    let ps = ParamSet::empty();
    let mut coeffs: BTreeMap<usize, CoefPoly> = BTreeMap::new();
    for i in 0..=m {
        let mut c = CoefPoly::zero(&ps);
        for e in 0..=b {
            let val = &v[column(i, e, m, b)];
            if !val.is_zero() {
                c = &c + &CoefPoly::monomial(&ps, val.clone(), e as u32, &[]);
            }
        }
        if !c.is_zero() {
            coeffs.insert(i, c);
        }
    }
    DiffOp::from_coeffs(&ps, coeffs).expect("parameter-free")
}

/// Solves `[L, M] = 0` at a fixed degree bound.
fn solve_at(l: &DiffOp, m: usize, b: usize) -> Result<CentralizerBasis> {
    let ps = ParamSet::empty();
    let ncols = (m + 1) * (b + 1);
    let mut rows: BTreeMap<(usize, u32), Vec<(usize, Rat)>> = BTreeMap::new();
    for i in 0..=m {
        for e in 0..=b {
            let unknown = DiffOp::term(i, CoefPoly::x(&ps).pow(e as u32));
            let comm = l.commutator(&unknown)?;
            let col = column(i, e, m, b);
            for (k, c) in comm.coeffs() {
                for (mono, val) in c.terms() {
                    rows.entry((k, mono.x)).or_default().push((col, val.clone()));
                }
            }
        }
    }
    let rows: Vec<Vec<(usize, Rat)>> = rows.into_values().collect();
    let null = linalg::nullspace(&rows, ncols);
    let order: Vec<usize> = (0..ncols).collect();
    let reduced = linalg::rref(null, &order);
    let elements: Vec<DiffOp> = reduced.iter().map(|v| from_vector(v, m, b)).collect();
    for el in &elements {
        if !l.commutator(el)?.is_zero() {
            return Err(Error::VerificationFailed(format!("basis element {el} does not commute with L")));
        }
    }
    Ok(CentralizerBasis { elements, order: m, degree: b })
}

/// Finds the operators of order `<= spec.order` commuting with `L`, raising
/// the degree bound until an element of exact order `spec.order` appears.
pub fn solve_centralizer(l: &DiffOp, spec: &AnsatzSpec) -> Result<CentralizerBasis> {
    if l.is_zero() {
        return Err(Error::ZeroOperator);
    }
    if spec.order == 0 {
        return Err(Error::EmptyAnsatz("target order must be at least 1".into()));
    }
    let l = l.to_numeric()?;
    let mut b = spec.degree.unwrap_or_else(|| initial_degree(&l, spec.order));
    loop {
        let basis = solve_at(&l, spec.order, b)?;
        if !basis.of_order(spec.order).is_empty() {
            return Ok(basis);
        }
        if b >= spec.cap {
            return Err(Error::EscalationCap { order: spec.order, cap: spec.cap, last_degree: b });
        }
        b = (2 * b).clamp(1, spec.cap);
    }
}

/// Leading-coefficient ratio `lead(a) / lead(b)`, required to be free of `x`.
pub(crate) fn lead_ratio(a: &DiffOp, b: &DiffOp) -> Result<CoefPoly> {
    let order = a.order().ok_or(Error::ZeroOperator)?;
    let (la, lb) = (a.leading_coeff().unwrap(), b.leading_coeff().ok_or(Error::ZeroOperator)?);
    la.div_exact(lb)
        .and_then(|q| q.as_constant())
        .ok_or_else(|| Error::NotConstant { order, ratio: format!("({la}) / ({lb})") })
}

/// Removes the polynomial-in-`L` part of `M`, leaving the companion whose
/// square is a polynomial in `L`.
///
/// In the commutative ring generated by `L` and `M`, write `M = mu + p(L)`
/// with `mu^2 = f(L)`. Then `M^2 - 2 p(L) M = f(L) - p(L)^2`, so reducing `M^2`
/// against the operators `L^k` and `L^j M` (whose orders are distinct modulo
/// `ord L`) reads off `2 p(L)` from the `L^j M` terms.
pub fn complete_square(l: &DiffOp, m: &DiffOp) -> Result<DiffOp> {
    let n = l.order().ok_or(Error::ZeroOperator)?;
    let mo = m.order().ok_or(Error::ZeroOperator)?;
    if n == 0 || mo % n == 0 {
        return Err(Error::OrderMismatch { l: n, m: mo });
    }
    let ps = CoefPoly::common_params(l.params(), m.params())?;
    let mut powers = vec![DiffOp::identity(&ps)];
    let mut rem = m * m;
    let mut two_p = DiffOp::zero(&ps);
    while let Some(o) = rem.order() {
        let (k, with_m) = if o % n == 0 {
            (o / n, false)
        } else if o >= mo && (o - mo) % n == 0 {
            ((o - mo) / n, true)
        } else {
            return Err(Error::NonzeroRemainder(o));
        };
        while powers.len() <= k {
            let next = powers.last().unwrap() * l;
            powers.push(next);
        }
        let basis = if with_m { &powers[k] * m } else { powers[k].clone() };
        let c = lead_ratio(&rem, &basis)?;
        rem = &rem - &basis.scale(&c)?;
        if with_m {
            two_p = &two_p + &powers[k].scale(&c)?;
        }
    }
    Ok(m - &two_p.scale_rat(&Rat::new(1.into(), 2.into())))
}

/// The canonical companion of order `m` from a centralizer basis.
///
/// The element of order `m` is (1) scaled so that `lead(M)^2 = lead(L)^e`
/// with `e = 2m / ord(L)`, with the sign fixed so the lowest term of `lead(M)`
/// is positive, and (2) stripped of its polynomial-in-`L` part so that `M^2`
/// is itself a polynomial in `L`.
pub fn select_m(basis: &CentralizerBasis, l: &DiffOp, m: usize) -> Result<DiffOp> {
    let found = basis.of_order(m);
    let cand = match found.as_slice() {
        [] => return Err(Error::NoElementOfOrder(m)),
        [one] => (*one).clone(),
        many => return Err(Error::AmbiguousCompanion { order: m, count: many.len() }),
    };
    normalize_companion(l, &cand)
}

/// Steps (1) and (2) of [`select_m`] applied to a single operator.
pub fn normalize_companion(l: &DiffOp, cand: &DiffOp) -> Result<DiffOp> {
    let n = l.order().ok_or(Error::ZeroOperator)?;
    let m = cand.order().ok_or(Error::ZeroOperator)?;
    if n == 0 || (2 * m) % n != 0 {
        return Err(Error::OrderMismatch { l: n, m });
    }
    let e = (2 * m / n) as u32;
    let lead_m = cand.leading_coeff().unwrap();
    let target = l.leading_coeff().unwrap().pow(e);
    let ratio = lead_m
        .pow(2)
        .div_exact(&target)
        .and_then(|q| q.as_rational())
        .ok_or_else(|| Error::Normalization(format!("lead(M)^2 / lead(L)^{e} is not a rational number")))?;
    let scale = rat_sqrt(&ratio)
        .filter(|s| !s.is_zero())
        .ok_or_else(|| Error::Normalization(format!("lead(M)^2 / lead(L)^{e} = {ratio} is not a rational square")))?;
    let mut out = cand.scale_rat(&scale.recip());
    let low = out.leading_coeff().unwrap().trailing_term().map(|(_, c)| c.is_negative());
    if low == Some(true) {
        out = -out;
    }
    complete_square(l, &out)
}

/// Convenience: solve and select in one step.
pub fn find_m(l: &DiffOp, spec: &AnsatzSpec) -> Result<(CentralizerBasis, DiffOp)> {
    let basis = solve_centralizer(l, spec)?;
    let numeric = l.to_numeric()?;
    let m = select_m(&basis, &numeric, spec.order)?;
    Ok((basis, m))
}
