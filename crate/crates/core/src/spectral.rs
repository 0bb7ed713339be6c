//! Spectral curves of commuting pairs.
//!
//! For a commuting pair with `2 ord(M) = (2g+1) ord(L)` the square `M^2` is
//! reduced against the powers `L^k`, highest first. Each step divides leading
//! coefficients and the quotient must be free of `x`. A zero remainder proves
//! `M^2 = f(L)` with `f(t) = t^(2g+1) + a_2g t^2g + ... + a_0`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::centralizer::lead_ratio;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{CoefPoly, ParamSet};
use crate::rat::{int, Rat};
use crate::zoo::FamilySpec;

/// `mu^2 = lambda^(2g+1) + a_2g lambda^2g + ... + a_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    genus: u32,
    /// `a_0 .. a_2g`, all free of `x`
    coeffs: Vec<CoefPoly>,
}

impl HyperellipticCurve {
    pub fn new(genus: u32, coeffs: Vec<CoefPoly>) -> Result<Self> {
        if genus == 0 || coeffs.len() != 2 * genus as usize + 1 {
            return Err(Error::CurveShape { genus, len: coeffs.len() });
        }
        let mut ps = coeffs[0].params().clone();
        for c in &coeffs {
            ps = CoefPoly::common_params(&ps, c.params())?;
        }
        let mut lifted = Vec::with_capacity(coeffs.len());
        for (k, c) in coeffs.iter().enumerate() {
            if c.as_constant().is_none() {
                return Err(Error::NotConstant { order: k, ratio: c.to_string() });
            }
            lifted.push(c.lift(&ps)?);
        }
        Ok(HyperellipticCurve { genus, coeffs: lifted })
    }

    /// Curve with rational coefficients `a_0 .. a_2g`.
    pub fn from_rats(genus: u32, coeffs: &[Rat]) -> Result<Self> {
        let ps = ParamSet::empty();
        Self::new(genus, coeffs.iter().map(|c| CoefPoly::constant(&ps, c.clone())).collect())
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// `a_0 .. a_2g`.
    pub fn coeffs(&self) -> &[CoefPoly] {
        &self.coeffs
    }

    pub fn params(&self) -> &ParamSet {
        self.coeffs[0].params()
    }

    pub fn degree(&self) -> usize {
        2 * self.genus as usize + 1
    }

    /// Rational coefficients of `f` in ascending order including the leading 1,
    /// or `None` if some coefficient is symbolic.
    pub fn rational_coeffs(&self) -> Option<Vec<Rat>> {
        let mut out: Vec<Rat> = self.coeffs.iter().map(CoefPoly::as_rational).collect::<Option<_>>()?;
        out.push(Rat::one());
        Some(out)
    }

    /// `f(lambda)` for a numeric curve.
    pub fn eval(&self, lambda: &Rat) -> Option<Rat> {
        let c = self.rational_coeffs()?;
        Some(c.iter().rev().fold(Rat::zero(), |acc, a| acc * lambda + a))
    }

    pub fn subst(&self, bindings: &[(&str, Rat)]) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.subst(bindings)).collect::<Result<_>>()?;
        Self::new(self.genus, coeffs)
    }
}

impl fmt::Display for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu^2 = lambda^{}", self.degree())?;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let pow = match k {
                0 => String::new(),
                1 => "*lambda".to_string(),
                _ => format!("*lambda^{k}"),
            };
            write!(f, " + ({c}){pow}")?;
        }
        Ok(())
    }
}

/// `f(L) = L^(2g+1) + sum a_k L^k`.
pub fn poly_in_op(l: &DiffOp, curve: &HyperellipticCurve) -> Result<DiffOp> {
    let ps = CoefPoly::common_params(l.params(), curve.params())?;
    let l = l.lift(&ps)?;
    let mut power = DiffOp::identity(&ps);
    let mut out = DiffOp::zero(&ps);
    for a in curve.coeffs() {
        out = &out + &power.scale(&a.lift(&ps)?)?;
        power = &power * &l;
    }
    Ok(&out + &power)
}

/// Genus from the orders, `2 ord(M) = (2g+1) ord(L)` with `g >= 1`.
pub fn genus_from_orders(n: usize, m: usize) -> Result<u32> {
    if n == 0 || !(2 * m).is_multiple_of(n) {
        return Err(Error::OrderMismatch { l: n, m });
    }
    let e = 2 * m / n;
    if e.is_multiple_of(2) || e < 3 {
        return Err(Error::OrderMismatch { l: n, m });
    }
    Ok(((e - 1) / 2) as u32)
}

/// Extracts the curve by descending reduction of `M^2` against `L^k`.
pub fn hyperelliptic_reduce(l: &DiffOp, m: &DiffOp) -> Result<HyperellipticCurve> {
    let n = l.order().ok_or(Error::ZeroOperator)?;
    let mo = m.order().ok_or(Error::ZeroOperator)?;
    let g = genus_from_orders(n, mo)?;
    let ps = CoefPoly::common_params(l.params(), m.params())?;
    let (l, m) = (l.lift(&ps)?, m.lift(&ps)?);
    let top = 2 * g as usize + 1;

    let mut powers = vec![DiffOp::identity(&ps)];
    for _ in 0..top {
        let next = powers.last().unwrap() * &l;
        powers.push(next);
    }
    let mut rem = &m * &m;
    let mut coeffs = vec![CoefPoly::zero(&ps); top];
    for k in (0..=top).rev() {
        let Some(o) = rem.order() else { break };
        if o > k * n {
            return Err(Error::NonzeroRemainder(o));
        }
        if o < k * n {
            continue;
        }
        let a = lead_ratio(&rem, &powers[k])?;
        if k == top {
            if !a.is_one() {
                return Err(Error::Normalization(format!("lead(M)^2 / lead(L)^{top} = {a}, expected 1")));
            }
        } else {
            coeffs[k] = a.clone();
        }
        rem = &rem - &powers[k].scale(&a)?;
    }
    if let Some(o) = rem.order() {
        return Err(Error::NonzeroRemainder(o));
    }
    HyperellipticCurve::new(g, coeffs)
}

/// `gcd(ord L, ord M)`, the generic rank of the pair.
pub fn rank_of(l: &DiffOp, m: &DiffOp) -> Result<usize> {
    let n = l.order().ok_or(Error::ZeroOperator)?;
    let mo = m.order().ok_or(Error::ZeroOperator)?;
    Ok(n.gcd(&mo))
}

/// Smoothness data of a numeric curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveReport {
    pub discriminant: Rat,
    pub singular: bool,
}

/// Discriminant of the monic `f`, `(-1)^(d(d-1)/2) Res(f, f')`.
pub fn curve_report(curve: &HyperellipticCurve) -> Result<CurveReport> {
    let f = curve.rational_coeffs().ok_or_else(|| {
        let mut names: Vec<String> = curve.coeffs().iter().flat_map(CoefPoly::used_params).collect();
        names.sort();
        names.dedup();
        Error::SymbolicParams(names)
    })?;
    let df: Vec<Rat> = f.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect();
    let d = f.len() - 1;
    let res = resultant(&f, &df);
    let discriminant = if (d * (d - 1) / 2) % 2 == 1 { -res } else { res };
    let singular = discriminant.is_zero();
    Ok(CurveReport { discriminant, singular })
}

/// Resultant of two polynomials given by ascending coefficients, as the
/// determinant of their Sylvester matrix.
pub fn resultant(p: &[Rat], q: &[Rat]) -> Rat {
    let (dp, dq) = (p.len() - 1, q.len() - 1);
    let size = dp + dq;
    if size == 0 {
        return Rat::one();
    }
    let mut rows = Vec::with_capacity(size);
    for (poly, deg, count) in [(p, dp, dq), (q, dq, dp)] {
        for shift in 0..count {
            let mut row = vec![Rat::zero(); size];
            for (i, c) in poly.iter().rev().enumerate() {
                row[shift + i] = c.clone();
            }
            debug_assert!(shift + deg < size);
            rows.push(row);
        }
    }
    linalg::determinant(&rows)
}

/// Where a pair came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Family(FamilySpec),
    User,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Family(s) => write!(f, "{s}"),
            Provenance::User => write!(f, "user"),
        }
    }
}

/// A verified commuting pair with its curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingPair {
    pub l: DiffOp,
    pub m: DiffOp,
    pub curve: HyperellipticCurve,
    pub rank: usize,
    pub provenance: Provenance,
}

impl CommutingPair {
    /// Checks `[L, M] = 0`, extracts the curve and re-checks `M^2 = f(L)`.
    pub fn verify(l: DiffOp, m: DiffOp, provenance: Provenance) -> Result<Self> {
        let comm = l.commutator(&m)?;
        if !comm.is_zero() {
            return Err(Error::VerificationFailed(format!("[L, M] is nonzero of order {}", comm.order().unwrap())));
        }
        let curve = hyperelliptic_reduce(&l, &m)?;
        if poly_in_op(&l, &curve)? != m.try_mul(&m)? {
            return Err(Error::VerificationFailed("M^2 differs from f(L)".into()));
        }
        let rank = rank_of(&l, &m)?;
        Ok(CommutingPair { l, m, curve, rank, provenance })
    }
}
