//! Differential operators `sum_i c_i(x) D^i` with [`CoefPoly`] coefficients.
//!
//! Normal form keeps multiplication operators to the left of derivatives, so
//! `D * x` is stored as `x D + 1`. Products use the Leibniz rule
//! `f D^i * g D^j = sum_k C(i,k) f g^(k) D^(i+j-k)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{CoefPoly, Monomial, ParamSet};
use crate::rat::{Binomials, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOp {
    params: ParamSet,
    coeffs: BTreeMap<usize, CoefPoly>,
}

/// Result of [`DiffOp::canonical_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalReport {
    pub is_monic: bool,
    pub subleading_zero: bool,
    pub is_canonical: bool,
}

impl DiffOp {
    pub fn zero(params: &ParamSet) -> Self {
        DiffOp { params: params.clone(), coeffs: BTreeMap::new() }
    }

    pub fn identity(params: &ParamSet) -> Self {
        Self::mul_op(&CoefPoly::one(params))
    }

    /// `D^k`.
    pub fn d_pow(params: &ParamSet, k: usize) -> Self {
        Self::term(k, CoefPoly::one(params))
    }

    /// `c(x) D^k`.
    pub fn term(k: usize, c: CoefPoly) -> Self {
        let mut op = DiffOp::zero(c.params());
        if !c.is_zero() {
            op.coeffs.insert(k, c);
        }
        op
    }

    /// The multiplication operator by `c`.
    pub fn mul_op(c: &CoefPoly) -> Self {
        Self::term(0, c.clone())
    }

    pub fn from_coeffs<I>(params: &ParamSet, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, CoefPoly)>,
    {
        let mut op = DiffOp::zero(params);
        for (k, c) in coeffs {
            op = op.try_add(&DiffOp::term(k, c))?;
        }
        Ok(op)
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn coeffs(&self) -> impl DoubleEndedIterator<Item = (usize, &CoefPoly)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Coefficient of `D^k` (zero when absent).
    pub fn coeff(&self, k: usize) -> CoefPoly {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| CoefPoly::zero(&self.params))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of the operator; `None` stands for the order of zero (minus infinity).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&CoefPoly> {
        self.coeffs.values().next_back()
    }

    /// Largest `x`-degree over all coefficients.
    pub fn max_x_degree(&self) -> u32 {
        self.coeffs.values().filter_map(CoefPoly::deg_x).max().unwrap_or(0)
    }

    /// True when no parameter occurs in any coefficient.
    pub fn is_numeric(&self) -> bool {
        self.used_params().is_empty()
    }

    pub fn used_params(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in self.coeffs.values() {
            for p in c.used_params() {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn lift(&self, target: &ParamSet) -> Result<DiffOp> {
        let mut out = DiffOp::zero(target);
        for (k, c) in &self.coeffs {
            out.coeffs.insert(*k, c.lift(target)?);
        }
        Ok(out)
    }

    /// Binds parameters to rationals in every coefficient.
    pub fn subst(&self, bindings: &[(&str, Rat)]) -> Result<DiffOp> {
        let names: Vec<&str> = bindings.iter().map(|(n, _)| *n).collect();
        for n in &names {
            if self.params.index_of(n).is_none() {
                return Err(Error::UnknownParam(n.to_string()));
            }
        }
        let target = self.params.without(&names);
        let mut out = DiffOp::zero(&target);
        for (k, c) in &self.coeffs {
            let s = c.subst(bindings)?;
            if !s.is_zero() {
                out.coeffs.insert(*k, s);
            }
        }
        Ok(out)
    }

    /// Drops every parameter from the ring when none of them occurs.
    pub fn to_numeric(&self) -> Result<DiffOp> {
        let used = self.used_params();
        if !used.is_empty() {
            return Err(Error::SymbolicParams(used));
        }
        self.lift(&ParamSet::empty())
    }

    fn common(&self, other: &DiffOp) -> Result<(ParamSet, DiffOp, DiffOp)> {
        let ps = CoefPoly::common_params(&self.params, &other.params)?;
        let a = if self.params == ps { self.clone() } else { self.lift(&ps)? };
        let b = if other.params == ps { other.clone() } else { other.lift(&ps)? };
        Ok((ps, a, b))
    }

    fn insert_add(map: &mut BTreeMap<usize, CoefPoly>, k: usize, c: CoefPoly) {
        if c.is_zero() {
            return;
        }
        match map.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &DiffOp) -> Result<DiffOp> {
        let (ps, mut a, b) = self.common(other)?;
        for (k, c) in b.coeffs {
            Self::insert_add(&mut a.coeffs, k, c);
        }
        a.params = ps;
        Ok(a)
    }

    pub fn try_sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.try_add(&-other)
    }

    /// Left multiplication of every coefficient by `c` (that is, `c * A`).
    pub fn scale(&self, c: &CoefPoly) -> Result<DiffOp> {
        let ps = CoefPoly::common_params(&self.params, c.params())?;
        let c = c.lift(&ps)?;
        let mut out = DiffOp::zero(&ps);
        for (k, v) in &self.coeffs {
            Self::insert_add(&mut out.coeffs, *k, &c * &v.lift(&ps)?);
        }
        Ok(out)
    }

    pub fn scale_rat(&self, c: &Rat) -> DiffOp {
        let mut out = DiffOp::zero(&self.params);
        for (k, v) in &self.coeffs {
            Self::insert_add(&mut out.coeffs, *k, v.scale(c));
        }
        out
    }

    /// Normal-form product `self * other`.
    pub fn try_mul(&self, other: &DiffOp) -> Result<DiffOp> {
        let (ps, a, b) = self.common(other)?;
        let (Some(max_i), false) = (a.order(), b.is_zero()) else {
            return Ok(DiffOp::zero(&ps));
        };
        let binom = Binomials::up_to(max_i);
        let mut out: BTreeMap<usize, CoefPoly> = BTreeMap::new();
        for (&j, g) in &b.coeffs {
            let mut derivs = vec![g.clone()];
            while derivs.len() <= max_i {
                let next = derivs.last().unwrap().dx();
                if next.is_zero() {
                    break;
                }
                derivs.push(next);
            }
            for (&i, f) in &a.coeffs {
                for (k, gk) in derivs.iter().enumerate().take(i + 1) {
                    let t = (f * gk).scale(binom.get(i, k));
                    Self::insert_add(&mut out, i + j - k, t);
                }
            }
        }
        Ok(DiffOp { params: ps, coeffs: out })
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn pow(&self, k: u32) -> DiffOp {
        let mut acc = DiffOp::identity(&self.params);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal adjoint `sum c_i D^i -> sum (-1)^i D^i c_i`.
    pub fn adjoint(&self) -> DiffOp {
        let mut out = DiffOp::zero(&self.params);
        for (&i, c) in &self.coeffs {
            let t = &DiffOp::d_pow(&self.params, i) * &DiffOp::mul_op(c);
            out = if i % 2 == 0 { &out + &t } else { &out - &t };
        }
        out
    }

    pub fn canonical_check(&self) -> Result<CanonicalReport> {
        let n = self.order().ok_or(Error::ZeroOperator)?;
        let is_monic = self.coeffs[&n].is_one();
        let subleading_zero = n == 0 || !self.coeffs.contains_key(&(n - 1));
        Ok(CanonicalReport { is_monic, subleading_zero, is_canonical: is_monic && subleading_zero })
    }

    /// The Weyl algebra automorphism `x -> D`, `D -> -x`, applied term by
    /// term through the operator product.
    pub fn weyl_automorphism(&self) -> DiffOp {
        // x^e D^i -> D^e (-x)^i; parameter parts are central and grouped first
        let mut grouped: BTreeMap<(u32, usize), CoefPoly> = BTreeMap::new();
        for (&i, c) in &self.coeffs {
            for (m, v) in c.terms() {
                let central = CoefPoly::from_terms(&self.params, [(Monomial { x: 0, p: m.p.clone() }, v.clone())])
                    .expect("same parameter set");
                let slot = grouped.entry((m.x, i)).or_insert_with(|| CoefPoly::zero(&self.params));
                *slot = &*slot + &central;
            }
        }
        let mut out = DiffOp::zero(&self.params);
        for ((e, i), central) in grouped {
            let mut xi = CoefPoly::x(&self.params).pow(i as u32);
            if i % 2 == 1 {
                xi = -xi;
            }
            let img = &DiffOp::d_pow(&self.params, e as usize) * &DiffOp::mul_op(&xi);
            out = &out + &img.scale(&central).expect("same parameter set");
        }
        out
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (&k, c)) in self.coeffs.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let d = match k {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{k}"),
            };
            match (c.is_one(), d.is_empty(), c.num_terms()) {
                (true, false, _) => write!(f, "{d}")?,
                (_, true, _) => write!(f, "({c})")?,
                (_, false, 1) => write!(f, "{c}*{d}")?,
                _ => write!(f, "({c})*{d}")?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&DiffOp> for &DiffOp {
            type Output = DiffOp;
            /// Panics on incompatible parameter sets; use the `try_` form to
            /// get an error instead.
            fn $m(self, rhs: &DiffOp) -> DiffOp {
                self.$try(rhs).expect("incompatible parameter sets")
            }
        }
        impl $tr<DiffOp> for DiffOp {
            type Output = DiffOp;
            fn $m(self, rhs: DiffOp) -> DiffOp {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        self.scale_rat(&-Rat::one())
    }
}

impl Neg for DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        -&self
    }
}

/// Sum of rational multiples of operators, skipping zero weights.
pub fn linear_combination<'a, I>(params: &ParamSet, terms: I) -> DiffOp
where
    I: IntoIterator<Item = (&'a Rat, &'a DiffOp)>,
{
    terms.into_iter().fold(DiffOp::zero(params), |acc, (c, op)| if c.is_zero() { acc } else { &acc + &op.scale_rat(c) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn ps() -> ParamSet {
        ParamSet::new(["alpha"]).unwrap()
    }
    fn d(k: usize) -> DiffOp {
        DiffOp::d_pow(&ps(), k)
    }
    fn xp(e: u32) -> CoefPoly {
        CoefPoly::x(&ps()).pow(e)
    }
    fn c(v: i64) -> CoefPoly {
        CoefPoly::from_i64(&ps(), v)
    }
    fn mo(p: CoefPoly) -> DiffOp {
        DiffOp::mul_op(&p)
    }

    #[test]
    fn add_and_scale() {
        assert!((&d(2) + &(-d(2))).is_zero());
        let s = &(&d(1) + &mo(xp(1))) + &(&d(1) - &mo(xp(1)));
        assert_eq!(s, d(1).scale_rat(&int(2)));
        let v = &xp(3) + &CoefPoly::param(&ps(), "alpha").unwrap();
        assert_eq!(d(2).scale(&v).unwrap(), DiffOp::term(2, v));
    }

    #[test]
    fn defining_relation() {
        assert_eq!(&d(1) * &mo(xp(1)), &DiffOp::term(1, xp(1)) + &DiffOp::identity(&ps()));
        assert_eq!(&d(2) * &mo(xp(1)), &DiffOp::term(2, xp(1)) + &d(1).scale_rat(&int(2)));
    }

    #[test]
    fn dixmier_inner_square() {
        let v = &xp(3) + &CoefPoly::param(&ps(), "alpha").unwrap();
        let inner = &d(2) + &mo(v.clone());
        let expected = DiffOp::from_coeffs(
            &ps(),
            [(4, c(1)), (2, v.scale(&int(2))), (1, xp(2).scale(&int(6))), (0, &v.pow(2) + &xp(1).scale(&int(6)))],
        )
        .unwrap();
        assert_eq!(&inner * &inner, expected);
    }

    #[test]
    fn commutators() {
        assert_eq!(d(1).commutator(&mo(xp(1))).unwrap(), DiffOp::identity(&ps()));
        assert!(d(2).commutator(&d(3)).unwrap().is_zero());
    }

    #[test]
    fn powers() {
        assert_eq!(d(10), d(2).pow(5));
        let xd = DiffOp::term(1, xp(1));
        assert_eq!(xd.pow(2), &DiffOp::term(2, xp(2)) + &xd);
        assert_eq!(xd.pow(0), DiffOp::identity(&ps()));
    }

    #[test]
    fn adjoint_examples() {
        let f = DiffOp::term(1, xp(2));
        assert_eq!(f.adjoint(), &DiffOp::term(1, -xp(2)) + &mo(xp(1).scale(&int(-2))));
        assert_eq!(d(2).adjoint(), d(2));
    }

    #[test]
    fn canonical_examples() {
        assert!(d(2).canonical_check().unwrap().is_canonical);
        let r = (&d(2) + &d(1).scale_rat(&int(3))).canonical_check().unwrap();
        assert!(r.is_monic && !r.subleading_zero && !r.is_canonical);
        assert_eq!(DiffOp::zero(&ps()).canonical_check(), Err(Error::ZeroOperator));
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(mo(xp(1)).weyl_automorphism(), d(1));
        assert_eq!(d(1).weyl_automorphism(), mo(-xp(1)));
        let xd = DiffOp::term(1, xp(1));
        assert_eq!(xd.weyl_automorphism(), &(-xd.clone()) - &DiffOp::identity(&ps()));
    }

    #[test]
    fn zero_operator_is_accepted() {
        let z = DiffOp::zero(&ps());
        assert_eq!(z.order(), None);
        assert!((&z * &d(3)).is_zero());
        assert!(z.adjoint().is_zero());
        assert!(z.weyl_automorphism().is_zero());
        assert!(z.commutator(&d(1)).unwrap().is_zero());
    }

    #[test]
    fn mismatched_params() {
        let other = DiffOp::identity(&ParamSet::new(["a"]).unwrap())
            .scale(&CoefPoly::param(&ParamSet::new(["a"]).unwrap(), "a").unwrap())
            .unwrap();
        let mine = d(1).scale(&CoefPoly::param(&ps(), "alpha").unwrap()).unwrap();
        assert!(matches!(mine.try_mul(&other), Err(Error::ParamMismatch { .. })));
    }

    #[test]
    fn display_form() {
        let v = &xp(3) + &CoefPoly::param(&ps(), "alpha").unwrap();
        let op = &d(2) + &mo(v);
        assert_eq!(op.to_string(), "D^2 + (x^3 + alpha)");
    }
}
