//! Exact sparse polynomials in `x` and a declared set of symbolic parameters.
//!
//! Every operator coefficient lives here. Terms are kept in a `BTreeMap` keyed by
//! [`Monomial`], whose `Ord` is graded lexicographic, so two polynomials are
//! mathematically equal exactly when they are structurally equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{format_rat, Rat};

/// Ordered list of symbolic parameter names, shared cheaply between values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamSet(Arc<[String]>);

impl ParamSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for name in names {
            let name = name.into();
            let valid = !name.is_empty() && name != "x" && name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid || out.contains(&name) {
                return Err(Error::InvalidParamName(name));
            }
            out.push(name);
        }
        Ok(ParamSet(out.into()))
    }

    pub fn empty() -> Self {
        ParamSet(Arc::from(Vec::<String>::new()))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// Names of `self` followed by the names of `other` not already present.
    pub fn union(&self, other: &ParamSet) -> ParamSet {
        let mut names = self.0.to_vec();
        for n in other.names() {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        ParamSet(names.into())
    }

    /// The set with `drop` removed, preserving order.
    pub fn without(&self, drop: &[&str]) -> ParamSet {
        let names: Vec<String> = self.0.iter().filter(|n| !drop.contains(&n.as_str())).cloned().collect();
        ParamSet(names.into())
    }

    fn same(&self, other: &ParamSet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

/// `x^x * prod params[i]^p[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub p: Vec<u32>,
}

impl Monomial {
    pub fn one(nparams: usize) -> Self {
        Monomial { x: 0, p: vec![0; nparams] }
    }

    pub fn total_degree(&self) -> u32 {
        self.x + self.p.iter().sum::<u32>()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { x: self.x + other.x, p: self.p.iter().zip(&other.p).map(|(a, b)| a + b).collect() }
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        if self.x < other.x || self.p.iter().zip(&other.p).any(|(a, b)| a < b) {
            return None;
        }
        Some(Monomial { x: self.x - other.x, p: self.p.iter().zip(&other.p).map(|(a, b)| a - b).collect() })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then(self.x.cmp(&other.x)).then_with(|| self.p.cmp(&other.p))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoefPoly {
    params: ParamSet,
    terms: BTreeMap<Monomial, Rat>,
}

impl CoefPoly {
    pub fn zero(params: &ParamSet) -> Self {
        CoefPoly { params: params.clone(), terms: BTreeMap::new() }
    }

    pub fn one(params: &ParamSet) -> Self {
        Self::constant(params, Rat::one())
    }

    pub fn constant(params: &ParamSet, c: Rat) -> Self {
        Self::monomial(params, c, 0, &[])
    }

    pub fn from_i64(params: &ParamSet, c: i64) -> Self {
        Self::constant(params, Rat::from_integer(c.into()))
    }

    pub fn x(params: &ParamSet) -> Self {
        Self::monomial(params, Rat::one(), 1, &[])
    }

    /// `c * x^xexp * prod p_i^e_i` for the given `(name, exponent)` pairs.
    pub fn monomial(params: &ParamSet, c: Rat, xexp: u32, pexps: &[(usize, u32)]) -> Self {
        let mut out = Self::zero(params);
        if !c.is_zero() {
            let mut m = Monomial { x: xexp, p: vec![0; params.len()] };
            for &(i, e) in pexps {
                m.p[i] += e;
            }
            out.terms.insert(m, c);
        }
        out
    }

    pub fn param(params: &ParamSet, name: &str) -> Result<Self> {
        let i = params.index_of(name).ok_or_else(|| Error::UnknownParam(name.to_string()))?;
        Ok(Self::monomial(params, Rat::one(), 0, &[(i, 1)]))
    }

    /// Builds from raw terms, dropping zeros and merging duplicates.
    pub fn from_terms<I>(params: &ParamSet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rat)>,
    {
        let mut out = Self::zero(params);
        for (m, c) in terms {
            if m.p.len() != params.len() {
                return Err(Error::ParamMismatch {
                    left: params.names().to_vec(),
                    right: vec![format!("<{} exponents>", m.p.len())],
                });
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_one())
    }

    /// Highest power of `x`; `None` for the zero polynomial.
    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x).max()
    }

    /// Largest term in the graded order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Smallest term in the graded order (the constant term when present).
    pub fn trailing_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses `self` over `target`, which must contain every parameter
    /// that occurs in `self`.
    pub fn lift(&self, target: &ParamSet) -> Result<CoefPoly> {
        if self.params.same(target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.params.len());
        for name in self.params.names() {
            map.push(target.index_of(name));
        }
        let mut out = CoefPoly::zero(target);
        for (m, c) in &self.terms {
            let mut p = vec![0; target.len()];
            for (i, &e) in m.p.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => p[j] = e,
                    None => return Err(self.mismatch(target)),
                }
            }
            out.terms.insert(Monomial { x: m.x, p }, c.clone());
        }
        Ok(out)
    }

    fn mismatch(&self, other: &ParamSet) -> Error {
        Error::ParamMismatch { left: self.params.names().to_vec(), right: other.names().to_vec() }
    }

    /// The common ring for a binary operation: identical sets, or one side
    /// is parameter-free and embeds into the other.
    pub fn common_params(a: &ParamSet, b: &ParamSet) -> Result<ParamSet> {
        if a.same(b) || b.is_empty() {
            Ok(a.clone())
        } else if a.is_empty() {
            Ok(b.clone())
        } else {
            Err(Error::ParamMismatch { left: a.names().to_vec(), right: b.names().to_vec() })
        }
    }

    fn align<'a>(
        &'a self,
        other: &'a CoefPoly,
    ) -> Result<(std::borrow::Cow<'a, CoefPoly>, std::borrow::Cow<'a, CoefPoly>)> {
        use std::borrow::Cow;
        let ps = Self::common_params(&self.params, &other.params)?;
        let a = if self.params.same(&ps) { Cow::Borrowed(self) } else { Cow::Owned(self.lift(&ps)?) };
        let b = if other.params.same(&ps) { Cow::Borrowed(other) } else { Cow::Owned(other.lift(&ps)?) };
        Ok((a, b))
    }

    pub fn try_add(&self, other: &CoefPoly) -> Result<CoefPoly> {
        let (a, b) = self.align(other)?;
        let mut out = a.into_owned();
        for (m, c) in b.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &CoefPoly) -> Result<CoefPoly> {
        let (a, b) = self.align(other)?;
        let mut out = a.into_owned();
        for (m, c) in b.terms.iter() {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &CoefPoly) -> Result<CoefPoly> {
        let (a, b) = self.align(other)?;
        let mut out = CoefPoly::zero(&a.params);
        for (ma, ca) in a.terms.iter() {
            for (mb, cb) in b.terms.iter() {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> CoefPoly {
        if c.is_zero() {
            return CoefPoly::zero(&self.params);
        }
        CoefPoly { params: self.params.clone(), terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> CoefPoly {
        let mut acc = CoefPoly::one(&self.params);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies by `x^k`.
    pub fn shift_x(&self, k: u32) -> CoefPoly {
        CoefPoly {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(m, c)| (Monomial { x: m.x + k, p: m.p.clone() }, c.clone())).collect(),
        }
    }

    /// Formal derivative in `x`; parameters are constants.
    pub fn dx(&self) -> CoefPoly {
        let mut out = CoefPoly::zero(&self.params);
        for (m, c) in &self.terms {
            if m.x > 0 {
                let nm = Monomial { x: m.x - 1, p: m.p.clone() };
                out.terms.insert(nm, c * Rat::from_integer(m.x.into()));
            }
        }
        out
    }

    /// Replaces the bound parameters by rationals. The result lives over the
    /// remaining parameters.
    pub fn subst(&self, bindings: &[(&str, Rat)]) -> Result<CoefPoly> {
        let mut idx = Vec::new();
        for (name, v) in bindings {
            let i = self.params.index_of(name).ok_or_else(|| Error::UnknownParam(name.to_string()))?;
            idx.push((i, v));
        }
        let names: Vec<&str> = bindings.iter().map(|(n, _)| *n).collect();
        let target = self.params.without(&names);
        let keep: Vec<usize> = (0..self.params.len()).filter(|i| !idx.iter().any(|(j, _)| j == i)).collect();
        let mut out = CoefPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            for (i, v) in &idx {
                let e = m.p[*i];
                if e > 0 {
                    coef *= num_traits::pow(Rat::clone(v), e as usize);
                }
            }
            let p = keep.iter().map(|&i| m.p[i]).collect();
            out.add_term(Monomial { x: m.x, p }, coef);
        }
        Ok(out)
    }

    /// The polynomial itself when it has `x`-degree 0 (a constant of the
    /// parameter ring), `None` otherwise.
    pub fn as_constant(&self) -> Option<CoefPoly> {
        if self.terms.keys().all(|m| m.x == 0) {
            Some(self.clone())
        } else {
            None
        }
    }

    /// The value when the polynomial is a plain rational number.
    pub fn as_rational(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.total_degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Parameters that actually occur.
    pub fn used_params(&self) -> Vec<String> {
        let mut used = vec![false; self.params.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.p.iter().enumerate() {
                used[i] |= e > 0;
            }
        }
        self.params.names().iter().zip(used).filter(|(_, u)| *u).map(|(n, _)| n.clone()).collect()
    }

    /// Coefficient of `x^e` as a parameter-only polynomial.
    pub fn x_coeff(&self, e: u32) -> CoefPoly {
        let mut out = CoefPoly::zero(&self.params);
        for (m, c) in &self.terms {
            if m.x == e {
                out.terms.insert(Monomial { x: 0, p: m.p.clone() }, c.clone());
            }
        }
        out
    }

    /// Splits by the exponent of parameter `name`; the parts live over the
    /// remaining parameters.
    pub fn split_param(&self, name: &str) -> Result<BTreeMap<u32, CoefPoly>> {
        let i = self.params.index_of(name).ok_or_else(|| Error::UnknownParam(name.to_string()))?;
        let target = self.params.without(&[name]);
        let mut out: BTreeMap<u32, CoefPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut p = m.p.clone();
            let e = p.remove(i);
            out.entry(e).or_insert_with(|| CoefPoly::zero(&target)).terms.insert(Monomial { x: m.x, p }, c.clone());
        }
        Ok(out)
    }

    /// Splits into `x`-power -> parameter-only coefficient.
    pub fn x_coeffs(&self) -> BTreeMap<u32, CoefPoly> {
        let mut out: BTreeMap<u32, CoefPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.x)
                .or_insert_with(|| CoefPoly::zero(&self.params))
                .terms
                .insert(Monomial { x: 0, p: m.p.clone() }, c.clone());
        }
        out
    }

    /// Evaluation at `x = 0`.
    pub fn at_zero(&self) -> CoefPoly {
        self.x_coeff(0)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &CoefPoly) -> Option<CoefPoly> {
        let (a, d) = self.align(d).ok()?;
        let (dm, dc) = d.leading_term()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = a.into_owned();
        let mut q = CoefPoly::zero(&rem.params);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            let step = CoefPoly { params: rem.params.clone(), terms: BTreeMap::from([(qm.clone(), qc.clone())]) };
            rem = &rem - &(&step * d.as_ref());
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// `self(x := q)`, with parameters left alone.
    pub fn compose_x(&self, q: &CoefPoly) -> Result<CoefPoly> {
        let ps = Self::common_params(&self.params, &q.params)?;
        let q = q.lift(&ps)?;
        let coeffs = self.lift(&ps)?.x_coeffs();
        let top = match coeffs.keys().next_back() {
            Some(&t) => t,
            None => return Ok(CoefPoly::zero(&ps)),
        };
        let zero = CoefPoly::zero(&ps);
        let mut acc = CoefPoly::zero(&ps);
        for e in (0..=top).rev() {
            acc = &(&acc * &q) + coeffs.get(&e).unwrap_or(&zero);
        }
        Ok(acc)
    }

    /// Evaluates the parameter-free polynomial at a rational `x`.
    pub fn eval_rational(&self, x: &Rat) -> Option<Rat> {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            if m.p.iter().any(|&e| e > 0) {
                return None;
            }
            acc += c * num_traits::pow(x.clone(), m.x as usize);
        }
        Some(acc)
    }
}

fn fmt_monomial(params: &ParamSet, m: &Monomial) -> Vec<String> {
    let mut parts = Vec::new();
    let pow = |name: &str, e: u32| if e == 1 { name.to_string() } else { format!("{name}^{e}") };
    if m.x > 0 {
        parts.push(pow("x", m.x));
    }
    for (name, &e) in params.names().iter().zip(&m.p) {
        if e > 0 {
            parts.push(pow(name, e));
        }
    }
    parts
}

impl fmt::Display for CoefPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let parts = fmt_monomial(&self.params, m);
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut pieces = Vec::new();
            if !abs.is_one() || parts.is_empty() {
                pieces.push(format_rat(&abs));
            }
            pieces.extend(parts);
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&CoefPoly> for &CoefPoly {
            type Output = CoefPoly;
            /// Panics on incompatible parameter sets; use the `try_` form to
            /// get an error instead.
            fn $m(self, rhs: &CoefPoly) -> CoefPoly {
                self.$try(rhs).expect("incompatible parameter sets")
            }
        }
        impl $tr<CoefPoly> for CoefPoly {
            type Output = CoefPoly;
            fn $m(self, rhs: CoefPoly) -> CoefPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &CoefPoly {
    type Output = CoefPoly;
    fn neg(self) -> CoefPoly {
        CoefPoly { params: self.params.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for CoefPoly {
    type Output = CoefPoly;
    fn neg(self) -> CoefPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use proptest::prelude::*;

    fn ps() -> ParamSet {
        ParamSet::new(["alpha", "b"]).unwrap()
    }

    fn x() -> CoefPoly {
        CoefPoly::x(&ps())
    }

    fn c(v: i64) -> CoefPoly {
        CoefPoly::from_i64(&ps(), v)
    }

    fn alpha() -> CoefPoly {
        CoefPoly::param(&ps(), "alpha").unwrap()
    }

    #[test]
    fn paramset_validation() {
        assert!(ParamSet::new(["x"]).is_err());
        assert!(ParamSet::new([""]).is_err());
        assert!(ParamSet::new(["a", "a"]).is_err());
        assert!(ParamSet::new(["a", "b"]).is_ok());
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x() + &c(1)) * &(&x() - &c(1));
        assert_eq!(p, &x().pow(2) - &c(1));
    }

    #[test]
    fn cancellation_leaves_alpha() {
        let p = &(&x().pow(3) + &alpha()) + &(-x().pow(3));
        assert_eq!(p, alpha());
    }

    #[test]
    fn chebyshev_recurrence_step() {
        let z = x();
        let t2 = &(&z.pow(2) * &c(2)) - &c(1);
        let t3 = &(&(&z * &c(2)) * &t2) - &z;
        assert_eq!(t3, &(&z.pow(3) * &c(4)) - &(&z * &c(3)));
    }

    #[test]
    fn derivatives() {
        assert_eq!((&x().pow(3) + &alpha()).dx(), &x().pow(2) * &c(3));
        assert!(c(7).dx().is_zero());
        let b = CoefPoly::param(&ps(), "b").unwrap();
        assert_eq!((&x().pow(2) * &b).dx(), &(&x() * &b) * &c(2));
    }

    #[test]
    fn substitution() {
        let p = &x().pow(2) + &alpha();
        let s = p.subst(&[("alpha", int(1))]).unwrap();
        let ps1 = ParamSet::new(["b"]).unwrap();
        assert_eq!(s, &CoefPoly::x(&ps1).pow(2) + &CoefPoly::from_i64(&ps1, 1));

        let b = CoefPoly::param(&ps(), "b").unwrap();
        assert!((&alpha() * &b).subst(&[("alpha", int(0))]).unwrap().is_zero());

        let one = ParamSet::new(["a"]).unwrap();
        let p = CoefPoly::param(&one, "a").unwrap().scale(&rat(5, 16));
        let v = p.subst(&[("a", rat(1, 16))]).unwrap();
        assert_eq!(v.as_rational(), Some(rat(5, 256)));

        assert_eq!(p.subst(&[("zeta", int(1))]), Err(Error::UnknownParam("zeta".into())));
    }

    #[test]
    fn constant_detection() {
        assert_eq!((-alpha()).as_constant(), Some(-alpha()));
        assert_eq!((&x() * &c(2)).as_constant(), None);
        assert_eq!(CoefPoly::zero(&ps()).as_constant(), Some(CoefPoly::zero(&ps())));
    }

    #[test]
    fn incompatible_params_error_names_both() {
        let a = CoefPoly::param(&ParamSet::new(["a"]).unwrap(), "a").unwrap();
        let err = a.try_add(&alpha()).unwrap_err();
        assert_eq!(err, Error::ParamMismatch { left: vec!["a".into()], right: vec!["alpha".into(), "b".into()] });
        // parameter-free polynomials embed anywhere
        let k = CoefPoly::from_i64(&ParamSet::empty(), 3);
        assert_eq!(a.try_add(&k).unwrap().params().names(), ["a".to_string()]);
    }

    #[test]
    fn exact_division() {
        let p = &(&x() + &alpha()) * &(&x().pow(2) - &c(3));
        assert_eq!(p.div_exact(&(&x() + &alpha())), Some(&x().pow(2) - &c(3)));
        assert_eq!((&x().pow(2) + &c(1)).div_exact(&(&x() + &c(1))), None);
    }

    #[test]
    fn display() {
        let p = &(&x().pow(3) * &c(-2)) + &(&alpha().scale(&rat(1, 2)) - &c(1));
        assert_eq!(p.to_string(), "-2*x^3 + 1/2*alpha - 1");
        assert_eq!(CoefPoly::zero(&ps()).to_string(), "0");
    }

    fn small_poly() -> impl Strategy<Value = CoefPoly> {
        prop::collection::vec((-5i64..=5, 1i64..=3, 0u32..=6, 0u32..=2, 0u32..=2), 0..=4).prop_map(|ts| {
            let p = ps();
            ts.into_iter().fold(CoefPoly::zero(&p), |acc, (n, d, xe, a, b)| {
                &acc + &CoefPoly::monomial(&p, rat(n, d), xe, &[(0, a), (1, b)])
            })
        })
    }

    proptest! {
        #[test]
        fn ring_laws(p in small_poly(), q in small_poly(), r in small_poly()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&(&p + &q) - &q, p.clone());
        }

        #[test]
        fn degree_is_additive(p in small_poly(), q in small_poly()) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            prop_assert_eq!((&p * &q).deg_x(), Some(p.deg_x().unwrap() + q.deg_x().unwrap()));
        }

        #[test]
        fn product_rule(p in small_poly(), q in small_poly()) {
            prop_assert_eq!((&p * &q).dx(), &(&p.dx() * &q) + &(&p * &q.dx()));
        }

        #[test]
        fn subst_is_a_homomorphism(p in small_poly(), q in small_poly(), n in -4i64..4) {
            let b = [("alpha", int(n))];
            prop_assert_eq!((&p * &q).subst(&b).unwrap(), &p.subst(&b).unwrap() * &q.subst(&b).unwrap());
        }

        #[test]
        fn div_exact_inverts_mul(p in small_poly(), q in small_poly()) {
            prop_assume!(!q.is_zero());
            prop_assert_eq!((&p * &q).div_exact(&q), Some(p));
        }
    }
}
