//! Constructors for the explicit commuting-operator families, plus the
//! Chebyshev polynomials that generate the rank-`r` family.
//!
//! Every operator is built by algebra: the inner operator is assembled from
//! its terms and squared with the operator product, so tables of expanded
//! coefficients never appear here.

use std::fmt;

use num_traits::{One, Zero};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::poly::{CoefPoly, ParamSet};
use crate::rat::Rat;

/// `T_r` as an exact polynomial in a single variable (stored as `x`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebPoly {
    pub degree: usize,
    pub poly: CoefPoly,
}

impl ChebPoly {
    /// Coefficients in ascending powers.
    pub fn coeffs(&self) -> Vec<Rat> {
        let c = self.poly.x_coeffs();
        (0..=self.degree as u32).map(|e| c.get(&e).and_then(CoefPoly::as_rational).unwrap_or_else(Rat::zero)).collect()
    }
}

/// Chebyshev polynomial of the first kind by the three-term recurrence;
/// `T_{-r} = T_r`.
pub fn chebyshev(r: i64) -> ChebPoly {
    let r = r.unsigned_abs() as usize;
    let ps = ParamSet::empty();
    let z = CoefPoly::x(&ps);
    let two_z = z.scale(&Rat::from_integer(2.into()));
    let (mut prev, mut cur) = (CoefPoly::one(&ps), z);
    if r == 0 {
        return ChebPoly { degree: 0, poly: prev };
    }
    for _ in 1..r {
        let next = &(&two_z * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    ChebPoly { degree: r, poly: cur }
}

/// Whether `T_n(T_m(z)) = T_{nm}(z)` holds exactly.
pub fn cheb_nest_check(n: i64, m: i64) -> bool {
    let outer = chebyshev(n).poly;
    let inner = chebyshev(m).poly;
    match outer.compose_x(&inner) {
        Ok(c) => c == chebyshev(n * m).poly,
        Err(_) => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChebVar {
    /// multiplication operator `T_r(x)`
    X,
    /// constant-coefficient operator `T_r(D)`
    D,
}

pub fn cheb_operator(r: i64, var: ChebVar, params: &ParamSet) -> DiffOp {
    let t = chebyshev(r);
    match var {
        ChebVar::X => DiffOp::mul_op(&t.poly.lift(params).expect("parameter-free")),
        ChebVar::D => {
            let mut op = DiffOp::zero(params);
            for (k, c) in t.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    op = &op + &DiffOp::d_pow(params, k).scale_rat(c);
                }
            }
            op
        }
    }
}

/// One of the explicit operator families. Symbolic constants are
/// [`CoefPoly`] values without `x`; integer parameters are concrete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// rank 2, genus 1, with explicit companion
    DixmierR2 {
        alpha: CoefPoly,
    },
    /// rank 3, genus 1, with explicit companion
    DixmierR3 {
        alpha: CoefPoly,
    },
    MironovR2 {
        g: u32,
        alpha: CoefPoly,
    },
    MironovR3 {
        g: u32,
        alpha: CoefPoly,
    },
    /// rank `2k`, `k > 1`
    RankTwoK {
        k: u32,
        g: u32,
        alpha: CoefPoly,
    },
    /// rank `3k`, `k >= 1`
    RankThreeK {
        k: u32,
        g: u32,
        alpha: CoefPoly,
    },
    /// order-4 Chebyshev operator, not in canonical form
    ChebZ {
        r: i64,
        g: u32,
        a: CoefPoly,
        b: CoefPoly,
    },
    /// order-`2r` operator of rank `r`
    ChebCanonical {
        r: i64,
        g: u32,
        a: CoefPoly,
        b: CoefPoly,
    },
}

/// Output of [`FamilySpec::build`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Built {
    pub l: DiffOp,
    /// The companion when it is given in closed form.
    pub m: Option<DiffOp>,
}

impl FamilySpec {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::DixmierR2 { .. } => "dixmier-r2",
            FamilySpec::DixmierR3 { .. } => "dixmier-r3",
            FamilySpec::MironovR2 { .. } => "mironov-r2",
            FamilySpec::MironovR3 { .. } => "mironov-r3",
            FamilySpec::RankTwoK { .. } => "rank-2k",
            FamilySpec::RankThreeK { .. } => "rank-3k",
            FamilySpec::ChebZ { .. } => "cheb-z",
            FamilySpec::ChebCanonical { .. } => "cheb-canonical",
        }
    }

    /// Genus of the spectral curve the family is constructed for.
    pub fn genus(&self) -> u32 {
        match self {
            FamilySpec::DixmierR2 { .. } | FamilySpec::DixmierR3 { .. } => 1,
            FamilySpec::MironovR2 { g, .. }
            | FamilySpec::MironovR3 { g, .. }
            | FamilySpec::RankTwoK { g, .. }
            | FamilySpec::RankThreeK { g, .. }
            | FamilySpec::ChebZ { g, .. }
            | FamilySpec::ChebCanonical { g, .. } => *g,
        }
    }

    /// Expected rank of the commuting pair.
    pub fn rank(&self) -> u32 {
        match self {
            FamilySpec::DixmierR2 { .. } | FamilySpec::MironovR2 { .. } | FamilySpec::ChebZ { .. } => 2,
            FamilySpec::DixmierR3 { .. } | FamilySpec::MironovR3 { .. } => 3,
            FamilySpec::RankTwoK { k, .. } => 2 * k,
            FamilySpec::RankThreeK { k, .. } => 3 * k,
            // at r = 1 the inner operator has order 2 from x^2 D^2
            FamilySpec::ChebCanonical { r, .. } => (r.unsigned_abs() as u32).max(2),
        }
    }

    /// Order of `L`.
    pub fn order_l(&self) -> usize {
        match self {
            FamilySpec::ChebZ { .. } => 4,
            _ => 2 * self.rank() as usize,
        }
    }

    /// Order of the companion `M`, `(2g+1) * rank`.
    pub fn order_m(&self) -> usize {
        (2 * self.genus() as usize + 1) * self.order_l() / 2
    }

    fn constants(&self) -> Vec<(&'static str, &CoefPoly)> {
        match self {
            FamilySpec::DixmierR2 { alpha }
            | FamilySpec::DixmierR3 { alpha }
            | FamilySpec::MironovR2 { alpha, .. }
            | FamilySpec::MironovR3 { alpha, .. }
            | FamilySpec::RankTwoK { alpha, .. }
            | FamilySpec::RankThreeK { alpha, .. } => vec![("alpha", alpha)],
            FamilySpec::ChebZ { a, b, .. } | FamilySpec::ChebCanonical { a, b, .. } => {
                vec![("a", a), ("b", b)]
            }
        }
    }

    fn validate(&self) -> Result<ParamSet> {
        let bad = |msg: String| Err(Error::InvalidFamily(msg));
        let g = self.genus();
        if g == 0 {
            return bad("genus g must be at least 1".into());
        }
        match self {
            FamilySpec::RankTwoK { k, .. } if *k < 2 => return bad(format!("rank-2k needs k > 1, got {k}")),
            FamilySpec::RankThreeK { k, .. } if *k < 1 => return bad(format!("rank-3k needs k >= 1, got {k}")),
            FamilySpec::ChebZ { r: 0, .. } => return bad("cheb-z needs a nonzero r".into()),
            FamilySpec::ChebCanonical { r, .. } if *r < 1 => {
                return bad(format!("cheb-canonical needs r >= 1, got {r}"))
            }
            _ => {}
        }
        let mut ps = ParamSet::empty();
        for (name, c) in self.constants() {
            if c.as_constant().is_none() {
                return bad(format!("{name} must not depend on x"));
            }
            if c.is_zero() && name != "b" {
                return bad(format!("{name} must be nonzero"));
            }
            ps = ps.union(c.params());
        }
        Ok(ps)
    }

    pub fn build(&self) -> Result<Built> {
        let ps = self.validate()?;
        let x = CoefPoly::x(&ps);
        let d = |k: usize| DiffOp::d_pow(&ps, k);
        let mo = |c: &CoefPoly| DiffOp::mul_op(c);
        let n = |v: i64| CoefPoly::from_i64(&ps, v);
        let lift = |c: &CoefPoly| c.lift(&ps);
        let gg = |g: u32| n(i64::from(g) * (i64::from(g) + 1));

        let built = match self {
            FamilySpec::DixmierR2 { alpha } => {
                let v = &x.pow(3) + &lift(alpha)?;
                let inner = &d(2) + &mo(&v);
                let l = &inner.pow(2) + &mo(&x.scale(&Rat::from_integer(2.into())));
                let m = &inner.pow(3)
                    + &DiffOp::term(2, x.scale(&Rat::from_integer(3.into())))
                    + d(1).scale_rat(&Rat::from_integer(3.into()))
                    + mo(&(&(&x * &v) * &n(3)));
                Built { l, m: Some(m) }
            }
            FamilySpec::DixmierR3 { alpha } => {
                let v = &x.pow(2) + &lift(alpha)?;
                let inner = &d(3) + &mo(&v);
                let l = &inner.pow(2) + &d(1).scale_rat(&Rat::from_integer(2.into()));
                let m = &inner.pow(3)
                    + &d(4).scale_rat(&Rat::from_integer(3.into()))
                    + DiffOp::term(1, &v * &n(3))
                    + mo(&(&x * &n(3)));
                Built { l, m: Some(m) }
            }
            FamilySpec::MironovR2 { g, alpha } => {
                let inner = &d(2) + &mo(&(&x.pow(3) + &lift(alpha)?));
                let l = &inner.pow(2) + &mo(&(&x * &gg(*g)));
                Built { l, m: None }
            }
            FamilySpec::MironovR3 { g, alpha } => {
                let inner = &d(3) + &mo(&(&x.pow(2) + &lift(alpha)?));
                let l = &inner.pow(2) + &DiffOp::term(1, gg(*g));
                Built { l, m: None }
            }
            FamilySpec::RankTwoK { k, g, alpha } => {
                let k = *k as usize;
                let inner = &d(2 * k) - &DiffOp::term(k, &x * &n(2)) - d(k - 1).scale_rat(&Rat::from_integer(k.into()))
                    + d(3)
                    + mo(&(&x.pow(2) + &lift(alpha)?));
                let l = &inner.pow(2) + &DiffOp::term(1, gg(*g));
                Built { l, m: None }
            }
            FamilySpec::RankThreeK { k, g, alpha } => {
                let kk = *k as usize;
                let ki = i64::from(*k);
                let mut inner = &d(3 * kk) - &DiffOp::term(2 * kk, &x * &n(3));
                inner = &inner - &d(2 * kk - 1).scale_rat(&Rat::from_integer((3 * ki).into()));
                inner = &inner + &DiffOp::term(kk, &x.pow(2) * &n(3));
                inner = &inner + &DiffOp::term(kk - 1, &x * &n(3 * ki));
                if kk >= 2 {
                    inner = &inner + &d(kk - 2).scale_rat(&Rat::from_integer((ki * (ki - 1)).into()));
                }
                inner = &inner + &d(2) + mo(&(&lift(alpha)? - &x.pow(3)));
                let l = &inner.pow(2) - &mo(&(&x * &gg(*g)));
                Built { l, m: None }
            }
            FamilySpec::ChebZ { r, g, a, b } => {
                let (a, b) = (lift(a)?, lift(b)?);
                let t = cheb_operator(*r, ChebVar::X, &ps);
                let inner = &DiffOp::term(2, &n(1) - &x.pow(2)) - &DiffOp::term(1, x.clone()) + t.scale(&a)? + mo(&b);
                let weight = &a * &(&gg(*g) * &n(r * r));
                let l = &inner.pow(2) - &t.scale(&weight)?;
                Built { l, m: None }
            }
            FamilySpec::ChebCanonical { r, g, a, b } => {
                let (a, b) = (lift(a)?, lift(b)?);
                let t = cheb_operator(*r, ChebVar::D, &ps);
                let inner =
                    &t.scale(&a)? - &DiffOp::term(2, x.pow(2)) - DiffOp::term(1, &x * &n(3)) + mo(&(&x.pow(2) + &b));
                let weight = &a * &(&gg(*g) * &n(r * r));
                let l = &inner.pow(2) - &t.scale(&weight)?;
                Built { l, m: None }
            }
        };
        Ok(built)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::DixmierR2 { alpha } | FamilySpec::DixmierR3 { alpha } => {
                write!(f, "{}(alpha={alpha})", self.tag())
            }
            FamilySpec::MironovR2 { g, alpha } | FamilySpec::MironovR3 { g, alpha } => {
                write!(f, "{}(g={g}, alpha={alpha})", self.tag())
            }
            FamilySpec::RankTwoK { k, g, alpha } | FamilySpec::RankThreeK { k, g, alpha } => {
                write!(f, "{}(k={k}, g={g}, alpha={alpha})", self.tag())
            }
            FamilySpec::ChebZ { r, g, a, b } | FamilySpec::ChebCanonical { r, g, a, b } => {
                write!(f, "{}(r={r}, g={g}, a={a}, b={b})", self.tag())
            }
        }
    }
}

/// `2^{1-r}`, the value of `a` that makes the rank-`r` operator monic.
pub fn monic_a(r: i64) -> Rat {
    Rat::new(One::one(), num_bigint::BigInt::from(2).pow((r.unsigned_abs() - 1) as u32))
}
