//! Common eigenfunctions as exact power series at `x = 0`.
//!
//! For a rational `lambda` the kernel of `L - lambda` near the ordinary point
//! `x = 0` has a basis `psi_0 .. psi_(n-1)` with `psi_j^(i)(0) = delta_ij`.
//! Since `M` commutes with `L` it preserves that kernel, and its action in the
//! normalized basis is read off from the first `n` Taylor coefficients of
//! `M psi_j`. The spectral claim is then a statement about an `n x n`
//! rational matrix.

use num_traits::{One, Zero};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::linalg::{self, QuadRat};
use crate::rat::{factorial, falling, format_rat, rat_sqrt, Rat};
use crate::spectral::{rank_of, HyperellipticCurve};

/// Extra Taylor coefficients kept beyond `ord L + ord M`.
pub const TRUNCATION_MARGIN: usize = 4;

/// Truncated power series `sum_t c_t x^t`, exact through degree
/// `valid_through`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub coeffs: Vec<Rat>,
    pub valid_through: usize,
}

impl Series {
    pub fn new(mut coeffs: Vec<Rat>, valid_through: usize) -> Self {
        coeffs.resize(valid_through + 1, Rat::zero());
        Series { coeffs, valid_through }
    }

    pub fn coeff(&self, t: usize) -> &Rat {
        &self.coeffs[t]
    }

    /// Whether all known coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Numeric coefficients of an operator, as `(i, e, c)` for the term
/// `c x^e D^i`.
fn numeric_terms(op: &DiffOp) -> Result<Vec<(usize, usize, Rat)>> {
    let op = op.to_numeric()?;
    let mut out = Vec::new();
    for (i, c) in op.coeffs() {
        for (e, v) in c.x_coeffs() {
            out.push((i, e as usize, v.as_rational().expect("numeric operator")));
        }
    }
    Ok(out)
}

/// Coefficient of `x^t` in `x^e D^i s`, given the coefficients of `s`.
fn term_coeff(s: &[Rat], i: usize, e: usize, t: usize) -> Rat {
    if t < e {
        return Rat::zero();
    }
    let k = t - e + i;
    if s[k].is_zero() {
        return Rat::zero();
    }
    &s[k] * Rat::from_integer(falling(k, i))
}

/// Applies `A` to a truncated series. The result is exact through degree
/// `valid_through - ord A`.
pub fn apply_series(a: &DiffOp, s: &Series) -> Result<Series> {
    let Some(order) = a.order() else {
        return Ok(Series::new(Vec::new(), s.valid_through));
    };
    if order > s.valid_through {
        return Err(Error::ValidityExhausted { order, valid: s.valid_through });
    }
    let terms = numeric_terms(a)?;
    let valid = s.valid_through - order;
    let coeffs =
        (0..=valid).map(|t| terms.iter().map(|(i, e, c)| c * term_coeff(&s.coeffs, *i, *e, t)).sum()).collect();
    Ok(Series::new(coeffs, valid))
}

/// Normalized basis of `ker(L - lambda)` at `x = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesKernel {
    pub lambda: Rat,
    /// every basis series is exact through degree `truncation`
    pub truncation: usize,
    pub basis: Vec<Series>,
}

/// Solves `(L - lambda) psi = 0` degree by degree for the top Taylor
/// coefficient of each degree.
pub fn series_kernel(l: &DiffOp, lambda: &Rat, truncation: usize) -> Result<SeriesKernel> {
    let n = l.order().ok_or(Error::ZeroOperator)?;
    if truncation < n {
        return Err(Error::TruncationTooSmall { got: truncation, need: n });
    }
    let mut terms = numeric_terms(l)?;
    terms.push((0, 0, -lambda.clone()));
    let lead = terms.iter().filter(|(i, e, _)| *i == n && *e == 0).map(|(_, _, c)| c.clone()).sum::<Rat>();
    if lead.is_zero() {
        return Err(Error::SingularPoint);
    }
    let rest: Vec<_> = terms.into_iter().filter(|(i, e, _)| !(*i == n && *e == 0)).collect();

    let mut basis = Vec::with_capacity(n);
    for j in 0..n {
        let mut s = vec![Rat::zero(); truncation + 1];
        s[j] = Rat::new(One::one(), factorial(j));
        for t in 0..=truncation - n {
            // coefficient of x^t in (L - lambda) psi, without the s_(t+n) term
            let known: Rat = rest.iter().map(|(i, e, c)| c * term_coeff(&s, *i, *e, t)).sum();
            let scale = &lead * Rat::from_integer(falling(t + n, n));
            s[t + n] = -known / scale;
        }
        basis.push(Series::new(s, truncation));
    }
    Ok(SeriesKernel { lambda: lambda.clone(), truncation, basis })
}

/// Matrix of `M` on `ker(L - lambda)` in the normalized basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MActionMatrix {
    pub matrix: Vec<Vec<Rat>>,
    pub lambda: Rat,
    pub f_lambda: Rat,
}

/// [`m_action`] with an explicit truncation order.
pub fn m_action_with(
    l: &DiffOp,
    m: &DiffOp,
    lambda: &Rat,
    curve: &HyperellipticCurve,
    truncation: usize,
) -> Result<MActionMatrix> {
    let n = l.order().ok_or(Error::ZeroOperator)?;
    let mo = m.order().ok_or(Error::ZeroOperator)?;
    let need = n + mo;
    if truncation < need {
        return Err(Error::TruncationTooSmall { got: truncation, need });
    }
    let f_lambda = numeric_f(curve, lambda)?;
    let kernel = series_kernel(l, lambda, truncation)?;
    let mut matrix = vec![vec![Rat::zero(); n]; n];
    for (j, psi) in kernel.basis.iter().enumerate() {
        let image = apply_series(m, psi)?;
        for (i, row) in matrix.iter_mut().enumerate() {
            row[j] = image.coeff(i) * Rat::from_integer(factorial(i));
        }
    }
    Ok(MActionMatrix { matrix, lambda: lambda.clone(), f_lambda })
}

/// Matrix of `M` on `ker(L - lambda)`, truncating at `ord L + ord M + 4`.
pub fn m_action(l: &DiffOp, m: &DiffOp, lambda: &Rat, curve: &HyperellipticCurve) -> Result<MActionMatrix> {
    let n = l.order().ok_or(Error::ZeroOperator)?;
    let mo = m.order().ok_or(Error::ZeroOperator)?;
    m_action_with(l, m, lambda, curve, n + mo + TRUNCATION_MARGIN)
}

fn numeric_f(curve: &HyperellipticCurve, lambda: &Rat) -> Result<Rat> {
    curve.eval(lambda).ok_or_else(|| {
        let mut names: Vec<String> = curve.coeffs().iter().flat_map(|c| c.used_params()).collect();
        names.sort();
        names.dedup();
        Error::SymbolicParams(names)
    })
}

/// Field over which eigenspaces were measured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigenField {
    Rationals,
    /// `Q(sqrt d)`
    Quadratic(Rat),
}

/// Eigenvalue `sign * sqrt(f(lambda))` and the dimension of its eigenspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenspace {
    pub sign: i8,
    pub dimension: usize,
}

/// Everything [`certify_rank`] checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub action: MActionMatrix,
    /// `det(mu I - A)`, ascending powers of `mu`
    pub charpoly: Vec<Rat>,
    /// `(mu^2 - f(lambda))^r`, ascending
    pub expected_charpoly: Vec<Rat>,
    pub minimal_poly: Vec<Rat>,
    pub charpoly_matches: bool,
    pub square_is_f: bool,
    pub trace_zero: bool,
    pub det_matches: bool,
    pub stable_under_truncation: bool,
    pub field: EigenField,
    pub eigenspaces: Vec<Eigenspace>,
    /// `ord L / 2`
    pub rank: usize,
    /// `gcd(ord L, ord M)`
    pub rank_of_orders: usize,
    pub warning: Option<String>,
    pub certified: bool,
}

/// `(mu^2 - f)^r` in ascending powers of `mu`.
pub fn expected_charpoly(f: &Rat, r: usize) -> Vec<Rat> {
    let mut p = vec![Rat::one()];
    for _ in 0..r {
        let mut next = vec![Rat::zero(); p.len() + 2];
        for (k, c) in p.iter().enumerate() {
            next[k + 2] += c;
            next[k] -= c * f;
        }
        p = next;
    }
    p
}

/// Monic minimal polynomial, ascending.
pub fn minimal_poly(a: &[Vec<Rat>]) -> Vec<Rat> {
    let n = a.len();
    let mut identity = vec![vec![Rat::zero(); n]; n];
    for (i, row) in identity.iter_mut().enumerate() {
        row[i] = Rat::one();
    }
    let mut powers = vec![identity];
    for k in 1..=n {
        let next = linalg::mat_mul(powers.last().unwrap(), a);
        powers.push(next);
        // columns are vec(A^0) .. vec(A^k)
        let rows: Vec<Vec<(usize, Rat)>> = (0..n * n)
            .map(|idx| {
                powers
                    .iter()
                    .enumerate()
                    .map(|(c, p)| (c, p[idx / n][idx % n].clone()))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        if let Some(v) = linalg::nullspace(&rows, k + 1).into_iter().next() {
            let lead = v[k].clone();
            return v.into_iter().map(|c| c / &lead).collect();
        }
    }
    unreachable!("Cayley-Hamilton bounds the degree by n")
}

fn eigenspace_dim_rational(a: &[Vec<Rat>], mu: &Rat) -> usize {
    let shifted: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, v)| if i == j { v - mu } else { v.clone() }).collect())
        .collect();
    a.len() - linalg::rank(shifted)
}

fn eigenspace_dim_quadratic(a: &[Vec<Rat>], d: &Rat, sign: i8) -> usize {
    let s = Rat::from_integer(sign.into());
    let shifted: Vec<Vec<QuadRat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| {
                    let v_part = if i == j { -&s } else { Rat::zero() };
                    QuadRat::new(v.clone(), v_part, d.clone())
                })
                .collect()
        })
        .collect();
    a.len() - linalg::rank(shifted)
}

/// Certifies that the common eigenspaces of `L` and `M` at `lambda` have
/// dimension `r = ord L / 2`, which must also be `gcd(ord L, ord M)`.
pub fn certify_rank(l: &DiffOp, m: &DiffOp, curve: &HyperellipticCurve, lambda: &Rat) -> Result<RankReport> {
    certify_rank_with(l, m, curve, lambda, TRUNCATION_MARGIN)
}

/// [`certify_rank`] truncating at `ord L + ord M + margin`; the stability
/// check recomputes with 8 more terms.
pub fn certify_rank_with(
    l: &DiffOp,
    m: &DiffOp,
    curve: &HyperellipticCurve,
    lambda: &Rat,
    margin: usize,
) -> Result<RankReport> {
    let n = l.order().ok_or(Error::ZeroOperator)?;
    let mo = m.order().ok_or(Error::ZeroOperator)?;
    let action = m_action_with(l, m, lambda, curve, n + mo + margin)?;
    let again = m_action_with(l, m, lambda, curve, n + mo + margin + 8)?;
    let stable_under_truncation = again == action;
    let a = &action.matrix;
    let f = action.f_lambda.clone();
    let r = n / 2;
    let rank_of_orders = rank_of(l, m)?;

    let charpoly = linalg::charpoly(a);
    let expected = expected_charpoly(&f, r);
    let charpoly_matches = n % 2 == 0 && charpoly == expected;

    let square = linalg::mat_mul(a, a);
    let square_is_f = square
        .iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, v)| if i == j { *v == f } else { v.is_zero() }));
    let trace: Rat = (0..n).map(|i| a[i][i].clone()).sum();
    let trace_zero = trace.is_zero();
    let det = linalg::determinant(a);
    let det_expected = if r % 2 == 1 { -num_traits::pow(f.clone(), r) } else { num_traits::pow(f.clone(), r) };
    let det_matches = det == det_expected;
    let minimal = minimal_poly(a);

    let mut warning = None;
    let (field, eigenspaces) = if f.is_zero() {
        warning = Some(format!("f({}) = 0: lambda is a branch point of the curve", format_rat(lambda)));
        (EigenField::Rationals, vec![Eigenspace { sign: 0, dimension: eigenspace_dim_rational(a, &f) }])
    } else if let Some(s) = rat_sqrt(&f) {
        let dims = [1i8, -1]
            .into_iter()
            .map(|sign| {
                let mu = if sign > 0 { s.clone() } else { -s.clone() };
                Eigenspace { sign, dimension: eigenspace_dim_rational(a, &mu) }
            })
            .collect();
        (EigenField::Rationals, dims)
    } else {
        let dims = [1i8, -1]
            .into_iter()
            .map(|sign| Eigenspace { sign, dimension: eigenspace_dim_quadratic(a, &f, sign) })
            .collect();
        (EigenField::Quadratic(f.clone()), dims)
    };

    let certified = warning.is_none()
        && charpoly_matches
        && square_is_f
        && trace_zero
        && det_matches
        && stable_under_truncation
        && eigenspaces.iter().all(|e| e.dimension == r)
        && rank_of_orders == r;
    Ok(RankReport {
        action,
        charpoly,
        expected_charpoly: expected,
        minimal_poly: minimal,
        charpoly_matches,
        square_is_f,
        trace_zero,
        det_matches,
        stable_under_truncation,
        field,
        eigenspaces,
        rank: r,
        rank_of_orders,
        warning,
        certified,
    })
}
