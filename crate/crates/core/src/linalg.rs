//! Exact linear algebra over the rationals and over quadratic extensions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rat::Rat;

/// A sparse row with integer entries, sorted by column.
type IntRow = Vec<(usize, BigInt)>;

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

/// `a * r - b * p`, divided by the content of the result.
fn combine(r: &IntRow, a: &BigInt, p: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let (col, v) = match (r.get(i), p.get(j)) {
            (Some((cr, vr)), Some((cp, vp))) if cr == cp => {
                i += 1;
                j += 1;
                (*cr, a * vr - b * vp)
            }
            (Some((cr, vr)), Some((cp, _))) if cr < cp => {
                i += 1;
                (*cr, a * vr)
            }
            (Some((cr, vr)), None) => {
                i += 1;
                (*cr, a * vr)
            }
            (_, Some((cp, vp))) => {
                j += 1;
                (*cp, -(b * vp))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    remove_content(&mut out);
    out
}

fn remove_content(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Clears denominators of a rational row.
fn to_int_row(row: &[(usize, Rat)]) -> IntRow {
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: IntRow =
        row.iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (*c, v.numer() * (&lcm / v.denom()))).collect();
    out.sort_by_key(|(c, _)| *c);
    remove_content(&mut out);
    out
}

/// Basis of `{v : A v = 0}` for a sparse rational matrix given by rows.
///
/// Fraction-free Gauss-Jordan: rows are scaled to integers, eliminated with
/// integer cross-multiplication and kept primitive by dividing out their
/// content. Columns are visited in index order; each returned vector has a 1
/// in its own free column and zeros in every other free column.
pub fn nullspace(rows: &[Vec<(usize, Rat)>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut rows: Vec<IntRow> = rows.iter().map(|r| to_int_row(r)).filter(|r| !r.is_empty()).collect();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows.len()];
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (column, row)

    for col in 0..ncols {
        let best = (0..rows.len())
            .filter(|&i| pivot_of_row[i].is_none())
            .filter_map(|i| entry(&rows[i], col).map(|v| (i, rows[i].len(), v.bits())))
            .min_by_key(|&(i, len, bits)| (len, bits, i));
        let Some((prow, _, _)) = best else { continue };
        pivot_of_row[prow] = Some(col);
        pivots.push((col, prow));
        let p = rows[prow].clone();
        let a = entry(&p, col).unwrap().clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == prow {
                continue;
            }
            if let Some(b) = entry(row, col).cloned() {
                *row = combine(row, &a, &p, &b);
            }
        }
    }

    let pivot_cols: std::collections::BTreeSet<usize> = pivots.iter().map(|(c, _)| *c).collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for &(pc, pr) in &pivots {
            if let Some(e) = entry(&rows[pr], free) {
                let a = entry(&rows[pr], pc).unwrap();
                v[pc] = -Rat::new(e.clone(), a.clone());
            }
        }
        basis.push(v);
    }
    basis
}

/// Reduced row echelon form of dense rational rows; zero rows are dropped.
/// Pivots are searched in the order given by `col_order`.
pub fn rref(mut rows: Vec<Vec<Rat>>, col_order: &[usize]) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for &c in col_order {
        let Some(pos) = rows.iter().position(|r| !r[c].is_zero()) else { continue };
        let mut p = rows.swap_remove(pos);
        let inv = p[c].recip();
        for v in p.iter_mut() {
            *v *= &inv;
        }
        for r in rows.iter_mut().chain(out.iter_mut()) {
            if r[c].is_zero() {
                continue;
            }
            let f = r[c].clone();
            for (x, y) in r.iter_mut().zip(&p) {
                *x -= &f * y;
            }
        }
        out.push(p);
    }
    out
}

/// Determinant by exact Gaussian elimination.
pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rat::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Characteristic polynomial `det(t I - A)` by the division-free Berkowitz
/// algorithm. Coefficients are returned in ascending powers of `t`; the
/// leading coefficient is 1.
pub fn charpoly(a: &[Vec<Rat>]) -> Vec<Rat> {
    let n = a.len();
    // descending coefficients of the characteristic polynomial of the leading r x r block
    let mut p: Vec<Rat> = vec![Rat::one()];
    for r in 0..n {
        // A_{r+1} = [[A_r, S], [R, a_rr]]
        let diag = &a[r][r];
        let s: Vec<Rat> = (0..r).map(|i| a[i][r].clone()).collect();
        let row: Vec<Rat> = (0..r).map(|j| a[r][j].clone()).collect();
        let mut col = Vec::with_capacity(r + 2);
        col.push(Rat::one());
        col.push(-diag);
        // -R A_r^k S for k = 0..r-1
        let mut v = s;
        for _ in 0..r {
            let rv: Rat = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            col.push(-rv);
            v = (0..r).map(|i| (0..r).map(|j| &a[i][j] * &v[j]).sum()).collect();
        }
        let next: Vec<Rat> = (0..r + 2).map(|i| (0..=i.min(r)).map(|j| &col[i - j] * &p[j]).sum()).collect();
        p = next;
    }
    p.reverse();
    p
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, br)| x * &br[j]).sum()).collect()).collect()
}

/// Field operations needed by [`rank`].
pub trait FieldElem: Clone {
    fn is_zero_elem(&self) -> bool;
    fn sub_elem(&self, other: &Self) -> Self;
    fn mul_elem(&self, other: &Self) -> Self;
    fn inv_elem(&self) -> Self;
}

impl FieldElem for Rat {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn inv_elem(&self) -> Self {
        self.recip()
    }
}

/// `u + v sqrt(d)` in `Q(sqrt d)`, `d` not a rational square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRat {
    pub u: Rat,
    pub v: Rat,
    pub d: Rat,
}

impl QuadRat {
    pub fn new(u: Rat, v: Rat, d: Rat) -> Self {
        QuadRat { u, v, d }
    }
}

impl FieldElem for QuadRat {
    fn is_zero_elem(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }
    fn sub_elem(&self, o: &Self) -> Self {
        QuadRat::new(&self.u - &o.u, &self.v - &o.v, self.d.clone())
    }
    fn mul_elem(&self, o: &Self) -> Self {
        QuadRat::new(&self.u * &o.u + &self.v * &o.v * &self.d, &self.u * &o.v + &self.v * &o.u, self.d.clone())
    }
    fn inv_elem(&self) -> Self {
        let norm = &self.u * &self.u - &self.v * &self.v * &self.d;
        QuadRat::new(&self.u / &norm, -&self.v / &norm, self.d.clone())
    }
}

/// Rank by Gaussian elimination over any exact field.
pub fn rank<F: FieldElem>(mut m: Vec<Vec<F>>) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero_elem()) else { continue };
        m.swap(p, rank);
        let inv = m[rank][c].inv_elem();
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest {
            if row[c].is_zero_elem() {
                continue;
            }
            let f = row[c].mul_elem(&inv);
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x = x.sub_elem(&f.mul_elem(y));
            }
        }
        rank += 1;
    }
    rank
}
