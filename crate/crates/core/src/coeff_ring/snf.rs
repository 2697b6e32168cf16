//! Hermite and Smith normal forms over `Z`.
//!
//! Everything goes through a row Hermite form that reduces the entries above
//! each pivot, which keeps coefficients near the size of the minors instead
//! of letting them square at every elimination step. Invariant factors are
//! read off a square nonsingular triangular matrix whose entries stay below
//! its determinant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Matrix;

/// `M = U * D * V` with `U`, `V` unimodular and `D` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf<E> {
    pub u: Matrix<E>,
    pub d: Matrix<E>,
    pub v: Matrix<E>,
}

type Rows = Vec<Vec<BigInt>>;

fn ident(n: usize) -> Rows {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn transpose(a: &Rows, cols: usize) -> Rows {
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

fn to_rows(m: &Matrix<BigInt>) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Mutable borrow of row `dst` together with a shared borrow of row `src`.
fn pick(m: &mut [Vec<BigInt>], src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn axpy(dst: &mut [BigInt], c: &BigInt, src: &[BigInt]) {
    for (x, y) in dst.iter_mut().zip(src) {
        if !y.is_zero() {
            *x += c * y;
        }
    }
}

/// Row operations on `a`, mirrored on `track` (which accumulates `L` with
/// `L a_0 = a`) and applied inversely as column operations on `inv`
/// (which accumulates `L^{-1}`).
struct RowOps<'a> {
    a: &'a mut Rows,
    track: Option<&'a mut Rows>,
    inv: Option<&'a mut Rows>,
}

impl RowOps<'_> {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(t) = self.track.as_deref_mut() {
            t.swap(i, j);
        }
        if let Some(v) = self.inv.as_deref_mut() {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn negate(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if let Some(t) = self.track.as_deref_mut() {
            for x in t[i].iter_mut() {
                *x = -&*x;
            }
        }
        if let Some(v) = self.inv.as_deref_mut() {
            for row in v.iter_mut() {
                row[i] = -&row[i];
            }
        }
    }

    /// `row_i += c * row_j`
    fn addmul(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let (src, dst) = pick(self.a, j, i);
        axpy(dst, c, src);
        if let Some(t) = self.track.as_deref_mut() {
            let (src, dst) = pick(t, j, i);
            axpy(dst, c, src);
        }
        if let Some(v) = self.inv.as_deref_mut() {
            for row in v.iter_mut() {
                if !row[i].is_zero() {
                    let t = c * &row[i];
                    row[j] -= t;
                }
            }
        }
    }

    /// Replaces rows `r`, `i` by `x row_r + y row_i` and
    /// `-(b/g) row_r + (a/g) row_i`, where `x a + y b = g`.
    fn bezout(&mut self, r: usize, i: usize, a: &BigInt, b: &BigInt) {
        let e = a.extended_gcd(b);
        let (g, x, y) = (e.gcd, e.x, e.y);
        let (ag, bg) = (a / &g, b / &g);
        let combine = |m: &mut Rows| {
            let (rr, ri) = (m[r].clone(), m[i].clone());
            m[r] = rr.iter().zip(&ri).map(|(p, q)| &x * p + &y * q).collect();
            m[i] = rr.iter().zip(&ri).map(|(p, q)| &ag * q - &bg * p).collect();
        };
        combine(self.a);
        if let Some(t) = self.track.as_deref_mut() {
            combine(t);
        }
        if let Some(v) = self.inv.as_deref_mut() {
            for row in v.iter_mut() {
                let (cr, ci) = (row[r].clone(), row[i].clone());
                row[r] = &ag * &cr + &bg * &ci;
                row[i] = &x * &ci - &y * &cr;
            }
        }
    }
}

/// Brings `ops.a` (with `cols` columns) to row Hermite form: echelon, positive
/// pivots, entries above a pivot in `[0, pivot)`. Returns the pivot columns.
fn row_hermite(ops: &mut RowOps<'_>, cols: usize) -> Vec<usize> {
    let m = ops.a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..cols {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero entry of the column moves to row r
            let best = (r..m).filter(|&i| !ops.a[i][j].is_zero()).min_by(|&p, &q| ops.a[p][j].magnitude().cmp(ops.a[q][j].magnitude()));
            let Some(best) = best else { break };
            ops.swap(r, best);
            let mut done = true;
            for i in r + 1..m {
                if ops.a[i][j].is_zero() {
                    continue;
                }
                let (a, b) = (ops.a[r][j].clone(), ops.a[i][j].clone());
                if b.is_multiple_of(&a) {
                    ops.addmul(i, r, &-(&b / &a));
                } else {
                    ops.bezout(r, i, &a, &b);
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if ops.a[r][j].is_zero() {
            continue;
        }
        if ops.a[r][j].is_negative() {
            ops.negate(r);
        }
        let p = ops.a[r][j].clone();
        for k in 0..r {
            let q = ops.a[k][j].div_floor(&p);
            if !q.is_zero() {
                ops.addmul(k, r, &-q);
            }
        }
        pivots.push(j);
        r += 1;
    }
    pivots
}

/// Row Hermite form `H = U M` of `M`, with `U` when asked for.
pub struct Hermite {
    pub h: Matrix<BigInt>,
    pub pivots: Vec<usize>,
    pub u: Option<Matrix<BigInt>>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn hermite(m: &Matrix<BigInt>, with_transform: bool) -> Hermite {
    let mut a = to_rows(m);
    let mut u = with_transform.then(|| ident(m.rows()));
    let pivots = row_hermite(&mut RowOps { a: &mut a, track: u.as_mut(), inv: None }, m.cols());
    Hermite { h: Matrix::from_rows(a, m.cols()), pivots, u: u.map(|u| Matrix::from_rows(u, m.rows())) }
}

/// The first `r` rows of the Hermite form of `rows^T`, which is `r x r`
/// upper triangular and nonsingular when `rows` has full row rank `r`.
fn square_part(rows: &Rows, cols: usize) -> Rows {
    let r = rows.len();
    let mut t = transpose(rows, cols);
    row_hermite(&mut RowOps { a: &mut t, track: None, inv: None }, r);
    t.truncate(r);
    t
}

fn is_diagonal(a: &Rows) -> bool {
    a.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
}

/// Turns a diagonal into a divisibility chain.
fn chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if !d[j].is_multiple_of(&d[i]) {
                let g = d[i].gcd(&d[j]);
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

/// Invariant factors of a nonsingular square matrix, by alternating row and
/// column Hermite forms; entries stay below the determinant.
fn square_invariant_factors(mut t: Rows) -> Vec<BigInt> {
    let n = t.len();
    loop {
        row_hermite(&mut RowOps { a: &mut t, track: None, inv: None }, n);
        if is_diagonal(&t) {
            break;
        }
        t = transpose(&t, n);
        row_hermite(&mut RowOps { a: &mut t, track: None, inv: None }, n);
        t = transpose(&t, n);
        if is_diagonal(&t) {
            break;
        }
    }
    chain((0..n).map(|i| t[i][i].abs()).collect())
}

fn nonzero_rows(h: &Matrix<BigInt>, rank: usize) -> Rows {
    (0..rank).map(|i| h.row(i).to_vec()).collect()
}

/// All invariant factors `d_1 | ... | d_r` (including the ones that are 1).
pub fn invariant_factors(m: &Matrix<BigInt>) -> Vec<BigInt> {
    let h = hermite(m, false);
    let rows = nonzero_rows(&h.h, h.rank());
    if rows.is_empty() {
        return Vec::new();
    }
    square_invariant_factors(square_part(&rows, m.cols()))
}

/// Basis of the right kernel of `m` over `Z` (a saturated module, as columns)
/// together with the invariant factors of `m`.
pub fn kernel_basis(m: &Matrix<BigInt>) -> (Matrix<BigInt>, Vec<BigInt>) {
    let n = m.cols();
    let h = hermite(&m.transpose(), true);
    let r = h.rank();
    let u = h.u.expect("transform requested");
    let basis = Matrix::from_fn(n, n - r, |i, j| u.get(r + j, i).clone());
    let rows = nonzero_rows(&h.h, r);
    let factors = if r == 0 { Vec::new() } else { square_invariant_factors(square_part(&rows, m.rows())) };
    (basis, factors)
}

/// Basis (as columns) of the saturation of the column module of `m`,
/// together with the invariant factors of `m`.
///
/// With `B` the Hermite basis of the column module (as rows) and `T` the
/// triangular part of the Hermite form of `B^T`, `B = T^T W` for rows `W`
/// of a unimodular matrix, and `W` spans the saturation.
pub fn saturation_basis(m: &Matrix<BigInt>) -> (Matrix<BigInt>, Vec<BigInt>) {
    let rows_m = m.rows();
    let h = hermite(&m.transpose(), false);
    let r = h.rank();
    if r == 0 {
        return (Matrix::filled(rows_m, 0, BigInt::zero()), Vec::new());
    }
    let b = nonzero_rows(&h.h, r);
    let t = square_part(&b, rows_m);
    // forward substitution in T^T W = B; T^T is lower triangular
    let mut w: Rows = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = b[i].clone();
        for (k, wk) in w.iter().enumerate() {
            let c = &t[k][i];
            if !c.is_zero() {
                axpy(&mut row, &-c, wk);
            }
        }
        let d = &t[i][i];
        for x in row.iter_mut() {
            debug_assert!(x.is_multiple_of(d));
            *x = &*x / d;
        }
        w.push(row);
    }
    let basis = Matrix::from_fn(rows_m, r, |i, j| w[j][i].clone());
    (basis, square_invariant_factors(t))
}

/// Full SNF of an integer matrix with `M = U D V`, by alternating row and
/// column Hermite forms with tracked transforms.
pub fn int_smith_normal_form(m: &Matrix<BigInt>) -> Snf<BigInt> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = to_rows(m);
    // inverses of the accumulated row transform and of the transposed column transform
    let mut li = ident(rows);
    let mut rti = ident(cols);
    loop {
        row_hermite(&mut RowOps { a: &mut a, track: None, inv: Some(&mut li) }, cols);
        let mut at = transpose(&a, cols);
        let pivots = row_hermite(&mut RowOps { a: &mut at, track: None, inv: Some(&mut rti) }, rows);
        a = transpose(&at, rows);
        if !is_diagonal_like(&a) {
            continue;
        }
        // nonzero columns are 0..r with their entries in increasing rows
        let r = pivots.len();
        for (k, &q) in pivots.iter().enumerate() {
            RowOps { a: &mut a, track: None, inv: Some(&mut li) }.swap(k, q);
        }
        for i in 0..r {
            for j in i + 1..r {
                if a[j][j].is_multiple_of(&a[i][i]) {
                    continue;
                }
                // diag(p, q) -> diag(gcd, lcm): add row j to row i, combine
                // columns i, j by Bezout, then clear the entry below
                let (p, q) = (a[i][i].clone(), a[j][j].clone());
                RowOps { a: &mut a, track: None, inv: Some(&mut li) }.addmul(i, j, &BigInt::one());
                let mut at = transpose(&a, cols);
                RowOps { a: &mut at, track: None, inv: Some(&mut rti) }.bezout(i, j, &p, &q);
                a = transpose(&at, rows);
                let c = &a[j][i] / &a[i][i];
                let mut ops = RowOps { a: &mut a, track: None, inv: Some(&mut li) };
                ops.addmul(j, i, &-c);
                for k in [i, j] {
                    if ops.a[k][k].is_negative() {
                        ops.negate(k);
                    }
                }
            }
        }
        break;
    }
    Snf {
        u: Matrix::from_rows(li, rows),
        d: Matrix::from_rows(a, cols),
        v: Matrix::from_rows(transpose(&rti, cols), cols),
    }
}

/// At most one nonzero entry in every row and column.
fn is_diagonal_like(a: &Rows) -> bool {
    let cols = a.first().map_or(0, Vec::len);
    a.iter().all(|row| row.iter().filter(|x| !x.is_zero()).count() <= 1)
        && (0..cols).all(|j| a.iter().filter(|row| !row[j].is_zero()).count() <= 1)
}

/// `gcd` of a list (0 for empty).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix<BigInt> {
        let c = rows[0].len();
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), c)
    }

    fn mul(a: &Matrix<BigInt>, b: &Matrix<BigInt>) -> Matrix<BigInt> {
        Matrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(invariant_factors(&m(&[&[2, 4], &[6, 8]])), ints(&[2, 4]));
        assert_eq!(invariant_factors(&m(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 6]])), ints(&[1, 2, 6]));
        assert_eq!(invariant_factors(&m(&[&[6, 0], &[0, 4]])), ints(&[2, 12]));
        assert!(invariant_factors(&m(&[&[0, 0], &[0, 0]])).is_empty());
    }

    #[test]
    fn remultiplication() {
        let a = m(&[&[3, 5, 7, 0], &[2, -4, 6, 8], &[5, 1, 13, 8]]);
        let s = int_smith_normal_form(&a);
        assert_eq!(mul(&mul(&s.u, &s.d), &s.v), a);
        let diag: Vec<BigInt> = (0..3).map(|i| s.d.get(i, i).clone()).filter(|x| !x.is_zero()).collect();
        assert_eq!(diag, invariant_factors(&a));
    }

    #[test]
    fn kernel_and_saturation() {
        let a = m(&[&[2, 4, 6], &[0, 3, 3]]);
        let (k, f) = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        assert!(mul(&a, &k).entries().iter().all(Zero::is_zero));
        assert!(content(&k.column(0)).is_one());
        assert_eq!(f, ints(&[1, 6]));
        // columns 2 e1, 2 e2 + 4 e3 span a module whose saturation is <e1, e2 + 2 e3>
        let c = m(&[&[2, 0], &[0, 2], &[0, 4]]);
        let (s, f) = saturation_basis(&c);
        assert_eq!(f, ints(&[2, 2]));
        assert_eq!(invariant_factors(&s), ints(&[1, 1]));
        let stacked = Matrix::from_fn(3, 4, |i, j| if j < 2 { s.get(i, j).clone() } else { c.get(i, j - 2).clone() });
        assert_eq!(invariant_factors(&stacked), ints(&[1, 1]));
    }
}
