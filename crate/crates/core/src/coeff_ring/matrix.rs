//! Dense matrices over a [`Ring`] and elimination over fields.

use super::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// A nonzero element that turned out not to be invertible during
/// elimination; over a product of fields this splits the modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroDivisor<E>(pub E);

pub type LinResult<T, E> = std::result::Result<T, ZeroDivisor<E>>;

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Matrix { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let r = rows.len();
        let data: Vec<E> = rows.into_iter().flat_map(|row| {
            assert_eq!(row.len(), cols, "ragged rows");
            row
        }).collect();
        Matrix { rows: r, cols, data }
    }

    pub fn from_columns(cols: &[Vec<E>], rows: usize) -> Self {
        Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    /// First `n` rows.
    pub fn top_rows(&self, n: usize) -> Self {
        Matrix { rows: n, cols: self.cols, data: self.data[..n * self.cols].to_vec() }
    }

    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<F: Clone, Er>(&self, f: impl FnMut(&E) -> Result<F, Er>) -> Result<Matrix<F>, Er> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }
}

pub fn zero_matrix<R: Ring>(ring: &R, rows: usize, cols: usize) -> Matrix<R::Elem> {
    Matrix::filled(rows, cols, ring.zero())
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in product");
    let mut out = zero_matrix(ring, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if ring.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let v = ring.add(out.get(i, j), &ring.mul(aik, b.get(k, j)));
                out.set(i, j, v);
            }
        }
    }
    out
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|i| {
            let mut acc = ring.zero();
            for (k, vk) in v.iter().enumerate() {
                acc = ring.add(&acc, &ring.mul(a.get(i, k), vk));
            }
            acc
        })
        .collect()
}

pub fn is_zero_matrix<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> bool {
    a.data.iter().all(|x| ring.is_zero(x))
}

/// Reduced row echelon form over a field; returns the pivot columns.
pub fn rref<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> LinResult<(Matrix<R::Elem>, Vec<usize>), R::Elem> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !ring.is_zero(a.get(i, c))) else { continue };
        a.swap_rows(r, p);
        let inv = match ring.inv(a.get(r, c)) {
            Some(x) => x,
            None => return Err(ZeroDivisor(a.get(r, c).clone())),
        };
        for j in c..a.cols {
            let v = ring.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || ring.is_zero(a.get(i, c)) {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..a.cols {
                let v = ring.sub(a.get(i, j), &ring.mul(&f, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok((a, pivots))
}

pub fn rank<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> LinResult<usize, R::Elem> {
    Ok(rref(ring, m)?.1.len())
}

/// Basis (as columns) of the right kernel over a field.
pub fn kernel_field<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> LinResult<Matrix<R::Elem>, R::Elem> {
    let (e, piv) = rref(ring, m)?;
    let free: Vec<usize> = (0..m.cols).filter(|c| !piv.contains(c)).collect();
    let mut basis = zero_matrix(ring, m.cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis.set(f, k, ring.one());
        for (r, &pc) in piv.iter().enumerate() {
            basis.set(pc, k, ring.neg(e.get(r, f)));
        }
    }
    Ok(basis)
}

/// Columns of `m` at the pivot positions: a basis of the column space.
pub fn column_basis_field<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> LinResult<Matrix<R::Elem>, R::Elem> {
    let (_, piv) = rref(ring, m)?;
    Ok(m.select_columns(&piv))
}

/// Some `X` with `A X = B`, over a field.
pub fn solve_field<R: Ring>(
    ring: &R,
    a: &Matrix<R::Elem>,
    b: &Matrix<R::Elem>,
) -> LinResult<Option<Matrix<R::Elem>>, R::Elem> {
    assert_eq!(a.rows, b.rows);
    let aug = a.hcat(b);
    let (e, piv) = rref(ring, &aug)?;
    if piv.iter().any(|&c| c >= a.cols) {
        return Ok(None);
    }
    let mut x = zero_matrix(ring, a.cols, b.cols);
    for (r, &pc) in piv.iter().enumerate() {
        for j in 0..b.cols {
            x.set(pc, j, e.get(r, a.cols + j).clone());
        }
    }
    Ok(Some(x))
}

/// Characteristic polynomial `det(x I - M)` (low to high coefficients) by
/// Berkowitz's division-free algorithm.
pub fn char_poly<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Vec<R::Elem> {
    let n = m.rows;
    assert_eq!(n, m.cols, "char_poly needs a square matrix");
    if n == 0 {
        return vec![ring.one()];
    }
    // coefficient vectors high to low
    let mut c: Vec<R::Elem> = vec![ring.one(), ring.neg(m.get(0, 0))];
    for r in 1..n {
        // partition the leading (r+1)x(r+1) block: [[A, S],[R, a]] with a = m[r][r]
        let a_rr = m.get(r, r).clone();
        let s_col: Vec<R::Elem> = (0..r).map(|i| m.get(i, r).clone()).collect();
        let r_row: Vec<R::Elem> = (0..r).map(|j| m.get(r, j).clone()).collect();
        let block = Matrix::from_fn(r, r, |i, j| m.get(i, j).clone());
        // Toeplitz column: 1, -a, -R S, -R A S, ..., -R A^{r-1} S
        let mut t = vec![ring.one(), ring.neg(&a_rr)];
        let mut v = s_col.clone();
        for _ in 0..r {
            let dot = r_row.iter().zip(&v).fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)));
            t.push(ring.neg(&dot));
            v = mat_vec(ring, &block, &v);
        }
        // new c = T * c where T is (r+2) x (r+1) lower triangular Toeplitz
        let mut nc = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = ring.zero();
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    acc = ring.add(&acc, &ring.mul(&t[i - j], cj));
                }
            }
            nc.push(acc);
        }
        c = nc;
    }
    c.reverse();
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_ring::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn kernel_and_solve() {
        let r = Rationals;
        let m = Matrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]], 3);
        let k = kernel_field(&r, &m).unwrap();
        assert_eq!(k.cols(), 2);
        assert!(is_zero_matrix(&r, &mat_mul(&r, &m, &k)));
        let a = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(3)]], 2);
        let b = Matrix::from_rows(vec![vec![q(5)], vec![q(10)]], 1);
        let x = solve_field(&r, &a, &b).unwrap().unwrap();
        assert_eq!(mat_mul(&r, &a, &x), b);
    }

    #[test]
    fn berkowitz_vs_cofactor() {
        let f = PrimeField::new(101).unwrap();
        let m = Matrix::from_rows(vec![vec![2u64, 3, 5], vec![7, 11, 13], vec![17, 19, 23]], 3);
        let cp = char_poly(&f, &m);
        // det(xI - M) evaluated at x = 0..5 against direct 3x3 determinant
        for x in 0..5u64 {
            let xm = Matrix::from_fn(3, 3, |i, j| {
                let d = if i == j { x } else { 0 };
                f.sub(&d, m.get(i, j))
            });
            let det = {
                let g = |i: usize, j: usize| *xm.get(i, j);
                let t1 = f.mul(&g(0, 0), &f.sub(&f.mul(&g(1, 1), &g(2, 2)), &f.mul(&g(1, 2), &g(2, 1))));
                let t2 = f.mul(&g(0, 1), &f.sub(&f.mul(&g(1, 0), &g(2, 2)), &f.mul(&g(1, 2), &g(2, 0))));
                let t3 = f.mul(&g(0, 2), &f.sub(&f.mul(&g(1, 0), &g(2, 1)), &f.mul(&g(1, 1), &g(2, 0))));
                f.add(&f.sub(&t1, &t2), &t3)
            };
            let mut ev = 0u64;
            for c in cp.iter().rev() {
                ev = f.add(&f.mul(&ev, &x), c);
            }
            assert_eq!(ev, det);
        }
    }
}
