//! Dense exact linear algebra over `BigInt` and `BigRational`.
//!
//! Only what the lattice code needs: determinants, reduced row echelon form,
//! integer Hermite normal form with its unimodular transform, congruence
//! diagonalization for signatures, and LLL on a positive definite Gram matrix.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
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

    /// Sub-matrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, T::zero())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix<BigInt> {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn to_rational(&self) -> Matrix<BigRational> {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn mul(&self, other: &Matrix<BigInt>) -> Matrix<BigInt> {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += &self[(i, k)] * &other[(k, j)];
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

impl Matrix<BigRational> {
    pub fn mul(&self, other: &Matrix<BigRational>) -> Matrix<BigRational> {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = BigRational::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest integer, halves rounded towards +∞.
pub fn round_rational(q: &BigRational) -> BigInt {
    (q + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Clears denominators and divides out the content. The zero vector maps to zero.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Fraction-free Gaussian elimination (Bareiss).
pub fn determinant(m: &Matrix<BigInt>) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix<BigRational>,
    pub pivots: Vec<usize>,
}

pub fn rref(m: &Matrix<BigRational>) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = a[(r, c)].recip();
        for j in c..a.cols() {
            let v = &a[(r, j)] * &inv;
            a[(r, j)] = v;
        }
        for i in 0..a.rows() {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..a.cols() {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let v = &a[(i, j)] - &f * &a[(r, j)];
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, pivots }
}

pub fn rank(m: &Matrix<BigRational>) -> usize {
    rref(m).pivots.len()
}

/// One solution of `a·x = b` (free variables set to zero), or `None` if inconsistent.
pub fn solve(a: &Matrix<BigRational>, b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(a.rows(), b.len());
    let aug =
        Matrix::from_fn(a.rows(), a.cols() + 1, |i, j| if j < a.cols() { a[(i, j)].clone() } else { b[i].clone() });
    let red = rref(&aug);
    if red.pivots.last() == Some(&a.cols()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); a.cols()];
    for (r, &c) in red.pivots.iter().enumerate() {
        x[c] = red.matrix[(r, a.cols())].clone();
    }
    Some(x)
}

/// Basis of the right kernel of `a`, one vector per free column.
pub fn nullspace(a: &Matrix<BigRational>) -> Vec<Vec<BigRational>> {
    let red = rref(a);
    let free: Vec<usize> = (0..a.cols()).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); a.cols()];
            v[f] = BigRational::one();
            for (r, &p) in red.pivots.iter().enumerate() {
                v[p] = -red.matrix[(r, f)].clone();
            }
            v
        })
        .collect()
}

pub fn inverse(a: &Matrix<BigRational>) -> Option<Matrix<BigRational>> {
    if !a.is_square() {
        return None;
    }
    let n = a.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else if j - n == i {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    let red = rref(&aug);
    if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| red.matrix[(i, n + j)].clone()))
}

/// Row-style Hermite normal form: `transform · input = hnf`, the first `rank`
/// rows of `hnf` are nonzero and in echelon form with positive pivots, the
/// remaining rows vanish, and `transform` is unimodular.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub hnf: Matrix<BigInt>,
    pub transform: Matrix<BigInt>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn row_hnf(m: &Matrix<BigInt>) -> Hnf {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u: Matrix<BigInt> = Matrix::identity(rows);
    let mut pivots = Vec::new();
    let mut p = 0;

    fn row_sub(a: &mut Matrix<BigInt>, target: usize, source: usize, q: &BigInt) {
        for j in 0..a.cols() {
            if !a[(source, j)].is_zero() {
                let v = &a[(target, j)] - q * &a[(source, j)];
                a[(target, j)] = v;
            }
        }
    }

    for c in 0..cols {
        if p == rows {
            break;
        }
        loop {
            let best =
                (p..rows).filter(|&i| !a[(i, c)].is_zero()).min_by(|&x, &y| a[(x, c)].abs().cmp(&a[(y, c)].abs()));
            let Some(best) = best else { break };
            a.swap_rows(best, p);
            u.swap_rows(best, p);
            let mut done = true;
            for i in p + 1..rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = &a[(i, c)] / &a[(p, c)];
                row_sub(&mut a, i, p, &q);
                row_sub(&mut u, i, p, &q);
                if !a[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(p, c)].is_zero() {
            continue;
        }
        if a[(p, c)].is_negative() {
            for j in 0..cols {
                a[(p, j)] = -a[(p, j)].clone();
            }
            for j in 0..rows {
                u[(p, j)] = -u[(p, j)].clone();
            }
        }
        for i in 0..p {
            let q = a[(i, c)].div_floor(&a[(p, c)]);
            if !q.is_zero() {
                row_sub(&mut a, i, p, &q);
                row_sub(&mut u, i, p, &q);
            }
        }
        pivots.push(c);
        p += 1;
    }
    Hnf { hnf: a, transform: u, rank: p, pivots }
}

/// For an integer vector `u`, returns `(g, U)` with `U` unimodular and
/// `uᵀ·U = (g, 0, …, 0)`, `g = gcd(u) ≥ 0`.
pub fn unimodular_completion(u: &[BigInt]) -> (BigInt, Matrix<BigInt>) {
    let col = Matrix::from_fn(u.len(), 1, |i, _| u[i].clone());
    let h = row_hnf(&col);
    let g = if u.is_empty() { BigInt::zero() } else { h.hnf[(0, 0)].clone() };
    (g, h.transform.transpose())
}

/// Signature `(n₊, n₀, n₋)` of a symmetric rational matrix by congruence
/// diagonalization.
pub fn congruence_signature(m: &Matrix<BigRational>) -> (usize, usize, usize) {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let (mut pos, mut zero, mut neg) = (0, 0, 0);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                a.swap_rows(k, j);
                a.swap_cols(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                // row_k += row_j, col_k += col_j: new diagonal is 2·a_kj.
                for c in 0..n {
                    let v = &a[(k, c)] + &a[(j, c)];
                    a[(k, c)] = v;
                }
                for r in 0..n {
                    let v = &a[(r, k)] + &a[(r, j)];
                    a[(r, k)] = v;
                }
            } else {
                zero += 1;
                continue;
            }
        }
        let pivot = a[(k, k)].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &pivot;
            for c in k..n {
                let v = &a[(i, c)] - &f * &a[(k, c)];
                a[(i, c)] = v;
            }
            for r in k..n {
                let v = &a[(r, i)] - &f * &a[(r, k)];
                a[(r, i)] = v;
            }
        }
    }
    (pos, zero, neg)
}

/// Gram–Schmidt data of a Gram matrix: `mu[i][j]` for `j < i` and the squared
/// norms of the orthogonalized vectors. `None` unless positive definite.
pub fn gram_schmidt(gram: &Matrix<BigRational>) -> Option<(Matrix<BigRational>, Vec<BigRational>)> {
    let n = gram.rows();
    let mut mu = Matrix::zeros(n, n);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..i {
            let mut v = gram[(i, j)].clone();
            for k in 0..j {
                v -= &mu[(j, k)] * &mu[(i, k)] * &norms[k];
            }
            mu[(i, j)] = v / &norms[j];
        }
        let mut b = gram[(i, i)].clone();
        for k in 0..i {
            b -= &mu[(i, k)] * &mu[(i, k)] * &norms[k];
        }
        if !b.is_positive() {
            return None;
        }
        mu[(i, i)] = BigRational::one();
        norms.push(b);
    }
    Some((mu, norms))
}

/// LLL reduction (δ = 3/4) of a positive definite integral Gram matrix.
///
/// Returns `(reduced, v)` where the columns of `v` express the new basis in the
/// old one, i.e. `reduced = vᵀ·gram·v`. Returns `None` if `gram` is not
/// positive definite.
pub fn lll_reduce(gram: &Matrix<BigInt>) -> Option<(Matrix<BigInt>, Matrix<BigInt>)> {
    let n = gram.rows();
    let mut g = gram.clone();
    let mut v: Matrix<BigInt> = Matrix::identity(n);
    gram_schmidt(&g.to_rational())?;
    if n < 2 {
        return Some((g, v));
    }
    let delta = rat_frac(3, 4);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&g.to_rational())?;
            let q = round_rational(&mu[(k, j)]);
            if q.is_zero() {
                continue;
            }
            for c in 0..n {
                let val = &g[(k, c)] - &q * &g[(j, c)];
                g[(k, c)] = val;
            }
            for r in 0..n {
                let val = &g[(r, k)] - &q * &g[(r, j)];
                g[(r, k)] = val;
            }
            for r in 0..n {
                let val = &v[(r, k)] - &q * &v[(r, j)];
                v[(r, k)] = val;
            }
        }
        let (mu, norms) = gram_schmidt(&g.to_rational())?;
        let m = &mu[(k, k - 1)];
        if norms[k] < (&delta - m * m) * &norms[k - 1] {
            g.swap_rows(k, k - 1);
            g.swap_cols(k, k - 1);
            v.swap_cols(k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        } else {
            k += 1;
        }
    }
    Some((g, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_det(m: &Matrix<BigInt>) -> BigInt {
        // Laplace expansion along the first row.
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = brute_det(&m.select(&rows, &cols));
            let term = &m[(0, j)] * minor;
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn bareiss_matches_laplace() {
        let m = Matrix::from_i64(&[&[0, 2, 1, 3], &[2, -1, 0, 4], &[1, 0, 5, -2], &[3, 4, -2, 0]]);
        assert_eq!(determinant(&m), brute_det(&m));
        let singular = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(determinant(&singular).is_zero());
    }

    #[test]
    fn hnf_transform_is_consistent() {
        let m = Matrix::from_i64(&[&[4, 6, 2], &[6, 9, 3], &[2, 4, 8]]);
        let h = row_hnf(&m);
        assert_eq!(h.transform.mul(&m), h.hnf);
        assert_eq!(determinant(&h.transform).abs(), BigInt::one());
        assert_eq!(h.rank, 2);
    }

    #[test]
    fn completion_clears_vector() {
        let u: Vec<BigInt> = [6, 10, 15].iter().map(|&x| BigInt::from(x)).collect();
        let (g, big_u) = unimodular_completion(&u);
        assert_eq!(g, BigInt::one());
        let row = Matrix::from_fn(1, 3, |_, j| u[j].clone()).mul(&big_u);
        assert_eq!(row.row(0), &[BigInt::one(), BigInt::zero(), BigInt::zero()]);
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let u = Matrix::from_i64(&[&[0, 1], &[1, 0]]).to_rational();
        assert_eq!(congruence_signature(&u), (1, 0, 1));
        let degenerate = Matrix::from_i64(&[&[0, 0], &[0, -2]]).to_rational();
        assert_eq!(congruence_signature(&degenerate), (0, 1, 1));
    }

    #[test]
    fn lll_keeps_determinant() {
        let g = Matrix::from_i64(&[&[10, 23, 7], &[23, 55, 15], &[7, 15, 9]]);
        let (red, v) = lll_reduce(&g).unwrap();
        assert_eq!(v.transpose().mul(&g).mul(&v), red);
        assert_eq!(determinant(&red), determinant(&g));
        assert!(red[(0, 0)] <= g[(0, 0)]);
    }

    #[test]
    fn nullspace_and_solve() {
        let a = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]).to_rational();
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert!(solve(&a, &[rat(1), rat(3)]).is_none());
        let x = solve(&a, &[rat(1), rat(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![rat(1), rat(2)]);
    }
}
