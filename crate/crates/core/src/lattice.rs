//! Integral lattices given by Gram matrices, and divisor classes living in them.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{self, Matrix};
use crate::{Error, Result};

/// An integral symmetric bilinear form on `Zⁿ` with named basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    names: Vec<String>,
    gram: Matrix<BigInt>,
}

impl GramLattice {
    pub fn new(names: Vec<String>, gram: Matrix<BigInt>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch { expected: gram.rows(), found: gram.cols() });
        }
        if names.len() != gram.rows() {
            return Err(Error::DimensionMismatch { expected: gram.rows(), found: names.len() });
        }
        for i in 0..gram.rows() {
            for j in i + 1..gram.rows() {
                if gram[(i, j)] != gram[(j, i)] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(GramLattice { names, gram })
    }

    pub fn from_i64(names: &[&str], rows: &[&[i64]]) -> Result<Self> {
        Self::new(names.iter().map(|s| s.to_string()).collect(), Matrix::from_i64(rows))
    }

    /// Basis vectors named `prefix0, prefix1, …`.
    pub fn unnamed(prefix: &str, gram: Matrix<BigInt>) -> Result<Self> {
        let names = (0..gram.rows()).map(|i| format!("{prefix}{i}")).collect();
        Self::new(names, gram)
    }

    /// The hyperbolic plane `U` with isotropic basis `e, f`, `e.f = 1`.
    pub fn hyperbolic_plane() -> Self {
        Self::from_i64(&["e", "f"], &[&[0, 1], &[1, 0]]).expect("static data")
    }

    /// `E8(−1)`, simple roots `a1 … a8` in Bourbaki order.
    pub fn e8_negative() -> Self {
        let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
        let mut g: Matrix<BigInt> = Matrix::zeros(8, 8);
        for i in 0..8 {
            g[(i, i)] = BigInt::from(-2);
        }
        for (a, b) in edges {
            g[(a - 1, b - 1)] = BigInt::one();
            g[(b - 1, a - 1)] = BigInt::one();
        }
        let names = (1..=8).map(|i| format!("a{i}")).collect();
        Self::new(names, g).expect("static data")
    }

    /// `U ⊕ E8(−1)`, the numerical lattice of an Enriques surface.
    pub fn e10() -> Self {
        Self::hyperbolic_plane().direct_sum(&Self::e8_negative())
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let n = self.rank();
        let m = other.rank();
        let gram = Matrix::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
            (true, true) => self.gram[(i, j)].clone(),
            (false, false) => other.gram[(i - n, j - n)].clone(),
            _ => BigInt::zero(),
        });
        let names = self.names.iter().chain(other.names.iter()).cloned().collect();
        GramLattice { names, gram }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn gram(&self) -> &Matrix<BigInt> {
        &self.gram
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn basis_class(&self, i: usize) -> DivClass {
        DivClass::basis(self.rank(), i)
    }

    pub fn pair(&self, x: &DivClass, y: &DivClass) -> Result<BigRational> {
        pair(self, x, y)
    }

    /// `gram · x` for an integral class, i.e. the pairings of `x` with the basis.
    pub fn dual_coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.gram.mul_vec(x)
    }

    pub fn square(&self, x: &DivClass) -> Result<BigRational> {
        pair(self, x, x)
    }
}

/// A numerical divisor class: rational coordinates over a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivClass(Vec<BigRational>);

impl DivClass {
    pub fn new(coords: Vec<BigRational>) -> Self {
        DivClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        DivClass(alloc::vec![BigRational::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.0[i] = BigRational::one();
        c
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        DivClass(coords.iter().map(|&x| linalg::rat(x)).collect())
    }

    pub fn from_integers(coords: Vec<BigInt>) -> Self {
        DivClass(coords.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigRational> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.is_integral().then(|| self.0.iter().map(|x| x.to_integer()).collect())
    }

    pub fn scale(&self, factor: &BigRational) -> DivClass {
        DivClass(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn scale_int(&self, factor: i64) -> DivClass {
        self.scale(&linalg::rat(factor))
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, factor: &BigRational, other: &DivClass) -> DivClass {
        assert_eq!(self.len(), other.len());
        DivClass(self.0.iter().zip(&other.0).map(|(a, b)| a + factor * b).collect())
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Add for &DivClass {
    type Output = DivClass;

    fn add(self, rhs: &DivClass) -> DivClass {
        assert_eq!(self.len(), rhs.len(), "adding classes of different rank");
        DivClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivClass {
    type Output = DivClass;

    fn sub(self, rhs: &DivClass) -> DivClass {
        assert_eq!(self.len(), rhs.len(), "subtracting classes of different rank");
        DivClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for DivClass {
    type Output = DivClass;

    fn add(self, rhs: DivClass) -> DivClass {
        &self + &rhs
    }
}

impl Sub for DivClass {
    type Output = DivClass;

    fn sub(self, rhs: DivClass) -> DivClass {
        &self - &rhs
    }
}

impl Neg for &DivClass {
    type Output = DivClass;

    fn neg(self) -> DivClass {
        DivClass(self.0.iter().map(|x| -x).collect())
    }
}

/// `xᵀ · gram · y`.
pub fn pair(lattice: &GramLattice, x: &DivClass, y: &DivClass) -> Result<BigRational> {
    let n = lattice.rank();
    for v in [x, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    let g = lattice.gram();
    let mut acc = BigRational::zero();
    for i in 0..n {
        if x.0[i].is_zero() {
            continue;
        }
        let mut row = BigRational::zero();
        for j in 0..n {
            if !y.0[j].is_zero() && !g[(i, j)].is_zero() {
                row += &y.0[j] * &g[(i, j)];
            }
        }
        acc += &x.0[i] * row;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.zero, self.negative)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeProfile {
    pub rank: usize,
    pub determinant: BigInt,
    pub signature: Signature,
    pub is_even: bool,
}

impl LatticeProfile {
    /// Rank 10, determinant −1, signature (1,0,9), even: the `E10` profile.
    pub fn is_e10(&self) -> bool {
        self.rank == 10
            && self.determinant == BigInt::from(-1)
            && self.signature == Signature { positive: 1, zero: 0, negative: 9 }
            && self.is_even
    }
}

impl fmt::Display for LatticeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {}, det {}, signature {}, {}",
            self.rank,
            self.determinant,
            self.signature,
            if self.is_even { "even" } else { "odd" }
        )
    }
}

pub fn lattice_profile(lattice: &GramLattice) -> LatticeProfile {
    let g = lattice.gram();
    let (positive, zero, negative) = linalg::congruence_signature(&g.to_rational());
    LatticeProfile {
        rank: lattice.rank(),
        determinant: linalg::determinant(g),
        signature: Signature { positive, zero, negative },
        is_even: (0..lattice.rank()).all(|i| g[(i, i)].is_even()),
    }
}

/// `x / n` if it is an integral class, `None` otherwise.
pub fn divide_in_lattice(lattice: &GramLattice, x: &DivClass, n: u64) -> Result<Option<DivClass>> {
    if x.len() != lattice.rank() {
        return Err(Error::DimensionMismatch { expected: lattice.rank(), found: x.len() });
    }
    if n == 0 {
        return Err(Error::ZeroDivisor);
    }
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    let q = x.scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
    Ok(q.is_integral().then_some(q))
}

/// Whether `x` is not an integer multiple `n ≥ 2` of another lattice vector.
/// Coordinates are taken in a `Z`-basis, so this is `gcd(coords) = 1`.
pub fn is_primitive(lattice: &GramLattice, x: &DivClass) -> Result<bool> {
    if x.len() != lattice.rank() {
        return Err(Error::DimensionMismatch { expected: lattice.rank(), found: x.len() });
    }
    let ints = x.to_integers().ok_or(Error::NotIntegral)?;
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return Err(Error::ZeroClass);
    }
    Ok(g.abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_plane_pairings() {
        let u = GramLattice::hyperbolic_plane();
        let e = DivClass::from_i64(&[1, 0]);
        let f = DivClass::from_i64(&[0, 1]);
        assert_eq!(pair(&u, &e, &f).unwrap(), linalg::rat(1));
        assert_eq!(pair(&u, &e, &e).unwrap(), linalg::rat(0));
        assert_eq!(pair(&u, &DivClass::zero(2), &e).unwrap(), linalg::rat(0));
    }

    #[test]
    fn pair_rejects_wrong_length() {
        let u = GramLattice::hyperbolic_plane();
        let err = pair(&u, &DivClass::from_i64(&[1]), &DivClass::from_i64(&[1, 0])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn e10_profile() {
        let p = lattice_profile(&GramLattice::e10());
        assert!(p.is_e10(), "{p}");
    }

    #[test]
    fn single_curve_profile() {
        let l = GramLattice::from_i64(&["R"], &[&[-2]]).unwrap();
        let p = lattice_profile(&l);
        assert_eq!(p.rank, 1);
        assert_eq!(p.determinant, BigInt::from(-2));
        assert_eq!(p.signature, Signature { positive: 0, zero: 0, negative: 1 });
        assert!(p.is_even);
    }

    #[test]
    fn asymmetric_gram_rejected() {
        let err = GramLattice::from_i64(&["a", "b"], &[&[0, 1], &[2, 0]]).unwrap_err();
        assert_eq!(err, Error::NotSymmetric { row: 0, col: 1 });
    }

    #[test]
    fn divisibility_in_u() {
        let u = GramLattice::hyperbolic_plane();
        let three_e = DivClass::from_i64(&[3, 0]);
        assert_eq!(divide_in_lattice(&u, &three_e, 3).unwrap(), Some(DivClass::from_i64(&[1, 0])));
        assert_eq!(divide_in_lattice(&u, &DivClass::from_i64(&[1, 0]), 2).unwrap(), None);
        assert_eq!(divide_in_lattice(&u, &three_e, 0).unwrap_err(), Error::ZeroDivisor);
    }

    #[test]
    fn primitivity_in_u() {
        let u = GramLattice::hyperbolic_plane();
        assert!(is_primitive(&u, &DivClass::from_i64(&[1, 1])).unwrap());
        assert!(!is_primitive(&u, &DivClass::from_i64(&[2, 0])).unwrap());
        assert_eq!(is_primitive(&u, &DivClass::zero(2)).unwrap_err(), Error::ZeroClass);
    }
}
