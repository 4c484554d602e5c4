//! Isotropic slices `{F primitive : F² = 0, H.F = t}` and the Φ invariant.
//!
//! Solutions of `H.F = t` form a coset `x₀ + K·y` of the orthogonal complement
//! of `H`. Writing `F = (t/H²)·H + w` with `w ⊥ H` turns `F² = 0` into
//! `(y + z)ᵀ M (y + z) = t²/H²` for the positive definite form `M = −KᵀGK` and
//! a rational offset `z`. The points are found by Fincke–Pohst enumeration on
//! an LLL-reduced basis of `M`, entirely in exact rationals.
//!
//! On an Enriques surface every primitive isotropic class with positive
//! `H`-degree is effective and reduces to a half-fiber of no larger degree, so
//! the least degree of a slice equals Φ(H).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{integral, is_nef_against};
use crate::config::AmbientModel;
use crate::lattice::{DivClass, GramLattice};
use crate::linalg::{self, Matrix};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicSlice {
    pub degree: u64,
    /// Sorted by integer coordinates.
    pub classes: Vec<DivClass>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiResult {
    pub value: u64,
    pub witness: DivClass,
    /// `floor(sqrt(H²))`, the last degree searched.
    pub bound: u64,
    /// Slice sizes for `t = 1 … bound`.
    pub slice_sizes: Vec<usize>,
}

fn square_of(lattice: &GramLattice, h: &[BigInt]) -> BigInt {
    let u = lattice.gram().mul_vec(h);
    u.iter().zip(h).map(|(a, b)| a * b).sum()
}

/// Per-`H` data for slice enumeration: everything except the degree.
#[derive(Clone, Debug)]
pub struct SliceEnumerator<'a> {
    lattice: &'a GramLattice,
    /// `G·H`.
    u: Vec<BigInt>,
    square: BigInt,
    /// `gcd(G·H)`; only multiples of it occur as degrees.
    content: BigInt,
    /// A vector of degree `content`.
    base: Vec<BigInt>,
    /// Coset directions after reduction: `x = (t/g)·base + kv·y`.
    kv: Matrix<BigInt>,
    mu: Matrix<BigRational>,
    norms: Vec<BigRational>,
    /// Offset for degree `t` is `t·unit_offset` in the reduced coordinates.
    unit_offset: Vec<BigRational>,
}

impl<'a> SliceEnumerator<'a> {
    pub fn new(lattice: &'a GramLattice, h: &DivClass) -> Result<Self> {
        let r = lattice.rank();
        if h.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: h.len() });
        }
        let hi = integral(h, "H")?;
        let square = square_of(lattice, &hi);
        if !square.is_positive() {
            return Err(Error::Precondition("H² must be positive".into()));
        }
        let gram = lattice.gram();
        let u = gram.mul_vec(&hi);
        let (content, completion) = linalg::unimodular_completion(&u);
        let base = completion.column(0);
        let k = completion.select(&(0..r).collect::<Vec<_>>(), &(1..r).collect::<Vec<_>>());
        let n = r - 1;

        let m = k.transpose().mul(gram).mul(&k).map(|x| -x);
        let (reduced, v) = linalg::lll_reduce(&m)
            .ok_or_else(|| Error::Precondition("orthogonal complement of H is not negative definite".into()))?;
        let kv = k.mul(&v);
        let (mu, norms) = linalg::gram_schmidt(&reduced.to_rational()).expect("reduced form stays definite");

        // base/g − H/H² = K·z₁, then move z₁ to the reduced basis.
        let rhs: Vec<BigRational> = (0..r)
            .map(|i| {
                BigRational::new(base[i].clone(), content.clone()) - BigRational::new(hi[i].clone(), square.clone())
            })
            .collect();
        let unit_offset = if n == 0 {
            Vec::new()
        } else {
            let zk = linalg::solve(&k.to_rational(), &rhs)
                .ok_or_else(|| Error::ModelIntegrity("coset offset is not orthogonal to H".into()))?;
            linalg::solve(&v.to_rational(), &zk).expect("LLL transform is invertible")
        };
        Ok(SliceEnumerator { lattice, u, square, content, base, kv, mu, norms, unit_offset })
    }

    pub fn h_square(&self) -> &BigInt {
        &self.square
    }

    /// All primitive integral `F` with `F² = 0` and `H.F = t`, sorted.
    pub fn slice(&self, t: u64) -> Result<IsotropicSlice> {
        if t == 0 {
            return Err(Error::Precondition("slice degree must be positive".into()));
        }
        let tb = BigInt::from(t);
        let mut out = IsotropicSlice { degree: t, classes: Vec::new() };
        if !tb.is_multiple_of(&self.content) {
            return Ok(out);
        }
        let q = &tb / &self.content;
        let x0: Vec<BigInt> = self.base.iter().map(|b| b * &q).collect();
        let n = self.norms.len();
        let points = if n == 0 {
            // Rank one: F is a multiple of H, never isotropic.
            Vec::new()
        } else {
            let tr = BigRational::from_integer(tb.clone());
            let z: Vec<BigRational> = self.unit_offset.iter().map(|c| c * &tr).collect();
            let radius = BigRational::new(&tb * &tb, self.square.clone());
            let mut found = Vec::new();
            let mut y = vec![BigInt::zero(); n];
            let mut shifted = vec![BigRational::zero(); n];
            fincke_pohst(&self.mu, &self.norms, &z, n, radius, &mut y, &mut shifted, &mut found);
            found
        };

        let mut classes: Vec<Vec<BigInt>> = Vec::new();
        for y in points {
            let mut x = x0.clone();
            for (a, b) in x.iter_mut().zip(self.kv.mul_vec(&y)) {
                *a += b;
            }
            let deg: BigInt = self.u.iter().zip(&x).map(|(a, b)| a * b).sum();
            if deg != tb || !square_of(self.lattice, &x).is_zero() {
                return Err(Error::ModelIntegrity(format!("enumerated vector {x:?} misses the slice equations")));
            }
            let content = x.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
            if content.is_one() {
                classes.push(x);
            }
        }
        classes.sort();
        out.classes = classes.into_iter().map(DivClass::from_integers).collect();
        Ok(out)
    }
}

/// All primitive integral `F` with `F² = 0` and `H.F = t`.
pub fn enumerate_isotropic_slice(lattice: &GramLattice, h: &DivClass, t: u64) -> Result<IsotropicSlice> {
    SliceEnumerator::new(lattice, h)?.slice(t)
}

/// Collects every integer `y` with `Σ_j q_j (v_j + Σ_{i>j} μ_ij v_i)² = radius`,
/// `v = y + z`. Levels run from the last coordinate down.
#[allow(clippy::too_many_arguments)]
fn fincke_pohst(
    mu: &Matrix<BigRational>,
    norms: &[BigRational],
    z: &[BigRational],
    level: usize,
    remaining: BigRational,
    y: &mut Vec<BigInt>,
    shifted: &mut Vec<BigRational>,
    out: &mut Vec<Vec<BigInt>>,
) {
    if level == 0 {
        if remaining.is_zero() {
            out.push(y.clone());
        }
        return;
    }
    let j = level - 1;
    let mut center = -z[j].clone();
    for i in j + 1..norms.len() {
        center -= &mu[(i, j)] * &shifted[i];
    }
    let q = &norms[j];
    let mut visit = |val: BigInt, y: &mut Vec<BigInt>, shifted: &mut Vec<BigRational>| -> bool {
        let d = BigRational::from_integer(val.clone()) - &center;
        let cost = q * &d * &d;
        if cost > remaining {
            return false;
        }
        y[j] = val.clone();
        shifted[j] = BigRational::from_integer(val) + &z[j];
        fincke_pohst(mu, norms, z, j, &remaining - cost, y, shifted, out);
        true
    };
    let start = center.floor().to_integer();
    let mut val = start.clone();
    while visit(val.clone(), y, shifted) {
        val -= 1;
    }
    let mut val: BigInt = start + 1u32;
    while visit(val.clone(), y, shifted) {
        val += 1;
    }
}

/// Φ(H): the least `t ≥ 1` with a nonempty isotropic slice. Every degree up to
/// `floor(sqrt(H²))` is enumerated.
pub fn phi(h: &DivClass, model: &AmbientModel) -> Result<PhiResult> {
    let enumerator = SliceEnumerator::new(model.lattice(), h)?;
    if !is_nef_against(h, model)? {
        return Err(Error::Precondition("H is not nef against the configuration".into()));
    }
    let bound = enumerator.h_square().sqrt().to_u64().ok_or_else(|| Error::SearchTooLarge("H² is too large".into()))?;
    let mut sizes = Vec::with_capacity(bound as usize);
    let mut best: Option<(u64, DivClass)> = None;
    for t in 1..=bound {
        let slice = enumerator.slice(t)?;
        sizes.push(slice.classes.len());
        if best.is_none() {
            if let Some(f) = slice.classes.into_iter().next() {
                best = Some((t, f));
            }
        }
    }
    let first_nonempty = sizes.iter().position(|&c| c > 0).map(|i| i as u64 + 1);
    match (best, first_nonempty) {
        (Some((value, witness)), Some(first)) if value == first => {
            Ok(PhiResult { value, witness, bound, slice_sizes: sizes })
        }
        _ => Err(Error::ModelIntegrity(format!("no primitive isotropic class of degree ≤ {bound}"))),
    }
}
