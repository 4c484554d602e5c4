//! Non-negative integer combinations `D = Σ aᵢGᵢ`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::config::AmbientModel;
use crate::lattice::DivClass;
use crate::linalg::{self, Matrix};
use crate::{Error, Result};

/// Some non-negative integer `a` with `Σ aᵢGᵢ = D`, or `None`.
///
/// The linear system is reduced exactly; with independent generators the
/// answer is the unique solution's sign and integrality. Otherwise the free
/// coefficients are enumerated under `Σ aᵢ(A.Gᵢ) = A.D`, which requires a
/// reference class `A` positive on every generator (the model's own reference
/// class when none is passed).
pub fn cone_membership(
    d: &DivClass,
    generators: &[DivClass],
    model: &AmbientModel,
    reference: Option<&DivClass>,
) -> Result<Option<Vec<BigInt>>> {
    let r = model.rank();
    for x in core::iter::once(d).chain(generators) {
        if x.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: x.len() });
        }
    }
    let m = generators.len();
    let aug =
        Matrix::from_fn(r, m + 1, |i, j| if j < m { generators[j].coords()[i].clone() } else { d.coords()[i].clone() });
    let red = linalg::rref(&aug);
    if red.pivots.contains(&m) {
        return Ok(None);
    }
    let free: Vec<usize> = (0..m).filter(|j| !red.pivots.contains(j)).collect();

    let mut weights = Vec::new();
    let mut budget = BigRational::zero();
    if !free.is_empty() {
        let a = match reference {
            Some(a) => a.clone(),
            None => model.reference_class()?,
        };
        weights = generators.iter().map(|g| model.pair(&a, g)).collect::<Result<Vec<_>>>()?;
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::Precondition("reference class is not positive on every generator".into()));
        }
        budget = model.pair(&a, d)?;
    }

    let mut values = vec![BigInt::zero(); m];
    let found = descend(&red.matrix, &red.pivots, &free, &weights, 0, budget, &mut values);
    if found {
        let mut sum = DivClass::zero(r);
        for (g, a) in generators.iter().zip(&values) {
            sum = sum.add_scaled(&BigRational::from_integer(a.clone()), g);
        }
        if &sum != d {
            return Err(Error::ModelIntegrity("membership witness does not reproduce the class".into()));
        }
        return Ok(Some(values));
    }
    Ok(None)
}

fn descend(
    rref: &Matrix<BigRational>,
    pivots: &[usize],
    free: &[usize],
    weights: &[BigRational],
    level: usize,
    budget: BigRational,
    values: &mut [BigInt],
) -> bool {
    if level == free.len() {
        let m = values.len();
        for (row, &p) in pivots.iter().enumerate() {
            let mut v = rref[(row, m)].clone();
            for &f in free {
                v -= &rref[(row, f)] * BigRational::from_integer(values[f].clone());
            }
            if !v.is_integer() || v.is_negative() {
                return false;
            }
            values[p] = v.to_integer();
        }
        return true;
    }
    let f = free[level];
    let mut k = BigInt::zero();
    loop {
        let spent = &weights[f] * BigRational::from_integer(k.clone());
        if spent > budget {
            break;
        }
        values[f] = k.clone();
        if descend(rref, pivots, free, weights, level + 1, &budget - spent, values) {
            return true;
        }
        k += 1;
    }
    values[f] = BigInt::zero();
    false
}
