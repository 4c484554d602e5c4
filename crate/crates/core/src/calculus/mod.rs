//! Nefness, Weyl reduction, the Φ invariant, negative definite divisors and
//! cone membership.

mod cone;
mod isotropic;
mod negdef;

pub use cone::cone_membership;
pub use isotropic::{enumerate_isotropic_slice, phi, IsotropicSlice, PhiResult, SliceEnumerator};
pub use negdef::{is_negative_definite_divisor, is_negative_definite_exhaustive, NegDefOutcome};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::config::AmbientModel;
use crate::lattice::DivClass;
use crate::{Error, Result};

pub(crate) fn integral(d: &DivClass, what: &str) -> Result<Vec<BigInt>> {
    d.to_integers().ok_or_else(|| Error::Precondition(format!("{what} is not integral")))
}

/// Pairings of an integral class with every curve, as integers.
fn integer_curve_pairings(d: &DivClass, model: &AmbientModel) -> Result<Vec<BigInt>> {
    model
        .curve_pairings(d)?
        .into_iter()
        .map(|p| if p.is_integer() { Ok(p.to_integer()) } else { Err(Error::NotIntegral) })
        .collect()
}

/// `true` iff `d` pairs non-negatively with every curve of the model.
pub fn is_nef_against(d: &DivClass, model: &AmbientModel) -> Result<bool> {
    Ok(model.curve_pairings(d)?.iter().all(|p| !p.is_negative()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub curve: String,
    pub pairing: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    /// One entry per curve, in declaration order.
    pub multiplicities: Vec<(String, BigInt)>,
    pub result: DivClass,
}

impl ReductionTrace {
    pub fn multiplicity(&self, curve: &str) -> Option<&BigInt> {
        self.multiplicities.iter().find(|(n, _)| n == curve).map(|(_, m)| m)
    }
}

/// Weyl reduction against the model's reference class.
pub fn weyl_reduce(d: &DivClass, model: &AmbientModel) -> Result<ReductionTrace> {
    if model.pair(d, d)?.is_negative() {
        return Err(Error::Precondition("class to reduce has negative square".into()));
    }
    if is_nef_against(d, model)? {
        return weyl_reduce_with(d, model, &DivClass::zero(model.rank()));
    }
    let a = model.reference_class()?;
    weyl_reduce_with(d, model, &a)
}

/// Reflects `d` at the curve with the most negative pairing (first declared on
/// ties) until it is nef. Every step must strictly lower `d.A` while keeping it
/// non-negative.
pub fn weyl_reduce_with(d: &DivClass, model: &AmbientModel, reference: &DivClass) -> Result<ReductionTrace> {
    let mut x = integral(d, "class to reduce")?;
    if model.pair(d, d)?.is_negative() {
        return Err(Error::Precondition("class to reduce has negative square".into()));
    }
    let names = model.curve_names();
    let n = names.len();
    let curves: Vec<Vec<BigInt>> =
        model.curve_classes().iter().map(|c| c.to_integers().expect("curve images are integral")).collect();
    let gram = model.curve_lattice().gram();
    let ref_on_curves = integer_curve_pairings(reference, model)?;
    let mut pairings = integer_curve_pairings(d, model)?;
    let mut level = if n == 0 { BigInt::zero() } else { model.pair(d, reference)?.to_integer() };
    let mut mult = alloc::vec![BigInt::zero(); n];
    let mut steps = Vec::new();

    loop {
        let mut pick: Option<usize> = None;
        for (i, p) in pairings.iter().enumerate() {
            if p.is_negative() && pick.is_none_or(|j| p < &pairings[j]) {
                pick = Some(i);
            }
        }
        let Some(i) = pick else { break };
        let k = pairings[i].clone();
        let next_level = &level + &k * &ref_on_curves[i];
        if next_level >= level || next_level.is_negative() {
            return Err(Error::NonTermination(format!(
                "pairing with the reference class went from {level} to {next_level} at `{}`",
                names[i]
            )));
        }
        level = next_level;
        for (xc, rc) in x.iter_mut().zip(&curves[i]) {
            *xc += &k * rc;
        }
        for (j, p) in pairings.iter_mut().enumerate() {
            *p += &k * &gram[(i, j)];
        }
        mult[i] -= &k;
        steps.push(ReductionStep { curve: names[i].clone(), pairing: k });
    }

    Ok(ReductionTrace {
        steps,
        multiplicities: names.iter().cloned().zip(mult).collect(),
        result: DivClass::from_integers(x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{build_ambient, CurveConfig};
    use crate::linalg::rat;

    #[test]
    fn nef_and_reduction_of_zero() {
        let cfg = CurveConfig::new(["A", "B"]).unwrap().with_edges(&[("A", "B", 1)]).unwrap();
        let model = build_ambient(&cfg).unwrap();
        let zero = DivClass::zero(model.rank());
        assert!(is_nef_against(&zero, &model).unwrap());
        let trace = weyl_reduce(&zero, &model).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.result, zero);
    }

    #[test]
    fn negative_square_rejected() {
        let cfg = CurveConfig::new(["A"]).unwrap();
        let model = build_ambient(&cfg).unwrap();
        let a = model.class_of("A").unwrap();
        assert!(matches!(weyl_reduce(&a, &model), Err(Error::Precondition(_))));
        assert_eq!(model.pair(&a, &a).unwrap(), rat(-2));
    }
}
