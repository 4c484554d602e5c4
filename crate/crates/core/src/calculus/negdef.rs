//! Negative definite divisors: `C = Σ cᵢRᵢ` with every nonzero `0 ≤ a ≤ c`
//! giving `(Σ aᵢRᵢ)² < 0`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::config::AmbientModel;
use crate::linalg;
use crate::{Error, Result};

/// Box volumes above this are refused by the unpruned search.
pub const EXHAUSTIVE_LIMIT: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NegDefOutcome {
    /// Every nonzero subdivisor has negative square. `fast_path` is set when
    /// the support Gram matrix alone settled it.
    NegativeDefinite { fast_path: bool },
    /// A nonzero subdivisor with non-negative square.
    Witness { coefficients: Vec<BigInt>, square: BigInt },
}

impl NegDefOutcome {
    pub fn is_negative_definite(&self) -> bool {
        matches!(self, NegDefOutcome::NegativeDefinite { .. })
    }
}

struct Problem {
    gram: Vec<Vec<i128>>,
    caps: Vec<i128>,
    /// Indices into the curve list with positive coefficient.
    support: Vec<usize>,
}

fn problem(c: &[BigInt], model: &AmbientModel) -> Result<Problem> {
    let n = model.curve_count();
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.len() });
    }
    if let Some(i) = c.iter().position(Signed::is_negative) {
        return Err(Error::Precondition(alloc::format!("negative coefficient on `{}`", model.curve_names()[i])));
    }
    let support: Vec<usize> = (0..n).filter(|&i| c[i].is_positive()).collect();
    let caps = support
        .iter()
        .map(|&i| c[i].to_i64().map(i128::from))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::SearchTooLarge("coefficient out of range".into()))?;
    let g = model.curve_lattice().gram();
    let gram = support
        .iter()
        .map(|&i| support.iter().map(|&j| g[(i, j)].to_i64().map(i128::from).unwrap_or(0)).collect())
        .collect();
    Ok(Problem { gram, caps, support })
}

impl Problem {
    fn witness(&self, a: &[i128], n: usize) -> NegDefOutcome {
        let mut coefficients = vec![BigInt::from(0); n];
        for (k, &i) in self.support.iter().enumerate() {
            coefficients[i] = BigInt::from(a[k]);
        }
        NegDefOutcome::Witness { coefficients, square: BigInt::from(self.square(a)) }
    }

    fn square(&self, a: &[i128]) -> i128 {
        let k = a.len();
        (0..k).map(|i| (0..k).map(|j| self.gram[i][j] * a[i] * a[j]).sum::<i128>()).sum()
    }

    fn support_is_negative_definite(&self) -> bool {
        let m = linalg::Matrix::from_fn(self.caps.len(), self.caps.len(), |i, j| linalg::rat(self.gram[i][j] as i64));
        let (pos, zero, _) = linalg::congruence_signature(&m);
        pos == 0 && zero == 0
    }
}

/// Support Gram test first, then branch and bound over `0 ≤ a ≤ c`.
pub fn is_negative_definite_divisor(c: &[BigInt], model: &AmbientModel) -> Result<NegDefOutcome> {
    let p = problem(c, model)?;
    if p.support.is_empty() || p.support_is_negative_definite() {
        return Ok(NegDefOutcome::NegativeDefinite { fast_path: true });
    }
    let k = p.support.len();
    if let Some(i) = (0..k).find(|&i| p.gram[i][i] >= 0) {
        let mut a = vec![0; k];
        a[i] = 1;
        return Ok(p.witness(&a, c.len()));
    }
    let mut a = vec![0i128; k];
    let mut lin = vec![0i128; k];
    Ok(match search(&p, 0, &mut a, &mut lin, 0, false) {
        true => p.witness(&a, c.len()),
        false => NegDefOutcome::NegativeDefinite { fast_path: false },
    })
}

/// Depth-first over the support in order; `lin[i] = Σ_{fixed j} S_ij a_j`,
/// `fixed_sq` the square of the fixed part. Leaves `a` at the witness on success.
fn search(p: &Problem, level: usize, a: &mut [i128], lin: &mut [i128], fixed_sq: i128, nonzero: bool) -> bool {
    let k = p.caps.len();
    if level == k {
        return nonzero && fixed_sq >= 0;
    }
    if nonzero && upper_bound(p, level, lin, fixed_sq) < 0 {
        return false;
    }
    let s = &p.gram;
    for v in 0..=p.caps[level] {
        // Square after fixing a_level = v.
        let sq = fixed_sq + 2 * v * lin[level] + s[level][level] * v * v;
        a[level] = v;
        for (j, l) in lin.iter_mut().enumerate() {
            *l += s[j][level] * v;
        }
        let found = search(p, level + 1, a, lin, sq, nonzero || v > 0);
        for (j, l) in lin.iter_mut().enumerate() {
            *l -= s[j][level] * v;
        }
        if found {
            return true;
        }
    }
    a[level] = 0;
    false
}

/// Bound on the square over all completions of the fixed prefix `0..level`:
/// free-free products are bounded by `S⁺_ij a_i c_j`, which leaves a concave
/// quadratic in each free coordinate.
#[allow(clippy::needless_range_loop)]
fn upper_bound(p: &Problem, level: usize, lin: &[i128], fixed_sq: i128) -> i128 {
    let k = p.caps.len();
    let mut total = fixed_sq;
    for i in level..k {
        let m: i128 = (level..k).filter(|&j| j != i).map(|j| p.gram[i][j].max(0) * p.caps[j]).sum();
        let b = 2 * lin[i] + m;
        let d = p.gram[i][i];
        let f = |x: i128| d * x * x + b * x;
        let peak = b.div_euclid(-2 * d);
        total += [0, p.caps[i], peak.clamp(0, p.caps[i]), (peak + 1).clamp(0, p.caps[i])]
            .into_iter()
            .map(f)
            .max()
            .unwrap_or(0);
    }
    total
}

/// Unpruned enumeration of the whole box, for cross-checking.
pub fn is_negative_definite_exhaustive(c: &[BigInt], model: &AmbientModel) -> Result<NegDefOutcome> {
    let p = problem(c, model)?;
    let k = p.caps.len();
    let volume = p.caps.iter().try_fold(1u128, |acc, &c| acc.checked_mul(c as u128 + 1));
    if volume.is_none_or(|v| v > EXHAUSTIVE_LIMIT) {
        return Err(Error::SearchTooLarge("box volume exceeds the exhaustive limit".into()));
    }
    let s = &p.gram;
    let mut a = vec![0i128; k];
    let mut lin = vec![0i128; k];
    let mut sq = 0i128;
    loop {
        // Odometer step with incremental square: Q(a + e_i) = Q + 2(Sa)_i + S_ii.
        let mut i = 0;
        while i < k && a[i] == p.caps[i] {
            let c = a[i];
            sq += -2 * c * lin[i] + c * c * s[i][i];
            for (j, l) in lin.iter_mut().enumerate() {
                *l -= s[j][i] * c;
            }
            a[i] = 0;
            i += 1;
        }
        if i == k {
            return Ok(NegDefOutcome::NegativeDefinite { fast_path: false });
        }
        sq += 2 * lin[i] + s[i][i];
        for (j, l) in lin.iter_mut().enumerate() {
            *l += s[j][i];
        }
        a[i] += 1;
        if sq >= 0 {
            return Ok(p.witness(&a, c.len()));
        }
    }
}
