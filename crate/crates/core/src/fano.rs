//! 10-sequences, Fano polarizations, tails and the Reye effectivity criterion.
//!
//! Everything here lives in the numerical lattice, so a half-fiber and its
//! twist by the canonical class are the same class. "Effective" always means
//! a non-negative integer combination of an explicit generator list.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::calculus::{cone_membership, is_nef_against, is_negative_definite_divisor, phi, NegDefOutcome, PhiResult};
use crate::config::AmbientModel;
use crate::lattice::{divide_in_lattice, is_primitive, DivClass, GramLattice};
use crate::linalg::{rat, rat_frac, Matrix};
use crate::{Error, Result};

pub const SEQUENCE_LENGTH: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceBlock {
    pub half_fiber: String,
    pub tail: Vec<String>,
}

/// A candidate c-degenerate 10-sequence: entries `Fᵢ + R_{i,1} + … + R_{i,k}`
/// for every block `i` and every prefix length `k` of its tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicSequence {
    pub name: String,
    pub blocks: Vec<SequenceBlock>,
    pub entries: Vec<DivClass>,
    /// `(block, prefix length)` for each entry.
    pub decomposition: Vec<(usize, usize)>,
}

impl IsotropicSequence {
    pub fn from_blocks(name: &str, blocks: Vec<SequenceBlock>, model: &AmbientModel) -> Result<Self> {
        let mut entries = Vec::new();
        let mut decomposition = Vec::new();
        for (b, block) in blocks.iter().enumerate() {
            let mut e = model.class_of(&block.half_fiber)?;
            entries.push(e.clone());
            decomposition.push((b, 0));
            for (k, r) in block.tail.iter().enumerate() {
                e = &e + &model.class_of(r)?;
                entries.push(e.clone());
                decomposition.push((b, k + 1));
            }
        }
        if entries.len() != SEQUENCE_LENGTH {
            return Err(Error::MalformedSequence(format!(
                "blocks produce {} entries, expected {SEQUENCE_LENGTH}",
                entries.len()
            )));
        }
        Ok(IsotropicSequence { name: name.to_string(), blocks, entries, decomposition })
    }

    pub fn degeneracy(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_index(&self, half_fiber: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.half_fiber == half_fiber)
    }

    /// `Fᵢ + Tᵢ` for block `i` (the last entry of the block).
    pub fn full_entry(&self, block: usize) -> Option<&DivClass> {
        let len = self.blocks.get(block)?.tail.len();
        self.decomposition.iter().position(|&d| d == (block, len)).map(|k| &self.entries[k])
    }

    pub fn sum(&self) -> DivClass {
        let r = self.entries.first().map_or(0, DivClass::len);
        self.entries.iter().fold(DivClass::zero(r), |acc, e| &acc + e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub degeneracy: usize,
    pub violations: Vec<String>,
    /// `(Σ Eᵢ)²`, equal to 90 for a valid sequence.
    pub sum_square: BigRational,
}

impl SequenceReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every defining condition and lists each one that fails.
pub fn validate_sequence(seq: &IsotropicSequence, model: &AmbientModel) -> Result<SequenceReport> {
    if seq.entries.len() != SEQUENCE_LENGTH || seq.decomposition.len() != seq.entries.len() {
        return Err(Error::MalformedSequence("sequence must have ten decomposed entries".into()));
    }
    let mut v = Vec::new();
    let halves = seq.blocks.iter().map(|b| model.class_of(&b.half_fiber)).collect::<Result<Vec<_>>>()?;
    let tails = seq
        .blocks
        .iter()
        .map(|b| b.tail.iter().map(|r| model.class_of(r)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    for (k, (e, &(b, len))) in seq.entries.iter().zip(&seq.decomposition).enumerate() {
        if !e.is_integral() {
            return Err(Error::Precondition(format!("entry {} is not integral", k + 1)));
        }
        let tail = tails.get(b).ok_or_else(|| Error::MalformedSequence(format!("entry {} names block {b}", k + 1)))?;
        if len > tail.len() {
            return Err(Error::MalformedSequence(format!("entry {} has prefix {len} beyond its tail", k + 1)));
        }
        let expected = tail[..len].iter().fold(halves[b].clone(), |acc, r| &acc + r);
        if &expected != e {
            v.push(format!("entry {} differs from {} plus {len} tail curves", k + 1, seq.blocks[b].half_fiber));
        }
    }

    for i in 0..SEQUENCE_LENGTH {
        for j in i..SEQUENCE_LENGTH {
            let p = model.pair(&seq.entries[i], &seq.entries[j])?;
            let want = if i == j { rat(0) } else { rat(1) };
            if p != want {
                v.push(format!("E{}.E{} = {p}, expected {want}", i + 1, j + 1));
            }
        }
    }

    for (b, f) in halves.iter().enumerate() {
        let name = &seq.blocks[b].half_fiber;
        if !model.pair(f, f)?.is_zero() {
            v.push(format!("{name} is not isotropic"));
        }
        if f.is_zero() || !f.is_integral() || !is_primitive(model.lattice(), f)? {
            v.push(format!("{name} is not a primitive integral class"));
        }
        for (c, g) in halves.iter().enumerate().skip(b + 1) {
            if model.pair(f, g)? != rat(1) {
                v.push(format!("{name}.{} is not 1", seq.blocks[c].half_fiber));
            }
        }
    }

    for (b, tail) in tails.iter().enumerate() {
        for (j, r) in tail.iter().enumerate() {
            let rn = &seq.blocks[b].tail[j];
            if model.pair(r, r)? != rat(-2) {
                v.push(format!("{rn} is not a (−2)-class"));
            }
            for (c, f) in halves.iter().enumerate() {
                let want = if c == b && j == 0 { rat(1) } else { rat(0) };
                let p = model.pair(f, r)?;
                if p != want {
                    v.push(format!("{}.{rn} = {p}, expected {want}", seq.blocks[c].half_fiber));
                }
            }
            for (c, other) in tails.iter().enumerate() {
                for (l, s) in other.iter().enumerate() {
                    if (c, l) <= (b, j) {
                        continue;
                    }
                    let want = if c == b && l == j + 1 { rat(1) } else { rat(0) };
                    let p = model.pair(r, s)?;
                    if p != want {
                        v.push(format!("{rn}.{} = {p}, expected {want}", seq.blocks[c].tail[l]));
                    }
                }
            }
        }
    }

    let sum = seq.sum();
    Ok(SequenceReport { degeneracy: seq.degeneracy(), violations: v, sum_square: model.pair(&sum, &sum)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoReport {
    pub h: DivClass,
    pub h_square: BigRational,
    pub nef: bool,
    pub phi: Option<PhiResult>,
    pub is_fano: bool,
    /// Tails rebuilt from curves orthogonal to `H`, keyed by half-fiber.
    pub tails: Vec<(String, Vec<String>)>,
    pub tails_match: bool,
    pub orthogonal_curves: Vec<String>,
    /// First block, in order, whose Reye criterion produced a witness.
    pub reye_witness: Option<(String, Vec<BigInt>)>,
}

/// `H = (Σ Eᵢ)/3`, checked for `H² = 10`, nefness and `Φ(H) = 3`.
pub fn fano_from_sequence(seq: &IsotropicSequence, model: &AmbientModel) -> Result<FanoReport> {
    let report = validate_sequence(seq, model)?;
    if !report.is_valid() {
        return Err(Error::MalformedSequence(report.violations.join("; ")));
    }
    let h = divide_in_lattice(model.lattice(), &seq.sum(), 3)?.ok_or(Error::NotThreeDivisible)?;
    let h_square = model.pair(&h, &h)?;
    if h_square != rat(10) {
        return Err(Error::ModelIntegrity(format!("H² = {h_square}")));
    }
    let nef = is_nef_against(&h, model)?;
    let phi_res = if nef { Some(phi(&h, model)?) } else { None };
    if let Some(p) = &phi_res {
        if p.value != 3 {
            return Err(Error::PhiNotThree(p.value));
        }
    }
    let is_fano = nef && phi_res.is_some();

    let names = model.curve_names();
    let pairings = model.curve_pairings(&h)?;
    let orthogonal: Vec<usize> = (0..names.len()).filter(|&i| pairings[i].is_zero()).collect();
    let mut tails = Vec::new();
    let mut tails_match = true;
    for block in &seq.blocks {
        let f = model.class_of(&block.half_fiber)?;
        let rebuilt = rebuild_tail(&f, &orthogonal, model)?;
        let rebuilt: Vec<String> = rebuilt.into_iter().map(|i| names[i].clone()).collect();
        tails_match &= rebuilt == block.tail;
        tails.push((block.half_fiber.clone(), rebuilt));
    }

    let mut reye_witness = None;
    if is_fano {
        for (b, block) in seq.blocks.iter().enumerate() {
            let tail = block.tail.iter().map(|r| model.class_of(r)).collect::<Result<Vec<_>>>()?;
            let f = model.class_of(&block.half_fiber)?;
            let rep = reye_criterion(&h, &f, &tail, model, &[])?;
            if let Some(w) = rep.witness {
                reye_witness = Some((seq.blocks[b].half_fiber.clone(), w));
                break;
            }
        }
    }

    Ok(FanoReport {
        h,
        h_square,
        nef,
        phi: phi_res,
        is_fano,
        tails,
        tails_match,
        orthogonal_curves: orthogonal.into_iter().map(|i| names[i].clone()).collect(),
        reye_witness,
    })
}

/// Chain of `H`-orthogonal curves starting at the unique one meeting `f`, each
/// next curve meeting the previous one once and missing `f`. Stops when the
/// continuation is absent or ambiguous.
fn rebuild_tail(f: &DivClass, orthogonal: &[usize], model: &AmbientModel) -> Result<Vec<usize>> {
    let curves = model.curve_classes();
    let mut chain: Vec<usize> = Vec::new();
    loop {
        let mut next = Vec::new();
        for &i in orthogonal {
            if chain.contains(&i) {
                continue;
            }
            let with_f = model.pair(f, &curves[i])?;
            let ok = match chain.last() {
                None => with_f == rat(1),
                Some(&last) => with_f.is_zero() && model.pair(&curves[last], &curves[i])? == rat(1),
            };
            if ok {
                next.push(i);
            }
        }
        if next.len() != 1 {
            return Ok(chain);
        }
        chain.push(next[0]);
    }
}

/// `H.E = 3` for an isotropic class `E`.
pub fn check_e_membership(h: &DivClass, e: &DivClass, model: &AmbientModel) -> Result<bool> {
    if !model.pair(e, e)?.is_zero() {
        return Err(Error::Precondition("E is not isotropic".into()));
    }
    Ok(model.pair(h, e)? == rat(3))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternReport {
    pub h_degree: BigInt,
    /// `R.Eᵢ`, sorted in decreasing order.
    pub pattern: Vec<BigInt>,
    pub passes: bool,
    /// Square of `Σ vᵢ(H/3 − Eᵢ)` for the pattern `v`.
    pub square: BigRational,
}

/// For a (−2)-class with `H.R ∈ {1, 2}`, the pairings with the sequence are
/// three resp. six ones and zeros otherwise.
pub fn pattern_check(
    h: &DivClass,
    r: &DivClass,
    seq: &IsotropicSequence,
    model: &AmbientModel,
) -> Result<PatternReport> {
    if model.pair(r, r)? != rat(-2) {
        return Err(Error::Precondition("R is not a (−2)-class".into()));
    }
    let deg = model.pair(h, r)?;
    if deg != rat(1) && deg != rat(2) {
        return Err(Error::HypothesisViolated(format!("H.R = {deg}, expected 1 or 2")));
    }
    let h_degree = deg.to_integer();
    let mut pattern =
        seq.entries.iter().map(|e| model.pair(r, e).map(|p| p.to_integer())).collect::<Result<Vec<_>>>()?;
    pattern.sort_unstable_by(|a, b| b.cmp(a));
    let ones = 3 * h_degree.to_usize().unwrap_or(0);
    let passes = pattern.iter().enumerate().all(|(i, x)| *x == BigInt::from(u8::from(i < ones)));
    let small: Vec<i64> = pattern.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect();
    Ok(PatternReport { h_degree, square: square_from_pattern(&small), pattern, passes })
}

/// Square of `Σ vᵢ(H/3 − Eᵢ)` in the lattice spanned by a 10-sequence, whose
/// Gram matrix is `J − I`.
pub fn square_from_pattern(v: &[i64]) -> BigRational {
    let n = SEQUENCE_LENGTH;
    let gram = Matrix::from_fn(n, n, |i, j| BigInt::from(i64::from(i != j)));
    let lattice = GramLattice::unnamed("E", gram).expect("J − I is symmetric");
    let total: i64 = v.iter().sum();
    let coords = (0..n).map(|i| rat_frac(total, 9) - rat(v.get(i).copied().unwrap_or(0))).collect();
    let x = DivClass::new(coords);
    lattice.square(&x).expect("length matches")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReyeReport {
    /// `H − 2(F + T)`.
    pub divisor: DivClass,
    /// Coefficients over the curves followed by the extra generators.
    pub witness: Option<Vec<BigInt>>,
    /// Outcome on the curve part of the witness, when the extra generators are unused.
    pub negative_definite: Option<NegDefOutcome>,
}

/// Effectivity of `H − 2(F + T)` over the curves and `extra_generators`.
/// `T` must be the full tail, tested as nefness of `H − (F + T)`. A witness
/// supported on curves must be negative definite.
pub fn reye_criterion(
    h: &DivClass,
    f: &DivClass,
    tail: &[DivClass],
    model: &AmbientModel,
    extra_generators: &[DivClass],
) -> Result<ReyeReport> {
    let e = tail.iter().fold(f.clone(), |acc, r| &acc + r);
    if !is_nef_against(&(h - &e), model)? {
        return Err(Error::NotFullTail(format!("H − (F + T) is not nef for a tail of length {}", tail.len())));
    }
    let divisor = h - &e.scale_int(2);
    let mut generators: Vec<DivClass> = model.curve_classes().to_vec();
    generators.extend_from_slice(extra_generators);
    let witness = cone_membership(&divisor, &generators, model, None)?;
    let n = model.curve_count();
    let mut negative_definite = None;
    if let Some(w) = &witness {
        if w[n..].iter().all(Zero::is_zero) {
            let outcome = is_negative_definite_divisor(&w[..n], model)?;
            if !outcome.is_negative_definite() {
                return Err(Error::HypothesisViolated("Reye witness is not negative definite".into()));
            }
            negative_definite = Some(outcome);
        }
    }
    Ok(ReyeReport { divisor, witness, negative_definite })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatReport {
    pub h_hat: DivClass,
    pub h_hat_square: BigRational,
    pub h_dot_h_hat: BigRational,
    pub nef: bool,
    pub phi: Option<PhiResult>,
    pub is_fano: bool,
    /// `H − Eⱼ − Eₖ` for the pairs (2,3), (1,3), (1,2), with square and `Ĥ`-degree.
    pub derived: Vec<(DivClass, BigRational, BigRational)>,
}

/// `Ĥ = 2H − E₁ − E₂ − E₃` for three full entries `Eᵢ = Fᵢ + Tᵢ` of a sequence
/// of `H`, provided `H − F₁ − F₂ − F₃` is not a non-negative curve combination.
pub fn hat_transform(
    h: &DivClass,
    triple: [&DivClass; 3],
    halves: [&DivClass; 3],
    model: &AmbientModel,
) -> Result<HatReport> {
    for e in triple {
        if !is_nef_against(&(h - e), model)? {
            return Err(Error::NotFullTail("H − E is not nef for a triple entry".into()));
        }
    }
    let rest = h - &(&(halves[0] + halves[1]) + halves[2]);
    if cone_membership(&rest, model.curve_classes(), model, None)?.is_some() {
        return Err(Error::HypothesisViolated("H − F₁ − F₂ − F₃ is a non-negative curve combination".into()));
    }
    let h_hat = &(&h.scale_int(2) - triple[0]) - &(triple[1] + triple[2]);
    let h_hat_square = model.pair(&h_hat, &h_hat)?;
    let h_dot_h_hat = model.pair(h, &h_hat)?;
    if h_hat_square != rat(10) || h_dot_h_hat != rat(11) {
        return Err(Error::ModelIntegrity(format!("Ĥ² = {h_hat_square}, H.Ĥ = {h_dot_h_hat}")));
    }
    let nef = is_nef_against(&h_hat, model)?;
    let phi_res = if nef { Some(phi(&h_hat, model)?) } else { None };
    let is_fano = phi_res.as_ref().is_some_and(|p| p.value == 3);

    let mut derived = Vec::new();
    for (j, k) in [(1, 2), (0, 2), (0, 1)] {
        let c = &(h - triple[j]) - triple[k];
        let sq = model.pair(&c, &c)?;
        let deg = model.pair(&h_hat, &c)?;
        if !sq.is_zero() || deg != rat(3) {
            return Err(Error::ModelIntegrity(format!("derived class has square {sq} and Ĥ-degree {deg}")));
        }
        derived.push((c, sq, deg));
    }
    Ok(HatReport { h_hat, h_hat_square, h_dot_h_hat, nef, phi: phi_res, is_fano, derived })
}

/// Cone membership of `F₂ + F₃ − F₁` for three pairwise-meeting primitive
/// isotropic classes.
pub fn special_triple_check(
    f: [&DivClass; 3],
    model: &AmbientModel,
    generators: &[DivClass],
    reference: Option<&DivClass>,
) -> Result<Option<Vec<BigInt>>> {
    for (i, x) in f.iter().enumerate() {
        if !x.is_integral() || x.is_zero() || !model.pair(x, x)?.is_zero() || !is_primitive(model.lattice(), x)? {
            return Err(Error::HypothesisViolated(format!("F{} is not primitive isotropic", i + 1)));
        }
        for (j, y) in f.iter().enumerate().skip(i + 1) {
            if model.pair(x, y)? != BigRational::one() {
                return Err(Error::HypothesisViolated(format!("F{}.F{} is not 1", i + 1, j + 1)));
            }
        }
    }
    let d = &(f[1] + f[2]) - f[0];
    cone_membership(&d, generators, model, reference)
}
