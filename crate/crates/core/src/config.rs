//! Dual graphs of (−2)-curves and the ambient lattice they generate.
//!
//! A [`CurveConfig`] lists curves, weighted edges, optional extra rational
//! generators (half-classes and the like) and named classes, all given as
//! coefficient vectors over the curves. [`build_ambient`] turns it into an
//! [`AmbientModel`]: the lattice generated by curves and extra generators
//! modulo the radical of the intersection form, with a `Z`-basis computed by
//! Hermite normal form.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{lattice_profile, pair, DivClass, GramLattice, LatticeProfile};
use crate::linalg::{self, Matrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveConfig {
    curves: Vec<String>,
    edges: Vec<Edge>,
    generators: Vec<(String, Vec<BigRational>)>,
    classes: Vec<(String, Vec<BigRational>)>,
}

impl CurveConfig {
    pub fn new<I, S>(curves: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut cfg = CurveConfig::default();
        for c in curves {
            let c = c.into();
            if cfg.curves.contains(&c) {
                return Err(Error::DuplicateName(c));
            }
            cfg.curves.push(c);
        }
        Ok(cfg)
    }

    pub fn add_edge(&mut self, a: &str, b: &str, multiplicity: u32) -> Result<()> {
        if a == b {
            return Err(Error::SelfLoop(a.to_string()));
        }
        let ia = self.curve_index(a).ok_or_else(|| Error::UnknownName(a.to_string()))?;
        let ib = self.curve_index(b).ok_or_else(|| Error::UnknownName(b.to_string()))?;
        let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
        if self.edges.iter().any(|e| e.a == lo && e.b == hi) {
            return Err(Error::DuplicateEdge(a.to_string(), b.to_string()));
        }
        self.edges.push(Edge { a: lo, b: hi, multiplicity });
        Ok(())
    }

    pub fn with_edges(mut self, edges: &[(&str, &str, u32)]) -> Result<Self> {
        for &(a, b, m) in edges {
            self.add_edge(a, b, m)?;
        }
        Ok(self)
    }

    fn check_new_name(&self, name: &str, coeffs: &[BigRational]) -> Result<()> {
        if self.is_declared(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        if coeffs.len() != self.curves.len() {
            return Err(Error::DimensionMismatch { expected: self.curves.len(), found: coeffs.len() });
        }
        Ok(())
    }

    /// Declares an extra rational generator of the ambient lattice.
    pub fn add_generator(&mut self, name: &str, coeffs: Vec<BigRational>) -> Result<()> {
        self.check_new_name(name, &coeffs)?;
        self.generators.push((name.to_string(), coeffs));
        Ok(())
    }

    /// Names a rational combination of curves. Named classes do not enlarge the lattice.
    pub fn add_class(&mut self, name: &str, coeffs: Vec<BigRational>) -> Result<()> {
        self.check_new_name(name, &coeffs)?;
        self.classes.push((name.to_string(), coeffs));
        Ok(())
    }

    pub fn curves(&self) -> &[String] {
        &self.curves
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn generators(&self) -> &[(String, Vec<BigRational>)] {
        &self.generators
    }

    pub fn classes(&self) -> &[(String, Vec<BigRational>)] {
        &self.classes
    }

    pub fn curve_index(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c == name)
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.curve_index(name).is_some()
            || self.generators.iter().any(|(n, _)| n == name)
            || self.classes.iter().any(|(n, _)| n == name)
    }

    /// Coefficient vector over the curves of a curve, generator or named class.
    pub fn coefficients_of(&self, name: &str) -> Option<Vec<BigRational>> {
        if let Some(i) = self.curve_index(name) {
            let mut v = vec![BigRational::zero(); self.curves.len()];
            v[i] = BigRational::one();
            return Some(v);
        }
        self.generators.iter().chain(self.classes.iter()).find(|(n, _)| n == name).map(|(_, c)| c.clone())
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.edges.iter().find(|e| e.a == lo && e.b == hi).map_or(0, |e| e.multiplicity)
    }

    /// Neighbours of curve `i` with their edge multiplicities (zero-weight edges skipped).
    pub fn neighbors(&self, i: usize) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = self
            .edges
            .iter()
            .filter(|e| e.multiplicity > 0 && (e.a == i || e.b == i))
            .map(|e| (if e.a == i { e.b } else { e.a }, e.multiplicity))
            .collect();
        out.sort_unstable();
        out
    }

    /// The primitive non-negative null vector of the Gram matrix of a
    /// sub-diagram, extended by zero to all curves. The sub-diagram must have a
    /// one-dimensional kernel (an affine Dynkin diagram, say).
    pub fn null_vector(&self, subdiagram: &[&str]) -> Result<Vec<BigRational>> {
        let idx = subdiagram
            .iter()
            .map(|n| self.curve_index(n).ok_or_else(|| Error::UnknownName(n.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let g = curve_gram(self).gram().select(&idx, &idx).to_rational();
        let kernel = linalg::nullspace(&g);
        if kernel.len() != 1 {
            return Err(Error::NullSpaceDimension(kernel.len()));
        }
        let mut v = linalg::primitive_integer_vector(&kernel[0]);
        if v.iter().all(|x| !x.is_positive()) {
            v.iter_mut().for_each(|x| *x = -x.clone());
        }
        if v.iter().any(Signed::is_negative) {
            return Err(Error::MixedSignNullVector);
        }
        let mut full = vec![BigRational::zero(); self.curves.len()];
        for (k, &i) in idx.iter().enumerate() {
            full[i] = BigRational::from_integer(v[k].clone());
        }
        Ok(full)
    }
}

/// Gram matrix of the curves alone: −2 on the diagonal, edge multiplicities off it.
pub fn curve_gram(cfg: &CurveConfig) -> GramLattice {
    let n = cfg.curves.len();
    let mut g: Matrix<BigInt> = Matrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(-2);
    }
    for e in &cfg.edges {
        g[(e.a, e.b)] = BigInt::from(e.multiplicity);
        g[(e.b, e.a)] = BigInt::from(e.multiplicity);
    }
    GramLattice::new(cfg.curves.clone(), g).expect("curve gram is square and symmetric")
}

/// The ambient numerical lattice of a configuration.
#[derive(Clone, Debug)]
pub struct AmbientModel {
    config: CurveConfig,
    curve_lattice: GramLattice,
    lattice: GramLattice,
    /// `rank × #curves`: curve coefficient vectors to ambient coordinates.
    embed: Matrix<BigRational>,
    curve_classes: Vec<DivClass>,
    named: Vec<(String, DivClass)>,
}

pub fn build_ambient(cfg: &CurveConfig) -> Result<AmbientModel> {
    let n = cfg.curves.len();
    if n == 0 {
        return Err(Error::Precondition("no curves".to_string()));
    }
    let curve_lattice = curve_gram(cfg);
    let g = curve_lattice.gram().to_rational();

    // Generator coefficient vectors: curves first, then the extra generators.
    let mut gens: Vec<(String, Vec<BigRational>)> = (0..n)
        .map(|i| {
            let mut v = vec![BigRational::zero(); n];
            v[i] = BigRational::one();
            (cfg.curves[i].clone(), v)
        })
        .collect();
    gens.extend(cfg.generators.iter().cloned());

    // Pairing images φ(g) = G·g; integrality against every curve is required.
    let mut images: Vec<Vec<BigInt>> = Vec::with_capacity(gens.len());
    for (name, coeffs) in &gens {
        let phi = g.mul_vec(coeffs);
        let mut row = Vec::with_capacity(n);
        for (j, v) in phi.into_iter().enumerate() {
            if !v.is_integer() {
                return Err(Error::NonIntegralGenerator { name: name.clone(), curve: cfg.curves[j].clone() });
            }
            row.push(v.to_integer());
        }
        images.push(row);
    }
    for (a, (na, ca)) in cfg.generators.iter().enumerate() {
        for (nb, cb) in &cfg.generators[a..] {
            let v: BigRational = ca.iter().zip(g.mul_vec(cb)).map(|(x, y)| x * y).sum();
            if !v.is_integer() {
                return Err(Error::NonIntegralGenerator { name: na.clone(), curve: nb.clone() });
            }
        }
    }

    let hnf = linalg::row_hnf(&Matrix::from_rows(images));
    let r = hnf.rank;
    let preimages: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            let mut v = vec![BigRational::zero(); n];
            for (k, (_, coeffs)) in gens.iter().enumerate() {
                let u = &hnf.transform[(i, k)];
                if u.is_zero() {
                    continue;
                }
                let u = BigRational::from_integer(u.clone());
                for (acc, c) in v.iter_mut().zip(coeffs) {
                    *acc += &u * c;
                }
            }
            v
        })
        .collect();
    let ambient_gram = Matrix::from_fn(r, r, |i, j| {
        let v: BigRational =
            preimages[i].iter().zip(hnf.hnf.row(j)).map(|(x, y)| x * BigRational::from_integer(y.clone())).sum();
        v
    });
    if let Some((i, j)) =
        (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).find(|&(i, j)| !ambient_gram[(i, j)].is_integer())
    {
        return Err(Error::ModelIntegrity(format!("ambient gram entry ({i}, {j}) is not integral")));
    }
    let names = (0..r).map(|i| format!("b{i}")).collect();
    let lattice = GramLattice::new(names, ambient_gram.map(|x| x.to_integer()))?;

    // a = B_p^{-T} · G[pivots, :] · x
    let bp = hnf.hnf.select(&(0..r).collect::<Vec<_>>(), &hnf.pivots).to_rational();
    let bp_inv_t = linalg::inverse(&bp)
        .ok_or_else(|| Error::ModelIntegrity("pivot block of the HNF is singular".to_string()))?
        .transpose();
    let g_piv = curve_lattice.gram().select(&hnf.pivots, &(0..n).collect::<Vec<_>>()).to_rational();
    let embed = bp_inv_t.mul(&g_piv);

    let curve_classes: Vec<DivClass> = (0..n).map(|i| DivClass::new(embed.column(i))).collect();
    if let Some(i) = curve_classes.iter().position(|c| !c.is_integral()) {
        return Err(Error::ModelIntegrity(format!("curve `{}` has a non-integral image", cfg.curves[i])));
    }

    let mut model =
        AmbientModel { config: cfg.clone(), curve_lattice, lattice, embed, curve_classes, named: Vec::new() };
    for (name, coeffs) in cfg.generators.iter().chain(cfg.classes.iter()) {
        let class = model.embed_coefficients(coeffs)?;
        model.named.push((name.clone(), class));
    }
    Ok(model)
}

impl AmbientModel {
    /// A model without curves over a given lattice; basis vectors are named classes.
    pub fn from_lattice(lattice: GramLattice) -> Self {
        let r = lattice.rank();
        let named = lattice.names().iter().enumerate().map(|(i, n)| (n.clone(), DivClass::basis(r, i))).collect();
        AmbientModel {
            config: CurveConfig::default(),
            curve_lattice: GramLattice::new(Vec::new(), Matrix::zeros(0, 0)).expect("empty lattice"),
            lattice,
            embed: Matrix::zeros(r, 0),
            curve_classes: Vec::new(),
            named,
        }
    }

    /// Adds (or replaces) a named ambient class.
    pub fn with_named_class(mut self, name: &str, class: DivClass) -> Result<Self> {
        if class.len() != self.lattice.rank() {
            return Err(Error::DimensionMismatch { expected: self.lattice.rank(), found: class.len() });
        }
        self.named.retain(|(n, _)| n != name);
        self.named.push((name.to_string(), class));
        Ok(self)
    }

    pub fn config(&self) -> &CurveConfig {
        &self.config
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn curve_lattice(&self) -> &GramLattice {
        &self.curve_lattice
    }

    pub fn embed(&self) -> &Matrix<BigRational> {
        &self.embed
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn curve_count(&self) -> usize {
        self.curve_classes.len()
    }

    pub fn curve_names(&self) -> &[String] {
        self.config.curves()
    }

    pub fn curve_classes(&self) -> &[DivClass] {
        &self.curve_classes
    }

    pub fn curve_class(&self, i: usize) -> &DivClass {
        &self.curve_classes[i]
    }

    pub fn profile(&self) -> LatticeProfile {
        lattice_profile(&self.lattice)
    }

    pub fn pair(&self, x: &DivClass, y: &DivClass) -> Result<BigRational> {
        pair(&self.lattice, x, y)
    }

    /// Ambient image of a coefficient vector over the curves.
    pub fn embed_coefficients(&self, coeffs: &[BigRational]) -> Result<DivClass> {
        if coeffs.len() != self.curve_count() {
            return Err(Error::DimensionMismatch { expected: self.curve_count(), found: coeffs.len() });
        }
        Ok(DivClass::new(self.embed.mul_vec(coeffs)))
    }

    /// Ambient coordinates of a curve, extra generator or named class.
    pub fn class_of(&self, name: &str) -> Result<DivClass> {
        if let Some(i) = self.config.curve_index(name) {
            return Ok(self.curve_classes[i].clone());
        }
        self.named
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn named_classes(&self) -> &[(String, DivClass)] {
        &self.named
    }

    /// Pairings of `d` with every curve, in declaration order.
    pub fn curve_pairings(&self, d: &DivClass) -> Result<Vec<BigRational>> {
        self.curve_classes.iter().map(|r| self.pair(d, r)).collect()
    }

    /// Some integral class `A` with `A² > 0` and `A.R > 0` for every curve.
    ///
    /// Tries `A.R = 1` for all curves first (solvable when the curves are
    /// linearly independent); otherwise runs the perceptron iteration on the
    /// pairing functionals, which terminates whenever such a class exists.
    pub fn reference_class(&self) -> Result<DivClass> {
        let n = self.curve_count();
        if n == 0 {
            return Err(Error::NoReferenceClass);
        }
        let r = self.rank();
        let gram = self.lattice.gram();
        let functionals: Vec<Vec<BigInt>> = self
            .curve_classes
            .iter()
            .map(|c| gram.mul_vec(&c.to_integers().expect("curve images are integral")))
            .collect();
        let system = Matrix::from_fn(n, r, |i, j| BigRational::from_integer(functionals[i][j].clone()));
        let ones = vec![BigRational::one(); n];
        if let Some(a) = linalg::solve(&system, &ones) {
            let a = DivClass::from_integers(linalg::primitive_integer_vector(&a));
            if self.pair(&a, &a)?.is_positive() {
                return Ok(a);
            }
        }

        const MAX_ROUNDS: usize = 100_000;
        let mut x = vec![BigInt::zero(); r];
        for _ in 0..MAX_ROUNDS {
            let violated = functionals.iter().find(|f| {
                let s: BigInt = f.iter().zip(&x).map(|(a, b)| a * b).sum();
                !s.is_positive()
            });
            match violated {
                Some(f) => x.iter_mut().zip(f).for_each(|(a, b)| *a += b),
                None => {
                    let g = x.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
                    let a = DivClass::from_integers(x.iter().map(|v| v / &g).collect());
                    return if self.pair(&a, &a)?.is_positive() { Ok(a) } else { Err(Error::NoReferenceClass) };
                }
            }
        }
        Err(Error::NoReferenceClass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn two_curves_one_edge() {
        let cfg = CurveConfig::new(["A", "B"]).unwrap().with_edges(&[("A", "B", 1)]).unwrap();
        assert_eq!(curve_gram(&cfg).gram(), &Matrix::from_i64(&[&[-2, 1], &[1, -2]]));
    }

    #[test]
    fn config_errors() {
        assert_eq!(CurveConfig::new(["A", "A"]).unwrap_err(), Error::DuplicateName("A".into()));
        let mut cfg = CurveConfig::new(["A", "B"]).unwrap();
        assert_eq!(cfg.add_edge("A", "A", 1).unwrap_err(), Error::SelfLoop("A".into()));
        assert_eq!(cfg.add_edge("A", "C", 1).unwrap_err(), Error::UnknownName("C".into()));
        cfg.add_edge("A", "B", 1).unwrap();
        assert!(matches!(cfg.add_edge("B", "A", 2), Err(Error::DuplicateEdge(..))));
    }

    #[test]
    fn single_curve_ambient() {
        let cfg = CurveConfig::new(["R"]).unwrap();
        let model = build_ambient(&cfg).unwrap();
        assert_eq!(model.lattice().gram(), &Matrix::from_i64(&[&[-2]]));
        let r = model.class_of("R").unwrap();
        assert_eq!(model.pair(&r, &r).unwrap(), rat(-2));
        assert_eq!(model.class_of("S").unwrap_err(), Error::UnknownName("S".into()));
    }

    #[test]
    fn non_integral_half_class_rejected() {
        let mut cfg = CurveConfig::new(["A", "B"]).unwrap().with_edges(&[("A", "B", 1)]).unwrap();
        cfg.add_generator("half", vec![linalg::rat_frac(1, 2), rat(0)]).unwrap();
        assert!(matches!(build_ambient(&cfg), Err(Error::NonIntegralGenerator { .. })));
    }

    #[test]
    fn affine_a1_has_degenerate_span() {
        // Two curves meeting doubly: the null class R1 + R2 lies in the radical.
        let cfg = CurveConfig::new(["R1", "R2"]).unwrap().with_edges(&[("R1", "R2", 2)]).unwrap();
        let model = build_ambient(&cfg).unwrap();
        assert_eq!(model.rank(), 1);
        let sum = &model.class_of("R1").unwrap() + &model.class_of("R2").unwrap();
        assert!(sum.is_zero());
        assert_eq!(cfg.null_vector(&["R1", "R2"]).unwrap(), vec![rat(1), rat(1)]);
    }

    #[test]
    fn null_vector_of_affine_d4() {
        let cfg = CurveConfig::new(["c", "a", "b", "d", "e"])
            .unwrap()
            .with_edges(&[("c", "a", 1), ("c", "b", 1), ("c", "d", 1), ("c", "e", 1)])
            .unwrap();
        let v = cfg.null_vector(&["c", "a", "b", "d", "e"]).unwrap();
        assert_eq!(v, vec![rat(2), rat(1), rat(1), rat(1), rat(1)]);
        assert_eq!(cfg.null_vector(&["a", "b"]).unwrap_err(), Error::NullSpaceDimension(0));
    }
}
