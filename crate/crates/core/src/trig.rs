//! Trigonometric polynomials: finite character combinations with exact
//! coefficients, the coefficient carrier of the graded algebra.
//!
//! A frequency labels the character `x -> e(theta . x)`; products multiply
//! characters, which adds frequencies. For the integer-lattice models
//! frequencies live modulo Z^n; for the rationals model they are scalars and
//! label the characters continuous in the real-completion grade.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclo::{CycRat, NormValue};
use crate::error::{Error, Result};
use crate::rat::{format_rat, frac_mod_one, Rat};
use crate::spine::Representative;
use crate::topology::{Model, VectorGroup};

/// Number of frequency coordinates for a model, or an error for models
/// without a modeled character family.
pub fn frequency_dim(model: &Model) -> Result<usize> {
    match model {
        Model::Vector { dim, .. } => Ok(*dim),
        Model::Rationals => Ok(1),
        other => Err(Error::UnsupportedScope(format!(
            "the {other} model has no modeled character frequencies"
        ))),
    }
}

fn canonical_frequency(model: &Model, mut freq: Vec<Rat>) -> Result<Vec<Rat>> {
    let dim = frequency_dim(model)?;
    if freq.len() != dim {
        return Err(Error::ShapeMismatch(format!(
            "frequency has {} coordinates, expected {}",
            freq.len(),
            dim
        )));
    }
    if let Model::Vector {
        group: VectorGroup::Integer,
        ..
    } = model
    {
        for x in freq.iter_mut() {
            *x = frac_mod_one(x);
        }
    }
    Ok(freq)
}

/// A finite linear combination of characters over one model, with exact
/// cyclotomic-rational coefficients and no zero terms stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    model: Model,
    terms: BTreeMap<Vec<Rat>, CycRat>,
}

impl TrigPolynomial {
    pub fn zero(model: Model) -> Result<Self> {
        frequency_dim(&model)?;
        Ok(Self {
            model,
            terms: BTreeMap::new(),
        })
    }

    /// The constant function 1: a single character at frequency zero.
    pub fn one(model: Model) -> Result<Self> {
        let dim = frequency_dim(&model)?;
        Self::from_terms(model, vec![(vec![Rat::zero(); dim], CycRat::one())])
    }

    pub fn from_terms(model: Model, raw: Vec<(Vec<Rat>, CycRat)>) -> Result<Self> {
        frequency_dim(&model)?;
        let mut terms: BTreeMap<Vec<Rat>, CycRat> = BTreeMap::new();
        for (freq, coeff) in raw {
            let freq = canonical_frequency(&model, freq)?;
            let entry = terms.entry(freq).or_insert_with(CycRat::zero);
            *entry = entry.add(&coeff);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Self { model, terms })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Rat>, CycRat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn require_same_model(&self, other: &Self) -> Result<()> {
        if self.model != other.model {
            return Err(Error::ModelMismatch(
                self.model.to_string(),
                other.model.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_model(other)?;
        let mut raw: Vec<(Vec<Rat>, CycRat)> = self
            .terms
            .iter()
            .map(|(f, c)| (f.clone(), c.clone()))
            .collect();
        raw.extend(other.terms.iter().map(|(f, c)| (f.clone(), c.clone())));
        Self::from_terms(self.model.clone(), raw)
    }

    pub fn neg(&self) -> Self {
        Self {
            model: self.model.clone(),
            terms: self
                .terms
                .iter()
                .map(|(f, c)| (f.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CycRat) -> Result<Self> {
        let raw = self
            .terms
            .iter()
            .map(|(f, k)| (f.clone(), k.mul(c)))
            .collect();
        Self::from_terms(self.model.clone(), raw)
    }

    /// The pointwise product: all pairwise coefficient products with
    /// frequencies added and canonicalized, like terms combined, zeros
    /// dropped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.require_same_model(other)?;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (f1, c1) in &self.terms {
            for (f2, c2) in &other.terms {
                let freq: Vec<Rat> = f1.iter().zip(f2).map(|(a, b)| a + b).collect();
                raw.push((freq, c1.mul(c2)));
            }
        }
        Self::from_terms(self.model.clone(), raw)
    }

    fn pairing(&self, rep: &Representative) -> Result<Vec<Rat>> {
        // the coordinates of the representative as rationals, for the dot
        // product with a frequency
        match (&self.model, rep) {
            (
                Model::Vector {
                    group: VectorGroup::Real,
                    dim,
                },
                Representative::RealVector(v),
            ) if v.len() == *dim => Ok(v.clone()),
            (
                Model::Vector {
                    group: VectorGroup::Integer,
                    dim,
                },
                Representative::IntegerVector(v),
            ) if v.len() == *dim => {
                Ok(v.iter().map(|x| Rat::from_integer(x.clone())).collect())
            }
            (Model::Rationals, Representative::Rational(r)) => Ok(vec![r.clone()]),
            _ => Err(Error::ShapeMismatch(format!(
                "representative does not fit the {} model",
                self.model
            ))),
        }
    }

    /// Evaluates the function at a dense representative: the sum of
    /// `coeff * e(theta . x)` over all terms, exact.
    pub fn eval(&self, rep: &Representative) -> Result<CycRat> {
        let coords = self.pairing(rep)?;
        let mut acc = CycRat::zero();
        for (freq, coeff) in &self.terms {
            let phase: Rat = freq
                .iter()
                .zip(&coords)
                .map(|(a, b)| a * b)
                .fold(BigRational::zero(), |s, x| s + x);
            acc = acc.add(&coeff.mul(&CycRat::unit_phase(&phase)));
        }
        Ok(acc)
    }

    /// The coefficient l1 norm, exact whenever every coefficient has a
    /// rational modulus.
    pub fn norm(&self) -> NormValue {
        self.terms
            .values()
            .fold(NormValue::zero(), |acc, c| acc.add(&c.modulus()))
    }
}

impl std::fmt::Display for TrigPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(freq, coeff)| {
                let fs: Vec<String> = freq.iter().map(format_rat).collect();
                format!("({})*X[{}]", coeff, fs.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn real2() -> Model {
        "R^2".parse().unwrap()
    }

    fn z1() -> Model {
        "Z^1".parse().unwrap()
    }

    fn chi(model: Model, freq: Vec<Rat>) -> TrigPolynomial {
        TrigPolynomial::from_terms(model, vec![(freq, CycRat::one())]).unwrap()
    }

    #[test]
    fn single_characters_multiply_by_adding_frequencies() {
        let a = chi(real2(), vec![rat(1, 2), int(0)]);
        let b = chi(real2(), vec![int(1), rat(1, 3)]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.terms().len(), 1);
        let (freq, coeff) = p.terms().iter().next().unwrap();
        assert_eq!(freq, &vec![rat(3, 2), rat(1, 3)]);
        assert_eq!(coeff, &CycRat::one());
    }

    #[test]
    fn integer_model_frequencies_reduce_mod_one() {
        let half = chi(z1(), vec![rat(1, 2)]);
        let sq = half.mul(&half).unwrap();
        // 1/2 + 1/2 = 1 = 0 mod Z: the square is the constant 1
        assert_eq!(sq, TrigPolynomial::one(z1()).unwrap());
    }

    #[test]
    fn eval_matches_product_of_evals() {
        let u = TrigPolynomial::from_terms(
            real2(),
            vec![
                (vec![rat(1, 2), int(0)], CycRat::from_rat(int(2))),
                (vec![int(0), rat(1, 3)], CycRat::from_rat(rat(-1, 2))),
                (vec![rat(1, 4), rat(1, 4)], CycRat::i()),
            ],
        )
        .unwrap();
        let v = TrigPolynomial::from_terms(
            real2(),
            vec![
                (vec![int(1), int(0)], CycRat::one()),
                (vec![rat(-1, 2), rat(1, 6)], CycRat::from_rat(rat(3, 5))),
            ],
        )
        .unwrap();
        let prod = u.mul(&v).unwrap();
        for x in [
            Representative::RealVector(vec![int(0), int(0)]),
            Representative::RealVector(vec![rat(1, 2), int(3)]),
            Representative::RealVector(vec![rat(-2, 3), rat(5, 7)]),
            Representative::RealVector(vec![int(1), rat(-1, 2)]),
        ] {
            let lhs = prod.eval(&x).unwrap();
            let rhs = u.eval(&x).unwrap().mul(&v.eval(&x).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = chi(real2(), vec![int(1), int(0)]);
        let diff = a.sub(&a).unwrap();
        assert!(diff.is_zero());
        assert_eq!(diff.terms().len(), 0);
    }

    #[test]
    fn norm_is_exact_for_rational_moduli() {
        let u = TrigPolynomial::from_terms(
            real2(),
            vec![
                (vec![int(0), int(0)], CycRat::from_rat(int(2))),
                (vec![int(1), int(0)], CycRat::from_gaussian(int(3), int(4))),
            ],
        )
        .unwrap();
        assert_eq!(u.norm(), NormValue::Exact(int(7)));
        let unit = TrigPolynomial::one(real2()).unwrap();
        assert_eq!(unit.norm(), NormValue::Exact(int(1)));
        assert_eq!(
            TrigPolynomial::zero(real2()).unwrap().norm(),
            NormValue::Exact(int(0))
        );
    }

    #[test]
    fn model_and_shape_mismatches() {
        let a = chi(real2(), vec![int(1), int(0)]);
        let b = chi(z1(), vec![int(0)]);
        assert!(a.mul(&b).is_err());
        assert!(TrigPolynomial::from_terms(real2(), vec![(vec![int(1)], CycRat::one())]).is_err());
        assert!(a.eval(&Representative::Rational(int(1))).is_err());
        assert!(TrigPolynomial::one("axb".parse().unwrap()).is_err());
    }

    #[test]
    fn rationals_model_characters() {
        let q: Model = "Q".parse().unwrap();
        let u = chi(q, vec![rat(1, 3)]);
        let v = u.eval(&Representative::Rational(rat(1, 2))).unwrap();
        assert_eq!(v, CycRat::unit_phase(&rat(1, 6)));
    }
}
