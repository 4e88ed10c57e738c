//! Formal finite sums graded over a model's topology semilattice, with
//! trigonometric-polynomial coefficients: a desk-scale carrier of the
//! graded multiplication structure of the spine algebra.
//!
//! Multiplication joins grades and convolves frequencies; the norm is the
//! l1 sum of coefficient norms across grades, additive by construction.
//! Characters of the algebra are indexed by spine elements: evaluation sums
//! grade terms over the principal hereditary set of the element's grade.
//! Affine maps pull elements back along `h -> A h + b`, transposing
//! frequencies and twisting coefficients by the offset phase.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::coset::FiniteIndexSubgroup;
use crate::cyclo::{CycRat, NormValue};
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::spine::{Representative, SpineElement};
use crate::topology::{Model, QGen, QGrade, TopologyGrade, VectorGroup};
use crate::trig::TrigPolynomial;

/// Validates that a grade may carry a coefficient function in its model:
/// vector grades always may; rationals-model grades only when every modeled
/// character is available there, i.e. the generator set stays within the
/// real-completion grade.
fn validate_part_grade(model: &Model, grade: &TopologyGrade) -> Result<()> {
    if grade.model() != *model {
        return Err(Error::ModelMismatch(
            model.to_string(),
            grade.model().to_string(),
        ));
    }
    if let TopologyGrade::Rational(q) = grade {
        let ok = match q {
            QGrade::Generators(gens) => gens.iter().all(|g| *g == QGen::R),
            QGrade::Top => false,
        };
        if !ok {
            return Err(Error::UnsupportedScope(format!(
                "rationals-model coefficients are modeled with real-type characters only, \
                 which cover the grades {{}} and {{R}}, not {grade}"
            )));
        }
    }
    Ok(())
}

/// A finite formal sum of grade-tagged trigonometric polynomials over one
/// model, with no empty parts stored.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedElement {
    model: Model,
    parts: BTreeMap<TopologyGrade, TrigPolynomial>,
}

impl GradedElement {
    pub fn zero(model: Model) -> Result<Self> {
        crate::trig::frequency_dim(&model)?;
        Ok(Self {
            model,
            parts: BTreeMap::new(),
        })
    }

    /// The unit: the constant 1 at the almost periodic grade.
    pub fn unit(model: Model) -> Result<Self> {
        let poly = TrigPolynomial::one(model.clone())?;
        Self::from_parts(model.clone(), vec![(TopologyGrade::unit(&model), poly)])
    }

    pub fn from_parts(
        model: Model,
        raw: Vec<(TopologyGrade, TrigPolynomial)>,
    ) -> Result<Self> {
        crate::trig::frequency_dim(&model)?;
        let mut parts: BTreeMap<TopologyGrade, TrigPolynomial> = BTreeMap::new();
        for (grade, poly) in raw {
            validate_part_grade(&model, &grade)?;
            if poly.model() != &model {
                return Err(Error::ModelMismatch(
                    model.to_string(),
                    poly.model().to_string(),
                ));
            }
            match parts.remove(&grade) {
                Some(existing) => {
                    parts.insert(grade, existing.add(&poly)?);
                }
                None => {
                    parts.insert(grade, poly);
                }
            }
        }
        parts.retain(|_, p| !p.is_zero());
        Ok(Self { model, parts })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn parts(&self) -> &BTreeMap<TopologyGrade, TrigPolynomial> {
        &self.parts
    }

    pub fn part(&self, grade: &TopologyGrade) -> Option<&TrigPolynomial> {
        self.parts.get(grade)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
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
        let mut raw: Vec<(TopologyGrade, TrigPolynomial)> = self
            .parts
            .iter()
            .map(|(g, p)| (g.clone(), p.clone()))
            .collect();
        raw.extend(other.parts.iter().map(|(g, p)| (g.clone(), p.clone())));
        Self::from_parts(self.model.clone(), raw)
    }

    pub fn neg(&self) -> Self {
        Self {
            model: self.model.clone(),
            parts: self
                .parts
                .iter()
                .map(|(g, p)| (g.clone(), p.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// The graded product: the part at grade `g` collects every product of
    /// parts whose grades join to `g`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.require_same_model(other)?;
        let mut raw = Vec::with_capacity(self.parts.len() * other.parts.len());
        for (g1, p1) in &self.parts {
            for (g2, p2) in &other.parts {
                raw.push((g1.join(g2)?, p1.mul(p2)?));
            }
        }
        Self::from_parts(self.model.clone(), raw)
    }

    /// The l1 norm: the sum of part norms across grades, additive by
    /// construction.
    pub fn norm(&self) -> NormValue {
        self.parts
            .values()
            .fold(NormValue::zero(), |acc, p| acc.add(&p.norm()))
    }

    /// Evaluates the character indexed by a spine element: the parts at
    /// grades below the element's grade are evaluated at its pushforwards,
    /// all other grades contribute nothing.
    pub fn char_eval(&self, s: &SpineElement) -> Result<CycRat> {
        if s.model() != self.model {
            return Err(Error::ModelMismatch(
                self.model.to_string(),
                s.model().to_string(),
            ));
        }
        let mut acc = CycRat::zero();
        for (grade, poly) in &self.parts {
            if grade.leq(s.grade())? {
                let pushed = s.pushforward(grade)?;
                acc = acc.add(&poly.eval(pushed.representative())?);
            }
        }
        Ok(acc)
    }

    /// Pulls the element back along the affine map `h -> A h + b` from the
    /// integer lattice into the real vector model: frequencies transpose
    /// through `A`, coefficients pick up the offset phase `e(theta . b)`,
    /// and each grade maps to the rational preimage of its subspace. The
    /// evaluation identity `chi_h(pullback u) = chi_{A h + b}(u)` holds at
    /// every integer point.
    pub fn affine_pullback(&self, map: &AffineMap) -> Result<GradedElement> {
        let expected = Model::Vector {
            group: VectorGroup::Real,
            dim: map.codomain_dim(),
        };
        if self.model != expected {
            return Err(Error::ShapeMismatch(format!(
                "pullback along a {}x{} map needs an element over {}, got {}",
                map.codomain_dim(),
                map.domain_dim(),
                expected,
                self.model
            )));
        }
        let target = Model::Vector {
            group: VectorGroup::Integer,
            dim: map.domain_dim(),
        };
        let mut raw = Vec::new();
        for (grade, poly) in &self.parts {
            let TopologyGrade::Vector { space, .. } = grade else {
                unreachable!("vector model parts carry vector grades")
            };
            let pulled_grade = TopologyGrade::Vector {
                group: VectorGroup::Integer,
                space: space.preimage(&map.matrix)?,
            };
            let mut terms = Vec::with_capacity(poly.terms().len());
            for (theta, coeff) in poly.terms() {
                let freq: Vec<Rat> = (0..map.domain_dim())
                    .map(|j| {
                        (0..map.codomain_dim())
                            .map(|i| &theta[i] * &map.matrix[i][j])
                            .fold(Rat::new(BigInt::from(0), BigInt::from(1)), |a, b| a + b)
                    })
                    .collect();
                let phase: Rat = theta
                    .iter()
                    .zip(&map.offset)
                    .map(|(t, b)| t * b)
                    .fold(Rat::new(BigInt::from(0), BigInt::from(1)), |a, b| a + b);
                terms.push((freq, coeff.mul(&CycRat::unit_phase(&phase))));
            }
            raw.push((pulled_grade, TrigPolynomial::from_terms(target.clone(), terms)?));
        }
        GradedElement::from_parts(target, raw)
    }

    /// Pointwise evaluation of an integer-model element over one coset of a
    /// finite-index subgroup, on a deterministic window of lattice points.
    /// Supports checking restriction behavior against set indicators.
    pub fn restrict_check(
        &self,
        shift: &[BigInt],
        subgroup: &FiniteIndexSubgroup,
    ) -> Result<Vec<(Vec<BigInt>, CycRat)>> {
        let Model::Vector {
            group: VectorGroup::Integer,
            dim,
        } = &self.model
        else {
            return Err(Error::UnsupportedScope(format!(
                "restriction tables are defined over integer-lattice models, not {}",
                self.model
            )));
        };
        if subgroup.dim() != *dim || shift.len() != *dim {
            return Err(Error::DimensionMismatch(subgroup.dim(), *dim));
        }
        let grade = TopologyGrade::top(&self.model);
        let mut table = Vec::new();
        let mut coords = vec![-2i64; *dim];
        loop {
            // sublattice point: shift + H * coords over the window [-2, 2]^m
            let point: Vec<BigInt> = (0..*dim)
                .map(|i| {
                    let mut x = shift[i].clone();
                    for (j, c) in coords.iter().enumerate() {
                        x += &subgroup.hnf()[i][j] * BigInt::from(*c);
                    }
                    x
                })
                .collect();
            let s = SpineElement::new(grade.clone(), Representative::IntegerVector(point.clone()))?;
            table.push((point, self.char_eval(&s)?));
            let mut k = 0;
            loop {
                if k == *dim {
                    return Ok(table);
                }
                coords[k] += 1;
                if coords[k] <= 2 {
                    break;
                }
                coords[k] = -2;
                k += 1;
            }
        }
    }
}

/// A rational affine map `h -> A h + b` with `A` of shape n x m and
/// `b` in Q^n, read as a map from Z^m into R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    matrix: Vec<Vec<Rat>>,
    offset: Vec<Rat>,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<Rat>>, offset: Vec<Rat>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("matrix must be non-empty".into()));
        }
        let m = matrix[0].len();
        if m == 0 || matrix.iter().any(|r| r.len() != m) {
            return Err(Error::ShapeMismatch("ragged or empty matrix".into()));
        }
        if offset.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "offset has {} coordinates, matrix has {} rows",
                offset.len(),
                n
            )));
        }
        Ok(Self { matrix, offset })
    }

    pub fn matrix(&self) -> &[Vec<Rat>] {
        &self.matrix
    }

    pub fn offset(&self) -> &[Rat] {
        &self.offset
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.len()
    }

    /// The image `A h + b` of an integer point.
    pub fn apply(&self, h: &[BigInt]) -> Result<Vec<Rat>> {
        if h.len() != self.domain_dim() {
            return Err(Error::DimensionMismatch(h.len(), self.domain_dim()));
        }
        Ok(self
            .matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| {
                row.iter()
                    .zip(h)
                    .map(|(a, x)| a * Rat::from_integer(x.clone()))
                    .fold(b.clone(), |acc, v| acc + v)
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use crate::subspace::RationalSubspace;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn real2() -> Model {
        "R^2".parse().unwrap()
    }

    fn grade_r2(rows: &[&[i64]]) -> TopologyGrade {
        TopologyGrade::Vector {
            group: VectorGroup::Real,
            space: RationalSubspace::from_rows(
                2,
                rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
            )
            .unwrap(),
        }
    }

    fn single(model: Model, grade: TopologyGrade, freq: Vec<Rat>, c: CycRat) -> GradedElement {
        let poly = TrigPolynomial::from_terms(model.clone(), vec![(freq, c)]).unwrap();
        GradedElement::from_parts(model, vec![(grade, poly)]).unwrap()
    }

    #[test]
    fn unit_is_neutral() {
        let u = single(
            real2(),
            grade_r2(&[&[1, 0]]),
            vec![rat(1, 2), int(0)],
            CycRat::from_rat(int(3)),
        );
        let e = GradedElement::unit(real2()).unwrap();
        assert_eq!(e.mul(&u).unwrap(), u);
        assert_eq!(u.mul(&e).unwrap(), u);
    }

    #[test]
    fn product_parts_land_at_joined_grades() {
        let u = single(
            real2(),
            grade_r2(&[&[1, 0]]),
            vec![int(1), int(0)],
            CycRat::one(),
        );
        let v = single(
            real2(),
            grade_r2(&[&[0, 1]]),
            vec![int(0), int(1)],
            CycRat::one(),
        );
        let p = u.mul(&v).unwrap();
        assert_eq!(p.parts().len(), 1);
        let (g, poly) = p.parts().iter().next().unwrap();
        assert_eq!(*g, grade_r2(&[&[1, 0], &[0, 1]]));
        assert_eq!(poly.terms().len(), 1);
    }

    #[test]
    fn norm_adds_across_grades() {
        let u = single(
            real2(),
            grade_r2(&[&[1, 0]]),
            vec![int(1), int(0)],
            CycRat::from_rat(int(2)),
        );
        let v = single(
            real2(),
            grade_r2(&[&[0, 1]]),
            vec![int(0), int(1)],
            CycRat::from_rat(int(-3)),
        );
        let w = u.add(&v).unwrap();
        assert_eq!(w.norm(), NormValue::Exact(int(5)));
        assert_eq!(GradedElement::zero(real2()).unwrap().norm(), NormValue::Exact(int(0)));
        assert_eq!(GradedElement::unit(real2()).unwrap().norm(), NormValue::Exact(int(1)));
    }

    #[test]
    fn char_eval_of_unit_is_one_everywhere() {
        let e = GradedElement::unit(real2()).unwrap();
        for grade in [grade_r2(&[]), grade_r2(&[&[1, 1]]), grade_r2(&[&[1, 0], &[0, 1]])] {
            let s = SpineElement::new(
                grade,
                Representative::RealVector(vec![rat(1, 3), int(2)]),
            )
            .unwrap();
            assert_eq!(e.char_eval(&s).unwrap(), CycRat::one());
        }
    }

    #[test]
    fn grades_above_the_element_contribute_zero() {
        let u = single(
            real2(),
            grade_r2(&[&[1, 0]]),
            vec![rat(1, 2), int(0)],
            CycRat::one(),
        );
        // an element at the almost periodic grade sees nothing of u
        let s = SpineElement::new(
            grade_r2(&[]),
            Representative::RealVector(vec![int(1), int(1)]),
        )
        .unwrap();
        assert!(u.char_eval(&s).unwrap().is_zero());
        // at the supporting grade the character value appears
        let s = SpineElement::new(
            grade_r2(&[&[1, 0]]),
            Representative::RealVector(vec![int(1), int(0)]),
        )
        .unwrap();
        assert_eq!(u.char_eval(&s).unwrap(), CycRat::from_rat(int(-1)));
    }

    #[test]
    fn char_eval_is_multiplicative() {
        let u = GradedElement::from_parts(
            real2(),
            vec![
                (
                    grade_r2(&[&[1, 0]]),
                    TrigPolynomial::from_terms(
                        real2(),
                        vec![
                            (vec![rat(1, 2), int(0)], CycRat::from_rat(int(2))),
                            (vec![int(1), rat(1, 3)], CycRat::i()),
                        ],
                    )
                    .unwrap(),
                ),
                (
                    grade_r2(&[]),
                    TrigPolynomial::from_terms(
                        real2(),
                        vec![(vec![int(0), int(0)], CycRat::from_rat(rat(1, 2)))],
                    )
                    .unwrap(),
                ),
            ],
        )
        .unwrap();
        let v = single(
            real2(),
            grade_r2(&[&[1, 0], &[0, 1]]),
            vec![rat(-1, 2), rat(1, 4)],
            CycRat::from_rat(rat(3, 2)),
        );
        let s = SpineElement::new(
            grade_r2(&[&[1, 0], &[0, 1]]),
            Representative::RealVector(vec![rat(2, 3), rat(1, 5)]),
        )
        .unwrap();
        let lhs = u.mul(&v).unwrap().char_eval(&s).unwrap();
        let rhs = u.char_eval(&s).unwrap().mul(&v.char_eval(&s).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_pullback_fixes_the_unit() {
        let map = AffineMap::new(
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
            vec![int(0), int(0)],
        )
        .unwrap();
        let u = GradedElement::unit(real2()).unwrap();
        let pulled = u.affine_pullback(&map).unwrap();
        assert_eq!(pulled, GradedElement::unit("Z^2".parse().unwrap()).unwrap());
    }

    #[test]
    fn doubling_map_halves_frequencies_mod_one() {
        // alpha(h) = 2h from Z into R, u = chi_{1/4} at the full grade
        let map = AffineMap::new(vec![vec![int(2)]], vec![int(0)]).unwrap();
        let r1: Model = "R^1".parse().unwrap();
        let u = single(
            r1.clone(),
            TopologyGrade::top(&r1),
            vec![rat(1, 4)],
            CycRat::one(),
        );
        let pulled = u.affine_pullback(&map).unwrap();
        let z1: Model = "Z^1".parse().unwrap();
        let expected = single(
            z1.clone(),
            TopologyGrade::top(&z1),
            vec![rat(1, 2)],
            CycRat::one(),
        );
        assert_eq!(pulled, expected);
        // evaluation identity at integer points
        for h in -4..=4i64 {
            let s = SpineElement::new(
                TopologyGrade::top(&z1),
                Representative::IntegerVector(vec![bi(h)]),
            )
            .unwrap();
            let target = SpineElement::new(
                TopologyGrade::top(&r1),
                Representative::RealVector(map.apply(&[bi(h)]).unwrap()),
            )
            .unwrap();
            assert_eq!(
                pulled.char_eval(&s).unwrap(),
                u.char_eval(&target).unwrap()
            );
        }
    }

    #[test]
    fn pullback_respects_products() {
        let map = AffineMap::new(
            vec![vec![rat(1, 2), int(1)], vec![int(0), rat(2, 3)]],
            vec![rat(1, 3), rat(-1, 2)],
        )
        .unwrap();
        let u = single(
            real2(),
            grade_r2(&[&[1, 0]]),
            vec![rat(1, 2), rat(1, 3)],
            CycRat::from_rat(int(2)),
        );
        let v = single(
            real2(),
            grade_r2(&[&[1, 1]]),
            vec![rat(-1, 4), int(1)],
            CycRat::from_gaussian(int(0), rat(1, 2)),
        );
        let lhs = u.mul(&v).unwrap().affine_pullback(&map).unwrap();
        let rhs = u
            .affine_pullback(&map)
            .unwrap()
            .mul(&v.affine_pullback(&map).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn restrict_tables_follow_indicators() {
        let two = FiniteIndexSubgroup::scaled(1, 2).unwrap();
        let q = crate::coset::CosetRingExpr::subgroup(two.clone())
            .synthesize()
            .unwrap();
        // on 2Z the indicator is identically one
        for (_, v) in q.restrict_check(&[bi(0)], &two).unwrap() {
            assert_eq!(v, CycRat::one());
        }
        // on 1 + 2Z identically zero
        for (_, v) in q.restrict_check(&[bi(1)], &two).unwrap() {
            assert!(v.is_zero());
        }
        // the unit restricts to all ones anywhere
        let e = GradedElement::unit("Z^1".parse().unwrap()).unwrap();
        for (_, v) in e.restrict_check(&[bi(1)], &two).unwrap() {
            assert_eq!(v, CycRat::one());
        }
    }

    #[test]
    fn rationals_model_grades_are_scoped() {
        let q: Model = "Q".parse().unwrap();
        let unit_part = TrigPolynomial::one(q.clone()).unwrap();
        // the {R} grade carries real-type characters
        let r_grade = TopologyGrade::Rational(QGrade::Generators(
            [QGen::R].into_iter().collect(),
        ));
        assert!(GradedElement::from_parts(q.clone(), vec![(r_grade, unit_part.clone())]).is_ok());
        // p-adic grades do not
        let p_grade = TopologyGrade::Rational(QGrade::Generators(
            [QGen::Prime(2)].into_iter().collect(),
        ));
        assert!(matches!(
            GradedElement::from_parts(q.clone(), vec![(p_grade, unit_part.clone())]),
            Err(Error::UnsupportedScope(_))
        ));
        assert!(matches!(
            GradedElement::from_parts(
                q,
                vec![(TopologyGrade::Rational(QGrade::Top), unit_part)]
            ),
            Err(Error::UnsupportedScope(_))
        ));
    }
}
