//! Finite-index subgroups of Z^m, the coset ring expressions built from
//! them, and exact synthesis of their indicator functions as elements of
//! the graded algebra.
//!
//! The indicator of a coset `t + H` expands over the dual group of `Z^m/H`
//! as `(1/index) * sum_theta e(-theta . t) chi_theta`; ring operations then
//! follow inclusion-exclusion, with intersections realized as pointwise
//! products inside the algebra. The synthesized elements live at the almost
//! periodic grade and square to themselves with exact coefficients.

use num_bigint::BigInt;
use num_traits::{Euclid, One, Signed, ToPrimitive, Zero};

use crate::algebra::GradedElement;
use crate::cyclo::CycRat;
use crate::error::{Error, Result};
use crate::rat::{frac_mod_one, Rat};
use crate::subspace::solve_square;
use crate::topology::{Model, VectorGroup};
use crate::trig::TrigPolynomial;

/// Cap on the index of subgroups whose residues or dual groups get
/// enumerated.
const MAX_ENUMERATED_INDEX: u64 = 1 << 20;

/// A finite-index subgroup of Z^m, given by an integer generator matrix
/// (columns generate). The canonical form is the column-style Hermite
/// normal form: upper triangular, positive diagonal, entries to the right
/// of each pivot reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteIndexSubgroup {
    dim: usize,
    hnf: Vec<Vec<BigInt>>,
    index: BigInt,
}

/// Column-style Hermite normal form; `None` when the columns are linearly
/// dependent (infinite index).
fn column_hnf(mut m: Vec<Vec<BigInt>>) -> Option<Vec<Vec<BigInt>>> {
    let n = m.len();
    let col_sub = |m: &mut Vec<Vec<BigInt>>, target: usize, source: usize, q: &BigInt| {
        for i in 0..n {
            let sub = &m[i][source] * q;
            m[i][target] -= sub;
        }
    };
    for i in (0..n).rev() {
        // gcd elimination across columns 0..=i at row i
        loop {
            let mut nonzero: Vec<usize> = (0..=i).filter(|&c| !m[i][c].is_zero()).collect();
            if nonzero.is_empty() {
                return None;
            }
            if nonzero.len() == 1 {
                let c = nonzero[0];
                if c != i {
                    for row in m.iter_mut() {
                        row.swap(c, i);
                    }
                }
                break;
            }
            nonzero.sort_by_key(|&c| m[i][c].magnitude().clone());
            let smallest = nonzero[0];
            for &c in &nonzero[1..] {
                let q = m[i][c].div_euclid(&m[i][smallest]);
                col_sub(&mut m, c, smallest, &q);
            }
        }
        if m[i][i].is_negative() {
            for row in m.iter_mut() {
                row[i] = -row[i].clone();
            }
        }
        // reduce the entries to the right of the pivot
        for j in i + 1..n {
            let q = m[i][j].div_euclid(&m[i][i]);
            if !q.is_zero() {
                col_sub(&mut m, j, i, &q);
            }
        }
    }
    Some(m)
}

impl FiniteIndexSubgroup {
    /// Builds from a square generator matrix whose columns generate the
    /// subgroup. A singular matrix means infinite index and is refused.
    pub fn new(generators: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = generators.len();
        if dim == 0 || generators.iter().any(|r| r.len() != dim) {
            return Err(Error::ShapeMismatch(
                "generator matrix must be square and non-empty".into(),
            ));
        }
        let hnf = column_hnf(generators).ok_or(Error::InfiniteIndex)?;
        let index = (0..dim).fold(BigInt::one(), |acc, i| acc * &hnf[i][i]);
        Ok(Self { dim, hnf, index })
    }

    /// The subgroup `k Z^m` of scaled vectors.
    pub fn scaled(dim: usize, k: i64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ShapeMismatch("dimension must be >= 1".into()));
        }
        let mut gens = vec![vec![BigInt::zero(); dim]; dim];
        for (i, row) in gens.iter_mut().enumerate() {
            row[i] = BigInt::from(k);
        }
        Self::new(gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The index of the subgroup in Z^m, the absolute determinant of any
    /// generator matrix.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// Canonical Hermite normal form, columns generating.
    pub fn hnf(&self) -> &[Vec<BigInt>] {
        &self.hnf
    }

    /// Canonical residue of `x` modulo the subgroup, in the box cut out by
    /// the Hermite diagonal.
    pub fn reduce(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(x.len(), self.dim));
        }
        let mut x = x.to_vec();
        for i in (0..self.dim).rev() {
            let q = x[i].div_euclid(&self.hnf[i][i]);
            if !q.is_zero() {
                for r in 0..=i {
                    let sub = &self.hnf[r][i] * &q;
                    x[r] -= sub;
                }
            }
        }
        Ok(x)
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.reduce(x)?.iter().all(|v| v.is_zero()))
    }

    fn enumerable_index(&self) -> Result<u64> {
        self.index
            .to_u64()
            .filter(|&i| i <= MAX_ENUMERATED_INDEX)
            .ok_or_else(|| Error::SizeLimit {
                size: usize::MAX,
                limit: MAX_ENUMERATED_INDEX as usize,
            })
    }

    /// A complete set of residues of Z^m modulo the subgroup: the integer
    /// box under the Hermite diagonal.
    pub fn residues(&self) -> Result<Vec<Vec<BigInt>>> {
        self.enumerable_index()?;
        let mut out = vec![vec![BigInt::zero(); self.dim]];
        for i in 0..self.dim {
            let d = self.hnf[i][i].to_u64().expect("diagonal fits");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for partial in out {
                for v in 0..d {
                    let mut p = partial.clone();
                    p[i] = BigInt::from(v);
                    next.push(p);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// The dual group of `Z^m / H` as frequency vectors modulo one: all
    /// `theta` with `theta . v` integral on the subgroup, one representative
    /// per character, sorted.
    pub fn dual_frequencies(&self) -> Result<Vec<Vec<Rat>>> {
        self.enumerable_index()?;
        // theta^T G integral <=> theta = (G^T)^(-1) k; k ranges over the
        // residues of the lattice generated by the rows of G
        let transpose: Vec<Vec<BigInt>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.hnf[j][i].clone()).collect())
            .collect();
        let dual_lattice = FiniteIndexSubgroup::new(transpose)?;
        let gt: Vec<Vec<Rat>> = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| Rat::from_integer(self.hnf[j][i].clone()))
                    .collect()
            })
            .collect();
        let mut freqs = Vec::new();
        for k in dual_lattice.residues()? {
            let rhs: Vec<Rat> = k.into_iter().map(Rat::from_integer).collect();
            let theta = solve_square(&gt, &rhs).expect("nonzero determinant");
            freqs.push(theta.iter().map(frac_mod_one).collect::<Vec<Rat>>());
        }
        freqs.sort();
        freqs.dedup();
        debug_assert_eq!(BigInt::from(freqs.len()), self.index);
        Ok(freqs)
    }
}

/// An expression over shifted finite-index subgroups of Z^m, combined by
/// union, intersection and difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CosetRingExpr {
    /// All of Z^m.
    Full(usize),
    /// The coset `shift + subgroup`.
    Coset {
        shift: Vec<BigInt>,
        subgroup: FiniteIndexSubgroup,
    },
    Union(Box<CosetRingExpr>, Box<CosetRingExpr>),
    Intersection(Box<CosetRingExpr>, Box<CosetRingExpr>),
    Difference(Box<CosetRingExpr>, Box<CosetRingExpr>),
}

impl CosetRingExpr {
    pub fn coset(shift: Vec<BigInt>, subgroup: FiniteIndexSubgroup) -> Result<Self> {
        if shift.len() != subgroup.dim() {
            return Err(Error::DimensionMismatch(shift.len(), subgroup.dim()));
        }
        Ok(CosetRingExpr::Coset { shift, subgroup })
    }

    pub fn subgroup(subgroup: FiniteIndexSubgroup) -> Self {
        let shift = vec![BigInt::zero(); subgroup.dim()];
        CosetRingExpr::Coset { shift, subgroup }
    }

    fn combine(
        a: CosetRingExpr,
        b: CosetRingExpr,
        f: fn(Box<CosetRingExpr>, Box<CosetRingExpr>) -> CosetRingExpr,
    ) -> Result<CosetRingExpr> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch(a.dim(), b.dim()));
        }
        Ok(f(Box::new(a), Box::new(b)))
    }

    pub fn union(a: CosetRingExpr, b: CosetRingExpr) -> Result<Self> {
        Self::combine(a, b, CosetRingExpr::Union)
    }

    pub fn intersection(a: CosetRingExpr, b: CosetRingExpr) -> Result<Self> {
        Self::combine(a, b, CosetRingExpr::Intersection)
    }

    pub fn difference(a: CosetRingExpr, b: CosetRingExpr) -> Result<Self> {
        Self::combine(a, b, CosetRingExpr::Difference)
    }

    pub fn dim(&self) -> usize {
        match self {
            CosetRingExpr::Full(m) => *m,
            CosetRingExpr::Coset { subgroup, .. } => subgroup.dim(),
            CosetRingExpr::Union(a, _)
            | CosetRingExpr::Intersection(a, _)
            | CosetRingExpr::Difference(a, _) => a.dim(),
        }
    }

    /// Set membership, the brute-force reference semantics.
    pub fn contains(&self, point: &[BigInt]) -> Result<bool> {
        Ok(match self {
            CosetRingExpr::Full(m) => {
                if point.len() != *m {
                    return Err(Error::DimensionMismatch(point.len(), *m));
                }
                true
            }
            CosetRingExpr::Coset { shift, subgroup } => {
                let moved: Vec<BigInt> =
                    point.iter().zip(shift).map(|(p, s)| p - s).collect();
                subgroup.contains(&moved)?
            }
            CosetRingExpr::Union(a, b) => a.contains(point)? || b.contains(point)?,
            CosetRingExpr::Intersection(a, b) => a.contains(point)? && b.contains(point)?,
            CosetRingExpr::Difference(a, b) => a.contains(point)? && !b.contains(point)?,
        })
    }

    /// Synthesizes the indicator of this set as a graded-algebra element at
    /// the almost periodic grade: leaves expand over the dual group of
    /// their subgroup, and ring operations follow inclusion-exclusion with
    /// intersections as pointwise products. The result squares to itself
    /// with exact coefficients.
    pub fn synthesize(&self) -> Result<GradedElement> {
        let model = Model::Vector {
            group: VectorGroup::Integer,
            dim: self.dim(),
        };
        match self {
            CosetRingExpr::Full(_) => GradedElement::unit(model),
            CosetRingExpr::Coset { shift, subgroup } => {
                let inv_index = Rat::new(BigInt::one(), subgroup.index().clone());
                let mut terms = Vec::new();
                for theta in subgroup.dual_frequencies()? {
                    let phase: Rat = theta
                        .iter()
                        .zip(shift)
                        .map(|(t, s)| t * Rat::from_integer(s.clone()))
                        .fold(Rat::zero(), |acc, x| acc + x);
                    let coeff = CycRat::unit_phase(&-phase).scale(&inv_index);
                    terms.push((theta, coeff));
                }
                let poly = TrigPolynomial::from_terms(model.clone(), terms)?;
                GradedElement::from_parts(
                    model.clone(),
                    vec![(crate::topology::TopologyGrade::unit(&model), poly)],
                )
            }
            CosetRingExpr::Union(a, b) => {
                let (sa, sb) = (a.synthesize()?, b.synthesize()?);
                sa.add(&sb)?.sub(&sa.mul(&sb)?)
            }
            CosetRingExpr::Intersection(a, b) => a.synthesize()?.mul(&b.synthesize()?),
            CosetRingExpr::Difference(a, b) => {
                let (sa, sb) = (a.synthesize()?, b.synthesize()?);
                sa.sub(&sa.mul(&sb)?)
            }
        }
    }
}

/// Indicator synthesis for a coset ring expression over Z^m.
pub fn synthesize_idempotent(expr: &CosetRingExpr) -> Result<GradedElement> {
    expr.synthesize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use crate::spine::Representative;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn bv(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| bi(x)).collect()
    }

    #[test]
    fn hnf_of_scaled_lattice() {
        let h = FiniteIndexSubgroup::scaled(2, 2).unwrap();
        assert_eq!(h.index(), &bi(4));
        assert_eq!(h.hnf(), &[bv(&[2, 0]), bv(&[0, 2])]);
    }

    #[test]
    fn hnf_is_canonical_under_regenerating() {
        // same lattice from mixed generators: (2,0) and (4,2) generate the
        // lattice {(a,b): a even, b even + a/... } - compare against directly
        let a = FiniteIndexSubgroup::new(vec![bv(&[2, 4]), bv(&[0, 2])]).unwrap();
        let b = FiniteIndexSubgroup::new(vec![bv(&[2, 0]), bv(&[4, 2])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.index(), &bi(4));
        // and membership agrees with the generating description
        assert!(a.contains(&bv(&[2, 0])).unwrap());
        assert!(a.contains(&bv(&[4, 2])).unwrap());
        assert!(a.contains(&bv(&[6, 2])).unwrap());
        assert!(!a.contains(&bv(&[1, 0])).unwrap());
        assert!(!a.contains(&bv(&[0, 1])).unwrap());
    }

    #[test]
    fn singular_generators_are_infinite_index() {
        assert!(matches!(
            FiniteIndexSubgroup::new(vec![bv(&[1, 2]), bv(&[2, 4])]),
            Err(Error::InfiniteIndex)
        ));
    }

    #[test]
    fn residues_tile_the_quotient() {
        let h = FiniteIndexSubgroup::new(vec![bv(&[2, 1]), bv(&[0, 3])]).unwrap();
        assert_eq!(h.index(), &bi(6));
        let res = h.residues().unwrap();
        assert_eq!(res.len(), 6);
        // every residue reduces to itself, and distinct residues differ
        for r in &res {
            assert_eq!(&h.reduce(r).unwrap(), r);
        }
    }

    #[test]
    fn dual_frequencies_pair_integrally() {
        let h = FiniteIndexSubgroup::new(vec![bv(&[2, 0]), bv(&[1, 4])]).unwrap();
        let freqs = h.dual_frequencies().unwrap();
        assert_eq!(BigInt::from(freqs.len()), *h.index());
        // each frequency pairs integrally with each generator column
        for theta in &freqs {
            for col in 0..2 {
                let pairing: Rat = (0..2)
                    .map(|i| &theta[i] * Rat::from_integer(h.hnf()[i][col].clone()))
                    .fold(Rat::zero(), |a, b| a + b);
                assert!(pairing.is_integer());
            }
        }
    }

    #[test]
    fn even_integers_expand_to_two_characters() {
        // 2Z in Z: (1/2)(chi_0 + chi_{1/2})
        let expr = CosetRingExpr::subgroup(FiniteIndexSubgroup::scaled(1, 2).unwrap());
        let q = expr.synthesize().unwrap();
        let parts = q.parts();
        assert_eq!(parts.len(), 1);
        let poly = parts.values().next().unwrap();
        let terms = poly.terms();
        assert_eq!(terms.len(), 2);
        assert_eq!(
            terms.get(&vec![int(0)]).unwrap(),
            &CycRat::from_rat(rat(1, 2))
        );
        assert_eq!(
            terms.get(&vec![rat(1, 2)]).unwrap(),
            &CycRat::from_rat(rat(1, 2))
        );
    }

    #[test]
    fn full_group_synthesizes_to_the_unit() {
        let expr = CosetRingExpr::Full(2);
        let q = expr.synthesize().unwrap();
        let model: Model = "Z^2".parse().unwrap();
        assert_eq!(q, GradedElement::unit(model).unwrap());
    }

    #[test]
    fn difference_matches_the_indicator_pointwise() {
        // 2Z \ 4Z: ones exactly on 2 mod 4
        let two = CosetRingExpr::subgroup(FiniteIndexSubgroup::scaled(1, 2).unwrap());
        let four = CosetRingExpr::subgroup(FiniteIndexSubgroup::scaled(1, 4).unwrap());
        let expr = CosetRingExpr::difference(two, four).unwrap();
        let q = expr.synthesize().unwrap();
        for n in -8..=8i64 {
            let s = crate::spine::SpineElement::new(
                crate::topology::TopologyGrade::top(&"Z^1".parse().unwrap()),
                Representative::IntegerVector(bv(&[n])),
            )
            .unwrap();
            let v = q.char_eval(&s).unwrap();
            let expected = i64::from(n.rem_euclid(4) == 2);
            assert_eq!(v, CycRat::from_rat(int(expected)));
            assert_eq!(expr.contains(&bv(&[n])).unwrap(), expected == 1);
        }
        // and the synthesized element is idempotent with exact coefficients
        let sq = q.mul(&q).unwrap();
        assert_eq!(sq, q);
    }

    #[test]
    fn shifted_coset_with_odd_index_uses_cyclotomic_coefficients() {
        // 1 + 3Z: coefficients involve cube roots of unity, kept exact
        let expr = CosetRingExpr::coset(
            bv(&[1]),
            FiniteIndexSubgroup::scaled(1, 3).unwrap(),
        )
        .unwrap();
        let q = expr.synthesize().unwrap();
        for n in -6..=6i64 {
            let s = crate::spine::SpineElement::new(
                crate::topology::TopologyGrade::top(&"Z^1".parse().unwrap()),
                Representative::IntegerVector(bv(&[n])),
            )
            .unwrap();
            let v = q.char_eval(&s).unwrap();
            let expected = i64::from(n.rem_euclid(3) == 1);
            assert_eq!(v, CycRat::from_rat(int(expected)));
        }
        assert_eq!(q.mul(&q).unwrap(), q);
    }

    #[test]
    fn dimension_mismatch_in_combinators() {
        let a = CosetRingExpr::Full(1);
        let b = CosetRingExpr::Full(2);
        assert!(CosetRingExpr::union(a, b).is_err());
    }
}
