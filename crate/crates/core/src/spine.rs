//! The spine compactification on dense-image representatives: a Clifford
//! semigroup graded over the model semilattice.
//!
//! Only representable points are modeled, i.e. images of actual group
//! elements under the completion maps. Multiplication lands in the meet of
//! the grades, with the group law applied to representatives and the result
//! normalized through the kernel of the lower grade. General completion
//! points (irrational Bohr limits and the like) are not constructible here.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{format_rat, Rat};
use crate::semilattice::HereditarySet;
use crate::topology::{
    AxbLevel, Model, ModelSemilattice, TopologyGrade, VectorGroup,
};

/// A group element of one of the modeled families, in the shape the family
/// requires.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Representative {
    /// A rational vector, for `R^n`.
    RealVector(Vec<Rat>),
    /// An integer vector, for `Z^n`.
    IntegerVector(Vec<BigInt>),
    /// A rational, for the `Q` model and the two-point `R` model.
    Rational(Rat),
    /// An integer, for the two-point `Z` model.
    Integer(BigInt),
    /// A point `(a, b)` of the `ax+b` group, `a > 0`.
    Axb { a: Rat, b: Rat },
    /// The unit of a compact group.
    Unit,
}

impl Representative {
    fn describe(&self) -> &'static str {
        match self {
            Representative::RealVector(_) => "rational vector",
            Representative::IntegerVector(_) => "integer vector",
            Representative::Rational(_) => "rational",
            Representative::Integer(_) => "integer",
            Representative::Axb { .. } => "ax+b pair",
            Representative::Unit => "unit",
        }
    }
}

/// A point of the spine compactification: a grade together with a dense
/// representative, kernel-normalized at construction so that equality is
/// structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpineElement {
    grade: TopologyGrade,
    rep: Representative,
}

fn normalize(grade: &TopologyGrade, rep: Representative) -> Representative {
    match grade {
        // the compact model collapses everything to the unit
        TopologyGrade::Compact => Representative::Unit,
        // below the full grade of ax+b the compactification factors through
        // (a,b) -> a, so the b-coordinate is killed
        TopologyGrade::Axb(AxbLevel::Ap) | TopologyGrade::Axb(AxbLevel::RealLine) => match rep {
            Representative::Axb { a, .. } => Representative::Axb { a, b: Rat::zero() },
            other => other,
        },
        // the abelian models are maximally almost periodic: all kernels are
        // trivial and normalization is the identity
        _ => rep,
    }
}

impl SpineElement {
    /// Validates the representative shape against the grade's model and
    /// kernel-normalizes eagerly.
    pub fn new(grade: TopologyGrade, rep: Representative) -> Result<Self> {
        let model = grade.model();
        let ok = match (&model, &rep) {
            (Model::Compact, Representative::Unit) => true,
            (Model::RealLine, Representative::Rational(_)) => true,
            (Model::IntegerLine, Representative::Integer(_)) => true,
            (Model::MinWap, _) => {
                return Err(Error::UnsupportedScope(
                    "representable points are not modeled for minWAP groups".into(),
                ))
            }
            (
                Model::Vector {
                    group: VectorGroup::Real,
                    dim,
                },
                Representative::RealVector(v),
            ) => v.len() == *dim,
            (
                Model::Vector {
                    group: VectorGroup::Integer,
                    dim,
                },
                Representative::IntegerVector(v),
            ) => v.len() == *dim,
            (Model::Rationals, Representative::Rational(_)) => true,
            (Model::Axb, Representative::Axb { a, .. }) => {
                if !a.is_positive() {
                    return Err(Error::Malformed(
                        "ax+b representatives need a > 0".into(),
                    ));
                }
                true
            }
            _ => false,
        };
        if !ok {
            return Err(Error::ShapeMismatch(format!(
                "a {} representative does not fit the {} model",
                rep.describe(),
                model
            )));
        }
        let rep = normalize(&grade, rep);
        Ok(Self { grade, rep })
    }

    pub fn grade(&self) -> &TopologyGrade {
        &self.grade
    }

    pub fn representative(&self) -> &Representative {
        &self.rep
    }

    pub fn model(&self) -> Model {
        self.grade.model()
    }

    /// The identity element at a grade; the idempotent of its component
    /// group. Products of idempotents follow the grade meet.
    pub fn idempotent(grade: TopologyGrade) -> Result<Self> {
        let rep = match grade.model() {
            Model::Compact => Representative::Unit,
            Model::RealLine => Representative::Rational(Rat::zero()),
            Model::IntegerLine => Representative::Integer(BigInt::zero()),
            Model::MinWap => {
                return Err(Error::UnsupportedScope(
                    "representable points are not modeled for minWAP groups".into(),
                ))
            }
            Model::Vector {
                group: VectorGroup::Real,
                dim,
            } => Representative::RealVector(vec![Rat::zero(); dim]),
            Model::Vector {
                group: VectorGroup::Integer,
                dim,
            } => Representative::IntegerVector(vec![BigInt::zero(); dim]),
            Model::Rationals => Representative::Rational(Rat::zero()),
            Model::Axb => Representative::Axb {
                a: Rat::one(),
                b: Rat::zero(),
            },
        };
        Self::new(grade, rep)
    }

    /// The semigroup product: grades meet, representatives multiply by the
    /// group law, and the result is normalized at the lower grade.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let grade = self.grade.meet(&other.grade)?;
        let rep = match (&self.rep, &other.rep) {
            (Representative::RealVector(a), Representative::RealVector(b)) => {
                Representative::RealVector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Representative::IntegerVector(a), Representative::IntegerVector(b)) => {
                Representative::IntegerVector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Representative::Rational(a), Representative::Rational(b)) => {
                Representative::Rational(a + b)
            }
            (Representative::Integer(a), Representative::Integer(b)) => {
                Representative::Integer(a + b)
            }
            (Representative::Axb { a, b }, Representative::Axb { a: a1, b: b1 }) => {
                Representative::Axb {
                    a: a * a1,
                    b: a * b1 + b,
                }
            }
            (Representative::Unit, Representative::Unit) => Representative::Unit,
            _ => unreachable!("same model implies same representative shape"),
        };
        Self::new(grade, rep)
    }

    /// The image of this element at a coarser grade: representative kept,
    /// kernel normalization applied there.
    pub fn pushforward(&self, lower: &TopologyGrade) -> Result<Self> {
        if !lower.leq(&self.grade)? {
            return Err(Error::Malformed(format!(
                "{} is not below {} in the grade order",
                lower, self.grade
            )));
        }
        Self::new(lower.clone(), self.rep.clone())
    }
}

impl std::fmt::Display for SpineElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.grade, &self.rep) {
            (TopologyGrade::Vector { space, .. }, Representative::RealVector(v)) => {
                let cells: Vec<String> = v.iter().map(format_rat).collect();
                write!(f, "(L={}, v=[{}])", space, cells.join(","))
            }
            (TopologyGrade::Vector { space, .. }, Representative::IntegerVector(v)) => {
                let cells: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "(L={}, v=[{}])", space, cells.join(","))
            }
            (TopologyGrade::Rational(q), Representative::Rational(r)) => {
                write!(f, "(S={}, r={})", q, format_rat(r))
            }
            (TopologyGrade::Axb(_), Representative::Axb { a, b }) => {
                write!(
                    f,
                    "(level={}, a={}, b={})",
                    self.grade,
                    format_rat(a),
                    format_rat(b)
                )
            }
            (TopologyGrade::TwoPoint { .. }, Representative::Rational(r)) => {
                write!(f, "(level={}, x={})", self.grade, format_rat(r))
            }
            (TopologyGrade::TwoPoint { .. }, Representative::Integer(x)) => {
                write!(f, "(level={}, x={})", self.grade, x)
            }
            (TopologyGrade::Compact, Representative::Unit) => write!(f, "(e)"),
            _ => unreachable!("constructor enforces shape"),
        }
    }
}

/// A tuple of representatives over a hereditary set of a finite model
/// restriction, tested for projective-limit consistency: lower components
/// must be the pushforwards of higher ones.
#[derive(Debug, Clone)]
pub struct CompatibleTuple {
    context: ModelSemilattice,
    hereditary: HereditarySet,
    components: BTreeMap<usize, Representative>,
}

/// Consistency violations: `(lower, upper)` grade identifiers for which the
/// pushforward equation fails, with a short description.
#[derive(Debug, Clone, Default)]
pub struct TupleReport {
    pub violations: Vec<(usize, usize, String)>,
}

impl TupleReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CompatibleTuple {
    pub fn new(
        context: ModelSemilattice,
        hereditary: HereditarySet,
        components: BTreeMap<usize, Representative>,
    ) -> Result<Self> {
        context
            .semilattice()
            .validate_hereditary(&hereditary.members().collect())?;
        for &id in components.keys() {
            let grade = context.grade(id)?;
            if !hereditary.contains(id) {
                return Err(Error::Malformed(format!(
                    "component at {grade} lies outside the hereditary set"
                )));
            }
        }
        for id in hereditary.members() {
            if !components.contains_key(&id) {
                return Err(Error::Malformed(format!(
                    "missing component at {}",
                    context.grade(id)?
                )));
            }
        }
        // validate shapes and normalize each component at its own grade
        let mut normalized = BTreeMap::new();
        for (id, rep) in components {
            let grade = context.grade(id)?.clone();
            let elem = SpineElement::new(grade, rep)?;
            normalized.insert(id, elem.rep);
        }
        Ok(Self {
            context,
            hereditary,
            components: normalized,
        })
    }

    /// Builds the principal tuple generated by one representative at `top`:
    /// every lower component is its pushforward. Such tuples are consistent
    /// by construction.
    pub fn principal(
        context: ModelSemilattice,
        top: &TopologyGrade,
        rep: Representative,
    ) -> Result<Self> {
        let hereditary = context.principal_hereditary(top)?;
        let mut components = BTreeMap::new();
        for id in hereditary.members() {
            components.insert(id, rep.clone());
        }
        Self::new(context, hereditary, components)
    }

    pub fn component(&self, id: usize) -> Option<&Representative> {
        self.components.get(&id)
    }

    pub fn hereditary(&self) -> &HereditarySet {
        &self.hereditary
    }

    /// Checks every pushforward-consistency equation within the hereditary
    /// set. The pushforward of a dense representative is the representative
    /// itself followed by kernel normalization at the lower grade.
    pub fn validate(&self) -> Result<TupleReport> {
        let mut report = TupleReport::default();
        let lattice = self.context.semilattice();
        for hi in self.hereditary.members() {
            for lo in self.hereditary.members() {
                if lo == hi || !lattice.leq(lo, hi)? {
                    continue;
                }
                let upper = SpineElement::new(
                    self.context.grade(hi)?.clone(),
                    self.components[&hi].clone(),
                )?;
                let pushed = upper.pushforward(self.context.grade(lo)?)?;
                let lower = SpineElement::new(
                    self.context.grade(lo)?.clone(),
                    self.components[&lo].clone(),
                )?;
                if pushed != lower {
                    report.violations.push((
                        lo,
                        hi,
                        format!(
                            "component at {} is not the pushforward of the one at {}",
                            self.context.grade(lo)?,
                            self.context.grade(hi)?
                        ),
                    ));
                }
            }
        }
        Ok(report)
    }
}

/// The partition of a set of spine elements into its maximal subgroups
/// (cells of fixed grade), with the semilattice of occupied grades.
#[derive(Debug, Clone)]
pub struct CliffordDecomposition {
    model: Model,
    cells: BTreeMap<TopologyGrade, Vec<SpineElement>>,
}

impl CliffordDecomposition {
    pub fn cells(&self) -> &BTreeMap<TopologyGrade, Vec<SpineElement>> {
        &self.cells
    }

    pub fn occupied_grades(&self) -> Vec<&TopologyGrade> {
        self.cells.keys().collect()
    }

    pub fn idempotent_of(&self, grade: &TopologyGrade) -> Result<SpineElement> {
        SpineElement::idempotent(grade.clone())
    }

    pub fn is_meet_closed(&self) -> Result<bool> {
        let grades: Vec<&TopologyGrade> = self.cells.keys().collect();
        for a in &grades {
            for b in &grades {
                if !self.cells.contains_key(&a.meet(b)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Appends witness products of cross-grade pairs until the occupied
    /// grades are closed under meets. Returns the number of cells added.
    pub fn close_under_products(&mut self) -> Result<usize> {
        let mut added = 0;
        loop {
            let grades: Vec<TopologyGrade> = self.cells.keys().cloned().collect();
            let mut new_elems = Vec::new();
            for a in &grades {
                for b in &grades {
                    let m = a.meet(b)?;
                    if !self.cells.contains_key(&m) {
                        let p = self.cells[a][0].mul(&self.cells[b][0])?;
                        debug_assert_eq!(*p.grade(), m);
                        new_elems.push(p);
                    }
                }
            }
            if new_elems.is_empty() {
                return Ok(added);
            }
            for e in new_elems {
                let cell = self.cells.entry(e.grade().clone()).or_default();
                if cell.is_empty() {
                    added += 1;
                }
                if !cell.contains(&e) {
                    cell.push(e);
                }
            }
        }
    }
}

/// Partitions spine elements by grade. All elements must belong to `model`.
pub fn clifford_decompose(
    model: &Model,
    elements: &[SpineElement],
) -> Result<CliffordDecomposition> {
    let mut cells: BTreeMap<TopologyGrade, Vec<SpineElement>> = BTreeMap::new();
    for e in elements {
        if e.model() != *model {
            return Err(Error::ModelMismatch(
                model.to_string(),
                e.model().to_string(),
            ));
        }
        let cell = cells.entry(e.grade().clone()).or_default();
        if !cell.contains(e) {
            cell.push(e.clone());
        }
    }
    Ok(CliffordDecomposition {
        model: model.clone(),
        cells,
    })
}

impl CliffordDecomposition {
    pub fn model(&self) -> &Model {
        &self.model
    }
}
