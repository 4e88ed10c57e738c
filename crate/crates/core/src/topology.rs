//! Concrete models of the semilattice of non-quotient locally precompact
//! topologies, for several group families with computable structure:
//!
//! * vector groups and integer lattices (`R^n`, `Z^n`), where grades are the
//!   rational subspaces of Q^n, joined by sum and met by intersection;
//! * two-point chains (`compact`, `R`, `Z`, `minWAP`);
//! * the three-point chain of the `ax+b` group;
//! * the rationals `Q`, modeled on the free sub-semilattice generated by the
//!   real-completion grade and one grade per prime, plus the absorbing
//!   discrete grade. The free sub-semilattice is a proper subset of the
//!   full grade semilattice of `Q`, and meets here are meets within it.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::padic::is_prime;
use crate::semilattice::{FiniteSemilattice, HereditarySet};
use crate::subspace::RationalSubspace;

/// The group families with modeled grade semilattices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Model {
    /// Any compact group: a single grade.
    Compact,
    /// The real line: the two-point chain `ap < full`.
    RealLine,
    /// The integers: the two-point chain `ap < full`.
    IntegerLine,
    /// Minimally weakly almost periodic groups: the two-point chain.
    MinWap,
    /// `R^n` or `Z^n`: grades are rational subspaces of Q^n.
    Vector { group: VectorGroup, dim: usize },
    /// The discrete rationals, restricted to the free sub-semilattice.
    Rationals,
    /// The `ax+b` group: the three-point chain `ap < realline < full`.
    Axb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VectorGroup {
    Real,
    Integer,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::Compact => write!(f, "compact"),
            Model::RealLine => write!(f, "R"),
            Model::IntegerLine => write!(f, "Z"),
            Model::MinWap => write!(f, "minWAP"),
            Model::Vector { group, dim } => match group {
                VectorGroup::Real => write!(f, "R^{dim}"),
                VectorGroup::Integer => write!(f, "Z^{dim}"),
            },
            Model::Rationals => write!(f, "Q"),
            Model::Axb => write!(f, "axb"),
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "compact" => return Ok(Model::Compact),
            "R" => return Ok(Model::RealLine),
            "Z" => return Ok(Model::IntegerLine),
            "minWAP" => return Ok(Model::MinWap),
            "Q" => return Ok(Model::Rationals),
            "axb" => return Ok(Model::Axb),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("R^").or_else(|| s.strip_prefix("Z^")) {
            let dim: usize = n
                .parse()
                .map_err(|_| Error::UnsupportedModel(s.to_string()))?;
            if dim == 0 {
                return Err(Error::Malformed(format!(
                    "model {s:?}: dimension must be >= 1"
                )));
            }
            let group = if s.starts_with('R') {
                VectorGroup::Real
            } else {
                VectorGroup::Integer
            };
            return Ok(Model::Vector { group, dim });
        }
        Err(Error::UnsupportedModel(s.to_string()))
    }
}

/// Level of a two-point chain model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainLevel {
    Ap,
    Full,
}

/// Level of the `ax+b` chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxbLevel {
    Ap,
    RealLine,
    Full,
}

/// Generators of the modeled sub-semilattice for `Q`: the real-completion
/// grade and one grade per prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QGen {
    R,
    Prime(u64),
}

impl QGen {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(QGen::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }
}

impl PartialOrd for QGen {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QGen {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (QGen::R, QGen::R) => std::cmp::Ordering::Equal,
            (QGen::R, QGen::Prime(_)) => std::cmp::Ordering::Less,
            (QGen::Prime(_), QGen::R) => std::cmp::Ordering::Greater,
            (QGen::Prime(p), QGen::Prime(q)) => p.cmp(q),
        }
    }
}

impl std::fmt::Display for QGen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QGen::R => write!(f, "R"),
            QGen::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// A grade of the `Q` model: a finite generator set, or the absorbing
/// discrete grade.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QGrade {
    Generators(BTreeSet<QGen>),
    Top,
}

impl QGrade {
    pub fn unit() -> Self {
        QGrade::Generators(BTreeSet::new())
    }
}

impl std::fmt::Display for QGrade {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QGrade::Top => write!(f, "TOP"),
            QGrade::Generators(gens) => {
                let parts: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

/// A point of the modeled grade semilattice of one group family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TopologyGrade {
    /// The unique grade of a compact group.
    Compact,
    /// A grade of one of the two-point chain models.
    TwoPoint { model: TwoPointFamily, level: ChainLevel },
    /// A grade of the `ax+b` chain.
    Axb(AxbLevel),
    /// A vector-model grade, determined by a rational subspace: the zero
    /// subspace is the almost periodic grade, the full space is the group
    /// topology itself.
    Vector {
        group: VectorGroup,
        space: RationalSubspace,
    },
    /// A grade of the `Q` model.
    Rational(QGrade),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TwoPointFamily {
    RealLine,
    IntegerLine,
    MinWap,
}

impl TopologyGrade {
    pub fn model(&self) -> Model {
        match self {
            TopologyGrade::Compact => Model::Compact,
            TopologyGrade::TwoPoint { model, .. } => match model {
                TwoPointFamily::RealLine => Model::RealLine,
                TwoPointFamily::IntegerLine => Model::IntegerLine,
                TwoPointFamily::MinWap => Model::MinWap,
            },
            TopologyGrade::Axb(_) => Model::Axb,
            TopologyGrade::Vector { group, space } => Model::Vector {
                group: *group,
                dim: space.ambient_dim(),
            },
            TopologyGrade::Rational(_) => Model::Rationals,
        }
    }

    pub fn vector(group: VectorGroup, space: RationalSubspace) -> Self {
        TopologyGrade::Vector { group, space }
    }

    /// The almost periodic grade, the unit of the join semilattice.
    pub fn unit(model: &Model) -> Self {
        match model {
            Model::Compact => TopologyGrade::Compact,
            Model::RealLine => TopologyGrade::TwoPoint {
                model: TwoPointFamily::RealLine,
                level: ChainLevel::Ap,
            },
            Model::IntegerLine => TopologyGrade::TwoPoint {
                model: TwoPointFamily::IntegerLine,
                level: ChainLevel::Ap,
            },
            Model::MinWap => TopologyGrade::TwoPoint {
                model: TwoPointFamily::MinWap,
                level: ChainLevel::Ap,
            },
            Model::Vector { group, dim } => TopologyGrade::Vector {
                group: *group,
                space: RationalSubspace::zero(*dim),
            },
            Model::Rationals => TopologyGrade::Rational(QGrade::unit()),
            Model::Axb => TopologyGrade::Axb(AxbLevel::Ap),
        }
    }

    /// The group topology itself, the absorbing top grade.
    pub fn top(model: &Model) -> Self {
        match model {
            Model::Compact => TopologyGrade::Compact,
            Model::RealLine => TopologyGrade::TwoPoint {
                model: TwoPointFamily::RealLine,
                level: ChainLevel::Full,
            },
            Model::IntegerLine => TopologyGrade::TwoPoint {
                model: TwoPointFamily::IntegerLine,
                level: ChainLevel::Full,
            },
            Model::MinWap => TopologyGrade::TwoPoint {
                model: TwoPointFamily::MinWap,
                level: ChainLevel::Full,
            },
            Model::Vector { group, dim } => TopologyGrade::Vector {
                group: *group,
                space: RationalSubspace::full(*dim),
            },
            Model::Rationals => TopologyGrade::Rational(QGrade::Top),
            Model::Axb => TopologyGrade::Axb(AxbLevel::Full),
        }
    }

    pub fn is_unit(&self) -> bool {
        *self == TopologyGrade::unit(&self.model())
    }

    fn require_same_model(&self, other: &Self) -> Result<()> {
        let (a, b) = (self.model(), other.model());
        if a != b {
            return Err(Error::ModelMismatch(a.to_string(), b.to_string()));
        }
        Ok(())
    }

    /// The semilattice join: subspace sum for vector models, chain maximum
    /// for the finite models, generator union for `Q` with the discrete
    /// grade absorbing.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.require_same_model(other)?;
        Ok(match (self, other) {
            (TopologyGrade::Compact, TopologyGrade::Compact) => TopologyGrade::Compact,
            (
                TopologyGrade::TwoPoint { model, level: l1 },
                TopologyGrade::TwoPoint { level: l2, .. },
            ) => TopologyGrade::TwoPoint {
                model: *model,
                level: (*l1).max(*l2),
            },
            (TopologyGrade::Axb(l1), TopologyGrade::Axb(l2)) => {
                TopologyGrade::Axb((*l1).max(*l2))
            }
            (
                TopologyGrade::Vector { group, space: s1 },
                TopologyGrade::Vector { space: s2, .. },
            ) => TopologyGrade::Vector {
                group: *group,
                space: s1.sum(s2)?,
            },
            (TopologyGrade::Rational(q1), TopologyGrade::Rational(q2)) => {
                TopologyGrade::Rational(match (q1, q2) {
                    (QGrade::Top, _) | (_, QGrade::Top) => QGrade::Top,
                    (QGrade::Generators(a), QGrade::Generators(b)) => {
                        QGrade::Generators(a.union(b).copied().collect())
                    }
                })
            }
            _ => unreachable!("same model implies same variant"),
        })
    }

    /// The meet, within the modeled semilattice: subspace intersection for
    /// vector models, chain minimum, generator intersection for `Q` with
    /// the discrete grade neutral.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.require_same_model(other)?;
        Ok(match (self, other) {
            (TopologyGrade::Compact, TopologyGrade::Compact) => TopologyGrade::Compact,
            (
                TopologyGrade::TwoPoint { model, level: l1 },
                TopologyGrade::TwoPoint { level: l2, .. },
            ) => TopologyGrade::TwoPoint {
                model: *model,
                level: (*l1).min(*l2),
            },
            (TopologyGrade::Axb(l1), TopologyGrade::Axb(l2)) => {
                TopologyGrade::Axb((*l1).min(*l2))
            }
            (
                TopologyGrade::Vector { group, space: s1 },
                TopologyGrade::Vector { space: s2, .. },
            ) => TopologyGrade::Vector {
                group: *group,
                space: s1.intersect(s2)?,
            },
            (TopologyGrade::Rational(q1), TopologyGrade::Rational(q2)) => {
                TopologyGrade::Rational(match (q1, q2) {
                    (QGrade::Top, g) | (g, QGrade::Top) => g.clone(),
                    (QGrade::Generators(a), QGrade::Generators(b)) => {
                        QGrade::Generators(a.intersection(b).copied().collect())
                    }
                })
            }
            _ => unreachable!("same model implies same variant"),
        })
    }

    /// The order induced by joins: `a <= b` iff `a ∨ b = b`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        Ok(self.join(other)? == *other)
    }
}

impl std::fmt::Display for TopologyGrade {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TopologyGrade::Compact => write!(f, "full"),
            TopologyGrade::TwoPoint { level, .. } => match level {
                ChainLevel::Ap => write!(f, "ap"),
                ChainLevel::Full => write!(f, "full"),
            },
            TopologyGrade::Axb(level) => match level {
                AxbLevel::Ap => write!(f, "ap"),
                AxbLevel::RealLine => write!(f, "realline"),
                AxbLevel::Full => write!(f, "full"),
            },
            TopologyGrade::Vector { space, .. } => write!(f, "{space}"),
            TopologyGrade::Rational(q) => write!(f, "{q}"),
        }
    }
}

/// A locally precompact topology on a vector-group model before passing to
/// its non-quotient closure: a subspace together with a flag recording
/// whether the almost periodic factor is present. The closure forces the
/// flag on; dropping the factor is the only compact-kernel quotient in the
/// model, while shrinking the subspace has non-compact kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTopologyDescriptor {
    pub group: VectorGroup,
    pub space: RationalSubspace,
    pub include_ap: bool,
}

impl RawTopologyDescriptor {
    pub fn new(group: VectorGroup, space: RationalSubspace, include_ap: bool) -> Self {
        Self {
            group,
            space,
            include_ap,
        }
    }

    /// The non-quotient closure: joining with the almost periodic topology,
    /// which in the model just forces the flag. Idempotent by construction.
    pub fn nq_closure(&self) -> TopologyGrade {
        TopologyGrade::Vector {
            group: self.group,
            space: self.space.clone(),
        }
    }

    /// Is `self` a quotient of `other`? True iff the subspaces agree and
    /// passing from `other` to `self` at most drops the almost periodic
    /// factor (whose kernel, the compactified complement, is compact).
    pub fn is_quotient_of(&self, other: &Self) -> Result<bool> {
        if self.space.ambient_dim() != other.space.ambient_dim() {
            return Err(Error::DimensionMismatch(
                self.space.ambient_dim(),
                other.space.ambient_dim(),
            ));
        }
        Ok(self.space == other.space && (!self.include_ap || other.include_ap))
    }
}

/// The relabeling of a vector-model grade as a topology on the dual group:
/// the same subspace, now read as an open subgroup of the dual. The dual of
/// a join is the intersection of the duals, which on descriptors is again
/// the subspace sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualDescriptor {
    pub group: VectorGroup,
    pub open_subgroup: RationalSubspace,
}

impl DualDescriptor {
    /// The involution back to the grade it describes.
    pub fn dual(&self) -> TopologyGrade {
        TopologyGrade::Vector {
            group: self.group,
            space: self.open_subgroup.clone(),
        }
    }
}

/// Relabels a vector-model grade as the dual-group topology it induces.
pub fn dual_descriptor(grade: &TopologyGrade) -> Result<DualDescriptor> {
    match grade {
        TopologyGrade::Vector { group, space } => Ok(DualDescriptor {
            group: *group,
            open_subgroup: space.clone(),
        }),
        other => Err(Error::UnsupportedScope(format!(
            "dual descriptors are defined for vector-model grades, not {}",
            other.model()
        ))),
    }
}

/// A finite portion of a model's grade semilattice, with the abstract
/// semilattice and the concrete grades index-aligned.
#[derive(Debug, Clone)]
pub struct ModelSemilattice {
    model: Model,
    grades: Vec<TopologyGrade>,
    semilattice: FiniteSemilattice,
}

impl ModelSemilattice {
    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn grades(&self) -> &[TopologyGrade] {
        &self.grades
    }

    pub fn semilattice(&self) -> &FiniteSemilattice {
        &self.semilattice
    }

    pub fn grade(&self, id: usize) -> Result<&TopologyGrade> {
        self.grades.get(id).ok_or(Error::UnknownElement(id))
    }

    pub fn grade_index(&self, grade: &TopologyGrade) -> Option<usize> {
        self.grades.iter().position(|g| g == grade)
    }

    pub fn principal_hereditary(&self, grade: &TopologyGrade) -> Result<HereditarySet> {
        let id = self
            .grade_index(grade)
            .ok_or_else(|| Error::Malformed(format!("grade {grade} not in this restriction")))?;
        self.semilattice.principal_set(id)
    }
}

/// The result of enumerating a model's grades: an explicit finite
/// semilattice, or a symbolic description for the infinite models.
#[derive(Debug, Clone)]
pub enum GradeEnumeration {
    Finite(ModelSemilattice),
    Symbolic(String),
}

/// Enumerates the grades of a model. The finite families come back as
/// explicit semilattices; `R^n`, `Z^n` and `Q` are infinite and come back
/// as symbolic descriptions, with [`restrict_to_generators`] providing
/// finite restrictions on demand.
pub fn enumerate_grades(model: &Model) -> Result<GradeEnumeration> {
    match model {
        Model::Compact | Model::RealLine | Model::IntegerLine | Model::MinWap => {
            Ok(GradeEnumeration::Finite(restrict_to_generators(
                model,
                &[TopologyGrade::top(model)],
            )?))
        }
        Model::Axb => Ok(GradeEnumeration::Finite(restrict_to_generators(
            model,
            &[
                TopologyGrade::Axb(AxbLevel::RealLine),
                TopologyGrade::Axb(AxbLevel::Full),
            ],
        )?)),
        Model::Vector { dim, .. } => Ok(GradeEnumeration::Symbolic(format!(
            "the subspace lattice of Q^{dim}: grades are rational subspaces, join = sum, meet = intersection"
        ))),
        Model::Rationals => Ok(GradeEnumeration::Symbolic(
            "free semilattice on the real grade and one grade per prime, plus the absorbing \
             discrete grade TOP; a proper sub-semilattice of the full grade semilattice"
                .to_string(),
        )),
    }
}

/// Closes `{unit} ∪ generators` under joins and returns the resulting
/// finite semilattice, with grades sorted by display form and the unit
/// first. All generators must belong to `model`.
pub fn restrict_to_generators(
    model: &Model,
    generators: &[TopologyGrade],
) -> Result<ModelSemilattice> {
    for g in generators {
        if g.model() != *model {
            return Err(Error::ModelMismatch(model.to_string(), g.model().to_string()));
        }
    }
    let unit = TopologyGrade::unit(model);
    let mut elements: Vec<TopologyGrade> = vec![unit.clone()];
    for g in generators {
        if !elements.contains(g) {
            elements.push(g.clone());
        }
    }
    loop {
        let mut added = false;
        let snapshot = elements.clone();
        for a in &snapshot {
            for b in &snapshot {
                let j = a.join(b)?;
                if !elements.contains(&j) {
                    elements.push(j);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
        if elements.len() > 4096 {
            return Err(Error::SizeLimit {
                size: elements.len(),
                limit: 4096,
            });
        }
    }
    // deterministic order: unit first, then by display form
    let mut rest: Vec<TopologyGrade> = elements
        .iter()
        .filter(|g| **g != unit)
        .cloned()
        .collect();
    rest.sort_by_key(|g| g.to_string());
    let mut grades = vec![unit];
    grades.extend(rest);

    let labels: Vec<String> = grades.iter().map(|g| g.to_string()).collect();
    let index_of = |g: &TopologyGrade| grades.iter().position(|h| h == g).unwrap();
    let mut table = Vec::with_capacity(grades.len() * grades.len());
    for a in &grades {
        for b in &grades {
            table.push(index_of(&a.join(b)?));
        }
    }
    let semilattice = FiniteSemilattice::new(labels, table, Some(0))?;
    Ok(ModelSemilattice {
        model: model.clone(),
        grades,
        semilattice,
    })
}
