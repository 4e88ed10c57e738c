//! Exact rational subspaces of Q^n in a canonical reduced-row-echelon form.
//!
//! The subspace lattice of Q^n under sum and intersection is the backbone of
//! the vector-group topology models: joins of grades are subspace sums, meets
//! are intersections. Canonical forms make grade equality a bit-comparison.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{format_rat, parse_rat, Rat};

/// A linear subspace of Q^n, stored as a basis in reduced row echelon form
/// with pivot-leading rows sorted by pivot column and no zero rows.
///
/// Two values are equal iff they denote the same subspace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalSubspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

/// Reduced row echelon form, in place. Returns the pivot columns.
pub(crate) fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let sub = &rows[r][j] * &factor;
                    rows[i][j] = &rows[i][j] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    pivots
}

/// Basis of the kernel of the linear map given by `rows` (as a matrix acting
/// on column vectors of length `ncols`).
pub(crate) fn kernel_basis(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let pivots = rref(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Rat::zero(); ncols];
        v[fc] = Rat::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[ri][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves a square full-rank rational system `a x = b`; `None` when the
/// matrix is singular.
pub(crate) fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[ri][n].clone();
    }
    Some(x)
}

impl RationalSubspace {
    /// Canonicalizes an arbitrary spanning set. Rows need not be independent.
    pub fn from_rows(ambient: usize, rows: Vec<Vec<Rat>>) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::Malformed("ambient dimension must be >= 1".into()));
        }
        for row in &rows {
            if row.len() != ambient {
                return Err(Error::DimensionMismatch(row.len(), ambient));
            }
        }
        let mut basis = rows;
        rref(&mut basis);
        Ok(Self { ambient, basis })
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut row = vec![Rat::zero(); ambient];
                row[i] = Rat::one();
                row
            })
            .collect();
        Self { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Canonical basis rows (reduced row echelon form).
    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rat]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(v.len(), self.ambient));
        }
        // reduce v against the echelon basis
        let mut v = v.to_vec();
        for row in &self.basis {
            let pc = row.iter().position(|x| !x.is_zero()).expect("no zero rows");
            if !v[pc].is_zero() {
                let factor = v[pc].clone();
                for j in 0..self.ambient {
                    let sub = &row[j] * &factor;
                    v[j] = &v[j] - sub;
                }
            }
        }
        Ok(v.iter().all(|x| x.is_zero()))
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(self.ambient, other.ambient));
        }
        for row in &self.basis {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Subspace sum: canonical form of `span(self ∪ other)`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(self.ambient, other.ambient));
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::from_rows(self.ambient, rows)
    }

    /// Subspace intersection, computed through the kernel of the stacked
    /// coefficient system: x = a^T B_1 = b^T B_2 iff (a, b) lies in the
    /// kernel of [B_1^T | -B_2^T].
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(self.ambient, other.ambient));
        }
        let (d1, d2) = (self.dim(), other.dim());
        if d1 == 0 || d2 == 0 {
            return Ok(Self::zero(self.ambient));
        }
        // rows of the system: ambient many equations, d1+d2 unknowns
        let mut system = Vec::with_capacity(self.ambient);
        for coord in 0..self.ambient {
            let mut row = Vec::with_capacity(d1 + d2);
            for b in &self.basis {
                row.push(b[coord].clone());
            }
            for b in &other.basis {
                row.push(-b[coord].clone());
            }
            system.push(row);
        }
        let kernel = kernel_basis(&system, d1 + d2);
        let mut rows = Vec::with_capacity(kernel.len());
        for k in kernel {
            let mut v = vec![Rat::zero(); self.ambient];
            for (i, b) in self.basis.iter().enumerate() {
                if !k[i].is_zero() {
                    for (vj, bj) in v.iter_mut().zip(b) {
                        let add = bj * &k[i];
                        *vj = &*vj + add;
                    }
                }
            }
            rows.push(v);
        }
        Self::from_rows(self.ambient, rows)
    }

    /// Preimage `{x in Q^m : A x in self}` of this subspace under the linear
    /// map given by `matrix` (ambient-many rows, m columns).
    pub fn preimage(&self, matrix: &[Vec<Rat>]) -> Result<RationalSubspace> {
        if matrix.len() != self.ambient {
            return Err(Error::ShapeMismatch(format!(
                "matrix has {} rows, expected {}",
                matrix.len(),
                self.ambient
            )));
        }
        let m = matrix.first().map_or(0, |r| r.len());
        if m == 0 || matrix.iter().any(|r| r.len() != m) {
            return Err(Error::ShapeMismatch("ragged or empty matrix".into()));
        }
        // Solve A x - B^T c = 0 over (x, c); the x-part spans the preimage.
        let d = self.dim();
        let mut system = Vec::with_capacity(self.ambient);
        for coord in 0..self.ambient {
            let mut row = Vec::with_capacity(m + d);
            row.extend(matrix[coord].iter().cloned());
            for b in &self.basis {
                row.push(-b[coord].clone());
            }
            system.push(row);
        }
        let kernel = kernel_basis(&system, m + d);
        let rows: Vec<Vec<Rat>> = kernel.into_iter().map(|k| k[..m].to_vec()).collect();
        RationalSubspace::from_rows(m, rows)
    }

    /// `span[[…],[…]]` literal, matching the CLI object syntax.
    pub fn to_span_literal(&self) -> String {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(format_rat).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("span[{}]", rows.join(","))
    }
}

impl std::fmt::Display for RationalSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_span_literal())
    }
}

impl Serialize for RationalSubspace {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .basis
            .iter()
            .map(|row| row.iter().map(format_rat).collect())
            .collect();
        (self.ambient, rows).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RationalSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let (ambient, rows): (usize, Vec<Vec<String>>) = Deserialize::deserialize(de)?;
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let mut r = Vec::with_capacity(row.len());
            for cell in row {
                r.push(parse_rat(&cell).map_err(serde::de::Error::custom)?);
            }
            parsed.push(r);
        }
        RationalSubspace::from_rows(ambient, parsed).map_err(serde::de::Error::custom)
    }
}
