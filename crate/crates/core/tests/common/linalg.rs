//! A small, self-contained rational linear algebra kit used as the
//! independent oracle: plain Gaussian elimination without the canonical
//! sorting or kernel machinery of the library implementation.

use num_traits::Zero;
use spine_core::rat::Rat;

/// Plain row reduction; returns the reduced rows with zero rows kept.
pub fn gauss(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return m;
    }
    let ncols = m[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row == nrows {
            break;
        }
        let mut found = None;
        for r in pivot_row..nrows {
            if !m[r][col].is_zero() {
                found = Some(r);
                break;
            }
        }
        let Some(r) = found else { continue };
        m.swap(pivot_row, r);
        let inv = m[pivot_row][col].clone();
        for x in m[pivot_row].iter_mut() {
            *x = &*x / &inv;
        }
        for r in 0..nrows {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let sub = &m[pivot_row][c] * &f;
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
        pivot_row += 1;
    }
    m
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    gauss(rows)
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .count()
}

/// Is `v` in the row span?
pub fn in_span(rows: &[Vec<Rat>], v: &[Rat]) -> bool {
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    rank(rows) == rank(&with)
}

/// Do two row spans coincide?
pub fn same_span(a: &[Vec<Rat>], b: &[Vec<Rat>], dim: usize) -> bool {
    let _ = dim;
    a.iter().all(|r| in_span(b, r)) && b.iter().all(|r| in_span(a, r))
}

/// A spanning set for the sum of two spans.
pub fn span_sum(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut out = a.to_vec();
    out.extend(b.iter().cloned());
    out
}

/// The orthogonal complement of a row span under the standard bilinear
/// form, by solving the homogeneous system directly.
pub fn orthocomplement(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let reduced = gauss(rows);
    let reduced: Vec<Vec<Rat>> = reduced
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    // free-variable sweep over the reduced system
    let mut pivots = Vec::new();
    for row in &reduced {
        let pc = row.iter().position(|x| !x.is_zero()).unwrap();
        pivots.push(pc);
    }
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); dim];
        v[free] = Rat::from_integer(1.into());
        for (row, &pc) in reduced.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves the normal equations to project `v` orthogonally onto the span
/// of `rows` (which need not be orthogonal or independent).
pub fn orthogonal_projection(rows: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    let dim = v.len();
    let basis: Vec<Vec<Rat>> = gauss(rows)
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    if basis.is_empty() {
        return vec![Rat::zero(); dim];
    }
    let k = basis.len();
    let dot = |a: &[Rat], b: &[Rat]| -> Rat {
        a.iter()
            .zip(b)
            .map(|(x, y)| x * y)
            .fold(Rat::zero(), |s, t| s + t)
    };
    // gram * c = rhs, then projection = sum c_i basis_i
    let gram: Vec<Vec<Rat>> = (0..k)
        .map(|i| (0..k).map(|j| dot(&basis[i], &basis[j])).collect())
        .collect();
    let rhs: Vec<Rat> = (0..k).map(|i| dot(&basis[i], v)).collect();
    let coeffs = solve(&gram, &rhs).expect("gram matrix of independent rows is invertible");
    let mut out = vec![Rat::zero(); dim];
    for (c, b) in coeffs.iter().zip(&basis) {
        for (o, x) in out.iter_mut().zip(b) {
            let add = x * c;
            *o = &*o + add;
        }
    }
    out
}

/// Gaussian solve of a square system.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
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
    for col in 0..n {
        let r = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, r);
        let inv = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = &*x / &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..=n {
                    let sub = &aug[col][c] * &f;
                    aug[r][c] = &aug[r][c] - sub;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}
