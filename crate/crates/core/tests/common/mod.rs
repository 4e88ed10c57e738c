//! Shared helpers for the integration suites: an independent naive linear
//! algebra kit (kept deliberately separate from the library's
//! implementation) and the projection-formula evaluation oracle for the
//! vector-model spine product.

#![allow(dead_code)]

pub mod linalg;

use num_bigint::BigInt;
use rand::Rng;
use spine_core::cyclo::CycRat;
use spine_core::rat::Rat;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// A random rational with small numerator and denominator.
pub fn random_rat<R: Rng>(rng: &mut R, num_bound: i64, denoms: &[i64]) -> Rat {
    let n = rng.gen_range(-num_bound..=num_bound);
    let d = denoms[rng.gen_range(0..denoms.len())];
    rat(n, d)
}

/// A random integer-entry vector.
pub fn random_int_vec<R: Rng>(rng: &mut R, len: usize, bound: i64) -> Vec<Rat> {
    (0..len).map(|_| int(rng.gen_range(-bound..=bound))).collect()
}

/// The character value `e(theta . v)`, exact.
pub fn character_value(theta: &[Rat], v: &[Rat]) -> CycRat {
    let phase = theta
        .iter()
        .zip(v)
        .map(|(a, b)| a * b)
        .fold(int(0), |acc, x| acc + x);
    CycRat::unit_phase(&phase)
}

/// Evaluates the rational character `theta` on the projection-formula
/// product of the spine points `(L, v)` and `(M, w)` of the plane model:
/// both points decompose orthogonally along their grade subspaces, the
/// product's vector part is the projection of the sum onto the
/// intersection, and everything else lands in the almost periodic factor.
/// All projections here come from the naive kit.
pub fn projection_formula_eval(
    l: &[Vec<Rat>],
    v: &[Rat],
    m: &[Vec<Rat>],
    w: &[Rat],
    theta: &[Rat],
) -> CycRat {
    let dim = v.len();
    // orthogonal decompositions of the representatives at their own grades
    let v_l = linalg::orthogonal_projection(l, v);
    let v_perp: Vec<Rat> = v.iter().zip(&v_l).map(|(a, b)| a - b).collect();
    let w_m = linalg::orthogonal_projection(m, w);
    let w_perp: Vec<Rat> = w.iter().zip(&w_m).map(|(a, b)| a - b).collect();

    // the intersection through orthocomplements: (L^perp + M^perp)^perp
    let l_perp = linalg::orthocomplement(l, dim);
    let m_perp = linalg::orthocomplement(m, dim);
    let mut stacked = l_perp.clone();
    stacked.extend(m_perp.iter().cloned());
    let inter = linalg::orthocomplement(&stacked, dim);

    // vector component: projections of the two grade components onto the
    // intersection; the complementary parts join the compact factor
    let p_vl = linalg::orthogonal_projection(&inter, &v_l);
    let p_wm = linalg::orthogonal_projection(&inter, &w_m);
    let vector_part: Vec<Rat> = p_vl.iter().zip(&p_wm).map(|(a, b)| a + b).collect();

    let q_vl: Vec<Rat> = v_l.iter().zip(&p_vl).map(|(a, b)| a - b).collect();
    let q_wm: Vec<Rat> = w_m.iter().zip(&p_wm).map(|(a, b)| a - b).collect();
    let compact_part: Vec<Rat> = (0..dim)
        .map(|i| &q_vl[i] + &v_perp[i] + &q_wm[i] + &w_perp[i])
        .collect();

    character_value(theta, &vector_part).mul(&character_value(theta, &compact_part))
}
