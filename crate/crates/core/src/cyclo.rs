//! Exact arithmetic with rational combinations of unit phases
//! `e(q) = exp(2*pi*i*q)`, `q` rational.
//!
//! Character values, trig-polynomial coefficients and every evaluation in
//! this crate live in the ring spanned by roots of unity over Q. A value is
//! stored as a finite sum `sum c_q * e(q)` and kept in a reduced form: phases
//! in `[0,1)` with denominator not congruent to 2 mod 4, and the exponent
//! polynomial reduced modulo the relevant cyclotomic polynomial. Equality and
//! zero tests are exact; conversion to `f64` happens only at the display or
//! tolerance-comparison boundary.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rat::{exact_sqrt, format_rat, frac_mod_one, rat_to_f64, Rat};

/// Largest cyclotomic order the reducer will handle; phases whose common
/// denominator exceeds this are refused rather than silently approximated.
const MAX_ORDER: u64 = 20_000;

/// An exact element of the group ring Q[Q/Z], i.e. a rational combination of
/// unit phases. The canonical form keeps terms sorted by phase.
#[derive(Debug, Clone, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CycRat {
    /// Sorted `(phase, coefficient)` pairs, phases in `[0,1)`, coefficients
    /// non-zero, exponents reduced against the cyclotomic polynomial of the
    /// common order, which is never 2 mod 4.
    terms: Vec<(Rat, Rat)>,
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Vec<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the n-th cyclotomic polynomial, low degree first.
fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    if let Some(hit) = cyclotomic_cache().lock().unwrap().get(&n) {
        return hit.clone();
    }
    let result = if n == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        // (x^n - 1) / prod_{d|n, d<n} Phi_d, exact in Z[x]
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                num = int_poly_div_exact(&num, &cyclotomic_polynomial(d));
            }
        }
        num
    };
    cyclotomic_cache()
        .lock()
        .unwrap()
        .insert(n, result.clone());
    result
}

/// Exact division of integer polynomials (the divisor is monic here since
/// every cyclotomic polynomial is monic).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (dd..=dn).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        quot[k - dd] = c.clone();
        for j in 0..=dd {
            let sub = &den[j] * &c;
            rem[k - dd + j] -= sub;
        }
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    quot
}

/// Remainder of a rational polynomial modulo a monic integer polynomial.
fn poly_rem(mut p: Vec<Rat>, modulus: &[BigInt]) -> Vec<Rat> {
    let dd = modulus.len() - 1;
    while p.len() > dd {
        let k = p.len() - 1;
        let c = p[k].clone();
        if !c.is_zero() {
            for j in 0..dd {
                let m = Rat::from_integer(modulus[j].clone());
                let sub = &m * &c;
                p[k - dd + j] = &p[k - dd + j] - sub;
            }
        }
        p.truncate(k);
    }
    p
}

fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Rewrites `e(k/d)` with `d = 2m`, `m` odd, as `-e(k'/m)`. Applied only
/// when the common order of a whole term list is 2 mod 4, where Q(zeta_2m)
/// equals Q(zeta_m) and the smaller order is the canonical one. Inside an
/// order divisible by 4 the power basis legitimately contains such phases
/// and they must be left alone.
fn halve_even_order(q: Rat, c: Rat) -> (Rat, Rat) {
    let d = q.denom();
    if (d % BigInt::from(4)) == BigInt::from(2) {
        let m = d / BigInt::from(2);
        let k = q.numer().clone();
        let new_num = (&k + &m) / BigInt::from(2);
        let q2 = frac_mod_one(&Rat::new(new_num, m));
        (q2, -c)
    } else {
        (q, c)
    }
}

impl CycRat {
    pub fn zero() -> Self {
        CycRat { terms: Vec::new() }
    }

    pub fn one() -> Self {
        CycRat::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        if r.is_zero() {
            CycRat::zero()
        } else {
            CycRat {
                terms: vec![(Rat::zero(), r)],
            }
        }
    }

    pub fn from_gaussian(re: Rat, im: Rat) -> Self {
        let mut terms = Vec::new();
        if !re.is_zero() {
            terms.push((Rat::zero(), re));
        }
        if !im.is_zero() {
            terms.push((Rat::new(BigInt::one(), BigInt::from(4)), im));
        }
        CycRat { terms }
    }

    /// The unit phase `e(q) = exp(2*pi*i*q)`. Phases compose additively
    /// modulo 1: `unit_phase(a) * unit_phase(b) = unit_phase(a + b)`.
    pub fn unit_phase(q: &Rat) -> Self {
        Self::build(vec![(q.clone(), Rat::one())]).expect("single phase is always reducible")
    }

    pub fn i() -> Self {
        Self::from_gaussian(Rat::zero(), Rat::one())
    }

    /// Canonicalizes a raw term list. Fails only if the common phase
    /// denominator exceeds [`MAX_ORDER`].
    pub fn build(raw: Vec<(Rat, Rat)>) -> Result<Self> {
        let mut terms = raw;
        loop {
            // fold phases into [0,1) and combine like phases
            let mut map: BTreeMap<Rat, Rat> = BTreeMap::new();
            for (q, c) in terms {
                if c.is_zero() {
                    continue;
                }
                let q = frac_mod_one(&q);
                let entry = map.entry(q).or_insert_with(Rat::zero);
                *entry = &*entry + c;
            }
            map.retain(|_, c| !c.is_zero());
            let mut n: u64 = 1;
            for q in map.keys() {
                let d = q.denom().to_u64().ok_or_else(|| {
                    Error::Malformed("phase denominator out of range".into())
                })?;
                n = n.lcm(&d);
                if n > MAX_ORDER {
                    return Err(Error::Malformed(format!(
                        "phase order {n} exceeds supported maximum {MAX_ORDER}"
                    )));
                }
            }
            if n % 4 == 2 {
                // order 2m with m odd: canonicalize into order m and restart
                terms = map
                    .into_iter()
                    .map(|(q, c)| halve_even_order(q, c))
                    .collect();
                continue;
            }
            terms = map.into_iter().collect();
            if n == 1 {
                return Ok(CycRat { terms });
            }
            let phi = euler_phi(n);
            let exponent = |q: &Rat| {
                (q * Rat::from_integer(BigInt::from(n)))
                    .to_integer()
                    .to_u64()
                    .expect("exponent fits") as usize
            };
            if terms.iter().all(|(q, _)| exponent(q) < phi as usize) {
                return Ok(CycRat { terms });
            }
            let mut p = vec![Rat::zero(); n as usize];
            for (q, c) in &terms {
                let e = exponent(q);
                p[e] = &p[e] + c;
            }
            let rem = poly_rem(p, &cyclotomic_polynomial(n));
            terms = rem
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (Rat::new(BigInt::from(e), BigInt::from(n)), c))
                .collect();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(r)` iff the value is a plain rational.
    pub fn as_rational(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(q, c)] if q.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    /// `Some((re, im))` iff the value lies in Q(i).
    pub fn as_gaussian(&self) -> Option<(Rat, Rat)> {
        let quarter = Rat::new(BigInt::one(), BigInt::from(4));
        let mut re = Rat::zero();
        let mut im = Rat::zero();
        for (q, c) in &self.terms {
            if q.is_zero() {
                re = c.clone();
            } else if *q == quarter {
                im = c.clone();
            } else {
                return None;
            }
        }
        Some((re, im))
    }

    pub fn terms(&self) -> &[(Rat, Rat)] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut raw = self.terms.clone();
        raw.extend(other.terms.iter().cloned());
        Self::build(raw).expect("sum of reduced values stays in range")
    }

    pub fn neg(&self) -> Self {
        CycRat {
            terms: self.terms.iter().map(|(q, c)| (q.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (q1, c1) in &self.terms {
            for (q2, c2) in &other.terms {
                raw.push((q1 + q2, c1 * c2));
            }
        }
        Self::build(raw).expect("product of reduced values stays in range")
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return CycRat::zero();
        }
        CycRat {
            terms: self.terms.iter().map(|(q, c)| (q.clone(), c * r)).collect(),
        }
    }

    /// Complex conjugate: `e(q)` maps to `e(-q)`.
    pub fn conj(&self) -> Self {
        Self::build(
            self.terms
                .iter()
                .map(|(q, c)| (-q.clone(), c.clone()))
                .collect(),
        )
        .expect("conjugate stays in range")
    }

    /// `|v|^2 = v * conj(v)`, exact.
    pub fn modulus_squared(&self) -> Self {
        self.mul(&self.conj())
    }

    /// The modulus, exact when it is rational.
    pub fn modulus(&self) -> NormValue {
        let m2 = self.modulus_squared();
        match m2.as_rational().and_then(|r| exact_sqrt(&r)) {
            Some(r) => NormValue::Exact(r),
            None => {
                let (re, im) = self.to_complex_f64();
                NormValue::Approx((re * re + im * im).sqrt())
            }
        }
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (q, c) in &self.terms {
            let angle = 2.0 * std::f64::consts::PI * rat_to_f64(q);
            let cf = rat_to_f64(c);
            re += cf * angle.cos();
            im += cf * angle.sin();
        }
        (re, im)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let (ar, ai) = self.to_complex_f64();
        let (br, bi) = other.to_complex_f64();
        (ar - br).abs() <= tol && (ai - bi).abs() <= tol
    }
}

impl PartialEq for CycRat {
    fn eq(&self, other: &Self) -> bool {
        // structural equality on canonical forms is sound; the difference
        // test keeps it complete even across distinct reduced spellings
        self.terms == other.terms || self.sub(other).is_zero()
    }
}

impl std::fmt::Display for CycRat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(q, c)| {
                if q.is_zero() {
                    format_rat(c)
                } else if c.is_one() {
                    format!("e({})", format_rat(q))
                } else {
                    format!("{}*e({})", format_rat(c), format_rat(q))
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// A coefficient norm: exact where the modulus is rational, `f64` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum NormValue {
    Exact(Rat),
    Approx(f64),
}

impl NormValue {
    pub fn zero() -> Self {
        NormValue::Exact(Rat::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => NormValue::Exact(a + b),
            _ => NormValue::Approx(self.to_f64() + other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => NormValue::Exact(a * b),
            _ => NormValue::Approx(self.to_f64() * other.to_f64()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(r) => rat_to_f64(r),
            NormValue::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            NormValue::Exact(r) => Some(r),
            NormValue::Approx(_) => None,
        }
    }

    /// `self <= other`, exactly when both sides are exact, within `tol`
    /// otherwise.
    pub fn le(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => a <= b,
            _ => self.to_f64() <= other.to_f64() + tol,
        }
    }
}

impl std::fmt::Display for NormValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormValue::Exact(r) => write!(f, "{}", format_rat(r)),
            NormValue::Approx(x) => write!(f, "{:.12e}", x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn e(n: i64, d: i64) -> CycRat {
        CycRat::unit_phase(&rat(n, d))
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.into_iter().map(|x| x.to_i64().unwrap()).collect()
        };
        assert_eq!(as_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        // 1 + e(1/3) + e(2/3) = 0
        let s = CycRat::one().add(&e(1, 3)).add(&e(2, 3));
        assert!(s.is_zero());
        // fifth roots too
        let mut s = CycRat::zero();
        for k in 0..5 {
            s = s.add(&e(k, 5));
        }
        assert!(s.is_zero());
    }

    #[test]
    fn half_phase_is_minus_one() {
        assert_eq!(e(1, 2), CycRat::from_rat(int(-1)));
        assert_eq!(e(1, 4).mul(&e(1, 4)), CycRat::from_rat(int(-1)));
        assert_eq!(e(1, 4), CycRat::i());
    }

    #[test]
    fn phases_compose_additively() {
        assert_eq!(e(1, 3).mul(&e(1, 3)), e(2, 3));
        assert_eq!(e(2, 3).mul(&e(1, 3)), CycRat::one());
        assert_eq!(e(1, 8).mul(&e(1, 8)), e(1, 4));
        // 2 cos(pi/3) = 1, via e(1/6) + e(-1/6)
        let c = e(1, 6).add(&e(-1, 6));
        assert_eq!(c.as_rational(), Some(int(1)));
    }

    #[test]
    fn gaussian_detection() {
        let z = CycRat::from_gaussian(rat(1, 2), rat(-3, 4));
        assert_eq!(z.as_gaussian(), Some((rat(1, 2), rat(-3, 4))));
        assert_eq!(e(1, 3).as_gaussian(), None);
        assert_eq!(z.as_rational(), None);
    }

    #[test]
    fn conjugation_and_modulus() {
        let z = CycRat::from_gaussian(int(3), int(4));
        assert_eq!(z.modulus_squared().as_rational(), Some(int(25)));
        assert_eq!(z.modulus(), NormValue::Exact(int(5)));
        // |e(q)| = 1 for every phase
        assert_eq!(e(1, 3).modulus(), NormValue::Exact(int(1)));
        // 1 + e(1/5) has irrational modulus
        let v = CycRat::one().add(&e(1, 5));
        assert!(matches!(v.modulus(), NormValue::Approx(_)));
        let (re, im) = v.to_complex_f64();
        let expect = ((1.0 + (0.4 * std::f64::consts::PI).cos()).powi(2)
            + (0.4 * std::f64::consts::PI).sin().powi(2))
        .sqrt();
        assert!(((re * re + im * im).sqrt() - expect).abs() < 1e-12);
    }

    #[test]
    fn semantic_equality_across_spellings() {
        // e(1/6) = -e(2/3): both normalize to the same reduced form
        let a = e(1, 6);
        let b = e(2, 3).neg();
        assert_eq!(a, b);
        // i * e(1/12) = e(1/3)
        let c = CycRat::i().mul(&e(1, 12));
        assert_eq!(c, e(1, 3));
    }

    #[test]
    fn ring_axioms_on_samples() {
        let xs = [
            CycRat::one(),
            e(1, 3),
            CycRat::from_gaussian(rat(1, 2), int(-2)),
            e(3, 8).scale(&rat(2, 7)),
            CycRat::zero(),
        ];
        for a in &xs {
            for b in &xs {
                assert_eq!(a.add(b), b.add(a));
                assert_eq!(a.mul(b), b.mul(a));
                for c in &xs {
                    assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
                    assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                    assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
                }
            }
        }
    }

    #[test]
    fn display_is_stable() {
        assert_eq!(CycRat::zero().to_string(), "0");
        assert_eq!(CycRat::one().to_string(), "1");
        assert_eq!(e(1, 3).scale(&rat(-2, 3)).to_string(), "-2/3*e(1/3)");
        assert_eq!(
            CycRat::from_gaussian(int(1), int(1)).to_string(),
            "1 + e(1/4)"
        );
    }
}
