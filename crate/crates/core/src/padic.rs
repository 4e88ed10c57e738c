//! p-adic valuations and norms on the rationals, exact.
//!
//! These witness the pairwise distinctness of the prime grades in the `Q`
//! model: the sequence `r_n = p^n / q^n` is p-adically small and q-adically
//! large, separating the completions.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Deterministic trial-division primality test, adequate for the word-sized
/// primes this crate deals with.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |dd| dd <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The value of a p-adic valuation; zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

fn int_valuation(x: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!x.is_zero());
    let mut v = 0i64;
    let mut cur = x.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&cur, p);
        if r.is_zero() {
            v += 1;
            cur = q;
        } else {
            return v;
        }
    }
}

/// The exponent of `p` in `r`, with `nu_p(0)` reported as the distinguished
/// infinite value rather than an error.
pub fn nu_p(p: u64, r: &Rat) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let p = BigInt::from(p);
    Ok(Valuation::Finite(
        int_valuation(r.numer(), &p) - int_valuation(r.denom(), &p),
    ))
}

/// The p-adic norm `p^(-nu_p(r))`, exact, with `abs_p(0) = 0`.
pub fn abs_p(p: u64, r: &Rat) -> Result<Rat> {
    match nu_p(p, r)? {
        Valuation::Infinite => Ok(Rat::zero()),
        Valuation::Finite(v) => {
            let pk = BigInt::from(p).pow(v.unsigned_abs() as u32);
            Ok(if v >= 0 {
                Rat::new(BigInt::one(), pk)
            } else {
                Rat::from_integer(pk)
            })
        }
    }
}

/// A checked record of one valuation computation: `r = p^valuation * (a/b)`
/// with `a`, `b` coprime to `p`, and `norm = p^(-valuation)` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicWitness {
    pub p: u64,
    pub r: Rat,
    pub valuation: i64,
    pub norm: Rat,
}

impl PAdicWitness {
    pub fn new(p: u64, r: Rat) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::Malformed(
                "p-adic witnesses require a non-zero rational".into(),
            ));
        }
        let Valuation::Finite(valuation) = nu_p(p, &r)? else {
            unreachable!("non-zero rationals have finite valuation")
        };
        let norm = abs_p(p, &r)?;
        Ok(Self {
            p,
            r,
            valuation,
            norm,
        })
    }
}

/// One row of the distinctness table for a pair of primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRow {
    pub n: u32,
    pub r: Rat,
    pub abs_p: Rat,
    pub abs_q: Rat,
}

/// For distinct primes `p`, `q` tabulates `r_n = p^n / q^n` together with
/// `|r_n|_p = p^(-n)` (tending to 0) and `|r_n|_q = q^n` (unbounded),
/// exactly, for `1 <= n <= n_max`.
pub fn q_distinctness_witness(p: u64, q: u64, n_max: u32) -> Result<Vec<WitnessRow>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if p == q {
        return Err(Error::EqualPrimes(p));
    }
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let r = Rat::new(BigInt::from(p).pow(n), BigInt::from(q).pow(n));
        rows.push(WitnessRow {
            n,
            abs_p: abs_p(p, &r)?,
            abs_q: abs_p(q, &r)?,
            r,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn valuation_of_twelve() {
        // 12 = 2^2 * 3
        assert_eq!(nu_p(2, &int(12)).unwrap(), Valuation::Finite(2));
        assert_eq!(abs_p(2, &int(12)).unwrap(), rat(1, 4));
        assert_eq!(nu_p(3, &int(12)).unwrap(), Valuation::Finite(1));
    }

    #[test]
    fn valuation_of_one_and_zero() {
        assert_eq!(nu_p(5, &int(1)).unwrap(), Valuation::Finite(0));
        assert_eq!(abs_p(5, &int(1)).unwrap(), int(1));
        assert_eq!(nu_p(5, &int(0)).unwrap(), Valuation::Infinite);
        assert_eq!(abs_p(5, &int(0)).unwrap(), int(0));
    }

    #[test]
    fn negative_valuations() {
        // 2/9 = 3^(-2) * 2
        assert_eq!(nu_p(3, &rat(2, 9)).unwrap(), Valuation::Finite(-2));
        assert_eq!(abs_p(3, &rat(2, 9)).unwrap(), int(9));
    }

    #[test]
    fn non_prime_is_rejected() {
        assert!(matches!(nu_p(6, &int(5)), Err(Error::NotPrime(6))));
        assert!(matches!(nu_p(1, &int(5)), Err(Error::NotPrime(1))));
    }

    #[test]
    fn witness_struct_checks_its_invariants() {
        let w = PAdicWitness::new(2, rat(12, 5)).unwrap();
        assert_eq!(w.valuation, 2);
        assert_eq!(w.norm, rat(1, 4));
        // r * p^(-v) has numerator and denominator coprime to p
        let reduced = &w.r / Rat::from_integer(BigInt::from(2).pow(2));
        assert_eq!(nu_p(2, &reduced).unwrap(), Valuation::Finite(0));
        assert!(PAdicWitness::new(2, int(0)).is_err());
    }

    #[test]
    fn distinctness_table() {
        let rows = q_distinctness_witness(2, 3, 20).unwrap();
        assert_eq!(rows.len(), 20);
        assert_eq!(rows[0].abs_p, rat(1, 2));
        assert_eq!(rows[0].abs_q, int(3));
        let last = &rows[19];
        assert_eq!(last.abs_p, Rat::new(BigInt::one(), BigInt::from(2).pow(20)));
        assert_eq!(last.abs_q, Rat::from_integer(BigInt::from(3).pow(20)));
        // monotone separation
        for w in rows.windows(2) {
            assert!(w[1].abs_p < w[0].abs_p);
            assert!(w[1].abs_q > w[0].abs_q);
        }
        assert!(matches!(
            q_distinctness_witness(2, 2, 3),
            Err(Error::EqualPrimes(2))
        ));
    }

    #[test]
    fn multiplicativity_and_ultrametric_samples() {
        let xs = [rat(3, 4), rat(-7, 18), int(10), rat(1, 2), rat(25, 9)];
        for p in [2u64, 3, 5] {
            for a in &xs {
                for b in &xs {
                    let prod = a * b;
                    assert_eq!(
                        abs_p(p, &prod).unwrap(),
                        abs_p(p, a).unwrap() * abs_p(p, b).unwrap()
                    );
                    let sum = a + b;
                    let bound = abs_p(p, a).unwrap().max(abs_p(p, b).unwrap());
                    assert!(abs_p(p, &sum).unwrap() <= bound);
                }
            }
        }
    }
}
